//! Theorem-verification campaigns and the built-in example corpus.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::dsl::{parse_file, AlgebraSpecFile, Directive, DirectiveArg};
use super::enumerate::{enumerate_algebras, EnumerationJob, Predicate};
use super::report::{
    algebra_json, hom_json, membership_json, push_checked, representation_json, similarity_json, submodule_json, Item,
    Report, Status,
};
use crate::algcore::{direct_product, iso_search, subalgebra_of_span, FiniteAlgebra, IsoOutcome, Submodule, DEFAULT_ISO_NODE_CAP};
use crate::error::{Error, Result};
use crate::idealth::{
    all_ideals, annihilator, ideal_product, is_ideal, is_prime, is_semiprime, is_simple, monolith, monolith_from_lattice,
    power, prime_report, DEFAULT_LATTICE_CAP,
};
use crate::modring::ReducedMatrix;
use crate::sigterm::parse_polynomial;
use crate::structure::{
    is_critical_with, is_monolithic, minimal_ideals, minimal_representation, minrep_properties, prime_section_witness_in,
    similarity_check, verify_similar_monoliths_in, Checked, Similarity, TheoremViolation, DEFAULT_SUBALGEBRA_CAP,
};
use crate::variety::{id_equal_with, relatively_free, var_member_with, Membership, MembershipOptions};

/// Built-in corpus sources (the files under `algebras/`).
pub const CORPUS: &[(&str, &str)] = &[
    ("example4.alg", include_str!("../../../../algebras/example4.alg")),
    ("sl2.alg", include_str!("../../../../algebras/sl2.alg")),
    ("heisenberg.alg", include_str!("../../../../algebras/heisenberg.alg")),
    ("fields.alg", include_str!("../../../../algebras/fields.alg")),
    ("f3.alg", include_str!("../../../../algebras/f3.alg")),
    ("f4.alg", include_str!("../../../../algebras/f4.alg")),
];

pub fn corpus_files() -> Vec<(&'static str, AlgebraSpecFile)> {
    CORPUS.iter().map(|(n, s)| (*n, parse_file(s).expect("built-in corpus parses"))).collect()
}

pub fn corpus_algebra(file: &str, name: &str) -> FiniteAlgebra {
    let src = CORPUS.iter().find(|(n, _)| *n == file).expect("known corpus file").1;
    parse_file(src).expect("built-in corpus parses").algebra(name).expect("known algebra").clone()
}

/// Theorem checks that can be fed a corrupted structure table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pathway {
    PrimeTests,
    PrimeCritical,
    CriticalMonolithic,
    MainPrime,
    CriticalGeneration,
    Similarity,
    SimilarMonoliths,
    PrimeCorollary,
    PrimeSection,
    Minrep,
}

impl Pathway {
    pub const ALL: [Pathway; 10] = [
        Pathway::PrimeTests,
        Pathway::PrimeCritical,
        Pathway::CriticalMonolithic,
        Pathway::MainPrime,
        Pathway::CriticalGeneration,
        Pathway::Similarity,
        Pathway::SimilarMonoliths,
        Pathway::PrimeCorollary,
        Pathway::PrimeSection,
        Pathway::Minrep,
    ];
}

/// `A` with every table entry set to zero.
pub fn zero_tables(a: &FiniteAlgebra) -> FiniteAlgebra {
    FiniteAlgebra::builder(a.ring(), a.sig(), a.orders().to_vec())
        .names(a.names().to_vec())
        .build()
        .expect("the zero table is valid")
}

#[derive(Debug, Clone)]
pub struct HarnessOptions {
    pub membership: MembershipOptions,
    pub subalgebra_cap: usize,
    pub lattice_cap: usize,
    /// Fault injection for testing the violation detectors.
    pub fault: Option<Pathway>,
}

impl HarnessOptions {
    fn faulty(&self, p: Pathway, a: &FiniteAlgebra) -> FiniteAlgebra {
        if self.fault == Some(p) {
            zero_tables(a)
        } else {
            a.clone()
        }
    }
}

impl Default for HarnessOptions {
    fn default() -> Self {
        HarnessOptions {
            membership: MembershipOptions::default(),
            subalgebra_cap: DEFAULT_SUBALGEBRA_CAP,
            lattice_cap: DEFAULT_LATTICE_CAP,
            fault: None,
        }
    }
}

/// Counts of re-verified membership certificates.
#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct Audit {
    pub member_checked: usize,
    pub member_failed: usize,
    pub non_member_checked: usize,
    pub non_member_failed: usize,
}

impl Audit {
    pub fn record(&mut self, b: &FiniteAlgebra, family: &[FiniteAlgebra], m: &Membership) {
        let ok = m.verify(b, family).is_ok();
        match m {
            Membership::Member(_) => {
                self.member_checked += 1;
                self.member_failed += usize::from(!ok);
            }
            Membership::NonMember(_) => {
                self.non_member_checked += 1;
                self.non_member_failed += usize::from(!ok);
            }
            Membership::Undecided { .. } => {}
        }
    }

    pub fn merge(&mut self, o: &Audit) {
        self.member_checked += o.member_checked;
        self.member_failed += o.member_failed;
        self.non_member_checked += o.non_member_checked;
        self.non_member_failed += o.non_member_failed;
    }

    pub fn clean(&self) -> bool {
        self.member_failed == 0 && self.non_member_failed == 0
    }
}

/// A report section together with its certificate audit.
pub struct Campaign {
    pub report: Report,
    pub audit: Audit,
}

impl Campaign {
    fn new(command: &str, opts: &HarnessOptions) -> Self {
        Campaign { report: Report::new(command, opts.membership.seed), audit: Audit::default() }
    }

    fn member(&mut self, b: &FiniteAlgebra, family: &[FiniteAlgebra], opts: &HarnessOptions) -> Result<Membership> {
        let m = var_member_with(b, family, &opts.membership)?;
        self.audit.record(b, family, &m);
        Ok(m)
    }

    fn id_equal(&mut self, a: &FiniteAlgebra, b: &FiniteAlgebra, opts: &HarnessOptions) -> Result<Option<bool>> {
        let e = id_equal_with(a, b, &opts.membership)?;
        self.audit.record(a, std::slice::from_ref(b), &e.a_in_var_b);
        self.audit.record(b, std::slice::from_ref(a), &e.b_in_var_a);
        Ok(e.verdict())
    }

    fn critical(&mut self, a: &FiniteAlgebra, opts: &HarnessOptions) -> Result<Option<bool>> {
        let c = is_critical_with(a, &opts.membership, opts.subalgebra_cap)?;
        if let Some(m) = &c.membership {
            self.audit.record(a, &c.family, m);
        }
        Ok(c.critical)
    }

    fn push(&mut self, item: Item) {
        self.report.push(item);
    }

    fn tri(&mut self, id: &str, description: &str, v: Option<bool>, expected: bool, cert: Value) {
        let status = match v {
            None => Status::Undecided,
            Some(x) if x == expected => Status::Pass,
            Some(_) => Status::Fail,
        };
        self.push(Item::new(id, description, status, cert));
    }

    fn merge(&mut self, other: Campaign) {
        self.report.extend(other.report);
        self.audit.merge(&other.audit);
    }

    pub fn finish(mut self) -> Report {
        let a = self.audit.clone();
        self.report.push(Item::check(
            "certificates",
            "every membership certificate re-verifies",
            a.clean(),
            json!(a),
        ));
        self.report
    }
}

fn poly_identity(a: &FiniteAlgebra, text: &str) -> Result<bool> {
    a.is_identity(&parse_polynomial(text, a.sig(), a.ring())?, u128::MAX)
}

fn example1(opts: &HarnessOptions) -> Result<Campaign> {
    let mut c = Campaign::new("example1", opts);
    for (file, name, q) in [("fields.alg", "F2", 2), ("f3.alg", "F3", 3)] {
        let f = corpus_algebra(file, name);
        let r = relatively_free(std::slice::from_ref(&f), 2, opts.membership.coordinate_cap)?.carrier;
        let comm = poly_identity(&r, "mul(x1,x2) - mul(x2,x1)")?;
        let assoc = poly_identity(&r, "mul(mul(x1,x2),x3) - mul(x1,mul(x2,x3))")?;
        let qpow = if q == 2 { "mul(x1,x1) - x1" } else { "mul(mul(x1,x1),x1) - x1" };
        let qp = poly_identity(&r, qpow)?;
        let prime = is_prime(&r)?;
        c.push(Item::check(
            format!("example1.F{q}"),
            format!("the free algebra of var(F_{q}) on two generators is commutative, associative, satisfies x^{q} = x and is not prime"),
            comm && assoc && qp && !prime,
            json!({ "size": r.size().to_string(), "commutative": comm, "associative": assoc, "q_power": qp, "prime": prime }),
        ));
    }
    Ok(c)
}

fn example2(opts: &HarnessOptions) -> Result<Campaign> {
    let mut c = Campaign::new("example2", opts);
    let s = corpus_algebra("sl2.alg", "sl2");
    let m = monolith(&s)?;
    let h = Submodule::span(&s, &[s.basis_vector(2)])?;
    let sq = ideal_product(&s, &[&m, &m])?;
    c.push(Item::check("example2.monolith", "M(sl2) = span{h} and M^2 = 0", m == h && sq.is_zero(), submodule_json(&s, &m)));
    let pr = prime_report(&s, opts.lattice_cap)?;
    c.push(Item::check(
        "example2.not_prime",
        "sl2 is not prime by all three tests",
        pr.definitional == Some(false) && !pr.monolith_square && !pr.monolith_annihilator,
        json!(pr),
    ));
    let crit = c.critical(&s, opts)?;
    c.tri("example2.critical", "sl2 is critical", crit, true, json!({}));
    Ok(c)
}

fn example3(opts: &HarnessOptions) -> Result<Campaign> {
    let mut c = Campaign::new("example3", opts);
    let l = corpus_algebra("heisenberg.alg", "L");
    let lp = corpus_algebra("heisenberg.alg", "Lp");
    let ann = annihilator(&l, &Submodule::full(&l));
    let z = Submodule::span(&l, &[l.basis_vector(2)])?;
    c.push(Item::check("example3.center", "Ann_L(L) = span{z}", ann == z, submodule_json(&l, &ann)));
    c.push(Item::check("example3.L_monolithic", "L is monolithic", is_monolithic(&l)?, json!({})));
    c.push(Item::check(
        "example3.Lp",
        "L' has 32 elements and is monolithic",
        lp.size() == 32 && is_monolithic(&lp)?,
        json!({ "size": lp.size().to_string() }),
    ));
    let crit = c.critical(&lp, opts)?;
    c.tri("example3.Lp_not_critical", "L' is not critical", crit, false, json!({}));
    let m = c.member(&lp, std::slice::from_ref(&l), opts)?;
    c.tri("example3.Lp_in_var_L", "L' lies in the variety of its section L", m.verdict(), true, membership_json(&lp, &m));
    Ok(c)
}

fn example4(opts: &HarnessOptions) -> Result<Campaign> {
    let mut c = Campaign::new("example4", opts);
    let a1 = corpus_algebra("example4.alg", "A1");
    let a2 = corpus_algebra("example4.alg", "A2");
    let eq = c.id_equal(&a1, &a2, opts)?;
    c.tri("example4.id_equal", "Id(A1) = Id(A2)", eq, true, json!({}));
    let mut ok = true;
    for a in [&a1, &a2] {
        ok &= poly_identity(a, "mul(mul(x1,x2),x3)")? && poly_identity(a, "mul(x1,mul(x2,x3))")?;
    }
    c.push(Item::check("example4.nilpotent", "both satisfy (x1x2)x3 = 0 and x1(x2x3) = 0", ok, json!({})));
    let iso = iso_search(&a1, &a2, DEFAULT_ISO_NODE_CAP);
    c.push(Item::check("example4.not_isomorphic", "A1 and A2 are not isomorphic", iso == IsoOutcome::NotIsomorphic, json!({})));
    for (n, a) in [("A1", &a1), ("A2", &a2)] {
        let crit = c.critical(a, opts)?;
        c.tri(&format!("example4.{n}_critical"), &format!("{n} is critical"), crit, true, json!({}));
        let comm = parse_polynomial("mul(x1,x2) - mul(x2,x1)", a.sig(), a.ring())?;
        let mut all = true;
        for s in crate::structure::enumerate_sections(a, true, opts.subalgebra_cap)? {
            all &= s.quotient.is_identity(&comm, u128::MAX)?;
        }
        c.push(Item::check(format!("example4.{n}_sections"), format!("every proper section of {n} is commutative"), all, json!({})));
    }
    Ok(c)
}

/// Classification of one algebra by the requested predicates.
pub fn classify(a: &FiniteAlgebra, predicates: &[Predicate], opts: &HarnessOptions) -> Result<(Value, Audit)> {
    let mut c = Campaign::new("classify", opts);
    let mut rec = serde_json::Map::new();
    rec.insert("algebra".into(), algebra_json(a));
    for p in predicates {
        let v = match p {
            Predicate::Prime => json!(is_prime(a)?),
            Predicate::Semiprime => json!(is_semiprime(a)?),
            Predicate::Simple => json!(is_simple(a)?),
            Predicate::Monolithic => json!(is_monolithic(a)?),
            Predicate::Critical => json!(c.critical(a, opts)?),
        };
        rec.insert(p.name().into(), v);
    }
    Ok((Value::Object(rec), c.audit))
}

/// For the iso classes of a job: primes are critical, the primeness tests
/// agree, critical classes are monolithic, and distinct prime classes have
/// different identities.
pub fn verify_main_prime(job: &EnumerationJob, opts: &HarnessOptions) -> Result<Report> {
    Ok(main_prime_campaign(job, opts)?.finish())
}

/// Campaign, prime pair and identity-equality verdict for one pair.
type PairOutcome = (Campaign, (usize, usize), Option<bool>);

fn main_prime_campaign(job: &EnumerationJob, opts: &HarnessOptions) -> Result<Campaign> {
    let tag = format!("{}{:?}", job.ring.spec(), job.orders);
    let mut c = Campaign::new("verify-main-prime", opts);
    let classes = enumerate_algebras(job)?;
    c.push(Item::new(format!("{tag}.classes"), "iso classes enumerated", Status::Pass, json!({ "count": classes.len() })));
    let per: Vec<Result<(Campaign, bool)>> = classes
        .par_iter()
        .enumerate()
        .map(|(k, a)| {
            let mut c = Campaign::new("class", opts);
            let pr = prime_report(a, opts.lattice_cap)?;
            let prime = is_prime(&opts.faulty(Pathway::PrimeTests, a))?;
            let semi_mono = is_semiprime(a)? && is_monolithic(a)?;
            let agree = pr.agree() && pr.monolith_square == prime && semi_mono == prime;
            if !agree {
                c.report.violation(
                    format!("{tag}.{k}.prime_tests"),
                    TheoremViolation {
                        statement: "prime iff M != 0 and M^2 != 0 iff M != 0 and Ann(M) = 0".into(),
                        detail: format!("class {k}: {pr:?}, semiprime and monolithic: {semi_mono}"),
                    },
                );
            }
            let crit = c.critical(&opts.faulty(Pathway::PrimeCritical, a), opts)?;
            if prime && crit == Some(false) {
                c.report.violation(
                    format!("{tag}.{k}.prime_critical"),
                    TheoremViolation { statement: "a finite prime algebra is critical".into(), detail: format!("class {k}") },
                );
            }
            if crit == Some(true) && !is_monolithic(&opts.faulty(Pathway::CriticalMonolithic, a))? {
                c.report.violation(
                    format!("{tag}.{k}.critical_monolithic"),
                    TheoremViolation { statement: "a critical algebra is monolithic".into(), detail: format!("class {k}") },
                );
            }
            if crit.is_none() {
                c.push(Item::new(format!("{tag}.{k}.critical"), "criticality", Status::Undecided, json!({})));
            }
            Ok((c, prime))
        })
        .collect();
    let mut primes = Vec::new();
    for (k, r) in per.into_iter().enumerate() {
        let (sub, prime) = r?;
        c.merge(sub);
        if prime {
            primes.push(k);
        }
    }
    let pairs: Vec<(usize, usize)> =
        primes.iter().enumerate().flat_map(|(i, &a)| primes[i + 1..].iter().map(move |&b| (a, b))).collect();
    let results: Vec<Result<PairOutcome>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut c = Campaign::new("pair", opts);
            let other = if opts.fault == Some(Pathway::MainPrime) { &classes[i] } else { &classes[j] };
            let eq = c.id_equal(&classes[i], other, opts)?;
            Ok((c, (i, j), eq))
        })
        .collect();
    let mut undecided = 0;
    for r in results {
        let (sub, (i, j), eq) = r?;
        c.merge(sub);
        match eq {
            Some(true) => c.report.violation(
                format!("{tag}.{i}.{j}.main_prime"),
                TheoremViolation {
                    statement: "prime algebras with the same identities are isomorphic".into(),
                    detail: format!("distinct classes {i} and {j} have equal identities"),
                },
            ),
            None => undecided += 1,
            Some(false) => {}
        }
    }
    c.push(Item::new(
        format!("{tag}.summary"),
        "primes are critical, primeness tests agree, distinct prime classes differ in identities",
        if c.report.violations.is_empty() { if undecided > 0 { Status::Undecided } else { Status::Pass } } else { Status::Fail },
        json!({ "classes": classes.len(), "primes": primes, "prime_pairs": pairs.len() }),
    ));
    Ok(c)
}

/// A non-critical algebra lies in the variety of its critical proper
/// sections.
pub fn verify_critical_generation(a: &FiniteAlgebra, opts: &HarnessOptions) -> Result<Report> {
    Ok(critical_generation_campaign(a, "A", opts)?.finish())
}

fn critical_generation_campaign(a: &FiniteAlgebra, tag: &str, opts: &HarnessOptions) -> Result<Campaign> {
    let mut c = Campaign::new("verify-critical-generation", opts);
    let id = format!("critical_generation.{tag}");
    match c.critical(a, opts)? {
        None => c.push(Item::new(id, "criticality", Status::Undecided, json!({}))),
        Some(true) => {
            let m = c.member(a, std::slice::from_ref(a), opts)?;
            c.tri(&id, "a critical algebra generates its own variety", m.verdict(), true, json!({}));
        }
        Some(false) => {
            let mut family = Vec::new();
            let source = opts.faulty(Pathway::CriticalGeneration, a);
            for s in crate::structure::enumerate_sections(&source, true, opts.subalgebra_cap)? {
                if c.critical(&s.quotient, opts)? == Some(true) {
                    family.push(s.quotient);
                }
            }
            let m = c.member(a, &family, opts)?;
            let cert = json!({
                "critical_sections": family.iter().map(algebra_json).collect::<Vec<_>>(),
                "membership": membership_json(a, &m),
            });
            match m.verdict() {
                Some(true) => c.push(Item::new(id, "generated by its critical sections", Status::Pass, cert)),
                None => c.push(Item::new(id, "generated by its critical sections", Status::Undecided, cert)),
                Some(false) => c.report.violation(
                    id,
                    TheoremViolation {
                        statement: "a finite algebra is generated by its critical sections".into(),
                        detail: "not in the variety of its critical proper sections".into(),
                    },
                ),
            }
        }
    }
    Ok(c)
}

/// Nonzero ideals used for product containment checks.
fn sample_ideals(a: &FiniteAlgebra, opts: &HarnessOptions) -> Result<Vec<Submodule>> {
    let lat = all_ideals(a, opts.lattice_cap)?;
    let nz: Vec<Submodule> = lat.nonzero().cloned().collect();
    if nz.len() <= 6 {
        return Ok(nz);
    }
    let mut out = minimal_ideals(a)?;
    out.push(ideal_product(a, &[&Submodule::full(a), &Submodule::full(a)])?);
    out.push(Submodule::full(a));
    out.retain(|s| !s.is_zero());
    Ok(out)
}

/// Cross-checks of ideal machinery on one algebra.
pub fn oracle_checks(a: &FiniteAlgebra, tag: &str, opts: &HarnessOptions) -> Result<Vec<Item>> {
    let mut items = Vec::new();
    if a.is_zero() {
        return Ok(items);
    }
    let lat = all_ideals(a, opts.lattice_cap)?;
    let m = monolith(a)?;
    items.push(Item::check(
        format!("oracle.{tag}.monolith"),
        "monolith by principal ideals equals the intersection of the full lattice",
        m == monolith_from_lattice(a, &lat)?,
        submodule_json(a, &m),
    ));
    let full = Submodule::full(a);
    let mut ok = true;
    for k in 1..=2 {
        let ak = power(a, &full, k)?;
        let prod = ideal_product(a, &[&full, &ak])?;
        let next = power(a, &full, k + 1)?;
        ok &= is_ideal(a, &prod) && is_ideal(a, &ak) && next.contains_all(&prod);
    }
    items.push(Item::check(format!("oracle.{tag}.powers"), "A * A^k is an ideal inside A^(k+1) for k = 1, 2", ok, json!({})));
    let ideals = sample_ideals(a, opts)?;
    let mut ok = true;
    let mut count = 0;
    for s1 in &ideals {
        for s2 in &ideals {
            for s3 in &ideals {
                let inner = ideal_product(a, &[s2, s3])?;
                let nested = ideal_product(a, &[s1, &inner])?;
                let triple = ideal_product(a, &[s1, s2, s3])?;
                ok &= is_ideal(a, &nested) && is_ideal(a, &triple) && triple.contains_all(&nested);
                count += 1;
            }
        }
    }
    items.push(Item::check(
        format!("oracle.{tag}.triple"),
        "S1 * (S2 * S3) lies in S1 * S2 * S3",
        ok,
        json!({ "instances": count }),
    ));
    Ok(items)
}

/// The algebras of the built-in corpus, labelled.
pub fn corpus_algebras() -> Vec<(String, FiniteAlgebra)> {
    let mut out = Vec::new();
    for (file, f) in corpus_files() {
        for (n, a) in f.algebras {
            out.push((format!("{}.{n}", file.trim_end_matches(".alg")), a));
        }
    }
    out
}

/// Enumeration jobs of the exhaustive checks.
pub fn exhaustive_jobs() -> Vec<EnumerationJob> {
    use crate::modring::Ring;
    use crate::sigterm::Signature;
    let mul = Signature::binary("mul");
    vec![
        EnumerationJob::new(&Ring::modular(2).unwrap(), vec![2, 2], &mul),
        EnumerationJob::new(&Ring::modular(3).unwrap(), vec![3], &mul),
    ]
}

fn similarity_campaign(opts: &HarnessOptions) -> Result<Campaign> {
    let mut c = Campaign::new("similarity", opts);
    // graph of S2 inside S2 x S2: projects onto the second factor
    let s = corpus_algebra("sl2.alg", "sl2");
    let p = direct_product(&[&s, &s])?;
    let diag: Vec<Vec<u32>> = s.basis_vectors().iter().map(|v| p.pack(&[v, v])).collect();
    let g = subalgebra_of_span(&p.algebra, ReducedMatrix::reduce(s.ring(), p.algebra.rank(), diag)?)?;
    let ga = g.algebra();
    let s = opts.faulty(Pathway::Similarity, &s);
    let (mg, ms) = (monolith(ga)?, monolith(&s)?);
    match similarity_check(ga, &mg, &s, &ms)? {
        Similarity::Similar(w) => {
            let ok = w.verify(ga, &mg, &s, &ms).is_ok();
            c.push(Item::check("similarity.graph", "(M ◁ graph) is similar to (M(S) ◁ S)", ok, similarity_json(ga, &s, &w)));
        }
        Similarity::NotSimilar => c.report.violation(
            "similarity.graph",
            TheoremViolation {
                statement: "an ideal of a subdirect factor is similar in both".into(),
                detail: "no witness for the graph subalgebra".into(),
            },
        ),
        Similarity::Undecided(r) => c.push(Item::new("similarity.graph", "graph instance", Status::Undecided, json!({ "reason": r }))),
    }
    let a1 = corpus_algebra("example4.alg", "A1");
    let a2 = corpus_algebra("example4.alg", "A2");
    let rep = verify_similar_monoliths_in(&a1, &a2, &opts.faulty(Pathway::SimilarMonoliths, &a2))?;
    push_checked(&mut c.report, "similarity.A1_A2", "A1 and A2 have similar monoliths", &rep.similarity, |w| {
        similarity_json(&a1, &a2, w)
    });
    // reflexivity and symmetry on corpus pairs
    let mut pairs: Vec<(String, FiniteAlgebra, Submodule)> = Vec::new();
    for (n, a) in corpus_algebras() {
        if a.is_zero() || a.size() > 64 {
            continue;
        }
        for (k, i) in minimal_ideals(&a)?.into_iter().enumerate() {
            pairs.push((format!("{n}#{k}"), a.clone(), i));
        }
    }
    let mut refl = true;
    let mut sym = true;
    let mut checked = 0;
    for (x, (_, a, i)) in pairs.iter().enumerate() {
        refl &= matches!(similarity_check(a, i, a, i)?, Similarity::Similar(ref w) if w.verify(a, i, a, i).is_ok());
        for (_, b, j) in &pairs[x + 1..] {
            if a.ring() != b.ring() || a.sig() != b.sig() {
                continue;
            }
            let f = similarity_check(a, i, b, j)?.is_similar();
            let r = similarity_check(b, j, a, i)?.is_similar();
            sym &= f == r;
            checked += 1;
        }
    }
    c.push(Item::check("similarity.reflexive", "similarity is reflexive on corpus pairs", refl, json!({ "pairs": pairs.len() })));
    c.push(Item::check("similarity.symmetric", "similarity is symmetric on corpus pairs", sym, json!({ "pairs": checked })));
    // module action on I is independent of coset representatives
    let well_defined = pairs.iter().all(|(_, a, i)| action_well_defined(a, i));
    c.push(Item::check(
        "similarity.module_structure",
        "Ann(I) acts trivially on I, so the quotient acts on I",
        well_defined,
        json!({}),
    ));
    // both critical, same variety, one prime => isomorphic
    let crit: Vec<(String, FiniteAlgebra)> = corpus_algebras()
        .into_iter()
        .filter(|(_, a)| a.size() <= 64 && !a.is_zero())
        .filter(|(_, a)| is_critical_with(a, &opts.membership, opts.subalgebra_cap).ok().and_then(|c| c.critical) == Some(true))
        .collect();
    let mut instances = 0;
    let mut holds = true;
    for (x, (_, a)) in crit.iter().enumerate() {
        for (_, b) in &crit[x..] {
            if a.ring() != b.ring() || a.sig() != b.sig() || !(is_prime(a)? || is_prime(b)?) {
                continue;
            }
            if c.id_equal(a, b, opts)? == Some(true) {
                instances += 1;
                let target = opts.faulty(Pathway::PrimeCorollary, b);
                if matches!(iso_search(a, &target, DEFAULT_ISO_NODE_CAP), IsoOutcome::NotIsomorphic) {
                    holds = false;
                    c.report.violation(
                        "similarity.prime_corollary",
                        TheoremViolation {
                            statement: "critical algebras with equal identities, one prime, are isomorphic".into(),
                            detail: format!("{} and {}", a.label().unwrap_or("?"), b.label().unwrap_or("?")),
                        },
                    );
                }
            }
        }
    }
    c.push(Item::check(
        "similarity.prime_corollary",
        "critical algebras with equal identities, one prime, are isomorphic",
        holds,
        json!({ "instances": instances }),
    ));
    Ok(c)
}

/// `ω(.., g, .., x, ..) = 0` for `g` in `I`, `x` in `Ann(I)` and basis
/// vectors in the remaining slots.
pub fn action_well_defined(a: &FiniteAlgebra, i: &Submodule) -> bool {
    let ann = annihilator(a, i);
    let basis = a.basis_vectors();
    let r = basis.len();
    for (o, _, arity) in a.sig().ops() {
        for (si, sx) in (0..arity).flat_map(|p| (0..arity).filter(move |&q| q != p).map(move |q| (p, q))) {
            let count = r.pow(arity as u32 - 2);
            for g in i.rows() {
                for x in ann.rows() {
                    for mut idx in 0..count {
                        let args: Vec<&[u32]> = (0..arity)
                            .map(|s| {
                                if s == si {
                                    g.as_slice()
                                } else if s == sx {
                                    x.as_slice()
                                } else {
                                    let v = &basis[idx % r];
                                    idx /= r;
                                    v.as_slice()
                                }
                            })
                            .collect();
                        if a.apply(o, &args).iter().any(|&v| v != 0) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

fn representation_campaign(opts: &HarnessOptions) -> Result<Campaign> {
    let mut c = Campaign::new("representation", opts);
    let f3 = corpus_algebra("f3.alg", "F3");
    let z2 = corpus_algebra("fields.alg", "Z2");
    let sl2 = corpus_algebra("sl2.alg", "sl2");
    let sec: Vec<FiniteAlgebra> = crate::structure::enumerate_sections(&z2, false, opts.subalgebra_cap)?
        .into_iter()
        .map(|s| s.quotient)
        .collect();
    let cases: [(&str, &FiniteAlgebra, Vec<FiniteAlgebra>, Vec<u128>); 3] = [
        ("F3", &f3, vec![f3.clone()], vec![3]),
        ("sl2", &sl2, vec![sl2.clone()], vec![8]),
        ("Z2", &z2, sec, vec![2, 2]),
    ];
    for (n, a, pool, expected) in cases {
        let mut r = minimal_representation(a, &pool)?;
        let id = format!("minrep.{n}");
        if opts.fault == Some(Pathway::Minrep) {
            if let Checked::Holds((rep, _)) = &r {
                let mut bad = rep.clone();
                bad.family[0] = zero_tables(&bad.family[0]);
                if let Some(v) = minrep_properties(a, &bad)?.violations().into_iter().next() {
                    r = Checked::Violation(v);
                }
            }
        }
        match &r {
            Checked::Holds((rep, props)) => c.push(Item::check(
                id,
                format!("minimal representation of {n} has sequence {expected:?}"),
                rep.sequence() == expected && rep.verify(a).is_ok(),
                json!({ "representation": representation_json(rep), "properties": props }),
            )),
            _ => push_checked(&mut c.report, &id, "minimal representation", &r, |_| json!({})),
        }
    }
    // prime algebras are sections of algebras whose variety contains them
    let f2 = corpus_algebra("fields.alg", "F2");
    let mut pool: Vec<FiniteAlgebra> = exhaustive_jobs().iter().map(enumerate_algebras).collect::<Result<Vec<_>>>()?.concat();
    pool.push(f2.clone());
    let mut found = 0;
    for p in pool.iter().filter(|a| is_prime(a).unwrap_or(false)) {
        for host in pool.iter().filter(|h| h.ring() == p.ring() && h.sig() == p.sig()) {
            if c.member(p, std::slice::from_ref(host), opts)?.verdict() != Some(true) {
                continue;
            }
            match prime_section_witness_in(p, host, &opts.faulty(Pathway::PrimeSection, host))? {
                Checked::Holds(_) => found += 1,
                Checked::Undecided(r) => c.push(Item::new("prime_section", "prime section witness", Status::Undecided, json!({ "reason": r }))),
                Checked::Violation(v) => c.report.violation("prime_section", v),
            }
        }
    }
    c.push(Item::check("prime_section.summary", "prime members of var(A') are sections of A'", c.report.violations.is_empty(), json!({ "witnesses": found })));
    Ok(c)
}

/// Runs every built-in check.
pub fn verify_paper(opts: &HarnessOptions) -> Result<Report> {
    type Job<'a> = Box<dyn Fn() -> Result<Campaign> + Send + Sync + 'a>;
    let jobs: Vec<Job> = vec![
        Box::new(|| example1(opts)),
        Box::new(|| example2(opts)),
        Box::new(|| example3(opts)),
        Box::new(|| example4(opts)),
        Box::new(|| {
            let mut c = Campaign::new("exhaustive", opts);
            for j in exhaustive_jobs() {
                c.merge(main_prime_campaign(&j, opts)?);
            }
            Ok(c)
        }),
        Box::new(|| {
            let mut c = Campaign::new("oracles", opts);
            let mut algs = corpus_algebras();
            for j in exhaustive_jobs() {
                let tag = format!("{}{:?}", j.ring.spec(), j.orders);
                algs.extend(enumerate_algebras(&j)?.into_iter().enumerate().map(|(k, a)| (format!("{tag}#{k}"), a)));
            }
            for (n, a) in algs.iter().filter(|(_, a)| a.size() <= 64) {
                for item in oracle_checks(a, n, opts)? {
                    c.push(item);
                }
            }
            Ok(c)
        }),
        Box::new(|| similarity_campaign(opts)),
        Box::new(|| representation_campaign(opts)),
        Box::new(|| {
            let mut c = Campaign::new("critical_generation", opts);
            for (file, name) in [("heisenberg.alg", "Lp"), ("fields.alg", "Z2"), ("sl2.alg", "sl2")] {
                c.merge(critical_generation_campaign(&corpus_algebra(file, name), name, opts)?);
            }
            Ok(c)
        }),
        Box::new(|| {
            let mut c = Campaign::new("directives", opts);
            for (file, f) in corpus_files() {
                for item in run_directives(&f, file, opts)? {
                    c.push(item);
                }
            }
            Ok(c)
        }),
    ];
    let results: Vec<Result<Campaign>> = jobs.par_iter().map(|j| j()).collect();
    let mut all = Campaign::new("verify-paper", opts);
    for r in results {
        all.merge(r?);
    }
    Ok(all.finish())
}

fn directive_value(d: &Directive, f: &AlgebraSpecFile, opts: &HarnessOptions) -> Result<(Option<bool>, Value)> {
    let alg = |k: usize| -> Result<&FiniteAlgebra> {
        match &d.args[k] {
            DirectiveArg::Algebra(n) => f.algebra(n).ok_or_else(|| Error::InvalidArgument(format!("unknown algebra {n}"))),
            DirectiveArg::Polynomial(_) => Err(Error::InvalidArgument("expected an algebra".into())),
        }
    };
    let a = alg(0)?;
    Ok(match d.predicate.as_str() {
        "prime" => (Some(is_prime(a)?), json!(prime_report(a, opts.lattice_cap)?)),
        "semiprime" => (Some(is_semiprime(a)?), json!({})),
        "simple" => (Some(is_simple(a)?), json!({})),
        "monolithic" => (Some(is_monolithic(a)?), json!({})),
        "critical" => (is_critical_with(a, &opts.membership, opts.subalgebra_cap)?.critical, json!({})),
        "identity" => {
            let DirectiveArg::Polynomial(p) = &d.args[1] else { unreachable!("checked on parse") };
            (Some(a.is_identity(p, 1 << 24)?), json!({}))
        }
        "id_equal" => (id_equal_with(a, alg(1)?, &opts.membership)?.verdict(), json!({})),
        "iso" => match iso_search(a, alg(1)?, DEFAULT_ISO_NODE_CAP) {
            IsoOutcome::Isomorphic(h) => (Some(true), hom_json(alg(1)?, &h)),
            IsoOutcome::NotIsomorphic => (Some(false), json!({})),
            IsoOutcome::Undecided { .. } => (None, json!({})),
        },
        "member" => {
            let family = (1..d.args.len()).map(|k| alg(k).cloned()).collect::<Result<Vec<_>>>()?;
            let m = var_member_with(a, &family, &opts.membership)?;
            (m.verdict(), membership_json(a, &m))
        }
        other => return Err(Error::InvalidArgument(format!("unknown predicate {other}"))),
    })
}

/// Evaluates the `expect` directives of a file.
pub fn run_directives(f: &AlgebraSpecFile, file: &str, opts: &HarnessOptions) -> Result<Vec<Item>> {
    f.directives
        .par_iter()
        .map(|d| {
            let (v, cert) = directive_value(d, f, opts)?;
            let status = match v {
                None => Status::Undecided,
                Some(x) if x == d.expected => Status::Pass,
                Some(_) => Status::Fail,
            };
            Ok(Item::new(format!("{file}:{}", d.line), d.text.clone(), status, cert))
        })
        .collect()
}

/// Similarity checks: graph instance, monoliths of A1 and A2, equivalence
/// on corpus pairs, module structure, prime corollary.
pub fn verify_similarity(opts: &HarnessOptions) -> Result<Report> {
    Ok(similarity_campaign(opts)?.finish())
}

/// Minimal representations and prime section witnesses.
pub fn verify_representations(opts: &HarnessOptions) -> Result<Report> {
    Ok(representation_campaign(opts)?.finish())
}
