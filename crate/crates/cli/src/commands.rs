use serde_json::json;

use omega_core::algcore::{iso_search, FiniteAlgebra, IsoOutcome, Submodule, DEFAULT_ISO_NODE_CAP};
use omega_core::harness::report::{
    algebra_json, hom_json, membership_json, representation_json, similarity_json, submodule_json,
};
use omega_core::harness::{
    classify, enumerate_algebras, parse_file, run_directives, verify_main_prime, verify_paper, AlgebraSpecFile,
    EnumerationJob, HarnessOptions, Item, Predicate, Report, Status, Symmetry,
};
use omega_core::idealth::{
    all_ideals, annihilator, ideal_closure, ideal_product, ideal_product_bounded, is_semiprime, is_simple, monolith,
    prime_report,
};
use omega_core::structure::{
    enumerate_sections, is_critical_with, minimal_representation, similarity_check, Checked, Similarity,
};
use omega_core::variety::{id_equal_with, relatively_free, var_member_with, Membership, MembershipOptions};
use omega_core::Error;

use crate::{AlgRef, Cli, Command, Common, JobArgs, EXIT_INPUT, EXIT_USAGE};

/// Failure of a command before it produced an answer.
enum Fail {
    Usage(String),
    Input(String),
    Cap(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Fail::Cap(e.to_string()),
            Error::InvalidArgument(_) => Fail::Usage(e.to_string()),
            _ => Fail::Input(e.to_string()),
        }
    }
}

type Out = Result<Report, Fail>;

fn options(c: &Common) -> HarnessOptions {
    let mut o = HarnessOptions {
        membership: MembershipOptions { seed: c.seed, ..MembershipOptions::default() },
        ..HarnessOptions::default()
    };
    if let Some(n) = c.max_coords {
        o.membership.coordinate_cap = n;
    }
    if let Some(n) = c.max_sections {
        o.subalgebra_cap = n;
    }
    o
}

fn load_file(path: &std::path::Path) -> Result<AlgebraSpecFile, Fail> {
    let src = std::fs::read_to_string(path).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))?;
    parse_file(&src).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn load(r: &AlgRef) -> Result<(AlgebraSpecFile, FiniteAlgebra), Fail> {
    let f = load_file(&r.path)?;
    let a = f.pick(r.name.as_deref()).map_err(|e| Fail::Input(format!("{}: {e}", r.path.display())))?.clone();
    Ok((f, a))
}

/// Elements given as linear combinations of basis names.
fn elements(a: &FiniteAlgebra, text: &str) -> Result<Vec<Vec<u32>>, Fail> {
    text.split(',').map(str::trim).filter(|p| !p.is_empty()).map(|p| parse_vector(a, p)).collect()
}

fn parse_vector(a: &FiniteAlgebra, text: &str) -> Result<Vec<u32>, Fail> {
    let ring = a.ring();
    let mut v = vec![0; a.rank()];
    for (sign, term) in split_terms(text) {
        let (coef, name) = match term.rsplit_once('*') {
            Some((c, n)) => (c.trim().trim_matches(|ch| ch == '(' || ch == ')'), n.trim()),
            None => {
                let k = term.find(|c: char| c.is_ascii_alphabetic()).unwrap_or(0);
                (term[..k].trim(), term[k..].trim())
            }
        };
        let c = if coef.is_empty() { 1 } else { ring.parse_elem(coef).ok_or_else(|| Fail::Usage(format!("bad coefficient {coef:?}")))? };
        let k = a.names().iter().position(|n| n == name).ok_or_else(|| Fail::Usage(format!("unknown basis element {name:?}")))?;
        let c = if sign { ring.neg(c) } else { c };
        v = a.add(&v, &a.scale(c, &a.basis_vector(k)));
    }
    Ok(v)
}

fn split_terms(text: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut neg = false;
    let mut cur = String::new();
    let mut depth = 0;
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if !cur.trim().is_empty() {
                    out.push((neg, cur.trim().to_string()));
                }
                cur.clear();
                neg = ch == '-';
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.push((neg, cur.trim().to_string()));
    }
    out
}

fn job(args: &JobArgs) -> Result<EnumerationJob, Fail> {
    let ops: Vec<String> = args.sig.split(',').map(|s| s.trim().to_string()).collect();
    let src = format!("ring {}\nsignature {{ {} }}", args.ring, ops.join(", "));
    let f = parse_file(&src).map_err(|e| Fail::Usage(format!("invalid ring or signature: {e}")))?;
    if args.shape.is_empty() {
        return Err(Fail::Usage("--shape must list at least one order".into()));
    }
    let mut j = EnumerationJob::new(&f.ring, args.shape.clone(), &f.signature);
    j.symmetry = if args.no_symmetry { Symmetry::None } else { Symmetry::BasisChange };
    j.raw_cap = args.max_raw;
    for &d in &args.shape {
        if !f.ring.valid_order(d) || d < 2 {
            return Err(Fail::Usage(format!("order {d} is not admissible over {}", f.ring.spec())));
        }
    }
    Ok(j)
}

/// One-item report with a verdict line.
fn single(command: &str, seed: u64, id: &str, line: String, status: Status, cert: serde_json::Value) -> Report {
    println!("{line}");
    let mut r = Report::new(command, seed);
    r.push(Item::new(id, line, status, cert));
    r
}

fn yes_no(b: bool) -> Status {
    if b {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn tri(v: Option<bool>) -> Status {
    match v {
        Some(true) => Status::Pass,
        Some(false) => Status::Fail,
        None => Status::Undecided,
    }
}

fn membership_line(m: &Membership, yes: &str, no: &str) -> String {
    match m {
        Membership::Member(_) => yes.into(),
        Membership::NonMember(_) => no.into(),
        Membership::Undecided { reason } => format!("undecided: {reason}"),
    }
}

fn dispatch(cli: &Cli) -> Out {
    let opts = options(&cli.common);
    let seed = cli.common.seed;
    let name = |n: &str| n.to_string();
    Ok(match &cli.command {
        Command::Prime { alg } => {
            let (_, a) = load(alg)?;
            let pr = prime_report(&a, opts.lattice_cap)?;
            if !pr.agree() {
                let mut r = Report::new("prime", seed);
                r.violation(
                    "prime",
                    omega_core::structure::TheoremViolation {
                        statement: "the primeness tests agree".into(),
                        detail: format!("{pr:?}"),
                    },
                );
                println!("THEOREM VIOLATION: primeness tests disagree: {pr:?}");
                return Ok(r);
            }
            let p = pr.monolith_square;
            single("prime", seed, "prime", name(if p { "prime" } else { "not prime" }), yes_no(p), json!(pr))
        }
        Command::Semiprime { alg } => {
            let (_, a) = load(alg)?;
            let p = is_semiprime(&a)?;
            single("semiprime", seed, "semiprime", name(if p { "semiprime" } else { "not semiprime" }), yes_no(p), json!({}))
        }
        Command::Simple { alg } => {
            let (_, a) = load(alg)?;
            let p = is_simple(&a)?;
            single("simple", seed, "simple", name(if p { "simple" } else { "not simple" }), yes_no(p), json!({}))
        }
        Command::Monolith { alg } => {
            let (_, a) = load(alg)?;
            let m = monolith(&a)?;
            let line = if m.is_zero() { "monolith 0 (not monolithic)".to_string() } else { format!("monolith {}", m.format(&a)) };
            single("monolith", seed, "monolith", line, yes_no(!m.is_zero()), submodule_json(&a, &m))
        }
        Command::Annihilator { alg, of } => {
            let (_, a) = load(alg)?;
            let s = match of {
                Some(t) => ideal_closure(&a, &elements(&a, t)?),
                None => Submodule::full(&a),
            };
            let ann = annihilator(&a, &s);
            let line = format!("annihilator {}", ann.format(&a));
            single("annihilator", seed, "annihilator", line, Status::Pass, json!({ "of": submodule_json(&a, &s), "annihilator": submodule_json(&a, &ann) }))
        }
        Command::Ideals { alg } => {
            let (_, a) = load(alg)?;
            let lat = all_ideals(&a, opts.lattice_cap)?;
            let mut r = Report::new("ideals", seed);
            println!("{} ideals", lat.len());
            for (k, i) in lat.ideals.iter().enumerate() {
                println!("  [{k}] |I| = {:>6}  {}", i.size(), i.format(&a));
                r.push(Item::new(format!("ideal.{k}"), i.format(&a), Status::Pass, submodule_json(&a, i)));
            }
            if let Some(t) = cli.common.max_product_vars {
                let full = Submodule::full(&a);
                let exact = ideal_product(&a, &[&full, &full])?;
                let bounded = ideal_product_bounded(&a, &[&full, &full], t, 6)?;
                let ok = exact.contains_all(&bounded.span) && (!bounded.stabilized || bounded.span == exact);
                println!("A^2 = {} (bounded with {} extra variables: {})", exact.format(&a), bounded.extra_vars, bounded.span.format(&a));
                r.push(Item::check("square.bounded", "bounded product agrees with the exact one", ok, json!({ "exact": submodule_json(&a, &exact), "bounded": submodule_json(&a, &bounded.span), "stabilized": bounded.stabilized })));
            }
            r
        }
        Command::Sections { alg, proper } => {
            let (_, a) = load(alg)?;
            let secs = enumerate_sections(&a, *proper, opts.subalgebra_cap)?;
            let mut r = Report::new("sections", seed);
            println!("{} sections up to isomorphism", secs.len());
            for (k, s) in secs.iter().enumerate() {
                println!("  [{k}] |S| = {}, |I| = {}, |S/I| = {}", s.sub.size(), s.ideal.size(), s.quotient.size());
                r.push(Item::new(
                    format!("section.{k}"),
                    format!("{} / {}", s.sub.format(&a), s.ideal.format(&a)),
                    Status::Pass,
                    json!({ "sub": submodule_json(&a, &s.sub), "ideal": submodule_json(&a, &s.ideal), "quotient": algebra_json(&s.quotient), "proper": s.proper }),
                ));
            }
            r
        }
        Command::Critical { alg } => {
            let (_, a) = load(alg)?;
            let c = is_critical_with(&a, &opts.membership, opts.subalgebra_cap)?;
            let line = match c.critical {
                Some(true) => "critical".to_string(),
                Some(false) => "not critical".to_string(),
                None => "undecided".to_string(),
            };
            let cert = json!({
                "family": c.family.iter().map(algebra_json).collect::<Vec<_>>(),
                "membership": c.membership.as_ref().map(|m| membership_json(&a, m)),
            });
            single("critical", seed, "critical", line, tri(c.critical), cert)
        }
        Command::Free { alg, gens } => {
            let (_, a) = load(alg)?;
            let m = relatively_free(std::slice::from_ref(&a), *gens, opts.membership.coordinate_cap)?;
            let line = format!("relatively free algebra on {gens} generators: {} elements, rank {}", m.carrier.size(), m.carrier.rank());
            println!("{}", m.carrier.clone().with_label("F"));
            single("free", seed, "free", line, Status::Pass, json!({ "carrier": algebra_json(&m.carrier), "coordinates": m.coordinates.len() }))
        }
        Command::Member { b, family } => {
            let (_, bb) = load(b)?;
            let fam = family.iter().map(|r| load(r).map(|x| x.1)).collect::<Result<Vec<_>, _>>()?;
            let m = var_member_with(&bb, &fam, &opts.membership)?;
            let line = membership_line(&m, "member", "not member");
            single("member", seed, "member", line, tri(m.verdict()), membership_json(&bb, &m))
        }
        Command::IdEqual { a, b } => {
            let (_, x) = load(a)?;
            let (_, y) = load(b)?;
            let e = id_equal_with(&x, &y, &opts.membership)?;
            let line = match e.verdict() {
                Some(true) => "equal".to_string(),
                Some(false) => "not equal".to_string(),
                None => "undecided".to_string(),
            };
            let cert = json!({ "a_in_var_b": membership_json(&x, &e.a_in_var_b), "b_in_var_a": membership_json(&y, &e.b_in_var_a) });
            single("id-equal", seed, "id_equal", line, tri(e.verdict()), cert)
        }
        Command::Iso { a, b } => {
            let (_, x) = load(a)?;
            let (_, y) = load(b)?;
            match iso_search(&x, &y, DEFAULT_ISO_NODE_CAP) {
                IsoOutcome::Isomorphic(h) => single("iso", seed, "iso", name("isomorphic"), Status::Pass, hom_json(&y, &h)),
                IsoOutcome::NotIsomorphic => single("iso", seed, "iso", name("not isomorphic"), Status::Fail, json!({})),
                IsoOutcome::Undecided { nodes } => single("iso", seed, "iso", format!("undecided after {nodes} nodes"), Status::Undecided, json!({})),
            }
        }
        Command::Similar { a, b, ideal_a, ideal_b } => {
            let (_, x) = load(a)?;
            let (_, y) = load(b)?;
            let pick = |alg: &FiniteAlgebra, g: &Option<String>| -> Result<Submodule, Fail> {
                Ok(match g {
                    Some(t) => ideal_closure(alg, &elements(alg, t)?),
                    None => monolith(alg)?,
                })
            };
            let (i, j) = (pick(&x, ideal_a)?, pick(&y, ideal_b)?);
            match similarity_check(&x, &i, &y, &j)? {
                Similarity::Similar(w) => single("similar", seed, "similar", name("similar"), Status::Pass, similarity_json(&x, &y, &w)),
                Similarity::NotSimilar => single("similar", seed, "similar", name("not similar"), Status::Fail, json!({})),
                Similarity::Undecided(r) => single("similar", seed, "similar", format!("undecided: {r}"), Status::Undecided, json!({})),
            }
        }
        Command::Minrep { alg, pool } => {
            let (_, a) = load(alg)?;
            let pool = if pool.is_empty() {
                vec![a.clone()]
            } else {
                pool.iter().map(|r| load(r).map(|x| x.1)).collect::<Result<Vec<_>, _>>()?
            };
            let mut r = Report::new("minrep", seed);
            match minimal_representation(&a, &pool)? {
                Checked::Holds((rep, props)) => {
                    println!("sequence {:?}", rep.sequence());
                    r.push(Item::new("minrep", "minimal representation", Status::Pass, json!({ "representation": representation_json(&rep), "properties": props })));
                }
                Checked::Violation(v) => {
                    println!("{v}");
                    r.violation("minrep", v);
                }
                Checked::Undecided(why) => {
                    println!("undecided: {why}");
                    r.push(Item::new("minrep", "minimal representation", Status::Undecided, json!({ "reason": why })));
                }
            }
            r
        }
        Command::Enumerate { job: args, classify: preds } => {
            let j = job(args)?;
            let preds = preds
                .iter()
                .map(|p| Predicate::parse(p).ok_or_else(|| Fail::Usage(format!("unknown predicate {p:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let algs = enumerate_algebras(&j)?;
            println!("{} raw tables, {} listed", j.raw_count(), algs.len());
            let mut r = Report::new("enumerate", seed);
            for (k, a) in algs.iter().enumerate() {
                let (rec, _) = classify(a, &preds, &opts)?;
                let flags: Vec<String> = preds.iter().map(|p| format!("{}={}", p.name(), rec[p.name()])).collect();
                println!("  [{k}] {} {}", a.clone().with_label(format!("E{k}")), flags.join(" "));
                r.push(Item::new(format!("class.{k}"), format!("class {k}"), Status::Pass, rec));
            }
            r
        }
        Command::VerifyPaper => {
            let r = verify_paper(&opts)?;
            summarize(&r);
            r
        }
        Command::VerifyMainPrime { job: args } => {
            let r = verify_main_prime(&job(args)?, &opts)?;
            summarize(&r);
            r
        }
        Command::Check { file } => {
            let f = load_file(file)?;
            let mut r = Report::new("check", seed);
            for item in run_directives(&f, &file.display().to_string(), &opts)? {
                println!("{:<9} {}", status_word(item.status), item.description);
                r.push(item);
            }
            r
        }
    })
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Undecided => "undecided",
        Status::Violation => "VIOLATION",
    }
}

fn summarize(r: &Report) {
    for i in r.items.iter().filter(|i| i.status != Status::Pass) {
        println!("{:<9} {} {}", status_word(i.status), i.id, i.description);
    }
    for v in &r.violations {
        println!("{v}");
    }
    let s = &r.summary;
    println!("{} passed, {} failed, {} undecided, {} violations", s.pass, s.fail, s.undecided, s.violation);
}

pub fn run(cli: &Cli) -> u8 {
    match dispatch(cli) {
        Ok(report) => {
            if let Some(path) = &cli.common.json {
                if let Err(e) = std::fs::write(path, report.to_json() + "\n") {
                    eprintln!("error: {}: {e}", path.display());
                    return EXIT_INPUT;
                }
            }
            report.exit_code() as u8
        }
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(Fail::Input(m)) => {
            eprintln!("error: {m}");
            EXIT_INPUT
        }
        Err(Fail::Cap(m)) => {
            println!("undecided: {m}");
            2
        }
    }
}
