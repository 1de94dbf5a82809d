//! Sections, criticality, minimal representations and similarity of
//! ideals. Failures of proved statements are reported as
//! [`TheoremViolation`] values rather than panics.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::algcore::{
    additive_order, closure, eval_term, greedy_generators, induce, iso_search, iso_search_all, quotient,
    direct_product, FiniteAlgebra, Homomorphism, Induced, IsoOutcome, ProductSpace, Quotient, Submodule,
    DEFAULT_ISO_NODE_CAP,
};
use crate::error::{Error, Result};
use crate::idealth::{
    all_ideals, annihilator, ideal_product, is_ideal, is_prime, monolith, principal_ideals, DEFAULT_LATTICE_CAP,
};
use crate::modring::matrix::{is_zero_vec, solve_left};
use crate::modring::{axpy, kernel, ReducedMatrix, RingElem};
use crate::sigterm::{enumerate_multilinear_monomials, DEFAULT_DEPTH_CAP, DEFAULT_MONOMIAL_CAP};
use crate::variety::{id_equal_with, multilinear_identities, var_member_with, Membership, MembershipOptions};

/// Default cap on the number of subalgebras enumerated.
pub const DEFAULT_SUBALGEBRA_CAP: usize = 10_000;
/// Default cap on `|∏ S_i|` in representation search.
pub const DEFAULT_PRODUCT_CAP: u128 = 1 << 16;
/// Default cap on the number of factors in representation search.
pub const DEFAULT_MAX_FACTORS: usize = 4;

/// A statement that should hold by a proved result but failed here.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremViolation {
    pub statement: String,
    pub detail: String,
}

impl std::fmt::Display for TheoremViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "THEOREM VIOLATION: {}: {}", self.statement, self.detail)
    }
}

/// Outcome of a check whose positive answer is guaranteed by a theorem.
#[derive(Debug, Clone)]
pub enum Checked<T> {
    Holds(T),
    Violation(TheoremViolation),
    Undecided(String),
}

impl<T> Checked<T> {
    pub fn holds(&self) -> bool {
        matches!(self, Checked::Holds(_))
    }

    pub fn violation(&self) -> Option<&TheoremViolation> {
        match self {
            Checked::Violation(v) => Some(v),
            _ => None,
        }
    }
}

fn violation<T>(statement: &str, detail: impl Into<String>) -> Checked<T> {
    Checked::Violation(TheoremViolation { statement: statement.into(), detail: detail.into() })
}

/// All subalgebras, smallest first: the closure of the constants, then
/// repeated joins with single elements.
pub fn all_subalgebras(a: &FiniteAlgebra, cap: usize) -> Result<Vec<Submodule>> {
    let elems = a.elements(1 << 20)?;
    let bottom = closure(a, &[]).span;
    let mut seen: HashSet<ReducedMatrix> = HashSet::new();
    seen.insert(bottom.clone());
    let mut queue = vec![bottom];
    let mut k = 0;
    while k < queue.len() {
        let s = queue[k].clone();
        let mut reps: HashSet<Vec<RingElem>> = HashSet::new();
        for e in &elems {
            let mut v = e.clone();
            s.reduce_vector(&mut v);
            if is_zero_vec(&v) || !reps.insert(v) {
                continue;
            }
            let mut gens = s.rows().to_vec();
            gens.push(e.clone());
            let t = closure(a, &gens).span;
            if seen.insert(t.clone()) {
                if seen.len() > cap {
                    return Err(Error::cap("subalgebras", cap as u64));
                }
                queue.push(t);
            }
        }
        k += 1;
    }
    let mut out: Vec<Submodule> = queue.into_iter().map(Submodule::new).collect();
    out.sort_by(|x, y| x.size().cmp(&y.size()).then_with(|| x.rows().cmp(y.rows())));
    Ok(out)
}

/// The minimal nonzero ideals (the minimal principal ideals).
pub fn minimal_ideals(a: &FiniteAlgebra) -> Result<Vec<Submodule>> {
    let p = principal_ideals(a)?;
    Ok(p.iter()
        .filter(|x| !p.iter().any(|y| y.size() < x.size() && x.contains_all(y)))
        .cloned()
        .collect())
}

/// Isomorphism invariants used to bucket algebras before `iso_search`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Fingerprint {
    pub size: u128,
    pub orders: Vec<u32>,
    pub square: u128,
    pub monolith: u128,
    pub identity_dims: Vec<usize>,
}

pub fn fingerprint(a: &FiniteAlgebra) -> Result<Fingerprint> {
    let mut orders = a.orders().to_vec();
    orders.sort_unstable();
    if a.is_zero() {
        return Ok(Fingerprint { size: 1, orders, square: 1, monolith: 0, identity_dims: Vec::new() });
    }
    let full = Submodule::full(a);
    let square = if a.sig().has_higher_op() { ideal_product(a, &[&full, &full])?.size() } else { 0 };
    let mut identity_dims = Vec::new();
    for m in 1..=3 {
        if a.rank().checked_pow(m as u32 + 1).is_none_or(|c| c > 1 << 14) {
            break;
        }
        identity_dims.push(multilinear_identities(a, m)?.coefficients.size() as usize);
    }
    Ok(Fingerprint { size: a.size(), orders, square, monolith: monolith(a)?.size(), identity_dims })
}

/// Keeps one representative per isomorphism class; an undecided search
/// keeps both algebras.
pub fn dedup_isomorphic(algs: Vec<FiniteAlgebra>) -> Result<Vec<FiniteAlgebra>> {
    let mut buckets: HashMap<Fingerprint, Vec<usize>> = HashMap::new();
    let mut out: Vec<FiniteAlgebra> = Vec::new();
    for a in algs {
        let fp = fingerprint(&a)?;
        let bucket = buckets.entry(fp).or_default();
        let dup = bucket
            .iter()
            .any(|&k| matches!(iso_search(&out[k], &a, DEFAULT_ISO_NODE_CAP), IsoOutcome::Isomorphic(_)));
        if !dup {
            bucket.push(out.len());
            out.push(a);
        }
    }
    Ok(out)
}

/// `sub / ideal` for a subalgebra `sub` of the parent and an ideal
/// `ideal` of `sub`, both in parent coordinates.
#[derive(Debug, Clone)]
pub struct Section {
    pub sub: Submodule,
    pub ideal: Submodule,
    pub quotient: FiniteAlgebra,
    pub proper: bool,
}

/// All sections up to isomorphism, smallest first.
pub fn enumerate_sections(a: &FiniteAlgebra, proper_only: bool, cap: usize) -> Result<Vec<Section>> {
    let mut raw = Vec::new();
    for s in all_subalgebras(a, cap)? {
        let ind = induce(a, &s.basis)?;
        let lattice = all_ideals(&ind.algebra, DEFAULT_LATTICE_CAP)?;
        for i in &lattice.ideals {
            let proper = s.size() < a.size() || !i.is_zero();
            if proper_only && !proper {
                continue;
            }
            let q = quotient(&ind.algebra, i)?;
            let parent_rows: Vec<Vec<RingElem>> = i.rows().iter().map(|r| ind.to_parent(r)).collect();
            let ideal = Submodule::new(ReducedMatrix::reduce(a.ring(), a.rank(), parent_rows)?);
            raw.push(Section { sub: s.clone(), ideal, quotient: q.algebra, proper });
        }
    }
    raw.sort_by_key(|s| s.quotient.size());
    let mut buckets: HashMap<Fingerprint, Vec<usize>> = HashMap::new();
    let mut out: Vec<Section> = Vec::new();
    for s in raw {
        let bucket = buckets.entry(fingerprint(&s.quotient)?).or_default();
        let dup = bucket.iter().any(|&k| {
            matches!(iso_search(&out[k].quotient, &s.quotient, DEFAULT_ISO_NODE_CAP), IsoOutcome::Isomorphic(_))
        });
        if !dup {
            bucket.push(out.len());
            out.push(s);
        }
    }
    Ok(out)
}

pub fn is_monolithic(a: &FiniteAlgebra) -> Result<bool> {
    if a.is_zero() {
        return Ok(false);
    }
    Ok(!monolith(a)?.is_zero())
}

/// Criticality together with the family it was tested against.
#[derive(Debug, Clone)]
pub struct Criticality {
    pub critical: Option<bool>,
    /// Generators of the variety of proper sections, up to isomorphism.
    pub family: Vec<FiniteAlgebra>,
    pub membership: Option<Membership>,
}

/// Every proper section is a quotient of a maximal proper subalgebra or of
/// `A / N` for a minimal ideal `N`, so these generate the same variety as
/// all proper sections.
pub fn proper_section_generators(a: &FiniteAlgebra, cap: usize) -> Result<Vec<FiniteAlgebra>> {
    let subs = all_subalgebras(a, cap)?;
    let proper: Vec<&Submodule> = subs.iter().filter(|s| s.size() < a.size()).collect();
    let mut family = Vec::new();
    for s in &proper {
        if !proper.iter().any(|t| t.size() > s.size() && t.contains_all(s)) {
            family.push(induce(a, &s.basis)?.algebra);
        }
    }
    for n in minimal_ideals(a)? {
        family.push(quotient(a, &n)?.algebra);
    }
    dedup_isomorphic(family)
}

pub fn is_critical(a: &FiniteAlgebra) -> Result<Criticality> {
    is_critical_with(a, &MembershipOptions::default(), DEFAULT_SUBALGEBRA_CAP)
}

pub fn is_critical_with(a: &FiniteAlgebra, opts: &MembershipOptions, cap: usize) -> Result<Criticality> {
    if a.is_zero() {
        return Ok(Criticality { critical: Some(false), family: Vec::new(), membership: None });
    }
    let family = match proper_section_generators(a, cap) {
        Ok(f) => f,
        Err(e) if e.is_cap() => return Ok(Criticality { critical: None, family: Vec::new(), membership: None }),
        Err(e) => return Err(e),
    };
    let m = var_member_with(a, &family, opts)?;
    Ok(Criticality { critical: m.verdict().map(|v| !v), family, membership: Some(m) })
}

/// Criticality tested against every proper section; slower, used as a
/// cross-check of [`is_critical`].
pub fn is_critical_exhaustive(a: &FiniteAlgebra, cap: usize) -> Result<Option<bool>> {
    if a.is_zero() {
        return Ok(Some(false));
    }
    let family: Vec<FiniteAlgebra> = enumerate_sections(a, true, cap)?.into_iter().map(|s| s.quotient).collect();
    Ok(var_member_with(a, &family, &MembershipOptions::default())?.verdict().map(|v| !v))
}

/// For prime `A` in `var(A')`, a section of `A'` isomorphic to `A`.
pub fn prime_section_witness(a: &FiniteAlgebra, a_prime: &FiniteAlgebra) -> Result<Checked<(Section, Homomorphism)>> {
    prime_section_witness_in(a, a_prime, a_prime)
}

/// As [`prime_section_witness`], searching the sections of `source`
/// (normally `A'` itself).
pub fn prime_section_witness_in(
    a: &FiniteAlgebra,
    a_prime: &FiniteAlgebra,
    source: &FiniteAlgebra,
) -> Result<Checked<(Section, Homomorphism)>> {
    const STATEMENT: &str = "a finite prime algebra in var(A') is a section of A'";
    if !is_prime(a)? {
        return Err(Error::InvalidArgument("the algebra is not prime".into()));
    }
    match var_member_with(a, std::slice::from_ref(a_prime), &MembershipOptions::default())?.verdict() {
        Some(true) => {}
        Some(false) => return Err(Error::InvalidArgument("the algebra is not in var(A')".into())),
        None => return Ok(Checked::Undecided("membership undecided".into())),
    }
    let mut undecided = false;
    let subs = match all_subalgebras(source, DEFAULT_SUBALGEBRA_CAP) {
        Ok(s) => s,
        Err(e) if e.is_cap() => return Ok(Checked::Undecided(e.to_string())),
        Err(e) => return Err(e),
    };
    for s in subs.into_iter().filter(|s| s.size() >= a.size()) {
        let ind = induce(source, &s.basis)?;
        for i in all_ideals(&ind.algebra, DEFAULT_LATTICE_CAP)?.ideals {
            if s.size() / i.size() != a.size() {
                continue;
            }
            let q = quotient(&ind.algebra, &i)?;
            match iso_search(&q.algebra, a, DEFAULT_ISO_NODE_CAP) {
                IsoOutcome::Isomorphic(h) => {
                    let rows: Vec<Vec<RingElem>> = i.rows().iter().map(|r| ind.to_parent(r)).collect();
                    let ideal = Submodule::new(ReducedMatrix::reduce(a.ring(), source.rank(), rows)?);
                    let proper = s.size() < source.size() || !ideal.is_zero();
                    return Ok(Checked::Holds((Section { sub: s, ideal, quotient: q.algebra, proper }, h)));
                }
                IsoOutcome::Undecided { .. } => undecided = true,
                IsoOutcome::NotIsomorphic => {}
            }
        }
    }
    if undecided {
        return Ok(Checked::Undecided("an isomorphism search hit its node cap".into()));
    }
    Ok(violation(STATEMENT, "no section of A' is isomorphic to A"))
}

/// `A ≅ B / C` with `B` a subalgebra of `P = ∏ S_i`.
#[derive(Debug, Clone)]
pub struct Representation {
    pub family: Vec<FiniteAlgebra>,
    pub product: FiniteAlgebra,
    pub offsets: Vec<usize>,
    pub sub: Submodule,
    pub kernel: Submodule,
    /// `B / C → A`, an isomorphism.
    pub target_iso: Homomorphism,
    pub quotient: FiniteAlgebra,
}

impl Representation {
    pub fn sequence(&self) -> Vec<u128> {
        self.family.iter().map(FiniteAlgebra::size).collect()
    }

    /// `S_i` embedded in `P`, as a submodule.
    pub fn factor(&self, i: usize) -> Submodule {
        let off = self.offsets[i];
        let rows = (0..self.family[i].rank()).map(|j| self.product.basis_vector(off + j)).collect();
        Submodule::new(ReducedMatrix::reduce_unchecked(self.product.ring(), self.product.rank(), rows))
    }

    fn embed(&self, i: usize, v: &[RingElem]) -> Vec<RingElem> {
        let mut out = vec![0; self.product.rank()];
        out[self.offsets[i]..self.offsets[i] + v.len()].copy_from_slice(v);
        out
    }

    fn project(&self, i: usize, v: &[RingElem]) -> Vec<RingElem> {
        v[self.offsets[i]..self.offsets[i] + self.family[i].rank()].to_vec()
    }

    /// Re-checks `B / C ≅ A`.
    pub fn verify(&self, a: &FiniteAlgebra) -> std::result::Result<(), String> {
        let ind = induce(&self.product, &self.sub.basis).map_err(|e| e.to_string())?;
        let local: Vec<Vec<RingElem>> = self.kernel.rows().iter().map(|r| ind.to_local(r)).collect();
        let c = Submodule::new(ReducedMatrix::reduce(ind.algebra.ring(), ind.algebra.rank(), local).map_err(|e| e.to_string())?);
        if !is_ideal(&ind.algebra, &c) {
            return Err("C is not an ideal of B".into());
        }
        let q = quotient(&ind.algebra, &c).map_err(|e| e.to_string())?;
        if q.algebra != self.quotient {
            return Err("recorded quotient differs from B / C".into());
        }
        self.target_iso.verify(&q.algebra, a)?;
        if !self.target_iso.is_bijective(&q.algebra, a) {
            return Err("B / C → A is not bijective".into());
        }
        Ok(())
    }
}

/// Checked properties of a minimal representation.
#[derive(Debug, Clone, Serialize)]
pub struct MinrepProperties {
    pub factors_critical: Vec<Option<bool>>,
    pub subdirect: bool,
    /// `None` when a factor has too many submodules to test.
    pub ideal_criterion: Option<bool>,
    pub ideals_meet_sub: bool,
    pub kernel_meets_factors_trivially: bool,
    /// Each `M(S_i) ◁ S_i` is similar to some minimal ideal of `A`.
    pub monolith_similarity: Vec<Option<bool>>,
}

impl MinrepProperties {
    pub fn violations(&self) -> Vec<TheoremViolation> {
        let mut out = Vec::new();
        let mut push = |ok: bool, what: &str| {
            if !ok {
                out.push(TheoremViolation { statement: "minimal representation".into(), detail: what.into() });
            }
        };
        push(self.factors_critical.iter().all(|c| *c != Some(false)), "a factor is not critical");
        push(self.subdirect, "B is not a subdirect product");
        push(self.ideal_criterion != Some(false), "ideal criterion B·D ⊆ D fails");
        push(self.ideals_meet_sub, "a nonzero ideal of a factor misses B");
        push(self.kernel_meets_factors_trivially, "C meets a factor");
        push(self.monolith_similarity.iter().all(|c| *c != Some(false)), "no minimal ideal similar to M(S_i)");
        out
    }
}

/// The critical sections of the pool algebras up to isomorphism, largest
/// first.
pub fn critical_sections(pool: &[FiniteAlgebra]) -> Result<Vec<FiniteAlgebra>> {
    let mut all = Vec::new();
    for p in pool {
        all.extend(enumerate_sections(p, false, DEFAULT_SUBALGEBRA_CAP)?.into_iter().map(|s| s.quotient));
    }
    let mut crit = Vec::new();
    for s in dedup_isomorphic(all)? {
        if is_critical(&s)?.critical == Some(true) {
            crit.push(s);
        }
    }
    crit.sort_by_key(|s| std::cmp::Reverse(s.size()));
    Ok(crit)
}

/// Families of at most `max_factors` pool members (non-increasing size),
/// in lexicographic order of their size sequences.
fn candidate_families(pool: &[FiniteAlgebra], target: u128, max_factors: usize, cap: u128) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(pool: &[FiniteAlgebra], start: usize, cur: &mut Vec<usize>, size: u128, max: usize, cap: u128, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max {
            return;
        }
        for k in start..pool.len() {
            let s = size.saturating_mul(pool[k].size());
            if s <= cap {
                cur.push(k);
                rec(pool, k, cur, s, max, cap, out);
                cur.pop();
            }
        }
    }
    rec(pool, 0, &mut Vec::new(), 1, max_factors, cap, &mut out);
    out.retain(|f| f.iter().map(|&k| pool[k].size()).product::<u128>() >= target);
    out.sort_by_cached_key(|f| f.iter().map(|&k| pool[k].size()).collect::<Vec<_>>());
    out
}

/// Searches `B ⊆ ∏ S_i` generated by lifts of generators of `A` such that
/// the paired closure meets `0 × A` trivially.
struct RepSearch<'a> {
    target: &'a FiniteAlgebra,
    gens: Vec<Vec<RingElem>>,
    space: ProductSpace<'a>,
    width: usize,
    candidates: Vec<Vec<Vec<RingElem>>>,
    nodes: u64,
    cap: u64,
}

impl RepSearch<'_> {
    fn collides(&self, picks: &[Vec<RingElem>]) -> bool {
        let pairs: Vec<Vec<RingElem>> =
            picks.iter().zip(&self.gens).map(|(p, g)| p.iter().chain(g).copied().collect()).collect();
        let q = closure(&self.space, &pairs);
        let left: Vec<Vec<RingElem>> = q.items.iter().map(|v| v[..self.width].to_vec()).collect();
        let ring = self.target.ring();
        kernel(ring, &left, self.width).rows().iter().any(|c| {
            let mut v = vec![0; self.target.rank()];
            for (k, item) in q.items.iter().enumerate() {
                axpy(ring, &mut v, c[k], &item[self.width..]);
            }
            !is_zero_vec(&v)
        })
    }

    fn run(&mut self, picks: &mut Vec<Vec<RingElem>>) -> Option<Option<Vec<Vec<RingElem>>>> {
        if picks.len() == self.gens.len() {
            return Some(Some(picks.clone()));
        }
        let d = picks.len();
        for k in 0..self.candidates[d].len() {
            self.nodes += 1;
            if self.nodes > self.cap {
                return None;
            }
            picks.push(self.candidates[d][k].clone());
            if !self.collides(picks) {
                match self.run(picks) {
                    None => return None,
                    Some(Some(found)) => return Some(Some(found)),
                    Some(None) => {}
                }
            }
            picks.pop();
        }
        Some(None)
    }
}

fn represent_in(a: &FiniteAlgebra, family: &[FiniteAlgebra], node_cap: u64) -> Result<Option<Option<Representation>>> {
    let refs: Vec<&FiniteAlgebra> = family.iter().collect();
    let prod = direct_product(&refs)?;
    let p = &prod.algebra;
    let gens = greedy_generators(a);
    let p_elems = p.elements(1 << 20)?;
    let candidates = gens
        .iter()
        .map(|g| {
            let ord = additive_order(a, g);
            p_elems.iter().filter(|v| additive_order(p, v).is_multiple_of(ord)).cloned().collect()
        })
        .collect();
    let space = ProductSpace::new(a.ring(), a.sig(), vec![p, a])?;
    let mut s = RepSearch { target: a, gens, space, width: p.rank(), candidates, nodes: 0, cap: node_cap };
    let picks = match s.run(&mut Vec::new()) {
        None => return Ok(None),
        Some(None) => return Ok(Some(None)),
        Some(Some(p)) => p,
    };
    let ring = a.ring();
    let pairs: Vec<Vec<RingElem>> = picks.iter().zip(&s.gens).map(|(x, g)| x.iter().chain(g).copied().collect()).collect();
    let q = closure(&s.space, &pairs);
    let width = p.rank();
    let left: Vec<Vec<RingElem>> = q.items.iter().map(|v| v[..width].to_vec()).collect();
    let b = closure(p, &picks).span;
    // C: the left parts of paired elements with zero right part
    let right: Vec<Vec<RingElem>> = q.items.iter().map(|v| v[width..].to_vec()).collect();
    let ker = kernel(ring, &right, a.rank());
    let c_rows: Vec<Vec<RingElem>> = ker
        .rows()
        .iter()
        .map(|c| {
            let mut v = vec![0; width];
            for (k, l) in left.iter().enumerate() {
                axpy(ring, &mut v, c[k], l);
            }
            v
        })
        .collect();
    let kernel_sub = Submodule::new(ReducedMatrix::reduce(ring, width, c_rows)?);
    let ind = induce(p, &b)?;
    let local: Vec<Vec<RingElem>> = kernel_sub.rows().iter().map(|r| ind.to_local(r)).collect();
    let c_local = Submodule::new(ReducedMatrix::reduce(ring, ind.algebra.rank(), local)?);
    let quot = quotient(&ind.algebra, &c_local)?;
    let images = quot
        .lifts
        .iter()
        .map(|l| {
            let parent = ind.to_parent(l);
            let x = solve_left(ring, &left, &parent)
                .ok_or_else(|| Error::Inconsistent("lift outside the paired closure".into()))?;
            let mut img = vec![0; a.rank()];
            for (c, r) in x.iter().zip(&right) {
                axpy(ring, &mut img, *c, r);
            }
            Ok(img)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(Some(Representation {
        family: family.to_vec(),
        product: prod.algebra.clone(),
        offsets: prod.offsets.clone(),
        sub: Submodule::new(b),
        kernel: kernel_sub,
        target_iso: Homomorphism::new(images),
        quotient: quot.algebra,
    })))
}

/// The lexicographically least representation of `A` over families of
/// critical sections of the pool, with its checked properties.
pub fn minimal_representation(
    a: &FiniteAlgebra,
    pool: &[FiniteAlgebra],
) -> Result<Checked<(Representation, MinrepProperties)>> {
    let crit = critical_sections(pool)?;
    let mut undecided = false;
    for fam in candidate_families(&crit, a.size(), DEFAULT_MAX_FACTORS, DEFAULT_PRODUCT_CAP) {
        let family: Vec<FiniteAlgebra> = fam.iter().map(|&k| crit[k].clone()).collect();
        match represent_in(a, &family, 200_000)? {
            None => undecided = true,
            Some(None) => {}
            Some(Some(rep)) => {
                if undecided {
                    return Ok(Checked::Undecided("a smaller family was not fully searched".into()));
                }
                if let Err(e) = rep.verify(a) {
                    return Ok(violation("representation", e));
                }
                let props = minrep_properties(a, &rep)?;
                if let Some(v) = props.violations().into_iter().next() {
                    return Ok(Checked::Violation(v));
                }
                return Ok(Checked::Holds((rep, props)));
            }
        }
    }
    Ok(Checked::Undecided("no representation within the factor and size caps".into()))
}

/// Every submodule, or `None` past the cap.
fn all_submodules(a: &FiniteAlgebra, cap: usize) -> Result<Option<Vec<ReducedMatrix>>> {
    let elems = a.elements(1 << 16)?;
    let mut seen: HashSet<ReducedMatrix> = HashSet::new();
    let zero = ReducedMatrix::zero(a.ring(), a.rank());
    seen.insert(zero.clone());
    let mut queue = vec![zero];
    let mut k = 0;
    while k < queue.len() {
        for e in &elems {
            if queue[k].contains(e) {
                continue;
            }
            let mut t = queue[k].clone();
            t.insert(e.clone());
            if seen.insert(t.clone()) {
                if seen.len() > cap {
                    return Ok(None);
                }
                queue.push(t);
            }
        }
        k += 1;
    }
    Ok(Some(queue))
}

pub fn minrep_properties(a: &FiniteAlgebra, rep: &Representation) -> Result<MinrepProperties> {
    let p = &rep.product;
    let b = &rep.sub;
    let mut factors_critical = Vec::new();
    let mut subdirect = true;
    let mut ideal_criterion = Some(true);
    let mut ideals_meet_sub = true;
    let mut kernel_meets_factors_trivially = true;
    let mut monolith_similarity = Vec::new();
    let minimal_a = minimal_ideals(a)?;
    for (i, s) in rep.family.iter().enumerate() {
        factors_critical.push(is_critical(s)?.critical);
        let proj: Vec<Vec<RingElem>> = b.rows().iter().map(|r| rep.project(i, r)).collect();
        subdirect &= ReducedMatrix::reduce(s.ring(), s.rank(), proj)?.size() == s.size();
        let factor = rep.factor(i);
        kernel_meets_factors_trivially &= rep.kernel.intersect(&factor).is_zero();
        for d in all_ideals(s, DEFAULT_LATTICE_CAP)?.nonzero() {
            let emb: Vec<Vec<RingElem>> = d.rows().iter().map(|r| rep.embed(i, r)).collect();
            let de = Submodule::new(ReducedMatrix::reduce(p.ring(), p.rank(), emb)?);
            ideals_meet_sub &= !de.intersect(b).is_zero();
        }
        match all_submodules(s, 4096)? {
            None => ideal_criterion = None,
            Some(subs) => {
                for d in subs {
                    let closed = one_sided_closed(p, b, &rep.embed_all(i, &d));
                    if closed != crate::algcore::is_ideal_span(s, &d) {
                        ideal_criterion = ideal_criterion.map(|_| false);
                    }
                }
            }
        }
        let ms = monolith(s)?;
        let mut found = Some(false);
        for n in &minimal_a {
            match similarity_check(a, n, s, &ms)? {
                Similarity::Similar(_) => {
                    found = Some(true);
                    break;
                }
                Similarity::Undecided(_) => found = None,
                Similarity::NotSimilar => {}
            }
        }
        monolith_similarity.push(found);
    }
    Ok(MinrepProperties {
        factors_critical,
        subdirect,
        ideal_criterion,
        ideals_meet_sub,
        kernel_meets_factors_trivially,
        monolith_similarity,
    })
}

impl Representation {
    fn embed_all(&self, i: usize, d: &ReducedMatrix) -> ReducedMatrix {
        let rows = d.rows().iter().map(|r| self.embed(i, r)).collect();
        ReducedMatrix::reduce_unchecked(self.product.ring(), self.product.rank(), rows)
    }
}

/// `ω(b_1, .., d, .., b_n) ∈ D` for all `b_j` in `B` and `d` in `D`.
fn one_sided_closed(p: &FiniteAlgebra, b: &Submodule, d: &ReducedMatrix) -> bool {
    let bs = b.rows();
    for (o, _, arity) in p.sig().ops() {
        if arity == 0 {
            continue;
        }
        for slot in 0..arity {
            let count = bs.len().pow(arity as u32 - 1);
            for row in d.rows() {
                for mut idx in 0..count {
                    let args: Vec<&[RingElem]> = (0..arity)
                        .map(|s| {
                            if s == slot {
                                row.as_slice()
                            } else {
                                let v = &bs[idx % bs.len()];
                                idx /= bs.len();
                                v.as_slice()
                            }
                        })
                        .collect();
                    if !d.contains(&p.apply(o, &args)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// `(I ◁ A) ∼ (J ◁ B)`: an isomorphism `α` of annihilator quotients and a
/// module isomorphism `μ: I → J` compatible with every operation having
/// exactly one argument in the ideal.
#[derive(Debug, Clone)]
pub struct SimilarityWitness {
    pub alpha: Homomorphism,
    /// Cyclic basis of `I` (vectors of `A`).
    pub i_basis: Vec<Vec<RingElem>>,
    /// `μ` on `i_basis` (vectors of `B`).
    pub mu: Vec<Vec<RingElem>>,
    /// Compatibility also holds for multilinear monomials of degree 2 and 3
    /// with one argument in the ideal.
    pub multilinear_extension: Option<bool>,
}

#[derive(Debug, Clone)]
pub enum Similarity {
    Similar(SimilarityWitness),
    NotSimilar,
    Undecided(String),
}

impl Similarity {
    pub fn is_similar(&self) -> bool {
        matches!(self, Similarity::Similar(_))
    }
}

struct Side<'a> {
    alg: &'a FiniteAlgebra,
    ideal: Induced,
    quot: Quotient,
}

fn side<'a>(alg: &'a FiniteAlgebra, i: &Submodule) -> Result<Side<'a>> {
    if !is_ideal(alg, i) {
        return Err(Error::NotAnIdeal);
    }
    let ann = annihilator(alg, i);
    Ok(Side { alg, ideal: induce(alg, &i.basis)?, quot: quotient(alg, &ann)? })
}

/// The vectors `ω(.., l_j, .., g, ..)` for every operation, a slot for the
/// ideal element `g` and every tuple of quotient basis lifts elsewhere.
fn action_tuples(sig_alg: &FiniteAlgebra, qrank: usize) -> Vec<(usize, usize, Vec<usize>)> {
    let mut out = Vec::new();
    for (o, _, arity) in sig_alg.sig().ops() {
        if arity == 0 {
            continue;
        }
        for slot in 0..arity {
            let count = qrank.pow(arity as u32 - 1);
            for mut idx in 0..count {
                let mut t = vec![0; arity - 1];
                for x in t.iter_mut().rev() {
                    *x = idx % qrank.max(1);
                    idx /= qrank.max(1);
                }
                out.push((o, slot, t));
            }
        }
    }
    out
}

fn act(alg: &FiniteAlgebra, o: usize, slot: usize, others: &[Vec<RingElem>], g: &[RingElem]) -> Vec<RingElem> {
    let mut it = others.iter();
    let args: Vec<&[RingElem]> =
        (0..=others.len()).map(|s| if s == slot { g } else { it.next().unwrap().as_slice() }).collect();
    alg.apply(o, &args)
}

impl SimilarityWitness {
    /// Re-checks `α`, `μ` and compatibility on all basis tuples.
    pub fn verify(&self, a: &FiniteAlgebra, i: &Submodule, b: &FiniteAlgebra, j: &Submodule) -> std::result::Result<(), String> {
        let sa = side(a, i).map_err(|e| e.to_string())?;
        let sb = side(b, j).map_err(|e| e.to_string())?;
        self.alpha.verify(&sa.quot.algebra, &sb.quot.algebra)?;
        if !self.alpha.is_bijective(&sa.quot.algebra, &sb.quot.algebra) {
            return Err("α is not bijective".into());
        }
        let ring = a.ring();
        if self.i_basis.len() != self.mu.len() {
            return Err("μ has the wrong number of images".into());
        }
        let span_i = ReducedMatrix::reduce(ring, a.rank(), self.i_basis.clone()).map_err(|e| e.to_string())?;
        if span_i != i.basis {
            return Err("recorded basis does not span I".into());
        }
        let mu_span = ReducedMatrix::reduce(ring, b.rank(), self.mu.clone()).map_err(|e| e.to_string())?;
        if mu_span != j.basis || i.size() != j.size() {
            return Err("μ is not a bijection onto J".into());
        }
        let mu_of = |v: &[RingElem]| -> std::result::Result<Vec<RingElem>, String> {
            let x = solve_left(ring, &self.i_basis, v).ok_or("value outside I")?;
            let mut out = vec![0; b.rank()];
            for (c, m) in x.iter().zip(&self.mu) {
                axpy(ring, &mut out, *c, m);
            }
            Ok(out)
        };
        // torsion relations of I must map to zero
        for row in kernel(ring, &self.i_basis, a.rank()).rows() {
            let mut out = vec![0; b.rank()];
            for (c, m) in row.iter().zip(&self.mu) {
                axpy(ring, &mut out, *c, m);
            }
            if !is_zero_vec(&out) {
                return Err("μ is not well defined".into());
            }
        }
        let qa = &sa.quot.algebra;
        let lifts_a: Vec<Vec<RingElem>> = qa.basis_vectors().iter().map(|v| sa.quot.lift(v)).collect();
        let lifts_b: Vec<Vec<RingElem>> =
            qa.basis_vectors().iter().map(|v| sb.quot.lift(&self.alpha.apply(qa, v))).collect();
        for (o, slot, t) in action_tuples(a, qa.rank()) {
            let oa: Vec<Vec<RingElem>> = t.iter().map(|&k| lifts_a[k].clone()).collect();
            let ob: Vec<Vec<RingElem>> = t.iter().map(|&k| lifts_b[k].clone()).collect();
            for (g, m) in self.i_basis.iter().zip(&self.mu) {
                let lhs = mu_of(&act(a, o, slot, &oa, g))?;
                let rhs = act(b, o, slot, &ob, m);
                if lhs != rhs {
                    return Err(format!("compatibility fails for '{}'", a.sig().name(o)));
                }
            }
        }
        Ok(())
    }
}

/// Finds a similarity witness: `α` runs over the isomorphisms of the
/// annihilator quotients; for each, the compatible module maps `μ` form the
/// kernel of a linear system, searched for a bijection.
pub fn similarity_check(a: &FiniteAlgebra, i: &Submodule, b: &FiniteAlgebra, j: &Submodule) -> Result<Similarity> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch);
    }
    if a.sig() != b.sig() {
        return Err(Error::SignatureMismatch);
    }
    let sa = side(a, i)?;
    let sb = side(b, j)?;
    if i.size() != j.size() || sa.quot.algebra.size() != sb.quot.algebra.size() {
        return Ok(Similarity::NotSimilar);
    }
    let (alphas, complete) = iso_search_all(&sa.quot.algebra, &sb.quot.algebra, DEFAULT_ISO_NODE_CAP, 4096);
    let mut capped = !complete;
    for alpha in alphas {
        match solve_mu(&sa, &sb, &alpha)? {
            MuSearch::Found(mu) => {
                let mut w = SimilarityWitness {
                    alpha,
                    i_basis: sa.ideal.basis.clone(),
                    mu,
                    multilinear_extension: None,
                };
                w.multilinear_extension = multilinear_extension(&sa, &sb, &w);
                return Ok(Similarity::Similar(w));
            }
            MuSearch::Capped => capped = true,
            MuSearch::None => {}
        }
    }
    Ok(if capped { Similarity::Undecided("search cap reached".into()) } else { Similarity::NotSimilar })
}

enum MuSearch {
    Found(Vec<Vec<RingElem>>),
    None,
    Capped,
}

fn solve_mu(sa: &Side, sb: &Side, alpha: &Homomorphism) -> Result<MuSearch> {
    let a = sa.alg;
    let b = sb.alg;
    let ring = a.ring();
    let ia = &sa.ideal;
    let jb = &sb.ideal;
    let s = ia.basis.len();
    let q = jb.basis.len();
    let rb = b.rank();
    let qa = &sa.quot.algebra;
    let lifts_a: Vec<Vec<RingElem>> = qa.basis_vectors().iter().map(|v| sa.quot.lift(v)).collect();
    let lifts_b: Vec<Vec<RingElem>> = qa.basis_vectors().iter().map(|v| sb.quot.lift(&alpha.apply(qa, v))).collect();
    // rows indexed by unknowns y_{l,t}: μ(g_l) = Σ_t y_{l,t} h_t
    let mut rows: Vec<Vec<RingElem>> = vec![Vec::new(); s * q];
    let push_block = |rows: &mut Vec<Vec<RingElem>>, f: &dyn Fn(usize, usize) -> Vec<RingElem>| {
        for l in 0..s {
            for t in 0..q {
                rows[l * q + t].extend(f(l, t));
            }
        }
    };
    for l0 in 0..s {
        let d = ring.order_scalar(ia.algebra.orders()[l0]);
        push_block(&mut rows, &|l, t| if l == l0 { b.scale(d, &jb.basis[t]) } else { vec![0; rb] });
    }
    for (o, slot, tup) in action_tuples(a, qa.rank()) {
        let oa: Vec<Vec<RingElem>> = tup.iter().map(|&k| lifts_a[k].clone()).collect();
        let ob: Vec<Vec<RingElem>> = tup.iter().map(|&k| lifts_b[k].clone()).collect();
        let th: Vec<Vec<RingElem>> = jb.basis.iter().map(|h| act(b, o, slot, &ob, h)).collect();
        for l0 in 0..s {
            let v = act(a, o, slot, &oa, &ia.basis[l0]);
            let local = ia.to_local(&v);
            let c: Vec<RingElem> = (0..s).map(|m| ia.algebra.coefficient(&local, m)).collect();
            push_block(&mut rows, &|m, t| {
                let mut e = b.scale(c[m], &jb.basis[t]);
                if m == l0 {
                    let neg = b.scale(ring.neg(1 % ring.size()), &th[t]);
                    e = b.add(&e, &neg);
                }
                e
            });
        }
    }
    let width = rows.first().map_or(0, Vec::len);
    let ker = kernel(ring, &rows, width);
    let Some(sols) = ker.span_elements(1 << 16) else { return Ok(MuSearch::Capped) };
    for y in sols {
        let mu: Vec<Vec<RingElem>> = (0..s)
            .map(|l| {
                let mut v = vec![0; rb];
                for t in 0..q {
                    axpy(ring, &mut v, y[l * q + t], &jb.basis[t]);
                }
                v
            })
            .collect();
        if ReducedMatrix::reduce(ring, rb, mu.clone())?.size() == jb.span.size() {
            return Ok(MuSearch::Found(mu));
        }
    }
    Ok(MuSearch::None)
}

fn multilinear_extension(sa: &Side, sb: &Side, w: &SimilarityWitness) -> Option<bool> {
    let a = sa.alg;
    let b = sb.alg;
    let ring = a.ring();
    let qa = &sa.quot.algebra;
    let lifts_a: Vec<Vec<RingElem>> = qa.basis_vectors().iter().map(|v| sa.quot.lift(v)).collect();
    let lifts_b: Vec<Vec<RingElem>> = qa.basis_vectors().iter().map(|v| sb.quot.lift(&w.alpha.apply(qa, v))).collect();
    let mu_of = |v: &[RingElem]| -> Option<Vec<RingElem>> {
        let local = sa.ideal.to_local(v);
        let mut out = vec![0; b.rank()];
        for (m, img) in w.mu.iter().enumerate() {
            axpy(ring, &mut out, sa.ideal.algebra.coefficient(&local, m), img);
        }
        Some(out)
    };
    let r = qa.rank();
    for deg in 2..=3u32 {
        let monos = enumerate_multilinear_monomials(a.sig(), deg, DEFAULT_DEPTH_CAP, DEFAULT_MONOMIAL_CAP).ok()?;
        let others = deg as usize - 1;
        let count = r.checked_pow(others as u32)?;
        if count.saturating_mul(monos.terms.len()) > 1 << 16 {
            return None;
        }
        for t in &monos.terms {
            for pos in 0..deg as usize {
                for mut idx in 0..count {
                    let mut pick = vec![0; others];
                    for x in pick.iter_mut().rev() {
                        *x = idx % r.max(1);
                        idx /= r.max(1);
                    }
                    for (g, m) in w.i_basis.iter().zip(&w.mu) {
                        let mut it = pick.iter();
                        let mut it2 = pick.iter();
                        let asg_a: Vec<Vec<RingElem>> = (0..deg as usize)
                            .map(|p| if p == pos { g.clone() } else { lifts_a[*it.next().unwrap()].clone() })
                            .collect();
                        let asg_b: Vec<Vec<RingElem>> = (0..deg as usize)
                            .map(|p| if p == pos { m.clone() } else { lifts_b[*it2.next().unwrap()].clone() })
                            .collect();
                        if mu_of(&eval_term(a, t, &asg_a))? != eval_term(b, t, &asg_b) {
                            return Some(false);
                        }
                    }
                }
            }
        }
    }
    Some(true)
}

/// Critical algebras generating the same variety have similar monoliths;
/// if one is prime they are isomorphic.
#[derive(Debug, Clone)]
pub struct MonolithReport {
    pub similarity: Checked<SimilarityWitness>,
    /// Present when either algebra is prime.
    pub isomorphism: Option<Checked<Homomorphism>>,
}

pub fn verify_similar_monoliths(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<MonolithReport> {
    verify_similar_monoliths_in(a, b, b)
}

/// As [`verify_similar_monoliths`], running the similarity and isomorphism
/// searches against `target` (normally `B` itself).
pub fn verify_similar_monoliths_in(a: &FiniteAlgebra, b: &FiniteAlgebra, target: &FiniteAlgebra) -> Result<MonolithReport> {
    const STATEMENT: &str = "critical algebras generating the same variety have similar monoliths";
    for x in [a, b] {
        match is_critical(x)?.critical {
            Some(true) => {}
            Some(false) => return Err(Error::InvalidArgument("both algebras must be critical".into())),
            None => {
                return Ok(MonolithReport {
                    similarity: Checked::Undecided("criticality undecided".into()),
                    isomorphism: None,
                })
            }
        }
    }
    match id_equal_with(a, b, &MembershipOptions::default())?.verdict() {
        Some(true) => {}
        Some(false) => return Err(Error::InvalidArgument("the algebras generate different varieties".into())),
        None => {
            return Ok(MonolithReport { similarity: Checked::Undecided("identity equality undecided".into()), isomorphism: None })
        }
    }
    let ma = monolith(a)?;
    let mb = monolith(target)?;
    let similarity = match similarity_check(a, &ma, target, &mb)? {
        Similarity::Similar(w) => Checked::Holds(w),
        Similarity::NotSimilar => violation(STATEMENT, "no similarity witness exists"),
        Similarity::Undecided(r) => Checked::Undecided(r),
    };
    let isomorphism = if is_prime(a)? || is_prime(b)? {
        Some(match iso_search(a, target, DEFAULT_ISO_NODE_CAP) {
            IsoOutcome::Isomorphic(h) => Checked::Holds(h),
            IsoOutcome::NotIsomorphic => violation("critical algebras with one prime are isomorphic", "not isomorphic"),
            IsoOutcome::Undecided { nodes } => Checked::Undecided(format!("iso search stopped after {nodes} nodes")),
        })
    } else {
        None
    };
    Ok(MonolithReport { similarity, isomorphism })
}
