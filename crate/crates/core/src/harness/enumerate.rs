//! Exhaustive enumeration of structure tables on a fixed module.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::algcore::{additive_order, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::modring::matrix::solve_left;
use crate::modring::{gcd, ReducedMatrix, Ring, RingElem};
use crate::sigterm::Signature;

/// Operation index, argument tuple and the candidate values of that entry.
type Slot = (usize, Vec<usize>, Vec<Vec<u32>>);

/// Default cap on the raw table count.
pub const DEFAULT_RAW_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    None,
    BasisChange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    Prime,
    Semiprime,
    Simple,
    Monolithic,
    Critical,
}

impl Predicate {
    pub const ALL: [Predicate; 5] =
        [Predicate::Prime, Predicate::Semiprime, Predicate::Simple, Predicate::Monolithic, Predicate::Critical];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::Prime => "prime",
            Predicate::Semiprime => "semiprime",
            Predicate::Simple => "simple",
            Predicate::Monolithic => "monolithic",
            Predicate::Critical => "critical",
        }
    }

    pub fn parse(s: &str) -> Option<Predicate> {
        Predicate::ALL.into_iter().find(|p| p.name() == s)
    }
}

#[derive(Debug, Clone)]
pub struct EnumerationJob {
    pub ring: Arc<Ring>,
    pub orders: Vec<u32>,
    pub sig: Arc<Signature>,
    pub symmetry: Symmetry,
    pub predicates: Vec<Predicate>,
    pub raw_cap: u128,
}

impl EnumerationJob {
    pub fn new(ring: &Arc<Ring>, orders: Vec<u32>, sig: &Arc<Signature>) -> Self {
        EnumerationJob {
            ring: ring.clone(),
            orders,
            sig: sig.clone(),
            symmetry: Symmetry::BasisChange,
            predicates: Predicate::ALL.to_vec(),
            raw_cap: DEFAULT_RAW_CAP,
        }
    }

    fn ambient(&self, coords: &[u32]) -> Vec<RingElem> {
        let ring = &self.ring;
        coords
            .iter()
            .zip(&self.orders)
            .map(|(&c, &d)| if ring.is_field_ext() { c } else { ring.mul(c, ring.embed_factor(d)) })
            .collect()
    }

    /// The admissible values of one table entry, as coordinate vectors in
    /// lexicographic order.
    fn slots(&self) -> Vec<Slot> {
        let ring = &self.ring;
        let r = self.orders.len();
        let basis_order = |i: usize| if ring.is_field_ext() { ring.characteristic() } else { self.orders[i] };
        let mut out = Vec::new();
        for (o, _, arity) in self.sig.ops() {
            let bound = |divisor: u32| -> Vec<Vec<u32>> {
                let mut vals: Vec<Vec<u32>> = vec![Vec::new()];
                for k in 0..r {
                    let range = if ring.is_field_ext() { ring.size() } else { self.orders[k] };
                    vals = vals
                        .into_iter()
                        .flat_map(|v| (0..range).map(move |c| [v.clone(), vec![c]].concat()))
                        .collect();
                }
                vals.retain(|v| {
                    let ord = (0..r).fold(1u64, |acc, k| {
                        let o = if ring.is_field_ext() {
                            if v[k] == 0 { 1 } else { ring.characteristic() as u64 }
                        } else {
                            let d = self.orders[k] as u64;
                            d / gcd(v[k] as u64, d)
                        };
                        acc / gcd(acc, o) * o
                    });
                    (divisor as u64).is_multiple_of(ord)
                });
                vals
            };
            if arity == 0 {
                out.push((o, Vec::new(), bound(ring.characteristic().max(ring.size()))));
                continue;
            }
            let mut tuple = vec![0usize; arity];
            for _ in 0..r.pow(arity as u32) {
                let g = tuple.iter().fold(0u64, |acc, &i| gcd(acc, basis_order(i) as u64)) as u32;
                out.push((o, tuple.clone(), bound(g)));
                for k in (0..arity).rev() {
                    tuple[k] += 1;
                    if tuple[k] < r {
                        break;
                    }
                    tuple[k] = 0;
                }
            }
        }
        out
    }

    /// `∏ |admissible values|` over all entries.
    pub fn raw_count(&self) -> u128 {
        self.slots().iter().fold(1u128, |acc, (_, _, v)| acc.saturating_mul(v.len() as u128))
    }

    fn build(&self, slots: &[Slot], digits: &[usize]) -> Result<FiniteAlgebra> {
        let mut b = FiniteAlgebra::builder(&self.ring, &self.sig, self.orders.clone());
        for ((o, t, vals), &d) in slots.iter().zip(digits) {
            b.set_vector(*o, t, self.ambient(&vals[d]))?;
        }
        b.build()
    }
}

fn check_cap(job: &EnumerationJob) -> Result<Vec<Slot>> {
    let slots = job.slots();
    let count = slots.iter().fold(1u128, |acc, (_, _, v)| acc.saturating_mul(v.len() as u128));
    if count > job.raw_cap {
        return Err(Error::cap("raw tables", u64::try_from(job.raw_cap).unwrap_or(u64::MAX)));
    }
    Ok(slots)
}

fn advance(digits: &mut [usize], radix: &[usize]) -> bool {
    for k in (0..digits.len()).rev() {
        digits[k] += 1;
        if digits[k] < radix[k] {
            return true;
        }
        digits[k] = 0;
    }
    false
}

/// Every table satisfying torsion compatibility, in lexicographic order.
pub fn enumerate_raw(job: &EnumerationJob) -> Result<Vec<FiniteAlgebra>> {
    let slots = check_cap(job)?;
    let radix: Vec<usize> = slots.iter().map(|(_, _, v)| v.len()).collect();
    let mut digits = vec![0; slots.len()];
    let mut out = Vec::new();
    loop {
        out.push(job.build(&slots, &digits)?);
        if !advance(&mut digits, &radix) {
            return Ok(out);
        }
    }
}

/// The invertible module endomorphisms, as images of the basis.
pub fn module_automorphisms(a: &FiniteAlgebra, cap: usize) -> Result<Vec<Vec<Vec<RingElem>>>> {
    let elems = a.elements(1 << 16)?;
    let r = a.rank();
    let ring = a.ring();
    let per_basis: Vec<Vec<Vec<RingElem>>> = (0..r)
        .map(|i| {
            let d = additive_order(a, &a.basis_vector(i));
            elems.iter().filter(|v| d.is_multiple_of(additive_order(a, v))).cloned().collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut pick: Vec<Vec<RingElem>> = Vec::new();
    fn rec(
        ring: &Arc<Ring>,
        a: &FiniteAlgebra,
        per: &[Vec<Vec<RingElem>>],
        pick: &mut Vec<Vec<RingElem>>,
        out: &mut Vec<Vec<Vec<RingElem>>>,
        cap: usize,
    ) -> Result<()> {
        if pick.len() == per.len() {
            if ReducedMatrix::reduce(ring, a.rank(), pick.clone())?.size() == a.size() {
                if out.len() >= cap {
                    return Err(Error::cap("module automorphisms", cap as u64));
                }
                out.push(pick.clone());
            }
            return Ok(());
        }
        for v in &per[pick.len()] {
            pick.push(v.clone());
            rec(ring, a, per, pick, out, cap)?;
            pick.pop();
        }
        Ok(())
    }
    rec(ring, a, &per_basis, &mut pick, &mut out, cap)?;
    Ok(out)
}

/// Table digits of `A` rewritten in the basis `g(e_1), .., g(e_r)`.
fn transform(
    job: &EnumerationJob,
    slots: &[Slot],
    a: &FiniteAlgebra,
    g: &[Vec<RingElem>],
) -> Option<Vec<usize>> {
    let ring = a.ring();
    let coords = |v: &[RingElem]| -> Option<Vec<u32>> {
        let x = solve_left(ring, g, v)?;
        Some(
            x.iter()
                .zip(&job.orders)
                .map(|(&c, &d)| if ring.is_field_ext() { c } else { c % d })
                .collect(),
        )
    };
    slots
        .iter()
        .map(|(o, t, vals)| {
            let args: Vec<&[RingElem]> = t.iter().map(|&i| g[i].as_slice()).collect();
            let v = if args.is_empty() { a.constant(*o).to_vec() } else { a.apply(*o, &args) };
            let c = coords(&v)?;
            vals.iter().position(|x| *x == c)
        })
        .collect()
}

/// One table per isomorphism class (basis change), each the
/// lexicographically least table of its orbit.
pub fn enumerate_algebras(job: &EnumerationJob) -> Result<Vec<FiniteAlgebra>> {
    if job.symmetry == Symmetry::None {
        return enumerate_raw(job);
    }
    let slots = check_cap(job)?;
    let radix: Vec<usize> = slots.iter().map(|(_, _, v)| v.len()).collect();
    let probe = FiniteAlgebra::builder(&job.ring, &job.sig, job.orders.clone()).build()?;
    let group = module_automorphisms(&probe, 1 << 16)?;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut digits = vec![0; slots.len()];
    let mut out = Vec::new();
    loop {
        if !seen.contains(&digits) {
            let a = job.build(&slots, &digits)?;
            for g in &group {
                let t = transform(job, &slots, &a, g)
                    .ok_or_else(|| Error::Inconsistent("basis change left the admissible tables".into()))?;
                seen.insert(t);
            }
            out.push(a);
        }
        if !advance(&mut digits, &radix) {
            return Ok(out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algcore::{iso_search, IsoOutcome, DEFAULT_ISO_NODE_CAP};

    fn job(n: u32, orders: Vec<u32>) -> EnumerationJob {
        EnumerationJob::new(&Ring::modular(n).unwrap(), orders, &Signature::binary("mul"))
    }

    /// Pairwise isomorphism classes of the raw list, without orbits.
    fn classes_by_pairwise_iso(raw: Vec<FiniteAlgebra>) -> Vec<FiniteAlgebra> {
        let mut reps: Vec<FiniteAlgebra> = Vec::new();
        for a in raw {
            let known = reps.iter().any(|b| match iso_search(b, &a, DEFAULT_ISO_NODE_CAP) {
                IsoOutcome::Isomorphic(_) => true,
                IsoOutcome::NotIsomorphic => false,
                IsoOutcome::Undecided { .. } => panic!("undecided"),
            });
            if !known {
                reps.push(a);
            }
        }
        reps
    }

    #[test]
    fn raw_counts() {
        assert_eq!(job(2, vec![2]).raw_count(), 2);
        assert_eq!(job(3, vec![3]).raw_count(), 3);
        assert_eq!(job(2, vec![2, 2]).raw_count(), 256);
        // x of order 2 in Z/4: x·x must have order dividing 2
        assert_eq!(job(4, vec![2]).raw_count(), 2);
        assert_eq!(enumerate_raw(&job(2, vec![2, 2])).unwrap().len(), 256);
    }

    #[test]
    fn rank_one_classes() {
        assert_eq!(enumerate_algebras(&job(2, vec![2])).unwrap().len(), 2);
        // x·x ∈ {0, x, -x}; x ↦ -x identifies the last two
        assert_eq!(enumerate_algebras(&job(3, vec![3])).unwrap().len(), 2);
    }

    #[test]
    fn orbit_representatives_match_pairwise_iso() {
        for j in [job(2, vec![2]), job(3, vec![3]), job(2, vec![2, 2]), job(4, vec![4]), job(4, vec![2])] {
            let orbit = enumerate_algebras(&j).unwrap();
            let pairwise = classes_by_pairwise_iso(enumerate_raw(&j).unwrap());
            assert_eq!(orbit.len(), pairwise.len(), "{:?}", j.orders);
            for (i, a) in orbit.iter().enumerate() {
                for b in &orbit[i + 1..] {
                    assert_eq!(iso_search(a, b, DEFAULT_ISO_NODE_CAP), IsoOutcome::NotIsomorphic);
                }
                assert!(pairwise.iter().any(|b| matches!(iso_search(a, b, DEFAULT_ISO_NODE_CAP), IsoOutcome::Isomorphic(_))));
            }
        }
    }

    #[test]
    fn automorphism_group_sizes() {
        let b = |n: u32, o: Vec<u32>| FiniteAlgebra::builder(&Ring::modular(n).unwrap(), &Signature::binary("mul"), o).build().unwrap();
        assert_eq!(module_automorphisms(&b(2, vec![2, 2]), 100).unwrap().len(), 6);
        assert_eq!(module_automorphisms(&b(3, vec![3]), 100).unwrap().len(), 2);
        // Aut(Z/4 ⊕ Z/2) has order 8
        assert_eq!(module_automorphisms(&b(4, vec![4, 2]), 100).unwrap().len(), 8);
    }

    #[test]
    fn raw_cap_enforced() {
        let mut j = job(2, vec![2, 2]);
        j.raw_cap = 100;
        assert!(enumerate_algebras(&j).unwrap_err().is_cap());
    }
}
