//! Ideals, products of subsets, monoliths, annihilators and the
//! semiprime / prime / simple predicates.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::algcore::{closure, eval_term, FiniteAlgebra, Submodule};
use crate::error::{Error, Result};
use crate::modring::matrix::{is_zero_vec, smith};
use crate::modring::{kernel, ReducedMatrix, RingElem};
use crate::sigterm::enumerate_multilinear_monomials;

pub use crate::algcore::Submodule as Ideal;

/// Default cap on the size of an ideal lattice.
pub const DEFAULT_LATTICE_CAP: usize = 4096;

pub fn is_ideal(a: &FiniteAlgebra, s: &Submodule) -> bool {
    crate::algcore::is_ideal_span(a, &s.basis)
}

/// Smallest submodule containing `gens` and closed under
/// `ω(b_1, .., v, .., b_m)` for `b_j` ranging over `base`.
fn one_slot_closure(a: &FiniteAlgebra, gens: &[Vec<RingElem>], base: &[Vec<RingElem>]) -> ReducedMatrix {
    let mut span = ReducedMatrix::zero(a.ring(), a.rank());
    let mut items: Vec<Vec<RingElem>> = Vec::new();
    for g in gens {
        if span.insert(g.clone()) {
            items.push(g.clone());
        }
    }
    let mut k = 0;
    while k < items.len() {
        let item = items[k].clone();
        for (o, _, arity) in a.sig().ops() {
            if arity == 0 {
                continue;
            }
            let count = base.len().pow(arity as u32 - 1);
            for slot in 0..arity {
                for idx in 0..count {
                    let mut rest = idx;
                    let mut args: Vec<&[RingElem]> = vec![&[]; arity];
                    for (s, arg) in args.iter_mut().enumerate().rev() {
                        if s == slot {
                            *arg = &item;
                        } else {
                            *arg = &base[rest % base.len()];
                            rest /= base.len();
                        }
                    }
                    let v = a.apply(o, &args);
                    if span.insert(v.clone()) {
                        items.push(v);
                    }
                }
            }
        }
        k += 1;
    }
    span
}

/// The least ideal containing the ambient vectors `gens`.
pub fn ideal_closure(a: &FiniteAlgebra, gens: &[Vec<RingElem>]) -> Submodule {
    Submodule::ideal(one_slot_closure(a, gens, &a.basis_vectors()))
}

fn check_factors(a: &FiniteAlgebra, factors: &[&Submodule]) -> Result<()> {
    if factors.len() < 2 {
        return Err(Error::InvalidArgument("a product needs at least two factors".into()));
    }
    if factors.len() > 16 {
        return Err(Error::InvalidArgument("at most 16 factors are supported".into()));
    }
    for s in factors {
        if s.basis.cols() != a.rank() || !s.rows().iter().all(|r| a.is_vector(r)) {
            return Err(Error::ShapeMismatch("factor is not a submodule of the algebra".into()));
        }
    }
    Ok(())
}

/// `S_1 · .. · S_m`: the span of all multilinear evaluations with one
/// argument from each `S_i` and any number of further arguments from `A`.
///
/// Computed exactly: for every set `T` of factor slots, `V(T)` is the span
/// of values of monomials whose factor variables are exactly `T`. Then
/// `V(∅) = A`, `V({i})` is the ideal generated by `S_i`, and `V(T)` is the
/// ideal generated by `ω(V(T_1), .., V(T_n))` over ordered partitions of `T`
/// into proper parts.
pub fn ideal_product(a: &FiniteAlgebra, factors: &[&Submodule]) -> Result<Submodule> {
    check_factors(a, factors)?;
    let base = a.basis_vectors();
    Ok(Submodule::ideal(product_fixpoint(a, factors, &base)))
}

/// As [`ideal_product`] but without auxiliary arguments (`t = 0`): only
/// constants may fill the remaining leaves.
pub fn ideal_product_no_aux(a: &FiniteAlgebra, factors: &[&Submodule]) -> Result<Submodule> {
    check_factors(a, factors)?;
    let base = closure(a, &[]).items;
    Ok(Submodule::new(product_fixpoint(a, factors, &base)))
}

fn product_fixpoint(a: &FiniteAlgebra, factors: &[&Submodule], base: &[Vec<RingElem>]) -> ReducedMatrix {
    let m = factors.len();
    let full: usize = (1 << m) - 1;
    let mut v: Vec<Vec<Vec<RingElem>>> = vec![Vec::new(); full + 1];
    v[0] = base.to_vec();
    let mut masks: Vec<usize> = (1..=full).collect();
    masks.sort_by_key(|t| t.count_ones());
    for t in masks {
        let members: Vec<usize> = (0..m).filter(|i| t >> i & 1 == 1).collect();
        let mut gens: Vec<Vec<RingElem>> = Vec::new();
        if members.len() == 1 {
            gens.extend(factors[members[0]].rows().iter().cloned());
        } else {
            for (o, _, arity) in a.sig().ops() {
                if arity < 2 {
                    continue;
                }
                let mut assign = vec![0usize; members.len()];
                loop {
                    let mut parts = vec![0usize; arity];
                    for (k, &i) in members.iter().enumerate() {
                        parts[assign[k]] |= 1 << i;
                    }
                    if !parts.contains(&t) {
                        push_products(a, o, &parts, &v, &mut gens);
                    }
                    let mut k = 0;
                    while k < assign.len() {
                        assign[k] += 1;
                        if assign[k] < arity {
                            break;
                        }
                        assign[k] = 0;
                        k += 1;
                    }
                    if k == assign.len() {
                        break;
                    }
                }
            }
        }
        let span = one_slot_closure(a, &gens, base);
        v[t] = span.rows().to_vec();
        if t == full {
            return span;
        }
    }
    unreachable!("the full mask is processed last")
}

fn push_products(a: &FiniteAlgebra, op: usize, parts: &[usize], v: &[Vec<Vec<RingElem>>], out: &mut Vec<Vec<RingElem>>) {
    let lists: Vec<&Vec<Vec<RingElem>>> = parts.iter().map(|&p| &v[p]).collect();
    if lists.iter().any(|l| l.is_empty()) {
        return;
    }
    let mut pos = vec![0usize; lists.len()];
    loop {
        let args: Vec<&[RingElem]> = pos.iter().zip(&lists).map(|(&p, l)| l[p].as_slice()).collect();
        let w = a.apply(op, &args);
        if !is_zero_vec(&w) {
            out.push(w);
        }
        let mut k = lists.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            pos[k] += 1;
            if pos[k] < lists[k].len() {
                break;
            }
            pos[k] = 0;
        }
    }
}

/// Result of the enumeration route to an ideal product.
#[derive(Debug, Clone)]
pub struct BoundedProduct {
    pub span: Submodule,
    /// The span stopped growing from `t - 1` to `t` auxiliary variables and
    /// is an ideal.
    pub stabilized: bool,
    pub extra_vars: usize,
}

/// Ideal product by enumerating multilinear monomials with `t = 0, 1, ..`
/// auxiliary variables up to `max_extra`, stopping once the span is an
/// ideal and did not grow at the last step. Always a lower bound.
pub fn ideal_product_bounded(
    a: &FiniteAlgebra,
    factors: &[&Submodule],
    max_extra: usize,
    depth_cap: usize,
) -> Result<BoundedProduct> {
    check_factors(a, factors)?;
    let m = factors.len();
    let basis = a.basis_vectors();
    let mut span = ReducedMatrix::zero(a.ring(), a.rank());
    let mut previous: Option<ReducedMatrix> = None;
    for t in 0..=max_extra {
        let monos = enumerate_multilinear_monomials(a.sig(), (m + t) as u32, depth_cap, 1_000_000)?;
        let mut lists: Vec<&[Vec<RingElem>]> = factors.iter().map(|s| s.rows()).collect();
        lists.extend(std::iter::repeat_n(basis.as_slice(), t));
        if lists.iter().all(|l| !l.is_empty()) {
            let mut pos = vec![0usize; lists.len()];
            'tuples: loop {
                let assign: Vec<Vec<RingElem>> = pos.iter().zip(&lists).map(|(&p, l)| l[p].clone()).collect();
                for mono in &monos.terms {
                    span.insert(eval_term(a, mono, &assign));
                }
                let mut k = lists.len();
                loop {
                    if k == 0 {
                        break 'tuples;
                    }
                    k -= 1;
                    pos[k] += 1;
                    if pos[k] < lists[k].len() {
                        break;
                    }
                    pos[k] = 0;
                }
            }
        }
        if previous.as_ref() == Some(&span) && crate::algcore::is_ideal_span(a, &span) {
            return Ok(BoundedProduct { span: Submodule::ideal(span), stabilized: true, extra_vars: t });
        }
        previous = Some(span.clone());
    }
    let stabilized = false;
    Ok(BoundedProduct { span: Submodule::new(span), stabilized, extra_vars: max_extra })
}

/// `S^1` is the ideal generated by `S`; `S^k` for `k >= 2` is the `k`-fold
/// product `S · .. · S`.
pub fn power(a: &FiniteAlgebra, s: &Submodule, k: usize) -> Result<Submodule> {
    match k {
        0 => Err(Error::InvalidArgument("power must be at least 1".into())),
        1 => Ok(ideal_closure(a, s.rows())),
        _ => ideal_product(a, &vec![s; k]),
    }
}

/// Scales the first nonzero entry of `v` to its canonical associate, so
/// that unit multiples share one representative.
fn unit_normalize(a: &FiniteAlgebra, v: &[RingElem]) -> Vec<RingElem> {
    let ring = a.ring();
    match v.iter().find(|&&x| x != 0) {
        None => v.to_vec(),
        Some(&x) => {
            let (u, _) = ring.assoc(x);
            a.scale(u, v)
        }
    }
}

/// The distinct principal ideals `(a)` for `a != 0`, smallest first.
pub fn principal_ideals(a: &FiniteAlgebra) -> Result<Vec<Submodule>> {
    let elems = a.elements(crate::algcore::MAX_ELEMENTS.max(1 << 20))?;
    let mut reps = HashSet::new();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for v in elems.into_iter().skip(1) {
        if !reps.insert(unit_normalize(a, &v)) {
            continue;
        }
        let i = ideal_closure(a, &[v]);
        if seen.insert(i.basis.clone()) {
            out.push(i);
        }
    }
    out.sort_by(|x, y| x.size().cmp(&y.size()).then_with(|| x.rows().cmp(y.rows())));
    Ok(out)
}

/// All ideals with the covering relation of the inclusion order.
#[derive(Debug, Clone)]
pub struct IdealLattice {
    /// Sorted by size, then by canonical rows; `ideals[0]` is `0`.
    pub ideals: Vec<Submodule>,
    /// `covers[i]` lists the ideals covering `ideals[i]`.
    pub covers: Vec<Vec<usize>>,
}

impl IdealLattice {
    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn index_of(&self, s: &Submodule) -> Option<usize> {
        self.ideals.iter().position(|i| i == s)
    }

    pub fn minimal_nonzero(&self) -> Vec<&Submodule> {
        self.covers[0].iter().map(|&i| &self.ideals[i]).collect()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &Submodule> {
        self.ideals.iter().skip(1)
    }
}

/// Every ideal is a sum of principal ideals, so the lattice is the closure
/// of `{0}` under adding principal ideals.
pub fn all_ideals(a: &FiniteAlgebra, cap: usize) -> Result<IdealLattice> {
    let principals = principal_ideals(a)?;
    let zero = Submodule::zero(a);
    let mut index: HashMap<ReducedMatrix, usize> = HashMap::new();
    let mut ideals = vec![zero.clone()];
    index.insert(zero.basis.clone(), 0);
    let mut sums: Vec<Vec<usize>> = Vec::new();
    let mut k = 0;
    while k < ideals.len() {
        let cur = ideals[k].clone();
        let mut mine = Vec::new();
        for p in &principals {
            if cur.contains_all(p) {
                continue;
            }
            let s = cur.sum(p);
            let idx = match index.get(&s.basis) {
                Some(&i) => i,
                None => {
                    if ideals.len() >= cap {
                        return Err(Error::cap("ideal lattice", cap as u64));
                    }
                    index.insert(s.basis.clone(), ideals.len());
                    ideals.push(Submodule::ideal(s.basis));
                    ideals.len() - 1
                }
            };
            mine.push(idx);
        }
        sums.push(mine);
        k += 1;
    }
    // covers of I are the minimal members of {I + P}
    let mut order: Vec<usize> = (0..ideals.len()).collect();
    order.sort_by(|&x, &y| ideals[x].size().cmp(&ideals[y].size()).then_with(|| ideals[x].rows().cmp(ideals[y].rows())));
    let mut rank = vec![0; ideals.len()];
    for (pos, &i) in order.iter().enumerate() {
        rank[i] = pos;
    }
    let mut covers = vec![Vec::new(); ideals.len()];
    for (i, cand) in sums.iter().enumerate() {
        let mut c: Vec<usize> = cand.clone();
        c.sort_unstable();
        c.dedup();
        let minimal: Vec<usize> = c
            .iter()
            .copied()
            .filter(|&j| !c.iter().any(|&l| l != j && ideals[j].contains_all(&ideals[l])))
            .collect();
        covers[rank[i]] = minimal.into_iter().map(|j| rank[j]).collect();
        covers[rank[i]].sort_unstable();
    }
    let sorted: Vec<Submodule> = order.into_iter().map(|i| ideals[i].clone()).collect();
    Ok(IdealLattice { ideals: sorted, covers })
}

/// `M(A)`: the intersection of the principal ideals of nonzero elements.
pub fn monolith(a: &FiniteAlgebra) -> Result<Submodule> {
    if a.is_zero() {
        return Err(Error::ZeroAlgebra);
    }
    let mut m = Submodule::full(a);
    for p in principal_ideals(a)? {
        m = m.intersect(&p);
        if m.is_zero() {
            break;
        }
    }
    Ok(Submodule::ideal(m.basis))
}

/// `M(A)` as the intersection of all nonzero members of a lattice.
pub fn monolith_from_lattice(a: &FiniteAlgebra, lattice: &IdealLattice) -> Result<Submodule> {
    if a.is_zero() {
        return Err(Error::ZeroAlgebra);
    }
    let mut m = Submodule::full(a);
    for i in lattice.nonzero() {
        m = m.intersect(i);
    }
    Ok(Submodule::ideal(m.basis))
}

/// Row vector `c` with `y ∈ Y ⇔ y · c = 0`, from the Smith form of `Y`.
fn membership_checker(a: &FiniteAlgebra, y: &ReducedMatrix) -> Vec<Vec<RingElem>> {
    let ring = a.ring();
    let r = a.rank();
    let sm = smith(ring, y.rows(), r);
    // column j of V scaled by ann(d_j)
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let d = sm.diag.get(j).copied().unwrap_or(0);
                    ring.mul(sm.v[i][j], ring.ann(d))
                })
                .collect()
        })
        .collect()
}

/// `{x ∈ X : L(x) ∈ Y}` for the linear maps `L` given by `maps`, where
/// `maps(x)` lists the values of all maps at `x`.
fn preimage(
    a: &FiniteAlgebra,
    x: &ReducedMatrix,
    y: &ReducedMatrix,
    maps: impl Fn(&[RingElem]) -> Vec<Vec<RingElem>>,
) -> ReducedMatrix {
    let ring = a.ring();
    let check = membership_checker(a, y);
    let rows: Vec<Vec<RingElem>> = x
        .rows()
        .iter()
        .map(|g| {
            let mut out = Vec::new();
            for val in maps(g) {
                out.extend((0..a.rank()).map(|col| {
                    (0..a.rank()).fold(0, |acc, i| ring.add(acc, ring.mul(val[i], check[i][col])))
                }));
            }
            out
        })
        .collect();
    let width = rows.first().map_or(0, Vec::len);
    let ker = kernel(ring, &rows, width);
    let gens: Vec<Vec<RingElem>> = ker.rows().iter().map(|c| x.combine(c)).collect();
    ReducedMatrix::reduce_unchecked(ring, a.rank(), gens)
}

fn basis_tuples(r: usize, len: usize) -> Vec<Vec<usize>> {
    let count = r.pow(len as u32);
    (0..count)
        .map(|mut idx| {
            let mut t = vec![0; len];
            for k in (0..len).rev() {
                t[k] = idx % r;
                idx /= r;
            }
            t
        })
        .collect()
}

/// Largest ideal contained in the submodule `x`.
pub fn largest_ideal_in(a: &FiniteAlgebra, x: &ReducedMatrix) -> Submodule {
    let basis = a.basis_vectors();
    let r = a.rank();
    let mut cur = x.clone();
    loop {
        let next = preimage(a, &cur, &cur, |v| {
            let mut vals = Vec::new();
            for (o, _, arity) in a.sig().ops() {
                if arity == 0 {
                    continue;
                }
                for slot in 0..arity {
                    for t in basis_tuples(r, arity - 1) {
                        let mut it = t.iter();
                        let args: Vec<&[RingElem]> = (0..arity)
                            .map(|s| if s == slot { v } else { basis[*it.next().unwrap()].as_slice() })
                            .collect();
                        vals.push(a.apply(o, &args));
                    }
                }
            }
            vals
        });
        if next == cur {
            return Submodule::ideal(cur);
        }
        cur = next;
    }
}

/// `Ann_B(S)`: the greatest ideal `I` of `B` with `S · I = 0`. It is the
/// largest ideal inside `{x : ω(.., s, .., x, ..) = 0}` where `s` runs over
/// the ideal generated by `S`, `x` sits in another slot and basis elements
/// fill the rest.
pub fn annihilator(b: &FiniteAlgebra, s: &Submodule) -> Submodule {
    let hat = ideal_closure(b, s.rows());
    if hat.is_zero() {
        return Submodule::full(b);
    }
    let basis = b.basis_vectors();
    let r = b.rank();
    let zero = ReducedMatrix::zero(b.ring(), r);
    let x0 = preimage(b, &b.full_module(), &zero, |v| {
        let mut vals = Vec::new();
        for (o, _, arity) in b.sig().ops() {
            if arity < 2 {
                continue;
            }
            for js in 0..arity {
                for jx in 0..arity {
                    if js == jx {
                        continue;
                    }
                    for srow in hat.rows() {
                        for t in basis_tuples(r, arity - 2) {
                            let mut it = t.iter();
                            let args: Vec<&[RingElem]> = (0..arity)
                                .map(|p| {
                                    if p == js {
                                        srow.as_slice()
                                    } else if p == jx {
                                        v
                                    } else {
                                        basis[*it.next().unwrap()].as_slice()
                                    }
                                })
                                .collect();
                            vals.push(b.apply(o, &args));
                        }
                    }
                }
            }
        }
        vals
    });
    largest_ideal_in(b, &x0)
}

/// Outcomes of the three primeness tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimeReport {
    /// `I · J != 0` for all nonzero ideals; `None` when the lattice cap
    /// was exceeded.
    pub definitional: Option<bool>,
    /// `M(A) != 0` and `M(A)^2 != 0`.
    pub monolith_square: bool,
    /// `M(A) != 0` and `Ann_A(M(A)) = 0`.
    pub monolith_annihilator: bool,
}

impl PrimeReport {
    pub fn agree(&self) -> bool {
        self.definitional.is_none_or(|d| d == self.monolith_square) && self.monolith_square == self.monolith_annihilator
    }
}

/// Runs all three primeness tests. The zero algebra is not prime.
pub fn prime_report(a: &FiniteAlgebra, lattice_cap: usize) -> Result<PrimeReport> {
    if a.is_zero() {
        return Ok(PrimeReport { definitional: Some(false), monolith_square: false, monolith_annihilator: false });
    }
    let m = monolith(a)?;
    let monolith_square = !m.is_zero() && !ideal_product(a, &[&m, &m])?.is_zero();
    let monolith_annihilator = !m.is_zero() && annihilator(a, &m).is_zero();
    let definitional = match all_ideals(a, lattice_cap) {
        Ok(lat) => {
            let nz: Vec<&Submodule> = lat.nonzero().collect();
            let mut ok = true;
            'pairs: for i in 0..nz.len() {
                for j in i..nz.len() {
                    if ideal_product(a, &[nz[i], nz[j]])?.is_zero() {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
            Some(ok)
        }
        Err(e) if e.is_cap() => None,
        Err(e) => return Err(e),
    };
    Ok(PrimeReport { definitional, monolith_square, monolith_annihilator })
}

/// Primeness, cross-checked between the three tests.
pub fn is_prime(a: &FiniteAlgebra) -> Result<bool> {
    let rep = prime_report(a, DEFAULT_LATTICE_CAP)?;
    if !rep.agree() {
        return Err(Error::Inconsistent(format!("primeness tests disagree: {rep:?}")));
    }
    Ok(rep.monolith_square)
}

/// Every nonzero ideal has nonzero square; it suffices to test the minimal
/// nonzero ideals, which are the minimal principal ideals.
pub fn is_semiprime(a: &FiniteAlgebra) -> Result<bool> {
    let principals = principal_ideals(a)?;
    for (k, p) in principals.iter().enumerate() {
        let minimal = !principals[..k].iter().any(|q| q.size() < p.size() && p.contains_all(q));
        if minimal && ideal_product(a, &[p, p])?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `A^2 != 0` and the only ideals are `0` and `A`.
pub fn is_simple(a: &FiniteAlgebra) -> Result<bool> {
    if a.is_zero() {
        return Ok(false);
    }
    let full = Submodule::full(a);
    if ideal_product(a, &[&full, &full])?.is_zero() {
        return Ok(false);
    }
    Ok(principal_ideals(a)?.iter().all(|p| p.size() == a.size()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algcore::testalg::*;
    use crate::modring::Ring;
    use crate::sigterm::{Signature, DEFAULT_DEPTH_CAP};

    fn span(a: &FiniteAlgebra, rows: &[Vec<RingElem>]) -> Submodule {
        Submodule::span(a, rows).unwrap()
    }

    fn zero_product(rank: usize) -> FiniteAlgebra {
        let r = Ring::modular(2).unwrap();
        FiniteAlgebra::builder(&r, &Signature::binary("mul"), vec![2; rank]).build().unwrap()
    }

    fn field_algebra(p: u32) -> FiniteAlgebra {
        let r = Ring::modular(p).unwrap();
        let mut b = FiniteAlgebra::builder(&r, &Signature::binary("mul"), vec![p]);
        b.set("mul", &[0, 0], &[1]).unwrap();
        b.build().unwrap()
    }

    /// Every submodule of a small algebra, by brute force over subsets of
    /// elements' spans.
    fn brute_ideals(a: &FiniteAlgebra) -> Vec<Submodule> {
        let elems = a.elements(64).unwrap();
        let mut subs: HashSet<ReducedMatrix> = HashSet::new();
        subs.insert(ReducedMatrix::zero(a.ring(), a.rank()));
        loop {
            let before = subs.len();
            let cur: Vec<ReducedMatrix> = subs.iter().cloned().collect();
            for s in cur {
                for e in &elems {
                    subs.insert(s.sum(&ReducedMatrix::reduce(a.ring(), a.rank(), vec![e.clone()]).unwrap()));
                }
            }
            if subs.len() == before {
                break;
            }
        }
        subs.into_iter().map(Submodule::new).filter(|s| is_ideal(a, s)).collect()
    }

    #[test]
    fn ideal_membership_examples() {
        let a = sl2();
        assert!(is_ideal(&a, &span(&a, &[a.basis_vector(2)])));
        let b = a1();
        assert!(!is_ideal(&b, &span(&b, &[b.basis_vector(1)])));
        assert!(is_ideal(&b, &Submodule::zero(&b)) && is_ideal(&b, &Submodule::full(&b)));
    }

    #[test]
    fn closure_examples() {
        let a = sl2();
        let e = ideal_closure(&a, &[a.basis_vector(0)]);
        assert_eq!(e, span(&a, &[a.basis_vector(0), a.basis_vector(2)]));
        assert!(ideal_closure(&a, &[]).is_zero());
        let l = heisenberg();
        assert_eq!(ideal_closure(&l, &[l.basis_vector(2)]), span(&l, &[l.basis_vector(2)]));
    }

    #[test]
    fn product_examples() {
        let a = a1();
        let full = Submodule::full(&a);
        assert_eq!(ideal_product(&a, &[&full, &full]).unwrap(), span(&a, &[a.basis_vector(0)]));
        assert!(ideal_product(&a, &[&full, &Submodule::zero(&a)]).unwrap().is_zero());
        let s = sl2();
        let m = monolith(&s).unwrap();
        assert_eq!(m, span(&s, &[s.basis_vector(2)]));
        assert!(ideal_product(&s, &[&m, &m]).unwrap().is_zero());
        assert!(ideal_product(&a, &[&full]).is_err());
    }

    #[test]
    fn fixpoint_matches_enumeration() {
        for a in [a1(), a2(), sl2(), heisenberg(), zero_product(2), field_algebra(3)] {
            let lat = all_ideals(&a, DEFAULT_LATTICE_CAP).unwrap();
            for i in lat.ideals.iter() {
                for j in lat.ideals.iter() {
                    let exact = ideal_product(&a, &[i, j]).unwrap();
                    let bounded = ideal_product_bounded(&a, &[i, j], 3, DEFAULT_DEPTH_CAP).unwrap();
                    assert!(exact.contains_all(&bounded.span));
                    if bounded.stabilized {
                        assert_eq!(exact, bounded.span, "{}", a);
                    }
                }
            }
        }
    }

    #[test]
    fn powers_of_a1() {
        let a = a1();
        let full = Submodule::full(&a);
        let a2_ = power(&a, &full, 2).unwrap();
        let a3 = power(&a, &full, 3).unwrap();
        assert!(a3.is_zero());
        let a_a2 = ideal_product(&a, &[&full, &a2_]).unwrap();
        assert!(a2_.contains_all(&a_a2));
        assert_eq!(power(&a, &full, 1).unwrap(), full);
    }

    #[test]
    fn lattices() {
        let f = field_algebra(3);
        assert_eq!(all_ideals(&f, 100).unwrap().len(), 2);
        let s = sl2();
        let lat = all_ideals(&s, 100).unwrap();
        assert_eq!(lat.len(), 6);
        let z = zero_product(2);
        let lat = all_ideals(&z, 100).unwrap();
        assert_eq!(lat.len(), 5);
        assert_eq!(lat.minimal_nonzero().len(), 3);
        for a in [a1(), sl2(), heisenberg(), z] {
            let lat = all_ideals(&a, 100).unwrap();
            let mut got: Vec<ReducedMatrix> = lat.ideals.iter().map(|i| i.basis.clone()).collect();
            let mut want: Vec<ReducedMatrix> = brute_ideals(&a).into_iter().map(|i| i.basis).collect();
            got.sort_by(|x, y| x.rows().cmp(y.rows()));
            want.sort_by(|x, y| x.rows().cmp(y.rows()));
            assert_eq!(got, want);
        }
        assert!(all_ideals(&zero_product(3), 4).unwrap_err().is_cap());
    }

    #[test]
    fn covers_are_covers() {
        let z = zero_product(2);
        let lat = all_ideals(&z, 100).unwrap();
        for (i, cs) in lat.covers.iter().enumerate() {
            for &j in cs {
                assert!(lat.ideals[j].contains_all(&lat.ideals[i]));
                assert!(lat.ideals[j].size() > lat.ideals[i].size());
                for k in 0..lat.len() {
                    let between = lat.ideals[j].contains_all(&lat.ideals[k])
                        && lat.ideals[k].contains_all(&lat.ideals[i])
                        && k != i
                        && k != j;
                    assert!(!between);
                }
            }
        }
    }

    #[test]
    fn monoliths() {
        let l = heisenberg();
        assert_eq!(monolith(&l).unwrap(), span(&l, &[l.basis_vector(2)]));
        let f = field_algebra(3);
        assert_eq!(monolith(&f).unwrap(), Submodule::full(&f));
        assert!(monolith(&zero_product(2)).unwrap().is_zero());
        assert_eq!(monolith(&FiniteAlgebra::zero(f.ring(), f.sig())), Err(Error::ZeroAlgebra));
    }

    #[test]
    fn annihilators() {
        let l = heisenberg();
        assert_eq!(annihilator(&l, &Submodule::full(&l)), span(&l, &[l.basis_vector(2)]));
        let a = a1();
        assert_eq!(annihilator(&a, &Submodule::zero(&a)), Submodule::full(&a));
        assert_eq!(annihilator(&a, &span(&a, &[a.basis_vector(0)])), Submodule::full(&a));
        // brute force: greatest ideal I with S·I = 0
        for alg in [a1(), a2(), sl2(), heisenberg(), zero_product(2), field_algebra(2)] {
            let lat = all_ideals(&alg, 100).unwrap();
            for s in &lat.ideals {
                let ann = annihilator(&alg, s);
                let killing: Vec<&Submodule> =
                    lat.ideals.iter().filter(|i| ideal_product(&alg, &[s, i]).unwrap().is_zero()).collect();
                assert!(killing.contains(&&ann));
                assert!(killing.iter().all(|i| ann.contains_all(i)));
            }
        }
    }

    #[test]
    fn primeness() {
        let f = field_algebra(3);
        assert!(is_prime(&f).unwrap() && is_semiprime(&f).unwrap() && is_simple(&f).unwrap());
        let s = sl2();
        let rep = prime_report(&s, 100).unwrap();
        assert_eq!(rep, PrimeReport { definitional: Some(false), monolith_square: false, monolith_annihilator: false });
        assert!(!is_prime(&a1()).unwrap());
        assert!(!is_semiprime(&a1()).unwrap());
        assert!(!is_simple(&zero_product(1)).unwrap());
    }
}
