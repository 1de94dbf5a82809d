//! Submodules, subalgebras, direct products and quotients.

use std::sync::Arc;

use super::space::{closure, induce, Induced, OpSpace};
use super::{FiniteAlgebra, Homomorphism};
use crate::error::{Error, Result};
use crate::modring::matrix::smith;
use crate::modring::{axpy, ReducedMatrix, Ring, RingElem};
use crate::sigterm::Signature;

/// A submodule of an algebra, as a canonical span of ambient vectors.
#[derive(Debug, Clone)]
pub struct Submodule {
    pub basis: ReducedMatrix,
    pub is_ideal_verified: bool,
}

impl PartialEq for Submodule {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}
impl Eq for Submodule {}

impl std::hash::Hash for Submodule {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.basis.hash(state);
    }
}

impl Submodule {
    pub fn new(basis: ReducedMatrix) -> Self {
        Submodule { basis, is_ideal_verified: false }
    }

    pub fn ideal(basis: ReducedMatrix) -> Self {
        Submodule { basis, is_ideal_verified: true }
    }

    pub fn zero(a: &FiniteAlgebra) -> Self {
        Submodule::ideal(ReducedMatrix::zero(a.ring(), a.rank()))
    }

    pub fn full(a: &FiniteAlgebra) -> Self {
        Submodule::ideal(a.full_module())
    }

    /// Span of the given ambient vectors.
    pub fn span(a: &FiniteAlgebra, vectors: &[Vec<RingElem>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| !a.is_vector(v)) {
            return Err(Error::ShapeMismatch(format!("{v:?} is not an element of the algebra")));
        }
        Ok(Submodule::new(ReducedMatrix::reduce(a.ring(), a.rank(), vectors.to_vec())?))
    }

    pub fn size(&self) -> u128 {
        self.basis.size()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_zero()
    }

    pub fn contains(&self, v: &[RingElem]) -> bool {
        self.basis.contains(v)
    }

    pub fn contains_all(&self, other: &Submodule) -> bool {
        self.basis.contains_all(&other.basis)
    }

    pub fn rows(&self) -> &[Vec<RingElem>] {
        self.basis.rows()
    }

    pub fn sum(&self, other: &Submodule) -> Submodule {
        Submodule {
            basis: self.basis.sum(&other.basis),
            is_ideal_verified: self.is_ideal_verified && other.is_ideal_verified,
        }
    }

    pub fn intersect(&self, other: &Submodule) -> Submodule {
        Submodule {
            basis: self.basis.intersect(&other.basis),
            is_ideal_verified: self.is_ideal_verified && other.is_ideal_verified,
        }
    }

    pub fn format(&self, a: &FiniteAlgebra) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self.rows().iter().map(|r| a.format_vector(r)).collect();
        format!("span{{{}}}", parts.join(", "))
    }
}

/// One-slot substitution test: `ω(b_1, .., s, .., b_m) ∈ S` for every
/// operation, slot, generator `s` of `S` and basis elements `b_j`.
pub fn is_ideal_span(a: &FiniteAlgebra, s: &ReducedMatrix) -> bool {
    let r = a.rank();
    let basis = a.basis_vectors();
    for row in s.rows() {
        for (o, _, arity) in a.sig().ops() {
            if arity == 0 {
                continue;
            }
            let count = r.pow(arity as u32 - 1);
            for slot in 0..arity {
                for idx in 0..count {
                    let mut rest = idx;
                    let mut args: Vec<&[RingElem]> = vec![&[]; arity];
                    for k in (0..arity).rev() {
                        if k == slot {
                            args[k] = row;
                        } else {
                            args[k] = &basis[rest % r];
                            rest /= r;
                        }
                    }
                    if !s.contains(&a.apply(o, &args)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// A subalgebra with its own presentation.
#[derive(Debug, Clone)]
pub struct Subalgebra {
    pub submodule: Submodule,
    pub induced: Induced,
}

impl Subalgebra {
    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.induced.algebra
    }

    /// Inclusion into the parent as a homomorphism.
    pub fn inclusion(&self) -> Homomorphism {
        Homomorphism::new(self.induced.basis.clone())
    }
}

/// Smallest subalgebra containing the ambient vectors `gens` and the
/// constants.
pub fn subalgebra_closure(a: &FiniteAlgebra, gens: &[Vec<RingElem>]) -> Result<Subalgebra> {
    if let Some(v) = gens.iter().find(|v| !a.is_vector(v)) {
        return Err(Error::ShapeMismatch(format!("{v:?} is not an element of the algebra")));
    }
    let c = closure(a, gens);
    subalgebra_of_span(a, c.span)
}

/// Presents a span already known to be closed.
pub fn subalgebra_of_span(a: &FiniteAlgebra, span: ReducedMatrix) -> Result<Subalgebra> {
    let induced = induce(a, &span)?;
    Ok(Subalgebra { submodule: Submodule::new(span), induced })
}

#[derive(Debug, Clone)]
pub struct Product {
    pub algebra: FiniteAlgebra,
    pub offsets: Vec<usize>,
    pub ranks: Vec<usize>,
}

impl Product {
    pub fn projection(&self, k: usize) -> Homomorphism {
        let images = (0..self.algebra.rank())
            .map(|i| {
                let mut v = vec![0; self.ranks[k]];
                let off = self.offsets[k];
                if (off..off + self.ranks[k]).contains(&i) {
                    v[i - off] = self.algebra.basis_vector(i)[i];
                }
                v
            })
            .collect();
        Homomorphism::new(images)
    }

    /// Module embedding of factor `k` (a homomorphism when the constants of
    /// the other factors vanish).
    pub fn injection(&self, k: usize) -> Homomorphism {
        let off = self.offsets[k];
        Homomorphism::new((0..self.ranks[k]).map(|j| self.algebra.basis_vector(off + j)).collect())
    }

    /// Concatenates per-factor ambient vectors.
    pub fn pack(&self, parts: &[&[RingElem]]) -> Vec<RingElem> {
        parts.iter().flat_map(|p| p.iter().copied()).collect()
    }
}

/// Direct product of a nonempty list of algebras over the same ring and
/// signature.
pub fn direct_product(factors: &[&FiniteAlgebra]) -> Result<Product> {
    let first = factors
        .first()
        .ok_or_else(|| Error::InvalidArgument("direct product of an empty list".into()))?;
    direct_product_in(first.ring(), first.sig(), factors)
}

/// Direct product; the empty list gives the zero algebra.
pub fn direct_product_in(ring: &Arc<Ring>, sig: &Arc<Signature>, factors: &[&FiniteAlgebra]) -> Result<Product> {
    let space = super::ProductSpace::new(ring, sig, factors.to_vec())?;
    let mut offsets = Vec::new();
    let mut orders = Vec::new();
    let mut names = Vec::new();
    for (k, f) in factors.iter().enumerate() {
        offsets.push(orders.len());
        orders.extend_from_slice(f.orders());
        names.extend(f.names().iter().map(|n| format!("{n}_{}", k + 1)));
    }
    let basis = space.module_gens();
    let algebra = FiniteAlgebra::from_ambient_tables(ring, sig, orders, |o, t| {
        let args: Vec<&[RingElem]> = t.iter().map(|&i| basis[i].as_slice()).collect();
        space.apply(o, &args)
    })?
    .with_names(names)?;
    Ok(Product { algebra, offsets, ranks: factors.iter().map(|f| f.rank()).collect() })
}

/// `A / I` with the natural surjection.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: FiniteAlgebra,
    /// Parent vectors lifting the quotient basis.
    pub lifts: Vec<Vec<RingElem>>,
    vcols: Vec<Vec<RingElem>>,
    factors: Vec<RingElem>,
    parent_rank: usize,
}

impl Quotient {
    /// Image of a parent vector.
    pub fn project(&self, a: &FiniteAlgebra, v: &[RingElem]) -> Vec<RingElem> {
        let ring = a.ring();
        let coords: Vec<RingElem> = (0..self.parent_rank).map(|i| a.coefficient(v, i)).collect();
        self.vcols
            .iter()
            .zip(&self.factors)
            .map(|(col, &f)| {
                let y = coords.iter().zip(col).fold(0, |acc, (&c, &x)| ring.add(acc, ring.mul(c, x)));
                ring.mul(y, f)
            })
            .collect()
    }

    /// A parent vector mapping to the quotient vector `y`.
    pub fn lift(&self, y: &[RingElem]) -> Vec<RingElem> {
        let ring = self.algebra.ring();
        let mut out = vec![0; self.parent_rank];
        for (j, l) in self.lifts.iter().enumerate() {
            axpy(ring, &mut out, self.algebra.coefficient(y, j), l);
        }
        out
    }

    pub fn surjection(&self, a: &FiniteAlgebra) -> Homomorphism {
        Homomorphism::new(a.basis_vectors().iter().map(|b| self.project(a, b)).collect())
    }
}

pub fn quotient(a: &FiniteAlgebra, ideal: &Submodule) -> Result<Quotient> {
    if ideal.basis.cols() != a.rank() || !ideal.rows().iter().all(|r| a.is_vector(r)) {
        return Err(Error::ShapeMismatch("ideal is not a submodule of the algebra".into()));
    }
    if !is_ideal_span(a, &ideal.basis) {
        return Err(Error::NotAnIdeal);
    }
    let ring = a.ring().clone();
    let r = a.rank();
    // coordinate form: A = k^r / span{d_i ε_i}
    let mut rel: Vec<Vec<RingElem>> = Vec::new();
    for (i, &d) in a.orders().iter().enumerate() {
        let s = ring.order_scalar(d);
        if s != 0 {
            let mut v = vec![0; r];
            v[i] = s;
            rel.push(v);
        }
    }
    for row in ideal.rows() {
        rel.push((0..r).map(|i| a.coefficient(row, i)).collect());
    }
    let sm = smith(&ring, &rel, r);
    let mut orders = Vec::new();
    let mut vcols = Vec::new();
    let mut factors = Vec::new();
    let mut lifts = Vec::new();
    for j in 0..r {
        let d = sm.diag.get(j).copied().unwrap_or(0);
        let q = ring.quot_size(d);
        if q == 1 {
            continue;
        }
        orders.push(q);
        factors.push(ring.embed_factor(q));
        vcols.push((0..r).map(|i| sm.v[i][j]).collect::<Vec<_>>());
        let lift: Vec<RingElem> = (0..r)
            .map(|i| {
                let c = sm.vinv[j][i];
                if ring.is_field_ext() {
                    c
                } else {
                    ring.mul(c % a.orders()[i], a.basis_vector(i)[i])
                }
            })
            .collect();
        lifts.push(lift);
    }
    let mut q = Quotient { algebra: FiniteAlgebra::zero(&ring, a.sig()), lifts, vcols, factors, parent_rank: r };
    let algebra = FiniteAlgebra::from_ambient_tables(&ring, a.sig(), orders, |o, t| {
        let args: Vec<&[RingElem]> = t.iter().map(|&i| q.lifts[i].as_slice()).collect();
        q.project(a, &a.apply(o, &args))
    })?;
    q.algebra = algebra;
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::super::testalg::*;
    use super::*;
    use crate::sigterm::Signature;

    #[test]
    fn quotient_by_zero_and_all() {
        let a = a1();
        let q = quotient(&a, &Submodule::zero(&a)).unwrap();
        assert_eq!(q.algebra.size(), 27);
        assert!(q.surjection(&a).verify(&a, &q.algebra).is_ok());
        let q = quotient(&a, &Submodule::full(&a)).unwrap();
        assert!(q.algebra.is_zero());
    }

    #[test]
    fn quotient_rejects_non_ideal() {
        let a = a1();
        let s = Submodule::span(&a, &[a.basis_vector(1)]).unwrap();
        assert!(matches!(quotient(&a, &s), Err(Error::NotAnIdeal)));
    }

    #[test]
    fn l_prime_has_32_elements() {
        let l = heisenberg();
        let p = direct_product(&[&l, &l]).unwrap();
        assert_eq!(p.algebra.size(), 64);
        let k = Submodule::span(&p.algebra, &[vec![0, 0, 1, 0, 0, 1]]).unwrap();
        let q = quotient(&p.algebra, &k).unwrap();
        assert_eq!(q.algebra.size(), 32);
        let surj = q.surjection(&p.algebra);
        assert!(surj.verify(&p.algebra, &q.algebra).is_ok());
        for b in p.algebra.basis_vectors() {
            assert_eq!(q.project(&p.algebra, &q.lift(&q.project(&p.algebra, &b))), q.project(&p.algebra, &b));
        }
        for k in 0..2 {
            assert!(p.projection(k).verify(&p.algebra, &l).is_ok());
        }
    }

    #[test]
    fn quotient_with_torsion() {
        // Z/4, shape (4, 2), e1 e1 = e2; quotient by span{2 e1}
        let r = Ring::modular(4).unwrap();
        let s = Signature::binary("mul");
        let mut b = FiniteAlgebra::builder(&r, &s, vec![4, 2]);
        b.set("mul", &[0, 0], &[0, 1]).unwrap();
        let a = b.build().unwrap();
        let i = Submodule::span(&a, &[vec![2, 0]]).unwrap();
        let q = quotient(&a, &i).unwrap();
        assert_eq!(q.algebra.size(), 4);
        assert!(q.surjection(&a).verify(&a, &q.algebra).is_ok());
        for u in a.elements(100).unwrap() {
            let pu = q.project(&a, &u);
            assert!(q.algebra.is_vector(&pu));
            let back = q.lift(&pu);
            let diff: Vec<u32> = back.iter().zip(&u).map(|(&x, &y)| r.sub(x, y)).collect();
            assert!(i.contains(&diff));
        }
    }

    #[test]
    fn product_with_zero_algebra() {
        let a = a1();
        let z = FiniteAlgebra::zero(a.ring(), a.sig());
        let p = direct_product(&[&a, &z]).unwrap();
        assert_eq!(p.algebra, a.clone().with_names(p.algebra.names().to_vec()).unwrap());
        assert!(direct_product(&[]).is_err());
    }

    #[test]
    fn subalgebra_of_sl2() {
        let a = sl2();
        let s = subalgebra_closure(&a, &[a.basis_vector(0), a.basis_vector(1)]).unwrap();
        assert_eq!(s.submodule.size(), 8);
        assert!(s.inclusion().verify(s.algebra(), &a).is_ok());
        assert!(subalgebra_closure(&a, &[]).unwrap().algebra().is_zero());
    }
}
