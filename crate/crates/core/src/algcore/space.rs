//! Spaces carrying multilinear operations, and closures inside them.

use std::sync::Arc;

use super::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::modring::matrix::{is_zero_vec, smith};
use crate::modring::{axpy, ReducedMatrix, Ring, RingElem};
use crate::sigterm::{Polynomial, Signature, Term};

/// A `k`-module embedded in `k^dim` with multilinear operations on ambient
/// vectors.
pub trait OpSpace: Sync {
    fn ring(&self) -> &Arc<Ring>;
    fn sig(&self) -> &Arc<Signature>;
    fn dim(&self) -> usize;
    fn apply(&self, op: usize, args: &[&[RingElem]]) -> Vec<RingElem>;
    /// Additive generators of the whole space.
    fn module_gens(&self) -> Vec<Vec<RingElem>>;
    /// Coefficient of the `i`-th module generator in an ambient vector.
    fn coefficient(&self, v: &[RingElem], i: usize) -> RingElem;
}

impl OpSpace for FiniteAlgebra {
    fn ring(&self) -> &Arc<Ring> {
        FiniteAlgebra::ring(self)
    }
    fn sig(&self) -> &Arc<Signature> {
        FiniteAlgebra::sig(self)
    }
    fn dim(&self) -> usize {
        self.rank()
    }
    fn apply(&self, op: usize, args: &[&[RingElem]]) -> Vec<RingElem> {
        FiniteAlgebra::apply(self, op, args)
    }
    fn module_gens(&self) -> Vec<Vec<RingElem>> {
        self.basis_vectors()
    }
    fn coefficient(&self, v: &[RingElem], i: usize) -> RingElem {
        FiniteAlgebra::coefficient(self, v, i)
    }
}

/// The direct product of a list of algebras (repetitions allowed), as
/// concatenated ambient blocks, without materializing structure tables.
pub struct ProductSpace<'a> {
    ring: Arc<Ring>,
    sig: Arc<Signature>,
    blocks: Vec<&'a FiniteAlgebra>,
    offsets: Vec<usize>,
    dim: usize,
}

impl<'a> ProductSpace<'a> {
    pub fn new(ring: &Arc<Ring>, sig: &Arc<Signature>, blocks: Vec<&'a FiniteAlgebra>) -> Result<Self> {
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        for b in &blocks {
            if **b.ring() != **ring {
                return Err(Error::RingMismatch);
            }
            if **b.sig() != **sig {
                return Err(Error::SignatureMismatch);
            }
            offsets.push(dim);
            dim += b.rank();
        }
        Ok(ProductSpace { ring: ring.clone(), sig: sig.clone(), blocks, offsets, dim })
    }

    pub fn blocks(&self) -> &[&'a FiniteAlgebra] {
        &self.blocks
    }

    pub fn offset(&self, b: usize) -> usize {
        self.offsets[b]
    }

    pub fn block_range(&self, b: usize) -> std::ops::Range<usize> {
        self.offsets[b]..self.offsets[b] + self.blocks[b].rank()
    }
}

impl OpSpace for ProductSpace<'_> {
    fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }
    fn sig(&self) -> &Arc<Signature> {
        &self.sig
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn apply(&self, op: usize, args: &[&[RingElem]]) -> Vec<RingElem> {
        let mut out = vec![0; self.dim];
        let mut parts: Vec<&[RingElem]> = Vec::with_capacity(args.len());
        for (b, alg) in self.blocks.iter().enumerate() {
            let range = self.block_range(b);
            if range.is_empty() {
                continue;
            }
            parts.clear();
            parts.extend(args.iter().map(|a| &a[range.clone()]));
            if !args.is_empty() && parts.iter().any(|p| is_zero_vec(p)) {
                continue;
            }
            out[range].copy_from_slice(&alg.apply(op, &parts));
        }
        out
    }
    fn module_gens(&self) -> Vec<Vec<RingElem>> {
        let mut out = Vec::with_capacity(self.dim);
        for (b, alg) in self.blocks.iter().enumerate() {
            for v in alg.basis_vectors() {
                let mut w = vec![0; self.dim];
                w[self.block_range(b)].copy_from_slice(&v);
                out.push(w);
            }
        }
        out
    }
    fn coefficient(&self, v: &[RingElem], i: usize) -> RingElem {
        let b = self.offsets.partition_point(|&o| o <= i) - 1;
        // skip empty blocks sharing the same offset
        let b = (0..=b).rev().find(|&b| self.block_range(b).contains(&i)).expect("index inside some block");
        self.blocks[b].coefficient(&v[self.block_range(b)], i - self.offsets[b])
    }
}

/// How a closure item was produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recipe {
    /// The `i`-th generator.
    Gen(usize),
    /// An operation applied to earlier items (no items for a constant).
    Op(usize, Vec<usize>),
}

/// A closure: a spanning list of items, each with the recipe producing it.
#[derive(Debug, Clone)]
pub struct Closure {
    pub span: ReducedMatrix,
    pub items: Vec<Vec<RingElem>>,
    pub recipes: Vec<Recipe>,
}

impl Closure {
    /// The term producing item `k`, generator `i` read as variable `x_{i+1}`.
    pub fn term(&self, k: usize) -> Term {
        match &self.recipes[k] {
            Recipe::Gen(i) => Term::Var(*i as u32 + 1),
            Recipe::Op(o, args) => Term::Op(*o, args.iter().map(|&a| self.term(a)).collect()),
        }
    }
}

fn tuples_with_max(k: usize, arity: usize, mut f: impl FnMut(&[usize])) {
    let mut t = vec![0usize; arity];
    loop {
        if t.contains(&k) {
            f(&t);
        }
        let mut i = arity;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] <= k {
                break;
            }
            t[i] = 0;
        }
    }
}

/// The subalgebra generated by `gens` (and the constants): items are added
/// only when they enlarge the span, and every tuple of items is processed
/// once its largest index is reached.
pub fn closure<S: OpSpace + ?Sized>(space: &S, gens: &[Vec<RingElem>]) -> Closure {
    let mut c = Closure { span: ReducedMatrix::zero(space.ring(), space.dim()), items: Vec::new(), recipes: Vec::new() };
    for (i, g) in gens.iter().enumerate() {
        if c.span.insert(g.clone()) {
            c.items.push(g.clone());
            c.recipes.push(Recipe::Gen(i));
        }
    }
    let sig = space.sig().clone();
    for (o, _, arity) in sig.ops() {
        if arity == 0 {
            let v = space.apply(o, &[]);
            if c.span.insert(v.clone()) {
                c.items.push(v);
                c.recipes.push(Recipe::Op(o, Vec::new()));
            }
        }
    }
    let mut k = 0;
    while k < c.items.len() {
        for (o, _, arity) in sig.ops() {
            if arity == 0 {
                continue;
            }
            let mut found = Vec::new();
            tuples_with_max(k, arity, |t| {
                let args: Vec<&[RingElem]> = t.iter().map(|&i| c.items[i].as_slice()).collect();
                let v = space.apply(o, &args);
                if c.span.insert(v.clone()) {
                    found.push((v, t.to_vec()));
                }
            });
            for (v, t) in found {
                c.items.push(v);
                c.recipes.push(Recipe::Op(o, t));
            }
        }
        k += 1;
    }
    c
}

/// The least ideal containing `gens`: closed under every operation with one
/// slot in the ideal and module generators in the others.
pub fn ideal_closure_rows<S: OpSpace + ?Sized>(space: &S, gens: &[Vec<RingElem>]) -> ReducedMatrix {
    let mut span = ReducedMatrix::zero(space.ring(), space.dim());
    let mut items: Vec<Vec<RingElem>> = Vec::new();
    for g in gens {
        if span.insert(g.clone()) {
            items.push(g.clone());
        }
    }
    let basis = space.module_gens();
    let sig = space.sig().clone();
    let mut k = 0;
    while k < items.len() {
        let item = items[k].clone();
        for (o, _, arity) in sig.ops() {
            if arity == 0 {
                continue;
            }
            for slot in 0..arity {
                let others = arity - 1;
                let count = basis.len().pow(others as u32);
                for idx in 0..count {
                    let mut rest = idx;
                    let mut args: Vec<&[RingElem]> = Vec::with_capacity(arity);
                    let mut picks = vec![0; others];
                    for p in picks.iter_mut().rev() {
                        *p = rest % basis.len();
                        rest /= basis.len();
                    }
                    let mut pi = picks.iter();
                    for s in 0..arity {
                        if s == slot {
                            args.push(&item);
                        } else {
                            args.push(&basis[*pi.next().unwrap()]);
                        }
                    }
                    let v = space.apply(o, &args);
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

/// Value of a term at an assignment (`assign[i]` is the value of `x_{i+1}`).
pub fn eval_term<S: OpSpace + ?Sized>(space: &S, t: &Term, assign: &[Vec<RingElem>]) -> Vec<RingElem> {
    match t {
        Term::Var(i) => assign[*i as usize - 1].clone(),
        Term::Op(o, args) => {
            let vals: Vec<Vec<RingElem>> = args.iter().map(|a| eval_term(space, a, assign)).collect();
            let refs: Vec<&[RingElem]> = vals.iter().map(Vec::as_slice).collect();
            space.apply(*o, &refs)
        }
    }
}

pub fn eval_polynomial<S: OpSpace + ?Sized>(space: &S, f: &Polynomial, assign: &[Vec<RingElem>]) -> Vec<RingElem> {
    let ring = space.ring().clone();
    let mut out = vec![0; space.dim()];
    for (t, c) in f.terms() {
        axpy(&ring, &mut out, c, &eval_term(space, t, assign));
    }
    out
}

/// A closed submodule of a space presented as an algebra on a cyclic basis.
#[derive(Debug, Clone)]
pub struct Induced {
    pub algebra: FiniteAlgebra,
    /// Ambient vectors in the parent of the new basis elements.
    pub basis: Vec<Vec<RingElem>>,
    pub span: ReducedMatrix,
    pivots: Vec<usize>,
    /// Columns of the Smith transform kept for the new coordinates.
    vcols: Vec<Vec<RingElem>>,
}

impl Induced {
    /// Local ambient vector of a parent vector lying in the span.
    pub fn to_local(&self, v: &[RingElem]) -> Vec<RingElem> {
        let ring = self.algebra.ring();
        self.vcols
            .iter()
            .map(|col| {
                self.pivots
                    .iter()
                    .zip(col)
                    .fold(0, |acc, (&p, &c)| ring.add(acc, ring.mul(v[p], c)))
            })
            .collect()
    }

    /// Parent vector of a local ambient vector.
    pub fn to_parent(&self, y: &[RingElem]) -> Vec<RingElem> {
        let ring = self.algebra.ring();
        let mut out = vec![0; self.span.cols()];
        for (j, g) in self.basis.iter().enumerate() {
            axpy(ring, &mut out, self.algebra.coefficient(y, j), g);
        }
        out
    }
}

/// Presents the closed submodule `span` of `space` as a finite algebra.
pub fn induce<S: OpSpace + ?Sized>(space: &S, span: &ReducedMatrix) -> Result<Induced> {
    let ring = space.ring().clone();
    let rows = span.rows();
    let pivots = span.pivots().to_vec();
    let h = rows.len();
    let compressed: Vec<Vec<RingElem>> = rows.iter().map(|r| pivots.iter().map(|&p| r[p]).collect()).collect();
    let sm = smith(&ring, &compressed, h);
    let mut basis = Vec::new();
    let mut orders = Vec::new();
    let mut vcols = Vec::new();
    for j in 0..h {
        let d = sm.diag.get(j).copied().unwrap_or(0);
        if d == 0 {
            continue;
        }
        let mut g = vec![0; span.cols()];
        for (k, row) in rows.iter().enumerate() {
            axpy(&ring, &mut g, sm.u[j][k], row);
        }
        basis.push(g);
        orders.push(ring.ideal_size(d));
        vcols.push((0..h).map(|i| sm.v[i][j]).collect());
    }
    let mut ind = Induced {
        algebra: FiniteAlgebra::zero(&ring, space.sig()),
        basis,
        span: span.clone(),
        pivots,
        vcols,
    };
    let mut failure = None;
    let algebra = FiniteAlgebra::from_ambient_tables(&ring, space.sig(), orders.clone(), |o, t| {
        let args: Vec<&[RingElem]> = t.iter().map(|&i| ind.basis[i].as_slice()).collect();
        let v = space.apply(o, &args);
        if !span.contains(&v) {
            failure = Some(o);
        }
        ind.to_local(&v)
    })?;
    if let Some(o) = failure {
        return Err(Error::InvalidArgument(format!(
            "submodule is not closed under '{}'",
            space.sig().name(o)
        )));
    }
    ind.algebra = algebra;
    Ok(ind)
}

#[cfg(test)]
mod tests {
    use super::super::testalg::*;
    use super::*;

    #[test]
    fn closure_of_e_f_in_sl2() {
        let a = sl2();
        let c = closure(&a, &[a.basis_vector(0), a.basis_vector(1)]);
        assert_eq!(c.span.size(), 8);
        assert_eq!(c.items.len(), 3);
        assert_eq!(c.term(2).display(a.sig()).to_string(), "br(x1,x2)");
        assert_eq!(eval_term(&a, &c.term(2), &[a.basis_vector(0), a.basis_vector(1)]), c.items[2]);
    }

    #[test]
    fn closure_of_r_in_a1() {
        let a = a1();
        let c = closure(&a, &[a.basis_vector(1)]);
        let want = ReducedMatrix::reduce(a.ring(), 3, vec![a.basis_vector(0), a.basis_vector(1)]).unwrap();
        assert_eq!(c.span, want);
        assert!(closure(&a, &[]).span.is_zero());
    }

    #[test]
    fn induced_submodule_with_torsion() {
        // Z/4 algebra of shape (4, 4), e1 * e1 = 2 e2; subalgebra generated by 2 e1 + e2
        let r = Ring::modular(4).unwrap();
        let s = Signature::binary("mul");
        let mut b = FiniteAlgebra::builder(&r, &s, vec![4, 4]);
        b.set("mul", &[0, 0], &[0, 2]).unwrap();
        b.set("mul", &[0, 1], &[2, 0]).unwrap();
        let a = b.build().unwrap();
        let c = closure(&a, &[vec![2, 1]]);
        let ind = induce(&a, &c.span).unwrap();
        assert_eq!(ind.algebra.size(), c.span.size());
        // tables agree with the parent through the embedding
        let elems = ind.algebra.elements(1000).unwrap();
        for u in &elems {
            assert!(c.span.contains(&ind.to_parent(u)));
            assert_eq!(ind.to_local(&ind.to_parent(u)), *u);
            for v in &elems {
                let lhs = ind.to_parent(&ind.algebra.apply(0, &[u, v]));
                let rhs = a.apply(0, &[&ind.to_parent(u), &ind.to_parent(v)]);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn ideal_closure_examples() {
        // h is central, so e generates span{e, h}
        let a = sl2();
        assert_eq!(ideal_closure_rows(&a, &[a.basis_vector(0)]).size(), 4);
        assert_eq!(ideal_closure_rows(&a, &[(a.add(&a.basis_vector(0), &a.basis_vector(1)))]).size(), 4);
        let l = heisenberg();
        assert_eq!(ideal_closure_rows(&l, &[l.basis_vector(2)]).size(), 2);
    }

    #[test]
    fn product_space_apply() {
        let l = heisenberg();
        let p = ProductSpace::new(l.ring(), l.sig(), vec![&l, &l]).unwrap();
        let x = [1, 0, 0, 0, 1, 0];
        let y = [0, 1, 0, 1, 0, 0];
        assert_eq!(p.apply(0, &[&x, &y]), vec![0, 0, 1, 0, 0, 1]);
        assert_eq!(p.coefficient(&x, 4), 1);
    }
}
