//! Finite Ω-algebras given by a module shape and structure-constant tables.
//!
//! An algebra of shape `(d_1, .., d_r)` is stored inside `k^r`: the basis
//! element `e_i` is the vector `(n / d_i) ε_i` (just `ε_i` over a field).
//! Every routine below works on these ambient vectors, so submodules, kernels
//! and quotients reduce to linear algebra over `k`.

mod construct;
mod hom;
mod iso;
mod space;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::modring::{axpy, gcd, ReducedMatrix, Ring, RingElem};
use crate::sigterm::{Polynomial, Signature, Term};

pub use construct::{
    direct_product, direct_product_in, is_ideal_span, quotient, subalgebra_closure, subalgebra_of_span, Product, Quotient,
    Subalgebra, Submodule,
};
pub use hom::Homomorphism;
pub use iso::{additive_order, greedy_generators, iso_search, iso_search_all, IsoOutcome, DEFAULT_ISO_NODE_CAP};
pub use space::{
    closure, eval_polynomial, eval_term, ideal_closure_rows, induce, Closure, Induced, OpSpace, ProductSpace, Recipe,
};

/// Largest admissible `|A|` for algebras built from user input.
pub const MAX_ELEMENTS: u128 = 1 << 16;
/// Largest admissible rank for algebras built from user input.
pub const MAX_RANK: usize = 12;
/// Default cap on the number of assignments tried by brute-force identity
/// checks.
pub const DEFAULT_ASSIGNMENT_CAP: u128 = 1 << 22;

/// An element as its coordinate vector, coordinate `i` taken modulo `d_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub coords: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum OpData {
    Constant(Vec<RingElem>),
    /// Outputs for every basis tuple, indexed in mixed radix `r`.
    Table(Vec<Vec<RingElem>>),
}

#[derive(Debug, Clone)]
pub struct FiniteAlgebra {
    ring: Arc<Ring>,
    sig: Arc<Signature>,
    orders: Vec<u32>,
    factors: Vec<RingElem>,
    names: Vec<String>,
    ops: Arc<Vec<OpData>>,
    label: Option<String>,
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.sig == other.sig && self.orders == other.orders && self.ops == other.ops
    }
}
impl Eq for FiniteAlgebra {}

#[derive(Clone)]
enum Entry {
    Coords(Vec<i64>),
    Ambient(Vec<RingElem>),
}

/// Accumulates structure constants before validation.
pub struct AlgebraBuilder {
    ring: Arc<Ring>,
    sig: Arc<Signature>,
    orders: Vec<u32>,
    names: Option<Vec<String>>,
    entries: Vec<BTreeMap<Vec<usize>, Entry>>,
    label: Option<String>,
}

impl AlgebraBuilder {
    pub fn names<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.names = Some(names.into_iter().map(Into::into).collect());
        self
    }

    pub fn label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Sets `ω(e_{i_1}, .., e_{i_m})` (or the constant for a 0-ary op) to the
    /// element with the given integer coordinates, reduced into the shape.
    pub fn set(&mut self, op: &str, tuple: &[usize], coords: &[i64]) -> Result<&mut Self> {
        let o = self
            .sig
            .lookup(op)
            .ok_or_else(|| Error::InvalidAlgebra(format!("unknown operation '{op}'")))?;
        self.set_index(o, tuple, coords)
    }

    pub fn set_index(&mut self, op: usize, tuple: &[usize], coords: &[i64]) -> Result<&mut Self> {
        let r = self.orders.len();
        if tuple.len() != self.sig.arity(op) {
            return Err(Error::InvalidAlgebra(format!(
                "operation '{}' has arity {}, got {} indices",
                self.sig.name(op),
                self.sig.arity(op),
                tuple.len()
            )));
        }
        if tuple.iter().any(|&i| i >= r) || coords.len() != r {
            return Err(Error::InvalidAlgebra("basis index or coordinate count out of range".into()));
        }
        self.entries[op].insert(tuple.to_vec(), Entry::Coords(coords.to_vec()));
        Ok(self)
    }

    /// Like [`set_index`](Self::set_index) with an ambient vector, which
    /// allows field-extension coefficients.
    pub fn set_vector(&mut self, op: usize, tuple: &[usize], v: Vec<RingElem>) -> Result<&mut Self> {
        self.set_index(op, tuple, &vec![0; self.orders.len()])?;
        if v.iter().any(|&x| x >= self.ring.size()) {
            return Err(Error::InvalidAlgebra("vector entry outside the ring".into()));
        }
        self.entries[op].insert(tuple.to_vec(), Entry::Ambient(v));
        Ok(self)
    }

    /// Whether an entry was already set.
    pub fn is_set(&self, op: usize, tuple: &[usize]) -> bool {
        self.entries[op].contains_key(tuple)
    }

    pub fn build(self) -> Result<FiniteAlgebra> {
        let a = self.build_unchecked()?;
        if a.rank() > MAX_RANK || a.size() > MAX_ELEMENTS {
            return Err(Error::InvalidAlgebra(format!(
                "algebra of rank {} and size {} exceeds the limits (rank {MAX_RANK}, size {MAX_ELEMENTS})",
                a.rank(),
                a.size()
            )));
        }
        Ok(a)
    }

    /// Builds without the size limits (internal constructions).
    pub(crate) fn build_unchecked(self) -> Result<FiniteAlgebra> {
        let ring = self.ring;
        let r = self.orders.len();
        for &d in &self.orders {
            if !ring.valid_order(d) || d < 2 {
                return Err(Error::InvalidAlgebra(format!("order {d} is not admissible over {}", ring.spec())));
            }
        }
        let names = match self.names {
            Some(n) if n.len() == r => n,
            Some(_) => return Err(Error::InvalidAlgebra("basis name count differs from rank".into())),
            None => (1..=r).map(|i| format!("e{i}")).collect(),
        };
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::InvalidAlgebra(format!("duplicate basis name {a}")));
            }
        }
        let factors: Vec<RingElem> = self.orders.iter().map(|&d| ring.embed_factor(d)).collect();
        let to_ambient = |e: &Entry| -> Vec<RingElem> {
            let c = match e {
                Entry::Ambient(v) => return v.clone(),
                Entry::Coords(c) => c,
            };
            c.iter()
                .zip(&self.orders)
                .zip(&factors)
                .map(|((&x, &d), &f)| {
                    if ring.is_field_ext() {
                        ring.from_int(x)
                    } else {
                        ring.mul(ring.from_int(x.rem_euclid(d as i64)), f)
                    }
                })
                .collect()
        };
        let mut ops = Vec::with_capacity(self.sig.len());
        for (o, _, arity) in self.sig.ops() {
            let entries = &self.entries[o];
            if arity == 0 {
                let v = entries.get(&Vec::new()).map_or_else(|| vec![0; r], &to_ambient);
                ops.push(OpData::Constant(v));
                continue;
            }
            let count = r.checked_pow(arity as u32).filter(|&c| c <= 1 << 22).ok_or_else(|| {
                Error::InvalidAlgebra(format!("table for '{}' too large", self.sig.name(o)))
            })?;
            let mut data = vec![vec![0; r]; count];
            for (tuple, c) in entries {
                let idx = tuple.iter().fold(0, |acc, &i| acc * r + i);
                data[idx] = to_ambient(c);
            }
            ops.push(OpData::Table(data));
        }
        let a = FiniteAlgebra {
            ring,
            sig: self.sig,
            orders: self.orders,
            factors,
            names,
            ops: Arc::new(ops),
            label: self.label,
        };
        a.check_torsion()?;
        Ok(a)
    }
}

impl FiniteAlgebra {
    pub fn builder(ring: &Arc<Ring>, sig: &Arc<Signature>, orders: Vec<u32>) -> AlgebraBuilder {
        AlgebraBuilder {
            ring: ring.clone(),
            sig: sig.clone(),
            orders,
            names: None,
            entries: vec![BTreeMap::new(); sig.len()],
            label: None,
        }
    }

    /// Builder for a free module of rank `r` (every order `|k|`).
    pub fn builder_free(ring: &Arc<Ring>, sig: &Arc<Signature>, r: usize) -> AlgebraBuilder {
        Self::builder(ring, sig, vec![ring.size(); r])
    }

    /// The zero algebra.
    pub fn zero(ring: &Arc<Ring>, sig: &Arc<Signature>) -> FiniteAlgebra {
        Self::builder(ring, sig, Vec::new()).build_unchecked().expect("zero algebra is valid")
    }

    /// Assembles an algebra from ambient-form tables produced internally.
    pub(crate) fn from_ambient_tables(
        ring: &Arc<Ring>,
        sig: &Arc<Signature>,
        orders: Vec<u32>,
        mut table: impl FnMut(usize, &[usize]) -> Vec<RingElem>,
    ) -> Result<FiniteAlgebra> {
        let r = orders.len();
        let factors: Vec<RingElem> = orders.iter().map(|&d| ring.embed_factor(d)).collect();
        let mut ops = Vec::with_capacity(sig.len());
        for (o, _, arity) in sig.ops() {
            if arity == 0 {
                ops.push(OpData::Constant(table(o, &[])));
                continue;
            }
            let count = r.pow(arity as u32);
            let mut data = Vec::with_capacity(count);
            let mut tuple = vec![0usize; arity];
            for _ in 0..count {
                data.push(table(o, &tuple));
                for k in (0..arity).rev() {
                    tuple[k] += 1;
                    if tuple[k] < r {
                        break;
                    }
                    tuple[k] = 0;
                }
            }
            ops.push(OpData::Table(data));
        }
        let a = FiniteAlgebra {
            ring: ring.clone(),
            sig: sig.clone(),
            names: (1..=r).map(|i| format!("e{i}")).collect(),
            orders,
            factors,
            ops: Arc::new(ops),
            label: None,
        };
        for o in a.ops.iter() {
            let vals: Box<dyn Iterator<Item = &Vec<RingElem>>> = match o {
                OpData::Constant(v) => Box::new(std::iter::once(v)),
                OpData::Table(d) => Box::new(d.iter()),
            };
            for v in vals {
                if !a.is_vector(v) {
                    return Err(Error::Inconsistent("structure constant outside the module".into()));
                }
            }
        }
        a.check_torsion()?;
        Ok(a)
    }

    fn check_torsion(&self) -> Result<()> {
        if self.ring.is_field_ext() {
            return Ok(());
        }
        let n = self.ring.size() as u64;
        for (o, _, arity) in self.sig.ops() {
            let OpData::Table(data) = &self.ops[o] else { continue };
            let r = self.rank();
            for (idx, v) in data.iter().enumerate() {
                let tuple = self.unflatten(idx, arity);
                let g = tuple.iter().fold(n, |acc, &i| gcd(acc, self.orders[i] as u64));
                let gs = (g % n) as RingElem;
                if v.iter().any(|&x| self.ring.mul(gs, x) != 0) {
                    let names: Vec<&str> = tuple.iter().map(|&i| self.names[i].as_str()).collect();
                    return Err(Error::InvalidAlgebra(format!(
                        "torsion violation: order of {}({}) does not divide {g}",
                        self.sig.name(o),
                        names.join(",")
                    )));
                }
                debug_assert_eq!(v.len(), r);
            }
        }
        Ok(())
    }

    fn unflatten(&self, mut idx: usize, arity: usize) -> Vec<usize> {
        let r = self.rank();
        let mut t = vec![0; arity];
        for k in (0..arity).rev() {
            t[k] = idx % r;
            idx /= r;
        }
        t
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn sig(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.rank() {
            return Err(Error::InvalidAlgebra("basis name count differs from rank".into()));
        }
        self.names = names;
        Ok(self)
    }

    /// `|A|` (saturating).
    pub fn size(&self) -> u128 {
        self.orders.iter().fold(1u128, |acc, &d| acc.saturating_mul(d as u128))
    }

    pub fn is_zero(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn zero_vector(&self) -> Vec<RingElem> {
        vec![0; self.rank()]
    }

    /// Ambient vector of the basis element `e_i`.
    pub fn basis_vector(&self, i: usize) -> Vec<RingElem> {
        let mut v = self.zero_vector();
        v[i] = self.factors[i];
        v
    }

    pub fn basis_vectors(&self) -> Vec<Vec<RingElem>> {
        (0..self.rank()).map(|i| self.basis_vector(i)).collect()
    }

    /// The whole algebra as a submodule of the ambient space.
    pub fn full_module(&self) -> ReducedMatrix {
        ReducedMatrix::reduce_unchecked(&self.ring, self.rank(), self.basis_vectors())
    }

    /// Coefficient of `e_i` in an ambient vector, in `[0, d_i)`.
    #[inline]
    pub fn coefficient(&self, v: &[RingElem], i: usize) -> RingElem {
        if self.ring.is_field_ext() {
            v[i]
        } else {
            v[i] / self.factors[i]
        }
    }

    /// Whether `v` is the ambient form of an element.
    pub fn is_vector(&self, v: &[RingElem]) -> bool {
        v.len() == self.rank()
            && v.iter().zip(&self.factors).all(|(&x, &f)| x < self.ring.size() && (self.ring.is_field_ext() || x % f == 0))
    }

    pub fn to_ambient(&self, e: &Element) -> Vec<RingElem> {
        e.coords
            .iter()
            .zip(&self.factors)
            .map(|(&c, &f)| if self.ring.is_field_ext() { c } else { self.ring.mul(c, f) })
            .collect()
    }

    pub fn from_ambient(&self, v: &[RingElem]) -> Element {
        Element { coords: (0..self.rank()).map(|i| self.coefficient(v, i)).collect() }
    }

    /// Validates coordinates (each below its order) and returns an element.
    pub fn element(&self, coords: &[u32]) -> Result<Element> {
        if coords.len() != self.rank() || coords.iter().zip(&self.orders).any(|(&c, &d)| c >= d) {
            return Err(Error::ShapeMismatch(format!("{coords:?} is not an element of shape {:?}", self.orders)));
        }
        Ok(Element { coords: coords.to_vec() })
    }

    pub fn basis_element(&self, i: usize) -> Element {
        self.from_ambient(&self.basis_vector(i))
    }

    /// The element with index `idx` in the enumeration order of
    /// [`FiniteAlgebra::elements`].
    pub fn element_at(&self, mut idx: u128) -> Vec<RingElem> {
        let mut coords = vec![0u32; self.rank()];
        for i in (0..self.rank()).rev() {
            let d = self.orders[i] as u128;
            coords[i] = (idx % d) as u32;
            idx /= d;
        }
        self.to_ambient(&Element { coords })
    }

    /// All elements in lexicographic coordinate order, or an error if there
    /// are more than `cap`.
    pub fn elements(&self, cap: u128) -> Result<Vec<Vec<RingElem>>> {
        let size = self.size();
        if size > cap {
            return Err(Error::cap("element enumeration", cap.min(u64::MAX as u128) as u64));
        }
        Ok((0..size).map(|i| self.element_at(i)).collect())
    }

    pub fn constant(&self, op: usize) -> &[RingElem] {
        match &self.ops[op] {
            OpData::Constant(v) => v,
            OpData::Table(_) => panic!("operation {op} is not a constant"),
        }
    }

    /// `ω(e_{i_1}, .., e_{i_m})` in ambient form.
    pub fn table(&self, op: usize, tuple: &[usize]) -> &[RingElem] {
        match &self.ops[op] {
            OpData::Constant(v) => v,
            OpData::Table(d) => {
                let r = self.rank();
                &d[tuple.iter().fold(0, |acc, &i| acc * r + i)]
            }
        }
    }

    /// `ω(a_1, .., a_m)` on ambient vectors by multilinear expansion.
    pub fn apply(&self, op: usize, args: &[&[RingElem]]) -> Vec<RingElem> {
        let r = self.rank();
        let data = match &self.ops[op] {
            OpData::Constant(v) => return v.clone(),
            OpData::Table(d) => d,
        };
        let ring = &*self.ring;
        let supports: Vec<Vec<(usize, RingElem)>> = args
            .iter()
            .map(|a| (0..r).filter_map(|i| Some((i, self.coefficient(a, i))).filter(|&(_, c)| c != 0)).collect())
            .collect();
        let mut out = vec![0; r];
        if supports.iter().any(Vec::is_empty) {
            return out;
        }
        let m = args.len();
        let mut pos = vec![0usize; m];
        loop {
            let mut idx = 0;
            let mut coef = 1;
            for k in 0..m {
                let (i, c) = supports[k][pos[k]];
                idx = idx * r + i;
                coef = ring.mul(coef, c);
            }
            axpy(ring, &mut out, coef, &data[idx]);
            let mut k = m;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                pos[k] += 1;
                if pos[k] < supports[k].len() {
                    break;
                }
                pos[k] = 0;
            }
        }
    }

    pub fn add(&self, a: &[RingElem], b: &[RingElem]) -> Vec<RingElem> {
        a.iter().zip(b).map(|(&x, &y)| self.ring.add(x, y)).collect()
    }

    pub fn scale(&self, c: RingElem, a: &[RingElem]) -> Vec<RingElem> {
        a.iter().map(|&x| self.ring.mul(c, x)).collect()
    }

    pub fn format_vector(&self, v: &[RingElem]) -> String {
        let mut parts = Vec::new();
        for i in 0..self.rank() {
            let c = self.coefficient(v, i);
            if c == 0 {
                continue;
            }
            if c == 1 {
                parts.push(self.names[i].clone());
            } else if self.ring.is_field_ext() {
                parts.push(format!("({})*{}", self.ring.format_elem(c), self.names[i]));
            } else {
                parts.push(format!("{c}*{}", self.names[i]));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn format_element(&self, e: &Element) -> String {
        self.format_vector(&self.to_ambient(e))
    }

    /// Checks that `f` only uses operations of this signature with the
    /// right arities and is over the same ring.
    pub fn check_polynomial(&self, f: &Polynomial) -> Result<()> {
        if **f.ring() != *self.ring {
            return Err(Error::RingMismatch);
        }
        fn ok(t: &Term, sig: &Signature) -> bool {
            match t {
                Term::Var(_) => true,
                Term::Op(o, args) => *o < sig.len() && sig.arity(*o) == args.len() && args.iter().all(|a| ok(a, sig)),
            }
        }
        if f.terms().all(|(t, _)| ok(t, &self.sig)) {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    /// Evaluates `f` at an assignment of elements to variables.
    pub fn evaluate(&self, f: &Polynomial, args: &BTreeMap<u32, Element>) -> Result<Element> {
        self.check_polynomial(f)?;
        let vars = f.variables();
        let max = vars.iter().copied().max().unwrap_or(0) as usize;
        let mut assign = vec![self.zero_vector(); max];
        for v in vars {
            let e = args
                .get(&v)
                .ok_or_else(|| Error::InvalidArgument(format!("no value for variable x{v}")))?;
            self.element(&e.coords)?;
            assign[v as usize - 1] = self.to_ambient(e);
        }
        Ok(self.from_ambient(&eval_polynomial(self, f, &assign)))
    }

    /// Whether `f` vanishes on all of `A`. Multilinear `f` is tested on
    /// basis tuples only; otherwise every assignment is tried, up to `cap`
    /// assignments.
    pub fn is_identity(&self, f: &Polynomial, cap: u128) -> Result<bool> {
        self.check_polynomial(f)?;
        let vars: Vec<u32> = f.variables().into_iter().collect();
        let max = vars.last().copied().unwrap_or(0) as usize;
        let mut assign = vec![self.zero_vector(); max];
        let candidates: Vec<Vec<RingElem>> = if f.is_multilinear() {
            self.basis_vectors()
        } else {
            let total = self.size().checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
            if total > cap {
                return Err(Error::cap("identity check assignments", cap.min(u64::MAX as u128) as u64));
            }
            self.elements(u128::MAX)?
        };
        if vars.is_empty() {
            return Ok(crate::modring::matrix::is_zero_vec(&eval_polynomial(self, f, &assign)));
        }
        if candidates.is_empty() {
            return Ok(true);
        }
        let mut pos = vec![0usize; vars.len()];
        loop {
            for (k, &v) in vars.iter().enumerate() {
                assign[v as usize - 1] = candidates[pos[k]].clone();
            }
            if !crate::modring::matrix::is_zero_vec(&eval_polynomial(self, f, &assign)) {
                return Ok(false);
            }
            let mut k = vars.len();
            loop {
                if k == 0 {
                    return Ok(true);
                }
                k -= 1;
                pos[k] += 1;
                if pos[k] < candidates.len() {
                    break;
                }
                pos[k] = 0;
            }
        }
    }

    /// Span of all operation outputs on basis tuples, per operation.
    pub fn op_image(&self, op: usize) -> ReducedMatrix {
        let rows = match &self.ops[op] {
            OpData::Constant(v) => vec![v.clone()],
            OpData::Table(d) => d.clone(),
        };
        ReducedMatrix::reduce_unchecked(&self.ring, self.rank(), rows)
    }

    /// Human-readable table listing.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        let label = self.label.as_deref().unwrap_or("A");
        let basis: Vec<String> = self
            .names
            .iter()
            .zip(&self.orders)
            .map(|(n, &d)| if d == self.ring.size() { n.clone() } else { format!("{n}:{d}") })
            .collect();
        s.push_str(&format!("algebra {label} {{ basis {}", basis.join(", ")));
        for (o, name, arity) in self.sig.ops() {
            if arity == 0 {
                let v = self.constant(o);
                if !crate::modring::matrix::is_zero_vec(v) {
                    s.push_str(&format!(" ; {name} = {}", self.format_vector(v)));
                }
                continue;
            }
            let OpData::Table(data) = &self.ops[o] else { unreachable!() };
            for (idx, v) in data.iter().enumerate() {
                if crate::modring::matrix::is_zero_vec(v) {
                    continue;
                }
                let t: Vec<&str> = self.unflatten(idx, arity).into_iter().map(|i| self.names[i].as_str()).collect();
                s.push_str(&format!(" ; {name}({}) = {}", t.join(","), self.format_vector(v)));
            }
        }
        s.push_str(" }");
        s
    }
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

#[cfg(test)]
pub(crate) mod testalg {
    use super::*;

    pub fn a1() -> FiniteAlgebra {
        let r = Ring::modular(3).unwrap();
        let s = Signature::binary("mul");
        let mut b = FiniteAlgebra::builder(&r, &s, vec![3, 3, 3]).names(["x", "r", "t"]).label("A1");
        b.set("mul", &[1, 1], &[1, 0, 0]).unwrap();
        b.set("mul", &[1, 2], &[1, 0, 0]).unwrap();
        b.set("mul", &[2, 1], &[-1, 0, 0]).unwrap();
        b.build().unwrap()
    }

    pub fn a2() -> FiniteAlgebra {
        let r = Ring::modular(3).unwrap();
        let s = Signature::binary("mul");
        let mut b = FiniteAlgebra::builder(&r, &s, vec![3, 3, 3]).names(["x", "y", "z"]).label("A2");
        b.set("mul", &[1, 1], &[1, 0, 0]).unwrap();
        b.set("mul", &[2, 2], &[1, 0, 0]).unwrap();
        b.set("mul", &[1, 2], &[1, 0, 0]).unwrap();
        b.set("mul", &[2, 1], &[-1, 0, 0]).unwrap();
        b.build().unwrap()
    }

    pub fn sl2() -> FiniteAlgebra {
        let r = Ring::modular(2).unwrap();
        let s = Signature::binary("br");
        let mut b = FiniteAlgebra::builder(&r, &s, vec![2, 2, 2]).names(["e", "f", "h"]).label("sl2");
        b.set("br", &[0, 1], &[0, 0, 1]).unwrap();
        b.set("br", &[1, 0], &[0, 0, 1]).unwrap();
        b.build().unwrap()
    }

    pub fn heisenberg() -> FiniteAlgebra {
        let r = Ring::modular(2).unwrap();
        let s = Signature::binary("br");
        let mut b = FiniteAlgebra::builder(&r, &s, vec![2, 2, 2]).names(["x", "y", "z"]).label("L");
        b.set("br", &[0, 1], &[0, 0, 1]).unwrap();
        b.set("br", &[1, 0], &[0, 0, 1]).unwrap();
        b.build().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::testalg::*;
    use super::*;
    use crate::sigterm::parse_polynomial;

    fn e(coords: &[u32]) -> Element {
        Element { coords: coords.to_vec() }
    }

    #[test]
    fn a1_products() {
        let a = a1();
        let f = parse_polynomial("mul(x1,x2)", a.sig(), a.ring()).unwrap();
        let args = BTreeMap::from([(1, e(&[0, 1, 0])), (2, e(&[0, 0, 1]))]);
        assert_eq!(a.evaluate(&f, &args).unwrap(), e(&[1, 0, 0]));
        let args = BTreeMap::from([(1, e(&[0, 0, 1])), (2, e(&[0, 1, 0]))]);
        assert_eq!(a.evaluate(&f, &args).unwrap(), e(&[2, 0, 0]));
        let args = BTreeMap::from([(1, e(&[0, 0, 0])), (2, e(&[2, 1, 1]))]);
        assert_eq!(a.evaluate(&f, &args).unwrap(), e(&[0, 0, 0]));
    }

    #[test]
    fn sl2_bracket_he_vanishes() {
        let a = sl2();
        let f = parse_polynomial("br(x1,x2)", a.sig(), a.ring()).unwrap();
        let args = BTreeMap::from([(1, a.basis_element(2)), (2, a.basis_element(0))]);
        assert_eq!(a.evaluate(&f, &args).unwrap(), e(&[0, 0, 0]));
        let args = BTreeMap::from([(1, a.basis_element(0)), (2, a.basis_element(1))]);
        assert_eq!(a.evaluate(&f, &args).unwrap(), a.basis_element(2));
    }

    #[test]
    fn identities() {
        let a = a1();
        let assoc = parse_polynomial("mul(mul(x1,x2),x3)", a.sig(), a.ring()).unwrap();
        assert!(a.is_identity(&assoc, DEFAULT_ASSIGNMENT_CAP).unwrap());
        let x = parse_polynomial("x1", a.sig(), a.ring()).unwrap();
        assert!(!a.is_identity(&x, DEFAULT_ASSIGNMENT_CAP).unwrap());

        let r = Ring::modular(2).unwrap();
        let s = Signature::binary("mul");
        let mut b = FiniteAlgebra::builder(&r, &s, vec![2]);
        b.set("mul", &[0, 0], &[1]).unwrap();
        let f2 = b.build().unwrap();
        let pow = parse_polynomial("mul(x1,x1) - x1", &s, &r).unwrap();
        assert!(f2.is_identity(&pow, DEFAULT_ASSIGNMENT_CAP).unwrap());
    }

    #[test]
    fn torsion_violation_rejected() {
        let r = Ring::modular(4).unwrap();
        let s = Signature::binary("mul");
        let mut b = FiniteAlgebra::builder(&r, &s, vec![2, 4]);
        // e1 has order 2, so e1 * e1 must have order dividing 2
        b.set("mul", &[0, 0], &[0, 1]).unwrap();
        assert!(matches!(b.build(), Err(Error::InvalidAlgebra(_))));
        let mut b = FiniteAlgebra::builder(&r, &s, vec![2, 4]);
        b.set("mul", &[0, 1], &[1, 2]).unwrap();
        assert!(b.build().is_ok());
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn torsion_apply_matches_coordinates() {
        // Z/4 with shape (2, 4): e1 = (2, 0) in the ambient space.
        let r = Ring::modular(4).unwrap();
        let s = Signature::binary("mul");
        let mut b = FiniteAlgebra::builder(&r, &s, vec![2, 4]);
        b.set("mul", &[0, 1], &[1, 2]).unwrap();
        b.set("mul", &[1, 1], &[1, 1]).unwrap();
        let a = b.build().unwrap();
        assert_eq!(a.basis_vector(0), vec![2, 0]);
        let elems = a.elements(100).unwrap();
        assert_eq!(elems.len(), 8);
        // brute-force bilinear expansion on coordinates
        for u in &elems {
            for v in &elems {
                let (cu, cv) = (a.from_ambient(u).coords, a.from_ambient(v).coords);
                let mut want = [0i64; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        let t = a.from_ambient(a.table(0, &[i, j])).coords;
                        for k in 0..2 {
                            want[k] += cu[i] as i64 * cv[j] as i64 * t[k] as i64;
                        }
                    }
                }
                let want: Vec<u32> = want.iter().zip(a.orders()).map(|(&w, &d)| (w % d as i64) as u32).collect();
                assert_eq!(a.from_ambient(&a.apply(0, &[u, v])).coords, want);
            }
        }
    }

    #[test]
    fn size_limits() {
        let r = Ring::modular(2).unwrap();
        let s = Signature::binary("mul");
        assert!(FiniteAlgebra::builder(&r, &s, vec![2; 17]).build().is_err());
        assert!(FiniteAlgebra::builder(&r, &s, vec![2; 12]).build().is_ok());
        assert!(FiniteAlgebra::builder(&r, &s, vec![3]).build().is_err());
    }
}
