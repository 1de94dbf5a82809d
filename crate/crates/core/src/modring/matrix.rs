//! Canonical row reduction over `k`.
//!
//! Over `Z/n` the canonical form of a row span is the Howell form: echelon
//! rows with pivots normalized to divisors of `n`, entries above a pivot
//! reduced modulo it, and the Howell property (every vector of the span
//! that vanishes on the first `j` columns is a combination of the rows whose
//! pivot lies beyond `j`). Over a field the same procedure yields RREF.

use std::sync::Arc;

use super::{Ring, RingElem};
use crate::error::{Error, Result};

/// `dst += a * src`.
#[inline]
pub fn axpy(ring: &Ring, dst: &mut [RingElem], a: RingElem, src: &[RingElem]) {
    if a == 0 {
        return;
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d = ring.add(*d, ring.mul(a, s));
        }
    }
}

/// `v *= a`.
#[inline]
pub fn scale(ring: &Ring, v: &mut [RingElem], a: RingElem) {
    if a == 1 {
        return;
    }
    for x in v.iter_mut() {
        *x = ring.mul(a, *x);
    }
}

/// Applies `[[s, t], [u, v]]` to the row pair `(x, y)`.
fn mix(ring: &Ring, x: &mut [RingElem], y: &mut [RingElem], m: (RingElem, RingElem, RingElem, RingElem)) {
    let (s, t, u, v) = m;
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let (na, nb) = (ring.lin2(s, *a, t, *b), ring.lin2(u, *a, v, *b));
        *a = na;
        *b = nb;
    }
}

pub(crate) fn is_zero_vec(v: &[RingElem]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Row span of a matrix over `k`, held in canonical reduced form.
#[derive(Debug, Clone)]
pub struct ReducedMatrix {
    ring: Arc<Ring>,
    cols: usize,
    rows: Vec<Vec<RingElem>>,
    pivots: Vec<usize>,
}

impl PartialEq for ReducedMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.cols == other.cols && self.rows == other.rows
    }
}
impl Eq for ReducedMatrix {}

impl std::hash::Hash for ReducedMatrix {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.cols.hash(state);
        self.rows.hash(state);
    }
}

impl ReducedMatrix {
    pub fn zero(ring: &Arc<Ring>, cols: usize) -> Self {
        ReducedMatrix { ring: ring.clone(), cols, rows: Vec::new(), pivots: Vec::new() }
    }

    /// Canonical form of the row span of `rows`.
    pub fn reduce(ring: &Arc<Ring>, cols: usize, rows: Vec<Vec<RingElem>>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch(format!("row of length {} in a {cols}-column matrix", bad.len())));
        }
        if let Some(bad) = rows.iter().flatten().find(|&&x| x >= ring.size()) {
            return Err(Error::ShapeMismatch(format!("entry {bad} is not a canonical element of {}", ring.spec())));
        }
        Ok(Self::reduce_unchecked(ring, cols, rows))
    }

    pub(crate) fn reduce_unchecked(ring: &Arc<Ring>, cols: usize, rows: Vec<Vec<RingElem>>) -> Self {
        let (rows, pivots) = howell(ring, cols, rows);
        ReducedMatrix { ring: ring.clone(), cols, rows, pivots }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<RingElem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reduces `v` against the rows in place; `v` is in the span iff it
    /// ends up zero.
    pub fn reduce_vector(&self, v: &mut [RingElem]) {
        let ring = &*self.ring;
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let piv = row[c];
            let (q, _) = ring.rem(v[c], piv);
            if q != 0 {
                axpy(ring, v, ring.neg(q), row);
            }
        }
    }

    pub fn contains(&self, v: &[RingElem]) -> bool {
        let mut w = v.to_vec();
        self.reduce_vector(&mut w);
        is_zero_vec(&w)
    }

    pub fn contains_all(&self, other: &ReducedMatrix) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Adds `v` to the span; returns whether the span grew.
    pub fn insert(&mut self, v: Vec<RingElem>) -> bool {
        if self.contains(&v) {
            return false;
        }
        let mut rows = std::mem::take(&mut self.rows);
        rows.push(v);
        let (rows, pivots) = howell(&self.ring, self.cols, rows);
        self.rows = rows;
        self.pivots = pivots;
        true
    }

    pub fn sum(&self, other: &ReducedMatrix) -> ReducedMatrix {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Self::reduce_unchecked(&self.ring, self.cols, rows)
    }

    pub fn intersect(&self, other: &ReducedMatrix) -> ReducedMatrix {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring, self.cols);
        }
        let ring = &self.ring;
        let stacked: Vec<Vec<RingElem>> = self.rows.iter().chain(&other.rows).cloned().collect();
        let ker = kernel(ring, &stacked, self.cols);
        let m = self.rows.len();
        let out = ker
            .rows()
            .iter()
            .map(|coef| {
                let mut v = vec![0; self.cols];
                for (c, row) in coef[..m].iter().zip(&self.rows) {
                    axpy(ring, &mut v, *c, row);
                }
                v
            })
            .collect();
        Self::reduce_unchecked(ring, self.cols, out)
    }

    /// Number of vectors in the span (saturating).
    pub fn size(&self) -> u128 {
        self.rows
            .iter()
            .zip(&self.pivots)
            .fold(1u128, |acc, (r, &c)| acc.saturating_mul(self.ring.ideal_size(r[c]) as u128))
    }

    /// Additive generators paired with the number of distinct multiples of
    /// each: every span vector is uniquely `sum c_i row_i`, `c_i < count_i`.
    pub fn multiplicities(&self) -> Vec<u32> {
        self.rows.iter().zip(&self.pivots).map(|(r, &c)| self.ring.ideal_size(r[c])).collect()
    }

    /// All vectors of the span, or `None` if there are more than `cap`.
    pub fn span_elements(&self, cap: u64) -> Option<Vec<Vec<RingElem>>> {
        if self.size() > cap as u128 {
            return None;
        }
        let ring = &*self.ring;
        let mult = self.multiplicities();
        let mut out = vec![vec![0; self.cols]];
        for (row, &m) in self.rows.iter().zip(&mult) {
            let mut next = Vec::with_capacity(out.len() * m as usize);
            for v in &out {
                for c in 0..m {
                    let mut w = v.clone();
                    axpy(ring, &mut w, c, row);
                    next.push(w);
                }
            }
            out = next;
        }
        out.sort();
        Some(out)
    }

    /// Linear combination of the rows; `coef` has one entry per row.
    pub fn combine(&self, coef: &[RingElem]) -> Vec<RingElem> {
        let mut v = vec![0; self.cols];
        for (c, row) in coef.iter().zip(&self.rows) {
            axpy(&self.ring, &mut v, *c, row);
        }
        v
    }
}

fn howell(ring: &Ring, cols: usize, mut a: Vec<Vec<RingElem>>) -> (Vec<Vec<RingElem>>, Vec<usize>) {
    a.retain(|r| !is_zero_vec(r));
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r >= a.len() {
            break;
        }
        let Some(i) = (r..a.len()).find(|&i| a[i][col] != 0) else { continue };
        a.swap(r, i);
        for i in r + 1..a.len() {
            let b = a[i][col];
            if b == 0 {
                continue;
            }
            let m = ring.bezout(a[r][col], b);
            let (head, tail) = a.split_at_mut(i);
            mix(ring, &mut head[r], &mut tail[0], m);
        }
        let (u, p) = ring.assoc(a[r][col]);
        scale(ring, &mut a[r], u);
        let pivot_row = a[r].clone();
        for row in a.iter_mut().take(r) {
            let (q, _) = ring.rem(row[col], p);
            if q != 0 {
                axpy(ring, row, ring.neg(q), &pivot_row);
            }
        }
        let an = ring.ann(p);
        if an != 0 {
            let mut extra = pivot_row.clone();
            scale(ring, &mut extra, an);
            if !is_zero_vec(&extra) {
                a.push(extra);
            }
        }
        pivots.push(col);
        r += 1;
        // drop rows zeroed out by elimination
        let (keep, rest) = a.split_at(r);
        let mut rebuilt: Vec<Vec<RingElem>> = keep.to_vec();
        rebuilt.extend(rest.iter().filter(|v| !is_zero_vec(v)).cloned());
        a = rebuilt;
    }
    a.truncate(r);
    (a, pivots)
}

/// Canonical generating set of the left kernel `{x : x M = 0}` of the
/// matrix with the given rows (each of length `cols`). Over `Z/n` this
/// includes torsion solutions.
pub fn kernel(ring: &Arc<Ring>, rows: &[Vec<RingElem>], cols: usize) -> ReducedMatrix {
    let m = rows.len();
    let aug: Vec<Vec<RingElem>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = Vec::with_capacity(cols + m);
            v.extend_from_slice(r);
            v.extend((0..m).map(|j| u32::from(i == j)));
            v
        })
        .collect();
    let (h, piv) = howell(ring, cols + m, aug);
    let out = h
        .into_iter()
        .zip(piv)
        .filter(|&(_, p)| p >= cols)
        .map(|(r, _)| r[cols..].to_vec())
        .collect();
    ReducedMatrix::reduce_unchecked(ring, m, out)
}

/// Solves `x M = target` for `x`; returns one solution if any exists.
pub fn solve_left(ring: &Arc<Ring>, rows: &[Vec<RingElem>], target: &[RingElem]) -> Option<Vec<RingElem>> {
    let cols = target.len();
    let m = rows.len();
    let aug: Vec<Vec<RingElem>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = Vec::with_capacity(cols + m);
            v.extend_from_slice(r);
            v.extend((0..m).map(|j| u32::from(i == j)));
            v
        })
        .collect();
    let (h, piv) = howell(ring, cols + m, aug);
    let mut t = target.to_vec();
    t.resize(cols + m, 0);
    let mut x = vec![0; m];
    for (row, &c) in h.iter().zip(&piv) {
        if c >= cols {
            break;
        }
        let (q, _) = ring.rem(t[c], row[c]);
        if q != 0 {
            axpy(ring, &mut t[..cols], ring.neg(q), &row[..cols]);
            axpy(ring, &mut x, q, &row[cols..]);
        }
    }
    if is_zero_vec(&t[..cols]) {
        Some(x)
    } else {
        None
    }
}

/// Smith decomposition `U M V = D` with `U`, `V` invertible and `D`
/// diagonal with canonical-associate entries.
#[derive(Debug, Clone)]
pub struct Smith {
    pub diag: Vec<RingElem>,
    pub u: Vec<Vec<RingElem>>,
    pub v: Vec<Vec<RingElem>>,
    pub vinv: Vec<Vec<RingElem>>,
}

fn identity(n: usize) -> Vec<Vec<RingElem>> {
    (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect()
}

fn col_axpy(ring: &Ring, m: &mut [Vec<RingElem>], dst: usize, a: RingElem, src: usize) {
    for row in m.iter_mut() {
        let s = row[src];
        if s != 0 {
            row[dst] = ring.add(row[dst], ring.mul(a, s));
        }
    }
}

fn col_mix(ring: &Ring, m: &mut [Vec<RingElem>], c1: usize, c2: usize, t: (RingElem, RingElem, RingElem, RingElem)) {
    // [col1, col2] <- [col1, col2] * [[s, u], [t, v]]
    let (s, tt, u, v) = t;
    for row in m.iter_mut() {
        let (x, y) = (row[c1], row[c2]);
        row[c1] = ring.lin2(s, x, tt, y);
        row[c2] = ring.lin2(u, x, v, y);
    }
}

pub fn smith(ring: &Ring, rows: &[Vec<RingElem>], cols: usize) -> Smith {
    let m = rows.len();
    let mut a: Vec<Vec<RingElem>> = rows.to_vec();
    let mut u = identity(m);
    let mut v = identity(cols);
    let mut vinv = identity(cols);
    let mut diag = Vec::new();
    let size = ring.size();
    for t in 0..m.min(cols) {
        // pick the entry generating the largest ideal
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let sz = ring.ideal_size(x);
                    if best.is_none_or(|(b, _, _)| sz > b) {
                        best = Some((sz, i, j));
                    }
                }
            }
        }
        let Some((_, bi, bj)) = best else { break };
        a.swap(t, bi);
        u.swap(t, bi);
        if bj != t {
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            for row in v.iter_mut() {
                row.swap(t, bj);
            }
            vinv.swap(t, bj);
        }
        loop {
            let (un, _) = ring.assoc(a[t][t]);
            scale(ring, &mut a[t], un);
            scale(ring, &mut u[t], un);
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..m {
                let b = a[i][t];
                if b == 0 {
                    continue;
                }
                match ring.div_exact(b, p) {
                    Some(q) => {
                        let nq = ring.neg(q);
                        let (h, tl) = a.split_at_mut(i);
                        axpy(ring, &mut tl[0], nq, &h[t]);
                        let (h, tl) = u.split_at_mut(i);
                        axpy(ring, &mut tl[0], nq, &h[t]);
                    }
                    None => {
                        let mx = ring.bezout(p, b);
                        let (h, tl) = a.split_at_mut(i);
                        mix(ring, &mut h[t], &mut tl[0], mx);
                        let (h, tl) = u.split_at_mut(i);
                        mix(ring, &mut h[t], &mut tl[0], mx);
                        dirty = true;
                        break;
                    }
                }
            }
            if dirty {
                continue;
            }
            for j in t + 1..cols {
                let b = a[t][j];
                if b == 0 {
                    continue;
                }
                match ring.div_exact(b, p) {
                    Some(q) => {
                        // col_j -= q col_t; vinv row_t += q row_j
                        col_axpy(ring, &mut a, j, ring.neg(q), t);
                        col_axpy(ring, &mut v, j, ring.neg(q), t);
                        let rj = vinv[j].clone();
                        axpy(ring, &mut vinv[t], q, &rj);
                    }
                    None => {
                        let mx = ring.bezout(p, b);
                        col_mix(ring, &mut a, t, j, mx);
                        col_mix(ring, &mut v, t, j, mx);
                        let (s, tt, uu, vv) = mx;
                        let di = ring.bezout_det_inv(mx);
                        // inverse of [[s, uu], [tt, vv]] is di * [[vv, -uu], [-tt, s]]
                        let c = (
                            ring.mul(di, vv),
                            ring.mul(di, ring.neg(uu)),
                            ring.mul(di, ring.neg(tt)),
                            ring.mul(di, s),
                        );
                        let (lo, hi) = vinv.split_at_mut(j);
                        mix(ring, &mut lo[t], &mut hi[0], c);
                        dirty = true;
                        break;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        diag.push(a[t][t]);
    }
    debug_assert!(size >= 2);
    Smith { diag, u, v, vinv }
}
