//! Exact arithmetic over the base ring `k`, which is either `Z/n` or a
//! finite field `F_{p^e}` given by a monic irreducible polynomial over `Z/p`.
//!
//! Ring elements are canonical codes in `[0, |k|)`: the residue itself for
//! `Z/n`, and the base-`p` encoding of the coefficient vector for `F_{p^e}`
//! (coefficient of `u^i` is digit `i`).
//!
//! Besides the field operations, the ring exposes the principal-ideal-ring
//! helpers (`assoc`, `rem`, `bezout`, `ann`) that the Howell and Smith
//! reductions in [`matrix`] are written against, so the same elimination
//! code serves both ring kinds.

pub mod matrix;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

pub use matrix::{axpy, kernel, scale, ReducedMatrix, Smith};

/// A ring element: its canonical code.
pub type RingElem = u32;

/// Largest admissible modulus for `Z/n`.
pub const MAX_MODULUS: u32 = 1 << 31;
/// Largest admissible field order for `F_{p^e}` (arithmetic is tabulated).
pub const MAX_FIELD_ORDER: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum RingSpec {
    /// `Z/n`, `n >= 2`.
    Modular(u32),
    /// `Z/p[u]/(minpoly)`; `minpoly` lists coefficients from `u^0` up to the
    /// leading `1`.
    FieldExt { p: u32, minpoly: Vec<u32> },
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Modular(n) => write!(f, "Z/{n}"),
            RingSpec::FieldExt { p, minpoly } => {
                write!(f, "GF({p}, {})", format_poly_coeffs(minpoly))
            }
        }
    }
}

#[derive(Debug)]
struct FieldTables {
    p: u32,
    degree: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// The base ring together with precomputed arithmetic.
#[derive(Debug)]
pub struct Ring {
    spec: RingSpec,
    size: u32,
    field: Option<FieldTables>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}
impl Eq for Ring {}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended gcd on nonnegative integers: returns `(g, s, t)` with `s a + t b = g`.
fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if (p as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn format_poly_coeffs(c: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "u".to_string(),
            _ => format!("u^{i}"),
        };
        parts.push(match (a, i) {
            (_, 0) => a.to_string(),
            (1, _) => mono,
            _ => format!("{a}{mono}"),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

/// Polynomial remainder over `Z/p`; `divisor` must be monic.
fn poly_rem(mut a: Vec<u32>, divisor: &[u32], p: u32) -> Vec<u32> {
    let dd = divisor.len() - 1;
    while a.len() > dd {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - dd;
        if lead != 0 {
            for (i, &c) in divisor.iter().enumerate() {
                let idx = shift + i;
                a[idx] = ((a[idx] as u64 + (p - lead) as u64 * c as u64) % p as u64) as u32;
            }
        }
        a.pop();
    }
    a
}

fn is_irreducible(minpoly: &[u32], p: u32) -> bool {
    let e = minpoly.len() - 1;
    // every monic divisor of degree 1..=e/2
    for d in 1..=e / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                div.push((c % p as u64) as u32);
                c /= p as u64;
            }
            div.push(1);
            if poly_rem(minpoly.to_vec(), &div, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

impl Ring {
    pub fn modular(n: u32) -> Result<Arc<Ring>> {
        Ring::new(RingSpec::Modular(n))
    }

    pub fn field_ext(p: u32, minpoly: Vec<u32>) -> Result<Arc<Ring>> {
        Ring::new(RingSpec::FieldExt { p, minpoly })
    }

    pub fn new(spec: RingSpec) -> Result<Arc<Ring>> {
        match &spec {
            RingSpec::Modular(n) => {
                if *n < 2 || *n > MAX_MODULUS {
                    return Err(Error::InvalidRing(format!("modulus {n} outside [2, 2^31]")));
                }
                Ok(Arc::new(Ring { size: *n, spec, field: None }))
            }
            RingSpec::FieldExt { p, minpoly } => {
                let (p, minpoly) = (*p, minpoly.clone());
                if !is_prime(p) {
                    return Err(Error::InvalidRing(format!("{p} is not prime")));
                }
                if minpoly.len() < 2 || *minpoly.last().unwrap() != 1 {
                    return Err(Error::InvalidRing("minimal polynomial must be monic of degree >= 1".into()));
                }
                if minpoly.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidRing("coefficients must lie in [0, p)".into()));
                }
                let e = minpoly.len() - 1;
                let q = (p as u64).checked_pow(e as u32).filter(|&q| q <= MAX_FIELD_ORDER as u64);
                let Some(q) = q else {
                    return Err(Error::InvalidRing(format!("field order exceeds {MAX_FIELD_ORDER}")));
                };
                if !is_irreducible(&minpoly, p) {
                    return Err(Error::InvalidRing("minimal polynomial is reducible".into()));
                }
                let tables = FieldTables::build(p, &minpoly, q as u32);
                Ok(Arc::new(Ring { size: q as u32, spec, field: Some(tables) }))
            }
        }
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    /// `|k|`.
    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn is_field(&self) -> bool {
        self.field.is_some() || is_prime(self.size)
    }

    pub fn is_field_ext(&self) -> bool {
        self.field.is_some()
    }

    pub fn characteristic(&self) -> u32 {
        match &self.field {
            Some(t) => t.p,
            None => self.size,
        }
    }

    pub fn one(&self) -> RingElem {
        1
    }

    #[inline]
    pub fn add(&self, a: RingElem, b: RingElem) -> RingElem {
        match &self.field {
            None => ((a as u64 + b as u64) % self.size as u64) as u32,
            Some(t) => t.add[(a * self.size + b) as usize],
        }
    }

    #[inline]
    pub fn neg(&self, a: RingElem) -> RingElem {
        match &self.field {
            None => {
                if a == 0 {
                    0
                } else {
                    self.size - a
                }
            }
            Some(t) => t.neg[a as usize],
        }
    }

    #[inline]
    pub fn sub(&self, a: RingElem, b: RingElem) -> RingElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: RingElem, b: RingElem) -> RingElem {
        match &self.field {
            None => ((a as u64 * b as u64) % self.size as u64) as u32,
            Some(t) => t.mul[(a * self.size + b) as usize],
        }
    }

    /// `a * x + b * y`.
    #[inline]
    pub fn lin2(&self, a: RingElem, x: RingElem, b: RingElem, y: RingElem) -> RingElem {
        self.add(self.mul(a, x), self.mul(b, y))
    }

    /// Image of an integer under `Z -> k`.
    pub fn from_int(&self, v: i64) -> RingElem {
        let m = self.characteristic() as i64;
        let r = v.rem_euclid(m) as u32;
        match &self.field {
            None => r,
            // the prime subfield is spanned by the constant coefficient
            Some(_) => r,
        }
    }

    pub fn is_unit(&self, a: RingElem) -> bool {
        match &self.field {
            None => gcd(a as u64, self.size as u64) == 1,
            Some(_) => a != 0,
        }
    }

    pub fn inv(&self, a: RingElem) -> Result<RingElem> {
        match &self.field {
            None => {
                let (g, s, _) = xgcd(a as i64, self.size as i64);
                if g != 1 {
                    return Err(Error::NotAUnit(a));
                }
                Ok(s.rem_euclid(self.size as i64) as u32)
            }
            Some(t) => {
                if a == 0 {
                    Err(Error::NotAUnit(0))
                } else {
                    Ok(t.inv[a as usize])
                }
            }
        }
    }

    /// Canonical associate: returns `(u, c)` with `u` a unit and `c = u a`.
    /// Over `Z/n`, `c = gcd(a, n)` (as a residue, so `0` when `a = 0`); over
    /// a field `c` is `0` or `1`.
    pub fn assoc(&self, a: RingElem) -> (RingElem, RingElem) {
        match &self.field {
            Some(t) => {
                if a == 0 {
                    (1, 0)
                } else {
                    (t.inv[a as usize], 1)
                }
            }
            None => {
                if a == 0 {
                    return (1, 0);
                }
                let n = self.size as u64;
                let g = gcd(a as u64, n);
                if g == 1 {
                    return (self.inv(a).unwrap(), 1);
                }
                let m = n / g;
                let a1 = a as u64 / g;
                let (_, s, _) = xgcd((a1 % m) as i64, m as i64);
                let mut u = s.rem_euclid(m as i64) as u64;
                if m == 1 {
                    u = 1;
                }
                while gcd(u, n) != 1 {
                    u += m;
                }
                let u = (u % n) as u32;
                debug_assert_eq!(self.mul(u, a) as u64, g % n);
                (u, (g % n) as u32)
            }
        }
    }

    /// Division with remainder by a canonical associate `p` (output of
    /// [`Ring::assoc`]): `a = q p + r` with `r` the canonical remainder.
    pub fn rem(&self, a: RingElem, p: RingElem) -> (RingElem, RingElem) {
        if p == 0 {
            return (0, a);
        }
        match &self.field {
            Some(t) => (t.mul[(a * self.size + t.inv[p as usize]) as usize], 0),
            None => (a / p, a % p),
        }
    }

    /// Exact division by a canonical associate, if possible.
    pub fn div_exact(&self, a: RingElem, p: RingElem) -> Option<RingElem> {
        let (q, r) = self.rem(a, p);
        if r == 0 {
            Some(q)
        } else {
            None
        }
    }

    /// Returns `(s, t, u, v)` such that `[[s, t], [u, v]]` is invertible,
    /// `s a + t b` generates the ideal `(a, b)` and `u a + v b = 0`.
    /// Requires `a != 0` or `b != 0`.
    pub fn bezout(&self, a: RingElem, b: RingElem) -> (RingElem, RingElem, RingElem, RingElem) {
        match &self.field {
            Some(_) => {
                if a == 0 {
                    return (0, 1, 1, 0);
                }
                let ai = self.inv(a).unwrap();
                (ai, 0, self.neg(self.mul(b, ai)), 1)
            }
            None => {
                let n = self.size as i64;
                let (g, s, t) = xgcd(a as i64, b as i64);
                let red = |x: i64| x.rem_euclid(n) as u32;
                (red(s), red(t), red(-(b as i64 / g)), red(a as i64 / g))
            }
        }
    }

    /// Determinant-inverse of a [`Ring::bezout`] matrix.
    pub fn bezout_det_inv(&self, m: (RingElem, RingElem, RingElem, RingElem)) -> RingElem {
        let (s, t, u, v) = m;
        let det = self.sub(self.mul(s, v), self.mul(t, u));
        self.inv(det).expect("bezout matrix is invertible")
    }

    /// Generator of the annihilator ideal of `a`.
    pub fn ann(&self, a: RingElem) -> RingElem {
        match &self.field {
            Some(_) => u32::from(a == 0),
            None => {
                let n = self.size as u64;
                ((n / gcd(a as u64, n)) % n) as u32
            }
        }
    }

    /// `|a k|`.
    pub fn ideal_size(&self, a: RingElem) -> u32 {
        match &self.field {
            Some(_) => {
                if a == 0 {
                    1
                } else {
                    self.size
                }
            }
            None => (self.size as u64 / gcd(a as u64, self.size as u64)) as u32,
        }
    }

    /// `|k / a k|`.
    pub fn quot_size(&self, a: RingElem) -> u32 {
        self.size / self.ideal_size(a)
    }

    /// Whether `order` is an admissible order of a cyclic basis element.
    pub fn valid_order(&self, order: u32) -> bool {
        match &self.field {
            Some(_) => order == self.size,
            None => order >= 1 && self.size.is_multiple_of(order),
        }
    }

    /// Scalar `f` such that a basis element of additive order `order`
    /// is represented by `f` times a standard unit vector of `k^r`.
    pub fn embed_factor(&self, order: u32) -> RingElem {
        match &self.field {
            Some(_) => 1,
            None => (self.size / order) % self.size,
        }
    }

    /// The scalar `order` (the additive order of a basis element viewed as
    /// an integer multiple), used in torsion checks.
    pub fn order_scalar(&self, order: u32) -> RingElem {
        match &self.field {
            Some(_) => 0,
            None => order % self.size,
        }
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = RingElem> {
        0..self.size
    }

    pub fn format_elem(&self, a: RingElem) -> String {
        match &self.field {
            None => a.to_string(),
            Some(t) => {
                let mut c = Vec::with_capacity(t.degree);
                let mut x = a;
                for _ in 0..t.degree {
                    c.push(x % t.p);
                    x /= t.p;
                }
                format_poly_coeffs(&c)
            }
        }
    }

    /// Parses an element literal: an integer (reduced into `k`), or for
    /// field extensions a `+`-separated sum of terms `c`, `u`, `c*u^k`,
    /// `cu^k`, `u^k`.
    pub fn parse_elem(&self, s: &str) -> Option<RingElem> {
        let s = s.trim();
        if let Ok(v) = s.parse::<i64>() {
            return Some(self.from_int(v));
        }
        let t = self.field.as_ref()?;
        let mut acc = 0;
        for part in s.split('+') {
            let part = part.trim();
            if part.is_empty() {
                return None;
            }
            let (coef, mono) = match part.find('u') {
                None => (part.parse::<i64>().ok()?, 0u32),
                Some(pos) => {
                    let c = part[..pos].trim().trim_end_matches('*').trim();
                    let coef = if c.is_empty() { 1 } else { c.parse::<i64>().ok()? };
                    let rest = part[pos + 1..].trim();
                    let exp = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')?.trim().parse::<u32>().ok()?
                    };
                    (coef, exp)
                }
            };
            let mut m = 1;
            let u = if t.degree == 1 { self.reduce_u() } else { t.p };
            for _ in 0..mono {
                m = self.mul(m, u);
            }
            acc = self.add(acc, self.mul(self.from_int(coef), m));
        }
        Some(acc)
    }

    fn reduce_u(&self) -> RingElem {
        // degree-one extension: u is the root of u + c0, i.e. -c0
        let RingSpec::FieldExt { minpoly, .. } = &self.spec else { unreachable!() };
        self.neg(minpoly[0])
    }
}

impl FieldTables {
    fn build(p: u32, minpoly: &[u32], q: u32) -> Self {
        let e = minpoly.len() - 1;
        let decode = |mut x: u32| {
            let mut c = vec![0u32; e];
            for ci in c.iter_mut() {
                *ci = x % p;
                x /= p;
            }
            c
        };
        let encode = |c: &[u32]| c.iter().rev().fold(0u32, |acc, &d| acc * p + d);
        let qs = q as usize;
        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        let mut neg = vec![0; qs];
        let mut inv = vec![0; qs];
        for a in 0..q {
            let ca = decode(a);
            neg[a as usize] = encode(&ca.iter().map(|&x| (p - x) % p).collect::<Vec<_>>());
            for b in 0..q {
                let cb = decode(b);
                let s: Vec<u32> = ca.iter().zip(&cb).map(|(&x, &y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = encode(&s);
                let mut prod = vec![0u32; 2 * e];
                for i in 0..e {
                    for j in 0..e {
                        prod[i + j] = ((prod[i + j] as u64 + ca[i] as u64 * cb[j] as u64) % p as u64) as u32;
                    }
                }
                let mut r = poly_rem(prod, minpoly, p);
                r.resize(e, 0);
                mul[(a * q + b) as usize] = encode(&r);
            }
        }
        for a in 1..q {
            for b in 1..q {
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b;
                    break;
                }
            }
        }
        FieldTables { p, degree: e, add, mul, neg, inv }
    }
}
