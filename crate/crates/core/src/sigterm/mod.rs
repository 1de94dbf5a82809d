//! Signatures, the monomials `M_Ω(X)` and polynomials of the free
//! Ω-algebra over `k`.

pub mod lexer;
pub mod parse;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modring::{Ring, RingElem};

pub use parse::parse_polynomial;

/// Default nesting-depth cap for monomial enumeration.
pub const DEFAULT_DEPTH_CAP: usize = 6;
/// Default cap on the number of monomials produced by one enumeration.
pub const DEFAULT_MONOMIAL_CAP: usize = 200_000;

/// A finite set of operation symbols with arities. Operations are kept
/// sorted by name, so an operation's index is also its rank in the name
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    ops: Vec<(String, usize)>,
}

impl Signature {
    pub fn new<S: Into<String>>(ops: impl IntoIterator<Item = (S, usize)>) -> Result<Arc<Self>> {
        let mut ops: Vec<(String, usize)> = ops.into_iter().map(|(n, a)| (n.into(), a)).collect();
        ops.sort();
        for w in ops.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidArgument(format!("duplicate operation name {}", w[0].0)));
            }
        }
        for (name, _) in &ops {
            let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                && !is_var_name(name);
            if !valid {
                return Err(Error::InvalidArgument(format!("invalid operation name {name:?}")));
            }
        }
        Ok(Arc::new(Signature { ops }))
    }

    /// One binary operation called `name`.
    pub fn binary(name: &str) -> Arc<Self> {
        Signature::new([(name, 2)]).expect("valid name")
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn name(&self, op: usize) -> &str {
        &self.ops[op].0
    }

    pub fn arity(&self, op: usize) -> usize {
        self.ops[op].1
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.ops.binary_search_by(|(n, _)| n.as_str().cmp(name)).ok()
    }

    pub fn ops(&self) -> impl Iterator<Item = (usize, &str, usize)> {
        self.ops.iter().enumerate().map(|(i, (n, a))| (i, n.as_str(), *a))
    }

    /// True iff some operation has arity at least 2.
    pub fn has_higher_op(&self) -> bool {
        self.ops.iter().any(|&(_, a)| a >= 2)
    }

    pub fn max_arity(&self) -> usize {
        self.ops.iter().map(|&(_, a)| a).max().unwrap_or(0)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ops.iter().map(|(n, a)| format!("{n} : {a}")).collect();
        write!(f, "{{ {} }}", parts.join(", "))
    }
}

pub(crate) fn is_var_name(s: &str) -> bool {
    s.len() > 1 && s.starts_with('x') && s[1..].chars().all(|c| c.is_ascii_digit()) && !s[1..].starts_with('0')
}

/// A monomial: variables `x_i` (`i >= 1`) at the leaves, operation symbols
/// at internal nodes (0-ary symbols are leaves too).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(u32),
    Op(usize, Vec<Term>),
}

impl Term {
    pub fn var(i: u32) -> Term {
        Term::Var(i)
    }

    pub fn op(op: usize, args: Vec<Term>) -> Term {
        Term::Op(op, args)
    }

    /// Number of variable occurrences.
    pub fn degree(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Op(_, args) => args.iter().map(Term::degree).sum(),
        }
    }

    /// Nesting depth of operation symbols.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Op(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn variable_counts(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeMap<u32, usize>) {
        match self {
            Term::Var(i) => *out.entry(*i).or_default() += 1,
            Term::Op(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Each of `vars` occurs exactly once and no other variable occurs.
    pub fn is_multilinear_in(&self, vars: &BTreeSet<u32>) -> bool {
        let counts = self.variable_counts();
        counts.len() == vars.len() && counts.iter().all(|(v, &c)| c == 1 && vars.contains(v))
    }

    fn tokens(&self, out: &mut Vec<(u8, u32)>) {
        match self {
            Term::Var(i) => out.push((0, *i)),
            Term::Op(o, args) => {
                out.push((1, *o as u32));
                args.iter().for_each(|a| a.tokens(out));
            }
        }
    }

    pub fn substitute(&self, assignment: &BTreeMap<u32, Term>) -> Term {
        match self {
            Term::Var(i) => assignment.get(i).cloned().unwrap_or(Term::Var(*i)),
            Term::Op(o, args) => Term::Op(*o, args.iter().map(|a| a.substitute(assignment)).collect()),
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay { term: self, sig }
    }
}

/// Degree first, then the preorder token sequence (variables before
/// operation symbols, operation symbols by name).
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (mut a, mut b) = (Vec::new(), Vec::new());
            self.tokens(&mut a);
            other.tokens(&mut b);
            a.cmp(&b)
        })
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(i) => write!(f, "x{i}"),
            Term::Op(o, args) => {
                write!(f, "{}", self.sig.name(*o))?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (k, a) in args.iter().enumerate() {
                        if k > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{}", a.display(self.sig))?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// A `k`-linear combination of monomials with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: BTreeMap<Term, RingElem>,
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Polynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn monomial(ring: &Arc<Ring>, term: Term) -> Self {
        Self::from_terms(ring, [(term, 1)])
    }

    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Term, RingElem)>) -> Self {
        let mut p = Polynomial::zero(ring);
        for (t, c) in terms {
            p.add_term(t, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn add_term(&mut self, term: Term, coef: RingElem) {
        let ring = &self.ring;
        let c = ring.add(self.terms.get(&term).copied().unwrap_or(0), coef);
        if c == 0 {
            self.terms.remove(&term);
        } else {
            self.terms.insert(term, c);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, RingElem)> {
        self.terms.iter().map(|(t, &c)| (t, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        for (t, c) in other.terms() {
            p.add_term(t.clone(), c);
        }
        p
    }

    pub fn scale(&self, c: RingElem) -> Polynomial {
        Self::from_terms(&self.ring, self.terms().map(|(t, a)| (t.clone(), self.ring.mul(a, c))))
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(self.ring.neg(1)))
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        self.terms.keys().flat_map(|t| t.variable_counts().into_keys()).collect()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Term::degree).max().unwrap_or(0)
    }

    /// Every term is multilinear in the same set of variables.
    pub fn is_multilinear(&self) -> bool {
        let vars = self.variables();
        self.terms.keys().all(|t| t.is_multilinear_in(&vars))
    }

    /// Simultaneous substitution of terms for variables; variables missing
    /// from `assignment` are left in place.
    pub fn substitute(&self, assignment: &BTreeMap<u32, Term>) -> Polynomial {
        Self::from_terms(&self.ring, self.terms().map(|(t, c)| (t.substitute(assignment), c)))
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, sig }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    sig: &'a Signature,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let ring = &self.poly.ring;
        for (k, (t, c)) in self.poly.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if c != 1 {
                if ring.is_field_ext() {
                    write!(f, "({})*", ring.format_elem(c))?;
                } else {
                    write!(f, "{c}*")?;
                }
            }
            write!(f, "{}", t.display(self.sig))?;
        }
        Ok(())
    }
}

/// Result of a capped monomial enumeration.
#[derive(Debug, Clone)]
pub struct MonomialSet {
    pub terms: Vec<Term>,
    /// False when the nesting cap removed at least one monomial.
    pub complete: bool,
}

/// All monomials in which each of `x_1..x_m` occurs exactly once and no
/// other leaf occurs (0-ary symbols excluded), up to `depth_cap` nested
/// operation symbols; sorted in the term order.
pub fn enumerate_multilinear_monomials(
    sig: &Signature,
    m: u32,
    depth_cap: usize,
    size_cap: usize,
) -> Result<MonomialSet> {
    if m == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let mut memo = HashMap::new();
    let all: u64 = (1u64 << m) - 1;
    let (mut terms, complete) = gen_monomials(sig, all, depth_cap, size_cap, &mut memo)?;
    terms.sort();
    Ok(MonomialSet { terms, complete })
}

type Memo = HashMap<(u64, usize), (Vec<Term>, bool)>;

fn gen_monomials(sig: &Signature, vars: u64, depth: usize, cap: usize, memo: &mut Memo) -> Result<(Vec<Term>, bool)> {
    if let Some(hit) = memo.get(&(vars, depth)) {
        return Ok(hit.clone());
    }
    let n = vars.count_ones() as usize;
    let mut out = Vec::new();
    let mut complete = true;
    if n == 1 {
        out.push(Term::Var(vars.trailing_zeros() + 1));
    }
    for (op, _, arity) in sig.ops() {
        if arity == 0 || arity > n {
            continue;
        }
        if depth == 0 {
            complete = false;
            continue;
        }
        let members: Vec<u64> = (0..64).filter(|b| vars >> b & 1 == 1).map(|b| 1u64 << b).collect();
        // ordered partitions of the variable set into `arity` nonempty blocks
        let mut assign = vec![0usize; n];
        loop {
            let mut blocks = vec![0u64; arity];
            for (k, &blk) in assign.iter().enumerate() {
                blocks[blk] |= members[k];
            }
            if blocks.iter().all(|&b| b != 0) {
                let mut children: Vec<Vec<Term>> = Vec::with_capacity(arity);
                for &b in &blocks {
                    let (ts, c) = gen_monomials(sig, b, depth - 1, cap, memo)?;
                    complete &= c;
                    children.push(ts);
                }
                let mut combos: Vec<Vec<Term>> = vec![Vec::new()];
                for ch in &children {
                    let mut next = Vec::with_capacity(combos.len() * ch.len());
                    for prefix in &combos {
                        for t in ch {
                            let mut v = prefix.clone();
                            v.push(t.clone());
                            next.push(v);
                        }
                    }
                    combos = next;
                    if combos.len() > cap {
                        return Err(Error::cap("monomial enumeration", cap as u64));
                    }
                }
                out.extend(combos.into_iter().map(|args| Term::Op(op, args)));
                if out.len() > cap {
                    return Err(Error::cap("monomial enumeration", cap as u64));
                }
            }
            // next assignment in base `arity`
            let mut k = 0;
            while k < n {
                assign[k] += 1;
                if assign[k] < arity {
                    break;
                }
                assign[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    memo.insert((vars, depth), (out.clone(), complete));
    Ok((out, complete))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3() -> Arc<Ring> {
        Ring::modular(3).unwrap()
    }

    /// Independent count of labeled binary trees: leaf sets split into
    /// ordered nonempty pairs, by brute-force recursion on bitmasks.
    fn brute_binary_trees(mask: u32) -> u64 {
        if mask.count_ones() == 1 {
            return 1;
        }
        let mut total = 0;
        let mut sub = (mask - 1) & mask;
        while sub > 0 {
            total += brute_binary_trees(sub) * brute_binary_trees(mask & !sub);
            sub = (sub - 1) & mask;
        }
        total
    }

    #[test]
    fn binary_monomial_counts() {
        let sig = Signature::binary("mul");
        let expected = [1u64, 2, 12, 120];
        for m in 1..=4u32 {
            let set = enumerate_multilinear_monomials(&sig, m, DEFAULT_DEPTH_CAP, DEFAULT_MONOMIAL_CAP).unwrap();
            assert!(set.complete);
            assert_eq!(set.terms.len() as u64, brute_binary_trees((1 << m) - 1));
            assert_eq!(set.terms.len() as u64, expected[m as usize - 1]);
            let mut dedup = set.terms.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), set.terms.len());
            let vars: BTreeSet<u32> = (1..=m).collect();
            assert!(set.terms.iter().all(|t| t.is_multilinear_in(&vars)));
        }
    }

    #[test]
    fn degree_two_monomials() {
        let sig = Signature::binary("mul");
        let set = enumerate_multilinear_monomials(&sig, 2, 6, 1000).unwrap();
        let shown: Vec<String> = set.terms.iter().map(|t| t.display(&sig).to_string()).collect();
        assert_eq!(shown, ["mul(x1,x2)", "mul(x2,x1)"]);
    }

    #[test]
    fn unary_nesting_cap() {
        let sig = Signature::new([("mul", 2), ("u", 1)]).unwrap();
        let set = enumerate_multilinear_monomials(&sig, 1, 2, 1000).unwrap();
        let shown: Vec<String> = set.terms.iter().map(|t| t.display(&sig).to_string()).collect();
        assert_eq!(shown, ["x1", "u(x1)", "u(u(x1))"]);
        assert!(!set.complete);
    }

    #[test]
    fn size_cap_reported() {
        let sig = Signature::binary("mul");
        let err = enumerate_multilinear_monomials(&sig, 5, 6, 100).unwrap_err();
        assert!(err.is_cap());
    }

    #[test]
    fn substitution_examples() {
        let sig = Signature::binary("mul");
        let r = z3();
        let f = parse_polynomial("mul(x1,x2)", &sig, &r).unwrap();
        let swap = BTreeMap::from([(1, Term::Var(2)), (2, Term::Var(1))]);
        assert_eq!(f.substitute(&swap), parse_polynomial("mul(x2,x1)", &sig, &r).unwrap());

        let z = parse_polynomial("mul(x1,x2) - mul(x1,x2)", &sig, &r).unwrap();
        assert!(z.is_zero());
        assert!(z.substitute(&swap).is_zero());

        let sq = BTreeMap::from([(1, Term::Op(0, vec![Term::Var(1), Term::Var(1)]))]);
        assert_eq!(f.substitute(&sq), parse_polynomial("mul(mul(x1,x1),x2)", &sig, &r).unwrap());
    }

    #[test]
    fn substitution_composes() {
        let sig = Signature::binary("mul");
        let r = z3();
        let f = parse_polynomial("mul(x1,x2) + 2*mul(x2,x1)", &sig, &r).unwrap();
        let s1 = BTreeMap::from([(1, Term::Op(0, vec![Term::Var(2), Term::Var(3)]))]);
        let s2 = BTreeMap::from([(2, Term::Var(1)), (3, Term::Op(0, vec![Term::Var(1), Term::Var(1)]))]);
        let composed: BTreeMap<u32, Term> = [1u32, 2, 3]
            .into_iter()
            .map(|v| (v, Term::Var(v).substitute(&s1).substitute(&s2)))
            .collect();
        assert_eq!(f.substitute(&s1).substitute(&s2), f.substitute(&composed));
    }

    #[test]
    fn signature_flags() {
        let sig = Signature::new([("u", 1), ("c", 0)]).unwrap();
        assert!(!sig.has_higher_op());
        assert!(Signature::binary("mul").has_higher_op());
        assert!(Signature::new([("x1", 2)]).is_err());
        assert!(Signature::new([("m", 2), ("m", 1)]).is_err());
    }
}
