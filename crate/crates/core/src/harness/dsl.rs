//! The `.alg` algebra-definition language.
//!
//! ```text
//! file       := ring signature item*
//! ring       := 'ring' ( 'Z' '/' INT | 'GF' '(' INT [',' minpoly] ')' )
//! signature  := 'signature' '{' [op (',' op)*] '}'      op := NAME ':' INT
//! item       := algebra | polynomial | expect
//! algebra    := 'algebra' NAME '{' 'basis' basis (';' entry)* [';'] '}'
//!             | 'algebra' NAME '=' construction
//! basis      := NAME [':' INT] (',' NAME [':' INT])*
//! entry      := OP ['(' NAME (',' NAME)* ')'] '=' lincomb
//! lincomb    := '0' | ['-'] [coef ['*']] NAME (('+' | '-') [coef ['*']] NAME)*
//! construction := 'product' '(' NAME (',' NAME)* ')'
//!             | 'quotient' '(' NAME (',' lincomb)* ')'
//!             | 'free' '(' NAME ',' INT ')'
//! polynomial := 'polynomial' NAME '=' poly
//! expect     := 'expect' PRED '(' arg (',' arg)* ')' '=' ('true' | 'false')
//! ```
//!
//! `# ...` comments run to end of line; `;` between top-level items is
//! optional. Unset table entries are zero.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algcore::{direct_product, quotient, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::idealth::ideal_closure;
use crate::modring::{Ring, RingElem, RingSpec};
use crate::sigterm::lexer::{Cursor, Tok};
use crate::sigterm::parse::parse_polynomial_from;
use crate::sigterm::{Polynomial, Signature};
use crate::variety::{relatively_free, DEFAULT_COORDINATE_CAP};

/// Predicates accepted by `expect`.
pub const PREDICATES: &[&str] =
    &["prime", "semiprime", "simple", "monolithic", "critical", "identity", "id_equal", "iso", "member"];

#[derive(Debug, Clone, PartialEq)]
pub enum DirectiveArg {
    Algebra(String),
    Polynomial(Polynomial),
}

/// `expect pred(args) = value`.
#[derive(Debug, Clone, PartialEq)]
pub struct Directive {
    pub predicate: String,
    pub args: Vec<DirectiveArg>,
    pub expected: bool,
    pub line: usize,
    pub text: String,
}

#[derive(Debug, Clone)]
pub struct AlgebraSpecFile {
    pub ring: Arc<Ring>,
    pub signature: Arc<Signature>,
    pub algebras: Vec<(String, FiniteAlgebra)>,
    pub polynomials: Vec<(String, Polynomial)>,
    pub directives: Vec<Directive>,
}

impl AlgebraSpecFile {
    pub fn algebra(&self, name: &str) -> Option<&FiniteAlgebra> {
        self.algebras.iter().find(|(n, _)| n == name).map(|(_, a)| a)
    }

    pub fn polynomial(&self, name: &str) -> Option<&Polynomial> {
        self.polynomials.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    /// The named algebra, or the only one when `name` is `None`.
    pub fn pick(&self, name: Option<&str>) -> Result<&FiniteAlgebra> {
        match name {
            Some(n) => self.algebra(n).ok_or_else(|| Error::InvalidArgument(format!("no algebra named {n}"))),
            None => match self.algebras.as_slice() {
                [(_, a)] => Ok(a),
                [] => Err(Error::InvalidArgument("the file defines no algebra".into())),
                _ => Ok(&self.algebras[0].1),
            },
        }
    }
}

pub fn parse_file(src: &str) -> Result<AlgebraSpecFile> {
    let mut cur = Cursor::new(src)?;
    let ring = parse_ring(&mut cur)?;
    cur.eat_sym(';');
    let signature = parse_signature(&mut cur)?;
    let mut file =
        AlgebraSpecFile { ring, signature, algebras: Vec::new(), polynomials: Vec::new(), directives: Vec::new() };
    while !cur.at_end() {
        if cur.eat_sym(';') {
            continue;
        }
        let (line, col) = cur.position();
        if cur.eat_keyword("algebra") {
            let name = cur.expect_ident()?;
            if file.algebra(&name).is_some() {
                return Err(Error::Parse { line, col, msg: format!("algebra {name} defined twice") });
            }
            let a = if cur.eat_sym('=') { parse_construction(&mut cur, &file)? } else { parse_table(&mut cur, &file)? };
            file.algebras.push((name.clone(), a.with_label(name)));
        } else if cur.eat_keyword("polynomial") {
            let name = cur.expect_ident()?;
            cur.expect_sym('=')?;
            let p = parse_polynomial_from(&mut cur, &file.signature, &file.ring)?;
            file.polynomials.push((name, p));
        } else if cur.eat_keyword("expect") {
            let d = parse_directive(&mut cur, &file, line)?;
            file.directives.push(d);
        } else {
            return cur.error("expected 'algebra', 'polynomial' or 'expect'");
        }
    }
    Ok(file)
}

fn parse_ring(cur: &mut Cursor) -> Result<Arc<Ring>> {
    cur.expect_keyword("ring")?;
    let (line, col) = cur.position();
    let spec = if cur.eat_keyword("Z") {
        cur.expect_sym('/')?;
        let n = cur.expect_int()?;
        RingSpec::Modular(u32::try_from(n).map_err(|_| Error::Parse { line, col, msg: "modulus too large".into() })?)
    } else if cur.eat_keyword("GF") {
        let inner = cur.take_parenthesized()?;
        let (p, poly) = match inner.split_once(',') {
            Some((p, poly)) => (p, Some(poly)),
            None => (inner, None),
        };
        let p: u32 = p.trim().parse().map_err(|_| Error::Parse { line, col, msg: "expected a prime".into() })?;
        match poly {
            None => RingSpec::Modular(p),
            Some(poly) => RingSpec::FieldExt {
                p,
                minpoly: parse_minpoly(poly, p)
                    .ok_or_else(|| Error::Parse { line, col, msg: format!("invalid polynomial {:?}", poly.trim()) })?,
            },
        }
    } else {
        return cur.error("expected 'Z/n' or 'GF(p, poly)'");
    };
    Ring::new(spec).map_err(|e| Error::Parse { line, col, msg: e.to_string() })
}

/// Coefficients (lowest degree first) of a sum of terms `c`, `u`, `c*u^k`.
fn parse_minpoly(s: &str, p: u32) -> Option<Vec<u32>> {
    let mut coeffs: BTreeMap<u32, u64> = BTreeMap::new();
    for part in s.split('+') {
        let part = part.trim();
        let (c, e) = match part.find('u') {
            None => (part.parse::<u64>().ok()?, 0),
            Some(pos) => {
                let c = part[..pos].trim().trim_end_matches('*').trim();
                let c = if c.is_empty() { 1 } else { c.parse().ok()? };
                let rest = part[pos + 1..].trim();
                let e = if rest.is_empty() { 1 } else { rest.strip_prefix('^')?.trim().parse().ok()? };
                (c, e)
            }
        };
        *coeffs.entry(e).or_default() += c;
    }
    let deg = *coeffs.keys().last()?;
    Some((0..=deg).map(|k| (coeffs.get(&k).copied().unwrap_or(0) % p as u64) as u32).collect())
}

fn parse_signature(cur: &mut Cursor) -> Result<Arc<Signature>> {
    cur.expect_keyword("signature")?;
    let (line, col) = cur.position();
    cur.expect_sym('{')?;
    let mut ops = Vec::new();
    while !cur.eat_sym('}') {
        let name = cur.expect_ident()?;
        cur.expect_sym(':')?;
        let arity = cur.expect_int()? as usize;
        ops.push((name, arity));
        if !cur.eat_sym(',') && !cur.eat_sym(';') && !cur.is_sym('}') {
            return cur.error("expected ',' or '}'");
        }
    }
    Signature::new(ops).map_err(|e| Error::Parse { line, col, msg: e.to_string() })
}

/// Basis names and orders, used to read linear combinations.
struct Basis<'a> {
    ring: &'a Ring,
    names: Vec<String>,
    orders: Vec<u32>,
}

impl Basis<'_> {
    fn index(&self, cur: &Cursor, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).map_or_else(|| cur.error(format!("unknown basis element {name}")), Ok)
    }

    fn vector(&self, k: usize, c: RingElem) -> Vec<RingElem> {
        let mut v = vec![0; self.names.len()];
        v[k] = self.ring.mul(c, self.ring.embed_factor(self.orders[k]));
        v
    }
}

fn parse_coefficient(cur: &mut Cursor, ring: &Ring) -> Result<Option<RingElem>> {
    match cur.peek() {
        Some(&Tok::Int(v)) => {
            cur.advance();
            cur.eat_sym('*');
            Ok(Some(ring.from_int((v % ring.size() as u64) as i64)))
        }
        Some(Tok::Sym('(')) => {
            let (line, col) = cur.position();
            let lit = cur.take_parenthesized()?;
            let c = ring
                .parse_elem(lit)
                .ok_or_else(|| Error::Parse { line, col, msg: format!("invalid coefficient {lit:?}") })?;
            cur.eat_sym('*');
            Ok(Some(c))
        }
        _ => Ok(None),
    }
}

fn parse_lincomb(cur: &mut Cursor, basis: &Basis) -> Result<Vec<RingElem>> {
    let ring = basis.ring;
    let mut v = vec![0; basis.names.len()];
    if cur.peek() == Some(&Tok::Int(0)) && !matches!(cur.peek_at(1), Some(Tok::Ident(_) | Tok::Sym('*'))) {
        cur.advance();
        return Ok(v);
    }
    let mut sign = if cur.eat_sym('-') { ring.neg(1) } else { 1 };
    loop {
        let c = parse_coefficient(cur, ring)?.unwrap_or(1);
        let name = cur.expect_ident()?;
        let k = basis.index(cur, &name)?;
        let t = basis.vector(k, ring.mul(sign, c));
        for (x, y) in v.iter_mut().zip(t) {
            *x = ring.add(*x, y);
        }
        if cur.eat_sym('+') {
            sign = 1;
        } else if cur.eat_sym('-') {
            sign = ring.neg(1);
        } else {
            return Ok(v);
        }
    }
}

fn parse_table(cur: &mut Cursor, file: &AlgebraSpecFile) -> Result<FiniteAlgebra> {
    let ring = &file.ring;
    let sig = &file.signature;
    let (line, col) = cur.position();
    cur.expect_sym('{')?;
    cur.expect_keyword("basis")?;
    let mut names = Vec::new();
    let mut orders = Vec::new();
    loop {
        let name = cur.expect_ident()?;
        if names.contains(&name) {
            return cur.error(format!("duplicate basis name {name}"));
        }
        let order = if cur.eat_sym(':') { cur.expect_int()? as u32 } else { ring.size() };
        if !ring.valid_order(order) || order < 2 {
            return cur.error(format!("order {order} is not admissible over {}", ring.spec()));
        }
        names.push(name);
        orders.push(order);
        if !cur.eat_sym(',') {
            break;
        }
    }
    let basis = Basis { ring, names: names.clone(), orders: orders.clone() };
    let mut b = FiniteAlgebra::builder(ring, sig, orders).names(names);
    loop {
        if cur.eat_sym('}') {
            break;
        }
        cur.expect_sym(';')?;
        if cur.eat_sym('}') {
            break;
        }
        let (eline, ecol) = cur.position();
        let op_name = cur.expect_ident()?;
        let op = sig
            .lookup(&op_name)
            .ok_or_else(|| Error::Parse { line: eline, col: ecol, msg: format!("unknown operation '{op_name}'") })?;
        let mut tuple = Vec::new();
        if cur.eat_sym('(') {
            loop {
                let n = cur.expect_ident()?;
                tuple.push(basis.index(cur, &n)?);
                if !cur.eat_sym(',') {
                    break;
                }
            }
            cur.expect_sym(')')?;
        }
        if tuple.len() != sig.arity(op) {
            return Err(Error::Parse {
                line: eline,
                col: ecol,
                msg: format!("'{op_name}' takes {} arguments, got {}", sig.arity(op), tuple.len()),
            });
        }
        cur.expect_sym('=')?;
        let v = parse_lincomb(cur, &basis)?;
        if b.is_set(op, &tuple) {
            return Err(Error::Parse { line: eline, col: ecol, msg: "entry set twice".into() });
        }
        b.set_vector(op, &tuple, v)?;
    }
    b.build().map_err(|e| Error::Parse { line, col, msg: e.to_string() })
}

fn algebra_ref<'f>(cur: &mut Cursor, file: &'f AlgebraSpecFile) -> Result<&'f FiniteAlgebra> {
    let (line, col) = cur.position();
    let name = cur.expect_ident()?;
    file.algebra(&name).ok_or(Error::Parse { line, col, msg: format!("unknown algebra {name}") })
}

fn parse_construction(cur: &mut Cursor, file: &AlgebraSpecFile) -> Result<FiniteAlgebra> {
    let (line, col) = cur.position();
    let wrap = |e: Error| Error::Parse { line, col, msg: e.to_string() };
    let kind = cur.expect_ident()?;
    cur.expect_sym('(')?;
    let out = match kind.as_str() {
        "product" => {
            let mut factors = vec![algebra_ref(cur, file)?];
            while cur.eat_sym(',') {
                factors.push(algebra_ref(cur, file)?);
            }
            direct_product(&factors).map_err(wrap)?.algebra
        }
        "quotient" => {
            let a = algebra_ref(cur, file)?;
            let basis = Basis { ring: a.ring(), names: a.names().to_vec(), orders: a.orders().to_vec() };
            let mut gens = Vec::new();
            while cur.eat_sym(',') {
                gens.push(parse_lincomb(cur, &basis)?);
            }
            let i = ideal_closure(a, &gens);
            quotient(a, &i).map_err(wrap)?.algebra
        }
        "free" => {
            let a = algebra_ref(cur, file)?;
            cur.expect_sym(',')?;
            let z = cur.expect_int()? as usize;
            relatively_free(std::slice::from_ref(a), z, DEFAULT_COORDINATE_CAP).map_err(wrap)?.carrier
        }
        _ => return Err(Error::Parse { line, col, msg: format!("unknown construction '{kind}'") }),
    };
    cur.expect_sym(')')?;
    Ok(out)
}

fn parse_directive(cur: &mut Cursor, file: &AlgebraSpecFile, line: usize) -> Result<Directive> {
    let start = cur.peek_token().map_or(cur.src.len(), |t| t.start);
    let (pline, pcol) = cur.position();
    let predicate = cur.expect_ident()?;
    if !PREDICATES.contains(&predicate.as_str()) {
        return Err(Error::Parse { line: pline, col: pcol, msg: format!("unknown predicate '{predicate}'") });
    }
    cur.expect_sym('(')?;
    let mut args = Vec::new();
    loop {
        let is_algebra = matches!(cur.peek(), Some(Tok::Ident(n)) if file.algebra(n).is_some())
            && matches!(cur.peek_at(1), Some(Tok::Sym(',' | ')')));
        let is_named_poly = matches!(cur.peek(), Some(Tok::Ident(n)) if file.polynomial(n).is_some())
            && matches!(cur.peek_at(1), Some(Tok::Sym(',' | ')')));
        if is_algebra {
            args.push(DirectiveArg::Algebra(cur.expect_ident()?));
        } else if is_named_poly {
            let n = cur.expect_ident()?;
            args.push(DirectiveArg::Polynomial(file.polynomial(&n).unwrap().clone()));
        } else if args.is_empty() {
            return cur.error("expected an algebra name");
        } else {
            args.push(DirectiveArg::Polynomial(parse_polynomial_from(cur, &file.signature, &file.ring)?));
        }
        if !cur.eat_sym(',') {
            break;
        }
    }
    cur.expect_sym(')')?;
    cur.expect_sym('=')?;
    let expected = if cur.eat_keyword("true") {
        true
    } else if cur.eat_keyword("false") {
        false
    } else {
        return cur.error("expected 'true' or 'false'");
    };
    let end = cur.peek_token().map_or(cur.src.len(), |t| t.start);
    let text = cur.src[start..end].trim().trim_end_matches(';').trim().to_string();
    let d = Directive { predicate, args, expected, line, text };
    check_arity(&d).map_err(|msg| Error::Parse { line: pline, col: pcol, msg })?;
    Ok(d)
}

fn check_arity(d: &Directive) -> std::result::Result<(), String> {
    let algs = d.args.iter().filter(|a| matches!(a, DirectiveArg::Algebra(_))).count();
    let polys = d.args.len() - algs;
    let ok = match d.predicate.as_str() {
        "identity" => algs == 1 && polys == 1,
        "id_equal" | "iso" => algs == 2 && polys == 0,
        "member" => algs >= 2 && polys == 0,
        _ => algs == 1 && polys == 0,
    };
    if ok {
        Ok(())
    } else {
        Err(format!("wrong arguments for '{}'", d.predicate))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algcore::testalg::{a1, a2, heisenberg};

    const EXAMPLE: &str = "ring Z/3
signature { mul : 2 }
algebra A1 { basis x, r, t ; mul(r,r) = x ; mul(r,t) = x ; mul(t,r) = -x }
algebra A2 { basis x, y, z ; mul(y,y) = x ; mul(z,z) = x ; mul(y,z) = x ; mul(z,y) = -x }
";

    #[test]
    fn parses_the_reference_example() {
        let f = parse_file(EXAMPLE).unwrap();
        assert_eq!(f.algebras.len(), 2);
        assert_eq!(f.algebra("A1").unwrap(), &a1());
        assert_eq!(f.algebra("A2").unwrap(), &a2());
        assert_eq!(f.algebra("A1").unwrap().names(), ["x", "r", "t"]);
    }

    #[test]
    fn constructions_and_directives() {
        let src = "ring Z/2
signature { br : 2 }
algebra L { basis x, y, z ; br(x,y) = z ; br(y,x) = z }
algebra LL = product(L, L)
algebra Lp = quotient(LL, z_1 + z_2)
polynomial anti = br(x1,x2) + br(x2,x1)
expect identity(L, anti) = true
expect identity(Lp, br(br(x1,x2),x3)) = true
expect id_equal(L, Lp) = true
";
        let f = parse_file(src).unwrap();
        assert_eq!(f.algebra("L").unwrap(), &heisenberg());
        assert_eq!(f.algebra("Lp").unwrap().size(), 32);
        assert_eq!(f.directives.len(), 3);
        assert_eq!(f.directives[0].text, "identity(L, anti) = true");
        assert!(matches!(f.directives[1].args[1], DirectiveArg::Polynomial(_)));
    }

    #[test]
    fn orders_field_extensions_and_comments() {
        let src = "ring GF(2, u^2+u+1) # F_4
signature { mul : 2, one : 0 }
algebra K { basis e ; mul(e,e) = e ; one = e }
algebra M { basis a, b ; mul(a,a) = (u)*b ; mul(a,b) = (u+1) b }
";
        let f = parse_file(src).unwrap();
        assert_eq!(f.ring.size(), 4);
        let m = f.algebra("M").unwrap();
        assert_eq!(m.size(), 16);
        let r = Ring::modular(4).unwrap();
        let t = parse_file("ring Z/4\nsignature { mul : 2 }\nalgebra T { basis x : 4, y : 2 ; mul(x,x) = 2x + y }").unwrap();
        let t = t.algebra("T").unwrap();
        assert_eq!(t.orders(), [4, 2]);
        assert_eq!(t.ring(), &r);
        assert_eq!(t.size(), 8);
    }

    #[test]
    fn reports_positions() {
        let cases = [
            ("ring Z/3\nsignature { mul : 2 }\nalgebra A { basis x ; mul(x,y) = x }", 3),
            ("ring Z/3\nsignature { mul : 2 }\nalgebra A { basis x ; mul(x) = x }", 3),
            ("ring Z/1\nsignature { mul : 2 }", 1),
            ("ring Z/3\nsignature { mul : 2 }\nalgebra A { basis x ; mul(x,x) = x ; mul(x,x) = 0 }", 3),
            ("ring Z/3\nsignature { mul : 2 }\nalgebra A { basis x }\nexpect prime(B) = true", 4),
            ("ring Z/3\nsignature { mul : 2 }\nalgebra A { basis x }\nexpect shiny(A) = true", 4),
        ];
        for (src, line) in cases {
            match parse_file(src) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{src}"),
                other => panic!("{src}: {other:?}"),
            }
        }
    }

    #[test]
    fn torsion_validated_on_load() {
        // x has order 2, so mul(x,x) may not have order 4
        let src = "ring Z/4\nsignature { mul : 2 }\nalgebra T { basis x : 2, y : 4 ; mul(x,x) = y }";
        assert!(matches!(parse_file(src), Err(Error::Parse { .. })));
    }
}
