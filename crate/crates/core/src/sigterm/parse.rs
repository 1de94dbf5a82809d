//! Polynomial text syntax.
//!
//! ```text
//! poly      := '0' | ['-'] term_expr (('+' | '-') term_expr)*
//! term_expr := [coefficient '*'] term
//! term      := var | opname '(' term (',' term)* ')' | opname
//! var       := 'x' positive-integer
//! coefficient := integer | '(' field literal ')'
//! ```

use std::sync::Arc;

use super::lexer::{Cursor, Tok};
use super::{is_var_name, Polynomial, Signature, Term};
use crate::error::{Error, Result};
use crate::modring::{Ring, RingElem};

pub fn parse_polynomial(text: &str, sig: &Signature, ring: &Arc<Ring>) -> Result<Polynomial> {
    let mut cur = Cursor::new(text)?;
    let p = parse_polynomial_from(&mut cur, sig, ring)?;
    if !cur.at_end() {
        return cur.error("unexpected trailing input");
    }
    Ok(p)
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term> {
    let mut cur = Cursor::new(text)?;
    let t = parse_term_from(&mut cur, sig)?;
    if !cur.at_end() {
        return cur.error("unexpected trailing input");
    }
    Ok(t)
}

/// Parses one polynomial and stops at the first token that cannot continue
/// it.
pub fn parse_polynomial_from(cur: &mut Cursor, sig: &Signature, ring: &Arc<Ring>) -> Result<Polynomial> {
    if cur.peek() == Some(&Tok::Int(0)) && !matches!(cur.peek_at(1), Some(Tok::Sym('*'))) {
        cur.advance();
        return Ok(Polynomial::zero(ring));
    }
    let mut poly = Polynomial::zero(ring);
    let mut sign = if cur.eat_sym('-') { ring.neg(1) } else { 1 };
    loop {
        let (coef, term) = parse_term_expr(cur, sig, ring)?;
        poly.add_term(term, ring.mul(sign, coef));
        if cur.eat_sym('+') {
            sign = 1;
        } else if cur.eat_sym('-') {
            sign = ring.neg(1);
        } else {
            return Ok(poly);
        }
    }
}

fn parse_term_expr(cur: &mut Cursor, sig: &Signature, ring: &Arc<Ring>) -> Result<(RingElem, Term)> {
    let coef = match cur.peek() {
        Some(&Tok::Int(v)) => {
            cur.advance();
            cur.expect_sym('*')?;
            ring.from_int((v % ring.size() as u64) as i64)
        }
        Some(Tok::Sym('(')) => {
            let (line, col) = cur.position();
            let lit = cur.take_parenthesized()?;
            let c = ring
                .parse_elem(lit)
                .ok_or_else(|| Error::Parse { line, col, msg: format!("invalid coefficient literal {lit:?}") })?;
            cur.expect_sym('*')?;
            c
        }
        _ => 1,
    };
    Ok((coef, parse_term_from(cur, sig)?))
}

pub fn parse_term_from(cur: &mut Cursor, sig: &Signature) -> Result<Term> {
    let (line, col) = cur.position();
    let name = match cur.peek() {
        Some(Tok::Ident(s)) => s.clone(),
        _ => return cur.error("expected a variable or operation name"),
    };
    cur.advance();
    if is_var_name(&name) {
        let i: u32 = name[1..]
            .parse()
            .map_err(|_| Error::Parse { line, col, msg: format!("variable index out of range in {name}") })?;
        return Ok(Term::Var(i));
    }
    let op = sig
        .lookup(&name)
        .ok_or_else(|| Error::Parse { line, col, msg: format!("unknown operation '{name}'") })?;
    let arity = sig.arity(op);
    let mut args = Vec::new();
    if cur.eat_sym('(') {
        loop {
            args.push(parse_term_from(cur, sig)?);
            if cur.eat_sym(',') {
                continue;
            }
            cur.expect_sym(')')?;
            break;
        }
    }
    if args.len() != arity {
        return Err(Error::Parse {
            line,
            col,
            msg: format!("arity mismatch: '{name}' takes {arity} argument(s), got {}", args.len()),
        });
    }
    Ok(Term::Op(op, args))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sig() -> Arc<Signature> {
        Signature::new([("mul", 2), ("u", 1), ("c", 0)]).unwrap()
    }

    #[test]
    fn commutator_over_z3() {
        let r = Ring::modular(3).unwrap();
        let s = Signature::binary("mul");
        let p = parse_polynomial("mul(x1,x2) - mul(x2,x1)", &s, &r).unwrap();
        let coefs: Vec<RingElem> = p.terms().map(|(_, c)| c).collect();
        assert_eq!(coefs, [1, 2]);
    }

    #[test]
    fn nested_degree() {
        let r = Ring::modular(3).unwrap();
        let s = Signature::binary("mul");
        let p = parse_polynomial("mul(x1,mul(x2,x3))", &s, &r).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.degree(), 3);
        assert!(p.is_multilinear());
    }

    #[test]
    fn arity_mismatch() {
        let r = Ring::modular(3).unwrap();
        let s = Signature::binary("mul");
        let err = parse_polynomial("mul(x1)", &s, &r).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, col: 1, ref msg } if msg.contains("arity")));
    }

    #[test]
    fn unknown_op_and_syntax() {
        let r = Ring::modular(3).unwrap();
        let s = Signature::binary("mul");
        assert!(matches!(
            parse_polynomial("mul(x1,x2) + br(x1,x2)", &s, &r),
            Err(Error::Parse { col: 14, .. })
        ));
        assert!(parse_polynomial("mul(x1,x2", &s, &r).is_err());
        assert!(parse_polynomial("", &s, &r).is_err());
        assert!(parse_polynomial("x1 x2", &s, &r).is_err());
    }

    #[test]
    fn constants_and_field_coefficients() {
        let f4 = Ring::field_ext(2, vec![1, 1, 1]).unwrap();
        let s = sig();
        let p = parse_polynomial("(u+1)*mul(x1,c) + u(x1)", &s, &f4).unwrap();
        assert_eq!(p.len(), 2);
        let printed = p.display(&s).to_string();
        assert_eq!(parse_polynomial(&printed, &s, &f4).unwrap(), p);
    }

    fn arb_term(depth: u32) -> BoxedStrategy<Term> {
        let leaf = prop_oneof![(1u32..4).prop_map(Term::Var), Just(Term::Op(0, vec![]))];
        leaf.prop_recursive(depth, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::Op(1, vec![a, b])),
                inner.prop_map(|a| Term::Op(2, vec![a])),
            ]
        })
        .boxed()
    }

    proptest! {
        #[test]
        fn round_trip(terms in proptest::collection::vec((arb_term(3), 0u32..6), 0..5)) {
            let s = sig();
            for ring in [Ring::modular(6).unwrap(), Ring::field_ext(3, vec![1, 0, 1]).unwrap()] {
                let p = Polynomial::from_terms(&ring, terms.iter().map(|(t, c)| (t.clone(), c % ring.size())));
                let printed = p.display(&s).to_string();
                prop_assert_eq!(parse_polynomial(&printed, &s, &ring).unwrap(), p);
            }
        }
    }
}
