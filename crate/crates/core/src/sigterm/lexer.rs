//! Tokenizer shared by the polynomial parser and the algebra DSL.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// Byte range in the source text.
    pub start: usize,
    pub end: usize,
}

const SYMBOLS: &str = "(){}[],;:=+-*^/";

/// Splits `src` into tokens. `#` starts a comment running to end of line.
/// Positions are 1-based and offset by `line0`/`col0` of the first byte, so
/// fragments of a larger file report positions in that file.
pub fn tokenize_at(src: &str, line0: usize, col0: usize) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut col) = (line0, col0);
    let mut it = src.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c == '\n' {
            it.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            it.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while let Some(&(_, d)) = it.peek() {
                if d == '\n' {
                    break;
                }
                it.next();
            }
            continue;
        }
        let (tline, tcol) = (line, col);
        let tok;
        let mut end = i + c.len_utf8();
        if c.is_ascii_digit() {
            let mut v: u64 = 0;
            while let Some(&(j, d)) = it.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                v = v
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(d as u64 - '0' as u64))
                    .ok_or_else(|| Error::Parse { line: tline, col: tcol, msg: "integer literal too large".into() })?;
                it.next();
                col += 1;
                end = j + 1;
            }
            tok = Tok::Int(v);
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&(j, d)) = it.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                s.push(d);
                it.next();
                col += 1;
                end = j + 1;
            }
            tok = Tok::Ident(s);
        } else if SYMBOLS.contains(c) {
            it.next();
            col += 1;
            tok = Tok::Sym(c);
        } else {
            return Err(Error::Parse { line, col, msg: format!("unexpected character {c:?}") });
        }
        out.push(Token { tok, line: tline, col: tcol, start: i, end });
    }
    Ok(out)
}

pub fn tokenize(src: &str) -> Result<Vec<Token>> {
    tokenize_at(src, 1, 1)
}

/// Cursor over a token list with position-carrying errors.
pub struct Cursor<'a> {
    pub src: &'a str,
    toks: Vec<Token>,
    pos: usize,
    eof_line: usize,
    eof_col: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Result<Self> {
        let toks = tokenize(src)?;
        let eof_line = src.lines().count().max(1);
        let eof_col = src.lines().last().map_or(0, |l| l.chars().count()) + 1;
        Ok(Cursor { src, toks, pos: 0, eof_line, eof_col })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    pub fn peek_token(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn advance(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn position(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => (self.eof_line, self.eof_col),
        }
    }

    pub fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.position();
        Err(Error::Parse { line, col, msg: msg.into() })
    }

    pub fn is_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if self.is_sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.error(format!("expected '{c}'"))
        }
    }

    pub fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.is_keyword(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            self.error(format!("expected '{kw}'"))
        }
    }

    pub fn expect_ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.error("expected identifier"),
        }
    }

    pub fn expect_int(&mut self) -> Result<u64> {
        match self.peek() {
            Some(&Tok::Int(v)) => {
                self.pos += 1;
                Ok(v)
            }
            _ => self.error("expected integer"),
        }
    }

    /// Source text strictly between the current `(` and its matching `)`;
    /// the cursor ends after the `)`.
    pub fn take_parenthesized(&mut self) -> Result<&'a str> {
        let open = match self.toks.get(self.pos) {
            Some(t) if t.tok == Tok::Sym('(') => t.end,
            _ => return self.error("expected '('"),
        };
        self.pos += 1;
        let mut depth = 1usize;
        while let Some(t) = self.toks.get(self.pos) {
            match t.tok {
                Tok::Sym('(') => depth += 1,
                Tok::Sym(')') => {
                    depth -= 1;
                    if depth == 0 {
                        let close = t.start;
                        self.pos += 1;
                        return Ok(&self.src[open..close]);
                    }
                }
                _ => {}
            }
            self.pos += 1;
        }
        self.error("unbalanced parentheses")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_comments() {
        let toks = tokenize("ring Z/3 # comment\n  mul(x1)").unwrap();
        let kinds: Vec<&Tok> = toks.iter().map(|t| &t.tok).collect();
        assert_eq!(kinds[0], &Tok::Ident("ring".into()));
        assert_eq!(kinds[2], &Tok::Sym('/'));
        assert_eq!(kinds[3], &Tok::Int(3));
        let mul = &toks[4];
        assert_eq!((mul.line, mul.col), (2, 3));
    }

    #[test]
    fn bad_character() {
        let err = tokenize("a $ b").unwrap_err();
        assert_eq!(err, Error::Parse { line: 1, col: 3, msg: "unexpected character '$'".into() });
    }
}
