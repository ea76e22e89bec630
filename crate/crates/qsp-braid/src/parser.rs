//! Text grammar for U_q and coideal expressions.
//!
//! ```text
//! sum     := prod (('+' | '-') prod)*
//! prod    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' '-'? INT)?
//! primary := INT | '(' sum ')' | scalar | atom | element | map '(' sum ')'
//!          | 'qc' '(' sum ',' sum ',' sum ')'
//! scalar  := 'q' | 'u' | 'zeta' | 't'INT | 'eta'INT | 's[' idx ']' | 'c[' idx ']' | 'C'
//! atom    := 'E[' idx ']' | 'F[' idx ']' | 'B[' idx ']' | 'K[' weight ']'
//! element := 'L[' idx ']' | 'Z[' idx ']' | 'Gamma[' idx ']' | 'KX'
//!          | 'EX[' ('+'|'-') ']' | 'FX[' ('+'|'-') ']' | 'Omega[' ('+'|'-') ']'
//!          | 'S' | 'St' | 'Delta' | 'Deltat' | 'Tcal' | 'Lambda'
//! map     := 'ct[' idx ']' | 'ctinv[' idx ']' | 'phi' | 'TwX' | 'TwXinv'
//!          | 'T[' idx ']' | 'Tinv[' idx ']' | 'T[w:' idx (',' idx)* ']'
//! idx     := INT | ('r' | 'tr') (('+' | '-') INT)?
//! weight  := wterm (('+' | '-') wterm)*
//! wterm   := (INT '*')? ('(' INT (',' INT)* ')' | 'w[' idx ']' | 'a[' idx ']' | 'wp[' idx ']')
//! ```
//!
//! `*` and `/` bind tighter than `+`/`-`, `^` tightest.  `s[i]` is the
//! parameter with `c_i = s[i]^2`; `q` is `u^2`.  Division is only allowed by
//! scalars.  Maps are applied while parsing, so the result is an ordinary
//! [`Expr`]; subexpressions that are entirely scalar fold to one field
//! element, which makes `render` and `parse` inverse on rendered trees.
//!
//! Elements and maps that depend on the Satake datum or the parameter
//! family need a [`Scope`].

use thiserror::Error;

use crate::braidaction::{MapError, MapKind, MapSet};
use crate::coeffield::{eta_sym, symbol_from_name, t_sym, FieldElem, MAX_NODE, U, ZETA};
use crate::expr::{Atom, Expr, Node};
use crate::lusztig::{t_word_expr, BraidWord};
use crate::qsp::{Params, QspError};
use crate::rootdata::{alpha, varpi, SatakeDatum, Weight};

/// A parse failure, with the byte offset where it was detected.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("at position {pos}: {kind}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("index {index} out of range for {what} (n = {n})")]
    IndexRange { index: i64, what: String, n: usize },
    #[error("`{0}` needs an active Satake datum")]
    NeedsDatum(String),
    #[error("{0}")]
    Qsp(#[from] QspError),
    #[error("{0}")]
    Map(#[from] MapError),
}

/// What the parser resolves names against.
pub struct Scope<'a> {
    n: Option<usize>,
    maps: Option<&'a MapSet>,
}

impl<'a> Scope<'a> {
    /// No rank: only fully explicit scalars, `E/F/B/K` atoms with integer
    /// indices and weight vectors are available.
    pub fn free() -> Scope<'static> {
        Scope { n: None, maps: None }
    }

    /// U_q(sl_{n+1}) without a coideal.
    pub fn rank(n: usize) -> Scope<'static> {
        Scope { n: Some(n), maps: None }
    }

    /// A Satake datum with a parameter family (through its map set).
    pub fn with_maps(maps: &'a MapSet) -> Scope<'a> {
        Scope {
            n: Some(maps.params.datum.n),
            maps: Some(maps),
        }
    }

    fn datum(&self) -> Option<SatakeDatum> {
        self.maps.map(|m| m.params.datum)
    }

    fn params(&self) -> Option<&Params> {
        self.maps.map(|m| &m.params)
    }
}

/// Parse `src` in the given scope.
pub fn parse(src: &str, scope: &Scope) -> Result<Expr, ParseError> {
    let tokens = lex(src)?;
    let mut p = Parser { toks: tokens, at: 0, scope, end: src.len() };
    let e = p.sum()?;
    if p.at < p.toks.len() {
        return Err(p.err_here(ParseErrorKind::Syntax(format!("unexpected `{}`", p.toks[p.at].tok))));
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Sym(char),
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Int(k) => write!(f, "{k}"),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Sym(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c.is_ascii_digit() {
            let mut end = pos;
            while let Some(&(p, d)) = it.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = p + d.len_utf8();
                it.next();
            }
            let k = src[pos..end].parse::<i64>().map_err(|_| ParseError {
                pos,
                kind: ParseErrorKind::Syntax("integer literal too large".into()),
            })?;
            out.push(Token { tok: Tok::Int(k), pos });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut end = pos;
            while let Some(&(p, d)) = it.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                end = p + d.len_utf8();
                it.next();
            }
            out.push(Token { tok: Tok::Ident(src[pos..end].to_string()), pos });
        } else if "()[],+-*/^:".contains(c) {
            out.push(Token { tok: Tok::Sym(c), pos });
            it.next();
        } else {
            return Err(ParseError {
                pos,
                kind: ParseErrorKind::Syntax(format!("unexpected character `{c}`")),
            });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser<'s, 'a> {
    toks: Vec<Token>,
    at: usize,
    scope: &'s Scope<'a>,
    end: usize,
}

fn syntax(msg: impl Into<String>) -> ParseErrorKind {
    ParseErrorKind::Syntax(msg.into())
}

impl Parser<'_, '_> {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.pos).unwrap_or(self.end)
    }

    fn err_here(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { pos: self.pos(), kind }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.tok)
    }

    fn peek_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek_sym(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            let found = self.peek().map(|t| format!("`{t}`")).unwrap_or_else(|| "end of input".into());
            Err(self.err_here(syntax(format!("expected `{c}`, found {found}"))))
        }
    }

    fn expect_int(&mut self) -> Result<i64, ParseError> {
        match self.peek() {
            Some(Tok::Int(k)) => {
                let k = *k;
                self.at += 1;
                Ok(k)
            }
            _ => Err(self.err_here(syntax("expected an integer"))),
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut items = vec![self.prod()?];
        loop {
            if self.eat_sym('+') {
                items.push(self.prod()?);
            } else if self.eat_sym('-') {
                items.push(negate(&self.prod()?));
            } else {
                break;
            }
        }
        if items.len() == 1 {
            return Ok(items.pop().unwrap());
        }
        if let Some(cs) = all_scalars(&items) {
            return Ok(Expr::scalar(cs.iter().fold(FieldElem::zero(), |a, c| a.add(c))));
        }
        Ok(Expr::raw(Node::Sum(items)))
    }

    fn prod(&mut self) -> Result<Expr, ParseError> {
        let mut items = vec![self.unary()?];
        loop {
            if self.eat_sym('*') {
                items.push(self.unary()?);
            } else if self.peek_sym('/') {
                let pos = self.pos();
                self.at += 1;
                let d = self.unary()?;
                let inv = d
                    .as_scalar()
                    .ok_or(ParseError { pos, kind: syntax("division is only defined by scalars") })?
                    .inv()
                    .map_err(|_| ParseError { pos, kind: syntax("division by zero") })?;
                items.push(Expr::scalar(inv));
            } else {
                break;
            }
        }
        if items.len() == 1 {
            return Ok(items.pop().unwrap());
        }
        if let Some(cs) = all_scalars(&items) {
            return Ok(Expr::scalar(cs.iter().fold(FieldElem::one(), |a, c| a.mul(c))));
        }
        if items.len() == 2 {
            if let Some(c) = items[0].as_scalar() {
                return Ok(Expr::raw(Node::Scale(c.clone(), items[1].clone())));
            }
        }
        Ok(Expr::raw(Node::Prod(items)))
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat_sym('-') {
            let x = self.unary()?;
            return Ok(negate(&x));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if !self.peek_sym('^') {
            return Ok(base);
        }
        let pos = self.pos();
        self.at += 1;
        let neg = self.eat_sym('-');
        let k = self.expect_int()?;
        let k = if neg { -k } else { k };
        let k32 = i32::try_from(k).map_err(|_| ParseError { pos, kind: syntax("exponent too large") })?;
        if let Some(c) = base.as_scalar() {
            let v = c.pow(k32).map_err(|_| ParseError { pos, kind: syntax("zero raised to a negative power") })?;
            return Ok(Expr::scalar(v));
        }
        if let Node::Atom(Atom::K(mu)) = base.node() {
            return Ok(Expr::k(mu.scale(k32)));
        }
        if k < 0 {
            let inv = base
                .torus_inverse()
                .ok_or(ParseError { pos, kind: syntax("negative powers are only defined for torus elements") })?;
            return Ok(Expr::pow(&inv, (-k32) as u32));
        }
        Ok(Expr::raw(Node::Pow(base, k32 as u32)))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        let tok = self.peek().cloned().ok_or_else(|| self.err_here(syntax("unexpected end of input")))?;
        match tok {
            Tok::Int(k) => {
                self.at += 1;
                Ok(Expr::int(k))
            }
            Tok::Sym('(') => {
                self.at += 1;
                let e = self.sum()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.at += 1;
                self.named(&name, pos)
            }
            Tok::Sym(c) => Err(ParseError { pos, kind: syntax(format!("unexpected `{c}`")) }),
        }
    }

    fn named(&mut self, name: &str, pos: usize) -> Result<Expr, ParseError> {
        let at = |kind: ParseErrorKind| ParseError { pos, kind };
        match name {
            "q" => return Ok(Expr::scalar(FieldElem::q())),
            "s" => {
                let i = self.bracket_index("s")?;
                return Ok(Expr::scalar(FieldElem::sym(t_sym(i))));
            }
            "c" => {
                let i = self.bracket_index("c")?;
                let c = match self.scope.params() {
                    Some(p) => p.c(i),
                    None => FieldElem::sym(t_sym(i)).pow(2).expect("nonnegative power"),
                };
                return Ok(Expr::scalar(c));
            }
            "C" => {
                let p = self.scope.params().ok_or_else(|| at(ParseErrorKind::NeedsDatum("C".into())))?;
                return Ok(Expr::scalar(p.big_c()));
            }
            "qc" => {
                self.expect_sym('(')?;
                let a = self.sum()?;
                self.expect_sym(',')?;
                let b = self.sum()?;
                self.expect_sym(',')?;
                let cpos = self.pos();
                let c = self.sum()?;
                self.expect_sym(')')?;
                let c = c
                    .as_scalar()
                    .cloned()
                    .ok_or(ParseError { pos: cpos, kind: syntax("the third argument of qc must be a scalar") })?;
                return Ok(Expr::qc(&a, &b, c));
            }
            "E" | "F" | "B" => {
                let i = self.bracket_index(name)?;
                return Ok(Expr::atom(match name {
                    "E" => Atom::E(i),
                    "F" => Atom::F(i),
                    _ => Atom::B(i),
                }));
            }
            "K" => {
                self.expect_sym('[')?;
                let mu = self.weight()?;
                self.expect_sym(']')?;
                return Ok(Expr::k(mu));
            }
            _ => {}
        }
        if let Some(s) = scalar_symbol(name) {
            return Ok(Expr::scalar(FieldElem::sym(s)));
        }
        if let Some(e) = self.element(name, pos)? {
            return Ok(e);
        }
        if let Some(e) = self.map_application(name, pos)? {
            return Ok(e);
        }
        Err(at(ParseErrorKind::UnknownAtom(name.to_string())))
    }

    /// Named elements of the coideal layer.
    fn element(&mut self, name: &str, pos: usize) -> Result<Option<Expr>, ParseError> {
        let needs = |what: &str| ParseError { pos, kind: ParseErrorKind::NeedsDatum(what.to_string()) };
        let known = ["L", "Z", "Gamma", "KX", "EX", "FX", "Omega", "S", "St", "Delta", "Deltat", "Tcal", "Lambda"];
        if !known.contains(&name) {
            return Ok(None);
        }
        let p = self.scope.params().ok_or_else(|| needs(name))?;
        let qe = |r: Result<Expr, QspError>| r.map_err(|e| ParseError { pos, kind: e.into() });
        let e = match name {
            "L" => {
                let i = self.bracket_index(name)?;
                qe(p.l(i))?
            }
            "Z" => {
                let i = self.bracket_index(name)?;
                qe(p.z(i))?
            }
            "Gamma" => {
                let i = self.bracket_index(name)?;
                qe(p.gamma(i))?
            }
            "KX" => p.kx(1),
            "EX" => {
                let plus = self.bracket_sign()?;
                p.ex(plus)
            }
            "FX" => {
                let plus = self.bracket_sign()?;
                p.fx(plus)
            }
            "Omega" => {
                let plus = self.bracket_sign()?;
                qe(p.omega(plus))?
            }
            "S" => qe(p.s())?,
            "St" => qe(p.st())?,
            "Delta" => qe(p.delta())?,
            "Deltat" => qe(p.deltat())?,
            "Tcal" => qe(p.t_big())?,
            _ => qe(p.lambda())?,
        };
        Ok(Some(e))
    }

    /// `ct[i](x)`, `phi(x)`, `T[j](x)`, … applied on the spot.
    fn map_application(&mut self, name: &str, pos: usize) -> Result<Option<Expr>, ParseError> {
        let kinds: Vec<MapKind>;
        let mut free_word: Option<BraidWord> = None;
        match name {
            "ct" | "ctinv" => {
                let i = self.bracket_index(name)?;
                kinds = vec![if name == "ct" { MapKind::Ct(i) } else { MapKind::CtInv(i) }];
            }
            "phi" => kinds = vec![MapKind::Phi],
            "TwX" | "TwXinv" => {
                kinds = vec![if name == "TwX" { MapKind::TwX } else { MapKind::TwXInv }];
                if let Some(d) = self.scope.datum() {
                    let w = BraidWord::positive(&d.wx_word());
                    free_word = Some(if name == "TwX" { w } else { w.inverse() });
                }
            }
            "T" | "Tinv" => {
                self.expect_sym('[')?;
                let word = if matches!(self.peek(), Some(Tok::Ident(w)) if w == "w")
                    && self.toks.get(self.at + 1).map(|t| &t.tok) == Some(&Tok::Sym(':'))
                {
                    self.at += 2;
                    let mut v = vec![self.index("T")?];
                    while self.eat_sym(',') {
                        v.push(self.index("T")?);
                    }
                    v
                } else {
                    vec![self.index(name)?]
                };
                self.expect_sym(']')?;
                let w = BraidWord::positive(&word);
                let w = if name == "T" { w } else { w.inverse() };
                kinds = w
                    .letters
                    .iter()
                    .map(|l| if l.inverse { MapKind::TInv(l.node) } else { MapKind::T(l.node) })
                    .collect();
                free_word = Some(w);
            }
            _ => return Ok(None),
        }
        self.expect_sym('(')?;
        let arg = self.sum()?;
        self.expect_sym(')')?;
        let has_b = arg.any_atom(&|a| matches!(a, Atom::B(_)));
        if !has_b {
            if let Some(w) = free_word {
                let n = self.scope.n.ok_or(ParseError { pos, kind: ParseErrorKind::NeedsDatum(name.into()) })?;
                return Ok(Some(t_word_expr(n, &w, &arg)));
            }
        }
        let maps = self.scope.maps.ok_or(ParseError { pos, kind: ParseErrorKind::NeedsDatum(name.into()) })?;
        maps.apply(&kinds, &arg).map(Some).map_err(|e| ParseError { pos, kind: e.into() })
    }

    fn bracket_index(&mut self, what: &str) -> Result<usize, ParseError> {
        self.expect_sym('[')?;
        let i = self.index(what)?;
        self.expect_sym(']')?;
        Ok(i)
    }

    fn bracket_sign(&mut self) -> Result<bool, ParseError> {
        self.expect_sym('[')?;
        let plus = if self.eat_sym('+') {
            true
        } else if self.eat_sym('-') {
            false
        } else {
            return Err(self.err_here(syntax("expected `+` or `-`")));
        };
        self.expect_sym(']')?;
        Ok(plus)
    }

    /// A node index: an integer or `r`/`tr` with an optional offset.
    fn index(&mut self, what: &str) -> Result<usize, ParseError> {
        let pos = self.pos();
        let value: i64 = match self.peek().cloned() {
            Some(Tok::Int(k)) => {
                self.at += 1;
                k
            }
            Some(Tok::Ident(s)) if s == "r" || s == "tr" => {
                self.at += 1;
                let d = self
                    .scope
                    .datum()
                    .ok_or(ParseError { pos, kind: ParseErrorKind::NeedsDatum(s.clone()) })?;
                let base = if s == "r" { d.r } else { d.tr() } as i64;
                if self.eat_sym('+') {
                    base + self.expect_int()?
                } else if self.eat_sym('-') {
                    base - self.expect_int()?
                } else {
                    base
                }
            }
            _ => return Err(self.err_here(syntax("expected a node index"))),
        };
        let limit = self.scope.n.unwrap_or(MAX_NODE);
        if value < 1 || value as usize > limit {
            return Err(ParseError {
                pos,
                kind: ParseErrorKind::IndexRange { index: value, what: what.to_string(), n: limit },
            });
        }
        Ok(value as usize)
    }

    fn weight(&mut self) -> Result<Weight, ParseError> {
        let mut acc = self.weight_term()?;
        loop {
            if self.eat_sym('+') {
                let t = self.weight_term()?;
                acc = self.add_weights(&acc, &t)?;
            } else if self.eat_sym('-') {
                let t = self.weight_term()?;
                acc = self.add_weights(&acc, &t.neg())?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn add_weights(&self, a: &Weight, b: &Weight) -> Result<Weight, ParseError> {
        if a.rank() != b.rank() {
            return Err(self.err_here(syntax("weights of different rank")));
        }
        Ok(a.add(b))
    }

    fn weight_term(&mut self) -> Result<Weight, ParseError> {
        let sign = if self.eat_sym('-') { -1 } else { 1 };
        let mut k = 1i32;
        if let Some(Tok::Int(m)) = self.peek().cloned() {
            self.at += 1;
            self.expect_sym('*')?;
            k = i32::try_from(m).map_err(|_| self.err_here(syntax("weight coefficient too large")))?;
        }
        let pos = self.pos();
        let w = if self.eat_sym('(') {
            let mut v = Vec::new();
            loop {
                let neg = self.eat_sym('-');
                let c = self.expect_int()?;
                let c = i32::try_from(if neg { -c } else { c }).map_err(|_| self.err_here(syntax("weight coordinate too large")))?;
                v.push(c);
                if !self.eat_sym(',') {
                    break;
                }
            }
            self.expect_sym(')')?;
            if let Some(n) = self.scope.n {
                if v.len() != n {
                    return Err(ParseError { pos, kind: syntax(format!("weight vector has {} coordinates, expected {n}", v.len())) });
                }
            }
            Weight::from_coords(&v)
        } else {
            let name = match self.peek().cloned() {
                Some(Tok::Ident(s)) => s,
                _ => return Err(self.err_here(syntax("expected a weight"))),
            };
            self.at += 1;
            let i = self.bracket_index(&name)?;
            let n = self.scope.n.ok_or(ParseError { pos, kind: ParseErrorKind::NeedsDatum(name.clone()) })?;
            match name.as_str() {
                "w" => varpi(n, i),
                "a" => alpha(n, i),
                "wp" => {
                    let d = self.scope.datum().ok_or(ParseError { pos, kind: ParseErrorKind::NeedsDatum(name.clone()) })?;
                    d.varpi_prime(i)
                }
                _ => return Err(ParseError { pos, kind: ParseErrorKind::UnknownAtom(name) }),
            }
        };
        Ok(w.scale(sign * k))
    }
}

fn scalar_symbol(name: &str) -> Option<crate::coeffield::Symbol> {
    if name == "u" {
        return Some(U);
    }
    if name == "zeta" {
        return Some(ZETA);
    }
    let s = symbol_from_name(name)?;
    // Reject out-of-range node symbols rather than aliasing them.
    if let Some(rest) = name.strip_prefix("eta") {
        let i: usize = rest.parse().ok()?;
        return ((1..=MAX_NODE).contains(&i)).then(|| eta_sym(i));
    }
    Some(s)
}

fn negate(x: &Expr) -> Expr {
    match x.as_scalar() {
        Some(c) => Expr::scalar(c.neg()),
        None => x.neg(),
    }
}

fn all_scalars(items: &[Expr]) -> Option<Vec<FieldElem>> {
    items.iter().map(|x| x.as_scalar().cloned()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braidaction::MapSet;
    use crate::qsp::Params;
    use crate::uqcore::Pbw;

    #[test]
    fn precedence_and_folding() {
        let s = Scope::rank(3);
        let e = parse("E[1] + 2*E[2]^2", &s).unwrap();
        assert_eq!(e.render(), "(E[1] + (2)*E[2]^2)");
        let u = FieldElem::u();
        assert_eq!(parse("(u^2 - 1)/u", &s).unwrap().as_scalar().unwrap(), &u.sub(&u.inv().unwrap()));
        assert_eq!(parse("K[w[1]] ^ 2", &s).unwrap(), Expr::k(varpi(3, 1).scale(2)));
    }

    #[test]
    fn errors_have_positions() {
        let s = Scope::rank(3);
        let err = parse("E[1] + E[7]", &s).unwrap_err();
        assert_eq!(err.pos, 9);
        assert!(matches!(err.kind, ParseErrorKind::IndexRange { index: 7, .. }));
        assert!(matches!(parse("E[1] + Foo", &s).unwrap_err().kind, ParseErrorKind::UnknownAtom(_)));
        assert!(matches!(parse("E[1] * (", &s).unwrap_err().kind, ParseErrorKind::Syntax(_)));
        assert!(matches!(parse("B[r]", &s).unwrap_err().kind, ParseErrorKind::NeedsDatum(_)));
    }

    #[test]
    fn index_sugar_and_maps() {
        let d = SatakeDatum::new(5, 2).unwrap();
        let maps = MapSet::new(Params::generic(d));
        let s = Scope::with_maps(&maps);
        assert_eq!(parse("B[tr-1]", &s).unwrap(), Expr::b(3));
        assert_eq!(parse("B[tr+1]", &s).unwrap(), Expr::b(5));
        let src = "ct[r](B[r-1]) - C*(qc(B[r-1], qc(B[r], qc(FX[+], B[tr], q), q), q) + q*s[tr]^2*B[r-1]*L[r]*KX^-1)";
        let e = parse(src, &s).unwrap();
        assert!(maps.params.evaluate(&Pbw { n: 5 }, &e).unwrap().is_zero());
    }

    #[test]
    fn render_round_trip() {
        let d = SatakeDatum::new(5, 2).unwrap();
        let maps = MapSet::new(Params::generic(d));
        let s = Scope::with_maps(&maps);
        for src in ["qc(E[1], E[2], q^-1)", "ct[2](B[3]) + 3*K[(1,0,0,0,-1)]*F[3]", "(1 - q^2)/(t2*u)*S"] {
            let e = parse(src, &s).unwrap();
            let again = parse(&e.render(), &s).unwrap();
            assert_eq!(again, e, "{src}");
            assert_eq!(again.render(), e.render());
        }
    }
}
