// SPDX-License-Identifier: Apache-2.0

//! Textual syntax for queries, regexes, patterns and spanner expressions.
//!
//! ```text
//! query   := "ans(" [var ("," var)*] ")" ":-" atom ("," atom)*
//! atom    := var "=" concat | var "in" "/" regex "/"
//! concat  := term ("." term)* | "''"
//! term    := var | "'" literal "'"
//! sercq   := "pi{" [var ("," var)*] "}" ("eq{" var "," var "}")*
//!            "(" formula ("join" formula)* ")"
//! ```
//!
//! Regexes use `#` for the empty language, `''` for ε, `|`, `*`, `+`,
//! parentheses, quoted or bare literals and optional `.` between factors.
//! A bare `S` stands for any single symbol of the alphabet. Inside a spanner
//! formula `x{γ}` binds the span variable `x`. `%` starts a line comment.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{
    Alphabet, FcCq, Item, Pattern, Regex, RegexFormula, RegularConstraint, SercqAst, Var,
    WordEquation,
};

/// Byte offsets into the parsed text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    /// A variable is bound below a union.
    NotSynchronized,
    /// A variable is bound twice, or below a star.
    NotFunctional,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{message} at bytes {}..{}", span.start, span.end)]
pub struct ParseError {
    pub kind: ErrorKind,
    pub message: String,
    pub span: SourceSpan,
}

type PResult<T> = Result<T, ParseError>;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    alphabet: &'a Alphabet,
    sercq: bool,
}

fn ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_'
}

fn ident_rest(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b'^'
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, alphabet: &'a Alphabet, sercq: bool) -> Parser<'a> {
        Parser { src, pos: 0, alphabet, sercq }
    }

    fn bytes(&self) -> &'a [u8] {
        self.src.as_bytes()
    }

    fn error_at(&self, kind: ErrorKind, message: impl Into<String>, start: usize, end: usize) -> ParseError {
        let len = self.src.len();
        let start = start.min(len);
        ParseError { kind, message: message.into(), span: SourceSpan { start, end: end.clamp(start, len) } }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let end = if self.pos < self.src.len() { self.pos + 1 } else { self.pos };
        self.error_at(ErrorKind::Syntax, message, self.pos, end)
    }

    fn skip_ws(&mut self) {
        let b = self.bytes();
        loop {
            while self.pos < b.len() && b[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos < b.len() && b[self.pos] == b'%' {
                while self.pos < b.len() && b[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes().get(self.pos).copied()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> PResult<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{tok}`")))
        }
    }

    /// End of the identifier starting at `p`, if one starts there.
    fn ident_end(&self, p: usize) -> Option<usize> {
        let b = self.bytes();
        if p >= b.len() || !ident_start(b[p]) {
            return None;
        }
        let mut e = p + 1;
        while e < b.len() && ident_rest(b[e]) {
            e += 1;
        }
        Some(e)
    }

    fn ident(&mut self) -> PResult<(Var, usize)> {
        self.skip_ws();
        match self.ident_end(self.pos) {
            Some(e) => {
                let start = self.pos;
                self.pos = e;
                Ok((Var::new(&self.src[start..e]), start))
            }
            None => Err(self.error("expected a variable name")),
        }
    }

    /// True if the keyword `kw` starts at the cursor as a whole identifier.
    fn at_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        self.ident_end(self.pos).is_some_and(|e| &self.src[self.pos..e] == kw)
    }

    fn next_non_ws(&self, mut p: usize) -> Option<u8> {
        let b = self.bytes();
        while p < b.len() && b[p].is_ascii_whitespace() {
            p += 1;
        }
        b.get(p).copied()
    }

    fn symbol(&self, b: u8, at: usize) -> PResult<u8> {
        if self.alphabet.contains(b) {
            Ok(b)
        } else {
            Err(self.error_at(
                ErrorKind::Syntax,
                format!("symbol {:?} is not in the alphabet", b as char),
                at,
                at + 1,
            ))
        }
    }

    /// A quoted literal; the cursor sits on the opening quote.
    fn quoted(&mut self) -> PResult<Vec<u8>> {
        let open = self.pos;
        self.pos += 1;
        let b = self.bytes();
        let mut out = Vec::new();
        while self.pos < b.len() && b[self.pos] != b'\'' {
            out.push(self.symbol(b[self.pos], self.pos)?);
            self.pos += 1;
        }
        if self.pos >= b.len() {
            return Err(self.error_at(ErrorKind::Syntax, "unterminated literal", open, b.len()));
        }
        self.pos += 1;
        Ok(out)
    }

    fn var_list(&mut self, close: &str) -> PResult<Vec<(Var, usize)>> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.ident()?);
            if self.eat(",") {
                continue;
            }
            self.expect(close)?;
            return Ok(out);
        }
    }

    fn finish(&mut self) -> PResult<()> {
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(())
    }

    fn query(&mut self) -> PResult<FcCq> {
        self.expect("ans")?;
        self.expect("(")?;
        let head = self.var_list(")")?;
        self.expect(":-")?;
        let mut q = FcCq::default();
        loop {
            self.atom(&mut q)?;
            if !self.eat(",") {
                break;
            }
        }
        self.finish()?;
        let body = q.vars();
        for &(h, at) in &head {
            let end = at + h.name().len();
            if h.is_universe() {
                return Err(self.error_at(ErrorKind::Syntax, "`u` cannot appear in the head", at, end));
            }
            if !body.contains(&h) {
                return Err(self.error_at(
                    ErrorKind::Syntax,
                    format!("head variable `{h}` does not occur in the body"),
                    at,
                    end,
                ));
            }
        }
        q.head = head.into_iter().map(|(v, _)| v).collect();
        Ok(q)
    }

    fn atom(&mut self, q: &mut FcCq) -> PResult<()> {
        let (lhs, _) = self.ident()?;
        if self.eat("=") {
            let rhs = self.concat()?;
            q.equations.push(WordEquation::new(lhs, rhs));
            return Ok(());
        }
        if self.at_keyword("in") {
            self.pos += 2;
            self.expect("/")?;
            let start = self.pos;
            let f = self.alt()?;
            self.expect("/")?;
            let regex = f.to_regex().ok_or_else(|| {
                self.error_at(ErrorKind::Syntax, "variable binding inside a constraint", start, self.pos)
            })?;
            q.constraints.push(RegularConstraint { var: lhs, regex });
            return Ok(());
        }
        Err(self.error("expected `=` or `in`"))
    }

    fn concat(&mut self) -> PResult<Pattern> {
        let mut items = Vec::new();
        loop {
            match self.peek() {
                Some(b'\'') => items.extend(self.quoted()?.into_iter().map(Item::Sym)),
                Some(b) if ident_start(b) => items.push(Item::Var(self.ident()?.0)),
                _ => return Err(self.error("expected a variable or a quoted literal")),
            }
            if !self.eat(".") {
                return Ok(Pattern(items));
            }
        }
    }

    fn alt(&mut self) -> PResult<RegexFormula> {
        let mut r = self.cat()?;
        while self.eat("|") {
            let rhs = self.cat()?;
            r = RegexFormula::Union(Box::new(r), Box::new(rhs));
        }
        Ok(r)
    }

    fn cat(&mut self) -> PResult<RegexFormula> {
        let mut acc: Option<RegexFormula> = None;
        loop {
            match self.peek() {
                None | Some(b'|' | b')' | b'/' | b'}') => break,
                Some(b'.') if acc.is_some() => {
                    self.pos += 1;
                    match self.peek() {
                        None | Some(b'|' | b')' | b'/' | b'}' | b'.') => {
                            return Err(self.error("expected an expression after `.`"))
                        }
                        _ => {}
                    }
                    continue;
                }
                _ => {}
            }
            if self.sercq && self.at_keyword("join") {
                let e = self.ident_end(self.pos).unwrap();
                if self.next_non_ws(e) != Some(b'{') {
                    break;
                }
            }
            let a = self.postfix()?;
            acc = Some(match acc {
                None => a,
                Some(prev) => RegexFormula::concat(prev, a),
            });
        }
        acc.ok_or_else(|| self.error("expected a regular expression"))
    }

    fn postfix(&mut self) -> PResult<RegexFormula> {
        let mut a = self.primary()?;
        loop {
            if self.eat("*") {
                a = RegexFormula::Star(Box::new(a));
            } else if self.eat("+") {
                a = RegexFormula::concat(a.clone(), RegexFormula::Star(Box::new(a)));
            } else {
                return Ok(a);
            }
        }
    }

    fn primary(&mut self) -> PResult<RegexFormula> {
        let c = match self.peek() {
            Some(c) => c,
            None => return Err(self.error("unexpected end of input")),
        };
        match c {
            b'#' => {
                self.pos += 1;
                Ok(RegexFormula::Empty)
            }
            b'(' => {
                self.pos += 1;
                let r = self.alt()?;
                self.expect(")")?;
                Ok(r)
            }
            b'\'' => {
                let w = self.quoted()?;
                Ok(RegexFormula::from_regex(&Regex::word(&w)))
            }
            _ => {
                if self.sercq {
                    if let Some(e) = self.ident_end(self.pos) {
                        if self.next_non_ws(e) == Some(b'{') {
                            let x = Var::new(&self.src[self.pos..e]);
                            self.pos = e;
                            self.expect("{")?;
                            let inner = self.alt()?;
                            self.expect("}")?;
                            return Ok(RegexFormula::bind(x, inner));
                        }
                    }
                }
                if c == b'S' {
                    self.pos += 1;
                    return Ok(RegexFormula::from_regex(&Regex::any(self.alphabet)));
                }
                if self.alphabet.contains(c) {
                    self.pos += 1;
                    return Ok(RegexFormula::Literal(c));
                }
                if c.is_ascii_graphic() && !crate::model::RESERVED.contains(&c) {
                    return Err(self.symbol(c, self.pos).unwrap_err());
                }
                Err(self.error(format!("unexpected {:?}", c as char)))
            }
        }
    }

    fn sercq(&mut self) -> PResult<SercqAst> {
        self.expect("pi")?;
        self.expect("{")?;
        let projection = self.var_list("}")?;
        let mut equalities = Vec::new();
        while self.at_keyword("eq") {
            self.pos += 2;
            self.expect("{")?;
            let (a, at) = self.ident()?;
            self.expect(",")?;
            let (b, bt) = self.ident()?;
            self.expect("}")?;
            equalities.push(((a, at), (b, bt)));
        }
        self.expect("(")?;
        let mut formulas = Vec::new();
        loop {
            self.skip_ws();
            let start = self.pos;
            let f = self.alt()?;
            check_formula(&f).map_err(|(kind, msg)| self.error_at(kind, msg, start, self.pos))?;
            formulas.push(f);
            if !self.at_keyword("join") {
                break;
            }
            self.pos += 4;
        }
        self.expect(")")?;
        self.finish()?;
        let ast = SercqAst {
            projection: projection.iter().map(|p| p.0).collect(),
            equalities: equalities.iter().map(|(a, b)| (a.0, b.0)).collect(),
            formulas,
        };
        let bound: HashSet<Var> = ast.svars().into_iter().collect();
        let mentioned = projection.iter().chain(equalities.iter().flat_map(|(a, b)| [a, b]));
        for &(v, at) in mentioned {
            if !bound.contains(&v) {
                return Err(self.error_at(
                    ErrorKind::Syntax,
                    format!("variable `{v}` is not bound by any formula"),
                    at,
                    at + v.name().len(),
                ));
            }
        }
        Ok(ast)
    }
}

pub(crate) fn check_formula(f: &RegexFormula) -> Result<(), (ErrorKind, String)> {
    fn walk(
        f: &RegexFormula,
        union: bool,
        star: bool,
        seen: &mut HashSet<Var>,
    ) -> Result<(), (ErrorKind, String)> {
        match f {
            RegexFormula::Empty | RegexFormula::Epsilon | RegexFormula::Literal(_) => Ok(()),
            RegexFormula::Union(a, b) => {
                walk(a, true, star, seen)?;
                walk(b, true, star, seen)
            }
            RegexFormula::Concat(a, b) => {
                walk(a, union, star, seen)?;
                walk(b, union, star, seen)
            }
            RegexFormula::Star(a) => walk(a, union, true, seen),
            RegexFormula::Bind(x, a) => {
                if union {
                    return Err((ErrorKind::NotSynchronized, format!("`{x}` is bound under a union")));
                }
                if star {
                    return Err((ErrorKind::NotFunctional, format!("`{x}` is bound under a star")));
                }
                if !seen.insert(*x) {
                    return Err((ErrorKind::NotFunctional, format!("`{x}` is bound twice")));
                }
                walk(a, union, star, seen)
            }
        }
    }
    walk(f, false, false, &mut HashSet::new())
}

pub fn parse_query(text: &str, alphabet: &Alphabet) -> Result<FcCq, ParseError> {
    Parser::new(text, alphabet, false).query()
}

/// A regex on its own, without the surrounding slashes.
pub fn parse_regex(text: &str, alphabet: &Alphabet) -> Result<Regex, ParseError> {
    let mut p = Parser::new(text, alphabet, false);
    let f = p.alt()?;
    p.finish()?;
    Ok(f.to_regex().expect("no bindings outside spanner mode"))
}

pub fn parse_sercq(text: &str, alphabet: &Alphabet) -> Result<SercqAst, ParseError> {
    Parser::new(text, alphabet, true).sercq()
}

/// Pattern literals for the command line.
///
/// With whitespace, dots or quotes present, tokens are identifiers or quoted
/// terminal words (`x1 'ab' x2`). Otherwise the text is read compactly: each
/// variable is one letter followed by digits, so `x1x2x1` and `xyx` both
/// have three occurrences.
pub fn parse_pattern(text: &str, alphabet: &Alphabet) -> Result<Pattern, ParseError> {
    let trimmed = text.trim();
    let mut p = Parser::new(text, alphabet, false);
    let mut items = Vec::new();
    let spaced = trimmed.bytes().any(|b| b.is_ascii_whitespace() || b == b'.' || b == b'\'');
    if spaced {
        loop {
            while p.eat(".") {}
            match p.peek() {
                None => break,
                Some(b'\'') => items.extend(p.quoted()?.into_iter().map(Item::Sym)),
                Some(b) if ident_start(b) => items.push(Item::Var(p.ident()?.0)),
                Some(_) => return Err(p.error("expected a variable or a quoted literal")),
            }
        }
    } else {
        let b = text.as_bytes();
        loop {
            p.skip_ws();
            if p.pos >= b.len() {
                break;
            }
            if !b[p.pos].is_ascii_alphabetic() {
                return Err(p.error("expected a variable"));
            }
            let start = p.pos;
            p.pos += 1;
            while p.pos < b.len() && (b[p.pos].is_ascii_digit() || b[p.pos] == b'_' || b[p.pos] == b'^') {
                p.pos += 1;
            }
            items.push(Item::Var(Var::new(&text[start..p.pos])));
        }
    }
    if items.is_empty() {
        return Err(p.error_at(ErrorKind::Syntax, "empty pattern", 0, text.len()));
    }
    Ok(Pattern(items))
}

fn prec(f: &RegexFormula) -> u8 {
    match f {
        RegexFormula::Union(..) => 0,
        RegexFormula::Concat(..) => 1,
        RegexFormula::Star(_) => 2,
        _ => 3,
    }
}

fn write_formula(f: &RegexFormula, ctx: u8, sigma: Option<&RegexFormula>, out: &mut String) {
    if sigma == Some(f) {
        out.push('S');
        return;
    }
    if prec(f) < ctx {
        out.push('(');
        write_formula(f, 0, sigma, out);
        out.push(')');
        return;
    }
    match f {
        RegexFormula::Empty => out.push('#'),
        RegexFormula::Epsilon => out.push_str("''"),
        RegexFormula::Literal(b) => {
            let _ = write!(out, "'{}'", *b as char);
        }
        RegexFormula::Union(a, b) => {
            write_formula(a, 0, sigma, out);
            out.push('|');
            write_formula(b, 1, sigma, out);
        }
        RegexFormula::Concat(a, b) => {
            write_formula(a, 1, sigma, out);
            out.push('.');
            write_formula(b, 2, sigma, out);
        }
        RegexFormula::Star(a) => {
            write_formula(a, 3, sigma, out);
            out.push('*');
        }
        RegexFormula::Bind(x, a) => {
            let _ = write!(out, "{x}{{");
            write_formula(a, 0, sigma, out);
            out.push('}');
        }
    }
}

/// Prints a formula; with an alphabet of two or more symbols, the full
/// symbol union is abbreviated to `S`.
pub fn print_formula(f: &RegexFormula, alphabet: Option<&Alphabet>) -> String {
    let sigma = alphabet
        .filter(|a| a.symbols().len() > 1)
        .map(|a| RegexFormula::from_regex(&Regex::any(a)));
    let mut out = String::new();
    write_formula(f, 0, sigma.as_ref(), &mut out);
    out
}

pub fn print_regex(r: &Regex, alphabet: Option<&Alphabet>) -> String {
    print_formula(&RegexFormula::from_regex(r), alphabet)
}

fn join_vars(vs: &[Var]) -> String {
    vs.iter().map(|v| v.name()).collect::<Vec<_>>().join(", ")
}

pub fn print_query(q: &FcCq) -> String {
    print_query_with(q, None)
}

pub fn print_query_with(q: &FcCq, alphabet: Option<&Alphabet>) -> String {
    let mut atoms: Vec<String> = q.equations.iter().map(|e| e.to_string()).collect();
    for c in &q.constraints {
        atoms.push(format!("{} in /{}/", c.var, print_regex(&c.regex, alphabet)));
    }
    format!("ans({}) :- {}", join_vars(&q.head), atoms.join(", "))
}

pub fn print_sercq(p: &SercqAst, alphabet: Option<&Alphabet>) -> String {
    let mut out = format!("pi{{{}}}", join_vars(&p.projection));
    for (a, b) in &p.equalities {
        let _ = write!(out, " eq{{{a}, {b}}}");
    }
    let fs: Vec<String> = p.formulas.iter().map(|f| print_formula(f, alphabet)).collect();
    let _ = write!(out, " ( {} )", fs.join(" join "));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::default()
    }

    #[test]
    fn sentence_query_shape() {
        let q = parse_query("ans(x,y) :- x = z1.z2, y = z1.z3, x in /s/, z1 in /w/", &ab()).unwrap();
        assert_eq!(q.head, vec![Var::new("x"), Var::new("y")]);
        assert_eq!(q.equations.len(), 2);
        assert_eq!(q.constraints.len(), 2);
        assert_eq!(q.constraints[0].regex, Regex::Literal(b's'));
    }

    #[test]
    fn boolean_query_with_terminals() {
        let q = parse_query("ans() :- u = x.'a'.x", &ab()).unwrap();
        assert!(q.head.is_empty());
        let x = Var::new("x");
        assert_eq!(q.equations[0].lhs, Var::UNIVERSE);
        assert_eq!(q.equations[0].rhs, Pattern(vec![Item::Var(x), Item::Sym(b'a'), Item::Var(x)]));
    }

    #[test]
    fn dangling_equation_is_an_error() {
        let e = parse_query("ans() :- u = ", &ab()).unwrap_err();
        assert!(e.span.start <= e.span.end && e.span.end <= "ans() :- u = ".len());
    }

    #[test]
    fn literal_outside_alphabet() {
        let sigma = Alphabet::new(b"ab").unwrap();
        let e = parse_query("ans() :- u = x.'ac'", &sigma).unwrap_err();
        assert_eq!(e.span, SourceSpan { start: 17, end: 18 });
        assert!(parse_query("ans() :- x in /c/", &sigma).is_err());
    }

    #[test]
    fn epsilon_rhs_round_trips() {
        let text = "ans() :- x = '', u = x.y";
        let q = parse_query(text, &ab()).unwrap();
        assert!(q.equations[0].rhs.is_empty());
        let printed = print_query(&q);
        assert!(printed.contains("x = ''"));
        assert_eq!(parse_query(&printed, &ab()).unwrap(), q);
    }

    #[test]
    fn head_must_be_bound() {
        assert!(parse_query("ans(y) :- u = x", &ab()).is_err());
        assert!(parse_query("ans(u) :- u = x", &ab()).is_err());
    }

    #[test]
    fn regex_forms() {
        let sigma = Alphabet::new(b"ab").unwrap();
        let any = Regex::any(&sigma);
        assert_eq!(parse_regex("S", &sigma).unwrap(), any);
        assert_eq!(parse_regex("S+", &sigma).unwrap(), Regex::plus(any.clone()));
        assert_eq!(parse_regex("#", &sigma).unwrap(), Regex::Empty);
        assert_eq!(parse_regex("''", &sigma).unwrap(), Regex::Epsilon);
        assert_eq!(
            parse_regex("a('b')*", &sigma).unwrap(),
            Regex::concat(Regex::Literal(b'a'), Regex::star(Regex::Literal(b'b')))
        );
        assert_eq!(parse_regex("'ab'|b", &sigma).unwrap(), Regex::union(Regex::word(b"ab"), Regex::Literal(b'b')));
        assert!(parse_regex("a|", &sigma).is_err());
        assert!(parse_regex("(a", &sigma).is_err());
    }

    #[test]
    fn regex_printing_round_trips() {
        let sigma = Alphabet::new(b"ab").unwrap();
        for text in ["a|b|''", "a|(b|a)", "(a.b).a", "a.(b.a)", "(a|b)*.b", "S*.a.S*", "#|a**", "(S|'')+"] {
            let r = parse_regex(text, &sigma).unwrap();
            for shown in [print_regex(&r, None), print_regex(&r, Some(&sigma))] {
                assert_eq!(parse_regex(&shown, &sigma).unwrap(), r, "{text} printed as {shown}");
            }
        }
    }

    #[test]
    fn sercq_example() {
        let sigma = Alphabet::new(b"ab").unwrap();
        let p = parse_sercq("pi{x1} eq{x1,x2} ( S*.x1{S+}.'a'.S* join S*.x2{S+}.'b'.S* )", &sigma).unwrap();
        assert_eq!(p.projection, vec![Var::new("x1")]);
        assert_eq!(p.equalities, vec![(Var::new("x1"), Var::new("x2"))]);
        assert_eq!(p.formulas.len(), 2);
        assert_eq!(p.svars(), vec![Var::new("x1"), Var::new("x2")]);
        let again = parse_sercq(&print_sercq(&p, Some(&sigma)), &sigma).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn sercq_validity() {
        let sigma = Alphabet::new(b"ab").unwrap();
        let e = parse_sercq("pi{} ( (x{'a'}|'b') )", &sigma).unwrap_err();
        assert_eq!(e.kind, ErrorKind::NotSynchronized);
        let e = parse_sercq("pi{} ( x{a}.x{b} )", &sigma).unwrap_err();
        assert_eq!(e.kind, ErrorKind::NotFunctional);
        let e = parse_sercq("pi{} ( (x{a})* )", &sigma).unwrap_err();
        assert_eq!(e.kind, ErrorKind::NotFunctional);
        let b = parse_sercq("pi{} ('a')", &sigma).unwrap();
        assert!(b.projection.is_empty());
        assert_eq!(parse_sercq("pi{y} ( x{a} )", &sigma).unwrap_err().kind, ErrorKind::Syntax);
    }

    #[test]
    fn pattern_literals() {
        let x = |i: u32| Item::Var(Var::new(&format!("x{i}")));
        let sigma = ab();
        let compact = parse_pattern("x1x2x1x3x1", &sigma).unwrap();
        let spaced = parse_pattern("x1 x2 x1 x3 x1", &sigma).unwrap();
        assert_eq!(compact, spaced);
        assert_eq!(compact.0, vec![x(1), x(2), x(1), x(3), x(1)]);
        let mixed = parse_pattern("'ab' x 'ba' x y x", &sigma).unwrap();
        assert_eq!(mixed.len(), 8);
        assert!(parse_pattern("  ", &sigma).is_err());
    }

    #[test]
    fn comments_are_skipped() {
        let q = parse_query("% header\nans() :- u = x % trailing\n", &ab()).unwrap();
        assert_eq!(q.equations.len(), 1);
    }
}
