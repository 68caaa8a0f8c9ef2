//! Text format for PDE systems, reader and writer.
//!
//! ```text
//! # comments run to end of line
//! system wave {
//!   coordinates x y z t;          # the last coordinate is time-like
//!   fields Phi;                   # or multi-component: A[4], h[10]
//!   param msq = 1;                # rational parameters, substituted here
//!   gammas = [0, 1];              # gauge generator counts, index from 0
//!   eq: d(x,x) Phi + d(y,y) Phi + d(z,z) Phi - d(t,t) Phi = 0;
//! }
//! ```
//!
//! Each equation term is an optional rational/parameter coefficient, an
//! optional derivative operator `d(...)` listing coordinates with
//! multiplicity, and a field reference. Parameters are substituted during
//! parsing, so the resulting system carries plain rational coefficients.
//! The writer emits this same syntax with terms in canonical column order;
//! a raised order (`assume_order`) is not representable and comes back as
//! the inferred order.

use std::collections::BTreeMap;
use std::fmt;

use crate::combinatorics::MultiIndex;
use crate::linalg::{format_rational, parse_rational, Rational};
use crate::system::{
    jet_column_cmp, FieldDecl, JetCoordinate, LinearEquation, PDESystem, SystemError,
};
use num_traits::{One, Signed};

/// Position of a token in the source: 1-based line and column, plus the
/// token's width in characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: Option<String>,
    pub line: usize,
    pub column: usize,
    pub width: usize,
}

#[derive(Debug)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(file) = &self.span.file {
            write!(f, "{file}:")?;
        }
        write!(
            f,
            "{}:{}: {}",
            self.span.line, self.span.column, self.message
        )?;
        if let Some(expected) = &self.expected {
            write!(f, " (expected {expected})")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

const KEYWORDS: [&str; 7] = [
    "system",
    "coordinates",
    "fields",
    "param",
    "gammas",
    "eq",
    "d",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TokKind {
    Ident,
    Number, // "12" or "3/4"
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Equals,
    Plus,
    Minus,
    Star,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    kind: TokKind,
    text: String,
    line: usize,
    column: usize,
}

fn tokenize(src: &str, file: Option<&str>) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut line = 1usize;
    let mut column = 1usize;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tok_line, tok_column) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                bump(&mut chars);
                if c == '\n' {
                    break;
                }
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut text = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    text.push(bump(&mut chars));
                } else {
                    break;
                }
            }
            tokens.push(Token {
                kind: TokKind::Ident,
                text,
                line: tok_line,
                column: tok_column,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let mut text = String::new();
            while chars.peek().is_some_and(char::is_ascii_digit) {
                text.push(bump(&mut chars));
            }
            // A '/' directly followed by digits continues the rational.
            let mut ahead = chars.clone();
            if ahead.next() == Some('/') && ahead.peek().is_some_and(char::is_ascii_digit) {
                text.push(bump(&mut chars));
                while chars.peek().is_some_and(char::is_ascii_digit) {
                    text.push(bump(&mut chars));
                }
            }
            tokens.push(Token {
                kind: TokKind::Number,
                text,
                line: tok_line,
                column: tok_column,
            });
            continue;
        }
        let kind = match c {
            '{' => TokKind::LBrace,
            '}' => TokKind::RBrace,
            '[' => TokKind::LBracket,
            ']' => TokKind::RBracket,
            '(' => TokKind::LParen,
            ')' => TokKind::RParen,
            ',' => TokKind::Comma,
            ';' => TokKind::Semi,
            ':' => TokKind::Colon,
            '=' => TokKind::Equals,
            '+' => TokKind::Plus,
            '-' => TokKind::Minus,
            '*' => TokKind::Star,
            other => {
                return Err(ParseError {
                    span: SourceSpan {
                        file: file.map(String::from),
                        line: tok_line,
                        column: tok_column,
                        width: 1,
                    },
                    message: format!("unexpected character '{other}'"),
                    expected: None,
                })
            }
        };
        bump(&mut chars);
        tokens.push(Token {
            kind,
            text: c.to_string(),
            line: tok_line,
            column: tok_column,
        });
    }
    tokens.push(Token {
        kind: TokKind::Eof,
        text: String::new(),
        line,
        column,
    });
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    file: Option<&'a str>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek2(&self) -> &Token {
        &self.tokens[(self.pos + 1).min(self.tokens.len() - 1)]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn span_of(&self, t: &Token) -> SourceSpan {
        SourceSpan {
            file: self.file.map(String::from),
            line: t.line,
            column: t.column,
            width: t.text.chars().count().max(1),
        }
    }

    fn error_at(&self, t: &Token, message: impl Into<String>) -> ParseError {
        ParseError {
            span: self.span_of(t),
            message: message.into(),
            expected: None,
        }
    }

    fn unexpected(&self, t: &Token, expected: &str) -> ParseError {
        let shown = if t.kind == TokKind::Eof {
            "end of input".to_string()
        } else {
            format!("'{}'", t.text)
        };
        ParseError {
            span: self.span_of(t),
            message: format!("unexpected {shown}"),
            expected: Some(expected.to_string()),
        }
    }

    fn expect(&mut self, kind: TokKind, expected: &str) -> Result<Token, ParseError> {
        if self.peek().kind == kind {
            Ok(self.next())
        } else {
            Err(self.unexpected(&self.peek().clone(), expected))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<Token, ParseError> {
        let t = self.peek().clone();
        if t.kind == TokKind::Ident && t.text == kw {
            Ok(self.next())
        } else {
            Err(self.unexpected(&t, &format!("'{kw}'")))
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        let t = self.peek();
        t.kind == TokKind::Ident && t.text == kw
    }

    /// An identifier usable as a declared name: not a keyword, not `d`.
    fn expect_name(&mut self, what: &str) -> Result<Token, ParseError> {
        let t = self.expect(TokKind::Ident, what)?;
        if KEYWORDS.contains(&t.text.as_str()) {
            return Err(self.error_at(
                &t,
                format!("'{}' is reserved and cannot name a {what}", t.text),
            ));
        }
        Ok(t)
    }

    fn number(&mut self, what: &str) -> Result<(Rational, Token), ParseError> {
        let negative = if self.peek().kind == TokKind::Minus {
            self.next();
            true
        } else {
            false
        };
        let t = self.expect(TokKind::Number, what)?;
        let mut value = parse_rational(&t.text).map_err(|e| self.error_at(&t, e))?;
        if negative {
            value = -value;
        }
        Ok((value, t))
    }
}

struct Declarations {
    coordinates: Vec<String>,
    fields: Vec<FieldDecl>,
    params: BTreeMap<String, Rational>,
}

impl Declarations {
    fn is_taken(&self, name: &str) -> bool {
        self.coordinates.iter().any(|c| c == name)
            || self.fields.iter().any(|f| f.name == name)
            || self.params.contains_key(name)
    }
}

/// Parse a system description, with no parameter overrides.
pub fn parse(src: &str) -> Result<PDESystem, ParseError> {
    parse_with_params(src, None, &BTreeMap::new())
}

/// Parse with a source name for error spans.
pub fn parse_named(src: &str, file: Option<&str>) -> Result<PDESystem, ParseError> {
    parse_with_params(src, file, &BTreeMap::new())
}

/// Parse, overriding declared parameter values by name before the equations
/// are read. Overriding an undeclared parameter is an error.
pub fn parse_with_params(
    src: &str,
    file: Option<&str>,
    overrides: &BTreeMap<String, Rational>,
) -> Result<PDESystem, ParseError> {
    parse_with_effective_params(src, file, overrides).map(|(system, _)| system)
}

/// Like [`parse_with_params`], but also returns the parameter values that
/// were substituted into the equations (declared defaults with the overrides
/// applied), so callers can re-parse at shifted values.
pub fn parse_with_effective_params(
    src: &str,
    file: Option<&str>,
    overrides: &BTreeMap<String, Rational>,
) -> Result<(PDESystem, BTreeMap<String, Rational>), ParseError> {
    let tokens = tokenize(src, file)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        file,
    };

    p.expect_keyword("system")?;
    let name_tok = p.expect_name("system name")?;
    p.expect(TokKind::LBrace, "'{'")?;

    let mut decls = Declarations {
        coordinates: Vec::new(),
        fields: Vec::new(),
        params: BTreeMap::new(),
    };

    // coordinates x y z t;
    p.expect_keyword("coordinates")?;
    while p.peek().kind == TokKind::Ident {
        let t = p.expect_name("coordinate")?;
        if decls.is_taken(&t.text) {
            return Err(p.error_at(&t, format!("duplicate name '{}'", t.text)));
        }
        decls.coordinates.push(t.text);
    }
    if decls.coordinates.is_empty() {
        let t = p.peek().clone();
        return Err(p.unexpected(&t, "at least one coordinate name"));
    }
    p.expect(TokKind::Semi, "';'")?;

    // fields A[4], Phi;
    p.expect_keyword("fields")?;
    loop {
        let t = p.expect_name("field")?;
        if decls.is_taken(&t.text) {
            return Err(p.error_at(&t, format!("duplicate name '{}'", t.text)));
        }
        let components = if p.peek().kind == TokKind::LBracket {
            p.next();
            let (value, vt) = p.number("component count")?;
            let count = rational_to_count(&value)
                .ok_or_else(|| p.error_at(&vt, "component count must be a positive integer"))?;
            p.expect(TokKind::RBracket, "']'")?;
            Some(count)
        } else {
            None
        };
        decls.fields.push(FieldDecl {
            name: t.text,
            components,
        });
        if p.peek().kind == TokKind::Comma {
            p.next();
        } else {
            break;
        }
    }
    p.expect(TokKind::Semi, "';'")?;

    // param msq = 1;
    while p.at_keyword("param") {
        p.next();
        let t = p.expect_name("parameter")?;
        if decls.is_taken(&t.text) {
            return Err(p.error_at(&t, format!("duplicate name '{}'", t.text)));
        }
        p.expect(TokKind::Equals, "'='")?;
        let (value, _) = p.number("parameter value")?;
        p.expect(TokKind::Semi, "';'")?;
        decls.params.insert(t.text, value);
    }

    for (name, value) in overrides {
        match decls.params.get_mut(name) {
            Some(slot) => *slot = value.clone(),
            None => {
                return Err(p.error_at(&name_tok, format!("system declares no parameter '{name}'")))
            }
        }
    }

    // gammas = [0, 1];
    let mut gammas: Vec<u64> = Vec::new();
    if p.at_keyword("gammas") {
        p.next();
        p.expect(TokKind::Equals, "'='")?;
        p.expect(TokKind::LBracket, "'['")?;
        loop {
            let (value, vt) = p.number("gauge generator count")?;
            let count = rational_to_u64(&value).ok_or_else(|| {
                p.error_at(&vt, "gauge generator counts are non-negative integers")
            })?;
            gammas.push(count);
            if p.peek().kind == TokKind::Comma {
                p.next();
            } else {
                break;
            }
        }
        p.expect(TokKind::RBracket, "']'")?;
        let semi = p.expect(TokKind::Semi, "';'")?;
        if gammas.last() == Some(&0) {
            return Err(p.error_at(
                &semi,
                "the gauge generator list must end with a positive count",
            ));
        }
    }

    // eq: ... = 0;
    let mut equations = Vec::new();
    while p.at_keyword("eq") {
        let eq_tok = p.next();
        p.expect(TokKind::Colon, "':'")?;
        let terms = parse_expr(&mut p, &decls)?;
        p.expect(TokKind::Equals, "'='")?;
        let zero = p.expect(TokKind::Number, "'0'")?;
        if zero.text != "0" {
            return Err(p.error_at(&zero, "equations must have the form expr = 0"));
        }
        p.expect(TokKind::Semi, "';'")?;
        let eq = LinearEquation::from_terms(terms).map_err(|e| match e {
            SystemError::TrivialEquation => {
                p.error_at(&eq_tok, "equation reduces to 0 = 0; every term cancelled")
            }
            other => p.error_at(&eq_tok, other.to_string()),
        })?;
        equations.push(eq);
    }
    if equations.is_empty() {
        let t = p.peek().clone();
        return Err(p.unexpected(&t, "at least one 'eq:' line"));
    }

    p.expect(TokKind::RBrace, "'}'")?;
    let eof = p.peek().clone();
    if eof.kind != TokKind::Eof {
        return Err(p.unexpected(&eof, "end of input"));
    }

    let system = PDESystem::new(
        name_tok.text.clone(),
        decls.coordinates,
        decls.fields,
        gammas,
        equations,
    )
    .map_err(|e| p.error_at(&name_tok, e.to_string()))?;
    Ok((system, decls.params))
}

fn rational_to_count(v: &Rational) -> Option<usize> {
    rational_to_u64(v).and_then(|x| {
        if x >= 1 {
            usize::try_from(x).ok()
        } else {
            None
        }
    })
}

fn rational_to_u64(v: &Rational) -> Option<u64> {
    if v.denom().is_one() && !v.is_negative() {
        use num_traits::ToPrimitive;
        v.numer().to_u64()
    } else {
        None
    }
}

fn parse_expr(
    p: &mut Parser,
    decls: &Declarations,
) -> Result<Vec<(JetCoordinate, Rational)>, ParseError> {
    let mut terms = Vec::new();
    let mut sign = Rational::one();
    if p.peek().kind == TokKind::Minus {
        p.next();
        sign = -sign;
    }
    terms.push(parse_term(p, decls, sign)?);
    loop {
        let sign = match p.peek().kind {
            TokKind::Plus => Rational::one(),
            TokKind::Minus => -Rational::one(),
            _ => break,
        };
        p.next();
        terms.push(parse_term(p, decls, sign)?);
    }
    Ok(terms)
}

/// One term: coefficient factors (rational literals and parameters), then an
/// optional `d(...)`, then the field reference. `*` between factors is
/// optional.
fn parse_term(
    p: &mut Parser,
    decls: &Declarations,
    sign: Rational,
) -> Result<(JetCoordinate, Rational), ParseError> {
    let mut coeff = sign;
    let mut saw_coefficient = false;
    let mut derivative: Option<MultiIndex> = None;

    loop {
        let t = p.peek().clone();
        match t.kind {
            TokKind::Number => {
                if derivative.is_some() {
                    return Err(p.error_at(&t, "coefficients go before the derivative operator"));
                }
                p.next();
                let value = parse_rational(&t.text).map_err(|e| p.error_at(&t, e))?;
                coeff *= value;
                saw_coefficient = true;
            }
            TokKind::Ident if t.text == "d" && p.peek2().kind == TokKind::LParen => {
                if derivative.is_some() {
                    return Err(p.error_at(&t, "a term has at most one derivative operator"));
                }
                p.next();
                p.next(); // '('
                let mut entries = vec![0u32; decls.coordinates.len()];
                loop {
                    let ct = p.expect(TokKind::Ident, "a coordinate name")?;
                    match decls.coordinates.iter().position(|c| *c == ct.text) {
                        Some(i) => entries[i] += 1,
                        None => {
                            return Err(p.error_at(
                                &ct,
                                format!("unknown coordinate '{}' in derivative", ct.text),
                            ))
                        }
                    }
                    if p.peek().kind == TokKind::Comma {
                        p.next();
                    } else {
                        break;
                    }
                }
                p.expect(TokKind::RParen, "')'")?;
                derivative = Some(MultiIndex::new(entries));
            }
            TokKind::Ident if t.text == "d" => {
                return Err(p.error_at(&t, "the derivative operator d needs parentheses: d(x,...)"));
            }
            TokKind::Ident if decls.params.contains_key(&t.text) => {
                if derivative.is_some() {
                    return Err(p.error_at(&t, "coefficients go before the derivative operator"));
                }
                p.next();
                coeff *= &decls.params[&t.text];
                saw_coefficient = true;
            }
            TokKind::Ident => {
                // Field reference terminates the term.
                let field = decls
                    .fields
                    .iter()
                    .find(|f| f.name == t.text)
                    .ok_or_else(|| {
                        p.error_at(
                            &t,
                            format!(
                                "unknown name '{}'; not a declared parameter or field",
                                t.text
                            ),
                        )
                    })?
                    .clone();
                p.next();
                let component = if p.peek().kind == TokKind::LBracket {
                    p.next();
                    let (value, vt) = p.number("component index")?;
                    let c = rational_to_count(&value).ok_or_else(|| {
                        p.error_at(&vt, "component indices are positive integers")
                    })?;
                    p.expect(TokKind::RBracket, "']'")?;
                    Some((c, vt))
                } else {
                    None
                };
                let flat = match (&field.components, &component) {
                    (None, None) => field_offset(decls, &field.name) + 1,
                    (None, Some((_, vt))) => {
                        return Err(p.error_at(
                            vt,
                            format!(
                                "field '{}' is scalar and takes no component index",
                                field.name
                            ),
                        ))
                    }
                    (Some(k), Some((c, vt))) => {
                        if *c > *k {
                            return Err(p.error_at(
                                vt,
                                format!(
                                    "component {} is out of range; field '{}' has {} components",
                                    c, field.name, k
                                ),
                            ));
                        }
                        field_offset(decls, &field.name) + c
                    }
                    (Some(k), None) => {
                        return Err(p.error_at(
                            &t,
                            format!(
                                "field '{}' has {} components; write {}[k]",
                                field.name, k, field.name
                            ),
                        ))
                    }
                };
                let index = derivative.unwrap_or_else(|| MultiIndex::zero(decls.coordinates.len()));
                return Ok((JetCoordinate::new(flat, index), coeff));
            }
            _ => {
                let message = if saw_coefficient || derivative.is_some() {
                    "every term must involve a field; constant terms are not allowed"
                } else {
                    "expected a term"
                };
                return Err(p.error_at(&t, message));
            }
        }
        if p.peek().kind == TokKind::Star {
            p.next();
        }
    }
}

fn field_offset(decls: &Declarations, name: &str) -> usize {
    let mut offset = 0;
    for f in &decls.fields {
        if f.name == name {
            return offset;
        }
        offset += f.components.unwrap_or(1);
    }
    unreachable!("field lookup after successful find")
}

#[derive(Debug, thiserror::Error)]
pub enum SerializeError {
    #[error("name '{0}' cannot be written in the system syntax")]
    BadName(String),
}

fn ident_ok(name: &str) -> bool {
    let mut chars = name.chars();
    let head_ok = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    head_ok && chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&name)
}

/// Write a system in the text syntax. Equations come out with terms in
/// canonical column order and fully substituted coefficients.
pub fn serialize(s: &PDESystem) -> Result<String, SerializeError> {
    for name in std::iter::once(s.name())
        .chain(s.coordinates().iter().map(String::as_str))
        .chain(s.fields().iter().map(|f| f.name.as_str()))
    {
        if !ident_ok(name) {
            return Err(SerializeError::BadName(name.to_string()));
        }
    }
    let mut out = String::new();
    out.push_str(&format!("system {} {{\n", s.name()));
    out.push_str(&format!("  coordinates {};\n", s.coordinates().join(" ")));
    let fields: Vec<String> = s
        .fields()
        .iter()
        .map(|f| match f.components {
            None => f.name.clone(),
            Some(k) => format!("{}[{}]", f.name, k),
        })
        .collect();
    out.push_str(&format!("  fields {};\n", fields.join(", ")));
    if !s.gammas().is_empty() {
        let gammas: Vec<String> = s.gammas().iter().map(u64::to_string).collect();
        out.push_str(&format!("  gammas = [{}];\n", gammas.join(", ")));
    }
    for eq in s.equations() {
        let mut terms: Vec<(&JetCoordinate, &Rational)> = eq.coefficients().iter().collect();
        terms.sort_by(|a, b| jet_column_cmp(a.0, b.0));
        let mut line = String::from("  eq:");
        for (i, (coord, coeff)) in terms.iter().enumerate() {
            if i == 0 {
                line.push(' ');
                if coeff.is_negative() {
                    line.push_str("- ");
                }
            } else if coeff.is_negative() {
                line.push_str(" - ");
            } else {
                line.push_str(" + ");
            }
            let mag = coeff.abs();
            if !mag.is_one() {
                line.push_str(&format_rational(&mag));
                line.push_str(" * ");
            }
            if coord.order() > 0 {
                let mut parts = Vec::new();
                for (i, entry) in coord.index.as_slice().iter().enumerate() {
                    for _ in 0..*entry {
                        parts.push(s.coordinates()[i].as_str());
                    }
                }
                line.push_str(&format!("d({}) ", parts.join(",")));
            }
            line.push_str(&s.field_label(coord.field));
        }
        line.push_str(" = 0;\n");
        out.push_str(&line);
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    const WAVE: &str = "\
# the scalar wave equation
system wave {
  coordinates x y z t;
  fields Phi;
  eq: d(x,x) Phi + d(y,y) Phi + d(z,z) Phi - d(t,t) Phi = 0;
}
";

    fn jc(field: usize, entries: &[u32]) -> JetCoordinate {
        JetCoordinate::new(field, MultiIndex::new(entries.to_vec()))
    }

    #[test]
    fn parses_the_wave_system() {
        let s = parse(WAVE).unwrap();
        assert_eq!(s.name(), "wave");
        assert_eq!(s.coordinates(), ["x", "y", "z", "t"]);
        assert_eq!((s.n(), s.m(), s.q()), (4, 1, 2));
        let eq = &s.equations()[0];
        assert_eq!(eq.coefficients()[&jc(1, &[2, 0, 0, 0])], rat(1));
        assert_eq!(eq.coefficients()[&jc(1, &[0, 0, 0, 2])], rat(-1));
    }

    #[test]
    fn round_trips_through_the_writer() {
        let s = parse(WAVE).unwrap();
        let text = serialize(&s).unwrap();
        let back = parse(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn parameters_substitute_and_override() {
        let src = "\
system massive {
  coordinates x t;
  fields u;
  param msq = 3/2;
  eq: d(x,x) u - d(t,t) u - msq * u = 0;
}
";
        let s = parse(src).unwrap();
        assert_eq!(
            s.equations()[0].coefficients()[&jc(1, &[0, 0])],
            ratio(-3, 2)
        );

        let overrides = BTreeMap::from([("msq".to_string(), rat(7))]);
        let s = parse_with_params(src, None, &overrides).unwrap();
        assert_eq!(s.equations()[0].coefficients()[&jc(1, &[0, 0])], rat(-7));

        let overrides = BTreeMap::from([("mass".to_string(), rat(7))]);
        let err = parse_with_params(src, None, &overrides).unwrap_err();
        assert!(err.message.contains("declares no parameter 'mass'"));
    }

    #[test]
    fn coefficient_forms() {
        let src = "\
system forms {
  coordinates x y;
  fields A[2];
  param a = 2;
  eq: 3 * d(x) A[1] + a d(y) A[2] + 1/2 A[1] - 2 * a * d(x,y) A[2] = 0;
}
";
        let s = parse(src).unwrap();
        let eq = &s.equations()[0];
        assert_eq!(eq.coefficients()[&jc(1, &[1, 0])], rat(3));
        assert_eq!(eq.coefficients()[&jc(2, &[0, 1])], rat(2));
        assert_eq!(eq.coefficients()[&jc(1, &[0, 0])], ratio(1, 2));
        assert_eq!(eq.coefficients()[&jc(2, &[1, 1])], rat(-4));
    }

    #[test]
    fn gammas_parse_and_reject_trailing_zero() {
        let src = "\
system g {
  coordinates x y;
  fields A[2];
  gammas = [1, 2];
  eq: d(x) A[1] = 0;
}
";
        assert_eq!(parse(src).unwrap().gammas(), &[1, 2]);

        let bad = src.replace("[1, 2]", "[1, 0]");
        let err = parse(&bad).unwrap_err();
        assert!(err.message.contains("end with a positive count"), "{err}");
    }

    #[test]
    fn error_spans_point_at_the_problem() {
        let src = "\
system s {
  coordinates x y;
  fields u;
  eq: d(x,w) u = 0;
}
";
        let err = parse(src).unwrap_err();
        assert_eq!((err.span.line, err.span.column), (4, 11));
        assert!(err.message.contains("unknown coordinate 'w'"));
    }

    #[test]
    fn inhomogeneous_terms_are_rejected_with_a_targeted_message() {
        let src = "\
system s {
  coordinates x;
  fields u;
  param c = 3;
  eq: d(x) u + c = 0;
}
";
        let err = parse(src).unwrap_err();
        assert!(
            err.message.contains("every term must involve a field"),
            "{err}"
        );
        assert_eq!(err.span.line, 5);
    }

    #[test]
    fn cancelling_equation_is_an_error() {
        let src = "\
system s {
  coordinates x;
  fields u;
  eq: d(x) u - d(x) u = 0;
}
";
        let err = parse(src).unwrap_err();
        assert!(err.message.contains("every term cancelled"));
    }

    #[test]
    fn component_misuse_is_caught() {
        let base = "\
system s {
  coordinates x;
  fields A[2], u;
  eq: EQN = 0;
}
";
        let err = parse(&base.replace("EQN", "d(x) A")).unwrap_err();
        assert!(err.message.contains("write A[k]"));
        let err = parse(&base.replace("EQN", "d(x) A[3]")).unwrap_err();
        assert!(err.message.contains("out of range"));
        let err = parse(&base.replace("EQN", "d(x) u[1]")).unwrap_err();
        assert!(err.message.contains("scalar and takes no component"));
        let err = parse(&base.replace("EQN", "d(x) v")).unwrap_err();
        assert!(err.message.contains("unknown name 'v'"));
    }

    #[test]
    fn reserved_names_are_rejected() {
        let src = "\
system s {
  coordinates d t;
  fields u;
  eq: d(t) u = 0;
}
";
        let err = parse(src).unwrap_err();
        assert!(err.message.contains("'d' is reserved"));
    }

    #[test]
    fn rejects_malformed_input_without_panicking() {
        for src in [
            "",
            "system",
            "system s {",
            "system s { coordinates ; fields u; eq: u = 0; }",
            "system s { coordinates x; fields u; eq: u = 1; }",
            "system s { coordinates x; fields u; eq: u = 0; } trailing",
            "system s { coordinates x; fields u; }",
            "system s { coordinates x; fields u; eq: d u = 0; }",
            "system s { coordinates x; fields u; eq: d() u = 0; }",
            "system s { coordinates x; fields u; eq: * u = 0; }",
            "system s { coordinates x; fields u; gammas = [0]; eq: u = 0; }",
            "system s { coordinates x; fields u[0]; eq: u[1] = 0; }",
            "system s { coordinates x x; fields u; eq: d(x) u = 0; }",
            "system s { coordinates x; fields u; param u = 1; eq: d(x) u = 0; }",
            "system 3 { coordinates x; fields u; eq: d(x) u = 0; }",
            "sys tem s {}",
            "system s { coordinates x; fields u; eq: 2/0 u = 0; }",
            "@",
        ] {
            assert!(parse(src).is_err(), "should reject: {src}");
        }
    }

    #[test]
    fn order_zero_terms_and_equations_parse() {
        let src = "\
system s {
  coordinates x t;
  fields u, v;
  eq: d(t) u + v = 0;
  eq: u - v = 0;
}
";
        let s = parse(src).unwrap();
        assert_eq!(s.q(), 1);
        assert_eq!(s.equations()[1].order(), 0);
    }

    #[test]
    fn serializer_emits_components_and_coefficients() {
        let src = "\
system two {
  coordinates x t;
  fields A[2];
  gammas = [1];
  eq: 3/2 * d(x,t) A[1] - A[2] = 0;
}
";
        let s = parse(src).unwrap();
        let text = serialize(&s).unwrap();
        assert!(text.contains("fields A[2];"));
        assert!(text.contains("gammas = [1];"));
        assert!(text.contains("3/2 * d(x,t) A[1]"));
        assert_eq!(parse(&text).unwrap(), s);
    }
}
