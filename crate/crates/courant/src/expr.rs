//! Expression grammar: exact parsing and canonical printing for polynomials,
//! frame sections, differential forms, and matrices.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := ('+'|'-')? term (('+'|'-') term)*
//! term    := factor (('*' factor) | factor)*      juxtaposition multiplies
//! factor  := atom ('^' INT)?
//! atom    := INT ('/' INT)?                        exact rational
//!          | 'i'                                   imaginary unit (ℚ(i) charts)
//!          | IDENT                                 coordinate or frame label
//!          | 'd' '[' IDENT (',' IDENT)* ']'        coordinate form dx_{i1}∧…
//!          | '(' expr ')'
//! ```
//!
//! There is no division operator: `/` only joins two integer literals into a
//! rational. Canonical printing emits terms in descending graded
//! lexicographic order with minus signs absorbed into leading coefficients;
//! printing then re-parsing is the identity on values.

use crate::calculus::DiffForm;
use crate::chart::ChartContext;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{Scalar, ScalarField};
use num::{BigInt, BigRational, Signed, Zero};

// ---------------------------------------------------------------------------
// Tokens
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Eof,
}

#[derive(Debug, Clone)]
struct SpTok {
    tok: Tok,
    offset: usize,
}

fn tokenize(s: &str) -> Result<Vec<SpTok>> {
    let bytes = s.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
            }
            '+' => {
                toks.push(SpTok { tok: Tok::Plus, offset: start });
                i += 1;
            }
            '-' => {
                toks.push(SpTok { tok: Tok::Minus, offset: start });
                i += 1;
            }
            '*' => {
                toks.push(SpTok { tok: Tok::Star, offset: start });
                i += 1;
            }
            '^' => {
                toks.push(SpTok { tok: Tok::Caret, offset: start });
                i += 1;
            }
            '/' => {
                toks.push(SpTok { tok: Tok::Slash, offset: start });
                i += 1;
            }
            '(' => {
                toks.push(SpTok { tok: Tok::LParen, offset: start });
                i += 1;
            }
            ')' => {
                toks.push(SpTok { tok: Tok::RParen, offset: start });
                i += 1;
            }
            '[' => {
                toks.push(SpTok { tok: Tok::LBracket, offset: start });
                i += 1;
            }
            ']' => {
                toks.push(SpTok { tok: Tok::RBracket, offset: start });
                i += 1;
            }
            ',' => {
                toks.push(SpTok { tok: Tok::Comma, offset: start });
                i += 1;
            }
            ';' => {
                toks.push(SpTok { tok: Tok::Semi, offset: start });
                i += 1;
            }
            '0'..='9' => {
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let text = &s[start..i];
                let n = text.parse::<BigInt>().map_err(|_| Error::Syntax {
                    offset: start,
                    message: format!("invalid integer literal `{text}`"),
                })?;
                toks.push(SpTok { tok: Tok::Int(n), offset: start });
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push(SpTok { tok: Tok::Ident(s[start..i].to_string()), offset: start });
            }
            _ => {
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    toks.push(SpTok { tok: Tok::Eof, offset: s.len() });
    Ok(toks)
}

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

/// Typed intermediate value of the expression evaluator.
#[derive(Debug, Clone)]
enum Value {
    Poly(Polynomial),
    Section(Vec<Polynomial>),
    Form(DiffForm),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Poly(_) => "polynomial",
            Value::Section(_) => "section",
            Value::Form(_) => "form",
        }
    }
}

/// Name-resolution scope for expressions.
pub struct Scope<'a> {
    pub chart: &'a ChartContext,
    /// Frame labels usable as section basis elements; empty when sections are
    /// not expected.
    pub labels: &'a [String],
}

struct Parser<'a> {
    toks: Vec<SpTok>,
    pos: usize,
    scope: &'a Scope<'a>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].offset
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.err(&format!("expected {what}")))
        }
    }

    fn err(&self, message: &str) -> Error {
        Error::Syntax { offset: self.offset(), message: message.to_string() }
    }

    fn nvars(&self) -> usize {
        self.scope.chart.dim()
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Int(_) | Tok::Ident(_) | Tok::LParen)
    }

    fn add(&self, a: Value, b: Value, offset: usize) -> Result<Value> {
        let fail = |a: &Value, b: &Value| Error::Syntax {
            offset,
            message: format!("cannot add {} and {}", a.kind(), b.kind()),
        };
        match (a, b) {
            (Value::Poly(p), Value::Poly(q)) => Ok(Value::Poly(&p + &q)),
            (Value::Section(p), Value::Section(q)) => {
                if p.len() != q.len() {
                    return Err(Error::Internal("section length mismatch".into()));
                }
                Ok(Value::Section(p.iter().zip(&q).map(|(a, b)| a + b).collect()))
            }
            (Value::Form(w), Value::Form(v)) => {
                if w.degree() != v.degree() {
                    return Err(Error::Syntax {
                        offset,
                        message: format!(
                            "cannot add forms of degree {} and {}",
                            w.degree(),
                            v.degree()
                        ),
                    });
                }
                Ok(Value::Form(w.add(&v)))
            }
            // The zero polynomial coerces into any bundle.
            (Value::Poly(p), v) if p.is_zero() => Ok(v),
            (v, Value::Poly(p)) if p.is_zero() => Ok(v),
            (a, b) => Err(fail(&a, &b)),
        }
    }

    fn mul(&self, a: Value, b: Value, offset: usize) -> Result<Value> {
        match (a, b) {
            (Value::Poly(p), Value::Poly(q)) => Ok(Value::Poly(&p * &q)),
            (Value::Poly(p), Value::Section(s)) | (Value::Section(s), Value::Poly(p)) => {
                Ok(Value::Section(s.iter().map(|c| c * &p).collect()))
            }
            (Value::Poly(p), Value::Form(w)) | (Value::Form(w), Value::Poly(p)) => {
                Ok(Value::Form(w.scale(&p)))
            }
            (Value::Form(w), Value::Form(v)) => Ok(Value::Form(w.wedge(&v))),
            (a, b) => Err(Error::Syntax {
                offset,
                message: format!("cannot multiply {} and {}", a.kind(), b.kind()),
            }),
        }
    }

    fn neg(&self, a: Value) -> Value {
        match a {
            Value::Poly(p) => Value::Poly(-&p),
            Value::Section(s) => Value::Section(s.iter().map(|c| -c).collect()),
            Value::Form(w) => Value::Form(w.neg()),
        }
    }

    fn parse_expr(&mut self) -> Result<Value> {
        let mut negate = false;
        match self.peek() {
            Tok::Minus => {
                self.bump();
                negate = true;
            }
            Tok::Plus => {
                self.bump();
            }
            _ => {}
        }
        let mut acc = self.parse_term()?;
        if negate {
            acc = self.neg(acc);
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    let off = self.offset();
                    self.bump();
                    let t = self.parse_term()?;
                    acc = self.add(acc, t, off)?;
                }
                Tok::Minus => {
                    let off = self.offset();
                    self.bump();
                    let t = self.parse_term()?;
                    let t = self.neg(t);
                    acc = self.add(acc, t, off)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<Value> {
        let mut acc = self.parse_factor()?;
        loop {
            if *self.peek() == Tok::Star {
                let off = self.offset();
                self.bump();
                let f = self.parse_factor()?;
                acc = self.mul(acc, f, off)?;
            } else if self.starts_factor() {
                let off = self.offset();
                let f = self.parse_factor()?;
                acc = self.mul(acc, f, off)?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Value> {
        let base = self.parse_atom()?;
        if *self.peek() == Tok::Caret {
            let off = self.offset();
            self.bump();
            let exp = match self.bump() {
                Tok::Int(n) => n,
                _ => {
                    return Err(Error::Syntax {
                        offset: off,
                        message: "exponent must be a non-negative integer".into(),
                    })
                }
            };
            if exp.is_negative() {
                return Err(Error::Syntax {
                    offset: off,
                    message: "negative exponents are not polynomial".into(),
                });
            }
            let exp: u32 = exp.to_string().parse().map_err(|_| Error::Syntax {
                offset: off,
                message: "exponent too large".into(),
            })?;
            if *self.peek() == Tok::Caret {
                return Err(self.err("chained `^` needs parentheses"));
            }
            match base {
                Value::Poly(p) => return Ok(Value::Poly(p.pow(exp))),
                other => {
                    return Err(Error::Syntax {
                        offset: off,
                        message: format!("cannot raise a {} to a power", other.kind()),
                    })
                }
            }
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Value> {
        let off = self.offset();
        match self.bump() {
            Tok::Int(n) => {
                // Optional `/ INT` continuation forms an exact rational.
                let mut value = BigRational::from_integer(n);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let d_off = self.offset();
                    match self.bump() {
                        Tok::Int(d) => {
                            if d == BigInt::from(0) {
                                return Err(Error::Syntax {
                                    offset: d_off,
                                    message: "zero denominator".into(),
                                });
                            }
                            value /= BigRational::from_integer(d);
                        }
                        _ => {
                            return Err(Error::Syntax {
                                offset: d_off,
                                message: "expected integer denominator after `/`".into(),
                            })
                        }
                    }
                }
                Ok(Value::Poly(Polynomial::constant(
                    self.nvars(),
                    Scalar::from_parts(value, BigRational::from_integer(BigInt::from(0))),
                )))
            }
            Tok::Ident(name) if name == "i" => {
                if self.scope.chart.field() != ScalarField::GaussianRational {
                    return Err(Error::Syntax {
                        offset: off,
                        message: "the imaginary unit `i` needs a gaussian-rational chart".into(),
                    });
                }
                Ok(Value::Poly(Polynomial::constant(self.nvars(), Scalar::i())))
            }
            Tok::Ident(name) if name == "d" => {
                self.expect(Tok::LBracket, "`[` after form constructor `d`")?;
                let mut form: Option<DiffForm> = None;
                loop {
                    let c_off = self.offset();
                    let coord = match self.bump() {
                        Tok::Ident(c) => c,
                        _ => {
                            return Err(Error::Syntax {
                                offset: c_off,
                                message: "expected coordinate name in `d[...]`".into(),
                            })
                        }
                    };
                    let idx = self.scope.chart.index_of(&coord).ok_or(Error::UnknownName {
                        offset: c_off,
                        name: coord.clone(),
                    })?;
                    let dxi = DiffForm::coordinate(self.nvars(), idx);
                    form = Some(match form {
                        None => dxi,
                        Some(f) => f.wedge(&dxi),
                    });
                    match self.bump() {
                        Tok::Comma => continue,
                        Tok::RBracket => break,
                        _ => {
                            return Err(Error::Syntax {
                                offset: c_off,
                                message: "expected `,` or `]` in `d[...]`".into(),
                            })
                        }
                    }
                }
                Ok(Value::Form(form.expect("d[..] has at least one index")))
            }
            Tok::Ident(name) => {
                if let Some(idx) = self.scope.chart.index_of(&name) {
                    return Ok(Value::Poly(self.scope.chart.var(idx)));
                }
                if let Some(k) = self.scope.labels.iter().position(|l| *l == name) {
                    let mut coeffs =
                        vec![Polynomial::zero(self.nvars()); self.scope.labels.len()];
                    coeffs[k] = Polynomial::one(self.nvars());
                    return Ok(Value::Section(coeffs));
                }
                Err(Error::UnknownName { offset: off, name })
            }
            Tok::LParen => {
                let v = self.parse_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(v)
            }
            _ => Err(Error::Syntax { offset: off, message: "expected an operand".into() }),
        }
    }

    fn finish(&mut self, v: Value) -> Result<Value> {
        if *self.peek() != Tok::Eof {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(v)
    }
}

fn run_parser(scope: &Scope, s: &str) -> Result<Value> {
    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0, scope };
    let v = p.parse_expr()?;
    p.finish(v)
}

// ---------------------------------------------------------------------------
// Public parse entry points
// ---------------------------------------------------------------------------

/// Parse a polynomial over the chart.
pub fn parse_polynomial(chart: &ChartContext, s: &str) -> Result<Polynomial> {
    let scope = Scope { chart, labels: &[] };
    match run_parser(&scope, s)? {
        Value::Poly(p) => Ok(p),
        v => Err(Error::Syntax {
            offset: 0,
            message: format!("expected a polynomial, found a {}", v.kind()),
        }),
    }
}

/// Parse a constant scalar (a degree-0 polynomial).
pub fn parse_scalar(chart: &ChartContext, s: &str) -> Result<Scalar> {
    let p = parse_polynomial(chart, s)?;
    p.as_constant().ok_or_else(|| Error::Syntax {
        offset: 0,
        message: "expected a constant scalar".into(),
    })
}

/// Parse a section as a coefficient vector over the given frame labels.
pub fn parse_section_coeffs(
    chart: &ChartContext,
    labels: &[String],
    s: &str,
) -> Result<Vec<Polynomial>> {
    let scope = Scope { chart, labels };
    match run_parser(&scope, s)? {
        Value::Section(c) => Ok(c),
        Value::Poly(p) if p.is_zero() => Ok(vec![chart.zero_poly(); labels.len()]),
        v => Err(Error::Syntax {
            offset: 0,
            message: format!("expected a frame section, found a {}", v.kind()),
        }),
    }
}

/// Parse a homogeneous differential form of the expected degree.
pub fn parse_form(chart: &ChartContext, degree: usize, s: &str) -> Result<DiffForm> {
    let scope = Scope { chart, labels: &[] };
    match run_parser(&scope, s)? {
        Value::Form(w) if w.degree() == degree => Ok(w),
        Value::Form(w) => Err(Error::Syntax {
            offset: 0,
            message: format!("expected a degree-{} form, found degree {}", degree, w.degree()),
        }),
        Value::Poly(p) if p.is_zero() => Ok(DiffForm::zero(chart.dim(), degree)),
        Value::Poly(p) if degree == 0 => Ok(DiffForm::from_function(&p)),
        v => Err(Error::Syntax {
            offset: 0,
            message: format!("expected a form, found a {}", v.kind()),
        }),
    }
}

/// Parse a row vector `[p1, p2, …]` of polynomials (possibly empty `[]`).
pub fn parse_poly_row(chart: &ChartContext, s: &str) -> Result<Vec<Polynomial>> {
    let m = parse_poly_matrix(chart, s)?;
    match m.len() {
        0 => Ok(Vec::new()),
        1 => Ok(m.into_iter().next().unwrap()),
        n => Err(Error::Syntax {
            offset: 0,
            message: format!("expected a single row, found {n} rows"),
        }),
    }
}

/// Parse a matrix `[a, b; c, d]` of polynomials. `[]` is the empty matrix.
pub fn parse_poly_matrix(chart: &ChartContext, s: &str) -> Result<Vec<Vec<Polynomial>>> {
    let scope = Scope { chart, labels: &[] };
    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0, scope: &scope };
    p.expect(Tok::LBracket, "`[`")?;
    let mut rows: Vec<Vec<Polynomial>> = Vec::new();
    if *p.peek() == Tok::RBracket {
        p.bump();
        let _ = p.finish(Value::Poly(chart.zero_poly()))?;
        return Ok(rows);
    }
    'rows: loop {
        let mut row = Vec::new();
        loop {
            let off = p.offset();
            let v = p.parse_expr()?;
            match v {
                Value::Poly(q) => row.push(q),
                v => {
                    return Err(Error::Syntax {
                        offset: off,
                        message: format!("matrix entries must be polynomials, found a {}", v.kind()),
                    })
                }
            }
            match p.bump() {
                Tok::Comma => continue,
                Tok::Semi => {
                    rows.push(row);
                    continue 'rows;
                }
                Tok::RBracket => {
                    rows.push(row);
                    break 'rows;
                }
                _ => return Err(p.err("expected `,`, `;`, or `]` in matrix")),
            }
        }
    }
    let width = rows[0].len();
    for r in &rows {
        if r.len() != width {
            return Err(Error::ShapeMismatch("ragged matrix rows".into()));
        }
    }
    let _ = p.finish(Value::Poly(chart.zero_poly()))?;
    Ok(rows)
}

/// Parse a matrix of constant scalars.
pub fn parse_scalar_matrix(chart: &ChartContext, s: &str) -> Result<Vec<Vec<Scalar>>> {
    let m = parse_poly_matrix(chart, s)?;
    m.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|p| {
                    p.as_constant().ok_or_else(|| Error::Syntax {
                        offset: 0,
                        message: "matrix entry must be a constant scalar".into(),
                    })
                })
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Canonical printing
// ---------------------------------------------------------------------------

fn monomial_string(chart: &ChartContext, exps: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in exps.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(chart.name(i).to_string()),
            _ => parts.push(format!("{}^{}", chart.name(i), e)),
        }
    }
    parts.join("*")
}

/// True when the scalar should be treated as "negative" for sign absorption:
/// negative real part, or zero real part with negative imaginary part.
fn scalar_is_neg(c: &Scalar) -> bool {
    if !c.re.is_zero() {
        c.re.is_negative()
    } else {
        c.im.is_negative()
    }
}

/// Canonical polynomial rendering; terms descend in graded-lex order.
pub fn poly_to_string(chart: &ChartContext, p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let terms: Vec<_> = p.terms().collect();
    for (k, &(m, c)) in terms.iter().rev().enumerate() {
        let mono = monomial_string(chart, &m.0);
        let (neg, c_abs) = if c.needs_parens() {
            (false, c.clone())
        } else if scalar_is_neg(c) {
            (true, -c)
        } else {
            (false, c.clone())
        };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let c_str = if c_abs.needs_parens() {
            format!("({c_abs})")
        } else {
            c_abs.to_string()
        };
        if mono.is_empty() {
            out.push_str(&c_str);
        } else if c_abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&c_str);
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

/// Coefficient prefix for a section/form summand: `(sign, "…*")`.
fn coeff_prefix(chart: &ChartContext, p: &Polynomial) -> (bool, String) {
    if let Some(c) = p.as_constant() {
        if c.is_one() {
            return (false, String::new());
        }
        if (-&c).is_one() {
            return (true, String::new());
        }
        if c.needs_parens() {
            return (false, format!("({c})*"));
        }
        if scalar_is_neg(&c) {
            return (true, format!("{}*", -&c));
        }
        return (false, format!("{c}*"));
    }
    if p.terms().count() == 1 {
        let s = poly_to_string(chart, p);
        if let Some(rest) = s.strip_prefix('-') {
            return (true, format!("{rest}*"));
        }
        return (false, format!("{s}*"));
    }
    (false, format!("({})*", poly_to_string(chart, p)))
}

fn joined_terms(parts: Vec<(bool, String)>) -> String {
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (neg, body)) in parts.iter().enumerate() {
        if k == 0 {
            if *neg {
                out.push('-');
            }
        } else if *neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(body);
    }
    out
}

/// Canonical section rendering over frame labels.
pub fn section_to_string(chart: &ChartContext, labels: &[String], coeffs: &[Polynomial]) -> String {
    assert_eq!(labels.len(), coeffs.len(), "label/coefficient count mismatch");
    let mut parts = Vec::new();
    for (label, c) in labels.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        let (neg, prefix) = coeff_prefix(chart, c);
        parts.push((neg, format!("{prefix}{label}")));
    }
    joined_terms(parts)
}

/// Canonical form rendering as a sum of `p*d[...]` terms.
pub fn form_to_string(chart: &ChartContext, w: &DiffForm) -> String {
    if w.degree() == 0 {
        return poly_to_string(chart, &w.coefficient(&[]));
    }
    let mut parts = Vec::new();
    for (idx, c) in w.terms() {
        let names: Vec<&str> = idx.iter().map(|&i| chart.name(i)).collect();
        let basis = format!("d[{}]", names.join(","));
        let (neg, prefix) = coeff_prefix(chart, c);
        parts.push((neg, format!("{prefix}{basis}")));
    }
    joined_terms(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::VectorField;

    fn chart() -> ChartContext {
        ChartContext::rational(&["x", "y", "z"]).unwrap()
    }

    fn gchart() -> ChartContext {
        ChartContext::new(&["z1", "zb1"], ScalarField::GaussianRational).unwrap()
    }

    #[test]
    fn parse_polynomials() {
        let c = chart();
        let p = parse_polynomial(&c, "x^2*y - 2*x + 1/2").unwrap();
        let q = parse_polynomial(&c, "(x*x*y) + 1/2 - x - x").unwrap();
        assert_eq!(p, q);
        // juxtaposition multiplies
        let r = parse_polynomial(&c, "2x y").unwrap();
        assert_eq!(r, parse_polynomial(&c, "2*x*y").unwrap());
        // rational with spaces around the slash
        assert_eq!(parse_polynomial(&c, "1 / 2").unwrap(), parse_polynomial(&c, "1/2").unwrap());
        // unary minus binds looser than ^
        assert_eq!(
            parse_polynomial(&c, "-x^2").unwrap(),
            -&parse_polynomial(&c, "x^2").unwrap()
        );
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let c = chart();
        match parse_polynomial(&c, "2x +") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse_polynomial(&c, "x / 2") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse_polynomial(&c, "x + w") {
            Err(Error::UnknownName { name, offset }) => {
                assert_eq!(name, "w");
                assert_eq!(offset, 4);
            }
            other => panic!("expected unknown name, got {other:?}"),
        }
    }

    #[test]
    fn imaginary_unit_requires_gaussian_chart() {
        assert!(parse_polynomial(&chart(), "i*x").is_err());
        let p = parse_polynomial(&gchart(), "i*z1 + zb1").unwrap();
        assert!(!p.is_zero());
        let r = parse_polynomial(&gchart(), "i^2 + 1").unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn parse_sections() {
        let c = chart();
        let labels: Vec<String> = vec!["e_x".into(), "d_x".into()];
        let s = parse_section_coeffs(&c, &labels, "x*e_x - (y + 1)*d_x").unwrap();
        assert_eq!(s[0], parse_polynomial(&c, "x").unwrap());
        assert_eq!(s[1], parse_polynomial(&c, "-y - 1").unwrap());
        let z = parse_section_coeffs(&c, &labels, "0").unwrap();
        assert!(z.iter().all(|p| p.is_zero()));
        assert!(parse_section_coeffs(&c, &labels, "e_x*d_x").is_err());
    }

    #[test]
    fn parse_forms() {
        let c = chart();
        let h = parse_form(&c, 3, "d[x,y,z]").unwrap();
        let h2 = parse_form(&c, 3, "d[x]*d[y]*d[z]").unwrap();
        assert_eq!(h, h2);
        // antisymmetry through the wedge spelling
        let w = parse_form(&c, 2, "d[y]*d[x] + d[x,y]").unwrap();
        assert!(w.is_zero());
        assert!(parse_form(&c, 3, "d[x,y]").is_err());
        let z = parse_form(&c, 3, "0").unwrap();
        assert!(z.is_zero() && z.degree() == 3);
    }

    #[test]
    fn parse_matrices() {
        let c = chart();
        let m = parse_poly_matrix(&c, "[0, 1; 1, 0]").unwrap();
        assert_eq!(m.len(), 2);
        assert!(m[0][0].is_zero());
        let empty = parse_poly_matrix(&c, "[]").unwrap();
        assert!(empty.is_empty());
        assert!(parse_poly_matrix(&c, "[1, 2; 3]").is_err());
        let row = parse_poly_row(&c, "[x, y*z, 0]").unwrap();
        assert_eq!(row.len(), 3);
    }

    #[test]
    fn print_parse_round_trip() {
        let c = chart();
        let samples = [
            "0",
            "1",
            "-1/2",
            "x",
            "-x",
            "x^2*y - 2*x + 1/2",
            "x*y*z - x*y + x - 1",
            "2*x^3 - 1/3",
        ];
        for s in samples {
            let p = parse_polynomial(&c, s).unwrap();
            assert_eq!(poly_to_string(&c, &p), *s, "canonical form of `{s}`");
            let q = parse_polynomial(&c, &poly_to_string(&c, &p)).unwrap();
            assert_eq!(p, q);
        }
    }

    #[test]
    fn print_parse_round_trip_gaussian() {
        let c = gchart();
        let samples = ["i", "-i", "2*i", "(1+i)*z1", "z1*zb1 - i", "(1/2-i)*z1^2 + 2*i"];
        for s in samples {
            let p = parse_polynomial(&c, s).unwrap();
            assert_eq!(poly_to_string(&c, &p), *s, "canonical form of `{s}`");
        }
    }

    #[test]
    fn print_sections_and_forms() {
        let c = chart();
        let labels: Vec<String> = vec!["a".into(), "b".into()];
        let coeffs = parse_section_coeffs(&c, &labels, "x*a - b").unwrap();
        assert_eq!(section_to_string(&c, &labels, &coeffs), "x*a - b");
        let coeffs = parse_section_coeffs(&c, &labels, "(x + 1)*a + 2*b").unwrap();
        assert_eq!(section_to_string(&c, &labels, &coeffs), "(x + 1)*a + 2*b");
        let w = parse_form(&c, 2, "x*d[x,y] - d[y,z]").unwrap();
        assert_eq!(form_to_string(&c, &w), "x*d[x,y] - d[y,z]");
        let vf = VectorField::from_components(vec![
            parse_polynomial(&c, "x").unwrap(),
            parse_polynomial(&c, "-1").unwrap(),
            parse_polynomial(&c, "0").unwrap(),
        ]);
        assert_eq!(crate::calculus::vector_field_to_string(&c, &vf), "[x, -1, 0]");
    }
}
