//! Polynomial coordinate charts.
//!
//! A [`ChartContext`] names the coordinates and fixes the coefficient field.
//! Everything else in the crate (fields, forms, structures) carries its chart
//! by value; two objects interoperate only when their charts are equal.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{Scalar, ScalarField};

/// Identifiers with a reserved meaning in the expression grammar.
pub const RESERVED_NAMES: &[&str] = &["i", "d"];

/// A coordinate chart: ordered coordinate names plus the coefficient field.
///
/// Dimension zero is allowed and models a point (polynomials degenerate to
/// scalars; all derivatives vanish).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartContext {
    names: Vec<String>,
    field: ScalarField,
}

/// True when `s` is usable as a coordinate or frame label: an ASCII
/// identifier that is not reserved by the grammar.
pub fn is_valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    let head_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    head_ok
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !RESERVED_NAMES.contains(&s)
}

impl ChartContext {
    /// A chart with the given coordinate names. Names must be distinct valid
    /// identifiers and must avoid the reserved words `i` and `d`.
    pub fn new(names: &[&str], field: ScalarField) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        for n in &names {
            if !is_valid_name(n) {
                return Err(Error::ShapeMismatch(format!("invalid coordinate name `{n}`")));
            }
        }
        for (k, n) in names.iter().enumerate() {
            if names[..k].contains(n) {
                return Err(Error::ShapeMismatch(format!("duplicate coordinate name `{n}`")));
            }
        }
        Ok(ChartContext { names, field })
    }

    /// Convenience: a rational chart.
    pub fn rational(names: &[&str]) -> Result<Self> {
        ChartContext::new(names, ScalarField::Rational)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// Index of a coordinate by name.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn zero_poly(&self) -> Polynomial {
        Polynomial::zero(self.dim())
    }

    pub fn one_poly(&self) -> Polynomial {
        Polynomial::one(self.dim())
    }

    pub fn constant(&self, c: Scalar) -> Polynomial {
        Polynomial::constant(self.dim(), c)
    }

    /// The coordinate function `x_i` as a polynomial.
    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.dim(), i)
    }

    /// Reject scalars with imaginary part over rational charts.
    pub fn admit_scalar(&self, c: &Scalar) -> Result<()> {
        if self.field == ScalarField::Rational && !c.is_real() {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Reject polynomials with non-real coefficients over rational charts.
    pub fn admit_poly(&self, p: &Polynomial) -> Result<()> {
        if self.field == ScalarField::Rational {
            for (_, c) in p.terms() {
                if !c.is_real() {
                    return Err(Error::FieldMismatch);
                }
            }
        }
        Ok(())
    }

    /// Error helper used by chart-compatibility checks across the crate.
    pub fn expect_same(&self, other: &ChartContext, what: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ChartMismatch(what.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_validation() {
        assert!(ChartContext::rational(&["x", "y"]).is_ok());
        assert!(ChartContext::rational(&["x", "x"]).is_err());
        assert!(ChartContext::rational(&["i"]).is_err());
        assert!(ChartContext::rational(&["d"]).is_err());
        assert!(ChartContext::rational(&["2x"]).is_err());
        assert!(ChartContext::rational(&[]).is_ok()); // point chart
    }

    #[test]
    fn field_admission() {
        let real = ChartContext::rational(&["x"]).unwrap();
        let cx = ChartContext::new(&["z"], ScalarField::GaussianRational).unwrap();
        assert!(real.admit_scalar(&Scalar::i()).is_err());
        assert!(cx.admit_scalar(&Scalar::i()).is_ok());
        let p = Polynomial::constant(1, Scalar::i());
        assert!(real.admit_poly(&p).is_err());
        assert!(cx.admit_poly(&p).is_ok());
    }
}
