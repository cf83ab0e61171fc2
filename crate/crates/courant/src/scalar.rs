//! Exact scalars: rational and Gaussian-rational numbers.
//!
//! Every coefficient in this crate is a [`Scalar`]: an exact element of ℚ(i)
//! stored as a pair of arbitrary-precision rationals. Charts tagged
//! [`ScalarField::Rational`] only ever hold scalars with zero imaginary part;
//! the expression parser enforces this at the boundary.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficient field tag carried by a chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarField {
    /// Exact rationals ℚ.
    Rational,
    /// Exact Gaussian rationals ℚ(i).
    GaussianRational,
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarField::Rational => write!(f, "rational"),
            ScalarField::GaussianRational => write!(f, "gaussian-rational"),
        }
    }
}

/// An exact element of ℚ(i): `re + im·i` with `re`, `im` ∈ ℚ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Scalar { re: BigRational::one(), im: BigRational::zero() }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    /// `p/q` as an exact rational. Panics if `q == 0`.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar {
            re: BigRational::new(BigInt::from(p), BigInt::from(q)),
            im: BigRational::zero(),
        }
    }

    /// `a + b·i` from two rationals.
    pub fn from_parts(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    /// One half; the most common non-integer constant in the bracket calculus.
    pub fn half() -> Self {
        Scalar::from_ratio(1, 2)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Scalar { re: &self.re / &norm, im: -(&self.im / &norm) })
    }

    /// Exact division; panics on zero divisor.
    pub fn div(&self, other: &Scalar) -> Self {
        self * &other.inv().expect("division by zero scalar")
    }

    /// Integer power (non-negative).
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// True when printing this scalar in front of a monomial needs parentheses
    /// (i.e. it prints as a sum `a+b*i`).
    pub fn needs_parens(&self) -> bool {
        !self.re.is_zero() && !self.im.is_zero()
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Canonical form: `p/q`, `i`, `-2*i`, `1+2*i`, `1/2-i`, `0`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if !self.re.is_zero() {
            fmt_rational(&self.re, f)?;
        }
        if !self.im.is_zero() {
            if !self.re.is_zero() && self.im.is_positive() {
                write!(f, "+")?;
            }
            if self.im == -BigRational::one() {
                write!(f, "-")?;
            } else if !self.im.is_one() {
                fmt_rational(&self.im, f)?;
                write!(f, "*")?;
            }
            write!(f, "i")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        let a = Scalar::from_ratio(1, 2);
        let b = Scalar::from_ratio(1, 3);
        assert_eq!(&a + &b, Scalar::from_ratio(5, 6));
        assert_eq!(&a * &b, Scalar::from_ratio(1, 6));
        assert_eq!(&a - &a, Scalar::zero());
    }

    #[test]
    fn gaussian_arithmetic() {
        let i = Scalar::i();
        assert_eq!(&i * &i, Scalar::from_int(-1));
        let z = &Scalar::from_int(1) + &i; // 1+i
        let w = &z * &z.conj(); // |1+i|^2 = 2
        assert_eq!(w, Scalar::from_int(2));
        assert_eq!(&z * &z.inv().unwrap(), Scalar::one());
    }

    #[test]
    fn display_canonical() {
        assert_eq!(Scalar::from_int(-3).to_string(), "-3");
        assert_eq!(Scalar::from_ratio(3, -6).to_string(), "-1/2");
        assert_eq!(Scalar::i().to_string(), "i");
        assert_eq!((&Scalar::from_int(0) - &Scalar::i()).to_string(), "-i");
        let z = &Scalar::from_int(1) + &(&Scalar::from_int(2) * &Scalar::i());
        assert_eq!(z.to_string(), "1+2*i");
        let w = &Scalar::from_ratio(1, 2) - &Scalar::i();
        assert_eq!(w.to_string(), "1/2-i");
        assert_eq!(Scalar::zero().to_string(), "0");
    }
}
