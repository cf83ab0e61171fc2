//! Exact multivariate polynomials in canonical form.
//!
//! A [`Polynomial`] is a map from exponent multi-indices to nonzero
//! [`Scalar`]s; zero coefficients are never stored, so structural equality is
//! semantic equality. Monomials order by graded lexicographic comparison
//! (total degree first, then exponents, earlier variables weighing more),
//! which fixes the canonical printing order.

use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent multi-index of a monomial; length equals the chart dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn unit(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order, ascending.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact polynomial over ℚ(i) in `nvars` variables, in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Polynomial::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::unit(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial::constant(nvars, Scalar::one())
    }

    /// The coordinate variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        let mut p = Polynomial::zero(nvars);
        p.terms.insert(Monomial(exps), Scalar::one());
        p
    }

    /// Build from raw (exponents, coefficient) pairs; merges and drops zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), nvars, "exponent arity mismatch");
            p.add_term(Monomial(exps), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Iterate terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        let mut p = Polynomial::zero(self.nvars);
        for (m, a) in &self.terms {
            p.terms.insert(m.clone(), a * c);
        }
        p
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Polynomial::one(self.nvars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.nvars, "variable index out of range");
        let mut p = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] = e - 1;
            p.add_term(Monomial(exps), c.scale_by_u32(e));
        }
        p
    }

    /// Apply a scalar map to every coefficient (dropping any zeros produced).
    pub fn map_scalars(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let mut p = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c));
        }
        p
    }

    /// Conjugation with a variable involution: coefficients conjugate and
    /// variable `j` maps to `perm[j]`. `perm` must be an involution.
    pub fn conjugate(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nvars, "involution arity mismatch");
        let mut p = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; self.nvars];
            for (j, &e) in m.0.iter().enumerate() {
                exps[perm[j]] += e;
            }
            p.add_term(Monomial(exps), c.conj());
        }
        p
    }

    /// Substitute polynomials for the variables (used by tests as an
    /// independent evaluation oracle). `subs[i]` replaces `x_i`.
    pub fn substitute(&self, subs: &[Polynomial]) -> Polynomial {
        assert_eq!(subs.len(), self.nvars);
        let out_vars = subs.first().map(|p| p.nvars).unwrap_or(0);
        let mut acc = Polynomial::zero(out_vars);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(out_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                term = &term * &subs[i].pow(e);
            }
            acc = &acc + &term;
        }
        acc
    }
}

impl Scalar {
    fn scale_by_u32(&self, n: u32) -> Scalar {
        self * &Scalar::from_int(n as i64)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), -c);
        }
        p
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.map_scalars(|c| -c)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut p = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let exps: Vec<u32> =
                    m1.0.iter().zip(&m2.0).map(|(a, b)| a + b).collect();
                p.add_term(Monomial(exps), c1 * c2);
            }
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Polynomial {
        Polynomial::var(2, 0)
    }
    fn y() -> Polynomial {
        Polynomial::var(2, 1)
    }

    #[test]
    fn ring_identities() {
        let p = &(&x() + &y()) * &(&x() - &y()); // x^2 - y^2
        let q = &(&x() * &x()) - &(&y() * &y());
        assert_eq!(p, q);
        assert!((&p - &q).is_zero());
    }

    #[test]
    fn canonical_no_zero_terms() {
        let p = &x() - &x();
        assert!(p.is_zero());
        assert_eq!(p.terms().count(), 0);
        let c = Polynomial::constant(2, Scalar::zero());
        assert!(c.is_zero());
    }

    #[test]
    fn partial_derivatives() {
        // d/dx (x^2 y) = 2 x y, d/dy (x^2 y) = x^2
        let p = &(&x() * &x()) * &y();
        assert_eq!(p.partial(0), &Polynomial::constant(2, Scalar::from_int(2)) * &(&x() * &y()));
        assert_eq!(p.partial(1), &x() * &x());
        // mixed partials commute
        assert_eq!(p.partial(0).partial(1), p.partial(1).partial(0));
    }

    #[test]
    fn graded_lex_order() {
        // x > y in the same degree; degree dominates.
        let m_x = Monomial(vec![1, 0]);
        let m_y = Monomial(vec![0, 1]);
        let m_xy = Monomial(vec![1, 1]);
        let m_x2 = Monomial(vec![2, 0]);
        assert!(m_x > m_y);
        assert!(m_x2 > m_xy);
        assert!(m_xy > m_x);
    }

    #[test]
    fn zero_variable_chart() {
        // Polynomials over a point are plain scalars.
        let c = Polynomial::constant(0, Scalar::from_int(3));
        let d = Polynomial::constant(0, Scalar::from_ratio(1, 3));
        assert_eq!((&c * &d).as_constant(), Some(Scalar::one()));
        assert_eq!(c.total_degree(), 0);
    }

    #[test]
    fn conjugation_involution() {
        // Two variables acting as a conjugate pair (z, zb).
        let z = Polynomial::var(2, 0);
        let zb = Polynomial::var(2, 1);
        let i = Polynomial::constant(2, Scalar::i());
        let p = &(&i * &z) + &(&zb * &zb); // i z + zb^2
        let perm = vec![1, 0];
        let q = p.conjugate(&perm); // -i zb + z^2
        let expect = &(&(-&i) * &zb) + &(&z * &z);
        assert_eq!(q, expect);
        assert_eq!(q.conjugate(&perm), p);
    }

    #[test]
    fn substitution_oracle() {
        // p(x,y) = x^2 + y, substitute x -> y, y -> x*y.
        let p = &(&x() * &x()) + &y();
        let s = p.substitute(&[y(), &x() * &y()]);
        let expect = &(&y() * &y()) + &(&x() * &y());
        assert_eq!(s, expect);
    }
}
