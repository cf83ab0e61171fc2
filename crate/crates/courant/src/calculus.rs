//! Polynomial vector fields and differential forms with exact exterior
//! calculus: Lie bracket, exterior derivative, interior product, Lie
//! derivative, and wedge product.
//!
//! Index convention for the double interior product: [`DiffForm::insert_pair`]
//! computes `ω(X, Y, —)`, i.e. `X` is inserted into the *first* slot, so
//! `insert_pair(X, Y, ω) = ι_Y (ι_X ω)`.

use crate::chart::ChartContext;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// A polynomial vector field: one component per coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    comps: Vec<Polynomial>,
}

impl VectorField {
    pub fn zero(nvars: usize) -> Self {
        VectorField { comps: (0..nvars).map(|_| Polynomial::zero(nvars)).collect() }
    }

    /// The coordinate field ∂/∂x_i.
    pub fn coordinate(nvars: usize, i: usize) -> Self {
        let mut v = VectorField::zero(nvars);
        v.comps[i] = Polynomial::one(nvars);
        v
    }

    pub fn from_components(comps: Vec<Polynomial>) -> Self {
        let n = comps.len();
        for c in &comps {
            assert_eq!(c.nvars(), n, "component arity mismatch");
        }
        VectorField { comps }
    }

    pub fn nvars(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        assert_eq!(self.nvars(), other.nvars());
        VectorField {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        assert_eq!(self.nvars(), other.nvars());
        VectorField {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> VectorField {
        VectorField { comps: self.comps.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, p: &Polynomial) -> VectorField {
        VectorField { comps: self.comps.iter().map(|c| c * p).collect() }
    }

    /// Directional derivative `X(f) = Σ_i X^i ∂f/∂x_i`.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        assert_eq!(f.nvars(), self.nvars(), "field/function arity mismatch");
        let mut acc = Polynomial::zero(self.nvars());
        for (i, xi) in self.comps.iter().enumerate() {
            acc = &acc + &(xi * &f.partial(i));
        }
        acc
    }

    /// Lie bracket `[X, Y]^k = Σ_i (X^i ∂_i Y^k − Y^i ∂_i X^k)`.
    pub fn lie_bracket(&self, other: &VectorField) -> Result<VectorField> {
        if self.nvars() != other.nvars() {
            return Err(Error::ChartMismatch("lie bracket of vector fields".into()));
        }
        let comps = (0..self.nvars())
            .map(|k| &self.apply(&other.comps[k]) - &other.apply(&self.comps[k]))
            .collect();
        Ok(VectorField { comps })
    }
}

/// Exact differential form of homogeneous degree, in canonical form: keys are
/// strictly increasing index tuples, values are nonzero polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffForm {
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Polynomial>,
}

/// Merge-sort a concatenation of two strictly increasing index tuples,
/// returning the combined tuple and the sign of the sorting permutation;
/// `None` when an index repeats.
fn merge_indices(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut sign = 1i32;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] jumps over the remaining a-indices.
            if (a.len() - i) % 2 == 1 {
                sign = -sign;
            }
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, sign))
}

impl DiffForm {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        DiffForm { nvars, degree, terms: BTreeMap::new() }
    }

    /// A 0-form is a polynomial.
    pub fn from_function(f: &Polynomial) -> Self {
        let mut form = DiffForm::zero(f.nvars(), 0);
        form.add_term(vec![], f.clone());
        form
    }

    /// The coordinate 1-form `dx_i`.
    pub fn coordinate(nvars: usize, i: usize) -> Self {
        let mut form = DiffForm::zero(nvars, 1);
        form.add_term(vec![i], Polynomial::one(nvars));
        form
    }

    /// Basis monomial form `p · dx_{I}` for a strictly increasing tuple `I`.
    pub fn from_term(nvars: usize, indices: &[usize], coeff: Polynomial) -> Self {
        assert!(indices.windows(2).all(|w| w[0] < w[1]), "indices must strictly increase");
        assert!(indices.iter().all(|&i| i < nvars), "form index out of range");
        let mut form = DiffForm::zero(nvars, indices.len());
        form.add_term(indices.to_vec(), coeff);
        form
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Polynomial)> {
        self.terms.iter()
    }

    /// The coefficient polynomial of `dx_I` (zero when absent).
    pub fn coefficient(&self, indices: &[usize]) -> Polynomial {
        self.terms.get(indices).cloned().unwrap_or_else(|| Polynomial::zero(self.nvars))
    }

    fn add_term(&mut self, indices: Vec<usize>, coeff: Polynomial) {
        assert_eq!(indices.len(), self.degree, "degree mismatch in form term");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(indices) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &DiffForm) -> DiffForm {
        assert_eq!(self.nvars, other.nvars, "form arity mismatch");
        assert_eq!(self.degree, other.degree, "form degree mismatch");
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(idx.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffForm) -> DiffForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DiffForm {
        let mut out = DiffForm::zero(self.nvars, self.degree);
        for (idx, c) in &self.terms {
            out.terms.insert(idx.clone(), -c);
        }
        out
    }

    pub fn scale(&self, p: &Polynomial) -> DiffForm {
        let mut out = DiffForm::zero(self.nvars, self.degree);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c * p);
        }
        out
    }

    pub fn scale_scalar(&self, s: &Scalar) -> DiffForm {
        self.scale(&Polynomial::constant(self.nvars, s.clone()))
    }

    /// Wedge product; degrees add.
    pub fn wedge(&self, other: &DiffForm) -> DiffForm {
        assert_eq!(self.nvars, other.nvars, "form arity mismatch");
        let mut out = DiffForm::zero(self.nvars, self.degree + other.degree);
        for (ia, ca) in &self.terms {
            for (ib, cb) in &other.terms {
                if let Some((idx, sign)) = merge_indices(ia, ib) {
                    let mut c = ca * cb;
                    if sign < 0 {
                        c = -&c;
                    }
                    out.add_term(idx, c);
                }
            }
        }
        out
    }

    /// Exterior derivative `d(a·dx_I) = Σ_i (∂_i a)·dx_i ∧ dx_I`.
    pub fn exterior_derivative(&self) -> DiffForm {
        let mut out = DiffForm::zero(self.nvars, self.degree + 1);
        for (idx, c) in &self.terms {
            for i in 0..self.nvars {
                let dc = c.partial(i);
                if dc.is_zero() {
                    continue;
                }
                if let Some((merged, sign)) = merge_indices(&[i], idx) {
                    let coeff = if sign < 0 { -&dc } else { dc };
                    out.add_term(merged, coeff);
                }
            }
        }
        out
    }

    /// Interior product `ι_X ω`; one degree lower (the zero 0-form for a
    /// 0-form input).
    pub fn interior_product(&self, x: &VectorField) -> Result<DiffForm> {
        if self.nvars != x.nvars() {
            return Err(Error::ChartMismatch("interior product".into()));
        }
        if self.degree == 0 {
            return Ok(DiffForm::zero(self.nvars, 0));
        }
        let mut out = DiffForm::zero(self.nvars, self.degree - 1);
        for (idx, c) in &self.terms {
            for (k, &ik) in idx.iter().enumerate() {
                let comp = x.component(ik);
                if comp.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(k);
                let mut coeff = c * comp;
                if k % 2 == 1 {
                    coeff = -&coeff;
                }
                out.add_term(rest, coeff);
            }
        }
        Ok(out)
    }

    /// `ω(X, Y, —) = ι_Y (ι_X ω)`: insert `X` into the first slot, then `Y`.
    pub fn insert_pair(&self, x: &VectorField, y: &VectorField) -> Result<DiffForm> {
        self.interior_product(x)?.interior_product(y)
    }

    /// Lie derivative via the Cartan formula `L_X = ι_X ∘ d + d ∘ ι_X`.
    pub fn lie_derivative(&self, x: &VectorField) -> Result<DiffForm> {
        let a = self.exterior_derivative().interior_product(x)?;
        if self.degree == 0 {
            // ι_X of a 0-form vanishes identically, and running it through
            // `d` anyway would shift the zero to degree 1; `L_X f = X(f)`
            // is the first term alone.
            return Ok(a);
        }
        let b = self.interior_product(x)?.exterior_derivative();
        Ok(a.add(&b))
    }

    /// Full multilinear evaluation `ω(X_1, …, X_p)` (a polynomial).
    pub fn evaluate(&self, fields: &[&VectorField]) -> Result<Polynomial> {
        if fields.len() != self.degree {
            return Err(Error::ShapeMismatch(format!(
                "evaluating a degree-{} form on {} fields",
                self.degree,
                fields.len()
            )));
        }
        let mut acc = self.clone();
        for x in fields {
            acc = acc.interior_product(x)?;
        }
        Ok(acc.coefficient(&[]))
    }

    /// Coefficient map, preserving shape.
    pub fn map_coeffs(&self, f: impl Fn(&Polynomial) -> Polynomial) -> DiffForm {
        let mut out = DiffForm::zero(self.nvars, self.degree);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), f(c));
        }
        out
    }
}

/// All strictly increasing `k`-tuples from `0..n` (basis index tuples for
/// degree-`k` forms).
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Print a vector field in coordinate-vector notation `[p_1, …, p_n]`.
pub fn vector_field_to_string(chart: &ChartContext, x: &VectorField) -> String {
    let comps: Vec<String> =
        x.components().iter().map(|p| crate::expr::poly_to_string(chart, p)).collect();
    format!("[{}]", comps.join(", "))
}

/// Print a form as a sum of `p*d[...]` terms in the expression grammar.
pub fn form_to_string(chart: &ChartContext, w: &DiffForm) -> String {
    crate::expr::form_to_string(chart, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n3() -> usize {
        3
    }
    fn dx(i: usize) -> DiffForm {
        DiffForm::coordinate(n3(), i)
    }
    fn pvar(i: usize) -> Polynomial {
        Polynomial::var(n3(), i)
    }
    fn coord(i: usize) -> VectorField {
        VectorField::coordinate(n3(), i)
    }

    /// Independent transport-formula oracle for the Lie derivative:
    /// `L_X (a·dx_I) = X(a)·dx_I + a·Σ_k dx_{i_1} ∧ … ∧ d(X^{i_k}) ∧ … ∧ dx_{i_p}`.
    fn lie_derivative_transport(w: &DiffForm, x: &VectorField) -> DiffForm {
        let n = w.nvars();
        let mut acc = DiffForm::zero(n, w.degree());
        for (idx, a) in w.terms() {
            acc = acc.add(&DiffForm::from_term(n, idx, x.apply(a)));
            for (k, &ik) in idx.iter().enumerate() {
                // d(X^{i_k}) as a 1-form
                let dxik = DiffForm::from_function(x.component(ik)).exterior_derivative();
                // wedge the slots back together in order, replacing slot k
                let mut term = DiffForm::from_function(a);
                for (j, &ij) in idx.iter().enumerate() {
                    let factor =
                        if j == k { dxik.clone() } else { DiffForm::coordinate(n, ij) };
                    term = term.wedge(&factor);
                }
                acc = acc.add(&term);
            }
        }
        acc
    }

    #[test]
    fn lie_bracket_frozen_values() {
        // [∂x, ∂y] = 0
        assert!(coord(0).lie_bracket(&coord(1)).unwrap().is_zero());
        // [x∂y, ∂x] = −∂y
        let x_dy = coord(1).scale(&pvar(0));
        assert_eq!(x_dy.lie_bracket(&coord(0)).unwrap(), coord(1).neg());
        // [x∂x, x∂y] = x∂y
        let x_dx = coord(0).scale(&pvar(0));
        assert_eq!(x_dx.lie_bracket(&x_dy).unwrap(), x_dy);
    }

    #[test]
    fn lie_bracket_jacobi_and_antisymmetry() {
        let x = coord(0).scale(&pvar(1)).add(&coord(2).scale(&(&pvar(0) * &pvar(0))));
        let y = coord(1).scale(&pvar(2)).add(&coord(0));
        let z = coord(2).scale(&(&pvar(1) * &pvar(2)));
        let xy = x.lie_bracket(&y).unwrap();
        assert_eq!(xy, y.lie_bracket(&x).unwrap().neg());
        let j = xy
            .lie_bracket(&z)
            .unwrap()
            .add(&y.lie_bracket(&z).unwrap().lie_bracket(&x).unwrap().neg())
            .add(&x.lie_bracket(&z).unwrap().lie_bracket(&y).unwrap());
        // [[X,Y],Z] = [X,[Y,Z]] − [Y,[X,Z]]
        let rhs = x
            .lie_bracket(&y.lie_bracket(&z).unwrap())
            .unwrap()
            .sub(&y.lie_bracket(&x.lie_bracket(&z).unwrap()).unwrap());
        assert_eq!(xy.lie_bracket(&z).unwrap(), rhs);
        let _ = j;
    }

    #[test]
    fn exterior_derivative_frozen_values() {
        // d(x dy) = dx∧dy
        let w = dx(1).scale(&pvar(0));
        assert_eq!(w.exterior_derivative(), dx(0).wedge(&dx(1)));
        // d(dx) = 0
        assert!(dx(0).exterior_derivative().is_zero());
        // d(xy dz) = y dx∧dz + x dy∧dz
        let w = dx(2).scale(&(&pvar(0) * &pvar(1)));
        let expect = dx(0).wedge(&dx(2)).scale(&pvar(1)).add(&dx(1).wedge(&dx(2)).scale(&pvar(0)));
        assert_eq!(w.exterior_derivative(), expect);
    }

    #[test]
    fn d_squared_zero() {
        let w = dx(0)
            .scale(&(&pvar(1) * &pvar(2)))
            .add(&dx(1).wedge(&dx(2)).scale(&(&pvar(0) * &pvar(0))).interior_product(&coord(2)).unwrap());
        assert!(w.exterior_derivative().exterior_derivative().is_zero());
        let f = DiffForm::from_function(&(&(&pvar(0) * &pvar(1)) + &pvar(2)));
        assert!(f.exterior_derivative().exterior_derivative().is_zero());
    }

    #[test]
    fn interior_product_frozen_values() {
        let dxdy = dx(0).wedge(&dx(1));
        // ι_∂x (dx∧dy) = dy
        assert_eq!(dxdy.interior_product(&coord(0)).unwrap(), dx(1));
        // ι_∂y (dx∧dy) = −dx
        assert_eq!(dxdy.interior_product(&coord(1)).unwrap(), dx(0).neg());
        // insert_pair(∂x, ∂y, dx∧dy∧dz) = dz
        let vol = dx(0).wedge(&dx(1)).wedge(&dx(2));
        assert_eq!(vol.insert_pair(&coord(0), &coord(1)).unwrap(), dx(2));
        // and with the arguments swapped the sign flips
        assert_eq!(vol.insert_pair(&coord(1), &coord(0)).unwrap(), dx(2).neg());
    }

    #[test]
    fn interior_product_is_an_antiderivation() {
        // ι_X(α∧β) = (ι_X α)∧β + (−1)^{deg α} α∧(ι_X β)
        let x = coord(0).scale(&pvar(1)).add(&coord(1));
        let alpha = dx(0).scale(&pvar(2)).add(&dx(2));
        let beta = dx(1).wedge(&dx(2)).scale(&pvar(0));
        let lhs = alpha.wedge(&beta).interior_product(&x).unwrap();
        let rhs = alpha
            .interior_product(&x)
            .unwrap()
            .wedge(&beta)
            .add(&alpha.wedge(&beta.interior_product(&x).unwrap()).neg());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn lie_derivative_frozen_values() {
        // L_∂x (x dy) = dy
        let w = dx(1).scale(&pvar(0));
        assert_eq!(w.lie_derivative(&coord(0)).unwrap(), dx(1));
        // L_{x∂x}(dx) = dx
        let x_dx = coord(0).scale(&pvar(0));
        assert_eq!(dx(0).lie_derivative(&x_dx).unwrap(), dx(0));
        // L_∂z (dx∧dy) = 0
        assert!(dx(0).wedge(&dx(1)).lie_derivative(&coord(2)).unwrap().is_zero());
    }

    #[test]
    fn lie_derivative_of_a_function_is_the_directional_derivative() {
        // L_X f = X(f) at degree 0, where the d∘ι_X term drops out.
        let x = coord(0).scale(&pvar(1)).add(&coord(2));
        let f = &(&pvar(0) * &pvar(0)) + &pvar(2);
        let got = DiffForm::from_function(&f).lie_derivative(&x).unwrap();
        assert_eq!(got.degree(), 0);
        assert_eq!(got.coefficient(&[]), x.apply(&f));
    }

    #[test]
    fn cartan_matches_transport_oracle() {
        let x = coord(0).scale(&(&pvar(0) * &pvar(1))).add(&coord(2).scale(&pvar(1)));
        let samples = [
            dx(0).scale(&pvar(2)),
            dx(1).wedge(&dx(2)).scale(&(&pvar(0) + &pvar(2))),
            dx(0).wedge(&dx(1)).add(&dx(0).wedge(&dx(2)).scale(&pvar(0))),
        ];
        for w in &samples {
            assert_eq!(w.lie_derivative(&x).unwrap(), lie_derivative_transport(w, &x));
        }
    }

    #[test]
    fn commutator_identity_on_forms() {
        // [L_X, ι_Y] = ι_[X,Y]
        let x = coord(0).scale(&pvar(1));
        let y = coord(1).scale(&pvar(0)).add(&coord(2));
        let w = dx(0).wedge(&dx(1)).scale(&pvar(2)).add(&dx(1).wedge(&dx(2)));
        let lhs = w
            .interior_product(&y)
            .unwrap()
            .lie_derivative(&x)
            .unwrap()
            .sub(&w.lie_derivative(&x).unwrap().interior_product(&y).unwrap());
        let rhs = w.interior_product(&x.lie_bracket(&y).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn top_degree_and_overflow() {
        let vol = dx(0).wedge(&dx(1)).wedge(&dx(2));
        assert!(vol.exterior_derivative().is_zero());
        assert_eq!(vol.exterior_derivative().degree(), 4);
        assert!(vol.wedge(&dx(0)).is_zero());
    }

    #[test]
    fn evaluation_matches_insertion() {
        let h = dx(0).wedge(&dx(1)).wedge(&dx(2)).scale(&pvar(0));
        let v = h.evaluate(&[&coord(0), &coord(1), &coord(2)]).unwrap();
        assert_eq!(v, pvar(0));
        let w = h.evaluate(&[&coord(1), &coord(0), &coord(2)]).unwrap();
        assert_eq!(w, -&pvar(0));
    }

    #[test]
    fn increasing_tuples_counts() {
        assert_eq!(increasing_tuples(4, 2).len(), 6);
        assert_eq!(increasing_tuples(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(increasing_tuples(2, 3).len(), 0);
        assert_eq!(increasing_tuples(3, 0), vec![Vec::<usize>::new()]);
    }
}
