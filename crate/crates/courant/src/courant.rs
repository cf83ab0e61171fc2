//! Courant structures on trivialized bundles: frame-indexed pairing, anchor,
//! and bracket tables, with the Dorfman bracket extended from frame data to
//! arbitrary polynomial sections by a closed Leibniz formula.

use crate::calculus::{DiffForm, VectorField};
use crate::chart::{is_valid_name, ChartContext};
use crate::error::{Error, Result};
use crate::linalg::{apply_scalar_matrix, invert_scalar_matrix, is_symmetric};
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use std::ops::{Add, Neg, Sub};

/// Section of a trivialized bundle, stored as frame coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    coeffs: Vec<Polynomial>,
}

impl Section {
    pub fn zero(nvars: usize, rank: usize) -> Self {
        Section { coeffs: vec![Polynomial::zero(nvars); rank] }
    }

    /// The `k`-th frame element as a section.
    pub fn basis(nvars: usize, rank: usize, k: usize) -> Self {
        let mut coeffs = vec![Polynomial::zero(nvars); rank];
        coeffs[k] = Polynomial::one(nvars);
        Section { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Polynomial>) -> Self {
        Section { coeffs }
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Polynomial {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|p| p.is_zero())
    }

    pub fn scale(&self, p: &Polynomial) -> Section {
        Section { coeffs: self.coeffs.iter().map(|c| c * p).collect() }
    }

    pub fn scale_scalar(&self, s: &Scalar) -> Section {
        Section { coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect() }
    }

    /// Concatenate coefficients with another section (direct-sum frame).
    pub fn concat(&self, other: &Section) -> Section {
        let mut coeffs = self.coeffs.clone();
        coeffs.extend(other.coeffs.iter().cloned());
        Section { coeffs }
    }

    /// Split coefficients at `k` into leading and trailing sections.
    pub fn split_at(&self, k: usize) -> (Section, Section) {
        let (a, b) = self.coeffs.split_at(k);
        (Section { coeffs: a.to_vec() }, Section { coeffs: b.to_vec() })
    }
}

impl Add for &Section {
    type Output = Section;
    fn add(self, rhs: &Section) -> Section {
        assert_eq!(self.rank(), rhs.rank(), "section rank mismatch");
        Section { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Section {
    type Output = Section;
    fn sub(self, rhs: &Section) -> Section {
        assert_eq!(self.rank(), rhs.rank(), "section rank mismatch");
        Section { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Section {
    type Output = Section;
    fn neg(self) -> Section {
        Section { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// Courant structure on a trivialized bundle over a polynomial chart.
///
/// Holds the constant fiber pairing, the anchor image of every frame element,
/// and the full frame bracket table. The Dorfman bracket of arbitrary
/// sections is recovered from this data by [`CourantStructure::dorfman`]; the
/// constructor validates shapes and field admissibility but does not enforce
/// the algebraic axioms (see the axiom checker for that).
#[derive(Debug, Clone)]
pub struct CourantStructure {
    chart: ChartContext,
    labels: Vec<String>,
    pairing: Vec<Vec<Scalar>>,
    pairing_inv: Vec<Vec<Scalar>>,
    anchor: Vec<VectorField>,
    bracket: Vec<Vec<Section>>,
}

impl CourantStructure {
    pub fn new(
        chart: ChartContext,
        labels: Vec<String>,
        pairing: Vec<Vec<Scalar>>,
        anchor: Vec<VectorField>,
        bracket: Vec<Vec<Section>>,
    ) -> Result<Self> {
        let rank = labels.len();
        for l in &labels {
            if !is_valid_name(l) {
                return Err(Error::ShapeMismatch(format!("invalid frame label `{l}`")));
            }
            if chart.index_of(l).is_some() {
                return Err(Error::ShapeMismatch(format!(
                    "frame label `{l}` collides with a coordinate name"
                )));
            }
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::ShapeMismatch(format!("duplicate frame label `{l}`")));
            }
        }
        if pairing.len() != rank || pairing.iter().any(|r| r.len() != rank) {
            return Err(Error::ShapeMismatch(format!(
                "pairing matrix must be {rank}x{rank}"
            )));
        }
        if !is_symmetric(&pairing) {
            return Err(Error::AsymmetricPairing);
        }
        for c in pairing.iter().flatten() {
            chart.admit_scalar(c)?;
        }
        let pairing_inv = invert_scalar_matrix(&pairing)
            .map_err(|_| Error::SingularMatrix("fiber pairing is degenerate".into()))?;
        if anchor.len() != rank {
            return Err(Error::ShapeMismatch(format!(
                "anchor table has {} rows for rank {rank}",
                anchor.len()
            )));
        }
        for x in &anchor {
            if x.nvars() != chart.dim() {
                return Err(Error::ChartMismatch("anchor field arity".into()));
            }
            for p in x.components() {
                chart.admit_poly(p)?;
            }
        }
        if bracket.len() != rank || bracket.iter().any(|r| r.len() != rank) {
            return Err(Error::ShapeMismatch(format!(
                "bracket table must be {rank}x{rank}"
            )));
        }
        for s in bracket.iter().flatten() {
            if s.rank() != rank {
                return Err(Error::ShapeMismatch("bracket entry rank".into()));
            }
            for p in s.coeffs() {
                if p.nvars() != chart.dim() {
                    return Err(Error::ChartMismatch("bracket entry arity".into()));
                }
                chart.admit_poly(p)?;
            }
        }
        Ok(CourantStructure { chart, labels, pairing, pairing_inv, anchor, bracket })
    }

    pub fn chart(&self) -> &ChartContext {
        &self.chart
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn pairing_matrix(&self) -> &[Vec<Scalar>] {
        &self.pairing
    }

    pub fn pairing_inverse(&self) -> &[Vec<Scalar>] {
        &self.pairing_inv
    }

    pub fn anchor_table(&self) -> &[VectorField] {
        &self.anchor
    }

    pub fn bracket_entry(&self, i: usize, j: usize) -> &Section {
        &self.bracket[i][j]
    }

    pub fn frame_section(&self, k: usize) -> Section {
        Section::basis(self.chart.dim(), self.rank(), k)
    }

    pub fn zero_section(&self) -> Section {
        Section::zero(self.chart.dim(), self.rank())
    }

    /// Fiber pairing `⟨φ, ψ⟩` as a polynomial function.
    pub fn pairing(&self, a: &Section, b: &Section) -> Polynomial {
        let gb = apply_scalar_matrix(&self.pairing, b.coeffs());
        let mut acc = self.chart.zero_poly();
        for (ai, gbi) in a.coeffs().iter().zip(&gb) {
            acc = &acc + &(ai * gbi);
        }
        acc
    }

    /// Anchor image `ρ(φ)` as a vector field.
    pub fn anchor_apply(&self, a: &Section) -> VectorField {
        let n = self.chart.dim();
        let mut comps = vec![Polynomial::zero(n); n];
        for (c, x) in a.coeffs().iter().zip(&self.anchor) {
            if c.is_zero() {
                continue;
            }
            for (m, xm) in x.components().iter().enumerate() {
                comps[m] = &comps[m] + &(c * xm);
            }
        }
        VectorField::from_components(comps)
    }

    /// Derivative `ρ(φ)f` of a function along the anchor image of a section.
    pub fn directional(&self, a: &Section, f: &Polynomial) -> Polynomial {
        self.anchor_apply(a).apply(f)
    }

    /// Exact generator `Df`, the section with `⟨Df, φ⟩ = ρ(φ)f` for all `φ`.
    pub fn d_operator(&self, f: &Polynomial) -> Section {
        let w: Vec<Polynomial> = self.anchor.iter().map(|x| x.apply(f)).collect();
        Section::from_coeffs(apply_scalar_matrix(&self.pairing_inv, &w))
    }

    /// Dorfman bracket of arbitrary sections, extended from the frame table by
    /// the closed formula
    /// `(φ⋄ψ)_k = ρ(φ)ψ^k − ρ(ψ)φ^k + Σ_{ij} φ^i ψ^j (e_i⋄e_j)_k + Σ_i (Gψ)_i (Dφ^i)_k`.
    pub fn dorfman(&self, a: &Section, b: &Section) -> Section {
        let rank = self.rank();
        assert_eq!(a.rank(), rank, "section rank mismatch");
        assert_eq!(b.rank(), rank, "section rank mismatch");
        let rho_a = self.anchor_apply(a);
        let rho_b = self.anchor_apply(b);
        let mut out: Vec<Polynomial> = Vec::with_capacity(rank);
        for k in 0..rank {
            out.push(&rho_a.apply(b.coeff(k)) - &rho_b.apply(a.coeff(k)));
        }
        for i in 0..rank {
            if a.coeff(i).is_zero() {
                continue;
            }
            for j in 0..rank {
                if b.coeff(j).is_zero() {
                    continue;
                }
                let table = &self.bracket[i][j];
                if table.is_zero() {
                    continue;
                }
                let f = a.coeff(i) * b.coeff(j);
                for k in 0..rank {
                    if !table.coeff(k).is_zero() {
                        out[k] = &out[k] + &(&f * table.coeff(k));
                    }
                }
            }
        }
        let gb = apply_scalar_matrix(&self.pairing, b.coeffs());
        for i in 0..rank {
            if gb[i].is_zero() || a.coeff(i).as_constant().is_some() {
                continue;
            }
            let da = self.d_operator(a.coeff(i));
            for k in 0..rank {
                if !da.coeff(k).is_zero() {
                    out[k] = &out[k] + &(&gb[i] * da.coeff(k));
                }
            }
        }
        Section::from_coeffs(out)
    }

    /// Reindex the frame: new element `k` is old element `perm[k]`.
    pub fn reorder(&self, perm: &[usize]) -> Result<CourantStructure> {
        let rank = self.rank();
        if perm.len() != rank {
            return Err(Error::ShapeMismatch("permutation length".into()));
        }
        let mut seen = vec![false; rank];
        for &p in perm {
            if p >= rank || seen[p] {
                return Err(Error::ShapeMismatch("not a permutation".into()));
            }
            seen[p] = true;
        }
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        let pairing: Vec<Vec<Scalar>> = perm
            .iter()
            .map(|&i| perm.iter().map(|&j| self.pairing[i][j].clone()).collect())
            .collect();
        let anchor = perm.iter().map(|&p| self.anchor[p].clone()).collect();
        let bracket = perm
            .iter()
            .map(|&i| {
                perm.iter()
                    .map(|&j| {
                        let s = &self.bracket[i][j];
                        Section::from_coeffs(perm.iter().map(|&k| s.coeff(k).clone()).collect())
                    })
                    .collect()
            })
            .collect();
        CourantStructure::new(self.chart.clone(), labels, pairing, anchor, bracket)
    }

    /// First discrepancy between two structures' defining tables, if any.
    pub fn table_diff(&self, other: &CourantStructure) -> Option<String> {
        if self.chart != other.chart {
            return Some("charts differ".to_string());
        }
        if self.labels != other.labels {
            return Some(format!(
                "frame labels differ: [{}] vs [{}]",
                self.labels.join(", "),
                other.labels.join(", ")
            ));
        }
        let rank = self.rank();
        for i in 0..rank {
            for j in 0..rank {
                if self.pairing[i][j] != other.pairing[i][j] {
                    return Some(format!(
                        "pairing({}, {}): {} vs {}",
                        self.labels[i], self.labels[j], self.pairing[i][j], other.pairing[i][j]
                    ));
                }
            }
        }
        for (i, (x, y)) in self.anchor.iter().zip(&other.anchor).enumerate() {
            if x != y {
                return Some(format!(
                    "anchor({}): {} vs {}",
                    self.labels[i],
                    crate::calculus::vector_field_to_string(&self.chart, x),
                    crate::calculus::vector_field_to_string(&self.chart, y)
                ));
            }
        }
        for i in 0..rank {
            for j in 0..rank {
                if self.bracket[i][j] != other.bracket[i][j] {
                    return Some(format!(
                        "bracket({}, {}): {} vs {}",
                        self.labels[i],
                        self.labels[j],
                        self.section_string(&self.bracket[i][j]),
                        other.section_string(&other.bracket[i][j])
                    ));
                }
            }
        }
        None
    }

    /// Canonical rendering of a section in this structure's frame.
    pub fn section_string(&self, s: &Section) -> String {
        crate::expr::section_to_string(&self.chart, &self.labels, s.coeffs())
    }

    /// Parse a section expression in this structure's frame.
    pub fn parse_section(&self, text: &str) -> Result<Section> {
        Ok(Section::from_coeffs(crate::expr::parse_section_coeffs(&self.chart, &self.labels, text)?))
    }
}

/// Assemble a tangent⊕cotangent section from a vector field and a 1-form.
pub fn pair_section(x: &VectorField, alpha: &DiffForm) -> Section {
    assert_eq!(alpha.degree(), 1, "form part must be a 1-form");
    let n = x.nvars();
    let mut coeffs = x.components().to_vec();
    for i in 0..n {
        coeffs.push(alpha.coefficient(&[i]));
    }
    Section::from_coeffs(coeffs)
}

/// Vector-field part of a tangent⊕cotangent section.
pub fn section_vector_part(s: &Section) -> VectorField {
    let n = s.rank() / 2;
    VectorField::from_components(s.coeffs()[..n].to_vec())
}

/// 1-form part of a tangent⊕cotangent section.
pub fn section_form_part(s: &Section) -> DiffForm {
    let n = s.rank() / 2;
    let mut w = DiffForm::zero(n, 1);
    for i in 0..n {
        let c = s.coeff(n + i);
        if !c.is_zero() {
            w = w.add(&DiffForm::from_term(n, &[i], c.clone()));
        }
    }
    w
}

/// Build the twisted standard structure on tangent⊕cotangent data: frame
/// `e_x1…e_xn, d_x1…d_xn`, crosswise pairing, tangent anchor, and the closed
/// 3-form `h` feeding the only nonzero frame brackets
/// `e_xi ⋄ e_xj = h(∂_i, ∂_j, ·)`.
///
/// A non-closed `h` is rejected unless `force` is set (the resulting bracket
/// then fails its Jacobi identity, which is useful for sensitivity tests).
pub fn make_twisted_standard(
    chart: &ChartContext,
    h: &DiffForm,
    force: bool,
) -> Result<CourantStructure> {
    let n = chart.dim();
    if h.nvars() != n || h.degree() != 3 {
        return Err(Error::ShapeMismatch(format!(
            "twist must be a 3-form over the chart, found degree {}",
            h.degree()
        )));
    }
    for (_, c) in h.terms() {
        chart.admit_poly(c)?;
    }
    if !h.exterior_derivative().is_zero() && !force {
        return Err(Error::NonClosedTwist);
    }
    let mut labels = Vec::with_capacity(2 * n);
    for name in chart.names() {
        labels.push(format!("e_{name}"));
    }
    for name in chart.names() {
        labels.push(format!("d_{name}"));
    }
    let mut pairing = vec![vec![Scalar::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        pairing[i][n + i] = Scalar::one();
        pairing[n + i][i] = Scalar::one();
    }
    let mut anchor = Vec::with_capacity(2 * n);
    for i in 0..n {
        anchor.push(VectorField::coordinate(n, i));
    }
    for _ in 0..n {
        anchor.push(VectorField::zero(n));
    }
    let mut bracket = vec![vec![Section::zero(n, 2 * n); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let contracted = h
                .insert_pair(&VectorField::coordinate(n, i), &VectorField::coordinate(n, j))
                .expect("chart arity matches");
            bracket[i][j] = pair_section(&VectorField::zero(n), &contracted);
        }
    }
    CourantStructure::new(chart.clone(), labels, pairing, anchor, bracket)
}

/// Direct evaluation of the twisted standard bracket
/// `[X⊕α, Y⊕β] = [X,Y] ⊕ (L_X β − ι_Y dα + h(X, Y, ·))`,
/// independent of the frame-table extension; used as a cross-check oracle.
pub fn standard_twisted_bracket(
    chart: &ChartContext,
    h: &DiffForm,
    a: &Section,
    b: &Section,
) -> Result<Section> {
    if a.rank() != 2 * chart.dim() || b.rank() != 2 * chart.dim() {
        return Err(Error::ShapeMismatch(
            "twisted bracket expects tangent⊕cotangent sections".into(),
        ));
    }
    let (x, alpha) = (section_vector_part(a), section_form_part(a));
    let (y, beta) = (section_vector_part(b), section_form_part(b));
    let vector = x.lie_bracket(&y)?;
    let mut form = beta.lie_derivative(&x)?;
    form = form.sub(&alpha.exterior_derivative().interior_product(&y)?);
    form = form.add(&h.insert_pair(&x, &y)?);
    Ok(pair_section(&vector, &form))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_form, parse_polynomial};

    fn r2() -> ChartContext {
        ChartContext::rational(&["x", "y"]).unwrap()
    }

    fn r3() -> ChartContext {
        ChartContext::rational(&["x", "y", "z"]).unwrap()
    }

    fn standard(chart: &ChartContext) -> CourantStructure {
        let h = DiffForm::zero(chart.dim(), 3);
        make_twisted_standard(chart, &h, false).unwrap()
    }

    #[test]
    fn crosswise_pairing_value() {
        let e = standard(&r2());
        let a = e.parse_section("e_x + d_y").unwrap();
        let b = e.parse_section("e_y + d_x").unwrap();
        assert_eq!(e.pairing(&a, &b), parse_polynomial(e.chart(), "2").unwrap());
        assert_eq!(e.pairing(&a, &a), parse_polynomial(e.chart(), "0").unwrap());
    }

    #[test]
    fn exact_generator_is_the_differential() {
        let e = standard(&r2());
        let f = parse_polynomial(e.chart(), "x*y").unwrap();
        let df = e.d_operator(&f);
        assert_eq!(df, e.parse_section("y*d_x + x*d_y").unwrap());
        // ⟨Df, φ⟩ = ρ(φ)f for every frame element
        for k in 0..e.rank() {
            let phi = e.frame_section(k);
            assert_eq!(e.pairing(&df, &phi), e.directional(&phi, &f));
        }
    }

    #[test]
    fn twisted_frame_bracket_table() {
        let chart = r3();
        let h = parse_form(&chart, 3, "d[x,y,z]").unwrap();
        let e = make_twisted_standard(&chart, &h, false).unwrap();
        let ex = e.parse_section("e_x").unwrap();
        let ey = e.parse_section("e_y").unwrap();
        assert_eq!(e.dorfman(&ex, &ey), e.parse_section("d_z").unwrap());
        assert_eq!(e.dorfman(&ey, &ex), e.parse_section("-d_z").unwrap());
        let dz = e.parse_section("d_z").unwrap();
        assert!(e.dorfman(&ex, &dz).is_zero());
    }

    #[test]
    fn non_closed_twist_needs_force() {
        let chart = ChartContext::rational(&["x1", "x2", "x3", "x4"]).unwrap();
        let h = parse_form(&chart, 3, "x1*d[x2,x3,x4]").unwrap();
        assert!(matches!(make_twisted_standard(&chart, &h, false), Err(Error::NonClosedTwist)));
        assert!(make_twisted_standard(&chart, &h, true).is_ok());
    }

    #[test]
    fn dorfman_extension_matches_direct_formula() {
        let chart = r3();
        let h = parse_form(&chart, 3, "z*d[x,y,z]").unwrap();
        let e = make_twisted_standard(&chart, &h, false).unwrap();
        let samples = [
            "x*e_x + y^2*d_y",
            "e_y - z*d_x + x*y*d_z",
            "y*e_z + x*e_x - d_y",
            "x^2*e_y + z*d_z",
        ];
        for sa in samples {
            for sb in samples {
                let a = e.parse_section(sa).unwrap();
                let b = e.parse_section(sb).unwrap();
                let via_table = e.dorfman(&a, &b);
                let direct = standard_twisted_bracket(&chart, &h, &a, &b).unwrap();
                assert_eq!(
                    via_table, direct,
                    "extension disagrees with direct bracket on ({sa}, {sb})"
                );
            }
        }
    }

    #[test]
    fn dorfman_satisfies_leibniz_in_second_slot() {
        let chart = r3();
        let h = parse_form(&chart, 3, "d[x,y,z]").unwrap();
        let e = make_twisted_standard(&chart, &h, false).unwrap();
        let a = e.parse_section("x*e_x + d_y").unwrap();
        let b = e.parse_section("e_y + z*d_z").unwrap();
        let f = parse_polynomial(&chart, "x*z + y").unwrap();
        let lhs = e.dorfman(&a, &b.scale(&f));
        let rhs = &e.dorfman(&a, &b).scale(&f) + &b.scale(&e.directional(&a, &f));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_sections_are_central_and_anchor_killed() {
        let chart = r3();
        let h = parse_form(&chart, 3, "d[x,y,z]").unwrap();
        let e = make_twisted_standard(&chart, &h, false).unwrap();
        let f = parse_polynomial(&chart, "x^2*y - z").unwrap();
        let df = e.d_operator(&f);
        assert!(e.anchor_apply(&df).is_zero());
        let phi = e.parse_section("x*e_x + y*e_y - d_z").unwrap();
        assert!(e.dorfman(&df, &phi).is_zero());
        // and φ ⋄ Df = D(ρ(φ)f)
        let lhs = e.dorfman(&phi, &df);
        let rhs = e.d_operator(&e.directional(&phi, &f));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn reorder_round_trip() {
        let chart = r2();
        let h = DiffForm::zero(2, 3);
        let e = make_twisted_standard(&chart, &h, false).unwrap();
        let perm = [2, 0, 3, 1];
        let r = e.reorder(&perm).unwrap();
        assert_eq!(r.labels(), ["d_x", "e_x", "d_y", "e_y"]);
        let mut inverse = vec![0; 4];
        for (k, &p) in perm.iter().enumerate() {
            inverse[p] = k;
        }
        let back = r.reorder(&inverse).unwrap();
        assert!(e.table_diff(&back).is_none());
    }

    #[test]
    fn constructor_rejects_bad_data() {
        let chart = r2();
        let labels = vec!["a".to_string(), "b".to_string()];
        let sym = vec![
            vec![Scalar::zero(), Scalar::one()],
            vec![Scalar::one(), Scalar::zero()],
        ];
        let asym = vec![
            vec![Scalar::zero(), Scalar::one()],
            vec![-&Scalar::one(), Scalar::zero()],
        ];
        let anchor = vec![VectorField::zero(2), VectorField::zero(2)];
        let bracket = vec![vec![Section::zero(2, 2); 2]; 2];
        assert!(CourantStructure::new(
            chart.clone(),
            labels.clone(),
            sym.clone(),
            anchor.clone(),
            bracket.clone()
        )
        .is_ok());
        assert!(matches!(
            CourantStructure::new(chart.clone(), labels.clone(), asym, anchor.clone(), bracket.clone()),
            Err(Error::AsymmetricPairing)
        ));
        let degenerate = vec![vec![Scalar::one(), Scalar::one()]; 2];
        assert!(matches!(
            CourantStructure::new(chart.clone(), labels.clone(), degenerate, anchor.clone(), bracket.clone()),
            Err(Error::SingularMatrix(_))
        ));
        let clash = vec!["x".to_string(), "b".to_string()];
        assert!(CourantStructure::new(chart, clash, sym, anchor, bracket).is_err());
    }

    #[test]
    fn point_chart_quadratic_structure() {
        // Structure constants of a 3-dimensional quadratic Lie algebra on a
        // dimension-0 chart: [g_a, g_b] = g_c cyclically, pairing = identity.
        let chart = ChartContext::rational(&[]).unwrap();
        let labels: Vec<String> = vec!["g1".into(), "g2".into(), "g3".into()];
        let pairing = crate::linalg::identity_scalar(3);
        let anchor = vec![VectorField::zero(0); 3];
        let mut bracket = vec![vec![Section::zero(0, 3); 3]; 3];
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            bracket[i][j] = Section::basis(0, 3, k);
            bracket[j][i] = {
                let s = Section::basis(0, 3, k);
                -&s
            };
        }
        let e = CourantStructure::new(chart, labels, pairing, anchor, bracket).unwrap();
        let g1 = e.frame_section(0);
        let g2 = e.frame_section(1);
        let g3 = e.frame_section(2);
        assert_eq!(e.dorfman(&g1, &g2), g3);
        // Jacobi instance
        let lhs = e.dorfman(&g1, &e.dorfman(&g2, &g3));
        let rhs = &e.dorfman(&e.dorfman(&g1, &g2), &g3) + &e.dorfman(&g2, &e.dorfman(&g1, &g3));
        assert_eq!(lhs, rhs);
    }
}
