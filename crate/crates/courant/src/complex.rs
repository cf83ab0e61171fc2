//! Polynomial models of complex charts: paired holomorphic/antiholomorphic
//! variables over ℚ(i) with a conjugation involution, bidegree projections,
//! the induced flat cross-connections on fields and forms, and the matched
//! pair whose sum is the fully twisted complexified standard structure.

use crate::calculus::{DiffForm, VectorField};
use crate::chart::ChartContext;
use crate::connection::Connection;
use crate::courant::{make_twisted_standard, CourantStructure, Section};
use crate::error::{Error, Result};
use crate::matched::{matched_sum, MatchedPairData};
use crate::poly::Polynomial;
use crate::report::{VerificationReport, Witness};
use crate::scalar::ScalarField;
use crate::verify::run_check;

/// Pure bidegree of a field or form on a complex chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bidegree {
    /// Type (1,0): spanned by the holomorphic frame.
    Holomorphic,
    /// Type (0,1): spanned by the antiholomorphic frame.
    Antiholomorphic,
}

impl Bidegree {
    pub fn opposite(self) -> Bidegree {
        match self {
            Bidegree::Holomorphic => Bidegree::Antiholomorphic,
            Bidegree::Antiholomorphic => Bidegree::Holomorphic,
        }
    }
}

/// Polynomial model of ℂⁿ: each holomorphic coordinate `z` is paired with an
/// independent conjugate variable `zb`, scalars live in ℚ(i), and the
/// conjugation involution swaps the two halves while conjugating scalars.
#[derive(Debug, Clone)]
pub struct ComplexChart {
    context: ChartContext,
    n: usize,
    perm: Vec<usize>,
}

impl ComplexChart {
    /// Build from holomorphic coordinate names; the conjugate of `z` is
    /// named `zb`, with any numeric suffix kept after the `b` (so `z1`
    /// pairs with `zb1`).
    pub fn new(hol_names: &[&str]) -> Result<Self> {
        let n = hol_names.len();
        let anti: Vec<String> = hol_names
            .iter()
            .map(|s| {
                let split = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
                format!("{}b{}", &s[..split], &s[split..])
            })
            .collect();
        let mut all: Vec<&str> = hol_names.to_vec();
        all.extend(anti.iter().map(|s| s.as_str()));
        let context = ChartContext::new(&all, ScalarField::GaussianRational)?;
        let perm: Vec<usize> = (0..2 * n).map(|i| (i + n) % (2 * n)).collect();
        Ok(ComplexChart { context, n, perm })
    }

    /// The underlying 2n-variable chart (holomorphic names first).
    pub fn context(&self) -> &ChartContext {
        &self.context
    }

    /// Number of holomorphic coordinates.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Variable index of the `i`-th coordinate in the given half.
    pub fn var_index(&self, deg: Bidegree, i: usize) -> usize {
        match deg {
            Bidegree::Holomorphic => i,
            Bidegree::Antiholomorphic => self.n + i,
        }
    }

    fn in_half(&self, var: usize, deg: Bidegree) -> bool {
        match deg {
            Bidegree::Holomorphic => var < self.n,
            Bidegree::Antiholomorphic => var >= self.n,
        }
    }

    /// Keep only the components along the given half of the frame.
    pub fn project_field(&self, x: &VectorField, deg: Bidegree) -> VectorField {
        let comps = (0..2 * self.n)
            .map(|i| {
                if self.in_half(i, deg) {
                    x.component(i).clone()
                } else {
                    Polynomial::zero(2 * self.n)
                }
            })
            .collect();
        VectorField::from_components(comps)
    }

    /// Keep only the terms whose indices all lie in the given half.
    pub fn project_form(&self, w: &DiffForm, deg: Bidegree) -> DiffForm {
        let mut out = DiffForm::zero(2 * self.n, w.degree());
        for (idx, c) in w.terms() {
            if idx.iter().all(|&i| self.in_half(i, deg)) {
                out = out.add(&DiffForm::from_term(2 * self.n, idx, c.clone()));
            }
        }
        out
    }

    /// The component with exactly `hol_count` holomorphic indices per term;
    /// summing over `0..=degree` recovers the form.
    pub fn form_component(&self, w: &DiffForm, hol_count: usize) -> DiffForm {
        let mut out = DiffForm::zero(2 * self.n, w.degree());
        for (idx, c) in w.terms() {
            if idx.iter().filter(|&&i| i < self.n).count() == hol_count {
                out = out.add(&DiffForm::from_term(2 * self.n, idx, c.clone()));
            }
        }
        out
    }

    /// Pure bidegree of a nonzero field; `None` for the zero field.
    pub fn field_bidegree(&self, x: &VectorField) -> Result<Option<Bidegree>> {
        let hol = (0..self.n).any(|i| !x.component(i).is_zero());
        let anti = (self.n..2 * self.n).any(|i| !x.component(i).is_zero());
        match (hol, anti) {
            (true, true) => Err(Error::MixedBidegree(
                "vector field has components in both halves of the frame".into(),
            )),
            (true, false) => Ok(Some(Bidegree::Holomorphic)),
            (false, true) => Ok(Some(Bidegree::Antiholomorphic)),
            (false, false) => Ok(None),
        }
    }

    /// Pure bidegree of a nonzero positive-degree form; `None` for zero.
    pub fn form_bidegree(&self, w: &DiffForm) -> Result<Option<Bidegree>> {
        if w.degree() == 0 {
            return Err(Error::MixedBidegree("a 0-form has no bidegree".into()));
        }
        let mut seen: Option<Bidegree> = None;
        for (idx, _) in w.terms() {
            let deg = if idx.iter().all(|&i| i < self.n) {
                Bidegree::Holomorphic
            } else if idx.iter().all(|&i| i >= self.n) {
                Bidegree::Antiholomorphic
            } else {
                return Err(Error::MixedBidegree(
                    "form term mixes holomorphic and antiholomorphic indices".into(),
                ));
            };
            match seen {
                None => seen = Some(deg),
                Some(d) if d == deg => {}
                Some(_) => {
                    return Err(Error::MixedBidegree(
                        "form has terms of different pure bidegrees".into(),
                    ))
                }
            }
        }
        Ok(seen)
    }

    /// Conjugation on scalars and variables (z ↔ zb).
    pub fn conjugate_poly(&self, p: &Polynomial) -> Polynomial {
        p.conjugate(&self.perm)
    }

    /// Conjugation on vector fields: `conj(Σ fᵢ ∂ᵢ) = Σ conj(fᵢ) ∂_{σ(i)}`.
    pub fn conjugate_field(&self, x: &VectorField) -> VectorField {
        let mut comps = vec![Polynomial::zero(2 * self.n); 2 * self.n];
        for i in 0..2 * self.n {
            comps[self.perm[i]] = self.conjugate_poly(x.component(i));
        }
        VectorField::from_components(comps)
    }

    /// Conjugation on forms: indices swap halves (with the reordering sign)
    /// and coefficients conjugate.
    pub fn conjugate_form(&self, w: &DiffForm) -> DiffForm {
        let nv = 2 * self.n;
        let mut out = DiffForm::zero(nv, w.degree());
        for (idx, c) in w.terms() {
            let mapped: Vec<usize> = idx.iter().map(|&i| self.perm[i]).collect();
            let mut inversions = 0usize;
            for a in 0..mapped.len() {
                for b in a + 1..mapped.len() {
                    if mapped[a] > mapped[b] {
                        inversions += 1;
                    }
                }
            }
            let mut sorted = mapped;
            sorted.sort_unstable();
            let mut coeff = self.conjugate_poly(c);
            if inversions % 2 == 1 {
                coeff = -&coeff;
            }
            out = out.add(&DiffForm::from_term(nv, &sorted, coeff));
        }
        out
    }

    /// Coefficient-wise conjugation of a frame-coordinate section (the frame
    /// identification is handled by the caller).
    pub fn conjugate_coeffs(&self, s: &Section) -> Section {
        Section::from_coeffs(s.coeffs().iter().map(|p| self.conjugate_poly(p)).collect())
    }
}

fn expect_opposite(dir: Option<Bidegree>, acted: Option<Bidegree>) -> Result<()> {
    if let (Some(a), Some(b)) = (dir, acted) {
        if a == b {
            return Err(Error::MixedBidegree(
                "direction and argument must have opposite bidegrees".into(),
            ));
        }
    }
    Ok(())
}

/// Cross-connection on fields: for a pure direction `x` and a pure field `y`
/// of the opposite bidegree, the projection of `[x, y]` onto `y`'s bidegree.
/// Flat because the two halves of the coordinate frame commute.
pub fn dolbeault_field(chart: &ComplexChart, x: &VectorField, y: &VectorField) -> Result<VectorField> {
    let dx = chart.field_bidegree(x)?;
    let dy = chart.field_bidegree(y)?;
    expect_opposite(dx, dy)?;
    match dy {
        None => Ok(VectorField::zero(2 * chart.dim())),
        Some(deg) => Ok(chart.project_field(&x.lie_bracket(y)?, deg)),
    }
}

/// Cross-connection on forms: for a pure direction `x` and a pure form `w`
/// of the opposite bidegree, the projection of the Lie derivative `L_x w`
/// onto `w`'s bidegree.
pub fn dolbeault_form(chart: &ComplexChart, x: &VectorField, w: &DiffForm) -> Result<DiffForm> {
    let dx = chart.field_bidegree(x)?;
    let dw = chart.form_bidegree(w)?;
    expect_opposite(dx, dw)?;
    match dw {
        None => Ok(DiffForm::zero(2 * chart.dim(), w.degree())),
        Some(deg) => Ok(chart.project_form(&w.lie_derivative(x)?, deg)),
    }
}

/// The twisted standard structure carried by one half of the complexified
/// frame: rank 2n with frame `(e.., d..)` over the half's coordinates,
/// crosswise pairing, the half's coordinate fields as anchors, and the pure
/// twist feeding the `e ⋄ e` entries. The twist must be pure of bidegree
/// `(3,0)` or `(0,3)` matching `deg`.
pub fn half_twisted_standard(
    chart: &ComplexChart,
    deg: Bidegree,
    twist: &DiffForm,
) -> Result<CourantStructure> {
    let n = chart.dim();
    let nv = 2 * n;
    if twist.nvars() != nv || twist.degree() != 3 {
        return Err(Error::ShapeMismatch("half twist must be a 3-form on the chart".into()));
    }
    let pure_count = match deg {
        Bidegree::Holomorphic => 3,
        Bidegree::Antiholomorphic => 0,
    };
    if !chart.form_component(twist, pure_count).sub(twist).is_zero() {
        return Err(Error::MixedBidegree(
            "half twist must be pure of the half's bidegree".into(),
        ));
    }
    let names: Vec<&str> = (0..n)
        .map(|i| chart.context().name(chart.var_index(deg, i)))
        .collect();
    let mut labels: Vec<String> = names.iter().map(|nm| format!("e_{nm}")).collect();
    labels.extend(names.iter().map(|nm| format!("d_{nm}")));
    let mut pairing = vec![vec![crate::scalar::Scalar::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        pairing[i][n + i] = crate::scalar::Scalar::one();
        pairing[n + i][i] = crate::scalar::Scalar::one();
    }
    let mut anchor = vec![VectorField::zero(nv); 2 * n];
    for (i, slot) in anchor.iter_mut().take(n).enumerate() {
        *slot = VectorField::coordinate(nv, chart.var_index(deg, i));
    }
    let mut bracket = vec![vec![Section::zero(nv, 2 * n); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let inserted = twist.insert_pair(
                &VectorField::coordinate(nv, chart.var_index(deg, i)),
                &VectorField::coordinate(nv, chart.var_index(deg, j)),
            )?;
            let mut coeffs = vec![Polynomial::zero(nv); 2 * n];
            for (k, c) in coeffs.iter_mut().skip(n).enumerate() {
                *c = inserted.coefficient(&[chart.var_index(deg, k)]);
            }
            bracket[i][j] = Section::from_coeffs(coeffs);
        }
    }
    CourantStructure::new(chart.context().clone(), labels, pairing, anchor, bracket)
}

/// Split a closed 3-form by bidegree and assemble the matched pair of the
/// two half-twisted standard structures: the `(3,0)` part twists the
/// holomorphic half, the `(0,3)` part the antiholomorphic half, and the two
/// mixed parts feed the cross-connections
/// `∇→_{X⊕α}(Y⊕β) = ∇ᵒ_X Y ⊕ ∇ᵒ_X β + H^{1,2}(X,Y,·)` and
/// `∇←_{Y⊕β}(X⊕α) = ∇ᵒ_Y X ⊕ ∇ᵒ_Y α + H^{2,1}(Y,X,·)`.
pub fn build_complex_matched_pair(chart: &ComplexChart, h: &DiffForm) -> Result<MatchedPairData> {
    let n = chart.dim();
    let nv = 2 * n;
    if h.nvars() != nv || h.degree() != 3 {
        return Err(Error::ShapeMismatch("twist must be a 3-form on the chart".into()));
    }
    if !h.exterior_derivative().is_zero() {
        return Err(Error::NonClosedTwist);
    }
    let left = half_twisted_standard(chart, Bidegree::Holomorphic, &chart.form_component(h, 3))?;
    let right =
        half_twisted_standard(chart, Bidegree::Antiholomorphic, &chart.form_component(h, 0))?;
    let h21 = chart.form_component(h, 2);
    let h12 = chart.form_component(h, 1);
    // Coordinate frames commute and their coordinate forms are constant, so
    // the pure cross-connection terms vanish on frames; only the mixed twist
    // components survive.
    let mut right_table = vec![vec![Section::zero(nv, 2 * n); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let inserted = h12.insert_pair(
                &VectorField::coordinate(nv, chart.var_index(Bidegree::Holomorphic, i)),
                &VectorField::coordinate(nv, chart.var_index(Bidegree::Antiholomorphic, j)),
            )?;
            let mut coeffs = vec![Polynomial::zero(nv); 2 * n];
            for (k, c) in coeffs.iter_mut().skip(n).enumerate() {
                *c = inserted.coefficient(&[chart.var_index(Bidegree::Antiholomorphic, k)]);
            }
            right_table[i][j] = Section::from_coeffs(coeffs);
        }
    }
    let mut left_table = vec![vec![Section::zero(nv, 2 * n); 2 * n]; 2 * n];
    for j in 0..n {
        for i in 0..n {
            let inserted = h21.insert_pair(
                &VectorField::coordinate(nv, chart.var_index(Bidegree::Antiholomorphic, j)),
                &VectorField::coordinate(nv, chart.var_index(Bidegree::Holomorphic, i)),
            )?;
            let mut coeffs = vec![Polynomial::zero(nv); 2 * n];
            for (k, c) in coeffs.iter_mut().skip(n).enumerate() {
                *c = inserted.coefficient(&[chart.var_index(Bidegree::Holomorphic, k)]);
            }
            left_table[j][i] = Section::from_coeffs(coeffs);
        }
    }
    MatchedPairData::new(left, right, Connection::new(right_table), Connection::new(left_table))
}

/// Compare the matched sum of a complex pair against the fully twisted
/// complexified standard structure under the canonical frame identification
/// (sum order `e_hol, d_hol, e_anti, d_anti` versus standard order
/// `e_all, d_all`): exact entrywise checks `pairing`, `anchor`, and
/// `bracket-table`.
pub fn check_sum_isomorphism(
    chart: &ComplexChart,
    pair: &MatchedPairData,
    h: &DiffForm,
) -> Result<VerificationReport> {
    let n = chart.dim();
    let sum = matched_sum(pair)?;
    let standard = make_twisted_standard(chart.context(), h, false)?;
    let mut perm: Vec<usize> = Vec::with_capacity(4 * n);
    perm.extend(0..n);
    perm.extend(2 * n..3 * n);
    perm.extend(n..2 * n);
    perm.extend(3 * n..4 * n);
    let expected = standard.reorder(&perm)?;
    let mut report = VerificationReport::new("matched sum isomorphism verification");
    report.push_meta("chart", chart.context().names().join(","));
    report.push_meta("twist", crate::expr::form_to_string(chart.context(), h));
    let rank = sum.rank();
    let pairs: Vec<(usize, usize)> =
        (0..rank).flat_map(|i| (0..rank).map(move |j| (i, j))).collect();
    let singles: Vec<usize> = (0..rank).collect();
    report.push_check(run_check("pairing", &pairs, |&(i, j)| {
        let got = &sum.pairing_matrix()[i][j];
        let want = &expected.pairing_matrix()[i][j];
        if got == want {
            None
        } else {
            Some(Witness::new(
                vec![
                    ("left".into(), sum.labels()[i].clone()),
                    ("right".into(), sum.labels()[j].clone()),
                ],
                (got - want).to_string(),
            ))
        }
    }));
    report.push_check(run_check("anchor", &singles, |&i| {
        let diff = sum.anchor_table()[i].sub(&expected.anchor_table()[i]);
        if diff.is_zero() {
            None
        } else {
            Some(Witness::new(
                vec![("frame".into(), sum.labels()[i].clone())],
                crate::calculus::vector_field_to_string(chart.context(), &diff),
            ))
        }
    }));
    report.push_check(run_check("bracket-table", &pairs, |&(i, j)| {
        let diff = sum.bracket_entry(i, j) - expected.bracket_entry(i, j);
        if diff.is_zero() {
            None
        } else {
            Some(Witness::new(
                vec![
                    ("left".into(), sum.labels()[i].clone()),
                    ("right".into(), sum.labels()[j].clone()),
                ],
                sum.section_string(&diff),
            ))
        }
    }));
    Ok(report)
}
