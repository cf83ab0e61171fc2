//! Matched pairs of Courant structures: two structures over one chart coupled
//! by a pair of mutual connections, the induced bracket on the direct sum,
//! the compatibility system equivalent to the sum's Jacobi identity, and the
//! inverse operation splitting a structure along orthogonal subframes.

use crate::calculus::VectorField;
use crate::chart::ChartContext;
use crate::connection::Connection;
use crate::courant::{CourantStructure, Section};
use crate::error::{Error, Result};
use crate::linalg::{apply_scalar_matrix, block_diag, invert_scalar_matrix, is_symmetric};
use crate::poly::Polynomial;
use crate::report::{VerificationReport, Witness};
use crate::scalar::Scalar;
use crate::verify::{random_poly, random_section, run_check, Labelled, SampleSpec};

/// A candidate matched pair: two Courant structures over one chart and the
/// two coupling connections (`right_action` differentiates right-bundle
/// sections along left-bundle directions; `left_action` the reverse).
#[derive(Debug, Clone)]
pub struct MatchedPairData {
    pub left: CourantStructure,
    pub right: CourantStructure,
    pub right_action: Connection,
    pub left_action: Connection,
}

impl MatchedPairData {
    pub fn new(
        left: CourantStructure,
        right: CourantStructure,
        right_action: Connection,
        left_action: Connection,
    ) -> Result<Self> {
        left.chart().expect_same(right.chart(), "matched pair components")?;
        right_action.validate(&left, &right)?;
        left_action.validate(&right, &left)?;
        Ok(MatchedPairData { left, right, right_action, left_action })
    }

    pub fn chart(&self) -> &ChartContext {
        self.left.chart()
    }

    /// `∇→_c α` for a left-bundle direction `c` and right-bundle section `α`.
    pub fn nabla_right(&self, c: &Section, alpha: &Section) -> Section {
        self.right_action.apply(&self.left, c, alpha)
    }

    /// `∇←_γ a` for a right-bundle direction `γ` and left-bundle section `a`.
    pub fn nabla_left(&self, gamma: &Section, a: &Section) -> Section {
        self.left_action.apply(&self.right, gamma, a)
    }
}

/// Mixing map `Ω` into the right bundle, solved from
/// `⟨γ, Ω(a,b)⟩₂ = ½(⟨∇←_γ a, b⟩₁ − ⟨a, ∇←_γ b⟩₁)` over the right frame.
pub fn omega_map(pair: &MatchedPairData, a: &Section, b: &Section) -> Section {
    let r2 = pair.right.rank();
    let half = Scalar::half();
    let rhs: Vec<Polynomial> = (0..r2)
        .map(|k| {
            let gamma = pair.right.frame_section(k);
            let t = &pair.left.pairing(&pair.nabla_left(&gamma, a), b)
                - &pair.left.pairing(a, &pair.nabla_left(&gamma, b));
            t.scale(&half)
        })
        .collect();
    Section::from_coeffs(apply_scalar_matrix(pair.right.pairing_inverse(), &rhs))
}

/// Mixing map `℧` into the left bundle, solved from
/// `⟨c, ℧(α,β)⟩₁ = ½(⟨∇→_c α, β⟩₂ − ⟨α, ∇→_c β⟩₂)` over the left frame.
pub fn mho_map(pair: &MatchedPairData, alpha: &Section, beta: &Section) -> Section {
    let r1 = pair.left.rank();
    let half = Scalar::half();
    let rhs: Vec<Polynomial> = (0..r1)
        .map(|k| {
            let c = pair.left.frame_section(k);
            let t = &pair.right.pairing(&pair.nabla_right(&c, alpha), beta)
                - &pair.right.pairing(alpha, &pair.nabla_right(&c, beta));
            t.scale(&half)
        })
        .collect();
    Section::from_coeffs(apply_scalar_matrix(pair.left.pairing_inverse(), &rhs))
}

/// Build the direct-sum Courant structure of a candidate pair.
///
/// The sum frame concatenates both frames; the pairing is block diagonal, the
/// anchor is the sum of anchors, and the bracket table couples the component
/// tables through the connections and the mixing maps `Ω`, `℧`.
pub fn matched_sum(pair: &MatchedPairData) -> Result<CourantStructure> {
    let chart = pair.chart().clone();
    let n = chart.dim();
    let (r1, r2) = (pair.left.rank(), pair.right.rank());
    let rank = r1 + r2;
    let mut labels = pair.left.labels().to_vec();
    labels.extend(pair.right.labels().iter().cloned());
    let pairing = block_diag(pair.left.pairing_matrix(), pair.right.pairing_matrix());
    let mut anchor = pair.left.anchor_table().to_vec();
    anchor.extend(pair.right.anchor_table().iter().cloned());
    let mut bracket = vec![vec![Section::zero(n, rank); rank]; rank];
    for i in 0..r1 {
        for j in 0..r1 {
            let omega = omega_map(pair, &pair.left.frame_section(i), &pair.left.frame_section(j));
            bracket[i][j] = pair.left.bracket_entry(i, j).concat(&omega);
        }
    }
    for a in 0..r2 {
        for b in 0..r2 {
            let mho = mho_map(pair, &pair.right.frame_section(a), &pair.right.frame_section(b));
            bracket[r1 + a][r1 + b] = mho.concat(pair.right.bracket_entry(a, b));
        }
    }
    for i in 0..r1 {
        for b in 0..r2 {
            let down = pair.nabla_left(&pair.right.frame_section(b), &pair.left.frame_section(i));
            let up = pair.nabla_right(&pair.left.frame_section(i), &pair.right.frame_section(b));
            bracket[i][r1 + b] = (-&down).concat(&up);
            bracket[r1 + b][i] = down.concat(&-&up);
        }
    }
    CourantStructure::new(chart, labels, pairing, anchor, bracket)
}

/// Direct evaluation of the matched-sum bracket on component data:
/// `(a⊕α)⋄(b⊕β) = (a⋄₁b + ∇←_α b − ∇←_β a + ℧(α,β) + ½D₁⟨α,β⟩₂)
/// ⊕ (α⋄₂β + ∇→_a β − ∇→_b α + Ω(a,b) + ½D₂⟨a,b⟩₁)`;
/// used as an independent oracle for the frame-table extension.
pub fn full_bracket(
    pair: &MatchedPairData,
    a: &Section,
    alpha: &Section,
    b: &Section,
    beta: &Section,
) -> (Section, Section) {
    let half = Scalar::half();
    let mut left_part = pair.left.dorfman(a, b);
    left_part = &left_part + &pair.nabla_left(alpha, b);
    left_part = &left_part - &pair.nabla_left(beta, a);
    left_part = &left_part + &mho_map(pair, alpha, beta);
    left_part = &left_part
        + &pair.left.d_operator(&pair.right.pairing(alpha, beta)).scale_scalar(&half);
    let mut right_part = pair.right.dorfman(alpha, beta);
    right_part = &right_part + &pair.nabla_right(a, beta);
    right_part = &right_part - &pair.nabla_right(b, alpha);
    right_part = &right_part + &omega_map(pair, a, b);
    right_part = &right_part
        + &pair.right.d_operator(&pair.left.pairing(a, b)).scale_scalar(&half);
    (left_part, right_part)
}

// ---------------------------------------------------------------------------
// Compatibility verification
// ---------------------------------------------------------------------------

type MixedTuple = (Vec<Labelled>, Vec<Labelled>);

/// Instance ladder over mixed bundle tuples: all frame combinations, then the
/// same with the first slot dressed by each coordinate, then random sections.
fn mixed_tuples(
    pair: &MatchedPairData,
    spec: &SampleSpec,
    check: &str,
    left_arity: usize,
    right_arity: usize,
) -> Vec<MixedTuple> {
    let (r1, r2) = (pair.left.rank(), pair.right.rank());
    let n = pair.chart().dim();
    let mut out: Vec<MixedTuple> = Vec::new();
    let total = left_arity + right_arity;
    let radix: Vec<usize> =
        (0..total).map(|s| if s < left_arity { r1 } else { r2 }).collect();
    if radix.iter().all(|&r| r > 0) {
        let mut idx = vec![0usize; total];
        'outer: loop {
            let lefts = (0..left_arity)
                .map(|s| Labelled::new(&pair.left, pair.left.frame_section(idx[s])))
                .collect();
            let rights = (left_arity..total)
                .map(|s| Labelled::new(&pair.right, pair.right.frame_section(idx[s])))
                .collect();
            out.push((lefts, rights));
            let mut s = total;
            loop {
                if s == 0 {
                    break 'outer;
                }
                idx[s - 1] += 1;
                if idx[s - 1] < radix[s - 1] {
                    break;
                }
                idx[s - 1] = 0;
                s -= 1;
            }
        }
    }
    let frame_tuples = out.len();
    for t in 0..frame_tuples {
        for m in 0..n {
            let mut tuple = out[t].clone();
            let var = pair.chart().var(m);
            if left_arity > 0 {
                let dressed = tuple.0[0].section.scale(&var);
                tuple.0[0] = Labelled::new(&pair.left, dressed);
            } else if right_arity > 0 {
                let dressed = tuple.1[0].section.scale(&var);
                tuple.1[0] = Labelled::new(&pair.right, dressed);
            }
            out.push(tuple);
        }
    }
    let mut rng = spec.rng(check);
    for _ in 0..spec.samples {
        let lefts = (0..left_arity)
            .map(|_| {
                Labelled::new(
                    &pair.left,
                    random_section(&mut rng, pair.chart(), r1, spec.max_degree),
                )
            })
            .collect();
        let rights = (0..right_arity)
            .map(|_| {
                Labelled::new(
                    &pair.right,
                    random_section(&mut rng, pair.chart(), r2, spec.max_degree),
                )
            })
            .collect();
        out.push((lefts, rights));
    }
    out
}

fn poly_witness(
    chart: &ChartContext,
    slots: Vec<(&str, &Labelled)>,
    residual: &Polynomial,
) -> Option<Witness> {
    if residual.is_zero() {
        None
    } else {
        Some(Witness::new(
            slots.into_iter().map(|(n, l)| (n.to_string(), l.text.clone())).collect(),
            crate::expr::poly_to_string(chart, residual),
        ))
    }
}

fn section_witness(
    host: &CourantStructure,
    slots: Vec<(&str, &Labelled)>,
    residual: &Section,
) -> Option<Witness> {
    if residual.is_zero() {
        None
    } else {
        Some(Witness::new(
            slots.into_iter().map(|(n, l)| (n.to_string(), l.text.clone())).collect(),
            host.section_string(residual),
        ))
    }
}

/// Verify the full matched-pair compatibility system.
///
/// Checks, in order: `metric-left` / `metric-right` (each connection
/// preserves the other side's pairing), `dflat-right` / `dflat-left` (exact
/// directions act trivially), `bracket-derivation-1` / `-2` (each connection
/// is a derivation of the other side's bracket up to the mixing-map terms),
/// `curvature-compat` (the two curvatures cancel as quadratic forms),
/// and `omega-cyclic` / `mho-cyclic` (cyclic vanishing of mixed rotations).
/// A pair passes all nine iff the matched sum satisfies the Jacobi identity,
/// given that both components are Courant structures.
pub fn check_matched_pair(pair: &MatchedPairData, spec: &SampleSpec) -> VerificationReport {
    let mut report = VerificationReport::new("matched-pair compatibility verification");
    report.push_meta("chart", pair.chart().names().join(","));
    report.push_meta("left-rank", pair.left.rank());
    report.push_meta("right-rank", pair.right.rank());
    spec.describe(&mut report);
    let half = Scalar::half();

    let items = mixed_tuples(pair, spec, "metric-left", 2, 1);
    report.push_check(run_check("metric-left", &items, |(ls, rs)| {
        let (a, b, gamma) = (&ls[0], &ls[1], &rs[0]);
        let lhs = pair
            .right
            .anchor_apply(&gamma.section)
            .apply(&pair.left.pairing(&a.section, &b.section));
        let r1 = pair.left.pairing(&pair.nabla_left(&gamma.section, &a.section), &b.section);
        let r2 = pair.left.pairing(&a.section, &pair.nabla_left(&gamma.section, &b.section));
        let residual = &(&lhs - &r1) - &r2;
        poly_witness(pair.chart(), vec![("gamma", gamma), ("a", a), ("b", b)], &residual)
    }));

    let items = mixed_tuples(pair, spec, "metric-right", 1, 2);
    report.push_check(run_check("metric-right", &items, |(ls, rs)| {
        let (c, alpha, beta) = (&ls[0], &rs[0], &rs[1]);
        let lhs = pair
            .left
            .anchor_apply(&c.section)
            .apply(&pair.right.pairing(&alpha.section, &beta.section));
        let r1 = pair.right.pairing(&pair.nabla_right(&c.section, &alpha.section), &beta.section);
        let r2 = pair.right.pairing(&alpha.section, &pair.nabla_right(&c.section, &beta.section));
        let residual = &(&lhs - &r1) - &r2;
        poly_witness(pair.chart(), vec![("c", c), ("alpha", alpha), ("beta", beta)], &residual)
    }));

    let dflat_right_items = function_cross_frames(pair, spec, "dflat-right", false);
    report.push_check(run_check("dflat-right", &dflat_right_items, |(f_text, f, acted)| {
        let residual = pair.nabla_right(&pair.left.d_operator(f), &acted.section);
        if residual.is_zero() {
            None
        } else {
            Some(Witness::new(
                vec![("f".into(), f_text.clone()), ("beta".into(), acted.text.clone())],
                pair.right.section_string(&residual),
            ))
        }
    }));

    let dflat_left_items = function_cross_frames(pair, spec, "dflat-left", true);
    report.push_check(run_check("dflat-left", &dflat_left_items, |(f_text, f, acted)| {
        let residual = pair.nabla_left(&pair.right.d_operator(f), &acted.section);
        if residual.is_zero() {
            None
        } else {
            Some(Witness::new(
                vec![("f".into(), f_text.clone()), ("b".into(), acted.text.clone())],
                pair.left.section_string(&residual),
            ))
        }
    }));

    let items = mixed_tuples(pair, spec, "bracket-derivation-1", 2, 1);
    report.push_check(run_check("bracket-derivation-1", &items, |(ls, rs)| {
        let (a1, a2, alpha) = (&ls[0], &ls[1], &rs[0]);
        let mut residual =
            pair.nabla_left(&alpha.section, &pair.left.dorfman(&a1.section, &a2.section));
        residual =
            &residual - &pair.left.dorfman(&pair.nabla_left(&alpha.section, &a1.section), &a2.section);
        residual =
            &residual - &pair.left.dorfman(&a1.section, &pair.nabla_left(&alpha.section, &a2.section));
        residual = &residual
            - &pair.nabla_left(&pair.nabla_right(&a2.section, &alpha.section), &a1.section);
        residual = &residual
            + &pair.nabla_left(&pair.nabla_right(&a1.section, &alpha.section), &a2.section);
        let t = &omega_map(pair, &a1.section, &a2.section)
            + &pair
                .right
                .d_operator(&pair.left.pairing(&a1.section, &a2.section))
                .scale_scalar(&half);
        residual = &residual + &mho_map(pair, &alpha.section, &t);
        residual = &residual
            + &pair
                .left
                .d_operator(&pair.right.pairing(&alpha.section, &t))
                .scale_scalar(&half);
        section_witness(&pair.left, vec![("alpha", alpha), ("a1", a1), ("a2", a2)], &residual)
    }));

    let items = mixed_tuples(pair, spec, "bracket-derivation-2", 1, 2);
    report.push_check(run_check("bracket-derivation-2", &items, |(ls, rs)| {
        let (a, alpha1, alpha2) = (&ls[0], &rs[0], &rs[1]);
        let mut residual =
            pair.nabla_right(&a.section, &pair.right.dorfman(&alpha1.section, &alpha2.section));
        residual = &residual
            - &pair
                .right
                .dorfman(&pair.nabla_right(&a.section, &alpha1.section), &alpha2.section);
        residual = &residual
            - &pair
                .right
                .dorfman(&alpha1.section, &pair.nabla_right(&a.section, &alpha2.section));
        residual = &residual
            - &pair.nabla_right(&pair.nabla_left(&alpha2.section, &a.section), &alpha1.section);
        residual = &residual
            + &pair.nabla_right(&pair.nabla_left(&alpha1.section, &a.section), &alpha2.section);
        let s = &mho_map(pair, &alpha1.section, &alpha2.section)
            + &pair
                .left
                .d_operator(&pair.right.pairing(&alpha1.section, &alpha2.section))
                .scale_scalar(&half);
        residual = &residual + &omega_map(pair, &a.section, &s);
        residual = &residual
            + &pair
                .right
                .d_operator(&pair.left.pairing(&a.section, &s))
                .scale_scalar(&half);
        section_witness(&pair.right, vec![("a", a), ("alpha1", alpha1), ("alpha2", alpha2)], &residual)
    }));

    let items = mixed_tuples(pair, spec, "curvature-compat", 2, 2);
    report.push_check(run_check("curvature-compat", &items, |(ls, rs)| {
        let (a, b, alpha, beta) = (&ls[0], &ls[1], &rs[0], &rs[1]);
        let r_right = pair.right_action.curvature(&pair.left, &a.section, &b.section, &alpha.section);
        let r_left = pair.left_action.curvature(&pair.right, &alpha.section, &beta.section, &a.section);
        let residual = &pair.right.pairing(&r_right, &beta.section)
            + &pair.left.pairing(&r_left, &b.section);
        poly_witness(
            pair.chart(),
            vec![("a", a), ("b", b), ("alpha", alpha), ("beta", beta)],
            &residual,
        )
    }));

    let items = mixed_tuples(pair, spec, "omega-cyclic", 3, 0);
    report.push_check(run_check("omega-cyclic", &items, |(ls, _)| {
        let (a1, a2, a3) = (&ls[0], &ls[1], &ls[2]);
        let mut residual =
            pair.nabla_left(&omega_map(pair, &a1.section, &a2.section), &a3.section);
        residual =
            &residual + &pair.nabla_left(&omega_map(pair, &a2.section, &a3.section), &a1.section);
        residual =
            &residual + &pair.nabla_left(&omega_map(pair, &a3.section, &a1.section), &a2.section);
        section_witness(&pair.left, vec![("a1", a1), ("a2", a2), ("a3", a3)], &residual)
    }));

    let items = mixed_tuples(pair, spec, "mho-cyclic", 0, 3);
    report.push_check(run_check("mho-cyclic", &items, |(_, rs)| {
        let (al1, al2, al3) = (&rs[0], &rs[1], &rs[2]);
        let mut residual =
            pair.nabla_right(&mho_map(pair, &al1.section, &al2.section), &al3.section);
        residual =
            &residual + &pair.nabla_right(&mho_map(pair, &al2.section, &al3.section), &al1.section);
        residual =
            &residual + &pair.nabla_right(&mho_map(pair, &al3.section, &al1.section), &al2.section);
        section_witness(&pair.right, vec![("alpha1", al1), ("alpha2", al2), ("alpha3", al3)], &residual)
    }));

    report
}

type FunctionFrameItem = (String, Polynomial, Labelled);

/// Ladder of (function, acted frame) pairs for the exact-direction checks.
fn function_cross_frames(
    pair: &MatchedPairData,
    spec: &SampleSpec,
    check: &str,
    acted_is_left: bool,
) -> Vec<FunctionFrameItem> {
    let chart = pair.chart();
    let acted = if acted_is_left { &pair.left } else { &pair.right };
    let mut out: Vec<FunctionFrameItem> = Vec::new();
    for m in 0..chart.dim() {
        for k in 0..acted.rank() {
            out.push((
                chart.name(m).to_string(),
                chart.var(m),
                Labelled::new(acted, acted.frame_section(k)),
            ));
        }
    }
    let mut rng = spec.rng(check);
    for _ in 0..spec.samples {
        let f = random_poly(&mut rng, chart, spec.max_degree);
        let s = random_section(&mut rng, chart, acted.rank(), spec.max_degree);
        out.push((
            crate::expr::poly_to_string(chart, &f),
            f,
            Labelled::new(acted, s),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Splitting along orthogonal subframes
// ---------------------------------------------------------------------------

/// Split a structure along two complementary orthogonal section families,
/// recovering the component structures and coupling connections whose matched
/// sum (in the reordered frame) is the original structure.
///
/// Each family is given as labelled sections of the host; their pairing Gram
/// matrices must be constant and invertible and the two families must be
/// orthogonal, which together force them to span the bundle.
pub fn split(
    e: &CourantStructure,
    first: &[(String, Section)],
    second: &[(String, Section)],
) -> Result<MatchedPairData> {
    let (r1, r2) = (first.len(), second.len());
    if r1 + r2 != e.rank() {
        return Err(Error::ShapeMismatch(format!(
            "split families have {} + {} sections for rank {}",
            r1,
            r2,
            e.rank()
        )));
    }
    let constant_gram = |fam: &[(String, Section)], side: &str| -> Result<Vec<Vec<Scalar>>> {
        let mut g = vec![vec![Scalar::zero(); fam.len()]; fam.len()];
        for (k, (lk, sk)) in fam.iter().enumerate() {
            for (l, (ll, sl)) in fam.iter().enumerate() {
                let p = e.pairing(sk, sl);
                g[k][l] = p.as_constant().ok_or_else(|| {
                    Error::DegenerateRestriction(format!(
                        "{side} pairing ⟨{lk}, {ll}⟩ = {} is not constant",
                        crate::expr::poly_to_string(e.chart(), &p)
                    ))
                })?;
            }
        }
        Ok(g)
    };
    let g1 = constant_gram(first, "first-family")?;
    let g2 = constant_gram(second, "second-family")?;
    if !is_symmetric(&g1) || !is_symmetric(&g2) {
        return Err(Error::Internal("pairing restriction lost symmetry".into()));
    }
    let g1_inv = invert_scalar_matrix(&g1).map_err(|_| {
        Error::DegenerateRestriction("first-family pairing is degenerate".into())
    })?;
    let g2_inv = invert_scalar_matrix(&g2).map_err(|_| {
        Error::DegenerateRestriction("second-family pairing is degenerate".into())
    })?;
    for (lk, sk) in first {
        for (ll, sl) in second {
            let p = e.pairing(sk, sl);
            if !p.is_zero() {
                return Err(Error::NotOrthogonal(format!(
                    "⟨{lk}, {ll}⟩ = {}",
                    crate::expr::poly_to_string(e.chart(), &p)
                )));
            }
        }
    }
    let project = |fam: &[(String, Section)], g_inv: &[Vec<Scalar>], phi: &Section| -> Section {
        let rhs: Vec<Polynomial> = fam.iter().map(|(_, u)| e.pairing(u, phi)).collect();
        Section::from_coeffs(apply_scalar_matrix(g_inv, &rhs))
    };
    let chart = e.chart().clone();
    let build = |fam: &[(String, Section)],
                 gram: Vec<Vec<Scalar>>,
                 g_inv: &[Vec<Scalar>]|
     -> Result<CourantStructure> {
        let labels: Vec<String> = fam.iter().map(|(l, _)| l.clone()).collect();
        let anchor: Vec<VectorField> = fam.iter().map(|(_, u)| e.anchor_apply(u)).collect();
        let bracket: Vec<Vec<Section>> = fam
            .iter()
            .map(|(_, uk)| {
                fam.iter().map(|(_, ul)| project(fam, g_inv, &e.dorfman(uk, ul))).collect()
            })
            .collect();
        CourantStructure::new(chart.clone(), labels, gram, anchor, bracket)
    };
    let left = build(first, g1, &g1_inv)?;
    let right = build(second, g2, &g2_inv)?;
    let right_table: Vec<Vec<Section>> = first
        .iter()
        .map(|(_, u)| {
            second.iter().map(|(_, w)| project(second, &g2_inv, &e.dorfman(u, w))).collect()
        })
        .collect();
    let left_table: Vec<Vec<Section>> = second
        .iter()
        .map(|(_, w)| {
            first.iter().map(|(_, u)| project(first, &g1_inv, &e.dorfman(w, u))).collect()
        })
        .collect();
    MatchedPairData::new(left, right, Connection::new(right_table), Connection::new(left_table))
}

/// Convenience split along two label subsets of the host frame.
pub fn split_by_labels(
    e: &CourantStructure,
    first: &[String],
    second: &[String],
) -> Result<MatchedPairData> {
    let family = |names: &[String]| -> Result<Vec<(String, Section)>> {
        names
            .iter()
            .map(|name| {
                let k = e
                    .labels()
                    .iter()
                    .position(|l| l == name)
                    .ok_or_else(|| Error::UnknownName { offset: 0, name: name.clone() })?;
                Ok((name.clone(), e.frame_section(k)))
            })
            .collect()
    };
    split(e, &family(first)?, &family(second)?)
}

/// First discrepancy between two candidate pairs' defining tables, if any.
pub fn pair_diff(a: &MatchedPairData, b: &MatchedPairData) -> Option<String> {
    if let Some(d) = a.left.table_diff(&b.left) {
        return Some(format!("left component: {d}"));
    }
    if let Some(d) = a.right.table_diff(&b.right) {
        return Some(format!("right component: {d}"));
    }
    if a.right_action != b.right_action {
        return Some("right-action connection tables differ".to_string());
    }
    if a.left_action != b.left_action {
        return Some("left-action connection tables differ".to_string());
    }
    None
}

/// Pair a Courant structure with a flat-fiber bundle: the right bundle gets
/// the trivial bracket and zero anchor, the right action is the supplied
/// fiber connection, and the left action is zero.
pub fn flat_fiber_pair(
    left: CourantStructure,
    fiber_labels: Vec<String>,
    fiber_pairing: Vec<Vec<Scalar>>,
    right_action: Connection,
) -> Result<MatchedPairData> {
    let chart = left.chart().clone();
    let n = chart.dim();
    let r2 = fiber_labels.len();
    let right = CourantStructure::new(
        chart,
        fiber_labels,
        fiber_pairing,
        vec![VectorField::zero(n); r2],
        vec![vec![Section::zero(n, r2); r2]; r2],
    )?;
    let left_action = Connection::zero(n, r2, left.rank());
    MatchedPairData::new(left, right, right_action, left_action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::check_axioms;
    use crate::calculus::DiffForm;
    use crate::courant::make_twisted_standard;
    use crate::expr::parse_polynomial;

    /// Standard untwisted structure on ℝ² paired with a dual-pair fiber
    /// `v1, mu1` carrying the flat connection `∇_{∂x} v1 = x·v1` (and its
    /// metric dual `∇_{∂x} mu1 = −x·mu1`).
    fn dual_fiber_pair(gamma: &str) -> MatchedPairData {
        let chart = ChartContext::rational(&["x", "y"]).unwrap();
        let left = make_twisted_standard(&chart, &DiffForm::zero(2, 3), false).unwrap();
        let g = parse_polynomial(&chart, gamma).unwrap();
        let mut table = vec![vec![Section::zero(2, 2); 2]; left.rank()];
        table[0][0] = Section::basis(2, 2, 0).scale(&g);
        table[0][1] = -&Section::basis(2, 2, 1).scale(&g);
        let pairing = vec![
            vec![Scalar::zero(), Scalar::one()],
            vec![Scalar::one(), Scalar::zero()],
        ];
        flat_fiber_pair(left, vec!["v1".into(), "mu1".into()], pairing, Connection::new(table))
            .unwrap()
    }

    #[test]
    fn flat_dual_fiber_pair_passes_all_conditions() {
        let pair = dual_fiber_pair("x");
        let spec = SampleSpec { samples: 6, ..SampleSpec::default() };
        let report = check_matched_pair(&pair, &spec);
        assert!(report.passed(), "{}", report.render_text());
        assert_eq!(report.checks.len(), 9);
        let sum = matched_sum(&pair).unwrap();
        let axioms = check_axioms(&sum, &spec);
        assert!(axioms.passed(), "{}", axioms.render_text());
    }

    #[test]
    fn mixing_maps_have_the_hand_computed_values() {
        let pair = dual_fiber_pair("x");
        let v1 = pair.right.frame_section(0);
        let mu1 = pair.right.frame_section(1);
        let mho = mho_map(&pair, &v1, &mu1);
        assert_eq!(mho, pair.left.parse_section("x*d_x").unwrap());
        assert!(mho_map(&pair, &v1, &v1).is_zero());
        let ex = pair.left.frame_section(0);
        let ey = pair.left.frame_section(1);
        assert!(omega_map(&pair, &ex, &ey).is_zero());
        let sum = matched_sum(&pair).unwrap();
        let sv1 = sum.parse_section("v1").unwrap();
        let smu1 = sum.parse_section("mu1").unwrap();
        assert_eq!(sum.dorfman(&sv1, &smu1), sum.parse_section("x*d_x").unwrap());
    }

    #[test]
    fn full_bracket_matches_sum_dorfman() {
        let pair = dual_fiber_pair("x");
        let sum = matched_sum(&pair).unwrap();
        let r1 = pair.left.rank();
        let samples = [
            "x*e_x + v1",
            "d_y - y*mu1",
            "e_y + x*y*v1 + mu1",
            "x^2*d_x + y*v1",
        ];
        for sa in samples {
            for sb in samples {
                let pa = sum.parse_section(sa).unwrap();
                let pb = sum.parse_section(sb).unwrap();
                let (a, alpha) = pa.split_at(r1);
                let (b, beta) = pb.split_at(r1);
                let (lp, rp) = full_bracket(&pair, &a, &alpha, &b, &beta);
                assert_eq!(
                    lp.concat(&rp),
                    sum.dorfman(&pa, &pb),
                    "direct formula disagrees on ({sa}, {sb})"
                );
            }
        }
    }

    #[test]
    fn split_inverts_matched_sum() {
        let pair = dual_fiber_pair("x");
        let sum = matched_sum(&pair).unwrap();
        let first: Vec<String> = pair.left.labels().to_vec();
        let second: Vec<String> = pair.right.labels().to_vec();
        let back = split_by_labels(&sum, &first, &second).unwrap();
        assert_eq!(pair_diff(&pair, &back), None);
    }

    #[test]
    fn split_rejects_non_orthogonal_or_degenerate_families() {
        let chart = ChartContext::rational(&["x", "y"]).unwrap();
        let e = make_twisted_standard(&chart, &DiffForm::zero(2, 3), false).unwrap();
        // e_x and d_x pair to 1, so {e_x, e_y} vs {d_x, d_y} is not orthogonal.
        let err = split_by_labels(
            &e,
            &["e_x".into(), "e_y".into()],
            &["d_x".into(), "d_y".into()],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotOrthogonal(_) | Error::DegenerateRestriction(_)));
        // an isotropic family has a degenerate restricted pairing
        let err = split_by_labels(
            &e,
            &["e_x".into(), "d_y".into()],
            &["e_y".into(), "d_x".into()],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotOrthogonal(_) | Error::DegenerateRestriction(_)));
    }

    #[test]
    fn curved_fiber_fails_compat_and_sum_jacobi_together() {
        // γ = y dx is not closed, so the fiber connection is not flat: the
        // compatibility system must fail, and by the equivalence theorem the
        // sum's Jacobi identity must fail too (metric and exactness conditions
        // still hold, so the other axioms stay clean).
        let pair = dual_fiber_pair("y");
        let spec = SampleSpec { samples: 4, ..SampleSpec::default() };
        let report = check_matched_pair(&pair, &spec);
        assert!(!report.passed());
        let by_name = |n: &str| report.checks.iter().find(|c| c.name == n).unwrap();
        assert!(by_name("metric-left").passed());
        assert!(by_name("metric-right").passed());
        assert!(by_name("dflat-right").passed());
        assert!(by_name("dflat-left").passed());
        let curv = by_name("curvature-compat");
        assert!(!curv.passed());
        let w = curv.witness.as_ref().unwrap();
        assert_eq!(
            w.inputs.iter().map(|(_, v)| v.as_str()).collect::<Vec<_>>(),
            ["e_x", "e_y", "v1", "mu1"]
        );
        assert_eq!(w.residual, "-1");
        let sum = matched_sum(&pair).unwrap();
        let axioms = check_axioms(&sum, &spec);
        let jacobi = axioms.checks.iter().find(|c| c.name == "jacobi").unwrap();
        assert!(!jacobi.passed());
        for name in ["leibniz", "symmetric-part", "ad-invariance", "anchor-morphism"] {
            assert!(axioms.checks.iter().find(|c| c.name == name).unwrap().passed());
        }
    }

    #[test]
    fn rank_zero_fiber_sum_is_the_left_structure() {
        let chart = ChartContext::rational(&["x", "y"]).unwrap();
        let left = make_twisted_standard(&chart, &DiffForm::zero(2, 3), false).unwrap();
        let pair = flat_fiber_pair(
            left.clone(),
            Vec::new(),
            Vec::new(),
            Connection::zero(2, left.rank(), 0),
        )
        .unwrap();
        let sum = matched_sum(&pair).unwrap();
        assert_eq!(sum.table_diff(&left), None);
        let report = check_matched_pair(&pair, &SampleSpec { samples: 2, ..SampleSpec::default() });
        assert!(report.passed());
    }
}
