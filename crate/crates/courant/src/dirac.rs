//! Dirac structures inside split-signature Courant structures.
//!
//! A Dirac structure of a rank-`2r` Courant structure is presented here by a
//! [`DiracFrame`]: `r` spanning sections together with `r` complementary
//! sections whose combined coefficient matrix is invertible over the
//! polynomial ring.  Invertibility is certified by a constant nonzero
//! determinant, which makes the membership test `s ∈ span(D)` exact: a section
//! lies in a maximal isotropic subbundle if and only if it pairs to zero with
//! every spanning section.
//!
//! The module verifies Dirac conditions ([`check_dirac`]), matched pairs of
//! Dirac structures inside a matched sum ([`check_matched_dirac`]), and
//! extracts the induced Lie algebroid data ([`dirac_to_lie`],
//! [`dirac_pair_to_lie`]).  Matched pairs of Lie algebroids carry their own
//! verification ([`check_lie_matched_pair`]) and sum construction
//! ([`lie_matched_sum`]): two flat cross-connections whose actions are
//! bracket derivations glue the direct sum into a single Lie algebroid.
//!
//! Graph constructions are provided for the standard sources of Dirac
//! structures: graphs of two-forms and bivectors in a (twisted) standard
//! structure, graphs of fiberwise pairing maps in a trivial fiber structure,
//! and the port graph coupling a two-form with an interconnection map inside
//! a base ⊕ fiber matched sum.

use crate::calculus::{vector_field_to_string, DiffForm, VectorField};
use crate::chart::{is_valid_name, ChartContext};
use crate::connection::Connection;
use crate::courant::{CourantStructure, Section};
use crate::error::{Error, Result};
use crate::expr::{poly_to_string, section_to_string};
use crate::linalg::{cramer_solve, poly_det, signature};
use crate::matched::{matched_sum, MatchedPairData};
use crate::poly::Polynomial;
use crate::report::{VerificationReport, Witness};
use crate::verify::{random_poly, run_check, SampleSpec};

/// Candidate Dirac structure: `r` spanning sections and `r` complementary
/// sections of a rank-`2r` host, recorded together so that span membership
/// can be decided by exact linear algebra.
#[derive(Clone, Debug)]
pub struct DiracFrame {
    sections: Vec<Section>,
    complement: Vec<Section>,
}

impl DiracFrame {
    /// Validates shapes against the host: even host rank `2r`, `r` sections
    /// and `r` complementary sections, all of host rank over the host chart.
    pub fn new(
        host: &CourantStructure,
        sections: Vec<Section>,
        complement: Vec<Section>,
    ) -> Result<Self> {
        let rank = host.rank();
        if rank % 2 != 0 {
            return Err(Error::ShapeMismatch(format!(
                "a Dirac frame needs an even-rank host, got rank {rank}"
            )));
        }
        let r = rank / 2;
        if sections.len() != r || complement.len() != r {
            return Err(Error::ShapeMismatch(format!(
                "a Dirac frame in a rank-{rank} host needs {r} sections and {r} \
                 complementary sections, got {} and {}",
                sections.len(),
                complement.len()
            )));
        }
        let frame = DiracFrame { sections, complement };
        frame.validate(host)?;
        Ok(frame)
    }

    /// Re-checks shapes against a host; frames carry no host reference, so
    /// every consumer revalidates before computing.
    pub fn validate(&self, host: &CourantStructure) -> Result<()> {
        let rank = host.rank();
        if self.sections.len() * 2 != rank || self.complement.len() * 2 != rank {
            return Err(Error::ShapeMismatch(format!(
                "Dirac frame with {} sections does not fit a rank-{rank} host",
                self.sections.len()
            )));
        }
        for s in self.sections.iter().chain(&self.complement) {
            if s.rank() != rank {
                return Err(Error::ShapeMismatch(format!(
                    "Dirac frame entry has rank {} in a rank-{rank} host",
                    s.rank()
                )));
            }
            for c in s.coeffs() {
                host.chart().admit_poly(c)?;
            }
        }
        Ok(())
    }

    /// Number of spanning sections (`r` for a rank-`2r` host).
    pub fn half_rank(&self) -> usize {
        self.sections.len()
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    pub fn complement(&self) -> &[Section] {
        &self.complement
    }

    /// Determinant of the combined `2r × 2r` coefficient matrix (spanning
    /// rows first, then complement rows).  A constant nonzero value
    /// certifies that the frame is a basis over the polynomial ring.
    pub fn certificate(&self, chart: &ChartContext) -> Polynomial {
        let combined: Vec<&Section> = self.sections.iter().chain(&self.complement).collect();
        if combined.is_empty() {
            return chart.one_poly();
        }
        let rows: Vec<Vec<Polynomial>> =
            combined.iter().map(|s| s.coeffs().to_vec()).collect();
        poly_det(chart.dim(), &rows)
    }
}

/// Coefficients of `s` in the spanning part of the frame; errors if the
/// complement coefficients are nonzero, i.e. if `s` leaves the span.
fn express_in_span(host: &CourantStructure, d: &DiracFrame, s: &Section) -> Result<Section> {
    let chart = host.chart();
    let r = d.half_rank();
    let combined: Vec<&Section> = d.sections.iter().chain(&d.complement).collect();
    let a: Vec<Vec<Polynomial>> = (0..2 * r)
        .map(|row| (0..2 * r).map(|col| combined[col].coeff(row).clone()).collect())
        .collect();
    let x = cramer_solve(chart.dim(), &a, s.coeffs())?;
    for entry in x.iter().skip(r) {
        if !entry.is_zero() {
            return Err(Error::NotIntegrable(format!(
                "section {} leaves the Dirac span (complement coefficient {})",
                host.section_string(s),
                poly_to_string(chart, entry)
            )));
        }
    }
    Ok(Section::from_coeffs(x[..r].to_vec()))
}

/// Section paired with its rendered text, for witness reporting.
#[derive(Clone)]
struct Named {
    text: String,
    section: Section,
}

/// A spanning set with a renderer, so instance ladders can be built over
/// Courant frames, Dirac frames, and Lie algebroid frames uniformly.
struct SpanSet<'a> {
    frame: Vec<Named>,
    render: Box<dyn Fn(&Section) -> String + 'a>,
}

impl<'a> SpanSet<'a> {
    fn courant(host: &'a CourantStructure, sections: &[Section]) -> SpanSet<'a> {
        let frame = sections
            .iter()
            .map(|s| Named { text: host.section_string(s), section: s.clone() })
            .collect();
        SpanSet { frame, render: Box::new(move |s| host.section_string(s)) }
    }

    fn lie(alg: &'a LieAlgebroid) -> SpanSet<'a> {
        let n = alg.chart().dim();
        let frame = (0..alg.rank())
            .map(|k| {
                let section = Section::basis(n, alg.rank(), k);
                Named { text: alg.section_string(&section), section }
            })
            .collect();
        SpanSet { frame, render: Box::new(move |s| alg.section_string(s)) }
    }

    fn named(&self, section: Section) -> Named {
        Named { text: (self.render)(&section), section }
    }

    fn random_combo(
        &self,
        rng: &mut rand_chacha::ChaCha8Rng,
        chart: &ChartContext,
        max_degree: u32,
    ) -> Named {
        use rand::Rng;
        let rank = self.frame[0].section.rank();
        let mut acc = Section::zero(chart.dim(), rank);
        let picks = rng.gen_range(1..=2usize.min(self.frame.len()));
        for _ in 0..picks {
            let k = rng.gen_range(0..self.frame.len());
            acc = &acc + &self.frame[k].section.scale(&random_poly(rng, chart, max_degree));
        }
        self.named(acc)
    }
}

/// All index tuples over the given slot sizes, in odometer order.
fn index_tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    if sizes.iter().any(|&s| s == 0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; sizes.len()];
    loop {
        out.push(idx.clone());
        let mut carry = sizes.len();
        while carry > 0 {
            idx[carry - 1] += 1;
            if idx[carry - 1] < sizes[carry - 1] {
                break;
            }
            idx[carry - 1] = 0;
            carry -= 1;
        }
        if carry == 0 {
            break;
        }
    }
    out
}

/// Instance ladder over heterogeneous spanning sets: every frame tuple, then
/// for each slot in turn every frame tuple with that slot scaled by each
/// coordinate, then seeded random span combinations.  The identities checked
/// here are not tensorial in every slot, so each slot gets its own dressed
/// rung.
fn span_tuples(
    chart: &ChartContext,
    slots: &[&SpanSet],
    spec: &SampleSpec,
    check: &str,
) -> Vec<Vec<Named>> {
    let sizes: Vec<usize> = slots.iter().map(|s| s.frame.len()).collect();
    let base = index_tuples(&sizes);
    let mut out: Vec<Vec<Named>> = Vec::new();
    for idx in &base {
        out.push(idx.iter().zip(slots).map(|(&k, s)| s.frame[k].clone()).collect());
    }
    for dressed in 0..slots.len() {
        for idx in &base {
            for v in 0..chart.dim() {
                let tuple: Vec<Named> = idx
                    .iter()
                    .zip(slots)
                    .enumerate()
                    .map(|(pos, (&k, s))| {
                        if pos == dressed {
                            s.named(s.frame[k].section.scale(&chart.var(v)))
                        } else {
                            s.frame[k].clone()
                        }
                    })
                    .collect();
                out.push(tuple);
            }
        }
    }
    if sizes.iter().all(|&s| s > 0) {
        let mut rng = spec.rng(check);
        for _ in 0..spec.samples {
            out.push(
                slots
                    .iter()
                    .map(|s| s.random_combo(&mut rng, chart, spec.max_degree))
                    .collect(),
            );
        }
    }
    out
}

fn witness(inputs: &[(&str, &str)], residual: String) -> Option<Witness> {
    Some(Witness::new(
        inputs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        residual,
    ))
}

/// Verifies the Dirac conditions for a frame inside a split-signature host.
///
/// Checks, in order: `isotropy` (all frame pairs pair to zero),
/// `rank-certificate` (the combined coefficient matrix has constant nonzero
/// determinant), and `integrability` (`⟨a⋄b, c⟩ = 0` over the full instance
/// ladder of spanning sections; by maximal isotropy this is exactly the
/// condition that the bracket closes on the subbundle).
///
/// Errors with [`Error::NotSplitSignature`] when the host pairing is not of
/// split signature, since maximal isotropic subbundles of half rank only
/// exist in that case.
pub fn check_dirac(
    host: &CourantStructure,
    d: &DiracFrame,
    spec: &SampleSpec,
) -> Result<VerificationReport> {
    d.validate(host)?;
    let chart = host.chart();
    let (p, q) = signature(host.pairing_matrix())?;
    if p != q {
        return Err(Error::NotSplitSignature);
    }
    let mut report = VerificationReport::new("Dirac structure verification");
    report.push_meta("chart", chart.names().join(","));
    report.push_meta("host-rank", host.rank());
    report.push_meta("dirac-rank", d.half_rank());
    spec.describe(&mut report);

    let span = SpanSet::courant(host, &d.sections);
    let pairs: Vec<Vec<Named>> = index_tuples(&[d.half_rank(), d.half_rank()])
        .into_iter()
        .map(|idx| idx.into_iter().map(|k| span.frame[k].clone()).collect())
        .collect();
    report.push_check(run_check("isotropy", &pairs, |t: &Vec<Named>| {
        let p = host.pairing(&t[0].section, &t[1].section);
        if p.is_zero() {
            None
        } else {
            witness(
                &[("a", &t[0].text), ("b", &t[1].text)],
                poly_to_string(chart, &p),
            )
        }
    }));

    let det = d.certificate(chart);
    let certified = det.as_constant().map(|c| !c.is_zero()).unwrap_or(false);
    report.push_check(run_check("rank-certificate", &[()], |_| {
        if certified {
            None
        } else {
            witness(&[], poly_to_string(chart, &det))
        }
    }));

    let triples = span_tuples(chart, &[&span, &span, &span], spec, "integrability");
    report.push_check(run_check("integrability", &triples, |t: &Vec<Named>| {
        let prod = host.dorfman(&t[0].section, &t[1].section);
        let p = host.pairing(&prod, &t[2].section);
        if p.is_zero() {
            None
        } else {
            witness(
                &[("a", &t[0].text), ("b", &t[1].text), ("c", &t[2].text)],
                poly_to_string(chart, &p),
            )
        }
    }));
    Ok(report)
}

/// Embeds two Dirac frames into the direct-sum frame of `host`, which must
/// have rank equal to the sum of the two host ranks with the left block
/// first — the layout produced by the matched-sum construction.
pub fn direct_sum_frame(
    host: &CourantStructure,
    d1: &DiracFrame,
    d2: &DiracFrame,
) -> Result<DiracFrame> {
    let n = host.chart().dim();
    let rank1 = 2 * d1.half_rank();
    let rank2 = 2 * d2.half_rank();
    if host.rank() != rank1 + rank2 {
        return Err(Error::ShapeMismatch(format!(
            "sum host has rank {} but the Dirac frames fill rank {}",
            host.rank(),
            rank1 + rank2
        )));
    }
    let left = |s: &Section| s.concat(&Section::zero(n, rank2));
    let right = |s: &Section| Section::zero(n, rank1).concat(s);
    let sections = d1
        .sections
        .iter()
        .map(left)
        .chain(d2.sections.iter().map(right))
        .collect();
    let complement = d1
        .complement
        .iter()
        .map(left)
        .chain(d2.complement.iter().map(right))
        .collect();
    DiracFrame::new(host, sections, complement)
}

/// Verifies that two Dirac structures form a matched pair inside a matched
/// sum: each cross-connection must map the opposite Dirac frame back into
/// its own Dirac subbundle, and the direct sum must itself be Dirac in the
/// summed Courant structure.
///
/// The report absorbs the component Dirac reports under `left.` and
/// `right.`, then runs `membership-left` (`∇←_α a ⟂ D₁`-frame test),
/// `membership-right` (`∇→_a α ⟂ D₂`-frame test), and absorbs the Dirac
/// report of the embedded sum under `sum-dirac.`.
pub fn check_matched_dirac(
    pair: &MatchedPairData,
    d1: &DiracFrame,
    d2: &DiracFrame,
    spec: &SampleSpec,
) -> Result<VerificationReport> {
    let chart = pair.chart();
    let mut report = VerificationReport::new("matched Dirac pair verification");
    report.push_meta("chart", chart.names().join(","));
    report.push_meta("left-rank", pair.left.rank());
    report.push_meta("right-rank", pair.right.rank());
    spec.describe(&mut report);

    report.absorb("left.", check_dirac(&pair.left, d1, spec)?);
    report.absorb("right.", check_dirac(&pair.right, d2, spec)?);

    let left_span = SpanSet::courant(&pair.left, &d1.sections);
    let right_span = SpanSet::courant(&pair.right, &d2.sections);
    let r1 = d1.half_rank();
    let r2 = d2.half_rank();

    let mut items: Vec<Vec<Named>> = Vec::new();
    for idx in index_tuples(&[r2, r1, r1]) {
        items.push(vec![
            right_span.frame[idx[0]].clone(),
            left_span.frame[idx[1]].clone(),
            left_span.frame[idx[2]].clone(),
        ]);
    }
    report.push_check(run_check("membership-left", &items, |t: &Vec<Named>| {
        let val = pair.nabla_left(&t[0].section, &t[1].section);
        let p = pair.left.pairing(&val, &t[2].section);
        if p.is_zero() {
            None
        } else {
            witness(
                &[("alpha", &t[0].text), ("a", &t[1].text), ("test", &t[2].text)],
                poly_to_string(chart, &p),
            )
        }
    }));

    let mut items: Vec<Vec<Named>> = Vec::new();
    for idx in index_tuples(&[r1, r2, r2]) {
        items.push(vec![
            left_span.frame[idx[0]].clone(),
            right_span.frame[idx[1]].clone(),
            right_span.frame[idx[2]].clone(),
        ]);
    }
    report.push_check(run_check("membership-right", &items, |t: &Vec<Named>| {
        let val = pair.nabla_right(&t[0].section, &t[1].section);
        let p = pair.right.pairing(&val, &t[2].section);
        if p.is_zero() {
            None
        } else {
            witness(
                &[("a", &t[0].text), ("alpha", &t[1].text), ("test", &t[2].text)],
                poly_to_string(chart, &p),
            )
        }
    }));

    let sum = matched_sum(pair)?;
    let combined = direct_sum_frame(&sum, d1, d2)?;
    report.absorb("sum-dirac.", check_dirac(&sum, &combined, spec)?);
    Ok(report)
}

/// A Lie algebroid presented by a global frame over a polynomial chart:
/// anchor images of the frame sections and an antisymmetric bracket table.
/// Brackets of arbitrary sections extend by the Leibniz rule through the
/// anchor; the Jacobi identity is a verification concern, not a constructor
/// invariant.
#[derive(Clone, Debug)]
pub struct LieAlgebroid {
    chart: ChartContext,
    labels: Vec<String>,
    anchor: Vec<VectorField>,
    table: Vec<Vec<Section>>,
}

impl LieAlgebroid {
    pub fn new(
        chart: ChartContext,
        labels: Vec<String>,
        anchor: Vec<VectorField>,
        table: Vec<Vec<Section>>,
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
        if table.len() != rank || table.iter().any(|r| r.len() != rank) {
            return Err(Error::ShapeMismatch(format!(
                "bracket table must be {rank}x{rank}"
            )));
        }
        for row in &table {
            for s in row {
                if s.rank() != rank {
                    return Err(Error::ShapeMismatch("bracket entry rank".into()));
                }
                for p in s.coeffs() {
                    chart.admit_poly(p)?;
                }
            }
        }
        for i in 0..rank {
            for j in 0..rank {
                if !(&table[i][j] + &table[j][i]).is_zero() {
                    return Err(Error::IncompatibleData(format!(
                        "bracket table is not antisymmetric at ({}, {})",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        Ok(LieAlgebroid { chart, labels, anchor, table })
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

    pub fn anchor_image(&self, i: usize) -> &VectorField {
        &self.anchor[i]
    }

    pub fn bracket_entry(&self, i: usize, j: usize) -> &Section {
        &self.table[i][j]
    }

    /// Anchor of an arbitrary section, `Σ_i u^i ρ(f_i)`.
    pub fn anchor_of(&self, u: &Section) -> VectorField {
        let mut out = VectorField::zero(self.chart.dim());
        for i in 0..self.rank() {
            out = out.add(&self.anchor[i].scale(u.coeff(i)));
        }
        out
    }

    /// Leibniz extension of the frame bracket:
    /// `[u,v]^k = ρ(u)(v^k) − ρ(v)(u^k) + Σ_{ij} u^i v^j T[i][j]^k`.
    pub fn bracket(&self, u: &Section, v: &Section) -> Section {
        let rank = self.rank();
        let ru = self.anchor_of(u);
        let rv = self.anchor_of(v);
        let mut coeffs: Vec<Polynomial> = (0..rank)
            .map(|k| &ru.apply(v.coeff(k)) - &rv.apply(u.coeff(k)))
            .collect();
        for i in 0..rank {
            for j in 0..rank {
                let weight = u.coeff(i) * v.coeff(j);
                for (k, c) in coeffs.iter_mut().enumerate() {
                    *c = &*c + &(self.table[i][j].coeff(k) * &weight);
                }
            }
        }
        Section::from_coeffs(coeffs)
    }

    pub fn section_string(&self, s: &Section) -> String {
        section_to_string(&self.chart, &self.labels, s.coeffs())
    }

    /// First discrepancy against another frame presentation (labels aside),
    /// or `None` when anchors and bracket tables agree entrywise.
    pub fn table_diff(&self, other: &LieAlgebroid) -> Option<String> {
        if self.rank() != other.rank() {
            return Some(format!(
                "rank {} versus {}",
                self.rank(),
                other.rank()
            ));
        }
        for i in 0..self.rank() {
            if !self.anchor[i].sub(&other.anchor[i]).is_zero() {
                return Some(format!(
                    "anchor images of slot {i} differ: {} versus {}",
                    vector_field_to_string(&self.chart, &self.anchor[i]),
                    vector_field_to_string(&self.chart, &other.anchor[i])
                ));
            }
        }
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                if !(&self.table[i][j] - &other.table[i][j]).is_zero() {
                    return Some(format!(
                        "bracket entries at ({i}, {j}) differ: {} versus {}",
                        self.section_string(&self.table[i][j]),
                        other.section_string(&other.table[i][j])
                    ));
                }
            }
        }
        None
    }
}

/// Restriction of a Courant structure to an integrable Dirac frame: the
/// anchor restricts directly and each frame product is re-expressed in the
/// Dirac frame through the complement certificate.  Frame labels are
/// `prefix1..prefixr`.
///
/// Errors with [`Error::BadComplementCertificate`] when the combined
/// coefficient matrix has non-constant or zero determinant, and with
/// [`Error::NotIntegrable`] when the frame is not isotropic or some product
/// leaves the span.
pub fn dirac_to_lie(
    host: &CourantStructure,
    d: &DiracFrame,
    prefix: &str,
) -> Result<LieAlgebroid> {
    d.validate(host)?;
    let chart = host.chart();
    let r = d.half_rank();
    let det = d.certificate(chart);
    if !det.as_constant().map(|c| !c.is_zero()).unwrap_or(false) {
        return Err(Error::BadComplementCertificate(format!(
            "combined frame determinant {} is not a nonzero constant",
            poly_to_string(chart, &det)
        )));
    }
    for i in 0..r {
        for j in 0..r {
            let p = host.pairing(&d.sections[i], &d.sections[j]);
            if !p.is_zero() {
                return Err(Error::NotIntegrable(format!(
                    "frame pair ({}, {}) is not isotropic: {}",
                    host.section_string(&d.sections[i]),
                    host.section_string(&d.sections[j]),
                    poly_to_string(chart, &p)
                )));
            }
        }
    }
    let anchor: Vec<VectorField> =
        d.sections.iter().map(|s| host.anchor_apply(s)).collect();
    let mut table = vec![vec![Section::zero(chart.dim(), r); r]; r];
    for i in 0..r {
        for j in 0..r {
            let prod = host.dorfman(&d.sections[i], &d.sections[j]);
            table[i][j] = express_in_span(host, d, &prod)?;
        }
    }
    let labels = (1..=r).map(|k| format!("{prefix}{k}")).collect();
    LieAlgebroid::new(chart.clone(), labels, anchor, table)
}

/// A matched pair of Lie algebroids: a flat `A`-connection acting on `A′`
/// and a flat `A′`-connection acting on `A`, each required (by verification,
/// not construction) to be a derivation of the opposite bracket up to the
/// cross-terms.  Connection tables hold frame values; applications extend by
/// the Leibniz rule through the acting algebroid's anchor.
#[derive(Clone, Debug)]
pub struct LieMatchedPairData {
    pub a: LieAlgebroid,
    pub aprime: LieAlgebroid,
    /// `∇→`: table of `∇→_{f_i} f′_b`, sized `rank(A) × rank(A′)`.
    pub right_action: Connection,
    /// `∇←`: table of `∇←_{f′_b} f_i`, sized `rank(A′) × rank(A)`.
    pub left_action: Connection,
}

fn lie_connection_apply(
    domain: &LieAlgebroid,
    table: &Connection,
    psi: &Section,
    v: &Section,
) -> Section {
    let rho = domain.anchor_of(psi);
    let acted = table.acted_rank();
    let mut coeffs: Vec<Polynomial> =
        (0..acted).map(|k| rho.apply(v.coeff(k))).collect();
    for i in 0..table.domain_rank() {
        for a in 0..acted {
            let weight = psi.coeff(i) * v.coeff(a);
            for (k, c) in coeffs.iter_mut().enumerate() {
                *c = &*c + &(table.entry(i, a).coeff(k) * &weight);
            }
        }
    }
    Section::from_coeffs(coeffs)
}

impl LieMatchedPairData {
    /// Validates chart agreement, connection table shapes, and cross-frame
    /// label disjointness (so the sum frame is well-labelled).
    pub fn new(
        a: LieAlgebroid,
        aprime: LieAlgebroid,
        right_action: Connection,
        left_action: Connection,
    ) -> Result<Self> {
        a.chart.expect_same(&aprime.chart, "Lie matched pair components")?;
        for l in &a.labels {
            if aprime.labels.contains(l) {
                return Err(Error::ShapeMismatch(format!(
                    "frame label `{l}` appears in both algebroids"
                )));
            }
        }
        let check_table = |conn: &Connection, dom: usize, acted: usize, what: &str| {
            if conn.domain_rank() != dom || conn.acted_rank() != acted {
                return Err(Error::ShapeMismatch(format!(
                    "{what} table is {}x{} but must be {dom}x{acted}",
                    conn.domain_rank(),
                    conn.acted_rank()
                )));
            }
            for row in conn.table() {
                for s in row {
                    for p in s.coeffs() {
                        a.chart.admit_poly(p)?;
                    }
                }
            }
            Ok(())
        };
        check_table(&right_action, a.rank(), aprime.rank(), "right action")?;
        check_table(&left_action, aprime.rank(), a.rank(), "left action")?;
        Ok(LieMatchedPairData { a, aprime, right_action, left_action })
    }

    pub fn chart(&self) -> &ChartContext {
        &self.a.chart
    }

    /// `∇→_ψ v` for `ψ ∈ A`, `v ∈ A′`.
    pub fn nabla_right(&self, psi: &Section, v: &Section) -> Section {
        lie_connection_apply(&self.a, &self.right_action, psi, v)
    }

    /// `∇←_α u` for `α ∈ A′`, `u ∈ A`.
    pub fn nabla_left(&self, alpha: &Section, u: &Section) -> Section {
        lie_connection_apply(&self.aprime, &self.left_action, alpha, u)
    }
}

/// Direct-sum Lie algebroid of a matched pair: anchor `ρ_A + ρ_{A′}` and
/// bracket
/// `[a⊕α, b⊕β] = ([a,b] + ∇←_α b − ∇←_β a) ⊕ ([α,β] + ∇→_a β − ∇→_b α)`.
pub fn lie_matched_sum(pair: &LieMatchedPairData) -> Result<LieAlgebroid> {
    let chart = pair.chart().clone();
    let n = chart.dim();
    let r1 = pair.a.rank();
    let r2 = pair.aprime.rank();
    let embed_left = |s: &Section| s.concat(&Section::zero(n, r2));
    let embed_right = |s: &Section| Section::zero(n, r1).concat(s);
    let labels: Vec<String> =
        pair.a.labels.iter().chain(&pair.aprime.labels).cloned().collect();
    let anchor: Vec<VectorField> =
        pair.a.anchor.iter().chain(&pair.aprime.anchor).cloned().collect();
    let rank = r1 + r2;
    let mut table = vec![vec![Section::zero(n, rank); rank]; rank];
    for i in 0..r1 {
        for j in 0..r1 {
            table[i][j] = embed_left(&pair.a.table[i][j]);
        }
    }
    for a in 0..r2 {
        for b in 0..r2 {
            table[r1 + a][r1 + b] = embed_right(&pair.aprime.table[a][b]);
        }
    }
    for i in 0..r1 {
        for b in 0..r2 {
            let mixed = &embed_left(&-pair.left_action.entry(b, i))
                + &embed_right(pair.right_action.entry(i, b));
            table[r1 + b][i] = -&mixed;
            table[i][r1 + b] = mixed;
        }
    }
    LieAlgebroid::new(chart, labels, anchor, table)
}

/// Verifies the matched-pair conditions for two Lie algebroids with
/// cross-connections.
///
/// Checks, in order: `flat-left` and `flat-right` (vanishing curvature of
/// `∇←` and `∇→`), `derivation-left` and `derivation-right` (each action is
/// a derivation of the opposite bracket up to the cross-connection terms),
/// then `sum-jacobi` and `sum-anchor` (the Jacobi identity and the anchor
/// morphism property for the direct-sum algebroid).
pub fn check_lie_matched_pair(
    pair: &LieMatchedPairData,
    spec: &SampleSpec,
) -> VerificationReport {
    let chart = pair.chart();
    let mut report = VerificationReport::new("Lie matched pair verification");
    report.push_meta("chart", chart.names().join(","));
    report.push_meta("left-rank", pair.a.rank());
    report.push_meta("right-rank", pair.aprime.rank());
    spec.describe(&mut report);

    let a_span = SpanSet::lie(&pair.a);
    let ap_span = SpanSet::lie(&pair.aprime);

    let items = span_tuples(chart, &[&ap_span, &ap_span, &a_span], spec, "flat-left");
    report.push_check(run_check("flat-left", &items, |t: &Vec<Named>| {
        let (alpha, beta, u) = (&t[0].section, &t[1].section, &t[2].section);
        let res = &(&pair.nabla_left(alpha, &pair.nabla_left(beta, u))
            - &pair.nabla_left(beta, &pair.nabla_left(alpha, u)))
            - &pair.nabla_left(&pair.aprime.bracket(alpha, beta), u);
        if res.is_zero() {
            None
        } else {
            witness(
                &[("alpha", &t[0].text), ("beta", &t[1].text), ("a", &t[2].text)],
                pair.a.section_string(&res),
            )
        }
    }));

    let items = span_tuples(chart, &[&a_span, &a_span, &ap_span], spec, "flat-right");
    report.push_check(run_check("flat-right", &items, |t: &Vec<Named>| {
        let (u, v, alpha) = (&t[0].section, &t[1].section, &t[2].section);
        let res = &(&pair.nabla_right(u, &pair.nabla_right(v, alpha))
            - &pair.nabla_right(v, &pair.nabla_right(u, alpha)))
            - &pair.nabla_right(&pair.a.bracket(u, v), alpha);
        if res.is_zero() {
            None
        } else {
            witness(
                &[("a", &t[0].text), ("b", &t[1].text), ("alpha", &t[2].text)],
                pair.aprime.section_string(&res),
            )
        }
    }));

    let items = span_tuples(chart, &[&ap_span, &a_span, &a_span], spec, "derivation-left");
    report.push_check(run_check("derivation-left", &items, |t: &Vec<Named>| {
        let (alpha, b, c) = (&t[0].section, &t[1].section, &t[2].section);
        let mut res = pair.nabla_left(alpha, &pair.a.bracket(b, c));
        res = &res - &pair.a.bracket(&pair.nabla_left(alpha, b), c);
        res = &res - &pair.a.bracket(b, &pair.nabla_left(alpha, c));
        res = &res - &pair.nabla_left(&pair.nabla_right(c, alpha), b);
        res = &res + &pair.nabla_left(&pair.nabla_right(b, alpha), c);
        if res.is_zero() {
            None
        } else {
            witness(
                &[("alpha", &t[0].text), ("b", &t[1].text), ("c", &t[2].text)],
                pair.a.section_string(&res),
            )
        }
    }));

    let items = span_tuples(chart, &[&a_span, &ap_span, &ap_span], spec, "derivation-right");
    report.push_check(run_check("derivation-right", &items, |t: &Vec<Named>| {
        let (u, beta, gamma) = (&t[0].section, &t[1].section, &t[2].section);
        let mut res = pair.nabla_right(u, &pair.aprime.bracket(beta, gamma));
        res = &res - &pair.aprime.bracket(&pair.nabla_right(u, beta), gamma);
        res = &res - &pair.aprime.bracket(beta, &pair.nabla_right(u, gamma));
        res = &res - &pair.nabla_right(&pair.nabla_left(gamma, u), beta);
        res = &res + &pair.nabla_right(&pair.nabla_left(beta, u), gamma);
        if res.is_zero() {
            None
        } else {
            witness(
                &[("a", &t[0].text), ("beta", &t[1].text), ("gamma", &t[2].text)],
                pair.aprime.section_string(&res),
            )
        }
    }));

    let sum = lie_matched_sum(pair)
        .expect("sum shapes were validated by the pair constructor");
    let sum_span = SpanSet::lie(&sum);

    let items = span_tuples(chart, &[&sum_span, &sum_span, &sum_span], spec, "sum-jacobi");
    report.push_check(run_check("sum-jacobi", &items, |t: &Vec<Named>| {
        let (u, v, w) = (&t[0].section, &t[1].section, &t[2].section);
        let res = &(&sum.bracket(&sum.bracket(u, v), w)
            + &sum.bracket(&sum.bracket(v, w), u))
            + &sum.bracket(&sum.bracket(w, u), v);
        if res.is_zero() {
            None
        } else {
            witness(
                &[("a", &t[0].text), ("b", &t[1].text), ("c", &t[2].text)],
                sum.section_string(&res),
            )
        }
    }));

    let items = span_tuples(chart, &[&sum_span, &sum_span], spec, "sum-anchor");
    report.push_check(run_check("sum-anchor", &items, |t: &Vec<Named>| {
        let (u, v) = (&t[0].section, &t[1].section);
        let lie = sum
            .anchor_of(u)
            .lie_bracket(&sum.anchor_of(v))
            .expect("anchors share the chart arity");
        let res = sum.anchor_of(&sum.bracket(u, v)).sub(&lie);
        if res.is_zero() {
            None
        } else {
            witness(
                &[("a", &t[0].text), ("b", &t[1].text)],
                vector_field_to_string(chart, &res),
            )
        }
    }));
    report
}

/// Restricts the cross-connections of a matched Courant pair to a matched
/// pair of Dirac structures, producing the induced Lie matched pair: the
/// algebroids come from [`dirac_to_lie`] (frames `a1..` and `b1..`) and the
/// connection tables are the cross-connection values re-expressed in the
/// Dirac frames.  Errors when a connection value leaves its Dirac span,
/// i.e. when the membership conditions fail.
pub fn dirac_pair_to_lie(
    pair: &MatchedPairData,
    d1: &DiracFrame,
    d2: &DiracFrame,
) -> Result<LieMatchedPairData> {
    let a = dirac_to_lie(&pair.left, d1, "a")?;
    let b = dirac_to_lie(&pair.right, d2, "b")?;
    let r1 = d1.half_rank();
    let r2 = d2.half_rank();
    let mut right_table = vec![vec![Section::zero(pair.chart().dim(), r2); r2]; r1];
    for (i, row) in right_table.iter_mut().enumerate() {
        for (bix, slot) in row.iter_mut().enumerate() {
            let val = pair.nabla_right(&d1.sections[i], &d2.sections[bix]);
            *slot = express_in_span(&pair.right, d2, &val)?;
        }
    }
    let mut left_table = vec![vec![Section::zero(pair.chart().dim(), r1); r1]; r2];
    for (bix, row) in left_table.iter_mut().enumerate() {
        for (i, slot) in row.iter_mut().enumerate() {
            let val = pair.nabla_left(&d2.sections[bix], &d1.sections[i]);
            *slot = express_in_span(&pair.left, d1, &val)?;
        }
    }
    LieMatchedPairData::new(a, b, Connection::new(right_table), Connection::new(left_table))
}

fn assert_isotropic(host: &CourantStructure, frame: &DiracFrame) -> Result<()> {
    for i in 0..frame.sections.len() {
        for j in 0..frame.sections.len() {
            let p = host.pairing(&frame.sections[i], &frame.sections[j]);
            if !p.is_zero() {
                return Err(Error::Internal(format!(
                    "graph frame is not isotropic at ({}, {}): {}",
                    host.section_string(&frame.sections[i]),
                    host.section_string(&frame.sections[j]),
                    poly_to_string(host.chart(), &p)
                )));
            }
        }
    }
    Ok(())
}

/// Graph of a two-form in a standard-layout host (frame `e_1..e_n`,
/// `d_1..d_n` over an `n`-dimensional chart): sections `∂_i ⊕ ι_{∂_i}ω`,
/// complement `0 ⊕ dx_i`.  The graph is isotropic for any `ω`; it is Dirac
/// exactly when `dω` cancels the host twist contribution.
pub fn graph_of_two_form(host: &CourantStructure, omega: &DiffForm) -> Result<DiracFrame> {
    let chart = host.chart();
    let n = chart.dim();
    if host.rank() != 2 * n {
        return Err(Error::ShapeMismatch(format!(
            "two-form graph needs a standard-layout host of rank {}, got {}",
            2 * n,
            host.rank()
        )));
    }
    if omega.nvars() != n || omega.degree() != 2 {
        return Err(Error::ShapeMismatch(
            "two-form graph input must be a degree-2 form over the host chart".into(),
        ));
    }
    for (_, c) in omega.terms() {
        chart.admit_poly(c)?;
    }
    let mut sections = Vec::with_capacity(n);
    for i in 0..n {
        let contraction = omega.interior_product(&VectorField::coordinate(n, i))?;
        let mut coeffs = vec![chart.zero_poly(); 2 * n];
        coeffs[i] = chart.one_poly();
        for (j, c) in coeffs.iter_mut().skip(n).enumerate() {
            *c = contraction.coefficient(&[j]);
        }
        sections.push(Section::from_coeffs(coeffs));
    }
    let complement = (0..n)
        .map(|i| Section::basis(n, 2 * n, n + i))
        .collect();
    let frame = DiracFrame::new(host, sections, complement)?;
    assert_isotropic(host, &frame)?;
    Ok(frame)
}

/// Graph of a bivector in a standard-layout host.  The bivector is given by
/// its antisymmetric coefficient matrix `π[i][j]`, with the induced map
/// convention `π^#(dx_i) = Σ_j π[i][j] ∂_j`; sections are
/// `π^#(dx_i) ⊕ dx_i`, complement `∂_i ⊕ 0`.
pub fn graph_of_bivector(host: &CourantStructure, pi: &[Vec<Polynomial>]) -> Result<DiracFrame> {
    let chart = host.chart();
    let n = chart.dim();
    if host.rank() != 2 * n {
        return Err(Error::ShapeMismatch(format!(
            "bivector graph needs a standard-layout host of rank {}, got {}",
            2 * n,
            host.rank()
        )));
    }
    check_antisymmetric_matrix(chart, pi, n, "bivector")?;
    let mut sections = Vec::with_capacity(n);
    for (i, row) in pi.iter().enumerate() {
        let mut coeffs = vec![chart.zero_poly(); 2 * n];
        for (j, c) in row.iter().enumerate() {
            coeffs[j] = c.clone();
        }
        coeffs[n + i] = chart.one_poly();
        sections.push(Section::from_coeffs(coeffs));
    }
    let complement = (0..n).map(|i| Section::basis(n, 2 * n, i)).collect();
    let frame = DiracFrame::new(host, sections, complement)?;
    assert_isotropic(host, &frame)?;
    Ok(frame)
}

/// Graph of a fiberwise pairing map in a trivial fiber host (frame
/// `v_1..v_m`, `mu_1..mu_m` with crosswise pairing): for an antisymmetric
/// coefficient matrix `L[a][b]`, sections are `v_a ⊕ Σ_b L[a][b] mu_b`,
/// complement `0 ⊕ mu_a`.  With the trivial bracket the graph is Dirac for
/// every `L`.
pub fn graph_of_pairing_map(
    host: &CourantStructure,
    l: &[Vec<Polynomial>],
) -> Result<DiracFrame> {
    let chart = host.chart();
    if host.rank() % 2 != 0 {
        return Err(Error::ShapeMismatch(format!(
            "pairing-map graph needs an even-rank host, got {}",
            host.rank()
        )));
    }
    let m = host.rank() / 2;
    check_antisymmetric_matrix(chart, l, m, "pairing map")?;
    let mut sections = Vec::with_capacity(m);
    for (a, row) in l.iter().enumerate() {
        let mut coeffs = vec![chart.zero_poly(); 2 * m];
        coeffs[a] = chart.one_poly();
        for (b, c) in row.iter().enumerate() {
            coeffs[m + b] = c.clone();
        }
        sections.push(Section::from_coeffs(coeffs));
    }
    let complement = (0..m)
        .map(|a| Section::basis(chart.dim(), 2 * m, m + a))
        .collect();
    let frame = DiracFrame::new(host, sections, complement)?;
    assert_isotropic(host, &frame)?;
    Ok(frame)
}

fn check_antisymmetric_matrix(
    chart: &ChartContext,
    m: &[Vec<Polynomial>],
    size: usize,
    what: &str,
) -> Result<()> {
    if m.len() != size || m.iter().any(|r| r.len() != size) {
        return Err(Error::ShapeMismatch(format!(
            "{what} matrix must be {size}x{size}"
        )));
    }
    for row in m {
        for c in row {
            chart.admit_poly(c)?;
        }
    }
    for i in 0..size {
        for j in 0..size {
            if !(&m[i][j] + &m[j][i]).is_zero() {
                return Err(Error::ShapeMismatch(format!(
                    "{what} matrix is not antisymmetric at ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

/// Graph of a port map in a base ⊕ fiber matched sum (frame layout
/// `e_1..e_n, d_1..d_n, v_1..v_m, mu_1..mu_m`).  The map couples a two-form
/// `ω` on the base with an interconnection map `A` taking coordinate
/// differentials into the fiber (`A[a][j]` = the `v_a`-component of the
/// image of `dx_j`): writing `C = A ∘ ω^#`, the input `X ⊕ μ` goes to
/// `(ι_X ω − C^*μ) ⊕ C X`, so the graph sections are
///
/// `∂_i ⊕ ι_{∂_i}ω ⊕ Σ_a C[a][i] v_a`  and  `mu_a ⊕ (−Σ_i C[a][i] dx_i)`,
///
/// with complement `0 ⊕ dx_i` and `v_a`.  The dual-twist sign makes the
/// graph isotropic; this is verified at runtime rather than assumed.
pub fn port_hamiltonian_graph(
    host: &CourantStructure,
    omega: &DiffForm,
    a_map: &[Vec<Polynomial>],
) -> Result<DiracFrame> {
    let chart = host.chart();
    let n = chart.dim();
    let m = a_map.len();
    if host.rank() != 2 * n + 2 * m {
        return Err(Error::ShapeMismatch(format!(
            "port graph needs a host of rank {}, got {}",
            2 * n + 2 * m,
            host.rank()
        )));
    }
    if omega.nvars() != n || omega.degree() != 2 {
        return Err(Error::ShapeMismatch(
            "port graph needs a degree-2 form over the host chart".into(),
        ));
    }
    for (_, c) in omega.terms() {
        chart.admit_poly(c)?;
    }
    for row in a_map {
        if row.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "interconnection matrix rows must have {n} entries"
            )));
        }
        for c in row {
            chart.admit_poly(c)?;
        }
    }
    // C[a][i] = Σ_j A[a][j] ω(∂_i, ∂_j), the fiber component of the image
    // of ∂_i under A ∘ ω^#.
    let mut omega_rows = Vec::with_capacity(n);
    for i in 0..n {
        let contraction = omega.interior_product(&VectorField::coordinate(n, i))?;
        omega_rows.push(
            (0..n).map(|j| contraction.coefficient(&[j])).collect::<Vec<_>>(),
        );
    }
    let c_matrix: Vec<Vec<Polynomial>> = (0..m)
        .map(|a| {
            (0..n)
                .map(|i| {
                    let mut acc = chart.zero_poly();
                    for j in 0..n {
                        acc = &acc + &(&a_map[a][j] * &omega_rows[i][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let rank = 2 * n + 2 * m;
    let mut sections = Vec::with_capacity(n + m);
    for i in 0..n {
        let mut coeffs = vec![chart.zero_poly(); rank];
        coeffs[i] = chart.one_poly();
        for j in 0..n {
            coeffs[n + j] = omega_rows[i][j].clone();
        }
        for a in 0..m {
            coeffs[2 * n + a] = c_matrix[a][i].clone();
        }
        sections.push(Section::from_coeffs(coeffs));
    }
    for a in 0..m {
        let mut coeffs = vec![chart.zero_poly(); rank];
        coeffs[2 * n + m + a] = chart.one_poly();
        for i in 0..n {
            coeffs[n + i] = -&c_matrix[a][i];
        }
        sections.push(Section::from_coeffs(coeffs));
    }
    let complement = (0..n)
        .map(|i| Section::basis(n, rank, n + i))
        .chain((0..m).map(|a| Section::basis(n, rank, 2 * n + a)))
        .collect();
    let frame = DiracFrame::new(host, sections, complement)?;
    assert_isotropic(host, &frame)?;
    Ok(frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{dolbeault_field, ComplexChart};
    use crate::courant::make_twisted_standard;
    use crate::matched::flat_fiber_pair;
    use crate::regular::{build_regular, QuadraticLieBundle, RegularData};
    use crate::scalar::Scalar;

    fn rational_chart(names: &[&str]) -> ChartContext {
        ChartContext::rational(names).expect("valid chart")
    }

    fn standard(names: &[&str]) -> CourantStructure {
        let chart = rational_chart(names);
        let h = DiffForm::zero(chart.dim(), 3);
        make_twisted_standard(&chart, &h, false).expect("untwisted standard structure")
    }

    fn small_spec() -> SampleSpec {
        SampleSpec { samples: 4, ..SampleSpec::default() }
    }

    fn crosswise(m: usize) -> Vec<Vec<Scalar>> {
        let mut p = vec![vec![Scalar::zero(); 2 * m]; 2 * m];
        for a in 0..m {
            p[a][m + a] = Scalar::one();
            p[m + a][a] = Scalar::one();
        }
        p
    }

    /// Base ⊕ trivial-fiber matched pair with zero fiber connection.
    fn trivial_fiber_pair(names: &[&str], m: usize) -> MatchedPairData {
        let left = standard(names);
        let n = left.chart().dim();
        let labels: Vec<String> = (1..=m)
            .map(|a| format!("v{a}"))
            .chain((1..=m).map(|a| format!("mu{a}")))
            .collect();
        flat_fiber_pair(left, labels, crosswise(m), Connection::zero(n, 2 * names.len(), 2 * m))
            .expect("trivial fiber pair")
    }

    #[test]
    fn tangent_bundle_graph_is_dirac_and_gives_the_tangent_algebroid() {
        let host = standard(&["x", "y"]);
        let sections = vec![Section::basis(2, 4, 0), Section::basis(2, 4, 1)];
        let complement = vec![Section::basis(2, 4, 2), Section::basis(2, 4, 3)];
        let d = DiracFrame::new(&host, sections, complement).expect("tangent frame");
        let report = check_dirac(&host, &d, &small_spec()).expect("split host");
        assert!(report.passed(), "tangent bundle should be Dirac:\n{}", report.render_text());
        let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["isotropy", "rank-certificate", "integrability"]);

        let lie = dirac_to_lie(&host, &d, "t").expect("tangent algebroid");
        assert_eq!(lie.rank(), 2);
        for i in 0..2 {
            assert!(lie
                .anchor_image(i)
                .sub(&VectorField::coordinate(2, i))
                .is_zero());
            for j in 0..2 {
                assert!(lie.bracket_entry(i, j).is_zero());
            }
        }
    }

    #[test]
    fn closed_two_form_graph_passes_and_projects_to_the_tangent_algebroid() {
        let host = standard(&["x", "y"]);
        let chart = host.chart().clone();
        let omega = DiffForm::from_term(2, &[0, 1], chart.one_poly());
        let d = graph_of_two_form(&host, &omega).expect("graph frame");
        let want1 = host.parse_section("e_x + d_y").unwrap();
        let want2 = host.parse_section("e_y - d_x").unwrap();
        assert!((&d.sections()[0] - &want1).is_zero());
        assert!((&d.sections()[1] - &want2).is_zero());

        let report = check_dirac(&host, &d, &small_spec()).expect("split host");
        assert!(report.passed(), "closed graph should pass:\n{}", report.render_text());

        let lie = dirac_to_lie(&host, &d, "s").expect("graph algebroid");
        assert!(lie.anchor_image(0).sub(&VectorField::coordinate(2, 0)).is_zero());
        assert!(lie.anchor_image(1).sub(&VectorField::coordinate(2, 1)).is_zero());
        assert!(lie.bracket_entry(0, 1).is_zero());
    }

    #[test]
    fn non_closed_two_form_graph_fails_with_the_exterior_derivative_as_residual() {
        let host = standard(&["x", "y", "z"]);
        let chart = host.chart().clone();
        let omega = DiffForm::from_term(3, &[0, 1], chart.var(2));
        let d = graph_of_two_form(&host, &omega).expect("graph frame");
        let report = check_dirac(&host, &d, &small_spec()).expect("split host");
        assert!(!report.passed());
        for check in report.checks {
            match check.name.as_str() {
                "isotropy" | "rank-certificate" => {
                    assert!(check.passed(), "{} should pass", check.name)
                }
                "integrability" => {
                    let w = check.witness.as_ref().expect("integrability witness");
                    let texts: Vec<&str> = w.inputs.iter().map(|(_, v)| v.as_str()).collect();
                    assert_eq!(texts, ["e_x + z*d_y", "e_y - z*d_x", "e_z"]);
                    assert_eq!(w.residual, "1");
                }
                other => panic!("unexpected check {other}"),
            }
        }
        // The residual is the exterior derivative of the two-form evaluated
        // on the witness triple of coordinate fields.
        let d_omega = omega.exterior_derivative();
        let fields: Vec<VectorField> =
            (0..3).map(|i| VectorField::coordinate(3, i)).collect();
        let value = d_omega
            .evaluate(&[&fields[0], &fields[1], &fields[2]])
            .expect("evaluation");
        assert_eq!(poly_to_string(&chart, &value), "1");

        let err = dirac_to_lie(&host, &d, "s").unwrap_err();
        assert!(matches!(err, Error::NotIntegrable(_)));
    }

    #[test]
    fn bivector_graphs_reproduce_the_function_jacobi_condition() {
        // Constant bivector: Dirac.
        let host = standard(&["x", "y"]);
        let chart = host.chart().clone();
        let one = chart.one_poly();
        let pi = vec![
            vec![chart.zero_poly(), one.clone()],
            vec![-&one, chart.zero_poly()],
        ];
        let d = graph_of_bivector(&host, &pi).expect("graph frame");
        assert!((&d.sections()[0] - &host.parse_section("e_y + d_x").unwrap()).is_zero());
        assert!((&d.sections()[1] - &host.parse_section("-e_x + d_y").unwrap()).is_zero());
        let report = check_dirac(&host, &d, &small_spec()).expect("split host");
        assert!(report.passed(), "constant bivector:\n{}", report.render_text());

        // Non-Poisson bivector on a 3-dimensional chart.
        let host = standard(&["x", "y", "z"]);
        let chart = host.chart().clone();
        let one = chart.one_poly();
        let x = chart.var(0);
        let zero = chart.zero_poly();
        let pi = vec![
            vec![zero.clone(), one.clone(), x.clone()],
            vec![-&one, zero.clone(), zero.clone()],
            vec![-&x, zero.clone(), zero.clone()],
        ];
        let d = graph_of_bivector(&host, &pi).expect("graph frame");
        let report = check_dirac(&host, &d, &small_spec()).expect("split host");
        assert!(!report.passed());
        let failing = report
            .checks
            .iter()
            .find(|c| !c.passed())
            .expect("some failing check");
        assert_eq!(failing.name, "integrability");
        let w = failing.witness.as_ref().unwrap();
        let texts: Vec<&str> = w.inputs.iter().map(|(_, v)| v.as_str()).collect();
        assert_eq!(texts, ["e_y + x*e_z + d_x", "-e_x + d_y", "-x*e_x + d_z"]);
        assert_eq!(w.residual, "1");

        // Independent oracle: the residual is the Jacobi defect of the
        // induced function bracket {f,g} = Σ π[i][j] ∂_i f ∂_j g on the
        // coordinate triple.
        let pb = |f: &Polynomial, g: &Polynomial| {
            let mut acc = chart.zero_poly();
            for i in 0..3 {
                for j in 0..3 {
                    acc = &acc + &(&pi[i][j] * &(&f.partial(i) * &g.partial(j)));
                }
            }
            acc
        };
        let (fx, fy, fz) = (chart.var(0), chart.var(1), chart.var(2));
        let defect = &(&pb(&fx, &pb(&fy, &fz)) + &pb(&fy, &pb(&fz, &fx))) + &pb(&fz, &pb(&fx, &fy));
        assert_eq!(poly_to_string(&chart, &defect), "1");
    }

    #[test]
    fn pairing_map_graphs_are_dirac_in_the_trivial_fiber_structure() {
        let pair = trivial_fiber_pair(&["x"], 2);
        let fiber = &pair.right;
        let chart = fiber.chart().clone();
        let x = chart.var(0);
        let l = vec![
            vec![chart.zero_poly(), x.clone()],
            vec![-&x, chart.zero_poly()],
        ];
        let d = graph_of_pairing_map(fiber, &l).expect("graph frame");
        assert!((&d.sections()[0] - &fiber.parse_section("v1 + x*mu2").unwrap()).is_zero());
        assert!((&d.sections()[1] - &fiber.parse_section("v2 - x*mu1").unwrap()).is_zero());
        let report = check_dirac(fiber, &d, &small_spec()).expect("split fiber");
        assert!(
            report.passed(),
            "trivial-bracket graphs are always Dirac:\n{}",
            report.render_text()
        );
    }

    #[test]
    fn merker_sum_matched_dirac_detects_parallel_and_non_parallel_pairing_maps() {
        let pair = trivial_fiber_pair(&["x", "y"], 2);
        let chart = pair.chart().clone();
        let omega = DiffForm::from_term(2, &[0, 1], chart.one_poly());
        let d1 = graph_of_two_form(&pair.left, &omega).expect("closed two-form graph");

        // Constant pairing map: parallel for the trivial connection.
        let one = chart.one_poly();
        let l = vec![
            vec![chart.zero_poly(), one.clone()],
            vec![-&one, chart.zero_poly()],
        ];
        let d2 = graph_of_pairing_map(&pair.right, &l).expect("pairing graph");
        let report = check_matched_dirac(&pair, &d1, &d2, &small_spec()).expect("report");
        assert!(report.passed(), "parallel pairing map:\n{}", report.render_text());

        // Non-parallel pairing map: the right membership condition fails on
        // a single connection entry, and the embedded sum fails the direct
        // Dirac test on the matching frame triple.
        let x = chart.var(0);
        let l = vec![
            vec![chart.zero_poly(), x.clone()],
            vec![-&x, chart.zero_poly()],
        ];
        let d2 = graph_of_pairing_map(&pair.right, &l).expect("pairing graph");
        let report = check_matched_dirac(&pair, &d1, &d2, &small_spec()).expect("report");
        assert!(!report.passed());
        for check in report.checks {
            match check.name.as_str() {
                "membership-right" => {
                    let w = check.witness.as_ref().expect("membership witness");
                    let inputs: Vec<(&str, &str)> = w
                        .inputs
                        .iter()
                        .map(|(k, v)| (k.as_str(), v.as_str()))
                        .collect();
                    assert_eq!(
                        inputs,
                        [
                            ("a", "e_x + d_y"),
                            ("alpha", "v1 + x*mu2"),
                            ("test", "v2 - x*mu1")
                        ]
                    );
                    assert_eq!(w.residual, "1");
                }
                "sum-dirac.integrability" => {
                    assert!(!check.passed(), "the sum must fail the direct Dirac test");
                }
                other => assert!(check.passed(), "{other} should pass"),
            }
        }

        let err = dirac_pair_to_lie(&pair, &d1, &d2).unwrap_err();
        assert!(matches!(err, Error::NotIntegrable(_)));
    }

    #[test]
    fn restricted_connections_give_a_lie_matched_pair_matching_the_sum_algebroid() {
        let pair = trivial_fiber_pair(&["x", "y"], 2);
        let chart = pair.chart().clone();
        let omega = DiffForm::from_term(2, &[0, 1], chart.one_poly());
        let d1 = graph_of_two_form(&pair.left, &omega).expect("two-form graph");
        let one = chart.one_poly();
        let l = vec![
            vec![chart.zero_poly(), one.clone()],
            vec![-&one, chart.zero_poly()],
        ];
        let d2 = graph_of_pairing_map(&pair.right, &l).expect("pairing graph");

        let lmp = dirac_pair_to_lie(&pair, &d1, &d2).expect("restricted pair");
        let report = check_lie_matched_pair(&lmp, &small_spec());
        assert!(report.passed(), "restricted pair:\n{}", report.render_text());
        let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "flat-left",
                "flat-right",
                "derivation-left",
                "derivation-right",
                "sum-jacobi",
                "sum-anchor"
            ]
        );

        // The Lie algebroid of the summed Dirac structure agrees entrywise
        // with the matched sum of the restricted algebroids.
        let sum_host = matched_sum(&pair).expect("sum");
        let combined = direct_sum_frame(&sum_host, &d1, &d2).expect("combined frame");
        let from_sum = dirac_to_lie(&sum_host, &combined, "c").expect("sum algebroid");
        let from_pair = lie_matched_sum(&lmp).expect("lie sum");
        assert_eq!(from_pair.table_diff(&from_sum), None);
    }

    #[test]
    fn holomorphic_pair_on_the_complex_line_sums_to_the_complexified_tangent_algebroid() {
        let cx = ComplexChart::new(&["z"]).expect("complex line");
        let chart = cx.context().clone();
        let dz = VectorField::coordinate(2, 0);
        let dzb = VectorField::coordinate(2, 1);
        // The cross-connections vanish on coordinate fields.
        assert!(dolbeault_field(&cx, &dz, &dzb).expect("projected bracket").is_zero());
        assert!(dolbeault_field(&cx, &dzb, &dz).expect("projected bracket").is_zero());

        let zero_table = vec![vec![Section::zero(2, 1); 1]; 1];
        let a = LieAlgebroid::new(
            chart.clone(),
            vec!["h1".into()],
            vec![dz.clone()],
            zero_table.clone(),
        )
        .expect("holomorphic algebroid");
        let ap = LieAlgebroid::new(
            chart.clone(),
            vec!["k1".into()],
            vec![dzb.clone()],
            zero_table,
        )
        .expect("antiholomorphic algebroid");
        let lmp = LieMatchedPairData::new(
            a,
            ap,
            Connection::zero(2, 1, 1),
            Connection::zero(2, 1, 1),
        )
        .expect("pair data");
        let report = check_lie_matched_pair(&lmp, &small_spec());
        assert!(report.passed(), "holomorphic pair:\n{}", report.render_text());

        let sum = lie_matched_sum(&lmp).expect("sum");
        let complexified = LieAlgebroid::new(
            chart,
            vec!["h1".into(), "k1".into()],
            vec![dz, dzb],
            vec![vec![Section::zero(2, 2); 2]; 2],
        )
        .expect("complexified tangent algebroid");
        assert_eq!(sum.table_diff(&complexified), None);
    }

    #[test]
    fn flat_vector_bundle_over_the_tangent_algebroid_is_trivially_matched() {
        let chart = rational_chart(&["x", "y"]);
        let tangent = LieAlgebroid::new(
            chart.clone(),
            vec!["t1".into(), "t2".into()],
            vec![VectorField::coordinate(2, 0), VectorField::coordinate(2, 1)],
            vec![vec![Section::zero(2, 2); 2]; 2],
        )
        .expect("tangent algebroid");
        let fiber = LieAlgebroid::new(
            chart,
            vec!["w1".into()],
            vec![VectorField::zero(2)],
            vec![vec![Section::zero(2, 1); 1]; 1],
        )
        .expect("flat line bundle");
        let lmp = LieMatchedPairData::new(
            tangent,
            fiber,
            Connection::zero(2, 2, 1),
            Connection::zero(2, 1, 2),
        )
        .expect("pair data");
        let report = check_lie_matched_pair(&lmp, &small_spec());
        assert!(report.passed(), "flat bundle pair:\n{}", report.render_text());
    }

    #[test]
    fn non_derivation_action_fails_the_derivation_check_with_a_dressed_witness() {
        let chart = rational_chart(&["x"]);
        let tangent = LieAlgebroid::new(
            chart.clone(),
            vec!["e1".into()],
            vec![VectorField::coordinate(1, 0)],
            vec![vec![Section::zero(1, 1); 1]; 1],
        )
        .expect("tangent algebroid");
        let fiber = LieAlgebroid::new(
            chart.clone(),
            vec!["v1".into()],
            vec![VectorField::zero(1)],
            vec![vec![Section::zero(1, 1); 1]; 1],
        )
        .expect("line bundle");
        // ∇←_{v1} e1 = x·e1 is a connection but not a bracket derivation.
        let action = Connection::new(vec![vec![Section::from_coeffs(vec![chart.var(0)])]]);
        let lmp = LieMatchedPairData::new(tangent, fiber, Connection::zero(1, 1, 1), action)
            .expect("pair data");
        let report = check_lie_matched_pair(&lmp, &small_spec());
        assert!(!report.passed());
        for check in report.checks {
            match check.name.as_str() {
                "derivation-left" => {
                    let w = check.witness.as_ref().expect("derivation witness");
                    let inputs: Vec<(&str, &str)> = w
                        .inputs
                        .iter()
                        .map(|(k, v)| (k.as_str(), v.as_str()))
                        .collect();
                    assert_eq!(inputs, [("alpha", "v1"), ("b", "x*e1"), ("c", "e1")]);
                    assert_eq!(w.residual, "x*e1");
                }
                // The mirror identity fails through its cross-connection
                // term `∇→_{∇←_γ a}β`, which feeds the non-derivation
                // action back into the coefficient derivative.
                "derivation-right" => {
                    let w = check.witness.as_ref().expect("derivation witness");
                    assert_eq!(w.residual, "-x*v1");
                }
                "flat-left" | "flat-right" => {
                    assert!(check.passed(), "{} should pass", check.name)
                }
                // Violated compatibility breaks the Jacobi identity of the
                // glued bracket as well.
                "sum-jacobi" => assert!(!check.passed()),
                _ => {}
            }
        }
    }

    #[test]
    fn isotropic_subalgebra_of_a_quadratic_double_restricts_the_structure_constants() {
        // The double of the nonabelian two-dimensional Lie algebra: basis
        // u, v, us, vs with [u,v] = v, [u,vs] = -vs, [v,vs] = us and the
        // crosswise invariant pairing.
        let chart = rational_chart(&[]);
        let labels: Vec<String> =
            ["u", "v", "us", "vs"].iter().map(|s| s.to_string()).collect();
        let mut structure = vec![vec![vec![Scalar::zero(); 4]; 4]; 4];
        structure[0][1][1] = Scalar::one();
        structure[1][0][1] = -&Scalar::one();
        structure[0][3][3] = -&Scalar::one();
        structure[3][0][3] = Scalar::one();
        structure[1][3][2] = Scalar::one();
        structure[3][1][2] = -&Scalar::one();
        let lie = QuadraticLieBundle::new(labels, crosswise(2), structure)
            .expect("double of the nonabelian plane");
        let data = RegularData::new(
            chart.clone(),
            lie,
            vec![],
            vec![],
            DiffForm::zero(0, 3),
            Scalar::from_int(2),
        )
        .expect("point data");
        let host = build_regular(&data, false).expect("quadratic host");

        let sections = vec![Section::basis(0, 4, 0), Section::basis(0, 4, 1)];
        let complement = vec![Section::basis(0, 4, 2), Section::basis(0, 4, 3)];
        let d = DiracFrame::new(&host, sections, complement).expect("subalgebra frame");
        let report = check_dirac(&host, &d, &small_spec()).expect("split pairing");
        assert!(report.passed(), "isotropic subalgebra:\n{}", report.render_text());

        let lie = dirac_to_lie(&host, &d, "s").expect("restricted algebroid");
        assert_eq!(lie.rank(), 2);
        assert!(lie.anchor_image(0).is_zero() && lie.anchor_image(1).is_zero());
        // [u, v] = v restricts to the second frame slot.
        assert!((lie.bracket_entry(0, 1) - &Section::basis(0, 2, 1)).is_zero());
    }

    #[test]
    fn port_graphs_certify_integrability_of_the_interconnection() {
        let pair = trivial_fiber_pair(&["x", "y"], 1);
        let host = matched_sum(&pair).expect("base-fiber sum");
        let chart = host.chart().clone();
        let omega = DiffForm::from_term(2, &[0, 1], chart.one_poly());

        // Constant interconnection: closed form, parallel coupling — Dirac.
        let a_map = vec![vec![chart.one_poly(), chart.zero_poly()]];
        let d = port_hamiltonian_graph(&host, &omega, &a_map).expect("port graph");
        assert!((&d.sections()[0] - &host.parse_section("e_x + d_y").unwrap()).is_zero());
        assert!(
            (&d.sections()[1] - &host.parse_section("e_y - d_x - v1").unwrap()).is_zero()
        );
        assert!((&d.sections()[2] - &host.parse_section("d_y + mu1").unwrap()).is_zero());
        let report = check_dirac(&host, &d, &small_spec()).expect("split host");
        assert!(report.passed(), "parallel port graph:\n{}", report.render_text());

        // Coordinate-dependent interconnection: the coupling is no longer
        // parallel and integrability fails.
        let a_map = vec![vec![chart.var(0), chart.zero_poly()]];
        let d = port_hamiltonian_graph(&host, &omega, &a_map).expect("port graph");
        let report = check_dirac(&host, &d, &small_spec()).expect("split host");
        assert!(!report.passed());
        let failing: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(failing, ["integrability"]);
    }

    #[test]
    fn shape_and_signature_gates_reject_malformed_input() {
        let host = standard(&["x", "y"]);
        // Wrong section count.
        let err = DiracFrame::new(&host, vec![Section::basis(2, 4, 0)], vec![]).unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch(_)));

        // Dependent complement: certificate fails, so the Lie restriction
        // is refused even though the spanning half is fine.
        let d = DiracFrame::new(
            &host,
            vec![Section::basis(2, 4, 0), Section::basis(2, 4, 1)],
            vec![Section::basis(2, 4, 0), Section::basis(2, 4, 3)],
        )
        .expect("shapes are fine");
        let report = check_dirac(&host, &d, &small_spec()).expect("split host");
        assert!(!report.passed());
        let failing: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(failing, ["rank-certificate"]);
        let err = dirac_to_lie(&host, &d, "s").unwrap_err();
        assert!(matches!(err, Error::BadComplementCertificate(_)));

        // A definite pairing admits no half-rank isotropic subbundle.
        let chart = rational_chart(&[]);
        let lie = QuadraticLieBundle::abelian(
            vec!["g1".into(), "g2".into()],
            vec![
                vec![Scalar::one(), Scalar::zero()],
                vec![Scalar::zero(), Scalar::one()],
            ],
        )
        .expect("abelian bundle");
        let data = RegularData::new(
            chart,
            lie,
            vec![],
            vec![],
            DiffForm::zero(0, 3),
            Scalar::from_int(2),
        )
        .expect("point data");
        let host = build_regular(&data, false).expect("definite host");
        let d = DiracFrame::new(
            &host,
            vec![Section::basis(0, 2, 0)],
            vec![Section::basis(0, 2, 1)],
        )
        .expect("shapes are fine");
        let err = check_dirac(&host, &d, &small_spec()).unwrap_err();
        assert!(matches!(err, Error::NotSplitSignature));
    }
}
