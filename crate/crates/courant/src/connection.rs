//! Connections of one trivialized bundle on another: frame-indexed covariant
//! derivative tables, extended to arbitrary sections tensorially in the
//! direction slot and by the anchored Leibniz rule in the acted slot.

use crate::courant::{CourantStructure, Section};
use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Covariant derivative table: `entry(i, j)` is `∇_{a_i} v_j` expressed in the
/// acted bundle's frame, where `a_i` runs over the domain frame and `v_j` over
/// the acted frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    table: Vec<Vec<Section>>,
}

impl Connection {
    pub fn new(table: Vec<Vec<Section>>) -> Self {
        Connection { table }
    }

    pub fn zero(nvars: usize, domain_rank: usize, acted_rank: usize) -> Self {
        Connection { table: vec![vec![Section::zero(nvars, acted_rank); acted_rank]; domain_rank] }
    }

    pub fn domain_rank(&self) -> usize {
        self.table.len()
    }

    /// Column count of the table; `0` for an empty domain, where the acted
    /// rank is not recoverable from the table and must come from the section.
    pub fn acted_rank(&self) -> usize {
        self.table.first().map(|r| r.len()).unwrap_or(0)
    }

    pub fn entry(&self, i: usize, j: usize) -> &Section {
        &self.table[i][j]
    }

    pub fn table(&self) -> &[Vec<Section>] {
        &self.table
    }

    /// Shape- and field-check the table against its two bundles.
    pub fn validate(&self, domain: &CourantStructure, acted: &CourantStructure) -> Result<()> {
        domain.chart().expect_same(acted.chart(), "connection bundles")?;
        if self.table.len() != domain.rank() {
            return Err(Error::ShapeMismatch(format!(
                "connection table has {} direction rows for domain rank {}",
                self.table.len(),
                domain.rank()
            )));
        }
        for row in &self.table {
            if row.len() != acted.rank() {
                return Err(Error::ShapeMismatch(format!(
                    "connection table row has {} entries for acted rank {}",
                    row.len(),
                    acted.rank()
                )));
            }
            for s in row {
                if s.rank() != acted.rank() {
                    return Err(Error::ShapeMismatch("connection entry rank".into()));
                }
                for p in s.coeffs() {
                    if p.nvars() != domain.chart().dim() {
                        return Err(Error::ChartMismatch("connection entry arity".into()));
                    }
                    domain.chart().admit_poly(p)?;
                }
            }
        }
        Ok(())
    }

    /// `∇_ψ v = Σ_j (ρ(ψ) v^j) f_j + Σ_{ij} ψ^i v^j ∇_{a_i} f_j`.
    pub fn apply(
        &self,
        domain: &CourantStructure,
        psi: &Section,
        v: &Section,
    ) -> Section {
        let acted_rank = v.rank();
        let rho = domain.anchor_apply(psi);
        let mut out: Vec<Polynomial> = (0..acted_rank).map(|j| rho.apply(v.coeff(j))).collect();
        for i in 0..self.domain_rank() {
            if psi.coeff(i).is_zero() {
                continue;
            }
            for j in 0..acted_rank {
                if v.coeff(j).is_zero() || self.table[i][j].is_zero() {
                    continue;
                }
                let f = psi.coeff(i) * v.coeff(j);
                for k in 0..acted_rank {
                    let t = self.table[i][j].coeff(k);
                    if !t.is_zero() {
                        out[k] = &out[k] + &(&f * t);
                    }
                }
            }
        }
        Section::from_coeffs(out)
    }

    /// Curvature `R(a, b)v = ∇_a ∇_b v − ∇_b ∇_a v − ∇_{a⋄b} v`, with the
    /// direction bracket taken in the domain structure.
    pub fn curvature(
        &self,
        domain: &CourantStructure,
        a: &Section,
        b: &Section,
        v: &Section,
    ) -> Section {
        let ab = domain.dorfman(a, b);
        let first = self.apply(domain, a, &self.apply(domain, b, v));
        let second = self.apply(domain, b, &self.apply(domain, a, v));
        let third = self.apply(domain, &ab, v);
        &(&first - &second) - &third
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{DiffForm, VectorField};
    use crate::chart::ChartContext;
    use crate::courant::make_twisted_standard;
    use crate::expr::parse_polynomial;
    use crate::linalg::identity_scalar;

    /// Rank-1 bundle with trivial bracket and coordinate anchor over ℝ¹.
    fn line_bundle() -> CourantStructure {
        let chart = ChartContext::rational(&["t"]).unwrap();
        CourantStructure::new(
            chart,
            vec!["v1".into()],
            identity_scalar(1),
            vec![VectorField::coordinate(1, 0)],
            vec![vec![Section::zero(1, 1)]],
        )
        .unwrap()
    }

    #[test]
    fn leibniz_extension_on_a_line() {
        let e = line_bundle();
        let t = parse_polynomial(e.chart(), "t").unwrap();
        let conn = Connection::new(vec![vec![e.frame_section(0)]]);
        conn.validate(&e, &e).unwrap();
        let v = e.frame_section(0);
        // ∇_{v1}(t·v1) = (ρ(v1)t)·v1 + t·∇_{v1}v1 = v1 + t·v1
        let got = conn.apply(&e, &v, &v.scale(&t));
        assert_eq!(got, e.parse_section("t*v1 + v1").unwrap());
        // tensorial in the direction slot: ∇_{t·v1}v1 = t·∇_{v1}v1
        let got = conn.apply(&e, &v.scale(&t), &v);
        assert_eq!(got, e.parse_section("t*v1").unwrap());
    }

    #[test]
    fn zero_table_connection_is_flat_over_standard_structure() {
        let chart = ChartContext::rational(&["x", "y"]).unwrap();
        let e = make_twisted_standard(&chart, &DiffForm::zero(2, 3), false).unwrap();
        let line = CourantStructure::new(
            chart.clone(),
            vec!["f1".into()],
            identity_scalar(1),
            vec![VectorField::zero(2)],
            vec![vec![Section::zero(2, 1)]],
        )
        .unwrap();
        let conn = Connection::zero(2, e.rank(), line.rank());
        conn.validate(&e, &line).unwrap();
        let a = e.parse_section("x*e_x + d_y").unwrap();
        let b = e.parse_section("y^2*e_y + e_x").unwrap();
        let v = line.parse_section("(x + y)*f1").unwrap();
        assert!(conn.curvature(&e, &a, &b, &v).is_zero());
    }

    #[test]
    fn curved_table_has_the_hand_computed_curvature() {
        let chart = ChartContext::rational(&["x", "y"]).unwrap();
        let e = make_twisted_standard(&chart, &DiffForm::zero(2, 3), false).unwrap();
        let line = CourantStructure::new(
            chart.clone(),
            vec!["f1".into()],
            identity_scalar(1),
            vec![VectorField::zero(2)],
            vec![vec![Section::zero(2, 1)]],
        )
        .unwrap();
        // ∇_{e_x} f1 = y·f1, all other directions flat.
        let mut table = vec![vec![Section::zero(2, 1)]; e.rank()];
        let y = parse_polynomial(&chart, "y").unwrap();
        table[0][0] = line.frame_section(0).scale(&y);
        let conn = Connection::new(table);
        conn.validate(&e, &line).unwrap();
        let ex = e.parse_section("e_x").unwrap();
        let ey = e.parse_section("e_y").unwrap();
        let f = line.frame_section(0);
        // R(e_x, e_y)f1 = −∇_{e_y}(y f1) = −f1
        let got = conn.curvature(&e, &ex, &ey, &f);
        assert_eq!(got, line.parse_section("-f1").unwrap());
        let got = conn.curvature(&e, &ey, &ex, &f);
        assert_eq!(got, f);
    }
}
