//! Shared verification machinery: seeded sampling of random polynomial data
//! and the order-preserving check runner.
//!
//! Every check runs a deterministic ladder of instances — plain frame
//! elements first, then coordinate-dressed frames, then seeded random
//! sections — and reports the first failing instance in ladder order as its
//! witness, so witnesses are as simple as the failure allows and reports are
//! byte-identical for a fixed seed.

use crate::chart::ChartContext;
use crate::courant::{CourantStructure, Section};
use crate::error::{Error, Result};
use crate::exec;
use crate::poly::Polynomial;
use crate::report::{CheckResult, Witness};
use crate::scalar::{Scalar, ScalarField};
use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default seed for randomized verification passes.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// Sampling parameters for the randomized pass of every check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleSpec {
    pub seed: u64,
    pub samples: usize,
    pub max_degree: u32,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec { seed: DEFAULT_SEED, samples: 16, max_degree: 2 }
    }
}

impl SampleSpec {
    /// Independent RNG stream for a named check, decoupling checks from each
    /// other so adding one never perturbs another's samples.
    pub fn rng(&self, check_name: &str) -> ChaCha8Rng {
        let mut hash: u64 = 0xcbf29ce484222325;
        for b in check_name.bytes() {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x100000001b3);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(hash);
        rng
    }

    pub fn describe(&self, report: &mut crate::report::VerificationReport) {
        report.push_meta("seed", self.seed);
        report.push_meta("samples", self.samples);
        report.push_meta("max-degree", self.max_degree);
    }
}

/// Random scalar with small numerator/denominator; over a gaussian chart the
/// value may have an imaginary part.
pub fn random_scalar(rng: &mut ChaCha8Rng, field: ScalarField) -> Scalar {
    fn small_ratio(rng: &mut ChaCha8Rng) -> BigRational {
        let num: i64 = loop {
            let n = rng.gen_range(-4..=4);
            if n != 0 {
                break n;
            }
        };
        let den: i64 = rng.gen_range(1..=3);
        BigRational::new(num.into(), den.into())
    }
    let re = small_ratio(rng);
    if field == ScalarField::GaussianRational && rng.gen_range(0..3) == 0 {
        Scalar::from_parts(re, small_ratio(rng))
    } else {
        Scalar::from_parts(re, BigRational::from_integer(0.into()))
    }
}

/// Random sparse polynomial with one to three terms of bounded total degree.
pub fn random_poly(rng: &mut ChaCha8Rng, chart: &ChartContext, max_degree: u32) -> Polynomial {
    let n = chart.dim();
    let terms = rng.gen_range(1..=3);
    let mut acc = chart.zero_poly();
    for _ in 0..terms {
        let mut exps = vec![0u32; n];
        if n > 0 {
            let degree = rng.gen_range(0..=max_degree);
            for _ in 0..degree {
                exps[rng.gen_range(0..n)] += 1;
            }
        }
        let coeff = random_scalar(rng, chart.field());
        let mono = Polynomial::from_terms(n, vec![(exps, coeff)]);
        acc = &acc + &mono;
    }
    acc
}

/// Random section with one or two nonzero frame slots.
pub fn random_section(
    rng: &mut ChaCha8Rng,
    chart: &ChartContext,
    rank: usize,
    max_degree: u32,
) -> Section {
    let mut coeffs = vec![chart.zero_poly(); rank];
    if rank == 0 {
        return Section::from_coeffs(coeffs);
    }
    let slots = rng.gen_range(1..=2.min(rank));
    for _ in 0..slots {
        let k = rng.gen_range(0..rank);
        coeffs[k] = &coeffs[k] + &random_poly(rng, chart, max_degree);
    }
    Section::from_coeffs(coeffs)
}

/// Run a named check over an ordered instance ladder. `eval` returns `None`
/// for a passing instance and a witness for a failing one; the reported
/// witness is the first failure in ladder order regardless of execution mode.
pub fn run_check<I: Sync>(
    name: &str,
    items: &[I],
    eval: impl Fn(&I) -> Option<Witness> + Sync + Send,
) -> CheckResult {
    let outcomes = exec::map_ordered(items, eval);
    let witness = outcomes.into_iter().flatten().next();
    CheckResult { name: name.to_string(), instances: items.len(), witness }
}

/// Labelled section instance for witness rendering.
#[derive(Clone)]
pub struct Labelled {
    pub text: String,
    pub section: Section,
}

impl Labelled {
    pub fn new(e: &CourantStructure, section: Section) -> Self {
        Labelled { text: e.section_string(&section), section }
    }
}

/// Instance ladder for section tuples: every frame tuple, then frame tuples
/// with one coordinate-function dressing, then seeded random sections.
pub fn section_tuples(
    e: &CourantStructure,
    spec: &SampleSpec,
    check_name: &str,
    arity: usize,
    dress_with_coordinates: bool,
) -> Vec<Vec<Labelled>> {
    let rank = e.rank();
    let n = e.chart().dim();
    let mut out: Vec<Vec<Labelled>> = Vec::new();
    // Rung 1: all frame tuples.
    let mut idx = vec![0usize; arity];
    if rank > 0 {
        loop {
            out.push(idx.iter().map(|&k| Labelled::new(e, e.frame_section(k))).collect());
            let mut carry = arity;
            while carry > 0 {
                idx[carry - 1] += 1;
                if idx[carry - 1] < rank {
                    break;
                }
                idx[carry - 1] = 0;
                carry -= 1;
            }
            if carry == 0 {
                break;
            }
        }
    }
    let frame_tuples = out.len();
    // Rung 2: dress the first slot of each frame tuple with one coordinate.
    if dress_with_coordinates {
        for t in 0..frame_tuples {
            for m in 0..n {
                let mut tuple = out[t].clone();
                let dressed = tuple[0].section.scale(&e.chart().var(m));
                tuple[0] = Labelled::new(e, dressed);
                out.push(tuple);
            }
        }
    }
    // Rung 3: seeded random sections.
    let mut rng = spec.rng(check_name);
    for _ in 0..spec.samples {
        out.push(
            (0..arity)
                .map(|_| Labelled::new(e, random_section(&mut rng, e.chart(), rank, spec.max_degree)))
                .collect(),
        );
    }
    out
}

/// Polynomial ladder: coordinate functions first, then seeded random
/// polynomials.
pub fn function_ladder(
    chart: &ChartContext,
    spec: &SampleSpec,
    check_name: &str,
) -> Vec<(String, Polynomial)> {
    let mut out: Vec<(String, Polynomial)> = Vec::new();
    for m in 0..chart.dim() {
        out.push((chart.name(m).to_string(), chart.var(m)));
    }
    let mut rng = spec.rng(check_name);
    for _ in 0..spec.samples {
        let p = random_poly(&mut rng, chart, spec.max_degree);
        out.push((crate::expr::poly_to_string(chart, &p), p));
    }
    out
}

/// Validate CLI-provided sampling parameters.
pub fn sample_spec(seed: u64, samples: usize, max_degree: u32) -> Result<SampleSpec> {
    if samples > 100_000 {
        return Err(Error::ShapeMismatch("sample count too large".into()));
    }
    if max_degree > 16 {
        return Err(Error::ShapeMismatch("sample degree too large".into()));
    }
    Ok(SampleSpec { seed, samples, max_degree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::DiffForm;
    use crate::courant::make_twisted_standard;

    #[test]
    fn rng_streams_are_deterministic_and_check_scoped() {
        let spec = SampleSpec::default();
        let a: u64 = spec.rng("jacobi").gen();
        let b: u64 = spec.rng("jacobi").gen();
        let c: u64 = spec.rng("leibniz").gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_data_respects_chart_field_and_degree() {
        let chart = ChartContext::rational(&["x", "y"]).unwrap();
        let spec = SampleSpec::default();
        let mut rng = spec.rng("sampling");
        for _ in 0..50 {
            let p = random_poly(&mut rng, &chart, 2);
            assert!(p.total_degree() <= 2);
            chart.admit_poly(&p).unwrap();
        }
        let point = ChartContext::rational(&[]).unwrap();
        let p = random_poly(&mut rng, &point, 2);
        assert!(p.as_constant().is_some());
    }

    #[test]
    fn ladder_orders_simple_instances_first() {
        let chart = ChartContext::rational(&["x", "y"]).unwrap();
        let e = make_twisted_standard(&chart, &DiffForm::zero(2, 3), false).unwrap();
        let spec = SampleSpec { samples: 2, ..SampleSpec::default() };
        let tuples = section_tuples(&e, &spec, "demo", 2, true);
        assert_eq!(tuples.len(), 16 + 16 * 2 + 2);
        assert_eq!(tuples[0][0].text, "e_x");
        assert_eq!(tuples[16][0].text, "x*e_x");
        let again = section_tuples(&e, &spec, "demo", 2, true);
        assert_eq!(tuples[tuples.len() - 1][0].text, again[again.len() - 1][0].text);
    }

    #[test]
    fn run_check_reports_first_failure_in_order() {
        let items: Vec<u32> = (0..100).collect();
        let result = run_check("demo", &items, |&k| {
            if k % 7 == 3 {
                Some(Witness::new(vec![("k".into(), k.to_string())], "bad".into()))
            } else {
                None
            }
        });
        assert_eq!(result.instances, 100);
        assert_eq!(result.witness.unwrap().inputs[0].1, "3");
        let clean = run_check("demo", &items, |_| None);
        assert!(clean.passed());
    }
}
