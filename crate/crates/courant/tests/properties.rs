//! Randomized algebraic invariants of the exact arithmetic layers: scalar
//! field laws, polynomial ring laws, the printer/parser round trip, and the
//! graded identities of the exterior calculus.  These are the contracts the
//! verification checks silently rely on, so they get their own property
//! suite.

use courant::calculus::{increasing_tuples, DiffForm};
use courant::chart::ChartContext;
use courant::expr::{parse_polynomial, parse_scalar, poly_to_string, section_to_string};
use courant::expr::parse_section_coeffs;
use courant::poly::Polynomial;
use courant::scalar::{Scalar, ScalarField};
use proptest::prelude::*;

const NVARS: usize = 3;

fn gaussian_chart() -> ChartContext {
    ChartContext::new(&["x", "y", "z"], ScalarField::GaussianRational).unwrap()
}

fn rational_scalar() -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| Scalar::from_ratio(p, q))
}

fn gaussian_scalar() -> impl Strategy<Value = Scalar> {
    (rational_scalar(), rational_scalar())
        .prop_map(|(re, im)| &re + &(&Scalar::i() * &im))
}

/// Up to four monomials in three variables with small Gaussian-rational
/// coefficients; collisions and cancellations are welcome.
fn poly() -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec(
        (proptest::collection::vec(0u32..=3, NVARS), gaussian_scalar()),
        0..4,
    )
    .prop_map(|terms| Polynomial::from_terms(NVARS, terms))
}

/// Smaller polynomials for the substitution law, where degrees multiply
/// under composition.
fn short_poly() -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec(
        (proptest::collection::vec(0u32..=2, NVARS), gaussian_scalar()),
        0..3,
    )
    .prop_map(|terms| Polynomial::from_terms(NVARS, terms))
}

/// A homogeneous form of the given degree with random polynomial
/// coefficients on every basis tuple.
fn form(degree: usize) -> impl Strategy<Value = DiffForm> {
    let tuples = increasing_tuples(NVARS, degree);
    proptest::collection::vec(poly(), tuples.len()).prop_map(move |coeffs| {
        let mut acc = DiffForm::zero(NVARS, degree);
        for (tuple, c) in tuples.iter().zip(coeffs) {
            acc = acc.add(&DiffForm::from_term(NVARS, tuple, c));
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn scalar_field_laws(a in gaussian_scalar(), b in gaussian_scalar(), c in gaussian_scalar()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &(-&a), Scalar::zero());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        if !b.is_zero() {
            prop_assert_eq!(&a.div(&b) * &b, a);
            prop_assert_eq!(&b * &b.inv().unwrap(), Scalar::one());
        }
    }

    #[test]
    fn scalar_display_round_trips(a in gaussian_scalar()) {
        let chart = gaussian_chart();
        prop_assert_eq!(parse_scalar(&chart, &a.to_string()).unwrap(), a);
    }

    #[test]
    fn polynomial_ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    }

    #[test]
    fn partial_derivative_is_a_derivation(a in poly(), b in poly(), i in 0..NVARS) {
        let product = (&a * &b).partial(i);
        let leibniz = &(&a.partial(i) * &b) + &(&a * &b.partial(i));
        prop_assert_eq!(product, leibniz);
    }

    #[test]
    fn substitution_is_a_ring_map(
        a in short_poly(),
        b in short_poly(),
        subs in proptest::collection::vec(short_poly(), NVARS),
    ) {
        let sum = (&a + &b).substitute(&subs);
        prop_assert_eq!(sum, &a.substitute(&subs) + &b.substitute(&subs));
        let product = (&a * &b).substitute(&subs);
        prop_assert_eq!(product, &a.substitute(&subs) * &b.substitute(&subs));
    }

    #[test]
    fn polynomial_text_round_trips(a in poly()) {
        let chart = gaussian_chart();
        let rendered = poly_to_string(&chart, &a);
        prop_assert_eq!(parse_polynomial(&chart, &rendered).unwrap(), a);
    }

    #[test]
    fn section_text_round_trips(coeffs in proptest::collection::vec(poly(), 4)) {
        let chart = gaussian_chart();
        let labels: Vec<String> =
            ["e_x", "e_y", "d_x", "d_y"].iter().map(|s| s.to_string()).collect();
        let rendered = section_to_string(&chart, &labels, &coeffs);
        let parsed = parse_section_coeffs(&chart, &labels, &rendered).unwrap();
        prop_assert_eq!(parsed, coeffs);
    }

    #[test]
    fn wedge_is_graded_commutative(
        alpha in form(1),
        beta in form(1),
        gamma in form(2),
    ) {
        // odd·odd anticommutes, odd·even commutes
        prop_assert_eq!(
            alpha.wedge(&beta),
            beta.wedge(&alpha).neg()
        );
        prop_assert_eq!(alpha.wedge(&gamma), gamma.wedge(&alpha));
    }

    #[test]
    fn exterior_derivative_is_a_graded_derivation(alpha in form(1), beta in form(1)) {
        // d(α∧β) = dα∧β − α∧dβ for 1-forms α
        let lhs = alpha.wedge(&beta).exterior_derivative();
        let rhs = alpha
            .exterior_derivative()
            .wedge(&beta)
            .sub(&alpha.wedge(&beta.exterior_derivative()));
        prop_assert_eq!(lhs, rhs);
    }
}
