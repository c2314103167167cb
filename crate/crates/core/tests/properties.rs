//! Property-based invariants for the q-calculus kernel and the polynomial
//! families, exercised over randomized parameters.

use proptest::prelude::*;
use qsturm::families::{Family, FamilyId};
use qsturm::polynomial::Polynomial;
use qsturm::qcalculus::{jackson_integral_symmetric, q_derivative, q_derivative_inverse_base};
use qsturm::qcore::{q_number, q_pochhammer, QContext};

fn q_strategy() -> impl Strategy<Value = f64> {
    (0.05f64..0.95).prop_map(|q| q)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// (a; q)_{n+1} = (a; q)_n (1 - a q^n)
    #[test]
    fn pochhammer_recursion(a in -2.0f64..2.0, q in q_strategy(), n in 0u32..20) {
        let lhs = q_pochhammer(a, q, n + 1);
        let rhs = q_pochhammer(a, q, n) * (1.0 - a * q.powi(n as i32));
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()).max(1.0));
    }

    /// [z + w] = [z] + q^z [w]
    #[test]
    fn q_number_additivity(z in -3.0f64..3.0, w in -3.0f64..3.0, q in q_strategy()) {
        let ctx = QContext::with_q(q).unwrap();
        let lhs = q_number(z + w, &ctx);
        let rhs = q_number(z, &ctx) + q.powf(z) * q_number(w, &ctx);
        prop_assert!((lhs - rhs).abs() <= 1e-11 * lhs.abs().max(rhs.abs()).max(1.0));
    }

    /// D_{1/q} f evaluated at qx equals D_q f at x.
    #[test]
    fn derivative_shift_identity(q in q_strategy(), x in 0.1f64..2.0) {
        let ctx = QContext::with_q(q).unwrap();
        let f = |t: f64| 1.5 * t * t * t - 2.0 * t + 0.25;
        let lhs = q_derivative_inverse_base(f, q * x, &ctx).unwrap();
        let rhs = q_derivative(f, x, &ctx).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0));
    }

    /// Eigenfunctions of every family have the parity of their degree.
    #[test]
    fn family_polynomials_have_parity(q in 0.1f64..0.9, n in 0usize..11) {
        let ctx = QContext::with_q(q).unwrap();
        for (id, p) in [
            (FamilyId::Chebyshev5Q, None),
            (FamilyId::Chebyshev6Q, None),
            (FamilyId::GenQHermite, Some(0.1)),
        ] {
            let fam = Family::new(id, p, &ctx).unwrap();
            let phi = fam.monic_from_recurrence(n);
            prop_assert!(phi.has_parity(n), "{id} degree {n} lost parity");
            prop_assert_eq!(phi.degree(), n);
            prop_assert!((phi.leading_coefficient() - 1.0).abs() < 1e-12);
        }
    }

    /// Series and recurrence representations agree coefficientwise.
    #[test]
    fn series_matches_recurrence(q in 0.1f64..0.9, n in 0usize..9) {
        let ctx = QContext::with_q(q).unwrap();
        let fam = Family::new(FamilyId::Chebyshev5Q, None, &ctx).unwrap();
        let rec = fam.monic_from_recurrence(n);
        let ser = fam.monic_from_series(n).unwrap();
        for k in 0..=n {
            let a = rec.coeffs().get(k).copied().unwrap_or(0.0);
            let b = ser.coeffs().get(k).copied().unwrap_or(0.0);
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0));
        }
    }

    /// Odd integrands cancel exactly in the symmetric Jackson integral.
    #[test]
    fn odd_integrand_cancels(q in q_strategy(), c1 in -2.0f64..2.0, c3 in -2.0f64..2.0) {
        let ctx = QContext::with_q(q).unwrap();
        let odd = Polynomial::new(vec![0.0, c1, 0.0, c3]);
        let v = jackson_integral_symmetric(|x| odd.eval(x), 1.0, &ctx).unwrap().value;
        let scale = jackson_integral_symmetric(|x| odd.eval(x).abs(), 1.0, &ctx)
            .unwrap()
            .value;
        prop_assert!(v.abs() <= 1e-13 * scale.max(1.0));
    }

    /// The recurrence coefficients gamma_n stay positive on the valid
    /// parameter range, as orthogonality requires.
    #[test]
    fn gamma_positive(q in 0.1f64..0.9, n in 1usize..12) {
        let ctx = QContext::with_q(q).unwrap();
        for (id, p) in [
            (FamilyId::Chebyshev5Q, None),
            (FamilyId::Chebyshev6Q, None),
            (FamilyId::GenQHermite, Some(0.0)),
        ] {
            let fam = Family::new(id, p, &ctx).unwrap();
            prop_assert!(fam.gamma(n) > 0.0, "{id} gamma({n}) not positive");
        }
    }
}
