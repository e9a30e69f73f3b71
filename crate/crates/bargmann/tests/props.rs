//! Property tests over randomly drawn admissible inputs.

mod common;

use bargmann::marchenko::kernel_coeffs;
use bargmann::model::SpectralData;
use bargmann::rational::RationalSMatrix;
use bargmann::specfun::ThetaPoint;
use num_complex::Complex64;
use proptest::prelude::*;

/// Admissible parameter sets: one conjugate pair plus two positive reals.
fn arb_rs() -> impl Strategy<Value = RationalSMatrix> {
    (
        0.5f64..2.0,  // b
        0.05f64..3.0, // pair real part
        0.05f64..8.0, // pair imag part
        0.02f64..3.0, // real root 1
        0.02f64..3.0, // real root 2
    )
        .prop_map(|(b, pre, pim, r1, r2)| {
            RationalSMatrix::new(
                b,
                vec![
                    Complex64::new(pre, pim),
                    Complex64::new(pre, -pim),
                    Complex64::new(r1, 0.0),
                    Complex64::new(r2, 0.0),
                ],
            )
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smatrix_stays_unimodular(rs in arb_rs(), k in 0.01f64..20.0) {
        let s = rs.smatrix_eval(k);
        prop_assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn numerator_coefficients_multiply_out_real(rs in arb_rs()) {
        // expand prod (k + i a_j): with conjugate-closed {a_j} the
        // coefficients alternate real/imaginary, i.e. c_m i^{m-N} is real
        let n = rs.script_n();
        let mut coeffs = vec![Complex64::ZERO; n + 1];
        coeffs[0] = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        for (deg, &aj) in rs.a().iter().enumerate() {
            for m in (0..=deg + 1).rev() {
                let lower = if m > 0 { coeffs[m - 1] } else { Complex64::ZERO };
                coeffs[m] = lower + coeffs[m] * (i * aj);
            }
        }
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        for (m, &c) in coeffs.iter().enumerate() {
            let rotated = c * i.powi(m as i32 - n as i32);
            prop_assert!(rotated.im.abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn phase_shift_decays_and_threshold_is_levinson_zero(rs in arb_rs()) {
        prop_assert!(rs.phase_shift_at(1e5).abs() < 1e-3);
        prop_assert!(rs.phase_shift_at(1e-7).abs() < 1e-3);
    }

    #[test]
    fn q_kernel_symmetry_random_parameters(
        rs in arb_rs(),
        r in 0.01f64..6.0,
        rp in 0.01f64..6.0,
    ) {
        let mk = kernel_coeffs(&rs).unwrap();
        let q = mk.q_kernel(r, rp);
        let qt = mk.q_kernel(rp, r);
        prop_assert!((q - qt).abs() <= 1e-12 * q.abs().max(1e-300));
        let regroup = mk.q_of_t(r + rp);
        prop_assert!((q - regroup).abs() <= 1e-9 * regroup.abs().max(1e-12));
    }

    #[test]
    fn theta_point_invariants(k in 1e-3f64..50.0, b in 0.1f64..5.0) {
        let tp = ThetaPoint::new(k, b);
        prop_assert!((tp.exp_i_theta.norm() - 1.0).abs() < 1e-14);
        prop_assert!((tp.sin_theta * tp.sin_theta + tp.cos_theta * tp.cos_theta - 1.0).abs() < 1e-14);
        prop_assert!(tp.sin_theta > 0.0);
    }

    #[test]
    fn spectral_weights_gate(
        b in 0.5f64..2.0,
        l1 in 0.01f64..0.5,
        dl in 0.1f64..5.0,
        z1 in 0.1f64..0.9,
    ) {
        // normalized two-level data always constructs; breaking the
        // normalization by 1e-3 always fails
        let z2 = (1.0 - z1 * z1).sqrt();
        let ok = SpectralData::new(0, b, vec![l1, l1 + dl], vec![z1, z2]);
        prop_assert!(ok.is_ok());
        let bad = SpectralData::new(0, b, vec![l1, l1 + dl], vec![z1 * 1.001, z2]);
        prop_assert!(bad.is_err());
    }
}
