//! Laguerre basis functions and the algebraic machinery of the free
//! Hamiltonian in that basis: Gegenbauer polynomials, terminating Gauss
//! hypergeometric sums, the tridiagonal J-matrix elements, and its regular
//! (sine-like) and outgoing/incoming (cosine-like) solutions.
//!
//! The kinematic map is rational: e^{iθ} = (k+ib)/(k−ib), cos θ =
//! (k²−b²)/(k²+b²), sin θ = 2kb/(k²+b²). θ itself is never materialized as
//! an angle, which keeps every branch question out of the module.
//!
//! Normalizations here are pinned by two exact identities rather than by any
//! single printed convention: the Casoratian
//! C⁽⁺⁾_{n+1} S_n − C⁽⁺⁾_n S_{n+1} = k/J_{n,n+1} and the three-term
//! recursions J·S = 0, J·C = 0 (with their n = 0 boundary rows). The
//! integration test suite enforces both to 1e−10 for ℓ ≤ 2.

use num_complex::Complex64;

/// Rational parametrization of the kinematic angle for real k > 0.
#[derive(Debug, Clone, Copy)]
pub struct ThetaPoint {
    pub k: f64,
    pub b: f64,
    /// e^{iθ} = (k+ib)/(k−ib); unimodular for real k.
    pub exp_i_theta: Complex64,
    /// 2kb/(k²+b²); positive for k, b > 0, so θ ∈ (0, π).
    pub sin_theta: f64,
    /// (k²−b²)/(k²+b²).
    pub cos_theta: f64,
}

impl ThetaPoint {
    pub fn new(k: f64, b: f64) -> Self {
        debug_assert!(k > 0.0 && b > 0.0);
        let d = k * k + b * b;
        let cos_theta = (k * k - b * b) / d;
        let sin_theta = 2.0 * k * b / d;
        ThetaPoint {
            k,
            b,
            exp_i_theta: Complex64::new(cos_theta, sin_theta),
            sin_theta,
            cos_theta,
        }
    }

    /// θ = arg[(k+ib)/(k−ib)] ∈ (0, π), continuous in k on (0, ∞).
    pub fn theta(&self) -> f64 {
        self.sin_theta.atan2(self.cos_theta)
    }
}

/// Outgoing (+) or incoming (−) boundary condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    /// e^{∓iθ} for branch ±.
    fn phase(self, tp: &ThetaPoint) -> Complex64 {
        match self {
            Branch::Plus => tp.exp_i_theta.conj(),
            Branch::Minus => tp.exp_i_theta,
        }
    }
}

/// Gegenbauer polynomial C_n^α(x) by the forward three-term recurrence,
/// stable for α ≥ 1 on [−1, 1].
pub fn gegenbauer(n: usize, alpha: f64, x: f64) -> f64 {
    debug_assert!(alpha > 0.0);
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * alpha * x;
    for m in 1..n {
        let mf = m as f64;
        let next = (2.0 * (mf + alpha) * x * cur - (mf + 2.0 * alpha - 1.0) * prev) / (mf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized Laguerre polynomial L_n^α(x) by the standard recurrence.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for m in 1..n {
        let mf = m as f64;
        let next = ((2.0 * mf + 1.0 + alpha - x) * cur - (mf + alpha) * prev) / (mf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Terminating Gauss hypergeometric sum ₂F₁(−ℓ, bb; cc; z), evaluated as the
/// exact finite sum of ℓ+1 terms.
///
/// Panics if `neg_ell > 0` (the series would not terminate) or if `cc` is a
/// non-positive integer hit by the sum.
pub fn hyp2f1_terminating(neg_ell: i32, bb: f64, cc: f64, z: Complex64) -> Complex64 {
    assert!(
        neg_ell <= 0,
        "first parameter must be a non-positive integer, got {neg_ell}"
    );
    let ell = (-neg_ell) as usize;
    for m in 0..ell {
        let c = cc + m as f64;
        assert!(c != 0.0, "pole: cc + {m} = 0 inside the terminating sum");
    }
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for m in 0..ell {
        let mf = m as f64;
        term *= z * ((neg_ell as f64 + mf) * (bb + mf) / ((cc + mf) * (mf + 1.0)));
        sum += term;
    }
    sum
}

/// n!/(n+p)! as a product of reciprocals; avoids factorial overflow.
fn fact_ratio_inv(n: usize, p: usize) -> f64 {
    (1..=p).fold(1.0, |acc, j| acc / (n + j) as f64)
}

/// (n+p)!/n! as a product.
fn fact_ratio(n: usize, p: usize) -> f64 {
    (1..=p).map(|j| (n + j) as f64).product()
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|j| j as f64).product()
}

/// Regular (sine-like) solution of the J-matrix recursion:
/// S_nℓ(k) = ℓ!·n!·(2 sin θ)^{ℓ+1} / (2·(n+2ℓ+1)!) · C_n^{ℓ+1}(cos θ).
///
/// For ℓ = 0 this reduces to sin((n+1)θ)/(n+1); it vanishes as k → 0⁺.
pub fn sine_like(n: usize, ell: usize, k: f64, b: f64) -> f64 {
    let tp = ThetaPoint::new(k, b);
    factorial(ell) * fact_ratio_inv(n, 2 * ell + 1) / 2.0
        * (2.0 * tp.sin_theta).powi(ell as i32 + 1)
        * gegenbauer(n, ell as f64 + 1.0, tp.cos_theta)
}

/// Outgoing/incoming (cosine-like) solution:
/// C_n^{ℓ(±)}(k) = −n!·e^{∓i(n+1)θ} / ((n+ℓ+1)!·(2 sin θ)^ℓ)
///                 · ₂F₁(−ℓ, n+1; n+ℓ+2; e^{∓2iθ}).
///
/// The − branch is the complex conjugate of the + branch for real k.
pub fn cosine_like(n: usize, ell: usize, k: f64, b: f64, branch: Branch) -> Complex64 {
    let tp = ThetaPoint::new(k, b);
    let e = branch.phase(&tp);
    let f = hyp2f1_terminating(-(ell as i32), n as f64 + 1.0, (n + ell + 2) as f64, e * e);
    -fact_ratio_inv(n, ell + 1)
        * e.powu(n as u32 + 1)
        * (2.0 * tp.sin_theta).powi(-(ell as i32))
        * f
}

/// Tridiagonal matrix elements of (free Hamiltonian − k²) in the Laguerre
/// basis. Zero for |n − n'| > 1; the diagonal carries the factor (b²−k²) and
/// vanishes at k = b.
pub fn jmatrix_element(n: usize, nprime: usize, ell: usize, k: f64, b: f64) -> f64 {
    let (lo, hi) = (n.min(nprime), n.max(nprime));
    if hi - lo > 1 {
        return 0.0;
    }
    if lo == hi {
        (n + ell + 1) as f64 * fact_ratio(n, 2 * ell + 1) * (b * b - k * k) / b
    } else {
        fact_ratio(lo, 2 * ell + 2) * (b * b + k * k) / (2.0 * b)
    }
}

/// Index data for one basis function.
#[derive(Debug, Clone, Copy)]
pub struct BasisSpec {
    pub ell: usize,
    pub b: f64,
    pub n: usize,
}

impl BasisSpec {
    pub fn new(ell: usize, b: f64, n: usize) -> Self {
        debug_assert!(b > 0.0);
        BasisSpec { ell, b, n }
    }

    /// Normalization d_n = √(2b·n!/(n+2ℓ+2)!) of the orthonormal basis.
    pub fn psi_norm(&self) -> f64 {
        (2.0 * self.b * fact_ratio_inv(self.n, 2 * self.ell + 2)).sqrt()
    }
}

/// Which member of the basis triple to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// Laguerre basis function φ_nℓ(r) = (2br)^{ℓ+1} e^{−br} L_n^{2ℓ+1}(2br).
    Phi,
    /// Bi-orthogonal form factor φ̄_nℓ(r) = n!/(n+2ℓ+1)! · φ_nℓ(r)/r.
    PhiBar,
    /// Orthonormal function ψ_nℓ(r) = d_n (2br)^{ℓ+1} e^{−br} L_n^{2ℓ+2}(2br).
    Psi,
}

/// Pointwise value of φ, φ̄ or ψ at radius r ≥ 0.
pub fn basis_function(spec: &BasisSpec, kind: BasisKind, r: f64) -> f64 {
    debug_assert!(r >= 0.0);
    let x = 2.0 * spec.b * r;
    let ell = spec.ell;
    match kind {
        BasisKind::Phi => {
            x.powi(ell as i32 + 1)
                * (-spec.b * r).exp()
                * laguerre(spec.n, 2.0 * ell as f64 + 1.0, x)
        }
        BasisKind::PhiBar => {
            // φ/r stays finite at the origin: (2br)^{ℓ+1}/r = (2b)^{ℓ+1} r^ℓ.
            let radial = (2.0 * spec.b).powi(ell as i32 + 1) * r.powi(ell as i32);
            fact_ratio_inv(spec.n, 2 * ell + 1)
                * radial
                * (-spec.b * r).exp()
                * laguerre(spec.n, 2.0 * ell as f64 + 1.0, x)
        }
        BasisKind::Psi => {
            spec.psi_norm()
                * x.powi(ell as i32 + 1)
                * (-spec.b * r).exp()
                * laguerre(spec.n, 2.0 * ell as f64 + 2.0, x)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_rel(got: f64, want: f64, tol: f64) {
        let denom = want.abs().max(1e-300);
        assert!(
            (got - want).abs() / denom <= tol,
            "got {got}, want {want} (rel {:.3e})",
            (got - want).abs() / denom
        );
    }

    #[test]
    fn theta_point_is_unimodular_and_pythagorean() {
        for &(k, b) in &[(0.3, 1.3), (1.0, 1.0), (4.7, 0.2), (0.01, 2.5)] {
            let tp = ThetaPoint::new(k, b);
            assert!((tp.exp_i_theta.norm() - 1.0).abs() < 1e-14);
            assert!((tp.sin_theta.powi(2) + tp.cos_theta.powi(2) - 1.0).abs() < 1e-14);
            let direct = Complex64::new(k, b) / Complex64::new(k, -b);
            assert!((tp.exp_i_theta - direct).norm() < 1e-14);
        }
    }

    #[test]
    fn gegenbauer_low_orders() {
        assert_rel(gegenbauer(0, 1.0, 0.3), 1.0, 0.0);
        assert_rel(gegenbauer(1, 1.0, 0.3), 0.6, 1e-15);
        // C_2^1(x) = 4x^2 - 1 vanishes at x = 1/2
        assert!(gegenbauer(2, 1.0, 0.5).abs() < 1e-15);
    }

    // Direct series sum C_n^a(x) = sum_k (-1)^k (a)_{n-k} / (k! (n-2k)!) (2x)^{n-2k},
    // with (a)_m the rising factorial; independent of the recurrence route.
    fn gegenbauer_series(n: usize, alpha: f64, x: f64) -> f64 {
        let mut sum = 0.0;
        for k in 0..=(n / 2) {
            let mut pochhammer = 1.0;
            for j in 0..(n - k) {
                pochhammer *= alpha + j as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * pochhammer / (factorial(k) * factorial(n - 2 * k))
                * (2.0 * x).powi((n - 2 * k) as i32);
        }
        sum
    }

    #[test]
    fn gegenbauer_matches_series_sum() {
        for n in 0..=8 {
            for &alpha in &[1.0, 2.0, 3.0] {
                for &x in &[-0.9, -0.5, 0.0, 0.3, 0.5, 0.99] {
                    let rec = gegenbauer(n, alpha, x);
                    let ser = gegenbauer_series(n, alpha, x);
                    assert!(
                        (rec - ser).abs() <= 1e-11 * ser.abs().max(1.0),
                        "n={n} alpha={alpha} x={x}: {rec} vs {ser}"
                    );
                }
            }
        }
    }

    #[test]
    fn hyp2f1_terminating_values() {
        let one = hyp2f1_terminating(0, 5.0, 7.0, Complex64::new(0.33, -4.0));
        assert!((one - Complex64::new(1.0, 0.0)).norm() == 0.0);
        let two = hyp2f1_terminating(-1, 2.0, 4.0, Complex64::new(0.5, 0.0));
        assert_rel(two.re, 0.75, 1e-15);
        assert_eq!(two.im, 0.0);
        // Gauss summation at z = 1: 2F1(-2, 3; 5; 1) = G(5)G(4)/(G(7)G(2)) = 0.2,
        // cross-checked by the finite sum itself.
        let gauss = hyp2f1_terminating(-2, 3.0, 5.0, Complex64::new(1.0, 0.0));
        assert_rel(gauss.re, 0.2, 1e-14);
    }

    #[test]
    #[should_panic(expected = "non-positive integer")]
    fn hyp2f1_rejects_non_terminating() {
        hyp2f1_terminating(1, 2.0, 4.0, Complex64::new(0.5, 0.0));
    }

    #[test]
    fn sine_like_closed_forms_at_ell0() {
        let (k, b) = (0.77, 1.31);
        let tp = ThetaPoint::new(k, b);
        // S_0^0 = sin(theta)
        assert_rel(sine_like(0, 0, k, b), tp.sin_theta, 1e-14);
        // at k = b, theta = pi/2: S_1^0 = sin(2 theta)/2 = 0
        assert!(sine_like(1, 0, 1.3, 1.3).abs() < 1e-15);
        // general ell=0 form sin((n+1) theta)/(n+1)
        for n in 0..8 {
            let want = ((n as f64 + 1.0) * tp.theta()).sin() / (n as f64 + 1.0);
            assert_rel(sine_like(n, 0, k, b), want, 1e-13);
        }
    }

    #[test]
    fn sine_like_vanishes_at_threshold() {
        for n in 0..6 {
            for ell in 0..3 {
                assert!(sine_like(n, ell, 1e-9, 1.3).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn cosine_like_closed_forms_and_conjugation() {
        let (k, b) = (0.52, 1.19);
        let tp = ThetaPoint::new(k, b);
        let plus = cosine_like(0, 0, k, b, Branch::Plus);
        assert!((plus + tp.exp_i_theta.conj()).norm() < 1e-14); // -e^{-i theta}
        let minus = cosine_like(0, 0, k, b, Branch::Minus);
        assert!((minus + tp.exp_i_theta).norm() < 1e-14);
        for n in 0..6 {
            for ell in 0..3 {
                let p = cosine_like(n, ell, k, b, Branch::Plus);
                let m = cosine_like(n, ell, k, b, Branch::Minus);
                assert!((m - p.conj()).norm() < 1e-13 * p.norm());
            }
        }
    }

    #[test]
    fn jmatrix_is_tridiagonal_and_vanishes_on_diagonal_at_k_eq_b() {
        assert_eq!(jmatrix_element(0, 2, 0, 0.5, 1.3), 0.0);
        assert_eq!(jmatrix_element(5, 1, 2, 0.5, 1.3), 0.0);
        for n in 0..5 {
            for ell in 0..3 {
                assert_eq!(jmatrix_element(n, n, ell, 1.3, 1.3), 0.0);
                assert!(jmatrix_element(n, n, ell, 0.7, 1.3) != 0.0);
                // symmetric off-diagonal
                let up = jmatrix_element(n, n + 1, ell, 0.7, 1.3);
                let dn = jmatrix_element(n + 1, n, ell, 0.7, 1.3);
                assert_eq!(up, dn);
            }
        }
    }

    // Recursion residual for one (n, ell, k): J S = 0 rows must close.
    #[test]
    fn jmatrix_row_annihilates_sine_like() {
        let (k, b) = (0.5, 1.3);
        for ell in 0..3 {
            for n in 1..=8 {
                let res = jmatrix_element(n, n - 1, ell, k, b) * sine_like(n - 1, ell, k, b)
                    + jmatrix_element(n, n, ell, k, b) * sine_like(n, ell, k, b)
                    + jmatrix_element(n, n + 1, ell, k, b) * sine_like(n + 1, ell, k, b);
                let scale =
                    (jmatrix_element(n, n + 1, ell, k, b) * sine_like(n + 1, ell, k, b)).abs();
                assert!(res.abs() <= 1e-10 * scale, "ell={ell} n={n}: {res:e}");
            }
        }
    }

    #[test]
    fn basis_phi_vanishes_at_origin_and_phibar_is_finite() {
        let spec = BasisSpec::new(0, 1.0, 0);
        assert_eq!(basis_function(&spec, BasisKind::Phi, 0.0), 0.0);
        // phi_bar(0) = 2b L_n^1(0) n!/(n+1)! = 2b at ell = 0
        for n in 0..4 {
            let s = BasisSpec::new(0, 1.0, n);
            assert_rel(basis_function(&s, BasisKind::PhiBar, 0.0), 2.0, 1e-13);
        }
        let s1 = BasisSpec::new(1, 1.0, 2);
        assert_eq!(basis_function(&s1, BasisKind::PhiBar, 0.0), 0.0);
    }

    #[test]
    fn psi_norm_matches_definition() {
        // d_0 = sqrt(2b 0!/2!) = sqrt(b)
        let s = BasisSpec::new(0, 1.0, 0);
        assert_rel(s.psi_norm(), 1.0, 1e-15);
        // d_2 at ell = 1: sqrt(2b 2!/6!) = sqrt(2b/360)
        let s2 = BasisSpec::new(1, 1.3, 2);
        assert_rel(s2.psi_norm(), (2.0 * 1.3 / 360.0_f64).sqrt(), 1e-14);
    }
}
