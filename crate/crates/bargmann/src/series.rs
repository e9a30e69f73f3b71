//! Truncated power-series arithmetic with complex coefficients.
//!
//! Used to read off high-order derivatives of rational functions at a point:
//! expanding every linear factor around the point and combining series is
//! exact up to the truncation order, where repeated numerical
//! differentiation of the same derivatives would be hopelessly
//! ill-conditioned.

use num_complex::Complex64;

/// Polynomial truncation of an analytic function around a fixed expansion
/// point: `coeffs[m]` is the coefficient of u^m, u the local variable.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries {
    coeffs: Vec<Complex64>,
}

impl TaylorSeries {
    /// The constant series 1 truncated at the given order (inclusive).
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![Complex64::ZERO; order + 1];
        coeffs[0] = Complex64::new(1.0, 0.0);
        TaylorSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of u^m (zero beyond the truncation order).
    pub fn coeff(&self, m: usize) -> Complex64 {
        self.coeffs.get(m).copied().unwrap_or(Complex64::ZERO)
    }

    /// m-th derivative at the expansion point: m! · coeffs[m].
    pub fn derivative(&self, m: usize) -> Complex64 {
        let mfact: f64 = (1..=m).map(|j| j as f64).product();
        self.coeff(m) * mfact
    }

    /// Multiply by the linear factor (u + w).
    pub fn mul_linear(&self, w: Complex64) -> Self {
        let mut out: Vec<Complex64> = self.coeffs.iter().map(|&c| c * w).collect();
        for (o, &c) in out[1..].iter_mut().zip(&self.coeffs) {
            *o += c;
        }
        TaylorSeries { coeffs: out }
    }

    /// Divide by the linear factor (u + w); requires w ≠ 0 (the factor must
    /// not vanish at the expansion point).
    pub fn div_linear(&self, w: Complex64) -> Self {
        assert!(
            w.norm() > 0.0,
            "series division by a factor vanishing at the expansion point"
        );
        // (u + w)·out = self  ⇒  out[m] = (self[m] − out[m−1]) / w
        let n = self.coeffs.len();
        let mut out = vec![Complex64::ZERO; n];
        for m in 0..n {
            let carry = if m > 0 { out[m - 1] } else { Complex64::ZERO };
            out[m] = (self.coeffs[m] - carry) / w;
        }
        TaylorSeries { coeffs: out }
    }
}
