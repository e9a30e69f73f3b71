//! Rational parametrization of the S-matrix: recover the monic numerator
//! polynomial of the Fredholm determinant by interpolation, pull out its
//! roots, and package them as the pole parameters {a_j} of
//!
//!   S(k) = ((k+ib)/(k−ib))^𝒩 ∏_j (k−ia_j)/(k+ia_j),
//!   F(k) = ∏_j (k+ia_j)/(k+ib)^𝒩.
//!
//! Admissible parameters are closed under conjugation and have Re a_j > 0;
//! a negative real a_j would add a bound state and is rejected.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const LEADING_TOL: f64 = 1e-10;
const PAIR_TOL: f64 = 1e-8;
// double roots split by ~sqrt(eps) under polishing; a pair this close to the
// real axis is two real parameters
const REAL_COLLAPSE_TOL: f64 = 2e-7;
const NEWTON_TOL: f64 = 1e-12;

/// Polynomial with unit leading coefficient, ascending complex coefficients.
#[derive(Debug, Clone)]
pub struct MonicPolynomial {
    coeffs: Vec<Complex64>,
    leading_deviation: f64,
}

impl MonicPolynomial {
    /// Accepts coefficients whose leading entry is within 1e−10 of 1 and
    /// normalizes it away exactly; the deviation is kept as a diagnostic.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        let lead = *coeffs
            .last()
            .ok_or_else(|| Error::Schema("polynomial needs at least one coefficient".into()))?;
        let dev = (lead - Complex64::new(1.0, 0.0)).norm();
        if dev > LEADING_TOL {
            return Err(Error::NotMonic {
                re: lead.re,
                im: lead.im,
            });
        }
        for c in coeffs.iter_mut() {
            *c /= lead;
        }
        Ok(MonicPolynomial {
            coeffs,
            leading_deviation: dev,
        })
    }

    /// |leading − 1| of the raw coefficients handed to the constructor.
    pub fn leading_deviation(&self) -> f64 {
        self.leading_deviation
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn eval(&self, k: Complex64) -> Complex64 {
        // Horner
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::ZERO, |acc, &c| acc * k + c)
    }

    fn eval_derivative(&self, k: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for (m, &c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * k + c * m as f64;
        }
        acc
    }
}

/// Recover 𝓡(k) = 𝒟⁺(k)·(k+ib)^𝒩 from point values of the determinant.
///
/// The evaluator is sampled at the 𝒩+1 Chebyshev extrema of [0.1, 2b+𝒩]
/// and the Vandermonde system is solved in the Chebyshev basis of the
/// rescaled variable (the monomial basis loses the fit already around
/// degree 12); the fit is then validated at the 𝒩 interleaved Chebyshev
/// roots. A held-out residual above 1e−8 of the sampled scale means the
/// evaluator is not rational of the declared degree.
pub fn numerator_polynomial(
    det_evaluator: impl Fn(f64) -> Result<Complex64>,
    script_n: usize,
    b: f64,
) -> Result<MonicPolynomial> {
    assert!(script_n >= 1, "degree must be positive");
    let (klo, khi) = (0.1, 2.0 * b + script_n as f64);
    let alpha = 0.5 * (khi - klo);
    let beta = 0.5 * (khi + klo);
    let m = script_n + 1;
    let value = |k: f64| -> Result<Complex64> {
        Ok(det_evaluator(k)? * Complex64::new(k, b).powu(script_n as u32))
    };

    let mut vand = DMatrix::<Complex64>::zeros(m, m);
    let mut rhs = DVector::<Complex64>::zeros(m);
    let mut scale = 0.0f64;
    for i in 0..m {
        let t = (std::f64::consts::PI * i as f64 / script_n as f64).cos();
        let row = chebyshev_row(t, m);
        for j in 0..m {
            vand[(i, j)] = Complex64::new(row[j], 0.0);
        }
        rhs[i] = value(beta + alpha * t)?;
        scale = scale.max(rhs[i].norm());
    }
    let cheb = vand.lu().solve(&rhs).ok_or(Error::SingularSystem(beta))?;

    // held-out validation at the Chebyshev roots, interleaved with the
    // extrema used above
    for i in 0..script_n {
        let t = (std::f64::consts::PI * (2.0 * i as f64 + 1.0) / (2.0 * script_n as f64)).cos();
        let k = beta + alpha * t;
        let want = value(k)?;
        let row = chebyshev_row(t, m);
        let got: Complex64 = (0..m).map(|j| cheb[j] * row[j]).sum();
        let resid = (got - want).norm() / scale.max(1e-300);
        if resid > 1e-8 {
            return Err(Error::NotRational {
                residual: resid,
                node: k,
                degree: script_n,
            });
        }
    }

    // Chebyshev -> monomial in t via the T_{j+1} = 2t T_j − T_{j−1} tableau
    let mut ct = vec![Complex64::ZERO; m];
    let mut t_prev = vec![0.0; m]; // T_0
    let mut t_cur = vec![0.0; m]; // T_1
    t_prev[0] = 1.0;
    if m > 1 {
        t_cur[1] = 1.0;
    }
    for (j, coeff) in cheb.iter().enumerate() {
        let basis = if j == 0 { &t_prev } else { &t_cur };
        for p in 0..m {
            ct[p] += coeff * basis[p];
        }
        if j >= 1 && j + 1 < m {
            let mut t_next = vec![0.0; m];
            for (p, &tc) in t_cur.iter().enumerate().take(m - 1) {
                t_next[p + 1] += 2.0 * tc;
            }
            for (next, &tp) in t_next.iter_mut().zip(&t_prev) {
                *next -= tp;
            }
            t_prev = std::mem::take(&mut t_cur);
            t_cur = t_next;
        }
    }

    // change of basis t = (k − β)/α back to monomials in k
    let mut ck = vec![Complex64::ZERO; m];
    for (j, &ctj) in ct.iter().enumerate() {
        let mut binom = 1.0f64;
        for (p, ckp) in ck.iter_mut().enumerate().take(j + 1) {
            let coeff = binom * (-beta).powi((j - p) as i32) / alpha.powi(j as i32);
            *ckp += ctj * coeff;
            binom = binom * (j - p) as f64 / (p + 1) as f64;
        }
    }
    MonicPolynomial::new(ck)
}

/// T_0(t) … T_{m−1}(t).
fn chebyshev_row(t: f64, m: usize) -> Vec<f64> {
    let mut row = vec![0.0; m];
    row[0] = 1.0;
    if m > 1 {
        row[1] = t;
    }
    for j in 2..m {
        row[j] = 2.0 * t * row[j - 1] - row[j - 2];
    }
    row
}

/// Bargmann parametrization of a unitary rational S-matrix: scale b and the
/// 𝒩 pole parameters {a_j} (fm⁻¹), conjugate-closed with Re a_j > 0.
#[derive(Debug, Clone)]
pub struct RationalSMatrix {
    b: f64,
    ell: usize,
    a: Vec<Complex64>,
}

impl RationalSMatrix {
    /// Validates conjugate closure (within 1e−8, then symmetrized exactly)
    /// and the half-plane restrictions.
    pub fn new(b: f64, a: Vec<Complex64>) -> Result<Self> {
        if b <= 0.0 {
            return Err(Error::NonPositiveScale(b));
        }
        let a = pair_and_validate(a)?;
        Ok(RationalSMatrix { b, ell: 0, a })
    }

    /// Tags the partial wave the parameters came from; only ℓ = 0 may enter
    /// the Marchenko stage.
    pub fn with_ell(mut self, ell: usize) -> Self {
        self.ell = ell;
        self
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn script_n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Complex64] {
        &self.a
    }

    /// S(k) = ((k+ib)/(k−ib))^𝒩 ∏ (k−ia_j)/(k+ia_j); unimodular for real k.
    pub fn smatrix_eval(&self, k: f64) -> Complex64 {
        let kc = Complex64::new(k, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let ib = i * self.b;
        let mut s = ((kc + ib) / (kc - ib)).powu(self.script_n() as u32);
        for &aj in &self.a {
            s *= (kc - i * aj) / (kc + i * aj);
        }
        s
    }

    /// Jost function F(k) = ∏ (k+ia_j)/(k+ib)^𝒩 for complex k ≠ −ib.
    pub fn jost_eval(&self, k: Complex64) -> Result<Complex64> {
        let i = Complex64::new(0.0, 1.0);
        let ib = i * self.b;
        if (k + ib).norm() == 0.0 {
            return Err(Error::DeterminantPole);
        }
        let num: Complex64 = self.a.iter().map(|&aj| k + i * aj).product();
        Ok(num / (k + ib).powu(self.script_n() as u32))
    }

    /// Continuous phase shift δ(k) = arg S(k)/2 on the given grid, built from
    /// branch-free pieces:
    ///
    ///   δ(k) = 𝒩·θ(k)/2 − Σ_j arg(k + ia_j),
    ///
    /// with θ = atan2(2kb, k²−b²) ∈ (0, π) and arg(k+ia_j) =
    /// atan2(Re a_j, k − Im a_j) ∈ (0, π); every term is continuous in k > 0
    /// and vanishes as k → ∞, so no unwrapping step is ever needed and
    /// δ(∞) = 0 is automatic.
    pub fn phase_shift(&self, k_grid: &[f64]) -> Result<Vec<f64>> {
        if k_grid.is_empty() || k_grid[0] <= 0.0 || k_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid);
        }
        Ok(k_grid.iter().map(|&k| self.phase_shift_at(k)).collect())
    }

    /// Single-point version of [`RationalSMatrix::phase_shift`].
    pub fn phase_shift_at(&self, k: f64) -> f64 {
        let theta = (2.0 * k * self.b).atan2(k * k - self.b * self.b);
        let args: f64 = self.a.iter().map(|aj| aj.re.atan2(k - aj.im)).sum();
        0.5 * self.script_n() as f64 * theta - args
    }

    /// Scattering length −lim_{k→0} δ(k)/k in closed form:
    /// 𝒩/b − Σ_j Re(1/a_j).
    pub fn scattering_length(&self) -> f64 {
        self.script_n() as f64 / self.b - self.a.iter().map(|&aj| (1.0 / aj).re).sum::<f64>()
    }

    /// Σ a_j − 𝒩·b, which vanishes identically for parameters extracted
    /// from a determinant with scale b (2Nb at ℓ = 0).
    pub fn trace_defect(&self) -> f64 {
        let sum: Complex64 = self.a.iter().sum();
        (sum - Complex64::new(self.script_n() as f64 * self.b, 0.0)).norm()
    }
}

/// Roots of the numerator polynomial, mapped to Bargmann parameters
/// a_j = i·k_j.
///
/// The substitution k = iz turns the numerator into a real-coefficient monic
/// polynomial P(z) = ∏(z + a_j); its companion-matrix eigenvalues seed a
/// Newton polish on P, and the polished roots are conjugate-paired,
/// symmetrized, and checked against the half-plane restrictions.
pub fn extract_bargmann(poly: &MonicPolynomial, b: f64) -> Result<RationalSMatrix> {
    let zpoly = real_z_polynomial(poly)?;
    let mut roots = Vec::with_capacity(zpoly.degree());
    for z0 in companion_eigenvalues(&zpoly) {
        let z = newton_polish(&zpoly, z0)?;
        roots.push(-z); // a_j = −z_j
    }
    RationalSMatrix::new(b, roots)
}

/// Like [`extract_bargmann`], with a final Newton pass of each root against
/// a fresh determinant evaluation (any complex-capable route).
///
/// The interpolated coefficients carry an absolute rounding floor of order
/// eps times the largest sampled numerator value; near a root the evaluator
/// itself is accurate to eps of the *local* value, so re-polishing there
/// recovers the roots essentially to machine precision. The polynomial
/// still supplies the seeds and the Newton slope.
pub fn extract_bargmann_with(
    poly: &MonicPolynomial,
    b: f64,
    det_evaluator: impl Fn(Complex64) -> Result<Complex64>,
) -> Result<RationalSMatrix> {
    let script_n = poly.degree();
    let zpoly = real_z_polynomial(poly)?;
    let i = Complex64::new(0.0, 1.0);
    let ib = i * b;
    let numerator = |k: Complex64| -> Result<Complex64> {
        Ok(det_evaluator(k)? * (k + ib).powu(script_n as u32))
    };
    let mut roots = Vec::with_capacity(script_n);
    for z0 in companion_eigenvalues(&zpoly) {
        let z = newton_polish(&zpoly, z0)?;
        // k = i z maps z-space roots to wave-number space; keep whichever
        // iterate leaves the smallest residual, and never step far — at a
        // multiple root the slope is noise-level and an unguarded Newton
        // step would kick an already-converged seed away
        let mut k = i * z;
        let mut best = (numerator(k)?.norm(), k);
        for _ in 0..8 {
            let f = numerator(k)?;
            let slope = poly.eval_derivative(k);
            if slope.norm() == 0.0 {
                break;
            }
            let step = f / slope;
            if step.norm() > 0.1 * (1.0 + k.norm()) {
                break;
            }
            k -= step;
            let resid = numerator(k)?.norm();
            if resid < best.0 {
                best = (resid, k);
            }
            if step.norm() <= 1e-16 * k.norm().max(1e-8) {
                break;
            }
        }
        roots.push(i * best.1); // a_j = i k_j
    }
    RationalSMatrix::new(b, roots)
}

/// Coefficients of P(z) = 𝓡(iz)/i^𝒩, which must be real for a determinant
/// with conjugate symmetry; interpolation rounding leaves ~1e−8 of the
/// coefficient scale in the imaginary parts, anything structural leaves
/// O(scale).
fn real_z_polynomial(poly: &MonicPolynomial) -> Result<MonicPolynomial> {
    let n = poly.degree();
    assert!(n >= 1, "numerator degree must be positive");
    let i = Complex64::new(0.0, 1.0);
    let mut dre = vec![0.0; n + 1];
    let mut worst_im = 0.0f64;
    let mut scale = 0.0f64;
    for (m, &c) in poly.coeffs().iter().enumerate() {
        let d = c * i.powi(m as i32 - n as i32);
        dre[m] = d.re;
        worst_im = worst_im.max(d.im.abs());
        scale = scale.max(d.norm());
    }
    if worst_im > 1e-7 * scale.max(1.0) {
        return Err(Error::AsymmetricCoefficients(worst_im));
    }
    Ok(MonicPolynomial {
        coeffs: dre.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        leading_deviation: poly.leading_deviation,
    })
}

fn companion_eigenvalues(zpoly: &MonicPolynomial) -> Vec<Complex64> {
    let n = zpoly.degree();
    let mut comp = DMatrix::<f64>::zeros(n, n);
    for r in 1..n {
        comp[(r, r - 1)] = 1.0;
    }
    for r in 0..n {
        comp[(r, n - 1)] = -zpoly.coeffs()[r].re;
    }
    comp.complex_eigenvalues().iter().copied().collect()
}

fn newton_polish(zpoly: &MonicPolynomial, z0: Complex64) -> Result<Complex64> {
    let n = zpoly.degree();
    let mut z = z0;
    for _ in 0..40 {
        let p = zpoly.eval(z);
        let dp = zpoly.eval_derivative(z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        z -= step;
        if step.norm() <= 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    let resid = zpoly.eval(z).norm() / (1.0 + z.norm()).powi(n as i32);
    if resid > NEWTON_TOL {
        return Err(Error::NotRational {
            residual: resid,
            node: z.re,
            degree: n,
        });
    }
    Ok(z)
}

/// Greedy conjugate pairing with symmetrization, then admissibility checks.
fn pair_and_validate(roots: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let mut reals: Vec<f64> = Vec::new();
    let mut upper: Vec<Complex64> = Vec::new();
    let mut lower: Vec<Complex64> = Vec::new();
    for a in roots {
        if a.im.abs() <= PAIR_TOL {
            reals.push(a.re);
        } else if a.im > 0.0 {
            upper.push(a);
        } else {
            lower.push(a);
        }
    }
    let mut pairs: Vec<Complex64> = Vec::new();
    for u in &upper {
        let mut best: Option<(usize, f64)> = None;
        for (idx, l) in lower.iter().enumerate() {
            let d = (u - l.conj()).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((idx, d));
            }
        }
        match best {
            Some((idx, d)) if d <= PAIR_TOL => {
                let partner = lower.swap_remove(idx);
                // enforce exact closure
                pairs.push((u + partner.conj()) * 0.5);
            }
            _ => {
                return Err(Error::UnpairedRoot { re: u.re, im: u.im });
            }
        }
    }
    if let Some(orphan) = lower.first() {
        return Err(Error::UnpairedRoot {
            re: orphan.re,
            im: orphan.im,
        });
    }
    pairs.retain(|p| {
        if p.im.abs() <= REAL_COLLAPSE_TOL {
            reals.push(p.re);
            reals.push(p.re);
            false
        } else {
            true
        }
    });

    for &re in &reals {
        if re < 0.0 {
            return Err(Error::BoundStateParameter(re));
        }
        if re == 0.0 {
            return Err(Error::NonPhysicalParameter { re, im: 0.0 });
        }
    }
    for p in &pairs {
        if p.re <= 0.0 {
            return Err(Error::NonPhysicalParameter { re: p.re, im: p.im });
        }
    }

    // stable presentation: conjugate pairs by descending |Im| (upper first),
    // then real parameters descending
    pairs.sort_by(|x, y| y.im.abs().total_cmp(&x.im.abs()));
    reals.sort_by(|x, y| y.total_cmp(x));
    let mut out = Vec::with_capacity(2 * pairs.len() + reals.len());
    for p in pairs {
        out.push(p);
        out.push(p.conj());
    }
    out.extend(reals.into_iter().map(|r| Complex64::new(r, 0.0)));
    Ok(out)
}

// --- JSON interchange -------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct RationalSMatrixRaw {
    b: f64,
    #[serde(rename = "script_N")]
    script_n: usize,
    a: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "is_zero")]
    ell: usize,
}

fn is_zero(v: &usize) -> bool {
    *v == 0
}

impl Serialize for RationalSMatrix {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        RationalSMatrixRaw {
            b: self.b,
            script_n: self.script_n(),
            a: self.a.iter().map(|c| [c.re, c.im]).collect(),
            ell: self.ell,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RationalSMatrix {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let raw = RationalSMatrixRaw::deserialize(deserializer)?;
        if raw.a.len() != raw.script_n {
            return Err(serde::de::Error::custom(format!(
                "script_N = {} disagrees with {} parameters",
                raw.script_n,
                raw.a.len()
            )));
        }
        let a = raw.a.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        RationalSMatrix::new(raw.b, a)
            .map(|rs| rs.with_ell(raw.ell))
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // (k + ib)^2 expanded: [−b², 2ib, 1]
    fn free_numerator(b: f64) -> MonicPolynomial {
        MonicPolynomial::new(vec![c(-b * b, 0.0), c(0.0, 2.0 * b), c(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn numerator_of_free_determinant_is_kib_squared() {
        let b = 1.3;
        let poly = numerator_polynomial(|_k| Ok(c(1.0, 0.0)), 2, b).unwrap();
        let want = free_numerator(b);
        for m in 0..=2 {
            assert!(
                (poly.coeffs()[m] - want.coeffs()[m]).norm() < 1e-12,
                "coefficient {m}"
            );
        }
    }

    #[test]
    fn numerator_rejects_non_rational_evaluator() {
        // e^{ik}/(k+ib)^2 is not a degree-2 polynomial over (k+ib)^2
        let b = 1.3;
        let err = numerator_polynomial(|k| Ok(c(0.0, k).exp() / c(k, b).powu(2)), 2, b);
        assert!(matches!(err, Err(Error::NotRational { .. })));
    }

    #[test]
    fn extract_free_roots() {
        let b = 1.3;
        let rs = extract_bargmann(&free_numerator(b), b).unwrap();
        assert_eq!(rs.script_n(), 2);
        for &a in rs.a() {
            assert!((a - c(b, 0.0)).norm() < 1e-10);
        }
        // all a_j = b collapses S to 1
        for &k in &[0.2, 1.0, 3.7] {
            assert!((rs.smatrix_eval(k) - c(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn extract_rejects_bound_state_parameter() {
        // roots a = {−0.5, 0.9}: numerator (k − 0.5i)(k + 0.9i)
        let coeffs = vec![c(0.45, 0.0), c(0.0, 0.4), c(1.0, 0.0)];
        let err = extract_bargmann(&MonicPolynomial::new(coeffs).unwrap(), 1.3);
        assert!(matches!(err, Err(Error::BoundStateParameter(_))));
    }

    #[test]
    fn constructor_rejects_unpaired_complex_root() {
        let err = RationalSMatrix::new(1.3, vec![c(0.5, 0.4), c(0.7, 0.0)]);
        assert!(matches!(err, Err(Error::UnpairedRoot { .. })));
    }

    #[test]
    fn monic_check_rejects_scaled_leading_coefficient() {
        let err = MonicPolynomial::new(vec![c(1.0, 0.0), c(1.0001, 0.0)]);
        assert!(matches!(err, Err(Error::NotMonic { .. })));
    }

    #[test]
    fn smatrix_is_unimodular() {
        let rs = RationalSMatrix::new(
            1.3,
            vec![c(0.8, 1.1), c(0.8, -1.1), c(2.0, 0.0), c(0.05, 0.0)],
        )
        .unwrap();
        for ik in 1..=100 {
            let k = 0.05 * ik as f64;
            assert!((rs.smatrix_eval(k).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn jost_limits_and_symmetry() {
        let rs = RationalSMatrix::new(
            1.2,
            vec![c(0.7, 0.9), c(0.7, -0.9), c(1.5, 0.0), c(0.04, 0.0)],
        )
        .unwrap();
        let far = rs.jost_eval(c(5e4, 3e4)).unwrap();
        assert!((far - c(1.0, 0.0)).norm() < 1e-3);
        // F(−k*) = conj F(k)
        for &k in &[c(0.3, 0.2), c(-1.0, 0.7), c(2.0, -0.4)] {
            let lhs = rs.jost_eval(-k.conj()).unwrap();
            let rhs = rs.jost_eval(k).unwrap().conj();
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
        }
        assert!(matches!(
            rs.jost_eval(c(0.0, -1.2)),
            Err(Error::DeterminantPole)
        ));
    }

    #[test]
    fn phase_shift_trivial_and_monotone_grid_checks() {
        let b = 1.3;
        let rs = RationalSMatrix::new(b, vec![c(b, 0.0), c(b, 0.0)]).unwrap();
        let grid: Vec<f64> = (1..=50).map(|i| 0.1 * i as f64).collect();
        let delta = rs.phase_shift(&grid).unwrap();
        assert!(delta.iter().all(|d| d.abs() < 1e-14));
        assert!(matches!(
            rs.phase_shift(&[0.5, 0.4]),
            Err(Error::InvalidGrid)
        ));
        assert!(matches!(rs.phase_shift(&[]), Err(Error::InvalidGrid)));
    }

    #[test]
    fn np_1s0_threshold_behavior() {
        // attractive channel with a near-threshold virtual state: delta > 0
        // at small k and a large negative scattering length
        let rs =
            RationalSMatrix::new(1.158023, vec![c(2.276012669, 0.0), c(0.040033331, 0.0)]).unwrap();
        assert!(rs.phase_shift_at(0.02) > 0.0);
        let a_closed = rs.scattering_length();
        assert!(a_closed < -20.0, "a = {a_closed}");
        // numerical threshold extrapolation of -tan(delta)/k with Richardson
        let f = |k: f64| -(rs.phase_shift_at(k).tan()) / k;
        let (k1, k2) = (2e-4, 1e-4);
        let extrap = 2.0 * f(k2) - f(k1);
        assert!(
            (extrap - a_closed).abs() < 1e-3 * a_closed.abs(),
            "extrapolated {extrap}, closed form {a_closed}"
        );
    }

    #[test]
    fn params_json_round_trip_is_bitwise() {
        let rs = RationalSMatrix::new(1.3, vec![c(0.8, 1.1), c(0.8, -1.1), c(0.4847238917, 0.0)]);
        // odd count with one pair and one real is fine
        let rs = rs.unwrap();
        let json = serde_json::to_string(&rs).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["script_N"], 3);
        assert!(v.get("ell").is_none(), "ell must be omitted when zero");
        let back: RationalSMatrix = serde_json::from_str(&json).unwrap();
        for &k in &[0.3, 0.9, 2.0] {
            let s0 = rs.smatrix_eval(k);
            let s1 = back.smatrix_eval(k);
            assert_eq!(s0.re.to_bits(), s1.re.to_bits());
            assert_eq!(s0.im.to_bits(), s1.im.to_bits());
        }
    }
}
