//! Shared fixtures and independent numerical oracles for the integration
//! suites. Everything here deliberately avoids the library's own evaluation
//! paths: quadrature is Gauss–Legendre built from scratch, residues come
//! from contour sums, and the integral equation is discretized by Nyström.

#![allow(dead_code)]

use bargmann::model::{ModelPotential, PhysicalConstants, SpectralData};
use bargmann::rational::RationalSMatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const YAMAGUCHI_B: f64 = 1.158023;
pub const YAMAGUCHI_LAMBDA0: f64 = -76.4294;
pub const YAMAGUCHI_A: [f64; 2] = [2.276012669, 0.040033331];

pub const RANK4_B: f64 = 1.3;
pub const RANK4_LAMBDA: [f64; 4] = [0.07258480091, 0.6661380111, 3.203427534, 37.0];
pub const RANK4_Z: [f64; 4] = [0.1493428930, 0.4054072736, 0.6619688746, 0.6124857973];
pub const RANK4_A: [(f64, f64); 8] = [
    (3.552401289, 7.346450796),
    (3.552401289, -7.346450796),
    (0.8278500631, 1.088427930),
    (0.8278500631, -1.088427930),
    (0.5554972974, 0.5089227378),
    (0.5554972974, -0.5089227378),
    (0.4847238917, 0.0),
    (0.04377880951, 0.0),
];

pub fn yamaguchi_model() -> ModelPotential {
    ModelPotential::from_yamaguchi(
        YAMAGUCHI_LAMBDA0,
        YAMAGUCHI_B,
        &PhysicalConstants::calibrated(),
    )
    .unwrap()
}

pub fn yamaguchi_rs() -> RationalSMatrix {
    RationalSMatrix::new(
        YAMAGUCHI_B,
        YAMAGUCHI_A
            .iter()
            .map(|&a| Complex64::new(a, 0.0))
            .collect(),
    )
    .unwrap()
}

pub fn rank4_spectral() -> SpectralData {
    SpectralData::new(0, RANK4_B, RANK4_LAMBDA.to_vec(), RANK4_Z.to_vec()).unwrap()
}

pub fn rank4_rs() -> RationalSMatrix {
    RationalSMatrix::new(
        RANK4_B,
        RANK4_A
            .iter()
            .map(|&(re, im)| Complex64::new(re, im))
            .collect(),
    )
    .unwrap()
}

/// Random symmetric coupling matrix with entries in ±scale.
pub fn random_model(
    rng: &mut StdRng,
    rank: usize,
    ell: usize,
    b: f64,
    scale: f64,
) -> ModelPotential {
    let mut v = DMatrix::<f64>::zeros(rank, rank);
    for i in 0..rank {
        for j in 0..=i {
            let x = rng.gen_range(-scale..scale);
            v[(i, j)] = x;
            v[(j, i)] = x;
        }
    }
    ModelPotential::new(ell, b, v).unwrap()
}

pub fn seeded_rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x.abs();
        nodes[n - 1 - i] = x.abs();
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for m in 1..n {
        let mf = m as f64;
        let p2 = ((2.0 * mf + 1.0) * x * p1 - mf * p0) / (mf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// ∫_a^b f by composite Gauss–Legendre with fixed panel count.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + (b - a) * p as f64 / panels as f64;
        let hi = a + (b - a) * (p + 1) as f64 / panels as f64;
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            acc += w * f(mid + half * x);
        }
        total += acc * half;
    }
    total
}

/// S(k) for complex k, straight from the product formula — used by the
/// contour oracle, independent of any library evaluation path.
pub fn smatrix_product(rs: &RationalSMatrix, k: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let ib = i * rs.b();
    let mut s = ((k + ib) / (k - ib)).powu(rs.script_n() as u32);
    for &aj in rs.a() {
        s *= (k - i * aj) / (k + i * aj);
    }
    s
}

/// Q(t) = −i·Res_{k=ib}{S(k)e^{ikt}} by trapezoid quadrature over a circle
/// |k − ib| = ρ; spectrally accurate for a periodic integrand.
pub fn contour_residue_q(rs: &RationalSMatrix, t: f64, radius: f64, nodes: usize) -> f64 {
    let ib = Complex64::new(0.0, rs.b());
    let mut acc = Complex64::ZERO;
    for j in 0..nodes {
        let phi = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
        let e = Complex64::new(0.0, phi).exp();
        let k = ib + radius * e;
        acc += smatrix_product(rs, k) * (Complex64::new(0.0, 1.0) * k * t).exp() * e;
    }
    let q = -Complex64::new(0.0, 1.0) * radius * acc / nodes as f64;
    assert!(
        q.im.abs() <= 1e-9 * q.re.abs().max(1e-12),
        "contour residue not real: {q}"
    );
    q.re
}

pub fn assert_rel(got: f64, want: f64, tol: f64, what: &str) {
    let denom = want.abs().max(1e-300);
    assert!(
        (got - want).abs() / denom <= tol,
        "{what}: got {got}, want {want} (rel {:.3e}, tol {tol:.1e})",
        (got - want).abs() / denom
    );
}

pub fn assert_rel_c(got: Complex64, want: Complex64, tol: f64, what: &str) {
    let denom = want.norm().max(1e-300);
    assert!(
        (got - want).norm() / denom <= tol,
        "{what}: got {got}, want {want} (rel {:.3e}, tol {tol:.1e})",
        (got - want).norm() / denom
    );
}
