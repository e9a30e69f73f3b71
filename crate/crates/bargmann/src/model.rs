//! The rank-N separable potential, its free Green's matrix, and the Fredholm
//! determinant by two independent routes: the direct determinant
//! det(I − G⁽⁰⁾⁽±⁾V), and the closed spectral form built from the
//! eigenvalues {λ_j} and last-row eigenvector elements {Z_{N,j}} of the
//! truncated Hamiltonian in the orthonormal Laguerre basis. The two routes
//! agreeing to ~1e−12 on matched inputs is the central internal consistency
//! check of the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::specfun::{
    cosine_like, hyp2f1_terminating, jmatrix_element, sine_like, BasisSpec, Branch,
};
use crate::{Error, Result};

/// Unit conversion between fm⁻² (wave-number squared) and MeV.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// ħ²/2μ in MeV·fm².
    pub hbar2_over_2mu: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            hbar2_over_2mu: 41.47,
        }
    }
}

impl PhysicalConstants {
    pub fn new(hbar2_over_2mu: f64) -> Self {
        PhysicalConstants { hbar2_over_2mu }
    }

    /// Value calibrated against the rank-1 np ¹S₀ golden data: inverting
    /// a₁ = b + √(2b|V₀₀|) with a₁ = 2.276012669 fm⁻¹, b = 1.158023 fm⁻¹,
    /// Λ₀ = −76.4294 MeV·fm⁻¹. A test re-derives this number.
    pub fn calibrated() -> Self {
        PhysicalConstants {
            hbar2_over_2mu: 41.472_246_923_150_79,
        }
    }
}

/// Rank-N separable potential in the partial wave ℓ: coupling matrix
/// V_{n,n'} (fm⁻¹, kinetic prefactor already absorbed) over the bi-orthogonal
/// Laguerre form factors with scale b.
#[derive(Debug, Clone)]
pub struct ModelPotential {
    ell: usize,
    b: f64,
    coupling: DMatrix<f64>,
}

impl ModelPotential {
    /// Symmetry of the coupling matrix is required to 1e−12 relative.
    pub fn new(ell: usize, b: f64, coupling: DMatrix<f64>) -> Result<Self> {
        if b <= 0.0 {
            return Err(Error::NonPositiveScale(b));
        }
        if coupling.nrows() == 0 || !coupling.is_square() {
            return Err(Error::EmptyPotential);
        }
        let scale = coupling
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(1e-300);
        for i in 0..coupling.nrows() {
            for j in 0..i {
                let delta = (coupling[(i, j)] - coupling[(j, i)]).abs();
                if delta > 1e-12 * scale {
                    return Err(Error::NonSymmetricCoupling { i, j, delta });
                }
            }
        }
        Ok(ModelPotential { ell, b, coupling })
    }

    /// Rank-1 s-wave potential equivalent to the momentum-space separable
    /// form Λ₀/((k²+b²)(k'²+b²)): V₀₀ = Λ₀·π/(8b²) / (ħ²/2μ).
    pub fn from_yamaguchi(lambda0: f64, b: f64, consts: &PhysicalConstants) -> Result<Self> {
        if b <= 0.0 {
            return Err(Error::NonPositiveScale(b));
        }
        let v00 = lambda0 * std::f64::consts::PI / (8.0 * b * b) / consts.hbar2_over_2mu;
        ModelPotential::new(0, b, DMatrix::from_element(1, 1, v00))
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn rank(&self) -> usize {
        self.coupling.nrows()
    }

    pub fn coupling(&self) -> &DMatrix<f64> {
        &self.coupling
    }

    /// Degree 𝒩 = 2(N+ℓ) of the rational numerator of the determinant.
    pub fn script_n(&self) -> usize {
        2 * (self.rank() + self.ell)
    }

    /// Free Green's matrix [G⁽⁰⁾⁽±⁾]_{n,n'} = −S_{n<}(k)·C_{n>}⁽±⁾(k)/k;
    /// symmetric, and the − branch is the elementwise conjugate of + for
    /// real k.
    pub fn green_matrix(&self, k: f64, branch: Branch) -> Result<DMatrix<Complex64>> {
        if k <= 0.0 {
            return Err(Error::NonPositiveWaveNumber(k));
        }
        let n = self.rank();
        let s: Vec<f64> = (0..n).map(|m| sine_like(m, self.ell, k, self.b)).collect();
        let c: Vec<Complex64> = (0..n)
            .map(|m| cosine_like(m, self.ell, k, self.b, branch))
            .collect();
        Ok(DMatrix::from_fn(n, n, |i, j| {
            let (lo, hi) = (i.min(j), i.max(j));
            -s[lo] * c[hi] / k
        }))
    }

    /// Fredholm determinant 𝒟⁽±⁾(k) = det(I − G⁽⁰⁾⁽±⁾V) by complex LU.
    pub fn fredholm_det(&self, k: f64, branch: Branch) -> Result<Complex64> {
        let g = self.green_matrix(k, branch)?;
        let v = self.coupling.map(|x| Complex64::new(x, 0.0));
        let n = self.rank();
        let m = DMatrix::<Complex64>::identity(n, n) - g * v;
        Ok(m.lu().determinant())
    }

    /// Diagonalize the truncated Hamiltonian h₀ + V in the orthonormal basis
    /// and keep its eigenvalues and last-row eigenvector elements — the data
    /// that determine the determinant in closed form.
    pub fn spectral_data(&self) -> Result<SpectralData> {
        let h = self.hamiltonian_psi_basis();
        let eig = nalgebra::SymmetricEigen::new(h);
        let n = self.rank();
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|j| (eig.eigenvalues[j], eig.eigenvectors[(n - 1, j)]))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        SpectralData::new(
            self.ell,
            self.b,
            pairs.iter().map(|p| p.0).collect(),
            pairs.iter().map(|p| p.1).collect(),
        )
    }

    /// Truncated Hamiltonian matrix in the orthonormal basis ψ_n. Both the
    /// kinetic part and the potential sandwich reduce to cumulative sums of
    /// the Laguerre-basis matrices because ψ_n = d_n Σ_{m≤n} φ_m.
    pub fn hamiltonian_psi_basis(&self) -> DMatrix<f64> {
        let n = self.rank();
        let j0 = free_hamiltonian_laguerre(self.ell, self.b, n);
        let d: Vec<f64> = (0..n)
            .map(|m| BasisSpec::new(self.ell, self.b, m).psi_norm())
            .collect();
        let cum = |m: &DMatrix<f64>| -> DMatrix<f64> {
            // prefix sums in both indices
            let mut out = m.clone();
            for i in 0..n {
                for j in 1..n {
                    out[(i, j)] += out[(i, j - 1)];
                }
            }
            for j in 0..n {
                for i in 1..n {
                    out[(i, j)] += out[(i - 1, j)];
                }
            }
            out
        };
        let cj = cum(&j0);
        let cv = cum(&self.coupling);
        DMatrix::from_fn(n, n, |i, j| d[i] * d[j] * (cj[(i, j)] + cv[(i, j)]))
    }

    /// Rebuild a coupling matrix from spectral data and a full orthogonal
    /// eigenvector matrix whose last row matches the stored Z_{N,j}. Inverse
    /// of [`ModelPotential::spectral_data`]; the eigenvector completion is
    /// not unique, so the caller supplies it.
    pub fn from_spectral_with_z(sd: &SpectralData, z: &DMatrix<f64>) -> Result<Self> {
        let n = sd.rank();
        if z.nrows() != n || z.ncols() != n {
            return Err(Error::Schema(format!(
                "eigenvector matrix must be {n}x{n}, got {}x{}",
                z.nrows(),
                z.ncols()
            )));
        }
        let ortho = (z.transpose() * z - DMatrix::<f64>::identity(n, n)).norm();
        if ortho > 1e-8 {
            return Err(Error::Schema(format!(
                "eigenvector matrix not orthogonal: residual {ortho:.3e}"
            )));
        }
        for j in 0..n {
            if (z[(n - 1, j)] - sd.z_last_row()[j]).abs() > 1e-8 {
                return Err(Error::Schema(format!(
                    "last row of eigenvector matrix disagrees with Z_N at column {j}"
                )));
            }
        }
        let lam = DMatrix::from_diagonal(&DVector::from_row_slice(sd.lambda()));
        let h = z * lam * z.transpose();
        let d: Vec<f64> = (0..n)
            .map(|m| BasisSpec::new(sd.ell(), sd.b(), m).psi_norm())
            .collect();
        let j0 = free_hamiltonian_laguerre(sd.ell(), sd.b(), n);
        // undo the sandwich: cumulative(V) = h/(d d) − cumulative(J0)
        let mut cum_v = DMatrix::from_fn(n, n, |i, j| h[(i, j)] / (d[i] * d[j]));
        let mut cj = j0.clone();
        for i in 0..n {
            for j in 1..n {
                cj[(i, j)] += cj[(i, j - 1)];
            }
        }
        for j in 0..n {
            for i in 1..n {
                cj[(i, j)] += cj[(i - 1, j)];
            }
        }
        cum_v -= cj;
        // second difference recovers V from its prefix sums
        let at = |m: &DMatrix<f64>, i: isize, j: isize| -> f64 {
            if i < 0 || j < 0 {
                0.0
            } else {
                m[(i as usize, j as usize)]
            }
        };
        let v = DMatrix::from_fn(n, n, |i, j| {
            let (i, j) = (i as isize, j as isize);
            at(&cum_v, i, j) - at(&cum_v, i - 1, j) - at(&cum_v, i, j - 1)
                + at(&cum_v, i - 1, j - 1)
        });
        // symmetrize away roundoff before the constructor checks
        let v = (&v + v.transpose()) * 0.5;
        ModelPotential::new(sd.ell(), sd.b(), v)
    }
}

/// Matrix of the free Hamiltonian in the (non-orthogonal) Laguerre basis:
/// the J-matrix at k = 0.
fn free_hamiltonian_laguerre(ell: usize, b: f64, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| jmatrix_element(i, j, ell, 0.0, b))
}

/// Eigenvalues {λ_j} (fm⁻²) and last-row eigenvector elements {Z_{N,j}} of
/// the truncated Hamiltonian — the inversion output consumed by the
/// closed-form determinant.
#[derive(Debug, Clone)]
pub struct SpectralData {
    ell: usize,
    b: f64,
    lambda: Vec<f64>,
    z_last_row: Vec<f64>,
}

impl Serialize for SpectralData {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("SpectralData", 5)?;
        s.serialize_field("ell", &self.ell)?;
        s.serialize_field("b", &self.b)?;
        s.serialize_field("N", &self.rank())?;
        s.serialize_field("lambda", &self.lambda)?;
        s.serialize_field("Z_last_row", &self.z_last_row)?;
        s.end()
    }
}

impl SpectralData {
    /// Sorts (λ, Z) jointly; requires strictly increasing eigenvalues and
    /// Σ Z² = 1 within 1e−6.
    pub fn new(ell: usize, b: f64, lambda: Vec<f64>, z_last_row: Vec<f64>) -> Result<Self> {
        if b <= 0.0 {
            return Err(Error::NonPositiveScale(b));
        }
        if lambda.is_empty() || lambda.len() != z_last_row.len() {
            return Err(Error::Schema(
                "lambda and Z_last_row must be non-empty and of equal length".into(),
            ));
        }
        let mut pairs: Vec<(f64, f64)> = lambda.into_iter().zip(z_last_row).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for i in 1..pairs.len() {
            if pairs[i].0 <= pairs[i - 1].0 {
                return Err(Error::DegenerateEigenvalues(i));
            }
        }
        let norm: f64 = pairs.iter().map(|p| p.1 * p.1).sum();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::UnnormalizedWeights(norm));
        }
        Ok(SpectralData {
            ell,
            b,
            lambda: pairs.iter().map(|p| p.0).collect(),
            z_last_row: pairs.iter().map(|p| p.1).collect(),
        })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    pub fn script_n(&self) -> usize {
        2 * (self.rank() + self.ell)
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn z_last_row(&self) -> &[f64] {
        &self.z_last_row
    }

    /// d²_{N−1} of the orthonormal basis, the residue scale of the P-matrix.
    pub fn d_last_sq(&self) -> f64 {
        BasisSpec::new(self.ell, self.b, self.rank() - 1)
            .psi_norm()
            .powi(2)
    }

    /// Closed spectral form of 𝒟⁽⁺⁾(k), valid for complex k ≠ −ib:
    ///
    /// 𝒟⁺ = ℓ!(N+2ℓ+1)!/((2ℓ+1)!(N+ℓ+1)!) · (k+ib)^{−2N} ·
    ///   { (N+ℓ+1)·₂F₁(−ℓ,N;N+ℓ+1;ζ²)·∏(k²−λ_j)
    ///     − N(k−ib)²·₂F₁(−ℓ,N+1;N+ℓ+2;ζ²)·Σ_j Z²_{N,j} ∏_{i≠j}(k²−λ_i) },
    /// ζ = (k−ib)/(k+ib).
    pub fn fredholm_det_spectral(&self, k: Complex64) -> Result<Complex64> {
        let ib = Complex64::new(0.0, self.b);
        if (k + ib).norm() == 0.0 {
            return Err(Error::DeterminantPole);
        }
        let n = self.rank();
        let ell = self.ell;
        let nf = n as f64;
        // ℓ!(N+2ℓ+1)!/((2ℓ+1)!(N+ℓ+1)!)
        let mut pref: f64 = (1..=ell).map(|j| j as f64).product();
        for j in (n + ell + 2)..=(n + 2 * ell + 1) {
            pref *= j as f64;
        }
        for j in 2..=(2 * ell + 1) {
            pref /= j as f64;
        }
        let zeta2 = ((k - ib) / (k + ib)).powu(2);
        let f1 = hyp2f1_terminating(-(ell as i32), nf, nf + ell as f64 + 1.0, zeta2);
        let f2 = hyp2f1_terminating(-(ell as i32), nf + 1.0, nf + ell as f64 + 2.0, zeta2);
        let k2 = k * k;
        let prod_all: Complex64 = self.lambda.iter().map(|&l| k2 - l).product();
        let mut weighted = Complex64::ZERO;
        for j in 0..n {
            let mut p = Complex64::new(self.z_last_row[j] * self.z_last_row[j], 0.0);
            for (i, &li) in self.lambda.iter().enumerate() {
                if i != j {
                    p *= k2 - li;
                }
            }
            weighted += p;
        }
        let braced =
            (nf + ell as f64 + 1.0) * f1 * prod_all - nf * (k - ib).powu(2) * f2 * weighted;
        Ok(pref * braced / (k + ib).powu(2 * n as u32))
    }

    /// 𝒫_N(k²) = d²_{N−1} Σ_j Z²_{N,j}/(k² − λ_j). Poles at k² = λ_j are
    /// reported as a distinct error.
    pub fn pmatrix(&self, k2: f64) -> Result<f64> {
        for (j, &l) in self.lambda.iter().enumerate() {
            if (k2 - l).abs() <= 1e-12 * l.abs().max(1.0) {
                return Err(Error::PMatrixPole {
                    index: j,
                    k2,
                    lambda: l,
                });
            }
        }
        let d2 = self.d_last_sq();
        Ok(d2
            * self
                .lambda
                .iter()
                .zip(&self.z_last_row)
                .map(|(&l, &z)| z * z / (k2 - l))
                .sum::<f64>())
    }

    /// S-matrix of the truncated problem:
    /// S(k) = [C⁽⁻⁾_{N−1} − 𝒫_N J_{N−1,N} C⁽⁻⁾_N] /
    ///        [C⁽⁺⁾_{N−1} − 𝒫_N J_{N−1,N} C⁽⁺⁾_N]; unimodular for real k.
    pub fn smatrix_jmatrix(&self, k: f64) -> Result<Complex64> {
        if k <= 0.0 {
            return Err(Error::NonPositiveWaveNumber(k));
        }
        let n = self.rank();
        let pj = self.pmatrix(k * k)? * jmatrix_element(n - 1, n, self.ell, k, self.b);
        let num = cosine_like(n - 1, self.ell, k, self.b, Branch::Minus)
            - pj * cosine_like(n, self.ell, k, self.b, Branch::Minus);
        let den = cosine_like(n - 1, self.ell, k, self.b, Branch::Plus)
            - pj * cosine_like(n, self.ell, k, self.b, Branch::Plus);
        if den.norm() == 0.0 {
            return Err(Error::VanishingDenominator(k));
        }
        Ok(num / den)
    }
}

impl<'de> Deserialize<'de> for SpectralData {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            ell: usize,
            b: f64,
            #[serde(rename = "N")]
            rank: usize,
            lambda: Vec<f64>,
            #[serde(rename = "Z_last_row")]
            z_last_row: Vec<f64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.lambda.len() != raw.rank || raw.z_last_row.len() != raw.rank {
            return Err(serde::de::Error::custom(format!(
                "N = {} disagrees with lambda ({}) / Z_last_row ({}) lengths",
                raw.rank,
                raw.lambda.len(),
                raw.z_last_row.len()
            )));
        }
        SpectralData::new(raw.ell, raw.b, raw.lambda, raw.z_last_row)
            .map_err(serde::de::Error::custom)
    }
}
