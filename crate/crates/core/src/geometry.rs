//! Special-geometry kernels at a moduli point in normal coordinates.
//!
//! Everything here is evaluated in the normalized frame: coordinates at
//! the point are chosen so the moduli metric is the identity and the
//! Kahler prefactors are 1. In that frame the Yukawa tensor alone seeds
//! the whole local geometry: the Hessian-space basis matrices, the
//! Lambda (Gram/distortion) operator, the Weil-Petersson curvature and
//! Ricci form, and the Hodge-metric coefficients. Arbitrary-frame input
//! is rejected rather than silently converted.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{cholesky, cholesky_solve, complex_determinant, symmetric_eigen};
use crate::{Complex, Error, Result};

/// Fully symmetric complex 3-tensor of Yukawa couplings.
///
/// Entries are stored once per sorted index triple, so the symmetry is
/// structural rather than checked. `h21 = 0` (the rigid model) is a
/// valid degenerate case with no entries.
#[derive(Debug, Clone, PartialEq)]
pub struct YukawaTensor {
    h21: usize,
    entries: Vec<Complex>,
}

/// Rank of a sorted triple `(i <= j <= k)` in the combinatorial number
/// system (maps bijectively onto `0..C(h+2, 3)`).
fn triple_rank(i: usize, j: usize, k: usize) -> usize {
    let (a, b, c) = (i, j + 1, k + 2);
    c * (c - 1) * (c - 2) / 6 + b * (b - 1) / 2 + a
}

fn triple_count(h21: usize) -> usize {
    (h21 + 2) * (h21 + 1) * h21 / 6
}

impl YukawaTensor {
    /// The zero tensor on `h21` moduli.
    pub fn zero(h21: usize) -> Self {
        Self {
            h21,
            entries: vec![Complex::new(0.0, 0.0); triple_count(h21)],
        }
    }

    /// One-modulus tensor with `F_{111} = coupling`.
    pub fn one_modulus(coupling: Complex) -> Self {
        let mut t = Self::zero(1);
        t.entries[0] = coupling;
        t
    }

    /// Build from `(i, j, k, value)` triples with 0-based indices.
    ///
    /// Unlisted triples are zero. A triple listed twice (in any index
    /// order) is an error, as is an index outside `0..h21`.
    pub fn from_triples<I>(h21: usize, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize, Complex)>,
    {
        let mut t = Self::zero(h21);
        let mut seen = vec![false; triple_count(h21)];
        for (i, j, k, value) in triples {
            for &idx in &[i, j, k] {
                if idx >= h21 {
                    return Err(Error::IndexOutOfRange { index: idx, h21 });
                }
            }
            let mut s = [i, j, k];
            s.sort_unstable();
            let rank = triple_rank(s[0], s[1], s[2]);
            if seen[rank] {
                return Err(Error::DuplicateTriple { i, j, k });
            }
            seen[rank] = true;
            t.entries[rank] = value;
        }
        Ok(t)
    }

    /// Random tensor with independent standard complex Gaussian entries
    /// per canonical triple. Used by the statistical invariance suites.
    pub fn sample_standard<R: rand::Rng + ?Sized>(h21: usize, rng: &mut R) -> Self {
        use rand_distr::StandardNormal;
        let entries = (0..triple_count(h21))
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex::new(re, im)
            })
            .collect();
        Self { h21, entries }
    }

    /// Number of complex-structure moduli.
    pub fn h21(&self) -> usize {
        self.h21
    }

    /// Entry `F_{ijk}` (0-based indices, any order).
    pub fn entry(&self, i: usize, j: usize, k: usize) -> Complex {
        debug_assert!(i < self.h21 && j < self.h21 && k < self.h21);
        let mut s = [i, j, k];
        s.sort_unstable();
        self.entries[triple_rank(s[0], s[1], s[2])]
    }

    /// The symmetric matrix `F^k = (F_{kij})_{ij}`.
    pub fn coupling_matrix(&self, k: usize) -> Vec<Complex> {
        let h = self.h21;
        let mut m = vec![Complex::new(0.0, 0.0); h * h];
        for i in 0..h {
            for j in 0..h {
                m[i * h + j] = self.entry(k, i, j);
            }
        }
        m
    }
}

/// Basis of the Hessian space: `2 h21` complex symmetric `m x m`
/// matrices, `m = h21 + 1`, with the bordered structure fixed by the
/// Hessian map on an orthonormal flux basis.
#[derive(Debug, Clone, PartialEq)]
pub struct HessianBasis {
    m: usize,
    h21: usize,
    xis: Vec<Vec<Complex>>,
}

impl HessianBasis {
    /// Dimension `m = h21 + 1` of the Hessian matrices.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of moduli.
    pub fn h21(&self) -> usize {
        self.h21
    }

    /// The basis matrices (row-major, `m x m`), length `2 h21`.
    pub fn xis(&self) -> &[Vec<Complex>] {
        &self.xis
    }
}

/// Build the Hessian-space basis from a Yukawa tensor.
///
/// `xi^k` has an `e_k` border around the coupling matrix `F^k`;
/// `xi^{h21+k}` is the conjugate-twisted partner with an `i e_k` border
/// and `-i F^k` block. Twisted partners occupy slots `h21..2*h21`,
/// matching the `(a_1..a_h, b_1..b_h)` coefficient layout of
/// [`hessian_map`].
pub fn hessian_basis(tensor: &YukawaTensor) -> HessianBasis {
    let h = tensor.h21();
    let m = h + 1;
    let mut xis = Vec::with_capacity(2 * h);
    let mut twisted = Vec::with_capacity(h);
    for k in 0..h {
        let fk = tensor.coupling_matrix(k);
        let mut xi = vec![Complex::new(0.0, 0.0); m * m];
        let mut xi_twist = vec![Complex::new(0.0, 0.0); m * m];
        xi[k + 1] = Complex::new(1.0, 0.0);
        xi[(k + 1) * m] = Complex::new(1.0, 0.0);
        xi_twist[k + 1] = Complex::new(0.0, 1.0);
        xi_twist[(k + 1) * m] = Complex::new(0.0, 1.0);
        for i in 0..h {
            for j in 0..h {
                let f = fk[i * h + j];
                xi[(i + 1) * m + (j + 1)] = f;
                xi_twist[(i + 1) * m + (j + 1)] = Complex::new(0.0, -1.0) * f;
            }
        }
        xis.push(xi);
        twisted.push(xi_twist);
    }
    xis.append(&mut twisted);
    HessianBasis { m, h21: h, xis }
}

/// Real Hilbert-Schmidt pairing `Re Tr(A B^*)` of complex matrices.
pub fn hs_pairing_re(m: usize, a: &[Complex], b: &[Complex]) -> f64 {
    debug_assert_eq!(a.len(), m * m);
    debug_assert_eq!(b.len(), m * m);
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x.re * y.re + x.im * y.im;
    }
    acc
}

/// The Gram/distortion operator of the Hessian basis with its spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaOperator {
    dim: usize,
    lam: Vec<f64>,
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<f64>,
}

impl LambdaOperator {
    /// Matrix dimension `2 h21`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Gram matrix entries, row-major.
    pub fn matrix(&self) -> &[f64] {
        &self.lam
    }

    /// Eigenvalues sorted ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Orthonormal eigenvector for eigenvalue `k`.
    pub fn eigenvector(&self, k: usize) -> &[f64] {
        &self.eigenvectors[k * self.dim..(k + 1) * self.dim]
    }

    /// Smallest eigenvalue (`+inf` for the empty rigid case).
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::INFINITY)
    }
}

/// Gram matrix of the basis under the real Hilbert-Schmidt pairing.
///
/// The diagonal blocks are `2 I + Re Tr F^j F^{k*}`, so the spectrum
/// can never dip below 2; a smaller eigenvalue signals a malformed
/// basis and is a hard error.
pub fn lambda_matrix(basis: &HessianBasis) -> Result<LambdaOperator> {
    let dim = basis.xis.len();
    let m = basis.m;
    let mut lam = vec![0.0; dim * dim];
    for a in 0..dim {
        for b in a..dim {
            let v = hs_pairing_re(m, &basis.xis[a], &basis.xis[b]);
            lam[a * dim + b] = v;
            lam[b * dim + a] = v;
        }
    }
    let (eigenvalues, eigenvectors) = symmetric_eigen(dim, &lam);
    if let Some(&min) = eigenvalues.first() {
        if min < 2.0 - 1e-9 {
            return Err(Error::LambdaSpectrum {
                min_eigenvalue: min,
            });
        }
    }
    Ok(LambdaOperator {
        dim,
        lam,
        eigenvalues,
        eigenvectors,
    })
}

/// Weil-Petersson curvature data derived from a Yukawa tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureData {
    h21: usize,
    /// `R_{i jbar k lbar}`, indexed `[((i*h + j)*h + k)*h + l]`.
    riemann: Vec<Complex>,
    /// Ricci form coefficients, Hermitian `h21 x h21`.
    ricci: Vec<Complex>,
    /// Hodge-metric coefficients `2 delta + Tr F^j F^{k*}`.
    hodge_metric: Vec<Complex>,
}

impl CurvatureData {
    /// Number of moduli.
    pub fn h21(&self) -> usize {
        self.h21
    }

    /// Curvature component `R_{i jbar k lbar}`.
    pub fn riemann(&self, i: usize, j: usize, k: usize, l: usize) -> Complex {
        let h = self.h21;
        self.riemann[((i * h + j) * h + k) * h + l]
    }

    /// Ricci coefficient matrix, row-major.
    pub fn ricci(&self) -> &[Complex] {
        &self.ricci
    }

    /// Hodge-metric coefficient matrix, row-major.
    pub fn hodge_metric(&self) -> &[Complex] {
        &self.hodge_metric
    }
}

/// Curvature, Ricci, and Hodge metric in the normalized frame:
///
/// `R_{i jbar k lbar} = d_{ij} d_{kl} + d_{il} d_{kj} - sum_p F_{ikp} conj(F_{jlp})`,
/// `Ric = -(h21 + 1) I + Tr F^i F^{j*}`, `hodge = 2 I + Tr F^i F^{j*}`.
pub fn riemann_from_yukawa(tensor: &YukawaTensor) -> CurvatureData {
    let h = tensor.h21();
    let mut riemann = vec![Complex::new(0.0, 0.0); h * h * h * h];
    let mut gram = vec![Complex::new(0.0, 0.0); h * h];
    for i in 0..h {
        for j in 0..h {
            let mut t = Complex::new(0.0, 0.0);
            for k in 0..h {
                for p in 0..h {
                    t += tensor.entry(i, k, p) * tensor.entry(j, k, p).conj();
                }
            }
            gram[i * h + j] = t;
        }
    }
    for i in 0..h {
        for j in 0..h {
            for k in 0..h {
                for l in 0..h {
                    let mut v = Complex::new(0.0, 0.0);
                    if i == j && k == l {
                        v += 1.0;
                    }
                    if i == l && k == j {
                        v += 1.0;
                    }
                    for p in 0..h {
                        v -= tensor.entry(i, k, p) * tensor.entry(j, l, p).conj();
                    }
                    riemann[((i * h + j) * h + k) * h + l] = v;
                }
            }
        }
    }
    let mut ricci = gram.clone();
    let mut hodge_metric = gram;
    for i in 0..h {
        ricci[i * h + i] -= (h + 1) as f64;
        hodge_metric[i * h + i] += 2.0;
    }
    CurvatureData {
        h21: h,
        riemann,
        ricci,
        hodge_metric,
    }
}

/// Verify the Hodge-metric identity and return the residual.
///
/// Compares the complex matrix `Lambda' + i Lambda''` taken from the
/// Gram blocks of the Hessian basis against `(h21 + 3) I + Ric` from
/// the curvature path. The two sides are computed independently; a
/// residual above `1e-12` is an error carrying both matrices.
pub fn hodge_identity_check(tensor: &YukawaTensor) -> Result<f64> {
    let h = tensor.h21();
    let basis = hessian_basis(tensor);
    let lam = lambda_matrix(&basis)?;
    let curv = riemann_from_yukawa(tensor);
    let dim = lam.dim();
    let mut lambda_side = vec![Complex::new(0.0, 0.0); h * h];
    for j in 0..h {
        for k in 0..h {
            let re = lam.matrix()[j * dim + k];
            let im = lam.matrix()[(h + j) * dim + k];
            lambda_side[j * h + k] = Complex::new(re, im);
        }
    }
    let mut curvature_side = curv.ricci().to_vec();
    for j in 0..h {
        curvature_side[j * h + j] += (h + 3) as f64;
    }
    let mut residual = 0.0;
    for (a, b) in lambda_side.iter().zip(curvature_side.iter()) {
        let d = (a - b).norm();
        if d > residual {
            residual = d;
        }
    }
    if residual > 1e-12 {
        return Err(Error::HodgeMismatch {
            residual,
            lambda_side,
            curvature_side,
        });
    }
    Ok(residual)
}

/// Image of a real flux-coefficient vector under the Hessian map.
///
/// Coefficients are ordered `(a_1..a_h21, b_1..b_h21, a_0, b_0)`; the
/// result is `H = sum a_k xi^k + sum b_k xi^{h21+k}` together with
/// `x = a_0 + i b_0`.
pub fn hessian_map(basis: &HessianBasis, coeffs: &[f64]) -> Result<(Vec<Complex>, Complex)> {
    let h = basis.h21;
    let m = basis.m;
    if coeffs.len() != 2 * m {
        return Err(Error::DimensionMismatch {
            expected: 2 * m,
            got: coeffs.len(),
        });
    }
    let mut hmat = vec![Complex::new(0.0, 0.0); m * m];
    for (a, xi) in coeffs[..2 * h].iter().zip(basis.xis.iter()) {
        if *a == 0.0 {
            continue;
        }
        for (slot, value) in hmat.iter_mut().zip(xi.iter()) {
            *slot += *a * value;
        }
    }
    let x = Complex::new(coeffs[2 * h], coeffs[2 * h + 1]);
    Ok((hmat, x))
}

/// `det(H^* H - |x|^2 I)`, the complex-Hessian determinant.
///
/// The matrix is Hermitian positive semidefinite minus a real multiple
/// of the identity, so the determinant is real; the imaginary residue
/// of the LU evaluation is discarded.
pub fn hessian_determinant(m: usize, hmat: &[Complex], x: Complex) -> f64 {
    let mut prod = vec![Complex::new(0.0, 0.0); m * m];
    for i in 0..m {
        for j in 0..m {
            let mut acc = Complex::new(0.0, 0.0);
            for k in 0..m {
                acc += hmat[i * m + k].conj() * hmat[k * m + j];
            }
            prod[i * m + j] = acc;
        }
    }
    let shift = x.norm_sqr();
    for i in 0..m {
        prod[i * m + i] -= shift;
    }
    complex_determinant(m, &prod).re
}

/// The distortion quadratic form `((Lambda + I)^{-1} (H, x), (H, x))_R`
/// evaluated from the assembled matrix, without using the coefficients
/// that built it.
///
/// Expanding `H` back over the basis requires solving the Gram system,
/// which makes this an independent check of the defining identity
/// `Q[W] = ((Lambda + I)^{-1} H_Z W, H_Z W)_R`:
/// for coefficients `c` of an orthonormal flux basis the value must
/// come back as `sum c^2`.
pub fn distortion_form(
    basis: &HessianBasis,
    lam: &LambdaOperator,
    hmat: &[Complex],
    x: Complex,
) -> Result<f64> {
    let dim = lam.dim();
    if dim == 0 {
        return Ok(x.norm_sqr());
    }
    let mut rhs = vec![0.0; dim];
    for (slot, xi) in rhs.iter_mut().zip(basis.xis.iter()) {
        *slot = hs_pairing_re(basis.m, hmat, xi);
    }
    // rhs = Lambda c for the coefficient vector c of H; the form value
    // is |c|^2 + |x|^2
    let chol = cholesky(dim, lam.matrix())?;
    let c = cholesky_solve(dim, &chol, &rhs);
    let mut acc = x.norm_sqr();
    for ci in &c {
        acc += ci * ci;
    }
    Ok(acc)
}
