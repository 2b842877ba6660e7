//! Integer-lattice primitives: quadratic intersection forms, convex
//! norm bodies, and enumeration of lattice points in dilated bodies and
//! bounded shells.
//!
//! Boundary conventions, fixed once here and relied on everywhere:
//! points with `|k|_Q = t` or `Q[N] = L` are **included**, `Q[N] = 0`
//! is **excluded**. Form evaluation is exact integer arithmetic and
//! overflow is an error, never a wrap.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{cholesky, cholesky_solve, symmetric_eigen};
use crate::{Error, Result};

/// Default ceiling on enumerated point counts.
pub const DEFAULT_ENUMERATION_CAP: u64 = 50_000_000;

/// An integer symmetric quadratic form on `Z^{2n}`.
///
/// The Hodge-Riemann pairing takes odd values on lattice vectors (the
/// rigid form is `a1*b2 - a2*b1`), so its symmetric Gram matrix has
/// half-integer off-diagonal entries. To keep everything exact we store
/// the *doubled* Gram matrix `A` (integer, even diagonal) and evaluate
/// `Q[v] = (v^T A v) / 2`, which is always an exact integer division.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionForm {
    dim: usize,
    doubled: Vec<i64>,
    signature: (usize, usize),
}

impl IntersectionForm {
    /// Build a form from its doubled Gram matrix (row-major).
    ///
    /// Rejects non-square data, asymmetry, and odd diagonal entries.
    pub fn from_doubled_gram(dim: usize, doubled: Vec<i64>) -> Result<Self> {
        if doubled.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: doubled.len(),
            });
        }
        for i in 0..dim {
            if doubled[i * dim + i] % 2 != 0 {
                return Err(Error::InvalidArgument {
                    context: "doubled Gram matrix must have even diagonal",
                });
            }
            for j in 0..i {
                if doubled[i * dim + j] != doubled[j * dim + i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        let signature = signature_of(dim, &doubled);
        Ok(Self {
            dim,
            doubled,
            signature,
        })
    }

    /// The rigid-model form `Q[(a1, a2, b1, b2)] = a1*b2 - a2*b1` on `Z^4`.
    pub fn rigid() -> Self {
        let mut doubled = vec![0i64; 16];
        doubled[3] = 1; // (a1, b2)
        doubled[12] = 1;
        doubled[6] = -1; // (a2, b1)
        doubled[9] = -1;
        Self::from_doubled_gram(4, doubled).expect("rigid form is well formed")
    }

    /// Ambient dimension `2n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Signature `(p, q)`: counts of positive and negative eigenvalues.
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    /// Doubled Gram matrix, row-major.
    pub fn doubled_gram(&self) -> &[i64] {
        &self.doubled
    }

    /// Evaluate `Q[v]` exactly.
    pub fn evaluate(&self, v: &[i64]) -> Result<i64> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        let mut acc: i128 = 0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let term = self.doubled[i * self.dim + j] as i128 * v[i] as i128 * v[j] as i128;
                acc = acc.checked_add(term).ok_or(Error::Overflow)?;
            }
        }
        debug_assert_eq!(acc % 2, 0);
        let q = acc / 2;
        i64::try_from(q).map_err(|_| Error::Overflow)
    }
}

fn signature_of(dim: usize, doubled: &[i64]) -> (usize, usize) {
    let a: Vec<f64> = doubled.iter().map(|&x| x as f64 * 0.5).collect();
    let (values, _) = symmetric_eigen(dim, &a);
    let scale = values.iter().fold(
        1.0_f64,
        |m, &v| if libm::fabs(v) > m { libm::fabs(v) } else { m },
    );
    let tol = 1e-9 * scale;
    let pos = values.iter().filter(|&&v| v > tol).count();
    let neg = values.iter().filter(|&&v| v < -tol).count();
    (pos, neg)
}

/// An integer flux vector together with its cached form value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerFluxVector {
    coords: Vec<i64>,
    form_value: i64,
}

impl IntegerFluxVector {
    /// Evaluate `form` on `coords` and cache the result.
    pub fn new(form: &IntersectionForm, coords: Vec<i64>) -> Result<Self> {
        let form_value = form.evaluate(&coords)?;
        Ok(Self { coords, form_value })
    }

    /// Flux quanta.
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// Cached `Q[N]`.
    pub fn form_value(&self) -> i64 {
        self.form_value
    }
}

/// A smooth convex body `Q = {x : |x|_Q < 1}` cut out by a positive
/// definite quadratic norm `|x|_Q^2 = x^T M x`.
#[derive(Debug, Clone)]
pub struct NormBody {
    dim: usize,
    gram: Vec<f64>,
    /// Lower Cholesky factor of the gram matrix.
    chol: Vec<f64>,
    /// Upper-triangular factor of the index-reversed gram matrix; the
    /// enumerator peels its last level first, which makes coordinate 0
    /// the outermost loop and the output lexicographic.
    rev_upper: Vec<f64>,
}

impl NormBody {
    /// Build a body from a positive definite gram matrix (row-major).
    pub fn new(dim: usize, gram: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument {
                context: "norm body dimension must be positive",
            });
        }
        if gram.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: gram.len(),
            });
        }
        for i in 0..dim {
            for j in 0..i {
                if gram[i * dim + j] != gram[j * dim + i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        let chol = cholesky(dim, &gram)?;
        let mut rev = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                rev[i * dim + j] = gram[(dim - 1 - i) * dim + (dim - 1 - j)];
            }
        }
        let rev_lower = cholesky(dim, &rev)?;
        let mut rev_upper = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..=i {
                rev_upper[j * dim + i] = rev_lower[i * dim + j];
            }
        }
        Ok(Self {
            dim,
            gram,
            chol,
            rev_upper,
        })
    }

    /// The Euclidean unit ball in `n` dimensions.
    pub fn euclidean(dim: usize) -> Self {
        let mut gram = vec![0.0; dim * dim];
        for i in 0..dim {
            gram[i * dim + i] = 1.0;
        }
        Self::new(dim, gram).expect("identity gram is positive definite")
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Gram matrix, row-major.
    pub fn gram(&self) -> &[f64] {
        &self.gram
    }

    /// Squared norm `x^T M x`.
    pub fn norm_sq(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        let mut acc = 0.0;
        for (i, xi) in x.iter().enumerate() {
            let row: f64 = self.gram[i * self.dim..(i + 1) * self.dim]
                .iter()
                .zip(x.iter())
                .map(|(g, xj)| g * xj)
                .sum();
            acc += xi * row;
        }
        acc
    }

    /// Norm `|x|_Q` (homogeneous of degree one).
    pub fn norm(&self, x: &[f64]) -> f64 {
        libm::sqrt(self.norm_sq(x))
    }

    /// Squared norm of an integer vector.
    pub fn norm_sq_int(&self, x: &[i64]) -> f64 {
        let mut acc = 0.0;
        for (i, &xi) in x.iter().enumerate() {
            let row: f64 = self.gram[i * self.dim..(i + 1) * self.dim]
                .iter()
                .zip(x.iter())
                .map(|(g, &xj)| g * xj as f64)
                .sum();
            acc += xi as f64 * row;
        }
        acc
    }

    /// Volume of the unit body, `omega_n / sqrt(det M)`.
    pub fn volume(&self) -> f64 {
        let mut sqrt_det = 1.0;
        for i in 0..self.dim {
            sqrt_det *= self.chol[i * self.dim + i];
        }
        unit_ball_volume(self.dim) / sqrt_det
    }

    /// Range of the first coordinate over the dilate `tQ`.
    ///
    /// `x0^2 <= t^2 (M^{-1})_{00}` with a little slack so boundary
    /// points survive until the exact membership check.
    pub fn first_coordinate_range(&self, t: f64) -> (i64, i64) {
        let mut e0 = vec![0.0; self.dim];
        e0[0] = 1.0;
        let inv0 = cholesky_solve(self.dim, &self.chol, &e0)[0];
        let bound = t * libm::sqrt(inv0.max(0.0)) + 1e-9;
        let b = libm::floor(bound) as i64;
        (-b, b)
    }
}

/// Volume of the Euclidean unit ball in `n` dimensions.
pub fn unit_ball_volume(n: usize) -> f64 {
    // omega_n = pi^{n/2} / Gamma(n/2 + 1), built by the two-step recurrence
    let mut v = 1.0; // n = 0
    let mut prev = 2.0; // n = 1
    if n == 0 {
        return v;
    }
    if n == 1 {
        return prev;
    }
    for k in 2..=n {
        let next = 2.0 * core::f64::consts::PI / k as f64 * v;
        v = prev;
        prev = next;
    }
    prev
}

/// Lattice point of a norm-body dilate, with its exact squared norm.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    /// Integer coordinates.
    pub coords: Vec<i64>,
    /// `|k|_Q^2` as evaluated by the body.
    pub norm_sq: f64,
}

/// Visit every nonzero `k` in `Z^n` with `|k|_Q <= t`, in ascending
/// lexicographic order, restricted to `x0 in [x0_lo, x0_hi]`.
///
/// The visitor may return an error to abort (used for cap enforcement).
pub fn visit_ball_slab<F>(
    body: &NormBody,
    t: f64,
    x0_lo: i64,
    x0_hi: i64,
    visitor: &mut F,
) -> Result<()>
where
    F: FnMut(&[i64], f64) -> Result<()>,
{
    if t <= 0.0 {
        return Err(Error::InvalidArgument {
            context: "dilation parameter t must be positive",
        });
    }
    let n = body.dim;
    let t_sq = t * t;
    // generous pruning slack; membership is re-decided exactly below
    let slack = 1e-7 * t_sq + 1e-9;
    let mut y = vec![0i64; n];
    let mut x = vec![0i64; n];
    // recursion over levels i = n-1 .. 0 on reversed coordinates
    // y[i] = x[n-1-i]
    struct Ctx<'a, F> {
        n: usize,
        r: &'a [f64],
        t_sq: f64,
        slack: f64,
        body: &'a NormBody,
        visitor: &'a mut F,
    }
    fn level<F>(
        ctx: &mut Ctx<'_, F>,
        i: usize,
        budget: f64,
        y: &mut [i64],
        x: &mut [i64],
        clamp: Option<(i64, i64)>,
    ) -> Result<()>
    where
        F: FnMut(&[i64], f64) -> Result<()>,
    {
        let n = ctx.n;
        let rii = ctx.r[i * n + i];
        let s: f64 = ctx.r[i * n + i + 1..(i + 1) * n]
            .iter()
            .zip(y[i + 1..n].iter())
            .map(|(r, &yj)| r * yj as f64)
            .sum();
        let center = -s / rii;
        let halfwidth = libm::sqrt(budget.max(0.0) + ctx.slack) / rii;
        let mut lo = libm::ceil(center - halfwidth) as i64;
        let mut hi = libm::floor(center + halfwidth) as i64;
        if let Some((clo, chi)) = clamp {
            lo = lo.max(clo);
            hi = hi.min(chi);
        }
        for yi in lo..=hi {
            let row = rii * yi as f64 + s;
            let rem = budget - row * row;
            if rem < -ctx.slack {
                continue;
            }
            y[i] = yi;
            x[n - 1 - i] = yi;
            if i == 0 {
                if x.iter().all(|&c| c == 0) {
                    continue;
                }
                let q = ctx.body.norm_sq_int(x);
                if q <= ctx.t_sq {
                    (ctx.visitor)(x, q)?;
                }
            } else {
                level(ctx, i - 1, rem, y, x, None)?;
            }
        }
        Ok(())
    }
    let mut ctx = Ctx {
        n,
        r: &body.rev_upper,
        t_sq,
        slack,
        body,
        visitor,
    };
    level(&mut ctx, n - 1, t_sq, &mut y, &mut x, Some((x0_lo, x0_hi)))
}

/// Visit every nonzero lattice point of `tQ` in lexicographic order.
pub fn visit_ball<F>(body: &NormBody, t: f64, cap: u64, visitor: &mut F) -> Result<()>
where
    F: FnMut(&[i64], f64) -> Result<()>,
{
    let projected = body.volume() * libm::pow(t, body.dim as f64);
    if projected > cap as f64 * 1.5 + 1024.0 {
        return Err(Error::CapExceeded {
            cap,
            projected: projected as u64,
        });
    }
    let (lo, hi) = body.first_coordinate_range(t);
    let mut seen: u64 = 0;
    visit_ball_slab(body, t, lo, hi, &mut |x, q| {
        seen += 1;
        if seen > cap {
            return Err(Error::CapExceeded {
                cap,
                projected: seen,
            });
        }
        visitor(x, q)
    })
}

/// Collect the nonzero lattice points of `tQ` (lexicographic order).
pub fn enumerate_ball(body: &NormBody, t: f64, cap: u64) -> Result<Vec<BallPoint>> {
    let mut out = Vec::new();
    visit_ball(body, t, cap, &mut |x, q| {
        out.push(BallPoint {
            coords: x.to_vec(),
            norm_sq: q,
        });
        Ok(())
    })?;
    Ok(out)
}

/// Enumerate nonzero `N` with `0 < Q[N] <= l` and `max-norm(N) <= box_bound`.
///
/// Indefinite shells contain infinitely many lattice points, so the box
/// cutoff is part of the interface rather than hidden. The scan is a
/// dense sweep of the box in lexicographic order.
pub fn enumerate_shell_boxed(
    form: &IntersectionForm,
    l: i64,
    box_bound: f64,
    cap: u64,
) -> Result<Vec<IntegerFluxVector>> {
    if box_bound <= 0.0 {
        return Err(Error::InvalidArgument {
            context: "box bound must be positive",
        });
    }
    if l < 0 {
        return Err(Error::InvalidArgument {
            context: "shell level L must be non-negative",
        });
    }
    let b = libm::floor(box_bound) as i64;
    let dim = form.dim();
    let width = 2 * b + 1;
    let mut projected: u64 = 1;
    for _ in 0..dim {
        projected = projected.saturating_mul(width as u64);
    }
    if projected > cap {
        return Err(Error::CapExceeded { cap, projected });
    }
    let mut out = Vec::new();
    let mut v = vec![-b; dim];
    loop {
        if v.iter().any(|&c| c != 0) {
            let q = form.evaluate(&v)?;
            if q > 0 && q <= l {
                out.push(IntegerFluxVector {
                    coords: v.clone(),
                    form_value: q,
                });
            }
        }
        // odometer: last coordinate fastest keeps lexicographic order
        let mut idx = dim;
        loop {
            if idx == 0 {
                return Ok(out);
            }
            idx -= 1;
            if v[idx] < b {
                v[idx] += 1;
                for c in v[idx + 1..].iter_mut() {
                    *c = -b;
                }
                break;
            }
        }
    }
}
