//! Radial-projection equidistribution experiments.
//!
//! For a convex norm body `Q` and a boundary weight `f`, the object of
//! study is the lattice sum `S_f(t) = sum f(k / |k|_Q)` over nonzero
//! integer points of the dilate `tQ`, extended homogeneously of degree
//! `alpha`. The continuum leading term is `t^{n+alpha} Int_Q f`, and the
//! remainder series measures the decay exponent: smooth weights decay
//! like `t^{n - 2n/(n+1)}`, while indicator weights cluster along the
//! equator and only reach `t^{n-1}`. Fitting is done both by least
//! squares and on the running-maximum envelope, since the remainder
//! oscillates and the theorem bounds only its envelope.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::kahan::KahanSum;
use crate::lattice::{unit_ball_volume, NormBody, DEFAULT_ENUMERATION_CAP};
use crate::{Error, Result};

/// Boxed boundary evaluation for custom weights.
pub type BoundaryFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A weight on the boundary of a norm body, extended homogeneously.
///
/// The extension is the canonical one: `F(x) = |x|_Q^degree * f(x/|x|_Q)`.
#[derive(Clone)]
pub struct WeightFunction {
    /// Homogeneity degree `alpha >= 0`.
    pub degree: f64,
    /// Whether the boundary function is smooth (drives which remainder
    /// exponent is expected, not how the sum is computed).
    pub smooth: bool,
    kind: WeightKind,
}

#[derive(Clone)]
enum WeightKind {
    Constant,
    /// `1 + cos(theta)` of the direction angle in the first two coordinates.
    OnePlusCos,
    /// Indicator of the closed upper hemisphere `x_axis >= 0`.
    Hemisphere {
        axis: usize,
    },
    Custom(BoundaryFn),
}

impl core::fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let name = match self.kind {
            WeightKind::Constant => "constant",
            WeightKind::OnePlusCos => "one-plus-cos",
            WeightKind::Hemisphere { .. } => "hemisphere",
            WeightKind::Custom(_) => "custom",
        };
        write!(f, "WeightFunction({name}, degree {})", self.degree)
    }
}

impl WeightFunction {
    /// The constant weight `f = 1` with homogeneity `degree`.
    pub fn constant(degree: f64) -> Self {
        Self {
            degree,
            smooth: true,
            kind: WeightKind::Constant,
        }
    }

    /// `f(theta) = 1 + cos(theta)` on the direction angle, degree `degree`.
    pub fn one_plus_cos(degree: f64) -> Self {
        Self {
            degree,
            smooth: true,
            kind: WeightKind::OnePlusCos,
        }
    }

    /// Indicator of the closed hemisphere `x_axis >= 0` (degree 0).
    pub fn hemisphere(axis: usize) -> Self {
        Self {
            degree: 0.0,
            smooth: false,
            kind: WeightKind::Hemisphere { axis },
        }
    }

    /// Arbitrary boundary evaluation.
    pub fn custom<F>(degree: f64, smooth: bool, eval: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            degree,
            smooth,
            kind: WeightKind::Custom(Arc::new(eval)),
        }
    }

    /// Evaluate the boundary function at a point of `dQ`.
    pub fn boundary_eval(&self, u: &[f64]) -> f64 {
        match &self.kind {
            WeightKind::Constant => 1.0,
            WeightKind::OnePlusCos => {
                let r = libm::sqrt(u[0] * u[0] + u[1] * u[1]);
                if r == 0.0 {
                    1.0
                } else {
                    1.0 + u[0] / r
                }
            }
            WeightKind::Hemisphere { axis } => {
                if u[*axis] >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            WeightKind::Custom(f) => f(u),
        }
    }

    /// The homogeneous extension `|x|_Q^degree * f(x/|x|_Q)`.
    pub fn extension(&self, body: &NormBody, x: &[f64]) -> f64 {
        let norm = body.norm(x);
        if norm == 0.0 {
            return 0.0;
        }
        let u: Vec<f64> = x.iter().map(|&c| c / norm).collect();
        libm::pow(norm, self.degree) * self.boundary_eval(&u)
    }
}

/// Knobs for lattice sums: enumeration cap and slab width.
#[derive(Debug, Clone, Copy)]
pub struct SumConfig {
    /// Maximum number of lattice points to visit.
    pub cap: u64,
    /// First-coordinate columns per slab. Partial sums are compensated
    /// per slab and combined in slab order, so the value changes the
    /// rounding pattern but fixes it across worker counts.
    pub slab_columns: usize,
}

impl Default for SumConfig {
    fn default() -> Self {
        Self {
            cap: DEFAULT_ENUMERATION_CAP,
            slab_columns: 8,
        }
    }
}

fn slab_ranges(lo: i64, hi: i64, columns: usize) -> Vec<(i64, i64)> {
    let step = columns.max(1) as i64;
    let mut out = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = (start + step - 1).min(hi);
        out.push((start, end));
        start = end + 1;
    }
    out
}

/// The radial projection sum `S_f(t)` over nonzero points of `tQ`.
pub fn radial_sum(f: &WeightFunction, body: &NormBody, t: f64, cfg: &SumConfig) -> Result<f64> {
    let projected = body.volume() * libm::pow(t, body.dim() as f64);
    if projected > cfg.cap as f64 * 1.5 + 1024.0 {
        return Err(Error::CapExceeded {
            cap: cfg.cap,
            projected: projected as u64,
        });
    }
    let (lo, hi) = body.first_coordinate_range(t);
    let slabs = slab_ranges(lo, hi, cfg.slab_columns);

    let run_slab = |&(s_lo, s_hi): &(i64, i64)| -> Result<f64> {
        let mut acc = KahanSum::new();
        let mut u = vec![0.0; body.dim()];
        crate::lattice::visit_ball_slab(body, t, s_lo, s_hi, &mut |x, q| {
            let norm = libm::sqrt(q);
            for (slot, &c) in u.iter_mut().zip(x.iter()) {
                *slot = c as f64 / norm;
            }
            let term = libm::pow(norm, f.degree) * f.boundary_eval(&u);
            acc.add(term);
            Ok(())
        })?;
        Ok(acc.total())
    };

    #[cfg(feature = "parallel")]
    let partials: Vec<Result<f64>> = {
        use rayon::prelude::*;
        slabs.par_iter().map(run_slab).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let partials: Vec<Result<f64>> = slabs.iter().map(run_slab).collect();

    let mut total = KahanSum::new();
    for p in partials {
        total.add(p?);
    }
    Ok(total.total())
}

/// A leading-term value with its quadrature self-estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadingTerm {
    /// `t^{n+alpha} Int_Q f`.
    pub value: f64,
    /// Relative difference between the two finest quadrature levels.
    pub error_estimate: f64,
}

/// The continuum term `t^{n+alpha} Int_Q f dX` by angular quadrature.
///
/// The body integral reduces to a boundary-direction integral of
/// `f(s/|s|_Q) / |s|_Q^{n+alpha}`; a periodic trapezoid rule (n = 2) or
/// Gauss-Legendre x trapezoid product rule (n = 3) is evaluated at
/// `quad_points` and at double that, and the pair must agree to 1e-6
/// relative or the call fails carrying both estimates.
pub fn leading_term(
    f: &WeightFunction,
    body: &NormBody,
    t: f64,
    quad_points: usize,
) -> Result<LeadingTerm> {
    if t <= 0.0 {
        return Err(Error::InvalidArgument {
            context: "dilation parameter t must be positive",
        });
    }
    let n = body.dim();
    let coarse = body_integral(f, body, quad_points)?;
    let fine = body_integral(f, body, quad_points * 2)?;
    let scale = libm::fabs(fine).max(1e-300);
    let rel = libm::fabs(fine - coarse) / scale;
    let dilation = libm::pow(t, n as f64 + f.degree);
    if rel > 1e-6 {
        return Err(Error::QuadratureNotConverged {
            coarse: dilation * coarse,
            fine: dilation * fine,
        });
    }
    Ok(LeadingTerm {
        value: dilation * fine,
        error_estimate: rel,
    })
}

/// `Int_Q |x|_Q^alpha f(x/|x|_Q) dX` over the unit body.
fn body_integral(f: &WeightFunction, body: &NormBody, points: usize) -> Result<f64> {
    let n = body.dim();
    let alpha = f.degree;
    let points = points.max(8);
    match n {
        2 => {
            let mut acc = KahanSum::new();
            let mut s = [0.0f64; 2];
            for i in 0..points {
                let theta = 2.0 * core::f64::consts::PI * i as f64 / points as f64;
                s[0] = libm::cos(theta);
                s[1] = libm::sin(theta);
                acc.add(direction_density(f, body, &s, alpha));
            }
            Ok(acc.total() * 2.0 * core::f64::consts::PI / points as f64 / (n as f64 + alpha))
        }
        3 => {
            let (nodes, weights) = gauss_legendre(points);
            let n_phi = 2 * points;
            let mut acc = KahanSum::new();
            let mut s = [0.0f64; 3];
            for (u, w) in nodes.iter().zip(weights.iter()) {
                let rho = libm::sqrt((1.0 - u * u).max(0.0));
                let mut ring = KahanSum::new();
                for j in 0..n_phi {
                    let phi = 2.0 * core::f64::consts::PI * j as f64 / n_phi as f64;
                    s[0] = rho * libm::cos(phi);
                    s[1] = rho * libm::sin(phi);
                    s[2] = *u;
                    ring.add(direction_density(f, body, &s, alpha));
                }
                acc.add(w * ring.total() * 2.0 * core::f64::consts::PI / n_phi as f64);
            }
            Ok(acc.total() / (n as f64 + alpha))
        }
        _ => Err(Error::InvalidArgument {
            context: "leading-term quadrature implemented for n = 2 and n = 3",
        }),
    }
}

/// Integrand of the direction integral: `f(s/|s|_Q) R(s)^{n+alpha}`,
/// `R(s) = 1/|s|_Q` the radial extent of the body along `s`.
fn direction_density(f: &WeightFunction, body: &NormBody, s: &[f64], alpha: f64) -> f64 {
    let norm = body.norm(s);
    let u: Vec<f64> = s.iter().map(|&c| c / norm).collect();
    f.boundary_eval(&u) * libm::pow(norm, -(body.dim() as f64 + alpha))
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and P_n'(x) by upward recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = pk;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if libm::fabs(dx) < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// A remainder experiment: sums, leading terms, and their gaps per `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSeries {
    /// Strictly increasing dilation parameters.
    pub t_values: Vec<f64>,
    /// `S_f(t)` per `t`.
    pub sums: Vec<f64>,
    /// `t^{n+alpha} Int_Q f` per `t`.
    pub leading: Vec<f64>,
    /// `|sums - leading|` per `t`.
    pub remainders: Vec<f64>,
}

impl ExperimentSeries {
    fn from_rows(rows: Vec<(f64, f64, f64)>) -> Self {
        let mut s = Self {
            t_values: Vec::with_capacity(rows.len()),
            sums: Vec::with_capacity(rows.len()),
            leading: Vec::with_capacity(rows.len()),
            remainders: Vec::with_capacity(rows.len()),
        };
        for (t, sum, lead) in rows {
            s.t_values.push(t);
            s.sums.push(sum);
            s.leading.push(lead);
            s.remainders.push(libm::fabs(sum - lead));
        }
        s
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.t_values.len()
    }

    /// True when the series has no rows.
    pub fn is_empty(&self) -> bool {
        self.t_values.is_empty()
    }
}

fn validate_t_values(ts: &[f64]) -> Result<()> {
    if ts.len() < 8 {
        return Err(Error::TooFewPoints {
            needed: 8,
            got: ts.len(),
        });
    }
    for pair in ts.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::InvalidArgument {
                context: "t values must be strictly increasing",
            });
        }
    }
    if ts[ts.len() - 1] < 10.0 * ts[0] * (1.0 - 1e-12) {
        return Err(Error::InvalidArgument {
            context: "t values must span at least one decade",
        });
    }
    Ok(())
}

/// Run the remainder experiment for a weight on a body.
pub fn remainder_series(
    f: &WeightFunction,
    body: &NormBody,
    t_values: &[f64],
    quad_points: usize,
    cfg: &SumConfig,
) -> Result<ExperimentSeries> {
    validate_t_values(t_values)?;
    // one leading-term quadrature serves every t after rescaling
    let base = leading_term(f, body, 1.0, quad_points)?;
    let mut rows = Vec::with_capacity(t_values.len());
    for &t in t_values {
        let sum = radial_sum(f, body, t, cfg)?;
        let lead = base.value * libm::pow(t, body.dim() as f64 + f.degree);
        rows.push((t, sum, lead));
    }
    Ok(ExperimentSeries::from_rows(rows))
}

/// Hemisphere-indicator experiment on the Euclidean ball (`n` = 2 or 3).
///
/// The leading term is exactly half the ball volume scaled by `t^n`, so
/// no quadrature of the discontinuous weight is needed.
pub fn hemisphere_remainder(
    n: usize,
    t_values: &[f64],
    cfg: &SumConfig,
) -> Result<ExperimentSeries> {
    if n != 2 && n != 3 {
        return Err(Error::InvalidArgument {
            context: "hemisphere experiment supports n = 2 and n = 3",
        });
    }
    validate_t_values(t_values)?;
    let body = NormBody::euclidean(n);
    let f = WeightFunction::hemisphere(n - 1);
    let half_volume = unit_ball_volume(n) / 2.0;
    let mut rows = Vec::with_capacity(t_values.len());
    for &t in t_values {
        let sum = radial_sum(&f, &body, t, cfg)?;
        let lead = half_volume * libm::pow(t, n as f64);
        rows.push((t, sum, lead));
    }
    Ok(ExperimentSeries::from_rows(rows))
}

/// Result of fitting the remainder decay exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    /// Least-squares slope of `log remainder` against `log t`.
    pub slope: f64,
    /// Least-squares slope of the running-maximum staircase.
    pub envelope_slope: f64,
    /// Points used by the least-squares fit (nonzero remainders).
    pub used_points: usize,
    /// Points dropped because the remainder vanished.
    pub dropped_zeros: usize,
    /// Number of running-maximum records among the used points.
    pub envelope_points: usize,
}

/// Fit the decay exponent of a remainder series.
pub fn fit_exponent(series: &ExperimentSeries) -> Result<ExponentFit> {
    if series.len() < 8 {
        return Err(Error::TooFewPoints {
            needed: 8,
            got: series.len(),
        });
    }
    let mut logs: Vec<(f64, f64)> = Vec::with_capacity(series.len());
    let mut dropped = 0usize;
    for (&t, &r) in series.t_values.iter().zip(series.remainders.iter()) {
        if r > 0.0 {
            logs.push((libm::log(t), libm::log(r)));
        } else {
            dropped += 1;
        }
    }
    if logs.len() < 4 {
        return Err(Error::TooFewPoints {
            needed: 4,
            got: logs.len(),
        });
    }
    let slope = least_squares_slope(&logs);
    // The remainder oscillates, so the theorem is compared against the
    // running-maximum staircase. A running sup is unreliable over its
    // initial window (one unluckily small first remainder would anchor
    // the whole line), so the maximum accumulates from the start but
    // the fit skips the first fifth of the log-range.
    let cut = logs[0].0 + 0.2 * (logs[logs.len() - 1].0 - logs[0].0);
    let mut staircase: Vec<(f64, f64)> = Vec::with_capacity(logs.len());
    let mut records = 0usize;
    let mut best = f64::NEG_INFINITY;
    for &(lt, lr) in &logs {
        if lr >= best {
            best = lr;
            records += 1;
        }
        if lt >= cut {
            staircase.push((lt, best));
        }
    }
    if staircase.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: staircase.len(),
        });
    }
    let envelope_slope = least_squares_slope(&staircase);
    Ok(ExponentFit {
        slope,
        envelope_slope,
        used_points: logs.len(),
        dropped_zeros: dropped,
        envelope_points: records,
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for &(x, y) in points {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

/// Geometrically spaced values from `start` to `end` inclusive.
pub fn geometric_t_values(start: f64, end: f64, count: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && end > start) || count < 2 {
        return Err(Error::InvalidArgument {
            context: "need 0 < start < end and count >= 2",
        });
    }
    let ratio = libm::log(end / start);
    Ok((0..count)
        .map(|i| start * libm::exp(ratio * i as f64 / (count - 1) as f64))
        .collect())
}
