//! Independent oracles: correlation functions by enumerating the measure,
//! the kernel limit harness, and finite-size checks of the scaling limits.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::kernels::{
    correlation_det, determinant, CdKernel, HypergeometricKernel, Kernel, KernelSpec, PlancherelKernel,
    WhittakerKernel, AiryKernel, DiscreteSineKernel,
};
use crate::measures::{
    degenerate_measure, mixed_measure, mixing_tail_bound, mixing_weight, to_f64, z_measure_f64, DegenerateFamily,
    Family, MeasureSpec, MixingLaw, Num, ZParams,
};
use crate::partitions::{
    enumerate_partitions, frobenius, log_dim, partitions_with_at_most_rows, Partition, PhaseSpace, PointConfiguration,
    DEFAULT_ENUMERATION_CAP,
};
use crate::specfun::{integrate, OrthoPolyFamily, PrecisionPolicy};
use crate::{Error, Rational, Result};

// ---------------------------------------------------------------------------
// Brute-force correlation functions

/// Omitted mixture mass `Σ_{n > level}` of the mixing weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub level: usize,
    pub bound: f64,
}

pub fn tail_bound(spec: &MeasureSpec, level: usize) -> Result<TailBound> {
    let bound = mixing_tail_bound(level, &spec.mixing, spec.t().to_f64())?;
    Ok(TailBound { level, bound: bound.max(0.0) })
}

/// Smallest truncation level whose tail bound is at most `tol`.
pub fn truncation_for(spec: &MeasureSpec, tol: f64) -> Result<TailBound> {
    let mut best = f64::INFINITY;
    for level in 0..=DEFAULT_ENUMERATION_CAP {
        let tb = match tail_bound(spec, level) {
            Ok(tb) => tb,
            Err(Error::Uncertifiable { .. }) => continue,
            Err(e) => return Err(e),
        };
        if tb.bound <= tol {
            return Ok(tb);
        }
        best = tb.bound;
    }
    Err(Error::Uncertifiable { tolerance: tol, bound: best })
}

/// `(p, q)` index sets of the configuration: positive points `p + 1/2` and negative `−q − 1/2`.
fn split_points(pts: &PointConfiguration) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for h in pts.half_integers()? {
        if h.is_positive() {
            pos.push(h.index());
        } else {
            neg.push(h.index());
        }
    }
    Ok((pos, neg))
}

fn contains_points(lambda: &Partition, pos: &[usize], neg: &[usize]) -> bool {
    let f = frobenius(lambda);
    pos.iter().all(|p| f.p().contains(p)) && neg.iter().all(|q| f.q().contains(q))
}

/// Mixed measure in floating point, `weight(|λ|) · M(λ)`.
struct MixedF64<'a> {
    spec: &'a MeasureSpec,
    weights: Vec<f64>,
}

impl<'a> MixedF64<'a> {
    fn new(spec: &'a MeasureSpec, level: usize) -> Result<Self> {
        let t = spec.t();
        let weights = (0..=level)
            .map(|n| match spec.mixing {
                MixingLaw::Fixed { .. } => Ok(1.0),
                _ => mixing_weight(n, &spec.mixing, &t).map(|w| w.to_f64()),
            })
            .collect::<Result<_>>()?;
        Ok(Self { spec, weights })
    }

    fn value(&self, lambda: &Partition) -> Result<f64> {
        let w = self.weights[lambda.size()];
        match &self.spec.family {
            Family::Z { params: p @ ZParams::Rational { .. } } => Ok(w * z_measure_f64(lambda, p)?),
            Family::Plancherel => Ok(w * (2.0 * log_dim(lambda) - crate::specfun::lgamma(lambda.size() as f64 + 1.0)?).exp()),
            _ => mixed_measure(lambda, self.spec).map(|v| v.to_f64()),
        }
    }
}

/// `Σ_{|λ| ≤ level}` of the mixed measure over diagrams whose configuration
/// contains `pts`, with the omitted mixture mass.
pub fn brute_force_correlation(spec: &MeasureSpec, pts: &PointConfiguration, level: usize) -> Result<(f64, TailBound)> {
    spec.validate()?;
    if level > DEFAULT_ENUMERATION_CAP {
        return Err(Error::CapExceeded { requested: level, cap: DEFAULT_ENUMERATION_CAP });
    }
    if pts.space != PhaseSpace::ZPrime {
        return Err(Error::InvalidParameter("brute-force correlations live on Z'".into()));
    }
    let (pos, neg) = split_points(pts)?;
    let (lo, hi) = match spec.mixing {
        MixingLaw::Fixed { n } => (n, n.min(level)),
        MixingLaw::GammaScaled { .. } => {
            return Err(Error::InvalidParameter("the gamma-scaled law has no discrete correlations".into()))
        }
        _ => (0, level),
    };
    let m = MixedF64::new(spec, level.max(lo))?;
    let mut total = 0.0;
    for n in lo..=hi {
        for l in enumerate_partitions(n)? {
            if contains_points(&l, &pos, &neg) {
                total += m.value(&l)?;
            }
        }
    }
    let tail = match spec.mixing {
        MixingLaw::Fixed { n } => TailBound { level, bound: if n > level { 1.0 } else { 0.0 } },
        _ => tail_bound(spec, level)?,
    };
    Ok((total, tail))
}

/// The measure whose correlation kernel is the given kernel, where one exists.
pub fn measure_for_kernel(spec: &KernelSpec) -> Option<MeasureSpec> {
    match spec {
        KernelSpec::Hypergeometric { params, xi } => {
            MeasureSpec::new(Family::Z { params: params.clone() }, MixingLaw::NegativeBinomial { xi: Num::Real(*xi) }).ok()
        }
        KernelSpec::Plancherel { theta } => {
            MeasureSpec::new(Family::Plancherel, MixingLaw::Poisson { theta: Num::Real(*theta) }).ok()
        }
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCheck {
    pub points: Vec<f64>,
    pub determinantal: f64,
    pub enumerated: f64,
    pub tail: TailBound,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compares `det[K(x_i, x_j)]` with the enumerated correlation; the truncation
/// is chosen so that the omitted mass is below a tenth of `tol`.
pub fn verify_correlation(kernel: &dyn Kernel, measure: &MeasureSpec, pts: &PointConfiguration, tol: f64) -> Result<CorrelationCheck> {
    let tail = truncation_for(measure, tol / 10.0)?;
    let det = correlation_det(kernel, pts)?;
    let (brute, tail) = brute_force_correlation(measure, pts, tail.level)?;
    let error = (det - brute).abs();
    Ok(CorrelationCheck {
        points: pts.points.clone(),
        determinantal: det,
        enumerated: brute,
        tail,
        error,
        tolerance: tol,
        pass: error <= tol + tail.bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub cases: Vec<CorrelationCheck>,
    pub worst_error: f64,
    pub pass: bool,
}

/// Determinantal correlations of the hypergeometric kernel against enumeration
/// of the mixed z-measure.
pub fn check_hypergeometric_correlations(params: &ZParams, xi: f64, configs: &[PointConfiguration], tol: f64) -> Result<CorrelationReport> {
    let kernel = HypergeometricKernel::new(params.clone(), xi, PrecisionPolicy::default())?;
    let measure =
        MeasureSpec::new(Family::Z { params: params.clone() }, MixingLaw::NegativeBinomial { xi: Num::Real(xi) })?;
    let mut cases = Vec::new();
    for c in configs {
        if c.len() > 3 {
            return Err(Error::InvalidParameter("configurations of at most three points are checked".into()));
        }
        cases.push(verify_correlation(&kernel, &measure, c, tol)?);
    }
    let worst_error = cases.iter().map(|c| c.error).fold(0.0, f64::max);
    let pass = cases.iter().all(|c| c.pass);
    Ok(CorrelationReport { cases, worst_error, pass })
}

// ---------------------------------------------------------------------------
// Limit harness

pub type KernelPath = Box<dyn Fn(f64) -> Result<Arc<dyn Kernel>> + Send + Sync>;
/// `(s, u) ↦ (x, u_eff)`: the source point standing for target point `u`,
/// and the target point that `x` corresponds to exactly.
pub type PointMap = Box<dyn Fn(f64, f64) -> (f64, f64) + Send + Sync>;

/// A kernel limit: `scale(s) · K_s(x(u), x(v)) → K(u, v)` along `steps`.
pub struct Transition {
    pub name: &'static str,
    pub steps: Vec<f64>,
    pub tolerance: f64,
    pub grid: Vec<f64>,
    pub source: KernelPath,
    pub target: KernelPath,
    pub map: PointMap,
    pub scale: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepError {
    pub s: f64,
    pub max_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub name: String,
    pub steps: Vec<StepError>,
    pub monotone: bool,
    pub final_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Growth allowed on a single step before a sequence counts as non-monotone.
pub const MONOTONE_SLACK: f64 = 1.2;
/// Errors below this are rounding noise and never break monotonicity.
pub const NOISE_FLOOR: f64 = 1e-13;

/// `true` when every step is at most `MONOTONE_SLACK` times the previous one.
pub fn is_monotone(errors: &[f64]) -> bool {
    errors.windows(2).all(|w| w[1] <= MONOTONE_SLACK * w[0].max(NOISE_FLOOR))
}

pub fn run_transition(t: &Transition) -> Result<ConvergenceReport> {
    let mut steps = Vec::with_capacity(t.steps.len());
    for &s in &t.steps {
        let src = (t.source)(s)?;
        let tgt = (t.target)(s)?;
        let pts: Vec<(f64, f64)> = t.grid.iter().map(|&u| (t.map)(s, u)).collect();
        for (i, a) in pts.iter().enumerate() {
            if pts[..i].iter().any(|b| b.0 == a.0) {
                return Err(Error::InvalidParameter(format!("{}: point map is not injective at s = {s}", t.name)));
            }
        }
        let c = (t.scale)(s);
        let mut max_err: f64 = 0.0;
        for &(x, u) in &pts {
            for &(y, v) in &pts {
                let e = (c * src.eval(x, y)? - tgt.eval(u, v)?).abs();
                if !e.is_finite() {
                    return Err(Error::Domain { arg: s, reason: "kernel value is not finite" });
                }
                max_err = max_err.max(e);
            }
        }
        steps.push(StepError { s, max_err });
    }
    let errors: Vec<f64> = steps.iter().map(|e| e.max_err).collect();
    let monotone = is_monotone(&errors);
    let final_error = errors.last().copied().unwrap_or(f64::NAN);
    Ok(ConvergenceReport {
        name: t.name.to_string(),
        steps,
        monotone,
        final_error,
        tolerance: t.tolerance,
        pass: monotone && final_error <= t.tolerance,
    })
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn arc<K: Kernel + 'static>(k: K) -> Arc<dyn Kernel> {
    Arc::new(k)
}

/// Nearest point of `ℤ + 1/2`.
fn nearest_half(x: f64) -> f64 {
    (x - 0.5).round() + 0.5
}

pub const TRANSITION_NAMES: [&str; 10] = [
    "hyp→meixner",
    "meixner→charlier",
    "hyp→plancherel",
    "hyp→whittaker",
    "whittaker→laguerre",
    "meixner→laguerre",
    "charlier→hermite",
    "plancherel→airy",
    "plancherel→discrete-sine",
    "charlier→airy",
];

/// Looks a transition up by name; `->` may stand in for `→`.
pub fn transition(name: &str) -> Result<Transition> {
    let key = name.replace("->", "→");
    let t = match key.as_str() {
        "hyp→meixner" => Transition {
            name: "hyp→meixner",
            // ξ varies; z = 3, z′ = 5 throughout.
            steps: vec![0.2, 0.4, 0.6],
            tolerance: 1e-9,
            grid: (3..9).map(f64::from).collect(),
            source: Box::new(|xi| {
                let k = HypergeometricKernel::new(ZParams::from_ints(3, 5)?, xi, PrecisionPolicy::default())?;
                Ok(arc(k))
            }),
            target: Box::new(|xi| Ok(arc(CdKernel::new(OrthoPolyFamily::Meixner { a: 2.0, xi }, 3)?))),
            map: Box::new(|_, u| (u - 3.0 + 0.5, u)),
            scale: Box::new(|_| 1.0),
        },
        "meixner→charlier" => Transition {
            name: "meixner→charlier",
            // a → ∞ with k(k + a)ξ = 3 fixed, so the Charlier parameter is 3/k = 1.
            steps: vec![10.0, 100.0, 1000.0, 10000.0],
            tolerance: 1e-3,
            grid: (0..8).map(f64::from).collect(),
            source: Box::new(|a| {
                let xi = 3.0 / (3.0 * (3.0 + a));
                Ok(arc(CdKernel::new(OrthoPolyFamily::Meixner { a, xi }, 3)?))
            }),
            target: Box::new(|_| Ok(arc(CdKernel::new(OrthoPolyFamily::Charlier { theta: 1.0 }, 3)?))),
            map: Box::new(|_, u| (u, u)),
            scale: Box::new(|_| 1.0),
        },
        "hyp→plancherel" => Transition {
            name: "hyp→plancherel",
            // z = z′ = s, ξ = 1/s².
            steps: vec![20.0, 50.0, 100.0, 200.0],
            tolerance: 1e-2,
            grid: vec![-2.5, -1.5, -0.5, 0.5, 1.5, 2.5],
            source: Box::new(|s| {
                let z = rat(s as i64, 1);
                let k = HypergeometricKernel::new(ZParams::rational(z.clone(), z)?, 1.0 / (s * s), PrecisionPolicy::default())?;
                Ok(arc(k))
            }),
            target: Box::new(|_| Ok(arc(PlancherelKernel::new(1.0)?))),
            map: Box::new(|_, u| (u, u)),
            scale: Box::new(|_| 1.0),
        },
        "hyp→whittaker" => Transition {
            name: "hyp→whittaker",
            // ξ = 1 − 1/s with points scaled by 1 − ξ; s odd keeps u·s on ℤ′.
            steps: vec![11.0, 21.0, 51.0, 101.0, 201.0],
            tolerance: 2e-2,
            grid: vec![-1.5, -0.5, 0.5, 1.5, 2.5],
            source: Box::new(|s| {
                let policy = PrecisionPolicy { xi_cap: 0.999, max_terms: 400_000, ..PrecisionPolicy::default() };
                let k = HypergeometricKernel::new(ZParams::rational(rat(1, 3), rat(2, 3))?, 1.0 - 1.0 / s, policy)?;
                Ok(arc(k))
            }),
            target: Box::new(|_| Ok(arc(WhittakerKernel::new(&ZParams::rational(rat(1, 3), rat(2, 3))?, PrecisionPolicy::default())?))),
            map: Box::new(|s, u| {
                let x = nearest_half(u * s);
                (x, x / s)
            }),
            scale: Box::new(|s| s),
        },
        "whittaker→laguerre" => Transition {
            name: "whittaker→laguerre",
            // z = 2 and z′ = s: the positive part is the Laguerre kernel with a = s − 2.
            steps: vec![2.5, 3.5, 4.5],
            tolerance: 1e-8,
            grid: vec![0.3, 0.9, 1.7, 3.2, 5.5],
            source: Box::new(|s| {
                let zp = rat((2.0 * s) as i64, 2);
                Ok(arc(WhittakerKernel::new(&ZParams::rational(rat(2, 1), zp)?, PrecisionPolicy::default())?))
            }),
            target: Box::new(|s| Ok(arc(CdKernel::new(OrthoPolyFamily::Laguerre { a: s - 2.0 }, 2)?))),
            map: Box::new(|_, u| (u, u)),
            scale: Box::new(|_| 1.0),
        },
        "meixner→laguerre" => Transition {
            name: "meixner→laguerre",
            // ξ = 1 − 1/s, x = u s.
            steps: vec![10.0, 20.0, 50.0, 100.0, 200.0],
            tolerance: 2e-2,
            grid: vec![0.5, 1.0, 2.0, 3.0, 5.0],
            source: Box::new(|s| Ok(arc(CdKernel::new(OrthoPolyFamily::Meixner { a: 1.5, xi: 1.0 - 1.0 / s }, 3)?))),
            target: Box::new(|_| Ok(arc(CdKernel::new(OrthoPolyFamily::Laguerre { a: 1.5 }, 3)?))),
            map: Box::new(|s, u| {
                let x = (u * s).round();
                (x, x / s)
            }),
            scale: Box::new(|s| s),
        },
        "charlier→hermite" => Transition {
            name: "charlier→hermite",
            // x = s + u √(2s), where s is the Charlier parameter.
            steps: vec![10.0, 100.0, 1000.0, 10000.0],
            tolerance: 2e-2,
            grid: vec![-1.5, -0.5, 0.0, 0.7, 1.5],
            source: Box::new(|s| Ok(arc(CdKernel::new(OrthoPolyFamily::Charlier { theta: s }, 4)?))),
            target: Box::new(|_| Ok(arc(CdKernel::new(OrthoPolyFamily::Hermite, 4)?))),
            map: Box::new(|s, u| {
                let w = (2.0 * s).sqrt();
                let x = (s + u * w).round();
                (x, (x - s) / w)
            }),
            scale: Box::new(|s| (2.0 * s).sqrt()),
        },
        "plancherel→airy" => Transition {
            name: "plancherel→airy",
            // x = 2√θ + u θ^{1/6}.
            steps: vec![100.0, 1000.0, 10000.0],
            tolerance: 1e-2,
            grid: vec![-2.0, -1.0, 0.0, 1.0, 2.0],
            source: Box::new(|th| Ok(arc(PlancherelKernel::new(th)?))),
            target: Box::new(|_| Ok(arc(AiryKernel))),
            map: Box::new(|th, u| {
                let w = th.powf(1.0 / 6.0);
                let x = nearest_half(2.0 * th.sqrt() + u * w);
                (x, (x - 2.0 * th.sqrt()) / w)
            }),
            scale: Box::new(|th| th.powf(1.0 / 6.0)),
        },
        "plancherel→discrete-sine" => Transition {
            name: "plancherel→discrete-sine",
            // Bulk window around x ≈ √θ, where the density is arccos(1/2)/π.
            steps: vec![100.0, 1000.0, 10000.0],
            tolerance: 2e-2,
            grid: vec![-2.0, -1.0, 0.0, 1.0, 2.0],
            source: Box::new(|th| Ok(arc(PlancherelKernel::new(th)?))),
            target: Box::new(|_| Ok(arc(DiscreteSineKernel::new((0.5f64).acos())?))),
            map: Box::new(|th, u| (nearest_half(th.sqrt()) + u, u)),
            scale: Box::new(|_| 1.0),
        },
        "charlier→airy" => Transition {
            name: "charlier→airy",
            // k = s particles, mixing parameter θ = s², Charlier parameter θ/k = s.
            // Top point x = θ/k + 2√θ + k − 1/2 + u (1 + √θ/k)^{2/3} θ^{1/6}.
            steps: vec![25.0, 50.0, 100.0, 200.0],
            tolerance: 5e-2,
            grid: vec![-2.0, -1.0, 0.0, 1.0, 2.0],
            source: Box::new(|s| Ok(arc(CdKernel::new(OrthoPolyFamily::Charlier { theta: s }, s as usize)?))),
            target: Box::new(|_| Ok(arc(AiryKernel))),
            map: Box::new(|s, u| {
                let (centre, w) = charlier_edge(s);
                let x = (centre + u * w + s - 0.5).round();
                (x, (x - s + 0.5 - centre) / w)
            }),
            scale: Box::new(|s| charlier_edge(s).1),
        },
        _ => return Err(Error::InvalidParameter(format!("unknown transition {name:?}"))),
    };
    Ok(t)
}

/// Edge centre and width for `k = s`, `θ = s²`.
fn charlier_edge(s: f64) -> (f64, f64) {
    let (k, theta) = (s, s * s);
    let centre = theta / k + 2.0 * theta.sqrt();
    let w = (1.0 + theta.sqrt() / k).powf(2.0 / 3.0) * theta.powf(1.0 / 6.0);
    (centre, w)
}

pub fn builtin_transitions() -> Vec<Transition> {
    TRANSITION_NAMES.iter().map(|n| transition(n).expect("built-in transition")).collect()
}

// ---------------------------------------------------------------------------
// Depoissonization

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepoissonizationEntry {
    pub n: usize,
    pub total_variation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepoissonizationReport {
    pub entries: Vec<DepoissonizationEntry>,
    pub decreasing: bool,
}

/// Distribution of `λ₁` under the Plancherel measure on partitions of `n`.
pub fn plancherel_first_row_distribution(n: usize) -> Result<Vec<f64>> {
    let mut dist = vec![0.0; n + 1];
    let ln_fact = crate::specfun::lgamma(n as f64 + 1.0)?;
    for l in enumerate_partitions(n)? {
        dist[l.row(1)] += (2.0 * log_dim(&l) - ln_fact).exp();
    }
    Ok(dist)
}

/// `P(λ₁ ≤ L)` under the poissonized Plancherel measure, as the Fredholm
/// determinant `det(1 − K)` of the Plancherel kernel on `{L + 1/2, L + 3/2, …}`.
pub fn poissonized_first_row_cdf(theta: f64, level: usize) -> Result<f64> {
    let k = PlancherelKernel::new(theta)?;
    let edge = 2.0 * theta.sqrt();
    let top = (edge + 12.0 * theta.powf(1.0 / 6.0) + 30.0).ceil() as usize;
    if level >= top {
        return Ok(1.0);
    }
    let pts: Vec<f64> = (level..top).map(|i| i as f64 + 0.5).collect();
    let m = pts
        .iter()
        .map(|&x| pts.iter().map(|&y| Ok(f64::from(x == y) - k.eval(x, y)?)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(determinant(m))
}

/// Distribution of `λ₁` under the poissonized Plancherel measure, up to `λ₁ ≤ max_row`.
pub fn poissonized_first_row_distribution(theta: f64, max_row: usize) -> Result<Vec<f64>> {
    let cdf = (0..=max_row).map(|l| poissonized_first_row_cdf(theta, l)).collect::<Result<Vec<_>>>()?;
    Ok((0..=max_row).map(|l| cdf[l] - if l == 0 { 0.0 } else { cdf[l - 1] }).collect())
}

/// Total variation between the law of `λ₁` under the Plancherel measure of
/// size `n` and under its poissonization at `θ = n`.
pub fn check_depoissonization(n_values: &[usize]) -> Result<DepoissonizationReport> {
    let mut entries = Vec::new();
    for &n in n_values {
        if n == 0 || n > 40 {
            return Err(Error::InvalidParameter("depoissonization is checked for 1 ≤ n ≤ 40".into()));
        }
        let fixed = plancherel_first_row_distribution(n)?;
        let theta = n as f64;
        let max_row = (2.0 * theta.sqrt() + 12.0 * theta.powf(1.0 / 6.0) + 30.0).ceil() as usize;
        let pois = poissonized_first_row_distribution(theta, max_row.max(n))?;
        let covered: f64 = pois.iter().sum();
        let mut tv = 1.0 - covered;
        for (l, p) in pois.iter().enumerate() {
            tv += (p - fixed.get(l).copied().unwrap_or(0.0)).abs();
        }
        entries.push(DepoissonizationEntry { n, total_variation: 0.5 * tv });
    }
    let decreasing = entries.windows(2).all(|w| w[1].total_variation < w[0].total_variation);
    Ok(DepoissonizationReport { entries, decreasing })
}

// ---------------------------------------------------------------------------
// Simplex density

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentEntry {
    pub n: usize,
    pub order: u32,
    pub exact: f64,
    pub limit: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexReport {
    pub k: usize,
    pub a: usize,
    pub entries: Vec<MomentEntry>,
    /// Error decreasing in `n` for each moment order.
    pub decreasing: bool,
    pub final_max_rel_error: f64,
}

/// Limit moment `E[x₁^r]` of the density `∝ (x₁ − x₂)² (x₁ x₂)^a` on `x₁ + x₂ = 1`, `x₁ ≥ x₂`.
pub fn simplex_limit_moment(a: usize, order: u32) -> Result<f64> {
    let dens = |u: f64| (2.0 * u - 1.0).powi(2) * (u * (1.0 - u)).powi(a as i32);
    let mut f0 = |u: f64| dens(u);
    let mut f1 = |u: f64| dens(u) * u.powi(order as i32);
    let z = integrate(&mut f0, 0.5, 1.0, 1e-13, 1e-300, 4096)?;
    let m = integrate(&mut f1, 0.5, 1.0, 1e-13, 1e-300, 4096)?;
    Ok(m / z)
}

/// Exact `E[(λ₁/n)^r]` under `M^{(n)}_{k,k+a}` for `k = 2`.
pub fn exact_first_row_moment(n: usize, k: usize, l: usize, order: u32) -> Result<f64> {
    let mut total = Rational::from_integer(BigInt::from(0));
    for lam in partitions_with_at_most_rows(n, k) {
        let m = degenerate_measure(&lam, &DegenerateFamily::IntegerKl { n, k, l })?;
        let x = Rational::new(BigInt::from(lam.row(1)), BigInt::from(n));
        total += m * num_traits::pow(x, order as usize);
    }
    Ok(to_f64(&total))
}

pub fn check_simplex_density(k: usize, a: usize, n_values: &[usize], orders: &[u32]) -> Result<SimplexReport> {
    if k != 2 {
        return Err(Error::InvalidParameter("the simplex density is checked for k = 2".into()));
    }
    let mut entries = Vec::new();
    let mut decreasing = true;
    let mut final_max: f64 = 0.0;
    for &r in orders {
        let limit = simplex_limit_moment(a, r)?;
        let mut prev = f64::INFINITY;
        for &n in n_values {
            let exact = exact_first_row_moment(n, k, k + a, r)?;
            let rel_error = ((exact - limit) / limit).abs();
            decreasing &= rel_error < prev;
            prev = rel_error;
            entries.push(MomentEntry { n, order: r, exact, limit, rel_error });
        }
        final_max = final_max.max(prev);
    }
    Ok(SimplexReport { k, a, entries, decreasing, final_max_rel_error: final_max })
}

// ---------------------------------------------------------------------------
// Gamma heuristic

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaHeuristicEntry {
    pub xi: f64,
    pub mean: f64,
    pub second_moment: f64,
    pub error: f64,
}

/// Heuristic check that the scaled size `(1 − ξ) n` under the negative-binomial
/// mixture approaches the `Gamma(t, 1)` law in its first two moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaHeuristicReport {
    pub t: f64,
    pub heuristic: bool,
    pub entries: Vec<GammaHeuristicEntry>,
    pub decreasing: bool,
}

pub fn check_gamma_heuristic(t: f64, xi_values: &[f64]) -> Result<GammaHeuristicReport> {
    let mut entries = Vec::new();
    for &xi in xi_values {
        let law = MixingLaw::NegativeBinomial { xi: Num::Real(xi) };
        let (mut m1, mut m2, mut mass) = (0.0, 0.0, 0.0);
        let mut n = 0usize;
        loop {
            let w = mixing_weight(n, &law, &Num::Real(t))?.to_f64();
            let s = (1.0 - xi) * n as f64;
            m1 += w * s;
            m2 += w * s * s;
            mass += w;
            n += 1;
            if (1.0 - mass) < 1e-14 && n as f64 > t * xi / (1.0 - xi) || n > 10_000_000 {
                break;
            }
        }
        let error = (m1 - t).abs().max((m2 - t * (t + 1.0)).abs());
        entries.push(GammaHeuristicEntry { xi, mean: m1, second_moment: m2, error });
    }
    let decreasing = entries.windows(2).all(|w| w[1].error < w[0].error);
    Ok(GammaHeuristicReport { t, heuristic: true, entries, decreasing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::HalfInt;

    fn zp_config(points: &[f64]) -> PointConfiguration {
        PointConfiguration::new(PhaseSpace::ZPrime, points.to_vec()).unwrap()
    }

    fn hh_params() -> ZParams {
        ZParams::rational(rat(1, 2), rat(1, 2)).unwrap()
    }

    fn hh_spec() -> MeasureSpec {
        MeasureSpec::new(Family::Z { params: hh_params() }, MixingLaw::NegativeBinomial { xi: Num::Real(0.3) }).unwrap()
    }

    #[test]
    fn empty_configuration_gives_covered_mass() {
        let spec = hh_spec();
        for level in [5, 10, 20] {
            let (v, tail) = brute_force_correlation(&spec, &zp_config(&[]), level).unwrap();
            let covered: f64 = (0..=level)
                .map(|n| mixing_weight(n, &spec.mixing, &spec.t()).unwrap().to_f64())
                .sum();
            assert!((v - covered).abs() < 1e-13);
            assert!((1.0 - v) <= tail.bound * (1.0 + 1e-9) + 1e-15);
        }
    }

    #[test]
    fn tail_bounds_decrease() {
        let spec = hh_spec();
        let b: Vec<f64> = (0..30).map(|n| tail_bound(&spec, n).unwrap().bound).collect();
        assert!(b.windows(2).all(|w| w[1] < w[0]));
        let tb = truncation_for(&spec, 1e-8).unwrap();
        assert!(tb.bound <= 1e-8 && tail_bound(&spec, tb.level - 1).unwrap().bound > 1e-8);
        let slow = MeasureSpec::new(Family::Z { params: hh_params() }, MixingLaw::NegativeBinomial { xi: Num::Real(0.9) }).unwrap();
        assert!(matches!(truncation_for(&slow, 1e-12), Err(Error::Uncertifiable { .. })));
    }

    #[test]
    fn plancherel_pair_correlation_by_hand() {
        // {1/2, −1/2} ⊂ config(λ) iff the last diagonal box has no arm and no leg,
        // i.e. λ_d = d and λ′_d = d for d the diagonal length.
        let theta: f64 = 0.5;
        let spec = MeasureSpec::new(Family::Plancherel, MixingLaw::Poisson { theta: Num::Real(theta) }).unwrap();
        let (v, tail) = brute_force_correlation(&spec, &zp_config(&[0.5, -0.5]), 20).unwrap();
        let mut hand = 0.0;
        for n in 0..=20usize {
            let w = (-theta + n as f64 * theta.ln() - crate::specfun::lgamma(n as f64 + 1.0).unwrap()).exp();
            for l in enumerate_partitions(n).unwrap() {
                let d = l.diagonal();
                if d > 0 && l.row(d) == d && l.column(d) == d {
                    hand += w * to_f64(&degenerate_measure(&l, &DegenerateFamily::Plancherel { n }).unwrap());
                }
            }
        }
        assert!(tail.bound < 1e-20);
        assert!((v - hand).abs() < 1e-15, "{v} vs {hand}");
        assert!(v > 0.0 && v < 1.0 - (-theta).exp());
        let (v, _) = brute_force_correlation(&spec, &zp_config(&[2.5]), 20).unwrap();
        assert!(v > 0.0 && v < 1.0);
    }

    #[test]
    fn hypergeometric_configurations() {
        let configs: Vec<_> = [vec![0.5], vec![0.5, 1.5], vec![0.5, -0.5, -1.5], vec![2.5], vec![-2.5]]
            .iter()
            .map(|c| zp_config(c))
            .collect();
        let r = check_hypergeometric_correlations(&hh_params(), 0.3, &configs, 1e-6).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(check_hypergeometric_correlations(&hh_params(), 0.3, &[zp_config(&[0.5, 1.5, 2.5, 3.5])], 1e-6).is_err());
    }

    #[test]
    fn split_points_matches_half_integers() {
        let c = PointConfiguration::from_half_integers(&[HalfInt::positive(2), HalfInt::negative(0)]);
        assert_eq!(split_points(&c).unwrap(), (vec![2], vec![0]));
    }

    #[test]
    fn monotonicity_rule() {
        assert!(is_monotone(&[1.0, 0.5, 0.55, 0.1]));
        assert!(!is_monotone(&[1.0, 0.5, 0.7]));
        assert!(is_monotone(&[3e-15, 8e-15, 1e-14]));
    }

    #[test]
    fn identity_transitions() {
        for name in ["hyp→meixner", "whittaker→laguerre"] {
            let r = run_transition(&transition(name).unwrap()).unwrap();
            assert!(r.pass, "{r:?}");
        }
        assert!(transition("hyp->meixner").is_ok());
        assert!(transition("nowhere").is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = run_transition(&transition("hyp→meixner").unwrap()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["name", "steps", "monotone", "final_error", "tolerance", "pass"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v["steps"][0].get("s").is_some() && v["steps"][0].get("max_err").is_some());
    }

    #[test]
    fn poissonized_cdf_matches_enumeration() {
        let theta = 1.5;
        let spec = MeasureSpec::new(Family::Plancherel, MixingLaw::Poisson { theta: Num::Real(theta) }).unwrap();
        let m = MixedF64::new(&spec, 30).unwrap();
        for level in 0..6 {
            let mut brute = 0.0;
            for n in 0..=30 {
                for l in enumerate_partitions(n).unwrap() {
                    if l.row(1) <= level {
                        brute += m.value(&l).unwrap();
                    }
                }
            }
            let fred = poissonized_first_row_cdf(theta, level).unwrap();
            assert!((fred - brute).abs() < 1e-10, "{level}: {fred} vs {brute}");
        }
    }

    #[test]
    fn depoissonization_examples() {
        let r = check_depoissonization(&[1]).unwrap();
        // λ₁ = 1 surely at n = 1; at θ = 1 the poissonized law agrees only on that atom.
        let p1 = poissonized_first_row_distribution(1.0, 40).unwrap()[1];
        assert!((r.entries[0].total_variation - (1.0 - p1)).abs() < 1e-10);
        let d = plancherel_first_row_distribution(5).unwrap();
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!((d[5] - 1.0 / 120.0).abs() < 1e-15);
    }

    #[test]
    fn simplex_moments_small() {
        // Closed form: E[x₁] = 7/8 for a = 0.
        assert!((simplex_limit_moment(0, 1).unwrap() - 7.0 / 8.0).abs() < 1e-12);
        assert!((simplex_limit_moment(0, 0).unwrap() - 1.0).abs() < 1e-14);
        // Rows sum to n, so E[x₁] + E[x₂] = 1 exactly.
        for n in [3usize, 8, 13] {
            let mut total = Rational::from_integer(BigInt::from(0));
            for lam in partitions_with_at_most_rows(n, 2) {
                let m = degenerate_measure(&lam, &DegenerateFamily::IntegerKl { n, k: 2, l: 3 }).unwrap();
                total += m * Rational::new(BigInt::from(lam.row(1) + lam.row(2)), BigInt::from(n));
            }
            assert_eq!(total, rat(1, 1));
        }
    }

    #[test]
    fn builtin_transitions_converge() {
        for t in builtin_transitions() {
            let r = run_transition(&t).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn gamma_heuristic_moments() {
        let r = check_gamma_heuristic(0.25, &[0.5, 0.9, 0.99]).unwrap();
        assert!(r.heuristic && r.decreasing, "{r:?}");
        // E[(1−ξ)n] = tξ exactly.
        for e in &r.entries {
            assert!((e.mean - 0.25 * e.xi).abs() < 1e-10);
        }
    }
}
