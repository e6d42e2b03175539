//! Correlation kernels and determinantal correlation functions.
//!
//! Kernels of the form `(F₁(x)G₁(y) + F₂(x)G₂(y))/(x − y)` are evaluated on
//! the diagonal through the derivative of the numerator, taken analytically
//! in the index variable.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::measures::ZParams;
use crate::partitions::{PhaseSpace, PointConfiguration};
use crate::specfun::{
    airy, bessel_j_table, digamma, hyp2f1_series_dshift, lgamma_sign, log_gamma, whittaker_w_with_derivative,
    OrthoPolyFamily, PrecisionPolicy, MAX_ORTHO_DEGREE,
};
use crate::{Error, Result};

/// `K(x, y) = K(y, x)` or `K(x, y) = sgn(x) sgn(y) K(y, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryClass {
    Symmetric,
    SignSymmetric,
}

pub trait Kernel: Send + Sync + fmt::Debug {
    fn phase_space(&self) -> PhaseSpace;
    fn symmetry(&self) -> SymmetryClass;
    /// `K(x, y)`, defined on the whole of `phase_space × phase_space`.
    fn eval(&self, x: f64, y: f64) -> Result<f64>;
    fn name(&self) -> String;
}

fn check_points(space: PhaseSpace, x: f64, y: f64) -> Result<()> {
    for p in [x, y] {
        if !space.contains(p) {
            return Err(Error::OutsidePhaseSpace(p));
        }
    }
    Ok(())
}

/// Index `u = |x| − 1/2` of a half-integer.
fn half_index(x: f64) -> usize {
    (x.abs() - 0.5).round() as usize
}

/// Off-diagonal assembly from the `(P, Q)` pair of each point, taken on the
/// side of that point's sign; `du` is the index difference for same-sign pairs.
fn assemble(x: f64, y: f64, px: (f64, f64), py: (f64, f64), du: f64) -> f64 {
    let (pa, qa) = px;
    let (pb, qb) = py;
    match (x > 0.0, y > 0.0) {
        (true, true) | (false, false) => (pa * qb - qa * pb) / du,
        (true, false) => (qa * qb + pa * pb) / (x - y),
        (false, true) => (pa * pb + qa * qb) / (x - y),
    }
}

// ---------------------------------------------------------------------------
// Hypergeometric kernel

#[derive(Debug, Clone, Copy, PartialEq)]
struct Side {
    p: f64,
    q: f64,
    dp: f64,
    dq: f64,
}

/// The kernel of the mixed z-measure on `ℤ′`.
#[derive(Debug)]
pub struct HypergeometricKernel {
    params: ZParams,
    xi: f64,
    policy: PrecisionPolicy,
    /// Particle–hole partner used on the negative diagonal at integer `z`.
    dual: Option<CdKernel>,
    cache: Mutex<HashMap<(bool, usize), Side>>,
}

impl HypergeometricKernel {
    pub fn new(params: ZParams, xi: f64, policy: PrecisionPolicy) -> Result<Self> {
        params.validate()?;
        policy.validate()?;
        if !(xi > 0.0 && xi < 1.0) {
            return Err(Error::InvalidParameter(format!("xi = {xi} must lie in (0, 1)")));
        }
        if xi > policy.xi_cap {
            return Err(Error::XiTooClose { xi, cap: policy.xi_cap });
        }
        let dual = match params.degenerate_pair() {
            Some((k, other)) => {
                let a = crate::measures::to_f64(&other) - k as f64;
                Some(CdKernel::new(OrthoPolyFamily::Meixner { a, xi }, k)?)
            }
            None => None,
        };
        Ok(Self { params, xi, policy, dual, cache: Mutex::new(HashMap::new()) })
    }

    pub fn params(&self) -> &ZParams {
        &self.params
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// `ln ψ±(u)` and its `u`-derivative; `None` when `ψ±(u) = 0`.
    fn ln_psi(&self, plus: bool, u: usize) -> Result<Option<(f64, f64)>> {
        let s = if plus { 1.0 } else { -1.0 };
        let (z, zp) = (self.params.z() * s, self.params.zp() * s);
        let t = self.params.t();
        let xi = self.xi;
        let mut ln = 0.5 * t.ln() + (u as f64 + 0.5) * xi.ln() + (z + zp).re * (-xi).ln_1p();
        let mut sign = 1.0;
        for j in 0..u {
            let f = ((1.0 + z + j as f64) * (1.0 + zp + j as f64)).re;
            if f == 0.0 {
                return Ok(None);
            }
            sign *= f.signum();
            ln += f.abs().ln() - 2.0 * ((j + 1) as f64).ln();
        }
        if sign < 0.0 {
            return Err(Error::InadmissibleParameters(format!("psi(u = {u}) is negative")));
        }
        let uc = Complex64::new(u as f64, 0.0);
        let dln = if self.dual.is_some() && !plus {
            f64::NAN
        } else {
            xi.ln() + (digamma(uc + 1.0 + z)? + digamma(uc + 1.0 + zp)?).re
                - 2.0 * digamma(uc + 1.0)?.re
        };
        Ok(Some((ln, dln)))
    }

    fn side(&self, plus: bool, u: usize) -> Result<Side> {
        if let Some(v) = self.cache.lock().expect("cache lock").get(&(plus, u)) {
            return Ok(*v);
        }
        let v = self.compute_side(plus, u)?;
        self.cache.lock().expect("cache lock").insert((plus, u), v);
        Ok(v)
    }

    fn compute_side(&self, plus: bool, u: usize) -> Result<Side> {
        let Some((ln_psi, dln_psi)) = self.ln_psi(plus, u)? else {
            return Ok(Side { p: 0.0, q: 0.0, dp: 0.0, dq: 0.0 });
        };
        self.side_from_psi(plus, u as f64, ln_psi, dln_psi)
    }

    /// `(P±(u), Q±(u))` continued to real `u > −1` through Gamma functions.
    /// Not available at degenerate parameters.
    pub fn p_q_continuous(&self, plus: bool, u: f64) -> Result<(f64, f64)> {
        if self.dual.is_some() {
            return Err(Error::InvalidParameter("no continuation in the index at degenerate parameters".into()));
        }
        if !(u > -1.0) {
            return Err(Error::Domain { arg: u, reason: "index must exceed -1" });
        }
        let s = if plus { 1.0 } else { -1.0 };
        let (z, zp) = (self.params.z() * s, self.params.zp() * s);
        let one = Complex64::new(1.0, 0.0);
        let lg = |w: Complex64| log_gamma(w);
        let ln = 0.5 * self.params.t().ln() + (u + 0.5) * self.xi.ln() + (z + zp).re * (-self.xi).ln_1p()
            + (lg(one + z + u)? + lg(one + zp + u)? - lg(one + z)? - lg(one + zp)?).re
            - 2.0 * lg(one + u)?.re;
        let side = self.side_from_psi(plus, u, ln, 0.0)?;
        Ok((side.p, side.q))
    }

    fn side_from_psi(&self, plus: bool, uf: f64, ln_psi: f64, dln_psi: f64) -> Result<Side> {
        let s = if plus { 1.0 } else { -1.0 };
        let (z, zp) = (self.params.z() * s, self.params.zp() * s);
        let xi = self.xi;
        let l1 = (-xi).ln_1p();
        let root = (0.5 * ln_psi).exp();
        // P = ψ^{1/2} (1−ξ)^{−z} F(−z, u+1+z′; u+1; ξ) after the Pfaff step.
        let a = -z;
        let (f, df) = hyp2f1_series_dshift(a, zp + uf + 1.0, Complex64::new(uf + 1.0, 0.0), xi, &self.policy)?;
        let pre = (a * l1).exp();
        let pc = pre * f;
        let dpc = pre * df;
        // Q = t^{1/2} ξ^{1/2} ψ^{1/2}/(1−ξ) · (1−ξ)^{1−z} F(1−z, u+1+z′; u+2; ξ)/(u+1).
        let a2 = 1.0 - z;
        let (g, dg) = hyp2f1_series_dshift(a2, zp + uf + 1.0, Complex64::new(uf + 2.0, 0.0), xi, &self.policy)?;
        let pre2 = (a2 * l1).exp() * ((self.params.t() * xi).sqrt() / (1.0 - xi));
        let qc = pre2 * g / (uf + 1.0);
        let dqc = pre2 * (dg / (uf + 1.0) - g / ((uf + 1.0) * (uf + 1.0)));
        for v in [pc, qc] {
            if v.im.abs() > 1e-9 * v.re.abs().max(1e-300) && v.im.abs() > 1e-280 {
                return Err(Error::InadmissibleParameters(format!("kernel term has imaginary part {}", v.im)));
            }
        }
        let p = root * pc.re;
        let q = root * qc.re;
        let half = 0.5 * dln_psi;
        Ok(Side { p, q, dp: p * half + root * dpc.re, dq: q * half + root * dqc.re })
    }

    /// `ψ±(u)`.
    pub fn psi(&self, plus: bool, u: usize) -> Result<f64> {
        Ok(self.ln_psi(plus, u)?.map_or(0.0, |(l, _)| l.exp()))
    }

    /// `(P±(u), Q±(u))`.
    pub fn p_q(&self, plus: bool, u: usize) -> Result<(f64, f64)> {
        let s = self.side(plus, u)?;
        Ok((s.p, s.q))
    }

    /// `(P±′(u), Q±′(u))`, derivatives in the index.
    pub fn p_q_derivative(&self, plus: bool, u: usize) -> Result<(f64, f64)> {
        if self.dual.is_some() && !plus {
            return Err(Error::InvalidParameter("index derivative is undefined on the degenerate side".into()));
        }
        let s = self.side(plus, u)?;
        Ok((s.dp, s.dq))
    }
}

impl Kernel for HypergeometricKernel {
    fn phase_space(&self) -> PhaseSpace {
        PhaseSpace::ZPrime
    }

    fn symmetry(&self) -> SymmetryClass {
        SymmetryClass::SignSymmetric
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        check_points(PhaseSpace::ZPrime, x, y)?;
        let (u, v) = (half_index(x), half_index(y));
        if x == y {
            if x < 0.0 {
                if let Some(dual) = &self.dual {
                    // −q−1/2 is a leg exactly when k−1−q is empty in the Meixner ensemble.
                    let k = dual.order();
                    if u >= k {
                        return Ok(0.0);
                    }
                    let m = (k - 1 - u) as f64;
                    return Ok(1.0 - dual.eval(m, m)?);
                }
            }
            let s = self.side(x > 0.0, u)?;
            return Ok(s.dp * s.q - s.dq * s.p);
        }
        let a = self.side(x > 0.0, u)?;
        let b = self.side(y > 0.0, v)?;
        Ok(assemble(x, y, (a.p, a.q), (b.p, b.q), u as f64 - v as f64))
    }

    fn name(&self) -> String {
        format!("hypergeometric(z={}, z'={}, xi={})", self.params.z(), self.params.zp(), self.xi)
    }
}

/// Restriction of a sign-symmetric kernel to the positive half.
#[derive(Debug, Clone)]
pub struct PositivePart {
    inner: Arc<dyn Kernel>,
}

pub fn positive_part(k: Arc<dyn Kernel>) -> Result<PositivePart> {
    if k.symmetry() != SymmetryClass::SignSymmetric {
        return Err(Error::InvalidParameter(format!("{} is not sign-symmetric", k.name())));
    }
    if !matches!(k.phase_space(), PhaseSpace::ZPrime | PhaseSpace::RStar) {
        return Err(Error::InvalidParameter("positive part needs a kernel on Z' or R*".into()));
    }
    Ok(PositivePart { inner: k })
}

impl Kernel for PositivePart {
    fn phase_space(&self) -> PhaseSpace {
        match self.inner.phase_space() {
            PhaseSpace::ZPrime => PhaseSpace::ZPrimePlus,
            _ => PhaseSpace::RPlus,
        }
    }

    fn symmetry(&self) -> SymmetryClass {
        SymmetryClass::Symmetric
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        check_points(self.phase_space(), x, y)?;
        self.inner.eval(x, y)
    }

    fn name(&self) -> String {
        format!("positive part of {}", self.inner.name())
    }
}

// ---------------------------------------------------------------------------
// Christoffel–Darboux kernels

pub const MAX_CD_ORDER: usize = 200;

/// `Σ_{j<k} φ_j(x) φ_j(y)` for the orthonormal functions `φ_j = √w · p_j/√h_j`.
#[derive(Debug, Clone)]
pub struct CdKernel {
    family: OrthoPolyFamily,
    k: usize,
    /// `1/Â_{k−1}`, the Christoffel–Darboux constant of the orthonormal recurrence.
    cd_constant: f64,
}

impl CdKernel {
    pub fn new(family: OrthoPolyFamily, k: usize) -> Result<Self> {
        family.validate()?;
        if k == 0 || k > MAX_CD_ORDER || k > MAX_ORTHO_DEGREE {
            return Err(Error::InvalidParameter(format!("order {k} must lie in 1..={MAX_CD_ORDER}")));
        }
        let cd_constant = 1.0 / family.normalized_recurrence(k - 1).0;
        Ok(Self { family, k, cd_constant })
    }

    pub fn family(&self) -> OrthoPolyFamily {
        self.family
    }

    pub fn order(&self) -> usize {
        self.k
    }

    /// `φ_0(x), …, φ_k(x)`.
    pub fn orthonormal_functions(&self, x: f64) -> Vec<f64> {
        let t = self.family.orthonormal_table(self.k, x);
        let f = (t.scale + 0.5 * self.family.log_weight(x)).exp();
        t.q.iter().map(|v| v * f).collect()
    }

    fn diagonal(&self, x: f64) -> f64 {
        let k = self.k;
        let t = self.family.orthonormal_table(k, x);
        let f = (t.scale + 0.5 * self.family.log_weight(x)).exp();
        let (q0, q1) = (t.q[k - 1] * f, t.q[k] * f);
        let (d0, d1) = (t.dq[k - 1] * f, t.dq[k] * f);
        self.cd_constant * (d1 * q0 - d0 * q1)
    }
}

impl Kernel for CdKernel {
    fn phase_space(&self) -> PhaseSpace {
        match self.family {
            OrthoPolyFamily::Hermite => PhaseSpace::R,
            OrthoPolyFamily::Laguerre { .. } => PhaseSpace::RPlus,
            _ => PhaseSpace::ZPlus,
        }
    }

    fn symmetry(&self) -> SymmetryClass {
        SymmetryClass::Symmetric
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        check_points(self.phase_space(), x, y)?;
        let (x, y) = if self.family.is_discrete() { (x.round(), y.round()) } else { (x, y) };
        if x == y {
            return Ok(self.diagonal(x));
        }
        let fx = self.orthonormal_functions(x);
        let fy = self.orthonormal_functions(y);
        let k = self.k;
        if (x - y).abs() < 1e-6 * (1.0 + x.abs().max(y.abs())) {
            // Too close for the quotient; the finite sum is exact.
            return Ok(fx[..k].iter().zip(&fy[..k]).map(|(a, b)| a * b).sum());
        }
        Ok(self.cd_constant * (fx[k] * fy[k - 1] - fx[k - 1] * fy[k]) / (x - y))
    }

    fn name(&self) -> String {
        format!("christoffel-darboux({:?}, k={})", self.family, self.k)
    }
}

pub fn cd_kernel(family: OrthoPolyFamily, k: usize) -> Result<CdKernel> {
    CdKernel::new(family, k)
}

// ---------------------------------------------------------------------------
// Plancherel kernel

pub const MAX_PLANCHEREL_THETA: f64 = 1e4;

/// The kernel of the poissonized Plancherel measure on `ℤ′`, built from
/// `J_m(2√θ)`.
#[derive(Debug)]
pub struct PlancherelKernel {
    theta: f64,
    table: RwLock<Vec<f64>>,
}

impl PlancherelKernel {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= MAX_PLANCHEREL_THETA) {
            return Err(Error::InvalidParameter(format!("theta = {theta} must lie in (0, 1e4]")));
        }
        Ok(Self { theta, table: RwLock::new(Vec::new()) })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `J_0(2√θ), …, J_m(2√θ)` (at least), from a cached table.
    fn bessel_upto(&self, m: usize) -> Result<Vec<f64>> {
        {
            let t = self.table.read().expect("table lock");
            if t.len() > m {
                return Ok(t.clone());
            }
        }
        let arg = 2.0 * self.theta.sqrt();
        let size = (m + 1).max(2 * (arg as usize) + 80);
        let fresh = bessel_j_table(size, arg)?;
        *self.table.write().expect("table lock") = fresh.clone();
        Ok(fresh)
    }
}

impl Kernel for PlancherelKernel {
    fn phase_space(&self) -> PhaseSpace {
        PhaseSpace::ZPrime
    }

    fn symmetry(&self) -> SymmetryClass {
        SymmetryClass::SignSymmetric
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        check_points(PhaseSpace::ZPrime, x, y)?;
        let (u, v) = (half_index(x), half_index(y));
        let arg = 2.0 * self.theta.sqrt();
        let need = u.max(v) + 2 + (arg as usize) + 60;
        let j = self.bessel_upto(need)?;
        if x == y {
            // Σ_{s≥1} J_{u+s}², summed until the terms are negligible.
            return Ok(j[u + 1..].iter().map(|v| v * v).sum());
        }
        let r = self.theta.powf(0.25);
        let p = |i: usize| (r * j[i], r * j[i + 1]);
        Ok(assemble(x, y, p(u), p(v), u as f64 - v as f64))
    }

    fn name(&self) -> String {
        format!("plancherel(theta={})", self.theta)
    }
}

// ---------------------------------------------------------------------------
// Whittaker kernel

/// The kernel on `ℝ*` built from Whittaker functions; real parameters only.
#[derive(Debug)]
pub struct WhittakerKernel {
    z: f64,
    zp: f64,
    policy: PrecisionPolicy,
    /// `1/√(Γ(1±z)Γ(1±z′))` for the two signs; zero at a pole.
    scale: [f64; 2],
}

impl WhittakerKernel {
    pub fn new(params: &ZParams, policy: PrecisionPolicy) -> Result<Self> {
        params.validate()?;
        let Some((z, zp)) = params.real_pair() else {
            return Err(Error::InvalidParameter("the Whittaker kernel needs real parameters".into()));
        };
        let inv_sqrt = |a: f64, b: f64| -> Result<f64> {
            // 1/Γ vanishes at nonpositive integers.
            if (a <= 0.0 && a == a.round()) || (b <= 0.0 && b == b.round()) {
                return Ok(0.0);
            }
            let (la, sa) = lgamma_sign(a)?;
            let (lb, sb) = lgamma_sign(b)?;
            if sa * sb < 0.0 {
                return Err(Error::InadmissibleParameters("Gamma product is negative".into()));
            }
            Ok((-0.5 * (la + lb)).exp())
        };
        let scale = [inv_sqrt(1.0 + z, 1.0 + zp)?, inv_sqrt(1.0 - z, 1.0 - zp)?];
        Ok(Self { z, zp, policy, scale })
    }

    /// `(𝒫, 𝒬, 𝒫′, 𝒬′)` at `x > 0` for the given sign.
    fn side(&self, plus: bool, x: f64) -> Result<[f64; 4]> {
        let c = self.scale[if plus { 0 } else { 1 }];
        if c == 0.0 {
            return Ok([0.0; 4]);
        }
        let s = if plus { 1.0 } else { -1.0 };
        let t = self.z * self.zp;
        let mu = 0.5 * (self.z - self.zp);
        let (w1, dw1) = whittaker_w_with_derivative(0.5 * (s * (self.z + self.zp) + 1.0), mu, x, &self.policy)?;
        let (w2, dw2) = whittaker_w_with_derivative(0.5 * (s * (self.z + self.zp) - 1.0), mu, x, &self.policy)?;
        let cp = t.powf(0.25) * c;
        let cq = t.powf(0.75) * c;
        let r = x.sqrt().recip();
        let dr = -0.5 * r / x;
        Ok([cp * r * w1, cq * r * w2, cp * (dr * w1 + r * dw1), cq * (dr * w2 + r * dw2)])
    }
}

impl Kernel for WhittakerKernel {
    fn phase_space(&self) -> PhaseSpace {
        PhaseSpace::RStar
    }

    fn symmetry(&self) -> SymmetryClass {
        SymmetryClass::SignSymmetric
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        check_points(PhaseSpace::RStar, x, y)?;
        let same = (x > 0.0) == (y > 0.0);
        if same && (x - y).abs() <= 1e-7 * x.abs() {
            let m = 0.5 * (x.abs() + y.abs());
            let [p, q, dp, dq] = self.side(x > 0.0, m)?;
            return Ok(dp * q - dq * p);
        }
        let a = self.side(x > 0.0, x.abs())?;
        let b = self.side(y > 0.0, y.abs())?;
        Ok(assemble(x, y, (a[0], a[1]), (b[0], b[1]), x.abs() - y.abs()))
    }

    fn name(&self) -> String {
        format!("whittaker(z={}, z'={})", self.z, self.zp)
    }
}

// ---------------------------------------------------------------------------
// Airy and sine kernels

#[derive(Debug, Clone, Copy, Default)]
pub struct AiryKernel;

impl Kernel for AiryKernel {
    fn phase_space(&self) -> PhaseSpace {
        PhaseSpace::R
    }

    fn symmetry(&self) -> SymmetryClass {
        SymmetryClass::Symmetric
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        if (x - y).abs() <= 1e-7 * (1.0 + x.abs()) {
            let m = 0.5 * (x + y);
            let (a, ap) = airy(m)?;
            return Ok(ap * ap - m * a * a);
        }
        let (ax, apx) = airy(x)?;
        let (ay, apy) = airy(y)?;
        Ok((ax * apy - apx * ay) / (x - y))
    }

    fn name(&self) -> String {
        "airy".into()
    }
}

/// `sin(a(x − y))/(π(x − y))` on `ℤ`.
#[derive(Debug, Clone, Copy)]
pub struct DiscreteSineKernel {
    a: f64,
}

impl DiscreteSineKernel {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < PI) {
            return Err(Error::InvalidParameter(format!("a = {a} must lie in (0, pi)")));
        }
        Ok(Self { a })
    }
}

impl Kernel for DiscreteSineKernel {
    fn phase_space(&self) -> PhaseSpace {
        PhaseSpace::Z
    }

    fn symmetry(&self) -> SymmetryClass {
        SymmetryClass::Symmetric
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        check_points(PhaseSpace::Z, x, y)?;
        let d = x.round() - y.round();
        if d == 0.0 {
            return Ok(self.a / PI);
        }
        Ok((self.a * d).sin() / (PI * d))
    }

    fn name(&self) -> String {
        format!("discrete-sine(a={})", self.a)
    }
}

/// `sin(π(x − y))/(π(x − y))` on `ℝ`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SineKernel;

impl Kernel for SineKernel {
    fn phase_space(&self) -> PhaseSpace {
        PhaseSpace::R
    }

    fn symmetry(&self) -> SymmetryClass {
        SymmetryClass::Symmetric
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let d = x - y;
        if d == 0.0 {
            return Ok(1.0);
        }
        Ok((PI * d).sin() / (PI * d))
    }

    fn name(&self) -> String {
        "sine".into()
    }
}

pub fn hypergeometric_kernel(params: ZParams, xi: f64) -> Result<HypergeometricKernel> {
    HypergeometricKernel::new(params, xi, PrecisionPolicy::default())
}

pub fn plancherel_kernel(theta: f64) -> Result<PlancherelKernel> {
    PlancherelKernel::new(theta)
}

pub fn whittaker_kernel(params: &ZParams) -> Result<WhittakerKernel> {
    WhittakerKernel::new(params, PrecisionPolicy::default())
}

pub fn airy_kernel() -> AiryKernel {
    AiryKernel
}

pub fn sine_kernel_discrete(a: f64) -> Result<DiscreteSineKernel> {
    DiscreteSineKernel::new(a)
}

pub fn sine_kernel_continuous() -> SineKernel {
    SineKernel
}

/// Serializable description of a kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kernel", rename_all = "kebab-case")]
pub enum KernelSpec {
    Hypergeometric { params: ZParams, xi: f64 },
    Plancherel { theta: f64 },
    Whittaker { params: ZParams },
    ChristoffelDarboux { family: OrthoPolyFamily, k: usize },
    Airy,
    DiscreteSine { a: f64 },
    Sine,
}

pub fn build_kernel(spec: &KernelSpec, policy: PrecisionPolicy) -> Result<Arc<dyn Kernel>> {
    Ok(match spec {
        KernelSpec::Hypergeometric { params, xi } => Arc::new(HypergeometricKernel::new(params.clone(), *xi, policy)?),
        KernelSpec::Plancherel { theta } => Arc::new(PlancherelKernel::new(*theta)?),
        KernelSpec::Whittaker { params } => Arc::new(WhittakerKernel::new(params, policy)?),
        KernelSpec::ChristoffelDarboux { family, k } => Arc::new(CdKernel::new(*family, *k)?),
        KernelSpec::Airy => Arc::new(AiryKernel),
        KernelSpec::DiscreteSine { a } => Arc::new(DiscreteSineKernel::new(*a)?),
        KernelSpec::Sine => Arc::new(SineKernel),
    })
}

// ---------------------------------------------------------------------------
// Determinantal correlations

pub const MAX_CORRELATION_ORDER: usize = 12;

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .expect("non-empty range");
        if m[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    det
}

/// `ρ_n(x_1, …, x_n) = det[K(x_i, x_j)]`.
pub fn correlation_det(k: &dyn Kernel, pts: &PointConfiguration) -> Result<f64> {
    let n = pts.len();
    if n == 0 {
        return Ok(1.0);
    }
    if n > MAX_CORRELATION_ORDER {
        return Err(Error::InvalidParameter(format!("at most {MAX_CORRELATION_ORDER} points are supported")));
    }
    for (i, a) in pts.points.iter().enumerate() {
        if pts.points[..i].contains(a) {
            return Err(Error::DuplicatePoints);
        }
        if !k.phase_space().contains(*a) {
            return Err(Error::OutsidePhaseSpace(*a));
        }
    }
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = k.eval(pts.points[i], pts.points[j])?;
        }
    }
    Ok(determinant(m))
}
