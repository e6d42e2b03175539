//! Special functions used by the kernels: complex log-gamma and digamma,
//! the Gauss hypergeometric series, integer-order Bessel J, the Airy function,
//! Whittaker W via Tricomi's U, Gauss–Legendre quadrature, and the Laguerre,
//! Hermite, Charlier and Meixner polynomial families.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Accuracy and work limits, passed by value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub target_rel_error: f64,
    pub max_terms: usize,
    /// Upper bound on adaptive subintervals in a single quadrature.
    pub quadrature_nodes: usize,
    /// Largest `ξ` accepted by the hypergeometric series.
    pub xi_cap: f64,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self { target_rel_error: 1e-12, max_terms: 10_000, quadrature_nodes: 512, xi_cap: 0.95 }
    }
}

impl PrecisionPolicy {
    pub fn with_target(target_rel_error: f64) -> Result<Self> {
        let p = Self { target_rel_error, ..Self::default() };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_rel_error > 0.0 && self.target_rel_error < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "target relative error {} must lie in (0, 1)",
                self.target_rel_error
            )));
        }
        if self.max_terms == 0 || self.quadrature_nodes == 0 {
            return Err(Error::InvalidParameter("work limits must be positive".into()));
        }
        if !(self.xi_cap > 0.0 && self.xi_cap < 1.0) {
            return Err(Error::InvalidParameter("xi cap must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Gamma family

const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

const SHIFT: f64 = 15.0;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Complex `log Γ`, analytic off the non-positive real axis and real for
/// positive real arguments.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::Pole(format!("log_gamma({})", z.re)));
    }
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < SHIFT {
        shift += z.ln();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    Ok((z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - shift)
}

/// `ln |Γ(x)|` and the sign of `Γ(x)` for real `x`.
pub fn lgamma_sign(x: f64) -> Result<(f64, f64)> {
    if is_nonpositive_integer(x) || x.is_nan() {
        return Err(Error::Pole(format!("gamma({x})")));
    }
    let mut x = x;
    let mut shift = 0.0;
    let mut sign = 1.0;
    while x < SHIFT {
        if x < 0.0 {
            sign = -sign;
        }
        shift += x.abs().ln();
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    Ok(((x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series - shift, sign))
}

/// `ln |Γ(x)|`.
pub fn lgamma(x: f64) -> Result<f64> {
    lgamma_sign(x).map(|(v, _)| v)
}

pub fn gamma(x: f64) -> Result<f64> {
    if x > 0.0 && x == x.round() && x < 30.0 {
        return Ok((1..x as u64).map(|k| k as f64).product());
    }
    lgamma_sign(x).map(|(v, s)| s * v.exp())
}

/// Complex digamma `Γ′/Γ`.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::Pole(format!("digamma({})", z.re)));
    }
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
    ];
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < SHIFT {
        shift += z.inv();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv2;
    for c in C {
        series += pow * c;
        pow *= inv2;
    }
    Ok(z.ln() - 0.5 * inv - series - shift)
}

pub fn digamma_real(x: f64) -> Result<f64> {
    digamma(Complex64::new(x, 0.0)).map(|v| v.re)
}

// ---------------------------------------------------------------------------
// Gauss hypergeometric function

fn is_pole(c: Complex64) -> bool {
    c.im == 0.0 && is_nonpositive_integer(c.re)
}

/// Direct series for `₂F₁(a, b; c; x)` with `|x| < 1`.
pub fn hyp2f1_series(a: Complex64, b: Complex64, c: Complex64, x: f64, policy: &PrecisionPolicy) -> Result<Complex64> {
    hyp2f1_series_dshift(a, b, c, x, policy).map(|(f, _)| f)
}

/// Value and derivative in `t` at `t = 0` of `₂F₁(a, b + t; c + t; x)`.
pub fn hyp2f1_series_dshift(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    x: f64,
    policy: &PrecisionPolicy,
) -> Result<(Complex64, Complex64)> {
    if is_pole(c) {
        return Err(Error::Pole(format!("2F1 lower parameter {}", c.re)));
    }
    if !(x.abs() < 1.0) {
        return Err(Error::Domain { arg: x, reason: "hypergeometric series needs |x| < 1" });
    }
    let tol = policy.target_rel_error * 0.1;
    let mut term = Complex64::new(1.0, 0.0);
    let mut dterm = Complex64::new(0.0, 0.0);
    let mut sum = term;
    let mut dsum = dterm;
    // Past this index the term ratio is close to its limit `x`.
    let settle = 2.0 * (a.norm() + b.norm() + c.norm()) + 10.0;
    for n in 0..policy.max_terms {
        let nf = n as f64;
        let an = a + nf;
        let bn = b + nf;
        let cn = c + nf;
        let rho = an * bn / (cn * (nf + 1.0)) * x;
        let drho = an * x / (cn * (nf + 1.0)) - rho / cn;
        dterm = dterm * rho + term * drho;
        term *= rho;
        sum += term;
        dsum += dterm;
        if term.norm() == 0.0 && dterm.norm() == 0.0 {
            return Ok((sum, dsum));
        }
        if nf > settle {
            let r = rho.norm().max(x.abs());
            if r < 1.0 {
                let tail = |t: Complex64| t.norm() * r / (1.0 - r);
                let scale = sum.norm().max(f64::MIN_POSITIVE);
                let dscale = dsum.norm().max(scale * 1e-3);
                if tail(term) <= tol * scale && tail(dterm) <= tol * dscale {
                    return Ok((sum, dsum));
                }
            }
        }
    }
    Err(Error::NoConvergence(policy.max_terms))
}

/// `₂F₁(a, b; c; w)` for `w ≤ 0` through the Pfaff transformation
/// `(1 − w)^{−a} ₂F₁(a, c − b; c; ξ)`, `ξ = w/(w − 1) ∈ [0, 1)`.
pub fn gauss_2f1(a: Complex64, b: Complex64, c: Complex64, w: f64, policy: &PrecisionPolicy) -> Result<Complex64> {
    if is_pole(c) {
        return Err(Error::Pole(format!("2F1 lower parameter {}", c.re)));
    }
    if !(w <= 0.0) {
        return Err(Error::Domain { arg: w, reason: "argument must be nonpositive" });
    }
    if w == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let xi = w / (w - 1.0);
    if xi > policy.xi_cap {
        return Err(Error::XiTooClose { xi, cap: policy.xi_cap });
    }
    let pre = (-a * (1.0 - w).ln()).exp();
    Ok(pre * hyp2f1_series(a, c - b, c, xi, policy)?)
}

// ---------------------------------------------------------------------------
// Bessel J of integer order

pub const MAX_BESSEL_ORDER: usize = 10_000;

fn bessel_series(m: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let lead = (m as f64 * half.ln() - lgamma(m as f64 + 1.0).expect("positive")).exp();
    if lead == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        term *= q / (k as f64 * (m + k) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

/// `J_0(x), …, J_{mmax}(x)` by Miller's backward recurrence, normalized with
/// `J_0 + 2 Σ J_{2k} = 1`.
pub fn bessel_j_table(mmax: usize, x: f64) -> Result<Vec<f64>> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain { arg: x, reason: "Bessel argument must be finite and nonnegative" });
    }
    if mmax > MAX_BESSEL_ORDER {
        return Err(Error::InvalidParameter(format!("Bessel order {mmax} exceeds {MAX_BESSEL_ORDER}")));
    }
    let mut out = vec![0.0; mmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return Ok(out);
    }
    let top = (mmax as f64).max(x.ceil());
    let mut start = (top + 20.0 + 14.0 * x.cbrt()).ceil() as usize;
    start += start % 2;
    let mut vals = vec![0.0; start + 2];
    vals[start] = 1e-30;
    for k in (1..=start).rev() {
        vals[k - 1] = 2.0 * k as f64 / x * vals[k] - vals[k + 1];
        if vals[k - 1].abs() > 1e250 {
            for v in &mut vals[k - 1..] {
                *v *= 1e-250;
            }
        }
    }
    let norm = vals[0] + 2.0 * vals.iter().skip(2).step_by(2).sum::<f64>();
    for (o, v) in out.iter_mut().zip(&vals) {
        *o = v / norm;
    }
    Ok(out)
}

/// `J_m(x)` for integer `m ≥ 0`, `x ≥ 0`.
pub fn bessel_j(m: usize, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain { arg: x, reason: "Bessel argument must be finite and nonnegative" });
    }
    if m > MAX_BESSEL_ORDER {
        return Err(Error::InvalidParameter(format!("Bessel order {m} exceeds {MAX_BESSEL_ORDER}")));
    }
    if x == 0.0 {
        return Ok(if m == 0 { 1.0 } else { 0.0 });
    }
    // The ascending series cancels badly once (x/2)² exceeds the order.
    if x <= 2.0 || 0.25 * x * x <= 0.5 * (m as f64 + 1.0) {
        return Ok(bessel_series(m, x));
    }
    Ok(bessel_j_table(m, x)?[m])
}

// ---------------------------------------------------------------------------
// Airy function

#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn renorm(s: f64, e: f64) -> Self {
        let hi = s + e;
        Self { hi, lo: e - (hi - s) }
    }

    fn add(self, o: Self) -> Self {
        let s = self.hi + o.hi;
        let bb = s - self.hi;
        let e = (self.hi - (s - bb)) + (o.hi - bb);
        Self::renorm(s, e + self.lo + o.lo)
    }

    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }

    fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        Self::renorm(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    fn div_f64(self, d: f64) -> Self {
        let q1 = self.hi / d;
        let p = q1 * d;
        let pe = q1.mul_add(d, -p);
        let r = (self.hi - p) - pe + self.lo;
        Self::renorm(q1, r / d)
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

const AI0: Dd = Dd::new(0.3550280538878172, 2.05233632436212e-17);
const NEG_AIP0: Dd = Dd::new(0.2588194037928068, -2.522243111610832e-17);

pub const AIRY_MAX_ABS: f64 = 20.0;

fn airy_maclaurin(x: f64) -> (f64, f64) {
    let xd = Dd::from(x);
    let x3 = xd.mul(xd).mul(xd);
    // f and g are the even-type and odd-type solutions; primes are derivatives.
    let mut t = Dd::from(1.0);
    let mut f = t;
    let mut s = xd;
    let mut g = s;
    let mut u = Dd::from(0.5 * x * x);
    let mut fp = u;
    let mut v = Dd::from(1.0);
    let mut gp = v;
    for k in 0..200usize {
        let kf = k as f64;
        t = t.mul(x3).div_f64((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        s = s.mul(x3).div_f64((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        v = v.mul(x3).div_f64((3.0 * kf + 3.0) * (3.0 * kf + 1.0));
        f = f.add(t);
        g = g.add(s);
        gp = gp.add(v);
        if k >= 1 {
            u = u.mul(x3).div_f64(3.0 * kf * (3.0 * kf + 2.0));
            fp = fp.add(u);
        }
        let small = |d: Dd| d.hi.abs() < 1e-36;
        if k > 4 && small(t) && small(s) && small(u) && small(v) {
            break;
        }
    }
    let ai = AI0.mul(f).add(NEG_AIP0.mul(g).neg());
    let aip = AI0.mul(fp).add(NEG_AIP0.mul(gp).neg());
    (ai.value(), aip.value())
}

fn airy_u_coefficients(n: usize) -> Vec<f64> {
    let mut u = vec![1.0; n];
    for k in 1..n {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
    }
    u
}

fn airy_asymptotic(x: f64) -> (f64, f64) {
    let ax = x.abs();
    let zeta = 2.0 / 3.0 * ax.powf(1.5);
    let u = airy_u_coefficients(40);
    let v: Vec<f64> = u
        .iter()
        .enumerate()
        .map(|(k, &uk)| if k == 0 { 1.0 } else { -(6.0 * k as f64 + 1.0) / (6.0 * k as f64 - 1.0) * uk })
        .collect();
    // Sum an asymptotic series up to its smallest term.
    let sum = |coef: &[f64], sign_alt: bool, parity: Option<usize>| -> f64 {
        let mut total = 0.0;
        let mut last = f64::INFINITY;
        for (k, &c) in coef.iter().enumerate() {
            if let Some(p) = parity {
                if k % 2 != p {
                    continue;
                }
            }
            let term = c / zeta.powi(k as i32);
            if term.abs() > last {
                break;
            }
            last = term.abs();
            let j = if parity.is_some() { k / 2 } else { k };
            let sgn = if sign_alt && j % 2 == 1 { -1.0 } else { 1.0 };
            total += sgn * term;
        }
        total
    };
    let sqpi = PI.sqrt();
    if x > 0.0 {
        let e = (-zeta).exp();
        let ai = e / (2.0 * sqpi * ax.powf(0.25)) * sum(&u, true, None);
        let aip = -ax.powf(0.25) * e / (2.0 * sqpi) * sum(&v, true, None);
        (ai, aip)
    } else {
        let phase = zeta + 0.25 * PI;
        let (s, c) = phase.sin_cos();
        let p = sum(&u, true, Some(0));
        let q = sum(&u, true, Some(1));
        let r = sum(&v, true, Some(0));
        let ss = sum(&v, true, Some(1));
        let ai = (s * p - c * q) / (sqpi * ax.powf(0.25));
        let aip = -ax.powf(0.25) * (c * r + s * ss) / sqpi;
        (ai, aip)
    }
}

/// `(Ai(x), Ai′(x))` for `|x| ≤ 20`.
pub fn airy(x: f64) -> Result<(f64, f64)> {
    if !(x.abs() <= AIRY_MAX_ABS) {
        return Err(Error::Domain { arg: x, reason: "Airy evaluation is limited to |x| <= 20" });
    }
    if x.abs() <= 8.0 {
        Ok(airy_maclaurin(x))
    } else {
        Ok(airy_asymptotic(x))
    }
}

// ---------------------------------------------------------------------------
// Quadrature

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl20() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(20))
}

fn gl_apply(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gl20();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    nodes.iter().zip(weights).map(|(&t, &w)| w * f(mid + half * t)).sum::<f64>() * half
}

/// Adaptive Gauss–Legendre integration over a finite interval.
pub fn integrate(
    f: &mut dyn FnMut(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<f64> {
    let mut stack = vec![(a, b, gl_apply(f, a, b))];
    let mut total = 0.0;
    let mut panels = 0usize;
    while let Some((lo, hi, whole)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = gl_apply(f, lo, mid);
        let right = gl_apply(f, mid, hi);
        let refined = left + right;
        let width = (hi - lo) / (b - a).abs().max(f64::MIN_POSITIVE);
        if (refined - whole).abs() <= (rel_tol * refined.abs()).max(abs_tol * width) || mid == lo || mid == hi {
            total += refined;
            continue;
        }
        panels += 1;
        if panels > max_panels {
            return Err(Error::NoConvergence(max_panels));
        }
        stack.push((lo, mid, left));
        stack.push((mid, hi, right));
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Tricomi U and Whittaker W

pub const WHITTAKER_MAX_X: f64 = 100.0;

/// `U(a, b, x)` for `a > 0` from its Laplace-type integral.
fn kummer_u_integral(a: f64, b: f64, x: f64, policy: &PrecisionPolicy) -> Result<f64> {
    let rel = policy.target_rel_error.max(1e-15) * 0.1;
    let tau = x.recip().min(1.0) / 8.0;
    let mut total: f64 = 0.0;
    let mut t0: f64 = 0.0;
    let mut t1 = tau;
    let mut calm = 0;
    for _ in 0..2000 {
        let piece = if a <= 1.0 {
            // t = s^{1/a} removes the endpoint singularity of t^{a−1}.
            let inv = 1.0 / a;
            let mut g = |s: f64| {
                let t = s.powf(inv);
                (-x * t + (b - a - 1.0) * t.ln_1p()).exp()
            };
            let (s0, s1) = (t0.powf(a), t1.powf(a));
            let floor = rel * total.abs().max(gl_apply(&mut g, s0, s1).abs());
            integrate(&mut g, s0, s1, rel, floor, policy.quadrature_nodes)? / a
        } else {
            let mut g = |t: f64| {
                if t == 0.0 {
                    0.0
                } else {
                    (-x * t + (a - 1.0) * t.ln() + (b - a - 1.0) * t.ln_1p()).exp()
                }
            };
            let floor = rel * total.abs().max(gl_apply(&mut g, t0, t1).abs());
            integrate(&mut g, t0, t1, rel, floor, policy.quadrature_nodes)?
        };
        total += piece;
        if x * t1 > 30.0 && piece.abs() <= rel * total.abs() {
            calm += 1;
            if calm >= 3 {
                let (lg, _) = lgamma_sign(a)?;
                return Ok(total * (-lg).exp());
            }
        } else {
            calm = 0;
        }
        t0 = t1;
        t1 *= 2.0;
    }
    Err(Error::NoConvergence(2000))
}

/// Tricomi's confluent hypergeometric function `U(a, b, x)`, `x > 0`.
/// Nonpositive `a` is reached from `(0, 2]` by the backward recurrence in `a`.
pub fn kummer_u(a: f64, b: f64, x: f64, policy: &PrecisionPolicy) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain { arg: x, reason: "Tricomi U needs x > 0" });
    }
    if a > 0.0 {
        return kummer_u_integral(a, b, x, policy);
    }
    if a == 0.0 {
        return Ok(1.0);
    }
    let n = (1.0 - a).floor();
    let top = a + n;
    let mut u2 = kummer_u_integral(top + 1.0, b, x, policy)?;
    let mut u1 = kummer_u_integral(top, b, x, policy)?;
    let mut cur = top;
    while cur - 1.0 >= a - 1e-12 {
        let s = cur - 1.0;
        // U(s) = −(b − 2s − 2 − x) U(s+1) − (s+1)(s − b + 2) U(s+2)
        let u0 = -(b - 2.0 * s - 2.0 - x) * u1 - (s + 1.0) * (s - b + 2.0) * u2;
        u2 = u1;
        u1 = u0;
        cur = s;
    }
    Ok(u1)
}

fn whittaker_check(x: f64) -> Result<()> {
    if !(x > 0.0) || x > WHITTAKER_MAX_X {
        return Err(Error::Domain { arg: x, reason: "Whittaker W is evaluated on 0 < x <= 100" });
    }
    Ok(())
}

/// `W_{κ,μ}(x) = e^{−x/2} x^{μ+1/2} U(μ − κ + 1/2, 1 + 2μ, x)`.
pub fn whittaker_w(kappa: f64, mu: f64, x: f64, policy: &PrecisionPolicy) -> Result<f64> {
    whittaker_check(x)?;
    let mu = mu.abs();
    let a = mu - kappa + 0.5;
    let b = 1.0 + 2.0 * mu;
    let lead = (-0.5 * x + (mu + 0.5) * x.ln()).exp();
    Ok(lead * kummer_u(a, b, x, policy)?)
}

/// `(W_{κ,μ}(x), d/dx W_{κ,μ}(x))`.
pub fn whittaker_w_with_derivative(kappa: f64, mu: f64, x: f64, policy: &PrecisionPolicy) -> Result<(f64, f64)> {
    whittaker_check(x)?;
    let mu = mu.abs();
    let a = mu - kappa + 0.5;
    let b = 1.0 + 2.0 * mu;
    let lead = (-0.5 * x + (mu + 0.5) * x.ln()).exp();
    let u = kummer_u(a, b, x, policy)?;
    let du = if a == 0.0 { 0.0 } else { -a * kummer_u(a + 1.0, b + 1.0, x, policy)? };
    let w = lead * u;
    Ok((w, w * (-0.5 + (mu + 0.5) / x) + lead * du))
}

// ---------------------------------------------------------------------------
// Orthogonal polynomial families

/// Classical families with fixed normalizations: physicists' Hermite,
/// Laguerre `L_n^{(a)}` with leading coefficient `(−1)ⁿ/n!`, and the
/// hypergeometric normalizations of Charlier and Meixner (`p_n(0) = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum OrthoPolyFamily {
    /// Weight `x^a e^{−x}` on `ℝ₊`.
    Laguerre { a: f64 },
    /// Weight `e^{−x²}` on `ℝ`.
    Hermite,
    /// Weight `θ^x / x!` on `ℤ₊`.
    Charlier { theta: f64 },
    /// Weight `(a+1)_x ξ^x / x!` on `ℤ₊`.
    Meixner { a: f64, xi: f64 },
}

pub const MAX_ORTHO_DEGREE: usize = 500;

impl OrthoPolyFamily {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Laguerre { a } => a > -1.0 && a.is_finite(),
            Self::Hermite => true,
            Self::Charlier { theta } => theta > 0.0 && theta.is_finite(),
            Self::Meixner { a, xi } => a > -1.0 && a.is_finite() && xi > 0.0 && xi < 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{self:?} is outside the family's parameter domain")))
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Self::Charlier { .. } | Self::Meixner { .. })
    }

    /// Whether `x` lies in the support of the weight.
    pub fn supports(&self, x: f64) -> bool {
        match self {
            Self::Hermite => x.is_finite(),
            Self::Laguerre { .. } => x >= 0.0 && x.is_finite(),
            _ => x >= 0.0 && x == x.round() && x.is_finite(),
        }
    }

    /// `(A_n, B_n, C_n)` with `p_{n+1} = (A_n x + B_n) p_n − C_n p_{n−1}`.
    pub fn recurrence(&self, n: usize) -> (f64, f64, f64) {
        let nf = n as f64;
        match *self {
            Self::Hermite => (2.0, 0.0, 2.0 * nf),
            Self::Laguerre { a } => (-1.0 / (nf + 1.0), (2.0 * nf + 1.0 + a) / (nf + 1.0), (nf + a) / (nf + 1.0)),
            Self::Charlier { theta } => (-1.0 / theta, (nf + theta) / theta, nf / theta),
            Self::Meixner { a, xi } => {
                let beta = a + 1.0;
                let d = xi * (nf + beta);
                ((xi - 1.0) / d, (nf + (nf + beta) * xi) / d, nf / d)
            }
        }
    }

    pub fn log_weight(&self, x: f64) -> f64 {
        if !self.supports(x) {
            return f64::NEG_INFINITY;
        }
        match *self {
            Self::Hermite => -x * x,
            Self::Laguerre { a } => {
                if x == 0.0 {
                    if a == 0.0 { 0.0 } else if a > 0.0 { f64::NEG_INFINITY } else { f64::INFINITY }
                } else {
                    a * x.ln() - x
                }
            }
            Self::Charlier { theta } => x * theta.ln() - lgamma(x + 1.0).expect("x >= 0"),
            Self::Meixner { a, xi } => {
                let beta = a + 1.0;
                lgamma(beta + x).expect("beta > 0") - lgamma(beta).expect("beta > 0") + x * xi.ln()
                    - lgamma(x + 1.0).expect("x >= 0")
            }
        }
    }

    pub fn weight(&self, x: f64) -> f64 {
        self.log_weight(x).exp()
    }

    /// `ln h_n` where `h_n = ⟨p_n, p_n⟩`.
    pub fn log_norm(&self, n: usize) -> f64 {
        let nf = n as f64;
        let lf = lgamma(nf + 1.0).expect("positive");
        match *self {
            Self::Hermite => 0.5 * PI.ln() + nf * 2f64.ln() + lf,
            Self::Laguerre { a } => lgamma(nf + a + 1.0).expect("a > -1") - lf,
            Self::Charlier { theta } => lf + theta - nf * theta.ln(),
            Self::Meixner { a, xi } => {
                let beta = a + 1.0;
                -nf * xi.ln() + lf - (lgamma(beta + nf).expect("beta > 0") - lgamma(beta).expect("beta > 0"))
                    - beta * (1.0 - xi).ln()
            }
        }
    }

    pub fn norm(&self, n: usize) -> f64 {
        self.log_norm(n).exp()
    }

    /// Leading coefficient `a_n`.
    pub fn leading(&self, n: usize) -> f64 {
        (0..n).map(|j| self.recurrence(j).0).product()
    }

    /// `p_0(x), …, p_n(x)` by the three-term recurrence.
    pub fn eval_all(&self, n: usize, x: f64) -> Vec<f64> {
        let mut p = Vec::with_capacity(n + 1);
        p.push(1.0);
        for j in 0..n {
            let (a, b, c) = self.recurrence(j);
            let prev = if j == 0 { 0.0 } else { p[j - 1] };
            p.push((a * x + b) * p[j] - c * prev);
        }
        p
    }

    pub fn eval(&self, n: usize, x: f64) -> f64 {
        self.eval_all(n, x)[n]
    }

    /// Recurrence coefficients for the orthonormal polynomials `p_n / √h_n`.
    pub fn normalized_recurrence(&self, n: usize) -> (f64, f64, f64) {
        let (a, b, c) = self.recurrence(n);
        let r1 = (0.5 * (self.log_norm(n) - self.log_norm(n + 1))).exp();
        let r2 = if n == 0 { 0.0 } else { (0.5 * (self.log_norm(n - 1) - self.log_norm(n + 1))).exp() };
        (a * r1, b * r1, c * r2)
    }

    /// Orthonormal polynomials `q_0, …, q_n` at `x` and their derivatives,
    /// both multiplied by `e^{−scale}`; `scale` absorbs overflow.
    pub fn orthonormal_table(&self, n: usize, x: f64) -> OrthonormalTable {
        let mut q = Vec::with_capacity(n + 1);
        let mut dq = Vec::with_capacity(n + 1);
        q.push(1.0);
        dq.push(0.0);
        let mut scale = -0.5 * self.log_norm(0);
        for j in 0..n {
            let (a, b, c) = self.normalized_recurrence(j);
            let (qp, dqp) = if j == 0 { (0.0, 0.0) } else { (q[j - 1], dq[j - 1]) };
            let next = (a * x + b) * q[j] - c * qp;
            let dnext = a * q[j] + (a * x + b) * dq[j] - c * dqp;
            q.push(next);
            dq.push(dnext);
            if next.abs().max(dnext.abs()) > 1e200 {
                for v in q.iter_mut().chain(dq.iter_mut()) {
                    *v *= 1e-200;
                }
                scale += 200.0 * 10f64.ln();
            }
        }
        OrthonormalTable { q, dq, scale }
    }
}

/// Output of [`OrthoPolyFamily::orthonormal_table`].
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalTable {
    pub q: Vec<f64>,
    pub dq: Vec<f64>,
    pub scale: f64,
}

pub fn ortho_eval(fam: &OrthoPolyFamily, n: usize, x: f64) -> Result<f64> {
    fam.validate()?;
    check_degree(n)?;
    Ok(fam.eval(n, x))
}

pub fn ortho_norm(fam: &OrthoPolyFamily, n: usize) -> Result<f64> {
    fam.validate()?;
    check_degree(n)?;
    Ok(fam.norm(n))
}

pub fn ortho_leading(fam: &OrthoPolyFamily, n: usize) -> Result<f64> {
    fam.validate()?;
    check_degree(n)?;
    Ok(fam.leading(n))
}

fn check_degree(n: usize) -> Result<()> {
    if n > MAX_ORTHO_DEGREE {
        return Err(Error::InvalidParameter(format!("degree {n} exceeds {MAX_ORTHO_DEGREE}")));
    }
    Ok(())
}
