//! The z-measures `M_{z,z′}` on partitions of `n`, their negative-binomial
//! and Poisson mixtures, and the degenerate families obtained at integer
//! parameters.
//!
//! Values are exact whenever every parameter is rational. Transcendental
//! mixing prefactors such as `(1 − ξ)^t` and `e^{−θ}` are kept symbolic so
//! normalization identities can still be checked exactly.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::partitions::{
    contents_and_hooks, dim, enumerate_partitions, factorial, FrobeniusCoords, Partition,
};
use crate::rsk::{count_ssyt, matrix_count};
use crate::specfun::lgamma;
use crate::{Error, Rational, Result};

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn is_integer(r: &Rational) -> bool {
    r.is_integer()
}

/// Converts an exact rational to the nearest `f64`.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // ToPrimitive gives up on huge numerators/denominators; fall back to logs.
        let (n, d) = (r.numer(), r.denom());
        let sign = if n.is_negative() { -1.0 } else { 1.0 };
        let ln = |b: &BigInt| -> f64 {
            let bits = b.bits();
            let shift = bits.saturating_sub(60);
            let top: BigInt = b.abs() >> shift;
            top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
        };
        if n.is_zero() {
            0.0
        } else {
            sign * (ln(n) - ln(d)).exp()
        }
    })
}

/// The parameter pair `(z, z′)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ZParams {
    /// Real rationals, either inside one open integer gap `(m, m+1)` or
    /// degenerate: one of them a positive integer `k` and the other `> k − 1`.
    Rational {
        #[serde(with = "crate::parse::serde_rational")] z: Rational,
        #[serde(with = "crate::parse::serde_rational")] zp: Rational,
    },
    /// `z′ = z̄` with `z ∉ ℤ`.
    Conjugate { re: f64, im: f64 },
}

impl ZParams {
    pub fn rational(z: Rational, zp: Rational) -> Result<Self> {
        let p = ZParams::Rational { z, zp };
        p.validate()?;
        Ok(p)
    }

    pub fn from_ints(z: i64, zp: i64) -> Result<Self> {
        Self::rational(rat(z), rat(zp))
    }

    pub fn conjugate(z: Complex64) -> Result<Self> {
        let p = ZParams::Conjugate { re: z.re, im: z.im };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ZParams::Rational { z, zp } => {
                let gap = !is_integer(z) && !is_integer(zp) && z.floor() == zp.floor();
                if gap || self.degenerate_pair().is_some() {
                    Ok(())
                } else {
                    Err(Error::InadmissibleParameters(format!(
                        "z = {z}, z' = {zp} neither share an open integer gap nor form a degenerate pair"
                    )))
                }
            }
            ZParams::Conjugate { re, im } => {
                if !re.is_finite() || !im.is_finite() {
                    return Err(Error::InadmissibleParameters("non-finite z".into()));
                }
                if *im == 0.0 && *re == re.round() {
                    return Err(Error::InadmissibleParameters(format!("conjugate-mode z = {re} is an integer")));
                }
                Ok(())
            }
        }
    }

    /// `(k, other)` when one parameter is a positive integer `k` and the other
    /// exceeds `k − 1`; the smaller integer is chosen when both qualify.
    pub fn degenerate_pair(&self) -> Option<(usize, Rational)> {
        let ZParams::Rational { z, zp } = self else { return None };
        let mut best: Option<(usize, Rational)> = None;
        for (a, b) in [(z, zp), (zp, z)] {
            if is_integer(a) && a.is_positive() && *b > a - rat(1) {
                let k = a.to_integer().to_usize()?;
                if best.as_ref().is_none_or(|(bk, _)| k < *bk) {
                    best = Some((k, b.clone()));
                }
            }
        }
        best
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate_pair().is_some()
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ZParams::Rational { .. })
    }

    pub fn z(&self) -> Complex64 {
        match self {
            ZParams::Rational { z, .. } => Complex64::new(to_f64(z), 0.0),
            ZParams::Conjugate { re, im } => Complex64::new(*re, *im),
        }
    }

    pub fn zp(&self) -> Complex64 {
        match self {
            ZParams::Rational { zp, .. } => Complex64::new(to_f64(zp), 0.0),
            ZParams::Conjugate { re, im } => Complex64::new(*re, -*im),
        }
    }

    /// Real pair when in rational mode.
    pub fn real_pair(&self) -> Option<(f64, f64)> {
        match self {
            ZParams::Rational { z, zp } => Some((to_f64(z), to_f64(zp))),
            ZParams::Conjugate { .. } => None,
        }
    }

    pub fn t_exact(&self) -> Option<Rational> {
        match self {
            ZParams::Rational { z, zp } => Some(z * zp),
            ZParams::Conjugate { .. } => None,
        }
    }

    /// `t = z z′ > 0`.
    pub fn t(&self) -> f64 {
        match self {
            ZParams::Rational { z, zp } => to_f64(&(z * zp)),
            ZParams::Conjugate { re, im } => re * re + im * im,
        }
    }
}

/// A real parameter held exactly or as a float.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Exact(#[serde(with = "crate::parse::serde_rational")] Rational),
    Real(f64),
}

impl Num {
    pub fn to_f64(&self) -> f64 {
        match self {
            Num::Exact(r) => to_f64(r),
            Num::Real(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Num::Exact(r) => Some(r),
            Num::Real(_) => None,
        }
    }
}

impl From<Rational> for Num {
    fn from(r: Rational) -> Self {
        Num::Exact(r)
    }
}

impl From<f64> for Num {
    fn from(x: f64) -> Self {
        Num::Real(x)
    }
}

/// How the size `n = |λ|` is randomized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MixingLaw {
    /// No mixing: `n` is fixed.
    Fixed { n: usize },
    /// `π_{t,ξ}(n) = (1 − ξ)^t (t)_n ξ^n / n!`.
    NegativeBinomial { xi: Num },
    /// `e^{−θ} θ^n / n!`.
    Poisson { theta: Num },
    /// The `Gamma(t, 1)` law on `ℝ₊`, the `ξ → 1` limit of `(1 − ξ) n`.
    GammaScaled { t: Num },
}

impl MixingLaw {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match self {
            MixingLaw::Fixed { .. } => Ok(()),
            MixingLaw::NegativeBinomial { xi } => {
                let x = xi.to_f64();
                let ok = match xi {
                    Num::Exact(r) => r.is_positive() && *r < rat(1),
                    Num::Real(_) => x > 0.0 && x < 1.0,
                };
                if ok { Ok(()) } else { bad(format!("xi = {x} must lie in (0, 1)")) }
            }
            MixingLaw::Poisson { theta: v } | MixingLaw::GammaScaled { t: v } => {
                let ok = match v {
                    Num::Exact(r) => r.is_positive(),
                    Num::Real(x) => *x > 0.0 && x.is_finite(),
                };
                if ok { Ok(()) } else { bad(format!("parameter {} must be positive", v.to_f64())) }
            }
        }
    }
}

/// Symbolic factor multiplying an exact rational value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Prefactor {
    One,
    /// `(1 − ξ)^t`.
    OneMinusXiPow {
        #[serde(with = "crate::parse::serde_rational")] xi: Rational,
        #[serde(with = "crate::parse::serde_rational")] t: Rational,
    },
    /// `e^{−θ}`.
    ExpNeg {
        #[serde(with = "crate::parse::serde_rational")] theta: Rational,
    },
}

impl Prefactor {
    pub fn to_f64(&self) -> f64 {
        match self {
            Prefactor::One => 1.0,
            Prefactor::OneMinusXiPow { xi, t } => (to_f64(t) * (-to_f64(xi)).ln_1p()).exp(),
            Prefactor::ExpNeg { theta } => (-to_f64(theta)).exp(),
        }
    }

    fn ln(&self) -> f64 {
        match self {
            Prefactor::One => 0.0,
            Prefactor::OneMinusXiPow { xi, t } => to_f64(t) * (-to_f64(xi)).ln_1p(),
            Prefactor::ExpNeg { theta } => -to_f64(theta),
        }
    }
}

/// A measure or weight value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasureValue {
    /// `coeff × prefactor` with `coeff` exact.
    Exact {
        #[serde(with = "crate::parse::serde_rational")] coeff: Rational,
        prefactor: Prefactor,
    },
    Real(f64),
}

impl MeasureValue {
    pub fn exact(coeff: Rational) -> Self {
        MeasureValue::Exact { coeff, prefactor: Prefactor::One }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            MeasureValue::Real(x) => *x,
            MeasureValue::Exact { coeff, prefactor: Prefactor::One } => to_f64(coeff),
            MeasureValue::Exact { coeff, prefactor } => {
                if coeff.is_zero() {
                    return 0.0;
                }
                // Combine in logs so tiny prefactors and huge coefficients don't overflow.
                let c = to_f64(coeff);
                if c.is_finite() && c != 0.0 {
                    c * prefactor.to_f64()
                } else {
                    (ln_rational(coeff) + prefactor.ln()).exp()
                }
            }
        }
    }

    /// The exact value when no transcendental factor is attached.
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            MeasureValue::Exact { coeff, prefactor: Prefactor::One } => Some(coeff),
            _ => None,
        }
    }

    /// The exact coefficient, ignoring the prefactor.
    pub fn coeff(&self) -> Option<&Rational> {
        match self {
            MeasureValue::Exact { coeff, .. } => Some(coeff),
            MeasureValue::Real(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            MeasureValue::Exact { coeff, .. } => coeff.is_zero(),
            MeasureValue::Real(x) => *x == 0.0,
        }
    }

    fn times(self, other: MeasureValue) -> MeasureValue {
        match (self, other) {
            (MeasureValue::Exact { coeff: a, prefactor: Prefactor::One }, MeasureValue::Exact { coeff: b, prefactor })
            | (MeasureValue::Exact { coeff: a, prefactor }, MeasureValue::Exact { coeff: b, prefactor: Prefactor::One }) => {
                MeasureValue::Exact { coeff: a * b, prefactor }
            }
            (a, b) => MeasureValue::Real(a.to_f64() * b.to_f64()),
        }
    }
}

fn ln_rational(r: &Rational) -> f64 {
    let ln = |b: &BigInt| -> f64 {
        let bits = b.bits();
        let shift = bits.saturating_sub(60);
        let top: BigInt = b.abs() >> shift;
        top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    };
    ln(r.numer()) - ln(r.denom())
}

/// `(t)_n` by forward product.
pub fn pochhammer(t: &Rational, n: usize) -> Rational {
    let mut acc = rat(1);
    for j in 0..n {
        acc *= t + rat(j as i64);
    }
    acc
}

fn ln_pochhammer_f64(t: f64, n: usize) -> f64 {
    if n < 64 {
        (0..n).map(|j| (t + j as f64).ln()).sum()
    } else {
        lgamma(t + n as f64).expect("t > 0") - lgamma(t).expect("t > 0")
    }
}

/// `M_{z,z′}(λ) = |λ|!/(t)_{|λ|} · Π_b (c(b)+z)(c(b)+z′)/h(b)²`.
pub fn z_measure(lambda: &Partition, zp: &ZParams) -> Result<MeasureValue> {
    zp.validate()?;
    let n = lambda.size();
    match zp {
        ZParams::Rational { z, zp: zq } => {
            let mut num = rat(1);
            let mut den = BigInt::one();
            for (c, h) in contents_and_hooks(lambda) {
                let c = rat(c);
                num *= (&c + z) * (&c + zq);
                den *= BigInt::from(h as u64 * h as u64);
            }
            let t = z * zq;
            let total = num * Rational::from_integer(BigInt::from(factorial(n))) / (pochhammer(&t, n) * Rational::from_integer(den));
            Ok(MeasureValue::exact(total))
        }
        ZParams::Conjugate { .. } => Ok(MeasureValue::Real(z_measure_f64(lambda, zp)?)),
    }
}

/// Floating-point `M_{z,z′}(λ)` in log space; works for both modes.
pub fn z_measure_f64(lambda: &Partition, zp: &ZParams) -> Result<f64> {
    let (z, w) = (zp.z(), zp.zp());
    let t = zp.t();
    let n = lambda.size();
    let mut ln = lgamma(n as f64 + 1.0)? - ln_pochhammer_f64(t, n);
    let mut sign = 1.0;
    for (c, h) in contents_and_hooks(lambda) {
        let f = ((c as f64 + z) * (c as f64 + w)).re;
        if f == 0.0 {
            return Ok(0.0);
        }
        sign *= f.signum();
        ln += f.abs().ln() - 2.0 * (h as f64).ln();
    }
    Ok(sign * ln.exp())
}

/// Product form evaluated directly for real `z`, `z′`, allowing zeros and
/// large non-admissible values; used by limit checks.
pub fn z_measure_real(lambda: &Partition, z: f64, zp: f64) -> f64 {
    let n = lambda.size();
    let t = z * zp;
    let mut v = 1.0;
    for (j, (c, h)) in contents_and_hooks(lambda).into_iter().enumerate() {
        v *= (c as f64 + z) * (c as f64 + zp) / (h as f64 * h as f64) * (j as f64 + 1.0) / (t + j as f64);
    }
    debug_assert_eq!(contents_and_hooks(lambda).len(), n);
    v
}

/// The mixing weight of size `n`; `t` is the negative-binomial shape.
pub fn mixing_weight(n: usize, law: &MixingLaw, t: &Num) -> Result<MeasureValue> {
    law.validate()?;
    match law {
        MixingLaw::Fixed { n: m } => Ok(MeasureValue::exact(rat((n == *m) as i64))),
        MixingLaw::NegativeBinomial { xi } => {
            if !(t.to_f64() > 0.0) {
                return Err(Error::InvalidParameter("t must be positive".into()));
            }
            match (xi, t) {
                (Num::Exact(xi), Num::Exact(t)) => {
                    let coeff = pochhammer(t, n) * num_traits::pow(xi.clone(), n)
                        / Rational::from_integer(BigInt::from(factorial(n)));
                    Ok(MeasureValue::Exact {
                        coeff,
                        prefactor: Prefactor::OneMinusXiPow { xi: xi.clone(), t: t.clone() },
                    })
                }
                _ => {
                    let (x, tf) = (xi.to_f64(), t.to_f64());
                    let ln = tf * (-x).ln_1p() + ln_pochhammer_f64(tf, n) + n as f64 * x.ln()
                        - lgamma(n as f64 + 1.0)?;
                    Ok(MeasureValue::Real(ln.exp()))
                }
            }
        }
        MixingLaw::Poisson { theta } => match theta {
            Num::Exact(th) => Ok(MeasureValue::Exact {
                coeff: num_traits::pow(th.clone(), n) / Rational::from_integer(BigInt::from(factorial(n))),
                prefactor: Prefactor::ExpNeg { theta: th.clone() },
            }),
            Num::Real(th) => {
                Ok(MeasureValue::Real((-th + n as f64 * th.ln() - lgamma(n as f64 + 1.0)?).exp()))
            }
        },
        MixingLaw::GammaScaled { .. } => {
            Err(Error::InvalidParameter("the gamma-scaled law is continuous; use gamma_density".into()))
        }
    }
}

/// Density `s^{t−1} e^{−s} / Γ(t)` of the gamma-scaled law.
pub fn gamma_density(s: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter("t must be positive".into()));
    }
    if s <= 0.0 {
        return Ok(0.0);
    }
    Ok(((t - 1.0) * s.ln() - s - lgamma(t)?).exp())
}

/// Rigorous upper bound on `Σ_{n > N}` of the mixing weights, from the
/// monotone term ratio.
pub fn mixing_tail_bound(big_n: usize, law: &MixingLaw, t: f64) -> Result<f64> {
    law.validate()?;
    let next = big_n as f64 + 1.0;
    let (ratio, first) = match law {
        MixingLaw::Fixed { n } => return Ok(if *n > big_n { 1.0 } else { 0.0 }),
        MixingLaw::NegativeBinomial { xi } => {
            let x = xi.to_f64();
            // Ratio (t + n) ξ / (n + 1) tends to ξ monotonically.
            let r = ((t + next) * x / (next + 1.0)).max(x);
            (r, mixing_weight(big_n + 1, &MixingLaw::NegativeBinomial { xi: Num::Real(x) }, &Num::Real(t))?.to_f64())
        }
        MixingLaw::Poisson { theta } => {
            let th = theta.to_f64();
            (th / (next + 1.0), mixing_weight(big_n + 1, &MixingLaw::Poisson { theta: Num::Real(th) }, &Num::Real(t))?.to_f64())
        }
        MixingLaw::GammaScaled { .. } => {
            return Err(Error::InvalidParameter("the gamma-scaled law is continuous".into()));
        }
    };
    if ratio >= 1.0 {
        return Err(Error::Uncertifiable { tolerance: 0.0, bound: f64::INFINITY });
    }
    Ok(first / (1.0 - ratio))
}

/// The measure family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Z { params: ZParams },
    /// `z = k`, `z′ = l`: RSK image of uniform `k × l` matrices.
    IntegerKl { k: usize, l: usize },
    /// `z = k`, `z′ → ∞`: RSK image of uniform words over `k` letters.
    KInfinity { k: usize },
    /// `z, z′ → ∞`: the Plancherel measure.
    Plancherel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub family: Family,
    pub mixing: MixingLaw,
}

impl MeasureSpec {
    pub fn new(family: Family, mixing: MixingLaw) -> Result<Self> {
        let s = Self { family, mixing };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.mixing.validate()?;
        match &self.family {
            Family::Z { params } => params.validate()?,
            Family::IntegerKl { k, l } => {
                if *k == 0 || *l == 0 {
                    return Err(Error::InvalidParameter("k and l must be positive".into()));
                }
            }
            Family::KInfinity { k } => {
                if *k == 0 {
                    return Err(Error::InvalidParameter("k must be positive".into()));
                }
            }
            Family::Plancherel => {}
        }
        let ok = match (&self.family, &self.mixing) {
            (_, MixingLaw::Fixed { .. }) => true,
            (Family::Z { .. } | Family::IntegerKl { .. }, MixingLaw::NegativeBinomial { .. } | MixingLaw::GammaScaled { .. }) => true,
            (Family::KInfinity { .. } | Family::Plancherel, MixingLaw::Poisson { .. }) => true,
            _ => false,
        };
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "{:?} cannot be mixed with {:?}",
                self.family, self.mixing
            )));
        }
        Ok(())
    }

    /// Negative-binomial shape `t = z z′` where it applies.
    pub fn t(&self) -> Num {
        match &self.family {
            Family::Z { params } => match params.t_exact() {
                Some(t) => Num::Exact(t),
                None => Num::Real(params.t()),
            },
            Family::IntegerKl { k, l } => Num::Exact(rat((k * l) as i64)),
            _ => Num::Real(1.0),
        }
    }
}

/// The fixed-size measure of `λ` within `family`.
pub fn fixed_size_measure(lambda: &Partition, family: &Family) -> Result<MeasureValue> {
    let n = lambda.size();
    match family {
        Family::Z { params } => z_measure(lambda, params),
        Family::IntegerKl { k, l } => Ok(MeasureValue::exact(degenerate_measure(
            lambda,
            &DegenerateFamily::IntegerKl { n, k: *k, l: *l },
        )?)),
        Family::KInfinity { k } => {
            Ok(MeasureValue::exact(degenerate_measure(lambda, &DegenerateFamily::KInfinity { n, k: *k })?))
        }
        Family::Plancherel => Ok(MeasureValue::exact(degenerate_measure(lambda, &DegenerateFamily::Plancherel { n })?)),
    }
}

/// `M(λ) · weight(|λ|)`.
pub fn mixed_measure(lambda: &Partition, spec: &MeasureSpec) -> Result<MeasureValue> {
    spec.validate()?;
    if let MixingLaw::Fixed { n } = spec.mixing {
        if lambda.size() != n {
            return Err(Error::SizeMismatch { expected: n, actual: lambda.size() });
        }
    }
    // Real-mode z-measures use the product form (1−ξ)^t ξ^n Π(c+z)(c+z′)/h²,
    // which avoids (t)_n cancelling against n!.
    if let (Family::Z { params: params @ ZParams::Conjugate { .. } }, MixingLaw::NegativeBinomial { xi }) =
        (&spec.family, &spec.mixing)
    {
        let x = xi.to_f64();
        let (z, w) = (params.z(), params.zp());
        let mut ln = params.t() * (-x).ln_1p() + lambda.size() as f64 * x.ln();
        for (c, h) in contents_and_hooks(lambda) {
            ln += ((c as f64 + z) * (c as f64 + w)).re.ln() - 2.0 * (h as f64).ln();
        }
        return Ok(MeasureValue::Real(ln.exp()));
    }
    let m = fixed_size_measure(lambda, &spec.family)?;
    let w = mixing_weight(lambda.size(), &spec.mixing, &spec.t())?;
    Ok(m.times(w))
}

fn cauchy_det_squared_exact(f: &FrobeniusCoords) -> Rational {
    let d = f.d();
    let mut m: Vec<Vec<Rational>> = (0..d)
        .map(|i| (0..d).map(|j| Rational::new(BigInt::one(), BigInt::from(f.p()[i] + f.q()[j] + 1))).collect())
        .collect();
    let mut det = rat(1);
    for col in 0..d {
        let Some(piv) = (col..d).find(|&r| !m[r][col].is_zero()) else { return rat(0) };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col].clone();
        for r in col + 1..d {
            let factor = &m[r][col] / &m[col][col];
            for c in col..d {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    &det * &det
}

fn cauchy_det_squared_f64(f: &FrobeniusCoords) -> f64 {
    let d = f.d();
    let m: Vec<Vec<f64>> =
        (0..d).map(|i| (0..d).map(|j| 1.0 / (f.p()[i] + f.q()[j] + 1) as f64).collect()).collect();
    let det = crate::kernels::determinant(m);
    det * det
}

/// The Frobenius-coordinate form of the mixed z-measure:
/// `(1 − ξ)^t ξ^{Σ(p+q+1)} t^d Π (z+1)_p (z′+1)_p (1−z)_q (1−z′)_q / (p!q!)² · det²[1/(p_i+q_j+1)]`.
pub fn mixed_measure_frobenius(f: &FrobeniusCoords, spec: &MeasureSpec) -> Result<MeasureValue> {
    spec.validate()?;
    let MixingLaw::NegativeBinomial { xi } = &spec.mixing else {
        return Err(Error::InvalidParameter("the Frobenius form needs negative-binomial mixing".into()));
    };
    let params = match &spec.family {
        Family::Z { params } => params.clone(),
        Family::IntegerKl { k, l } => ZParams::from_ints(*k as i64, *l as i64)?,
        _ => return Err(Error::InvalidParameter("the Frobenius form applies to z-families".into())),
    };
    let weight: usize = f.p().iter().zip(f.q()).map(|(p, q)| p + q + 1).sum();
    match (&params, xi) {
        (ZParams::Rational { z, zp }, Num::Exact(x)) => {
            let t = z * zp;
            let one = rat(1);
            let mut coeff = num_traits::pow(x.clone(), weight) * num_traits::pow(t.clone(), f.d());
            for (&p, &q) in f.p().iter().zip(f.q()) {
                let num = pochhammer(&(z + &one), p)
                    * pochhammer(&(zp + &one), p)
                    * pochhammer(&(&one - z), q)
                    * pochhammer(&(&one - zp), q);
                let den = BigInt::from(factorial(p)) * BigInt::from(factorial(q));
                coeff *= num / Rational::from_integer(&den * &den);
            }
            coeff *= cauchy_det_squared_exact(f);
            Ok(MeasureValue::Exact { coeff, prefactor: Prefactor::OneMinusXiPow { xi: x.clone(), t } })
        }
        _ => {
            let x = xi.to_f64();
            let (z, w) = (params.z(), params.zp());
            let t = params.t();
            let poch = |a: Complex64, n: usize| (0..n).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (a + j as f64));
            let mut v = (t * (-x).ln_1p()).exp() * x.powi(weight as i32) * t.powi(f.d() as i32);
            for (&p, &q) in f.p().iter().zip(f.q()) {
                let num = poch(z + 1.0, p) * poch(w + 1.0, p) * poch(1.0 - z, q) * poch(1.0 - w, q);
                let den = (lgamma(p as f64 + 1.0)? + lgamma(q as f64 + 1.0)?).exp();
                v *= num.re / (den * den);
            }
            Ok(MeasureValue::Real(v * cauchy_det_squared_f64(f)))
        }
    }
}

/// Degenerate fixed-size families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum DegenerateFamily {
    /// `ssyt(λ,k) ssyt(λ,l) / C(kl + n − 1, n)`.
    IntegerKl { n: usize, k: usize, l: usize },
    /// `k^{−n} ssyt(λ,k) dim λ`.
    KInfinity { n: usize, k: usize },
    /// `dim²λ / n!`.
    Plancherel { n: usize },
}

impl DegenerateFamily {
    pub fn n(&self) -> usize {
        match *self {
            DegenerateFamily::IntegerKl { n, .. }
            | DegenerateFamily::KInfinity { n, .. }
            | DegenerateFamily::Plancherel { n } => n,
        }
    }
}

pub fn degenerate_measure(lambda: &Partition, family: &DegenerateFamily) -> Result<Rational> {
    let n = family.n();
    if lambda.size() != n {
        return Err(Error::SizeMismatch { expected: n, actual: lambda.size() });
    }
    let big = |b: BigUint| Rational::from_integer(BigInt::from(b));
    match *family {
        DegenerateFamily::IntegerKl { k, l, .. } => {
            if k == 0 || l == 0 {
                return Err(Error::InvalidParameter("k and l must be positive".into()));
            }
            Ok(big(count_ssyt(lambda, k) * count_ssyt(lambda, l)) / big(matrix_count(k, l, n)))
        }
        DegenerateFamily::KInfinity { k, .. } => {
            if k == 0 {
                return Err(Error::InvalidParameter("k must be positive".into()));
            }
            Ok(big(count_ssyt(lambda, k) * dim(lambda)) / big(num_traits::pow(BigUint::from(k), n)))
        }
        DegenerateFamily::Plancherel { .. } => {
            let d = dim(lambda);
            Ok(big(&d * &d) / big(factorial(n)))
        }
    }
}

/// The whole distribution of a degenerate family in canonical order.
pub fn degenerate_distribution(family: &DegenerateFamily) -> Result<Vec<(Partition, Rational)>> {
    enumerate_partitions(family.n())?
        .into_iter()
        .map(|l| degenerate_measure(&l, family).map(|m| (l, m)))
        .collect()
}

/// The z-measure on every partition of `n`.
pub fn z_measure_distribution(n: usize, zp: &ZParams) -> Result<Vec<(Partition, MeasureValue)>> {
    enumerate_partitions(n)?.into_iter().map(|l| z_measure(&l, zp).map(|m| (l, m))).collect()
}

/// Distance from `M_{k,z′}(λ)` to its `z′ → ∞` limit along `zp_sequence`.
pub fn limit_check_z_to_degenerate(lambda: &Partition, n: usize, k: usize, zp_sequence: &[f64]) -> Result<Vec<f64>> {
    let target = to_f64(&degenerate_measure(lambda, &DegenerateFamily::KInfinity { n, k })?);
    for &zp in zp_sequence {
        if !(zp > k as f64 - 1.0) {
            return Err(Error::InadmissibleParameters(format!("z' = {zp} must exceed k - 1 = {}", k - 1)));
        }
    }
    Ok(zp_sequence.iter().map(|&zp| (z_measure_real(lambda, k as f64, zp) - target).abs()).collect())
}

/// Exact `Σ_{n ≤ N}` of the negative-binomial coefficients `(t)_n ξ^n / n!`.
pub fn negative_binomial_partial_sum(big_n: usize, t: &Rational, xi: &Rational) -> Rational {
    let mut term = rat(1);
    let mut sum = rat(1);
    for n in 0..big_n {
        term = term * (t + rat(n as i64)) * xi / rat(n as i64 + 1);
        sum += &term;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{frobenius, transpose};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn zp(a: (i64, i64), b: (i64, i64)) -> ZParams {
        ZParams::rational(q(a.0, a.1), q(b.0, b.1)).unwrap()
    }

    fn exact(v: MeasureValue) -> Rational {
        v.as_rational().cloned().expect("exact value")
    }

    #[test]
    fn admissibility() {
        assert!(ZParams::rational(q(1, 2), q(1, 2)).is_ok());
        assert!(ZParams::rational(q(-3, 2), q(-7, 4)).is_ok());
        assert!(matches!(ZParams::rational(q(1, 2), q(3, 2)), Err(Error::InadmissibleParameters(_))));
        assert!(ZParams::rational(q(0, 1), q(1, 2)).is_err());
        let d = ZParams::from_ints(2, 5).unwrap();
        assert_eq!(d.degenerate_pair(), Some((2, q(5, 1))));
        let d = ZParams::rational(q(3, 1), q(5, 2)).unwrap();
        assert_eq!(d.degenerate_pair(), Some((3, q(5, 2))));
        assert!(ZParams::rational(q(3, 1), q(3, 2)).is_err());
        assert!(ZParams::conjugate(Complex64::new(0.5, 1.0)).is_ok());
        assert!(ZParams::conjugate(Complex64::new(2.0, 0.0)).is_err());
    }

    #[test]
    fn z_measure_examples() {
        for p in [zp((1, 2), (1, 2)), zp((1, 3), (2, 3)), ZParams::from_ints(1, 2).unwrap()] {
            assert_eq!(exact(z_measure(&part(&[1]), &p).unwrap()), q(1, 1));
        }
        let conj = ZParams::conjugate(Complex64::new(0.3, 2.0)).unwrap();
        assert!((z_measure(&part(&[1]), &conj).unwrap().to_f64() - 1.0).abs() < 1e-14);

        let d = ZParams::from_ints(1, 2).unwrap();
        assert_eq!(exact(z_measure(&part(&[2]), &d).unwrap()), q(1, 1));
        assert_eq!(exact(z_measure(&part(&[1, 1]), &d).unwrap()), q(0, 1));

        let h = zp((1, 2), (1, 2));
        assert_eq!(exact(z_measure(&part(&[2]), &h).unwrap()), q(9, 10));
        assert_eq!(exact(z_measure(&part(&[1, 1]), &h).unwrap()), q(1, 10));
    }

    #[test]
    fn exact_normalization() {
        for p in [zp((1, 2), (1, 2)), zp((1, 3), (2, 3)), zp((3, 2), (5, 4))] {
            for n in 0..=12 {
                let total: Rational = z_measure_distribution(n, &p).unwrap().into_iter().map(|(_, v)| exact(v)).sum();
                assert_eq!(total, q(1, 1), "{p:?} n={n}");
            }
        }
    }

    #[test]
    fn conjugate_mode_normalizes() {
        let p = ZParams::conjugate(Complex64::new(0.4, 1.7)).unwrap();
        for n in [3, 8] {
            let total: f64 = z_measure_distribution(n, &p).unwrap().iter().map(|(_, v)| v.to_f64()).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn positivity_and_degenerate_support() {
        let p = zp((-3, 2), (-7, 4));
        for l in enumerate_partitions(7).unwrap() {
            assert!(exact(z_measure(&l, &p).unwrap()).is_positive());
        }
        let d = ZParams::from_ints(2, 3).unwrap();
        for l in enumerate_partitions(6).unwrap() {
            let v = exact(z_measure(&l, &d).unwrap());
            assert!(!v.is_negative());
            assert_eq!(v.is_zero(), l.length() > 2, "{l}");
        }
    }

    #[test]
    fn parameter_symmetries() {
        let (a, b) = (q(1, 3), q(2, 3));
        for l in enumerate_partitions(6).unwrap() {
            let m = exact(z_measure(&l, &ZParams::rational(a.clone(), b.clone()).unwrap()).unwrap());
            let swapped = exact(z_measure(&l, &ZParams::rational(b.clone(), a.clone()).unwrap()).unwrap());
            assert_eq!(m, swapped);
            let neg = ZParams::rational(-a.clone(), -b.clone()).unwrap();
            assert_eq!(exact(z_measure(&transpose(&l), &neg).unwrap()), m, "{l}");
        }
    }

    #[test]
    fn degenerate_pair_matches_integer_family() {
        for n in 0..=6 {
            for l in enumerate_partitions(n).unwrap() {
                let via_z = exact(z_measure(&l, &ZParams::from_ints(2, 3).unwrap()).unwrap());
                let via_counts = degenerate_measure(&l, &DegenerateFamily::IntegerKl { n, k: 2, l: 3 }).unwrap();
                assert_eq!(via_z, via_counts, "{l}");
            }
        }
    }

    #[test]
    fn mixing_weight_examples() {
        let nb = MixingLaw::NegativeBinomial { xi: Num::Exact(q(1, 2)) };
        let w0 = mixing_weight(0, &nb, &Num::Exact(q(1, 4))).unwrap();
        assert_eq!(w0.coeff().unwrap(), &q(1, 1));
        assert!((w0.to_f64() - 0.5f64.powf(0.25)).abs() < 1e-15);
        let w2 = mixing_weight(2, &nb, &Num::Exact(q(1, 1))).unwrap();
        assert!((w2.to_f64() - 1.0 / 8.0).abs() < 1e-15);
        let p = MixingLaw::Poisson { theta: Num::Exact(q(3, 1)) };
        assert!((mixing_weight(0, &p, &Num::Real(1.0)).unwrap().to_f64() - (-3f64).exp()).abs() < 1e-16);
        let real = mixing_weight(2, &MixingLaw::NegativeBinomial { xi: Num::Real(0.5) }, &Num::Real(1.0)).unwrap();
        assert!((real.to_f64() - 0.125).abs() < 1e-15);
        assert!(mixing_weight(1, &MixingLaw::NegativeBinomial { xi: Num::Real(1.2) }, &Num::Real(1.0)).is_err());
    }

    fn h_spec(xi: Rational) -> MeasureSpec {
        MeasureSpec::new(
            Family::Z { params: zp((1, 2), (1, 2)) },
            MixingLaw::NegativeBinomial { xi: Num::Exact(xi) },
        )
        .unwrap()
    }

    #[test]
    fn mixed_measure_examples() {
        let s = h_spec(q(1, 2));
        let empty = mixed_measure(&Partition::empty(), &s).unwrap();
        assert_eq!(empty.coeff().unwrap(), &q(1, 1));
        assert!((empty.to_f64() - 0.5f64.powf(0.25)).abs() < 1e-15);
        let one = mixed_measure(&part(&[1]), &s).unwrap();
        assert!((one.to_f64() - 0.5f64.powf(0.25) * 0.25 * 0.5).abs() < 1e-15);

        let pl = MeasureSpec::new(Family::Plancherel, MixingLaw::Poisson { theta: Num::Exact(q(1, 1)) }).unwrap();
        let v = mixed_measure(&part(&[2, 1]), &pl).unwrap();
        assert_eq!(v.coeff().unwrap(), &q(4, 36));
        assert!((v.to_f64() - (-1f64).exp() / 6.0 * 4.0 / 6.0).abs() < 1e-15);

        let fixed = MeasureSpec::new(Family::Plancherel, MixingLaw::Fixed { n: 3 }).unwrap();
        assert!(matches!(mixed_measure(&part(&[1]), &fixed), Err(Error::SizeMismatch { .. })));
        assert!(MeasureSpec::new(Family::Plancherel, MixingLaw::NegativeBinomial { xi: Num::Real(0.5) }).is_err());
    }

    #[test]
    fn frobenius_form_examples() {
        let s = h_spec(q(1, 2));
        let empty = FrobeniusCoords::new(vec![], vec![]).unwrap();
        assert_eq!(mixed_measure_frobenius(&empty, &s).unwrap(), mixed_measure(&Partition::empty(), &s).unwrap());
        let hook = FrobeniusCoords::new(vec![0], vec![0]).unwrap();
        assert_eq!(mixed_measure_frobenius(&hook, &s).unwrap(), mixed_measure(&part(&[1]), &s).unwrap());
        let sq = FrobeniusCoords::new(vec![1, 0], vec![1, 0]).unwrap();
        assert_eq!(mixed_measure_frobenius(&sq, &s).unwrap(), mixed_measure(&part(&[2, 2]), &s).unwrap());
    }

    #[test]
    fn frobenius_form_agrees_everywhere() {
        let specs = [
            h_spec(q(2, 7)),
            MeasureSpec::new(Family::Z { params: zp((3, 2), (5, 4)) }, MixingLaw::NegativeBinomial { xi: Num::Exact(q(1, 3)) })
                .unwrap(),
            MeasureSpec::new(Family::IntegerKl { k: 2, l: 3 }, MixingLaw::NegativeBinomial { xi: Num::Exact(q(2, 5)) })
                .unwrap(),
        ];
        for s in &specs {
            for n in 0..=10 {
                for l in enumerate_partitions(n).unwrap() {
                    let a = mixed_measure(&l, s).unwrap();
                    let b = mixed_measure_frobenius(&frobenius(&l), s).unwrap();
                    assert_eq!(a, b, "{l}");
                }
            }
        }
        let conj = MeasureSpec::new(
            Family::Z { params: ZParams::conjugate(Complex64::new(0.2, 0.9)).unwrap() },
            MixingLaw::NegativeBinomial { xi: Num::Real(0.35) },
        )
        .unwrap();
        for n in 0..=10 {
            for l in enumerate_partitions(n).unwrap() {
                let a = mixed_measure(&l, &conj).unwrap().to_f64();
                let b = mixed_measure_frobenius(&frobenius(&l), &conj).unwrap().to_f64();
                assert!((a - b).abs() <= 1e-12 * a.abs(), "{l}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn mixture_normalization_with_tail() {
        let xi = q(3, 10);
        let params = zp((1, 2), (1, 2));
        let t = params.t_exact().unwrap();
        let s = h_spec(xi.clone());
        let big_n = 40;
        let mut coeff_sum = rat(0);
        for n in 0..=big_n {
            for l in enumerate_partitions(n).unwrap() {
                if n <= 12 {
                    coeff_sum += mixed_measure(&l, &s).unwrap().coeff().unwrap().clone();
                }
            }
        }
        // For n ≤ 12 the sum over shapes reproduces the weight coefficients exactly.
        assert_eq!(coeff_sum, negative_binomial_partial_sum(12, &t, &xi));
        let mass = Prefactor::OneMinusXiPow { xi: xi.clone(), t: t.clone() }.to_f64()
            * to_f64(&negative_binomial_partial_sum(big_n, &t, &xi));
        let tail = mixing_tail_bound(big_n, &s.mixing, to_f64(&t)).unwrap();
        assert!(mass <= 1.0 && mass >= 1.0 - tail - 1e-15);
        assert!(tail < 1e-20);
    }

    #[test]
    fn degenerate_examples() {
        let d = degenerate_distribution(&DegenerateFamily::Plancherel { n: 2 }).unwrap();
        assert_eq!(d, vec![(part(&[2]), q(1, 2)), (part(&[1, 1]), q(1, 2))]);
        for n in 1..=5 {
            for (l, m) in degenerate_distribution(&DegenerateFamily::KInfinity { n, k: 1 }).unwrap() {
                assert_eq!(m, q((l.length() == 1) as i64, 1));
            }
        }
        let kl = degenerate_distribution(&DegenerateFamily::IntegerKl { n: 2, k: 2, l: 2 }).unwrap();
        assert_eq!(kl, vec![(part(&[2]), q(9, 10)), (part(&[1, 1]), q(1, 10))]);
        assert!(degenerate_measure(&part(&[2]), &DegenerateFamily::Plancherel { n: 3 }).is_err());
    }

    #[test]
    fn limit_examples() {
        // With k = 1 every one-row diagram already has mass 1 for all z'.
        let e = limit_check_z_to_degenerate(&part(&[2]), 2, 1, &[10.0, 100.0, 1000.0]).unwrap();
        assert!(e.iter().all(|&x| x < 1e-14));
        let e = limit_check_z_to_degenerate(&part(&[2]), 2, 2, &[10.0, 100.0, 1000.0]).unwrap();
        assert!(e[0] > e[1] && e[1] > e[2] && e[2] < 1e-2);
        let e = limit_check_z_to_degenerate(&part(&[2, 1]), 3, 2, &[10.0, 100.0, 1000.0]).unwrap();
        assert!(e[0] > e[1] && e[1] > e[2] && e[2] < 1e-2);
        let e = limit_check_z_to_degenerate(&part(&[1]), 1, 1, &[10.0, 100.0]).unwrap();
        assert!(e.iter().all(|&x| x < 1e-15));
        // z = 1 keeps M((1,1)) at zero exactly, so the error is zero too.
        let e = limit_check_z_to_degenerate(&part(&[1, 1]), 2, 1, &[10.0, 100.0, 1000.0]).unwrap();
        assert!(e.iter().all(|&x| x == 0.0));
        let e = limit_check_z_to_degenerate(&part(&[2, 1]), 3, 2, &[10.0, 100.0, 1000.0]).unwrap();
        assert!(e[0] > e[1] && e[1] > e[2] && e[2] < 1e-3);
    }

    proptest! {
        #[test]
        fn prop_normalization(num in 1i64..9, den in 2i64..10, num2 in 1i64..9, n in 0usize..9) {
            // Both parameters in (0, 1).
            prop_assume!(num < den && num2 < den);
            let p = ZParams::rational(q(num, den), q(num2, den)).unwrap();
            let total: Rational = z_measure_distribution(n, &p).unwrap().into_iter().map(|(_, v)| exact(v)).sum();
            prop_assert_eq!(total, q(1, 1));
        }
    }
}
