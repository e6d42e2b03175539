//! Seeded sampling of mixing laws and partitions, RSK samplers for the
//! degenerate families, and edge statistics of sampled first rows.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use serde::{Deserialize, Serialize};

use crate::measures::{fixed_size_measure, Family, MeasureSpec, MixingLaw, Num};
use crate::partitions::{enumerate_partitions, Partition};
use crate::rsk::rsk_shape;
use crate::{Error, Result};

/// Largest `n` for inverse-CDF sampling over the enumerated measure.
pub const MAX_EXACT_N: usize = 30;
/// Largest permutation size for the Plancherel sampler.
pub const MAX_PLANCHEREL_N: usize = 10_000;
/// Largest size reachable by the RSK samplers.
pub const MAX_RSK_N: usize = 1_000_000;

/// A seed from which every draw's generator is derived: draw `i` uses the
/// ChaCha8 stream `i` of `seed`, so batches are reproducible in any order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSource {
    pub seed: u64,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

/// Draws `n` from a discrete mixing law by inverse CDF.
pub fn sample_size<R: Rng + ?Sized>(law: &MixingLaw, t: f64, rng: &mut R) -> Result<usize> {
    law.validate()?;
    let (mut p, ratio): (f64, Box<dyn Fn(usize) -> f64>) = match law {
        MixingLaw::Fixed { n } => return Ok(*n),
        MixingLaw::NegativeBinomial { xi } => {
            if !(t > 0.0) {
                return Err(Error::InvalidParameter("t must be positive".into()));
            }
            let x = xi.to_f64();
            ((t * (-x).ln_1p()).exp(), Box::new(move |n| (t + n as f64) * x / (n as f64 + 1.0)))
        }
        MixingLaw::Poisson { theta } => {
            let th = theta.to_f64();
            ((-th).exp(), Box::new(move |n| th / (n as f64 + 1.0)))
        }
        MixingLaw::GammaScaled { .. } => {
            return Err(Error::InvalidParameter("the gamma-scaled law is continuous; use sample_gamma_scaled".into()))
        }
    };
    if p < 1e-300 {
        // The first atom underflows; fall back to a direct Poisson or gamma–Poisson draw.
        return match law {
            MixingLaw::Poisson { theta } => {
                let d = Poisson::new(theta.to_f64()).map_err(|e| Error::InvalidParameter(e.to_string()))?;
                Ok(d.sample(rng) as usize)
            }
            MixingLaw::NegativeBinomial { xi } => {
                let x = xi.to_f64();
                let g = Gamma::new(t, x / (1.0 - x)).map_err(|e| Error::InvalidParameter(e.to_string()))?;
                let lam: f64 = g.sample(rng);
                if lam <= 0.0 {
                    return Ok(0);
                }
                let d = Poisson::new(lam).map_err(|e| Error::InvalidParameter(e.to_string()))?;
                Ok(d.sample(rng) as usize)
            }
            _ => unreachable!("handled above"),
        };
    }
    let u: f64 = rng.random();
    let mut cum = p;
    let mut n = 0usize;
    while cum < u && 1.0 - cum > 1e-15 {
        p *= ratio(n);
        n += 1;
        cum += p;
    }
    Ok(n)
}

/// Draws `s` from the `Gamma(t, 1)` law.
pub fn sample_gamma_scaled<R: Rng + ?Sized>(t: f64, rng: &mut R) -> Result<f64> {
    let g = Gamma::new(t, 1.0).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(g.sample(rng))
}

/// Inverse-CDF sampler over the enumerated fixed-size measure.
#[derive(Debug, Clone)]
pub struct ExactSampler {
    partitions: Vec<Partition>,
    cumulative: Vec<f64>,
}

impl ExactSampler {
    pub fn new(n: usize, family: &Family) -> Result<Self> {
        if n > MAX_EXACT_N {
            return Err(Error::CapExceeded { requested: n, cap: MAX_EXACT_N });
        }
        let partitions = enumerate_partitions(n)?;
        let mut cumulative = Vec::with_capacity(partitions.len());
        let mut acc = 0.0;
        for l in &partitions {
            let m = fixed_size_measure(l, family)?.to_f64();
            if m < -1e-15 {
                return Err(Error::InadmissibleParameters(format!("negative mass {m} at {l:?}")));
            }
            acc += m.max(0.0);
            cumulative.push(acc);
        }
        if !(acc > 0.0) {
            return Err(Error::InadmissibleParameters("the measure has no mass".into()));
        }
        for c in &mut cumulative {
            *c /= acc;
        }
        Ok(Self { partitions, cumulative })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Partition {
        let u: f64 = rng.random();
        let i = self.cumulative.partition_point(|&c| c <= u).min(self.partitions.len() - 1);
        self.partitions[i].clone()
    }
}

pub fn sample_partition_exact<R: Rng + ?Sized>(n: usize, family: &Family, rng: &mut R) -> Result<Partition> {
    Ok(ExactSampler::new(n, family)?.sample(rng))
}

fn check_rsk_size(n: usize) -> Result<()> {
    if n > MAX_RSK_N {
        return Err(Error::CapExceeded { requested: n, cap: MAX_RSK_N });
    }
    Ok(())
}

/// Shape of RSK applied to a uniform `k × l` matrix with entry sum `n`.
pub fn sample_mkl_rsk<R: Rng + ?Sized>(n: usize, k: usize, l: usize, rng: &mut R) -> Result<Partition> {
    if k == 0 || l == 0 {
        return Err(Error::InvalidParameter("k and l must be positive".into()));
    }
    check_rsk_size(n)?;
    let cells = k * l;
    // A uniform composition of n into k·l parts: bars at a uniform
    // (cells − 1)-subset of the n + cells − 1 stars-and-bars slots.
    let mut bars = rand::seq::index::sample(rng, n + cells - 1, cells - 1).into_vec();
    bars.sort_unstable();
    let mut counts = Vec::with_capacity(cells);
    let mut prev = 0usize;
    for (i, &b) in bars.iter().enumerate() {
        let start = if i == 0 { 0 } else { prev + 1 };
        counts.push(b - start);
        prev = b;
    }
    let start = if bars.is_empty() { 0 } else { prev + 1 };
    counts.push(n + cells - 1 - start);
    // Row-major reading of the two-line array keeps only the column letters.
    let letters = counts.iter().enumerate().flat_map(|(c, &m)| std::iter::repeat_n(c % l + 1, m));
    Ok(rsk_shape(letters))
}

/// Shape of RSK applied to a uniform word of length `n` over `k` letters.
pub fn sample_word_rsk<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Partition> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    check_rsk_size(n)?;
    Ok(rsk_shape((0..n).map(|_| rng.random_range(1..=k))))
}

/// Shape of RSK applied to a uniform permutation of size `n`.
pub fn sample_plancherel_rsk<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Partition> {
    if n > MAX_PLANCHEREL_N {
        return Err(Error::CapExceeded { requested: n, cap: MAX_PLANCHEREL_N });
    }
    let mut sigma: Vec<usize> = (1..=n).collect();
    sigma.shuffle(rng);
    Ok(rsk_shape(sigma))
}

/// What a batch draws from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "sampler", rename_all = "kebab-case")]
pub enum SamplerSpec {
    /// The fixed-size measure by inverse CDF, `n ≤ 30`.
    Exact { family: Family, n: usize },
    /// Uniform matrices through RSK.
    MklRsk { n: usize, k: usize, l: usize },
    /// Uniform words through RSK.
    WordRsk { n: usize, k: usize },
    /// Uniform permutations through RSK.
    PlancherelRsk { n: usize },
    /// Size from the mixing law, then the matching fixed-size sampler.
    Mixed { spec: MeasureSpec },
}

impl SamplerSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            SamplerSpec::Exact { n, .. } if *n > MAX_EXACT_N => Err(Error::CapExceeded { requested: *n, cap: MAX_EXACT_N }),
            SamplerSpec::MklRsk { k, l, .. } if *k == 0 || *l == 0 => {
                Err(Error::InvalidParameter("k and l must be positive".into()))
            }
            SamplerSpec::WordRsk { k: 0, .. } => Err(Error::InvalidParameter("k must be positive".into())),
            SamplerSpec::PlancherelRsk { n } if *n > MAX_PLANCHEREL_N => {
                Err(Error::CapExceeded { requested: *n, cap: MAX_PLANCHEREL_N })
            }
            SamplerSpec::Mixed { spec } => {
                spec.validate()?;
                if matches!(spec.mixing, MixingLaw::GammaScaled { .. }) {
                    return Err(Error::InvalidParameter("the gamma-scaled law does not produce diagrams".into()));
                }
                Ok(())
            }
            SamplerSpec::Exact { family, .. } => MeasureSpec::new(family.clone(), MixingLaw::Fixed { n: 0 }).map(|_| ()),
            _ => Ok(()),
        }
    }
}

fn draw_fixed<R: Rng + ?Sized>(family: &Family, n: usize, rng: &mut R) -> Result<Partition> {
    match family {
        Family::IntegerKl { k, l } => sample_mkl_rsk(n, *k, *l, rng),
        Family::KInfinity { k } => sample_word_rsk(n, *k, rng),
        Family::Plancherel => sample_plancherel_rsk(n, rng),
        Family::Z { .. } => sample_partition_exact(n, family, rng),
    }
}

/// One draw with the generator of index `index`.
pub fn draw(spec: &SamplerSpec, source: &RandomSource, index: u64) -> Result<Partition> {
    let mut rng = source.stream(index);
    match spec {
        SamplerSpec::Exact { family, n } => sample_partition_exact(*n, family, &mut rng),
        SamplerSpec::MklRsk { n, k, l } => sample_mkl_rsk(*n, *k, *l, &mut rng),
        SamplerSpec::WordRsk { n, k } => sample_word_rsk(*n, *k, &mut rng),
        SamplerSpec::PlancherelRsk { n } => sample_plancherel_rsk(*n, &mut rng),
        SamplerSpec::Mixed { spec } => {
            let n = sample_size(&spec.mixing, spec.t().to_f64(), &mut rng)?;
            draw_fixed(&spec.family, n, &mut rng)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub spec: SamplerSpec,
    pub seed: u64,
    pub draws: Vec<Partition>,
}

/// One JSON line of a batch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub seed: u64,
    pub index: u64,
    pub parts: Vec<usize>,
    pub lambda1: usize,
    pub lambda2: usize,
    pub diagonal: usize,
    pub size: usize,
}

impl SampleBatch {
    pub fn records(&self) -> Vec<SampleRecord> {
        self.draws
            .iter()
            .enumerate()
            .map(|(i, l)| SampleRecord {
                seed: self.seed,
                index: i as u64,
                parts: l.parts().to_vec(),
                lambda1: l.row(1),
                lambda2: l.row(2),
                diagonal: l.diagonal(),
                size: l.size(),
            })
            .collect()
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in self.records() {
            out.push_str(&serde_json::to_string(&r).expect("records serialize"));
            out.push('\n');
        }
        out
    }

    pub fn first_rows(&self) -> Vec<usize> {
        self.draws.iter().map(|l| l.row(1)).collect()
    }
}

/// Draws `count` diagrams; work is split over threads by index, which leaves
/// the output independent of scheduling.
pub fn generate_batch(spec: &SamplerSpec, seed: u64, count: usize) -> Result<SampleBatch> {
    spec.validate()?;
    let source = RandomSource::new(seed);
    if let SamplerSpec::Exact { family, n } = spec {
        let sampler = ExactSampler::new(*n, family)?;
        let draws = (0..count as u64).map(|i| sampler.sample(&mut source.stream(i))).collect();
        return Ok(SampleBatch { spec: spec.clone(), seed, draws });
    }
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(count.max(1));
    let chunk = count.div_ceil(threads.max(1)).max(1);
    let mut draws: Vec<Partition> = Vec::with_capacity(count);
    std::thread::scope(|scope| -> Result<()> {
        let handles: Vec<_> = (0..count)
            .step_by(chunk)
            .map(|start| {
                let end = (start + chunk).min(count);
                scope.spawn(move || (start..end).map(|i| draw(spec, &source, i as u64)).collect::<Result<Vec<_>>>())
            })
            .collect();
        for h in handles {
            draws.extend(h.join().expect("sampler thread panicked")?);
        }
        Ok(())
    })?;
    Ok(SampleBatch { spec: spec.clone(), seed, draws })
}

/// Centring and scaling applied to `λ₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scaling", rename_all = "kebab-case")]
pub enum EdgeScaling {
    /// `(λ₁ − 2√n)/n^{1/6}`.
    PlancherelEdge { n: f64 },
    /// `(λ₁ − θ/k)/√(2θ/k)`.
    CharlierEdge { theta: f64, k: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeSummary {
    pub scaled: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
    pub median: f64,
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) }
}

pub fn edge_statistics(batch: &SampleBatch, scaling: EdgeScaling) -> Result<EdgeSummary> {
    if batch.draws.is_empty() {
        return Err(Error::EmptyInput);
    }
    let f: Box<dyn Fn(f64) -> f64> = match scaling {
        EdgeScaling::PlancherelEdge { n } => Box::new(move |l| (l - 2.0 * n.sqrt()) / n.powf(1.0 / 6.0)),
        EdgeScaling::CharlierEdge { theta, k } => {
            let c = theta / k as f64;
            Box::new(move |l| (l - c) / (2.0 * c).sqrt())
        }
    };
    let scaled: Vec<f64> = batch.first_rows().iter().map(|&l| f(l as f64)).collect();
    let n = scaled.len() as f64;
    let mean = scaled.iter().sum::<f64>() / n;
    let variance = if scaled.len() > 1 {
        scaled.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let median = median(&scaled);
    Ok(EdgeSummary { scaled, mean, variance, median })
}

/// Pearson statistic and upper-tail p-value for observed counts against
/// probabilities; cells with zero probability must be empty.
pub fn chi_square_test(observed: &[u64], probs: &[f64]) -> Result<(f64, f64)> {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    if observed.len() != probs.len() || observed.is_empty() {
        return Err(Error::SizeMismatch { expected: probs.len(), actual: observed.len() });
    }
    let total: u64 = observed.iter().sum();
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&o, &p) in observed.iter().zip(probs) {
        if p <= 0.0 {
            if o > 0 {
                return Ok((f64::INFINITY, 0.0));
            }
            continue;
        }
        let e = p * total as f64;
        stat += (o as f64 - e).powi(2) / e;
        cells += 1;
    }
    if cells < 2 {
        return Ok((stat, 1.0));
    }
    let d = ChiSquared::new((cells - 1) as f64).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok((stat, 1.0 - d.cdf(stat)))
}

/// Mean of the negative-binomial size, `t ξ/(1 − ξ)`.
pub fn negative_binomial_mean(t: f64, xi: &Num) -> f64 {
    let x = xi.to_f64();
    t * x / (1.0 - x)
}
