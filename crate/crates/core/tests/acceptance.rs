//! End-to-end acceptance checks. Each criterion prints one PASS or FAIL line;
//! the process exits non-zero if any criterion fails.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, Zero};

use zmeasure::kernels::{cd_kernel, hypergeometric_kernel, positive_part, Kernel};
use zmeasure::measures::{z_measure, z_measure_distribution, ZParams};
use zmeasure::partitions::{enumerate_partitions, HalfInt, PointConfiguration};
use zmeasure::rsk::{
    enumerate_matrices, lis, matrix_count, rsk_matrix, rsk_matrix_inverse, rsk_permutation, rsk_permutation_inverse,
    rsk_word, shape_distribution_by_enumeration, Permutation, ShapeSource, Word,
};
use zmeasure::sampling::{generate_batch, median, SamplerSpec};
use zmeasure::specfun::{airy, bessel_j, bessel_j_table, gauss_2f1, hyp2f1_series, whittaker_w, OrthoPolyFamily, PrecisionPolicy};
use zmeasure::verify::{builtin_transitions, check_hypergeometric_correlations, check_simplex_density, run_transition, transition};
use zmeasure::Rational;

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn exact_normalization() -> Outcome {
    for (z, zp) in [(q(1, 2), q(1, 2)), (q(1, 3), q(2, 3)), (q(3, 2), q(5, 4))] {
        let params = ZParams::rational(z.clone(), zp.clone()).map_err(|e| e.to_string())?;
        for n in 0..=12 {
            let dist = z_measure_distribution(n, &params).map_err(|e| e.to_string())?;
            let mut sum = Rational::zero();
            for (_, m) in &dist {
                sum += m.as_rational().ok_or("inexact value")?;
            }
            if !sum.is_one() {
                return Err(format!("z={z}, z'={zp}, n={n}: sum {sum}"));
            }
        }
    }
    Ok("three parameter pairs, n = 0..12, sums exactly 1".into())
}

fn rsk_bijectivity() -> Outcome {
    let mut checked = 0usize;
    for n in 0..=5 {
        let mats = enumerate_matrices(2, 2, n).map_err(|e| e.to_string())?;
        let mut seen = HashSet::new();
        for m in &mats {
            let pair = rsk_matrix(m);
            if rsk_matrix_inverse(&pair).map_err(|e| e.to_string())? != *m {
                return Err(format!("matrix roundtrip failed for {:?}", m.to_rows()));
            }
            seen.insert(pair);
        }
        // Surjectivity: the number of pairs of SSYT over 2 letters equals |B^n_{2,2}|.
        let pairs: BigUint = enumerate_partitions(n)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|l| {
                let c = zmeasure::rsk::count_ssyt(l, 2);
                &c * &c
            })
            .sum();
        if seen.len() != mats.len() || pairs != BigUint::from(mats.len()) {
            return Err(format!("n={n}: {} matrices, {} distinct images, {pairs} tableau pairs", mats.len(), seen.len()));
        }
        checked += mats.len();
    }
    let perms = Permutation::all(7);
    let mut seen = HashSet::new();
    for p in &perms {
        let pair = rsk_permutation(p);
        if rsk_permutation_inverse(&pair).map_err(|e| e.to_string())? != *p {
            return Err(format!("permutation roundtrip failed for {:?}", p.images()));
        }
        seen.insert(pair);
    }
    ensure(
        perms.len() == 5040 && seen.len() == 5040,
        format!("{checked} matrices and {} permutations roundtrip, images distinct", perms.len()),
    )
}

fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

fn pushforward_identity() -> Outcome {
    let mut cases = 0;
    for k in 1..=3usize {
        for l in 1..=3usize {
            let params = ZParams::from_ints(k as i64, l as i64).map_err(|e| e.to_string())?;
            for n in 0..=8usize {
                let dist = shape_distribution_by_enumeration(ShapeSource::Matrix { k, l }, n).map_err(|e| e.to_string())?;
                for lam in enumerate_partitions(n).map_err(|e| e.to_string())? {
                    let m = z_measure(&lam, &params).map_err(|e| e.to_string())?;
                    let m = m.as_rational().ok_or("inexact z-measure")?.clone();
                    let p = dist.get(&lam).cloned().unwrap_or_else(Rational::zero);
                    if m != p {
                        return Err(format!("k={k}, l={l}, {lam}: pushforward {p} vs z-measure {m}"));
                    }
                }
                let count = enumerate_matrices(k, l, n).map_err(|e| e.to_string())?.len();
                let stars_and_bars = binomial((k * l + n - 1) as u64, n as u64);
                if BigUint::from(count) != stars_and_bars || matrix_count(k, l, n) != stars_and_bars {
                    return Err(format!("k={k}, l={l}, n={n}: {count} matrices vs C(kl+n-1, n) = {stars_and_bars}"));
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (k, l, n) cases agree exactly; counts are C(kl+n-1, n)"))
}

fn schensted() -> Outcome {
    let mut checked = 0;
    for n in 1..=7 {
        for p in Permutation::all(n) {
            let shape = rsk_permutation(&p).shape();
            if lis(p.images()).map_err(|e| e.to_string())? != shape.row(1) {
                return Err(format!("{:?}", p.images()));
            }
            checked += 1;
        }
    }
    for n in 1..=6u32 {
        for code in 0..3usize.pow(n) {
            let letters: Vec<usize> = (0..n).map(|i| code / 3usize.pow(i) % 3 + 1).collect();
            let w = Word::new(3, letters.clone()).map_err(|e| e.to_string())?;
            if lis(&letters).map_err(|e| e.to_string())? != rsk_word(&w).shape().row(1) {
                return Err(format!("{letters:?}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} permutations and words"))
}

fn hypergeometric_correlations() -> Outcome {
    let base: Vec<HalfInt> = [1, -1, 3, -3, 5].iter().map(|&t| HalfInt::from_twice(t).unwrap()).collect();
    let mut configs = Vec::new();
    for mask in 1u32..32 {
        if (1..=3).contains(&mask.count_ones()) {
            let pts: Vec<HalfInt> = (0..5).filter(|i| mask >> i & 1 == 1).map(|i| base[i]).collect();
            configs.push(PointConfiguration::from_half_integers(&pts));
        }
    }
    let params = ZParams::rational(q(1, 2), q(1, 2)).map_err(|e| e.to_string())?;
    let report = check_hypergeometric_correlations(&params, 0.3, &configs, 1e-6).map_err(|e| e.to_string())?;
    let worst_tail = report.cases.iter().map(|c| c.tail.bound).fold(0.0, f64::max);
    ensure(
        report.pass && report.cases.len() == 25,
        format!("{} configurations, worst error {:.2e}, tail bound {:.2e}", report.cases.len(), report.worst_error, worst_tail),
    )
}

fn positive_part_is_meixner() -> Outcome {
    let k = hypergeometric_kernel(ZParams::from_ints(3, 5).map_err(|e| e.to_string())?, 0.4).map_err(|e| e.to_string())?;
    let pos = positive_part(Arc::new(k)).map_err(|e| e.to_string())?;
    let meixner = cd_kernel(OrthoPolyFamily::Meixner { a: 2.0, xi: 0.4 }, 3).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let (x, y) = (i as f64 + 0.5, j as f64 + 0.5);
            let a = pos.eval(x, y).map_err(|e| e.to_string())?;
            let b = meixner.eval(i as f64 + 3.0, j as f64 + 3.0).map_err(|e| e.to_string())?;
            worst = worst.max((a - b).abs());
        }
    }
    ensure(worst <= 1e-9, format!("max error {worst:.2e} on a 10x10 grid"))
}

fn hypergeometric_to_plancherel() -> Outcome {
    let t = transition("hyp→plancherel").map_err(|e| e.to_string())?;
    let r = run_transition(&t).map_err(|e| e.to_string())?;
    let errs: Vec<String> = r.steps.iter().map(|s| format!("s={}: {:.2e}", s.s, s.max_err)).collect();
    ensure(r.monotone && r.final_error <= 1e-2 && r.steps.len() == 4, errs.join(", "))
}

fn all_transitions() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for t in builtin_transitions() {
        match run_transition(&t) {
            Ok(r) => {
                ok &= r.pass;
                lines.push(format!("{} {:.1e}/{:.0e}{}", r.name, r.final_error, r.tolerance, if r.pass { "" } else { " FAILED" }));
            }
            Err(e) => {
                ok = false;
                lines.push(format!("{} error: {e}", t.name));
            }
        }
    }
    ensure(ok, lines.join("; "))
}

/// Geometric bound on `Σ_{y > Y} K(y, y)` from the worst diagonal ratio over the last steps.
fn diagonal_tail(k: &dyn Kernel, last: usize) -> Result<f64, String> {
    let d = |y: usize| k.eval(y as f64, y as f64).map_err(|e| e.to_string());
    let mut r: f64 = 0.0;
    for y in last - 10..last {
        r = r.max(d(y + 1)? / d(y)?);
    }
    if r >= 1.0 {
        return Err("diagonal is not decaying at the truncation point".into());
    }
    Ok(d(last)? * r / (1.0 - r))
}

fn cd_projection() -> Outcome {
    let last = 150usize;
    let mut notes = Vec::new();
    for fam in [OrthoPolyFamily::Charlier { theta: 1.0 }, OrthoPolyFamily::Meixner { a: 2.0, xi: 0.4 }] {
        let k = cd_kernel(fam, 3).map_err(|e| e.to_string())?;
        let tail = diagonal_tail(&k, last)?;
        let ev = |x: usize, y: usize| k.eval(x as f64, y as f64).map_err(|e| e.to_string());
        let mut worst: f64 = 0.0;
        for x in 0..8 {
            for z in 0..8 {
                let mut s = 0.0;
                for y in 0..=last {
                    s += ev(x, y)? * ev(y, z)?;
                }
                worst = worst.max((s - ev(x, z)?).abs());
            }
        }
        let mut trace = 0.0;
        for y in 0..=last {
            trace += ev(y, y)?;
        }
        let trace_err = (trace - 3.0).abs();
        // |K(x,y)|² ≤ K(x,x) K(y,y) bounds the omitted part of the projection sum by the diagonal tail.
        if worst > 1e-7 || trace_err > 1e-8 || tail > 1e-12 {
            return Err(format!("{fam:?}: projection {worst:.2e}, trace {trace_err:.2e}, tail {tail:.2e}"));
        }
        notes.push(format!("{}: projection {worst:.1e}, trace {trace_err:.1e}, tail {tail:.1e}", fam_name(&fam)));
    }
    Ok(notes.join("; "))
}

fn fam_name(f: &OrthoPolyFamily) -> &'static str {
    match f {
        OrthoPolyFamily::Charlier { .. } => "Charlier",
        OrthoPolyFamily::Meixner { .. } => "Meixner",
        OrthoPolyFamily::Laguerre { .. } => "Laguerre",
        OrthoPolyFamily::Hermite => "Hermite",
    }
}

fn simplex_moments() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for a in [0, 1] {
        let r = check_simplex_density(2, a, &[50, 100, 200, 500], &[1, 2]).map_err(|e| e.to_string())?;
        ok &= r.decreasing && r.final_max_rel_error <= 0.02;
        notes.push(format!("a={a}: rel error at n=500 {:.2e}, decreasing {}", r.final_max_rel_error, r.decreasing));
    }
    ensure(ok, notes.join("; "))
}

fn plancherel_monte_carlo() -> Outcome {
    let seed = 20_240_601;
    let mut medians = Vec::new();
    let mut mean_4000 = 0.0;
    for n in [250usize, 1000, 4000] {
        let batch = generate_batch(&SamplerSpec::PlancherelRsk { n }, seed, 50).map_err(|e| e.to_string())?;
        let ratios: Vec<f64> = batch.first_rows().iter().map(|&l| l as f64 / (n as f64).sqrt()).collect();
        medians.push(median(&ratios));
        if n == 4000 {
            mean_4000 = ratios.iter().sum::<f64>() / ratios.len() as f64;
        }
    }
    let nondecreasing = medians.windows(2).all(|w| w[0] <= w[1]);
    ensure(
        (1.85..=2.05).contains(&mean_4000) && nondecreasing,
        format!("mean at n=4000 {mean_4000:.4}, medians {:.4} {:.4} {:.4}", medians[0], medians[1], medians[2]),
    )
}

fn special_functions() -> Outcome {
    let p = PrecisionPolicy::default();
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut worst_2f1: f64 = 0.0;
    for &(a, b, cc) in &[(0.5, 0.5, 1.5), (-0.3, 1.7, 2.2), (2.0, -1.5, 4.0)] {
        for w in [-0.1, -0.45, -0.89] {
            let direct = hyp2f1_series(c(a), c(b), c(cc), w, &p).map_err(|e| e.to_string())?;
            let pfaff = gauss_2f1(c(a), c(b), c(cc), w, &p).map_err(|e| e.to_string())?;
            worst_2f1 = worst_2f1.max((direct - pfaff).norm() / direct.norm());
        }
    }
    for &(a, b, cc, w) in &[(-0.7, 0.5, 2.5, -1.5), (1.3, 2.1, 4.0, -6.0), (0.4, -1.2, 2.5, -0.2)] {
        let f = |cv: f64| gauss_2f1(c(a), c(b), c(cv), w, &p).map(|v| v.re).map_err(|e| e.to_string());
        let (fm, f0, fp) = (f(cc - 1.0)?, f(cc)?, f(cc + 1.0)?);
        let t1 = cc * (cc - 1.0) * (w - 1.0) * fm;
        let t2 = cc * (cc - 1.0 - (2.0 * cc - a - b - 1.0) * w) * f0;
        let t3 = (cc - a) * (cc - b) * w * fp;
        worst_2f1 = worst_2f1.max((t1 + t2 + t3).abs() / t1.abs().max(t2.abs()).max(t3.abs()));
    }
    let mut worst_bessel: f64 = 0.0;
    for &x in &[0.5, 3.7, 12.0, 30.0] {
        for m in 1..=40 {
            let (jm1, j, jp1) = (bessel_j(m - 1, x).unwrap(), bessel_j(m, x).unwrap(), bessel_j(m + 1, x).unwrap());
            let rhs = 2.0 * m as f64 / x * j;
            worst_bessel = worst_bessel.max((jm1 + jp1 - rhs).abs() / jm1.abs().max(jp1.abs()).max(rhs.abs()));
        }
        let t = bessel_j_table(x as usize + 80, x).map_err(|e| e.to_string())?;
        let norm = t[0] * t[0] + 2.0 * t[1..].iter().map(|v| v * v).sum::<f64>();
        worst_bessel = worst_bessel.max((norm - 1.0).abs());
    }
    let mut worst_airy: f64 = 0.0;
    let h = 1e-2;
    let ai = |t: f64| airy(t).map(|v| v.0).map_err(|e| e.to_string());
    for i in 0..=40 {
        let x = -5.0 + 0.25 * i as f64;
        let second = (-ai(x + 2.0 * h)? + 16.0 * ai(x + h)? - 30.0 * ai(x)? + 16.0 * ai(x - h)? - ai(x - 2.0 * h)?) / (12.0 * h * h);
        worst_airy = worst_airy.max((second - x * ai(x)?).abs());
    }
    let mut worst_w: f64 = 0.0;
    for x in [1.0, 2.0, 5.0] {
        let w = whittaker_w(0.0, 0.5, x, &p).map_err(|e| e.to_string())?;
        worst_w = worst_w.max((w - (-x / 2.0f64).exp()).abs());
    }
    ensure(
        worst_2f1 <= 1e-8 && worst_bessel <= 1e-9 && worst_airy <= 1e-6 && worst_w <= 1e-8,
        format!("2F1 {worst_2f1:.1e}, Bessel {worst_bessel:.1e}, Airy ODE {worst_airy:.1e}, W(0,1/2) {worst_w:.1e}"),
    )
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    check: fn() -> Outcome,
}

fn main() {
    let s = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "exact normalization", budget: s(10), check: exact_normalization },
        Criterion { id: 2, name: "RSK bijectivity", budget: s(30), check: rsk_bijectivity },
        Criterion { id: 3, name: "RSK pushforward and matrix count", budget: s(20), check: pushforward_identity },
        Criterion { id: 4, name: "longest subsequence equals first row", budget: s(30), check: schensted },
        Criterion { id: 5, name: "hypergeometric correlations vs enumeration", budget: s(60), check: hypergeometric_correlations },
        Criterion { id: 6, name: "positive part equals Meixner kernel", budget: s(5), check: positive_part_is_meixner },
        Criterion { id: 7, name: "hypergeometric to Plancherel kernel", budget: s(10), check: hypergeometric_to_plancherel },
        Criterion { id: 8, name: "all limit transitions", budget: s(300), check: all_transitions },
        Criterion { id: 9, name: "Christoffel-Darboux projection and trace", budget: s(10), check: cd_projection },
        Criterion { id: 10, name: "simplex limit moments", budget: s(60), check: simplex_moments },
        Criterion { id: 11, name: "Plancherel first row by Monte Carlo", budget: s(180), check: plancherel_monte_carlo },
        Criterion { id: 12, name: "special-function self-consistency", budget: s(10), check: special_functions },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= c.budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(d) => (false, d),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} {:>2} {} ({:.2} s of {} s): {}",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs(),
            detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}

