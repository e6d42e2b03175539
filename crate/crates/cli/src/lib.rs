//! The `zmeasure` command line: measures, kernels, correlation checks, limit
//! transitions, RSK and sampling, with JSON or CSV on standard output.

use std::fmt::Display;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use zmeasure::kernels::{build_kernel, correlation_det, KernelSpec};
use zmeasure::measures::{mixed_measure, Family, MeasureSpec, MeasureValue, MixingLaw, Num, Prefactor, ZParams};
use zmeasure::parse::{format_rational, parse_complex, parse_matrix_csv, parse_permutation, parse_point, parse_rational, parse_word};
use zmeasure::partitions::{enumerate_partitions, PointConfiguration};
use zmeasure::rsk::{lis, rsk_matrix, rsk_permutation, rsk_word, TableauPair};
use zmeasure::sampling::{edge_statistics, generate_batch, EdgeScaling, SampleBatch, SamplerSpec};
use zmeasure::specfun::{OrthoPolyFamily, PrecisionPolicy};
use zmeasure::verify::{measure_for_kernel, run_transition, transition, verify_correlation, TRANSITION_NAMES};
use zmeasure::{Error, Rational};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_VERIFY: u8 = 3;
pub const EXIT_LIMIT: u8 = 4;

/// Environment variable overriding the target relative error.
pub const PRECISION_ENV: &str = "ZMEASURE_PRECISION";

#[derive(Debug, Parser)]
#[command(name = "zmeasure", version, about = "z-measures, RSK and determinantal kernels on partitions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Absolute tolerance for checks and truncations.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the most probable diagrams of a measure.
    Measure(MeasureArgs),
    /// Evaluate a kernel at one pair of points.
    Kernel(KernelArgs),
    /// Evaluate a correlation function, optionally against enumeration.
    Correlate(CorrelateArgs),
    /// Run limit transitions and report their convergence.
    Limits(LimitsArgs),
    /// Apply RSK to a matrix, word or permutation.
    Rsk(RskArgs),
    /// Draw random diagrams as JSON lines.
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct FamilyArgs {
    /// The parameter z (`p/q`, decimal, or `a+bi` for a conjugate pair).
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// The parameter z′; defaults to z, or to its conjugate.
    #[arg(long, allow_hyphen_values = true)]
    pub zp: Option<String>,
    /// Matrix rows or word alphabet size.
    #[arg(long)]
    pub k: Option<usize>,
    /// Matrix columns.
    #[arg(long)]
    pub l: Option<usize>,
    /// Use the Plancherel measure.
    #[arg(long)]
    pub plancherel: bool,
    /// Fixed size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Negative-binomial mixing parameter.
    #[arg(long)]
    pub xi: Option<String>,
    /// Poisson mixing parameter.
    #[arg(long)]
    pub theta: Option<String>,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Number of rows to print.
    #[arg(long, default_value_t = 20)]
    pub top: usize,
}

#[derive(Debug, Clone, Default, Args)]
pub struct KernelChoice {
    /// Hypergeometric kernel (needs --z, --xi).
    #[arg(long)]
    pub hyp: bool,
    /// Discrete Bessel kernel (needs --theta).
    #[arg(long)]
    pub plancherel: bool,
    /// Whittaker kernel (needs --z).
    #[arg(long)]
    pub whittaker: bool,
    /// Meixner kernel (needs --a, --xi, --k).
    #[arg(long)]
    pub meixner: bool,
    /// Charlier kernel (needs --theta, --k).
    #[arg(long)]
    pub charlier: bool,
    /// Laguerre kernel (needs --k; --a defaults to 0).
    #[arg(long)]
    pub laguerre: bool,
    /// Hermite kernel (needs --k).
    #[arg(long)]
    pub hermite: bool,
    /// Airy kernel.
    #[arg(long)]
    pub airy: bool,
    /// Discrete sine kernel (needs --a).
    #[arg(long)]
    pub sine_discrete: bool,
    /// Continuous sine kernel.
    #[arg(long)]
    pub sine: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub zp: Option<String>,
    #[arg(long)]
    pub xi: Option<String>,
    #[arg(long)]
    pub theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Order of a Christoffel–Darboux kernel.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[command(flatten)]
    pub kernel: KernelChoice,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, allow_hyphen_values = true)]
    pub y: String,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    #[command(flatten)]
    pub kernel: KernelChoice,
    /// Compare with brute-force enumeration of the measure.
    #[arg(long)]
    pub verify: bool,
    /// Points of the configuration; put negative points after `--`.
    pub points: Vec<String>,
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    /// Transition names such as `hyp→meixner` (or `hyp->meixner`); all when empty.
    pub names: Vec<String>,
}

#[derive(Debug, Args)]
pub struct RskArgs {
    /// CSV file holding a nonnegative integer matrix (`-` for standard input).
    #[arg(long, group = "input")]
    pub matrix: Option<String>,
    /// A word such as `1,2,2`.
    #[arg(long, group = "input")]
    pub word: Option<String>,
    /// A permutation in one-line notation such as `3,1,2`.
    #[arg(long, group = "input")]
    pub perm: Option<String>,
    /// Alphabet size for --word.
    #[arg(long)]
    pub alphabet: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Stats {
    Edge,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Uniform permutations of size --n through RSK.
    #[arg(long)]
    pub plancherel_rsk: bool,
    /// Uniform words (--n, --k) through RSK.
    #[arg(long)]
    pub word_rsk: bool,
    /// Uniform matrices (--n, --k, --l) through RSK.
    #[arg(long)]
    pub mkl_rsk: bool,
    /// Inverse CDF over the enumerated fixed-size measure.
    #[arg(long)]
    pub exact: bool,
    /// Random size from --xi or --theta, then a fixed-size draw.
    #[arg(long)]
    pub mixed: bool,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Print a summary instead of the draws.
    #[arg(long, value_enum)]
    pub stats: Option<Stats>,
}

/// A failed run: the exit code and a message for standard error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

fn usage(e: impl Display) -> Failure {
    Failure { code: EXIT_USAGE, message: e.to_string() }
}

fn io(e: impl Display) -> Failure {
    Failure { code: 1, message: e.to_string() }
}

type CliResult<T> = std::result::Result<T, Failure>;

pub fn precision_policy() -> CliResult<PrecisionPolicy> {
    let mut p = PrecisionPolicy::default();
    if let Ok(v) = std::env::var(PRECISION_ENV) {
        let t: f64 = v.trim().parse().map_err(|_| usage(format!("{PRECISION_ENV}={v:?} is not a number")))?;
        if !(t > 0.0 && t < 1.0) {
            return Err(usage(format!("{PRECISION_ENV} must lie in (0, 1), got {t}")));
        }
        p.target_rel_error = t;
    }
    Ok(p)
}

pub fn run<W: Write>(cli: &Cli, out: &mut W) -> CliResult<()> {
    if let Some(t) = cli.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(usage("--tolerance must be positive"));
        }
    }
    let policy = precision_policy()?;
    match &cli.command {
        Command::Measure(a) => cmd_measure(cli, a, out),
        Command::Kernel(a) => cmd_kernel(cli, a, policy, out),
        Command::Correlate(a) => cmd_correlate(cli, a, policy, out),
        Command::Limits(a) => cmd_limits(cli, a, out),
        Command::Rsk(a) => cmd_rsk(cli, a, out),
        Command::Sample(a) => cmd_sample(cli, a, out),
    }
}

fn write_json<W: Write>(out: &mut W, v: &Value) -> CliResult<()> {
    writeln!(out, "{v}").map_err(io)
}

fn write_csv<W: Write>(out: &mut W, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush().map_err(io)
}

fn real_to_rational(x: f64) -> CliResult<Rational> {
    parse_rational(&format!("{x}")).map_err(usage)
}

/// Reads `(z, z′)`; a complex `z` without `z′` means the conjugate pair.
pub fn parse_z_params(z: &str, zp: Option<&str>) -> CliResult<ZParams> {
    let complex = |s: &str| s.contains(['i', 'j']);
    if complex(z) || zp.is_some_and(complex) {
        let c = parse_complex(z).map_err(usage)?;
        let d = match zp {
            Some(s) => parse_complex(s).map_err(usage)?,
            None => c.conj(),
        };
        if c.im == 0.0 && d.im == 0.0 {
            return ZParams::rational(real_to_rational(c.re)?, real_to_rational(d.re)?).map_err(usage);
        }
        if d != c.conj() {
            return Err(usage("complex z requires z′ to be its conjugate"));
        }
        return ZParams::conjugate(Complex64::new(c.re, c.im)).map_err(usage);
    }
    let zr = parse_rational(z).map_err(usage)?;
    let zpr = match zp {
        Some(s) => parse_rational(s).map_err(usage)?,
        None => zr.clone(),
    };
    ZParams::rational(zr, zpr).map_err(usage)
}

fn num(s: &str) -> CliResult<Num> {
    parse_rational(s).map(Num::Exact).map_err(usage)
}

fn real(s: &str, what: &str) -> CliResult<f64> {
    parse_point(s).map_err(|e| usage(format!("--{what}: {e}")))
}

fn need<'a, T>(v: &'a Option<T>, what: &str) -> CliResult<&'a T> {
    v.as_ref().ok_or_else(|| usage(format!("missing --{what}")))
}

pub fn measure_family(f: &FamilyArgs) -> CliResult<Family> {
    let chosen = [f.plancherel, f.z.is_some(), f.k.is_some()].iter().filter(|b| **b).count();
    if chosen != 1 {
        return Err(usage("choose exactly one of --plancherel, --z/--zp, --k [--l]"));
    }
    if f.plancherel {
        return Ok(Family::Plancherel);
    }
    if let Some(z) = &f.z {
        return Ok(Family::Z { params: parse_z_params(z, f.zp.as_deref())? });
    }
    let k = f.k.expect("checked above");
    Ok(match f.l {
        Some(l) => Family::IntegerKl { k, l },
        None => Family::KInfinity { k },
    })
}

pub fn measure_spec(f: &FamilyArgs) -> CliResult<MeasureSpec> {
    let family = measure_family(f)?;
    let mixing = match (f.n, &f.xi, &f.theta) {
        (Some(n), None, None) => MixingLaw::Fixed { n },
        (None, Some(xi), None) => MixingLaw::NegativeBinomial { xi: num(xi)? },
        (None, None, Some(th)) => MixingLaw::Poisson { theta: num(th)? },
        _ => return Err(usage("choose exactly one of --n, --xi, --theta")),
    };
    MeasureSpec::new(family, mixing).map_err(usage)
}

fn prefactor_text(p: &Prefactor) -> String {
    match p {
        Prefactor::One => String::new(),
        Prefactor::OneMinusXiPow { xi, t } => format!("*(1-{})^({})", format_rational(xi), format_rational(t)),
        Prefactor::ExpNeg { theta } => format!("*exp(-{})", format_rational(theta)),
    }
}

pub fn value_text(v: &MeasureValue) -> String {
    match v {
        MeasureValue::Exact { coeff, prefactor } => format!("{}{}", format_rational(coeff), prefactor_text(prefactor)),
        MeasureValue::Real(x) => format!("{x:e}"),
    }
}

fn total_text(values: &[MeasureValue]) -> Option<String> {
    let first = match values.first() {
        Some(MeasureValue::Exact { prefactor, .. }) => prefactor,
        Some(MeasureValue::Real(_)) => return None,
        None => return Some("0".into()),
    };
    let mut sum = Rational::from_integer(0.into());
    for v in values {
        match v {
            MeasureValue::Exact { coeff, prefactor } if prefactor == first => sum += coeff,
            _ => return None,
        }
    }
    Some(format!("{}{}", format_rational(&sum), prefactor_text(first)))
}

fn cmd_measure<W: Write>(cli: &Cli, a: &MeasureArgs, out: &mut W) -> CliResult<()> {
    let spec = measure_spec(&a.family)?;
    let sizes: Vec<usize> = match spec.mixing {
        MixingLaw::Fixed { n } => vec![n],
        _ => {
            let tol = cli.tolerance.unwrap_or(1e-9);
            let tb = zmeasure::verify::truncation_for(&spec, tol).map_err(usage)?;
            (0..=tb.level).collect()
        }
    };
    let mut rows = Vec::new();
    for n in sizes {
        for l in enumerate_partitions(n).map_err(usage)? {
            let v = mixed_measure(&l, &spec).map_err(usage)?;
            rows.push((l, v));
        }
    }
    let values: Vec<MeasureValue> = rows.iter().map(|(_, v)| v.clone()).collect();
    let total_approx: f64 = values.iter().map(MeasureValue::to_f64).sum();
    let total = total_text(&values);
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&i, &j| values[j].to_f64().total_cmp(&values[i].to_f64()));
    order.truncate(a.top);
    match cli.format {
        Format::Json => {
            let shown: Vec<Value> = order
                .iter()
                .map(|&i| {
                    json!({
                        "partition": rows[i].0.to_string(),
                        "parts": rows[i].0.parts(),
                        "value": value_text(&rows[i].1),
                        "approx": rows[i].1.to_f64(),
                    })
                })
                .collect();
            write_json(
                out,
                &json!({
                    "spec": serde_json::to_value(&spec).map_err(io)?,
                    "rows": shown,
                    "total": { "value": total, "approx": total_approx, "diagrams": rows.len() },
                }),
            )
        }
        Format::Csv => {
            let mut recs: Vec<Vec<String>> = order
                .iter()
                .map(|&i| vec![rows[i].0.to_string(), value_text(&rows[i].1), format!("{:e}", rows[i].1.to_f64())])
                .collect();
            recs.push(vec!["total".into(), total.unwrap_or_default(), format!("{total_approx:e}")]);
            write_csv(out, &["partition", "value", "approx"], &recs)
        }
    }
}

pub fn kernel_spec(k: &KernelChoice) -> CliResult<KernelSpec> {
    let flags = [k.hyp, k.plancherel, k.whittaker, k.meixner, k.charlier, k.laguerre, k.hermite, k.airy, k.sine_discrete, k.sine];
    if flags.iter().filter(|b| **b).count() != 1 {
        return Err(usage(
            "choose exactly one kernel: --hyp, --plancherel, --whittaker, --meixner, --charlier, --laguerre, --hermite, --airy, --sine-discrete, --sine",
        ));
    }
    let params = || parse_z_params(need(&k.z, "z")?, k.zp.as_deref());
    let order = || need(&k.k, "k").copied();
    Ok(if k.hyp {
        KernelSpec::Hypergeometric { params: params()?, xi: real(need(&k.xi, "xi")?, "xi")? }
    } else if k.plancherel {
        KernelSpec::Plancherel { theta: real(need(&k.theta, "theta")?, "theta")? }
    } else if k.whittaker {
        KernelSpec::Whittaker { params: params()? }
    } else if k.meixner {
        let family = OrthoPolyFamily::Meixner { a: real(need(&k.a, "a")?, "a")?, xi: real(need(&k.xi, "xi")?, "xi")? };
        KernelSpec::ChristoffelDarboux { family, k: order()? }
    } else if k.charlier {
        let family = OrthoPolyFamily::Charlier { theta: real(need(&k.theta, "theta")?, "theta")? };
        KernelSpec::ChristoffelDarboux { family, k: order()? }
    } else if k.laguerre {
        let a = match &k.a {
            Some(a) => real(a, "a")?,
            None => 0.0,
        };
        KernelSpec::ChristoffelDarboux { family: OrthoPolyFamily::Laguerre { a }, k: order()? }
    } else if k.hermite {
        KernelSpec::ChristoffelDarboux { family: OrthoPolyFamily::Hermite, k: order()? }
    } else if k.airy {
        KernelSpec::Airy
    } else if k.sine_discrete {
        KernelSpec::DiscreteSine { a: real(need(&k.a, "a")?, "a")? }
    } else {
        KernelSpec::Sine
    })
}

fn cmd_kernel<W: Write>(cli: &Cli, a: &KernelArgs, policy: PrecisionPolicy, out: &mut W) -> CliResult<()> {
    let spec = kernel_spec(&a.kernel)?;
    let kernel = build_kernel(&spec, policy).map_err(usage)?;
    let (x, y) = (real(&a.x, "x")?, real(&a.y, "y")?);
    PointConfiguration::new(kernel.phase_space(), vec![x, y]).map_err(usage)?;
    let v = kernel.eval(x, y).map_err(usage)?;
    match cli.format {
        Format::Json => write_json(out, &json!({ "kernel": serde_json::to_value(&spec).map_err(io)?, "x": x, "y": y, "value": v })),
        Format::Csv => write_csv(out, &["x", "y", "value"], &[vec![x.to_string(), y.to_string(), format!("{v:e}")]]),
    }
}

fn cmd_correlate<W: Write>(cli: &Cli, a: &CorrelateArgs, policy: PrecisionPolicy, out: &mut W) -> CliResult<()> {
    let spec = kernel_spec(&a.kernel)?;
    let kernel = build_kernel(&spec, policy).map_err(usage)?;
    let points = a.points.iter().map(|p| real(p, "point")).collect::<CliResult<Vec<_>>>()?;
    let pts = PointConfiguration::new(kernel.phase_space(), points).map_err(usage)?;
    let spec_json = serde_json::to_value(&spec).map_err(io)?;
    if !a.verify {
        let rho = correlation_det(kernel.as_ref(), &pts).map_err(usage)?;
        return match cli.format {
            Format::Json => write_json(out, &json!({ "kernel": spec_json, "points": pts.points, "rho": rho })),
            Format::Csv => write_csv(out, &["points", "rho"], &[vec![join(&pts.points), format!("{rho:e}")]]),
        };
    }
    let measure = measure_for_kernel(&spec).ok_or_else(|| usage("no enumeration oracle exists for this kernel"))?;
    let tol = cli.tolerance.unwrap_or(1e-6);
    let check = match verify_correlation(kernel.as_ref(), &measure, &pts, tol) {
        Ok(c) => c,
        Err(e @ Error::Uncertifiable { .. }) => return Err(Failure { code: EXIT_VERIFY, message: e.to_string() }),
        Err(e) => return Err(usage(e)),
    };
    match cli.format {
        Format::Json => write_json(
            out,
            &json!({
                "kernel": spec_json,
                "points": check.points,
                "determinantal": check.determinantal,
                "enumerated": check.enumerated,
                "error": check.error,
                "tail_bound": check.tail.bound,
                "truncation_level": check.tail.level,
                "tolerance": check.tolerance,
                "pass": check.pass,
            }),
        )?,
        Format::Csv => write_csv(
            out,
            &["points", "determinantal", "enumerated", "error", "tail_bound", "tolerance", "pass"],
            &[vec![
                join(&check.points),
                format!("{:e}", check.determinantal),
                format!("{:e}", check.enumerated),
                format!("{:e}", check.error),
                format!("{:e}", check.tail.bound),
                format!("{:e}", check.tolerance),
                check.pass.to_string(),
            ]],
        )?,
    }
    if check.pass {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_VERIFY,
            message: format!("error {:e} exceeds tolerance {:e} + tail {:e}", check.error, tol, check.tail.bound),
        })
    }
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_limits<W: Write>(cli: &Cli, a: &LimitsArgs, out: &mut W) -> CliResult<()> {
    let names: Vec<String> = if a.names.is_empty() {
        TRANSITION_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        a.names.clone()
    };
    let transitions = names
        .iter()
        .map(|n| {
            transition(n).map_err(|_| usage(format!("unknown transition {n:?}; available: {}", TRANSITION_NAMES.join(", "))))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut failed = Vec::new();
    let mut csv_rows = Vec::new();
    for t in &transitions {
        match run_transition(t) {
            Ok(r) => {
                if !r.pass {
                    failed.push(r.name.clone());
                }
                match cli.format {
                    Format::Json => write_json(out, &serde_json::to_value(&r).map_err(io)?)?,
                    Format::Csv => csv_rows.push(vec![
                        r.name.clone(),
                        format!("{:e}", r.final_error),
                        format!("{:e}", r.tolerance),
                        r.monotone.to_string(),
                        r.pass.to_string(),
                    ]),
                }
            }
            Err(e) => {
                failed.push(t.name.to_string());
                eprintln!("zmeasure: {}: {e}", t.name);
            }
        }
    }
    if cli.format == Format::Csv {
        write_csv(out, &["name", "final_error", "tolerance", "monotone", "pass"], &csv_rows)?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure { code: EXIT_LIMIT, message: format!("failed transitions: {}", failed.join(", ")) })
    }
}

fn cmd_rsk<W: Write>(cli: &Cli, a: &RskArgs, out: &mut W) -> CliResult<()> {
    let (pair, values): (TableauPair, Vec<usize>) = if let Some(path) = &a.matrix {
        let text = if path == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(usage)?;
            s
        } else {
            std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?
        };
        let m = parse_matrix_csv(&text).map_err(usage)?;
        let letters = m.two_line_array().into_iter().map(|(_, j)| j).collect();
        (rsk_matrix(&m), letters)
    } else if let Some(w) = &a.word {
        let w = parse_word(w, a.alphabet).map_err(usage)?;
        (rsk_word(&w), w.letters().to_vec())
    } else if let Some(p) = &a.perm {
        let p = parse_permutation(p).map_err(usage)?;
        (rsk_permutation(&p), p.images().to_vec())
    } else {
        return Err(usage("give one of --matrix, --word, --perm"));
    };
    let shape = pair.shape();
    let longest = lis(&values).map_err(usage)?;
    assert_eq!(longest, shape.row(1), "longest weakly increasing subsequence differs from the first row");
    match cli.format {
        Format::Json => write_json(
            out,
            &json!({ "p": pair.p.rows(), "q": pair.q.rows(), "shape": shape.parts(), "lis": longest }),
        ),
        Format::Csv => {
            let mut rows = Vec::new();
            for (name, t) in [("P", &pair.p), ("Q", &pair.q)] {
                for (i, r) in t.rows().iter().enumerate() {
                    rows.push(vec![name.to_string(), (i + 1).to_string(), words(r)]);
                }
            }
            rows.push(vec!["shape".into(), String::new(), words(shape.parts())]);
            rows.push(vec!["lis".into(), String::new(), longest.to_string()]);
            write_csv(out, &["field", "row", "entries"], &rows)
        }
    }
}

fn words(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn sampler_spec(a: &SampleArgs) -> CliResult<SamplerSpec> {
    let f = &a.family;
    let kinds = [a.plancherel_rsk, a.word_rsk, a.mkl_rsk, a.exact, a.mixed];
    if kinds.iter().filter(|b| **b).count() != 1 {
        return Err(usage("choose exactly one of --plancherel-rsk, --word-rsk, --mkl-rsk, --exact, --mixed"));
    }
    let n = || need(&f.n, "n").copied();
    let spec = if a.plancherel_rsk {
        SamplerSpec::PlancherelRsk { n: n()? }
    } else if a.word_rsk {
        SamplerSpec::WordRsk { n: n()?, k: *need(&f.k, "k")? }
    } else if a.mkl_rsk {
        SamplerSpec::MklRsk { n: n()?, k: *need(&f.k, "k")?, l: *need(&f.l, "l")? }
    } else if a.exact {
        SamplerSpec::Exact { family: measure_family(f)?, n: n()? }
    } else {
        let spec = measure_spec(f)?;
        if matches!(spec.mixing, MixingLaw::Fixed { .. }) {
            return Err(usage("--mixed needs --xi or --theta"));
        }
        SamplerSpec::Mixed { spec }
    };
    spec.validate().map_err(usage)?;
    Ok(spec)
}

fn edge_scaling(spec: &SamplerSpec) -> CliResult<EdgeScaling> {
    match spec {
        SamplerSpec::PlancherelRsk { n } => Ok(EdgeScaling::PlancherelEdge { n: *n as f64 }),
        SamplerSpec::Exact { family: Family::Plancherel, n } => Ok(EdgeScaling::PlancherelEdge { n: *n as f64 }),
        SamplerSpec::Mixed { spec } => match (&spec.family, &spec.mixing) {
            (Family::Plancherel, MixingLaw::Poisson { theta }) => Ok(EdgeScaling::PlancherelEdge { n: theta.to_f64() }),
            (Family::KInfinity { k }, MixingLaw::Poisson { theta }) => {
                Ok(EdgeScaling::CharlierEdge { theta: theta.to_f64(), k: *k })
            }
            _ => Err(usage("edge statistics need a Plancherel or Poissonized word sampler")),
        },
        _ => Err(usage("edge statistics need a Plancherel or Poissonized word sampler")),
    }
}

fn cmd_sample<W: Write>(cli: &Cli, a: &SampleArgs, out: &mut W) -> CliResult<()> {
    let spec = sampler_spec(a)?;
    let scaling = a.stats.map(|_| edge_scaling(&spec)).transpose()?;
    let batch = generate_batch(&spec, cli.seed, a.count).map_err(usage)?;
    match scaling {
        Some(s) => write_edge_summary(cli, &batch, s, out),
        None => match cli.format {
            Format::Json => out.write_all(batch.to_json_lines().as_bytes()).map_err(io),
            Format::Csv => {
                let rows: Vec<Vec<String>> = batch
                    .records()
                    .into_iter()
                    .map(|r| vec![r.seed.to_string(), r.index.to_string(), r.size.to_string(), r.lambda1.to_string(), words(&r.parts)])
                    .collect();
                write_csv(out, &["seed", "index", "size", "lambda1", "parts"], &rows)
            }
        },
    }
}

fn write_edge_summary<W: Write>(cli: &Cli, batch: &SampleBatch, scaling: EdgeScaling, out: &mut W) -> CliResult<()> {
    let s = edge_statistics(batch, scaling).map_err(usage)?;
    let n = match scaling {
        EdgeScaling::PlancherelEdge { n } => n,
        EdgeScaling::CharlierEdge { theta, .. } => theta,
    };
    let rows = batch.first_rows();
    let ratio = rows.iter().map(|&l| l as f64 / n.sqrt()).sum::<f64>() / rows.len() as f64;
    match cli.format {
        Format::Json => write_json(
            out,
            &json!({
                "seed": batch.seed,
                "count": rows.len(),
                "scaling": serde_json::to_value(scaling).map_err(io)?,
                "mean_lambda1_over_sqrt_n": ratio,
                "mean": s.mean,
                "variance": s.variance,
                "median": s.median,
            }),
        ),
        Format::Csv => write_csv(
            out,
            &["count", "mean_lambda1_over_sqrt_n", "mean", "variance", "median"],
            &[vec![rows.len().to_string(), ratio.to_string(), s.mean.to_string(), s.variance.to_string(), s.median.to_string()]],
        ),
    }
}
