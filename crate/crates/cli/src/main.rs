mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use pntshort::arith_chars::{build_group, characters, gauss_sum, gcd, DirichletCharacter};
use pntshort::bound_envelopes::{
    corollary_window, envelope_all, envelope_almost_all, h_threshold, y_threshold, CorollaryKind, DensityEstimate,
    EtaProfile, ExceptionalZero, Mode,
};
use pntshort::chebyshev_delta::{additive_dropped_terms, averaged_square, decompose_additive, decompose_ap, delta, SquareVariant};
use pntshort::experiments::{self, parse_g, parse_profile, parse_u64, read_csv, ExperimentConfig, RawConfig};
use pntshort::explicit_formula::residual_scan;
use pntshort::lfunc_zeros::{
    count_zeros, data_dir, find_zeros, load_for_character, load_zeros, vertical_prediction, write_zeros, ZeroSet,
    DATA_DIR_ENV,
};
use pntshort::prime_sieve::{lambda_points, Kernel, Weight};

use output::{Cell, Format, Table};

const AFTER_HELP: &str = "Zero files are read from the directory in --data-dir, \
falling back to the PNTSHORT_DATA_DIR environment variable and then the bundled data.\n\
Exit status: 0 on success, 1 when a computation fails or an experiment misses its checks, 2 on usage errors.";

/// Prime sums in short intervals and arithmetic progressions, L-function zeros and envelopes.
#[derive(Parser, Debug)]
#[command(name = "pntshort", version, after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output layout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print numbers at full precision instead of nine significant digits.
    #[arg(long, global = true)]
    full: bool,
    /// Worker thread cap (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory holding zero files.
    #[arg(long, global = true, env = DATA_DIR_ENV)]
    data_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Primes and prime powers in (x, x+y] with their ϑ/ψ sum.
    Sieve(SieveArgs),
    /// Twisted error term Δ(x, y) for a residue class, character or additive twist.
    Delta(DeltaArgs),
    /// Character decomposition and Parseval identities on one interval.
    Identities(IdentityArgs),
    /// Gauss sums of the characters mod q.
    Gauss(GaussArgs),
    /// Zeros of Dirichlet L-functions.
    #[command(subcommand)]
    Zeros(ZerosCommand),
    /// Truncated explicit formula.
    #[command(subcommand)]
    Explicit(ExplicitCommand),
    /// Theoretical bounds.
    #[command(subcommand)]
    Envelope(EnvelopeCommand),
    /// Configured experiment runs.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
    /// Summarise a report CSV.
    Report(ReportArgs),
}

fn int(s: &str) -> std::result::Result<u64, String> {
    parse_u64(s).map_err(|e| e.to_string())
}

fn signed(s: &str) -> std::result::Result<i64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.fract() != 0.0 || v.abs() > 9e18 {
        return Err(format!("`{s}` is not an integer"));
    }
    Ok(v as i64)
}

fn weight(s: &str) -> std::result::Result<Weight, String> {
    s.parse().map_err(|e: pntshort::Error| e.to_string())
}

#[derive(Args, Debug)]
struct SieveArgs {
    #[arg(long, value_parser = int)]
    x: u64,
    #[arg(long, value_parser = signed, allow_hyphen_values = true)]
    y: i64,
    #[arg(long, value_parser = weight, default_value = "theta")]
    weight: Weight,
    /// List every point instead of the totals.
    #[arg(long)]
    list: bool,
}

#[derive(Args, Debug)]
struct CharacterArgs {
    #[arg(long, value_parser = int)]
    q: u64,
    /// Conrey label; defaults to the principal character.
    #[arg(long, value_parser = int)]
    label: Option<u64>,
}

impl CharacterArgs {
    fn character(&self) -> Result<DirichletCharacter> {
        let g = build_group(self.q)?;
        Ok(match self.label {
            Some(l) => g.from_label(l)?,
            None => g.principal(),
        })
    }
}

#[derive(Args, Debug)]
struct DeltaArgs {
    #[arg(long)]
    x: f64,
    #[arg(long, allow_hyphen_values = true)]
    y: f64,
    #[arg(long, value_parser = int)]
    q: u64,
    /// Residue class a mod q.
    #[arg(long, value_parser = int, conflicts_with_all = ["label", "additive"])]
    a: Option<u64>,
    /// Character with this Conrey label.
    #[arg(long, value_parser = int, conflicts_with = "additive")]
    label: Option<u64>,
    /// Additive twist e(na/q).
    #[arg(long, value_parser = int)]
    additive: Option<u64>,
    #[arg(long, value_parser = weight, default_value = "theta")]
    weight: Weight,
}

#[derive(Args, Debug)]
struct IdentityArgs {
    #[arg(long)]
    x: f64,
    #[arg(long, allow_hyphen_values = true)]
    y: f64,
    #[arg(long, value_parser = int)]
    q: u64,
    #[arg(long, value_parser = weight, default_value = "theta")]
    weight: Weight,
}

#[derive(Args, Debug)]
struct GaussArgs {
    #[arg(long, value_parser = int)]
    q: u64,
    #[arg(long, value_parser = int)]
    label: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum ZerosCommand {
    /// Scan the critical line of a primitive L-function.
    Find {
        #[command(flatten)]
        chi: CharacterArgs,
        #[arg(long = "T")]
        t: f64,
        /// Write the zeros in the zero-file format.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read a zero file (or the data directory entry for a character).
    Load {
        #[command(flatten)]
        chi: CharacterArgs,
        #[arg(long)]
        file: Option<PathBuf>,
        /// List the zeros.
        #[arg(long)]
        list: bool,
    },
    /// N(σ, T, χ) from the data directory.
    Count {
        #[command(flatten)]
        chi: CharacterArgs,
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        #[arg(long = "T")]
        t: f64,
    },
    /// (T/π) log(qT/2π) − T/π.
    Predict {
        #[arg(long, value_parser = int)]
        q: u64,
        #[arg(long = "T")]
        t: f64,
    },
}

#[derive(Subcommand, Debug)]
enum ExplicitCommand {
    /// Residuals of the truncated explicit formula for a list of heights.
    Scan {
        #[command(flatten)]
        chi: CharacterArgs,
        #[arg(long)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
        /// Truncation heights.
        #[arg(long = "T", value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EnvelopeMode {
    Ingham,
    Density,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    /// grh, constant:η₀, classical:c or vk:c.
    #[arg(long, default_value = "grh")]
    profile: String,
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long, value_enum, default_value_t = EnvelopeMode::Ingham)]
    mode: EnvelopeMode,
    /// Density exponent A (density mode).
    #[arg(long = "A")]
    a: Option<f64>,
    /// Density factor: const:c, logpower:B or subexp.
    #[arg(long, default_value = "const:1")]
    g: String,
    /// Injected exceptional zero β₀.
    #[arg(long)]
    beta0: Option<f64>,
    #[arg(long, value_parser = int)]
    q: u64,
    #[arg(long)]
    x: f64,
    /// Also print the admissible lower threshold at this ε.
    #[arg(long)]
    eps: Option<f64>,
}

impl ProfileArgs {
    fn parts(&self) -> Result<(EtaProfile<f64>, Option<DensityEstimate<f64>>, Option<ExceptionalZero<f64>>)> {
        let profile = parse_profile(&self.profile, self.t0)?;
        let density = match self.mode {
            EnvelopeMode::Ingham => None,
            EnvelopeMode::Density => {
                let Some(a) = self.a else { bail!(UsageError("--mode density needs --A".into())) };
                Some(DensityEstimate::new(a, parse_g(&self.g)?)?)
            }
        };
        let ez = self.beta0.map(|b| ExceptionalZero::injected(self.q, b)).transpose()?;
        Ok((profile, density, ez))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WindowKind {
    AllKorobov,
    AllLogpower,
    AlmostKorobov,
    AlmostLogpower,
}

#[derive(Subcommand, Debug)]
enum EnvelopeCommand {
    /// Bound on |Δ_ϑ(x, y, q, a)| for every interval.
    All {
        #[command(flatten)]
        p: ProfileArgs,
        /// Interval length (defaults to x).
        #[arg(long, allow_hyphen_values = true)]
        y: Option<f64>,
    },
    /// Bound on Σ*_a ∫_X^{2X} |Δ_ϑ(u, h, q, a)|² du.
    AlmostAll {
        #[command(flatten)]
        p: ProfileArgs,
        #[arg(long, allow_hyphen_values = true)]
        h: f64,
    },
    /// Admissible interval lengths of the corollaries.
    Window {
        #[arg(long, value_enum)]
        kind: WindowKind,
        #[arg(long = "A")]
        a: f64,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long = "B")]
        b: Option<f64>,
        #[arg(long = "C")]
        c: Option<f64>,
        #[arg(long)]
        eta0: Option<f64>,
        #[arg(long, value_parser = int)]
        q: u64,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        h: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
enum ExperimentCommand {
    /// Run an experiment from a config file, writing the CSV and summary.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override a config entry, as section.key=value.
        #[arg(long = "set")]
        set: Vec<String>,
        /// CSV path (overrides experiment.output).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Summary path (overrides experiment.summary).
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct ReportArgs {
    csv: PathBuf,
}

/// Flag combinations clap cannot express.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn zero_dir(cli: &Cli) -> PathBuf {
    cli.data_dir.clone().unwrap_or_else(data_dir)
}

fn complex_row(z: Complex64) -> Vec<Cell> {
    vec![z.re.into(), z.im.into(), z.norm().into()]
}

fn zero_table(set: &ZeroSet) -> Table {
    let mut t = Table::new(&["beta", "gamma"]);
    for z in set.zeros() {
        t.push(vec![z.beta.into(), z.gamma.into()]);
    }
    t
}

fn execute(cli: &Cli) -> Result<(Table, bool)> {
    let ok = |t: Table| Ok((t, true));
    match &cli.command {
        Command::Sieve(a) => {
            let seg = lambda_points(a.x, a.y)?;
            let pts = seg.points(a.weight)?;
            if a.list {
                let mut t = Table::new(&["n", "p", "weight"]);
                for p in &pts {
                    t.push(vec![p.n.into(), p.p.into(), p.weight::<f64>().into()]);
                }
                return ok(t);
            }
            let sum = pts.iter().map(|p| p.weight::<f64>()).collect::<pntshort::summation::Neumaier<f64>>().value();
            let mut t = Table::new(&["lo", "hi", "primes", "points", "sum"]);
            t.push(vec![seg.lo().into(), seg.hi().into(), seg.primes().len().into(), pts.len().into(), sum.into()]);
            ok(t)
        }
        Command::Delta(a) => {
            let chi;
            let kernel = match (a.a, a.label, a.additive) {
                (Some(r), None, None) => Kernel::Residue { a: r, q: a.q },
                (None, Some(l), None) => {
                    chi = build_group(a.q)?.from_label(l)?;
                    Kernel::Character(&chi)
                }
                (None, None, Some(r)) => Kernel::Additive { a: r, q: a.q },
                _ => bail!(UsageError("give exactly one of --a, --label, --additive".into())),
            };
            let d = delta(a.x, a.y, &kernel, a.weight)?;
            if matches!(kernel, Kernel::Residue { .. }) {
                return ok(Table::single("delta", d.real()));
            }
            let mut t = Table::new(&["re", "im", "abs"]);
            t.push(complex_row(d.value));
            ok(t)
        }
        Command::Identities(a) => {
            let mut t = Table::new(&["identity", "a", "lhs", "rhs", "gap"]);
            for r in (0..a.q).filter(|&r| gcd(r, a.q) == 1) {
                let (direct, rec) = decompose_ap(a.x, a.y, a.q, r, a.weight)?;
                t.push(vec![
                    "decomposition".into(),
                    r.into(),
                    direct.value.re.into(),
                    rec.re.into(),
                    (direct.value - rec).norm().into(),
                ]);
                // The reconstruction misses exactly the terms with gcd(n, q) > 1.
                let (direct, rec, _) = decompose_additive(a.x, a.y, a.q, r, a.weight)?;
                let dropped = additive_dropped_terms(a.x, a.y, a.q, r, a.weight)?;
                let missing = direct.value - rec;
                t.push(vec![
                    "additive".into(),
                    r.into(),
                    missing.norm().into(),
                    dropped.norm().into(),
                    (missing - dropped).norm().into(),
                ]);
            }
            for (name, v) in [("parseval", SquareVariant::ArithmeticProgression), ("parseval-gauss", SquareVariant::Additive)] {
                let (lhs, rhs) = averaged_square(a.x, a.y, a.q, v, a.weight)?;
                t.push(vec![name.into(), "all".into(), lhs.into(), rhs.into(), (lhs - rhs).abs().into()]);
            }
            ok(t)
        }
        Command::Gauss(a) => {
            let g = build_group(a.q)?;
            let chars = match a.label {
                Some(l) => vec![g.from_label(l)?],
                None => characters(&g),
            };
            let mut t = Table::new(&["label", "conductor", "primitive", "re", "im", "abs_sq"]);
            for chi in chars {
                let tau: Complex64 = gauss_sum(&chi);
                t.push(vec![
                    chi.label().into(),
                    chi.conductor().into(),
                    chi.is_primitive().into(),
                    tau.re.into(),
                    tau.im.into(),
                    tau.norm_sqr().into(),
                ]);
            }
            ok(t)
        }
        Command::Zeros(z) => match z {
            ZerosCommand::Find { chi, t, out } => {
                let set = find_zeros(&chi.character()?, *t)?;
                if let Some(path) = out {
                    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
                    let mut w = BufWriter::new(f);
                    write_zeros(&mut w, &set)?;
                    w.flush()?;
                }
                ok(zero_table(&set))
            }
            ZerosCommand::Load { chi, file, list } => {
                let c = chi.character()?;
                let set = match file {
                    Some(p) => load_zeros(p, c.modulus(), c.label())?,
                    None => load_for_character(&c, &zero_dir(cli))?,
                };
                if *list {
                    return ok(zero_table(&set));
                }
                let mut t = Table::new(&["q", "label", "tmax", "zeros", "critical_line"]);
                t.push(vec![
                    set.modulus().into(),
                    set.label().into(),
                    set.t_max().into(),
                    set.zeros().len().into(),
                    set.critical_line().into(),
                ]);
                ok(t)
            }
            ZerosCommand::Count { chi, sigma, t } => {
                let set = load_for_character(&chi.character()?, &zero_dir(cli))?;
                ok(Table::single("count", count_zeros(&set, *sigma, *t)?))
            }
            ZerosCommand::Predict { q, t } => ok(Table::single("prediction", vertical_prediction(*q, *t)?)),
        },
        Command::Explicit(ExplicitCommand::Scan { chi, x, y, t }) => {
            let c = chi.character()?;
            let zeros = load_for_character(&c, &zero_dir(cli))?;
            let mut table = Table::new(&["T", "zero_sum_re", "zero_sum_im", "truth_re", "truth_im", "residual", "envelope"]);
            for e in residual_scan(*x, *y, &c, &zeros, t)? {
                table.push(vec![
                    e.t.into(),
                    e.zero_sum.re.into(),
                    e.zero_sum.im.into(),
                    e.truth.re.into(),
                    e.truth.im.into(),
                    e.residual.norm().into(),
                    e.envelope.into(),
                ]);
            }
            ok(table)
        }
        Command::Envelope(e) => envelope(e),
        Command::Experiment(ExperimentCommand::Run { config, set, out, summary }) => {
            let mut raw = RawConfig::load(config)?;
            for s in set {
                raw.apply(s)?;
            }
            if let Some(o) = out {
                raw.set("experiment.output", &o.display().to_string())?;
            }
            if let Some(s) = summary {
                raw.set("experiment.summary", &s.display().to_string())?;
            }
            if raw.get("zeros.dir").is_none() {
                if let Some(d) = &cli.data_dir {
                    raw.set("zeros.dir", &d.display().to_string())?;
                }
            }
            let cfg = ExperimentConfig::from_raw(&raw)?;
            let rep = experiments::run(&cfg)?;
            rep.save(&cfg.output_path(), &cfg.summary_path())?;
            let mut t = Table::new(&["check", "result", "detail"]);
            t.push(vec!["fitted constant".into(), rep.c_fit.into(), format!("cap {}", rep.cap).into()]);
            for c in &rep.checks {
                t.push(vec![c.name.clone().into(), (if c.passed { "pass" } else { "FAIL" }).into(), c.detail.clone().into()]);
            }
            t.push(vec!["csv".into(), cfg.output_path().display().to_string().into(), "".into()]);
            Ok((t, rep.passed()))
        }
        Command::Report(a) => {
            let f = File::open(&a.csv).with_context(|| format!("opening {}", a.csv.display()))?;
            let (header, rows) = read_csv(f)?;
            let Some(ri) = header.iter().position(|h| h == "ratio") else {
                bail!("{} has no ratio column", a.csv.display());
            };
            let worst = rows.iter().map(|r| r[ri]).fold(0.0, f64::max);
            let arg = rows.iter().position(|r| r[ri] == worst);
            let mut t = Table::new(&["field", "value"]);
            t.push(vec!["rows".into(), rows.len().into()]);
            t.push(vec!["fitted constant".into(), worst.into()]);
            if let Some(i) = arg {
                for (h, v) in header.iter().zip(&rows[i]) {
                    t.push(vec![format!("argmax {h}").into(), (*v).into()]);
                }
            }
            ok(t)
        }
    }
}

fn mode(d: &Option<DensityEstimate<f64>>) -> Mode<'_, f64> {
    match d {
        Some(d) => Mode::Density(d),
        None => Mode::Ingham,
    }
}

fn envelope(e: &EnvelopeCommand) -> Result<(Table, bool)> {
    match e {
        EnvelopeCommand::All { p, y } => {
            let (profile, density, ez) = p.parts()?;
            let m = mode(&density);
            let v = envelope_all(m, &profile, p.q, p.x, y.unwrap_or(p.x), ez.as_ref())?;
            match p.eps {
                None => Ok((Table::single("envelope", v), true)),
                Some(eps) => {
                    let mut t = Table::new(&["envelope", "threshold"]);
                    t.push(vec![v.into(), y_threshold(m, &profile, p.q, p.x, eps)?.into()]);
                    Ok((t, true))
                }
            }
        }
        EnvelopeCommand::AlmostAll { p, h } => {
            let (profile, density, ez) = p.parts()?;
            let m = mode(&density);
            let v = envelope_almost_all(m, &profile, p.q, p.x, *h, ez.as_ref())?;
            match p.eps {
                None => Ok((Table::single("envelope", v), true)),
                Some(eps) => {
                    let mut t = Table::new(&["envelope", "threshold"]);
                    t.push(vec![v.into(), h_threshold(m, &profile, p.q, p.x, eps)?.into()]);
                    Ok((t, true))
                }
            }
        }
        EnvelopeCommand::Window { kind, a, alpha, b, c, eta0, q, x, h } => {
            let need = |v: Option<f64>, name: &str| v.ok_or_else(|| UsageError(format!("--kind {kind:?} needs --{name}")));
            let k = match kind {
                WindowKind::AllKorobov => CorollaryKind::AllIntervalsKorobov { a: *a, alpha: need(*alpha, "alpha")? },
                WindowKind::AlmostKorobov => CorollaryKind::AlmostAllKorobov { a: *a, alpha: need(*alpha, "alpha")? },
                WindowKind::AllLogpower => CorollaryKind::AllIntervalsLogPower {
                    a: *a,
                    b: need(*b, "B")?,
                    c: need(*c, "C")?,
                    eta0: need(*eta0, "eta0")?,
                },
                WindowKind::AlmostLogpower => CorollaryKind::AlmostAllLogPower {
                    a: *a,
                    b: need(*b, "B")?,
                    c: need(*c, "C")?,
                    eta0: need(*eta0, "eta0")?,
                },
            };
            let w = corollary_window(k, *q, *x, *h)?;
            let mut t = Table::new(&["lower", "upper", "empty", "exceptions"]);
            let exc = w.exceptions.map_or(Cell::Text("-".into()), Cell::Num);
            t.push(vec![w.lower.into(), w.upper.into(), w.is_empty().into(), exc]);
            Ok((t, true))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match execute(&cli) {
        Ok((table, passed)) => {
            let stdout = io::stdout();
            if let Err(e) = table.write(stdout.lock(), cli.format, cli.full) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
