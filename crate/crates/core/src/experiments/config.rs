//! Experiment configuration: `key = value` lines grouped under `[section]`
//! headers, `#` comments. Keys are addressed as `section.key`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::arith_chars::gcd;
use crate::bound_envelopes::{DensityEstimate, EtaProfile, GFamily};
use crate::error::{Error, Result};
use crate::prime_sieve::{Weight, DEFAULT_SIEVE_CAP};

const KNOWN_KEYS: &[&str] = &[
    "experiment.kind",
    "experiment.weight",
    "experiment.cap",
    "experiment.output",
    "experiment.summary",
    "grid.x",
    "grid.y",
    "grid.y_exponent",
    "grid.starts",
    "grid.q",
    "grid.residues",
    "grid.labels",
    "grid.T",
    "grid.sigma",
    "envelope.mode",
    "envelope.profile",
    "envelope.t0",
    "envelope.A",
    "envelope.g",
    "zeros.dir",
    "zeros.exceptional",
];

/// Flat `section.key → value` map, kept sorted so its rendering is canonical.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut raw = RawConfig::default();
        let mut section = String::new();
        for (i, line) in text.lines().enumerate() {
            let err = |msg: String| Error::Parse { path: path.to_path_buf(), line: i + 1, msg };
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| err("unterminated section header".into()))?;
                section = name.trim().to_string();
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            if section.is_empty() {
                return Err(err("key outside of any section".into()));
            }
            raw.set(&format!("{section}.{}", k.trim()), v.trim()).map_err(|e| err(e.to_string()))?;
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?, path)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::InvalidArgument(format!("unknown config key `{key}`")));
        }
        self.entries.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Applies a `section.key=value` override.
    pub fn apply(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("expected section.key=value, got `{assignment}`")))?;
        self.set(k.trim(), v.trim())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }
}

impl fmt::Display for RawConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut section = "";
        for (k, v) in &self.entries {
            let (s, key) = k.split_once('.').expect("keys are section-qualified");
            if s != section {
                if !section.is_empty() {
                    writeln!(f)?;
                }
                writeln!(f, "[{s}]")?;
                section = s;
            }
            writeln!(f, "{key} = {v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    AllIntervals,
    AlmostAll,
    SaffariVaughan,
    ExplicitFormulaScan,
    DensityFit,
}

impl FromStr for ExperimentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all-intervals" => Self::AllIntervals,
            "almost-all" => Self::AlmostAll,
            "saffari-vaughan" => Self::SaffariVaughan,
            "explicit-formula-scan" => Self::ExplicitFormulaScan,
            "density-fit" => Self::DensityFit,
            _ => return Err(Error::InvalidArgument(format!("unknown experiment kind `{s}`"))),
        })
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::AllIntervals => "all-intervals",
            Self::AlmostAll => "almost-all",
            Self::SaffariVaughan => "saffari-vaughan",
            Self::ExplicitFormulaScan => "explicit-formula-scan",
            Self::DensityFit => "density-fit",
        })
    }
}

/// Residues or character labels to visit for each modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection {
    All,
    Principal,
    List(Vec<u64>),
}

impl FromStr for Selection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Self::All),
            "principal" => Ok(Self::Principal),
            _ => parse_u64_list(s).map(Self::List),
        }
    }
}

/// Interval lengths: explicit values or `x^e`.
#[derive(Clone, Debug, PartialEq)]
pub enum Lengths {
    Values(Vec<f64>),
    Exponent(f64),
}

impl Lengths {
    pub fn at(&self, x: f64) -> Vec<f64> {
        match self {
            Lengths::Values(v) => v.clone(),
            Lengths::Exponent(e) => vec![x.powf(*e)],
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub weight: Weight,
    /// Largest admissible fitted constant.
    pub cap: f64,
    pub x: Vec<f64>,
    pub lengths: Lengths,
    /// Multipliers `s` for extra interval starts `s·x` (all-intervals only).
    pub starts: Vec<f64>,
    pub q: Vec<u64>,
    pub residues: Selection,
    pub labels: Selection,
    pub heights: Vec<f64>,
    pub sigma: Vec<f64>,
    pub profile: EtaProfile<f64>,
    pub density: Option<DensityEstimate<f64>>,
    pub zero_dir: Option<PathBuf>,
    pub exceptional: Option<f64>,
    pub output: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    pub raw: RawConfig,
}

pub fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidArgument(format!("`{s}` is not a number")))
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(parse_f64).collect()
}

/// Comma-separated integers and inclusive ranges `a..b`; `1e6` style is accepted.
pub fn parse_u64_list(s: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            out.extend(parse_u64(a)?..=parse_u64(b)?);
        } else {
            out.push(parse_u64(part)?);
        }
    }
    Ok(out)
}

pub fn parse_u64(s: &str) -> Result<u64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 => Ok(v as u64),
        _ => Err(Error::InvalidArgument(format!("`{s}` is not a nonnegative integer"))),
    }
}

/// `grh`, `constant:η₀`, `classical:c`, `vk:c`, with an optional `T₀`.
pub fn parse_profile(s: &str, t0: Option<f64>) -> Result<EtaProfile<f64>> {
    let (name, arg) = match s.split_once(':') {
        Some((n, a)) => (n.trim(), Some(parse_f64(a)?)),
        None => (s.trim(), None),
    };
    let need = |a: Option<f64>| a.ok_or_else(|| Error::InvalidArgument(format!("profile `{name}` needs a parameter")));
    let p = match name {
        "grh" => EtaProfile::grh(),
        "constant" => EtaProfile::constant(need(arg)?)?,
        "classical" => EtaProfile::classical(need(arg)?)?,
        "vk" | "vinogradov-korobov" => EtaProfile::vinogradov_korobov(need(arg)?)?,
        _ => return Err(Error::InvalidArgument(format!("unknown profile `{name}`"))),
    };
    match t0 {
        Some(t0) => EtaProfile::new(p.family, t0),
        None => Ok(p),
    }
}

/// `const:c`, `logpower:B` or `subexp`.
pub fn parse_g(s: &str) -> Result<GFamily<f64>> {
    match s.split_once(':') {
        Some(("const", c)) => Ok(GFamily::Constant { c: parse_f64(c)? }),
        Some(("logpower", b)) => Ok(GFamily::LogPower { b: parse_f64(b)? }),
        None if s.trim() == "subexp" => Ok(GFamily::Subexp),
        _ => Err(Error::InvalidArgument(format!("unknown density factor `{s}`"))),
    }
}

impl ExperimentConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let req = |k: &str| raw.get(k).ok_or_else(|| Error::InvalidArgument(format!("missing config key `{k}`")));
        let kind: ExperimentKind = req("experiment.kind")?.parse()?;
        let weight = match raw.get("experiment.weight") {
            Some(w) => w.parse()?,
            None => Weight::Theta,
        };
        let cap = raw.get("experiment.cap").map(parse_f64).transpose()?.unwrap_or(f64::INFINITY);
        let list = |k: &str| raw.get(k).map(parse_f64_list).transpose().map(Option::unwrap_or_default);
        let lengths = match (raw.get("grid.y"), raw.get("grid.y_exponent")) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidArgument("grid.y and grid.y_exponent are exclusive".into()))
            }
            (Some(y), None) => Lengths::Values(parse_f64_list(y)?),
            (None, Some(e)) => Lengths::Exponent(parse_f64(e)?),
            (None, None) => Lengths::Values(Vec::new()),
        };
        let t0 = raw.get("envelope.t0").map(parse_f64).transpose()?;
        let profile = parse_profile(raw.get("envelope.profile").unwrap_or("grh"), t0)?;
        let density = match raw.get("envelope.mode").unwrap_or("ingham") {
            "ingham" => None,
            "density" => {
                let a = parse_f64(req("envelope.A")?)?;
                let g = parse_g(raw.get("envelope.g").unwrap_or("const:1"))?;
                Some(DensityEstimate::new(a, g)?)
            }
            m => return Err(Error::InvalidArgument(format!("unknown envelope mode `{m}`"))),
        };
        let mut starts = list("grid.starts")?;
        if starts.is_empty() {
            starts.push(1.0);
        }
        let cfg = ExperimentConfig {
            kind,
            weight,
            cap,
            x: list("grid.x")?,
            lengths,
            starts,
            q: raw.get("grid.q").map(parse_u64_list).transpose()?.unwrap_or_else(|| vec![1]),
            residues: raw.get("grid.residues").unwrap_or("all").parse()?,
            labels: raw.get("grid.labels").unwrap_or("principal").parse()?,
            heights: list("grid.T")?,
            sigma: list("grid.sigma")?,
            profile,
            density,
            zero_dir: raw.get("zeros.dir").map(PathBuf::from),
            exceptional: raw.get("zeros.exceptional").map(parse_f64).transpose()?,
            output: raw.get("experiment.output").map(PathBuf::from),
            summary: raw.get("experiment.summary").map(PathBuf::from),
            raw: raw.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.q.is_empty() || self.q.contains(&0) {
            return bad("grid.q must list positive moduli".into());
        }
        if !(self.cap > 0.0) {
            return bad(format!("cap {} must be positive", self.cap));
        }
        let needs_x = !matches!(self.kind, ExperimentKind::DensityFit);
        if needs_x && (self.x.is_empty() || self.x.iter().any(|&x| !(x >= 1.0))) {
            return bad("grid.x must list values ≥ 1".into());
        }
        let needs_len = matches!(
            self.kind,
            ExperimentKind::AllIntervals
                | ExperimentKind::AlmostAll
                | ExperimentKind::SaffariVaughan
                | ExperimentKind::ExplicitFormulaScan
        );
        if needs_len {
            let empty = matches!(&self.lengths, Lengths::Values(v) if v.is_empty());
            if empty {
                return bad("grid.y or grid.y_exponent is required".into());
            }
            for &x in &self.x {
                for y in self.lengths.at(x) {
                    let far = (x * self.starts.iter().fold(1.0f64, |a, &b| a.max(b)) * 3.0 + y.abs()).ceil();
                    if !(y != 0.0 && y.is_finite()) || !(far <= DEFAULT_SIEVE_CAP as f64) {
                        return bad(format!("grid point x={x}, y={y} leaves the sieve range"));
                    }
                }
            }
        }
        if matches!(self.kind, ExperimentKind::ExplicitFormulaScan | ExperimentKind::DensityFit)
            && self.heights.is_empty()
        {
            return bad("grid.T is required".into());
        }
        if matches!(self.kind, ExperimentKind::DensityFit) && self.sigma.is_empty() {
            return bad("grid.sigma is required".into());
        }
        if let Selection::List(rs) = &self.residues {
            for &q in &self.q {
                for &a in rs {
                    if gcd(a % q, q) != 1 {
                        return Err(Error::NotCoprime { a, q });
                    }
                }
            }
        }
        Ok(())
    }

    /// Where the CSV goes: `experiment.output`, or `<kind>.csv`.
    pub fn output_path(&self) -> PathBuf {
        self.output.clone().unwrap_or_else(|| PathBuf::from(format!("{}.csv", self.kind)))
    }

    pub fn summary_path(&self) -> PathBuf {
        self.summary.clone().unwrap_or_else(|| self.output_path().with_extension("summary.txt"))
    }
}

impl FromStr for ExperimentConfig {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::from_raw(&RawConfig::parse(s, Path::new("<config>"))?)
    }
}
