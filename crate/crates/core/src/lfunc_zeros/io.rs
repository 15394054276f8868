//! Zero files.
//!
//! ```text
//! # q=<int> label=<int> tmax=<float> columns=gamma[,beta]
//! 14.134725141735
//! ```
//!
//! One zero per line, ascending. Lines starting with `#` other than the header
//! are comments. Real characters may store only `γ > 0`; the reader restores
//! the negative half.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{vertical_prediction, Zero, ZeroSet, ZeroSource};
use crate::arith_chars::{build_group, DirichletCharacter};
use crate::error::{Error, Result};

/// Overrides the bundled zero directory.
pub const DATA_DIR_ENV: &str = "PNTSHORT_DATA_DIR";

pub fn data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data/zeros")))
}

pub fn zero_file_name(q: u64, label: u64) -> String {
    format!("zeros_q{q}_l{label}.txt")
}

struct Header {
    q: u64,
    label: u64,
    t_max: f64,
    with_beta: bool,
}

fn parse_header(line: &str, path: &Path) -> Result<Header> {
    let err = |msg: String| Error::Parse { path: path.to_owned(), line: 1, msg };
    let (mut q, mut label, mut t_max, mut with_beta) = (None, None, None, None);
    for tok in line.trim_start_matches('#').split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or_else(|| err(format!("bad header field '{tok}'")))?;
        match k {
            "q" => q = v.parse().ok(),
            "label" => label = v.parse().ok(),
            "tmax" => t_max = v.parse::<f64>().ok(),
            "columns" => {
                with_beta = match v {
                    "gamma" => Some(false),
                    "gamma,beta" => Some(true),
                    _ => return Err(err(format!("unknown columns '{v}'"))),
                }
            }
            _ => return Err(err(format!("unknown header key '{k}'"))),
        }
    }
    match (q, label, t_max, with_beta) {
        (Some(q), Some(label), Some(t_max), Some(with_beta)) => Ok(Header { q, label, t_max, with_beta }),
        _ => Err(err("header needs q, label, tmax and columns".into())),
    }
}

/// Parses zero-file text for the character `(q, label)`.
pub fn parse_zeros(text: &str, path: &Path, q: u64, label: u64) -> Result<ZeroSet> {
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, l)) if l.trim().is_empty() => continue,
            Some((_, l)) if l.starts_with("# q=") => break parse_header(l, path)?,
            _ => {
                return Err(Error::Parse { path: path.to_owned(), line: 1, msg: "missing header".into() });
            }
        }
    };
    if header.q != q || header.label != label {
        return Err(Error::Parse {
            path: path.to_owned(),
            line: 1,
            msg: format!("file holds q={} label={}, expected q={q} label={label}", header.q, header.label),
        });
    }
    let chi = build_group(q)?.from_label(label)?;
    let mut zeros = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { path: path.to_owned(), line: i + 1, msg };
        let cols: Vec<&str> = line.split_whitespace().collect();
        let expected = if header.with_beta { 2 } else { 1 };
        if cols.len() != expected {
            return Err(err(format!("expected {expected} columns, found {}", cols.len())));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| err(format!("'{s}': {e}")));
        let gamma = num(cols[0])?;
        let beta = if header.with_beta { num(cols[1])? } else { 0.5 };
        if !(beta > 0.0 && beta < 1.0) {
            return Err(err(format!("β = {beta} outside (0, 1)")));
        }
        if let Some(prev) = zeros.last().map(|z: &Zero| z.gamma) {
            if !(gamma > prev) {
                return Err(err(format!("γ = {gamma} does not exceed the previous {prev}")));
            }
        }
        zeros.push(Zero { beta, gamma });
    }
    if chi.is_real() && zeros.first().is_some_and(|z| z.gamma > 0.0) {
        let mut full: Vec<Zero> = zeros.iter().rev().map(|z| Zero { beta: z.beta, gamma: -z.gamma }).collect();
        full.extend(zeros);
        zeros = full;
    }
    let set = ZeroSet::new(q, label, zeros, header.t_max, ZeroSource::File(path.to_owned()), chi.is_real())?;
    if header.t_max >= 4.0 {
        let f = chi.conductor();
        let predicted = vertical_prediction(f, header.t_max)?;
        let n = set.zeros().len() as f64;
        let slack = 5.0 * (f as f64 * header.t_max).ln();
        if (n - predicted).abs() > slack {
            log::warn!(
                "{}: {n} zeros up to {}, vertical prediction {predicted:.2}",
                path.display(),
                header.t_max
            );
        }
    }
    Ok(set)
}

pub fn load_zeros(path: &Path, q: u64, label: u64) -> Result<ZeroSet> {
    let text = fs::read_to_string(path)?;
    parse_zeros(&text, path, q, label)
}

/// Writes `zeros`; real characters keep only `γ > 0`.
pub fn write_zeros<W: Write>(mut out: W, zeros: &ZeroSet) -> Result<()> {
    let with_beta = !zeros.critical_line();
    writeln!(
        out,
        "# q={} label={} tmax={} columns={}",
        zeros.modulus(),
        zeros.label(),
        zeros.t_max(),
        if with_beta { "gamma,beta" } else { "gamma" }
    )?;
    for z in zeros.zeros() {
        if zeros.is_real_character() && z.gamma <= 0.0 && !with_beta {
            continue;
        }
        if with_beta {
            writeln!(out, "{:.12} {}", z.gamma, z.beta)?;
        } else {
            writeln!(out, "{:.12}", z.gamma)?;
        }
    }
    Ok(())
}

/// Zeros of `L(s, χ)` from the data directory, via the inducing primitive character.
pub fn load_for_character(chi: &DirichletCharacter, dir: &Path) -> Result<ZeroSet> {
    let p = chi.primitive()?;
    let path = dir.join(zero_file_name(p.modulus(), p.label()));
    let set = if path.exists() {
        load_zeros(&path, p.modulus(), p.label())?
    } else {
        let c = p.conj();
        let alt = dir.join(zero_file_name(c.modulus(), c.label()));
        if !alt.exists() {
            return Err(Error::MissingZeros(format!(
                "q={} label={} (looked for {})",
                p.modulus(),
                p.label(),
                path.display()
            )));
        }
        load_zeros(&alt, c.modulus(), c.label())?.reflected()
    };
    Ok(set.relabeled(chi.modulus(), chi.label()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> PathBuf {
        PathBuf::from("test.txt")
    }

    #[test]
    fn parse_rules() {
        let zs = parse_zeros("# q=1 label=1 tmax=0 columns=gamma\n", &p(), 1, 1).unwrap();
        assert!(zs.zeros().is_empty());
        let zs = parse_zeros("# q=3 label=2 tmax=20 columns=gamma\n# comment\n8.03973716\n", &p(), 3, 2).unwrap();
        assert_eq!(zs.zeros().len(), 2);
        assert!(zs.critical_line());
        assert_eq!(zs.zeros()[0].gamma, -8.03973716);
        let e = parse_zeros("# q=1 label=1 tmax=30 columns=gamma\n14.1\n21.0\nabc\n", &p(), 1, 1).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, .. }), "{e}");
        let e = parse_zeros("# q=1 label=1 tmax=30 columns=gamma\n21.0\n14.1\n", &p(), 1, 1).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        let e = parse_zeros("# q=1 label=1 tmax=30 columns=gamma,beta\n14.1 1.5\n", &p(), 1, 1).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(parse_zeros("# q=5 label=2 tmax=30 columns=gamma\n", &p(), 5, 3).is_err());
        assert!(parse_zeros("14.1\n", &p(), 1, 1).is_err());
    }

    #[test]
    fn write_then_parse() {
        let text = "# q=5 label=2 tmax=10 columns=gamma,beta\n-6.6485 0.5\n3.5 0.5\n4.0 0.7\n";
        let zs = parse_zeros(text, &p(), 5, 2).unwrap();
        let mut buf = Vec::new();
        write_zeros(&mut buf, &zs).unwrap();
        let back = parse_zeros(std::str::from_utf8(&buf).unwrap(), &p(), 5, 2).unwrap();
        assert_eq!(back.zeros(), zs.zeros());
    }
}
