use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use sha2::{Digest, Sha256};

use super::config::ExperimentKind;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    /// Grid parameters, in the order of [`ExperimentReport::columns`].
    pub params: Vec<f64>,
    pub empirical: f64,
    pub envelope: f64,
    pub ratio: f64,
}

impl Record {
    pub fn new(params: Vec<f64>, empirical: f64, envelope: f64) -> Self {
        let ratio = if empirical == 0.0 { 0.0 } else { empirical / envelope };
        Self { params, empirical, envelope, ratio }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub kind: ExperimentKind,
    pub columns: Vec<String>,
    pub records: Vec<Record>,
    /// Largest ratio over all records.
    pub c_fit: f64,
    pub cap: f64,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub runtime: Duration,
    /// `(input, sha256)` for the config and every zero file read.
    pub digests: Vec<(String, String)>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

impl ExperimentReport {
    pub(crate) fn new(
        kind: ExperimentKind,
        columns: &[&str],
        records: Vec<Record>,
        cap: f64,
        checks: Vec<Check>,
        notes: Vec<String>,
    ) -> Self {
        let c_fit = records.iter().map(|r| r.ratio).fold(0.0, f64::max);
        Self {
            kind,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            records,
            c_fit,
            cap,
            checks,
            notes,
            runtime: Duration::ZERO,
            digests: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.c_fit <= self.cap && self.records.iter().all(|r| !r.ratio.is_nan()) && self.checks.iter().all(|c| c.passed)
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = self.columns.clone();
        h.extend(["empirical", "envelope", "ratio"].map(String::from));
        h
    }

    /// CSV with one row per record; floats use the shortest round-trip form.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.header())?;
        for r in &self.records {
            let row = r.params.iter().chain([&r.empirical, &r.envelope, &r.ratio]).map(|v| v.to_string());
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn write_summary<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "experiment: {}", self.kind)?;
        writeln!(out, "records: {}", self.records.len())?;
        writeln!(out, "fitted constant: {}", self.c_fit)?;
        writeln!(out, "cap: {}", self.cap)?;
        for c in &self.checks {
            writeln!(out, "check {}: {} ({})", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail)?;
        }
        for n in &self.notes {
            writeln!(out, "note: {n}")?;
        }
        writeln!(out, "result: {}", if self.passed() { "pass" } else { "FAIL" })?;
        writeln!(out, "runtime: {:.3} s", self.runtime.as_secs_f64())?;
        for (name, digest) in &self.digests {
            writeln!(out, "sha256 {name}: {digest}")?;
        }
        Ok(())
    }

    pub fn save(&self, csv_path: &Path, summary_path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(csv_path)?)?;
        self.write_summary(std::fs::File::create(summary_path)?)?;
        Ok(())
    }
}

/// Header and rows of a report CSV.
pub fn read_csv<R: Read>(input: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| Error::Format(format!("`{f}` is not a number"))))
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

pub(crate) fn file_digest(path: &PathBuf) -> Result<(String, String)> {
    Ok((path.display().to_string(), sha256_hex(&std::fs::read(path)?)))
}
