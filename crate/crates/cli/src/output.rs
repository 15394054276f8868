use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// `v` to nine significant digits, `%g` style.
pub fn sig9(v: f64) -> String {
    if !v.is_finite() || v == 0.0 {
        return v.to_string();
    }
    let sci = format!("{v:.8e}");
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let fixed = format!("{v:.*}", (8 - exp).max(0) as usize);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mant))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn single(name: &str, value: impl Into<Cell>) -> Self {
        let mut t = Self::new(&[name]);
        t.push(vec![value.into()]);
        t
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    fn render(cell: &Cell, full: bool, csv: bool) -> String {
        match cell {
            Cell::Num(v) if full || csv => v.to_string(),
            Cell::Num(v) => sig9(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    /// A lone value prints bare; anything else as aligned columns or CSV.
    /// CSV always carries full precision.
    pub fn write<W: Write>(&self, mut out: W, format: Format, full: bool) -> Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(|c| Self::render(c, full, true)))?;
                }
                w.flush()?;
            }
            Format::Text if self.header.len() == 1 && self.rows.len() == 1 => {
                writeln!(out, "{}", Self::render(&self.rows[0][0], full, false))?;
            }
            Format::Text => {
                let cells: Vec<Vec<String>> =
                    self.rows.iter().map(|r| r.iter().map(|c| Self::render(c, full, false)).collect()).collect();
                let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
                for r in &cells {
                    for (w, c) in widths.iter_mut().zip(r) {
                        *w = (*w).max(c.chars().count());
                    }
                }
                let line = |r: &[String]| {
                    r.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ")
                };
                writeln!(out, "{}", line(&self.header))?;
                for r in &cells {
                    writeln!(out, "{}", line(r))?;
                }
            }
        }
        Ok(())
    }
}
