//! Deterministic output formatting: fixed 15-significant-digit numbers and
//! the text/CSV/JSON emitters shared by all subcommands.

use serde::Serialize;

/// Formats with 15 significant digits; very small or very large magnitudes
/// fall back to scientific notation. Pure function of the value, so repeated
/// runs emit identical bytes.
pub fn sig15(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = 14 - mag;
    if (0..=17).contains(&decimals) {
        format!("{x:.*}", decimals as usize)
    } else {
        format!("{x:.14e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputKind {
    Text,
    Csv,
    Json,
}

/// A spectra-style table: one row per eigenvalue index.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn render_text(&self, title: &str) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        out.push_str(title);
        out.push('\n');
        for (w, c) in widths.iter().zip(&self.columns) {
            out.push_str(&format!("{c:>w$}  "));
        }
        out.push('\n');
        for row in &self.rows {
            for (w, cell) in widths.iter().zip(row) {
                out.push_str(&format!("{cell:>w$}  "));
            }
            out.push('\n');
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn render_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
