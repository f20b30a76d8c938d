//! Symmetric banded matrix storage for the per-mode stiffness and mass
//! matrices.

use serde::Serialize;

use crate::error::{Error, Result};

/// A real symmetric matrix stored by diagonals: `diagonals[off][k]` holds the
/// entry `(k, k+off)` for offsets `0..=bandwidth`. Only the upper offsets are
/// stored, so symmetry holds by construction.
#[derive(Debug, Clone, Serialize)]
pub struct BandedSymmetricMatrix {
    pub size: usize,
    pub bandwidth: usize,
    pub diagonals: Vec<Vec<f64>>,
}

impl BandedSymmetricMatrix {
    pub fn zeros(size: usize, bandwidth: usize) -> Self {
        let diagonals = (0..=bandwidth)
            .map(|off| vec![0.0; size.saturating_sub(off)])
            .collect();
        Self {
            size,
            bandwidth,
            diagonals,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let off = hi - lo;
        if off > self.bandwidth {
            0.0
        } else {
            self.diagonals[off][lo]
        }
    }

    /// Sets the symmetric pair `(i, j)`/`(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let off = hi - lo;
        assert!(off <= self.bandwidth, "entry outside the band");
        self.diagonals[off][lo] = value;
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.size;
        let mut dense = vec![0.0; n * n];
        for i in 0..n {
            for j in i..(i + self.bandwidth + 1).min(n) {
                let v = self.get(i, j);
                dense[i * n + j] = v;
                dense[j * n + i] = v;
            }
        }
        dense
    }

    /// Symmetric positive definiteness via an unpivoted Cholesky attempt.
    pub fn check_spd(&self, context: &'static str) -> Result<()> {
        let n = self.size;
        let mut a = self.to_dense();
        for j in 0..n {
            let mut d = a[j * n + j];
            for k in 0..j {
                d -= a[j * n + k] * a[j * n + k];
            }
            if d <= 0.0 || !d.is_finite() {
                return Err(Error::SpdViolation {
                    context,
                    index: j,
                    pivot: d,
                });
            }
            let d_sqrt = d.sqrt();
            a[j * n + j] = d_sqrt;
            for i in (j + 1)..n {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= a[i * n + k] * a[j * n + k];
                }
                a[i * n + j] = s / d_sqrt;
            }
        }
        Ok(())
    }

    /// Plain-text dump, one diagonal per line.
    pub fn dump_text(&self) -> String {
        let mut out = format!("size {} bandwidth {}\n", self.size, self.bandwidth);
        for (off, diag) in self.diagonals.iter().enumerate() {
            out.push_str(&format!("offset {off}:"));
            for v in diag {
                out.push_str(&format!(" {v:.17e}"));
            }
            out.push('\n');
        }
        out
    }

    /// JSON dump in the `{size, bandwidth, diagonals}` schema.
    pub fn dump_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("banded matrix serializes")
    }
}
