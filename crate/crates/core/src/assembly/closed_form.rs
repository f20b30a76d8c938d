//! Closed-form matrix entries.
//!
//! The formulas are stated for `j ≥ i`; symmetric completion handles the rest.
//! Every rational is evaluated as an integer numerator over an integer
//! denominator with a single final division. The `δ_{i,3}` corrections for the
//! low-mode extra functions apply to modes 0 and 1 only.

use super::DiskAssembly;

/// Assembly from the exact closed-form entries.
pub struct ClosedFormAssembly;

fn frac(num: i64, den: i64) -> f64 {
    num as f64 / den as f64
}

impl DiskAssembly for ClosedFormAssembly {
    fn name(&self) -> &'static str {
        "closed-form"
    }

    fn stiffness_entry(&self, m: i32, i: usize, j: usize) -> f64 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let off = j - i;
        if off >= 3 {
            return 0.0;
        }
        let mm = m.unsigned_abs() as i64;
        let i = i as i64;
        let (m2, m4) = (mm * mm, mm * mm * mm * mm);
        let low = i == 3;
        let d0 = low && mm == 0;
        let d1 = low && mm == 1;
        match off {
            0 => {
                let num = (i - 3)
                    * (i - 2)
                    * (3 * i * i * i * i + 2 * i * i * m2 + 3 * m4 - 24 * i * i * i - 8 * i * m2
                        + 70 * i * i
                        - 88 * i
                        + 42);
                let den = 4 * (2 * i - 5) * (i - 1) * (2 * i - 3);
                frac(num, den) + if d0 { 9.0 / 16.0 } else { 0.0 } + if d1 { 0.5 } else { 0.0 }
            }
            1 => {
                let num = (i - 2)
                    * (i - 3)
                    * (4 * i * i * i * i - 4 * m4 - 24 * i * i * i + 50 * i * i + 10 * m2 - 42 * i
                        + 9);
                let den = 4 * (2 * i - 5) * (2 * i - 1) * (2 * i - 3);
                frac(num, den) + if d0 { 3.0 / 20.0 } else { 0.0 } + if d1 { 0.25 } else { 0.0 }
            }
            _ => {
                let num = (i - 3) * (i - 2 + mm) * (i - 2 - mm) * (i - mm) * (i + mm);
                let den = 8 * (2 * i - 1) * (2 * i - 3);
                frac(num, den) + if d0 { 3.0 / 40.0 } else { 0.0 }
            }
        }
    }

    fn mass_entry(&self, m: i32, i: usize, j: usize) -> f64 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let off = j - i;
        if off >= 5 {
            return 0.0;
        }
        let mm = m.unsigned_abs() as i64;
        let i = i as i64;
        let m2 = mm * mm;
        let low = i == 3;
        let d0 = low && mm == 0;
        let d1 = low && mm == 1;
        match off {
            0 => {
                let num = (i - 3) * (i - 3) * (i - 2) * (5 * i * i + 3 * m2 - 20 * i + 8);
                let den = 16 * (2 * i - 7) * (2 * i - 1) * (2 * i - 3) * (2 * i - 5);
                frac(num, den)
                    + if d0 { 3.0 / 80.0 } else { 0.0 }
                    + if d1 { 1.0 / 60.0 } else { 0.0 }
            }
            1 => {
                let num = (i - 2)
                    * (i - 3)
                    * (4 * i * i * i * i - 24 * i * i * i + 43 * i * i + 6 * m2 - 21 * i - 26);
                let den = 16 * (2 * i - 7) * (2 * i - 5) * (2 * i + 1) * (2 * i - 1) * (2 * i - 3);
                frac(num, den)
                    + if d0 { 1.0 / 140.0 } else { 0.0 }
                    + if d1 { 1.0 / 84.0 } else { 0.0 }
            }
            2 => {
                let num = (i - 1) * (i - 1) * (i - 3) * (i * i + m2 - 2 * i - 4);
                let den = 8 * (2 * i - 5) * (2 * i + 1) * (2 * i - 1) * (2 * i - 3);
                -frac(num, den) - if d0 { 3.0 / 560.0 } else { 0.0 }
            }
            3 => {
                let num = i
                    * (i - 3)
                    * (4 * i * i * i * i - 8 * i * i * i - 13 * i * i + 6 * m2 + 17 * i - 6);
                let den = 16 * (2 * i - 5) * (2 * i - 3) * (2 * i - 1) * (2 * i + 3) * (2 * i + 1);
                -frac(num, den)
                    - if d0 { 3.0 / 280.0 } else { 0.0 }
                    - if d1 { 1.0 / 120.0 } else { 0.0 }
            }
            _ => {
                let num = (i - 3) * i * (i + 1) * (i - mm) * (i + mm);
                let den = 32 * (2 * i - 3) * (2 * i - 1) * (2 * i + 3) * (2 * i + 1);
                -frac(num, den)
                    - if d0 { 1.0 / 280.0 } else { 0.0 }
                    - if d1 { 1.0 / 315.0 } else { 0.0 }
            }
        }
    }
}
