//! Bessel functions of the first kind and their zeros: the analytic ground
//! truth for the disk, whose eigenvalues are squares of the positive zeros of
//! `J_{m+1}`.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ORDER: u32 = 60;
const MAX_ARG: f64 = 500.0;

/// One positive zero `j_{ν,k}` of `J_ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselZero {
    pub order: u32,
    pub index: usize,
    pub value: f64,
}

/// Largest argument handed to the ascending series. Beyond it the series'
/// alternating terms outgrow the result and the cancellation noise would
/// exceed the 1e-13 accuracy target, while the backward recurrence stays
/// uniformly stable, so the recurrence takes over early.
const SERIES_LIMIT: f64 = 9.0;

/// `J_order(x)` for `order ≤ 60`, `0 ≤ x ≤ 500`.
///
/// Ascending power series for small arguments, backward (Miller) recurrence
/// normalized by `J₀ + 2ΣJ_{2k} = 1` otherwise.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    if order > MAX_ORDER || !(0.0..=MAX_ARG).contains(&x) {
        return Err(Error::BesselOutOfRange { order, x });
    }
    if x == 0.0 {
        return Ok(if order == 0 { 1.0 } else { 0.0 });
    }
    if x <= SERIES_LIMIT {
        Ok(series(order, x))
    } else {
        Ok(miller(order, x))
    }
}

/// `J'_order(x)` from the downward recurrence relation.
pub fn bessel_j_derivative(order: u32, x: f64) -> Result<f64> {
    if order == 0 {
        Ok(-bessel_j(1, x)?)
    } else {
        Ok(bessel_j(order - 1, x)? - order as f64 / x * bessel_j(order, x)?)
    }
}

fn series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for j in 1..=order {
        term *= half / j as f64;
    }
    // compensated summation keeps the cancellation mild near the threshold
    let mut sum = term;
    let mut comp = 0.0;
    let q = half * half;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= -q / (k as f64 * (k + order) as f64);
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.abs() < 1e-18 * sum.abs().max(f64::MIN_POSITIVE) || k > 400 {
            break;
        }
    }
    sum
}

fn miller(order: u32, x: f64) -> f64 {
    let depth = order as usize + (1.5 * x).ceil() as usize + 20;
    let mut f_up = 0.0f64; // J at index k+1
    let mut f = 1e-30f64; // J at index k
    let mut norm = 0.0f64;
    let mut target = 0.0f64;
    for k in (1..=depth).rev() {
        let f_down = 2.0 * k as f64 / x * f - f_up;
        f_up = f;
        f = f_down;
        if k - 1 == order as usize {
            target = f;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * f;
        }
        if f.abs() > 1e280 {
            f *= 1e-280;
            f_up *= 1e-280;
            norm *= 1e-280;
            target *= 1e-280;
        }
    }
    norm += f; // J_0 contribution
    target / norm
}

/// The first `count` positive zeros of `J_order`, ascending.
///
/// The sign lattice of `J_order` is scanned with step `π/4` starting from the
/// order (the first zero always exceeds it); each bracket is bisected and the
/// root Newton-polished.
pub fn bessel_zeros(order: u32, count: usize) -> Result<Vec<BesselZero>> {
    let mut zeros = Vec::with_capacity(count);
    let mut step = std::f64::consts::FRAC_PI_4;
    let mut attempts = 0;
    'retry: loop {
        zeros.clear();
        let start = (order as f64).max(0.1);
        let mut x0 = start;
        let mut f0 = bessel_j(order, x0)?;
        let limit = start + (count as f64 + 8.0) * std::f64::consts::PI * 2.0;
        while zeros.len() < count {
            let x1 = x0 + step;
            if x1 > limit.min(MAX_ARG) {
                attempts += 1;
                if attempts >= 3 {
                    return Err(Error::BracketFailure {
                        order,
                        index: zeros.len() + 1,
                    });
                }
                step *= 0.5;
                continue 'retry;
            }
            let f1 = bessel_j(order, x1)?;
            if f0 == 0.0 {
                zeros.push(polish(order, x0, x0, x0)?);
            } else if f0.signum() != f1.signum() {
                zeros.push(polish(order, x0, x1, 0.5 * (x0 + x1))?);
            }
            x0 = x1;
            f0 = f1;
        }
        zeros.truncate(count);
        for (i, z) in zeros.iter_mut().enumerate() {
            z.index = i + 1;
        }
        return Ok(zeros);
    }
}

fn polish(order: u32, mut lo: f64, mut hi: f64, seed: f64) -> Result<BesselZero> {
    let mut f_lo = bessel_j(order, lo)?;
    for _ in 0..52 {
        if hi - lo < 1e-14 * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = bessel_j(order, mid)?;
        if f_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (f_lo > 0.0) == (f_mid > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let mut x = if lo == hi { lo } else { 0.5 * (lo + hi) };
    if x == 0.0 {
        x = seed;
    }
    for _ in 0..4 {
        let f = bessel_j(order, x)?;
        let df = bessel_j_derivative(order, x)?;
        if df == 0.0 {
            break;
        }
        let step = f / df;
        x -= step;
        if step.abs() < 1e-16 * x {
            break;
        }
    }
    Ok(BesselZero {
        order,
        index: 0,
        value: x,
    })
}

/// Exact Stokes eigenvalues of the disk for mode `m`: `{ j_{m+1,l}² }`.
pub fn exact_disk_eigenvalues(m: u32, count: usize) -> Result<Vec<f64>> {
    if m > 40 || count > 20 {
        return Err(Error::InvalidRequest(format!(
            "exact disk eigenvalues support m <= 40, k <= 20 (asked m={m}, k={count})"
        )));
    }
    Ok(bessel_zeros(m + 1, count)?
        .into_iter()
        .map(|z| z.value * z.value)
        .collect())
}

/// Exact eigenfunction `[J_m(√λ)(√λ r)^m - (√λ)^m J_m(√λ r)]·e^{imθ}`,
/// evaluated with the common `(√λ)^m` factor pulled out so that the clamped
/// boundary value at `r = 1` cancels exactly.
pub fn exact_eigenfunction(m: u32, lambda: f64, r: f64, theta: f64) -> Result<Complex64> {
    let root = lambda.sqrt();
    let radial = bessel_j(m, root)? * r.powi(m as i32) - bessel_j(m, root * r)?;
    let amp = root.powi(m as i32) * radial;
    Ok(Complex64::from_polar(amp, m as f64 * theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(3, 0.0).unwrap(), 0.0);
        assert!(bessel_j(61, 1.0).is_err());
        assert!(bessel_j(0, 501.0).is_err());
    }

    #[test]
    fn first_zero_of_j1() {
        let x = 3.8317059702075123;
        assert_abs_diff_eq!(bessel_j(1, x).unwrap(), 0.0, epsilon = 1e-12);
        let zeros = bessel_zeros(1, 1).unwrap();
        assert_abs_diff_eq!(zeros[0].value, x, epsilon = 1e-12);
        assert_abs_diff_eq!(
            zeros[0].value * zeros[0].value,
            14.6819706421239,
            epsilon = 1e-10
        );
    }

    #[test]
    fn series_and_miller_consistent() {
        // Values around the switch-over must agree between the two methods.
        for order in [0u32, 1, 2, 5, 10] {
            for &x in &[7.0, 8.0, SERIES_LIMIT, 10.0, 11.0] {
                let s = series(order, x);
                let m = miller(order, x);
                assert_abs_diff_eq!(s, m, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn zero_polish_residuals() {
        for order in [1u32, 3, 8, 41] {
            for z in bessel_zeros(order, 6).unwrap() {
                assert_abs_diff_eq!(bessel_j(order, z.value).unwrap(), 0.0, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn interlacing_of_zeros() {
        // j_{ν,k} < j_{ν+1,k} < j_{ν,k+1}
        for order in 0..12u32 {
            let a = bessel_zeros(order, 8).unwrap();
            let b = bessel_zeros(order + 1, 8).unwrap();
            for k in 0..7 {
                assert!(a[k].value < b[k].value);
                assert!(b[k].value < a[k + 1].value);
            }
        }
    }

    #[test]
    fn determinant_identity() {
        // √λ·J'_m(√λ) - m·J_m(√λ) = -√λ·J_{m+1}(√λ)
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let m = (next() * 8.0) as u32;
            let lambda = 1.0 + next() * 300.0;
            let root = lambda.sqrt();
            let lhs = root * bessel_j_derivative(m, root).unwrap()
                - m as f64 * bessel_j(m, root).unwrap();
            let rhs = -root * bessel_j(m + 1, root).unwrap();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-11);
        }
    }

    #[test]
    fn known_disk_eigenvalues() {
        let e0 = exact_disk_eigenvalues(0, 1).unwrap();
        assert_abs_diff_eq!(e0[0], 14.6819706421239, epsilon = 1e-10);
        let e1 = exact_disk_eigenvalues(1, 1).unwrap();
        assert_abs_diff_eq!(e1[0], 26.3746164271634, epsilon = 1e-10);
        let e2 = exact_disk_eigenvalues(2, 4).unwrap();
        for (got, want) in e2.iter().zip([
            40.7064658182003,
            95.2775725440371,
            169.3954498260990,
            263.2008542550075,
        ]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-9 * want);
        }
    }

    #[test]
    fn eigenfunction_clamped_boundary() {
        let lambda = exact_disk_eigenvalues(2, 1).unwrap()[0];
        for &theta in &[0.0, 0.7, 2.1] {
            let v = exact_eigenfunction(2, lambda, 1.0, theta).unwrap();
            assert_abs_diff_eq!(v.norm(), 0.0, epsilon = 1e-12);
        }
        // normal derivative vanishes too (clamped plate); centered difference
        let lambda0 = exact_disk_eigenvalues(0, 1).unwrap()[0];
        let h = 1e-6;
        let f = |r: f64| exact_eigenfunction(0, lambda0, r, 0.3).unwrap().re;
        let dr = (f(1.0 + h) - f(1.0 - h)) / (2.0 * h);
        assert_abs_diff_eq!(dr, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn eigenfunction_interior_regression_pin() {
        let lambda = exact_disk_eigenvalues(0, 1).unwrap()[0];
        let v = exact_eigenfunction(0, lambda, 0.5, 0.0).unwrap();
        // frozen from a direct evaluation of the analytic formula
        assert_abs_diff_eq!(
            v.re,
            bessel_j(0, lambda.sqrt()).unwrap() - bessel_j(0, lambda.sqrt() * 0.5).unwrap(),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-14);
    }
}
