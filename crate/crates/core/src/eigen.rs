//! Dense solver for the symmetric-definite generalized eigenvalue problem
//! `A x = λ B x` with `B` symmetric positive definite.
//!
//! Pipeline: Cholesky `B = LLᵀ`, reduction to the standard problem
//! `C = L⁻¹AL⁻ᵀ`, Householder tridiagonalization, implicit-shift QL for the
//! eigenvalues, eigenvectors either by accumulated transforms (small
//! problems) or by inverse iteration on the tridiagonal (large ones), back
//! substitution `x = L⁻ᵀy`, B-normalization, and a final Rayleigh-quotient
//! refinement of each reported eigenvalue.

use serde::Serialize;

use crate::banded::BandedSymmetricMatrix;
use crate::error::{Error, Result};

/// Problems up to this size accumulate the full eigenvector matrix; larger
/// ones use QL for values only plus inverse iteration for the requested few.
const FULL_VECTOR_LIMIT: usize = 360;

/// Which geometry a spectrum belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainTag {
    Disk,
    Ellipse,
}

/// Provenance of a computed spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumMeta {
    pub domain: DomainTag,
    /// Fourier mode for per-mode disk problems; `None` for the coupled solve.
    pub mode: Option<i32>,
    /// Truncation degree N.
    pub degree: usize,
}

/// Ascending eigenvalues with B-normalized eigenvectors and their relative
/// residuals `‖Av - λBv‖ / ‖Av‖`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub meta: SpectrumMeta,
}

impl Spectrum {
    /// Eigenvalues with near-duplicates (within the relative tolerance)
    /// collapsed to their first representative.
    pub fn deduplicated(&self, rel_tol: f64) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for &v in &self.eigenvalues {
            if out
                .last()
                .is_none_or(|&p| (v - p).abs() > rel_tol * v.abs().max(1.0))
            {
                out.push(v);
            }
        }
        out
    }
}

/// Dense row-major symmetric storage used internally.
#[derive(Debug, Clone)]
pub struct DenseSym {
    pub n: usize,
    pub data: Vec<f64>,
}

impl DenseSym {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_banded(b: &BandedSymmetricMatrix) -> Self {
        Self {
            n: b.size,
            data: b.to_dense(),
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            y[i] = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// In-place lower Cholesky factorization. The upper triangle is zeroed.
fn cholesky_lower(a: &mut DenseSym) -> Result<()> {
    let n = a.n;
    let mut pivot_row = vec![0.0; n];
    for j in 0..n {
        pivot_row[..j].copy_from_slice(&a.data[j * n..j * n + j]);
        let d = a.get(j, j) - dot(&pivot_row[..j], &pivot_row[..j]);
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::CholeskyFailure { index: j, pivot: d });
        }
        let ds = d.sqrt();
        a.set(j, j, ds);
        for i in (j + 1)..n {
            let row = &a.data[i * n..i * n + j];
            let s = a.get(i, j) - dot(row, &pivot_row[..j]);
            a.set(i, j, s / ds);
        }
        for i in 0..j {
            a.set(i, j, 0.0);
        }
    }
    Ok(())
}

/// Solves `L y = b` in place.
fn forward_subst(l: &DenseSym, b: &mut [f64]) {
    let n = l.n;
    for i in 0..n {
        let row = &l.data[i * n..i * n + i];
        let s = b[i] - dot(row, &b[..i]);
        b[i] = s / l.get(i, i);
    }
}

/// Solves `Lᵀ y = b` in place.
fn backward_subst_t(l: &DenseSym, b: &mut [f64]) {
    let n = l.n;
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s -= l.get(k, i) * b[k];
        }
        b[i] = s / l.get(i, i);
    }
}

/// Forms `C = L⁻¹ A L⁻ᵀ` and symmetrizes it.
fn reduce_to_standard(a: &DenseSym, l: &DenseSym) -> DenseSym {
    let n = a.n;
    // X = L⁻¹ A row by row: X[i,:] = (A[i,:] - Σ_{k<i} l_ik X[k,:]) / l_ii.
    let mut x = a.clone();
    for i in 0..n {
        for k in 0..i {
            let lik = l.get(i, k);
            if lik != 0.0 {
                let (head, tail) = x.data.split_at_mut(i * n);
                let xk = &head[k * n..k * n + n];
                let xi = &mut tail[..n];
                for (t, &s) in xi.iter_mut().zip(xk) {
                    *t -= lik * s;
                }
            }
        }
        let lii = l.get(i, i);
        for t in x.data[i * n..(i + 1) * n].iter_mut() {
            *t /= lii;
        }
    }
    // C = X L⁻ᵀ: each row of C solves the same triangular system.
    let mut c = DenseSym::zeros(n);
    let mut row = vec![0.0; n];
    for i in 0..n {
        row.copy_from_slice(&x.data[i * n..(i + 1) * n]);
        forward_subst(l, &mut row);
        c.data[i * n..(i + 1) * n].copy_from_slice(&row);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (c.get(i, j) + c.get(j, i));
            c.set(i, j, v);
            c.set(j, i, v);
        }
    }
    c
}

/// One Householder reflector acting on the trailing subvector.
struct Reflector {
    start: usize,
    v: Vec<f64>,
}

/// Householder reduction of a symmetric matrix to tridiagonal form.
/// Returns the diagonal, the subdiagonal (`e[i]` couples `i-1` and `i`), and
/// the reflectors for later back-transformation.
fn tridiagonalize(a: &mut DenseSym) -> (Vec<f64>, Vec<f64>, Vec<Reflector>) {
    let n = a.n;
    let mut reflectors = Vec::new();
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut x = vec![0.0; m];
        for i in 0..m {
            x[i] = a.get(k + 1 + i, k);
        }
        let norm_x = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let alpha = if x[0] >= 0.0 { -norm_x } else { norm_x };
        let mut v = x;
        v[0] -= alpha;
        let norm_v = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        if norm_v == 0.0 {
            continue;
        }
        for t in v.iter_mut() {
            *t /= norm_v;
        }
        // Symmetric update of the trailing block: A' = A - 2vwᵀ - 2wvᵀ,
        // w = Av - (vᵀAv)v.
        let mut p = vec![0.0; m];
        for i in 0..m {
            let row = &a.data[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            p[i] = dot(row, &v);
        }
        let vt_p = dot(&v, &p);
        let w: Vec<f64> = p.iter().zip(&v).map(|(pi, vi)| pi - vt_p * vi).collect();
        for i in 0..m {
            let (vi, wi) = (v[i], w[i]);
            let row = &mut a.data[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            for ((t, &vj), &wj) in row.iter_mut().zip(&v).zip(&w) {
                *t -= 2.0 * (vi * wj + wi * vj);
            }
        }
        a.set(k + 1, k, alpha);
        a.set(k, k + 1, alpha);
        for i in 1..m {
            a.set(k + 1 + i, k, 0.0);
            a.set(k, k + 1 + i, 0.0);
        }
        reflectors.push(Reflector { start: k + 1, v });
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in 0..n {
        d[i] = a.get(i, i);
        if i > 0 {
            e[i] = a.get(i, i - 1);
        }
    }
    (d, e, reflectors)
}

/// Applies the accumulated orthogonal factor to a vector living in the
/// tridiagonal coordinates: `y ← Q y` with `Q = H₀H₁…`.
fn apply_q(reflectors: &[Reflector], y: &mut [f64]) {
    for refl in reflectors.iter().rev() {
        let seg = &mut y[refl.start..refl.start + refl.v.len()];
        let dot: f64 = refl.v.iter().zip(seg.iter()).map(|(a, b)| a * b).sum();
        for (t, &vi) in seg.iter_mut().zip(&refl.v) {
            *t -= 2.0 * dot * vi;
        }
    }
}

/// Explicitly forms `Q` column by column (small problems only).
fn form_q(reflectors: &[Reflector], n: usize) -> Vec<f64> {
    let mut q = vec![0.0; n * n];
    let mut col = vec![0.0; n];
    for j in 0..n {
        col.iter_mut().for_each(|t| *t = 0.0);
        col[j] = 1.0;
        apply_q(reflectors, &mut col);
        for i in 0..n {
            q[i * n + j] = col[i];
        }
    }
    q
}

fn hypot(a: f64, b: f64) -> f64 {
    a.hypot(b)
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix. When `z` is
/// provided its columns are rotated along, turning them into eigenvectors.
/// Convergence test uses machine epsilon on neighbouring diagonal scales; the
/// total iteration budget is `50·n`.
fn tql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let budget = 50 * n.max(1);
    let mut used = 0usize;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m == n {
            m = n - 1;
        }
        if m > l {
            loop {
                used += 1;
                if used > budget {
                    return Err(Error::QlNonConvergence { index: l });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for i in (l + 2)..n {
                    d[i] -= h;
                }
                f += h;
                p = d[m];
                let mut c = 1.0;
                let mut c2 = 1.0;
                let mut c3 = 1.0;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let gg = c * e[i];
                    h = c * p;
                    r = hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * gg;
                    d[i + 1] = h + s * (c * gg + s * d[i]);
                    if let Some(zz) = z.as_deref_mut() {
                        for k in 0..n {
                            let hk = zz[k * n + i + 1];
                            zz[k * n + i + 1] = s * zz[k * n + i] + c * hk;
                            zz[k * n + i] = c * zz[k * n + i] - s * hk;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Inverse iteration for one eigenvalue of a symmetric tridiagonal matrix.
/// `ortho` holds already-computed vectors of the same cluster to
/// orthogonalize against.
fn tridiag_inverse_iteration(d: &[f64], e: &[f64], lambda: f64, ortho: &[Vec<f64>]) -> Vec<f64> {
    let n = d.len();
    let norm_t = (0..n)
        .map(|i| {
            d[i].abs()
                + if i > 0 { e[i].abs() } else { 0.0 }
                + if i + 1 < n { e[i + 1].abs() } else { 0.0 }
        })
        .fold(0.0f64, f64::max);
    // Slightly perturbed shift keeps the factorization nonsingular inside
    // clusters.
    let shift = lambda + (ortho.len() as f64) * 16.0 * f64::EPSILON * norm_t.max(1.0);

    // LU factorization of (T - shift·I) with partial pivoting. The band
    // gains one extra superdiagonal.
    let mut diag: Vec<f64> = (0..n).map(|i| d[i] - shift).collect();
    let mut sup1: Vec<f64> = (0..n)
        .map(|i| if i + 1 < n { e[i + 1] } else { 0.0 })
        .collect();
    let mut sup2 = vec![0.0; n];
    let mut sub = vec![0.0; n];
    let mut swapped = vec![false; n];
    {
        let mut lower: Vec<f64> = (0..n)
            .map(|i| if i + 1 < n { e[i + 1] } else { 0.0 })
            .collect();
        for i in 0..n.saturating_sub(1) {
            if lower[i].abs() > diag[i].abs() {
                swapped[i] = true;
                std::mem::swap(&mut diag[i], &mut lower[i]);
                std::mem::swap(&mut sup1[i], &mut diag[i + 1]);
                if i + 2 < n {
                    sup2[i] = sup1[i + 1];
                    sup1[i + 1] = 0.0;
                }
            }
            if diag[i] == 0.0 {
                diag[i] = f64::EPSILON * norm_t.max(1.0);
            }
            let mult = lower[i] / diag[i];
            sub[i] = mult;
            diag[i + 1] -= mult * sup1[i];
            if i + 2 < n {
                sup1[i + 1] -= mult * sup2[i];
            }
        }
        if diag[n - 1] == 0.0 {
            diag[n - 1] = f64::EPSILON * norm_t.max(1.0);
        }
    }

    let solve = |b: &mut Vec<f64>| {
        for i in 0..n.saturating_sub(1) {
            if swapped[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= sub[i] * b[i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= sup1[i] * b[i + 1];
            }
            if i + 2 < n {
                s -= sup2[i] * b[i + 2];
            }
            b[i] = s / diag[i];
        }
    };

    let mut x: Vec<f64> = (0..n)
        .map(|i| if i % 2 == 0 { 1.0 } else { 0.75 })
        .collect();
    for _ in 0..3 {
        solve(&mut x);
        for prev in ortho {
            let dot: f64 = prev.iter().zip(&x).map(|(a, b)| a * b).sum();
            for (xi, pi) in x.iter_mut().zip(prev) {
                *xi -= dot * pi;
            }
        }
        let norm = x.iter().map(|t| t * t).sum::<f64>().sqrt();
        if norm == 0.0 {
            break;
        }
        for t in x.iter_mut() {
            *t /= norm;
        }
    }
    x
}

fn b_inner(b: &DenseSym, x: &[f64], y: &[f64]) -> f64 {
    let n = b.n;
    let mut s = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            row += b.get(i, j) * y[j];
        }
        s += x[i] * row;
    }
    s
}

/// Deterministic sign: the first component that is not negligible relative to
/// the largest one is made positive.
fn fix_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, &t| m.max(t.abs()));
    if max == 0.0 {
        return;
    }
    for &t in v.iter() {
        if t.abs() > 1e-12 * max {
            if t < 0.0 {
                v.iter_mut().for_each(|u| *u = -*u);
            }
            return;
        }
    }
}

/// Solves the pencil `(A, B)` for the `k` smallest eigenpairs.
pub fn solve_gep_dense(
    a: &DenseSym,
    b: &DenseSym,
    k: usize,
    meta: SpectrumMeta,
) -> Result<Spectrum> {
    let n = a.n;
    if n == 0 {
        return Err(Error::InvalidRequest("empty problem".into()));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidRequest(format!(
            "requested {k} eigenvalues from a problem of dimension {n}"
        )));
    }
    let mut l = b.clone();
    cholesky_lower(&mut l)?;
    let mut c = reduce_to_standard(a, &l);
    let (mut d, mut e, reflectors) = tridiagonalize(&mut c);

    let mut pairs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(k);
    if n <= FULL_VECTOR_LIMIT {
        let mut z = form_q(&reflectors, n);
        tql(&mut d, &mut e, Some(&mut z))?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&p, &q| d[p].partial_cmp(&d[q]).unwrap());
        for &idx in order.iter().take(k) {
            let y: Vec<f64> = (0..n).map(|r| z[r * n + idx]).collect();
            pairs.push((d[idx], y));
        }
    } else {
        let d0 = d.clone();
        let e0 = e.clone();
        tql(&mut d, &mut e, None)?;
        let mut sorted = d.clone();
        sorted.sort_by(|p, q| p.partial_cmp(q).unwrap());
        let norm_t = sorted.iter().fold(0.0f64, |m, &t| m.max(t.abs()));
        let mut cluster: Vec<Vec<f64>> = Vec::new();
        let mut cluster_head = f64::NAN;
        for &lambda in sorted.iter().take(k) {
            if cluster.is_empty() || (lambda - cluster_head).abs() > 1e-8 * norm_t.max(1.0) {
                cluster = Vec::new();
                cluster_head = lambda;
            }
            let mut y = tridiag_inverse_iteration(&d0, &e0, lambda, &cluster);
            cluster.push(y.clone());
            apply_q(&reflectors, &mut y);
            pairs.push((lambda, y));
        }
    }

    let mut eigenvalues = Vec::with_capacity(k);
    let mut eigenvectors = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for (_, y) in pairs.iter_mut() {
        backward_subst_t(&l, y);
    }
    for (lambda_hat, x) in pairs.into_iter() {
        let mut x = x;
        let bnorm = b_inner(b, &x, &x);
        if bnorm <= 0.0 {
            return Err(Error::SpdViolation {
                context: "B-normalization",
                index: 0,
                pivot: bnorm,
            });
        }
        let scale = bnorm.sqrt();
        x.iter_mut().for_each(|t| *t /= scale);
        fix_sign(&mut x);
        // Rayleigh refinement: with xᵀBx = 1 the quotient is xᵀAx.
        let mut ax = vec![0.0; n];
        a.matvec(&x, &mut ax);
        let lambda = x.iter().zip(&ax).map(|(p, q)| p * q).sum::<f64>();
        let lambda = if lambda.is_finite() {
            lambda
        } else {
            lambda_hat
        };
        let mut bx = vec![0.0; n];
        b.matvec(&x, &mut bx);
        let mut res = 0.0;
        let mut ax_norm = 0.0;
        for i in 0..n {
            let r = ax[i] - lambda * bx[i];
            res += r * r;
            ax_norm += ax[i] * ax[i];
        }
        residuals.push((res / ax_norm.max(f64::MIN_POSITIVE)).sqrt());
        eigenvalues.push(lambda);
        eigenvectors.push(x);
    }

    let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
    order.sort_by(|&p, &q| eigenvalues[p].partial_cmp(&eigenvalues[q]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eigenvalues[i]).collect();
    let eigenvectors: Vec<Vec<f64>> = order.iter().map(|&i| eigenvectors[i].clone()).collect();
    let residuals: Vec<f64> = order.iter().map(|&i| residuals[i]).collect();

    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        residuals,
        meta,
    })
}

/// Solves the banded pencil for the `k` smallest eigenpairs.
pub fn solve_gep(
    a: &BandedSymmetricMatrix,
    b: &BandedSymmetricMatrix,
    k: usize,
    meta: SpectrumMeta,
) -> Result<Spectrum> {
    solve_gep_dense(
        &DenseSym::from_banded(a),
        &DenseSym::from_banded(b),
        k,
        meta,
    )
}

/// Rayleigh quotient `vᵀAv / vᵀBv`.
pub fn rayleigh(a: &BandedSymmetricMatrix, b: &BandedSymmetricMatrix, v: &[f64]) -> Result<f64> {
    if v.iter().all(|&t| t == 0.0) {
        return Err(Error::ZeroVector);
    }
    let ad = DenseSym::from_banded(a);
    let bd = DenseSym::from_banded(b);
    Ok(b_inner(&ad, v, v) / b_inner(&bd, v, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn meta() -> SpectrumMeta {
        SpectrumMeta {
            domain: DomainTag::Disk,
            mode: Some(0),
            degree: 0,
        }
    }

    fn dense(n: usize, items: &[f64]) -> DenseSym {
        DenseSym {
            n,
            data: items.to_vec(),
        }
    }

    #[test]
    fn diagonal_pencil() {
        let a = dense(2, &[2.0, 0.0, 0.0, 6.0]);
        let b = dense(2, &[1.0, 0.0, 0.0, 1.0]);
        let s = solve_gep_dense(&a, &b, 2, meta()).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[1], 6.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvectors[0][0].abs(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.eigenvectors[0][1], 0.0, epsilon = 1e-12);
        // deterministic sign: leading component positive
        assert!(s.eigenvectors[0][0] > 0.0);
    }

    #[test]
    fn decoupled_ratio_pencil() {
        let a = dense(2, &[2.0, 0.0, 0.0, 2.0]);
        let b = dense(2, &[2.0, 0.0, 0.0, 1.0]);
        let s = solve_gep_dense(&a, &b, 2, meta()).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[1], 2.0, epsilon = 1e-14);
    }

    #[test]
    fn b_normalization_and_residual() {
        // A modestly conditioned random-ish SPD pair.
        let n = 6;
        let mut a = DenseSym::zeros(n);
        let mut b = DenseSym::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let base = ((i * 7 + j * 3) % 11) as f64 / 11.0;
                a.set(i, j, 0.5 * (base + ((j * 7 + i * 3) % 11) as f64 / 11.0));
            }
            a.set(i, i, a.get(i, i) + 4.0 + i as f64);
            b.set(i, i, 1.0 + 0.25 * i as f64);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                b.set(i, j, 0.1);
                b.set(j, i, 0.1);
            }
        }
        let s = solve_gep_dense(&a, &b, n, meta()).unwrap();
        for idx in 0..n {
            let v = &s.eigenvectors[idx];
            assert_abs_diff_eq!(b_inner(&b, v, v), 1.0, epsilon = 1e-10);
            assert!(s.residuals[idx] < 1e-10);
        }
        // B-orthogonality across distinct eigenvalues.
        for p in 0..n {
            for q in (p + 1)..n {
                if (s.eigenvalues[p] - s.eigenvalues[q]).abs() > 1e-6 * s.eigenvalues[q].abs() {
                    assert_abs_diff_eq!(
                        b_inner(&b, &s.eigenvectors[p], &s.eigenvectors[q]),
                        0.0,
                        epsilon = 1e-8
                    );
                }
            }
        }
        // Eigenvalues ascending.
        for w in s.eigenvalues.windows(2) {
            assert!(w[0] <= w[1] + 1e-12);
        }
    }

    #[test]
    fn large_path_matches_small_path() {
        // Same matrix solved through both code paths must agree closely.
        let n = 24;
        let mut a = DenseSym::zeros(n);
        let mut b = DenseSym::zeros(n);
        for i in 0..n {
            a.set(i, i, 2.0 + i as f64);
            if i + 1 < n {
                a.set(i, i + 1, -1.0);
                a.set(i + 1, i, -1.0);
            }
            b.set(i, i, 1.0 + 0.04 * i as f64);
        }
        let full = solve_gep_dense(&a, &b, 5, meta()).unwrap();

        // Re-run forcing the inverse-iteration path by temporarily using the
        // internal pieces the large branch uses.
        let mut l = b.clone();
        cholesky_lower(&mut l).unwrap();
        let mut c = reduce_to_standard(&a, &l);
        let (mut d, mut e, _refl) = tridiagonalize(&mut c);
        let d0 = d.clone();
        let e0 = e.clone();
        tql(&mut d, &mut e, None).unwrap();
        d.sort_by(|p, q| p.partial_cmp(q).unwrap());
        for idx in 0..5 {
            assert_abs_diff_eq!(
                d[idx],
                full.eigenvalues[idx],
                epsilon = 1e-10 * full.eigenvalues[idx].abs().max(1.0)
            );
            let y = tridiag_inverse_iteration(&d0, &e0, d[idx], &[]);
            // residual of the tridiagonal eigenpair
            let n2 = y.len();
            let mut res = 0.0f64;
            for i in 0..n2 {
                let mut t = d0[i] * y[i] - d[idx] * y[i];
                if i > 0 {
                    t += e0[i] * y[i - 1];
                }
                if i + 1 < n2 {
                    t += e0[i + 1] * y[i + 1];
                }
                res += t * t;
            }
            assert!(res.sqrt() < 1e-8 * d[idx].abs().max(1.0));
        }
    }

    #[test]
    fn rayleigh_bounds_lowest_eigenvalue() {
        let mut a = BandedSymmetricMatrix::zeros(3, 1);
        let mut b = BandedSymmetricMatrix::zeros(3, 1);
        for i in 0..3 {
            a.set(i, i, 2.0 + i as f64);
            b.set(i, i, 1.0);
        }
        a.set(0, 1, -0.5);
        let s = solve_gep(&a, &b, 3, meta()).unwrap();
        let v = vec![1.0, -0.3, 0.2];
        let rq = rayleigh(&a, &b, &v).unwrap();
        assert!(rq >= s.eigenvalues[0] - 1e-12);
        // the quotient of an eigenvector reproduces its eigenvalue
        let rq0 = rayleigh(&a, &b, &s.eigenvectors[0]).unwrap();
        assert_abs_diff_eq!(rq0, s.eigenvalues[0], epsilon = 1e-10);
        assert!(rayleigh(&a, &b, &[0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn rejects_non_spd_mass() {
        let a = dense(2, &[1.0, 0.0, 0.0, 1.0]);
        let b = dense(2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(
            solve_gep_dense(&a, &b, 1, meta()),
            Err(Error::CholeskyFailure { .. })
        ));
    }
}
