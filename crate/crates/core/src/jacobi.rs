//! Classical and generalized Jacobi polynomials, their weighted norms, and
//! Gauss-Jacobi quadrature.
//!
//! `J^{α,β}_n` denotes the Jacobi polynomial of degree `n`, orthogonal on
//! `(-1,1)` against the weight `(1-ζ)^α (1+ζ)^β`. Classical indices require
//! `α, β > -1`; negative integer indices are supported through the
//! factorization into boundary factors times a classical polynomial, with the
//! degree-reduction rule applied first when the nominal degree collapses.

use crate::error::{Error, Result};

/// Index triple `(α, β, n)` of a Jacobi polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiIndex {
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
}

impl JacobiIndex {
    pub fn new(alpha: f64, beta: f64, n: usize) -> Self {
        Self { alpha, beta, n }
    }
}

/// Pochhammer symbol `(a)_k` by direct product, valid for any real `a` and
/// integer `k` (negative `k` gives `1/((a-1)(a-2)…(a+k))`).
pub fn pochhammer(a: f64, k: i64) -> f64 {
    if k >= 0 {
        let mut p = 1.0;
        for j in 0..k {
            p *= a + j as f64;
        }
        p
    } else {
        let mut p = 1.0;
        for j in 1..=(-k) {
            p *= a - j as f64;
        }
        1.0 / p
    }
}

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() < 1e-9
}

fn is_negative_integer_index(x: f64) -> bool {
    x <= -1.0 + 1e-9 && is_integer(x)
}

/// `h^{α,β}_n = Γ(n+α+1)Γ(n+β+1) / (Γ(n+1)Γ(n+α+β+1))`.
///
/// Integer `α` or `β` route through Pochhammer products so that negative
/// integer arguments stay exact; the general case uses log-gamma.
fn norm_ratio(alpha: f64, beta: f64, n: usize) -> f64 {
    let nf = n as f64;
    if is_integer(alpha) {
        let k = alpha.round() as i64;
        pochhammer(nf + 1.0, k) / pochhammer(nf + beta + 1.0, k)
    } else if is_integer(beta) {
        let k = beta.round() as i64;
        pochhammer(nf + 1.0, k) / pochhammer(nf + alpha + 1.0, k)
    } else {
        (libm::lgamma(nf + alpha + 1.0) + libm::lgamma(nf + beta + 1.0)
            - libm::lgamma(nf + 1.0)
            - libm::lgamma(nf + alpha + beta + 1.0))
        .exp()
    }
}

/// Three-term recurrence for classical indices `α, β > -1`.
fn eval_classical(alpha: f64, beta: f64, n: usize, zeta: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut p_prev = 1.0;
    let mut p = 0.5 * ((alpha + beta + 2.0) * zeta + alpha - beta);
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + alpha + beta;
        let a1 = 2.0 * k * (k + alpha + beta) * (s - 2.0);
        let a2 = (s - 1.0) * (alpha * alpha - beta * beta);
        let a3 = (s - 2.0) * (s - 1.0) * s;
        let a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * s;
        let p_next = ((a2 + a3 * zeta) * p - a4 * p_prev) / a1;
        p_prev = p;
        p = p_next;
    }
    p
}

/// Evaluates `J^{α,β}_n(ζ)`.
///
/// Classical indices use the three-term recurrence. Negative integer indices
/// are factorized into `((ζ∓1)/2)` powers times a classical polynomial; the
/// raw hypergeometric sum is never used on that path because it cancels
/// catastrophically.
pub fn eval_jacobi(idx: JacobiIndex, zeta: f64) -> Result<f64> {
    let JacobiIndex { alpha, beta, n } = idx;
    if alpha > -1.0 + 1e-12 && beta > -1.0 + 1e-12 {
        return Ok(eval_classical(alpha, beta, n, zeta));
    }
    let invalid = |reason| Error::InvalidIndex {
        alpha,
        beta,
        n,
        reason,
    };
    let alpha_neg = is_negative_integer_index(alpha);
    let beta_neg = is_negative_integer_index(beta);
    if (alpha <= -1.0 + 1e-12 && !alpha_neg) || (beta <= -1.0 + 1e-12 && !beta_neg) {
        return Err(invalid("index <= -1 must be a negative integer"));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let nf = n as f64;

    // Degree reduction: the nominal degree collapses when -n-α-β ∈ {1,…,n}.
    let s = -(nf + alpha + beta);
    if is_integer(s) && s >= 1.0 - 1e-9 && s <= nf + 1e-9 {
        let n0 = s.round() as usize;
        let h = pochhammer(nf + 1.0, alpha.round() as i64)
            * pochhammer(-nf - beta, -(alpha.round() as i64));
        if h == 0.0 {
            return Ok(0.0);
        }
        let reduced = eval_jacobi(JacobiIndex::new(alpha, beta, n0 - 1), zeta)?;
        return Ok(h * reduced);
    }

    let half_minus = 0.5 * (zeta - 1.0);
    let half_plus = 0.5 * (zeta + 1.0);
    if alpha_neg && beta_neg {
        let l = (-alpha.round()) as i32;
        let k = (-beta.round()) as i32;
        let inner = nf + alpha + beta;
        if inner < -1e-9 {
            return Err(invalid(
                "n + alpha + beta negative with no degree reduction",
            ));
        }
        let inner_n = inner.round() as usize;
        Ok(half_minus.powi(l) * half_plus.powi(k) * eval_classical(-alpha, -beta, inner_n, zeta))
    } else if alpha_neg {
        let l = (-alpha.round()) as i32;
        if nf + alpha < -1e-9 {
            return Err(invalid("n + alpha negative"));
        }
        let h = norm_ratio(alpha, beta, n);
        Ok(h * half_minus.powi(l) * eval_classical(-alpha, beta, n - l as usize, zeta))
    } else {
        let k = (-beta.round()) as i32;
        if nf + beta < -1e-9 {
            return Err(invalid("n + beta negative"));
        }
        let h = norm_ratio(alpha, beta, n);
        Ok(h * half_plus.powi(k) * eval_classical(alpha, -beta, n - k as usize, zeta))
    }
}

/// `d/dζ J^{α,β}_n(ζ) = (n+α+β+1)/2 · J^{α+1,β+1}_{n-1}(ζ)` for classical indices.
pub fn eval_jacobi_derivative(idx: JacobiIndex, zeta: f64) -> f64 {
    if idx.n == 0 {
        return 0.0;
    }
    0.5 * (idx.n as f64 + idx.alpha + idx.beta + 1.0)
        * eval_classical(idx.alpha + 1.0, idx.beta + 1.0, idx.n - 1, zeta)
}

/// Squared weighted norm `∫ J^{α,β}_n(ζ)² (1-ζ)^α(1+ζ)^β dζ` over `(-1,1)`.
pub fn jacobi_norm_sq(idx: JacobiIndex) -> Result<f64> {
    let JacobiIndex { alpha, beta, n } = idx;
    if alpha <= -1.0 || beta <= -1.0 {
        return Err(Error::InvalidIndex {
            alpha,
            beta,
            n,
            reason: "norm requires alpha, beta > -1",
        });
    }
    let nf = n as f64;
    Ok(
        2f64.powf(alpha + beta + 1.0) * norm_ratio(alpha, beta, n)
            / (2.0 * nf + alpha + beta + 1.0),
    )
}

/// A Gauss-Jacobi rule: `Σ wᵢ f(xᵢ) ≈ ∫ f(ζ)(1-ζ)^α(1+ζ)^β dζ` on `(-1,1)`,
/// exact for polynomial `f` of degree `≤ 2·order − 1`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
    pub index: JacobiIndex,
}

impl QuadratureRule {
    /// Integrates against the full Jacobi weight on `(-1,1)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Integrates `∫₀¹ f(r)(1-r)^α r^β dr` via the affine map `r = (1+ζ)/2`.
    pub fn integrate_unit<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let scale = 0.5f64.powf(self.index.alpha + self.index.beta + 1.0);
        scale * self.integrate(|x| f(0.5 * (1.0 + x)))
    }
}

/// Builds the Gauss-Jacobi rule of the given order for the weight `χ^{α,β}`.
///
/// Nodes are the roots of `J^{α,β}_order`, located by walking the interlacing
/// brackets of successive degrees and polished by Newton iteration (residual
/// tolerance scaled to 1e-15, at most 100 iterations per root).
pub fn gauss_jacobi(order: usize, idx: JacobiIndex) -> Result<QuadratureRule> {
    let JacobiIndex { alpha, beta, .. } = idx;
    if order < 1 {
        return Err(Error::InvalidRequest(
            "quadrature order must be >= 1".into(),
        ));
    }
    if alpha <= -1.0 || beta <= -1.0 {
        return Err(Error::InvalidIndex {
            alpha,
            beta,
            n: order,
            reason: "quadrature requires alpha, beta > -1",
        });
    }

    // Roots of degree d interlace with those of degree d-1 plus the endpoints.
    let mut roots: Vec<f64> = Vec::new();
    for d in 1..=order {
        let mut brackets = Vec::with_capacity(d + 1);
        brackets.push(-1.0);
        brackets.extend_from_slice(&roots);
        brackets.push(1.0);
        let mut next = Vec::with_capacity(d);
        for j in 0..d {
            let x = refine_root(alpha, beta, d, brackets[j], brackets[j + 1])
                .ok_or(Error::NodeNonConvergence { order: d, root: j })?;
            next.push(x);
        }
        roots = next;
    }

    let scale = 2f64.powf(alpha + beta + 1.0) * norm_ratio(alpha, beta, order);
    let weights = roots
        .iter()
        .map(|&x| {
            let dp = eval_jacobi_derivative(JacobiIndex::new(alpha, beta, order), x);
            scale / ((1.0 - x * x) * dp * dp)
        })
        .collect();

    Ok(QuadratureRule {
        nodes: roots,
        weights,
        order,
        index: idx,
    })
}

/// Bisection to a coarse bracket followed by Newton polish.
fn refine_root(alpha: f64, beta: f64, d: usize, mut lo: f64, mut hi: f64) -> Option<f64> {
    let p = |x: f64| eval_classical(alpha, beta, d, x);
    let mut f_lo = p(lo);
    // Exactly one simple root lies strictly inside each bracket.
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let f_mid = p(mid);
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
        if hi - lo < 1e-12 {
            break;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let f = p(x);
        let df = eval_jacobi_derivative(JacobiIndex::new(alpha, beta, d), x);
        if df == 0.0 {
            break;
        }
        let step = f / df;
        x -= step;
        if f.abs() <= 1e-15 * (1.0 + df.abs()) || step.abs() <= f64::EPSILON * x.abs().max(1.0) {
            return Some(x);
        }
    }
    // Accept if the final residual is small on the derivative scale.
    let f = p(x);
    let df = eval_jacobi_derivative(JacobiIndex::new(alpha, beta, d), x);
    if f.abs() <= 1e-12 * (1.0 + df.abs()) {
        Some(x)
    } else {
        None
    }
}
