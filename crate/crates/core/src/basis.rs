//! The radial approximation basis and its exact expansions in the
//! `J^{0,1}(2r-1)` family.
//!
//! For `i ≥ 4` the basis function is `φᵢ(r) = (1-r)² r² J^{2,1}_{i-4}(2r-1)`,
//! shared by every Fourier mode. Modes with `|m| ≤ 1` gain one extra function
//! each: `φ₃⁰ = (1-r)²(2r+1)/4` and `φ₃¹ = (1-r)² r / 2`. All of them vanish
//! to second order at `r = 1`; the pole behaviour at `r = 0` matches the mode
//! (`φ'(0)=0` for `m=0`, `φ(0)=0` for `|m|=1`, both for `|m|≥2`).
//!
//! Every derivative or quotient the assembly needs has a *finite* expansion in
//! `J^{0,1}_k(2r-1)`, with rational coefficients hard-coded here. Quotients by
//! `r` are always taken through these polynomial forms, never by dividing
//! evaluated values, so nothing blows up at the pole.

use crate::error::{Error, Result};
use crate::jacobi::{eval_jacobi, JacobiIndex};

/// First admissible radial index for mode `m`: 4 when `|m| ≥ 2`, else 3.
pub fn min_index(m: i32) -> usize {
    if m.abs() >= 2 {
        4
    } else {
        3
    }
}

/// One basis function: Fourier mode `m` (signed; negative modes share the
/// positive-mode radial part) and radial index `i ≥ min_index(m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisId {
    pub m: i32,
    pub i: usize,
}

impl BasisId {
    pub fn new(m: i32, i: usize) -> Result<Self> {
        let min = min_index(m);
        if i < min {
            return Err(Error::IndexOutOfRange { m, i, min });
        }
        Ok(Self { m, i })
    }

    fn is_low_mode_extra(&self) -> bool {
        self.i == 3
    }
}

/// Which expansion of a basis function to return.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionKind {
    /// `φ''`
    SecondDerivative,
    /// `φ'`
    FirstDerivative,
    /// `φ'/r`
    DrOverR,
    /// `φ/r`
    OverR,
    /// `φ/r²`
    OverR2,
}

/// The differential operators of the mode-coupled form: `L` is
/// `∂²_r + (1/r)(∂_r - m²/r)`; `K_plus`/`K_minus` are
/// `∂²_r - ((1±2m)/r)∂_r + (m²±2m)/r²` with the sign taken from the variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialOperator {
    L,
    KPlus,
    KMinus,
}

/// A finite expansion `r^p · Σ_k coeffs[k] · J^{0,1}_{offset+k}(2r-1)` with
/// `p ∈ {0,1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiExpansion {
    pub offset: usize,
    pub coeffs: Vec<f64>,
    pub prefactor_power_of_r: u8,
}

impl JacobiExpansion {
    /// Builds from a possibly negative starting degree, dropping entries below
    /// degree zero (their coefficients must vanish identically) and trimming
    /// zero tails.
    fn from_terms(start_degree: i64, coeffs: Vec<f64>, prefactor_power_of_r: u8) -> Self {
        let mut offset = start_degree;
        let mut coeffs = coeffs;
        while offset < 0 {
            let dropped = coeffs.remove(0);
            debug_assert_eq!(dropped, 0.0, "negative-degree coefficient must vanish");
            offset += 1;
        }
        while coeffs.first() == Some(&0.0) {
            coeffs.remove(0);
            offset += 1;
        }
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self {
            offset: offset as usize,
            coeffs,
            prefactor_power_of_r,
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        let z = 2.0 * r - 1.0;
        let mut sum = 0.0;
        for (k, &c) in self.coeffs.iter().enumerate() {
            sum += c * eval_jacobi(JacobiIndex::new(0.0, 1.0, self.offset + k), z)
                .expect("classical index");
        }
        if self.prefactor_power_of_r == 1 {
            sum * r
        } else {
            sum
        }
    }

    /// `self + s·other`, both pure `J^{0,1}` sums.
    pub fn add_scaled(&self, other: &JacobiExpansion, s: f64) -> JacobiExpansion {
        assert_eq!(self.prefactor_power_of_r, 0);
        assert_eq!(other.prefactor_power_of_r, 0);
        let lo = self.offset.min(other.offset);
        let hi = (self.offset + self.coeffs.len()).max(other.offset + other.coeffs.len());
        let mut coeffs = vec![0.0; hi - lo];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[self.offset - lo + k] += c;
        }
        for (k, &c) in other.coeffs.iter().enumerate() {
            coeffs[other.offset - lo + k] += s * c;
        }
        JacobiExpansion::from_terms(lo as i64, coeffs, 0)
    }

    /// Inner product against the weight `r` on `(0,1)`, by orthogonality:
    /// `∫₀¹ J^{0,1}_m(2r-1) J^{0,1}_n(2r-1) r dr = δ_{mn}/(2n+2)`.
    pub fn dot_weighted(&self, other: &JacobiExpansion) -> f64 {
        assert_eq!(self.prefactor_power_of_r, 0);
        assert_eq!(other.prefactor_power_of_r, 0);
        let lo = self.offset.max(other.offset);
        let hi = (self.offset + self.coeffs.len()).min(other.offset + other.coeffs.len());
        let mut sum = 0.0;
        for d in lo..hi {
            let c1 = self.coeffs[d - self.offset];
            let c2 = other.coeffs[d - other.offset];
            sum += c1 * c2 / (2.0 * d as f64 + 2.0);
        }
        sum
    }
}

/// Evaluates `φᵢ^m(r)` directly.
pub fn eval_basis(id: BasisId, r: f64) -> f64 {
    if id.is_low_mode_extra() {
        let w = (1.0 - r) * (1.0 - r);
        if id.m == 0 {
            0.25 * w * (2.0 * r + 1.0)
        } else {
            0.5 * w * r
        }
    } else {
        let z = 2.0 * r - 1.0;
        let j = eval_jacobi(JacobiIndex::new(2.0, 1.0, id.i - 4), z).expect("classical index");
        (1.0 - r) * (1.0 - r) * r * r * j
    }
}

// Direct pointwise evaluation of derivatives and quotients via the product
// rule on (1-r)²r²J^{2,1}(2r-1), with every division by r done symbolically.
// These stay independent of the hard-coded expansion tables below; the
// expansion-based assembly path and the build-time oracle tests rest on them.

fn j21_parts(i: usize, r: f64) -> (f64, f64, f64) {
    let z = 2.0 * r - 1.0;
    let n = i - 4;
    let j = eval_jacobi(JacobiIndex::new(2.0, 1.0, n), z).unwrap();
    // d/dr J^{2,1}_n(2r-1) = (n+4) J^{3,2}_{n-1}(2r-1)
    let dj = if n == 0 {
        0.0
    } else {
        (n as f64 + 4.0) * eval_jacobi(JacobiIndex::new(3.0, 2.0, n - 1), z).unwrap()
    };
    let d2j = if n <= 1 {
        0.0
    } else {
        (n as f64 + 4.0)
            * (n as f64 + 5.0)
            * eval_jacobi(JacobiIndex::new(4.0, 3.0, n - 2), z).unwrap()
    };
    (j, dj, d2j)
}

/// `φ'(r)` evaluated directly.
pub fn eval_basis_d1(id: BasisId, r: f64) -> f64 {
    if id.is_low_mode_extra() {
        if id.m == 0 {
            1.5 * (r * r - r)
        } else {
            0.5 * (1.0 - 4.0 * r + 3.0 * r * r)
        }
    } else {
        let (j, dj, _) = j21_parts(id.i, r);
        let u = (1.0 - r) * (1.0 - r) * r * r;
        let du = 2.0 * r * (1.0 - r) * (1.0 - 2.0 * r);
        du * j + u * dj
    }
}

/// `φ''(r)` evaluated directly.
pub fn eval_basis_d2(id: BasisId, r: f64) -> f64 {
    if id.is_low_mode_extra() {
        if id.m == 0 {
            3.0 * r - 1.5
        } else {
            3.0 * r - 2.0
        }
    } else {
        let (j, dj, d2j) = j21_parts(id.i, r);
        let u = (1.0 - r) * (1.0 - r) * r * r;
        let du = 2.0 * r * (1.0 - r) * (1.0 - 2.0 * r);
        let d2u = 2.0 * (6.0 * r * r - 6.0 * r + 1.0);
        d2u * j + 2.0 * du * dj + u * d2j
    }
}

/// `φ'(r)/r` with the division absorbed into the polynomial factors.
/// Finite for every `i ≥ 4` and for `φ₃⁰`; evaluating it for `φ₃¹` is only
/// meaningful at `r > 0`.
pub fn eval_basis_d1_over_r(id: BasisId, r: f64) -> f64 {
    if id.is_low_mode_extra() {
        // pointwise helper for quadrature at interior nodes
        eval_basis_d1(id, r) / r
    } else {
        let (j, dj, _) = j21_parts(id.i, r);
        let du_over_r = 2.0 * (1.0 - r) * (1.0 - 2.0 * r);
        let u_over_r = (1.0 - r) * (1.0 - r) * r;
        du_over_r * j + u_over_r * dj
    }
}

/// `φ(r)/r` via the factored polynomial.
pub fn eval_basis_over_r(id: BasisId, r: f64) -> f64 {
    if id.is_low_mode_extra() {
        if id.m == 0 {
            eval_basis(id, r) / r
        } else {
            0.5 * (1.0 - r) * (1.0 - r)
        }
    } else {
        let (j, _, _) = j21_parts(id.i, r);
        (1.0 - r) * (1.0 - r) * r * j
    }
}

/// `φ(r)/r²` via the factored polynomial.
pub fn eval_basis_over_r2(id: BasisId, r: f64) -> f64 {
    if id.is_low_mode_extra() {
        eval_basis(id, r) / (r * r)
    } else {
        let (j, _, _) = j21_parts(id.i, r);
        (1.0 - r) * (1.0 - r) * j
    }
}

// Rational coefficient tables. Numerators and denominators are assembled as
// integer products and divided once, keeping each coefficient within one
// rounding of the exact rational.

fn frac(num: i64, den: i64) -> f64 {
    num as f64 / den as f64
}

fn d2_table(i: i64) -> (i64, Vec<f64>) {
    (
        i - 4,
        vec![
            frac((i - 4) * (i - 3) * (i - 3), 2 * (2 * i - 5)),
            frac(
                2 * (i - 3) * (i - 3) * (i - 2) * (i - 1),
                (2 * i - 3) * (2 * i - 5),
            ),
            frac((i - 3) * (i - 1) * i, 2 * (2 * i - 3)),
        ],
    )
}

fn d1_bracket_table(i: i64) -> (i64, Vec<f64>) {
    (
        i - 4,
        vec![
            frac(-(i - 4) * (i - 3), 2 * (2 * i - 5)),
            frac(-3 * (i - 3) * (i - 2), (2 * i - 3) * (2 * i - 5)),
            frac((i - 3) * i, 2 * (2 * i - 3)),
        ],
    )
}

fn d0_bracket_table(i: i64) -> (i64, Vec<f64>) {
    (
        i - 4,
        vec![
            frac(i - 3, 2 * (2 * i - 5)),
            frac(-2 * (i - 3) * (i - 2), (2 * i - 3) * (2 * i - 5)),
            frac(i - 3, 2 * (2 * i - 3)),
        ],
    )
}

fn d1_pure_table(i: i64) -> (i64, Vec<f64>) {
    (
        i - 5,
        vec![
            frac(-(i - 3) * (i - 4) * (i - 4), 4 * (2 * i - 5) * (2 * i - 7)),
            frac(
                -(2 * i * i - 9 * i + 6) * (i - 3) * (i - 3),
                2 * (2 * i - 7) * (2 * i - 5) * (2 * i - 3),
            ),
            frac(-(i - 2) * (i - 3), (2 * i - 3) * (2 * i - 5)),
            frac(
                (i - 1) * (i - 3) * (2 * i * i - 7 * i + 2),
                2 * (2 * i - 5) * (2 * i - 1) * (2 * i - 3),
            ),
            frac((i - 3) * i * i, 4 * (2 * i - 3) * (2 * i - 1)),
        ],
    )
}

fn d0_pure_table(i: i64) -> (i64, Vec<f64>) {
    (
        i - 5,
        vec![
            frac((i - 3) * (i - 4), 4 * (2 * i - 5) * (2 * i - 7)),
            frac((i - 3) * (i - 3), (2 * i - 7) * (2 * i - 3) * (2 * i - 5)),
            frac(-(i - 2) * (i - 3), 2 * (2 * i - 3) * (2 * i - 5)),
            frac(-(i - 1) * (i - 3), (2 * i - 1) * (2 * i - 3) * (2 * i - 5)),
            frac(i * (i - 3), 4 * (2 * i - 1) * (2 * i - 3)),
        ],
    )
}

/// `(φ₃¹' - φ₃¹/r)/r`, the polynomial combination available for the `|m|=1`
/// extra function. Its `φ'/r` and `φ/r²` pieces are singular separately.
fn phi31_bracket() -> JacobiExpansion {
    JacobiExpansion::from_terms(0, vec![frac(-1, 3), frac(1, 3)], 0)
}

/// Returns the exact `J^{0,1}` expansion of the requested derivative or
/// quotient of `φᵢ^m`. Quotients that are genuinely singular for the low-mode
/// extras are rejected; they never arise in assembly because their
/// coefficients there carry vanishing factors.
pub fn expand(id: BasisId, what: ExpansionKind) -> Result<JacobiExpansion> {
    let singular = |what: &'static str| Error::SingularRequest {
        m: id.m,
        i: id.i,
        what,
    };
    if id.is_low_mode_extra() {
        let terms = if id.m == 0 {
            match what {
                ExpansionKind::SecondDerivative => (0, vec![frac(1, 2), 1.0]),
                ExpansionKind::FirstDerivative => (0, vec![frac(-1, 4), frac(1, 10), frac(3, 20)]),
                ExpansionKind::DrOverR => (0, vec![frac(-1, 2), frac(1, 2)]),
                ExpansionKind::OverR => return Err(singular("phi/r")),
                ExpansionKind::OverR2 => return Err(singular("phi/r^2")),
            }
        } else {
            match what {
                ExpansionKind::SecondDerivative => (1, vec![1.0]),
                ExpansionKind::FirstDerivative => {
                    (0, vec![frac(-1, 12), frac(-1, 15), frac(3, 20)])
                }
                ExpansionKind::OverR => (0, vec![frac(1, 12), frac(-2, 15), frac(1, 20)]),
                ExpansionKind::DrOverR => return Err(singular("phi'/r")),
                ExpansionKind::OverR2 => return Err(singular("phi/r^2")),
            }
        };
        return Ok(JacobiExpansion::from_terms(terms.0, terms.1, 0));
    }
    let i = id.i as i64;
    let (offset, coeffs) = match what {
        ExpansionKind::SecondDerivative => d2_table(i),
        ExpansionKind::FirstDerivative => d1_pure_table(i),
        ExpansionKind::DrOverR => d1_bracket_table(i),
        ExpansionKind::OverR => d0_pure_table(i),
        ExpansionKind::OverR2 => d0_bracket_table(i),
    };
    Ok(JacobiExpansion::from_terms(offset, coeffs, 0))
}

/// The `r·[…]` representations of `φ'` and `φ/r` (same bracket coefficients
/// as `DrOverR`/`OverR2`, with the outer factor kept symbolic).
pub fn expand_r_form(id: BasisId, what: ExpansionKind) -> Result<JacobiExpansion> {
    let bracket = match what {
        ExpansionKind::FirstDerivative => expand(id, ExpansionKind::DrOverR)?,
        ExpansionKind::OverR => expand(id, ExpansionKind::OverR2)?,
        _ => {
            return Err(Error::InvalidRequest(
                "r-prefactor form exists for the first derivative and phi/r only".into(),
            ))
        }
    };
    Ok(JacobiExpansion {
        offset: bracket.offset,
        coeffs: bracket.coeffs,
        prefactor_power_of_r: 1,
    })
}

/// Exact expansion of `L_m φ`, `K_m φ` or `K_{-m} φ` for the basis function's
/// own mode. All singular parts cancel through the pole conditions.
pub fn operator_expansion(id: BasisId, op: RadialOperator) -> Result<JacobiExpansion> {
    let m = id.m as f64;
    let s = match op {
        RadialOperator::L => 0.0,
        RadialOperator::KPlus => m,
        RadialOperator::KMinus => -m,
    };
    if id.is_low_mode_extra() && id.m != 0 {
        // φ₃¹: only s = ±1 keeps the singular parts cancelling, and only
        // those occur (the operator parameter always matches ±m).
        let d2 = expand(id, ExpansionKind::SecondDerivative)?;
        let b = phi31_bracket();
        let l = d2.add_scaled(&b, 1.0);
        return Ok(match op {
            RadialOperator::L => l,
            _ => l.add_scaled(&b, -(2.0 * s + 2.0)),
        });
    }
    let d2 = expand(id, ExpansionKind::SecondDerivative)?;
    let br1 = expand(id, ExpansionKind::DrOverR)?;
    if id.is_low_mode_extra() {
        // φ₃⁰ lives in mode 0: the m²/r² term vanishes.
        return Ok(match op {
            RadialOperator::L => d2.add_scaled(&br1, 1.0),
            _ => d2.add_scaled(&br1, -1.0),
        });
    }
    let br0 = expand(id, ExpansionKind::OverR2)?;
    Ok(match op {
        RadialOperator::L => d2.add_scaled(&br1, 1.0).add_scaled(&br0, -m * m),
        _ => d2
            .add_scaled(&br1, -(1.0 + 2.0 * s))
            .add_scaled(&br0, s * s + 2.0 * s),
    })
}

/// Pure expansion of `(∂_r + s/r)φ` used by the coupled mass blocks.
pub fn shifted_derivative_expansion(id: BasisId, s: f64) -> Result<JacobiExpansion> {
    let d1 = expand(id, ExpansionKind::FirstDerivative)?;
    if s == 0.0 {
        return Ok(d1);
    }
    let over_r = expand(id, ExpansionKind::OverR)?;
    Ok(d1.add_scaled(&over_r, s))
}
