//! Per-mode stiffness and mass matrices on the unit disk.
//!
//! Two independent routes produce the same matrices: hard-coded closed-form
//! entries ([`ClosedFormAssembly`]) and a quadrature path built on direct
//! evaluations of the basis derivatives ([`ExpansionAssembly`]). Both sit
//! behind the [`DiskAssembly`] trait and are registered by name, together
//! with a [`CheckedAssembly`] that cross-validates every entry at assembly
//! time and lets the quadrature value win when the two disagree.

mod closed_form;
mod expansion;

use std::collections::BTreeMap;
use std::sync::Arc;

pub use closed_form::ClosedFormAssembly;
pub use expansion::ExpansionAssembly;

use crate::banded::BandedSymmetricMatrix;
use crate::basis::min_index;
use crate::error::{Error, Result};

/// One Fourier mode's 1-D eigenproblem: mode `m`, truncation degree `N`, and
/// the first admissible basis index.
#[derive(Debug, Clone, Copy)]
pub struct ModeProblem {
    pub m: i32,
    pub degree: usize,
    pub min_index: usize,
}

impl ModeProblem {
    pub fn new(m: i32, degree: usize) -> Result<Self> {
        let min = min_index(m);
        if degree < min {
            return Err(Error::InvalidRequest(format!(
                "truncation degree {degree} below the first basis index {min} for mode {m}"
            )));
        }
        Ok(Self {
            m,
            degree,
            min_index: min,
        })
    }

    /// The deliberately wrong pole condition for `|m| = 1`: drops the extra
    /// basis function, enforcing `ψ(0) = ψ'(0) = 0`. Reproduces the spurious
    /// first eigenvalue instead of the true one.
    pub fn with_wrong_pole(m: i32, degree: usize) -> Result<Self> {
        if m.abs() != 1 {
            return Err(Error::InvalidRequest(
                "the wrong-pole variant only applies to |m| = 1".into(),
            ));
        }
        if degree < 4 {
            return Err(Error::InvalidRequest(
                "wrong-pole variant needs degree >= 4".into(),
            ));
        }
        Ok(Self {
            m,
            degree,
            min_index: 4,
        })
    }

    pub fn dimension(&self) -> usize {
        self.degree - self.min_index + 1
    }
}

/// A strategy for building the per-mode matrices.
pub trait DiskAssembly: Send + Sync {
    /// Registry key.
    fn name(&self) -> &'static str;

    /// Entry `A^m_{ij}` of the stiffness matrix, basis indices `i, j >= N_m`.
    fn stiffness_entry(&self, m: i32, i: usize, j: usize) -> f64;

    /// Entry `B^m_{ij}` of the mass matrix.
    fn mass_entry(&self, m: i32, i: usize, j: usize) -> f64;

    /// Builds the banded pair (stiffness bandwidth 2, mass bandwidth 4) and
    /// checks that the mass matrix is positive definite.
    fn assemble(
        &self,
        problem: &ModeProblem,
    ) -> Result<(BandedSymmetricMatrix, BandedSymmetricMatrix)> {
        let n = problem.dimension();
        let base = problem.min_index;
        let mut a = BandedSymmetricMatrix::zeros(n, 2.min(n.saturating_sub(1)));
        let mut b = BandedSymmetricMatrix::zeros(n, 4.min(n.saturating_sub(1)));
        for row in 0..n {
            for off in 0..=a.bandwidth.min(n - 1 - row) {
                a.set(
                    row,
                    row + off,
                    self.stiffness_entry(problem.m, base + row, base + row + off),
                );
            }
            for off in 0..=b.bandwidth.min(n - 1 - row) {
                b.set(
                    row,
                    row + off,
                    self.mass_entry(problem.m, base + row, base + row + off),
                );
            }
        }
        b.check_spd("mass matrix")?;
        Ok((a, b))
    }
}

/// Closed-form entries cross-checked against the quadrature path entry by
/// entry; on disagreement beyond the tolerance the quadrature value is kept
/// and the entry logged.
pub struct CheckedAssembly {
    closed: ClosedFormAssembly,
    oracle: ExpansionAssembly,
    tolerance: f64,
}

impl Default for CheckedAssembly {
    fn default() -> Self {
        Self {
            closed: ClosedFormAssembly,
            oracle: ExpansionAssembly,
            tolerance: 1e-12,
        }
    }
}

impl CheckedAssembly {
    fn reconcile(&self, what: &str, m: i32, i: usize, j: usize, closed: f64, oracle: f64) -> f64 {
        if (closed - oracle).abs() > self.tolerance * oracle.abs().max(1.0) {
            log::warn!(
                "{what} entry disagreement at (m={m}, i={i}, j={j}): closed={closed:.17e} quadrature={oracle:.17e}; keeping quadrature"
            );
            oracle
        } else {
            closed
        }
    }
}

impl DiskAssembly for CheckedAssembly {
    fn name(&self) -> &'static str {
        "checked"
    }

    fn stiffness_entry(&self, m: i32, i: usize, j: usize) -> f64 {
        let closed = self.closed.stiffness_entry(m, i, j);
        let oracle = self.oracle.stiffness_entry(m, i, j);
        self.reconcile("stiffness", m, i, j, closed, oracle)
    }

    fn mass_entry(&self, m: i32, i: usize, j: usize) -> f64 {
        let closed = self.closed.mass_entry(m, i, j);
        let oracle = self.oracle.mass_entry(m, i, j);
        self.reconcile("mass", m, i, j, closed, oracle)
    }

    fn assemble(
        &self,
        problem: &ModeProblem,
    ) -> Result<(BandedSymmetricMatrix, BandedSymmetricMatrix)> {
        let (a_closed, b_closed) = self.closed.assemble(problem)?;
        let (a_oracle, b_oracle) = self.oracle.assemble(problem)?;
        let n = problem.dimension();
        let base = problem.min_index;
        let mut a = a_closed;
        let mut b = b_closed;
        for row in 0..n {
            for off in 0..=a.bandwidth.min(n - 1 - row) {
                let v = self.reconcile(
                    "stiffness",
                    problem.m,
                    base + row,
                    base + row + off,
                    a.get(row, row + off),
                    a_oracle.get(row, row + off),
                );
                a.set(row, row + off, v);
            }
            for off in 0..=b.bandwidth.min(n - 1 - row) {
                let v = self.reconcile(
                    "mass",
                    problem.m,
                    base + row,
                    base + row + off,
                    b.get(row, row + off),
                    b_oracle.get(row, row + off),
                );
                b.set(row, row + off, v);
            }
        }
        b.check_spd("mass matrix")?;
        Ok((a, b))
    }
}

/// Name-keyed registry of the available assembly strategies.
pub struct AssemblyRegistry {
    strategies: BTreeMap<&'static str, Arc<dyn DiskAssembly>>,
}

impl AssemblyRegistry {
    pub fn new() -> Self {
        Self {
            strategies: BTreeMap::new(),
        }
    }

    /// Registry with all built-in strategies.
    pub fn builtin() -> Self {
        let mut reg = Self::new();
        reg.register(Arc::new(ClosedFormAssembly));
        reg.register(Arc::new(ExpansionAssembly));
        reg.register(Arc::new(CheckedAssembly::default()));
        reg
    }

    pub fn register(&mut self, strategy: Arc<dyn DiskAssembly>) {
        self.strategies.insert(strategy.name(), strategy);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn DiskAssembly>> {
        self.strategies.get(name).cloned()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.strategies.keys().copied().collect()
    }
}

impl Default for AssemblyRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Closed-form assembly of the per-mode pair.
pub fn assemble(problem: &ModeProblem) -> Result<(BandedSymmetricMatrix, BandedSymmetricMatrix)> {
    ClosedFormAssembly.assemble(problem)
}

/// Quadrature-backed assembly; the independent route used to validate the
/// closed forms.
pub fn assemble_oracle(
    problem: &ModeProblem,
) -> Result<(BandedSymmetricMatrix, BandedSymmetricMatrix)> {
    ExpansionAssembly.assemble(problem)
}
