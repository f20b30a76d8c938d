//! Spectral-Galerkin eigensolver for the Stokes eigenvalue problem in
//! stream-function (biharmonic) form on the unit disk and on elliptic domains.
//!
//! The problem `-Δ²ψ = λΔψ` with clamped boundary separates in polar
//! coordinates on the disk into independent one-dimensional eigenproblems per
//! Fourier mode `m`, each discretized with a compact basis built from Jacobi
//! polynomials. On an ellipse the modes couple and a block eigenproblem is
//! assembled instead. In both cases the discrete problem is a symmetric
//! definite generalized eigenvalue problem `A x = λ B x`.
//!
//! Modules:
//! - [`jacobi`]: classical and generalized Jacobi polynomials plus
//!   Gauss-Jacobi quadrature, the arithmetic substrate of everything else.
//! - [`basis`]: the radial basis `φᵢ(r) = (1−r)²r²J^{2,1}_{i−4}(2r−1)` (plus
//!   two low-mode extras) and its exact expansions in the `J^{0,1}` family.
//! - [`banded`]: symmetric banded matrix storage for the per-mode matrices.
//! - [`assembly`]: interchangeable strategies that build the per-mode
//!   stiffness/mass matrices on the disk (closed forms, a quadrature-based
//!   expansion path, and a checked combination), selectable by name.
//! - [`eigen`]: dense symmetric-definite generalized eigensolver.
//! - [`bessel`]: analytic ground truth for the disk via zeros of Bessel
//!   functions of the first kind.
//! - [`elliptic`]: the coupled block eigenproblem on an ellipse.

pub mod assembly;
pub mod banded;
pub mod basis;
pub mod bessel;
pub mod eigen;
pub mod elliptic;
mod error;
pub mod jacobi;

pub use assembly::{
    assemble, assemble_oracle, AssemblyRegistry, CheckedAssembly, ClosedFormAssembly, DiskAssembly,
    ExpansionAssembly, ModeProblem,
};
pub use banded::BandedSymmetricMatrix;
pub use basis::{BasisId, ExpansionKind, JacobiExpansion, RadialOperator};
pub use bessel::{bessel_j, exact_disk_eigenvalues, exact_eigenfunction, BesselZero};
pub use eigen::{
    rayleigh, solve_gep, solve_gep_dense, DenseSym, DomainTag, Spectrum, SpectrumMeta,
};
pub use elliptic::{
    assemble_ellipse, field_value, sample_eigenfunction, solve_ellipse, solve_ellipse_with,
    BlockMatrix, EllipseGeometry, FieldGrid, FieldPoint, FieldSamples, MassCouplingForm,
};
pub use error::{Error, Result};
pub use jacobi::{gauss_jacobi, JacobiIndex, QuadratureRule};
