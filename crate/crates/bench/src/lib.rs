//! Shared fixtures for the criterion benches.

use nearfermi_core::eig::SymmetricMatrix;
use nearfermi_core::hermite::{assemble_schrodinger, truncation_m};
use nearfermi_core::prep::PolyPotential;

/// The model family with `gamma = c = 1`.
pub fn family() -> PolyPotential {
    PolyPotential::fermi_family(1.0, 1.0)
}

/// Galerkin matrix at `E = 10 hbar` with the default truncation.
pub fn family_matrix(hbar: f64) -> SymmetricMatrix {
    let m = truncation_m(hbar, 10.0 * hbar);
    let op = assemble_schrodinger(&family(), 0.0, hbar, m).expect("assembly");
    SymmetricMatrix::new(op.matrix).expect("symmetric")
}
