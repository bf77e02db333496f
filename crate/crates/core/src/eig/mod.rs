//! Real symmetric eigensolvers.
//!
//! The dense path reduces to tridiagonal form with Householder reflections
//! and then runs implicit-shift QL; tridiagonal inputs go straight to QL.
//! Both return eigenvalues in ascending order.

mod householder;
mod ql;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Maximum QL sweeps allowed per eigenvalue.
pub const MAX_QL_SWEEPS: usize = 50;

/// Relative tolerance used when validating symmetry of input matrices.
pub const SYMMETRY_TOL: f64 = 1e-13;

/// A dense real matrix known to be symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    entries: DMatrix<f64>,
}

impl SymmetricMatrix {
    /// Validates symmetry to [`SYMMETRY_TOL`] relative to the largest entry
    /// and stores the exact symmetrization `(A + Aᵀ)/2`.
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::Shape(format!(
                "expected a square matrix, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        let scale = a.amax().max(f64::MIN_POSITIVE);
        let n = a.nrows();
        for j in 0..n {
            for i in (j + 1)..n {
                let defect = (a[(i, j)] - a[(j, i)]).abs();
                if defect > SYMMETRY_TOL * scale {
                    return Err(Error::NotSymmetric {
                        row: i,
                        col: j,
                        defect,
                    });
                }
            }
        }
        let sym = (&a + a.transpose()) * 0.5;
        Ok(Self { entries: sym })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: DMatrix::identity(n, n),
        }
    }

    /// Embeds a symmetric tridiagonal matrix densely.
    pub fn from_tridiagonal(diag: &[f64], offdiag: &[f64]) -> Result<Self> {
        check_tridiagonal(diag, offdiag)?;
        let n = diag.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        for (i, &e) in offdiag.iter().enumerate() {
            m[(i, i + 1)] = e;
            m[(i + 1, i)] = e;
        }
        Ok(Self { entries: m })
    }

    pub fn order(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.entries
    }
}

/// Eigenvalues (ascending) and, optionally, the orthogonal matrix whose
/// k-th column is the eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Option<DMatrix<f64>>,
}

/// Householder tridiagonalization followed by implicit-shift QL.
pub fn symmetric_eigs(a: &SymmetricMatrix, want_vectors: bool) -> Result<EigenDecomposition> {
    let n = a.order();
    if n == 0 {
        return Ok(EigenDecomposition {
            values: Vec::new(),
            vectors: want_vectors.then(|| DMatrix::zeros(0, 0)),
        });
    }
    let tri = householder::tridiagonalize(a.entries(), want_vectors);
    let mut d = tri.diag;
    let mut e = tri.subdiag;
    let mut q = tri.q;
    ql::implicit_ql(&mut d, &mut e, q.as_mut())?;
    Ok(sorted(d, q))
}

/// Eigenvalues of the symmetric tridiagonal matrix with the given diagonal
/// and off-diagonal.
pub fn tridiag_eigs(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>> {
    check_tridiagonal(diag, offdiag)?;
    let mut d = diag.to_vec();
    let mut e = offdiag.to_vec();
    e.push(0.0);
    if d.is_empty() {
        return Ok(d);
    }
    ql::implicit_ql(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

fn check_tridiagonal(diag: &[f64], offdiag: &[f64]) -> Result<()> {
    if offdiag.len() + 1 != diag.len() && !(diag.is_empty() && offdiag.is_empty()) {
        return Err(Error::Shape(format!(
            "tridiagonal matrix with {} diagonal entries needs {} off-diagonal entries, got {}",
            diag.len(),
            diag.len().saturating_sub(1),
            offdiag.len()
        )));
    }
    Ok(())
}

fn sorted(values: Vec<f64>, vectors: Option<DMatrix<f64>>) -> EigenDecomposition {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = vectors.map(|v| {
        let n = v.nrows();
        DMatrix::from_fn(n, order.len(), |r, c| v[(r, order[c])])
    });
    EigenDecomposition {
        values: sorted_values,
        vectors: sorted_vectors,
    }
}
