//! Order-by-order diagonalization of a symmetric matrix family
//! `A(eps) = sum_m eps^m C_m`.
//!
//! At each level the lowest non-scalar jet is diagonalized by a constant
//! rotation, its eigenvalue clusters are decoupled up to the requested order
//! by `exp(eps^p S)` with `S` antisymmetric, and each cluster is handled
//! recursively one order higher.

use nalgebra::DMatrix;

use crate::eig::{symmetric_eigs, SymmetricMatrix};
use crate::error::{Error, Result};

/// Relative gap below which two eigenvalues of a jet are treated as equal.
const CLUSTER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct JetDiagonalization {
    /// `u[m]` is the `eps^m` coefficient of `U(eps)`.
    pub u: Vec<DMatrix<f64>>,
    /// `lambdas[j][m]` is the `eps^m` coefficient of the `j`-th eigenvalue.
    pub lambdas: Vec<Vec<f64>>,
}

impl JetDiagonalization {
    pub fn jet_order(&self) -> usize {
        self.u.len() - 1
    }

    pub fn u_at(&self, eps: f64) -> DMatrix<f64> {
        horner(&self.u, eps)
    }

    pub fn lambdas_at(&self, eps: f64) -> Vec<f64> {
        self.lambdas
            .iter()
            .map(|jet| jet.iter().rev().fold(0.0, |acc, c| acc * eps + c))
            .collect()
    }

    /// `max |U^T A U - diag(lambda)|` at `eps`, with `A` given by its jets.
    pub fn residual(&self, a: &[DMatrix<f64>], eps: f64) -> f64 {
        let u = self.u_at(eps);
        let conj = u.transpose() * horner(a, eps) * &u;
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.lambdas_at(eps)));
        (conj - diag).amax()
    }
}

/// Diagonalizes `A(eps) = sum_m eps^m a[m]` up to `O(eps^{jet_order+1})`.
///
/// Jets beyond `jet_order` are ignored; missing ones are zero.
pub fn eps_jet_diagonalize(a: &[DMatrix<f64>], jet_order: usize) -> Result<JetDiagonalization> {
    let n = a.first().map(|m| m.nrows()).ok_or_else(|| Error::Shape("empty matrix family".into()))?;
    let mut jets = Vec::with_capacity(jet_order + 1);
    for m in 0..=jet_order {
        match a.get(m) {
            Some(c) => jets.push(SymmetricMatrix::new(c.clone())?.into_inner()),
            None => jets.push(DMatrix::zeros(n, n)),
        }
    }
    if jets.iter().any(|c| c.nrows() != n) {
        return Err(Error::Shape("jets of different orders".into()));
    }
    let (u, lambdas) = diag_block(&jets, 0)?;
    Ok(JetDiagonalization { u, lambdas })
}

type Jets = Vec<DMatrix<f64>>;

/// `c[0..depth]` are scalar on this block.
fn diag_block(c: &[DMatrix<f64>], depth: usize) -> Result<(Jets, Vec<Vec<f64>>)> {
    let n = c[0].nrows();
    let k = c.len() - 1;
    if n == 1 || depth > k {
        let lambdas = (0..n).map(|i| c.iter().map(|m| m[(i, i)]).collect()).collect();
        return Ok((identity_jets(n, k), lambdas));
    }

    let lead = SymmetricMatrix::new(symmetrized(&c[depth]))?;
    let eig = symmetric_eigs(&lead, true)?;
    let q = eig.vectors.expect("vectors requested");
    let nu = eig.values;
    let mut cur: Jets = c.iter().map(|m| q.transpose() * m * &q).collect();
    let mut u = identity_jets(n, k);
    u[0] = q;

    let clusters = clusters(&nu, CLUSTER_TOL * c[depth].amax());
    if clusters.len() == 1 {
        let (inner, lambdas) = diag_block(&cur, depth + 1)?;
        return Ok((jet_mul(&u, &inner), lambdas));
    }

    let label: Vec<usize> = clusters
        .iter()
        .enumerate()
        .flat_map(|(ci, cl)| cl.iter().map(move |_| ci))
        .collect();
    for m in (depth + 1)..=k {
        let s = DMatrix::from_fn(n, n, |i, j| {
            if label[i] == label[j] {
                0.0
            } else {
                cur[m][(i, j)] / (nu[j] - nu[i])
            }
        });
        if s.amax() == 0.0 {
            continue;
        }
        let e = exp_jet(&s, m - depth, k);
        cur = jet_mul(&jet_mul(&transpose(&e), &cur), &e);
        u = jet_mul(&u, &e);
    }

    let mut block = vec![DMatrix::zeros(n, n); k + 1];
    let mut lambdas = Vec::with_capacity(n);
    for cl in &clusters {
        let sub: Jets = cur.iter().map(|m| m.select_rows(cl).select_columns(cl)).collect();
        let (us, ls) = diag_block(&sub, depth + 1)?;
        for (b, s) in block.iter_mut().zip(&us) {
            for (si, &i) in cl.iter().enumerate() {
                for (sj, &j) in cl.iter().enumerate() {
                    b[(i, j)] = s[(si, sj)];
                }
            }
        }
        lambdas.extend(ls);
    }
    Ok((jet_mul(&u, &block), lambdas))
}

/// Groups ascending values whose consecutive gaps are at most `tol`.
fn clusters(values: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..values.len() {
        if values[i] - values[i - 1] <= tol {
            out.last_mut().unwrap().push(i);
        } else {
            out.push(vec![i]);
        }
    }
    out
}

fn symmetrized(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn identity_jets(n: usize, k: usize) -> Jets {
    let mut v = vec![DMatrix::zeros(n, n); k + 1];
    v[0] = DMatrix::identity(n, n);
    v
}

fn transpose(a: &[DMatrix<f64>]) -> Jets {
    a.iter().map(|m| m.transpose()).collect()
}

/// Truncated product of two jets of the same order.
fn jet_mul(a: &[DMatrix<f64>], b: &[DMatrix<f64>]) -> Jets {
    let k = a.len() - 1;
    (0..=k)
        .map(|m| {
            let mut acc = &a[0] * &b[m];
            for r in 1..=m {
                acc += &a[r] * &b[m - r];
            }
            acc
        })
        .collect()
}

/// `exp(eps^p s)` truncated at order `k`.
fn exp_jet(s: &DMatrix<f64>, p: usize, k: usize) -> Jets {
    let n = s.nrows();
    let mut out = identity_jets(n, k);
    let mut term = DMatrix::identity(n, n);
    let mut r = 1;
    while r * p <= k {
        term = &term * s / r as f64;
        out[r * p] = term.clone();
        r += 1;
    }
    out
}

fn horner(jets: &[DMatrix<f64>], eps: f64) -> DMatrix<f64> {
    let mut acc = jets.last().cloned().expect("non-empty jets");
    for m in jets.iter().rev().skip(1) {
        acc = acc * eps + m;
    }
    acc
}
