//! Galerkin discretization of `-hbar^2/2 Laplacian + V_eps` in the
//! semiclassical Hermite basis.
//!
//! Ladder operators are built on an enlarged basis, multiplied, and the
//! result is cut back to the requested basis. Each factor of a product
//! spoils the outermost shell of columns it can reach, so the enlarged
//! basis must carry at least as many extra shells as the operator degree.

use nalgebra::DMatrix;

use crate::eig::{symmetric_eigs, SymmetricMatrix};
use crate::error::{Error, Result};
use crate::prep::PolyPotential;
use crate::spectrum::{SpectrumSource, SpectrumTable};

/// Extra shells beyond the operator degree used by [`assemble_schrodinger`].
pub const PAD_SAFETY: usize = 2;

/// All `(a1, a2)` with `a1 + a2 <= m_cut`, ordered by shell and then by `a1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisIndex {
    m_cut: usize,
    pairs: Vec<[usize; 2]>,
}

impl BasisIndex {
    pub fn new(m_cut: usize) -> Self {
        let pairs = (0..=m_cut).flat_map(|s| (0..=s).map(move |a1| [a1, s - a1])).collect();
        Self { m_cut, pairs }
    }

    pub fn m_cut(&self) -> usize {
        self.m_cut
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Number of basis functions with `a1 + a2 <= m`.
    pub fn size_for(m: usize) -> usize {
        (m + 1) * (m + 2) / 2
    }

    pub fn pairs(&self) -> &[[usize; 2]] {
        &self.pairs
    }

    pub fn get(&self, i: usize) -> [usize; 2] {
        self.pairs[i]
    }

    /// Position of `(a1, a2)`, or `None` outside the basis.
    pub fn index(&self, a: [usize; 2]) -> Option<usize> {
        let s = a[0] + a[1];
        (s <= self.m_cut).then(|| s * (s + 1) / 2 + a[0])
    }

    pub fn shell(&self, i: usize) -> usize {
        let [a1, a2] = self.pairs[i];
        a1 + a2
    }
}

/// A matrix on a Hermite basis whose columns with shell `<= exact_shell`
/// agree with the untruncated operator.
#[derive(Debug, Clone, PartialEq)]
pub struct BandOperator {
    pub basis: BasisIndex,
    pub matrix: DMatrix<f64>,
    /// Negative when no column is exact.
    pub exact_shell: i64,
    /// Largest shell change produced by the operator.
    pub halfwidth: usize,
}

impl BandOperator {
    pub fn identity(basis: &BasisIndex) -> Self {
        let n = basis.len();
        Self {
            basis: basis.clone(),
            matrix: DMatrix::identity(n, n),
            exact_shell: basis.m_cut as i64,
            halfwidth: 0,
        }
    }

    /// `self * rhs`, i.e. `rhs` acts first.
    pub fn compose(&self, rhs: &BandOperator) -> BandOperator {
        assert_eq!(self.basis, rhs.basis, "operators on different bases");
        BandOperator {
            basis: self.basis.clone(),
            matrix: sparse_left_product(&self.matrix, &rhs.matrix),
            exact_shell: rhs.exact_shell.min(self.exact_shell - rhs.halfwidth as i64),
            halfwidth: self.halfwidth + rhs.halfwidth,
        }
    }

    /// Linear combination on the same basis; exactness is the weaker of the two.
    pub fn axpy(&mut self, a: f64, other: &BandOperator) {
        self.matrix += &other.matrix * a;
        self.exact_shell = self.exact_shell.min(other.exact_shell);
        self.halfwidth = self.halfwidth.max(other.halfwidth);
    }

    /// Leading block on the shells `<= m`.
    pub fn restrict(&self, m: usize) -> Result<BandOperator> {
        if (m as i64) > self.exact_shell {
            return Err(Error::PadBudget {
                pad: self.basis.m_cut.saturating_sub(m),
                degree: self.halfwidth,
            });
        }
        let n = BasisIndex::size_for(m);
        Ok(BandOperator {
            basis: BasisIndex::new(m),
            matrix: self.matrix.view((0, 0), (n, n)).into_owned(),
            exact_shell: m as i64,
            halfwidth: self.halfwidth,
        })
    }
}

/// `a * b` skipping zero entries of `b`; ladder products are very sparse.
fn sparse_left_product(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut out = DMatrix::zeros(n, b.ncols());
    for j in 0..b.ncols() {
        for k in 0..b.nrows() {
            let bkj = b[(k, j)];
            if bkj == 0.0 {
                continue;
            }
            let col = a.column(k);
            let mut dst = out.column_mut(j);
            for (d, s) in dst.iter_mut().zip(col.iter()) {
                if *s != 0.0 {
                    *d += bkj * s;
                }
            }
        }
    }
    out
}

/// `M = 3 E / (2 hbar) + 1 / sqrt(hbar)`, rounded up.
pub fn truncation_m(hbar: f64, energy: f64) -> usize {
    let x = 1.5 * energy / hbar + 1.0 / hbar.sqrt();
    // Absorb rounding noise so that exact integers are not bumped up.
    let m = (x - 1e-9 * x.max(1.0)).ceil();
    m.max(1.0) as usize
}

/// The position and scaled derivative ladders `(x1, x2, hbar d1, hbar d2)`.
pub fn ladder_matrices(basis: &BasisIndex, hbar: f64) -> [BandOperator; 4] {
    let n = basis.len();
    let s = (hbar / 2.0).sqrt();
    let mut x = [DMatrix::zeros(n, n), DMatrix::zeros(n, n)];
    let mut d = [DMatrix::zeros(n, n), DMatrix::zeros(n, n)];
    for (col, &a) in basis.pairs().iter().enumerate() {
        for j in 0..2 {
            if a[j] > 0 {
                let mut lo = a;
                lo[j] -= 1;
                let row = basis.index(lo).expect("lower shell is present");
                let c = s * (a[j] as f64).sqrt();
                x[j][(row, col)] = c;
                d[j][(row, col)] = c;
            }
            let mut hi = a;
            hi[j] += 1;
            if let Some(row) = basis.index(hi) {
                let c = s * ((a[j] + 1) as f64).sqrt();
                x[j][(row, col)] = c;
                d[j][(row, col)] = -c;
            }
        }
    }
    let wrap = |matrix| BandOperator {
        basis: basis.clone(),
        matrix,
        exact_shell: basis.m_cut() as i64 - 1,
        halfwidth: 1,
    };
    let [x1, x2] = x;
    let [d1, d2] = d;
    [wrap(x1), wrap(x2), wrap(d1), wrap(d2)]
}

/// Galerkin matrix of `P = -hbar^2/2 Laplacian + V_eps` on the shells `<= m`,
/// built with `max(deg V, 2) + PAD_SAFETY` extra shells.
pub fn assemble_schrodinger(p: &PolyPotential, eps: f64, hbar: f64, m: usize) -> Result<BandOperator> {
    let pad = (p.max_total_degree() as usize).max(2) + PAD_SAFETY;
    assemble_schrodinger_with_pad(p, eps, hbar, m, pad)
}

pub fn assemble_schrodinger_with_pad(
    p: &PolyPotential,
    eps: f64,
    hbar: f64,
    m: usize,
    pad: usize,
) -> Result<BandOperator> {
    let v = p.at(eps);
    let degree = (v.degree().unwrap_or(0) as usize).max(2);
    if pad < degree {
        return Err(Error::PadBudget { pad, degree });
    }
    let basis = BasisIndex::new(m + pad);
    let [x1, x2, d1, d2] = ladder_matrices(&basis, hbar);

    let powers = |x: &BandOperator| {
        let mut out = vec![BandOperator::identity(&basis)];
        for k in 1..=degree {
            let next = x.compose(&out[k - 1]);
            out.push(next);
        }
        out
    };
    let p1 = powers(&x1);
    let p2 = powers(&x2);

    let mut total = d1.compose(&d1);
    total.axpy(1.0, &d2.compose(&d2));
    total.matrix *= -0.5;
    for ((i, j), c) in v.terms() {
        total.axpy(c, &p1[i as usize].compose(&p2[j as usize]));
    }
    total.restrict(m)
}

/// Eigenvalues at most `energy` of the Galerkin matrix at size
/// `m_override` or [`truncation_m`].
pub fn galerkin_spectrum_below(
    p: &PolyPotential,
    eps: f64,
    hbar: f64,
    energy: f64,
    m_override: Option<usize>,
) -> Result<SpectrumTable> {
    if !(hbar > 0.0) {
        return Err(Error::Precondition(format!("hbar must be positive, got {hbar}")));
    }
    let m = m_override.unwrap_or_else(|| truncation_m(hbar, energy));
    let op = assemble_schrodinger(p, eps, hbar, m)?;
    let values = symmetric_eigs(&SymmetricMatrix::new(op.matrix)?, false)?.values;
    Ok(SpectrumTable::new(SpectrumSource::Galerkin, hbar, eps, energy, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prep::Poly2;

    #[test]
    fn basis_order() {
        let b = BasisIndex::new(2);
        assert_eq!(b.pairs(), &[[0, 0], [0, 1], [1, 0], [0, 2], [1, 1], [2, 0]]);
        for (i, &a) in b.pairs().iter().enumerate() {
            assert_eq!(b.index(a), Some(i));
        }
        assert_eq!(b.index([3, 0]), None);
        assert_eq!(BasisIndex::new(25).len(), 351);
    }

    #[test]
    fn truncation_sizes() {
        assert_eq!(truncation_m(0.01, 0.1), 25);
        assert_eq!(truncation_m(0.0025, 0.025), 35);
        assert_eq!(BasisIndex::size_for(truncation_m(0.01, 0.1)), 351);
        assert_eq!(truncation_m(0.011, 0.11), 25);
    }

    #[test]
    fn ladder_elements() {
        let h: f64 = 0.04;
        let b = BasisIndex::new(3);
        let [x1, x2, d1, _] = ladder_matrices(&b, h);
        let s = (h / 2.0).sqrt();
        let i00 = b.index([0, 0]).unwrap();
        let i10 = b.index([1, 0]).unwrap();
        let i01 = b.index([0, 1]).unwrap();
        assert!((x1.matrix[(i10, i00)] - s).abs() < 1e-16);
        assert!((d1.matrix[(i00, i10)] - s).abs() < 1e-16);
        assert!((d1.matrix[(i10, i00)] + s).abs() < 1e-16);
        assert_eq!(x2.matrix[(i10, i00)], 0.0);
        assert!((x2.matrix[(i01, i00)] - s).abs() < 1e-16);
        assert_eq!(x1.matrix, x1.matrix.transpose());
        assert_eq!(d1.matrix, -d1.matrix.transpose());
        assert_eq!(x1.exact_shell, 2);
    }

    #[test]
    fn harmonic_matrix_is_diagonal() {
        let h = 0.01;
        let v = Poly2::from_terms([((2, 0), 0.5), ((0, 2), 0.5)]);
        let op = assemble_schrodinger(&PolyPotential::new(v, Poly2::zero()), 0.0, h, 6).unwrap();
        for (i, &[a1, a2]) in op.basis.pairs().iter().enumerate() {
            for j in 0..op.basis.len() {
                let want = if i == j { h * (a1 + a2 + 1) as f64 } else { 0.0 };
                assert!((op.matrix[(i, j)] - want).abs() < 1e-15, "{i} {j} {} {want}", op.matrix[(i, j)]);
            }
        }
    }

    #[test]
    fn linear_potential_is_restricted_ladder() {
        let h = 0.02;
        let v = Poly2::var(0);
        let op = assemble_schrodinger(&PolyPotential::new(v, Poly2::zero()), 0.0, h, 5).unwrap();
        let [x1, ..] = ladder_matrices(&BasisIndex::new(5), h);
        let kinetic = assemble_schrodinger(&PolyPotential::new(Poly2::zero(), Poly2::zero()), 0.0, h, 5).unwrap();
        assert!((op.matrix - kinetic.matrix - x1.matrix).amax() < 1e-16);
    }

    #[test]
    fn pad_budget_is_enforced() {
        let p = PolyPotential::fermi_family(1.0, 1.0);
        assert!(matches!(
            assemble_schrodinger_with_pad(&p, 0.0, 0.01, 5, 3),
            Err(Error::PadBudget { pad: 3, degree: 4 })
        ));
        assert!(assemble_schrodinger_with_pad(&p, 0.0, 0.01, 5, 4).is_ok());
    }
}
