use nalgebra::DMatrix;

pub(super) struct Tridiagonal {
    pub diag: Vec<f64>,
    /// `subdiag[i]` couples rows `i` and `i + 1`; the last entry is zero.
    pub subdiag: Vec<f64>,
    pub q: Option<DMatrix<f64>>,
}

/// Householder reduction of a symmetric matrix to tridiagonal form
/// (EISPACK `tred2` ordering: the last row is eliminated first).
pub(super) fn tridiagonalize(a: &DMatrix<f64>, want_q: bool) -> Tridiagonal {
    let n = a.nrows();
    // Row-major working copy; v[i][j] is row i.
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| a[(i, j)]).collect()).collect();
    let mut d: Vec<f64> = v[n - 1].clone();
    let mut e = vec![0.0; n];

    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
                v[j][i] = 0.0;
            }
        } else {
            for dk in d[..i].iter_mut() {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].iter_mut().for_each(|x| *x = 0.0);

            for j in 0..i {
                f = d[j];
                v[j][i] = f;
                g = e[j] + v[j][j] * f;
                for k in (j + 1)..i {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[k][j] -= f * e[k] + g * d[k];
                }
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate the reflections. This also recovers the diagonal.
    for i in 0..n.saturating_sub(1) {
        v[n - 1][i] = v[i][i];
        v[i][i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[k][i + 1] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[k][i + 1] * v[k][j];
                }
                for k in 0..=i {
                    v[k][j] -= g * d[k];
                }
            }
        }
        for row in v.iter_mut().take(i + 1) {
            row[i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[n - 1][j];
        v[n - 1][j] = 0.0;
    }
    v[n - 1][n - 1] = 1.0;

    // Shift so that subdiag[i] couples i and i+1.
    let mut sub = vec![0.0; n];
    sub[..(n - 1)].copy_from_slice(&e[1..n]);

    let q = want_q.then(|| DMatrix::from_fn(n, n, |r, c| v[r][c]));
    Tridiagonal {
        diag: d,
        subdiag: sub,
        q,
    }
}
