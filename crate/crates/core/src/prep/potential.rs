use std::str::FromStr;

use super::poly::Poly2;
use crate::error::{Error, Result};

/// A polynomial potential family `V_eps = sum_k eps^k V^k`.
///
/// `slices[0]` is `V^0`, `slices[1]` the first-order slice `V^1`; more slices
/// are allowed and are carried through to the Galerkin matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyPotential {
    slices: Vec<Poly2>,
}

impl PolyPotential {
    pub fn new(v0: Poly2, v1: Poly2) -> Self {
        Self { slices: vec![v0, v1] }
    }

    pub fn from_slices(mut slices: Vec<Poly2>) -> Self {
        while slices.len() < 2 {
            slices.push(Poly2::zero());
        }
        Self { slices }
    }

    /// `(1/2 + eps) x1^2 + (2 + 2c eps) x2^2 + x1^3 + x1 x2^2 / 2
    /// + gamma x1^2 x2 + x1^4 + x2^4`.
    pub fn fermi_family(gamma: f64, c: f64) -> Self {
        let v0 = Poly2::from_terms([
            ((2, 0), 0.5),
            ((0, 2), 2.0),
            ((3, 0), 1.0),
            ((1, 2), 0.5),
            ((2, 1), gamma),
            ((4, 0), 1.0),
            ((0, 4), 1.0),
        ]);
        let v1 = Poly2::from_terms([((2, 0), 1.0), ((0, 2), 2.0 * c)]);
        Self::new(v0, v1)
    }

    pub fn v0(&self) -> &Poly2 {
        &self.slices[0]
    }

    pub fn v1(&self) -> &Poly2 {
        &self.slices[1]
    }

    pub fn slices(&self) -> &[Poly2] {
        &self.slices
    }

    pub fn max_total_degree(&self) -> u32 {
        self.slices.iter().filter_map(Poly2::degree).max().unwrap_or(0)
    }

    /// `V_eps` as a single polynomial.
    pub fn at(&self, eps: f64) -> Poly2 {
        let mut out = Poly2::zero();
        let mut w = 1.0;
        for s in &self.slices {
            out = &out + &s.scale(w);
            w *= eps;
        }
        out
    }

    /// The same family in shifted coordinates, `x -> V(x - a)`.
    pub fn shifted(&self, a: [f64; 2]) -> Self {
        let id = [[1.0, 0.0], [0.0, 1.0]];
        Self {
            slices: self.slices.iter().map(|s| s.compose_affine([-a[0], -a[1]], id)).collect(),
        }
    }

    /// The same family composed with a linear map, `x -> V(m x)`.
    pub fn linear_change(&self, m: [[f64; 2]; 2]) -> Self {
        Self {
            slices: self.slices.iter().map(|s| s.compose_affine([0.0, 0.0], m)).collect(),
        }
    }
}

/// Line format: `i j : coeff` adds `coeff x1^i x2^j` to the current slice.
/// The file starts in the `V^0` slice; a `[eps]` header switches to `V^1`
/// and `[eps^k]` to `V^k`. `#` starts a comment.
impl FromStr for PolyPotential {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut slices = vec![Poly2::zero()];
        let mut current = 0usize;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: idx + 1, message };
            if let Some(header) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                current = match header.trim() {
                    "eps" => 1,
                    h => h
                        .strip_prefix("eps^")
                        .and_then(|k| k.trim().parse().ok())
                        .ok_or_else(|| err(format!("unknown section [{h}]")))?,
                };
                if slices.len() <= current {
                    slices.resize(current + 1, Poly2::zero());
                }
                continue;
            }
            let (exps, coeff) = line
                .split_once(':')
                .ok_or_else(|| err("expected `i j : coeff`".into()))?;
            let exps: Vec<u32> = exps
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| err(format!("bad exponent: {e}")))?;
            let [i, j] = exps[..] else {
                return Err(err("expected two exponents".into()));
            };
            let c: f64 = coeff.trim().parse().map_err(|e| err(format!("bad coefficient: {e}")))?;
            slices[current].add_term((i, j), c);
        }
        Ok(Self::from_slices(slices))
    }
}
