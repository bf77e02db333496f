use crate::error::{Error, Result};

/// Frequency jets `omega_j(eps) = omega0_j + eps omega1_j + O(eps^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frequencies {
    pub omega0: [f64; 2],
    pub omega1: [f64; 2],
}

impl Frequencies {
    pub fn new(omega0: [f64; 2], omega1: [f64; 2]) -> Result<Self> {
        if !omega0.iter().all(|&w| w > 0.0 && w.is_finite()) {
            return Err(Error::Precondition(format!("frequencies must be positive, got {omega0:?}")));
        }
        Ok(Self { omega0, omega1 })
    }

    /// `omega_j(eps)` truncated at first order.
    pub fn at(&self, eps: f64) -> [f64; 2] {
        [self.omega0[0] + eps * self.omega1[0], self.omega0[1] + eps * self.omega1[1]]
    }
}
