use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not symmetric: |a[{row}][{col}] - a[{col}][{row}]| = {defect:e}")]
    NotSymmetric { row: usize, col: usize, defect: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("QL iteration did not converge for eigenvalue {index} after {sweeps} sweeps")]
    NoConvergence { index: usize, sweeps: usize },

    #[error("small denominator {value:e} below floor {floor:e} for monomial {monomial}")]
    SmallDenominator {
        monomial: String,
        value: f64,
        floor: f64,
    },

    #[error("perturbation has a term of degree {degree} < 3")]
    PerturbationOrder { degree: u32 },

    #[error("Newton iteration did not converge in {iterations} steps (last |grad| = {residual:e})")]
    CriticalPoint { iterations: usize, residual: f64 },

    #[error("Hessian is not positive definite (eigenvalues {0:?})")]
    DegenerateHessian(Vec<f64>),

    #[error("frequencies {omega:?} are not in 1:2 resonance")]
    ResonanceMismatch { omega: [f64; 2] },

    #[error("mu routes disagree: closed form {closed}, cubic coefficient {from_cubic}")]
    MuMismatch { closed: f64, from_cubic: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("padding of {pad} shells cannot represent a degree-{degree} operator exactly")]
    PadBudget { pad: usize, degree: usize },

    #[error("spectra have no common values below {energy}")]
    EmptyOverlap { energy: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("output failed: {0}")]
    Output(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Output(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Output(e.to_string())
    }
}
