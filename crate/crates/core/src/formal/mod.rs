//! Graded formal series in `(z, zbar, eps, hbar)`, the Moyal bracket and the
//! ε-Birkhoff-Gustavson normal form.

mod bracket;
mod frequencies;
mod io;
mod normal_form;
mod series;

pub use bracket::{ad_h20_eigenvalue, hbar_bracket, lie_transform, weyl_bracket};
pub use frequencies::Frequencies;
pub use io::{parse_series, write_series};
pub use normal_form::{
    bgnf_iterate, bgnf_iterate_with, bgnf_order3, commutator_defect, is_resonant, resonant_coupling,
    split_homological, split_homological_with, HomologicalConfig, NormalForm, Order3, SmallDenominatorPolicy, Split,
    SMALL_DENOMINATOR_FLOOR,
};
pub use series::{FormalSeries, Monomial, MonomialKey, PhaseMonomial, PhaseSeries, Series};
