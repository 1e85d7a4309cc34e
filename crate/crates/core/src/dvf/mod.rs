//! Dressed vacuum forms: z-functions, tableau sums, generating series and the
//! two determinant formulas for transfer-matrix eigenvalues.

mod data;
pub mod sampled;
mod series;
mod term;
mod transfer;

pub use data::{random_fraction, BetheData};
pub use series::{generating_series_lower, generating_series_upper, OperatorSeries};
pub use term::{terms_to_ratfun, Factor, FactorKind, Term};
pub use transfer::{
    bareiss, cell_offset, character_limit, classical_jacobi_trudi, giambelli_dual_det,
    giambelli_entry, jacobi_trudi_det, jacobi_trudi_entry, max_entry_index, shape_base,
    tableau_term, tableau_terms, transfer_tableau_sum, z_fn, DetRing,
};
