//! Exact computation of central values and derivatives of quadratic
//! Dirichlet L-functions over rational function fields, their averages
//! over the hyperelliptic ensembles of square-free monic discriminants,
//! and the closed-form main terms those averages converge to.
//!
//! Everything at s = 1/2 is carried in the quadratic field Q(sqrt q), so
//! the identity checks in this crate are exact equality tests rather than
//! float comparisons; floats appear only in report output and in the
//! truncated series on the prediction side.

// Sums here are indexed by polynomial degree; keeping the degree as the
// loop variable reads better than enumerate-based rewrites.
#![allow(clippy::needless_range_loop)]

pub mod asymptotics;
pub mod characters;
pub mod combin;
pub mod ensemble;
pub mod enumerate;
pub mod error;
pub mod factor;
pub mod field;
pub mod lfunction;
pub mod poly;
pub mod quad;
pub mod ratpoly;
pub mod roots;
pub mod verify;

pub use characters::{chi_prime_euler, coprime_squarefree_count, CharCache};
pub use ensemble::{
    compare, empirical_moment, empirical_s, empirical_t, ensemble_a_sums, error_scale,
    estimate_symbol_evals, exact_m_sum, exact_n_sum, fit_error_constant, moment_from_sums,
    moment_reports, prediction_for, EnsembleSpec, ExecOpts, MomentReport,
};
pub use enumerate::{monic_polys, squarefree_count, squarefree_polys, MonicRange};
pub use error::{Error, Result};
pub use factor::{irreducible_counts, Factorization, IrreducibleTable};
pub use field::FieldCtx;
pub use lfunction::{
    afe_even_from_coeffs, afe_odd_from_coeffs, build_l, deriv_half_afe_even, deriv_half_afe_odd,
    deriv_half_direct, even_afe_weights, fe_symmetry_check, odd_afe_weights, rh_roots_check, LData,
    Parity, RhReport, EVEN_DIRECT_MAX_GENUS,
};
pub use poly::FqPoly;
pub use quad::{rational_string, QuadValue};
pub use verify::{run_verify, SuiteReport};
