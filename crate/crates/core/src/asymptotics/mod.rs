//! Closed-form side of the mean-value formulas: Bernoulli/Faulhaber
//! coefficients, the square-free Dirichlet series behind G(1) and its
//! normalized derivatives, the even-parity correction jet, the prime-sum
//! calculus for higher log-derivatives, and the assembled predictions.

pub mod delta;
pub mod faulhaber;
pub mod gseries;
pub mod hseries;
pub mod predict;

pub use delta::{delta_f64, delta_jet, delta_jet_fd, DeltaJet};
pub use faulhaber::{
    bernoulli_plus, faulhaber, faulhaber_split_check, power_sum_brute, second_bernoulli,
    FaulhaberCoeffs,
};
pub use gseries::{
    coprime_weight_by_degree, coprime_weight_identity, dirichlet_partial_exact,
    dirichlet_partial_f64, euler_product_g1, g_deriv_series, g_tail_bound, mu_weight_by_degree,
    GSeriesValue,
};
pub use hseries::{h_closed_eval, h_kernel, h_n_eval, phi_g_eval, phi_power_expr};
pub use predict::{
    component_main, even_mean_prediction, ghat_exact, m_tail_budget, n_main_exact,
    odd_mean_prediction, s_main_exact, scaled_ensemble_size, AsymPrediction, PredictionKind,
};
