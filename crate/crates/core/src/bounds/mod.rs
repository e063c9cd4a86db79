//! Ball volumes, distance thresholds and the analytic bounds of the
//! argument. Combinatorial statements are checked in exact integer
//! arithmetic; the analytic ones use the 192-bit [`Real`].

mod analytic;
mod combinatorial;
mod constants;
pub mod real;

pub use analytic::{
    beta_bound, beta_exact, c2_bound, entropy, enumeration_margin, f_func, final_chain, g_func, kl,
    prop_k_rhs, real_of, repetition_bound, series_bound, stirling_lower, FMax, F_GRID_POINTS,
};
pub use combinatorial::{
    ball_nonzero, ball_nonzero_floor, ball_table, binomial, binomial_row, gv_guarantee,
    gv_guarantee_with, main_threshold, main_threshold_exact, repetition_bound_cmp, repetition_bound_holds_exact,
    simple_prob_bound, simple_threshold, stirling_holds_exact, volume, GvConvention,
};
pub use constants::{format_rational, parse_rational, Exact, PaperConstants};
pub use real::Real;
