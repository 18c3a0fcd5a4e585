//! Limiting laws of the counting statistics: the joint degree/weight
//! distribution `x_{d,w}`, its weight marginal `x_w`, the degree marginal
//! `u_d`, the moments of the degree-increment sums `S_w`, the local-CLT
//! profile and the `(S_W, W)` representation.
//!
//! When `alpha = 0` the closed forms and power-law asymptotics are not
//! defined and return [`Error::Domain`](crate::Error::Domain); the
//! recurrences remain available.

mod degrees;
mod moments;
mod representation;
mod table;
mod weights;

pub use degrees::{
    degree_marginal_from_table, theoretical_degree_marginals, u_d, u_d_asymptotic, DegreeMarginal,
    DEFAULT_EPS,
};
pub use moments::{
    clt_approx_xdw, local_clt_error, sw_moments, sw_moments_series, xi_law, SwMoments,
};
pub use representation::{representation_joint, sample_representation, RepresentationSample};
pub use table::{xdw_table, LimitTable};
pub use weights::{
    weight_constant, weight_integral_tail, weight_tail_mass, xw_asymptotic, xw_closed_form,
    xw_recurrence,
};

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
