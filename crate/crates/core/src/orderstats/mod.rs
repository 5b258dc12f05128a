//! Order statistics of i.i.d. samples: densities, conditional survival
//! functions and the numerical tools behind them.

mod beta;
mod conditional;
mod density;
mod model;
pub mod quadrature;

pub use beta::{ln_beta, ln_gamma, reg_inc_beta};
pub use conditional::{
    cis_check, cis_cond_survival, gap_survival_closed, gap_survival_quadrature, prd_check,
    spacing_check, spacing_cond_survival, SpacingContext,
};
pub use density::{
    discretize_first_k_density, discretize_pair_density, first_k_density, m_coeff, pair_density,
    plrd_certificate, plrd_margin, plrd_margin_direct, OrderStatContext,
};
pub use model::DistributionModel;
