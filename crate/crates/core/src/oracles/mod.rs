//! Independent numerical checks for the analytic formulas.

pub mod boxcount;
pub mod gasket;
pub mod lp;
pub mod montecarlo;
pub mod quadrature;
pub mod sampling;

pub use boxcount::{calibrated_box_count, dyadic_scales, grid_box_count, orbit_cloud, sierpinski_cloud, BoxCountReport};
pub use gasket::mc_gasket_neighborhood;
pub use montecarlo::{chebyshev_center, mc_inner_volume, McEstimate, Region};
pub use quadrature::{bernoulli_quadrature, integrate, quadrature_laplace, Quadrature};
