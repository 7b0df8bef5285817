//! Special functions, ODE integration, damped oscillatory quadrature and
//! finite-difference stencils.

pub mod bessel;
pub mod ode;
pub mod quadrature;
pub mod stencil;

pub use bessel::{
    bessel_j0, bessel_j1, bessel_pair, bessel_y0, bessel_y1, hankel2_0, hankel2_1, BesselPair,
};
pub use ode::{integrate_ode, OdeSolution, OdeSpec, StepStats};
pub use quadrature::{
    adaptive_gk, damped_semiinfinite_quadrature, extrapolated_quadrature, richardson_to_zero,
    DampingProfile, Extrapolated, QuadratureResult, QuadratureSpec,
};
pub use stencil::{central_gradient, finite_diff_dalembert};
