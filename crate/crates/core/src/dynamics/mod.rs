//! Extended and conventional Lagrangians and Hamiltonians of a charged
//! relativistic particle, their equations of motion, and diagnostics.

pub mod action;
pub mod hamiltonian;
pub mod hj;
pub mod lagrangian;
pub mod motion;
pub mod state;

pub use action::classical_action;
pub use hamiltonian::{
    conventional_hamiltonian_em, extended_hamiltonian_em, EmHamiltonian, Hamiltonian,
};
pub use hj::hj_residual;
pub use lagrangian::{
    conventional_lagrangian_em, extended_lagrangian_em, hessian_determinant,
    legendre_roundtrip_check, HessianReport, LegendreReport,
};
pub use motion::{
    constraint_residuals, extended_rhs, integrate_conventional, integrate_extended,
    integrate_extended_off_shell, on_shell_from_momentum, on_shell_from_velocity,
    reparameterize_to_t, sample_at_times, trivial_extended_flow, velocity_constraint_residual,
    ConstraintReport, FlowKind, TimeSample, TimeTrajectory, TrajectoryRecord,
};
pub use state::{ExtendedPhasePoint, ExtendedVelocity, ParticleParams};
