//! Relativistic path-integral kernels of the free particle, Klein-Gordon
//! checks and wave-packet propagation.

mod kernel;
mod kg;
mod packet;

pub use kernel::{
    compose_slices, composition_quadrature_spec, kernel_closed_form, kernel_free,
    kernel_quadrature_spec, kernel_sigma_free, kernel_sigma_slice, kernel_sigma_time_slice,
    kernel_table, rest_energy_phase, write_kernel_csv, KernelComparison, KernelValue,
    Normalization, SeparationKind, SigmaTag, SpacetimeSeparation,
};
pub use kg::{
    kg_residual, sample_kernel_grid, short_time_step, KgResidual, ShortTimeStep, LIGHT_CONE_MARGIN,
};
pub use packet::{
    calibrate_norm, propagate_wavepacket, propagate_wavepacket_jet, NormCalibration, PacketSpec,
    PropagatedSample, TargetPoint,
};
