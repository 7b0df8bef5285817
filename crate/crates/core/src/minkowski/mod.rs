//! Four-vectors under `η = diag(-1, +1, +1, +1)`, Lorentz boosts and the
//! canonical-map verifier.

pub mod boost;
pub mod canonical;
pub mod four_vector;

pub use boost::{
    boost_coordinates, boost_generating_function, boost_generating_gradients,
    boost_momentum_energy, boost_potentials, hamiltonian_boost_rule, inverse_boost_coordinates,
    inverse_boost_momentum_energy, inverse_boost_potentials, BoostParams, GeneratingGradients,
};
pub use canonical::{verify_extended_canonical, CanonicalMap, CanonicalReport};
pub use four_vector::{minkowski_dot, FourVector, Metric};
