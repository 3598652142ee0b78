//! Quantum refrigerator models: Lindblad generators, steady heat currents,
//! thermodynamic consistency checks and cooling toward absolute zero.
//!
//! Units: ħ = k_B = 1 throughout.

// NaN must fail parameter checks, so validations use negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod absorption;
pub mod bath;
pub mod cooling;
pub mod driven;
pub mod error;
pub mod evolve;
pub mod lgks;
pub mod linalg;
pub mod numerics;
pub mod operator;
pub mod space;
pub mod steady;
pub mod superop;

pub use error::{Error, Result};
pub use operator::{DensityMatrix, Operator};
pub use space::{Factor, HilbertSpace};
pub use steady::{steady_state, SteadyState};
pub use superop::{liouvillian_matrix, Channel, Superoperator};
pub use evolve::{evolve, Propagation};
pub use lgks::{ThermalContact, ThermalTerm, LocalGibbsReference};
pub use bath::{BathSpectrum, BosonicBath, GasBath, HeatCapacityModel, Statistics};
pub use absorption::{AbsorptionModel, Medium};
pub use driven::{DrivenModel, DrivenRates};
pub use cooling::{CoolingScenario, CoolingTrajectory, ExponentFit};
