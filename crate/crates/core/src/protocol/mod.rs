//! Simulation of device-independent key agreement over noisy boxes.

pub mod estimate;
pub mod gf2;
pub mod keyrate;
pub mod run;
pub mod sampling;

pub use estimate::{estimate_parameters, Estimates};
pub use gf2::{decode, privacy_amplify, reconcile, syndrome, BitMatrix};
pub use keyrate::{
    curve_csv, epsilon_max, key_distance_bound, key_rate, key_rate_report, quantum_curve,
    region_csv, region_table, sampling_bound, CurvePoint, KeyRateReport, IDEAL_ANGLES,
};
pub use run::{run_protocol, run_protocol_with, KeyLength, ProtocolConfig, Source, Transcript};
pub use sampling::{sample_rounds, Round, Sampler};
