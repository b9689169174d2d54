//! Non-signaling boxes, exact linear-programming certificates for the
//! secrecy of XOR-compressed keys, and a simulator for key agreement that
//! is secure against non-signaling eavesdroppers.
//!
//! Boxes are stored as flat probability vectors; see [`boxcore::layout`]
//! for the ordering.

pub mod boxcore;
pub mod error;
pub mod lpcert;
pub mod partition;
pub mod protocol;
pub mod scalar;

pub use boxcore::{AnyBox, ConditionalBox};
pub use error::{Error, Result};
pub use lpcert::{DualCertificate, LinearProgram};
pub use partition::{AttackReport, BoxPartition, KeyMap, PartitionElement};
pub use protocol::{ProtocolConfig, Transcript};
pub use scalar::{Arithmetic, Prob, Rational};
