pub mod augment;
pub mod sample;
pub mod sdf;
pub mod stats;
pub mod verify;

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
}
