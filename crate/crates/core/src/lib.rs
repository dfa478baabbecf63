//! Wavelet-enhanced semantic-segmentation toolkit.
//!
//! Implements a symmetric fully convolutional segmentation network whose
//! encoder is fed multi-level discrete wavelet sub-bands of the input,
//! trained with a cost-sensitive cross-entropy loss, plus the supporting
//! machinery: a reverse-mode tensor engine, sliding-window patch pipeline,
//! pixel metrics, and a procedural aerial-scene generator.

pub mod error;
pub mod metrics;
pub mod pipeline;
pub mod seed;
pub mod synthgen;
pub mod tensor;
pub mod wavelet;

pub use error::{Error, Result};
pub use tensor::tape::{NodeId, Tape};
pub use tensor::{Mask, Scalar, Tensor};
