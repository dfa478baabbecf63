//! Dense array arithmetic with reverse-mode differentiation.
//!
//! [`Tensor`] is the universal carrier for images, feature maps and
//! parameters: a shape, a flat row-major value buffer and an optional
//! gradient buffer of the same length. Layout is channels-first (`C×H×W`)
//! for image-like data.
//!
//! Differentiable computation runs on a [`tape::Tape`]: each operation
//! appends a node holding its output tensor plus whatever context its
//! backward rule needs, and [`tape::Tape::backward`] fills the gradient
//! slots in reverse topological order.

pub mod ops;
pub mod tape;

use crate::error::{Error, Result};
use num_traits::Float;
use std::fmt::{Debug, Display};

/// Element type of the engine: `f32` for regular compute and storage,
/// `f64` for gradient checks.
pub trait Scalar: Float + Send + Sync + Debug + Display + 'static {
    fn from_f64(v: f64) -> Self;
    fn as_f64(self) -> f64;
    /// Round through `f32`, the storage precision of checkpoints.
    fn round_storage(self) -> Self;
}

impl Scalar for f32 {
    fn from_f64(v: f64) -> Self {
        v as f32
    }
    fn as_f64(self) -> f64 {
        self as f64
    }
    fn round_storage(self) -> Self {
        self
    }
}

impl Scalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn as_f64(self) -> f64 {
        self
    }
    fn round_storage(self) -> Self {
        self as f32 as f64
    }
}

/// Dense multi-dimensional value array with an optional gradient slot.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<T> {
    shape: Vec<usize>,
    values: Vec<T>,
    grad: Option<Vec<T>>,
}

impl<T: Scalar> Tensor<T> {
    /// Build a tensor, checking that `product(shape) == values.len()`.
    pub fn new(shape: impl Into<Vec<usize>>, values: Vec<T>) -> Result<Self> {
        let shape = shape.into();
        if shape.iter().any(|&d| d == 0) {
            return Err(Error::shape(format!(
                "tensor: zero dimension in shape {shape:?}"
            )));
        }
        let numel: usize = shape.iter().product();
        if numel != values.len() {
            return Err(Error::shape(format!(
                "tensor: shape {shape:?} implies {numel} values, got {}",
                values.len()
            )));
        }
        Ok(Tensor {
            shape,
            values,
            grad: None,
        })
    }

    pub fn zeros(shape: impl Into<Vec<usize>>) -> Self {
        let shape = shape.into();
        let numel: usize = shape.iter().product();
        Tensor {
            shape,
            values: vec![T::zero(); numel],
            grad: None,
        }
    }

    pub fn full(shape: impl Into<Vec<usize>>, value: T) -> Self {
        let shape = shape.into();
        let numel: usize = shape.iter().product();
        Tensor {
            shape,
            values: vec![value; numel],
            grad: None,
        }
    }

    pub fn scalar(value: T) -> Self {
        Tensor {
            shape: vec![1],
            values: vec![value],
            grad: None,
        }
    }

    pub fn from_f64_slice(shape: impl Into<Vec<usize>>, values: &[f64]) -> Result<Self> {
        Self::new(shape, values.iter().map(|&v| T::from_f64(v)).collect())
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn grad(&self) -> Option<&[T]> {
        self.grad.as_deref()
    }

    pub fn set_grad(&mut self, grad: Vec<T>) -> Result<()> {
        if grad.len() != self.values.len() {
            return Err(Error::shape(format!(
                "tensor: grad length {} != value length {}",
                grad.len(),
                self.values.len()
            )));
        }
        self.grad = Some(grad);
        Ok(())
    }

    pub fn clear_grad(&mut self) {
        self.grad = None;
    }

    /// Interpret as `C×H×W`; errors on any other rank.
    pub fn dims3(&self) -> Result<(usize, usize, usize)> {
        match self.shape.as_slice() {
            &[c, h, w] => Ok((c, h, w)),
            other => Err(Error::shape(format!(
                "tensor: expected rank-3 C×H×W shape, got {other:?}"
            ))),
        }
    }

    /// True when the tensor holds a single value.
    pub fn is_scalar(&self) -> bool {
        self.values.len() == 1
    }

    /// Convert the value buffer to `f64` (lossless from `f32`).
    pub fn to_f64(&self) -> Tensor<f64> {
        Tensor {
            shape: self.shape.clone(),
            values: self.values.iter().map(|v| v.as_f64()).collect(),
            grad: None,
        }
    }

    /// Convert from an `f64` tensor into this element type.
    pub fn from_f64_tensor(src: &Tensor<f64>) -> Self {
        Tensor {
            shape: src.shape.clone(),
            values: src.values.iter().map(|&v| T::from_f64(v)).collect(),
            grad: None,
        }
    }

    /// Round every value through `f32`, the checkpoint storage precision.
    pub fn round_storage(&mut self) {
        for v in &mut self.values {
            *v = v.round_storage();
        }
    }

    /// Maximum absolute difference to another tensor of the same shape.
    pub fn max_abs_diff(&self, other: &Tensor<T>) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| (a.as_f64() - b.as_f64()).abs())
            .fold(0.0, f64::max)
    }
}

/// Binary segmentation mask: `data[y*width + x]` is 0 (background) or 1 (lane).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl Mask {
    pub fn zeros(width: usize, height: usize) -> Self {
        Mask {
            width,
            height,
            data: vec![0; width * height],
        }
    }

    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::shape(format!(
                "mask: {width}x{height} needs {} values, got {}",
                width * height,
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|&&v| v > 1) {
            return Err(Error::data(format!(
                "mask: values must be 0 or 1, found {v}"
            )));
        }
        Ok(Mask {
            width,
            height,
            data,
        })
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.data[y * self.width + x] = v;
    }

    /// Number of lane (value 1) pixels.
    pub fn lane_pixels(&self) -> u64 {
        self.data.iter().map(|&v| v as u64).sum()
    }

    pub fn background_pixels(&self) -> u64 {
        self.data.len() as u64 - self.lane_pixels()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_checks_shape_product() {
        assert!(Tensor::<f64>::new(vec![2, 3], vec![0.0; 6]).is_ok());
        assert!(Tensor::<f64>::new(vec![2, 3], vec![0.0; 5]).is_err());
        assert!(Tensor::<f64>::new(vec![2, 0], vec![]).is_err());
    }

    #[test]
    fn grad_length_is_enforced() {
        let mut t = Tensor::<f64>::zeros(vec![2, 2]);
        assert!(t.set_grad(vec![1.0; 4]).is_ok());
        assert!(t.set_grad(vec![1.0; 3]).is_err());
    }

    #[test]
    fn storage_rounding_pins_f64_to_f32_grid() {
        let mut t = Tensor::<f64>::new(vec![1], vec![0.1f64]).unwrap();
        t.round_storage();
        assert_eq!(t.values()[0], 0.1f32 as f64);
    }

    #[test]
    fn mask_rejects_non_binary() {
        assert!(Mask::new(2, 1, vec![0, 2]).is_err());
        assert!(Mask::new(2, 1, vec![0, 1]).is_ok());
    }
}
