//! Reverse-mode differentiation tape.
//!
//! Operations append nodes in execution order, which is already a
//! topological order, so [`Tape::backward`] is a single reverse sweep.
//! Each node stores its output tensor (the gradient slot lives there)
//! plus the context its backward rule needs: pooling argmax indices,
//! dropout multipliers, saved softmax outputs.

use super::ops::{self, ConvDims};
use super::{Mask, Scalar, Tensor};
use crate::error::{Error, Result};
use crate::seed;

pub type NodeId = usize;

enum Op {
    Leaf,
    Conv2d {
        input: NodeId,
        kernels: NodeId,
        bias: NodeId,
        dims: ConvDims,
    },
    MaxPool2d {
        input: NodeId,
        argmax: Vec<u32>,
    },
    UpsampleBilinear {
        input: NodeId,
        factor: usize,
    },
    Relu {
        input: NodeId,
    },
    Dropout {
        input: NodeId,
        multipliers: Vec<bool>,
        scale: f64,
    },
    ConcatChannels {
        inputs: Vec<NodeId>,
    },
    Add {
        a: NodeId,
        b: NodeId,
    },
    SoftmaxChannels {
        input: NodeId,
    },
    Sum {
        input: NodeId,
    },
    /// Cost-sensitive cross-entropy on softmax probabilities. `class_weights`
    /// is indexed by true class; binary exposes `[1, lambda_lane]`.
    WceLoss {
        probs: NodeId,
        labels: Vec<u8>,
        class_weights: [f64; 2],
        epsilon: f64,
    },
}

struct Node<T> {
    output: Tensor<T>,
    op: Op,
}

/// Append-only computation graph.
pub struct Tape<T> {
    nodes: Vec<Node<T>>,
}

impl<T: Scalar> Default for Tape<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> Tape<T> {
    pub fn new() -> Self {
        Tape { nodes: Vec::new() }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn value(&self, id: NodeId) -> &Tensor<T> {
        &self.nodes[id].output
    }

    pub fn grad(&self, id: NodeId) -> Option<&[T]> {
        self.nodes[id].output.grad()
    }

    fn push(&mut self, output: Tensor<T>, op: Op) -> NodeId {
        self.nodes.push(Node { output, op });
        self.nodes.len() - 1
    }

    /// Register an input or parameter tensor.
    pub fn leaf(&mut self, tensor: Tensor<T>) -> NodeId {
        self.push(tensor, Op::Leaf)
    }

    /// 2D cross-correlation with bias: kernels `C_out×C_in×k×k`, zero padding.
    pub fn conv2d(
        &mut self,
        input: NodeId,
        kernels: NodeId,
        bias: NodeId,
        stride: usize,
        padding: usize,
    ) -> Result<NodeId> {
        let (c_in, h, w) = self.value(input).dims3()?;
        let kshape = self.value(kernels).shape();
        let (c_out, kc_in, k) = match kshape {
            &[co, ci, kh, kw] if kh == kw => (co, ci, kh),
            other => {
                return Err(Error::shape(format!(
                    "tensor: conv2d: kernels must be C_out×C_in×k×k with square k, got {other:?}"
                )))
            }
        };
        if kc_in != c_in {
            return Err(Error::shape(format!(
                "tensor: conv2d: kernel C_in {kc_in} does not match input C_in {c_in}"
            )));
        }
        if self.value(bias).shape() != [c_out] {
            return Err(Error::shape(format!(
                "tensor: conv2d: bias shape {:?} does not match C_out {c_out}",
                self.value(bias).shape()
            )));
        }
        if stride == 0 {
            return Err(Error::shape("tensor: conv2d: stride must be positive"));
        }
        if k > h + 2 * padding || k > w + 2 * padding {
            return Err(Error::shape(format!(
                "tensor: conv2d: kernel size {k} exceeds padded input {}x{}",
                h + 2 * padding,
                w + 2 * padding
            )));
        }
        let dims = ConvDims::new(c_in, h, w, c_out, k, stride, padding);
        let out = ops::conv2d_forward(
            self.value(input).values(),
            self.value(kernels).values(),
            self.value(bias).values(),
            &dims,
        );
        let tensor = Tensor::new(vec![c_out, dims.h_out, dims.w_out], out)?;
        Ok(self.push(
            tensor,
            Op::Conv2d {
                input,
                kernels,
                bias,
                dims,
            },
        ))
    }

    /// Max pooling; gradient routes to the first row-major argmax per window.
    pub fn maxpool2d(&mut self, input: NodeId, window: usize, stride: usize) -> Result<NodeId> {
        let (c, h, w) = self.value(input).dims3()?;
        if window == 0 || stride == 0 {
            return Err(Error::shape(
                "tensor: maxpool2d: window and stride must be positive",
            ));
        }
        if window > h || window > w {
            return Err(Error::shape(format!(
                "tensor: maxpool2d: window {window} exceeds input {h}x{w}"
            )));
        }
        let (out, argmax, h_out, w_out) =
            ops::maxpool_forward(self.value(input).values(), c, h, w, window, stride);
        let tensor = Tensor::new(vec![c, h_out, w_out], out)?;
        Ok(self.push(tensor, Op::MaxPool2d { input, argmax }))
    }

    /// Fixed (non-learned) bilinear upsampling by an integer factor,
    /// corner-aligned so endpoints map to endpoints.
    pub fn upsample_bilinear(&mut self, input: NodeId, factor: usize) -> Result<NodeId> {
        let (c, h, w) = self.value(input).dims3()?;
        if factor == 0 {
            return Err(Error::shape(
                "tensor: upsample_bilinear: factor must be positive",
            ));
        }
        if factor == 1 {
            let tensor = self.value(input).clone();
            return Ok(self.push(tensor, Op::UpsampleBilinear { input, factor }));
        }
        let out = ops::upsample_forward(self.value(input).values(), c, h, w, factor);
        let tensor = Tensor::new(vec![c, h * factor, w * factor], out)?;
        Ok(self.push(tensor, Op::UpsampleBilinear { input, factor }))
    }

    pub fn relu(&mut self, input: NodeId) -> NodeId {
        let src = self.value(input);
        let out: Vec<T> = src
            .values()
            .iter()
            .map(|&v| if v > T::zero() { v } else { T::zero() })
            .collect();
        let tensor = Tensor {
            shape: src.shape().to_vec(),
            values: out,
            grad: None,
        };
        self.push(tensor, Op::Relu { input })
    }

    /// Inverted dropout: zeroes with probability `rate` and scales survivors
    /// by `1/(1-rate)`. Identity in inference mode; mask derives from `seed`.
    pub fn dropout(
        &mut self,
        input: NodeId,
        rate: f64,
        training: bool,
        seed_value: u64,
    ) -> Result<NodeId> {
        if !(0.0..1.0).contains(&rate) {
            return Err(Error::config(format!(
                "tensor: dropout: rate must be in [0, 1), got {rate}"
            )));
        }
        if !training || rate == 0.0 {
            return Ok(input);
        }
        let mut rng = seed::stream(seed_value, "dropout-mask", 0);
        let src = self.value(input);
        let keep: Vec<bool> = (0..src.len())
            .map(|_| seed::uniform(&mut rng) >= rate)
            .collect();
        let scale = 1.0 / (1.0 - rate);
        let scale_t = T::from_f64(scale);
        let out: Vec<T> = src
            .values()
            .iter()
            .zip(&keep)
            .map(|(&v, &k)| if k { v * scale_t } else { T::zero() })
            .collect();
        let tensor = Tensor {
            shape: src.shape().to_vec(),
            values: out,
            grad: None,
        };
        Ok(self.push(
            tensor,
            Op::Dropout {
                input,
                multipliers: keep,
                scale,
            },
        ))
    }

    /// Stack inputs along the channel axis in argument order.
    pub fn concat_channels(&mut self, inputs: &[NodeId]) -> Result<NodeId> {
        match inputs {
            [] => Err(Error::shape("tensor: concat_channels: no inputs")),
            &[single] => Ok(single),
            _ => {
                let (_, h0, w0) = self.value(inputs[0]).dims3()?;
                let mut total_c = 0;
                for &id in inputs {
                    let (c, h, w) = self.value(id).dims3()?;
                    if (h, w) != (h0, w0) {
                        return Err(Error::shape(format!(
                            "tensor: concat_channels: spatial mismatch {h}x{w} vs {h0}x{w0}"
                        )));
                    }
                    total_c += c;
                }
                let mut out = Vec::with_capacity(total_c * h0 * w0);
                for &id in inputs {
                    out.extend_from_slice(self.value(id).values());
                }
                let tensor = Tensor::new(vec![total_c, h0, w0], out)?;
                Ok(self.push(
                    tensor,
                    Op::ConcatChannels {
                        inputs: inputs.to_vec(),
                    },
                ))
            }
        }
    }

    /// Elementwise sum of two identically shaped tensors.
    pub fn add(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        if self.value(a).shape() != self.value(b).shape() {
            return Err(Error::shape(format!(
                "tensor: add: shape {:?} vs {:?}",
                self.value(a).shape(),
                self.value(b).shape()
            )));
        }
        let out: Vec<T> = self
            .value(a)
            .values()
            .iter()
            .zip(self.value(b).values())
            .map(|(&x, &y)| x + y)
            .collect();
        let tensor = Tensor {
            shape: self.value(a).shape().to_vec(),
            values: out,
            grad: None,
        };
        Ok(self.push(tensor, Op::Add { a, b }))
    }

    /// Per-pixel softmax over channels, max-subtracted for stability.
    pub fn softmax_channels(&mut self, input: NodeId) -> Result<NodeId> {
        let (c, h, w) = self.value(input).dims3()?;
        if c < 2 {
            return Err(Error::shape(format!(
                "tensor: softmax_channels: need at least 2 channels, got {c}"
            )));
        }
        let out = ops::softmax_forward(self.value(input).values(), c, h * w);
        let tensor = Tensor::new(vec![c, h, w], out)?;
        Ok(self.push(tensor, Op::SoftmaxChannels { input }))
    }

    /// Sum of all elements (f64 accumulation), as a scalar node.
    pub fn sum(&mut self, input: NodeId) -> NodeId {
        let total: f64 = self.value(input).values().iter().map(|v| v.as_f64()).sum();
        self.push(Tensor::scalar(T::from_f64(total)), Op::Sum { input })
    }

    /// Cost-sensitive cross-entropy over softmax probabilities `2×H×W`:
    /// `-(1/N) (w_lane * sum_{y=1} ln p_lane + w_bg * sum_{y=0} ln (1-p_lane))`
    /// with the lane probability clamped to `[eps, 1-eps]`.
    pub fn wce_loss(
        &mut self,
        probs: NodeId,
        labels: &Mask,
        class_weights: [f64; 2],
        epsilon: f64,
    ) -> Result<NodeId> {
        let (c, h, w) = self.value(probs).dims3()?;
        if c != 2 {
            return Err(Error::shape(format!(
                "training: weighted_cross_entropy: expected 2 probability channels, got {c}"
            )));
        }
        if (labels.height, labels.width) != (h, w) {
            return Err(Error::shape(format!(
                "training: weighted_cross_entropy: labels {}x{} vs probs {h}x{w}",
                labels.height, labels.width
            )));
        }
        if labels.data.iter().any(|&v| v > 1) {
            return Err(Error::data(
                "training: weighted_cross_entropy: labels must be 0 or 1",
            ));
        }
        if !(epsilon > 0.0 && epsilon <= 1e-3) {
            return Err(Error::config(format!(
                "training: weighted_cross_entropy: epsilon must be in (0, 1e-3], got {epsilon}"
            )));
        }
        let plane = h * w;
        let values = self.value(probs).values();
        let mut total = 0.0f64;
        for (p, &y) in labels.data.iter().enumerate() {
            let lane = values[plane + p].as_f64().clamp(epsilon, 1.0 - epsilon);
            total += if y == 1 {
                class_weights[1] * lane.ln()
            } else {
                class_weights[0] * (1.0 - lane).ln()
            };
        }
        let loss = -total / plane as f64;
        Ok(self.push(
            Tensor::scalar(T::from_f64(loss)),
            Op::WceLoss {
                probs,
                labels: labels.data.clone(),
                class_weights,
                epsilon,
            },
        ))
    }

    /// Reverse sweep from a scalar root, filling every reachable gradient.
    pub fn backward(&mut self, root: NodeId) -> Result<()> {
        if root >= self.nodes.len() {
            return Err(Error::shape("tensor: backward: unknown root node"));
        }
        if !self.nodes[root].output.is_scalar() {
            return Err(Error::shape(
                "tensor: backward: root must be a scalar node",
            ));
        }
        for node in &mut self.nodes {
            node.output.grad = None;
        }
        self.nodes[root].output.grad = Some(vec![T::one()]);

        for i in (0..=root).rev() {
            let Some(grad) = self.nodes[i].output.grad.take() else {
                continue;
            };
            let contributions = self.input_grads(i, &grad)?;
            self.nodes[i].output.grad = Some(grad);
            for (target, contrib) in contributions {
                let slot = &mut self.nodes[target].output;
                match &mut slot.grad {
                    Some(g) => {
                        for (gi, ci) in g.iter_mut().zip(contrib) {
                            *gi = *gi + ci;
                        }
                    }
                    None => slot.grad = Some(contrib),
                }
            }
        }
        Ok(())
    }

    /// Apply node `i`'s backward rule to `grad`, producing per-input
    /// gradient contributions.
    fn input_grads(&self, i: NodeId, grad: &[T]) -> Result<Vec<(NodeId, Vec<T>)>> {
        let node = &self.nodes[i];
        let out = match &node.op {
            Op::Leaf => Vec::new(),
            Op::Conv2d {
                input,
                kernels,
                bias,
                dims,
            } => {
                let (d_input, d_kernels, d_bias) = ops::conv2d_backward(
                    self.value(*input).values(),
                    self.value(*kernels).values(),
                    grad,
                    dims,
                );
                vec![(*input, d_input), (*kernels, d_kernels), (*bias, d_bias)]
            }
            Op::MaxPool2d { input, argmax } => {
                let d = ops::maxpool_backward(grad, argmax, self.value(*input).len());
                vec![(*input, d)]
            }
            Op::UpsampleBilinear { input, factor } => {
                if *factor == 1 {
                    vec![(*input, grad.to_vec())]
                } else {
                    let (c, h, w) = self.value(*input).dims3()?;
                    let d = ops::upsample_backward(grad, c, h, w, *factor);
                    vec![(*input, d)]
                }
            }
            Op::Relu { input } => {
                let d: Vec<T> = self
                    .value(*input)
                    .values()
                    .iter()
                    .zip(grad)
                    .map(|(&x, &g)| if x > T::zero() { g } else { T::zero() })
                    .collect();
                vec![(*input, d)]
            }
            Op::Dropout {
                input,
                multipliers,
                scale,
            } => {
                let s = T::from_f64(*scale);
                let d: Vec<T> = multipliers
                    .iter()
                    .zip(grad)
                    .map(|(&k, &g)| if k { g * s } else { T::zero() })
                    .collect();
                vec![(*input, d)]
            }
            Op::ConcatChannels { inputs } => {
                let mut offset = 0;
                let mut parts = Vec::with_capacity(inputs.len());
                for &id in inputs {
                    let len = self.value(id).len();
                    parts.push((id, grad[offset..offset + len].to_vec()));
                    offset += len;
                }
                parts
            }
            Op::Add { a, b } => vec![(*a, grad.to_vec()), (*b, grad.to_vec())],
            Op::SoftmaxChannels { input } => {
                let (c, h, w) = node.output.dims3()?;
                let d = ops::softmax_backward(node.output.values(), grad, c, h * w);
                vec![(*input, d)]
            }
            Op::Sum { input } => {
                let g = grad[0];
                vec![(*input, vec![g; self.value(*input).len()])]
            }
            Op::WceLoss {
                probs,
                labels,
                class_weights,
                epsilon,
            } => {
                let g = grad[0].as_f64();
                let plane = labels.len();
                let n = plane as f64;
                let values = self.value(*probs).values();
                let mut d = vec![T::zero(); 2 * plane];
                for (p, &y) in labels.iter().enumerate() {
                    let lane = values[plane + p].as_f64();
                    // Clamp saturates: zero slope outside (eps, 1-eps).
                    if lane <= *epsilon || lane >= 1.0 - epsilon {
                        continue;
                    }
                    let dl = if y == 1 {
                        -class_weights[1] / (n * lane)
                    } else {
                        class_weights[0] / (n * (1.0 - lane))
                    };
                    d[plane + p] = T::from_f64(g * dl);
                }
                vec![(*probs, d)]
            }
        };
        Ok(out)
    }
}
