//! Forward/backward kernels for the layer primitives.
//!
//! These operate on flat row-major buffers; shape validation lives in
//! [`super::tape`]. Parallel loops only ever split across independent
//! output slots and every per-slot reduction runs in a fixed sequential
//! order, so results are identical for any worker count.

use super::Scalar;
use rayon::prelude::*;

/// Work threshold below which an op runs serially.
const PAR_THRESHOLD: usize = 1 << 17;

/// Zero-pad a C×H×W buffer by `pad` on each spatial border.
pub fn pad_zero<T: Scalar>(input: &[T], c: usize, h: usize, w: usize, pad: usize) -> Vec<T> {
    if pad == 0 {
        return input.to_vec();
    }
    let hp = h + 2 * pad;
    let wp = w + 2 * pad;
    let mut out = vec![T::zero(); c * hp * wp];
    for ci in 0..c {
        for y in 0..h {
            let src = &input[(ci * h + y) * w..][..w];
            let dst = &mut out[(ci * hp + y + pad) * wp + pad..][..w];
            dst.copy_from_slice(src);
        }
    }
    out
}

/// Crop the spatial border added by [`pad_zero`].
fn crop_pad<T: Scalar>(padded: &[T], c: usize, h: usize, w: usize, pad: usize) -> Vec<T> {
    if pad == 0 {
        return padded.to_vec();
    }
    let hp = h + 2 * pad;
    let wp = w + 2 * pad;
    let mut out = vec![T::zero(); c * h * w];
    for ci in 0..c {
        for y in 0..h {
            let src = &padded[(ci * hp + y + pad) * wp + pad..][..w];
            out[(ci * h + y) * w..][..w].copy_from_slice(src);
        }
    }
    out
}

/// Dot product with four independent accumulators. Fixed evaluation order.
#[inline]
fn dot4<T: Scalar>(a: &[T], b: &[T]) -> T {
    let n = a.len();
    debug_assert_eq!(n, b.len());
    let (mut s0, mut s1, mut s2, mut s3) = (T::zero(), T::zero(), T::zero(), T::zero());
    let mut i = 0;
    while i + 4 <= n {
        s0 = s0 + a[i] * b[i];
        s1 = s1 + a[i + 1] * b[i + 1];
        s2 = s2 + a[i + 2] * b[i + 2];
        s3 = s3 + a[i + 3] * b[i + 3];
        i += 4;
    }
    let mut s = (s0 + s1) + (s2 + s3);
    while i < n {
        s = s + a[i] * b[i];
        i += 1;
    }
    s
}

pub struct ConvDims {
    pub c_in: usize,
    pub h: usize,
    pub w: usize,
    pub c_out: usize,
    pub k: usize,
    pub stride: usize,
    pub padding: usize,
    pub h_out: usize,
    pub w_out: usize,
}

impl ConvDims {
    pub fn new(
        c_in: usize,
        h: usize,
        w: usize,
        c_out: usize,
        k: usize,
        stride: usize,
        padding: usize,
    ) -> Self {
        let h_out = (h + 2 * padding - k) / stride + 1;
        let w_out = (w + 2 * padding - k) / stride + 1;
        ConvDims {
            c_in,
            h,
            w,
            c_out,
            k,
            stride,
            padding,
            h_out,
            w_out,
        }
    }
}

/// Cross-correlation plus bias: one output channel per kernel.
pub fn conv2d_forward<T: Scalar>(input: &[T], kernels: &[T], bias: &[T], d: &ConvDims) -> Vec<T> {
    let hp = d.h + 2 * d.padding;
    let wp = d.w + 2 * d.padding;
    let padded = pad_zero(input, d.c_in, d.h, d.w, d.padding);
    let plane = d.h_out * d.w_out;
    let mut out = vec![T::zero(); d.c_out * plane];

    let work = d.c_out * plane * d.c_in * d.k * d.k;
    let body = |(co, out_ch): (usize, &mut [T])| {
        out_ch.fill(bias[co]);
        for ci in 0..d.c_in {
            for ky in 0..d.k {
                for kx in 0..d.k {
                    let wgt = kernels[((co * d.c_in + ci) * d.k + ky) * d.k + kx];
                    for oy in 0..d.h_out {
                        let iy = oy * d.stride + ky;
                        let in_row = &padded[(ci * hp + iy) * wp..][..wp];
                        let out_row = &mut out_ch[oy * d.w_out..][..d.w_out];
                        if d.stride == 1 {
                            let in_win = &in_row[kx..kx + d.w_out];
                            for (o, &v) in out_row.iter_mut().zip(in_win) {
                                *o = *o + wgt * v;
                            }
                        } else {
                            for (ox, o) in out_row.iter_mut().enumerate() {
                                *o = *o + wgt * in_row[ox * d.stride + kx];
                            }
                        }
                    }
                }
            }
        }
    };
    if work > PAR_THRESHOLD {
        out.par_chunks_mut(plane).enumerate().for_each(body);
    } else {
        out.chunks_mut(plane).enumerate().for_each(body);
    }
    out
}

/// Gradients for input, kernels and bias of [`conv2d_forward`].
pub fn conv2d_backward<T: Scalar>(
    input: &[T],
    kernels: &[T],
    grad_out: &[T],
    d: &ConvDims,
) -> (Vec<T>, Vec<T>, Vec<T>) {
    let hp = d.h + 2 * d.padding;
    let wp = d.w + 2 * d.padding;
    let padded = pad_zero(input, d.c_in, d.h, d.w, d.padding);
    let plane = d.h_out * d.w_out;
    let work = d.c_out * plane * d.c_in * d.k * d.k;
    let parallel = work > PAR_THRESHOLD;

    // d input: scatter grad through the kernels, one task per input channel.
    let mut d_padded = vec![T::zero(); d.c_in * hp * wp];
    let scatter = |(ci, dch): (usize, &mut [T])| {
        for co in 0..d.c_out {
            for ky in 0..d.k {
                for kx in 0..d.k {
                    let wgt = kernels[((co * d.c_in + ci) * d.k + ky) * d.k + kx];
                    for oy in 0..d.h_out {
                        let iy = oy * d.stride + ky;
                        let drow = &mut dch[iy * wp..][..wp];
                        let grow = &grad_out[(co * d.h_out + oy) * d.w_out..][..d.w_out];
                        if d.stride == 1 {
                            let dwin = &mut drow[kx..kx + d.w_out];
                            for (dv, &g) in dwin.iter_mut().zip(grow) {
                                *dv = *dv + wgt * g;
                            }
                        } else {
                            for (ox, &g) in grow.iter().enumerate() {
                                let ix = ox * d.stride + kx;
                                drow[ix] = drow[ix] + wgt * g;
                            }
                        }
                    }
                }
            }
        }
    };
    if parallel {
        d_padded
            .par_chunks_mut(hp * wp)
            .enumerate()
            .for_each(scatter);
    } else {
        d_padded.chunks_mut(hp * wp).enumerate().for_each(scatter);
    }
    let d_input = crop_pad(&d_padded, d.c_in, d.h, d.w, d.padding);

    // d kernels and d bias, one task per output channel.
    let mut d_kernels = vec![T::zero(); d.c_out * d.c_in * d.k * d.k];
    let mut d_bias = vec![T::zero(); d.c_out];
    let kplane = d.c_in * d.k * d.k;
    let kernel_grads = |(co, (dk_ch, db)): (usize, (&mut [T], &mut T))| {
        let gch = &grad_out[co * plane..][..plane];
        let mut bsum = T::zero();
        for &g in gch {
            bsum = bsum + g;
        }
        *db = bsum;
        for ci in 0..d.c_in {
            for ky in 0..d.k {
                for kx in 0..d.k {
                    let mut acc = T::zero();
                    for oy in 0..d.h_out {
                        let iy = oy * d.stride + ky;
                        let grow = &gch[oy * d.w_out..][..d.w_out];
                        let in_row = &padded[(ci * hp + iy) * wp..][..wp];
                        if d.stride == 1 {
                            acc = acc + dot4(grow, &in_row[kx..kx + d.w_out]);
                        } else {
                            for (ox, &g) in grow.iter().enumerate() {
                                acc = acc + g * in_row[ox * d.stride + kx];
                            }
                        }
                    }
                    dk_ch[(ci * d.k + ky) * d.k + kx] = acc;
                }
            }
        }
    };
    if parallel {
        d_kernels
            .par_chunks_mut(kplane)
            .zip(d_bias.par_iter_mut())
            .enumerate()
            .for_each(|(co, pair)| kernel_grads((co, pair)));
    } else {
        d_kernels
            .chunks_mut(kplane)
            .zip(d_bias.iter_mut())
            .enumerate()
            .for_each(kernel_grads);
    }

    (d_input, d_kernels, d_bias)
}

/// Max pooling; returns output values and the flat input index of each
/// window maximum (first occurrence in row-major order).
pub fn maxpool_forward<T: Scalar>(
    input: &[T],
    c: usize,
    h: usize,
    w: usize,
    window: usize,
    stride: usize,
) -> (Vec<T>, Vec<u32>, usize, usize) {
    let h_out = (h - window) / stride + 1;
    let w_out = (w - window) / stride + 1;
    let mut out = vec![T::zero(); c * h_out * w_out];
    let mut argmax = vec![0u32; c * h_out * w_out];
    for ci in 0..c {
        for oy in 0..h_out {
            for ox in 0..w_out {
                let mut best = T::neg_infinity();
                let mut best_idx = 0u32;
                for wy in 0..window {
                    let iy = oy * stride + wy;
                    for wx in 0..window {
                        let ix = ox * stride + wx;
                        let idx = (ci * h + iy) * w + ix;
                        let v = input[idx];
                        if v > best {
                            best = v;
                            best_idx = idx as u32;
                        }
                    }
                }
                let o = (ci * h_out + oy) * w_out + ox;
                out[o] = best;
                argmax[o] = best_idx;
            }
        }
    }
    (out, argmax, h_out, w_out)
}

/// Route gradient to each window's recorded argmax.
pub fn maxpool_backward<T: Scalar>(grad_out: &[T], argmax: &[u32], input_len: usize) -> Vec<T> {
    let mut d_input = vec![T::zero(); input_len];
    for (&g, &idx) in grad_out.iter().zip(argmax) {
        let i = idx as usize;
        d_input[i] = d_input[i] + g;
    }
    d_input
}

/// Corner-aligned source coordinate mapping for integer-factor upsampling.
/// Returns `(low index, high index, high weight)` per output index.
fn bilinear_axis(n_in: usize, n_out: usize) -> Vec<(usize, usize, f64)> {
    (0..n_out)
        .map(|o| {
            if n_in == 1 || n_out == 1 {
                return (0, 0, 0.0);
            }
            let s = o as f64 * (n_in - 1) as f64 / (n_out - 1) as f64;
            let lo = (s.floor() as usize).min(n_in - 1);
            let hi = (lo + 1).min(n_in - 1);
            (lo, hi, s - lo as f64)
        })
        .collect()
}

/// Fixed bilinear interpolation with corner-aligned sampling.
pub fn upsample_forward<T: Scalar>(
    input: &[T],
    c: usize,
    h: usize,
    w: usize,
    factor: usize,
) -> Vec<T> {
    let h_out = h * factor;
    let w_out = w * factor;
    let ys = bilinear_axis(h, h_out);
    let xs = bilinear_axis(w, w_out);
    let mut out = vec![T::zero(); c * h_out * w_out];
    for ci in 0..c {
        let in_ch = &input[ci * h * w..][..h * w];
        let out_ch = &mut out[ci * h_out * w_out..][..h_out * w_out];
        for (oy, &(y0, y1, wy)) in ys.iter().enumerate() {
            let r0 = &in_ch[y0 * w..][..w];
            let r1 = &in_ch[y1 * w..][..w];
            let wy1 = T::from_f64(wy);
            let wy0 = T::from_f64(1.0 - wy);
            let out_row = &mut out_ch[oy * w_out..][..w_out];
            for (ox, &(x0, x1, wx)) in xs.iter().enumerate() {
                let wx1 = T::from_f64(wx);
                let wx0 = T::from_f64(1.0 - wx);
                out_row[ox] =
                    wy0 * (wx0 * r0[x0] + wx1 * r0[x1]) + wy1 * (wx0 * r1[x0] + wx1 * r1[x1]);
            }
        }
    }
    out
}

/// Transpose of the interpolation: scatter each output gradient back with
/// the same four weights.
pub fn upsample_backward<T: Scalar>(
    grad_out: &[T],
    c: usize,
    h: usize,
    w: usize,
    factor: usize,
) -> Vec<T> {
    let h_out = h * factor;
    let w_out = w * factor;
    let ys = bilinear_axis(h, h_out);
    let xs = bilinear_axis(w, w_out);
    let mut d_input = vec![T::zero(); c * h * w];
    for ci in 0..c {
        let g_ch = &grad_out[ci * h_out * w_out..][..h_out * w_out];
        let d_ch = &mut d_input[ci * h * w..][..h * w];
        for (oy, &(y0, y1, wy)) in ys.iter().enumerate() {
            let wy1 = T::from_f64(wy);
            let wy0 = T::from_f64(1.0 - wy);
            let g_row = &g_ch[oy * w_out..][..w_out];
            for (ox, &(x0, x1, wx)) in xs.iter().enumerate() {
                let wx1 = T::from_f64(wx);
                let wx0 = T::from_f64(1.0 - wx);
                let g = g_row[ox];
                d_ch[y0 * w + x0] = d_ch[y0 * w + x0] + wy0 * wx0 * g;
                d_ch[y0 * w + x1] = d_ch[y0 * w + x1] + wy0 * wx1 * g;
                d_ch[y1 * w + x0] = d_ch[y1 * w + x0] + wy1 * wx0 * g;
                d_ch[y1 * w + x1] = d_ch[y1 * w + x1] + wy1 * wx1 * g;
            }
        }
    }
    d_input
}

/// Per-pixel softmax over channels with max-subtraction, computed in f64.
pub fn softmax_forward<T: Scalar>(input: &[T], c: usize, plane: usize) -> Vec<T> {
    let mut out = vec![T::zero(); c * plane];
    let mut exps = vec![0.0f64; c];
    for p in 0..plane {
        let mut m = f64::NEG_INFINITY;
        for ch in 0..c {
            m = m.max(input[ch * plane + p].as_f64());
        }
        let mut total = 0.0;
        for ch in 0..c {
            let e = (input[ch * plane + p].as_f64() - m).exp();
            exps[ch] = e;
            total += e;
        }
        for ch in 0..c {
            out[ch * plane + p] = T::from_f64(exps[ch] / total);
        }
    }
    out
}

/// Softmax Jacobian-vector product: `dx_c = y_c (g_c - sum_j g_j y_j)`.
pub fn softmax_backward<T: Scalar>(output: &[T], grad_out: &[T], c: usize, plane: usize) -> Vec<T> {
    let mut d_input = vec![T::zero(); c * plane];
    for p in 0..plane {
        let mut dot = 0.0f64;
        for ch in 0..c {
            dot += grad_out[ch * plane + p].as_f64() * output[ch * plane + p].as_f64();
        }
        for ch in 0..c {
            let y = output[ch * plane + p].as_f64();
            let g = grad_out[ch * plane + p].as_f64();
            d_input[ch * plane + p] = T::from_f64(y * (g - dot));
        }
    }
    d_input
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot4_matches_naive() {
        let a: Vec<f64> = (0..13).map(|i| i as f64 * 0.5).collect();
        let b: Vec<f64> = (0..13).map(|i| (13 - i) as f64).collect();
        let naive: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        assert!((dot4(&a, &b) - naive).abs() < 1e-12);
    }

    #[test]
    fn pad_and_crop_roundtrip() {
        let input: Vec<f64> = (0..2 * 3 * 4).map(|i| i as f64).collect();
        let padded = pad_zero(&input, 2, 3, 4, 2);
        assert_eq!(padded.len(), 2 * 7 * 8);
        let back = crop_pad(&padded, 2, 3, 4, 2);
        assert_eq!(back, input);
    }

    #[test]
    fn bilinear_axis_corner_aligned() {
        let m = bilinear_axis(2, 4);
        let coords: Vec<f64> = m.iter().map(|&(lo, _, f)| lo as f64 + f).collect();
        assert_eq!(coords, vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]);
    }
}
