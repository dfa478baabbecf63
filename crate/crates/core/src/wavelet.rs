//! Orthonormal multi-level 2D discrete wavelet transform.
//!
//! Separable filter bank: each level low/high-pass filters the rows
//! (x direction) and then the columns (y direction), downsampling by 2 per
//! axis, yielding Approximate/Horizontal/Vertical/Diagonal sub-bands. The
//! next level recurses on the A band. Filters use the orthonormal `1/sqrt(2)`
//! normalization so energy is conserved exactly.
//!
//! Boundary policy: even-length axes are transformed periodized, which keeps
//! the analysis matrix orthogonal (exact Parseval and perfect
//! reconstruction); odd-length axes are first extended by mirroring the edge
//! sample, so sub-band extents are always `ceil(n/2)`.

use crate::error::{Error, Result};
use crate::tensor::Tensor;

/// Analysis filter pair of a Daubechies family member.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterPair {
    lowpass: Vec<f64>,
    highpass: Vec<f64>,
    order: usize,
}

impl FilterPair {
    pub fn lowpass(&self) -> &[f64] {
        &self.lowpass
    }

    pub fn highpass(&self) -> &[f64] {
        &self.highpass
    }

    /// Family order N; filters have 2N taps.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.lowpass.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// The Haar pair: `g = [1/sqrt2, 1/sqrt2]`, `h = [1/sqrt2, -1/sqrt2]`.
pub fn haar_filters() -> FilterPair {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    FilterPair {
        lowpass: vec![s, s],
        highpass: vec![s, -s],
        order: 1,
    }
}

/// Daubechies filters; order 1 is Haar, order 2 the 4-tap pair.
/// Higher orders are not supported.
pub fn daubechies_filters(order: usize) -> Result<FilterPair> {
    match order {
        1 => Ok(haar_filters()),
        2 => {
            let r3 = 3.0f64.sqrt();
            let s = 4.0 * 2.0f64.sqrt();
            let g = vec![
                (1.0 + r3) / s,
                (3.0 + r3) / s,
                (3.0 - r3) / s,
                (1.0 - r3) / s,
            ];
            // Quadrature mirror: h[i] = (-1)^i g[2N-1-i]
            let h = vec![g[3], -g[2], g[1], -g[0]];
            Ok(FilterPair {
                lowpass: g,
                highpass: h,
                order: 2,
            })
        }
        n => Err(Error::config(format!(
            "wavelet: unsupported Daubechies order {n}; only 1 and 2 are available"
        ))),
    }
}

/// One level of sub-bands, all of identical spatial shape.
#[derive(Clone, Debug)]
pub struct SubBandSet {
    pub a: Tensor<f64>,
    pub h: Tensor<f64>,
    pub v: Tensor<f64>,
    pub d: Tensor<f64>,
}

impl SubBandSet {
    /// Spatial shape shared by all four bands.
    pub fn spatial(&self) -> (usize, usize) {
        let (_, h, w) = self.a.dims3().expect("sub-band is rank 3");
        (h, w)
    }

    pub fn band(&self, which: Component) -> &Tensor<f64> {
        match which {
            Component::A => &self.a,
            Component::H => &self.h,
            Component::V => &self.v,
            Component::D => &self.d,
        }
    }

    /// Total energy across all four bands.
    pub fn energy(&self) -> f64 {
        [&self.a, &self.h, &self.v, &self.d]
            .iter()
            .flat_map(|t| t.values())
            .map(|&v| v * v)
            .sum()
    }
}

/// Sub-band selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    A,
    H,
    V,
    D,
}

impl Component {
    pub const ALL: [Component; 4] = [Component::A, Component::H, Component::V, Component::D];

    pub fn letter(&self) -> char {
        match self {
            Component::A => 'A',
            Component::H => 'H',
            Component::V => 'V',
            Component::D => 'D',
        }
    }

    pub fn from_letter(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'A' => Ok(Component::A),
            'H' => Ok(Component::H),
            'V' => Ok(Component::V),
            'D' => Ok(Component::D),
            other => Err(Error::config(format!(
                "wavelet: unknown sub-band component '{other}' (expected A, H, V or D)"
            ))),
        }
    }
}

/// Sub-band pyramid for levels `1..=L`; level `j+1` transforms level `j`'s
/// A band. Coefficients are fixed inputs, never trained.
#[derive(Clone, Debug)]
pub struct WaveletPyramid {
    pub levels: Vec<SubBandSet>,
    pub source_shape: (usize, usize),
}

impl WaveletPyramid {
    pub fn empty() -> Self {
        WaveletPyramid {
            levels: Vec::new(),
            source_shape: (0, 0),
        }
    }

    pub fn level(&self, j: usize) -> Option<&SubBandSet> {
        if j == 0 {
            return None;
        }
        self.levels.get(j - 1)
    }
}

/// ITU-R BT.601 luma: `0.299 R + 0.587 G + 0.114 B`.
pub fn to_grayscale(image: &Tensor<f64>) -> Result<Tensor<f64>> {
    let (c, h, w) = image.dims3()?;
    if c != 3 {
        return Err(Error::shape(format!(
            "wavelet: to_grayscale: expected 3 channels, got {c}"
        )));
    }
    let plane = h * w;
    let v = image.values();
    let gray: Vec<f64> = (0..plane)
        .map(|p| 0.299 * v[p] + 0.587 * v[plane + p] + 0.114 * v[2 * plane + p])
        .collect();
    Tensor::new(vec![1, h, w], gray)
}

/// Mirror-extend an odd-length signal by duplicating its last sample.
fn even_extended(signal: &[f64]) -> Vec<f64> {
    let mut out = signal.to_vec();
    if out.len() % 2 == 1 {
        out.push(*out.last().expect("non-empty signal"));
    }
    out
}

/// Single-level 1D analysis: periodized filtering and downsampling by 2.
/// Returns `ceil(n/2)` lowpass and highpass coefficients.
pub fn dwt1d(signal: &[f64], filters: &FilterPair) -> Result<(Vec<f64>, Vec<f64>)> {
    if signal.len() < filters.len() {
        return Err(Error::shape(format!(
            "wavelet: dwt1d: signal length {} is smaller than the filter support {}",
            signal.len(),
            filters.len()
        )));
    }
    let x = even_extended(signal);
    let n = x.len();
    let half = n / 2;
    let taps = filters.len();
    let mut lo = vec![0.0; half];
    let mut hi = vec![0.0; half];
    for k in 0..half {
        let mut l = 0.0;
        let mut h = 0.0;
        for i in 0..taps {
            let v = x[(2 * k + i) % n];
            l += filters.lowpass[i] * v;
            h += filters.highpass[i] * v;
        }
        lo[k] = l;
        hi[k] = h;
    }
    Ok((lo, hi))
}

/// Inverse of [`dwt1d`]: transpose of the (orthogonal) periodized analysis,
/// cropped to `target_len`.
pub fn idwt1d(
    lo: &[f64],
    hi: &[f64],
    filters: &FilterPair,
    target_len: usize,
) -> Result<Vec<f64>> {
    if lo.len() != hi.len() {
        return Err(Error::shape(format!(
            "wavelet: idwt1d: lowpass length {} != highpass length {}",
            lo.len(),
            hi.len()
        )));
    }
    if target_len.div_ceil(2) != lo.len() {
        return Err(Error::shape(format!(
            "wavelet: idwt1d: {} coefficients cannot reconstruct length {target_len}",
            lo.len()
        )));
    }
    let n = 2 * lo.len();
    let taps = filters.len();
    let mut x = vec![0.0; n];
    for k in 0..lo.len() {
        for i in 0..taps {
            let pos = (2 * k + i) % n;
            x[pos] += lo[k] * filters.lowpass[i] + hi[k] * filters.highpass[i];
        }
    }
    x.truncate(target_len);
    Ok(x)
}

/// Single 2D level: rows (x direction) first, then columns (y direction).
/// Band pairing by (x filter, y filter): A=gg, H=gh, V=hg, D=hh.
pub fn dwt2d_level(image: &Tensor<f64>, filters: &FilterPair) -> Result<SubBandSet> {
    let (c, h, w) = image.dims3()?;
    if c != 1 {
        return Err(Error::shape(format!(
            "wavelet: dwt2d_level: expected a single-channel image, got {c} channels"
        )));
    }
    if h < filters.len() || w < filters.len() {
        return Err(Error::shape(format!(
            "wavelet: dwt2d_level: image {h}x{w} is smaller than the filter support {}",
            filters.len()
        )));
    }
    let wc = w.div_ceil(2);
    let hc = h.div_ceil(2);
    let v = image.values();

    // Rows pass.
    let mut rows_lo = vec![0.0; h * wc];
    let mut rows_hi = vec![0.0; h * wc];
    for y in 0..h {
        let (lo, hi) = dwt1d(&v[y * w..(y + 1) * w], filters)?;
        rows_lo[y * wc..(y + 1) * wc].copy_from_slice(&lo);
        rows_hi[y * wc..(y + 1) * wc].copy_from_slice(&hi);
    }

    // Columns pass.
    let mut a = vec![0.0; hc * wc];
    let mut hb = vec![0.0; hc * wc];
    let mut vb = vec![0.0; hc * wc];
    let mut d = vec![0.0; hc * wc];
    let mut column = vec![0.0; h];
    for x in 0..wc {
        for y in 0..h {
            column[y] = rows_lo[y * wc + x];
        }
        let (lo, hi) = dwt1d(&column, filters)?;
        for y in 0..hc {
            a[y * wc + x] = lo[y];
            hb[y * wc + x] = hi[y];
        }
        for y in 0..h {
            column[y] = rows_hi[y * wc + x];
        }
        let (lo, hi) = dwt1d(&column, filters)?;
        for y in 0..hc {
            vb[y * wc + x] = lo[y];
            d[y * wc + x] = hi[y];
        }
    }

    Ok(SubBandSet {
        a: Tensor::new(vec![1, hc, wc], a)?,
        h: Tensor::new(vec![1, hc, wc], hb)?,
        v: Tensor::new(vec![1, hc, wc], vb)?,
        d: Tensor::new(vec![1, hc, wc], d)?,
    })
}

/// Inverse 2D level: columns first, then rows, cropped to `target_shape`.
pub fn idwt2d_level(
    bands: &SubBandSet,
    filters: &FilterPair,
    target_shape: (usize, usize),
) -> Result<Tensor<f64>> {
    let (hc, wc) = bands.spatial();
    for (name, t) in [
        ("H", &bands.h),
        ("V", &bands.v),
        ("D", &bands.d),
    ] {
        let (_, bh, bw) = t.dims3()?;
        if (bh, bw) != (hc, wc) {
            return Err(Error::shape(format!(
                "wavelet: idwt2d_level: band {name} is {bh}x{bw}, expected {hc}x{wc}"
            )));
        }
    }
    let (th, tw) = target_shape;
    if th.div_ceil(2) != hc || tw.div_ceil(2) != wc {
        return Err(Error::shape(format!(
            "wavelet: idwt2d_level: bands {hc}x{wc} cannot reconstruct {th}x{tw}"
        )));
    }
    let h_even = 2 * hc;

    // Undo the columns pass.
    let mut rows_lo = vec![0.0; h_even * wc];
    let mut rows_hi = vec![0.0; h_even * wc];
    let mut lo_col = vec![0.0; hc];
    let mut hi_col = vec![0.0; hc];
    for x in 0..wc {
        for y in 0..hc {
            lo_col[y] = bands.a.values()[y * wc + x];
            hi_col[y] = bands.h.values()[y * wc + x];
        }
        let col = idwt1d(&lo_col, &hi_col, filters, h_even)?;
        for y in 0..h_even {
            rows_lo[y * wc + x] = col[y];
        }
        for y in 0..hc {
            lo_col[y] = bands.v.values()[y * wc + x];
            hi_col[y] = bands.d.values()[y * wc + x];
        }
        let col = idwt1d(&lo_col, &hi_col, filters, h_even)?;
        for y in 0..h_even {
            rows_hi[y * wc + x] = col[y];
        }
    }

    // Undo the rows pass, cropping rows to the target height.
    let mut out = vec![0.0; th * tw];
    for y in 0..th {
        let row = idwt1d(
            &rows_lo[y * wc..(y + 1) * wc],
            &rows_hi[y * wc..(y + 1) * wc],
            filters,
            tw,
        )?;
        out[y * tw..(y + 1) * tw].copy_from_slice(&row);
    }
    Tensor::new(vec![1, th, tw], out)
}

/// Multi-level pyramid of an RGB image: grayscale, then recursive
/// [`dwt2d_level`] on successive A bands.
pub fn dwt_pyramid(
    image: &Tensor<f64>,
    levels: usize,
    filters: &FilterPair,
) -> Result<WaveletPyramid> {
    if !(1..=5).contains(&levels) {
        return Err(Error::config(format!(
            "wavelet: dwt_pyramid: levels must be in 1..=5, got {levels}"
        )));
    }
    let gray = to_grayscale(image)?;
    let (_, sh, sw) = gray.dims3()?;
    let mut sets = Vec::with_capacity(levels);
    let mut current = gray;
    for level in 1..=levels {
        let (_, h, w) = current.dims3()?;
        if h < filters.len() || w < filters.len() {
            return Err(Error::shape(format!(
                "wavelet: dwt_pyramid: level {level} input {h}x{w} is too small for {} levels",
                levels
            )));
        }
        let set = dwt2d_level(&current, filters)?;
        current = set.a.clone();
        sets.push(set);
    }
    Ok(WaveletPyramid {
        levels: sets,
        source_shape: (sh, sw),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn random_image(c: usize, h: usize, w: usize, s: u64) -> Tensor<f64> {
        let mut rng = seed::stream(0xD1CE, "wavelet-test", s);
        let values: Vec<f64> = (0..c * h * w)
            .map(|_| seed::uniform_in(&mut rng, -1.0, 1.0))
            .collect();
        Tensor::new(vec![c, h, w], values).unwrap()
    }

    fn energy(values: &[f64]) -> f64 {
        values.iter().map(|v| v * v).sum()
    }

    #[test]
    fn haar_is_orthonormal() {
        let f = haar_filters();
        let g2: f64 = f.lowpass().iter().map(|v| v * v).sum();
        let h2: f64 = f.highpass().iter().map(|v| v * v).sum();
        let gh: f64 = f
            .lowpass()
            .iter()
            .zip(f.highpass())
            .map(|(a, b)| a * b)
            .sum();
        assert!((g2 - 1.0).abs() < 1e-15);
        assert!((h2 - 1.0).abs() < 1e-15);
        assert!(gh.abs() < 1e-15);
    }

    #[test]
    fn haar_highpass_kills_constants() {
        let (_, hi) = dwt1d(&[5.0; 16], &haar_filters()).unwrap();
        assert!(hi.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn haar_cascade_matches_basis_coefficients() {
        // f = (1,1,1,1): coarse coefficient against the unit-norm basis
        // vector (1,1,1,1)/2 is 2; the two-level cascade must agree.
        let f = [1.0, 1.0, 1.0, 1.0];
        let filters = haar_filters();
        let (lo1, _) = dwt1d(&f, &filters).unwrap();
        let (lo2, _) = dwt1d(&lo1, &filters).unwrap();
        assert!((lo2[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn two_level_cascade_vs_explicit_dot_products() {
        // Length-4 basis with uniform 1/2 scaling; the cascade's level-1
        // details differ from those dot products by exactly sqrt(2).
        let phi20 = [0.5, 0.5, 0.5, 0.5];
        let psi20 = [0.5, 0.5, -0.5, -0.5];
        let psi10 = [0.5, -0.5, 0.0, 0.0];
        let psi11 = [0.0, 0.0, 0.5, -0.5];
        let dot = |f: &[f64], b: &[f64]| -> f64 { f.iter().zip(b).map(|(x, y)| x * y).sum() };

        let filters = haar_filters();
        let mut rng = seed::stream(3, "basis", 0);
        for _ in 0..50 {
            let f: Vec<f64> = (0..4).map(|_| seed::uniform_in(&mut rng, -2.0, 2.0)).collect();
            let (lo1, hi1) = dwt1d(&f, &filters).unwrap();
            let (lo2, hi2) = dwt1d(&lo1, &filters).unwrap();
            assert!((lo2[0] - dot(&f, &phi20)).abs() < 1e-12);
            assert!((hi2[0] - dot(&f, &psi20)).abs() < 1e-12);
            assert!((hi1[0] - SQRT2 * dot(&f, &psi10)).abs() < 1e-12);
            assert!((hi1[1] - SQRT2 * dot(&f, &psi11)).abs() < 1e-12);
        }
    }

    #[test]
    fn db1_equals_haar() {
        assert_eq!(daubechies_filters(1).unwrap(), haar_filters());
    }

    #[test]
    fn db2_is_orthonormal() {
        let f = daubechies_filters(2).unwrap();
        assert_eq!(f.len(), 4);
        let g2: f64 = f.lowpass().iter().map(|v| v * v).sum();
        let gh: f64 = f
            .lowpass()
            .iter()
            .zip(f.highpass())
            .map(|(a, b)| a * b)
            .sum();
        assert!((g2 - 1.0).abs() < 1e-12);
        assert!(gh.abs() < 1e-12);
    }

    #[test]
    fn db2_highpass_annihilates_ramps_away_from_the_wrap() {
        let f = daubechies_filters(2).unwrap();
        let ramp: Vec<f64> = (0..32).map(|i| i as f64).collect();
        let (_, hi) = dwt1d(&ramp, &f).unwrap();
        // The final coefficient wraps around the periodization seam and
        // sees the jump; all interior details must vanish.
        for (k, v) in hi.iter().enumerate().take(hi.len() - 1) {
            assert!(v.abs() < 1e-10, "detail {k} = {v}");
        }
    }

    #[test]
    fn unsupported_order_rejected() {
        assert!(daubechies_filters(0).is_err());
        assert!(daubechies_filters(3).is_err());
    }

    #[test]
    fn grayscale_luma_weights() {
        let gray = |r: f64, g: f64, b: f64| -> f64 {
            let img = Tensor::new(vec![3, 1, 1], vec![r, g, b]).unwrap();
            to_grayscale(&img).unwrap().values()[0]
        };
        assert!((gray(0.7, 0.7, 0.7) - 0.7).abs() < 1e-15);
        assert!((gray(1.0, 0.0, 0.0) - 0.299).abs() < 1e-15);
        assert!((gray(0.2, 0.4, 0.8) - (0.299 * 0.2 + 0.587 * 0.4 + 0.114 * 0.8)).abs() < 1e-15);
        let bad = Tensor::<f64>::zeros(vec![1, 2, 2]);
        assert!(to_grayscale(&bad).is_err());
    }

    #[test]
    fn dwt1d_hand_computed_example() {
        let (lo, hi) = dwt1d(&[4.0, 6.0, 10.0, 12.0], &haar_filters()).unwrap();
        assert!((lo[0] - 10.0 / SQRT2).abs() < 1e-12);
        assert!((lo[1] - 22.0 / SQRT2).abs() < 1e-12);
        assert!((hi[0] - (-2.0) / SQRT2).abs() < 1e-12);
        assert!((hi[1] - (-2.0) / SQRT2).abs() < 1e-12);
    }

    #[test]
    fn dwt2d_constant_image() {
        let img = Tensor::full(vec![1, 8, 8], 3.0);
        let set = dwt2d_level(&img, &haar_filters()).unwrap();
        assert!(set.a.values().iter().all(|&v| (v - 6.0).abs() < 1e-12));
        for band in [&set.h, &set.v, &set.d] {
            assert!(band.values().iter().all(|&v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn vertical_step_edge_lands_in_v_band() {
        // Step along x at an odd offset so a Haar pair straddles it.
        let (h, w) = (8, 8);
        let values: Vec<f64> = (0..h * w)
            .map(|i| if i % w < 5 { 0.0 } else { 1.0 })
            .collect();
        let img = Tensor::new(vec![1, h, w], values).unwrap();
        let set = dwt2d_level(&img, &haar_filters()).unwrap();
        assert!(energy(set.v.values()) > 0.1);
        assert!(energy(set.h.values()) < 1e-20);
        assert!(energy(set.d.values()) < 1e-20);
    }

    #[test]
    fn perfect_reconstruction_even_dims() {
        for order in [1, 2] {
            let filters = daubechies_filters(order).unwrap();
            let img = random_image(1, 64, 64, order as u64);
            let set = dwt2d_level(&img, &filters).unwrap();
            let back = idwt2d_level(&set, &filters, (64, 64)).unwrap();
            assert!(
                back.max_abs_diff(&img) < 1e-6,
                "order {order} roundtrip error {}",
                back.max_abs_diff(&img)
            );
        }
    }

    #[test]
    fn parseval_even_dims() {
        for order in [1, 2] {
            let filters = daubechies_filters(order).unwrap();
            let img = random_image(1, 32, 48, 10 + order as u64);
            let set = dwt2d_level(&img, &filters).unwrap();
            let e_in = energy(img.values());
            let e_out = set.energy();
            assert!(
                ((e_in - e_out) / e_in).abs() < 1e-12,
                "order {order}: {e_in} vs {e_out}"
            );
        }
    }

    #[test]
    fn zero_bands_reconstruct_zero() {
        let z = Tensor::zeros(vec![1, 4, 4]);
        let set = SubBandSet {
            a: z.clone(),
            h: z.clone(),
            v: z.clone(),
            d: z,
        };
        let back = idwt2d_level(&set, &haar_filters(), (8, 8)).unwrap();
        assert!(back.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn a_only_reconstructs_constant_image() {
        let img = Tensor::full(vec![1, 8, 8], 2.5);
        let filters = haar_filters();
        let set = dwt2d_level(&img, &filters).unwrap();
        let z = Tensor::zeros(vec![1, 4, 4]);
        let a_only = SubBandSet {
            a: set.a.clone(),
            h: z.clone(),
            v: z.clone(),
            d: z,
        };
        let back = idwt2d_level(&a_only, &filters, (8, 8)).unwrap();
        assert!(back.max_abs_diff(&img) < 1e-12);
    }

    #[test]
    fn odd_dims_use_ceil_halving() {
        let img = random_image(1, 15, 9, 2);
        let set = dwt2d_level(&img, &haar_filters()).unwrap();
        assert_eq!(set.spatial(), (8, 5));
    }

    #[test]
    fn inconsistent_band_shapes_rejected() {
        let set = SubBandSet {
            a: Tensor::zeros(vec![1, 4, 4]),
            h: Tensor::zeros(vec![1, 4, 3]),
            v: Tensor::zeros(vec![1, 4, 4]),
            d: Tensor::zeros(vec![1, 4, 4]),
        };
        assert!(idwt2d_level(&set, &haar_filters(), (8, 8)).is_err());
    }

    #[test]
    fn pyramid_shapes_halve_per_level() {
        let img = random_image(3, 1024, 1024, 3);
        let pyr = dwt_pyramid(&img, 4, &haar_filters()).unwrap();
        let shapes: Vec<(usize, usize)> = pyr.levels.iter().map(|s| s.spatial()).collect();
        assert_eq!(shapes, vec![(512, 512), (256, 256), (128, 128), (64, 64)]);
    }

    #[test]
    fn single_level_pyramid() {
        let img = random_image(3, 16, 16, 4);
        let pyr = dwt_pyramid(&img, 1, &haar_filters()).unwrap();
        assert_eq!(pyr.levels.len(), 1);
    }

    #[test]
    fn pyramid_level_two_matches_manual_composition() {
        let img = random_image(3, 32, 32, 5);
        let filters = haar_filters();
        let pyr = dwt_pyramid(&img, 2, &filters).unwrap();
        let gray = to_grayscale(&img).unwrap();
        let l1 = dwt2d_level(&gray, &filters).unwrap();
        let l2 = dwt2d_level(&l1.a, &filters).unwrap();
        assert!(pyr.levels[1].a.max_abs_diff(&l2.a) < 1e-15);
        assert!(pyr.levels[1].d.max_abs_diff(&l2.d) < 1e-15);
    }

    #[test]
    fn too_many_levels_rejected() {
        let img = random_image(3, 16, 16, 6);
        // level 5 would need an 8x? -> 1x1 input below the filter support
        assert!(dwt_pyramid(&img, 5, &haar_filters()).is_err());
        assert!(dwt_pyramid(&img, 0, &haar_filters()).is_err());
        assert!(dwt_pyramid(&img, 6, &haar_filters()).is_err());
    }
}
