//! Procedural aerial-style lane scenes with ground truth.
//!
//! A scene is terrain, dark roads, bright thin markings (solid, dashed,
//! dot blocks, zebra stripes), marking look-alike clutter (roof ridges,
//! vehicles), shadow polygons and sensor noise. The mask marks exactly the
//! painted marking pixels; washed-out markings are painted faintly and left
//! out of the mask. Marking pixel count is steered toward the configured
//! background:lane ratio and the run is rejected when the extent cannot
//! reach it.

use crate::error::{Error, Result};
use crate::seed;
use crate::tensor::{Mask, Tensor};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MarkingStyles {
    pub solid: bool,
    pub dashed: bool,
    pub dots: bool,
    pub zebra: bool,
}

impl Default for MarkingStyles {
    fn default() -> Self {
        MarkingStyles {
            solid: true,
            dashed: true,
            dots: true,
            zebra: true,
        }
    }
}

impl MarkingStyles {
    fn enabled(&self) -> Vec<Style> {
        let mut v = Vec::new();
        if self.solid {
            v.push(Style::Solid);
        }
        if self.dashed {
            v.push(Style::Dashed);
        }
        if self.dots {
            v.push(Style::Dots);
        }
        if self.zebra {
            v.push(Style::Zebra);
        }
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Style {
    Solid,
    Dashed,
    Dots,
    Zebra,
}

/// Scene recipe; every field is deterministic input to the renderer.
#[derive(Clone, Debug, PartialEq)]
pub struct SceneSpec {
    pub width: usize,
    pub height: usize,
    pub seed: u64,
    pub road_count: usize,
    /// Road width range in pixels (min, max).
    pub road_width: (usize, usize),
    pub styles: MarkingStyles,
    /// Scales building and vehicle counts.
    pub clutter_density: f64,
    pub shadow_count: usize,
    /// Fraction of filler marking elements rendered washed out
    /// (visible ghost, absent from the mask).
    pub washed_out_fraction: f64,
    /// Target background:lane pixel ratio.
    pub target_ratio: f64,
    /// Additive sensor noise, in 8-bit gray levels.
    pub noise_sigma: f64,
}

impl Default for SceneSpec {
    fn default() -> Self {
        SceneSpec {
            width: 1024,
            height: 1024,
            seed: 0,
            road_count: 3,
            road_width: (36, 72),
            styles: MarkingStyles::default(),
            clutter_density: 1.0,
            shadow_count: 2,
            washed_out_fraction: 0.1,
            target_ratio: 389.0,
            noise_sigma: 3.0,
        }
    }
}

struct Road {
    /// Point on the center line.
    cx: f64,
    cy: f64,
    /// Unit direction.
    dx: f64,
    dy: f64,
    half_width: f64,
}

impl Road {
    fn normal(&self) -> (f64, f64) {
        (-self.dy, self.dx)
    }

    fn point_at(&self, t: f64, offset: f64) -> (f64, f64) {
        let (nx, ny) = self.normal();
        (self.cx + self.dx * t + nx * offset, self.cy + self.dy * t + ny * offset)
    }
}

struct Render {
    w: usize,
    h: usize,
    /// RGB planes in [0,1], clean of shadows and noise.
    rgb: [Vec<f64>; 3],
    mask: Vec<u8>,
    /// Pixels occupied by vehicles; markings never paint over them.
    blocked: Vec<bool>,
}

impl Render {
    fn idx(&self, x: usize, y: usize) -> usize {
        y * self.w + x
    }
}

/// Axis-angle rectangle: center, unit axis, half extents along/across.
struct OrientedRect {
    cx: f64,
    cy: f64,
    ax: f64,
    ay: f64,
    half_len: f64,
    half_wid: f64,
}

impl OrientedRect {
    fn bounds(&self, w: usize, h: usize) -> (usize, usize, usize, usize) {
        let r = self.half_len.hypot(self.half_wid) + 1.0;
        let x0 = (self.cx - r).floor().max(0.0) as usize;
        let y0 = (self.cy - r).floor().max(0.0) as usize;
        let x1 = ((self.cx + r).ceil() as usize).min(w.saturating_sub(1));
        let y1 = ((self.cy + r).ceil() as usize).min(h.saturating_sub(1));
        (x0, y0, x1, y1)
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        let rx = x - self.cx;
        let ry = y - self.cy;
        let along = rx * self.ax + ry * self.ay;
        let across = -rx * self.ay + ry * self.ax;
        along.abs() <= self.half_len && across.abs() <= self.half_wid
    }
}

/// Paint a rectangle into the image; when `mark` is set, also set mask bits.
/// Returns the number of mask bits newly set.
fn paint_rect(r: &mut Render, rect: &OrientedRect, color: [f64; 3], mark: bool) -> u64 {
    let (x0, y0, x1, y1) = rect.bounds(r.w, r.h);
    let mut newly = 0;
    for y in y0..=y1 {
        for x in x0..=x1 {
            if !rect.contains(x as f64 + 0.5, y as f64 + 0.5) {
                continue;
            }
            let i = r.idx(x, y);
            if mark && r.blocked[i] {
                continue;
            }
            for (plane, c) in r.rgb.iter_mut().zip(color) {
                plane[i] = c;
            }
            if mark && r.mask[i] == 0 {
                r.mask[i] = 1;
                newly += 1;
            }
        }
    }
    newly
}

fn marking_gray(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let g = seed::uniform_in(rng, 180.0, 255.0) / 255.0;
    [g, g, g]
}

/// One marking element along `road` at station `t`. Paints image and mask
/// (or a faint ghost when washed out) and returns newly marked pixels.
fn paint_element(
    r: &mut Render,
    rng: &mut ChaCha8Rng,
    road: &Road,
    style: Style,
    t: f64,
    offset: f64,
    washed: bool,
) -> u64 {
    let color = if washed {
        let g = seed::uniform_in(rng, 0.36, 0.44);
        [g, g, g]
    } else {
        marking_gray(rng)
    };
    let mark = !washed;
    let mut painted = 0;
    match style {
        Style::Solid => {
            let len = seed::uniform_in(rng, 40.0, 120.0);
            let sw = seed::uniform_in(rng, 2.0, 4.0);
            let (cx, cy) = road.point_at(t, offset);
            painted += paint_rect(
                r,
                &OrientedRect {
                    cx,
                    cy,
                    ax: road.dx,
                    ay: road.dy,
                    half_len: len / 2.0,
                    half_wid: sw / 2.0,
                },
                color,
                mark,
            );
        }
        Style::Dashed => {
            let dashes = 3 + seed::uniform_usize(rng, 3);
            let dash_len = seed::uniform_in(rng, 12.0, 24.0);
            let gap = seed::uniform_in(rng, 12.0, 28.0);
            let sw = seed::uniform_in(rng, 2.0, 3.5);
            for d in 0..dashes {
                let td = t + d as f64 * (dash_len + gap);
                let (cx, cy) = road.point_at(td, offset);
                painted += paint_rect(
                    r,
                    &OrientedRect {
                        cx,
                        cy,
                        ax: road.dx,
                        ay: road.dy,
                        half_len: dash_len / 2.0,
                        half_wid: sw / 2.0,
                    },
                    color,
                    mark,
                );
            }
        }
        Style::Dots => {
            let blocks = 2 + seed::uniform_usize(rng, 3);
            let side = seed::uniform_in(rng, 5.0, 8.0);
            let gap = seed::uniform_in(rng, 20.0, 40.0);
            for d in 0..blocks {
                let td = t + d as f64 * (side + gap);
                let (cx, cy) = road.point_at(td, offset);
                painted += paint_rect(
                    r,
                    &OrientedRect {
                        cx,
                        cy,
                        ax: road.dx,
                        ay: road.dy,
                        half_len: side / 2.0,
                        half_wid: side / 2.0,
                    },
                    color,
                    mark,
                );
            }
        }
        Style::Zebra => {
            let stripes = 4 + seed::uniform_usize(rng, 3);
            let sw = seed::uniform_in(rng, 3.0, 4.0);
            let gap = seed::uniform_in(rng, 4.0, 7.0);
            let across = road.half_width;
            for s in 0..stripes {
                let ts = t + s as f64 * (sw + gap);
                let (cx, cy) = road.point_at(ts, 0.0);
                // stripe axis is the road normal
                let (nx, ny) = road.normal();
                painted += paint_rect(
                    r,
                    &OrientedRect {
                        cx,
                        cy,
                        ax: nx,
                        ay: ny,
                        half_len: across / 2.0,
                        half_wid: sw / 2.0,
                    },
                    color,
                    mark,
                );
            }
        }
    }
    painted
}

/// Conservative pixel-cost estimate per style instance, for budgeting.
fn style_cost(style: Style, half_width: f64) -> u64 {
    match style {
        Style::Solid => 360,
        Style::Dashed => 280,
        Style::Dots => 160,
        Style::Zebra => (half_width * 6.5 * 4.0) as u64 + 60,
    }
}

fn point_in_convex_quad(px: f64, py: f64, quad: &[(f64, f64); 4]) -> bool {
    let mut sign = 0.0f64;
    for i in 0..4 {
        let (x0, y0) = quad[i];
        let (x1, y1) = quad[(i + 1) % 4];
        let cross = (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0);
        if cross != 0.0 {
            if sign == 0.0 {
                sign = cross.signum();
            } else if cross.signum() != sign {
                return false;
            }
        }
    }
    true
}

struct Scene {
    image: Tensor<f32>,
    mask: Mask,
    /// Pre-shadow, pre-noise render, for alignment checks.
    clean: [Vec<f64>; 3],
    style_instances: Vec<Style>,
}

fn render(spec: &SceneSpec) -> Result<Scene> {
    let (w, h) = (spec.width, spec.height);
    if w < 64 || h < 64 {
        return Err(Error::config(format!(
            "synthgen: extent {w}x{h} is too small (minimum 64x64)"
        )));
    }
    if spec.road_count == 0 {
        return Err(Error::config("synthgen: road_count must be positive"));
    }
    if !(0.0..=1.0).contains(&spec.washed_out_fraction) {
        return Err(Error::config(
            "synthgen: washed_out_fraction must be in [0, 1]",
        ));
    }
    if spec.target_ratio <= 0.0 {
        return Err(Error::config("synthgen: target_ratio must be positive"));
    }
    let plane = w * h;
    let target = (plane as f64 / (spec.target_ratio + 1.0)).round() as u64;
    if target < 30 {
        return Err(Error::data(format!(
            "synthgen: infeasible ratio {} for extent {w}x{h}: \
             target of {target} lane pixels is below the smallest marking",
            spec.target_ratio
        )));
    }

    let mut rng = seed::stream(spec.seed, "scene-render", 0);

    // Terrain: greenish gray with a coarse low-frequency lattice.
    let lattice = 16usize;
    let gw = w / lattice + 2;
    let gh = h / lattice + 2;
    let offsets: Vec<f64> = (0..gw * gh)
        .map(|_| seed::uniform_in(&mut rng, -0.06, 0.06))
        .collect();
    let base = [0.36, 0.42, 0.33];
    let mut rgb: [Vec<f64>; 3] = [
        vec![0.0; plane],
        vec![0.0; plane],
        vec![0.0; plane],
    ];
    for y in 0..h {
        let gy = y / lattice;
        let fy = (y % lattice) as f64 / lattice as f64;
        for x in 0..w {
            let gx = x / lattice;
            let fx = (x % lattice) as f64 / lattice as f64;
            let o00 = offsets[gy * gw + gx];
            let o01 = offsets[gy * gw + gx + 1];
            let o10 = offsets[(gy + 1) * gw + gx];
            let o11 = offsets[(gy + 1) * gw + gx + 1];
            let o = o00 * (1.0 - fx) * (1.0 - fy)
                + o01 * fx * (1.0 - fy)
                + o10 * (1.0 - fx) * fy
                + o11 * fx * fy;
            for (ch, plane_v) in rgb.iter_mut().enumerate() {
                plane_v[y * w + x] = base[ch] + o;
            }
        }
    }

    let mut r = Render {
        w,
        h,
        rgb,
        mask: vec![0; plane],
        blocked: vec![false; plane],
    };

    // Roads: mostly axis-aligned, some diagonal.
    let mut roads = Vec::with_capacity(spec.road_count);
    for _ in 0..spec.road_count {
        let pick = seed::uniform(&mut rng);
        let angle = if pick < 0.4 {
            seed::uniform_in(&mut rng, -0.12, 0.12)
        } else if pick < 0.8 {
            std::f64::consts::FRAC_PI_2 + seed::uniform_in(&mut rng, -0.12, 0.12)
        } else {
            let sign = if seed::uniform(&mut rng) < 0.5 { 1.0 } else { -1.0 };
            sign * std::f64::consts::FRAC_PI_4 + seed::uniform_in(&mut rng, -0.12, 0.12)
        };
        let road = Road {
            cx: seed::uniform_in(&mut rng, 0.15 * w as f64, 0.85 * w as f64),
            cy: seed::uniform_in(&mut rng, 0.15 * h as f64, 0.85 * h as f64),
            dx: angle.cos(),
            dy: angle.sin(),
            half_width: seed::uniform_in(
                &mut rng,
                spec.road_width.0 as f64 / 2.0,
                spec.road_width.1 as f64 / 2.0,
            ),
        };
        let shade = seed::uniform_in(&mut rng, 0.27, 0.34);
        let diag = (w * w + h * h) as f64;
        paint_rect(
            &mut r,
            &OrientedRect {
                cx: road.cx,
                cy: road.cy,
                ax: road.dx,
                ay: road.dy,
                half_len: diag.sqrt(),
                half_wid: road.half_width,
            },
            [shade, shade, shade],
            false,
        );
        roads.push(road);
    }

    // Vehicles go in before markings; markings never paint over them.
    let vehicles = (spec.clutter_density * spec.road_count as f64 * 3.0).round() as usize;
    for _ in 0..vehicles {
        let road = &roads[seed::uniform_usize(&mut rng, roads.len())];
        let t = seed::uniform_in(&mut rng, -0.5 * w.max(h) as f64, 0.5 * w.max(h) as f64);
        let off = seed::uniform_in(&mut rng, -road.half_width * 0.5, road.half_width * 0.5);
        let (cx, cy) = road.point_at(t, off);
        let len = seed::uniform_in(&mut rng, 10.0, 18.0);
        let wid = seed::uniform_in(&mut rng, 5.0, 8.0);
        let color = [
            seed::uniform_in(&mut rng, 0.3, 0.9),
            seed::uniform_in(&mut rng, 0.3, 0.9),
            seed::uniform_in(&mut rng, 0.3, 0.9),
        ];
        let rect = OrientedRect {
            cx,
            cy,
            ax: road.dx,
            ay: road.dy,
            half_len: len / 2.0,
            half_wid: wid / 2.0,
        };
        paint_rect(&mut r, &rect, color, false);
        let (x0, y0, x1, y1) = rect.bounds(w, h);
        for y in y0..=y1 {
            for x in x0..=x1 {
                if rect.contains(x as f64 + 0.5, y as f64 + 0.5) {
                    let i = r.idx(x, y);
                    r.blocked[i] = true;
                }
            }
        }
    }

    // Markings: at least one instance of each enabled style, then filler
    // until the lane pixel count reaches the target band.
    let styles = spec.styles.enabled();
    let mut lane_count = 0u64;
    let mut style_instances = Vec::new();
    let span = 0.45 * (w.max(h)) as f64;
    let place = |r: &mut Render, rng: &mut ChaCha8Rng, style: Style, washed: bool| -> u64 {
        let road_ix = seed::uniform_usize(rng, roads.len());
        let road = &roads[road_ix];
        let t = seed::uniform_in(rng, -span, span);
        let lane_pos = seed::uniform_usize(rng, 3);
        let offset = match lane_pos {
            0 => -road.half_width * 0.6,
            1 => 0.0,
            _ => road.half_width * 0.6,
        };
        paint_element(r, rng, road, style, t, offset, washed)
    };

    // One instance of each enabled style, most expensive first, skipping
    // styles the remaining budget cannot fit.
    let max_hw = spec.road_width.1 as f64 / 2.0;
    let mut mandatory = styles.clone();
    mandatory.sort_by_key(|&s| std::cmp::Reverse(style_cost(s, max_hw)));
    for &style in &mandatory {
        if lane_count + style_cost(style, max_hw) > (1.1 * target as f64) as u64 {
            continue;
        }
        let painted = place(&mut r, &mut rng, style, false);
        lane_count += painted;
        style_instances.push(style);
    }
    let upper = (1.2 * target as f64) as u64;
    if lane_count > upper {
        return Err(Error::data(format!(
            "synthgen: infeasible ratio {} for extent {w}x{h}: \
             mandatory style instances already paint {lane_count} of {target} lane pixels",
            spec.target_ratio
        )));
    }

    let small_styles: Vec<Style> = styles
        .iter()
        .copied()
        .filter(|s| matches!(s, Style::Dashed | Style::Dots))
        .collect();
    let mut guard = 0;
    while lane_count < (0.95 * target as f64) as u64 {
        guard += 1;
        if guard > 20_000 {
            return Err(Error::data(format!(
                "synthgen: ratio control failed to converge at {lane_count}/{target} lane pixels"
            )));
        }
        let remaining = target - lane_count;
        let washed = seed::uniform(&mut rng) < spec.washed_out_fraction;
        if remaining < 150 {
            // close the gap with a short solid stroke sized to fit
            let road = &roads[seed::uniform_usize(&mut rng, roads.len())];
            let t = seed::uniform_in(&mut rng, -span, span);
            let sw = 2.0;
            let len = (remaining as f64 / sw).clamp(6.0, 70.0);
            let (cx, cy) = road.point_at(t, road.half_width * 0.6);
            let color = marking_gray(&mut rng);
            let painted = paint_rect(
                &mut r,
                &OrientedRect {
                    cx,
                    cy,
                    ax: road.dx,
                    ay: road.dy,
                    half_len: len / 2.0,
                    half_wid: sw / 2.0,
                },
                color,
                !washed,
            );
            if !washed {
                lane_count += painted;
                style_instances.push(Style::Solid);
            }
        } else {
            // Near the target, stick to small elements to avoid overshoot.
            let pool: &[Style] = if remaining < 700 && !small_styles.is_empty() {
                &small_styles
            } else {
                &styles
            };
            let style = pool[seed::uniform_usize(&mut rng, pool.len())];
            let painted = place(&mut r, &mut rng, style, washed);
            if !washed {
                lane_count += painted;
                style_instances.push(style);
            }
        }
    }
    let lower = (0.8 * target as f64) as u64;
    if lane_count < lower || lane_count > upper {
        return Err(Error::data(format!(
            "synthgen: lane pixel count {lane_count} landed outside \
             the +/-20% band around target {target}"
        )));
    }

    // Buildings with bright roof ridges (marking look-alikes, not in mask).
    let buildings = (spec.clutter_density * plane as f64 / 150_000.0).round() as usize;
    'building: for _ in 0..buildings {
        for _try in 0..20 {
            let bx = seed::uniform_in(&mut rng, 0.05 * w as f64, 0.95 * w as f64);
            let by = seed::uniform_in(&mut rng, 0.05 * h as f64, 0.95 * h as f64);
            let bw = seed::uniform_in(&mut rng, 24.0, 80.0);
            let bh = seed::uniform_in(&mut rng, 24.0, 80.0);
            let clear = roads.iter().all(|road| {
                let rx = bx - road.cx;
                let ry = by - road.cy;
                let across = (-rx * road.dy + ry * road.dx).abs();
                across > road.half_width + bw.max(bh) / 2.0 + 8.0
            });
            if !clear {
                continue;
            }
            let roof = [
                seed::uniform_in(&mut rng, 0.30, 0.52),
                seed::uniform_in(&mut rng, 0.26, 0.44),
                seed::uniform_in(&mut rng, 0.24, 0.40),
            ];
            let rect = OrientedRect {
                cx: bx,
                cy: by,
                ax: 1.0,
                ay: 0.0,
                half_len: bw / 2.0,
                half_wid: bh / 2.0,
            };
            paint_rect(&mut r, &rect, roof, false);
            // ridge line along the longer side
            let bright = seed::uniform_in(&mut rng, 0.75, 0.95);
            let (ax, ay, half_len) = if bw >= bh {
                (1.0, 0.0, bw / 2.0 - 2.0)
            } else {
                (0.0, 1.0, bh / 2.0 - 2.0)
            };
            paint_rect(
                &mut r,
                &OrientedRect {
                    cx: bx,
                    cy: by,
                    ax,
                    ay,
                    half_len,
                    half_wid: seed::uniform_in(&mut rng, 1.0, 1.6),
                },
                [bright, bright, bright],
                false,
            );
            continue 'building;
        }
    }

    let clean = r.rgb.clone();

    // Shadows darken the image but never the mask.
    let rad = 0.04 * w.min(h) as f64;
    for _ in 0..spec.shadow_count {
        let cx = seed::uniform_in(&mut rng, 0.0, w as f64);
        let cy = seed::uniform_in(&mut rng, 0.0, h as f64);
        let mut quad = [(0.0, 0.0); 4];
        for (k, corner) in quad.iter_mut().enumerate() {
            let ang = k as f64 * std::f64::consts::FRAC_PI_2
                + seed::uniform_in(&mut rng, 0.0, std::f64::consts::FRAC_PI_2);
            let rr = seed::uniform_in(&mut rng, rad, rad * 5.0);
            *corner = (cx + rr * ang.cos(), cy + rr * ang.sin());
        }
        let factor = seed::uniform_in(&mut rng, 0.4, 0.7);
        let xs = quad.iter().map(|p| p.0);
        let ys = quad.iter().map(|p| p.1);
        let x0 = xs.clone().fold(f64::INFINITY, f64::min).floor().max(0.0) as usize;
        let x1 = (xs.fold(f64::NEG_INFINITY, f64::max).ceil() as usize).min(w - 1);
        let y0 = ys.clone().fold(f64::INFINITY, f64::min).floor().max(0.0) as usize;
        let y1 = (ys.fold(f64::NEG_INFINITY, f64::max).ceil() as usize).min(h - 1);
        for y in y0..=y1 {
            for x in x0..=x1 {
                if point_in_convex_quad(x as f64 + 0.5, y as f64 + 0.5, &quad) {
                    let i = y * w + x;
                    for plane_v in &mut r.rgb {
                        plane_v[i] *= factor;
                    }
                }
            }
        }
    }

    // Sensor noise.
    if spec.noise_sigma > 0.0 {
        let sigma = spec.noise_sigma / 255.0;
        for plane_v in &mut r.rgb {
            for v in plane_v.iter_mut() {
                *v = (*v + sigma * seed::normal(&mut rng)).clamp(0.0, 1.0);
            }
        }
    }

    let mut values = Vec::with_capacity(3 * plane);
    for plane_v in &r.rgb {
        values.extend(plane_v.iter().map(|&v| v as f32));
    }
    Ok(Scene {
        image: Tensor::new(vec![3, h, w], values)?,
        mask: Mask::new(w, h, r.mask)?,
        clean,
        style_instances,
    })
}

/// Render one scene: RGB image in [0,1] plus its ground-truth mask.
/// Deterministic in `spec.seed`.
pub fn generate(spec: &SceneSpec) -> Result<(Tensor<f32>, Mask)> {
    let scene = render(spec)?;
    Ok((scene.image, scene.mask))
}

/// Train/val/test split tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub fn as_str(&self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "val" => Ok(Split::Val),
            "test" => Ok(Split::Test),
            other => Err(Error::data(format!("synthgen: unknown split '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifestEntry {
    pub image: String,
    pub mask: String,
    pub split: Split,
    pub seed: u64,
    pub lane_pixels: u64,
    pub background_pixels: u64,
}

/// Dataset manifest: one generated image/mask pair per row.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn split_entries(&self, split: Split) -> Vec<&ManifestEntry> {
        self.entries.iter().filter(|e| e.split == split).collect()
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::from("image\tmask\tsplit\tseed\tlane_pixels\tbackground_pixels\n");
        for e in &self.entries {
            writeln!(
                s,
                "{}\t{}\t{}\t{}\t{}\t{}",
                e.image,
                e.mask,
                e.split.as_str(),
                e.seed,
                e.lane_pixels,
                e.background_pixels
            )
            .expect("write to string");
        }
        s
    }

    pub fn from_tsv(text: &str) -> Result<Manifest> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::data("synthgen: empty manifest"))?;
        if header != "image\tmask\tsplit\tseed\tlane_pixels\tbackground_pixels" {
            return Err(Error::format(format!(
                "synthgen: unexpected manifest header '{header}'"
            )));
        }
        let mut entries = Vec::new();
        for (ln, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 6 {
                return Err(Error::format(format!(
                    "synthgen: manifest line {} has {} fields, expected 6",
                    ln + 2,
                    fields.len()
                )));
            }
            let parse_u64 = |s: &str, what: &str| -> Result<u64> {
                s.parse().map_err(|_| {
                    Error::format(format!("synthgen: manifest: bad {what} '{s}'"))
                })
            };
            entries.push(ManifestEntry {
                image: fields[0].to_string(),
                mask: fields[1].to_string(),
                split: Split::parse(fields[2])?,
                seed: parse_u64(fields[3], "seed")?,
                lane_pixels: parse_u64(fields[4], "lane_pixels")?,
                background_pixels: parse_u64(fields[5], "background_pixels")?,
            });
        }
        Ok(Manifest { entries })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_tsv())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Manifest> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::data(format!("synthgen: cannot read manifest {path:?}: {e}")))?;
        Manifest::from_tsv(&text)
    }
}

/// Generate `count` scenes under `out_dir`, split disjointly by the given
/// fractions, and write `manifest.tsv`. Per-image seeds derive from the
/// template seed so the dataset regenerates bit-identically.
pub fn make_dataset(
    count: usize,
    template: &SceneSpec,
    fractions: (f64, f64, f64),
    out_dir: &Path,
) -> Result<Manifest> {
    if count < 3 {
        return Err(Error::config(format!(
            "synthgen: make_dataset: need at least 3 scenes, got {count}"
        )));
    }
    let (ft, fv, fe) = fractions;
    if (ft + fv + fe - 1.0).abs() > 1e-9 || ft < 0.0 || fv < 0.0 || fe < 0.0 {
        return Err(Error::config(format!(
            "synthgen: make_dataset: split fractions {fractions:?} must be non-negative and sum to 1"
        )));
    }
    let n_train = ((ft * count as f64).round() as usize).min(count);
    let n_val = ((fv * count as f64).round() as usize).min(count - n_train);
    std::fs::create_dir_all(out_dir)?;

    let mut entries = Vec::with_capacity(count);
    for i in 0..count {
        let scene_seed = seed::split_seed(template.seed, "scene", i as u64);
        let spec = SceneSpec {
            seed: scene_seed,
            ..template.clone()
        };
        let (image, mask) = generate(&spec)?;
        let image_name = format!("img_{i:04}.png");
        let mask_name = format!("mask_{i:04}.png");
        crate::pipeline::write_rgb_png(&out_dir.join(&image_name), &image)?;
        crate::pipeline::write_mask_png(&out_dir.join(&mask_name), &mask)?;
        let split = if i < n_train {
            Split::Train
        } else if i < n_train + n_val {
            Split::Val
        } else {
            Split::Test
        };
        entries.push(ManifestEntry {
            image: image_name,
            mask: mask_name,
            split,
            seed: scene_seed,
            lane_pixels: mask.lane_pixels(),
            background_pixels: mask.background_pixels(),
        });
    }
    let manifest = Manifest { entries };
    manifest.save(&out_dir.join("manifest.tsv"))?;
    Ok(manifest)
}
