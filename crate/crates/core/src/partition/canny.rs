//! Canny edge detector on intensities normalized to `[0, 1]`.
//!
//! Gaussian smoothing and the 3x3 Sobel gradient replicate border pixels.
//! Thresholds apply to the unscaled Sobel magnitude, so a full black-to-white
//! step peaks a little above 2 after smoothing.

use std::collections::VecDeque;

use super::image::{EdgeMask, GrayImage};
use crate::error::{Error, Result};

/// tan(22.5 deg) and tan(67.5 deg).
const TAN_22_5: f64 = std::f64::consts::SQRT_2 - 1.0;
const TAN_67_5: f64 = std::f64::consts::SQRT_2 + 1.0;

/// Detector and dilation settings used at encryption time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CannyParams {
    pub sigma: f64,
    pub low: f64,
    pub high: f64,
    /// Dilation radius applied to the detector output.
    pub radius: usize,
}

impl Default for CannyParams {
    fn default() -> Self {
        Self {
            sigma: 1.4,
            low: 0.1,
            high: 0.2,
            radius: 2,
        }
    }
}

impl CannyParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::Detector(format!(
                "sigma must be > 0, got {}",
                self.sigma
            )));
        }
        if !(self.low.is_finite()
            && self.high.is_finite()
            && 0.0 < self.low
            && self.low < self.high)
        {
            return Err(Error::Detector(format!(
                "thresholds must satisfy 0 < low < high, got low = {}, high = {}",
                self.low, self.high
            )));
        }
        Ok(())
    }
}

struct Plane {
    w: usize,
    h: usize,
    v: Vec<f64>,
}

impl Plane {
    #[inline]
    fn at(&self, x: isize, y: isize) -> f64 {
        let x = x.clamp(0, self.w as isize - 1) as usize;
        let y = y.clamp(0, self.h as isize - 1) as usize;
        self.v[y * self.w + x]
    }
}

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil().max(1.0) as isize;
    let k: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.into_iter().map(|v| v / sum).collect()
}

fn blur(src: &Plane, sigma: f64) -> Plane {
    let k = gaussian_kernel(sigma);
    let r = (k.len() / 2) as isize;
    let (w, h) = (src.w, src.h);

    let mut tmp = Plane {
        w,
        h,
        v: vec![0.0; w * h],
    };
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut acc = 0.0;
            for (i, kv) in k.iter().enumerate() {
                acc += kv * src.at(x + i as isize - r, y);
            }
            tmp.v[y as usize * w + x as usize] = acc;
        }
    }
    let mut out = Plane {
        w,
        h,
        v: vec![0.0; w * h],
    };
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut acc = 0.0;
            for (i, kv) in k.iter().enumerate() {
                acc += kv * tmp.at(x, y + i as isize - r);
            }
            out.v[y as usize * w + x as usize] = acc;
        }
    }
    out
}

/// Runs smoothing, Sobel gradient, non-maximum suppression and hysteresis.
pub fn canny(img: &GrayImage, sigma: f64, low: f64, high: f64) -> Result<EdgeMask> {
    CannyParams {
        sigma,
        low,
        high,
        radius: 0,
    }
    .validate()?;
    let (w, h) = (img.width(), img.height());
    let src = Plane {
        w,
        h,
        v: img.pixels().iter().map(|&p| p as f64 / 255.0).collect(),
    };
    let s = blur(&src, sigma);

    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    let mut mag = vec![0.0; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let dx = (s.at(x + 1, y - 1) + 2.0 * s.at(x + 1, y) + s.at(x + 1, y + 1))
                - (s.at(x - 1, y - 1) + 2.0 * s.at(x - 1, y) + s.at(x - 1, y + 1));
            let dy = (s.at(x - 1, y + 1) + 2.0 * s.at(x, y + 1) + s.at(x + 1, y + 1))
                - (s.at(x - 1, y - 1) + 2.0 * s.at(x, y - 1) + s.at(x + 1, y - 1));
            let i = y as usize * w + x as usize;
            gx[i] = dx;
            gy[i] = dy;
            mag[i] = (dx * dx + dy * dy).sqrt();
        }
    }

    let m = Plane { w, h, v: mag };
    let mut thin = vec![0.0; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let i = y as usize * w + x as usize;
            let v = m.v[i];
            if v < low {
                continue;
            }
            let (ax, ay) = (gx[i].abs(), gy[i].abs());
            // (behind, ahead) along the gradient direction.
            let (behind, ahead) = if ay <= TAN_22_5 * ax {
                (m.at(x - 1, y), m.at(x + 1, y))
            } else if ay >= TAN_67_5 * ax {
                (m.at(x, y - 1), m.at(x, y + 1))
            } else if gx[i] * gy[i] > 0.0 {
                (m.at(x - 1, y - 1), m.at(x + 1, y + 1))
            } else {
                (m.at(x + 1, y - 1), m.at(x - 1, y + 1))
            };
            // Asymmetric test keeps exactly one pixel of a symmetric ridge.
            if v >= behind && v > ahead {
                thin[i] = v;
            }
        }
    }

    Ok(hysteresis(w, h, &thin, low, high))
}

fn hysteresis(w: usize, h: usize, thin: &[f64], low: f64, high: f64) -> EdgeMask {
    let mut edge = vec![false; w * h];
    let mut queue = VecDeque::new();
    for (i, &v) in thin.iter().enumerate() {
        if v >= high {
            edge[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let (x, y) = ((i % w) as isize, (i / w) as isize);
        for dy in -1..=1 {
            for dx in -1..=1 {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                if !edge[j] && thin[j] >= low {
                    edge[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    EdgeMask::new(w, h, edge).expect("same dimensions")
}
