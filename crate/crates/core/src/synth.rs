//! Deterministic synthetic grayscale images with natural-image statistics:
//! smooth shading, homogeneous areas, sharp anatomical boundaries and mild
//! acquisition noise. Used by tests, benchmarks and demos.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::partition::GrayImage;

struct Ellipse {
    value: f64,
    a: f64,
    b: f64,
    cx: f64,
    cy: f64,
    angle_deg: f64,
}

impl Ellipse {
    fn contains(&self, x: f64, y: f64) -> bool {
        let (s, c) = self.angle_deg.to_radians().sin_cos();
        let (dx, dy) = (x - self.cx, y - self.cy);
        let u = dx * c + dy * s;
        let v = -dx * s + dy * c;
        (u / self.a).powi(2) + (v / self.b).powi(2) <= 1.0
    }
}

fn e(value: f64, a: f64, b: f64, cx: f64, cy: f64, angle_deg: f64) -> Ellipse {
    Ellipse {
        value,
        a,
        b,
        cx,
        cy,
        angle_deg,
    }
}

/// Maps pixel centers to `[-1, 1]` with y pointing up.
fn unit_coords(x: usize, y: usize, w: usize, h: usize) -> (f64, f64) {
    (
        (2.0 * x as f64 + 1.0) / w as f64 - 1.0,
        1.0 - (2.0 * y as f64 + 1.0) / h as f64,
    )
}

fn finish(
    w: usize,
    h: usize,
    noise: f64,
    seed: u64,
    mut f: impl FnMut(f64, f64) -> f64,
) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GrayImage::from_fn(w, h, |x, y| {
        let (u, v) = unit_coords(x, y, w, h);
        let n = if noise > 0.0 {
            rng.random_range(-noise..=noise)
        } else {
            0.0
        };
        (f(u, v) + n).round().clamp(0.0, 255.0) as u8
    })
    .expect("non-empty dimensions")
}

/// Modified Shepp-Logan head phantom.
pub fn head_phantom(w: usize, h: usize, seed: u64) -> GrayImage {
    let parts = [
        e(1.0, 0.69, 0.92, 0.0, 0.0, 0.0),
        e(-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0),
        e(-0.2, 0.11, 0.31, 0.22, 0.0, -18.0),
        e(-0.2, 0.16, 0.41, -0.22, 0.0, 18.0),
        e(0.1, 0.21, 0.25, 0.0, 0.35, 0.0),
        e(0.1, 0.046, 0.046, 0.0, 0.1, 0.0),
        e(0.1, 0.046, 0.046, 0.0, -0.1, 0.0),
        e(0.1, 0.046, 0.023, -0.08, -0.605, 0.0),
        e(0.1, 0.023, 0.023, 0.0, -0.606, 0.0),
        e(0.1, 0.023, 0.046, 0.06, -0.605, 0.0),
    ];
    finish(w, h, 3.0, seed, |u, v| {
        let s: f64 = parts
            .iter()
            .filter(|p| p.contains(u, v))
            .map(|p| p.value)
            .sum();
        40.0 + 200.0 * s
    })
}

/// Axial chest slice: body, lungs with vessels, heart and spine.
/// Different seeds move the anatomy slightly.
pub fn thorax(w: usize, h: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7407);
    let mut jitter = |s: f64| rng.random_range(-s..=s);
    let body = e(
        1.0,
        0.9 + jitter(0.03),
        0.68 + jitter(0.03),
        0.0,
        -0.05,
        0.0,
    );
    let left = e(
        1.0,
        0.3 + jitter(0.03),
        0.45,
        -0.4,
        0.0 + jitter(0.05),
        8.0 + jitter(5.0),
    );
    let right = e(
        1.0,
        0.32 + jitter(0.03),
        0.47,
        0.4,
        0.0 + jitter(0.05),
        -8.0 + jitter(5.0),
    );
    let heart = e(
        1.0,
        0.22 + jitter(0.03),
        0.2,
        -0.08,
        -0.05 + jitter(0.05),
        30.0,
    );
    let spine = e(1.0, 0.09, 0.09, 0.0, -0.5 + jitter(0.03), 0.0);
    let phase = jitter(3.0);
    finish(w, h, 2.5, seed, move |u, v| {
        if !body.contains(u, v) {
            return 12.0;
        }
        if spine.contains(u, v) {
            return 235.0;
        }
        if heart.contains(u, v) {
            return 170.0 + 10.0 * v;
        }
        if left.contains(u, v) || right.contains(u, v) {
            let vessels = (14.0 * u + phase).sin() * (11.0 * v).cos();
            return 45.0 + 25.0 * vessels.max(0.0).powi(3);
        }
        125.0 - 25.0 * v + 10.0 * (u * u)
    })
}

/// Smooth superposition of Gaussian blobs.
pub fn blobs(w: usize, h: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blobs: Vec<(f64, f64, f64, f64)> = (0..9)
        .map(|_| {
            (
                rng.random_range(-0.9..0.9),
                rng.random_range(-0.9..0.9),
                rng.random_range(0.08..0.35),
                rng.random_range(-120.0..160.0),
            )
        })
        .collect();
    finish(w, h, 2.0, seed.wrapping_add(1), move |u, v| {
        let s: f64 = blobs
            .iter()
            .map(|&(cx, cy, r, a)| {
                a * (-((u - cx).powi(2) + (v - cy).powi(2)) / (2.0 * r * r)).exp()
            })
            .sum();
        100.0 + s
    })
}

/// Low-frequency wave field, the kind of shading seen in MR bias fields.
pub fn waves(w: usize, h: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let waves: Vec<(f64, f64, f64, f64)> = (0..5)
        .map(|_| {
            (
                rng.random_range(-6.0..6.0),
                rng.random_range(-6.0..6.0),
                rng.random_range(0.0..std::f64::consts::TAU),
                rng.random_range(15.0..45.0),
            )
        })
        .collect();
    finish(w, h, 2.0, seed.wrapping_add(1), move |u, v| {
        let s: f64 = waves
            .iter()
            .map(|&(fx, fy, ph, a)| a * (fx * u + fy * v + ph).cos())
            .sum();
        128.0 + s
    })
}

/// Concentric tissue layers around an off-center lesion.
pub fn rings(w: usize, h: usize, seed: u64) -> GrayImage {
    let lesion = e(1.0, 0.12, 0.08, 0.3, 0.25, 25.0);
    finish(w, h, 3.0, seed, move |u, v| {
        let r = (u * u + v * v).sqrt();
        if lesion.contains(u, v) {
            return 220.0;
        }
        match r {
            r if r > 0.95 => 20.0,
            r if r > 0.8 => 200.0,
            r if r > 0.45 => 110.0 + 40.0 * (r - 0.45),
            _ => 150.0 - 60.0 * r,
        }
    })
}

/// Five distinct natural-like test images.
pub fn natural_set(w: usize, h: usize) -> Vec<(&'static str, GrayImage)> {
    vec![
        ("head_phantom", head_phantom(w, h, 1)),
        ("thorax", thorax(w, h, 1)),
        ("blobs", blobs(w, h, 2)),
        ("waves", waves(w, h, 3)),
        ("rings", rings(w, h, 4)),
    ]
}

/// Looks a generator up by name.
pub fn by_name(name: &str, w: usize, h: usize, seed: u64) -> Option<GrayImage> {
    Some(match name {
        "head_phantom" | "phantom" => head_phantom(w, h, seed),
        "thorax" => thorax(w, h, seed),
        "blobs" => blobs(w, h, seed),
        "waves" => waves(w, h, seed),
        "rings" => rings(w, h, seed),
        _ => return None,
    })
}

pub const NAMES: [&str; 5] = ["head_phantom", "thorax", "blobs", "waves", "rings"];
