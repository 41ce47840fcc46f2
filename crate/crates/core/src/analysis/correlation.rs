use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::GrayImage;

/// Neighbor relation for adjacent-pixel pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `(x, y)` and `(x + 1, y)`.
    Horizontal,
    /// `(x, y)` and `(x, y + 1)`.
    Vertical,
    /// `(x, y)` and `(x + 1, y + 1)`.
    Diagonal,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Self::Horizontal, Self::Vertical, Self::Diagonal];

    fn offset(self) -> (usize, usize) {
        match self {
            Self::Horizontal => (1, 0),
            Self::Vertical => (0, 1),
            Self::Diagonal => (1, 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Horizontal => "horizontal",
            Self::Vertical => "vertical",
            Self::Diagonal => "diagonal",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "horizontal" | "h" => Ok(Self::Horizontal),
            "vertical" | "v" => Ok(Self::Vertical),
            "diagonal" | "d" => Ok(Self::Diagonal),
            _ => Err(format!("unknown direction `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrResult {
    pub direction: Direction,
    pub r: f64,
    pub pairs: Vec<(u8, u8)>,
}

/// Correlation coefficient with population (1/N) moments.
pub fn correlation_coefficient(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.is_empty() {
        return Err(Error::NotEnoughPairs {
            needed: 1,
            available: 0,
        });
    }
    let n = xs.len() as f64;
    let ex = xs.iter().sum::<f64>() / n;
    let ey = ys.iter().sum::<f64>() / n;
    let dx = xs.iter().map(|x| (x - ex).powi(2)).sum::<f64>() / n;
    let dy = ys.iter().map(|y| (y - ey).powi(2)).sum::<f64>() / n;
    let cov = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (x - ex) * (y - ey))
        .sum::<f64>()
        / n;
    if dx == 0.0 {
        return Err(Error::ZeroVariance("x"));
    }
    if dy == 0.0 {
        return Err(Error::ZeroVariance("y"));
    }
    Ok(cov / (dx.sqrt() * dy.sqrt()))
}

/// Samples `n_pairs` distinct adjacent pairs (seeded) and correlates them.
pub fn correlation(
    img: &GrayImage,
    direction: Direction,
    n_pairs: usize,
    seed: u64,
) -> Result<CorrResult> {
    let (ox, oy) = direction.offset();
    let (w, h) = (img.width(), img.height());
    let (cols, rows) = (w.saturating_sub(ox), h.saturating_sub(oy));
    let available = cols * rows;
    if available < n_pairs.max(1) {
        return Err(Error::NotEnoughPairs {
            needed: n_pairs.max(1),
            available,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(u8, u8)> = rand::seq::index::sample(&mut rng, available, n_pairs)
        .into_iter()
        .map(|k| {
            let (x, y) = (k % cols, k / cols);
            (img.get(x, y), img.get(x + ox, y + oy))
        })
        .collect();
    let xs: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1 as f64).collect();
    let r = correlation_coefficient(&xs, &ys)?;
    Ok(CorrResult {
        direction,
        r,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hand_example() {
        let r = correlation_coefficient(&[1.0, 2.0, 3.0, 4.0], &[2.0, 1.0, 4.0, 3.0]).unwrap();
        assert!((r - 0.6).abs() < 1e-12, "{r}");
    }

    #[test]
    fn perfect_correlations() {
        let xs: Vec<f64> = (0..50).map(|v| (v * 5) as f64).collect();
        let neg: Vec<f64> = xs.iter().map(|x| 255.0 - x).collect();
        assert!((correlation_coefficient(&xs, &xs).unwrap() - 1.0).abs() < 1e-12);
        assert!((correlation_coefficient(&xs, &neg).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_variance_is_an_error() {
        assert!(matches!(
            correlation_coefficient(&[3.0, 3.0], &[1.0, 2.0]),
            Err(Error::ZeroVariance("x"))
        ));
        let flat = GrayImage::filled(10, 10, 9).unwrap();
        assert!(correlation(&flat, Direction::Horizontal, 20, 0).is_err());
    }

    #[test]
    fn sampling_is_reproducible_and_adjacent() {
        let img = GrayImage::from_fn(30, 20, |x, y| (x * 8 + y) as u8).unwrap();
        let a = correlation(&img, Direction::Diagonal, 100, 42).unwrap();
        let b = correlation(&img, Direction::Diagonal, 100, 42).unwrap();
        assert_eq!(a, b);
        // Each diagonal neighbor is exactly 9 gray levels brighter.
        assert!(a.pairs.iter().all(|(x, y)| *y == x + 9));
        assert!((a.r - 1.0).abs() < 1e-12);
        assert!(matches!(
            correlation(&img, Direction::Vertical, 30 * 19 + 1, 0),
            Err(Error::NotEnoughPairs { .. })
        ));
        assert!(correlation(
            &GrayImage::filled(1, 5, 0).unwrap(),
            Direction::Horizontal,
            1,
            0
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn invariances(
            data in prop::collection::vec((0.0f64..255.0, 0.0f64..255.0), 3..60),
            scale in 0.1f64..10.0,
            shift in -100.0f64..100.0,
        ) {
            let xs: Vec<f64> = data.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = data.iter().map(|p| p.1).collect();
            let Ok(r) = correlation_coefficient(&xs, &ys) else { return Ok(()); };
            prop_assert!(r.abs() <= 1.0 + 1e-12);
            prop_assert!((correlation_coefficient(&ys, &xs).unwrap() - r).abs() < 1e-9);
            let ax: Vec<f64> = xs.iter().map(|x| scale * x + shift).collect();
            let ay: Vec<f64> = ys.iter().map(|y| scale * y - shift).collect();
            prop_assert!((correlation_coefficient(&ax, &ay).unwrap() - r).abs() < 1e-9);
            let ny: Vec<f64> = ys.iter().map(|y| -y).collect();
            prop_assert!((correlation_coefficient(&xs, &ny).unwrap() + r).abs() < 1e-9);
        }
    }
}
