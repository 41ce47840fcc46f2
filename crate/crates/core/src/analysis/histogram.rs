use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::partition::GrayImage;

/// Bin counts and a chi-square test against the uniform distribution over
/// all bins.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub counts: Vec<u64>,
    pub chi_square: f64,
    pub p_value: f64,
}

impl Histogram {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        let chi_square = chi_square_uniform(&counts);
        let p_value = chi_square_p_value(chi_square, counts.len() - 1);
        Self {
            counts,
            chi_square,
            p_value,
        }
    }

    /// True when uniformity is not rejected at `significance`.
    pub fn is_uniform_at(&self, significance: f64) -> bool {
        self.p_value > significance
    }
}

/// 256-bin histogram of the pixel values.
pub fn histogram(img: &GrayImage) -> Histogram {
    let mut counts = vec![0u64; 256];
    for &p in img.pixels() {
        counts[p as usize] += 1;
    }
    Histogram::from_counts(counts)
}

/// 128-bin histogram of bit planes 1-7, the encrypted content of a
/// cryptogram.
pub fn content_histogram(img: &GrayImage) -> Histogram {
    let mut counts = vec![0u64; 128];
    for &p in img.pixels() {
        counts[(p >> 1) as usize] += 1;
    }
    Histogram::from_counts(counts)
}

/// Pearson statistic `sum (o - e)^2 / e` with `e = total / bins`.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 || counts.is_empty() {
        return 0.0;
    }
    let expected = total as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&o| (o as f64 - expected).powi(2) / expected)
        .sum()
}

/// Upper-tail probability of the chi-square distribution.
pub fn chi_square_p_value(statistic: f64, dof: usize) -> f64 {
    if dof == 0 {
        return 1.0;
    }
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    1.0 - dist.cdf(statistic)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_image_is_maximal() {
        let img = GrayImage::filled(8, 8, 17).unwrap();
        let h = histogram(&img);
        assert_eq!(h.counts[17], 64);
        assert_eq!(h.counts.iter().sum::<u64>(), 64);
        // All mass in one of k bins gives N * (k - 1).
        assert!((h.chi_square - 64.0 * 255.0).abs() < 1e-9);
        assert!(h.p_value < 1e-12);
        assert!(!h.is_uniform_at(0.01));
    }

    #[test]
    fn equidistributed_image_is_zero() {
        let img = GrayImage::from_fn(256, 2, |x, _| x as u8).unwrap();
        let h = histogram(&img);
        assert_eq!(h.chi_square, 0.0);
        assert!((h.p_value - 1.0).abs() < 1e-12);
        assert!(h.is_uniform_at(0.01));
        assert_eq!(content_histogram(&img).chi_square, 0.0);
    }

    #[test]
    fn known_p_value() {
        // Upper 1% point of chi-square with 127 degrees of freedom.
        let p = chi_square_p_value(166.987, 127);
        assert!((p - 0.01).abs() < 2e-4, "{p}");
    }
}
