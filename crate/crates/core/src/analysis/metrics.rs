use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chaos::Key;
use crate::error::{Error, Result};
use crate::hierarchy::encrypt_image;
use crate::partition::{CannyParams, GrayImage};

/// NPCR and UACI of two images, both in percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiffResult {
    pub npcr: f64,
    pub uaci: f64,
}

/// Percentage of pixel positions at which the two images differ.
pub fn npcr(c1: &GrayImage, c2: &GrayImage) -> Result<f64> {
    c1.same_dimensions(c2)?;
    Ok(npcr_slices(c1.pixels(), c2.pixels()))
}

/// Mean absolute difference normalized by 255, in percent.
pub fn uaci(c1: &GrayImage, c2: &GrayImage) -> Result<f64> {
    c1.same_dimensions(c2)?;
    let sum: u64 = c1
        .pixels()
        .iter()
        .zip(c2.pixels())
        .map(|(&a, &b)| a.abs_diff(b) as u64)
        .sum();
    Ok(100.0 * sum as f64 / (255.0 * c1.len() as f64))
}

pub fn diff(c1: &GrayImage, c2: &GrayImage) -> Result<DiffResult> {
    Ok(DiffResult {
        npcr: npcr(c1, c2)?,
        uaci: uaci(c1, c2)?,
    })
}

/// NPCR over two equally long symbol sequences; 0 for empty input.
pub fn npcr_slices(a: &[u8], b: &[u8]) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let changed = a.iter().zip(b).filter(|(x, y)| x != y).count();
    100.0 * changed as f64 / a.len() as f64
}

/// Peak signal-to-noise ratio in dB; infinite for identical images.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.same_dimensions(b)?;
    let se: f64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| (x as f64 - y as f64).powi(2))
        .sum();
    let mse = se / a.len() as f64;
    Ok(if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (255.0 * 255.0 / mse).log10()
    })
}

/// One plaintext bit to toggle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BitFlip {
    pub index: usize,
    pub bit: u8,
}

impl BitFlip {
    pub fn apply(&self, img: &GrayImage) -> Result<GrayImage> {
        if self.index >= img.len() || self.bit > 7 {
            return Err(Error::Flip {
                index: self.index,
                bit: self.bit,
            });
        }
        let mut out = img.clone();
        out.pixels_mut()[self.index] ^= 1 << self.bit;
        Ok(out)
    }
}

/// Seeded flip locations on bit planes 1-7. Plane 0 is not encrypted (it is
/// replaced by the mask), so flipping it only matters through the detector.
pub fn random_flips(img: &GrayImage, count: usize, seed: u64) -> Vec<BitFlip> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| BitFlip {
            index: rng.random_range(0..img.len()),
            bit: rng.random_range(1..=7),
        })
        .collect()
}

/// Encrypts the image and its one-bit-flipped twin and compares the
/// cryptograms.
pub fn differential_test(
    img: &GrayImage,
    key: &Key,
    params: &CannyParams,
    flip: BitFlip,
) -> Result<DiffResult> {
    let twin = flip.apply(img)?;
    let c1 = encrypt_image(img, key, params)?;
    let c2 = encrypt_image(&twin, key, params)?;
    diff(c1.image(), c2.image())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn img(w: usize, h: usize, px: Vec<u8>) -> GrayImage {
        GrayImage::new(w, h, px).unwrap()
    }

    #[test]
    fn trivial_values() {
        let a = GrayImage::filled(4, 4, 0).unwrap();
        let b = GrayImage::filled(4, 4, 255).unwrap();
        assert_eq!(npcr(&a, &a).unwrap(), 0.0);
        assert_eq!(uaci(&a, &a).unwrap(), 0.0);
        assert_eq!(npcr(&a, &b).unwrap(), 100.0);
        assert_eq!(uaci(&a, &b).unwrap(), 100.0);
        assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);
        assert_eq!(psnr(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn dimension_mismatch() {
        let a = GrayImage::filled(4, 4, 0).unwrap();
        let b = GrayImage::filled(2, 8, 0).unwrap();
        assert!(matches!(
            npcr(&a, &b),
            Err(Error::DimensionMismatch(4, 4, 2, 8))
        ));
        assert!(uaci(&a, &b).is_err());
    }

    #[test]
    fn flips_validate_and_toggle() {
        let a = GrayImage::filled(2, 2, 0b1000_0000).unwrap();
        let f = BitFlip { index: 3, bit: 7 }.apply(&a).unwrap();
        assert_eq!(f.pixels(), &[128, 128, 128, 0]);
        assert!(BitFlip { index: 4, bit: 0 }.apply(&a).is_err());
        assert!(BitFlip { index: 0, bit: 8 }.apply(&a).is_err());
        for flip in random_flips(&a, 50, 1) {
            assert!((1..=7).contains(&flip.bit) && flip.index < 4);
        }
    }

    #[test]
    fn zero_difference() {
        let a = img(2, 1, vec![3, 9]);
        assert_eq!(
            diff(&a, &a.clone()).unwrap(),
            DiffResult {
                npcr: 0.0,
                uaci: 0.0
            }
        );
    }

    fn pair() -> impl Strategy<Value = (GrayImage, GrayImage, Vec<usize>)> {
        (1usize..10, 1usize..10).prop_flat_map(|(w, h)| {
            (
                prop::collection::vec(any::<u8>(), w * h),
                prop::collection::vec(any::<u8>(), w * h),
                Just((0..w * h).collect::<Vec<usize>>()).prop_shuffle(),
            )
                .prop_map(move |(a, b, perm)| (img(w, h, a), img(w, h, b), perm))
        })
    }

    proptest! {
        #[test]
        fn symmetric_bounded_and_permutation_invariant((a, b, perm) in pair()) {
            let ab = diff(&a, &b).unwrap();
            let ba = diff(&b, &a).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!((0.0..=100.0).contains(&ab.npcr));
            prop_assert!((0.0..=100.0).contains(&ab.uaci));

            let shuffle = |m: &GrayImage| img(m.width(), m.height(), perm.iter().map(|&i| m.pixels()[i]).collect());
            let p = diff(&shuffle(&a), &shuffle(&b)).unwrap();
            prop_assert!((p.npcr - ab.npcr).abs() < 1e-9);
            prop_assert!((p.uaci - ab.uaci).abs() < 1e-9);
        }
    }
}
