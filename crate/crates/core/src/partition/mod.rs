//! Image model, bit planes and the contour/region split.

mod canny;
mod image;
mod morph;

pub use self::canny::{canny, CannyParams};
pub use self::image::{EdgeMask, GrayImage};
pub use self::morph::dilate;

use crate::error::{Error, Result};

/// Splits every pixel into its seven high bits and its low bit.
pub fn split_planes(img: &GrayImage) -> (Vec<u8>, Vec<u8>) {
    img.pixels().iter().map(|&p| (p >> 1, p & 1)).unzip()
}

/// Inverse of [`split_planes`].
pub fn merge_planes(msb7: &[u8], lsb: &[u8], width: usize, height: usize) -> Result<GrayImage> {
    if msb7.len() != lsb.len() {
        return Err(Error::LengthMismatch {
            left: msb7.len(),
            right: lsb.len(),
        });
    }
    let pixels = msb7
        .iter()
        .zip(lsb)
        .map(|(&hi, &lo)| (hi << 1) | (lo & 1))
        .collect();
    GrayImage::new(width, height, pixels)
}

/// Dilated Canny mask of the full 8-bit image.
pub fn edge_mask(img: &GrayImage, params: &CannyParams) -> Result<EdgeMask> {
    let edges = canny(img, params.sigma, params.low, params.high)?;
    Ok(dilate(&edges, params.radius))
}

/// Content values split by the mask, each list in ascending raster order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Partition {
    pub contour: Vec<(usize, u8)>,
    pub region: Vec<(usize, u8)>,
}

impl Partition {
    pub fn contour_values(&self) -> Vec<u8> {
        self.contour.iter().map(|&(_, v)| v).collect()
    }

    pub fn region_values(&self) -> Vec<u8> {
        self.region.iter().map(|&(_, v)| v).collect()
    }
}

pub fn partition_content(msb7: &[u8], mask: &EdgeMask) -> Result<Partition> {
    if msb7.len() != mask.bits().len() {
        return Err(Error::LengthMismatch {
            left: msb7.len(),
            right: mask.bits().len(),
        });
    }
    let mut p = Partition::default();
    for (i, (&v, &edge)) in msb7.iter().zip(mask.bits()).enumerate() {
        if edge {
            p.contour.push((i, v));
        } else {
            p.region.push((i, v));
        }
    }
    Ok(p)
}

/// Reassembles the content; every index must appear exactly once.
pub fn unpartition(p: &Partition, width: usize, height: usize) -> Result<Vec<u8>> {
    let n = width * height;
    let mut out = vec![0u8; n];
    let mut seen = vec![false; n];
    for &(i, v) in p.contour.iter().chain(&p.region) {
        match seen.get_mut(i) {
            None => {
                return Err(Error::Coverage(format!(
                    "index {i} is outside {width}x{height}"
                )))
            }
            Some(true) => return Err(Error::Coverage(format!("index {i} appears twice"))),
            Some(s) => *s = true,
        }
        out[i] = v;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::Coverage(format!("index {missing} is missing")));
    }
    Ok(out)
}
