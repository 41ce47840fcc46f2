//! Wrong-key decryption sweeps.
//!
//! The cryptogram is produced with the true key and decrypted with keys that
//! differ in one field of one sub-key. Damage is measured per subset of the
//! encryption-time mask against the true plaintext.

use serde::Serialize;

use super::metrics::{diff, npcr_slices};
use crate::chaos::{Key, SubKeyField, SubKeyId};
use crate::error::Result;
use crate::hierarchy::{decrypt_image, encrypt_with_mask};
use crate::partition::{edge_mask, CannyParams, EdgeMask, GrayImage};

/// One perturbation: add `epsilon` to `field` of sub-key `sub_key`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyDelta {
    pub sub_key: SubKeyId,
    pub field: SubKeyField,
    pub epsilon: f64,
}

impl KeyDelta {
    /// `x0` of each sub-key in turn shifted by `epsilon`.
    pub fn x0_sweep(epsilon: f64) -> Vec<KeyDelta> {
        SubKeyId::ALL
            .iter()
            .map(|&sub_key| KeyDelta {
                sub_key,
                field: SubKeyField::X0,
                epsilon,
            })
            .collect()
    }

    /// Every field of every sub-key shifted by `epsilon`.
    pub fn full_sweep(epsilon: f64) -> Vec<KeyDelta> {
        SubKeyId::ALL
            .iter()
            .flat_map(|&sub_key| {
                SubKeyField::ALL.iter().map(move |&field| KeyDelta {
                    sub_key,
                    field,
                    epsilon,
                })
            })
            .collect()
    }
}

/// Damage done by one wrong key, all values in percent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityRow {
    pub sub_key: String,
    pub field: String,
    pub epsilon: f64,
    /// Contour pixels whose planes 1-7 differ from the plaintext.
    pub npcr_contour: f64,
    /// Region pixels whose planes 1-7 differ from the plaintext.
    pub npcr_region: f64,
    /// Pixels whose recovered mask bit is wrong.
    pub mask_error: f64,
    /// All pixels, planes 1-7.
    pub npcr_planes_1_7: f64,
    /// Full 8-bit comparison with the true-key decryption.
    pub npcr: f64,
    pub uaci: f64,
}

fn subset_npcr(truth: &[u8], got: &[u8], mask: &EdgeMask, contour: bool) -> f64 {
    let (a, b): (Vec<u8>, Vec<u8>) = truth
        .iter()
        .zip(got)
        .zip(mask.bits())
        .filter(|(_, &m)| m == contour)
        .map(|((&t, &g), _)| (t, g))
        .unzip();
    npcr_slices(&a, &b)
}

pub fn key_sensitivity_suite(
    img: &GrayImage,
    key: &Key,
    params: &CannyParams,
    deltas: &[KeyDelta],
) -> Result<Vec<SensitivityRow>> {
    let mask = edge_mask(img, params)?;
    let cryptogram = encrypt_with_mask(img, key, &mask)?;
    let reference = decrypt_image(&cryptogram, key)?;
    let truth = img.upper_planes();
    let mask_bits: Vec<u8> = mask.bits().iter().map(|&b| b as u8).collect();

    deltas
        .iter()
        .map(|d| {
            let wrong = key.perturbed(d.sub_key, d.field, d.epsilon)?;
            let out = decrypt_image(&cryptogram, &wrong)?;
            let got = out.upper_planes();
            let lsb: Vec<u8> = out.pixels().iter().map(|p| p & 1).collect();
            let full = diff(&reference, &out)?;
            Ok(SensitivityRow {
                sub_key: d.sub_key.label().to_string(),
                field: d.field.name().to_string(),
                epsilon: d.epsilon,
                npcr_contour: subset_npcr(&truth, &got, &mask, true),
                npcr_region: subset_npcr(&truth, &got, &mask, false),
                mask_error: npcr_slices(&mask_bits, &lsb),
                npcr_planes_1_7: npcr_slices(&truth, &got),
                npcr: full.npcr,
                uaci: full.uaci,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    #[test]
    fn zero_epsilon_is_perfect() {
        let img = synth::head_phantom(48, 48, 1);
        let rows = key_sensitivity_suite(
            &img,
            &Key::test_key(),
            &CannyParams::default(),
            &KeyDelta::full_sweep(0.0),
        )
        .unwrap();
        assert_eq!(rows.len(), 12);
        for r in rows {
            assert_eq!(r.npcr_planes_1_7, 0.0);
            assert_eq!(r.mask_error, 0.0);
            assert_eq!(r.npcr, 0.0);
        }
    }

    #[test]
    fn contour_key_only_touches_contour() {
        let img = synth::thorax(64, 64, 1);
        let rows = key_sensitivity_suite(
            &img,
            &Key::test_key(),
            &CannyParams::default(),
            &KeyDelta::x0_sweep(1e-10)[..1],
        )
        .unwrap();
        let r = &rows[0];
        assert_eq!((r.sub_key.as_str(), r.field.as_str()), ("sk1", "x0"));
        assert_eq!(r.npcr_region, 0.0);
        assert_eq!(r.mask_error, 0.0);
        assert!(r.npcr_contour > 95.0, "{r:?}");
    }

    #[test]
    fn out_of_range_perturbation_is_reported() {
        let img = synth::blobs(16, 16, 1);
        let bad = KeyDelta {
            sub_key: SubKeyId::Region,
            field: SubKeyField::X0,
            epsilon: 2.0,
        };
        assert!(
            key_sensitivity_suite(&img, &Key::test_key(), &CannyParams::default(), &[bad]).is_err()
        );
    }
}
