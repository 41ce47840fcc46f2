//! Known-plaintext keystream extraction.
//!
//! The attacker treats the cipher as a position-wise XOR: the keystream
//! estimate is `plain ^ cipher`, and it is XORed onto another cryptogram.
//! Ciphertext feedback makes the keystream message-dependent, so the
//! estimate only ever decrypts the pair it came from.

use serde::Serialize;

use super::metrics::{diff, DiffResult};
use crate::error::Result;
use crate::hierarchy::Cryptogram;
use crate::partition::GrayImage;

/// Per-pixel keystream recovered from one plaintext/ciphertext pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeystreamEstimate {
    pub stream: GrayImage,
}

impl KeystreamEstimate {
    pub fn extract(plain: &GrayImage, cipher: &GrayImage) -> Result<Self> {
        plain.same_dimensions(cipher)?;
        Ok(Self {
            stream: xor(plain, cipher),
        })
    }

    pub fn apply(&self, cipher: &GrayImage) -> Result<GrayImage> {
        self.stream.same_dimensions(cipher)?;
        Ok(xor(&self.stream, cipher))
    }
}

fn xor(a: &GrayImage, b: &GrayImage) -> GrayImage {
    let px = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(x, y)| x ^ y)
        .collect();
    GrayImage::new(a.width(), a.height(), px).expect("same dimensions")
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackOutcome {
    pub estimate: KeystreamEstimate,
    pub recovered: GrayImage,
    /// Recovered image against the target's true plaintext, when known.
    pub verdict: Option<DiffResult>,
}

/// Verdict threshold: recovered images differing from the truth in fewer
/// than this share of pixels count as a successful attack.
pub const SUCCESS_NPCR: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackReport {
    pub schema_version: u32,
    pub width: usize,
    pub height: usize,
    /// `npcr`/`uaci` of the recovered target against its true plaintext.
    pub verdict: Option<DiffResult>,
    pub attack_succeeded: Option<bool>,
}

impl AttackOutcome {
    pub fn succeeded(&self) -> Option<bool> {
        self.verdict.map(|v| v.npcr < SUCCESS_NPCR)
    }

    pub fn report(&self) -> AttackReport {
        AttackReport {
            schema_version: super::report::SCHEMA_VERSION,
            width: self.recovered.width(),
            height: self.recovered.height(),
            verdict: self.verdict,
            attack_succeeded: self.succeeded(),
        }
    }
}

pub fn keystream_attack(
    plain: &GrayImage,
    cipher: &Cryptogram,
    target: &Cryptogram,
    truth: Option<&GrayImage>,
) -> Result<AttackOutcome> {
    let estimate = KeystreamEstimate::extract(plain, cipher.image())?;
    let recovered = estimate.apply(target.image())?;
    let verdict = truth.map(|t| diff(&recovered, t)).transpose()?;
    Ok(AttackOutcome {
        estimate,
        recovered,
        verdict,
    })
}
