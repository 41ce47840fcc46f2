//! Hierarchical encryption of one grayscale image under three sub-keys.
//!
//! Layout of a cryptogram, pixel by pixel:
//!
//! * bits 1-7: encrypted content. Dilated-edge (contour) pixels are keyed by
//!   `sk1`, the remaining (region) pixels by `sk2`.
//! * bit 0: the edge mask, encrypted under `sk3`.
//!
//! Content goes through two layers:
//!
//! 1. Each subset runs through its own LUT cipher in ascending raster order,
//!    chaining on its own ciphertext.
//! 2. Both subsets are walked together in a public order that starts at the
//!    last pixel of each subset and alternates between them. Every symbol is
//!    re-enciphered by the same sub-cipher with feedback folded from all
//!    earlier final ciphertext symbols of that walk.
//!
//! Layer 1 carries a plaintext change to the end of its subset, and layer 2
//! carries it from there over the whole image. Layer 2 feedback only reads
//! final ciphertext, so each subset still decrypts with its own sub-key.
//!
//! The mask bits are then enciphered in raster order; their feedback also
//! folds in the parity of the content ciphertext at the same pixel.
//!
//! The plaintext's own bit 0 is dropped. A decrypted image carries the edge
//! mask in bit 0 as a watermark.

use std::fmt;
use std::str::FromStr;

use crate::chaos::{Key, SubKey, SubKeyId};
use crate::error::{Error, Result};
use crate::lut_cipher::{decrypt_sequence, Alphabet, CipherState};
use crate::partition::{edge_mask, merge_planes, split_planes, CannyParams, EdgeMask, GrayImage};

/// An encrypted image. Same dimensions as its plaintext.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cryptogram(GrayImage);

impl Cryptogram {
    /// Wraps an image read back from storage.
    pub fn from_image(image: GrayImage) -> Self {
        Self(image)
    }

    pub fn image(&self) -> &GrayImage {
        &self.0
    }

    pub fn into_image(self) -> GrayImage {
        self.0
    }
}

/// Which sub-keys a recipient holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AccessRights {
    pub sk1: bool,
    pub sk2: bool,
    pub sk3: bool,
}

impl AccessRights {
    pub const FULL: AccessRights = AccessRights {
        sk1: true,
        sk2: true,
        sk3: true,
    };

    pub fn holds(&self, id: SubKeyId) -> bool {
        match id {
            SubKeyId::Contour => self.sk1,
            SubKeyId::Region => self.sk2,
            SubKeyId::Mask => self.sk3,
        }
    }
}

impl FromStr for AccessRights {
    type Err = String;

    /// Parses a comma-separated list such as `sk2,sk3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut r = AccessRights {
            sk1: false,
            sk2: false,
            sk3: false,
        };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.to_ascii_lowercase().as_str() {
                "sk1" => r.sk1 = true,
                "sk2" => r.sk2 = true,
                "sk3" => r.sk3 = true,
                other => {
                    return Err(format!(
                        "unknown sub-key `{other}` (expected sk1, sk2 or sk3)"
                    ))
                }
            }
        }
        Ok(r)
    }
}

impl fmt::Display for AccessRights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let held: Vec<&str> = SubKeyId::ALL
            .iter()
            .filter(|id| self.holds(**id))
            .map(|id| id.label())
            .collect();
        f.write_str(&held.join(","))
    }
}

/// The sub-keys actually delivered to a recipient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialKey {
    pub sk1: Option<SubKey>,
    pub sk2: Option<SubKey>,
    pub sk3: Option<SubKey>,
}

impl PartialKey {
    pub fn full(key: &Key) -> Self {
        Self::restrict(key, AccessRights::FULL)
    }

    pub fn restrict(key: &Key, rights: AccessRights) -> Self {
        Self {
            sk1: rights.sk1.then(|| *key.sk1()),
            sk2: rights.sk2.then(|| *key.sk2()),
            sk3: rights.sk3.then(|| *key.sk3()),
        }
    }

    pub fn rights(&self) -> AccessRights {
        AccessRights {
            sk1: self.sk1.is_some(),
            sk2: self.sk2.is_some(),
            sk3: self.sk3.is_some(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Subset {
    Contour,
    Region,
}

/// Raster indices of each subset, ascending.
struct Layout {
    contour: Vec<usize>,
    region: Vec<usize>,
}

impl Layout {
    fn new(mask: &EdgeMask) -> Self {
        let (mut contour, mut region) = (Vec::new(), Vec::new());
        for (i, &edge) in mask.bits().iter().enumerate() {
            if edge {
                contour.push(i);
            } else {
                region.push(i);
            }
        }
        Self { contour, region }
    }

    fn indices(&self, s: Subset) -> &[usize] {
        match s {
            Subset::Contour => &self.contour,
            Subset::Region => &self.region,
        }
    }

    /// Public walk for the second layer: `(subset, rank within subset)`,
    /// alternating from the last element of each subset backwards.
    fn walk(&self) -> Vec<(Subset, usize)> {
        let (nc, nr) = (self.contour.len(), self.region.len());
        let mut out = Vec::with_capacity(nc + nr);
        for step in 0..nc.max(nr) {
            if step < nc {
                out.push((Subset::Contour, nc - 1 - step));
            }
            if step < nr {
                out.push((Subset::Region, nr - 1 - step));
            }
        }
        out
    }
}

/// Running digest of the final ciphertext seen so far on the public walk.
#[derive(Clone, Copy, Default)]
struct Chain(u64);

impl Chain {
    #[inline]
    fn absorb(&mut self, symbol: u8) {
        self.0 = (self.0.rotate_left(5) ^ symbol as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    }

    /// Seven-bit feedback taken from the top of the digest.
    #[inline]
    fn feedback(&self) -> u8 {
        (self.0 >> 57) as u8
    }
}

#[inline]
fn parity(v: u8) -> u8 {
    (v.count_ones() & 1) as u8
}

/// Computes the dilated Canny mask and encrypts.
pub fn encrypt_image(img: &GrayImage, key: &Key, params: &CannyParams) -> Result<Cryptogram> {
    let mask = edge_mask(img, params)?;
    encrypt_with_mask(img, key, &mask)
}

/// Encrypts with a precomputed mask.
pub fn encrypt_with_mask(img: &GrayImage, key: &Key, mask: &EdgeMask) -> Result<Cryptogram> {
    if mask.width() != img.width() || mask.height() != img.height() {
        return Err(Error::DimensionMismatch(
            img.width(),
            img.height(),
            mask.width(),
            mask.height(),
        ));
    }
    let (msb7, _) = split_planes(img);
    let layout = Layout::new(mask);

    // Layer 1, contour then region.
    let mut contour_state = CipherState::new(key.sk1(), Alphabet::SEVEN_BIT);
    let contour_inner = layout
        .contour
        .iter()
        .map(|&i| contour_state.encrypt_symbol(msb7[i]))
        .collect::<Result<Vec<u8>>>()?;
    let mut region_state = CipherState::new(key.sk2(), Alphabet::SEVEN_BIT);
    let region_inner = layout
        .region
        .iter()
        .map(|&i| region_state.encrypt_symbol(msb7[i]))
        .collect::<Result<Vec<u8>>>()?;

    // Layer 2: the same states continue their streams.
    let mut content = vec![0u8; msb7.len()];
    let mut chain = Chain::default();
    for (subset, rank) in layout.walk() {
        let (state, inner) = match subset {
            Subset::Contour => (&mut contour_state, &contour_inner),
            Subset::Region => (&mut region_state, &region_inner),
        };
        state.set_feedback(chain.feedback())?;
        let c = state.encrypt_symbol(inner[rank])?;
        content[layout.indices(subset)[rank]] = c;
        chain.absorb(c);
    }

    let mut mask_state = CipherState::new(key.sk3(), Alphabet::BINARY);
    let mut prev = 0u8;
    let mut lsb = Vec::with_capacity(content.len());
    for (&bit, &c) in mask.bits().iter().zip(&content) {
        mask_state.set_feedback(prev ^ parity(c))?;
        prev = mask_state.encrypt_symbol(bit as u8)?;
        lsb.push(prev);
    }

    Ok(Cryptogram(merge_planes(
        &content,
        &lsb,
        img.width(),
        img.height(),
    )?))
}

/// Decrypts the mask plane. Needs only `sk3` and the cryptogram.
pub fn recover_mask(c: &Cryptogram, sk3: &SubKey) -> Result<EdgeMask> {
    let (content, lsb) = split_planes(&c.0);
    let mut state = CipherState::new(sk3, Alphabet::BINARY);
    let mut prev = 0u8;
    let mut bits = Vec::with_capacity(lsb.len());
    for (&b, &v) in lsb.iter().zip(&content) {
        state.set_feedback(prev ^ parity(v))?;
        bits.push(state.decrypt_symbol(b)? == 1);
        prev = b;
    }
    EdgeMask::new(c.0.width(), c.0.height(), bits)
}

fn decrypt_subset(content: &[u8], layout: &Layout, subset: Subset, sk: &SubKey) -> Result<Vec<u8>> {
    let indices = layout.indices(subset);
    // Layer 2 keystream starts where layer 1 stopped.
    let mut state = CipherState::new(sk, Alphabet::SEVEN_BIT);
    state.advance(indices.len());
    let mut inner = vec![0u8; indices.len()];
    let mut chain = Chain::default();
    for (s, rank) in layout.walk() {
        let c = content[layout.indices(s)[rank]];
        if s == subset {
            state.set_feedback(chain.feedback())?;
            inner[rank] = state.decrypt_symbol(c)?;
        }
        chain.absorb(c);
    }
    decrypt_sequence(sk, &inner, Alphabet::SEVEN_BIT)
}

/// Full decryption: planes 1-7 of the plaintext plus the mask watermark.
pub fn decrypt_image(c: &Cryptogram, key: &Key) -> Result<GrayImage> {
    decrypt_partial(c, &PartialKey::full(key))
}

/// Decrypts the subsets whose sub-keys are held and leaves the others
/// enciphered in place. The mask sub-key is mandatory.
pub fn decrypt_partial(c: &Cryptogram, key: &PartialKey) -> Result<GrayImage> {
    let sk3 = key.sk3.as_ref().ok_or(Error::MissingMaskKey)?;
    let mask = recover_mask(c, sk3)?;
    let layout = Layout::new(&mask);
    let (content, _) = split_planes(&c.0);

    let mut out = content.clone();
    for (subset, sk) in [(Subset::Contour, &key.sk1), (Subset::Region, &key.sk2)] {
        if let Some(sk) = sk {
            let plain = decrypt_subset(&content, &layout, subset, sk)?;
            for (&i, v) in layout.indices(subset).iter().zip(plain) {
                out[i] = v;
            }
        }
    }
    let lsb: Vec<u8> = mask.bits().iter().map(|&b| b as u8).collect();
    merge_planes(&out, &lsb, c.0.width(), c.0.height())
}
