//! Logistic-map keystreams and the hierarchical key.
//!
//! Every real is an IEEE-754 binary64 and the recurrence is always evaluated
//! as `(x * (1 - x)) * mu`, so the same key yields the same symbols on every
//! platform.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// Iterations discarded before a stream emits its first value.
pub const DEFAULT_BURN_IN: usize = 1000;

/// Exclusive lower bound of the control parameter (onset of chaos).
pub const MU_MIN: f64 = 3.57;
pub const MU_MAX: f64 = 4.0;

/// Serialized size of one sub-key.
pub const SUBKEY_BYTES: usize = 32;
/// Serialized size of a full key.
pub const KEY_BYTES: usize = 3 * SUBKEY_BYTES;

/// Key used throughout the published experiments, in file order.
pub const TEST_KEY_VALUES: [f64; 12] = [
    0.45, 3.801, 0.4003, 3.6701, // contour
    0.25, 3.8, 0.4, 3.67, // region
    0.51, 3.805, 0.401, 3.77, // mask
];

#[inline(always)]
fn step(x: f64, mu: f64) -> f64 {
    (x * (1.0 - x)) * mu
}

/// One application of the logistic map, `mu * x * (1 - x)`.
pub fn logistic_step(x: f64, mu: f64) -> Result<f64> {
    if !(x.is_finite() && (0.0..=1.0).contains(&x)) {
        return Err(Error::Domain {
            what: "x",
            value: x,
            range: "[0, 1]",
        });
    }
    if !(mu.is_finite() && mu > 0.0 && mu <= MU_MAX) {
        return Err(Error::Domain {
            what: "mu",
            value: mu,
            range: "(0, 4]",
        });
    }
    Ok(step(x, mu))
}

fn check_x(x: f64) -> bool {
    x.is_finite() && x > 0.0 && x < 1.0
}

fn check_mu(mu: f64) -> bool {
    mu.is_finite() && mu > MU_MIN && mu <= MU_MAX
}

/// Deterministic logistic-map trajectory.
///
/// The stream owns its state; cloning forks an identical copy.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosStream {
    x: f64,
    mu: f64,
    emitted: u64,
}

impl ChaosStream {
    /// Starts a stream at `x0` and discards `burn_in` iterations.
    pub fn new(x0: f64, mu: f64, burn_in: usize) -> Result<Self> {
        if !check_x(x0) {
            return Err(Error::Domain {
                what: "x0",
                value: x0,
                range: "(0, 1)",
            });
        }
        if !check_mu(mu) {
            return Err(Error::Domain {
                what: "mu",
                value: mu,
                range: "(3.57, 4]",
            });
        }
        let mut x = x0;
        for _ in 0..burn_in {
            x = step(x, mu);
        }
        Ok(Self { x, mu, emitted: 0 })
    }

    /// Advances one step and returns the new state.
    #[inline]
    pub fn next_value(&mut self) -> f64 {
        self.x = step(self.x, self.mu);
        self.emitted += 1;
        self.x
    }

    /// Advances one step and quantizes the new state to `[0, alphabet)`.
    #[inline]
    pub fn next_symbol(&mut self, alphabet: usize) -> usize {
        debug_assert!(alphabet >= 2);
        let x = self.next_value();
        // x == 1.0 would land one past the end.
        ((x * alphabet as f64) as usize).min(alphabet - 1)
    }

    pub fn state(&self) -> f64 {
        self.x
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }
}

/// Names one of the four reals of a sub-key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubKeyField {
    X0,
    Mu0,
    X0Xor,
    Mu0Xor,
}

impl SubKeyField {
    pub const ALL: [SubKeyField; 4] = [Self::X0, Self::Mu0, Self::X0Xor, Self::Mu0Xor];

    pub fn name(self) -> &'static str {
        match self {
            Self::X0 => "x0",
            Self::Mu0 => "mu0",
            Self::X0Xor => "x0_xor",
            Self::Mu0Xor => "mu0_xor",
        }
    }

    fn is_mu(self) -> bool {
        matches!(self, Self::Mu0 | Self::Mu0Xor)
    }
}

impl fmt::Display for SubKeyField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters of one sub-cryptosystem: the LUT stream `(x0, mu0)` and the
/// masking stream `(x0_xor, mu0_xor)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubKey {
    values: [f64; 4],
}

impl SubKey {
    pub fn new(x0: f64, mu0: f64, x0_xor: f64, mu0_xor: f64) -> Result<Self> {
        Self::from_array([x0, mu0, x0_xor, mu0_xor], "")
    }

    fn from_array(values: [f64; 4], prefix: &str) -> Result<Self> {
        for (field, &value) in SubKeyField::ALL.iter().zip(&values) {
            let (ok, range) = if field.is_mu() {
                (check_mu(value), "(3.57, 4]")
            } else {
                (check_x(value), "(0, 1)")
            };
            if !ok {
                return Err(Error::KeyRange {
                    field: format!("{prefix}{field}"),
                    value,
                    range,
                });
            }
        }
        Ok(Self { values })
    }

    pub fn x0(&self) -> f64 {
        self.values[0]
    }

    pub fn mu0(&self) -> f64 {
        self.values[1]
    }

    pub fn x0_xor(&self) -> f64 {
        self.values[2]
    }

    pub fn mu0_xor(&self) -> f64 {
        self.values[3]
    }

    pub fn get(&self, field: SubKeyField) -> f64 {
        self.values[field as usize]
    }

    /// Copy of this sub-key with `epsilon` added to one field.
    pub fn perturbed(&self, field: SubKeyField, epsilon: f64) -> Result<Self> {
        let mut values = self.values;
        values[field as usize] += epsilon;
        Self::from_array(values, "")
    }

    /// Stream driving the look-up table.
    pub fn lut_stream(&self, burn_in: usize) -> ChaosStream {
        ChaosStream::new(self.x0(), self.mu0(), burn_in).expect("validated sub-key")
    }

    /// Stream producing the XOR mask.
    pub fn xor_stream(&self, burn_in: usize) -> ChaosStream {
        ChaosStream::new(self.x0_xor(), self.mu0_xor(), burn_in).expect("validated sub-key")
    }

    pub fn to_bytes(&self) -> [u8; SUBKEY_BYTES] {
        let mut out = [0u8; SUBKEY_BYTES];
        for (chunk, v) in out.chunks_exact_mut(8).zip(&self.values) {
            chunk.copy_from_slice(&v.to_le_bytes());
        }
        out
    }

    /// Draws a sub-key uniformly from the valid parameter box.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut x = || loop {
            let v: f64 = rng.random();
            if check_x(v) {
                break v;
            }
        };
        let (a, b) = (x(), x());
        let mut mu = || loop {
            let v = rng.random_range(MU_MIN..=MU_MAX);
            if check_mu(v) {
                break v;
            }
        };
        let (c, d) = (mu(), mu());
        Self {
            values: [a, c, b, d],
        }
    }
}

/// Which sub-cryptosystem a sub-key drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubKeyId {
    /// Dilated-edge (contour) pixels.
    Contour,
    /// Homogeneous (region) pixels.
    Region,
    /// The edge mask carried in the LSB plane.
    Mask,
}

impl SubKeyId {
    pub const ALL: [SubKeyId; 3] = [Self::Contour, Self::Region, Self::Mask];

    pub fn label(self) -> &'static str {
        match self {
            Self::Contour => "sk1",
            Self::Region => "sk2",
            Self::Mask => "sk3",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for SubKeyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Full hierarchical key: contour, region and mask sub-keys.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Key {
    sub: [SubKey; 3],
}

impl Key {
    pub fn new(sk1: SubKey, sk2: SubKey, sk3: SubKey) -> Self {
        Self {
            sub: [sk1, sk2, sk3],
        }
    }

    /// The key listed with the published experiments.
    pub fn test_key() -> Self {
        Self::from_values(&TEST_KEY_VALUES).expect("test key is valid")
    }

    /// Builds a key from twelve reals in file order.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.len() != 12 {
            return Err(Error::KeyValueCount {
                expected: 12,
                actual: values.len(),
            });
        }
        let mut sub = [SubKey { values: [0.5; 4] }; 3];
        for (i, id) in SubKeyId::ALL.iter().enumerate() {
            let chunk: [f64; 4] = values[4 * i..4 * i + 4].try_into().unwrap();
            sub[i] = SubKey::from_array(chunk, &format!("{id}."))?;
        }
        Ok(Self { sub })
    }

    pub fn to_values(&self) -> [f64; 12] {
        let mut out = [0.0; 12];
        for (i, sk) in self.sub.iter().enumerate() {
            out[4 * i..4 * i + 4].copy_from_slice(&sk.values);
        }
        out
    }

    /// Parses the 96-byte key file: twelve little-endian binary64 values.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() != KEY_BYTES {
            return Err(Error::KeyLength {
                expected: KEY_BYTES,
                actual: bytes.len(),
            });
        }
        let values: Vec<f64> = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Self::from_values(&values)
    }

    pub fn to_bytes(&self) -> [u8; KEY_BYTES] {
        let mut out = [0u8; KEY_BYTES];
        for (chunk, sk) in out.chunks_exact_mut(SUBKEY_BYTES).zip(&self.sub) {
            chunk.copy_from_slice(&sk.to_bytes());
        }
        out
    }

    pub fn sk1(&self) -> &SubKey {
        &self.sub[0]
    }

    pub fn sk2(&self) -> &SubKey {
        &self.sub[1]
    }

    pub fn sk3(&self) -> &SubKey {
        &self.sub[2]
    }

    pub fn sub_key(&self, id: SubKeyId) -> &SubKey {
        &self.sub[id.index()]
    }

    /// Copy of this key with one field of one sub-key shifted by `epsilon`.
    pub fn perturbed(&self, id: SubKeyId, field: SubKeyField, epsilon: f64) -> Result<Self> {
        let mut sub = self.sub;
        sub[id.index()] = self.sub[id.index()]
            .perturbed(field, epsilon)
            .map_err(|e| match e {
                Error::KeyRange { value, range, .. } => Error::KeyRange {
                    field: format!("{id}.{field}"),
                    value,
                    range,
                },
                other => other,
            })?;
        Ok(Self { sub })
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::new(
            SubKey::random(rng),
            SubKey::random(rng),
            SubKey::random(rng),
        )
    }

    /// Size of the key space in bits, counting every binary64 pattern.
    pub const fn key_space_bits() -> u32 {
        (KEY_BYTES * 8) as u32
    }
}
