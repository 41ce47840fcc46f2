//! Shared fixtures for the criterion benchmarks.

use hiercrypt::{synth, CannyParams, GrayImage, Key};

/// Square test image sizes exercised by the benchmarks.
pub const SIZES: [usize; 3] = [64, 128, 256];

pub fn phantom(side: usize) -> GrayImage {
    synth::head_phantom(side, side, 1)
}

pub fn key() -> Key {
    Key::test_key()
}

pub fn params() -> CannyParams {
    CannyParams::default()
}
