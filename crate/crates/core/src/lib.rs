//! Hierarchical chaotic image encryption.
//!
//! A grayscale image is split by a dilated Canny edge mask into contour and
//! region pixels. Each subset is enciphered on bit planes 1-7 by its own
//! logistic-map look-up-table cipher, and the mask itself is enciphered into
//! bit plane 0 under a third sub-key. Holding a subset of the three sub-keys
//! grants access to the matching subset of the image.
//!
//! ```
//! use hiercrypt::{decrypt_image, encrypt_image, synth, CannyParams, Key};
//!
//! let img = synth::head_phantom(64, 64, 1);
//! let key = Key::test_key();
//! let cryptogram = encrypt_image(&img, &key, &CannyParams::default()).unwrap();
//! let plain = decrypt_image(&cryptogram, &key).unwrap();
//! assert_eq!(plain.upper_planes(), img.upper_planes());
//! ```

pub mod analysis;
pub mod chaos;
pub mod error;
pub mod hierarchy;
pub mod io;
pub mod lut_cipher;
pub mod partition;
pub mod synth;

pub use chaos::{ChaosStream, Key, SubKey, SubKeyField, SubKeyId};
pub use error::{Error, ErrorKind, Result};
pub use hierarchy::{
    decrypt_image, decrypt_partial, encrypt_image, encrypt_with_mask, recover_mask, AccessRights,
    Cryptogram, PartialKey,
};
pub use lut_cipher::{Alphabet, CipherState, Lut};
pub use partition::{CannyParams, EdgeMask, GrayImage};
