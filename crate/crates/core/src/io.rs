//! Grayscale PGM (P5) and PNG files, and the binary key file.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, ImageEncoder, ImageFormat, ImageReader};

use crate::chaos::{Key, KEY_BYTES};
use crate::error::{Error, Result};
use crate::partition::GrayImage;

fn format_error(path: &Path, reason: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

/// Picks the output encoding from the file extension.
pub fn format_for(path: &Path) -> Result<ImageFormat> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("pgm") => Ok(ImageFormat::Pnm),
        Some("png") => Ok(ImageFormat::Png),
        _ => Err(format_error(path, "expected a .pgm or .png extension")),
    }
}

/// Reads an 8-bit single-channel image. Color or 16-bit files are rejected
/// rather than converted.
pub fn read_image(path: &Path) -> Result<GrayImage> {
    let decoded = ImageReader::open(path)?.with_guessed_format()?.decode()?;
    match decoded {
        DynamicImage::ImageLuma8(buf) => {
            let (w, h) = (buf.width() as usize, buf.height() as usize);
            GrayImage::new(w, h, buf.into_raw())
        }
        other => Err(format_error(
            path,
            format!("expected 8-bit grayscale, found {:?}", other.color()),
        )),
    }
}

pub fn write_image(path: &Path, img: &GrayImage) -> Result<()> {
    let format = format_for(path)?;
    let (w, h) = (img.width() as u32, img.height() as u32);
    let out = BufWriter::new(File::create(path)?);
    match format {
        ImageFormat::Pnm => PnmEncoder::new(out)
            .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
            .write_image(img.pixels(), w, h, ExtendedColorType::L8)?,
        _ => image::codecs::png::PngEncoder::new(out).write_image(
            img.pixels(),
            w,
            h,
            ExtendedColorType::L8,
        )?,
    }
    Ok(())
}

/// Reads a key file in either the 96-byte binary form or the text form of
/// [`parse_key_values`].
pub fn read_key(path: &Path) -> Result<Key> {
    let bytes = std::fs::read(path)?;
    if bytes.len() == KEY_BYTES {
        if let Ok(key) = Key::from_bytes(&bytes) {
            return Ok(key);
        }
    }
    match std::str::from_utf8(&bytes) {
        Ok(text) if text.chars().all(|c| !c.is_control() || c.is_whitespace()) => {
            parse_key_values(text)
        }
        _ => Key::from_bytes(&bytes),
    }
}

pub fn write_key(path: &Path, key: &Key) -> Result<()> {
    std::fs::write(path, key.to_bytes())?;
    Ok(())
}

/// Writes the twelve values as text, one sub-key per line. The values
/// round-trip exactly.
pub fn write_key_text(path: &Path, key: &Key) -> Result<()> {
    std::fs::write(path, format_key_values(key))?;
    Ok(())
}

pub fn format_key_values(key: &Key) -> String {
    key.to_values()
        .chunks(4)
        .map(|sk| sk.iter().map(f64::to_string).collect::<Vec<_>>().join(" ") + "\n")
        .collect()
}

/// Parses twelve reals separated by commas and/or whitespace.
pub fn parse_key_values(text: &str) -> Result<Key> {
    let values = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| Error::KeyText(t.to_string())))
        .collect::<Result<Vec<f64>>>()?;
    Key::from_values(&values)
}
