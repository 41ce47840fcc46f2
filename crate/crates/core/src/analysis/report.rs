//! The evaluation battery and its JSON / CSV outputs.

use std::fs::File;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use super::correlation::{correlation, Direction};
use super::histogram::{content_histogram, histogram, Histogram};
use super::metrics::{diff, random_flips, BitFlip};
use super::sensitivity::{key_sensitivity_suite, KeyDelta, SensitivityRow};
use crate::chaos::Key;
use crate::error::{Error, Result};
use crate::hierarchy::encrypt_with_mask;
use crate::partition::{edge_mask, CannyParams, GrayImage};

pub const SCHEMA_VERSION: u32 = 1;

/// Which analyses to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sections {
    pub histogram: bool,
    pub differential: bool,
    pub correlation: bool,
    pub key_sensitivity: bool,
}

impl Sections {
    pub const ALL: Sections = Sections {
        histogram: true,
        differential: true,
        correlation: true,
        key_sensitivity: true,
    };
}

impl FromStr for Sections {
    type Err = String;

    /// Comma-separated subset of `hist`, `diff`, `corr`, `keys`, or `all`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Sections {
            histogram: false,
            differential: false,
            correlation: false,
            key_sensitivity: false,
        };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "all" => out = Sections::ALL,
                "hist" | "histogram" => out.histogram = true,
                "diff" | "differential" => out.differential = true,
                "corr" | "correlation" => out.correlation = true,
                "keys" | "sensitivity" => out.key_sensitivity = true,
                other => {
                    return Err(format!(
                        "unknown analysis `{other}` (expected hist, diff, corr, keys or all)"
                    ))
                }
            }
        }
        if out
            == (Sections {
                histogram: false,
                differential: false,
                correlation: false,
                key_sensitivity: false,
            })
        {
            return Err("no analysis selected".into());
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatteryConfig {
    pub sections: Sections,
    pub seed: u64,
    /// Adjacent pairs per direction; capped by what the image offers.
    pub pairs: usize,
    /// Random one-bit flips for the differential test.
    pub flips: usize,
    /// Each epsilon is applied to `x0` of every sub-key in turn.
    pub epsilons: Vec<f64>,
    /// Perturb all four fields instead of `x0` only.
    pub all_fields: bool,
    pub params: CannyParams,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        Self {
            sections: Sections::ALL,
            seed: 0,
            pairs: 2500,
            flips: 20,
            epsilons: vec![1e-10, 1e-15],
            all_fields: false,
            params: CannyParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CannySummary {
    pub sigma: f64,
    pub low: f64,
    pub high: f64,
    pub radius: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramSection {
    pub plain: Histogram,
    pub cipher: Histogram,
    /// Bit planes 1-7 of the cryptogram, 128 bins.
    pub cipher_content: Histogram,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlipRow {
    pub index: usize,
    pub bit: u8,
    pub npcr: f64,
    pub uaci: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DifferentialSection {
    /// Mean over all flips.
    pub npcr: f64,
    pub uaci: f64,
    pub flips: Vec<FlipRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationRow {
    pub direction: Direction,
    pub pairs: usize,
    /// `None` when the sample has zero variance.
    pub plain: Option<f64>,
    pub cipher: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterSet {
    pub direction: Direction,
    pub source: &'static str,
    pub pairs: Vec<(u8, u8)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub width: usize,
    pub height: usize,
    pub seed: u64,
    pub canny: CannySummary,
    /// Share of pixels in the contour subset, in percent.
    pub contour_share: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histogram: Option<HistogramSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub differential: Option<DifferentialSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlation: Option<Vec<CorrelationRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub key_sensitivity: Option<Vec<SensitivityRow>>,
    #[serde(skip)]
    pub scatter: Vec<ScatterSet>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Writes `table1.csv` (NPCR/UACI), `table2.csv` (key sensitivity),
    /// `histogram.csv` and `scatter.csv` for whichever sections ran.
    pub fn write_csv(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        if let Some(d) = &self.differential {
            let mut w = csv::Writer::from_writer(File::create(dir.join("table1.csv"))?);
            w.write_record(["npcr", "uaci"])?;
            w.write_record([d.npcr.to_string(), d.uaci.to_string()])?;
            w.flush()?;
        }
        if let Some(rows) = &self.key_sensitivity {
            let mut w = csv::Writer::from_writer(File::create(dir.join("table2.csv"))?);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        if let Some(h) = &self.histogram {
            let mut w = csv::Writer::from_writer(File::create(dir.join("histogram.csv"))?);
            w.write_record(["value", "plain", "cipher"])?;
            for v in 0..256 {
                w.write_record([
                    v.to_string(),
                    h.plain.counts[v].to_string(),
                    h.cipher.counts[v].to_string(),
                ])?;
            }
            w.flush()?;
        }
        if !self.scatter.is_empty() {
            let mut w = csv::Writer::from_writer(File::create(dir.join("scatter.csv"))?);
            w.write_record(["direction", "source", "x", "y"])?;
            for set in &self.scatter {
                for (x, y) in &set.pairs {
                    w.write_record([
                        set.direction.name(),
                        set.source,
                        &x.to_string(),
                        &y.to_string(),
                    ])?;
                }
            }
            w.flush()?;
        }
        Ok(())
    }
}

type Pair = (u8, u8);

fn optional_r(
    img: &GrayImage,
    dir: Direction,
    pairs: usize,
    seed: u64,
) -> Result<(Option<f64>, Vec<Pair>)> {
    match correlation(img, dir, pairs, seed) {
        Ok(c) => Ok((Some(c.r), c.pairs)),
        Err(Error::ZeroVariance(_)) => Ok((None, Vec::new())),
        Err(e) => Err(e),
    }
}

/// Runs the selected analyses of `img` under `key`.
pub fn run_battery(img: &GrayImage, key: &Key, cfg: &BatteryConfig) -> Result<AnalysisReport> {
    cfg.params.validate()?;
    let mask = edge_mask(img, &cfg.params)?;
    let cipher = encrypt_with_mask(img, key, &mask)?;
    let c = cipher.image();

    let mut report = AnalysisReport {
        schema_version: SCHEMA_VERSION,
        width: img.width(),
        height: img.height(),
        seed: cfg.seed,
        canny: CannySummary {
            sigma: cfg.params.sigma,
            low: cfg.params.low,
            high: cfg.params.high,
            radius: cfg.params.radius,
        },
        contour_share: 100.0 * mask.count() as f64 / img.len() as f64,
        histogram: None,
        differential: None,
        correlation: None,
        key_sensitivity: None,
        scatter: Vec::new(),
    };

    if cfg.sections.histogram {
        report.histogram = Some(HistogramSection {
            plain: histogram(img),
            cipher: histogram(c),
            cipher_content: content_histogram(c),
        });
    }

    if cfg.sections.differential && cfg.flips > 0 {
        let flips: Vec<BitFlip> = random_flips(img, cfg.flips, cfg.seed);
        let rows = flips
            .iter()
            .map(|f| {
                let twin = f.apply(img)?;
                let other = encrypt_with_mask(&twin, key, &edge_mask(&twin, &cfg.params)?)?;
                let d = diff(c, other.image())?;
                Ok(FlipRow {
                    index: f.index,
                    bit: f.bit,
                    npcr: d.npcr,
                    uaci: d.uaci,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let n = rows.len() as f64;
        report.differential = Some(DifferentialSection {
            npcr: rows.iter().map(|r| r.npcr).sum::<f64>() / n,
            uaci: rows.iter().map(|r| r.uaci).sum::<f64>() / n,
            flips: rows,
        });
    }

    if cfg.sections.correlation {
        let mut rows = Vec::new();
        for dir in Direction::ALL {
            let (dx, dy) = match dir {
                Direction::Horizontal => (1, 0),
                Direction::Vertical => (0, 1),
                Direction::Diagonal => (1, 1),
            };
            let available = img.width().saturating_sub(dx) * img.height().saturating_sub(dy);
            let pairs = cfg.pairs.min(available);
            if pairs < 2 {
                rows.push(CorrelationRow {
                    direction: dir,
                    pairs,
                    plain: None,
                    cipher: None,
                });
                continue;
            }
            let (plain, plain_pairs) = optional_r(img, dir, pairs, cfg.seed)?;
            let (cipher_r, cipher_pairs) = optional_r(c, dir, pairs, cfg.seed)?;
            report.scatter.push(ScatterSet {
                direction: dir,
                source: "plain",
                pairs: plain_pairs,
            });
            report.scatter.push(ScatterSet {
                direction: dir,
                source: "cipher",
                pairs: cipher_pairs,
            });
            rows.push(CorrelationRow {
                direction: dir,
                pairs,
                plain,
                cipher: cipher_r,
            });
        }
        report.correlation = Some(rows);
    }

    if cfg.sections.key_sensitivity {
        let deltas: Vec<KeyDelta> = cfg
            .epsilons
            .iter()
            .flat_map(|&e| {
                if cfg.all_fields {
                    KeyDelta::full_sweep(e)
                } else {
                    KeyDelta::x0_sweep(e)
                }
            })
            .collect();
        report.key_sensitivity = Some(key_sensitivity_suite(img, key, &cfg.params, &deltas)?);
    }

    Ok(report)
}
