use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hiercrypt::analysis::{keystream_attack, run_battery, BatteryConfig, Sections};
use hiercrypt::io::{
    format_for, parse_key_values, read_image, read_key, write_image, write_key, write_key_text,
};
use hiercrypt::{
    decrypt_partial, encrypt_with_mask, partition::edge_mask, synth, AccessRights, CannyParams,
    Cryptogram, Error, ErrorKind, Key, PartialKey,
};

#[derive(Parser)]
#[command(
    name = "hiercrypt",
    version,
    about = "Hierarchical chaotic encryption of grayscale images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a key file, random or from twelve explicit values.
    Keygen(KeygenArgs),
    /// Encrypt a grayscale PGM/PNG image.
    Encrypt(EncryptArgs),
    /// Decrypt a cryptogram, optionally with only some sub-keys.
    Decrypt(DecryptArgs),
    /// Run the statistical evaluation battery on a plaintext image.
    Analyze(AnalyzeArgs),
    /// Known-plaintext keystream attack.
    Attack(AttackArgs),
    /// Render one of the built-in synthetic test images.
    Sample(SampleArgs),
}

#[derive(Args)]
struct KeygenArgs {
    #[arg(long)]
    out: PathBuf,
    /// Twelve values `x0 mu0 x0_xor mu0_xor` for sk1, sk2, sk3, separated by
    /// commas or spaces.
    #[arg(long)]
    values: Option<String>,
    /// Write the text form instead of the 96-byte binary form.
    #[arg(long)]
    text: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct KeySource {
    /// Key file, binary or text.
    #[arg(long)]
    key: Option<PathBuf>,
    /// Key given inline as twelve values.
    #[arg(long)]
    key_values: Option<String>,
}

impl KeySource {
    fn load(&self) -> Result<Key, Failure> {
        match (&self.key, &self.key_values) {
            (Some(path), _) => read_key(path).at(path),
            (_, Some(text)) => Ok(parse_key_values(text)?),
            _ => unreachable!("clap enforces one key source"),
        }
    }
}

#[derive(Args)]
struct DetectorArgs {
    /// Gaussian smoothing of the edge detector.
    #[arg(long, default_value_t = 1.4)]
    sigma: f64,
    /// Hysteresis low threshold on the gradient magnitude.
    #[arg(long, default_value_t = 0.1)]
    low: f64,
    /// Hysteresis high threshold on the gradient magnitude.
    #[arg(long, default_value_t = 0.2)]
    high: f64,
    /// Dilation radius of the edge mask.
    #[arg(long, default_value_t = 2)]
    radius: usize,
}

impl DetectorArgs {
    fn params(&self) -> Result<CannyParams, Failure> {
        let p = CannyParams {
            sigma: self.sigma,
            low: self.low,
            high: self.high,
            radius: self.radius,
        };
        p.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(p)
    }
}

#[derive(Args)]
struct EncryptArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    key: KeySource,
    #[arg(long)]
    output: PathBuf,
    /// Also write the dilated edge mask (0/255).
    #[arg(long)]
    mask_out: Option<PathBuf>,
    #[command(flatten)]
    detector: DetectorArgs,
}

#[derive(Args)]
struct DecryptArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    key: KeySource,
    #[arg(long)]
    output: PathBuf,
    /// Sub-keys to use, e.g. `sk2,sk3`. `sk3` is required.
    #[arg(long, default_value = "sk1,sk2,sk3")]
    rights: AccessRights,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    key: KeySource,
    /// JSON report path; printed to stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Directory for table1/table2/histogram/scatter CSV files.
    #[arg(long)]
    csv_dir: Option<PathBuf>,
    /// Comma-separated subset of hist, diff, corr, keys, or all.
    #[arg(long, default_value = "all")]
    select: Sections,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    flips: usize,
    #[arg(long, default_value_t = 2500)]
    pairs: usize,
    /// Key perturbations for the sensitivity sweep.
    #[arg(long, value_delimiter = ',', default_values_t = [1e-10, 1e-15])]
    epsilons: Vec<f64>,
    /// Perturb all four fields of each sub-key, not just x0.
    #[arg(long)]
    all_fields: bool,
    #[command(flatten)]
    detector: DetectorArgs,
}

#[derive(Args)]
struct AttackArgs {
    /// Known plaintext.
    #[arg(long)]
    plain: PathBuf,
    /// Cryptogram of the known plaintext.
    #[arg(long)]
    cipher: PathBuf,
    /// Cryptogram to attack.
    #[arg(long)]
    target: PathBuf,
    /// True plaintext of the target, for the verdict.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Recovered image.
    #[arg(long)]
    output: PathBuf,
    /// JSON report path; printed to stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_parser = synth_name)]
    name: String,
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(1..=8192))]
    width: u32,
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(1..=8192))]
    height: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
}

fn synth_name(s: &str) -> Result<String, String> {
    if synth::by_name(s, 1, 1, 0).is_some() {
        Ok(s.to_string())
    } else {
        Err(format!("expected one of {}", synth::NAMES.join(", ")))
    }
}

enum Failure {
    Usage(String),
    Lib(Error, Option<PathBuf>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e, None)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(e.into(), None)
    }
}

trait WithPath<T> {
    fn at(self, path: &Path) -> Result<T, Failure>;
}

impl<T, E: Into<Error>> WithPath<T> for Result<T, E> {
    fn at(self, path: &Path) -> Result<T, Failure> {
        self.map_err(|e| Failure::Lib(e.into(), Some(path.to_path_buf())))
    }
}

/// Rejects unwritable extensions and outputs that would overwrite an input
/// or each other, before anything is written.
fn check_outputs(inputs: &[&Path], images: &[&Path], others: &[&Path]) -> Result<(), Failure> {
    for out in images {
        format_for(out).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let outputs: Vec<&Path> = images.iter().chain(others).copied().collect();
    for (i, out) in outputs.iter().enumerate() {
        if let Some(input) = inputs.iter().find(|p| same_file(p, out)) {
            return Err(Failure::Usage(format!(
                "output {} would overwrite input {}",
                out.display(),
                input.display()
            )));
        }
        if outputs[..i].iter().any(|p| same_file(p, out)) {
            return Err(Failure::Usage(format!(
                "{} is given as two different outputs",
                out.display()
            )));
        }
    }
    Ok(())
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (a.canonicalize(), b.canonicalize()) {
        (Ok(x), Ok(y)) => x == y,
        _ => a == b,
    }
}

fn emit_json(json: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, json).at(p)?,
        None => print!("{json}"),
    }
    Ok(())
}

fn keygen(a: KeygenArgs) -> Result<(), Failure> {
    check_outputs(&[], &[], &[&a.out])?;
    let key = match &a.values {
        Some(text) => parse_key_values(text)?,
        None => Key::random(&mut rand::rng()),
    };
    if a.text {
        write_key_text(&a.out, &key).at(&a.out)?;
    } else {
        write_key(&a.out, &key).at(&a.out)?;
    }
    Ok(())
}

fn encrypt(a: EncryptArgs) -> Result<(), Failure> {
    let params = a.detector.params()?;
    let mut inputs = vec![a.input.as_path()];
    inputs.extend(a.key.key.as_deref());
    let mut images = vec![a.output.as_path()];
    images.extend(a.mask_out.as_deref());
    check_outputs(&inputs, &images, &[])?;

    let key = a.key.load()?;
    let img = read_image(&a.input).at(&a.input)?;
    let mask = edge_mask(&img, &params)?;
    let cryptogram = encrypt_with_mask(&img, &key, &mask)?;
    write_image(&a.output, cryptogram.image()).at(&a.output)?;
    if let Some(path) = &a.mask_out {
        write_image(path, &mask.to_image()).at(path)?;
    }
    eprintln!(
        "encrypted {}x{}: {} contour, {} region pixels",
        img.width(),
        img.height(),
        mask.count(),
        img.len() - mask.count()
    );
    Ok(())
}

fn decrypt(a: DecryptArgs) -> Result<(), Failure> {
    if !a.rights.sk3 {
        return Err(Error::MissingMaskKey.into());
    }
    let mut inputs = vec![a.input.as_path()];
    inputs.extend(a.key.key.as_deref());
    check_outputs(&inputs, &[&a.output], &[])?;

    let key = a.key.load()?;
    let cryptogram = Cryptogram::from_image(read_image(&a.input).at(&a.input)?);
    let plain = decrypt_partial(&cryptogram, &PartialKey::restrict(&key, a.rights))?;
    write_image(&a.output, &plain).at(&a.output)?;
    Ok(())
}

fn analyze(a: AnalyzeArgs) -> Result<(), Failure> {
    let params = a.detector.params()?;
    if a.select.differential && a.flips == 0 {
        return Err(Failure::Usage(
            "--flips must be at least 1 for the differential test".into(),
        ));
    }
    if a.select.correlation && a.pairs < 2 {
        return Err(Failure::Usage("--pairs must be at least 2".into()));
    }
    if a.select.key_sensitivity && a.epsilons.is_empty() {
        return Err(Failure::Usage("--epsilons is empty".into()));
    }
    let mut inputs = vec![a.input.as_path()];
    inputs.extend(a.key.key.as_deref());
    let mut others: Vec<&Path> = a.report.as_deref().into_iter().collect();
    others.extend(a.csv_dir.as_deref());
    check_outputs(&inputs, &[], &others)?;

    let key = a.key.load()?;
    let img = read_image(&a.input).at(&a.input)?;
    let cfg = BatteryConfig {
        sections: a.select,
        seed: a.seed,
        pairs: a.pairs,
        flips: a.flips,
        epsilons: a.epsilons,
        all_fields: a.all_fields,
        params,
    };
    let report = run_battery(&img, &key, &cfg)?;
    if let Some(dir) = &a.csv_dir {
        report.write_csv(dir).at(dir)?;
    }
    emit_json(&report.to_json()?, a.report.as_deref())
}

fn attack(a: AttackArgs) -> Result<(), Failure> {
    let mut inputs = vec![a.plain.as_path(), a.cipher.as_path(), a.target.as_path()];
    inputs.extend(a.truth.as_deref());
    let others: Vec<&Path> = a.report.as_deref().into_iter().collect();
    check_outputs(&inputs, &[&a.output], &others)?;

    let plain = read_image(&a.plain).at(&a.plain)?;
    let cipher = Cryptogram::from_image(read_image(&a.cipher).at(&a.cipher)?);
    let target = Cryptogram::from_image(read_image(&a.target).at(&a.target)?);
    let truth = a
        .truth
        .as_deref()
        .map(|p| read_image(p).at(p))
        .transpose()?;
    let outcome = keystream_attack(&plain, &cipher, &target, truth.as_ref())?;
    write_image(&a.output, &outcome.recovered).at(&a.output)?;
    let mut json = serde_json::to_string_pretty(&outcome.report()).map_err(Error::from)?;
    json.push('\n');
    emit_json(&json, a.report.as_deref())
}

fn sample(a: SampleArgs) -> Result<(), Failure> {
    check_outputs(&[], &[&a.output], &[])?;
    let img = synth::by_name(&a.name, a.width as usize, a.height as usize, a.seed)
        .expect("name validated by clap");
    write_image(&a.output, &img).at(&a.output)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Keygen(a) => keygen(a),
        Command::Encrypt(a) => encrypt(a),
        Command::Decrypt(a) => decrypt(a),
        Command::Analyze(a) => analyze(a),
        Command::Attack(a) => attack(a),
        Command::Sample(a) => sample(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e, path)) => {
            match path {
                Some(p) => eprintln!("error: {}: {e}", p.display()),
                None => eprintln!("error: {e}"),
            }
            match e.kind() {
                ErrorKind::Data => ExitCode::from(2),
                ErrorKind::Crypto => ExitCode::from(3),
            }
        }
    }
}
