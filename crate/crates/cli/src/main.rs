//! Command-line driver: generate reference signals, run the regularity
//! analyses, emit plot-ready tables and classification reports.
//!
//! Exit codes: 0 success, 2 usage/input error, 3 estimation failure (with
//! whatever partial outputs were produced).

use clap::{Args, Parser, Subcommand};
use pleaders::classify::{classify_singularity, ClassifyConfig};
use pleaders::config::AnalysisConfig;
use pleaders::dwt::{forward_dwt, fractional_integrate_fourier, Alignment};
use pleaders::error::Error as CoreError;
use pleaders::io;
use pleaders::pexp::profile_from_coeffs;
use pleaders::scaling::{hmin, scaling_function_with_margin, structure_function};
use pleaders::signal::{
    gen_chirp, gen_cusp, gen_cusp_plus_chirp, gen_general_comb, gen_lacunary_comb,
    gen_selfsimilar, gen_wgn, AffineFamily, CombSpec, Generator, SelfSimilarSpec, Signal,
    SignalMeta,
};
use pleaders::wavelet::WaveletSpec;
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pleaders", version, about = "p-exponent / p-leader regularity analysis")]
struct Cli {
    /// JSON file supplying defaults for any analysis flag; explicit flags
    /// override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a reference signal (CSV + JSON metadata sidecar).
    Gen(GenArgs),
    /// Scaling function, h_min and p-exponent profile tables.
    Analyze(AnalyzeArgs),
    /// Singularity classification report.
    Classify(ClassifyArgs),
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
}

#[derive(Args, Clone)]
struct CommonGen {
    /// log2 of the sample count.
    #[arg(long, default_value_t = 16)]
    levels: u32,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Base name for the output files.
    #[arg(long, default_value = "signal")]
    name: String,
}

#[derive(Subcommand, Clone)]
enum GenKind {
    /// |x - x0|^alpha
    Cusp {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        x0: f64,
        #[command(flatten)]
        common: CommonGen,
    },
    /// |x - x0|^alpha sin(1/|x - x0|^beta)
    Chirp {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0.5)]
        x0: f64,
        #[command(flatten)]
        common: CommonGen,
    },
    /// Lacunary comb with teeth 2^{-alpha l} on [2^-l, 2^-l + 2^{-gamma l}]
    Comb {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        gamma: f64,
        #[command(flatten)]
        common: CommonGen,
    },
    /// Comb with a prescribed concave profile min_n (a_n s + b_n)
    GeneralComb {
        /// Affine pieces as "a:b" pairs, comma separated.
        #[arg(long, value_delimiter = ',')]
        pieces: Vec<String>,
        /// Largest admissible p (omit for +inf).
        #[arg(long)]
        p0: Option<f64>,
        /// Apply the 1/l^2 tooth damping.
        #[arg(long, default_value_t = false)]
        damping: bool,
        #[command(flatten)]
        common: CommonGen,
    },
    /// |x-x0|^alpha omega(log|x-x0|) with log(ratio)-periodic omega
    Selfsimilar {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 2.0)]
        ratio: f64,
        /// One period of omega_+, comma separated (default constant 1).
        #[arg(long, value_delimiter = ',')]
        omega_plus: Vec<f64>,
        /// One period of omega_-, comma separated (default constant 1).
        #[arg(long, value_delimiter = ',')]
        omega_minus: Vec<f64>,
        #[arg(long, default_value_t = 0.5)]
        x0: f64,
        #[command(flatten)]
        common: CommonGen,
    },
    /// Cusp |x-x0|^gamma plus chirp |x-x0|^alpha sin(1/|x-x0|^beta)
    CuspChirp {
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0.5)]
        x0: f64,
        #[command(flatten)]
        common: CommonGen,
    },
    /// IID standard normal samples (deterministic per seed)
    Wgn {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: CommonGen,
    },
}

#[derive(Args)]
struct AnalysisFlags {
    /// Signal CSV (columns index,x,value).
    #[arg(long)]
    input: PathBuf,
    /// Metadata sidecar; defaults to <input stem>.meta.json when present.
    #[arg(long)]
    meta: Option<PathBuf>,
    /// Analysis location (defaults to the metadata x0).
    #[arg(long)]
    x0: Option<f64>,
    /// Fractional integration applied to the signal before analysis.
    #[arg(long, default_value_t = 0.0)]
    s: f64,
    /// Daubechies vanishing moments.
    #[arg(long)]
    wavelet_order: Option<u32>,
    #[arg(long)]
    j_max: Option<u32>,
    /// Pointwise fit range "j1:j2".
    #[arg(long)]
    fit: Option<String>,
    /// Global (eta, h_min) fit range "j1:j2".
    #[arg(long)]
    global_fit: Option<String>,
    /// p grid, comma separated; `inf` allowed.
    #[arg(long, value_delimiter = ',')]
    p_grid: Vec<String>,
    /// Include leaders with edge-clipped windows in pointwise fits.
    #[arg(long)]
    include_clipped: Option<bool>,
    /// Coefficient-to-cube alignment: left | center.
    #[arg(long)]
    alignment: Option<String>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    flags: AnalysisFlags,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    flags: AnalysisFlags,
    /// Integration orders for the canonical test, comma separated.
    #[arg(long, value_delimiter = ',')]
    s_list: Vec<f64>,
    #[arg(long)]
    tol_invariance: Option<f64>,
    #[arg(long)]
    tol_canonical: Option<f64>,
    #[arg(long)]
    beta_significance: Option<f64>,
}

/// Optional JSON defaults file; every field mirrors a flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    wavelet_order: Option<u32>,
    j_max: Option<u32>,
    fit: Option<String>,
    global_fit: Option<String>,
    p_grid: Option<Vec<String>>,
    include_clipped: Option<bool>,
    alignment: Option<String>,
    s: Option<f64>,
    s_list: Option<Vec<f64>>,
    tol_invariance: Option<f64>,
    tol_canonical: Option<f64>,
    beta_significance: Option<f64>,
}

enum CliError {
    Usage(String),
    Estimation(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter(_)
            | CoreError::InvalidInput(_)
            | CoreError::ShapeMismatch(_)
            | CoreError::UnsupportedGenerator(_)
            | CoreError::Io(_)
            | CoreError::Json(_) => CliError::Usage(e.to_string()),
            other => CliError::Estimation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file_cfg = match load_file_config(cli.config.as_deref()) {
        Ok(c) => c,
        Err(CliError::Usage(msg)) | Err(CliError::Estimation(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Analyze(args) => cmd_analyze(args, &file_cfg),
        Command::Classify(args) => cmd_classify(args, &file_cfg),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Estimation(msg)) => {
            eprintln!("estimation failed: {msg}");
            ExitCode::from(3)
        }
    }
}

fn load_file_config(path: Option<&Path>) -> Result<FileConfig, CliError> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
        }
    }
}

fn cmd_gen(args: GenArgs) -> Result<(), CliError> {
    let (signal, common) = match args.kind {
        GenKind::Cusp { alpha, x0, common } => (gen_cusp(alpha, x0, common.levels)?, common),
        GenKind::Chirp {
            alpha,
            beta,
            x0,
            common,
        } => (gen_chirp(alpha, beta, x0, common.levels)?, common),
        GenKind::Comb { alpha, gamma, common } => (
            gen_lacunary_comb(CombSpec { alpha, gamma }, common.levels)?,
            common,
        ),
        GenKind::GeneralComb {
            pieces,
            p0,
            damping,
            common,
        } => {
            let parsed: Result<Vec<(f64, f64)>, CliError> = pieces
                .iter()
                .map(|s| {
                    let (a, b) = s
                        .split_once(':')
                        .ok_or_else(|| CliError::Usage(format!("piece `{s}` is not a:b")))?;
                    Ok((
                        a.trim()
                            .parse::<f64>()
                            .map_err(|e| CliError::Usage(e.to_string()))?,
                        b.trim()
                            .parse::<f64>()
                            .map_err(|e| CliError::Usage(e.to_string()))?,
                    ))
                })
                .collect();
            let family = AffineFamily {
                pieces: parsed?,
                p0: p0.unwrap_or(f64::INFINITY),
                damping,
            };
            (gen_general_comb(&family, common.levels)?, common)
        }
        GenKind::Selfsimilar {
            alpha,
            ratio,
            omega_plus,
            omega_minus,
            x0,
            common,
        } => {
            let spec = SelfSimilarSpec {
                alpha,
                ratio,
                omega_plus: if omega_plus.is_empty() { vec![1.0] } else { omega_plus },
                omega_minus: if omega_minus.is_empty() { vec![1.0] } else { omega_minus },
            };
            (gen_selfsimilar(&spec, x0, common.levels)?, common)
        }
        GenKind::CuspChirp {
            gamma,
            alpha,
            beta,
            x0,
            common,
        } => (
            gen_cusp_plus_chirp(gamma, alpha, beta, x0, common.levels)?,
            common,
        ),
        GenKind::Wgn { seed, common } => (gen_wgn(common.levels, seed)?, common),
    };
    std::fs::create_dir_all(&common.out)?;
    let csv_path = common.out.join(format!("{}.csv", common.name));
    let meta_path = common.out.join(format!("{}.meta.json", common.name));
    std::fs::write(&csv_path, io::signal_csv(&signal))?;
    std::fs::write(
        &meta_path,
        io::signal_meta_json(&signal, &pleaders::DEFAULT_P_GRID)?,
    )?;
    println!("wrote {} and {}", csv_path.display(), meta_path.display());
    Ok(())
}

fn parse_range(text: &str) -> Result<(u32, u32), CliError> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("range `{text}` is not j1:j2")))?;
    Ok((
        a.trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad range `{text}`")))?,
        b.trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad range `{text}`")))?,
    ))
}

fn parse_p_grid(items: &[String]) -> Result<Vec<f64>, CliError> {
    items
        .iter()
        .map(|s| {
            let t = s.trim();
            if t.eq_ignore_ascii_case("inf") {
                Ok(f64::INFINITY)
            } else {
                t.parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("bad p value `{t}`")))
            }
        })
        .collect()
}

fn load_signal(flags: &AnalysisFlags) -> Result<Signal, CliError> {
    let text = std::fs::read_to_string(&flags.input)?;
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if lineno == 0 && line.starts_with("index") {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let value = line
            .rsplit(',')
            .next()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .ok_or_else(|| {
                CliError::Usage(format!("{}: bad row {}", flags.input.display(), lineno + 1))
            })?;
        samples.push(value);
    }
    if !samples.len().is_power_of_two() || samples.len() < 256 {
        return Err(CliError::Usage(format!(
            "sample count {} must be a power of two >= 256",
            samples.len()
        )));
    }
    let levels = samples.len().trailing_zeros();

    let meta_path = flags.meta.clone().or_else(|| {
        let candidate = flags.input.with_extension("meta.json");
        candidate.exists().then_some(candidate)
    });
    let meta = match meta_path {
        Some(p) => {
            let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&p)?)
                .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            let meta: SignalMeta = serde_json::from_value(doc["meta"].clone())
                .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            if meta.levels != levels {
                return Err(CliError::Usage(format!(
                    "metadata levels {} disagree with sample count 2^{levels}",
                    meta.levels
                )));
            }
            meta
        }
        None => SignalMeta {
            generator: Generator::External,
            x0: flags.x0.unwrap_or(0.5),
            levels,
            fractional_s: 0.0,
            comb: None,
        },
    };
    Ok(Signal { samples, meta })
}

fn build_analysis_config(
    flags: &AnalysisFlags,
    file_cfg: &FileConfig,
) -> Result<AnalysisConfig, CliError> {
    let mut cfg = AnalysisConfig {
        wavelet_order: flags.wavelet_order.or(file_cfg.wavelet_order),
        j_max: flags.j_max.or(file_cfg.j_max),
        ..AnalysisConfig::default()
    };
    if let Some(text) = flags.fit.as_deref().or(file_cfg.fit.as_deref()) {
        cfg.pointwise_fit = Some(parse_range(text)?);
    }
    if let Some(text) = flags.global_fit.as_deref().or(file_cfg.global_fit.as_deref()) {
        cfg.global_fit = Some(parse_range(text)?);
    }
    let grid_source = if !flags.p_grid.is_empty() {
        Some(&flags.p_grid)
    } else {
        file_cfg.p_grid.as_ref()
    };
    if let Some(items) = grid_source {
        cfg.p_grid = parse_p_grid(items)?;
    }
    cfg.include_clipped = flags.include_clipped.or(file_cfg.include_clipped);
    let alignment_text = flags.alignment.as_deref().or(file_cfg.alignment.as_deref());
    cfg.alignment = match alignment_text {
        None => None,
        Some("left") => Some(Alignment::Left),
        Some("center") => Some(Alignment::Center),
        Some(other) => return Err(CliError::Usage(format!("bad alignment `{other}`"))),
    };
    Ok(cfg)
}

fn cmd_analyze(args: AnalyzeArgs, file_cfg: &FileConfig) -> Result<(), CliError> {
    let flags = args.flags;
    let signal = load_signal(&flags)?;
    let s_four = if flags.s != 0.0 { flags.s } else { file_cfg.s.unwrap_or(0.0) };
    let signal = if s_four > 0.0 {
        fractional_integrate_fourier(&signal, s_four)?
    } else {
        signal
    };
    let x0 = flags.x0.unwrap_or(signal.x0());
    let cfg = build_analysis_config(&flags, file_cfg)?;
    let resolved = cfg.resolve(&signal.meta)?;

    std::fs::create_dir_all(&flags.out)?;
    let echo = serde_json::json!({
        "input": flags.input,
        "x0": x0,
        "fractional_s": s_four,
        "resolved": resolved,
    });
    std::fs::write(
        flags.out.join("config_echo.json"),
        serde_json::to_string_pretty(&echo).map_err(CoreError::from)?,
    )?;

    // transforms and global diagnostics first so partial outputs exist if
    // the pointwise estimation fails
    let wavelet = WaveletSpec::daubechies(resolved.wavelet_order)?;
    let coeffs = forward_dwt(&signal, &wavelet, resolved.j_max, resolved.alignment)?;
    let finite_ps: Vec<f64> = resolved
        .p_grid
        .iter()
        .copied()
        .filter(|p| p.is_finite())
        .collect();
    let sf = scaling_function_with_margin(
        &coeffs,
        &finite_ps,
        resolved.global_fit,
        resolved.admissibility_margin,
    )?;
    std::fs::write(flags.out.join("scaling.csv"), io::scaling_csv(&sf))?;
    for &p in &finite_ps {
        let table: Vec<(u32, f64, f64)> = structure_function(&coeffs, p)?
            .into_iter()
            .filter(|&(_, s)| s > 0.0)
            .map(|(j, s)| (j, coeffs.log2_scale(j), s.log2()))
            .collect();
        std::fs::write(
            flags.out.join(format!("structure_p{p}.csv")),
            io::structure_table_csv(&table),
        )?;
    }
    let hmin_fit = hmin(&coeffs, resolved.global_fit)?;
    std::fs::write(
        flags.out.join("summary.json"),
        io::summary_json(&sf, Some(hmin_fit.slope))?,
    )?;

    let profile = profile_from_coeffs(&coeffs, x0, 0.0, &resolved)?;
    std::fs::write(flags.out.join("profile.csv"), io::profile_csv(&profile))?;
    for e in &profile.entries {
        if let Some(table) = io::leader_table_csv(&profile, e.p) {
            let tag = if e.p.is_infinite() {
                "inf".to_string()
            } else {
                format!("{}", e.p)
            };
            std::fs::write(flags.out.join(format!("leaders_p{tag}.csv")), table)?;
        }
    }
    if profile.entries.iter().all(|e| !e.valid) {
        return Err(CliError::Estimation(
            "no valid profile entry (see profile.csv for per-p errors)".to_string(),
        ));
    }
    println!("analysis written to {}", flags.out.display());
    Ok(())
}

fn cmd_classify(args: ClassifyArgs, file_cfg: &FileConfig) -> Result<(), CliError> {
    let flags = args.flags;
    let signal = load_signal(&flags)?;
    let x0 = flags.x0.unwrap_or(signal.x0());
    let analysis = build_analysis_config(&flags, file_cfg)?;
    let mut cfg = ClassifyConfig {
        analysis,
        ..ClassifyConfig::default()
    };
    let s_list = if !args.s_list.is_empty() {
        args.s_list.clone()
    } else {
        file_cfg.s_list.clone().unwrap_or_default()
    };
    if !s_list.is_empty() {
        cfg.s_list = s_list;
    }
    if let Some(v) = args.tol_invariance.or(file_cfg.tol_invariance) {
        cfg.tol_invariance = v;
    }
    if let Some(v) = args.tol_canonical.or(file_cfg.tol_canonical) {
        cfg.tol_canonical = v;
    }
    if let Some(v) = args.beta_significance.or(file_cfg.beta_significance) {
        cfg.beta_significance = v;
    }

    let report = classify_singularity(&signal, x0, &cfg)?;
    std::fs::create_dir_all(&flags.out)?;
    let path = flags.out.join("report.json");
    std::fs::write(
        &path,
        serde_json::to_string_pretty(&report).map_err(CoreError::from)?,
    )?;
    println!(
        "label: {}",
        serde_json::to_value(report.label)
            .map_err(CoreError::from)?
            .as_str()
            .unwrap_or("?")
    );
    println!("report written to {}", path.display());
    Ok(())
}
