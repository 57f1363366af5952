//! Batch front end: simulate raw echoes, reconstruct scenes (RDA, CSRDA
//! or CSEO), sweep sampling rates, benchmark per-iteration cost and
//! export magnitude images as PGM.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use csar_core::cseo::{reconstruct_exact, CSEO_MAX_SCENE};
use csar_core::geometry::derive_geometry;
use csar_core::image::{read_image, write_image, ComplexImage};
use csar_core::metrics::support_metrics;
use csar_core::rda::{build_filters, focus};
use csar_core::sampling::{make_pattern, split_rate, subsample, subsample_adjoint};
use csar_core::scene::PointScene;
use csar_core::sim::{add_noise, generate_raw, NoiseSpec};
use csar_core::solver::{reconstruct, SolverConfig};
use csar_core::{Error, RadarParams};

#[derive(Parser)]
#[command(
    name = "csar",
    about = "Matrix-free compressed-sensing SAR imaging toolkit",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate raw echoes from a point-target scene in the time domain
    Simulate(SimulateArgs),
    /// Reconstruct a scene image from (sub-sampled) raw echoes
    Reconstruct(ReconstructArgs),
    /// Sweep sampling rates and count support recovery per trial.
    /// CSV columns: method,rate,trial,seed,detections,misses,false_alarms,success
    Sweep(SweepArgs),
    /// Time one solver iteration across scene sizes and pulse lengths.
    /// CSV columns: method,n,u_eta,u_tau,seconds_per_iteration
    Bench(BenchArgs),
    /// Export a complex image as a log-scaled 16-bit PGM magnitude map
    Export(ExportArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Radar parameter config (key = value lines)
    #[arg(long)]
    config: PathBuf,
    /// Point-target scene CSV: azimuth_index, range_index, re, im
    #[arg(long)]
    scene: PathBuf,
    /// Output raw echo file
    #[arg(long)]
    out: PathBuf,
    /// SNR of added white Gaussian noise in dB; omit for noiseless output
    #[arg(long)]
    noise_db: Option<f64>,
    /// RNG seed for the noise
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Radar parameter config matching the raw file
    #[arg(long)]
    config: PathBuf,
    /// Raw echo file produced by `simulate`
    #[arg(long)]
    raw: PathBuf,
    /// rda (matched filter on zero-filled data), csrda or cseo
    #[arg(long)]
    method: Method,
    /// Overall fraction of Nyquist samples kept, in (0, 1]
    #[arg(long, default_value_t = 1.0)]
    rate: f64,
    /// Azimuth:range split of the sampling rate, e.g. 1:5
    #[arg(long, default_value = "1:5")]
    ratio: String,
    /// RNG seed for the sampling pattern
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Assumed number of significant scene pixels (ignored by rda)
    #[arg(long, default_value_t = 18)]
    sparsity: usize,
    #[arg(long, default_value_t = 100)]
    max_iters: usize,
    /// Output scene image file
    #[arg(long)]
    out_image: PathBuf,
    /// Optional per-iteration report CSV
    #[arg(long)]
    out_report: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, clap::ValueEnum)]
enum Method {
    Rda,
    Csrda,
    Cseo,
}

#[derive(Args)]
struct SweepArgs {
    /// Radar parameter config matching the raw file
    #[arg(long)]
    config: PathBuf,
    /// Truth scene CSV used to score detections
    #[arg(long)]
    scene: PathBuf,
    /// Raw echo file
    #[arg(long)]
    raw: PathBuf,
    /// Comma-separated overall sampling rates, e.g. 0.10,0.0065,0.0055
    #[arg(long, value_delimiter = ',', required = true)]
    rates: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Azimuth:range split of the sampling rate
    #[arg(long, default_value = "1:5")]
    ratio: String,
    #[arg(long, default_value_t = 18)]
    sparsity: usize,
    #[arg(long, default_value_t = 100)]
    max_iters: usize,
    /// Base seed; trial t at rate index i uses seed + 1000*i + t
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Detection threshold relative to the recovered peak, in dB
    #[arg(long, default_value_t = -30.0)]
    threshold_db: f64,
    /// Also run the exact-observation solver when the scene fits its guard
    #[arg(long, default_value_t = false)]
    with_cseo: bool,
    /// Output CSV
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Scene sizes n for the approximated-observation solver
    #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
    sizes: Vec<usize>,
    /// Aperture lengths u_eta for the exact solver at fixed scene size
    #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
    tbp: Vec<usize>,
    /// Overall sampling rate used for the timed iteration
    #[arg(long, default_value_t = 0.3)]
    rate: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExportArgs {
    /// Complex image file
    #[arg(long)]
    image: PathBuf,
    /// Output 16-bit binary PGM
    #[arg(long)]
    out: PathBuf,
    /// Magnitude floor relative to the peak, in dB
    #[arg(long, default_value_t = -40.0, allow_hyphen_values = true)]
    db_floor: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Reconstruct(a) => cmd_reconstruct(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Export(a) => cmd_export(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 1 for numerical failures, 2 for usage, validation and I/O problems.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NonFinite(_) | Error::ZeroSignal => 1,
        _ => 2,
    }
}

fn parse_ratio(text: &str) -> Result<(f64, f64), Error> {
    let parts: Vec<&str> = text.split(':').collect();
    let err = || Error::InvalidConfig(format!("ratio must look like A:B, got {text:?}"));
    if parts.len() != 2 {
        return Err(err());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| err())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| err())?;
    if !(a > 0.0 && b > 0.0) {
        return Err(err());
    }
    Ok((a, b))
}

fn load_raw(path: &PathBuf, params: &RadarParams) -> Result<ComplexImage, Error> {
    let raw = read_image(path)?;
    let dims = params.raw_dims();
    if (raw.rows(), raw.cols()) != dims {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{} raw array for this config", dims.0, dims.1),
            got: format!("{}x{}", raw.rows(), raw.cols()),
        });
    }
    Ok(raw)
}

fn cmd_simulate(a: SimulateArgs) -> Result<(), Error> {
    let params = RadarParams::from_config_file(&a.config)?;
    let geo = derive_geometry(&params)?;
    let scene = PointScene::from_csv_file(&a.scene)?;
    scene.check_in_grid(params.n_azimuth, params.n_range)?;
    let mut raw = generate_raw(&scene, &geo)?;
    if let Some(snr_db) = a.noise_db {
        raw = add_noise(
            &raw,
            &NoiseSpec {
                snr_db,
                seed: a.seed,
            },
        )?;
    }
    write_image(&raw, &a.out)?;
    println!(
        "simulate: {} targets -> {}x{} raw samples -> {}",
        scene.targets.len(),
        raw.rows(),
        raw.cols(),
        a.out.display()
    );
    Ok(())
}

fn cmd_reconstruct(a: ReconstructArgs) -> Result<(), Error> {
    let params = RadarParams::from_config_file(&a.config)?;
    let geo = derive_geometry(&params)?;
    let raw = load_raw(&a.raw, &params)?;
    let (ra, rb) = parse_ratio(&a.ratio)?;
    let (s_a, s_r) = split_rate(a.rate, ra, rb)?;
    let pattern = make_pattern(params.raw_dims(), s_a, s_r, a.seed)?;
    let y_s = subsample(&raw, &pattern)?;
    let filters = build_filters(&geo);

    let mut cfg = SolverConfig::new(a.sparsity);
    cfg.max_iters = a.max_iters;
    let (image, report) = match a.method {
        Method::Rda => {
            let zero_filled = subsample_adjoint(&y_s, &pattern)?;
            (focus(&zero_filled, &filters)?, None)
        }
        Method::Csrda => {
            let (x, rep) = reconstruct(&y_s, &pattern, &filters, &cfg)?;
            (x, Some(rep))
        }
        Method::Cseo => {
            let (x, rep) = reconstruct_exact(&y_s, &pattern, &geo, &cfg)?;
            (x, Some(rep))
        }
    };
    write_image(&image, &a.out_image)?;
    if let Some(report_path) = &a.out_report {
        let csv = report.as_ref().map_or_else(
            || "iteration,residual_norm,mu,lambda,support_size,elapsed_seconds\n".to_string(),
            |r| r.to_csv(),
        );
        std::fs::write(report_path, csv).map_err(Error::Io)?;
    }
    let (pr, pc, pv) = image.peak();
    let iterations = report.as_ref().map_or(0, |r| r.iterations_run);
    println!(
        "reconstruct: rate {:.4} (azimuth {:.4} x range {:.4}), {} iterations, \
         peak {:.4e} at ({pr}, {pc}) -> {}",
        a.rate,
        s_a,
        s_r,
        iterations,
        pv,
        a.out_image.display()
    );
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> Result<(), Error> {
    let params = RadarParams::from_config_file(&a.config)?;
    let geo = derive_geometry(&params)?;
    let scene = PointScene::from_csv_file(&a.scene)?;
    scene.check_in_grid(params.n_azimuth, params.n_range)?;
    let raw = load_raw(&a.raw, &params)?;
    let (ra, rb) = parse_ratio(&a.ratio)?;
    let cseo_fits = params.n_azimuth <= CSEO_MAX_SCENE && params.n_range <= CSEO_MAX_SCENE;
    if a.with_cseo && !cseo_fits {
        eprintln!(
            "note: scene {}x{} exceeds the {}x{} exact-solver guard; sweeping csrda only",
            params.n_azimuth, params.n_range, CSEO_MAX_SCENE, CSEO_MAX_SCENE
        );
    }
    let filters = build_filters(&geo);
    let mut cfg = SolverConfig::new(a.sparsity);
    cfg.max_iters = a.max_iters;

    let mut csv =
        String::from("method,rate,trial,seed,detections,misses,false_alarms,success\n");
    for (rate_idx, &rate) in a.rates.iter().enumerate() {
        let (s_a, s_r) = split_rate(rate, ra, rb)?;
        for trial in 0..a.trials {
            let seed = a.seed + 1000 * rate_idx as u64 + trial as u64;
            let pattern = make_pattern(params.raw_dims(), s_a, s_r, seed)?;
            let y_s = subsample(&raw, &pattern)?;

            let mut score = |method: &str, x: &ComplexImage| -> Result<(), Error> {
                let m = support_metrics(&scene, x, a.threshold_db)?;
                let success = m.misses == 0 && m.false_alarms == 0;
                csv.push_str(&format!(
                    "{method},{rate},{trial},{seed},{},{},{},{}\n",
                    m.detections, m.misses, m.false_alarms, success
                ));
                Ok(())
            };
            let (x, _) = reconstruct(&y_s, &pattern, &filters, &cfg)?;
            score("csrda", &x)?;
            if a.with_cseo && cseo_fits {
                let (x, _) = reconstruct_exact(&y_s, &pattern, &geo, &cfg)?;
                score("cseo", &x)?;
            }
        }
    }
    std::fs::write(&a.out, &csv).map_err(Error::Io)?;
    println!(
        "sweep: {} rates x {} trials -> {}",
        a.rates.len(),
        a.trials,
        a.out.display()
    );
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Result<(), Error> {
    let mut csv = String::from("method,n,u_eta,u_tau,seconds_per_iteration\n");
    let mut cfg = SolverConfig::new(3);
    cfg.max_iters = 1;
    cfg.tol = 0.0;

    for &n in &a.sizes {
        if n < 4 {
            eprintln!("note: skipping size {n} (too small to iterate)");
            continue;
        }
        let params = csar_core::testing::tiny_params(n, n, 16, 12);
        let geo = derive_geometry(&params)?;
        let filters = build_filters(&geo);
        let pattern = make_pattern(params.raw_dims(), a.rate, a.rate, a.seed)?;
        let truth = csar_core::testing::random_sparse_image(n, n, 3, a.seed);
        let y_s = subsample(&csar_core::apobs::approx_observe(&truth, &filters)?, &pattern)?;
        let start = Instant::now();
        reconstruct(&y_s, &pattern, &filters, &cfg)?;
        csv.push_str(&format!(
            "csrda,{n},16,12,{}\n",
            start.elapsed().as_secs_f64()
        ));
    }

    let n = 32;
    for &u in &a.tbp {
        if n > CSEO_MAX_SCENE {
            eprintln!("note: skipping cseo at n = {n} (size guard)");
            continue;
        }
        let params = csar_core::testing::tiny_params(n, n, u, 12);
        let geo = derive_geometry(&params)?;
        let pattern = make_pattern(params.raw_dims(), a.rate, a.rate, a.seed)?;
        let truth = csar_core::testing::random_sparse_image(n, n, 3, a.seed);
        let y_s = subsample(&csar_core::sim::exact_observe(&truth, &geo)?, &pattern)?;
        let start = Instant::now();
        reconstruct_exact(&y_s, &pattern, &geo, &cfg)?;
        csv.push_str(&format!(
            "cseo,{n},{u},12,{}\n",
            start.elapsed().as_secs_f64()
        ));
    }
    std::fs::write(&a.out, &csv).map_err(Error::Io)?;
    println!("bench: -> {}", a.out.display());
    Ok(())
}

fn cmd_export(a: ExportArgs) -> Result<(), Error> {
    if a.db_floor >= 0.0 {
        return Err(Error::InvalidParams(format!(
            "db-floor must be negative, got {}",
            a.db_floor
        )));
    }
    let image = read_image(&a.image)?;
    let (_, _, peak) = image.peak();
    let header = format!("P5\n{} {}\n65535\n", image.cols(), image.rows());
    let mut bytes: Vec<u8> = header.into_bytes();
    for r in 0..image.rows() {
        for c in 0..image.cols() {
            let mag = image.at(r, c).norm();
            let level = if peak == 0.0 || mag == 0.0 {
                0.0
            } else {
                let db = 20.0 * (mag / peak).log10();
                ((db - a.db_floor) / -a.db_floor).clamp(0.0, 1.0)
            };
            let v = (level * 65535.0).round() as u16;
            bytes.extend_from_slice(&v.to_be_bytes());
        }
    }
    std::fs::write(&a.out, &bytes).map_err(Error::Io)?;
    println!(
        "export: {}x{} image, floor {} dB -> {}",
        image.rows(),
        image.cols(),
        a.db_floor,
        a.out.display()
    );
    Ok(())
}
