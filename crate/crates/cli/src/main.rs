use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use vietlab_core::audit::{run_all, AuditConfig};
use vietlab_core::experiments::{
    latschev_probe, thickening_probe, LatschevThresholds, ProbeConfig,
};
use vietlab_core::thickening::{sample_thickening_with_cap, DEFAULT_SIZE_CAP};
use vietlab_core::{
    bottleneck_distance, build_vr_filtration, io, persistence, sampling, vietoris_complex, Cover,
    Error, FiniteMetricSpace, PointCloud, ThickeningSpec,
};

const SIZE_CAP_VAR: &str = "VIETLAB_SIZE_CAP";
const DEFAULT_MAX_SIMPLICES: usize = 2_000_000;

#[derive(Parser)]
#[command(
    name = "vietlab",
    version,
    about = "Vietoris complexes, persistence and metric thickenings of finite metric spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a Vietoris complex and print its simplex counts.
    Complex(ComplexArgs),
    /// Vietoris-Rips persistence diagram.
    Persist(PersistArgs),
    /// Bottleneck distance between two diagram files.
    Compare(CompareArgs),
    /// Sample the metric thickening on a weight grid.
    Thicken(ThickenArgs),
    #[command(subcommand)]
    /// Reproducible experiments with a JSON report.
    Experiment(Experiment),
}

#[derive(Subcommand)]
enum Experiment {
    /// Dominant H1 bar of a noisy circle sample.
    Latschev(LatschevArgs),
    /// Small-scale homology of a sampled thickening against VR(X; r).
    ThickeningProbe(ProbeArgs),
    /// Randomized audits of the neighborhood constructions.
    Neighborhood(NeighborhoodArgs),
}

#[derive(Args)]
struct InputArgs {
    /// CSV file: one point per row, or a distance matrix with --distances.
    #[arg(long)]
    input: PathBuf,
    /// Read the input as a square distance matrix.
    #[arg(long)]
    distances: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum CoverType {
    Vr,
    Cech,
    CechAmbient,
    Explicit,
}

#[derive(Args)]
struct ComplexArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long = "type", value_enum, default_value = "vr")]
    cover_type: CoverType,
    #[arg(long)]
    r: Option<f64>,
    /// JSON array of arrays of point indices, for --type explicit.
    #[arg(long)]
    cover: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    max_dim: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_SIMPLICES)]
    max_simplices: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PersistArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 1)]
    max_dim: usize,
    /// Largest scale; defaults to just past the diameter.
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long, default_value_t = 1)]
    dim: usize,
}

#[derive(Args)]
struct ThickenArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long = "type", value_enum, default_value = "vr")]
    cover_type: CoverType,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    cover: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    grid_m: usize,
    #[arg(long, default_value_t = 2)]
    max_support: usize,
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    /// Directory for measures.csv and distances.csv.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
enum Shape {
    Circle,
    Hexagon,
    TorusGrid,
    File,
}

#[derive(Args)]
struct SourceArgs {
    #[arg(long, value_enum, default_value = "circle")]
    shape: Shape,
    /// Point cloud CSV for --shape file.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct LatschevArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 0.5)]
    long: f64,
    #[arg(long, default_value_t = 0.2)]
    short: f64,
}

#[derive(Args)]
struct ProbeArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 1.2)]
    r: f64,
    /// Grid resolutions to sweep.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    grid_m: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    max_support: usize,
    #[arg(long, default_value_t = 1)]
    max_dim: usize,
    /// Window start as a multiple of the nearest-neighbor radius.
    #[arg(long, default_value_t = 1.05)]
    window_lo: f64,
    #[arg(long, default_value_t = 1.5)]
    window_hi: f64,
}

#[derive(Args)]
struct NeighborhoodArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 10)]
    instances: usize,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Parameters echoed into every experiment report.
#[derive(Serialize)]
struct ExperimentConfig {
    experiment: &'static str,
    shape: Shape,
    n: usize,
    noise: f64,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    grid_m: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_support: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_dim: Option<usize>,
}

enum Failure {
    Input(String),
    Cap(String),
    Counterexample(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SampleTooLarge { .. } => Failure::Cap(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn open(path: &Path) -> Result<fs::File, Failure> {
    fs::File::open(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(input: &InputArgs) -> Result<(FiniteMetricSpace, Option<PointCloud>), Failure> {
    let file = open(&input.input)?;
    if input.distances {
        Ok((io::read_distance_matrix(file)?, None))
    } else {
        let cloud = io::read_point_cloud(file)?;
        Ok((cloud.to_metric(), Some(cloud)))
    }
}

fn build_cover(
    kind: CoverType,
    r: Option<f64>,
    cover_file: Option<&Path>,
    cloud: Option<&PointCloud>,
) -> Result<Cover, Failure> {
    let radius = || r.ok_or_else(|| Failure::Input("--r is required for this cover type".into()));
    Ok(match kind {
        CoverType::Vr => Cover::diameter(radius()?)?,
        CoverType::Cech => Cover::ball(radius()?)?,
        CoverType::CechAmbient => {
            let cloud = cloud
                .ok_or_else(|| Failure::Input("cech-ambient needs point coordinates".into()))?;
            Cover::ambient_ball(cloud.clone(), radius()?)?
        }
        CoverType::Explicit => {
            let path = cover_file
                .ok_or_else(|| Failure::Input("--cover is required for --type explicit".into()))?;
            io::read_explicit_cover(open(path)?)?
        }
    })
}

fn emit(value: &Value, output: Option<&Path>) -> Outcome {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    if let Some(path) = output {
        fs::write(path, format!("{text}\n"))?;
    }
    println!("{text}");
    Ok(())
}

fn size_cap() -> Result<usize, Failure> {
    match std::env::var(SIZE_CAP_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::Input(format!(
                "{SIZE_CAP_VAR} must be a positive integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_SIZE_CAP),
    }
}

fn cmd_complex(a: ComplexArgs) -> Outcome {
    let (space, cloud) = load(&a.input)?;
    let cover = build_cover(a.cover_type, a.r, a.cover.as_deref(), cloud.as_ref())?;
    let complex = vietoris_complex(&space, &cover, a.max_dim)?;
    if complex.len() > a.max_simplices {
        return Err(Failure::Cap(format!(
            "complex has {} simplices, above the cap of {}",
            complex.len(),
            a.max_simplices
        )));
    }
    if let Some(path) = &a.output {
        fs::write(path, io::complex_json(&complex)?)?;
    }
    emit(
        &json!({ "counts": complex.counts(), "euler_characteristic": complex.euler_characteristic() }),
        None,
    )
}

fn cmd_persist(a: PersistArgs) -> Outcome {
    let (space, _) = load(&a.input)?;
    let r_max = a.r_max.unwrap_or_else(|| space.space_diameter() + 1.0);
    let diagram = persistence(&build_vr_filtration(&space, a.max_dim, r_max)?)?;
    emit(&diagram.to_json(), a.output.as_deref())
}

fn cmd_compare(a: CompareArgs) -> Outcome {
    let x = io::read_diagram(open(&a.a)?)?;
    let y = io::read_diagram(open(&a.b)?)?;
    if x.r_max() != y.r_max() {
        eprintln!(
            "warning: diagrams were computed with different r_max ({} vs {})",
            x.r_max(),
            y.r_max()
        );
    }
    let d = bottleneck_distance(&x, &y, a.dim);
    let value = if d.is_finite() {
        json!(d)
    } else {
        json!("inf")
    };
    emit(&json!({ "dim": a.dim, "bottleneck": value }), None)
}

fn cmd_thicken(a: ThickenArgs) -> Outcome {
    let (space, cloud) = load(&a.input)?;
    let cover = build_cover(a.cover_type, a.r, a.cover.as_deref(), cloud.as_ref())?;
    let spec = ThickeningSpec::with_exponent(space, cover, a.q)?;
    let sample = sample_thickening_with_cap(&spec, a.grid_m, a.max_support, size_cap()?)?;
    if let Some(dir) = &a.output {
        io::write_thickening_dump(dir, &sample)?;
    }
    emit(
        &json!({
            "measures": sample.len(),
            "nearest_neighbor_radius": sample.nearest_neighbor_radius(),
        }),
        None,
    )
}

fn source_cloud(s: &SourceArgs) -> Result<PointCloud, Failure> {
    if s.n == 0 || !(s.noise >= 0.0) {
        return Err(Failure::Input(
            "n must be positive and noise non-negative".into(),
        ));
    }
    Ok(match s.shape {
        Shape::Circle => sampling::noisy_circle(s.n, s.noise, s.seed)?,
        Shape::Hexagon => sampling::hexagon(),
        Shape::TorusGrid => sampling::torus_grid(s.n)?,
        Shape::File => {
            let path = s
                .input
                .as_deref()
                .ok_or_else(|| Failure::Input("--input is required for --shape file".into()))?;
            io::read_point_cloud(open(path)?)?
        }
    })
}

fn base_config(experiment: &'static str, s: &SourceArgs) -> ExperimentConfig {
    ExperimentConfig {
        experiment,
        shape: s.shape,
        n: s.n,
        noise: s.noise,
        seed: s.seed,
        r: None,
        grid_m: Vec::new(),
        max_support: None,
        max_dim: None,
    }
}

fn write_report(dir: Option<&Path>, value: &Value) -> Outcome {
    match dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            emit(value, Some(&dir.join("report.json")))
        }
        None => emit(value, None),
    }
}

fn cmd_latschev(a: LatschevArgs) -> Outcome {
    let cloud = source_cloud(&a.source)?;
    let thresholds = LatschevThresholds {
        long: a.long,
        short: a.short,
    };
    let report = latschev_probe(&cloud, &thresholds)?;
    let config = base_config("latschev", &a.source);
    let value = json!({
        "config": config,
        "thresholds": thresholds,
        "report": report,
        "verdict": if report.pass { "PASS" } else { "FAIL" },
    });
    write_report(a.source.output.as_deref(), &value)
}

fn cmd_probe(a: ProbeArgs) -> Outcome {
    let cloud = source_cloud(&a.source)?;
    if !(a.r > 0.0) || a.grid_m.contains(&0) || a.max_support == 0 {
        return Err(Failure::Input(
            "r, grid_m and max_support must be positive".into(),
        ));
    }
    let cfg = ProbeConfig {
        r: a.r,
        grid_ms: a.grid_m.clone(),
        max_support: a.max_support,
        max_dim: a.max_dim,
        window: (a.window_lo, a.window_hi),
        cap: size_cap()?,
    };
    let report = thickening_probe(&cloud.to_metric(), &cfg)?;
    let config = ExperimentConfig {
        r: Some(a.r),
        grid_m: a.grid_m,
        max_support: Some(a.max_support),
        max_dim: Some(a.max_dim),
        ..base_config("thickening-probe", &a.source)
    };
    let value = json!({
        "config": config,
        "window_factors": [a.window_lo, a.window_hi],
        "report": report,
        "verdict": if report.pass { "PASS" } else { "FAIL" },
    });
    write_report(a.source.output.as_deref(), &value)
}

fn cmd_neighborhood(a: NeighborhoodArgs) -> Outcome {
    if a.eps.is_some_and(|e| !(e >= 0.0)) {
        return Err(Failure::Input("--eps must be non-negative".into()));
    }
    let cfg = AuditConfig {
        seed: a.seed,
        instances: a.instances,
        trials: a.trials,
        eps: a.eps,
        ..AuditConfig::default()
    };
    let suite = run_all(&cfg)?;
    let value = serde_json::to_value(&suite).expect("audit reports serialize");
    write_report(a.output.as_deref(), &value)?;
    if suite.pass() {
        Ok(())
    } else {
        let failed: Vec<&str> = suite
            .reports
            .iter()
            .filter(|r| !r.pass)
            .map(|r| r.check.as_str())
            .collect();
        Err(Failure::Counterexample(format!(
            "counterexamples in: {}",
            failed.join(", ")
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Complex(a) => cmd_complex(a),
        Command::Persist(a) => cmd_persist(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Thicken(a) => cmd_thicken(a),
        Command::Experiment(Experiment::Latschev(a)) => cmd_latschev(a),
        Command::Experiment(Experiment::ThickeningProbe(a)) => cmd_probe(a),
        Command::Experiment(Experiment::Neighborhood(a)) => cmd_neighborhood(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Counterexample(m)) => {
            eprintln!("audit failed: {m}");
            ExitCode::from(4)
        }
    }
}
