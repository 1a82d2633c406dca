//! Command line frontend: map inspection, validation, label extraction,
//! SVG rendering, and latency measurement.
//!
//! Exit codes: 0 success, 1 domain error (validation failure, nothing
//! produced), 2 input or parse error.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use lanemark::fixtures::synthetic_grid;
use lanemark::geometry::RoiSpec;
use lanemark::io::{read_osm_file, ParseReport, Projector};
use lanemark::label::{ExtractConfig, Extractor, LocalInstanceSet, Stage};
use lanemark::map::{validate_map, LaneletMap, Severity};
use lanemark::pose::ReferencePose;
use lanemark::repr::{render_svg, serialize_json, serialize_tensors, to_fixed_point_set};
use lanemark::routing::{build_routing_graph, PathLimits};
use lanemark::Error;

/// Pose count used when `bench` has to invent its own sweep.
const DEFAULT_BENCH_POSES: usize = 100;
/// Jitter seed for `bench --synthetic`; fixed so numbers are comparable.
const BENCH_GRID_SEED: u64 = 7;

#[derive(Parser)]
#[command(name = "lanemark", version, about = "Local map instance labels from Lanelet2-style maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print element counts, routing edge counts, and the bounding box
    Info(MapArgs),
    /// List structural findings; exit 1 when any has error severity
    Validate(MapArgs),
    /// Generate labels for one pose or a pose stream and write them out
    Extract(ExtractArgs),
    /// Shorthand for extract with the SVG output format
    Render(RenderArgs),
    /// Measure per-pose extraction latency and write a JSON report
    Bench(BenchArgs),
}

#[derive(Args)]
struct MapArgs {
    /// Map file in the OSM XML subset
    #[arg(long)]
    map: PathBuf,
    /// Projection: "local" or "tangent:LAT,LON"
    #[arg(long, default_value = "local")]
    projector: String,
}

#[derive(Args)]
struct SceneArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Reference pose "x,y,yaw" or "x,y,yaw,z,roll,pitch" (radians, metres)
    #[arg(long, allow_hyphen_values = true)]
    pose: Option<String>,
    /// Pose-stream file: one pose per line, '#' starts a comment
    #[arg(long)]
    poses: Option<PathBuf>,
    /// ROI extents "forward,backward,left,right" in metres
    #[arg(long)]
    roi: Option<String>,
    /// Submap pre-selection margin in metres
    #[arg(long)]
    margin: Option<f64>,
    /// Points per label after resampling
    #[arg(long, default_value_t = 20)]
    points: usize,
    /// Pipeline stage: raw|cropped|resampled
    #[arg(long, default_value = "resampled")]
    stage: String,
    /// Output path; pose streams write NAME.LINE.EXT next to it
    #[arg(long)]
    out: PathBuf,
    /// Cap on enumerated lanelet paths
    #[arg(long)]
    max_paths: Option<usize>,
    /// Process pose-stream entries on worker threads; bytes are unchanged
    #[arg(long)]
    parallel: bool,
}

#[derive(Args)]
struct ExtractArgs {
    #[command(flatten)]
    scene: SceneArgs,
    /// Output format: json|tensors|svg
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    scene: SceneArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Map file; mutually exclusive with --synthetic
    #[arg(long)]
    map: Option<PathBuf>,
    /// Projection for --map: "local" or "tangent:LAT,LON"
    #[arg(long, default_value = "local")]
    projector: String,
    /// Benchmark on a generated grid with this many lanelets
    #[arg(long)]
    synthetic: Option<usize>,
    /// Pose-stream file; default is a sweep across the map
    #[arg(long)]
    poses: Option<PathBuf>,
    /// ROI extents "forward,backward,left,right" in metres
    #[arg(long)]
    roi: Option<String>,
    /// Submap pre-selection margin in metres
    #[arg(long)]
    margin: Option<f64>,
    /// Points per label after resampling
    #[arg(long, default_value_t = 20)]
    points: usize,
    /// Repetitions of the pose set
    #[arg(long, default_value_t = 1)]
    reps: usize,
    /// Report path; default lanemark_bench.json
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq)]
enum OutputFormat {
    Json,
    Tensors,
    Svg,
}

impl OutputFormat {
    fn parse(s: &str) -> Option<OutputFormat> {
        match s {
            "json" => Some(OutputFormat::Json),
            "tensors" => Some(OutputFormat::Tensors),
            "svg" => Some(OutputFormat::Svg),
            _ => None,
        }
    }
}

enum Failure {
    /// Bad flag combination or value syntax.
    Usage(String),
    /// Reported by the library; mapped onto an exit code by kind.
    Lib(Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Lib(e) => lib_exit_code(e),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "{msg}"),
            Failure::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Lib(e)
    }
}

/// 2 for malformed input, 1 for domain failures (including I/O: the command
/// produced nothing, but the request itself was well-formed).
fn lib_exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::Binary { .. }
        | Error::Structural { .. }
        | Error::Degenerate(_)
        | Error::Unsupported(_) => 2,
        Error::Invalid { .. } | Error::PathLimit { .. } | Error::Traceability { .. } | Error::Io(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Info(args) => cmd_info(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Extract(args) => {
            let format = OutputFormat::parse(&args.format)
                .ok_or_else(|| Failure::Usage(format!("unknown format '{}'", args.format)))?;
            cmd_extract(args.scene, format)
        }
        Command::Render(args) => cmd_extract(args.scene, OutputFormat::Svg),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn load_map(path: &Path, projector_spec: &str) -> Result<LaneletMap, Failure> {
    let projector = Projector::parse_spec(projector_spec)?;
    let (map, report) = read_osm_file(path, &projector)?;
    warn_report(path, &report);
    Ok(map)
}

fn warn_report(path: &Path, report: &ParseReport) {
    for (line, message) in &report.warnings {
        eprintln!("warning: {}:{line}: {message}", path.display());
    }
}

fn cmd_info(args: MapArgs) -> Result<u8, Failure> {
    let map = load_map(&args.map, &args.projector)?;
    let (successors, adjacencies) = build_routing_graph(&map)?.edge_counts();
    println!("points: {}", map.point_count());
    println!("linestrings: {}", map.linestring_count());
    println!("lanelets: {}, successor edges: {}", map.lanelet_count(), successors);
    println!("lateral adjacency pairs: {adjacencies}");
    match bounding_box(&map) {
        Some((min, max)) => println!(
            "bounding box: [{:.3}, {:.3}] .. [{:.3}, {:.3}]",
            min.0, min.1, max.0, max.1
        ),
        None => println!("bounding box: empty"),
    }
    Ok(0)
}

fn bounding_box(map: &LaneletMap) -> Option<((f64, f64), (f64, f64))> {
    let mut points = map.points();
    let first = points.next()?.position;
    let mut min = (first.x, first.y);
    let mut max = min;
    for p in points {
        min.0 = min.0.min(p.position.x);
        min.1 = min.1.min(p.position.y);
        max.0 = max.0.max(p.position.x);
        max.1 = max.1.max(p.position.y);
    }
    Some((min, max))
}

fn cmd_validate(args: MapArgs) -> Result<u8, Failure> {
    let map = load_map(&args.map, &args.projector)?;
    let findings = validate_map(&map);
    if findings.is_empty() {
        println!("OK");
        return Ok(0);
    }
    let mut code = 0;
    for finding in &findings {
        println!("{finding}");
        if matches!(finding.severity, Severity::Error) {
            code = 1;
        }
    }
    Ok(code)
}

fn cmd_extract(args: SceneArgs, format: OutputFormat) -> Result<u8, Failure> {
    let map = load_map(&args.map.map, &args.map.projector)?;
    let extractor = Extractor::new(map)?;
    let roi = parse_roi(args.roi.as_deref(), args.margin)?;
    let stage = Stage::parse(&args.stage)
        .ok_or_else(|| Failure::Usage(format!("unknown stage '{}'", args.stage)))?;
    let mut limits = PathLimits::default();
    if let Some(k) = args.max_paths {
        limits.max_paths = k;
    }
    let config = ExtractConfig { point_count: args.points, stage, limits };

    match (&args.pose, &args.poses) {
        (Some(pose), None) => {
            let pose = ReferencePose::parse_fields(pose)
                .map_err(|m| Failure::Usage(format!("invalid --pose: {m}")))?;
            let set = extractor.generate(&pose, &roi, &config)?;
            let bytes = format_output(&set, format, args.points)?;
            fs::write(&args.out, bytes).map_err(Error::from)?;
            println!("wrote {}", args.out.display());
            Ok(0)
        }
        (None, Some(stream)) => {
            extract_stream(&extractor, stream, &roi, &config, format, &args.out, args.parallel)
        }
        _ => Err(Failure::Usage("pass exactly one of --pose or --poses".into())),
    }
}

fn extract_stream(
    extractor: &Extractor,
    stream: &Path,
    roi: &RoiSpec,
    config: &ExtractConfig,
    format: OutputFormat,
    out: &Path,
    parallel: bool,
) -> Result<u8, Failure> {
    let (poses, rejected) = read_pose_stream(stream)?;
    let pose_values: Vec<ReferencePose> = poses.iter().map(|(_, p)| *p).collect();
    let results = if parallel {
        extractor.generate_batch(&pose_values, roi, config)
    } else {
        extractor.generate_batch_sequential(&pose_values, roi, config)
    };

    let mut written = 0usize;
    for ((line, _), result) in poses.iter().zip(results) {
        match result.and_then(|set| {
            let bytes = format_output_lib(&set, format, config.point_count)?;
            fs::write(indexed_path(out, *line), bytes).map_err(Error::from)?;
            Ok(())
        }) {
            Ok(()) => {
                println!("wrote {}", indexed_path(out, *line).display());
                written += 1;
            }
            Err(e) => eprintln!("warning: pose line {line}: {e}"),
        }
    }
    if written == 0 {
        eprintln!("error: no output produced ({rejected} pose line(s) rejected)");
        return Ok(1);
    }
    Ok(0)
}

/// Pose lines with their 1-based file line numbers, plus the rejected count.
fn read_pose_stream(path: &Path) -> Result<(Vec<(usize, ReferencePose)>, usize), Failure> {
    let text = fs::read_to_string(path).map_err(Error::from)?;
    let mut poses = Vec::new();
    let mut rejected = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match ReferencePose::parse_fields(line) {
            Ok(p) => poses.push((idx + 1, p)),
            Err(msg) => {
                eprintln!("warning: pose line {}: {msg}", idx + 1);
                rejected += 1;
            }
        }
    }
    Ok((poses, rejected))
}

/// labels.json + line 4 -> labels.4.json
fn indexed_path(out: &Path, line: usize) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = match out.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}.{line}.{ext}"),
        None => format!("{stem}.{line}"),
    };
    out.with_file_name(name)
}

fn format_output(
    set: &LocalInstanceSet,
    format: OutputFormat,
    points: usize,
) -> Result<Vec<u8>, Failure> {
    format_output_lib(set, format, points).map_err(Failure::from)
}

fn format_output_lib(
    set: &LocalInstanceSet,
    format: OutputFormat,
    points: usize,
) -> Result<Vec<u8>, Error> {
    Ok(match format {
        OutputFormat::Json => serialize_json(set),
        OutputFormat::Tensors => serialize_tensors(&to_fixed_point_set(set, points)?),
        OutputFormat::Svg => render_svg(set)?.into_bytes(),
    })
}

fn parse_roi(spec: Option<&str>, margin: Option<f64>) -> Result<RoiSpec, Failure> {
    let mut roi = RoiSpec::default();
    if let Some(s) = spec {
        let fields: Vec<f64> = s
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| Failure::Usage(format!("invalid --roi '{s}': {e}")))?;
        if fields.len() != 4 {
            return Err(Failure::Usage(format!(
                "--roi needs forward,backward,left,right (got {} field(s))",
                fields.len()
            )));
        }
        roi.forward = fields[0];
        roi.backward = fields[1];
        roi.left = fields[2];
        roi.right = fields[3];
    }
    if let Some(m) = margin {
        roi.margin = m;
    }
    Ok(roi)
}

fn cmd_bench(args: BenchArgs) -> Result<u8, Failure> {
    let map = match (&args.synthetic, &args.map) {
        (Some(n), None) => synthetic_grid(*n, BENCH_GRID_SEED),
        (None, Some(path)) => load_map(path, &args.projector)?,
        _ => return Err(Failure::Usage("pass exactly one of --map or --synthetic".into())),
    };
    let extractor = Extractor::new(map)?;
    let roi = parse_roi(args.roi.as_deref(), args.margin)?;
    let config = ExtractConfig {
        point_count: args.points,
        stage: Stage::Resampled,
        limits: PathLimits::default(),
    };
    let poses: Vec<ReferencePose> = match &args.poses {
        Some(path) => read_pose_stream(path)?.0.into_iter().map(|(_, p)| p).collect(),
        None => pose_sweep(extractor.map(), DEFAULT_BENCH_POSES),
    };
    if poses.is_empty() {
        return Err(Failure::Usage("bench needs at least one pose".into()));
    }
    if args.reps == 0 {
        return Err(Failure::Usage("--reps must be at least 1".into()));
    }

    for pose in &poses {
        // Warmup pass; also surfaces systematic failures before timing starts.
        let _ = extractor.generate(pose, &roi, &config);
    }

    let mut samples_ms = Vec::with_capacity(poses.len() * args.reps);
    let mut failed = 0usize;
    for _ in 0..args.reps {
        for pose in &poses {
            let start = Instant::now();
            let produced = extractor
                .generate(pose, &roi, &config)
                .and_then(|set| to_fixed_point_set(&set, config.point_count))
                .map(|fps| serialize_tensors(&fps));
            match produced {
                Ok(bytes) => {
                    samples_ms.push(start.elapsed().as_secs_f64() * 1e3);
                    std::hint::black_box(bytes.len());
                }
                Err(e) => {
                    if failed == 0 {
                        eprintln!("warning: pose skipped: {e}");
                    }
                    failed += 1;
                }
            }
        }
    }
    if samples_ms.is_empty() {
        eprintln!("error: all {failed} extraction(s) failed");
        return Ok(1);
    }

    let mean = samples_ms.iter().sum::<f64>() / samples_ms.len() as f64;
    let mut sorted = samples_ms.clone();
    sorted.sort_by(f64::total_cmp);
    let p50 = percentile(&sorted, 0.50);
    let p99 = percentile(&sorted, 0.99);

    let out_path = args.out.unwrap_or_else(|| PathBuf::from("lanemark_bench.json"));
    let report = serde_json::json!({
        "lanelets": extractor.map().lanelet_count(),
        "poses": poses.len(),
        "reps": args.reps,
        "samples": samples_ms.len(),
        "failed": failed,
        "point_count": config.point_count,
        "mean_ms": mean,
        "p50_ms": p50,
        "p99_ms": p99,
    });
    let text = serde_json::to_string_pretty(&report).expect("report serialization");
    fs::write(&out_path, text).map_err(Error::from)?;

    println!("samples: {} ({} poses x {} reps)", samples_ms.len(), poses.len(), args.reps);
    println!("mean: {mean:.3} ms, p50: {p50:.3} ms, p99: {p99:.3} ms");
    println!("report: {}", out_path.display());
    Ok(0)
}

/// Nearest-rank percentile; a single sample reports itself for every rank.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let rank = ((sorted.len() as f64) * q).ceil() as usize;
    sorted[rank.saturating_sub(1).min(sorted.len() - 1)]
}

/// Evenly spaced poses along the map's horizontal midline.
fn pose_sweep(map: &LaneletMap, count: usize) -> Vec<ReferencePose> {
    let Some((min, max)) = bounding_box(map) else {
        return Vec::new();
    };
    let mid_y = 0.5 * (min.1 + max.1);
    (0..count)
        .map(|i| {
            let t = if count > 1 { i as f64 / (count - 1) as f64 } else { 0.5 };
            ReferencePose::planar(min.0 + t * (max.0 - min.0), mid_y, 0.0)
        })
        .collect()
}
