use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use convexity::bodies::load;
use convexity::parkability::park;
use convexity::plot::{section_svg, silhouette_svg};
use convexity::report::{analyze, AnalysisConfig};
use convexity::{ConvexBody, Error, Tolerances, Vector};

#[derive(Parser)]
#[command(
    name = "convexity",
    version,
    about = "Symmetry, parkability and ellipsoid tests for convex bodies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every predicate on a body and print a JSON report.
    Analyze(AnalyzeArgs),
    /// Find a translation moving C inside B so that it contains the origin.
    Park {
        c: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a plane section or the shadow of a 3D body as SVG.
    Plot(PlotArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    /// Thresholds for discretized smooth bodies.
    Default,
    /// Tight thresholds for exact polytopes.
    Exact,
}

#[derive(Args)]
struct AnalyzeArgs {
    body: PathBuf,
    /// Sampled directions for the scans.
    #[arg(long, default_value_t = 512)]
    dirs: usize,
    /// Offset fractions of the section planes, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    offsets: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directions for the weak Blaschke plane search.
    #[arg(long, default_value_t = 64)]
    blaschke_dirs: usize,
    /// Directions for the chord midpoint planes.
    #[arg(long, default_value_t = 64)]
    chord_dirs: usize,
    /// Random flags for the subspace involution audit.
    #[arg(long, default_value_t = 64)]
    flags: usize,
    /// Exit with status 1 when any predicate fails.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Record per-predicate runtime (the report is then not reproducible).
    #[arg(long)]
    timings: bool,
    /// Identifier echoed in the report; defaults to the file name.
    #[arg(long)]
    id: Option<String>,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct TolArgs {
    #[arg(long, value_enum, default_value = "default")]
    tol_profile: Profile,
    #[arg(long)]
    tol_geom: Option<f64>,
    #[arg(long)]
    tol_lp: Option<f64>,
    #[arg(long)]
    tol_section: Option<f64>,
    #[arg(long)]
    tol_symmetry: Option<f64>,
    #[arg(long)]
    tol_collinearity: Option<f64>,
    #[arg(long)]
    tol_coplanarity: Option<f64>,
    #[arg(long)]
    tol_ellipsoid: Option<f64>,
    #[arg(long)]
    tol_projection: Option<f64>,
    #[arg(long)]
    tol_blaschke: Option<f64>,
    #[arg(long)]
    tol_psi: Option<f64>,
    #[arg(long)]
    tol_involution: Option<f64>,
}

impl TolArgs {
    fn resolve(&self) -> Tolerances {
        let mut t = match self.tol_profile {
            Profile::Default => Tolerances::default(),
            Profile::Exact => Tolerances::exact(),
        };
        let overrides = [
            (self.tol_geom, &mut t.geom),
            (self.tol_lp, &mut t.lp),
            (self.tol_section, &mut t.section),
            (self.tol_symmetry, &mut t.symmetry),
            (self.tol_collinearity, &mut t.collinearity),
            (self.tol_coplanarity, &mut t.coplanarity),
            (self.tol_ellipsoid, &mut t.ellipsoid),
            (self.tol_projection, &mut t.projection),
            (self.tol_blaschke, &mut t.blaschke),
            (self.tol_psi, &mut t.psi),
            (self.tol_involution, &mut t.involution),
        ];
        for (value, slot) in overrides {
            if let Some(v) = value {
                *slot = v;
            }
        }
        t
    }
}

#[derive(Args)]
struct PlotArgs {
    body: PathBuf,
    /// Section plane as `nx,ny,nz,offset` for `{n . x = offset}`.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required_unless_present = "silhouette",
        conflicts_with = "silhouette"
    )]
    plane: Option<Vec<f64>>,
    /// Shadow direction as `dx,dy,dz`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    silhouette: Option<Vec<f64>>,
    #[arg(long)]
    out: PathBuf,
}

fn load_body(path: &Path) -> Result<ConvexBody, Error> {
    load(path).map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(
            io.kind(),
            format!("{}: {io}", path.display()),
        )),
        other => other,
    })
}

fn write_output(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run_analyze(args: &AnalyzeArgs) -> Result<ExitCode, Error> {
    let body = load_body(&args.body)?;
    let mut config = AnalysisConfig {
        dirs: args.dirs,
        seed: args.seed,
        blaschke_dirs: args.blaschke_dirs,
        chord_dirs: args.chord_dirs,
        flags: args.flags,
        tolerances: args.tol.resolve(),
        timings: args.timings,
        ..AnalysisConfig::default()
    };
    if let Some(offsets) = &args.offsets {
        if offsets
            .iter()
            .any(|f| !(-1.0..=1.0).contains(f) || !f.is_finite())
        {
            return Err(Error::Precondition(
                "offset fractions must lie in [-1, 1]".into(),
            ));
        }
        config.offsets = offsets.clone();
    }
    let id = match &args.id {
        Some(id) => id.clone(),
        None => args
            .body
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
    };
    let report = analyze(&id, &body, &config);
    let Format::Json = args.format;
    write_output(&report.to_json(), args.out.as_deref())?;
    if args.strict && !report.all_passed {
        for p in report.failed() {
            eprintln!("failed: {} ({})", p.name, p.anchor);
            for w in &p.witnesses {
                eprintln!("  witness: {w}");
            }
        }
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

/// Rounds to 12 significant digits.
fn significant(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("formatted float parses")
}

#[derive(Serialize)]
struct ParkOutput {
    status: convexity::Status,
    witness: Option<Vec<f64>>,
    margin: f64,
}

fn run_park(c: &Path, b: &Path, out: Option<&Path>) -> Result<ExitCode, Error> {
    let (c, b) = (load_body(c)?, load_body(b)?);
    let eps = Tolerances::default().geom;
    let result = park(&c, &b, eps)?;
    let output = ParkOutput {
        status: result.status,
        witness: result
            .witness
            .as_ref()
            .map(|w| w.coords().iter().map(|&x| significant(x)).collect()),
        margin: significant(result.margin),
    };
    write_output(
        &(serde_json::to_string_pretty(&output).expect("park result serializes") + "\n"),
        out,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn run_plot(args: &PlotArgs) -> Result<ExitCode, Error> {
    let body = load_body(&args.body)?;
    let svg = match (&args.plane, &args.silhouette) {
        (Some(p), None) if p.len() == 4 => section_svg(
            &body,
            &Vector::new(p[..3].to_vec()),
            p[3],
            &Tolerances::default(),
        )?,
        (None, Some(d)) if d.len() == 3 => silhouette_svg(&body, &Vector::new(d.clone()))?,
        _ => {
            return Err(Error::Precondition(
                "expected --plane nx,ny,nz,offset or --silhouette dx,dy,dz".into(),
            ))
        }
    };
    fs::write(&args.out, svg)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(args) => run_analyze(args),
        Command::Park { c, b, out } => run_park(c, b, out.as_deref()),
        Command::Plot(args) => run_plot(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
