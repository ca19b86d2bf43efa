mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qbarcode::dirac::{betti_from_laplacian, dirac_operator, persistent_laplacian, SpectrumDump, DEFAULT_RANK_TOL};
use qbarcode::persistence::{bottleneck, reduce, render_svg, render_text, PersistenceDiagram};
use qbarcode::phase::{sweep, CloudMode, Probe, ScanConfig};
use qbarcode::simplicial::{default_eps_max, vr_filtration, DEFAULT_MAX_DIM};
use qbarcode::statecloud::{ground_states, phi_map, DegeneracyPolicy, Model, StateCloud, DEFAULT_GAP_TOL};
use qbarcode::Error;

use output::{round4, significant12, write_atomic};

#[derive(Parser, Debug)]
#[command(name = "qbarcode", version, about = "Persistent homology of quantum ground-state clouds")]
struct Cli {
    /// Worker threads (defaults to the number of logical processors).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep the model parameter and report phase transitions.
    Scan(ScanArgs),
    /// Write the state cloud of a sweep as CSV.
    Cloud(CloudArgs),
    /// Persistence barcode of a cloud CSV.
    Barcode(BarcodeArgs),
    /// Persistent Dirac spectrum of a cloud CSV.
    Dirac(DiracArgs),
    /// Bottleneck distance between two diagram files.
    Bottleneck(BottleneckArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModelKind {
    Ssh,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Global,
    Window,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DegeneracyArg {
    Strict,
    Continuation,
}

impl From<DegeneracyArg> for DegeneracyPolicy {
    fn from(d: DegeneracyArg) -> Self {
        match d {
            DegeneracyArg::Strict => DegeneracyPolicy::Strict,
            DegeneracyArg::Continuation => DegeneracyPolicy::Continuation,
        }
    }
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    /// Number of sites.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    v: Option<f64>,
    #[arg(long)]
    w: Option<f64>,
}

impl ModelArgs {
    fn apply(&self, base: Model) -> Model {
        let Model::Ssh { v, w, n_sites } = base;
        match self.model.unwrap_or(ModelKind::Ssh) {
            ModelKind::Ssh => Model::Ssh {
                v: self.v.unwrap_or(v),
                w: self.w.unwrap_or(w),
                n_sites: self.n.unwrap_or(n_sites),
            },
        }
    }
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, allow_hyphen_values = true)]
    lmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lmax: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    /// Window halfwidth in sweep steps.
    #[arg(long)]
    window: Option<usize>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Probe interval `k:eps1:eps2`; repeatable.
    #[arg(long = "probe", value_parser = parse_probe)]
    probes: Vec<Probe>,
    #[arg(long)]
    max_dim: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<f64>,
    #[arg(long)]
    rank_tol: Option<f64>,
    #[arg(long)]
    gap_tol: Option<f64>,
    #[arg(long, value_enum)]
    degeneracy: Option<DegeneracyArg>,
    /// Scale every observable to unit operator norm.
    #[arg(long)]
    normalize: bool,
    /// Record Dirac spectra per probe in the report.
    #[arg(long)]
    spectra: bool,
    /// JSON scan configuration; explicit flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct CloudArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, allow_hyphen_values = true, default_value_t = -1.0)]
    lmin: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    lmax: f64,
    #[arg(long, default_value_t = 0.1)]
    step: f64,
    #[arg(long, default_value_t = DEFAULT_GAP_TOL)]
    gap_tol: f64,
    #[arg(long, value_enum, default_value = "continuation")]
    degeneracy: DegeneracyArg,
    #[arg(long)]
    normalize: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct BarcodeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
    max_dim: usize,
    /// Largest filtration scale (defaults to half the cloud diameter).
    #[arg(long)]
    eps_max: Option<f64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DiracArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    eps2: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    xi: f64,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    rank_tol: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct BottleneckArgs {
    first: PathBuf,
    second: PathBuf,
    #[arg(long, default_value_t = 0)]
    dim: usize,
}

fn parse_probe(s: &str) -> Result<Probe, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn read_text(path: &Path) -> qbarcode::Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))
}

fn read_cloud(path: &Path) -> qbarcode::Result<StateCloud> {
    let file = fs::File::open(path).map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    StateCloud::read_csv(file)
}

fn write_output(path: &Path, bytes: &[u8]) -> qbarcode::Result<()> {
    write_atomic(path, bytes).map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))
}

fn scan_config(args: &ScanArgs) -> qbarcode::Result<ScanConfig> {
    let mut config = match &args.config {
        Some(path) => serde_json::from_str::<ScanConfig>(&read_text(path)?)
            .map_err(|e| Error::Domain(format!("config {}: {e}", path.display())))?,
        None => ScanConfig::default(),
    };
    config.model = args.model.apply(config.model);
    if let Some(x) = args.lmin {
        config.lambda_min = x;
    }
    if let Some(x) = args.lmax {
        config.lambda_max = x;
    }
    if let Some(x) = args.step {
        config.step = x;
    }
    if let Some(x) = args.window {
        config.window_halfwidth = x;
    }
    if let Some(m) = args.mode {
        config.cloud_mode = match m {
            ModeArg::Global => CloudMode::Global,
            ModeArg::Window => CloudMode::Window,
        };
    }
    if !args.probes.is_empty() {
        config.probes = args.probes.clone();
    }
    if let Some(x) = args.max_dim {
        config.max_dim = x;
    }
    if let Some(x) = args.xi {
        config.xi = x;
    }
    if let Some(x) = args.rank_tol {
        config.rank_tol = x;
    }
    if let Some(x) = args.gap_tol {
        config.gap_tol = x;
    }
    if let Some(d) = args.degeneracy {
        config.degeneracy = d.into();
    }
    config.normalize_observables |= args.normalize;
    config.record_spectra |= args.spectra;
    config.validate()?;
    Ok(config)
}

fn cmd_scan(args: &ScanArgs) -> qbarcode::Result<()> {
    let config = scan_config(args)?;
    let report = sweep(&config)?;
    write_output(&args.out, report.to_json()?.as_bytes())?;
    for defect in &report.defects {
        eprintln!("warning: {defect}");
    }
    if report.transitions.is_empty() {
        println!("no transitions detected over {} parameter values", report.lambdas.len());
    }
    for t in &report.transitions {
        println!("transition in [{}, {}]: {}", round4(t.left), round4(t.right), t.probes.join(", "));
    }
    Ok(())
}

fn cmd_cloud(args: &CloudArgs) -> qbarcode::Result<()> {
    let config = ScanConfig {
        model: args.model.apply(Model::ssh(4)),
        lambda_min: args.lmin,
        lambda_max: args.lmax,
        step: args.step,
        gap_tol: args.gap_tol,
        ..ScanConfig::default()
    };
    config.validate()?;
    let lambdas = config.lambdas();
    let states = ground_states(&lambdas, &config.model, config.gap_tol, args.degeneracy.into())?;
    let mut obs = config.model.observables()?;
    if args.normalize {
        obs = obs.normalized()?;
    }
    let points = states.iter().map(|s| phi_map(s, &obs)).collect::<qbarcode::Result<Vec<_>>>()?;
    let cloud = StateCloud::new(points, lambdas, obs.labels().to_vec())?;
    let mut buf = Vec::new();
    cloud.write_csv(&mut buf)?;
    write_output(&args.out, &buf)?;
    println!("{} points in {} dimensions", cloud.len(), obs.len());
    Ok(())
}

fn cmd_barcode(args: &BarcodeArgs) -> qbarcode::Result<()> {
    let cloud = read_cloud(&args.input)?;
    let eps_max = args.eps_max.unwrap_or_else(|| default_eps_max(cloud.points()));
    let complex = vr_filtration(cloud.points(), eps_max, args.max_dim)?;
    let diagram = reduce(&complex);
    write_output(&args.out, diagram.to_json()?.as_bytes())?;
    if let Some(svg) = &args.svg {
        write_output(svg, render_svg(&diagram).as_bytes())?;
    }
    print!("{}", render_text(&diagram));
    Ok(())
}

fn cmd_dirac(args: &DiracArgs) -> qbarcode::Result<()> {
    if args.eps.is_nan() || args.eps2.is_nan() || args.eps > args.eps2 {
        return Err(Error::Domain(format!("--eps {} exceeds --eps2 {}", args.eps, args.eps2)));
    }
    let cloud = read_cloud(&args.input)?;
    let complex = vr_filtration(cloud.points(), args.eps2, args.k + 1)?;
    let op = dirac_operator(&complex, args.k, args.eps, args.eps2, args.xi)?;
    let kernel = betti_from_laplacian(&persistent_laplacian(&complex, args.k, args.eps, args.eps2)?, args.rank_tol)?;
    let dump = SpectrumDump::from(&op);
    write_output(&args.out, serde_json::to_string_pretty(&dump)?.as_bytes())?;
    println!("kernel dimension: {kernel}");
    Ok(())
}

fn cmd_bottleneck(args: &BottleneckArgs) -> qbarcode::Result<()> {
    let a = PersistenceDiagram::from_json(&read_text(&args.first)?)?;
    let b = PersistenceDiagram::from_json(&read_text(&args.second)?)?;
    println!("{}", significant12(bottleneck(&a, &b, args.dim)));
    Ok(())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::DegenerateGroundState { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: cannot start {jobs} workers: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Scan(a) => cmd_scan(a),
        Command::Cloud(a) => cmd_cloud(a),
        Command::Barcode(a) => cmd_barcode(a),
        Command::Dirac(a) => cmd_dirac(a),
        Command::Bottleneck(a) => cmd_bottleneck(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
