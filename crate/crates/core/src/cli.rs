//! Command-line front end.
//!
//! Exit codes: 0 success, 1 internal error, 2 usage or parse error,
//! 3 data-integrity error, 4 stopped early with a checkpoint saved.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};

use crate::group::{build_symmetry_action, coxeter_group, CoxeterName, MatGroup, PermGroup, SymmetryOptions};
use crate::linalg::Matrix;
use crate::polytope::{
    adjacency_decomposition, direct_decomposition, verify_inequality, Control, EnumerationConfig, EnumerationError,
    Progress, VPolytope,
};
use crate::scalar::{Rational, Scalar, Sqrt2, Sqrt3, Sqrt5};
use crate::store::{load_checkpoint, read_metadata, report, save_checkpoint, CheckpointError, OrbitDatabase};
use crate::with_group;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTEGRITY: i32 = 3;
pub const EXIT_STOPPED: i32 = 4;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Parser)]
#[command(name = "grouphull", version, about = "Exact facet enumeration for convex hulls of finite matrix groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a group and print its order and dimension.
    Group {
        /// Group name such as A3, B4, D4, F4, H3, H4 or I2_5.
        name: String,
        /// Print every element.
        #[arg(long)]
        elements: bool,
        /// Also compute the order of the symmetry group of the hull.
        #[arg(long)]
        symmetry: bool,
    },
    /// Enumerate the facet orbits of conv(G).
    Enumerate(EnumerateArgs),
    /// Check an inequality Tr(X·A) ≤ rhs over all group elements.
    Verify {
        name: String,
        /// One matrix row per line, entries separated by whitespace.
        matrix: PathBuf,
        #[arg(long, default_value = "1")]
        rhs: String,
    },
    /// Print incidence, stabilizer and rank tables of a database.
    Report {
        database: PathBuf,
        #[arg(long)]
        json: bool,
        /// Recheck every record against the group.
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    pub name: String,
    /// Enumerate every facet with double description.
    #[arg(long, conflicts_with = "adjacency")]
    pub direct: bool,
    /// Adjacency decomposition (the default).
    #[arg(long)]
    pub adjacency: bool,
    #[arg(long, default_value_t = 0, help = "Worker threads (0 = all cores)")]
    pub threads: usize,
    /// Save progress here between orbits.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Seconds between checkpoint saves.
    #[arg(long, default_value_t = 60)]
    pub checkpoint_interval: u64,
    /// Continue from a saved database.
    #[arg(long)]
    pub resume: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Stop after processing this many orbits in this run.
    #[arg(long)]
    pub max_orbits: Option<usize>,
    /// Facets with more vertices get their ridges by recursion.
    #[arg(long)]
    pub threshold: Option<usize>,
    #[arg(long)]
    pub no_early_termination: bool,
    /// Restrict the symmetry group to left and right multiplication.
    #[arg(long)]
    pub no_transpose: bool,
    #[arg(long)]
    pub no_normalizer: bool,
    /// Write the final database here.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
    /// Print one line per processed orbit on stderr.
    #[arg(long, short)]
    pub verbose: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Integrity(String),
    #[error("stopped early; progress saved to {}", .0.display())]
    Stopped(PathBuf),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Integrity(_) => EXIT_INTEGRITY,
            CliError::Stopped(_) => EXIT_STOPPED,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<CheckpointError> for CliError {
    fn from(e: CheckpointError) -> Self {
        match e {
            CheckpointError::Io(e) => CliError::Internal(format!("i/o error: {e}")),
            e => CliError::Integrity(e.to_string()),
        }
    }
}

fn parse<I, T>(args: I) -> Result<Cli, i32>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(args).map_err(|e| {
        let _ = e.print();
        match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
            _ => EXIT_USAGE,
        }
    })
}

fn finish(result: Result<(), CliError>) -> i32 {
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Output goes to `out`; diagnostics to stderr.
pub fn run_with<I, T>(args: I, out: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse(args) {
        Ok(cli) => finish(execute(cli.command, out, &AtomicBool::new(false))),
        Err(code) => code,
    }
}

/// Entry point of the binary; installs a Ctrl-C handler.
pub fn main() -> i32 {
    let cli = match parse(std::env::args_os()) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let stop = Arc::new(AtomicBool::new(false));
    let flag = stop.clone();
    let _ = ctrlc::set_handler(move || {
        if flag.swap(true, Ordering::SeqCst) {
            std::process::exit(130);
        }
        eprintln!("interrupt: saving at the next orbit boundary (press again to abort)");
    });
    finish(execute(cli.command, &mut std::io::stdout().lock(), &stop))
}

fn execute(cmd: Command, out: &mut dyn std::io::Write, stop: &AtomicBool) -> Result<(), CliError> {
    let write = |out: &mut dyn std::io::Write, s: &str| -> Result<(), CliError> {
        out.write_all(s.as_bytes()).map_err(|e| CliError::Internal(e.to_string()))
    };
    match cmd {
        Command::Group { name, elements, symmetry } => {
            let name = parse_name(&name)?;
            let g = coxeter_group(name).map_err(|e| CliError::Usage(e.to_string()))?;
            let text = with_group!(&g, g => group_text(g, elements, symmetry)?);
            write(out, &text)
        }
        Command::Enumerate(args) => {
            let text = enumerate(&args, stop)?;
            write(out, &text)
        }
        Command::Verify { name, matrix, rhs } => {
            let name = parse_name(&name)?;
            let g = coxeter_group(name).map_err(|e| CliError::Usage(e.to_string()))?;
            let src = fs::read_to_string(&matrix)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", matrix.display())))?;
            let text = with_group!(&g, g => verify_text(g, &src, &rhs)?);
            write(out, &text)
        }
        Command::Report { database, json, verify } => {
            let text = report_text(&database, json, verify)?;
            write(out, &text)
        }
    }
}

fn parse_name(name: &str) -> Result<CoxeterName, CliError> {
    name.parse().map_err(|e: crate::group::GroupError| CliError::Usage(e.to_string()))
}

fn symmetry_group<F: Scalar>(g: &MatGroup<F>, opts: SymmetryOptions) -> Result<PermGroup, CliError> {
    build_symmetry_action(g, opts).map_err(|e| CliError::Internal(e.to_string()))
}

fn group_text<F: Scalar>(g: &MatGroup<F>, elements: bool, symmetry: bool) -> Result<String, CliError> {
    let mut s = format!("order {}, dim {}, field {}\n", g.order(), g.dim(), F::field_name());
    if symmetry {
        let sym = symmetry_group(g, SymmetryOptions::default())?;
        s.push_str(&format!("symmetry order {}\n", sym.order()));
    }
    if elements {
        for m in g.elements() {
            s.push('\n');
            s.push_str(&m.to_string());
        }
    }
    Ok(s)
}

/// Parses a square matrix: one row per line, blank lines and `#` comments
/// ignored.
pub fn parse_matrix<F: Scalar>(src: &str) -> Result<Matrix<F>, CliError> {
    let rows: Vec<Vec<F>> = src
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, l)| {
            l.split_whitespace()
                .map(|t| t.parse::<F>().map_err(|e| CliError::Usage(format!("row {}: `{t}`: {e}", i + 1))))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let m = Matrix::from_rows(rows).map_err(|e| CliError::Usage(e.to_string()))?;
    if !m.is_square() {
        return Err(CliError::Usage(format!("matrix is {}x{}, expected square", m.rows(), m.cols())));
    }
    Ok(m)
}

fn verify_text<F: Scalar>(g: &MatGroup<F>, src: &str, rhs: &str) -> Result<String, CliError> {
    let a: Matrix<F> = parse_matrix(src)?;
    let rhs: F = rhs.trim().parse().map_err(|e| CliError::Usage(format!("rhs: {e}")))?;
    if a.rows() != g.dim() {
        return Err(CliError::Usage(format!("matrix is {}x{}, the group acts in dimension {}", a.rows(), a.cols(), g.dim())));
    }
    let poly = VPolytope::from_group(g);
    let r = verify_inequality(&poly, &a, &rhs).ok_or_else(|| CliError::Internal("not a matrix polytope".into()))?;
    if !r.valid {
        return Ok(format!(
            "invalid, {} violations, max value {}, rank {}\n",
            r.violations, r.max_value, r.rank_of_a
        ));
    }
    let sym = symmetry_group(g, SymmetryOptions::default())?;
    let stab = sym.stabilizer_order(&r.incidence);
    Ok(format!(
        "valid, incidence {}, facet: {}, rank {}, stabilizer {}\n",
        r.incidence_count(),
        if r.is_facet { "yes" } else { "no" },
        r.rank_of_a,
        stab
    ))
}

fn report_text(path: &Path, json: bool, verify: bool) -> Result<String, CliError> {
    let meta = read_metadata(path)?;
    match meta.radicand {
        None => report_typed::<Rational>(path, json, verify),
        Some(2) => report_typed::<Sqrt2>(path, json, verify),
        Some(3) => report_typed::<Sqrt3>(path, json, verify),
        Some(5) => report_typed::<Sqrt5>(path, json, verify),
        Some(d) => Err(CliError::Integrity(format!("unsupported field Q(sqrt {d})"))),
    }
}

fn report_typed<F: Scalar>(path: &Path, json: bool, verify: bool) -> Result<String, CliError> {
    let db: OrbitDatabase<F> = load_checkpoint(path)?;
    if verify {
        let name = parse_name(&db.meta.group).map_err(|e| CliError::Integrity(e.to_string()))?;
        let any = coxeter_group(name).map_err(|e| CliError::Integrity(e.to_string()))?;
        with_group!(&any, g => verify_database(g, &db)?);
    }
    let r = report(&db);
    if !r.histograms_consistent() {
        return Err(CliError::Integrity("histogram totals differ from the orbit count".into()));
    }
    Ok(if json { format!("{:#}\n", r.to_json()) } else { r.to_text() })
}

fn verify_database<G: Scalar, F: Scalar>(g: &MatGroup<G>, db: &OrbitDatabase<F>) -> Result<(), CliError> {
    if G::RADICAND != F::RADICAND {
        return Err(CliError::Integrity("database field differs from the group's field".into()));
    }
    let opts = options_from_config(&db.meta.config);
    let sym = symmetry_group(g, opts)?;
    // Same field, so the text form converts losslessly.
    let db: OrbitDatabase<G> = crate::store::from_text(&crate::store::to_text(db))?;
    let poly = VPolytope::from_group(g);
    if sym.order() != db.meta.symmetry_order {
        return Err(CliError::Integrity("symmetry order differs from the group's".into()));
    }
    db.verify_against(&sym, &poly).map_err(CliError::Integrity)
}

fn options_from_config(config: &[(String, String)]) -> SymmetryOptions {
    let mut o = SymmetryOptions::default();
    for (k, v) in config {
        match k.as_str() {
            "transpose" => o.transpose = v == "true",
            "normalizer" => o.normalizer = v == "true",
            "seed" => o.seed = v.parse().unwrap_or(o.seed),
            _ => {}
        }
    }
    o
}

struct CliControl<'a> {
    stop: &'a AtomicBool,
    budget: Option<usize>,
    checkpoint: Option<PathBuf>,
    interval: Duration,
    last_save: Instant,
    verbose: bool,
    started: Instant,
}

impl<F: Scalar> Control<F> for CliControl<'_> {
    fn should_stop(&self) -> bool {
        self.stop.load(Ordering::SeqCst)
    }

    fn budget(&self) -> Option<usize> {
        self.budget
    }

    fn orbit_done(&mut self, db: &OrbitDatabase<F>, p: &Progress) -> Result<(), EnumerationError> {
        if self.verbose {
            eprintln!(
                "[{:>8.1}s] processed orbit with incidence {} ({} ridge orbits); {} of {} orbits processed",
                self.started.elapsed().as_secs_f64(),
                p.incidence,
                p.ridges,
                p.processed,
                p.orbits
            );
        }
        if let Some(path) = &self.checkpoint {
            if self.last_save.elapsed() >= self.interval {
                save_checkpoint(db, path)?;
                self.last_save = Instant::now();
            }
        }
        Ok(())
    }
}

fn enumerate(args: &EnumerateArgs, stop: &AtomicBool) -> Result<String, CliError> {
    let name = parse_name(&args.name)?;
    if args.max_orbits == Some(0) {
        return Err(CliError::Usage("--max-orbits must be positive".into()));
    }
    if args.direct && (args.resume.is_some() || args.max_orbits.is_some()) {
        return Err(CliError::Usage("--resume and --max-orbits need --adjacency".into()));
    }
    let g = coxeter_group(name).map_err(|e| CliError::Usage(e.to_string()))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    pool.install(|| with_group!(&g, g => enumerate_typed(g, &name.to_string(), args, stop)))
}

fn enumerate_typed<F: Scalar>(
    g: &MatGroup<F>,
    name: &str,
    args: &EnumerateArgs,
    stop: &AtomicBool,
) -> Result<String, CliError> {
    let opts = SymmetryOptions { transpose: !args.no_transpose, normalizer: !args.no_normalizer, seed: args.seed };
    let sym = symmetry_group(g, opts)?;
    let poly = VPolytope::from_group(g);
    let cfg = EnumerationConfig {
        recursion_threshold: args.threshold,
        early_termination: !args.no_early_termination,
        seed: args.seed,
        ..Default::default()
    };
    let mut config = vec![("method".to_string(), if args.direct { "direct" } else { "adjacency" }.to_string())];
    config.extend(cfg.describe());
    config.push(("transpose".into(), opts.transpose.to_string()));
    config.push(("normalizer".into(), opts.normalizer.to_string()));

    let mut db = match &args.resume {
        Some(path) => {
            let db: OrbitDatabase<F> = load_checkpoint(path)?;
            let m = &db.meta;
            if m.group != name
                || m.symmetry_order != sym.order()
                || m.vertex_count != poly.vertex_count()
                || m.full_dim != poly.full_dim()
            {
                return Err(CliError::Integrity(format!("{} was written for a different run", path.display())));
            }
            if m.config != config {
                return Err(CliError::Usage(format!("{} was written with different settings", path.display())));
            }
            db
        }
        None => {
            let mut db = OrbitDatabase::for_polytope(name, &poly, &sym);
            db.meta.config = config;
            db
        }
    };

    let checkpoint = args.checkpoint.clone().or_else(|| args.resume.clone());
    let outcome = if args.direct {
        direct_decomposition(&poly, &sym, &cfg, &mut db)
    } else {
        let mut ctl = CliControl {
            stop,
            budget: args.max_orbits,
            checkpoint: checkpoint.clone(),
            interval: Duration::from_secs(args.checkpoint_interval),
            last_save: Instant::now(),
            verbose: args.verbose,
            started: Instant::now(),
        };
        adjacency_decomposition(&poly, &sym, &cfg, &mut db, &mut ctl)
    };
    let stopped = match outcome {
        Ok(s) => !s.is_finished(),
        Err(EnumerationError::Dd(e)) => {
            eprintln!("resource cap reached: {e}");
            true
        }
        Err(EnumerationError::Checkpoint(e)) => return Err(e.into()),
        Err(e) => return Err(CliError::Internal(e.to_string())),
    };
    if stopped {
        let path = checkpoint
            .or_else(|| args.output.clone())
            .unwrap_or_else(|| PathBuf::from(format!("{name}.orbits")));
        save_checkpoint(&db, &path)?;
        return Err(CliError::Stopped(path));
    }
    if let Some(path) = &checkpoint {
        save_checkpoint(&db, path)?;
    }
    if let Some(path) = &args.output {
        save_checkpoint(&db, path)?;
    }
    let r = report(&db);
    Ok(if args.json { format!("{:#}\n", r.to_json()) } else { r.to_text() })
}
