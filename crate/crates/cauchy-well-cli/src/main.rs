//! `cauchy-well`: command-line front end for the spectral solver of the
//! half-Laplacian confined to (−1, 1).
//!
//! Subcommands: `solve` (merged spectrum report), `table` (the three
//! comparison tables), `eigfun` (sample one eigenfunction), `disprove`
//! (residual profile of a trigonometric non-eigenfunction), `apply`
//! (operator image of a basis function), and a hidden `specfun-eval`.
//!
//! Exit codes: 0 success, 2 invalid configuration/usage or I/O failure,
//! 3 quadrature failure, 4 eigensolver failure.
//!
//! The pipeline is fully deterministic — there is deliberately no seed flag;
//! for a fixed configuration and thread count the outputs are byte-identical
//! across runs.

use cauchy_well_cli::{config, io, pipeline, references};

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cauchy_well_core::galerkin::QuadratureSpec;
use cauchy_well_core::operator::{BasisIndex, Parity, TrigCandidate};
use cauchy_well_core::specfun;
use cauchy_well_core::spectrum::{synthesize, uniform_grid, SampledFunction};

use config::{CliError, OutputFormat, ParityChoice, RunConfig};

#[derive(Parser)]
#[command(
    name = "cauchy-well",
    version,
    about = "Spectral solver for the half-Laplacian in an interval well",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble the Galerkin blocks, diagonalize, and write the spectrum report
    Solve(SolveArgs),
    /// Emit one of the three comparison tables as CSV
    Table(TableArgs),
    /// Sample one eigenfunction on a uniform grid
    Eigfun(EigfunArgs),
    /// Show that a plain trigonometric guess is not an eigenfunction
    Disprove(DisproveArgs),
    /// Sample the operator image of a single basis function
    Apply(ApplyArgs),
    /// Evaluate the sine and cosine integrals (debugging aid)
    #[command(hide = true, name = "specfun-eval")]
    SpecfunEval(SpecfunEvalArgs),
}

#[derive(Args)]
struct QuadBlockArgs {
    /// Relative tolerance for the adaptive quadrature stage
    #[arg(long = "quad-rel-tol", default_value_t = 1e-10)]
    quad_rel_tol: f64,
    /// Half-width of the graded integration layers hugging x = ±1
    #[arg(long = "endpoint-margin", default_value_t = 0.0625)]
    endpoint_margin: f64,
}

impl QuadBlockArgs {
    fn to_spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            rel_tol: self.quad_rel_tol,
            endpoint_margin: self.endpoint_margin,
            ..QuadratureSpec::default()
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output directory (created if missing)
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads for matrix assembly (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct SolveArgs {
    /// Galerkin block dimension per parity
    #[arg(long, default_value_t = 30)]
    size: usize,
    /// Which parity blocks to solve
    #[arg(long, value_enum, default_value_t = ParityChoice::Both)]
    parity: ParityChoice,
    /// Number of levels to report
    #[arg(long, default_value_t = 6)]
    levels: usize,
    /// Report format
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Also serialize the assembled blocks (block_even.csv / block_odd.csv)
    #[arg(long)]
    dump_blocks: bool,
    #[command(flatten)]
    quad: QuadBlockArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum TableKind {
    I,
    Ii,
    Iii,
}

#[derive(Args)]
struct TableArgs {
    /// Which table to emit
    #[arg(value_enum)]
    which: TableKind,
    /// Block sizes to compute (comma-separated); defaults depend on the table
    #[arg(long = "size", value_delimiter = ',')]
    sizes: Vec<usize>,
    #[command(flatten)]
    quad: QuadBlockArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct EigfunArgs {
    /// 1-based level to sample
    #[arg(long)]
    level: usize,
    /// Galerkin block dimension per parity
    #[arg(long, default_value_t = 30)]
    size: usize,
    /// Number of uniform grid points including the endpoints
    #[arg(long, default_value_t = 2001)]
    grid: usize,
    #[command(flatten)]
    quad: QuadBlockArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum CandidateArg {
    /// cos(πx/2)
    CosHalf,
    /// sin(πx)
    SinPi,
}

#[derive(Args)]
struct DisproveArgs {
    /// Which trigonometric guess to test
    #[arg(long, value_enum)]
    candidate: CandidateArg,
    /// Number of grid points on [−0.99, 0.99] (at least 101)
    #[arg(long, default_value_t = 199)]
    grid: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ApplyArgs {
    /// Mode index (even modes from 0, odd modes from 1)
    k: usize,
    /// Basis family
    #[arg(long, value_enum)]
    parity: ParityChoice,
    /// Number of interior sample points
    #[arg(long, default_value_t = 201)]
    grid: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SpecfunEvalArgs {
    x: f64,
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    });
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Table(args) => cmd_table(args),
        Command::Eigfun(args) => cmd_eigfun(args),
        Command::Disprove(args) => cmd_disprove(args),
        Command::Apply(args) => cmd_apply(args),
        Command::SpecfunEval(args) => cmd_specfun_eval(args),
    }
}

fn install_threads(threads: Option<usize>) -> Result<(), CliError> {
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Config("thread count must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    install_threads(args.output.threads)?;
    let cfg = RunConfig {
        block_size: args.size,
        parity: args.parity,
        levels: args.levels,
        quad: args.quad.to_spec(),
        output_dir: args.output.out.clone(),
        format: args.format,
        threads: args.output.threads,
    };
    cfg.validate()?;
    io::ensure_dir(&cfg.output_dir)?;
    let (report, blocks) = pipeline::solve_spectrum(&cfg)?;

    let path = match cfg.format {
        OutputFormat::Csv => {
            let p = cfg.output_dir.join("spectrum.csv");
            io::write_file(&p, &io::spectrum_csv(&report))?;
            p
        }
        OutputFormat::Json => {
            let p = cfg.output_dir.join("spectrum.json");
            io::write_file(&p, &io::spectrum_json(&report, &cfg.quad))?;
            p
        }
    };
    if args.dump_blocks {
        for block in &blocks {
            let name = format!("block_{}.csv", block.parity());
            io::write_file(&cfg.output_dir.join(name), &io::block_csv(block))?;
        }
    }
    println!(
        "wrote {} ({} levels, block size {})",
        path.display(),
        report.levels.len(),
        args.size
    );
    Ok(())
}

fn cmd_table(args: TableArgs) -> Result<(), CliError> {
    install_threads(args.output.threads)?;
    let quad = args.quad.to_spec();
    quad.validate()?;
    let sizes = if args.sizes.is_empty() {
        match args.which {
            TableKind::I => vec![6, 12],
            TableKind::Ii => vec![30, 50, 100, 200, 400],
            TableKind::Iii => vec![2000],
        }
    } else {
        args.sizes.clone()
    };
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(CliError::Config("table sizes must be positive".into()));
    }
    io::ensure_dir(&args.output.out)?;

    let (name, text) = match args.which {
        TableKind::I => {
            let diagonal = pipeline::interleaved_diagonal(6)?;
            let computed = pipeline::spectra_at_sizes(&sizes, 6, &quad)?;
            (
                "table_i.csv",
                io::table_i_csv(&diagonal, &computed, &references::ALL, 6),
            )
        }
        TableKind::Ii => {
            let computed = pipeline::spectra_at_sizes(&sizes, 6, &quad)?;
            let columns: Vec<Vec<f64>> = computed.into_iter().map(|(_, v)| v).collect();
            ("table_ii.csv", io::table_ii_csv(&sizes, &columns, 6))
        }
        TableKind::Iii => {
            let size = *sizes.iter().max().expect("sizes checked nonempty");
            let cfg = RunConfig {
                block_size: size,
                parity: ParityChoice::Both,
                levels: 20.min(2 * size),
                quad,
                output_dir: args.output.out.clone(),
                format: OutputFormat::Csv,
                threads: args.output.threads,
            };
            let (report, _) = pipeline::solve_spectrum(&cfg)?;
            ("table_iii.csv", io::table_iii_csv(&report))
        }
    };
    let path = args.output.out.join(name);
    io::write_file(&path, &text)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_eigfun(args: EigfunArgs) -> Result<(), CliError> {
    install_threads(args.output.threads)?;
    if args.level == 0 {
        return Err(CliError::Config("levels are labelled from 1".into()));
    }
    if args.grid < 2 {
        return Err(CliError::Config("grid needs at least 2 points".into()));
    }
    let cfg = RunConfig {
        block_size: args.size,
        parity: ParityChoice::Both,
        levels: args.level,
        quad: args.quad.to_spec(),
        output_dir: args.output.out.clone(),
        format: OutputFormat::Csv,
        threads: args.output.threads,
    };
    cfg.validate()?;
    io::ensure_dir(&cfg.output_dir)?;
    let (report, pairs) = pipeline::solve_pairs(cfg.block_size, cfg.levels, &cfg.quad)?;
    let pair = &pairs[args.level - 1];
    let mut sampled = synthesize(pair, &uniform_grid(args.grid))?;
    sampled.label = args.level;
    let path = cfg.output_dir.join(format!("eigfun_{}.csv", args.level));
    io::write_file(&path, &io::samples_csv(&sampled))?;
    println!(
        "wrote {} (level {}, E = {:.9}, parity {}, L2 norm {:.6})",
        path.display(),
        args.level,
        report.levels[args.level - 1].energy,
        pair.parity,
        sampled.normalization
    );
    Ok(())
}

fn cmd_disprove(args: DisproveArgs) -> Result<(), CliError> {
    if args.grid < 101 {
        return Err(CliError::Config(
            "disprove needs at least 101 grid points".into(),
        ));
    }
    io::ensure_dir(&args.output.out)?;
    let (candidate, name) = match args.candidate {
        CandidateArg::CosHalf => (TrigCandidate::CosHalf, "cos_half"),
        CandidateArg::SinPi => (TrigCandidate::SinPi, "sin_pi"),
    };
    let span = 0.99;
    let step = 2.0 * span / (args.grid - 1) as f64;
    let grid: Vec<f64> = (0..args.grid).map(|i| -span + i as f64 * step).collect();
    let (best_fit, residuals) =
        cauchy_well_core::operator::trig_disproof_residual(candidate, &grid)?;
    let path = args.output.out.join(format!("disprove_{name}.csv"));
    io::write_file(&path, &io::disprove_csv(name, best_fit, &grid, &residuals))?;

    let (mut max_r, mut max_x) = (f64::NEG_INFINITY, f64::NAN);
    for (x, r) in grid.iter().zip(residuals.iter()) {
        if *r > max_r {
            max_r = *r;
            max_x = *x;
        }
    }
    println!(
        "candidate {name}: best-fit E = {best_fit:.8}; max residual {max_r:.6} at x = {max_x:.4} \
         — far above zero, so the guess is not an eigenfunction"
    );
    Ok(())
}

fn cmd_apply(args: ApplyArgs) -> Result<(), CliError> {
    let parity = match args.parity {
        ParityChoice::Even => Parity::Even,
        ParityChoice::Odd => Parity::Odd,
        ParityChoice::Both => {
            return Err(CliError::Config(
                "apply acts on a single basis function; choose --parity even or odd".into(),
            ))
        }
    };
    if args.grid < 2 {
        return Err(CliError::Config("grid needs at least 2 points".into()));
    }
    let index = BasisIndex::new(parity, args.k)?;
    io::ensure_dir(&args.output.out)?;
    // Interior grid: the image diverges logarithmically at the endpoints.
    let h = 2.0 / (args.grid + 1) as f64;
    let grid: Vec<f64> = (1..=args.grid).map(|i| -1.0 + i as f64 * h).collect();
    let mut values = Vec::with_capacity(grid.len());
    for &x in &grid {
        values.push(cauchy_well_core::operator::apply_basis(index, x)?);
    }
    let sampled = SampledFunction {
        grid,
        values,
        label: args.k,
        normalization: 0.0,
    };
    let path = args
        .output
        .out
        .join(format!("apply_{}_{}.csv", parity, args.k));
    io::write_file(&path, &io::samples_csv(&sampled))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_specfun_eval(args: SpecfunEvalArgs) -> Result<(), CliError> {
    let si = specfun::si(args.x)?;
    println!("Si,{}", io::fmt17(si));
    let ci = specfun::ci(args.x)?;
    println!("Ci,{}", io::fmt17(ci));
    Ok(())
}
