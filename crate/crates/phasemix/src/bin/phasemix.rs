use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use phasemix::config::ModelConfig;
use phasemix::error::AppError;
use phasemix::scenario::{run_fem, run_matpoint};
use phasemix::verify::{self, Suite, DEFAULT_SEED};

/// Multi-phase elastoplastic material point and plane-strain FE runs.
#[derive(Parser)]
#[command(name = "phasemix", version, arg_required_else_help = true)]
struct Cli {
    /// Output root; defaults to $PHASEMIX_OUTPUT, then ./output. Runs write
    /// to <root>/<config name>.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the [material_point] program of a config.
    Matpoint { config: PathBuf },
    /// Run the [fem] plate benchmark of a config.
    Fem {
        config: PathBuf,
        /// Mesh file used instead of the configured one.
        #[arg(long)]
        mesh: Option<PathBuf>,
        /// Probe node id used instead of the configured one.
        #[arg(long)]
        probe_node: Option<usize>,
    },
    /// Run oracle checks: fd, grid, single-phase, relaxation, fuzz or all.
    Verify {
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Print the resolved config (SI units) as a loadable config.
    Info { config: PathBuf },
}

fn out_dir(root: Option<PathBuf>, config: &Path) -> PathBuf {
    let root = root
        .or_else(|| std::env::var_os("PHASEMIX_OUTPUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("output"));
    let stem = config.file_stem().map_or_else(|| "run".into(), |s| s.to_string_lossy().into_owned());
    root.join(stem)
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Matpoint { config } => {
            let cfg = ModelConfig::load(&config)?;
            let out = run_matpoint(&cfg, &out_dir(cli.output, &config))?;
            println!("{} records -> {}", out.series.len(), out.csv.display());
        }
        Command::Fem { config, mesh, probe_node } => {
            let mut cfg = ModelConfig::load(&config)?;
            if let (Some(id), Some(fem)) = (probe_node, cfg.file.fem.as_mut()) {
                fem.probe_node = id;
            }
            let out = run_fem(&cfg, mesh.as_deref(), &out_dir(cli.output, &config))?;
            let last = out.result.steps.last().expect("step 0 is always recorded");
            match &out.result.first_transformed {
                Some((n, e)) => println!("first transformation at step {n} in {} element(s)", e.len()),
                None => println!("no transformation"),
            }
            let lam: Vec<String> = last.domain_fractions.iter().map(|v| format!("{v:.5}")).collect();
            println!("step {}: mean fractions [{}]", last.step, lam.join(", "));
            for f in &out.files {
                println!("wrote {}", f.display());
            }
        }
        Command::Verify { suite, seed } => {
            let suite: Suite = suite.parse()?;
            let reports = verify::run(suite, seed)?;
            print!("{}", verify::table(&reports));
            let failed = reports.iter().filter(|r| !r.pass).count();
            if failed > 0 {
                return Err(AppError::Model(phasemix_core::Error::InvalidState(format!(
                    "{failed} oracle check(s) failed"
                ))));
            }
        }
        Command::Info { config } => {
            let cfg = ModelConfig::load(&config)?;
            print!("{}", cfg.file.resolved()?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, AppError::Usage(_)) {
                eprintln!("usage: phasemix <matpoint|fem|verify|info> ... (see --help)");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
