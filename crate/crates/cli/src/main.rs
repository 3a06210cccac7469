use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zic_cli::config::{ChannelSection, GridSection, ScenarioFile, SweepAxis};
use zic_cli::{
    cmd_gdof, cmd_region, cmd_sumrate, cmd_verify, CliError, GdofSpec, Output, SumrateSpec, EXIT_OK,
    EXIT_VERIFY_FAILED,
};
use zic_core::verify::{VerifyConfig, DEFAULT_SEED};
use zic_core::{GdofParams, GdofScheme, Scheme};

#[derive(Parser)]
#[command(name = "zic", version, about = "Secrecy rate regions of the Gaussian Z-interference channel with a shared key")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Achievable regions per scheme plus the outer region.
    #[command(allow_negative_numbers = true)]
    Region(Common),
    /// Maximum sum rate per scheme along the alpha or key-rate axis.
    #[command(allow_negative_numbers = true)]
    Sumrate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        axis: Option<Axis>,
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        /// Interference exponent held fixed on the key-rate axis.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Secure GDOF polytopes.
    #[command(allow_negative_numbers = true)]
    Gdof {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        #[arg(long)]
        svg: bool,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        /// Key split used by the key-splitting polytope.
        #[arg(long)]
        eta: Option<f64>,
        /// Comma-separated: key-splitting, rate-splitting, key-as-wc, otp.
        #[arg(long, value_delimiter = ',')]
        schemes: Option<Vec<String>>,
    },
    /// Run the invariant battery and write a JSON report.
    Verify {
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        channels: usize,
        /// Harness self-test: shrink the sum-rate bound so the battery fails.
        #[arg(long, hide = true)]
        corrupt_sum_bound: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Axis {
    Alpha,
    Rk,
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    #[arg(long)]
    svg: bool,
    /// Also apply the genie-aided sum bound without secrecy.
    #[arg(long)]
    nonsecrecy_bound: bool,
    /// Grid resolution: `N` or `lambda1=N,lambda2=N,beta1=N,beta2=N,eta=N`.
    #[arg(long)]
    grid: Option<String>,
    /// Pin both power-control fractions at 1.
    #[arg(long)]
    full_power: bool,
    /// Comma-separated scheme names.
    #[arg(long, value_delimiter = ',')]
    schemes: Option<Vec<String>>,
    #[arg(long)]
    h11: Option<f64>,
    #[arg(long)]
    h22: Option<f64>,
    #[arg(long)]
    h21: Option<f64>,
    /// Power of both transmitters.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    #[arg(long)]
    p_db: Option<f64>,
    #[arg(long)]
    p1_db: Option<f64>,
    #[arg(long)]
    p2_db: Option<f64>,
    #[arg(long)]
    rk: Option<f64>,
}

impl Common {
    fn scenario_file(&self) -> Result<ScenarioFile, CliError> {
        let file = match &self.config {
            Some(path) => ScenarioFile::load(path)?,
            None => ScenarioFile::default(),
        };
        let grid = match &self.grid {
            Some(spec) => GridSection::from_spec(spec)?,
            None => GridSection::default(),
        };
        let mut flags = ScenarioFile {
            schemes: self.schemes.clone(),
            channel: ChannelSection {
                h11: self.h11,
                h22: self.h22,
                h21: self.h21,
                p: self.p,
                p1: self.p1,
                p2: self.p2,
                p_db: self.p_db,
                p1_db: self.p1_db,
                p2_db: self.p2_db,
                rk: self.rk,
            },
            grid: GridSection {
                full_power: self.full_power.then_some(true),
                ..grid
            },
            ..ScenarioFile::default()
        };
        if self.nonsecrecy_bound {
            let mut b = file.bounds.unwrap_or_default();
            b.nonsecrecy = true;
            flags.bounds = Some(b);
        }
        if self.svg {
            let mut o = file.outputs.unwrap_or_default();
            o.svg = true;
            flags.outputs = Some(o);
        }
        Ok(file.merge(flags))
    }
}

fn finish(out: &Output, dir: &std::path::Path) -> Result<(), CliError> {
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    out.write_to(dir)?;
    for a in &out.artifacts {
        println!("{}", dir.join(&a.name).display());
    }
    Ok(())
}

const SUMRATE_SCHEMES: [Scheme; 4] = [
    Scheme::KeySplitting,
    Scheme::RateSplitting,
    Scheme::KeyAsWiretap,
    Scheme::OneTimePad,
];

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Region(common) => {
            let sc = common.scenario_file()?.resolve(&Scheme::ALL)?;
            finish(&cmd_region(&sc)?, &common.out_dir)?;
        }
        Command::Sumrate {
            common,
            axis,
            from,
            to,
            steps,
            alpha,
        } => {
            let file = common.scenario_file()?;
            let s = &file.sumrate;
            let axis = match axis {
                Some(Axis::Alpha) => SweepAxis::Alpha,
                Some(Axis::Rk) => SweepAxis::Rk,
                None => s.axis.unwrap_or(SweepAxis::Alpha),
            };
            let (lo, hi, n) = match axis {
                SweepAxis::Alpha => (0.0, 1.2, 25),
                SweepAxis::Rk => (0.0, 2.0, 21),
            };
            let spec = SumrateSpec {
                axis,
                from: from.or(s.from).unwrap_or(lo),
                to: to.or(s.to).unwrap_or(hi),
                steps: steps.or(s.steps).unwrap_or(n),
                alpha: alpha.or(s.alpha).unwrap_or(0.6),
            };
            let sc = file.resolve(&SUMRATE_SCHEMES)?;
            finish(&cmd_sumrate(&sc, &spec)?, &common.out_dir)?;
        }
        Command::Gdof {
            config,
            out_dir,
            svg,
            alpha,
            gamma,
            eta,
            schemes,
        } => {
            let file = match &config {
                Some(path) => ScenarioFile::load(path)?,
                None => ScenarioFile::default(),
            };
            let g = &file.gdof;
            let names = schemes.or_else(|| g.schemes.clone());
            let schemes = match names {
                None => GdofScheme::ALL.to_vec(),
                Some(names) => names
                    .iter()
                    .map(|n| {
                        GdofScheme::from_slug(n.trim())
                            .ok_or_else(|| CliError::Config(format!("unknown GDOF scheme '{n}'")))
                    })
                    .collect::<Result<_, _>>()?,
            };
            let params = GdofParams {
                alpha: alpha.or(g.alpha).unwrap_or(0.3),
                gamma: gamma.or(g.gamma).unwrap_or(0.3),
                eta: eta.or(g.eta).unwrap_or(1.0),
            };
            let svg = svg || file.outputs.is_some_and(|o| o.svg);
            finish(&cmd_gdof(&GdofSpec { params, schemes, svg })?, &out_dir)?;
        }
        Command::Verify {
            out_dir,
            seed,
            channels,
            corrupt_sum_bound,
        } => {
            let cfg = VerifyConfig {
                seed,
                channels,
                corrupt_sum_bound,
                ..VerifyConfig::default()
            };
            let (out, report) = cmd_verify(&cfg);
            finish(&out, &out_dir)?;
            let failed: Vec<_> = report.failures().collect();
            for f in &failed {
                eprintln!("FAIL {} [{}] {} (margin {})", f.name, f.module, f.scenario, f.margin);
            }
            eprintln!(
                "{} invariant checks, {} failed, seed {}",
                report.invariants.len(),
                failed.len(),
                report.seed
            );
            if !report.passed {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
