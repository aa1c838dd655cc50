//! `hyperc2pf` command-line front end.
//!
//! Exit codes: 0 success, 1 verification or runtime failure, 2 usage or
//! parse error. Failures print a single `error[<kind>]: <message>` line on
//! stderr.

mod args;
mod output;

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use hyperc2pf::gate::{photonic_bits, transfer_matrix, GateOutcome};
use hyperc2pf::metrics::linear_grid;
use hyperc2pf::{
    canonical_script, parse_netlist, reference_truth_table, reflection_coefficient, run, sweep,
    CavityParams, CircuitScript, EfficiencyDefinition, FidelityMode, GateError, HyperState,
    Sampler,
};

pub const THREADS_ENV: &str = "HYPERC2PF_THREADS";
const TRUTH_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Usage,
    Parse,
    Verify,
}

#[derive(Debug)]
struct Failure(Kind, String);

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Failure {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Failure(Kind::Usage, msg.into()).into()
}

fn parse_error(msg: impl Into<String>) -> anyhow::Error {
    Failure(Kind::Parse, msg.into()).into()
}

#[derive(Parser)]
#[command(
    name = "hyperc2pf",
    version,
    about = "Hyper-parallel C2PF gate simulator"
)]
struct Cli {
    /// Worker threads for averaging (default: $HYPERC2PF_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplerKind {
    Mc,
    Quad,
}

#[derive(Clone, Copy, ValueEnum)]
enum FidelityArg {
    Pre,
    Post,
}

#[derive(Clone, Copy, ValueEnum)]
enum EfficiencyArg {
    All,
    Fraction,
}

#[derive(Subcommand)]
enum Command {
    /// Check the ideal gate against the phase-flip table.
    TruthTable {
        /// Circuit to check instead of the built-in one.
        #[arg(long)]
        netlist: Option<PathBuf>,
    },
    /// Average fidelity and efficiency over a grid of coupling ratios.
    Sweep {
        #[arg(long, default_value_t = 0.5)]
        xmin: f64,
        #[arg(long, default_value_t = 5.0)]
        xmax: f64,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long, value_enum, default_value_t = SamplerKind::Mc)]
        sampler: SamplerKind,
        /// Monte Carlo samples, or quadrature points per angle.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = FidelityArg::Pre)]
        fidelity: FidelityArg,
        #[arg(long, value_enum, default_value_t = EfficiencyArg::All)]
        efficiency: EfficiencyArg,
        /// CSV destination (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Reflection coefficient against probe detuning from the cavity.
    ScanReflection {
        #[arg(long, default_value_t = 1.0)]
        g: f64,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Emitter detuning from the cavity.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        emitter_detuning: f64,
        /// `min:max` of omega_p - omega_c.
        #[arg(long, default_value = "-5:5", allow_hyphen_values = true)]
        detuning_range: String,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a netlist on one product input.
    Simulate {
        #[arg(long)]
        netlist: PathBuf,
        /// ideal | x=<val> | r=<re>,<im>,r0=<re>,<im>
        #[arg(long, default_value = "ideal", allow_hyphen_values = true)]
        pair: String,
        /// angles=<alpha,beta,delta,sigma,zeta,xi> | basis=<six bits>
        #[arg(long, allow_hyphen_values = true)]
        input: String,
        #[arg(long)]
        dump_checkpoints: Option<PathBuf>,
        /// enumerate | sample | fixed=<+/- per NV>
        #[arg(long, default_value = "enumerate")]
        branch: String,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.kind().as_str().unwrap_or("invalid arguments").to_string();
            let detail = e
                .to_string()
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ")
                .to_string();
            return report(&usage(if detail.is_empty() { msg } else { detail }));
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(&e),
    }
}

fn report(e: &anyhow::Error) -> ExitCode {
    let closed_pipe = e
        .chain()
        .filter_map(|c| c.downcast_ref::<io::Error>())
        .any(|io| io.kind() == io::ErrorKind::BrokenPipe);
    if closed_pipe {
        return ExitCode::SUCCESS;
    }
    let (kind, code) = match e.downcast_ref::<Failure>().map(|f| f.0) {
        Some(Kind::Usage) => ("usage", 2),
        Some(Kind::Parse) => ("parse", 2),
        Some(Kind::Verify) => ("verify", 1),
        None => ("runtime", 1),
    };
    let msg = format!("{e:#}").replace(['\n', '\r'], " ");
    eprintln!("error[{kind}]: {msg}");
    ExitCode::from(code)
}

fn worker_count(flag: Option<usize>) -> anyhow::Result<Option<usize>> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse()
                    .map_err(|_| usage(format!("{THREADS_ENV}={v} is not a thread count")))?,
            ),
            Err(_) => None,
        },
    };
    if n == Some(0) {
        return Err(usage("thread count must be positive"));
    }
    Ok(n)
}

fn execute(cli: Cli) -> anyhow::Result<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = worker_count(cli.threads)? {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().context("starting worker pool")?;
    pool.install(|| match cli.command {
        Command::TruthTable { netlist } => truth_table(netlist.as_deref()),
        Command::Sweep {
            xmin,
            xmax,
            points,
            sampler,
            samples,
            seed,
            fidelity,
            efficiency,
            out,
            svg,
        } => {
            let sampler = match sampler {
                SamplerKind::Mc => Sampler::MonteCarlo {
                    samples: samples.unwrap_or(Sampler::DEFAULT_MC_SAMPLES),
                    seed: resolve_seed(seed)?,
                },
                SamplerKind::Quad => Sampler::Quadrature {
                    points: samples.unwrap_or(Sampler::DEFAULT_QUADRATURE_POINTS),
                },
            };
            let mode = match fidelity {
                FidelityArg::Pre => FidelityMode::PreMeasurement,
                FidelityArg::Post => FidelityMode::PostFeedForward,
            };
            let def = match efficiency {
                EfficiencyArg::All => EfficiencyDefinition::AllPhotonsOut,
                EfficiencyArg::Fraction => EfficiencyDefinition::PhotonFraction,
            };
            run_sweep(
                xmin,
                xmax,
                points,
                &sampler,
                mode,
                def,
                out.as_deref(),
                svg.as_deref(),
            )
        }
        Command::ScanReflection {
            g,
            kappa,
            gamma,
            emitter_detuning,
            detuning_range,
            points,
            out,
        } => scan_reflection(
            g,
            kappa,
            gamma,
            emitter_detuning,
            &detuning_range,
            points,
            out.as_deref(),
        ),
        Command::Simulate {
            netlist,
            pair,
            input,
            dump_checkpoints,
            branch,
            seed,
        } => simulate(
            &netlist,
            &pair,
            &input,
            dump_checkpoints.as_deref(),
            &branch,
            seed,
        ),
    })
}

/// Seeds default to 0, except under `CI` where stochastic runs must name one.
fn resolve_seed(seed: Option<u64>) -> anyhow::Result<u64> {
    match seed {
        Some(s) => Ok(s),
        None if std::env::var_os("CI").is_some() => Err(usage(
            "--seed is required for stochastic runs when CI is set",
        )),
        None => Ok(0),
    }
}

fn load_netlist(path: &Path) -> anyhow::Result<CircuitScript> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_netlist(&text).map_err(|e| parse_error(format!("{}: {e}", path.display())))
}

fn sink(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(
            fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn truth_table(netlist: Option<&Path>) -> anyhow::Result<()> {
    let script = match netlist {
        Some(p) => load_netlist(p)?,
        None => canonical_script(),
    };
    let realized = match transfer_matrix(&script) {
        Ok(m) => m,
        Err(e @ (GateError::BranchDisagreement(_) | GateError::Leakage(_))) => {
            writeln!(io::stdout(), "FAIL {e}")?;
            return Err(Failure(Kind::Verify, e.to_string()).into());
        }
        Err(e) => return Err(e.into()),
    };
    let expected = reference_truth_table();
    let mut out = io::stdout().lock();
    writeln!(out, "index,bits,expected,realized_re,realized_im")?;
    for (k, (e, z)) in expected
        .diagonal()
        .iter()
        .zip(realized.diagonal())
        .enumerate()
    {
        let bits: String = photonic_bits(k).iter().map(|b| b.to_string()).collect();
        writeln!(
            out,
            "{k},{bits},{},{},{}",
            e.re,
            output::sig(z.re),
            output::sig(z.im)
        )?;
    }
    let distance = realized.distance_up_to_phase(&expected);
    if distance <= TRUTH_TOLERANCE {
        writeln!(out, "PASS max deviation {distance:e}")?;
        Ok(())
    } else {
        writeln!(out, "FAIL max deviation {distance:e}")?;
        Err(Failure(
            Kind::Verify,
            format!("truth table deviates by {distance:e} (tolerance {TRUTH_TOLERANCE:e})"),
        )
        .into())
    }
}

#[allow(clippy::too_many_arguments)]
fn run_sweep(
    xmin: f64,
    xmax: f64,
    points: usize,
    sampler: &Sampler,
    mode: FidelityMode,
    def: EfficiencyDefinition,
    out: Option<&Path>,
    svg: Option<&Path>,
) -> anyhow::Result<()> {
    if !(xmin.is_finite() && xmax.is_finite()) || xmax < xmin {
        return Err(usage(format!("invalid coupling range {xmin}..{xmax}")));
    }
    let grid = linear_grid(xmin, xmax, points).map_err(|e| usage(e.to_string()))?;
    let table = match sweep(&grid, sampler, mode, def) {
        Ok(t) => t,
        Err(e @ hyperc2pf::MetricsError::InvalidGrid(_))
        | Err(e @ hyperc2pf::MetricsError::EmptyGrid)
        | Err(e @ hyperc2pf::MetricsError::TooFewSamples(_))
        | Err(e @ hyperc2pf::MetricsError::NoQuadraturePoints) => return Err(usage(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let mut w = sink(out)?;
    output::sweep_csv(&table, &mut w)?;
    w.flush()?;
    if let Some(p) = svg {
        fs::write(p, output::sweep_svg(&table))
            .with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn scan_reflection(
    g: f64,
    kappa: f64,
    gamma: f64,
    emitter_detuning: f64,
    range: &str,
    points: usize,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    let (lo, hi) = args::range(range).map_err(usage)?;
    let grid = linear_grid(lo, hi, points).map_err(|e| usage(e.to_string()))?;
    let mut rows = Vec::with_capacity(grid.len());
    for d in grid {
        let p = CavityParams::new(g, kappa, gamma, d, 0.0, emitter_detuning)
            .map_err(|e| usage(e.to_string()))?;
        let r = reflection_coefficient(&p)?;
        let r0 = reflection_coefficient(&p.cold())?;
        rows.push(vec![d, r.re, r.im, r.norm(), r.arg(), r0.re, r0.im]);
    }
    let mut w = sink(out)?;
    output::records_csv(
        &[
            "detuning", "r_re", "r_im", "r_abs", "r_arg", "r0_re", "r0_im",
        ],
        &rows,
        &mut w,
    )?;
    w.flush()?;
    Ok(())
}

fn outcome_tag(outcomes: &[hyperc2pf::Outcome]) -> String {
    outcomes.iter().map(|o| o.symbol()).collect()
}

fn simulate(
    netlist: &Path,
    pair: &str,
    input: &str,
    dump: Option<&Path>,
    branch: &str,
    seed: Option<u64>,
) -> anyhow::Result<()> {
    let script = load_netlist(netlist)?;
    let pair = args::pair(pair).map_err(usage)?;
    let spec = args::input(input).map_err(usage)?;
    let seed = if branch == "sample" {
        Some(resolve_seed(seed)?)
    } else {
        seed
    };
    let policy = args::branch(branch, seed).map_err(usage)?;
    let state = script.input_state(&spec)?;
    let outcome = run(&state, &script, &pair.into(), &policy)?;

    let mut out = io::stdout().lock();
    for cp in &outcome.checkpoints {
        writeln!(
            out,
            "step {} norm2 {}",
            cp.label,
            output::sig(cp.state.norm_sqr())
        )?;
    }
    writeln!(
        out,
        "pre-measurement norm2 {}",
        output::sig(outcome.pre_measurement.norm_sqr())
    )?;
    for b in &outcome.branches {
        writeln!(
            out,
            "branch {} probability {}",
            outcome_tag(&b.record.outcomes),
            output::sig(b.record.probability)
        )?;
        for line in b.photonic.snapshot_text().lines().skip(1) {
            writeln!(out, "  {line}")?;
        }
    }
    if let Some(dir) = dump {
        dump_checkpoints(dir, &outcome)?;
    }
    Ok(())
}

fn dump_checkpoints(dir: &Path, outcome: &GateOutcome) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let write = |name: String, s: &HyperState| {
        let p = dir.join(name);
        fs::write(&p, s.snapshot_text()).with_context(|| format!("writing {}", p.display()))
    };
    for (i, cp) in outcome.checkpoints.iter().enumerate() {
        write(format!("step_{:02}.txt", i + 1), &cp.state)?;
    }
    write("pre_measurement.txt".into(), &outcome.pre_measurement)?;
    for b in &outcome.branches {
        let tag: String = b
            .record
            .outcomes
            .iter()
            .map(|o| if o.sign() > 0.0 { 'p' } else { 'm' })
            .collect();
        write(format!("branch_{tag}.txt"), &b.photonic)?;
    }
    Ok(())
}
