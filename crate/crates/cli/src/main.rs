use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use framelet::boxspline::edge_csv;
use framelet::cascade::{cascade_phi, sample_psi};
use framelet::format::fmt_f64;
use framelet::transform::roundtrip_defects;
use framelet::verify::verify_frequency;
use framelet::{
    analyze, build_boxspline_bank, build_haar_bank, direction_census, preimage_vertices,
    reduce_bank, synthesize, verify_tight_bank, BankMode, CoefficientPyramid, DirectionMatrix,
    FilterBank, IntVec, ReduceMode, Tensor,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const FREQUENCY_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(
    name = "framelet",
    version,
    about = "Directional tight framelet filter banks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the d-dimensional Haar bank.
    Haar {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a box-spline bank from a direction matrix.
    Boxspline {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum, default_value = "combined")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "none")]
        reduce: Reduce,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the tight framelet identities exactly. Exit 0 on pass, 1 on failure.
    /// The frequency check is reported but does not change the exit code.
    Verify {
        bank: PathBuf,
        /// Also sample the frequency identities on a GRID^d grid.
        #[arg(long, value_name = "GRID")]
        frequency: Option<usize>,
        /// Write the full JSON report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Count high-pass filters per direction.
    Census {
        bank: PathBuf,
        #[arg(long)]
        edges: Option<PathBuf>,
    },
    #[command(subcommand)]
    Transform(TransformCmd),
    /// Sample phi, or psi_L with --psi L, on the 2^-J grid.
    Render {
        #[arg(long)]
        bank: PathBuf,
        #[arg(long)]
        iters: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        /// 1-based high-pass index.
        #[arg(long)]
        psi: Option<usize>,
    },
    /// List the cube vertices k with Pk = point.
    Fibers {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        point: String,
    },
}

#[derive(Subcommand)]
enum TransformCmd {
    Analyze {
        #[arg(long)]
        bank: PathBuf,
        #[arg(long)]
        levels: usize,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Synthesize {
        #[arg(long)]
        bank: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print perfect reconstruction and Parseval defects.
    Roundtrip {
        #[arg(long)]
        bank: PathBuf,
        #[arg(long)]
        levels: usize,
        #[arg(long = "in", conflicts_with = "dims")]
        input: Option<PathBuf>,
        /// Random input shape, e.g. "16 16".
        #[arg(long)]
        dims: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Projected,
    Combined,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reduce {
    None,
    Pairs,
    Full,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_bank(path: &Path) -> anyhow::Result<FilterBank> {
    FilterBank::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_matrix(path: &Path) -> anyhow::Result<DirectionMatrix> {
    DirectionMatrix::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn parse_ints(s: &str) -> anyhow::Result<Vec<i64>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| anyhow!("bad integer {t:?}")))
        .collect()
}

fn run(cmd: Command) -> anyhow::Result<ExitCode> {
    match cmd {
        Command::Haar { dim, out } => {
            let bank = build_haar_bank(dim)?;
            emit(out.as_deref(), &(bank.to_json()? + "\n"))?;
        }
        Command::Boxspline {
            matrix,
            mode,
            reduce,
            out,
        } => {
            let p = load_matrix(&matrix)?;
            let mode = match mode {
                Mode::Projected => BankMode::Projected,
                Mode::Combined => BankMode::Combined,
            };
            let mut bank = build_boxspline_bank(&p, mode)?;
            match reduce {
                Reduce::None => {}
                Reduce::Pairs => bank = reduce_bank(&bank, ReduceMode::EqualWeightPairs)?,
                Reduce::Full => bank = reduce_bank(&bank, ReduceMode::FullClass)?,
            }
            emit(out.as_deref(), &(bank.to_json()? + "\n"))?;
        }
        Command::Verify {
            bank,
            frequency,
            report,
        } => {
            let bank = load_bank(&bank)?;
            let r = verify_tight_bank(&bank)?;
            if let Some(path) = report {
                emit(Some(&path), &(serde_json::to_string_pretty(&r)? + "\n"))?;
            }
            match &r.witness {
                None => println!("exact: pass ({} cells)", r.checked),
                Some(w) => println!(
                    "exact: fail ({} of {} cells); first at gamma={} n={}: sum {} expected {} defect {}",
                    r.failures.len(),
                    r.checked,
                    IntVec::new(w.gamma.clone()),
                    IntVec::new(w.n.clone()),
                    w.sum,
                    w.expected,
                    w.defect
                ),
            }
            if let Some(grid) = frequency {
                let defect = verify_frequency(&bank, grid)?;
                println!(
                    "frequency (advisory): {} (max defect {} on {grid}^{} grid, tolerance 1e-10)",
                    if defect <= FREQUENCY_TOL {
                        "pass"
                    } else {
                        "fail"
                    },
                    fmt_f64(defect),
                    bank.dim()
                );
            }
            return Ok(if r.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
        Command::Census { bank, edges } => {
            let bank = load_bank(&bank)?;
            let census = direction_census(&bank)?;
            println!("filters {}", census.total());
            println!("directions {}", census.distinct());
            for (dir, count) in census.ordered() {
                match dir.angle_degrees() {
                    Some(a) => println!("{dir} {count} {}", fmt_f64(a)),
                    None => println!("{dir} {count}"),
                }
            }
            if let Some(path) = edges {
                emit(Some(&path), &edge_csv(&bank)?)?;
            }
        }
        Command::Transform(t) => return transform(t),
        Command::Render {
            bank,
            iters,
            out,
            psi,
        } => {
            let bank = load_bank(&bank)?;
            let grid = match psi {
                None => cascade_phi(bank.lowpass(), iters)?,
                Some(l) => {
                    let count = bank.highpass().len();
                    if l == 0 || l > count {
                        bail!("--psi {l} out of range 1..={count}");
                    }
                    let phi = cascade_phi(bank.lowpass(), iters + 1)?;
                    let one = bank.with_highpass(vec![bank.highpass()[l - 1].clone()])?;
                    sample_psi(&one, &phi, iters)?.remove(0)
                }
            };
            emit(out.as_deref(), &grid.to_csv())?;
        }
        Command::Fibers { matrix, point } => {
            let p = load_matrix(&matrix)?;
            let gamma = IntVec::new(parse_ints(&point)?);
            for k in preimage_vertices(&p, &gamma)? {
                println!("{k}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn transform(cmd: TransformCmd) -> anyhow::Result<ExitCode> {
    match cmd {
        TransformCmd::Analyze {
            bank,
            levels,
            input,
            out,
        } => {
            let bank = load_bank(&bank)?;
            let u = Tensor::from_text(&read(&input)?)?;
            let p = analyze(&bank, &u, levels)?;
            emit(out.as_deref(), &(p.to_json()? + "\n"))?;
        }
        TransformCmd::Synthesize { bank, input, out } => {
            let bank = load_bank(&bank)?;
            let p = CoefficientPyramid::from_json(&read(&input)?)?;
            emit(out.as_deref(), &synthesize(&bank, &p)?.to_text())?;
        }
        TransformCmd::Roundtrip {
            bank,
            levels,
            input,
            dims,
            seed,
        } => {
            let bank = load_bank(&bank)?;
            let u = match (input, dims) {
                (Some(path), _) => Tensor::from_text(&read(&path)?)?,
                (None, Some(dims)) => {
                    let dims = parse_ints(&dims)?
                        .into_iter()
                        .map(|n| usize::try_from(n).map_err(|_| anyhow!("negative size {n}")))
                        .collect::<anyhow::Result<Vec<_>>>()?;
                    let len = dims.iter().product();
                    let mut rng = StdRng::seed_from_u64(seed);
                    Tensor::new(dims, (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect())?
                }
                (None, None) => bail!("transform roundtrip needs --in or --dims"),
            };
            let (pr, parseval) = roundtrip_defects(&bank, &u, levels)?;
            println!("pr_defect {}", fmt_f64(pr));
            println!("parseval_defect {}", fmt_f64(parseval));
        }
    }
    Ok(ExitCode::SUCCESS)
}
