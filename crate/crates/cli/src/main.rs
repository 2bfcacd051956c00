//! Command-line front end: evaluate truth values, extract cuts, convolve,
//! take meets, compare in the convolution order, run the law suites, and
//! emit plot data.
//!
//! Exit codes: 0 on success, 1 when a check command finds a law failure,
//! 2 on input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use t2conv_core::*;

const CSV_HELP: &str = "CSV formats:
  cut families:      alpha,lo,hi
  sampled functions: x,value,witness_a,witness_b (empty witnesses for cells no fiber hit)
  plot samples:      x,value";

#[derive(Parser)]
#[command(
    name = "t2conv",
    about = "Algebra of normal convex usc fuzzy truth values under sup-t-norm convolution",
    after_help = CSV_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SeedArg {
    /// RNG seed; falls back to the T2CONV_SEED environment variable.
    #[arg(long, env = "T2CONV_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Case1,
    Case2,
}

#[derive(Clone, Copy, ValueEnum)]
enum InnerArg {
    Product,
    Lukasiewicz,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a truth value at a point.
    Eval {
        /// Truth value JSON file.
        #[arg(long)]
        f: PathBuf,
        /// Evaluation point in [0, 1].
        #[arg(long)]
        x: f64,
    },
    /// Extract the alpha-cut family on a uniform grid.
    Cuts {
        #[arg(long)]
        f: PathBuf,
        /// Grid levels (i/m for i = 1..=m).
        #[arg(long, default_value_t = 64)]
        m: usize,
        /// Output path for the cut family JSON (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convolve two truth values with the alpha-cut engine.
    Convolve {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        /// Star t-norm: builtin name or a TnormSpec JSON path.
        #[arg(long)]
        star: String,
        /// Tri t-norm: builtin name or a TnormSpec JSON path.
        #[arg(long)]
        tri: String,
        #[arg(long, default_value_t = 128)]
        m: usize,
        /// Output path for the cut family JSON (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the cut family as CSV (alpha,lo,hi).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also run the pointwise sampling oracle at this resolution and
        /// write its CSV next to --oracle-csv.
        #[arg(long, requires = "oracle_csv")]
        n: Option<usize>,
        #[arg(long)]
        oracle_csv: Option<PathBuf>,
    },
    /// Exact convolution meet (both operations the minimum).
    Meet {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two truth values in the convolution order, both directions
    /// and both decision procedures.
    Order {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// Run the t-norm axiom and closure suite; exit 1 on any law failure.
    /// Out-of-contract operations fall back to the sampling oracle.
    CheckAxioms {
        #[arg(long)]
        star: String,
        #[arg(long)]
        tri: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 128)]
        m: usize,
        /// Oracle resolution for the fallback closure search.
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify closure on singletons and intervals plus the boundary law;
    /// exit 1 on any failure.
    CheckTr {
        #[arg(long)]
        star: String,
        #[arg(long)]
        tri: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce the counterexample witness certifying that a
    /// non-right-continuous operation breaks closure.
    DemoNecessity {
        /// Tri t-norm expected to fail right-continuity.
        #[arg(long)]
        tri: String,
        #[arg(long, value_enum)]
        case: CaseArg,
        /// Value parameters (a, b) of the construction.
        #[arg(long, default_value_t = 0.5)]
        a: f64,
        #[arg(long, default_value_t = 0.5)]
        b: f64,
        /// Location parameter u; defaults to 0.5 for case 1, 0.7 for case 2.
        #[arg(long)]
        u: Option<f64>,
        /// Location parameter v (case 2); defaults to 0.7.
        #[arg(long)]
        v: Option<f64>,
        /// Ordinal-sum summand for case 2.
        #[arg(long, default_value_t = 0.2)]
        summand_lo: f64,
        #[arg(long, default_value_t = 0.8)]
        summand_hi: f64,
        #[arg(long, value_enum, default_value_t = InnerArg::Product)]
        inner: InnerArg,
        /// Oracle corroboration resolution.
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit plot data: function samples and/or cut endpoints, CSV only.
    PlotData {
        /// Truth value JSON to sample.
        #[arg(long)]
        f: Option<PathBuf>,
        /// Cut family JSON to dump per-level.
        #[arg(long)]
        cuts: Option<PathBuf>,
        /// Sample count for the function CSV.
        #[arg(long, default_value_t = 512)]
        n: usize,
        /// Output prefix; writes <prefix>_fn.csv and/or <prefix>_cuts.csv.
        #[arg(long)]
        out_prefix: String,
    },
}

enum Failure {
    /// Exit 2: unparsable or invalid inputs.
    Input(String),
    /// Exit 1: a check command found a law failure.
    Laws,
}

type R<T> = std::result::Result<T, Failure>;

fn input_err(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Laws) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> R<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Builtin kind name, or a path to a TnormSpec JSON (ordinal sums).
fn load_tnorm(arg: &str) -> R<TnormSpec> {
    if let Ok(spec) = arg.parse::<TnormSpec>() {
        return Ok(spec);
    }
    let path = Path::new(arg);
    if path.exists() {
        return read_json(path);
    }
    Err(Failure::Input(format!(
        "`{arg}` is neither a builtin t-norm name nor an existing spec file"
    )))
}

fn write_output(out: &Option<PathBuf>, contents: &str) -> R<()> {
    match out {
        Some(path) => fs::write(path, contents)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            println!("{contents}");
            Ok(())
        }
    }
}

fn to_pretty<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn uniform_grid_checked(m: usize) -> R<Vec<UnitValue>> {
    if m < 16 {
        return Err(Failure::Input(format!("m must be at least 16, got {m}")));
    }
    Ok(CutFamily::uniform_grid(m))
}

fn family_csv(fam: &CutFamily) -> String {
    let mut s = String::from("alpha,lo,hi\n");
    for (a, c) in fam.alpha_grid().iter().zip(fam.cuts()) {
        s.push_str(&format!("{},{},{}\n", a.to_f64(), c.lo().to_f64(), c.hi().to_f64()));
    }
    s
}

fn run(cli: Cli) -> R<()> {
    match cli.command {
        Command::Eval { f, x } => {
            let tv: TruthValue = read_json(&f)?;
            let x = UnitValue::from_f64(x).map_err(input_err)?;
            let value = tv.eval(&x);
            println!(
                "{}",
                serde_json::json!({"x": x.to_f64(), "value": value.to_f64()})
            );
            Ok(())
        }
        Command::Cuts { f, m, out } => {
            let tv: TruthValue = read_json(&f)?;
            let grid = uniform_grid_checked(m)?;
            let fam = CutFamily::cuts_of(&tv, &grid).map_err(input_err)?;
            write_output(&out, &to_pretty(&fam))
        }
        Command::Convolve {
            f,
            g,
            star,
            tri,
            m,
            out,
            csv,
            n,
            oracle_csv,
        } => {
            let ftv: TruthValue = read_json(&f)?;
            let gtv: TruthValue = read_json(&g)?;
            let star = load_tnorm(&star)?;
            let tri = load_tnorm(&tri)?;
            let grid = uniform_grid_checked(m)?;
            let fc = CutFamily::cuts_of(&ftv, &grid).map_err(input_err)?;
            let gc = CutFamily::cuts_of(&gtv, &grid).map_err(input_err)?;
            let fam = convolve_cuts(&fc, &gc, &star, &tri).map_err(input_err)?;
            if let Some(path) = &csv {
                fs::write(path, family_csv(&fam))
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
            if let Some(path) = &oracle_csv {
                let n = n.unwrap_or(1000);
                if n < 16 {
                    return Err(Failure::Input(format!("n must be at least 16, got {n}")));
                }
                let sampled = convolve_oracle(&ftv, &gtv, &star, &tri, n);
                let mut buf = Vec::new();
                sampled.write_csv(&mut buf).map_err(input_err)?;
                fs::write(path, buf)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
            write_output(&out, &to_pretty(&fam))
        }
        Command::Meet { f, g, out } => {
            let ftv: TruthValue = read_json(&f)?;
            let gtv: TruthValue = read_json(&g)?;
            write_output(&out, &to_pretty(&meet_min(&ftv, &gtv)))
        }
        Command::Order { f, g } => {
            let ftv: TruthValue = read_json(&f)?;
            let gtv: TruthValue = read_json(&g)?;
            let m = meet_min(&ftv, &gtv);
            let grid = adapted_grid(&[&ftv, &gtv, &m]);
            let fc = CutFamily::cuts_of(&ftv, &grid).map_err(input_err)?;
            let gc = CutFamily::cuts_of(&gtv, &grid).map_err(input_err)?;
            println!(
                "{}",
                serde_json::json!({
                    "f_leq_g": leq_convolution(&ftv, &gtv),
                    "g_leq_f": leq_convolution(&gtv, &ftv),
                    "cutwise_f_leq_g": leq_cutwise(&fc, &gc).map_err(input_err)?,
                    "cutwise_g_leq_f": leq_cutwise(&gc, &fc).map_err(input_err)?,
                    "grid_levels": grid.len(),
                })
            );
            Ok(())
        }
        Command::CheckAxioms {
            star,
            tri,
            trials,
            m,
            n,
            seed,
            out,
        } => {
            let star = load_tnorm(&star)?;
            let tri = load_tnorm(&tri)?;
            if trials < 1 {
                return Err(Failure::Input("trials must be at least 1".into()));
            }
            uniform_grid_checked(m)?;
            let reports = match check_axioms(&star, &tri, trials, m, seed.seed) {
                Ok(reports) => reports,
                // The engine's contract is the closure theorem's hypothesis;
                // outside it, search for a closure violation by sampling.
                Err(Error::HypothesisViolation(_)) => {
                    vec![check_closure_oracle(&star, &tri, trials, n, seed.seed)]
                }
                Err(e) => return Err(input_err(e)),
            };
            let failed = reports.iter().any(|r| !r.passed());
            write_output(&out, &to_pretty(&reports))?;
            if failed {
                Err(Failure::Laws)
            } else {
                Ok(())
            }
        }
        Command::CheckTr {
            star,
            tri,
            trials,
            seed,
            out,
        } => {
            let star = load_tnorm(&star)?;
            let tri = load_tnorm(&tri)?;
            if trials < 1 {
                return Err(Failure::Input("trials must be at least 1".into()));
            }
            let reports = check_tr_norm(&star, &tri, trials, seed.seed).map_err(input_err)?;
            let failed = reports.iter().any(|r| !r.passed());
            write_output(&out, &to_pretty(&reports))?;
            if failed {
                Err(Failure::Laws)
            } else {
                Ok(())
            }
        }
        Command::DemoNecessity {
            tri,
            case,
            a,
            b,
            u,
            v,
            summand_lo,
            summand_hi,
            inner,
            n,
            out,
        } => {
            let tri = load_tnorm(&tri)?;
            let (case, default_uv) = match case {
                CaseArg::Case1 => (NecessityCase::Case1MinStar, 0.5),
                CaseArg::Case2 => (NecessityCase::Case2OrdinalStar, 0.7),
            };
            let to_unit = |x: f64, name: &str| {
                UnitValue::from_f64(x)
                    .map_err(|e| Failure::Input(format!("{name}: {e}")))
            };
            let params = NecessityParams {
                a: to_unit(a, "a")?,
                b: to_unit(b, "b")?,
                u: to_unit(u.unwrap_or(default_uv), "u")?,
                v: to_unit(v.unwrap_or(default_uv), "v")?,
                summand: Summand {
                    lo: to_unit(summand_lo, "summand-lo")?,
                    hi: to_unit(summand_hi, "summand-hi")?,
                    inner: match inner {
                        InnerArg::Product => InnerTnorm::Product,
                        InnerArg::Lukasiewicz => InnerTnorm::Lukasiewicz,
                    },
                },
            };
            if n < 16 {
                return Err(Failure::Input(format!("n must be at least 16, got {n}")));
            }
            let witness = necessity_demo(&tri, case, &params, n).map_err(input_err)?;
            write_output(&out, &to_pretty(&witness))
        }
        Command::PlotData {
            f,
            cuts,
            n,
            out_prefix,
        } => {
            if f.is_none() && cuts.is_none() {
                return Err(Failure::Input(
                    "plot-data needs --f and/or --cuts".into(),
                ));
            }
            if let Some(path) = &f {
                let tv: TruthValue = read_json(path)?;
                let ftv = F64Tv::new(&tv);
                let out = format!("{out_prefix}_fn.csv");
                let mut w = fs::File::create(&out)
                    .map_err(|e| Failure::Input(format!("{out}: {e}")))?;
                writeln!(w, "x,value").map_err(input_err)?;
                for j in 0..=n {
                    let x = j as f64 / n as f64;
                    writeln!(w, "{x},{}", ftv.eval(x)).map_err(input_err)?;
                }
            }
            if let Some(path) = &cuts {
                let fam: CutFamily = read_json(path)?;
                let out = format!("{out_prefix}_cuts.csv");
                fs::write(&out, family_csv(&fam))
                    .map_err(|e| Failure::Input(format!("{out}: {e}")))?;
            }
            Ok(())
        }
    }
}
