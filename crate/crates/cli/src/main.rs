use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pgt_core::chebyshev::{pi_gamma, psi0, psi_j};
use pgt_core::explicit::{explicit_psi_j, explicit_psi_nminus1, main_term, weyl_sample, WeylChannelSpec};
use pgt_core::gallagher::{
    converge_check, critical_remainder, exceptional_report, solve_plan_with, Level,
    DEFAULT_EPSILON, DEFAULT_GRID_DENSITY,
};
use pgt_core::model::{format_rational, parse_rational, to_f64, Exponent, ManifoldParams};
use pgt_core::spectrum::{brute_force_spectrum, enumerate_spectrum};
use pgt_cli::compare::{pgt_compare, write_compare_csv, CompareMode};
use pgt_cli::fit::fit_exponent;
use pgt_cli::grid::GridSpec;
use pgt_cli::io::{read_catalog, read_spectrum, read_theorem4, write_catalog, write_spectrum, InvalidCatalog};
use pgt_cli::manifest::RunManifest;
use serde_json::json;

#[derive(Parser)]
#[command(name = "pgt", version, about = "Prime geodesic theorem laboratory")]
struct Cli {
    /// Cap on worker threads; 1 gives bit-reproducible output.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Points {
    #[arg(long, conflicts_with = "grid")]
    x: Option<f64>,
    /// Geometric grid "x0:r:count".
    #[arg(long)]
    grid: Option<GridSpec>,
}

impl Points {
    fn resolve(&self) -> anyhow::Result<(Vec<f64>, Option<GridSpec>)> {
        match (self.x, self.grid) {
            (Some(x), None) => Ok((vec![x], None)),
            (None, Some(g)) => Ok((g.points(), Some(g))),
            _ => bail!("give either --x or --grid"),
        }
    }
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// rho as "p/q"; defaults to (n-1)/2.
    #[arg(long)]
    rho: Option<String>,
}

impl ParamArgs {
    fn params(&self) -> anyhow::Result<ManifoldParams> {
        Ok(match &self.rho {
            Some(r) => ManifoldParams::new(self.n, parse_rational(r)?)?,
            None => ManifoldParams::real_hyperbolic(self.n)?,
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Spectrum,
    Catalog,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Gallagher,
    Unconditional,
}

#[derive(Subcommand)]
enum Command {
    /// Modular-surface length spectrum up to a norm bound, as CSV.
    Enumerate {
        #[arg(long)]
        norm_bound: f64,
        /// Use the brute-force matrix search with this entry bound instead.
        #[arg(long)]
        entry_bound: Option<i64>,
    },
    /// psi_0, psi_j and pi_Gamma over a spectrum.
    Psi {
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long, default_value_t = 1)]
        j: u32,
        #[command(flatten)]
        points: Points,
    },
    /// Explicit formula for psi_j (j >= n) or, with --theorem4, psi_{n-1}.
    Explicit {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        j: Option<u32>,
        #[arg(long, requires = "config")]
        theorem4: bool,
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        points: Points,
    },
    /// Solved smoothing exponents, printed as exact rationals.
    Plan {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        j: u32,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        y_constant: f64,
    },
    /// Exceptional-set report as JSON.
    GallagherRun {
        #[arg(long, value_enum)]
        source: Source,
        #[arg(long, required_if_eq("source", "spectrum"))]
        spectrum: Option<PathBuf>,
        #[arg(long, required_if_eq("source", "catalog"))]
        catalog: Option<PathBuf>,
        /// Manifold parameters for a spectrum source (a catalog carries its own).
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        j: u32,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        y_constant: f64,
        #[arg(long)]
        i_min: i64,
        #[arg(long)]
        i_max: i64,
        /// Points per interval [e^i, e^(i+1)].
        #[arg(long, default_value_t = DEFAULT_GRID_DENSITY)]
        grid: usize,
        /// Upper split height W (default: the catalog's largest height).
        #[arg(long)]
        w_height: Option<f64>,
    },
    /// Synthetic Weyl-law catalog as JSON.
    Synth {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        c1: f64,
        #[arg(long)]
        height: f64,
    },
    /// pi_Gamma against sums of li(x^alpha), as CSV.
    PgtCompare {
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        j: u32,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long)]
        grid: GridSpec,
    },
    /// Power-law fit of |y| against x from a CSV file.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "x")]
        x_col: String,
        #[arg(long, default_value = "remainder")]
        y_col: String,
    },
}

fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?))
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn rational_json(q: &Exponent) -> serde_json::Value {
    json!({ "exact": format_rational(q), "decimal": to_f64(q) })
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let mut out = output(cli.out.as_deref())?;
    let manifest = |cmd: &str| RunManifest::new(cmd).threads(cli.threads);

    match cli.command {
        Command::Enumerate { norm_bound, entry_bound } => {
            let (spec, m) = match entry_bound {
                Some(e) => (brute_force_spectrum(norm_bound, e), manifest("enumerate").param("entry_bound", e)),
                None => (enumerate_spectrum(norm_bound)?, manifest("enumerate")),
            };
            writeln!(out, "{}", m.param("norm_bound", norm_bound).csv_comment())?;
            write_spectrum(&spec, &mut out)?;
        }
        Command::Psi { spectrum, j, points } => {
            let spec = read_spectrum(open(&spectrum)?)?;
            let (xs, grid) = points.resolve()?;
            let mut m = manifest("psi").input_file(&spectrum)?.param("j", j);
            if let Some(g) = grid {
                m = m.grid(g);
            }
            let rows = xs
                .into_iter()
                .map(|x| Ok((x, psi0(&spec, x)?, psi_j(&spec, x, j)?, pi_gamma(&spec, x)?)))
                .collect::<pgt_core::Result<Vec<_>>>()?;
            writeln!(out, "{}", m.csv_comment())?;
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["x", "psi0", "psi_j", "pi_gamma"])?;
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Command::Explicit { catalog, j, theorem4, config, points } => {
            let cat = read_catalog(open(&catalog)?)?;
            let (xs, grid) = points.resolve()?;
            let mut m = manifest("explicit").input_file(&catalog)?;
            let t4 = match (theorem4, &config) {
                (true, Some(path)) => {
                    m = m.input_file(path)?.param("theorem4", true);
                    Some(read_theorem4(open(path)?, cat.params.n())?)
                }
                _ => None,
            };
            let j = j.unwrap_or(cat.params.n());
            if t4.is_none() {
                m = m.param("j", j);
            }
            if let Some(g) = grid {
                m = m.grid(g);
            }
            let rows = xs
                .into_iter()
                .map(|x| match &t4 {
                    Some(cfg) => explicit_psi_nminus1(&cat, cfg, x).map(|v| (x, v.value, Some(v.reported_bound))),
                    None => explicit_psi_j(&cat, x, j).map(|v| (x, v, None)),
                })
                .collect::<pgt_core::Result<Vec<_>>>()?;
            writeln!(out, "{}", m.csv_comment())?;
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["x", "value", "reported_bound"])?;
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Command::Plan { params, j, epsilon, y_constant } => {
            let params = params.params()?;
            let plan = solve_plan_with(&params, j, epsilon, y_constant)?;
            writeln!(out, "params: n = {}, rho = {}", params.n(), format_rational(params.rho()))?;
            writeln!(out, "j = {} ({}), epsilon = {}", plan.j, plan.kind, plan.epsilon)?;
            let line = |name: &str, q: &Exponent| format!("{name} = {} ({})", format_rational(q), to_f64(q));
            writeln!(out, "{}", line("gamma", &plan.gamma_exp))?;
            writeln!(out, "{}", line("beta", &plan.beta))?;
            for (label, e) in [("d", &plan.d_exponents), ("Y", &plan.y_exponents)] {
                writeln!(out, "{}", line(&format!("{label}: x exponent"), &e.x))?;
                writeln!(out, "{}", line(&format!("{label}: log x exponent"), &e.log))?;
                writeln!(out, "{}", line(&format!("{label}: log log x exponent"), &e.log_log))?;
            }
            writeln!(out, "{}", line("error x exponent", &plan.error_x_exponent))?;
            writeln!(out, "{}", line("error log x exponent", &plan.error_log_exponent))?;
        }
        Command::GallagherRun {
            source, spectrum, catalog, params, j, epsilon, y_constant, i_min, i_max, grid, w_height,
        } => {
            let mut m = manifest("gallagher-run")
                .param("j", j)
                .param("epsilon", epsilon)
                .param("y_constant", y_constant)
                .param("i_min", i_min)
                .param("i_max", i_max)
                .param("grid", grid);
            let (report, plan, level, w) = match source {
                Source::Spectrum => {
                    let path = spectrum.context("--spectrum is required")?;
                    let spec = read_spectrum(open(&path)?)?;
                    m = m.input_file(&path)?;
                    let params = params.params()?;
                    spec.ensure_covers(((i_max + 1) as f64).exp())?;
                    let plan = solve_plan_with(&params, j, epsilon, y_constant)?;
                    let rem = |x: f64| Ok(psi0(&spec, x)? - main_term(&params, x));
                    let r = exceptional_report(rem, &plan, Level::Psi0, i_min..=i_max, grid)?;
                    (r, plan, Level::Psi0, None)
                }
                Source::Catalog => {
                    let path = catalog.context("--catalog is required")?;
                    let cat = read_catalog(open(&path)?)?;
                    m = m.input_file(&path)?;
                    let w = w_height.unwrap_or_else(|| cat.max_height());
                    let plan = solve_plan_with(&cat.params, j, epsilon, y_constant)?;
                    let rem = critical_remainder(&cat, &plan, w);
                    let r = exceptional_report(rem, &plan, Level::PsiJ, i_min..=i_max, grid)?;
                    (r, plan, Level::PsiJ, Some(w))
                }
            };
            let verdict = converge_check(&report);
            let doc = json!({
                "intervals": report.intervals,
                "total_measure": report.total_measure,
                "epsilon": report.epsilon,
                "level": match level { Level::PsiJ => "psi_j", Level::Psi0 => "psi_0" },
                "w_height": w,
                "plan": {
                    "kind": plan.kind.to_string(),
                    "gamma": rational_json(&plan.gamma_exp),
                    "beta": rational_json(&plan.beta),
                    "error_x_exponent": rational_json(&plan.error_x_exponent),
                    "error_log_exponent": rational_json(&plan.error_log_exponent),
                },
                "converge_check": {
                    "finite_trend": verdict.finite_trend,
                    "fitted_rate": if verdict.fitted_rate.is_finite() { json!(verdict.fitted_rate) } else { json!("-inf") },
                },
                "provenance": m,
            });
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
        Command::Synth { params, c1, height } => {
            let params = params.params()?;
            let spec = [WeylChannelSpec::principal(&params)];
            let cat = weyl_sample(&params, c1, height, &spec)?;
            write_catalog(&cat, &mut out)?;
            writeln!(out)?;
        }
        Command::PgtCompare { spectrum, catalog, mode, j, epsilon, grid } => {
            let spec = read_spectrum(open(&spectrum)?)?;
            let cat = read_catalog(open(&catalog)?)?;
            let mode = match mode {
                Mode::Gallagher => CompareMode::Gallagher { j, epsilon },
                Mode::Unconditional => CompareMode::Unconditional { j },
            };
            let rows = pgt_compare(&spec, &cat, mode, &grid)?;
            let m = manifest("pgt-compare")
                .input_file(&spectrum)?
                .input_file(&catalog)?
                .param("mode", mode.name())
                .param("j", j)
                .param("epsilon", epsilon)
                .grid(grid);
            write_compare_csv(&rows, &m, &mut out)?;
        }
        Command::Fit { input, x_col, y_col } => {
            let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(open(&input)?);
            let headers = r.headers()?.clone();
            let col = |name: &str| {
                headers.iter().position(|h| h == name).with_context(|| format!("no column {name:?}"))
            };
            let (xi, yi) = (col(&x_col)?, col(&y_col)?);
            let series = r
                .records()
                .map(|rec| {
                    let rec = rec?;
                    Ok((rec[xi].parse::<f64>()?, rec[yi].parse::<f64>()?))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            let f = fit_exponent(&series)?;
            writeln!(out, "slope,stderr,points")?;
            writeln!(out, "{},{},{}", f.slope, f.stderr, f.points)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// 2 for invalid input, 3 when the data does not cover the query, 1 otherwise.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<pgt_core::Error>() {
            return match e {
                pgt_core::Error::IncompleteData { .. } => 3,
                _ => 2,
            };
        }
        if cause.downcast_ref::<InvalidCatalog>().is_some() {
            return 2;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
