//! `ruminlab`: command-line access to the Rumin complex, H-linear maps,
//! intrinsic graphs and their currents.

mod io;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use ruminlab_core::currents::{self, TestForm, Window};
use ruminlab_core::forms::check_rumin_complex;
use ruminlab_core::graphs::{self, BetaRule, ExtendOptions, GraphFunction};
use ruminlab_core::hmaps::{canonicalize_vertical_plane, symplectic_normalize, to_strings};
use ruminlab_core::parse::parse_polyform;
use ruminlab_core::quadrature::QuadratureSpec;
use ruminlab_core::rumin::{self, JClass};
use ruminlab_core::scalar::{to_f64, Q};
use ruminlab_core::{Metric, PlaneSpan, Splitting};

use io::Usage;

#[derive(Parser, Debug)]
#[command(name = "ruminlab", version, about = "Heisenberg-group Rumin complex, intrinsic graphs and currents")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Dims {
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..=15))]
    n: u16,
    /// Codimension of the graphs or planes, `1 <= k <= n`.
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..=15))]
    k: u16,
}

impl Dims {
    fn split(&self) -> Result<Splitting> {
        Splitting::new(self.n as usize, self.k as usize).map_err(|e| Usage(e.to_string()).into())
    }
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[command(flatten)]
    dims: Dims,
    /// File with the k polynomials of phi, one per line, in x1.., y1.., t.
    #[arg(long, conflicts_with = "phi_text")]
    phi: Option<PathBuf>,
    /// The k polynomials of phi inline, separated by `;`.
    #[arg(long)]
    phi_text: Option<String>,
}

impl GraphArgs {
    fn graph(&self) -> Result<GraphFunction> {
        let s = self.dims.split()?;
        let text = match (&self.phi, &self.phi_text) {
            (Some(p), _) => io::read(p)?,
            (None, Some(t)) => t.clone(),
            (None, None) => bail!(Usage("one of --phi or --phi-text is required".into())),
        };
        io::graph_from_text(s, &text)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Basis of J^{2n+1-k} as covector literals.
    Basis {
        #[command(flatten)]
        dims: Dims,
    },
    /// Standard two-row tableaux on {1..m} with first row of length l.
    Tableaux {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: usize,
    },
    /// Exact check of D o d = 0 and d o D = 0 on random polynomial forms.
    Dcheck {
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..=4))]
        n: u16,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Apply d, D or d_C to a polynomial form literal.
    RuminApply {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        form: String,
        #[arg(long, value_parser = ["d", "D", "dc"], default_value = "dc")]
        op: String,
    },
    /// Pairings of the canonical tangent of P_{a,b} with the basis of J.
    PairingTable {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        n: usize,
    },
    /// Randomized search for vertical planes with tangent class parallel to zeta.
    Census {
        #[command(flatten)]
        dims: Dims,
        /// JSON array of rational pairings, e.g. `["1", "0", "-1/2"]`.
        #[arg(long, conflicts_with = "tangent")]
        zeta: Option<String>,
        /// Multivector literal whose J-class is used as zeta.
        #[arg(long)]
        tangent: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
    },
    /// Symplectic normal form of a horizontal subspace, or of a vertical plane with --vertical.
    Normalize {
        #[arg(long)]
        n: usize,
        /// Spanning vectors as `;`-separated literals, e.g. `X1 + Y2; X2`.
        #[arg(long)]
        span: String,
        #[arg(long)]
        vertical: bool,
    },
    /// Lower bound on the intrinsic Lipschitz constant of sampled values.
    Lip {
        #[command(flatten)]
        dims: Dims,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "d-infinity")]
        metric: Metric,
    },
    /// Extend sampled values to a grid through the cone-function pipeline.
    Extend {
        #[command(flatten)]
        dims: Dims,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "d-infinity")]
        metric: Metric,
        /// Known Lipschitz constant of the input.
        #[arg(long)]
        lip: Option<f64>,
        /// `sharp` or `cstar` (beta = k C_*^2 / alpha).
        #[arg(long, default_value = "sharp")]
        beta_rule: BetaRule,
        /// Residual tolerance of the zero finder.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Distances from rescaled translates of phi to the intrinsic linear map at a point.
    Blowup {
        #[command(flatten)]
        graph: GraphArgs,
        /// Point of W as comma-separated rationals.
        #[arg(long)]
        at: String,
        #[arg(long, default_value = "1,2,4,8,16")]
        radii: String,
        #[arg(long, default_value_t = 1.0)]
        half_width: f64,
        #[arg(long, default_value_t = 9)]
        per_axis: usize,
    },
    /// Evaluate the Heisenberg (or classical) current of a graph on a test form.
    Current {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        classical: bool,
    },
    /// Evaluate the boundary of a graph current on a test form of degree 2n-k.
    Boundary {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        form: FormArgs,
    },
    /// Monte-Carlo estimate of C_{n,k}.
    Cnk {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, default_value = "d-infinity")]
        metric: Metric,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
    },
    /// Compare the area formula with the mass computed through the current pairing.
    AreaCheck {
        #[command(flatten)]
        graph: GraphArgs,
        /// Window JSON `{"center": [..], "radius": [..]}`.
        #[arg(long)]
        window: PathBuf,
        #[arg(long)]
        quad: Option<PathBuf>,
        #[command(flatten)]
        cnk: CnkArgs,
    },
}

#[derive(Args, Debug)]
struct CnkArgs {
    /// Value of C_{n,k}; estimated by Monte Carlo when absent.
    #[arg(long)]
    cnk: Option<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    cnk_samples: usize,
    #[arg(long, default_value = "d-infinity")]
    metric: Metric,
}

impl CnkArgs {
    fn value(&self, s: Splitting, seed: u64) -> Result<(f64, Option<f64>)> {
        match self.cnk {
            Some(c) => Ok((c, None)),
            None => {
                let e = currents::estimate_cnk(s.n, s.k, self.metric, self.cnk_samples, seed)?;
                Ok((e.estimate, Some(e.ci)))
            }
        }
    }
}

#[derive(Args, Debug)]
struct FormArgs {
    /// Test form JSON `{"core": "<form literal>", "window": {"center": [..], "radius": [..]}}`.
    #[arg(long)]
    omega: PathBuf,
    /// Quadrature JSON `{"lo", "hi", "points", "rule"}`; defaults to 32 Gauss points on the window box.
    #[arg(long)]
    quad: Option<PathBuf>,
    #[command(flatten)]
    cnk: CnkArgs,
}

impl FormArgs {
    fn load(&self, s: Splitting) -> Result<(TestForm, QuadratureSpec)> {
        let v: Value = serde_json::from_str(&io::read(&self.omega)?).context("test form JSON")?;
        let core = v["core"].as_str().ok_or_else(|| Usage("test form needs a string `core`".into()))?;
        let core = parse_polyform(core, Some(s.n))?;
        let window = io::window_from_json(s, &v["window"])?;
        let q = match &self.quad {
            Some(p) => io::quad_from_file(p)?,
            None => currents::window_quadrature(&window, 32),
        };
        Ok((TestForm::new(core, window)?, q))
    }
}

fn run(cli: &Cli) -> Result<(String, Value)> {
    let seed = cli.seed;
    Ok(match &cli.cmd {
        Command::Basis { dims } => {
            let (n, k) = (dims.n as usize, dims.k as usize);
            if k > n {
                bail!(Usage(format!("need k <= n, got n={n}, k={k}")));
            }
            let b = rumin::basis_j(n, 2 * n + 1 - k)?;
            let lines: Vec<String> = b.iter().map(|e| format!("{}  {e}", e.covector)).collect();
            let js: Vec<Value> =
                b.iter().map(|e| json!({"I": e.i, "J": e.j, "R": [e.r.row1, e.r.row2], "covector": e.covector.to_string()})).collect();
            (lines.join("\n"), json!({"n": n, "degree": 2 * n + 1 - k, "dim": b.len(), "basis": js}))
        }
        Command::Tableaux { m, l } => {
            let t = rumin::syt_enumerate(&(1..=*m).collect::<Vec<_>>(), *l)?;
            let lines: Vec<String> = t.iter().map(|r| r.to_string()).collect();
            let js: Vec<Value> = t.iter().map(|r| json!([r.row1, r.row2])).collect();
            (lines.join("\n"), json!({"m": m, "l": l, "count": t.len(), "tableaux": js}))
        }
        Command::Dcheck { n, trials } => {
            let c = check_rumin_complex(*n as usize, *trials, seed)?;
            let text = if c.all_ok() {
                format!("OK: D∘d=0, d∘D=0 ({}/{} exact)", c.trials, c.trials)
            } else {
                format!("FAIL: D∘d=0 {}/{}, d∘D=0 {}/{}", c.d_after_d, c.trials, c.d_after_big_d, c.trials)
            };
            if !c.all_ok() {
                bail!(io::Failure(text));
            }
            (text, json!({"ok": true, "trials": c.trials, "d_after_d": c.d_after_d, "d_after_big_d": c.d_after_big_d}))
        }
        Command::RuminApply { n, form, op } => {
            let f = parse_polyform(form, *n)?;
            let r = match op.as_str() {
                "d" => f.d(),
                "D" => f.rumin()?,
                _ => f.dc()?,
            };
            (r.to_string(), json!({"input": f.to_string(), "op": op, "result": r.to_string()}))
        }
        Command::PairingTable { a, b, n } => {
            let t = rumin::canonical_pairing_table(*a, *b, *n)?;
            let lines: Vec<String> = t.iter().filter(|(_, c)| c != &Q::from_integer(0.into())).map(|(e, c)| format!("{e}: {c}")).collect();
            let js: Vec<Value> = t.iter().map(|(e, c)| json!({"I": e.i, "J": e.j, "R": [e.r.row1, e.r.row2], "pairing": c.to_string()})).collect();
            (lines.join("\n"), json!({"a": a, "b": b, "n": n, "table": js}))
        }
        Command::Census { dims, zeta, tangent, trials } => {
            let (n, k) = (dims.n as usize, dims.k as usize);
            let z = match (zeta, tangent) {
                (Some(z), _) => JClass::new(n, k, io::rationals_from_json(z)?)?,
                (None, Some(t)) => {
                    let tau = ruminlab_core::parse::parse_multivector(t, Some(n))?;
                    rumin::project_j(&tau)?
                }
                (None, None) => bail!(Usage("one of --zeta or --tangent is required".into())),
            };
            if z.n != n || z.k != k {
                bail!(Usage(format!("class lives in (n,k)=({},{})", z.n, z.k)));
            }
            let r = rumin::tangency_census(&z, *trials, seed)?;
            let mut lines = vec![format!("zeta={z} trials={} hits={} planes={} bound={}", r.trials, r.hits, r.planes.len(), r.bound)];
            for p in &r.planes {
                lines.push(format!("{}  tangent {}", p.plane, p.tangent));
            }
            lines.push(format!("pairwise not rank-one connected: {}", r.pairwise_not_rank_one));
            let js: Vec<Value> = r.planes.iter().map(|p| json!({"plane": p.plane.to_string(), "tangent": p.tangent.to_string()})).collect();
            (
                lines.join("\n"),
                json!({"zeta": z.to_string(), "trials": r.trials, "hits": r.hits, "bound": r.bound, "within_bound": r.within_bound,
                       "pairwise_not_rank_one": r.pairwise_not_rank_one, "planes": js}),
            )
        }
        Command::Normalize { n, span, vertical } => {
            let vecs = io::vectors_from_text(*n, span)?;
            let p = PlaneSpan::new(*n, &vecs);
            let r = if *vertical { canonicalize_vertical_plane(&p)? } else { symplectic_normalize(&p)? };
            let (entries, c) = to_strings(&r.map);
            let rows: Vec<String> = entries.chunks(2 * n).map(|row| row.join(" ")).collect();
            let text = format!("a={} b={}\nc={c}\nA=\n{}", r.a, r.b, rows.join("\n"));
            (
                text,
                json!({"a": r.a, "b": r.b, "A": r.map.a.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(), "c": c}),
            )
        }
        Command::Lip { dims, input, metric } => {
            let s = dims.split()?;
            let samples = io::samples_from_file(input)?;
            let l = graphs::lip_constant_estimate(&s, &samples, *metric)?;
            (format!("lip >= {l}"), json!({"samples": samples.len(), "metric": metric.to_string(), "lip_lower_bound": l}))
        }
        Command::Extend { dims, input, grid, out, metric, lip, beta_rule, tol } => {
            let s = dims.split()?;
            let samples = io::samples_from_file(input)?;
            let g: graphs::Grid = serde_json::from_str(&io::read(grid)?).context("grid JSON")?;
            if g.counts.len() != s.w_dim() || g.origin.len() != s.w_dim() || g.spacing.len() != s.w_dim() {
                bail!(Usage(format!("grid must have {} axes", s.w_dim())));
            }
            let opts = ExtendOptions { metric: *metric, lip: *lip, rule: *beta_rule, tol: *tol };
            let e = graphs::extend(&s, &samples, &g.points(), &opts)?;
            io::write_samples(out, &e.values)?;
            let lip_out = if e.values.len() >= 2 { Some(graphs::lip_constant_estimate(&s, &e.values, *metric)?) } else { None };
            let text = format!(
                "extended {} points to {}\nlip_in={} lip_out={} beta={} eps={}",
                samples.len(),
                out.display(),
                e.lip_in,
                lip_out.map_or("n/a".into(), |l| l.to_string()),
                e.params.beta,
                e.params.eps
            );
            (
                text,
                json!({"points": e.values.len(), "out": out.display().to_string(), "lip_in": e.lip_in, "lip_out": lip_out,
                          "alpha": e.params.alpha, "beta": e.params.beta, "eps": e.params.eps, "delta": e.params.delta}),
            )
        }
        Command::Blowup { graph, at, radii, half_width, per_axis } => {
            let g = graph.graph()?;
            let wbar = io::rationals_from_list(at)?;
            let radii = io::rationals_from_list(radii)?;
            if wbar.len() != g.split.w_dim() {
                bail!(Usage(format!("--at needs {} coordinates", g.split.w_dim())));
            }
            let r = graphs::blowup_probe(&g, &wbar, &radii, *half_width, *per_axis)?;
            let mut lines: Vec<String> = r.radii.iter().zip(&r.distances).map(|(r, d)| format!("r={r} dist={d:e}")).collect();
            lines.push(format!(
                "limit gradient {:?}",
                r.limit.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()
            ));
            lines.push(format!("decreasing: {}", r.decreasing()));
            (
                lines.join("\n"),
                json!({"radii": r.radii.iter().map(|x| x.to_string()).collect::<Vec<_>>(), "distances": r.distances,
                       "gradient": r.limit.iter().map(|row| row.iter().map(to_f64).collect::<Vec<_>>()).collect::<Vec<_>>(),
                       "decreasing": r.decreasing()}),
            )
        }
        Command::Current { graph, form, classical } => {
            let g = graph.graph()?;
            let (tf, q) = form.load(g.split)?;
            if *classical {
                let v = currents::eval_classical_current(&g, &tf, &q)?;
                (format!("classical value={} est_error={:e}", v.value, v.est_error), json!({"value": v.value, "est_error": v.est_error}))
            } else {
                let (c, ci) = form.cnk.value(g.split, seed)?;
                let v = currents::eval_graph_current(&g, &tf, &q, c)?;
                (
                    format!("value={} est_error={:e} cnk={c}", v.value, v.est_error),
                    json!({"value": v.value, "est_error": v.est_error, "cnk": c, "cnk_ci": ci}),
                )
            }
        }
        Command::Boundary { graph, form } => {
            let g = graph.graph()?;
            let (tf, q) = form.load(g.split)?;
            let (c, _) = form.cnk.value(g.split, seed)?;
            let v = currents::boundary_eval(&g, &tf, &q, c)?;
            let m = currents::mass_scale(&g, &tf, &q, c)?;
            (
                format!("value={:e} est_error={:e} mass_scale={m}", v.value, v.est_error),
                json!({"value": v.value, "est_error": v.est_error, "mass_scale": m, "cnk": c}),
            )
        }
        Command::Cnk { dims, metric, samples } => {
            let s = dims.split()?;
            let e = currents::estimate_cnk(s.n, s.k, *metric, *samples, seed)?;
            let closed = (*metric == Metric::DInfinity).then(|| currents::cnk_closed_form_dinf(s.n, s.k));
            (
                format!("C_{{{},{}}} = {:.6} ± {:.6} (slice measure {:.6}, samples {})", s.n, s.k, e.estimate, e.ci, e.slice_measure, e.samples),
                json!({"estimate": e.estimate, "ci": e.ci, "slice_measure": e.slice_measure, "argmax": e.argmax, "samples": e.samples,
                       "metric": metric.to_string(), "closed_form_at_origin": closed}),
            )
        }
        Command::AreaCheck { graph, window, quad, cnk } => {
            let g = graph.graph()?;
            let v: Value = serde_json::from_str(&io::read(window)?).context("window JSON")?;
            let w: Window = io::window_from_json(g.split, &v)?;
            let q = match quad {
                Some(p) => io::quad_from_file(p)?,
                None => currents::window_quadrature(&w, 32),
            };
            let (c, _) = cnk.value(g.split, seed)?;
            let r = currents::area_cross_check(&g, &w, &q, c)?;
            (
                format!("area={} current={} rel_deviation={:e}", r.area_side, r.current_side, r.rel_deviation),
                json!({"area_side": r.area_side, "current_side": r.current_side, "rel_deviation": r.rel_deviation, "cnk": c}),
            )
        }
    })
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("RUMINLAB_THREADS") {
        let n: usize = v.parse().map_err(|_| Usage(format!("RUMINLAB_THREADS must be a positive integer, got `{v}`")))?;
        if n == 0 {
            bail!(Usage("RUMINLAB_THREADS must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("thread pool")?;
    }
    Ok(())
}

/// Print to stdout; a closed pipe (`ruminlab ... | head`) is not an error.
fn emit(s: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let args: Vec<String> = std::env::args().skip(1).collect();
    let header = json!({"version": env!("CARGO_PKG_VERSION"), "seed": cli.seed, "command": args.join(" ")});
    let outcome = init_threads().and_then(|_| run(&cli));
    match outcome {
        Ok((text, value)) => {
            if cli.json {
                emit(&json!({"meta": header, "result": value}).to_string());
            } else {
                emit(&format!("# ruminlab {} seed={} cmd: {}\n{text}", env!("CARGO_PKG_VERSION"), cli.seed, args.join(" ")));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = io::exit_code(&e);
            if cli.json {
                emit(&json!({"meta": header, "error": format!("{e:#}")}).to_string());
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}
