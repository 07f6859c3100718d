//! Command-line front end. Every run prints `{"config": …, "result": …}`
//! on stdout, or a DOT graph with `--out dot`; diagnostics go to stderr.
//!
//! Exit codes: 0 on success, 2 for bad input (including walls, boundaries
//! and ranges), 1 when the library itself fails.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cone_atlas::{central_contains, dimension_check, theta, walls_through};
use crate::error::{Error, Result};
use crate::exact_chambers::{classify, EpsilonAssignment, LengthVector};
use crate::partition::Partition;
use crate::polygon_realize::{close, degeneration_path, frame_in_stratum, incidence, CloseOptions, EdgeFrame, Seed, Tolerances};
use crate::rational;
use crate::stable_core::{limit, stabilize, to_stable_curve, validate, Filler, StablePolygon};
use crate::strata_cohomology::{
    ih_poincare_center, poincare_center, schedule, stable_betti, strata, wall_crossing_path, PoincarePoly,
};
use crate::subset::Subset;

#[derive(Debug, Parser)]
#[command(name = "stable-polygons", version, about = "Polygon spaces and their stable compactifications")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Out {
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    /// Walk across the walls from the favorable chamber.
    Wallcross,
    /// Sum over the strata of the stable-polygon space.
    Stable,
    /// Closed form at the center (odd n) or its intersection cohomology (even n).
    #[value(alias = "closed")]
    Center,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Side lengths, comma separated rationals (`1,3/2,2.5`).
    #[arg(long)]
    r: Option<String>,
    /// `canonical`, `uniform=VALUE`, or `J=VALUE` pairs separated by `;`
    /// with `J` a comma separated label list.
    #[arg(long)]
    eps: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance override `NAME=VALUE` (close, angle, pgl); repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,
    #[arg(long, value_enum, default_value = "json")]
    out: Out,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Walls, chamber and favorable index of a length vector.
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// A closed polygon, optionally with prescribed parallel classes.
    Realize {
        #[command(flatten)]
        common: Common,
        /// Blocks of parallel edges, e.g. `1,2;4,5`.
        #[arg(long)]
        merge: Option<String>,
    },
    /// Attach bubbles to a realized polygon.
    Stabilize {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        merge: Option<String>,
    },
    /// Bubble limit of a family degenerating along `J`.
    Limit {
        #[command(flatten)]
        common: Common,
        #[arg(long = "J")]
        j: String,
        #[arg(long, default_value_t = 12)]
        steps: usize,
    },
    /// Dual graph of the stable curve of a stabilized polygon.
    Curve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        merge: Option<String>,
    },
    /// Every stratum with its emptiness and the Hasse diagram.
    Strata {
        #[command(flatten)]
        common: Common,
    },
    /// Blowup order of the strata.
    Schedule {
        #[command(flatten)]
        common: Common,
    },
    /// Poincaré polynomial, coefficients of `t^0, t^2, …`.
    Poincare {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "wallcross")]
        method: Method,
        /// Edge count for `--method center` without `--r`.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Kähler cone coordinates and parameter-cone samples.
    Cone {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        sample: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Realize { .. } => "realize",
            Command::Stabilize { .. } => "stabilize",
            Command::Limit { .. } => "limit",
            Command::Curve { .. } => "curve",
            Command::Strata { .. } => "strata",
            Command::Schedule { .. } => "schedule",
            Command::Poincare { .. } => "poincare",
            Command::Cone { .. } => "cone",
        }
    }

    /// Commands that fall back to the canonical `ε` when none is given.
    fn uses_eps(&self) -> bool {
        matches!(
            self,
            Command::Stabilize { .. }
                | Command::Curve { .. }
                | Command::Limit { .. }
                | Command::Poincare { method: Method::Stable, .. }
        )
    }

    fn common(&self) -> &Common {
        match self {
            Command::Classify { common }
            | Command::Realize { common, .. }
            | Command::Stabilize { common, .. }
            | Command::Limit { common, .. }
            | Command::Curve { common, .. }
            | Command::Strata { common }
            | Command::Schedule { common }
            | Command::Poincare { common, .. }
            | Command::Cone { common, .. } => common,
        }
    }
}

pub fn parse_subset(text: &str) -> Result<Subset> {
    let t = text.trim().trim_start_matches('{').trim_end_matches('}');
    let labels = t
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| Error::invalid(format!("bad edge label '{s}' in '{text}'"))))
        .collect::<Result<Vec<_>>>()?;
    Subset::from_labels(labels)
}

pub fn parse_eps(text: &str, r: &LengthVector) -> Result<EpsilonAssignment> {
    let t = text.trim();
    if t == "canonical" {
        return EpsilonAssignment::canonical(r);
    }
    if let Some(v) = t.strip_prefix("uniform=") {
        return EpsilonAssignment::uniform(r, &rational::parse(v)?);
    }
    let mut entries = Vec::new();
    for pair in t.split(';').filter(|p| !p.trim().is_empty()) {
        let (j, v) = pair.split_once('=').ok_or_else(|| Error::invalid(format!("expected J=VALUE, got '{pair}'")))?;
        entries.push((parse_subset(j)?, rational::parse(v)?));
    }
    EpsilonAssignment::new(r, entries)
}

fn parse_partition(n: usize, text: &str) -> Result<Partition> {
    let blocks = text.split(';').filter(|b| !b.trim().is_empty()).map(parse_subset).collect::<Result<Vec<_>>>()?;
    Partition::merging(n, &blocks)
}

struct Resolved {
    r: Option<LengthVector>,
    eps: Option<EpsilonAssignment>,
    tol: Tolerances,
}

fn resolve(cmd: &Command) -> Result<Resolved> {
    let c = cmd.common();
    let r = c.r.as_deref().map(LengthVector::parse).transpose()?;
    let eps = match (&c.eps, &r) {
        (Some(e), Some(r)) => Some(parse_eps(e, r)?),
        (Some(_), None) => return Err(Error::invalid("--eps needs --r")),
        (None, Some(r)) if cmd.uses_eps() => Some(EpsilonAssignment::canonical(r)?),
        _ => None,
    };
    let mut tol = Tolerances::default();
    for t in &c.tol {
        let (name, v) = t.split_once('=').ok_or_else(|| Error::invalid(format!("expected NAME=VALUE, got '{t}'")))?;
        let v: f64 = v.parse().map_err(|_| Error::invalid(format!("bad tolerance value '{v}'")))?;
        tol.set(name, v)?;
    }
    Ok(Resolved { r, eps, tol })
}

fn need_r(r: &Option<LengthVector>) -> Result<&LengthVector> {
    r.as_ref().ok_or_else(|| Error::invalid("--r is required"))
}

fn need_eps(res: &Resolved) -> Result<&EpsilonAssignment> {
    res.eps.as_ref().ok_or_else(|| Error::invalid("--eps is required"))
}

fn realize(r: &LengthVector, merge: Option<&str>, seed: u64, tol: &Tolerances) -> Result<EdgeFrame> {
    let opts = CloseOptions { tol: tol.close, ..CloseOptions::default() };
    match merge {
        Some(m) => frame_in_stratum(r, &parse_partition(r.n(), m)?, seed, &opts),
        None => close(r, &Seed::Rng(seed), &opts),
    }
}

fn stabilized(res: &Resolved, merge: Option<&str>, seed: u64) -> Result<StablePolygon> {
    let r = need_r(&res.r)?;
    let f = realize(r, merge, seed, &res.tol)?;
    stabilize(&f, need_eps(res)?, &Filler::Rng(seed), &res.tol)
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Internal(format!("serialization: {e}")))
}

fn poly(p: &PoincarePoly) -> Value {
    json!({ "coefficients": p.coeffs(), "display": p.to_string() })
}

enum Output {
    Json(Value),
    Dot(String),
}

fn dispatch(cmd: &Command, res: &Resolved) -> Result<Output> {
    let common = cmd.common();
    let seed = common.seed;
    let dot = common.out == Out::Dot;
    let tol = &res.tol;
    let value = match cmd {
        Command::Classify { .. } => to_value(&classify(need_r(&res.r)?)?)?,
        Command::Realize { merge, .. } => to_value(&realize(need_r(&res.r)?, merge.as_deref(), seed, tol)?)?,
        Command::Stabilize { merge, .. } => {
            let sp = stabilized(res, merge.as_deref(), seed)?;
            json!({ "stable_polygon": to_value(&sp)?, "validation": to_value(&validate(&sp, tol)?)? })
        }
        Command::Curve { merge, .. } => {
            let curve = to_stable_curve(&stabilized(res, merge.as_deref(), seed)?, tol)?;
            if dot {
                return Ok(Output::Dot(curve.to_dot()));
            }
            json!({ "curve": to_value(&curve)?, "stable_model": to_value(&curve.contract())? })
        }
        Command::Limit { j, steps, .. } => {
            let r = need_r(&res.r)?;
            let j = parse_subset(j)?;
            let e = need_eps(res)?.get(j)?;
            let path = degeneration_path(r, j, *steps, seed)?;
            let family = &path[..path.len() - 1];
            let bubble = limit(family, j, e, tol)?;
            let last = family.last().expect("steps >= 1");
            json!({
                "J": j,
                "eps": rational::format(e),
                "bubble": to_value(&bubble)?,
                "endpoint": to_value(path.last().expect("non-empty"))?,
                "incidence_at_last_step": to_value(&incidence(last, &bubble, j, tol)?)?,
            })
        }
        Command::Strata { .. } => to_value(&strata(need_r(&res.r)?)?)?,
        Command::Schedule { .. } => {
            let s = schedule(need_r(&res.r)?, res.eps.as_ref())?;
            if dot {
                return Ok(Output::Dot(s.to_dot()));
            }
            to_value(&s)?
        }
        Command::Poincare { method, n, .. } => match method {
            Method::Wallcross => {
                let path = wall_crossing_path(need_r(&res.r)?)?;
                json!({ "poincare": poly(&path.poincare), "path": to_value(&path)? })
            }
            Method::Stable => {
                let r = need_r(&res.r)?;
                json!({ "poincare": poly(&stable_betti(r, need_eps(res)?)?) })
            }
            Method::Center => {
                let n = match (n, &res.r) {
                    (Some(n), _) => *n,
                    (None, Some(r)) => r.n(),
                    (None, None) => return Err(Error::invalid("--method center needs --n or --r")),
                };
                let (p, kind) = if n % 2 == 1 {
                    (poincare_center(n)?, "ordinary")
                } else {
                    (ih_poincare_center(n)?, "intersection")
                };
                json!({ "n": n, "cohomology": kind, "poincare": poly(&p) })
            }
        },
        Command::Cone { n, sample, .. } => {
            let mut out = serde_json::Map::new();
            if let Some(r) = &res.r {
                out.insert("central".into(), json!(central_contains(r)));
                out.insert("walls_through".into(), to_value(&walls_through(r))?);
                if central_contains(r) {
                    out.insert("theta".into(), to_value(&theta(r)?)?);
                }
            }
            if *sample > 0 {
                let n = n.or(res.r.as_ref().map(LengthVector::n)).ok_or_else(|| Error::invalid("--sample needs --n"))?;
                let (points, check) = dimension_check(n, *sample, seed)?;
                out.insert("points".into(), to_value(&points)?);
                out.insert("dimension_check".into(), to_value(&check)?);
            }
            if out.is_empty() {
                return Err(Error::invalid("cone needs --r or --n with --sample"));
            }
            Value::Object(out)
        }
    };
    if dot {
        return Err(Error::invalid(format!("--out dot is only available for curve and schedule, not {}", cmd.name())));
    }
    Ok(Output::Json(value))
}

fn config(cmd: &Command, res: &Resolved) -> Result<Value> {
    let c = cmd.common();
    let mut v = json!({
        "command": cmd.name(),
        "r": res.r.as_ref().map(|r| r.lengths().iter().map(rational::format).collect::<Vec<_>>()),
        "eps": to_value(&res.eps)?,
        "seed": c.seed,
        "tol": { "close": res.tol.close, "angle": res.tol.angle, "pgl": res.tol.pgl },
        "out": c.out,
    });
    let extra = match cmd {
        Command::Realize { merge, .. } | Command::Stabilize { merge, .. } | Command::Curve { merge, .. } => {
            json!({ "merge": merge })
        }
        Command::Limit { j, steps, .. } => json!({ "J": parse_subset(j)?, "steps": steps }),
        Command::Poincare { method, n, .. } => json!({ "method": method, "n": n }),
        Command::Cone { n, sample, .. } => json!({ "n": n, "sample": sample }),
        _ => json!({}),
    };
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    Ok(v)
}

/// Runs one invocation, writing to the given streams.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    let result = resolve(&cli.command).and_then(|res| {
        let cfg = config(&cli.command, &res)?;
        Ok((cfg, dispatch(&cli.command, &res)?))
    });
    match result {
        Ok((cfg, Output::Json(v))) => {
            let doc = json!({ "config": cfg, "result": v });
            let text = serde_json::to_string_pretty(&doc).expect("values serialize");
            let _ = writeln!(stdout, "{text}");
            0
        }
        Ok((_, Output::Dot(d))) => {
            let _ = write!(stdout, "{d}");
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_domain() {
                2
            } else {
                1
            }
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
