//! `ri-entropy`: relative entropy of entanglement of rotationally invariant
//! two-spin states from the command line.

mod record;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use ri_entropy::{
    landmark_points, make_ri_state, minimize_kl_over_interval, minimize_kl_ppt, normalized_to_raw,
    polygon_area_ratio, ppt_image_vertices, ppt_polygon, raw_to_normalized, ree_2xn, ree_for_state,
    simplex_vertices, verify_closed_form, Error, Family, Measure, NormalizedCoords64, OptimumPoint,
    ReeResult64, RiState64, RootKind, Spin,
};

use record::{envelope, fmt_real, fmt_reals, real, reals};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "ri-entropy",
    version,
    about = "Relative entropy of entanglement for rotationally invariant two-spin states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entanglement of a single state.
    Ree(ReeArgs),
    /// CSV curves of E_r against p for spin-1/2 ⊗ spin-j.
    Curve(CurveArgs),
    /// Vertex and landmark tables of the spin-1 ⊗ spin-j triangle.
    Geometry(GeometryArgs),
    /// Compare closed forms against the numerical minimizer on random states.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct ReeArgs {
    #[arg(long)]
    j1: Spin,
    #[arg(long)]
    j2: Spin,
    #[command(flatten)]
    state: StateInput,
    /// Also run the numerical minimizer and report the difference.
    #[arg(long)]
    oracle: bool,
    /// Report the numerical minimum instead of the closed form.
    #[arg(long)]
    force_oracle: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct StateInput {
    /// Weight of the J = j2 - 1/2 block (j1 = 1/2).
    #[arg(long, allow_negative_numbers = true)]
    p: Option<f64>,
    /// Block coefficients α_J in ascending J, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    alpha: Option<Vec<f64>>,
    /// Block trace weights of J = j2 - 1 and J = j2 (j1 = 1).
    #[arg(
        long,
        value_delimiter = ',',
        num_args = 1,
        allow_negative_numbers = true
    )]
    normalized: Option<Vec<f64>>,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long, default_value = "2xN")]
    family: String,
    #[arg(long, value_delimiter = ',', default_value = "1/2,1,3/2")]
    j_list: Vec<Spin>,
    /// Points per curve, uniformly spaced on [0, 1].
    #[arg(long, default_value_t = 101)]
    points: usize,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Table {
    Vertices,
    Landmarks,
    AreaRatio,
}

#[derive(Args)]
struct GeometryArgs {
    /// Dimension N = 2j + 1 of the second spin.
    #[arg(long = "N", short = 'N')]
    n: usize,
    #[arg(long, value_enum, default_value = "vertices")]
    table: Table,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// 2xN, 3x3, 3xN-odd, 3xN-even, or a concrete 2x<N> / 3x<N>.
    #[arg(long)]
    family: String,
    /// j for 2xN, N for 3xN-odd / 3xN-even.
    #[arg(long)]
    param: Option<String>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    Unsupported(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Unsupported(_) => EXIT_UNSUPPORTED,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Unsupported(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unsupported { .. } => Failure::Unsupported(format!(
                "{e}; --force-oracle runs the numerical minimizer instead of the closed form, \
                 but only for j1 = 1/2 and j1 = 1"
            )),
            other => Failure::Validation(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(f) = configure_threads() {
        eprintln!("error: {}", f.message());
        return ExitCode::from(f.code());
    }
    let outcome = match cli.command {
        Command::Ree(a) => cmd_ree(&a),
        Command::Curve(a) => cmd_curve(&a),
        Command::Geometry(a) => cmd_geometry(&a),
        Command::Verify(a) => cmd_verify(&a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("RI_ENTROPY_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().map_err(|_| {
        Failure::Validation(format!(
            "RI_ENTROPY_THREADS must be a non-negative integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Validation(e.to_string()))
}

fn emit(value: &Value) -> io::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)
}

fn build_state(a: &ReeArgs) -> Result<(RiState64, Value), Failure> {
    let mut input = Map::new();
    input.insert("j1".into(), json!(a.j1.to_string()));
    input.insert("j2".into(), json!(a.j2.to_string()));
    let state = if let Some(p) = a.state.p {
        if a.j1 != Spin::HALF {
            return Err(Failure::Validation("--p needs --j1 1/2".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Failure::Validation(format!("p = {p} outside [0, 1]")));
        }
        input.insert("p".into(), real(p));
        RiState64::from_probabilities(a.j1, a.j2, &[p, 1.0 - p])?
    } else if let Some(alpha) = &a.state.alpha {
        input.insert("alpha".into(), reals(alpha));
        make_ri_state(a.j1, a.j2, alpha)?
    } else {
        let c = a.state.normalized.as_deref().unwrap_or_default();
        if a.j1 != Spin::ONE {
            return Err(Failure::Validation("--normalized needs --j1 1".into()));
        }
        if c.len() != 2 {
            return Err(Failure::Validation(
                "--normalized takes two values x,y".into(),
            ));
        }
        if a.j2 < Spin::ONE {
            return Err(Failure::Validation("spins must be ordered j1 <= j2".into()));
        }
        input.insert("normalized".into(), reals(c));
        normalized_to_raw(a.j2.dim(), NormalizedCoords64::new(c[0], c[1])?)?
    };
    Ok((state, Value::Object(input)))
}

struct OracleRun {
    value: f64,
    point: Vec<f64>,
    iterations: usize,
    converged: bool,
}

fn run_oracle(state: &RiState64) -> Result<OracleRun, Failure> {
    match state.j1() {
        Spin::HALF => {
            let r = minimize_kl_over_interval(state.j2(), state.probabilities()[0])?;
            let OptimumPoint::Interval(q) = r.optimum_point else {
                unreachable!()
            };
            Ok(OracleRun {
                value: r.optimum_value,
                point: vec![q, 1.0 - q],
                iterations: r.iterations,
                converged: r.converged,
            })
        }
        Spin::ONE => {
            let n = state.j2().dim();
            let r = minimize_kl_ppt(n, raw_to_normalized(state)?)?;
            let OptimumPoint::Plane(p) = r.optimum_point else {
                unreachable!()
            };
            let (x, y) = p.to_normalized(n);
            Ok(OracleRun {
                value: r.optimum_value,
                point: vec![x, y, 1.0 - x - y],
                iterations: r.iterations,
                converged: r.converged,
            })
        }
        j1 => Err(Failure::Unsupported(format!(
            "no closed form and no feasible-set model for j1 = {j1}, j2 = {}; \
             --force-oracle is limited to j1 = 1/2 and j1 = 1",
            state.j2()
        ))),
    }
}

fn measure_note(m: Measure) -> Option<&'static str> {
    match m {
        Measure::RelativeEntropy => None,
        Measure::PptRelativeEntropy => Some(
            "PPT-relative entropy: a lower bound on the relative entropy of entanglement, \
             which is not available in closed form for half-integer j2",
        ),
    }
}

fn result_json(r: &ReeResult64) -> Value {
    let mut m = Map::new();
    m.insert("measure".into(), json!(r.measure.label()));
    m.insert("value".into(), real(r.value));
    m.insert("region".into(), json!(r.region.tag()));
    m.insert(
        "minimizer".into(),
        json!({
            "alpha": reals(r.minimizer.alphas()),
            "probabilities": reals(&r.minimizer.probabilities()),
        }),
    );
    let aux = r.aux.map_or(Value::Null, |a| {
        let (kind, t) = match a.kind {
            RootKind::A => ("a", "t1"),
            RootKind::B => ("b", "t2"),
        };
        let mut m = Map::new();
        m.insert(kind.into(), real(a.root));
        m.insert(t.into(), real(a.t));
        m.insert(
            "point".into(),
            reals(&[a.minimizer_point.x, a.minimizer_point.y]),
        );
        Value::Object(m)
    });
    m.insert("aux".into(), aux);
    if let Some(note) = measure_note(r.measure) {
        m.insert("note".into(), json!(note));
    }
    Value::Object(m)
}

fn cmd_ree(a: &ReeArgs) -> Outcome {
    if a.j1 != Spin::HALF && a.j1 != Spin::ONE && a.j1 <= a.j2 {
        return Err(Error::Unsupported {
            j1: a.j1.to_string(),
            j2: a.j2.to_string(),
            reason: "closed forms exist only for j1 = 1/2 and j1 = 1".into(),
        }
        .into());
    }
    let (state, input) = build_state(a)?;
    if a.force_oracle {
        let o = run_oracle(&state)?;
        let measure = match (state.j1(), state.j2().is_integer()) {
            (Spin::ONE, false) => Measure::PptRelativeEntropy,
            _ => Measure::RelativeEntropy,
        };
        let mut result = Map::new();
        result.insert("method".into(), json!("oracle"));
        result.insert("measure".into(), json!(measure.label()));
        result.insert("value".into(), real(o.value));
        result.insert(
            "minimizer".into(),
            json!({ "probabilities": reals(&o.point) }),
        );
        result.insert("iterations".into(), json!(o.iterations));
        result.insert("converged".into(), json!(o.converged));
        if let Some(note) = measure_note(measure) {
            result.insert("note".into(), json!(note));
        }
        match a.format {
            Format::Json => emit(&envelope("ree", input, Value::Object(result)))?,
            Format::Text => {
                println!(
                    "{} = {} nats (numerical)",
                    measure.label(),
                    fmt_real(o.value)
                );
                println!("minimizer weights: {}", fmt_reals(&o.point));
            }
        }
        return Ok(0);
    }

    let r = ree_for_state(&state)?;
    let mut result = match result_json(&r) {
        Value::Object(m) => m,
        _ => unreachable!(),
    };
    let oracle = if a.oracle {
        Some(run_oracle(&state)?)
    } else {
        None
    };
    if let Some(o) = &oracle {
        result.insert(
            "oracle".into(),
            json!({
                "value": real(o.value),
                "abs_diff": real((o.value - r.value).abs()),
                "minimizer": reals(&o.point),
                "iterations": o.iterations,
                "converged": o.converged,
            }),
        );
    }
    match a.format {
        Format::Json => emit(&envelope("ree", input, Value::Object(result)))?,
        Format::Text => {
            println!("{} = {} nats", r.measure.label(), fmt_real(r.value));
            println!("region: {}", r.region);
            println!("minimizer alpha: {}", fmt_reals(r.minimizer.alphas()));
            if let Some(aux) = r.aux {
                let name = if aux.kind == RootKind::A { "a" } else { "b" };
                println!(
                    "root {name} = {}, t = {}",
                    fmt_real(aux.root),
                    fmt_real(aux.t)
                );
            }
            if let Some(note) = measure_note(r.measure) {
                println!("note: {note}");
            }
            if let Some(o) = &oracle {
                println!(
                    "oracle = {} (|diff| = {:e})",
                    fmt_real(o.value),
                    (o.value - r.value).abs()
                );
            }
        }
    }
    Ok(0)
}

fn cmd_curve(a: &CurveArgs) -> Outcome {
    if !a.family.eq_ignore_ascii_case("2xN") {
        return Err(Failure::Validation(format!(
            "curves are available for the 2xN family only, got {:?}",
            a.family
        )));
    }
    if a.points < 2 {
        return Err(Failure::Validation("--points must be at least 2".into()));
    }
    let mut rows = Vec::with_capacity(a.points * a.j_list.len());
    for &j in &a.j_list {
        for i in 0..a.points {
            let p = i as f64 / (a.points - 1) as f64;
            rows.push((p, j, ree_2xn(j, p)?.value));
        }
    }
    let sink: Box<dyn Write> = match &a.out {
        Some(path) => Box::new(
            File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    writeln!(w, "p,j,E_r")?;
    for (p, j, e) in rows {
        writeln!(w, "{p},{j},{e}")?;
    }
    w.flush()?;
    Ok(0)
}

fn cmd_geometry(a: &GeometryArgs) -> Outcome {
    let n = a.n;
    let mut table = Map::new();
    match a.table {
        Table::Vertices => {
            let names = ["A", "B", "C"];
            for (name, v) in names.iter().zip(simplex_vertices::<f64>(n)?) {
                table.insert((*name).into(), reals(&v));
            }
            for (name, v) in names.iter().zip(ppt_image_vertices::<f64>(n)?) {
                table.insert(format!("{name}'"), reals(&v));
            }
            let poly = ppt_polygon::<f64>(n)?;
            table.insert("D".into(), reals(&[poly[1].x, poly[1].y]));
            table.insert("E".into(), reals(&[poly[3].x, poly[3].y]));
        }
        Table::Landmarks => {
            let (f, g, h) = landmark_points::<f64>(n)?;
            for (name, p) in [("F", f), ("G", g), ("H", h)] {
                table.insert(name.into(), reals(&[p.x, p.y]));
            }
        }
        Table::AreaRatio => {
            table.insert("area_ratio".into(), real(polygon_area_ratio::<f64>(n)?));
        }
    }
    let table_name = match a.table {
        Table::Vertices => "vertices",
        Table::Landmarks => "landmarks",
        Table::AreaRatio => "area-ratio",
    };
    match a.format {
        Format::Json => emit(&envelope(
            "geometry",
            json!({ "N": n, "table": table_name }),
            Value::Object(table),
        ))?,
        Format::Text => {
            for (k, v) in &table {
                let vals: Vec<f64> = match v {
                    Value::Array(xs) => xs.iter().filter_map(record::parse_real).collect(),
                    other => record::parse_real(other).into_iter().collect(),
                };
                if vals.len() == 1 {
                    println!("{k} = {}", fmt_real(vals[0]));
                } else {
                    println!("{k} = {}", fmt_reals(&vals));
                }
            }
        }
    }
    Ok(0)
}

fn parse_family(family: &str, param: Option<&str>) -> Result<Family, Failure> {
    let need = |what: &str| {
        param
            .ok_or_else(|| Failure::Validation(format!("--family {family} needs --param <{what}>")))
    };
    let parse_n = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Failure::Validation(format!("N must be a positive integer, got {s:?}")))
    };
    let family_of_n = |n: usize, odd: Option<bool>| -> Result<Family, Failure> {
        if let Some(odd) = odd {
            if n >= 3 && (n % 2 == 1) != odd {
                return Err(Failure::Validation(format!(
                    "N = {n} is not {}",
                    if odd { "odd" } else { "even" }
                )));
            }
        }
        if n < 3 {
            return Err(Failure::Validation(format!(
                "N must be at least 3, got {n}"
            )));
        }
        Ok(Family::three_by(n)?)
    };
    match family {
        "2xN" => {
            let j: Spin = need("j")?.parse()?;
            if j.twice() < 1 {
                return Err(Failure::Validation("j must be at least 1/2".into()));
            }
            Ok(Family::TwoByN { j })
        }
        "3x3" => Ok(Family::ThreeByThree),
        "3xN-odd" => family_of_n(parse_n(need("N")?)?, Some(true)),
        "3xN-even" => family_of_n(parse_n(need("N")?)?, Some(false)),
        other => {
            if let Some(rest) = other.strip_prefix("3x") {
                family_of_n(parse_n(rest)?, None)
            } else if let Some(rest) = other.strip_prefix("2x") {
                let n = parse_n(rest)?;
                if n < 2 {
                    return Err(Failure::Validation("N must be at least 2".into()));
                }
                Ok(Family::TwoByN {
                    j: Spin::from_dim(n)?,
                })
            } else {
                Err(Failure::Validation(format!(
                    "unknown family {other:?}; expected 2xN, 3x3, 3xN-odd, 3xN-even, 2x<N> or 3x<N>"
                )))
            }
        }
    }
}

fn cmd_verify(a: &VerifyArgs) -> Outcome {
    let family = parse_family(&a.family, a.param.as_deref())?;
    if a.tol.is_nan() || a.tol < 0.0 {
        return Err(Failure::Validation(format!(
            "--tol must be non-negative, got {}",
            a.tol
        )));
    }
    let s = verify_closed_form::<f64>(family, a.samples, a.seed, a.tol)?;
    let (j1, j2) = family.spins();
    match a.format {
        Format::Json => emit(&envelope(
            "verify",
            json!({
                "family": family.label(),
                "j1": j1.to_string(),
                "j2": j2.to_string(),
                "samples": a.samples,
                "seed": a.seed,
                "tol": real(a.tol),
            }),
            json!({
                "passed": s.passed,
                "max_abs_diff": real(s.max_abs_diff),
                "worst_state": reals(&s.worst_state),
                "worst_closed_form": real(s.worst_closed),
                "worst_oracle": real(s.worst_oracle),
            }),
        ))?,
        Format::Text => {
            println!(
                "{} {} over {} samples (seed {}): max |closed - oracle| = {:e} (tol {:e})",
                if s.passed { "PASS" } else { "FAIL" },
                family.label(),
                a.samples,
                a.seed,
                s.max_abs_diff,
                a.tol
            );
            if !s.worst_state.is_empty() {
                println!(
                    "worst state weights {}: closed {} vs oracle {}",
                    fmt_reals(&s.worst_state),
                    fmt_real(s.worst_closed),
                    fmt_real(s.worst_oracle)
                );
            }
        }
    }
    Ok(if s.passed { 0 } else { EXIT_VERIFY_FAILED })
}
