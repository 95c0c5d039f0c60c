//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification suite fails, 2 on usage
//! errors (bad flags, unknown maps, malformed points) and on points outside
//! a map's domain.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::collapse_map::Collapse;
use crate::dynamics::{orbit, Dynamics, ExactMap, MapId, OrbitMetadata, OrbitRecord, PlaneMap, QuotientMap, ReferenceMap};
use crate::error::{Error, Result};
use crate::geometry;
use crate::numerics::{float_to_rational, parse_float, parse_rational, Direction, PlanePoint, Precision, Rational, Tolerances};
use crate::plane_map::{example_shift_reflection, PlaneMaps};
use crate::square_map::{cell_of, level_shift, shear, RegionTag, SquarePoint};
use crate::strips::strip_locate;
use crate::verify::{run_suite, Suite, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "bounded-orbit", version, about = "Exact square dynamics, the boundary collapse and the plane homeomorphism")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one map at one point.
    Eval(EvalArgs),
    /// Iterate a map and write the orbit segment.
    Orbit(OrbitArgs),
    /// Run a verification suite and write the JSON report.
    Verify(VerifyArgs),
    /// Draw the strip decomposition, chart pins and slits.
    Geometry(GeometryArgs),
    /// Per-step log10 norm profile of a plane orbit.
    Excursion(ExcursionArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Big-float precision in bits.
    #[arg(long, default_value_t = Precision::DEFAULT.bits())]
    precision: u32,
    /// Accept any float literal for exact maps, converted to the exact value
    /// of its rounding at the working precision.
    #[arg(long)]
    approx: bool,
    #[arg(long)]
    chart_roundtrip: Option<f64>,
    #[arg(long)]
    commutation: Option<f64>,
    #[arg(long)]
    limitset: Option<f64>,
    #[arg(long)]
    horizon: Option<u32>,
}

impl Common {
    fn precision(&self) -> Result<Precision> {
        Precision::new(self.precision)
    }

    fn tolerances(&self) -> Result<Tolerances> {
        let mut t = Tolerances::default();
        if let Some(v) = self.chart_roundtrip {
            t.chart_roundtrip = v;
        }
        if let Some(v) = self.commutation {
            t.commutation = v;
        }
        if let Some(v) = self.limitset {
            t.limitset = v;
        }
        if let Some(v) = self.horizon {
            t.horizon = v;
        }
        t.validate()?;
        Ok(t)
    }
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// f01, f02, phi, Phi, eta, zeta, f, xi, g, h, example12 or reflect.
    #[arg(long)]
    map: String,
    /// `x,y` (or a single number for f01 and phi); fractions or decimals.
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    /// Evaluate the inverse map.
    #[arg(long)]
    inverse: bool,
    /// Block index of the line shear `phi`.
    #[arg(long, default_value_t = 1)]
    n: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Args)]
struct OrbitArgs {
    #[arg(long)]
    map: String,
    #[arg(long, allow_hyphen_values = true)]
    seed: String,
    /// `N` for `0..N`, or `a..b` (both ends included).
    #[arg(long, allow_hyphen_values = true, default_value = "10")]
    steps: String,
    /// Iterate the plane map by direct composition instead of through the
    /// exact lift.
    #[arg(long)]
    naive: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value = "verify-report.json")]
    out: PathBuf,
    #[arg(long, default_value_t = VerifyConfig::default().sampler_seed)]
    sampler_seed: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct GeometryArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Deepest strip level drawn.
    #[arg(long, default_value_t = 10)]
    levels: u64,
    #[arg(long, default_value_t = Precision::DEFAULT.bits())]
    precision: u32,
}

#[derive(Debug, Args)]
struct ExcursionArgs {
    #[arg(long, allow_hyphen_values = true, default_value = "0,0")]
    seed: String,
    #[arg(long, allow_hyphen_values = true, default_value = "400")]
    steps: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, default_value_t = Precision::DEFAULT.bits())]
    precision: u32,
}

/// Parses argv, runs the command and returns the exit code. Output goes to
/// `out`, diagnostics to standard error.
pub fn run_with<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// [`run_with`] on standard output.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    run_with(args, &mut lock)
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Eval(a) => eval(a, out),
        Command::Orbit(a) => orbit_cmd(a, out),
        Command::Verify(a) => verify_cmd(a, out),
        Command::Geometry(a) => geometry_cmd(a, out),
        Command::Excursion(a) => excursion_cmd(a, out),
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn format_for(explicit: Option<Format>, path: Option<&Path>, default: Format) -> Format {
    explicit
        .or_else(|| match path?.extension()?.to_str()? {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            "svg" => Some(Format::Svg),
            _ => None,
        })
        .unwrap_or(default)
}

/// `N` means `0..=N`; `a..b` means `a..=b`.
pub fn parse_steps(text: &str) -> Result<(i64, i64)> {
    let t = text.trim();
    let num = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("bad step count {s:?} in {t:?}")))
    };
    let (lo, hi) = match t.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => (0, num(t)?),
    };
    if lo > hi {
        return Err(Error::Parse(format!("empty step range {t:?}")));
    }
    Ok((lo, hi))
}

fn split_point(text: &str) -> Result<Vec<&str>> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Parse(format!("malformed point {text:?}")));
    }
    Ok(parts)
}

fn exact_number(text: &str, approx: bool, prec: Precision) -> Result<Rational> {
    match parse_rational(text) {
        Ok(q) => Ok(q),
        Err(_) if approx => float_to_rational(&parse_float(text, prec)?),
        Err(e) => Err(Error::Parse(format!("{e}; pass --approx to accept float literals"))),
    }
}

fn exact_pair(text: &str, approx: bool, prec: Precision) -> Result<SquarePoint> {
    match split_point(text)?.as_slice() {
        [r, s] => SquarePoint::new(exact_number(r, approx, prec)?, exact_number(s, approx, prec)?),
        _ => Err(Error::Parse(format!("expected x,y, got {text:?}"))),
    }
}

fn plane_pair(text: &str, prec: Precision) -> Result<PlanePoint> {
    match split_point(text)?.as_slice() {
        [x, y] => Ok(PlanePoint::new(parse_float(x, prec)?, parse_float(y, prec)?)),
        _ => Err(Error::Parse(format!("expected x,y, got {text:?}"))),
    }
}

fn show_exact(p: &SquarePoint) -> String {
    format!("({}, {})", p.r(), p.s())
}

fn direction(inverse: bool) -> Direction {
    if inverse {
        Direction::Inverse
    } else {
        Direction::Forward
    }
}

/// Which formula and strip the square map uses at `p`.
fn square_diagnostics(p: &SquarePoint, dir: Direction) -> Vec<String> {
    let mut lines = vec![];
    let tag = match dir {
        Direction::Forward => RegionTag::forward(p.s()),
        Direction::Inverse => RegionTag::inverse(p.s()),
    };
    lines.push(format!("region: {tag:?}"));
    let top = match dir {
        Direction::Forward => level_shift(p.s(), Direction::Forward).ok(),
        Direction::Inverse => Some(p.s().clone()),
    };
    if let Some(d) = top.and_then(|s| strip_locate(&s).ok()) {
        let n = d.n.map_or("-".to_string(), |n| n.to_string());
        lines.push(format!("strip: level {} zone {:?} block {n} [{}, {}, {}]", d.level, d.zone, d.lo, d.mid, d.hi));
    }
    if let Ok(cell) = cell_of(p) {
        lines.push(format!("cell: {cell:?}"));
    }
    lines
}

fn eval(a: EvalArgs, out: &mut dyn Write) -> Result<i32> {
    let id: MapId = a.map.parse()?;
    let prec = a.common.precision()?;
    let dir = direction(a.inverse);
    let mut lines = Vec::new();
    match id {
        MapId::LevelShift | MapId::Shear => {
            let parts = split_point(&a.point)?;
            let [x] = parts.as_slice() else {
                return Err(Error::Parse(format!("{id} takes a single number, got {:?}", a.point)));
            };
            let x = exact_number(x, a.common.approx, prec)?;
            let y = match id {
                MapId::LevelShift => level_shift(&x, dir)?,
                _ => shear(a.n, &x, dir)?,
            };
            lines.push(y.to_string());
        }
        id if id.is_exact() => {
            let p = exact_pair(&a.point, a.common.approx, prec)?;
            let map = ExactMap::new(id)?;
            lines.push(show_exact(&map.step(&p, dir)?));
            if id == MapId::Square {
                lines.extend(square_diagnostics(&p, dir));
            }
        }
        MapId::Collapse => {
            if a.inverse {
                let y = plane_pair(&a.point, prec)?;
                lines.push(Collapse::new(prec).xi_inv(&y)?.to_string());
            } else {
                let x = plane_pair(&a.point, prec)?;
                lines.push(Collapse::new(prec).xi(&x)?.to_string());
            }
        }
        MapId::Quotient => {
            let x = plane_pair(&a.point, prec)?;
            lines.push(PlaneMaps::new(prec).g_map(&x, dir)?.to_string());
        }
        MapId::Plane => {
            let x = plane_pair(&a.point, prec)?;
            lines.push(PlaneMaps::new(prec).h_map(&x, dir)?.to_string());
        }
        MapId::Reference => {
            let x = plane_pair(&a.point, prec)?;
            lines.push(example_shift_reflection(&x, dir).to_string());
        }
        _ => unreachable!("every map is handled above"),
    }
    for l in lines {
        writeln!(out, "{l}")?;
    }
    Ok(0)
}

fn metadata(common: &Common) -> Result<OrbitMetadata> {
    Ok(OrbitMetadata {
        precision: common.precision()?.bits(),
        tolerances: common.tolerances()?,
        sampler_seed: None,
    })
}

fn plane_record<D: Dynamics<Point = PlanePoint>>(map: &D, seed: &PlanePoint, lo: i64, hi: i64, meta: OrbitMetadata) -> Result<OrbitRecord> {
    let o = orbit(map, seed, lo, hi)?;
    Ok(OrbitRecord::from_plane(map.id(), &o.points, seed, meta))
}

/// The orbit record the `orbit` command writes.
fn orbit_record(a: &OrbitArgs) -> Result<OrbitRecord> {
    let id: MapId = a.map.parse()?;
    let prec = a.common.precision()?;
    let (lo, hi) = parse_steps(&a.steps)?;
    let meta = metadata(&a.common)?;
    match id {
        MapId::LevelShift | MapId::Shear | MapId::Collapse => Err(Error::Parse(format!(
            "{id} has no orbits here; use f02, Phi, eta, zeta, f, reflect, g, h or example12"
        ))),
        id if id.is_exact() => {
            let seed = exact_pair(&a.seed, a.common.approx, prec)?;
            let o = orbit(&ExactMap::new(id)?, &seed, lo, hi)?;
            Ok(OrbitRecord::from_exact(&o, &seed, meta))
        }
        MapId::Plane => {
            let seed = plane_pair(&a.seed, prec)?;
            let maps = PlaneMaps::new(prec);
            if a.naive {
                plane_record(&PlaneMap(maps), &seed, lo, hi, meta)
            } else {
                let pts = maps.h_orbit_lifted(&seed, lo, hi)?;
                Ok(OrbitRecord::from_plane(MapId::Plane, &pts, &seed, meta))
            }
        }
        MapId::Quotient => plane_record(&QuotientMap(PlaneMaps::new(prec)), &plane_pair(&a.seed, prec)?, lo, hi, meta),
        MapId::Reference => plane_record(&ReferenceMap, &plane_pair(&a.seed, prec)?, lo, hi, meta),
        _ => unreachable!("every map is handled above"),
    }
}

fn orbit_cmd(a: OrbitArgs, out: &mut dyn Write) -> Result<i32> {
    let record = orbit_record(&a)?;
    let text = match format_for(a.format, a.out.as_deref(), Format::Json) {
        Format::Json => record.to_json()? + "\n",
        Format::Csv => record.to_csv(),
        Format::Svg => return Err(Error::Parse("orbits are written as json or csv".into())),
    };
    emit(out, a.out.as_deref(), &text)?;
    Ok(0)
}

fn verify_cmd(a: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let suite: Suite = a.suite.parse()?;
    let config = VerifyConfig {
        precision: a.common.precision()?,
        tolerances: a.common.tolerances()?,
        sampler_seed: a.sampler_seed,
    };
    let report = run_suite(suite, &config)?;
    fs::write(&a.out, report.to_json()? + "\n")?;
    out.write_all(report.summary().as_bytes())?;
    writeln!(out, "report: {}", a.out.display())?;
    Ok(if report.pass { 0 } else { 1 })
}

fn geometry_cmd(a: GeometryArgs, out: &mut dyn Write) -> Result<i32> {
    let scene = geometry::scene(a.levels, Precision::new(a.precision)?)?;
    let text = match format_for(a.format, a.out.as_deref(), Format::Svg) {
        Format::Svg => scene.to_svg(),
        Format::Json => scene.to_json()? + "\n",
        Format::Csv => return Err(Error::Parse("geometry is written as svg or json".into())),
    };
    emit(out, a.out.as_deref(), &text)?;
    Ok(0)
}

/// `(n, log10 |h^n(seed)|)` over the lifted orbit.
pub fn excursion_profile(maps: &PlaneMaps, seed: &PlanePoint, lo: i64, hi: i64) -> Result<Vec<(i64, f64)>> {
    Ok(maps
        .h_orbit_lifted(seed, lo, hi)?
        .into_iter()
        .map(|(n, p)| (n, p.norm().log10().to_f64()))
        .collect())
}

fn excursion_cmd(a: ExcursionArgs, out: &mut dyn Write) -> Result<i32> {
    let prec = Precision::new(a.precision)?;
    let seed = plane_pair(&a.seed, prec)?;
    let (lo, hi) = parse_steps(&a.steps)?;
    let profile = excursion_profile(&PlaneMaps::new(prec), &seed, lo, hi)?;
    let text = match format_for(a.format, a.out.as_deref(), Format::Csv) {
        Format::Csv => {
            let mut s = String::from("n,log10_norm\n");
            for (n, v) in &profile {
                s.push_str(&format!("{n},{v}\n"));
            }
            s
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = profile
                .iter()
                .map(|(n, v)| serde_json::json!({ "n": n, "log10_norm": if v.is_finite() { Some(*v) } else { None } }))
                .collect();
            serde_json::to_string_pretty(&rows).map_err(|e| Error::Io(e.to_string()))? + "\n"
        }
        Format::Svg => return Err(Error::Parse("excursions are written as csv or json".into())),
    };
    emit(out, a.out.as_deref(), &text)?;
    if let Some((n, v)) = profile.iter().filter(|p| p.1.is_finite()).max_by(|a, b| a.1.total_cmp(&b.1)) {
        eprintln!("sup log10 norm {v:.4} at n = {n}");
    }
    Ok(0)
}
