//! Command-line front end for `polyptych`: manifests, reports and chart figures.

pub mod context;
pub mod error;
pub mod expr;
pub mod manifest;
pub mod svg;

use std::path::PathBuf;
use std::sync::Arc;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand, ValueEnum};
use polyptych::detrop::{level_space, no_body_check, valuate, AlgebraElement, Adr, Detropicalization};
use polyptych::duality::{verify_dual_pair, DualReport};
use polyptych::families::{mdr_tu_matrix, MdrElement};
use polyptych::lattice::{validate_lattice, LatticeReport, PolyptychLattice};
use polyptych::points::{is_point, Point, SElem};
use polyptych::polyhedra::rat::{fmt_rat, parse_rat};
use polyptych::polyhedra::{is_totally_unimodular, ClassicalPolytope, RVec};
use polyptych::polytopes::{
    chart_lattice_count, dual_polytope, is_chart_gorenstein_fano, is_integral, pl_lattice_points, scale_polytope,
    vertices, PLPolytope,
};
use serde_json::{json, Map, Value};

use crate::context::{Family, FamilyCtx};
use crate::error::CliError;
use crate::manifest::{
    emit_manifest, lattice_from_data, lattice_ref_for, lattice_to_data, parse_manifest, point_from_data,
    polytope_from_halfspaces, polytope_to_halfspaces, AlgebraData, Kind, LatticeRef, Manifest, TermData,
};

#[derive(Debug, Parser)]
#[command(name = "plyp", version, about = "Polyptych lattices, PL polytopes and their duals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Where the input object comes from: a manifest file or a built-in family.
#[derive(Debug, Clone, Default, Args)]
pub struct Source {
    /// Manifest file (JSON).
    pub file: Option<PathBuf>,
    /// Built-in family: a1, mdr:d,r or trivial:r.
    #[arg(long)]
    pub family: Option<String>,
    /// With --family: `builtin` selects the family's standard polytope.
    #[arg(long)]
    pub polytope: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportKind {
    Lattice,
    Polytope,
    DualPair,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check lattice axioms and whatever the manifest describes.
    Validate(Source),
    /// The PL fan in every chart.
    Fan(Source),
    /// Vertices of a PL polytope.
    Vertices(Source),
    /// Verify the strict dual pair; with a polytope, also compute its dual.
    Dual(Source),
    /// Lattice points of k·P counted in every chart.
    PointsCount {
        #[command(flatten)]
        source: Source,
        #[arg(short, long, default_value_t = 1)]
        k: i64,
    },
    /// Integrality, chart-Gorenstein-Fano and (for mdr) total unimodularity.
    GfCheck(Source),
    /// Normal form and valuation of an element of A_{d,r}.
    Valuate { expr: String, d: usize, r: usize },
    /// Dimension of the level-k space.
    LevelDim {
        #[command(flatten)]
        source: Source,
        #[arg(short, long)]
        k: i64,
    },
    /// Compare level-k valuation values with lattice points of k·π_α(P).
    NoBody {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        chart: String,
        #[arg(long, default_value_t = 3)]
        kmax: i64,
    },
    /// Write an SVG of a rank-2 chart image.
    Render {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        chart: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit a built-in object as a manifest.
    Export {
        #[arg(long)]
        family: String,
        #[arg(long, value_enum)]
        kind: ExportKind,
    },
}

/// The text to print and whether every check passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

impl Outcome {
    fn report(v: Value, passed: bool) -> Self {
        let mut text = serde_json::to_string_pretty(&v).expect("report serializes");
        text.push('\n');
        Outcome { text, passed }
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            2
        }
    }
}

/// Everything a manifest or family name resolves to.
pub struct Loaded {
    pub ctx: Option<FamilyCtx>,
    pub lattice: Arc<PolyptychLattice>,
    pub kind: Kind,
    pub point: Option<Point>,
    pub polytope: Option<PLPolytope>,
    pub algebra: Option<AlgebraElement<MdrElement>>,
}

impl Loaded {
    fn polytope(&self) -> Result<&PLPolytope, CliError> {
        self.polytope
            .as_ref()
            .ok_or_else(|| CliError::usage("this command needs a polytope (a polytope manifest or --polytope builtin)"))
    }

    fn ctx(&self) -> Result<&FamilyCtx, CliError> {
        self.ctx.as_ref().ok_or_else(|| CliError::usage("this command needs a built-in family lattice"))
    }
}

pub fn load_manifest(m: &Manifest) -> Result<Loaded, CliError> {
    let (ctx, lattice) = match (&m.lattice, &m.family) {
        (Some(LatticeRef::Family { family }), _) | (None, Some(family)) => {
            let ctx = FamilyCtx::new(family.parse()?)?;
            let l = ctx.lattice().clone();
            (Some(ctx), l)
        }
        (Some(LatticeRef::Explicit(d)), _) => (None, lattice_from_data(d)?),
        (None, None) => match &m.algebra {
            Some(a) => {
                let ctx = FamilyCtx::new(Family::Mdr(a.d, a.r))?;
                let l = ctx.lattice().clone();
                (Some(ctx), l)
            }
            None => return Err(CliError::new("E_MANIFEST", "no lattice given")),
        },
    };
    let point = m.point.as_ref().map(|p| point_from_data(&lattice, ctx.as_ref(), p)).transpose()?;
    let polytope = m
        .halfspaces
        .as_ref()
        .map(|hs| polytope_from_halfspaces(&lattice, ctx.as_ref(), hs))
        .transpose()?;
    let algebra = match &m.algebra {
        Some(a) => Some(algebra_from_data(ctx.as_ref().and_then(|c| c.adr()).expect("mdr context"), a)?),
        None => None,
    };
    Ok(Loaded { ctx, lattice, kind: m.kind, point, polytope, algebra })
}

pub fn load(src: &Source) -> Result<Loaded, CliError> {
    match (&src.file, &src.family) {
        (Some(_), Some(_)) => Err(CliError::usage("give either a manifest file or --family, not both")),
        (None, None) => Err(CliError::usage("give a manifest file or --family")),
        (Some(path), None) => {
            if src.polytope.is_some() {
                return Err(CliError::usage("--polytope only applies with --family"));
            }
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))
                .map_err(CliError::from)?;
            load_manifest(&parse_manifest(&text)?)
        }
        (None, Some(f)) => {
            let ctx = FamilyCtx::new(f.parse()?)?;
            let polytope = match src.polytope.as_deref() {
                None => None,
                Some("builtin") => Some(ctx.builtin_polytope()?),
                Some(other) => return Err(CliError::usage(format!("unknown polytope `{other}` (expected builtin)"))),
            };
            let kind = if polytope.is_some() { Kind::Polytope } else { Kind::DualPair };
            let lattice = ctx.lattice().clone();
            Ok(Loaded { ctx: Some(ctx), lattice, kind, point: None, polytope, algebra: None })
        }
    }
}

fn algebra_from_data(adr: &Adr, a: &AlgebraData) -> Result<AlgebraElement<MdrElement>, CliError> {
    let mut out = AlgebraElement::zero();
    for t in &a.terms {
        let c = parse_rat(&t.coeff).ok_or_else(|| CliError::new("E_MANIFEST", format!("bad coefficient `{}`", t.coeff)))?;
        let m = adr.monomial(&t.u, &t.w)?;
        out = out.add(&m.scale(&c));
    }
    Ok(out)
}

pub fn algebra_to_data(d: usize, r: usize, f: &AlgebraElement<MdrElement>) -> AlgebraData {
    let terms = f
        .terms()
        .iter()
        .map(|(k, c)| TermData { u: k.u.clone(), w: k.w.clone(), coeff: fmt_rat(c) })
        .collect();
    AlgebraData { d, r, terms }
}

fn rvec_json(v: &RVec) -> Value {
    Value::Array(v.iter().map(|x| Value::String(fmt_rat(x))).collect())
}

fn chart_images_json(p: &PLPolytope) -> Value {
    let lat = p.lattice();
    let mut m = Map::new();
    for (a, label) in lat.charts().iter().enumerate() {
        m.insert(label.clone(), chart_vertices_json(p.chart_image(a)));
    }
    Value::Object(m)
}

fn chart_vertices_json(c: &ClassicalPolytope) -> Value {
    let vs: Vec<RVec> = if c.dim() == 2 { svg::vertex_cycle(c) } else { c.vertices().to_vec() };
    Value::Array(vs.iter().map(rvec_json).collect())
}

fn lattice_report_json(r: &LatticeReport) -> Value {
    json!({
        "passed": r.passed(),
        "failures": r.failures.iter().map(|f| json!({
            "axiom": format!("{:?}", f.axiom),
            "charts": f.charts,
            "cone": f.cone,
            "witness": f.witness,
        })).collect::<Vec<_>>(),
    })
}

fn dual_report_json(lat_m: &PolyptychLattice, lat_n: &PolyptychLattice, r: &DualReport) -> Value {
    let cones = |lat: &PolyptychLattice, v: &[Option<usize>]| {
        let mut m = Map::new();
        for (a, c) in v.iter().enumerate() {
            m.insert(lat.charts()[a].clone(), json!(c));
        }
        Value::Object(m)
    };
    json!({
        "passed": r.passed(),
        "radius": r.radius,
        "axioms": r.axioms.iter().enumerate().map(|(i, a)| json!({
            "axiom": i + 1,
            "passed": a.passed,
            "checked": a.checked,
            "witness": a.witness,
        })).collect::<Vec<_>>(),
        "cone_of_n_chart": cones(lat_n, &r.cone_of_n_chart),
        "cone_of_m_chart": cones(lat_m, &r.cone_of_m_chart),
    })
}

fn cmd_validate(l: &Loaded) -> Result<Outcome, CliError> {
    let lr = validate_lattice(&l.lattice);
    let mut passed = lr.passed();
    let mut out = json!({ "kind": l.kind, "lattice": lattice_report_json(&lr) });
    if let Some(p) = &l.point {
        let c = is_point(p);
        passed &= c.ok;
        out["point"] = json!({ "ok": c.ok, "reason": c.reason, "witness": c.witness });
    }
    if let Some(p) = &l.polytope {
        out["polytope"] = json!({ "compact": true, "empty": p.is_empty(), "halfspaces": p.halfspaces().len() });
    }
    if l.kind == Kind::DualPair {
        let ctx = l.ctx()?;
        let r = verify_dual_pair(ctx.pair());
        passed &= r.passed();
        out["dual"] = dual_report_json(ctx.lattice(), ctx.dual_lattice(), &r);
    }
    if let Some(f) = &l.algebra {
        out["algebra"] = json!({ "terms": f.terms().len() });
    }
    out["passed"] = json!(passed);
    Ok(Outcome::report(out, passed))
}

fn cmd_fan(l: &Loaded) -> Result<Outcome, CliError> {
    let lat = &l.lattice;
    let cones: Vec<Value> = lat
        .fan()
        .cones
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut charts = Map::new();
            for (a, label) in lat.charts().iter().enumerate() {
                let img = &c.images[a];
                charts.insert(
                    label.clone(),
                    json!({
                        "ineqs": img.ineqs(),
                        "eqs": img.eqs(),
                        "rays": img.generators().rays,
                        "lineality": img.generators().lineality,
                    }),
                );
            }
            json!({ "index": i, "charts": charts })
        })
        .collect();
    Ok(Outcome::report(
        json!({ "rank": lat.rank(), "charts": lat.charts(), "base": lat.charts()[lat.base()], "cones": cones }),
        true,
    ))
}

fn cmd_vertices(l: &Loaded) -> Result<Outcome, CliError> {
    let p = l.polytope()?;
    let lat = p.lattice();
    let mut out = json!({ "chart_images": chart_images_json(p) });
    match vertices(p) {
        Ok(vs) => {
            let list: Vec<Value> = vs
                .iter()
                .map(|e| {
                    let mut charts = Map::new();
                    for (a, label) in lat.charts().iter().enumerate() {
                        charts.insert(label.clone(), json!(e.chart(a).expect("same lattice")));
                    }
                    json!({ "base": e.base_coords(), "charts": charts })
                })
                .collect();
            out["integral"] = json!(true);
            out["count"] = json!(list.len());
            out["vertices"] = Value::Array(list);
        }
        Err(polyptych::Error::NotIntegral) => {
            out["integral"] = json!(false);
            out["count"] = json!(p.rational_vertices().len());
            out["vertices"] = Value::Array(p.rational_vertices().iter().map(|v| json!({ "base": rvec_json(v) })).collect());
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Outcome::report(out, true))
}

fn cmd_dual(l: &Loaded) -> Result<Outcome, CliError> {
    let ctx = l.ctx()?;
    let r = verify_dual_pair(ctx.pair());
    let mut out = json!({ "dual": dual_report_json(ctx.lattice(), ctx.dual_lattice(), &r) });
    if let Some(p) = &l.polytope {
        let d = dual_polytope(p, ctx.pair())?;
        out["dual_polytope"] = json!({
            "integral": is_integral(&d),
            "halfspaces": d.halfspaces().len(),
            "chart_images": chart_images_json(&d),
        });
    }
    out["passed"] = json!(r.passed());
    Ok(Outcome::report(out, r.passed()))
}

fn cmd_points_count(l: &Loaded, k: i64) -> Result<Outcome, CliError> {
    let kp = scale_polytope(l.polytope()?, k)?;
    let lat = kp.lattice();
    let counts: Vec<usize> = (0..lat.num_charts()).map(|a| chart_lattice_count(&kp, a)).collect();
    let pl = pl_lattice_points(&kp)?.len();
    let equal = counts.iter().all(|c| *c == pl);
    let per_chart: Map<String, Value> = lat.charts().iter().cloned().zip(counts.iter().map(|c| json!(c))).collect();
    Ok(Outcome::report(json!({ "k": k, "count": pl, "per_chart": per_chart, "equal": equal }), equal))
}

fn cmd_gf_check(l: &Loaded) -> Result<Outcome, CliError> {
    let p = l.polytope()?;
    let integral = is_integral(p);
    let gf = is_chart_gorenstein_fano(p);
    let tu = match l.ctx.as_ref().map(|c| c.family) {
        Some(Family::Mdr(d, r)) => Some((0..d).all(|k| is_totally_unimodular(&mdr_tu_matrix(d, r, k)))),
        _ => None,
    };
    let passed = gf && tu != Some(false);
    Ok(Outcome::report(json!({ "integral": integral, "chart_gorenstein_fano": gf, "tu_matrix": tu }), passed))
}

fn cmd_valuate(expr: &str, d: usize, r: usize) -> Result<Outcome, CliError> {
    let adr = Adr::new(d, r)?;
    let f = expr::parse_expr(&adr, expr)?;
    let v = valuate(&adr, &f)?;
    let valuation = match &v {
        SElem::Inf => json!("inf"),
        SElem::Fin(_) => {
            Value::Array(adr.tuples(&v).iter().map(|t| json!({ "a": t.a, "b": t.b })).collect())
        }
    };
    let support: Vec<Value> = f.keys().iter().map(|k| json!({ "u": k.u, "w": k.w })).collect();
    Ok(Outcome::report(
        json!({
            "d": d,
            "r": r,
            "expansion": expr::format_expr(&f),
            "support": support,
            "valuation": valuation,
        }),
        true,
    ))
}

fn level_dim<D: Detropicalization>(alg: &D, p: &PLPolytope, k: i64) -> Result<Outcome, CliError> {
    let dim = level_space(alg, p, k)?.dim();
    let kp = scale_polytope(p, k)?;
    let lat = p.lattice();
    let per_chart: Map<String, Value> =
        (0..lat.num_charts()).map(|a| (lat.charts()[a].clone(), json!(chart_lattice_count(&kp, a)))).collect();
    let equal = per_chart.values().all(|c| *c == json!(dim));
    Ok(Outcome::report(json!({ "k": k, "dim": dim, "per_chart": per_chart, "equal": equal }), equal))
}

fn no_body<D: Detropicalization>(alg: &D, p: &PLPolytope, chart: &str, kmax: i64) -> Result<Outcome, CliError> {
    let a = p.lattice().chart_index(chart)?;
    let r = no_body_check(alg, p, a, kmax)?;
    let levels: Vec<Value> = r
        .levels
        .iter()
        .map(|l| json!({ "k": l.k, "values": l.values, "lattice_points": l.lattice_points, "equal": l.equal }))
        .collect();
    Ok(Outcome::report(json!({ "chart": chart, "levels": levels, "passed": r.passed() }), r.passed()))
}

fn cmd_render(l: &Loaded, chart: &str, out: &PathBuf) -> Result<Outcome, CliError> {
    let p = l.polytope()?;
    let a = p.lattice().chart_index(chart)?;
    let img = p.chart_image(a);
    let s = svg::render_chart(img, &format!("chart {chart}"))?;
    std::fs::write(out, &s).with_context(|| format!("writing {}", out.display())).map_err(CliError::from)?;
    Ok(Outcome::report(
        json!({ "chart": chart, "out": out.display().to_string(), "vertices": chart_vertices_json(img) }),
        true,
    ))
}

fn cmd_export(family: &str, kind: ExportKind) -> Result<Outcome, CliError> {
    let ctx = FamilyCtx::new(family.parse()?)?;
    let m = match kind {
        ExportKind::Lattice => {
            let mut m = Manifest::new(Kind::Lattice);
            m.lattice = Some(LatticeRef::Explicit(lattice_to_data(ctx.lattice())));
            m
        }
        ExportKind::Polytope => {
            let mut m = Manifest::new(Kind::Polytope);
            m.lattice = Some(lattice_ref_for(&ctx));
            m.halfspaces = Some(polytope_to_halfspaces(&ctx.builtin_polytope()?));
            m
        }
        ExportKind::DualPair => {
            let mut m = Manifest::new(Kind::DualPair);
            m.family = Some(ctx.family.to_string());
            m
        }
    };
    Ok(Outcome { text: emit_manifest(&m), passed: true })
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Validate(s) => cmd_validate(&load(s)?),
        Command::Fan(s) => cmd_fan(&load(s)?),
        Command::Vertices(s) => cmd_vertices(&load(s)?),
        Command::Dual(s) => cmd_dual(&load(s)?),
        Command::PointsCount { source, k } => cmd_points_count(&load(source)?, *k),
        Command::GfCheck(s) => cmd_gf_check(&load(s)?),
        Command::Valuate { expr, d, r } => cmd_valuate(expr, *d, *r),
        Command::LevelDim { source, k } => {
            let l = load(source)?;
            let p = l.polytope()?;
            let ctx = l.ctx()?;
            match (ctx.adr(), ctx.a1()) {
                (Some(a), _) => level_dim(a, p, *k),
                (_, Some(a)) => level_dim(a, p, *k),
                _ => Err(CliError::usage("level spaces need the a1 or an mdr family")),
            }
        }
        Command::NoBody { source, chart, kmax } => {
            let l = load(source)?;
            let p = l.polytope()?;
            let ctx = l.ctx()?;
            match (ctx.adr(), ctx.a1()) {
                (Some(a), _) => no_body(a, p, chart, *kmax),
                (_, Some(a)) => no_body(a, p, chart, *kmax),
                _ => Err(CliError::usage("level spaces need the a1 or an mdr family")),
            }
        }
        Command::Render { source, chart, out } => cmd_render(&load(source)?, chart, out),
        Command::Export { family, kind } => cmd_export(family, *kind),
    }
}

/// Parses arguments and runs; returns what to print on stdout and the exit code.
pub fn main_with_args<I, T>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (e.to_string(), 0);
            }
            let err = CliError::usage(e.to_string().trim().to_string());
            return (format!("{}\n", serde_json::to_string_pretty(&err.to_json()).expect("json")), 1);
        }
    };
    match run(&cli) {
        Ok(o) => {
            let code = o.exit_code();
            (o.text, code)
        }
        Err(e) => (format!("{}\n", serde_json::to_string_pretty(&e.to_json()).expect("json")), e.exit_code()),
    }
}
