//! The versioned JSON manifest format and its conversion to library objects.
//!
//! ```json
//! {"version": 1, "kind": "polytope", "lattice": {"family": "a1"},
//!  "halfspaces": [{"point": {"a1": [-1, 0, -1]}, "threshold": -1}]}
//! ```
//!
//! A lattice is either `{"family": "<name>"}` or explicit:
//! `{"rank", "charts", "base", "mutations": [{"from", "to", "cones": [{"ineqs", "eqs"}], "matrices"}]}`.
//! A point is `{"charts": [{"chart", "functionals"}]}` (a min-expression per chart),
//! `{"a1": [a, b, b']}` or `{"mdr": {"a", "b"}}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use polyptych::families::TdrPoint;
use polyptych::lattice::{PLMap, PolyptychLattice};
use polyptych::points::Point;
use polyptych::polyhedra::{IMat, IVec, RationalCone, TropExpr};
use polyptych::polytopes::{build_polytope, PLHalfSpace, PLPolytope};
use serde::{Deserialize, Serialize};

use crate::context::{Family, FamilyCtx};
use crate::error::CliError;

pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Lattice,
    Point,
    Polytope,
    DualPair,
    AlgebraElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: u32,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<PointData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halfspaces: Option<Vec<HalfSpaceData>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeRef {
    Family { family: String },
    Explicit(LatticeData),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeData {
    pub rank: usize,
    pub charts: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    pub mutations: Vec<MutationData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MutationData {
    pub from: String,
    pub to: String,
    pub cones: Vec<ConeData>,
    pub matrices: Vec<IMat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeData {
    pub ineqs: Vec<IVec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eqs: Vec<IVec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointData {
    Charts { charts: Vec<ChartExpr> },
    A1 { a1: [i64; 3] },
    Mdr { mdr: TdrData },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartExpr {
    pub chart: String,
    pub functionals: Vec<IVec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TdrData {
    pub a: IVec,
    pub b: IVec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfSpaceData {
    pub point: PointData,
    pub threshold: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraData {
    pub d: usize,
    pub r: usize,
    pub terms: Vec<TermData>,
}

/// `coeff · x^u t^w`; the coefficient is an exact rational string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermData {
    pub u: IVec,
    pub w: IVec,
    pub coeff: String,
}

impl Manifest {
    pub fn new(kind: Kind) -> Self {
        Manifest { version: VERSION, kind, lattice: None, point: None, halfspaces: None, family: None, algebra: None }
    }
}

/// Parses and checks the version and the fields required by the kind.
pub fn parse_manifest(text: &str) -> Result<Manifest, CliError> {
    let m: Manifest = serde_json::from_str(text)?;
    if m.version != VERSION {
        return Err(CliError::new("E_VERSION", format!("unsupported manifest version {}", m.version)));
    }
    let missing = |f: &str| CliError::new("E_MANIFEST", format!("kind {:?} requires `{f}`", m.kind));
    match m.kind {
        Kind::Lattice => {
            m.lattice.as_ref().ok_or_else(|| missing("lattice"))?;
        }
        Kind::Point => {
            m.lattice.as_ref().ok_or_else(|| missing("lattice"))?;
            m.point.as_ref().ok_or_else(|| missing("point"))?;
        }
        Kind::Polytope => {
            m.lattice.as_ref().ok_or_else(|| missing("lattice"))?;
            m.halfspaces.as_ref().ok_or_else(|| missing("halfspaces"))?;
        }
        Kind::DualPair => {
            m.family.as_ref().ok_or_else(|| missing("family"))?;
        }
        Kind::AlgebraElement => {
            m.algebra.as_ref().ok_or_else(|| missing("algebra"))?;
        }
    }
    Ok(m)
}

/// Pretty JSON with a trailing newline.
pub fn emit_manifest(m: &Manifest) -> String {
    let mut s = serde_json::to_string_pretty(m).expect("manifest serializes");
    s.push('\n');
    s
}

pub fn lattice_to_data(l: &PolyptychLattice) -> LatticeData {
    let n = l.num_charts();
    let mut mutations = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let m = l.mutation(a, b);
            mutations.push(MutationData {
                from: l.charts()[a].clone(),
                to: l.charts()[b].clone(),
                cones: m
                    .cones()
                    .iter()
                    .map(|c| ConeData { ineqs: c.ineqs().to_vec(), eqs: c.eqs().to_vec() })
                    .collect(),
                matrices: m.matrices().to_vec(),
            });
        }
    }
    LatticeData { rank: l.rank(), charts: l.charts().to_vec(), base: Some(l.charts()[l.base()].clone()), mutations }
}

pub fn lattice_from_data(d: &LatticeData) -> Result<Arc<PolyptychLattice>, CliError> {
    let idx = |s: &str| {
        d.charts
            .iter()
            .position(|c| c == s)
            .ok_or_else(|| CliError::from(polyptych::Error::UnknownChart(s.to_string())))
    };
    let base = match &d.base {
        Some(b) => idx(b)?,
        None => 0,
    };
    let mut maps = BTreeMap::new();
    for m in &d.mutations {
        let cones = m
            .cones
            .iter()
            .map(|c| RationalCone::new(d.rank, c.ineqs.clone(), c.eqs.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let key = (idx(&m.from)?, idx(&m.to)?);
        if maps.insert(key, PLMap::new(d.rank, cones, m.matrices.clone())?).is_some() {
            return Err(CliError::new("E_MANIFEST", format!("duplicate mutation {} -> {}", m.from, m.to)));
        }
    }
    Ok(PolyptychLattice::new(d.rank, d.charts.clone(), base, maps)?)
}

/// The canonical per-chart form of a point: minimal min-representations.
pub fn point_to_data(p: &Point) -> PointData {
    let lat = p.lattice();
    let charts = p
        .chart_exprs()
        .iter()
        .enumerate()
        .map(|(a, e)| ChartExpr {
            chart: lat.charts()[a].clone(),
            functionals: e.members().iter().map(|f| f.to_ints().expect("integral point")).collect(),
        })
        .collect();
    PointData::Charts { charts }
}

pub fn point_from_data(lat: &Arc<PolyptychLattice>, ctx: Option<&FamilyCtx>, d: &PointData) -> Result<Point, CliError> {
    match d {
        PointData::Charts { charts } => {
            let mut exprs: Vec<Option<TropExpr>> = vec![None; lat.num_charts()];
            for c in charts {
                let a = lat.chart_index(&c.chart)?;
                if exprs[a].is_some() {
                    return Err(CliError::new("E_MANIFEST", format!("chart {} given twice", c.chart)));
                }
                exprs[a] = Some(TropExpr::from_ints(&c.functionals)?);
            }
            let exprs = exprs
                .into_iter()
                .enumerate()
                .map(|(a, e)| {
                    e.ok_or_else(|| CliError::new("E_MANIFEST", format!("missing chart {}", lat.charts()[a])))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Point::from_chart_exprs(lat, &exprs)?)
        }
        PointData::A1 { a1 } => match ctx.map(|c| &c.family) {
            Some(Family::A1) => Ok(polyptych::families::a1_point(lat, a1[0], a1[1], a1[2])?),
            _ => Err(CliError::new("E_MANIFEST", "`a1` points need the a1 family lattice")),
        },
        PointData::Mdr { mdr } => match ctx.and_then(|c| c.adr()) {
            Some(adr) => Ok(adr.dual.m.point(&TdrPoint { a: mdr.a.clone(), b: mdr.b.clone() })?),
            None => Err(CliError::new("E_MANIFEST", "`mdr` points need an mdr family lattice")),
        },
    }
}

pub fn polytope_to_halfspaces(p: &PLPolytope) -> Vec<HalfSpaceData> {
    p.halfspaces()
        .iter()
        .map(|h| HalfSpaceData { point: point_to_data(&h.point), threshold: h.threshold })
        .collect()
}

pub fn polytope_from_halfspaces(
    lat: &Arc<PolyptychLattice>,
    ctx: Option<&FamilyCtx>,
    hs: &[HalfSpaceData],
) -> Result<PLPolytope, CliError> {
    let hs = hs
        .iter()
        .map(|h| Ok(PLHalfSpace::new(point_from_data(lat, ctx, &h.point)?, h.threshold)))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(build_polytope(hs)?)
}

pub fn lattice_ref_for(ctx: &FamilyCtx) -> LatticeRef {
    LatticeRef::Family { family: ctx.family.to_string() }
}
