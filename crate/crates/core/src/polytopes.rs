//! PL half-spaces and PL polytopes: chart images, vertices, support functions, duals,
//! point-convex hulls, dilation, integrality and lattice points.

use std::sync::Arc;

use crate::duality::DualPair;
use crate::error::{Error, Result};
use crate::lattice::{Element, PolyptychLattice, Side};
use crate::points::{is_point, Point, SElem};
use crate::polyhedra::rat::{to_ivec, IVec, RVec, Rat};
use crate::polyhedra::{is_bounded, lattice_points, ClassicalPolytope, HPolyhedron};

/// `H_{p,a} = {m : p(m) ≥ a}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLHalfSpace {
    pub point: Point,
    pub threshold: i64,
}

impl PLHalfSpace {
    pub fn new(point: Point, threshold: i64) -> Self {
        PLHalfSpace { point, threshold }
    }

    /// The chart-α image as classical inequalities `f(v) ≥ a`, one per functional of `p_α`.
    pub fn chart_ineqs(&self, a: usize) -> Vec<(RVec, Rat)> {
        let t = Rat::from_integer(self.threshold.into());
        self.point.chart_exprs()[a].members().iter().map(|f| (f.0.clone(), t.clone())).collect()
    }
}

/// A compact finite intersection of PL half-spaces.
#[derive(Debug, Clone)]
pub struct PLPolytope {
    lat: Arc<PolyptychLattice>,
    halfspaces: Vec<PLHalfSpace>,
    charts: Vec<ClassicalPolytope>,
    vertices: Vec<RVec>,
}

/// Intersects the half-spaces chart by chart, requiring every chart image to be bounded.
pub fn build_polytope(hs: Vec<PLHalfSpace>) -> Result<PLPolytope> {
    let first = hs.first().ok_or_else(|| Error::BadParams("a polytope needs at least one half-space".into()))?;
    let lat = first.point.lattice().clone();
    if hs.iter().any(|h| !Arc::ptr_eq(h.point.lattice(), &lat)) {
        return Err(Error::LatticeMismatch);
    }
    let r = lat.rank();
    let mut charts = Vec::new();
    for a in 0..lat.num_charts() {
        let ineqs: Vec<(RVec, Rat)> = hs.iter().flat_map(|h| h.chart_ineqs(a)).collect();
        let h = HPolyhedron::new(r, ineqs, vec![])?;
        if !is_bounded(&h) {
            return Err(Error::NotCompact(lat.charts()[a].clone()));
        }
        charts.push(ClassicalPolytope::from_h(h)?);
    }
    let mut vertices: Vec<RVec> = Vec::new();
    for (a, c) in charts.iter().enumerate() {
        for v in c.vertices() {
            vertices.push(if a == lat.base() { v.clone() } else { lat.mutation(a, lat.base()).apply_rat(v) });
        }
    }
    vertices.sort();
    vertices.dedup();
    Ok(PLPolytope { lat, halfspaces: hs, charts, vertices })
}

impl PLPolytope {
    pub fn lattice(&self) -> &Arc<PolyptychLattice> {
        &self.lat
    }

    pub fn halfspaces(&self) -> &[PLHalfSpace] {
        &self.halfspaces
    }

    /// `π_α(P)`.
    pub fn chart_image(&self, a: usize) -> &ClassicalPolytope {
        &self.charts[a]
    }

    pub fn is_empty(&self) -> bool {
        self.charts[self.lat.base()].is_empty()
    }

    /// Vertices of all chart images pulled back to base-chart coordinates (sorted, deduplicated).
    pub fn rational_vertices(&self) -> &[RVec] {
        &self.vertices
    }

    pub fn contains_base(&self, x: &[i64]) -> bool {
        self.halfspaces.iter().all(|h| h.point.eval_base(x) >= h.threshold)
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.contains_base(e.base_coords())
    }
}

/// `V(P)` as lattice elements; `NotIntegral` when some chart vertex is not a lattice point.
pub fn vertices(p: &PLPolytope) -> Result<Vec<Element>> {
    p.vertices
        .iter()
        .map(|v| {
            let x = to_ivec(v).ok_or(Error::NotIntegral)?;
            Element::new(&p.lat, x)
        })
        .collect()
}

/// Which side of `pair` the lattice of `p` is on.
fn side_in(pair: &DualPair, lat: &Arc<PolyptychLattice>) -> Result<Side> {
    if Arc::ptr_eq(pair.m(), lat) {
        Ok(Side::M)
    } else if Arc::ptr_eq(pair.n(), lat) {
        Ok(Side::N)
    } else {
        Err(Error::NoDualRegistered)
    }
}

fn to_dual(pair: &DualPair, side: Side, x: &[i64]) -> Point {
    match side {
        Side::M => pair.v(x),
        Side::N => pair.w(x),
    }
}

fn dual_lattice(pair: &DualPair, side: Side) -> &Arc<PolyptychLattice> {
    match side {
        Side::M => pair.n(),
        Side::N => pair.m(),
    }
}

/// `ψ_P = ⊕_{s ∈ V(P)} s`, evaluated on the dual lattice as `n ↦ min_s ⟨s, n⟩`.
#[derive(Debug, Clone)]
pub struct SupportFunction {
    pub vertices: SElem,
    dual_points: Vec<Point>,
}

impl SupportFunction {
    /// `ψ_P(n)` at base coordinates of the dual lattice.
    pub fn eval(&self, n: &[i64]) -> i64 {
        self.dual_points.iter().map(|q| q.eval_base(n)).min().expect("nonempty polytope")
    }

    /// Restriction of `ψ_P` to each maximal cone of the dual fan, as functionals to take the min of.
    pub fn cone_functionals(&self, cone: usize) -> Vec<IVec> {
        self.dual_points.iter().map(|q| q.cone_functionals()[cone].clone()).collect()
    }
}

pub fn support_function(p: &PLPolytope, pair: &DualPair) -> Result<SupportFunction> {
    let side = side_in(pair, &p.lat)?;
    let vs = vertices(p)?;
    if vs.is_empty() {
        return Err(Error::BadParams("empty polytope".into()));
    }
    let dual_points = vs.iter().map(|e| to_dual(pair, side, e.base_coords())).collect();
    Ok(SupportFunction { vertices: SElem::from_elements(vs), dual_points })
}

fn origin_interior(p: &PLPolytope) -> bool {
    p.halfspaces.iter().all(|h| h.threshold < 0)
}

/// `P∨ = ⋂_{m ∈ V(P)} H_{v(m), −1}` on the dual lattice.
pub fn dual_polytope(p: &PLPolytope, pair: &DualPair) -> Result<PLPolytope> {
    if !origin_interior(p) {
        return Err(Error::OriginNotInterior);
    }
    let side = side_in(pair, &p.lat)?;
    let hs = vertices(p)?
        .iter()
        .map(|m| PLHalfSpace::new(to_dual(pair, side, m.base_coords()), -1))
        .collect();
    build_polytope(hs)
}

/// The point-convex hull of a finite set, decided through a dual pair.
pub struct PConv<'a> {
    pair: &'a DualPair,
    side: Side,
    lat: Arc<PolyptychLattice>,
    members: Vec<IVec>,
}

pub fn p_conv<'a>(s: &[Element], pair: &'a DualPair) -> Result<PConv<'a>> {
    let first = s.first().ok_or_else(|| Error::BadParams("empty set".into()))?;
    let lat = first.lattice().clone();
    let side = side_in(pair, &lat)?;
    let mut members: Vec<IVec> = s.iter().map(|e| e.base_coords().to_vec()).collect();
    members.sort();
    members.dedup();
    Ok(PConv { pair, side, lat, members })
}

impl PConv<'_> {
    pub fn contains_base(&self, x: &[i64]) -> bool {
        self.pair.in_pconv_raw(self.side, x, &self.members)
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.contains_base(e.base_coords())
    }

    /// The origin-interior polytope `P₀ = ⋂_{n ∈ G} H_{n, −1}` over the dual fan's generators.
    pub fn reference_polytope(&self) -> Result<PLPolytope> {
        let dual = dual_lattice(self.pair, self.side);
        let other = match self.side {
            Side::M => Side::N,
            Side::N => Side::M,
        };
        let hs = dual
            .verification_set()
            .generators
            .iter()
            .map(|n| PLHalfSpace::new(to_dual(self.pair, other, n), -1))
            .collect();
        build_polytope(hs)
    }

    /// Lattice points of the hull, found inside a dilate `k·P₀` containing every member.
    pub fn lattice_points(&self) -> Result<Vec<Element>> {
        let p0 = self.reference_polytope()?;
        let k = self
            .members
            .iter()
            .flat_map(|s| p0.halfspaces.iter().map(move |h| -h.point.eval_base(s)))
            .max()
            .unwrap_or(1)
            .max(1);
        let big = scale_polytope(&p0, k)?;
        let cands = pl_lattice_points(&big)?;
        Ok(cands.into_iter().filter(|e| self.contains(e)).collect())
    }

    pub fn lattice(&self) -> &Arc<PolyptychLattice> {
        &self.lat
    }
}

/// `kP`: every threshold multiplied by `k`.
pub fn scale_polytope(p: &PLPolytope, k: i64) -> Result<PLPolytope> {
    if k < 0 {
        return Err(Error::NegativeScalar(k));
    }
    build_polytope(p.halfspaces.iter().map(|h| PLHalfSpace::new(h.point.clone(), h.threshold * k)).collect())
}

pub fn is_integral(p: &PLPolytope) -> bool {
    p.charts.iter().all(|c| c.is_integral())
}

/// Integral, with a representation whose thresholds are all −1.
pub fn is_chart_gorenstein_fano(p: &PLPolytope) -> bool {
    if !is_integral(p) {
        return false;
    }
    p.halfspaces.iter().all(|h| {
        if h.threshold == -1 {
            return true;
        }
        if h.threshold >= 0 {
            return false;
        }
        let k = -h.threshold;
        if h.point.cone_functionals().iter().flatten().any(|x| x % k != 0) {
            return false;
        }
        let fns = h.point.cone_functionals().iter().map(|f| f.iter().map(|x| x / k).collect()).collect();
        Point::from_cone_functionals(h.point.lattice(), fns).is_ok_and(|q| is_point(&q).ok)
    })
}

/// Lattice points of the base-chart image as elements, in lex order of base coordinates.
pub fn pl_lattice_points(p: &PLPolytope) -> Result<Vec<Element>> {
    lattice_points(&p.charts[p.lat.base()]).into_iter().map(|x| Element::new(&p.lat, x)).collect()
}

/// [`pl_lattice_points`], checking that every chart image yields the same element set.
pub fn pl_lattice_points_checked(p: &PLPolytope) -> Result<Vec<Element>> {
    let base = pl_lattice_points(p)?;
    for a in 0..p.lat.num_charts() {
        let mut other: Vec<IVec> =
            lattice_points(&p.charts[a]).into_iter().map(|v| p.lat.from_chart(&v, a)).collect();
        other.sort();
        let mine: Vec<IVec> = base.iter().map(|e| e.base_coords().to_vec()).collect();
        if other != mine {
            return Err(Error::VerificationFailure(format!(
                "chart {} has {} lattice points, base chart has {}",
                p.lat.charts()[a],
                other.len(),
                mine.len()
            )));
        }
    }
    Ok(base)
}

/// Number of lattice points of `π_α(kP)`.
pub fn chart_lattice_count(p: &PLPolytope, a: usize) -> usize {
    lattice_points(&p.charts[a]).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{a1_example, trivial_dual};

    #[test]
    fn sides_of_a_pair() {
        let (m, n, pair) = trivial_dual(2).unwrap();
        assert_eq!(side_in(&pair, &m).unwrap(), Side::M);
        assert_eq!(side_in(&pair, &n).unwrap(), Side::N);
        assert!(Arc::ptr_eq(dual_lattice(&pair, Side::M), &n));
        let ex = a1_example().unwrap();
        assert_eq!(side_in(&pair, &ex.lattice).err(), Some(Error::NoDualRegistered));
    }

    #[test]
    fn origin_interior_needs_negative_thresholds() {
        let ex = a1_example().unwrap();
        assert!(origin_interior(&ex.polytope));
        assert!(!origin_interior(&scale_polytope(&ex.polytope, 0).unwrap()));
    }
}
