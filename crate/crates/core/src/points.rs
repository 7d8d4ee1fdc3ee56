//! Points of a polyptych lattice, their verification, and the canonical semialgebra.
//!
//! A point is stored as one integer functional per maximal cone of Σ(M), in base-chart
//! coordinates. Per-chart min-expressions are derived from that data.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::lattice::{upsilon_raw, Element, PolyptychLattice, Side};
use crate::polyhedra::rat::{idot, is_integral, solve, to_ivec, vec_mat, IVec, RVec, Rat};
use crate::polyhedra::{minimal_min_representation, rvec, LinFunctional, RationalCone, TropExpr};

/// A point of `M`, linear on every maximal cone of Σ(M).
#[derive(Clone)]
pub struct Point {
    lat: Arc<PolyptychLattice>,
    cone_fns: Vec<IVec>,
    charts: OnceLock<Vec<TropExpr>>,
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point{:?}", self.cone_fns)
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.cone_fns == other.cone_fns
    }
}

impl Eq for Point {}

impl Point {
    /// Builds a candidate from one base-chart functional per Σ(M) cone, without verification.
    pub fn from_cone_functionals(lat: &Arc<PolyptychLattice>, cone_fns: Vec<IVec>) -> Result<Self> {
        let fan = lat.fan();
        if cone_fns.len() != fan.len() {
            return Err(Error::DimensionMismatch { expected: fan.len(), found: cone_fns.len() });
        }
        if let Some(f) = cone_fns.iter().find(|f| f.len() != lat.rank()) {
            return Err(Error::DimensionMismatch { expected: lat.rank(), found: f.len() });
        }
        Ok(Point { lat: lat.clone(), cone_fns, charts: OnceLock::new() })
    }

    /// Samples a function on a lattice basis of each Σ(M) cone; the result is a candidate only.
    pub fn from_fn(lat: &Arc<PolyptychLattice>, f: impl Fn(&[i64]) -> i64) -> Result<Self> {
        let fns = lat
            .fan()
            .cones
            .iter()
            .map(|c| {
                let basis = c.base.lattice_basis().expect("maximal cones are full-dimensional");
                let vals: RVec = basis.iter().map(|b| Rat::from_integer(f(b).into())).collect();
                let rows: Vec<RVec> = basis.iter().map(|b| rvec(b)).collect();
                let sol = solve(&rows, &vals).expect("basis is independent");
                to_ivec(&sol).ok_or_else(|| Error::NotAPoint("values are not ℤ-linear on a cone".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Point::from_cone_functionals(lat, fns)
    }

    /// The zero point.
    pub fn zero(lat: &Arc<PolyptychLattice>) -> Self {
        let n = lat.fan().len();
        Point { lat: lat.clone(), cone_fns: vec![vec![0; lat.rank()]; n], charts: OnceLock::new() }
    }

    /// Builds a verified point from per-chart min-expressions.
    pub fn from_chart_exprs(lat: &Arc<PolyptychLattice>, exprs: &[TropExpr]) -> Result<Self> {
        let p = cone_functionals_from_exprs(lat, exprs)?;
        let cert = is_point(&p);
        if cert.ok {
            Ok(p)
        } else {
            Err(Error::NotAPoint(cert.reason))
        }
    }

    pub fn lattice(&self) -> &Arc<PolyptychLattice> {
        &self.lat
    }

    pub fn cone_functionals(&self) -> &[IVec] {
        &self.cone_fns
    }

    /// Value at base-chart coordinates.
    pub fn eval_base(&self, x: &[i64]) -> i64 {
        let c = self.lat.fan().locate(x);
        idot(&self.cone_fns[c], x)
    }

    /// Value at rational base-chart coordinates.
    pub fn eval_base_rat(&self, x: &[Rat]) -> Rat {
        let fan = self.lat.fan();
        let c = fan.cones.iter().position(|c| c.base.contains_rat(x)).expect("PL fan is complete");
        LinFunctional::from_ints(&self.cone_fns[c]).eval(x)
    }

    /// The per-chart expressions `p_α` as minimal min-representations.
    pub fn chart_exprs(&self) -> &[TropExpr] {
        self.charts.get_or_init(|| {
            let fan = self.lat.fan();
            (0..self.lat.num_charts())
                .map(|a| {
                    let mut members: Vec<IVec> =
                        fan.cones.iter().zip(&self.cone_fns).map(|(c, f)| vec_mat(f, &c.from_chart[a])).collect();
                    members.sort();
                    members.dedup();
                    let e = TropExpr::from_ints(&members).expect("nonempty");
                    minimal_min_representation(&e, &RationalCone::whole(self.lat.rank())).unwrap_or(e)
                })
                .collect()
        })
    }

    /// `p_α` evaluated at chart-α coordinates.
    pub fn eval_chart(&self, a: usize, v: &[i64]) -> i64 {
        self.eval_base(&self.lat.from_chart(v, a))
    }

    /// Scales by a nonnegative integer.
    pub fn scaled(&self, k: i64) -> Point {
        Point {
            lat: self.lat.clone(),
            cone_fns: self.cone_fns.iter().map(|f| f.iter().map(|x| x * k).collect()).collect(),
            charts: OnceLock::new(),
        }
    }
}

/// Reads cone functionals off per-chart expressions, requiring linearity on every Σ(M) cone
/// and agreement across charts.
pub fn cone_functionals_from_exprs(lat: &Arc<PolyptychLattice>, exprs: &[TropExpr]) -> Result<Point> {
    if exprs.len() != lat.num_charts() {
        return Err(Error::DimensionMismatch { expected: lat.num_charts(), found: exprs.len() });
    }
    let fan = lat.fan();
    let mut fns = Vec::new();
    for (ci, c) in fan.cones.iter().enumerate() {
        let mut agreed: Option<IVec> = None;
        for (a, e) in exprs.iter().enumerate() {
            if e.dim() != lat.rank() {
                return Err(Error::DimensionMismatch { expected: lat.rank(), found: e.dim() });
            }
            let m = minimal_min_representation(e, &c.images[a])?;
            if m.members().len() != 1 {
                return Err(Error::NotAPoint(format!("chart {} not linear on cone {ci}", lat.charts()[a])));
            }
            let g = m.members()[0]
                .to_ints()
                .ok_or_else(|| Error::NotAPoint("non-integral functional".into()))?;
            let base = vec_mat(&g, &c.to_chart[a]);
            match &agreed {
                None => agreed = Some(base),
                Some(prev) if *prev != base => {
                    return Err(Error::NotAPoint(format!(
                        "charts disagree on cone {ci} (chart {})",
                        lat.charts()[a]
                    )))
                }
                _ => {}
            }
        }
        fns.push(agreed.expect("at least one chart"));
    }
    Point::from_cone_functionals(lat, fns)
}

/// `p(e)`.
pub fn evaluate(p: &Point, e: &Element) -> Result<i64> {
    if !Arc::ptr_eq(p.lattice(), e.lattice()) {
        return Err(Error::LatticeMismatch);
    }
    let v = p.eval_base(e.base_coords());
    debug_assert!((0..p.lat.num_charts()).all(|a| {
        let c = e.chart(a).unwrap();
        p.chart_exprs()[a].eval(&rvec(&c)) == Rat::from_integer(v.into())
    }));
    Ok(v)
}

/// Outcome of [`is_point`]: failing pair of base-chart vectors when the min identity fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCertificate {
    pub ok: bool,
    pub witness: Option<(IVec, IVec)>,
    pub reason: String,
}

/// Checks `p(m) + p(m') = min_α p(m +_α m')` on `V × G` of the lattice's verification set.
/// Linearity on Σ(M) cones holds by construction of [`Point`].
pub fn is_point(p: &Point) -> PointCertificate {
    let vs = p.lat.verification_set();
    let (v, g) = (&vs.extended, &vs.generators);
    let pv: Vec<i64> = v.iter().map(|x| p.eval_base(x)).collect();
    let pg: Vec<i64> = g.iter().map(|x| p.eval_base(x)).collect();
    let idx: Vec<usize> = (0..v.len()).collect();
    let bad = crate::par::find_first(&idx, |&i| {
        (0..g.len()).find_map(|j| {
            let lhs = pv[i] + pg[j];
            let rhs = vs.sums[i][j].iter().map(|s| p.eval_base(s)).min().expect("at least one chart");
            (lhs != rhs).then(|| (v[i].clone(), g[j].clone(), lhs, rhs))
        })
    });
    match bad {
        None => PointCertificate { ok: true, witness: None, reason: String::new() },
        Some((a, b, l, r)) => PointCertificate {
            ok: false,
            reason: format!("p({a:?}) + p({b:?}) = {l} but the chart-sum minimum is {r}"),
            witness: Some((a, b)),
        },
    }
}

/// Verifies per-chart expressions as a point.
pub fn is_point_exprs(lat: &Arc<PolyptychLattice>, exprs: &[TropExpr]) -> PointCertificate {
    match cone_functionals_from_exprs(lat, exprs) {
        Ok(p) => is_point(&p),
        Err(e) => PointCertificate { ok: false, witness: None, reason: e.to_string() },
    }
}

/// Whether `p_α` is a single linear functional.
pub fn is_linear_on_chart(p: &Point, a: usize) -> Result<bool> {
    if a >= p.lat.num_charts() {
        return Err(Error::UnknownChart(a.to_string()));
    }
    Ok(p.chart_exprs()[a].members().len() == 1)
}

/// The functional agreeing with `p` on the maximal cone `c` (base-chart coordinates).
pub fn restrict_to_cone(p: &Point, c: &RationalCone) -> Result<LinFunctional> {
    let i = p.lat.fan().position(c).ok_or(Error::NotACone)?;
    Ok(LinFunctional::from_ints(&p.cone_fns[i]))
}

/// Reconstructs the point restricting to `f` on the maximal cone with index `cone`, by
/// `p(v) = min_α f(v +_α w) − f(w)` for `w` deep enough in the cone.
pub fn extend_from_cone(lat: &Arc<PolyptychLattice>, cone: usize, f: &[i64]) -> Option<Point> {
    let fan = lat.fan();
    let c = &fan.cones.get(cone)?.base;
    let w0 = c.interior_point()?;
    let value = |v: &[i64]| -> Option<i64> {
        if c.contains(v) {
            return Some(idot(f, v));
        }
        let mut t = 1i64;
        loop {
            let w: IVec = w0.iter().map(|x| x * t).collect();
            let sums = upsilon_raw(lat, v, &w);
            if sums.iter().all(|s| c.contains(s)) {
                let m = sums.iter().map(|s| idot(f, s)).min()?;
                return Some(m - idot(f, &w));
            }
            if t > 1 << 24 {
                return None;
            }
            t *= 2;
        }
    };
    let mut fns = Vec::new();
    for d in &fan.cones {
        let basis = d.base.lattice_basis()?;
        let vals: Option<RVec> = basis.iter().map(|b| value(b).map(|x| Rat::from_integer(x.into()))).collect();
        let rows: Vec<RVec> = basis.iter().map(|b| rvec(b)).collect();
        let sol = solve(&rows, &vals?)?;
        if !is_integral(&sol) {
            return None;
        }
        fns.push(to_ivec(&sol)?);
    }
    let p = Point::from_cone_functionals(lat, fns).ok()?;
    is_point(&p).ok.then_some(p)
}

/// `λp + μq`, returned when it is a point.
pub fn combine_points(p: &Point, q: &Point, lambda: i64, mu: i64, a: usize) -> Option<Point> {
    if lambda < 0 || mu < 0 || !Arc::ptr_eq(&p.lat, &q.lat) {
        return None;
    }
    let fns = p
        .cone_fns
        .iter()
        .zip(&q.cone_fns)
        .map(|(f, g)| f.iter().zip(g).map(|(x, y)| lambda * x + mu * y).collect())
        .collect();
    let s = Point::from_cone_functionals(&p.lat, fns).ok()?;
    let linear = is_linear_on_chart(p, a).ok()? && is_linear_on_chart(q, a).ok()?;
    (linear || is_point(&s).ok).then_some(s)
}

/// An element of the canonical semialgebra: `∞` or a finite formal ⊕-sum of lattice elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SElem {
    Inf,
    /// Sorted, deduplicated members; canonical when a dual pair is registered.
    Fin(Vec<Element>),
}

impl SElem {
    pub fn single(e: Element) -> Self {
        SElem::Fin(vec![e])
    }

    pub fn from_elements(mut v: Vec<Element>) -> Self {
        if v.is_empty() {
            return SElem::Inf;
        }
        v.sort();
        v.dedup();
        SElem::Fin(v)
    }

    pub fn members(&self) -> &[Element] {
        match self {
            SElem::Inf => &[],
            SElem::Fin(v) => v,
        }
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, SElem::Inf)
    }
}

/// Whether `m` lies in the point-convex hull of `s`, decided through the registered dual.
pub fn in_pconv(m: &Element, s: &[Element]) -> Result<bool> {
    let (pair, side) = m.lattice().registered_dual().ok_or(Error::NoDualRegistered)?;
    Ok(pair.in_pconv_raw(side, m.base_coords(), &s.iter().map(|e| e.base_coords().to_vec()).collect::<Vec<_>>()))
}

/// Canonical form: members lying in the p-conv of the others are deleted in lex order.
pub fn normalize(a: &SElem) -> Result<SElem> {
    let SElem::Fin(v) = a else { return Ok(SElem::Inf) };
    let Some(first) = v.first() else { return Ok(SElem::Inf) };
    if v.len() == 1 {
        return Ok(a.clone());
    }
    let (pair, side) = first.lattice().registered_dual().ok_or(Error::NoDualRegistered)?;
    let raw: Vec<IVec> = v.iter().map(|e| e.base_coords().to_vec()).collect();
    let keep = canonical_indices(&raw, |m, rest| pair.in_pconv_raw(side, m, rest));
    Ok(SElem::Fin(keep.into_iter().map(|i| v[i].clone()).collect()))
}

/// Indices of the sorted, deduplicated `raw` that survive lex-order deletion.
pub(crate) fn canonical_indices(raw: &[IVec], in_hull: impl Fn(&[i64], &[IVec]) -> bool) -> Vec<usize> {
    let mut alive = vec![true; raw.len()];
    for i in 0..raw.len() {
        let rest: Vec<IVec> = (0..raw.len()).filter(|&j| j != i && alive[j]).map(|j| raw[j].clone()).collect();
        if !rest.is_empty() && in_hull(&raw[i], &rest) {
            alive[i] = false;
        }
    }
    (0..raw.len()).filter(|&i| alive[i]).collect()
}

fn normalize_or_raw(a: SElem) -> SElem {
    match normalize(&a) {
        Ok(n) => n,
        Err(_) => a,
    }
}

/// `a ⊕ b`; normalized when a dual pair is registered, raw union otherwise.
pub fn semialg_oplus(a: &SElem, b: &SElem) -> SElem {
    match (a, b) {
        (SElem::Inf, x) | (x, SElem::Inf) => x.clone(),
        (SElem::Fin(x), SElem::Fin(y)) => {
            let mut v = x.clone();
            v.extend(y.iter().cloned());
            normalize_or_raw(SElem::from_elements(v))
        }
    }
}

/// `a ⋆ b = ⊕_{m,m'} Υ(m, m')`.
pub fn semialg_star(a: &SElem, b: &SElem) -> Result<SElem> {
    match (a, b) {
        (SElem::Inf, _) | (_, SElem::Inf) => Ok(SElem::Inf),
        (SElem::Fin(x), SElem::Fin(y)) => {
            let lat = x[0].lattice().clone();
            if !y.iter().chain(x).all(|e| Arc::ptr_eq(e.lattice(), &lat)) {
                return Err(Error::LatticeMismatch);
            }
            let mut raw: Vec<IVec> = Vec::new();
            for m in x {
                for n in y {
                    raw.extend(upsilon_raw(&lat, m.base_coords(), n.base_coords()));
                }
            }
            let v = raw.into_iter().map(|c| Element::new(&lat, c)).collect::<Result<Vec<_>>>()?;
            Ok(normalize_or_raw(SElem::from_elements(v)))
        }
    }
}

/// Equality in the semialgebra (equal p-conv hulls); needs a registered dual.
pub fn semialg_eq(a: &SElem, b: &SElem) -> Result<bool> {
    match (a, b) {
        (SElem::Inf, SElem::Inf) => Ok(true),
        (SElem::Inf, _) | (_, SElem::Inf) => Ok(false),
        _ => Ok(normalize(a)? == normalize(b)?),
    }
}

/// `a ≥ b` in the idempotent order, i.e. `a ⊕ b = b`.
pub fn semialg_ge(a: &SElem, b: &SElem) -> Result<bool> {
    match (a, b) {
        (SElem::Inf, _) => Ok(true),
        (_, SElem::Inf) => Ok(false),
        (SElem::Fin(x), SElem::Fin(y)) => {
            for m in x {
                if !in_pconv(m, y)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// `p̃(a) = min_{m ∈ a} p(m)`; `None` stands for ∞.
pub fn point_eval_hom(p: &Point, a: &SElem) -> Result<Option<i64>> {
    match a {
        SElem::Inf => Ok(None),
        SElem::Fin(v) => {
            let mut best: Option<i64> = None;
            for m in v {
                let x = evaluate(p, m)?;
                best = Some(best.map_or(x, |b| b.min(x)));
            }
            Ok(best)
        }
    }
}

/// The side a lattice plays in its registered dual, for callers that need it.
pub fn registered_side(lat: &PolyptychLattice) -> Option<Side> {
    lat.registered_dual().map(|(_, s)| s)
}
