//! Strict dual pairs `(M, N, v, w)`: axiom verification, pairing, point-convex hull membership
//! and the PL structure induced on the points of `M`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{validate_lattice, Element, LatticeReport, PLMap, PolyptychLattice, Side};
use crate::points::{extend_from_cone, is_point, Point};
use crate::polyhedra::rat::{det_int, idot, inverse_int, mat_mul, mat_vec, transpose, IMat, IVec};
use crate::polyhedra::{strict_feasible, LinFunctional, Strictness};

/// Default radius of the verification box, overridable through `PLYP_BOX_RADIUS`.
pub fn default_box_radius() -> i64 {
    std::env::var("PLYP_BOX_RADIUS").ok().and_then(|s| s.trim().parse().ok()).filter(|r| *r >= 0).unwrap_or(3)
}

/// All integer vectors of length `dim` with entries in `[-radius, radius]`, in lex order.
pub fn integer_box(dim: usize, radius: i64) -> Vec<IVec> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v: IVec| {
                (-radius..=radius).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

pub type PointMap = Arc<dyn Fn(&[i64]) -> Point + Send + Sync>;
pub type InverseMap = Arc<dyn Fn(&Point) -> Option<IVec> + Send + Sync>;

/// A candidate strict dual pair. `v` sends base coordinates of `M` to points of `N`, `w` the reverse.
pub struct DualPair {
    m: Arc<PolyptychLattice>,
    n: Arc<PolyptychLattice>,
    v: PointMap,
    w: PointMap,
    v_inv: Option<InverseMap>,
    w_inv: Option<InverseMap>,
}

impl fmt::Debug for DualPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DualPair").field("m", &self.m).field("n", &self.n).finish()
    }
}

impl DualPair {
    /// Builds the pair and registers it on both lattices.
    pub fn new(
        m: Arc<PolyptychLattice>,
        n: Arc<PolyptychLattice>,
        v: PointMap,
        w: PointMap,
        v_inv: Option<InverseMap>,
        w_inv: Option<InverseMap>,
    ) -> Result<Arc<Self>> {
        if m.rank() != n.rank() {
            return Err(Error::DimensionMismatch { expected: m.rank(), found: n.rank() });
        }
        let pair = Arc::new(DualPair { m, n, v, w, v_inv, w_inv });
        pair.m.register_dual(&pair, Side::M);
        if !Arc::ptr_eq(&pair.m, &pair.n) {
            pair.n.register_dual(&pair, Side::N);
        }
        Ok(pair)
    }

    /// Both maps derived from a pairing on base coordinates; inverses found by box search.
    pub fn from_pairing(
        m: Arc<PolyptychLattice>,
        n: Arc<PolyptychLattice>,
        pairing: impl Fn(&[i64], &[i64]) -> i64 + Send + Sync + 'static,
    ) -> Result<Arc<Self>> {
        let f = Arc::new(pairing);
        let (f1, f2) = (f.clone(), f);
        let (n1, m1) = (n.clone(), m.clone());
        let v: PointMap = Arc::new(move |x: &[i64]| {
            let x = x.to_vec();
            Point::from_fn(&n1, |y| f1(&x, y)).expect("pairing is linear on Σ(N) cones")
        });
        let w: PointMap = Arc::new(move |y: &[i64]| {
            let y = y.to_vec();
            Point::from_fn(&m1, |x| f2(x, &y)).expect("pairing is linear on Σ(M) cones")
        });
        DualPair::new(m, n, v, w, None, None)
    }

    pub fn m(&self) -> &Arc<PolyptychLattice> {
        &self.m
    }

    pub fn n(&self) -> &Arc<PolyptychLattice> {
        &self.n
    }

    /// `v(m)` for base coordinates of `M`.
    pub fn v(&self, x: &[i64]) -> Point {
        (self.v)(x)
    }

    /// `w(n)` for base coordinates of `N`.
    pub fn w(&self, y: &[i64]) -> Point {
        (self.w)(y)
    }

    fn map(&self, side: Side) -> (&PointMap, &Arc<PolyptychLattice>, &Arc<PolyptychLattice>) {
        match side {
            Side::M => (&self.v, &self.m, &self.n),
            Side::N => (&self.w, &self.n, &self.m),
        }
    }

    pub fn v_elem(&self, e: &Element) -> Result<Point> {
        if !Arc::ptr_eq(e.lattice(), &self.m) {
            return Err(Error::LatticeMismatch);
        }
        Ok(self.v(e.base_coords()))
    }

    pub fn w_elem(&self, e: &Element) -> Result<Point> {
        if !Arc::ptr_eq(e.lattice(), &self.n) {
            return Err(Error::LatticeMismatch);
        }
        Ok(self.w(e.base_coords()))
    }

    /// `v^{-1}(p)`; uses the supplied inverse or a search over the verification box.
    pub fn v_inverse(&self, p: &Point) -> Option<IVec> {
        self.inverse(Side::M, p)
    }

    pub fn w_inverse(&self, p: &Point) -> Option<IVec> {
        self.inverse(Side::N, p)
    }

    fn inverse(&self, side: Side, p: &Point) -> Option<IVec> {
        let supplied = match side {
            Side::M => &self.v_inv,
            Side::N => &self.w_inv,
        };
        if let Some(f) = supplied {
            return f(p);
        }
        let (f, src, _) = self.map(side);
        let cands = integer_box(src.rank(), default_box_radius());
        crate::par::find_first(&cands, |x| (f(x) == *p).then(|| x.clone()))
    }

    /// Whether `x` lies in the point-convex hull of `s`, all in base coordinates of the given side.
    ///
    /// `x` is outside iff some maximal cone `D` of the dual fan contains `y` with
    /// `f(x)(y) < f(s)(y)` for every `s`; each comparison is linear on `D`.
    pub fn in_pconv_raw(&self, side: Side, x: &[i64], s: &[IVec]) -> bool {
        if s.iter().any(|t| t == x) {
            return true;
        }
        if s.is_empty() {
            return false;
        }
        let (f, _, dual) = self.map(side);
        let fx = f(x);
        let fs: Vec<Point> = s.iter().map(|t| f(t)).collect();
        let fan = dual.fan();
        for (ci, c) in fan.cones.iter().enumerate() {
            let gx = &fx.cone_functionals()[ci];
            let below = c.base.generators().monoid.iter().any(|y| {
                let vx = idot(gx, y);
                fs.iter().all(|q| vx < idot(&q.cone_functionals()[ci], y))
            });
            if below {
                return false;
            }
            let cons: Vec<(LinFunctional, Strictness)> = fs
                .iter()
                .map(|q| {
                    let d: IVec = q.cone_functionals()[ci].iter().zip(gx).map(|(a, b)| a - b).collect();
                    (LinFunctional::from_ints(&d), Strictness::Strict)
                })
                .collect();
            if strict_feasible(&cons, &c.base).expect("dimensions agree").is_some() {
                return false;
            }
        }
        true
    }
}

/// `v(m)(n)`, checked against `w(n)(m)`.
pub fn pair_eval(pair: &DualPair, m: &Element, n: &Element) -> Result<i64> {
    let a = pair.v_elem(m)?.eval_base(n.base_coords());
    let b = pair.w_elem(n)?.eval_base(m.base_coords());
    if a != b {
        return Err(Error::VerificationFailure(format!(
            "v(m)(n) = {a} but w(n)(m) = {b} at m = {:?}, n = {:?}",
            m.base_coords(),
            n.base_coords()
        )));
    }
    Ok(a)
}

/// Whether a point is a single linear functional in chart `a`.
pub fn linear_on_chart(p: &Point, a: usize) -> bool {
    let fan = p.lattice().fan();
    let mut it = fan
        .cones
        .iter()
        .zip(p.cone_functionals())
        .map(|(c, f)| crate::polyhedra::rat::vec_mat(f, &c.from_chart[a]));
    let first = it.next().expect("fan is nonempty");
    it.all(|g| g == first)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomResult {
    pub passed: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

impl AxiomResult {
    fn from_failure(checked: usize, witness: Option<String>) -> Self {
        AxiomResult { passed: witness.is_none(), checked, witness }
    }
}

/// Per-axiom results plus the chart ↔ cone correspondences of axiom (4).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualReport {
    pub radius: i64,
    pub axioms: [AxiomResult; 4],
    /// For each chart γ of `N`, the index of the Σ(M) cone `v^{-1}(Sp(N, γ))`.
    pub cone_of_n_chart: Vec<Option<usize>>,
    /// For each chart α of `M`, the index of the Σ(N) cone `w^{-1}(Sp(M, α))`.
    pub cone_of_m_chart: Vec<Option<usize>>,
}

impl DualReport {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }
}

pub fn verify_dual_pair(pair: &DualPair) -> DualReport {
    verify_dual_pair_with_radius(pair, default_box_radius())
}

/// Axioms (1)–(3) exhaustively on the box; axiom (4) by generator inclusion plus the box.
pub fn verify_dual_pair_with_radius(pair: &DualPair, radius: i64) -> DualReport {
    let box_m = integer_box(pair.m.rank(), radius);
    let box_n = integer_box(pair.n.rank(), radius);
    let vm: Vec<Point> = crate::par::map(&box_m, |x| pair.v(x));
    let wn: Vec<Point> = crate::par::map(&box_n, |y| pair.w(y));

    let a1 = {
        let bad_v = crate::par::find_first(&vm, |p| {
            let c = is_point(p);
            (!c.ok).then_some(c.reason)
        });
        let bad_w = || {
            crate::par::find_first(&wn, |p| {
                let c = is_point(p);
                (!c.ok).then_some(c.reason)
            })
        };
        let w = bad_v.map(|r| format!("v: {r}")).or_else(|| bad_w().map(|r| format!("w: {r}")));
        AxiomResult::from_failure(vm.len() + wn.len(), w)
    };

    let a2 = {
        let idx: Vec<usize> = (0..box_m.len()).collect();
        let bad = crate::par::find_first(&idx, |&i| {
            box_n.iter().zip(&wn).find_map(|(y, wy)| {
                let a = vm[i].eval_base(y);
                let b = wy.eval_base(&box_m[i]);
                (a != b).then(|| format!("v({:?})({y:?}) = {a} but w({y:?})({:?}) = {b}", box_m[i], box_m[i]))
            })
        });
        AxiomResult::from_failure(box_m.len() * box_n.len(), bad)
    };

    let a3 = {
        let mut checked = 0;
        let mut witness = None;
        for (side, bx, pts) in [(Side::M, &box_m, &vm), (Side::N, &box_n, &wn)] {
            checked += bx.len();
            if witness.is_none() {
                let idx: Vec<usize> = (0..bx.len()).collect();
                witness = crate::par::find_first(&idx, |&i| {
                    let back = pair.inverse(side, &pts[i]);
                    (back.as_deref() != Some(&bx[i][..])).then(|| format!("{side:?} inverse fails at {:?}", bx[i]))
                });
            }
            if witness.is_none() {
                let (f, _, dual) = pair.map(side);
                let samples = point_samples(dual);
                checked += samples.len();
                witness = crate::par::find_first(&samples, |q| {
                    let x = pair.inverse(side, q);
                    match x {
                        Some(x) if f(&x) == *q => None,
                        _ => Some(format!("{side:?} map misses the point {q:?}")),
                    }
                });
            }
        }
        AxiomResult::from_failure(checked, witness)
    };

    let (cone_of_n_chart, w1) = chart_cones(pair, Side::M, &box_m, &vm);
    let (cone_of_m_chart, w2) = chart_cones(pair, Side::N, &box_n, &wn);
    let a4 = AxiomResult::from_failure(box_m.len() + box_n.len(), w1.or(w2));

    DualReport { radius, axioms: [a1, a2, a3, a4], cone_of_n_chart, cone_of_m_chart }
}

/// Points of `lat` obtained by extending small functionals off each maximal cone.
fn point_samples(lat: &Arc<PolyptychLattice>) -> Vec<Point> {
    let fns = integer_box(lat.rank(), 1);
    let mut out: Vec<Point> = Vec::new();
    for ci in 0..lat.fan().len() {
        for p in crate::par::map(&fns, |f| extend_from_cone(lat, ci, f)).into_iter().flatten() {
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

/// For side `M`: each chart γ of `N` is matched with the Σ(M) cones all of whose generators
/// land in `Sp(N, γ)`; the match must be a bijection and agree with linearity on the box.
fn chart_cones(pair: &DualPair, side: Side, bx: &[IVec], pts: &[Point]) -> (Vec<Option<usize>>, Option<String>) {
    let (f, src, dual) = pair.map(side);
    let fan = src.fan();
    let gens: Vec<Vec<Point>> =
        fan.cones.iter().map(|c| c.base.generators().monoid.iter().map(|g| f(g)).collect()).collect();
    let mut map = Vec::new();
    let mut witness = None;
    for g in 0..dual.num_charts() {
        let hits: Vec<usize> =
            (0..fan.len()).filter(|&ci| gens[ci].iter().all(|p| linear_on_chart(p, g))).collect();
        if hits.len() == 1 {
            map.push(Some(hits[0]));
        } else {
            witness.get_or_insert_with(|| format!("{side:?}: chart {} matches cones {hits:?}", dual.charts()[g]));
            map.push(None);
        }
    }
    let mut seen: Vec<usize> = map.iter().flatten().copied().collect();
    seen.sort();
    seen.dedup();
    if seen.len() != fan.len() || map.len() != fan.len() {
        witness.get_or_insert_with(|| format!("{side:?}: chart/cone correspondence is not a bijection"));
    }
    if witness.is_none() {
        let idx: Vec<usize> = (0..bx.len()).collect();
        witness = crate::par::find_first(&idx, |&i| {
            (0..dual.num_charts()).find_map(|g| {
                let lin = linear_on_chart(&pts[i], g);
                let inside = fan.cones[map[g].expect("checked")].base.contains(&bx[i]);
                (lin != inside).then(|| format!("{side:?}: linearity on chart {} disagrees at {:?}", dual.charts()[g], bx[i]))
            })
        });
    }
    (map, witness)
}

/// The cone of the domain fan whose generators all map to points linear on `chart`
/// (for `Side::N`: the Σ(N) cone `w^{-1}(Sp(M, chart))`).
pub fn preimage_cone(pair: &DualPair, side: Side, chart: usize) -> Option<usize> {
    let (f, src, dual) = pair.map(side);
    if chart >= dual.num_charts() {
        return None;
    }
    let fan = src.fan();
    let hits: Vec<usize> = (0..fan.len())
        .filter(|&ci| fan.cones[ci].base.generators().monoid.iter().all(|g| linear_on_chart(&f(g), chart)))
        .collect();
    (hits.len() == 1).then(|| hits[0])
}

/// The induced lattice on `Sp(M)` together with the chart isomorphisms `w_γ`.
#[derive(Debug)]
pub struct InducedStructure {
    pub lattice: Arc<PolyptychLattice>,
    /// Σ(M) cone index used as chart for each chart γ of `N`.
    pub chart_cones: Vec<usize>,
    /// `w_γ` as an integer matrix from chart-γ coordinates of `N` to functionals on `C_γ`.
    pub isomorphisms: Vec<IMat>,
    pub squares_checked: usize,
    pub validation: LatticeReport,
}

/// Builds charts `Hom(C_γ ∩ M, ℤ)` via restriction and checks every square
/// `w_δ ∘ μ_{γδ} = L_{C_δ} ∘ L_{C_γ}^{-1} ∘ w_γ` on the verification generators of `N`.
pub fn induced_pl_on_points(pair: &DualPair) -> Result<InducedStructure> {
    let n = &pair.n;
    let bx = integer_box(pair.m.rank(), 0);
    let zero = vec![pair.v(&bx[0])];
    let (cones, witness) = chart_cones(pair, Side::M, &bx, &zero);
    if let Some(w) = witness {
        return Err(Error::VerificationFailure(w));
    }
    let cones: Vec<usize> = cones.into_iter().map(|c| c.expect("checked")).collect();
    let r = n.rank();
    let restrict = |y: &[i64], c: usize| pair.w(y).cone_functionals()[c].clone();
    let mut isos = Vec::new();
    for (g, &c) in cones.iter().enumerate() {
        let cols: Vec<IVec> = (0..r)
            .map(|j| {
                let mut e = vec![0; r];
                e[j] = 1;
                restrict(&n.from_chart(&e, g), c)
            })
            .collect();
        let m = transpose(&cols);
        if det_int(&m).abs() != 1 {
            return Err(Error::VerificationFailure(format!("w_{} is not unimodular", n.charts()[g])));
        }
        isos.push(m);
    }
    let gens = n.verification_set().generators.clone();
    let mut checked = 0;
    for y in &gens {
        for (g, &c) in cones.iter().enumerate() {
            checked += 1;
            if restrict(y, c) != mat_vec(&isos[g], &n.to_chart(y, g)) {
                return Err(Error::VerificationFailure(format!(
                    "square for chart {} fails at {y:?}",
                    n.charts()[g]
                )));
            }
        }
    }
    let k = cones.len();
    let labels: Vec<String> = cones.iter().map(|c| format!("C{c}")).collect();
    let mut given = BTreeMap::new();
    for a in 0..k {
        let inv = inverse_int(&isos[a]).expect("unimodular");
        for b in 0..k {
            let mu = n.mutation(a, b);
            let cs = mu.cones().iter().map(|c| c.image(&isos[a])).collect();
            let ms = mu.matrices().iter().map(|m| mat_mul(&isos[b], &mat_mul(m, &inv))).collect();
            given.insert((a, b), PLMap::new(r, cs, ms)?);
        }
    }
    let lattice = PolyptychLattice::new(r, labels, n.base(), given)?;
    let validation = validate_lattice(&lattice);
    Ok(InducedStructure { lattice, chart_cones: cones, isomorphisms: isos, squares_checked: checked, validation })
}
