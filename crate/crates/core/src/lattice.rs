//! Polyptych lattices: charts glued by piecewise-linear mutations, their elements,
//! chart arithmetic and the canonical PL fan.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock, RwLock, Weak};

use crate::duality::DualPair;
use crate::error::{Error, Result};
use crate::polyhedra::cone::common_refinement;
use crate::polyhedra::rat::{
    det_int, idot, identity, inverse_int, mat_mul, mat_vec, mat_vec_rat, primitive, rat, rvec, IMat, IVec, RVec, Rat,
};
use crate::polyhedra::{affine_strict_feasible, AffineRow, ClassicalFan, RationalCone};

/// A piecewise-linear map given by a complete fan and one integer matrix per maximal cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLMap {
    dim: usize,
    cones: Vec<RationalCone>,
    matrices: Vec<IMat>,
}

impl PLMap {
    pub fn new(dim: usize, cones: Vec<RationalCone>, matrices: Vec<IMat>) -> Result<Self> {
        if cones.len() != matrices.len() || cones.is_empty() {
            return Err(Error::InvalidLattice("need one matrix per cone".into()));
        }
        for c in &cones {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: c.dim() });
            }
        }
        for m in &matrices {
            if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                return Err(Error::DimensionMismatch { expected: dim, found: m.len() });
            }
        }
        Ok(PLMap { dim, cones, matrices })
    }

    pub fn identity(dim: usize) -> Self {
        PLMap { dim, cones: vec![RationalCone::whole(dim)], matrices: vec![identity(dim)] }
    }

    pub fn linear(m: IMat) -> Self {
        let dim = m.len();
        PLMap { dim, cones: vec![RationalCone::whole(dim)], matrices: vec![m] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cones(&self) -> &[RationalCone] {
        &self.cones
    }

    pub fn matrices(&self) -> &[IMat] {
        &self.matrices
    }

    pub fn fan(&self) -> ClassicalFan {
        ClassicalFan { dim: self.dim, cones: self.cones.clone() }
    }

    /// Index of the first linearity cone containing `x`.
    pub fn piece(&self, x: &[i64]) -> usize {
        self.cones
            .iter()
            .position(|c| c.contains(x))
            .unwrap_or_else(|| panic!("point {x:?} outside the fan of a mutation"))
    }

    pub fn apply(&self, x: &[i64]) -> IVec {
        mat_vec(&self.matrices[self.piece(x)], x)
    }

    pub fn apply_rat(&self, x: &[Rat]) -> RVec {
        let i = self
            .cones
            .iter()
            .position(|c| c.contains_rat(x))
            .expect("point outside the fan of a mutation");
        mat_vec_rat(&self.matrices[i], x)
    }

    /// `then ∘ self`, linear on the pieces `{x ∈ C_i : M_i x ∈ D_j}`.
    pub fn compose(&self, then: &PLMap) -> PLMap {
        let mut cones = Vec::new();
        let mut matrices = Vec::new();
        for (c, m) in self.cones.iter().zip(&self.matrices) {
            for (d, n) in then.cones.iter().zip(&then.matrices) {
                let pre = d.preimage(m);
                let piece = c.intersect(&pre).expect("same dimension");
                if piece.is_full_dimensional() {
                    cones.push(piece);
                    matrices.push(mat_mul(n, m));
                }
            }
        }
        PLMap { dim: self.dim, cones, matrices }
    }

    /// Piecewise inverse; requires unimodular pieces.
    pub fn inverse(&self) -> Result<PLMap> {
        let mut cones = Vec::new();
        let mut matrices = Vec::new();
        for (c, m) in self.cones.iter().zip(&self.matrices) {
            let inv = inverse_int(m).ok_or_else(|| Error::InvalidLattice("piece is not unimodular".into()))?;
            cones.push(c.image(m));
            matrices.push(inv);
        }
        Ok(PLMap { dim: self.dim, cones, matrices })
    }

    /// Cones of the common refinement on which `self` and `other` differ, with interior witnesses.
    pub fn differences(&self, other: &PLMap) -> Vec<(String, IVec)> {
        let mut out = Vec::new();
        for (c, m) in self.cones.iter().zip(&self.matrices) {
            for (d, n) in other.cones.iter().zip(&other.matrices) {
                if m == n {
                    continue;
                }
                let piece = c.intersect(d).expect("same dimension");
                if let Some(x) = piece.interior_point() {
                    if piece.is_full_dimensional() {
                        out.push((piece.describe(), x));
                    }
                }
            }
        }
        out
    }

    /// Adjacent pieces must agree on their common face.
    pub fn continuity_failures(&self) -> Vec<(String, IVec)> {
        let mut out = Vec::new();
        for i in 0..self.cones.len() {
            for j in i + 1..self.cones.len() {
                if self.matrices[i] == self.matrices[j] {
                    continue;
                }
                let face = self.cones[i].intersect(&self.cones[j]).expect("same dimension");
                let g = face.generators();
                for v in g.rays.iter().chain(&g.lineality) {
                    if mat_vec(&self.matrices[i], v) != mat_vec(&self.matrices[j], v) {
                        out.push((face.describe(), v.clone()));
                        break;
                    }
                }
            }
        }
        out
    }

    /// Merges groups of pieces with equal matrices whose union is a convex cone.
    pub fn coarsened(&self) -> PLMap {
        let mut groups: Vec<(IMat, Vec<usize>)> = Vec::new();
        for (i, m) in self.matrices.iter().enumerate() {
            match groups.iter_mut().find(|(g, _)| g == m) {
                Some((_, v)) => v.push(i),
                None => groups.push((m.clone(), vec![i])),
            }
        }
        let mut cones = Vec::new();
        let mut matrices = Vec::new();
        for (m, idx) in groups {
            if idx.len() > 1 {
                if let Some(c) = merge_cones(self.dim, &idx.iter().map(|&i| &self.cones[i]).collect::<Vec<_>>()) {
                    cones.push(c);
                    matrices.push(m);
                    continue;
                }
            }
            for i in idx {
                cones.push(self.cones[i].clone());
                matrices.push(m.clone());
            }
        }
        PLMap { dim: self.dim, cones, matrices }
    }

    /// Block-diagonal product map.
    pub fn product(&self, other: &PLMap) -> PLMap {
        let dim = self.dim + other.dim;
        let mut cones = Vec::new();
        let mut matrices = Vec::new();
        for (c, m) in self.cones.iter().zip(&self.matrices) {
            for (d, n) in other.cones.iter().zip(&other.matrices) {
                let mut ins: Vec<IVec> = c.ineqs().iter().map(|v| pad(v, 0, dim)).collect();
                ins.extend(d.ineqs().iter().map(|v| pad(v, self.dim, dim)));
                cones.push(RationalCone::new(dim, ins, vec![]).expect("dimensions agree"));
                let mut block = vec![vec![0; dim]; dim];
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        block[i][j] = m[i][j];
                    }
                }
                for i in 0..other.dim {
                    for j in 0..other.dim {
                        block[self.dim + i][self.dim + j] = n[i][j];
                    }
                }
                matrices.push(block);
            }
        }
        PLMap { dim, cones, matrices }
    }
}

fn pad(v: &[i64], offset: usize, dim: usize) -> IVec {
    let mut out = vec![0; dim];
    out[offset..offset + v.len()].copy_from_slice(v);
    out
}

/// Convex hull of a union of cones when that union is itself a cone.
fn merge_cones(dim: usize, members: &[&RationalCone]) -> Option<RationalCone> {
    let valid_on = |n: &IVec, c: &RationalCone| {
        let g = c.generators();
        g.rays.iter().all(|r| idot(n, r) >= 0) && g.lineality.iter().all(|l| idot(n, l) == 0)
    };
    let mut outer: Vec<IVec> = Vec::new();
    for c in members {
        for n in c.ineqs() {
            if members.iter().all(|d| valid_on(n, d)) && !outer.contains(n) {
                outer.push(n.clone());
            }
        }
    }
    // every inner wall must be crossed into another member
    let sub = ClassicalFan { dim, cones: members.iter().map(|c| (*c).clone()).collect() };
    let hull = RationalCone::new(dim, outer.clone(), vec![]).ok()?;
    for (ci, c) in members.iter().enumerate() {
        for f in c.ineqs() {
            if outer.contains(f) {
                continue;
            }
            let mut rows: Vec<AffineRow> = c
                .ineqs()
                .iter()
                .filter(|g| *g != f)
                .map(|g| AffineRow::strict(rvec(g), rat(0)))
                .collect();
            rows.push(AffineRow::weak(rvec(f), rat(0)));
            let eq = vec![(rvec(f), rat(0))];
            let Some(x) = affine_strict_feasible(dim, &rows, &eq) else { continue };
            let x = primitive(&x);
            let crossed = sub.cones.iter().enumerate().any(|(di, d)| {
                di != ci && d.contains(&x) && d.ineqs().iter().all(|g| idot(g, &x) > 0 || idot(g, f) <= 0)
            });
            if !crossed {
                return None;
            }
        }
    }
    Some(hull)
}

/// A maximal cone of Σ(M): its base-chart image plus the linear data in every chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLCone {
    pub base: RationalCone,
    /// `π_α(C)` for every chart α.
    pub images: Vec<RationalCone>,
    /// Matrix of `μ_{base,α}` on the cone.
    pub to_chart: Vec<IMat>,
    /// Matrix of `μ_{α,base}` on `π_α(C)`.
    pub from_chart: Vec<IMat>,
}

/// The PL fan Σ(M) in base-chart coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLFan {
    pub cones: Vec<PLCone>,
}

impl PLFan {
    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    /// Index of the first cone containing the base-chart vector `x`.
    pub fn locate(&self, x: &[i64]) -> usize {
        self.cones
            .iter()
            .position(|c| c.base.contains(x))
            .expect("PL fan is complete")
    }

    pub fn base_fan(&self) -> ClassicalFan {
        ClassicalFan {
            dim: self.cones.first().map_or(0, |c| c.base.dim()),
            cones: self.cones.iter().map(|c| c.base.clone()).collect(),
        }
    }

    /// Index of the cone whose base image equals `c`.
    pub fn position(&self, c: &RationalCone) -> Option<usize> {
        self.cones.iter().position(|p| p.base == *c)
    }
}

/// Which side of a registered dual pair a lattice sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    M,
    N,
}

/// A polyptych lattice: ordered chart labels, all pairwise mutations and a base chart.
pub struct PolyptychLattice {
    rank: usize,
    charts: Vec<String>,
    base: usize,
    maps: Vec<PLMap>,
    fan: OnceLock<PLFan>,
    verif: OnceLock<VerificationSet>,
    dual: RwLock<Option<(Weak<DualPair>, Side)>>,
}

impl fmt::Debug for PolyptychLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PolyptychLattice")
            .field("rank", &self.rank)
            .field("charts", &self.charts)
            .field("base", &self.charts[self.base])
            .finish()
    }
}

impl PolyptychLattice {
    /// Builds a lattice from mutations keyed by `(from, to)` chart indices.
    ///
    /// Diagonal entries default to the identity; a missing `(α, β)` is composed through the base chart.
    pub fn new(
        rank: usize,
        charts: Vec<String>,
        base: usize,
        mut given: BTreeMap<(usize, usize), PLMap>,
    ) -> Result<Arc<Self>> {
        let n = charts.len();
        if n == 0 || base >= n {
            return Err(Error::InvalidLattice("need at least one chart and a valid base".into()));
        }
        let mut sorted = charts.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::InvalidLattice("duplicate chart labels".into()));
        }
        for (&(a, b), m) in &given {
            if a >= n || b >= n {
                return Err(Error::UnknownChart(format!("{a}->{b}")));
            }
            if m.dim != rank {
                return Err(Error::DimensionMismatch { expected: rank, found: m.dim });
            }
        }
        for a in 0..n {
            given.entry((a, a)).or_insert_with(|| PLMap::identity(rank));
        }
        let mut maps = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let m = match given.get(&(a, b)) {
                    Some(m) => m.clone(),
                    None => {
                        let to_base = given.get(&(a, base));
                        let from_base = given.get(&(base, b));
                        match (to_base, from_base) {
                            (Some(f), Some(g)) => f.compose(g),
                            _ => {
                                return Err(Error::InvalidLattice(format!(
                                    "missing mutation {} -> {}",
                                    charts[a], charts[b]
                                )))
                            }
                        }
                    }
                };
                maps.push(m);
            }
        }
        Ok(Arc::new(PolyptychLattice { rank, charts, base, maps, fan: OnceLock::new(), verif: OnceLock::new(), dual: RwLock::new(None) }))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn charts(&self) -> &[String] {
        &self.charts
    }

    pub fn num_charts(&self) -> usize {
        self.charts.len()
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn chart_index(&self, label: &str) -> Result<usize> {
        self.charts
            .iter()
            .position(|c| c == label)
            .ok_or_else(|| Error::UnknownChart(label.to_string()))
    }

    fn check_chart(&self, a: usize) -> Result<()> {
        if a < self.charts.len() {
            Ok(())
        } else {
            Err(Error::UnknownChart(a.to_string()))
        }
    }

    /// The mutation `μ_{α,β}`.
    pub fn mutation(&self, a: usize, b: usize) -> &PLMap {
        &self.maps[a * self.charts.len() + b]
    }

    /// The same lattice with a different base chart.
    pub fn rebased(&self, base: usize) -> Result<Arc<Self>> {
        self.check_chart(base)?;
        let n = self.charts.len();
        let mut given = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                given.insert((a, b), self.mutation(a, b).clone());
            }
        }
        PolyptychLattice::new(self.rank, self.charts.clone(), base, given)
    }

    /// `π_α` applied to base-chart coordinates.
    pub fn to_chart(&self, base_coords: &[i64], a: usize) -> IVec {
        if a == self.base {
            base_coords.to_vec()
        } else {
            self.mutation(self.base, a).apply(base_coords)
        }
    }

    /// `π_α^{-1}` in base-chart coordinates.
    pub fn from_chart(&self, coords: &[i64], a: usize) -> IVec {
        if a == self.base {
            coords.to_vec()
        } else {
            self.mutation(a, self.base).apply(coords)
        }
    }

    /// Registers a dual pair; normalization of semialgebra elements consults it.
    pub fn register_dual(&self, pair: &Arc<DualPair>, side: Side) {
        *self.dual.write().unwrap() = Some((Arc::downgrade(pair), side));
    }

    /// The registered dual pair and this lattice's side of it, if still alive.
    pub fn registered_dual(&self) -> Option<(Arc<DualPair>, Side)> {
        let g = self.dual.read().unwrap();
        let (w, s) = g.as_ref()?;
        w.upgrade().map(|p| (p, *s))
    }

    pub fn fan(&self) -> &PLFan {
        self.fan.get_or_init(|| compute_fan(self))
    }

    /// The finite set on which point axioms are checked.
    pub fn verification_set(&self) -> &VerificationSet {
        self.verif.get_or_init(|| VerificationSet::compute(self))
    }
}

/// Monoid generators `G` of all Σ(M) cones, `V = G ∪ {g +_α g'}`, and the chart sums
/// `Υ(v, g)` for every `(v, g) ∈ V × G` (base-chart coordinates).
#[derive(Debug, Clone)]
pub struct VerificationSet {
    pub generators: Vec<IVec>,
    pub extended: Vec<IVec>,
    pub sums: Vec<Vec<Vec<IVec>>>,
}

impl VerificationSet {
    fn compute(l: &PolyptychLattice) -> Self {
        let mut g: Vec<IVec> = l.fan().cones.iter().flat_map(|c| c.base.generators().monoid.clone()).collect();
        g.sort();
        g.dedup();
        let mut v = g.clone();
        for (i, a) in g.iter().enumerate() {
            for b in &g[i..] {
                v.extend(upsilon_raw(l, a, b));
            }
        }
        v.sort();
        v.dedup();
        let sums = crate::par::map(&v, |a| g.iter().map(|b| upsilon_raw(l, a, b)).collect());
        VerificationSet { generators: g, extended: v, sums }
    }
}

fn compute_fan(l: &PolyptychLattice) -> PLFan {
    let fans: Vec<ClassicalFan> = (0..l.num_charts())
        .map(|b| l.mutation(l.base, b).coarsened().fan())
        .collect();
    let refined = common_refinement(&fans).expect("all charts have the lattice rank");
    let cones = refined
        .cones
        .into_iter()
        .map(|c| {
            let x = c.interior_point().expect("maximal cones are full-dimensional");
            let mut images = Vec::new();
            let mut to_chart = Vec::new();
            let mut from_chart = Vec::new();
            for a in 0..l.num_charts() {
                let mu = l.mutation(l.base, a);
                let m = mu.matrices()[mu.piece(&x)].clone();
                images.push(c.image(&m));
                from_chart.push(inverse_int(&m).expect("mutation pieces are unimodular"));
                to_chart.push(m);
            }
            PLCone { base: c, images, to_chart, from_chart }
        })
        .collect();
    PLFan { cones }
}

/// An element of a polyptych lattice, stored by its base-chart coordinates.
#[derive(Clone)]
pub struct Element {
    lat: Arc<PolyptychLattice>,
    base: IVec,
    charts: OnceLock<Vec<IVec>>,
}

impl Element {
    pub fn new(lat: &Arc<PolyptychLattice>, base: IVec) -> Result<Self> {
        if base.len() != lat.rank {
            return Err(Error::DimensionMismatch { expected: lat.rank, found: base.len() });
        }
        Ok(Element { lat: lat.clone(), base, charts: OnceLock::new() })
    }

    /// The element with chart-α coordinates `coords`.
    pub fn from_chart(lat: &Arc<PolyptychLattice>, a: usize, coords: &[i64]) -> Result<Self> {
        lat.check_chart(a)?;
        if coords.len() != lat.rank {
            return Err(Error::DimensionMismatch { expected: lat.rank, found: coords.len() });
        }
        Element::new(lat, lat.from_chart(coords, a))
    }

    pub fn zero(lat: &Arc<PolyptychLattice>) -> Self {
        Element { lat: lat.clone(), base: vec![0; lat.rank], charts: OnceLock::new() }
    }

    pub fn lattice(&self) -> &Arc<PolyptychLattice> {
        &self.lat
    }

    pub fn base_coords(&self) -> &[i64] {
        &self.base
    }

    pub fn is_zero(&self) -> bool {
        self.base.iter().all(|x| *x == 0)
    }

    fn all_charts(&self) -> &[IVec] {
        self.charts
            .get_or_init(|| (0..self.lat.num_charts()).map(|a| self.lat.to_chart(&self.base, a)).collect())
    }

    /// `π_α(e)`.
    pub fn chart(&self, a: usize) -> Result<IVec> {
        self.lat.check_chart(a)?;
        Ok(self.all_charts()[a].clone())
    }

    pub fn same_lattice(&self, other: &Element) -> bool {
        Arc::ptr_eq(&self.lat, &other.lat)
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.base.hash(state);
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.base.cmp(&other.base)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element{:?}", self.base)
    }
}

/// Which axiom a validation failure concerns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Identity,
    Inverse,
    Cocycle,
    IncompleteFan,
    NotUnimodular,
    Discontinuous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    /// Chart labels involved, in axiom order.
    pub charts: Vec<String>,
    pub cone: String,
    pub witness: IVec,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LatticeReport {
    pub failures: Vec<AxiomFailure>,
}

impl LatticeReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the identity, inverse and cocycle axioms exactly, cone by cone.
pub fn validate_lattice(l: &PolyptychLattice) -> LatticeReport {
    let n = l.num_charts();
    let label = |i: usize| l.charts[i].clone();
    let mut failures = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let mu = l.mutation(a, b);
            if !mu.fan().is_complete() {
                failures.push(AxiomFailure {
                    axiom: Axiom::IncompleteFan,
                    charts: vec![label(a), label(b)],
                    cone: String::new(),
                    witness: vec![],
                });
            }
            for (c, m) in mu.cones().iter().zip(mu.matrices()) {
                if det_int(m).abs() != 1 {
                    failures.push(AxiomFailure {
                        axiom: Axiom::NotUnimodular,
                        charts: vec![label(a), label(b)],
                        cone: c.describe(),
                        witness: vec![],
                    });
                }
            }
            for (cone, w) in mu.continuity_failures() {
                failures.push(AxiomFailure { axiom: Axiom::Discontinuous, charts: vec![label(a), label(b)], cone, witness: w });
            }
        }
    }
    if failures.iter().any(|f| f.axiom == Axiom::NotUnimodular) {
        return LatticeReport { failures };
    }
    let id = PLMap::identity(l.rank);
    for a in 0..n {
        for (cone, w) in l.mutation(a, a).differences(&id) {
            failures.push(AxiomFailure { axiom: Axiom::Identity, charts: vec![label(a)], cone, witness: w });
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let inv = crate::par::flat_map(&pairs, |&(a, b)| {
        let round = l.mutation(a, b).compose(l.mutation(b, a));
        round
            .differences(&id)
            .into_iter()
            .map(|(cone, w)| AxiomFailure { axiom: Axiom::Inverse, charts: vec![label(a), label(b)], cone, witness: w })
            .collect()
    });
    failures.extend(inv);
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
        .filter(|(a, b, c)| a != b && b != c && a != c)
        .collect();
    let coc = crate::par::flat_map(&triples, |&(a, b, c)| {
        let comp = l.mutation(a, b).compose(l.mutation(b, c));
        comp.differences(l.mutation(a, c))
            .into_iter()
            .map(|(cone, w)| AxiomFailure {
                axiom: Axiom::Cocycle,
                charts: vec![label(a), label(b), label(c)],
                cone,
                witness: w,
            })
            .collect()
    });
    failures.extend(coc);
    LatticeReport { failures }
}

/// `π_α(e)` by chart index.
pub fn chart(e: &Element, a: usize) -> Result<IVec> {
    e.chart(a)
}

/// Σ(M) of the lattice.
pub fn pl_fan(l: &PolyptychLattice) -> &PLFan {
    l.fan()
}

/// `e +_α e' = π_α^{-1}(π_α(e) + π_α(e'))`.
pub fn add_in_chart(e: &Element, f: &Element, a: usize) -> Result<Element> {
    if !e.same_lattice(f) {
        return Err(Error::LatticeMismatch);
    }
    let x = e.chart(a)?;
    let y = f.chart(a)?;
    let s: IVec = x.iter().zip(&y).map(|(p, q)| p + q).collect();
    Element::from_chart(&e.lat, a, &s)
}

/// Base-coordinate version of [`add_in_chart`].
pub fn add_in_chart_raw(l: &PolyptychLattice, x: &[i64], y: &[i64], a: usize) -> IVec {
    let cx = l.to_chart(x, a);
    let cy = l.to_chart(y, a);
    let s: IVec = cx.iter().zip(&cy).map(|(p, q)| p + q).collect();
    l.from_chart(&s, a)
}

/// The set `Υ(e, e')` of chart sums, sorted and deduplicated.
pub fn upsilon(e: &Element, f: &Element) -> Result<Vec<Element>> {
    if !e.same_lattice(f) {
        return Err(Error::LatticeMismatch);
    }
    let mut out: Vec<Element> = (0..e.lat.num_charts())
        .map(|a| add_in_chart(e, f, a))
        .collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Base-coordinate version of [`upsilon`].
pub fn upsilon_raw(l: &PolyptychLattice, x: &[i64], y: &[i64]) -> Vec<IVec> {
    let mut out: Vec<IVec> = (0..l.num_charts()).map(|a| add_in_chart_raw(l, x, y, a)).collect();
    out.sort();
    out.dedup();
    out
}

/// Dilation by a nonnegative integer.
pub fn scale(e: &Element, lambda: i64) -> Result<Element> {
    if lambda < 0 {
        return Err(Error::NegativeScalar(lambda));
    }
    let s = Element::new(&e.lat, e.base.iter().map(|x| x * lambda).collect())?;
    debug_assert!((0..e.lat.num_charts()).all(|a| {
        s.chart(a).unwrap() == e.chart(a).unwrap().iter().map(|x| x * lambda).collect::<IVec>()
    }));
    Ok(s)
}

/// The product lattice with charts `I × I'` and block-diagonal mutations.
pub fn product_lattice(l1: &PolyptychLattice, l2: &PolyptychLattice) -> Result<Arc<PolyptychLattice>> {
    let n2 = l2.num_charts();
    let mut charts = Vec::new();
    for a in &l1.charts {
        for b in &l2.charts {
            charts.push(format!("{a}x{b}"));
        }
    }
    let mut given = BTreeMap::new();
    for a1 in 0..l1.num_charts() {
        for a2 in 0..n2 {
            for b1 in 0..l1.num_charts() {
                for b2 in 0..n2 {
                    let m = l1.mutation(a1, b1).product(l2.mutation(a2, b2));
                    given.insert((a1 * n2 + a2, b1 * n2 + b2), m);
                }
            }
        }
    }
    PolyptychLattice::new(l1.rank + l2.rank, charts, l1.base * n2 + l2.base, given)
}
