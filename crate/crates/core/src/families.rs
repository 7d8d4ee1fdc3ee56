//! Built-in lattices: the trivial lattice, the rank-2 running example `A1`, and `M_{d,r}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::duality::{DualPair, InverseMap, PointMap};
use crate::error::{Error, Result};
use crate::lattice::{Element, PLMap, PolyptychLattice};
use crate::points::Point;
use crate::polytopes::{build_polytope, PLHalfSpace, PLPolytope};
use crate::polyhedra::rat::{idot, IMat, IVec};
use crate::polyhedra::RationalCone;

/// The lattice `ℤ^r` with a single chart.
pub fn trivial_lattice(r: usize) -> Result<Arc<PolyptychLattice>> {
    if r == 0 {
        return Err(Error::BadParams("rank must be positive".into()));
    }
    PolyptychLattice::new(r, vec!["1".into()], 0, BTreeMap::new())
}

/// `ℤ^r` and its classical dual under the standard inner product.
pub fn trivial_dual(r: usize) -> Result<(Arc<PolyptychLattice>, Arc<PolyptychLattice>, Arc<DualPair>)> {
    let m = trivial_lattice(r)?;
    let n = trivial_lattice(r)?;
    let (m1, n1) = (m.clone(), n.clone());
    let v: PointMap = Arc::new(move |x: &[i64]| Point::from_cone_functionals(&n1, vec![x.to_vec()]).expect("rank"));
    let w: PointMap = Arc::new(move |y: &[i64]| Point::from_cone_functionals(&m1, vec![y.to_vec()]).expect("rank"));
    let inv: InverseMap = Arc::new(|p: &Point| Some(p.cone_functionals()[0].clone()));
    let pair = DualPair::new(m.clone(), n.clone(), v, w, Some(inv.clone()), Some(inv))?;
    Ok((m, n, pair))
}

fn half_planes() -> (RationalCone, RationalCone) {
    let up = RationalCone::new(2, vec![vec![0, 1]], vec![]).expect("rank 2");
    let down = RationalCone::new(2, vec![vec![0, -1]], vec![]).expect("rank 2");
    (up, down)
}

/// The running example: two charts of `ℤ²` glued by `μ(x, y) = (min{0, y} − x, y)` both ways.
pub fn a1_lattice() -> Arc<PolyptychLattice> {
    let (up, down) = half_planes();
    let mu = PLMap::new(2, vec![up, down], vec![vec![vec![-1, 0], vec![0, 1]], vec![vec![-1, 1], vec![0, 1]]])
        .expect("rank 2");
    let mut given = BTreeMap::new();
    given.insert((0, 1), mu.clone());
    given.insert((1, 0), mu);
    PolyptychLattice::new(2, vec!["1".into(), "2".into()], 0, given).expect("valid data")
}

/// The point with `p(e_1) = a`, `p(e_2) = b`, `p(−e_2) = b'` (chart-1 basis), unchecked.
pub fn a1_point_unchecked(lat: &Arc<PolyptychLattice>, a: i64, b: i64, b2: i64) -> Point {
    let (up, _) = half_planes();
    let fan = lat.fan();
    let fns = fan
        .cones
        .iter()
        .map(|c| if c.base == up { vec![a, b] } else { vec![a, -b2] })
        .collect();
    Point::from_cone_functionals(lat, fns).expect("rank 2")
}

/// Points are exactly the triples with `b + b' = min{0, a}`.
pub fn a1_point(lat: &Arc<PolyptychLattice>, a: i64, b: i64, b2: i64) -> Result<Point> {
    if b + b2 != a.min(0) {
        return Err(Error::NotAPoint(format!("{b} + {b2} ≠ min(0, {a})")));
    }
    Ok(a1_point_unchecked(lat, a, b, b2))
}

/// `(a, b, b')` of a point.
pub fn a1_params(p: &Point) -> (i64, i64, i64) {
    (p.eval_base(&[1, 0]), p.eval_base(&[0, 1]), p.eval_base(&[0, -1]))
}

/// The self-pairing `⟨(x,y),(u,v)⟩ = uy + vx − min(0,y)·min(0,v)` on chart-1 coordinates.
pub fn a1_pairing(m: &[i64], n: &[i64]) -> i64 {
    n[0] * m[1] + n[1] * m[0] - m[1].min(0) * n[1].min(0)
}

/// `w(x, y) = (y, x, min{0, y} − x)`, with inverse `(a, b, b') ↦ (b, a)`.
pub fn a1_self_pair(lat: &Arc<PolyptychLattice>) -> Result<Arc<DualPair>> {
    let l1 = lat.clone();
    let map: PointMap = Arc::new(move |m: &[i64]| a1_point(&l1, m[1], m[0], m[1].min(0) - m[0]).expect("point"));
    let inv: InverseMap = Arc::new(|p: &Point| {
        let (a, b, _) = a1_params(p);
        Some(vec![b, a])
    });
    DualPair::new(lat.clone(), lat.clone(), map.clone(), map, Some(inv.clone()), Some(inv))
}

/// Half-space points of the running-example polytope, all at threshold −1.
pub const A1_POLYTOPE_POINTS: [(i64, i64, i64); 3] = [(-1, 0, -1), (0, 1, -1), (1, -1, 1)];

pub fn a1_polytope(lat: &Arc<PolyptychLattice>) -> Result<PLPolytope> {
    let hs = A1_POLYTOPE_POINTS
        .iter()
        .map(|&(a, b, c)| Ok(PLHalfSpace::new(a1_point(lat, a, b, c)?, -1)))
        .collect::<Result<Vec<_>>>()?;
    build_polytope(hs)
}

/// The running example with its self-pairing and polytope. The pair stays registered while held.
#[derive(Debug)]
pub struct A1Example {
    pub lattice: Arc<PolyptychLattice>,
    pub pair: Arc<DualPair>,
    pub polytope: PLPolytope,
}

pub fn a1_example() -> Result<A1Example> {
    let lattice = a1_lattice();
    let pair = a1_self_pair(&lattice)?;
    let polytope = a1_polytope(&lattice)?;
    Ok(A1Example { lattice, pair, polytope })
}

/// An element `(u, w)` of `𝕄_{d,r}`: `min(u) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MdrElement {
    pub u: IVec,
    pub w: IVec,
}

impl MdrElement {
    pub fn new(u: IVec, w: IVec) -> Result<Self> {
        if u.iter().min() != Some(&0) {
            return Err(Error::BadParams(format!("min(u) must be 0, got u = {u:?}")));
        }
        Ok(MdrElement { u, w })
    }

    pub fn zero(d: usize, r: usize) -> Self {
        MdrElement { u: vec![0; d], w: vec![0; r] }
    }

    /// `(u, w)` concatenated.
    pub fn ambient(&self) -> IVec {
        self.u.iter().chain(&self.w).copied().collect()
    }
}

/// A tuple `(a, b)` with `a_1 + ⋯ + a_d = min(b)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TdrPoint {
    pub a: IVec,
    pub b: IVec,
}

impl TdrPoint {
    pub fn new(a: IVec, b: IVec) -> Result<Self> {
        let t = TdrPoint { a, b };
        if !t.is_valid() {
            return Err(Error::NotAPoint(format!("sum(a) ≠ min(b) for {:?}, {:?}", t.a, t.b)));
        }
        Ok(t)
    }

    pub fn is_valid(&self) -> bool {
        self.b.iter().min().copied() == Some(self.a.iter().sum())
    }

    /// `f_{a,b}(u, w) = ⟨a, u⟩ + ⟨b, w⟩`.
    pub fn eval(&self, x: &MdrElement) -> i64 {
        idot(&self.a, &x.u) + idot(&self.b, &x.w)
    }
}

/// `M_{d,r}` together with its coordinate conventions.
///
/// Chart `i` (0-based) has coordinates `(U ∈ ℤ^d, W_j for j ≠ i)`; the ambient form puts `W_i = 0`.
#[derive(Debug, Clone)]
pub struct Mdr {
    pub d: usize,
    pub r: usize,
    pub lattice: Arc<PolyptychLattice>,
    cone_index: Vec<usize>,
}

fn check_params(d: usize, r: usize) -> Result<()> {
    if d < 2 || r < 2 {
        return Err(Error::BadParams(format!("need d, r ≥ 2, got d = {d}, r = {r}")));
    }
    Ok(())
}

/// The cone `C_k = {U_k = min U}` in any chart.
fn mdr_cone(d: usize, r: usize, k: usize) -> RationalCone {
    let rank = d + r - 1;
    let ineqs = (0..d)
        .filter(|&l| l != k)
        .map(|l| {
            let mut v = vec![0; rank];
            v[l] = 1;
            v[k] = -1;
            v
        })
        .collect();
    RationalCone::new(rank, ineqs, vec![]).expect("dimensions agree")
}

/// Chart-`i` coordinates to ambient `(U, W)` with `W_i = 0`.
pub fn chart_to_ambient(d: usize, r: usize, i: usize, v: &[i64]) -> IVec {
    let mut out = v[..d].to_vec();
    let mut it = v[d..].iter();
    for j in 0..r {
        out.push(if j == i { 0 } else { *it.next().expect("rank d+r-1") });
    }
    out
}

/// Ambient `(U, W)` to chart-`i` coordinates, dropping `W_i`.
pub fn ambient_to_chart(d: usize, r: usize, i: usize, x: &[i64]) -> IVec {
    let mut out = x[..d].to_vec();
    out.extend((0..r).filter(|&j| j != i).map(|j| x[d + j]));
    out
}

/// `μ_{i,j}` on the cone `C_k`, as a function of chart-`i` coordinates.
fn mdr_mutation_on(d: usize, r: usize, i: usize, j: usize, k: usize, v: &[i64]) -> IVec {
    let mut x = chart_to_ambient(d, r, i, v);
    let sum_w: i64 = x[d..].iter().sum();
    x[d + i] = x[k] - sum_w;
    x[d + j] = 0;
    ambient_to_chart(d, r, j, &x)
}

fn mdr_mutation(d: usize, r: usize, i: usize, j: usize) -> PLMap {
    let rank = d + r - 1;
    let cones = (0..d).map(|k| mdr_cone(d, r, k)).collect();
    let matrices = (0..d)
        .map(|k| {
            let cols: Vec<IVec> = (0..rank)
                .map(|c| {
                    let mut e = vec![0; rank];
                    e[c] = 1;
                    mdr_mutation_on(d, r, i, j, k, &e)
                })
                .collect();
            (0..rank).map(|row| cols.iter().map(|col| col[row]).collect()).collect::<IMat>()
        })
        .collect();
    PLMap::new(rank, cones, matrices).expect("dimensions agree")
}

/// `M_{d,r}` with `r` charts and linearity cones `C_1, …, C_d`.
pub fn mdr_lattice(d: usize, r: usize) -> Result<Arc<PolyptychLattice>> {
    check_params(d, r)?;
    let mut given = BTreeMap::new();
    for i in 0..r {
        for j in 0..r {
            if i != j {
                given.insert((i, j), mdr_mutation(d, r, i, j));
            }
        }
    }
    PolyptychLattice::new(d + r - 1, (1..=r).map(|i| i.to_string()).collect(), 0, given)
}

/// `φ_i(u, w) = π_i(u + ⟨1,w⟩1, w)` in chart-`i` coordinates.
pub fn mdr_phi(d: usize, r: usize, i: usize, x: &MdrElement) -> IVec {
    let s: i64 = x.w.iter().sum();
    let mut amb: IVec = x.u.iter().map(|u| u + s).collect();
    amb.extend(&x.w);
    debug_assert_eq!(amb.len(), d + r);
    ambient_to_chart(d, r, i, &amb)
}

/// `φ_i^{-1}(U, W) = (U − min U·1, W + (min U − ⟨1,W⟩)ε_i)`.
pub fn mdr_phi_inv(d: usize, r: usize, i: usize, v: &[i64]) -> MdrElement {
    let amb = chart_to_ambient(d, r, i, v);
    let m = *amb[..d].iter().min().expect("d ≥ 1");
    let u = amb[..d].iter().map(|x| x - m).collect();
    let mut w: IVec = amb[d..].to_vec();
    let s: i64 = w.iter().sum();
    w[i] += m - s;
    MdrElement { u, w }
}

impl Mdr {
    pub fn new(d: usize, r: usize) -> Result<Self> {
        let lattice = mdr_lattice(d, r)?;
        let fan = lattice.fan();
        let cone_index = (0..d)
            .map(|k| fan.position(&mdr_cone(d, r, k)).expect("Σ consists of the cones C_k"))
            .collect();
        Ok(Mdr { d, r, lattice, cone_index })
    }

    pub fn rank(&self) -> usize {
        self.d + self.r - 1
    }

    /// Index in Σ of the cone `C_k` (0-based `k`).
    pub fn cone_index(&self, k: usize) -> usize {
        self.cone_index[k]
    }

    pub fn element(&self, x: &MdrElement) -> Element {
        Element::new(&self.lattice, mdr_phi(self.d, self.r, 0, x)).expect("rank")
    }

    pub fn mdr_element(&self, e: &Element) -> MdrElement {
        mdr_phi_inv(self.d, self.r, 0, e.base_coords())
    }

    pub fn from_base(&self, x: &[i64]) -> MdrElement {
        mdr_phi_inv(self.d, self.r, 0, x)
    }

    /// The point `f_{a,b}`; its restriction to `C_k` in base coordinates is
    /// `⟨a, U⟩ + Σ_{j≠1} (b_j − b_1) W_j + (b_1 − Σa) U_k`.
    pub fn point(&self, t: &TdrPoint) -> Result<Point> {
        if t.a.len() != self.d || t.b.len() != self.r {
            return Err(Error::ParamMismatch);
        }
        if !t.is_valid() {
            return Err(Error::NotAPoint(format!("sum(a) ≠ min(b) for {:?}, {:?}", t.a, t.b)));
        }
        Ok(self.point_unchecked(t))
    }

    pub fn point_unchecked(&self, t: &TdrPoint) -> Point {
        let sa: i64 = t.a.iter().sum();
        let mut fns = vec![vec![]; self.d];
        for k in 0..self.d {
            let mut f = t.a.clone();
            f.extend((1..self.r).map(|j| t.b[j] - t.b[0]));
            f[k] += t.b[0] - sa;
            fns[self.cone_index[k]] = f;
        }
        Point::from_cone_functionals(&self.lattice, fns).expect("rank")
    }

    /// `(a, b)` with `a_j = f(ε_j, 0)` and `b_i = f(0, ε_i)`.
    pub fn tuple_of(&self, p: &Point) -> TdrPoint {
        let a = (0..self.d)
            .map(|j| {
                let mut u = vec![0; self.d];
                u[j] = 1;
                p.eval_base(&mdr_phi(self.d, self.r, 0, &MdrElement { u, w: vec![0; self.r] }))
            })
            .collect();
        let b = (0..self.r)
            .map(|i| {
                let mut w = vec![0; self.r];
                w[i] = 1;
                p.eval_base(&mdr_phi(self.d, self.r, 0, &MdrElement { u: vec![0; self.d], w }))
            })
            .collect();
        TdrPoint { a, b }
    }

    /// Chart-`i` coordinates in the ambient `(u, w)` notation with `w_i = 0`.
    pub fn ambient_chart(&self, e: &Element, i: usize) -> Result<IVec> {
        Ok(chart_to_ambient(self.d, self.r, i, &e.chart(i)?))
    }
}

/// `v_{d,r}(u, w) = (w, u + ⟨1,w⟩1) ∈ T_{r,d}`.
pub fn mdr_v(x: &MdrElement) -> TdrPoint {
    let s: i64 = x.w.iter().sum();
    TdrPoint { a: x.w.clone(), b: x.u.iter().map(|u| u + s).collect() }
}

/// `(a, b) ↦ (b − min(b)1, a)`.
pub fn mdr_v_inv(t: &TdrPoint) -> MdrElement {
    let m = *t.b.iter().min().expect("nonempty");
    MdrElement { u: t.b.iter().map(|x| x - m).collect(), w: t.a.clone() }
}

/// `(M_{d,r}, M_{r,d}, v_{d,r}, v_{r,d})`.
#[derive(Debug, Clone)]
pub struct MdrDual {
    pub m: Mdr,
    pub n: Mdr,
    pub pair: Arc<DualPair>,
}

pub fn mdr_dual_pair(d: usize, r: usize) -> Result<MdrDual> {
    let m = Mdr::new(d, r)?;
    let n = Mdr::new(r, d)?;
    let (m1, n1, m2, n2) = (m.clone(), n.clone(), m.clone(), n.clone());
    let v: PointMap = Arc::new(move |x: &[i64]| n1.point_unchecked(&mdr_v(&m1.from_base(x))));
    let w: PointMap = Arc::new(move |y: &[i64]| m2.point_unchecked(&mdr_v(&n2.from_base(y))));
    let (m3, n3, m4, n4) = (m.clone(), n.clone(), m.clone(), n.clone());
    let v_inv: InverseMap = Arc::new(move |p: &Point| {
        let t = n3.tuple_of(p);
        t.is_valid().then(|| mdr_phi(m3.d, m3.r, 0, &mdr_v_inv(&t)))
    });
    let w_inv: InverseMap = Arc::new(move |p: &Point| {
        let t = m4.tuple_of(p);
        t.is_valid().then(|| mdr_phi(n4.d, n4.r, 0, &mdr_v_inv(&t)))
    });
    let pair = DualPair::new(m.lattice.clone(), n.lattice.clone(), v, w, Some(v_inv), Some(w_inv))?;
    Ok(MdrDual { m, n, pair })
}

/// The generator set `S^{(1)}` in chart-1 coordinates of `M_{r,d}`:
/// `(ε_j, 0)` for `j ∈ [r]`, `±(1, 0)` and `±(1, ε_k)` for `k = 2..d`.
pub fn mdr_gf_generators(d: usize, r: usize) -> Vec<IVec> {
    let rank = d + r - 1;
    let mut s = Vec::new();
    for j in 0..r {
        let mut v = vec![0; rank];
        v[j] = 1;
        s.push(v);
    }
    let mut ones = vec![0; rank];
    ones[..r].iter_mut().for_each(|x| *x = 1);
    s.push(ones.clone());
    s.push(ones.iter().map(|x| -x).collect());
    for k in 1..d {
        let mut v = ones.clone();
        v[r + k - 1] = 1;
        s.push(v.clone());
        s.push(v.iter().map(|x| -x).collect());
    }
    s
}

/// `P = ⋂_{n ∈ S} H_{v_{r,d}(n), −1}` in `M_{d,r}`.
pub fn mdr_gf_polytope(dual: &MdrDual) -> Result<PLPolytope> {
    let n = &dual.n;
    let hs = mdr_gf_generators(dual.m.d, dual.m.r)
        .iter()
        .map(|c| {
            let base = n.lattice.from_chart(c, 0);
            PLHalfSpace::new(dual.pair.w(&base), -1)
        })
        .collect();
    build_polytope(hs)
}

/// The constraint matrix of `π_1(P) ∩ C_k`, columns `(u_1..u_d, w_1, w_2..w_r)`.
pub fn mdr_tu_matrix(d: usize, r: usize, k: usize) -> IMat {
    let cols = d + r;
    let mut rows = Vec::new();
    let unit = |c: usize, s: i64| {
        let mut v = vec![0; cols];
        v[c] = s;
        v
    };
    for j in 0..d {
        rows.push(unit(j, 1));
    }
    for j in 0..d {
        rows.push(unit(j, -1));
    }
    let mut row = unit(k, 1);
    for c in d + 1..cols {
        row[c] = -1;
    }
    rows.push(row);
    for c in d + 1..cols {
        rows.push(unit(c, 1));
    }
    for j in 0..d {
        let mut v = vec![0; cols];
        v[j] += 1;
        v[k] -= 1;
        rows.push(v);
    }
    rows.push(unit(d, 1));
    rows.push(unit(d, -1));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_coordinates_round_trip() {
        let x = vec![3, 1, 4, 1, 5];
        for i in 0..3 {
            let c = ambient_to_chart(2, 3, i, &x);
            assert_eq!(c.len(), 4);
            let mut back = x.clone();
            back[2 + i] = 0;
            assert_eq!(chart_to_ambient(2, 3, i, &c), back);
        }
    }

    #[test]
    fn mutation_on_a_cone() {
        // (U, W) = ((2, 1), (0, 1)) in chart 1 goes to ((2, 1), (0, ·)) in chart 2
        assert_eq!(mdr_mutation_on(2, 2, 0, 1, 1, &[2, 1, 1]), vec![2, 1, 0]);
        assert!(mdr_cone(2, 2, 0).contains(&[0, 5, 9]));
        assert!(!mdr_cone(2, 2, 0).contains(&[1, 0, 0]));
    }

    #[test]
    fn parameters() {
        assert!(check_params(2, 2).is_ok());
        assert!(check_params(1, 3).is_err());
    }
}
