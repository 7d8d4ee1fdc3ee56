//! H-polyhedra, boundedness, vertex enumeration and lattice-point scans.

use std::collections::BTreeMap;

use super::cone::k_subsets;
use super::lp::{affine_strict_feasible, AffineRow};
use super::rat::{ceil_i64, dot, floor_i64, idot, normalize_ineq, rank, rref, solve, to_int, IVec, RVec, Rat};
use crate::error::{Error, Result};
use num_traits::{Signed, Zero};

/// `{x : ⟨n, x⟩ ≥ t for (n, t) in ineqs, ⟨e, x⟩ = s for (e, s) in eqs}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolyhedron {
    pub dim: usize,
    pub ineqs: Vec<(RVec, Rat)>,
    pub eqs: Vec<(RVec, Rat)>,
}

impl HPolyhedron {
    pub fn new(dim: usize, ineqs: Vec<(RVec, Rat)>, eqs: Vec<(RVec, Rat)>) -> Result<Self> {
        for (n, _) in ineqs.iter().chain(&eqs) {
            if n.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: n.len() });
            }
        }
        Ok(HPolyhedron { dim, ineqs, eqs })
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.ineqs.iter().all(|(n, t)| dot(n, x) >= *t) && self.eqs.iter().all(|(n, t)| dot(n, x) == *t)
    }

    fn rows(&self, strict: bool) -> Vec<AffineRow> {
        self.ineqs
            .iter()
            .map(|(n, t)| AffineRow { normal: n.clone(), threshold: t.clone(), strict })
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        affine_strict_feasible(self.dim, &self.rows(false), &self.eqs).is_none()
    }

    /// A point satisfying every inequality strictly, if one exists.
    pub fn interior_witness(&self) -> Option<RVec> {
        affine_strict_feasible(self.dim, &self.rows(true), &self.eqs)
    }

    /// Same normals, new thresholds.
    pub fn with_thresholds(&self, thresholds: &[Rat]) -> HPolyhedron {
        HPolyhedron {
            dim: self.dim,
            ineqs: self.ineqs.iter().zip(thresholds).map(|((n, _), t)| (n.clone(), t.clone())).collect(),
            eqs: self.eqs.clone(),
        }
    }

    /// Thresholds multiplied by `k` (a `k`-dilate when `k > 0`).
    pub fn scaled(&self, k: i64) -> HPolyhedron {
        let k = Rat::from_integer(k.into());
        HPolyhedron {
            dim: self.dim,
            ineqs: self.ineqs.iter().map(|(n, t)| (n.clone(), t * &k)).collect(),
            eqs: self.eqs.iter().map(|(n, t)| (n.clone(), t * &k)).collect(),
        }
    }

    /// Primitive normals, duplicates merged, redundant inequalities removed one at a time.
    pub fn pruned(&self) -> HPolyhedron {
        let mut best: BTreeMap<IVec, Rat> = BTreeMap::new();
        for (n, t) in &self.ineqs {
            if n.iter().all(|x| x.is_zero()) {
                continue;
            }
            let (p, t) = normalize_ineq(n, t);
            let e = best.entry(p).or_insert_with(|| t.clone());
            if t > *e {
                *e = t;
            }
        }
        let mut ineqs: Vec<(RVec, Rat)> = best
            .into_iter()
            .map(|(p, t)| (p.iter().map(|x| Rat::from_integer((*x).into())).collect(), t))
            .collect();
        let mut i = 0;
        while i < ineqs.len() {
            let mut rows: Vec<AffineRow> = ineqs
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, (n, t))| AffineRow::weak(n.clone(), t.clone()))
                .collect();
            let (n, t) = &ineqs[i];
            rows.push(AffineRow::strict(n.iter().map(|x| -x).collect(), -t));
            if affine_strict_feasible(self.dim, &rows, &self.eqs).is_none() {
                ineqs.remove(i);
            } else {
                i += 1;
            }
        }
        HPolyhedron { dim: self.dim, ineqs, eqs: self.eqs.clone() }
    }
}

/// True iff the recession cone `{x : ⟨n_i, x⟩ ≥ 0, equalities = 0}` is `{0}`.
pub fn is_bounded(p: &HPolyhedron) -> bool {
    let mut rows: Vec<AffineRow> =
        p.ineqs.iter().map(|(n, _)| AffineRow::weak(n.clone(), Rat::zero())).collect();
    let eqs: Vec<(RVec, Rat)> = p.eqs.iter().map(|(n, _)| (n.clone(), Rat::zero())).collect();
    for j in 0..p.dim {
        for s in [1i64, -1] {
            let mut dir = vec![Rat::zero(); p.dim];
            dir[j] = Rat::from_integer(s.into());
            rows.push(AffineRow::strict(dir, Rat::zero()));
            let hit = affine_strict_feasible(p.dim, &rows, &eqs).is_some();
            rows.pop();
            if hit {
                return false;
            }
        }
    }
    true
}

/// Exact extreme points by brute force over dimension-sized subsets of constraints.
pub fn solve_vertices(p: &HPolyhedron) -> Result<Vec<RVec>> {
    for (n, _) in p.ineqs.iter().chain(&p.eqs) {
        if n.len() != p.dim {
            return Err(Error::DimensionMismatch { expected: p.dim, found: n.len() });
        }
    }
    if !is_bounded(p) {
        return Err(Error::Unbounded);
    }
    let q = p.pruned();
    // independent equality rows
    let mut eq_mat: Vec<RVec> = q
        .eqs
        .iter()
        .map(|(n, t)| {
            let mut r = n.clone();
            r.push(t.clone());
            r
        })
        .collect();
    let piv = rref(&mut eq_mat);
    if piv.contains(&q.dim) {
        return Ok(vec![]);
    }
    let eq_rows: Vec<(RVec, Rat)> = eq_mat
        .into_iter()
        .take(piv.len())
        .map(|mut r| {
            let t = r.pop().unwrap();
            (r, t)
        })
        .collect();
    let k = q.dim - eq_rows.len();
    let subsets = k_subsets(q.ineqs.len(), k);
    let cands = crate::par::map(&subsets, |s| {
        let mut a: Vec<RVec> = eq_rows.iter().map(|(n, _)| n.clone()).collect();
        let mut b: RVec = eq_rows.iter().map(|(_, t)| t.clone()).collect();
        for &i in s {
            a.push(q.ineqs[i].0.clone());
            b.push(q.ineqs[i].1.clone());
        }
        let x = solve(&a, &b)?;
        q.contains(&x).then_some(x)
    });
    let mut verts: Vec<RVec> = cands.into_iter().flatten().collect();
    verts.sort();
    verts.dedup();
    Ok(verts)
}

/// A bounded polyhedron with both representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalPolytope {
    h: HPolyhedron,
    vertices: Vec<RVec>,
}

impl ClassicalPolytope {
    pub fn from_h(h: HPolyhedron) -> Result<Self> {
        let vertices = solve_vertices(&h)?;
        let h = h.pruned();
        debug_assert!(vertices.iter().all(|v| h.contains(v)));
        Ok(ClassicalPolytope { h, vertices })
    }

    pub fn h(&self) -> &HPolyhedron {
        &self.h
    }

    pub fn vertices(&self) -> &[RVec] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.h.dim
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.h.contains(x)
    }

    pub fn is_integral(&self) -> bool {
        self.vertices.iter().all(|v| v.iter().all(|x| x.is_integer()))
    }

    /// Affine dimension of the vertex set (−1 when empty).
    pub fn affine_dim(&self) -> isize {
        let Some(v0) = self.vertices.first() else { return -1 };
        let diffs: Vec<RVec> = self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
            .collect();
        if diffs.is_empty() {
            0
        } else {
            rank(&diffs) as isize
        }
    }

    /// Inequalities that are tight on an affinely (dim−1)-dimensional vertex set.
    pub fn facets(&self) -> Vec<(RVec, Rat)> {
        let d = self.affine_dim();
        self.h
            .ineqs
            .iter()
            .filter(|(n, t)| {
                let tight: Vec<&RVec> = self.vertices.iter().filter(|v| dot(n, v) == *t).collect();
                let Some(v0) = tight.first() else { return false };
                let diffs: Vec<RVec> = tight[1..]
                    .iter()
                    .map(|v| v.iter().zip(v0.iter()).map(|(a, b)| a - b).collect())
                    .collect();
                let r = if diffs.is_empty() { 0 } else { rank(&diffs) as isize };
                r == d - 1
            })
            .cloned()
            .collect()
    }
}

/// Integer points by bounding-box scan, in lexicographic order.
pub fn lattice_points(p: &ClassicalPolytope) -> Vec<IVec> {
    if p.vertices.is_empty() {
        return vec![];
    }
    let dim = p.dim();
    if dim == 0 {
        return vec![vec![]];
    }
    let lo: IVec = (0..dim).map(|c| p.vertices.iter().map(|v| ceil_i64(&v[c])).min().unwrap()).collect();
    let hi: IVec = (0..dim).map(|c| p.vertices.iter().map(|v| floor_i64(&v[c])).max().unwrap()).collect();
    let mut ineqs: Vec<(IVec, i64)> = Vec::new();
    for (n, t) in &p.h.ineqs {
        let (pn, pt) = normalize_ineq(n, t);
        ineqs.push((pn, ceil_i64(&pt)));
    }
    let mut eqs: Vec<(IVec, i64)> = Vec::new();
    for (n, t) in &p.h.eqs {
        let (pn, pt) = normalize_ineq(n, t);
        match to_int(&pt) {
            Some(v) => eqs.push((pn, v)),
            None => return vec![],
        }
    }
    if lo.iter().zip(&hi).any(|(a, b)| a > b) {
        return vec![];
    }
    let firsts: Vec<i64> = (lo[0]..=hi[0]).collect();
    crate::par::flat_map(&firsts, |&x0| {
        let mut out = Vec::new();
        let mut x = lo.clone();
        x[0] = x0;
        loop {
            if ineqs.iter().all(|(n, t)| idot(n, &x) >= *t) && eqs.iter().all(|(n, t)| idot(n, &x) == *t) {
                out.push(x.clone());
            }
            let mut i = dim - 1;
            loop {
                if i == 0 {
                    return out;
                }
                if x[i] < hi[i] {
                    x[i] += 1;
                    break;
                }
                x[i] = lo[i];
                i -= 1;
            }
        }
    })
}

/// Whether `x` lies in `p` exactly.
pub fn contains_point(p: &HPolyhedron, x: &[Rat]) -> bool {
    p.contains(x)
}

pub fn nonneg(x: &Rat) -> bool {
    !x.is_negative()
}
