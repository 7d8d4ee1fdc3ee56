//! Rational polyhedral cones and classical fans.

use std::sync::OnceLock;

use super::lp::{affine_strict_feasible, AffineRow};
use super::rat::{
    dot_ir, idot, integer_kernel, inverse, primitive, primitive_int, rank_int, rmat, rvec, solve,
    vec_mat, IMat, IVec, RVec, Rat,
};
use crate::error::{Error, Result};
use num_traits::{Signed, Zero};

/// Generating data of a cone: extreme rays of the pointed part, a ℤ-basis of the
/// lineality lattice, and a finite generating set of the monoid `C ∩ ℤⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeGenerators {
    pub rays: Vec<IVec>,
    pub lineality: Vec<IVec>,
    pub monoid: Vec<IVec>,
}

/// The cone `{x : ⟨n, x⟩ ≥ 0 for n in ineqs, ⟨e, x⟩ = 0 for e in eqs}` with integer normals.
///
/// Inequalities are stored primitive, irredundant and sorted, so equal cones compare equal.
#[derive(Debug, Clone)]
pub struct RationalCone {
    dim: usize,
    ineqs: Vec<IVec>,
    eqs: Vec<IVec>,
    gens: OnceLock<ConeGenerators>,
}

impl PartialEq for RationalCone {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.ineqs == other.ineqs && self.eqs == other.eqs
    }
}

impl Eq for RationalCone {}

fn rows_for(dim: usize, ineqs: &[IVec], eqs: &[IVec], strict: bool) -> (Vec<AffineRow>, Vec<(RVec, Rat)>) {
    let rows = ineqs
        .iter()
        .map(|n| AffineRow { normal: rvec(n), threshold: Rat::zero(), strict })
        .collect();
    let eqs = eqs.iter().map(|e| (rvec(e), Rat::zero())).collect();
    let _ = dim;
    (rows, eqs)
}

impl RationalCone {
    /// Builds a cone, normalizing and pruning redundant inequalities.
    pub fn new(dim: usize, ineqs: Vec<IVec>, eqs: Vec<IVec>) -> Result<Self> {
        for v in ineqs.iter().chain(&eqs) {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
            }
        }
        let mut ins: Vec<IVec> = ineqs
            .into_iter()
            .filter(|n| n.iter().any(|x| *x != 0))
            .map(|n| primitive_int(&n))
            .collect();
        ins.sort();
        ins.dedup();
        let mut eqs: Vec<IVec> = eqs
            .into_iter()
            .filter(|n| n.iter().any(|x| *x != 0))
            .map(|n| super::rat::canonical_sign(primitive_int(&n)))
            .collect();
        eqs.sort();
        eqs.dedup();
        // drop inequalities implied by the remaining ones, one at a time
        let mut i = 0;
        while i < ins.len() && ins.len() > 1 {
            let mut rest: Vec<IVec> = ins.clone();
            let n = rest.remove(i);
            let (mut rows, eq_rows) = rows_for(dim, &rest, &eqs, false);
            rows.push(AffineRow::strict(rvec(&n.iter().map(|x| -x).collect::<IVec>()), Rat::zero()));
            if affine_strict_feasible(dim, &rows, &eq_rows).is_none() {
                ins.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(RationalCone { dim, ineqs: ins, eqs, gens: OnceLock::new() })
    }

    /// The whole space.
    pub fn whole(dim: usize) -> Self {
        RationalCone { dim, ineqs: vec![], eqs: vec![], gens: OnceLock::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ineqs(&self) -> &[IVec] {
        &self.ineqs
    }

    pub fn eqs(&self) -> &[IVec] {
        &self.eqs
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.ineqs.iter().all(|n| idot(n, x) >= 0) && self.eqs.iter().all(|n| idot(n, x) == 0)
    }

    pub fn contains_rat(&self, x: &[Rat]) -> bool {
        self.ineqs.iter().all(|n| !dot_ir(n, x).is_negative())
            && self.eqs.iter().all(|n| dot_ir(n, x).is_zero())
    }

    /// Whether `x` satisfies every inequality strictly.
    pub fn contains_strictly(&self, x: &[i64]) -> bool {
        self.ineqs.iter().all(|n| idot(n, x) > 0) && self.eqs.iter().all(|n| idot(n, x) == 0)
    }

    /// A rational point in the relative interior (all inequalities strict), if any.
    pub fn interior_witness(&self) -> Option<RVec> {
        let (rows, eqs) = rows_for(self.dim, &self.ineqs, &self.eqs, true);
        affine_strict_feasible(self.dim, &rows, &eqs)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.eqs.is_empty() && (self.ineqs.is_empty() || self.interior_witness().is_some())
    }

    /// A primitive integer point with every inequality strict.
    pub fn interior_point(&self) -> Option<IVec> {
        if self.ineqs.is_empty() {
            return Some(vec![0; self.dim]);
        }
        self.interior_witness().map(|x| primitive(&x))
    }

    pub fn intersect(&self, other: &RationalCone) -> Result<RationalCone> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        RationalCone::new(
            self.dim,
            self.ineqs.iter().chain(&other.ineqs).cloned().collect(),
            self.eqs.iter().chain(&other.eqs).cloned().collect(),
        )
    }

    /// `{x : m x ∈ self}` for a square integer matrix `m`.
    pub fn preimage(&self, m: &IMat) -> RationalCone {
        let ins = self.ineqs.iter().map(|n| vec_mat(n, m)).collect();
        let eqs = self.eqs.iter().map(|n| vec_mat(n, m)).collect();
        RationalCone::new(self.dim, ins, eqs).expect("dimensions agree")
    }

    /// `m(self)` for an invertible integer matrix `m`.
    pub fn image(&self, m: &IMat) -> RationalCone {
        let inv = inverse(&rmat(m)).expect("linear image under a singular matrix");
        let map = |n: &IVec| -> IVec {
            let row: RVec = (0..self.dim)
                .map(|j| (0..self.dim).fold(Rat::zero(), |acc, i| acc + &inv[i][j] * Rat::from_integer(n[i].into())))
                .collect();
            primitive(&row)
        };
        let ins = self.ineqs.iter().map(map).collect();
        let eqs = self.eqs.iter().map(map).collect();
        RationalCone::new(self.dim, ins, eqs).expect("dimensions agree")
    }

    pub fn generators(&self) -> &ConeGenerators {
        self.gens.get_or_init(|| compute_generators(self))
    }

    /// `dim` linearly independent lattice vectors of the cone (full-dimensional cones only).
    pub fn lattice_basis(&self) -> Option<Vec<IVec>> {
        let mut basis: Vec<IVec> = Vec::new();
        let g = self.generators();
        let pool = g.lineality.iter().chain(&g.rays).chain(&g.monoid);
        for v in pool {
            let mut trial = basis.clone();
            trial.push(v.clone());
            if rank_int(&trial) == trial.len() {
                basis = trial;
                if basis.len() == self.dim {
                    break;
                }
            }
        }
        (basis.len() == self.dim).then_some(basis)
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.ineqs.iter().map(|n| format!("{:?}·x ≥ 0", n)).collect();
        parts.extend(self.eqs.iter().map(|n| format!("{:?}·x = 0", n)));
        if parts.is_empty() {
            "everything".to_string()
        } else {
            parts.join(", ")
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub(crate) fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    subsets(n, k)
}

fn compute_generators(c: &RationalCone) -> ConeGenerators {
    let dim = c.dim;
    let all: Vec<IVec> = c.ineqs.iter().chain(&c.eqs).cloned().collect();
    let lineality = integer_kernel(&all, dim);
    let mut equations: Vec<IVec> = c.eqs.clone();
    equations.extend(lineality.iter().cloned());
    let r_eq = rank_int(&equations);
    let mut rays: Vec<IVec> = Vec::new();
    if r_eq < dim {
        let k = dim - 1 - r_eq;
        for s in subsets(c.ineqs.len(), k) {
            let mut rows: Vec<IVec> = equations.clone();
            rows.extend(s.iter().map(|&i| c.ineqs[i].clone()));
            if rank_int(&rows) != dim - 1 {
                continue;
            }
            let ns = super::rat::nullspace(&rmat(&rows), dim);
            let r = primitive(&ns[0]);
            let neg: IVec = r.iter().map(|x| -x).collect();
            for cand in [r, neg] {
                if c.ineqs.iter().all(|n| idot(n, &cand) >= 0) && !rays.contains(&cand) {
                    rays.push(cand);
                }
            }
        }
    }
    rays.sort();
    let mut monoid: Vec<IVec> = rays.clone();
    for l in &lineality {
        monoid.push(l.clone());
        monoid.push(l.iter().map(|x| -x).collect());
    }
    let p = dim - r_eq;
    let span_dim = p + lineality.len();
    for t in subsets(rays.len(), p) {
        let mut gens: Vec<IVec> = t.iter().map(|&i| rays[i].clone()).collect();
        gens.extend(lineality.iter().cloned());
        if rank_int(&gens) != span_dim {
            continue;
        }
        for x in parallelepiped_points(dim, &gens) {
            if x.iter().any(|v| *v != 0) && !monoid.contains(&x) {
                monoid.push(x);
            }
        }
    }
    monoid.sort();
    ConeGenerators { rays, lineality, monoid }
}

/// Lattice points of `{Σ λ_i g_i : 0 ≤ λ_i < 1}` for linearly independent `g_i`.
fn parallelepiped_points(dim: usize, gens: &[IVec]) -> Vec<IVec> {
    let k = gens.len();
    if k == 0 {
        return vec![];
    }
    // choose k coordinates on which the generators are independent
    let cols: Vec<IVec> = (0..dim).map(|c| gens.iter().map(|g| g[c]).collect()).collect();
    let mut chosen: Vec<usize> = Vec::new();
    for c in 0..dim {
        let mut trial: Vec<IVec> = chosen.iter().map(|&i| cols[i].clone()).collect();
        trial.push(cols[c].clone());
        if rank_int(&trial) == trial.len() {
            chosen.push(c);
            if chosen.len() == k {
                break;
            }
        }
    }
    let sub: Vec<RVec> = chosen.iter().map(|&c| rvec(&cols[c])).collect();
    let lo: IVec = (0..dim).map(|c| gens.iter().map(|g| g[c].min(0)).sum()).collect();
    let hi: IVec = (0..dim).map(|c| gens.iter().map(|g| g[c].max(0)).sum()).collect();
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        let rhs: RVec = chosen.iter().map(|&c| Rat::from_integer(x[c].into())).collect();
        if let Some(lambda) = solve(&sub, &rhs) {
            let ok_range = lambda.iter().all(|l| !l.is_negative() && *l < Rat::from_integer(1.into()));
            if ok_range {
                let back: IVec = (0..dim)
                    .map(|c| {
                        let v = lambda
                            .iter()
                            .zip(gens)
                            .fold(Rat::zero(), |acc, (l, g)| acc + l * Rat::from_integer(g[c].into()));
                        super::rat::to_int(&v).unwrap_or(i64::MIN)
                    })
                    .collect();
                if back == x {
                    out.push(x.clone());
                }
            }
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == dim {
                return out;
            }
            if x[i] < hi[i] {
                x[i] += 1;
                break;
            }
            x[i] = lo[i];
            i += 1;
        }
    }
}

/// A finite collection of maximal cones in a common ambient space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalFan {
    pub dim: usize,
    pub cones: Vec<RationalCone>,
}

impl ClassicalFan {
    pub fn new(dim: usize, cones: Vec<RationalCone>) -> Result<Self> {
        if let Some(c) = cones.iter().find(|c| c.dim != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: c.dim });
        }
        Ok(ClassicalFan { dim, cones })
    }

    pub fn trivial(dim: usize) -> Self {
        ClassicalFan { dim, cones: vec![RationalCone::whole(dim)] }
    }

    /// Index of the first cone containing `x`.
    pub fn locate(&self, x: &[i64]) -> Option<usize> {
        self.cones.iter().position(|c| c.contains(x))
    }

    /// Completeness by ray shooting: every facet of every cone must be crossed into another cone.
    pub fn is_complete(&self) -> bool {
        if self.cones.is_empty() {
            return false;
        }
        for (ci, c) in self.cones.iter().enumerate() {
            if !c.is_full_dimensional() {
                return false;
            }
            for (fi, f) in c.ineqs.iter().enumerate() {
                let mut rows: Vec<AffineRow> = c
                    .ineqs
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != fi)
                    .map(|(_, n)| AffineRow::strict(rvec(n), Rat::zero()))
                    .collect();
                rows.push(AffineRow::weak(rvec(f), Rat::zero()));
                let Some(x) = affine_strict_feasible(self.dim, &rows, &[(rvec(f), Rat::zero())]) else {
                    continue;
                };
                let x = primitive(&x);
                let crossed = self.cones.iter().enumerate().any(|(di, d)| {
                    di != ci
                        && d.contains(&x)
                        && d.ineqs.iter().all(|g| idot(g, &x) > 0 || idot(g, f) <= 0)
                });
                if !crossed {
                    return false;
                }
            }
        }
        true
    }
}

/// Full-dimensional pairwise intersections, folded over the list, in lexicographic cone order.
pub fn common_refinement(fans: &[ClassicalFan]) -> Result<ClassicalFan> {
    let Some(first) = fans.first() else {
        return Err(Error::IncompatibleFans);
    };
    if fans.iter().any(|f| f.dim != first.dim) {
        return Err(Error::IncompatibleFans);
    }
    let mut acc = first.cones.clone();
    for f in &fans[1..] {
        let pairs: Vec<(usize, usize)> = (0..acc.len())
            .flat_map(|i| (0..f.cones.len()).map(move |j| (i, j)))
            .collect();
        let next = crate::par::map(&pairs, |&(i, j)| {
            let c = acc[i].intersect(&f.cones[j]).ok()?;
            c.is_full_dimensional().then_some(c)
        });
        let mut cones: Vec<RationalCone> = Vec::new();
        for c in next.into_iter().flatten() {
            if !cones.contains(&c) {
                cones.push(c);
            }
        }
        acc = cones;
    }
    Ok(ClassicalFan { dim: first.dim, cones: acc })
}

/// Evaluates an integer functional on a rational vector.
pub fn eval_functional(f: &[i64], x: &[Rat]) -> Rat {
    dot_ir(f, x)
}
