//! Detropicalizations: algebras with a convex adapted basis indexed by lattice elements,
//! the semialgebra-valued valuation, full-rank lex valuations, their rank-one combinators
//! and level spaces `Γ(A, kP)`.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::duality::{preimage_cone, DualPair};
use crate::error::{Error, Result};
use crate::families::{a1_example, mdr_dual_pair, mdr_v, A1Example, MdrDual, MdrElement, TdrPoint};
use crate::lattice::{Element, PolyptychLattice, Side};
use crate::points::{normalize, Point, SElem};
use crate::polyhedra::rat::{rank_int, IVec, Rat};
use crate::polytopes::{p_conv, pl_lattice_points, scale_polytope, PConv, PLPolytope};

/// A finite ℚ-combination of basis elements; no zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement<K: Ord> {
    terms: BTreeMap<K, Rat>,
}

impl<K: Ord + Clone> AlgebraElement<K> {
    pub fn zero() -> Self {
        AlgebraElement { terms: BTreeMap::new() }
    }

    pub fn basis(k: K) -> Self {
        Self::term(k, Rat::one())
    }

    pub fn term(k: K, c: Rat) -> Self {
        let mut e = Self::zero();
        e.add_term(k, c);
        e
    }

    pub fn add_term(&mut self, k: K, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k.clone()).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> &BTreeMap<K, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn keys(&self) -> Vec<K> {
        self.terms.keys().cloned().collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero();
        for (k, x) in &self.terms {
            out.add_term(k.clone(), x * c);
        }
        out
    }
}

/// An algebra with a basis in bijection with the elements of a lattice `M` carrying a strict dual.
pub trait Detropicalization: Sync {
    type Key: Clone + Ord + Debug + Send + Sync;

    /// The lattice indexing the basis.
    fn lattice(&self) -> &Arc<PolyptychLattice>;
    /// The dual pair with `M` on its `M` side; basis values are `v(m)`.
    fn pair(&self) -> &Arc<DualPair>;
    fn element(&self, k: &Self::Key) -> Element;
    fn key(&self, e: &Element) -> Self::Key;
    /// Product of two basis elements in the basis.
    fn mul_basis(&self, a: &Self::Key, b: &Self::Key) -> AlgebraElement<Self::Key>;
    fn one(&self) -> Self::Key;
}

/// Bilinear extension of the basis product.
pub fn alg_mul<D: Detropicalization>(
    alg: &D,
    f: &AlgebraElement<D::Key>,
    g: &AlgebraElement<D::Key>,
) -> AlgebraElement<D::Key> {
    let mut out = AlgebraElement::zero();
    for (a, x) in &f.terms {
        for (b, y) in &g.terms {
            let c = x * y;
            for (k, z) in alg.mul_basis(a, b).terms {
                out.add_term(k, &c * z);
            }
        }
    }
    out
}

/// `⊕` of the basis values over the support, normalized; `∞` for zero.
pub fn valuate<D: Detropicalization>(alg: &D, f: &AlgebraElement<D::Key>) -> Result<SElem> {
    let members: Vec<Element> = f.terms.keys().map(|k| alg.element(k)).collect();
    normalize(&SElem::from_elements(members))
}

/// The basis values `v(m)` of the support as points of the dual lattice.
pub fn value_points<D: Detropicalization>(alg: &D, f: &AlgebraElement<D::Key>) -> Vec<Point> {
    f.terms.keys().map(|k| alg.pair().v(alg.element(k).base_coords())).collect()
}

/// The Σ(N) cone `C_α = w^{-1}(Sp(M, α))`.
pub fn chart_cone<D: Detropicalization>(alg: &D, a: usize) -> Result<usize> {
    preimage_cone(alg.pair(), Side::N, a).ok_or_else(|| Error::UnknownChart(a.to_string()))
}

/// `ρ̃_j = w^{-1}(e_j^α)` where `e_j^α` is the `j`-th coordinate functional of chart α; with this
/// basis the value of `b_m` is exactly `π_α(m)`.
pub fn standard_rho<D: Detropicalization>(alg: &D, a: usize) -> Result<Vec<IVec>> {
    let m = alg.lattice();
    if a >= m.num_charts() {
        return Err(Error::UnknownChart(a.to_string()));
    }
    (0..m.rank())
        .map(|j| {
            let q = Point::from_fn(m, |x| m.to_chart(x, a)[j])?;
            alg.pair()
                .w_inverse(&q)
                .ok_or_else(|| Error::BadBasis(format!("coordinate functional {j} of chart {a} has no preimage")))
        })
        .collect()
}

fn check_rho<D: Detropicalization>(alg: &D, a: usize, rho: &[IVec]) -> Result<()> {
    let n = alg.pair().n();
    if rho.len() != n.rank() || rho.iter().any(|v| v.len() != n.rank()) {
        return Err(Error::BadBasis(format!("need {} vectors of length {}", n.rank(), n.rank())));
    }
    if rank_int(rho) != rho.len() {
        return Err(Error::BadBasis("vectors are linearly dependent".into()));
    }
    let c = &n.fan().cones[chart_cone(alg, a)?].base;
    if let Some(v) = rho.iter().find(|v| !c.contains(v)) {
        return Err(Error::BadBasis(format!("{v:?} lies outside the cone of chart {a}")));
    }
    Ok(())
}

fn basis_tuple<D: Detropicalization>(alg: &D, k: &D::Key, rho: &[IVec]) -> IVec {
    let p = alg.pair().v(alg.element(k).base_coords());
    rho.iter().map(|y| p.eval_base(y)).collect()
}

/// `v_{α,ρ̃}(f)`: the lex-minimal tuple `(v(m)(ρ̃_1), …)` over the support; `None` for zero.
pub fn full_rank_valuation<D: Detropicalization>(
    alg: &D,
    f: &AlgebraElement<D::Key>,
    a: usize,
    rho: &[IVec],
) -> Result<Option<IVec>> {
    check_rho(alg, a, rho)?;
    let mut tuples: Vec<IVec> = f.terms.keys().map(|k| basis_tuple(alg, k, rho)).collect();
    tuples.sort();
    if tuples.len() > 1 && tuples[0] == tuples[1] {
        return Err(Error::Tie);
    }
    Ok(tuples.into_iter().next())
}

/// A rank-one valuation on the adapted basis: `b_m ↦ v(m)(ρ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rank1Valuation {
    pub rho: IVec,
}

impl Rank1Valuation {
    pub fn on_basis<D: Detropicalization>(&self, alg: &D, k: &D::Key) -> i64 {
        alg.pair().v(alg.element(k).base_coords()).eval_base(&self.rho)
    }

    /// `min` over the support; `None` for zero.
    pub fn value<D: Detropicalization>(&self, alg: &D, f: &AlgebraElement<D::Key>) -> Option<i64> {
        f.terms.keys().map(|k| self.on_basis(alg, k)).min()
    }
}

/// The coordinate rank-one valuations `v_{α,ρ̃,j}`.
pub fn coordinate_valuations(rho: &[IVec]) -> Vec<Rank1Valuation> {
    rho.iter().map(|r| Rank1Valuation { rho: r.clone() }).collect()
}

/// `⊛`: lex-minimal component tuple over the support.
pub fn circledast<D: Detropicalization>(
    alg: &D,
    vals: &[Rank1Valuation],
    f: &AlgebraElement<D::Key>,
) -> Option<IVec> {
    f.terms.keys().map(|k| vals.iter().map(|v| v.on_basis(alg, k)).collect::<IVec>()).min()
}

/// `⊞`: minimal component sum over the support.
pub fn boxplus<D: Detropicalization>(alg: &D, vals: &[Rank1Valuation], f: &AlgebraElement<D::Key>) -> Option<i64> {
    f.terms.keys().map(|k| vals.iter().map(|v| v.on_basis(alg, k)).sum::<i64>()).min()
}

/// Graded dimensions of `gr_⊞` and `gr_⊛` on a finite basis set: `⊞` counts per total degree
/// and `⊛` counts per tuple.
pub fn graded_tables<D: Detropicalization>(
    alg: &D,
    vals: &[Rank1Valuation],
    keys: &[D::Key],
) -> (BTreeMap<i64, usize>, BTreeMap<IVec, usize>) {
    let mut by_sum = BTreeMap::new();
    let mut by_tuple = BTreeMap::new();
    for k in keys {
        let t: IVec = vals.iter().map(|v| v.on_basis(alg, k)).collect();
        *by_sum.entry(t.iter().sum()).or_insert(0) += 1;
        *by_tuple.entry(t).or_insert(0) += 1;
    }
    (by_sum, by_tuple)
}

/// The support of `f` and its point-convex hull.
pub struct Support<'a, K> {
    pub keys: Vec<K>,
    pub hull: Option<PConv<'a>>,
}

pub fn support<'a, D: Detropicalization>(alg: &'a D, f: &AlgebraElement<D::Key>) -> Result<Support<'a, D::Key>> {
    let keys = f.keys();
    if keys.is_empty() {
        return Ok(Support { keys, hull: None });
    }
    let elems: Vec<Element> = keys.iter().map(|k| alg.element(k)).collect();
    let hull = p_conv(&elems, alg.pair())?;
    Ok(Support { keys, hull: Some(hull) })
}

/// A basis of `Γ(A, kP)`: the basis elements whose keys lie in `kP`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSpace<K> {
    pub k: i64,
    pub basis: Vec<K>,
}

impl<K> LevelSpace<K> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn level_space<D: Detropicalization>(alg: &D, p: &PLPolytope, k: i64) -> Result<LevelSpace<D::Key>> {
    if !Arc::ptr_eq(p.lattice(), alg.lattice()) {
        return Err(Error::LatticeMismatch);
    }
    if p.halfspaces().iter().any(|h| h.threshold >= 0) {
        return Err(Error::OriginNotInterior);
    }
    let kp = scale_polytope(p, k)?;
    let basis = pl_lattice_points(&kp)?.iter().map(|e| alg.key(e)).collect();
    Ok(LevelSpace { k, basis })
}

/// Per-level comparison of valuation values against lattice points of `k·π_α(P)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoBodyLevel {
    pub k: i64,
    pub values: usize,
    pub lattice_points: usize,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoBodyReport {
    pub chart: usize,
    pub levels: Vec<NoBodyLevel>,
}

impl NoBodyReport {
    pub fn passed(&self) -> bool {
        self.levels.iter().all(|l| l.equal)
    }
}

/// For `k ≤ k_max`: `{v_{α,ρ̃}(b) : b ∈ Γ(A, kP)}` versus `k·π_α(P) ∩ ℤ^r`, with the standard `ρ̃`.
pub fn no_body_check<D: Detropicalization>(alg: &D, p: &PLPolytope, a: usize, k_max: i64) -> Result<NoBodyReport> {
    let rho = standard_rho(alg, a)?;
    check_rho(alg, a, &rho)?;
    let mut levels = Vec::new();
    for k in 0..=k_max {
        let level = level_space(alg, p, k)?;
        let mut values: Vec<IVec> = crate::par::map(&level.basis, |b| basis_tuple(alg, b, &rho));
        values.sort();
        values.dedup();
        let kp = scale_polytope(p, k)?;
        let pts = crate::polyhedra::lattice_points(kp.chart_image(a));
        levels.push(NoBodyLevel { k, values: values.len(), lattice_points: pts.len(), equal: values == pts });
    }
    Ok(NoBodyReport { chart: a, levels })
}

/// `A_{d,r} = ℚ[x_1..x_d, t_1^{±1}..t_r^{±1}] / (x_1⋯x_d − t_1 − ⋯ − t_r)` with basis
/// `x^u t^w`, `min(u) = 0`.
#[derive(Debug, Clone)]
pub struct Adr {
    pub dual: MdrDual,
}

fn multinomials(n: u32, parts: usize) -> Vec<(IVec, BigInt)> {
    fn rec(n: u32, parts: usize, cur: &mut IVec, out: &mut Vec<IVec>) {
        if parts == 1 {
            cur.push(n as i64);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=n).rev() {
            cur.push(k as i64);
            rec(n - k, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut exps = Vec::new();
    rec(n, parts, &mut Vec::new(), &mut exps);
    let fact = |k: i64| (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
    exps.into_iter()
        .map(|e| {
            let c = e.iter().fold(fact(n as i64), |acc, &k| acc / fact(k));
            (e, c)
        })
        .collect()
}

impl Adr {
    pub fn new(d: usize, r: usize) -> Result<Self> {
        Ok(Adr { dual: mdr_dual_pair(d, r)? })
    }

    pub fn d(&self) -> usize {
        self.dual.m.d
    }

    pub fn r(&self) -> usize {
        self.dual.m.r
    }

    /// The reduced form of `x^u t^w` for any `u ≥ 0`.
    pub fn monomial(&self, u: &[i64], w: &[i64]) -> Result<AlgebraElement<MdrElement>> {
        if u.len() != self.d() || w.len() != self.r() {
            return Err(Error::ParamMismatch);
        }
        if u.iter().any(|x| *x < 0) {
            return Err(Error::BadParams("negative x exponent".into()));
        }
        let low = *u.iter().min().expect("d ≥ 2");
        let base = MdrElement { u: u.iter().map(|x| x - low).collect(), w: w.to_vec() };
        let mut out = AlgebraElement::zero();
        for (e, c) in multinomials(low as u32, self.r()) {
            let w2 = base.w.iter().zip(&e).map(|(a, b)| a + b).collect();
            out.add_term(MdrElement { u: base.u.clone(), w: w2 }, Rat::from_integer(c));
        }
        Ok(out)
    }

    pub fn x(&self, i: usize) -> AlgebraElement<MdrElement> {
        let mut u = vec![0; self.d()];
        u[i] = 1;
        AlgebraElement::basis(MdrElement { u, w: vec![0; self.r()] })
    }

    pub fn t(&self, j: usize, e: i64) -> AlgebraElement<MdrElement> {
        let mut w = vec![0; self.r()];
        w[j] = e;
        AlgebraElement::basis(MdrElement { u: vec![0; self.d()], w })
    }

    /// The `T_{r,d}` tuples `v_{d,r}(m)` of the members of a valuation value.
    pub fn tuples(&self, v: &SElem) -> Vec<TdrPoint> {
        v.members().iter().map(|e| mdr_v(&self.dual.m.mdr_element(e))).collect()
    }
}

impl Detropicalization for Adr {
    type Key = MdrElement;

    fn lattice(&self) -> &Arc<PolyptychLattice> {
        &self.dual.m.lattice
    }

    fn pair(&self) -> &Arc<DualPair> {
        &self.dual.pair
    }

    fn element(&self, k: &MdrElement) -> Element {
        self.dual.m.element(k)
    }

    fn key(&self, e: &Element) -> MdrElement {
        self.dual.m.mdr_element(e)
    }

    /// `x^{u+u'−ũ1} t^{w+w'} (t_1 + ⋯ + t_r)^ũ` with `ũ = min(u + u')`.
    fn mul_basis(&self, a: &MdrElement, b: &MdrElement) -> AlgebraElement<MdrElement> {
        let u: IVec = a.u.iter().zip(&b.u).map(|(x, y)| x + y).collect();
        let w: IVec = a.w.iter().zip(&b.w).map(|(x, y)| x + y).collect();
        self.monomial(&u, &w).expect("exponents are valid")
    }

    fn one(&self) -> MdrElement {
        MdrElement::zero(self.d(), self.r())
    }
}

/// Basis key `x_1^{u_1} x_2^{u_2} t^w` of the running-example algebra, `min(u_1, u_2) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct A1Key {
    pub u1: i64,
    pub u2: i64,
    pub w: i64,
}

/// `ℚ[x_1, x_2, t^{±1}] / (x_1 x_2 − 1 − t)`; the key `(u_1, u_2, w)` has chart-1 coordinates
/// `(w, u_2 − u_1)`.
#[derive(Debug)]
pub struct A1Algebra {
    pub example: A1Example,
}

impl A1Algebra {
    pub fn new() -> Result<Self> {
        Ok(A1Algebra { example: a1_example()? })
    }

    pub fn monomial(&self, u1: i64, u2: i64, w: i64) -> AlgebraElement<A1Key> {
        let low = u1.min(u2);
        let mut out = AlgebraElement::zero();
        let mut c = BigInt::one();
        for k in 0..=low {
            out.add_term(A1Key { u1: u1 - low, u2: u2 - low, w: w + k }, Rat::from_integer(c.clone()));
            c = c * BigInt::from(low - k) / BigInt::from(k + 1);
        }
        out
    }
}

impl Detropicalization for A1Algebra {
    type Key = A1Key;

    fn lattice(&self) -> &Arc<PolyptychLattice> {
        &self.example.lattice
    }

    fn pair(&self) -> &Arc<DualPair> {
        &self.example.pair
    }

    fn element(&self, k: &A1Key) -> Element {
        Element::new(&self.example.lattice, vec![k.w, k.u2 - k.u1]).expect("rank 2")
    }

    fn key(&self, e: &Element) -> A1Key {
        let (w, y) = (e.base_coords()[0], e.base_coords()[1]);
        A1Key { u1: (-y).max(0), u2: y.max(0), w }
    }

    fn mul_basis(&self, a: &A1Key, b: &A1Key) -> AlgebraElement<A1Key> {
        self.monomial(a.u1 + b.u1, a.u2 + b.u2, a.w + b.w)
    }

    fn one(&self) -> A1Key {
        A1Key { u1: 0, u2: 0, w: 0 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multinomial_expansion() {
        let m = multinomials(3, 2);
        let coeffs: Vec<i64> = m.iter().map(|(_, c)| c.try_into().unwrap()).collect();
        assert_eq!(coeffs, vec![1, 3, 3, 1]);
        assert_eq!(m[0].0, vec![3, 0]);
        let total: BigInt = multinomials(4, 3).into_iter().map(|(_, c)| c).sum();
        assert_eq!(total, BigInt::from(81));
        assert_eq!(multinomials(0, 3), vec![(vec![0, 0, 0], BigInt::one())]);
    }

    #[test]
    fn terms_cancel() {
        let mut f = AlgebraElement::term(1u8, Rat::from_integer(2.into()));
        f.add_term(1, Rat::from_integer((-2).into()));
        assert!(f.is_zero());
        f.add_term(2, Rat::zero());
        assert!(f.is_zero());
    }
}
