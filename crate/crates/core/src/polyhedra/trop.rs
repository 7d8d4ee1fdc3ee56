//! Linear functionals, min-of-linear expressions and their minimal representations.

use super::cone::RationalCone;
use super::lp::{affine_strict_feasible, AffineRow};
use super::rat::{dot, rank, rvec, IVec, RVec, Rat};
use crate::error::{Error, Result};
use num_traits::Zero;

/// A linear functional given by its coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinFunctional(pub RVec);

impl LinFunctional {
    pub fn from_ints(v: &[i64]) -> Self {
        LinFunctional(rvec(v))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        dot(&self.0, x)
    }

    pub fn sub(&self, other: &LinFunctional) -> LinFunctional {
        LinFunctional(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn to_ints(&self) -> Option<IVec> {
        super::rat::to_ivec(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strictness {
    Strict,
    Weak,
}

/// The pointwise minimum of a nonempty set of functionals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropExpr {
    members: Vec<LinFunctional>,
}

impl TropExpr {
    pub fn new(members: Vec<LinFunctional>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::BadParams("empty min-expression".into()));
        };
        let d = first.dim();
        if let Some(f) = members.iter().find(|f| f.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: f.dim() });
        }
        Ok(TropExpr { members })
    }

    pub fn from_ints(members: &[IVec]) -> Result<Self> {
        TropExpr::new(members.iter().map(|m| LinFunctional::from_ints(m)).collect())
    }

    pub fn members(&self) -> &[LinFunctional] {
        &self.members
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.members.iter().map(|f| f.eval(x)).min().unwrap()
    }

    /// Sorted copy without duplicates.
    pub fn dedup(&self) -> TropExpr {
        let mut m = self.members.clone();
        m.sort();
        m.dedup();
        TropExpr { members: m }
    }
}

/// A witness `x ∈ domain` meeting every homogeneous constraint `f(x) > 0` / `f(x) ≥ 0`.
pub fn strict_feasible(ineqs: &[(LinFunctional, Strictness)], domain: &RationalCone) -> Result<Option<RVec>> {
    let dim = domain.dim();
    if let Some((f, _)) = ineqs.iter().find(|(f, _)| f.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: f.dim() });
    }
    let mut rows: Vec<AffineRow> = ineqs
        .iter()
        .map(|(f, s)| AffineRow { normal: f.0.clone(), threshold: Rat::zero(), strict: *s == Strictness::Strict })
        .collect();
    rows.extend(domain.ineqs().iter().map(|n| AffineRow::weak(rvec(n), Rat::zero())));
    let eqs: Vec<(RVec, Rat)> = domain.eqs().iter().map(|e| (rvec(e), Rat::zero())).collect();
    Ok(affine_strict_feasible(dim, &rows, &eqs))
}

/// The essential members: `f` stays iff some `x` in the domain has `f(x) < g(x)` for all other `g`.
pub fn minimal_min_representation(e: &TropExpr, domain: &RationalCone) -> Result<TropExpr> {
    let d = e.dedup();
    if d.members.len() == 1 {
        return Ok(d);
    }
    let mut keep = Vec::new();
    for (i, f) in d.members.iter().enumerate() {
        let cons: Vec<(LinFunctional, Strictness)> = d
            .members
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| (g.sub(f), Strictness::Strict))
            .collect();
        if strict_feasible(&cons, domain)?.is_some() {
            keep.push(f.clone());
        }
    }
    TropExpr::new(keep)
}

/// The member whose tuple `(f(b_1), …, f(b_r))` is lexicographically smallest.
pub fn lex_min_member(e: &TropExpr, basis: &[RVec]) -> Result<LinFunctional> {
    let dim = e.dim();
    if basis.len() != dim || basis.iter().any(|b| b.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: basis.len() });
    }
    if rank(basis) != dim {
        return Err(Error::BadBasis("basis does not span".into()));
    }
    let d = e.dedup();
    let mut tuples: Vec<(Vec<Rat>, &LinFunctional)> = d
        .members
        .iter()
        .map(|f| (basis.iter().map(|b| f.eval(b)).collect(), f))
        .collect();
    tuples.sort_by(|a, b| a.0.cmp(&b.0));
    if tuples.len() > 1 && tuples[0].0 == tuples[1].0 {
        return Err(Error::Tie);
    }
    Ok(tuples[0].1.clone())
}

#[cfg(test)]
mod tests {
    use super::super::rat::rvec;
    use super::*;

    fn orthant(dim: usize) -> RationalCone {
        let ineqs = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
        RationalCone::new(dim, ineqs, vec![]).unwrap()
    }

    #[test]
    fn strict_feasibility_examples() {
        let x = LinFunctional::from_ints(&[1]);
        let nx = LinFunctional::from_ints(&[-1]);
        assert!(strict_feasible(&[(x.clone(), Strictness::Strict)], &orthant(1)).unwrap().is_some());
        let line = RationalCone::whole(1);
        assert!(strict_feasible(&[(x, Strictness::Strict), (nx, Strictness::Strict)], &line).unwrap().is_none());
        let c = [
            (LinFunctional::from_ints(&[0, 1]), Strictness::Strict),
            (LinFunctional::from_ints(&[1, 0]), Strictness::Strict),
        ];
        let w = strict_feasible(&c, &orthant(2)).unwrap().unwrap();
        assert!(w.iter().all(|v| *v > Rat::zero()));
        assert!(matches!(
            strict_feasible(&[(LinFunctional::from_ints(&[1]), Strictness::Weak)], &orthant(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn minimal_representation_examples() {
        let e = TropExpr::from_ints(&[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let m = minimal_min_representation(&e, &orthant(2)).unwrap();
        assert_eq!(m, TropExpr::from_ints(&[vec![0, 1], vec![1, 0]]).unwrap());
        let single = TropExpr::from_ints(&[vec![1, 0]]).unwrap();
        assert_eq!(minimal_min_representation(&single, &orthant(2)).unwrap(), single);
        let dup = TropExpr::from_ints(&[vec![1, 0], vec![1, 0]]).unwrap();
        assert_eq!(minimal_min_representation(&dup, &orthant(2)).unwrap(), single);
    }

    #[test]
    fn lex_min_examples() {
        let basis = vec![rvec(&[1, 0]), rvec(&[0, 1])];
        let e = TropExpr::from_ints(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(lex_min_member(&e, &basis).unwrap(), LinFunctional::from_ints(&[0, 1]));
        let s = TropExpr::from_ints(&[vec![1, 0]]).unwrap();
        assert_eq!(lex_min_member(&s, &basis).unwrap(), LinFunctional::from_ints(&[1, 0]));
        let e3 = TropExpr::from_ints(&[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let y = lex_min_member(&e3, &basis).unwrap();
        assert_eq!(y, LinFunctional::from_ints(&[0, 1]));
        assert!(minimal_min_representation(&e3, &orthant(2)).unwrap().members().contains(&y));
    }
}
