//! Exact simplex (Bland's rule) and the strict-feasibility kernel built on it.

use super::rat::{Rat, RVec};
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: RVec, value: Rat },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

/// Dictionary for `max c·x, A x ≤ b, x ≥ 0` with an auxiliary column for phase one.
struct Tableau {
    m: usize,
    n: usize,
    basis: Vec<isize>,
    nonbasis: Vec<isize>,
    d: Vec<RVec>,
}

impl Tableau {
    fn new(a: &[RVec], b: &[Rat], c: &[Rat]) -> Self {
        let m = b.len();
        let n = c.len();
        let mut d = vec![vec![Rat::zero(); n + 2]; m + 2];
        for i in 0..m {
            for j in 0..n {
                d[i][j] = a[i][j].clone();
            }
            d[i][n] = -Rat::one();
            d[i][n + 1] = b[i].clone();
        }
        for j in 0..n {
            d[m][j] = -c[j].clone();
        }
        d[m + 1][n] = Rat::one();
        let mut nonbasis: Vec<isize> = (0..n as isize).collect();
        nonbasis.push(-1);
        Tableau {
            m,
            n,
            basis: (n as isize..(n + m) as isize).collect(),
            nonbasis,
            d,
        }
    }

    fn pivot(&mut self, r: usize, s: usize) {
        let inv = self.d[r][s].recip();
        let rows = self.m + 2;
        let cols = self.n + 2;
        let pivot_row = self.d[r].clone();
        for i in 0..rows {
            if i == r || self.d[i][s].is_zero() {
                continue;
            }
            let f = &self.d[i][s] * &inv;
            for j in 0..cols {
                if j != s && !pivot_row[j].is_zero() {
                    let t = &pivot_row[j] * &f;
                    self.d[i][j] -= t;
                }
            }
            self.d[i][s] = -f;
        }
        for j in 0..cols {
            if j != s {
                self.d[r][j] *= &inv;
            }
        }
        self.d[r][s] = inv;
        std::mem::swap(&mut self.basis[r], &mut self.nonbasis[s]);
    }

    /// Runs Bland's rule on the phase objective; false means unbounded.
    fn run(&mut self, phase: u8) -> bool {
        let x = if phase == 1 { self.m + 1 } else { self.m };
        loop {
            let mut s: Option<usize> = None;
            for j in 0..=self.n {
                if phase == 2 && self.nonbasis[j] == -1 {
                    continue;
                }
                if self.d[x][j].is_negative()
                    && s.is_none_or(|s| self.nonbasis[j] < self.nonbasis[s])
                {
                    s = Some(j);
                }
            }
            let Some(s) = s else { return true };
            let mut r: Option<usize> = None;
            for i in 0..self.m {
                if !self.d[i][s].is_positive() {
                    continue;
                }
                r = match r {
                    None => Some(i),
                    Some(k) => {
                        let lhs = &self.d[i][self.n + 1] / &self.d[i][s];
                        let rhs = &self.d[k][self.n + 1] / &self.d[k][s];
                        if lhs < rhs || (lhs == rhs && self.basis[i] < self.basis[k]) {
                            Some(i)
                        } else {
                            Some(k)
                        }
                    }
                };
            }
            let Some(r) = r else { return false };
            self.pivot(r, s);
        }
    }

    fn solve(mut self) -> LpOutcome {
        let (m, n) = (self.m, self.n);
        if m > 0 {
            let r = (0..m)
                .min_by(|&i, &k| self.d[i][n + 1].cmp(&self.d[k][n + 1]))
                .unwrap();
            if self.d[r][n + 1].is_negative() {
                self.pivot(r, n);
                if !self.run(1) || self.d[m + 1][n + 1].is_negative() {
                    return LpOutcome::Infeasible;
                }
                for i in 0..m {
                    if self.basis[i] == -1 {
                        let s = (0..=n)
                            .filter(|&j| !self.d[i][j].is_zero())
                            .min_by_key(|&j| self.nonbasis[j]);
                        if let Some(s) = s {
                            self.pivot(i, s);
                        }
                    }
                }
            }
        }
        if !self.run(2) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rat::zero(); n];
        for i in 0..m {
            if self.basis[i] >= 0 && (self.basis[i] as usize) < n {
                x[self.basis[i] as usize] = self.d[i][n + 1].clone();
            }
        }
        LpOutcome::Optimal {
            x,
            value: self.d[m][n + 1].clone(),
        }
    }
}

/// `max c·x` subject to `A x ≤ b`, `x ≥ 0`.
pub fn lp_max_nonneg(a: &[RVec], b: &[Rat], c: &[Rat]) -> LpOutcome {
    Tableau::new(a, b, c).solve()
}

/// `max c·x` over free variables subject to rows `(coeffs, rel, rhs)`.
pub fn lp_max(c: &[Rat], rows: &[(RVec, Rel, Rat)]) -> LpOutcome {
    let n = c.len();
    let split = |v: &RVec| -> RVec { v.iter().cloned().chain(v.iter().map(|x| -x.clone())).collect() };
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (coef, rel, rhs) in rows {
        debug_assert_eq!(coef.len(), n);
        if matches!(rel, Rel::Le | Rel::Eq) {
            a.push(split(coef));
            b.push(rhs.clone());
        }
        if matches!(rel, Rel::Ge | Rel::Eq) {
            a.push(split(&coef.iter().map(|x| -x.clone()).collect()));
            b.push(-rhs.clone());
        }
    }
    match lp_max_nonneg(&a, &b, &split(&c.to_vec())) {
        LpOutcome::Optimal { x, value } => LpOutcome::Optimal {
            x: (0..n).map(|i| &x[i] - &x[i + n]).collect(),
            value,
        },
        other => other,
    }
}

/// One affine constraint `normal · x ≥ threshold`, or `>` when `strict`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineRow {
    pub normal: RVec,
    pub threshold: Rat,
    pub strict: bool,
}

impl AffineRow {
    pub fn weak(normal: RVec, threshold: Rat) -> Self {
        AffineRow { normal, threshold, strict: false }
    }

    pub fn strict(normal: RVec, threshold: Rat) -> Self {
        AffineRow { normal, threshold, strict: true }
    }
}

/// Finds `x` meeting every row (strict rows strictly) and every equality, or `None`.
///
/// Maximizes a slack `t ≤ 1` subtracted from the strict rows; the system is strictly
/// feasible iff the optimum is positive.
pub fn affine_strict_feasible(dim: usize, rows: &[AffineRow], eqs: &[(RVec, Rat)]) -> Option<RVec> {
    let any_strict = rows.iter().any(|r| r.strict);
    let nv = dim + 1;
    let mut lp_rows = Vec::with_capacity(rows.len() + eqs.len() + 1);
    for r in rows {
        let mut coef = r.normal.clone();
        coef.push(if r.strict { -Rat::one() } else { Rat::zero() });
        lp_rows.push((coef, Rel::Ge, r.threshold.clone()));
    }
    for (n, t) in eqs {
        let mut coef = n.clone();
        coef.push(Rat::zero());
        lp_rows.push((coef, Rel::Eq, t.clone()));
    }
    let mut tcap = vec![Rat::zero(); nv];
    tcap[dim] = Rat::one();
    lp_rows.push((tcap.clone(), Rel::Le, Rat::one()));
    let objective = if any_strict { tcap } else { vec![Rat::zero(); nv] };
    match lp_max(&objective, &lp_rows) {
        LpOutcome::Optimal { mut x, value } => {
            if any_strict && !value.is_positive() {
                return None;
            }
            x.truncate(dim);
            Some(x)
        }
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("slack is capped"),
    }
}
