//! Exact scalars, vectors and the small dense linear algebra everything else uses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar (reduced, positive denominator).
pub type Rat = BigRational;
pub type RVec = Vec<Rat>;
pub type RMat = Vec<RVec>;
/// Integer vectors are used wherever values are known to be integral.
pub type IVec = Vec<i64>;
pub type IMat = Vec<IVec>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rvec(v: &[i64]) -> RVec {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn rmat(m: &[IVec]) -> RMat {
    m.iter().map(|r| rvec(r)).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_ir(a: &[i64], b: &[Rat]) -> Rat {
    a.iter()
        .zip(b)
        .filter(|(x, _)| **x != 0)
        .fold(Rat::zero(), |acc, (&x, y)| acc + y * BigInt::from(x))
}

pub fn idot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn to_int(x: &Rat) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn to_ivec(v: &[Rat]) -> Option<IVec> {
    v.iter().map(to_int).collect()
}

pub fn is_integral(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn floor_i64(x: &Rat) -> i64 {
    x.floor().numer().to_i64().expect("coordinate out of i64 range")
}

pub fn ceil_i64(x: &Rat) -> i64 {
    x.ceil().numer().to_i64().expect("coordinate out of i64 range")
}

/// `m · v` for an integer matrix given by rows.
pub fn mat_vec(m: &[IVec], v: &[i64]) -> IVec {
    m.iter().map(|row| idot(row, v)).collect()
}

pub fn mat_vec_rat(m: &[IVec], v: &[Rat]) -> RVec {
    m.iter().map(|row| dot_ir(row, v)).collect()
}

/// Row vector times matrix: `f · m`.
pub fn vec_mat(f: &[i64], m: &[IVec]) -> IVec {
    let n = m.first().map_or(0, |r| r.len());
    let mut out = vec![0; n];
    for (c, row) in f.iter().zip(m) {
        if *c != 0 {
            for (o, x) in out.iter_mut().zip(row) {
                *o += c * x;
            }
        }
    }
    out
}

pub fn mat_mul(a: &[IVec], b: &[IVec]) -> IMat {
    a.iter().map(|row| vec_mat(row, b)).collect()
}

pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn transpose(m: &[IVec]) -> IMat {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// The primitive integer vector on the ray spanned by `v` (zero stays zero).
pub fn primitive(v: &[Rat]) -> IVec {
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = gcd_all(&ints);
    if g.is_zero() {
        return vec![0; v.len()];
    }
    ints.iter()
        .map(|x| (x / &g).to_i64().expect("coordinate out of i64 range"))
        .collect()
}

/// Primitive integer form of an integer vector.
pub fn primitive_int(v: &[i64]) -> IVec {
    let g = v.iter().fold(0i64, |g, x| g.gcd(x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// Scales `(normal, threshold)` so the normal becomes a primitive integer vector.
pub fn normalize_ineq(normal: &[Rat], threshold: &Rat) -> (IVec, Rat) {
    let p = primitive(normal);
    let k = normal
        .iter()
        .zip(&p)
        .find(|(_, q)| **q != 0)
        .map(|(x, q)| rat(*q) / x)
        .unwrap_or_else(Rat::one);
    (p, threshold * k)
}

/// Reduces `m` in place to reduced row echelon form and returns the pivot columns.
pub fn rref(m: &mut RMat) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[RVec]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

pub fn rank_int(rows: &[IVec]) -> usize {
    rank(&rmat(rows))
}

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve(a: &[RVec], b: &[Rat]) -> Option<RVec> {
    let n = a.len();
    let mut m: RMat = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut m);
    if piv.len() != n || piv.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub fn inverse(a: &[RVec]) -> Option<RMat> {
    let n = a.len();
    let mut m: RMat = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut m);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Inverse of an integer matrix when it is again integral (unimodular input).
pub fn inverse_int(a: &[IVec]) -> Option<IMat> {
    let inv = inverse(&rmat(a))?;
    inv.iter().map(|r| to_ivec(r)).collect()
}

/// A rational basis of `{x : rows · x = 0}` in ambient dimension `n`.
pub fn nullspace(rows: &[RVec], n: usize) -> Vec<RVec> {
    let mut m = rows.to_vec();
    if m.is_empty() {
        m.push(vec![Rat::zero(); n]);
    }
    let piv = rref(&mut m);
    let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); n];
            v[f] = Rat::one();
            for (i, &p) in piv.iter().enumerate() {
                v[p] = -m[i][f].clone();
            }
            v
        })
        .collect()
}

/// A ℤ-basis of the lattice `{x ∈ ℤⁿ : rows · x = 0}`, via unimodular column reduction.
pub fn integer_kernel(rows: &[IVec], n: usize) -> Vec<IVec> {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    let col_op = |a: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, dst: usize, src: usize, q: i128| {
        for r in a.iter_mut() {
            r[dst] -= q * r[src];
        }
        for r in u.iter_mut() {
            r[dst] -= q * r[src];
        }
    };
    let swap = |a: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for r in a.iter_mut() {
            r.swap(i, j);
        }
        for r in u.iter_mut() {
            r.swap(i, j);
        }
    };
    let mut col = 0;
    for row in 0..a.len() {
        if col == n {
            break;
        }
        loop {
            let best = (col..n)
                .filter(|&j| a[row][j] != 0)
                .min_by_key(|&j| a[row][j].abs());
            let Some(b) = best else { break };
            swap(&mut a, &mut u, col, b);
            let mut done = true;
            for j in col + 1..n {
                if a[row][j] != 0 {
                    let q = a[row][j].div_euclid(a[row][col]);
                    col_op(&mut a, &mut u, j, col, q);
                    if a[row][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                col += 1;
                break;
            }
        }
    }
    (col..n)
        .map(|j| {
            let v: IVec = u.iter().map(|r| r[j] as i64).collect();
            canonical_sign(primitive_int(&v))
        })
        .collect()
}

/// Flips the sign so the first nonzero entry is positive.
pub fn canonical_sign(v: IVec) -> IVec {
    match v.iter().find(|x| **x != 0) {
        Some(x) if *x < 0 => v.into_iter().map(|x| -x).collect(),
        _ => v,
    }
}

/// Determinant of a small integer matrix (fraction-free Bareiss elimination).
pub fn det_int(m: &[IVec]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

pub fn fmt_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn fmt_rvec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rat).collect();
    format!("({})", parts.join(","))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

pub fn sign(x: &Rat) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_single_row() {
        let k = integer_kernel(&[vec![2, 3]], 2);
        assert_eq!(k.len(), 1);
        assert_eq!(idot(&[2, 3], &k[0]), 0);
        assert_eq!(k[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![3, 2]);
    }

    #[test]
    fn kernel_is_saturated() {
        // x + y + z = 0 has kernel lattice of index 1 spanned by two vectors.
        let k = integer_kernel(&[vec![1, 1, 1]], 3);
        assert_eq!(k.len(), 2);
        let d = det_int(&[k[0].clone(), k[1].clone(), vec![1, 1, 1]]);
        assert_eq!(d.abs(), 3);
    }

    #[test]
    fn determinants() {
        assert_eq!(det_int(&[vec![1, 1], vec![-1, 1]]), 2);
        assert_eq!(det_int(&identity(3)), 1);
        assert_eq!(det_int(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det_int(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]), 0);
        assert_eq!(det_int(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]), 6);
    }

    #[test]
    fn inverse_and_solve() {
        let a = vec![vec![-1, 1], vec![0, 1]];
        let inv = inverse_int(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        let x = solve(&rmat(&a), &rvec(&[1, 2])).unwrap();
        assert_eq!(x, rvec(&[1, 2]));
        assert!(inverse_int(&[vec![2, 0], vec![0, 1]]).is_none());
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(primitive(&[frac(1, 2), frac(3, 4)]), vec![2, 3]);
        assert_eq!(primitive(&[rat(0), rat(-4)]), vec![0, -1]);
        let (n, t) = normalize_ineq(&[rat(2), rat(4)], &rat(-2));
        assert_eq!((n, t), (vec![1, 2], rat(-1)));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rat("1/2"), Some(frac(1, 2)));
        assert_eq!(parse_rat("-3"), Some(rat(-3)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(fmt_rat(&frac(-2, 4)), "-1/2");
    }
}
