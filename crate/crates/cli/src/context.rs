//! Built-in families addressable by name: `a1`, `mdr:d,r`, `trivial:r`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use polyptych::detrop::{A1Algebra, Adr};
use polyptych::duality::DualPair;
use polyptych::families::{mdr_gf_polytope, trivial_dual};
use polyptych::lattice::PolyptychLattice;
use polyptych::points::Point;
use polyptych::polytopes::{build_polytope, PLHalfSpace, PLPolytope};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    A1,
    Mdr(usize, usize),
    Trivial(usize),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::A1 => write!(f, "a1"),
            Family::Mdr(d, r) => write!(f, "mdr:{d},{r}"),
            Family::Trivial(r) => write!(f, "trivial:{r}"),
        }
    }
}

impl FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::usage(format!("unknown family `{s}` (expected a1, mdr:d,r or trivial:r)"));
        let s = s.trim();
        if s == "a1" {
            return Ok(Family::A1);
        }
        if let Some(rest) = s.strip_prefix("mdr:") {
            let (d, r) = rest.split_once(',').ok_or_else(bad)?;
            let d = d.trim().parse().map_err(|_| bad())?;
            let r = r.trim().parse().map_err(|_| bad())?;
            return Ok(Family::Mdr(d, r));
        }
        if let Some(rest) = s.strip_prefix("trivial:") {
            return Ok(Family::Trivial(rest.trim().parse().map_err(|_| bad())?));
        }
        Err(bad())
    }
}

enum Inner {
    A1(A1Algebra),
    Mdr(Adr),
    Trivial { _m: Arc<PolyptychLattice>, n: Arc<PolyptychLattice>, pair: Arc<DualPair> },
}

/// A family instance; holding it keeps its dual pair registered.
pub struct FamilyCtx {
    pub family: Family,
    inner: Inner,
}

impl FamilyCtx {
    pub fn new(family: Family) -> Result<Self, CliError> {
        let inner = match family {
            Family::A1 => Inner::A1(A1Algebra::new()?),
            Family::Mdr(d, r) => Inner::Mdr(Adr::new(d, r)?),
            Family::Trivial(r) => {
                let (m, n, pair) = trivial_dual(r)?;
                Inner::Trivial { _m: m, n, pair }
            }
        };
        Ok(FamilyCtx { family, inner })
    }

    pub fn lattice(&self) -> &Arc<PolyptychLattice> {
        match &self.inner {
            Inner::A1(a) => &a.example.lattice,
            Inner::Mdr(a) => &a.dual.m.lattice,
            Inner::Trivial { pair, .. } => pair.m(),
        }
    }

    pub fn dual_lattice(&self) -> &Arc<PolyptychLattice> {
        match &self.inner {
            Inner::A1(a) => &a.example.lattice,
            Inner::Mdr(a) => &a.dual.n.lattice,
            Inner::Trivial { n, .. } => n,
        }
    }

    pub fn pair(&self) -> &Arc<DualPair> {
        match &self.inner {
            Inner::A1(a) => &a.example.pair,
            Inner::Mdr(a) => &a.dual.pair,
            Inner::Trivial { pair, .. } => pair,
        }
    }

    pub fn adr(&self) -> Option<&Adr> {
        match &self.inner {
            Inner::Mdr(a) => Some(a),
            _ => None,
        }
    }

    pub fn a1(&self) -> Option<&A1Algebra> {
        match &self.inner {
            Inner::A1(a) => Some(a),
            _ => None,
        }
    }

    /// The running-example polytope, the Gorenstein-Fano polytope of `M_{d,r}`, or the cube `[-1,1]^r`.
    pub fn builtin_polytope(&self) -> Result<PLPolytope, CliError> {
        match &self.inner {
            Inner::A1(a) => Ok(a.example.polytope.clone()),
            Inner::Mdr(a) => Ok(mdr_gf_polytope(&a.dual)?),
            Inner::Trivial { pair, .. } => {
                let lat = pair.m();
                let r = lat.rank();
                let mut hs = Vec::new();
                for i in 0..r {
                    for s in [1, -1] {
                        let p = Point::from_fn(lat, |x| s * x[i])?;
                        hs.push(PLHalfSpace::new(p, -1));
                    }
                }
                Ok(build_polytope(hs)?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        for s in ["a1", "mdr:2,3", "trivial:2"] {
            assert_eq!(s.parse::<Family>().unwrap().to_string(), s);
        }
        assert_eq!("mdr: 3 , 2".parse::<Family>().unwrap(), Family::Mdr(3, 2));
        assert!("mdr:2".parse::<Family>().is_err());
        assert!("b2".parse::<Family>().is_err());
    }
}
