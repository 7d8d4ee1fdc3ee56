//! Acceptance run: one PASS/FAIL line per criterion with its time budget.
//!
//! Runs as a plain binary (`harness = false`) so the lines are always shown.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use polyptych::detrop::{
    alg_mul, boxplus, circledast, coordinate_valuations, full_rank_valuation, graded_tables, level_space, no_body_check,
    standard_rho, valuate, Adr, AlgebraElement,
};
use polyptych::duality::{integer_box, linear_on_chart, preimage_cone, verify_dual_pair, verify_dual_pair_with_radius};
use polyptych::families::{
    a1_example, a1_point, mdr_dual_pair, mdr_gf_polytope, mdr_phi, mdr_tu_matrix, MdrElement, TdrPoint,
};
use polyptych::lattice::{validate_lattice, Element, Side};
use polyptych::points::{
    is_point, normalize, point_eval_hom, semialg_eq, semialg_ge, semialg_oplus, semialg_star, Point, SElem,
};
use polyptych::polyhedra::{
    frac, is_bounded, is_totally_unimodular, lex_min_member, minimal_min_representation, rat, HPolyhedron, IVec, RVec,
    Rat, RationalCone, TropExpr,
};
use polyptych::polytopes::{
    chart_lattice_count, dual_polytope, is_chart_gorenstein_fano, is_integral, scale_polytope, vertices, PLHalfSpace,
};
use polyptych::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

const SEED: u64 = 0x5eed_0001;
/// Random samples for the semialgebra and valuation laws.
const VALUATION_PAIRS: usize = 200;
const SEMIALGEBRA_SAMPLES: usize = 100;
const APPENDIX_SAMPLES: usize = 100;
/// Lattice-point counts of `k·P` for `M_{2,2}`, `k = 0..3`, frozen from the box scan in `tests/polytopes.rs`.
const M22_LEVEL_COUNTS: [usize; 4] = [1, 23, 105, 287];

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ints(vs: &[[i64; 2]]) -> BTreeSet<RVec> {
    vs.iter().map(|v| vec![rat(v[0]), rat(v[1])]).collect()
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn running_example_fidelity() -> Outcome {
    let ex = a1_example().map_err(err)?;
    let fan = ex.lattice.fan();
    let cones: Vec<_> = fan.cones.iter().map(|c| c.base.clone()).collect();
    let expected: Vec<_> = [vec![0, 1], vec![0, -1]]
        .into_iter()
        .map(|n| RationalCone::new(2, vec![n], vec![]).unwrap())
        .collect();
    ensure!(cones.len() == 2 && expected.iter().all(|c| cones.contains(c)), "fan cones {cones:?}");

    let p = a1_point(&ex.lattice, -1, 0, -1).map_err(err)?;
    let ineqs = PLHalfSpace::new(p, -1).chart_ineqs(1);
    ensure!(ineqs == vec![(vec![rat(1), rat(0)], rat(-1))], "chart-2 half-space {ineqs:?}");

    let c1: BTreeSet<RVec> = ex.polytope.chart_image(0).vertices().iter().cloned().collect();
    ensure!(c1 == ints(&[[-2, -1], [0, -1], [1, 0], [1, 2]]), "chart-1 vertices {c1:?}");
    let c2: BTreeSet<RVec> = ex.polytope.chart_image(1).vertices().iter().cloned().collect();
    ensure!(c2 == ints(&[[-1, -1], [1, -1], [1, 0], [-1, 2]]), "chart-2 vertices {c2:?}");

    let v: BTreeSet<IVec> = vertices(&ex.polytope).map_err(err)?.iter().map(|e| e.chart(0).unwrap()).collect();
    let want: BTreeSet<IVec> = [vec![1, 0], vec![1, 2], vec![-2, -1], vec![-1, 0], vec![0, -1]].into_iter().collect();
    ensure!(v == want, "V(P) = {v:?}");
    Ok(())
}

fn dual_polytope_fidelity() -> Outcome {
    let ex = a1_example().map_err(err)?;
    let d = dual_polytope(&ex.polytope, &ex.pair).map_err(err)?;
    let c1: BTreeSet<RVec> = d.chart_image(0).vertices().iter().cloned().collect();
    ensure!(c1 == ints(&[[0, -1], [1, 0], [-1, 1]]), "chart-1 vertices {c1:?}");
    let half = vec![frac(1, 2), rat(0)];
    ensure!(d.chart_image(1).vertices().contains(&half), "chart-2 lacks (1/2, 0)");
    ensure!(!is_integral(&d), "dual reported integral");
    ensure!(is_integral(&ex.polytope), "P reported non-integral");

    let table: [([i64; 2], Vec<IVec>, Vec<IVec>); 5] = [
        ([1, 0], vec![vec![0, 1]], vec![vec![0, 1]]),
        ([1, 2], vec![vec![2, 1]], vec![vec![-2, 1], vec![-2, 3]]),
        ([-2, -1], vec![vec![-1, -2], vec![-1, -1]], vec![vec![1, -2]]),
        ([-1, 0], vec![vec![0, -1]], vec![vec![0, -1]]),
        ([0, -1], vec![vec![-1, 0], vec![-1, 1]], vec![vec![1, 0]]),
    ];
    let mut conditions = 0;
    for (m, c1, c2) in table {
        let q = ex.pair.v(&m);
        ensure!(
            d.halfspaces().iter().any(|h| h.point == q && h.threshold == -1),
            "no half-space for vertex {m:?}"
        );
        for (a, want) in [(0, c1), (1, c2)] {
            let got: BTreeSet<IVec> = q.chart_exprs()[a].members().iter().map(|f| f.to_ints().unwrap()).collect();
            let want: BTreeSet<IVec> = want.into_iter().collect();
            ensure!(got == want, "vertex {m:?} chart {}: {got:?}", a + 1);
            conditions += 1;
        }
    }
    ensure!(conditions == 10 && d.halfspaces().len() == 5, "table size");
    Ok(())
}

fn self_duality() -> Outcome {
    let ex = a1_example().map_err(err)?;
    let rep = verify_dual_pair_with_radius(&ex.pair, 3);
    ensure!(rep.passed(), "axioms {:?}", rep.axioms);
    let fan = ex.lattice.fan();
    for (chart, normal) in [(0, vec![0, 1]), (1, vec![0, -1])] {
        let c = preimage_cone(&ex.pair, Side::N, chart).ok_or("no preimage cone")?;
        ensure!(rep.cone_of_m_chart[chart] == Some(c), "report and preimage disagree on chart {}", chart + 1);
        let want = RationalCone::new(2, vec![normal], vec![]).unwrap();
        ensure!(fan.cones[c].base == want, "chart {} preimage {:?}", chart + 1, fan.cones[c].base);
    }
    Ok(())
}

fn mdr_structure(d: usize, r: usize) -> Outcome {
    let dual = mdr_dual_pair(d, r).map_err(err)?;
    let m = &dual.m;
    let rep = validate_lattice(&m.lattice);
    ensure!(rep.passed(), "lattice axioms {:?}", rep.failures);

    for x in integer_box(d + r, 3) {
        if x[..d].iter().min() != Some(&0) {
            continue;
        }
        let e = MdrElement::new(x[..d].to_vec(), x[d..].to_vec()).map_err(err)?;
        for i in 0..r {
            let j = (i + 1) % r;
            let lhs = m.lattice.mutation(i, j).apply(&mdr_phi(d, r, i, &e));
            ensure!(lhs == mdr_phi(d, r, j, &e), "μ∘φ ≠ φ at {e:?}, chart {}", i + 1);
        }
    }

    for x in integer_box(d + r, 2) {
        let t = TdrPoint { a: x[..d].to_vec(), b: x[d..].to_vec() };
        if !t.is_valid() {
            continue;
        }
        let p = m.point(&t).map_err(err)?;
        let cert = is_point(&p);
        ensure!(cert.ok, "Ψ{t:?} is not a point: {}", cert.reason);
        let sa: i64 = t.a.iter().sum();
        for i in 0..r {
            ensure!(linear_on_chart(&p, i) == (sa == t.b[i]), "linearity of Ψ{t:?} on chart {}", i + 1);
        }
    }

    let rep = verify_dual_pair(&dual.pair);
    ensure!(rep.passed(), "dual axioms {:?}", rep.axioms);

    for k in 0..d {
        let c = preimage_cone(&dual.pair, Side::M, k).ok_or("no preimage cone")?;
        ensure!(c == m.cone_index(k), "v^-1(T({})) is cone {c}", k + 1);
        for x in integer_box(d + r, 2) {
            if x[..d].iter().min() != Some(&0) {
                continue;
            }
            let e = MdrElement::new(x[..d].to_vec(), x[d..].to_vec()).map_err(err)?;
            let p = dual.pair.v(m.element(&e).base_coords());
            ensure!(linear_on_chart(&p, k) == (e.u[k] == 0), "v({e:?}) linearity on chart {}", k + 1);
        }
    }
    Ok(())
}

fn gorenstein_fano(d: usize, r: usize) -> Outcome {
    let dual = mdr_dual_pair(d, r).map_err(err)?;
    let p = mdr_gf_polytope(&dual).map_err(err)?;
    for a in 0..r {
        ensure!(is_bounded(p.chart_image(a).h()), "chart {} image unbounded", a + 1);
    }
    ensure!(is_integral(&p), "not integral");
    ensure!(is_chart_gorenstein_fano(&p), "not chart-Gorenstein-Fano");
    for k in 0..d {
        ensure!(is_totally_unimodular(&mdr_tu_matrix(d, r, k)), "matrix for C_{} not TU", k + 1);
    }
    Ok(())
}

fn random_element(rng: &mut ChaCha8Rng, d: usize, r: usize) -> AlgebraElement<MdrElement> {
    loop {
        let mut f = AlgebraElement::zero();
        for _ in 0..rng.random_range(1..=3) {
            let u: IVec = (0..d).map(|_| rng.random_range(0..=2)).collect();
            let lo = *u.iter().min().unwrap();
            let w: IVec = (0..r).map(|_| rng.random_range(-2..=2)).collect();
            let mut c = rng.random_range(-3..=3);
            if c == 0 {
                c = 1;
            }
            f.add_term(MdrElement::new(u.iter().map(|x| x - lo).collect(), w).unwrap(), rat(c));
        }
        if !f.is_zero() {
            return f;
        }
    }
}

fn detropicalization() -> Outcome {
    let a = Adr::new(2, 2).map_err(err)?;
    ensure!(alg_mul(&a, &a.x(0), &a.x(1)) == a.t(0, 1).add(&a.t(1, 1)), "x1·x2 ≠ t1 + t2");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..VALUATION_PAIRS {
        let f = random_element(&mut rng, 2, 2);
        let g = random_element(&mut rng, 2, 2);
        let vf = valuate(&a, &f).map_err(err)?;
        let vg = valuate(&a, &g).map_err(err)?;
        let fg = alg_mul(&a, &f, &g);
        let star = semialg_star(&vf, &vg).map_err(err)?;
        ensure!(valuate(&a, &fg).map_err(err)? == normalize(&star).map_err(err)?, "v(fg) ≠ v(f)⋆v(g) at pair {i}");
        let sum = f.add(&g);
        if !sum.is_zero() {
            let lhs = valuate(&a, &sum).map_err(err)?;
            ensure!(semialg_ge(&lhs, &semialg_oplus(&vf, &vg)).map_err(err)?, "v(f+g) < v(f)⊕v(g) at pair {i}");
        }
    }
    for al in 0..2 {
        let rho = standard_rho(&a, al).map_err(err)?;
        for x in integer_box(4, 2) {
            if x[..2].iter().min() != Some(&0) {
                continue;
            }
            let m = MdrElement::new(x[..2].to_vec(), x[2..].to_vec()).map_err(err)?;
            let v = full_rank_valuation(&a, &AlgebraElement::basis(m.clone()), al, &rho).map_err(err)?;
            let want = a.dual.m.element(&m).chart(al).map_err(err)?;
            ensure!(v.as_ref() == Some(&want), "v_α(b_m) ≠ π_α(m) at {m:?}, chart {}", al + 1);
        }
    }
    Ok(())
}

fn level_spaces() -> Outcome {
    let a = Adr::new(2, 2).map_err(err)?;
    let p = mdr_gf_polytope(&a.dual).map_err(err)?;
    for (k, &want) in M22_LEVEL_COUNTS.iter().enumerate() {
        let dim = level_space(&a, &p, k as i64).map_err(err)?.dim();
        ensure!(dim == want, "dim Γ(A, {k}P) = {dim}, expected {want}");
        let kp = scale_polytope(&p, k as i64).map_err(err)?;
        for al in 0..2 {
            let n = chart_lattice_count(&kp, al);
            ensure!(n == dim, "chart {} count {n} ≠ dim {dim} at k = {k}", al + 1);
        }
    }
    for al in 0..2 {
        let rep = no_body_check(&a, &p, al, 3).map_err(err)?;
        ensure!(rep.passed(), "value sets differ on chart {}: {:?}", al + 1, rep.levels);
    }
    Ok(())
}

fn random_selem(rng: &mut ChaCha8Rng, lat: &std::sync::Arc<polyptych::lattice::PolyptychLattice>) -> SElem {
    let n = rng.random_range(1..=2);
    let v = (0..n)
        .map(|_| Element::new(lat, vec![rng.random_range(-2..=2), rng.random_range(-2..=2)]).unwrap())
        .collect();
    normalize(&SElem::from_elements(v)).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng, lat: &std::sync::Arc<polyptych::lattice::PolyptychLattice>) -> Point {
    let a = rng.random_range(-3..=3);
    let b = rng.random_range(-3..=3);
    a1_point(lat, a, b, a.min(0) - b).unwrap()
}

fn semialgebra_laws() -> Outcome {
    let ex = a1_example().map_err(err)?;
    let l = &ex.lattice;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let zero = SElem::single(Element::zero(l));
    let eq = |x: &SElem, y: &SElem| semialg_eq(x, y).map_err(err);
    let star = |x: &SElem, y: &SElem| semialg_star(x, y).map_err(err);
    for i in 0..SEMIALGEBRA_SAMPLES {
        let (a, b, c) = (random_selem(&mut rng, l), random_selem(&mut rng, l), random_selem(&mut rng, l));
        ensure!(eq(&star(&star(&a, &b)?, &c)?, &star(&a, &star(&b, &c)?)?)?, "⋆ not associative at triple {i}");
        ensure!(eq(&star(&a, &b)?, &star(&b, &a)?)?, "⋆ not commutative at triple {i}");
        ensure!(eq(&star(&a, &zero)?, &a)?, "0 is not a ⋆ identity at triple {i}");
        ensure!(eq(&semialg_oplus(&a, &a), &a)?, "⊕ not idempotent at triple {i}");
    }
    for i in 0..SEMIALGEBRA_SAMPLES {
        let p = random_point(&mut rng, l);
        let (a, b) = (random_selem(&mut rng, l), random_selem(&mut rng, l));
        let pa = point_eval_hom(&p, &a).map_err(err)?.unwrap();
        let pb = point_eval_hom(&p, &b).map_err(err)?.unwrap();
        let prod = point_eval_hom(&p, &star(&a, &b)?).map_err(err)?;
        ensure!(prod == Some(pa + pb), "p(a⋆b) ≠ p(a) + p(b) at sample {i}");
        let sum = point_eval_hom(&p, &semialg_oplus(&a, &b)).map_err(err)?;
        ensure!(sum == Some(pa.min(pb)), "p(a⊕b) ≠ min at sample {i}");
        ensure!(point_eval_hom(&p, &zero).map_err(err)? == Some(0), "p(0) ≠ 0");
        ensure!(point_eval_hom(&p, &SElem::Inf).map_err(err)?.is_none(), "p(∞) ≠ ∞");
    }
    Ok(())
}

fn orthant(dim: usize) -> RationalCone {
    let rows = (0..dim)
        .map(|i| {
            let mut v = vec![0; dim];
            v[i] = 1;
            v
        })
        .collect();
    RationalCone::new(dim, rows, vec![]).unwrap()
}

fn appendix_machinery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let mut done = 0;
    while done < APPENDIX_SAMPLES {
        let dim = 2 + done % 2;
        let members: Vec<IVec> =
            (0..rng.random_range(2..=5)).map(|_| (0..dim).map(|_| rng.random_range(-3..=3)).collect()).collect();
        let e = TropExpr::from_ints(&members).map_err(err)?;
        let basis: Vec<RVec> = (0..dim).map(|_| (0..dim).map(|_| rat(rng.random_range(0..=3))).collect()).collect();
        let f = match lex_min_member(&e, &basis) {
            Ok(f) => f,
            Err(Error::BadBasis(_)) | Err(Error::Tie) => continue,
            Err(x) => return Err(err(x)),
        };
        let minimal = minimal_min_representation(&e, &orthant(dim)).map_err(err)?;
        ensure!(minimal.members().contains(&f), "lex-min {f:?} missing from {minimal:?}");
        done += 1;
    }

    let mut done = 0;
    while done < APPENDIX_SAMPLES {
        let dim = 2 + done % 2;
        let ineqs: Vec<(RVec, Rat)> = (0..rng.random_range(dim + 1..=dim + 4))
            .map(|_| ((0..dim).map(|_| rat(rng.random_range(-2..=2))).collect(), rat(rng.random_range(-3..=0))))
            .collect();
        let h = HPolyhedron::new(dim, ineqs, vec![]).map_err(err)?;
        if !is_bounded(&h) {
            continue;
        }
        let t: Vec<_> = h.ineqs.iter().map(|_| rat(rng.random_range(-5..=5))).collect();
        ensure!(is_bounded(&h.with_thresholds(&t)), "boundedness lost under new thresholds");
        done += 1;
    }

    let a = Adr::new(2, 2).map_err(err)?;
    let keys: Vec<MdrElement> = integer_box(4, 2)
        .into_iter()
        .filter(|x| x[..2].iter().min() == Some(&0))
        .map(|x| MdrElement::new(x[..2].to_vec(), x[2..].to_vec()).unwrap())
        .collect();
    for al in 0..2 {
        let rho = standard_rho(&a, al).map_err(err)?;
        let vals = coordinate_valuations(&rho);
        for k in &keys {
            let b = AlgebraElement::basis(k.clone());
            let full = full_rank_valuation(&a, &b, al, &rho).map_err(err)?;
            ensure!(circledast(&a, &vals, &b) == full, "⊛ ≠ v_α at {k:?}");
            ensure!(boxplus(&a, &vals, &b) == full.map(|v| v.iter().sum()), "⊞ ≠ Σ v_α at {k:?}");
        }
        let (by_sum, by_tuple) = graded_tables(&a, &vals, &keys);
        for (s, n) in &by_sum {
            let folded: usize = by_tuple.iter().filter(|(t, _)| t.iter().sum::<i64>() == *s).map(|(_, c)| c).sum();
            ensure!(folded == *n, "graded dimensions differ in total degree {s}");
        }
    }
    Ok(())
}

struct Criterion {
    id: usize,
    label: String,
    budget: Duration,
    run: Box<dyn Fn() -> Outcome>,
}

fn criteria() -> Vec<Criterion> {
    let secs = Duration::from_secs;
    let mut out = vec![
        Criterion { id: 1, label: "running example fidelity".into(), budget: secs(1), run: Box::new(running_example_fidelity) },
        Criterion { id: 2, label: "dual polytope fidelity".into(), budget: secs(1), run: Box::new(dual_polytope_fidelity) },
        Criterion { id: 3, label: "self-duality".into(), budget: secs(5), run: Box::new(self_duality) },
    ];
    for (d, r) in [(2, 2), (2, 3), (3, 2)] {
        out.push(Criterion { id: 4, label: format!("M_{{{d},{r}}} structure"), budget: secs(30), run: Box::new(move || mdr_structure(d, r)) });
    }
    for (d, r) in [(2, 2), (2, 3), (3, 2)] {
        out.push(Criterion {
            id: 5,
            label: format!("Gorenstein-Fano polytope ({d},{r})"),
            budget: secs(10),
            run: Box::new(move || gorenstein_fano(d, r)),
        });
    }
    out.extend([
        Criterion { id: 6, label: "detropicalization".into(), budget: secs(60), run: Box::new(detropicalization) },
        Criterion { id: 7, label: "level spaces".into(), budget: secs(60), run: Box::new(level_spaces) },
        Criterion { id: 8, label: "semialgebra laws".into(), budget: secs(10), run: Box::new(semialgebra_laws) },
        Criterion { id: 9, label: "appendix machinery".into(), budget: secs(10), run: Box::new(appendix_machinery) },
    ]);
    out
}

fn main() -> ExitCode {
    let mut failed = 0;
    for c in criteria() {
        let start = Instant::now();
        let result = (c.run)();
        let took = start.elapsed();
        let verdict = match &result {
            Ok(()) if took <= c.budget => "PASS".to_string(),
            Ok(()) => "FAIL over budget".to_string(),
            Err(e) => format!("FAIL {e}"),
        };
        if result.is_err() || took > c.budget {
            failed += 1;
        }
        println!("criterion {}: {}: {verdict} [{:.3}s / {}s]", c.id, c.label, took.as_secs_f64(), c.budget.as_secs());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} check(s) failed");
        ExitCode::FAILURE
    }
}
