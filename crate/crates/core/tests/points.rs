use std::sync::Arc;

use polyptych::duality::integer_box;
use polyptych::families::{a1_example, a1_lattice, a1_point, a1_point_unchecked, Mdr, MdrElement, TdrPoint};
use polyptych::lattice::{upsilon_raw, Element, PolyptychLattice};
use polyptych::points::{
    combine_points, evaluate, extend_from_cone, in_pconv, is_linear_on_chart, is_point, normalize, point_eval_hom,
    restrict_to_cone, semialg_eq, semialg_ge, semialg_oplus, semialg_star, Point, SElem,
};
use polyptych::polyhedra::{frac, rat, LinFunctional, Rat};
use polyptych::Error;
use proptest::prelude::*;

/// The min identity checked on every pair of a coordinate box.
fn brute_is_point(p: &Point, radius: i64) -> bool {
    let lat = p.lattice();
    let bx = integer_box(lat.rank(), radius);
    bx.iter().all(|x| {
        bx.iter().all(|y| {
            let rhs = upsilon_raw(lat, x, y).iter().map(|s| p.eval_base(s)).min().unwrap();
            p.eval_base(x) + p.eval_base(y) == rhs
        })
    })
}

fn elem(l: &Arc<PolyptychLattice>, x: &[i64]) -> Element {
    Element::new(l, x.to_vec()).unwrap()
}

#[test]
fn running_example_point_constraint() {
    let l = a1_lattice();
    for a in -3..=3 {
        for b in -3..=3 {
            for b2 in -3..=3 {
                let p = a1_point_unchecked(&l, a, b, b2);
                let expected = b + b2 == a.min(0);
                assert_eq!(is_point(&p).ok, expected, "({a},{b},{b2})");
                assert_eq!(brute_is_point(&p, 2), expected, "({a},{b},{b2})");
                assert_eq!(a1_point(&l, a, b, b2).is_ok(), expected);
            }
        }
    }
    let bad = is_point(&a1_point_unchecked(&l, 1, 1, 1));
    assert!(!bad.ok && bad.witness.is_some());
}

#[test]
fn running_example_point_data() {
    let l = a1_lattice();
    let p = a1_point(&l, -1, 0, -1).unwrap();
    assert_eq!(evaluate(&p, &Element::from_chart(&l, 0, &[1, -1]).unwrap()).unwrap(), -2);
    assert_eq!(evaluate(&p, &Element::zero(&l)).unwrap(), 0);
    assert!(is_linear_on_chart(&p, 1).unwrap());
    assert!(!is_linear_on_chart(&p, 0).unwrap());
    let fan = l.fan();
    let upper = fan.cones.iter().find(|c| c.base.ineqs() == [vec![0, 1]]).unwrap();
    let lower = fan.cones.iter().find(|c| c.base.ineqs() == [vec![0, -1]]).unwrap();
    assert_eq!(restrict_to_cone(&p, &upper.base).unwrap(), LinFunctional::from_ints(&[-1, 0]));
    assert_eq!(restrict_to_cone(&p, &lower.base).unwrap(), LinFunctional::from_ints(&[-1, 1]));
    let z = Point::zero(&l);
    assert_eq!(restrict_to_cone(&z, &upper.base).unwrap(), LinFunctional::from_ints(&[0, 0]));
    let not_cone = polyptych::polyhedra::RationalCone::whole(2);
    assert_eq!(restrict_to_cone(&p, &not_cone), Err(Error::NotACone));
    assert!(a1_point(&l, 0, 1, -1).is_ok());
}

#[test]
fn running_example_extension_and_combination() {
    let l = a1_lattice();
    let up = l.fan().cones.iter().position(|c| c.base.ineqs() == [vec![0, 1]]).unwrap();
    for a in -3..=3 {
        for b in -3..=3 {
            let p = extend_from_cone(&l, up, &[a, b]).unwrap();
            assert_eq!(p, a1_point(&l, a, b, a.min(0) - b).unwrap());
        }
    }
    assert_eq!(extend_from_cone(&l, up, &[0, 0]).unwrap(), Point::zero(&l));

    let p = a1_point(&l, 0, 1, -1).unwrap();
    let q = a1_point(&l, -1, 0, -1).unwrap();
    assert_eq!(combine_points(&p, &q, 1, 1, 1).unwrap(), a1_point(&l, -1, 1, -2).unwrap());
    assert_eq!(combine_points(&q, &q, 2, 0, 1).unwrap(), a1_point(&l, -2, 0, -2).unwrap());
    assert_eq!(combine_points(&q, &Point::zero(&l), 1, 1, 1).unwrap(), q);
    assert!(combine_points(&p, &q, -1, 1, 1).is_none());
}

#[test]
fn m22_point_values() {
    let m = Mdr::new(2, 2).unwrap();
    let t = TdrPoint::new(vec![1, -1], vec![0, 2]).unwrap();
    let p = m.point(&t).unwrap();
    for j in 0..2 {
        let mut u = vec![0, 0];
        u[j] = 1;
        assert_eq!(evaluate(&p, &m.element(&MdrElement::new(u, vec![0, 0]).unwrap())).unwrap(), t.a[j]);
        let mut w = vec![0, 0];
        w[j] = 1;
        assert_eq!(evaluate(&p, &m.element(&MdrElement::new(vec![0, 0], w).unwrap())).unwrap(), t.b[j]);
    }
    assert!(matches!(m.point(&TdrPoint { a: vec![1, 1], b: vec![0, 5] }), Err(Error::NotAPoint(_))));
    for c in 0..m.lattice.fan().len() {
        let f = p.cone_functionals()[c].clone();
        assert_eq!(extend_from_cone(&m.lattice, c, &f).unwrap(), p);
    }
}

#[test]
fn m22_brute_force_agrees_with_certificate() {
    let m = Mdr::new(2, 2).unwrap();
    for a0 in -2..=2 {
        for a1 in -2..=2 {
            for b0 in -2..=2 {
                for b1 in -2..=2 {
                    let t = TdrPoint { a: vec![a0, a1], b: vec![b0, b1] };
                    let p = m.point_unchecked(&t);
                    let ok = is_point(&p).ok;
                    assert_eq!(ok, t.is_valid(), "{t:?}");
                    assert_eq!(brute_is_point(&p, 1), ok, "{t:?}");
                }
            }
        }
    }
}

#[test]
fn semialgebra_examples() {
    let ex = a1_example().unwrap();
    let l = &ex.lattice;
    let zero = SElem::single(Element::zero(l));
    let e10 = SElem::single(elem(l, &[1, 0]));
    let both = semialg_oplus(&zero, &e10);
    assert_eq!(both.members().len(), 2);
    assert_eq!(semialg_oplus(&e10, &SElem::Inf), e10);
    assert!(semialg_eq(&semialg_oplus(&e10, &e10), &e10).unwrap());
    let m = SElem::single(elem(l, &[0, 1]));
    let m2 = SElem::single(elem(l, &[0, -1]));
    let prod = semialg_star(&m, &m2).unwrap();
    assert!(semialg_eq(&prod, &both).unwrap());
    assert_eq!(semialg_star(&m, &SElem::Inf).unwrap(), SElem::Inf);
    assert!(semialg_eq(&semialg_star(&m, &zero).unwrap(), &m).unwrap());

    let p = a1_point(l, -1, 0, -1).unwrap();
    assert_eq!(point_eval_hom(&p, &prod).unwrap(), Some(-1));
    assert_eq!(point_eval_hom(&p, &SElem::Inf).unwrap(), None);
    assert!(in_pconv(&elem(l, &[0, 0]), &[elem(l, &[0, 0])]).unwrap());
    assert!(!in_pconv(&elem(l, &[1, 0]), &[elem(l, &[0, 0])]).unwrap());
}

#[test]
fn normalization_needs_a_dual() {
    let l = polyptych::families::trivial_lattice(2).unwrap();
    let s = SElem::from_elements(vec![elem(&l, &[0, 0]), elem(&l, &[1, 1])]);
    assert_eq!(normalize(&s), Err(Error::NoDualRegistered));
    assert_eq!(semialg_eq(&s, &s), Err(Error::NoDualRegistered));
    assert_eq!(semialg_oplus(&s, &s).members().len(), 2);
}

#[test]
fn normal_form_drops_interior_members() {
    let (_m, _n, pair) = polyptych::families::trivial_dual(2).unwrap();
    let l = pair.m().clone();
    let s = SElem::from_elements(vec![elem(&l, &[0, 0]), elem(&l, &[1, 1]), elem(&l, &[2, 2]), elem(&l, &[2, 0])]);
    let n = normalize(&s).unwrap();
    let kept: Vec<Vec<i64>> = n.members().iter().map(|e| e.base_coords().to_vec()).collect();
    assert_eq!(kept, vec![vec![0, 0], vec![2, 0], vec![2, 2]]);
    let seg = SElem::from_elements(vec![elem(&l, &[0, 0]), elem(&l, &[1, 0])]);
    let sq = semialg_star(&seg, &SElem::from_elements(vec![elem(&l, &[0, 0]), elem(&l, &[0, 1])])).unwrap();
    let corners: Vec<Vec<i64>> = sq.members().iter().map(|e| e.base_coords().to_vec()).collect();
    assert_eq!(corners, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
}

fn selem_in(l: &Arc<PolyptychLattice>, pts: &[(i64, i64)]) -> SElem {
    normalize(&SElem::from_elements(pts.iter().map(|&(x, y)| elem(l, &[x, y])).collect())).unwrap()
}

fn pts() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-2i64..=2, -2i64..=2), 1..4)
}

fn a1_param() -> impl Strategy<Value = (i64, i64)> {
    (-3i64..=3, -3i64..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn star_is_associative_and_commutative(a in pts(), b in pts(), c in pts()) {
        let ex = a1_example().unwrap();
        let l = &ex.lattice;
        let (a, b, c) = (selem_in(l, &a), selem_in(l, &b), selem_in(l, &c));
        let ab = semialg_star(&a, &b).unwrap();
        prop_assert!(semialg_eq(&ab, &semialg_star(&b, &a).unwrap()).unwrap());
        let left = semialg_star(&ab, &c).unwrap();
        let right = semialg_star(&a, &semialg_star(&b, &c).unwrap()).unwrap();
        prop_assert!(semialg_eq(&left, &right).unwrap());
        let zero = SElem::single(Element::zero(l));
        prop_assert!(semialg_eq(&semialg_star(&a, &zero).unwrap(), &a).unwrap());
        prop_assert!(semialg_eq(&semialg_oplus(&a, &a), &a).unwrap());
        prop_assert!(semialg_ge(&a, &semialg_oplus(&a, &b)).unwrap());
    }

    #[test]
    fn point_evaluation_is_a_morphism(a in pts(), b in pts(), (pa, pb) in a1_param(), k in 0i64..4) {
        let ex = a1_example().unwrap();
        let l = &ex.lattice;
        let p = a1_point(l, pa, pb, pa.min(0) - pb).unwrap();
        let (a, b) = (selem_in(l, &a), selem_in(l, &b));
        let (ha, hb) = (point_eval_hom(&p, &a).unwrap().unwrap(), point_eval_hom(&p, &b).unwrap().unwrap());
        prop_assert_eq!(point_eval_hom(&p, &semialg_oplus(&a, &b)).unwrap(), Some(ha.min(hb)));
        prop_assert_eq!(point_eval_hom(&p, &semialg_star(&a, &b).unwrap()).unwrap(), Some(ha + hb));
        prop_assert_eq!(point_eval_hom(&p.scaled(k), &a).unwrap(), Some(k * ha));
    }

    #[test]
    fn points_round_trip_through_cones((pa, pb) in a1_param(), which in 0usize..2) {
        let l = a1_lattice();
        let p = a1_point(&l, pa, pb, pa.min(0) - pb).unwrap();
        let c = &l.fan().cones[which].base;
        let f = restrict_to_cone(&p, c).unwrap().to_ints().unwrap();
        prop_assert_eq!(extend_from_cone(&l, which, &f).unwrap(), p);
    }

    #[test]
    fn chart_expressions_are_concave(
        (pa, pb) in a1_param(),
        u in prop::collection::vec(-5i64..=5, 2),
        v in prop::collection::vec(-5i64..=5, 2),
        num in 0i64..=4,
        chart in 0usize..2,
    ) {
        let l = a1_lattice();
        let p = a1_point(&l, pa, pb, pa.min(0) - pb).unwrap();
        let e = &p.chart_exprs()[chart];
        let t = frac(num, 4);
        let one_minus = rat(1) - &t;
        let ur: Vec<Rat> = u.iter().map(|x| rat(*x)).collect();
        let vr: Vec<Rat> = v.iter().map(|x| rat(*x)).collect();
        let mix: Vec<Rat> = ur.iter().zip(&vr).map(|(a, b)| &t * a + &one_minus * b).collect();
        prop_assert!(e.eval(&mix) >= &t * e.eval(&ur) + &one_minus * e.eval(&vr));
    }

    #[test]
    fn chart_linear_points_are_closed_under_sums(
        (a1, b1) in a1_param(), (a2, b2) in a1_param(), lam in 0i64..4, mu in 0i64..4, chart in 0usize..2,
    ) {
        let l = a1_lattice();
        let p = a1_point(&l, a1, b1, a1.min(0) - b1).unwrap();
        let q = a1_point(&l, a2, b2, a2.min(0) - b2).unwrap();
        if is_linear_on_chart(&p, chart).unwrap() && is_linear_on_chart(&q, chart).unwrap() {
            let s = combine_points(&p, &q, lam, mu, chart).unwrap();
            prop_assert!(is_point(&s).ok);
            prop_assert!(is_linear_on_chart(&s, chart).unwrap());
        }
    }
}
