use polyptych::detrop::{alg_mul, Adr, AlgebraElement};
use polyptych::families::MdrElement;
use polyptych::polyhedra::Rat;
use polyptych_cli::expr::{format_expr, parse_expr};
use proptest::prelude::*;

fn element(adr: &Adr, terms: &[(Vec<i64>, Vec<i64>, i64)]) -> AlgebraElement<MdrElement> {
    let mut out = AlgebraElement::zero();
    for (u, w, c) in terms {
        let m = adr.monomial(u, w).unwrap();
        out = out.add(&m.scale(&Rat::from_integer((*c).into())));
    }
    out
}

fn terms() -> impl Strategy<Value = Vec<(Vec<i64>, Vec<i64>, i64)>> {
    prop::collection::vec(
        (prop::collection::vec(0i64..3, 2), prop::collection::vec(-2i64..3, 2), -3i64..4),
        0..5,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_then_parse_is_identity(t in terms()) {
        let adr = Adr::new(2, 2).unwrap();
        let f = element(&adr, &t);
        let printed = format_expr(&f);
        let back = parse_expr(&adr, &printed).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn parsed_products_match_algebra_products(s in terms(), t in terms()) {
        let adr = Adr::new(2, 2).unwrap();
        let (f, g) = (element(&adr, &s), element(&adr, &t));
        let text = format!("({}) * ({})", format_expr(&f), format_expr(&g));
        prop_assert_eq!(parse_expr(&adr, &text).unwrap(), alg_mul(&adr, &f, &g));
    }
}
