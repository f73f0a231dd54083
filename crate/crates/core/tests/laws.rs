use nondiophantine::selftest::lower_close;
use nondiophantine::{Bijection, Error, Execution};
use proptest::prelude::*;

fn contexts() -> Vec<(Bijection, f64)> {
    vec![
        (Bijection::identity(), 50.0),
        (Bijection::power(3).unwrap(), 50.0),
        (Bijection::fechner(10.0, -20.0).unwrap(), 50.0),
        (Bijection::tangent(1.0).unwrap(), 50.0),
        (Bijection::artanh(2.0).unwrap(), 1.2),
    ]
}

proptest! {
    #[test]
    fn add_and_mul_are_conjugated(i in 0usize..5, a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let (ctx, radius) = &contexts()[i];
        let (a, b) = (a * radius, b * radius);
        let (x, y) = (ctx.from_lower(a).unwrap(), ctx.from_lower(b).unwrap());
        prop_assert!(lower_close(ctx.to_lower(ctx.add(x, y).unwrap()).unwrap(), a + b));
        if (a * b).abs() < *radius {
            prop_assert!(lower_close(ctx.to_lower(ctx.mul(x, y).unwrap()).unwrap(), a * b));
        }
        prop_assert_eq!(ctx.add(x, y).unwrap(), ctx.add(y, x).unwrap());
    }

    #[test]
    fn subtraction_undoes_addition(i in 0usize..5, a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let (ctx, radius) = &contexts()[i];
        let (x, y) = (ctx.from_lower(a * radius).unwrap(), ctx.from_lower(b * radius).unwrap());
        let back = ctx.sub(ctx.add(x, y).unwrap(), y).unwrap();
        prop_assert!(lower_close(ctx.to_lower(back).unwrap(), ctx.to_lower(x).unwrap()));
    }

    #[test]
    fn order_is_inherited(i in 0usize..5, a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let (ctx, radius) = &contexts()[i];
        let (x, y) = (ctx.from_lower(a * radius).unwrap(), ctx.from_lower(b * radius).unwrap());
        prop_assert_eq!(ctx.compare(x, y).unwrap(), (a * radius).partial_cmp(&(b * radius)).unwrap());
    }

    #[test]
    fn weber_increments_compose(x in 0.1f64..100.0, k1 in 0.0f64..3.0, k2 in 0.0f64..3.0) {
        let ctx = Bijection::fechner(2.0, 1.0).unwrap();
        // successive stimulus ratios multiply, their increments (+)-add
        let first = ctx.weber_increment(ctx.upper(x).unwrap(), k1).unwrap();
        let second = ctx.weber_increment(ctx.upper(x * (1.0 + k1)).unwrap(), k2).unwrap();
        let total = ctx.weber_increment(ctx.upper(x).unwrap(), (1.0 + k1) * (1.0 + k2) - 1.0).unwrap();
        let sum = ctx.add(first, second).unwrap();
        prop_assert!(lower_close(ctx.to_lower(sum).unwrap(), ctx.to_lower(total).unwrap()));
    }
}

#[test]
fn neutral_elements_are_preimages() {
    let fechner = Bijection::fechner(10.0, -20.0).unwrap();
    assert!((fechner.zero().value() - 2.0f64.exp()).abs() < 1e-12);
    assert!((fechner.one().value() - 2.1f64.exp()).abs() < 1e-12);
    let tan = Bijection::tangent(20.0).unwrap();
    assert_eq!(tan.zero().value(), 0.0);
    assert!((tan.one().value() - 5.0).abs() < 1e-14);
}

#[test]
fn contexts_do_not_mix() {
    let a = Bijection::tangent(1.0).unwrap();
    let b = Bijection::tangent(2.0).unwrap();
    assert_eq!(a.add(a.one(), b.one()), Err(Error::ContextMismatch));
    assert_eq!(Bijection::tangent(1.0).unwrap().id(), a.id());
}

#[test]
fn axiom_suite_is_seed_deterministic() {
    for ctx in nondiophantine::selftest::catalog() {
        let seq = nondiophantine::selftest::field_axioms(&ctx, 500, 7, Execution::Sequential);
        let par = nondiophantine::selftest::field_axioms(&ctx, 500, 7, Execution::Parallel);
        assert_eq!(seq, par, "{ctx}");
        assert!(seq.passed(), "{ctx}: {:?}", seq.failures);
    }
}
