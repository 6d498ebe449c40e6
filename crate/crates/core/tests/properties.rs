mod common;

use common::{case, chain_violations, FAMILIES};
use proptest::prelude::*;
use smile_domain::{certify_svi, OracleConfig, RawSvi};

fn unit3() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(0.0..1.0f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn vanishing_up_chain(u in unit3()) {
        let v = chain_violations(&case("vanishing-up", u));
        prop_assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn vanishing_down_chain(u in unit3()) {
        let v = chain_violations(&case("vanishing-down", u));
        prop_assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn extremal_chain(u in unit3()) {
        let v = chain_violations(&case("extremal", u));
        prop_assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn symmetric_chain(u in unit3()) {
        let v = chain_violations(&case("symmetric", u));
        prop_assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn ssvi_chain(u in unit3()) {
        let v = chain_violations(&case("ssvi", u));
        prop_assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn generic_inversion_preserves_verdict(
        a in -0.05..0.3f64,
        b in 0.05..1.0f64,
        rho in -0.95..0.95f64,
        m in -0.5..0.5f64,
        sigma in 0.05..1.0f64,
    ) {
        let raw = RawSvi { a, b, rho, m, sigma };
        prop_assume!(raw.validate().is_ok());
        let cfg = OracleConfig::default();
        let here = certify_svi(&raw, &cfg).map(|c| c.verdict);
        let there = certify_svi(&raw.invert(), &cfg).map(|c| c.verdict);
        match (here, there) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
            (Err(x), Err(y)) => prop_assert_eq!(x.is_arbitrage(), y.is_arbitrage()),
            (x, y) => prop_assert!(false, "{x:?} vs {y:?}"),
        }
    }

    #[test]
    fn family_verdict_matches_generic_oracle(f in 0usize..5, u in unit3()) {
        let c = case(FAMILIES[f], u);
        let generic = certify_svi(&c.raw, &OracleConfig::default()).map(|c| c.verdict).unwrap_or(false);
        prop_assert_eq!(c.verdict, generic, "{}", c.label);
    }
}
