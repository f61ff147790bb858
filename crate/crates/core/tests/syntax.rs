mod common;

use proptest::prelude::*;
use topomodal_core::syntax::{language_of, parse_fo, parse_modal, print_fo, print_modal, Language};

fn roundtrip_tier(lang: Language) -> Result<(), TestCaseError> {
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig::with_cases(10_000));
    runner
        .run(&common::modal(lang, 4), |phi| {
            let text = print_modal(&phi);
            prop_assert_eq!(parse_modal(&text).unwrap(), phi.clone(), "{}", text);
            let found = language_of(&phi).unwrap();
            prop_assert!(lang.includes(found), "{} is in {}", text, found.name());
            Ok(())
        })
        .map_err(|e| TestCaseError::fail(e.to_string()))
}

#[test]
fn modal_roundtrip_ml() {
    roundtrip_tier(Language::Ml).unwrap();
}

#[test]
fn modal_roundtrip_modal_e() {
    roundtrip_tier(Language::ModalE).unwrap();
}

#[test]
fn modal_roundtrip_modal_d() {
    roundtrip_tier(Language::ModalD).unwrap();
}

#[test]
fn modal_roundtrip_hybrid_at() {
    roundtrip_tier(Language::HybridAt).unwrap();
}

#[test]
fn modal_roundtrip_hybrid_e() {
    roundtrip_tier(Language::HybridE).unwrap();
}

#[test]
fn modal_roundtrip_hybrid_e_down() {
    roundtrip_tier(Language::HybridEDown).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn fo_roundtrip(phi in common::fo(4)) {
        let text = print_fo(&phi);
        prop_assert_eq!(parse_fo(&text).unwrap(), phi, "{}", text);
    }
}

#[test]
fn named_examples_parse() {
    for text in [
        "[]([](p0 -> []p0) -> p0) -> []p0",
        "A([]p0 | []~p0) -> (A p0 | A ~p0)",
        "<>i0 -> i0",
        "!x0.[]x0",
        "@i0 <>i1 & @i1 <>i0 -> @i0 i1",
    ] {
        let phi = parse_modal(text).unwrap();
        assert_eq!(parse_modal(&print_modal(&phi)).unwrap(), phi);
    }
}

#[test]
fn parse_errors_carry_positions() {
    let e = parse_modal("p0 & (p1 |").unwrap_err();
    assert_eq!(e.pos, 10);
    let e = parse_fo("(and (P p0 x0)").unwrap_err();
    assert!(e.pos > 0);
    assert!(parse_modal("q0").is_err());
}
