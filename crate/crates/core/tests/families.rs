use pfaff_core::classify::Label;
use pfaff_core::exactalg::{frac, q};
use pfaff_core::strata::{case3_blocks, case3_family, verify_family, Arrow};

#[test]
fn stratification_arrows() {
    for arrow in Arrow::STRATIFICATION {
        let r = verify_family(arrow, &q(3));
        for c in &r.checks {
            eprintln!("{arrow} {}: {:?} {}", c.name, c.status, c.detail);
        }
        assert!(r.passed(), "{arrow}");
    }
}

#[test]
fn arrows_at_another_parameter() {
    for arrow in Arrow::STRATIFICATION {
        assert!(verify_family(arrow, &frac(-2, 7)).passed(), "{arrow}");
    }
}

#[test]
fn case3_chain() {
    let (a, b) = case3_blocks();
    let r = case3_family(&a, &b, 4, &q(2)).unwrap();
    for c in &r.checks {
        eprintln!("{}: {:?} {}", c.name, c.status, c.detail);
    }
    assert!(r.passed());
    assert_eq!(r.generic_type, Some(Label::C));
}
