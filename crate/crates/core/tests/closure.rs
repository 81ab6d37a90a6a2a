mod common;

use common::*;
use pfaff_core::classify::{catalog, Label};
use pfaff_core::closure::{in_closure, laplace_cubic, test_piece, witness_is_valid, Branch, Certificate, CubicForm};
use pfaff_core::exactalg::{Polynomial, Var};
use pfaff_core::pfaffcalc::{ideal_piece, SkewLinMatrix};
use pfaff_core::strata::{family, Arrow};
use pfaff_core::Error;

#[test]
fn ce_pieces_strictly_contain_unsaturated() {
    for label in [Label::C, Label::E] {
        let m = catalog(label).m;
        let plain = ideal_piece(&m.sub_pfaffians(), 3).unwrap();
        let sat = test_piece(&m).unwrap();
        assert!(sat.contains(&plain).unwrap());
        assert_eq!((plain.dim(), sat.dim()), (26, 28), "{label}");
    }
}

#[test]
fn abd_witnesses_from_laplace_combinations() {
    let mut r = rng(1);
    for label in [Label::A, Label::B, Label::D] {
        let m = catalog(label).m;
        for _ in 0..5 {
            let n = random_skew_lin(&mut r);
            let f = laplace_cubic(&m, &n);
            let Ok(f) = CubicForm::new(f) else { continue };
            let v = in_closure(&m, &f).unwrap();
            assert_eq!(v.branch, Branch::TypeAbd);
            let Some(Certificate::Witness(j)) = &v.certificate else {
                panic!("{label}: no witness");
            };
            assert!(witness_is_valid(j, &f));
        }
    }
}

#[test]
fn b_witness_from_block_quadric() {
    let m = catalog(Label::B).m;
    let q = m.sub_pfaffians().into_iter().find(|p| !p.is_zero()).unwrap();
    let f = CubicForm::new(&Polynomial::x(2) * &q).unwrap();
    let v = in_closure(&m, &f).unwrap();
    assert!(matches!(&v.certificate, Some(Certificate::Witness(j)) if witness_is_valid(j, &f)));
}

#[test]
fn witness_refuses_cubics_outside_the_piece() {
    let m = catalog(Label::A).m;
    let piece = test_piece(&m).unwrap();
    let f = pfaff_core::exactalg::MonomialBasis::x(3)
        .monomials()
        .iter()
        .map(|mono| Polynomial::from_terms([(mono.clone(), pfaff_core::exactalg::q(1))]))
        .find(|p| !piece.contains_poly(p).unwrap())
        .unwrap();
    let f = CubicForm::new(f).unwrap();
    assert!(matches!(
        pfaff_core::closure::witness_jet(&m, &f),
        Err(Error::NotInPiece)
    ));
    assert!(!in_closure(&m, &f).unwrap().is_yes());
}

#[test]
fn ce_monotone_over_unsaturated_test() {
    let mut r = rng(2);
    for label in [Label::C, Label::E] {
        let m = catalog(label).m;
        let plain = ideal_piece(&m.sub_pfaffians(), 3).unwrap();
        for _ in 0..5 {
            let f = CubicForm::new(random_in_piece(&mut r, &plain)).unwrap();
            assert!(in_closure(&m, &f).unwrap().is_yes());
        }
    }
}

#[test]
fn consistent_with_families() {
    let mut r = rng(3);
    for arrow in [Arrow::AC, Arrow::BC, Arrow::CE, Arrow::DE, Arrow::EF] {
        let fam = family(arrow);
        let m0 = fam.special_member();
        let mt = fam.at(&nonzero_rational(&mut r));
        let p0 = test_piece(&m0).unwrap();
        let pt = test_piece(&mt).unwrap();
        let both = p0.intersection(&pt).unwrap();
        if both.is_zero() {
            continue;
        }
        let f = CubicForm::new(random_in_piece(&mut r, &both)).unwrap();
        assert!(in_closure(&m0, &f).unwrap().is_yes(), "{arrow} at 0");
        assert!(in_closure(&mt, &f).unwrap().is_yes(), "{arrow} generic");
    }
}

#[test]
fn equivariance_sample() {
    let mut r = rng(4);
    for label in Label::ALL {
        let m = catalog(label).m;
        let piece = test_piece(&m).unwrap();
        let f = CubicForm::new(random_in_piece(&mut r, &piece) + random_cubic(&mut r).scale(&small_rational(&mut r)))
            .unwrap_or_else(|_| CubicForm::new(Polynomial::x(0).pow(3)).unwrap());
        let b = random_invertible(&mut r, 6);
        let c = random_invertible(&mut r, 5);
        let m2: SkewLinMatrix = m.congruence(&b).change_coordinates(&c);
        let f2 = f.change_coordinates(&c);
        let (v1, v2) = (in_closure(&m, &f).unwrap(), in_closure(&m2, &f2).unwrap());
        assert_eq!((v1.answer, v1.branch), (v2.answer, v2.branch), "{label}");
    }
}

#[test]
fn cubic_json_roundtrip() {
    let f = CubicForm::new(Polynomial::var(Var::x(3)).pow(3)).unwrap();
    let s = serde_json::to_string(&f).unwrap();
    assert_eq!(s, r#"{"0,0,0,3,0":"1"}"#);
    assert_eq!(serde_json::from_str::<CubicForm>(&s).unwrap(), f);
}
