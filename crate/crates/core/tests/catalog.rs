use pfaff_core::classify::{catalog, classify, fingerprint, verify_table1, Label, FINGERPRINTS};
use pfaff_core::tangent::{cone_deg2, orbit_codim, tangent_codim};

#[test]
fn fingerprints_match_frozen_table() {
    for (label, expect) in FINGERPRINTS {
        assert_eq!(fingerprint(&catalog(label).m).unwrap(), expect, "{label}");
    }
}

#[test]
fn catalog_classifies_to_itself() {
    for label in Label::ALL {
        let t = classify(&catalog(label).m).unwrap();
        assert_eq!(t.label, label);
        assert_eq!(t.stability, label.stability());
    }
}

#[test]
fn table1_checks_pass() {
    for label in Label::ALL {
        let r = verify_table1(label);
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn tangent_codims() {
    let got: Vec<usize> = Label::ALL
        .iter()
        .map(|&l| tangent_codim(&catalog(l).m).unwrap())
        .collect();
    assert_eq!(got, [28, 27, 26, 27, 26, 22]);
}

#[test]
fn cone_dims() {
    let got: Vec<usize> = Label::ALL
        .iter()
        .map(|&l| cone_deg2(&catalog(l).m).unwrap().dim())
        .collect();
    assert_eq!(got, [0, 0, 2, 0, 2, 9]);
}

#[test]
fn orbit_codims() {
    let got: Vec<usize> = Label::ALL.iter().map(|&l| orbit_codim(&catalog(l).m)).collect();
    assert_eq!(got, [28, 27, 29, 28, 30, 34]);
}

#[test]
fn tangent_codim_bounded_by_orbit_codim() {
    for l in Label::ALL {
        let m = catalog(l).m;
        assert!(tangent_codim(&m).unwrap() <= orbit_codim(&m), "{l}");
    }
}

#[test]
fn cones_match_printed_table() {
    use pfaff_core::tangent::printed_cone;
    for l in Label::ALL {
        let cone = cone_deg2(&catalog(l).m).unwrap();
        let printed = printed_cone(l).quadrics().unwrap();
        assert!(cone.equals_span(&printed).unwrap(), "{l}");
    }
}

#[test]
fn parametric_two_jets() {
    use pfaff_core::tangent::parametric_2jet_check;
    for l in [Label::C, Label::E] {
        let r = parametric_2jet_check(&catalog(l).m, 10).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!((r.ideal_dim, r.saturated_dim), (26, 28));
    }
    assert!(matches!(
        parametric_2jet_check(&catalog(Label::A).m, 10),
        Err(pfaff_core::Error::WrongType(Label::A))
    ));
}
