use selfsim::catalog::{construct, entries, CatalogParams};
use selfsim::json::{from_str, to_pretty, AlgebraJson, CatalogJson, OperatorJson, PsiJson, ThetaJson};
use selfsim::report::{verify, CheckKind, VerificationReport};
use selfsim::structure::ConditionProfile;
use selfsim::wreath::level_operator_matrix;
use selfsim::FieldSpec;

#[test]
fn catalog_objects_round_trip() {
    for e in entries() {
        let object = construct(e.name, &e.defaults).unwrap();
        let json = CatalogJson::from_object(&object);
        let text = to_pretty(&json);
        let parsed: CatalogJson = from_str(&text).unwrap();
        assert_eq!(to_pretty(&parsed), text, "{}", e.name);
        let back = parsed.to_object().unwrap();
        assert_eq!(*back.algebra, *object.algebra, "{}", e.name);
        assert_eq!(back.issues, object.issues, "{}", e.name);
        assert_eq!(back.profile, object.profile, "{}", e.name);
        match (&back.psi, &object.psi) {
            (Some(a), Some(b)) => assert_eq!(a.images(), b.images(), "{}", e.name),
            (None, None) => {}
            _ => panic!("{}: structure lost", e.name),
        }
        match (&back.ve, &object.ve) {
            (Some(a), Some(b)) => {
                assert_eq!(a.ideal(), b.ideal());
                assert_eq!(a.images(), b.images());
                assert_eq!(a.section_indices(), b.section_indices());
            }
            (None, None) => {}
            _ => panic!("{}: virtual endomorphism lost", e.name),
        }
    }
}

#[test]
fn psi_and_theta_files_rebuild_the_structure() {
    let object = construct("lamplighter", &CatalogParams::new(3, 2, 6)).unwrap();
    let algebra: AlgebraJson = from_str(&to_pretty(&AlgebraJson::from_algebra(&object.algebra))).unwrap();
    let algebra = std::sync::Arc::new(algebra.to_algebra().unwrap());
    let theta: ThetaJson = from_str(&to_pretty(&ThetaJson::from_endomorphism(object.ve.as_ref().unwrap()))).unwrap();
    let ve = theta.to_endomorphism(algebra).unwrap();
    let psi = selfsim::structure::build_psi(&ve, &ConditionProfile::AbelianB).unwrap();
    assert_eq!(psi.images(), object.psi.as_ref().unwrap().images());

    let text = to_pretty(&PsiJson::from_structure(&psi));
    let back: PsiJson = from_str(&text).unwrap();
    let back = back.to_structure().unwrap();
    assert_eq!(back.images(), psi.images());
    let a = back.algebra().parse_element("q1 - a0").unwrap();
    let m1 = OperatorJson::from_matrix(&level_operator_matrix(&back.engine(), &a, 2).unwrap());
    let m2 = OperatorJson::from_matrix(&level_operator_matrix(&psi.engine(), &a, 2).unwrap());
    assert_eq!(to_pretty(&m1), to_pretty(&m2));
}

#[test]
fn field_specs_serialize_by_kind() {
    assert_eq!(serde_json::to_string(&FieldSpec::prime(5).unwrap()).unwrap(), r#"{"kind":"prime","p":5}"#);
    assert_eq!(serde_json::to_string(&FieldSpec::rational()).unwrap(), r#"{"kind":"rational"}"#);
    assert!(from_str::<FieldSpec>(r#"{"kind":"prime","p":6}"#).is_err());
}

#[test]
fn profiles_parse_and_print() {
    for text in ["abelian_B", "witt_sl2:1", "frank:2", "sl_np1:3", "heisenberg", "heisenberg_central"] {
        let p: ConditionProfile = text.parse().unwrap();
        assert_eq!(p.to_string(), text);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<ConditionProfile>(&json).unwrap(), p);
    }
    assert!("witt_sl2".parse::<ConditionProfile>().is_err());
}

#[test]
fn reports_round_trip() {
    let object = construct("abelian_fixed", &CatalogParams::new(3, 1, 0)).unwrap();
    let report = verify(&object, &CheckKind::ALL, 2).unwrap();
    let back: VerificationReport = from_str(&to_pretty(&report)).unwrap();
    assert_eq!(back, report);
    assert!(!report.passed());
}
