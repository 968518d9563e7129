//! End-to-end assemblies: the full pipeline from a nested chain and the
//! fixture hole codes up to large MDS(2,5,·) codes.

use mdscube::{
    mds_check, order13_ingredients, prop7_assemble, theorem2_pipeline, Error,
};

#[test]
fn pipeline_order_84() {
    let c = theorem2_pipeline(5).expect("order-84 assembly");
    assert_eq!(c.q(), 84);
    assert_eq!(c.dim(), 5);
    assert_eq!(c.len(), 84usize.pow(3));
    // theorem2_pipeline re-verifies internally; this re-check pins the
    // public contract of the returned value
    assert!(mds_check(&c, 2).pass);
}

#[test]
fn pipeline_rejects_inadmissible_orders() {
    match theorem2_pipeline(6) {
        Err(Error::NotAdmissible { p: 2, .. }) => {}
        other => panic!("expected NotAdmissible for the factor 2, got {other:?}"),
    }
    match theorem2_pipeline(20) {
        Err(Error::ChainNotFound { q: 4, .. }) => {}
        other => panic!("expected ChainNotFound for the factor 4, got {other:?}"),
    }
}

#[test]
fn order13_assembly_is_deterministic() {
    let (m, m1, d, e, f) = order13_ingredients().unwrap();
    let a = prop7_assemble(&m, &m1, &d, &e, &f).unwrap();
    let b = prop7_assemble(&m, &m1, &d, &e, &f).unwrap();
    assert_eq!(a.flat(), b.flat());
}
