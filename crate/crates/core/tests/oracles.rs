use loopalg::models::{build_fibre_page_model, build_tensor_model};
use loopalg::oracle::{page_homology_check, primitives_check, straightening_check};
use loopalg::term::Grading;
use loopalg::Coefficients;

#[test]
fn lie_basis_counts_match_primitives() {
    for p in [3, 5] {
        let report = primitives_check(Grading::new(p, 2).unwrap(), 12).unwrap();
        assert!(report.passed(), "{:?}", report.mismatches);
        assert_eq!(report.cases, 12);
    }
}

#[test]
fn restricted_cube_of_v_is_counted() {
    let report = primitives_check(Grading::new(3, 2).unwrap(), 12).unwrap();
    let row = report.rows.iter().find(|r| r.degree == 12).unwrap();
    let lie_only = loopalg::lie::LieBasis::new(Grading::new(3, 2).unwrap(), 11)
        .unwrap()
        .counts_by_suspended_degree()
        .get(&12)
        .copied()
        .unwrap_or(0);
    assert_eq!(row.brute_force, lie_only + 1);
}

#[test]
fn straightening_agrees_with_commutators() {
    for p in [3, 5] {
        let report = straightening_check(Grading::new(p, 2).unwrap(), 4).unwrap();
        assert!(report.passed(), "{:?}", report.mismatches);
        assert!(report.cases > 20);
    }
}

#[test]
fn engine_pages_match_direct_homology() {
    let tensor = build_tensor_model(Coefficients::new(3, 1).unwrap(), 2, 13).unwrap();
    assert!(page_homology_check(&tensor, 0..=12).unwrap().passed());
    let fibre = build_fibre_page_model(Coefficients::new(3, 2).unwrap(), 2, 1, 24, 1).unwrap();
    let report = page_homology_check(&fibre, 0..=22).unwrap();
    assert!(report.passed(), "{:?}", report.mismatches);
}
