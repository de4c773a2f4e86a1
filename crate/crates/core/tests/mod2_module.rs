use loopalg::mod2::{build_d2_module, decomposition_search, reconstructs, verify_chain_identity};

fn table(r: u32, n: u32) -> Vec<(String, String, String)> {
    build_d2_module(r, n)
        .unwrap()
        .table()
        .into_iter()
        .map(|v| (v.operation, v.source, v.value))
        .collect()
}

fn row(op: &str, src: &str, val: &str) -> (String, String, String) {
    (op.into(), src.into(), val.into())
}

#[test]
fn operation_table_r1() {
    for n in [2, 3] {
        assert_eq!(
            table(1, n),
            vec![
                row("Sq1", "Q1^1[v]", "v^2+L[u,v]"),
                row("Sq2", "Q1^1[v]", "Q1^1[u]"),
                row("Sq2", "v^2", "u^2"),
                row("Sq1", "u*v", "u^2"),
                row("Sq1", "L[u,v]", "0"),
                row("Sq2", "L[u,v]", "0"),
                row("b1", "Q1^1[v]", "v^2+L[u,v]"),
                row("b1", "u*v", "u^2"),
                row("b2", "L[u,v]", "Q1^1[u]"),
            ]
        );
    }
}

#[test]
fn operation_table_r2() {
    for n in [2, 3] {
        assert_eq!(
            table(2, n),
            vec![
                row("Sq1", "Q1^1[v]", "v^2"),
                row("Sq2", "Q1^1[v]", "0"),
                row("Sq2", "v^2", "0"),
                row("Sq1", "u*v", "0"),
                row("Sq1", "L[u,v]", "0"),
                row("Sq2", "L[u,v]", "0"),
                row("b1", "Q1^1[v]", "v^2"),
                row("b2", "u*v", "u^2"),
                row("b3", "L[u,v]", "Q1^1[u]"),
            ]
        );
    }
}

#[test]
fn cartan_and_nishida_hold() {
    for r in 1..=4 {
        for n in 2..=4 {
            build_d2_module(r, n).unwrap().consistency().unwrap();
        }
    }
}

#[test]
fn degrees_follow_n() {
    let m = build_d2_module(1, 3).unwrap();
    assert_eq!(m.degrees, [8, 9, 10, 10, 9, 11]);
    assert!(build_d2_module(0, 2).is_err());
    assert!(build_d2_module(1, 1).is_err());
}

#[test]
fn r1_is_indecomposable() {
    for n in [2, 3] {
        assert!(decomposition_search(&build_d2_module(1, n).unwrap()).is_empty());
    }
}

#[test]
fn higher_r_splits_off_the_bracket_pair() {
    for r in [2, 3] {
        let module = build_d2_module(r, 2).unwrap();
        let found = decomposition_search(&module);
        assert!(!found.is_empty());
        let target = found
            .iter()
            .find(|d| d.first == ["L[u,v]", "Q1^1[u]"])
            .expect("bracket pair splits off");
        assert_eq!(target.second, ["u^2", "u*v", "v^2", "Q1^1[v]"]);
        for d in &found {
            assert!(reconstructs(&module, d).unwrap());
            assert_eq!(d.first.len() + d.second.len(), 6);
        }
        let mirrored = found
            .iter()
            .filter(|d| d.second == ["L[u,v]", "Q1^1[u]"])
            .count();
        assert_eq!(mirrored, 2);
        assert_eq!(found.len(), 16);
    }
}

#[test]
fn chain_identity_coefficients() {
    for r in 1..=4 {
        let report = verify_chain_identity(r).unwrap();
        assert_eq!(report.coefficient, -(1 << (r + 1)));
        assert!(report.holds);
        assert_eq!(report.intermediate, "0");
    }
    assert_eq!(verify_chain_identity(1).unwrap().result, "-4*e1(x)b(x)b");
}
