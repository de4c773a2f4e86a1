use loopalg::algebra::{free_dimensions, AlgebraKind, Generator, GradedAlgebra};
use loopalg::bss::{
    check_acyclic, compute_page, survivor_check, verify_presented_page, Presentation,
};
use loopalg::freecomm::generator_table;
use loopalg::models::{
    build_fibre_page_model, build_omega2_model, build_tensor_model, fibre_page_presentation,
    sigma_tau_classes, ModelParams, ModelRegistry,
};
use loopalg::{Coefficients, Error, LinComb, Parity};

fn c(p: u64, r: u32) -> Coefficients {
    Coefficients::new(p, r).unwrap()
}

fn element_of(model: &loopalg::bss::StagedModel, name: &str) -> LinComb<Vec<u16>> {
    let g = model
        .generator_index(name)
        .unwrap_or_else(|| panic!("{name} missing"));
    LinComb::single(model.field(), vec![g], 1)
}

#[test]
fn tensor_pages_collapse_after_r() {
    for (p, r) in [(3, 1), (3, 2), (5, 1)] {
        let model = build_tensor_model(c(p, r), 2, 15).unwrap();
        let words = free_dimensions(
            AlgebraKind::Associative,
            &[(3, Parity::Odd), (4, Parity::Even)],
            true,
            14,
        );
        for s in 1..=r {
            let page = compute_page(&model, s, 0..=14, None).unwrap();
            for d in 0..=14 {
                assert_eq!(
                    page.degree_dim(d) as u128,
                    words[d as usize],
                    "p={p} r={r} s={s} d={d}"
                );
            }
        }
        let report = check_acyclic(&model, r, 1..=14).unwrap();
        assert!(report.acyclic, "{report:?}");
    }
}

#[test]
fn tensor_presentations() {
    let model = build_tensor_model(c(3, 1), 2, 13).unwrap();
    let unit = Presentation {
        kind: AlgebraKind::Commutative,
        generators: vec![],
    };
    assert!(
        verify_presented_page(&model, 2, &unit, 0..=12)
            .unwrap()
            .matches
    );
    let free = Presentation {
        kind: AlgebraKind::Associative,
        generators: vec![Generator::named("u", 3, 1), Generator::named("v", 4, 1)],
    };
    assert!(
        verify_presented_page(&model, 1, &free, 0..=12)
            .unwrap()
            .matches
    );
    assert!(
        !verify_presented_page(&model, 2, &free, 0..=12)
            .unwrap()
            .matches
    );
}

#[test]
fn leibniz_on_a_square_word() {
    let model = build_tensor_model(c(3, 1), 2, 9).unwrap();
    let der = model.derivation(1).unwrap();
    let fp = model.field();
    let image = model.algebra().apply_derivation(fp, der, &vec![1, 1]);
    assert_eq!(image.coeff(&vec![0, 1]), 1);
    assert_eq!(image.coeff(&vec![1, 0]), 1);
    assert_eq!(model.render_comb(&image), "u*v + v*u");
}

#[test]
fn first_page_is_the_whole_algebra() {
    let model = build_omega2_model(c(3, 2), 2, 12, 6, 1).unwrap();
    let table = generator_table(c(3, 2), 2, 12, 6).unwrap();
    let page = compute_page(&model, 1, 0..=11, None).unwrap();
    for d in 0..=11 {
        assert_eq!(
            page.degree_dim(d),
            table.algebra().basis(d, None).len(),
            "degree {d}"
        );
    }
}

#[test]
fn empty_schedule_is_not_acyclic() {
    let model = build_tensor_model(c(3, 4), 2, 9).unwrap();
    let report = check_acyclic(&model, 1, 1..=8).unwrap();
    assert!(!report.acyclic);
    assert_eq!(report.residual.first(), Some(&(3, 1, 1)));
}

#[test]
fn dyer_lashof_pair_dies_on_page_two() {
    let model = build_omega2_model(c(3, 2), 2, 12, 3, 1).unwrap();
    let page = compute_page(&model, 2, 10..=11, Some(3)).unwrap();
    let top = &page.slices[&(11, 3)];
    assert_eq!(top.dim, 0);
    assert_eq!(top.killed_by, Some(1));
    let q = element_of(&model, "Q1^1[v]");
    let bq = element_of(&model, "bQ1^1[v]");
    assert!(!survivor_check(&model, &q, 2).unwrap().nonzero);
    let dead = survivor_check(&model, &bq, 2).unwrap();
    assert!(!dead.nonzero);
    assert_eq!(dead.page_reached, 1);
    assert!(dead.obstruction.unwrap().contains("boundary of the page 1"));
}

#[test]
fn schedule_values() {
    let model = build_omega2_model(c(3, 2), 2, 12, 3, 1).unwrap();
    let on = |page: u32, name: &str| {
        let g = model.generator_index(name).unwrap();
        model.render_comb(&model.derivation(page).unwrap()[&g])
    };
    assert_eq!(on(1, "Q1^1[v]"), "bQ1^1[v]");
    assert_eq!(on(2, "v"), "u");
    assert_eq!(on(2, "L[u,v]"), "2*L[u,u]");
    let pair = sigma_tau_classes(c(3, 2), 2, 1).unwrap();
    let (tau, coeff) = pair.tau_term();
    assert_eq!(tau.render(), "L[v,L[u,v]]");
    let expected = model.render_comb(
        &pair
            .sigma
            .map_keys(model.field(), |t| {
                vec![model.generator_index(t.render()).unwrap()]
            })
            .scaled(model.field(), model.field().inv(coeff)),
    );
    assert_eq!(on(3, "L[v,L[u,v]]"), expected);
}

#[test]
fn class_pair_degrees() {
    let pair = sigma_tau_classes(c(3, 1), 2, 1).unwrap();
    assert_eq!(pair.tau_degree(), 10);
    assert_eq!(pair.sigma_degree(), Some(9));
    assert_eq!(pair.weight(), 3);
    assert!(matches!(
        sigma_tau_classes(c(3, 1), 2, 0),
        Err(Error::InvalidInput(_))
    ));
    assert!(matches!(
        sigma_tau_classes(c(2, 1), 2, 1),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn tau_and_sigma_survive_to_r_plus_one() {
    for r in [1, 2] {
        let model = build_omega2_model(c(3, r), 2, 12, 3, 1).unwrap();
        let pair = sigma_tau_classes(c(3, r), 2, 1).unwrap();
        let to_el = |x: &LinComb<loopalg::Term>| {
            x.map_keys(model.field(), |t| {
                vec![model.generator_index(t.render()).unwrap()]
            })
        };
        for class in [to_el(&pair.tau), to_el(&pair.sigma)] {
            let rep = survivor_check(&model, &class, r + 1).unwrap();
            assert!(rep.nonzero, "r={r}: {rep:?}");
        }
        let table = generator_table(c(3, r), 2, 12, 3).unwrap();
        let names: Vec<String> = table
            .algebra()
            .basis(10, Some(3))
            .iter()
            .map(|e| table.monomial(e).render())
            .collect();
        assert_eq!(names, ["L[v,L[u,v]]", "bQ1^1[v]"]);
    }
}

#[test]
fn fibre_page_homology() {
    let model = build_fibre_page_model(c(3, 1), 2, 2, 25, 1).unwrap();
    let names: Vec<(String, u32)> = model
        .generators()
        .iter()
        .map(|g| (g.name.clone(), g.degree))
        .collect();
    assert_eq!(
        &names[..3],
        &[
            ("tau'_0".into(), 3),
            ("tau'_1".into(), 11),
            ("sigma'_1".into(), 10)
        ]
    );
    let report = check_acyclic(&model, 2, 1..=24).unwrap();
    assert_eq!(report.residual, vec![(3, 1, 1)]);
    let claim = fibre_page_presentation(c(3, 1), 2, 2);
    assert!(
        verify_presented_page(&model, 2, &claim, 0..=24)
            .unwrap()
            .matches
    );
}

#[test]
fn unit_rescaling_keeps_dimensions() {
    let one = build_fibre_page_model(c(5, 1), 2, 1, 30, 1).unwrap();
    let two = build_fibre_page_model(c(5, 1), 2, 1, 30, 2).unwrap();
    for s in 1..=3 {
        let a = compute_page(&one, s, 0..=30, None).unwrap();
        let b = compute_page(&two, s, 0..=30, None).unwrap();
        for d in 0..=30 {
            assert_eq!(a.degree_dim(d), b.degree_dim(d));
        }
    }
    let rescaled = one.rescaled(2).unwrap();
    assert_eq!(rescaled.to_json(), two.to_json());
}

#[test]
fn pages_are_monotone_and_deterministic() {
    let model = build_omega2_model(c(3, 2), 2, 12, 6, 1).unwrap();
    let mut prev = compute_page(&model, 1, 0..=11, None).unwrap();
    for s in 2..=3 {
        let page = compute_page(&model, s, 0..=11, None).unwrap();
        for (key, slice) in &page.slices {
            assert!(slice.dim <= prev.slices[key].dim);
        }
        assert_eq!(page.dim(0, 0), 1);
        prev = page;
    }
    let a = compute_page(&model, 3, 0..=11, None)
        .unwrap()
        .to_json()
        .to_string();
    let b = compute_page(&model, 3, 0..=11, None)
        .unwrap()
        .to_json()
        .to_string();
    assert_eq!(a, b);
}

#[test]
fn cutoff_edges_are_errors() {
    let model = build_tensor_model(c(3, 1), 2, 12).unwrap();
    assert!(matches!(
        compute_page(&model, 2, 1..=12, None),
        Err(Error::RangeIncomplete(_))
    ));
    assert!(compute_page(&model, 1, 1..=12, None).is_ok());
    assert!(matches!(
        compute_page(&model, 2, 1..=13, None),
        Err(Error::RangeIncomplete(_))
    ));
    let omega = build_omega2_model(c(3, 1), 2, 12, 2, 1).unwrap();
    assert!(matches!(
        compute_page(&omega, 1, 0..=12, None),
        Err(Error::CutoffExceeded(_))
    ));
}

#[test]
fn registry_selects_by_name() {
    let reg = ModelRegistry::default();
    assert_eq!(reg.names(), ["omega2", "tensor", "fibre"]);
    let params = ModelParams::new(c(3, 1), 2, 13);
    assert_eq!(
        reg.build("tensor", &params).unwrap().kind(),
        AlgebraKind::Associative
    );
    assert_eq!(reg.build("fibre", &params).unwrap().generators().len(), 3);
    assert!(reg.build("omega2", &params).is_ok());
    assert!(matches!(
        reg.build("sphere", &params),
        Err(Error::InvalidInput(_))
    ));
    let a = reg.build("omega2", &params).unwrap().to_json().to_string();
    let b = reg.build("omega2", &params).unwrap().to_json().to_string();
    assert_eq!(a, b);
}

fn chain_model(schedule: &[(u32, u16, u16)]) -> loopalg::bss::StagedModel {
    use loopalg::algebra::{Derivation, FreeAssociative};
    use std::collections::BTreeMap;
    let coeffs = c(3, 1);
    let fp = coeffs.field();
    let gens = (1..=4)
        .map(|d| Generator::named(format!("x{d}"), d, 1))
        .collect();
    let alg = FreeAssociative::new(gens, 8, None).unwrap();
    let mut sched: BTreeMap<u32, Derivation> = BTreeMap::new();
    for &(page, from, to) in schedule {
        sched
            .entry(page)
            .or_default()
            .insert(from, LinComb::single(fp, vec![to], 1));
    }
    loopalg::bss::StagedModel::new("chain", coeffs, 2, std::sync::Arc::new(alg), sched).unwrap()
}

#[test]
fn nonzero_square_is_reported() {
    let model = chain_model(&[(1, 2, 1), (1, 1, 0)]);
    assert!(matches!(
        compute_page(&model, 2, 1..=3, Some(1)),
        Err(Error::DSquaredNonzero(_))
    ));
}

#[test]
fn differential_leaving_the_cycles_is_reported() {
    let model = chain_model(&[(1, 2, 1), (2, 3, 2)]);
    assert!(matches!(
        compute_page(&model, 3, 1..=3, Some(1)),
        Err(Error::IllDefined(_))
    ));
    assert!(compute_page(&model, 2, 1..=3, Some(1)).is_ok());
}

#[test]
fn inhomogeneous_values_are_rejected() {
    use loopalg::algebra::FreeAssociative;
    let coeffs = c(3, 1);
    let gens = vec![Generator::named("a", 3, 1), Generator::named("b", 1, 1)];
    let alg = FreeAssociative::new(gens, 6, None).unwrap();
    let der = [(0u16, LinComb::single(coeffs.field(), vec![1u16], 1))]
        .into_iter()
        .collect();
    let built = loopalg::bss::StagedModel::new(
        "bad",
        coeffs,
        2,
        std::sync::Arc::new(alg),
        [(1, der)].into_iter().collect(),
    );
    assert!(matches!(built, Err(Error::InvalidInput(_))));
}

#[test]
fn bracket_pages_agree_before_r() {
    let model = build_omega2_model(c(3, 3), 2, 10, 5, 1).unwrap();
    let two = compute_page(&model, 2, 0..=9, None).unwrap();
    let three = compute_page(&model, 3, 0..=9, None).unwrap();
    for (key, slice) in &two.slices {
        assert_eq!(slice.dim, three.slices[key].dim, "{key:?}");
        assert_eq!(slice.basis, three.slices[key].basis);
    }
}
