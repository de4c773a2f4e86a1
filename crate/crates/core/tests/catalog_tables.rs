use loopalg::catalog::{
    adams_period, cmn_summands, even_families, low_homotopy, odd_families, to_csv, FamilyEntry,
};
use loopalg::Error;

fn degrees(entries: &[FamilyEntry], space: &str) -> Vec<u64> {
    entries
        .iter()
        .filter(|e| e.space == space)
        .map(|e| e.degree)
        .collect()
}

#[test]
fn periods() {
    assert_eq!(adams_period(3, 1).unwrap(), 4);
    assert_eq!(adams_period(3, 2).unwrap(), 12);
    assert_eq!(adams_period(5, 1).unwrap(), 8);
    assert_eq!(adams_period(2, 5).unwrap(), 16);
    assert_eq!(adams_period(2, 1).unwrap(), 8);
    assert!(adams_period(4, 1).is_err());
}

#[test]
fn odd_families_at_three() {
    let fam = odd_families(3, 1, 2, 1, 2).unwrap();
    assert_eq!(degrees(&fam, "P^5(3)"), [11, 23, 35]);
    assert_eq!(degrees(&fam, "P^4(3)"), [17, 29, 41]);
    assert!(fam.iter().all(|e| e.order == 9));
    assert!(matches!(
        odd_families(3, 1, 2, 0, 2),
        Err(Error::KTooSmall(_))
    ));
    assert!(odd_families(3, 2, 2, 1, 0).is_ok());
    assert!(matches!(
        odd_families(3, 3, 2, 1, 0),
        Err(Error::KTooSmall(_))
    ));
    assert!(matches!(
        odd_families(2, 1, 2, 1, 0),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn families_start_at_the_summands_and_step_by_the_period() {
    for (p, r, n, k) in [(3, 1, 2, 1), (3, 1, 2, 2), (5, 2, 3, 1), (7, 1, 5, 0)] {
        let fam = odd_families(p, r, n, k, 3).unwrap();
        let odd: Vec<&FamilyEntry> = fam
            .iter()
            .filter(|e| e.provenance == "v1-family(a)")
            .collect();
        if k >= 1 {
            let cmn = cmn_summands(p, r, n, k).unwrap();
            assert_eq!(odd[0].degree, cmn.last().unwrap().degree);
        }
        let step = adams_period(p, r + 1).unwrap();
        for w in fam.windows(2).filter(|w| w[0].space == w[1].space) {
            assert_eq!(w[1].degree - w[0].degree, step);
        }
    }
}

#[test]
fn cmn_degrees() {
    let d = |v: Vec<FamilyEntry>| v.into_iter().map(|e| e.degree).collect::<Vec<_>>();
    assert_eq!(d(cmn_summands(3, 1, 2, 2).unwrap()), [11, 35]);
    assert_eq!(d(cmn_summands(5, 2, 3, 1).unwrap()), [29]);
    assert!(cmn_summands(3, 1, 2, 0).unwrap().is_empty());
    assert!(cmn_summands(3, 1, 2, 2)
        .unwrap()
        .iter()
        .all(|e| e.provenance == "CMN" && e.order == 9));
}

#[test]
fn even_family_tables() {
    let two = even_families(2, 2).unwrap();
    assert_eq!(degrees(&two, "P^5(4)"), [11, 19]);
    assert_eq!(degrees(&two, "P^9(4)"), [15, 23]);
    assert!(two.iter().all(|e| e.order == 8));
    let three = even_families(3, 1).unwrap();
    assert_eq!(three.len(), 1);
    assert_eq!(
        (three[0].space.as_str(), three[0].degree, three[0].order),
        ("P^9(8)", 15, 16)
    );
    assert!(even_families(2, 0).unwrap().is_empty());
    assert!(even_families(4, 1).is_err());
}

#[test]
fn low_groups() {
    let g = low_homotopy(3, 1, 5).unwrap();
    assert_eq!((g.bottom.as_str(), g.next.as_str()), ("Z/3", "0"));
    let g = low_homotopy(2, 3, 4).unwrap();
    assert_eq!((g.bottom.as_str(), g.next.as_str()), ("Z/8", "Z/2"));
    assert!(low_homotopy(2, 1, 3).is_err());
}

#[test]
fn csv_layout() {
    let csv = to_csv(&even_families(3, 1).unwrap()).unwrap();
    assert_eq!(
        csv,
        "space,degree,order,k,t,provenance\nP^9(8),15,16,,1,even-family(b)\n"
    );
}
