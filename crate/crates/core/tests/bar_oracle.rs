mod common;
use ainf::ainfty::AInfinity;
use ainf::barcobar::bar_homology;

#[test]
fn s3_bar_homology_matches_dense_oracle() {
    let a = common::bar::s3_model();
    a.validate().unwrap();
    let (oracle, sq) = common::bar::bar_ranks(&a, 0, 10);
    assert!(sq);
    let expected: std::collections::BTreeMap<i64, usize> = (0..10).map(|d| (d, (d % 2 == 0) as usize)).collect();
    assert_eq!(oracle, expected);
    let lib = bar_homology(&AInfinity::from_dga(&a), 10).unwrap();
    for (d, r) in &oracle {
        assert_eq!(lib.ranks.get(d).copied().unwrap_or(0), *r, "degree {d}");
    }
}

#[test]
fn random_dga_bar_homology_matches_dense_oracle() {
    for seed in 0..6 {
        for commutative in [true, false] {
            let a = ainf::models::random_dga(seed, commutative, 8);
            let unit = a.module().in_degree(0)[0];
            let (oracle, sq) = common::bar::bar_ranks(&a, unit, 7);
            assert!(sq, "seed {seed}");
            let lib = bar_homology(&AInfinity::from_dga(&a), 7).unwrap();
            for (d, r) in &oracle {
                assert_eq!(lib.ranks.get(d).copied().unwrap_or(0), *r, "seed {seed} commutative {commutative} degree {d}");
            }
        }
    }
}
