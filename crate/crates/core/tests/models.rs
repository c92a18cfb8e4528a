use ainf::complexes::homology;
use ainf::models::*;

#[test]
fn y_model_cohomology_through_six() {
    let a = y_model();
    let h = homology(&a.complex);
    let dims: Vec<usize> = (0..=7).map(|d| h.rank(d)).collect();
    assert_eq!(&dims[..7], &[1, 0, 2, 0, 0, 1, 0]);
}

#[test]
fn random_dgas_build() {
    for seed in 0..12 {
        for comm in [true, false] {
            let a = random_dga(seed, comm, 12);
            assert!(a.module().dim() <= 12);
            assert!(a.module().gens().iter().all(|g| g.degree == 0 || (2..=8).contains(&g.degree)));
        }
    }
}
