mod common;
use common::massey_check::{check, models};

#[test]
fn m3_represents_massey_products() {
    for p in [5, 7] {
        for (name, a) in models(p) {
            let (checked, nonzero) = check(&a, p).unwrap_or_else(|e| panic!("{name} over F{p}: {e}"));
            assert!(checked > 0 && nonzero > 0, "{name} over F{p}: {checked} triples, {nonzero} nonzero");
        }
    }
}
