use rspin::thurston_veech::{build_origami_from, curve_system_for, partitions, prototype, prototype_checks};

fn arf_choices(kappa: &[usize]) -> Vec<Option<u8>> {
    let g = kappa.iter().sum::<usize>() / 2 + 1;
    if kappa.iter().all(|k| k % 2 == 0) {
        if g == 3 {
            vec![Some(1)]
        } else {
            vec![Some(0), Some(1)]
        }
    } else {
        vec![None]
    }
}

fn check_genus(g: usize) {
    let mut bad = Vec::new();
    for kappa in partitions(2 * g - 2) {
        for a in arf_choices(&kappa) {
            let p = prototype(&kappa, a).unwrap_or_else(|e| panic!("{kappa:?} {a:?}: {e}"));
            for (name, ok) in prototype_checks(&p) {
                if !ok {
                    bad.push(format!("{kappa:?} arf {a:?}: {name}"));
                }
            }
        }
    }
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn every_stratum_genus_3() {
    check_genus(3);
}

#[test]
fn every_stratum_genus_4() {
    check_genus(4);
}

#[test]
fn every_stratum_genus_5() {
    check_genus(5);
}

#[test]
fn every_stratum_genus_6() {
    check_genus(6);
}

#[test]
fn every_stratum_genus_7_and_8() {
    check_genus(7);
    check_genus(8);
}

#[test]
fn alternative_seed_gives_the_same_stratum() {
    for (kappa, arf) in [(vec![3, 2, 1], None), (vec![4, 2, 2], Some(0)), (vec![8], Some(1))] {
        let (cs, _) = curve_system_for(&kappa, arf).unwrap();
        for seed in ["a3", "a7"] {
            for sign in [1, -1] {
                let b = build_origami_from(&cs, seed, sign).unwrap();
                let mut k = kappa.clone();
                k.sort_unstable_by(|a, b| b.cmp(a));
                assert_eq!(b.origami.stratum(), k);
            }
        }
    }
}

#[test]
fn even_gcd_prototypes_separate_arf() {
    for kappa in [vec![6], vec![4, 2], vec![2, 2, 2]] {
        let a0 = prototype(&kappa, Some(0)).unwrap();
        let a1 = prototype(&kappa, Some(1)).unwrap();
        assert_eq!(a0.arf_from_cores, Some(0));
        assert_eq!(a1.arf_from_cores, Some(1));
        assert_ne!(a0.choice.labels, a1.choice.labels);
    }
}
