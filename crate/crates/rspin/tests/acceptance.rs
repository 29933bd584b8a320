//! Runs every acceptance criterion and prints one line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rspin::spin::{count_by_arf, orbit_partition};
use rspin::suites::{self, all_pass, Check};
use rspin::symplectic::{arf, quad_form_orbits, sp_order_f2, transvection_subgroup_f2, QuadForm2};
use rspin::thurston_veech::{prototype, prototype_checks};

type Outcome = Result<(bool, String), String>;
type Criterion = (&'static str, Duration, Box<dyn Fn() -> Outcome>);

fn counts() -> Outcome {
    let expected = [(2, 2, 16u128, 10u128, 6u128), (3, 4, 4096, 2304, 1792)];
    let mut notes = Vec::new();
    let mut ok = true;
    for (g, r) in [(2usize, 2i64), (3, 2), (3, 4), (4, 2), (4, 6), (5, 2), (5, 4)] {
        let c = count_by_arf(g, r).map_err(|e| e.to_string())?;
        ok &= c.enumerated && c.even.unwrap() + c.odd.unwrap() == c.total;
        if let Some(&(_, _, t, e, o)) = expected.iter().find(|x| (x.0, x.1) == (g, r)) {
            ok &= (c.total, c.even.unwrap(), c.odd.unwrap()) == (t, e, o);
        }
        notes.push(format!("({g},{r}) {}/{}", c.even.unwrap(), c.odd.unwrap()));
    }
    Ok((ok, notes.join(" ")))
}

fn orbits() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (g, r) in [(2usize, 2i64), (3, 2), (3, 4)] {
        let mut sizes = orbit_partition(g, r).map_err(|e| e.to_string())?;
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        let c = count_by_arf(g, r).map_err(|e| e.to_string())?;
        ok &= sizes == vec![c.even.unwrap() as usize, c.odd.unwrap() as usize];
        notes.push(format!("({g},{r}) {sizes:?}"));
    }
    let one = orbit_partition(3, 1).map_err(|e| e.to_string())?;
    ok &= one == vec![1];
    notes.push(format!("(3,1) {one:?}"));
    Ok((ok, notes.join(" ")))
}

fn prototypes() -> Outcome {
    let mut ok = true;
    let mut n = 0;
    let mut bad = Vec::new();
    for g in 3..=5usize {
        let mut kappas = vec![vec![2 * g - 2], vec![g - 1, g - 1], vec![2; g - 1], vec![1; 2 * g - 2]];
        kappas.dedup();
        for kappa in kappas {
            let d = kappa.iter().fold(0, |a, &k| num_gcd(a, k));
            let arfs: Vec<Option<u8>> = if d % 2 == 1 { vec![None] } else if g == 3 { vec![Some(1)] } else { vec![Some(0), Some(1)] };
            for a in arfs {
                let p = prototype(&kappa, a).map_err(|e| format!("{kappa:?} {a:?}: {e}"))?;
                let checks = prototype_checks(&p);
                n += 1;
                if !checks.iter().all(|c| c.1) || p.built.origami.stratum() != kappa || p.built.origami.genus() != g {
                    ok = false;
                    bad.push(format!("{kappa:?}/{a:?}"));
                }
            }
        }
    }
    Ok((ok, format!("{n} prototypes {}", bad.join(" "))))
}

fn num_gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { num_gcd(b, a % b) }
}

fn step_one() -> Outcome {
    let g = 3;
    let orbits = quad_form_orbits(g);
    let mut ok = orbits.len() == 2;
    let mut notes = Vec::new();
    for (a, want) in [(0u8, 40320usize), (1, 51840)] {
        let q = if a == 0 { QuadForm2::new(vec![0; 6]) } else { QuadForm2::new(vec![1, 1, 0, 0, 0, 0]) };
        assert_eq!(arf(&q), a);
        let group = transvection_subgroup_f2(&q).map_err(|e| e.to_string())?;
        let orbit = orbits.iter().find(|o| o.contains(&(q.bits() as u8))).map_or(0, |o| o.len() as u64);
        let stab = sp_order_f2(g) / orbit;
        ok &= group.len() == want && stab as usize == want;
        notes.push(format!("Arf {a}: generated {} stabilizer {stab}", group.len()));
    }
    Ok((ok, notes.join(", ")))
}

fn checks(c: rspin::Result<Vec<Check>>) -> Outcome {
    let c = c.map_err(|e| e.to_string())?;
    let failed: Vec<String> = c.iter().filter(|x| !x.pass).map(|x| format!("{} [{}]", x.name, x.detail)).collect();
    Ok((all_pass(&c), if failed.is_empty() { format!("{} checks", c.len()) } else { failed.join("; ") }))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("1 component counts", Duration::from_secs(60), Box::new(counts)),
        ("2 orbit structure", Duration::from_secs(30), Box::new(orbits)),
        ("3 prototype construction", Duration::from_secs(10), Box::new(prototypes)),
        ("4 finite quotient at g=3", Duration::from_secs(60), Box::new(step_one)),
        ("5 Johnson suite", Duration::from_secs(120), Box::new(|| checks(suites::johnson_suite(&suites::johnson_pairs(&[3, 4, 5]))))),
        ("6 relation suite", Duration::from_secs(120), Box::new(|| checks(suites::relations_suite(0)))),
        ("7 oracle suite", Duration::from_secs(60), Box::new(|| checks(suites::oracle_suite(0, 500)))),
        ("8 gcd procedure", Duration::from_secs(60), Box::new(|| checks(suites::gcd_suite(0, 5, 100)))),
    ];
    let mut all = true;
    for (name, budget, run) in criteria {
        let t = Instant::now();
        let out = run();
        let dt = t.elapsed();
        let (pass, detail) = match out {
            Ok((p, d)) => (p && dt <= budget, d),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= pass;
        println!("criterion {name}: {} ({:.2}s, budget {}s) {detail}", if pass { "PASS" } else { "FAIL" }, dt.as_secs_f64(), budget.as_secs());
    }
    if all { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
