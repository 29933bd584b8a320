//! Batches of checks shared by the command line and the acceptance tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::johnson::{contract, span_equals_kernel, wedge_embed};
use crate::mcg_words::*;
use crate::origami::Direction;
use crate::spin::FramedCurve;
use crate::symplectic::{arf, arf_on_basis, gcd, quad_form_from_values, HomologyClass, QuadForm2};
use crate::thurston_veech::{prototype, Labels};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

fn probes(s: &Surface, extra: &[FramedCurve], rng: &mut ChaCha8Rng) -> Result<Vec<FramedCurve>> {
    let mut fixed = s.reference_basis()?;
    fixed.extend(extra.iter().cloned());
    Ok(default_probes(&fixed, rng, 20))
}

fn relation_check(r: &RelationReport, expect: bool) -> Check {
    let detail = match &r.witness {
        Some(w) => format!("{} vs {}: {w}", r.lhs, r.rhs),
        None => format!("{} = {} ({})", r.lhs, r.rhs, r.note),
    };
    Check::new(if expect { r.name.clone() } else { format!("{} (control)", r.name) }, r.agree == expect, detail)
}

/// Braid, chain, lantern and D relations plus the slide checks, on surfaces
/// built from the genset templates.
pub fn relations_suite(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    for (labels, g) in [(Labels::Twelve, 3), (Labels::Twelve, 4), (Labels::Twelve, 5), (Labels::Three, 4), (Labels::Three, 5)] {
        let s = Surface::genset(labels, g)?;
        let names: Vec<String> = s.cores.keys().cloned().collect();
        let (mut n, mut bad) = (0, Vec::new());
        for a in &names {
            for b in names.iter().filter(|b| a < *b && s.meet(a, b) == 1) {
                let (ca, cb) = (s.core(a)?, s.core(b)?);
                let p = probes(&s, &[ca.clone(), cb.clone()], &mut rng)?;
                n += 1;
                if !verify_braid(&ca, &cb, &p).agree {
                    bad.push(format!("{a},{b}"));
                }
            }
        }
        out.push(Check::new(format!("braid on {} ({n} pairs)", s.name), bad.is_empty(), bad.join(" ")));
    }

    let odd = Surface::genset(Labels::Three, 5)?;
    for k in 2..=5usize {
        let names: Vec<String> = (1..=k).map(|i| format!("a{i}")).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let cfg = odd.config(&names)?;
        let (bd, _) = odd.boundary(&names, "d")?;
        let p = probes(&odd, &cfg.curves, &mut rng)?;
        out.push(relation_check(&verify_chain_relation(&cfg, &bd, &p)?, true));
        if k == 3 {
            let mut bad = bd.clone();
            bad[0] = FramedCurve::new("d1", bad[0].h.clone(), bad[0].w + 1, bad[0].r);
            out.push(relation_check(&verify_chain_relation(&cfg, &bad, &p)?, false));
        }
    }

    let even3 = Surface::genset(Labels::Twelve, 3)?;
    let l = realize_chain_lantern(&even3, ["a1", "a2", "a5"])?;
    let coherent = l.coherence.iter().all(|(_, v)| *v == 0);
    out.push(Check::new("lantern coherence", coherent, format!("{:?}", l.coherence)));
    let extra: Vec<FramedCurve> = l.boundary.iter().chain(l.interior.iter()).cloned().collect();
    let p = probes(&even3, &extra, &mut rng)?;
    out.push(relation_check(&verify_lantern(&l.boundary, &l.interior, &p)?, true));
    let mut bad = l.interior.clone();
    bad[2] = FramedCurve::new("z", bad[2].h.clone(), bad[2].w + 1, bad[2].r);
    out.push(relation_check(&verify_lantern(&l.boundary, &bad, &p)?, false));
    let mut bad = l.interior.clone();
    bad[2] = FramedCurve::new("z", -&(&l.boundary[0].h + &l.boundary[2].h), bad[2].w, bad[2].r);
    out.push(relation_check(&verify_lantern(&l.boundary, &bad, &p)?, false));

    let even5 = Surface::genset(Labels::Twelve, 5)?;
    let d7 = d_system(7, ["a", "a'", "c2"])?;
    let d7s = Surface::from_system(&d7)?;
    let d7names: Vec<&str> = d7.curves.iter().map(|c| c.name.as_str()).collect();
    let cases: Vec<(&Surface, Vec<&str>)> = vec![
        (&even3, vec!["a0", "a2", "a5", "a4"]),
        (&even3, vec!["a0", "a2", "a5", "a4", "a3"]),
        (&d7s, d7names),
        (&even5, vec!["a0", "a2", "a5", "a4", "a3"]),
        (&even5, vec!["a0", "a2", "a5", "a6", "a7", "a8"]),
        (&even5, vec!["a0", "a2", "a5", "a6", "a7", "a8", "a9"]),
    ];
    for (s, names) in cases {
        let d = realize_d(s, &names)?;
        let rep = verify_d_membership(d.n, &d.config, &d.delta0, &d.others, 5_000_000)?;
        let label = format!("D_{} on {} (genus {})", d.n, s.name, s.genus());
        out.push(Check::new(label.clone(), rep.member, format!("target {}, {} elements explored", rep.target, rep.explored)));
        if d.n % 2 == 0 {
            let flipped = d_target(d.n, &d.delta0, &d.others)?.then(&TwistWord::letter(&d.delta0, 1));
            let rep = mod2_membership("flipped", &d.config.curves, &flipped, 5_000_000)?;
            out.push(Check::new(
                format!("{label}, Δ0 exponent parity flipped (control)"),
                !rep.member,
                format!("group order {:?}", rep.group_order),
            ));
        }
    }

    let chain = odd.cores_named(&["a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9"])?;
    let mut bad = Vec::new();
    for i in 0..chain.len() {
        for j in 0..chain.len() {
            if !same_framed(&pushforward(&slide_word(&chain, i, j)?, &chain[i]), &chain[j]) {
                bad.push(format!("{i}->{j}"));
            }
        }
    }
    out.push(Check::new("slide words along a1..a9", bad.is_empty(), bad.join(" ")));
    let readings = slide_to_a0_check(&odd)?;
    let detail = readings
        .iter()
        .map(|r| format!("{}: W^-1(a0) = {} (winding {}), pattern {}", r.reading, r.preimage, r.winding, if r.matches { "matches" } else { "fails" }))
        .collect::<Vec<_>>()
        .join("; ");
    out.push(Check::new("explicit slide onto a0", readings.iter().any(|r| r.matches), detail));
    Ok(out)
}

/// C_s ∘ wedge_embed = 0 and the kernel generators span ker C_s, for every
/// s dividing g - 1.
pub fn johnson_suite(pairs: &[(usize, i64)]) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &(g, s) in pairs {
        let embeds_to_zero = (0..2 * g).all(|k| contract(&wedge_embed(&HomologyClass::basis(g, k)), s).map(|h| h.is_zero()).unwrap_or(false));
        out.push(Check::new(format!("C_{s} kills H^ω, g={g}"), embeds_to_zero, ""));
        let span = span_equals_kernel(g, s)?;
        out.push(Check::new(format!("kernel generators span ker C_{s}, g={g}"), span, ""));
    }
    Ok(out)
}

pub fn johnson_pairs(gs: &[usize]) -> Vec<(usize, i64)> {
    gs.iter().flat_map(|&g| (1..g as i64).filter(move |s| (g as i64 - 1) % s == 0).map(move |s| (g, s))).collect()
}

fn oracle_pool() -> Result<Vec<Surface>> {
    let mut pool = Vec::new();
    for (labels, g) in [(Labels::Twelve, 3), (Labels::Twelve, 4), (Labels::Three, 4)] {
        pool.push(Surface::genset(labels, g)?);
    }
    for (kappa, a) in [(vec![2usize, 2], Some(1)), (vec![1, 1, 1, 1], None), (vec![3, 3], None), (vec![2, 2, 2], Some(0)), (vec![4, 2], Some(1))] {
        let p = prototype(&kappa, a)?;
        pool.push(Surface {
            name: format!("prototype {kappa:?}"),
            r: p.built.origami.spin_modulus(),
            origami: p.built.origami,
            cores: p.built.cylinders,
        });
    }
    Ok(pool)
}

/// Twist-linearity of curve transport, homological coherence, turning totals,
/// Σκ = 2g - 2 and Arf additivity.
pub fn oracle_suite(seed: u64, trials: usize) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = oracle_pool()?;
    let mut out = Vec::new();

    let mut failures = Vec::new();
    let mut crossing = 0;
    for t in 0..trials {
        let s = &pool[rng.gen_range(0..pool.len())];
        let o = &s.origami;
        let dir = if rng.gen_bool(0.5) { Direction::Horizontal } else { Direction::Vertical };
        let cyls = o.cylinders(dir);
        let cyl = &cyls[rng.gen_range(0..cyls.len())];
        let k = [-2i64, -1, 1, 2][rng.gen_range(0..4)];
        let c = o.random_closed_curve(&mut rng, 40);
        let e = k * cyl.squares.len() as i64;
        let moved = o.transport_curve(cyl, e, &c)?;
        let (h, core) = (o.homology_class(&c), o.homology_class(&cyl.core));
        let p = crate::symplectic::pair(&h, &core);
        let want_h = &h + &core.scale(k * p);
        let want_t = o.turning_number(&c)? + k * p * o.turning_number(&cyl.core)?;
        crossing += (p != 0) as usize;
        let same_surface = o.cylinder_shear(cyl, e) == *o;
        if !same_surface || o.homology_class(&moved) != want_h || o.turning_number(&moved)? != want_t {
            failures.push(format!("trial {t} on {}", s.name));
        }
    }
    let detail = if failures.is_empty() { format!("{crossing} with nonzero pairing") } else { failures.join(", ") };
    out.push(Check::new(format!("transport twist-linearity ({trials} trials)"), failures.is_empty(), detail));

    let mut failures = Vec::new();
    let mut count = 0;
    for s in &pool {
        let names: Vec<String> = s.cores.keys().cloned().collect();
        for _ in 0..10 {
            // grow a random connected set of cores
            let mut set = vec![names[rng.gen_range(0..names.len())].clone()];
            let size = rng.gen_range(1..=names.len().min(6));
            while set.len() < size {
                let next: Vec<&String> = names.iter().filter(|n| !set.contains(n) && set.iter().any(|m| s.meet(m, n) > 0)).collect();
                if next.is_empty() {
                    break;
                }
                set.push(next[rng.gen_range(0..next.len())].clone());
            }
            let refs: Vec<&str> = set.iter().map(String::as_str).collect();
            let (bd, chi) = s.boundary_curves(&refs)?;
            let mut total = 0;
            let mut h = HomologyClass::zero(s.genus());
            for b in &bd {
                total += s.origami.turning_number(b)?;
                h = &h + &s.origami.homology_class(b);
            }
            count += 1;
            if total != chi || !h.is_zero() {
                failures.push(format!("{}: {:?} turning {total} vs χ {chi}", s.name, set));
            }
        }
    }
    out.push(Check::new(format!("homological coherence ({count} subsurfaces)"), failures.is_empty(), failures.join("; ")));

    let mut bad = 0;
    for _ in 0..trials {
        let s = &pool[rng.gen_range(0..pool.len())];
        let c = s.origami.random_closed_curve(&mut rng, 60);
        let total: i64 = c.steps.iter().map(|st| st.turn()).sum();
        if total % 4 != 0 {
            bad += 1;
        }
    }
    out.push(Check::new(format!("turning totals divisible by 4 ({trials} curves)"), bad == 0, format!("{bad} failures")));

    let bad: Vec<String> = pool
        .iter()
        .filter(|s| s.origami.stratum().iter().sum::<usize>() != 2 * s.genus() - 2)
        .map(|s| s.name.clone())
        .collect();
    out.push(Check::new(format!("Σκ = 2g - 2 ({} surfaces)", pool.len()), bad.is_empty(), bad.join(", ")));

    let mut failures = Vec::new();
    for s in pool.iter().filter(|s| s.r % 2 == 0) {
        let g = s.genus();
        let cores: Vec<FramedCurve> = s.cores.keys().map(|n| s.core(n)).collect::<Result<_>>()?;
        let vals: Vec<u8> = cores.iter().map(|c| ((c.w + 1).rem_euclid(2)) as u8).collect();
        let classes: Vec<HomologyClass> = cores.iter().map(|c| c.h.clone()).collect();
        let q = quad_form_from_values(g, &classes, &vals)?;
        let basis = s.reference_basis()?;
        let qb = |c: &FramedCurve| ((c.w + 1).rem_euclid(2)) as u8;
        let split = rng.gen_range(1..g);
        let part = |pairs: &[FramedCurve]| pairs.chunks(2).fold(0u8, |a, p| a ^ (qb(&p[0]) & qb(&p[1])));
        let glued = part(&basis[..2 * split]) ^ part(&basis[2 * split..]);
        let hs: Vec<HomologyClass> = basis.iter().map(|c| c.h.clone()).collect();
        if glued != arf(&q) || glued != arf_on_basis(&q, &hs) {
            failures.push(format!("{}: glued {glued}, from cores {}", s.name, arf(&q)));
        }
    }
    out.push(Check::new("Arf additivity over glued blocks", failures.is_empty(), failures.join("; ")));
    Ok(out)
}

/// The gcd procedure on random winding pairs in genus g (modulus 2g - 2).
pub fn gcd_suite(seed: u64, g: usize, count: usize) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = 2 * g as i64 - 2;
    let mut failures = Vec::new();
    for t in 0..count {
        let (k1, k2) = (rng.gen_range(0..r), rng.gen_range(0..r));
        let mut vals: Vec<u8> = (0..2 * g).map(|_| rng.gen_range(0..2)).collect();
        vals[0] = ((k1 + 1) % 2) as u8;
        vals[2] = ((k2 + 1) % 2) as u8;
        let q = QuadForm2::new(vals);
        let a1 = FramedCurve::new("a1", HomologyClass::x(g, 0), k1, r);
        let a2 = FramedCurve::new("a2", HomologyClass::x(g, 1), k2, r);
        let res = gcd_procedure(&a1, &a2, Some(&q))?;
        let d = gcd(k1, k2);
        let certified = res.b1.is_none() || pushforward(&res.word, &a2).w == res.curve.w;
        if res.curve.w != d || !res.curve.parity_consistent(&q) || !certified || res.curve.h.content() != 1 {
            failures.push(format!("trial {t}: ({k1}, {k2}) gave winding {}", res.curve.w));
        }
    }
    Ok(vec![Check::new(format!("gcd procedure, genus {g} ({count} pairs)"), failures.is_empty(), failures.join("; "))])
}
