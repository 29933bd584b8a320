//! Dehn twist words acting on framed curves through (homology, winding), and
//! the relation checks built on them.
//!
//! Every verdict here is about the quotient of the mapping class group that
//! acts on pairs (class, winding). Agreement is a necessary condition for
//! equality of mapping classes; disagreement refutes it.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::origami::{CombCurve, Cylinder, Direction, Origami};
use crate::spin::FramedCurve;
use crate::symplectic::{ext_gcd, gcd, pair, quad_value, HomologyClass, QuadForm2, SymplecticMap};
use crate::thurston_veech::{build_origami, genset_system, Curve, CurveSystem, Family, Labels};

pub const QUOTIENT_NOTE: &str = "checked on (homology, winding) only: agreement is necessary, not sufficient";

/// Product of twists; the leftmost letter acts last.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwistWord {
    pub letters: Vec<(FramedCurve, i64)>,
}

fn same_curve(a: &FramedCurve, b: &FramedCurve) -> bool {
    a.name == b.name && same_framed(a, b)
}

impl TwistWord {
    pub fn new() -> Self {
        TwistWord::default()
    }

    pub fn letter(c: &FramedCurve, e: i64) -> Self {
        TwistWord::new().push(c, e)
    }

    /// Appends a letter on the right (it acts before everything already present).
    pub fn push(mut self, c: &FramedCurve, e: i64) -> Self {
        if e == 0 {
            return self;
        }
        if let Some(last) = self.letters.last_mut() {
            if same_curve(&last.0, c) {
                last.1 += e;
                if last.1 == 0 {
                    self.letters.pop();
                }
                return self;
            }
        }
        self.letters.push((c.clone(), e));
        self
    }

    /// Product of twists in the order written: T_{c_1} T_{c_2} ...
    pub fn product(curves: &[&FramedCurve]) -> Self {
        curves.iter().fold(TwistWord::new(), |w, c| w.push(c, 1))
    }

    /// self · other (other acts first).
    pub fn then(&self, other: &TwistWord) -> TwistWord {
        other.letters.iter().fold(self.clone(), |w, (c, e)| w.push(c, *e))
    }

    pub fn inverse(&self) -> TwistWord {
        self.letters.iter().rev().fold(TwistWord::new(), |w, (c, e)| w.push(c, -e))
    }

    pub fn pow(&self, n: u32) -> TwistWord {
        (0..n).fold(TwistWord::new(), |w, _| w.then(self))
    }

    /// Same letters, read in the opposite order.
    pub fn reversed_order(&self) -> TwistWord {
        self.letters.iter().rev().fold(TwistWord::new(), |w, (c, e)| w.push(c, *e))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn describe(&self) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        self.letters
            .iter()
            .map(|(c, e)| if *e == 1 { format!("T({})", c.name) } else { format!("T({})^{e}", c.name) })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Twist-linearity applied letter by letter, right to left.
pub fn pushforward(w: &TwistWord, d: &FramedCurve) -> FramedCurve {
    let mut h = d.h.clone();
    let mut wind = d.w;
    for (c, e) in w.letters.iter().rev() {
        let p = pair(&h, &c.h);
        if p != 0 {
            h = &h + &c.h.scale(e * p);
            wind += e * p * c.w;
        }
    }
    FramedCurve::new(d.name.clone(), h, wind, d.r)
}

/// Action on homology.
pub fn symplectic_image(w: &TwistWord, g: usize) -> SymplecticMap {
    let cols: Vec<HomologyClass> = (0..2 * g)
        .map(|k| pushforward(w, &FramedCurve::new("e", HomologyClass::basis(g, k), 0, 0)).h)
        .collect();
    SymplecticMap::from_columns(&cols)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Agreement {
    pub agree: bool,
    /// the first matrix entry or probe that differs
    pub witness: Option<String>,
    pub note: &'static str,
}

fn word_data(w: &TwistWord) -> Option<(usize, i64)> {
    w.letters.first().map(|(c, _)| (c.h.genus(), c.r))
}

/// Compares the two affine actions (h, w) ↦ (M h, w + ψ(h)): matrices, winding
/// shifts on basis vectors, then each probe.
pub fn words_agree(w1: &TwistWord, w2: &TwistWord, probes: &[FramedCurve]) -> Agreement {
    let data = word_data(w1).or_else(|| word_data(w2)).or_else(|| probes.first().map(|p| (p.h.genus(), p.r)));
    let Some((g, r)) = data else {
        return Agreement { agree: true, witness: None, note: QUOTIENT_NOTE };
    };
    let fail = |s: String| Agreement { agree: false, witness: Some(s), note: QUOTIENT_NOTE };
    for k in 0..2 * g {
        let e = FramedCurve::new(format!("e{}", k + 1), HomologyClass::basis(g, k), 0, r);
        let (a, b) = (pushforward(w1, &e), pushforward(w2, &e));
        if a.h != b.h {
            return fail(format!("column {} of the homology action: {} vs {}", k + 1, a.h, b.h));
        }
        if a.w != b.w {
            return fail(format!("winding shift on basis vector {}: {} vs {} (mod {r})", k + 1, a.w, b.w));
        }
    }
    for p in probes {
        let (a, b) = (pushforward(w1, p), pushforward(w2, p));
        if a != b {
            return fail(format!("probe {}: ({}, {}) vs ({}, {})", p.name, a.h, a.w, b.h, b.w));
        }
    }
    Agreement { agree: true, witness: None, note: QUOTIENT_NOTE }
}

/// Named framed curves with a declared geometric intersection table.
#[derive(Clone, Debug)]
pub struct FramedConfig {
    pub curves: Vec<FramedCurve>,
    pub geometric: Vec<Vec<u8>>,
}

impl FramedConfig {
    pub fn validate(&self, q: Option<&QuadForm2>) -> Result<()> {
        let n = self.curves.len();
        if self.geometric.len() != n || self.geometric.iter().any(|r| r.len() != n) {
            return Err(Error::Configuration(format!("intersection table is not {n}x{n}")));
        }
        for i in 0..n {
            for j in 0..n {
                if self.geometric[i][j] != self.geometric[j][i] {
                    return Err(Error::Configuration("intersection table is not symmetric".into()));
                }
                let p = pair(&self.curves[i].h, &self.curves[j].h).unsigned_abs();
                if p > self.geometric[i][j] as u64 {
                    return Err(Error::Configuration(format!(
                        "|<{}, {}>| = {p} exceeds the declared intersection {}",
                        self.curves[i].name, self.curves[j].name, self.geometric[i][j]
                    )));
                }
            }
        }
        if let Some(q) = q {
            for c in &self.curves {
                if !c.parity_consistent(q) {
                    return Err(Error::Parity(format!("winding {} of {} has the wrong parity for its class", c.w, c.name)));
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&FramedCurve> {
        self.curves.iter().find(|c| c.name == name)
    }

    fn check_chain(&self) -> Result<()> {
        let n = self.curves.len();
        for i in 0..n {
            for j in i + 1..n {
                let want = if j == i + 1 { 1 } else { 0 };
                if self.geometric[i][j] != want {
                    return Err(Error::Configuration(format!(
                        "{} and {} meet {} times; a chain needs {want}",
                        self.curves[i].name, self.curves[j].name, self.geometric[i][j]
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub agree: bool,
    pub witness: Option<String>,
    pub note: &'static str,
}

fn report(name: impl Into<String>, lhs: &TwistWord, rhs: &TwistWord, probes: &[FramedCurve]) -> RelationReport {
    let a = words_agree(lhs, rhs, probes);
    RelationReport { name: name.into(), lhs: lhs.describe(), rhs: rhs.describe(), agree: a.agree, witness: a.witness, note: a.note }
}

/// (T_{a_1} ... T_{a_k})^{2k+2} = T_d for k even, (T_{a_1} ... T_{a_k})^{k+1} =
/// T_{d_1} T_{d_2} for k odd.
pub fn verify_chain_relation(chain: &FramedConfig, boundary: &[FramedCurve], probes: &[FramedCurve]) -> Result<RelationReport> {
    chain.validate(None)?;
    chain.check_chain()?;
    let k = chain.curves.len();
    let want = if k % 2 == 0 { 1 } else { 2 };
    if boundary.len() != want {
        return Err(Error::Configuration(format!("a {k}-chain has {want} boundary curves, got {}", boundary.len())));
    }
    let refs: Vec<&FramedCurve> = chain.curves.iter().collect();
    let base = TwistWord::product(&refs);
    let lhs = if k % 2 == 0 { base.pow(2 * k as u32 + 2) } else { base.pow(k as u32 + 1) };
    let rhs = TwistWord::product(&boundary.iter().collect::<Vec<_>>());
    Ok(report(format!("chain k={k}"), &lhs, &rhs, probes))
}

/// T_a T_b T_c T_d = T_x T_y T_z for a four-holed sphere with boundary a, b,
/// c, d and interior curves x, y, z. All classes involved must pair to zero.
pub fn verify_lantern(boundary: &[FramedCurve; 4], interior: &[FramedCurve; 3], probes: &[FramedCurve]) -> Result<RelationReport> {
    let all: Vec<&FramedCurve> = boundary.iter().chain(interior.iter()).collect();
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            if pair(&a.h, &b.h) != 0 {
                return Err(Error::Configuration(format!("lantern curves {} and {} have nonzero pairing", a.name, b.name)));
            }
        }
    }
    let lhs = TwistWord::product(&boundary.iter().collect::<Vec<_>>());
    let rhs = TwistWord::product(&interior.iter().collect::<Vec<_>>());
    Ok(report("lantern", &lhs, &rhs, probes))
}

/// T_a T_b T_a = T_b T_a T_b.
pub fn verify_braid(a: &FramedCurve, b: &FramedCurve, probes: &[FramedCurve]) -> RelationReport {
    let lhs = TwistWord::product(&[a, b, a]);
    let rhs = TwistWord::product(&[b, a, b]);
    report(format!("braid {} {}", a.name, b.name), &lhs, &rhs, probes)
}

/// Linear map of F2^{2g}, column k packed in cols[k].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mod2Map {
    pub cols: Vec<u32>,
}

impl Mod2Map {
    pub fn identity(n: usize) -> Self {
        Mod2Map { cols: (0..n).map(|k| 1 << k).collect() }
    }

    pub fn apply(&self, v: u32) -> u32 {
        let mut out = 0;
        for (k, c) in self.cols.iter().enumerate() {
            if (v >> k) & 1 == 1 {
                out ^= c;
            }
        }
        out
    }

    /// self ∘ other
    pub fn compose(&self, other: &Mod2Map) -> Mod2Map {
        Mod2Map { cols: other.cols.iter().map(|&c| self.apply(c)).collect() }
    }

    pub fn from_word(w: &TwistWord, g: usize) -> Mod2Map {
        let m = symplectic_image(w, g);
        Mod2Map { cols: (0..2 * g).map(|k| pack2(&m.column(k))).collect() }
    }

    pub fn transvection(c: &HomologyClass) -> Mod2Map {
        let g = c.genus();
        let cv = pack2(c);
        Mod2Map {
            cols: (0..2 * g)
                .map(|k| {
                    let e = 1u32 << k;
                    if pair2(e, cv, g) == 1 {
                        e ^ cv
                    } else {
                        e
                    }
                })
                .collect(),
        }
    }
}

fn pack2(h: &HomologyClass) -> u32 {
    h.coords.iter().enumerate().fold(0, |a, (k, &c)| a | (((c.rem_euclid(2)) as u32) << k))
}

fn pair2(u: u32, v: u32, g: usize) -> u32 {
    let mut s = 0;
    for i in 0..g {
        s ^= ((u >> (2 * i)) & 1) & ((v >> (2 * i + 1)) & 1);
        s ^= ((u >> (2 * i + 1)) & 1) & ((v >> (2 * i)) & 1);
    }
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipReport {
    pub name: String,
    pub target: String,
    pub member: bool,
    /// size of the generated group if the search ran to completion
    pub group_order: Option<usize>,
    pub explored: usize,
    pub note: &'static str,
}

/// Breadth-first search of the subgroup of Sp(2g, F2) generated by the
/// transvections in `generators`, looking for the image of `target`.
pub fn mod2_membership(name: &str, generators: &[FramedCurve], target: &TwistWord, bound: usize) -> Result<MembershipReport> {
    let g = generators.first().map(|c| c.h.genus()).ok_or_else(|| Error::Configuration("no generators".into()))?;
    if 2 * g > 32 {
        return Err(Error::Dimension(format!("genus {g} is too large for packed F2 vectors")));
    }
    let goal = Mod2Map::from_word(target, g);
    let gens: Vec<Mod2Map> = generators.iter().map(|c| Mod2Map::transvection(&c.h)).collect();
    let id = Mod2Map::identity(2 * g);
    let mut seen: HashSet<Mod2Map> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    let mut found = seen.contains(&goal);
    while let Some(m) = queue.pop_front() {
        if found {
            break;
        }
        for t in &gens {
            let n = t.compose(&m);
            if seen.insert(n.clone()) {
                if n == goal {
                    found = true;
                }
                if seen.len() > bound {
                    return Err(Error::Resource(format!("{name}: more than {bound} group elements")));
                }
                queue.push_back(n);
            }
        }
    }
    Ok(MembershipReport {
        name: name.into(),
        target: target.describe(),
        member: found,
        group_order: if found { None } else { Some(seen.len()) },
        explored: seen.len(),
        note: "mod 2 image only: membership is necessary, non-membership refutes",
    })
}

/// Target word of the D relation for n curves: T_{Δ0}^{2g-1} T_{Δ2} when
/// n = 2g+1, T_{Δ0}^g T_{Δ1} T_{Δ1'} when n = 2g+2.
pub fn d_target(n: usize, delta0: &FramedCurve, others: &[FramedCurve]) -> Result<TwistWord> {
    if n < 3 {
        return Err(Error::Configuration(format!("D relation needs n >= 3, got {n}")));
    }
    let gd = (n - 1) / 2;
    match (n % 2, others) {
        (1, [d2]) => Ok(TwistWord::letter(delta0, 2 * gd as i64 - 1).push(d2, 1)),
        (0, [d1, d1p]) => Ok(TwistWord::letter(delta0, gd as i64).push(d1, 1).push(d1p, 1)),
        _ => Err(Error::Configuration(format!("n = {n} needs {} boundary curves besides Δ0", 2 - n % 2))),
    }
}

/// The D_n configuration a, a', c_1, ..., c_{n-2}: a and a' meet c_1 only, and
/// c_1, ..., c_{n-2} is a chain.
pub fn verify_d_membership(n: usize, config: &FramedConfig, delta0: &FramedCurve, others: &[FramedCurve], bound: usize) -> Result<MembershipReport> {
    config.validate(None)?;
    if config.curves.len() != n {
        return Err(Error::Configuration(format!("D_{n} needs {n} curves, got {}", config.curves.len())));
    }
    let gm = &config.geometric;
    let ok = (0..n).all(|i| {
        (i + 1..n).all(|j| {
            let want = match (i, j) {
                (0, 1) => 0,
                (0 | 1, 2) => 1,
                (0 | 1, _) => 0,
                _ => (j == i + 1) as u8,
            };
            gm[i][j] == want
        })
    });
    if !ok {
        return Err(Error::Configuration(format!("curves do not form a D_{n} configuration")));
    }
    let target = d_target(n, delta0, others)?;
    mod2_membership(&format!("D_{n}"), &config.curves, &target, bound)
}

/// Twists in the chain carrying curve `from` to curve `to` (up to orientation):
/// T_{c_i} T_{c_{i+1}} sends c_i to ±c_{i+1}.
pub fn slide_word(chain: &[FramedCurve], from: usize, to: usize) -> Result<TwistWord> {
    if from >= chain.len() || to >= chain.len() {
        return Err(Error::Index(format!("chain of length {} has no curve {}", chain.len(), from.max(to))));
    }
    let mut w = TwistWord::new();
    let mut i = from;
    while i != to {
        let j = if to > i { i + 1 } else { i - 1 };
        w = TwistWord::product(&[&chain[i], &chain[j]]).then(&w);
        i = j;
    }
    Ok(w)
}

/// Same curve up to orientation, with matching winding.
pub fn same_framed(a: &FramedCurve, b: &FramedCurve) -> bool {
    (a.h == b.h && a.w == b.w) || (a.h == -&b.h && a.w == b.reversed().w)
}

/// Class c with ⟨d, c⟩ = 1 and q(c) = target; q is ignored when None.
pub fn class_meeting_once(d: &HomologyClass, q: Option<&QuadForm2>, target: u8) -> Result<HomologyClass> {
    let g = d.genus();
    // ⟨d, c⟩ = Σ λ_k c_k
    let lambda: Vec<i64> = (0..g).flat_map(|i| [-d.coords[2 * i + 1], d.coords[2 * i]]).collect();
    let mut acc = 0i64;
    let mut coeffs = vec![0i64; 2 * g];
    for (k, &l) in lambda.iter().enumerate() {
        if l == 0 {
            continue;
        }
        let (dd, x, y) = ext_gcd(acc, l);
        for c in coeffs.iter_mut() {
            *c *= x;
        }
        coeffs[k] += y;
        acc = dd;
    }
    if acc != 1 {
        return Err(Error::Curve(format!("class {d} is not primitive")));
    }
    let v0 = HomologyClass::new(coeffs);
    debug_assert_eq!(pair(d, &v0), 1);
    let Some(q) = q else { return Ok(v0) };
    if quad_value(q, &v0) == target & 1 {
        return Ok(v0);
    }
    for bits in 1u64..(1 << (2 * g)) {
        let u = HomologyClass::new((0..2 * g).map(|k| ((bits >> k) & 1) as i64).collect());
        if pair(d, &u).rem_euclid(2) != 0 {
            continue;
        }
        if (quad_value(q, &u) as i64 + pair(&v0, &u)).rem_euclid(2) == 1 {
            let lift = &u - &v0.scale(pair(d, &u));
            let c = &v0 + &lift;
            debug_assert_eq!(pair(d, &c), 1);
            debug_assert_eq!(quad_value(q, &c), target & 1);
            return Ok(c);
        }
    }
    Err(Error::Obstruction(format!("no class meets {d} once with q = {target}")))
}

#[derive(Clone, Debug)]
pub struct GcdOutcome {
    pub word: TwistWord,
    pub curve: FramedCurve,
    pub b1: Option<FramedCurve>,
    pub b2: Option<FramedCurve>,
    pub x: i64,
    pub y: i64,
}

/// With x k_1 + y k_2 = gcd(k_1, k_2): b_1 meets a_2 once and has winding
/// k_1, b_2 meets T_{b_1}^x(a_2) once and has winding k_2, and
/// c = T_{b_2}^{y-1} T_{b_1}^x (a_2) has winding x k_1 + y k_2.
pub fn gcd_procedure(a1: &FramedCurve, a2: &FramedCurve, q: Option<&QuadForm2>) -> Result<GcdOutcome> {
    let r = a2.r;
    if let Some(q) = q {
        for a in [a1, a2] {
            if !a.parity_consistent(q) {
                return Err(Error::Parity(format!("{} has winding {} of the wrong parity", a.name, a.w)));
            }
        }
    }
    let (k1, k2) = (a1.w, a2.w);
    let (d, x, y) = ext_gcd(k1, k2);
    debug_assert_eq!(d, gcd(k1, k2));
    if x == 0 || y == 0 {
        // one of the curves already carries ±gcd
        let c = if x == 0 { a2 } else { a1 };
        let c = if c.w == d { c.clone() } else { c.reversed() };
        return Ok(GcdOutcome { word: TwistWord::new(), curve: c, b1: None, b2: None, x, y });
    }
    let target_q = |w: i64| ((w + 1).rem_euclid(2)) as u8;
    let b1 = FramedCurve::new("b1", class_meeting_once(&a2.h, q, target_q(k1))?, k1, r);
    let step1 = TwistWord::letter(&b1, x);
    let c1 = pushforward(&step1, a2);
    let b2 = FramedCurve::new("b2", class_meeting_once(&c1.h, q, target_q(k2))?, k2, r);
    let word = TwistWord::letter(&b2, y - 1).then(&step1);
    let mut curve = pushforward(&word, a2);
    curve.name = "c".into();
    Ok(GcdOutcome { word, curve, b1: Some(b1), b2: Some(b2), x, y })
}

/// Probe curves: the given ones plus `count` random classes with coordinates
/// in [-2, 2] and random windings.
pub fn default_probes<R: Rng>(fixed: &[FramedCurve], rng: &mut R, count: usize) -> Vec<FramedCurve> {
    let mut out = fixed.to_vec();
    let Some(first) = fixed.first() else { return out };
    let (g, r) = (first.h.genus(), first.r);
    for k in 0..count {
        let h = HomologyClass::new((0..2 * g).map(|_| rng.gen_range(-2..=2)).collect());
        let w = if r > 0 { rng.gen_range(0..r) } else { rng.gen_range(-5..=5) };
        out.push(FramedCurve::new(format!("random{k}"), h, w, r));
    }
    out
}

/// A square-tiled surface with named cylinder cores, used to realize framed
/// configurations. Windings are turning numbers modulo `r`.
#[derive(Clone, Debug)]
pub struct Surface {
    pub name: String,
    pub origami: Origami,
    pub r: i64,
    pub cores: BTreeMap<String, Cylinder>,
}

impl Surface {
    /// The surface built from the a-curves of a template; it has one cone point.
    pub fn genset(labels: Labels, g: usize) -> Result<Surface> {
        let cs = genset_system(labels, g)?;
        let built = build_origami(&cs)?;
        Ok(Surface { name: format!("{}-g{g}", labels.genset_name()), r: 2 * g as i64 - 2, origami: built.origami, cores: built.cylinders })
    }

    /// The surface built from an arbitrary curve system, with its own spin modulus.
    pub fn from_system(cs: &CurveSystem) -> Result<Surface> {
        let built = build_origami(cs)?;
        Ok(Surface { name: cs.name.clone(), r: built.origami.spin_modulus(), origami: built.origami, cores: built.cylinders })
    }

    pub fn genus(&self) -> usize {
        self.origami.genus()
    }

    pub fn framed(&self, name: &str, c: &CombCurve) -> Result<FramedCurve> {
        Ok(FramedCurve::new(name, self.origami.homology_class(c), self.origami.turning_number(c)?, self.r))
    }

    pub fn core(&self, name: &str) -> Result<FramedCurve> {
        let cyl = self.cores.get(name).ok_or_else(|| Error::Curve(format!("{}: no core named {name}", self.name)))?;
        self.framed(name, &cyl.core)
    }

    pub fn cores_named(&self, names: &[&str]) -> Result<Vec<FramedCurve>> {
        names.iter().map(|n| self.core(n)).collect()
    }

    /// Number of squares shared by two cores of different directions.
    pub fn meet(&self, a: &str, b: &str) -> u8 {
        let (ca, cb) = (&self.cores[a], &self.cores[b]);
        if ca.dir == cb.dir {
            return 0;
        }
        ca.squares.iter().filter(|q| cb.squares.contains(q)).count() as u8
    }

    pub fn config(&self, names: &[&str]) -> Result<FramedConfig> {
        let curves = self.cores_named(names)?;
        let geometric = names.iter().map(|a| names.iter().map(|b| self.meet(a, b)).collect()).collect();
        Ok(FramedConfig { curves, geometric })
    }

    /// Boundary curves of a regular neighborhood of the named cores, with the
    /// neighborhood on their left, and its Euler characteristic.
    pub fn boundary_curves(&self, names: &[&str]) -> Result<(Vec<CombCurve>, i64)> {
        let mut hs = Vec::new();
        let mut vs = Vec::new();
        for n in names {
            let c = self.cores.get(*n).ok_or_else(|| Error::Curve(format!("no core named {n}")))?;
            match c.dir {
                Direction::Horizontal => hs.push(c.clone()),
                Direction::Vertical => vs.push(c.clone()),
            }
        }
        Ok(self.origami.neighborhood_boundary(&hs, &vs))
    }

    /// Framed versions of `boundary_curves`, named label1, label2, ...
    pub fn boundary(&self, names: &[&str], label: &str) -> Result<(Vec<FramedCurve>, i64)> {
        let (curves, chi) = self.boundary_curves(names)?;
        let framed = curves
            .iter()
            .enumerate()
            .map(|(k, c)| self.framed(&format!("{label}{}", k + 1), c))
            .collect::<Result<Vec<_>>>()?;
        Ok((framed, chi))
    }

    /// Geometric symplectic basis on the horizontal cores, as framed curves.
    pub fn reference_basis(&self) -> Result<Vec<FramedCurve>> {
        let xs: Vec<Cylinder> = self.cores.values().filter(|c| c.dir == Direction::Horizontal).cloned().collect();
        let basis = self.origami.geometric_symplectic_basis(&xs)?;
        basis.iter().enumerate().map(|(k, c)| self.framed(&format!("{}{}", if k % 2 == 0 { 'x' } else { 'y' }, k / 2 + 1), c)).collect()
    }
}

/// Sign ε with [target] = ε Σ ... solved for unit coefficients: the integer
/// vector n with Σ n_i classes[i] = target, if its entries are all ±1.
fn unit_solution(classes: &[HomologyClass], target: &HomologyClass) -> Option<Vec<i64>> {
    let n = crate::symplectic::solve_integer(classes, target)?;
    n.iter().all(|x| x.abs() == 1).then_some(n)
}

/// Lantern in a three-chain neighborhood N(c1 ∪ c2 ∪ c3) cut along c1: the
/// boundary is the two sides of c1 with d1, d2; the interior curves are
/// ∂N(c1 ∪ c2), c3 and a third curve z, whose class and winding come from
/// homological coherence on the pair of pants it bounds with a side of c1 and d2.
#[derive(Clone, Debug)]
pub struct RealizedLantern {
    pub boundary: [FramedCurve; 4],
    pub interior: [FramedCurve; 3],
    /// coherence residues on the two pants (c1, c3, d_i) and the torus N(c1 ∪ c2): zero when coherent
    pub coherence: Vec<(String, i64)>,
}

pub fn realize_chain_lantern(s: &Surface, chain: [&str; 3]) -> Result<RealizedLantern> {
    let [n1, n2, n3] = chain;
    let (c1, c3) = (s.core(n1)?, s.core(n3)?);
    let (ds, chi) = s.boundary(&chain, "d")?;
    if ds.len() != 2 || chi != -2 {
        return Err(Error::Configuration(format!("{n1},{n2},{n3} is not a three-chain (boundary {} curves, χ {chi})", ds.len())));
    }
    let (xs, chi_x) = s.boundary(&[n1, n2], "x")?;
    if xs.len() != 1 || chi_x != -1 {
        return Err(Error::Configuration(format!("{n1},{n2} do not meet once")));
    }
    let x = xs[0].clone();
    let r = s.r;
    // d1 bounds a pair of pants with one side of c1 and one of c3: [d1] = -(e1 c1 + e3 c3)
    let eps = unit_solution(&[c1.h.clone(), c3.h.clone()], &-&ds[0].h)
        .ok_or_else(|| Error::Configuration("d1 is not ±c1 ± c3 in homology".into()))?;
    let (e1, e3) = (eps[0], eps[1]);
    let res = |v: i64| v.rem_euclid(r.max(1));
    let mut coherence = vec![
        ("pants c1 c3 d1".to_string(), res(ds[0].w + e1 * c1.w + e3 * c3.w + 1)),
        ("pants c1 c3 d2".to_string(), res(ds[1].w - e1 * c1.w - e3 * c3.w + 1)),
        ("torus c1 c2".to_string(), res(x.w + 1)),
    ];
    if !(&ds[0].h + &ds[1].h).is_zero() {
        coherence.push(("d1 + d2 = 0".into(), 1));
    }
    let a = FramedCurve::new(format!("{n1}+"), c1.h.scale(e1), e1 * c1.w, r);
    let b = FramedCurve::new(format!("{n1}-"), c1.h.scale(-e1), -e1 * c1.w, r);
    // z groups a with d2: pants (a, d2, z) on the left of all three
    let z = FramedCurve::new("z", -&(&a.h + &ds[1].h), -1 - a.w - ds[1].w, r);
    let y = FramedCurve::new(n3, c3.h.clone(), c3.w, r);
    Ok(RealizedLantern { boundary: [a, b, ds[0].clone(), ds[1].clone()], interior: [x, y, z], coherence })
}

/// Realized D_n configuration: the curves, its boundary curves with Δ0
/// identified as the one it shares (mod 2) with the three-chain a, c1, a'.
#[derive(Clone, Debug)]
pub struct RealizedD {
    pub n: usize,
    pub config: FramedConfig,
    pub delta0: FramedCurve,
    pub others: Vec<FramedCurve>,
}

pub fn realize_d(s: &Surface, names: &[&str]) -> Result<RealizedD> {
    let n = names.len();
    let config = s.config(names)?;
    let (bd, _) = s.boundary(names, "Δ")?;
    let (small, _) = s.boundary(&[names[0], names[2], names[1]], "e")?;
    let small2: Vec<u32> = small.iter().map(|c| pack2(&c.h)).collect();
    let idx = bd
        .iter()
        .position(|c| small2.contains(&pack2(&c.h)))
        .ok_or_else(|| Error::Configuration("no boundary curve is shared with the three-chain a, c1, a'".into()))?;
    let delta0 = bd[idx].clone();
    let others: Vec<FramedCurve> = bd.iter().enumerate().filter(|(k, _)| *k != idx).map(|(_, c)| c.clone()).collect();
    Ok(RealizedD { n, config, delta0, others })
}

/// The D_n tree a, a', c1, ..., c_{n-2} as a curve system on its own; `c1_order`
/// is the cyclic order of a, a', c2 along c1.
pub fn d_system(n: usize, c1_order: [&str; 3]) -> Result<CurveSystem> {
    if n < 4 {
        return Err(Error::Configuration(format!("D_{n} needs n >= 4 here")));
    }
    let cname = |i: usize| format!("c{i}");
    let fam = |name: &str| match name {
        "a" | "a'" => Family::V,
        c => {
            let i: usize = c[1..].parse().unwrap_or(0);
            if i % 2 == 1 { Family::H } else { Family::V }
        }
    };
    let point = |x: &str, y: &str| if fam(x) == Family::H { format!("{x}/{y}") } else { format!("{y}/{x}") };
    let mut names = vec!["a".to_string(), "a'".to_string()];
    names.extend((1..=n - 2).map(cname));
    let curves = names
        .iter()
        .map(|nm| {
            let nbrs: Vec<String> = match nm.as_str() {
                "a" | "a'" => vec!["c1".into()],
                "c1" => c1_order.iter().filter(|x| n > 3 || **x != "c2").map(|x| x.to_string()).collect(),
                c => {
                    let i: usize = c[1..].parse().unwrap_or(0);
                    let mut v = vec![cname(i - 1)];
                    if i < n - 2 {
                        v.push(cname(i + 1));
                    }
                    v
                }
            };
            Curve { name: nm.clone(), family: fam(nm), points: nbrs.iter().map(|y| point(nm, y)).collect(), orientation: None }
        })
        .collect();
    let cs = CurveSystem { name: format!("D{n}"), genus: 0, negative_points: vec![], curves };
    cs.validate()?;
    Ok(cs)
}

/// Outcome of reading the explicit slide word one way.
#[derive(Clone, Debug, Serialize)]
pub struct SlideReading {
    pub reading: &'static str,
    /// W⁻¹(a0), the curve this reading would send to a0
    pub preimage: String,
    pub winding: i64,
    /// whether the preimage has the intersection pattern of the target curve
    pub matches: bool,
    pub candidates: usize,
}

/// The word (T5 T4 T3 T2)(T6 T5 T4 T3)(T7 T6 T5 T4)(T0 T5 T6 T7) on the
/// genset-odd surface should carry the curve a_{2g+2} (supported on the chain
/// a2..a6, sitting in the 7-chain a0, a5, a6, a7, ·, a1, a2) to a0. Each
/// reading of the word is checked by pulling a0 back and testing the pattern.
pub fn slide_to_a0_check(s: &Surface) -> Result<Vec<SlideReading>> {
    let a: HashMap<usize, FramedCurve> = (0..2 * s.genus()).map(|i| Ok((i, s.core(&format!("a{i}"))?))).collect::<Result<_>>()?;
    let blocks = [[5, 4, 3, 2], [6, 5, 4, 3], [7, 6, 5, 4], [0, 5, 6, 7]];
    let mut w = TwistWord::new();
    for b in blocks {
        let refs: Vec<&FramedCurve> = b.iter().map(|i| &a[i]).collect();
        w = w.then(&TwistWord::product(&refs));
    }
    // candidates from the pattern alone
    let support = [2usize, 3, 4, 5, 6];
    let pattern = |h: &HomologyClass| {
        h.content() == 1
            && pair(h, &a[&1].h).abs() == 1
            && pair(h, &a[&7].h).abs() == 1
            && [0usize, 2, 5, 6].iter().all(|i| pair(h, &a[i].h) == 0)
    };
    let mut candidates = Vec::new();
    for code in 0..5i64.pow(support.len() as u32) {
        let mut h = HomologyClass::zero(s.genus());
        let mut c = code;
        for i in support {
            h = &h + &a[&i].h.scale(c % 5 - 2);
            c /= 5;
        }
        if pattern(&h) {
            candidates.push(h);
        }
    }
    let mut out = Vec::new();
    for (reading, word) in [("right-to-left", w.clone()), ("left-to-right", w.reversed_order())] {
        let pre = pushforward(&word.inverse(), &a[&0]);
        let matches = candidates.iter().any(|c| *c == pre.h || *c == -&pre.h) && pre.w == 0;
        out.push(SlideReading { reading, preimage: pre.h.to_string(), winding: pre.w, matches, candidates: candidates.len() });
    }
    Ok(out)
}
