//! Square-tiled surfaces from pairs of transverse multicurves, and the
//! prototype curve systems C(κ, Arf).

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::origami::{Cylinder, Direction, Origami};
use crate::spin::{FramedCurve, SpinStructure};
use crate::symplectic::{arf, gcd, quad_form_from_values};

/// Environment variable naming a directory of template files that replaces
/// the bundled ones.
pub const TEMPLATE_DIR_VAR: &str = "RSPIN_TEMPLATE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "h")]
    H,
    #[serde(rename = "v")]
    V,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    pub name: String,
    pub family: Family,
    /// intersection point ids in cyclic order along the listed direction
    pub points: Vec<String>,
    /// b-curves: +1 if the propagated orientation is the one with winding equal
    /// to the index, −1 if it is the reverse
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSystem {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub genus: usize,
    /// points where the listed directions cross negatively
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub negative_points: Vec<String>,
    pub curves: Vec<Curve>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionGraph {
    pub vertices: Vec<String>,
    /// (curve, curve, point)
    pub edges: Vec<(usize, usize, String)>,
    pub connected: bool,
    pub is_tree: bool,
}

impl IntersectionGraph {
    /// Arboreal: the intersection graph of a network is a tree.
    pub fn arboreal(&self) -> bool {
        self.is_tree
    }
}

impl CurveSystem {
    pub fn curve(&self, name: &str) -> Option<&Curve> {
        self.curves.iter().find(|c| c.name == name)
    }

    /// Sub-system on the named curves; points not shared by two kept curves are dropped.
    pub fn subsystem(&self, names: &[&str]) -> CurveSystem {
        let keep: HashSet<&str> = names.iter().copied().collect();
        let kept: Vec<&Curve> = self.curves.iter().filter(|c| keep.contains(c.name.as_str())).collect();
        let mut count: HashMap<&str, usize> = HashMap::new();
        for c in &kept {
            for p in &c.points {
                *count.entry(p.as_str()).or_default() += 1;
            }
        }
        let curves = kept
            .iter()
            .map(|c| Curve { points: c.points.iter().filter(|p| count[p.as_str()] == 2).cloned().collect(), ..(*c).clone() })
            .collect();
        CurveSystem { curves, ..self.clone() }
    }

    /// Every point lies on exactly one h-curve and one v-curve; no curve is
    /// empty; two curves share at most one point.
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for c in &self.curves {
            if !seen.insert(c.name.as_str()) {
                return Err(Error::Configuration(format!("curve {} listed twice", c.name)));
            }
            if c.points.is_empty() {
                return Err(Error::Configuration(format!("curve {} has no intersection points", c.name)));
            }
        }
        let mut on: HashMap<&str, (Vec<usize>, Vec<usize>)> = HashMap::new();
        for (k, c) in self.curves.iter().enumerate() {
            let mut own = HashSet::new();
            for p in &c.points {
                if !own.insert(p.as_str()) {
                    return Err(Error::Configuration(format!("curve {} passes point {p} twice", c.name)));
                }
                let e = on.entry(p.as_str()).or_default();
                match c.family {
                    Family::H => e.0.push(k),
                    Family::V => e.1.push(k),
                }
            }
        }
        let mut pairs = HashSet::new();
        for (p, (h, v)) in &on {
            if h.len() != 1 || v.len() != 1 {
                return Err(Error::Configuration(format!("point {p} must lie on one h-curve and one v-curve")));
            }
            if !pairs.insert((h[0], v[0])) {
                return Err(Error::Configuration(format!(
                    "curves {} and {} meet more than once",
                    self.curves[h[0]].name, self.curves[v[0]].name
                )));
            }
        }
        for p in &self.negative_points {
            if !on.contains_key(p.as_str()) {
                return Err(Error::Configuration(format!("negative point {p} is not an intersection")));
            }
        }
        Ok(())
    }

    fn point_curves(&self) -> BTreeMap<&str, (usize, usize)> {
        let mut h = HashMap::new();
        let mut v = HashMap::new();
        for (k, c) in self.curves.iter().enumerate() {
            for p in &c.points {
                match c.family {
                    Family::H => h.insert(p.as_str(), k),
                    Family::V => v.insert(p.as_str(), k),
                };
            }
        }
        h.into_iter().map(|(p, a)| (p, (a, v[p]))).collect()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("curve systems serialize")
    }

    pub fn from_toml(text: &str) -> Result<CurveSystem> {
        let cs: CurveSystem = toml::from_str(text).map_err(|e| Error::Template(e.to_string()))?;
        cs.validate()?;
        Ok(cs)
    }
}

pub fn intersection_graph(cs: &CurveSystem) -> IntersectionGraph {
    let vertices: Vec<String> = cs.curves.iter().map(|c| c.name.clone()).collect();
    let edges: Vec<(usize, usize, String)> = cs.point_curves().into_iter().map(|(p, (a, b))| (a.min(b), a.max(b), p.to_string())).collect();
    let n = vertices.len();
    let mut adj = vec![Vec::new(); n];
    for (a, b, _) in &edges {
        adj[*a].push(*b);
        adj[*b].push(*a);
    }
    let mut seen = vec![false; n];
    let mut count = 0;
    if n > 0 {
        seen[0] = true;
        count = 1;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
    }
    let connected = count == n;
    let is_tree = connected && edges.len() + 1 == n;
    IntersectionGraph { vertices, edges, connected, is_tree }
}

/// Output of the construction: the origami, the propagated orientation of each
/// curve and its cylinder.
#[derive(Clone, Debug)]
pub struct Built {
    pub origami: Origami,
    /// square index of each point id
    pub squares: BTreeMap<String, usize>,
    pub orientation: BTreeMap<String, i64>,
    pub cylinders: BTreeMap<String, Cylinder>,
}

/// One unit square per intersection point; curves become cylinder cores.
/// Orientations propagate from the lexicographically first h-curve.
pub fn build_origami(cs: &CurveSystem) -> Result<Built> {
    let seed = cs
        .curves
        .iter()
        .filter(|c| c.family == Family::H)
        .map(|c| c.name.as_str())
        .min()
        .ok_or_else(|| Error::Configuration("no h-curves".into()))?;
    build_origami_from(cs, seed, 1)
}

pub fn build_origami_from(cs: &CurveSystem, seed: &str, seed_sign: i64) -> Result<Built> {
    cs.validate()?;
    let n_curves = cs.curves.len();
    let pc = cs.point_curves();
    let negative: HashSet<&str> = cs.negative_points.iter().map(|s| s.as_str()).collect();
    let start = cs.curves.iter().position(|c| c.name == seed).ok_or_else(|| Error::Configuration(format!("unknown seed curve {seed}")))?;
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n_curves];
    for (p, &(a, b)) in &pc {
        let s = if negative.contains(p) { -1 } else { 1 };
        adj[a].push((b, s));
        adj[b].push((a, s));
    }
    let mut eps = vec![0i64; n_curves];
    let mut parent = vec![usize::MAX; n_curves];
    eps[start] = seed_sign;
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for &(y, s) in &adj[x] {
            let want = eps[x] * s;
            if eps[y] == 0 {
                eps[y] = want;
                parent[y] = x;
                queue.push_back(y);
            } else if eps[y] != want {
                return Err(Error::Orientability(odd_cycle(cs, &parent, x, y)));
            }
        }
    }
    if eps.contains(&0) {
        return Err(Error::Connectivity);
    }
    let squares: BTreeMap<String, usize> = pc.keys().enumerate().map(|(k, p)| (p.to_string(), k)).collect();
    let n = squares.len();
    let mut h: Vec<usize> = (0..n).collect();
    let mut v: Vec<usize> = (0..n).collect();
    for (k, c) in cs.curves.iter().enumerate() {
        let mut pts: Vec<usize> = c.points.iter().map(|p| squares[p]).collect();
        if eps[k] < 0 {
            pts.reverse();
        }
        let perm = if c.family == Family::H { &mut h } else { &mut v };
        for i in 0..pts.len() {
            perm[pts[i]] = pts[(i + 1) % pts.len()];
        }
    }
    let origami = Origami::new(h, v)?;
    let mut cylinders = BTreeMap::new();
    let mut orientation = BTreeMap::new();
    for (k, c) in cs.curves.iter().enumerate() {
        let first = if eps[k] > 0 { &c.points[0] } else { c.points.last().expect("nonempty") };
        let dir = if c.family == Family::H { Direction::Horizontal } else { Direction::Vertical };
        cylinders.insert(c.name.clone(), origami.cylinder_through(dir, squares[first]));
        orientation.insert(c.name.clone(), eps[k]);
    }
    Ok(Built { origami, squares, orientation, cylinders })
}

fn odd_cycle(cs: &CurveSystem, parent: &[usize], x: usize, y: usize) -> Vec<String> {
    let chain = |mut a: usize| {
        let mut out = vec![a];
        while parent[a] != usize::MAX {
            a = parent[a];
            out.push(a);
        }
        out
    };
    let (cx, cy) = (chain(x), chain(y));
    let common = cx.iter().find(|a| cy.contains(a)).copied().unwrap_or(x);
    let mut cycle: Vec<usize> = cx.iter().copied().take_while(|&a| a != common).collect();
    cycle.push(common);
    let tail: Vec<usize> = cy.iter().copied().take_while(|&a| a != common).collect();
    cycle.extend(tail.into_iter().rev());
    cycle.into_iter().map(|k| cs.curves[k].name.clone()).collect()
}

/// Sizes (in quarter squares) of the complementary regions of the cores; a
/// region around a zero of order k has 4(k+1) quarters.
pub fn complement_regions(o: &Origami) -> Vec<usize> {
    o.vertex_links().iter().map(|l| l.len()).collect()
}

/// Which labeled template a curve system comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Labels {
    /// cases 1 and 2: odd gcd, or even gcd with the first Arf value
    Twelve,
    /// case 3
    Three,
}

impl Labels {
    pub fn file_stem(self) -> &'static str {
        match self {
            Labels::Twelve => "curvelabels12",
            Labels::Three => "curvelabels3",
        }
    }

    /// Arf invariant of the spin structure for which the genset curves are admissible.
    pub fn genset_arf(self, g: usize) -> u8 {
        let first = matches!(g % 4, 0 | 3) as u8;
        match self {
            Labels::Twelve => first,
            Labels::Three => 1 - first,
        }
    }

    pub fn genset_name(self) -> &'static str {
        match self {
            Labels::Twelve => "genset-even",
            Labels::Three => "genset-odd",
        }
    }
}

macro_rules! bundled {
    ($($stem:literal),* $(,)?) => {
        &[$(($stem, include_str!(concat!("../data/templates/", $stem, ".toml")))),*]
    };
}

static BUNDLED: &[(&str, &str)] = bundled!(
    "curvelabels12-g3",
    "curvelabels12-g4",
    "curvelabels12-g5",
    "curvelabels12-g6",
    "curvelabels12-g7",
    "curvelabels12-g8",
    "curvelabels3-g4",
    "curvelabels3-g5",
    "curvelabels3-g6",
    "curvelabels3-g7",
    "curvelabels3-g8",
);

/// Full labeled system (all a- and b-curves) for a template and genus.
pub fn load_template(labels: Labels, g: usize) -> Result<CurveSystem> {
    let stem = format!("{}-g{g}", labels.file_stem());
    let text = match std::env::var_os(TEMPLATE_DIR_VAR) {
        Some(dir) => {
            let path = PathBuf::from(dir).join(format!("{stem}.toml"));
            std::fs::read_to_string(&path).map_err(|e| Error::Template(format!("{}: {e}", path.display())))?
        }
        None => BUNDLED
            .iter()
            .find(|(s, _)| *s == stem)
            .map(|(_, t)| t.to_string())
            .ok_or_else(|| Error::Template(format!("no bundled template {stem}")))?,
    };
    let cs = CurveSystem::from_toml(&text)?;
    if cs.genus != g {
        return Err(Error::Template(format!("{stem} declares genus {}", cs.genus)));
    }
    Ok(cs)
}

/// The a-curves a_0..a_{2g-1} of a template.
pub fn genset_system(labels: Labels, g: usize) -> Result<CurveSystem> {
    let full = load_template(labels, g)?;
    let names: Vec<String> = (0..2 * g).map(|i| format!("a{i}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut cs = full.subsystem(&refs);
    cs.name = labels.genset_name().into();
    Ok(cs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemChoice {
    pub g: usize,
    pub case: u8,
    pub labels: Labels,
    /// b indices in order of the partial sums, the last one being 0
    pub b_indices: Vec<usize>,
}

/// Partitions of `total` in nonincreasing order.
pub fn partitions(total: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=rest.min(max)).rev() {
            cur.push(k);
            go(rest - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, total, &mut Vec::new(), &mut out);
    out
}

pub fn validate_partition(kappa: &[usize]) -> Result<usize> {
    if kappa.is_empty() || kappa.contains(&0) {
        return Err(Error::Partition(format!("{kappa:?} must be a list of positive integers")));
    }
    let s: usize = kappa.iter().sum();
    if s % 2 != 0 {
        return Err(Error::Partition(format!("{kappa:?} sums to {s}, which is odd")));
    }
    Ok(s / 2 + 1)
}

pub fn choose_system(kappa: &[usize], arf_value: Option<u8>) -> Result<SystemChoice> {
    let g = validate_partition(kappa)?;
    if g < 3 {
        return Err(Error::Partition(format!("{kappa:?} has genus {g} < 3")));
    }
    let d = kappa.iter().fold(0i64, |a, &k| gcd(a, k as i64));
    let (case, labels) = if d % 2 == 1 {
        if arf_value.is_some() {
            return Err(Error::Parameter(format!("gcd {d} is odd: no Arf invariant to choose")));
        }
        (1, Labels::Twelve)
    } else {
        let a = arf_value.ok_or_else(|| Error::Parameter(format!("gcd {d} is even: an Arf value is required")))?;
        if a > 1 {
            return Err(Error::Parameter(format!("Arf must be 0 or 1, got {a}")));
        }
        if g == 3 && a == 0 {
            return Err(Error::Parameter("genus 3 with even gcd needs Arf 1 (Arf 0 is hyperelliptic)".into()));
        }
        if a == Labels::Twelve.genset_arf(g) {
            (2, Labels::Twelve)
        } else {
            (3, Labels::Three)
        }
    };
    let m = 2 * g - 2;
    let mut acc = 0;
    let b_indices = kappa
        .iter()
        .map(|k| {
            acc += k;
            acc % m
        })
        .collect();
    Ok(SystemChoice { g, case, labels, b_indices })
}

fn curve_names(choice: &SystemChoice) -> Vec<String> {
    let mut names: Vec<String> = (1..2 * choice.g).map(|i| format!("a{i}")).collect();
    for &i in &choice.b_indices {
        names.push(if i == 0 { "a0".into() } else { format!("b{i}") });
    }
    names
}

/// C(κ, Arf): the a-curves a_1..a_{2g-1} and the b-curves with indices the
/// partial sums of κ mod 2g−2 (b_0 is a_0).
pub fn curve_system_for(kappa: &[usize], arf_value: Option<u8>) -> Result<(CurveSystem, SystemChoice)> {
    let choice = choose_system(kappa, arf_value)?;
    let full = load_template(choice.labels, choice.g)?;
    let names = curve_names(&choice);
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut cs = full.subsystem(&refs);
    cs.name = format!("C({:?})", kappa);
    let graph = intersection_graph(&cs);
    if !graph.is_tree {
        return Err(Error::Template(format!("{} intersection graph is not a tree", choice.labels.file_stem())));
    }
    Ok((cs, choice))
}

/// Realization of the b-curves of a labeled system on its genset surface: each
/// b_i is the chord across the a-segment it meets, oriented so that its
/// winding is i.
pub struct GensetRealization {
    pub system: CurveSystem,
    pub built: Built,
    /// (index, oriented chord)
    pub b_curves: Vec<(usize, crate::origami::CombCurve)>,
}

pub fn realize_on_genset(labels: Labels, g: usize) -> Result<GensetRealization> {
    let full = load_template(labels, g)?;
    let system = genset_system(labels, g)?;
    let built = build_origami(&system)?;
    let full_built = build_origami(&full)?;
    let mut b_curves = Vec::new();
    for c in &full.curves {
        let Some(idx) = c.name.strip_prefix('b').and_then(|s| s.parse::<usize>().ok()) else { continue };
        let (q, sign) = b_segment(&full, &full_built, &built, c)?;
        let chord = built.origami.chord(Direction::Horizontal, q)?;
        b_curves.push((idx, if sign > 0 { chord } else { chord.reversed() }));
    }
    b_curves.sort_by_key(|(i, _)| *i);
    Ok(GensetRealization { system, built, b_curves })
}

/// Square of the genset surface whose left edge carries the b crossing, and
/// the declared orientation sign.
fn b_segment(full: &CurveSystem, full_built: &Built, genset: &Built, b: &Curve) -> Result<(usize, i64)> {
    if b.points.len() != 1 || b.family != Family::V {
        return Err(Error::Template(format!("{} must be a v-curve with one point", b.name)));
    }
    let p = &b.points[0];
    let a = full
        .curves
        .iter()
        .find(|c| c.family == Family::H && c.points.contains(p))
        .ok_or_else(|| Error::Template(format!("{} meets no h-curve", b.name)))?;
    // walk forward along a in the propagated direction to the next genset point
    let o = &full_built.origami;
    let mut q = o.sigma_h()[full_built.squares[p]];
    let inv: HashMap<usize, &String> = full_built.squares.iter().map(|(k, &v)| (v, k)).collect();
    let mut guard = 0;
    while !genset.squares.contains_key(inv[&q]) {
        q = o.sigma_h()[q];
        guard += 1;
        if guard > o.n() {
            return Err(Error::Template(format!("{} sits on a curve with no genset points", a.name)));
        }
    }
    let sign = b.orientation.ok_or_else(|| Error::Template(format!("{} has no declared orientation", b.name)))?;
    Ok((genset.squares[inv[&q]], sign))
}

#[derive(Clone, Debug)]
pub struct Prototype {
    pub kappa: Vec<usize>,
    pub arf: Option<u8>,
    pub choice: SystemChoice,
    pub system: CurveSystem,
    pub built: Built,
    /// spin structure of the flat surface, on a geometric symplectic basis of
    /// the genset surface
    pub spin: SpinStructure,
    /// curves of the system with classes in the genset surface's coordinates
    pub curves: Vec<FramedCurve>,
    /// (i, winding of b_i mod 2g−2 under the genset structure)
    pub b_windings: Vec<(usize, i64)>,
    /// Arf read off the built surface (every core has q = 1)
    pub arf_from_cores: Option<u8>,
}

pub fn prototype(kappa: &[usize], arf_value: Option<u8>) -> Result<Prototype> {
    let (system, choice) = curve_system_for(kappa, arf_value)?;
    let g = choice.g;
    let built = build_origami(&system)?;
    let r = kappa.iter().fold(0i64, |a, &k| gcd(a, k as i64));
    let m = 2 * g as i64 - 2;
    let gen = realize_on_genset(choice.labels, g)?;
    let o0 = &gen.built.origami;

    // geometric symplectic basis on the genset surface: odd cores and chords
    let xs: Vec<Cylinder> = (0..g).map(|i| gen.built.cylinders[&format!("a{}", 2 * i + 1)].clone()).collect();
    let basis = o0.geometric_symplectic_basis(&xs)?;
    let values = basis.iter().map(|c| o0.turning_number(c).map(|t| t.rem_euclid(r))).collect::<Result<Vec<_>>>()?;
    let spin = SpinStructure { r, g, values };

    let mut curves = Vec::new();
    for c in &system.curves {
        let class = match c.name.strip_prefix('b').and_then(|s| s.parse::<usize>().ok()) {
            Some(i) => {
                let chord = &gen.b_curves.iter().find(|(j, _)| *j == i).expect("template b-curve").1;
                o0.homology_class(chord)
            }
            None => o0.homology_class(&gen.built.cylinders[&c.name].core),
        };
        let w = built.origami.turning_number(&built.cylinders[&c.name].core)?;
        curves.push(FramedCurve::new(c.name.clone(), class, w, r));
    }
    let b_windings = gen
        .b_curves
        .iter()
        .filter(|(i, _)| choice.b_indices.contains(i))
        .map(|(i, c)| o0.turning_number(c).map(|t| (*i, t.rem_euclid(m))))
        .collect::<Result<Vec<_>>>()?;
    let arf_from_cores = if r % 2 == 0 {
        let ob = &built.origami;
        let classes: Vec<_> = built.cylinders.values().map(|c| ob.homology_class(&c.core)).collect();
        Some(arf(&quad_form_from_values(g, &classes, &vec![1; classes.len()])?))
    } else {
        None
    };
    Ok(Prototype { kappa: kappa.to_vec(), arf: arf_value, choice, system, built, spin, curves, b_windings, arf_from_cores })
}

/// One named pass/fail line per prototype invariant.
pub fn prototype_checks(p: &Prototype) -> Vec<(String, bool)> {
    let o = &p.built.origami;
    let g = p.choice.g;
    let mut k = p.kappa.clone();
    k.sort_unstable_by(|a, b| b.cmp(a));
    let r = p.spin.r;
    let mut out = vec![
        ("stratum".to_string(), o.stratum() == k),
        ("genus".to_string(), o.genus() == g),
        ("tree".to_string(), intersection_graph(&p.system).is_tree),
        (
            "cylinders".to_string(),
            o.cylinders(Direction::Horizontal).len() + o.cylinders(Direction::Vertical).len() == p.system.curves.len(),
        ),
        (
            "regions".to_string(),
            complement_regions(o).iter().all(|&l| l % 4 == 0) && complement_regions(o).len() == p.kappa.len(),
        ),
        ("core windings".to_string(), p.curves.iter().all(|c| c.w == 0)),
        (
            "b windings".to_string(),
            p.b_windings.iter().all(|&(i, w)| w == i as i64) && p.b_windings.len() == p.choice.b_indices.iter().filter(|&&i| i != 0).count(),
        ),
    ];
    if r % 2 == 0 {
        let a = p.spin.arf().ok();
        out.push(("arf".to_string(), a == p.arf && a == p.arf_from_cores));
    }
    out
}
