//! Square-tiled surfaces as pairs of permutations, combinatorial curves on
//! them, turning numbers, homology, and cylinder shears.
//!
//! Squares are 0-based internally and 1-based in the text format.
//! `h[q]` is the square to the right of `q`, `v[q]` the square above it.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use rand::Rng;

use crate::error::{Error, Result};
use crate::symplectic::{gcd, reduce_with_radical, HomologyClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    L,
    R,
    B,
    T,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::L, Side::R, Side::B, Side::T];

    pub fn opposite(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
            Side::B => Side::T,
            Side::T => Side::B,
        }
    }

    /// Heading (0 east, 1 north, 2 west, 3 south) right after entering through this side.
    fn heading_in(self) -> i64 {
        match self {
            Side::L => 0,
            Side::B => 1,
            Side::R => 2,
            Side::T => 3,
        }
    }

    /// Heading when leaving through this side.
    fn heading_out(self) -> i64 {
        match self {
            Side::R => 0,
            Side::T => 1,
            Side::L => 2,
            Side::B => 3,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Side::L => 'L',
            Side::R => 'R',
            Side::B => 'B',
            Side::T => 'T',
        }
    }

    pub fn parse(c: &str) -> Result<Side> {
        match c {
            "L" | "l" => Ok(Side::L),
            "R" | "r" => Ok(Side::R),
            "B" | "b" => Ok(Side::B),
            "T" | "t" => Ok(Side::T),
            _ => Err(Error::Parse(format!("unknown side {c:?}"))),
        }
    }

    /// The side a quarter turn counterclockwise from this one.
    fn rotate_ccw(self) -> Side {
        match self {
            Side::R => Side::T,
            Side::T => Side::L,
            Side::L => Side::B,
            Side::B => Side::R,
        }
    }

    fn rotate_cw(self) -> Side {
        match self {
            Side::T => Side::R,
            Side::L => Side::T,
            Side::B => Side::L,
            Side::R => Side::B,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub sq: usize,
    pub entry: Side,
    pub exit: Side,
}

impl Step {
    pub fn new(sq: usize, entry: Side, exit: Side) -> Self {
        Step { sq, entry, exit }
    }

    /// Quarter turns: +1 left, −1 right, 0 straight.
    pub fn turn(&self) -> i64 {
        match (self.exit.heading_out() - self.entry.heading_in()).rem_euclid(4) {
            0 => 0,
            1 => 1,
            3 => -1,
            _ => panic!("U-turn step {self:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CombCurve {
    pub steps: Vec<Step>,
}

impl CombCurve {
    pub fn new(steps: Vec<Step>) -> Self {
        CombCurve { steps }
    }

    pub fn reversed(&self) -> CombCurve {
        CombCurve {
            steps: self.steps.iter().rev().map(|s| Step::new(s.sq, s.exit, s.entry)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Cyclic rotation so that comparisons ignore the starting step.
    pub fn canonical(&self) -> CombCurve {
        let n = self.steps.len();
        let key = |s: &Step| (s.sq, s.entry, s.exit);
        let best = (0..n)
            .min_by(|&a, &b| {
                let ra = (0..n).map(|k| key(&self.steps[(a + k) % n]));
                let rb = (0..n).map(|k| key(&self.steps[(b + k) % n]));
                ra.cmp(rb)
            })
            .unwrap_or(0);
        CombCurve { steps: (0..n).map(|k| self.steps[(best + k) % n]).collect() }
    }
}

impl fmt::Display for CombCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.steps.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "({}:{}:{})", s.sq + 1, s.entry.letter(), s.exit.letter())?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Horizontal,
    Vertical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cylinder {
    pub dir: Direction,
    /// squares in the order the core visits them
    pub squares: Vec<usize>,
    pub core: CombCurve,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Corner {
    BL,
    BR,
    TR,
    TL,
}

/// Turning number reduced by the gcd of the cone orders; modulus 0 on the torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Winding {
    pub value: i64,
    pub modulus: i64,
}

#[derive(Clone, Debug)]
struct HomologyData {
    /// symplectic basis of H1 as dual-graph cycles, x1, y1, ...
    basis: Vec<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct Origami {
    h: Vec<usize>,
    v: Vec<usize>,
    hi: Vec<usize>,
    vi: Vec<usize>,
    homology: OnceLock<HomologyData>,
}

impl PartialEq for Origami {
    fn eq(&self, o: &Origami) -> bool {
        self.h == o.h && self.v == o.v
    }
}

impl Eq for Origami {}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j] = i;
    }
    out
}

fn is_perm(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &j in p {
        if j >= p.len() || seen[j] {
            return false;
        }
        seen[j] = true;
    }
    true
}

pub fn cycles_of(p: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut q = s;
        while !seen[q] {
            seen[q] = true;
            cyc.push(q);
            q = p[q];
        }
        out.push(cyc);
    }
    out
}

impl Origami {
    pub fn new(h: Vec<usize>, v: Vec<usize>) -> Result<Origami> {
        if h.len() != v.len() || h.is_empty() {
            return Err(Error::Dimension(format!("permutations of sizes {} and {}", h.len(), v.len())));
        }
        if !is_perm(&h) || !is_perm(&v) {
            return Err(Error::Parse("sigma_h and sigma_v must be permutations".into()));
        }
        let o = Origami { hi: invert(&h), vi: invert(&v), h, v, homology: OnceLock::new() };
        if !o.is_connected() {
            return Err(Error::Connectivity);
        }
        Ok(o)
    }

    pub fn torus() -> Origami {
        Origami::new(vec![0], vec![0]).expect("torus")
    }

    /// Thurston–Veech surface of a chain of k curves, odd ones horizontal.
    pub fn staircase(k: usize) -> Result<Origami> {
        if k < 2 {
            return Err(Error::Parameter("a staircase needs at least two curves".into()));
        }
        let n = k - 1;
        let mut h: Vec<usize> = (0..n).collect();
        let mut v: Vec<usize> = (0..n).collect();
        // curve c_i (1-based) passes through squares i-2 and i-1
        for i in 2..=k {
            if i - 1 >= n {
                continue;
            }
            let (a, b) = (i - 2, i - 1);
            let p = if i % 2 == 1 { &mut h } else { &mut v };
            p.swap(a, b);
        }
        Origami::new(h, v)
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn sigma_h(&self) -> &[usize] {
        &self.h
    }

    pub fn sigma_v(&self) -> &[usize] {
        &self.v
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n()];
        seen[0] = true;
        let mut stack = vec![0];
        let mut count = 1;
        while let Some(q) = stack.pop() {
            for r in [self.h[q], self.v[q], self.hi[q], self.vi[q]] {
                if !seen[r] {
                    seen[r] = true;
                    count += 1;
                    stack.push(r);
                }
            }
        }
        count == self.n()
    }

    pub fn neighbor(&self, q: usize, side: Side) -> usize {
        match side {
            Side::R => self.h[q],
            Side::L => self.hi[q],
            Side::T => self.v[q],
            Side::B => self.vi[q],
        }
    }

    /// h∘v∘h⁻¹∘v⁻¹
    pub fn commutator(&self) -> Vec<usize> {
        (0..self.n()).map(|q| self.h[self.v[self.hi[self.vi[q]]]]).collect()
    }

    pub fn stratum(&self) -> Vec<usize> {
        let mut k: Vec<usize> = cycles_of(&self.commutator())
            .into_iter()
            .filter(|c| c.len() >= 2)
            .map(|c| c.len() - 1)
            .collect();
        k.sort_unstable_by(|a, b| b.cmp(a));
        k
    }

    pub fn num_vertices(&self) -> usize {
        cycles_of(&self.commutator()).len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.n() as i64
    }

    pub fn genus(&self) -> usize {
        ((2 - self.euler_characteristic()) / 2) as usize
    }

    /// gcd of the zero orders, 0 on the torus.
    pub fn spin_modulus(&self) -> i64 {
        self.stratum().iter().fold(0, |a, &k| gcd(a, k as i64))
    }

    /// Next corner counterclockwise around the shared vertex.
    pub fn corner_next(&self, q: usize, c: Corner) -> (usize, Corner) {
        match c {
            Corner::TR => (self.h[q], Corner::TL),
            Corner::TL => (self.v[q], Corner::BL),
            Corner::BL => (self.hi[q], Corner::BR),
            Corner::BR => (self.vi[q], Corner::TR),
        }
    }

    /// Links of the vertices: each is the counterclockwise cycle of corners.
    pub fn vertex_links(&self) -> Vec<Vec<(usize, Corner)>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for q in 0..self.n() {
            for c in [Corner::BL, Corner::BR, Corner::TR, Corner::TL] {
                if seen.contains(&(q, c)) {
                    continue;
                }
                let mut link = Vec::new();
                let mut cur = (q, c);
                while seen.insert(cur) {
                    link.push(cur);
                    cur = self.corner_next(cur.0, cur.1);
                }
                out.push(link);
            }
        }
        out
    }

    pub fn cylinders(&self, dir: Direction) -> Vec<Cylinder> {
        let (p, entry, exit) = match dir {
            Direction::Horizontal => (&self.h, Side::L, Side::R),
            Direction::Vertical => (&self.v, Side::B, Side::T),
        };
        cycles_of(p)
            .into_iter()
            .map(|squares| {
                let core = CombCurve::new(squares.iter().map(|&q| Step::new(q, entry, exit)).collect());
                Cylinder { dir, squares, core }
            })
            .collect()
    }

    /// The cylinder of the given direction through square q.
    pub fn cylinder_through(&self, dir: Direction, q: usize) -> Cylinder {
        let p = match dir {
            Direction::Horizontal => &self.h,
            Direction::Vertical => &self.v,
        };
        let mut squares = vec![q];
        let mut r = p[q];
        while r != q {
            squares.push(r);
            r = p[r];
        }
        let (entry, exit) = match dir {
            Direction::Horizontal => (Side::L, Side::R),
            Direction::Vertical => (Side::B, Side::T),
        };
        let core = CombCurve::new(squares.iter().map(|&s| Step::new(s, entry, exit)).collect());
        Cylinder { dir, squares, core }
    }

    pub fn validate_curve(&self, c: &CombCurve) -> Result<()> {
        if c.steps.is_empty() {
            return Err(Error::Curve("empty curve".into()));
        }
        let m = c.steps.len();
        for (k, s) in c.steps.iter().enumerate() {
            if s.sq >= self.n() {
                return Err(Error::Curve(format!("square {} out of range", s.sq + 1)));
            }
            if s.entry == s.exit {
                return Err(Error::Curve(format!("U-turn at step {k}")));
            }
            let nx = c.steps[(k + 1) % m];
            if self.neighbor(s.sq, s.exit) != nx.sq || nx.entry != s.exit.opposite() {
                return Err(Error::Curve(format!("steps {k} and {} are not glued", (k + 1) % m)));
            }
        }
        Ok(())
    }

    pub fn turning_number(&self, c: &CombCurve) -> Result<i64> {
        self.validate_curve(c)?;
        let total: i64 = c.steps.iter().map(|s| s.turn()).sum();
        assert!(total % 4 == 0, "turning total {total} is not a multiple of 4; gluing bug");
        Ok(total / 4)
    }

    pub fn winding_number(&self, c: &CombCurve) -> Result<Winding> {
        let t = self.turning_number(c)?;
        let r = self.spin_modulus();
        Ok(Winding { value: if r == 0 { t } else { t.rem_euclid(r) }, modulus: r })
    }

    /// Cellular chain in the dual graph: h-edges q→h(q) first, then v-edges q→v(q).
    pub fn chain(&self, c: &CombCurve) -> Vec<i64> {
        let n = self.n();
        let mut z = vec![0; 2 * n];
        for s in &c.steps {
            match s.exit {
                Side::R => z[s.sq] += 1,
                Side::L => z[self.hi[s.sq]] -= 1,
                Side::T => z[n + s.sq] += 1,
                Side::B => z[n + self.vi[s.sq]] -= 1,
            }
        }
        z
    }

    /// Algebraic intersection of dual-graph cycles after a small diagonal push-off.
    pub fn chain_pairing(&self, a: &[i64], b: &[i64]) -> i64 {
        let n = self.n();
        let mut s = 0;
        for q in 0..n {
            s += a[q] * b[n + self.vi[q]];
            s -= a[n + q] * b[self.hi[q]];
        }
        s
    }

    fn homology(&self) -> &HomologyData {
        self.homology.get_or_init(|| {
            let n = self.n();
            // spanning tree of the dual graph by BFS from square 0
            let mut path: Vec<Option<Vec<i64>>> = vec![None; n];
            path[0] = Some(vec![0; 2 * n]);
            let mut tree = vec![false; 2 * n];
            let mut queue = VecDeque::from([0usize]);
            while let Some(q) = queue.pop_front() {
                let base = path[q].clone().expect("visited");
                let moves = [(self.h[q], q, 1), (self.v[q], n + q, 1), (self.hi[q], self.hi[q], -1), (self.vi[q], n + self.vi[q], -1)];
                for (r, e, sgn) in moves {
                    if path[r].is_none() {
                        let mut p = base.clone();
                        p[e] += sgn;
                        path[r] = Some(p);
                        tree[e] = true;
                        queue.push_back(r);
                    }
                }
            }
            let mut cycles = Vec::new();
            for e in 0..2 * n {
                if tree[e] {
                    continue;
                }
                let (a, b) = if e < n { (e, self.h[e]) } else { (e - n, self.v[e - n]) };
                let mut z: Vec<i64> = path[a].as_ref().expect("connected").clone();
                z[e] += 1;
                for (zi, pi) in z.iter_mut().zip(path[b].as_ref().expect("connected")) {
                    *zi -= pi;
                }
                cycles.push(HomologyClass::new(z));
            }
            let (sb, _radical) =
                reduce_with_radical(&cycles, |a, b| self.chain_pairing(&a.coords, &b.coords)).expect("H1 of a closed surface is unimodular");
            HomologyData { basis: sb.basis.into_iter().map(|c| c.coords).collect() }
        })
    }

    pub fn homology_class(&self, c: &CombCurve) -> HomologyClass {
        self.class_of_chain(&self.chain(c))
    }

    pub fn class_of_chain(&self, z: &[i64]) -> HomologyClass {
        let b = &self.homology().basis;
        let mut out = Vec::with_capacity(b.len());
        for p in b.chunks(2) {
            out.push(self.chain_pairing(z, &p[1]));
            out.push(-self.chain_pairing(z, &p[0]));
        }
        HomologyClass::new(out)
    }

    /// Quarter-turn rotation: the returned surface is this one turned a quarter
    /// turn clockwise, so its horizontal cylinders are our vertical ones.
    fn rotated(&self) -> Origami {
        Origami::new(self.v.clone(), self.hi.clone()).expect("rotation of a valid origami")
    }

    fn unrotated(&self) -> Origami {
        Origami::new(self.vi.clone(), self.h.clone()).expect("rotation of a valid origami")
    }

    /// Re-glue the far edges of a cylinder shifted by e squares along it.
    /// A shift by the circumference realizes the transvection in the core class.
    pub fn cylinder_shear(&self, cyl: &Cylinder, e: i64) -> Origami {
        match cyl.dir {
            Direction::Horizontal => {
                let m = cyl.squares.len() as i64;
                let mut v = self.v.clone();
                for (k, &s) in cyl.squares.iter().enumerate() {
                    let t = cyl.squares[(k as i64 + e).rem_euclid(m) as usize];
                    v[s] = self.v[t];
                }
                Origami::new(self.h.clone(), v).expect("shear keeps permutations")
            }
            Direction::Vertical => {
                let rc = Cylinder { dir: Direction::Horizontal, squares: cyl.squares.clone(), core: rotate_curve(&cyl.core) };
                self.rotated().cylinder_shear(&rc, e).unrotated()
            }
        }
    }

    /// Image of c on `cylinder_shear(cyl, e)`. Strands crossing the cylinder are
    /// replaced by the taut staircase with the sheared endpoints; a strand that
    /// enters and leaves on the same side keeps its displacement.
    pub fn transport_curve(&self, cyl: &Cylinder, e: i64, c: &CombCurve) -> Result<CombCurve> {
        self.validate_curve(c)?;
        match cyl.dir {
            Direction::Horizontal => Ok(self.transport_horizontal(cyl, e, c)),
            Direction::Vertical => {
                let rc = Cylinder { dir: Direction::Horizontal, squares: cyl.squares.clone(), core: rotate_curve(&cyl.core) };
                let out = self.rotated().transport_horizontal(&rc, e, &rotate_curve(c));
                Ok(unrotate_curve(&out))
            }
        }
    }

    fn transport_horizontal(&self, cyl: &Cylinder, e: i64, c: &CombCurve) -> CombCurve {
        let m = cyl.squares.len() as i64;
        let mut pos = vec![usize::MAX; self.n()];
        for (k, &s) in cyl.squares.iter().enumerate() {
            pos[s] = k;
        }
        let shift = |s: usize, d: i64| cyl.squares[(pos[s] as i64 + d).rem_euclid(m) as usize];
        let inside = |s: &Step| pos[s.sq] != usize::MAX;
        let starts_strand = |s: &Step| inside(s) && matches!(s.entry, Side::B | Side::T);
        let Some(first) = c.steps.iter().position(starts_strand) else {
            return c.clone();
        };
        let len = c.steps.len();
        let steps: Vec<Step> = (0..len).map(|k| c.steps[(first + k) % len]).collect();
        let mut out = Vec::with_capacity(len + 4);
        let mut k = 0;
        while k < len {
            let s = steps[k];
            if !starts_strand(&s) {
                out.push(s);
                k += 1;
                continue;
            }
            let start = s.sq;
            let entry = s.entry;
            let mut delta = 0i64;
            let mut j = k;
            loop {
                let t = steps[j];
                match t.exit {
                    Side::R => delta += 1,
                    Side::L => delta -= 1,
                    _ => break,
                }
                j += 1;
            }
            let exit = steps[j].exit;
            let (new_start, new_delta) = match (entry, exit) {
                (Side::B, Side::T) => (start, delta - e),
                (Side::T, Side::B) => (shift(start, -e), delta + e),
                (Side::B, Side::B) => (start, delta),
                _ => (shift(start, -e), delta),
            };
            out.extend(staircase_strand(new_start, entry, exit, new_delta, &shift));
            k = j + 1;
        }
        CombCurve::new(out)
    }

    /// Boundary of a regular neighborhood of the chosen cylinder cores, as
    /// curves with the neighborhood on their left. Returns the curves and χ.
    pub fn neighborhood_boundary(&self, h_cyls: &[Cylinder], v_cyls: &[Cylinder]) -> (Vec<CombCurve>, i64) {
        let n = self.n();
        let mut has_h = vec![false; n];
        let mut has_v = vec![false; n];
        for c in h_cyls {
            for &q in &c.squares {
                has_h[q] = true;
            }
        }
        for c in v_cyls {
            for &q in &c.squares {
                has_v[q] = true;
            }
        }
        let exit_for = |q: usize, entry: Side| -> Option<Side> {
            match (has_h[q], has_v[q]) {
                (true, true) => Some(match entry {
                    Side::R => Side::T,
                    Side::T => Side::L,
                    Side::L => Side::B,
                    Side::B => Side::R,
                }),
                (true, false) => match entry {
                    Side::R => Some(Side::L),
                    Side::L => Some(Side::R),
                    _ => None,
                },
                (false, true) => match entry {
                    Side::B => Some(Side::T),
                    Side::T => Some(Side::B),
                    _ => None,
                },
                _ => None,
            }
        };
        let mut used = HashSet::new();
        let mut comps = Vec::new();
        for q in 0..n {
            for entry in Side::ALL {
                if used.contains(&(q, entry)) || exit_for(q, entry).is_none() {
                    continue;
                }
                let mut steps = Vec::new();
                let (mut cq, mut ce) = (q, entry);
                while used.insert((cq, ce)) {
                    let x = exit_for(cq, ce).expect("boundary lanes continue across edges");
                    steps.push(Step::new(cq, ce, x));
                    cq = self.neighbor(cq, x);
                    ce = x.opposite();
                }
                comps.push(CombCurve::new(steps));
            }
        }
        let crossings = (0..n).filter(|&q| has_h[q] && has_v[q]).count() as i64;
        (comps, -crossings)
    }

    /// Closed curve crossing one core segment once and no other segment of the
    /// cores. `dir` is the direction of the core; the segment is the one entering
    /// square q (from the left for horizontal cores, from below for vertical).
    /// The curve runs around the vertex at the segment's far end; both corners
    /// next to the segment must lie at that same vertex.
    pub fn chord(&self, dir: Direction, q: usize) -> Result<CombCurve> {
        let (first, from, to) = match dir {
            Direction::Horizontal => (Step::new(q, Side::B, Side::T), (q, Corner::TL), (q, Corner::BL)),
            Direction::Vertical => (Step::new(q, Side::R, Side::L), (q, Corner::BL), (q, Corner::BR)),
        };
        let mut steps = vec![first];
        let mut cur = self.corner_next(from.0, from.1);
        let mut guard = 0;
        while cur != to {
            if cur == from || guard > 4 * self.n() {
                return Err(Error::Curve(format!("corners of square {} lie at different vertices", q + 1)));
            }
            steps.push(corner_step(cur));
            cur = self.corner_next(cur.0, cur.1);
            guard += 1;
        }
        Ok(CombCurve::new(steps))
    }

    /// Endpoints of a chord on the boundary circle of the complementary disk,
    /// as doubled positions in the link containing the segment.
    pub fn chord_endpoints(&self, dir: Direction, q: usize) -> (usize, usize, usize) {
        let (a, b) = match dir {
            Direction::Horizontal => ((q, Corner::TL), (q, Corner::BL)),
            Direction::Vertical => ((q, Corner::BL), (q, Corner::BR)),
        };
        for (li, link) in self.vertex_links().iter().enumerate() {
            if let Some(pa) = link.iter().position(|&c| c == a) {
                let pb = link.iter().position(|&c| c == b).unwrap_or(pa);
                let l = 2 * link.len();
                // transition into `a`, transition out of `b`
                return (li, (2 * pa + l - 1) % l, (2 * pb + 1) % l);
            }
        }
        unreachable!("every corner lies in a link")
    }

    /// Completes the cores of pairwise disjoint horizontal cylinders x_1..x_k to
    /// curves x_1, y_1, ..., x_k, y_k with y_i a chord across x_i, the y's pairwise
    /// disjoint (non-interleaving endpoints) and ⟨x_i, y_i⟩ = 1.
    pub fn geometric_symplectic_basis(&self, xs: &[Cylinder]) -> Result<Vec<CombCurve>> {
        let mut options: Vec<Vec<(CombCurve, (usize, usize, usize))>> = Vec::new();
        for cyl in xs {
            if cyl.dir != Direction::Horizontal {
                return Err(Error::Configuration("basis cores must be horizontal".into()));
            }
            let xc = self.homology_class(&cyl.core);
            let mut opts = Vec::new();
            for &q in &cyl.squares {
                let Ok(c) = self.chord(Direction::Horizontal, q) else { continue };
                let ends = self.chord_endpoints(Direction::Horizontal, q);
                let c = if crate::symplectic::pair(&xc, &self.homology_class(&c)) == 1 { c } else { c.reversed() };
                opts.push((c, ends));
            }
            options.push(opts);
        }
        let mut chosen: Vec<usize> = Vec::new();
        if !self.choose_chords(&options, &mut chosen) {
            return Err(Error::Configuration("no non-interleaving choice of chords".into()));
        }
        let mut out = Vec::new();
        for (cyl, &k) in xs.iter().zip(&chosen) {
            out.push(cyl.core.clone());
            out.push(options[out.len() / 2][k].0.clone());
        }
        Ok(out)
    }

    fn choose_chords(&self, options: &[Vec<(CombCurve, (usize, usize, usize))>], chosen: &mut Vec<usize>) -> bool {
        let i = chosen.len();
        if i == options.len() {
            return true;
        }
        for k in 0..options[i].len() {
            let (ref c, e) = options[i][k];
            let cc = self.homology_class(c);
            let ok = chosen.iter().enumerate().all(|(j, &kj)| {
                let (ref d, f) = options[j][kj];
                !interleaved(e, f, 2 * self.vertex_links()[e.0].len()) && crate::symplectic::pair(&cc, &self.homology_class(d)) == 0
            });
            if ok {
                chosen.push(k);
                if self.choose_chords(options, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    /// A random closed walk (not necessarily simple), found by walking until the
    /// initial (square, entry) state recurs.
    pub fn random_closed_curve<R: Rng>(&self, rng: &mut R, max_len: usize) -> CombCurve {
        loop {
            let q0 = rng.gen_range(0..self.n());
            let e0 = Side::ALL[rng.gen_range(0..4)];
            let (mut q, mut e) = (q0, e0);
            let mut steps = Vec::new();
            while steps.len() < max_len {
                let choices: Vec<Side> = Side::ALL.iter().copied().filter(|&s| s != e).collect();
                let x = choices[rng.gen_range(0..3)];
                steps.push(Step::new(q, e, x));
                q = self.neighbor(q, x);
                e = x.opposite();
                if q == q0 && e == e0 {
                    return CombCurve::new(steps);
                }
            }
        }
    }

    pub fn to_text(&self) -> String {
        format!("{}\n{}\n{}\n", self.n(), cycle_notation(&self.h), cycle_notation(&self.v))
    }

    pub fn parse(text: &str) -> Result<Origami> {
        let lines: Vec<&str> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .collect();
        if lines.len() < 3 {
            return Err(Error::Parse("expected n, sigma_h and sigma_v lines".into()));
        }
        let n: usize = lines[0].parse().map_err(|_| Error::Parse(format!("bad square count {:?}", lines[0])))?;
        if n == 0 {
            return Err(Error::Parse("origami needs at least one square".into()));
        }
        let h = parse_cycles(lines[1], n)?;
        let v = parse_cycles(lines[2], n)?;
        Origami::new(h, v)
    }

    pub fn parse_curve(&self, text: &str) -> Result<CombCurve> {
        let c = parse_curve_text(text)?;
        self.validate_curve(&c)?;
        Ok(c)
    }
}

/// Whether two chords' endpoint pairs alternate around the same link circle of
/// doubled length l.
fn interleaved(a: (usize, usize, usize), b: (usize, usize, usize), l: usize) -> bool {
    if a.0 != b.0 {
        return false;
    }
    let inside = |p: usize| {
        let d = (p + l - a.1) % l;
        d > 0 && d < (a.2 + l - a.1) % l
    };
    inside(b.1) != inside(b.2)
}

fn corner_step(c: (usize, Corner)) -> Step {
    let (entry, exit) = match c.1 {
        Corner::TR => (Side::T, Side::R),
        Corner::TL => (Side::L, Side::T),
        Corner::BL => (Side::B, Side::L),
        Corner::BR => (Side::R, Side::B),
    };
    Step::new(c.0, entry, exit)
}

/// Taut path inside a horizontal cylinder from `entry` of `start`, moving
/// `delta` squares sideways, leaving through `exit`.
fn staircase_strand(start: usize, entry: Side, exit: Side, delta: i64, shift: &dyn Fn(usize, i64) -> usize) -> Vec<Step> {
    if delta == 0 {
        assert_ne!(entry, exit, "zero-displacement strand must cross the cylinder");
        return vec![Step::new(start, entry, exit)];
    }
    let (fwd, back) = if delta > 0 { (Side::R, Side::L) } else { (Side::L, Side::R) };
    let sgn = delta.signum();
    let mut out = vec![Step::new(start, entry, fwd)];
    for k in 1..delta.abs() {
        out.push(Step::new(shift(start, sgn * k), back, fwd));
    }
    out.push(Step::new(shift(start, delta), back, exit));
    out
}

/// Curve on the rotated surface corresponding to c.
fn rotate_curve(c: &CombCurve) -> CombCurve {
    // the rotated frame's right is our top
    CombCurve::new(c.steps.iter().map(|s| Step::new(s.sq, s.entry.rotate_cw(), s.exit.rotate_cw())).collect())
}

fn unrotate_curve(c: &CombCurve) -> CombCurve {
    CombCurve::new(c.steps.iter().map(|s| Step::new(s.sq, s.entry.rotate_ccw(), s.exit.rotate_ccw())).collect())
}

pub fn cycle_notation(p: &[usize]) -> String {
    let cyc: Vec<Vec<usize>> = cycles_of(p).into_iter().filter(|c| c.len() > 1).collect();
    if cyc.is_empty() {
        return "()".into();
    }
    cyc.iter()
        .map(|c| format!("({})", c.iter().map(|q| (q + 1).to_string()).collect::<Vec<_>>().join(" ")))
        .collect()
}

pub fn parse_cycles(line: &str, n: usize) -> Result<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut assigned = vec![false; n];
    let mut rest = line.trim();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(Error::Parse(format!("expected '(' in {line:?}")));
        }
        let close = rest.find(')').ok_or_else(|| Error::Parse(format!("unclosed cycle in {line:?}")))?;
        let body = &rest[1..close];
        let elems: Vec<usize> = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad entry {t:?}"))))
            .collect::<Result<_>>()?;
        for &x in &elems {
            if x == 0 || x > n {
                return Err(Error::Parse(format!("entry {x} outside 1..{n}")));
            }
            if assigned[x - 1] {
                return Err(Error::Parse(format!("entry {x} repeated: not a permutation")));
            }
            assigned[x - 1] = true;
        }
        for k in 0..elems.len() {
            p[elems[k] - 1] = elems[(k + 1) % elems.len()] - 1;
        }
        rest = rest[close + 1..].trim_start();
    }
    Ok(p)
}

pub fn parse_curve_text(text: &str) -> Result<CombCurve> {
    let mut steps = Vec::new();
    for tok in text.split_whitespace() {
        let t = tok.trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = t.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("bad step {tok:?}")));
        }
        let q: usize = parts[0].parse().map_err(|_| Error::Parse(format!("bad square in {tok:?}")))?;
        if q == 0 {
            return Err(Error::Parse("squares are numbered from 1".into()));
        }
        steps.push(Step::new(q - 1, Side::parse(parts[1])?, Side::parse(parts[2])?));
    }
    if steps.is_empty() {
        return Err(Error::Parse("empty curve".into()));
    }
    Ok(CombCurve::new(steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::pair;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn l_shape() -> Origami {
        Origami::parse("3\n(1 2)\n(1 3)\n").unwrap()
    }

    #[test]
    fn strata_and_genus() {
        let t = Origami::torus();
        assert!(t.stratum().is_empty());
        assert_eq!(t.genus(), 1);
        let l = l_shape();
        assert_eq!(l.stratum(), vec![2]);
        assert_eq!(l.genus(), 2);
        // V − E + F with F = 3, E = 6
        assert_eq!(l.num_vertices() as i64 - 6 + 3, 2 - 2 * 2);
        assert_eq!(l.vertex_links().len(), l.num_vertices());
    }

    #[test]
    fn cylinders_of_l_shape() {
        let l = l_shape();
        let mut lens: Vec<usize> = l.cylinders(Direction::Horizontal).iter().map(|c| c.squares.len()).collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![1, 2]);
        for c in l.cylinders(Direction::Horizontal).iter().chain(l.cylinders(Direction::Vertical).iter()) {
            assert_eq!(l.turning_number(&c.core).unwrap(), 0);
        }
    }

    #[test]
    fn square_boundary_turns_once() {
        // small counterclockwise loop around the top-right corner of square 1 on a 4-square torus
        let o = Origami::parse("4\n(1 2)(3 4)\n(1 3)(2 4)\n").unwrap();
        let q = 0;
        let mut steps = Vec::new();
        let mut cur = (o.h[q], Corner::TL);
        loop {
            steps.push(corner_step(cur));
            if cur == (q, Corner::TR) {
                break;
            }
            cur = o.corner_next(cur.0, cur.1);
        }
        let c = CombCurve::new(steps);
        assert_eq!(c.len(), 4);
        assert_eq!(o.turning_number(&c).unwrap(), 1);
        assert_eq!(o.turning_number(&c.reversed()).unwrap(), -1);
        assert!(o.homology_class(&c).is_zero());
    }

    #[test]
    fn torus_classes() {
        let t = Origami::torus();
        let h = &t.cylinders(Direction::Horizontal)[0].core;
        let v = &t.cylinders(Direction::Vertical)[0].core;
        assert_eq!(t.homology_class(h).coords, vec![1, 0]);
        assert_eq!(pair(&t.homology_class(h), &t.homology_class(v)), 1);
        assert_eq!(t.winding_number(h).unwrap(), Winding { value: 0, modulus: 0 });
    }

    #[test]
    fn one_holed_torus_boundary() {
        let l = l_shape();
        let h = l.cylinder_through(Direction::Horizontal, 0);
        let v = l.cylinder_through(Direction::Vertical, 0);
        let (bd, chi) = l.neighborhood_boundary(&[h], &[v]);
        assert_eq!(chi, -1);
        assert_eq!(bd.len(), 1);
        assert_eq!(l.turning_number(&bd[0]).unwrap(), -1);
        assert!(l.homology_class(&bd[0]).is_zero());
    }

    #[test]
    fn shear_examples() {
        let o = Origami::parse("3\n(1 2 3)\n()\n").unwrap();
        let cyl = o.cylinders(Direction::Horizontal)[0].clone();
        assert_eq!(o.cylinder_shear(&cyl, 0), o);
        let s = o.cylinder_shear(&cyl, 1);
        assert_eq!(cycles_of(s.sigma_v()).len(), 1);
        assert_eq!(s.genus(), 1);
    }

    #[test]
    fn full_twist_on_torus_is_a_transvection() {
        let t = Origami::torus();
        let hc = t.cylinders(Direction::Horizontal)[0].clone();
        let vc = t.cylinders(Direction::Vertical)[0].clone();
        let moved = t.transport_curve(&hc, 1, &vc.core).unwrap();
        assert_eq!(t.cylinder_shear(&hc, 1), t);
        let expect = &t.homology_class(&vc.core) + &t.homology_class(&hc.core).scale(pair(&t.homology_class(&vc.core), &t.homology_class(&hc.core)));
        assert_eq!(t.homology_class(&moved), expect);
        let moved_h = t.transport_curve(&vc, 1, &hc.core).unwrap();
        let expect_h = &t.homology_class(&hc.core) + &t.homology_class(&vc.core).scale(pair(&t.homology_class(&hc.core), &t.homology_class(&vc.core)));
        assert_eq!(t.homology_class(&moved_h), expect_h);
    }

    #[test]
    fn transport_at_zero_is_idempotent() {
        let l = l_shape();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let c = l.random_closed_curve(&mut rng, 60);
            for cyl in l.cylinders(Direction::Horizontal).iter().chain(l.cylinders(Direction::Vertical).iter()) {
                let once = l.transport_curve(cyl, 0, &c).unwrap();
                let twice = l.transport_curve(cyl, 0, &once).unwrap();
                assert_eq!(once.canonical(), twice.canonical());
                assert_eq!(l.turning_number(&once).unwrap(), l.turning_number(&c).unwrap());
                assert_eq!(l.homology_class(&once), l.homology_class(&c));
            }
        }
    }

    #[test]
    fn text_round_trip_and_rejections() {
        let l = l_shape();
        assert_eq!(Origami::parse(&l.to_text()).unwrap(), l);
        assert!(Origami::parse("3\n(1 2)(2 3)\n()\n").is_err());
        assert!(Origami::parse("3\n(1 4)\n()\n").is_err());
        assert!(matches!(Origami::parse("2\n()\n()\n"), Err(Error::Connectivity)));
        let c = l.parse_curve("(1:L:R) (2:L:R)").unwrap();
        assert_eq!(c.to_string(), "(1:L:R) (2:L:R)");
        assert!(l.parse_curve("(1:L:R)").is_err());
        assert!(l.parse_curve("(1:L:L) (2:R:R)").is_err());
    }

    #[test]
    fn staircase_strata() {
        for g in 2..=5usize {
            let o = Origami::staircase(2 * g).unwrap();
            assert_eq!(o.genus(), g);
            assert_eq!(o.stratum(), vec![2 * g - 2]);
        }
    }
}
