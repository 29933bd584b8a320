//! Integer and F2 symplectic linear algebra in the basis (x1, y1, ..., xg, yg).

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomologyClass {
    pub coords: Vec<i64>,
}

impl HomologyClass {
    pub fn new(coords: Vec<i64>) -> Self {
        HomologyClass { coords }
    }

    pub fn zero(g: usize) -> Self {
        HomologyClass { coords: vec![0; 2 * g] }
    }

    /// Basis vector by position: 2i is x_{i+1}, 2i+1 is y_{i+1}.
    pub fn basis(g: usize, k: usize) -> Self {
        let mut c = vec![0; 2 * g];
        c[k] = 1;
        HomologyClass { coords: c }
    }

    pub fn x(g: usize, i: usize) -> Self {
        Self::basis(g, 2 * i)
    }

    pub fn y(g: usize, i: usize) -> Self {
        Self::basis(g, 2 * i + 1)
    }

    pub fn genus(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        HomologyClass { coords: self.coords.iter().map(|c| c * k).collect() }
    }

    /// gcd of the coordinates; 1 exactly for primitive classes.
    pub fn content(&self) -> i64 {
        self.coords.iter().fold(0, |a, &b| gcd(a, b))
    }

    pub fn mod2(&self) -> u64 {
        let mut bits = 0u64;
        for (k, c) in self.coords.iter().enumerate() {
            if c.rem_euclid(2) == 1 {
                bits |= 1 << k;
            }
        }
        bits
    }

    pub fn reduce(&self, s: i64) -> Self {
        HomologyClass { coords: self.coords.iter().map(|c| c.rem_euclid(s)).collect() }
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &HomologyClass {
    type Output = HomologyClass;
    fn add(self, o: &HomologyClass) -> HomologyClass {
        assert_eq!(self.coords.len(), o.coords.len());
        HomologyClass { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &HomologyClass {
    type Output = HomologyClass;
    fn sub(self, o: &HomologyClass) -> HomologyClass {
        assert_eq!(self.coords.len(), o.coords.len());
        HomologyClass { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &HomologyClass {
    type Output = HomologyClass;
    fn neg(self) -> HomologyClass {
        self.scale(-1)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended Euclid: returns (d, x, y) with a*x + b*y = d = gcd(a, b) >= 0.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn pairing(u: &HomologyClass, v: &HomologyClass) -> Result<i64> {
    if u.coords.len() != v.coords.len() || u.coords.len() % 2 != 0 {
        return Err(Error::Dimension(format!("{} vs {}", u.coords.len(), v.coords.len())));
    }
    Ok(pair(u, v))
}

/// Unchecked pairing; panics on length mismatch.
pub fn pair(u: &HomologyClass, v: &HomologyClass) -> i64 {
    assert_eq!(u.coords.len(), v.coords.len(), "pairing of classes of different genus");
    let mut s = 0;
    for i in 0..u.coords.len() / 2 {
        s += u.coords[2 * i] * v.coords[2 * i + 1] - u.coords[2 * i + 1] * v.coords[2 * i];
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymplecticMap {
    /// column k is the image of basis vector k
    pub matrix: Vec<Vec<i64>>,
}

impl SymplecticMap {
    pub fn identity(g: usize) -> Self {
        let n = 2 * g;
        let mut m = vec![vec![0; n]; n];
        for (k, row) in m.iter_mut().enumerate() {
            row[k] = 1;
        }
        SymplecticMap { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn from_columns(cols: &[HomologyClass]) -> Self {
        let n = cols.len();
        let mut m = vec![vec![0; n]; n];
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m[i][j] = c.coords[i];
            }
        }
        SymplecticMap { matrix: m }
    }

    pub fn column(&self, j: usize) -> HomologyClass {
        HomologyClass { coords: self.matrix.iter().map(|row| row[j]).collect() }
    }

    pub fn apply(&self, v: &HomologyClass) -> HomologyClass {
        let n = self.dim();
        let mut out = vec![0; n];
        for (i, row) in self.matrix.iter().enumerate() {
            out[i] = row.iter().zip(&v.coords).map(|(a, b)| a * b).sum();
        }
        HomologyClass { coords: out }
    }

    /// self ∘ other
    pub fn compose(&self, other: &SymplecticMap) -> SymplecticMap {
        let n = self.dim();
        let cols: Vec<HomologyClass> = (0..n).map(|j| self.apply(&other.column(j))).collect();
        SymplecticMap::from_columns(&cols)
    }

    pub fn is_symplectic(&self) -> bool {
        let n = self.dim();
        let cols: Vec<HomologyClass> = (0..n).map(|j| self.column(j)).collect();
        let g = n / 2;
        for a in 0..n {
            for b in 0..n {
                let expect = pair(&HomologyClass::basis(g, a), &HomologyClass::basis(g, b));
                if pair(&cols[a], &cols[b]) != expect {
                    return false;
                }
            }
        }
        true
    }

    pub fn mod2(&self) -> F2Mat {
        let n = self.dim();
        let mut cols = [0u8; 8];
        for (j, col) in cols.iter_mut().enumerate().take(n) {
            *col = self.column(j).mod2() as u8;
        }
        F2Mat { cols, n: n as u8 }
    }
}

pub fn transvection(c: &HomologyClass, e: i64) -> SymplecticMap {
    let n = c.coords.len();
    let g = n / 2;
    let cols: Vec<HomologyClass> = (0..n)
        .map(|k| {
            let v = HomologyClass::basis(g, k);
            let t = e * pair(&v, c);
            &v + &c.scale(t)
        })
        .collect();
    SymplecticMap::from_columns(&cols)
}

/// Quadratic form over F2 given by its values on the reference basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadForm2 {
    pub basis_values: Vec<u8>,
}

impl QuadForm2 {
    pub fn new(values: Vec<u8>) -> Self {
        QuadForm2 { basis_values: values.into_iter().map(|v| v & 1).collect() }
    }

    pub fn genus(&self) -> usize {
        self.basis_values.len() / 2
    }

    pub fn from_bits(g: usize, bits: u64) -> Self {
        QuadForm2 { basis_values: (0..2 * g).map(|k| ((bits >> k) & 1) as u8).collect() }
    }

    pub fn bits(&self) -> u64 {
        self.basis_values.iter().enumerate().fold(0, |acc, (k, &v)| acc | ((v as u64) << k))
    }

    /// q on a packed mod-2 vector.
    pub fn value_bits(&self, v: u64) -> u8 {
        let g = self.genus();
        let mut s = 0u8;
        for k in 0..2 * g {
            if (v >> k) & 1 == 1 {
                s ^= self.basis_values[k];
            }
        }
        for i in 0..g {
            s ^= (((v >> (2 * i)) & 1) & ((v >> (2 * i + 1)) & 1)) as u8;
        }
        s
    }
}

pub fn quad_value(q: &QuadForm2, h: &HomologyClass) -> u8 {
    q.value_bits(h.mod2())
}

pub fn arf(q: &QuadForm2) -> u8 {
    (0..q.genus()).fold(0, |acc, i| acc ^ (q.basis_values[2 * i] & q.basis_values[2 * i + 1]))
}

/// Arf of q restricted to a unimodular sublattice with the given symplectic basis.
pub fn arf_on_basis(q: &QuadForm2, basis: &[HomologyClass]) -> u8 {
    basis
        .chunks(2)
        .fold(0, |acc, p| acc ^ (quad_value(q, &p[0]) & quad_value(q, &p[1])))
}

/// The quadratic form taking the given values on classes that span H ⊗ F2.
/// Inconsistent values (not coming from any quadratic form) are an obstruction.
pub fn quad_form_from_values(g: usize, classes: &[HomologyClass], values: &[u8]) -> Result<QuadForm2> {
    let n = 2 * g;
    let mut rows: Vec<(u64, u8)> = classes.iter().zip(values).map(|(c, &v)| (c.mod2(), v & 1)).collect();
    let mut rank = 0;
    for bit in 0..n {
        let Some(p) = (rank..rows.len()).find(|&i| (rows[i].0 >> bit) & 1 == 1) else {
            return Err(Error::Rank(format!("classes do not span H mod 2 (missing direction {bit})")));
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && (row.0 >> bit) & 1 == 1 {
                *row = (row.0 ^ pivot.0, row.1 ^ pivot.1 ^ pair2(row.0, pivot.0));
            }
        }
        rank += 1;
    }
    let q = QuadForm2 { basis_values: rows[..n].iter().map(|r| r.1).collect() };
    for (c, &v) in classes.iter().zip(values) {
        if quad_value(&q, c) != v & 1 {
            return Err(Error::Obstruction(format!("value {v} on class {c} is not quadratic")));
        }
    }
    Ok(q)
}

/// F2 matrix of size n ≤ 8, column j packed into cols[j].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct F2Mat {
    pub cols: [u8; 8],
    pub n: u8,
}

impl F2Mat {
    pub fn identity(n: usize) -> Self {
        let mut cols = [0u8; 8];
        for (j, c) in cols.iter_mut().enumerate().take(n) {
            *c = 1 << j;
        }
        F2Mat { cols, n: n as u8 }
    }

    pub fn apply(&self, v: u8) -> u8 {
        let mut out = 0;
        for j in 0..self.n as usize {
            if (v >> j) & 1 == 1 {
                out ^= self.cols[j];
            }
        }
        out
    }

    pub fn compose(&self, other: &F2Mat) -> F2Mat {
        let mut cols = [0u8; 8];
        for (j, c) in cols.iter_mut().enumerate().take(self.n as usize) {
            *c = self.apply(other.cols[j]);
        }
        F2Mat { cols, n: self.n }
    }

    pub fn key(&self) -> u64 {
        u64::from_le_bytes(self.cols)
    }

    pub fn transvection(n: usize, v: u8) -> F2Mat {
        let mut cols = [0u8; 8];
        for (j, c) in cols.iter_mut().enumerate().take(n) {
            let e = 1u8 << j;
            *c = if pair2(e as u64, v as u64) == 1 { e ^ v } else { e };
        }
        F2Mat { cols, n: n as u8 }
    }
}

/// Symplectic pairing of packed mod-2 vectors.
pub fn pair2(u: u64, v: u64) -> u8 {
    const EVEN: u64 = 0x5555_5555_5555_5555;
    let swapped = ((v & EVEN) << 1) | ((v & !EVEN) >> 1);
    ((u & swapped).count_ones() & 1) as u8
}

pub const F2_ENUMERATION_BOUND: usize = 8;

/// |Sp(2g, F2)| = 2^{g^2} Π (4^i − 1).
pub fn sp_order_f2(g: usize) -> u64 {
    let mut n: u64 = 1 << (g * g);
    for i in 1..=g {
        n *= (1u64 << (2 * i)) - 1;
    }
    n
}

/// Breadth-first closure of the group generated by the given matrices.
pub fn closure_f2(n: usize, gens: &[F2Mat], limit: usize) -> Result<HashSet<u64>> {
    let id = F2Mat::identity(n);
    let mut seen = HashSet::new();
    seen.insert(id.key());
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for s in gens {
            let p = s.compose(&m);
            if seen.insert(p.key()) {
                if seen.len() > limit {
                    return Err(Error::Resource(format!("group closure exceeds {limit} elements")));
                }
                queue.push_back(p);
            }
        }
    }
    Ok(seen)
}

pub fn unpack_f2(key: u64, n: usize) -> F2Mat {
    F2Mat { cols: key.to_le_bytes(), n: n as u8 }
}

/// Transvections in x_i, y_i and y_i + y_{i+1}; these generate Sp(2g, F2).
pub fn sp_generators_f2(g: usize) -> Vec<F2Mat> {
    let n = 2 * g;
    let mut vs: Vec<u8> = (0..n).map(|k| 1u8 << k).collect();
    for i in 0..g.saturating_sub(1) {
        vs.push((1 << (2 * i + 1)) | (1 << (2 * i + 3)));
    }
    vs.into_iter().map(|v| F2Mat::transvection(n, v)).collect()
}

/// Subgroup of Sp(2g, F2) generated by transvections in the vectors v with q(v) = 1.
pub fn stabilizer_group_f2(q: &QuadForm2) -> Result<HashSet<u64>> {
    let n = q.basis_values.len();
    let group = transvection_subgroup_f2(q)?;
    let g = n / 2;
    let orbit = quad_form_orbits(g).into_iter().find(|o| o.contains(&(q.bits() as u8))).map_or(1, |o| o.len() as u64);
    if group.len() as u64 * orbit == sp_order_f2(g) {
        return Ok(group);
    }
    // the transvections fall short of the full stabilizer only for small split forms
    // (O+(4,2) has index 2 over its reflection subgroup); filter Sp directly there
    if n > 6 {
        return Err(Error::Resource(format!("stabilizer of a form in dimension {n} not generated by transvections")));
    }
    let all = closure_f2(n, &sp_generators_f2(g), 50_000_000)?;
    Ok(all.into_iter().filter(|&k| pullback(q, &unpack_f2(k, n)) == *q).collect())
}

/// Subgroup of Sp(2g, F2) generated by transvections in vectors with q(v) = 1.
pub fn transvection_subgroup_f2(q: &QuadForm2) -> Result<HashSet<u64>> {
    let n = q.basis_values.len();
    if n > F2_ENUMERATION_BOUND {
        return Err(Error::Resource(format!("2g = {n} exceeds the enumeration bound {F2_ENUMERATION_BOUND}")));
    }
    let gens: Vec<F2Mat> = (1u16..(1 << n))
        .map(|v| v as u8)
        .filter(|&v| q.value_bits(v as u64) == 1)
        .map(|v| F2Mat::transvection(n, v))
        .collect();
    closure_f2(n, &gens, 50_000_000)
}

/// Pullback q ∘ A.
pub fn pullback(q: &QuadForm2, a: &F2Mat) -> QuadForm2 {
    let n = q.basis_values.len();
    QuadForm2 { basis_values: (0..n).map(|j| q.value_bits(a.cols[j] as u64)).collect() }
}

/// Orbits of all 2^{2g} quadratic forms under Sp(2g, F2), as sorted lists of packed forms.
pub fn quad_form_orbits(g: usize) -> Vec<Vec<u8>> {
    let gens = sp_generators_f2(g);
    let total = 1usize << (2 * g);
    let mut seen = vec![false; total];
    let mut orbits = Vec::new();
    for start in 0..total {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start as u8];
        let mut queue = VecDeque::from([start as u8]);
        while let Some(b) = queue.pop_front() {
            let q = QuadForm2::from_bits(g, b as u64);
            for s in &gens {
                let p = pullback(&q, s).bits() as u8;
                if !seen[p as usize] {
                    seen[p as usize] = true;
                    orbit.push(p);
                    queue.push_back(p);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// Output of the symplectic Gram–Schmidt procedure.
#[derive(Clone, Debug)]
pub struct SymplecticBasis {
    /// x1, y1, ..., xg, yg in the ambient coordinates
    pub basis: Vec<HomologyClass>,
    /// row k expresses basis[k] as an integer combination of the input vectors
    pub change: Vec<Vec<i64>>,
}

/// Symplectic Gram–Schmidt over Z. The input must span a unimodular lattice.
pub fn symplectic_basis_from_unimodular(vectors: &[HomologyClass]) -> Result<SymplecticBasis> {
    reduce_symplectic(vectors, pair)
}

/// Same as above with an arbitrary alternating form supplied by the caller.
pub fn reduce_symplectic<F>(vectors: &[HomologyClass], form: F) -> Result<SymplecticBasis>
where
    F: Fn(&HomologyClass, &HomologyClass) -> i64,
{
    let (basis, radical) = reduce_with_radical(vectors, form)?;
    if !radical.is_empty() {
        return Err(Error::Rank("degenerate pairing on the span".into()));
    }
    Ok(basis)
}

/// Splits off hyperbolic pairs until the form vanishes on what is left; the
/// leftover vectors span the radical of the form on the input span.
pub fn reduce_with_radical<F>(vectors: &[HomologyClass], form: F) -> Result<(SymplecticBasis, Vec<HomologyClass>)>
where
    F: Fn(&HomologyClass, &HomologyClass) -> i64,
{
    let m = vectors.len();
    let mut rest: Vec<(HomologyClass, Vec<i64>)> = vectors
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let mut e = vec![0; m];
            e[k] = 1;
            (v.clone(), e)
        })
        .collect();
    let mut basis = Vec::with_capacity(m);
    let mut change = Vec::with_capacity(m);
    let comb = |a: &(HomologyClass, Vec<i64>), k: i64, b: &(HomologyClass, Vec<i64>)| {
        (
            &a.0 + &b.0.scale(k),
            a.1.iter().zip(&b.1).map(|(x, y)| x + k * y).collect::<Vec<i64>>(),
        )
    };
    while !rest.is_empty() {
        let mut best: Option<(usize, usize, i64)> = None;
        for i in 0..rest.len() {
            for j in i + 1..rest.len() {
                let p = form(&rest[i].0, &rest[j].0);
                if p != 0 && best.is_none_or(|(_, _, b)| p.abs() < b.abs()) {
                    best = Some((i, j, p));
                }
            }
        }
        let Some((i, j, p)) = best else {
            let radical = rest.into_iter().map(|r| r.0).collect();
            return Ok((SymplecticBasis { basis, change }, radical));
        };
        let mut changed = false;
        for k in 0..rest.len() {
            if k == i || k == j {
                continue;
            }
            let t = form(&rest[i].0, &rest[k].0);
            let q1 = t.div_euclid(p);
            if q1 != 0 {
                rest[k] = comb(&rest[k], -q1, &rest[j]);
            }
            if t.rem_euclid(p) != 0 {
                changed = true;
            }
            let t2 = form(&rest[k].0, &rest[j].0);
            let q2 = t2.div_euclid(p);
            if q2 != 0 {
                rest[k] = comb(&rest[k], -q2, &rest[i]);
            }
            if t2.rem_euclid(p) != 0 {
                changed = true;
            }
        }
        if changed {
            continue;
        }
        if p.abs() != 1 {
            return Err(Error::Rank(format!("input lattice is not unimodular (elementary divisor {})", p.abs())));
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let vb = rest.remove(b);
        let va = rest.remove(a);
        let (x, y) = if form(&va.0, &vb.0) == 1 { (va, vb) } else { (vb, va) };
        basis.push(x.0);
        change.push(x.1);
        basis.push(y.0);
        change.push(y.1);
    }
    Ok((SymplecticBasis { basis, change }, Vec::new()))
}

/// Integer solution n of Σ n_j cols[j] = target, if one exists. `cols` must be
/// linearly independent.
pub fn solve_integer(cols: &[HomologyClass], target: &HomologyClass) -> Option<Vec<i64>> {
    let m = target.coords.len();
    let k = cols.len();
    // rows of [A | b] with A m×k
    let mut a: Vec<Vec<i128>> = (0..m)
        .map(|i| {
            let mut row: Vec<i128> = cols.iter().map(|c| c.coords[i] as i128).collect();
            row.push(target.coords[i] as i128);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        // Euclid on column c among rows r..m
        loop {
            let nz: Vec<usize> = (r..m).filter(|&i| a[i][c] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&i) = nz.first() {
                    a.swap(r, i);
                }
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| a[i][c].abs()).expect("nonempty");
            for &i in &nz {
                if i != p {
                    let q = a[i][c] / a[p][c];
                    let pr = a[p].clone();
                    for (x, y) in a[i].iter_mut().zip(&pr) {
                        *x -= q * y;
                    }
                }
            }
        }
        if r < m && a[r][c] != 0 {
            pivots.push((r, c));
            r += 1;
        } else {
            return None;
        }
    }
    if (r..m).any(|i| a[i][k] != 0) {
        return None;
    }
    let mut n = vec![0i128; k];
    for &(row, c) in pivots.iter().rev() {
        let mut rhs = a[row][k];
        for j in c + 1..k {
            rhs -= a[row][j] * n[j];
        }
        if rhs % a[row][c] != 0 {
            return None;
        }
        n[c] = rhs / a[row][c];
    }
    Some(n.into_iter().map(|x| x as i64).collect())
}

/// Coordinates of c in a symplectic basis (x1, y1, ...).
pub fn coords_in_basis(basis: &[HomologyClass], c: &HomologyClass) -> HomologyClass {
    let mut out = Vec::with_capacity(basis.len());
    for p in basis.chunks(2) {
        out.push(pair(c, &p[1]));
        out.push(-pair(c, &p[0]));
    }
    HomologyClass { coords: out }
}
