//! The lattice ∧³H, its quotient by H ∧ ω, the contraction C_s and the
//! symplectic linear algebra used to move bases around under a quadratic form.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::symplectic::{coords_in_basis, ext_gcd, pair, quad_value, reduce_with_radical, HomologyClass, QuadForm2, SymplecticMap};

/// Integer combination of e_i ∧ e_j ∧ e_k, i < j < k, over the 2g basis
/// vectors (x1, y1, ..., xg, yg).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Wedge3 {
    pub g: usize,
    pub terms: BTreeMap<(usize, usize, usize), i64>,
}

fn sort3(mut t: [usize; 3]) -> Option<([usize; 3], i64)> {
    let mut sign = 1;
    for i in 0..3 {
        for j in 0..2 - i {
            if t[j] > t[j + 1] {
                t.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if t[0] == t[1] || t[1] == t[2] {
        None
    } else {
        Some((t, sign))
    }
}

impl Wedge3 {
    pub fn zero(g: usize) -> Self {
        Wedge3 { g, terms: BTreeMap::new() }
    }

    pub fn dim(g: usize) -> usize {
        let n = 2 * g;
        n * n.saturating_sub(1) * n.saturating_sub(2) / 6
    }

    /// c · e_a ∧ e_b ∧ e_c in any index order.
    pub fn basis(g: usize, a: usize, b: usize, c: usize, coeff: i64) -> Self {
        let mut w = Wedge3::zero(g);
        w.add_term([a, b, c], coeff);
        w
    }

    fn add_term(&mut self, t: [usize; 3], coeff: i64) {
        if coeff == 0 {
            return;
        }
        let Some((t, sign)) = sort3(t) else { return };
        let key = (t[0], t[1], t[2]);
        let v = self.terms.entry(key).or_insert(0);
        *v += sign * coeff;
        if *v == 0 {
            self.terms.remove(&key);
        }
    }

    /// u ∧ v ∧ w expanded trilinearly.
    pub fn wedge(u: &HomologyClass, v: &HomologyClass, w: &HomologyClass) -> Self {
        let g = u.genus();
        let mut out = Wedge3::zero(g);
        for (a, &ca) in u.coords.iter().enumerate().filter(|p| *p.1 != 0) {
            for (b, &cb) in v.coords.iter().enumerate().filter(|p| *p.1 != 0) {
                for (c, &cc) in w.coords.iter().enumerate().filter(|p| *p.1 != 0) {
                    out.add_term([a, b, c], ca * cb * cc);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Wedge3) -> Wedge3 {
        let mut out = self.clone();
        for (&(a, b, c), &k) in &o.terms {
            out.add_term([a, b, c], k);
        }
        out
    }

    pub fn scale(&self, k: i64) -> Wedge3 {
        let mut out = Wedge3::zero(self.g);
        for (&(a, b, c), &v) in &self.terms {
            out.add_term([a, b, c], v * k);
        }
        out
    }

    pub fn sub(&self, o: &Wedge3) -> Wedge3 {
        self.add(&o.scale(-1))
    }

    /// Action of a linear map on each factor.
    pub fn apply(&self, m: &SymplecticMap) -> Wedge3 {
        let mut out = Wedge3::zero(self.g);
        for (&(a, b, c), &k) in &self.terms {
            out = out.add(&Wedge3::wedge(&m.column(a), &m.column(b), &m.column(c)).scale(k));
        }
        out
    }

    /// Dense coordinates in lexicographic triple order.
    pub fn to_dense(&self) -> Vec<i64> {
        let idx = triple_index(self.g);
        let mut v = vec![0; idx.len()];
        for (t, &k) in &self.terms {
            v[idx[t]] = k;
        }
        v
    }
}

impl fmt::Display for Wedge3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let name = |k: usize| format!("{}{}", if k % 2 == 0 { 'x' } else { 'y' }, k / 2 + 1);
        for (n, (&(a, b, c), &k)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " {} ", if k < 0 { '-' } else { '+' })?;
            } else if k < 0 {
                write!(f, "-")?;
            }
            if k.abs() != 1 {
                write!(f, "{}", k.abs())?;
            }
            write!(f, "{}^{}^{}", name(a), name(b), name(c))?;
        }
        Ok(())
    }
}

fn triple_index(g: usize) -> BTreeMap<(usize, usize, usize), usize> {
    let n = 2 * g;
    let mut out = BTreeMap::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let k = out.len();
                out.insert((a, b, c), k);
            }
        }
    }
    out
}

/// x ↦ x ∧ ω with ω = Σ x_i ∧ y_i.
pub fn wedge_embed(h: &HomologyClass) -> Wedge3 {
    let g = h.genus();
    let mut out = Wedge3::zero(g);
    for (e, &c) in h.coords.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for i in 0..g {
            out.add_term([e, 2 * i, 2 * i + 1], c);
        }
    }
    out
}

/// The triple that only e ∧ ω touches: {e, x_j, y_j} with j the first index
/// other than e's own.
fn signature_triple(g: usize, e: usize) -> [usize; 3] {
    let j = if e / 2 == 0 { 1 } else { 0 };
    debug_assert!(g >= 2);
    [e, 2 * j, 2 * j + 1]
}

/// A class in ∧³H / (H ∧ ω), stored by its reduced representative: the
/// coefficient of every signature triple is cleared.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Wedge3ModH {
    pub rep: Wedge3,
}

impl Wedge3ModH {
    pub fn new(t: &Wedge3) -> Self {
        let g = t.g;
        let mut rep = t.clone();
        if g >= 2 {
            for e in 0..2 * g {
                let sig = signature_triple(g, e);
                let (st, sign) = sort3(sig).expect("distinct indices");
                let c = rep.terms.get(&(st[0], st[1], st[2])).copied().unwrap_or(0);
                if c != 0 {
                    // e ∧ ω has coefficient `sign` on the sorted signature triple
                    rep = rep.sub(&wedge_embed(&HomologyClass::basis(g, e)).scale(c * sign));
                }
            }
        }
        Wedge3ModH { rep }
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

fn check_s(g: usize, s: i64) -> Result<()> {
    if s < 1 {
        return Err(Error::Modulus(format!("modulus {s} must be positive")));
    }
    if g < 1 || (g as i64 - 1) % s != 0 {
        return Err(Error::Modulus(format!("{s} does not divide g-1 = {}", g as i64 - 1)));
    }
    Ok(())
}

/// C(x∧y∧z) = ⟨x,y⟩z + ⟨y,z⟩x + ⟨z,x⟩y, reduced mod s.
pub fn contract(t: &Wedge3, s: i64) -> Result<HomologyClass> {
    check_s(t.g, s)?;
    Ok(contract_integral(t).reduce(s))
}

/// The contraction over Z, before reduction.
pub fn contract_integral(t: &Wedge3) -> HomologyClass {
    let g = t.g;
    let mut out = vec![0i64; 2 * g];
    let form = |a: usize, b: usize| pair(&HomologyClass::basis(g, a), &HomologyClass::basis(g, b));
    for (&(a, b, c), &k) in &t.terms {
        out[c] += k * form(a, b);
        out[a] += k * form(b, c);
        out[b] += k * form(c, a);
    }
    HomologyClass::new(out)
}

/// τ(T_c T_d⁻¹) = (α₁∧β₁ + … + α_h∧β_h) ∧ [c] for a bounding pair cutting off
/// the subsurface with symplectic pairs (α_i, β_i).
pub fn tau_bounding_pair(subsurface_basis: &[(HomologyClass, HomologyClass)], c: &HomologyClass) -> Result<Wedge3ModH> {
    let g = c.genus();
    for (i, (a, b)) in subsurface_basis.iter().enumerate() {
        if pair(a, b) != 1 {
            return Err(Error::Configuration(format!("pair {i} has pairing {} instead of 1", pair(a, b))));
        }
        for (j, (a2, b2)) in subsurface_basis.iter().enumerate().skip(i + 1) {
            if pair(a, a2) != 0 || pair(a, b2) != 0 || pair(b, a2) != 0 || pair(b, b2) != 0 {
                return Err(Error::Configuration(format!("pairs {i} and {j} are not orthogonal")));
            }
        }
        if pair(a, c) != 0 || pair(b, c) != 0 {
            return Err(Error::Configuration(format!("c = {c} is not orthogonal to pair {i}")));
        }
    }
    let mut t = Wedge3::zero(g);
    for (a, b) in subsurface_basis {
        t = t.add(&Wedge3::wedge(a, b, c));
    }
    Ok(Wedge3ModH::new(&t))
}

/// Generators (G1) s(z∧x_i∧y_i), (G2) z∧(x_i∧y_i − x_j∧y_j), (G3) z_i∧z_j∧z_k
/// of ker C_s, z ranging over basis vectors.
pub fn kernel_generators(g: usize, s: i64) -> Result<Vec<Wedge3ModH>> {
    check_s(g, s)?;
    let n = 2 * g;
    let mut out = Vec::new();
    for i in 0..g {
        for z in (0..n).filter(|&z| z / 2 != i) {
            out.push(Wedge3::basis(g, z, 2 * i, 2 * i + 1, s));
        }
    }
    for i in 0..g {
        for j in i + 1..g {
            for z in (0..n).filter(|&z| z / 2 != i && z / 2 != j) {
                out.push(Wedge3::basis(g, z, 2 * i, 2 * i + 1, 1).sub(&Wedge3::basis(g, z, 2 * j, 2 * j + 1, 1)));
            }
        }
    }
    for i in 0..g {
        for j in i + 1..g {
            for k in j + 1..g {
                for bits in 0..8usize {
                    out.push(Wedge3::basis(g, 2 * i + (bits & 1), 2 * j + ((bits >> 1) & 1), 2 * k + ((bits >> 2) & 1), 1));
                }
            }
        }
    }
    Ok(out.iter().map(Wedge3ModH::new).collect())
}

/// Row-style Hermite reduction; returns the pivot entries, or None when the
/// rows do not have full rank. Overflow is reported as a resource error.
pub fn hermite_pivots(rows: &[Vec<i64>], ncols: usize) -> Result<Option<Vec<i128>>> {
    let overflow = || Error::Resource("integer overflow in Hermite reduction".into());
    let mut basis: Vec<Option<Vec<i128>>> = vec![None; ncols];
    for r in rows {
        let mut v: Vec<i128> = r.iter().map(|&x| x as i128).collect();
        let mut col = 0;
        while col < ncols {
            if v[col] == 0 {
                col += 1;
                continue;
            }
            match &basis[col] {
                None => {
                    if v[col] < 0 {
                        v.iter_mut().for_each(|x| *x = -*x);
                    }
                    basis[col] = Some(v);
                    break;
                }
                Some(b) => {
                    let (p, q) = (b[col], v[col]);
                    let (d, x, y) = ext_gcd_i128(p, q);
                    let (pd, qd) = (p / d, q / d);
                    let mut nb = vec![0i128; ncols];
                    let mut nv = vec![0i128; ncols];
                    for k in col..ncols {
                        nb[k] = x.checked_mul(b[k]).and_then(|a| y.checked_mul(v[k]).and_then(|c| a.checked_add(c))).ok_or_else(overflow)?;
                        nv[k] = qd.checked_mul(b[k]).and_then(|a| pd.checked_mul(v[k]).and_then(|c| a.checked_sub(c))).ok_or_else(overflow)?;
                    }
                    basis[col] = Some(nb);
                    v = nv;
                    col += 1;
                }
            }
        }
    }
    Ok(basis.into_iter().map(|b| b.map(|r| r.iter().find(|&&x| x != 0).copied().unwrap_or(0).abs())).collect::<Option<Vec<_>>>())
}

fn ext_gcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    if let (Ok(a64), Ok(b64)) = (i64::try_from(a), i64::try_from(b)) {
        let (d, x, y) = ext_gcd(a64, b64);
        return (d as i128, x as i128, y as i128);
    }
    let (mut r0, mut r1, mut s0, mut s1, mut t0, mut t1) = (a, b, 1i128, 0i128, 0i128, 1i128);
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

/// Index in ∧³H of the lattice spanned by the generators and H ∧ ω, or None
/// if it has lower rank.
pub fn generator_index(g: usize, s: i64) -> Result<Option<i128>> {
    let gens = kernel_generators(g, s)?;
    let mut rows: Vec<Vec<i64>> = (0..2 * g).map(|e| wedge_embed(&HomologyClass::basis(g, e)).to_dense()).collect();
    rows.extend(gens.iter().map(|t| t.rep.to_dense()));
    let pivots = hermite_pivots(&rows, Wedge3::dim(g))?;
    Ok(pivots.map(|p| p.iter().product()))
}

/// ker C_s is the preimage of 0 under a surjection ∧³H → (Z/s)^{2g}, so it
/// has index s^{2g}; the generators (all of which contract to zero) span it
/// exactly when their lattice together with H ∧ ω has the same index.
pub fn span_equals_kernel(g: usize, s: i64) -> Result<bool> {
    check_s(g, s)?;
    if g > 6 {
        return Err(Error::Resource(format!("genus {g} is above the supported bound 6")));
    }
    if g < 2 {
        return Err(Error::Dimension(format!("genus {g} has no contraction to test")));
    }
    for t in kernel_generators(g, s)? {
        if !contract(&t.rep, s)?.is_zero() {
            return Ok(false);
        }
    }
    let expected = (s as i128).pow(2 * g as u32);
    Ok(generator_index(g, s)? == Some(expected))
}

/// q-values of a list of vectors.
pub fn q_vector(q: &QuadForm2, basis: &[HomologyClass]) -> Vec<u8> {
    basis.iter().map(|v| quad_value(q, v)).collect()
}

fn arf_of_values(values: &[u8]) -> u8 {
    values.chunks(2).fold(0, |a, p| a ^ (p[0] & p.get(1).copied().unwrap_or(0)))
}

fn check_partial_basis(partial: &[HomologyClass]) -> Result<()> {
    if partial.len() % 2 != 0 {
        return Err(Error::Configuration(format!("partial basis has odd length {}", partial.len())));
    }
    for (i, u) in partial.iter().enumerate() {
        for (j, v) in partial.iter().enumerate().skip(i + 1) {
            let want = if i % 2 == 0 && j == i + 1 { 1 } else { 0 };
            if pair(u, v) != want {
                return Err(Error::Configuration(format!("<v{}, v{}> = {} (expected {want})", i + 1, j + 1, pair(u, v))));
            }
        }
    }
    Ok(())
}

/// Projection onto the orthogonal complement of the symplectic pairs.
fn project_off(partial: &[HomologyClass], e: &HomologyClass) -> HomologyClass {
    let mut v = e.clone();
    for p in partial.chunks(2) {
        let (a, b) = (&p[0], &p[1]);
        v = &(&v - &a.scale(pair(&v, b))) + &b.scale(pair(&v, a));
    }
    v
}

/// Extends a partial symplectic basis (v1, v2, ..., v_2k) to a full one whose
/// q-values are `target`.
pub fn extend_symplectic_basis(partial: &[HomologyClass], q: &QuadForm2, target: &[u8]) -> Result<Vec<HomologyClass>> {
    let g = q.genus();
    if target.len() != 2 * g || partial.len() > 2 * g || partial.iter().any(|v| v.genus() != g) {
        return Err(Error::Dimension(format!("genus {g}: target of length {}, partial of length {}", target.len(), partial.len())));
    }
    check_partial_basis(partial)?;
    let have = q_vector(q, partial);
    if have[..] != target[..partial.len()] {
        return Err(Error::Configuration(format!("partial q-values {have:?} differ from target prefix")));
    }
    if arf_of_values(target) != crate::symplectic::arf(q) {
        return Err(Error::Obstruction(format!(
            "target q-vector has Arf {} but the form has Arf {}",
            arf_of_values(target),
            crate::symplectic::arf(q)
        )));
    }
    let k = partial.len() / 2;
    if k == g {
        return Ok(partial.to_vec());
    }
    let projected: Vec<HomologyClass> = (0..2 * g).map(|e| project_off(partial, &HomologyClass::basis(g, e))).collect();
    let (sb, radical) = reduce_with_radical(&projected, pair)?;
    if radical.iter().any(|v| !v.is_zero()) || sb.basis.len() != 2 * (g - k) {
        return Err(Error::Rank("complement of the partial basis is not unimodular".into()));
    }
    let mut blocks: Vec<(HomologyClass, HomologyClass)> = sb.basis.chunks(2).map(|p| (p[0].clone(), p[1].clone())).collect();
    let want: Vec<(u8, u8)> = target[2 * k..].chunks(2).map(|p| (p[0], p[1])).collect();
    normalize_blocks(q, &mut blocks, &want)?;
    let mut out = partial.to_vec();
    for (a, b) in blocks {
        out.push(a);
        out.push(b);
    }
    Ok(out)
}

/// Moves a list of orthogonal hyperbolic pairs to the requested q-values with
/// transvections inside and across pairs.
fn normalize_blocks(q: &QuadForm2, blocks: &mut [(HomologyClass, HomologyClass)], want: &[(u8, u8)]) -> Result<()> {
    let qv = |v: &HomologyClass| quad_value(q, v);
    let block_arf = |b: &(HomologyClass, HomologyClass)| qv(&b.0) & qv(&b.1);
    // Arf-0 pairs are first brought to (1, 0), which the cross move can use.
    for b in blocks.iter_mut() {
        if block_arf(b) == 0 {
            for m in block_moves((qv(&b.0), qv(&b.1)), (1, 0)).expect("Arf-0 pairs are connected") {
                *b = apply_block_move(b, m);
            }
        }
    }
    let want_ones = want.iter().filter(|w| w.0 & w.1 == 1).count();
    loop {
        let ones: Vec<usize> = (0..blocks.len()).filter(|&i| block_arf(&blocks[i]) == 1).collect();
        if ones.len() == want_ones {
            break;
        }
        let pair_idx: Vec<usize> = if ones.len() > want_ones {
            ones[..2].to_vec()
        } else {
            (0..blocks.len()).filter(|&i| block_arf(&blocks[i]) == 0).take(2).collect()
        };
        if pair_idx.len() < 2 {
            return Err(Error::Obstruction("Arf of the complement cannot match the target".into()));
        }
        let (i, j) = (pair_idx[0], pair_idx[1]);
        let (u1, w1) = blocks[i].clone();
        let (u2, w2) = blocks[j].clone();
        blocks[i] = (u1.clone(), &w1 + &u2);
        blocks[j] = (u2, &w2 + &u1);
    }
    // permute so the Arf-1 pairs sit where the target wants them
    let mut ones: Vec<(HomologyClass, HomologyClass)> = Vec::new();
    let mut zeros: Vec<(HomologyClass, HomologyClass)> = Vec::new();
    for b in blocks.iter() {
        if block_arf(b) == 1 {
            ones.push(b.clone());
        } else {
            zeros.push(b.clone());
        }
    }
    for (b, w) in blocks.iter_mut().zip(want) {
        *b = if w.0 & w.1 == 1 { ones.pop() } else { zeros.pop() }.expect("counts match");
        if let Some(moves) = block_moves((qv(&b.0), qv(&b.1)), *w) {
            for m in moves {
                *b = apply_block_move(b, m);
            }
        }
        if (qv(&b.0), qv(&b.1)) != *w {
            return Err(Error::Obstruction(format!("could not reach q-values {w:?} on a pair")));
        }
    }
    Ok(())
}

/// q-values of a pair after w ← w+u (0), u ← u+w (1) or (u, w) ← (w, −u) (2).
fn block_move_values(v: (u8, u8), m: u8) -> (u8, u8) {
    match m {
        0 => (v.0, v.0 ^ v.1 ^ 1),
        1 => (v.0 ^ v.1 ^ 1, v.1),
        _ => (v.1, v.0),
    }
}

fn apply_block_move(b: &(HomologyClass, HomologyClass), m: u8) -> (HomologyClass, HomologyClass) {
    match m {
        0 => (b.0.clone(), &b.1 + &b.0),
        1 => (&b.0 + &b.1, b.1.clone()),
        _ => (b.1.clone(), -&b.0),
    }
}

/// Shortest move sequence between q-value pairs of the same Arf.
fn block_moves(from: (u8, u8), to: (u8, u8)) -> Option<Vec<u8>> {
    let mut frontier = vec![(from, Vec::new())];
    for _ in 0..4 {
        let mut next = Vec::new();
        for (v, path) in frontier {
            if v == to {
                return Some(path);
            }
            for m in 0..3 {
                let mut p = path.clone();
                p.push(m);
                next.push((block_move_values(v, m), p));
            }
        }
        frontier = next;
    }
    None
}

/// The symplectic map sending basis `b` to basis `b2`, checked to preserve q.
pub fn transporting_map(b: &[HomologyClass], b2: &[HomologyClass], q: &QuadForm2) -> Result<SymplecticMap> {
    let g = q.genus();
    if b.len() != 2 * g || b2.len() != 2 * g {
        return Err(Error::Dimension(format!("bases of length {} and {} in genus {g}", b.len(), b2.len())));
    }
    check_partial_basis(b)?;
    check_partial_basis(b2)?;
    if q_vector(q, b) != q_vector(q, b2) {
        return Err(Error::Obstruction(format!("q-vectors {:?} and {:?} differ", q_vector(q, b), q_vector(q, b2))));
    }
    let cols: Vec<HomologyClass> = (0..2 * g)
        .map(|e| {
            let c = coords_in_basis(b, &HomologyClass::basis(g, e));
            let mut v = HomologyClass::zero(g);
            for (k, &ck) in c.coords.iter().enumerate() {
                v = &v + &b2[k].scale(ck);
            }
            v
        })
        .collect();
    let m = SymplecticMap::from_columns(&cols);
    for e in 0..2 * g {
        let v = HomologyClass::basis(g, e);
        if quad_value(q, &m.apply(&v)) != quad_value(q, &v) {
            return Err(Error::Obstruction("transporting map does not preserve q".into()));
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::transvection;

    fn x(g: usize, i: usize) -> HomologyClass {
        HomologyClass::x(g, i)
    }
    fn y(g: usize, i: usize) -> HomologyClass {
        HomologyClass::y(g, i)
    }

    #[test]
    fn alternating_signs() {
        let base = Wedge3::basis(3, 0, 2, 4, 1);
        let perms = [[0, 2, 4], [2, 4, 0], [4, 0, 2], [2, 0, 4], [0, 4, 2], [4, 2, 0]];
        let signs = [1, 1, 1, -1, -1, -1];
        for (p, s) in perms.iter().zip(signs) {
            assert_eq!(Wedge3::basis(3, p[0], p[1], p[2], 1), base.scale(s));
        }
        assert!(Wedge3::basis(3, 0, 0, 4, 1).is_zero());
    }

    #[test]
    fn embed_examples() {
        assert!(wedge_embed(&HomologyClass::zero(3)).is_zero());
        assert_eq!(wedge_embed(&x(2, 0)), Wedge3::wedge(&x(2, 0), &x(2, 1), &y(2, 1)));
        let a = &x(3, 0) + &y(3, 2);
        let b = &y(3, 1).scale(2) - &x(3, 2);
        assert_eq!(wedge_embed(&(&a + &b)), wedge_embed(&a).add(&wedge_embed(&b)));
    }

    #[test]
    fn contract_examples() {
        let g = 3;
        assert_eq!(contract(&Wedge3::wedge(&x(g, 0), &y(g, 0), &x(g, 1)), 2).unwrap(), x(g, 1));
        assert!(contract(&Wedge3::wedge(&x(g, 0), &x(g, 1), &x(g, 2)), 2).unwrap().is_zero());
        assert!(matches!(contract(&Wedge3::zero(3), 3), Err(Error::Modulus(_))));
    }

    #[test]
    fn contraction_of_embedding_is_g_minus_one_times() {
        for g in 2..=5 {
            for e in 0..2 * g {
                let h = HomologyClass::basis(g, e);
                assert_eq!(contract_integral(&wedge_embed(&h)), h.scale(g as i64 - 1));
            }
        }
    }

    #[test]
    fn quotient_ignores_embedded_classes() {
        let g = 4;
        let t = Wedge3::wedge(&x(g, 0), &y(g, 1), &(&x(g, 2) + &y(g, 3)));
        let h = &x(g, 1).scale(3) - &y(g, 3);
        assert_eq!(Wedge3ModH::new(&t), Wedge3ModH::new(&t.add(&wedge_embed(&h))));
        assert!(Wedge3ModH::new(&wedge_embed(&h)).is_zero());
    }

    #[test]
    fn bounding_pair_values() {
        let g = 3;
        let t = tau_bounding_pair(&[(x(g, 0), y(g, 0))], &x(g, 1)).unwrap();
        assert_eq!(t, Wedge3ModH::new(&Wedge3::wedge(&x(g, 0), &y(g, 0), &x(g, 1))));
        assert!(tau_bounding_pair(&[(x(g, 0), y(g, 0))], &HomologyClass::zero(g)).unwrap().is_zero());
        assert!(matches!(tau_bounding_pair(&[(x(g, 0), y(g, 0))], &x(g, 0)), Err(Error::Configuration(_))));
        let g = 5;
        let pairs = [(x(g, 0), y(g, 0)), (x(g, 1), y(g, 1))];
        let c = &x(g, 3) + &y(g, 4);
        let t = tau_bounding_pair(&pairs, &c).unwrap();
        assert_eq!(contract(&t.rep, 2).unwrap(), c.scale(2).reduce(2));
        assert_eq!(contract(&t.rep, 4).unwrap(), c.scale(2).reduce(4));
    }

    #[test]
    fn generators_lie_in_the_kernel() {
        let gens = kernel_generators(3, 2).unwrap();
        assert!(gens.contains(&Wedge3ModH::new(&Wedge3::wedge(&x(3, 1), &x(3, 0), &y(3, 0)).scale(2))));
        for (g, s) in [(3, 1), (3, 2), (4, 3), (5, 2), (5, 4)] {
            for t in kernel_generators(g, s).unwrap() {
                assert!(contract(&t.rep, s).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn span_small_cases() {
        assert!(span_equals_kernel(3, 1).unwrap());
        assert_eq!(generator_index(3, 1).unwrap(), Some(1));
        assert!(span_equals_kernel(3, 2).unwrap());
        assert!(span_equals_kernel(4, 3).unwrap());
        assert!(matches!(span_equals_kernel(4, 2), Err(Error::Modulus(_))));
    }

    #[test]
    fn dropping_g3_generators_shrinks_the_span() {
        // without (G3) the lattice misses x1^x2^x3
        let g = 3;
        let mut rows: Vec<Vec<i64>> = (0..2 * g).map(|e| wedge_embed(&HomologyClass::basis(g, e)).to_dense()).collect();
        let gens = kernel_generators(g, 2).unwrap();
        rows.extend(gens.iter().filter(|t| t.rep.terms.len() > 1 || t.rep.terms.values().any(|&c| c != 1)).map(|t| t.rep.to_dense()));
        let idx = hermite_pivots(&rows, Wedge3::dim(g)).unwrap().map(|p| p.iter().product::<i128>());
        assert_ne!(idx, Some(2i128.pow(6)));
    }

    #[test]
    fn equivariance_under_transvections() {
        let g = 4;
        let s = 3;
        let t = Wedge3::wedge(&x(g, 0), &(&y(g, 0) + &x(g, 2)), &(&x(g, 1) - &y(g, 3)));
        let c = &x(g, 1) + &y(g, 2).scale(2);
        let m = transvection(&c, 1);
        assert_eq!(contract(&t.apply(&m), s).unwrap(), m.apply(&contract(&t, s).unwrap()).reduce(s));
    }

    fn gram_ok(b: &[HomologyClass]) -> bool {
        check_partial_basis(b).is_ok()
    }

    #[test]
    fn extension_reaches_every_target() {
        for g in 1..=3 {
            for qb in 0..(1u64 << (2 * g)) {
                let q = QuadForm2::from_bits(g, qb);
                for tb in 0..(1u64 << (2 * g)) {
                    let target: Vec<u8> = (0..2 * g).map(|k| ((tb >> k) & 1) as u8).collect();
                    let res = extend_symplectic_basis(&[], &q, &target);
                    if arf_of_values(&target) != crate::symplectic::arf(&q) {
                        assert!(matches!(res, Err(Error::Obstruction(_))));
                        continue;
                    }
                    let b = res.unwrap();
                    assert!(gram_ok(&b));
                    assert_eq!(q_vector(&q, &b), target);
                }
            }
        }
    }

    #[test]
    fn extension_of_a_partial_basis() {
        let g = 2;
        let q = QuadForm2::new(vec![1, 1, 0, 0]);
        let v = &x(g, 0) + &y(g, 0);
        let w = y(g, 0);
        let qv = q_vector(&q, &[v.clone(), w.clone()]);
        for rest in [[0u8, 0], [0, 1], [1, 0]] {
            let target = [qv[0], qv[1], rest[0], rest[1]];
            let b = extend_symplectic_basis(&[v.clone(), w.clone()], &q, &target).unwrap();
            assert_eq!(&b[..2], &[v.clone(), w.clone()]);
            assert!(gram_ok(&b));
            assert_eq!(q_vector(&q, &b), target);
        }
        let full = vec![x(g, 0), y(g, 0), x(g, 1), y(g, 1)];
        assert_eq!(extend_symplectic_basis(&full, &q, &q_vector(&q, &full)).unwrap(), full);
        assert!(matches!(extend_symplectic_basis(&[x(g, 0), x(g, 1)], &q, &[1, 0, 0, 0]), Err(Error::Configuration(_))));
    }

    #[test]
    fn transport_between_bases() {
        let g = 2;
        let q = QuadForm2::new(vec![1, 0, 0, 1]);
        let b: Vec<HomologyClass> = (0..4).map(|k| HomologyClass::basis(g, k)).collect();
        assert_eq!(transporting_map(&b, &b, &q).unwrap(), SymplecticMap::identity(g));
        // transvection along an admissible-parity vector (q = 1) preserves q
        let c = &x(g, 0) + &x(g, 1);
        assert_eq!(quad_value(&q, &c), 1);
        let t = transvection(&c, 1);
        let b2: Vec<HomologyClass> = b.iter().map(|v| t.apply(v)).collect();
        assert_eq!(transporting_map(&b, &b2, &q).unwrap(), t);
        let b3 = vec![y(g, 0), -&x(g, 0), x(g, 1), y(g, 1)];
        assert!(matches!(transporting_map(&b, &b3, &q), Err(Error::Obstruction(_))));
    }
}
