//! r-spin structures: values on a symplectic basis, values on the Humphries
//! curves, twist action, Arf invariants, counts and orbits.

use std::sync::{Arc, Mutex, OnceLock};
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::origami::{CombCurve, Direction, Origami};
use crate::symplectic::{arf, pair, quad_form_from_values, solve_integer, HomologyClass, QuadForm2};

/// Largest state space the exhaustive enumerations will walk.
pub const STATE_BOUND: u64 = 10_000_000;

pub fn check_modulus(r: i64, g: usize) -> Result<()> {
    if g < 2 {
        return Err(Error::Parameter(format!("genus {g} < 2")));
    }
    if r < 1 {
        return Err(Error::Modulus(format!("r = {r} must be at least 1")));
    }
    if (2 * g as i64 - 2) % r != 0 {
        return Err(Error::Modulus(format!("r = {r} does not divide 2g-2 = {}", 2 * g - 2)));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpinStructure {
    pub r: i64,
    pub g: usize,
    /// φ(x1), φ(y1), ..., φ(yg) in [0, r)
    pub values: Vec<i64>,
}

pub fn make_spin(r: i64, g: usize, values: &[i64]) -> Result<SpinStructure> {
    check_modulus(r, g)?;
    if values.len() != 2 * g {
        return Err(Error::Dimension(format!("expected {} values, got {}", 2 * g, values.len())));
    }
    Ok(SpinStructure { r, g, values: values.iter().map(|v| v.rem_euclid(r)).collect() })
}

impl SpinStructure {
    /// q = φ + 1 mod 2 on the basis.
    pub fn quad_form(&self) -> Result<QuadForm2> {
        if self.r % 2 != 0 {
            return Err(Error::Parity(format!("r = {} is odd", self.r)));
        }
        Ok(QuadForm2::new(self.values.iter().map(|v| ((v + 1) & 1) as u8).collect()))
    }

    pub fn arf(&self) -> Result<u8> {
        arf_spin(self)
    }
}

pub fn arf_spin(phi: &SpinStructure) -> Result<u8> {
    if phi.r % 2 != 0 {
        return Err(Error::Parity(format!("Arf needs even r, got {}", phi.r)));
    }
    let s: i64 = phi.values.chunks(2).map(|p| (p[0] + 1) * (p[1] + 1)).sum();
    Ok((s & 1) as u8)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArfCount {
    pub total: u128,
    pub even: Option<u128>,
    pub odd: Option<u128>,
    /// whether the counts were also checked by enumerating every structure
    pub enumerated: bool,
}

pub fn count_by_arf(g: usize, r: i64) -> Result<ArfCount> {
    check_modulus(r, g)?;
    let total = (r as u128).pow(2 * g as u32);
    if r % 2 != 0 {
        return Ok(ArfCount { total, even: None, odd: None, enumerated: false });
    }
    let half = ((r / 2) as u128).pow(2 * g as u32);
    let p = 1u128 << (g - 1);
    let even = half * p * ((1u128 << g) + 1);
    let odd = half * p * ((1u128 << g) - 1);
    let mut enumerated = false;
    if total <= STATE_BOUND as u128 {
        let (e, o) = enumerate_arf(g, r);
        if (e, o) != (even, odd) {
            return Err(Error::Obstruction(format!("enumeration gave {e}/{o}, formula {even}/{odd}")));
        }
        enumerated = true;
    }
    Ok(ArfCount { total, even: Some(even), odd: Some(odd), enumerated })
}

fn enumerate_arf(g: usize, r: i64) -> (u128, u128) {
    let mut vals = vec![0i64; 2 * g];
    let (mut even, mut odd) = (0u128, 0u128);
    loop {
        let phi = SpinStructure { r, g, values: vals.clone() };
        if arf_spin(&phi).expect("even r") == 0 {
            even += 1;
        } else {
            odd += 1;
        }
        if !odometer(&mut vals, r) {
            return (even, odd);
        }
    }
}

fn odometer(vals: &mut [i64], r: i64) -> bool {
    for v in vals.iter_mut() {
        *v += 1;
        if *v < r {
            return true;
        }
        *v = 0;
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FramedCurve {
    pub name: String,
    pub h: HomologyClass,
    pub w: i64,
    pub r: i64,
}

impl FramedCurve {
    pub fn new(name: impl Into<String>, h: HomologyClass, w: i64, r: i64) -> Self {
        FramedCurve { name: name.into(), h, w: if r == 0 { w } else { w.rem_euclid(r) }, r }
    }

    pub fn reversed(&self) -> FramedCurve {
        FramedCurve::new(format!("-{}", self.name), -&self.h, -self.w, self.r)
    }

    pub fn is_admissible(&self) -> bool {
        is_admissible(self)
    }

    /// w ≡ q(h) + 1 mod 2, for even r.
    pub fn parity_consistent(&self, q: &QuadForm2) -> bool {
        self.r % 2 != 0 || (self.w - crate::symplectic::quad_value(q, &self.h) as i64 - 1).rem_euclid(2) == 0
    }
}

pub fn is_admissible(c: &FramedCurve) -> bool {
    let w0 = if c.r == 0 { c.w == 0 } else { c.w.rem_euclid(c.r) == 0 };
    w0 && c.h.content() == 1
}

/// Curves c_0..c_{2g} of the Humphries generating set realized on the staircase
/// origami of a 2g-chain, with c_0 a chord across c_4, plus a geometric
/// symplectic basis on the same surface.
#[derive(Debug)]
pub struct HumphriesReference {
    pub g: usize,
    pub origami: Origami,
    pub curves: Vec<CombCurve>,
    pub classes: Vec<HomologyClass>,
    /// ⟨c_i, c_j⟩
    pub pairing: Vec<Vec<i64>>,
    /// [c_0] = Σ_{i≥1} n_i [c_i]; n[0] unused
    pub c0_coeffs: Vec<i64>,
    pub turning: Vec<i64>,
    pub basis_curves: Vec<CombCurve>,
    /// basis classes written in the chain classes c_1..c_{2g}
    pub basis_coeffs: Vec<Vec<i64>>,
    pub basis_turning: Vec<i64>,
}

impl HumphriesReference {
    pub fn new(g: usize) -> Result<HumphriesReference> {
        if g < 2 {
            return Err(Error::Parameter(format!("genus {g} < 2")));
        }
        let o = Origami::staircase(2 * g)?;
        let n = o.n();
        let mut curves = Vec::with_capacity(2 * g + 1);
        // c_4 is the vertical core through squares 2 (and 3 when present)
        curves.push(o.chord(Direction::Vertical, 2)?);
        for i in 1..=2 * g {
            let (dir, q) = if i % 2 == 1 { (Direction::Horizontal, i.saturating_sub(2)) } else { (Direction::Vertical, (i - 2).min(n - 1)) };
            curves.push(o.cylinder_through(dir, q).core);
        }
        let classes: Vec<HomologyClass> = curves.iter().map(|c| o.homology_class(c)).collect();
        let pairing: Vec<Vec<i64>> = classes.iter().map(|a| classes.iter().map(|b| pair(a, b)).collect()).collect();
        let chain = &classes[1..];
        let mut c0_coeffs = vec![0];
        c0_coeffs.extend(solve_integer(chain, &classes[0]).ok_or_else(|| Error::Rank("chain classes do not span".into()))?);
        let turning = curves.iter().map(|c| o.turning_number(c)).collect::<Result<Vec<_>>>()?;
        let xs: Vec<_> = (0..g).map(|i| o.cylinder_through(Direction::Horizontal, (2 * i).saturating_sub(1))).collect();
        let basis_curves = o.geometric_symplectic_basis(&xs)?;
        let basis_coeffs = basis_curves
            .iter()
            .map(|c| solve_integer(chain, &o.homology_class(c)).ok_or_else(|| Error::Rank("chain classes do not span".into())))
            .collect::<Result<Vec<_>>>()?;
        let basis_turning = basis_curves.iter().map(|c| o.turning_number(c)).collect::<Result<Vec<_>>>()?;
        Ok(HumphriesReference { g, origami: o, curves, classes, pairing, c0_coeffs, turning, basis_curves, basis_coeffs, basis_turning })
    }

    /// Shared instance per genus.
    pub fn get(g: usize) -> Result<Arc<HumphriesReference>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<HumphriesReference>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(r) = cache.lock().expect("cache lock").get(&g) {
            return Ok(r.clone());
        }
        let r = Arc::new(HumphriesReference::new(g)?);
        cache.lock().expect("cache lock").insert(g, r.clone());
        Ok(r)
    }

    /// v_0 − Σ n_i v_i, the same for every r-spin structure.
    pub fn c0_offset(&self, r: i64) -> i64 {
        let s: i64 = (1..=2 * self.g).map(|i| self.c0_coeffs[i] * self.turning[i]).sum();
        (self.turning[0] - s).rem_euclid(r)
    }
}

#[derive(Clone, Debug)]
pub struct ChainSpin {
    pub r: i64,
    pub g: usize,
    /// values on c_0, c_1, ..., c_{2g}
    pub values: Vec<i64>,
    reference: Arc<HumphriesReference>,
}

impl PartialEq for ChainSpin {
    fn eq(&self, o: &ChainSpin) -> bool {
        self.r == o.r && self.g == o.g && self.values == o.values
    }
}

impl Eq for ChainSpin {}

impl ChainSpin {
    /// State with the given values on c_1..c_{2g}; the value on c_0 is forced.
    pub fn from_chain_values(r: i64, g: usize, free: &[i64]) -> Result<ChainSpin> {
        check_modulus(r, g)?;
        if free.len() != 2 * g {
            return Err(Error::Dimension(format!("expected {} chain values, got {}", 2 * g, free.len())));
        }
        let reference = HumphriesReference::get(g)?;
        let mut values = vec![0];
        values.extend(free.iter().map(|v| v.rem_euclid(r)));
        values[0] = reference.c0_value(r, &values);
        Ok(ChainSpin { r, g, values, reference })
    }

    pub fn from_index(r: i64, g: usize, mut idx: u64) -> Result<ChainSpin> {
        let mut free = Vec::with_capacity(2 * g);
        for _ in 0..2 * g {
            free.push((idx % r as u64) as i64);
            idx /= r as u64;
        }
        ChainSpin::from_chain_values(r, g, &free)
    }

    pub fn index(&self) -> u64 {
        self.values[1..].iter().rev().fold(0u64, |a, &v| a * self.r as u64 + v as u64)
    }

    pub fn reference(&self) -> &HumphriesReference {
        &self.reference
    }

    pub fn twist(&self, j: usize, e: i64) -> Result<ChainSpin> {
        chain_twist(self, j, e)
    }

    /// Values on the reference geometric symplectic basis, by the torsor
    /// property: φ − φ_ref is a homomorphism H1 → Z/r.
    pub fn to_spin_structure(&self) -> SpinStructure {
        let rf = &self.reference;
        let values = rf
            .basis_coeffs
            .iter()
            .zip(&rf.basis_turning)
            .map(|(n, &t)| {
                let shift: i64 = n.iter().enumerate().map(|(j, &nj)| nj * (self.values[j + 1] - rf.turning[j + 1])).sum();
                (t + shift).rem_euclid(self.r)
            })
            .collect();
        SpinStructure { r: self.r, g: self.g, values }
    }

    /// Arf read directly off the chain values: q(c_i) = φ(c_i) + 1.
    pub fn arf_from_chain(&self) -> Result<u8> {
        if self.r % 2 != 0 {
            return Err(Error::Parity(format!("r = {} is odd", self.r)));
        }
        let vals: Vec<u8> = self.values.iter().map(|v| ((v + 1) & 1) as u8).collect();
        let q = quad_form_from_values(self.g, &self.reference.classes, &vals)?;
        Ok(arf(&q))
    }
}

impl HumphriesReference {
    fn c0_value(&self, r: i64, values: &[i64]) -> i64 {
        let s: i64 = (1..=2 * self.g).map(|i| self.c0_coeffs[i] * values[i]).sum();
        (self.c0_offset(r) + s).rem_euclid(r)
    }
}

/// Pulls φ back along T_{c_j}^{-e}: v_i ← v_i − e⟨c_i, c_j⟩ v_j.
pub fn chain_twist(state: &ChainSpin, j: usize, e: i64) -> Result<ChainSpin> {
    let k = state.values.len();
    if j >= k {
        return Err(Error::Index(format!("curve index {j} outside 0..{}", k - 1)));
    }
    let p = &state.reference.pairing;
    let vj = state.values[j];
    let values = (0..k).map(|i| (state.values[i] - e * p[i][j] * vj).rem_euclid(state.r)).collect();
    Ok(ChainSpin { values, ..state.clone() })
}

/// Orbit of a state under twists about c_0..c_{2g}.
pub fn orbit(state: &ChainSpin) -> Result<Vec<ChainSpin>> {
    let (r, g) = (state.r, state.g);
    let size = (r as u64).checked_pow(2 * g as u32).filter(|&s| s <= STATE_BOUND);
    let size = size.ok_or_else(|| Error::Resource(format!("r^2g exceeds {STATE_BOUND}")))?;
    let mut seen = vec![false; size as usize];
    let ids = orbit_indices(state, &mut seen);
    ids.into_iter().map(|i| ChainSpin::from_index(r, g, i)).collect()
}

fn orbit_indices(state: &ChainSpin, seen: &mut [bool]) -> Vec<u64> {
    let rf = &state.reference;
    let (r, g) = (state.r, state.g);
    let k = 2 * g + 1;
    let mut out = vec![state.index()];
    seen[state.index() as usize] = true;
    let mut head = 0;
    let mut vals = vec![0i64; k];
    while head < out.len() {
        let mut idx = out[head];
        head += 1;
        for v in vals[1..].iter_mut() {
            *v = (idx % r as u64) as i64;
            idx /= r as u64;
        }
        vals[0] = rf.c0_value(r, &vals);
        for j in 0..k {
            if vals[j] == 0 {
                continue;
            }
            for e in [1i64, -1] {
                let mut id = 0u64;
                for i in (1..k).rev() {
                    let v = (vals[i] - e * rf.pairing[i][j] * vals[j]).rem_euclid(r);
                    id = id * r as u64 + v as u64;
                }
                if !seen[id as usize] {
                    seen[id as usize] = true;
                    out.push(id);
                }
            }
        }
    }
    out
}

/// Sizes of all orbits on the r^{2g} states, in order of first state.
pub fn orbit_partition(g: usize, r: i64) -> Result<Vec<usize>> {
    check_modulus(r, g)?;
    let size = (r as u64).checked_pow(2 * g as u32).filter(|&s| s <= STATE_BOUND);
    let size = size.ok_or_else(|| Error::Resource(format!("r^2g exceeds {STATE_BOUND}")))?;
    let mut seen = vec![false; size as usize];
    let mut sizes = Vec::new();
    for start in 0..size {
        if seen[start as usize] {
            continue;
        }
        let s = ChainSpin::from_index(r, g, start)?;
        sizes.push(orbit_indices(&s, &mut seen).len());
    }
    Ok(sizes)
}
