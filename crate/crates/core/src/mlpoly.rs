//! Multilinear polynomials over the integers and prime fields.
//!
//! A multilinear polynomial keeps one coefficient per subset of its
//! variables; no exponent ever exceeds one, structurally. Over both
//! supported rings two multilinear polynomials are equal as functions
//! exactly when their coefficient maps are equal, so associativity can be
//! decided symbolically: substitute the polynomial into each of its own
//! argument slots and compare the expanded coefficient maps.
//!
//! Associative multilinear polynomial functions fall into six canonical
//! shapes ([`MarMatForm`]): a constant, the first or last projection, a
//! constant plus the sum of all variables, a weighted sum with a root-of-
//! unity weight, and a shifted product. [`MultilinearPoly::classify_marmat`]
//! extracts the shape and its parameters from the coefficient map alone.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{FractionElem, RingElem, RingSpec};
use crate::error::{Error, Result};
use crate::finops::{decode_index, FiniteOp};
use crate::{checked_pow, GuardRail};

/// Coefficient subsets are bitmasks: bit `i-1` stands for variable `x_i`.
pub type VarSet = u64;

/// Most variables a polynomial may have (masks are 64-bit).
pub const MAX_VARS: usize = 63;

/// A multilinear polynomial: `sum over subsets S of c_S * prod_{i in S} x_i`.
///
/// Stored coefficients are always nonzero; an absent subset means zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPoly", into = "RawPoly")]
pub struct MultilinearPoly {
    ring: RingSpec,
    n: usize,
    coeffs: BTreeMap<VarSet, RingElem>,
}

impl MultilinearPoly {
    /// Builds a polynomial, normalizing on the way in: zero coefficients are
    /// dropped and repeated subsets are summed.
    pub fn new(
        ring: RingSpec,
        n: usize,
        coeffs: impl IntoIterator<Item = (VarSet, RingElem)>,
    ) -> Result<MultilinearPoly> {
        if !(1..=MAX_VARS).contains(&n) {
            return Err(Error::InvalidPoly(format!("variable count {n} out of range 1..={MAX_VARS}")));
        }
        let mut map: BTreeMap<VarSet, RingElem> = BTreeMap::new();
        for (mask, c) in coeffs {
            if mask >> n != 0 {
                return Err(Error::InvalidPoly(format!("subset {mask:#b} mentions variables beyond x{n}")));
            }
            if !ring.contains(&c) {
                return Err(Error::RingMismatch);
            }
            let entry = match map.remove(&mask) {
                Some(prev) => ring.add(&prev, &c)?,
                None => c,
            };
            if !entry.is_zero() {
                map.insert(mask, entry);
            }
        }
        Ok(MultilinearPoly { ring, n, coeffs: map })
    }

    pub fn zero(ring: RingSpec, n: usize) -> Result<MultilinearPoly> {
        MultilinearPoly::new(ring, n, [])
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The nonzero coefficients, keyed by variable subset.
    pub fn coeffs(&self) -> &BTreeMap<VarSet, RingElem> {
        &self.coeffs
    }

    /// The coefficient of a subset, zero when absent.
    pub fn coeff(&self, mask: VarSet) -> RingElem {
        self.coeffs.get(&mask).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Exact evaluation at a point of the coefficient ring.
    pub fn eval(&self, point: &[RingElem]) -> Result<RingElem> {
        if point.len() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, got: point.len() });
        }
        for x in point {
            if !self.ring.contains(x) {
                return Err(Error::RingMismatch);
            }
        }
        let mut acc = self.ring.zero();
        for (&mask, c) in &self.coeffs {
            let mut term = c.clone();
            let mut m = mask;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                term = self.ring.mul(&term, &point[i])?;
                m &= m - 1;
            }
            acc = self.ring.add(&acc, &term)?;
        }
        Ok(acc)
    }

    /// Substitutes the polynomial into its own argument slot `i` (0-based):
    /// the result in `2n-1` variables is
    /// `p(x_1, .., x_i, p(x_{i+1}, .., x_{i+n}), x_{i+n+1}, .., x_{2n-1})`.
    ///
    /// The inner copy's variables are disjoint from the outer copy's
    /// remaining slots, so the expansion stays multilinear.
    pub fn compose_at(&self, i: usize) -> Result<MultilinearPoly> {
        let n = self.n;
        if n < 2 {
            return Err(Error::InvalidPoly("composition needs at least two variables".into()));
        }
        if i >= n {
            return Err(Error::InvalidInput(format!("position {i} out of range 0..{n}")));
        }
        let span = 2 * n - 1;
        if span > MAX_VARS {
            return Err(Error::InvalidPoly(format!("composition in {span} variables exceeds {MAX_VARS}")));
        }
        // outer variable j (1-based, skipping slot i+1) lands on x_j for
        // j <= i and on x_(j+n-1) past the inserted copy
        let remap_outer = |mask: VarSet| -> VarSet {
            let low = mask & ((1u64 << i) - 1);
            let high = (mask >> (i + 1)) << (i + n);
            low | high
        };
        let inner_shift = i; // inner variable t lands on x_(i+t)

        let slot = 1u64 << i; // bit of outer variable i+1
        let mut acc: BTreeMap<VarSet, RingElem> = BTreeMap::new();
        let add = |map: &mut BTreeMap<VarSet, RingElem>, mask: VarSet, c: RingElem| -> Result<()> {
            let entry = match map.remove(&mask) {
                Some(prev) => self.ring.add(&prev, &c)?,
                None => c,
            };
            if !entry.is_zero() {
                map.insert(mask, entry);
            }
            Ok(())
        };
        for (&s_mask, c_s) in &self.coeffs {
            if s_mask & slot == 0 {
                add(&mut acc, remap_outer(s_mask), c_s.clone())?;
            } else {
                let base = remap_outer(s_mask & !slot);
                for (&t_mask, c_t) in &self.coeffs {
                    let inner = t_mask << inner_shift;
                    debug_assert_eq!(base & inner, 0, "outer and inner variables stay disjoint");
                    add(&mut acc, base | inner, self.ring.mul(c_s, c_t)?)?;
                }
            }
        }
        MultilinearPoly::new(self.ring, span, acc)
    }

    /// Decides associativity symbolically: all `n` self-substitutions must
    /// expand to the same coefficient map (adjacent comparisons suffice).
    pub fn is_associative(&self) -> Result<bool> {
        if self.n == 1 {
            return Ok(true);
        }
        let first = self.compose_at(0)?;
        for i in 1..self.n {
            if self.compose_at(i)? != first {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Independent associativity oracle over prime fields: evaluates every
    /// placement on every tuple of the full `(2n-1)`-dimensional space.
    ///
    /// The integers are rejected (their point space is infinite); oversized
    /// tuple spaces hit the guard rail.
    pub fn pointwise_associative(&self, rail: &GuardRail) -> Result<bool> {
        let p = match self.ring {
            RingSpec::PrimeField(p) => p.get(),
            RingSpec::Integers => return Err(Error::RequiresPrimeField),
        };
        if self.n == 1 {
            return Ok(true);
        }
        let n = self.n;
        let span = 2 * n - 1;
        rail.check(checked_pow(p as usize, span).unwrap_or(u128::MAX))?;

        let mut tuple = vec![0u64; span];
        let mut point = vec![self.ring.zero(); span];
        loop {
            for (slot, &digit) in tuple.iter().enumerate() {
                point[slot] = RingElem::Mod { value: digit, modulus: p };
            }
            let mut first: Option<RingElem> = None;
            for i in 0..n {
                let inner = self.eval(&point[i..i + n])?;
                let mut outer: Vec<RingElem> = Vec::with_capacity(n);
                outer.extend_from_slice(&point[..i]);
                outer.push(inner);
                outer.extend_from_slice(&point[i + n..]);
                let v = self.eval(&outer)?;
                match &first {
                    None => first = Some(v),
                    Some(f0) => {
                        if v != *f0 {
                            return Ok(false);
                        }
                    }
                }
            }
            // mixed-radix increment
            let mut slot = span;
            loop {
                if slot == 0 {
                    return Ok(true);
                }
                slot -= 1;
                tuple[slot] += 1;
                if tuple[slot] < p {
                    break;
                }
                tuple[slot] = 0;
            }
        }
    }

    /// Classifies the polynomial into one of the six canonical associative
    /// shapes, or [`MarMatForm::NoForm`].
    ///
    /// Shapes are tried in a fixed order; they are mutually exclusive (see
    /// [`MultilinearPoly::matching_forms`]), so the order only pins down the
    /// output, it never changes it.
    pub fn classify_marmat(&self) -> Result<MarMatForm> {
        if self.n < 2 {
            return Err(Error::InvalidPoly("classification needs at least two variables".into()));
        }
        Ok(self
            .match_constant()
            .or_else(|| self.match_first_proj())
            .or_else(|| self.match_last_proj())
            .or_else(|| self.match_shifted_sum())
            .or_else(|| self.match_omega_sum())
            .or_else(|| self.match_product_form())
            .unwrap_or(MarMatForm::NoForm))
    }

    /// Every canonical shape the polynomial matches; diagnostic companion of
    /// [`MultilinearPoly::classify_marmat`] used to confirm the shapes are
    /// mutually exclusive.
    pub fn matching_forms(&self) -> Vec<MarMatForm> {
        [
            self.match_constant(),
            self.match_first_proj(),
            self.match_last_proj(),
            self.match_shifted_sum(),
            self.match_omega_sum(),
            self.match_product_form(),
        ]
        .into_iter()
        .flatten()
        .collect()
    }

    fn match_constant(&self) -> Option<MarMatForm> {
        if self.coeffs.keys().all(|&m| m == 0) {
            Some(MarMatForm::Constant(self.coeff(0)))
        } else {
            None
        }
    }

    fn match_first_proj(&self) -> Option<MarMatForm> {
        if self.coeffs.len() == 1 && self.coeff(1).is_one() {
            Some(MarMatForm::FirstProj)
        } else {
            None
        }
    }

    fn match_last_proj(&self) -> Option<MarMatForm> {
        // for n = 1 the first and last projection coincide; n >= 2 here
        let want = 1u64 << (self.n - 1);
        if self.n >= 2 && self.coeffs.len() == 1 && self.coeff(want).is_one() {
            Some(MarMatForm::LastProj)
        } else {
            None
        }
    }

    fn match_shifted_sum(&self) -> Option<MarMatForm> {
        for i in 0..self.n {
            if !self.coeff(1u64 << i).is_one() {
                return None;
            }
        }
        let c = self.coeff(0);
        let expected = self.n + usize::from(!c.is_zero());
        if self.coeffs.len() == expected {
            Some(MarMatForm::ShiftedSum(c))
        } else {
            None
        }
    }

    fn match_omega_sum(&self) -> Option<MarMatForm> {
        // omega^0 x_1 + omega^1 x_2 + ... with omega != 1, omega^(n-1) = 1;
        // only defined for n >= 3
        if self.n < 3 {
            return None;
        }
        let omega = self.coeff(1 << 1);
        if omega.is_one() || omega.is_zero() {
            return None;
        }
        if !self.ring.pow(&omega, (self.n - 1) as u64).ok()?.is_one() {
            return None;
        }
        // omega is a unit, so all n singleton coefficients omega^(i-1) are
        // nonzero and the length check pins the map to exactly those keys
        let mut power = self.ring.one();
        for i in 0..self.n {
            if self.coeff(1u64 << i) != power {
                return None;
            }
            power = self.ring.mul(&power, &omega).ok()?;
        }
        if self.coeffs.len() == self.n {
            Some(MarMatForm::OmegaSum(omega))
        } else {
            None
        }
    }

    fn match_product_form(&self) -> Option<MarMatForm> {
        // -b + a * prod (x_i + b): the coefficient of a subset S != {} is
        // a * b^(n-|S|), and the constant term is a*b^n - b
        let n = self.n;
        let full = ones(n);
        let a = self.coeff(full);
        if a.is_zero() {
            return None;
        }
        let b = self.ring.fraction_div(&self.coeff(full & !(1 << (n - 1))), &a).ok()?;
        let a_frac = self.ring.fraction_elem(&a).ok()?;

        // expected coefficients a * b^j, indexed by j = n - |S|
        let mut by_gap = vec![a_frac];
        for _ in 1..n {
            let next = by_gap.last()?.mul(&b).ok()?;
            by_gap.push(next);
        }
        let constant = by_gap.last()?.mul(&b).ok()?.sub(&b).ok()?; // a*b^n - b

        for (&mask, c) in &self.coeffs {
            let expected = if mask == 0 { &constant } else { &by_gap[n - mask.count_ones() as usize] };
            if !expected.equals_ring(c) {
                return None;
            }
        }
        // completeness: when b != 0 every nonempty subset carries a nonzero
        // coefficient (an integral domain has no zero divisors); when b = 0
        // only the full product survives
        let nonempty_stored = self.coeffs.len() - usize::from(self.coeffs.contains_key(&0));
        let nonempty_expected: u128 = if b.is_zero() { 1 } else { (1u128 << n) - 1 };
        if nonempty_stored as u128 != nonempty_expected {
            return None;
        }
        if !self.coeffs.contains_key(&0) && !constant.is_zero() {
            return None;
        }
        // ring-membership conditions of the shape; implied by the matched
        // coefficients but re-checked
        if by_gap.iter().skip(1).any(|item| !item.in_base_ring()) || !constant.in_base_ring() {
            return None;
        }
        Some(MarMatForm::ProductForm { a, b })
    }

    /// Evaluates the polynomial on every point of its prime field, producing
    /// the finite operation table it computes.
    pub fn value_table(&self, rail: &GuardRail) -> Result<FiniteOp> {
        let p = match self.ring {
            RingSpec::PrimeField(p) => p.get(),
            RingSpec::Integers => return Err(Error::RequiresPrimeField),
        };
        let k = usize::try_from(p).map_err(|_| Error::InvalidInput("field too large to tabulate".into()))?;
        rail.check(checked_pow(k, self.n).unwrap_or(u128::MAX))?;
        let mut point = vec![self.ring.zero(); self.n];
        FiniteOp::from_fn(k, self.n, |args| {
            for (slot, &a) in args.iter().enumerate() {
                point[slot] = RingElem::Mod { value: a as u64, modulus: p };
            }
            match self.eval(&point).expect("points lie in the ring") {
                RingElem::Mod { value, .. } => value as u16,
                RingElem::Int(_) => unreachable!("prime-field evaluation yields residues"),
            }
        })
    }
}

fn ones(n: usize) -> VarSet {
    (1u64 << n) - 1
}

/// The algebraic normal form of a Boolean operation: the unique multilinear
/// polynomial over GF(2) computing the same table.
///
/// Computed by the in-place xor (Moebius) transform; the inverse direction is
/// [`MultilinearPoly::value_table`], which re-evaluates the polynomial, so a
/// round trip crosses two independent algorithms.
pub fn boolean_anf(f: &FiniteOp) -> Result<MultilinearPoly> {
    if f.k() != 2 {
        return Err(Error::WrongCarrier { expected: 2, got: f.k() });
    }
    let n = f.n();
    // reindex so bit i-1 of the position is the value of x_i
    let mut values = vec![0u8; f.table().len()];
    let mut args = vec![0u16; n];
    for (idx, v) in f.table().iter().enumerate() {
        decode_index(2, idx, &mut args);
        let mut mask = 0usize;
        for (i, &a) in args.iter().enumerate() {
            mask |= (a as usize) << i;
        }
        values[mask] = *v as u8;
    }
    for bit in 0..n {
        let step = 1usize << bit;
        for m in 0..values.len() {
            if m & step != 0 {
                values[m] ^= values[m ^ step];
            }
        }
    }
    let gf2 = RingSpec::gf2();
    MultilinearPoly::new(
        gf2,
        n,
        values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(mask, _)| (mask as u64, gf2.one())),
    )
}

/// One of the six canonical shapes of an associative multilinear polynomial
/// function, or the rejection marker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MarMatForm {
    /// `p(x) = c`.
    Constant(RingElem),
    /// `p(x) = x_1`.
    FirstProj,
    /// `p(x) = x_n`.
    LastProj,
    /// `p(x) = c + x_1 + ... + x_n`.
    ShiftedSum(RingElem),
    /// `p(x) = sum omega^(i-1) x_i` with `omega != 1`, `omega^(n-1) = 1`;
    /// needs n >= 3.
    OmegaSum(RingElem),
    /// `p(x) = -b + a * prod (x_i + b)` with `a != 0`; `b` lives in the
    /// fraction field, subject to `a*b^k` in the ring for `k < n` and
    /// `a*b^n - b` in the ring.
    ProductForm { a: RingElem, b: FractionElem },
    NoForm,
}

impl MarMatForm {
    pub fn name(&self) -> &'static str {
        match self {
            MarMatForm::Constant(_) => "constant",
            MarMatForm::FirstProj => "first_proj",
            MarMatForm::LastProj => "last_proj",
            MarMatForm::ShiftedSum(_) => "shifted_sum",
            MarMatForm::OmegaSum(_) => "omega_sum",
            MarMatForm::ProductForm { .. } => "product_form",
            MarMatForm::NoForm => "no_form",
        }
    }
}

impl fmt::Display for MarMatForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MarMatForm::Constant(c) => write!(f, "constant c={c}"),
            MarMatForm::FirstProj => write!(f, "first_proj"),
            MarMatForm::LastProj => write!(f, "last_proj"),
            MarMatForm::ShiftedSum(c) => write!(f, "shifted_sum c={c}"),
            MarMatForm::OmegaSum(w) => write!(f, "omega_sum omega={w}"),
            MarMatForm::ProductForm { a, b } => write!(f, "product_form a={a} b={b}"),
            MarMatForm::NoForm => write!(f, "no_form"),
        }
    }
}

/// Expands a canonical shape back into its coefficient map, validating the
/// shape's invariants first. Inverse of [`MultilinearPoly::classify_marmat`]
/// on valid parameters.
pub fn from_form(form: &MarMatForm, ring: RingSpec, n: usize) -> Result<MultilinearPoly> {
    if n < 2 {
        return Err(Error::InvalidForm("canonical shapes need at least two variables".into()));
    }
    let check_elem = |c: &RingElem| -> Result<()> {
        if ring.contains(c) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    };
    match form {
        MarMatForm::Constant(c) => {
            check_elem(c)?;
            MultilinearPoly::new(ring, n, [(0u64, c.clone())])
        }
        MarMatForm::FirstProj => MultilinearPoly::new(ring, n, [(1u64, ring.one())]),
        MarMatForm::LastProj => MultilinearPoly::new(ring, n, [(1u64 << (n - 1), ring.one())]),
        MarMatForm::ShiftedSum(c) => {
            check_elem(c)?;
            let mut coeffs = vec![(0u64, c.clone())];
            coeffs.extend((0..n).map(|i| (1u64 << i, ring.one())));
            MultilinearPoly::new(ring, n, coeffs)
        }
        MarMatForm::OmegaSum(omega) => {
            check_elem(omega)?;
            if n < 3 {
                return Err(Error::InvalidForm("the weighted sum needs at least three variables".into()));
            }
            if omega.is_one() {
                return Err(Error::InvalidForm("weight 1 is excluded".into()));
            }
            if !ring.pow(omega, (n - 1) as u64)?.is_one() {
                return Err(Error::InvalidForm(format!(
                    "weight {omega} does not satisfy omega^{} = 1",
                    n - 1
                )));
            }
            let mut coeffs = Vec::with_capacity(n);
            let mut power = ring.one();
            for i in 0..n {
                coeffs.push((1u64 << i, power.clone()));
                power = ring.mul(&power, omega)?;
            }
            MultilinearPoly::new(ring, n, coeffs)
        }
        MarMatForm::ProductForm { a, b } => {
            check_elem(a)?;
            if a.is_zero() {
                return Err(Error::InvalidForm("the product shape needs a != 0".into()));
            }
            let b_in_ring = match (ring, b) {
                (RingSpec::Integers, FractionElem::Rational(_)) => true,
                (RingSpec::PrimeField(p), FractionElem::Mod { modulus, value }) => {
                    *modulus == p.get() && *value < p.get()
                }
                _ => false,
            };
            if !b_in_ring {
                return Err(Error::RingMismatch);
            }
            // a * b^j for j = 0..n, then the constant a*b^n - b
            let mut powers = vec![ring.fraction_elem(a)?];
            for j in 1..=n {
                let next = powers.last().expect("nonempty").mul(b)?;
                if j < n && !next.in_base_ring() {
                    return Err(Error::InvalidForm(format!("a*b^{j} lies outside the ring")));
                }
                powers.push(next);
            }
            let constant = powers[n].sub(b)?;
            if !constant.in_base_ring() {
                return Err(Error::InvalidForm("a*b^n - b lies outside the ring".into()));
            }
            let mut coeffs = Vec::new();
            for mask in 1..=ones(n) {
                let size = mask.count_ones() as usize;
                let c = powers[n - size].to_ring_elem().expect("membership checked above");
                coeffs.push((mask, c));
            }
            coeffs.push((0, constant.to_ring_elem().expect("membership checked above")));
            MultilinearPoly::new(ring, n, coeffs)
        }
        MarMatForm::NoForm => Err(Error::InvalidForm("no polynomial to build from a rejection".into())),
    }
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    vars: Vec<u32>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct RawPoly {
    ring: RingSpec,
    n: usize,
    coeffs: Vec<RawTerm>,
}

impl TryFrom<RawPoly> for MultilinearPoly {
    type Error = Error;

    fn try_from(raw: RawPoly) -> Result<MultilinearPoly> {
        let mut coeffs = Vec::with_capacity(raw.coeffs.len());
        for term in &raw.coeffs {
            let mut mask: VarSet = 0;
            for &v in &term.vars {
                if v < 1 || v as usize > raw.n {
                    return Err(Error::InvalidPoly(format!("variable x{v} out of range 1..={}", raw.n)));
                }
                let bit = 1u64 << (v - 1);
                if mask & bit != 0 {
                    return Err(Error::InvalidPoly(format!("variable x{v} repeated within one term")));
                }
                mask |= bit;
            }
            coeffs.push((mask, raw.ring.parse_elem(&term.coef)?));
        }
        MultilinearPoly::new(raw.ring, raw.n, coeffs)
    }
}

impl From<MultilinearPoly> for RawPoly {
    fn from(p: MultilinearPoly) -> RawPoly {
        let coeffs = p
            .coeffs
            .iter()
            .map(|(&mask, c)| {
                let vars =
                    (0..p.n as u32).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
                RawTerm { vars, coef: c.to_string() }
            })
            .collect();
        RawPoly { ring: p.ring, n: p.n, coeffs }
    }
}
