//! Finite n-ary operations stored as flat value tables.
//!
//! The table is indexed with the first argument most significant: the tuple
//! `(a_1, ..., a_n)` on a k-element carrier maps to `sum a_i * k^(n-i)`.
//! On top of the plain lookup this module implements generalized
//! associativity, the derived-operation recursion `f_0 = id`,
//! `f_(l+1)(a_1..) = f_l(f(a_1..a_n), a_(n+1)..)`, and the primitivity
//! search (is an associative operation expressible as `g_l` for an
//! associative `g` of smaller arity?).

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{checked_pow, GuardRail};

/// Largest supported carrier: table entries are stored as `u16`.
pub const MAX_CARRIER: usize = 1 << 16;

/// An n-ary operation on a k-element carrier, as a value table of length
/// `k^n`.
///
/// Tables on the two-element carrier also keep a packed one-bit-per-cell
/// copy; the flat array stays the canonical form and the packed copy only
/// feeds the cell reads of the enumeration scans.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawOp", into = "RawOp")]
pub struct FiniteOp {
    k: usize,
    n: usize,
    table: Vec<u16>,
    bits: Option<Vec<u64>>,
}

impl FiniteOp {
    pub fn new(k: usize, n: usize, table: Vec<u16>) -> Result<FiniteOp> {
        if !(1..=MAX_CARRIER).contains(&k) {
            return Err(Error::InvalidTable(format!("carrier size {k} out of range 1..={MAX_CARRIER}")));
        }
        if n < 1 {
            return Err(Error::InvalidTable("arity must be at least 1".into()));
        }
        let len = checked_pow(k, n)
            .ok_or_else(|| Error::InvalidTable(format!("table size {k}^{n} overflows")))?;
        if len != table.len() as u128 {
            return Err(Error::InvalidTable(format!(
                "table length {} does not equal {k}^{n}",
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v as usize >= k) {
            return Err(Error::InvalidTable(format!("entry {bad} exceeds carrier size {k}")));
        }
        let bits = pack_bits(k, &table);
        Ok(FiniteOp { k, n, table, bits })
    }

    /// Builds a table by evaluating `f` on every argument tuple, in index
    /// order.
    pub fn from_fn(k: usize, n: usize, mut f: impl FnMut(&[u16]) -> u16) -> Result<FiniteOp> {
        if !(1..=MAX_CARRIER).contains(&k) {
            return Err(Error::InvalidTable(format!("carrier size {k} out of range 1..={MAX_CARRIER}")));
        }
        if n < 1 {
            return Err(Error::InvalidTable("arity must be at least 1".into()));
        }
        let len = checked_pow(k, n)
            .and_then(|l| usize::try_from(l).ok())
            .ok_or_else(|| Error::InvalidTable(format!("table size {k}^{n} overflows")))?;
        let mut table = Vec::with_capacity(len);
        let mut args = vec![0u16; n];
        loop {
            table.push(f(&args));
            if !increment(&mut args, k) {
                break;
            }
        }
        FiniteOp::new(k, n, table)
    }

    /// The unary identity operation on a k-element carrier (`f_0`).
    pub fn identity(k: usize) -> FiniteOp {
        FiniteOp::from_fn(k, 1, |a| a[0]).expect("identity table is always valid")
    }

    /// Reconstructs the `id`-th table in lexicographic order (cell 0 most
    /// significant), the order the enumeration scans use.
    pub fn from_lex_index(k: usize, n: usize, mut id: u128) -> Result<FiniteOp> {
        let len = checked_pow(k, n)
            .and_then(|l| usize::try_from(l).ok())
            .ok_or_else(|| Error::InvalidTable(format!("table size {k}^{n} overflows")))?;
        let mut table = vec![0u16; len];
        for cell in (0..len).rev() {
            table[cell] = (id % k as u128) as u16;
            id /= k as u128;
        }
        if id != 0 {
            return Err(Error::InvalidTable("table index out of range".into()));
        }
        FiniteOp::new(k, n, table)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[u16] {
        &self.table
    }

    #[inline]
    pub(crate) fn cell(&self, idx: usize) -> u16 {
        match &self.bits {
            Some(bits) => ((bits[idx >> 6] >> (idx & 63)) & 1) as u16,
            None => self.table[idx],
        }
    }

    /// Looks the operation up at an argument tuple.
    pub fn eval(&self, args: &[u16]) -> Result<u16> {
        if args.len() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, got: args.len() });
        }
        if let Some(&bad) = args.iter().find(|&&a| a as usize >= self.k) {
            return Err(Error::ValueOutOfRange { value: bad as u64, bound: self.k as u64 });
        }
        Ok(self.cell(encode_index(self.k, args)))
    }

    /// Decides generalized associativity: every placement of a nested
    /// application inside a (2n-1)-tuple yields the same value.
    ///
    /// Only adjacent placements are compared (equality chains across the rest)
    /// and the scan stops at the first mismatch. Unary operations are
    /// associative by definition. Errors with [`Error::InfeasibleSize`] when
    /// the `k^(2n-1)` tuple space exceeds the bound.
    pub fn is_associative(&self, rail: &GuardRail) -> Result<bool> {
        if self.n == 1 {
            return Ok(true);
        }
        let k = self.k;
        let n = self.n;
        let span = 2 * n - 1;
        rail.check(checked_pow(k, span).unwrap_or(u128::MAX))?;
        if k == 1 {
            return Ok(true);
        }
        let mut tuple = vec![0u16; span];
        loop {
            let mut first = None;
            for i in 0..n {
                let inner = self.cell(encode_index(k, &tuple[i..i + n]));
                let mut idx = 0usize;
                for &a in &tuple[..i] {
                    idx = idx * k + a as usize;
                }
                idx = idx * k + inner as usize;
                for &a in &tuple[i + n..] {
                    idx = idx * k + a as usize;
                }
                let v = self.cell(idx);
                match first {
                    None => first = Some(v),
                    Some(f0) => {
                        if v != f0 {
                            return Ok(false);
                        }
                    }
                }
            }
            if !increment(&mut tuple, k) {
                return Ok(true);
            }
        }
    }

    /// The derived operation `f_ell` of arity `ell*(n-1) + 1`.
    ///
    /// `derive(f, 0)` is the unary identity on the carrier regardless of `f`,
    /// and `derive(f, 1)` is `f` itself.
    pub fn derive(&self, ell: u32, rail: &GuardRail) -> Result<FiniteOp> {
        let final_arity = ell as u128 * (self.n as u128 - 1) + 1;
        let cells = u32::try_from(final_arity)
            .ok()
            .and_then(|a| checked_pow(self.k, a as usize))
            .unwrap_or(u128::MAX);
        rail.check(cells)?;
        let mut acc = FiniteOp::identity(self.k);
        for _ in 0..ell {
            acc = self.prepend_to(&acc);
        }
        Ok(acc)
    }

    // One unfolding step: (a_1 .. a_(n+m-1)) -> g(f(a_1..a_n), a_(n+1)..),
    // realized as row copies of g's table.
    fn prepend_to(&self, g: &FiniteOp) -> FiniteOp {
        debug_assert_eq!(self.k, g.k);
        let k = self.k;
        let suffix = g.table.len() / k; // k^(g.n - 1)
        let mut table = Vec::with_capacity(self.table.len() * suffix);
        for prefix in 0..self.table.len() {
            let v = self.table[prefix] as usize;
            table.extend_from_slice(&g.table[v * suffix..(v + 1) * suffix]);
        }
        let bits = pack_bits(k, &table);
        FiniteOp { k, n: self.n + g.n - 1, table, bits }
    }

    /// Searches for `ell` with `derive(g, ell) = self`.
    ///
    /// For bases of arity 2 or more at most one exponent fits the arity law,
    /// so this is a single table comparison; unary bases are iterated until
    /// their composition cycle closes.
    pub fn derivable_from(&self, g: &FiniteOp, rail: &GuardRail) -> Result<Option<DerivationCertificate>> {
        if self.k != g.k {
            return Err(Error::CarrierMismatch { left: self.k, right: g.k });
        }
        if g.n == 1 {
            if self.n != 1 {
                return Ok(None);
            }
            let mut seen = HashSet::new();
            let mut current = FiniteOp::identity(self.k);
            let mut ell = 0u32;
            while seen.insert(current.table.clone()) {
                if current == *self {
                    return Ok(Some(DerivationCertificate::new(g.clone(), ell)));
                }
                current = g.prepend_to(&current);
                ell += 1;
            }
            return Ok(None);
        }
        if !(self.n - 1).is_multiple_of(g.n - 1) {
            return Ok(None);
        }
        let ell = u32::try_from((self.n - 1) / (g.n - 1))
            .map_err(|_| Error::InvalidInput("derivation exponent overflows".into()))?;
        if g.derive(ell, rail)? == *self {
            Ok(Some(DerivationCertificate::new(g.clone(), ell)))
        } else {
            Ok(None)
        }
    }

    /// Decides primitivity of an associative operation against a catalog of
    /// the associative operations of each smaller arity.
    ///
    /// The catalog must contain an entry for every arity `m < n` with
    /// `(m-1) | (n-1)` and `m >= 2` (unary bases only derive unary
    /// operations, so they are never consulted). Certificates prefer the
    /// smallest base arity, then the catalog order, which is kept sorted.
    pub fn is_primitive(
        &self,
        catalog: &BTreeMap<usize, Vec<FiniteOp>>,
        rail: &GuardRail,
    ) -> Result<Primitivity> {
        for m in 2..self.n {
            if !(self.n - 1).is_multiple_of(m - 1) {
                continue;
            }
            let bases = catalog.get(&m).ok_or(Error::IncompleteCatalog { arity: m })?;
            for g in bases {
                if let Some(cert) = self.derivable_from(g, rail)? {
                    return Ok(Primitivity::Derived(cert));
                }
            }
        }
        Ok(Primitivity::Primitive)
    }
}

fn pack_bits(k: usize, table: &[u16]) -> Option<Vec<u64>> {
    if k != 2 {
        return None;
    }
    let mut bits = vec![0u64; table.len().div_ceil(64)];
    for (i, &v) in table.iter().enumerate() {
        bits[i >> 6] |= (v as u64) << (i & 63);
    }
    Some(bits)
}

/// `sum args[i] * k^(n-1-i)`, the index law with the first argument most
/// significant.
pub fn encode_index(k: usize, args: &[u16]) -> usize {
    args.iter().fold(0usize, |acc, &a| acc * k + a as usize)
}

/// Inverse of [`encode_index`] for a fixed arity.
pub fn decode_index(k: usize, mut idx: usize, out: &mut [u16]) {
    for slot in (0..out.len()).rev() {
        out[slot] = (idx % k) as u16;
        idx /= k;
    }
}

// Mixed-radix increment, least significant slot last; false on wrap-around.
fn increment(tuple: &mut [u16], k: usize) -> bool {
    for slot in (0..tuple.len()).rev() {
        tuple[slot] += 1;
        if (tuple[slot] as usize) < k {
            return true;
        }
        tuple[slot] = 0;
    }
    false
}

/// Witness that an operation equals `derive(base, ell)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationCertificate {
    pub base: FiniteOp,
    pub ell: u32,
}

impl DerivationCertificate {
    pub fn new(base: FiniteOp, ell: u32) -> DerivationCertificate {
        DerivationCertificate { base, ell }
    }

    /// Arity of the derived operation, `ell*(m-1) + 1`.
    pub fn derived_arity(&self) -> usize {
        self.ell as usize * (self.base.n() - 1) + 1
    }
}

/// Outcome of a primitivity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Primitivity {
    Primitive,
    Derived(DerivationCertificate),
}

impl Primitivity {
    pub fn is_primitive(&self) -> bool {
        matches!(self, Primitivity::Primitive)
    }

    pub fn certificate(&self) -> Option<&DerivationCertificate> {
        match self {
            Primitivity::Primitive => None,
            Primitivity::Derived(cert) => Some(cert),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawOp {
    k: usize,
    n: usize,
    table: Vec<u64>,
}

impl TryFrom<RawOp> for FiniteOp {
    type Error = Error;

    fn try_from(raw: RawOp) -> Result<FiniteOp> {
        let table = raw
            .table
            .iter()
            .map(|&v| {
                u16::try_from(v).map_err(|_| Error::InvalidTable(format!("entry {v} exceeds carrier size {}", raw.k)))
            })
            .collect::<Result<Vec<u16>>>()?;
        FiniteOp::new(raw.k, raw.n, table)
    }
}

impl From<FiniteOp> for RawOp {
    fn from(op: FiniteOp) -> RawOp {
        RawOp { k: op.k, n: op.n, table: op.table.iter().map(|&v| v as u64).collect() }
    }
}
