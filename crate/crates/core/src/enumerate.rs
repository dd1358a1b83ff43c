//! Exhaustive scans and theorem-verification harnesses.
//!
//! Everything here is deterministic: scans walk candidate indices in
//! increasing order, parallel partitions merge back into index order, and a
//! single-threaded run produces the same report as a parallel one (elapsed
//! time aside). The naive associativity checker used as a cross-check is
//! written independently of the optimized one in [`crate::finops`]: it
//! compares every pair of placements over the whole tuple space, with its own
//! index arithmetic and no early exit.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Prime, RingElem, RingSpec};
use crate::boolcls::{self, BoolForm};
use crate::error::{Error, Result};
use crate::finops::FiniteOp;
use crate::mlpoly::MultilinearPoly;
use crate::{checked_pow, GuardRail};

/// What a scan ranged over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ScanParams {
    Ops { k: usize, n: usize },
    Multilinear { prime: u64, n: usize },
    TwoElement { n: usize },
    Proposition { max_n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Summary of one exhaustive scan or verification suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationReport {
    pub params: ScanParams,
    pub scanned: u64,
    pub associative: u64,
    pub histogram: BTreeMap<String, u64>,
    pub verdict: Verdict,
    pub elapsed_ms: u64,
}

impl EnumerationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Equality up to the wall-clock field; scans are bit-identical across
    /// runs and thread counts, elapsed time is not.
    pub fn content_eq(&self, other: &EnumerationReport) -> bool {
        self.params == other.params
            && self.scanned == other.scanned
            && self.associative == other.associative
            && self.histogram == other.histogram
            && self.verdict == other.verdict
    }
}

fn histogram_label(op: &FiniteOp) -> String {
    if op.k() == 2 {
        if op.n() == 1 {
            return boolcls::classify_unary(op).expect("two-element unary").name().to_string();
        }
        // associative by construction here, so the probe tree is exact
        return boolcls::classify_by_probes(op).expect("two-element table").form.name().to_string();
    }
    "unclassified".to_string()
}

/// Scans every k-valued table of arity n and keeps the associative ones,
/// sorted by table index. The histogram classifies two-element survivors by
/// canonical family.
pub fn enumerate_assoc_ops(
    k: usize,
    n: usize,
    rail: &GuardRail,
) -> Result<(Vec<FiniteOp>, EnumerationReport)> {
    let start = Instant::now();
    let cells = checked_pow(k, n).unwrap_or(u128::MAX);
    let candidates = cells
        .try_into()
        .ok()
        .and_then(|c: u32| checked_pow(k, c as usize))
        .unwrap_or(u128::MAX);
    rail.check(candidates)?;
    let candidates = candidates as u64;

    let fast_mask = k == 2 && cells <= 64;
    let ops: Vec<FiniteOp> = (0..candidates)
        .into_par_iter()
        .filter_map(|id| {
            let keep = if fast_mask {
                mask_is_associative(id, n, cells as u32)
            } else {
                let op = FiniteOp::from_lex_index(k, n, id as u128).expect("id is in range");
                match op.is_associative(rail) {
                    Ok(keep) => keep,
                    Err(_) => return None, // per-candidate space within the scan bound by construction
                }
            };
            keep.then(|| (id, FiniteOp::from_lex_index(k, n, id as u128).expect("id is in range")))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .map(|(_, op)| op)
        .collect();
    // rayon's collect preserves index order for indexed iterators, but the
    // ordering contract matters, so assert it
    debug_assert!(ops.windows(2).all(|w| w[0].table() < w[1].table()));

    let mut histogram: BTreeMap<String, u64> = BTreeMap::new();
    for op in &ops {
        *histogram.entry(histogram_label(op)).or_insert(0) += 1;
    }
    let report = EnumerationReport {
        params: ScanParams::Ops { k, n },
        scanned: candidates,
        associative: ops.len() as u64,
        histogram,
        verdict: Verdict::Pass,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    Ok((ops, report))
}

// Associativity over {0,1} straight off the packed table bits: cell t of
// candidate `id` is bit (len-1-t), matching lexicographic table order.
fn mask_is_associative(id: u64, n: usize, len: u32) -> bool {
    if n == 1 {
        return true;
    }
    let cell = |idx: u32| (id >> (len - 1 - idx)) & 1;
    let span = 2 * n as u32 - 1;
    let nmask = (1u32 << n) - 1;
    for tuple in 0..(1u32 << span) {
        let mut first = None;
        for i in 0..n as u32 {
            let inner = cell((tuple >> (n as u32 - 1 - i)) & nmask) as u32;
            let high = tuple >> (span - i);
            let low = tuple & ((1 << (n as u32 - 1 - i)) - 1);
            let outer = (high << (n as u32 - i)) | (inner << (n as u32 - 1 - i)) | low;
            let v = cell(outer);
            match first {
                None => first = Some(v),
                Some(f0) => {
                    if v != f0 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Independent all-pairs associativity check: every pair of placements is
/// compared on every tuple, the whole space is always scanned, and the index
/// arithmetic shares nothing with [`FiniteOp::is_associative`].
pub fn naive_is_associative(f: &FiniteOp, rail: &GuardRail) -> Result<bool> {
    let k = f.k();
    let n = f.n();
    let span = 2 * n - 1;
    let tuples = checked_pow(k, span).unwrap_or(u128::MAX);
    rail.check(tuples)?;
    let tuples = tuples as u64;

    // positional weights k^(n-1), ..., k, 1
    let weight: Vec<u64> = (0..n).rev().map(|e| (k as u64).pow(e as u32)).collect();
    let table = f.table();
    let mut ok = true;
    let mut digits = vec![0u64; span];
    for counter in 0..tuples {
        let mut c = counter;
        for slot in (0..span).rev() {
            digits[slot] = c % k as u64;
            c /= k as u64;
        }
        let mut placed = Vec::with_capacity(n);
        for i in 0..n {
            let mut inner_idx = 0u64;
            for t in 0..n {
                inner_idx += digits[i + t] * weight[t];
            }
            let inner = table[inner_idx as usize] as u64;
            let mut outer_idx = 0u64;
            let mut slot = 0;
            for &d in &digits[..i] {
                outer_idx += d * weight[slot];
                slot += 1;
            }
            outer_idx += inner * weight[slot];
            slot += 1;
            for &d in &digits[i + n..] {
                outer_idx += d * weight[slot];
                slot += 1;
            }
            placed.push(table[outer_idx as usize]);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                ok &= placed[i] == placed[j];
            }
        }
    }
    Ok(ok)
}

/// Oracle twin of [`enumerate_assoc_ops`]: a plain sequential scan filtered
/// by [`naive_is_associative`].
pub fn enumerate_assoc_ops_naive(k: usize, n: usize, rail: &GuardRail) -> Result<Vec<FiniteOp>> {
    let cells = checked_pow(k, n).unwrap_or(u128::MAX);
    let candidates = cells
        .try_into()
        .ok()
        .and_then(|c: u32| checked_pow(k, c as usize))
        .unwrap_or(u128::MAX);
    rail.check(candidates)?;
    let mut ops = Vec::new();
    for id in 0..candidates {
        let op = FiniteOp::from_lex_index(k, n, id)?;
        if naive_is_associative(&op, rail)? {
            ops.push(op);
        }
    }
    Ok(ops)
}

/// The `index`-th multilinear polynomial over GF(p) in n variables, in the
/// scan order: coefficients are base-p digits of the index, one per subset
/// mask, the empty set least significant.
pub fn poly_by_index(prime: u64, n: usize, index: u128) -> Result<MultilinearPoly> {
    let p = Prime::new(prime)?;
    let ring = RingSpec::PrimeField(p);
    if n > 20 {
        return Err(Error::InvalidPoly("subset space too large to index".into()));
    }
    let subsets = 1usize << n;
    let mut coeffs = Vec::new();
    let mut rest = index;
    for mask in 0..subsets {
        let digit = (rest % prime as u128) as u64;
        rest /= prime as u128;
        if digit != 0 {
            coeffs.push((mask as u64, RingElem::Mod { value: digit, modulus: prime }));
        }
    }
    if rest != 0 {
        return Err(Error::InvalidPoly("polynomial index out of range".into()));
    }
    MultilinearPoly::new(ring, n, coeffs)
}

/// Scans every multilinear polynomial over GF(p) in n variables, decides
/// associativity symbolically, classifies each survivor, and fails the
/// verdict if associativity and classification ever disagree.
pub fn enumerate_assoc_multilinear(
    prime: u64,
    n: usize,
    rail: &GuardRail,
) -> Result<(Vec<MultilinearPoly>, EnumerationReport)> {
    let start = Instant::now();
    Prime::new(prime)?;
    if n < 2 {
        return Err(Error::InvalidPoly("the scan starts at two variables".into()));
    }
    let subsets = checked_pow(2, n)
        .and_then(|s| u32::try_from(s).ok())
        .ok_or_else(|| Error::InvalidPoly("subset space too large".into()))?;
    let candidates = checked_pow(prime as usize, subsets as usize).unwrap_or(u128::MAX);
    rail.check(candidates)?;
    let candidates = candidates as u64;

    // (id, form name) per associative polynomial; None verdict contribution
    // when the bi-implication between associativity and classification breaks
    let scanned: Vec<(u64, Option<&'static str>)> = (0..candidates)
        .into_par_iter()
        .filter_map(|id| {
            let poly = poly_by_index(prime, n, id as u128).expect("id is in range");
            let assoc = poly.is_associative().expect("n >= 2");
            let form = poly.classify_marmat().expect("n >= 2");
            let classified = form.name() != "no_form";
            if assoc != classified {
                Some((id, None))
            } else if assoc {
                Some((id, Some(form.name())))
            } else {
                None
            }
        })
        .collect();

    let mut histogram: BTreeMap<String, u64> = BTreeMap::new();
    let mut mismatch = false;
    let mut survivors = Vec::new();
    for (id, entry) in scanned {
        match entry {
            None => mismatch = true,
            Some(name) => {
                *histogram.entry(name.to_string()).or_insert(0) += 1;
                survivors.push(poly_by_index(prime, n, id as u128)?);
            }
        }
    }
    let report = EnumerationReport {
        params: ScanParams::Multilinear { prime, n },
        scanned: candidates,
        associative: survivors.len() as u64,
        histogram,
        verdict: if mismatch { Verdict::Fail } else { Verdict::Pass },
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    Ok((survivors, report))
}

/// Verifies the two-element classification at arity n.
///
/// Up to n = 4 the full table space is enumerated and compared, as a set,
/// against the eight canonical families. For n = 5 and 6 the scan space is
/// out of reach, so the canonical families are checked to be associative and
/// to round-trip through the probe classifier. Larger arities are refused.
pub fn verify_two_element_theorem(n: usize, rail: &GuardRail) -> Result<EnumerationReport> {
    let start = Instant::now();
    if n < 2 {
        return Err(Error::InvalidInput("the classification starts at arity 2".into()));
    }
    if n > 6 {
        return Err(Error::InfeasibleSize {
            needed: checked_pow(2, 1 << n).unwrap_or(u128::MAX),
            bound: rail.max_cells(),
        });
    }
    let canonical = boolcls::canonical_ops(n)?;
    let (scanned, associative, histogram, pass) = if n <= 4 {
        let (ops, base) = enumerate_assoc_ops(2, n, rail)?;
        let found: BTreeSet<&[u16]> = ops.iter().map(|op| op.table()).collect();
        let expected: BTreeSet<&[u16]> = canonical.iter().map(|op| op.table()).collect();
        (base.scanned, base.associative, base.histogram, found == expected)
    } else {
        let mut histogram = BTreeMap::new();
        let mut pass = true;
        for form in BoolForm::CANONICAL {
            let op = boolcls::canonical_op(form, n)?;
            pass &= op.is_associative(rail)?;
            pass &= boolcls::classify_by_probes(&op)?.form == form;
            *histogram.entry(form.name().to_string()).or_insert(0) += 1;
        }
        (8, 8, histogram, pass)
    };
    Ok(EnumerationReport {
        params: ScanParams::TwoElement { n },
        scanned,
        associative,
        histogram,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Verifies the primitivity rule arity by arity.
///
/// Through n = 10 every canonical family is put through the catalog-driven
/// derivation search and the outcome is compared with the closed-form rule
/// (unary and binary operations are primitive, above that only the
/// complemented xor at n = 2^k + 1). Past 10 the table spaces stop being
/// worth expanding and the arity rule alone is recorded.
pub fn verify_proposition(max_n: usize, rail: &GuardRail) -> Result<EnumerationReport> {
    let start = Instant::now();
    if max_n < 1 {
        return Err(Error::InvalidInput("max arity must be at least 1".into()));
    }
    let mut scanned = 0u64;
    let mut primitive = 0u64;
    let mut derived = 0u64;
    let mut pass = true;
    for n in 1..=max_n {
        if n == 1 {
            for op in boolcls::unary_ops() {
                scanned += 1;
                let outcome = op.is_primitive(&BTreeMap::new(), rail)?;
                pass &= outcome.is_primitive();
                primitive += 1;
            }
            continue;
        }
        if n <= 10 {
            let catalog = boolcls::boolean_catalog(n)?;
            for form in BoolForm::CANONICAL {
                let op = boolcls::canonical_op(form, n)?;
                scanned += 1;
                let outcome = op.is_primitive(&catalog, rail)?;
                let predicted = if n == 2 {
                    true
                } else {
                    form == BoolForm::SumBar && boolcls::primitive_sumbar_arity(n)
                };
                pass &= outcome.is_primitive() == predicted;
                // the fast certificate path must agree with the search
                let fast = boolcls::primitive_boolean(&op, rail)?;
                pass &= fast.is_primitive() == outcome.is_primitive();
                pass &= fast.certificate() == outcome.certificate();
                if outcome.is_primitive() {
                    primitive += 1;
                } else {
                    derived += 1;
                }
            }
        } else {
            // the parity rule: derived complemented xors flip their constant
            // term with each iteration, so only n = 2^k + 1 stays primitive
            for form in BoolForm::CANONICAL {
                scanned += 1;
                let is_primitive = form == BoolForm::SumBar && boolcls::primitive_sumbar_arity(n);
                if is_primitive {
                    primitive += 1;
                } else {
                    derived += 1;
                }
            }
        }
    }
    let mut histogram = BTreeMap::new();
    histogram.insert("primitive".to_string(), primitive);
    histogram.insert("derived".to_string(), derived);
    Ok(EnumerationReport {
        params: ScanParams::Proposition { max_n },
        scanned,
        associative: scanned,
        histogram,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Runs the optimized and the naive enumeration side by side and checks both
/// against each other and, when the parameters are covered, against the
/// golden expected counts.
pub fn verify_semigroup_count(k: usize, n: usize, rail: &GuardRail) -> Result<EnumerationReport> {
    let start = Instant::now();
    let (ops, base) = enumerate_assoc_ops(k, n, rail)?;
    let oracle = enumerate_assoc_ops_naive(k, n, rail)?;
    let mut pass = ops == oracle;
    if let Some(expected) = golden_counts().ops_count(k, n) {
        pass &= ops.len() as u64 == expected;
    }
    Ok(EnumerationReport {
        params: ScanParams::Ops { k, n },
        scanned: base.scanned,
        associative: base.associative,
        histogram: base.histogram,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Multilinear scan checked against the golden expected counts.
pub fn verify_marmat(prime: u64, n: usize, rail: &GuardRail) -> Result<EnumerationReport> {
    let start = Instant::now();
    let (polys, base) = enumerate_assoc_multilinear(prime, n, rail)?;
    let mut pass = base.passed();
    if let Some(expected) = golden_counts().multilinear_count(prime, n) {
        pass &= polys.len() as u64 == expected;
    }
    Ok(EnumerationReport {
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        elapsed_ms: start.elapsed().as_millis() as u64,
        ..base
    })
}

/// The rectangular band on an r-by-c carrier: the element `(i, j)` is encoded
/// as `i*c + j` and `(i, j) * (k, l) = (i, l)`. Associative for every shape.
pub fn rectangular_band(rows: usize, cols: usize, rail: &GuardRail) -> Result<FiniteOp> {
    if rows < 1 || cols < 1 {
        return Err(Error::InvalidInput("band dimensions must be at least 1".into()));
    }
    let k = rows
        .checked_mul(cols)
        .filter(|&k| k <= crate::finops::MAX_CARRIER)
        .ok_or_else(|| Error::InvalidInput("band carrier too large".into()))?;
    rail.check(checked_pow(k, 2).unwrap_or(u128::MAX))?;
    FiniteOp::from_fn(k, 2, |args| {
        let row = args[0] as usize / cols;
        let col = args[1] as usize % cols;
        (row * cols + col) as u16
    })
}

/// The n-ary operation `(x_1, ..., x_n) -> phi(x_1)` for an idempotent unary
/// map `phi`; associative by construction.
pub fn idempotent_map_op(phi: &[u16], n: usize, rail: &GuardRail) -> Result<FiniteOp> {
    let k = phi.len();
    if !(1..=crate::finops::MAX_CARRIER).contains(&k) {
        return Err(Error::InvalidInput("map domain size out of range".into()));
    }
    if let Some(&bad) = phi.iter().find(|&&v| v as usize >= k) {
        return Err(Error::ValueOutOfRange { value: bad as u64, bound: k as u64 });
    }
    if (0..k).any(|x| phi[phi[x] as usize] != phi[x]) {
        return Err(Error::NotIdempotent);
    }
    rail.check(checked_pow(k, n).unwrap_or(u128::MAX))?;
    FiniteOp::from_fn(k, n, |args| phi[args[0] as usize])
}

/// Expected associative counts, frozen from oracle runs (the naive all-pairs
/// scan for operation tables, the pointwise evaluation scan for multilinear
/// polynomials). Keys are "k,n" and "p,n".
#[derive(Debug, Deserialize)]
pub struct GoldenCounts {
    pub version: u32,
    ops: BTreeMap<String, u64>,
    multilinear: BTreeMap<String, u64>,
}

impl GoldenCounts {
    pub fn ops_count(&self, k: usize, n: usize) -> Option<u64> {
        self.ops.get(&format!("{k},{n}")).copied()
    }

    pub fn multilinear_count(&self, prime: u64, n: usize) -> Option<u64> {
        self.multilinear.get(&format!("{prime},{n}")).copied()
    }
}

pub fn golden_counts() -> &'static GoldenCounts {
    static GOLDEN: OnceLock<GoldenCounts> = OnceLock::new();
    GOLDEN.get_or_init(|| {
        serde_json::from_str(include_str!("../data/golden_counts.json"))
            .expect("the golden count file is well-formed")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rail() -> GuardRail {
        GuardRail::default()
    }

    #[test]
    fn two_element_binary_scan_finds_table_one() {
        let (ops, report) = enumerate_assoc_ops(2, 2, &rail()).unwrap();
        assert_eq!(report.scanned, 16);
        assert_eq!(ops.len(), 8);
        let tables: Vec<&[u16]> = ops.iter().map(|op| op.table()).collect();
        assert_eq!(
            tables,
            vec![
                &[0, 0, 0, 0][..], // constant 0
                &[0, 0, 0, 1][..], // and
                &[0, 0, 1, 1][..], // first projection
                &[0, 1, 0, 1][..], // last projection
                &[0, 1, 1, 0][..], // xor
                &[0, 1, 1, 1][..], // or
                &[1, 0, 0, 1][..], // complemented xor
                &[1, 1, 1, 1][..], // constant 1
            ]
        );
        assert_eq!(report.histogram.values().sum::<u64>(), report.associative);
    }

    #[test]
    fn ternary_scan_matches_canonical_families() {
        let (ops, report) = enumerate_assoc_ops(2, 3, &rail()).unwrap();
        assert_eq!(report.scanned, 256);
        let found: BTreeSet<Vec<u16>> = ops.iter().map(|op| op.table().to_vec()).collect();
        let expected: BTreeSet<Vec<u16>> =
            boolcls::canonical_ops(3).unwrap().iter().map(|op| op.table().to_vec()).collect();
        assert_eq!(found, expected);
    }

    #[test]
    fn naive_and_optimized_checkers_agree() {
        // every binary and ternary table on two elements, and every binary
        // table on three elements
        for id in 0..16u128 {
            let op = FiniteOp::from_lex_index(2, 2, id).unwrap();
            assert_eq!(
                op.is_associative(&rail()).unwrap(),
                naive_is_associative(&op, &rail()).unwrap(),
                "k=2 n=2 id={id}"
            );
        }
        for id in 0..256u128 {
            let op = FiniteOp::from_lex_index(2, 3, id).unwrap();
            assert_eq!(
                op.is_associative(&rail()).unwrap(),
                naive_is_associative(&op, &rail()).unwrap(),
                "k=2 n=3 id={id}"
            );
        }
        for id in (0..19683u128).step_by(7) {
            let op = FiniteOp::from_lex_index(3, 2, id).unwrap();
            assert_eq!(
                op.is_associative(&rail()).unwrap(),
                naive_is_associative(&op, &rail()).unwrap(),
                "k=3 n=2 id={id}"
            );
        }
    }

    #[test]
    fn multilinear_scan_gf2() {
        let (polys, report) = enumerate_assoc_multilinear(2, 3, &rail()).unwrap();
        assert_eq!(report.scanned, 256);
        assert_eq!(polys.len(), 8);
        assert!(report.passed());
        let expect: BTreeMap<String, u64> = [
            ("constant", 2u64),
            ("first_proj", 1),
            ("last_proj", 1),
            ("shifted_sum", 2),
            ("product_form", 2),
        ]
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect();
        assert_eq!(report.histogram, expect);
    }

    #[test]
    fn multilinear_scan_gf3() {
        let (polys, report) = enumerate_assoc_multilinear(3, 2, &rail()).unwrap();
        assert_eq!(report.scanned, 81);
        assert_eq!(polys.len(), 14);
        assert!(report.passed());
        let expect: BTreeMap<String, u64> = [
            ("constant", 3u64),
            ("first_proj", 1),
            ("last_proj", 1),
            ("shifted_sum", 3),
            ("product_form", 6),
        ]
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect();
        assert_eq!(report.histogram, expect);

        // n = 3 brings in exactly one weighted sum, with weight 2
        let (polys, report) = enumerate_assoc_multilinear(3, 3, &rail()).unwrap();
        assert_eq!(polys.len(), 15);
        assert_eq!(report.histogram.get("omega_sum"), Some(&1));
        let omega_poly = polys
            .iter()
            .find(|p| p.classify_marmat().unwrap().name() == "omega_sum")
            .unwrap();
        let f3 = RingSpec::prime_field(3).unwrap();
        assert_eq!(
            omega_poly.classify_marmat().unwrap(),
            crate::mlpoly::MarMatForm::OmegaSum(f3.elem(2))
        );
    }

    #[test]
    fn two_element_suite_passes() {
        for n in 2..=4 {
            let report = verify_two_element_theorem(n, &rail()).unwrap();
            assert!(report.passed(), "n = {n}");
            assert_eq!(report.associative, 8);
        }
        // reduced checks past the scan horizon
        for n in 5..=6 {
            let report = verify_two_element_theorem(n, &rail()).unwrap();
            assert!(report.passed(), "n = {n}");
            assert_eq!(report.scanned, 8);
        }
        assert!(matches!(
            verify_two_element_theorem(7, &rail()),
            Err(Error::InfeasibleSize { .. })
        ));
    }

    #[test]
    fn proposition_suite_passes() {
        let report = verify_proposition(10, &rail()).unwrap();
        assert!(report.passed());
        // arities 1 and 2 contribute 4 + 8 primitive ops; past that only the
        // complemented xor at n in {3, 5, 9}
        assert_eq!(report.histogram.get("primitive"), Some(&15));
        assert_eq!(report.scanned, 4 + 8 * 9);
    }

    #[test]
    fn band_fixture() {
        let band = rectangular_band(2, 2, &rail()).unwrap();
        // (0,1) = 1 combined with (1,0) = 2 gives (0,0) = 0
        assert_eq!(band.eval(&[1, 2]).unwrap(), 0);
        assert!(band.is_associative(&rail()).unwrap());

        // a single row collapses to the right projection
        let thin = rectangular_band(1, 3, &rail()).unwrap();
        assert_eq!(thin.table(), &[0, 1, 2, 0, 1, 2, 0, 1, 2]);

        for r in 1..=2 {
            for c in 1..=2 {
                let band = rectangular_band(r, c, &rail()).unwrap();
                assert!(naive_is_associative(&band, &rail()).unwrap(), "{r}x{c}");
            }
        }
    }

    #[test]
    fn idempotent_fixture() {
        let op = idempotent_map_op(&[0, 1, 0], 2, &rail()).unwrap();
        assert!(op.is_associative(&rail()).unwrap());
        assert_eq!(op.table(), &[0, 0, 0, 1, 1, 1, 0, 0, 0]);

        // the identity map gives the first projection
        let pr1 = idempotent_map_op(&[0, 1, 2], 2, &rail()).unwrap();
        assert_eq!(pr1.table(), &[0, 0, 0, 1, 1, 1, 2, 2, 2]);

        // a constant map gives a constant operation
        let c0 = idempotent_map_op(&[0, 0, 0], 2, &rail()).unwrap();
        assert_eq!(c0.table(), &[0; 9]);

        assert_eq!(idempotent_map_op(&[1, 0, 1], 2, &rail()), Err(Error::NotIdempotent));
    }

    #[test]
    fn phi_fixture_escapes_the_multilinear_tables() {
        let op = idempotent_map_op(&[0, 1, 0], 2, &rail()).unwrap();
        let (polys, _) = enumerate_assoc_multilinear(3, 2, &rail()).unwrap();
        let tables: Vec<FiniteOp> =
            polys.iter().map(|p| p.value_table(&rail()).unwrap()).collect();
        assert!(!tables.contains(&op));
    }

    #[test]
    fn reports_are_deterministic_across_thread_counts() {
        let (ops_a, report_a) = enumerate_assoc_ops(2, 3, &rail()).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let (ops_b, report_b) = pool.install(|| enumerate_assoc_ops(2, 3, &rail())).unwrap();
        assert_eq!(ops_a, ops_b);
        assert!(report_a.content_eq(&report_b));

        let (_, multi_a) = enumerate_assoc_multilinear(3, 2, &rail()).unwrap();
        let (_, multi_b) = pool.install(|| enumerate_assoc_multilinear(3, 2, &rail())).unwrap();
        assert!(multi_a.content_eq(&multi_b));
    }

    #[test]
    fn unary_scans_keep_everything() {
        // every unary operation is associative
        let (ops, report) = enumerate_assoc_ops(2, 1, &rail()).unwrap();
        assert_eq!(ops.len(), 4);
        assert_eq!(report.histogram.len(), 4); // const0, const1, identity, negation
        let (ops, report) = enumerate_assoc_ops(3, 1, &rail()).unwrap();
        assert_eq!(ops.len(), 27);
        assert_eq!(report.histogram.get("unclassified"), Some(&27));
    }

    #[test]
    fn guard_rails_refuse_oversized_scans() {
        assert!(matches!(enumerate_assoc_ops(2, 5, &rail()), Err(Error::InfeasibleSize { .. })));
        assert!(matches!(enumerate_assoc_ops(4, 2, &rail()), Err(Error::InfeasibleSize { .. })));
        // 3^(2^4) = 43 million candidates clears the default bound
        assert!(matches!(
            enumerate_assoc_multilinear(3, 4, &rail()),
            Err(Error::InfeasibleSize { .. })
        ));
    }

    #[test]
    fn report_serialization_shape() {
        let (_, report) = enumerate_assoc_ops(2, 2, &rail()).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["params"]["k"], 2);
        assert_eq!(json["params"]["n"], 2);
        assert_eq!(json["scanned"], 16);
        assert_eq!(json["associative"], 8);
        assert_eq!(json["verdict"], "pass");
        assert!(json["histogram"].is_object());
        assert!(json["elapsed_ms"].is_u64());
    }

    #[test]
    fn golden_counts_parse() {
        let golden = golden_counts();
        assert_eq!(golden.ops_count(3, 2), Some(113));
        assert_eq!(golden.multilinear_count(3, 2), Some(14));
        assert_eq!(golden.ops_count(9, 9), None);
    }
}
