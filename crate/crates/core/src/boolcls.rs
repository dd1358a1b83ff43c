//! Classification of associative operations on the two-element carrier.
//!
//! For every arity n >= 2 exactly eight n-ary operations on {0,1} are
//! associative: the two constants, the first and last projections, n-ary OR
//! and AND, the xor of all arguments, and the complemented xor. This module
//! builds those canonical tables, classifies an operation either by full
//! verification or by a constant number of probe lookups, and answers the
//! derivability questions (from a binary base, and primitivity).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::finops::{DerivationCertificate, FiniteOp, Primitivity};
use crate::GuardRail;

/// The classification outcome for an n-ary operation on {0,1}, n >= 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoolForm {
    Const0,
    Const1,
    Proj1,
    ProjN,
    Or,
    And,
    Sum,
    SumBar,
    NotAssociative,
}

impl BoolForm {
    /// The eight associative families, in canonical (table-lexicographic)
    /// order for n = 2.
    pub const CANONICAL: [BoolForm; 8] = [
        BoolForm::Const0,
        BoolForm::And,
        BoolForm::Proj1,
        BoolForm::ProjN,
        BoolForm::Sum,
        BoolForm::Or,
        BoolForm::SumBar,
        BoolForm::Const1,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoolForm::Const0 => "const0",
            BoolForm::Const1 => "const1",
            BoolForm::Proj1 => "proj1",
            BoolForm::ProjN => "projn",
            BoolForm::Or => "or",
            BoolForm::And => "and",
            BoolForm::Sum => "sum",
            BoolForm::SumBar => "sumbar",
            BoolForm::NotAssociative => "not_associative",
        }
    }
}

/// Classification of the four unary operations on {0,1}; they are all
/// associative and all primitive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnaryBoolForm {
    Const0,
    Const1,
    Identity,
    Negation,
}

impl UnaryBoolForm {
    pub fn name(&self) -> &'static str {
        match self {
            UnaryBoolForm::Const0 => "const0",
            UnaryBoolForm::Const1 => "const1",
            UnaryBoolForm::Identity => "identity",
            UnaryBoolForm::Negation => "negation",
        }
    }
}

/// The canonical table of one of the eight associative families at arity n.
pub fn canonical_op(form: BoolForm, n: usize) -> Result<FiniteOp> {
    if n < 2 {
        return Err(Error::InvalidInput("canonical families start at arity 2".into()));
    }
    let table = |f: fn(&[u16]) -> u16| FiniteOp::from_fn(2, n, f);
    match form {
        BoolForm::Const0 => table(|_| 0),
        BoolForm::Const1 => table(|_| 1),
        BoolForm::Proj1 => table(|a| a[0]),
        BoolForm::ProjN => table(|a| a[a.len() - 1]),
        BoolForm::Or => table(|a| a.contains(&1) as u16),
        BoolForm::And => table(|a| a.iter().all(|&x| x == 1) as u16),
        BoolForm::Sum => table(|a| a.iter().fold(0, |x, &y| x ^ y)),
        BoolForm::SumBar => table(|a| a.iter().fold(1, |x, &y| x ^ y)),
        BoolForm::NotAssociative => {
            Err(Error::InvalidInput("no canonical table for a non-associative outcome".into()))
        }
    }
}

/// All eight canonical operations of arity n, sorted by table.
pub fn canonical_ops(n: usize) -> Result<Vec<FiniteOp>> {
    let mut ops = BoolForm::CANONICAL
        .iter()
        .map(|&form| canonical_op(form, n))
        .collect::<Result<Vec<_>>>()?;
    ops.sort_by(|a, b| a.table().cmp(b.table()));
    Ok(ops)
}

/// The four unary operations on {0,1}, sorted by table.
pub fn unary_ops() -> Vec<FiniteOp> {
    [[0u16, 0], [0, 1], [1, 0], [1, 1]]
        .iter()
        .map(|t| FiniteOp::new(2, 1, t.to_vec()).expect("unary tables are valid"))
        .collect()
}

pub fn classify_unary(f: &FiniteOp) -> Result<UnaryBoolForm> {
    if f.k() != 2 {
        return Err(Error::WrongCarrier { expected: 2, got: f.k() });
    }
    if f.n() != 1 {
        return Err(Error::ArityMismatch { expected: 1, got: f.n() });
    }
    Ok(match f.table() {
        [0, 0] => UnaryBoolForm::Const0,
        [1, 1] => UnaryBoolForm::Const1,
        [0, 1] => UnaryBoolForm::Identity,
        _ => UnaryBoolForm::Negation,
    })
}

/// One recorded table lookup of the probe classifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Probe {
    pub args: Vec<u16>,
    pub value: u16,
}

/// Outcome of the probe decision tree together with the lookups it made.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeClassification {
    pub form: BoolForm,
    pub probes: Vec<Probe>,
}

/// Classifies an associative operation on {0,1} from at most seven table
/// lookups at fixed tuples.
///
/// The decision tree branches on the values at (0^n), (10^(n-1)), (0^(n-1)1),
/// (1^n), (110^(n-2)), (010^(n-2)) and (01^(n-1)). One probe combination is
/// impossible for associative input and reports [`BoolForm::NotAssociative`];
/// on other non-associative inputs the answer is unspecified (use
/// [`classify_boolean`] for full verification).
pub fn classify_by_probes(f: &FiniteOp) -> Result<ProbeClassification> {
    if f.k() != 2 {
        return Err(Error::WrongCarrier { expected: 2, got: f.k() });
    }
    let n = f.n();
    if n < 2 {
        return Err(Error::InvalidInput("probe classification starts at arity 2".into()));
    }
    let mut probes = Vec::new();
    let mut read = |args: Vec<u16>| -> u16 {
        let value = f.eval(&args).expect("probe tuples are well-formed");
        probes.push(Probe { args, value });
        value
    };

    // tuple builders: ones in the given positions, zeros elsewhere
    let tuple = |ones: &[usize]| -> Vec<u16> {
        let mut t = vec![0u16; n];
        for &i in ones {
            t[i] = 1;
        }
        t
    };
    let all_ones = vec![1u16; n];
    let tail_ones = {
        let mut t = vec![1u16; n];
        t[0] = 0;
        t
    };

    let form = if read(tuple(&[])) == 0 {
        if read(tuple(&[0])) == 0 {
            if read(tuple(&[n - 1])) == 0 {
                if read(all_ones) == 0 {
                    BoolForm::Const0
                } else {
                    BoolForm::And
                }
            } else {
                BoolForm::ProjN
            }
        } else if read(tuple(&[0, 1])) == 0 {
            if read(tuple(&[1])) == 0 {
                // impossible for associative input
                BoolForm::NotAssociative
            } else {
                BoolForm::Sum
            }
        } else if read(tail_ones) == 0 {
            BoolForm::Proj1
        } else {
            BoolForm::Or
        }
    } else if read(tuple(&[0])) == 0 {
        BoolForm::SumBar
    } else {
        BoolForm::Const1
    };
    Ok(ProbeClassification { form, probes })
}

/// Fully verified classification: runs the exhaustive associativity check and
/// then matches the table against the eight canonical families.
pub fn classify_boolean(f: &FiniteOp, rail: &GuardRail) -> Result<BoolForm> {
    if f.k() != 2 {
        return Err(Error::WrongCarrier { expected: 2, got: f.k() });
    }
    if f.n() < 2 {
        return Err(Error::InvalidInput("classification starts at arity 2; see classify_unary".into()));
    }
    if !f.is_associative(rail)? {
        return Ok(BoolForm::NotAssociative);
    }
    for form in BoolForm::CANONICAL {
        if canonical_op(form, f.n())?.table() == f.table() {
            return Ok(form);
        }
    }
    unreachable!("an associative operation on two elements matches a canonical family")
}

/// Searches the eight binary semigroup operations for a base deriving `f`
/// with `ell = n - 1`.
///
/// Empty exactly when `f` is the complemented xor of odd arity. Bases are
/// tried in table order, so ties resolve deterministically.
pub fn derivable_from_binary(f: &FiniteOp, rail: &GuardRail) -> Result<Option<DerivationCertificate>> {
    if f.k() != 2 {
        return Err(Error::WrongCarrier { expected: 2, got: f.k() });
    }
    if f.n() < 2 {
        return Err(Error::InvalidInput("binary derivability starts at arity 2".into()));
    }
    let ell = (f.n() - 1) as u32;
    for base in canonical_ops(2)? {
        if base.derive(ell, rail)? == *f {
            return Ok(Some(DerivationCertificate::new(base, ell)));
        }
    }
    Ok(None)
}

/// Whether the complemented xor of arity n is primitive: exactly when n - 1
/// is a power of two (so n = 2, 3, 5, 9, 17, ...).
pub fn primitive_sumbar_arity(n: usize) -> bool {
    n >= 2 && (n - 1).is_power_of_two()
}

/// Primitivity of an associative operation on {0,1}, by the closed-form rule
/// rather than a catalog search.
///
/// All unary and binary operations are primitive. For n >= 3 only the
/// complemented xor can be primitive, and only when n - 1 is a power of two;
/// every reported certificate is re-verified by expanding the derived table.
/// The input must be associative: classification happens via probes, so a
/// non-associative table is either detected or yields a certificate that
/// fails its verification, both reported as errors.
pub fn primitive_boolean(f: &FiniteOp, rail: &GuardRail) -> Result<Primitivity> {
    if f.k() != 2 {
        return Err(Error::WrongCarrier { expected: 2, got: f.k() });
    }
    let n = f.n();
    if n <= 2 {
        return Ok(Primitivity::Primitive);
    }
    let form = classify_by_probes(f)?.form;
    let cert = match form {
        BoolForm::NotAssociative => {
            return Err(Error::InvalidInput("operation is not associative".into()));
        }
        BoolForm::SumBar => {
            if primitive_sumbar_arity(n) {
                return Ok(Primitivity::Primitive);
            }
            // n-1 = 2^v * odd: the smallest deriving base is the complemented
            // xor of arity 2^v + 1, iterated an odd number of times
            let v = (n - 1).trailing_zeros();
            let base_arity = (1usize << v) + 1;
            let ell = ((n - 1) >> v) as u32;
            DerivationCertificate::new(canonical_op(BoolForm::SumBar, base_arity)?, ell)
        }
        other => DerivationCertificate::new(canonical_op(other, 2)?, (n - 1) as u32),
    };
    if cert.base.derive(cert.ell, rail)? != *f {
        return Err(Error::InvalidInput("operation is not associative".into()));
    }
    Ok(Primitivity::Derived(cert))
}

/// Catalog of all associative operations of each arity in `2..n` on {0,1},
/// as [`FiniteOp::is_primitive`] expects.
pub fn boolean_catalog(n: usize) -> Result<BTreeMap<usize, Vec<FiniteOp>>> {
    let mut catalog = BTreeMap::new();
    for m in 2..n {
        catalog.insert(m, canonical_ops(m)?);
    }
    Ok(catalog)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rail() -> GuardRail {
        GuardRail::default()
    }

    #[test]
    fn canonical_binary_tables() {
        assert_eq!(canonical_op(BoolForm::Or, 2).unwrap().table(), &[0, 1, 1, 1]);
        assert_eq!(canonical_op(BoolForm::SumBar, 2).unwrap().table(), &[1, 0, 0, 1]);
        assert_eq!(canonical_op(BoolForm::And, 2).unwrap().table(), &[0, 0, 0, 1]);
        assert_eq!(canonical_op(BoolForm::Sum, 2).unwrap().table(), &[0, 1, 1, 0]);
        assert_eq!(canonical_op(BoolForm::Proj1, 2).unwrap().table(), &[0, 0, 1, 1]);
        assert_eq!(canonical_op(BoolForm::ProjN, 2).unwrap().table(), &[0, 1, 0, 1]);
    }

    #[test]
    fn canonical_ternary_sum() {
        let sum3 = canonical_op(BoolForm::Sum, 3).unwrap();
        assert_eq!(sum3.table(), &[0, 1, 1, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn canonical_tables_are_pairwise_distinct() {
        for n in 2..=5 {
            let ops = canonical_ops(n).unwrap();
            assert_eq!(ops.len(), 8);
            for i in 0..8 {
                for j in (i + 1)..8 {
                    assert_ne!(ops[i], ops[j], "n = {n}");
                }
            }
        }
    }

    #[test]
    fn probes_classify_the_spec_cases() {
        let and3 = canonical_op(BoolForm::And, 3).unwrap();
        let c = classify_by_probes(&and3).unwrap();
        assert_eq!(c.form, BoolForm::And);
        assert_eq!(c.probes.len(), 4);

        let sumbar3 = canonical_op(BoolForm::SumBar, 3).unwrap();
        let c = classify_by_probes(&sumbar3).unwrap();
        assert_eq!(c.form, BoolForm::SumBar);
        assert_eq!(c.probes.len(), 2);
    }

    #[test]
    fn impossible_probe_signature_reports_not_associative() {
        // (0^n) = 0, (10^(n-1)) = 1, (110^(n-2)) = 0, (010^(n-2)) = 0
        for n in 2..=6usize {
            let mut table = vec![0u16; 1 << n];
            table[1 << (n - 1)] = 1;
            let f = FiniteOp::new(2, n, table).unwrap();
            let c = classify_by_probes(&f).unwrap();
            assert_eq!(c.form, BoolForm::NotAssociative, "n = {n}");
            assert!(c.probes.len() <= 7);
        }
    }

    #[test]
    fn classify_boolean_verifies_fully() {
        let or = FiniteOp::new(2, 2, vec![0, 1, 1, 1]).unwrap();
        assert_eq!(classify_boolean(&or, &rail()).unwrap(), BoolForm::Or);
        let nand = FiniteOp::new(2, 2, vec![1, 1, 1, 0]).unwrap();
        assert_eq!(classify_boolean(&nand, &rail()).unwrap(), BoolForm::NotAssociative);
        let projn4 = canonical_op(BoolForm::ProjN, 4).unwrap();
        assert_eq!(classify_boolean(&projn4, &rail()).unwrap(), BoolForm::ProjN);
    }

    #[test]
    fn probe_and_full_classification_agree_on_canonical_ops() {
        for n in 2..=6 {
            for form in BoolForm::CANONICAL {
                let f = canonical_op(form, n).unwrap();
                let probed = classify_by_probes(&f).unwrap();
                assert_eq!(probed.form, form, "n = {n}");
                assert!(probed.probes.len() <= 7);
                assert_eq!(classify_boolean(&f, &rail()).unwrap(), form, "n = {n}");
            }
        }
    }

    #[test]
    fn binary_derivability() {
        let or4 = canonical_op(BoolForm::Or, 4).unwrap();
        let cert = derivable_from_binary(&or4, &rail()).unwrap().unwrap();
        assert_eq!(cert.base.table(), &[0, 1, 1, 1]);
        assert_eq!(cert.ell, 3);

        let sumbar5 = canonical_op(BoolForm::SumBar, 5).unwrap();
        assert!(derivable_from_binary(&sumbar5, &rail()).unwrap().is_none());

        let sumbar4 = canonical_op(BoolForm::SumBar, 4).unwrap();
        let cert = derivable_from_binary(&sumbar4, &rail()).unwrap().unwrap();
        assert_eq!(cert.base.table(), &[1, 0, 0, 1]); // the complemented binary xor
        assert_eq!(cert.ell, 3);
    }

    #[test]
    fn derivability_empty_exactly_for_odd_sumbar() {
        for n in 2..=8 {
            for form in BoolForm::CANONICAL {
                let f = canonical_op(form, n).unwrap();
                let empty = derivable_from_binary(&f, &rail()).unwrap().is_none();
                let expected = form == BoolForm::SumBar && n % 2 == 1;
                assert_eq!(empty, expected, "form {form:?}, n = {n}");
            }
        }
    }

    #[test]
    fn sumbar_primitivity_arities() {
        assert!(primitive_sumbar_arity(2));
        assert!(primitive_sumbar_arity(3));
        assert!(primitive_sumbar_arity(17));
        assert!(!primitive_sumbar_arity(7));
        assert!(!primitive_sumbar_arity(1));
        let arities: Vec<usize> = (2..=17).filter(|&n| primitive_sumbar_arity(n)).collect();
        assert_eq!(arities, vec![2, 3, 5, 9, 17]);
    }

    #[test]
    fn primitive_boolean_on_sumbar_family() {
        let sumbar9 = canonical_op(BoolForm::SumBar, 9).unwrap();
        assert!(primitive_boolean(&sumbar9, &rail()).unwrap().is_primitive());

        let sumbar13 = canonical_op(BoolForm::SumBar, 13).unwrap();
        let res = primitive_boolean(&sumbar13, &rail()).unwrap();
        let cert = res.certificate().unwrap();
        assert_eq!(cert.base, canonical_op(BoolForm::SumBar, 5).unwrap());
        assert_eq!(cert.ell, 3);
    }

    #[test]
    fn primitive_boolean_on_binary_families() {
        let and7 = canonical_op(BoolForm::And, 7).unwrap();
        let res = primitive_boolean(&and7, &rail()).unwrap();
        let cert = res.certificate().unwrap();
        assert_eq!(cert.base.table(), &[0, 0, 0, 1]);
        assert_eq!(cert.ell, 6);

        let or2 = canonical_op(BoolForm::Or, 2).unwrap();
        assert!(primitive_boolean(&or2, &rail()).unwrap().is_primitive());
    }

    #[test]
    fn primitive_boolean_agrees_with_catalog_search() {
        for n in 2..=10 {
            let catalog = boolean_catalog(n).unwrap();
            for form in BoolForm::CANONICAL {
                let f = canonical_op(form, n).unwrap();
                let fast = primitive_boolean(&f, &rail()).unwrap();
                let brute = f.is_primitive(&catalog, &rail()).unwrap();
                assert_eq!(fast.is_primitive(), brute.is_primitive(), "form {form:?}, n = {n}");
                if let (Some(a), Some(b)) = (fast.certificate(), brute.certificate()) {
                    assert_eq!(a, b, "form {form:?}, n = {n}");
                }
            }
        }
    }

    #[test]
    fn derived_xor_constant_term_follows_parity() {
        // derive(sumbar^(m), ell) = sumbar^(N) for odd ell, sum^(N) for even
        for m in 2..=4usize {
            let base = canonical_op(BoolForm::SumBar, m).unwrap();
            for ell in 0..=4u32 {
                let derived = base.derive(ell, &rail()).unwrap();
                assert_eq!(derived.table()[0], (ell % 2) as u16, "m = {m}, ell = {ell}");
                let arity = ell as usize * (m - 1) + 1;
                if arity >= 2 {
                    let expected = if ell % 2 == 1 {
                        canonical_op(BoolForm::SumBar, arity).unwrap()
                    } else {
                        canonical_op(BoolForm::Sum, arity).unwrap()
                    };
                    assert_eq!(derived, expected, "m = {m}, ell = {ell}");
                }
            }
        }
    }

    #[test]
    fn unary_classification() {
        let forms: Vec<UnaryBoolForm> =
            unary_ops().iter().map(|f| classify_unary(f).unwrap()).collect();
        assert_eq!(
            forms,
            vec![
                UnaryBoolForm::Const0,
                UnaryBoolForm::Identity,
                UnaryBoolForm::Negation,
                UnaryBoolForm::Const1
            ]
        );
    }

    #[test]
    fn wrong_carrier_is_rejected() {
        let f3 = FiniteOp::new(3, 2, vec![0; 9]).unwrap();
        assert!(matches!(classify_by_probes(&f3), Err(Error::WrongCarrier { .. })));
        assert!(matches!(classify_boolean(&f3, &rail()), Err(Error::WrongCarrier { .. })));
        assert!(matches!(derivable_from_binary(&f3, &rail()), Err(Error::WrongCarrier { .. })));
        assert!(matches!(primitive_boolean(&f3, &rail()), Err(Error::WrongCarrier { .. })));
    }
}
