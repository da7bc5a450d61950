//! Jaccard and minimum-bound rank-biased overlap, with the shared
//! empty-input policy:
//!
//! | inputs          | Jaccard     | RBO         |
//! |-----------------|-------------|-------------|
//! | both empty      | excluded    | excluded    |
//! | one empty       | 0.0         | 0.0         |
//! | both non-empty  | \|A∩B\|/\|A∪B\| | truncated sum |

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::brands::{detect_brands, BrandLexicon};
use crate::error::{Error, Result};
use crate::model::{
    ItemKind, ItemSet, PairOutcome, PairScore, RankedList, RboParams, ResponseRecord,
};

pub const EXCLUDED_LITERAL: &str = "excluded";

/// A similarity in `[0, 1]`, or `Excluded` when both inputs were empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimilarityValue {
    Value(f64),
    Excluded,
}

impl SimilarityValue {
    pub fn value(self) -> Option<f64> {
        match self {
            SimilarityValue::Value(v) => Some(v),
            SimilarityValue::Excluded => None,
        }
    }

    pub fn is_excluded(self) -> bool {
        matches!(self, SimilarityValue::Excluded)
    }
}

impl From<Option<f64>> for SimilarityValue {
    fn from(v: Option<f64>) -> Self {
        v.map_or(SimilarityValue::Excluded, SimilarityValue::Value)
    }
}

impl fmt::Display for SimilarityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimilarityValue::Value(v) => write!(f, "{v}"),
            SimilarityValue::Excluded => f.write_str(EXCLUDED_LITERAL),
        }
    }
}

impl FromStr for SimilarityValue {
    type Err = std::num::ParseFloatError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == EXCLUDED_LITERAL {
            Ok(SimilarityValue::Excluded)
        } else {
            s.parse().map(SimilarityValue::Value)
        }
    }
}

impl Serialize for SimilarityValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SimilarityValue::Value(v) => s.serialize_f64(*v),
            SimilarityValue::Excluded => s.serialize_str(EXCLUDED_LITERAL),
        }
    }
}

impl<'de> Deserialize<'de> for SimilarityValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct Visitor;
        impl de::Visitor<'_> for Visitor {
            type Value = SimilarityValue;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a number or {EXCLUDED_LITERAL:?}")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                Ok(SimilarityValue::Value(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(SimilarityValue::Value(v as f64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                Ok(SimilarityValue::Value(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                v.parse().map_err(E::custom)
            }
        }
        d.deserialize_any(Visitor)
    }
}

pub fn jaccard(a: &ItemSet, b: &ItemSet) -> SimilarityValue {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => SimilarityValue::Excluded,
        (true, false) | (false, true) => SimilarityValue::Value(0.0),
        (false, false) => {
            let inter = a.intersection_len(b);
            let union = a.len() + b.len() - inter;
            SimilarityValue::Value(inter as f64 / union as f64)
        }
    }
}

/// Rank-biased overlap truncated at the shorter list's depth `k`:
/// `(1 - p) * sum_{d=1..k} p^(d-1) * |S[..d] ∩ T[..d]| / d`.
///
/// For two identical lists of length `k` this is `1 - p^k`, not 1.
pub fn rbo_min(s: &RankedList, t: &RankedList, params: RboParams) -> SimilarityValue {
    match (s.is_empty(), t.is_empty()) {
        (true, true) => return SimilarityValue::Excluded,
        (true, false) | (false, true) => return SimilarityValue::Value(0.0),
        _ => {}
    }
    let p = params.p();
    let (s, t) = (s.as_slice(), t.as_slice());
    let depth = s.len().min(t.len());

    let mut seen_s: HashSet<&str> = HashSet::with_capacity(depth);
    let mut seen_t: HashSet<&str> = HashSet::with_capacity(depth);
    let mut overlap = 0usize;
    let mut weight = 1.0;
    let mut sum = 0.0;
    for d in 0..depth {
        let (x, y) = (s[d].as_str(), t[d].as_str());
        if x == y {
            overlap += 1;
        } else {
            overlap += usize::from(seen_t.contains(x)) + usize::from(seen_s.contains(y));
        }
        seen_s.insert(x);
        seen_t.insert(y);
        sum += weight * overlap as f64 / (d + 1) as f64;
        weight *= p;
    }
    SimilarityValue::Value((1.0 - p) * sum)
}

/// Extracts the items of `kind` from both records and scores them.
pub fn score_pair(
    r1: &ResponseRecord,
    r2: &ResponseRecord,
    kind: ItemKind,
    params: RboParams,
    lexicon: Option<&BrandLexicon>,
) -> Result<PairScore> {
    let (list1, list2) = match kind {
        ItemKind::Source => (r1.source_list(), r2.source_list()),
        ItemKind::Brand => {
            let lexicon =
                lexicon.ok_or_else(|| Error::MissingLexicon(r1.prompt.campaign.to_string()))?;
            (
                detect_brands(&r1.answer_text, lexicon).brands_ordered,
                detect_brands(&r2.answer_text, lexicon).brands_ordered,
            )
        }
    };
    let j = jaccard(&list1.to_set(), &list2.to_set());
    let r = rbo_min(&list1, &list2, params);
    let outcome = match (j, r) {
        (SimilarityValue::Value(jaccard), SimilarityValue::Value(rbo)) => {
            PairOutcome::Scored { jaccard, rbo }
        }
        _ => PairOutcome::Excluded,
    };
    Ok(PairScore {
        outcome,
        delta_t: (r1.timestamp - r2.timestamp).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(items: &[&str]) -> ItemSet {
        ItemSet::from_items(items.iter().copied())
    }

    fn list(items: &[&str]) -> RankedList {
        RankedList::from_items(items.iter().copied())
    }

    fn p9() -> RboParams {
        RboParams::default()
    }

    #[test]
    fn jaccard_half() {
        assert_eq!(
            jaccard(&set(&["a", "b", "c"]), &set(&["b", "c", "d"])),
            SimilarityValue::Value(0.5)
        );
    }

    #[test]
    fn jaccard_identical_and_edge_cases() {
        let x = set(&["a", "b"]);
        assert_eq!(jaccard(&x, &x), SimilarityValue::Value(1.0));
        assert_eq!(
            jaccard(&ItemSet::new(), &set(&["x"])),
            SimilarityValue::Value(0.0)
        );
        assert_eq!(
            jaccard(&ItemSet::new(), &ItemSet::new()),
            SimilarityValue::Excluded
        );
    }

    #[test]
    fn rbo_identical_truncates() {
        let l = list(&["a", "b", "c", "d", "e"]);
        let v = rbo_min(&l, &l, p9()).value().unwrap();
        assert!((v - (1.0 - 0.9f64.powi(5))).abs() < 1e-12);
        assert!((v - 0.40951).abs() < 1e-12);
    }

    #[test]
    fn rbo_swapped_pair() {
        let v = rbo_min(&list(&["a", "b"]), &list(&["b", "a"]), p9())
            .value()
            .unwrap();
        assert!((v - 0.09).abs() < 1e-12);
    }

    #[test]
    fn rbo_disjoint_and_edges() {
        assert_eq!(
            rbo_min(&list(&["a", "b"]), &list(&["c", "d"]), p9()),
            SimilarityValue::Value(0.0)
        );
        assert_eq!(
            rbo_min(&RankedList::default(), &RankedList::default(), p9()),
            SimilarityValue::Excluded
        );
        assert_eq!(
            rbo_min(&RankedList::default(), &list(&["a"]), p9()),
            SimilarityValue::Value(0.0)
        );
    }

    #[test]
    fn similarity_value_text_round_trip() {
        for v in [SimilarityValue::Value(0.125), SimilarityValue::Excluded] {
            assert_eq!(v.to_string().parse::<SimilarityValue>().unwrap(), v);
            let json = serde_json::to_string(&v).unwrap();
            assert_eq!(serde_json::from_str::<SimilarityValue>(&json).unwrap(), v);
        }
        assert_eq!(
            serde_json::to_string(&SimilarityValue::Excluded).unwrap(),
            "\"excluded\""
        );
    }

    fn arb_list() -> impl Strategy<Value = Vec<u8>> {
        prop::collection::vec(0u8..15, 0..=10)
    }

    fn to_list(v: &[u8]) -> RankedList {
        RankedList::from_items(v.iter().map(|x| format!("i{x}")))
    }

    proptest! {
        #[test]
        fn metrics_are_symmetric(a in arb_list(), b in arb_list()) {
            let (la, lb) = (to_list(&a), to_list(&b));
            prop_assert_eq!(rbo_min(&la, &lb, p9()), rbo_min(&lb, &la, p9()));
            prop_assert_eq!(jaccard(&la.to_set(), &lb.to_set()), jaccard(&lb.to_set(), &la.to_set()));
        }

        #[test]
        fn rbo_bounded_by_truncation(a in arb_list(), b in arb_list()) {
            let (la, lb) = (to_list(&a), to_list(&b));
            if let SimilarityValue::Value(v) = rbo_min(&la, &lb, p9()) {
                let k = la.len().min(lb.len()) as i32;
                prop_assert!(v >= 0.0);
                prop_assert!(v <= 1.0 - 0.9f64.powi(k) + 1e-12);
            }
        }

        #[test]
        fn appending_agreeing_items_never_decreases(a in arb_list(), b in arb_list()) {
            let (la, lb) = (to_list(&a), to_list(&b));
            prop_assume!(!la.is_empty() && !lb.is_empty());
            let before = rbo_min(&la, &lb, p9()).value().unwrap();
            let extend = |l: &RankedList| RankedList::from_items(
                l.as_slice().iter().cloned().chain(["new-1".to_string(), "new-2".to_string()]),
            );
            // trim to equal length so the shared suffix lands at the same depth
            let k = la.len().min(lb.len());
            let ta = RankedList::from_items(la.as_slice()[..k].iter().cloned());
            let tb = RankedList::from_items(lb.as_slice()[..k].iter().cloned());
            let base = rbo_min(&ta, &tb, p9()).value().unwrap();
            prop_assert!((base - before).abs() < 1e-12);
            let after = rbo_min(&extend(&ta), &extend(&tb), p9()).value().unwrap();
            prop_assert!(after >= before - 1e-12);
        }

        #[test]
        fn excluded_only_when_both_empty(a in arb_list(), b in arb_list()) {
            let (la, lb) = (to_list(&a), to_list(&b));
            let both_empty = la.is_empty() && lb.is_empty();
            prop_assert_eq!(rbo_min(&la, &lb, p9()).is_excluded(), both_empty);
            prop_assert_eq!(jaccard(&la.to_set(), &lb.to_set()).is_excluded(), both_empty);
        }
    }
}
