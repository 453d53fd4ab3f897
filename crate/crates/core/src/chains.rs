//! Labeled minors and element-by-element removal toward a fixed minor.
//!
//! Minors are labeled: N is a minor of M when E(N) ⊆ E(M) and some split of
//! E(M) − E(N) into a deleted and a contracted part produces N exactly.
//! Searches break ties by element label, trying deletion before contraction.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::polymatroid::{bits, submasks};
use crate::{ElementId, Mask, PmError, Polymatroid};

/// Largest removal set the ordering enumerators accept.
pub const MAX_ENUMERATED_REMOVALS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RemovalOp {
    Delete,
    Contract,
}

impl RemovalOp {
    pub const BOTH: [RemovalOp; 2] = [RemovalOp::Delete, RemovalOp::Contract];

    pub fn other(self) -> RemovalOp {
        match self {
            RemovalOp::Delete => RemovalOp::Contract,
            RemovalOp::Contract => RemovalOp::Delete,
        }
    }

    pub fn apply(self, p: &Polymatroid, mask: Mask) -> Polymatroid {
        match self {
            RemovalOp::Delete => p.minor_unchecked(mask, 0),
            RemovalOp::Contract => p.minor_unchecked(0, mask),
        }
    }
}

impl fmt::Display for RemovalOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RemovalOp::Delete => "delete",
            RemovalOp::Contract => "contract",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RemovalStep {
    pub op: RemovalOp,
    pub element: ElementId,
}

impl RemovalStep {
    pub fn new(op: RemovalOp, element: ElementId) -> Self {
        RemovalStep { op, element }
    }

    /// Applies the step, failing if the element is not in `p`.
    pub fn apply(&self, p: &Polymatroid) -> Result<Polymatroid, PmError> {
        Ok(self.op.apply(p, p.element_mask(self.element.as_str())?))
    }
}

// element first, then Delete before Contract
impl Ord for RemovalStep {
    fn cmp(&self, other: &Self) -> Ordering {
        self.element
            .cmp(&other.element)
            .then(self.op.cmp(&other.op))
    }
}

impl PartialOrd for RemovalStep {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RemovalStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.op, self.element)
    }
}

/// Steps from M down to N, with the connectivity of every intermediate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemovalChain {
    pub steps: Vec<RemovalStep>,
    pub intermediates_connected: Vec<bool>,
}

impl RemovalChain {
    /// Applies the steps in order, returning every intermediate (the last
    /// one is the endpoint).
    pub fn replay(&self, m: &Polymatroid) -> Result<Vec<Polymatroid>, PmError> {
        let mut cur = m.clone();
        let mut out = Vec::with_capacity(self.steps.len());
        for s in &self.steps {
            cur = s.apply(&cur)?;
            out.push(cur.clone());
        }
        Ok(out)
    }
}

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("{0} is not connected")]
    NotConnected(&'static str),
    #[error("element {0:?} of the minor is not in the ground set of the larger polymatroid")]
    NotSubset(String),
    #[error("no split of the removal set produces the target minor")]
    NotMinor,
    #[error("the target equals the polymatroid itself")]
    SameAsTarget,
    #[error("removal set has {n} elements, enumeration is limited to {max}")]
    TooManyRemovals { n: usize, max: usize },
    #[error("no single deletion or contraction keeps connectivity and the minor")]
    Counterexample {
        m: Box<Polymatroid>,
        n: Box<Polymatroid>,
    },
    #[error(transparent)]
    Pm(#[from] PmError),
}

/// Removal set of `n` inside `m`, and `n`'s table aligned to the order in
/// which the surviving elements appear in `m`.
struct Target {
    removal: Mask,
    ranks: Vec<u32>,
}

impl Target {
    fn new(m: &Polymatroid, n: &Polymatroid) -> Result<Self, ChainError> {
        let mut keep: Mask = 0;
        for l in n.ground_set() {
            let i = m
                .index_of(l.as_str())
                .ok_or_else(|| ChainError::NotSubset(l.to_string()))?;
            keep |= 1 << i;
        }
        let order: Vec<ElementId> = bits(keep).map(|i| m.ground_set()[i].clone()).collect();
        let aligned = n.reordered(&order)?;
        Ok(Target {
            removal: m.full_mask() & !keep,
            ranks: aligned.ranks().to_vec(),
        })
    }

    /// Whether minor(m, D, removal − D) equals the target.
    fn matches(&self, m: &Polymatroid, scatter: &[Mask], delete: Mask) -> bool {
        let contract = self.removal & !delete;
        let base = m.rank_of(contract);
        scatter
            .iter()
            .zip(&self.ranks)
            .all(|(&s, &want)| m.rank_of(s | contract) as i64 - base as i64 == want as i64)
    }

    /// Every deletion set D ⊆ removal with minor(m, D, removal − D) = target.
    fn witnesses(&self, m: &Polymatroid) -> Vec<Mask> {
        let keep = m.full_mask() & !self.removal;
        let pos: Vec<usize> = bits(keep).collect();
        let scatter: Vec<Mask> = (0u32..1 << pos.len())
            .map(|s| bits(s).fold(0, |acc, j| acc | (1 << pos[j])))
            .collect();
        let mut out: Vec<Mask> = submasks(self.removal)
            .filter(|&d| self.matches(m, &scatter, d))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Deleted and contracted labels producing a minor.
pub type Witness = (Vec<ElementId>, Vec<ElementId>);

/// Whether `n` is a labeled minor of `m`; the witness (D, C) is the least one
/// comparing D first, then C, by sorted label sequence.
pub fn has_labeled_minor(
    m: &Polymatroid,
    n: &Polymatroid,
) -> Result<Option<Witness>, ChainError> {
    let target = Target::new(m, n)?;
    let best = target
        .witnesses(m)
        .into_iter()
        .map(|d| (m.labels_of(d), m.labels_of(target.removal & !d)))
        .min();
    Ok(best)
}

fn check_pair(m: &Polymatroid, n: &Polymatroid) -> Result<Target, ChainError> {
    let target = Target::new(m, n)?;
    if !m.is_connected() {
        return Err(ChainError::NotConnected("M"));
    }
    if !n.is_connected() {
        return Err(ChainError::NotConnected("N"));
    }
    Ok(target)
}

/// One removal keeping the polymatroid connected with `n` as a minor.
///
/// Elements are tried in label order, deletion before contraction. When no
/// step qualifies the pair is returned as [`ChainError::Counterexample`].
pub fn find_removal_step(m: &Polymatroid, n: &Polymatroid) -> Result<RemovalStep, ChainError> {
    let target = check_pair(m, n)?;
    if target.removal == 0 {
        return Err(if m.equals(n) {
            ChainError::SameAsTarget
        } else {
            ChainError::NotMinor
        });
    }
    let witnesses = target.witnesses(m);
    if witnesses.is_empty() {
        return Err(ChainError::NotMinor);
    }
    step_from_witnesses(m, target.removal, &witnesses).ok_or_else(|| ChainError::Counterexample {
        m: Box::new(m.clone()),
        n: Box::new(n.clone()),
    })
}

fn step_from_witnesses(m: &Polymatroid, removal: Mask, witnesses: &[Mask]) -> Option<RemovalStep> {
    let mut candidates: Vec<usize> = bits(removal).collect();
    candidates.sort_by(|&a, &b| m.ground_set()[a].cmp(&m.ground_set()[b]));
    for i in candidates {
        let bit: Mask = 1 << i;
        for op in RemovalOp::BOTH {
            let keeps_minor = witnesses.iter().any(|&d| match op {
                RemovalOp::Delete => d & bit != 0,
                RemovalOp::Contract => d & bit == 0,
            });
            if keeps_minor && op.apply(m, bit).is_connected() {
                return Some(RemovalStep::new(op, m.ground_set()[i].clone()));
            }
        }
    }
    None
}

/// Repeats [`find_removal_step`] until the ground set is E(N).
pub fn find_admissible_chain(m: &Polymatroid, n: &Polymatroid) -> Result<RemovalChain, ChainError> {
    check_pair(m, n)?;
    let mut chain = RemovalChain {
        steps: Vec::new(),
        intermediates_connected: Vec::new(),
    };
    let mut cur = m.clone();
    while cur.len() > n.len() {
        let step = find_removal_step(&cur, n)?;
        cur = step.apply(&cur)?;
        chain.intermediates_connected.push(cur.is_connected());
        chain.steps.push(step);
    }
    if !cur.equals(n) {
        return Err(ChainError::NotMinor);
    }
    Ok(chain)
}

type StateKey = (Mask, Vec<u32>);

/// Backtracking over connected intermediates. States are keyed by the
/// surviving element set and the full rank table, since different step
/// sequences often reach the same minor.
struct Search<'a> {
    m: &'a Polymatroid,
    target: Target,
    /// Removal-set positions in label order.
    order: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(m: &'a Polymatroid, n: &Polymatroid) -> Result<Self, ChainError> {
        let target = check_pair(m, n)?;
        let size = target.removal.count_ones() as usize;
        if size > MAX_ENUMERATED_REMOVALS {
            return Err(ChainError::TooManyRemovals {
                n: size,
                max: MAX_ENUMERATED_REMOVALS,
            });
        }
        if target.witnesses(m).is_empty() {
            return Err(ChainError::NotMinor);
        }
        let mut order: Vec<usize> = bits(target.removal).collect();
        order.sort_by(|&a, &b| m.ground_set()[a].cmp(&m.ground_set()[b]));
        Ok(Search { m, target, order })
    }

    /// Connected one-step successors of a state, in canonical step order.
    fn successors(&self, remaining: Mask, cur: &Polymatroid) -> Vec<(RemovalStep, Mask, Polymatroid)> {
        let mut out = Vec::new();
        for &i in &self.order {
            if remaining & (1 << i) == 0 {
                continue;
            }
            let label = &self.m.ground_set()[i];
            let bit = cur.element_mask(label.as_str()).expect("surviving element");
            for op in RemovalOp::BOTH {
                let next = op.apply(cur, bit);
                if next.is_connected() {
                    out.push((RemovalStep::new(op, label.clone()), remaining & !(1 << i), next));
                }
            }
        }
        out
    }

    fn at_target(&self, cur: &Polymatroid) -> bool {
        cur.ranks() == self.target.ranks.as_slice()
    }

    fn count(&self, remaining: Mask, cur: &Polymatroid, memo: &mut HashMap<StateKey, u64>) -> u64 {
        if remaining == 0 {
            return self.at_target(cur) as u64;
        }
        let key = (remaining, cur.ranks().to_vec());
        if let Some(&c) = memo.get(&key) {
            return c;
        }
        let total = self
            .successors(remaining, cur)
            .into_iter()
            .map(|(_, rest, next)| self.count(rest, &next, memo))
            .sum();
        memo.insert(key, total);
        total
    }

    fn sequences(
        &self,
        remaining: Mask,
        cur: &Polymatroid,
        memo: &mut HashMap<StateKey, Rc<Vec<Vec<RemovalStep>>>>,
    ) -> Rc<Vec<Vec<RemovalStep>>> {
        if remaining == 0 {
            return Rc::new(if self.at_target(cur) { vec![vec![]] } else { vec![] });
        }
        let key = (remaining, cur.ranks().to_vec());
        if let Some(found) = memo.get(&key) {
            return Rc::clone(found);
        }
        let mut out = Vec::new();
        for (step, rest, next) in self.successors(remaining, cur) {
            for suffix in self.sequences(rest, &next, memo).iter() {
                let mut seq = Vec::with_capacity(suffix.len() + 1);
                seq.push(step.clone());
                seq.extend(suffix.iter().cloned());
                out.push(seq);
            }
        }
        let out = Rc::new(out);
        memo.insert(key, Rc::clone(&out));
        out
    }

    fn element_orders(
        &self,
        remaining: Mask,
        cur: &Polymatroid,
        memo: &mut HashMap<StateKey, Rc<BTreeSet<Vec<ElementId>>>>,
    ) -> Rc<BTreeSet<Vec<ElementId>>> {
        if remaining == 0 {
            let mut s = BTreeSet::new();
            if self.at_target(cur) {
                s.insert(Vec::new());
            }
            return Rc::new(s);
        }
        let key = (remaining, cur.ranks().to_vec());
        if let Some(found) = memo.get(&key) {
            return Rc::clone(found);
        }
        let mut out = BTreeSet::new();
        for (step, rest, next) in self.successors(remaining, cur) {
            for suffix in self.element_orders(rest, &next, memo).iter() {
                let mut seq = Vec::with_capacity(suffix.len() + 1);
                seq.push(step.element.clone());
                seq.extend(suffix.iter().cloned());
                out.insert(seq);
            }
        }
        let out = Rc::new(out);
        memo.insert(key, Rc::clone(&out));
        out
    }
}

/// Every constrained admissible ordering: step sequences removing E(M) − E(N)
/// one element at a time with a connected result after each step, ending at
/// N. Sorted step by step, elements by label and deletion first.
pub fn enumerate_constrained_orderings(
    m: &Polymatroid,
    n: &Polymatroid,
) -> Result<Vec<Vec<RemovalStep>>, ChainError> {
    let search = Search::new(m, n)?;
    let mut memo = HashMap::new();
    let all = search.sequences(search.target.removal, m, &mut memo);
    Ok(all.as_ref().clone())
}

/// Number of constrained admissible orderings, without listing them.
pub fn count_constrained_orderings(m: &Polymatroid, n: &Polymatroid) -> Result<u64, ChainError> {
    let search = Search::new(m, n)?;
    let mut memo = HashMap::new();
    Ok(search.count(search.target.removal, m, &mut memo))
}

/// Every admissible element ordering: orders of E(M) − E(N) for which some
/// choice of deletion or contraction at each step keeps every intermediate
/// connected and ends at N. Sorted lexicographically.
pub fn enumerate_admissible_orderings(
    m: &Polymatroid,
    n: &Polymatroid,
) -> Result<Vec<Vec<ElementId>>, ChainError> {
    let search = Search::new(m, n)?;
    let mut memo = HashMap::new();
    let all = search.element_orders(search.target.removal, m, &mut memo);
    Ok(all.iter().cloned().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{canonical_counterexample, uniform, unique_ordering_default};

    fn id(l: &str) -> ElementId {
        ElementId::new(l).unwrap()
    }

    fn line_z() -> Polymatroid {
        Polymatroid::from_labels(&["z"], 2, |m| 2 * m).unwrap()
    }

    fn point_z() -> Polymatroid {
        Polymatroid::from_labels(&["z"], 2, |m| m).unwrap()
    }

    #[test]
    fn labeled_minor_witnesses() {
        let m = canonical_counterexample();
        assert_eq!(has_labeled_minor(&m, &m).unwrap(), Some((vec![], vec![])));
        assert_eq!(
            has_labeled_minor(&m, &line_z()).unwrap(),
            Some((vec![id("x"), id("y")], vec![]))
        );
        let (d, c) = has_labeled_minor(&m, &point_z()).unwrap().unwrap();
        assert!(c.contains(&id("y")));
        assert_eq!((d, c), (vec![], vec![id("x"), id("y")]));
        let w = Polymatroid::from_labels(&["w"], 1, |m| m).unwrap();
        assert!(matches!(has_labeled_minor(&m, &w), Err(ChainError::NotSubset(_))));
        let rank3 = Polymatroid::from_labels(&["z"], 3, |m| 3 * m).unwrap();
        assert_eq!(has_labeled_minor(&m, &rank3).unwrap(), None);
    }

    #[test]
    fn removal_step_on_counterexample() {
        let m = canonical_counterexample();
        let step = find_removal_step(&m, &line_z()).unwrap();
        assert_eq!(step, RemovalStep::new(RemovalOp::Delete, id("x")));
        assert!(matches!(find_removal_step(&m, &m), Err(ChainError::SameAsTarget)));
    }

    #[test]
    fn removal_step_single_element_gap() {
        let u = uniform(2, 4, &["a", "b", "c", "d"]).unwrap();
        let n = u.contract_labels(&["d"]).unwrap();
        // U_{1,3} is connected; contraction is the only way down
        assert_eq!(
            find_removal_step(&u, &n).unwrap(),
            RemovalStep::new(RemovalOp::Contract, id("d"))
        );
        let n2 = u.delete_labels(&["d"]).unwrap();
        assert_eq!(
            find_removal_step(&u, &n2).unwrap(),
            RemovalStep::new(RemovalOp::Delete, id("d"))
        );
    }

    #[test]
    fn precondition_errors() {
        let m = canonical_counterexample();
        let dy = m.delete_labels(&["y"]).unwrap();
        assert!(matches!(
            find_removal_step(&dy, &line_z()),
            Err(ChainError::NotConnected("M"))
        ));
        let rank3 = Polymatroid::from_labels(&["z"], 3, |m| 3 * m).unwrap();
        assert!(matches!(find_removal_step(&m, &rank3), Err(ChainError::NotMinor)));
    }

    #[test]
    fn chain_on_counterexample() {
        let m = canonical_counterexample();
        let chain = find_admissible_chain(&m, &line_z()).unwrap();
        let text: Vec<String> = chain.steps.iter().map(|s| s.to_string()).collect();
        assert_eq!(text, vec!["delete x", "delete y"]);
        assert_eq!(chain.intermediates_connected, vec![true, true]);
        let trail = chain.replay(&m).unwrap();
        assert!(trail.last().unwrap().equals(&line_z()));
        assert!(trail.iter().all(Polymatroid::is_connected));

        let empty = find_admissible_chain(&m, &m).unwrap();
        assert!(empty.steps.is_empty());
    }

    #[test]
    fn chain_on_forced_family() {
        let m = unique_ordering_default(2).unwrap();
        let n = uniform(2, 3, &["a", "b", "c"]).unwrap();
        let chain = find_admissible_chain(&m, &n).unwrap();
        let text: Vec<String> = chain.steps.iter().map(|s| s.to_string()).collect();
        assert_eq!(text, vec!["delete f1", "delete f2"]);
    }

    #[test]
    fn orderings_on_counterexample() {
        let m = canonical_counterexample();
        let orders = enumerate_admissible_orderings(&m, &line_z()).unwrap();
        assert!(!orders.contains(&vec![id("y"), id("x")]));
        assert_eq!(orders, vec![vec![id("x"), id("y")]]);
        let constrained = enumerate_constrained_orderings(&m, &line_z()).unwrap();
        assert!(constrained.len() >= 2);
        assert_eq!(
            count_constrained_orderings(&m, &line_z()).unwrap(),
            constrained.len() as u64
        );
        let mut sorted = constrained.clone();
        sorted.sort();
        assert_eq!(sorted, constrained);
    }

    #[test]
    fn orderings_single_removal() {
        let u = uniform(2, 4, &["a", "b", "c", "d"]).unwrap();
        let n = u.delete_labels(&["d"]).unwrap();
        assert_eq!(enumerate_admissible_orderings(&u, &n).unwrap(), vec![vec![id("d")]]);
        assert_eq!(count_constrained_orderings(&u, &n).unwrap(), 1);
        assert_eq!(count_constrained_orderings(&u, &u).unwrap(), 1);
    }

    #[test]
    fn forced_family_orderings() {
        let n = uniform(2, 3, &["a", "b", "c"]).unwrap();
        for len in 1..=3 {
            let m = unique_ordering_default(len).unwrap();
            let orders = enumerate_admissible_orderings(&m, &n).unwrap();
            let expected: Vec<ElementId> = (1..=len).map(|i| id(&format!("f{i}"))).collect();
            assert_eq!(orders, vec![expected]);
            let count = count_constrained_orderings(&m, &n).unwrap();
            if len >= 2 {
                assert!(count >= 2, "len {len}: {count}");
            } else {
                assert_eq!(count, 1);
            }
        }
        let m = unique_ordering_default(2).unwrap();
        let seqs = enumerate_constrained_orderings(&m, &n).unwrap();
        let del_del = vec![
            RemovalStep::new(RemovalOp::Delete, id("f1")),
            RemovalStep::new(RemovalOp::Delete, id("f2")),
        ];
        let con_del = vec![
            RemovalStep::new(RemovalOp::Contract, id("f1")),
            RemovalStep::new(RemovalOp::Delete, id("f2")),
        ];
        assert!(seqs.contains(&del_del));
        assert!(seqs.contains(&con_del));
    }

    #[test]
    fn enumeration_limit() {
        let labels: Vec<String> = (0..10).map(|i| format!("e{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let u = uniform(5, 10, &refs).unwrap();
        let n1 = u.restrict(0b1).unwrap();
        assert!(matches!(
            count_constrained_orderings(&u, &n1),
            Err(ChainError::TooManyRemovals { n: 9, max: 8 })
        ));
    }
}
