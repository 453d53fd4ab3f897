use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::element::join_labels;
use crate::{ElementId, PmError};

/// Subset of a ground set, bit `i` standing for the `i`-th element.
pub type Mask = u32;

/// Largest ground set a dense rank table is built for.
pub const MAX_ELEMENTS: usize = 16;

/// An integer k-polymatroid given by its full rank table.
///
/// The table is indexed by subset bitmask in ground-set order. Values are
/// immutable after construction; every operation returns a new polymatroid.
/// Construction only checks the structure (labels, table size). Use
/// [`Polymatroid::validate`] or [`Polymatroid::validated`] for the rank axioms;
/// the remaining operations assume a valid table.
#[derive(Clone)]
pub struct Polymatroid {
    labels: Vec<ElementId>,
    k: u32,
    ranks: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    /// r(∅) = 0
    Normalized,
    /// r(X) ≤ r(X ∪ e)
    Monotone,
    /// r(X ∪ a) + r(X ∪ b) ≥ r(X ∪ {a,b}) + r(X)
    Submodular,
    /// r({e}) ≤ k
    SingletonBound,
}

/// One violated axiom instance together with the subsets witnessing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub subsets: Vec<Vec<ElementId>>,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.axiom {
            Axiom::Normalized => "normalized",
            Axiom::Monotone => "monotone",
            Axiom::Submodular => "submodular",
            Axiom::SingletonBound => "singleton-bound",
        };
        write!(f, "{name}:")?;
        for s in &self.subsets {
            write!(f, " {{{}}}", join_labels(s))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementKind {
    Loop,
    Point,
    Line,
    Higher(u32),
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementKind::Loop => f.write_str("loop"),
            ElementKind::Point => f.write_str("point"),
            ElementKind::Line => f.write_str("line"),
            ElementKind::Higher(r) => write!(f, "rank-{r}"),
        }
    }
}

/// A nonempty proper subset with λ = 0, witnessing disconnection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationCertificate {
    /// Sorted labels of the separating side.
    pub side: Vec<ElementId>,
}

impl Polymatroid {
    /// Builds a polymatroid from a full rank table, checking structure only.
    pub fn from_table(labels: Vec<ElementId>, k: u32, ranks: Vec<u32>) -> Result<Self, PmError> {
        check_labels(&labels)?;
        if k == 0 {
            return Err(PmError::ZeroBound);
        }
        let expected = 1usize << labels.len();
        if ranks.len() != expected {
            return Err(PmError::TableSize {
                expected,
                found: ranks.len(),
            });
        }
        Ok(Polymatroid { labels, k, ranks })
    }

    /// Builds a polymatroid by evaluating `rank` on every subset mask.
    pub fn from_fn(
        labels: Vec<ElementId>,
        k: u32,
        rank: impl FnMut(Mask) -> u32,
    ) -> Result<Self, PmError> {
        check_labels(&labels)?;
        let ranks = (0..1u32 << labels.len()).map(rank).collect();
        Self::from_table(labels, k, ranks)
    }

    /// Convenience constructor from string labels.
    pub fn from_labels(
        labels: &[&str],
        k: u32,
        rank: impl FnMut(Mask) -> u32,
    ) -> Result<Self, PmError> {
        let labels = labels
            .iter()
            .map(|l| ElementId::new(l))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_fn(labels, k, rank)
    }

    /// The polymatroid with an empty ground set.
    pub fn empty(k: u32) -> Self {
        Polymatroid {
            labels: Vec::new(),
            k: k.max(1),
            ranks: vec![0],
        }
    }

    /// Returns `self` if it satisfies every axiom, otherwise the violations.
    pub fn validated(self) -> Result<Self, PmError> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(PmError::Axioms(violations))
        }
    }

    pub fn ground_set(&self) -> &[ElementId] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn k_bound(&self) -> u32 {
        self.k
    }

    /// Same rank table with a different k bound.
    pub fn with_k_bound(&self, k: u32) -> Result<Self, PmError> {
        if k == 0 {
            return Err(PmError::ZeroBound);
        }
        Ok(Polymatroid {
            k,
            ..self.clone()
        })
    }

    /// Largest singleton rank, the least k for which the table is a k-polymatroid.
    pub fn effective_k(&self) -> u32 {
        (0..self.len()).map(|i| self.ranks[1 << i]).max().unwrap_or(0)
    }

    pub fn full_mask(&self) -> Mask {
        full(self.len())
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.as_str() == label)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index_of(label).is_some()
    }

    /// Converts labels into a subset mask, rejecting unknown labels.
    pub fn subset<I, S>(&self, labels: I) -> Result<Mask, PmError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut mask = 0;
        for l in labels {
            let l = l.as_ref();
            let i = self
                .index_of(l)
                .ok_or_else(|| PmError::UnknownLabel(l.to_string()))?;
            mask |= 1 << i;
        }
        Ok(mask)
    }

    pub fn element_mask(&self, label: &str) -> Result<Mask, PmError> {
        self.subset([label])
    }

    /// Labels of a subset, sorted.
    pub fn labels_of(&self, mask: Mask) -> Vec<ElementId> {
        let mut out: Vec<ElementId> = bits(mask).map(|i| self.labels[i].clone()).collect();
        out.sort();
        out
    }

    /// Comma-joined sorted labels of a subset.
    pub fn subset_key(&self, mask: Mask) -> String {
        join_labels(&self.labels_of(mask))
    }

    /// Compares two subsets by their sorted label sequences.
    pub fn lex_cmp(&self, a: Mask, b: Mask) -> Ordering {
        self.labels_of(a).cmp(&self.labels_of(b))
    }

    /// Element positions ordered by label.
    pub fn lex_positions(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        idx
    }

    pub fn check_mask(&self, mask: Mask) -> Result<Mask, PmError> {
        if mask & !self.full_mask() != 0 {
            Err(PmError::MaskOutOfRange(mask))
        } else {
            Ok(mask)
        }
    }

    /// Rank of a subset given as a mask.
    #[inline]
    pub fn rank_of(&self, mask: Mask) -> u32 {
        self.ranks[mask as usize]
    }

    /// Rank of a subset given by labels.
    pub fn rank<I, S>(&self, labels: I) -> Result<u32, PmError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Ok(self.rank_of(self.subset(labels)?))
    }

    pub fn total_rank(&self) -> u32 {
        self.rank_of(self.full_mask())
    }

    /// Lists every violated axiom instance; empty iff the table is a valid
    /// k-polymatroid.
    ///
    /// Monotonicity and submodularity are checked in their elementary forms
    /// (single-element steps and diminishing returns on pairs), which are
    /// equivalent to the general statements over all pairs of subsets.
    pub fn validate(&self) -> Vec<AxiomViolation> {
        let n = self.len();
        let r = &self.ranks;
        let mut out = Vec::new();
        if r[0] != 0 {
            out.push(AxiomViolation {
                axiom: Axiom::Normalized,
                subsets: vec![vec![]],
            });
        }
        for i in 0..n {
            if r[1 << i] > self.k {
                out.push(AxiomViolation {
                    axiom: Axiom::SingletonBound,
                    subsets: vec![self.labels_of(1 << i)],
                });
            }
        }
        for x in 0..=self.full_mask() {
            for a in 0..n {
                let ba = 1 << a;
                if x & ba != 0 {
                    continue;
                }
                if r[x as usize] > r[(x | ba) as usize] {
                    out.push(AxiomViolation {
                        axiom: Axiom::Monotone,
                        subsets: vec![self.labels_of(x), self.labels_of(x | ba)],
                    });
                }
                for b in a + 1..n {
                    let bb = 1 << b;
                    if x & bb != 0 {
                        continue;
                    }
                    let lhs = r[(x | ba) as usize] as i64 + r[(x | bb) as usize] as i64;
                    let rhs = r[(x | ba | bb) as usize] as i64 + r[x as usize] as i64;
                    if lhs < rhs {
                        out.push(AxiomViolation {
                            axiom: Axiom::Submodular,
                            subsets: vec![self.labels_of(x | ba), self.labels_of(x | bb)],
                        });
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Deletes and contracts in one pass: ground set E − (D ∪ C), rank
    /// X ↦ r(X ∪ C) − r(C).
    pub fn minor(&self, delete: Mask, contract: Mask) -> Result<Polymatroid, PmError> {
        self.check_mask(delete)?;
        self.check_mask(contract)?;
        if delete & contract != 0 {
            return Err(PmError::Overlap {
                what: "deletion and contraction sets",
                labels: self.subset_key(delete & contract),
            });
        }
        Ok(self.minor_unchecked(delete, contract))
    }

    pub(crate) fn minor_unchecked(&self, delete: Mask, contract: Mask) -> Polymatroid {
        let removed = delete | contract;
        let keep: Vec<usize> = (0..self.len()).filter(|i| removed & (1 << i) == 0).collect();
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        let base = self.ranks[contract as usize];
        let size = 1usize << keep.len();
        let mut scatter = vec![0 as Mask; size];
        let mut ranks = vec![0u32; size];
        for s in 1..size {
            let low = s.trailing_zeros() as usize;
            scatter[s] = scatter[s & (s - 1)] | (1 << keep[low]);
            ranks[s] = self.ranks[(scatter[s] | contract) as usize].saturating_sub(base);
        }
        Polymatroid {
            labels,
            k: self.k,
            ranks,
        }
    }

    pub fn delete(&self, t: Mask) -> Result<Polymatroid, PmError> {
        self.minor(t, 0)
    }

    pub fn contract(&self, t: Mask) -> Result<Polymatroid, PmError> {
        self.minor(0, t)
    }

    /// M|X, the deletion of the complement of X.
    pub fn restrict(&self, x: Mask) -> Result<Polymatroid, PmError> {
        self.check_mask(x)?;
        Ok(self.minor_unchecked(self.full_mask() & !x, 0))
    }

    pub fn delete_labels(&self, labels: &[&str]) -> Result<Polymatroid, PmError> {
        self.delete(self.subset(labels)?)
    }

    pub fn contract_labels(&self, labels: &[&str]) -> Result<Polymatroid, PmError> {
        self.contract(self.subset(labels)?)
    }

    /// ⊓(X, Y) = r(X) + r(Y) − r(X ∪ Y).
    pub fn local_connectivity(&self, x: Mask, y: Mask) -> u32 {
        let v = self.local_connectivity_raw(x, y);
        debug_assert!(v >= 0, "negative local connectivity on an invalid table");
        v.max(0) as u32
    }

    /// ⊓ computed in signed arithmetic, meaningful on invalid tables too.
    pub fn local_connectivity_raw(&self, x: Mask, y: Mask) -> i64 {
        self.rank_of(x) as i64 + self.rank_of(y) as i64 - self.rank_of(x | y) as i64
    }

    /// λ(X) = r(X) + r(E − X) − r(E).
    pub fn lambda(&self, x: Mask) -> u32 {
        self.local_connectivity(x, self.full_mask() & !x)
    }

    /// True iff no nonempty proper subset has λ = 0. Empty and single-element
    /// polymatroids are connected, the defining condition being vacuous.
    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n <= 1 {
            return true;
        }
        let fullm = self.full_mask();
        let total = self.ranks[fullm as usize];
        // Separators come in complementary pairs; only sides containing the
        // last element need checking.
        let top = 1 << (n - 1);
        (0..top).all(|low| {
            let x = low | top;
            x == fullm || self.ranks[x as usize] + self.ranks[(fullm ^ x) as usize] != total
        })
    }

    /// The lexicographically least separating side, or `None` when connected.
    pub fn separation(&self) -> Option<SeparationCertificate> {
        if self.is_connected() {
            return None;
        }
        let fullm = self.full_mask();
        let best = (1..fullm)
            .filter(|&x| self.lambda(x) == 0)
            .map(|x| self.labels_of(x))
            .min()?;
        Some(SeparationCertificate { side: best })
    }

    /// Component containing each element as a mask, by intersecting all
    /// separators through it.
    fn component_masks(&self) -> Vec<Mask> {
        let n = self.len();
        let fullm = self.full_mask();
        let mut comp = vec![fullm; n];
        if self.is_connected() {
            return comp;
        }
        for x in 1..fullm {
            if self.lambda(x) == 0 {
                for (i, c) in comp.iter_mut().enumerate() {
                    if x & (1 << i) != 0 {
                        *c &= x;
                    }
                }
            }
        }
        comp
    }

    /// Partition of the ground set into components, as masks in canonical
    /// order (blocks compared by sorted label sequence).
    pub fn component_blocks(&self) -> Vec<Mask> {
        let mut blocks: Vec<Mask> = self.component_masks();
        blocks.sort_unstable();
        blocks.dedup();
        blocks.sort_by(|&a, &b| self.lex_cmp(a, b));
        blocks
    }

    /// Components as sorted label lists, in canonical order.
    pub fn components(&self) -> Vec<Vec<ElementId>> {
        self.component_blocks()
            .into_iter()
            .map(|b| self.labels_of(b))
            .collect()
    }

    /// S spans T when r(S ∪ T) = r(S).
    pub fn spans(&self, s: Mask, t: Mask) -> bool {
        self.rank_of(s | t) == self.rank_of(s)
    }

    pub fn element_kind(&self, label: &str) -> Result<ElementKind, PmError> {
        let m = self.element_mask(label)?;
        Ok(match self.rank_of(m) {
            0 => ElementKind::Loop,
            1 => ElementKind::Point,
            2 => ElementKind::Line,
            r => ElementKind::Higher(r),
        })
    }

    /// Non-loops p, q are parallel when r({p,q}) = r({p}) = r({q}).
    pub fn are_parallel(&self, p: &str, q: &str) -> Result<bool, PmError> {
        let mp = self.element_mask(p)?;
        let mq = self.element_mask(q)?;
        if mp == mq {
            return Err(PmError::Precondition(format!(
                "parallel test needs distinct elements, got {p:?} twice"
            )));
        }
        for (l, m) in [(p, mp), (q, mq)] {
            if self.rank_of(m) == 0 {
                return Err(PmError::LoopArgument(l.to_string()));
            }
        }
        let rp = self.rank_of(mp);
        Ok(self.rank_of(mp | mq) == rp && rp == self.rank_of(mq))
    }

    /// Same label set and identical ranks on every subset; ground-set order
    /// and k bound are ignored.
    pub fn equals(&self, other: &Polymatroid) -> bool {
        if self.len() != other.len() {
            return false;
        }
        if self.labels == other.labels {
            return self.ranks == other.ranks;
        }
        let Some(perm) = self.alignment(other) else {
            return false;
        };
        (0..=self.full_mask()).all(|m| self.ranks[m as usize] == other.ranks[map_mask(m, &perm) as usize])
    }

    /// For each position in `self`, the position of the same label in `other`.
    fn alignment(&self, other: &Polymatroid) -> Option<Vec<usize>> {
        self.labels.iter().map(|l| other.index_of(l.as_str())).collect()
    }

    /// Same polymatroid with the ground set listed in `order` (a permutation
    /// of the current labels).
    pub fn reordered(&self, order: &[ElementId]) -> Result<Polymatroid, PmError> {
        if order.len() != self.len() {
            return Err(PmError::Precondition(format!(
                "reordering needs {} labels, got {}",
                self.len(),
                order.len()
            )));
        }
        let pos: Vec<usize> = order
            .iter()
            .map(|l| self.index_of(l.as_str()).ok_or_else(|| PmError::UnknownLabel(l.to_string())))
            .collect::<Result<_, _>>()?;
        check_labels(order)?;
        let ranks = (0..=full(order.len()))
            .map(|m| self.ranks[map_mask(m, &pos) as usize])
            .collect();
        Ok(Polymatroid {
            labels: order.to_vec(),
            k: self.k,
            ranks,
        })
    }

    /// Same polymatroid with labels in sorted order.
    pub fn canonical(&self) -> Polymatroid {
        let mut order = self.labels.clone();
        order.sort();
        if order == self.labels {
            return self.clone();
        }
        self.reordered(&order).expect("permutation of own labels")
    }

    /// Key identifying the polymatroid up to [`Polymatroid::equals`].
    pub fn canonical_key(&self) -> CanonicalKey {
        let c = self.canonical();
        CanonicalKey {
            labels: c.labels,
            ranks: c.ranks,
        }
    }

    /// Renames elements; `rename` must be injective on the ground set.
    pub fn relabeled(&self, mut rename: impl FnMut(&ElementId) -> ElementId) -> Result<Self, PmError> {
        let labels: Vec<ElementId> = self.labels.iter().map(&mut rename).collect();
        check_labels(&labels)?;
        Ok(Polymatroid {
            labels,
            k: self.k,
            ranks: self.ranks.clone(),
        })
    }
}

/// Hashable canonical form: sorted labels plus the rank table in that order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    pub labels: Vec<ElementId>,
    pub ranks: Vec<u32>,
}

impl PartialEq for Polymatroid {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Eq for Polymatroid {}

impl Hash for Polymatroid {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_key().hash(state);
    }
}

impl fmt::Debug for Polymatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for s in 0..=self.full_mask() {
            m.entry(&format_args!("{{{}}}", self.subset_key(s)), &self.ranks[s as usize]);
        }
        m.finish()
    }
}

pub(crate) fn full(n: usize) -> Mask {
    if n == 0 {
        0
    } else {
        Mask::MAX >> (32 - n)
    }
}

/// Positions of the set bits, ascending.
pub fn bits(mask: Mask) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// All submasks of `mask`, including 0 and `mask` itself.
pub fn submasks(mask: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

fn map_mask(m: Mask, perm: &[usize]) -> Mask {
    bits(m).fold(0, |acc, i| acc | (1 << perm[i]))
}

fn check_labels(labels: &[ElementId]) -> Result<(), PmError> {
    if labels.len() > MAX_ELEMENTS {
        return Err(PmError::TooLarge {
            n: labels.len(),
            max: MAX_ELEMENTS,
        });
    }
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(PmError::DuplicateLabel(l.to_string()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{canonical_counterexample, direct_sum, uniform};

    fn counterexample() -> Polymatroid {
        canonical_counterexample()
    }

    #[test]
    fn bit_helpers() {
        assert_eq!(full(0), 0);
        assert_eq!(full(3), 0b111);
        assert_eq!(full(32), u32::MAX);
        assert_eq!(bits(0b1010).collect::<Vec<_>>(), vec![1, 3]);
        let mut subs: Vec<Mask> = submasks(0b101).collect();
        subs.sort();
        assert_eq!(subs, vec![0, 1, 4, 5]);
    }

    #[test]
    fn validate_catches_each_axiom() {
        let zero = Polymatroid::from_labels(&["a", "b"], 1, |_| 0).unwrap();
        assert!(zero.validate().is_empty());

        let big = Polymatroid::from_labels(&["a"], 2, |m| if m == 0 { 0 } else { 3 }).unwrap();
        let v = big.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].axiom, Axiom::SingletonBound);
        assert_eq!(v[0].subsets, vec![vec![ElementId::new("a").unwrap()]]);

        let shifted = Polymatroid::from_labels(&["a"], 2, |_| 1).unwrap();
        assert!(shifted.validate().iter().any(|v| v.axiom == Axiom::Normalized));

        let drop = Polymatroid::from_table(
            vec![ElementId::new("a").unwrap(), ElementId::new("b").unwrap()],
            2,
            vec![0, 2, 1, 1],
        )
        .unwrap();
        assert!(drop.validate().iter().any(|v| v.axiom == Axiom::Monotone));

        // r = |X|^2 is supermodular
        let sq = Polymatroid::from_labels(&["a", "b"], 4, |m| m.count_ones().pow(2)).unwrap();
        assert!(sq.validate().iter().any(|v| v.axiom == Axiom::Submodular));
    }

    #[test]
    fn structural_errors() {
        let a = ElementId::new("a").unwrap();
        assert!(matches!(
            Polymatroid::from_table(vec![a.clone(), a.clone()], 1, vec![0; 4]),
            Err(PmError::DuplicateLabel(_))
        ));
        assert!(matches!(
            Polymatroid::from_table(vec![a.clone()], 1, vec![0; 3]),
            Err(PmError::TableSize { .. })
        ));
        assert!(matches!(
            Polymatroid::from_table(vec![a], 0, vec![0, 0]),
            Err(PmError::ZeroBound)
        ));
        let labels: Vec<String> = (0..17).map(|i| format!("e{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        assert!(matches!(
            Polymatroid::from_labels(&refs, 1, |_| 0),
            Err(PmError::TooLarge { .. })
        ));
    }

    #[test]
    fn rank_lookups() {
        let m = counterexample();
        assert_eq!(m.rank(["x", "z"]).unwrap(), 4);
        assert_eq!(m.rank(["x", "y", "z"]).unwrap(), 4);
        assert_eq!(m.rank_of(0), 0);
        assert!(matches!(m.rank(["w"]), Err(PmError::UnknownLabel(l)) if l == "w"));
    }

    #[test]
    fn minors_of_counterexample() {
        let m = counterexample();
        let cy = m.contract_labels(&["y"]).unwrap();
        assert_eq!(cy.rank(["x"]).unwrap(), 1);
        assert_eq!(cy.rank(["z"]).unwrap(), 1);
        assert_eq!(cy.rank(["x", "z"]).unwrap(), 2);

        let dy = m.delete_labels(&["y"]).unwrap();
        assert_eq!(dy.rank(["x", "z"]).unwrap(), 4);
        assert_eq!(dy.rank(["x"]).unwrap(), 2);

        assert!(m.delete(0).unwrap().equals(&m));
        assert!(m.minor(0, 0).unwrap().equals(&m));

        let z_point = m.minor(m.subset(["x"]).unwrap(), m.subset(["y"]).unwrap()).unwrap();
        assert_eq!(z_point.len(), 1);
        assert_eq!(z_point.rank(["z"]).unwrap(), 1);

        let z_line = m.minor(m.subset(["x", "y"]).unwrap(), 0).unwrap();
        assert_eq!(z_line.rank(["z"]).unwrap(), 2);

        assert!(matches!(
            m.minor(m.subset(["x"]).unwrap(), m.subset(["x", "y"]).unwrap()),
            Err(PmError::Overlap { .. })
        ));
        assert!(matches!(m.delete(0b1000), Err(PmError::MaskOutOfRange(_))));
    }

    #[test]
    fn connectivity_values() {
        let m = counterexample();
        let x = m.subset(["x"]).unwrap();
        let y = m.subset(["y"]).unwrap();
        let z = m.subset(["z"]).unwrap();
        assert_eq!(m.local_connectivity(x, z), 0);
        assert_eq!(m.local_connectivity(x, y), 1);
        assert_eq!(m.local_connectivity(0, y | z), 0);
        assert_eq!(m.lambda(y), 2);
        assert_eq!(m.lambda(x), 1);
        assert_eq!(m.lambda(z), 1);
        assert_eq!(m.lambda(0), 0);
        assert!(m.is_connected());
        assert_eq!(m.separation(), None);

        let dy = m.delete_labels(&["y"]).unwrap();
        assert!(!dy.is_connected());
        let cert = dy.separation().unwrap();
        assert_eq!(cert.side, vec![ElementId::new("x").unwrap()]);
        let cy = m.contract_labels(&["y"]).unwrap();
        assert!(!cy.is_connected());
        assert_eq!(cy.components().len(), 2);
    }

    #[test]
    fn trivial_connectivity_conventions() {
        assert!(Polymatroid::empty(1).is_connected());
        let single = Polymatroid::from_labels(&["a"], 2, |m| 2 * m).unwrap();
        assert!(single.is_connected());
        assert_eq!(single.components().len(), 1);
        assert!(Polymatroid::empty(1).components().is_empty());
    }

    #[test]
    fn components_of_direct_sum() {
        let m = counterexample();
        let w = uniform(1, 1, &["w"]).unwrap();
        let s = direct_sum(&m, &w).unwrap();
        let comps = s.components();
        let names: Vec<String> = comps.iter().map(|b| join_labels(b)).collect();
        assert_eq!(names, vec!["w", "x,y,z"]);
        assert_eq!(s.lambda(s.subset(["x", "y", "z"]).unwrap()), 0);
        let sep = s.separation().unwrap();
        assert_eq!(join_labels(&sep.side), "w");
    }

    #[test]
    fn spans_kind_parallel() {
        let m = counterexample();
        let full = m.full_mask();
        assert!(m.spans(full, 0));
        assert!(!m.spans(m.subset(["x"]).unwrap(), m.subset(["y"]).unwrap()));
        assert!(!m.spans(m.subset(["x", "y"]).unwrap(), m.subset(["z"]).unwrap()));
        assert_eq!(m.element_kind("x").unwrap(), ElementKind::Line);
        assert!(!m.are_parallel("x", "y").unwrap());

        let zero = Polymatroid::from_labels(&["a", "b"], 1, |_| 0).unwrap();
        assert_eq!(zero.element_kind("a").unwrap(), ElementKind::Loop);
        assert!(matches!(zero.are_parallel("a", "b"), Err(PmError::LoopArgument(_))));

        let u12 = uniform(1, 2, &["p", "q"]).unwrap();
        assert!(u12.are_parallel("p", "q").unwrap());
        assert!(matches!(u12.element_kind("r"), Err(PmError::UnknownLabel(_))));
    }

    #[test]
    fn equality_ignores_order_and_k() {
        let m = counterexample();
        let order: Vec<ElementId> = ["z", "x", "y"].iter().map(|l| ElementId::new(l).unwrap()).collect();
        let r = m.reordered(&order).unwrap();
        assert!(r.equals(&m));
        assert_eq!(r.rank(["x", "z"]).unwrap(), 4);
        assert!(m.with_k_bound(5).unwrap().equals(&m));
        assert!(!m.equals(&m.delete_labels(&["y"]).unwrap()));
        assert_eq!(r.canonical_key(), m.canonical_key());
    }
}
