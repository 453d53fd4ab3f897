//! Polymatroids built from polymatroids: sums, connections, extensions and
//! compressions, plus the small named families used throughout the crate.

use std::collections::HashSet;

use crate::polymatroid::{bits, full};
use crate::{ElementId, Mask, PmError, Polymatroid};

/// Two parts glued along a basepoint; reassembling them with [`two_sum`]
/// gives back the decomposed polymatroid.
#[derive(Clone, Debug)]
pub struct TwoSumDecomposition {
    /// Ground set X1 ∪ {p}.
    pub m1: Polymatroid,
    /// Ground set X2 ∪ {p}.
    pub m2: Polymatroid,
    pub basepoint: ElementId,
}

/// One block of a [`CompressionMap`]: a new element standing for a set of
/// matroid elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub label: ElementId,
    pub members: Vec<ElementId>,
}

/// A matroid together with a partition of its ground set into labeled blocks.
#[derive(Clone, Debug)]
pub struct CompressionMap {
    matroid: Polymatroid,
    blocks: Vec<Block>,
}

impl CompressionMap {
    pub fn new(matroid: Polymatroid, blocks: Vec<Block>) -> Result<Self, PmError> {
        if let Some(i) = (0..matroid.len()).find(|&i| matroid.rank_of(1 << i) > 1) {
            return Err(PmError::RankTooHigh {
                label: matroid.ground_set()[i].to_string(),
                rank: matroid.rank_of(1 << i),
                max: 1,
            });
        }
        let mut seen: Mask = 0;
        let mut names = HashSet::new();
        for b in &blocks {
            if !names.insert(b.label.clone()) {
                return Err(PmError::DuplicateLabel(b.label.to_string()));
            }
            if b.members.is_empty() {
                return Err(PmError::NotPartition(format!("block {} is empty", b.label)));
            }
            for m in &b.members {
                let bit = matroid.element_mask(m.as_str())?;
                if seen & bit != 0 {
                    return Err(PmError::NotPartition(format!("{m} lies in two blocks")));
                }
                seen |= bit;
            }
        }
        if seen != matroid.full_mask() {
            return Err(PmError::NotPartition(format!(
                "{{{}}} not covered",
                matroid.subset_key(matroid.full_mask() & !seen)
            )));
        }
        Ok(CompressionMap { matroid, blocks })
    }

    pub fn matroid(&self) -> &Polymatroid {
        &self.matroid
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }
}

/// r(A) = r1(A ∩ E1) + r2(A ∩ E2) on disjoint ground sets. Elements of `p1`
/// come first.
pub fn direct_sum(p1: &Polymatroid, p2: &Polymatroid) -> Result<Polymatroid, PmError> {
    let shared: Vec<&str> = p1
        .ground_set()
        .iter()
        .filter(|l| p2.contains(l.as_str()))
        .map(ElementId::as_str)
        .collect();
    if !shared.is_empty() {
        return Err(PmError::Overlap {
            what: "direct sum ground sets",
            labels: shared.join(","),
        });
    }
    let n1 = p1.len();
    let labels: Vec<ElementId> = p1.ground_set().iter().chain(p2.ground_set()).cloned().collect();
    let low = full(n1);
    Polymatroid::from_fn(labels, p1.k_bound().max(p2.k_bound()), |a| {
        p1.rank_of(a & low) + p2.rank_of(a >> n1)
    })
}

/// Layout shared by the parallel connection and the 2-sum: positions of the
/// basepoint and a map from combined masks to the two sides.
struct Glue {
    n1: usize,
    p1: usize,
    p2: usize,
    /// Positions in `p2` of the elements appended after E1.
    tail: Vec<usize>,
}

impl Glue {
    fn new(m1: &Polymatroid, m2: &Polymatroid, p: &str) -> Result<Self, PmError> {
        let p1 = m1
            .index_of(p)
            .ok_or_else(|| PmError::BasepointMissing(p.to_string()))?;
        let p2 = m2
            .index_of(p)
            .ok_or_else(|| PmError::BasepointMissing(p.to_string()))?;
        let shared: Vec<&str> = m1
            .ground_set()
            .iter()
            .filter(|l| l.as_str() != p && m2.contains(l.as_str()))
            .map(ElementId::as_str)
            .collect();
        if !shared.is_empty() {
            return Err(PmError::Overlap {
                what: "ground sets beyond the basepoint",
                labels: shared.join(","),
            });
        }
        let n = m1.len() + m2.len() - 1;
        if n > crate::MAX_ELEMENTS {
            return Err(PmError::TooLarge {
                n,
                max: crate::MAX_ELEMENTS,
            });
        }
        Ok(Glue {
            n1: m1.len(),
            p1,
            p2,
            tail: (0..m2.len()).filter(|&i| i != p2).collect(),
        })
    }

    fn split(&self, a: Mask) -> (Mask, Mask) {
        let a1 = a & full(self.n1);
        let mut a2 = 0;
        for (j, &pos) in self.tail.iter().enumerate() {
            if a & (1 << (self.n1 + j)) != 0 {
                a2 |= 1 << pos;
            }
        }
        if a1 & (1 << self.p1) != 0 {
            a2 |= 1 << self.p2;
        }
        (a1, a2)
    }
}

/// Parallel connection along the shared basepoint `p`:
/// r(A) = min{r1(A1) + r2(A2), r1(A1 ∪ p) + r2(A2 ∪ p) − r1({p})}
/// with Ai = A ∩ Ei. The ground set lists E1 and then E2 − p.
pub fn parallel_connection(
    m1: &Polymatroid,
    m2: &Polymatroid,
    p: &str,
) -> Result<Polymatroid, PmError> {
    let g = Glue::new(m1, m2, p)?;
    let bp1: Mask = 1 << g.p1;
    let bp2: Mask = 1 << g.p2;
    let (rp1, rp2) = (m1.rank_of(bp1), m2.rank_of(bp2));
    if rp1 != rp2 {
        return Err(PmError::BasepointRankMismatch {
            label: p.to_string(),
            left: rp1,
            right: rp2,
        });
    }
    let labels: Vec<ElementId> = m1
        .ground_set()
        .iter()
        .cloned()
        .chain(g.tail.iter().map(|&i| m2.ground_set()[i].clone()))
        .collect();
    Polymatroid::from_fn(labels, m1.k_bound().max(m2.k_bound()), |a| {
        let (a1, a2) = g.split(a);
        let plain = m1.rank_of(a1) + m2.rank_of(a2);
        let glued = m1.rank_of(a1 | bp1) + m2.rank_of(a2 | bp2) - rp1;
        plain.min(glued)
    })
}

/// 2-sum: the parallel connection along a point basepoint, with the basepoint
/// deleted.
pub fn two_sum(m1: &Polymatroid, m2: &Polymatroid, p: &str) -> Result<Polymatroid, PmError> {
    let g = Glue::new(m1, m2, p)?;
    for (side, m, pos) in [("left", m1, g.p1), ("right", m2, g.p2)] {
        if m.len() < 2 {
            return Err(PmError::TooFewElements { side, len: m.len() });
        }
        let rank = m.rank_of(1 << pos);
        if rank != 1 {
            return Err(PmError::BasepointNotPoint {
                label: p.to_string(),
                side,
                rank,
            });
        }
        if m.lambda(1 << pos) == 0 {
            return Err(PmError::BasepointSeparator {
                label: p.to_string(),
                side,
            });
        }
    }
    let pc = parallel_connection(m1, m2, p)?;
    pc.delete(pc.element_mask(p)?)
}

/// Splits `p` along an exact 2-separation (X1, E − X1), one with
/// r(X1) + r(X2) = r(E) + 1, into parts whose 2-sum is `p`.
///
/// The basepoint is named `p_<i>` for the least `i` not already in use.
pub fn decompose_2_separation(p: &Polymatroid, x1: Mask) -> Result<TwoSumDecomposition, PmError> {
    p.check_mask(x1)?;
    if let Some(i) = (0..p.len()).find(|&i| p.rank_of(1 << i) > 2) {
        return Err(PmError::RankTooHigh {
            label: p.ground_set()[i].to_string(),
            rank: p.rank_of(1 << i),
            max: 2,
        });
    }
    let x2 = p.full_mask() & !x1;
    let sum = p.rank_of(x1) + p.rank_of(x2);
    let expected = p.total_rank() + 1;
    if sum != expected {
        return Err(PmError::NotExactTwoSeparation { sum, expected });
    }
    let basepoint = (0..)
        .map(|i| format!("p_{i}"))
        .find(|l| !p.contains(l))
        .map(|l| ElementId::new(&l).expect("valid label"))
        .expect("unbounded search");
    let m1 = side_of_separation(p, x1, x2, &basepoint)?;
    let m2 = side_of_separation(p, x2, x1, &basepoint)?;
    Ok(TwoSumDecomposition { m1, m2, basepoint })
}

/// r1(A) = r(A) when p ∉ A, and r((A − p) ∪ other) − r(other) + 1 otherwise.
fn side_of_separation(
    p: &Polymatroid,
    side: Mask,
    other: Mask,
    basepoint: &ElementId,
) -> Result<Polymatroid, PmError> {
    let pos: Vec<usize> = bits(side).collect();
    let mut labels: Vec<ElementId> = pos.iter().map(|&i| p.ground_set()[i].clone()).collect();
    labels.push(basepoint.clone());
    let m = pos.len();
    let r_other = p.rank_of(other);
    Polymatroid::from_fn(labels, p.k_bound().max(1), |a| {
        let base = bits(a & full(m)).fold(0, |acc, j| acc | (1 << pos[j]));
        if a & (1 << m) == 0 {
            p.rank_of(base)
        } else {
            p.rank_of(base | other) - r_other + 1
        }
    })
}

/// Adds a fresh element q freely on the flat spanned by `f`:
/// r(X ∪ q) = min{r(X) + 1, r(X ∪ F)}.
pub fn principal_extension(p: &Polymatroid, f: Mask, new_label: &str) -> Result<Polymatroid, PmError> {
    p.check_mask(f)?;
    if p.contains(new_label) {
        return Err(PmError::LabelCollision(new_label.to_string()));
    }
    let n = p.len();
    let mut labels = p.ground_set().to_vec();
    labels.push(ElementId::new(new_label)?);
    let q: Mask = 1 << n;
    Polymatroid::from_fn(labels, p.k_bound(), |a| {
        if a & q == 0 {
            p.rank_of(a)
        } else {
            let x = a & !q;
            (p.rank_of(x) + 1).min(p.rank_of(x | f))
        }
    })
}

/// The natural matroid of a 2-polymatroid and the copy map back to it.
#[derive(Clone, Debug)]
pub struct NaturalMatroid {
    pub matroid: Polymatroid,
    /// For each element of the source, in ground-set order, the matroid
    /// elements standing for it (two free points for a line, the element
    /// itself otherwise).
    pub copies: Vec<(ElementId, Vec<ElementId>)>,
}

impl NaturalMatroid {
    pub fn compression_map(&self) -> CompressionMap {
        let blocks = self
            .copies
            .iter()
            .map(|(label, members)| Block {
                label: label.clone(),
                members: members.clone(),
            })
            .collect();
        CompressionMap::new(self.matroid.clone(), blocks).expect("copy map partitions the matroid")
    }
}

/// Freely adds two points to every line and then deletes the lines. Copies of
/// a line `l` are labeled `l_1` and `l_2` (extra underscores are appended on
/// collision).
pub fn natural_matroid(p: &Polymatroid) -> Result<NaturalMatroid, PmError> {
    if let Some(i) = (0..p.len()).find(|&i| p.rank_of(1 << i) > 2) {
        return Err(PmError::RankTooHigh {
            label: p.ground_set()[i].to_string(),
            rank: p.rank_of(1 << i),
            max: 2,
        });
    }
    let lines = (0..p.len()).filter(|&i| p.rank_of(1 << i) == 2).count();
    if p.len() + lines > crate::MAX_ELEMENTS {
        return Err(PmError::TooLarge {
            n: p.len() + lines,
            max: crate::MAX_ELEMENTS,
        });
    }
    let mut taken: HashSet<String> = p.ground_set().iter().map(|l| l.to_string()).collect();
    let mut current = p.clone();
    let mut copies = Vec::with_capacity(p.len());
    for label in p.ground_set() {
        if p.rank([label])? != 2 {
            copies.push((label.clone(), vec![label.clone()]));
            continue;
        }
        let mut pair = Vec::with_capacity(2);
        for suffix in ["_1", "_2"] {
            let mut name = format!("{label}{suffix}");
            while taken.contains(&name) {
                name.push('_');
            }
            taken.insert(name.clone());
            let line = current.element_mask(label.as_str())?;
            current = principal_extension(&current, line, &name)?;
            pair.push(ElementId::new(&name)?);
        }
        // Later extensions only look at sets avoiding this line, so it can go
        // now; this keeps the intermediate table small.
        current = current.delete(current.element_mask(label.as_str())?)?;
        copies.push((label.clone(), pair));
    }
    let matroid = current.with_k_bound(1)?;
    Ok(NaturalMatroid { matroid, copies })
}

/// Polymatroid whose elements are the blocks: r(S) = r_matroid(∪S).
pub fn compress(cm: &CompressionMap) -> Result<Polymatroid, PmError> {
    let blocks: Vec<(ElementId, Mask)> = cm
        .blocks
        .iter()
        .map(|b| Ok((b.label.clone(), cm.matroid.subset(&b.members)?)))
        .collect::<Result<_, PmError>>()?;
    let k = cm.blocks.iter().map(|b| b.members.len() as u32).max().unwrap_or(1);
    induced(&cm.matroid, &blocks, k)
}

/// Rank function induced on new elements, each standing for a subset of the
/// base ground set: r(S) = r_base(∪ images). Images may overlap.
pub fn induced(
    base: &Polymatroid,
    elements: &[(ElementId, Mask)],
    k: u32,
) -> Result<Polymatroid, PmError> {
    let labels: Vec<ElementId> = elements.iter().map(|(l, _)| l.clone()).collect();
    let images: Vec<Mask> = elements.iter().map(|&(_, m)| m).collect();
    Polymatroid::from_fn(labels, k.max(1), |s| {
        base.rank_of(bits(s).fold(0, |acc, i| acc | images[i]))
    })
}

/// Three lines x, y, z with r({x,y}) = r({y,z}) = 3 and r({x,z}) = r(E) = 4.
/// Connected, yet removing y either way disconnects it.
pub fn canonical_counterexample() -> Polymatroid {
    // masks over (x, y, z)
    let ranks = vec![0, 2, 2, 3, 2, 4, 3, 4];
    let labels = ["x", "y", "z"]
        .iter()
        .map(|l| ElementId::new(l).expect("valid label"))
        .collect();
    Polymatroid::from_table(labels, 2, ranks).expect("well-formed table")
}

/// The uniform matroid U_{r,m} on the given labels.
pub fn uniform(r: u32, m: usize, labels: &[&str]) -> Result<Polymatroid, PmError> {
    if labels.len() != m {
        return Err(PmError::Precondition(format!(
            "U_{{{r},{m}}} needs {m} labels, got {}",
            labels.len()
        )));
    }
    Polymatroid::from_labels(labels, 1, |x| x.count_ones().min(r))
}

/// Cycle matroid of a multigraph; `edges[i]` joins two vertices below
/// `vertices` and carries `labels[i]`.
pub fn cycle_matroid(
    vertices: usize,
    edges: &[(usize, usize)],
    labels: &[&str],
) -> Result<Polymatroid, PmError> {
    if labels.len() != edges.len() {
        return Err(PmError::Precondition(format!(
            "{} edges but {} labels",
            edges.len(),
            labels.len()
        )));
    }
    if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertices || v >= vertices) {
        return Err(PmError::Precondition(format!(
            "edge ({u},{v}) leaves the {vertices}-vertex graph"
        )));
    }
    Polymatroid::from_labels(labels, 1, |x| {
        let mut parent: Vec<usize> = (0..vertices).collect();
        fn root(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        let mut rank = 0;
        for i in bits(x) {
            let (a, b) = (root(&mut parent, edges[i].0), root(&mut parent, edges[i].1));
            if a != b {
                parent[a] = b;
                rank += 1;
            }
        }
        rank
    })
}

/// Connected 2-polymatroid whose removal orderings toward `n` are forced.
///
/// Starting from N ⊕ U_{len,len} with free elements b0, …, b(len−1) and
/// b(len) = `anchor` ∈ E(N), each new line f_i stands for the pair
/// {b(i−1), b(i)}. The result has ground set E(N) ∪ {f1, …, f_len} with ranks
/// induced from the direct sum, and deleting f1, …, f_len in turn leaves N.
pub fn unique_ordering_family(n: &Polymatroid, anchor: &str, len: usize) -> Result<Polymatroid, PmError> {
    if n.is_empty() {
        return Err(PmError::Precondition("base matroid is empty".into()));
    }
    if len == 0 {
        return Err(PmError::Precondition("chain length must be positive".into()));
    }
    for i in 0..n.len() {
        if n.rank_of(1 << i) != 1 {
            return Err(PmError::Precondition(format!(
                "base matroid is not simple: {} has rank {}",
                n.ground_set()[i],
                n.rank_of(1 << i)
            )));
        }
        for j in i + 1..n.len() {
            if n.rank_of((1 << i) | (1 << j)) != 2 {
                return Err(PmError::Precondition(format!(
                    "base matroid is not simple: {} and {} are parallel",
                    n.ground_set()[i],
                    n.ground_set()[j]
                )));
            }
        }
    }
    if !n.is_connected() {
        return Err(PmError::Precondition("base matroid is not connected".into()));
    }
    let anchor_bit = n.element_mask(anchor)?;
    let mut taken: HashSet<String> = n.ground_set().iter().map(|l| l.to_string()).collect();
    let mut fresh = |stem: &str| {
        let mut name = stem.to_string();
        while taken.contains(&name) {
            name.push('_');
        }
        taken.insert(name.clone());
        ElementId::new(&name)
    };
    let b_labels: Vec<ElementId> = (0..len).map(|i| fresh(&format!("b{i}"))).collect::<Result<_, _>>()?;
    let b_refs: Vec<&str> = b_labels.iter().map(ElementId::as_str).collect();
    let free = uniform(len as u32, len, &b_refs)?;
    let base = direct_sum(n, &free)?;
    let nn = n.len();
    let b_bit = |i: usize| -> Mask {
        if i == len {
            anchor_bit
        } else {
            1 << (nn + i)
        }
    };
    let mut elements: Vec<(ElementId, Mask)> = n
        .ground_set()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), 1 << i))
        .collect();
    for i in 1..=len {
        elements.push((fresh(&format!("f{i}"))?, b_bit(i - 1) | b_bit(i)));
    }
    induced(&base, &elements, 2)
}

/// The default instance of [`unique_ordering_family`]: N = U_{2,3} on
/// {a, b, c} anchored at c.
pub fn unique_ordering_default(len: usize) -> Result<Polymatroid, PmError> {
    unique_ordering_family(&uniform(2, 3, &["a", "b", "c"])?, "c", len)
}
