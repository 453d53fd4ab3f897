//! Deterministic instance catalogs and seeded random generators.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::construct::{
    canonical_counterexample, compress, cycle_matroid, uniform, unique_ordering_default, Block,
    CompressionMap,
};
use crate::{ElementId, PmError, Polymatroid};

/// Largest `max_n` accepted by [`generate_catalog`].
pub const CATALOG_MAX_N: usize = 8;

/// Compressions kept per base matroid before switching to a seeded sample.
pub const COMPRESSION_BUDGET: usize = 48;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub polymatroid: Polymatroid,
}

/// Element labels a, b, c, … (then a1, b1, … past z).
pub fn letter_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            let c = (b'a' + (i % 26) as u8) as char;
            if i < 26 {
                c.to_string()
            } else {
                format!("{c}{}", i / 26)
            }
        })
        .collect()
}

fn refs(labels: &[String]) -> Vec<&str> {
    labels.iter().map(String::as_str).collect()
}

/// Connected simple graphs on 2..=`max_vertices` vertices with at most
/// `max_edges` edges, one per isomorphism class, as edge lists.
pub fn connected_graphs(max_vertices: usize, max_edges: usize) -> Vec<(usize, Vec<(usize, usize)>)> {
    let mut out = Vec::new();
    for v in 2..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
        let perms = permutations(v);
        let mut seen = HashSet::new();
        for set in 0u32..1 << pairs.len() {
            if set.count_ones() as usize > max_edges {
                continue;
            }
            let edges: Vec<(usize, usize)> = (0..pairs.len())
                .filter(|i| set & (1 << i) != 0)
                .map(|i| pairs[i])
                .collect();
            if !spans_connected(v, &edges) {
                continue;
            }
            let canon = perms
                .iter()
                .map(|p| {
                    edges.iter().fold(0u32, |acc, &(a, b)| {
                        let (x, y) = (p[a].min(p[b]), p[a].max(p[b]));
                        acc | 1 << pairs.iter().position(|&e| e == (x, y)).expect("pair")
                    })
                })
                .min()
                .expect("nonempty permutation set");
            if seen.insert(canon) {
                out.push((v, edges));
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn spans_connected(v: usize, edges: &[(usize, usize)]) -> bool {
    let mut reached = 1u32;
    loop {
        let before = reached;
        for &(a, b) in edges {
            if reached & (1 << a) != 0 || reached & (1 << b) != 0 {
                reached |= (1 << a) | (1 << b);
            }
        }
        if reached == before {
            return reached.count_ones() as usize == v;
        }
    }
}

/// All partitions of `0..m` into blocks of size at most `max_block` with at
/// most `max_blocks` blocks, each block sorted and blocks ordered by their
/// least member.
pub fn bounded_partitions(m: usize, max_block: usize, max_blocks: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(
        rest: &[usize],
        max_block: usize,
        max_blocks: usize,
        cur: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        let Some((&first, tail)) = rest.split_first() else {
            out.push(cur.clone());
            return;
        };
        if cur.len() == max_blocks {
            return;
        }
        // choose companions of `first` among the remaining elements
        let companions = tail.len().min(max_block - 1);
        for size in 0..=companions {
            for combo in combinations(tail.len(), size) {
                let mut block = vec![first];
                block.extend(combo.iter().map(|&i| tail[i]));
                let remaining: Vec<usize> = tail
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !combo.contains(i))
                    .map(|(_, &x)| x)
                    .collect();
                cur.push(block);
                go(&remaining, max_block, max_blocks, cur, out);
                cur.pop();
            }
        }
    }
    let all: Vec<usize> = (0..m).collect();
    let mut out = Vec::new();
    go(&all, max_block.max(1), max_blocks, &mut Vec::new(), &mut out);
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Compresses `matroid` along a partition given by positions; blocks get
/// letter labels in order.
pub fn compress_partition(matroid: &Polymatroid, partition: &[Vec<usize>]) -> Result<Polymatroid, PmError> {
    let names = letter_labels(partition.len());
    let blocks = partition
        .iter()
        .zip(&names)
        .map(|(block, name)| {
            Ok(Block {
                label: ElementId::new(name)?,
                members: block.iter().map(|&i| matroid.ground_set()[i].clone()).collect(),
            })
        })
        .collect::<Result<Vec<_>, PmError>>()?;
    compress(&CompressionMap::new(matroid.clone(), blocks)?)
}

/// Base matroids of the catalog: uniform matroids on up to `max_m` elements
/// and cycle matroids of connected graphs on at most five vertices with at
/// most `max_m` edges.
pub fn base_matroids(max_m: usize) -> Result<Vec<CatalogEntry>, PmError> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        let labels = letter_labels(m);
        for r in 0..=m {
            out.push(CatalogEntry {
                name: format!("U{r}_{m}"),
                polymatroid: uniform(r as u32, m, &refs(&labels))?,
            });
        }
    }
    for (i, (v, edges)) in connected_graphs(5, max_m).into_iter().enumerate() {
        let labels = letter_labels(edges.len());
        out.push(CatalogEntry {
            name: format!("graph{i}_v{v}_e{}", edges.len()),
            polymatroid: cycle_matroid(v, &edges, &refs(&labels))?,
        });
    }
    Ok(out)
}

/// The default instance catalog.
///
/// Contains uniform and graphic matroids on up to `max_n + 2` elements,
/// compressions of those into at most `max_n` points and lines (all of them,
/// or a seeded sample of [`COMPRESSION_BUDGET`] when there are more), the
/// three-line counterexample, and the forced-ordering family. Entries equal
/// as polymatroids are kept once. The output depends only on the arguments.
pub fn generate_catalog(max_n: usize, seed: u64) -> Result<Vec<CatalogEntry>, PmError> {
    if max_n > CATALOG_MAX_N {
        return Err(PmError::Precondition(format!(
            "catalog size {max_n} exceeds the limit {CATALOG_MAX_N}"
        )));
    }
    let mut entries = Vec::new();
    entries.push(CatalogEntry {
        name: "counterexample".into(),
        polymatroid: canonical_counterexample(),
    });
    for len in 1..=3 {
        if len + 3 <= max_n + 2 {
            entries.push(CatalogEntry {
                name: format!("unique_ordering_{len}"),
                polymatroid: unique_ordering_default(len)?,
            });
        }
    }
    let bases = base_matroids(max_n + 2)?;
    for (bi, base) in bases.iter().enumerate() {
        let m = base.polymatroid.len();
        let mut parts: Vec<Vec<Vec<usize>>> = bounded_partitions(m, 2, max_n)
            .into_iter()
            .filter(|p| p.len() < m)
            .collect();
        if parts.len() > COMPRESSION_BUDGET {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (bi as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            parts.shuffle(&mut rng);
            parts.truncate(COMPRESSION_BUDGET);
            parts.sort();
        }
        for (pi, part) in parts.iter().enumerate() {
            entries.push(CatalogEntry {
                name: format!("{}_c{pi}", base.name),
                polymatroid: compress_partition(&base.polymatroid, part)?,
            });
        }
    }
    entries.extend(bases);
    let mut seen = HashSet::new();
    entries.retain(|e| seen.insert(e.polymatroid.canonical_key()));
    Ok(entries)
}

/// A seeded random k-polymatroid: a random base matroid compressed into at
/// most `max_blocks` blocks of size at most `k`.
pub fn random_compression(
    rng: &mut impl Rng,
    bases: &[CatalogEntry],
    k: usize,
    max_blocks: usize,
) -> Result<Polymatroid, PmError> {
    let base = &bases[rng.gen_range(0..bases.len())].polymatroid;
    let mut order: Vec<usize> = (0..base.len()).collect();
    order.shuffle(rng);
    let mut partition: Vec<Vec<usize>> = Vec::new();
    let mut rest = order.as_slice();
    while !rest.is_empty() {
        let size = rng.gen_range(1..=k.min(rest.len()));
        let (block, tail) = rest.split_at(size);
        let mut block = block.to_vec();
        block.sort();
        partition.push(block);
        rest = tail;
    }
    partition.sort();
    partition.truncate(max_blocks);
    // dropped blocks are deleted from the base first
    let kept: Vec<usize> = partition.iter().flatten().copied().collect();
    let keep_mask = kept.iter().fold(0, |acc, &i| acc | (1 << i));
    let restricted = base.restrict(keep_mask)?;
    let position = |i: usize| kept.iter().filter(|&&j| j < i).count();
    let relabeled: Vec<Vec<usize>> = partition
        .iter()
        .map(|b| b.iter().map(|&i| position(i)).collect())
        .collect();
    compress_partition(&restricted, &relabeled)
}
