//! The `pm1` JSON file format for polymatroids.
//!
//! ```json
//! {
//!   "format_version": "pm1",
//!   "ground_set": ["x", "y", "z"],
//!   "k": 2,
//!   "ranks": { "": 0, "x": 2, "x,y": 3, "x,y,z": 4, ... }
//! }
//! ```
//!
//! A subset key is the comma-joined, sorted labels of the subset. Every
//! subset needs exactly one entry, except that the empty key may be left out
//! and then defaults to 0.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{ElementId, Mask, PmError, Polymatroid};

pub const FORMAT_VERSION: &str = "pm1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolymatroidFile {
    pub format_version: String,
    pub ground_set: Vec<String>,
    pub k: u32,
    pub ranks: BTreeMap<String, u32>,
}

impl PolymatroidFile {
    pub fn from_polymatroid(p: &Polymatroid) -> Self {
        let ranks = (0..=p.full_mask())
            .map(|m| (p.subset_key(m), p.rank_of(m)))
            .collect();
        PolymatroidFile {
            format_version: FORMAT_VERSION.to_string(),
            ground_set: p.ground_set().iter().map(|l| l.to_string()).collect(),
            k: p.k_bound(),
            ranks,
        }
    }

    /// Rebuilds the polymatroid, checking structure but not the axioms.
    pub fn to_polymatroid(&self) -> Result<Polymatroid, PmError> {
        if self.format_version != FORMAT_VERSION {
            return Err(PmError::Format(format!(
                "unsupported format_version {:?}",
                self.format_version
            )));
        }
        let labels = self
            .ground_set
            .iter()
            .map(|l| ElementId::new(l))
            .collect::<Result<Vec<_>, _>>()?;
        if labels.len() > crate::MAX_ELEMENTS {
            return Err(PmError::TooLarge {
                n: labels.len(),
                max: crate::MAX_ELEMENTS,
            });
        }
        let index: HashMap<&str, usize> = self
            .ground_set
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        if index.len() != labels.len() {
            let mut seen = std::collections::HashSet::new();
            let dup = self.ground_set.iter().find(|l| !seen.insert(*l)).expect("duplicate");
            return Err(PmError::DuplicateLabel(dup.clone()));
        }
        let size = 1usize << labels.len();
        let mut table: Vec<Option<u32>> = vec![None; size];
        for (key, &rank) in &self.ranks {
            let mask = parse_key(key, &index)?;
            table[mask as usize] = Some(rank);
        }
        if table[0].is_none() {
            table[0] = Some(0);
        }
        let mut ranks = Vec::with_capacity(size);
        for (m, v) in table.iter().enumerate() {
            match v {
                Some(r) => ranks.push(*r),
                None => {
                    let mut names: Vec<&str> = (0..labels.len())
                        .filter(|i| m & (1 << i) != 0)
                        .map(|i| labels[i].as_str())
                        .collect();
                    names.sort();
                    return Err(PmError::MissingRank(names.join(",")));
                }
            }
        }
        Polymatroid::from_table(labels, self.k, ranks)
    }
}

/// Parses a canonical subset key. Unknown labels, repeated labels and
/// unsorted keys are rejected, so each subset has exactly one spelling.
fn parse_key(key: &str, index: &HashMap<&str, usize>) -> Result<Mask, PmError> {
    if key.is_empty() {
        return Ok(0);
    }
    let parts: Vec<&str> = key.split(',').collect();
    if parts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(PmError::ExtraRank(key.to_string()));
    }
    let mut mask = 0;
    for p in parts {
        let i = index.get(p).ok_or_else(|| PmError::ExtraRank(key.to_string()))?;
        mask |= 1 << i;
    }
    Ok(mask)
}

/// Serializes to pretty JSON with subset keys in canonical order and a
/// trailing newline; identical inputs give identical bytes.
pub fn to_json(p: &Polymatroid) -> String {
    let mut s = serde_json::to_string_pretty(&PolymatroidFile::from_polymatroid(p))
        .expect("serializable");
    s.push('\n');
    s
}

/// Parses JSON text, checking structure only.
pub fn from_json(text: &str) -> Result<Polymatroid, PmError> {
    let file: PolymatroidFile = serde_json::from_str(text)?;
    file.to_polymatroid()
}

/// Reads a file, checking structure only (used to report axiom violations).
pub fn read(path: impl AsRef<Path>) -> Result<Polymatroid, PmError> {
    from_json(&fs::read_to_string(path)?)
}

/// Reads a file and rejects tables violating the polymatroid axioms.
pub fn load(path: impl AsRef<Path>) -> Result<Polymatroid, PmError> {
    read(path)?.validated()
}

pub fn save(p: &Polymatroid, path: impl AsRef<Path>) -> Result<(), PmError> {
    fs::write(path, to_json(p))?;
    Ok(())
}
