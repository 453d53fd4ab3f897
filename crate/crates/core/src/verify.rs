//! Executable checkers for the structural results about connectivity,
//! minors, gluing and removal orderings.
//!
//! Every checker walks a catalog, quantifies over the configurations each
//! statement talks about (exhaustively for small ground sets, by seeded
//! sampling above that), counts configurations whose hypotheses fail as
//! skipped, and collects counterexamples as full instances. Reports do not
//! depend on thread scheduling: per-instance results are merged in catalog
//! order and counterexamples are sorted by their serialization.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{base_matroids, random_compression, CatalogEntry};
use crate::chains::{
    enumerate_constrained_orderings, find_removal_step, has_labeled_minor, ChainError, RemovalOp,
    RemovalStep,
};
use crate::construct::{compress, decompose_2_separation, natural_matroid, parallel_connection, two_sum};
use crate::format::{to_json, PolymatroidFile};
use crate::parallel::{map_indexed, map_indexed_sequential};
use crate::polymatroid::{bits, submasks, CanonicalKey};
use crate::{Mask, PmError, Polymatroid};

/// Checker ids in suite order.
pub const CHECKERS: &[&str] = &[
    "local_conn_monotone",
    "lambda_minor",
    "union_connected",
    "modular_identity",
    "lambda_zero_equal",
    "contraction_component",
    "natural_matroid",
    "small_separation_removal",
    "two_sum_lemmas",
    "two_sum_decomposition",
    "hall_splitter",
    "main_theorem",
    "uniqueness_theorem",
    "swap_lemma",
    "case_lemma",
    "explore_conjecture",
];

/// Largest number of subset configurations enumerated exhaustively per
/// instance; beyond it the checker samples even below `max_n`.
const EXHAUSTIVE_LIMIT: u64 = 2_000_000;

/// Failures kept as payloads per instance; the failure count is exact.
const PAYLOADS_PER_INSTANCE: usize = 8;

/// Largest removal set the uniqueness checker enumerates.
const UNIQUENESS_MAX_REMOVALS: usize = 4;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Ground sets up to this size are quantified exhaustively.
    pub max_n: usize,
    pub seed: u64,
    /// Configurations drawn per instance when sampling.
    pub samples: usize,
    /// Block size bound for the conjecture explorer.
    pub k: usize,
    /// Instances generated by the conjecture explorer.
    pub budget: usize,
    /// Use the thread pool when the crate is built with `parallel`.
    pub parallel: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_n: 5,
            seed: 42,
            samples: 256,
            k: 3,
            budget: 1000,
            parallel: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        }
    }
}

/// A configuration violating a checked statement.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub checker: String,
    pub instance: Polymatroid,
    /// Target minor, for the removal-search checkers.
    pub minor: Option<Polymatroid>,
    pub witness: String,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub checker_id: String,
    pub instances_checked: usize,
    /// Configurations whose hypotheses held and were tested.
    pub checked: u64,
    /// Configurations whose hypotheses failed.
    pub skipped: u64,
    /// Configurations that failed; payloads are in `counterexamples`.
    pub failed: u64,
    pub status: Status,
    pub counterexamples: Vec<Counterexample>,
    pub elapsed: Duration,
}

impl VerificationReport {
    /// `checker_id STATUS checked=N failed=K skipped=S instances=I`, with the
    /// elapsed time appended when `timing` is set.
    pub fn line(&self, timing: bool) -> String {
        let mut s = format!(
            "{} {} checked={} failed={} skipped={} instances={}",
            self.checker_id,
            self.status.as_str(),
            self.checked,
            self.failed,
            self.skipped,
            self.instances_checked
        );
        if timing {
            s.push_str(&format!(" elapsed={:.3}s", self.elapsed.as_secs_f64()));
        }
        s
    }

    pub fn to_file(&self) -> ReportFile {
        ReportFile {
            checker_id: self.checker_id.clone(),
            status: self.status,
            instances: self.instances_checked,
            checked: self.checked,
            skipped: self.skipped,
            failed: self.failed,
            counterexamples: self.counterexamples.iter().map(Counterexample::to_file).collect(),
        }
    }
}

/// Serialized report; timing is left out so files are reproducible.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportFile {
    pub checker_id: String,
    pub status: Status,
    pub instances: usize,
    pub checked: u64,
    pub skipped: u64,
    pub failed: u64,
    pub counterexamples: Vec<CounterexampleFile>,
}

pub const COUNTEREXAMPLE_VERSION: &str = "pm1-counterexample";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleFile {
    pub format_version: String,
    pub checker: String,
    pub instance: PolymatroidFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minor: Option<PolymatroidFile>,
    pub witness: String,
}

impl Counterexample {
    pub fn to_file(&self) -> CounterexampleFile {
        CounterexampleFile {
            format_version: COUNTEREXAMPLE_VERSION.to_string(),
            checker: self.checker.clone(),
            instance: PolymatroidFile::from_polymatroid(&self.instance),
            minor: self.minor.as_ref().map(PolymatroidFile::from_polymatroid),
            witness: self.witness.clone(),
        }
    }

    pub fn from_file(file: &CounterexampleFile) -> Result<Self, PmError> {
        if file.format_version != COUNTEREXAMPLE_VERSION {
            return Err(PmError::Format(format!(
                "unsupported counterexample version {:?}",
                file.format_version
            )));
        }
        Ok(Counterexample {
            checker: file.checker.clone(),
            instance: file.instance.to_polymatroid()?,
            minor: file.minor.as_ref().map(PolymatroidFile::to_polymatroid).transpose()?,
            witness: file.witness.clone(),
        })
    }

    fn sort_key(&self) -> (String, String, String) {
        (
            to_json(&self.instance),
            self.minor.as_ref().map(to_json).unwrap_or_default(),
            self.witness.clone(),
        )
    }
}

struct Failure {
    minor: Option<Polymatroid>,
    witness: String,
}

#[derive(Default)]
struct Tally {
    checked: u64,
    skipped: u64,
    failed: u64,
    failures: Vec<Failure>,
}

impl Tally {
    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(None, witness());
        }
    }

    fn fail(&mut self, minor: Option<Polymatroid>, witness: String) {
        self.failed += 1;
        if self.failures.len() < PAYLOADS_PER_INSTANCE {
            self.failures.push(Failure { minor, witness });
        }
    }

    fn skip(&mut self) {
        self.skipped += 1;
    }
}

/// Per-instance quantification context.
struct Ctx {
    rng: ChaCha8Rng,
    max_n: usize,
    samples: usize,
}

impl Ctx {
    fn new(cfg: &VerifyConfig, index: usize) -> Self {
        let seed = cfg.seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        Ctx {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_n: cfg.max_n,
            samples: cfg.samples,
        }
    }

    fn exhaustive(&self, n: usize, classes: u64) -> bool {
        n <= self.max_n && classes.checked_pow(n as u32).is_some_and(|c| c <= EXHAUSTIVE_LIMIT)
    }

    /// Calls `f` with a class in `0..classes` for every element: all
    /// labelings when small enough, a seeded sample otherwise.
    fn labelings(&mut self, n: usize, classes: u8, mut f: impl FnMut(&[u8])) {
        let mut digits = vec![0u8; n];
        if self.exhaustive(n, classes as u64) {
            let total = (classes as u64).pow(n as u32);
            for mut code in 0..total {
                for d in digits.iter_mut() {
                    *d = (code % classes as u64) as u8;
                    code /= classes as u64;
                }
                f(&digits);
            }
        } else {
            for _ in 0..self.samples {
                for d in digits.iter_mut() {
                    *d = self.rng.gen_range(0..classes);
                }
                f(&digits);
            }
        }
    }
}

/// Elements whose digit satisfies `pred`.
fn mask_where(digits: &[u8], pred: impl Fn(u8) -> bool) -> Mask {
    digits
        .iter()
        .enumerate()
        .filter(|&(_, &d)| pred(d))
        .fold(0, |acc, (i, _)| acc | (1 << i))
}

fn show(p: &Polymatroid, m: Mask) -> String {
    format!("{{{}}}", p.subset_key(m))
}

fn rank(p: &Polymatroid, m: Mask) -> i64 {
    p.rank_of(m) as i64
}

/// Whether M|S is connected, without building the restriction.
fn restriction_connected(p: &Polymatroid, s: Mask) -> bool {
    if s.count_ones() <= 1 {
        return true;
    }
    let low = s & s.wrapping_neg();
    let rs = p.rank_of(s);
    !submasks(s & !low).any(|t| {
        let side = t | low;
        side != s && p.rank_of(side) + p.rank_of(s & !side) == rs
    })
}

type InstanceCheck = fn(&Polymatroid, &mut Ctx) -> Tally;

fn instance_check(id: &str) -> Option<InstanceCheck> {
    Some(match id {
        "local_conn_monotone" => local_conn_monotone,
        "lambda_minor" => lambda_minor,
        "union_connected" => union_connected,
        "modular_identity" => modular_identity,
        "lambda_zero_equal" => lambda_zero_equal,
        "contraction_component" => contraction_component,
        "natural_matroid" => natural_matroid_check,
        "small_separation_removal" => small_separation_removal,
        "two_sum_lemmas" => two_sum_lemmas,
        "two_sum_decomposition" => two_sum_decomposition,
        "hall_splitter" => hall_splitter,
        "main_theorem" => main_theorem,
        "uniqueness_theorem" => uniqueness_theorem,
        "swap_lemma" => swap_lemma,
        "case_lemma" => case_lemma,
        "explore_conjecture" => main_theorem,
        _ => return None,
    })
}

/// ⊓(Y1, Y2) ≤ ⊓(X1, X2) whenever Y1 ⊆ X1 and Y2 ⊆ X2.
fn local_conn_monotone(p: &Polymatroid, ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    // digit = 3a + b; a, b ∈ {outside, X only, X and Y} for the two sides
    ctx.labelings(p.len(), 9, |d| {
        let x1 = mask_where(d, |c| c / 3 >= 1);
        let y1 = mask_where(d, |c| c / 3 == 2);
        let x2 = mask_where(d, |c| c % 3 >= 1);
        let y2 = mask_where(d, |c| c % 3 == 2);
        let small = p.local_connectivity_raw(y1, y2);
        let large = p.local_connectivity_raw(x1, x2);
        t.check(small <= large, || {
            format!(
                "Y1={} ⊆ X1={}, Y2={} ⊆ X2={}: ⊓(Y1,Y2)={small} > ⊓(X1,X2)={large}",
                show(p, y1),
                show(p, x1),
                show(p, y2),
                show(p, x2)
            )
        });
    });
    t
}

/// For disjoint X, C, D: λ_{M\D/C}(X) ≤ λ_M(X), with equality exactly when
/// r(X ∪ C) = r(X) + r(C) and r(E−X) + r(E−D) = r(E) + r(E−(X ∪ D)).
fn lambda_minor(p: &Polymatroid, ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    let e = p.full_mask();
    ctx.labelings(p.len(), 4, |d| {
        let x = mask_where(d, |c| c == 1);
        let c = mask_where(d, |c| c == 2);
        let del = mask_where(d, |c| c == 3);
        let rest = e & !(c | del);
        let lam = rank(p, x) + rank(p, e & !x) - rank(p, e);
        let minor_rank = |s: Mask| rank(p, s | c) - rank(p, c);
        let lam_minor = minor_rank(x) + minor_rank(rest & !x) - minor_rank(rest);
        let cond_c = rank(p, x | c) == rank(p, x) + rank(p, c);
        let cond_d = rank(p, e & !x) + rank(p, e & !del) == rank(p, e) + rank(p, e & !(x | del));
        let ok = lam_minor <= lam && ((lam_minor == lam) == (cond_c && cond_d));
        t.check(ok, || {
            format!(
                "X={} C={} D={}: minor λ={lam_minor}, λ={lam}, conditions=({cond_c},{cond_d})",
                show(p, x),
                show(p, c),
                show(p, del)
            )
        });
    });
    t
}

/// M|X and M|Y connected with X ∩ Y ≠ ∅ implies M|(X ∪ Y) connected.
fn union_connected(p: &Polymatroid, ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    let mut memo: HashMap<Mask, bool> = HashMap::new();
    let mut conn = |s: Mask| *memo.entry(s).or_insert_with(|| restriction_connected(p, s));
    ctx.labelings(p.len(), 4, |d| {
        let x = mask_where(d, |c| c & 1 != 0);
        let y = mask_where(d, |c| c & 2 != 0);
        if x & y == 0 || !conn(x) || !conn(y) {
            t.skip();
            return;
        }
        let u = x | y;
        let ok = conn(u);
        t.check(ok, || format!("X={} Y={}: union disconnected", show(p, x), show(p, y)));
    });
    t
}

/// ⊓(A ∪ B, C) + ⊓(A, B) = ⊓(A ∪ C, B) + ⊓(A, C).
fn modular_identity(p: &Polymatroid, ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    ctx.labelings(p.len(), 8, |d| {
        let a = mask_where(d, |c| c & 1 != 0);
        let b = mask_where(d, |c| c & 2 != 0);
        let c = mask_where(d, |c| c & 4 != 0);
        let lhs = p.local_connectivity_raw(a | b, c) + p.local_connectivity_raw(a, b);
        let rhs = p.local_connectivity_raw(a | c, b) + p.local_connectivity_raw(a, c);
        t.check(lhs == rhs, || {
            format!("A={} B={} C={}: {lhs} ≠ {rhs}", show(p, a), show(p, b), show(p, c))
        });
    });
    t
}

/// λ(Z) = 0 implies M\Z = M/Z.
fn lambda_zero_equal(p: &Polymatroid, ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    ctx.labelings(p.len(), 2, |d| {
        let z = mask_where(d, |c| c == 1);
        if p.local_connectivity_raw(z, p.full_mask() & !z) != 0 {
            t.skip();
            return;
        }
        let ok = p.minor_unchecked(z, 0).equals(&p.minor_unchecked(0, z));
        t.check(ok, || format!("Z={}: deletion differs from contraction", show(p, z)));
    });
    t
}

/// M connected and M/e disconnected: every component Z of M/e has ⊓(Z, {e}) > 0.
fn contraction_component(p: &Polymatroid, _ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    if !p.is_connected() {
        t.skipped += p.len() as u64;
        return t;
    }
    for i in 0..p.len() {
        let e: Mask = 1 << i;
        let c = p.minor_unchecked(0, e);
        if c.is_connected() {
            t.skip();
            continue;
        }
        for block in c.components() {
            let z = p.subset(&block).expect("labels of a minor");
            let v = p.local_connectivity_raw(z, e);
            t.check(v > 0, || {
                format!("e={}: component {} of M/e has ⊓(Z,{{e}})={v}", p.ground_set()[i], show(p, z))
            });
        }
    }
    t
}

/// Natural matroid: a matroid, compresses back to M on every subset, and is
/// connected exactly when M is (|E| ≥ 2).
fn natural_matroid_check(p: &Polymatroid, _ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    if p.len() < 2 || p.effective_k() > 2 {
        t.skip();
        return t;
    }
    let nm = match natural_matroid(p) {
        Ok(nm) => nm,
        Err(err) => {
            t.fail(None, format!("construction failed: {err}"));
            return t;
        }
    };
    let m = &nm.matroid;
    let violations = m.validate();
    t.check(violations.is_empty() && m.effective_k() <= 1, || {
        format!("natural matroid is not a matroid: {} violation(s)", violations.len())
    });
    let images: Vec<Mask> = nm
        .copies
        .iter()
        .map(|(_, copies)| m.subset(copies).expect("copy labels"))
        .collect();
    for s in 0..=p.full_mask() {
        let image = bits(s).fold(0, |acc, i| acc | images[i]);
        let (a, b) = (p.rank_of(s), m.rank_of(image));
        t.check(a == b, || format!("S={}: r(S)={a} but the copies have rank {b}", show(p, s)));
    }
    let (pc, mc) = (p.is_connected(), m.is_connected());
    t.check(pc == mc, || format!("connected={pc} but natural matroid connected={mc}"));
    let back = compress(&nm.compression_map());
    t.check(back.as_ref().is_ok_and(|b| b.equals(p)), || {
        "compressing the natural matroid does not give M back".to_string()
    });
    t
}

/// For connected M, λ(A) < 2·min λ over nonempty proper X implies M\A or M/A
/// is connected.
fn small_separation_removal(p: &Polymatroid, ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    if p.len() < 2 || !p.is_connected() {
        t.skip();
        return t;
    }
    let full = p.full_mask();
    let min_lambda = (1..full).map(|x| p.lambda(x)).min().expect("proper subsets exist");
    ctx.labelings(p.len(), 2, |d| {
        let a = mask_where(d, |c| c == 1);
        if p.lambda(a) >= 2 * min_lambda {
            t.skip();
            return;
        }
        let ok = p.minor_unchecked(a, 0).is_connected() || p.minor_unchecked(0, a).is_connected();
        t.check(ok, || {
            format!("A={} (λ={}, min λ={min_lambda}): M\\A and M/A both disconnected", show(p, a), p.lambda(a))
        });
    });
    t
}

/// Exact 2-separations (X1, X2) of M, as X1 masks.
fn exact_two_separations(p: &Polymatroid, ctx: &mut Ctx) -> Vec<Mask> {
    let full = p.full_mask();
    let target = p.total_rank() + 1;
    let mut out = Vec::new();
    ctx.labelings(p.len(), 2, |d| {
        let x1 = mask_where(d, |c| c == 1);
        if p.rank_of(x1) + p.rank_of(full & !x1) == target {
            out.push(x1);
        }
    });
    out.sort_unstable();
    out.dedup();
    out
}

/// For M = M1 ⊕2 M2 and q ∈ E1: ⊓(E1 − q, E2) = 1 gives M\q = (M1\q) ⊕2 M2,
/// and ⊓({q}, E2) = 0 gives M/q = (M1/q) ⊕2 M2.
fn two_sum_lemmas(p: &Polymatroid, ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    if p.effective_k() > 2 {
        t.skip();
        return t;
    }
    let full = p.full_mask();
    for x1 in exact_two_separations(p, ctx) {
        let x2 = full & !x1;
        let dec = match decompose_2_separation(p, x1) {
            Ok(d) => d,
            Err(err) => {
                t.fail(None, format!("X1={}: decomposition failed: {err}", show(p, x1)));
                continue;
            }
        };
        let bp = dec.basepoint.as_str();
        for i in bits(x1) {
            let q: Mask = 1 << i;
            let label = p.ground_set()[i].as_str();
            let q1 = dec.m1.element_mask(label).expect("q lies in M1");
            if p.local_connectivity(x1 & !q, x2) == 1 {
                let lhs = p.minor_unchecked(q, 0);
                let rhs = two_sum(&dec.m1.minor_unchecked(q1, 0), &dec.m2, bp);
                t.check(rhs.as_ref().is_ok_and(|r| r.equals(&lhs)), || {
                    format!("X1={} q={label}: M\\q ≠ (M1\\q) ⊕2 M2 ({:?})", show(p, x1), rhs.err())
                });
            } else {
                t.skip();
            }
            if p.local_connectivity(q, x2) == 0 {
                let lhs = p.minor_unchecked(0, q);
                let rhs = two_sum(&dec.m1.minor_unchecked(0, q1), &dec.m2, bp);
                t.check(rhs.as_ref().is_ok_and(|r| r.equals(&lhs)), || {
                    format!("X1={} q={label}: M/q ≠ (M1/q) ⊕2 M2 ({:?})", show(p, x1), rhs.err())
                });
            } else {
                t.skip();
            }
        }
    }
    t
}

/// Decomposing along an exact 2-separation and reassembling gives M back;
/// the parallel connection restricts to both parts; and M, P(M1, M2) and the
/// pair (M1, M2) are connected together or not at all.
fn two_sum_decomposition(p: &Polymatroid, ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    if p.effective_k() > 2 {
        t.skip();
        return t;
    }
    let full = p.full_mask();
    for x1 in exact_two_separations(p, ctx) {
        let w = show(p, x1);
        let dec = match decompose_2_separation(p, x1) {
            Ok(d) => d,
            Err(err) => {
                t.fail(None, format!("X1={w}: decomposition failed: {err}"));
                continue;
            }
        };
        let bp = dec.basepoint.as_str();
        t.check(dec.m1.is_valid() && dec.m2.is_valid(), || format!("X1={w}: parts are not polymatroids"));
        let back = two_sum(&dec.m1, &dec.m2, bp);
        t.check(back.as_ref().is_ok_and(|b| b.equals(p)), || {
            format!("X1={w}: reassembly differs ({:?})", back.as_ref().err())
        });
        let pc = match parallel_connection(&dec.m1, &dec.m2, bp) {
            Ok(pc) => pc,
            Err(err) => {
                t.fail(None, format!("X1={w}: parallel connection failed: {err}"));
                continue;
            }
        };
        t.check(pc.is_valid(), || format!("X1={w}: parallel connection is not a polymatroid"));
        for part in [&dec.m1, &dec.m2] {
            let side = pc.subset(part.ground_set()).expect("part labels");
            let r = pc.restrict(side).expect("subset of ground set");
            t.check(r.equals(part), || format!("X1={w}: P(M1,M2) does not restrict to a part"));
        }
        let parts = dec.m1.is_connected() && dec.m2.is_connected();
        let (whole, glued) = (p.is_connected(), pc.is_connected());
        t.check(parts == whole && whole == glued, || {
            format!("X1={w}: parts connected={parts}, 2-sum connected={whole}, P(M1,M2) connected={glued}")
        });
        let _ = full;
    }
    t
}

/// Elements e for which M\e or M/e is connected.
fn splitter_elements(p: &Polymatroid) -> Vec<usize> {
    (0..p.len())
        .filter(|&i| {
            let e: Mask = 1 << i;
            p.minor_unchecked(e, 0).is_connected() || p.minor_unchecked(0, e).is_connected()
        })
        .collect()
}

/// A connected M with at least two elements has two distinct elements each
/// removable (one way or the other) with a connected result.
fn hall_splitter(p: &Polymatroid, _ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    if p.len() < 2 || !p.is_connected() {
        t.skip();
        return t;
    }
    let good = splitter_elements(p);
    t.check(good.len() >= 2, || {
        format!(
            "only {} element(s) keep connectivity: {}",
            good.len(),
            show(p, good.iter().fold(0, |acc, &i| acc | (1 << i)))
        )
    });
    t
}

/// Distinct connected nonempty proper labeled minors of M, optionally
/// limited by removal-set size. Each comes with its removal set.
fn connected_proper_minors(p: &Polymatroid, ctx: &mut Ctx, max_removed: usize) -> (Vec<(Mask, Polymatroid)>, u64) {
    let mut seen: HashSet<(Mask, Vec<u32>)> = HashSet::new();
    let mut out = Vec::new();
    let mut skipped = 0;
    let full = p.full_mask();
    // digit 0 keeps, 1 deletes, 2 contracts
    ctx.labelings(p.len(), 3, |d| {
        let del = mask_where(d, |c| c == 1);
        let con = mask_where(d, |c| c == 2);
        let removed = del | con;
        if removed == 0 || removed == full || removed.count_ones() as usize > max_removed {
            skipped += 1;
            return;
        }
        let n = p.minor_unchecked(del, con);
        if !seen.insert((removed, n.ranks().to_vec())) {
            return;
        }
        if n.is_connected() {
            out.push((removed, n));
        } else {
            skipped += 1;
        }
    });
    (out, skipped)
}

/// For connected M and every connected proper labeled minor N, some single
/// deletion or contraction keeps M connected with N as a minor.
fn main_theorem(p: &Polymatroid, ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    if !p.is_connected() || p.len() < 2 {
        t.skip();
        return t;
    }
    let (minors, skipped) = connected_proper_minors(p, ctx, p.len());
    t.skipped += skipped;
    for (_, n) in minors {
        t.checked += 1;
        match find_removal_step(p, &n) {
            Ok(step) => {
                if let Some(why) = step_problem(p, &n, &step) {
                    t.fail(Some(n), format!("returned step {step} is invalid: {why}"));
                }
            }
            Err(ChainError::Counterexample { .. }) => {
                t.fail(Some(n), "no element can be removed keeping connectivity and the minor".into())
            }
            Err(err) => t.fail(Some(n), format!("search error: {err}")),
        }
    }
    t
}

/// Independent re-check of a returned step.
fn step_problem(m: &Polymatroid, n: &Polymatroid, step: &RemovalStep) -> Option<String> {
    if n.contains(step.element.as_str()) {
        return Some("element belongs to the minor".into());
    }
    let next = match step.apply(m) {
        Ok(next) => next,
        Err(err) => return Some(err.to_string()),
    };
    if !next.is_connected() {
        return Some("result is disconnected".into());
    }
    match has_labeled_minor(&next, n) {
        Ok(Some(_)) => None,
        Ok(None) => Some("result lost the minor".into()),
        Err(err) => Some(err.to_string()),
    }
}

/// Another sequence with the same element pair in the first two slots, a
/// different first two steps, and the same remaining steps.
fn has_exchange_partner(seq: &[RemovalStep], all: &HashSet<Vec<RemovalStep>>) -> bool {
    let (e, f) = (&seq[0].element, &seq[1].element);
    for (a, b) in [(e, f), (f, e)] {
        for oa in RemovalOp::BOTH {
            for ob in RemovalOp::BOTH {
                let mut alt = seq.to_vec();
                alt[0] = RemovalStep::new(oa, a.clone());
                alt[1] = RemovalStep::new(ob, b.clone());
                if alt.as_slice() != seq && all.contains(&alt) {
                    return true;
                }
            }
        }
    }
    false
}

/// Constrained admissible orderings toward a connected proper minor are
/// unique exactly when one element is removed; with two or more, every
/// ordering has a partner differing only in its first two steps.
fn uniqueness_theorem(p: &Polymatroid, ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    if !p.is_connected() || p.len() < 2 {
        t.skip();
        return t;
    }
    let (minors, skipped) = connected_proper_minors(p, ctx, UNIQUENESS_MAX_REMOVALS);
    t.skipped += skipped;
    for (removed, n) in minors {
        let size = removed.count_ones();
        let seqs = match enumerate_constrained_orderings(p, &n) {
            Ok(s) => s,
            Err(err) => {
                t.checked += 1;
                t.fail(Some(n), format!("enumeration error: {err}"));
                continue;
            }
        };
        let count = seqs.len();
        t.check(count >= 1 && (count == 1) == (size == 1), || {
            format!("removal set {} of size {size} has {count} constrained ordering(s)", show(p, removed))
        });
        if t.failures.last().is_some_and(|f| f.minor.is_none()) {
            t.failures.last_mut().expect("just checked").minor = Some(n.clone());
        }
        if size >= 2 {
            let all: HashSet<Vec<RemovalStep>> = seqs.iter().cloned().collect();
            let lonely = seqs.iter().find(|s| !has_exchange_partner(s, &all));
            t.check(lonely.is_none(), || {
                let text: Vec<String> = lonely.into_iter().flatten().map(|s| s.to_string()).collect();
                format!("ordering [{}] has no exchange partner", text.join(", "))
            });
            if t.failures.last().is_some_and(|f| f.minor.is_none()) {
                t.failures.last_mut().expect("just checked").minor = Some(n.clone());
            }
        }
    }
    t
}

/// M†e and M†e‡f connected but M‡f not: {e} and E − {e,f} are the
/// components of M‡f, and deleting or contracting e from it agree.
fn swap_lemma(p: &Polymatroid, _ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    let n = p.len();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (e, f) = (p.ground_set()[i].as_str(), p.ground_set()[j].as_str());
            for dagger in RemovalOp::BOTH {
                let me = dagger.apply(p, 1 << i);
                if !me.is_connected() {
                    t.skipped += 2;
                    continue;
                }
                for ddagger in RemovalOp::BOTH {
                    let mef = ddagger.apply(&me, me.element_mask(f).expect("f survives"));
                    let mf = ddagger.apply(p, 1 << j);
                    if !mef.is_connected() || mf.is_connected() {
                        t.skip();
                        continue;
                    }
                    let mut expected = vec![vec![p.ground_set()[i].clone()]];
                    let rest = p.full_mask() & !((1 << i) | (1 << j));
                    if rest != 0 {
                        expected.push(p.labels_of(rest));
                    }
                    expected.sort();
                    let comps = mf.components();
                    let eb = mf.element_mask(e).expect("e survives");
                    let agree = mf.minor_unchecked(eb, 0).equals(&mf.minor_unchecked(0, eb));
                    t.check(comps == expected && agree, || {
                        format!("e={e} f={f} ops=({dagger},{ddagger}): components {comps:?}, deletion/contraction agree={agree}")
                    });
                }
            }
        }
    }
    t
}

/// Case analysis for two removals from a connected M: with Mαe and Mαeγf
/// connected, the case determined by which of Mγf, Mβe, Mδf are connected
/// comes with its stated equalities.
fn case_lemma(p: &Polymatroid, _ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    if !p.is_connected() || p.len() < 2 {
        t.skip();
        return t;
    }
    let n = p.len();
    let then = |m: &Polymatroid, op: RemovalOp, label: &str| op.apply(m, m.element_mask(label).expect("survives"));
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (e, f) = (p.ground_set()[i].as_str(), p.ground_set()[j].as_str());
            for alpha in RemovalOp::BOTH {
                let beta = alpha.other();
                let ma = alpha.apply(p, 1 << i);
                for gamma in RemovalOp::BOTH {
                    let delta = gamma.other();
                    let mag = then(&ma, gamma, f);
                    if !ma.is_connected() || !mag.is_connected() {
                        t.skip();
                        continue;
                    }
                    let mg = gamma.apply(p, 1 << j);
                    let (case, ok) = if mg.is_connected() {
                        ("i", mag.equals(&then(&mg, alpha, e)))
                    } else {
                        let mb = beta.apply(p, 1 << i);
                        let first = mag.equals(&then(&mb, gamma, f));
                        let md = delta.apply(p, 1 << j);
                        if mb.is_connected() {
                            ("ii(a)", first)
                        } else if md.is_connected() {
                            ("ii(b)", first && mag.equals(&then(&md, beta, e)))
                        } else {
                            ("ii(c)", first && mag.equals(&then(&ma, delta, f)))
                        }
                    };
                    t.check(ok, || format!("e={e} f={f} α={alpha} γ={gamma}: case {case} equalities fail"));
                }
            }
        }
    }
    t
}

fn merge(id: &str, instances: &[&Polymatroid], tallies: Vec<Tally>, started: Instant) -> VerificationReport {
    let mut report = VerificationReport {
        checker_id: id.to_string(),
        instances_checked: instances.len(),
        checked: 0,
        skipped: 0,
        failed: 0,
        status: Status::Pass,
        counterexamples: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for (p, t) in instances.iter().zip(tallies) {
        report.checked += t.checked;
        report.skipped += t.skipped;
        report.failed += t.failed;
        report.counterexamples.extend(t.failures.into_iter().map(|f| Counterexample {
            checker: id.to_string(),
            instance: (*p).clone(),
            minor: f.minor,
            witness: f.witness,
        }));
    }
    report.counterexamples.sort_by_cached_key(Counterexample::sort_key);
    report.status = if !report.counterexamples.is_empty() {
        Status::Fail
    } else if report.checked == 0 {
        Status::Skipped
    } else {
        Status::Pass
    };
    report.elapsed = started.elapsed();
    report
}

fn run_instances(id: &str, check: InstanceCheck, instances: &[&Polymatroid], cfg: &VerifyConfig) -> VerificationReport {
    let started = Instant::now();
    let work = |i: usize, p: &&Polymatroid| check(p, &mut Ctx::new(cfg, i));
    let tallies = if cfg.parallel {
        map_indexed(instances, work)
    } else {
        map_indexed_sequential(instances, work)
    };
    merge(id, instances, tallies, started)
}

/// Runs one checker over a catalog. `explore_conjecture` ignores the catalog
/// and generates its own instances.
pub fn run_checker(id: &str, catalog: &[CatalogEntry], cfg: &VerifyConfig) -> Result<VerificationReport, PmError> {
    if id == "explore_conjecture" {
        return explore_conjecture(cfg.k, cfg.budget, cfg.seed, cfg);
    }
    let check = instance_check(id).ok_or_else(|| PmError::Precondition(format!("unknown checker {id:?}")))?;
    let instances: Vec<&Polymatroid> = catalog.iter().map(|e| &e.polymatroid).collect();
    Ok(run_instances(id, check, &instances, cfg))
}

/// Runs the named checkers, or every checker for `"all"`.
pub fn run_suite(suite: &str, catalog: &[CatalogEntry], cfg: &VerifyConfig) -> Result<Vec<VerificationReport>, PmError> {
    let ids: Vec<&str> = if suite == "all" { CHECKERS.to_vec() } else { vec![suite] };
    ids.into_iter().map(|id| run_checker(id, catalog, cfg)).collect()
}

/// Searches seeded random k-polymatroids (compressions of uniform and graphic
/// matroids into blocks of at most `k` elements) for a connected M and a
/// connected proper minor N admitting no connectivity-preserving removal.
/// A pass only means no counterexample was found within the budget.
pub fn explore_conjecture(k: usize, budget: usize, seed: u64, cfg: &VerifyConfig) -> Result<VerificationReport, PmError> {
    if k == 0 {
        return Err(PmError::ZeroBound);
    }
    let blocks = cfg.max_n.max(2);
    let bases = base_matroids((k * blocks).min(10))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((k as u64) << 32));
    let mut instances = Vec::with_capacity(budget);
    let mut attempts = 0usize;
    while instances.len() < budget && attempts < budget.saturating_mul(100).max(100) {
        attempts += 1;
        let p = random_compression(&mut rng, &bases, k, blocks)?;
        if p.len() >= 2 && p.is_connected() {
            instances.push(p);
        }
    }
    let refs: Vec<&Polymatroid> = instances.iter().collect();
    Ok(run_instances("explore_conjecture", main_theorem, &refs, cfg))
}

/// Re-runs the checker named in a counterexample on its instance. For the
/// removal-search checkers with a recorded minor only that pair is checked.
pub fn replay(cx: &Counterexample, cfg: &VerifyConfig) -> Result<VerificationReport, PmError> {
    let started = Instant::now();
    let check = instance_check(&cx.checker)
        .ok_or_else(|| PmError::Precondition(format!("unknown checker {:?}", cx.checker)))?;
    let instances = [&cx.instance];
    let tally = match (&cx.minor, cx.checker.as_str()) {
        (Some(n), "main_theorem" | "explore_conjecture") => {
            let mut t = Tally {
                checked: 1,
                ..Tally::default()
            };
            match find_removal_step(&cx.instance, n) {
                Ok(step) => {
                    if let Some(why) = step_problem(&cx.instance, n, &step) {
                        t.fail(Some(n.clone()), format!("returned step {step} is invalid: {why}"));
                    }
                }
                Err(err) => t.fail(Some(n.clone()), format!("search error: {err}")),
            }
            t
        }
        _ => check(&cx.instance, &mut Ctx::new(cfg, 0)),
    };
    Ok(merge(&cx.checker, &instances, vec![tally], started))
}

/// Canonical keys of the catalog entries, for duplicate detection in tests.
pub fn catalog_keys(catalog: &[CatalogEntry]) -> Vec<CanonicalKey> {
    catalog.iter().map(|e| e.polymatroid.canonical_key()).collect()
}
