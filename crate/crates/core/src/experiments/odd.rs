//! Exhaustive check that every pair of proper edge-colorings of `K_n`
//! admits a rainbow stacking, for small odd `n`.
//!
//! A pair of proper colorings is a pair of matching partitions `(P, Q)` plus
//! an identification of some classes of `P` with classes of `Q` (the classes
//! that share a color). Identifying more classes only adds constraints, so
//! it suffices to decide the maximal identifications: injections from the
//! classes of the partition with fewer classes into those of the other.
//!
//! Relabeling the vertices of `Q` is absorbed by the relative permutation,
//! and relabeling both partitions at once conjugates every stacking, so both
//! partitions range over isomorphism classes. Swapping the two colorings
//! inverts the relative permutation, so unordered pairs of classes suffice.
//!
//! For a relative permutation `σ` the set `C_σ` collects the pairs
//! `(class of P at position p, class of Q pulled back to p)`. The pair with
//! identification `ι` admits the stacking `(id, σ)` iff `C_σ` avoids `ι`.
//! The search below assigns `ι` one class at a time and tracks the set of
//! permutations still avoiding it; an empty set is a counterexample.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::coloring::{enumerate_matching_partitions, MatchingPartition};
use crate::error::{Error, Result};
use crate::perm::{Perm, PermTuple};
use crate::stacking::{find_rainbow_stacking, SearchBudget, SearchStatus, StackingInstance};

/// Largest `n` checked without an override.
pub const ODD_DEFAULT_MAX_N: usize = 5;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OddOptions {
    pub override_guard: bool,
    /// Worker threads for the class pairs (0 means the rayon default).
    pub threads: usize,
    /// Also build every maximal identification as an explicit instance and
    /// run the backtracking search on it.
    pub literal_search: bool,
    /// Where to write a counterexample certificate, if one is found.
    pub certificate_dir: Option<PathBuf>,
}

/// Largest number of explicit instances `literal_search` will build.
pub const LITERAL_SEARCH_LIMIT: u128 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OddStatus {
    AllPairsAdmitStackings,
    Counterexample,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// The two colorings as a stacking instance in text form.
    pub instance: String,
    /// `(class of the first coloring, class of the second)` pairs sharing a color.
    pub identification: Vec<(usize, usize)>,
    pub transcript_sha256: String,
    pub certificate_path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddReport {
    pub n: usize,
    pub status: OddStatus,
    pub matching_partitions: u64,
    pub isomorphism_classes: u64,
    pub class_pairs: u64,
    /// Maximal identifications decided, summed over class pairs.
    pub identifications: u128,
    pub search_nodes: u64,
    /// Explicit instances searched when `literal_search` is on.
    pub literal_instances: u64,
    pub counterexample: Option<Counterexample>,
}

impl OddReport {
    pub fn message(&self) -> &'static str {
        match self.status {
            OddStatus::AllPairsAdmitStackings => "all pairs admit stackings",
            OddStatus::Counterexample => "counterexample found",
        }
    }
}

/// Smallest image of `p` under all vertex relabelings.
pub fn isomorphism_representative(p: &MatchingPartition, perms: &[Perm]) -> MatchingPartition {
    perms
        .iter()
        .map(|s| p.relabel(s))
        .min()
        .unwrap_or_else(|| p.clone())
}

/// One representative per isomorphism class of matching partitions of `K_n`,
/// in increasing order, with the total number of partitions.
pub fn matching_partition_classes(n: usize) -> Result<(Vec<MatchingPartition>, u64)> {
    let perms: Vec<Perm> = Perm::all(n).collect();
    let mut total = 0u64;
    let mut reps = BTreeSet::new();
    for p in enumerate_matching_partitions(n)? {
        total += 1;
        reps.insert(isomorphism_representative(&p, &perms));
    }
    Ok((reps.into_iter().collect(), total))
}

fn falling(b: usize, a: usize) -> u128 {
    (0..a).map(|i| (b - i) as u128).product()
}

/// Bitsets over the relative permutations: `kill[i][j]` holds every `σ`
/// whose conflict set contains row class `i` paired with column class `j`.
struct PairSearch {
    rows: usize,
    cols: usize,
    words: usize,
    kill: Vec<Vec<u64>>,
    used: Vec<bool>,
    assign: Vec<usize>,
    nodes: u64,
}

impl PairSearch {
    fn new(p: &MatchingPartition, q: &MatchingPartition, perms: &[Perm]) -> (Self, bool) {
        let transpose = p.num_classes() > q.num_classes();
        let (rows, cols) = if transpose {
            (q.num_classes(), p.num_classes())
        } else {
            (p.num_classes(), q.num_classes())
        };
        let words = perms.len().div_ceil(64);
        let mut kill = vec![vec![0u64; words]; rows * cols];
        let cp = p.class_of_edge();
        let cq = q.class_of_edge();
        for (s, sigma) in perms.iter().enumerate() {
            // edge g of Q lands on position action[g]
            for (g, &pos) in sigma.edge_action().iter().enumerate() {
                let (i, j) = if transpose { (cq[g], cp[pos]) } else { (cp[pos], cq[g]) };
                kill[i * cols + j][s / 64] |= 1u64 << (s % 64);
            }
        }
        let search = PairSearch {
            rows,
            cols,
            words,
            kill,
            used: vec![false; cols],
            assign: Vec::with_capacity(rows),
            nodes: 0,
        };
        (search, transpose)
    }

    /// A row-to-column injection prefix that no permutation avoids.
    fn run(&mut self, alive: &[u64]) -> Option<Vec<usize>> {
        self.nodes += 1;
        if alive.iter().all(|&w| w == 0) {
            return Some(self.assign.clone());
        }
        let i = self.assign.len();
        if i == self.rows {
            return None;
        }
        let mut reachable = vec![0u64; self.words];
        for i2 in i..self.rows {
            for j in (0..self.cols).filter(|&j| !self.used[j]) {
                for (r, k) in reachable.iter_mut().zip(&self.kill[i2 * self.cols + j]) {
                    *r |= k;
                }
            }
        }
        if alive.iter().zip(&reachable).any(|(a, r)| a & !r != 0) {
            // some permutation avoids every remaining choice
            return None;
        }
        for j in 0..self.cols {
            if self.used[j] {
                continue;
            }
            let next: Vec<u64> = alive
                .iter()
                .zip(&self.kill[i * self.cols + j])
                .map(|(a, k)| a & !k)
                .collect();
            self.used[j] = true;
            self.assign.push(j);
            let hit = self.run(&next);
            self.assign.pop();
            self.used[j] = false;
            if hit.is_some() {
                return hit;
            }
        }
        None
    }
}

/// The instance given by two partitions and `(class of p, class of q)`
/// identifications; unidentified classes get distinct fresh colors.
pub fn identified_instance(
    p: &MatchingPartition,
    q: &MatchingPartition,
    identification: &[(usize, usize)],
) -> Result<StackingInstance> {
    let colors_p: Vec<u32> = (0..p.num_classes() as u32).collect();
    let mut next = p.num_classes() as u32;
    let colors_q: Vec<u32> = (0..q.num_classes())
        .map(|j| match identification.iter().find(|&&(_, jj)| jj == j) {
            Some(&(i, _)) => i as u32,
            None => {
                next += 1;
                next - 1
            }
        })
        .collect();
    let r = next.max(1);
    StackingInstance::new(vec![p.to_coloring(&colors_p, r)?, q.to_coloring(&colors_q, r)?])
}

fn full_identification(prefix: &[usize], rows: usize, cols: usize, transpose: bool) -> Vec<(usize, usize)> {
    let mut assign = prefix.to_vec();
    let mut free = (0..cols).filter(|j| !prefix.contains(j));
    while assign.len() < rows {
        assign.push(free.next().expect("rows <= cols"));
    }
    assign
        .into_iter()
        .enumerate()
        .map(|(i, j)| if transpose { (j, i) } else { (i, j) })
        .collect()
}

/// For each relative permutation in lexicographic order, the first edge
/// where the two pulled-back colors agree; `None` if some permutation is a
/// stacking.
fn blocking_transcript(inst: &StackingInstance, perms: &[Perm]) -> Result<Option<String>> {
    let mut text = String::new();
    let a = &inst.colorings()[0];
    for sigma in perms {
        let b = inst.colorings()[1].pullback(sigma)?;
        let Some(e) = (0..a.colors().len()).find(|&e| a.color_at(e) == b.color_at(e)) else {
            return Ok(None);
        };
        let _ = writeln!(text, "{sigma} {e}");
    }
    Ok(Some(text))
}

fn certify(
    n: usize,
    p: &MatchingPartition,
    q: &MatchingPartition,
    identification: Vec<(usize, usize)>,
    perms: &[Perm],
    dir: Option<&PathBuf>,
) -> Result<Counterexample> {
    let inst = identified_instance(p, q, &identification)?;
    let out = find_rainbow_stacking(&inst, SearchBudget::unlimited());
    let Some(transcript) = blocking_transcript(&inst, perms)? else {
        return Err(Error::input("claimed counterexample admits a stacking"));
    };
    if out.status != SearchStatus::ExhaustedNoSolution {
        return Err(Error::input("backtracking search disagrees with the identification search"));
    }
    let hash = hex::encode(Sha256::digest(transcript.as_bytes()));
    let mut path = None;
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let file = dir.join(format!("odd-n{n}-counterexample.txt"));
        let mut body = String::new();
        let _ = writeln!(body, "# pair of proper colorings of K_{n} with no rainbow stacking");
        let _ = writeln!(body, "# identified classes: {identification:?}");
        let _ = writeln!(body, "# transcript sha256: {hash}");
        body.push_str(&inst.to_string());
        body.push_str("# transcript: relative permutation, first blocked edge\n");
        for line in transcript.lines() {
            let _ = writeln!(body, "# {line}");
        }
        std::fs::write(&file, body).map_err(|e| Error::io(&file, e))?;
        path = Some(file);
    }
    Ok(Counterexample {
        instance: inst.to_string(),
        identification,
        transcript_sha256: hash,
        certificate_path: path,
    })
}

struct PairOutcome {
    identifications: u128,
    nodes: u64,
    literal: u64,
    counterexample: Option<Vec<(usize, usize)>>,
}

fn literal_check(p: &MatchingPartition, q: &MatchingPartition, transpose: bool) -> Result<(u64, bool)> {
    let (rows, cols) = if transpose {
        (q.num_classes(), p.num_classes())
    } else {
        (p.num_classes(), q.num_classes())
    };
    let mut idx: Vec<usize> = (0..cols).collect();
    let mut seen = BTreeSet::new();
    let mut count = 0;
    let mut all_found = true;
    loop {
        let prefix = idx[..rows].to_vec();
        if seen.insert(prefix.clone()) {
            let ident = full_identification(&prefix, rows, cols, transpose);
            let inst = identified_instance(p, q, &ident)?;
            count += 1;
            all_found &= find_rainbow_stacking(&inst, SearchBudget::unlimited()).status == SearchStatus::Found;
        }
        if !crate::perm::next_permutation(&mut idx) {
            break;
        }
    }
    Ok((count, all_found))
}

fn check_pair(p: &MatchingPartition, q: &MatchingPartition, perms: &[Perm], literal: bool) -> Result<PairOutcome> {
    let (mut search, transpose) = PairSearch::new(p, q, perms);
    let mut alive = vec![0u64; search.words];
    for s in 0..perms.len() {
        alive[s / 64] |= 1u64 << (s % 64);
    }
    let hit = search.run(&alive);
    let mut literal_count = 0;
    if literal {
        let (count, all_found) = literal_check(p, q, transpose)?;
        if all_found != hit.is_none() {
            return Err(Error::input("explicit search disagrees with the identification search"));
        }
        literal_count = count;
    }
    Ok(PairOutcome {
        identifications: falling(search.cols, search.rows),
        nodes: search.nodes,
        literal: literal_count,
        counterexample: hit.map(|prefix| full_identification(&prefix, search.rows, search.cols, transpose)),
    })
}

pub fn verify_odd_question(n: usize, options: &OddOptions) -> Result<OddReport> {
    if n.is_multiple_of(2) {
        return Err(Error::input(format!("n must be odd (got {n})")));
    }
    if n > ODD_DEFAULT_MAX_N && !options.override_guard {
        return Err(Error::capability(format!(
            "odd-n verification above n = {ODD_DEFAULT_MAX_N} needs the guard override"
        )));
    }
    let (reps, total) = matching_partition_classes(n)?;
    let perms: Vec<Perm> = Perm::all(n).collect();
    let pairs: Vec<(usize, usize)> = (0..reps.len())
        .flat_map(|i| (i..reps.len()).map(move |j| (i, j)))
        .collect();
    if options.literal_search {
        let planned: u128 = pairs
            .iter()
            .map(|&(i, j)| {
                let (a, b) = (reps[i].num_classes(), reps[j].num_classes());
                falling(a.max(b), a.min(b))
            })
            .sum();
        if planned > LITERAL_SEARCH_LIMIT && !options.override_guard {
            return Err(Error::capability(format!(
                "{planned} explicit instances exceed the literal search limit of {LITERAL_SEARCH_LIMIT}"
            )));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.threads)
        .build()
        .map_err(|e| Error::input(format!("cannot start worker pool: {e}")))?;
    let outcomes = pool.install(|| {
        pairs
            .par_iter()
            .map(|&(i, j)| check_pair(&reps[i], &reps[j], &perms, options.literal_search))
            .collect::<Result<Vec<_>>>()
    })?;

    let mut report = OddReport {
        n,
        status: OddStatus::AllPairsAdmitStackings,
        matching_partitions: total,
        isomorphism_classes: reps.len() as u64,
        class_pairs: pairs.len() as u64,
        identifications: 0,
        search_nodes: 0,
        literal_instances: 0,
        counterexample: None,
    };
    for (&(i, j), out) in pairs.iter().zip(outcomes) {
        report.identifications += out.identifications;
        report.search_nodes += out.nodes;
        report.literal_instances += out.literal;
        if let (Some(ident), None) = (out.counterexample, &report.counterexample) {
            report.status = OddStatus::Counterexample;
            report.counterexample = Some(certify(n, &reps[i], &reps[j], ident, &perms, options.certificate_dir.as_ref())?);
        }
    }
    Ok(report)
}

/// The witness for `(id, σ)` of an identified pair, if one exists, found by
/// the conflict-set search alone.
pub fn identified_pair_admits(p: &MatchingPartition, q: &MatchingPartition, identification: &[(usize, usize)]) -> Result<Option<PermTuple>> {
    let n = p.n();
    let cp = p.class_of_edge();
    let cq = q.class_of_edge();
    for sigma in Perm::all(n) {
        let ok = sigma
            .edge_action()
            .iter()
            .enumerate()
            .all(|(g, &pos)| !identification.contains(&(cp[pos], cq[g])));
        if ok {
            return Ok(Some(PermTuple::new(vec![Perm::identity(n), sigma])?));
        }
    }
    Ok(None)
}
