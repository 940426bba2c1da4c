//! Rainbow stackings: checking, backtracking search and exact counting.
//!
//! A tuple `(σ_1, ..., σ_m)` is a rainbow stacking of `χ_1, ..., χ_m` when,
//! for every edge `e`, the colors `χ_k(σ_k^{-1}(e))` are pairwise distinct.
//! Left multiplication by any `τ` maps stackings to stackings and acts
//! freely, so the search fixes `σ_1 = id` and the total count is `n!` times
//! the number of such reduced tuples.
//!
//! The search assigns vertex images round-robin across `σ_2, ..., σ_m`
//! (vertex 0 of each, then vertex 1, ...). Placing `σ_k(v) = w` puts every
//! edge `{u, v}` of `χ_k` with `u` already placed at the position
//! `{σ_k(u), w}`, and the placement fails as soon as that position already
//! holds the same color from another coloring.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coloring::{parse_colors, EdgeColoring};
use crate::error::{Error, Result};
use crate::perm::{colex, edges, factorial, num_edges, Perm, PermTuple};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StackingInstance {
    n: usize,
    r: u32,
    colorings: Vec<EdgeColoring>,
}

impl StackingInstance {
    /// All colorings must share `n` and the palette size `r`.
    pub fn new(colorings: Vec<EdgeColoring>) -> Result<Self> {
        let first = colorings
            .first()
            .ok_or_else(|| Error::input("instance needs at least one coloring"))?;
        let (n, r) = (first.n(), first.r());
        if let Some(c) = colorings.iter().find(|c| c.n() != n || c.r() != r) {
            return Err(Error::input(format!(
                "colorings disagree: (n, r) = ({n}, {r}) vs ({}, {})",
                c.n(),
                c.r()
            )));
        }
        Ok(StackingInstance { n, r, colorings })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.colorings.len()
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn colorings(&self) -> &[EdgeColoring] {
        &self.colorings
    }
}

impl fmt::Display for StackingInstance {
    /// `"n m r"` followed by each coloring in its two-line text form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.n, self.m(), self.r)?;
        for c in &self.colorings {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for StackingInstance {
    type Err = Error;

    /// Accepts each coloring either as a full two-line block (`"n r"` then
    /// colors) or as a bare colors line. A two-token line is always a block
    /// header since `C(n,2)` is never 2.
    fn from_str(s: &str) -> Result<Self> {
        let lines: Vec<(usize, &str)> = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .collect();
        let (hline, header) = *lines.first().ok_or_else(|| Error::parse(1, "empty instance"))?;
        let tok: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| Error::parse(hline, format!("bad integer {t:?}: {e}"))))
            .collect::<Result<_>>()?;
        let [n, m, r] = tok[..] else {
            return Err(Error::parse(hline, "expected header \"n m r\""));
        };
        let mut colorings = Vec::with_capacity(m);
        let mut rest = lines[1..].iter().peekable();
        while let Some(&(lineno, line)) = rest.next() {
            let colors = if line.split_whitespace().count() == 2 {
                let (cn, cr) = crate::coloring::parse_pair(line, lineno)?;
                if cn != n || cr != r {
                    return Err(Error::parse(
                        lineno,
                        format!("coloring header \"{cn} {cr}\" disagrees with instance"),
                    ));
                }
                match rest.next() {
                    Some(&(l2, body)) => parse_colors(body, l2)?,
                    // K_2 has a single edge; "n r" of K_1 cannot occur here
                    None => return Err(Error::parse(lineno, "coloring header without colors")),
                }
            } else {
                parse_colors(line, lineno)?
            };
            colorings.push(
                EdgeColoring::new(n, r as u32, colors)
                    .map_err(|e| Error::parse(lineno, e.to_string()))?,
            );
        }
        if colorings.len() != m {
            return Err(Error::parse(
                hline,
                format!("header announces {m} colorings, found {}", colorings.len()),
            ));
        }
        StackingInstance::new(colorings)
    }
}

/// Reads an instance file.
pub fn read_instance(path: &std::path::Path) -> Result<StackingInstance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.parse()
}

/// Caps on a single search; `None` means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub max_millis: Option<u64>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes: Some(max_nodes),
            max_millis: None,
        }
    }

    pub fn is_unlimited(&self) -> bool {
        self.max_nodes.is_none() && self.max_millis.is_none()
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_nodes == Some(0) || self.max_millis == Some(0) {
            return Err(Error::input("budget caps must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Pick the unassigned vertex with the fewest consistent images next
    /// (ties broken by round-robin order) instead of plain round-robin.
    pub most_constrained: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SearchStatus {
    Found,
    ExhaustedNoSolution,
    BudgetExceeded,
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchStatus::Found => "found",
            SearchStatus::ExhaustedNoSolution => "exhausted",
            SearchStatus::BudgetExceeded => "budget_exceeded",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub witness: Option<PermTuple>,
    pub nodes_expanded: u64,
}

/// True iff `sigma` is a rainbow stacking of the instance.
pub fn is_rainbow_stacking(inst: &StackingInstance, sigma: &PermTuple) -> Result<bool> {
    if sigma.m() != inst.m() || sigma.n() != inst.n() {
        return Err(Error::input(format!(
            "tuple of {} permutations of {} points for an instance with m = {}, n = {}",
            sigma.m(),
            sigma.n(),
            inst.m(),
            inst.n()
        )));
    }
    let pulled = inst
        .colorings
        .iter()
        .zip(sigma.perms())
        .map(|(chi, s)| chi.pullback(s))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..num_edges(inst.n)).all(|e| {
        let mut seen: Vec<u32> = pulled.iter().map(|c| c.color_at(e)).collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }))
}

pub fn find_rainbow_stacking(inst: &StackingInstance, budget: SearchBudget) -> SearchOutcome {
    find_rainbow_stacking_with(inst, budget, SearchOptions::default())
}

pub fn find_rainbow_stacking_with(
    inst: &StackingInstance,
    budget: SearchBudget,
    options: SearchOptions,
) -> SearchOutcome {
    if inst.m() == 1 {
        return SearchOutcome {
            status: SearchStatus::Found,
            witness: Some(PermTuple::identity(inst.n, 1)),
            nodes_expanded: 0,
        };
    }
    if inst.n >= 2 && (inst.r as usize) < inst.m() {
        return SearchOutcome {
            status: SearchStatus::ExhaustedNoSolution,
            witness: None,
            nodes_expanded: 0,
        };
    }
    let mut s = Searcher::new(inst, budget, options, Mode::First);
    let flow = s.dfs(0);
    let status = match flow {
        Flow::Stop if s.solution.is_some() => SearchStatus::Found,
        Flow::Stop => SearchStatus::BudgetExceeded,
        Flow::Continue => SearchStatus::ExhaustedNoSolution,
    };
    SearchOutcome {
        status,
        witness: s.solution.take(),
        nodes_expanded: s.nodes,
    }
}

/// Size limits for [`count_rainbow_stackings`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountGuard {
    pub max_n_m2: usize,
    pub max_n_m3: usize,
    /// Bound on `n!^{m-1}` for `m >= 4`.
    pub max_reduced_space: u64,
    pub override_guard: bool,
}

impl Default for CountGuard {
    fn default() -> Self {
        CountGuard {
            max_n_m2: 6,
            max_n_m3: 4,
            max_reduced_space: 1_000_000,
            override_guard: false,
        }
    }
}

impl CountGuard {
    pub fn overridden() -> Self {
        CountGuard {
            override_guard: true,
            ..CountGuard::default()
        }
    }

    fn check(&self, n: usize, m: usize) -> Result<()> {
        if self.override_guard || m <= 1 {
            return Ok(());
        }
        let ok = match m {
            2 => n <= self.max_n_m2,
            3 => n <= self.max_n_m3,
            _ => {
                let nf = factorial(n);
                let space = (0..m - 1).fold(BigUint::one(), |acc, _| acc * &nf);
                space <= BigUint::from(self.max_reduced_space)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::capability(format!(
                "exact stacking count for n = {n}, m = {m} exceeds the guard \
                 (n <= {} for m = 2, n <= {} for m = 3)",
                self.max_n_m2, self.max_n_m3
            )))
        }
    }
}

/// `total = Z`, the number of stackings in `S_n^m`; `reduced` counts those
/// with `σ_1 = id`, and `total = n! · reduced`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StackingCount {
    #[serde(serialize_with = "crate::output::ser_biguint")]
    pub total: BigUint,
    #[serde(serialize_with = "crate::output::ser_biguint")]
    pub reduced: BigUint,
}

pub fn count_rainbow_stackings(inst: &StackingInstance) -> Result<StackingCount> {
    count_rainbow_stackings_with(inst, CountGuard::default())
}

pub fn count_rainbow_stackings_with(
    inst: &StackingInstance,
    guard: CountGuard,
) -> Result<StackingCount> {
    guard.check(inst.n, inst.m())?;
    let reduced = if inst.m() == 1 {
        BigUint::one()
    } else if inst.n >= 2 && (inst.r as usize) < inst.m() {
        BigUint::zero()
    } else {
        let mut s = Searcher::new(inst, SearchBudget::unlimited(), SearchOptions::default(), Mode::Count);
        s.dfs(0);
        BigUint::from(s.count)
    };
    Ok(StackingCount {
        total: &reduced * factorial(inst.n),
        reduced,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    First,
    Count,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flow {
    Continue,
    Stop,
}

const EMPTY: u32 = u32::MAX;
const UNSET: usize = usize::MAX;

struct Searcher<'a> {
    n: usize,
    m: usize,
    colors: Vec<&'a [u32]>,
    /// `image[k][v] = σ_k(v)` or `UNSET`; row 0 is the identity.
    image: Vec<Vec<usize>>,
    taken: Vec<Vec<bool>>,
    /// Vertices already placed for each `k`, in placement order.
    placed: Vec<Vec<usize>>,
    /// `slot[p * m + k]`: color coloring `k` puts on position `p`.
    slot: Vec<u32>,
    /// Round-robin variable order `(k, v)`.
    order: Vec<(usize, usize)>,
    assigned: Vec<bool>,
    options: SearchOptions,
    mode: Mode,
    nodes: u64,
    count: u64,
    solution: Option<PermTuple>,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
    aborted: bool,
}

impl<'a> Searcher<'a> {
    fn new(inst: &'a StackingInstance, budget: SearchBudget, options: SearchOptions, mode: Mode) -> Self {
        let n = inst.n;
        let m = inst.m();
        let ne = num_edges(n);
        let colors: Vec<&[u32]> = inst.colorings.iter().map(|c| c.colors()).collect();
        let mut slot = vec![EMPTY; ne * m];
        for p in 0..ne {
            slot[p * m] = colors[0][p];
        }
        let mut image = vec![vec![UNSET; n]; m];
        image[0] = (0..n).collect();
        let order: Vec<(usize, usize)> = (0..n)
            .flat_map(|v| (1..m).map(move |k| (k, v)))
            .collect();
        Searcher {
            n,
            m,
            colors,
            image,
            taken: vec![vec![false; n]; m],
            placed: vec![Vec::with_capacity(n); m],
            slot,
            assigned: vec![false; order.len()],
            order,
            options,
            mode,
            nodes: 0,
            count: 0,
            solution: None,
            max_nodes: budget.max_nodes,
            deadline: budget
                .max_millis
                .map(|ms| Instant::now() + Duration::from_millis(ms)),
            aborted: false,
        }
    }

    /// Tries `σ_k(v) = w`; on success every affected slot is written.
    fn place(&mut self, k: usize, v: usize, w: usize) -> bool {
        let m = self.m;
        let mut done = 0;
        let mut ok = true;
        for i in 0..self.placed[k].len() {
            let u = self.placed[k][i];
            let x = self.image[k][u];
            let g = colex(u.min(v), u.max(v));
            let p = colex(x.min(w), x.max(w));
            let c = self.colors[k][g];
            let row = &self.slot[p * m..(p + 1) * m];
            if row.contains(&c) {
                ok = false;
                break;
            }
            self.slot[p * m + k] = c;
            done += 1;
        }
        if !ok {
            for i in 0..done {
                let u = self.placed[k][i];
                let x = self.image[k][u];
                let p = colex(x.min(w), x.max(w));
                self.slot[p * m + k] = EMPTY;
            }
            return false;
        }
        self.image[k][v] = w;
        self.taken[k][w] = true;
        self.placed[k].push(v);
        true
    }

    fn unplace(&mut self, k: usize, v: usize) {
        let m = self.m;
        let popped = self.placed[k].pop();
        debug_assert_eq!(popped, Some(v));
        let w = self.image[k][v];
        for i in 0..self.placed[k].len() {
            let u = self.placed[k][i];
            let x = self.image[k][u];
            let p = colex(x.min(w), x.max(w));
            self.slot[p * m + k] = EMPTY;
        }
        self.image[k][v] = UNSET;
        self.taken[k][w] = false;
    }

    fn out_of_budget(&mut self) -> bool {
        if let Some(cap) = self.max_nodes {
            if self.nodes >= cap {
                self.aborted = true;
            }
        }
        if let Some(deadline) = self.deadline {
            if self.nodes.is_multiple_of(1024) && Instant::now() >= deadline {
                self.aborted = true;
            }
        }
        self.aborted
    }

    fn domain_size(&mut self, k: usize, v: usize) -> usize {
        let mut size = 0;
        for w in 0..self.n {
            if !self.taken[k][w] && self.place(k, v, w) {
                self.unplace(k, v);
                size += 1;
            }
        }
        size
    }

    fn pick_variable(&mut self, depth: usize) -> Option<usize> {
        if !self.options.most_constrained {
            return Some(depth);
        }
        let mut best: Option<(usize, usize)> = None;
        for i in 0..self.order.len() {
            if self.assigned[i] {
                continue;
            }
            let (k, v) = self.order[i];
            let size = self.domain_size(k, v);
            if size == 0 {
                return None;
            }
            if best.is_none_or(|(_, s)| size < s) {
                best = Some((i, size));
                if size == 1 {
                    break;
                }
            }
        }
        best.map(|(i, _)| i)
    }

    fn record_solution(&mut self) -> Flow {
        match self.mode {
            Mode::Count => {
                self.count += 1;
                Flow::Continue
            }
            Mode::First => {
                let perms = self
                    .image
                    .iter()
                    .map(|img| Perm::from_vec_unchecked(img.clone()))
                    .collect();
                self.solution = Some(PermTuple::new(perms).expect("consistent sizes"));
                Flow::Stop
            }
        }
    }

    fn dfs(&mut self, depth: usize) -> Flow {
        if depth == self.order.len() {
            return self.record_solution();
        }
        let Some(var) = self.pick_variable(depth) else {
            return Flow::Continue;
        };
        let (k, v) = self.order[var];
        self.assigned[var] = true;
        let mut flow = Flow::Continue;
        for w in 0..self.n {
            if self.taken[k][w] || !self.place(k, v, w) {
                continue;
            }
            if self.out_of_budget() {
                self.unplace(k, v);
                flow = Flow::Stop;
                break;
            }
            self.nodes += 1;
            let inner = self.dfs(depth + 1);
            self.unplace(k, v);
            if inner == Flow::Stop {
                flow = Flow::Stop;
                break;
            }
        }
        self.assigned[var] = false;
        flow
    }
}

/// Stackings of a 2-coloring instance read as relative permutations: all
/// `σ` with `(id, σ)` a stacking, by direct enumeration of `S_n`.
pub fn relative_stackings(inst: &StackingInstance) -> Result<Vec<Perm>> {
    if inst.m() != 2 {
        return Err(Error::input("relative stackings need exactly two colorings"));
    }
    if inst.n > 9 {
        return Err(Error::capability("relative stacking enumeration limited to n <= 9"));
    }
    let id = Perm::identity(inst.n);
    let mut out = Vec::new();
    for s in Perm::all(inst.n) {
        let t = PermTuple::new(vec![id.clone(), s.clone()])?;
        if is_rainbow_stacking(inst, &t)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// Number of edges where the two colorings of a pair instance agree under the
/// relative permutation `σ` (0 iff `(id, σ)` is a stacking).
pub fn collisions(inst: &StackingInstance, sigma: &Perm) -> Result<usize> {
    if inst.m() != 2 || sigma.len() != inst.n {
        return Err(Error::input("collisions need a pair instance and a matching permutation"));
    }
    let a = &inst.colorings[0];
    let b = inst.colorings[1].pullback(sigma)?;
    Ok(edges(inst.n)
        .enumerate()
        .filter(|&(i, _)| a.color_at(i) == b.color_at(i))
        .count())
}

/// A bijection `σ: A → B` (as `(a, σ(a))` pairs in the order of `a`) whose
/// XOR sums `a ⊕ σ(a)` are pairwise distinct, if one exists.
pub fn find_distinct_sum_bijection(k: u32, a: &[u32], b: &[u32]) -> Result<Option<Vec<(u32, u32)>>> {
    if !(1..=20).contains(&k) {
        return Err(Error::input(format!("bit width k = {k} outside 1..=20")));
    }
    if a.len() != b.len() {
        return Err(Error::input(format!("|A| = {} but |B| = {}", a.len(), b.len())));
    }
    let limit = 1u32 << k;
    for set in [a, b] {
        if let Some(x) = set.iter().find(|&&x| x >= limit) {
            return Err(Error::input(format!("{x} is not a {k}-bit vector")));
        }
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input("sets must not repeat elements"));
        }
    }

    fn go(i: usize, a: &[u32], b: &[u32], used: &mut [bool], sums: &mut [bool], out: &mut Vec<(u32, u32)>) -> bool {
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            let s = (a[i] ^ b[j]) as usize;
            if used[j] || sums[s] {
                continue;
            }
            used[j] = true;
            sums[s] = true;
            out.push((a[i], b[j]));
            if go(i + 1, a, b, used, sums, out) {
                return true;
            }
            out.pop();
            used[j] = false;
            sums[s] = false;
        }
        false
    }

    let mut used = vec![false; b.len()];
    let mut sums = vec![false; limit as usize];
    let mut out = Vec::with_capacity(a.len());
    Ok(go(0, a, b, &mut used, &mut sums, &mut out).then_some(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: usize, r: u32, cols: &[&[u32]]) -> StackingInstance {
        StackingInstance::new(
            cols.iter()
                .map(|c| EdgeColoring::new(n, r, c.to_vec()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn is_rainbow_examples() {
        let single = inst(3, 2, &[&[0, 0, 1]]);
        assert!(is_rainbow_stacking(&single, &PermTuple::identity(3, 1)).unwrap());

        let diff = inst(2, 2, &[&[0], &[1]]);
        let same = inst(2, 2, &[&[0], &[0]]);
        for s in Perm::all(2) {
            let t = PermTuple::new(vec![Perm::identity(2), s]).unwrap();
            assert!(is_rainbow_stacking(&diff, &t).unwrap());
            assert!(!is_rainbow_stacking(&same, &t).unwrap());
        }
        assert!(is_rainbow_stacking(&diff, &PermTuple::identity(3, 2)).is_err());
    }

    #[test]
    fn find_examples() {
        let narrow = inst(3, 1, &[&[0, 0, 0], &[0, 0, 0]]);
        let out = find_rainbow_stacking(&narrow, SearchBudget::unlimited());
        assert_eq!(out.status, SearchStatus::ExhaustedNoSolution);
        assert_eq!(out.nodes_expanded, 0);

        let diff = inst(2, 2, &[&[0], &[1]]);
        let out = find_rainbow_stacking(&diff, SearchBudget::unlimited());
        assert_eq!(out.status, SearchStatus::Found);
        assert!(is_rainbow_stacking(&diff, out.witness.as_ref().unwrap()).unwrap());

        let single = inst(4, 1, &[&[0; 6]]);
        assert_eq!(
            find_rainbow_stacking(&single, SearchBudget::unlimited()).status,
            SearchStatus::Found
        );
    }

    #[test]
    fn budget_is_honoured() {
        // no stacking exists, and the search needs more than one node to see it
        let chi: Vec<u32> = vec![0, 1, 0, 1, 0, 1, 0, 1, 0, 1];
        let i = inst(5, 2, &[&chi, &chi]);
        let full = find_rainbow_stacking(&i, SearchBudget::unlimited());
        assert!(full.nodes_expanded > 1);
        let capped = find_rainbow_stacking(&i, SearchBudget::nodes(1));
        if full.status == SearchStatus::ExhaustedNoSolution {
            assert_eq!(capped.status, SearchStatus::BudgetExceeded);
            assert!(capped.witness.is_none());
        }
    }

    #[test]
    fn count_examples() {
        let diff = inst(2, 2, &[&[0], &[1]]);
        let c = count_rainbow_stackings(&diff).unwrap();
        assert_eq!(c.total, BigUint::from(4u32));
        assert_eq!(c.reduced, BigUint::from(2u32));

        let tri = inst(3, 3, &[&[0, 1, 2], &[0, 1, 2]]);
        let c = count_rainbow_stackings(&tri).unwrap();
        assert_eq!(c.total, BigUint::from(12u32));
        assert_eq!(c.reduced, BigUint::from(2u32));
        let rel = relative_stackings(&tri).unwrap();
        assert!(rel.iter().all(|p| p.cycles().len() == 1));
        assert_eq!(rel.len(), 2);

        let same = inst(2, 2, &[&[0], &[0]]);
        assert!(count_rainbow_stackings(&same).unwrap().total.is_zero());
    }

    #[test]
    fn count_guard() {
        let big = inst(7, 3, &[&[0; 21], &[1; 21]]);
        assert!(matches!(count_rainbow_stackings(&big), Err(Error::Capability(_))));
        let c = count_rainbow_stackings_with(&big, CountGuard::overridden()).unwrap();
        assert_eq!(c.total, factorial(7) * factorial(7));
    }

    #[test]
    fn most_constrained_agrees_with_default() {
        let mut rng = crate::rng::seeded_rng(77);
        for trial in 0..200 {
            let n = 3 + trial % 4;
            let m = 2 + trial % 2;
            let r = 2 + (trial % 4) as u32;
            let cols = (0..m)
                .map(|_| EdgeColoring::random_with(n, r, &mut rng).unwrap())
                .collect();
            let i = StackingInstance::new(cols).unwrap();
            let a = find_rainbow_stacking(&i, SearchBudget::unlimited());
            let b = find_rainbow_stacking_with(
                &i,
                SearchBudget::unlimited(),
                SearchOptions { most_constrained: true },
            );
            assert_eq!(a.status, b.status);
            if let Some(w) = &b.witness {
                assert!(is_rainbow_stacking(&i, w).unwrap());
            }
        }
    }

    #[test]
    fn distinct_sums() {
        let all = [0, 1, 2, 3];
        let bij = find_distinct_sum_bijection(2, &all, &all).unwrap().unwrap();
        let mut sums: Vec<u32> = bij.iter().map(|(x, y)| x ^ y).collect();
        sums.sort_unstable();
        assert_eq!(sums, vec![0, 1, 2, 3]);

        assert_eq!(find_distinct_sum_bijection(2, &[3], &[1]).unwrap(), Some(vec![(3, 1)]));
        assert_eq!(find_distinct_sum_bijection(2, &[0, 1], &[0, 1]).unwrap(), None);
        assert!(find_distinct_sum_bijection(2, &[0, 1], &[0]).is_err());
        assert!(find_distinct_sum_bijection(2, &[4], &[0]).is_err());
    }

    #[test]
    fn instance_text_round_trip() {
        let i = inst(3, 3, &[&[0, 1, 2], &[2, 1, 0]]);
        let text = i.to_string();
        assert_eq!(text, "3 2 3\n3 3\n0 1 2\n3 3\n2 1 0\n");
        assert_eq!(text.parse::<StackingInstance>().unwrap(), i);
        let compact = "3 2 3\n0 1 2\n2 1 0\n";
        assert_eq!(compact.parse::<StackingInstance>().unwrap(), i);
        assert!("3 2 3\n0 1 2\n".parse::<StackingInstance>().is_err());
        assert!("3 2 3\n0 1 2\n2 1 5\n".parse::<StackingInstance>().is_err());
        assert!("3 2\n".parse::<StackingInstance>().is_err());
    }
}
