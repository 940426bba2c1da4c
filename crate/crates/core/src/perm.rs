//! Permutations of `{0, ..., n-1}`, their action on the edges of `K_n`, cycle
//! statistics, and the pairwise weight of a permutation tuple.
//!
//! Edges are indexed in colex order: `{u, v}` with `u < v` has index
//! `v(v-1)/2 + u`, so the edges of `K_n` are exactly the indices
//! `0..n(n-1)/2` and the edges of `K_{n-1}` form a prefix.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use rand_chacha::rand_core::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Number of edges of `K_n`.
#[inline]
pub const fn num_edges(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// An edge `{u, v}` of a complete graph, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    u: usize,
    v: usize,
}

impl Edge {
    /// Builds the edge `{a, b}`; endpoints may be given in either order.
    pub fn new(a: usize, b: usize) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge { u: a, v: b }),
            std::cmp::Ordering::Greater => Ok(Edge { u: b, v: a }),
            std::cmp::Ordering::Equal => Err(Error::input(format!("loop edge {{{a}, {a}}}"))),
        }
    }

    #[inline]
    pub(crate) const fn new_unchecked(u: usize, v: usize) -> Self {
        if u < v {
            Edge { u, v }
        } else {
            Edge { u: v, v: u }
        }
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn v(&self) -> usize {
        self.v
    }

    /// Colex index of this edge in `K_n`.
    pub fn index(&self, n: usize) -> Result<usize> {
        edge_index(*self, n)
    }

    #[inline]
    pub(crate) const fn index_unchecked(&self) -> usize {
        colex(self.u, self.v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u, self.v)
    }
}

#[inline]
pub(crate) const fn colex(u: usize, v: usize) -> usize {
    v * (v - 1) / 2 + u
}

/// Index of `e` among the edges of `K_n` in colex order.
pub fn edge_index(e: Edge, n: usize) -> Result<usize> {
    if e.v >= n {
        return Err(Error::input(format!("edge {e} has a vertex outside 0..{n}")));
    }
    Ok(e.index_unchecked())
}

/// Inverse of [`edge_index`].
pub fn edge_from_index(index: usize, n: usize) -> Result<Edge> {
    if index >= num_edges(n) {
        return Err(Error::input(format!(
            "edge index {index} out of range for K_{n} ({} edges)",
            num_edges(n)
        )));
    }
    Ok(edge_from_index_unchecked(index))
}

pub(crate) fn edge_from_index_unchecked(index: usize) -> Edge {
    // largest v with v(v-1)/2 <= index
    let mut v = ((1.0 + (1.0 + 8.0 * index as f64).sqrt()) / 2.0) as usize;
    while v * (v - 1) / 2 > index {
        v -= 1;
    }
    while (v + 1) * v / 2 <= index {
        v += 1;
    }
    Edge {
        u: index - v * (v - 1) / 2,
        v,
    }
}

/// All edges of `K_n` in colex order.
pub fn edges(n: usize) -> impl Iterator<Item = Edge> {
    (1..n).flat_map(|v| (0..v).map(move |u| Edge { u, v }))
}

/// A bijection of `{0, ..., n-1}`; `image[i]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm {
    image: Vec<usize>,
}

/// Fixed points and 2-cycles of a permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleStats {
    pub fixed: usize,
    pub two_cycles: usize,
}

impl CycleStats {
    /// `C(f, 2) + t`, the number of edges the permutation fixes setwise.
    pub fn weight(&self) -> u64 {
        (self.fixed * self.fixed.saturating_sub(1) / 2 + self.two_cycles) as u64
    }
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            image: (0..n).collect(),
        }
    }

    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::input("permutation of an empty set"));
        }
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n || seen[x] {
                return Err(Error::input(format!("{image:?} is not a bijection of 0..{n}")));
            }
            seen[x] = true;
        }
        Ok(Perm { image })
    }

    pub(crate) fn from_vec_unchecked(image: Vec<usize>) -> Self {
        debug_assert!(image.is_empty() || Perm::new(image.clone()).is_ok());
        Perm { image }
    }

    /// Uniformly random permutation of `0..n`.
    pub fn random<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut image: Vec<usize> = (0..n).collect();
        rng::shuffle(rng, &mut image);
        Perm { image }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.image.iter().enumerate() {
            inv[x] = i;
        }
        Perm { image: inv }
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &Perm) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::input(format!(
                "cannot compose permutations of sizes {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(Perm {
            image: other.image.iter().map(|&x| self.image[x]).collect(),
        })
    }

    /// The edge `{σ(u), σ(v)}`.
    pub fn apply_to_edge(&self, e: Edge) -> Result<Edge> {
        if e.v >= self.len() {
            return Err(Error::input(format!(
                "edge {e} is not an edge of K_{}",
                self.len()
            )));
        }
        Ok(self.apply_to_edge_unchecked(e))
    }

    #[inline]
    pub(crate) fn apply_to_edge_unchecked(&self, e: Edge) -> Edge {
        Edge::new_unchecked(self.image[e.u], self.image[e.v])
    }

    /// The permutation induced on edge indices: `result[i]` is the colex index
    /// of the image of edge `i`.
    pub fn edge_action(&self) -> Vec<usize> {
        edges(self.len())
            .map(|e| self.apply_to_edge_unchecked(e).index_unchecked())
            .collect()
    }

    /// Disjoint cycles, each starting at its smallest element, ordered by that
    /// element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        cycles_of(&self.image)
    }

    pub fn cycle_stats(&self) -> CycleStats {
        let mut fixed = 0;
        let mut two_cycles = 0;
        for (i, &x) in self.image.iter().enumerate() {
            if x == i {
                fixed += 1;
            } else if i < x && self.image[x] == i {
                two_cycles += 1;
            }
        }
        CycleStats { fixed, two_cycles }
    }

    /// Number of edges `e` with `σ(e) = e`.
    pub fn fixed_edge_count(&self) -> usize {
        edges(self.len())
            .filter(|&e| self.apply_to_edge_unchecked(e) == e)
            .count()
    }

    /// All permutations of `0..n` in lexicographic order of their images.
    pub fn all(n: usize) -> AllPerms {
        AllPerms {
            next: Some((0..n).collect()),
        }
    }
}

pub(crate) fn cycles_of(image: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; image.len()];
    let mut out = Vec::new();
    for start in 0..image.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x);
            x = image[x];
        }
        out.push(cycle);
    }
    out
}

/// Iterator over `S_n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct AllPerms {
    next: Option<Vec<usize>>,
}

impl Iterator for AllPerms {
    type Item = Perm;

    fn next(&mut self) -> Option<Perm> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Perm { image: current })
    }
}

/// Advances `a` to its lexicographic successor; false when `a` was the last.
pub(crate) fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.image.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for Perm {
    type Err = Error;

    /// 0-based one-line notation, comma-separated: `"1,0,2,3"`.
    fn from_str(s: &str) -> Result<Self> {
        let image = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::input(format!("bad permutation entry {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Perm::new(image)
    }
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = Error;

    fn try_from(image: Vec<usize>) -> Result<Self> {
        Perm::new(image)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Self {
        p.image
    }
}

/// `m >= 1` permutations of a common ground set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Perm>", into = "Vec<Perm>")]
pub struct PermTuple {
    n: usize,
    perms: Vec<Perm>,
}

impl PermTuple {
    pub fn new(perms: Vec<Perm>) -> Result<Self> {
        let n = perms
            .first()
            .ok_or_else(|| Error::input("empty permutation tuple"))?
            .len();
        if let Some(p) = perms.iter().find(|p| p.len() != n) {
            return Err(Error::input(format!(
                "permutation tuple mixes sizes {n} and {}",
                p.len()
            )));
        }
        Ok(PermTuple { n, perms })
    }

    pub fn identity(n: usize, m: usize) -> Self {
        assert!(n >= 1 && m >= 1);
        PermTuple {
            n,
            perms: vec![Perm::identity(n); m],
        }
    }

    pub fn random<R: RngCore + ?Sized>(n: usize, m: usize, rng: &mut R) -> Self {
        PermTuple {
            n,
            perms: (0..m).map(|_| Perm::random(n, rng)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }

    pub fn get(&self, k: usize) -> &Perm {
        &self.perms[k]
    }

    /// `π_k^{-1} π_{k'}`.
    pub fn relative(&self, k: usize, k2: usize) -> Perm {
        let inv = self.perms[k].inverse();
        inv.compose(&self.perms[k2]).expect("tuple members share n")
    }

    /// `(τσ_1, ..., τσ_m)`.
    pub fn left_multiply(&self, tau: &Perm) -> Result<Self> {
        let perms = self
            .perms
            .iter()
            .map(|p| tau.compose(p))
            .collect::<Result<Vec<_>>>()?;
        PermTuple::new(perms)
    }
}

impl fmt::Display for PermTuple {
    /// Members separated by `;`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.perms.iter().enumerate() {
            if k > 0 {
                f.write_str(";")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for PermTuple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let perms = s
            .split(';')
            .map(str::parse)
            .collect::<Result<Vec<Perm>>>()?;
        PermTuple::new(perms)
    }
}

impl TryFrom<Vec<Perm>> for PermTuple {
    type Error = Error;

    fn try_from(perms: Vec<Perm>) -> Result<Self> {
        PermTuple::new(perms)
    }
}

impl From<PermTuple> for Vec<Perm> {
    fn from(t: PermTuple) -> Self {
        t.perms
    }
}

/// Cycle statistics of `π_k^{-1} π_{k'}` for one pair `k < k'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairStat {
    pub k: usize,
    pub k2: usize,
    pub fixed: usize,
    pub two_cycles: usize,
    pub weight: u64,
}

/// Pairwise weights of a tuple, the weight-ordered pair list and its greedy
/// spanning-tree subsequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightReport {
    /// One entry per pair `k < k'`, lexicographic.
    pub pair_stats: Vec<PairStat>,
    pub total_weight: u64,
    /// Pairs by weight descending, ties broken lexicographically.
    pub ordered_pairs: Vec<(usize, usize)>,
    /// First `m-1` pairs of `ordered_pairs` forming a spanning tree of `K_m`.
    pub tree: Vec<(usize, usize)>,
    /// `Σ_ℓ ℓ · weight(tree[ℓ-1])`.
    pub tree_bound: u64,
}

pub fn weight_report(pi: &PermTuple) -> Result<WeightReport> {
    let m = pi.m();
    if m < 2 {
        return Err(Error::input("weight report needs at least two permutations"));
    }
    let mut pair_stats = Vec::with_capacity(m * (m - 1) / 2);
    for k in 0..m {
        for k2 in k + 1..m {
            let stats = pi.relative(k, k2).cycle_stats();
            pair_stats.push(PairStat {
                k,
                k2,
                fixed: stats.fixed,
                two_cycles: stats.two_cycles,
                weight: stats.weight(),
            });
        }
    }
    let total_weight = pair_stats.iter().map(|s| s.weight).sum();

    let mut order: Vec<&PairStat> = pair_stats.iter().collect();
    // stable sort keeps the lexicographic order among equal weights
    order.sort_by_key(|e| std::cmp::Reverse(e.weight));
    let ordered_pairs: Vec<(usize, usize)> = order.iter().map(|s| (s.k, s.k2)).collect();

    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut tree = Vec::with_capacity(m - 1);
    let mut tree_bound = 0u64;
    for s in &order {
        if tree.len() == m - 1 {
            break;
        }
        let (a, b) = (find(&mut parent, s.k), find(&mut parent, s.k2));
        if a != b {
            parent[a] = b;
            tree.push((s.k, s.k2));
            tree_bound += tree.len() as u64 * s.weight;
        }
    }

    Ok(WeightReport {
        pair_stats,
        total_weight,
        ordered_pairs,
        tree,
        tree_bound,
    })
}

pub(crate) fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `n! / (f! 2^t t!)`, an upper bound on the number of permutations of `0..n`
/// with exactly `f` fixed points and `t` 2-cycles. Exact whenever
/// `n - f - 2t = 0`.
pub fn perm_count_bound(n: usize, f: usize, t: usize) -> Result<BigUint> {
    if f > n || 2 * t > n - f {
        return Err(Error::input(format!(
            "no permutation of {n} points has {f} fixed points and {t} 2-cycles"
        )));
    }
    let denom = factorial(f) * (BigUint::one() << t) * factorial(t);
    Ok(factorial(n) / denom)
}

/// Exact number of permutations of `0..n` with `f` fixed points and `t`
/// 2-cycles, by enumerating `S_n` (`n <= 8`).
pub fn count_perms_with_stats(n: usize, f: usize, t: usize) -> Result<u64> {
    if n > 8 {
        return Err(Error::capability(format!(
            "exhaustive permutation count limited to n <= 8 (got {n})"
        )));
    }
    let target = CycleStats {
        fixed: f,
        two_cycles: t,
    };
    Ok(Perm::all(n).filter(|p| p.cycle_stats() == target).count() as u64)
}
