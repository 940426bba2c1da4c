//! The collision graph `G_π` and exact counts of its proper colorings.
//!
//! Vertex `β_k(e)` stands for edge `e` of coloring `k` and has id
//! `k · C(n,2) + e`. Two copies `β_k(e)`, `β_{k'}(e')` with `k ≠ k'` are
//! adjacent when they sit on the same edge under the identity tuple
//! (`e = e'`) or under `π` (`π_k(e) = π_{k'}(e')`). A coloring tuple makes
//! both the identity tuple and `π` rainbow stackings exactly when
//! `β_k(e) ↦ χ_k(e)` is a proper vertex coloring, so the number `N_π` of
//! proper `r`-colorings gives `E[Z_id Z_π] = r^{-m C(n,2)} N_π`.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{e_nmr_exact, ln_e_nmr};
use crate::perm::{factorial, num_edges, weight_report, Perm, PermTuple};
use crate::real::BigReal;
use crate::stacking::StackingInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Provenance {
    /// `e = e'` only.
    SameEdge,
    /// `π_k(e) = π_{k'}(e')` with `e ≠ e'`.
    PiCollision,
    /// `e = e'` and `π_k(e) = π_{k'}(e)`.
    Both,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::SameEdge => "same-edge",
            Provenance::PiCollision => "pi-collision",
            Provenance::Both => "both",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphEdge {
    pub u: usize,
    pub v: usize,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionGraph {
    n: usize,
    m: usize,
    /// Sorted by `(u, v)` with `u < v`.
    edges: Vec<GraphEdge>,
    adjacency: Vec<Vec<usize>>,
}

pub fn build_collision_graph(pi: &PermTuple) -> Result<CollisionGraph> {
    let (n, m) = (pi.n(), pi.m());
    if m < 2 {
        return Err(Error::input("the collision graph needs m >= 2"));
    }
    let ne = num_edges(n);
    let actions: Vec<Vec<usize>> = pi.perms().iter().map(Perm::edge_action).collect();
    let inverses: Vec<Vec<usize>> = actions
        .iter()
        .map(|a| {
            let mut inv = vec![0; a.len()];
            for (e, &p) in a.iter().enumerate() {
                inv[p] = e;
            }
            inv
        })
        .collect();
    let mut edges = Vec::new();
    for k in 0..m {
        for k2 in k + 1..m {
            for e in 0..ne {
                let provenance = if actions[k][e] == actions[k2][e] {
                    Provenance::Both
                } else {
                    Provenance::SameEdge
                };
                edges.push(GraphEdge { u: k * ne + e, v: k2 * ne + e, provenance });
                let e2 = inverses[k2][actions[k][e]];
                if e2 != e {
                    edges.push(GraphEdge {
                        u: k * ne + e,
                        v: k2 * ne + e2,
                        provenance: Provenance::PiCollision,
                    });
                }
            }
        }
    }
    edges.sort_unstable_by_key(|g| (g.u, g.v));
    let mut adjacency = vec![Vec::new(); m * ne];
    for g in &edges {
        adjacency[g.u].push(g.v);
        adjacency[g.v].push(g.u);
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    Ok(CollisionGraph { n, m, edges, adjacency })
}

impl CollisionGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// `(k, e)` for vertex `β_k(e)`.
    pub fn vertex_label(&self, v: usize) -> (usize, usize) {
        let ne = num_edges(self.n);
        (v / ne, v % ne)
    }

    pub fn vertex_id(&self, k: usize, e: usize) -> usize {
        k * num_edges(self.n) + e
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex_count()];
        let mut out = Vec::new();
        for s in 0..self.vertex_count() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                for &w in &self.adjacency[comp[i]] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_proper_coloring(&self, colors: &[u32]) -> bool {
        colors.len() == self.vertex_count() && self.edges.iter().all(|g| colors[g.u] != colors[g.v])
    }

    /// Adjacency-list text: `#` comment lines with the dimensions and one
    /// `# u v provenance` line per edge, then one line `v w1 w2 ...` per
    /// vertex listing its neighbors `w > v`.
    pub fn to_adjacency_list(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# collision graph n={} m={} vertices={} edges={}",
            self.n,
            self.m,
            self.vertex_count(),
            self.edge_count()
        );
        let _ = writeln!(s, "# vertex k*C(n,2)+e is copy k of edge e");
        for g in &self.edges {
            let _ = writeln!(s, "# {} {} {}", g.u, g.v, g.provenance);
        }
        for v in 0..self.vertex_count() {
            let _ = write!(s, "{v}");
            for &w in self.adjacency[v].iter().filter(|&&w| w > v) {
                let _ = write!(s, " {w}");
            }
            s.push('\n');
        }
        s
    }
}

/// The vertex coloring `β_k(e) ↦ χ_k(e)` of the collision graph of any
/// `π` over this instance.
pub fn induced_vertex_coloring(inst: &StackingInstance) -> Vec<u32> {
    inst.colorings()
        .iter()
        .flat_map(|c| c.colors().iter().copied())
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountMethod {
    /// Closed forms for isolated vertices, edges and cycles, deletion and
    /// contraction otherwise.
    #[default]
    Auto,
    /// Deletion and contraction on every component with more than one
    /// vertex, without the cycle formula.
    DeletionContraction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingGuard {
    pub max_component: usize,
    pub max_total: usize,
    pub override_guard: bool,
    pub method: CountMethod,
}

impl Default for CountingGuard {
    fn default() -> Self {
        CountingGuard {
            max_component: 16,
            max_total: 20,
            override_guard: false,
            method: CountMethod::Auto,
        }
    }
}

impl CountingGuard {
    pub fn overridden() -> Self {
        CountingGuard { override_guard: true, ..CountingGuard::default() }
    }

    pub fn with_method(method: CountMethod) -> Self {
        CountingGuard { method, ..CountingGuard::default() }
    }
}

/// Largest component the deletion-contraction engine can represent.
pub const MAX_COMPONENT_BITS: usize = 64;

pub fn count_proper_colorings(g: &CollisionGraph, r: u32) -> Result<BigUint> {
    count_proper_colorings_with(g, r, CountingGuard::default())
}

pub fn count_proper_colorings_with(g: &CollisionGraph, r: u32, guard: CountingGuard) -> Result<BigUint> {
    let comps = g.components();
    let biggest = comps.iter().map(Vec::len).max().unwrap_or(0);
    let allowed = guard.override_guard
        || g.m == 2
        || biggest <= guard.max_component
        || g.vertex_count() <= guard.max_total;
    if !allowed {
        return Err(Error::capability(format!(
            "component with {biggest} vertices exceeds the counting guard \
             ({} per component or {} in total)",
            guard.max_component, guard.max_total
        )));
    }
    let mut total = BigUint::one();
    for comp in &comps {
        let f = count_component(g, comp, r, guard.method)?;
        if f.is_zero() {
            return Ok(f);
        }
        total *= f;
    }
    Ok(total)
}

fn cycle_count(len: usize, r: u32) -> BigUint {
    let rm1 = BigUint::from(r.saturating_sub(1));
    let p = rm1.pow(len as u32);
    if len.is_multiple_of(2) {
        p + rm1
    } else {
        p - rm1
    }
}

fn count_component(g: &CollisionGraph, comp: &[usize], r: u32, method: CountMethod) -> Result<BigUint> {
    let v = comp.len();
    let e: usize = comp.iter().map(|&x| g.adjacency[x].len()).sum::<usize>() / 2;
    if method == CountMethod::Auto {
        if v == 1 {
            return Ok(BigUint::from(r));
        }
        if v == 2 {
            return Ok(BigUint::from(r) * BigUint::from(r.saturating_sub(1)));
        }
        if e == v && comp.iter().all(|&x| g.adjacency[x].len() == 2) {
            return Ok(cycle_count(v, r));
        }
    }
    if v > MAX_COMPONENT_BITS {
        return Err(Error::capability(format!(
            "component with {v} vertices is beyond deletion-contraction ({MAX_COMPONENT_BITS} max)"
        )));
    }
    let index: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let adj: Vec<u64> = comp
        .iter()
        .map(|&x| g.adjacency[x].iter().fold(0u64, |acc, w| acc | 1u64 << index[w]))
        .collect();
    Ok(DeletionContraction::new(r).count(adj))
}

/// Chromatic-polynomial evaluation at a fixed `r` on graphs given as
/// adjacency bitmasks, memoized per invocation.
struct DeletionContraction {
    r: u32,
    memo: HashMap<Vec<u64>, BigUint>,
}

impl DeletionContraction {
    fn new(r: u32) -> Self {
        DeletionContraction { r, memo: HashMap::new() }
    }

    fn falling(&self, k: usize) -> BigUint {
        (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from((self.r as usize).saturating_sub(i)))
    }

    /// Drops vertex `i` and renumbers the rest.
    fn remove(adj: &[u64], i: usize) -> Vec<u64> {
        let low = (1u64 << i) - 1;
        adj.iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &a)| (a & low) | ((a >> 1) & !low))
            .collect()
    }

    fn count(&mut self, mut adj: Vec<u64>) -> BigUint {
        let mut factor = BigUint::one();
        // peel isolated vertices and leaves
        while let Some(i) = adj.iter().position(|a| a.count_ones() <= 1) {
            let deg = adj[i].count_ones();
            factor *= BigUint::from(if deg == 0 { self.r } else { self.r.saturating_sub(1) });
            if deg == 1 {
                let j = adj[i].trailing_zeros() as usize;
                adj[j] &= !(1u64 << i);
            }
            adj = Self::remove(&adj, i);
        }
        if adj.is_empty() || factor.is_zero() {
            return factor;
        }
        let v = adj.len();
        if adj.iter().all(|a| a.count_ones() as usize == v - 1) {
            return factor * self.falling(v);
        }
        if let Some(hit) = self.memo.get(&adj) {
            return factor * hit;
        }
        let (a, b) = Self::non_tree_edge(&adj);
        let mut deleted = adj.clone();
        deleted[a] &= !(1u64 << b);
        deleted[b] &= !(1u64 << a);
        let mut contracted = adj.clone();
        let merged = (contracted[a] | contracted[b]) & !(1u64 << a) & !(1u64 << b);
        contracted[a] = merged;
        for (j, row) in contracted.iter_mut().enumerate() {
            if j != a && j != b && *row & (1u64 << b) != 0 {
                *row = (*row & !(1u64 << b)) | (1u64 << a);
            }
        }
        let contracted = Self::remove(&contracted, b);
        let value = self.count(deleted) - self.count(contracted);
        self.memo.insert(adj, value.clone());
        factor * value
    }

    /// Smallest `(a, b)`, `a < b`, not in the breadth-first spanning forest
    /// grown from the lowest vertex of each component. Only called when
    /// every vertex has degree at least 2, so such an edge exists.
    fn non_tree_edge(adj: &[u64]) -> (usize, usize) {
        let v = adj.len();
        let mut tree = vec![0u64; v];
        let mut seen = 0u64;
        for s in 0..v {
            if seen & (1u64 << s) != 0 {
                continue;
            }
            seen |= 1u64 << s;
            let mut queue = vec![s];
            let mut i = 0;
            while i < queue.len() {
                let x = queue[i];
                let mut fresh = adj[x] & !seen;
                while fresh != 0 {
                    let w = fresh.trailing_zeros() as usize;
                    fresh &= fresh - 1;
                    seen |= 1u64 << w;
                    tree[x] |= 1u64 << w;
                    tree[w] |= 1u64 << x;
                    queue.push(w);
                }
                i += 1;
            }
        }
        for a in 0..v {
            let rest = adj[a] & !tree[a] & !(u64::MAX >> (63 - a));
            if rest != 0 {
                return (a, rest.trailing_zeros() as usize);
            }
        }
        unreachable!("graph with minimum degree 2 has a cycle")
    }
}

/// `N_π` for `m = 2` from the cycles of the relative edge permutation `ρ`
/// on the `C(n,2)` edges: `r(r-1)` per fixed edge and
/// `(r-1)^{2ℓ} + (r-1)` per cycle of length `ℓ >= 2`.
pub fn m2_closed_form(edge_perm: &Perm, r: u32) -> BigUint {
    edge_perm
        .cycles()
        .iter()
        .map(|c| {
            if c.len() == 1 {
                BigUint::from(r) * BigUint::from(r.saturating_sub(1))
            } else {
                cycle_count(2 * c.len(), r)
            }
        })
        .product()
}

/// [`m2_closed_form`] for the relative permutation `π_1^{-1} π_2` of a pair.
pub fn m2_closed_form_for(pi: &PermTuple, r: u32) -> Result<BigUint> {
    if pi.m() != 2 {
        return Err(Error::input(format!("closed form needs m = 2, got m = {}", pi.m())));
    }
    let rho = Perm::from_vec_unchecked(pi.relative(0, 1).edge_action());
    Ok(m2_closed_form(&rho, r))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCorrelation {
    #[serde(serialize_with = "crate::output::ser_biguint")]
    pub n_pi: BigUint,
    #[serde(serialize_with = "crate::output::ser_ratio")]
    pub exact: BigRational,
    pub value: BigReal,
}

fn r_power(r: u32, exp: usize) -> BigUint {
    BigUint::from(r).pow(exp as u32)
}

/// `E[Z_id Z_π] = r^{-m C(n,2)} N_π`.
pub fn pair_correlation(pi: &PermTuple, r: u32) -> Result<PairCorrelation> {
    pair_correlation_with(pi, r, CountingGuard::default())
}

pub fn pair_correlation_with(pi: &PermTuple, r: u32, guard: CountingGuard) -> Result<PairCorrelation> {
    if r == 0 {
        return Err(Error::input("palette size r must be at least 1"));
    }
    let g = build_collision_graph(pi)?;
    let n_pi = count_proper_colorings_with(&g, r, guard)?;
    let den = r_power(r, pi.m() * num_edges(pi.n()));
    let exact = BigRational::new(BigInt::from(n_pi.clone()), BigInt::from(den));
    Ok(PairCorrelation { value: BigReal::from_ratio(&exact), exact, n_pi })
}

/// `r^{m C(n,2)} E_{n,m,r}^2 exp(wt(π) / r̂)` with `r̂ = r - (2m-1)/3`.
pub fn entropy_bound_rhs(pi: &PermTuple, r: u32) -> Result<BigReal> {
    let (n, m) = (pi.n(), pi.m());
    let r_hat = f64::from(r) - (2.0 * m as f64 - 1.0) / 3.0;
    if r_hat <= 0.0 {
        return Err(Error::input(format!(
            "entropy bound needs r > (2m-1)/3, got r = {r}, m = {m}"
        )));
    }
    let wt = weight_report(pi)?.total_weight;
    let Some(ln_e) = ln_e_nmr(n, m, r)? else {
        return Ok(BigReal::zero());
    };
    // r̂ = (3r - 2m + 1) / 3 exactly
    let r_hat = BigReal::from_u64(3 * u64::from(r) + 1 - 2 * m as u64).div(&BigReal::from_u64(3));
    let ln_rhs = BigReal::from_u64(u64::from(r))
        .ln()
        .mul(&BigReal::from_u64((m * num_edges(n)) as u64))
        .add(&ln_e.mul(&BigReal::from_u64(2)))
        .add(&BigReal::from_u64(wt).div(&r_hat));
    Ok(ln_rhs.exp())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyDiagnostic {
    #[serde(serialize_with = "crate::output::ser_biguint")]
    pub n_pi: BigUint,
    pub rhs: BigReal,
    /// `N_π / rhs`; not asserted to be at most 1.
    pub ratio: f64,
    pub weight: u64,
}

pub fn entropy_diagnostic(pi: &PermTuple, r: u32) -> Result<EntropyDiagnostic> {
    let rhs = entropy_bound_rhs(pi, r)?;
    let g = build_collision_graph(pi)?;
    let n_pi = count_proper_colorings(&g, r)?;
    let ratio = if rhs.is_zero() {
        if n_pi.is_zero() { 0.0 } else { f64::INFINITY }
    } else {
        BigReal::from_biguint(&n_pi).div(&rhs).to_f64()
    };
    Ok(EntropyDiagnostic { n_pi, rhs, ratio, weight: weight_report(pi)?.total_weight })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecondMomentGuard {
    pub max_n: usize,
    pub override_guard: bool,
}

impl Default for SecondMomentGuard {
    fn default() -> Self {
        SecondMomentGuard { max_n: 4, override_guard: false }
    }
}

/// `E[Z^2] = n!^m Σ_{π ∈ S_n^m} E[Z_id Z_π]`, exactly.
pub fn second_moment_exact(n: usize, m: usize, r: u32) -> Result<BigRational> {
    second_moment_exact_with(n, m, r, SecondMomentGuard::default())
}

pub fn second_moment_exact_with(n: usize, m: usize, r: u32, guard: SecondMomentGuard) -> Result<BigRational> {
    if r == 0 || m == 0 {
        return Err(Error::input("second moment needs r >= 1 and m >= 1"));
    }
    let nf = factorial(n);
    if m == 1 {
        return Ok(BigRational::from_integer(BigInt::from(&nf * &nf)));
    }
    if !guard.override_guard && (m != 2 || n > guard.max_n) {
        return Err(Error::capability(format!(
            "exact second moment limited to m = 2, n <= {} (got n = {n}, m = {m})",
            guard.max_n
        )));
    }
    let counting = if guard.override_guard { CountingGuard::overridden() } else { CountingGuard::default() };
    let mut sum = BigUint::zero();
    let id = Perm::identity(n);
    let mut tail: Vec<Perm> = vec![id.clone(); m - 1];
    // π ranges over S_n^m; all tuples with the same relative permutations
    // have the same graph, but every tuple is summed as in the definition
    loop {
        for p0 in Perm::all(n) {
            let mut perms = vec![p0];
            perms.extend(tail.iter().cloned());
            let g = build_collision_graph(&PermTuple::new(perms)?)?;
            sum += count_proper_colorings_with(&g, r, counting)?;
        }
        if !advance(&mut tail, n) {
            break;
        }
    }
    let scale = BigInt::from(nf.pow(m as u32));
    let den = BigInt::from(r_power(r, m * num_edges(n)));
    Ok(BigRational::new(BigInt::from(sum) * scale, den))
}

/// Odometer over tuples of permutations in lexicographic order.
fn advance(tail: &mut [Perm], n: usize) -> bool {
    for slot in tail.iter_mut().rev() {
        let mut img = slot.image().to_vec();
        if crate::perm::next_permutation(&mut img) {
            *slot = Perm::new(img).expect("next permutation");
            return true;
        }
        *slot = Perm::identity(n);
    }
    false
}

/// `E_{n,m,r}` re-derived from the collision graph of the identity tuple.
pub fn diagonal_correlation(n: usize, m: usize, r: u32) -> Result<(BigRational, BigRational)> {
    let corr = pair_correlation(&PermTuple::identity(n, m), r)?;
    Ok((corr.exact, e_nmr_exact(n, m, r)?))
}
