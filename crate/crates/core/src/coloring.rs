//! Edge-colorings of `K_n`.
//!
//! A coloring stores one color per edge in colex order (see [`crate::perm`]).
//! The text format is two lines: `"n r"` and then the `C(n,2)` colors
//! separated by single spaces, each line terminated by `\n`.

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{colex, edge_from_index_unchecked, edges, num_edges, Edge, Perm};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeColoring {
    n: usize,
    r: u32,
    colors: Vec<u32>,
}

impl EdgeColoring {
    pub fn new(n: usize, r: u32, colors: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("coloring of K_0"));
        }
        if colors.len() != num_edges(n) {
            return Err(Error::input(format!(
                "K_{n} has {} edges but {} colors were given",
                num_edges(n),
                colors.len()
            )));
        }
        if let Some(c) = colors.iter().find(|&&c| c >= r) {
            return Err(Error::input(format!("color {c} outside palette 0..{r}")));
        }
        Ok(EdgeColoring { n, r, colors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn color(&self, e: Edge) -> Result<u32> {
        Ok(self.colors[e.index(self.n)?])
    }

    #[inline]
    pub fn color_at(&self, index: usize) -> u32 {
        self.colors[index]
    }

    /// Same colors, declared over a larger palette.
    pub fn with_palette(&self, r: u32) -> Result<Self> {
        EdgeColoring::new(self.n, r, self.colors.clone())
    }

    /// Edge indices of each color `0..r` (possibly empty classes).
    pub fn color_classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.r as usize];
        for (i, &c) in self.colors.iter().enumerate() {
            classes[c as usize].push(i);
        }
        classes
    }

    /// Number of distinct colors actually used.
    pub fn colors_used(&self) -> usize {
        self.color_classes().iter().filter(|c| !c.is_empty()).count()
    }

    /// Independent uniform colors from the stream seeded by `seed`.
    pub fn random(n: usize, r: u32, seed: u64) -> Result<Self> {
        let mut rng = rng::seeded_rng(seed);
        EdgeColoring::random_with(n, r, &mut rng)
    }

    /// Independent uniform colors drawn in colex edge order from `rng`.
    pub fn random_with<R: RngCore + ?Sized>(n: usize, r: u32, rng: &mut R) -> Result<Self> {
        if n < 2 {
            return Err(Error::input(format!("random coloring needs n >= 2 (got {n})")));
        }
        if r == 0 {
            return Err(Error::input("palette size r must be positive"));
        }
        let colors = (0..num_edges(n))
            .map(|_| rng::uniform_below(rng, r))
            .collect();
        Ok(EdgeColoring { n, r, colors })
    }

    /// `χ'(e) = χ(σ^{-1}(e))`.
    pub fn pullback(&self, sigma: &Perm) -> Result<Self> {
        if sigma.len() != self.n {
            return Err(Error::input(format!(
                "permutation of {} points applied to a coloring of K_{}",
                sigma.len(),
                self.n
            )));
        }
        // e = σ(g)  ⇒  χ'(e) = χ(g)
        let mut colors = vec![0; self.colors.len()];
        for (g, e) in sigma.edge_action().into_iter().enumerate() {
            colors[e] = self.colors[g];
        }
        Ok(EdgeColoring {
            n: self.n,
            r: self.r,
            colors,
        })
    }

    /// True iff edges sharing a vertex always get different colors.
    pub fn is_proper(&self) -> bool {
        (0..self.n).all(|x| {
            let mut seen = std::collections::HashSet::with_capacity(self.n);
            (0..self.n)
                .filter(|&y| y != x)
                .all(|y| seen.insert(self.colors[colex(x.min(y), x.max(y))]))
        })
    }

    /// Applies `map` to every color; `map` must send `0..r` into `0..new_r`.
    pub fn relabel(&self, map: &[u32], new_r: u32) -> Result<Self> {
        if map.len() < self.r as usize {
            return Err(Error::input("color map shorter than the palette"));
        }
        EdgeColoring::new(
            self.n,
            new_r,
            self.colors.iter().map(|&c| map[c as usize]).collect(),
        )
    }
}

impl fmt::Display for EdgeColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.r)?;
        let mut first = true;
        for c in &self.colors {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{c}")?;
        }
        writeln!(f)
    }
}

impl FromStr for EdgeColoring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let header = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let (n, r) = parse_pair(header, 1)?;
        let body = lines.next().unwrap_or("");
        let colors = parse_colors(body, 2)?;
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::parse(3, "trailing content after colors"));
        }
        EdgeColoring::new(n, r as u32, colors)
    }
}

pub(crate) fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let tok: Vec<&str> = line.split_whitespace().collect();
    if tok.len() != 2 {
        return Err(Error::parse(lineno, format!("expected \"n r\", got {line:?}")));
    }
    let a = tok[0]
        .parse()
        .map_err(|e| Error::parse(lineno, format!("bad integer {:?}: {e}", tok[0])))?;
    let b = tok[1]
        .parse()
        .map_err(|e| Error::parse(lineno, format!("bad integer {:?}: {e}", tok[1])))?;
    Ok((a, b))
}

pub(crate) fn parse_colors(line: &str, lineno: usize) -> Result<Vec<u32>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<u32>()
                .map_err(|e| Error::parse(lineno, format!("bad color {t:?}: {e}")))
        })
        .collect()
}

/// A proper coloring from a 1-factorization.
///
/// Odd `n`: `{i, j} ↦ (i + j) mod n`, using `n` colors. Even `n`: the circle
/// method on the odd coloring of `K_{n-1}`, with vertex `n-1` joined to the
/// unique vertex missing each color class, using `n - 1` colors.
pub fn round_robin_coloring(n: usize) -> Result<EdgeColoring> {
    if n < 2 {
        return Err(Error::input(format!("round robin needs n >= 2 (got {n})")));
    }
    if n % 2 == 1 {
        let colors = edges(n).map(|e| ((e.u() + e.v()) % n) as u32).collect();
        return Ok(EdgeColoring {
            n,
            r: n as u32,
            colors,
        });
    }
    let odd = n - 1;
    let colors = edges(n)
        .map(|e| {
            if e.v() == n - 1 {
                // vertex x misses color 2x mod odd in the odd coloring
                ((2 * e.u()) % odd) as u32
            } else {
                ((e.u() + e.v()) % odd) as u32
            }
        })
        .collect();
    Ok(EdgeColoring {
        n,
        r: odd as u32,
        colors,
    })
}

/// The Cayley sum-graph pair on `F_2^k` minus two points.
///
/// For `i ∈ {1, 2}` the vertices of `χ_i` are `F_2^k \ {u_i, v_i}` in
/// increasing integer order, identified with `0..n` where `n = 2^k - 2`;
/// the color of `{x, y}` is `x XOR y`. Both colorings are declared over the
/// palette `0..2^k` (color 0 never occurs).
pub fn cayley_sum_pair(
    k: u32,
    u1: u32,
    v1: u32,
    u2: u32,
    v2: u32,
) -> Result<(EdgeColoring, EdgeColoring)> {
    if !(2..=16).contains(&k) {
        return Err(Error::input(format!("cayley sum pair needs 2 <= k <= 16 (got {k})")));
    }
    let size = 1u32 << k;
    if [u1, v1, u2, v2].iter().any(|&x| x >= size) {
        return Err(Error::input(format!("vectors must have {k} bits")));
    }
    if u1 == v1 || u2 == v2 {
        return Err(Error::input("u_i and v_i must differ"));
    }
    if u1 ^ v1 != u2 ^ v2 {
        return Err(Error::input("u1 + v1 must equal u2 + v2"));
    }
    let build = |u: u32, v: u32| {
        let verts: Vec<u32> = (0..size).filter(|&x| x != u && x != v).collect();
        let n = verts.len();
        let colors = edges(n).map(|e| verts[e.u()] ^ verts[e.v()]).collect();
        EdgeColoring { n, r: size, colors }
    };
    Ok((build(u1, v1), build(u2, v2)))
}

/// A partition of the edges of `K_n` into matchings: a proper edge-coloring
/// with the color names forgotten.
///
/// Classes hold sorted edge indices and are ordered by size descending, then
/// by smallest edge index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MatchingPartition {
    n: usize,
    classes: Vec<Vec<usize>>,
}

impl MatchingPartition {
    pub fn new(n: usize, classes: Vec<Vec<usize>>) -> Result<Self> {
        let ne = num_edges(n);
        let mut seen = vec![false; ne];
        for class in &classes {
            if class.is_empty() {
                return Err(Error::input("empty class in matching partition"));
            }
            let mut used = 0u64;
            for &i in class {
                if i >= ne || seen[i] {
                    return Err(Error::input(format!("edge index {i} repeated or out of range")));
                }
                seen[i] = true;
                let e = edge_from_index_unchecked(i);
                let mask = (1u64 << e.u()) | (1u64 << e.v());
                if used & mask != 0 {
                    return Err(Error::input("class is not a matching"));
                }
                used |= mask;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::input("classes do not cover every edge"));
        }
        Ok(Self::canonical(n, classes))
    }

    pub(crate) fn canonical(n: usize, mut classes: Vec<Vec<usize>>) -> Self {
        for c in &mut classes {
            c.sort_unstable();
        }
        classes.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        MatchingPartition { n, classes }
    }

    /// The matching partition given by the color classes of a proper coloring.
    pub fn from_coloring(chi: &EdgeColoring) -> Result<Self> {
        if !chi.is_proper() {
            return Err(Error::input("coloring is not proper"));
        }
        let classes = chi
            .color_classes()
            .into_iter()
            .filter(|c| !c.is_empty())
            .collect();
        Ok(Self::canonical(chi.n(), classes))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Class index of every edge.
    pub fn class_of_edge(&self) -> Vec<usize> {
        let mut out = vec![0; num_edges(self.n)];
        for (c, class) in self.classes.iter().enumerate() {
            for &i in class {
                out[i] = c;
            }
        }
        out
    }

    /// The coloring giving class `c` the color `colors[c]`.
    pub fn to_coloring(&self, colors: &[u32], r: u32) -> Result<EdgeColoring> {
        if colors.len() != self.classes.len() {
            return Err(Error::input("one color per class required"));
        }
        let mut out = vec![0; num_edges(self.n)];
        for (class, &c) in self.classes.iter().zip(colors) {
            for &i in class {
                out[i] = c;
            }
        }
        EdgeColoring::new(self.n, r, out)
    }

    /// Image of the partition under a relabeling of the vertices.
    pub fn relabel(&self, sigma: &Perm) -> Self {
        let action = sigma.edge_action();
        let classes = self
            .classes
            .iter()
            .map(|c| c.iter().map(|&i| action[i]).collect())
            .collect();
        Self::canonical(self.n, classes)
    }
}

/// Largest `n` accepted by [`enumerate_matching_partitions`].
pub const MATCHING_PARTITION_MAX_N: usize = 7;

/// Every partition of the edges of `K_n` into matchings, each exactly once.
///
/// Edges are placed in colex order, each into an existing class it is
/// compatible with or into a new class; partitions therefore appear in
/// lexicographic order of their restricted-growth strings.
pub fn enumerate_matching_partitions(n: usize) -> Result<MatchingPartitions> {
    if n == 0 || n > MATCHING_PARTITION_MAX_N {
        return Err(Error::capability(format!(
            "matching partition enumeration supports 1 <= n <= {MATCHING_PARTITION_MAX_N} (got {n})"
        )));
    }
    Ok(MatchingPartitions::new(n))
}

/// Stream of matching partitions; see [`enumerate_matching_partitions`].
#[derive(Debug, Clone)]
pub struct MatchingPartitions {
    n: usize,
    edge_masks: Vec<u64>,
    choice: Vec<usize>,
    class_masks: Vec<u64>,
    started: bool,
    done: bool,
}

impl MatchingPartitions {
    fn new(n: usize) -> Self {
        let edge_masks = edges(n)
            .map(|e| (1u64 << e.u()) | (1u64 << e.v()))
            .collect();
        MatchingPartitions {
            n,
            edge_masks,
            choice: Vec::new(),
            class_masks: Vec::new(),
            started: false,
            done: false,
        }
    }

    /// Smallest admissible class for edge `i` starting from `from`; the
    /// fresh class `class_masks.len()` is always admissible.
    fn first_fit(&self, i: usize, from: usize) -> Option<usize> {
        let mask = self.edge_masks[i];
        let open = self.class_masks.len();
        (from..=open).find(|&c| c == open || self.class_masks[c] & mask == 0)
    }

    fn place(&mut self, i: usize, c: usize) {
        if c == self.class_masks.len() {
            self.class_masks.push(0);
        }
        self.class_masks[c] |= self.edge_masks[i];
        self.choice.push(c);
    }

    fn unplace(&mut self, i: usize) -> usize {
        let c = self.choice.pop().expect("nonempty");
        self.class_masks[c] ^= self.edge_masks[i];
        if self.class_masks[c] == 0 && c + 1 == self.class_masks.len() {
            self.class_masks.pop();
        }
        c
    }

    fn fill(&mut self) {
        while self.choice.len() < self.edge_masks.len() {
            let i = self.choice.len();
            let c = self.first_fit(i, 0).expect("fresh class always fits");
            self.place(i, c);
        }
    }

    fn current(&self) -> MatchingPartition {
        let mut classes = vec![Vec::new(); self.class_masks.len()];
        for (i, &c) in self.choice.iter().enumerate() {
            classes[c].push(i);
        }
        MatchingPartition::canonical(self.n, classes)
    }
}

impl Iterator for MatchingPartitions {
    type Item = MatchingPartition;

    fn next(&mut self) -> Option<MatchingPartition> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill();
            return Some(self.current());
        }
        loop {
            let Some(i) = self.choice.len().checked_sub(1) else {
                self.done = true;
                return None;
            };
            let c = self.unplace(i);
            // classes opened after edge i are gone, so c + 1 <= open
            if let Some(next) = self.first_fit(i, c + 1) {
                self.place(i, next);
                self.fill();
                return Some(self.current());
            }
        }
    }
}
