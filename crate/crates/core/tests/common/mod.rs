#![allow(clippy::needless_range_loop)]

//! Brute-force reference implementations on plain vectors.
//!
//! Nothing here calls into the library except for the shared conventions:
//! vertices `0..n` and edges in colex order (`{u, v}` with `u < v` has index
//! `v(v-1)/2 + u`).

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;

pub fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `table[u][v]` is the colex index of `{u, v}`.
pub fn edge_table(n: usize) -> Vec<Vec<usize>> {
    let mut t = vec![vec![usize::MAX; n]; n];
    let mut i = 0;
    for v in 1..n {
        for u in 0..v {
            t[u][v] = i;
            t[v][u] = i;
            i += 1;
        }
    }
    t
}

pub fn edge_list(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for v in 1..n {
        for u in 0..v {
            out.push((u, v));
        }
    }
    out
}

/// All permutations of `0..n`, as image vectors.
pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for smaller in all_perms(n - 1) {
        for pos in 0..n {
            let mut p = smaller.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

/// Edge `{u, v}` of coloring `k` lands on `{σ_k(u), σ_k(v)}`; a stacking
/// never lands two equal colors on one position.
pub fn is_stacking(n: usize, colorings: &[Vec<u32>], sigma: &[Vec<usize>]) -> bool {
    let table = edge_table(n);
    let mut at: Vec<Vec<u32>> = vec![Vec::new(); edge_count(n)];
    for (chi, s) in colorings.iter().zip(sigma) {
        for (g, &(u, v)) in edge_list(n).iter().enumerate() {
            let p = table[s[u]][s[v]];
            if at[p].contains(&chi[g]) {
                return false;
            }
            at[p].push(chi[g]);
        }
    }
    true
}

/// Every tuple in `S_n^m`.
pub fn all_tuples(n: usize, m: usize) -> Vec<Vec<Vec<usize>>> {
    let perms = all_perms(n);
    let mut out: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|t| {
                perms.iter().map(move |p| {
                    let mut t2 = t.clone();
                    t2.push(p.clone());
                    t2
                })
            })
            .collect();
    }
    out
}

/// `Z`: the number of stackings in all of `S_n^m`.
pub fn count_z(n: usize, colorings: &[Vec<u32>]) -> u64 {
    all_tuples(n, colorings.len())
        .iter()
        .filter(|t| is_stacking(n, colorings, t))
        .count() as u64
}

/// All `r^len` color vectors.
pub fn all_color_vectors(len: usize, r: u32) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..r).map(move |c| {
                    let mut v2 = v.clone();
                    v2.push(c);
                    v2
                })
            })
            .collect();
    }
    out
}

/// `(E[Z], E[Z^2])` over independent uniform colorings, by enumeration.
pub fn z_moments(n: usize, m: usize, r: u32) -> (BigRational, BigRational) {
    let ne = edge_count(n);
    let tuples = all_tuples(n, m);
    let mut sum = BigInt::from(0);
    let mut sum_sq = BigInt::from(0);
    let mut total = BigInt::from(0);
    for flat in all_color_vectors(m * ne, r) {
        let colorings: Vec<Vec<u32>> = flat.chunks(ne.max(1)).map(|c| c.to_vec()).take(m).collect();
        let colorings = if ne == 0 { vec![vec![]; m] } else { colorings };
        let z = tuples.iter().filter(|t| is_stacking(n, &colorings, t)).count() as u64;
        sum += z;
        sum_sq += z * z;
        total += 1;
    }
    (
        BigRational::new(sum, total.clone()),
        BigRational::new(sum_sq, total),
    )
}

/// Fraction of coloring tuples with at least one stacking.
pub fn existence_probability(n: usize, m: usize, r: u32) -> BigRational {
    let ne = edge_count(n);
    let tuples = all_tuples(n, m);
    let mut hits = 0u64;
    let mut total = 0u64;
    for flat in all_color_vectors(m * ne, r) {
        let colorings: Vec<Vec<u32>> = flat.chunks(ne).map(|c| c.to_vec()).collect();
        if tuples.iter().any(|t| is_stacking(n, &colorings, t)) {
            hits += 1;
        }
        total += 1;
    }
    BigRational::new(BigInt::from(hits), BigInt::from(total))
}

/// Proper `r`-colorings of a graph on `v` vertices.
pub fn proper_colorings(v: usize, edges: &[(usize, usize)], r: u32) -> u64 {
    let mut colors = vec![0u32; v];
    let mut count = 0;
    loop {
        if edges.iter().all(|&(a, b)| colors[a] != colors[b]) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == v {
                return count;
            }
            colors[i] += 1;
            if colors[i] < r {
                break;
            }
            colors[i] = 0;
            i += 1;
        }
    }
}

/// Edges of the collision graph of `π`, from the adjacency rule: copies
/// `(k, e)` and `(k', e')` with `k < k'` are joined when `e = e'` or both
/// land on the same position under `π`.
pub fn collision_edges(n: usize, pi: &[Vec<usize>]) -> BTreeSet<(usize, usize)> {
    let table = edge_table(n);
    let list = edge_list(n);
    let ne = list.len();
    let land = |k: usize, e: usize| {
        let (u, v) = list[e];
        table[pi[k][u]][pi[k][v]]
    };
    let mut out = BTreeSet::new();
    for k in 0..pi.len() {
        for k2 in k + 1..pi.len() {
            for e in 0..ne {
                for e2 in 0..ne {
                    if e == e2 || land(k, e) == land(k2, e2) {
                        out.insert((k * ne + e, k2 * ne + e2));
                    }
                }
            }
        }
    }
    out
}

/// Every partition of the edges of `K_n` into matchings, each class sorted
/// and the classes sorted, via plain set-partition enumeration.
pub fn matching_partitions(n: usize) -> BTreeSet<Vec<Vec<usize>>> {
    let list = edge_list(n);
    let mut out = BTreeSet::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn rec(i: usize, list: &[(usize, usize)], blocks: &mut Vec<Vec<usize>>, out: &mut BTreeSet<Vec<Vec<usize>>>) {
        if i == list.len() {
            let is_matching = blocks.iter().all(|b| {
                let mut seen = BTreeSet::new();
                b.iter().all(|&e| seen.insert(list[e].0) && seen.insert(list[e].1))
            });
            if is_matching {
                let mut p = blocks.clone();
                p.sort();
                out.insert(p);
            }
            return;
        }
        for j in 0..blocks.len() {
            blocks[j].push(i);
            rec(i + 1, list, blocks, out);
            blocks[j].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, list, blocks, out);
        blocks.pop();
    }
    rec(0, &list, &mut blocks, &mut out);
    out
}

pub fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}
