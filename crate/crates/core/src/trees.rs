//! Stable rooted trees and their decorated specializations.
//!
//! A tree carries a genus at every vertex, `n` labeled regular legs, and `m`
//! frozen legs attached to the root. Trees with an edge that has no regular
//! leg below it are excluded at enumeration time: every class built on such
//! a tree carries the polynomial factor `prod a(e) = 0`, and the exclusion
//! also removes all nontrivial automorphisms, so one tree is one term.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::poly::{rat_int, MultiPoly, Rat, Vars};
use crate::{Error, Result};

/// One vertex of a stable rooted tree. Vertices are stored in DFS pre-order
/// with canonically sorted children, so `parent[i] < i` for non-root `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub genus: u32,
    pub parent: Option<usize>,
    /// Regular legs attached here (1-based labels, sorted).
    pub legs: Vec<u32>,
}

/// Stable rooted tree of total genus `g` with `n` regular legs and `m`
/// frozen legs at the root (vertex 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableRootedTree {
    pub n: u32,
    pub m: u32,
    pub verts: Vec<Vertex>,
}

impl StableRootedTree {
    pub fn num_vertices(&self) -> usize {
        self.verts.len()
    }

    pub fn genus(&self) -> u32 {
        self.verts.iter().map(|v| v.genus).sum()
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        (0..self.verts.len())
            .filter(|&w| self.verts[w].parent == Some(v))
            .collect()
    }

    /// Number of half-edges at `v` (legs, edges, and for the root its frozen
    /// legs).
    pub fn h_count(&self, v: usize) -> usize {
        let neg = if v == 0 { self.m as usize } else { 1 };
        self.verts[v].legs.len() + self.children(v).len() + neg
    }

    /// Positive half-edges at `v`: regular legs plus edges to children.
    pub fn h_plus(&self, v: usize) -> usize {
        self.verts[v].legs.len() + self.children(v).len()
    }

    pub fn chi(&self, v: usize) -> i64 {
        2 * self.verts[v].genus as i64 - 2 + self.h_count(v) as i64
    }

    /// Sum of `chi` over the descendant subtree of `v` (including `v`).
    pub fn dchi(&self, v: usize) -> i64 {
        self.subtree(v).iter().map(|&w| self.chi(w)).sum()
    }

    /// Vertices of the subtree rooted at `v`, in index order.
    pub fn subtree(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut i = 0;
        while i < out.len() {
            let w = out[i];
            out.extend(self.children(w));
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Regular legs below `v` (the set `DL(v)`; for non-root `v` this is
    /// also `DL(e)` of the edge above `v`). Sorted.
    pub fn desc_legs(&self, v: usize) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .subtree(v)
            .into_iter()
            .flat_map(|w| self.verts[w].legs.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// Degree-label cap `3g(v) - 3 + |H(v)|`.
    pub fn p_max(&self, v: usize) -> u32 {
        (3 * self.verts[v].genus as i64 - 3 + self.h_count(v) as i64) as u32
    }

    /// Weight form of the edge above non-root `v`: sum of `a_l` over
    /// descendant legs, in the given leg-weight basis.
    pub fn edge_weight(&self, v: usize, weights: &[MultiPoly], vars: Vars) -> MultiPoly {
        debug_assert!(v != 0);
        self.vertex_weight(v, weights, vars)
    }

    /// `a(v)`: the sum of `a_l` over the regular legs below `v`. For the
    /// root this is the total weight `a_1 + ... + a_n`.
    pub fn vertex_weight(&self, v: usize, weights: &[MultiPoly], vars: Vars) -> MultiPoly {
        let mut w = MultiPoly::zero(vars);
        for l in self.desc_legs(v) {
            w += &weights[(l - 1) as usize];
        }
        w
    }

    /// Canonical parenthesized encoding; bit-exact across runs, used in
    /// cache keys.
    pub fn encode(&self) -> String {
        self.encode_vertex(0)
    }

    fn encode_vertex(&self, v: usize) -> String {
        let mut s = String::from("v(g=");
        s += &self.verts[v].genus.to_string();
        if v == 0 {
            s += ";F=";
            s += &self.m.to_string();
        }
        s += ";L=";
        let legs: Vec<String> = self.verts[v].legs.iter().map(|l| l.to_string()).collect();
        s += &legs.join(",");
        let kids = self.children(v);
        if !kids.is_empty() {
            s += ";[";
            let parts: Vec<String> = kids.iter().map(|&c| self.encode_vertex(c)).collect();
            s += &parts.join(",");
            s += "]";
        }
        s += ")";
        s
    }
}

/// Intermediate recursive form used while enumerating.
#[derive(Clone, Debug)]
struct Node {
    genus: u32,
    legs: Vec<u32>,
    children: Vec<Node>,
}

impl Node {
    fn min_leg(&self) -> u32 {
        let own = self.legs.first().copied();
        let child = self.children.iter().filter_map(|c| Some(c.min_leg())).min();
        match (own, child) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            // never reached: every subtree carries at least one leg
            (None, None) => u32::MAX,
        }
    }

    fn sort_canonical(&mut self) {
        for c in &mut self.children {
            c.sort_canonical();
        }
        self.children
            .sort_by_key(|c| (c.min_leg(), c.genus, c.encode()));
    }

    fn encode(&self) -> String {
        let mut s = String::from("(");
        s += &self.genus.to_string();
        s += ";";
        let legs: Vec<String> = self.legs.iter().map(|l| l.to_string()).collect();
        s += &legs.join(",");
        for c in &self.children {
            s += &c.encode();
        }
        s += ")";
        s
    }

    fn flatten(&self, m: u32, n: u32) -> StableRootedTree {
        let mut verts = Vec::new();
        fn go(node: &Node, parent: Option<usize>, verts: &mut Vec<Vertex>) {
            let idx = verts.len();
            verts.push(Vertex { genus: node.genus, parent, legs: node.legs.clone() });
            for c in &node.children {
                go(c, Some(idx), verts);
            }
        }
        go(self, None, &mut verts);
        StableRootedTree { n, m, verts }
    }
}

/// All unordered set partitions of `items` into nonempty blocks (including
/// the empty partition of the empty set).
fn set_partitions(items: &[u32]) -> Vec<Vec<Vec<u32>>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let first = items[0];
    let rest = &items[1..];
    let mut out = Vec::new();
    for mut part in set_partitions(rest) {
        // first joins an existing block
        for i in 0..part.len() {
            let mut p = part.clone();
            p[i].insert(0, first);
            out.push(p);
        }
        // or starts its own
        part.insert(0, vec![first]);
        out.push(part);
    }
    out
}

/// Compositions of `total` into `parts` nonnegative summands.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn subsets(items: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &it in items {
        let len = out.len();
        for i in 0..len {
            let mut s = out[i].clone();
            s.push(it);
            out.push(s);
        }
    }
    out
}

/// Subtrees hanging below an edge: total genus `g`, carrying exactly the
/// legs in `legs` (nonempty), root of the fragment having one upward edge.
fn enumerate_fragments(g: u32, legs: &[u32]) -> Vec<Node> {
    debug_assert!(!legs.is_empty());
    let mut out = Vec::new();
    for own in subsets(legs) {
        let remaining: Vec<u32> = legs.iter().copied().filter(|l| !own.contains(l)).collect();
        for blocks in set_partitions(&remaining) {
            for gv in 0..=g {
                // vertex stability with the upward edge counted
                let h = own.len() + blocks.len() + 1;
                if 2 * gv as i64 - 2 + h as i64 <= 0 {
                    continue;
                }
                for gdist in compositions(g - gv, blocks.len()) {
                    let mut choices: Vec<Vec<Node>> = Vec::new();
                    for (b, &gb) in blocks.iter().zip(&gdist) {
                        choices.push(enumerate_fragments(gb, b));
                    }
                    for combo in cartesian(&choices) {
                        let mut sorted_own = own.clone();
                        sorted_own.sort_unstable();
                        out.push(Node { genus: gv, legs: sorted_own, children: combo });
                    }
                }
            }
        }
    }
    out
}

fn cartesian(choices: &[Vec<Node>]) -> Vec<Vec<Node>> {
    let mut out = vec![vec![]];
    for c in choices {
        let mut next = Vec::new();
        for prefix in &out {
            for item in c {
                let mut p = prefix.clone();
                p.push(item.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// All stable rooted trees of genus `g` with `n` regular legs and `m` frozen
/// legs, each exactly once, in canonical order.
pub fn enumerate_srt(g: u32, n: u32, m: u32) -> Result<Vec<StableRootedTree>> {
    if n < 1 || 2 * g as i64 - 2 + n as i64 + m as i64 <= 0 {
        return Err(Error::UnstableTarget);
    }
    let legs: Vec<u32> = (1..=n).collect();
    let mut out = Vec::new();
    for own in subsets(&legs) {
        let remaining: Vec<u32> = legs.iter().copied().filter(|l| !own.contains(l)).collect();
        for blocks in set_partitions(&remaining) {
            for gr in 0..=g {
                let h = own.len() + blocks.len() + m as usize;
                if 2 * gr as i64 - 2 + h as i64 <= 0 {
                    continue;
                }
                for gdist in compositions(g - gr, blocks.len()) {
                    let mut choices: Vec<Vec<Node>> = Vec::new();
                    for (b, &gb) in blocks.iter().zip(&gdist) {
                        choices.push(enumerate_fragments(gb, b));
                    }
                    for combo in cartesian(&choices) {
                        let mut sorted_own = own.clone();
                        sorted_own.sort_unstable();
                        let mut node = Node { genus: gr, legs: sorted_own, children: combo };
                        node.sort_canonical();
                        out.push(node.flatten(m, n));
                    }
                }
            }
        }
    }
    out.sort_by_key(|t| t.encode());
    out.dedup_by_key(|t| t.encode());
    Ok(out)
}

/// Admissibility of a level function for `(tree, p)`: root at level zero,
/// strictly increasing along descent, no empty levels, and for every level
/// `i` below the maximum the prefix inequality
///
/// ```text
/// #{v : l(v) <= i} - 1 + sum_{l(v) <= i} p(v) <= 2 sum_{l(v) <= i} g(v) - 2 + m
/// ```
///
/// (a single `-2` on the right; the degree of the class cut off at level
/// `i` is bounded by the arithmetic genus term of the prefix subtree).
pub fn level_admissible(tree: &StableRootedTree, p: &[u32], level: &[u32]) -> bool {
    if level[0] != 0 {
        return false;
    }
    let max = *level.iter().max().unwrap();
    for (v, vert) in tree.verts.iter().enumerate() {
        if let Some(par) = vert.parent {
            if level[par] >= level[v] {
                return false;
            }
        }
    }
    for l in 0..=max {
        if !level.contains(&l) {
            return false;
        }
    }
    for i in 0..max {
        let mut count = 0i64;
        let mut psum = 0i64;
        let mut gsum = 0i64;
        for v in 0..tree.verts.len() {
            if level[v] <= i {
                count += 1;
                psum += p[v] as i64;
                gsum += 2 * tree.verts[v].genus as i64;
            }
        }
        if count - 1 + psum > gsum - 2 + tree.m as i64 {
            return false;
        }
    }
    true
}

/// All admissible level functions for `(tree, p)`, generated by filtering
/// order-preserving assignments.
pub fn admissible_levels(tree: &StableRootedTree, p: &[u32]) -> Vec<Vec<u32>> {
    let nv = tree.verts.len();
    let mut out = Vec::new();
    let mut level = vec![0u32; nv];
    fn go(
        tree: &StableRootedTree,
        p: &[u32],
        level: &mut Vec<u32>,
        v: usize,
        out: &mut Vec<Vec<u32>>,
    ) {
        let nv = tree.verts.len();
        if v == nv {
            if level_admissible(tree, p, level) {
                out.push(level.clone());
            }
            return;
        }
        let lo = level[tree.verts[v].parent.unwrap()] + 1;
        for l in lo..nv as u32 {
            level[v] = l;
            go(tree, p, level, v + 1, out);
        }
    }
    if nv == 1 {
        out.push(level);
        return out;
    }
    go(tree, p, &mut level, 1, &mut out);
    out
}

/// All `(tree, degree labels, level function)` triples.
pub fn enumerate_ldlsrt(
    g: u32,
    n: u32,
    m: u32,
) -> Result<Vec<(StableRootedTree, Vec<u32>, Vec<u32>)>> {
    let trees = enumerate_srt(g, n, m)?;
    let mut out = Vec::new();
    for tree in trees {
        let caps: Vec<u32> = (0..tree.verts.len()).map(|v| tree.p_max(v)).collect();
        for p in label_functions(&caps) {
            for level in admissible_levels(&tree, &p) {
                out.push((tree.clone(), p.clone(), level));
            }
        }
    }
    Ok(out)
}

fn label_functions(caps: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &cap in caps {
        let mut next = Vec::new();
        for prefix in &out {
            for p in 0..=cap {
                let mut q = prefix.clone();
                q.push(p);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Pre-stable star rooted tree: a root with `m` frozen legs and no regular
/// legs, and satellites each joined to the root by one edge. A satellite is
/// unstable exactly when it has genus 0 and a single leg; the root is
/// unstable exactly when `(g_root, m, #satellites) = (0, 1, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarTree {
    pub root_genus: u32,
    pub m: u32,
    /// `(genus, legs)` per satellite; legs sorted, satellites ordered by
    /// minimal leg.
    pub satellites: Vec<(u32, Vec<u32>)>,
}

impl StarTree {
    pub fn genus(&self) -> u32 {
        self.root_genus + self.satellites.iter().map(|s| s.0).sum::<u32>()
    }

    pub fn satellite_unstable(genus: u32, legs: &[u32]) -> bool {
        genus == 0 && legs.len() == 1
    }

    pub fn root_unstable(&self) -> bool {
        self.root_genus == 0 && self.m == 1 && self.satellites.len() == 1
    }

    pub fn encode(&self) -> String {
        let mut s = String::from("v(g=");
        s += &self.root_genus.to_string();
        s += ";F=";
        s += &self.m.to_string();
        s += ";L=;[";
        let parts: Vec<String> = self
            .satellites
            .iter()
            .map(|(g, legs)| {
                let ls: Vec<String> = legs.iter().map(|l| l.to_string()).collect();
                alloc::format!("v(g={};L={})", g, ls.join(","))
            })
            .collect();
        s += &parts.join(",");
        s += "])";
        s
    }
}

/// All pre-stable star rooted trees: set partitions of the legs into
/// satellite blocks crossed with genus distributions. Satellites with no
/// legs are excluded (their edge weight vanishes identically).
pub fn enumerate_pssrt(g: u32, n: u32, m: u32) -> Result<Vec<StarTree>> {
    if n < 1 || m < 1 || 2 * g as i64 - 2 + n as i64 + m as i64 <= 0 {
        return Err(Error::UnstableTarget);
    }
    let legs: Vec<u32> = (1..=n).collect();
    let mut out = Vec::new();
    for blocks in set_partitions(&legs) {
        for gr in 0..=g {
            for gdist in compositions(g - gr, blocks.len()) {
                let mut sats: Vec<(u32, Vec<u32>)> = blocks
                    .iter()
                    .zip(&gdist)
                    .map(|(b, &gb)| {
                        let mut b = b.clone();
                        b.sort_unstable();
                        (gb, b)
                    })
                    .collect();
                sats.sort_by_key(|(gb, b)| (b[0], *gb));
                out.push(StarTree { root_genus: gr, m, satellites: sats });
            }
        }
    }
    out.sort_by_key(|t| t.encode());
    out.dedup_by_key(|t| t.encode());
    Ok(out)
}

/// The product-formula coefficient `C1(T) = prod_v chi(v) / Dchi(v)`.
pub fn coeff_c1(tree: &StableRootedTree) -> Rat {
    let mut c = rat_int(1);
    for v in 0..tree.verts.len() {
        c *= Rat::new(tree.chi(v).into(), tree.dchi(v).into());
    }
    c
}

/// The sum over rigorous level structures; equals `coeff_c1` for every tree.
pub fn coeff_c2(tree: &StableRootedTree) -> Rat {
    let nv = tree.verts.len();
    let mut total = Rat::zero();
    // enumerate bijections f: V -> {1..nv} with ancestors first
    let mut placed: Vec<usize> = Vec::new();
    let mut used = vec![false; nv];
    fn go(
        tree: &StableRootedTree,
        placed: &mut Vec<usize>,
        used: &mut Vec<bool>,
        total: &mut Rat,
    ) {
        let nv = tree.verts.len();
        if placed.len() == nv {
            let chis: Vec<i64> = placed.iter().map(|&v| tree.chi(v)).collect();
            let mut term = rat_int(1);
            let mut suffix: i64 = chis.iter().sum();
            for &c in &chis {
                term *= Rat::new(c.into(), suffix.into());
                suffix -= c;
            }
            *total += term;
            return;
        }
        for v in 0..nv {
            if used[v] {
                continue;
            }
            let parent_ok = match tree.verts[v].parent {
                None => true,
                Some(p) => used[p],
            };
            if parent_ok {
                used[v] = true;
                placed.push(v);
                go(tree, placed, used, total);
                placed.pop();
                used[v] = false;
            }
        }
    }
    go(tree, &mut placed, &mut used, &mut total);
    total
}

/// Count regular legs of a tree that lie in the given set, used by tests.
pub fn leg_universe(n: u32) -> BTreeSet<u32> {
    (1..=n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn counts(g: u32, n: u32, m: u32) -> usize {
        enumerate_srt(g, n, m).unwrap().len()
    }

    #[test]
    fn srt_counts_small() {
        assert_eq!(counts(0, 1, 2), 1);
        assert_eq!(counts(0, 2, 2), 2);
        assert_eq!(counts(1, 1, 2), 2);
    }

    #[test]
    fn srt_unstable_target() {
        assert_eq!(enumerate_srt(0, 1, 1), Err(Error::UnstableTarget));
    }

    #[test]
    fn srt_no_legless_edges() {
        for t in enumerate_srt(2, 3, 1).unwrap() {
            for v in 1..t.verts.len() {
                assert!(!t.desc_legs(v).is_empty(), "edge with empty DL in {}", t.encode());
            }
            for v in 0..t.verts.len() {
                assert!(t.chi(v) > 0);
            }
        }
    }

    #[test]
    fn srt_canonical_and_duplicate_free() {
        let ts = enumerate_srt(2, 3, 1).unwrap();
        let mut encs: Vec<String> = ts.iter().map(|t| t.encode()).collect();
        let orig = encs.clone();
        encs.sort();
        encs.dedup();
        assert_eq!(encs, orig);
    }

    #[test]
    fn encoding_example_shape() {
        // root genus 0 with two frozen legs, one genus-1 child carrying leg 1
        let t = StableRootedTree {
            n: 1,
            m: 2,
            verts: vec![
                Vertex { genus: 0, parent: None, legs: vec![] },
                Vertex { genus: 1, parent: Some(0), legs: vec![1] },
            ],
        };
        assert_eq!(t.encode(), "v(g=0;F=2;L=;[v(g=1;L=1)])");
    }

    #[test]
    fn ldlsrt_counts_small() {
        assert_eq!(enumerate_ldlsrt(0, 1, 2).unwrap().len(), 1);
        assert_eq!(enumerate_ldlsrt(0, 2, 2).unwrap().len(), 3);
        let multi: Vec<_> = enumerate_ldlsrt(0, 3, 1)
            .unwrap()
            .into_iter()
            .filter(|(t, _, _)| t.num_vertices() >= 2)
            .collect();
        assert!(multi.is_empty());
    }

    #[test]
    fn level_checker_agrees_with_generator() {
        // independent re-validation of every generated level function
        for (t, p, l) in enumerate_ldlsrt(1, 2, 2).unwrap() {
            assert!(level_admissible(&t, &p, &l));
        }
    }

    #[test]
    fn pssrt_counts_small() {
        assert_eq!(enumerate_pssrt(0, 1, 2).unwrap().len(), 1);
        assert_eq!(enumerate_pssrt(0, 2, 1).unwrap().len(), 2);
        // legless satellites are excluded, so (1,1,1) has two trees:
        // root g=0 with a genus-1 satellite, root g=1 with an unstable one
        assert_eq!(enumerate_pssrt(1, 1, 1).unwrap().len(), 2);
    }

    #[test]
    fn pssrt_blocks_partition_legs() {
        for t in enumerate_pssrt(1, 3, 2).unwrap() {
            let mut all: Vec<u32> = t.satellites.iter().flat_map(|s| s.1.clone()).collect();
            all.sort_unstable();
            assert_eq!(all, vec![1, 2, 3]);
            for (gb, legs) in &t.satellites {
                assert!(!legs.is_empty());
                assert_eq!(StarTree::satellite_unstable(*gb, legs), *gb == 0 && legs.len() == 1);
            }
        }
    }

    #[test]
    fn c1_single_vertex_and_chain() {
        let ts = enumerate_srt(0, 2, 1).unwrap();
        let t = ts.iter().find(|t| t.num_vertices() == 1).unwrap();
        assert_eq!(coeff_c1(t), rat_int(1));
        assert_eq!(coeff_c2(t), rat_int(1));

        // chain with chi = (1, 1): root keeps leg 3 and the frozen leg,
        // child carries legs 1, 2
        let ts = enumerate_srt(0, 3, 1).unwrap();
        let t = ts
            .iter()
            .find(|t| t.num_vertices() == 2 && t.verts[0].legs == vec![3])
            .unwrap();
        assert_eq!(t.chi(0), 1);
        assert_eq!(t.chi(1), 1);
        assert_eq!(coeff_c1(t), rat(1, 2));
        assert_eq!(coeff_c2(t), rat(1, 2));
    }

    #[test]
    fn c2_two_children_collapses() {
        // root with two children: C2 = chi0/total by the two-term symmetry
        let ts = enumerate_srt(0, 4, 1).unwrap();
        let t = ts
            .iter()
            .find(|t| {
                t.num_vertices() == 3 && t.children(0).len() == 2 && t.verts[0].legs.is_empty()
            })
            .unwrap();
        let total = t.dchi(0);
        assert_eq!(coeff_c2(t), Rat::new(t.chi(0).into(), total.into()));
        assert_eq!(coeff_c1(t), coeff_c2(t));
    }

    #[test]
    fn c1_equals_c2_sample() {
        for t in enumerate_srt(1, 3, 1).unwrap() {
            assert_eq!(coeff_c1(&t), coeff_c2(&t), "tree {}", t.encode());
        }
    }

    #[test]
    fn weights_and_edges() {
        let vars = Vars::legs(3);
        let weights: Vec<MultiPoly> = (0..3).map(|i| MultiPoly::var(vars, i)).collect();
        for t in enumerate_srt(0, 3, 1).unwrap() {
            // root weight is always a1 + a2 + a3
            let root_w: MultiPoly = {
                let mut w = MultiPoly::zero(vars);
                for l in t.desc_legs(0) {
                    w += &weights[(l - 1) as usize];
                }
                w
            };
            assert_eq!(root_w, MultiPoly::var_sum(vars, 0..3));
            for v in 1..t.num_vertices() {
                let dl = t.desc_legs(v);
                let w = t.edge_weight(v, &weights, vars);
                assert_eq!(w, MultiPoly::var_sum(vars, dl.iter().map(|&l| l as usize - 1)));
            }
        }
    }
}
