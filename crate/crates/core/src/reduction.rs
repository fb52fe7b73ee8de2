//! Reduction to minimum-weight clique on a t-partite graph.
//!
//! Part `i` holds one vertex per window of sequence `i`; every pair of
//! vertices in different parts is joined by an edge weighted with the Hamming
//! distance of their windows. A clique with one vertex per part is an
//! occurrence tuple, and its weight is the sum-of-pairs distance of the tuple.
//! That is a different objective from the consensus cost, so the two are only
//! ever reported side by side.
//!
//! Taking the complement graph turns the same search into a maximum
//! independent set question; that view is a relabeling and has no code here.

use std::fmt::Write as _;

use crate::error::{invalid, Result};
use crate::exact::{check_budget, saturating_pow};
use crate::model::{distance, Instance};
use crate::options::SolverOptions;
use crate::par::{ordered_min, ChunkBest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub part: usize,
    pub offset: usize,
}

impl Vertex {
    pub fn new(part: usize, offset: usize) -> Self {
        Self { part, offset }
    }
}

/// Dense edge-weighted t-partite graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TPartiteGraph {
    parts: usize,
    part_size: usize,
    /// Row-major `V × V` matrix with `V = parts · part_size`; entries inside a
    /// part are unused.
    weights: Vec<u32>,
}

impl TPartiteGraph {
    pub fn parts(&self) -> usize {
        self.parts
    }

    pub fn part_size(&self) -> usize {
        self.part_size
    }

    pub fn vertex_count(&self) -> usize {
        self.parts * self.part_size
    }

    pub fn edge_count(&self) -> usize {
        self.parts * self.parts.saturating_sub(1) / 2 * self.part_size * self.part_size
    }

    #[inline]
    fn id(&self, v: Vertex) -> usize {
        v.part * self.part_size + v.offset
    }

    #[inline]
    fn w(&self, a: usize, b: usize) -> u32 {
        self.weights[a * self.vertex_count() + b]
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v.part >= self.parts || v.offset >= self.part_size {
            return invalid(format!(
                "vertex ({}, {}) outside a {}x{} graph",
                v.part, v.offset, self.parts, self.part_size
            ));
        }
        Ok(())
    }

    /// Weight of the edge `{u, v}`; errors inside a part.
    pub fn weight(&self, u: Vertex, v: Vertex) -> Result<u32> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u.part == v.part {
            return invalid(format!("no edge inside part {}", u.part));
        }
        Ok(self.w(self.id(u), self.id(v)))
    }

    /// Every edge as `(u, v, weight)` with `u.part < v.part`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, u32)> + '_ {
        let m = self.part_size;
        (0..self.parts).flat_map(move |pu| {
            (0..m).flat_map(move |ou| {
                (pu + 1..self.parts).flat_map(move |pv| {
                    (0..m).map(move |ov| {
                        let (u, v) = (Vertex::new(pu, ou), Vertex::new(pv, ov));
                        (u, v, self.w(self.id(u), self.id(v)))
                    })
                })
            })
        })
    }

    /// Plain-text edge list, `u_part u_off v_part v_off weight` per line.
    pub fn dump_edges(&self) -> String {
        let mut out = String::new();
        for (u, v, w) in self.edges() {
            writeln!(out, "{} {} {} {} {}", u.part, u.offset, v.part, v.offset, w)
                .expect("writing to a String");
        }
        out
    }
}

pub fn build_graph(inst: &Instance) -> TPartiteGraph {
    let parts = inst.t();
    let m = inst.window_count();
    let count = parts * m;
    let mut weights = vec![0u32; count * count];
    for a in 0..count {
        let (pa, oa) = (a / m, a % m);
        for b in (a + 1)..count {
            let (pb, ob) = (b / m, b % m);
            if pa == pb {
                continue;
            }
            let d = distance(inst.window(pa, oa), inst.window(pb, ob)) as u32;
            weights[a * count + b] = d;
            weights[b * count + a] = d;
        }
    }
    TPartiteGraph {
        parts,
        part_size: m,
        weights,
    }
}

/// Sum of the weights between all pairs of selected vertices.
///
/// The selection must hold exactly one vertex from every part, in any order.
pub fn clique_weight(g: &TPartiteGraph, selection: &[Vertex]) -> Result<u64> {
    let mut offsets = vec![None; g.parts];
    for &v in selection {
        g.check_vertex(v)?;
        if offsets[v.part].replace(v.offset).is_some() {
            return invalid(format!("part {} selected twice", v.part));
        }
    }
    if let Some(missing) = offsets.iter().position(Option::is_none) {
        return invalid(format!("no vertex selected from part {missing}"));
    }
    let ids: Vec<usize> = offsets
        .iter()
        .enumerate()
        .map(|(p, o)| p * g.part_size + o.expect("checked above"))
        .collect();
    Ok(pairwise(g, &ids))
}

fn pairwise(g: &TPartiteGraph, ids: &[usize]) -> u64 {
    let mut total = 0u64;
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            total += g.w(a, b) as u64;
        }
    }
    total
}

/// Exhaustive minimum over all one-per-part selections.
///
/// Selections are walked with part 0 slowest; ties go to the first.
pub fn min_weight_clique(g: &TPartiteGraph, opts: &SolverOptions) -> Result<(Vec<Vertex>, u64)> {
    let (t, m) = (g.parts, g.part_size);
    check_budget(saturating_pow(m, t), opts.budget)?;
    let found = ordered_min(m, opts.jobs, |first| {
        let mut best = ChunkBest::empty();
        let mut offsets = vec![0usize; t];
        offsets[0] = first;
        // partial[d] = weight among the first d + 1 chosen vertices
        let mut partial = vec![0u64; t];
        extend(g, 1, &mut offsets, &mut partial, &mut best);
        best
    });
    let (weight, offsets) = found.best.expect("graph has at least one part");
    let selection = offsets
        .iter()
        .enumerate()
        .map(|(p, &o)| Vertex::new(p, o))
        .collect();
    Ok((selection, weight))
}

fn extend(
    g: &TPartiteGraph,
    depth: usize,
    offsets: &mut [usize],
    partial: &mut [u64],
    best: &mut ChunkBest<Vec<usize>>,
) {
    if depth == g.parts {
        best.evaluated += 1;
        let weight = partial[depth - 1];
        best.offer(weight, || offsets.to_vec());
        return;
    }
    let m = g.part_size;
    for o in 0..m {
        let id = depth * m + o;
        let added: u64 = (0..depth).map(|p| g.w(p * m + offsets[p], id) as u64).sum();
        offsets[depth] = o;
        partial[depth] = partial[depth - 1] + added;
        extend(g, depth + 1, offsets, partial, best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex1() -> Instance {
        Instance::from_strs(&["AAAABBBB", "BBBBAAAA", "AAAABBBA", "BBBBAAAA"], 4).unwrap()
    }

    #[test]
    fn counts_on_worked_example() {
        let g = build_graph(&ex1());
        assert_eq!(g.parts(), 4);
        assert_eq!(g.part_size(), 5);
        assert_eq!(g.edge_count(), 150);
        assert_eq!(g.edges().count(), 150);
    }

    #[test]
    fn bipartite_for_two_sequences() {
        let inst = Instance::from_strs(&["ABAB", "BBAA"], 2).unwrap();
        let g = build_graph(&inst);
        assert_eq!(g.parts(), 2);
        for (u, v, w) in g.edges() {
            let sel = [u, v];
            assert_eq!(clique_weight(&g, &sel).unwrap(), w as u64);
            assert_eq!(
                w as u64,
                distance(inst.window(0, u.offset), inst.window(1, v.offset))
            );
        }
    }

    #[test]
    fn identical_sequences_have_zero_diagonal_edges() {
        let inst = Instance::from_strs(&["ABBA", "ABBA", "ABBA"], 2).unwrap();
        let g = build_graph(&inst);
        for o in 0..3 {
            assert_eq!(g.weight(Vertex::new(0, o), Vertex::new(2, o)).unwrap(), 0);
        }
        assert_eq!(
            min_weight_clique(&g, &SolverOptions::default()).unwrap().1,
            0
        );
    }

    #[test]
    fn clique_weights_on_worked_example() {
        let g = build_graph(&ex1());
        let sel = |offs: [usize; 4]| -> Vec<Vertex> {
            offs.iter()
                .enumerate()
                .map(|(p, &o)| Vertex::new(p, o))
                .collect()
        };
        assert_eq!(clique_weight(&g, &sel([0, 4, 0, 4])).unwrap(), 0);
        assert_eq!(clique_weight(&g, &sel([0, 0, 0, 0])).unwrap(), 16);
        let (best, w) = min_weight_clique(&g, &SolverOptions::default()).unwrap();
        assert_eq!(w, 0);
        assert_eq!(best, sel([0, 4, 0, 4]));
    }

    #[test]
    fn bad_selections() {
        let g = build_graph(&ex1());
        let v = Vertex::new;
        assert!(clique_weight(&g, &[v(0, 0), v(1, 0), v(2, 0)]).is_err());
        assert!(clique_weight(&g, &[v(0, 0), v(0, 1), v(1, 0), v(2, 0), v(3, 0)]).is_err());
        assert!(clique_weight(&g, &[v(0, 0), v(1, 0), v(2, 0), v(3, 5)]).is_err());
        assert!(g.weight(v(1, 0), v(1, 2)).is_err());
    }

    #[test]
    fn dump_format() {
        let inst = Instance::from_strs(&["AB", "BB"], 1).unwrap();
        let g = build_graph(&inst);
        assert_eq!(
            g.dump_edges(),
            "0 0 1 0 1\n0 0 1 1 1\n0 1 1 0 0\n0 1 1 1 0\n"
        );
    }

    #[test]
    fn budget_guard() {
        let g = build_graph(&ex1());
        let opts = SolverOptions::default().with_budget(624);
        assert!(min_weight_clique(&g, &opts).is_err());
    }
}
