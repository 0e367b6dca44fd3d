//! Graph utilities over complexes, backed by petgraph.
//!
//! Vertices are arbitrary `usize` labels (complex indices); every edge endpoint must
//! appear in the vertex list. Components come back sorted internally and ordered by
//! their smallest vertex, so results are deterministic.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::unionfind::UnionFind;

fn index_map(vertices: &[usize]) -> BTreeMap<usize, usize> {
    vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect()
}

fn normalize(mut comps: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for c in comps.iter_mut() {
        c.sort_unstable();
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Connected components of the underlying undirected graph.
pub fn undirected_components(vertices: &[usize], edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let idx = index_map(vertices);
    let mut uf = UnionFind::<usize>::new(vertices.len());
    for (a, b) in edges {
        uf.union(idx[a], idx[b]);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, v) in vertices.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(*v);
    }
    normalize(groups.into_values().collect())
}

/// Strongly connected components of the directed graph.
pub fn strong_components(vertices: &[usize], edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let idx = index_map(vertices);
    let mut g: DiGraph<usize, ()> = DiGraph::with_capacity(vertices.len(), edges.len());
    let nodes: Vec<NodeIndex> = vertices.iter().map(|v| g.add_node(*v)).collect();
    for (a, b) in edges {
        g.add_edge(nodes[idx[a]], nodes[idx[b]], ());
    }
    let comps = tarjan_scc(&g)
        .into_iter()
        .map(|c| c.into_iter().map(|n| g[n]).collect())
        .collect();
    normalize(comps)
}

/// For each component, whether no edge leaves it.
pub fn terminal_flags(components: &[Vec<usize>], edges: &[(usize, usize)]) -> Vec<bool> {
    let owner: BTreeMap<usize, usize> = components
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| c.iter().map(move |v| (*v, ci)))
        .collect();
    let mut terminal = vec![true; components.len()];
    for (a, b) in edges {
        if owner[a] != owner[b] {
            terminal[owner[a]] = false;
        }
    }
    terminal
}

/// Whether the undirected simple graph (parallel and antiparallel arrows collapsed)
/// contains a cycle; such a cycle necessarily has at least three vertices.
pub fn has_undirected_cycle(vertices: &[usize], edges: &[(usize, usize)]) -> bool {
    let idx = index_map(vertices);
    let simple: BTreeSet<(usize, usize)> = edges
        .iter()
        .map(|&(a, b)| if a < b { (a, b) } else { (b, a) })
        .collect();
    let mut uf = UnionFind::<usize>::new(vertices.len());
    simple.iter().any(|(a, b)| !uf.union(idx[a], idx[b]))
}
