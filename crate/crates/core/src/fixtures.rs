//! Small named graphs and an enumerated corpus used by tests, benches and
//! the command-line tool.

use crate::graph::SimplicialGraph;

fn letters(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

/// Six vertices `a..f` with edges `e-a, a-c, a-d, c-b, d-b, b-f`.
pub fn figure_four() -> SimplicialGraph {
    SimplicialGraph::new(
        &["a", "b", "c", "d", "e", "f"],
        &[("e", "a"), ("a", "c"), ("a", "d"), ("c", "b"), ("d", "b"), ("b", "f")],
    )
    .expect("figure four graph")
}

/// Path `a - b - c - ...` on `n` vertices.
pub fn path(n: usize) -> SimplicialGraph {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    SimplicialGraph::from_indices(letters(n), &edges).expect("path graph")
}

/// Cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> SimplicialGraph {
    let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    edges.push((0, n - 1));
    SimplicialGraph::from_indices(letters(n), &edges).expect("cycle graph")
}

pub fn discrete(n: usize) -> SimplicialGraph {
    SimplicialGraph::from_indices(letters(n), &[]).expect("discrete graph")
}

pub fn complete(n: usize) -> SimplicialGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    SimplicialGraph::from_indices(letters(n), &edges).expect("complete graph")
}

/// Pairwise non-isomorphic graphs on `n` vertices named `a, b, ...`, in
/// increasing order of their edge bitmask; stops after `limit` graphs.
pub fn nonisomorphic_graphs(n: usize, limit: usize) -> Vec<SimplicialGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out: Vec<SimplicialGraph> = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        if out.len() >= limit {
            break;
        }
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p).collect();
        let g = SimplicialGraph::from_indices(letters(n), &edges).expect("enumerated graph");
        if !out.iter().any(|h| h.is_isomorphic_to(&g)) {
            out.push(g);
        }
    }
    out
}

/// Every isomorphism type of graph with `1..=max_n` vertices.
pub fn all_graphs_up_to(max_n: usize) -> Vec<SimplicialGraph> {
    (1..=max_n).flat_map(|n| nonisomorphic_graphs(n, usize::MAX)).collect()
}

/// Fifty graphs on at most six vertices: all types on one to four vertices,
/// the first 21 types on five, the six-vertex graph from [`figure_four`], and
/// the first ten types on six vertices.
pub fn corpus() -> Vec<SimplicialGraph> {
    let mut out = all_graphs_up_to(4);
    out.extend(nonisomorphic_graphs(5, 21));
    out.push(figure_four());
    for g in nonisomorphic_graphs(6, 11) {
        if out.len() == 50 {
            break;
        }
        if !g.is_isomorphic_to(&figure_four()) {
            out.push(g);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| nonisomorphic_graphs(n, usize::MAX).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34]);
        assert_eq!(corpus().len(), 50);
    }
}
