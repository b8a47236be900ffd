//! Gate graphs: adjacency `e[i][j] != 0` is an edge from block `i` to block `j`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

fn has_edge(e: &[Vec<f64>], from: usize, to: usize) -> bool {
    e[from][to] != 0.0
}

/// Direct predecessors `P(i) = { j : e_ji != 0 }`.
pub fn parents(e: &[Vec<f64>], i: usize) -> Vec<usize> {
    (0..e.len()).filter(|&j| has_edge(e, j, i)).collect()
}

/// Kahn's algorithm; on failure returns the blocks left on or behind a cycle.
pub fn topological_order(e: &[Vec<f64>]) -> std::result::Result<Vec<usize>, Vec<usize>> {
    let m = e.len();
    let mut indegree: Vec<usize> = (0..m).map(|i| parents(e, i).len()).collect();
    let mut ready: Vec<usize> = (0..m).rev().filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(m);
    while let Some(i) = ready.pop() {
        order.push(i);
        for j in (0..m).rev() {
            if has_edge(e, i, j) {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.push(j);
                }
            }
        }
    }
    if order.len() == m {
        Ok(order)
    } else {
        Err((0..m).filter(|&i| indegree[i] > 0).collect())
    }
}

/// All blocks with a directed path into `i` (0-based indices).
pub fn ancestors(e: &[Vec<f64>], i: usize) -> Result<BTreeSet<usize>> {
    topological_order(e).map_err(|_| Error::Cycle)?;
    let mut seen = BTreeSet::new();
    let mut stack = parents(e, i);
    while let Some(j) = stack.pop() {
        if seen.insert(j) {
            stack.extend(parents(e, j));
        }
    }
    Ok(seen)
}

/// `e_{i,i+1} = 1`: block `i` gates block `i + 1`.
pub fn forward_path(m: usize) -> Vec<Vec<f64>> {
    let mut e = vec![vec![0.0; m]; m];
    for i in 0..m.saturating_sub(1) {
        e[i][i + 1] = 1.0;
    }
    e
}

/// `e_{i,i-1} = 1`: block `i` gates block `i - 1`.
pub fn backward_path(m: usize) -> Vec<Vec<f64>> {
    let mut e = vec![vec![0.0; m]; m];
    for i in 1..m {
        e[i][i - 1] = 1.0;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(m: usize, edges: &[(usize, usize)]) -> Vec<Vec<f64>> {
        let mut e = vec![vec![0.0; m]; m];
        for &(i, j) in edges {
            e[i][j] = 1.0;
        }
        e
    }

    #[test]
    fn path_ancestors() {
        let e = forward_path(4);
        // Block 3 (1-based) has ancestors {1, 2}.
        assert_eq!(ancestors(&e, 2).unwrap(), BTreeSet::from([0, 1]));
        assert!(ancestors(&e, 0).unwrap().is_empty());
        let back = backward_path(4);
        assert_eq!(ancestors(&back, 1).unwrap(), BTreeSet::from([2, 3]));
    }

    #[test]
    fn empty_graph_has_no_ancestors() {
        let e = vec![vec![0.0; 5]; 5];
        for i in 0..5 {
            assert!(ancestors(&e, i).unwrap().is_empty());
        }
    }

    #[test]
    fn diamond() {
        let e = graph(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(ancestors(&e, 3).unwrap(), BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn cycles_are_rejected() {
        let e = graph(3, &[(0, 1), (1, 0)]);
        assert_eq!(ancestors(&e, 2), Err(Error::Cycle));
        assert_eq!(topological_order(&e), Err(vec![0, 1]));
        assert!(topological_order(&graph(2, &[(1, 1)])).is_err());
    }
}
