use std::collections::VecDeque;

use crate::graph::Graph;

/// Reverse Cuthill–McKee ordering. Returns `perm` with `perm[new] = old`.
///
/// Each component starts from a pseudo-peripheral vertex; neighbors are
/// enqueued by increasing neighbor count, ties by vertex id.
pub fn reverse_cuthill_mckee(graph: &Graph) -> Vec<usize> {
    let n = graph.n();
    let deg = |u: usize| graph.neighbor_ids(u).len();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut scratch = vec![usize::MAX; n];

    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&u| (deg(u), u));

    for &start in &by_degree {
        if placed[start] {
            continue;
        }
        let root = pseudo_peripheral(graph, start, &mut scratch);
        let mut queue = VecDeque::from([root]);
        placed[root] = true;
        let mut buf = Vec::new();
        while let Some(u) = queue.pop_front() {
            order.push(u);
            buf.clear();
            buf.extend(graph.neighbor_ids(u).iter().copied().filter(|&v| !placed[v]));
            buf.sort_by_key(|&v| (deg(v), v));
            for &v in &buf {
                placed[v] = true;
                queue.push_back(v);
            }
        }
    }
    order.reverse();
    order
}

/// Levels of a BFS from `root` written into `level`; returns (eccentricity, last level).
fn bfs_levels(graph: &Graph, root: usize, level: &mut [usize]) -> (usize, Vec<usize>) {
    let mut visited = vec![root];
    level[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut ecc = 0;
    while let Some(u) = queue.pop_front() {
        for &v in graph.neighbor_ids(u) {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                ecc = ecc.max(level[v]);
                visited.push(v);
                queue.push_back(v);
            }
        }
    }
    let last: Vec<usize> = visited.iter().copied().filter(|&v| level[v] == ecc).collect();
    for &v in &visited {
        level[v] = usize::MAX;
    }
    (ecc, last)
}

fn pseudo_peripheral(graph: &Graph, start: usize, scratch: &mut [usize]) -> usize {
    let mut root = start;
    let (mut ecc, mut last) = bfs_levels(graph, root, scratch);
    for _ in 0..8 {
        let cand = *last
            .iter()
            .min_by_key(|&&v| (graph.neighbor_ids(v).len(), v))
            .expect("BFS visits the root");
        let (e, l) = bfs_levels(graph, cand, scratch);
        if e <= ecc {
            break;
        }
        root = cand;
        ecc = e;
        last = l;
    }
    root
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn is_permutation_and_narrows_shuffled_path() {
        // Path visited in a scrambled labelling.
        let labels = [7usize, 2, 9, 0, 5, 1, 8, 3, 6, 4];
        let e: Vec<_> = labels.windows(2).map(|w| (w[0], w[1], 1.0)).collect();
        let (g, _) = Graph::from_edges(10, &e).unwrap();
        let perm = reverse_cuthill_mckee(&g);
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..10).collect::<Vec<_>>());
        let mut inv = vec![0; 10];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let bandwidth = g.edges().map(|(u, v, _)| inv[u].abs_diff(inv[v])).max().unwrap();
        assert_eq!(bandwidth, 1);
    }

    #[test]
    fn handles_multiple_components() {
        let (g, _) = Graph::from_edges(5, &[(0, 3, 1.0), (1, 4, 1.0), (4, 2, 1.0)]).unwrap();
        let mut perm = reverse_cuthill_mckee(&g);
        perm.sort_unstable();
        assert_eq!(perm, vec![0, 1, 2, 3, 4]);
    }
}
