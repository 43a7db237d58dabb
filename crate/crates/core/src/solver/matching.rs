//! Hopcroft-Karp maximum bipartite matching.

use std::collections::VecDeque;

const NIL: usize = usize::MAX;

/// `adj[u]` lists the right vertices adjacent to left vertex `u`.
/// Returns the right partner of each left vertex.
pub fn hopcroft_karp(adj: &[Vec<usize>], n_right: usize) -> Vec<Option<usize>> {
    let n_left = adj.len();
    let mut match_left = vec![NIL; n_left];
    let mut match_right = vec![NIL; n_right];
    let mut dist = vec![0usize; n_left];

    loop {
        // Layered BFS from free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..n_left {
            if match_left[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_right[v];
                if w == NIL {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        for u in 0..n_left {
            if match_left[u] == NIL {
                augment(u, adj, &mut match_left, &mut match_right, &mut dist);
            }
        }
    }
    match_left
        .into_iter()
        .map(|v| (v != NIL).then_some(v))
        .collect()
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    match_left: &mut [usize],
    match_right: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &v in &adj[u] {
        let w = match_right[v];
        if w == NIL || (dist[w] == dist[u] + 1 && augment(w, adj, match_left, match_right, dist)) {
            match_left[u] = v;
            match_right[v] = u;
            return true;
        }
    }
    dist[u] = usize::MAX;
    false
}
