//! Min-cost max-flow by successive shortest augmenting paths.
//!
//! Arc costs must be nonnegative; Dijkstra runs on reduced costs with node
//! potentials carried between rounds.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

type Cost = i64;

const INF: Cost = Cost::MAX / 4;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: u64,
    cost: Cost,
}

#[derive(Debug, Clone)]
pub struct MinCostFlow {
    adj: Vec<Vec<usize>>,
    arcs: Vec<Arc>,
}

impl MinCostFlow {
    pub fn new(n: usize) -> Self {
        MinCostFlow {
            adj: vec![Vec::new(); n],
            arcs: Vec::new(),
        }
    }

    /// Adds an arc and its residual twin; returns the forward arc index.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: u64, cost: i64) -> usize {
        debug_assert!(cost >= 0);
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap, cost });
        self.arcs.push(Arc {
            to: from,
            cap: 0,
            cost: -cost,
        });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    /// Flow currently on a forward arc.
    pub fn flow(&self, arc: usize) -> u64 {
        self.arcs[arc ^ 1].cap
    }

    /// Pushes up to `limit` units from `s` to `t`; returns (flow, cost).
    pub fn run(&mut self, s: usize, t: usize, limit: u64) -> (u64, i64) {
        let n = self.adj.len();
        let mut potential = vec![0 as Cost; n];
        let mut dist = vec![INF; n];
        let mut parent = vec![usize::MAX; n];
        let mut flow = 0u64;
        let mut cost: Cost = 0;

        while flow < limit {
            dist.iter_mut().for_each(|d| *d = INF);
            parent.iter_mut().for_each(|p| *p = usize::MAX);
            dist[s] = 0;
            let mut heap = BinaryHeap::new();
            heap.push(Reverse((0, s)));
            while let Some(Reverse((d, v))) = heap.pop() {
                if d > dist[v] {
                    continue;
                }
                for &e in &self.adj[v] {
                    let arc = &self.arcs[e];
                    if arc.cap == 0 {
                        continue;
                    }
                    let nd = d + arc.cost + potential[v] - potential[arc.to];
                    if nd < dist[arc.to] {
                        dist[arc.to] = nd;
                        parent[arc.to] = e;
                        heap.push(Reverse((nd, arc.to)));
                    }
                }
            }
            if dist[t] == INF {
                break;
            }
            for v in 0..n {
                if dist[v] < INF {
                    potential[v] += dist[v];
                }
            }

            let mut push = limit - flow;
            let mut v = t;
            while v != s {
                let e = parent[v];
                push = push.min(self.arcs[e].cap);
                v = self.arcs[e ^ 1].to;
            }
            let mut v = t;
            while v != s {
                let e = parent[v];
                self.arcs[e].cap -= push;
                self.arcs[e ^ 1].cap += push;
                cost += self.arcs[e].cost * push as Cost;
                v = self.arcs[e ^ 1].to;
            }
            flow += push;
        }
        (flow, cost)
    }
}
