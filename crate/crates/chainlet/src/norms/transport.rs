//! Per-direction partial transport between positive and negative pole masses.
//!
//! Shipping mass `f` from `p` to `q` costs `f |p - q|` (a first-difference part); leaving a
//! unit unmatched costs 1 on each side. So the savings of an edge are `2 - |p - q|` and only
//! edges with `|p - q| < 2` matter. Solved as min-cost flow by successive shortest paths with
//! Bellman-Ford (edge costs `|p - q| - 2` are negative), stopping once no path saves anything.

use std::collections::BTreeMap;

use crate::algebra::{KVector, MultiIndex};
use crate::chains::{Chain, Point};
use crate::scalar::Scalar;

use super::DecompPart;

struct Edge<S> {
    to: usize,
    cap: S,
    cost: f64,
}

struct Graph<S> {
    edges: Vec<Edge<S>>,
    adj: Vec<Vec<usize>>,
}

impl<S: Scalar> Graph<S> {
    fn new(nodes: usize) -> Self {
        Graph {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add(&mut self, from: usize, to: usize, cap: S, cost: f64) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap, cost });
        self.adj[from].push(id);
        self.edges.push(Edge {
            to: from,
            cap: S::zero(),
            cost: -cost,
        });
        self.adj[to].push(id + 1);
        id
    }

    /// Shortest path from `s` in the residual graph: `(dist, predecessor edge)`.
    fn bellman_ford(&self, s: usize) -> (Vec<f64>, Vec<Option<usize>>) {
        let nodes = self.adj.len();
        let mut dist = vec![f64::INFINITY; nodes];
        let mut pred = vec![None; nodes];
        dist[s] = 0.0;
        for _ in 0..nodes {
            let mut changed = false;
            for u in 0..nodes {
                if dist[u].is_infinite() {
                    continue;
                }
                for &e in &self.adj[u] {
                    let ed = &self.edges[e];
                    if ed.cap > S::zero() && dist[u] + ed.cost < dist[ed.to] - 1e-15 {
                        dist[ed.to] = dist[u] + ed.cost;
                        pred[ed.to] = Some(e);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        (dist, pred)
    }
}

/// Optimal flows `(positive pole, negative pole, amount)` for one direction.
pub(crate) fn match_masses<S: Scalar>(
    pos: &[(Point<S>, S)],
    neg: &[(Point<S>, S)],
) -> Vec<(usize, usize, S)> {
    let (a, b) = (pos.len(), neg.len());
    let (src, sink) = (a + b, a + b + 1);
    let mut g: Graph<S> = Graph::new(a + b + 2);
    for (i, (_, m)) in pos.iter().enumerate() {
        g.add(src, i, m.clone(), 0.0);
    }
    for (j, (_, m)) in neg.iter().enumerate() {
        g.add(a + j, sink, m.clone(), 0.0);
    }
    let mut pair_edges = Vec::new();
    for (i, (p, mp)) in pos.iter().enumerate() {
        for (j, (q, mq)) in neg.iter().enumerate() {
            let d = p.distance_f64(q);
            if d < 2.0 {
                let cap = if mp < mq { mp.clone() } else { mq.clone() };
                pair_edges.push((i, j, g.add(i, a + j, cap, d - 2.0)));
            }
        }
    }
    loop {
        let (dist, pred) = g.bellman_ford(src);
        if !(dist[sink] < -1e-13) {
            break;
        }
        let mut path = Vec::new();
        let mut v = sink;
        while v != src {
            let e = pred[v].expect("path exists");
            path.push(e);
            v = g.edges[e ^ 1].to;
        }
        let mut push = g.edges[path[0]].cap.clone();
        for &e in &path[1..] {
            if g.edges[e].cap < push {
                push = g.edges[e].cap.clone();
            }
        }
        for &e in &path {
            g.edges[e].cap = g.edges[e].cap.clone() - push.clone();
            g.edges[e ^ 1].cap = g.edges[e ^ 1].cap.clone() + push.clone();
        }
    }
    pair_edges
        .into_iter()
        .filter_map(|(i, j, e)| {
            let flow = g.edges[e ^ 1].cap.clone();
            (flow > S::zero()).then_some((i, j, flow))
        })
        .collect()
}

/// The r = 1 decomposition: matched flow becomes first differences, the rest stays as mass.
pub(crate) fn transport_parts<S: Scalar>(p: &Chain<S>) -> Vec<DecompPart<S>> {
    let n = p.n();
    let mut by_dir: BTreeMap<MultiIndex, (Vec<(Point<S>, S)>, Vec<(Point<S>, S)>)> =
        BTreeMap::new();
    for pole in p.poles() {
        for t in pole.payload.terms() {
            let e = by_dir.entry(t.idx).or_default();
            if t.coeff > S::zero() {
                e.0.push((pole.at.clone(), t.coeff.clone()));
            } else {
                e.1.push((pole.at.clone(), -t.coeff.clone()));
            }
        }
    }
    let mut parts = Vec::new();
    for (idx, (mut pos, mut neg)) in by_dir {
        let flows = match_masses(&pos, &neg);
        let alpha = KVector::basis(n, idx);
        for (i, j, f) in flows {
            // f ((p; e) - (q; e)) = f Delta_{p - q} (q; e)
            parts.push(DecompPart {
                base: neg[j].0.clone(),
                steps: vec![pos[i].0.minus(&neg[j].0)],
                alpha: alpha.clone(),
                coeff: f.clone(),
            });
            pos[i].1 = pos[i].1.clone() - f.clone();
            neg[j].1 = neg[j].1.clone() - f;
        }
        for (q, m) in pos {
            if !m.is_zero() {
                parts.push(DecompPart {
                    base: q,
                    steps: vec![],
                    alpha: alpha.clone(),
                    coeff: m,
                });
            }
        }
        for (q, m) in neg {
            if !m.is_zero() {
                parts.push(DecompPart {
                    base: q,
                    steps: vec![],
                    alpha: alpha.clone(),
                    coeff: -m,
                });
            }
        }
    }
    parts
}
