//! Primal network simplex for the balanced transportation problem.
//!
//! The basis is a spanning tree over `n` sources and `m` sinks, rooted at
//! source 0. Entering arcs are chosen by block pricing; after a degenerate
//! pivot the rule switches to Bland's (lowest arc index, both for entering
//! and leaving) until the next pivot that moves flow.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

/// Optimal flows with the dual potentials that certify them.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportSolution {
    pub cost: f64,
    /// Basic arcs `(source, sink, flow)`; degenerate arcs carry zero flow.
    pub flows: Vec<(usize, usize, f64)>,
    /// `u`: one per source.
    pub source_potentials: Vec<f64>,
    /// `v`: one per sink. Reduced costs `c − u − v` are nonnegative.
    pub sink_potentials: Vec<f64>,
    pub pivots: usize,
}

const NONE: usize = usize::MAX;

struct Tree {
    n: usize,
    m: usize,
    /// Basic arcs as `(source, sink)`; the position is the arc id.
    arcs: Vec<(usize, usize)>,
    flow: Vec<f64>,
    /// Arc ids incident to each node (sources first, then sinks).
    adjacent: Vec<Vec<usize>>,
    parent_arc: Vec<usize>,
    depth: Vec<usize>,
    potential: Vec<f64>,
    basic: Vec<bool>,
}

impl Tree {
    fn other(&self, arc: usize, node: usize) -> usize {
        let (s, t) = self.arcs[arc];
        if node == s {
            self.n + t
        } else {
            s
        }
    }

    fn cost<C: Fn(usize, usize) -> f64>(&self, arc: usize, cost: &C) -> f64 {
        let (s, t) = self.arcs[arc];
        cost(s, t)
    }

    /// Re-roots the subtree hanging off `start` below `parent` through
    /// `via`, recomputing depth and potentials.
    fn relabel<C: Fn(usize, usize) -> f64>(&mut self, start: usize, via: usize, cost: &C) {
        let mut queue = VecDeque::new();
        self.attach(start, via, cost);
        queue.push_back(start);
        while let Some(node) = queue.pop_front() {
            for k in 0..self.adjacent[node].len() {
                let arc = self.adjacent[node][k];
                if arc == self.parent_arc[node] {
                    continue;
                }
                let child = self.other(arc, node);
                self.attach(child, arc, cost);
                queue.push_back(child);
            }
        }
    }

    fn attach<C: Fn(usize, usize) -> f64>(&mut self, node: usize, arc: usize, cost: &C) {
        self.parent_arc[node] = arc;
        if arc == NONE {
            self.depth[node] = 0;
            self.potential[node] = 0.0;
            return;
        }
        let up = self.other(arc, node);
        self.depth[node] = self.depth[up] + 1;
        self.potential[node] = self.cost(arc, cost) - self.potential[up];
    }

    fn add_arc(&mut self, s: usize, t: usize, flow: f64) -> usize {
        let id = self.arcs.len();
        self.arcs.push((s, t));
        self.flow.push(flow);
        self.adjacent[s].push(id);
        self.adjacent[self.n + t].push(id);
        self.basic[s * self.m + t] = true;
        id
    }
}

/// Solves `min Σ c(i,j) f_ij` subject to `Σ_j f_ij = supply_i`,
/// `Σ_i f_ij = demand_j`, `f ≥ 0`. Supplies and demands must balance.
pub fn solve_transportation<C: Fn(usize, usize) -> f64>(
    supply: &[f64],
    demand: &[f64],
    cost: C,
) -> TransportSolution {
    let n = supply.len();
    let m = demand.len();
    assert!(n > 0 && m > 0, "empty transportation problem");
    let nodes = n + m;

    let mut scale: f64 = 0.0;
    for i in 0..n {
        for j in 0..m {
            scale = scale.max(cost(i, j).abs());
        }
    }
    let eps = 1e-12 * scale.max(f64::MIN_POSITIVE);

    let mut tree = Tree {
        n,
        m,
        arcs: Vec::with_capacity(nodes),
        flow: Vec::with_capacity(nodes),
        adjacent: vec![Vec::new(); nodes],
        parent_arc: vec![NONE; nodes],
        depth: vec![0; nodes],
        potential: vec![0.0; nodes],
        basic: vec![false; n * m],
    };

    // North-west corner rule over sources grouped by their cheapest sink,
    // which starts close to the optimum for semi-discrete instances.
    let mut order: Vec<(usize, f64, usize)> = (0..n)
        .map(|i| {
            let (j, c) = (0..m)
                .map(|j| (j, cost(i, j)))
                .fold((0, f64::INFINITY), |b, x| if x.1 < b.1 { x } else { b });
            (j, c, i)
        })
        .collect();
    order.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut k = 0;
    let mut j = 0;
    let mut left_s = supply[order[0].2];
    let mut left_d = demand[0];
    loop {
        let i = order[k].2;
        let last = k + 1 == n && j + 1 == m;
        let f = if last { left_s.max(0.0) } else { left_s.min(left_d).max(0.0) };
        tree.add_arc(i, j, f);
        if last {
            break;
        }
        left_s -= f;
        left_d -= f;
        if j + 1 == m || (k + 1 < n && left_s < left_d) {
            k += 1;
            left_s += supply[order[k].2];
        } else {
            j += 1;
            left_d += demand[j];
        }
    }
    tree.relabel(0, NONE, &cost);

    let total_arcs = n * m;
    let block = ((libm::sqrt(total_arcs as f64) as usize).max(m)).min(total_arcs);
    let mut cursor = 0;
    let mut bland = false;
    let mut pivots = 0;
    let mut path_s = Vec::new();
    let mut path_t = Vec::new();

    loop {
        let reduced = |tree: &Tree, a: usize| {
            let (i, j) = (a / m, a % m);
            cost(i, j) - tree.potential[i] - tree.potential[n + j]
        };
        // Entering arc.
        let mut entering = NONE;
        if bland {
            for a in 0..total_arcs {
                if !tree.basic[a] && reduced(&tree, a) < -eps {
                    entering = a;
                    break;
                }
            }
        } else {
            let mut best = -eps;
            let mut scanned = 0;
            while scanned < total_arcs {
                let a = cursor;
                cursor = if cursor + 1 == total_arcs { 0 } else { cursor + 1 };
                scanned += 1;
                if !tree.basic[a] {
                    let r = reduced(&tree, a);
                    if r < best {
                        best = r;
                        entering = a;
                    }
                }
                if scanned % block == 0 && entering != NONE {
                    break;
                }
            }
        }
        if entering == NONE {
            break;
        }
        pivots += 1;
        let (ei, ej) = (entering / m, entering % m);

        // Tree path from the entering sink up to the common ancestor, and
        // from the entering source up to it.
        path_t.clear();
        path_s.clear();
        let mut a = n + ej;
        let mut b = ei;
        while tree.depth[a] > tree.depth[b] {
            let arc = tree.parent_arc[a];
            path_t.push(arc);
            a = tree.other(arc, a);
        }
        while tree.depth[b] > tree.depth[a] {
            let arc = tree.parent_arc[b];
            path_s.push(arc);
            b = tree.other(arc, b);
        }
        while a != b {
            let arc = tree.parent_arc[a];
            path_t.push(arc);
            a = tree.other(arc, a);
            let arc = tree.parent_arc[b];
            path_s.push(arc);
            b = tree.other(arc, b);
        }
        // Walking sink → ancestor → source, arcs alternate −, +, −, ...
        let cycle_len = path_t.len() + path_s.len();
        let arc_at = |k: usize| -> usize {
            if k < path_t.len() {
                path_t[k]
            } else {
                path_s[cycle_len - 1 - k]
            }
        };
        let mut theta = f64::INFINITY;
        let mut leaving = NONE;
        let mut leaving_pos = 0;
        for pos in (0..cycle_len).step_by(2) {
            let arc = arc_at(pos);
            let f = tree.flow[arc];
            let (s, t) = tree.arcs[arc];
            let key = s * m + t;
            let better = match leaving {
                NONE => true,
                _ => {
                    let (ls, lt) = tree.arcs[leaving];
                    f < theta || (f == theta && key < ls * m + lt)
                }
            };
            if better {
                theta = f;
                leaving = arc;
                leaving_pos = pos;
            }
        }
        let theta = theta.max(0.0);
        for pos in 0..cycle_len {
            let arc = arc_at(pos);
            if pos % 2 == 0 {
                tree.flow[arc] = (tree.flow[arc] - theta).max(0.0);
            } else {
                tree.flow[arc] += theta;
            }
        }
        bland = theta <= 0.0;

        // Swap the leaving arc for the entering one, reusing its id.
        let (ls, lt) = tree.arcs[leaving];
        let on_sink_side = leaving_pos < path_t.len();
        tree.basic[ls * m + lt] = false;
        tree.adjacent[ls].retain(|&x| x != leaving);
        tree.adjacent[n + lt].retain(|&x| x != leaving);
        tree.arcs[leaving] = (ei, ej);
        tree.flow[leaving] = theta;
        tree.adjacent[ei].push(leaving);
        tree.adjacent[n + ej].push(leaving);
        tree.basic[entering] = true;
        // The side of the cycle that held the leaving arc is cut off from the
        // root and now hangs from the other end of the entering arc.
        if on_sink_side {
            tree.relabel(n + ej, leaving, &cost);
        } else {
            tree.relabel(ei, leaving, &cost);
        }
    }

    let mut total = 0.0;
    let mut flows = Vec::with_capacity(tree.arcs.len());
    for (id, &(s, t)) in tree.arcs.iter().enumerate() {
        let f = tree.flow[id];
        total += f * cost(s, t);
        flows.push((s, t, f));
    }
    flows.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    TransportSolution {
        cost: total,
        flows,
        source_potentials: tree.potential[..n].to_vec(),
        sink_potentials: tree.potential[n..].to_vec(),
        pivots,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_instance() {
        // supplies 20, 30, 25; demands 10, 35, 30
        let c = [[8.0, 6.0, 10.0], [9.0, 12.0, 13.0], [14.0, 9.0, 16.0]];
        let s = solve_transportation(&[20.0, 30.0, 25.0], &[10.0, 35.0, 30.0], |i, j| c[i][j]);
        let mut row = [0.0; 3];
        let mut col = [0.0; 3];
        for &(i, j, f) in &s.flows {
            row[i] += f;
            col[j] += f;
            assert!(f >= 0.0);
        }
        assert_eq!(row, [20.0, 30.0, 25.0]);
        assert_eq!(col, [10.0, 35.0, 30.0]);
        let dual: f64 = [20.0, 30.0, 25.0]
            .iter()
            .zip(&s.source_potentials)
            .map(|(a, u)| a * u)
            .sum::<f64>()
            + [10.0, 35.0, 30.0]
                .iter()
                .zip(&s.sink_potentials)
                .map(|(b, v)| b * v)
                .sum::<f64>();
        assert!((dual - s.cost).abs() < 1e-9);
        for i in 0..3 {
            for j in 0..3 {
                assert!(c[i][j] - s.source_potentials[i] - s.sink_potentials[j] > -1e-9);
            }
        }
        // optimum cross-checked with an LP solver
        assert_eq!(s.cost, 735.0);
    }
}
