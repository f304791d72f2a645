//! Local vertex connectivity by unit-capacity augmenting paths on the
//! split-vertex network: vertex `v` becomes `v_in -> v_out` with capacity 1.

use std::collections::VecDeque;

use crate::rgg::GeometricGraph;

/// Residual network reused across many source/sink queries on one graph.
pub(crate) struct SplitNetwork {
    head: Vec<u32>,
    to: Vec<u32>,
    rev: Vec<u32>,
    cap: Vec<u8>,
    base: Vec<u8>,
    parent_arc: Vec<u32>,
    seen: Vec<u32>,
    stamp: u32,
    queue: VecDeque<u32>,
}

impl SplitNetwork {
    pub(crate) fn new(g: &GeometricGraph) -> Self {
        let n = g.len();
        let nodes = 2 * n;
        // Arc 2i is forward, 2i + 1 its residual twin.
        let mut arcs: Vec<(u32, u32, u8)> = Vec::with_capacity(2 * n + 4 * g.edge_count());
        for v in 0..n as u32 {
            arcs.push((2 * v, 2 * v + 1, 1));
            arcs.push((2 * v + 1, 2 * v, 0));
        }
        for (u, v) in g.edges() {
            for (a, b) in [(u as u32, v as u32), (v as u32, u as u32)] {
                arcs.push((2 * a + 1, 2 * b, 1));
                arcs.push((2 * b, 2 * a + 1, 0));
            }
        }
        let mut head = vec![0u32; nodes + 1];
        for &(tail, _, _) in &arcs {
            head[tail as usize + 1] += 1;
        }
        for i in 0..nodes {
            head[i + 1] += head[i];
        }
        let mut slot = head.clone();
        let mut place = vec![0u32; arcs.len()];
        for (i, &(tail, _, _)) in arcs.iter().enumerate() {
            place[i] = slot[tail as usize];
            slot[tail as usize] += 1;
        }
        let mut to = vec![0u32; arcs.len()];
        let mut base = vec![0u8; arcs.len()];
        let mut rev = vec![0u32; arcs.len()];
        for (i, &(_, h, c)) in arcs.iter().enumerate() {
            let p = place[i] as usize;
            to[p] = h;
            base[p] = c;
            rev[p] = place[i ^ 1];
        }
        Self {
            head,
            to,
            rev,
            cap: base.clone(),
            base,
            parent_arc: vec![0; nodes],
            seen: vec![0; nodes],
            stamp: 0,
            queue: VecDeque::new(),
        }
    }

    /// Number of internally vertex-disjoint paths between the non-adjacent
    /// vertices `s` and `t`, counted up to `cap_at`.
    pub(crate) fn local_connectivity(&mut self, s: usize, t: usize, cap_at: usize) -> usize {
        self.cap.copy_from_slice(&self.base);
        let source = 2 * s as u32 + 1;
        let sink = 2 * t as u32;
        let mut flow = 0;
        while flow < cap_at && self.augment(source, sink) {
            flow += 1;
        }
        flow
    }

    fn augment(&mut self, source: u32, sink: u32) -> bool {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.fill(0);
            self.stamp = 1;
        }
        self.queue.clear();
        self.queue.push_back(source);
        self.seen[source as usize] = self.stamp;
        while let Some(u) = self.queue.pop_front() {
            for arc in self.head[u as usize]..self.head[u as usize + 1] {
                let v = self.to[arc as usize];
                if self.cap[arc as usize] == 0 || self.seen[v as usize] == self.stamp {
                    continue;
                }
                self.seen[v as usize] = self.stamp;
                self.parent_arc[v as usize] = arc;
                if v == sink {
                    let mut x = sink;
                    while x != source {
                        let a = self.parent_arc[x as usize] as usize;
                        self.cap[a] -= 1;
                        self.cap[self.rev[a] as usize] += 1;
                        x = self.to[self.rev[a] as usize];
                    }
                    return true;
                }
                self.queue.push_back(v);
            }
        }
        false
    }
}
