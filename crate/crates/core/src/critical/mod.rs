//! Critical radii for minimum degree and vertex connectivity.
//!
//! Both radii are attained at pairwise distances under the closed-ball rule,
//! so every result here is one of the distances `Point3::distance` returns and
//! equality between radii is exact.

mod dsu;
mod flow;

pub use dsu::DisjointSet;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::geometry::Point3;
use crate::rgg::{build_graph, kth_neighbor_distances, GeometricGraph};

use flow::SplitNetwork;

/// Critical radii of one point set for order `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult {
    pub k: usize,
    /// Least radius with minimum degree at least `k`.
    pub rho_delta: f64,
    /// Least radius with vertex connectivity at least `k`.
    pub rho_kappa: f64,
    /// Longest Euclidean MST edge; present when `k == 1`.
    pub mst_longest_edge: Option<f64>,
}

fn check_order(n: usize, k: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(domain(format!("need 1 <= k < n, got k = {k} with {n} points")));
    }
    Ok(())
}

/// Largest `k`-th nearest-neighbour distance.
pub fn min_degree_radius(points: &[Point3], k: usize) -> Result<f64> {
    check_order(points.len(), k)?;
    let kth = kth_neighbor_distances(points, k)?;
    Ok(kth.into_iter().fold(0.0, f64::max))
}

pub fn is_connected(g: &GeometricGraph) -> bool {
    let n = g.len();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut reached = 1;
    while let Some(u) = stack.pop() {
        for &v in g.neighbors(u) {
            let v = v as usize;
            if !seen[v] {
                seen[v] = true;
                reached += 1;
                stack.push(v);
            }
        }
    }
    reached == n
}

/// Whether no set of fewer than `k` vertices disconnects `g` (and `n > k`).
///
/// Picks a minimum-degree vertex `v` and certifies `k` disjoint paths from
/// `v` to every non-neighbour, then between every non-adjacent pair of
/// neighbours of `v`. Any separator either misses `v`, splitting it from some
/// non-neighbour, or contains it, splitting two of its neighbours.
pub fn vertex_connectivity_at_least(g: &GeometricGraph, k: usize) -> bool {
    let n = g.len();
    if k == 0 {
        return true;
    }
    if n <= k || g.min_degree() < k || !is_connected(g) {
        return false;
    }
    if k == 1 {
        return true;
    }
    if k == 2 {
        return !has_articulation_point(g);
    }
    disjoint_paths_certify(g, k)
}

/// Esfahanian–Hakimi certificate for a connected graph with minimum degree `>= k`.
fn disjoint_paths_certify(g: &GeometricGraph, k: usize) -> bool {
    let n = g.len();
    let v = (0..n).min_by_key(|&u| g.degree(u)).expect("non-empty graph");
    let mut net = SplitNetwork::new(g);
    for u in 0..n {
        if u != v && !g.has_edge(v, u) && net.local_connectivity(v, u, k) < k {
            return false;
        }
    }
    let nbrs = g.neighbors(v);
    for (a, &x) in nbrs.iter().enumerate() {
        for &y in &nbrs[a + 1..] {
            let (x, y) = (x as usize, y as usize);
            if !g.has_edge(x, y) && net.local_connectivity(x, y, k) < k {
                return false;
            }
        }
    }
    true
}

/// Iterative Tarjan low-link search from vertex 0 of a connected graph.
fn has_articulation_point(g: &GeometricGraph) -> bool {
    let n = g.len();
    let mut order = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    // (vertex, parent, next neighbour index)
    let mut stack: Vec<(usize, usize, usize)> = vec![(0, usize::MAX, 0)];
    order[0] = 0;
    let mut clock = 1u32;
    let mut root_children = 0;
    while let Some(top) = stack.last_mut() {
        let (u, parent, idx) = *top;
        if let Some(&w) = g.neighbors(u).get(idx) {
            top.2 += 1;
            let w = w as usize;
            if order[w] == u32::MAX {
                order[w] = clock;
                low[w] = clock;
                clock += 1;
                stack.push((w, u, 0));
            } else if w != parent {
                low[u] = low[u].min(order[w]);
            }
            continue;
        }
        stack.pop();
        if parent == usize::MAX {
            continue;
        }
        low[parent] = low[parent].min(low[u]);
        if parent == 0 {
            root_children += 1;
        } else if low[u] >= order[parent] {
            return true;
        }
    }
    root_children > 1
}

/// All pairwise distances as `(distance, i, j)` sorted by distance then index.
pub fn sorted_pairs(points: &[Point3]) -> Vec<(f64, u32, u32)> {
    let n = points.len();
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((points[i].distance(&points[j]), i as u32, j as u32));
        }
    }
    pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    pairs
}

/// Sorted distinct pairwise distances.
pub fn distinct_distances(points: &[Point3]) -> Vec<f64> {
    let n = points.len();
    let mut d = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            d.push(points[i].distance(&points[j]));
        }
    }
    d.sort_unstable_by(f64::total_cmp);
    d.dedup();
    d
}

/// Distance at which incremental union-find over sorted pairs first joins
/// everything into one component.
fn union_find_threshold(points: &[Point3]) -> f64 {
    let mut dsu = DisjointSet::new(points.len());
    for (d, i, j) in sorted_pairs(points) {
        if dsu.union(i as usize, j as usize) && dsu.components() == 1 {
            return d;
        }
    }
    0.0
}

/// Least pairwise distance at which the closed-ball graph is `k`-connected.
pub fn connectivity_radius(points: &[Point3], k: usize) -> Result<f64> {
    check_order(points.len(), k)?;
    if k == 1 {
        return Ok(union_find_threshold(points));
    }
    let floor = min_degree_radius(points, k)?;
    connectivity_radius_from(points, k, floor)
}

fn connectivity_radius_from(points: &[Point3], k: usize, floor: f64) -> Result<f64> {
    let all = distinct_distances(points);
    let candidates = &all[all.partition_point(|&d| d < floor)..];
    let holds = |r: f64| -> Result<bool> { Ok(vertex_connectivity_at_least(&build_graph(points, r)?, k)) };
    // Usually attained at the minimum-degree radius itself.
    if holds(candidates[0])? {
        return Ok(candidates[0]);
    }
    // Gallop upward, then bisect. Invariant: fails at lo, holds at hi (the
    // complete graph is (n-1)-connected).
    let last = candidates.len() - 1;
    let (mut lo, mut hi) = (0, last);
    let mut step = 1;
    while lo + step < last {
        if holds(candidates[lo + step])? {
            hi = lo + step;
            break;
        }
        lo += step;
        step *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(candidates[mid])? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(candidates[hi])
}

/// Longest edge of the Euclidean minimum spanning tree (dense Prim).
pub fn mst_longest_edge(points: &[Point3]) -> Result<f64> {
    let n = points.len();
    if n < 2 {
        return Err(domain(format!("spanning tree needs at least 2 points, got {n}")));
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut current = 0;
    in_tree[0] = true;
    let mut longest: f64 = 0.0;
    for _ in 1..n {
        let p = points[current];
        let mut next = usize::MAX;
        let mut next_d = f64::INFINITY;
        for j in 0..n {
            if in_tree[j] {
                continue;
            }
            let d = p.distance(&points[j]);
            if d < best[j] {
                best[j] = d;
            }
            if best[j] < next_d {
                next_d = best[j];
                next = j;
            }
        }
        in_tree[next] = true;
        longest = longest.max(next_d);
        current = next;
    }
    Ok(longest)
}

/// Both critical radii for order `k`. For `k == 1` the union-find pass that
/// gives the connectivity radius also supplies the MST longest edge.
pub fn critical_radii(points: &[Point3], k: usize) -> Result<RadiusResult> {
    check_order(points.len(), k)?;
    let rho_delta = min_degree_radius(points, k)?;
    if k == 1 {
        let rho_kappa = union_find_threshold(points);
        return Ok(RadiusResult {
            k,
            rho_delta,
            rho_kappa,
            mst_longest_edge: Some(rho_kappa),
        });
    }
    Ok(RadiusResult {
        k,
        rho_delta,
        rho_kappa: connectivity_radius_from(points, k, rho_delta)?,
        mst_longest_edge: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> Vec<Point3> {
        xs.iter().map(|&x| Point3::new(x, 0.0, 0.0)).collect()
    }

    fn tetrahedron() -> Vec<Point3> {
        let s = 1.0 / 2f64.sqrt();
        vec![
            Point3::new(s, 0.0, 0.0),
            Point3::new(0.0, s, 0.0),
            Point3::new(0.0, 0.0, s),
            Point3::new(s, s, s),
        ]
    }

    fn pentagon() -> Vec<Point3> {
        (0..5)
            .map(|i| {
                let a = i as f64 * std::f64::consts::TAU / 5.0;
                Point3::new(a.cos(), a.sin(), 0.0)
            })
            .collect()
    }

    #[test]
    fn collinear_radii() {
        let pts = line(&[0.0, 1.0, 3.0]);
        assert_eq!(min_degree_radius(&pts, 1).unwrap(), 2.0);
        assert_eq!(min_degree_radius(&pts, 2).unwrap(), 3.0);
        assert_eq!(connectivity_radius(&pts, 1).unwrap(), 2.0);
        assert_eq!(connectivity_radius(&pts, 2).unwrap(), 3.0);
        assert_eq!(mst_longest_edge(&pts).unwrap(), 2.0);
        assert!(min_degree_radius(&pts, 3).is_err());
        assert!(connectivity_radius(&pts, 0).is_err());
    }

    #[test]
    fn tetrahedron_radii() {
        let pts = tetrahedron();
        let side = pts[0].distance(&pts[1]);
        assert!((side - 1.0).abs() < 1e-15);
        assert_eq!(
            min_degree_radius(&pts, 3).unwrap(),
            side.max(pts[2].distance(&pts[3])).max(pts[0].distance(&pts[3]))
        );
        let g = build_graph(&pts, 1.0 + 1e-12).unwrap();
        assert!(vertex_connectivity_at_least(&g, 3));
        assert!(!vertex_connectivity_at_least(&g, 4));
        assert!((connectivity_radius(&pts, 3).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn path_and_cycle() {
        let path = build_graph(&line(&[0.0, 1.0, 2.0]), 1.0).unwrap();
        assert!(vertex_connectivity_at_least(&path, 1));
        assert!(!vertex_connectivity_at_least(&path, 2));
        let pts = pentagon();
        let side = pts[0].distance(&pts[1]);
        let cycle = build_graph(&pts, side * (1.0 + 1e-9)).unwrap();
        assert_eq!(cycle.edge_count(), 5);
        assert!(vertex_connectivity_at_least(&cycle, 2));
        assert!(!vertex_connectivity_at_least(&cycle, 3));
    }

    #[test]
    fn two_points() {
        let pts = line(&[0.0, 0.7]);
        assert_eq!(mst_longest_edge(&pts).unwrap(), 0.7);
        let r = critical_radii(&pts, 1).unwrap();
        assert_eq!(
            (r.rho_delta, r.rho_kappa, r.mst_longest_edge),
            (0.7, 0.7, Some(0.7))
        );
        assert!(mst_longest_edge(&pts[..1]).is_err());
    }

    #[test]
    fn articulation_search_agrees_with_flow() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut both = [0usize; 2];
        for _ in 0..300 {
            let n = rng.random_range(3..40);
            let pts: Vec<Point3> = (0..n)
                .map(|_| Point3::new(rng.random(), rng.random(), rng.random()))
                .collect();
            let g = build_graph(&pts, rng.random_range(0.2..0.7)).unwrap();
            if !is_connected(&g) || g.min_degree() < 2 {
                continue;
            }
            let fast = !has_articulation_point(&g);
            assert_eq!(fast, disjoint_paths_certify(&g, 2));
            both[usize::from(fast)] += 1;
        }
        assert!(both[0] > 5 && both[1] > 5, "{both:?}");
    }

    #[test]
    fn bowtie_needs_larger_radius_for_two_connectivity() {
        // Two triangles sharing a cut vertex at the origin: min degree 2 at
        // the triangle side, but the origin separates until the far links appear.
        let pts = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(-1.0, 0.3, 0.0),
            Point3::new(-1.0, -0.3, 0.0),
            Point3::new(1.0, 0.3, 0.0),
            Point3::new(1.0, -0.3, 0.0),
        ];
        let delta = min_degree_radius(&pts, 2).unwrap();
        let kappa = connectivity_radius(&pts, 2).unwrap();
        assert!(delta < kappa);
        assert_eq!(kappa, pts[1].distance(&pts[3]));
        let r = critical_radii(&pts, 2).unwrap();
        assert_eq!((r.rho_delta, r.rho_kappa), (delta, kappa));
    }
}
