//! Geometric graphs over a uniform spatial hash.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::geometry::Point3;

type CellKey = [i64; 3];

/// Uniform grid bucketing point indices by cell. Cells are stored as
/// contiguous runs of `order`.
#[derive(Debug, Clone)]
pub struct GridIndex {
    cell: f64,
    order: Vec<u32>,
    runs: HashMap<CellKey, (u32, u32)>,
}

impl GridIndex {
    pub fn new(points: &[Point3], cell: f64) -> Self {
        let key = |p: &Point3| cell_key(p, cell);
        let mut order: Vec<u32> = (0..points.len() as u32).collect();
        order.sort_unstable_by_key(|&i| (key(&points[i as usize]), i));
        let mut runs = HashMap::new();
        let mut start = 0;
        while start < order.len() {
            let k = key(&points[order[start] as usize]);
            let mut end = start + 1;
            while end < order.len() && key(&points[order[end] as usize]) == k {
                end += 1;
            }
            runs.insert(k, (start as u32, end as u32));
            start = end;
        }
        Self { cell, order, runs }
    }

    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    pub fn occupied_cells(&self) -> usize {
        self.runs.len()
    }

    /// Indices of points in the 27 cells around `p`. Every point within one
    /// cell width of `p` is among them.
    pub fn candidates<'a>(&'a self, p: &Point3) -> impl Iterator<Item = usize> + 'a {
        let [a, b, c] = cell_key(p, self.cell);
        (-1i64..=1)
            .flat_map(move |dx| (-1i64..=1).flat_map(move |dy| (-1i64..=1).map(move |dz| [dx, dy, dz])))
            .filter_map(move |[dx, dy, dz]| {
                self.runs
                    .get(&[a.saturating_add(dx), b.saturating_add(dy), c.saturating_add(dz)])
            })
            .flat_map(move |&(s, e)| self.order[s as usize..e as usize].iter().map(|&i| i as usize))
    }
}

fn cell_key(p: &Point3, cell: f64) -> CellKey {
    [
        (p.x / cell).floor() as i64,
        (p.y / cell).floor() as i64,
        (p.z / cell).floor() as i64,
    ]
}

/// Points joined whenever their distance is at most `radius`.
#[derive(Debug, Clone)]
pub struct GeometricGraph {
    points: Vec<Point3>,
    radius: f64,
    adjacency: Vec<Vec<u32>>,
    grid: GridIndex,
}

impl GeometricGraph {
    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn grid(&self) -> &GridIndex {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sorted neighbour indices of vertex `v`.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn min_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, nbrs)| {
                nbrs.iter()
                    .map(|&j| j as usize)
                    .filter(move |&j| j > i)
                    .map(move |j| (i, j))
            })
            .collect()
    }
}

/// Builds the graph with the closed rule `distance <= radius`.
pub fn build_graph(points: &[Point3], radius: f64) -> Result<GeometricGraph> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(domain(format!("graph radius must be positive, got {radius}")));
    }
    if points.is_empty() {
        return Err(domain("graph needs at least one point"));
    }
    if let Some(p) = points.iter().find(|p| !p.is_finite()) {
        return Err(domain(format!("non-finite point {p:?}")));
    }
    // Slightly wider than the radius so rounding in the cell keys can never
    // separate two points at distance exactly `radius` by more than one cell.
    let grid = GridIndex::new(points, radius * (1.0 + 1e-9));
    let adjacency = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let mut nbrs: Vec<u32> = grid
                .candidates(p)
                .filter(|&j| j != i && p.distance(&points[j]) <= radius)
                .map(|j| j as u32)
                .collect();
            nbrs.sort_unstable();
            nbrs
        })
        .collect();
    Ok(GeometricGraph {
        points: points.to_vec(),
        radius,
        adjacency,
        grid,
    })
}

/// Number of vertices of each degree.
pub fn degree_histogram(g: &GeometricGraph) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for v in 0..g.len() {
        *hist.entry(g.degree(v)).or_insert(0) += 1;
    }
    hist
}

/// For every point, the sorted distances to its `k` nearest other points.
///
/// Uses a dense grid sized for about `k + 1` points per cell and searches
/// shells of cells outward until the `k`-th distance is certified.
pub fn nearest_distances(points: &[Point3], k: usize) -> Result<Vec<Vec<f64>>> {
    let n = points.len();
    if k == 0 || k >= n {
        return Err(domain(format!("need 1 <= k < n, got k = {k}, n = {n}")));
    }
    if let Some(p) = points.iter().find(|p| !p.is_finite()) {
        return Err(domain(format!("non-finite point {p:?}")));
    }
    let dense = DenseGrid::new(points, k);
    Ok(points
        .par_iter()
        .enumerate()
        .map(|(i, p)| dense.k_nearest(points, i, p, k))
        .collect())
}

/// Distance from every point to its `k`-th nearest other point.
pub fn kth_neighbor_distances(points: &[Point3], k: usize) -> Result<Vec<f64>> {
    Ok(nearest_distances(points, k)?
        .into_iter()
        .map(|d| d[k - 1])
        .collect())
}

struct DenseGrid {
    lo: [f64; 3],
    side: [f64; 3],
    dims: [usize; 3],
    start: Vec<u32>,
    order: Vec<u32>,
}

impl DenseGrid {
    fn new(points: &[Point3], k: usize) -> Self {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in points {
            for (a, c) in p.coords().into_iter().enumerate() {
                lo[a] = lo[a].min(c);
                hi[a] = hi[a].max(c);
            }
        }
        let per_axis = ((points.len() as f64 / (k as f64 + 1.0)).cbrt().floor() as usize).max(1);
        let mut dims = [per_axis; 3];
        let mut side = [1.0; 3];
        for a in 0..3 {
            let extent = hi[a] - lo[a];
            if extent > 0.0 {
                side[a] = extent / per_axis as f64;
            } else {
                dims[a] = 1;
            }
        }
        let mut grid = Self {
            lo,
            side,
            dims,
            start: Vec::new(),
            order: Vec::new(),
        };
        let cells = dims[0] * dims[1] * dims[2];
        let mut counts = vec![0u32; cells + 1];
        let ids: Vec<usize> = points.iter().map(|p| grid.flat(grid.cell_of(p))).collect();
        for &c in &ids {
            counts[c + 1] += 1;
        }
        for c in 0..cells {
            counts[c + 1] += counts[c];
        }
        let mut fill = counts.clone();
        let mut order = vec![0u32; points.len()];
        for (i, &c) in ids.iter().enumerate() {
            order[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }
        grid.start = counts;
        grid.order = order;
        grid
    }

    fn cell_of(&self, p: &Point3) -> [usize; 3] {
        let c = p.coords();
        let mut out = [0; 3];
        for a in 0..3 {
            let raw = ((c[a] - self.lo[a]) / self.side[a]).floor();
            out[a] = (raw.max(0.0) as usize).min(self.dims[a] - 1);
        }
        out
    }

    fn flat(&self, [a, b, c]: [usize; 3]) -> usize {
        (a * self.dims[1] + b) * self.dims[2] + c
    }

    fn k_nearest(&self, points: &[Point3], i: usize, p: &Point3, k: usize) -> Vec<f64> {
        let home = self.cell_of(p);
        let min_side = self.side.iter().copied().fold(f64::INFINITY, f64::min);
        let max_ring = *self.dims.iter().max().unwrap();
        let mut best: Vec<f64> = Vec::with_capacity(k + 1);
        for ring in 0..=max_ring as i64 {
            for da in -ring..=ring {
                for db in -ring..=ring {
                    for dc in -ring..=ring {
                        if da.abs().max(db.abs()).max(dc.abs()) != ring {
                            continue;
                        }
                        let cell = [home[0] as i64 + da, home[1] as i64 + db, home[2] as i64 + dc];
                        if (0..3).any(|a| cell[a] < 0 || cell[a] >= self.dims[a] as i64) {
                            continue;
                        }
                        let f = self.flat(cell.map(|c| c as usize));
                        for &j in &self.order[self.start[f] as usize..self.start[f + 1] as usize] {
                            let j = j as usize;
                            if j == i {
                                continue;
                            }
                            let d = p.distance(&points[j]);
                            if best.len() < k || d < best[k - 1] {
                                let at = best.partition_point(|&x| x <= d);
                                best.insert(at, d);
                                best.truncate(k);
                            }
                        }
                    }
                }
            }
            // Cells in the next shell are at least `ring` cell widths away.
            if best.len() == k && best[k - 1] <= ring as f64 * min_side {
                break;
            }
        }
        best
    }
}
