//! k-d tree over 3D points for nearest-neighbor queries.
//!
//! Build is deterministic (median split on the widest axis, ties broken by
//! original index), so query results are reproducible across runs and thread
//! counts.

use crate::Vec3;

struct Node {
    /// Splitting point index (into `points`).
    point: u32,
    axis: u8,
    left: i32,
    right: i32,
}

pub struct KdTree {
    points: Vec<Vec3>,
    nodes: Vec<Node>,
    root: i32,
}

impl KdTree {
    pub fn build(points: &[Vec3]) -> Self {
        let mut idx: Vec<u32> = (0..points.len() as u32).collect();
        let mut tree = KdTree { points: points.to_vec(), nodes: Vec::with_capacity(points.len()), root: -1 };
        let n = idx.len();
        tree.root = tree.build_rec(&mut idx, 0, n);
        tree
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn build_rec(&mut self, idx: &mut [u32], lo: usize, hi: usize) -> i32 {
        if lo >= hi {
            return -1;
        }
        let slice = &mut idx[lo..hi];
        // widest axis of the current bucket
        let mut min = self.points[slice[0] as usize];
        let mut max = min;
        for &i in slice.iter() {
            min = min.inf(&self.points[i as usize]);
            max = max.sup(&self.points[i as usize]);
        }
        let ext = max - min;
        let axis = if ext.x >= ext.y && ext.x >= ext.z {
            0
        } else if ext.y >= ext.z {
            1
        } else {
            2
        };
        let mid = slice.len() / 2;
        slice.select_nth_unstable_by(mid, |&a, &b| {
            let va = self.points[a as usize][axis];
            let vb = self.points[b as usize][axis];
            va.partial_cmp(&vb).unwrap().then(a.cmp(&b))
        });
        let point = slice[mid];
        let node_id = self.nodes.len() as i32;
        self.nodes.push(Node { point, axis: axis as u8, left: -1, right: -1 });
        let left = self.build_rec(idx, lo, lo + mid);
        let right = self.build_rec(idx, lo + mid + 1, hi);
        self.nodes[node_id as usize].left = left;
        self.nodes[node_id as usize].right = right;
        node_id
    }

    /// Index and squared distance of the nearest point. Panics on empty trees.
    pub fn nearest(&self, query: Vec3) -> (usize, f64) {
        assert!(!self.points.is_empty(), "nearest() on empty KdTree");
        let mut best = (usize::MAX, f64::INFINITY);
        self.nearest_rec(self.root, query, &mut best);
        best
    }

    fn nearest_rec(&self, node: i32, query: Vec3, best: &mut (usize, f64)) {
        if node < 0 {
            return;
        }
        let n = &self.nodes[node as usize];
        let p = self.points[n.point as usize];
        let d2 = (p - query).norm_squared();
        if d2 < best.1 || (d2 == best.1 && (n.point as usize) < best.0) {
            *best = (n.point as usize, d2);
        }
        let delta = query[n.axis as usize] - p[n.axis as usize];
        let (near, far) = if delta < 0.0 { (n.left, n.right) } else { (n.right, n.left) };
        self.nearest_rec(near, query, best);
        if delta * delta < best.1 {
            self.nearest_rec(far, query, best);
        }
    }

    /// Indices and squared distances of the k nearest points, closest first.
    /// The query point itself is included when present in the tree.
    pub fn k_nearest(&self, query: Vec3, k: usize) -> Vec<(usize, f64)> {
        let mut heap: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
        self.k_nearest_rec(self.root, query, k, &mut heap);
        heap.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        heap.into_iter().map(|(d2, i)| (i, d2)).collect()
    }

    fn k_nearest_rec(&self, node: i32, query: Vec3, k: usize, heap: &mut Vec<(f64, usize)>) {
        if node < 0 {
            return;
        }
        let n = &self.nodes[node as usize];
        let p = self.points[n.point as usize];
        let d2 = (p - query).norm_squared();
        if heap.len() < k {
            heap.push((d2, n.point as usize));
            if heap.len() == k {
                heap.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
            }
        } else if d2 < heap[0].0 {
            heap[0] = (d2, n.point as usize);
            // restore "max first" order (small k, a sort is fine)
            heap.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        }
        let worst = if heap.len() < k { f64::INFINITY } else { heap[0].0 };
        let delta = query[n.axis as usize] - p[n.axis as usize];
        let (near, far) = if delta < 0.0 { (n.left, n.right) } else { (n.right, n.left) };
        self.k_nearest_rec(near, query, k, heap);
        let worst = if heap.len() < k { f64::INFINITY } else { worst.min(heap[0].0) };
        if delta * delta < worst {
            self.k_nearest_rec(far, query, k, heap);
        }
    }
}

/// `min_j ||q_i - pts_j||` for every query point, via one shared tree.
pub fn nearest_distances(queries: &[Vec3], tree: &KdTree) -> Vec<f64> {
    use rayon::prelude::*;
    queries.par_iter().map(|&q| tree.nearest(q).1.sqrt()).collect()
}
