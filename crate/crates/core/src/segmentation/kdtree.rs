//! Static 3-D k-d tree for exact nearest-neighbor distances.
//!
//! Distances are accumulated with the same expression as the brute-force
//! path, so the minimum found is bitwise identical.

use super::{squared_distance, Point};

const LEAF_SIZE: usize = 16;

enum Node {
    Leaf { start: usize, end: usize },
    Split { axis: usize, value: f64, left: usize, right: usize },
}

pub(crate) struct KdTree {
    points: Vec<Point>,
    nodes: Vec<Node>,
}

impl KdTree {
    pub(crate) fn build(points: &[Point]) -> Self {
        let mut tree = Self {
            points: points.to_vec(),
            nodes: Vec::new(),
        };
        let n = tree.points.len();
        tree.build_node(0, n);
        tree
    }

    fn build_node(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let slice = &self.points[start..end];
        let axis = (0..3)
            .max_by(|&a, &b| {
                spread(slice, a).total_cmp(&spread(slice, b))
            })
            .unwrap_or(0);
        let mid = start + (end - start) / 2;
        self.points[start..end].select_nth_unstable_by(mid - start, |p, q| p[axis].total_cmp(&q[axis]));
        let value = self.points[mid][axis];
        self.nodes.push(Node::Split { axis, value, left: 0, right: 0 });
        let left = self.build_node(start, mid);
        let right = self.build_node(mid, end);
        if let Node::Split { left: l, right: r, .. } = &mut self.nodes[id] {
            *l = left;
            *r = right;
        }
        id
    }

    /// Smallest squared distance from `query` to any stored point.
    pub(crate) fn nearest_squared(&self, query: &Point) -> f64 {
        let mut best = f64::INFINITY;
        if !self.points.is_empty() {
            self.search(0, query, &mut best);
        }
        best
    }

    fn search(&self, node: usize, query: &Point, best: &mut f64) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for p in &self.points[start..end] {
                    let d = squared_distance(query, p);
                    if d < *best {
                        *best = d;
                    }
                }
            }
            Node::Split { axis, value, left, right } => {
                let diff = query[axis] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.search(near, query, best);
                if diff * diff <= *best {
                    self.search(far, query, best);
                }
            }
        }
    }
}

fn spread(points: &[Point], axis: usize) -> f64 {
    let (lo, hi) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        (lo.min(p[axis]), hi.max(p[axis]))
    });
    hi - lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_brute_force_bitwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut gen = |n: usize| -> Vec<Point> {
            (0..n)
                .map(|_| {
                    [
                        f64::from(rng.random_range(0..40u32)) * 0.7,
                        f64::from(rng.random_range(0..40u32)) * 1.3,
                        f64::from(rng.random_range(0..10u32)) * 2.5,
                    ]
                })
                .collect()
        };
        let targets = gen(3000);
        let queries = gen(500);
        let tree = KdTree::build(&targets);
        for q in &queries {
            let brute = targets.iter().map(|t| squared_distance(q, t)).fold(f64::INFINITY, f64::min);
            assert_eq!(tree.nearest_squared(q).to_bits(), brute.to_bits());
        }
    }
}
