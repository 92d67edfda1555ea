//! CART classification tree with Gini impurity.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Leaf {
        class: usize,
    },
    /// Samples with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

pub(crate) struct TreeConfig {
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    /// Features examined per split.
    pub mtry: usize,
    pub n_classes: usize,
}

impl Tree {
    pub fn leaf(class: usize) -> Self {
        Tree {
            nodes: vec![Node::Leaf { class }],
        }
    }

    pub fn predict(&self, row: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf { class } => return class,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if row[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    /// Grows a tree on `samples` (indices into `x`, repeats allowed).
    pub(crate) fn fit<R: Rng>(
        x: &[Vec<f64>],
        y: &[usize],
        samples: Vec<usize>,
        cfg: &TreeConfig,
        rng: &mut R,
    ) -> Tree {
        let mut tree = Tree { nodes: Vec::new() };
        tree.nodes.push(Node::Leaf { class: 0 });
        let mut stack = vec![(0usize, samples, 0usize)];
        while let Some((slot, idx, depth)) = stack.pop() {
            let counts = class_counts(y, &idx, cfg.n_classes);
            let majority = argmax(&counts);
            let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
            let depth_ok = cfg.max_depth.is_none_or(|d| depth < d);
            let split = if !pure && depth_ok && idx.len() >= 2 * cfg.min_leaf {
                best_split(x, y, &idx, &counts, cfg, rng)
            } else {
                None
            };
            match split {
                None => tree.nodes[slot] = Node::Leaf { class: majority },
                Some((feature, threshold)) => {
                    let (l, r): (Vec<usize>, Vec<usize>) =
                        idx.into_iter().partition(|&i| x[i][feature] <= threshold);
                    let left = tree.nodes.len();
                    tree.nodes.push(Node::Leaf { class: 0 });
                    let right = tree.nodes.len();
                    tree.nodes.push(Node::Leaf { class: 0 });
                    tree.nodes[slot] = Node::Split {
                        feature,
                        threshold,
                        left,
                        right,
                    };
                    stack.push((right, r, depth + 1));
                    stack.push((left, l, depth + 1));
                }
            }
        }
        tree
    }
}

fn class_counts(y: &[usize], idx: &[usize], k: usize) -> Vec<usize> {
    let mut c = vec![0; k];
    for &i in idx {
        c[y[i]] += 1;
    }
    c
}

/// Index of the largest count; the lowest index wins ties.
pub(crate) fn argmax(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

/// Sum of squared class counts over node size. Maximizing the weighted sum
/// over both children minimizes weighted Gini impurity.
fn purity(counts: &[usize], n: usize) -> f64 {
    counts.iter().map(|&c| (c * c) as f64).sum::<f64>() / n as f64
}

/// Best (feature, threshold), scanning candidate features in increasing
/// index order and thresholds in increasing order; only strictly better
/// splits replace the incumbent.
fn best_split<R: Rng>(
    x: &[Vec<f64>],
    y: &[usize],
    idx: &[usize],
    counts: &[usize],
    cfg: &TreeConfig,
    rng: &mut R,
) -> Option<(usize, f64)> {
    let p = x[0].len();
    let features: Vec<usize> = if cfg.mtry >= p {
        (0..p).collect()
    } else {
        let mut f = index::sample(rng, p, cfg.mtry).into_vec();
        f.sort_unstable();
        f
    };
    let n = idx.len();
    let parent = purity(counts, n);
    let mut best: Option<(usize, f64)> = None;
    let mut best_score = parent + 1e-12 * n as f64;
    let mut column: Vec<(f64, usize)> = Vec::with_capacity(n);
    let mut left = vec![0usize; cfg.n_classes];
    for &f in &features {
        column.clear();
        column.extend(idx.iter().map(|&i| (x[i][f], y[i])));
        column.sort_by(|a, b| a.0.total_cmp(&b.0));
        if column[0].0 == column[n - 1].0 {
            continue;
        }
        left.iter_mut().for_each(|c| *c = 0);
        let mut left_sq = 0.0;
        let mut right = counts.to_vec();
        let mut right_sq: f64 = counts.iter().map(|&c| (c * c) as f64).sum();
        for i in 0..n - 1 {
            let c = column[i].1;
            left_sq += (2 * left[c] + 1) as f64;
            left[c] += 1;
            right_sq -= (2 * right[c] - 1) as f64;
            right[c] -= 1;
            let (v, next) = (column[i].0, column[i + 1].0);
            let n_left = i + 1;
            if v == next || n_left < cfg.min_leaf || n - n_left < cfg.min_leaf {
                continue;
            }
            let score = left_sq / n_left as f64 + right_sq / (n - n_left) as f64;
            if score > best_score {
                let mut threshold = v + (next - v) / 2.0;
                if threshold >= next {
                    threshold = v;
                }
                best_score = score;
                best = Some((f, threshold));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(p: usize) -> TreeConfig {
        TreeConfig {
            max_depth: None,
            min_leaf: 1,
            mtry: p,
            n_classes: 2,
        }
    }

    #[test]
    fn midpoint_threshold() {
        let x = vec![vec![1.0], vec![2.0], vec![4.0], vec![6.0]];
        let y = vec![0, 0, 1, 1];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let t = Tree::fit(&x, &y, (0..4).collect(), &cfg(1), &mut rng);
        assert_eq!(
            t.nodes[0],
            Node::Split {
                feature: 0,
                threshold: 3.0,
                left: 1,
                right: 2
            }
        );
        assert_eq!(t.predict(&[2.9]), 0);
        assert_eq!(t.predict(&[3.1]), 1);
    }

    #[test]
    fn constant_features_give_majority_leaf() {
        let x = vec![vec![1.0]; 5];
        let y = vec![1, 0, 1, 0, 1];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let t = Tree::fit(&x, &y, (0..5).collect(), &cfg(1), &mut rng);
        assert_eq!(t.nodes, vec![Node::Leaf { class: 1 }]);
    }

    #[test]
    fn lowest_feature_wins_ties() {
        let x = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0], vec![3.0, 3.0]];
        let y = vec![0, 0, 1, 1];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let t = Tree::fit(&x, &y, (0..4).collect(), &cfg(2), &mut rng);
        assert!(matches!(t.nodes[0], Node::Split { feature: 0, .. }));
    }

    #[test]
    fn depth_limit_and_min_leaf() {
        let x: Vec<Vec<f64>> = (0..16).map(|i| vec![i as f64]).collect();
        let y: Vec<usize> = (0..16).map(|i| i % 2).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let c = TreeConfig {
            max_depth: Some(2),
            ..cfg(1)
        };
        assert!(Tree::fit(&x, &y, (0..16).collect(), &c, &mut rng).depth() <= 2);
        let c = TreeConfig {
            min_leaf: 8,
            ..cfg(1)
        };
        let t = Tree::fit(&x, &y, (0..16).collect(), &c, &mut rng);
        assert!(t.depth() <= 1);
    }

    #[test]
    fn adjacent_floats_route_correctly() {
        let a = 1.0f64;
        let b = f64::from_bits(a.to_bits() + 1);
        let x = vec![vec![a], vec![b]];
        let y = vec![0, 1];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let t = Tree::fit(&x, &y, vec![0, 1], &cfg(1), &mut rng);
        assert_eq!(t.predict(&[a]), 0);
        assert_eq!(t.predict(&[b]), 1);
    }
}
