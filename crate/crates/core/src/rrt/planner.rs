use alloc::vec;
use alloc::vec::Vec;

use super::RrtError;
use crate::points::PointBuffer;
use crate::seq::Sequence;

/// Configuration space `[0,1]^d` with a collision test and a start.
pub trait Environment {
    fn dim(&self) -> usize;
    fn start(&self) -> &[f64];
    fn goal(&self) -> &[f64];
    fn in_collision(&self, q: &[f64]) -> bool;
}

/// Where `x_rand` comes from. Sample `k` is requested at iteration `k + 1`.
pub trait SampleSource {
    fn sample(&mut self, k: usize, out: &mut [f64]) -> Result<(), RrtError>;
}

impl SampleSource for Sequence {
    fn sample(&mut self, k: usize, out: &mut [f64]) -> Result<(), RrtError> {
        if out.len() != self.dim() {
            return Err(RrtError::DimensionMismatch {
                expected: out.len(),
                found: self.dim(),
            });
        }
        Ok(self.point_into(k as u64, out)?)
    }
}

impl SampleSource for &PointBuffer {
    fn sample(&mut self, k: usize, out: &mut [f64]) -> Result<(), RrtError> {
        if out.len() != self.dim() {
            return Err(RrtError::DimensionMismatch {
                expected: out.len(),
                found: self.dim(),
            });
        }
        if k >= self.n_points() {
            return Err(RrtError::SourceExhausted {
                available: self.n_points(),
            });
        }
        out.copy_from_slice(self.row(k));
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RrtConfig {
    /// Maximum iterations `K`.
    pub max_iterations: usize,
    /// Step size `δ` (Euclidean, configuration space).
    pub step: f64,
    /// Goal region: the ball of this radius around the goal configuration.
    pub goal_tolerance: f64,
}

impl Default for RrtConfig {
    fn default() -> Self {
        RrtConfig {
            max_iterations: 10_000,
            step: 0.02,
            goal_tolerance: 0.05,
        }
    }
}

impl RrtConfig {
    pub fn validate(&self) -> Result<(), RrtError> {
        if self.max_iterations == 0 {
            return Err(RrtError::Config("max_iterations must be at least 1"));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(RrtError::Config("step must be positive"));
        }
        if !(self.goal_tolerance >= 0.0) {
            return Err(RrtError::Config("goal tolerance must be nonnegative"));
        }
        Ok(())
    }
}

/// Nodes in insertion order; `parents[k] < k` for every `k > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    pub nodes: PointBuffer,
    pub parents: Vec<Option<usize>>,
}

impl Tree {
    fn new(root: &[f64]) -> Self {
        let mut nodes = PointBuffer::with_capacity(root.len(), 1);
        nodes.push(root);
        Tree {
            nodes,
            parents: vec![None],
        }
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    pub fn nearest(&self, q: &[f64]) -> usize {
        let mut best = (f64::INFINITY, 0);
        for (k, x) in self.nodes.rows().enumerate() {
            let d2: f64 = x.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
            if d2 < best.0 {
                best = (d2, k);
            }
        }
        best.1
    }

    /// Node indices from the root to `node`.
    pub fn path_to(&self, mut node: usize) -> Vec<usize> {
        let mut path = vec![node];
        while let Some(p) = self.parents[node] {
            path.push(p);
            node = p;
        }
        path.reverse();
        path
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult {
    /// Waypoints from start to the first node inside the goal region.
    pub path: Option<PointBuffer>,
    pub tree: Tree,
    /// Iterations consumed (`≤ K`).
    pub iterations: usize,
}

impl PlanResult {
    pub fn success(&self) -> bool {
        self.path.is_some()
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Grows a tree from the start, one sample per iteration: nearest node,
/// step of length `δ` toward the sample (or the sample itself if closer),
/// keep it if collision-free, stop once it lands in the goal region.
pub fn rrt_plan<E: Environment + ?Sized, S: SampleSource + ?Sized>(
    env: &E,
    cfg: &RrtConfig,
    source: &mut S,
) -> Result<PlanResult, RrtError> {
    cfg.validate()?;
    let d = env.dim();
    let start = env.start();
    if env.in_collision(start) {
        return Err(RrtError::StartInCollision);
    }
    let goal = env.goal();
    let mut tree = Tree::new(start);
    let mut x_rand = vec![0.0; d];
    let mut x_new = vec![0.0; d];
    for k in 1..=cfg.max_iterations {
        source.sample(k - 1, &mut x_rand)?;
        let near = tree.nearest(&x_rand);
        let x_near = tree.nodes.row(near);
        let gap = dist(x_near, &x_rand);
        if gap <= cfg.step {
            x_new.copy_from_slice(&x_rand);
        } else {
            let t = cfg.step / gap;
            for ((n, a), b) in x_new.iter_mut().zip(x_near).zip(&x_rand) {
                *n = a + t * (b - a);
            }
        }
        if env.in_collision(&x_new) {
            continue;
        }
        tree.nodes.push(&x_new);
        tree.parents.push(Some(near));
        if dist(&x_new, goal) <= cfg.goal_tolerance {
            let ids = tree.path_to(tree.len() - 1);
            let mut path = PointBuffer::with_capacity(d, ids.len());
            for id in ids {
                path.push(tree.nodes.row(id));
            }
            return Ok(PlanResult {
                path: Some(path),
                tree,
                iterations: k,
            });
        }
    }
    Ok(PlanResult {
        path: None,
        tree,
        iterations: cfg.max_iterations,
    })
}
