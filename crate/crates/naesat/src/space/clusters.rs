//! Cluster geometry of an enumerated solution set.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::enumerate::{SolutionSet, SolutionSummary};
use crate::formula::{Assignment, BetaWindow};
use crate::rng::master_rng;
use crate::{Error, Result};

/// Ball clusters, connected components, and their counts for a solution
/// set at radius theta n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterDecomposition {
    pub theta: f64,
    /// Effective radius max(1, ceil(theta n)), so small-n runs stay
    /// meaningful.
    pub radius: usize,
    /// ball_clusters[i] = sorted indices of solutions within the radius of
    /// solution i (including i itself).
    pub ball_clusters: Vec<Vec<usize>>,
    /// component_of[i] = component id of solution i under the transitive
    /// closure of the radius relation.
    pub component_of: Vec<usize>,
    /// components[c] = sorted member indices.
    pub components: Vec<Vec<usize>>,
    /// Number of distinct ball-cluster sets.
    pub n_balls: usize,
    pub n_components: usize,
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Decompose a solution set into ball clusters and components at radius
/// fraction theta in (0, 1].
pub fn cluster_decomposition(solutions: &SolutionSet, theta: f64) -> Result<ClusterDecomposition> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::domain(format!("theta must be in (0,1], got {theta}")));
    }
    let n = solutions.n;
    let radius = ((theta * n as f64).ceil() as usize).max(1);
    let masks = solutions.masks();
    let count = masks.len();
    let mut ball_clusters = vec![Vec::new(); count];
    let mut dsu = Dsu::new(count);
    for i in 0..count {
        ball_clusters[i].push(i);
        for j in (i + 1)..count {
            let d = (masks[i] ^ masks[j]).count_ones() as usize;
            if d <= radius {
                ball_clusters[i].push(j);
                ball_clusters[j].push(i);
                dsu.union(i, j);
            }
        }
    }
    for b in &mut ball_clusters {
        b.sort_unstable();
    }
    let mut component_of = vec![0usize; count];
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..count {
        let r = dsu.find(i);
        let id = match roots.iter().position(|&x| x == r) {
            Some(p) => p,
            None => {
                roots.push(r);
                roots.len() - 1
            }
        };
        component_of[i] = id;
    }
    let mut components = vec![Vec::new(); roots.len()];
    for (i, &c) in component_of.iter().enumerate() {
        components[c].push(i);
    }
    let distinct: BTreeSet<&Vec<usize>> = ball_clusters.iter().collect();
    Ok(ClusterDecomposition {
        theta,
        radius,
        n_balls: distinct.len(),
        n_components: components.len(),
        ball_clusters,
        component_of,
        components,
    })
}

/// Number of distinct ball-cluster sets centered at solutions whose beta
/// falls in the window.
pub fn beta_ball_count(
    decomp: &ClusterDecomposition,
    summaries: &[SolutionSummary],
    window: BetaWindow,
) -> usize {
    let distinct: BTreeSet<&Vec<usize>> = decomp
        .ball_clusters
        .iter()
        .zip(summaries)
        .filter(|(_, s)| window.contains(s.beta))
        .map(|(b, _)| b)
        .collect();
    distinct.len()
}

/// Draw i.i.d. samples from the cluster-uniform distribution: pick a
/// component uniformly, then a member uniformly inside it.
pub fn sp_sample(
    decomp: &ClusterDecomposition,
    solutions: &SolutionSet,
    seed: u64,
    count: usize,
) -> Result<Vec<Assignment>> {
    if decomp.components.is_empty() {
        return Err(Error::domain("cannot sample from an empty solution set"));
    }
    let mut rng = master_rng(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let c = &decomp.components[rng.gen_range(0..decomp.components.len())];
        let idx = c[rng.gen_range(0..c.len())];
        out.push(solutions.assignment(idx));
    }
    Ok(out)
}
