use std::collections::VecDeque;

use super::{Cnot, EntanglerLayer};
use crate::bas::TargetDistribution;
use crate::error::{Error, Result};
use crate::sim::BasisIndex;

/// Mutual information values closer than this are treated as equal.
const MI_TIE: f64 = 1e-12;

/// Pairwise mutual information (nats) between the bits of `dist`, from its
/// exact two-bit marginals. The diagonal is zero.
pub fn pairwise_mutual_information(dist: &TargetDistribution) -> Vec<Vec<f64>> {
    let n = dist.n_bits();
    let mut mi = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let mut joint = [[0.0f64; 2]; 2];
            for (x, &p) in dist.probs().iter().enumerate() {
                let x = BasisIndex(x);
                joint[x.bit(i, n) as usize][x.bit(j, n) as usize] += p;
            }
            let pi = [joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]];
            let pj = [joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]];
            let mut v = 0.0;
            for a in 0..2 {
                for b in 0..2 {
                    let pab = joint[a][b];
                    if pab > 0.0 {
                        v += pab * (pab / (pi[a] * pj[b])).ln();
                    }
                }
            }
            // round-off can leave tiny negatives for independent bits
            let v = v.max(0.0);
            mi[i][j] = v;
            mi[j][i] = v;
        }
    }
    mi
}

/// Entangling layer derived from a Chow-Liu tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowLiuLayer {
    pub layer: EntanglerLayer,
    /// Tree edges directed away from the root, in BFS order.
    pub tree: Vec<Cnot>,
    /// Set when every pairwise mutual information is zero, so the tree is
    /// purely the lexicographic tie-break.
    pub degenerate: bool,
}

/// Maximum-weight spanning tree of the pairwise mutual information, rooted
/// at `root`. Equal weights are resolved in favour of the lexicographically
/// smaller edge. Each depth level of the tree becomes one or more
/// vertex-disjoint sub-coverings.
pub fn chow_liu_layer(dist: &TargetDistribution, root: usize) -> Result<ChowLiuLayer> {
    let n = dist.n_bits();
    if n < 2 {
        return Err(Error::Dimension("Chow-Liu tree needs at least 2 bits".into()));
    }
    crate::sim::check_qubit(root, n)?;
    let mi = pairwise_mutual_information(dist);
    let degenerate = mi.iter().flatten().all(|&v| v <= MI_TIE);

    let mut candidates: Vec<(i64, usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (-(mi[i][j] / MI_TIE).round() as i64, i, j))
        .collect();
    candidates.sort_unstable();

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut adjacency = vec![Vec::new(); n];
    for (_, i, j) in candidates {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri] = rj;
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
    }

    // orient away from the root, grouping edges by depth
    let mut depth = vec![usize::MAX; n];
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut levels: Vec<Vec<Cnot>> = Vec::new();
    let mut tree = Vec::with_capacity(n - 1);
    while let Some(u) = queue.pop_front() {
        let mut children = adjacency[u].clone();
        children.sort_unstable();
        for v in children {
            if depth[v] == usize::MAX {
                depth[v] = depth[u] + 1;
                queue.push_back(v);
                let edge = Cnot::new(u, v);
                tree.push(edge);
                if levels.len() < depth[v] {
                    levels.push(Vec::new());
                }
                levels[depth[v] - 1].push(edge);
            }
        }
    }

    let mut covers = Vec::new();
    for level in &levels {
        let packed = EntanglerLayer::from_edges(n, level)?;
        covers.extend(packed.sub_coverings().iter().cloned());
    }
    Ok(ChowLiuLayer { layer: EntanglerLayer::new(n, covers)?, tree, degenerate })
}
