use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Duration of one simultaneously-applied set of CNOTs.
pub const SUB_COVERING_NS: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cnot {
    pub control: usize,
    pub target: usize,
}

impl Cnot {
    pub fn new(control: usize, target: usize) -> Self {
        Self { control, target }
    }

    /// Endpoints as an ordered pair `(min, max)`.
    pub fn undirected(&self) -> (usize, usize) {
        (self.control.min(self.target), self.control.max(self.target))
    }
}

/// One entangling layer: sub-coverings are applied in order, the CNOTs
/// inside a sub-covering act on disjoint qubits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EntanglerLayer {
    n_qubits: usize,
    sub_coverings: Vec<Vec<Cnot>>,
}

impl EntanglerLayer {
    pub fn new(n_qubits: usize, sub_coverings: Vec<Vec<Cnot>>) -> Result<Self> {
        for cover in &sub_coverings {
            let mut used = BTreeSet::new();
            for g in cover {
                crate::sim::check_cnot(g.control, g.target, n_qubits)?;
                if !used.insert(g.control) || !used.insert(g.target) {
                    return Err(Error::Config(format!(
                        "sub-covering {cover:?} reuses a qubit; CNOTs within one sub-covering must be disjoint"
                    )));
                }
            }
        }
        Ok(Self { n_qubits, sub_coverings: sub_coverings.into_iter().filter(|c| !c.is_empty()).collect() })
    }

    /// Packs `edges` (in order) into vertex-disjoint sub-coverings, first fit.
    pub fn from_edges(n_qubits: usize, edges: &[Cnot]) -> Result<Self> {
        let mut covers: Vec<Vec<Cnot>> = Vec::new();
        for &e in edges {
            let free = |c: &Vec<Cnot>| {
                c.iter().all(|g| ![g.control, g.target].iter().any(|q| *q == e.control || *q == e.target))
            };
            match covers.iter_mut().find(|c| free(c)) {
                Some(c) => c.push(e),
                None => covers.push(vec![e]),
            }
        }
        Self::new(n_qubits, covers)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn sub_coverings(&self) -> &[Vec<Cnot>] {
        &self.sub_coverings
    }

    pub fn edges(&self) -> impl Iterator<Item = Cnot> + '_ {
        self.sub_coverings.iter().flatten().copied()
    }

    /// Number of CNOTs, `d_C`.
    pub fn cnot_count(&self) -> usize {
        self.sub_coverings.iter().map(Vec::len).sum()
    }

    pub fn duration_ns(&self) -> f64 {
        self.sub_coverings.len() as f64 * SUB_COVERING_NS
    }
}

const MATCHING_A: [Cnot; 2] = [Cnot { control: 0, target: 1 }, Cnot { control: 2, target: 3 }];
const MATCHING_B: [Cnot; 2] = [Cnot { control: 0, target: 2 }, Cnot { control: 1, target: 3 }];

/// Alternating single-matching layer of the square plaquette `0-1-3-2`:
/// even layers use `{0-1, 2-3}`, odd layers `{0-2, 1-3}`.
pub fn entangler_dc2(layer_index: usize) -> EntanglerLayer {
    let m = if layer_index.is_multiple_of(2) { MATCHING_A } else { MATCHING_B };
    EntanglerLayer { n_qubits: 4, sub_coverings: vec![m.to_vec()] }
}

/// Every plaquette edge, applied as two sequential matchings.
pub fn entangler_dc4() -> EntanglerLayer {
    EntanglerLayer { n_qubits: 4, sub_coverings: vec![MATCHING_A.to_vec(), MATCHING_B.to_vec()] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{embed_layer, CouplingGraph};

    #[test]
    fn dc2_alternates() {
        let e0: Vec<_> = entangler_dc2(0).edges().collect();
        let e1: Vec<_> = entangler_dc2(1).edges().collect();
        assert_eq!(e0, [Cnot::new(0, 1), Cnot::new(2, 3)]);
        assert_eq!(e1, [Cnot::new(0, 2), Cnot::new(1, 3)]);
        assert_eq!(entangler_dc2(4), entangler_dc2(0));
        let plaquette = CouplingGraph::plaquette4();
        for i in 0..4 {
            let layer = entangler_dc2(i);
            assert_eq!(layer.cnot_count(), 2);
            assert!(layer.edges().all(|e| plaquette.has_edge(e.control, e.target)));
            assert!(embed_layer(&layer, &plaquette).is_some());
        }
    }

    #[test]
    fn dc4_two_coverings() {
        let l = entangler_dc4();
        assert_eq!(l.sub_coverings().len(), 2);
        assert!(l.sub_coverings().iter().all(|c| c.len() == 2));
        assert_eq!(l.cnot_count(), 4);
        let mut edges: Vec<_> = l.edges().map(|e| e.undirected()).collect();
        edges.sort();
        assert_eq!(edges, [(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(l.duration_ns(), 2.0 * entangler_dc2(0).duration_ns());
    }

    #[test]
    fn overlapping_sub_covering_rejected() {
        assert!(EntanglerLayer::new(4, vec![vec![Cnot::new(0, 1), Cnot::new(1, 2)]]).is_err());
        assert!(EntanglerLayer::new(4, vec![vec![Cnot::new(0, 4)]]).is_err());
    }

    #[test]
    fn first_fit_packing() {
        let l = EntanglerLayer::from_edges(4, &[Cnot::new(0, 1), Cnot::new(0, 2), Cnot::new(2, 3), Cnot::new(1, 3)])
            .unwrap();
        assert_eq!(
            l.sub_coverings(),
            &[vec![Cnot::new(0, 1), Cnot::new(2, 3)], vec![Cnot::new(0, 2), Cnot::new(1, 3)]]
        );
    }
}
