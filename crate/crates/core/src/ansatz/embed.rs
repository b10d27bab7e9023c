use super::{Cnot, CouplingGraph, EntanglerLayer};

/// Finds an injective logical-to-physical qubit map under which every CNOT
/// of `layer` lands on a coupling-graph edge. Returns the lexicographically
/// first such map, or `None` when none exists.
pub fn embed_layer(layer: &EntanglerLayer, graph: &CouplingGraph) -> Option<Vec<usize>> {
    let edges: Vec<Cnot> = layer.edges().collect();
    embed_edges(layer.n_qubits(), &edges, graph)
}

/// [`embed_layer`] for an arbitrary set of CNOTs on `n_logical` qubits; use
/// it to embed several layers with one shared mapping.
pub fn embed_edges(n_logical: usize, edges: &[Cnot], graph: &CouplingGraph) -> Option<Vec<usize>> {
    if n_logical > graph.n_physical() {
        return None;
    }
    let mut neighbors = vec![Vec::new(); n_logical];
    for e in edges {
        let (a, b) = e.undirected();
        if !neighbors[a].contains(&b) {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
    }
    let mut mapping = vec![usize::MAX; n_logical];
    let mut used = vec![false; graph.n_physical()];
    search(0, &neighbors, graph, &mut mapping, &mut used).then_some(mapping)
}

fn search(
    logical: usize,
    neighbors: &[Vec<usize>],
    graph: &CouplingGraph,
    mapping: &mut [usize],
    used: &mut [bool],
) -> bool {
    if logical == mapping.len() {
        return true;
    }
    let need = neighbors[logical].len();
    for phys in 0..graph.n_physical() {
        if used[phys] || graph.degree(phys) < need {
            continue;
        }
        let consistent = neighbors[logical].iter().filter(|&&n| n < logical).all(|&n| graph.has_edge(mapping[n], phys));
        if !consistent {
            continue;
        }
        mapping[logical] = phys;
        used[phys] = true;
        if search(logical + 1, neighbors, graph, mapping, used) {
            return true;
        }
        used[phys] = false;
    }
    mapping[logical] = usize::MAX;
    false
}

/// Exhaustive reference: tries every injection in lexicographic order.
/// Exponential; meant for graphs of at most a handful of vertices.
pub fn brute_force_embedding(n_logical: usize, edges: &[Cnot], graph: &CouplingGraph) -> Option<Vec<usize>> {
    fn next(k: usize, n_phys: usize, current: &mut Vec<usize>, ok: &dyn Fn(&[usize]) -> bool) -> bool {
        if current.len() == k {
            return ok(current);
        }
        for v in 0..n_phys {
            if current.contains(&v) {
                continue;
            }
            current.push(v);
            if next(k, n_phys, current, ok) {
                return true;
            }
            current.pop();
        }
        false
    }
    if n_logical > graph.n_physical() {
        return None;
    }
    let ok = |m: &[usize]| edges.iter().all(|e| graph.has_edge(m[e.control], m[e.target]));
    let mut current = Vec::with_capacity(n_logical);
    next(n_logical, graph.n_physical(), &mut current, &ok).then_some(current)
}
