use std::collections::HashSet;

use super::{MeshError, NodeId, Simplex, SpatialMesh};
use crate::scalar::Real;

/// Sorts the local nodes of every element by global node number.
///
/// This may flip the orientation of individual simplices; no downstream
/// computation relies on orientation.
pub fn make_consistent<T: Real>(mut mesh: SpatialMesh<T>) -> SpatialMesh<T> {
    for e in &mut mesh.elements {
        e.nodes.sort_unstable();
    }
    mesh
}

/// Outcome of [`check_consistent`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConsistencyReport {
    /// Element pairs `(i, j)`, `i < j`, whose shared nodes appear in different
    /// orders.
    pub violations: Vec<(usize, usize)>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every pair of elements that share nodes, compares the order in which
/// the shared nodes appear in both local node lists.
///
/// Two elements with the same node set are not an admissible configuration
/// and are reported as [`MeshError::DuplicateElement`].
pub fn check_consistent(elements: &[Simplex]) -> Result<ConsistencyReport, MeshError> {
    let num_nodes = elements
        .iter()
        .flat_map(|e| e.nodes.iter())
        .map(|n| n.0 + 1)
        .max()
        .unwrap_or(0);
    let mut node_elements: Vec<Vec<usize>> = vec![Vec::new(); num_nodes];
    for (k, e) in elements.iter().enumerate() {
        for n in &e.nodes {
            node_elements[n.0].push(k);
        }
    }

    let mut report = ConsistencyReport::default();
    let mut seen = HashSet::new();
    let mut mine: Vec<NodeId> = Vec::new();
    let mut theirs: Vec<NodeId> = Vec::new();
    for (i, ei) in elements.iter().enumerate() {
        seen.clear();
        for n in &ei.nodes {
            for &j in &node_elements[n.0] {
                if j <= i || !seen.insert(j) {
                    continue;
                }
                let ej = &elements[j];
                mine.clear();
                mine.extend(ei.nodes.iter().filter(|n| ej.nodes.contains(n)));
                theirs.clear();
                theirs.extend(ej.nodes.iter().filter(|n| ei.nodes.contains(n)));
                if mine.len() == ei.nodes.len() && mine.len() == ej.nodes.len() {
                    return Err(MeshError::DuplicateElement(i, j));
                }
                if mine != theirs {
                    report.violations.push((i, j));
                }
            }
        }
    }
    Ok(report)
}
