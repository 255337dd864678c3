use std::collections::HashMap;
use std::ops::Deref;

use rayon::prelude::*;

use super::{BoundaryTag, MeshError, NodeId, Points, Simplex};
use crate::linalg;
use crate::scalar::{factorial, Real};

/// Geometry of a codimension-one face.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet<T> {
    /// Sorted node tuple.
    pub nodes: Vec<NodeId>,
    /// Element the normal points away from.
    pub owner: usize,
    /// Unit outward normal of `owner`; the last component is the time part
    /// for space-time meshes.
    pub normal: Vec<T>,
    pub measure: T,
}

impl<T: Real> Facet<T> {
    /// Spatial part `n_x` of the normal of a space-time facet.
    pub fn normal_space(&self) -> &[T] {
        &self.normal[..self.normal.len() - 1]
    }

    /// Time part `n_t` of the normal of a space-time facet.
    pub fn normal_time(&self) -> T {
        *self.normal.last().expect("non-empty normal")
    }
}

/// Facet shared by elements `owner < neighbor`.
#[derive(Clone, Debug, PartialEq)]
pub struct InteriorFacet<T> {
    pub facet: Facet<T>,
    pub neighbor: usize,
}

impl<T> Deref for InteriorFacet<T> {
    type Target = Facet<T>;
    fn deref(&self) -> &Facet<T> {
        &self.facet
    }
}

/// Part of the space-time boundary a facet belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryClass {
    /// Not yet classified (plain facet extraction).
    Unclassified,
    /// Initial time level.
    Sigma0,
    /// Final time level.
    SigmaT,
    /// Dirichlet part of the mantle.
    SigmaD,
    /// Robin part of the mantle.
    SigmaR,
}

impl BoundaryClass {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryClass::Unclassified => "Unclassified",
            BoundaryClass::Sigma0 => "Sigma0",
            BoundaryClass::SigmaT => "SigmaT",
            BoundaryClass::SigmaD => "SigmaD",
            BoundaryClass::SigmaR => "SigmaR",
        }
    }
}

/// Facet owned by a single element.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryFacet<T> {
    pub facet: Facet<T>,
    pub class: BoundaryClass,
    /// Spatial boundary tag inherited by mantle facets.
    pub tag: Option<BoundaryTag>,
}

impl<T> Deref for BoundaryFacet<T> {
    type Target = Facet<T>;
    fn deref(&self) -> &Facet<T> {
        &self.facet
    }
}

#[derive(Clone, Debug, Default)]
pub struct FacetSet<T> {
    pub interior: Vec<InteriorFacet<T>>,
    pub boundary: Vec<BoundaryFacet<T>>,
}

/// Local facet `a` of an element: all nodes except the `a`-th, sorted.
fn local_facet_key(e: &Simplex, omit: usize) -> Vec<NodeId> {
    let mut key: Vec<NodeId> = e
        .nodes
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != omit)
        .map(|(_, &n)| n)
        .collect();
    key.sort_unstable();
    key
}

type Owners = Vec<(usize, usize)>;

fn facet_owners(elements: &[Simplex]) -> HashMap<Vec<NodeId>, Owners> {
    let mut map: HashMap<Vec<NodeId>, Owners> = HashMap::with_capacity(elements.len() * 3);
    for (k, e) in elements.iter().enumerate() {
        for a in 0..e.nodes.len() {
            map.entry(local_facet_key(e, a)).or_default().push((k, a));
        }
    }
    map
}

/// Sorted list of facets owned by exactly one element.
pub(crate) fn boundary_keys(elements: &[Simplex]) -> Vec<Vec<NodeId>> {
    let mut keys: Vec<Vec<NodeId>> = facet_owners(elements)
        .into_iter()
        .filter(|(_, o)| o.len() == 1)
        .map(|(k, _)| k)
        .collect();
    keys.sort_unstable();
    keys
}

/// Unit normal of the facet `nodes` of `owner`, pointing away from the
/// owner's remaining vertex, together with the facet measure.
fn oriented_normal<T: Real>(
    nodes: &[NodeId],
    owner: &Simplex,
    coords: &Points<T>,
) -> Result<(Vec<T>, T), MeshError> {
    let dim = coords.dim();
    let base = coords.get(nodes[0]);
    let edges: Vec<Vec<T>> = nodes[1..]
        .iter()
        .map(|&n| linalg::sub(coords.get(n), base))
        .collect();
    let raw = linalg::orthogonal_complement(&edges, dim);
    let len = linalg::norm(&raw);
    if !(len > T::zero()) || !len.is_finite() {
        return Err(MeshError::DegenerateFacet {
            facet: nodes.iter().map(|n| n.0).collect(),
        });
    }
    let apex = owner
        .nodes
        .iter()
        .find(|n| !nodes.contains(n))
        .expect("facet is a face of its owner");
    let inward = linalg::sub(coords.get(*apex), base);
    let sign = if linalg::dot(&raw, &inward) > T::zero() {
        -T::one()
    } else {
        T::one()
    };
    let normal = raw.iter().map(|&v| sign * v / len).collect();
    Ok((normal, len / factorial(dim - 1)))
}

/// Unit outward normal of `owner` on its face `facet`.
pub fn facet_normal<T: Real>(
    facet: &[NodeId],
    owner: &Simplex,
    coords: &Points<T>,
) -> Result<Vec<T>, MeshError> {
    if facet.len() + 1 != owner.nodes.len() || facet.iter().any(|n| !owner.nodes.contains(n)) {
        return Err(MeshError::Invalid(format!(
            "{facet:?} is not a facet of {:?}",
            owner.nodes
        )));
    }
    oriented_normal(facet, owner, coords).map(|(n, _)| n)
}

/// Collects interior and boundary facets of a full-dimensional simplex mesh.
///
/// Output order is deterministic: facets appear in order of their first
/// owner and, within an element, by local facet index.
pub fn extract_facets<T: Real>(
    coords: &Points<T>,
    elements: &[Simplex],
) -> Result<FacetSet<T>, MeshError> {
    let owners = facet_owners(elements);
    for (key, o) in &owners {
        if o.len() > 2 {
            return Err(MeshError::NonManifoldFacet {
                facet: key.iter().map(|n| n.0).collect(),
                count: o.len(),
            });
        }
    }

    // (key, owner, neighbor)
    let mut topo: Vec<(Vec<NodeId>, usize, Option<usize>)> = Vec::new();
    for (k, e) in elements.iter().enumerate() {
        for a in 0..e.nodes.len() {
            let key = local_facet_key(e, a);
            let o = &owners[&key];
            if o[0] != (k, a) {
                continue;
            }
            let neighbor = o.get(1).map(|&(l, _)| l);
            topo.push((key, k, neighbor));
        }
    }

    let geometry: Vec<Result<(Vec<T>, T), MeshError>> = topo
        .par_iter()
        .map(|(key, k, _)| oriented_normal(key, &elements[*k], coords))
        .collect();

    let mut set = FacetSet {
        interior: Vec::new(),
        boundary: Vec::new(),
    };
    for ((nodes, owner, neighbor), g) in topo.into_iter().zip(geometry) {
        let (normal, measure) = g?;
        let facet = Facet {
            nodes,
            owner,
            normal,
            measure,
        };
        match neighbor {
            Some(l) => set.interior.push(InteriorFacet { facet, neighbor: l }),
            None => set.boundary.push(BoundaryFacet {
                facet,
                class: BoundaryClass::Unclassified,
                tag: None,
            }),
        }
    }
    Ok(set)
}
