//! Simplicial meshes in dimension one to four.
//!
//! [`SpatialMesh`] is the `d`-dimensional input mesh, [`SpaceTimeMesh`] the
//! `(d+1)`-dimensional mesh obtained from it by extrusion. Both store their
//! node coordinates in a flat [`Points`] buffer and their elements as
//! [`Simplex`] node lists.

mod admissible;
mod consistency;
mod facets;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::linalg;
use crate::scalar::Real;

pub use admissible::{check_admissible, AdmissibilityReport, Violation};
pub use consistency::{check_consistent, make_consistent, ConsistencyReport};
pub use facets::{
    extract_facets, facet_normal, BoundaryClass, BoundaryFacet, Facet, FacetSet, InteriorFacet,
};

/// Global node number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Ordered node list of one simplex. The ordering matters: it drives the
/// hyperprism decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Simplex {
    pub nodes: Vec<NodeId>,
}

impl Simplex {
    pub fn new(nodes: impl IntoIterator<Item = usize>) -> Self {
        Self {
            nodes: nodes.into_iter().map(NodeId).collect(),
        }
    }

    /// Intrinsic dimension (number of nodes minus one).
    pub fn dim(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_sorted(&self) -> bool {
        self.nodes.windows(2).all(|w| w[0] < w[1])
    }

    pub fn sorted_key(&self) -> Vec<NodeId> {
        let mut k = self.nodes.clone();
        k.sort_unstable();
        k
    }
}

/// Node coordinates of a mesh, stored contiguously.
#[derive(Clone, Debug, PartialEq)]
pub struct Points<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Real> Points<T> {
    pub fn new(dim: usize, data: Vec<T>) -> Self {
        assert!(dim > 0 && data.len() % dim == 0, "coordinate buffer length");
        Self { dim, data }
    }

    pub fn from_rows(dim: usize, rows: &[Vec<T>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            assert_eq!(r.len(), dim);
            data.extend_from_slice(r);
        }
        Self { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, id: NodeId) -> &[T] {
        &self.data[id.0 * self.dim..(id.0 + 1) * self.dim]
    }

    #[inline]
    pub fn get_mut(&mut self, id: NodeId) -> &mut [T] {
        &mut self.data[id.0 * self.dim..(id.0 + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, T> {
        self.data.chunks_exact(self.dim)
    }

    pub fn gather<'a>(&'a self, nodes: &[NodeId]) -> Vec<&'a [T]> {
        nodes.iter().map(|&n| self.get(n)).collect()
    }

    /// Length of the bounding box diagonal.
    pub fn diameter(&self) -> T {
        let mut lo = vec![T::infinity(); self.dim];
        let mut hi = vec![T::neg_infinity(); self.dim];
        for p in self.iter() {
            for i in 0..self.dim {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        if self.is_empty() {
            return T::zero();
        }
        linalg::distance(&lo, &hi)
    }
}

/// Measure of a simplex whose nodes live in `coords`.
pub fn simplex_measure<T: Real>(simplex: &Simplex, coords: &Points<T>) -> T {
    linalg::simplex_measure(&coords.gather(&simplex.nodes))
}

/// Longest edge of the simplex; used as the element mesh size `h_k`.
pub fn max_edge_length<T: Real>(simplex: &Simplex, coords: &Points<T>) -> T {
    let p = coords.gather(&simplex.nodes);
    let mut h = T::zero();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            h = h.max(linalg::distance(p[i], p[j]));
        }
    }
    h
}

pub fn centroid<T: Real>(simplex: &Simplex, coords: &Points<T>) -> Vec<T> {
    let mut c = vec![T::zero(); coords.dim()];
    for &n in &simplex.nodes {
        for (ci, &x) in c.iter_mut().zip(coords.get(n)) {
            *ci += x;
        }
    }
    let k = T::from_usize_lossy(simplex.nodes.len());
    c.iter_mut().for_each(|v| *v /= k);
    c
}

/// Tag attached to a boundary facet of the spatial mesh.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundaryTag {
    Dirichlet,
    DirichletMoving,
    RobinIn,
    RobinOut,
}

impl BoundaryTag {
    pub const ALL: [BoundaryTag; 4] = [
        BoundaryTag::Dirichlet,
        BoundaryTag::DirichletMoving,
        BoundaryTag::RobinIn,
        BoundaryTag::RobinOut,
    ];

    pub fn is_dirichlet(self) -> bool {
        matches!(self, BoundaryTag::Dirichlet | BoundaryTag::DirichletMoving)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryTag::Dirichlet => "Dirichlet",
            BoundaryTag::DirichletMoving => "DirichletMoving",
            BoundaryTag::RobinIn => "RobinIn",
            BoundaryTag::RobinOut => "RobinOut",
        }
    }
}

impl fmt::Display for BoundaryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundaryTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BoundaryTag::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown boundary tag `{s}`"))
    }
}

/// Errors raised by mesh construction and validation.
#[derive(Debug, thiserror::Error)]
pub enum MeshError {
    #[error("element {element} references node {node} but the mesh has {num_nodes} nodes")]
    NodeOutOfRange {
        element: usize,
        node: usize,
        num_nodes: usize,
    },
    #[error("element {element} has {found} nodes, expected {expected}")]
    WrongArity {
        element: usize,
        found: usize,
        expected: usize,
    },
    #[error("element {element} repeats node {node}")]
    RepeatedNode { element: usize, node: usize },
    #[error("elements {0} and {1} have identical node sets")]
    DuplicateElement(usize, usize),
    #[error("facet {facet:?} is shared by {count} elements")]
    NonManifoldFacet { facet: Vec<usize>, count: usize },
    #[error("degenerate facet {facet:?} (zero measure)")]
    DegenerateFacet { facet: Vec<usize> },
    #[error("mesh is not consistently numbered: {} violating element pairs, first {:?}", .0.len(), .0.first())]
    Inconsistent(Vec<(usize, usize)>),
    #[error("element {element} is degenerate or inverted (measure {measure:e})")]
    Degenerate { element: usize, measure: f64 },
    #[error("hyperprism with non-positive height {0}")]
    NonPositiveHeight(f64),
    #[error("time levels must be strictly increasing, got {0:?}")]
    BadTimeLevels(Vec<f64>),
    #[error("boundary facet {facet:?} cannot be classified: {reason}")]
    Unclassifiable { facet: Vec<usize>, reason: String },
    #[error("in slab {slab}")]
    Slab {
        slab: usize,
        #[source]
        source: Box<MeshError>,
    },
    #[error("{0}")]
    Invalid(String),
}

/// Common read access to a simplicial mesh.
pub trait SimplexMesh<T: Real> {
    fn points(&self) -> &Points<T>;
    fn elements(&self) -> &[Simplex];

    /// Dimension of the elements (equals the ambient dimension).
    fn element_dim(&self) -> usize {
        self.points().dim()
    }

    fn num_nodes(&self) -> usize {
        self.points().len()
    }

    fn num_elements(&self) -> usize {
        self.elements().len()
    }

    fn total_measure(&self) -> T {
        self.elements()
            .iter()
            .map(|e| simplex_measure(e, self.points()))
            .sum()
    }
}

/// Checks index ranges and arity of all elements.
pub fn validate_topology(
    num_nodes: usize,
    dim: usize,
    elements: &[Simplex],
) -> Result<(), MeshError> {
    for (k, e) in elements.iter().enumerate() {
        if e.nodes.len() != dim + 1 {
            return Err(MeshError::WrongArity {
                element: k,
                found: e.nodes.len(),
                expected: dim + 1,
            });
        }
        for (i, &n) in e.nodes.iter().enumerate() {
            if n.0 >= num_nodes {
                return Err(MeshError::NodeOutOfRange {
                    element: k,
                    node: n.0,
                    num_nodes,
                });
            }
            if e.nodes[..i].contains(&n) {
                return Err(MeshError::RepeatedNode {
                    element: k,
                    node: n.0,
                });
            }
        }
    }
    Ok(())
}

/// A `d`-dimensional simplicial mesh with tagged boundary facets.
#[derive(Clone, Debug, PartialEq)]
pub struct SpatialMesh<T> {
    pub points: Points<T>,
    pub elements: Vec<Simplex>,
    /// Boundary facets keyed by their sorted node tuple.
    pub boundary_tags: BTreeMap<Vec<NodeId>, BoundaryTag>,
}

impl<T: Real> SpatialMesh<T> {
    pub fn new(
        points: Points<T>,
        elements: Vec<Simplex>,
        boundary_tags: BTreeMap<Vec<NodeId>, BoundaryTag>,
    ) -> Result<Self, MeshError> {
        let dim = points.dim();
        if !(1..=3).contains(&dim) {
            return Err(MeshError::Invalid(format!(
                "spatial dimension must be 1, 2 or 3, got {dim}"
            )));
        }
        validate_topology(points.len(), dim, &elements)?;
        for key in boundary_tags.keys() {
            if key.len() != dim || key.windows(2).any(|w| w[0] >= w[1]) {
                return Err(MeshError::Invalid(format!(
                    "boundary facet {key:?} must be a sorted tuple of {dim} nodes"
                )));
            }
        }
        Ok(Self {
            points,
            elements,
            boundary_tags,
        })
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    /// Sorted node tuples of all boundary facets (those owned by exactly one
    /// element).
    pub fn boundary_facet_keys(&self) -> Vec<Vec<NodeId>> {
        facets::boundary_keys(&self.elements)
    }

    /// Tags every untagged boundary facet with `tag`.
    pub fn tag_untagged_boundary(&mut self, tag: BoundaryTag) {
        for key in self.boundary_facet_keys() {
            self.boundary_tags.entry(key).or_insert(tag);
        }
    }

    /// Retags boundary facets whose centroid satisfies `pred`.
    pub fn retag_where(&mut self, tag: BoundaryTag, pred: impl Fn(&[T]) -> bool) {
        let dim = self.dim();
        for (key, t) in self.boundary_tags.iter_mut() {
            let mut c = vec![T::zero(); dim];
            for &n in key {
                for (ci, &x) in c.iter_mut().zip(self.points.get(n)) {
                    *ci += x;
                }
            }
            let k = T::from_usize_lossy(key.len());
            c.iter_mut().for_each(|v| *v /= k);
            if pred(&c) {
                *t = tag;
            }
        }
    }

    /// Nodes lying on a boundary facet carrying one of `tags`.
    pub fn nodes_with_tags(&self, tags: &[BoundaryTag]) -> Vec<bool> {
        let mut on = vec![false; self.points.len()];
        for (key, t) in &self.boundary_tags {
            if tags.contains(t) {
                for n in key {
                    on[n.0] = true;
                }
            }
        }
        on
    }

    /// Nodes lying on any boundary facet.
    pub fn boundary_nodes(&self) -> Vec<bool> {
        let mut on = vec![false; self.points.len()];
        for key in self.boundary_facet_keys() {
            for n in key {
                on[n.0] = true;
            }
        }
        on
    }
}

impl<T: Real> SimplexMesh<T> for SpatialMesh<T> {
    fn points(&self) -> &Points<T> {
        &self.points
    }
    fn elements(&self) -> &[Simplex] {
        &self.elements
    }
}

/// A `(d+1)`-dimensional simplex mesh of the space-time cylinder.
///
/// Nodes are numbered level by level: node `level * spatial_nodes + i` is the
/// copy of spatial node `i` at time `levels[level]`.
#[derive(Clone, Debug)]
pub struct SpaceTimeMesh<T> {
    pub points: Points<T>,
    pub elements: Vec<Simplex>,
    pub interior_facets: Vec<InteriorFacet<T>>,
    pub boundary_facets: Vec<BoundaryFacet<T>>,
    /// Element mesh size, longest edge.
    pub h: Vec<T>,
    pub spatial_nodes: usize,
    pub levels: Vec<T>,
    /// Spatial boundary tags the mantle classification was derived from.
    pub spatial_tags: BTreeMap<Vec<NodeId>, BoundaryTag>,
}

impl<T: Real> SpaceTimeMesh<T> {
    /// Builds a space-time mesh from raw parts: computes element sizes,
    /// extracts facets and classifies the boundary.
    pub fn from_parts(
        points: Points<T>,
        elements: Vec<Simplex>,
        spatial_nodes: usize,
        levels: Vec<T>,
        spatial_tags: BTreeMap<Vec<NodeId>, BoundaryTag>,
    ) -> Result<Self, MeshError> {
        Self::from_parts_with(points, elements, spatial_nodes, levels, spatial_tags, true)
    }

    /// Like [`from_parts`](Self::from_parts); with `strict` false, mantle
    /// facets without a spatial tag stay [`BoundaryClass::Unclassified`].
    pub fn from_parts_with(
        points: Points<T>,
        elements: Vec<Simplex>,
        spatial_nodes: usize,
        levels: Vec<T>,
        spatial_tags: BTreeMap<Vec<NodeId>, BoundaryTag>,
        strict: bool,
    ) -> Result<Self, MeshError> {
        let dim = points.dim();
        if !(2..=4).contains(&dim) {
            return Err(MeshError::Invalid(format!(
                "space-time dimension must be 2, 3 or 4, got {dim}"
            )));
        }
        if levels.len() < 2 || levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(MeshError::BadTimeLevels(
                levels.iter().map(|t| t.as_f64()).collect(),
            ));
        }
        if spatial_nodes * levels.len() != points.len() {
            return Err(MeshError::Invalid(format!(
                "{} nodes do not match {} spatial nodes on {} levels",
                points.len(),
                spatial_nodes,
                levels.len()
            )));
        }
        validate_topology(points.len(), dim, &elements)?;
        let h = elements
            .iter()
            .map(|e| max_edge_length(e, &points))
            .collect();
        let facets = extract_facets(&points, &elements)?;
        let mesh = Self {
            points,
            elements,
            interior_facets: facets.interior,
            boundary_facets: facets.boundary,
            h,
            spatial_nodes,
            levels,
            spatial_tags,
        };
        crate::extrusion::classify_boundary(mesh, strict)
    }

    pub fn space_dim(&self) -> usize {
        self.points.dim() - 1
    }

    pub fn start_time(&self) -> T {
        self.levels[0]
    }

    pub fn end_time(&self) -> T {
        *self.levels.last().expect("at least two levels")
    }

    pub fn num_slabs(&self) -> usize {
        self.levels.len() - 1
    }

    /// Time level index of a node.
    #[inline]
    pub fn node_level(&self, n: NodeId) -> usize {
        n.0 / self.spatial_nodes
    }

    /// Spatial node a space-time node was copied from.
    #[inline]
    pub fn spatial_node(&self, n: NodeId) -> NodeId {
        NodeId(n.0 % self.spatial_nodes)
    }

    /// Slab an element belongs to: the lowest level among its nodes.
    pub fn element_slab(&self, k: usize) -> usize {
        self.elements[k]
            .nodes
            .iter()
            .map(|&n| self.node_level(n))
            .min()
            .unwrap_or(0)
    }

    pub fn boundary_of_class(&self, class: BoundaryClass) -> impl Iterator<Item = &BoundaryFacet<T>> {
        self.boundary_facets.iter().filter(move |f| f.class == class)
    }
}

impl<T: Real> SimplexMesh<T> for SpaceTimeMesh<T> {
    fn points(&self) -> &Points<T> {
        &self.points
    }
    fn elements(&self) -> &[Simplex] {
        &self.elements
    }
}
