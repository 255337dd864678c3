//! Importer for Gmsh 2.2 ASCII meshes restricted to simplices.
//!
//! Supported element types are points (15), lines (1), triangles (2) and
//! tetrahedra (4). Elements of the highest dimension present form the mesh;
//! elements one dimension lower carry boundary tags through the name of
//! their physical group, which must be a boundary tag name such as
//! `RobinIn`. Untagged boundary facets become Dirichlet.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use super::{parse_num, IoError};
use crate::mesh::{make_consistent, BoundaryTag, NodeId, Points, Simplex, SpatialMesh};
use crate::scalar::Real;

fn element_dim(kind: usize) -> Option<usize> {
    match kind {
        15 => Some(0),
        1 => Some(1),
        2 => Some(2),
        4 => Some(3),
        _ => None,
    }
}

struct RawElement {
    line: usize,
    dim: usize,
    physical: Option<i64>,
    nodes: Vec<usize>,
}

pub fn parse_gmsh<T: Real>(text: &str) -> Result<SpatialMesh<T>, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| IoError::parse(0, format!("unexpected end of file in {what}")))
    };

    let mut names: HashMap<i64, (usize, String)> = HashMap::new();
    let mut nodes: Vec<(usize, [f64; 3])> = Vec::new();
    let mut raw: Vec<RawElement> = Vec::new();
    let mut seen_format = false;
    while let Ok((l, header)) = next("section header") {
        match header {
            "$MeshFormat" => {
                let (l, v) = next("$MeshFormat")?;
                let toks: Vec<&str> = v.split_whitespace().collect();
                if toks.len() < 2 || !toks[0].starts_with("2.") || toks[1] != "0" {
                    return Err(IoError::parse(l, "only ASCII Gmsh 2.x meshes are supported"));
                }
                seen_format = true;
            }
            "$PhysicalNames" => {
                let (l, v) = next("$PhysicalNames")?;
                let n: usize = parse_num(l, v)?;
                for _ in 0..n {
                    let (l, v) = next("$PhysicalNames")?;
                    let mut it = v.splitn(3, char::is_whitespace);
                    let dim: usize = parse_num(l, it.next().unwrap_or(""))?;
                    let tag: i64 = parse_num(l, it.next().unwrap_or(""))?;
                    let name = it.next().unwrap_or("").trim().trim_matches('"').to_string();
                    names.insert(tag, (dim, name));
                }
            }
            "$Nodes" => {
                let (l, v) = next("$Nodes")?;
                let n: usize = parse_num(l, v)?;
                for _ in 0..n {
                    let (l, v) = next("$Nodes")?;
                    let toks: Vec<&str> = v.split_whitespace().collect();
                    if toks.len() != 4 {
                        return Err(IoError::parse(l, "node needs an id and 3 coordinates"));
                    }
                    let id: usize = parse_num(l, toks[0])?;
                    let x = [parse_num(l, toks[1])?, parse_num(l, toks[2])?, parse_num(l, toks[3])?];
                    nodes.push((id, x));
                }
            }
            "$Elements" => {
                let (l, v) = next("$Elements")?;
                let n: usize = parse_num(l, v)?;
                for _ in 0..n {
                    let (l, v) = next("$Elements")?;
                    let toks: Vec<usize> = v
                        .split_whitespace()
                        .map(|t| parse_num(l, t))
                        .collect::<Result<_, _>>()?;
                    if toks.len() < 3 {
                        return Err(IoError::parse(l, "truncated element"));
                    }
                    let dim = element_dim(toks[1]).ok_or_else(|| {
                        IoError::parse(l, format!("unsupported element type {}", toks[1]))
                    })?;
                    let ntags = toks[2];
                    if toks.len() != 3 + ntags + dim + 1 {
                        return Err(IoError::parse(l, "element has the wrong number of entries"));
                    }
                    raw.push(RawElement {
                        line: l,
                        dim,
                        physical: (ntags > 0).then(|| toks[3] as i64),
                        nodes: toks[3 + ntags..].to_vec(),
                    });
                }
            }
            s if s.starts_with("$End") => return Err(IoError::parse(l, format!("unmatched {s}"))),
            s if s.starts_with('$') => {}
            _ => continue,
        }
        let end = format!("$End{}", &header[1..]);
        loop {
            let (l, v) = next(&end)?;
            if v == end {
                break;
            }
            if v.starts_with("$End") {
                return Err(IoError::parse(l, format!("expected {end}")));
            }
        }
    }
    if !seen_format {
        return Err(IoError::parse(1, "missing $MeshFormat"));
    }

    let dim = raw
        .iter()
        .map(|e| e.dim)
        .max()
        .filter(|&d| d >= 1)
        .ok_or_else(|| IoError::parse(1, "no line, triangle or tetrahedron elements"))?;
    // keep only nodes used by cells, numbered by first appearance in the node block
    let cells: Vec<&RawElement> = raw.iter().filter(|e| e.dim == dim).collect();
    let mut used: HashMap<usize, ()> = HashMap::new();
    for e in &cells {
        for &n in &e.nodes {
            used.insert(n, ());
        }
    }
    let mut index = HashMap::new();
    let mut data = Vec::new();
    for (id, x) in &nodes {
        if used.contains_key(id) && !index.contains_key(id) {
            index.insert(*id, index.len());
            data.extend(x[..dim].iter().map(|&v| T::c(v)));
        }
    }
    let map = |e: &RawElement| -> Result<Vec<usize>, IoError> {
        e.nodes
            .iter()
            .map(|n| {
                index
                    .get(n)
                    .copied()
                    .ok_or_else(|| IoError::parse(e.line, format!("unknown node {n}")))
            })
            .collect()
    };
    let elements = cells
        .iter()
        .map(|e| map(e).map(Simplex::new))
        .collect::<Result<Vec<_>, _>>()?;

    let mut tags = BTreeMap::new();
    for e in raw.iter().filter(|e| e.dim + 1 == dim) {
        let Some(phys) = e.physical else { continue };
        let Some((_, name)) = names.get(&phys) else {
            return Err(IoError::parse(e.line, format!("physical group {phys} has no name")));
        };
        let tag: BoundaryTag = name.parse().map_err(|m: String| IoError::parse(e.line, m))?;
        let mut key: Vec<NodeId> = map(e)?.into_iter().map(NodeId).collect();
        key.sort_unstable();
        tags.insert(key, tag);
    }
    let mut mesh = make_consistent(SpatialMesh::new(Points::new(dim, data), elements, tags)?);
    let boundary: std::collections::HashSet<Vec<NodeId>> =
        mesh.boundary_facet_keys().into_iter().collect();
    mesh.boundary_tags.retain(|k, _| boundary.contains(k));
    mesh.tag_untagged_boundary(BoundaryTag::Dirichlet);
    Ok(mesh)
}

pub fn read_gmsh<T: Real>(path: &Path) -> Result<SpatialMesh<T>, IoError> {
    parse_gmsh(&super::read_to_string(path)?)
}
