//! Native ASCII mesh format.
//!
//! ```text
//! stmesh 1 spatial          # or: stmesh 1 spacetime
//! dim 2
//! spatial_nodes 4           # spacetime only
//! levels 3 0.0 0.5 1.0      # spacetime only: count, then times
//! nodes 4
//! 0 0.0 0.0                 # index, coordinates
//! ...
//! elements 2
//! 0 0 1 2                   # index, node list in local order
//! ...
//! boundary 4                # optional; missing means all Dirichlet
//! 0 1 Dirichlet             # facet nodes, tag
//! ```
//!
//! Space-time files store the boundary tags of the spatial mesh, in spatial
//! node numbers. `#` starts a comment.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use super::{format_sci, parse_num, IoError, Lines};
use crate::mesh::{
    check_admissible, check_consistent, BoundaryTag, NodeId, Points, Simplex, SpaceTimeMesh,
    SpatialMesh,
};
use crate::scalar::Real;

const MAGIC: &str = "stmesh";

fn write_nodes<T: Real>(out: &mut String, points: &Points<T>) {
    writeln!(out, "nodes {}", points.len()).unwrap();
    for (i, p) in points.iter().enumerate() {
        write!(out, "{i}").unwrap();
        for &x in p {
            write!(out, " {}", format_sci(x.as_f64())).unwrap();
        }
        out.push('\n');
    }
}

fn write_elements(out: &mut String, elements: &[Simplex]) {
    writeln!(out, "elements {}", elements.len()).unwrap();
    for (k, e) in elements.iter().enumerate() {
        write!(out, "{k}").unwrap();
        for n in &e.nodes {
            write!(out, " {}", n.0).unwrap();
        }
        out.push('\n');
    }
}

fn write_boundary(out: &mut String, tags: &BTreeMap<Vec<NodeId>, BoundaryTag>) {
    writeln!(out, "boundary {}", tags.len()).unwrap();
    for (key, tag) in tags {
        for n in key {
            write!(out, "{} ", n.0).unwrap();
        }
        writeln!(out, "{tag}").unwrap();
    }
}

pub fn format_mesh<T: Real>(mesh: &SpatialMesh<T>) -> String {
    let mut out = String::new();
    writeln!(out, "{MAGIC} 1 spatial").unwrap();
    writeln!(out, "dim {}", mesh.dim()).unwrap();
    write_nodes(&mut out, &mesh.points);
    write_elements(&mut out, &mesh.elements);
    write_boundary(&mut out, &mesh.boundary_tags);
    out
}

pub fn format_spacetime_mesh<T: Real>(mesh: &SpaceTimeMesh<T>) -> String {
    let mut out = String::new();
    writeln!(out, "{MAGIC} 1 spacetime").unwrap();
    writeln!(out, "dim {}", mesh.points.dim()).unwrap();
    writeln!(out, "spatial_nodes {}", mesh.spatial_nodes).unwrap();
    write!(out, "levels {}", mesh.levels.len()).unwrap();
    for t in &mesh.levels {
        write!(out, " {}", format_sci(t.as_f64())).unwrap();
    }
    out.push('\n');
    write_nodes(&mut out, &mesh.points);
    write_elements(&mut out, &mesh.elements);
    write_boundary(&mut out, &mesh.spatial_tags);
    out
}

pub fn write_mesh<T: Real>(path: &Path, mesh: &SpatialMesh<T>) -> Result<(), IoError> {
    Ok(std::fs::write(path, format_mesh(mesh))?)
}

pub fn write_spacetime_mesh<T: Real>(path: &Path, mesh: &SpaceTimeMesh<T>) -> Result<(), IoError> {
    Ok(std::fs::write(path, format_spacetime_mesh(mesh))?)
}

fn expect_key(line: usize, toks: &[&str], key: &str, n: usize) -> Result<(), IoError> {
    if toks.first() != Some(&key) || toks.len() < n + 1 {
        return Err(IoError::parse(line, format!("expected `{key}` with {n} value(s)")));
    }
    Ok(())
}

struct Parsed<T> {
    spacetime: bool,
    spatial_nodes: usize,
    levels: Vec<T>,
    points: Points<T>,
    elements: Vec<Simplex>,
    tags: Option<BTreeMap<Vec<NodeId>, BoundaryTag>>,
}

fn parse<T: Real>(text: &str) -> Result<Parsed<T>, IoError> {
    let mut lines = Lines::new(text);
    let (l, toks) = lines.next_line()?;
    if toks.len() != 3 || toks[0] != MAGIC || toks[1] != "1" {
        return Err(IoError::parse(l, "expected header `stmesh 1 spatial|spacetime`"));
    }
    let spacetime = match toks[2] {
        "spatial" => false,
        "spacetime" => true,
        other => return Err(IoError::parse(l, format!("unknown mesh kind `{other}`"))),
    };
    let (l, toks) = lines.next_line()?;
    expect_key(l, &toks, "dim", 1)?;
    let dim: usize = parse_num(l, toks[1])?;
    let (lo, hi) = if spacetime { (2, 4) } else { (1, 3) };
    if !(lo..=hi).contains(&dim) {
        return Err(IoError::parse(l, format!("dimension {dim} outside {lo}..={hi}")));
    }

    let mut spatial_nodes = 0;
    let mut levels = Vec::new();
    if spacetime {
        let (l, toks) = lines.next_line()?;
        expect_key(l, &toks, "spatial_nodes", 1)?;
        spatial_nodes = parse_num(l, toks[1])?;
        let (l, toks) = lines.next_line()?;
        expect_key(l, &toks, "levels", 1)?;
        let k: usize = parse_num(l, toks[1])?;
        if toks.len() != k + 2 {
            return Err(IoError::parse(l, format!("expected {k} time levels")));
        }
        for t in &toks[2..] {
            levels.push(T::c(parse_num::<f64>(l, t)?));
        }
    }

    let (l, toks) = lines.next_line()?;
    expect_key(l, &toks, "nodes", 1)?;
    let nn: usize = parse_num(l, toks[1])?;
    let mut data = Vec::with_capacity(nn * dim);
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::with_capacity(nn);
    for i in 0..nn {
        let (l, toks) = lines.next_line()?;
        if toks.len() != dim + 1 {
            return Err(IoError::parse(l, format!("node needs an index and {dim} coordinates")));
        }
        if parse_num::<usize>(l, toks[0])? != i {
            return Err(IoError::parse(l, format!("expected node index {i}")));
        }
        let mut bits = Vec::with_capacity(dim);
        for t in &toks[1..] {
            let x: f64 = parse_num(l, t)?;
            bits.push(x.to_bits());
            data.push(T::c(x));
        }
        if let Some(j) = seen.insert(bits, i) {
            return Err(IoError::parse(l, format!("node {i} duplicates node {j}")));
        }
    }

    let (l, toks) = lines.next_line()?;
    expect_key(l, &toks, "elements", 1)?;
    let ne: usize = parse_num(l, toks[1])?;
    let mut elements = Vec::with_capacity(ne);
    for k in 0..ne {
        let (l, toks) = lines.next_line()?;
        if toks.len() != dim + 2 {
            return Err(IoError::parse(l, format!("element needs an index and {} nodes", dim + 1)));
        }
        if parse_num::<usize>(l, toks[0])? != k {
            return Err(IoError::parse(l, format!("expected element index {k}")));
        }
        let mut nodes = Vec::with_capacity(dim + 1);
        for t in &toks[1..] {
            let n: usize = parse_num(l, t)?;
            if n >= nn {
                return Err(IoError::parse(l, format!("node {n} out of range (mesh has {nn})")));
            }
            nodes.push(n);
        }
        elements.push(Simplex::new(nodes));
    }

    let tags = match lines.next_opt() {
        None => None,
        Some((l, toks)) => {
            expect_key(l, &toks, "boundary", 1)?;
            let nb: usize = parse_num(l, toks[1])?;
            let fdim = if spacetime { dim - 1 } else { dim };
            let node_limit = if spacetime { spatial_nodes } else { nn };
            let mut tags = BTreeMap::new();
            for _ in 0..nb {
                let (l, toks) = lines.next_line()?;
                if toks.len() != fdim + 1 {
                    return Err(IoError::parse(l, format!("boundary facet needs {fdim} nodes and a tag")));
                }
                let mut key = Vec::with_capacity(fdim);
                for t in &toks[..fdim] {
                    let n: usize = parse_num(l, t)?;
                    if n >= node_limit {
                        return Err(IoError::parse(l, format!("node {n} out of range")));
                    }
                    key.push(NodeId(n));
                }
                key.sort_unstable();
                let tag: BoundaryTag = toks[fdim].parse().map_err(|e: String| IoError::parse(l, e))?;
                tags.insert(key, tag);
            }
            Some(tags)
        }
    };
    if let Some((l, _)) = lines.next_opt() {
        return Err(IoError::parse(l, "trailing content"));
    }

    Ok(Parsed {
        spacetime,
        spatial_nodes,
        levels,
        points: Points::new(dim, data),
        elements,
        tags,
    })
}

/// Parses a spatial mesh. Untagged boundary facets become Dirichlet when the
/// file has no boundary block.
pub fn parse_mesh<T: Real>(text: &str) -> Result<SpatialMesh<T>, IoError> {
    let p = parse::<T>(text)?;
    if p.spacetime {
        return Err(IoError::parse(1, "expected a spatial mesh"));
    }
    let has_tags = p.tags.is_some();
    let mut mesh = SpatialMesh::new(p.points, p.elements, p.tags.unwrap_or_default())?;
    if !has_tags {
        mesh.tag_untagged_boundary(BoundaryTag::Dirichlet);
    }
    Ok(mesh)
}

pub fn parse_spacetime_mesh<T: Real>(text: &str) -> Result<SpaceTimeMesh<T>, IoError> {
    let p = parse::<T>(text)?;
    if !p.spacetime {
        return Err(IoError::parse(1, "expected a space-time mesh"));
    }
    Ok(SpaceTimeMesh::from_parts(
        p.points,
        p.elements,
        p.spatial_nodes,
        p.levels,
        p.tags.unwrap_or_default(),
    )?)
}

/// Reads a spatial mesh; with `check` the numbering must be consistent and
/// the mesh admissible.
pub fn read_mesh<T: Real>(path: &Path, check: bool) -> Result<SpatialMesh<T>, IoError> {
    let mesh = parse_mesh(&super::read_to_string(path)?)?;
    if check {
        check_mesh(&mesh)?;
    }
    Ok(mesh)
}

pub fn check_mesh<T: Real>(mesh: &SpatialMesh<T>) -> Result<(), IoError> {
    let c = check_consistent(&mesh.elements)?;
    if !c.is_consistent() {
        return Err(IoError::Inconsistent(c.violations.len()));
    }
    let a = check_admissible(mesh);
    if !a.is_admissible() {
        return Err(IoError::NotAdmissible(a.violations.len()));
    }
    Ok(())
}

pub fn read_spacetime_mesh<T: Real>(path: &Path) -> Result<SpaceTimeMesh<T>, IoError> {
    parse_spacetime_mesh(&super::read_to_string(path)?)
}
