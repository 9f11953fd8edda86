//! Closed oriented triangle meshes with vertices on the hyperboloid.
//!
//! A [`TriMesh`] is an immutable snapshot: indexed triangle list plus derived
//! edge/star adjacency built once at construction. Flow steps produce new
//! snapshots that share the combinatorial data. Validation never aborts; it
//! returns the full list of violations so that callers can report precisely
//! what is wrong with an input file.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::hgeom::{hdist, minkowski_inner, HPoint, HYPERBOLOID_TOL};

/// Hyperboloid drift beyond which a file vertex is rejected outright.
pub const LOAD_DRIFT_MAX: f64 = 1e-6;
/// Drift below this is left untouched on load, preserving bit-exact
/// round-trips of files this crate wrote itself.
pub const LOAD_DRIFT_REPROJECT: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("face {face} references vertex {index} but the mesh has {count} vertices")]
    IndexOutOfRange {
        face: usize,
        index: usize,
        count: usize,
    },
    #[error("mesh has no faces")]
    Empty,
    #[error("vertex {vertex} has an open or non-circular star")]
    BadStar { vertex: usize },
}

/// Distinct failure modes of the HMESH reader.
#[derive(Debug, Error)]
pub enum MeshIoError {
    #[error("line {line}: malformed header, expected `HMESH 1`")]
    MalformedHeader { line: usize },
    #[error("line {line}: malformed count line, expected `<V> <F>`")]
    MalformedCounts { line: usize },
    #[error("line {line}: expected {expected} record")]
    UnexpectedRecord { line: usize, expected: &'static str },
    #[error("line {line}: cannot parse vertex coordinates")]
    VertexParse { line: usize },
    #[error("line {line}: cannot parse face indices")]
    FaceParse { line: usize },
    #[error("line {line}: vertex index {index} out of range (V = {count})")]
    IndexOutOfRange {
        line: usize,
        index: usize,
        count: usize,
    },
    #[error("line {line}: vertex violates the hyperboloid constraint, <p,p>_M = {inner}")]
    HyperboloidViolation { line: usize, inner: f64 },
    #[error("file ends before {expected} records are complete (line {line})")]
    TruncatedFile { line: usize, expected: &'static str },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One invariant violation found by [`TriMesh::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Face with a repeated vertex index.
    DegenerateFace { face: usize },
    /// Vertex not referenced by any face.
    IsolatedVertex { vertex: usize },
    /// Edge incident to exactly one face.
    BoundaryEdge { a: usize, b: usize },
    /// Edge incident to three or more faces.
    NonManifoldEdge { a: usize, b: usize, count: usize },
    /// Edge whose two incident faces traverse it in the same direction.
    InconsistentOrientation { a: usize, b: usize },
    /// Incident faces of a vertex do not close into a single ring.
    OpenStar { vertex: usize },
    /// Vertex coordinates off the hyperboloid.
    OffHyperboloid { vertex: usize, inner: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DegenerateFace { face } => write!(f, "degenerate face {face}"),
            Violation::IsolatedVertex { vertex } => write!(f, "isolated vertex {vertex}"),
            Violation::BoundaryEdge { a, b } => write!(f, "boundary edge ({a},{b})"),
            Violation::NonManifoldEdge { a, b, count } => {
                write!(f, "non-manifold edge ({a},{b}) with {count} faces")
            }
            Violation::InconsistentOrientation { a, b } => {
                write!(f, "inconsistent orientation across edge ({a},{b})")
            }
            Violation::OpenStar { vertex } => write!(f, "open star at vertex {vertex}"),
            Violation::OffHyperboloid { vertex, inner } => {
                write!(f, "vertex {vertex} off hyperboloid (<p,p>_M = {inner})")
            }
        }
    }
}

/// Result of [`TriMesh::validate`].
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Derived combinatorial adjacency, shared between mesh snapshots.
#[derive(Debug)]
pub struct Adjacency {
    /// Unique undirected edges, sorted lexicographically, with `a < b`.
    edges: Vec<(usize, usize)>,
    /// For each edge: incident faces with the direction each traverses it
    /// (`true` when the face contains the directed edge `a -> b`).
    edge_faces: Vec<Vec<(usize, bool)>>,
    /// Incident faces per vertex, ascending.
    vertex_faces: Vec<Vec<usize>>,
}

/// Ordered ring of faces/vertices around a vertex of a closed mesh.
#[derive(Debug, Clone)]
pub struct VertexStar {
    pub vertex: usize,
    /// Neighbor vertices in orientation order; closes cyclically.
    pub ring_vertices: Vec<usize>,
    /// Incident faces in the same order; `ring_faces[k]` spans
    /// `(vertex, ring_vertices[k], ring_vertices[k+1])`.
    pub ring_faces: Vec<usize>,
}

/// Closed oriented triangulated surface in H³.
#[derive(Debug, Clone)]
pub struct TriMesh {
    vertices: Vec<HPoint>,
    faces: Arc<Vec<[usize; 3]>>,
    adj: Arc<Adjacency>,
}

impl TriMesh {
    /// Builds a mesh and its adjacency. Only out-of-range indices are hard
    /// errors; every other defect is reported by [`TriMesh::validate`].
    pub fn new(vertices: Vec<HPoint>, faces: Vec<[usize; 3]>) -> Result<TriMesh, MeshError> {
        if faces.is_empty() {
            return Err(MeshError::Empty);
        }
        let n = vertices.len();
        for (fi, f) in faces.iter().enumerate() {
            for &v in f {
                if v >= n {
                    return Err(MeshError::IndexOutOfRange {
                        face: fi,
                        index: v,
                        count: n,
                    });
                }
            }
        }
        let adj = Adjacency::build(n, &faces);
        Ok(TriMesh {
            vertices,
            faces: Arc::new(faces),
            adj: Arc::new(adj),
        })
    }

    /// New snapshot with moved vertices and shared combinatorics.
    pub fn with_vertices(&self, vertices: Vec<HPoint>) -> TriMesh {
        assert_eq!(vertices.len(), self.vertices.len());
        TriMesh {
            vertices,
            faces: Arc::clone(&self.faces),
            adj: Arc::clone(&self.adj),
        }
    }

    pub fn vertices(&self) -> &[HPoint] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.adj.edges
    }

    pub fn vertex_faces(&self, v: usize) -> &[usize] {
        &self.adj.vertex_faces[v]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.edges.len()
    }

    /// V - E + F.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.adj.edges.len() as i64 + self.faces.len() as i64
    }

    /// Shortest and mean edge length, in one pass.
    pub fn edge_length_stats(&self) -> EdgeStats {
        let mut min = f64::INFINITY;
        let mut max: f64 = 0.0;
        let mut sum = 0.0;
        for &(a, b) in &self.adj.edges {
            let l = hdist(&self.vertices[a], &self.vertices[b]);
            min = min.min(l);
            max = max.max(l);
            sum += l;
        }
        EdgeStats {
            min,
            max,
            mean: sum / self.adj.edges.len() as f64,
        }
    }

    /// Checks every mesh and vertex invariant; never aborts.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (fi, f) in self.faces.iter().enumerate() {
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                violations.push(Violation::DegenerateFace { face: fi });
            }
        }
        for (v, fs) in self.adj.vertex_faces.iter().enumerate() {
            if fs.is_empty() {
                violations.push(Violation::IsolatedVertex { vertex: v });
            }
        }
        for (ei, &(a, b)) in self.adj.edges.iter().enumerate() {
            let inc = &self.adj.edge_faces[ei];
            match inc.len() {
                1 => violations.push(Violation::BoundaryEdge { a, b }),
                2 => {
                    if inc[0].1 == inc[1].1 {
                        violations.push(Violation::InconsistentOrientation { a, b });
                    }
                }
                n if n > 2 => violations.push(Violation::NonManifoldEdge { a, b, count: n }),
                _ => {}
            }
        }
        // star closure only makes sense where the cheaper checks pass
        if violations.is_empty() {
            for v in 0..self.vertices.len() {
                if self.vertex_star(v).is_err() {
                    violations.push(Violation::OpenStar { vertex: v });
                }
            }
        }
        for (vi, p) in self.vertices.iter().enumerate() {
            let inner = minkowski_inner(p.coords(), p.coords());
            if (inner + 1.0).abs() > HYPERBOLOID_TOL {
                violations.push(Violation::OffHyperboloid { vertex: vi, inner });
            }
        }
        ValidationReport { violations }
    }

    /// Ordered ring of incident faces/vertices around `v`. Errors when the
    /// incident faces do not close into a single cycle.
    pub fn vertex_star(&self, v: usize) -> Result<VertexStar, MeshError> {
        let fs = &self.adj.vertex_faces[v];
        if fs.is_empty() {
            return Err(MeshError::BadStar { vertex: v });
        }
        // each incident face (v, a, b) maps a -> b in orientation order
        let mut nexts: Vec<(usize, usize, usize)> = Vec::with_capacity(fs.len()); // (from, to, face)
        for &fi in fs {
            let f = &self.faces[fi];
            let k = f.iter().position(|&x| x == v).unwrap();
            let a = f[(k + 1) % 3];
            let b = f[(k + 2) % 3];
            nexts.push((a, b, fi));
        }
        let start = nexts[0].0;
        let mut ring_vertices = vec![start];
        let mut ring_faces = Vec::with_capacity(fs.len());
        let mut cur = start;
        for _ in 0..fs.len() {
            let Some(&(_, to, fi)) = nexts.iter().find(|&&(from, _, _)| from == cur) else {
                return Err(MeshError::BadStar { vertex: v });
            };
            ring_faces.push(fi);
            cur = to;
            if cur == start {
                break;
            }
            ring_vertices.push(cur);
        }
        if cur != start || ring_faces.len() != fs.len() {
            return Err(MeshError::BadStar { vertex: v });
        }
        Ok(VertexStar {
            vertex: v,
            ring_vertices,
            ring_faces,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EdgeStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl Adjacency {
    fn build(vertex_count: usize, faces: &[[usize; 3]]) -> Adjacency {
        let mut vertex_faces = vec![Vec::new(); vertex_count];
        let mut directed: Vec<(usize, usize, usize, bool)> = Vec::with_capacity(faces.len() * 3);
        for (fi, f) in faces.iter().enumerate() {
            for &v in f {
                vertex_faces[v].push(fi);
            }
            for k in 0..3 {
                let a = f[k];
                let b = f[(k + 1) % 3];
                let (lo, hi, fwd) = if a < b { (a, b, true) } else { (b, a, false) };
                directed.push((lo, hi, fi, fwd));
            }
        }
        for fs in &mut vertex_faces {
            fs.sort_unstable();
            fs.dedup();
        }
        directed.sort_unstable_by_key(|&(a, b, fi, _)| (a, b, fi));
        let mut edges = Vec::new();
        let mut edge_faces: Vec<Vec<(usize, bool)>> = Vec::new();
        for (a, b, fi, fwd) in directed {
            if edges.last() != Some(&(a, b)) {
                edges.push((a, b));
                edge_faces.push(Vec::with_capacity(2));
            }
            edge_faces.last_mut().unwrap().push((fi, fwd));
        }
        Adjacency {
            edges,
            edge_faces,
            vertex_faces,
        }
    }
}

// ---------------------------------------------------------------------------
// HMESH persistence
// ---------------------------------------------------------------------------

fn format_coord(x: f64) -> String {
    format!("{:.16e}", x)
}

/// Serializes to the HMESH text format (17 significant digits per coordinate).
pub fn hmesh_to_string(mesh: &TriMesh) -> String {
    let mut out = String::with_capacity(mesh.vertex_count() * 96 + mesh.face_count() * 24);
    out.push_str("HMESH 1\n");
    out.push_str(&format!("{} {}\n", mesh.vertex_count(), mesh.face_count()));
    for p in mesh.vertices() {
        let c = p.coords();
        out.push_str(&format!(
            "v {} {} {} {}\n",
            format_coord(c[0]),
            format_coord(c[1]),
            format_coord(c[2]),
            format_coord(c[3])
        ));
    }
    for f in mesh.faces() {
        out.push_str(&format!("f {} {} {}\n", f[0], f[1], f[2]));
    }
    out
}

pub fn write_hmesh(mesh: &TriMesh, path: &Path) -> Result<(), MeshIoError> {
    std::fs::write(path, hmesh_to_string(mesh))?;
    Ok(())
}

/// Parses the HMESH text format. Vertices with hyperboloid drift in
/// `(LOAD_DRIFT_REPROJECT, LOAD_DRIFT_MAX]` are renormalized onto the
/// hyperboloid; larger drift is an error.
pub fn hmesh_from_str(text: &str) -> Result<TriMesh, MeshIoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines
        .next()
        .ok_or(MeshIoError::MalformedHeader { line: 1 })?;
    if header != "HMESH 1" {
        return Err(MeshIoError::MalformedHeader { line: hline });
    }
    let (cline, counts) = lines
        .next()
        .ok_or(MeshIoError::MalformedCounts { line: hline + 1 })?;
    let mut it = counts.split_whitespace();
    let nv: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(MeshIoError::MalformedCounts { line: cline })?;
    let nf: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(MeshIoError::MalformedCounts { line: cline })?;
    if it.next().is_some() {
        return Err(MeshIoError::MalformedCounts { line: cline });
    }

    let mut vertices = Vec::with_capacity(nv);
    let mut last_line = cline;
    for _ in 0..nv {
        let (line, body) = lines.next().ok_or(MeshIoError::TruncatedFile {
            line: last_line,
            expected: "vertex",
        })?;
        last_line = line;
        let mut t = body.split_whitespace();
        if t.next() != Some("v") {
            return Err(MeshIoError::UnexpectedRecord {
                line,
                expected: "vertex",
            });
        }
        let mut c = [0.0; 4];
        for x in &mut c {
            *x = t
                .next()
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or(MeshIoError::VertexParse { line })?;
        }
        if t.next().is_some() {
            return Err(MeshIoError::VertexParse { line });
        }
        let inner = minkowski_inner(&c, &c);
        let drift = (inner + 1.0).abs();
        if drift > LOAD_DRIFT_MAX || c[0] <= 0.0 {
            return Err(MeshIoError::HyperboloidViolation { line, inner });
        }
        let p = if drift <= LOAD_DRIFT_REPROJECT {
            HPoint::from_coords_unchecked(c)
        } else {
            HPoint::normalized(c).map_err(|_| MeshIoError::HyperboloidViolation { line, inner })?
        };
        vertices.push(p);
    }

    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (line, body) = lines.next().ok_or(MeshIoError::TruncatedFile {
            line: last_line,
            expected: "face",
        })?;
        last_line = line;
        let mut t = body.split_whitespace();
        if t.next() != Some("f") {
            return Err(MeshIoError::UnexpectedRecord {
                line,
                expected: "face",
            });
        }
        let mut f = [0usize; 3];
        for x in &mut f {
            *x = t
                .next()
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or(MeshIoError::FaceParse { line })?;
            if *x >= nv {
                return Err(MeshIoError::IndexOutOfRange {
                    line,
                    index: *x,
                    count: nv,
                });
            }
        }
        if t.next().is_some() {
            return Err(MeshIoError::FaceParse { line });
        }
        faces.push(f);
    }
    if let Some((line, _)) = lines.next() {
        return Err(MeshIoError::UnexpectedRecord {
            line,
            expected: "end of file",
        });
    }

    TriMesh::new(vertices, faces).map_err(|e| match e {
        MeshError::IndexOutOfRange { index, count, .. } => MeshIoError::IndexOutOfRange {
            line: last_line,
            index,
            count,
        },
        _ => MeshIoError::UnexpectedRecord {
            line: last_line,
            expected: "non-empty face list",
        },
    })
}

pub fn read_hmesh(path: &Path) -> Result<TriMesh, MeshIoError> {
    let text = std::fs::read_to_string(path)?;
    hmesh_from_str(&text)
}

#[cfg(test)]
pub(crate) mod test_meshes {
    use super::*;
    use crate::hgeom::{exp_map, HTangent};

    /// Regular tetrahedron directions lifted to the hyperboloid at radius `r`.
    pub fn tetrahedron(r: f64) -> TriMesh {
        let s = 1.0 / 3f64.sqrt();
        let dirs = [
            [s, s, s],
            [s, -s, -s],
            [-s, s, -s],
            [-s, -s, s],
        ];
        let vertices: Vec<HPoint> = dirs
            .iter()
            .map(|d| {
                let w = [0.0, r * d[0], r * d[1], r * d[2]];
                exp_map(&HPoint::ORIGIN, &HTangent::project(&HPoint::ORIGIN, &w))
            })
            .collect();
        let faces = vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]];
        TriMesh::new(vertices, faces).unwrap()
    }
}
