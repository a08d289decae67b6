//! Gluing tables of (generalized) ideal triangulations and their skeleta.
//!
//! A triangulation is a list of tetrahedra whose faces are glued in pairs.
//! Face `f` of a tetrahedron is the face opposite vertex `f`; edge `e` joins
//! the vertex pair [`EDGE_VERTICES`]`[e]`. The gluing of face `f` of
//! tetrahedron `t` is a pair `(t', π)` where `π` sends the vertex labels of
//! `t` to those of `t'`, so `π(f)` is the vertex of `t'` opposite the glued
//! face.
//!
//! Edge, face and vertex identification classes are derived once at
//! construction and cached; a [`Triangulation`] is immutable afterwards.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{edge_index, face_vertices, Perm4, EDGE_VERTICES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("a triangulation needs at least one tetrahedron")]
    Empty,
    #[error("document declares {declared} tetrahedra but lists gluings for {actual}")]
    TetCountMismatch { declared: usize, actual: usize },
    #[error("tetrahedron {tet} face {face}: expected 4 face gluings")]
    MissingFace { tet: usize, face: usize },
    #[error("tetrahedron {tet} face {face}: target tetrahedron {target} out of range")]
    TargetOutOfRange { tet: usize, face: usize, target: usize },
    #[error("tetrahedron {tet} face {face}: gluing permutation is not a bijection of 0..3")]
    InvalidPermutation { tet: usize, face: usize },
    #[error("tetrahedron {tet} face {face} is glued to itself")]
    SelfGluing { tet: usize, face: usize },
    #[error("tetrahedron {tet} face {face}: gluing is not an involution")]
    NotInvolution { tet: usize, face: usize },
    #[error("edge {edge} of tetrahedron {tet} is identified with itself reversed")]
    ReversedEdge { tet: usize, edge: usize },
    #[error("triangulation is not orientable")]
    NonOrientable,
}

/// Where a face is glued: target tetrahedron and vertex relabelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

/// One occurrence of an edge class inside a tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeIncidence {
    pub tet: usize,
    pub edge: usize,
    /// `+1` if the low-to-high direction of this tetrahedron edge agrees with
    /// the class direction, `-1` otherwise.
    pub orientation: i32,
}

/// An edge of the triangulation: the orbit of tetrahedron edges identified by gluings.
///
/// The class direction is the low-to-high direction of its first member,
/// which is the lexicographically least `(tet, edge)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClass {
    pub members: Vec<EdgeIncidence>,
    /// Vertex classes at the tail and head of the class direction.
    pub ends: [usize; 2],
}

impl EdgeClass {
    pub fn valence(&self) -> usize {
        self.members.len()
    }

    pub fn representative(&self) -> EdgeIncidence {
        self.members[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Interior,
    Ideal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexClass {
    /// `(tet, vertex)` pairs in lexicographic order.
    pub members: Vec<(usize, usize)>,
    /// Euler characteristic of the link surface.
    pub link_euler: i64,
    pub kind: VertexKind,
}

/// A face of the triangulation, seen from both of its sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceClass {
    /// `(tet, face)` pairs; the first is the lexicographically smaller.
    pub sides: [(usize, usize); 2],
}

#[derive(Debug, Clone)]
struct Skeleton {
    edges: Vec<EdgeClass>,
    edge_of: Vec<[(usize, i32); 6]>,
    vertices: Vec<VertexClass>,
    vertex_of: Vec<[usize; 4]>,
    faces: Vec<FaceClass>,
    face_of: Vec<[usize; 4]>,
    orientation: Option<Vec<i32>>,
}

/// A closed 3-dimensional pseudo-manifold given by a face gluing table.
#[derive(Debug, Clone)]
pub struct Triangulation {
    gluings: Vec<[Gluing; 4]>,
    skeleton: Skeleton,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.gluings == other.gluings
    }
}

impl Eq for Triangulation {}

#[derive(Debug, Serialize, Deserialize)]
struct GluingDoc {
    tet: usize,
    perm: Vec<u8>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TriangulationDoc {
    tets: usize,
    gluings: Vec<Vec<GluingDoc>>,
}

impl Triangulation {
    /// Builds a triangulation from a complete gluing table.
    ///
    /// Checks that every gluing targets an existing tetrahedron, that the
    /// table is an involution without self-glued faces, and that no edge is
    /// identified with itself reversed. Orientability is computed but not
    /// required; see [`Triangulation::validate_orientation`].
    pub fn new(gluings: Vec<[Gluing; 4]>) -> Result<Triangulation, TriangulationError> {
        let n = gluings.len();
        if n == 0 {
            return Err(TriangulationError::Empty);
        }
        for (t, faces) in gluings.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                if g.tet >= n {
                    return Err(TriangulationError::TargetOutOfRange { tet: t, face: f, target: g.tet });
                }
                if g.tet == t && g.perm.apply(f) == f {
                    return Err(TriangulationError::SelfGluing { tet: t, face: f });
                }
                let back = gluings[g.tet][g.perm.apply(f)];
                if back.tet != t || back.perm != g.perm.inverse() {
                    return Err(TriangulationError::NotInvolution { tet: t, face: f });
                }
            }
        }
        let skeleton = Skeleton::build(&gluings)?;
        Ok(Triangulation { gluings, skeleton })
    }

    /// Parses the JSON gluing document and requires the result to be orientable.
    pub fn from_json(text: &str) -> Result<Triangulation, TriangulationError> {
        let doc: TriangulationDoc =
            serde_json::from_str(text).map_err(|e| TriangulationError::Syntax(e.to_string()))?;
        if doc.gluings.len() != doc.tets {
            return Err(TriangulationError::TetCountMismatch { declared: doc.tets, actual: doc.gluings.len() });
        }
        let mut gluings = Vec::with_capacity(doc.tets);
        for (t, faces) in doc.gluings.iter().enumerate() {
            if faces.len() != 4 {
                return Err(TriangulationError::MissingFace { tet: t, face: faces.len().min(3) });
            }
            let mut row = [Gluing { tet: 0, perm: Perm4::IDENTITY }; 4];
            for (f, g) in faces.iter().enumerate() {
                let images: [u8; 4] = g
                    .perm
                    .as_slice()
                    .try_into()
                    .map_err(|_| TriangulationError::InvalidPermutation { tet: t, face: f })?;
                let perm = Perm4::new(images).ok_or(TriangulationError::InvalidPermutation { tet: t, face: f })?;
                row[f] = Gluing { tet: g.tet, perm };
            }
            gluings.push(row);
        }
        let tri = Triangulation::new(gluings)?;
        tri.validate_orientation()?;
        Ok(tri)
    }

    pub fn to_json(&self) -> String {
        let doc = TriangulationDoc {
            tets: self.tet_count(),
            gluings: self
                .gluings
                .iter()
                .map(|row| row.iter().map(|g| GluingDoc { tet: g.tet, perm: g.perm.images().to_vec() }).collect())
                .collect(),
        };
        serde_json::to_string(&doc).expect("gluing document serializes")
    }

    pub fn tet_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Gluing {
        self.gluings[tet][face]
    }

    pub fn gluings(&self) -> &[[Gluing; 4]] {
        &self.gluings
    }

    pub fn edge_classes(&self) -> &[EdgeClass] {
        &self.skeleton.edges
    }

    /// Edge class of edge `edge` of `tet`, with the relative orientation of
    /// that tetrahedron edge (low-to-high) against the class direction.
    pub fn edge_class_of(&self, tet: usize, edge: usize) -> (usize, i32) {
        self.skeleton.edge_of[tet][edge]
    }

    pub fn vertex_classes(&self) -> &[VertexClass] {
        &self.skeleton.vertices
    }

    pub fn vertex_class_of(&self, tet: usize, vertex: usize) -> usize {
        self.skeleton.vertex_of[tet][vertex]
    }

    pub fn face_classes(&self) -> &[FaceClass] {
        &self.skeleton.faces
    }

    pub fn face_class_of(&self, tet: usize, face: usize) -> usize {
        self.skeleton.face_of[tet][face]
    }

    /// Number of vertex classes whose link is a sphere.
    pub fn interior_vertex_count(&self) -> usize {
        self.skeleton.vertices.iter().filter(|v| v.kind == VertexKind::Interior).count()
    }

    /// `vertices - edges + faces - tets`. Each vertex class contributes
    /// `1 - χ(link)/2`, so this counts torus cusps and is zero when every
    /// vertex is interior.
    pub fn euler_characteristic(&self) -> i64 {
        self.skeleton.vertices.len() as i64 - self.skeleton.edges.len() as i64 + self.skeleton.faces.len() as i64
            - self.tet_count() as i64
    }

    /// Vertex kinds sorted, ideal before interior.
    pub fn vertex_kinds(&self) -> Vec<VertexKind> {
        let mut kinds: Vec<_> = self.skeleton.vertices.iter().map(|v| v.kind).collect();
        kinds.sort_by_key(|k| matches!(k, VertexKind::Interior));
        kinds
    }

    /// Per-tetrahedron signs `s` with `s(t) = +1` meaning the vertex order
    /// `0 < 1 < 2 < 3` of `t` is positively oriented.
    ///
    /// Across every gluing, `s(t') = s(t)` exactly when the gluing permutation is
    /// odd. The first tetrahedron of each connected component gets `+1`.
    pub fn validate_orientation(&self) -> Result<&[i32], TriangulationError> {
        self.skeleton.orientation.as_deref().ok_or(TriangulationError::NonOrientable)
    }

    pub fn is_orientable(&self) -> bool {
        self.skeleton.orientation.is_some()
    }

    /// Relabels tetrahedra and their vertices.
    ///
    /// `order[i]` is the old index of the new tetrahedron `i`; `perms[t]`
    /// sends the old vertex labels of old tetrahedron `t` to its new labels.
    pub fn relabeled(&self, order: &[usize], perms: &[Perm4]) -> Triangulation {
        let n = self.tet_count();
        assert_eq!(order.len(), n);
        assert_eq!(perms.len(), n);
        let mut new_index = vec![usize::MAX; n];
        for (i, &t) in order.iter().enumerate() {
            new_index[t] = i;
        }
        let mut gluings = vec![[Gluing { tet: 0, perm: Perm4::IDENTITY }; 4]; n];
        for (i, &t) in order.iter().enumerate() {
            let rho = perms[t];
            for f in 0..4 {
                let g = self.gluings[t][f];
                gluings[i][rho.apply(f)] =
                    Gluing { tet: new_index[g.tet], perm: rho.inverse().then(g.perm).then(perms[g.tet]) };
            }
        }
        Triangulation::new(gluings).expect("relabelling preserves validity")
    }

    /// The same oriented manifold, relabelled so every tetrahedron has sign `+1`
    /// (all gluing permutations odd). Tetrahedra with sign `-1` get vertices 2 and 3 swapped.
    pub fn coherently_oriented(&self) -> Result<Triangulation, TriangulationError> {
        let signs = self.validate_orientation()?;
        let swap = Perm4::transposition(2, 3);
        let perms: Vec<_> = signs.iter().map(|&s| if s > 0 { Perm4::IDENTITY } else { swap }).collect();
        let order: Vec<_> = (0..self.tet_count()).collect();
        Ok(self.relabeled(&order, &perms))
    }

    /// Gluing table of the orientation-reversed manifold: every tetrahedron has
    /// vertex labels 2 and 3 exchanged.
    pub fn mirror(&self) -> Triangulation {
        let swap = Perm4::transposition(2, 3);
        let order: Vec<_> = (0..self.tet_count()).collect();
        self.relabeled(&order, &vec![swap; self.tet_count()])
    }

    /// A relabelling-invariant encoding of the gluing table.
    ///
    /// With `oriented` set, the table is first made coherently oriented and only
    /// orientation-preserving relabellings are considered, so two codes agree
    /// iff the triangulations are isomorphic as oriented triangulations.
    /// Connected triangulations only: other components are appended in input order.
    pub fn canonical_code(&self, oriented: bool) -> Vec<u32> {
        let base;
        let tri = if oriented {
            base = self.coherently_oriented().expect("oriented canonical code needs an orientable triangulation");
            &base
        } else {
            self
        };
        let mut best: Option<Vec<u32>> = None;
        for start in 0..tri.tet_count() {
            for rho in Perm4::all() {
                if oriented && !rho.is_even() {
                    continue;
                }
                let code = tri.code_from(start, rho);
                if best.as_ref().is_none_or(|b| code < *b) {
                    best = Some(code);
                }
            }
        }
        best.expect("triangulation has a tetrahedron")
    }

    fn code_from(&self, start: usize, rho0: Perm4) -> Vec<u32> {
        let n = self.tet_count();
        let mut new_index = vec![usize::MAX; n];
        let mut perms = vec![Perm4::IDENTITY; n];
        let mut order = Vec::with_capacity(n);
        let mut code = Vec::with_capacity(8 * n + 1);
        code.push(n as u32);
        new_index[start] = 0;
        perms[start] = rho0;
        order.push(start);
        let mut i = 0;
        loop {
            while i < order.len() {
                let t = order[i];
                let rho = perms[t];
                for nf in 0..4 {
                    let f = rho.inverse().apply(nf);
                    let g = self.gluings[t][f];
                    if new_index[g.tet] == usize::MAX {
                        new_index[g.tet] = order.len();
                        perms[g.tet] = g.perm.inverse().then(rho);
                        order.push(g.tet);
                    }
                    let p = rho.inverse().then(g.perm).then(perms[g.tet]);
                    code.push(new_index[g.tet] as u32);
                    code.push(perm_code(p));
                }
                i += 1;
            }
            match (0..n).find(|&t| new_index[t] == usize::MAX) {
                Some(t) => {
                    new_index[t] = order.len();
                    order.push(t);
                }
                None => break,
            }
        }
        code
    }

    pub fn is_isomorphic(&self, other: &Triangulation) -> bool {
        self.tet_count() == other.tet_count() && self.canonical_code(false) == other.canonical_code(false)
    }

    /// Isomorphism through an orientation-preserving relabelling.
    pub fn is_oriented_isomorphic(&self, other: &Triangulation) -> bool {
        self.tet_count() == other.tet_count() && self.canonical_code(true) == other.canonical_code(true)
    }
}

fn perm_code(p: Perm4) -> u32 {
    let im = p.images();
    (im[0] as u32) * 64 + (im[1] as u32) * 16 + (im[2] as u32) * 4 + im[3] as u32
}

impl Skeleton {
    fn build(gluings: &[[Gluing; 4]]) -> Result<Skeleton, TriangulationError> {
        let n = gluings.len();

        let mut vertex_of = vec![[usize::MAX; 4]; n];
        let mut vertices = Vec::new();
        for t in 0..n {
            for v in 0..4 {
                if vertex_of[t][v] != usize::MAX {
                    continue;
                }
                let id = vertices.len();
                let mut members = Vec::new();
                let mut stack = vec![(t, v)];
                vertex_of[t][v] = id;
                while let Some((s, w)) = stack.pop() {
                    members.push((s, w));
                    for f in (0..4).filter(|&f| f != w) {
                        let g = gluings[s][f];
                        let w2 = g.perm.apply(w);
                        if vertex_of[g.tet][w2] == usize::MAX {
                            vertex_of[g.tet][w2] = id;
                            stack.push((g.tet, w2));
                        }
                    }
                }
                members.sort_unstable();
                vertices.push(VertexClass { members, link_euler: 0, kind: VertexKind::Ideal });
            }
        }

        let mut edge_of = vec![[(usize::MAX, 0); 6]; n];
        let mut edges = Vec::new();
        for t in 0..n {
            for e in 0..6 {
                if edge_of[t][e].0 != usize::MAX {
                    continue;
                }
                let id = edges.len();
                let mut members = Vec::new();
                let mut stack = vec![(t, e, 1)];
                edge_of[t][e] = (id, 1);
                while let Some((s, d, o)) = stack.pop() {
                    members.push(EdgeIncidence { tet: s, edge: d, orientation: o });
                    let (a, b) = EDGE_VERTICES[d];
                    for f in (0..4).filter(|&f| f != a && f != b) {
                        let g = gluings[s][f];
                        let (a2, b2) = (g.perm.apply(a), g.perm.apply(b));
                        let d2 = edge_index(a2, b2);
                        let o2 = if a2 < b2 { o } else { -o };
                        let (seen, seen_o) = edge_of[g.tet][d2];
                        if seen == usize::MAX {
                            edge_of[g.tet][d2] = (id, o2);
                            stack.push((g.tet, d2, o2));
                        } else if seen_o != o2 {
                            return Err(TriangulationError::ReversedEdge { tet: g.tet, edge: d2 });
                        }
                    }
                }
                members.sort_unstable_by_key(|m| (m.tet, m.edge));
                let (a, b) = EDGE_VERTICES[e];
                edges.push(EdgeClass { members, ends: [vertex_of[t][a], vertex_of[t][b]] });
            }
        }

        let mut face_of = vec![[usize::MAX; 4]; n];
        let mut faces = Vec::new();
        for t in 0..n {
            for f in 0..4 {
                if face_of[t][f] != usize::MAX {
                    continue;
                }
                let g = gluings[t][f];
                let other = (g.tet, g.perm.apply(f));
                face_of[t][f] = faces.len();
                face_of[other.0][other.1] = faces.len();
                faces.push(FaceClass { sides: [(t, f), other] });
            }
        }

        // Link of each vertex class: triangles = corners of tetrahedra, edges =
        // corners of faces, vertices = ends of edge classes.
        let mut link_v = vec![0i64; vertices.len()];
        let mut link_e = vec![0i64; vertices.len()];
        for edge in &edges {
            link_v[edge.ends[0]] += 1;
            link_v[edge.ends[1]] += 1;
        }
        for face in &faces {
            let (t, f) = face.sides[0];
            for v in face_vertices(f) {
                link_e[vertex_of[t][v]] += 1;
            }
        }
        for (i, vc) in vertices.iter_mut().enumerate() {
            vc.link_euler = link_v[i] - link_e[i] + vc.members.len() as i64;
            vc.kind = if vc.link_euler == 2 { VertexKind::Interior } else { VertexKind::Ideal };
        }

        let orientation = orient(gluings);
        Ok(Skeleton { edges, edge_of, vertices, vertex_of, faces, face_of, orientation })
    }
}

fn orient(gluings: &[[Gluing; 4]]) -> Option<Vec<i32>> {
    let n = gluings.len();
    let mut sign = vec![0i32; n];
    for root in 0..n {
        if sign[root] != 0 {
            continue;
        }
        sign[root] = 1;
        let mut stack = vec![root];
        while let Some(t) = stack.pop() {
            for g in &gluings[t] {
                let want = -sign[t] * g.perm.sign();
                if sign[g.tet] == 0 {
                    sign[g.tet] = want;
                    stack.push(g.tet);
                } else if sign[g.tet] != want {
                    return None;
                }
            }
        }
    }
    Some(sign)
}
