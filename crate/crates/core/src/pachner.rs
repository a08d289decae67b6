//! Pachner moves: (2,3), its inverse (3,2), and the (1,4) stellar subdivision.
//!
//! Every move removes a few tetrahedra, keeps the survivors in their original
//! order and appends the new ones. Faces of removed tetrahedra that lie on the
//! boundary of the modified region are rewired onto the new tetrahedra.
//! New tetrahedra whose labelling would be negatively oriented get vertices 2
//! and 3 swapped, so the output describes the same oriented manifold with the
//! first tetrahedron keeping its orientation.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{edge_index, face_vertices, Perm4, EDGE_VERTICES};
use crate::triangulation::{Gluing, Triangulation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("tetrahedron {0} does not exist")]
    TetOutOfRange(usize),
    #[error("face index {0} is not in 0..4")]
    FaceOutOfRange(usize),
    #[error("edge class {0} does not exist")]
    EdgeOutOfRange(usize),
    #[error("face {face} of tetrahedron {tet} is glued to the same tetrahedron")]
    FaceSelfAdjacent { tet: usize, face: usize },
    #[error("edge class {edge} has valence {valence}, not 3")]
    EdgeNotTrivalent { edge: usize, valence: usize },
    #[error("the three tetrahedra around edge class {edge} are not distinct")]
    TetrahedraNotDistinct { edge: usize },
}

/// One Pachner move, addressed in the triangulation it is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    TwoThree { tet: usize, face: usize },
    ThreeTwo { edge: usize },
    OneFour { tet: usize },
}

impl Move {
    pub fn apply(&self, tri: &Triangulation) -> Result<Triangulation, MoveError> {
        match *self {
            Move::TwoThree { tet, face } => pachner_23(tri, tet, face),
            Move::ThreeTwo { edge } => pachner_32(tri, edge),
            Move::OneFour { tet } => Ok(pachner_14(tri, tet)),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::TwoThree { tet, face } => write!(f, "2-3 on face {face} of tetrahedron {tet}"),
            Move::ThreeTwo { edge } => write!(f, "3-2 on edge class {edge}"),
            Move::OneFour { tet } => write!(f, "1-4 on tetrahedron {tet}"),
        }
    }
}

/// Where a boundary face of a removed tetrahedron ends up: new tetrahedron,
/// its face, and the map from old vertex labels to new ones.
#[derive(Clone, Copy)]
struct Landing {
    tet: usize,
    face: usize,
    relabel: Perm4,
}

struct Surgery<'a> {
    old: &'a Triangulation,
    new_index: Vec<Option<usize>>,
    survivors: usize,
    gluings: Vec<[Option<Gluing>; 4]>,
    signs: Vec<i32>,
    landings: HashMap<(usize, usize), Landing>,
}

impl<'a> Surgery<'a> {
    /// Removes `removed` and reserves `added` new tetrahedra, indexed from `survivors()`.
    fn new(old: &'a Triangulation, removed: &[usize], added: usize) -> Surgery<'a> {
        let n = old.tet_count();
        let old_signs = old.validate_orientation().ok();
        let mut new_index = vec![None; n];
        let mut signs = Vec::new();
        let mut next = 0;
        for t in 0..n {
            if !removed.contains(&t) {
                new_index[t] = Some(next);
                signs.push(old_signs.map_or(1, |s| s[t]));
                next += 1;
            }
        }
        signs.resize(next + added, 0);
        Surgery {
            old,
            new_index,
            survivors: next,
            gluings: vec![[None; 4]; next + added],
            signs,
            landings: HashMap::new(),
        }
    }

    fn old_sign(&self, t: usize) -> i32 {
        self.old.validate_orientation().map_or(1, |s| s[t])
    }

    fn land(&mut self, old_tet: usize, old_face: usize, tet: usize, face: usize, relabel: Perm4) {
        debug_assert_eq!(relabel.apply(old_face), face);
        self.landings.insert((old_tet, old_face), Landing { tet, face, relabel });
    }

    fn glue(&mut self, a: usize, fa: usize, b: usize, perm: Perm4) {
        self.gluings[a][fa] = Some(Gluing { tet: b, perm });
        self.gluings[b][perm.apply(fa)] = Some(Gluing { tet: a, perm: perm.inverse() });
    }

    /// Where the far side of `(old_tet, old_face)` sits in the new triangulation,
    /// as a gluing from the old labels of `old_tet`.
    fn target(&self, old_tet: usize, old_face: usize) -> Gluing {
        let g = self.old.gluing(old_tet, old_face);
        match self.new_index[g.tet] {
            Some(i) => Gluing { tet: i, perm: g.perm },
            None => {
                let l = self.landings[&(g.tet, g.perm.apply(old_face))];
                Gluing { tet: l.tet, perm: g.perm.then(l.relabel) }
            }
        }
    }

    fn finish(mut self) -> Triangulation {
        let n = self.old.tet_count();
        for t in 0..n {
            if let Some(i) = self.new_index[t] {
                for f in 0..4 {
                    if self.gluings[i][f].is_none() {
                        self.gluings[i][f] = Some(self.target(t, f));
                    }
                }
            }
        }
        let landings: Vec<_> = self.landings.iter().map(|(&k, &v)| (k, v)).collect();
        for ((t, f), l) in landings {
            let far = self.target(t, f);
            self.gluings[l.tet][l.face] = Some(Gluing { tet: far.tet, perm: l.relabel.inverse().then(far.perm) });
        }
        let gluings: Vec<[Gluing; 4]> = self
            .gluings
            .iter()
            .map(|row| row.map(|g| g.expect("every face of the new triangulation is glued")))
            .collect();
        let tri = Triangulation::new(gluings).expect("Pachner move yields a valid triangulation");
        if !self.old.is_orientable() {
            return tri;
        }
        let swap = Perm4::transposition(2, 3);
        let perms: Vec<_> = self.signs.iter().map(|&s| if s < 0 { swap } else { Perm4::IDENTITY }).collect();
        let order: Vec<_> = (0..tri.tet_count()).collect();
        tri.relabeled(&order, &perms)
    }
}

/// Faces `(tet, face)` on which a (2,3) move is admissible, one per face class.
pub fn admissible_23_faces(tri: &Triangulation) -> Vec<(usize, usize)> {
    tri.face_classes().iter().filter(|fc| fc.sides[0].0 != fc.sides[1].0).map(|fc| fc.sides[0]).collect()
}

/// Edge classes on which a (3,2) move is admissible.
pub fn admissible_32_edges(tri: &Triangulation) -> Vec<usize> {
    (0..tri.edge_classes().len()).filter(|&e| check_32(tri, e).is_ok()).collect()
}

/// Replaces the two tetrahedra meeting at face `face` of `tet` by three
/// tetrahedra around a new edge joining their apexes.
pub fn pachner_23(tri: &Triangulation, tet: usize, face: usize) -> Result<Triangulation, MoveError> {
    pachner_23_with_edge(tri, tet, face).map(|(t, _)| t)
}

/// As [`pachner_23`], also returning the edge class of the new edge.
pub fn pachner_23_with_edge(tri: &Triangulation, tet: usize, face: usize) -> Result<(Triangulation, usize), MoveError> {
    if tet >= tri.tet_count() {
        return Err(MoveError::TetOutOfRange(tet));
    }
    if face >= 4 {
        return Err(MoveError::FaceOutOfRange(face));
    }
    let upper = tet;
    let Gluing { tet: lower, perm: pi } = tri.gluing(tet, face);
    if lower == upper {
        return Err(MoveError::FaceSelfAdjacent { tet, face });
    }
    let mut s = Surgery::new(tri, &[upper, lower], 3);
    let base = s.survivors;
    let sign = s.old_sign(upper);
    // New tetrahedron i is the upper one with equatorial vertex x_i replaced by
    // the lower apex; it keeps the upper labelling, so it keeps its sign.
    let equator = face_vertices(face);
    let swap_apex: Vec<Perm4> = equator.iter().map(|&x| Perm4::transposition(face, x)).collect();
    for (i, &x) in equator.iter().enumerate() {
        s.signs[base + i] = sign;
        s.land(upper, x, base + i, x, Perm4::IDENTITY);
        s.land(lower, pi.apply(x), base + i, face, pi.inverse().then(swap_apex[i]));
    }
    for i in 0..3 {
        for j in i + 1..3 {
            let (xi, xj) = (equator[i], equator[j]);
            s.glue(base + i, xj, base + j, Perm4::transposition(xi, xj));
        }
    }
    let (apex, x0) = (face, equator[0]);
    let out = s.finish();
    let lab = if sign < 0 { Perm4::transposition(2, 3) } else { Perm4::IDENTITY };
    let edge = out.edge_class_of(base, edge_index(lab.apply(apex), lab.apply(x0))).0;
    Ok((out, edge))
}

fn check_32(tri: &Triangulation, edge: usize) -> Result<(), MoveError> {
    let class = tri.edge_classes().get(edge).ok_or(MoveError::EdgeOutOfRange(edge))?;
    if class.valence() != 3 {
        return Err(MoveError::EdgeNotTrivalent { edge, valence: class.valence() });
    }
    let t: Vec<usize> = class.members.iter().map(|m| m.tet).collect();
    if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
        return Err(MoveError::TetrahedraNotDistinct { edge });
    }
    Ok(())
}

/// Replaces the three tetrahedra around a valence-three edge class by two.
pub fn pachner_32(tri: &Triangulation, edge: usize) -> Result<Triangulation, MoveError> {
    check_32(tri, edge)?;
    let first = tri.edge_classes()[edge].representative();
    let t0 = first.tet;
    let (p, q) = EDGE_VERTICES[first.edge];
    let mut others = (0..4).filter(|&v| v != p && v != q);
    let (r, s_) = (others.next().unwrap(), others.next().unwrap());
    let Gluing { tet: t1, perm: pi1 } = tri.gluing(t0, r);
    let Gluing { tet: t2, perm: pi2 } = tri.gluing(t0, s_);

    let mut s = Surgery::new(tri, &[t0, t1, t2], 2);
    let (upper, lower) = (s.survivors, s.survivors + 1);
    let sign = s.old_sign(t0);
    // upper = t0 with the bottom apex q replaced by the far equatorial vertex;
    // lower = upper with the top apex p replaced by q's old occupant.
    s.signs[upper] = sign;
    s.signs[lower] = -sign;
    s.glue(upper, p, lower, Perm4::IDENTITY);

    let perm_from = |pairs: [(usize, usize); 4]| {
        let mut im = [0u8; 4];
        for (from, to) in pairs {
            im[from] = to as u8;
        }
        Perm4::new(im).unwrap()
    };
    s.land(t0, q, upper, q, Perm4::IDENTITY);
    s.land(t0, p, lower, q, Perm4::transposition(p, q));

    let to_upper1 = perm_from([(p, p), (q, r), (r, q), (s_, s_)]);
    let to_lower1 = perm_from([(q, p), (r, q), (s_, s_), (p, r)]);
    s.land(t1, pi1.apply(q), upper, r, pi1.inverse().then(to_upper1));
    s.land(t1, pi1.apply(p), lower, r, pi1.inverse().then(to_lower1));

    let to_upper2 = perm_from([(p, p), (q, s_), (s_, q), (r, r)]);
    let to_lower2 = perm_from([(q, p), (s_, q), (r, r), (p, s_)]);
    s.land(t2, pi2.apply(q), upper, s_, pi2.inverse().then(to_upper2));
    s.land(t2, pi2.apply(p), lower, s_, pi2.inverse().then(to_lower2));
    Ok(s.finish())
}

/// Subdivides tetrahedron `tet` into four around a new interior vertex.
pub fn pachner_14(tri: &Triangulation, tet: usize) -> Triangulation {
    assert!(tet < tri.tet_count(), "tetrahedron {tet} does not exist");
    let mut s = Surgery::new(tri, &[tet], 4);
    let base = s.survivors;
    let sign = s.old_sign(tet);
    // New tetrahedron i is `tet` with vertex i replaced by the centre.
    for i in 0..4 {
        s.signs[base + i] = sign;
        s.land(tet, i, base + i, i, Perm4::IDENTITY);
        for j in i + 1..4 {
            s.glue(base + i, j, base + j, Perm4::transposition(i, j));
        }
    }
    s.finish()
}

/// Applies `count` admissible moves chosen by a seeded generator.
pub fn random_moves(tri: &Triangulation, count: usize, seed: u64) -> Triangulation {
    random_move_sequence(tri, count, seed).0
}

/// As [`random_moves`], also returning the moves applied.
///
/// Moves are drawn as (2,3) with weight 9, (3,2) with weight 7 and (1,4) with
/// weight 4; inadmissible draws are skipped and redrawn.
pub fn random_move_sequence(tri: &Triangulation, count: usize, seed: u64) -> (Triangulation, Vec<Move>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = tri.clone();
    let mut applied = Vec::with_capacity(count);
    let mut attempts = 0;
    while applied.len() < count && attempts < 100 * (count + 1) {
        attempts += 1;
        let roll = rng.gen_range(0..20);
        let mv = if roll < 9 {
            Move::TwoThree { tet: rng.gen_range(0..current.tet_count()), face: rng.gen_range(0..4) }
        } else if roll < 16 {
            let edges = admissible_32_edges(&current);
            if edges.is_empty() {
                continue;
            }
            Move::ThreeTwo { edge: edges[rng.gen_range(0..edges.len())] }
        } else {
            Move::OneFour { tet: rng.gen_range(0..current.tet_count()) }
        };
        if let Ok(next) = mv.apply(&current) {
            current = next;
            applied.push(mv);
        }
    }
    (current, applied)
}
