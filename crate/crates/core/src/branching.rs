//! Local orders (branchings): edge orientations with no cyclic face.
//!
//! Arrows follow the convention that in a branched tetrahedron the vertex
//! `v_i` has exactly `i` outgoing edges, so arrows run from later to earlier
//! vertices of the induced order `v_0 < v_1 < v_2 < v_3`.

use std::collections::HashMap;

use thiserror::Error;

use crate::pachner::{admissible_23_faces, pachner_23, Move};
use crate::perm::{Perm4, EDGE_VERTICES};
use crate::triangulation::{Triangulation, TriangulationError};

/// Positive (2,3) moves tried by [`make_orderable`] unless told otherwise.
pub const DEFAULT_MAX_MOVES: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BranchingError {
    #[error("no orderable triangulation within {max_moves} positive 2-3 moves")]
    SearchExhausted { max_moves: usize },
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

/// Orientation bit per edge class (`+1` keeps the class direction) with the
/// derived vertex order and sign of every tetrahedron.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branching {
    edge_orientation: Vec<i32>,
    orders: Vec<[usize; 4]>,
    signs: Vec<i32>,
}

/// Does the arrow on edge `{a, b}` of `tet` point from `a` to `b`?
fn arrow(tri: &Triangulation, bits: &[i32], tet: usize, a: usize, b: usize) -> bool {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let edge = EDGE_VERTICES.iter().position(|&p| p == (lo, hi)).unwrap();
    let (class, rel) = tri.edge_class_of(tet, edge);
    let low_to_high = rel * bits[class] > 0;
    if a < b {
        low_to_high
    } else {
        !low_to_high
    }
}

/// Vertex order from out-degrees: `order[i]` is the vertex with `i` outgoing
/// arrows, or `None` if the arrows on the tetrahedron are not transitive.
pub fn order_from_arrows(points_to: impl Fn(usize, usize) -> bool) -> Option<[usize; 4]> {
    let mut order = [usize::MAX; 4];
    for v in 0..4 {
        let out = (0..4).filter(|&w| w != v && points_to(v, w)).count();
        if order[out] != usize::MAX {
            return None;
        }
        order[out] = v;
    }
    Some(order)
}

/// `ε = +1` iff the ordered simplex `[v0, v1, v2, v3]` agrees with the
/// orientation sign `orientation` of the tetrahedron's own labelling.
pub fn sign_of_order(order: [usize; 4], orientation: i32) -> i32 {
    let p = Perm4::new(order.map(|v| v as u8)).expect("vertex order is a permutation");
    p.sign() * orientation
}

impl Branching {
    /// Derives vertex orders and signs from per-class orientation bits.
    /// Returns `None` if some face is cyclic.
    pub fn from_edge_orientation(tri: &Triangulation, bits: Vec<i32>) -> Option<Branching> {
        assert_eq!(bits.len(), tri.edge_classes().len());
        let orientation = tri.validate_orientation().ok()?;
        let mut orders = Vec::with_capacity(tri.tet_count());
        let mut signs = Vec::with_capacity(tri.tet_count());
        for (t, &s) in orientation.iter().enumerate() {
            let order = order_from_arrows(|a, b| arrow(tri, &bits, t, a, b))?;
            signs.push(sign_of_order(order, s));
            orders.push(order);
        }
        Some(Branching { edge_orientation: bits, orders, signs })
    }

    pub fn edge_orientation(&self) -> &[i32] {
        &self.edge_orientation
    }

    /// Vertex labels `v0, v1, v2, v3` of tetrahedron `tet` in branching order.
    pub fn order(&self, tet: usize) -> [usize; 4] {
        self.orders[tet]
    }

    pub fn sign(&self, tet: usize) -> i32 {
        self.signs[tet]
    }

    pub fn signs(&self) -> &[i32] {
        &self.signs
    }

    /// Re-checks both defining properties on every face and tetrahedron.
    pub fn is_valid_for(&self, tri: &Triangulation) -> bool {
        if self.edge_orientation.len() != tri.edge_classes().len() || self.orders.len() != tri.tet_count() {
            return false;
        }
        let bits = &self.edge_orientation;
        let faces_ok = tri.face_classes().iter().all(|fc| {
            let (t, f) = fc.sides[0];
            !face_is_cyclic(tri, bits, t, f)
        });
        let tets_ok = (0..tri.tet_count()).all(|t| {
            let order = self.orders[t];
            (0..4).all(|i| {
                let v = order[i];
                (0..4).filter(|&w| w != v && arrow(tri, bits, t, v, w)).count() == i
            })
        });
        faces_ok && tets_ok
    }
}

fn face_is_cyclic(tri: &Triangulation, bits: &[i32], tet: usize, face: usize) -> bool {
    let [a, b, c] = crate::perm::face_vertices(face);
    let ab = arrow(tri, bits, tet, a, b);
    let bc = arrow(tri, bits, tet, b, c);
    let ac = arrow(tri, bits, tet, a, c);
    ab == bc && ac != ab
}

/// `ε_σ` for every tetrahedron: the agreement sign between the branching
/// order and the orientation certificate.
pub fn tet_signs(tri: &Triangulation, branching: &Branching) -> Result<Vec<i32>, TriangulationError> {
    let orientation = tri.validate_orientation()?;
    Ok((0..tri.tet_count()).map(|t| sign_of_order(branching.order(t), orientation[t])).collect())
}

/// Per face class: its three edges as `(class, relative orientation)` for
/// the pairs `ab`, `bc`, `ac` of the face vertices `a < b < c` on one side.
fn face_constraints(tri: &Triangulation) -> Vec<[(usize, i32); 3]> {
    tri.face_classes()
        .iter()
        .map(|fc| {
            let (t, f) = fc.sides[0];
            let [a, b, c] = crate::perm::face_vertices(f);
            let edge = |x: usize, y: usize| crate::perm::edge_index(x, y);
            [tri.edge_class_of(t, edge(a, b)), tri.edge_class_of(t, edge(b, c)), tri.edge_class_of(t, edge(a, c))]
        })
        .collect()
}

/// Searches the orientation bits in lexicographic order (`+1` first),
/// checking each face as soon as all of its edges are oriented.
pub fn find_branching(tri: &Triangulation) -> Option<Branching> {
    if !tri.is_orientable() {
        return None;
    }
    let constraints = face_constraints(tri);
    let edges = tri.edge_classes().len();
    // faces to check once edge class `e` (their largest class) is set
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); edges];
    for (i, c) in constraints.iter().enumerate() {
        let last = c.iter().map(|x| x.0).max().unwrap();
        ready[last].push(i);
    }
    let mut bits = vec![0i32; edges];
    if search(0, &mut bits, &constraints, &ready) {
        Branching::from_edge_orientation(tri, bits)
    } else {
        None
    }
}

fn cyclic(c: &[(usize, i32); 3], bits: &[i32]) -> bool {
    let dir = |(class, rel): (usize, i32)| rel * bits[class] > 0;
    let (ab, bc, ac) = (dir(c[0]), dir(c[1]), dir(c[2]));
    ab == bc && ac != ab
}

fn search(e: usize, bits: &mut [i32], constraints: &[[(usize, i32); 3]], ready: &[Vec<usize>]) -> bool {
    if e == bits.len() {
        return true;
    }
    for choice in [1, -1] {
        bits[e] = choice;
        if ready[e].iter().all(|&f| !cyclic(&constraints[f], bits)) && search(e + 1, bits, constraints, ready) {
            return true;
        }
    }
    bits[e] = 0;
    false
}

/// Result of [`make_orderable`].
#[derive(Debug, Clone)]
pub struct Ordered {
    pub triangulation: Triangulation,
    pub moves: Vec<Move>,
    pub branching: Branching,
}

/// Applies the fewest positive (2,3) moves (at most `max_moves`) after which
/// the triangulation admits a branching.
///
/// Iterative deepening over admissible faces in lexicographic order; states
/// isomorphic to one already explored with at least as much remaining depth
/// are skipped.
pub fn make_orderable(tri: &Triangulation, max_moves: usize) -> Result<Ordered, BranchingError> {
    tri.validate_orientation()?;
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
    for depth in 0..=max_moves {
        let mut path = Vec::new();
        if let Some((t, b)) = deepen(tri, depth, &mut path, &mut seen) {
            return Ok(Ordered { triangulation: t, moves: path, branching: b });
        }
    }
    Err(BranchingError::SearchExhausted { max_moves })
}

fn deepen(
    tri: &Triangulation,
    remaining: usize,
    path: &mut Vec<Move>,
    seen: &mut HashMap<Vec<u32>, usize>,
) -> Option<(Triangulation, Branching)> {
    if let Some(b) = find_branching(tri) {
        return Some((tri.clone(), b));
    }
    if remaining == 0 {
        return None;
    }
    let code = tri.canonical_code(false);
    match seen.get(&code) {
        Some(&r) if r >= remaining => return None,
        _ => {
            seen.insert(code, remaining);
        }
    }
    for (tet, face) in admissible_23_faces(tri) {
        let next = pachner_23(tri, tet, face).expect("admissible face");
        path.push(Move::TwoThree { tet, face });
        if let Some(found) = deepen(&next, remaining - 1, path, seen) {
            return Some(found);
        }
        path.pop();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::perm::face_vertices;

    /// Every branching, by exhausting all 2^E orientation vectors.
    fn brute_force(tri: &Triangulation) -> Vec<Branching> {
        let e = tri.edge_classes().len();
        (0u32..1 << e)
            .filter_map(|mask| {
                let bits = (0..e).map(|i| if mask >> (e - 1 - i) & 1 == 0 { 1 } else { -1 }).collect();
                Branching::from_edge_orientation(tri, bits)
            })
            .collect()
    }

    #[test]
    fn census_orderability() {
        assert!(find_branching(&fixtures::census("m004").unwrap()).is_some());
        for name in ["m003", "s778", "s788"] {
            assert!(find_branching(&fixtures::census(name).unwrap()).is_none(), "{name}");
        }
    }

    #[test]
    fn search_agrees_with_brute_force() {
        for (name, t) in fixtures::all() {
            if t.edge_classes().len() > 14 {
                continue;
            }
            let all = brute_force(&t);
            let found = find_branching(&t);
            assert_eq!(found.is_some(), !all.is_empty(), "{name}");
            if let Some(b) = found {
                // lexicographically first with +1 < -1
                assert_eq!(b, all[0], "{name}");
                assert!(b.is_valid_for(&t));
            }
            for b in &all {
                assert!(b.is_valid_for(&t));
            }
        }
    }

    #[test]
    fn double_tetrahedron_signs_are_opposite() {
        let t = fixtures::s3_double();
        let all = brute_force(&t);
        assert!(!all.is_empty());
        for b in &all {
            assert_eq!(b.signs()[0], -b.signs()[1]);
        }
        let b = find_branching(&t).unwrap();
        assert_eq!(tet_signs(&t, &b).unwrap(), vec![1, -1]);
    }

    #[test]
    fn mirroring_flips_every_sign() {
        let swap = Perm4::transposition(2, 3);
        for (_, t) in fixtures::all() {
            let Ok(o) = make_orderable(&t, DEFAULT_MAX_MOVES) else { continue };
            let (t, b) = (o.triangulation, o.branching);
            let m = t.mirror();
            // carry every arrow across the relabelling (2 3)
            let bits = m
                .edge_classes()
                .iter()
                .map(|c| {
                    let r = c.representative();
                    let (x, y) = EDGE_VERTICES[r.edge];
                    let forward = arrow(&t, b.edge_orientation(), r.tet, swap.apply(x), swap.apply(y));
                    let (_, rel) = m.edge_class_of(r.tet, r.edge);
                    if forward {
                        rel
                    } else {
                        -rel
                    }
                })
                .collect();
            let bm = Branching::from_edge_orientation(&m, bits).unwrap();
            assert!(bm.is_valid_for(&m));
            let flipped: Vec<i32> = b.signs().iter().map(|s| -s).collect();
            assert_eq!(bm.signs(), flipped.as_slice());
        }
    }

    #[test]
    fn two_three_sign_pattern() {
        // For a positive 2-3 move at a face <v1 v2 v3> between σ = <v0 v1 v2 v3>
        // and σ' = <v1 v2 v3 v4>: ε(σ) = ε(σ') = ε(σ1) = -ε(σ2) = ε(σ3),
        // where σi omits vi.
        let mut checked = 0;
        for (_, t) in fixtures::all() {
            let Ok(o) = make_orderable(&t.coherently_oriented().unwrap(), DEFAULT_MAX_MOVES) else { continue };
            let (t, b) = (o.triangulation, o.branching);
            let signs = tet_signs(&t, &b).unwrap();
            let sides = t.face_classes().iter().flat_map(|fc| fc.sides).filter(|&(x, f)| t.gluing(x, f).tet != x);
            for (upper, face) in sides {
                let lower_gluing = t.gluing(upper, face);
                let lower = lower_gluing.tet;
                let pi = lower_gluing.perm;
                if b.order(upper)[0] != face || b.order(lower)[3] != pi.apply(face) {
                    continue;
                }
                let u = pachner_23(&t, upper, face).unwrap();
                let base = t.tet_count() - 2;
                let equator = face_vertices(face);
                let bits = b.edge_orientation().to_vec();
                // arrows on the new tetrahedra, read through the old labels
                let mut new_signs = [0; 3];
                for (i, &xi) in equator.iter().enumerate() {
                    let points_to = |x: usize, y: usize| -> bool {
                        let is_bottom = |v: usize| v == xi;
                        match (is_bottom(x), is_bottom(y)) {
                            (false, false) => arrow(&t, &bits, upper, x, y),
                            // edges at the bottom apex: the new edge and edges of the lower tetrahedron
                            (true, false) => {
                                y != face && arrow(&t, &bits, lower, pi.apply(face), pi.apply(y)) || y == face
                            }
                            (false, true) => x != face && arrow(&t, &bits, lower, pi.apply(x), pi.apply(face)),
                            (true, true) => unreachable!(),
                        }
                    };
                    let order = order_from_arrows(points_to).expect("new tetrahedron is branched");
                    new_signs[i] = sign_of_order(order, u.validate_orientation().unwrap()[base + i]);
                }
                // σ_k omits the equator vertex of rank k (1-based) in the upper order
                let rank = |x: usize| b.order(upper).iter().position(|&v| v == x).unwrap();
                let mut by_rank = [0; 4];
                for (i, &xi) in equator.iter().enumerate() {
                    by_rank[rank(xi)] = new_signs[i];
                }
                let eps = signs[upper];
                assert_eq!(signs[lower], eps);
                assert_eq!(by_rank[1], eps);
                assert_eq!(by_rank[2], -eps);
                assert_eq!(by_rank[3], eps);
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn make_orderable_within_witness_bounds() {
        let m004 = make_orderable(&fixtures::census("m004").unwrap(), DEFAULT_MAX_MOVES).unwrap();
        assert!(m004.moves.is_empty());
        for (name, bound) in [("m003", 5), ("s778", 2), ("s788", 3)] {
            let t = fixtures::census(name).unwrap();
            let o = make_orderable(&t, DEFAULT_MAX_MOVES).unwrap();
            assert!(o.moves.len() <= bound, "{name}: {} moves", o.moves.len());
            assert!(o.branching.is_valid_for(&o.triangulation));
            assert_eq!(o.triangulation.tet_count(), t.tet_count() + o.moves.len());
            // replaying the moves reproduces the triangulation
            let replay = o.moves.iter().fold(t.clone(), |acc, m| m.apply(&acc).unwrap());
            assert_eq!(replay, o.triangulation);
        }
    }

    #[test]
    fn search_exhausted_is_reported() {
        let m003 = fixtures::census("m003").unwrap();
        assert_eq!(make_orderable(&m003, 0).unwrap_err(), BranchingError::SearchExhausted { max_moves: 0 });
    }
}
