//! Colorings, tetrahedron symbols and the state-sum invariant.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::branching::{find_branching, make_orderable, Branching, BranchingError};
use crate::cochain::Cochain3;
use crate::cyclotomic::CyclotomicNumber;
use crate::group::FiniteGroup;
use crate::pachner::Move;
use crate::perm::{edge_index, face_vertices};
use crate::triangulation::{Triangulation, TriangulationError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StateSumError {
    #[error("triangulation is not orientable")]
    NonOrientable,
    #[error("cochain lives on a group of order {cochain}, not {group}")]
    GroupMismatch { group: usize, cochain: usize },
    #[error("cochain is not normalized")]
    NotNormalized,
    #[error("cochain fails the cocycle condition at ({0}, {1}, {2}, {3})")]
    NotACocycle(usize, usize, usize, usize),
    #[error("no orderable triangulation within {max_moves} positive 2-3 moves")]
    SearchExhausted { max_moves: usize },
    #[error(transparent)]
    Triangulation(TriangulationError),
}

impl From<BranchingError> for StateSumError {
    fn from(e: BranchingError) -> Self {
        match e {
            BranchingError::SearchExhausted { max_moves } => StateSumError::SearchExhausted { max_moves },
            BranchingError::Triangulation(TriangulationError::NonOrientable) => StateSumError::NonOrientable,
            BranchingError::Triangulation(t) => StateSumError::Triangulation(t),
        }
    }
}

/// One group element per edge class, read along the class direction.
pub type Coloring = Vec<usize>;

/// A face's edges `ab`, `bc`, `ac` (vertices `a < b < c` on one side) as
/// `(class, relative orientation)`; a coloring must satisfy
/// `φ(a→b)·φ(b→c) = φ(a→c)`.
type FaceSlots = [(usize, i32); 3];

fn face_slots(tri: &Triangulation) -> Vec<FaceSlots> {
    tri.face_classes()
        .iter()
        .map(|fc| {
            let (t, f) = fc.sides[0];
            let [a, b, c] = face_vertices(f);
            [
                tri.edge_class_of(t, edge_index(a, b)),
                tri.edge_class_of(t, edge_index(b, c)),
                tri.edge_class_of(t, edge_index(a, c)),
            ]
        })
        .collect()
}

struct Enumerator<'a> {
    group: &'a FiniteGroup,
    faces: Vec<FaceSlots>,
    /// faces touching each class
    incident: Vec<Vec<usize>>,
    order: Vec<usize>,
    colors: Vec<Option<usize>>,
    trail: Vec<usize>,
}

impl<'a> Enumerator<'a> {
    fn new(tri: &Triangulation, group: &'a FiniteGroup) -> Self {
        let faces = face_slots(tri);
        let classes = tri.edge_classes().len();
        let mut incident = vec![Vec::new(); classes];
        for (i, slots) in faces.iter().enumerate() {
            for &(c, _) in slots {
                if !incident[c].contains(&i) {
                    incident[c].push(i);
                }
            }
        }
        let mut order: Vec<usize> = (0..classes).collect();
        order.sort_by_key(|&c| (std::cmp::Reverse(incident[c].len()), c));
        Enumerator { group, faces, incident, order, colors: vec![None; classes], trail: Vec::new() }
    }

    fn slot_color(&self, (class, rel): (usize, i32)) -> Option<usize> {
        self.colors[class].map(|g| if rel > 0 { g } else { self.group.inv(g) })
    }

    fn assign(&mut self, class: usize, g: usize) {
        self.colors[class] = Some(g);
        self.trail.push(class);
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let c = self.trail.pop().unwrap();
            self.colors[c] = None;
        }
    }

    /// Forces every face with one open slot; false on a contradiction.
    fn propagate(&mut self, start: usize) -> bool {
        let g = self.group;
        let mut queue = vec![start];
        while let Some(class) = queue.pop() {
            for fi in self.incident[class].clone() {
                let slots = self.faces[fi];
                let vals = slots.map(|s| self.slot_color(s));
                match vals {
                    [Some(ab), Some(bc), Some(ac)] => {
                        if g.mul(ab, bc) != ac {
                            return false;
                        }
                    }
                    _ => {
                        let open: Vec<usize> = (0..3).filter(|&i| vals[i].is_none()).collect();
                        if open.len() != 1 {
                            continue;
                        }
                        let i = open[0];
                        // a class filling two slots counts as open twice
                        if slots.iter().filter(|s| s.0 == slots[i].0).count() > 1 {
                            continue;
                        }
                        let forced = match i {
                            0 => g.mul(vals[2].unwrap(), g.inv(vals[1].unwrap())),
                            1 => g.mul(g.inv(vals[0].unwrap()), vals[2].unwrap()),
                            _ => g.mul(vals[0].unwrap(), vals[1].unwrap()),
                        };
                        let (c, rel) = slots[i];
                        self.assign(c, if rel > 0 { forced } else { g.inv(forced) });
                        queue.push(c);
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(&[usize])) {
        let Some(&class) = self.order[depth..].iter().find(|&&c| self.colors[c].is_none()) else {
            let coloring: Vec<usize> = self.colors.iter().map(|c| c.unwrap()).collect();
            visit(&coloring);
            return;
        };
        let next = self.order.iter().position(|&c| c == class).unwrap();
        for g in self.group.elements() {
            let mark = self.trail.len();
            self.assign(class, g);
            if self.propagate(class) {
                self.run(next + 1, visit);
            }
            self.undo_to(mark);
        }
    }
}

/// Calls `visit` on every coloring of `tri` by `group`, in a fixed order.
pub fn for_each_coloring(tri: &Triangulation, group: &FiniteGroup, mut visit: impl FnMut(&[usize])) {
    let mut e = Enumerator::new(tri, group);
    if e.colors.is_empty() {
        visit(&[]);
        return;
    }
    e.run(0, &mut visit);
}

pub fn enumerate_colorings(tri: &Triangulation, group: &FiniteGroup) -> Vec<Coloring> {
    let mut out = Vec::new();
    for_each_coloring(tri, group, |c| out.push(c.to_vec()));
    out
}

/// Does `coloring` satisfy every face relation?
pub fn is_coloring(tri: &Triangulation, group: &FiniteGroup, coloring: &[usize]) -> bool {
    coloring.len() == tri.edge_classes().len()
        && face_slots(tri).iter().all(|slots| {
            let [ab, bc, ac] = slots.map(|(c, rel)| if rel > 0 { coloring[c] } else { group.inv(coloring[c]) });
            group.mul(ab, bc) == ac
        })
}

/// The group element carried by the edge `x → y` of tetrahedron `tet`.
fn edge_color(tri: &Triangulation, group: &FiniteGroup, coloring: &[usize], tet: usize, x: usize, y: usize) -> usize {
    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
    let (class, rel) = tri.edge_class_of(tet, edge_index(lo, hi));
    let along = if rel > 0 { coloring[class] } else { group.inv(coloring[class]) };
    if x < y {
        along
    } else {
        group.inv(along)
    }
}

/// Exponent `ε·e(g,h,k)` of the symbol of a colored tetrahedron, with
/// `g, h, k` read along `v0→v1`, `v1→v2`, `v2→v3`.
pub fn symbol_exponent(
    tri: &Triangulation,
    branching: &Branching,
    tet: usize,
    group: &FiniteGroup,
    coloring: &[usize],
    alpha: &Cochain3,
) -> i64 {
    let [v0, v1, v2, v3] = branching.order(tet);
    let g = edge_color(tri, group, coloring, tet, v0, v1);
    let h = edge_color(tri, group, coloring, tet, v1, v2);
    let k = edge_color(tri, group, coloring, tet, v2, v3);
    branching.sign(tet) as i64 * alpha.exponent(g, h, k) as i64
}

/// The symbol `W(σ, φ) = α(g,h,k)^ε` as an element of `Q(ζ_N)`.
pub fn symbol(
    tri: &Triangulation,
    branching: &Branching,
    tet: usize,
    group: &FiniteGroup,
    coloring: &[usize],
    alpha: &Cochain3,
) -> CyclotomicNumber {
    let e = symbol_exponent(tri, branching, tet, group, coloring, alpha);
    CyclotomicNumber::root_of_unity(alpha.modulus(), e)
}

fn check_inputs(tri: &Triangulation, group: &FiniteGroup, alpha: &Cochain3) -> Result<(), StateSumError> {
    if group.order() != alpha.group_order() {
        return Err(StateSumError::GroupMismatch { group: group.order(), cochain: alpha.group_order() });
    }
    if !tri.is_orientable() {
        return Err(StateSumError::NonOrientable);
    }
    if !alpha.is_normalized(group) {
        return Err(StateSumError::NotNormalized);
    }
    if let Some((g, h, k, l)) = alpha.first_cocycle_violation(group) {
        return Err(StateSumError::NotACocycle(g, h, k, l));
    }
    Ok(())
}

/// `|G|^{-a} Σ_φ Π_σ W(σ, φ)` on an already branched triangulation, and
/// the number of colorings.
pub fn state_sum(
    tri: &Triangulation,
    branching: &Branching,
    group: &FiniteGroup,
    alpha: &Cochain3,
) -> (CyclotomicNumber, usize) {
    let n = alpha.modulus();
    let mut counts = vec![0u64; n as usize];
    let mut colorings = 0;
    for_each_coloring(tri, group, |phi| {
        let total: i64 = (0..tri.tet_count()).map(|t| symbol_exponent(tri, branching, t, group, phi, alpha)).sum();
        counts[total.rem_euclid(n as i64) as usize] += 1;
        colorings += 1;
    });
    let sum = CyclotomicNumber::from_exponent_counts(n, &counts);
    let a = tri.interior_vertex_count() as u32;
    let prefactor = BigRational::new(BigInt::from(1), BigInt::from(group.order()).pow(a));
    (sum.scale(&prefactor), colorings)
}

/// Result of [`invariant`].
#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub value: CyclotomicNumber,
    /// Positive 2-3 moves applied before a branching was found.
    pub moves: Vec<Move>,
    pub colorings: usize,
    pub interior_vertices: usize,
}

/// The invariant of an oriented triangulation for a normalized 3-cocycle,
/// retriangulating with up to `max_moves` positive 2-3 moves when the
/// given triangulation has no branching.
pub fn invariant(
    tri: &Triangulation,
    group: &FiniteGroup,
    alpha: &Cochain3,
    max_moves: usize,
) -> Result<InvariantReport, StateSumError> {
    check_inputs(tri, group, alpha)?;
    let (branched, branching, moves) = match find_branching(tri) {
        Some(b) => (tri.clone(), b, Vec::new()),
        None => {
            let o = make_orderable(tri, max_moves)?;
            (o.triangulation, o.branching, o.moves)
        }
    };
    let (value, colorings) = state_sum(&branched, &branching, group, alpha);
    Ok(InvariantReport { value, moves, colorings, interior_vertices: branched.interior_vertex_count() })
}
