//! Permutations of the four vertex labels of a tetrahedron.

use std::fmt;

/// A permutation of `{0, 1, 2, 3}` stored as its image list.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    /// Builds a permutation from its image list, or `None` if the list is not a bijection.
    pub fn new(images: [u8; 4]) -> Option<Perm4> {
        let mut seen = [false; 4];
        for &i in &images {
            if i > 3 || seen[i as usize] {
                return None;
            }
            seen[i as usize] = true;
        }
        Some(Perm4(images))
    }

    /// The transposition exchanging `a` and `b`.
    pub fn transposition(a: usize, b: usize) -> Perm4 {
        let mut images = [0, 1, 2, 3];
        images.swap(a, b);
        Perm4(images)
    }

    /// All 24 permutations in lexicographic order of their image lists.
    pub fn all() -> impl Iterator<Item = Perm4> {
        (0..4u8).flat_map(|a| {
            (0..4u8)
                .flat_map(move |b| (0..4u8).flat_map(move |c| (0..4u8).filter_map(move |d| Perm4::new([a, b, c, d]))))
        })
    }

    #[inline]
    pub fn apply(self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(self) -> [u8; 4] {
        self.0
    }

    pub fn inverse(self) -> Perm4 {
        let mut inv = [0u8; 4];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm4(inv)
    }

    /// `self.then(other)` applies `self` first: `i -> other(self(i))`.
    pub fn then(self, other: Perm4) -> Perm4 {
        Perm4([
            other.0[self.0[0] as usize],
            other.0[self.0[1] as usize],
            other.0[self.0[2] as usize],
            other.0[self.0[3] as usize],
        ])
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(self) -> i32 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_even(self) -> bool {
        self.sign() == 1
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Edge `e` of a tetrahedron joins the vertex pair `EDGE_VERTICES[e]`.
pub const EDGE_VERTICES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index of the edge joining vertices `a` and `b` (in either order).
pub fn edge_index(a: usize, b: usize) -> usize {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    match (lo, hi) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("no edge joins vertex {a} to vertex {b}"),
    }
}

/// Vertices of face `f` (the face opposite vertex `f`) in increasing order.
pub fn face_vertices(f: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut k = 0;
    for v in 0..4 {
        if v != f {
            out[k] = v;
            k += 1;
        }
    }
    out
}
