//! Finite groups given by multiplication tables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group must have at least one element")]
    Empty,
    #[error("multiplication table is not {0}x{0} with entries below {0}")]
    BadTable(usize),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("group table syntax error: {0}")]
    Syntax(String),
}

/// Above this order, associativity is checked on a random sample of triples.
const FULL_ASSOCIATIVITY_LIMIT: usize = 24;
const ASSOCIATIVITY_SAMPLES: usize = 20_000;

/// A finite group on elements `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

#[derive(Deserialize)]
struct GroupDoc {
    table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Validates a multiplication table, `table[g][h] = g·h`.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<FiniteGroup, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if rows.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(GroupError::BadTable(n));
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let at = |g: usize, h: usize| table[g * n + h];
        let identity =
            (0..n).find(|&e| (0..n).all(|g| at(e, g) == g && at(g, e) == g)).ok_or(GroupError::NoIdentity)?;
        let inverses = (0..n)
            .map(|g| (0..n).find(|&h| at(g, h) == identity && at(h, g) == identity).ok_or(GroupError::NoInverse(g)))
            .collect::<Result<Vec<_>, _>>()?;
        let check = |g: usize, h: usize, k: usize| {
            if at(at(g, h), k) != at(g, at(h, k)) {
                Err(GroupError::NotAssociative(g, h, k))
            } else {
                Ok(())
            }
        };
        if n <= FULL_ASSOCIATIVITY_LIMIT {
            for g in 0..n {
                for h in 0..n {
                    for k in 0..n {
                        check(g, h, k)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..ASSOCIATIVITY_SAMPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(FiniteGroup { order: n, table, identity, inverses })
    }

    /// Reads `{"table": [[...], ...]}`.
    pub fn from_json(text: &str) -> Result<FiniteGroup, GroupError> {
        let doc: GroupDoc = serde_json::from_str(text).map_err(|e| GroupError::Syntax(e.to_string()))?;
        FiniteGroup::from_table(doc.table)
    }

    /// The additive cyclic group `Z_m`; element `g` is the residue `g`.
    pub fn cyclic(m: usize) -> FiniteGroup {
        assert!(m >= 1, "cyclic group order must be positive");
        let table = (0..m).flat_map(|g| (0..m).map(move |h| (g + h) % m)).collect();
        let inverses = (0..m).map(|g| (m - g) % m).collect();
        FiniteGroup { order: m, table, identity: 0, inverses }
    }

    /// The dihedral group of order `2n`: element `2i + s` is `r^i f^s`
    /// with `f r f = r⁻¹`.
    pub fn dihedral(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        let m = 2 * n;
        let decode = |x: usize| (x / 2, x % 2);
        let mut rows = vec![vec![0; m]; m];
        for (a, row) in rows.iter_mut().enumerate() {
            for (b, out) in row.iter_mut().enumerate() {
                let (i, s) = decode(a);
                let (j, t) = decode(b);
                // r^i f^s r^j f^t = r^(i ± j) f^(s+t)
                let rot = if s == 0 { (i + j) % n } else { (i + n - j) % n };
                *out = 2 * rot + (s + t) % 2;
            }
        }
        FiniteGroup::from_table(rows).expect("dihedral table is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order + h]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn pow(&self, g: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(g) } else { g };
        (0..e.unsigned_abs()).fold(self.identity, |acc, _| self.mul(acc, base))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|g| self.elements().all(|h| self.mul(g, h) == self.mul(h, g)))
    }
}
