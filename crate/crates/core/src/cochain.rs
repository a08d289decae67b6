//! Group cochains valued in the roots of unity `μ_N ⊂ U(1)`.
//!
//! A value `ζ_N^e` is stored as its exponent `e ∈ Z_N`, so products of
//! cochains are sums of exponent tables and the cocycle condition becomes a
//! linear congruence.

use num_integer::Integer;
use rand::Rng;
use serde::Deserialize;
use thiserror::Error;

use crate::group::FiniteGroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CochainError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("exponent table has {found} entries, expected {expected}")]
    WrongSize { expected: usize, found: usize },
    #[error("cochains live on groups of different orders ({0} vs {1})")]
    GroupMismatch(usize, usize),
    #[error("moduli {0} and {1} differ")]
    ModulusMismatch(u32, u32),
    #[error("cochain file syntax error: {0}")]
    Syntax(String),
}

fn reduce(e: i64, n: u32) -> u32 {
    e.rem_euclid(n as i64) as u32
}

/// A 3-cochain `α(g,h,k) = ζ_N^{e(g,h,k)}` on a group of a given order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain3 {
    group_order: usize,
    modulus: u32,
    exps: Vec<u32>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CochainDoc {
    Generator {
        m: usize,
        p: i64,
    },
    Explicit {
        #[serde(rename = "N")]
        modulus: u32,
        exponents: Vec<Vec<Vec<i64>>>,
    },
}

impl Cochain3 {
    pub fn new(group_order: usize, modulus: u32, exps: Vec<u32>) -> Result<Cochain3, CochainError> {
        if modulus == 0 {
            return Err(CochainError::ZeroModulus);
        }
        let expected = group_order.pow(3);
        if exps.len() != expected {
            return Err(CochainError::WrongSize { expected, found: exps.len() });
        }
        let exps = exps.into_iter().map(|e| e % modulus).collect();
        Ok(Cochain3 { group_order, modulus, exps })
    }

    pub fn trivial(group_order: usize, modulus: u32) -> Cochain3 {
        Cochain3 { group_order, modulus, exps: vec![0; group_order.pow(3)] }
    }

    /// The standard generator of `H³(Z_m, U(1)) ≅ Z_m`, raised to the power `p`:
    /// `e(a,b,c) = p·a·(b + c - ((b + c) mod m))` modulo `m²`, with residues in `0..m`.
    pub fn cyclic_generator(m: usize, p: i64) -> Cochain3 {
        assert!(m >= 1);
        let modulus = (m * m) as u32;
        let p = p.rem_euclid(m as i64);
        let mut exps = Vec::with_capacity(m.pow(3));
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let carry = (b + c - (b + c) % m) as i64;
                    exps.push(reduce(p * a as i64 * carry, modulus));
                }
            }
        }
        Cochain3 { group_order: m, modulus, exps }
    }

    /// Reads `{"m": int, "p": int}` (a cyclic generator power) or
    /// `{"N": int, "exponents": [[[e(g,h,k)]]]}`.
    pub fn from_json(text: &str) -> Result<Cochain3, CochainError> {
        let doc: CochainDoc = serde_json::from_str(text).map_err(|e| CochainError::Syntax(e.to_string()))?;
        match doc {
            CochainDoc::Generator { m, p } => {
                if m == 0 {
                    return Err(CochainError::Syntax("m must be positive".into()));
                }
                Ok(Cochain3::cyclic_generator(m, p))
            }
            CochainDoc::Explicit { modulus, exponents } => {
                if modulus == 0 {
                    return Err(CochainError::ZeroModulus);
                }
                let n = exponents.len();
                let mut exps = Vec::with_capacity(n.pow(3));
                for plane in &exponents {
                    if plane.len() != n || plane.iter().any(|row| row.len() != n) {
                        return Err(CochainError::Syntax(format!("exponents must be a {n}x{n}x{n} array")));
                    }
                    exps.extend(plane.iter().flatten().map(|&e| reduce(e, modulus)));
                }
                Cochain3::new(n, modulus, exps)
            }
        }
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    #[inline]
    pub fn exponent(&self, g: usize, h: usize, k: usize) -> u32 {
        let n = self.group_order;
        self.exps[(g * n + h) * n + k]
    }

    /// `α(1,·,·) = α(·,1,·) = α(·,·,1) = 1`.
    pub fn is_normalized(&self, group: &FiniteGroup) -> bool {
        if group.order() != self.group_order {
            return false;
        }
        let e = group.identity();
        group.elements().all(|g| {
            group
                .elements()
                .all(|h| self.exponent(e, g, h) == 0 && self.exponent(g, e, h) == 0 && self.exponent(g, h, e) == 0)
        })
    }

    /// Checks `α(h,k,l)·α(g,hk,l)·α(g,h,k) = α(gh,k,l)·α(g,h,kl)` on all of `G⁴`.
    pub fn is_cocycle(&self, group: &FiniteGroup) -> bool {
        group.order() == self.group_order && self.first_cocycle_violation(group).is_none()
    }

    /// The first quadruple `(g,h,k,l)` violating the cocycle condition.
    pub fn first_cocycle_violation(&self, group: &FiniteGroup) -> Option<(usize, usize, usize, usize)> {
        assert_eq!(group.order(), self.group_order, "cochain and group orders differ");
        let n = self.modulus as u64;
        for g in group.elements() {
            for h in group.elements() {
                let gh = group.mul(g, h);
                for k in group.elements() {
                    let hk = group.mul(h, k);
                    let ghk = self.exponent(g, h, k) as u64;
                    for l in group.elements() {
                        let lhs = self.exponent(h, k, l) as u64 + self.exponent(g, hk, l) as u64 + ghk;
                        let rhs = self.exponent(gh, k, l) as u64 + self.exponent(g, h, group.mul(k, l)) as u64;
                        if lhs % n != rhs % n {
                            return Some((g, h, k, l));
                        }
                    }
                }
            }
        }
        None
    }

    /// The same cochain with values viewed in `μ_M` for a multiple `M` of the modulus.
    pub fn lift(&self, modulus: u32) -> Cochain3 {
        assert!(modulus.is_multiple_of(self.modulus));
        let step = modulus / self.modulus;
        Cochain3 { group_order: self.group_order, modulus, exps: self.exps.iter().map(|&e| e * step).collect() }
    }

    /// Pointwise product; values are moved to `μ_lcm` when the moduli differ.
    pub fn product(&self, other: &Cochain3) -> Result<Cochain3, CochainError> {
        if self.group_order != other.group_order {
            return Err(CochainError::GroupMismatch(self.group_order, other.group_order));
        }
        let l = self.modulus.lcm(&other.modulus);
        let (a, b) = (self.lift(l), other.lift(l));
        let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| (x + y) % l).collect();
        Ok(Cochain3 { group_order: self.group_order, modulus: l, exps })
    }

    /// Pointwise product that refuses to change the modulus.
    pub fn product_same_modulus(&self, other: &Cochain3) -> Result<Cochain3, CochainError> {
        if self.modulus != other.modulus {
            return Err(CochainError::ModulusMismatch(self.modulus, other.modulus));
        }
        self.product(other)
    }

    /// Pointwise inverse.
    pub fn inverse(&self) -> Cochain3 {
        let n = self.modulus;
        Cochain3 { group_order: self.group_order, modulus: n, exps: self.exps.iter().map(|&e| (n - e) % n).collect() }
    }

    /// `(f*α)(g,h,k) = α(f(g), f(h), f(k))` for a homomorphism `f` given by its images.
    pub fn pullback(&self, images: &[usize]) -> Cochain3 {
        let n = images.len();
        let mut exps = Vec::with_capacity(n.pow(3));
        for &a in images {
            for &b in images {
                for &c in images {
                    exps.push(self.exponent(a, b, c));
                }
            }
        }
        Cochain3 { group_order: n, modulus: self.modulus, exps }
    }
}

/// A 2-cochain `β(g,h) = ζ_N^{b(g,h)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain2 {
    group_order: usize,
    modulus: u32,
    exps: Vec<u32>,
}

impl Cochain2 {
    pub fn new(group_order: usize, modulus: u32, exps: Vec<u32>) -> Result<Cochain2, CochainError> {
        if modulus == 0 {
            return Err(CochainError::ZeroModulus);
        }
        let expected = group_order.pow(2);
        if exps.len() != expected {
            return Err(CochainError::WrongSize { expected, found: exps.len() });
        }
        let exps = exps.into_iter().map(|e| e % modulus).collect();
        Ok(Cochain2 { group_order, modulus, exps })
    }

    /// A uniformly random normalized 2-cochain.
    pub fn random_normalized<R: Rng + ?Sized>(group: &FiniteGroup, modulus: u32, rng: &mut R) -> Cochain2 {
        let n = group.order();
        let e = group.identity();
        let mut exps = vec![0; n * n];
        for g in group.elements() {
            for h in group.elements() {
                if g != e && h != e {
                    exps[g * n + h] = rng.gen_range(0..modulus);
                }
            }
        }
        Cochain2 { group_order: n, modulus, exps }
    }

    #[inline]
    pub fn exponent(&self, g: usize, h: usize) -> u32 {
        self.exps[g * self.group_order + h]
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn is_normalized(&self, group: &FiniteGroup) -> bool {
        let e = group.identity();
        group.elements().all(|g| self.exponent(e, g) == 0 && self.exponent(g, e) == 0)
    }

    /// `(δβ)(g,h,k) = β(h,k)·β(gh,k)⁻¹·β(g,hk)·β(g,h)⁻¹`.
    pub fn coboundary(&self, group: &FiniteGroup) -> Cochain3 {
        let n = group.order();
        assert_eq!(n, self.group_order);
        let m = self.modulus as i64;
        let mut exps = Vec::with_capacity(n.pow(3));
        for g in group.elements() {
            for h in group.elements() {
                for k in group.elements() {
                    let e = self.exponent(h, k) as i64 - self.exponent(group.mul(g, h), k) as i64
                        + self.exponent(g, group.mul(h, k)) as i64
                        - self.exponent(g, h) as i64;
                    exps.push(e.rem_euclid(m) as u32);
                }
            }
        }
        Cochain3 { group_order: n, modulus: self.modulus, exps }
    }
}
