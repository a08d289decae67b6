//! Exact arithmetic in the cyclotomic fields `Q(ζ_N)`.
//!
//! An element is stored as a rational coefficient vector over the power basis
//! `1, ζ, ..., ζ^(φ(N)-1)`, reduced modulo the cyclotomic polynomial `Φ_N`.
//! That form is unique, so two elements of the same field are equal exactly
//! when their vectors are. Elements of different fields are compared and
//! combined inside `Q(ζ_L)` with `L = lcm(N, M)`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclotomicError {
    #[error("root-of-unity order must be positive")]
    ZeroOrder,
    #[error("expected {expected} coefficients for N = {order}, found {found}")]
    WrongLength { order: u32, expected: usize, found: usize },
    #[error("bad coefficient: {0}")]
    BadCoefficient(String),
}

/// Reduction data for one field: `powers[k]` is `ζ^k` in the power basis.
#[derive(Debug)]
struct Field {
    degree: usize,
    powers: Vec<Vec<i64>>,
}

fn field(order: u32) -> Arc<Field> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&order) {
        return f.clone();
    }
    let phi = cyclotomic_polynomial(order);
    let degree = phi.len() - 1;
    let mut powers = Vec::with_capacity(order as usize);
    let mut current = vec![0i64; degree];
    current[0] = 1;
    if degree == 0 {
        unreachable!("cyclotomic polynomials have positive degree");
    }
    for _ in 0..order {
        powers.push(current.clone());
        // multiply by x, then cancel the x^degree term with the monic Φ_N
        let top = current[degree - 1];
        for i in (1..degree).rev() {
            current[i] = current[i - 1];
        }
        current[0] = 0;
        if top != 0 {
            for i in 0..degree {
                current[i] -= top * phi[i];
            }
        }
    }
    let f = Arc::new(Field { degree, powers });
    cache.lock().unwrap().insert(order, f.clone());
    f
}

/// Coefficients of `Φ_n`, constant term first.
///
/// Computed as `(x^n - 1)` divided by `Φ_d` for every proper divisor `d` of `n`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1);
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = divide_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for j in 0..=dd {
            rem[i + j] -= c * den[j];
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Euler's totient, the degree of `Q(ζ_n)`.
pub fn totient(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

/// An exact element of `Q(ζ_N)`.
#[derive(Debug, Clone)]
pub struct CyclotomicNumber {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl CyclotomicNumber {
    pub fn zero(order: u32) -> CyclotomicNumber {
        assert!(order >= 1, "root-of-unity order must be positive");
        let f = field(order);
        CyclotomicNumber { order, coeffs: vec![BigRational::zero(); f.degree] }
    }

    pub fn one(order: u32) -> CyclotomicNumber {
        Self::from_rational(order, BigRational::one())
    }

    pub fn from_rational(order: u32, q: BigRational) -> CyclotomicNumber {
        let mut z = Self::zero(order);
        z.coeffs[0] = q;
        z
    }

    pub fn from_integer(order: u32, n: i64) -> CyclotomicNumber {
        Self::from_rational(order, BigRational::from_integer(n.into()))
    }

    /// `ζ_N^k`, with `k` reduced modulo `N`.
    pub fn root_of_unity(order: u32, k: i64) -> CyclotomicNumber {
        assert!(order >= 1, "root-of-unity order must be positive");
        let f = field(order);
        let k = k.rem_euclid(order as i64) as usize;
        let coeffs = f.powers[k].iter().map(|&c| BigRational::from_integer(c.into())).collect();
        CyclotomicNumber { order, coeffs }
    }

    /// `Σ_k counts[k]·ζ_N^k` for a histogram of exponents `0..N`.
    pub fn from_exponent_counts(order: u32, counts: &[u64]) -> CyclotomicNumber {
        assert_eq!(counts.len(), order as usize);
        let f = field(order);
        let mut acc = vec![0i128; f.degree];
        for (k, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (a, &p) in acc.iter_mut().zip(&f.powers[k]) {
                *a += c as i128 * p as i128;
            }
        }
        let coeffs = acc.into_iter().map(|a| BigRational::from_integer(BigInt::from(a))).collect();
        CyclotomicNumber { order, coeffs }
    }

    /// Builds an element from an already reduced coefficient vector.
    pub fn from_coeffs(order: u32, coeffs: Vec<BigRational>) -> Result<CyclotomicNumber, CyclotomicError> {
        if order == 0 {
            return Err(CyclotomicError::ZeroOrder);
        }
        let degree = field(order).degree;
        if coeffs.len() != degree {
            return Err(CyclotomicError::WrongLength { order, expected: degree, found: coeffs.len() });
        }
        Ok(CyclotomicNumber { order, coeffs })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational number, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// The same number as an element of `Q(ζ_L)`; `L` must be a multiple of the order.
    pub fn lift(&self, order: u32) -> CyclotomicNumber {
        assert!(order.is_multiple_of(self.order), "cannot embed Q(ζ_{}) into Q(ζ_{order})", self.order);
        if order == self.order {
            return self.clone();
        }
        let step = (order / self.order) as usize;
        let target = field(order);
        let mut coeffs = vec![BigRational::zero(); target.degree];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (out, &p) in coeffs.iter_mut().zip(&target.powers[i * step]) {
                if p != 0 {
                    *out += c * BigRational::from_integer(p.into());
                }
            }
        }
        CyclotomicNumber { order, coeffs }
    }

    fn aligned(&self, other: &CyclotomicNumber) -> (CyclotomicNumber, CyclotomicNumber) {
        let l = self.order.lcm(&other.order);
        (self.lift(l), other.lift(l))
    }

    pub fn scale(&self, q: &BigRational) -> CyclotomicNumber {
        CyclotomicNumber { order: self.order, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Complex conjugation, `ζ ↦ ζ⁻¹`.
    pub fn conjugate(&self) -> CyclotomicNumber {
        let f = field(self.order);
        let n = self.order as usize;
        let mut coeffs = vec![BigRational::zero(); f.degree];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (out, &p) in coeffs.iter_mut().zip(&f.powers[(n - i) % n]) {
                if p != 0 {
                    *out += c * BigRational::from_integer(p.into());
                }
            }
        }
        CyclotomicNumber { order: self.order, coeffs }
    }

    /// Floating-point value; each basis term is rounded once, well under 1e-12.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / n;
                let r = c.to_f64().unwrap_or(f64::NAN);
                Complex64::new(r * theta.cos(), r * theta.sin())
            })
            .sum()
    }

    /// Float rendering `a+bi` with 10 significant digits.
    pub fn approx_string(&self) -> String {
        format_complex(self.to_complex())
    }

    fn add_same(&self, other: &CyclotomicNumber) -> CyclotomicNumber {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicNumber { order: self.order, coeffs }
    }

    fn mul_same(&self, other: &CyclotomicNumber) -> CyclotomicNumber {
        let f = field(self.order);
        let n = self.order as usize;
        let mut folded = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    folded[(i + j) % n] += a * b;
                }
            }
        }
        let mut coeffs = vec![BigRational::zero(); f.degree];
        for (k, c) in folded.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (out, &p) in coeffs.iter_mut().zip(&f.powers[k]) {
                if p != 0 {
                    *out += c * BigRational::from_integer(p.into());
                }
            }
        }
        CyclotomicNumber { order: self.order, coeffs }
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = self.aligned(other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for CyclotomicNumber {}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        if self.order == rhs.order {
            self.add_same(rhs)
        } else {
            let (a, b) = self.aligned(rhs);
            a.add_same(&b)
        }
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        if self.order == rhs.order {
            self.mul_same(rhs)
        } else {
            let (a, b) = self.aligned(rhs);
            a.mul_same(&b)
        }
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self + &(-rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}

/// Exact rendering: a rational when the value is rational, otherwise a
/// polynomial in `z = exp(2πi/N)`, e.g. `1/2 + 3*z^2 (z = exp(2πi/5))`.
impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
        }
        write!(f, " (z = exp(2πi/{}))", self.order)
    }
}

/// `x` with 10 significant digits, trailing zeros trimmed.
pub fn format_significant(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { format!("{x}") };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (9 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// `a+bi` form; components below 1e-10 of the modulus (or absolute) are dropped.
pub fn format_complex(z: Complex64) -> String {
    let cutoff = 1e-10 * z.norm().max(1.0);
    let re = if z.re.abs() < cutoff { 0.0 } else { z.re };
    let im = if z.im.abs() < cutoff { 0.0 } else { z.im };
    match (re == 0.0, im == 0.0) {
        (_, true) => format_significant(re),
        (true, false) => format!("{}i", format_significant(im)),
        (false, false) => {
            let sign = if im < 0.0 { "-" } else { "+" };
            format!("{}{}{}i", format_significant(re), sign, format_significant(im.abs()))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicDoc {
    #[serde(rename = "N")]
    order: u32,
    coeffs: Vec<[serde_json::Value; 2]>,
}

fn int_to_json(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(n.to_string()),
    }
}

fn int_from_json(v: &serde_json::Value) -> Result<BigInt, CyclotomicError> {
    match v {
        serde_json::Value::Number(n) => {
            n.as_i64().map(BigInt::from).ok_or_else(|| CyclotomicError::BadCoefficient(format!("not an integer: {n}")))
        }
        serde_json::Value::String(s) => {
            s.parse().map_err(|_| CyclotomicError::BadCoefficient(format!("not an integer: {s:?}")))
        }
        other => Err(CyclotomicError::BadCoefficient(format!("not an integer: {other}"))),
    }
}

impl CyclotomicNumber {
    /// `{"N": int, "coeffs": [[num, den], ...]}`; integers too large for i64 become decimal strings.
    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = CyclotomicDoc {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| [int_to_json(c.numer()), int_to_json(c.denom())]).collect(),
        };
        serde_json::to_value(doc).expect("cyclotomic document serializes")
    }

    pub fn from_json_value(value: &serde_json::Value) -> Result<CyclotomicNumber, CyclotomicError> {
        let doc: CyclotomicDoc =
            serde_json::from_value(value.clone()).map_err(|e| CyclotomicError::BadCoefficient(e.to_string()))?;
        let coeffs = doc
            .coeffs
            .iter()
            .map(|[n, d]| {
                let d = int_from_json(d)?;
                if d.is_zero() {
                    return Err(CyclotomicError::BadCoefficient("zero denominator".into()));
                }
                Ok(BigRational::new(int_from_json(n)?, d))
            })
            .collect::<Result<Vec<_>, _>>()?;
        CyclotomicNumber::from_coeffs(doc.order, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(25).len(), 21);
        for n in 1..=40 {
            assert_eq!(cyclotomic_polynomial(n).len() - 1, totient(n));
        }
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        let mut s = CyclotomicNumber::zero(25);
        for k in 0..25 {
            s = &s + &CyclotomicNumber::root_of_unity(25, k);
        }
        assert!(s.is_zero());
    }

    #[test]
    fn golden_ratio_conjugate() {
        let z = &CyclotomicNumber::root_of_unity(5, 1) + &CyclotomicNumber::root_of_unity(5, 4);
        // ζ + ζ⁴ = -1 - ζ² - ζ³
        assert_eq!(z.coeffs(), &[q(-1, 1), q(0, 1), q(-1, 1), q(-1, 1)]);
        let c = z.to_complex();
        assert!((c.re - 0.6180339887498949).abs() < 1e-12);
        assert!(c.im.abs() < 1e-12);
        assert_eq!(z.conjugate(), z);
    }

    #[test]
    fn norm_of_one_plus_zeta5_is_real() {
        let z = &CyclotomicNumber::one(5) + &CyclotomicNumber::root_of_unity(5, 1);
        let n = &z.conjugate() * &z;
        assert_eq!(n.conjugate(), n);
        let expected = 2.0 + 2.0 * (2.0 * std::f64::consts::PI / 5.0).cos();
        assert!((n.to_complex().re - expected).abs() < 1e-12);
        // 2 + ζ + ζ⁴
        let exact = &CyclotomicNumber::from_integer(5, 2)
            + &(&CyclotomicNumber::root_of_unity(5, 1) + &CyclotomicNumber::root_of_unity(5, 4));
        assert_eq!(n, exact);
    }

    #[test]
    fn mixed_orders_lift_to_lcm() {
        // ζ_4 · ζ_6 = ζ_12^(3+2)
        let p = &CyclotomicNumber::root_of_unity(4, 1) * &CyclotomicNumber::root_of_unity(6, 1);
        assert_eq!(p.order(), 12);
        assert_eq!(p, CyclotomicNumber::root_of_unity(12, 5));
        // ζ_3 embedded in Q(ζ_9)
        assert_eq!(CyclotomicNumber::root_of_unity(3, 1), CyclotomicNumber::root_of_unity(9, 3));
        assert_eq!(CyclotomicNumber::root_of_unity(2, 1), CyclotomicNumber::from_integer(7, -1));
    }

    #[test]
    fn exponent_counts_match_sums() {
        let counts = [2u64, 0, 1, 0, 3];
        let mut s = CyclotomicNumber::zero(5);
        for (k, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                s = &s + &CyclotomicNumber::root_of_unity(5, k as i64);
            }
        }
        assert_eq!(CyclotomicNumber::from_exponent_counts(5, &counts), s);
    }

    #[test]
    fn display_and_json() {
        assert_eq!(CyclotomicNumber::one(25).to_string(), "1");
        assert_eq!(CyclotomicNumber::from_rational(9, q(1, 3)).to_string(), "1/3");
        let z = &CyclotomicNumber::from_rational(5, q(1, 2)) - &CyclotomicNumber::root_of_unity(5, 2).scale(&q(3, 1));
        assert_eq!(z.to_string(), "1/2 - 3*z^2 (z = exp(2πi/5))");
        let v = z.to_json_value();
        assert_eq!(v, serde_json::json!({"N": 5, "coeffs": [[1, 2], [0, 1], [-3, 1], [0, 1]]}));
        assert_eq!(CyclotomicNumber::from_json_value(&v).unwrap(), z);
        assert!(CyclotomicNumber::from_json_value(&serde_json::json!({"N": 5, "coeffs": [[1, 2]]})).is_err());
        assert!(CyclotomicNumber::from_json_value(&serde_json::json!({"N": 1, "coeffs": [[1, 0]]})).is_err());
    }

    #[test]
    fn float_rendering() {
        assert_eq!(format_significant(0.6180339887498949), "0.6180339887");
        assert_eq!(format_significant(-6.0), "-6");
        assert_eq!(format_significant(1234.5678901234), "1234.56789");
        assert_eq!(format_complex(Complex64::new(3.618033988749895, 1.902113032590307)), "3.618033989+1.902113033i");
        assert_eq!(format_complex(Complex64::new(1e-16, -1.7320508075688772)), "-1.732050808i");
        assert_eq!(format_complex(Complex64::new(-6.0, 3e-15)), "-6");
    }
}
