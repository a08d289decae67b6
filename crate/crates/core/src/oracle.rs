//! Reduced state-sum formulas: a brute-force sum over a few free group
//! variables subject to word relations, with a product of cocycle factors.

use serde::Deserialize;
use thiserror::Error;

use crate::cochain::Cochain3;
use crate::cyclotomic::CyclotomicNumber;
use crate::group::FiniteGroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("malformed word {word:?}: {reason}")]
    MalformedWord { word: String, reason: String },
    #[error("factor sign must be 1 or -1, got {0}")]
    BadSign(i64),
    #[error("formula syntax error: {0}")]
    Syntax(String),
}

/// A product of powers of variables, e.g. `b*c*b^-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word(Vec<(usize, i64)>);

impl Word {
    pub fn parse(text: &str, vars: &[String]) -> Result<Word, FormulaError> {
        let bad = |reason: &str| FormulaError::MalformedWord { word: text.to_string(), reason: reason.to_string() };
        let mut letters = Vec::new();
        for token in text.split('*') {
            let token = token.trim();
            let (name, power) = match token.split_once('^') {
                Some((n, p)) => (n.trim(), p.trim().parse::<i64>().map_err(|_| bad("exponent is not an integer"))?),
                None => (token, 1),
            };
            if name.is_empty() {
                return Err(bad("empty letter"));
            }
            let var = vars.iter().position(|v| v == name).ok_or_else(|| bad(&format!("unknown variable {name:?}")))?;
            letters.push((var, power));
        }
        Ok(Word(letters))
    }

    pub fn evaluate(&self, group: &FiniteGroup, values: &[usize]) -> usize {
        self.0.iter().fold(group.identity(), |acc, &(var, power)| group.mul(acc, group.pow(values[var], power)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub args: [Word; 3],
    pub sign: i32,
}

/// `Σ_{x satisfying constraints} Π α(w1, w2, w3)^sign`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedFormula {
    pub name: String,
    pub vars: Vec<String>,
    pub constraints: Vec<Word>,
    pub factors: Vec<Factor>,
}

#[derive(Deserialize)]
struct FactorDoc {
    args: [String; 3],
    sign: i64,
}

#[derive(Deserialize)]
struct FormulaDoc {
    #[serde(default)]
    name: String,
    vars: Vec<String>,
    constraints: Vec<String>,
    factors: Vec<FactorDoc>,
}

impl ReducedFormula {
    pub fn from_json(text: &str) -> Result<ReducedFormula, FormulaError> {
        let doc: FormulaDoc = serde_json::from_str(text).map_err(|e| FormulaError::Syntax(e.to_string()))?;
        let constraints = doc.constraints.iter().map(|w| Word::parse(w, &doc.vars)).collect::<Result<Vec<_>, _>>()?;
        let factors = doc
            .factors
            .iter()
            .map(|f| {
                let sign = match f.sign {
                    1 => 1,
                    -1 => -1,
                    s => return Err(FormulaError::BadSign(s)),
                };
                let [a, b, c] = &f.args;
                let args = [Word::parse(a, &doc.vars)?, Word::parse(b, &doc.vars)?, Word::parse(c, &doc.vars)?];
                Ok(Factor { args, sign })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ReducedFormula { name: doc.name, vars: doc.vars, constraints, factors })
    }

    /// Number of variable assignments satisfying every constraint.
    pub fn solution_count(&self, group: &FiniteGroup) -> usize {
        let mut count = 0;
        self.for_each_solution(group, |_| count += 1);
        count
    }

    fn for_each_solution(&self, group: &FiniteGroup, mut visit: impl FnMut(&[usize])) {
        let n = self.vars.len();
        let mut values = vec![0usize; n];
        loop {
            if self.constraints.iter().all(|w| w.evaluate(group, &values) == group.identity()) {
                visit(&values);
            }
            // odometer increment
            let mut i = 0;
            loop {
                if i == n {
                    return;
                }
                values[i] += 1;
                if values[i] < group.order() {
                    break;
                }
                values[i] = 0;
                i += 1;
            }
        }
    }

    /// Every solution with the exponent of its summand, modulo `alpha.modulus()`.
    pub fn weights(&self, group: &FiniteGroup, alpha: &Cochain3) -> Vec<(Vec<usize>, u32)> {
        assert_eq!(group.order(), alpha.group_order(), "cocycle is defined on a group of another order");
        let n = alpha.modulus() as i64;
        let mut out = Vec::new();
        self.for_each_solution(group, |values| {
            let mut total: i64 = 0;
            for f in &self.factors {
                let [a, b, c] = &f.args;
                let e = alpha.exponent(a.evaluate(group, values), b.evaluate(group, values), c.evaluate(group, values));
                total += f.sign as i64 * e as i64;
            }
            out.push((values.to_vec(), total.rem_euclid(n) as u32));
        });
        out
    }

    pub fn evaluate(&self, group: &FiniteGroup, alpha: &Cochain3) -> CyclotomicNumber {
        let n = alpha.modulus();
        let mut counts = vec![0u64; n as usize];
        for (_, w) in self.weights(group, alpha) {
            counts[w as usize] += 1;
        }
        CyclotomicNumber::from_exponent_counts(n, &counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn word_parsing() {
        let vars = vec!["b".to_string(), "c".to_string()];
        let w = Word::parse("c*b^-1 * b^3", &vars).unwrap();
        assert_eq!(w, Word(vec![(1, 1), (0, -1), (0, 3)]));
        let z6 = FiniteGroup::cyclic(6);
        assert_eq!(w.evaluate(&z6, &[1, 4]), 0);
        assert!(Word::parse("d", &vars).is_err());
        assert!(Word::parse("b^x", &vars).is_err());
        assert!(Word::parse("b**c", &vars).is_err());
    }

    #[test]
    fn forced_identity_formulas_give_one() {
        let z5 = FiniteGroup::cyclic(5);
        let z3 = FiniteGroup::cyclic(3);
        for p in 0..5 {
            let v = fixtures::reduced_formula("m007").unwrap().evaluate(&z5, &Cochain3::cyclic_generator(5, p));
            assert_eq!(v, CyclotomicNumber::one(25));
        }
        for p in 0..3 {
            let v = fixtures::reduced_formula("m009").unwrap().evaluate(&z3, &Cochain3::cyclic_generator(3, p));
            assert_eq!(v, CyclotomicNumber::one(9));
        }
    }

    #[test]
    fn m003_sweep_is_conjugate_paired() {
        let z5 = FiniteGroup::cyclic(5);
        let f = fixtures::reduced_formula("m003").unwrap();
        let values: Vec<_> = (1..5).map(|p| f.evaluate(&z5, &Cochain3::cyclic_generator(5, p))).collect();
        assert_eq!(values[0], values[3].conjugate());
        assert_eq!(values[1], values[2].conjugate());
        assert_ne!(values[0], values[1]);
        assert_eq!(f.solution_count(&z5), 5);
    }

    #[test]
    fn rejects_bad_sign() {
        let text = r#"{"vars":["a"],"constraints":[],"factors":[{"args":["a","a","a"],"sign":2}]}"#;
        assert_eq!(ReducedFormula::from_json(text), Err(FormulaError::BadSign(2)));
    }
}
