//! Polynomials in up to two parameters over ℚ.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Exponents of the parameters, e.g. `[2, 0]` is `t²` (or `t₁²`).
pub type ParamExps = [u16; 2];

pub const MAX_PARAMS: usize = 2;

/// Which coefficient ring a computation lives in; fixes parameter names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParamRing {
    #[serde(rename = "Q")]
    Rational,
    #[serde(rename = "Q[t]")]
    T,
    #[serde(rename = "Q[t1,t3]")]
    T1T3,
}

impl ParamRing {
    pub fn names(self) -> [&'static str; 2] {
        match self {
            ParamRing::Rational | ParamRing::T => ["t", "s"],
            ParamRing::T1T3 => ["t1", "t3"],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ParamRing::Rational => "Q",
            ParamRing::T => "Q[t]",
            ParamRing::T1T3 => "Q[t1,t3]",
        }
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// An element of ℚ[p₀, p₁] with no stored zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    terms: BTreeMap<ParamExps, BigRational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn one() -> Self {
        ParamPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        ParamPoly::term([0, 0], c)
    }

    pub fn from_int(n: i64) -> Self {
        ParamPoly::constant(int(n))
    }

    pub fn term(exps: ParamExps, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        ParamPoly { terms }
    }

    /// The parameter `p_idx` itself.
    pub fn var(idx: usize) -> Self {
        assert!(idx < MAX_PARAMS, "parameter index {idx} out of range");
        let mut e = [0, 0];
        e[idx] = 1;
        ParamPoly::term(e, BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The rational value if this polynomial is constant (zero included).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&[0, 0]).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamExps, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: ParamExps) -> BigRational {
        self.terms.get(&exps).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Degree in parameter `idx`; `None` for the zero polynomial.
    pub fn degree_in(&self, idx: usize) -> Option<u16> {
        self.terms.keys().map(|e| e[idx]).max()
    }

    pub fn scale(&self, c: &BigRational) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn add_scaled(&mut self, other: &ParamPoly, c: &BigRational) {
        for (e, v) in &other.terms {
            self.add_term(*e, v * c);
        }
    }

    fn add_term(&mut self, e: ParamExps, v: BigRational) {
        if v.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += v;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn pow(&self, n: u32) -> ParamPoly {
        let mut out = ParamPoly::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn display(&self, ring: ParamRing) -> String {
        format_poly(self, ring.names())
    }
}

fn format_poly(p: &ParamPoly, names: [&str; 2]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    // Highest total degree first reads more naturally.
    let mut terms: Vec<_> = p.terms.iter().collect();
    terms.sort_by(|a, b| (b.0[0] + b.0[1], b.0).cmp(&(a.0[0] + a.0[1], a.0)));
    for (k, (e, c)) in terms.into_iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors = Vec::new();
        for (idx, &d) in e.iter().enumerate() {
            match d {
                0 => {}
                1 => factors.push(names[idx].to_string()),
                d => factors.push(format!("{}^{d}", names[idx])),
            }
        }
        if factors.is_empty() || !mag.is_one() {
            factors.insert(0, mag.to_string());
        }
        out.push_str(&factors.join("*"));
    }
    out
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self, ParamRing::T.names()))
    }
}

impl From<BigRational> for ParamPoly {
    fn from(c: BigRational) -> Self {
        ParamPoly::constant(c)
    }
}

impl From<i64> for ParamPoly {
    fn from(n: i64) -> Self {
        ParamPoly::from_int(n)
    }
}

impl AddAssign<&ParamPoly> for ParamPoly {
    fn add_assign(&mut self, rhs: &ParamPoly) {
        for (e, v) in &rhs.terms {
            self.add_term(*e, v.clone());
        }
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for ParamPoly {
    type Output = ParamPoly;
    fn add(mut self, rhs: ParamPoly) -> ParamPoly {
        self += &rhs;
        self
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly { terms: self.terms.iter().map(|(e, v)| (*e, -v)).collect() }
    }
}

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -&self
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        self + &(-rhs)
    }
}

impl Sub for ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: ParamPoly) -> ParamPoly {
        &self - &rhs
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        // Fast paths: most series in this crate carry rational coefficients.
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        let mut out = ParamPoly::zero();
        for (ea, va) in &self.terms {
            for (eb, vb) in &rhs.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1]], va * vb);
            }
        }
        out
    }
}

impl Mul for ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: ParamPoly) -> ParamPoly {
        &self * &rhs
    }
}

/// Wire form of one coefficient term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamTermJson {
    pub param_exps: Vec<u16>,
    pub numerator: String,
    pub denominator: String,
}

impl ParamPoly {
    pub fn to_json_terms(&self) -> Vec<ParamTermJson> {
        self.terms
            .iter()
            .map(|(e, c)| ParamTermJson {
                param_exps: e.to_vec(),
                numerator: c.numer().to_string(),
                denominator: c.denom().to_string(),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> ParamPoly {
        ParamPoly::var(0)
    }

    #[test]
    fn ring_basics() {
        let one_minus_t2 = ParamPoly::one() - t().pow(2);
        assert_eq!(one_minus_t2.to_string(), "-t^2 + 1");
        assert_eq!((&one_minus_t2 - &one_minus_t2), ParamPoly::zero());
        assert!(ParamPoly::constant(rat(0, 5)).is_zero());
        let sq = &(t() + ParamPoly::one()) * &(t() - ParamPoly::one());
        assert_eq!(sq, t().pow(2) - ParamPoly::one());
        assert_eq!(sq.degree_in(0), Some(2));
        assert_eq!(ParamPoly::zero().degree_in(0), None);
    }

    #[test]
    fn constants() {
        assert_eq!(ParamPoly::from_int(3).as_constant(), Some(int(3)));
        assert_eq!(ParamPoly::zero().as_constant(), Some(int(0)));
        assert_eq!(t().as_constant(), None);
        assert!(ParamPoly::one().is_one());
    }

    #[test]
    fn two_parameter_display() {
        let p = &ParamPoly::var(0) * &ParamPoly::var(1);
        assert_eq!(p.display(ParamRing::T1T3), "t1*t3");
        let q = ParamPoly::constant(rat(-1, 2)) + ParamPoly::var(1).pow(2);
        assert_eq!(q.display(ParamRing::T1T3), "t3^2 - 1/2");
    }
}
