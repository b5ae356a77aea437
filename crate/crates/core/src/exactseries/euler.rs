//! Infinite products `∏ (1 + c·m)^e` expanded on a truncation window.
//!
//! All factors are summed in log space and exponentiated once, so a product with
//! symbolic exponents costs the same as one with integer exponents.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::param::{int, ParamPoly};
use super::series::MultiSeries;
use super::window::{Forms, Monomial, TruncationSpec, NFORMS};
use crate::error::{Error, Result};

/// One factor `(1 + coeff·monomial)^exponent`.
#[derive(Clone, Debug)]
pub struct EulerFactor {
    pub coeff: BigRational,
    pub monomial: Monomial,
    pub exponent: ParamPoly,
}

impl EulerFactor {
    /// `(1 − m)^e`.
    pub fn minus(monomial: Monomial, exponent: ParamPoly) -> Self {
        EulerFactor { coeff: int(-1), monomial, exponent }
    }

    /// `(1 + m)^e`.
    pub fn plus(monomial: Monomial, exponent: ParamPoly) -> Self {
        EulerFactor { coeff: int(1), monomial, exponent }
    }
}

type ExponentFn = Arc<dyn Fn(&[i64]) -> ParamPoly + Send + Sync>;

/// A family `∏_{k₁ ≥ s₁, k₂ ≥ s₂, …} (1 + c · base · step₁^{k₁} · step₂^{k₂} ⋯)^{e(k)}`.
///
/// Steps must have nonnegative exponents and be nontrivial; the index ranges are
/// cut off where the monomial leaves the exact range of the window, never by a
/// fixed constant.
#[derive(Clone)]
pub struct FactorFamily {
    pub coeff: BigRational,
    pub base: Monomial,
    pub steps: Vec<(Monomial, i64)>,
    pub exponent: ExponentFn,
}

impl FactorFamily {
    pub fn new<F>(coeff: BigRational, base: Monomial, steps: Vec<(Monomial, i64)>, exponent: F) -> Self
    where
        F: Fn(&[i64]) -> ParamPoly + Send + Sync + 'static,
    {
        FactorFamily { coeff, base, steps, exponent: Arc::new(exponent) }
    }

    /// Every factor whose monomial can influence monomials `<= prec`.
    pub fn enumerate(&self, prec: &Forms) -> Result<Vec<EulerFactor>> {
        for (step, _) in &self.steps {
            if !step.is_nonnegative() || step.is_one() {
                return Err(Error::NonTerminating(format!("step {step} has no positive weight")));
            }
        }
        let mut out = Vec::new();
        let mut idx: Vec<i64> = self.steps.iter().map(|s| s.1).collect();
        self.walk(0, &mut idx, prec, &mut out)?;
        Ok(out)
    }

    fn monomial_at(&self, idx: &[i64]) -> Monomial {
        self.steps
            .iter()
            .zip(idx)
            .fold(self.base, |m, ((step, _), &k)| m * step.scaled(k as i32))
    }

    fn walk(&self, dim: usize, idx: &mut Vec<i64>, prec: &Forms, out: &mut Vec<EulerFactor>) -> Result<()> {
        if dim == self.steps.len() {
            let m = self.monomial_at(idx);
            if m.within(prec) {
                if !m.is_nonnegative() || m.is_one() {
                    return Err(Error::NonTerminating(format!("factor monomial {m} is not positive")));
                }
                let exponent = (self.exponent)(idx);
                if !exponent.is_zero() {
                    out.push(EulerFactor { coeff: self.coeff.clone(), monomial: m, exponent });
                }
            }
            return Ok(());
        }
        let start = self.steps[dim].1;
        let mut k = start;
        loop {
            idx[dim] = k;
            // Later indices at their start values give the smallest monomial.
            for d in dim + 1..self.steps.len() {
                idx[d] = self.steps[d].1;
            }
            if !self.monomial_at(idx).within(prec) {
                break;
            }
            self.walk(dim + 1, idx, prec, out)?;
            k += 1;
        }
        idx[dim] = start;
        Ok(())
    }
}

/// `Σ_j (−1)^{j+1} (c·m)^j / j`, truncated to `prec`.
fn log_factor(f: &EulerFactor, prec: &Forms, acc: &mut Vec<(Monomial, ParamPoly)>) {
    let mut power = f.monomial;
    let mut cpow = f.coeff.clone();
    let mut j = 1i64;
    while power.within(prec) {
        let sign = if j % 2 == 1 { int(1) } else { int(-1) };
        let w = sign * &cpow / int(j);
        acc.push((power, f.exponent.scale(&w)));
        power = power * f.monomial;
        cpow *= &f.coeff;
        j += 1;
    }
}

/// Product of the given factors on `spec`. Factors beyond the window contribute 1.
pub fn euler_product<I>(factors: I, spec: &Arc<TruncationSpec>) -> Result<MultiSeries>
where
    I: IntoIterator<Item = EulerFactor>,
{
    let prec = spec.hi_forms();
    let mut logs = Vec::new();
    for f in factors {
        if f.coeff.is_zero() || f.exponent.is_zero() {
            continue;
        }
        if !spec.admits(&f.monomial) {
            return Err(Error::OutOfWindow(f.monomial.to_string()));
        }
        if !f.monomial.is_nonnegative() || f.monomial.is_one() {
            return Err(Error::NonTerminating(format!("factor monomial {} is not positive", f.monomial)));
        }
        log_factor(&f, &prec, &mut logs);
    }
    if logs.is_empty() {
        return Ok(MultiSeries::one(spec));
    }
    let log = MultiSeries::from_parts(spec, prec, [0; NFORMS], accumulate(logs));
    log.exp()
}

/// Product over whole families, bounds derived from the window.
pub fn euler_product_families(families: &[FactorFamily], spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let prec = spec.hi_forms();
    let mut factors = Vec::new();
    for fam in families {
        factors.extend(fam.enumerate(&prec)?);
    }
    euler_product(factors, spec)
}

fn accumulate(items: Vec<(Monomial, ParamPoly)>) -> std::collections::BTreeMap<Monomial, ParamPoly> {
    let mut out = std::collections::BTreeMap::new();
    for (m, c) in items {
        let slot: &mut ParamPoly = out.entry(m).or_default();
        *slot += &c;
    }
    out
}

/// `ParamPoly` constant helper for exponent closures.
pub fn exp_const(n: i64) -> ParamPoly {
    ParamPoly::from_int(n)
}

/// Exponent `e` for every index; convenient for `(1 − z^k)^{e}` families.
pub fn exp_fixed(e: ParamPoly) -> impl Fn(&[i64]) -> ParamPoly + Send + Sync + 'static {
    move |_| e.clone()
}

#[cfg(test)]
mod tests {
    use super::super::series::first_mismatch;
    use super::super::window::Window;
    use super::*;

    fn z_spec(n: i32) -> Arc<TruncationSpec> {
        Arc::new(TruncationSpec::new(Window::upto(0), vec![Window::upto(n)]).unwrap())
    }

    #[test]
    fn partition_generating_function() {
        let s = z_spec(6);
        let fam = FactorFamily::new(int(-1), Monomial::ONE, vec![(Monomial::z(1, 1), 1)], exp_fixed(exp_const(-1)));
        let p = euler_product_families(&[fam], &s).unwrap();
        let counts: Vec<_> = (0..=6).map(|n| p.coefficient(&Monomial::z(1, n)).unwrap()).collect();
        let expect: Vec<ParamPoly> = [1, 1, 2, 3, 5, 7, 11].iter().map(|&c| ParamPoly::from_int(c)).collect();
        assert_eq!(counts, expect);
    }

    #[test]
    fn empty_product_is_one() {
        let s = z_spec(3);
        assert_eq!(euler_product(Vec::new(), &s).unwrap(), MultiSeries::one(&s));
    }

    #[test]
    fn zero_weight_step_is_rejected() {
        let s = z_spec(3);
        let fam = FactorFamily::new(int(-1), Monomial::z(1, 1), vec![(Monomial::ONE, 1)], exp_fixed(exp_const(1)));
        assert!(matches!(euler_product_families(&[fam], &s), Err(Error::NonTerminating(_))));
        let bad = EulerFactor::minus(Monomial::ONE, exp_const(1));
        assert!(matches!(euler_product(vec![bad], &s), Err(Error::NonTerminating(_))));
    }

    #[test]
    fn integer_exponents_agree_with_multiplication() {
        let s = Arc::new(TruncationSpec::new(Window::upto(10), vec![Window::upto(3)]).unwrap());
        let m = Monomial::new(2, &[1]);
        let direct = MultiSeries::binomial(int(1), m, &s).unwrap().pow_int(3).unwrap();
        let via = euler_product(vec![EulerFactor::plus(m, exp_const(3))], &s).unwrap();
        assert!(first_mismatch(&direct, &via).unwrap().is_none());
    }
}
