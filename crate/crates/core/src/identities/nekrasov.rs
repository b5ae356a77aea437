//! The hook-length identity, its ϑ deformation, the two-loop generalization and
//! its small-β expansion.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use rayon::prelude::*;

use super::common::{box_product, c, cq, minus_powers, partitions_upto, plus_power_product, recip, t, window_sum, Check, Outcome, Role};
use crate::error::Result;
use crate::exactseries::{euler_product_families, int, FactorFamily, Monomial, MultiSeries, ParamPoly, TruncationSpec, Window};
use crate::graphcalc::{evaluate, Graph};
use crate::partitions::Partition;
use crate::symfunc::inverse_hook_product;

pub const THETA_SAMPLES: [(i64, i64); 5] = [(1, 1), (2, 1), (3, 1), (1, 2), (5, 3)];

fn z1(e: i32) -> Monomial {
    Monomial::z(1, e)
}

fn hook(lam: &Partition, s: crate::partitions::BoxCoord) -> i64 {
    lam.hook(s).expect("box of the partition") as i64
}

pub(crate) fn no_classic_lhs(spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let n = spec.hi_forms()[1];
    let terms = partitions_upto(n)
        .into_iter()
        .map(|lam| {
            let w = box_product(&lam, |s| {
                let h2 = hook(&lam, s).pow(2);
                (c(h2) - t().pow(2)).scale(&recip(h2))
            });
            MultiSeries::polynomial([(z1(lam.size() as i32), w)], spec)
        })
        .collect::<Result<Vec<_>>>()?;
    window_sum(spec, terms)
}

pub(crate) fn no_classic_rhs(spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    euler_product_families(&[minus_powers(z1(1), t().pow(2) - c(1))], spec)
}

pub(crate) fn no_classic(spec: &Arc<TruncationSpec>) -> Result<Outcome> {
    let check = Check::compare("sum = product", Role::Required, &no_classic_lhs(spec)?, &no_classic_rhs(spec)?)?;
    Ok(Outcome { cases: 1, checks: vec![check] })
}

pub(crate) fn no_theta_lhs(spec: &Arc<TruncationSpec>, theta: &BigRational) -> Result<MultiSeries> {
    let n = spec.hi_forms()[1];
    let terms = partitions_upto(n)
        .into_iter()
        .map(|lam| {
            let w = box_product(&lam, |s| {
                let a = int(lam.arm(s).expect("box") as i64);
                let l = int(lam.leg(s).expect("box") as i64);
                let x1 = &a + int(1) + theta * &l;
                let x2 = &a + theta * (&l + int(1));
                let den = &x1 * &x2;
                (&(cq(x1) - t()) * &(cq(x2) + t())).scale(&(int(1) / den))
            });
            MultiSeries::polynomial([(z1(lam.size() as i32), w)], spec)
        })
        .collect::<Result<Vec<_>>>()?;
    window_sum(spec, terms)
}

pub(crate) fn no_theta_rhs(spec: &Arc<TruncationSpec>, theta: &BigRational) -> Result<MultiSeries> {
    let e = &(t() - c(1)) * &(t().scale(&(int(1) / theta)) + c(1));
    euler_product_families(&[minus_powers(z1(1), e)], spec)
}

pub(crate) fn no_theta(spec: &Arc<TruncationSpec>, theta: Option<BigRational>) -> Result<Outcome> {
    let samples: Vec<BigRational> = match theta {
        Some(th) => vec![th],
        None => THETA_SAMPLES.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect(),
    };
    let mut checks = vec![Check::per_case(
        "sum = product",
        Role::Required,
        &samples,
        |th| format!("ϑ={th}"),
        |th| Ok((no_theta_lhs(spec, th)?, no_theta_rhs(spec, th)?)),
    )?];
    if samples.contains(&int(1)) {
        let one = int(1);
        let sides = [
            (no_theta_lhs(spec, &one)?, no_classic_lhs(spec)?),
            (no_theta_rhs(spec, &one)?, no_classic_rhs(spec)?),
        ];
        let mut check = Check::compare("ϑ=1 agrees with no-classic", Role::Required, &sides[0].0, &sides[0].1)?;
        if check.holds() {
            check = Check::compare("ϑ=1 agrees with no-classic", Role::Required, &sides[1].0, &sides[1].1)?;
        }
        checks.push(check);
    }
    Ok(Outcome { cases: samples.len(), checks })
}

/// `Σ_τ (z₁z₂)^{|τ|} ∏_s (1+z₁q^h)(1+z₁⁻¹q^h)/(1−q^h)²`.
pub(crate) fn no_generalized_lhs(spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let hi = spec.hi_forms();
    let bound = hi[2].min(hi[5]);
    let terms = partitions_upto(bound)
        .par_iter()
        .map(|tau| {
            let mut poly = MultiSeries::one(spec);
            for h in tau.hook_multiset() {
                let h = h as i32;
                // z₂ (z₁ + q^h)(1 + z₁ q^h), the z₁⁻¹ absorbed by one power of z₁z₂.
                let f = MultiSeries::polynomial(
                    [
                        (Monomial::new(0, &[1, 1]), c(1)),
                        (Monomial::new(2 * h, &[0, 1]), c(1)),
                        (Monomial::new(2 * h, &[2, 1]), c(1)),
                        (Monomial::new(4 * h, &[1, 1]), c(1)),
                    ],
                    spec,
                )?;
                poly = poly.mul(&f)?;
            }
            poly.mul(&inverse_hook_product(tau, 2, spec)?)
        })
        .collect::<Result<Vec<_>>>()?;
    window_sum(spec, terms)
}

pub(crate) fn no_generalized_rhs(spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let zz = Monomial::new(0, &[1, 1]);
    let q = Monomial::q(1);
    let r = |k: &[i64]| ParamPoly::from_int(k[1]);
    let families = [
        minus_powers(zz, c(-1)),
        FactorFamily::new(int(1), Monomial::z(2, 1), vec![(zz, 0), (q, 1)], r),
        FactorFamily::new(int(1), Monomial::new(0, &[2, 1]), vec![(zz, 0), (q, 1)], r),
        FactorFamily::new(int(-1), zz, vec![(zz, 0), (q, 1)], |k| ParamPoly::from_int(-2 * k[1])),
    ];
    euler_product_families(&families, spec)
}

pub(crate) fn no_generalized(spec: &Arc<TruncationSpec>) -> Result<Outcome> {
    let lhs = no_generalized_lhs(spec)?;
    let rhs = no_generalized_rhs(spec)?;
    let prefactor = plus_power_product(z1(1), spec)?;
    let graph = evaluate(&Graph::builtin("two-loop").expect("built-in"), spec)?;
    let checks = vec![
        Check::compare("sum = product", Role::Required, &lhs, &rhs)?,
        Check::compare("two-loop graph = prefactor × product", Role::Required, &graph, &prefactor.mul(&rhs)?)?,
    ];
    Ok(Outcome { cases: 1, checks })
}

fn factorial(n: i64) -> BigRational {
    (1..=n).fold(int(1), |acc, k| acc * int(k))
}

fn beta(e: i64) -> Monomial {
    Monomial::z(2, e as i32)
}

/// A polynomial in β cut at the β-window.
fn beta_series(spec: &Arc<TruncationSpec>, coeffs: BTreeMap<i64, ParamPoly>) -> Result<MultiSeries> {
    let b = spec.hi_forms()[2];
    let poly = MultiSeries::polynomial(coeffs.into_iter().filter(|(e, _)| *e <= b).map(|(e, p)| (beta(e), p)), spec)?;
    Ok(poly.truncate(&spec.hi_forms()))
}

/// `(1 − e^{cβ})/β`.
fn f(spec: &Arc<TruncationSpec>, cval: &ParamPoly) -> Result<MultiSeries> {
    let b = spec.hi_forms()[2];
    let coeffs = (1..=b + 1).map(|m| (m - 1, cval.pow(m as u32).scale(&(int(-1) / factorial(m))))).collect();
    beta_series(spec, coeffs)
}

/// `e^{cβ}`.
fn exp_beta(spec: &Arc<TruncationSpec>, cval: &ParamPoly) -> Result<MultiSeries> {
    let b = spec.hi_forms()[2];
    let coeffs = (0..=b).map(|m| (m, cval.pow(m as u32).scale(&(int(1) / factorial(m))))).collect();
    beta_series(spec, coeffs)
}

/// `(cosh(cβ) − 1)/β²`.
fn cosh_quotient(spec: &Arc<TruncationSpec>, cval: &ParamPoly) -> Result<MultiSeries> {
    let b = spec.hi_forms()[2];
    let coeffs = (1..=b / 2 + 1)
        .map(|m| (2 * m - 2, cval.pow(2 * m as u32).scale(&(int(1) / factorial(2 * m)))))
        .collect();
    beta_series(spec, coeffs)
}

/// The two-loop identity at `z₁ = −e^{βt}`, `z₂ = −z`, `q = e^{−β}`, as series in `z` and `β`.
pub(crate) fn limit_lhs(spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let n = spec.hi_forms()[1];
    let taus = partitions_upto(n);
    let max_hook = taus.iter().flat_map(|p| p.hook_multiset()).max().unwrap_or(0) as i64;
    let boxes = (1..=max_hook)
        .into_par_iter()
        .map(|h| {
            let num = f(spec, &(t() - c(h)))?.mul(&f(spec, &(-t() - c(h)))?)?;
            let den = f(spec, &c(-h))?.inverse()?;
            num.mul(&den.mul(&den)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let terms = taus
        .par_iter()
        .map(|tau| {
            let size = tau.size() as i64;
            let mut acc = exp_beta(spec, &t().scale(&int(size)))?.shift(z1(size as i32))?;
            for h in tau.hook_multiset() {
                acc = acc.mul(&boxes[h as usize - 1])?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    window_sum(spec, terms)
}

/// `exp Σ_{k,n} (z^{kn}/n) e^{knβt} (1 − G_n)` with
/// `G_n = (cosh nβt − 1)/(cosh nβ − 1)`.
pub(crate) fn limit_rhs(spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let zmax = spec.hi_forms()[1];
    let mut log = MultiSeries::zero(spec);
    for n in 1..=zmax {
        let g = cosh_quotient(spec, &t().scale(&int(n)))?.mul(&cosh_quotient(spec, &c(n))?.inverse()?)?;
        let one_minus_g = MultiSeries::one(spec).sub(&g)?;
        for k in 1..=zmax / n {
            let term = exp_beta(spec, &t().scale(&int(k * n)))?
                .mul(&one_minus_g)?
                .shift(z1((k * n) as i32))?
                .scale_rational(&recip(n));
            log = log.add(&term)?;
        }
    }
    log.truncate(&spec.hi_forms()).exp()
}

pub(crate) fn no_limit_consistency(spec: &Arc<TruncationSpec>) -> Result<Outcome> {
    let lhs = limit_lhs(spec)?;
    let rhs = limit_rhs(spec)?;
    let mut flat = spec.as_ref().clone();
    flat.z_windows[1] = Window::new(0, 0);
    let flat = Arc::new(flat);
    let checks = vec![
        Check::compare("sum = product in (z, β)", Role::Required, &lhs, &rhs)?,
        Check::compare("β⁰ part reproduces no-classic", Role::Required, &lhs.restrict(&flat)?, &no_classic_rhs(&flat)?)?,
    ];
    Ok(Outcome { cases: 1, checks })
}
