//! Shared building blocks for the identity builders.

use std::sync::Arc;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::Result;
use crate::exactseries::{
    euler_product_families, first_mismatch, int, FactorFamily, Monomial, MultiSeries, ParamPoly, TruncationSpec,
};
use crate::partitions::Partition;

pub(crate) type Mismatch = (Monomial, ParamPoly, ParamPoly);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Role {
    /// Must match for the identity to hold.
    Required,
    /// Outcome is reported, never decisive.
    Report,
    /// One of several alternative readings; at least one must match.
    Reading,
}

#[derive(Clone, Debug)]
pub(crate) struct Check {
    pub name: String,
    pub role: Role,
    pub case: Option<String>,
    pub mismatch: Option<Mismatch>,
}

impl Check {
    pub fn compare(name: &str, role: Role, a: &MultiSeries, b: &MultiSeries) -> Result<Check> {
        Ok(Check { name: name.into(), role, case: None, mismatch: first_mismatch(a, b)? })
    }

    /// Runs `sides` for every case in parallel and keeps the first mismatch in case order.
    pub fn per_case<C, L, F>(name: &str, role: Role, cases: &[C], label: L, sides: F) -> Result<Check>
    where
        C: Sync,
        L: Fn(&C) -> String,
        F: Fn(&C) -> Result<(MultiSeries, MultiSeries)> + Sync,
    {
        let results = cases
            .par_iter()
            .map(|c| {
                let (a, b) = sides(c)?;
                first_mismatch(&a, &b)
            })
            .collect::<Result<Vec<_>>>()?;
        let first = results.into_iter().zip(cases).find_map(|(m, c)| m.map(|m| (label(c), m)));
        Ok(Check {
            name: name.into(),
            role,
            case: first.as_ref().map(|(l, _)| l.clone()),
            mismatch: first.map(|(_, m)| m),
        })
    }

    pub fn holds(&self) -> bool {
        self.mismatch.is_none()
    }
}

pub(crate) struct Outcome {
    pub cases: usize,
    pub checks: Vec<Check>,
}

pub(crate) fn t() -> ParamPoly {
    ParamPoly::var(0)
}

pub(crate) fn t1() -> ParamPoly {
    ParamPoly::var(0)
}

pub(crate) fn t3() -> ParamPoly {
    ParamPoly::var(1)
}

pub(crate) fn c(n: i64) -> ParamPoly {
    ParamPoly::from_int(n)
}

pub(crate) fn cq(r: BigRational) -> ParamPoly {
    ParamPoly::constant(r)
}

/// `1/n` as a rational.
pub(crate) fn recip(n: i64) -> BigRational {
    int(1) / int(n)
}

/// Sum of exact terms, declared exact only on the window of `spec`.
pub(crate) fn window_sum(spec: &Arc<TruncationSpec>, terms: Vec<MultiSeries>) -> Result<MultiSeries> {
    Ok(MultiSeries::sum_par(spec, terms)?.truncate(&spec.hi_forms()))
}

/// Partitions of every size up to `n`.
pub(crate) fn partitions_upto(n: i64) -> Vec<Partition> {
    Partition::enumerate_up_to(n.max(0) as u32)
}

/// Box product of exact per-box coefficients, e.g. hook-length weights.
pub(crate) fn box_product<F>(lam: &Partition, f: F) -> ParamPoly
where
    F: Fn(crate::partitions::BoxCoord) -> ParamPoly,
{
    lam.boxes().fold(ParamPoly::one(), |acc, s| &acc * &f(s))
}

/// `∏_{k≥1} (1 + z_a q^k)^k`.
pub(crate) fn plus_power_family(z: Monomial) -> FactorFamily {
    FactorFamily::new(int(1), z, vec![(Monomial::q(1), 1)], |k| ParamPoly::from_int(k[0]))
}

pub(crate) fn plus_power_product(z: Monomial, spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    euler_product_families(&[plus_power_family(z)], spec)
}

/// `∏_{k≥1} (1 − m^k)^e`.
pub(crate) fn minus_powers(m: Monomial, e: ParamPoly) -> FactorFamily {
    FactorFamily::new(int(-1), m, vec![(m, 0)], move |_| e.clone())
}
