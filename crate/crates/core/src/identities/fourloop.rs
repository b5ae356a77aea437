//! The square graph with four internal edges, and its small-β limit.
//!
//! For boxes `s = (i, j)` the two cross statistics are
//! `A(s) = (τ_i − j) + (νᵗ_j − i) + 1` on `τ` and `B(s) = (ν_i − j) + (τᵗ_j − i) + 1` on `ν`.

use std::sync::Arc;

use rayon::prelude::*;

use super::common::{c, minus_powers, partitions_upto, plus_power_family, plus_power_product, t1, t3, window_sum, Check, Outcome, Role};
use crate::error::Result;
use crate::exactseries::{
    euler_product_families, int, with_adaptive_precision_from, FactorFamily, Monomial, MultiSeries, ParamPoly,
    TruncationSpec, NFORMS,
};
use crate::graphcalc::{evaluate, Graph};
use crate::partitions::{BoxCoord, Partition};
use crate::symfunc::inverse_hook_product;

fn cross(a: &Partition, b: &Partition, s: BoxCoord) -> i32 {
    (a.part(s.i) as i32 - s.j as i32) + (b.transpose().part(s.j) as i32 - s.i as i32) + 1
}

fn zm(k: usize, u: i32) -> Monomial {
    Monomial::u(u) * Monomial::z(k, 1)
}

/// `(τ, ν)` with `|τ|` weighted by `z_a` and `|ν|` by `z_b`, inside the window.
fn pairs(spec: &TruncationSpec, a: usize, b: usize) -> Vec<(Partition, Partition)> {
    let hi = spec.hi_forms();
    let mut out = Vec::new();
    for tau in partitions_upto(hi[a]) {
        for nu in partitions_upto(hi[b]) {
            if (tau.size() + nu.size()) as i64 <= hi[NFORMS - 1] {
                out.push((tau.clone(), nu));
            }
        }
    }
    out
}

fn binomial(m: Monomial, spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    MultiSeries::binomial(int(1), m, spec)
}

/// Sum over `(τ, ν)` of an exact Laurent polynomial times `∏(1−q^h)^{-2}` over both.
fn hook_weighted_sum<F>(spec: &Arc<TruncationSpec>, cases: &[(Partition, Partition)], poly: F) -> Result<MultiSeries>
where
    F: Fn(&Partition, &Partition, &Arc<TruncationSpec>) -> Result<MultiSeries> + Sync,
{
    let polys = cases
        .iter()
        .map(|(tau, nu)| poly(tau, nu, spec))
        .collect::<Result<Vec<_>>>()?;
    let mut slack = [0; NFORMS];
    slack[0] = polys.iter().map(|p| (-p.floor()[0]).max(0)).max().unwrap_or(0);
    with_adaptive_precision_from(spec, slack, |w| {
        let terms = cases
            .par_iter()
            .zip(&polys)
            .map(|((tau, nu), p)| {
                p.restrict(w)?.mul(&inverse_hook_product(tau, 2, w)?.mul(&inverse_hook_product(nu, 2, w)?)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let sum = window_sum(w, terms)?;
        plus_power_product(Monomial::z(1, 1), w)?.mul(&plus_power_product(Monomial::z(3, 1), w)?)?.mul(&sum)
    })
}

/// `P(z₁)P(z₃) Σ z₂^{|τ|} z₄^{|ν|} s_τ s_{τᵗ} s_ν s_{νᵗ}(q^{-ρ}) ∏_τ (1+z₁q^A)(1+z₃q^{−A}) ∏_ν (1+z₁q^{−B})(1+z₃q^B)`.
pub(crate) fn four_loop_sum(spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let cases = pairs(spec, 2, 4);
    hook_weighted_sum(spec, &cases, |tau, nu, s| {
        let norms = tau.norm_sq() + tau.transpose().norm_sq() + nu.norm_sq() + nu.transpose().norm_sq();
        let mut acc = MultiSeries::monomial(Monomial::ONE, c(1), s)?
            .shift(Monomial::new(norms as i32, &[0, tau.size() as i32, 0, nu.size() as i32]))?;
        for b in tau.boxes() {
            let a = 2 * cross(tau, nu, b);
            acc = acc.mul(&binomial(zm(1, a), s)?)?.mul(&binomial(zm(3, -a), s)?)?;
        }
        for b in nu.boxes() {
            let e = 2 * cross(nu, tau, b);
            acc = acc.mul(&binomial(zm(1, -e), s)?)?.mul(&binomial(zm(3, e), s)?)?;
        }
        Ok(acc)
    })
}

/// Alternate sum form: weights `(z₁z₄)^{|τ|}(z₂z₃)^{|ν|}`, no Schur
/// prefactor powers, and the `ν`-box exponent indexed as `i+j−1−ν_j−τᵗ_i`.
pub(crate) fn four_loop_sum_alt(spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let cases = pairs(spec, 4, 2);
    hook_weighted_sum(spec, &cases, |tau, nu, s| {
        let mut acc = MultiSeries::monomial(Monomial::ONE, c(1), s)?
            .shift(Monomial::new(0, &[0, nu.size() as i32, 0, tau.size() as i32]))?;
        let (nt, tt) = (nu.transpose(), tau.transpose());
        for b in tau.boxes() {
            let e = 2 * ((b.i + b.j) as i32 - 1 - nt.part(b.j) as i32 - tau.part(b.i) as i32);
            // z₁(1 + z₁⁻¹q^e) = z₁ + q^e
            let first = MultiSeries::polynomial([(Monomial::z(1, 1), c(1)), (Monomial::u(e), c(1))], s)?;
            acc = acc.mul(&first)?.mul(&binomial(zm(3, e), s)?)?;
        }
        for b in nu.boxes() {
            let e = 2 * ((b.i + b.j) as i32 - 1 - nu.part(b.j) as i32 - tt.part(b.i) as i32);
            let last = MultiSeries::polynomial([(Monomial::z(3, 1), c(1)), (Monomial::u(e), c(1))], s)?;
            acc = acc.mul(&binomial(zm(1, e), s)?)?.mul(&last)?;
        }
        Ok(acc)
    })
}

fn zz() -> Monomial {
    Monomial::new(0, &[1, 1, 1, 1])
}

fn r_family(coeff: i64, base: Monomial, scale: i64) -> FactorFamily {
    FactorFamily::new(int(coeff), base, vec![(zz(), 0), (Monomial::q(1), 1)], move |k| ParamPoly::from_int(scale * k[1]))
}

/// The families shared by both product forms, with `z^{k−1}` (`shift = 0`) or
/// `z^k` (`shift = 1`) in the `(1 + ⋯ z_a q^r)` factors.
fn product_families(shift: bool) -> Vec<FactorFamily> {
    let z = zz();
    let mut fams = vec![minus_powers(z, c(-1)), r_family(-1, z, -4)];
    for a in 1..=4 {
        let za = Monomial::z(a, 1);
        let base = if shift { z * za } else { za };
        fams.push(r_family(1, base, 1));
        fams.push(r_family(1, z * za.inverse(), 1));
    }
    for (a, b) in [(1, 2), (2, 3), (3, 4), (4, 1)] {
        let base = z * Monomial::z(a, 1).inverse() * Monomial::z(b, 1).inverse();
        fams.push(r_family(-1, base, -1));
    }
    fams
}

pub(crate) fn four_loop_product(spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    euler_product_families(&product_families(false), spec)
}

/// Product form with `z^k` shifts, times `P(z₁)P(z₃)`.
pub(crate) fn four_loop_closing(spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let mut fams = product_families(true);
    // These two factors carry no k, so they are taken once rather than per k.
    fams.extend([2, 4].map(|a| plus_power_family(Monomial::z(a, 1))));
    let body = euler_product_families(&fams, spec)?;
    plus_power_product(Monomial::z(1, 1), spec)?.mul(&plus_power_product(Monomial::z(3, 1), spec)?)?.mul(&body)
}

pub(crate) fn four_loop(spec: &Arc<TruncationSpec>) -> Result<Outcome> {
    let graph = evaluate(&Graph::builtin("four-loop").expect("built-in"), spec)?;
    let checks = vec![
        Check::compare("graph = sum form", Role::Required, &graph, &four_loop_sum(spec)?)?,
        Check::compare("graph = product form", Role::Report, &graph, &four_loop_product(spec)?)?,
        Check::compare("graph = alternate sum form", Role::Report, &graph, &four_loop_sum_alt(spec)?)?,
        Check::compare("graph = closing product form", Role::Report, &graph, &four_loop_closing(spec)?)?,
    ];
    Ok(Outcome { cases: 1, checks })
}

/// How the second box product of the limit identity is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitReading {
    /// Boxes of `ν`.
    OverNu,
    /// Boxes of `νᵗ` fed to the `ν` and `τ` statistics.
    OverNuTranspose,
    /// `t₁ ↔ t₃` in the second product, boxes of `ν`.
    Swapped,
}

impl LimitReading {
    pub const ALL: [LimitReading; 3] =
        [LimitReading::OverNu, LimitReading::OverNuTranspose, LimitReading::Swapped];

    pub fn label(self) -> &'static str {
        match self {
            LimitReading::OverNu => "s ∈ ν",
            LimitReading::OverNuTranspose => "s ∈ νᵗ",
            LimitReading::Swapped => "t1 ↔ t3 in the ν product",
        }
    }
}

fn pair_factor(x: i32, plus: &ParamPoly, minus: &ParamPoly, h: u32) -> ParamPoly {
    let x = c(x as i64);
    (&(&x + plus) * &(&x - minus)).scale(&(int(1) / int((h * h) as i64)))
}

/// `Σ x^{|ν|} y^{|τ|} ∏_τ ⋯ ∏_ν ⋯` with `x, y = z₁, z₂`.
pub(crate) fn four_loop_limit_lhs(spec: &Arc<TruncationSpec>, reading: LimitReading) -> Result<MultiSeries> {
    let cases = pairs(spec, 2, 1);
    let terms = cases
        .par_iter()
        .map(|(tau, nu)| {
            let mut w = ParamPoly::one();
            for s in tau.boxes() {
                w = &w * &pair_factor(cross(tau, nu, s), &t3(), &t1(), tau.hook(s).expect("box"));
            }
            match reading {
                LimitReading::OverNu => {
                    for s in nu.boxes() {
                        w = &w * &pair_factor(cross(nu, tau, s), &t3(), &t1(), nu.hook(s).expect("box"));
                    }
                }
                LimitReading::Swapped => {
                    for s in nu.boxes() {
                        w = &w * &pair_factor(cross(nu, tau, s), &t1(), &t3(), nu.hook(s).expect("box"));
                    }
                }
                LimitReading::OverNuTranspose => {
                    let nt = nu.transpose();
                    for s in nt.boxes() {
                        w = &w * &pair_factor(cross(nu, tau, s), &t3(), &t1(), nt.hook(s).expect("box"));
                    }
                }
            }
            MultiSeries::polynomial([(Monomial::new(0, &[nu.size() as i32, tau.size() as i32]), w)], spec)
        })
        .collect::<Result<Vec<_>>>()?;
    window_sum(spec, terms)
}

/// `∏ (1−x^k y^{k−1})^{t₁t₃} (1−x^{k−1}y^k)^{t₁t₃} (1−x^k y^k)^{t₁²+t₃²−1}`.
pub(crate) fn four_loop_limit_rhs(spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let xy = Monomial::new(0, &[1, 1]);
    let tt = &t1() * &t3();
    let step = vec![(xy, 0)];
    let fams = [
        FactorFamily::new(int(-1), Monomial::z(1, 1), step.clone(), {
            let e = tt.clone();
            move |_| e.clone()
        }),
        FactorFamily::new(int(-1), Monomial::z(2, 1), step, move |_| tt.clone()),
        minus_powers(xy, t1().pow(2) + t3().pow(2) - c(1)),
    ];
    euler_product_families(&fams, spec)
}

pub(crate) fn four_loop_limit(spec: &Arc<TruncationSpec>) -> Result<Outcome> {
    let rhs = four_loop_limit_rhs(spec)?;
    let checks = LimitReading::ALL
        .iter()
        .map(|&r| Check::compare(r.label(), Role::Reading, &four_loop_limit_lhs(spec, r)?, &rhs))
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome { cases: 1, checks })
}
