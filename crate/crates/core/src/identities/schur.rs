//! Identities among Schur functions at `q^{-ρ}` and its shifts.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use super::common::{c, partitions_upto, plus_power_product, window_sum, Check, Outcome, Role};
use crate::error::Result;
use crate::exactseries::{
    euler_product, with_adaptive_precision_from, EulerFactor, Monomial, MultiSeries, TruncationSpec, NFORMS,
};
use crate::partitions::Partition;
use crate::symfunc::{principal_schur, SchurEngine, Specialization};

/// `s_μ(q^{-ρ}) s_λ(q^{-ρ-μ})`.
pub(crate) fn cyclic_schur_lhs(lam: &Partition, mu: &Partition, spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let mut slack = [0; NFORMS];
    slack[0] = (-(Specialization::shifted(mu).min_exponent() as i64)).max(0) * lam.size() as i64;
    with_adaptive_precision_from(spec, slack, |w| {
        let engine = SchurEngine::new(w);
        let a = engine.skew_schur(mu, &Partition::empty(), &Specialization::principal())?;
        let b = engine.skew_schur(lam, &Partition::empty(), &Specialization::shifted(mu))?;
        a.mul(&b)
    })
}

/// `q^{-(κ(μ)+κ(λ))/2} Σ_η s_{λᵗ/η}(q^{-ρ}) s_{μᵗ/η}(q^{-ρ})`.
pub(crate) fn cyclic_schur_rhs(lam: &Partition, mu: &Partition, spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let k = -(lam.kappa() + mu.kappa());
    let mut slack = [0; NFORMS];
    slack[0] = (-k).max(0);
    with_adaptive_precision_from(spec, slack, |w| {
        let engine = SchurEngine::new(w);
        let (lt, mt) = (lam.transpose(), mu.transpose());
        let x = Specialization::principal();
        let mut sum = MultiSeries::zero(w);
        for eta in lt.common_subpartitions(&mt) {
            sum = sum.add(&engine.skew_schur(&lt, &eta, &x)?.mul(&*engine.skew_schur(&mt, &eta, &x)?)?)?;
        }
        sum.shift(Monomial::u(k as i32))
    })
}

pub(crate) fn cyclic_schur(spec: &Arc<TruncationSpec>, max_size: u32) -> Result<Outcome> {
    let parts = partitions_upto(max_size as i64);
    let pairs: Vec<(Partition, Partition)> =
        parts.iter().flat_map(|l| parts.iter().map(move |m| (l.clone(), m.clone()))).collect();
    let check = Check::per_case(
        "shifted product = skew sum",
        Role::Required,
        &pairs,
        |(l, m)| format!("λ={l} μ={m}"),
        |(l, m)| Ok((cyclic_schur_lhs(l, m, spec)?, cyclic_schur_rhs(l, m, spec)?)),
    )?;
    Ok(Outcome { cases: pairs.len(), checks: vec![check] })
}

/// `Σ_λ z^{|λ|} s_{λᵗ}(q^{-ρ}) s_λ(q^{-ρ})`.
pub(crate) fn cauchy_dual_lhs(spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let terms = partitions_upto(spec.hi_forms()[1])
        .par_iter()
        .map(|lam| {
            principal_schur(&lam.transpose(), spec)?
                .mul(&principal_schur(lam, spec)?)?
                .shift(Monomial::z(1, lam.size() as i32))
        })
        .collect::<Result<Vec<_>>>()?;
    window_sum(spec, terms)
}

pub(crate) fn cauchy_dual_rhs(spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    plus_power_product(Monomial::z(1, 1), spec)
}

pub(crate) fn cauchy_dual(spec: &Arc<TruncationSpec>) -> Result<Outcome> {
    let check = Check::compare("sum = product", Role::Required, &cauchy_dual_lhs(spec)?, &cauchy_dual_rhs(spec)?)?;
    Ok(Outcome { cases: 1, checks: vec![check] })
}

/// `∏_{i,j≥1} (1 + z₁ q^{i+j−1−τ_i−τᵗ_j}) / (1 + z₁ q^{i+j−1})`, the double product cut
/// where its factors leave the u-window.
pub(crate) fn hook_ratio(tau: &Partition, spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let tt = tau.transpose();
    let z1 = |e: i32| Monomial::new(e, &[1]);
    let exponent = |i: u32, j: u32| (i + j) as i32 - 1 - tau.part(i) as i32 - tt.part(j) as i32;
    let mut poly = MultiSeries::one(spec);
    let mut slack = [0; NFORMS];
    for s in tau.boxes() {
        let e = exponent(s.i, s.j);
        if e <= 0 {
            poly = poly.mul(&MultiSeries::binomial(crate::exactseries::int(1), z1(2 * e), spec)?)?;
            slack[0] -= 2 * e as i64;
        }
    }
    with_adaptive_precision_from(spec, slack, |w| {
        let half = w.hi_forms()[0].max(0) as u32 / 2;
        let (rows, cols) = (tau.len() as u32 + half + 1, tau.part(1) + half + 1);
        let mut factors = Vec::new();
        for i in 1..=rows {
            for j in 1..=cols {
                let e = exponent(i, j);
                if e > 0 {
                    factors.push(EulerFactor::plus(z1(2 * e), c(1)));
                }
            }
        }
        for k in 1..=(half as i32) {
            factors.push(EulerFactor::plus(z1(2 * k), c(-(k as i64))));
        }
        let body = euler_product(factors, w)?;
        poly.restrict(w)?.mul(&body)
    })
}

/// `∏_{s∈τ} (1 + z₁q^{h})(1 + z₁q^{−h})`.
pub(crate) fn hook_pairs(tau: &Partition, spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let mut acc = MultiSeries::one(spec);
    for h in tau.hook_multiset() {
        let h = h as i32;
        let f = MultiSeries::polynomial(
            [
                (Monomial::ONE, c(1)),
                (Monomial::new(2 * h, &[1]), c(1)),
                (Monomial::new(-2 * h, &[1]), c(1)),
                (Monomial::new(0, &[2]), c(1)),
            ],
            spec,
        )?;
        acc = acc.mul(&f)?;
    }
    Ok(acc)
}

/// `z₁^{|τ|} q^{−(‖τ‖²+‖τᵗ‖²)/2} ∏_{s∈τ} (1 + z₁q^{h})(1 + z₁⁻¹q^{h})`.
pub(crate) fn hook_pairs_normalized(tau: &Partition, spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let mut acc = MultiSeries::one(spec);
    for h in tau.hook_multiset() {
        let h = 2 * h as i32;
        acc = acc.mul(&MultiSeries::binomial(crate::exactseries::int(1), Monomial::new(h, &[1]), spec)?)?;
        acc = acc.mul(&MultiSeries::binomial(crate::exactseries::int(1), Monomial::new(h, &[-1]), spec)?)?;
    }
    let norms = (tau.norm_sq() + tau.transpose().norm_sq()) as i32;
    acc.shift(Monomial::new(-norms, &[tau.size() as i32]))
}

pub(crate) fn hook_product(spec: &Arc<TruncationSpec>, max_size: u32) -> Result<Outcome> {
    let taus = partitions_upto(max_size as i64);
    let label = |t: &Partition| format!("τ={t}");
    let checks = vec![
        Check::per_case("double-product ratio = hook pairs", Role::Required, &taus, label, |t| {
            Ok((hook_ratio(t, spec)?, hook_pairs(t, spec)?))
        })?,
        Check::per_case("hook pairs = normalized form", Role::Required, &taus, label, |t| {
            Ok((hook_pairs(t, spec)?, hook_pairs_normalized(t, spec)?))
        })?,
    ];
    Ok(Outcome { cases: taus.len(), checks })
}

/// `P(x)P(y) Σ_ν (zxy)^{|ν|} ∏_s (1+xq^h)(1+x⁻¹q^h)(1+yq^h)(1+y⁻¹q^h)/(1−q^h)⁴`
/// with `z, x, y = z₁, z₂, z₃`.
pub(crate) fn stanley_lhs(spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let terms = partitions_upto(spec.hi_forms()[1])
        .par_iter()
        .map(|nu| {
            let mut acc = MultiSeries::one(spec);
            for h in nu.hook_multiset() {
                let h = 2 * h as i32;
                for var in [2usize, 3] {
                    // x(1 + x⁻¹q^h) = x + q^h
                    let mut m = [0i32; 3];
                    m[var - 1] = 1;
                    let shifted = MultiSeries::polynomial(
                        [(Monomial::new(0, &m), c(1)), (Monomial::u(h), c(1))],
                        spec,
                    )?;
                    let plain = MultiSeries::binomial(crate::exactseries::int(1), Monomial::new(h, &m), spec)?;
                    acc = acc.mul(&shifted)?.mul(&plain)?;
                }
            }
            acc.shift(Monomial::z(1, nu.size() as i32))?.mul(&crate::symfunc::inverse_hook_product(nu, 4, spec)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let sum = window_sum(spec, terms)?;
    let prefactor = plus_power_product(Monomial::z(2, 1), spec)?.mul(&plus_power_product(Monomial::z(3, 1), spec)?)?;
    prefactor.mul(&sum)
}

/// `Σ_η s_{a/η}(q^{-ρ}) s_{b/η}(q^{-ρ})`, cached.
struct PairSums<'a> {
    engine: &'a SchurEngine,
    cache: RwLock<HashMap<(Partition, Partition), Arc<MultiSeries>>>,
}

impl PairSums<'_> {
    fn get(&self, a: &Partition, b: &Partition) -> Result<Arc<MultiSeries>> {
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.cache.read().expect("cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let x = Specialization::principal();
        let mut sum = MultiSeries::zero(self.engine.spec());
        for eta in a.common_subpartitions(b) {
            sum = sum.add(&self.engine.skew_schur(a, &eta, &x)?.mul(&*self.engine.skew_schur(b, &eta, &x)?)?)?;
        }
        let sum = Arc::new(sum);
        self.cache.write().expect("cache poisoned").insert(key, sum.clone());
        Ok(sum)
    }
}

/// The eightfold skew-Schur sum over `ν, μ, λ, η₁..η₄`.
pub(crate) fn stanley_rhs(spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let hi = spec.hi_forms();
    let engine = SchurEngine::new(spec);
    let pairs = PairSums { engine: &engine, cache: RwLock::default() };
    let mut jobs = Vec::new();
    for nu in partitions_upto(hi[1]) {
        for mu in partitions_upto(hi[2]) {
            for lam in partitions_upto(hi[3]) {
                if (nu.size() + mu.size() + lam.size()) as i64 <= hi[5] {
                    jobs.push((nu.clone(), mu.clone(), lam));
                }
            }
        }
    }
    let terms = jobs
        .par_iter()
        .map(|(nu, mu, lam)| {
            let (nt, mt, lt) = (nu.transpose(), mu.transpose(), lam.transpose());
            let factors = [pairs.get(nu, &lt)?, pairs.get(&nt, mu)?, pairs.get(nu, &mt)?, pairs.get(&nt, lam)?];
            let mut acc = MultiSeries::one(spec);
            for f in &factors {
                acc = acc.mul(f)?;
            }
            acc.shift(Monomial::new(0, &[nu.size() as i32, mu.size() as i32, lam.size() as i32]))
        })
        .collect::<Result<Vec<_>>>()?;
    window_sum(spec, terms)
}

pub(crate) fn stanley_k2(spec: &Arc<TruncationSpec>) -> Result<Outcome> {
    let check = Check::compare("hook sum = skew-Schur sum", Role::Required, &stanley_lhs(spec)?, &stanley_rhs(spec)?)?;
    Ok(Outcome { cases: 1, checks: vec![check] })
}
