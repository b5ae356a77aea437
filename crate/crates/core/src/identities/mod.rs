//! Registry of named identities, each verified coefficient by coefficient on a window.

mod common;
mod fourloop;
mod nekrasov;
mod schur;

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactseries::{Monomial, MultiSeries, ParamPoly, ParamRing, TruncationSpec, Window};
use common::{Check, Mismatch, Outcome, Role};

pub use fourloop::LimitReading;
pub use nekrasov::THETA_SAMPLES;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdentityInfo {
    pub name: &'static str,
    pub description: &'static str,
    pub ring: ParamRing,
    /// Number of active z variables the window must have.
    pub z_vars: usize,
    /// Whether the identity has a q-dependence (otherwise the u-window is `[0, 0]`).
    pub uses_q: bool,
    /// Checked separately for each partition (pair); no single LHS/RHS series.
    pub per_case: bool,
}

const fn info(
    name: &'static str,
    description: &'static str,
    ring: ParamRing,
    z_vars: usize,
    uses_q: bool,
    per_case: bool,
) -> IdentityInfo {
    IdentityInfo { name, description, ring, z_vars, uses_q, per_case }
}

pub const REGISTRY: [IdentityInfo; 10] = [
    info("no-classic", "Σ z^|λ| ∏ (h²−t²)/h² = ∏ (1−z^k)^(t²−1)", ParamRing::T, 1, false, false),
    info("no-theta", "ϑ-deformed hook sum = ∏ (1−x^k)^((t−1)(t/ϑ+1)) at sampled ϑ", ParamRing::T, 1, false, false),
    info("cyclic-schur", "s_μ(q^-ρ) s_λ(q^-ρ-μ) = q^(-(κ(μ)+κ(λ))/2) Σ_η s_λᵗ/η s_μᵗ/η, per pair", ParamRing::Rational, 0, true, true),
    info("cauchy-dual", "Σ z^|λ| s_λᵗ(q^-ρ) s_λ(q^-ρ) = ∏ (1+z q^k)^k", ParamRing::Rational, 1, true, false),
    info("hook-product", "double-product ratio = ∏_s (1+z q^h)(1+z q^-h), per partition", ParamRing::Rational, 1, true, true),
    info("no-generalized", "two-loop hook sum = product form = two-loop graph", ParamRing::Rational, 2, true, false),
    info("four-loop", "four-loop graph = sum form; product and alternate sum forms reported", ParamRing::Rational, 4, true, false),
    info("four-loop-limit", "two-parameter limit of four-loop in t1, t3; reports the matching reading", ParamRing::T1T3, 2, false, false),
    info("stanley-k2", "k=2 hook sum = eightfold skew-Schur sum", ParamRing::Rational, 3, true, false),
    info("no-limit-consistency", "no-generalized at z1=-e^(βt), z2=-z, q=e^(-β) as series in β", ParamRing::T, 2, false, false),
];

pub fn list() -> &'static [IdentityInfo] {
    &REGISTRY
}

/// Looks up a registered identity, suggesting close names on failure.
pub fn lookup(name: &str) -> Result<&'static IdentityInfo> {
    REGISTRY.iter().find(|i| i.name == name).ok_or_else(|| {
        let mut scored: Vec<(f64, &str)> =
            REGISTRY.iter().map(|i| (strsim::jaro_winkler(name, i.name), i.name)).filter(|(s, _)| *s > 0.7).collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0));
        Error::UnknownIdentity { name: name.into(), suggestions: scored.into_iter().map(|(_, n)| n.to_string()).collect() }
    })
}

/// Optional knobs; defaults reproduce the standard runs.
#[derive(Clone, Debug, Default)]
pub struct IdentityParams {
    /// A single ϑ for `no-theta` instead of the sample set.
    pub theta: Option<BigRational>,
    /// Largest partition size for the per-case identities.
    pub max_size: Option<u32>,
}

/// The window shape each identity is checked on, at loop order `z_order` and
/// u-window `[−u_half, u_half]`.
pub fn default_window(name: &str, z_order: u32, u_half: u32) -> Result<TruncationSpec> {
    let id = lookup(name)?;
    let n = z_order as i32;
    let u = if id.uses_q { Window::new(-(u_half as i32), u_half as i32) } else { Window::new(0, 0) };
    let spec = match id.name {
        "cyclic-schur" => TruncationSpec::q_only(u),
        "no-generalized" => TruncationSpec::new(u, vec![Window::new(-n, n), Window::upto(n)])?.with_total(n)?,
        "four-loop" | "four-loop-limit" => TruncationSpec::new(u, vec![Window::upto(n); id.z_vars])?.with_total(n)?,
        _ => TruncationSpec::new(u, vec![Window::upto(n); id.z_vars])?,
    };
    Ok(spec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Match,
    Mismatch,
}

impl Verdict {
    fn of(holds: bool) -> Self {
        if holds {
            Verdict::Match
        } else {
            Verdict::Mismatch
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::Mismatch => "mismatch",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MismatchReport {
    pub monomial: String,
    pub u_exp: i32,
    pub z_exps: Vec<i32>,
    pub lhs: String,
    pub rhs: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
}

impl MismatchReport {
    fn new(m: &Mismatch, case: Option<String>, ring: ParamRing, nz: usize) -> Self {
        let (mono, a, b): &(Monomial, ParamPoly, ParamPoly) = m;
        MismatchReport {
            monomial: mono.to_string(),
            u_exp: mono.u_exp(),
            z_exps: mono.z_exps()[..nz].to_vec(),
            lhs: a.display(ring),
            rhs: b.display(ring),
            case,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    /// `required`, `report` (never decisive) or `reading` (one of alternatives).
    pub role: String,
    pub verdict: Verdict,
    pub mismatch: Option<MismatchReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub window: TruncationSpec,
    pub verdict: Verdict,
    pub mismatch: Option<MismatchReport>,
    pub duration_ms: u64,
    pub ring: String,
    pub cases: usize,
    pub checks: Vec<CheckReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matched_readings: Vec<String>,
}

impl IdentityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable form; contains nothing that varies between identical runs.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {}", self.name, self.verdict.as_str());
        let _ = writeln!(out, "  window: {}", self.window);
        let _ = writeln!(out, "  cases: {}", self.cases);
        for c in &self.checks {
            let _ = write!(out, "  [{}] {}: {}", c.role, c.name, c.verdict.as_str());
            if let Some(m) = &c.mismatch {
                let _ = write!(out, " at {}", m.monomial);
                if let Some(case) = &m.case {
                    let _ = write!(out, " ({case})");
                }
                let _ = write!(out, ": lhs {}, rhs {}", m.lhs, m.rhs);
            }
            out.push('\n');
        }
        if !self.matched_readings.is_empty() {
            let _ = writeln!(out, "  matched readings: {}", self.matched_readings.join("; "));
        }
        out
    }
}

fn role_name(r: Role) -> &'static str {
    match r {
        Role::Required => "required",
        Role::Report => "report",
        Role::Reading => "reading",
    }
}

fn check_params(params: &IdentityParams) -> Result<()> {
    match &params.theta {
        Some(th) if *th <= crate::exactseries::int(0) => Err(Error::Domain(format!("ϑ must be positive, got {th}"))),
        _ => Ok(()),
    }
}

fn check_window(id: &IdentityInfo, trunc: &TruncationSpec) -> Result<()> {
    if trunc.active_z() != id.z_vars {
        return Err(Error::WindowMismatch {
            name: id.name.into(),
            reason: format!("needs {} z variables, window has {}", id.z_vars, trunc.active_z()),
        });
    }
    Ok(())
}

fn run(id: &IdentityInfo, spec: &Arc<TruncationSpec>, params: &IdentityParams) -> Result<Outcome> {
    match id.name {
        "no-classic" => nekrasov::no_classic(spec),
        "no-theta" => nekrasov::no_theta(spec, params.theta.clone()),
        "cyclic-schur" => schur::cyclic_schur(spec, params.max_size.unwrap_or(4)),
        "cauchy-dual" => schur::cauchy_dual(spec),
        "hook-product" => schur::hook_product(spec, params.max_size.unwrap_or(5)),
        "no-generalized" => nekrasov::no_generalized(spec),
        "four-loop" => fourloop::four_loop(spec),
        "four-loop-limit" => fourloop::four_loop_limit(spec),
        "stanley-k2" => schur::stanley_k2(spec),
        "no-limit-consistency" => nekrasov::no_limit_consistency(spec),
        other => unreachable!("registry entry {other} has no builder"),
    }
}

/// Builds both sides of `name` on `trunc` and compares them on the window.
pub fn verify(name: &str, trunc: &TruncationSpec, params: &IdentityParams) -> Result<IdentityReport> {
    let id = lookup(name)?;
    check_window(id, trunc)?;
    check_params(params)?;
    let spec = Arc::new(trunc.clone());
    let started = Instant::now();
    let outcome = run(id, &spec, params)?;
    let duration_ms = started.elapsed().as_millis() as u64;

    let nz = trunc.active_z();
    let required_ok = outcome.checks.iter().filter(|c| c.role == Role::Required).all(Check::holds);
    let readings: Vec<&Check> = outcome.checks.iter().filter(|c| c.role == Role::Reading).collect();
    let matched_readings: Vec<String> = readings.iter().filter(|c| c.holds()).map(|c| c.name.clone()).collect();
    let readings_ok = readings.is_empty() || !matched_readings.is_empty();
    let decisive = outcome
        .checks
        .iter()
        .find(|c| c.role == Role::Required && !c.holds())
        .or_else(|| if readings_ok { None } else { readings.first().copied() });
    let mismatch = decisive.map(|c| MismatchReport::new(c.mismatch.as_ref().expect("failed check"), c.case.clone(), id.ring, nz));
    let checks = outcome
        .checks
        .iter()
        .map(|c| CheckReport {
            name: c.name.clone(),
            role: role_name(c.role).into(),
            verdict: Verdict::of(c.holds()),
            mismatch: c.mismatch.as_ref().map(|m| MismatchReport::new(m, c.case.clone(), id.ring, nz)),
        })
        .collect();
    Ok(IdentityReport {
        name: id.name.into(),
        window: trunc.clone(),
        verdict: Verdict::of(required_ok && readings_ok),
        mismatch,
        duration_ms,
        ring: id.ring.label().into(),
        cases: outcome.cases,
        checks,
        matched_readings,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Lhs,
    Rhs,
}

/// One side of a single-series identity, e.g. for printing.
pub fn build_side(name: &str, side: Side, trunc: &TruncationSpec, params: &IdentityParams) -> Result<MultiSeries> {
    let id = lookup(name)?;
    check_window(id, trunc)?;
    check_params(params)?;
    if id.per_case {
        return Err(Error::Domain(format!("{name} is checked per partition and has no single series")));
    }
    let spec = Arc::new(trunc.clone());
    let s = &spec;
    let theta = params.theta.clone().unwrap_or_else(|| crate::exactseries::int(1));
    match (id.name, side) {
        ("no-classic", Side::Lhs) => nekrasov::no_classic_lhs(s),
        ("no-classic", Side::Rhs) => nekrasov::no_classic_rhs(s),
        ("no-theta", Side::Lhs) => nekrasov::no_theta_lhs(s, &theta),
        ("no-theta", Side::Rhs) => nekrasov::no_theta_rhs(s, &theta),
        ("cauchy-dual", Side::Lhs) => schur::cauchy_dual_lhs(s),
        ("cauchy-dual", Side::Rhs) => schur::cauchy_dual_rhs(s),
        ("no-generalized", Side::Lhs) => nekrasov::no_generalized_lhs(s),
        ("no-generalized", Side::Rhs) => nekrasov::no_generalized_rhs(s),
        ("four-loop", Side::Lhs) => fourloop::four_loop_sum(s),
        ("four-loop", Side::Rhs) => fourloop::four_loop_product(s),
        ("four-loop-limit", Side::Lhs) => fourloop::four_loop_limit_lhs(s, LimitReading::Swapped),
        ("four-loop-limit", Side::Rhs) => fourloop::four_loop_limit_rhs(s),
        ("stanley-k2", Side::Lhs) => schur::stanley_lhs(s),
        ("stanley-k2", Side::Rhs) => schur::stanley_rhs(s),
        ("no-limit-consistency", Side::Lhs) => nekrasov::limit_lhs(s),
        ("no-limit-consistency", Side::Rhs) => nekrasov::limit_rhs(s),
        (other, _) => unreachable!("registry entry {other} has no builder"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(name: &str, z: u32, u: u32) -> IdentityReport {
        verify(name, &default_window(name, z, u).unwrap(), &IdentityParams::default()).unwrap()
    }

    #[test]
    fn registry_shape() {
        assert_eq!(list().len(), 10);
        assert!(lookup("no-classic").is_ok());
        match lookup("no-clasic") {
            Err(Error::UnknownIdentity { suggestions, .. }) => assert_eq!(suggestions[0], "no-classic"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn no_classic_first_coefficient() {
        let spec = default_window("no-classic", 1, 0).unwrap();
        let rhs = build_side("no-classic", Side::Rhs, &spec, &IdentityParams::default()).unwrap();
        let c1 = rhs.coefficient(&Monomial::z(1, 1)).unwrap();
        assert_eq!(c1.display(ParamRing::T), "-t^2 + 1");
        assert_eq!(quick("no-classic", 4, 0).verdict, Verdict::Match);
    }

    #[test]
    fn perturbed_exponent_is_caught_at_first_order() {
        let spec = Arc::new(default_window("no-classic", 3, 0).unwrap());
        let lhs = nekrasov::no_classic_lhs(&spec).unwrap();
        let wrong = crate::exactseries::euler_product_families(
            &[common::minus_powers(Monomial::z(1, 1), common::t().pow(2))],
            &spec,
        )
        .unwrap();
        let (m, _, b) = crate::exactseries::first_mismatch(&lhs, &wrong).unwrap().unwrap();
        assert_eq!(m, Monomial::z(1, 1));
        assert_eq!(b.display(ParamRing::T), "-t^2");
    }

    #[test]
    fn small_windows_match() {
        assert_eq!(quick("cauchy-dual", 0, 4).verdict, Verdict::Match);
        assert_eq!(quick("cauchy-dual", 3, 8).verdict, Verdict::Match);
        assert_eq!(quick("no-theta", 3, 0).verdict, Verdict::Match);
        assert_eq!(quick("no-generalized", 2, 6).verdict, Verdict::Match);
    }

    #[test]
    fn window_shape_is_enforced() {
        let spec = default_window("no-classic", 2, 0).unwrap();
        assert!(matches!(
            verify("four-loop", &spec, &IdentityParams::default()),
            Err(Error::WindowMismatch { .. })
        ));
        assert!(build_side("cyclic-schur", Side::Lhs, &default_window("cyclic-schur", 0, 4).unwrap(), &IdentityParams::default()).is_err());
    }
}
