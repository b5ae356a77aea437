//! Schur and skew-Schur functions at the specializations `q^{-ρ-ν}`.
//!
//! The variables are `x_i = q^{i − 1/2 − ν_i}`, i.e. `u^{2i − 1 − 2ν_i}`. With
//! [`VarCount::All`] the infinitely many variables past `ℓ(ν)` are handled in
//! closed form (`h_k` of a geometric progression), so no variable truncation
//! error exists at all. [`VarCount::Finite`] evaluates the polynomial in the first
//! `m` variables only, which is what the tableau oracle checks against.
//!
//! Skew functions use the Jacobi–Trudi determinant in `h` or its dual in `e`,
//! whichever matrix is smaller.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::Result;
use crate::exactseries::{
    euler_product, exp_const, with_adaptive_precision_from, EulerFactor, Forms, Monomial, MultiSeries,
    ParamPoly, TruncationSpec, NFORMS,
};
use crate::partitions::Partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarCount {
    Finite(u32),
    All,
}

/// `q^{-ρ-ν}` (or `q^{-ρ-νᵗ}` with `transpose`) in `vars` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Specialization {
    pub shift: Partition,
    pub transpose: bool,
    pub vars: VarCount,
}

impl Specialization {
    /// `q^{-ρ} = (q^{1/2}, q^{3/2}, …)`.
    pub fn principal() -> Self {
        Specialization { shift: Partition::empty(), transpose: false, vars: VarCount::All }
    }

    /// `q^{-ρ-ν}`.
    pub fn shifted(nu: &Partition) -> Self {
        Specialization { shift: nu.clone(), transpose: false, vars: VarCount::All }
    }

    /// `q^{-ρ-νᵗ}`.
    pub fn shifted_transpose(nu: &Partition) -> Self {
        Specialization { shift: nu.clone(), transpose: true, vars: VarCount::All }
    }

    pub fn with_vars(mut self, m: u32) -> Self {
        self.vars = VarCount::Finite(m);
        self
    }

    /// The shift actually applied (`ν` or `νᵗ`).
    pub fn effective_shift(&self) -> Partition {
        if self.transpose {
            self.shift.transpose()
        } else {
            self.shift.clone()
        }
    }

    /// u-exponent of `x_i`, `i >= 1`.
    pub fn var_exponent(&self, i: u32) -> i32 {
        let nu = self.effective_shift();
        2 * i as i32 - 1 - 2 * nu.part(i) as i32
    }

    /// Smallest u-exponent among the variables.
    pub fn min_exponent(&self) -> i32 {
        let nu = self.effective_shift();
        let head = match self.vars {
            VarCount::All => nu.len() as u32,
            VarCount::Finite(m) => m.min(nu.len() as u32),
        };
        (1..=head.max(1)).map(|i| self.var_exponent(i)).min().unwrap_or(1)
    }
}

/// Smallest `m` such that `x_{m+1}` alone cannot reach the u-window.
pub fn required_variable_count(shift: &Partition, trunc: &TruncationSpec) -> u32 {
    let half = (trunc.u_window.hi.max(0) as u32).div_ceil(2);
    (shift.len() as u32).max(half)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    H,
    E,
}

/// Caches `h_k` / `e_k` and skew functions for one working window.
pub struct SchurEngine {
    spec: Arc<TruncationSpec>,
    basic: RwLock<HashMap<(Specialization, Kind, u32), Arc<MultiSeries>>>,
    skew: RwLock<HashMap<(Partition, Partition, Specialization), Arc<MultiSeries>>>,
}

impl SchurEngine {
    pub fn new(spec: &Arc<TruncationSpec>) -> Self {
        SchurEngine { spec: spec.clone(), basic: RwLock::default(), skew: RwLock::default() }
    }

    pub fn spec(&self) -> &Arc<TruncationSpec> {
        &self.spec
    }

    fn basic(&self, kind: Kind, k: u32, sp: &Specialization) -> Result<Arc<MultiSeries>> {
        let key = (sp.clone(), kind, k);
        if let Some(hit) = self.basic.read().expect("cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let value = Arc::new(self.compute_basic(kind, k, sp)?);
        self.basic.write().expect("cache poisoned").insert(key, value.clone());
        Ok(value)
    }

    fn compute_basic(&self, kind: Kind, k: u32, sp: &Specialization) -> Result<MultiSeries> {
        let nu = sp.effective_shift();
        let (head, infinite_tail) = match sp.vars {
            VarCount::All => (nu.len() as u32, true),
            VarCount::Finite(m) => (m, false),
        };
        // DP over the finitely many explicit variables: coefficient lists in u.
        let mut poly: Vec<HashMap<i32, i64>> = vec![HashMap::new(); k as usize + 1];
        poly[0].insert(0, 1);
        for i in 1..=head {
            let x = sp.var_exponent(i);
            let prev = poly.clone();
            for j in 1..=k as usize {
                // h_j gains x_i·h_{j-1} over the updated row, e_j over the previous one.
                let lower = if kind == Kind::H { &poly[j - 1] } else { &prev[j - 1] };
                let mut acc = prev[j].clone();
                for (e, c) in lower {
                    *acc.entry(e + x).or_default() += c;
                }
                acc.retain(|_, c| *c != 0);
                poly[j] = acc;
            }
        }
        let to_series = |p: &HashMap<i32, i64>| {
            MultiSeries::polynomial(p.iter().map(|(e, c)| (Monomial::u(*e), ParamPoly::from_int(*c))), &self.spec)
        };
        if !infinite_tail {
            return to_series(&poly[k as usize]);
        }
        // Tail variables u^{2L+1}, u^{2L+3}, … in closed form.
        let l = head as i32;
        let mut total = MultiSeries::zero(&self.spec);
        for j in 0..=k {
            let head_part = &poly[(k - j) as usize];
            if head_part.is_empty() {
                continue;
            }
            let tail = self.tail(kind, j, l)?;
            total = total.add(&to_series(head_part)?.mul(&tail)?)?;
        }
        Ok(total)
    }

    /// `h_j` or `e_j` of `(u^{2L+1}, u^{2L+3}, …)`.
    fn tail(&self, kind: Kind, j: u32, l: i32) -> Result<MultiSeries> {
        let j = j as i32;
        let lead = j * (2 * l + 1) + if kind == Kind::E { j * (j - 1) } else { 0 };
        let denominators = (1..=j).map(|i| EulerFactor::minus(Monomial::q(i), exp_const(-1)));
        euler_product(denominators, &self.spec)?.shift(Monomial::u(lead))
    }

    /// `h_k` at the specialization on this engine's window (exact range not checked).
    pub fn complete_h(&self, k: i64, sp: &Specialization) -> Result<Arc<MultiSeries>> {
        self.entry(Kind::H, k, sp)
    }

    pub fn elementary_e(&self, k: i64, sp: &Specialization) -> Result<Arc<MultiSeries>> {
        self.entry(Kind::E, k, sp)
    }

    fn entry(&self, kind: Kind, k: i64, sp: &Specialization) -> Result<Arc<MultiSeries>> {
        if k < 0 {
            Ok(Arc::new(MultiSeries::zero(&self.spec)))
        } else {
            self.basic(kind, k as u32, sp)
        }
    }

    /// `s_{λ/μ}` at the specialization on this engine's window.
    pub fn skew_schur(&self, lam: &Partition, mu: &Partition, sp: &Specialization) -> Result<Arc<MultiSeries>> {
        if !lam.contains(mu) {
            return Ok(Arc::new(MultiSeries::zero(&self.spec)));
        }
        if lam == mu {
            return Ok(Arc::new(MultiSeries::one(&self.spec)));
        }
        let key = (lam.clone(), mu.clone(), sp.clone());
        if let Some(hit) = self.skew.read().expect("cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let (lt, mt) = (lam.transpose(), mu.transpose());
        let (kind, rows, sub) = if lam.len() <= lt.len() { (Kind::H, lam, mu) } else { (Kind::E, &lt, &mt) };
        let n = rows.len();
        let mut matrix = Vec::with_capacity(n);
        for i in 1..=n as i64 {
            let mut row = Vec::with_capacity(n);
            for j in 1..=n as i64 {
                let k = rows.part(i as u32) as i64 - sub.part(j as u32) as i64 - i + j;
                row.push(self.entry(kind, k, sp)?);
            }
            matrix.push(row);
        }
        let value = Arc::new(determinant(&self.spec, &matrix)?);
        self.skew.write().expect("cache poisoned").insert(key, value.clone());
        Ok(value)
    }
}

/// Determinant by Laplace expansion along rows, memoized over column subsets.
pub fn determinant(spec: &Arc<TruncationSpec>, m: &[Vec<Arc<MultiSeries>>]) -> Result<MultiSeries> {
    let n = m.len();
    if n == 0 {
        return Ok(MultiSeries::one(spec));
    }
    let mut memo: HashMap<u32, MultiSeries> = HashMap::new();
    minor(spec, m, 0, (1u32 << n) - 1, &mut memo)
}

fn minor(
    spec: &Arc<TruncationSpec>,
    m: &[Vec<Arc<MultiSeries>>],
    row: usize,
    cols: u32,
    memo: &mut HashMap<u32, MultiSeries>,
) -> Result<MultiSeries> {
    if row == m.len() {
        return Ok(MultiSeries::one(spec));
    }
    if let Some(hit) = memo.get(&cols) {
        return Ok(hit.clone());
    }
    let mut acc = MultiSeries::zero(spec);
    let mut sign = true;
    for c in 0..m.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &m[row][c];
        if !entry.is_zero() {
            let sub = minor(spec, m, row + 1, cols & !(1 << c), memo)?;
            let term = entry.mul(&sub)?;
            acc = if sign { acc.add(&term)? } else { acc.sub(&term)? };
        }
        sign = !sign;
    }
    memo.insert(cols, acc.clone());
    Ok(acc)
}

fn schur_slack(lam: &Partition, mu: &Partition, sp: &Specialization) -> Forms {
    let mut slack = [0; NFORMS];
    let d = (lam.size() as i64 - mu.size() as i64).max(0);
    slack[0] = (-(sp.min_exponent() as i64) * d).max(0);
    slack
}

/// `h_k` at the specialization, exact on `trunc`.
pub fn complete_h(k: i64, sp: &Specialization, trunc: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let mut slack = [0; NFORMS];
    slack[0] = (-(sp.min_exponent() as i64) * k.max(0)).max(0);
    with_adaptive_precision_from(trunc, slack, |w| {
        SchurEngine::new(w).complete_h(k, sp).map(|s| (*s).clone())
    })
}

/// `s_{λ/μ}` at the specialization, exact on `trunc`; zero unless `μ ⊆ λ`.
pub fn skew_schur(
    lam: &Partition,
    mu: &Partition,
    sp: &Specialization,
    trunc: &Arc<TruncationSpec>,
) -> Result<MultiSeries> {
    with_adaptive_precision_from(trunc, schur_slack(lam, mu, sp), |w| {
        SchurEngine::new(w).skew_schur(lam, mu, sp).map(|s| (*s).clone())
    })
}

pub fn schur(lam: &Partition, sp: &Specialization, trunc: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    skew_schur(lam, &Partition::empty(), sp, trunc)
}

/// `s_λ(q^{-ρ}) = q^{‖λᵗ‖²/2} ∏_{s∈λ} (1 − q^{h(s)})^{-1}`.
pub fn principal_schur(lam: &Partition, trunc: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let factors = lam.hook_multiset().into_iter().map(|h| EulerFactor::minus(Monomial::q(h as i32), exp_const(-1)));
    euler_product(factors, trunc)?.shift(Monomial::u(lam.transpose().norm_sq() as i32))
}

/// `∏_{s∈λ} (1 − q^{h(s)})^{-1}` without the prefactor.
pub fn inverse_hook_product(lam: &Partition, power: i64, trunc: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let factors = lam
        .hook_multiset()
        .into_iter()
        .map(|h| EulerFactor::minus(Monomial::q(h as i32), exp_const(-power)));
    euler_product(factors, trunc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactseries::{first_mismatch, Window};

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn qspec(hi: i32) -> Arc<TruncationSpec> {
        Arc::new(TruncationSpec::q_only(Window::new(-hi, hi)))
    }

    #[test]
    fn h0_and_h1() {
        let s = qspec(12);
        let sp = Specialization::principal().with_vars(4);
        let engine = SchurEngine::new(&s);
        assert_eq!(*engine.complete_h(0, &sp).unwrap(), MultiSeries::one(&s));
        assert!(engine.complete_h(-1, &sp).unwrap().is_zero());
        let h1 = engine.complete_h(1, &sp).unwrap();
        let expect = MultiSeries::polynomial((0..4).map(|i| (Monomial::u(2 * i + 1), ParamPoly::one())), &s).unwrap();
        assert_eq!(*h1, expect);
    }

    #[test]
    fn required_variables() {
        let t = TruncationSpec::q_only(Window::new(0, 12));
        assert_eq!(required_variable_count(&Partition::empty(), &t), 6);
        let t = TruncationSpec::q_only(Window::new(0, 4));
        assert_eq!(required_variable_count(&p(&[3, 1]), &t), 2);
    }

    #[test]
    fn skew_trivial_cases() {
        let s = qspec(10);
        let sp = Specialization::principal();
        assert_eq!(skew_schur(&p(&[2, 1]), &p(&[2, 1]), &sp, &s).unwrap(), MultiSeries::one(&s));
        assert!(skew_schur(&p(&[2]), &p(&[1, 1]), &sp, &s).unwrap().is_zero());
    }

    #[test]
    fn jacobi_trudi_matches_hook_formula() {
        let s = qspec(24);
        for n in 0..=5 {
            for lam in Partition::enumerate(n) {
                let jt = schur(&lam, &Specialization::principal(), &s).unwrap();
                let hook = principal_schur(&lam, &s).unwrap();
                assert!(first_mismatch(&jt, &hook).unwrap().is_none(), "{lam}");
            }
        }
    }

    #[test]
    fn single_box_principal() {
        let s = qspec(9);
        let s1 = principal_schur(&p(&[1]), &s).unwrap();
        for k in 0..4 {
            assert!(s1.coefficient(&Monomial::u(2 * k + 1)).unwrap().is_one());
            assert!(s1.coefficient(&Monomial::u(2 * k)).unwrap().is_zero());
        }
    }

    #[test]
    fn finite_variables_converge_for_principal() {
        let s = qspec(14);
        let m = required_variable_count(&Partition::empty(), &s);
        for lam in Partition::enumerate_up_to(4) {
            let all = schur(&lam, &Specialization::principal(), &s).unwrap();
            let fin = schur(&lam, &Specialization::principal().with_vars(m), &s).unwrap();
            let doubled = schur(&lam, &Specialization::principal().with_vars(2 * m), &s).unwrap();
            assert!(first_mismatch(&all, &fin).unwrap().is_none(), "{lam}");
            assert!(first_mismatch(&fin, &doubled).unwrap().is_none(), "{lam}");
        }
    }

    #[test]
    fn shifted_specialization_has_negative_powers() {
        let s = qspec(8);
        let nu = p(&[1]);
        // s_1(q^{-ρ-(1)}) = q^{-1/2} + q^{3/2}/(1-q)
        let s1 = schur(&p(&[1]), &Specialization::shifted(&nu), &s).unwrap();
        assert!(s1.coefficient(&Monomial::u(-1)).unwrap().is_one());
        assert!(s1.coefficient(&Monomial::u(1)).unwrap().is_zero());
        assert!(s1.coefficient(&Monomial::u(3)).unwrap().is_one());
        assert!(s1.coefficient(&Monomial::u(5)).unwrap().is_one());
    }
}
