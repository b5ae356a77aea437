//! Truncated multivariate Laurent series with exact coefficients.
//!
//! Every series carries two bounds per linear form (u, z₁..z₄, z₁+…+z₄):
//!
//! * `prec`: all monomials whose forms are `<= prec` are known exactly; `INF` means
//!   the series is an exact finite polynomial.
//! * `floor`: a lower bound on the support of the underlying (untruncated) series.
//!
//! Products propagate `prec(ab) = min(prec_a + floor_b, prec_b + floor_a)`, which
//! is what makes Laurent arithmetic safe: multiplying by something with negative
//! exponents lowers the exact range instead of silently corrupting it. Results
//! that are not exact on their comparison window are rejected at comparison time.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::param::{int, ParamPoly, ParamRing, ParamTermJson};
use super::window::{clamp_inf, Forms, Monomial, TruncationSpec, INF, NFORMS, NVARS, TOTAL_FORM};
use crate::error::{Error, Result};

const FORM_NAMES: [&str; NFORMS] = ["u", "z1", "z2", "z3", "z4", "z-total"];

fn sat_add(a: i64, b: i64) -> i64 {
    if a >= INF || b >= INF {
        INF
    } else {
        clamp_inf(a + b)
    }
}

fn forms_min(a: &Forms, b: &Forms) -> Forms {
    std::array::from_fn(|k| a[k].min(b[k]))
}

#[derive(Clone, Debug)]
pub struct MultiSeries {
    spec: Arc<TruncationSpec>,
    prec: Forms,
    floor: Forms,
    terms: BTreeMap<Monomial, ParamPoly>,
}

impl PartialEq for MultiSeries {
    fn eq(&self, other: &Self) -> bool {
        *self.spec == *other.spec && self.terms == other.terms
    }
}

impl MultiSeries {
    pub fn zero(spec: &Arc<TruncationSpec>) -> Self {
        MultiSeries { spec: spec.clone(), prec: [INF; NFORMS], floor: [INF; NFORMS], terms: BTreeMap::new() }
    }

    pub fn one(spec: &Arc<TruncationSpec>) -> Self {
        MultiSeries::constant(ParamPoly::one(), spec)
    }

    pub fn constant(c: ParamPoly, spec: &Arc<TruncationSpec>) -> Self {
        MultiSeries::term_exact(Monomial::ONE, c, spec)
    }

    /// A single term, required to lie inside the comparison window.
    pub fn monomial(m: Monomial, coeff: ParamPoly, spec: &Arc<TruncationSpec>) -> Result<Self> {
        if !spec.admits(&m) || !spec.contains(&m) {
            return Err(Error::OutOfWindow(m.to_string()));
        }
        Ok(MultiSeries::term_exact(m, coeff, spec))
    }

    fn term_exact(m: Monomial, coeff: ParamPoly, spec: &Arc<TruncationSpec>) -> Self {
        let mut s = MultiSeries::zero(spec);
        if !coeff.is_zero() {
            s.terms.insert(m, coeff);
            s.floor = m.forms();
        }
        s
    }

    /// An exact Laurent polynomial. Terms may fall outside the comparison window
    /// (intermediate factors such as `1 + z₁⁻¹qʰ` do); only variable activity is checked.
    pub fn polynomial<I>(terms: I, spec: &Arc<TruncationSpec>) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, ParamPoly)>,
    {
        let mut s = MultiSeries::zero(spec);
        for (m, c) in terms {
            if !spec.admits(&m) {
                return Err(Error::OutOfWindow(m.to_string()));
            }
            s.add_term(m, &c);
        }
        s.refresh_floor();
        Ok(s)
    }

    /// `1 + c·m` as an exact polynomial.
    pub fn binomial(c: BigRational, m: Monomial, spec: &Arc<TruncationSpec>) -> Result<Self> {
        MultiSeries::polynomial([(Monomial::ONE, ParamPoly::one()), (m, ParamPoly::constant(c))], spec)
    }

    pub fn spec(&self) -> &TruncationSpec {
        &self.spec
    }

    pub fn spec_arc(&self) -> &Arc<TruncationSpec> {
        &self.spec
    }

    pub fn prec(&self) -> &Forms {
        &self.prec
    }

    pub fn floor(&self) -> &Forms {
        &self.floor
    }

    pub fn is_exact_polynomial(&self) -> bool {
        self.prec.iter().all(|&p| p >= INF)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Every stored term, including those outside the comparison window.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ParamPoly)> {
        self.terms.iter()
    }

    /// Stored terms inside the comparison window, canonical order.
    pub fn window_terms(&self) -> impl Iterator<Item = (&Monomial, &ParamPoly)> {
        self.terms.iter().filter(|(m, _)| self.spec.contains(m))
    }

    fn cap(&self) -> Forms {
        self.spec.hi_forms()
    }

    fn same_spec(&self, other: &MultiSeries) -> Result<()> {
        if Arc::ptr_eq(&self.spec, &other.spec) || *self.spec == *other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    fn add_term(&mut self, m: Monomial, c: &ParamPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn refresh_floor(&mut self) {
        if self.is_exact_polynomial() {
            self.floor = support_min(self.terms.keys());
        }
    }

    fn truncate_to_prec(&mut self) {
        if !self.is_exact_polynomial() {
            let prec = self.prec;
            self.terms.retain(|m, _| m.within(&prec));
        }
    }

    /// Stored coefficient at `m`. Errors if `m` is outside the window or beyond
    /// the exact range (a truncated-away coefficient is not the same as zero).
    pub fn coefficient(&self, m: &Monomial) -> Result<ParamPoly> {
        if !self.spec.admits(m) || !self.spec.contains(m) {
            return Err(Error::OutOfWindow(m.to_string()));
        }
        if !m.within(&self.prec) {
            let (form, have, need) = self.first_short_form(&m.forms());
            return Err(Error::InsufficientPrecision { form, have, need });
        }
        Ok(self.terms.get(m).cloned().unwrap_or_default())
    }

    /// Coefficient lookup without window checks (`0` if absent).
    pub fn get(&self, m: &Monomial) -> ParamPoly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn first_short_form(&self, need: &Forms) -> (String, i64, i64) {
        (0..NFORMS)
            .find(|&k| self.prec[k] < need[k])
            .map(|k| (FORM_NAMES[k].to_string(), self.prec[k], need[k]))
            .unwrap_or_default()
    }

    /// Whether every window coefficient is known exactly.
    pub fn is_exact_on_window(&self) -> bool {
        let hi = self.cap();
        (0..NFORMS).all(|k| self.prec[k] >= hi[k])
    }

    pub fn check_exact_on_window(&self) -> Result<()> {
        let hi = self.cap();
        if let Some(k) = (0..NFORMS).find(|&k| self.prec[k] < hi[k]) {
            return Err(Error::InsufficientPrecision {
                form: FORM_NAMES[k].to_string(),
                have: self.prec[k],
                need: hi[k],
            });
        }
        Ok(())
    }

    /// Shortfall per form between the exact range and the window (0 where fine).
    pub fn precision_deficit(&self, target: &TruncationSpec) -> Forms {
        let hi = target.hi_forms();
        std::array::from_fn(|k| if hi[k] >= INF { 0 } else { (hi[k] - self.prec[k]).max(0) })
    }

    pub fn add(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.same_spec(other)?;
        let mut out = self.clone();
        out.prec = forms_min(&self.prec, &other.prec);
        out.floor = forms_min(&self.floor, &other.floor);
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        out.truncate_to_prec();
        out.refresh_floor();
        Ok(out)
    }

    pub fn neg(&self) -> MultiSeries {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn sub(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ParamPoly) -> MultiSeries {
        let mut out = self.clone();
        out.terms = self
            .terms
            .iter()
            .map(|(m, v)| (*m, v * c))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        out.refresh_floor();
        out
    }

    pub fn scale_rational(&self, c: &BigRational) -> MultiSeries {
        self.scale(&ParamPoly::constant(c.clone()))
    }

    /// Exact multiplication by `m` (a shift of every exponent).
    pub fn shift(&self, m: Monomial) -> Result<MultiSeries> {
        if !self.spec.admits(&m) {
            return Err(Error::OutOfWindow(m.to_string()));
        }
        let f = m.forms();
        let mut out = MultiSeries {
            spec: self.spec.clone(),
            prec: std::array::from_fn(|k| sat_add(self.prec[k], f[k])),
            floor: std::array::from_fn(|k| sat_add(self.floor[k], f[k])),
            terms: self.terms.iter().map(|(a, c)| (*a * m, c.clone())).collect(),
        };
        if !out.is_exact_polynomial() {
            out.prec = forms_min(&out.prec, &out.cap());
            out.truncate_to_prec();
        }
        Ok(out)
    }

    pub fn mul(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.same_spec(other)?;
        let exact = self.is_exact_polynomial() && other.is_exact_polynomial();
        let prec: Forms = if exact {
            [INF; NFORMS]
        } else {
            let derived: Forms = std::array::from_fn(|k| {
                sat_add(self.prec[k], other.floor[k]).min(sat_add(other.prec[k], self.floor[k]))
            });
            forms_min(&derived, &self.cap())
        };
        let floor: Forms = std::array::from_fn(|k| sat_add(self.floor[k], other.floor[k]));
        let (small, large) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        let mut acc: HashMap<Monomial, ParamPoly> = HashMap::new();
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                let m = *ma * *mb;
                if !exact && !m.within(&prec) {
                    continue;
                }
                let v = ca * cb;
                match acc.get_mut(&m) {
                    Some(slot) => *slot += &v,
                    None => {
                        acc.insert(m, v);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let mut out = MultiSeries { spec: self.spec.clone(), prec, floor, terms };
        out.refresh_floor();
        Ok(out)
    }

    /// Product of many factors; an empty list gives 1.
    pub fn product<'a, I>(spec: &Arc<TruncationSpec>, factors: I) -> Result<MultiSeries>
    where
        I: IntoIterator<Item = &'a MultiSeries>,
    {
        let mut acc = MultiSeries::one(spec);
        for f in factors {
            acc = acc.mul(f)?;
        }
        Ok(acc)
    }

    /// Sum of many series with a parallel pairwise reduction. Exact arithmetic makes
    /// the result independent of the schedule.
    pub fn sum_par(spec: &Arc<TruncationSpec>, items: Vec<MultiSeries>) -> Result<MultiSeries> {
        let zero = MultiSeries::zero(spec);
        items
            .into_par_iter()
            .map(Ok)
            .try_reduce(|| zero.clone(), |a, b| a.add(&b))
    }

    pub fn pow_int(&self, n: i64) -> Result<MultiSeries> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut acc = MultiSeries::one(&self.spec);
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// Declares the series exact only up to `prec`, e.g. a partition sum cut off
    /// where its terms leave the window.
    pub fn truncate(&self, prec: &Forms) -> MultiSeries {
        let mut out = self.clone();
        out.prec = forms_min(&out.prec, prec);
        out.truncate_to_prec();
        out.refresh_floor();
        out
    }

    /// Re-home into `spec` (same number of active variables), keeping what is exact there.
    pub fn restrict(&self, spec: &Arc<TruncationSpec>) -> Result<MultiSeries> {
        if spec.active_z() != self.spec.active_z() {
            return Err(Error::SpecMismatch);
        }
        let mut out = self.clone();
        out.spec = spec.clone();
        if !out.is_exact_polynomial() {
            out.prec = forms_min(&out.prec, &spec.hi_forms());
            out.truncate_to_prec();
        }
        Ok(out)
    }

    /// Splits into homogeneous parts by total degree. Requires nonnegative exponents.
    pub(crate) fn graded_parts(&self) -> Vec<Vec<(Monomial, ParamPoly)>> {
        let mut parts: Vec<Vec<(Monomial, ParamPoly)>> = Vec::new();
        for (m, c) in &self.terms {
            let d = m.degree() as usize;
            if parts.len() <= d {
                parts.resize_with(d + 1, Vec::new);
            }
            parts[d].push((*m, c.clone()));
        }
        parts
    }

    pub(crate) fn from_parts(
        spec: &Arc<TruncationSpec>,
        prec: Forms,
        floor: Forms,
        terms: BTreeMap<Monomial, ParamPoly>,
    ) -> MultiSeries {
        let mut s = MultiSeries { spec: spec.clone(), prec, floor, terms };
        s.terms.retain(|_, v| !v.is_zero());
        s.truncate_to_prec();
        s.refresh_floor();
        s
    }

    pub fn to_json(&self) -> Vec<SeriesTermJson> {
        let nz = self.spec.active_z();
        self.window_terms()
            .map(|(m, c)| SeriesTermJson {
                u_exp: m.u_exp(),
                z_exps: m.z_exps()[..nz].to_vec(),
                coeff: c.to_json_terms(),
            })
            .collect()
    }

    /// Human-readable window expansion, e.g. `1 + (-t^2 + 1)*z1 + …`.
    pub fn display(&self, ring: ParamRing) -> String {
        let mut out = String::new();
        for (k, (m, c)) in self.window_terms().enumerate() {
            let cs = c.display(ring);
            let single = c.terms().count() == 1;
            let piece = match (m.is_one(), single, c.is_one()) {
                (true, _, _) => cs,
                (false, _, true) => m.to_string(),
                (false, true, false) if cs == "-1" => format!("-{m}"),
                (false, true, false) => format!("{cs}*{m}"),
                (false, false, _) => format!("({cs})*{m}"),
            };
            if k > 0 {
                if let Some(rest) = piece.strip_prefix('-') {
                    if single {
                        out.push_str(" - ");
                        out.push_str(rest);
                        continue;
                    }
                }
                out.push_str(" + ");
            }
            out.push_str(&piece);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn support_min<'a>(ms: impl Iterator<Item = &'a Monomial>) -> Forms {
    let mut f = [INF; NFORMS];
    for m in ms {
        f = forms_min(&f, &m.forms());
    }
    f
}

/// Wire form of one series term; `u_exp` counts half-powers of q.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTermJson {
    pub u_exp: i32,
    pub z_exps: Vec<i32>,
    pub coeff: Vec<ParamTermJson>,
}

/// The canonical-order-first monomial where `a` and `b` differ on the window.
pub fn first_mismatch(a: &MultiSeries, b: &MultiSeries) -> Result<Option<(Monomial, ParamPoly, ParamPoly)>> {
    a.same_spec(b)?;
    a.check_exact_on_window()?;
    b.check_exact_on_window()?;
    let mut keys: Vec<&Monomial> = a.window_terms().chain(b.window_terms()).map(|(m, _)| m).collect();
    keys.sort();
    keys.dedup();
    for m in keys {
        let (ca, cb) = (a.get(m), b.get(m));
        if ca != cb {
            return Ok(Some((*m, ca, cb)));
        }
    }
    Ok(None)
}

/// Minimal coordinatewise exponent over the stored terms, if it is itself a term.
fn leading_monomial(a: &MultiSeries) -> Option<Monomial> {
    let mut m = [i32::MAX; NVARS];
    for k in a.terms.keys() {
        for v in 0..NVARS {
            m[v] = m[v].min(k.0[v]);
        }
    }
    let m = Monomial(m);
    a.terms.contains_key(&m).then_some(m)
}

impl MultiSeries {
    /// Multiplicative inverse by geometric expansion after factoring out the leading
    /// term `c·m`. Requires `m` to be the coordinatewise minimum of the support and
    /// `c` a nonzero rational.
    pub fn inverse(&self) -> Result<MultiSeries> {
        if self.is_zero() {
            return Err(Error::NotInvertible("zero series".into()));
        }
        let m = leading_monomial(self)
            .ok_or_else(|| Error::NotInvertible("no coordinatewise-minimal leading term".into()))?;
        let mf = m.forms();
        if (0..NFORMS).any(|k| self.floor[k] < mf[k]) {
            return Err(Error::NotInvertible(format!("support may extend below the leading term {m}")));
        }
        let c = self.terms[&m]
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::NotInvertible(format!("leading coefficient of {m} is not a rational unit")))?;
        // unit = a / (c·m) = 1 + r with r supported on nonnegative exponents.
        let unit = self.shift(m.inverse())?.scale_rational(&(BigRational::one() / &c));
        let cap = self.cap();
        let work_prec: Forms = std::array::from_fn(|k| unit.prec[k].min(sat_add(cap[k], mf[k])));
        let parts = unit.graded_parts();
        let max_deg = max_degree(&work_prec);
        let mut inv_parts: Vec<Vec<(Monomial, ParamPoly)>> = vec![vec![(Monomial::ONE, ParamPoly::one())]];
        for n in 1..=max_deg {
            let mut acc: HashMap<Monomial, ParamPoly> = HashMap::new();
            for k in 1..=n.min(parts.len().saturating_sub(1)) {
                accumulate_product(&mut acc, &parts[k], &inv_parts[n - k], &work_prec, &int(-1));
            }
            inv_parts.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        let terms = inv_parts.into_iter().flatten().collect();
        let b = MultiSeries::from_parts(&self.spec, work_prec, [0; NFORMS], terms);
        Ok(b.shift(m.inverse())?.scale_rational(&(BigRational::one() / c)))
    }

    fn check_topologically_nilpotent(&self) -> Result<()> {
        if !self.get(&Monomial::ONE).is_zero() {
            return Err(Error::NonzeroConstant);
        }
        if self.terms.keys().any(|m| !m.is_nonnegative()) || self.floor[..NVARS].iter().any(|&f| f < 0) {
            return Err(Error::Domain("log/exp need nonnegative exponents".into()));
        }
        Ok(())
    }

    fn transcendental_prec(&self) -> Forms {
        forms_min(&self.prec, &self.cap())
    }

    /// `exp(a)` for `a` with zero constant term and nonnegative exponents.
    pub fn exp(&self) -> Result<MultiSeries> {
        self.check_topologically_nilpotent()?;
        let prec = self.transcendental_prec();
        let parts = self.graded_parts();
        let max_deg = max_degree(&prec);
        let mut out: Vec<Vec<(Monomial, ParamPoly)>> = vec![vec![(Monomial::ONE, ParamPoly::one())]];
        for n in 1..=max_deg {
            let mut acc: HashMap<Monomial, ParamPoly> = HashMap::new();
            for k in 1..=n.min(parts.len().saturating_sub(1)) {
                let w = int(k as i64) / int(n as i64);
                accumulate_product(&mut acc, &parts[k], &out[n - k], &prec, &w);
            }
            out.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        Ok(MultiSeries::from_parts(&self.spec, prec, [0; NFORMS], out.into_iter().flatten().collect()))
    }

    /// `log(1 + a)` for `a` with zero constant term and nonnegative exponents.
    pub fn log1p(&self) -> Result<MultiSeries> {
        self.check_topologically_nilpotent()?;
        let prec = self.transcendental_prec();
        let parts = self.graded_parts();
        let max_deg = max_degree(&prec);
        let mut out: Vec<Vec<(Monomial, ParamPoly)>> = vec![Vec::new()];
        for n in 1..=max_deg {
            let mut acc: HashMap<Monomial, ParamPoly> = HashMap::new();
            if let Some(p) = parts.get(n) {
                for (m, c) in p {
                    acc.insert(*m, c.clone());
                }
            }
            for k in 1..n {
                if let Some(a) = parts.get(n - k) {
                    let w = -(int(k as i64) / int(n as i64));
                    accumulate_product(&mut acc, &out[k], a, &prec, &w);
                }
            }
            out.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        Ok(MultiSeries::from_parts(&self.spec, prec, [0; NFORMS], out.into_iter().flatten().collect()))
    }

    /// `base^e = exp(e · log(base))` for `base = 1 + a`.
    pub fn pow_param(&self, e: &ParamPoly) -> Result<MultiSeries> {
        if !self.get(&Monomial::ONE).is_one() {
            return Err(Error::NonzeroConstant);
        }
        let a = self.sub(&MultiSeries::one(&self.spec))?;
        a.log1p()?.scale(e).exp()
    }
}

fn max_degree(prec: &Forms) -> usize {
    let z: i64 = prec[1..=4].iter().map(|&p| p.min(INF)).fold(0, sat_add);
    let total = sat_add(prec[0], z.min(prec[TOTAL_FORM]));
    assert!(total < INF, "unbounded degree for a truncated series");
    total.max(0) as usize
}

fn accumulate_product(
    acc: &mut HashMap<Monomial, ParamPoly>,
    a: &[(Monomial, ParamPoly)],
    b: &[(Monomial, ParamPoly)],
    prec: &Forms,
    weight: &BigRational,
) {
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = *ma * *mb;
            if !m.within(prec) {
                continue;
            }
            let v = (ca * cb).scale(weight);
            match acc.get_mut(&m) {
                Some(slot) => *slot += &v,
                None => {
                    acc.insert(m, v);
                }
            }
        }
    }
}
