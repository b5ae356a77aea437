//! Monomials and truncation windows.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of series variables: `u = q^{1/2}` followed by `z₁..z₄`.
pub const NVARS: usize = 5;
/// Linear forms tracked for precision: the five coordinates and `z₁+…+z₄`.
pub const NFORMS: usize = 6;
pub const TOTAL_FORM: usize = 5;

/// Stand-in for an unbounded precision or an empty support.
pub const INF: i64 = i64::MAX / 4;

pub type Forms = [i64; NFORMS];

pub fn clamp_inf(x: i64) -> i64 {
    x.clamp(-INF, INF)
}

/// Exponent vector `(u, z₁, z₂, z₃, z₄)`. Ordered graded-lexicographically.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(pub [i32; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn u(e: i32) -> Self {
        Monomial([e, 0, 0, 0, 0])
    }

    /// `q^e`, i.e. `u^{2e}`.
    pub fn q(e: i32) -> Self {
        Monomial::u(2 * e)
    }

    /// `z_k^e` for `k` in `1..=4`.
    pub fn z(k: usize, e: i32) -> Self {
        assert!((1..=4).contains(&k), "z index {k} out of range");
        let mut m = Monomial::ONE;
        m.0[k] = e;
        m
    }

    pub fn new(u: i32, z: &[i32]) -> Self {
        assert!(z.len() <= 4, "at most four z variables");
        let mut m = Monomial::u(u);
        m.0[1..=z.len()].copy_from_slice(z);
        m
    }

    pub fn u_exp(&self) -> i32 {
        self.0[0]
    }

    pub fn z_exps(&self) -> [i32; 4] {
        [self.0[1], self.0[2], self.0[3], self.0[4]]
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; NVARS]
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn forms(&self) -> Forms {
        let e = self.0.map(|x| x as i64);
        [e[0], e[1], e[2], e[3], e[4], e[1] + e[2] + e[3] + e[4]]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.map(|e| -e))
    }

    pub fn scaled(&self, k: i32) -> Monomial {
        Monomial(self.0.map(|e| e * k))
    }

    /// True when every form of `self` is at most the matching bound.
    pub fn within(&self, prec: &Forms) -> bool {
        self.forms().iter().zip(prec).all(|(f, p)| f <= p)
    }
}

impl std::ops::Mul for Monomial {
    type Output = Monomial;
    // Exponents add.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Monomial) -> Monomial {
        let mut out = self;
        for (a, b) in out.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let u = self.0[0];
        if u != 0 {
            if u % 2 == 0 {
                let e = u / 2;
                parts.push(if e == 1 { "q".to_string() } else { format!("q^{e}") });
            } else {
                parts.push(format!("q^({u}/2)"));
            }
        }
        for k in 1..NVARS {
            match self.0[k] {
                0 => {}
                1 => parts.push(format!("z{k}")),
                e => parts.push(format!("z{k}^{e}")),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Closed integer interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub lo: i32,
    pub hi: i32,
}

impl Window {
    pub fn new(lo: i32, hi: i32) -> Self {
        Window { lo, hi }
    }

    pub fn upto(hi: i32) -> Self {
        Window { lo: 0, hi }
    }
}

/// Per-variable exponent windows; two series compare only under equal specs.
///
/// `u` is always present (a window of `[0, 0]` means "no q-dependence").
/// Up to four `z` variables are active; inactive ones are pinned to exponent 0.
/// An optional bound on `z₁+…+z₄` expresses "total loop order".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub u_window: Window,
    pub z_windows: Vec<Window>,
    pub z_total: Option<i32>,
}

impl TruncationSpec {
    pub fn new(u_window: Window, z_windows: Vec<Window>) -> Result<Self> {
        let spec = TruncationSpec { u_window, z_windows, z_total: None };
        spec.validate()?;
        Ok(spec)
    }

    /// Only `u`, no z variables.
    pub fn q_only(u_window: Window) -> Self {
        TruncationSpec { u_window, z_windows: Vec::new(), z_total: None }
    }

    pub fn with_total(mut self, total: i32) -> Result<Self> {
        self.z_total = Some(total);
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let bad = |w: &Window| w.lo > w.hi;
        if bad(&self.u_window) || self.z_windows.iter().any(bad) {
            return Err(Error::Domain(format!("empty window in {self:?}")));
        }
        if self.z_windows.len() > 4 {
            return Err(Error::Domain("at most four z variables".into()));
        }
        if let Some(t) = self.z_total {
            let lo: i64 = self.z_windows.iter().map(|w| w.lo as i64).sum();
            if (t as i64) < lo {
                return Err(Error::Domain(format!("z-total bound {t} below window floor {lo}")));
            }
        }
        Ok(())
    }

    pub fn active_z(&self) -> usize {
        self.z_windows.len()
    }

    fn z_window(&self, k: usize) -> Window {
        self.z_windows.get(k - 1).copied().unwrap_or(Window::new(0, 0))
    }

    /// Upper bounds for every precision form.
    pub fn hi_forms(&self) -> Forms {
        let mut f = [0; NFORMS];
        f[0] = self.u_window.hi as i64;
        for k in 1..=4 {
            f[k] = self.z_window(k).hi as i64;
        }
        f[TOTAL_FORM] = self.z_total.map_or(INF, |t| t as i64);
        f
    }

    pub fn lo_forms(&self) -> Forms {
        let mut f = [0; NFORMS];
        f[0] = self.u_window.lo as i64;
        for k in 1..=4 {
            f[k] = self.z_window(k).lo as i64;
        }
        f[TOTAL_FORM] = -INF;
        f
    }

    /// Whether `m` lies inside the comparison window.
    pub fn contains(&self, m: &Monomial) -> bool {
        let (lo, hi, f) = (self.lo_forms(), self.hi_forms(), m.forms());
        (0..NFORMS).all(|k| lo[k] <= f[k] && f[k] <= hi[k])
    }

    /// Whether `m` only uses active variables.
    pub fn admits(&self, m: &Monomial) -> bool {
        (self.active_z() + 1..NVARS).all(|k| m.0[k] == 0)
    }

    /// The same windows with upper bounds raised by `slack` (inactive variables untouched).
    pub fn widened(&self, slack: &Forms) -> TruncationSpec {
        let mut out = self.clone();
        out.u_window.hi += slack[0] as i32;
        for (k, w) in out.z_windows.iter_mut().enumerate() {
            w.hi += slack[k + 1] as i32;
        }
        if let Some(t) = out.z_total.as_mut() {
            *t += slack[TOTAL_FORM] as i32;
        }
        out
    }

    /// Every monomial of the comparison window, in canonical order.
    pub fn window_monomials(&self) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = Monomial::ONE;
        self.push_monomials(0, &mut cur, &mut out);
        out.sort();
        out
    }

    fn push_monomials(&self, var: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if var > self.active_z() {
            if self.contains(cur) {
                out.push(*cur);
            }
            return;
        }
        let w = if var == 0 { self.u_window } else { self.z_windows[var - 1] };
        for e in w.lo..=w.hi {
            cur.0[var] = e;
            self.push_monomials(var + 1, cur, out);
        }
        cur.0[var] = 0;
    }
}

impl fmt::Display for TruncationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u∈[{},{}]", self.u_window.lo, self.u_window.hi)?;
        for (k, w) in self.z_windows.iter().enumerate() {
            write!(f, " z{}∈[{},{}]", k + 1, w.lo, w.hi)?;
        }
        if let Some(t) = self.z_total {
            write!(f, " Σz≤{t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_order() {
        let mut ms = vec![Monomial::z(1, 1), Monomial::ONE, Monomial::u(2), Monomial::new(1, &[1])];
        ms.sort();
        assert_eq!(ms, vec![Monomial::ONE, Monomial::z(1, 1), Monomial::new(1, &[1]), Monomial::u(2)]);
    }

    #[test]
    fn display() {
        assert_eq!(Monomial::new(3, &[0, 2]).to_string(), "q^(3/2)*z2^2");
        assert_eq!(Monomial::new(2, &[1]).to_string(), "q*z1");
        assert_eq!(Monomial::ONE.to_string(), "1");
    }

    #[test]
    fn window_membership() {
        let spec = TruncationSpec::new(Window::new(-2, 4), vec![Window::new(-1, 2), Window::upto(2)])
            .unwrap()
            .with_total(3)
            .unwrap();
        assert!(spec.contains(&Monomial::new(-2, &[-1, 2])));
        assert!(!spec.contains(&Monomial::new(0, &[2, 2])));
        assert!(!spec.contains(&Monomial::new(0, &[0, 0, 1])));
        assert!(!spec.admits(&Monomial::z(3, 1)));
        assert!(spec.window_monomials().iter().all(|m| spec.contains(m)));
        assert!(TruncationSpec::new(Window::new(1, 0), vec![]).is_err());
        let w = spec.widened(&[2, 1, 0, 0, 0, 1]);
        assert_eq!(w.u_window.hi, 6);
        assert_eq!(w.z_windows[0].hi, 3);
        assert_eq!(w.z_total, Some(4));
    }
}
