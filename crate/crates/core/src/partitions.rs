//! Integer partitions and their box statistics.
//!
//! Boxes are addressed by `(i, j)` with `1 <= i <= len()` and `1 <= j <= parts[i-1]`.
//! Arm and leg follow the convention
//!
//! ```text
//! arm(i, j) = λᵗ_j − i,   leg(i, j) = λ_i − j,   hook = arm + leg + 1
//! ```
//!
//! so that "arm" counts along the column and "leg" along the row. All formulas
//! downstream are written in terms of `λ`, `λᵗ`, `i`, `j` only.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

/// A box `(i, j)` of a Young diagram, both coordinates 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoxCoord {
    pub i: u32,
    pub j: u32,
}

impl BoxCoord {
    pub fn new(i: u32, j: u32) -> Self {
        BoxCoord { i, j }
    }
}

impl Partition {
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Builds a partition, rejecting zero parts and increasing sequences.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Domain(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!("partition {parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    /// Drops trailing zeros, then validates.
    pub fn from_weak(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of nonzero parts, ℓ(λ).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// |λ|.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// λ_i with the 1-based convention; zero past the end.
    pub fn part(&self, i: u32) -> u32 {
        if i == 0 {
            return 0;
        }
        self.parts.get(i as usize - 1).copied().unwrap_or(0)
    }

    pub fn transpose(&self) -> Partition {
        let first = self.part(1);
        let parts = (1..=first)
            .map(|j| self.parts.iter().take_while(|&&p| p >= j).count() as u32)
            .collect();
        Partition { parts }
    }

    /// Whether the diagram of `other` fits inside this one.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    pub fn contains_box(&self, s: BoxCoord) -> bool {
        s.i >= 1 && s.j >= 1 && s.j <= self.part(s.i)
    }

    /// All boxes in row-major order.
    pub fn boxes(&self) -> impl Iterator<Item = BoxCoord> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| (1..=p).map(move |j| BoxCoord::new(r as u32 + 1, j)))
    }

    fn check_box(&self, s: BoxCoord) -> Result<()> {
        if self.contains_box(s) {
            Ok(())
        } else {
            Err(Error::Domain(format!("box ({}, {}) is not in {}", s.i, s.j, self)))
        }
    }

    pub fn arm(&self, s: BoxCoord) -> Result<u32> {
        self.check_box(s)?;
        Ok(self.transpose().part(s.j) - s.i)
    }

    pub fn leg(&self, s: BoxCoord) -> Result<u32> {
        self.check_box(s)?;
        Ok(self.part(s.i) - s.j)
    }

    pub fn hook(&self, s: BoxCoord) -> Result<u32> {
        self.check_box(s)?;
        Ok(self.part(s.i) + self.transpose().part(s.j) + 1 - s.i - s.j)
    }

    /// Hook lengths of every box, row-major. Length equals `size()`.
    pub fn hook_multiset(&self) -> Vec<u32> {
        let t = self.transpose();
        self.boxes().map(|s| self.part(s.i) + t.part(s.j) + 1 - s.i - s.j).collect()
    }

    /// κ(λ) = Σ λ_i (λ_i + 1 − 2i). Antisymmetric under transposition.
    pub fn kappa(&self) -> i64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(r, &p)| {
                let (p, i) = (p as i64, r as i64 + 1);
                p * (p + 1 - 2 * i)
            })
            .sum()
    }

    /// ‖λ‖² = Σ λ_i².
    pub fn norm_sq(&self) -> u64 {
        self.parts.iter().map(|&p| (p as u64) * (p as u64)).sum()
    }

    /// All partitions of `n`, lexicographically decreasing (so `[n]` first).
    pub fn enumerate(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fill(n, n, &mut cur, &mut out);
        out
    }

    /// All partitions of every size `0..=n`, by size then lexicographically decreasing.
    pub fn enumerate_up_to(n: u32) -> Vec<Partition> {
        (0..=n).flat_map(Partition::enumerate).collect()
    }

    /// Every partition contained in both `self` and `other`, by size.
    pub fn common_subpartitions(&self, other: &Partition) -> Vec<Partition> {
        let bound = self.size().min(other.size());
        Partition::enumerate_up_to(bound)
            .into_iter()
            .filter(|eta| self.contains(eta) && other.contains(eta))
            .collect()
    }
}

fn fill(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    for p in (1..=rest.min(max)).rev() {
        cur.push(p);
        fill(rest - p, p, cur, out);
        cur.pop();
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Parses the literal syntax `5,3,2,2,1`; the empty string is ∅.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad partition part {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(deserializer)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(p(&[5, 3, 2, 2, 1]).transpose(), p(&[5, 4, 2, 1, 1]));
        assert_eq!(Partition::empty().transpose(), Partition::empty());
        assert_eq!(p(&[3]).transpose(), p(&[1, 1, 1]));
    }

    #[test]
    fn box_statistics() {
        let lam = p(&[5, 3, 2, 2, 1]);
        let s = BoxCoord::new(2, 2);
        assert_eq!(lam.arm(s).unwrap(), 2);
        assert_eq!(lam.leg(s).unwrap(), 1);
        assert_eq!(lam.hook(s).unwrap(), 4);

        let one = p(&[1]);
        let s = BoxCoord::new(1, 1);
        assert_eq!((one.arm(s).unwrap(), one.leg(s).unwrap(), one.hook(s).unwrap()), (0, 0, 1));

        for n in 1..7 {
            assert_eq!(p(&[n]).hook(BoxCoord::new(1, 1)).unwrap(), n);
            assert_eq!(p(&[n]).leg(BoxCoord::new(1, 1)).unwrap(), n - 1);
        }
    }

    #[test]
    fn invalid_box_is_domain_error() {
        let lam = p(&[2, 1]);
        assert!(matches!(lam.hook(BoxCoord::new(2, 2)), Err(Error::Domain(_))));
        assert!(matches!(lam.arm(BoxCoord::new(0, 1)), Err(Error::Domain(_))));
        assert!(matches!(Partition::empty().leg(BoxCoord::new(1, 1)), Err(Error::Domain(_))));
    }

    #[test]
    fn kappa_and_norm() {
        assert_eq!(Partition::empty().kappa(), 0);
        assert_eq!(p(&[1]).kappa(), 0);
        assert_eq!(p(&[2]).kappa(), 2);
        assert_eq!(p(&[1, 1]).kappa(), -2);
        assert_eq!(Partition::empty().norm_sq(), 0);
        assert_eq!(p(&[2, 1]).norm_sq(), 5);
        assert_eq!(p(&[5, 3, 2, 2, 1]).norm_sq(), 43);
    }

    #[test]
    fn hook_multisets() {
        assert_eq!(p(&[1]).hook_multiset(), vec![1]);
        let mut h = p(&[2, 1]).hook_multiset();
        h.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(h, vec![3, 1, 1]);
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(Partition::enumerate(0), vec![Partition::empty()]);
        let four = Partition::enumerate(4);
        assert_eq!(four.len(), 5);
        assert_eq!(four[0], p(&[4]));
        assert_eq!(four[4], p(&[1, 1, 1, 1]));
        assert!(four.windows(2).all(|w| w[0].parts() > w[1].parts()));
        assert_eq!(Partition::enumerate(10).len(), 42);
    }

    #[test]
    fn invariants_up_to_size_eight() {
        for lam in Partition::enumerate_up_to(8) {
            let t = lam.transpose();
            assert_eq!(t.transpose(), lam);
            assert_eq!(t.kappa(), -lam.kappa());
            assert_eq!(lam.boxes().count() as u32, lam.size());
            let mut a = lam.hook_multiset();
            let mut b = t.hook_multiset();
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b);
            for s in lam.boxes() {
                assert_eq!(lam.hook(s).unwrap(), lam.arm(s).unwrap() + lam.leg(s).unwrap() + 1);
            }
            // κ(λ) = 2 Σ_s (content), with content = j − i.
            let content: i64 = lam.boxes().map(|s| s.j as i64 - s.i as i64).sum();
            assert_eq!(lam.kappa(), 2 * content);
        }
    }

    #[test]
    fn parse_and_json() {
        assert_eq!("5,3,2,2,1".parse::<Partition>().unwrap(), p(&[5, 3, 2, 2, 1]));
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
        assert!("1,2".parse::<Partition>().is_err());
        assert!("1,x".parse::<Partition>().is_err());
        assert_eq!(serde_json::to_string(&p(&[5, 3, 2, 2, 1])).unwrap(), "[5,3,2,2,1]");
        let back: Partition = serde_json::from_str("[3,1]").unwrap();
        assert_eq!(back, p(&[3, 1]));
        assert!(serde_json::from_str::<Partition>("[1,3]").is_err());
    }

    #[test]
    fn containment() {
        assert!(p(&[3, 2]).contains(&p(&[2, 2])));
        assert!(!p(&[3, 2]).contains(&p(&[1, 1, 1])));
        assert!(p(&[3]).contains(&Partition::empty()));
        let common = p(&[2, 1]).common_subpartitions(&p(&[1, 1]));
        assert_eq!(common, vec![Partition::empty(), p(&[1]), p(&[1, 1])]);
    }
}
