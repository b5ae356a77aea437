//! Slow, independent reference implementations for cross-checking.

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactseries::{Monomial, MultiSeries, ParamPoly, TruncationSpec};
use crate::partitions::{BoxCoord, Partition};
use crate::symfunc::Specialization;

const MAX_SKEW_BOXES: u32 = 10;
const MAX_VARIABLES: u32 = 8;

/// `s_{λ/μ}(x_1..x_m)` by enumerating semistandard skew tableaux.
pub fn ssyt_skew_schur(
    lambda: &Partition,
    mu: &Partition,
    sp: &Specialization,
    m: u32,
    trunc: &Arc<TruncationSpec>,
) -> Result<MultiSeries> {
    if !lambda.contains(mu) {
        return Ok(MultiSeries::zero(trunc));
    }
    let boxes: Vec<BoxCoord> = lambda.boxes().filter(|b| !mu.contains_box(*b)).collect();
    if boxes.len() as u32 > MAX_SKEW_BOXES || m > MAX_VARIABLES {
        return Err(Error::OracleGuard(format!(
            "{} boxes and {m} variables exceed the tableau oracle's limits",
            boxes.len()
        )));
    }
    let exps: Vec<i32> = (1..=m).map(|i| sp.var_exponent(i)).collect();
    let mut filling: HashMap<BoxCoord, u32> = HashMap::new();
    let mut counts: HashMap<i32, i64> = HashMap::new();
    fill(&boxes, 0, m, &exps, 0, &mut filling, &mut counts);
    let terms = counts
        .into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(e, c)| (Monomial::u(e), ParamPoly::from_int(c)));
    MultiSeries::polynomial(terms, trunc)
}

fn fill(
    boxes: &[BoxCoord],
    k: usize,
    m: u32,
    exps: &[i32],
    weight: i32,
    filling: &mut HashMap<BoxCoord, u32>,
    counts: &mut HashMap<i32, i64>,
) {
    let Some(&b) = boxes.get(k) else {
        *counts.entry(weight).or_default() += 1;
        return;
    };
    // Row-major order: the left and upper neighbours are already filled if skew.
    let left = (b.j > 1).then(|| filling.get(&BoxCoord::new(b.i, b.j - 1)).copied()).flatten();
    let up = (b.i > 1).then(|| filling.get(&BoxCoord::new(b.i - 1, b.j)).copied()).flatten();
    let lo = left.unwrap_or(1).max(up.map_or(1, |v| v + 1));
    for v in lo..=m {
        filling.insert(b, v);
        fill(boxes, k + 1, m, exps, weight + exps[v as usize - 1], filling, counts);
    }
    filling.remove(&b);
}

/// `p(n)` by Euler's pentagonal-number recurrence.
pub fn partition_count(n: u32) -> u64 {
    let n = n as usize;
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for k in 1..=n {
        let mut acc = 0i64;
        for j in 1i64.. {
            let g1 = (j * (3 * j - 1) / 2) as usize;
            if g1 > k {
                break;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            acc += sign * p[k - g1];
            let g2 = (j * (3 * j + 1) / 2) as usize;
            if g2 <= k {
                acc += sign * p[k - g2];
            }
        }
        p[k] = acc;
    }
    p[n] as u64
}

/// `∏ (1 + c·m)^e` by repeated multiplication, one explicit factor at a time.
pub fn naive_product(factors: &[(BigRational, Monomial, i64)], trunc: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let mut acc = MultiSeries::one(trunc);
    for (c, m, e) in factors {
        let base = MultiSeries::binomial(c.clone(), *m, trunc)?;
        acc = acc.mul(&base.pow_int(*e)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactseries::{euler_product, exp_const, first_mismatch, int, EulerFactor, Window};
    use crate::symfunc::skew_schur;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partition_count(0), 1);
        assert_eq!(partition_count(4), 5);
        assert_eq!(partition_count(10), Partition::enumerate(10).len() as u64);
        assert_eq!(partition_count(100), 190_569_292);
    }

    #[test]
    fn single_box_tableaux() {
        let s = Arc::new(TruncationSpec::q_only(Window::new(0, 10)));
        let sp = Specialization::principal();
        let x1_plus_x2 =
            MultiSeries::polynomial([(Monomial::u(1), ParamPoly::one()), (Monomial::u(3), ParamPoly::one())], &s).unwrap();
        assert_eq!(ssyt_skew_schur(&p(&[1]), &Partition::empty(), &sp, 2, &s).unwrap(), x1_plus_x2);
        assert_eq!(ssyt_skew_schur(&p(&[2]), &p(&[1]), &sp, 2, &s).unwrap(), x1_plus_x2);
    }

    #[test]
    fn tableaux_match_jacobi_trudi() {
        let s = Arc::new(TruncationSpec::q_only(Window::new(-12, 12)));
        let sp = Specialization::shifted(&p(&[2, 1])).with_vars(3);
        let lam = p(&[2, 1]);
        let jt = skew_schur(&lam, &Partition::empty(), &sp, &s).unwrap();
        let ssyt = ssyt_skew_schur(&lam, &Partition::empty(), &sp, 3, &s).unwrap();
        assert!(first_mismatch(&jt, &ssyt).unwrap().is_none());
    }

    #[test]
    fn guard_refuses_large_inputs() {
        let s = Arc::new(TruncationSpec::q_only(Window::new(0, 4)));
        let big = p(&[6, 5]);
        let err = ssyt_skew_schur(&big, &Partition::empty(), &Specialization::principal(), 3, &s);
        assert!(matches!(err, Err(Error::OracleGuard(_))));
    }

    #[test]
    fn naive_product_basics() {
        let s = Arc::new(TruncationSpec::new(Window::upto(0), vec![Window::upto(12)]).unwrap());
        assert_eq!(naive_product(&[], &s).unwrap(), MultiSeries::one(&s));
        let z = Monomial::z(1, 1);
        let d = naive_product(&[(int(-1), z, 1), (int(1), z, 1)], &s).unwrap();
        let expect = MultiSeries::binomial(int(-1), Monomial::z(1, 2), &s).unwrap();
        assert_eq!(d, expect);
        let factors: Vec<_> = (1..=12).map(|k| (int(-1), Monomial::z(1, k), -1)).collect();
        let naive = naive_product(&factors, &s).unwrap();
        let fast = euler_product(
            (1..=12).map(|k| EulerFactor::minus(Monomial::z(1, k), exp_const(-1))),
            &s,
        )
        .unwrap();
        assert!(first_mismatch(&naive, &fast).unwrap().is_none());
    }
}
