//! The topological vertex `C_{λμν}(q)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exactseries::{
    first_mismatch, with_adaptive_precision_from, Forms, Monomial, MultiSeries, ParamPoly, TruncationSpec, NFORMS,
};
use crate::partitions::Partition;
use crate::symfunc::{SchurEngine, Specialization};

/// An ordered triple of partitions; cyclic rotations leave the vertex unchanged.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexTriple {
    pub lambda: Partition,
    pub mu: Partition,
    pub nu: Partition,
}

impl VertexTriple {
    pub fn new(lambda: Partition, mu: Partition, nu: Partition) -> Self {
        VertexTriple { lambda, mu, nu }
    }

    /// `(λ, μ, ν) → (μ, ν, λ)`.
    pub fn rotated(&self) -> Self {
        VertexTriple::new(self.mu.clone(), self.nu.clone(), self.lambda.clone())
    }
}

/// `u^{κ(μ)} s_{νᵗ}(q^{-ρ}) Σ_η s_{λᵗ/η}(q^{-ρ-ν}) s_{μ/η}(q^{-ρ-νᵗ})`, exact on `trunc`.
pub fn vertex(lambda: &Partition, mu: &Partition, nu: &Partition, trunc: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    with_adaptive_precision_from(trunc, vertex_slack(lambda, mu, nu), |w| {
        vertex_raw(&SchurEngine::new(w), lambda, mu, nu)
    })
}

/// Estimated u-range lost to negative exponents; adaptive widening corrects any shortfall.
pub(crate) fn vertex_slack(lambda: &Partition, mu: &Partition, nu: &Partition) -> Forms {
    let loss = |sp: Specialization, d: u32| (-(sp.min_exponent() as i64)).max(0) * d as i64;
    let mut slack = [0; NFORMS];
    slack[0] = (-mu.kappa()).max(0)
        + loss(Specialization::shifted(nu), lambda.size())
        + loss(Specialization::shifted_transpose(nu), mu.size());
    slack
}

/// The vertex on the engine's window, without any exactness guarantee.
pub fn vertex_raw(engine: &SchurEngine, lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<MultiSeries> {
    let spec = engine.spec();
    let lt = lambda.transpose();
    let (left, right) = (Specialization::shifted(nu), Specialization::shifted_transpose(nu));
    let mut sum = MultiSeries::zero(spec);
    for eta in lt.common_subpartitions(mu) {
        let a = engine.skew_schur(&lt, &eta, &left)?;
        let b = engine.skew_schur(mu, &eta, &right)?;
        sum = sum.add(&a.mul(&b)?)?;
    }
    let framing = engine.skew_schur(&nu.transpose(), &Partition::empty(), &Specialization::principal())?;
    sum.mul(&framing)?.shift(Monomial::u(mu.kappa() as i32))
}

/// Outcome of comparing the three cyclic rotations of a vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicCheck {
    pub holds: bool,
    /// First disagreement between `C_{λμν}` and a rotation.
    pub mismatch: Option<(Monomial, ParamPoly, ParamPoly)>,
}

pub fn check_cyclic(lambda: &Partition, mu: &Partition, nu: &Partition, trunc: &Arc<TruncationSpec>) -> Result<CyclicCheck> {
    let base = VertexTriple::new(lambda.clone(), mu.clone(), nu.clone());
    let c0 = vertex(lambda, mu, nu, trunc)?;
    let mut rot = base.rotated();
    for _ in 0..2 {
        let c = vertex(&rot.lambda, &rot.mu, &rot.nu, trunc)?;
        if let Some(m) = first_mismatch(&c0, &c)? {
            return Ok(CyclicCheck { holds: false, mismatch: Some(m) });
        }
        rot = rot.rotated();
    }
    Ok(CyclicCheck { holds: true, mismatch: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactseries::Window;
    use crate::symfunc::{principal_schur, schur};

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn spec() -> Arc<TruncationSpec> {
        Arc::new(TruncationSpec::q_only(Window::new(-16, 16)))
    }

    #[test]
    fn empty_vertex_is_one() {
        let s = spec();
        let e = Partition::empty();
        assert_eq!(vertex(&e, &e, &e, &s).unwrap(), MultiSeries::one(&s));
    }

    #[test]
    fn third_slot_only_gives_transposed_schur() {
        let s = spec();
        let e = Partition::empty();
        for lam in Partition::enumerate_up_to(4) {
            let c = vertex(&e, &e, &lam, &s).unwrap();
            let expect = principal_schur(&lam.transpose(), &s).unwrap();
            assert!(first_mismatch(&c, &expect).unwrap().is_none(), "{lam}");
        }
    }

    #[test]
    fn single_box_rotations() {
        let s = spec();
        let e = Partition::empty();
        let one = p(&[1]);
        let expect = principal_schur(&one, &s).unwrap();
        assert!(first_mismatch(&vertex(&e, &one, &e, &s).unwrap(), &expect).unwrap().is_none());
        assert!(first_mismatch(&vertex(&one, &e, &e, &s).unwrap(), &expect).unwrap().is_none());
        assert!(check_cyclic(&e, &e, &one, &s).unwrap().holds);
    }

    #[test]
    fn two_boxes_expand_the_definition() {
        // C_{(1)(1)∅} = s_1(q^{-ρ})² + 1
        let s = spec();
        let one = p(&[1]);
        let c = vertex(&one, &one, &Partition::empty(), &s).unwrap();
        let s1 = schur(&one, &Specialization::principal(), &s).unwrap();
        let expect = s1.mul(&s1).unwrap().add(&MultiSeries::one(&s)).unwrap();
        assert!(first_mismatch(&c, &expect).unwrap().is_none());
    }

    #[test]
    fn cyclic_symmetry_small_sweep() {
        let s = Arc::new(TruncationSpec::q_only(Window::new(-10, 10)));
        let parts = Partition::enumerate_up_to(2);
        for a in &parts {
            for b in &parts {
                for c in &parts {
                    let check = check_cyclic(a, b, c, &s).unwrap();
                    assert!(check.holds, "{a} {b} {c}: {:?}", check.mismatch);
                }
            }
        }
    }
}
