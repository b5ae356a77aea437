use std::sync::Arc;

use vertexid_core::exactseries::rat;
use vertexid_core::graphcalc::{evaluate, Graph};
use vertexid_core::identities::{build_side, default_window, list, verify, IdentityParams, IdentityReport, Side, Verdict};
use vertexid_core::symfunc::principal_schur;
use vertexid_core::{first_mismatch, Error, Monomial, MultiSeries, ParamRing, Partition, TruncationSpec, Window};

fn small(name: &str) -> IdentityReport {
    let (z, u) = match name {
        "cyclic-schur" => (0, 8),
        "four-loop" | "stanley-k2" => (2, 6),
        _ => (3, 8),
    };
    let params = IdentityParams { theta: None, max_size: Some(3) };
    verify(name, &default_window(name, z, u).unwrap(), &params).unwrap()
}

#[test]
fn every_identity_holds_on_a_small_window() {
    for info in list() {
        let r = small(info.name);
        assert_eq!(r.verdict, Verdict::Match, "{}", r.render());
        assert!(r.mismatch.is_none());
        assert_eq!(r.ring, info.ring.label());
    }
}

#[test]
fn report_json_round_trips() {
    let r = small("four-loop");
    let back: IdentityReport = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(back, r);
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    for key in ["name", "window", "verdict", "mismatch", "duration_ms"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn four_loop_limit_names_its_reading() {
    let r = small("four-loop-limit");
    assert_eq!(r.matched_readings.len(), 1, "{}", r.render());
    assert!(r.render().contains("matched readings: "));
}

#[test]
fn sides_agree_where_single_series_exist() {
    for info in list().iter().filter(|i| !i.per_case) {
        let spec = default_window(info.name, 2, 6).unwrap();
        let l = build_side(info.name, Side::Lhs, &spec, &IdentityParams::default()).unwrap();
        let r = build_side(info.name, Side::Rhs, &spec, &IdentityParams::default()).unwrap();
        assert!(first_mismatch(&l, &r).unwrap().is_none(), "{}", info.name);
    }
}

#[test]
fn theta_must_be_positive() {
    let spec = default_window("no-theta", 2, 0).unwrap();
    for th in [rat(0, 1), rat(-1, 2)] {
        let p = IdentityParams { theta: Some(th), max_size: None };
        assert!(matches!(verify("no-theta", &spec, &p), Err(Error::Domain(_))));
    }
}

#[test]
fn theta_changes_the_series() {
    let spec = default_window("no-theta", 2, 0).unwrap();
    let at = |n, d| {
        let p = IdentityParams { theta: Some(rat(n, d)), max_size: None };
        build_side("no-theta", Side::Rhs, &spec, &p).unwrap()
    };
    // exponent (t−1)(t/ϑ+1) gives z¹ coefficient −(t−1)(t/ϑ+1)
    assert_eq!(at(2, 1).get(&Monomial::z(1, 1)).display(ParamRing::T), "-1/2*t^2 - 1/2*t + 1");
    assert_ne!(at(2, 1), at(3, 1));
}

#[test]
fn unknown_names_and_wrong_windows() {
    let spec = default_window("no-classic", 2, 0).unwrap();
    assert!(matches!(verify("nope", &spec, &IdentityParams::default()), Err(Error::UnknownIdentity { .. })));
    let two = default_window("no-generalized", 2, 4).unwrap();
    assert!(matches!(verify("stanley-k2", &two, &IdentityParams::default()), Err(Error::WindowMismatch { .. })));
}

#[test]
fn default_windows_follow_the_order_flags() {
    let s = default_window("four-loop", 3, 12).unwrap();
    assert_eq!(s.u_window, Window::new(-12, 12));
    assert_eq!(s.active_z(), 4);
    let s = default_window("no-generalized", 4, 8).unwrap();
    assert_eq!(s.z_windows[0], Window::new(-4, 4));
    let s = default_window("no-classic", 4, 8).unwrap();
    assert_eq!(s.u_window, Window::new(0, 0));
}

/// The one-vertex graph with an empty external leg reduces to the sum over one
/// internal partition, i.e. the Cauchy-type product.
#[test]
fn one_vertex_graph_is_the_cauchy_sum() {
    let spec = Arc::new(TruncationSpec::new(Window::new(-10, 10), vec![Window::upto(3)]).unwrap());
    let graph = evaluate(&Graph::builtin("one-vertex").unwrap(), &spec).unwrap();
    let sum = Partition::enumerate_up_to(3)
        .iter()
        .map(|l| {
            let a = principal_schur(l, &spec).unwrap();
            let b = principal_schur(&l.transpose(), &spec).unwrap();
            a.mul(&b).unwrap().shift(Monomial::z(1, l.size() as i32)).unwrap()
        })
        .try_fold(MultiSeries::zero(&spec), |acc, t| acc.add(&t))
        .unwrap();
    assert!(first_mismatch(&graph, &sum).unwrap().is_none());
}
