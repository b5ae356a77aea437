//! Partition functions of trivalent graphs glued from topological vertices.
//!
//! Every internal edge is oriented from `tail` to `head` and carries a partition
//! `λ_e` weighted by `z_e^{|λ_e|}`. A vertex reads its three slots anticlockwise
//! from `start`; a slot at the head of an edge contributes `λ_e`, a slot at the
//! tail contributes `λ_eᵗ`, and an external slot contributes `∅`.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactseries::{with_adaptive_precision_from, Forms, Monomial, MultiSeries, TruncationSpec, NFORMS};
use crate::partitions::Partition;
use crate::symfunc::SchurEngine;
use crate::vertex::{vertex_raw, vertex_slack};

/// Reserved `head` value for an edge leaving the graph.
pub const EXTERNAL: &str = "external";

pub const BUILTIN_GRAPHS: [&str; 3] = ["one-vertex", "two-loop", "four-loop"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexNode {
    /// Half-edge slot ids in anticlockwise order.
    pub slots: [String; 3],
    #[serde(default)]
    pub start: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub tail: String,
    pub head: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_index: Option<u8>,
}

impl Edge {
    pub fn internal(tail: &str, head: &str, z_index: u8) -> Self {
        Edge { tail: tail.into(), head: head.into(), z_index: Some(z_index) }
    }

    pub fn external(slot: &str) -> Self {
        Edge { tail: slot.into(), head: EXTERNAL.into(), z_index: None }
    }

    pub fn is_external(&self) -> bool {
        self.head == EXTERNAL
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub vertices: Vec<VertexNode>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SlotRole {
    External,
    Head(usize),
    Tail(usize),
}

impl Graph {
    pub fn from_json(text: &str) -> Result<Graph> {
        let g: Graph = serde_json::from_str(text).map_err(|e| Error::Graph(format!("line {} column {}: {e}", e.line(), e.column())))?;
        g.validate()?;
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    pub fn builtin(name: &str) -> Option<Graph> {
        let v = |a: &str, b: &str, c: &str| VertexNode { slots: [a.into(), b.into(), c.into()], start: 0 };
        let g = match name {
            "one-vertex" => Graph {
                vertices: vec![v("a0", "a1", "a2"), v("b0", "b1", "b2")],
                edges: vec![
                    Edge::external("a0"),
                    Edge::external("a1"),
                    Edge::external("b0"),
                    Edge::external("b1"),
                    Edge::internal("a2", "b2", 1),
                ],
            },
            "two-loop" => Graph {
                vertices: vec![v("a0", "a1", "a2"), v("b0", "b1", "b2")],
                edges: vec![
                    Edge::external("a0"),
                    Edge::external("b0"),
                    Edge::internal("b1", "a1", 1),
                    Edge::internal("a2", "b2", 2),
                ],
            },
            "four-loop" => Graph {
                vertices: vec![
                    v("v1a", "v1b", "v1c"),
                    v("v2a", "v2b", "v2c"),
                    v("v3a", "v3b", "v3c"),
                    v("v4a", "v4b", "v4c"),
                ],
                edges: vec![
                    Edge::internal("v1a", "v2a", 1),
                    Edge::internal("v4b", "v1b", 2),
                    Edge::internal("v3a", "v4a", 3),
                    Edge::internal("v2b", "v3b", 4),
                    Edge::external("v1c"),
                    Edge::external("v2c"),
                    Edge::external("v3c"),
                    Edge::external("v4c"),
                ],
            },
            _ => return None,
        };
        Some(g)
    }

    /// Checks that every slot is bound exactly once and weights are in range.
    pub fn validate(&self) -> Result<()> {
        self.roles().map(|_| ())
    }

    fn roles(&self) -> Result<BTreeMap<String, SlotRole>> {
        let mut declared = HashSet::new();
        for (vi, v) in self.vertices.iter().enumerate() {
            if v.start > 2 {
                return Err(Error::Graph(format!("vertices[{vi}].start: {} is not in 0..=2", v.start)));
            }
            for (si, s) in v.slots.iter().enumerate() {
                if s == EXTERNAL {
                    return Err(Error::Graph(format!("vertices[{vi}].slots[{si}]: \"{EXTERNAL}\" is reserved")));
                }
                if !declared.insert(s.clone()) {
                    return Err(Error::Graph(format!("vertices[{vi}].slots[{si}]: slot {s:?} declared twice")));
                }
            }
        }
        let mut roles = BTreeMap::new();
        let mut bind = |slot: &str, role: SlotRole, at: String| -> Result<()> {
            if !declared.contains(slot) {
                return Err(Error::Graph(format!("{at}: unknown slot {slot:?}")));
            }
            if roles.insert(slot.to_string(), role).is_some() {
                return Err(Error::Graph(format!("{at}: slot {slot:?} bound twice")));
            }
            Ok(())
        };
        let mut internal = 0;
        for (ei, e) in self.edges.iter().enumerate() {
            if e.is_external() {
                bind(&e.tail, SlotRole::External, format!("edges[{ei}].tail"))?;
                continue;
            }
            match e.z_index {
                Some(1..=4) => {}
                other => return Err(Error::Graph(format!("edges[{ei}].z_index: {other:?} is not in 1..=4"))),
            }
            bind(&e.tail, SlotRole::Tail(internal), format!("edges[{ei}].tail"))?;
            bind(&e.head, SlotRole::Head(internal), format!("edges[{ei}].head"))?;
            internal += 1;
        }
        if let Some(s) = declared.iter().find(|s| !roles.contains_key(*s)) {
            return Err(Error::Graph(format!("slot {s:?} is not bound by any edge")));
        }
        Ok(roles)
    }

    fn internal_edges(&self) -> Vec<&Edge> {
        self.edges.iter().filter(|e| !e.is_external()).collect()
    }
}

/// Same graph with the starting slot of `vertex` advanced by `steps`.
pub fn rotate_start(g: &Graph, vertex: usize, steps: i64) -> Result<Graph> {
    let mut out = g.clone();
    let v = out
        .vertices
        .get_mut(vertex)
        .ok_or_else(|| Error::Graph(format!("no vertex {vertex}")))?;
    v.start = ((v.start as i64 + steps).rem_euclid(3)) as u8;
    Ok(out)
}

/// Per-edge partition size bounds for one truncation.
#[derive(Clone, Debug)]
pub struct GraphEvaluation {
    pub spec: Arc<TruncationSpec>,
    pub edge_bounds: Vec<u32>,
}

impl GraphEvaluation {
    pub fn new(g: &Graph, trunc: &Arc<TruncationSpec>) -> Result<Self> {
        g.validate()?;
        let hi = trunc.hi_forms();
        let mut edge_bounds = Vec::new();
        for e in g.internal_edges() {
            let k = e.z_index.expect("validated") as usize;
            if k > trunc.active_z() {
                return Err(Error::WindowMismatch {
                    name: "graph".into(),
                    reason: format!("edge weight z{k} is not an active variable of {trunc}"),
                });
            }
            edge_bounds.push(hi[k].max(0) as u32);
        }
        Ok(GraphEvaluation { spec: trunc.clone(), edge_bounds })
    }

    /// Every edge labelling whose z-weight lies inside the window.
    fn assignments(&self, g: &Graph) -> Vec<Vec<Partition>> {
        let z: Vec<usize> = g.internal_edges().iter().map(|e| e.z_index.expect("validated") as usize).collect();
        let hi = self.spec.hi_forms();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        let mut used = [0i64; NFORMS];
        self.assign(&z, &hi, &mut used, &mut cur, &mut out);
        out
    }

    fn assign(
        &self,
        z: &[usize],
        hi: &Forms,
        used: &mut Forms,
        cur: &mut Vec<Partition>,
        out: &mut Vec<Vec<Partition>>,
    ) {
        let e = cur.len();
        if e == z.len() {
            out.push(cur.clone());
            return;
        }
        for n in 0..=self.edge_bounds[e] {
            let n64 = n as i64;
            if used[z[e]] + n64 > hi[z[e]] || used[NFORMS - 1] + n64 > hi[NFORMS - 1] {
                break;
            }
            used[z[e]] += n64;
            used[NFORMS - 1] += n64;
            for p in Partition::enumerate(n) {
                cur.push(p);
                self.assign(z, hi, used, cur, out);
                cur.pop();
            }
            used[z[e]] -= n64;
            used[NFORMS - 1] -= n64;
        }
    }
}

fn triples(g: &Graph, roles: &BTreeMap<String, SlotRole>, labels: &[Partition]) -> Vec<[Partition; 3]> {
    g.vertices
        .iter()
        .map(|v| {
            std::array::from_fn(|k| {
                let slot = &v.slots[(v.start as usize + k) % 3];
                match roles[slot] {
                    SlotRole::External => Partition::empty(),
                    SlotRole::Head(e) => labels[e].clone(),
                    SlotRole::Tail(e) => labels[e].transpose(),
                }
            })
        })
        .collect()
}

/// `Σ ∏_e z_e^{|λ_e|} ∏_v C_{abc}`, exact on `trunc`.
pub fn evaluate(g: &Graph, trunc: &Arc<TruncationSpec>) -> Result<MultiSeries> {
    let plan = GraphEvaluation::new(g, trunc)?;
    let roles = g.roles()?;
    let z: Vec<usize> = g.internal_edges().iter().map(|e| e.z_index.expect("validated") as usize).collect();
    let jobs: Vec<(Monomial, Vec<[Partition; 3]>)> = plan
        .assignments(g)
        .into_iter()
        .map(|labels| {
            let mut weight = Monomial::ONE;
            for (k, p) in z.iter().zip(&labels) {
                weight = weight * Monomial::z(*k, p.size() as i32);
            }
            (weight, triples(g, &roles, &labels))
        })
        .collect();
    let mut slack = [0; NFORMS];
    for (_, ts) in &jobs {
        let s: i64 = ts.iter().map(|[a, b, c]| vertex_slack(a, b, c)[0]).sum();
        slack[0] = slack[0].max(s);
    }
    with_adaptive_precision_from(trunc, slack, |w| {
        let engine = SchurEngine::new(w);
        let terms = jobs
            .par_iter()
            .map(|(weight, ts)| {
                let mut acc = MultiSeries::one(w);
                for [a, b, c] in ts {
                    acc = acc.mul(&vertex_raw(&engine, a, b, c)?)?;
                }
                acc.shift(*weight)
            })
            .collect::<Result<Vec<_>>>()?;
        MultiSeries::sum_par(w, terms)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactseries::{euler_product, first_mismatch, EulerFactor, ParamPoly, Window};

    fn one_z(z: i32, u: i32) -> Arc<TruncationSpec> {
        Arc::new(TruncationSpec::new(Window::new(-u, u), vec![Window::upto(z)]).unwrap())
    }

    #[test]
    fn one_vertex_gives_macmahon_like_product() {
        let s = one_z(4, 12);
        let g = Graph::builtin("one-vertex").unwrap();
        let z = evaluate(&g, &s).unwrap();
        let factors = (1..=6).map(|k| EulerFactor::plus(Monomial::new(2 * k, &[1]), ParamPoly::from_int(k as i64)));
        let expect = euler_product(factors, &s).unwrap();
        assert!(first_mismatch(&z, &expect).unwrap().is_none());
    }

    #[test]
    fn all_external_is_one() {
        let s = one_z(2, 6);
        let g = Graph {
            vertices: vec![VertexNode { slots: ["a".into(), "b".into(), "c".into()], start: 1 }],
            edges: vec![Edge::external("a"), Edge::external("b"), Edge::external("c")],
        };
        assert_eq!(evaluate(&g, &s).unwrap(), MultiSeries::one(&s));
    }

    #[test]
    fn rotations() {
        let g = Graph::builtin("one-vertex").unwrap();
        assert_eq!(rotate_start(&g, 0, 3).unwrap(), g);
        let s = one_z(3, 10);
        let base = evaluate(&g, &s).unwrap();
        for v in 0..2 {
            for k in 1..3 {
                let r = evaluate(&rotate_start(&g, v, k).unwrap(), &s).unwrap();
                assert!(first_mismatch(&base, &r).unwrap().is_none());
            }
        }
        assert!(rotate_start(&g, 7, 1).is_err());
    }

    #[test]
    fn malformed_graphs_are_rejected() {
        let mut g = Graph::builtin("two-loop").unwrap();
        g.edges.pop();
        assert!(matches!(g.validate(), Err(Error::Graph(_))));
        let mut g = Graph::builtin("two-loop").unwrap();
        g.edges[2].z_index = Some(5);
        assert!(g.validate().is_err());
        assert!(Graph::from_json("{\"vertices\": [}").is_err());
        let g = Graph::builtin("four-loop").unwrap();
        assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
    }
}
