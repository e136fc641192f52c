//! INDEPENDENT-SET to deterministic dominant-strategy design.
//!
//! Both agents have one type per vertex, uniformly distributed. The diagonal
//! profile (i, i) offers o^H_ii or o^L_ii, a non-edge (i, j) offers o_ij and an
//! edge offers the split pair o¹_ij / o²_ij, where one agent gets 5n² and the
//! other 1. Edges are undirected; each one contributes both ordered pairs.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use super::{AGENT_NAMES, OutcomeRole, ReductionError, ReductionKind, ReductionMeta, TypeRole, integer_lines};
use crate::model::{Agent, DeterministicMechanism, PriorSpec, RawSetting, Setting, validate_setting};
use crate::rational::{Rational, int, rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphInstance {
    n: usize,
    /// Stored as (min, max), 1-based.
    edges: BTreeSet<(usize, usize)>,
    k: usize,
}

impl GraphInstance {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        k: usize,
    ) -> Result<Self, ReductionError> {
        if n == 0 {
            return Err(ReductionError::NoVertices);
        }
        if k > n {
            return Err(ReductionError::TargetTooLarge { k, n });
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for vertex in [u, v] {
                if vertex == 0 || vertex > n {
                    return Err(ReductionError::VertexOutOfRange { vertex, n });
                }
            }
            if u == v {
                return Err(ReductionError::SelfLoop(u));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(GraphInstance { n, edges: set, k })
    }

    /// Header line `n K`, then one `u v` line per edge. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ReductionError> {
        let lines = integer_lines(text)?;
        let Some(((_, header), rest)) = lines.split_first() else {
            return Err(ReductionError::Parse {
                line: 1,
                message: "missing header \"n K\"".into(),
            });
        };
        let edges = rest
            .iter()
            .map(|(_, pair)| (pair[0] as usize, pair[1] as usize))
            .collect::<Vec<_>>();
        Self::new(header[0] as usize, edges, header[1] as usize)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn is_independent(&self, set: &BTreeSet<usize>) -> bool {
        self.first_conflict(set).is_none()
    }

    fn first_conflict(&self, set: &BTreeSet<usize>) -> Option<(usize, usize)> {
        self.edges
            .iter()
            .copied()
            .find(|&(u, v)| set.contains(&u) && set.contains(&v))
    }

    /// G = (2m(5n²+1) + 2(n−K) + 4K + 4(n²−2m−n)) / n²
    pub fn goal(&self) -> Rational {
        let (n, m, k) = (self.n as i64, self.m() as i64, self.k as i64);
        let numerator = 2 * m * (5 * n * n + 1) + 2 * (n - k) + 4 * k + 4 * (n * n - 2 * m - n);
        Rational::new(BigInt::from(numerator), BigInt::from(n * n))
    }
}

fn outcome_roles(g: &GraphInstance) -> Vec<OutcomeRole> {
    let mut roles = Vec::new();
    for i in 1..=g.n {
        for j in 1..=g.n {
            if i == j {
                roles.push(OutcomeRole::High { vertex: i });
                roles.push(OutcomeRole::Low { vertex: i });
            } else if g.has_edge(i, j) {
                roles.push(OutcomeRole::EdgeFirst { from: i, to: j });
                roles.push(OutcomeRole::EdgeSecond { from: i, to: j });
            } else {
                roles.push(OutcomeRole::NonEdge { from: i, to: j });
            }
        }
    }
    roles
}

/// Utility of agent `agent` (0 or 1) with vertex type `own` for `role`.
fn utility(agent: usize, own: usize, role: &OutcomeRole, large: i64) -> i64 {
    let pick = |first: usize, second: usize| if agent == 0 { first } else { second };
    match *role {
        OutcomeRole::High { .. } => 2,
        OutcomeRole::Low { vertex } => {
            if own == vertex {
                1
            } else {
                -large
            }
        }
        OutcomeRole::NonEdge { from, to } => {
            if own == pick(from, to) {
                2
            } else {
                -large
            }
        }
        OutcomeRole::EdgeFirst { from, to } => {
            if own != pick(from, to) {
                -large
            } else if agent == 0 {
                large
            } else {
                1
            }
        }
        OutcomeRole::EdgeSecond { from, to } => {
            if own != pick(from, to) {
                -large
            } else if agent == 0 {
                1
            } else {
                large
            }
        }
        OutcomeRole::Item { .. } | OutcomeRole::Fallback | OutcomeRole::Reserve => {
            unreachable!("knapsack role in an independent-set construction")
        }
    }
}

pub fn reduce_is(g: &GraphInstance) -> (Setting, ReductionMeta) {
    let n = g.n;
    let large = 5 * (n as i64) * (n as i64);
    let roles = outcome_roles(g);
    let vertex_roles: Vec<TypeRole> = (1..=n).map(|vertex| TypeRole::Vertex { vertex }).collect();
    let type_names: Vec<String> = vertex_roles.iter().map(TypeRole::label).collect();
    let uniform = vec![rat(1, n as i64); n];
    let utilities = (0..2)
        .map(|agent| {
            (1..=n)
                .map(|own| roles.iter().map(|role| int(utility(agent, own, role, large))).collect())
                .collect()
        })
        .collect();
    let raw = RawSetting {
        agents: vec![
            Agent::new(AGENT_NAMES[0], type_names.clone()),
            Agent::new(AGENT_NAMES[1], type_names),
        ],
        outcomes: roles.iter().map(OutcomeRole::label).collect(),
        prior: PriorSpec::Independent(vec![uniform.clone(), uniform]),
        utilities,
    };
    let setting = validate_setting(raw).expect("independent-set construction is well formed");
    let meta = ReductionMeta {
        kind: ReductionKind::IndependentSet,
        goal: g.goal(),
        outcome_roles: roles,
        type_roles: vec![vertex_roles.clone(), vertex_roles],
    };
    (setting, meta)
}

/// The mechanism that attains G exactly from an independent set of size K.
pub fn is_witness_mechanism(
    g: &GraphInstance,
    set: &BTreeSet<usize>,
) -> Result<DeterministicMechanism, ReductionError> {
    if let Some(&vertex) = set.iter().find(|&&v| v == 0 || v > g.n) {
        return Err(ReductionError::VertexOutOfRange { vertex, n: g.n });
    }
    if set.len() != g.k {
        return Err(ReductionError::WrongSize {
            expected: g.k,
            found: set.len(),
        });
    }
    if let Some((u, v)) = g.first_conflict(set) {
        return Err(ReductionError::NotIndependent(u, v));
    }
    let (setting, meta) = reduce_is(g);
    let index: BTreeMap<OutcomeRole, usize> = meta
        .outcome_roles
        .iter()
        .enumerate()
        .map(|(o, role)| (*role, o))
        .collect();
    let mechanism = DeterministicMechanism::from_rule(&setting, |types| {
        let (i, j) = (types[0] + 1, types[1] + 1);
        let role = if i == j {
            if set.contains(&i) {
                OutcomeRole::High { vertex: i }
            } else {
                OutcomeRole::Low { vertex: i }
            }
        } else if !g.has_edge(i, j) {
            OutcomeRole::NonEdge { from: i, to: j }
        } else if set.contains(&j) {
            OutcomeRole::EdgeFirst { from: i, to: j }
        } else {
            OutcomeRole::EdgeSecond { from: i, to: j }
        };
        index[&role]
    })?;
    Ok(mechanism)
}

/// S = { i : the mechanism picks a high outcome on the diagonal profile (i, i) }.
///
/// Any o^H_kk counts, not only o^H_ii: every type values every high outcome
/// at 2, so a goal-attaining DS-IC mechanism may place o^H_kk on (i, i) and
/// the stricter reading can then return a set smaller than K. With this
/// reading the set is independent and of size at least K for every DS-IC
/// mechanism that attains G, and it agrees with the stricter one on
/// [`is_witness_mechanism`]'s output.
pub fn extract_is(
    meta: &ReductionMeta,
    mechanism: &DeterministicMechanism,
) -> Result<BTreeSet<usize>, ReductionError> {
    meta.expect_kind(ReductionKind::IndependentSet)?;
    let n = meta.type_roles.first().map_or(0, Vec::len);
    if mechanism.outcomes().len() != n * n || mechanism.num_outcomes() != meta.outcome_roles.len() {
        return Err(ReductionError::Shape(format!(
            "expected {} profiles over {} outcomes",
            n * n,
            meta.outcome_roles.len()
        )));
    }
    Ok((1..=n)
        .filter(|&i| {
            let profile = (i - 1) * n + (i - 1);
            matches!(meta.outcome_roles[mechanism.outcome(profile)], OutcomeRole::High { .. })
        })
        .collect())
}
