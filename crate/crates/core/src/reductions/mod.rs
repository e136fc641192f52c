//! Hardness constructions for deterministic mechanism design.
//!
//! [`independent_set`] maps INDEPENDENT-SET to dominant-strategy design and
//! [`knapsack`] maps KNAPSACK to Bayes-Nash design, both with two agents and
//! social welfare as the objective. Each side comes with the proof-side
//! mechanism built from a source solution and the extraction that reads a
//! source solution back off a goal-attaining mechanism. [`oracle`] holds
//! brute-force solvers for the source problems.
//!
//! Vertices and items are numbered from 1.

pub mod independent_set;
pub mod knapsack;
pub mod oracle;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use num_traits::Zero;

use crate::model::{Agent, ModelError, Objective, PriorSpec, RawSetting, Setting, validate_setting};
use crate::rational::Rational;

pub use independent_set::{GraphInstance, extract_is, is_witness_mechanism, reduce_is};
pub use knapsack::{KnapsackInstance, extract_knapsack, knapsack_witness_mechanism, reduce_knapsack};
pub use oracle::{DEFAULT_ORACLE_BOUND, best_subset_under, knapsack_oracle, max_independent_set};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("target size {k} exceeds vertex count {n}")]
    TargetTooLarge { k: usize, n: usize },
    #[error("knapsack capacity must be positive")]
    ZeroCapacity,
    #[error("knapsack value goal must be positive")]
    ZeroGoal,
    #[error("item {0} has zero weight; the construction divides by item weights")]
    ZeroWeight(usize),
    #[error("knapsack instance has no items")]
    NoItems,
    #[error("every item has zero value; the construction is unsound without value")]
    ZeroTotalValue,
    #[error("vertices {0} and {1} are adjacent, set is not independent")]
    NotIndependent(usize, usize),
    #[error("set has {found} vertices, target is {expected}")]
    WrongSize { expected: usize, found: usize },
    #[error("item {item} outside 1..={m}")]
    ItemOutOfRange { item: usize, m: usize },
    #[error("subset weight {weight} exceeds capacity {capacity}")]
    OverCapacity { weight: u64, capacity: u64 },
    #[error("subset value {value} is below goal {goal}")]
    InsufficientValue { value: u64, goal: u64 },
    #[error("oracle bound exceeded: size {size} > {bound}")]
    OracleBound { size: usize, bound: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("metadata describes a {found:?} reduction, expected {expected:?}")]
    KindMismatch {
        expected: ReductionKind,
        found: ReductionKind,
    },
    #[error("mechanism does not match the generated setting: {0}")]
    Shape(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionKind {
    IndependentSet,
    Knapsack,
}

/// What a generated outcome stands for in the source instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum OutcomeRole {
    /// o^H_ii
    High { vertex: usize },
    /// o^L_ii
    Low { vertex: usize },
    /// o_ij for a non-edge i ≠ j
    NonEdge { from: usize, to: usize },
    /// o¹_ij for an edge: large payoff to agent 1
    EdgeFirst { from: usize, to: usize },
    /// o²_ij for an edge: large payoff to agent 2
    EdgeSecond { from: usize, to: usize },
    /// o_j: item j is packed
    Item { item: usize },
    /// o_{m+1}
    Fallback,
    /// o_{m+2}
    Reserve,
}

impl OutcomeRole {
    /// Outcome label used in generated settings.
    pub fn label(&self) -> String {
        match *self {
            OutcomeRole::High { vertex } => format!("H{vertex}_{vertex}"),
            OutcomeRole::Low { vertex } => format!("L{vertex}_{vertex}"),
            OutcomeRole::NonEdge { from, to } => format!("o{from}_{to}"),
            OutcomeRole::EdgeFirst { from, to } => format!("e1_{from}_{to}"),
            OutcomeRole::EdgeSecond { from, to } => format!("e2_{from}_{to}"),
            OutcomeRole::Item { item } => format!("o{item}"),
            OutcomeRole::Fallback => "fallback".into(),
            OutcomeRole::Reserve => "reserve".into(),
        }
    }
}

/// What a generated type stands for in the source instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum TypeRole {
    Vertex { vertex: usize },
    Item { item: usize },
    /// Agent 2's two types in the knapsack construction.
    Signal { index: usize },
}

impl TypeRole {
    /// Type label used in generated settings.
    pub fn label(&self) -> String {
        match *self {
            TypeRole::Vertex { vertex } => format!("v{vertex}"),
            TypeRole::Item { item } => format!("item{item}"),
            TypeRole::Signal { index } => format!("t{index}"),
        }
    }
}

pub(crate) const AGENT_NAMES: [&str; 2] = ["agent1", "agent2"];

/// Label maps back to the source instance, plus the goal G.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionMeta {
    pub kind: ReductionKind,
    pub goal: Rational,
    /// Indexed like the generated setting's outcomes.
    pub outcome_roles: Vec<OutcomeRole>,
    /// `type_roles[agent][type]`
    pub type_roles: Vec<Vec<TypeRole>>,
}

impl ReductionMeta {
    /// Social welfare with goal G: the objective of both constructions.
    pub fn objective(&self) -> Objective {
        Objective::social_welfare().with_goal(self.goal.clone())
    }

    /// A setting with the generated labels, uniform priors and zero
    /// utilities: enough to read mechanism documents written against the
    /// generated setting when only the metadata is at hand.
    pub fn skeleton(&self) -> Result<Setting, ReductionError> {
        let agents: Vec<Agent> = AGENT_NAMES
            .iter()
            .zip(&self.type_roles)
            .map(|(name, roles)| Agent::new(*name, roles.iter().map(TypeRole::label)))
            .collect();
        let uniform = |n: usize| vec![Rational::new(1.into(), n.into()); n];
        let raw = RawSetting {
            prior: PriorSpec::Independent(agents.iter().map(|a| uniform(a.types.len())).collect()),
            utilities: agents
                .iter()
                .map(|a| vec![vec![Rational::zero(); self.outcome_roles.len()]; a.types.len()])
                .collect(),
            outcomes: self.outcome_roles.iter().map(OutcomeRole::label).collect(),
            agents,
        };
        Ok(validate_setting(raw)?)
    }

    pub(crate) fn expect_kind(&self, expected: ReductionKind) -> Result<(), ReductionError> {
        if self.kind == expected {
            Ok(())
        } else {
            Err(ReductionError::KindMismatch {
                expected,
                found: self.kind,
            })
        }
    }
}

/// Splits instance text into numbered, non-empty, comment-free lines of integers.
pub(crate) fn integer_lines(text: &str) -> Result<Vec<(usize, Vec<u64>)>, ReductionError> {
    let mut lines = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let numbers = line
            .split_whitespace()
            .map(|token| {
                token.parse::<u64>().map_err(|_| ReductionError::Parse {
                    line: index + 1,
                    message: format!("expected a nonnegative integer, found {token:?}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if numbers.len() != 2 {
            return Err(ReductionError::Parse {
                line: index + 1,
                message: format!("expected two integers, found {}", numbers.len()),
            });
        }
        lines.push((index + 1, numbers));
    }
    Ok(lines)
}
