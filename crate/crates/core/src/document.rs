//! JSON documents for settings, mechanisms and reduction metadata.
//!
//! Rationals are always strings ("7", "-1/2"); output is in lowest terms.
//! Anything keyed by a type vector uses the agents' type names joined by
//! `,` in agent order, e.g. `"t1,x"`. Agent keys are agent names, so
//! internal indices never appear in a document.
//!
//! Setting document:
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "agents": [{"name": "a", "types": ["t1", "t2"]}, {"name": "b", "types": ["x"]}],
//!   "outcomes": ["o1", "o2"],
//!   "prior": {"independent": {"a": {"t1": "1/2", "t2": "1/2"}, "b": {"x": "1"}}},
//!   "utilities": {"a": {"t1": {"o1": "1", "o2": "0"}, "t2": {"o1": "0", "o2": "3"}},
//!                 "b": {"x": {"o1": "2", "o2": "2"}}},
//!   "objective": "social_welfare",
//!   "goal": "5/2"
//! }
//! ```
//!
//! A joint prior is `{"joint": {"t1,x": "1/4", ...}}` and an explicit
//! objective is `{"table": {"t1,x": {"o1": "1", ...}, ...}}`.

use std::collections::{HashMap, HashSet};

use indexmap::IndexMap;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::incentives::Concept;
use crate::model::{
    Agent, DeterministicMechanism, ModelError, Objective, ObjectiveKind, Prior, PriorSpec,
    RandomizedMechanism, RawSetting, Setting, validate_setting,
};
use crate::rational::{Rational, RationalParseError, format_rational, parse_rational};
use crate::reductions::{OutcomeRole, ReductionKind, ReductionMeta, TypeRole};

pub const SCHEMA_VERSION: u32 = 1;

const KEY_SEPARATOR: char = ',';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Syntax(String),
    #[error("unsupported schema_version {found} (expected {SCHEMA_VERSION})")]
    SchemaVersion { found: u32 },
    #[error("{at}: {source}")]
    Rational {
        at: String,
        source: RationalParseError,
    },
    #[error("{at}: unknown agent {agent:?}")]
    UnknownAgent { at: String, agent: String },
    #[error("{at}: no entry for agent {agent:?}")]
    MissingAgent { at: String, agent: String },
    #[error("{at}: agent {agent:?} has no type {ty:?}")]
    UnknownType { at: String, agent: String, ty: String },
    #[error("{at}: no entry for type {ty:?} of agent {agent:?}")]
    MissingType { at: String, agent: String, ty: String },
    #[error("{at}: unknown outcome {outcome:?}")]
    UnknownOutcome { at: String, outcome: String },
    #[error("missing utility for agent {agent:?}, type {ty:?}, outcome {outcome:?}")]
    MissingUtility {
        agent: String,
        ty: String,
        outcome: String,
    },
    #[error("{at}: {key:?} is not a type vector of this setting")]
    UnknownProfile { at: String, key: String },
    #[error("{at}: no entry for type vector {key:?}")]
    MissingProfile { at: String, key: String },
    #[error("{at}: objective table has no entry for outcome {outcome:?}")]
    MissingObjectiveEntry { at: String, outcome: String },
    #[error("name {0:?} contains ',', which is reserved for type-vector keys")]
    ReservedCharacter(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn syntax(err: serde_json::Error) -> DocumentError {
    DocumentError::Syntax(err.to_string())
}

fn parse_at(text: &str, at: impl FnOnce() -> String) -> Result<Rational, DocumentError> {
    parse_rational(text).map_err(|source| DocumentError::Rational { at: at(), source })
}

fn check_version(found: u32) -> Result<(), DocumentError> {
    if found == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(DocumentError::SchemaVersion { found })
    }
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents always serialize");
    text.push('\n');
    text
}

// ---------------------------------------------------------------------------
// Wire types

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AgentDoc {
    name: String,
    types: Vec<String>,
}

type Masses = IndexMap<String, String>;
type Row = IndexMap<String, String>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum PriorDoc {
    Independent(IndexMap<String, Masses>),
    Joint(Masses),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum ObjectiveDoc {
    SocialWelfare,
    Table(IndexMap<String, Row>),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SettingDoc {
    schema_version: u32,
    agents: Vec<AgentDoc>,
    outcomes: Vec<String>,
    prior: PriorDoc,
    utilities: IndexMap<String, IndexMap<String, Row>>,
    objective: ObjectiveDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    goal: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum MechanismBody {
    Deterministic { map: IndexMap<String, String> },
    Randomized { map: IndexMap<String, Row> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProvenanceDoc {
    solver: String,
    concept: Concept,
    value: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct MechanismDoc {
    schema_version: u32,
    #[serde(flatten)]
    body: MechanismBody,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<ProvenanceDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetaDoc {
    schema_version: u32,
    kind: ReductionKind,
    goal: String,
    outcome_roles: Vec<OutcomeRole>,
    type_roles: Vec<Vec<TypeRole>>,
}

// ---------------------------------------------------------------------------
// Settings

/// A setting together with the designer's objective (and optional goal).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub setting: Setting,
    pub objective: Objective,
}

/// Index lookup for the labels of one setting.
struct Labels<'a> {
    agents: &'a [Agent],
    outcomes: HashMap<&'a str, usize>,
    types: Vec<HashMap<&'a str, usize>>,
}

impl<'a> Labels<'a> {
    fn new(agents: &'a [Agent], outcomes: &'a [String]) -> Self {
        Labels {
            agents,
            outcomes: outcomes.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect(),
            types: agents
                .iter()
                .map(|a| a.types.iter().enumerate().map(|(i, t)| (t.as_str(), i)).collect())
                .collect(),
        }
    }

    fn agent(&self, at: &str, name: &str) -> Result<usize, DocumentError> {
        self.agents
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| DocumentError::UnknownAgent {
                at: at.to_string(),
                agent: name.to_string(),
            })
    }

    fn ty(&self, at: &str, agent: usize, name: &str) -> Result<usize, DocumentError> {
        self.types[agent]
            .get(name)
            .copied()
            .ok_or_else(|| DocumentError::UnknownType {
                at: at.to_string(),
                agent: self.agents[agent].name.clone(),
                ty: name.to_string(),
            })
    }

    fn outcome(&self, at: &str, name: &str) -> Result<usize, DocumentError> {
        self.outcomes
            .get(name)
            .copied()
            .ok_or_else(|| DocumentError::UnknownOutcome {
                at: at.to_string(),
                outcome: name.to_string(),
            })
    }

    /// Type vector for a `"t1,x"` key.
    fn profile_types(&self, at: &str, key: &str) -> Result<Vec<usize>, DocumentError> {
        let parts: Vec<&str> = key.split(KEY_SEPARATOR).map(str::trim).collect();
        let unknown = || DocumentError::UnknownProfile {
            at: at.to_string(),
            key: key.to_string(),
        };
        if parts.len() != self.agents.len() {
            return Err(unknown());
        }
        parts
            .iter()
            .enumerate()
            .map(|(agent, part)| self.types[agent].get(part).copied().ok_or_else(unknown))
            .collect()
    }
}

fn profile_key(setting: &Setting, profile: usize) -> String {
    setting
        .space()
        .profile_types(profile)
        .iter()
        .enumerate()
        .map(|(agent, &ty)| setting.agents()[agent].types[ty].as_str())
        .collect::<Vec<_>>()
        .join(",")
}

fn profile_index_map(setting: &Setting) -> HashMap<String, usize> {
    (0..setting.num_profiles()).map(|p| (profile_key(setting, p), p)).collect()
}

/// Resolves a type-vector-keyed map into one entry per profile, in profile order.
fn per_profile<'m, T>(
    setting: &Setting,
    at: &str,
    map: &'m IndexMap<String, T>,
) -> Result<Vec<(String, &'m T)>, DocumentError> {
    let labels = Labels::new(setting.agents(), setting.outcomes());
    let mut slots: Vec<Option<(String, &T)>> = vec![None; setting.num_profiles()];
    for (key, value) in map {
        let types = labels.profile_types(at, key)?;
        let profile = setting.space().profile_index(&types);
        slots[profile] = Some((key.clone(), value));
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(profile, slot)| {
            slot.ok_or_else(|| DocumentError::MissingProfile {
                at: at.to_string(),
                key: profile_key(setting, profile),
            })
        })
        .collect()
}

fn check_names(agents: &[Agent], outcomes: &[String]) -> Result<(), DocumentError> {
    let names = agents
        .iter()
        .flat_map(|a| std::iter::once(&a.name).chain(&a.types))
        .chain(outcomes);
    for name in names {
        if name.contains(KEY_SEPARATOR) {
            return Err(DocumentError::ReservedCharacter(name.clone()));
        }
    }
    Ok(())
}

pub fn parse_setting(text: &str) -> Result<Problem, DocumentError> {
    let doc: SettingDoc = serde_json::from_str(text).map_err(syntax)?;
    check_version(doc.schema_version)?;
    let agents: Vec<Agent> = doc
        .agents
        .into_iter()
        .map(|a| Agent { name: a.name, types: a.types })
        .collect();
    check_names(&agents, &doc.outcomes)?;
    let labels = Labels::new(&agents, &doc.outcomes);

    // Unknown keys are errors; missing entries surface below.
    for (agent_name, rows) in &doc.utilities {
        let agent = labels.agent("utilities", agent_name)?;
        for (ty_name, row) in rows {
            let at = format!("utilities.{agent_name}");
            labels.ty(&at, agent, ty_name)?;
            for outcome in row.keys() {
                labels.outcome(&format!("{at}.{ty_name}"), outcome)?;
            }
        }
    }
    let mut utilities = Vec::with_capacity(agents.len());
    for agent in &agents {
        let rows = doc.utilities.get(&agent.name).ok_or_else(|| DocumentError::MissingAgent {
            at: "utilities".into(),
            agent: agent.name.clone(),
        })?;
        let mut table = Vec::with_capacity(agent.types.len());
        for ty in &agent.types {
            let missing = |outcome: &str| DocumentError::MissingUtility {
                agent: agent.name.clone(),
                ty: ty.clone(),
                outcome: outcome.to_string(),
            };
            let row = rows.get(ty).ok_or_else(|| missing(&doc.outcomes[0]))?;
            let values = doc
                .outcomes
                .iter()
                .map(|outcome| {
                    let entry = row.get(outcome).ok_or_else(|| missing(outcome))?;
                    parse_at(entry, || format!("utilities.{}.{ty}.{outcome}", agent.name))
                })
                .collect::<Result<Vec<_>, _>>()?;
            table.push(values);
        }
        utilities.push(table);
    }

    let prior = match &doc.prior {
        PriorDoc::Independent(by_agent) => {
            for name in by_agent.keys() {
                labels.agent("prior.independent", name)?;
            }
            let mut masses = Vec::with_capacity(agents.len());
            for (agent_index, agent) in agents.iter().enumerate() {
                let at = format!("prior.independent.{}", agent.name);
                let entries = by_agent.get(&agent.name).ok_or_else(|| DocumentError::MissingAgent {
                    at: "prior.independent".into(),
                    agent: agent.name.clone(),
                })?;
                for ty in entries.keys() {
                    labels.ty(&at, agent_index, ty)?;
                }
                let row = agent
                    .types
                    .iter()
                    .map(|ty| {
                        let entry = entries.get(ty).ok_or_else(|| DocumentError::MissingType {
                            at: at.clone(),
                            agent: agent.name.clone(),
                            ty: ty.clone(),
                        })?;
                        parse_at(entry, || format!("{at}.{ty}"))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                masses.push(row);
            }
            PriorSpec::Independent(masses)
        }
        PriorDoc::Joint(entries) => PriorSpec::Joint(
            entries
                .iter()
                .map(|(key, mass)| {
                    let types = labels.profile_types("prior.joint", key)?;
                    Ok((types, parse_at(mass, || format!("prior.joint.{key}"))?))
                })
                .collect::<Result<Vec<_>, DocumentError>>()?,
        ),
    };

    let setting = validate_setting(RawSetting {
        agents: agents.clone(),
        outcomes: doc.outcomes.clone(),
        prior,
        utilities,
    })?;

    let kind = match &doc.objective {
        ObjectiveDoc::SocialWelfare => ObjectiveKind::SocialWelfare,
        ObjectiveDoc::Table(rows) => {
            let mut table = Vec::with_capacity(setting.num_profiles());
            for (key, row) in per_profile(&setting, "objective.table", rows)? {
                let at = format!("objective.table.{key}");
                for outcome in row.keys() {
                    labels.outcome(&at, outcome)?;
                }
                let values = doc
                    .outcomes
                    .iter()
                    .map(|outcome| {
                        let entry = row.get(outcome).ok_or_else(|| DocumentError::MissingObjectiveEntry {
                            at: at.clone(),
                            outcome: outcome.clone(),
                        })?;
                        parse_at(entry, || format!("{at}.{outcome}"))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                table.push(values);
            }
            ObjectiveKind::Table(table)
        }
    };
    let goal = doc
        .goal
        .as_deref()
        .map(|g| parse_at(g, || "goal".into()))
        .transpose()?;
    let objective = Objective { kind, goal };
    objective.validate(&setting)?;
    Ok(Problem { setting, objective })
}

fn rational_row(outcomes: &[String], values: &[Rational]) -> Row {
    outcomes
        .iter()
        .zip(values)
        .map(|(o, v)| (o.clone(), format_rational(v)))
        .collect()
}

pub fn write_setting(setting: &Setting, objective: &Objective) -> Result<String, DocumentError> {
    check_names(setting.agents(), setting.outcomes())?;
    let agents = setting.agents();
    let outcomes = setting.outcomes();
    let prior = match setting.prior() {
        Prior::Independent(masses) => PriorDoc::Independent(
            agents
                .iter()
                .zip(masses)
                .map(|(agent, row)| (agent.name.clone(), rational_row(&agent.types, row)))
                .collect(),
        ),
        Prior::Joint(masses) => PriorDoc::Joint(
            masses
                .iter()
                .enumerate()
                .map(|(p, mass)| (profile_key(setting, p), format_rational(mass)))
                .collect(),
        ),
    };
    let utilities = agents
        .iter()
        .zip(setting.utilities())
        .map(|(agent, table)| {
            let rows = agent
                .types
                .iter()
                .zip(table)
                .map(|(ty, row)| (ty.clone(), rational_row(outcomes, row)))
                .collect();
            (agent.name.clone(), rows)
        })
        .collect();
    let objective_doc = match &objective.kind {
        ObjectiveKind::SocialWelfare => ObjectiveDoc::SocialWelfare,
        ObjectiveKind::Table(table) => ObjectiveDoc::Table(
            table
                .iter()
                .enumerate()
                .map(|(p, row)| (profile_key(setting, p), rational_row(outcomes, row)))
                .collect(),
        ),
    };
    Ok(to_json(&SettingDoc {
        schema_version: SCHEMA_VERSION,
        agents: agents
            .iter()
            .map(|a| AgentDoc {
                name: a.name.clone(),
                types: a.types.clone(),
            })
            .collect(),
        outcomes: outcomes.to_vec(),
        prior,
        utilities,
        objective: objective_doc,
        goal: objective.goal.as_ref().map(format_rational),
    }))
}

// ---------------------------------------------------------------------------
// Mechanisms

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyMechanism {
    Deterministic(DeterministicMechanism),
    Randomized(RandomizedMechanism),
}

impl AnyMechanism {
    /// Randomized view (a deterministic mechanism is lifted).
    pub fn to_randomized(&self) -> RandomizedMechanism {
        match self {
            AnyMechanism::Deterministic(m) => m.lift(),
            AnyMechanism::Randomized(m) => m.clone(),
        }
    }
}

/// How a mechanism was produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub solver: String,
    pub concept: Concept,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MechanismFile {
    pub mechanism: AnyMechanism,
    pub provenance: Option<Provenance>,
}

/// Parses a mechanism document against the setting it is defined on. In a
/// randomized map, outcomes left out of a distribution have probability 0.
pub fn parse_mechanism(text: &str, setting: &Setting) -> Result<MechanismFile, DocumentError> {
    let doc: MechanismDoc = serde_json::from_str(text).map_err(syntax)?;
    check_version(doc.schema_version)?;
    let labels = Labels::new(setting.agents(), setting.outcomes());
    let mechanism = match &doc.body {
        MechanismBody::Deterministic { map } => {
            let outcomes = per_profile(setting, "map", map)?
                .into_iter()
                .map(|(key, outcome)| labels.outcome(&format!("map.{key}"), outcome))
                .collect::<Result<Vec<_>, _>>()?;
            AnyMechanism::Deterministic(DeterministicMechanism::new(setting, outcomes)?)
        }
        MechanismBody::Randomized { map } => {
            let mut distributions = Vec::with_capacity(setting.num_profiles());
            for (key, row) in per_profile(setting, "map", map)? {
                let at = format!("map.{key}");
                let mut distribution = vec![Rational::zero(); setting.num_outcomes()];
                for (outcome, p) in row {
                    let index = labels.outcome(&at, outcome)?;
                    distribution[index] = parse_at(p, || format!("{at}.{outcome}"))?;
                }
                distributions.push(distribution);
            }
            AnyMechanism::Randomized(RandomizedMechanism::new(setting, distributions)?)
        }
    };
    let provenance = doc
        .provenance
        .map(|p| {
            Ok::<_, DocumentError>(Provenance {
                value: parse_at(&p.value, || "provenance.value".into())?,
                solver: p.solver,
                concept: p.concept,
            })
        })
        .transpose()?;
    Ok(MechanismFile { mechanism, provenance })
}

/// Randomized maps list only outcomes with positive probability.
pub fn write_mechanism(setting: &Setting, file: &MechanismFile) -> Result<String, DocumentError> {
    check_names(setting.agents(), setting.outcomes())?;
    let outcomes = setting.outcomes();
    let body = match &file.mechanism {
        AnyMechanism::Deterministic(m) => MechanismBody::Deterministic {
            map: (0..setting.num_profiles())
                .map(|p| (profile_key(setting, p), outcomes[m.outcome(p)].clone()))
                .collect(),
        },
        AnyMechanism::Randomized(m) => MechanismBody::Randomized {
            map: (0..setting.num_profiles())
                .map(|p| {
                    let row = m
                        .distribution(p)
                        .iter()
                        .enumerate()
                        .filter(|(_, q)| !q.is_zero())
                        .map(|(o, q)| (outcomes[o].clone(), format_rational(q)))
                        .collect();
                    (profile_key(setting, p), row)
                })
                .collect(),
        },
    };
    Ok(to_json(&MechanismDoc {
        schema_version: SCHEMA_VERSION,
        body,
        provenance: file.provenance.as_ref().map(|p| ProvenanceDoc {
            solver: p.solver.clone(),
            concept: p.concept,
            value: format_rational(&p.value),
        }),
    }))
}

/// Outcome label of each profile, keyed by type-vector name, for display.
pub fn describe_mechanism(setting: &Setting, mechanism: &AnyMechanism) -> Vec<(String, String)> {
    let outcomes = setting.outcomes();
    (0..setting.num_profiles())
        .map(|p| {
            let value = match mechanism {
                AnyMechanism::Deterministic(m) => outcomes[m.outcome(p)].clone(),
                AnyMechanism::Randomized(m) => m
                    .distribution(p)
                    .iter()
                    .enumerate()
                    .filter(|(_, q)| !q.is_zero())
                    .map(|(o, q)| format!("{}: {}", outcomes[o], format_rational(q)))
                    .collect::<Vec<_>>()
                    .join(", "),
            };
            (profile_key(setting, p), value)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Reduction metadata

pub fn parse_meta(text: &str) -> Result<ReductionMeta, DocumentError> {
    let doc: MetaDoc = serde_json::from_str(text).map_err(syntax)?;
    check_version(doc.schema_version)?;
    let mut seen = HashSet::new();
    if let Some(role) = doc.outcome_roles.iter().find(|r| !seen.insert(**r)) {
        return Err(DocumentError::Syntax(format!("outcome role {role:?} listed twice")));
    }
    Ok(ReductionMeta {
        kind: doc.kind,
        goal: parse_at(&doc.goal, || "goal".into())?,
        outcome_roles: doc.outcome_roles,
        type_roles: doc.type_roles,
    })
}

pub fn write_meta(meta: &ReductionMeta) -> String {
    to_json(&MetaDoc {
        schema_version: SCHEMA_VERSION,
        kind: meta.kind,
        goal: format_rational(&meta.goal),
        outcome_roles: meta.outcome_roles.clone(),
        type_roles: meta.type_roles.clone(),
    })
}

/// Reads a profile index by type-vector key, e.g. `"t1,x"`.
pub fn profile_for_key(setting: &Setting, key: &str) -> Option<usize> {
    profile_index_map(setting).get(key).copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demo::{randomization_gap, randomization_gap_best_deterministic, randomization_gap_mixed};
    use crate::rational::{int, rat};
    use crate::reductions::{GraphInstance, KnapsackInstance, reduce_is, reduce_knapsack};

    fn gap_problem() -> Problem {
        Problem {
            setting: randomization_gap(),
            objective: Objective::social_welfare().with_goal(rat(11, 2)),
        }
    }

    #[test]
    fn setting_round_trip() {
        let problem = gap_problem();
        let text = write_setting(&problem.setting, &problem.objective).unwrap();
        assert_eq!(parse_setting(&text).unwrap(), problem);
        assert_eq!(write_setting(&problem.setting, &problem.objective).unwrap(), text);
    }

    #[test]
    fn joint_prior_and_table_round_trip() {
        let setting = randomization_gap().to_joint_prior();
        let table = (0..setting.num_profiles())
            .map(|p| (0..3).map(|o| rat(p as i64 + o, 3)).collect())
            .collect();
        let objective = Objective::table(table);
        let text = write_setting(&setting, &objective).unwrap();
        assert!(text.contains("\"joint\""));
        assert!(text.contains("\"t1,t1\""));
        let parsed = parse_setting(&text).unwrap();
        assert_eq!(parsed.setting, setting);
        assert_eq!(parsed.objective, objective);
    }

    #[test]
    fn gap_setting_text_form() {
        let problem = gap_problem();
        let text = write_setting(&problem.setting, &problem.objective).unwrap();
        assert!(text.contains("\"schema_version\": 1"));
        assert!(text.contains("\"objective\": \"social_welfare\""));
        assert!(text.contains("\"goal\": \"11/2\""));
        assert!(text.contains("\"t1\": \"1/2\""));
    }

    #[test]
    fn inputs_are_normalized() {
        let text = r#"{
            "schema_version": 1,
            "agents": [{"name": "a", "types": ["x", "y"]}],
            "outcomes": ["p", "q"],
            "prior": {"independent": {"a": {"y": "2/4", "x": "+1/2"}}},
            "utilities": {"a": {"y": {"q": "0", "p": "6/-4"}, "x": {"p": "1", "q": "-0"}}},
            "objective": "social_welfare"
        }"#;
        let problem = parse_setting(text).unwrap();
        assert_eq!(problem.setting.utility(0, 1, 0), &rat(-3, 2));
        assert_eq!(problem.setting.type_mass(0, 0), rat(1, 2));
        let out = write_setting(&problem.setting, &problem.objective).unwrap();
        assert!(out.contains("\"p\": \"-3/2\""));
        assert_eq!(parse_setting(&out).unwrap(), problem);
    }

    fn gap_text() -> String {
        let problem = gap_problem();
        write_setting(&problem.setting, &problem.objective).unwrap()
    }

    #[test]
    fn errors_carry_locations() {
        let text = gap_text().replacen("\"8\"", "\"8/0\"", 1);
        let err = parse_setting(&text).unwrap_err();
        assert!(err.to_string().starts_with("utilities.agent1.t2.o1"), "{err}");

        let text = gap_text().replacen("\"o3\": \"4\"", "\"o9\": \"4\"", 1);
        let err = parse_setting(&text).unwrap_err();
        assert!(matches!(err, DocumentError::UnknownOutcome { ref outcome, .. } if outcome == "o9"), "{err}");

        let text = gap_text().replacen("\"1/2\"", "\"1/3\"", 1);
        let err = parse_setting(&text).unwrap_err();
        assert!(err.to_string().contains("agent1"), "{err}");

        let text = gap_text().replacen("\"schema_version\": 1", "\"schema_version\": 7", 1);
        assert_eq!(parse_setting(&text), Err(DocumentError::SchemaVersion { found: 7 }));

        assert!(matches!(parse_setting("{"), Err(DocumentError::Syntax(_))));
    }

    #[test]
    fn missing_utility_is_named() {
        let text = gap_text().replacen("\"o2\": \"2\",", "", 1);
        assert_eq!(
            parse_setting(&text),
            Err(DocumentError::MissingUtility {
                agent: "agent1".into(),
                ty: "t1".into(),
                outcome: "o2".into()
            })
        );
    }

    #[test]
    fn commas_in_names_are_rejected() {
        let text = gap_text().replace("\"o1\"", "\"o,1\"");
        assert_eq!(parse_setting(&text), Err(DocumentError::ReservedCharacter("o,1".into())));
    }

    #[test]
    fn mechanism_round_trips() {
        let setting = randomization_gap();
        let det = MechanismFile {
            mechanism: AnyMechanism::Deterministic(randomization_gap_best_deterministic(&setting)),
            provenance: Some(Provenance {
                solver: "det".into(),
                concept: Concept::DominantStrategy,
                value: int(5),
            }),
        };
        let text = write_mechanism(&setting, &det).unwrap();
        assert!(text.contains("\"kind\": \"deterministic\""));
        assert!(text.contains("\"t1,t1\": \"o2\""));
        assert!(text.contains("\"concept\": \"ds\""));
        assert_eq!(parse_mechanism(&text, &setting).unwrap(), det);

        let rand = MechanismFile {
            mechanism: AnyMechanism::Randomized(randomization_gap_mixed(&setting)),
            provenance: None,
        };
        let text = write_mechanism(&setting, &rand).unwrap();
        assert!(text.contains("\"o3\": \"1/2\""));
        assert!(!text.contains("\"0\""));
        assert_eq!(parse_mechanism(&text, &setting).unwrap(), rand);
    }

    #[test]
    fn mechanism_shape_errors() {
        let setting = randomization_gap();
        let missing = r#"{"schema_version": 1, "kind": "deterministic", "map": {"t1,t1": "o2"}}"#;
        assert_eq!(
            parse_mechanism(missing, &setting),
            Err(DocumentError::MissingProfile {
                at: "map".into(),
                key: "t2,t1".into()
            })
        );
        let unknown = r#"{"schema_version": 1, "kind": "deterministic", "map": {"t1": "o2"}}"#;
        assert!(matches!(
            parse_mechanism(unknown, &setting),
            Err(DocumentError::UnknownProfile { .. })
        ));
        let bad_sum = r#"{"schema_version": 1, "kind": "randomized",
            "map": {"t1,t1": {"o1": "1/2"}, "t2,t1": {"o1": "1"}}}"#;
        assert!(matches!(
            parse_mechanism(bad_sum, &setting),
            Err(DocumentError::Model(ModelError::DistributionSum { .. }))
        ));
    }

    #[test]
    fn meta_round_trips() {
        let (_, is_meta) = reduce_is(&GraphInstance::new(3, [(1, 2), (2, 3)], 2).unwrap());
        let text = write_meta(&is_meta);
        assert!(text.contains("\"goal\": \"202/9\""));
        assert!(text.contains("\"role\": \"edge_first\""));
        assert_eq!(parse_meta(&text).unwrap(), is_meta);

        let (_, k_meta) = reduce_knapsack(&KnapsackInstance::new(vec![(1, 2), (2, 3)], 2, 3).unwrap()).unwrap();
        let text = write_meta(&k_meta);
        assert!(text.contains("\"goal\": \"18\""));
        assert_eq!(parse_meta(&text).unwrap(), k_meta);
    }

    #[test]
    fn profile_keys() {
        let setting = randomization_gap();
        assert_eq!(profile_for_key(&setting, "t2,t1"), Some(1));
        assert_eq!(profile_for_key(&setting, "t3,t1"), None);
    }
}
