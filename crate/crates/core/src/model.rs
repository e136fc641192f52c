//! Finite preference-aggregation settings, mechanisms over them, and
//! objectives, all over exact rationals.
//!
//! Type vectors ("profiles") are indexed in row-major order: agent 0 is
//! the most significant digit and the last agent varies fastest. Every
//! table keyed by type vector (joint priors, mechanisms, objective tables)
//! uses that index.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{Rational, format_rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("setting has no agents")]
    NoAgents,
    #[error("setting has no outcomes")]
    NoOutcomes,
    #[error("duplicate outcome label {0:?}")]
    DuplicateOutcome(String),
    #[error("agent {agent:?} has an empty type set")]
    NoTypes { agent: String },
    #[error("agent {agent:?} declares type {label:?} twice")]
    DuplicateType { agent: String, label: String },
    #[error("duplicate agent name {0:?}")]
    DuplicateAgent(String),
    #[error("expected utility tables for {expected} agents, found {found}")]
    UtilityAgentCount { expected: usize, found: usize },
    #[error("incomplete utility table for agent {agent:?}: expected {expected} type rows, found {found}")]
    UtilityRows { agent: String, expected: usize, found: usize },
    #[error("incomplete utility table for agent {agent:?} at type {ty:?}: expected {expected} outcome entries, found {found}")]
    UtilityEntries {
        agent: String,
        ty: String,
        expected: usize,
        found: usize,
    },
    #[error("expected priors for {expected} agents, found {found}")]
    PriorAgentCount { expected: usize, found: usize },
    #[error("prior of agent {agent:?} has {found} masses for {expected} types")]
    PriorLength {
        agent: String,
        expected: usize,
        found: usize,
    },
    #[error("prior of agent {agent:?} gives negative mass to type {ty:?}")]
    NegativeMass { agent: String, ty: String },
    #[error("prior of agent {agent:?} sums to {sum}, not 1")]
    PriorSum { agent: String, sum: String },
    #[error("joint prior entry {entry} has malformed type vector {types:?}")]
    JointMalformed { entry: usize, types: Vec<usize> },
    #[error("joint prior lists type vector ({0}) more than once")]
    JointDuplicate(String),
    #[error("joint prior is missing type vector ({0})")]
    JointMissing(String),
    #[error("joint prior gives negative mass to type vector ({0})")]
    JointNegative(String),
    #[error("joint prior sums to {0}, not 1")]
    JointSum(String),
    #[error("objective table has {found} type-vector rows, expected {expected}")]
    ObjectiveRows { expected: usize, found: usize },
    #[error("objective table row ({profile}) has {found} outcome entries, expected {expected}")]
    ObjectiveEntries {
        profile: String,
        expected: usize,
        found: usize,
    },
    #[error("mechanism covers {found} type vectors, setting has {expected}")]
    MechanismSize { expected: usize, found: usize },
    #[error("mechanism maps type vector ({profile}) to outcome index {outcome}, but there are {count} outcomes")]
    OutcomeIndex {
        profile: String,
        outcome: usize,
        count: usize,
    },
    #[error("distribution at type vector ({profile}) has {found} entries, expected {expected}")]
    DistributionLength {
        profile: String,
        expected: usize,
        found: usize,
    },
    #[error("distribution at type vector ({profile}) has a negative entry")]
    DistributionNegative { profile: String },
    #[error("distribution at type vector ({profile}) sums to {sum}, not 1")]
    DistributionSum { profile: String, sum: String },
}

/// Mixed-radix indexing of the product of all agents' type sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeSpace {
    sizes: Vec<usize>,
    strides: Vec<usize>,
    count: usize,
}

impl TypeSpace {
    pub fn new(sizes: Vec<usize>) -> Self {
        let mut strides = vec![0; sizes.len()];
        let mut stride = 1;
        for agent in (0..sizes.len()).rev() {
            strides[agent] = stride;
            stride *= sizes[agent];
        }
        TypeSpace {
            sizes,
            strides,
            count: stride,
        }
    }

    pub fn num_agents(&self) -> usize {
        self.sizes.len()
    }

    pub fn num_types(&self, agent: usize) -> usize {
        self.sizes[agent]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn num_profiles(&self) -> usize {
        self.count
    }

    pub fn profile_index(&self, types: &[usize]) -> usize {
        debug_assert_eq!(types.len(), self.sizes.len());
        types
            .iter()
            .zip(&self.strides)
            .map(|(t, stride)| t * stride)
            .sum()
    }

    pub fn profile_types(&self, profile: usize) -> Vec<usize> {
        (0..self.sizes.len())
            .map(|agent| self.type_of(profile, agent))
            .collect()
    }

    pub fn type_of(&self, profile: usize, agent: usize) -> usize {
        (profile / self.strides[agent]) % self.sizes[agent]
    }

    /// The profile that differs from `profile` only in `agent`'s type.
    pub fn with_type(&self, profile: usize, agent: usize, ty: usize) -> usize {
        let current = self.type_of(profile, agent);
        profile - current * self.strides[agent] + ty * self.strides[agent]
    }

    /// Number of opposing type vectors θ^{-i} for `agent`.
    pub fn num_opponent_profiles(&self, agent: usize) -> usize {
        self.count / self.sizes[agent]
    }

    /// Profile formed by `agent` holding `own` and the others holding the
    /// `k`-th opposing vector (row-major over the remaining agents).
    pub fn opponent_profile(&self, agent: usize, own: usize, k: usize) -> usize {
        let mut rest = k;
        let mut profile = own * self.strides[agent];
        for other in (0..self.sizes.len()).rev() {
            if other == agent {
                continue;
            }
            profile += (rest % self.sizes[other]) * self.strides[other];
            rest /= self.sizes[other];
        }
        profile
    }

    /// The opposing types (agent order, `agent` omitted) of the `k`-th opposing vector.
    pub fn opponent_types(&self, agent: usize, k: usize) -> Vec<usize> {
        let profile = self.opponent_profile(agent, 0, k);
        (0..self.sizes.len())
            .filter(|&other| other != agent)
            .map(|other| self.type_of(profile, other))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agent {
    pub name: String,
    pub types: Vec<String>,
}

impl Agent {
    pub fn new<S: Into<String>>(name: impl Into<String>, types: impl IntoIterator<Item = S>) -> Self {
        Agent {
            name: name.into(),
            types: types.into_iter().map(Into::into).collect(),
        }
    }
}

/// Prior as supplied by a caller, before validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PriorSpec {
    /// One distribution per agent, aligned with that agent's type list.
    Independent(Vec<Vec<Rational>>),
    /// A list of (type vector, mass) entries that must cover every type vector once.
    Joint(Vec<(Vec<usize>, Rational)>),
}

/// Candidate setting. Turned into a [`Setting`] by [`validate_setting`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawSetting {
    pub agents: Vec<Agent>,
    pub outcomes: Vec<String>,
    pub prior: PriorSpec,
    /// `utilities[agent][type][outcome]`
    pub utilities: Vec<Vec<Vec<Rational>>>,
}

/// Validated prior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prior {
    Independent(Vec<Vec<Rational>>),
    /// Mass per profile index.
    Joint(Vec<Rational>),
}

/// A validated preference-aggregation setting. Immutable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Setting {
    agents: Vec<Agent>,
    outcomes: Vec<String>,
    prior: Prior,
    utilities: Vec<Vec<Vec<Rational>>>,
    space: TypeSpace,
    profile_mass: Vec<Rational>,
    // conditionals[agent][own type][opponent index]
    conditionals: Vec<Vec<Vec<Rational>>>,
}

fn check_labels(labels: &[String], dup: impl Fn(&str) -> ModelError) -> Result<(), ModelError> {
    let mut seen = HashSet::new();
    for label in labels {
        if !seen.insert(label.as_str()) {
            return Err(dup(label));
        }
    }
    Ok(())
}

/// Checks every structural invariant of a setting and returns the first
/// violation found, naming its location.
pub fn validate_setting(raw: RawSetting) -> Result<Setting, ModelError> {
    let RawSetting {
        agents,
        outcomes,
        prior,
        utilities,
    } = raw;

    if agents.is_empty() {
        return Err(ModelError::NoAgents);
    }
    check_labels(
        &agents.iter().map(|a| a.name.clone()).collect::<Vec<_>>(),
        |n| ModelError::DuplicateAgent(n.to_string()),
    )?;
    if outcomes.is_empty() {
        return Err(ModelError::NoOutcomes);
    }
    check_labels(&outcomes, |o| ModelError::DuplicateOutcome(o.to_string()))?;
    for agent in &agents {
        if agent.types.is_empty() {
            return Err(ModelError::NoTypes {
                agent: agent.name.clone(),
            });
        }
        check_labels(&agent.types, |t| ModelError::DuplicateType {
            agent: agent.name.clone(),
            label: t.to_string(),
        })?;
    }

    if utilities.len() != agents.len() {
        return Err(ModelError::UtilityAgentCount {
            expected: agents.len(),
            found: utilities.len(),
        });
    }
    for (agent, table) in agents.iter().zip(&utilities) {
        if table.len() != agent.types.len() {
            return Err(ModelError::UtilityRows {
                agent: agent.name.clone(),
                expected: agent.types.len(),
                found: table.len(),
            });
        }
        for (ty, row) in agent.types.iter().zip(table) {
            if row.len() != outcomes.len() {
                return Err(ModelError::UtilityEntries {
                    agent: agent.name.clone(),
                    ty: ty.clone(),
                    expected: outcomes.len(),
                    found: row.len(),
                });
            }
        }
    }

    let space = TypeSpace::new(agents.iter().map(|a| a.types.len()).collect());
    let describe = |types: &[usize]| describe_types(&agents, types);

    let prior = match prior {
        PriorSpec::Independent(dists) => {
            if dists.len() != agents.len() {
                return Err(ModelError::PriorAgentCount {
                    expected: agents.len(),
                    found: dists.len(),
                });
            }
            for (agent, dist) in agents.iter().zip(&dists) {
                if dist.len() != agent.types.len() {
                    return Err(ModelError::PriorLength {
                        agent: agent.name.clone(),
                        expected: agent.types.len(),
                        found: dist.len(),
                    });
                }
                if let Some(pos) = dist.iter().position(Signed::is_negative) {
                    return Err(ModelError::NegativeMass {
                        agent: agent.name.clone(),
                        ty: agent.types[pos].clone(),
                    });
                }
                let sum: Rational = dist.iter().sum();
                if !sum.is_one() {
                    return Err(ModelError::PriorSum {
                        agent: agent.name.clone(),
                        sum: format_rational(&sum),
                    });
                }
            }
            Prior::Independent(dists)
        }
        PriorSpec::Joint(entries) => {
            let mut table: Vec<Option<Rational>> = vec![None; space.num_profiles()];
            for (entry, (types, mass)) in entries.into_iter().enumerate() {
                let well_formed = types.len() == agents.len()
                    && types.iter().zip(space.sizes()).all(|(t, size)| t < size);
                if !well_formed {
                    return Err(ModelError::JointMalformed { entry, types });
                }
                if mass.is_negative() {
                    return Err(ModelError::JointNegative(describe(&types)));
                }
                let slot = &mut table[space.profile_index(&types)];
                if slot.is_some() {
                    return Err(ModelError::JointDuplicate(describe(&types)));
                }
                *slot = Some(mass);
            }
            let mut masses = Vec::with_capacity(table.len());
            for (profile, mass) in table.into_iter().enumerate() {
                match mass {
                    Some(mass) => masses.push(mass),
                    None => {
                        return Err(ModelError::JointMissing(describe(
                            &space.profile_types(profile),
                        )));
                    }
                }
            }
            let sum: Rational = masses.iter().sum();
            if !sum.is_one() {
                return Err(ModelError::JointSum(format_rational(&sum)));
            }
            Prior::Joint(masses)
        }
    };

    let profile_mass = profile_masses(&space, &prior);
    let conditionals = (0..agents.len())
        .map(|agent| {
            (0..space.num_types(agent))
                .map(|own| conditional(&space, &prior, &profile_mass, agent, own))
                .collect()
        })
        .collect();

    Ok(Setting {
        agents,
        outcomes,
        prior,
        utilities,
        space,
        profile_mass,
        conditionals,
    })
}

fn describe_types(agents: &[Agent], types: &[usize]) -> String {
    types
        .iter()
        .zip(agents)
        .map(|(&t, agent)| agent.types.get(t).cloned().unwrap_or_else(|| format!("#{t}")))
        .collect::<Vec<_>>()
        .join(", ")
}

fn profile_masses(space: &TypeSpace, prior: &Prior) -> Vec<Rational> {
    match prior {
        Prior::Joint(masses) => masses.clone(),
        Prior::Independent(dists) => (0..space.num_profiles())
            .map(|profile| {
                dists
                    .iter()
                    .enumerate()
                    .map(|(agent, dist)| &dist[space.type_of(profile, agent)])
                    .product()
            })
            .collect(),
    }
}

fn conditional(
    space: &TypeSpace,
    prior: &Prior,
    profile_mass: &[Rational],
    agent: usize,
    own: usize,
) -> Vec<Rational> {
    let opponents = space.num_opponent_profiles(agent);
    match prior {
        Prior::Independent(dists) => (0..opponents)
            .map(|k| {
                let profile = space.opponent_profile(agent, own, k);
                dists
                    .iter()
                    .enumerate()
                    .filter(|&(other, _)| other != agent)
                    .map(|(other, dist)| &dist[space.type_of(profile, other)])
                    .product()
            })
            .collect(),
        Prior::Joint(_) => {
            let joint: Vec<&Rational> = (0..opponents)
                .map(|k| &profile_mass[space.opponent_profile(agent, own, k)])
                .collect();
            let marginal: Rational = joint.iter().copied().sum();
            if marginal.is_zero() {
                let uniform = Rational::new(1.into(), opponents.into());
                vec![uniform; opponents]
            } else {
                joint.into_iter().map(|mass| mass / &marginal).collect()
            }
        }
    }
}

impl Setting {
    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn num_outcomes(&self) -> usize {
        self.outcomes.len()
    }

    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    pub fn space(&self) -> &TypeSpace {
        &self.space
    }

    pub fn num_profiles(&self) -> usize {
        self.space.num_profiles()
    }

    pub fn utility(&self, agent: usize, ty: usize, outcome: usize) -> &Rational {
        &self.utilities[agent][ty][outcome]
    }

    pub fn utilities(&self) -> &[Vec<Vec<Rational>>] {
        &self.utilities
    }

    /// Prior probability of the full type vector at `profile`.
    pub fn profile_mass(&self, profile: usize) -> &Rational {
        &self.profile_mass[profile]
    }

    /// Marginal prior probability that `agent` has type `ty`.
    pub fn type_mass(&self, agent: usize, ty: usize) -> Rational {
        match &self.prior {
            Prior::Independent(dists) => dists[agent][ty].clone(),
            Prior::Joint(_) => (0..self.space.num_opponent_profiles(agent))
                .map(|k| &self.profile_mass[self.space.opponent_profile(agent, ty, k)])
                .sum(),
        }
    }

    /// Distribution over the opposing type vectors given that `agent` has
    /// type `own`; entry `k` belongs to `space().opponent_profile(agent, own, k)`.
    ///
    /// For a joint prior this is the prior conditioned on `own`. If `own`
    /// has zero marginal mass the uniform distribution is returned instead.
    pub fn conditional_other_types(&self, agent: usize, own: usize) -> &[Rational] {
        &self.conditionals[agent][own]
    }

    pub fn social_welfare(&self, profile: usize, outcome: usize) -> Rational {
        (0..self.agents.len())
            .map(|agent| self.utility(agent, self.space.type_of(profile, agent), outcome))
            .sum()
    }

    /// Human-readable label of a type vector, e.g. `"t1, t2"`.
    pub fn describe_profile(&self, profile: usize) -> String {
        describe_types(&self.agents, &self.space.profile_types(profile))
    }

    /// The same setting with its prior rewritten as the equivalent joint table.
    pub fn to_joint_prior(&self) -> Setting {
        let entries = (0..self.num_profiles())
            .map(|profile| (self.space.profile_types(profile), self.profile_mass[profile].clone()))
            .collect();
        let mut raw = self.to_raw();
        raw.prior = PriorSpec::Joint(entries);
        validate_setting(raw).expect("joint re-encoding of a valid setting is valid")
    }

    pub fn to_raw(&self) -> RawSetting {
        let prior = match &self.prior {
            Prior::Independent(dists) => PriorSpec::Independent(dists.clone()),
            Prior::Joint(masses) => PriorSpec::Joint(
                masses
                    .iter()
                    .enumerate()
                    .map(|(profile, mass)| (self.space.profile_types(profile), mass.clone()))
                    .collect(),
            ),
        };
        RawSetting {
            agents: self.agents.clone(),
            outcomes: self.outcomes.clone(),
            prior,
            utilities: self.utilities.clone(),
        }
    }
}

impl TryFrom<RawSetting> for Setting {
    type Error = ModelError;

    fn try_from(raw: RawSetting) -> Result<Self, Self::Error> {
        validate_setting(raw)
    }
}

/// A total map from type vectors to a single outcome.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeterministicMechanism {
    outcomes: Vec<usize>,
    num_outcomes: usize,
}

impl DeterministicMechanism {
    pub fn new(setting: &Setting, outcomes: Vec<usize>) -> Result<Self, ModelError> {
        if outcomes.len() != setting.num_profiles() {
            return Err(ModelError::MechanismSize {
                expected: setting.num_profiles(),
                found: outcomes.len(),
            });
        }
        if let Some(profile) = outcomes.iter().position(|&o| o >= setting.num_outcomes()) {
            return Err(ModelError::OutcomeIndex {
                profile: setting.describe_profile(profile),
                outcome: outcomes[profile],
                count: setting.num_outcomes(),
            });
        }
        Ok(DeterministicMechanism {
            outcomes,
            num_outcomes: setting.num_outcomes(),
        })
    }

    /// Builds a mechanism from a rule over type vectors (one type index per agent).
    pub fn from_rule(
        setting: &Setting,
        mut rule: impl FnMut(&[usize]) -> usize,
    ) -> Result<Self, ModelError> {
        let outcomes = (0..setting.num_profiles())
            .map(|profile| rule(&setting.space().profile_types(profile)))
            .collect();
        Self::new(setting, outcomes)
    }

    pub fn constant(setting: &Setting, outcome: usize) -> Result<Self, ModelError> {
        Self::new(setting, vec![outcome; setting.num_profiles()])
    }

    pub fn outcome(&self, profile: usize) -> usize {
        self.outcomes[profile]
    }

    pub fn outcomes(&self) -> &[usize] {
        &self.outcomes
    }

    pub fn num_outcomes(&self) -> usize {
        self.num_outcomes
    }

    /// Point-mass randomized mechanism choosing the same outcomes.
    pub fn lift(&self) -> RandomizedMechanism {
        lift_deterministic(self)
    }
}

/// A total map from type vectors to a probability distribution over outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomizedMechanism {
    distributions: Vec<Vec<Rational>>,
}

impl RandomizedMechanism {
    pub fn new(setting: &Setting, distributions: Vec<Vec<Rational>>) -> Result<Self, ModelError> {
        if distributions.len() != setting.num_profiles() {
            return Err(ModelError::MechanismSize {
                expected: setting.num_profiles(),
                found: distributions.len(),
            });
        }
        for (profile, dist) in distributions.iter().enumerate() {
            if dist.len() != setting.num_outcomes() {
                return Err(ModelError::DistributionLength {
                    profile: setting.describe_profile(profile),
                    expected: setting.num_outcomes(),
                    found: dist.len(),
                });
            }
            if dist.iter().any(Signed::is_negative) {
                return Err(ModelError::DistributionNegative {
                    profile: setting.describe_profile(profile),
                });
            }
            let sum: Rational = dist.iter().sum();
            if !sum.is_one() {
                return Err(ModelError::DistributionSum {
                    profile: setting.describe_profile(profile),
                    sum: format_rational(&sum),
                });
            }
        }
        Ok(RandomizedMechanism { distributions })
    }

    /// Same uniform distribution over outcomes at every type vector.
    pub fn uniform(setting: &Setting) -> Self {
        let mass = Rational::new(1.into(), setting.num_outcomes().into());
        RandomizedMechanism {
            distributions: vec![vec![mass; setting.num_outcomes()]; setting.num_profiles()],
        }
    }

    pub fn distribution(&self, profile: usize) -> &[Rational] {
        &self.distributions[profile]
    }

    pub fn distributions(&self) -> &[Vec<Rational>] {
        &self.distributions
    }
}

pub fn lift_deterministic(mechanism: &DeterministicMechanism) -> RandomizedMechanism {
    let distributions = mechanism
        .outcomes
        .iter()
        .map(|&chosen| {
            (0..mechanism.num_outcomes)
                .map(|o| if o == chosen { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    RandomizedMechanism { distributions }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObjectiveKind {
    /// Σ_i u_i(θ_i, o)
    SocialWelfare,
    /// `table[profile][outcome]`
    Table(Vec<Vec<Rational>>),
}

/// Designer's objective g(θ, o), with an optional goal for the decision variants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub kind: ObjectiveKind,
    pub goal: Option<Rational>,
}

impl Objective {
    pub fn social_welfare() -> Self {
        Objective {
            kind: ObjectiveKind::SocialWelfare,
            goal: None,
        }
    }

    pub fn table(table: Vec<Vec<Rational>>) -> Self {
        Objective {
            kind: ObjectiveKind::Table(table),
            goal: None,
        }
    }

    pub fn with_goal(mut self, goal: Rational) -> Self {
        self.goal = Some(goal);
        self
    }

    pub fn validate(&self, setting: &Setting) -> Result<(), ModelError> {
        if let ObjectiveKind::Table(table) = &self.kind {
            if table.len() != setting.num_profiles() {
                return Err(ModelError::ObjectiveRows {
                    expected: setting.num_profiles(),
                    found: table.len(),
                });
            }
            for (profile, row) in table.iter().enumerate() {
                if row.len() != setting.num_outcomes() {
                    return Err(ModelError::ObjectiveEntries {
                        profile: setting.describe_profile(profile),
                        expected: setting.num_outcomes(),
                        found: row.len(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn value(&self, setting: &Setting, profile: usize, outcome: usize) -> Rational {
        match &self.kind {
            ObjectiveKind::SocialWelfare => setting.social_welfare(profile, outcome),
            ObjectiveKind::Table(table) => table[profile][outcome].clone(),
        }
    }

    /// Dense `g[profile][outcome]`.
    pub fn dense(&self, setting: &Setting) -> Vec<Vec<Rational>> {
        (0..setting.num_profiles())
            .map(|profile| {
                (0..setting.num_outcomes())
                    .map(|outcome| self.value(setting, profile, outcome))
                    .collect()
            })
            .collect()
    }

    /// Dense prior-weighted objective `P(θ) · g(θ, o)`.
    pub fn weighted(&self, setting: &Setting) -> Vec<Vec<Rational>> {
        let mut dense = self.dense(setting);
        for (profile, row) in dense.iter_mut().enumerate() {
            let mass = setting.profile_mass(profile);
            for entry in row.iter_mut() {
                *entry *= mass;
            }
        }
        dense
    }
}

/// E_θ[g(θ, o(θ))].
pub fn expected_objective_det(
    setting: &Setting,
    mechanism: &DeterministicMechanism,
    objective: &Objective,
) -> Rational {
    (0..setting.num_profiles())
        .filter(|&profile| !setting.profile_mass(profile).is_zero())
        .map(|profile| {
            setting.profile_mass(profile) * objective.value(setting, profile, mechanism.outcome(profile))
        })
        .sum()
}

/// E_θ[E_{o←p(θ)}[g(θ, o)]].
pub fn expected_objective_rand(
    setting: &Setting,
    mechanism: &RandomizedMechanism,
    objective: &Objective,
) -> Rational {
    let mut total = Rational::zero();
    for profile in 0..setting.num_profiles() {
        let mass = setting.profile_mass(profile);
        if mass.is_zero() {
            continue;
        }
        let inner: Rational = mechanism
            .distribution(profile)
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(outcome, p)| p * objective.value(setting, profile, outcome))
            .sum();
        total += mass * inner;
    }
    total
}
