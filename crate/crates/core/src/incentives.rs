//! Exact incentive-compatibility checks for deterministic and randomized
//! mechanisms under dominant-strategy and Bayes-Nash implementation.
//!
//! On failure every check returns the lexicographically first violated
//! inequality (agent, true type, opposing vector, misreport) as a
//! [`ManipulationWitness`]. Misreports equal to the true type are skipped.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::model::{DeterministicMechanism, RandomizedMechanism, Setting};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Concept {
    #[serde(rename = "ds")]
    DominantStrategy,
    #[serde(rename = "bn")]
    BayesNash,
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Concept::DominantStrategy => "ds",
            Concept::BayesNash => "bn",
        })
    }
}

impl FromStr for Concept {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ds" => Ok(Concept::DominantStrategy),
            "bn" => Ok(Concept::BayesNash),
            other => Err(format!("unknown solution concept {other:?} (expected ds or bn)")),
        }
    }
}

/// Anything that yields an agent's (expected) utility at a reported profile.
pub trait Mechanism {
    /// Utility of `agent` with true type `ty` when `profile` is reported.
    fn utility_at(&self, setting: &Setting, profile: usize, agent: usize, ty: usize) -> Rational;
}

impl Mechanism for DeterministicMechanism {
    fn utility_at(&self, setting: &Setting, profile: usize, agent: usize, ty: usize) -> Rational {
        setting.utility(agent, ty, self.outcome(profile)).clone()
    }
}

impl Mechanism for RandomizedMechanism {
    fn utility_at(&self, setting: &Setting, profile: usize, agent: usize, ty: usize) -> Rational {
        self.distribution(profile)
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(outcome, p)| p * setting.utility(agent, ty, outcome))
            .sum()
    }
}

/// A violated incentive constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManipulationWitness {
    pub concept: Concept,
    pub agent: usize,
    pub true_type: usize,
    pub misreport: usize,
    /// Opposing types (agent order, the manipulating agent omitted); only
    /// present for dominant-strategy violations.
    pub context: Option<Vec<usize>>,
    pub truthful: Rational,
    pub deviating: Rational,
    pub gain: Rational,
}

impl ManipulationWitness {
    /// Recomputes (truthful, deviating) utility of the cited inequality.
    pub fn reevaluate<M: Mechanism>(&self, setting: &Setting, mechanism: &M) -> (Rational, Rational) {
        let space = setting.space();
        match &self.context {
            Some(opponents) => {
                let mut types = opponents.clone();
                types.insert(self.agent, self.true_type);
                let truthful = space.profile_index(&types);
                let deviating = space.with_type(truthful, self.agent, self.misreport);
                (
                    mechanism.utility_at(setting, truthful, self.agent, self.true_type),
                    mechanism.utility_at(setting, deviating, self.agent, self.true_type),
                )
            }
            None => (
                interim_utility(setting, mechanism, self.agent, self.true_type, self.true_type),
                interim_utility(setting, mechanism, self.agent, self.true_type, self.misreport),
            ),
        }
    }

    pub fn describe(&self, setting: &Setting) -> String {
        let agent = &setting.agents()[self.agent];
        let mut text = format!(
            "agent {} with true type {} gains {} by reporting {} ({} instead of {})",
            agent.name,
            agent.types[self.true_type],
            self.gain,
            agent.types[self.misreport],
            self.deviating,
            self.truthful,
        );
        if let Some(opponents) = &self.context {
            let others: Vec<String> = setting
                .agents()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != self.agent)
                .zip(opponents)
                .map(|((_, other), &t)| format!("{}={}", other.name, other.types[t]))
                .collect();
            text.push_str(&format!(" when others report [{}]", others.join(", ")));
        }
        text
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Verdict {
    Pass,
    Manipulable(ManipulationWitness),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&ManipulationWitness> {
        match self {
            Verdict::Pass => None,
            Verdict::Manipulable(w) => Some(w),
        }
    }
}

/// E_{θ^{-i} | θ^i = true_type}[utility of reporting `report`].
pub fn interim_utility<M: Mechanism>(
    setting: &Setting,
    mechanism: &M,
    agent: usize,
    true_type: usize,
    report: usize,
) -> Rational {
    let space = setting.space();
    setting
        .conditional_other_types(agent, true_type)
        .iter()
        .enumerate()
        .filter(|(_, mass)| !mass.is_zero())
        .map(|(k, mass)| {
            let profile = space.opponent_profile(agent, report, k);
            mass * mechanism.utility_at(setting, profile, agent, true_type)
        })
        .sum()
}

pub fn check_ds<M: Mechanism>(setting: &Setting, mechanism: &M) -> Verdict {
    let space = setting.space();
    for agent in 0..setting.num_agents() {
        let types = space.num_types(agent);
        for true_type in 0..types {
            for k in 0..space.num_opponent_profiles(agent) {
                let profile = space.opponent_profile(agent, true_type, k);
                let truthful = mechanism.utility_at(setting, profile, agent, true_type);
                for misreport in (0..types).filter(|&t| t != true_type) {
                    let deviated = space.with_type(profile, agent, misreport);
                    let deviating = mechanism.utility_at(setting, deviated, agent, true_type);
                    let gain = &deviating - &truthful;
                    if gain.is_positive() {
                        return Verdict::Manipulable(ManipulationWitness {
                            concept: Concept::DominantStrategy,
                            agent,
                            true_type,
                            misreport,
                            context: Some(space.opponent_types(agent, k)),
                            truthful,
                            deviating,
                            gain,
                        });
                    }
                }
            }
        }
    }
    Verdict::Pass
}

pub fn check_bn<M: Mechanism>(setting: &Setting, mechanism: &M) -> Verdict {
    let space = setting.space();
    for agent in 0..setting.num_agents() {
        let types = space.num_types(agent);
        for true_type in 0..types {
            let truthful = interim_utility(setting, mechanism, agent, true_type, true_type);
            for misreport in (0..types).filter(|&t| t != true_type) {
                let deviating = interim_utility(setting, mechanism, agent, true_type, misreport);
                let gain = &deviating - &truthful;
                if gain.is_positive() {
                    return Verdict::Manipulable(ManipulationWitness {
                        concept: Concept::BayesNash,
                        agent,
                        true_type,
                        misreport,
                        context: None,
                        truthful,
                        deviating,
                        gain,
                    });
                }
            }
        }
    }
    Verdict::Pass
}

pub fn check<M: Mechanism>(setting: &Setting, mechanism: &M, concept: Concept) -> Verdict {
    match concept {
        Concept::DominantStrategy => check_ds(setting, mechanism),
        Concept::BayesNash => check_bn(setting, mechanism),
    }
}

pub fn check_ds_det(setting: &Setting, mechanism: &DeterministicMechanism) -> Verdict {
    check_ds(setting, mechanism)
}

pub fn check_bn_det(setting: &Setting, mechanism: &DeterministicMechanism) -> Verdict {
    check_bn(setting, mechanism)
}

pub fn check_ds_rand(setting: &Setting, mechanism: &RandomizedMechanism) -> Verdict {
    check_ds(setting, mechanism)
}

pub fn check_bn_rand(setting: &Setting, mechanism: &RandomizedMechanism) -> Verdict {
    check_bn(setting, mechanism)
}
