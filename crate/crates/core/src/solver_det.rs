//! Exact synthesis of optimal incentive-compatible deterministic mechanisms.
//!
//! Depth-first branch and bound over the outcome map. Cells are assigned in
//! row-major type-vector order with outcomes tried in index order, so the
//! first optimal map reached is the lexicographically smallest one. Two
//! prunings apply at every node:
//!
//! * incentive constraints between assigned cells (for dominant strategies
//!   a pairwise comparison along each agent's axis; for Bayes-Nash an
//!   optimistic bound on each interim constraint touching the new cell,
//!   which becomes the exact check once both slices are assigned);
//! * an admissible value bound: assigned value plus every unassigned
//!   cell's best weighted objective.
//!
//! The incumbent starts at the best constant mechanism, which is always
//! incentive compatible. All arithmetic is exact: the prior-weighted
//! objective is scaled to integers by a common denominator.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::incentives::Concept;
use crate::model::{DeterministicMechanism, ModelError, Objective, Setting, expected_objective_det};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetSolveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("node budget exhausted after {explored} nodes")]
    BudgetExhausted { explored: u64 },
    #[error("objective has no goal")]
    MissingGoal,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DetSolveOptions {
    /// Abort with [`DetSolveError::BudgetExhausted`] after this many nodes.
    pub node_budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DetStatus {
    Optimal {
        mechanism: DeterministicMechanism,
        value: Rational,
    },
    /// No incentive-compatible mechanism reaches the requested goal.
    InfeasibleForGoal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetSolveResult {
    pub status: DetStatus,
    pub explored_nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision<M> {
    Yes { mechanism: M, value: Rational },
    No,
}

impl<M> Decision<M> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes { .. })
    }
}

/// Maximizes the expected objective over incentive-compatible deterministic mechanisms.
pub fn solve_det(
    setting: &Setting,
    objective: &Objective,
    concept: Concept,
) -> Result<DetSolveResult, DetSolveError> {
    solve_det_with(setting, objective, concept, &DetSolveOptions::default())
}

pub fn solve_det_with(
    setting: &Setting,
    objective: &Objective,
    concept: Concept,
    options: &DetSolveOptions,
) -> Result<DetSolveResult, DetSolveError> {
    search(setting, objective, concept, options, None)
}

/// Is there an incentive-compatible deterministic mechanism with expected
/// objective at least the objective's goal? On yes the optimal mechanism is
/// returned as the witness.
pub fn decide_det(
    setting: &Setting,
    objective: &Objective,
    concept: Concept,
) -> Result<Decision<DeterministicMechanism>, DetSolveError> {
    decide_det_with(setting, objective, concept, &DetSolveOptions::default()).map(|(d, _)| d)
}

/// Like [`decide_det`], also reporting the number of explored nodes.
pub fn decide_det_with(
    setting: &Setting,
    objective: &Objective,
    concept: Concept,
    options: &DetSolveOptions,
) -> Result<(Decision<DeterministicMechanism>, u64), DetSolveError> {
    let goal = objective.goal.as_ref().ok_or(DetSolveError::MissingGoal)?;
    let result = search(setting, objective, concept, options, Some(goal))?;
    let decision = match result.status {
        DetStatus::Optimal { mechanism, value } if &value >= goal => Decision::Yes { mechanism, value },
        _ => Decision::No,
    };
    Ok((decision, result.explored_nodes))
}

fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn scale(value: &Rational, denominator: &BigInt) -> BigInt {
    let scaled = value * Rational::from_integer(denominator.clone());
    debug_assert!(scaled.is_integer());
    scaled.to_integer()
}

enum IcTables {
    /// `rank[agent][type][outcome]`: order-equivalent integer utilities.
    Dominant(Vec<Vec<Vec<u32>>>),
    /// `weight[agent][true type][opponent][outcome]`: conditional mass times
    /// utility, scaled to integers per (agent, true type).
    Bayes(Vec<Vec<Vec<Vec<BigInt>>>>),
}

impl IcTables {
    fn build(setting: &Setting, concept: Concept) -> Self {
        match concept {
            Concept::DominantStrategy => IcTables::Dominant(
                setting
                    .utilities()
                    .iter()
                    .map(|table| {
                        let mut distinct: Vec<&Rational> = table.iter().flatten().collect();
                        distinct.sort();
                        distinct.dedup();
                        table
                            .iter()
                            .map(|row| {
                                row.iter()
                                    .map(|u| distinct.binary_search(&u).expect("present") as u32)
                                    .collect()
                            })
                            .collect()
                    })
                    .collect(),
            ),
            Concept::BayesNash => {
                let space = setting.space();
                IcTables::Bayes(
                    (0..setting.num_agents())
                        .map(|agent| {
                            (0..space.num_types(agent))
                                .map(|ty| {
                                    let cond = setting.conditional_other_types(agent, ty);
                                    let utilities = &setting.utilities()[agent][ty];
                                    let products: Vec<Vec<Rational>> = cond
                                        .iter()
                                        .map(|c| utilities.iter().map(|u| c * u).collect())
                                        .collect();
                                    let den = common_denominator(products.iter().flatten());
                                    products
                                        .iter()
                                        .map(|row| row.iter().map(|v| scale(v, &den)).collect())
                                        .collect()
                                })
                                .collect()
                        })
                        .collect(),
                )
            }
        }
    }
}

const UNASSIGNED: usize = usize::MAX;

struct Search<'a> {
    setting: &'a Setting,
    num_outcomes: usize,
    weights: Vec<Vec<BigInt>>,
    suffix_max: Vec<BigInt>,
    tables: IcTables,
    assignment: Vec<usize>,
    value: BigInt,
    best_value: BigInt,
    best_map: Vec<usize>,
    floor: Option<BigInt>,
    nodes: u64,
    budget: Option<u64>,
}

struct Exhausted;

impl Search<'_> {
    fn run(&mut self, depth: usize) -> Result<(), Exhausted> {
        let profiles = self.assignment.len();
        if depth == profiles {
            let better = match self.value.cmp(&self.best_value) {
                Ordering::Greater => true,
                Ordering::Equal => self.assignment < self.best_map,
                Ordering::Less => false,
            };
            if better {
                self.best_value = self.value.clone();
                self.best_map.clone_from(&self.assignment);
            }
            return Ok(());
        }
        for outcome in 0..self.num_outcomes {
            self.nodes += 1;
            if self.budget.is_some_and(|b| self.nodes > b) {
                return Err(Exhausted);
            }
            let bound = &self.value + &self.weights[depth][outcome] + &self.suffix_max[depth + 1];
            if self.floor.as_ref().is_some_and(|floor| &bound < floor) {
                continue;
            }
            match bound.cmp(&self.best_value) {
                Ordering::Less => continue,
                Ordering::Equal if self.prefix_after_best(depth, outcome) => continue,
                _ => {}
            }
            self.assignment[depth] = outcome;
            if self.consistent(depth, outcome) {
                self.value += &self.weights[depth][outcome];
                let result = self.run(depth + 1);
                self.value -= &self.weights[depth][outcome];
                if result.is_err() {
                    self.assignment[depth] = UNASSIGNED;
                    return result;
                }
            }
            self.assignment[depth] = UNASSIGNED;
        }
        Ok(())
    }

    /// Every completion of `assignment[..depth] + outcome` sorts after the incumbent.
    fn prefix_after_best(&self, depth: usize, outcome: usize) -> bool {
        let prefix = self.assignment[..depth].iter().copied().chain(std::iter::once(outcome));
        prefix.cmp(self.best_map[..=depth].iter().copied()) == Ordering::Greater
    }

    /// Incentive constraints among the cells assigned so far, given that
    /// `profile` (the latest cell) now holds `outcome`.
    fn consistent(&self, profile: usize, outcome: usize) -> bool {
        let space = self.setting.space();
        match &self.tables {
            IcTables::Dominant(rank) => (0..space.num_agents()).all(|agent| {
                let own = space.type_of(profile, agent);
                (0..space.num_types(agent)).filter(|&t| t != own).all(|other| {
                    let neighbour = space.with_type(profile, agent, other);
                    if neighbour > profile {
                        return true;
                    }
                    let theirs = self.assignment[neighbour];
                    rank[agent][own][outcome] >= rank[agent][own][theirs]
                        && rank[agent][other][theirs] >= rank[agent][other][outcome]
                })
            }),
            IcTables::Bayes(weight) => (0..space.num_agents()).all(|agent| {
                let own = space.type_of(profile, agent);
                (0..space.num_types(agent)).filter(|&t| t != own).all(|other| {
                    self.interim_may_hold(&weight[agent][own], agent, own, other)
                        && self.interim_may_hold(&weight[agent][other], agent, other, own)
                })
            }),
        }
    }

    /// Optimistic test of the interim constraint "type `truth` does not gain
    /// by reporting `report`": unassigned truthful cells take their best
    /// outcome, unassigned deviating cells their worst.
    fn interim_may_hold(&self, weight: &[Vec<BigInt>], agent: usize, truth: usize, report: usize) -> bool {
        let space = self.setting.space();
        let mut slack = BigInt::zero();
        for (k, row) in weight.iter().enumerate() {
            let truthful = self.assignment[space.opponent_profile(agent, truth, k)];
            let deviating = self.assignment[space.opponent_profile(agent, report, k)];
            if truthful != UNASSIGNED && truthful == deviating {
                continue;
            }
            match truthful {
                UNASSIGNED => slack += row.iter().max().expect("outcomes nonempty"),
                o => slack += &row[o],
            }
            match deviating {
                UNASSIGNED => slack -= row.iter().min().expect("outcomes nonempty"),
                o => slack -= &row[o],
            }
        }
        !slack.is_negative()
    }
}

fn search(
    setting: &Setting,
    objective: &Objective,
    concept: Concept,
    options: &DetSolveOptions,
    goal: Option<&Rational>,
) -> Result<DetSolveResult, DetSolveError> {
    objective.validate(setting)?;
    let weighted = objective.weighted(setting);
    let den = common_denominator(weighted.iter().flatten());
    let weights: Vec<Vec<BigInt>> = weighted
        .iter()
        .map(|row| row.iter().map(|w| scale(w, &den)).collect())
        .collect();

    let profiles = setting.num_profiles();
    let num_outcomes = setting.num_outcomes();
    let mut suffix_max = vec![BigInt::zero(); profiles + 1];
    for p in (0..profiles).rev() {
        suffix_max[p] = &suffix_max[p + 1] + weights[p].iter().max().expect("outcomes nonempty");
    }

    let mut best_constant = 0;
    let mut best_value: Option<BigInt> = None;
    for outcome in 0..num_outcomes {
        let total: BigInt = weights.iter().map(|row| &row[outcome]).sum();
        if best_value.as_ref().is_none_or(|b| &total > b) {
            best_value = Some(total);
            best_constant = outcome;
        }
    }
    let best_value = best_value.expect("outcomes nonempty");

    // bound >= goal  <=>  bound >= ceil(goal * den) for integral bounds
    let floor = goal.map(|g| (g * Rational::from_integer(den.clone())).ceil().to_integer());

    let mut state = Search {
        setting,
        num_outcomes,
        weights,
        suffix_max,
        tables: IcTables::build(setting, concept),
        assignment: vec![UNASSIGNED; profiles],
        value: BigInt::zero(),
        best_value,
        best_map: vec![best_constant; profiles],
        floor,
        nodes: 0,
        budget: options.node_budget,
    };
    if state.run(0).is_err() {
        return Err(DetSolveError::BudgetExhausted {
            explored: state.nodes,
        });
    }

    let reaches_floor = state.floor.as_ref().is_none_or(|f| &state.best_value >= f);
    let status = if reaches_floor {
        let mechanism = DeterministicMechanism::new(setting, state.best_map)?;
        let value = expected_objective_det(setting, &mechanism, objective);
        DetStatus::Optimal { mechanism, value }
    } else {
        DetStatus::InfeasibleForGoal
    };
    Ok(DetSolveResult {
        status,
        explored_nodes: state.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demo::{randomization_gap, two_by_two_independent};
    use crate::incentives::check;
    use crate::model::{Agent, PriorSpec, RawSetting, validate_setting};
    use crate::rational::{int, rat};

    fn optimal(result: DetSolveResult) -> (DeterministicMechanism, Rational) {
        match result.status {
            DetStatus::Optimal { mechanism, value } => (mechanism, value),
            DetStatus::InfeasibleForGoal => panic!("expected an optimum"),
        }
    }

    #[test]
    fn randomization_gap_deterministic_optimum_is_five() {
        let setting = randomization_gap();
        for concept in [Concept::DominantStrategy, Concept::BayesNash] {
            let (m, value) = optimal(solve_det(&setting, &Objective::social_welfare(), concept).unwrap());
            assert_eq!(value, int(5));
            assert_eq!(m.outcomes(), &[1, 0]);
        }
    }

    #[test]
    fn decide_compares_goal_exactly() {
        let setting = randomization_gap();
        let sw = Objective::social_welfare();
        let yes = decide_det(&setting, &sw.clone().with_goal(int(5)), Concept::DominantStrategy).unwrap();
        assert!(matches!(&yes, Decision::Yes { value, .. } if value == &int(5)));
        let no = decide_det(&setting, &sw.clone().with_goal(rat(11, 2)), Concept::DominantStrategy).unwrap();
        assert_eq!(no, Decision::No);
        assert_eq!(
            decide_det(&setting, &sw, Concept::DominantStrategy),
            Err(DetSolveError::MissingGoal)
        );
    }

    #[test]
    fn single_type_agents_get_pointwise_argmax() {
        let setting = validate_setting(RawSetting {
            agents: vec![Agent::new("a", ["x"]), Agent::new("b", ["y"])],
            outcomes: vec!["o1".into(), "o2".into(), "o3".into()],
            prior: PriorSpec::Independent(vec![vec![int(1)], vec![int(1)]]),
            utilities: vec![
                vec![vec![int(1), int(5), int(0)]],
                vec![vec![int(2), int(-1), int(7)]],
            ],
        })
        .unwrap();
        let (m, value) = optimal(solve_det(&setting, &Objective::social_welfare(), Concept::BayesNash).unwrap());
        assert_eq!(m.outcomes(), &[2]);
        assert_eq!(value, int(7));
    }

    #[test]
    fn ties_resolve_to_lexicographically_smallest_map() {
        // All outcomes worth the same: the constant-o1 map is the smallest.
        let setting = two_by_two_independent();
        let flat = Objective::table(vec![vec![int(1); 3]; 4]);
        let (m, value) = optimal(solve_det(&setting, &flat, Concept::DominantStrategy).unwrap());
        assert_eq!(m.outcomes(), &[0, 0, 0, 0]);
        assert_eq!(value, int(1));

        // o2 and o3 tie as the best constant, a lexicographically smaller
        // non-constant optimum must win over the constant incumbent.
        let table = vec![
            vec![int(1), int(1), int(1)],
            vec![int(0), int(1), int(1)],
            vec![int(0), int(1), int(1)],
            vec![int(0), int(1), int(1)],
        ];
        let (m, _) = optimal(solve_det(&setting, &Objective::table(table), Concept::BayesNash).unwrap());
        // [o1, o2, o2, o2] is Bayes-Nash compatible and ties the constant o2 map.
        assert_eq!(m.outcomes(), &[0, 1, 1, 1]);
        assert!(check(&setting, &m, Concept::BayesNash).is_pass());
    }

    #[test]
    fn returned_mechanisms_pass_their_concept() {
        let setting = two_by_two_independent();
        for concept in [Concept::DominantStrategy, Concept::BayesNash] {
            let (m, value) = optimal(solve_det(&setting, &Objective::social_welfare(), concept).unwrap());
            assert!(check(&setting, &m, concept).is_pass());
            assert_eq!(value, expected_objective_det(&setting, &m, &Objective::social_welfare()));
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let setting = two_by_two_independent();
        let options = DetSolveOptions { node_budget: Some(2) };
        assert!(matches!(
            solve_det_with(&setting, &Objective::social_welfare(), Concept::DominantStrategy, &options),
            Err(DetSolveError::BudgetExhausted { explored: 3 })
        ));
    }

    #[test]
    fn goal_above_optimum_is_infeasible() {
        let setting = two_by_two_independent();
        let objective = Objective::social_welfare().with_goal(int(100));
        let (decision, _) =
            decide_det_with(&setting, &objective, Concept::BayesNash, &DetSolveOptions::default()).unwrap();
        assert_eq!(decision, Decision::No);
    }
}
