//! Optimal randomized mechanisms by linear programming.
//!
//! Variable `p[θ][k]` is the probability of outcome `k` when type vector
//! `θ` is reported. Incentive constraints are linear in these variables,
//! as is the expected objective, so the optimal incentive-compatible
//! randomized mechanism is the optimum of an LP with one simplex equality
//! per type vector. The LP is solved exactly with [`simplex`].

pub mod simplex;

use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::incentives::Concept;
use crate::model::{ModelError, Objective, RandomizedMechanism, Setting, expected_objective_rand};
use crate::rational::{Rational, format_rational};
use crate::solver_det::Decision;
pub use simplex::{Relation, SimplexError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RandSolveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("mechanism LP could not be solved: {0}")]
    Lp(#[from] SimplexError),
    #[error("objective has no goal")]
    MissingGoal,
}

/// Provenance of a constraint row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintKind {
    /// Dominant strategy: agent at `true_type` facing opposing vector
    /// `opponents` does not gain by reporting `report`.
    Dominant {
        agent: usize,
        opponents: usize,
        true_type: usize,
        report: usize,
    },
    /// Bayes-Nash: interim version of the above.
    Interim {
        agent: usize,
        true_type: usize,
        report: usize,
    },
    /// Probabilities at `profile` sum to one.
    Simplex { profile: usize },
}

impl ConstraintKind {
    pub fn is_incentive(&self) -> bool {
        !matches!(self, ConstraintKind::Simplex { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    /// `0 >= 0`, as produced by self-pairs (report equal to the true type).
    pub fn is_trivial(&self) -> bool {
        self.rhs.is_zero() && self.coefficients.iter().all(Zero::is_zero)
    }

    pub fn holds_at(&self, point: &[Rational]) -> bool {
        let lhs: Rational = self
            .coefficients
            .iter()
            .zip(point)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, x)| c * x)
            .sum();
        match self.relation {
            Relation::Ge => lhs >= self.rhs,
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// Mechanism-design LP: maximize `objective · p` subject to `constraints`, `p >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub concept: Concept,
    pub num_profiles: usize,
    pub num_outcomes: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn num_variables(&self) -> usize {
        self.num_profiles * self.num_outcomes
    }

    pub fn variable(&self, profile: usize, outcome: usize) -> usize {
        profile * self.num_outcomes + outcome
    }

    /// Incentive rows, self-pairs included.
    pub fn incentive_constraint_count(&self) -> usize {
        self.constraints.iter().filter(|c| c.kind.is_incentive()).count()
    }

    pub fn simplex_constraint_count(&self) -> usize {
        self.constraints.len() - self.incentive_constraint_count()
    }

    /// Whether `point` satisfies every constraint and nonnegativity.
    pub fn is_feasible(&self, point: &[Rational]) -> bool {
        point.len() == self.num_variables()
            && point.iter().all(|x| !x.is_negative())
            && self.constraints.iter().all(|c| c.holds_at(point))
    }

    /// Renders the program in CPLEX LP text form, coefficients as exact
    /// `num/den`. Variable `p_<profile>_<outcome>`.
    pub fn to_lp_format(&self, setting: &Setting) -> String {
        let name = |var: usize| format!("p_{}_{}", var / self.num_outcomes, var % self.num_outcomes);
        let expression = |coefficients: &[Rational]| {
            let mut text = String::new();
            for (var, c) in coefficients.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let sign = if c.is_negative() { "-" } else { "+" };
                if text.is_empty() && sign == "+" {
                    let _ = write!(text, "{} {}", format_rational(c), name(var));
                } else {
                    let _ = write!(text, " {sign} {} {}", format_rational(&c.abs()), name(var));
                }
            }
            if text.is_empty() {
                text.push_str(&format!("0 {}", name(0)));
            }
            text
        };

        let mut out = String::new();
        let _ = writeln!(out, "\\ incentive-compatible randomized mechanism, concept {}", self.concept);
        for profile in 0..self.num_profiles {
            let _ = writeln!(
                out,
                "\\ p_{profile}_k: probability of outcome k at ({})",
                setting.describe_profile(profile)
            );
        }
        let _ = writeln!(out, "Maximize\n obj: {}", expression(&self.objective));
        out.push_str("Subject To\n");
        for (i, constraint) in self.constraints.iter().enumerate() {
            let label = match &constraint.kind {
                ConstraintKind::Dominant {
                    agent,
                    opponents,
                    true_type,
                    report,
                } => format!("ds_a{agent}_c{opponents}_t{true_type}_r{report}"),
                ConstraintKind::Interim {
                    agent,
                    true_type,
                    report,
                } => format!("bn_a{agent}_t{true_type}_r{report}"),
                ConstraintKind::Simplex { profile } => format!("sum_{profile}"),
            };
            let relation = match constraint.relation {
                Relation::Ge => ">=",
                Relation::Le => "<=",
                Relation::Eq => "=",
            };
            let _ = writeln!(
                out,
                " {label}_{i}: {} {relation} {}",
                expression(&constraint.coefficients),
                format_rational(&constraint.rhs)
            );
        }
        out.push_str("Bounds\n");
        for var in 0..self.num_variables() {
            let _ = writeln!(out, " {} >= 0", name(var));
        }
        out.push_str("End\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub assignment: Vec<Rational>,
}

/// Builds the mechanism-design LP for `concept`.
///
/// Dominant strategy emits one row per (agent, opposing vector, true type,
/// reported type); Bayes-Nash one row per (agent, true type, reported type)
/// weighted by the conditional distribution of the others' types. Self-pairs
/// are emitted as trivial rows so the row counts follow the closed forms
/// `Σ_i |Θ^i|² Π_{j≠i} |Θ^j|` and `Σ_i |Θ^i|²`.
pub fn build_lp(setting: &Setting, objective: &Objective, concept: Concept) -> Result<LinearProgram, ModelError> {
    objective.validate(setting)?;
    let space = setting.space();
    let num_outcomes = setting.num_outcomes();
    let num_profiles = setting.num_profiles();
    let num_vars = num_profiles * num_outcomes;
    let var = |profile: usize, outcome: usize| profile * num_outcomes + outcome;

    let objective_row: Vec<Rational> = objective.weighted(setting).into_iter().flatten().collect();

    let mut constraints = Vec::new();
    for agent in 0..setting.num_agents() {
        let types = space.num_types(agent);
        match concept {
            Concept::DominantStrategy => {
                for opponents in 0..space.num_opponent_profiles(agent) {
                    for true_type in 0..types {
                        for report in 0..types {
                            let mut coefficients = vec![Rational::zero(); num_vars];
                            let truthful = space.opponent_profile(agent, true_type, opponents);
                            let deviating = space.opponent_profile(agent, report, opponents);
                            for outcome in 0..num_outcomes {
                                let u = setting.utility(agent, true_type, outcome);
                                coefficients[var(truthful, outcome)] += u;
                                coefficients[var(deviating, outcome)] -= u;
                            }
                            constraints.push(Constraint {
                                kind: ConstraintKind::Dominant {
                                    agent,
                                    opponents,
                                    true_type,
                                    report,
                                },
                                coefficients,
                                relation: Relation::Ge,
                                rhs: Rational::zero(),
                            });
                        }
                    }
                }
            }
            Concept::BayesNash => {
                for true_type in 0..types {
                    let conditional = setting.conditional_other_types(agent, true_type);
                    for report in 0..types {
                        let mut coefficients = vec![Rational::zero(); num_vars];
                        for (k, mass) in conditional.iter().enumerate().filter(|(_, m)| !m.is_zero()) {
                            let truthful = space.opponent_profile(agent, true_type, k);
                            let deviating = space.opponent_profile(agent, report, k);
                            for outcome in 0..num_outcomes {
                                let weighted = mass * setting.utility(agent, true_type, outcome);
                                coefficients[var(truthful, outcome)] += &weighted;
                                coefficients[var(deviating, outcome)] -= &weighted;
                            }
                        }
                        constraints.push(Constraint {
                            kind: ConstraintKind::Interim {
                                agent,
                                true_type,
                                report,
                            },
                            coefficients,
                            relation: Relation::Ge,
                            rhs: Rational::zero(),
                        });
                    }
                }
            }
        }
    }
    for profile in 0..num_profiles {
        let mut coefficients = vec![Rational::zero(); num_vars];
        for outcome in 0..num_outcomes {
            coefficients[var(profile, outcome)] = Rational::from_integer(1.into());
        }
        constraints.push(Constraint {
            kind: ConstraintKind::Simplex { profile },
            coefficients,
            relation: Relation::Eq,
            rhs: Rational::from_integer(1.into()),
        });
    }

    Ok(LinearProgram {
        concept,
        num_profiles,
        num_outcomes,
        objective: objective_row,
        constraints,
    })
}

/// Solves the LP exactly. Trivial `0 >= 0` rows are dropped before pivoting.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution, SimplexError> {
    let rows: Vec<simplex::Row> = lp
        .constraints
        .iter()
        .filter(|c| !c.is_trivial())
        .map(|c| simplex::Row {
            coefficients: c.coefficients.clone(),
            relation: c.relation,
            rhs: c.rhs.clone(),
        })
        .collect();
    let optimum = simplex::maximize(&lp.objective, &rows)?;
    Ok(LpSolution {
        value: optimum.value,
        assignment: optimum.point,
    })
}

/// Optimal incentive-compatible randomized mechanism and its value.
pub fn solve_rand(
    setting: &Setting,
    objective: &Objective,
    concept: Concept,
) -> Result<(RandomizedMechanism, Rational), RandSolveError> {
    let lp = build_lp(setting, objective, concept)?;
    let solution = solve_lp(&lp)?;
    let distributions = solution
        .assignment
        .chunks(lp.num_outcomes)
        .map(<[Rational]>::to_vec)
        .collect();
    let mechanism = RandomizedMechanism::new(setting, distributions)?;
    debug_assert_eq!(expected_objective_rand(setting, &mechanism, objective), solution.value);
    Ok((mechanism, solution.value))
}

/// Is there an incentive-compatible randomized mechanism reaching the goal?
pub fn decide_rand(
    setting: &Setting,
    objective: &Objective,
    concept: Concept,
) -> Result<Decision<RandomizedMechanism>, RandSolveError> {
    let goal = objective.goal.as_ref().ok_or(RandSolveError::MissingGoal)?;
    let (mechanism, value) = solve_rand(setting, objective, concept)?;
    Ok(if &value >= goal {
        Decision::Yes { mechanism, value }
    } else {
        Decision::No
    })
}
