//! KNAPSACK to deterministic Bayes-Nash design.
//!
//! Agent 1 has one type per item, drawn with probability w_j/W. Agent 2 has
//! two equally likely types. Outcome o_j packs item j, o_{m+1} is the
//! fallback and o_{m+2} the reserve outcome that agent 2's second type values
//! at W(2V+1).

use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::{AGENT_NAMES, OutcomeRole, ReductionError, ReductionKind, ReductionMeta, TypeRole, integer_lines};
use crate::model::{Agent, DeterministicMechanism, PriorSpec, RawSetting, Setting, validate_setting};
use crate::rational::{Rational, one, rat, zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackInstance {
    /// (weight, value) per item.
    items: Vec<(u64, u64)>,
    capacity: u64,
    goal: u64,
    total_weight: u64,
    total_value: u64,
}

impl KnapsackInstance {
    pub fn new(items: Vec<(u64, u64)>, capacity: u64, goal: u64) -> Result<Self, ReductionError> {
        if capacity == 0 {
            return Err(ReductionError::ZeroCapacity);
        }
        if goal == 0 {
            return Err(ReductionError::ZeroGoal);
        }
        let total_weight = items.iter().map(|&(w, _)| w).sum();
        let total_value = items.iter().map(|&(_, v)| v).sum();
        Ok(KnapsackInstance {
            items,
            capacity,
            goal,
            total_weight,
            total_value,
        })
    }

    /// Header line `C D`, then one `w v` line per item. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ReductionError> {
        let lines = integer_lines(text)?;
        let Some(((_, header), rest)) = lines.split_first() else {
            return Err(ReductionError::Parse {
                line: 1,
                message: "missing header \"C D\"".into(),
            });
        };
        let items = rest.iter().map(|(_, pair)| (pair[0], pair[1])).collect();
        Self::new(items, header[0], header[1])
    }

    pub fn items(&self) -> &[(u64, u64)] {
        &self.items
    }

    pub fn m(&self) -> usize {
        self.items.len()
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn value_goal(&self) -> u64 {
        self.goal
    }

    /// W
    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    /// V
    pub fn total_value(&self) -> u64 {
        self.total_value
    }

    /// Weight and value of a 1-based item subset.
    pub fn totals(&self, subset: &BTreeSet<usize>) -> Result<(u64, u64), ReductionError> {
        let mut totals = (0, 0);
        for &item in subset {
            let &(w, v) = item
                .checked_sub(1)
                .and_then(|j| self.items.get(j))
                .ok_or(ReductionError::ItemOutOfRange { item, m: self.m() })?;
            totals.0 += w;
            totals.1 += v;
        }
        Ok(totals)
    }

    /// G = WV + (W + D)/2
    pub fn reduction_goal(&self) -> Rational {
        let w = BigInt::from(self.total_weight);
        let v = BigInt::from(self.total_value);
        let d = BigInt::from(self.goal);
        Rational::from_integer(&w * &v) + Rational::new(w + d, BigInt::from(2))
    }

    fn check_constructible(&self) -> Result<(), ReductionError> {
        if self.items.is_empty() {
            return Err(ReductionError::NoItems);
        }
        if let Some(j) = self.items.iter().position(|&(w, _)| w == 0) {
            return Err(ReductionError::ZeroWeight(j + 1));
        }
        if self.total_value == 0 {
            return Err(ReductionError::ZeroTotalValue);
        }
        Ok(())
    }
}

fn outcome_roles(m: usize) -> Vec<OutcomeRole> {
    (1..=m)
        .map(|item| OutcomeRole::Item { item })
        .chain([OutcomeRole::Fallback, OutcomeRole::Reserve])
        .collect()
}

/// Rejects instances with no items, a zero-weight item, or V = 0.
pub fn reduce_knapsack(k: &KnapsackInstance) -> Result<(Setting, ReductionMeta), ReductionError> {
    k.check_constructible()?;
    let m = k.m();
    let w_total = BigInt::from(k.total_weight);
    let w = Rational::from_integer(w_total.clone());
    let fallback = m;
    let reserve = m + 1;

    let agent1: Vec<Vec<Rational>> = k
        .items
        .iter()
        .enumerate()
        .map(|(j, &(wj, vj))| {
            let mut row = vec![zero(); m + 2];
            row[j] = (Rational::new(BigInt::from(vj), BigInt::from(wj)) + one()) * &w;
            row[reserve] = -w.clone();
            row
        })
        .collect();
    let mut first = vec![zero(); m + 2];
    first[fallback] = w.clone();
    first[reserve] = &w - Rational::from_integer(BigInt::from(k.capacity));
    let mut second = vec![zero(); m + 2];
    second[reserve] = &w * Rational::from_integer(BigInt::from(2 * k.total_value + 1));

    let item_prior = k
        .items
        .iter()
        .map(|&(wj, _)| Rational::new(BigInt::from(wj), w_total.clone()))
        .collect();
    let roles = outcome_roles(m);
    let type_roles: Vec<Vec<TypeRole>> = vec![
        (1..=m).map(|item| TypeRole::Item { item }).collect(),
        vec![TypeRole::Signal { index: 1 }, TypeRole::Signal { index: 2 }],
    ];
    let raw = RawSetting {
        agents: vec![
            Agent::new(AGENT_NAMES[0], type_roles[0].iter().map(TypeRole::label)),
            Agent::new(AGENT_NAMES[1], type_roles[1].iter().map(TypeRole::label)),
        ],
        outcomes: roles.iter().map(OutcomeRole::label).collect(),
        prior: PriorSpec::Independent(vec![item_prior, vec![rat(1, 2), rat(1, 2)]]),
        utilities: vec![agent1, vec![first, second]],
    };
    let setting = validate_setting(raw)?;
    let meta = ReductionMeta {
        kind: ReductionKind::Knapsack,
        goal: k.reduction_goal(),
        outcome_roles: roles,
        type_roles,
    };
    Ok((setting, meta))
}

/// The mechanism that packs `subset` under agent 2's first type and picks
/// the reserve outcome under the second.
pub fn knapsack_witness_mechanism(
    k: &KnapsackInstance,
    subset: &BTreeSet<usize>,
) -> Result<DeterministicMechanism, ReductionError> {
    let (weight, value) = k.totals(subset)?;
    if weight > k.capacity {
        return Err(ReductionError::OverCapacity {
            weight,
            capacity: k.capacity,
        });
    }
    if value < k.goal {
        return Err(ReductionError::InsufficientValue { value, goal: k.goal });
    }
    let (setting, _) = reduce_knapsack(k)?;
    let m = k.m();
    let mechanism = DeterministicMechanism::from_rule(&setting, |types| match types[1] {
        0 if subset.contains(&(types[0] + 1)) => types[0],
        0 => m,
        _ => m + 1,
    })?;
    Ok(mechanism)
}

/// S = { j : the mechanism picks o_j on (item j, t1) }.
pub fn extract_knapsack(
    meta: &ReductionMeta,
    mechanism: &DeterministicMechanism,
) -> Result<BTreeSet<usize>, ReductionError> {
    meta.expect_kind(ReductionKind::Knapsack)?;
    let m = meta.type_roles.first().map_or(0, Vec::len);
    if mechanism.outcomes().len() != 2 * m || mechanism.num_outcomes() != meta.outcome_roles.len() {
        return Err(ReductionError::Shape(format!(
            "expected {} profiles over {} outcomes",
            2 * m,
            meta.outcome_roles.len()
        )));
    }
    Ok((1..=m)
        .filter(|&item| meta.outcome_roles[mechanism.outcome((item - 1) * 2)] == OutcomeRole::Item { item })
        .collect())
}
