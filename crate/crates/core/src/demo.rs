//! The three-outcome setting in which randomization strictly beats every
//! incentive-compatible deterministic mechanism (welfare 5 versus 11/2).

use crate::model::{
    Agent, DeterministicMechanism, PriorSpec, RandomizedMechanism, RawSetting, Setting,
    validate_setting,
};
use crate::rational::{int, rat};

/// Agent 1 has two equally likely types, agent 2 a single type.
pub fn randomization_gap() -> Setting {
    let utility = |row: [i64; 3]| row.iter().map(|&u| int(u)).collect::<Vec<_>>();
    validate_setting(RawSetting {
        agents: vec![Agent::new("agent1", ["t1", "t2"]), Agent::new("agent2", ["t1"])],
        outcomes: vec!["o1".into(), "o2".into(), "o3".into()],
        prior: PriorSpec::Independent(vec![vec![rat(1, 2), rat(1, 2)], vec![int(1)]]),
        utilities: vec![
            vec![utility([1, 2, 0]), utility([8, 2, 0])],
            vec![utility([0, 0, 4])],
        ],
    })
    .expect("fixed setting is valid")
}

/// o2 at agent 1's first type, o1 at its second: welfare 5.
pub fn randomization_gap_best_deterministic(setting: &Setting) -> DeterministicMechanism {
    DeterministicMechanism::new(setting, vec![1, 0]).expect("shape matches")
}

/// Half o2, half o3 at agent 1's first type, o1 at its second: welfare 11/2.
pub fn randomization_gap_mixed(setting: &Setting) -> RandomizedMechanism {
    RandomizedMechanism::new(
        setting,
        vec![
            vec![int(0), rat(1, 2), rat(1, 2)],
            vec![int(1), int(0), int(0)],
        ],
    )
    .expect("shape matches")
}

/// Two agents with two types each, independent priors (1/4, 3/4) and (1/3, 2/3).
#[cfg(test)]
pub(crate) fn two_by_two_independent() -> Setting {
    let row = |a: i64, b: i64, c: i64| vec![int(a), int(b), int(c)];
    validate_setting(RawSetting {
        agents: vec![Agent::new("a", ["x", "y"]), Agent::new("b", ["p", "q"])],
        outcomes: vec!["o1".into(), "o2".into(), "o3".into()],
        prior: PriorSpec::Independent(vec![
            vec![rat(1, 4), rat(3, 4)],
            vec![rat(1, 3), rat(2, 3)],
        ]),
        utilities: vec![
            vec![row(3, 0, 1), row(0, 2, 1)],
            vec![row(1, 1, 0), row(0, 3, 2)],
        ],
    })
    .expect("fixed setting is valid")
}
