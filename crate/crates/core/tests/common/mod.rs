//! Test-only oracles and generators.
//!
//! The oracles deliberately avoid the library's incentive checks, profile
//! helpers and conditionals: profile indices, masses and interim
//! expectations are recomputed here from the raw tables.

#![allow(dead_code)]

use mechsynth::model::{Agent, Prior, PriorSpec, RawSetting, Setting, validate_setting};
use mechsynth::{Objective, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn z(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

// ---------------------------------------------------------------------------
// Indexing, recomputed

pub fn sizes(setting: &Setting) -> Vec<usize> {
    setting.agents().iter().map(|a| a.types.len()).collect()
}

/// Row-major: the last agent varies fastest.
pub fn index_of(sizes: &[usize], types: &[usize]) -> usize {
    types.iter().zip(sizes).fold(0, |acc, (&t, &n)| acc * n + t)
}

pub fn all_profiles(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &n in sizes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |t| {
                    let mut p = prefix.clone();
                    p.push(t);
                    p
                })
            })
            .collect();
    }
    out
}

/// Probability of each type vector, indexed by [`index_of`].
pub fn masses(setting: &Setting) -> Vec<Rational> {
    let sizes = sizes(setting);
    match setting.prior() {
        Prior::Joint(m) => m.clone(),
        Prior::Independent(per_agent) => all_profiles(&sizes)
            .iter()
            .map(|types| {
                types
                    .iter()
                    .enumerate()
                    .map(|(a, &t)| per_agent[a][t].clone())
                    .fold(Rational::one(), |acc, m| acc * m)
            })
            .collect(),
    }
}

/// Interim utility of `agent` with true type `truth` when it reports
/// `report` and everyone else is truthful. Independent priors weight the
/// others by their own marginals; joint priors condition on `truth`, falling
/// back to uniform when `truth` has zero mass.
pub fn interim<F>(setting: &Setting, masses: &[Rational], agent: usize, truth: usize, report: usize, utility_at: F) -> Rational
where
    F: Fn(usize, usize) -> Rational,
{
    let sizes = sizes(setting);
    let profiles: Vec<Vec<usize>> = all_profiles(&sizes).into_iter().filter(|p| p[agent] == truth).collect();
    let marginal: Rational = profiles.iter().map(|p| masses[index_of(&sizes, p)].clone()).sum();
    let mut total = Rational::zero();
    for p in &profiles {
        let weight = match setting.prior() {
            Prior::Independent(per_agent) => (0..sizes.len())
                .filter(|&b| b != agent)
                .fold(Rational::one(), |acc, b| acc * &per_agent[b][p[b]]),
            Prior::Joint(_) if marginal.is_zero() => q(1, profiles.len() as i64),
            Prior::Joint(_) => &masses[index_of(&sizes, p)] / &marginal,
        };
        let mut reported = p.clone();
        reported[agent] = report;
        total += weight * utility_at(index_of(&sizes, &reported), truth);
    }
    total
}

/// `utility_at(profile, agent, true_type)` for a deterministic map.
pub fn det_utility<'a>(setting: &'a Setting, map: &[usize]) -> impl Fn(usize, usize, usize) -> Rational + 'a {
    let map = map.to_vec();
    move |profile, agent, ty| setting.utility(agent, ty, map[profile]).clone()
}

pub fn rand_utility<'a>(setting: &'a Setting, dists: &'a [Vec<Rational>]) -> impl Fn(usize, usize, usize) -> Rational + 'a {
    move |profile, agent, ty| {
        dists[profile]
            .iter()
            .enumerate()
            .map(|(o, p)| p * setting.utility(agent, ty, o))
            .sum()
    }
}

/// Truthful reporting is a best response for every agent, true type,
/// report and every vector of others' reports.
pub fn oracle_ds<F>(setting: &Setting, utility_at: F) -> bool
where
    F: Fn(usize, usize, usize) -> Rational,
{
    let sizes = sizes(setting);
    for types in all_profiles(&sizes) {
        let truthful = index_of(&sizes, &types);
        for agent in 0..sizes.len() {
            for report in 0..sizes[agent] {
                let mut deviated = types.clone();
                deviated[agent] = report;
                let lie = index_of(&sizes, &deviated);
                if utility_at(lie, agent, types[agent]) > utility_at(truthful, agent, types[agent]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Truthful reporting is a best response in expectation over the others' types.
#[allow(clippy::needless_range_loop)]
pub fn oracle_bn<F>(setting: &Setting, utility_at: F) -> bool
where
    F: Fn(usize, usize, usize) -> Rational,
{
    let masses = masses(setting);
    let sizes = sizes(setting);
    for agent in 0..sizes.len() {
        for truth in 0..sizes[agent] {
            let honest = interim(setting, &masses, agent, truth, truth, |p, t| utility_at(p, agent, t));
            for report in 0..sizes[agent] {
                let lie = interim(setting, &masses, agent, truth, report, |p, t| utility_at(p, agent, t));
                if lie > honest {
                    return false;
                }
            }
        }
    }
    true
}

pub fn oracle_ic(setting: &Setting, map: &[usize], ds: bool) -> bool {
    if ds {
        oracle_ds(setting, det_utility(setting, map))
    } else {
        oracle_bn(setting, det_utility(setting, map))
    }
}

pub fn objective_value(setting: &Setting, masses: &[Rational], objective: &Objective, map: &[usize]) -> Rational {
    map.iter()
        .enumerate()
        .map(|(p, &o)| &masses[p] * objective.value(setting, p, o))
        .sum()
}

/// Best expected objective over all IC deterministic maps, by enumeration.
pub fn exhaustive_det(setting: &Setting, objective: &Objective, ds: bool) -> (Rational, Vec<usize>) {
    let masses = masses(setting);
    let cells = masses.len();
    let outcomes = setting.num_outcomes();
    let mut map = vec![0usize; cells];
    let mut best: Option<(Rational, Vec<usize>)> = None;
    loop {
        if oracle_ic(setting, &map, ds) {
            let value = objective_value(setting, &masses, objective, &map);
            if best.as_ref().is_none_or(|(b, _)| value > *b) {
                best = Some((value, map.clone()));
            }
        }
        // Odometer, last cell fastest.
        let mut i = cells;
        loop {
            if i == 0 {
                return best.expect("constant maps are always IC");
            }
            i -= 1;
            map[i] += 1;
            if map[i] < outcomes {
                break;
            }
            map[i] = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Generators

pub struct Shape {
    pub types: Vec<usize>,
    pub outcomes: usize,
    pub joint: bool,
}

fn random_distribution(rng: &mut ChaCha8Rng, n: usize, allow_zero: bool) -> Vec<Rational> {
    loop {
        let weights: Vec<i64> = (0..n)
            .map(|_| {
                if allow_zero && rng.gen_ratio(1, 5) {
                    0
                } else {
                    rng.gen_range(1..=6)
                }
            })
            .collect();
        let total: i64 = weights.iter().sum();
        if total > 0 {
            return weights.iter().map(|&w| q(w, total)).collect();
        }
    }
}

pub fn random_setting(rng: &mut ChaCha8Rng, shape: &Shape) -> Setting {
    let agents: Vec<Agent> = shape
        .types
        .iter()
        .enumerate()
        .map(|(a, &n)| Agent::new(format!("a{a}"), (0..n).map(|t| format!("t{t}"))))
        .collect();
    let outcomes = (0..shape.outcomes).map(|o| format!("o{o}")).collect();
    let utilities = shape
        .types
        .iter()
        .map(|&n| {
            (0..n)
                .map(|_| (0..shape.outcomes).map(|_| z(rng.gen_range(-3..=6))).collect())
                .collect()
        })
        .collect();
    let prior = if shape.joint {
        let profiles = all_profiles(&shape.types);
        let masses = random_distribution(rng, profiles.len(), true);
        PriorSpec::Joint(profiles.into_iter().zip(masses).collect())
    } else {
        PriorSpec::Independent(shape.types.iter().map(|&n| random_distribution(rng, n, true)).collect())
    };
    validate_setting(RawSetting {
        agents,
        outcomes,
        prior,
        utilities,
    })
    .expect("generated settings are valid")
}

/// The criterion-2 corpus: small two-agent settings, a share with zero
/// masses and joint priors, plus 3x3 type spaces.
pub fn corpus(seed: u64, small: usize, square: usize) -> Vec<Setting> {
    let mut rng = rng(seed);
    let mut settings = Vec::with_capacity(small + square);
    while settings.len() < small {
        let types = vec![rng.gen_range(1..=3), rng.gen_range(1..=3)];
        if types[0] * types[1] > 6 {
            continue;
        }
        let shape = Shape {
            types,
            outcomes: rng.gen_range(2..=4),
            joint: rng.gen_ratio(1, 3),
        };
        settings.push(random_setting(&mut rng, &shape));
    }
    for _ in 0..square {
        let shape = Shape {
            types: vec![3, 3],
            outcomes: rng.gen_range(2..=3),
            joint: rng.gen_ratio(1, 3),
        };
        settings.push(random_setting(&mut rng, &shape));
    }
    settings
}

pub fn random_map(rng: &mut ChaCha8Rng, setting: &Setting) -> Vec<usize> {
    (0..setting.num_profiles())
        .map(|_| rng.gen_range(0..setting.num_outcomes()))
        .collect()
}

pub fn random_distributions(rng: &mut ChaCha8Rng, setting: &Setting) -> Vec<Vec<Rational>> {
    (0..setting.num_profiles())
        .map(|_| random_distribution(rng, setting.num_outcomes(), true))
        .collect()
}

/// Copy of `setting` with agent `agent`'s utilities multiplied by `factor`.
pub fn scaled(setting: &Setting, agent: usize, factor: &Rational) -> Setting {
    let mut raw = setting.to_raw();
    for row in &mut raw.utilities[agent] {
        for u in row.iter_mut() {
            *u = &*u * factor;
        }
    }
    validate_setting(raw).unwrap()
}
