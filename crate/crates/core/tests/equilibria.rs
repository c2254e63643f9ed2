//! Equilibrium enumeration checked against brute-force oracles that evaluate
//! the circuit directly and test every unilateral deviation.

use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use qgame_core::{
    expected_payoffs, final_state, nash_bayesian, nash_two_player, outcome_probs, EntanglementParam, GameDefinition,
    PayoffTensor, PriorProbability, SteppingParams, StrategyGrid, DEFAULT_EPSILON,
};

fn coarse() -> StrategyGrid {
    StrategyGrid::build(SteppingParams::coarse())
}

fn g(x: f64) -> EntanglementParam {
    EntanglementParam::new(x).unwrap()
}

fn game(a: [f64; 4], b: [f64; 4]) -> GameDefinition {
    GameDefinition::new("test", a, b).unwrap()
}

fn stag_hunt() -> GameDefinition {
    game([4.0, 0.0, 3.0, 2.0], [4.0, 3.0, 0.0, 2.0])
}

fn deadlock() -> GameDefinition {
    game([1.0, 0.0, 3.0, 2.0], [1.0, 3.0, 0.0, 2.0])
}

/// Payoff table built by explicit circuit evaluation from parameter triples.
fn direct_table(game: &GameDefinition, grid: &StrategyGrid, gamma: f64) -> Vec<Vec<(f64, f64)>> {
    let n = grid.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let probs = outcome_probs(&final_state(g(gamma), &grid.params(i), &grid.params(j)));
                    expected_payoffs(&probs, game)
                })
                .collect()
        })
        .collect()
}

/// Every pair from which no player gains more than `eps` by switching alone.
fn deviation_oracle(table: &[Vec<(f64, f64)>], eps: f64) -> Vec<(usize, usize)> {
    let n = table.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (pa, pb) = table[i][j];
            let a_stays = (0..n).all(|k| table[k][j].0 <= pa + eps);
            let b_stays = (0..n).all(|k| table[i][k].1 <= pb + eps);
            if a_stays && b_stays {
                out.push((i, j));
            }
        }
    }
    out
}

fn pairs(eqs: &[qgame_core::NashEquilibrium]) -> Vec<(usize, usize)> {
    eqs.iter()
        .map(|e| (e.strategy_indices[0], e.strategy_indices[1]))
        .collect()
}

#[test]
fn intersection_matches_deviation_oracle() {
    let grid = coarse();
    let games = [GameDefinition::prisoners_dilemma(), stag_hunt(), deadlock()];
    for game in &games {
        for k in 0..=12 {
            let gamma = FRAC_PI_2 * k as f64 / 12.0;
            let tensor = PayoffTensor::build(game, &grid, g(gamma));
            let found = pairs(&nash_two_player(&tensor, DEFAULT_EPSILON));
            let oracle = deviation_oracle(&direct_table(game, &grid, gamma), DEFAULT_EPSILON);
            assert_eq!(found, oracle, "{} at gamma {gamma}", game.name);
        }
    }
}

#[test]
fn symmetric_games_have_mirrored_equilibria() {
    let grid = coarse();
    for game in [GameDefinition::prisoners_dilemma(), stag_hunt(), deadlock()] {
        assert!(game.is_symmetric());
        for gamma in [0.0, 0.35, 0.8, 1.2, FRAC_PI_2] {
            let found = pairs(&nash_two_player(
                &PayoffTensor::build(&game, &grid, g(gamma)),
                DEFAULT_EPSILON,
            ));
            for &(i, j) in &found {
                assert!(found.contains(&(j, i)));
            }
        }
    }
}

#[test]
fn zero_sum_entries_are_conserved() {
    let mp = game([1.0, -1.0, -1.0, 1.0], [-1.0, 1.0, 1.0, -1.0]);
    let shifted = game([3.0, 1.5, 0.0, 2.0], [2.0, 3.5, 5.0, 3.0]);
    let grid = StrategyGrid::build(SteppingParams::new(PI / 4.0, PI / 4.0, PI / 4.0).unwrap());
    for (gm, c) in [(mp, 0.0), (shifted, 5.0)] {
        assert_eq!(gm.constant_sum(), Some(c));
        for gamma in [0.0, 0.6, FRAC_PI_2] {
            let t = PayoffTensor::build(&gm, &grid, g(gamma));
            for i in 0..grid.len() {
                for j in 0..grid.len() {
                    let (a, b) = t.get(i, j);
                    assert!((a + b - c).abs() <= 1e-10);
                }
            }
        }
    }
}

#[test]
fn phase_equivalent_strategies_are_interchangeable() {
    let grid = coarse();
    let n = grid.len();
    // Pairs whose matrices differ by a unit-modulus scalar.
    let mut classes = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (mi, mj) = (grid.matrix(i), grid.matrix(j));
            let pivot = if mj.0[0][0].norm() > 0.5 { (0, 0) } else { (0, 1) };
            let phase = mi.0[pivot.0][pivot.1] / mj.0[pivot.0][pivot.1];
            if mj.scale(phase).approx_eq(mi, 1e-12) {
                classes.push((i, j));
            }
        }
    }
    assert!(!classes.is_empty());
    for game in [GameDefinition::prisoners_dilemma(), stag_hunt()] {
        for gamma in [0.0, 0.5, 1.1] {
            let t = PayoffTensor::build(&game, &grid, g(gamma));
            let eqs = pairs(&nash_two_player(&t, DEFAULT_EPSILON));
            for &(i, j) in &classes {
                for k in 0..n {
                    let (ri, rj) = (t.get(i, k), t.get(j, k));
                    assert!((ri.0 - rj.0).abs() <= 1e-12 && (ri.1 - rj.1).abs() <= 1e-12);
                    let (ci, cj) = (t.get(k, i), t.get(k, j));
                    assert!((ci.0 - cj.0).abs() <= 1e-12 && (ci.1 - cj.1).abs() <= 1e-12);
                    assert_eq!(eqs.contains(&(i, k)), eqs.contains(&(j, k)));
                    assert_eq!(eqs.contains(&(k, i)), eqs.contains(&(k, j)));
                }
            }
        }
    }
}

/// Brute-force Bayesian equilibria: every triple, every unilateral deviation.
fn bayesian_oracle(t1: &[Vec<(f64, f64)>], t2: &[Vec<(f64, f64)>], p: f64, eps: f64) -> Vec<(usize, usize, usize)> {
    let n = t1.len();
    let a_val = |a: usize, b1: usize, b2: usize| p * t1[a][b1].0 + (1.0 - p) * t2[a][b2].0;
    let mut out = Vec::new();
    for a in 0..n {
        for b1 in 0..n {
            for b2 in 0..n {
                let ok_a = (0..n).all(|k| a_val(k, b1, b2) <= a_val(a, b1, b2) + eps);
                let ok_b1 = (0..n).all(|k| t1[a][k].1 <= t1[a][b1].1 + eps);
                let ok_b2 = (0..n).all(|k| t2[a][k].1 <= t2[a][b2].1 + eps);
                if ok_a && ok_b1 && ok_b2 {
                    out.push((a, b1, b2));
                }
            }
        }
    }
    out
}

fn triples(eqs: &[qgame_core::NashEquilibrium]) -> Vec<(usize, usize, usize)> {
    eqs.iter()
        .map(|e| (e.strategy_indices[0], e.strategy_indices[1], e.strategy_indices[2]))
        .collect()
}

#[test]
fn pd_vs_pd_unentangled_half_prior_is_mutual_defection() {
    let grid = coarse();
    let pd = GameDefinition::prisoners_dilemma();
    let t = PayoffTensor::build(&pd, &grid, EntanglementParam::ZERO);
    let p = PriorProbability::new(0.5).unwrap();
    let eqs = nash_bayesian(&t, &t, p, DEFAULT_EPSILON).unwrap();
    let direct = direct_table(&pd, &grid, 0.0);
    assert_eq!(triples(&eqs), bayesian_oracle(&direct, &direct, 0.5, DEFAULT_EPSILON));
    assert!(!eqs.is_empty());
    for e in &eqs {
        for x in &e.payoffs {
            assert!((x - 1.0).abs() <= 1e-9);
        }
    }
}

#[test]
fn bayesian_search_matches_brute_force() {
    let grid = coarse();
    let pairs = [
        (GameDefinition::prisoners_dilemma(), deadlock()),
        (stag_hunt(), GameDefinition::prisoners_dilemma()),
    ];
    for (g1, g2) in &pairs {
        for gamma in [0.0, 0.4, 0.9, FRAC_PI_2] {
            let (t1, t2) = (
                PayoffTensor::build(g1, &grid, g(gamma)),
                PayoffTensor::build(g2, &grid, g(gamma)),
            );
            let (d1, d2) = (direct_table(g1, &grid, gamma), direct_table(g2, &grid, gamma));
            for p in [0.0, 0.3, 0.5, 1.0] {
                let found = nash_bayesian(&t1, &t2, PriorProbability::new(p).unwrap(), DEFAULT_EPSILON).unwrap();
                assert_eq!(triples(&found), bayesian_oracle(&d1, &d2, p, DEFAULT_EPSILON));
            }
        }
    }
}

#[test]
fn bayesian_at_p_one_projects_onto_first_game() {
    let grid = coarse();
    let (g1, g2) = (GameDefinition::prisoners_dilemma(), stag_hunt());
    for gamma in [0.0, 0.3, 0.55] {
        let (t1, t2) = (
            PayoffTensor::build(&g1, &grid, g(gamma)),
            PayoffTensor::build(&g2, &grid, g(gamma)),
        );
        let two = pairs(&nash_two_player(&t1, DEFAULT_EPSILON));
        let bayes = nash_bayesian(&t1, &t2, PriorProbability::new(1.0).unwrap(), DEFAULT_EPSILON).unwrap();
        let mut projected: Vec<(usize, usize)> = bayes
            .iter()
            .map(|e| (e.strategy_indices[0], e.strategy_indices[1]))
            .collect();
        projected.dedup();
        assert_eq!(projected, two);
        // b2 ranges over all of B2's best responses to a.
        for &(a, b1) in &two {
            let best = (0..grid.len()).map(|k| t2.payoff_b(a, k)).fold(f64::MIN, f64::max);
            let expected: Vec<usize> = (0..grid.len())
                .filter(|&k| t2.payoff_b(a, k) >= best - DEFAULT_EPSILON)
                .collect();
            let got: Vec<usize> = bayes
                .iter()
                .filter(|e| e.strategy_indices[..2] == [a, b1])
                .map(|e| e.strategy_indices[2])
                .collect();
            assert_eq!(got, expected);
        }
    }
}

fn small_payoff() -> impl Strategy<Value = [f64; 4]> {
    proptest::array::uniform4(-3i32..=5).prop_map(|a| a.map(f64::from))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bayesian_b_players_always_best_respond(
        a1 in small_payoff(), b1 in small_payoff(), a2 in small_payoff(), b2 in small_payoff(),
        gamma in 0.0..=FRAC_PI_2, p in 0.01f64..0.99,
    ) {
        let grid = coarse();
        let (g1, g2) = (game(a1, b1), game(a2, b2));
        let (t1, t2) = (PayoffTensor::build(&g1, &grid, g(gamma)), PayoffTensor::build(&g2, &grid, g(gamma)));
        let eqs = nash_bayesian(&t1, &t2, PriorProbability::new(p).unwrap(), DEFAULT_EPSILON).unwrap();
        for e in eqs {
            let (a, x1, x2) = (e.strategy_indices[0], e.strategy_indices[1], e.strategy_indices[2]);
            let best1 = (0..grid.len()).map(|k| t1.payoff_b(a, k)).fold(f64::MIN, f64::max);
            let best2 = (0..grid.len()).map(|k| t2.payoff_b(a, k)).fold(f64::MIN, f64::max);
            prop_assert!(t1.payoff_b(a, x1) >= best1 - DEFAULT_EPSILON);
            prop_assert!(t2.payoff_b(a, x2) >= best2 - DEFAULT_EPSILON);
        }
    }

    #[test]
    fn random_games_agree_with_oracle(a in small_payoff(), b in small_payoff(), gamma in 0.0..=FRAC_PI_2) {
        let grid = coarse();
        let gm = game(a, b);
        let found = pairs(&nash_two_player(&PayoffTensor::build(&gm, &grid, g(gamma)), DEFAULT_EPSILON));
        prop_assert_eq!(found, deviation_oracle(&direct_table(&gm, &grid, gamma), DEFAULT_EPSILON));
    }
}
