//! Acceptance checks. Each criterion prints one PASS/FAIL line; the test fails
//! if any criterion does.
//!
//! Run with `cargo test -p qgame-cli --test acceptance -- --nocapture`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use qgame_cli::GameCatalogue;
use qgame_core::sweep::{gamma_points, p_points};
use qgame_core::{
    bayes_sweep, critical_gamma, entangler, expected_payoffs, final_state, gamma_sweep, nash_two_player, outcome_probs,
    strategy_matrix, Circuit, EntanglementParam, GameDefinition, PayoffTensor, StateVector4, SteppingParams,
    StrategyGrid, StrategyParams, SweepRecord, DEFAULT_EPSILON,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Where prisoner's-dilemma equilibria on the eight-strategy grid vanish,
/// found by bisection with the unilateral-deviation oracle below.
const PD_CRITICAL_GAMMA: f64 = 0.615_479_709_023_941;
const SEED: u64 = 0x5EED_2024;

type Check = Result<String, String>;

struct Outcome {
    passed: bool,
}

fn run(id: u32, name: &str, budget: Option<Duration>, check: impl FnOnce() -> Check) -> Outcome {
    let start = Instant::now();
    let result = check();
    let elapsed = start.elapsed();
    let over = budget.is_some_and(|b| elapsed > b);
    let passed = result.is_ok() && !over;
    let budget_note = budget
        .map(|b| format!(", budget {:.0} s", b.as_secs_f64()))
        .unwrap_or_default();
    let detail = match (&result, over) {
        (Ok(d), false) => d.clone(),
        (Ok(d), true) => format!("{d}; over time budget"),
        (Err(e), _) => e.clone(),
    };
    println!(
        "{} [{id:>2}] {name} ({:.3} s{budget_note}): {detail}",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    Outcome { passed }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gamma(x: f64) -> EntanglementParam {
    EntanglementParam::new(x).unwrap()
}

fn coarse() -> StrategyGrid {
    StrategyGrid::build(SteppingParams::coarse())
}

/// Payoff table from direct circuit evaluation of each parameter pair.
fn direct_table(game: &GameDefinition, grid: &StrategyGrid, g: f64) -> Vec<Vec<(f64, f64)>> {
    let n = grid.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    expected_payoffs(
                        &outcome_probs(&final_state(gamma(g), &grid.params(i), &grid.params(j))),
                        game,
                    )
                })
                .collect()
        })
        .collect()
}

/// Every pair from which neither player gains more than `eps` by switching alone.
fn deviation_oracle(table: &[Vec<(f64, f64)>], eps: f64) -> Vec<(usize, usize)> {
    let n = table.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (pa, pb) = table[i][j];
            if (0..n).all(|k| table[k][j].0 <= pa + eps) && (0..n).all(|k| table[i][k].1 <= pb + eps) {
                out.push((i, j));
            }
        }
    }
    out
}

fn grid_counts() -> Check {
    let mut counts = Vec::new();
    for ((t, p, a), want) in [
        ((PI, FRAC_PI_2, FRAC_PI_2), 8),
        ((PI / 8.0, PI / 8.0, PI / 8.0), 1824),
        ((PI / 32.0, PI / 8.0, PI / 8.0), 7968),
    ] {
        let n = StrategyGrid::build(SteppingParams::new(t, p, a).unwrap()).len();
        ensure(n == want, || format!("steps ({t}, {p}, {a}) gave {n}, expected {want}"))?;
        counts.push(n.to_string());
    }
    Ok(counts.join(" / "))
}

fn classical_embedding(pd: &GameDefinition) -> Check {
    let moves = [StrategyParams::IDENTITY, StrategyParams::CLASSICAL_DEFECT];
    let table = [[(3.0, 3.0), (0.0, 5.0)], [(5.0, 0.0), (1.0, 1.0)]];
    let mut worst: f64 = 0.0;
    for g in gamma_points(65) {
        let circuit = Circuit::new(gamma(g));
        for (i, a) in moves.iter().enumerate() {
            for (j, b) in moves.iter().enumerate() {
                let naive = expected_payoffs(&outcome_probs(&final_state(gamma(g), a, b)), pd);
                let fast = circuit.payoffs(&strategy_matrix(a), &strategy_matrix(b), pd);
                for (x, y) in [naive, fast] {
                    worst = worst.max((x - table[i][j].0).abs()).max((y - table[i][j].1).abs());
                }
            }
        }
    }
    ensure(worst <= 1e-9, || format!("max deviation {worst:e} > 1e-9"))?;
    Ok(format!("4 move pairs x 65 γ, max deviation {worst:.1e}"))
}

fn bell_state() -> Check {
    let probs = entangler(gamma(FRAC_PI_2)).apply(&StateVector4::GROUND).probabilities();
    let want = [0.5, 0.0, 0.0, 0.5];
    let err = probs.iter().zip(want).map(|(p, w)| (p - w).abs()).fold(0.0, f64::max);
    ensure(err <= 1e-12, || format!("probabilities {probs:?}"))?;
    Ok(format!("probabilities {probs:?}, max error {err:.1e}"))
}

fn pd_phase_structure(pd: &GameDefinition) -> Check {
    let grid = coarse();
    let points = gamma_points(65);
    let sweep = gamma_sweep(pd, &grid, &points, DEFAULT_EPSILON).map_err(|e| e.to_string())?;

    let at_zero: Vec<&SweepRecord> = sweep.records_at(0.0).collect();
    ensure(!at_zero.is_empty(), || "no equilibria at γ = 0".into())?;
    ensure(
        at_zero
            .iter()
            .all(|r| (r.payoff_a() - 1.0).abs() <= 1e-9 && (r.equilibrium.payoff_b() - 1.0).abs() <= 1e-9),
        || "an equilibrium at γ = 0 does not pay (1, 1)".into(),
    )?;

    let mut previous = f64::NEG_INFINITY;
    for &g in &points {
        let best = sweep
            .records_at(g)
            .map(|r| r.payoff_a().max(r.equilibrium.payoff_b()))
            .fold(f64::NEG_INFINITY, f64::max);
        if best == f64::NEG_INFINITY {
            break;
        }
        ensure(best >= previous - 1e-12, || {
            format!("max payoff falls to {best} at γ = {g}")
        })?;
        previous = best;
    }
    ensure(sweep.records_at(FRAC_PI_2).next().is_none(), || {
        "equilibria present at γ = π/2".into()
    })?;

    let bracket = critical_gamma(&sweep, |_| true).ok_or("no critical bracket")?;
    let (lo, hi) = (bracket.last_gamma_with, bracket.first_gamma_without);
    ensure(0.0 < lo && hi < FRAC_PI_2, || {
        format!("bracket ({lo}, {hi}) not strictly inside (0, π/2)")
    })?;
    ensure(
        (lo - 25.0 * PI / 128.0).abs() < 1e-12 && (hi - 26.0 * PI / 128.0).abs() < 1e-12,
        || format!("bracket ({lo}, {hi}) differs from the recorded (25π/128, 26π/128)"),
    )?;
    ensure(lo < PD_CRITICAL_GAMMA && PD_CRITICAL_GAMMA < hi, || {
        "bracket misses the bisected value".into()
    })?;
    let has = |g: f64| !deviation_oracle(&direct_table(pd, &grid, g), DEFAULT_EPSILON).is_empty();
    ensure(has(PD_CRITICAL_GAMMA - 1e-7) && !has(PD_CRITICAL_GAMMA + 1e-7), || {
        "deviation oracle disagrees with the recorded critical γ".into()
    })?;
    Ok(format!(
        "(1,1) at γ=0, monotone, empty at π/2, bracket ({lo:.6}, {hi:.6}) around γ* = {PD_CRITICAL_GAMMA}"
    ))
}

fn matching_pennies_empty(mp: &GameDefinition) -> Check {
    let sweep = gamma_sweep(mp, &coarse(), &gamma_points(65), DEFAULT_EPSILON).map_err(|e| e.to_string())?;
    ensure(sweep.records.is_empty(), || {
        format!("{} equilibria found", sweep.records.len())
    })?;
    Ok("0 equilibria at all 65 γ".into())
}

/// `(γ, a, b_which, payoff_a, payoff_b_which)` of records at prior `p`, as exact bit patterns.
fn project(records: &[SweepRecord], p: f64, which: usize) -> Vec<(u64, usize, usize, u64, u64)> {
    let mut out: Vec<_> = records
        .iter()
        .filter(|r| r.p == Some(p))
        .map(|r| {
            let idx = &r.equilibrium.strategy_indices;
            (
                r.gamma.to_bits(),
                idx[0],
                idx[which],
                r.payoff_a().to_bits(),
                r.equilibrium.payoffs[which].to_bits(),
            )
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn bayesian_boundaries(pd: &GameDefinition, deadlock: &GameDefinition) -> Check {
    let grid = coarse();
    let gammas = gamma_points(65);
    let ps = p_points(21);
    let mut summary = Vec::new();
    for (g1, g2) in [(pd, pd), (pd, deadlock)] {
        let bayes = bayes_sweep(g1, g2, &grid, &gammas, &ps, DEFAULT_EPSILON).map_err(|e| e.to_string())?;
        for (p, game, which) in [(1.0, g1, 1), (0.0, g2, 2)] {
            let two = gamma_sweep(game, &grid, &gammas, DEFAULT_EPSILON).map_err(|e| e.to_string())?;
            let expected: Vec<_> = two
                .records
                .iter()
                .map(|r| {
                    let idx = &r.equilibrium.strategy_indices;
                    (
                        r.gamma.to_bits(),
                        idx[0],
                        idx[1],
                        r.payoff_a().to_bits(),
                        r.equilibrium.payoff_b().to_bits(),
                    )
                })
                .collect();
            let got = project(&bayes.records, p, which);
            ensure(got == expected, || {
                format!(
                    "{} vs {} at p = {p}: {} projected, {} expected",
                    g1.name,
                    g2.name,
                    got.len(),
                    expected.len()
                )
            })?;
        }
        summary.push(format!("{}/{}: {} records", g1.name, g2.name, bayes.records.len()));
    }
    Ok(format!("p=0 and p=1 match exactly; {}", summary.join(", ")))
}

fn oracle_equivalence(pd: &GameDefinition) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let mut payoffs = || std::array::from_fn(|_| rng.gen_range(-10.0..10.0));
        let game = GameDefinition::new("random", payoffs(), payoffs()).unwrap();
        let g = rng.gen_range(0.0..=FRAC_PI_2);
        let mut params = || {
            StrategyParams::new(
                rng.gen_range(0.0..=PI),
                rng.gen_range(0.0..=2.0 * PI),
                rng.gen_range(0.0..=2.0 * PI),
            )
            .unwrap()
        };
        let (a, b) = (params(), params());
        let naive = expected_payoffs(&outcome_probs(&final_state(gamma(g), &a, &b)), &game);
        let fast = Circuit::new(gamma(g)).payoffs(&strategy_matrix(&a), &strategy_matrix(&b), &game);
        worst = worst.max((naive.0 - fast.0).abs()).max((naive.1 - fast.1).abs());
    }
    ensure(worst <= 1e-12, || format!("fast and naive payoffs differ by {worst:e}"))?;

    let grid = coarse();
    let mut total = 0;
    for k in 0..5 {
        let g = FRAC_PI_2 * k as f64 / 4.0;
        let found: Vec<(usize, usize)> = nash_two_player(&PayoffTensor::build(pd, &grid, gamma(g)), DEFAULT_EPSILON)
            .iter()
            .map(|e| (e.strategy_indices[0], e.strategy_indices[1]))
            .collect();
        let oracle = deviation_oracle(&direct_table(pd, &grid, g), DEFAULT_EPSILON);
        ensure(found == oracle, || {
            format!(
                "at γ = {g}: {} from intersection, {} from the oracle",
                found.len(),
                oracle.len()
            )
        })?;
        total += found.len();
    }
    Ok(format!(
        "200 samples, max difference {worst:.1e}; {total} equilibria over 5 γ match the oracle"
    ))
}

fn fine_grid_envelope(game: &GameDefinition) -> Check {
    let points = gamma_points(65);
    let fine_grid = StrategyGrid::build(SteppingParams::new(PI / 4.0, PI / 4.0, PI / 4.0).unwrap());
    let coarse_sweep = gamma_sweep(game, &coarse(), &points, DEFAULT_EPSILON).map_err(|e| e.to_string())?;
    let fine_sweep = gamma_sweep(game, &fine_grid, &points, DEFAULT_EPSILON).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for &g in &points {
        let (lo, hi) = coarse_sweep
            .records_at(g)
            .map(SweepRecord::payoff_a)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
        for r in fine_sweep.records_at(g) {
            let x = r.payoff_a();
            ensure(lo - 1e-6 <= x && x <= hi + 1e-6, || {
                format!("γ = {g}: fine payoff {x} outside coarse envelope [{lo}, {hi}]")
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "{}: {checked} equilibria on a {}-strategy grid inside the envelope",
        game.name,
        fine_grid.len()
    ))
}

fn performance(pd: &GameDefinition) -> Check {
    let grid = StrategyGrid::build(SteppingParams::new(PI / 8.0, PI / 8.0, PI / 8.0).unwrap());
    ensure(grid.len() == 1824, || format!("grid has {} strategies", grid.len()))?;
    let sweep = gamma_sweep(pd, &grid, &gamma_points(65), DEFAULT_EPSILON).map_err(|e| e.to_string())?;
    Ok(format!(
        "1824 strategies x 65 γ, {} equilibria, {} worker threads",
        sweep.records.len(),
        rayon::current_num_threads()
    ))
}

fn unentangled_factorization() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let circuit = Circuit::new(EntanglementParam::ZERO);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let mut params = || {
            StrategyParams::new(
                rng.gen_range(0.0..=PI),
                rng.gen_range(0.0..=2.0 * PI),
                rng.gen_range(0.0..=2.0 * PI),
            )
            .unwrap()
        };
        let (a, b) = (params(), params());
        let naive = outcome_probs(&final_state(EntanglementParam::ZERO, &a, &b));
        let fast = circuit.probabilities(&strategy_matrix(&a), &strategy_matrix(&b));
        for p in [naive, fast] {
            let pa = [p[0] + p[1], p[2] + p[3]];
            let pb = [p[0] + p[2], p[1] + p[3]];
            for (k, &pk) in p.iter().enumerate() {
                worst = worst.max((pk - pa[k / 2] * pb[k % 2]).abs());
            }
        }
    }
    ensure(worst <= 1e-10, || {
        format!("joint distribution deviates from product by {worst:e}")
    })?;
    Ok(format!("500 pairs, max deviation from product {worst:.1e}"))
}

#[test]
fn acceptance() {
    let cat = GameCatalogue::builtin();
    let pd = cat.get("prisoners_dilemma").unwrap().clone();
    let deadlock = cat.get("deadlock").unwrap().clone();
    let stag_hunt = cat.get("stag_hunt").unwrap().clone();
    let pennies = cat.get("matching_pennies").unwrap().clone();
    let secs = Duration::from_secs;

    let outcomes = [
        run(1, "grid counts", Some(secs(5)), grid_counts),
        run(2, "classical embedding", Some(secs(1)), || classical_embedding(&pd)),
        run(3, "Bell state", None, bell_state),
        run(4, "prisoner's dilemma phase structure", Some(secs(2)), || {
            pd_phase_structure(&pd)
        }),
        run(5, "matching pennies has no equilibria", Some(secs(2)), || {
            matching_pennies_empty(&pennies)
        }),
        run(6, "Bayesian boundaries", Some(secs(30)), || {
            bayesian_boundaries(&pd, &deadlock)
        }),
        run(7, "fast path and oracle equivalence", None, || oracle_equivalence(&pd)),
        run(8, "fine grid inside coarse envelope", Some(secs(600)), || {
            fine_grid_envelope(&stag_hunt)
        }),
        run(9, "1824-strategy sweep performance", Some(secs(120)), || {
            performance(&pd)
        }),
        run(10, "unentangled outcomes factorize", None, unentangled_factorization),
    ];
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
