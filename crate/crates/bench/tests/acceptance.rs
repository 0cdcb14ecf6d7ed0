//! Acceptance suite. Runs every criterion in sequence, prints one PASS or
//! FAIL line per criterion and exits non-zero if any failed.
//!
//! `cargo test -p nrp-bench --test acceptance -- 4 9` runs a subset.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;

use nrp_bench::algorithm::Algorithm;
use nrp_bench::best_known::{best_known, BestKnownBudget};
use nrp_bench::experiment::{execute, ExperimentSpec, InstanceSource};
use nrp_bench::stats::spearman;
use nrp_bench::trajectory::reduction_trajectory;
use nrp_core::backbone::{
    extend_solution, instance_reduction, soft_backbone, Backbone, BackboneKind,
};
use nrp_core::bma::{
    backbone_optimal_ratio, backbone_scale_ratio, bma_solve, bma_solve_with, level_run_seed, solve_seed,
    BmaParams,
};
use nrp_core::fixtures::worked_example;
use nrp_core::instances::{generate_classic, ClassicGenSpec};
use nrp_core::oracle::brute_force_oracle;
use nrp_core::search::{
    multi_start_sa, random_search, simulated_annealing, LocalSearch, LundyMees, RunResult, SaParams,
    SearchOperator,
};
use nrp_core::seed::{derive_seed, rng_from_seed};
use nrp_core::{CustomerId, Instance, RequirementId, Solution};

/// Outcome of one criterion: pass flag and a one-line account.
struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn within(elapsed: Duration, limit_s: u64) -> (bool, String) {
    let s = elapsed.as_secs_f64();
    (s <= limit_s as f64, format!("{s:.1} s of {limit_s} s"))
}

/// Random simplified instance with `n` customers, `m` requirements, costs
/// and profits in [1, 10], 1 to 3 distinct requests per customer and the
/// bound at `ratio` of the total cost.
fn random_instance(seed: u64, n: usize, m: usize, ratio: f64) -> Instance {
    let mut rng = rng_from_seed(seed);
    let costs: Vec<u64> = (0..m).map(|_| rng.gen_range(1..=10)).collect();
    let rows: Vec<(u64, Vec<u32>)> = (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=3.min(m));
            let ids = sample(&mut rng, m, k).into_iter().map(|j| j as u32 + 1).collect();
            (rng.gen_range(1..=10), ids)
        })
        .collect();
    let rows: Vec<(u64, &[u32])> = rows.iter().map(|(p, r)| (*p, r.as_slice())).collect();
    let total: u64 = costs.iter().sum();
    Instance::from_rows(&costs, &rows, (ratio * total as f64).floor() as u64).unwrap()
}

fn small_random_instance(seed: u64, max_n: usize, max_m: usize) -> Instance {
    let mut rng = rng_from_seed(derive_seed(seed, &[u64::MAX]));
    let n = rng.gen_range(4..=max_n);
    let m = rng.gen_range(2..=max_m);
    random_instance(seed, n, m, 0.5)
}

/// Random subset of the pairs of `x`.
fn random_backbone(x: &Solution, seed: u64) -> Backbone {
    let mut rng = rng_from_seed(seed);
    Backbone::from_pairs(BackboneKind::Approximate, x.pairs().filter(|_| rng.gen_bool(0.5))).unwrap()
}

fn preset(name: &str, ratio: f64, seed: u64) -> Instance {
    generate_classic(&ClassicGenSpec::preset(name, ratio, seed).unwrap()).unwrap()
}

fn criterion_1() -> Verdict {
    let started = Instant::now();
    let bma = BmaParams { alpha: 10, beta: 4, gamma: 5, ..BmaParams::default() };
    let sa = SaParams::default();
    let results: Vec<(bool, bool)> = (0..200u64)
        .into_par_iter()
        .map(|k| {
            let inst = small_random_instance(derive_seed(1, &[k]), 12, 12);
            let optimum = brute_force_oracle(&inst).unwrap().optimum_profit;
            let seed = derive_seed(2, &[k]);
            let mssa = multi_start_sa(&inst, 30, seed, &sa);
            let bma = bma_solve(&inst, &BmaParams { rng_seed: seed, ..bma }).unwrap();
            assert!(inst.is_feasible(&mssa.solution).unwrap() && inst.is_feasible(&bma.solution).unwrap());
            (mssa.profit == optimum, bma.profit == optimum)
        })
        .collect();
    let mssa_hits = results.iter().filter(|r| r.0).count();
    let bma_hits = results.iter().filter(|r| r.1).count();
    let (fast, time) = within(started.elapsed(), 120);
    verdict(
        mssa_hits >= 198 && bma_hits >= 190 && fast,
        format!("MSSA optimal on {mssa_hits}/200 (need 198), BMA on {bma_hits}/200 (need 190), {time}"),
    )
}

/// One level of a reduction chain: the instance, the backbone fixed in it
/// and the cost that backbone removed.
struct ChainLevel {
    inst: Instance,
    fixed: Backbone,
    backbone_cost: u64,
}

fn criterion_2() -> Verdict {
    let mut violations = Vec::new();
    let mut levels_checked = 0;
    for k in 0..1000u64 {
        let mut rng = rng_from_seed(derive_seed(3, &[k]));
        let n = rng.gen_range(3..=30);
        let m = rng.gen_range(2..=20);
        let ratio = rng.gen_range(0.2..0.8);
        let depth = rng.gen_range(1..=3);
        let mut current = random_instance(derive_seed(4, &[k]), n, m, ratio);
        let mut chain: Vec<ChainLevel> = Vec::new();
        for d in 0..depth {
            let x = random_search(&current, derive_seed(5, &[k, d])).solution;
            let approx = random_backbone(&x, derive_seed(6, &[k, d]));
            let mid = instance_reduction(&current, &approx).unwrap();
            let soft = soft_backbone(&mid.reduced);
            let after = instance_reduction(&mid.reduced, &soft).unwrap();
            chain.push(ChainLevel {
                inst: current.clone(),
                fixed: approx,
                backbone_cost: mid.backbone_cost,
            });
            chain.push(ChainLevel { inst: mid.reduced, fixed: soft, backbone_cost: after.backbone_cost });
            current = after.reduced;
        }
        let mut x = random_search(&current, derive_seed(7, &[k])).solution;
        let mut inner = current;
        for level in chain.iter().rev() {
            let refined = extend_solution(&x, &level.fixed).unwrap();
            let fixed_profit = level.fixed.selected_profit(&level.inst);
            let (p_in, c_in) = (inner.solution_profit(&x).unwrap(), inner.solution_cost(&x).unwrap());
            let (p_out, c_out) =
                (level.inst.solution_profit(&refined).unwrap(), level.inst.solution_cost(&refined).unwrap());
            if p_out != p_in + fixed_profit {
                violations.push(format!("case {k}: profit {p_out} != {p_in} + {fixed_profit}"));
            }
            if c_out != c_in + level.backbone_cost {
                violations.push(format!("case {k}: cost {c_out} != {c_in} + {}", level.backbone_cost));
            }
            if c_out > level.inst.budget() || refined.len() != level.inst.num_customers() {
                violations.push(format!("case {k}: refined solution infeasible or partial"));
            }
            levels_checked += 1;
            x = refined;
            inner = level.inst.clone();
        }
    }
    verdict(
        violations.is_empty(),
        format!(
            "1000 reduction chains, {levels_checked} refinement steps, {} violations{}",
            violations.len(),
            violations.first().map(|v| format!(", first: {v}")).unwrap_or_default()
        ),
    )
}

fn criterion_3() -> Verdict {
    let mut checked = 0;
    let mut soft_customers = 0;
    let mut violations = 0;
    let mut attempts = 0u64;
    while checked < 100 && attempts < 100_000 {
        attempts += 1;
        let mut rng = rng_from_seed(derive_seed(8, &[attempts]));
        let n = rng.gen_range(6..=22);
        let m = rng.gen_range(3..=10);
        let inst = random_instance(derive_seed(9, &[attempts]), n, m, rng.gen_range(0.3..0.9));
        let x = random_search(&inst, derive_seed(10, &[attempts])).solution;
        let bb = random_backbone(&x, derive_seed(11, &[attempts]));
        let reduced = instance_reduction(&inst, &bb).unwrap().reduced;
        let soft = soft_backbone(&reduced);
        if soft.is_empty() || reduced.num_customers() > 15 {
            continue;
        }
        checked += 1;
        soft_customers += soft.len();
        let report = brute_force_oracle(&reduced).unwrap();
        for optimal in report.optimal_solutions() {
            violations += soft.selected().filter(|&id| optimal.get(id) != Some(true)).count();
        }
    }
    verdict(
        checked == 100 && violations == 0,
        format!("{checked} reduced instances with {soft_customers} soft-backbone customers, {violations} violations"),
    )
}

/// Local search that replays fixed solutions, looked up by seed.
struct Scripted {
    by_seed: HashMap<u64, Solution>,
}

impl LocalSearch for Scripted {
    fn search(&self, inst: &Instance, seed: u64) -> RunResult {
        let solution = self.by_seed.get(&seed).unwrap_or_else(|| panic!("no script for seed {seed}")).clone();
        assert_eq!(solution.len(), inst.num_customers(), "script does not fit the instance");
        RunResult {
            profit: inst.solution_profit(&solution).unwrap(),
            cost: inst.solution_cost(&solution).unwrap(),
            solution,
            wall_time: 0.0,
            evaluations: 0,
            final_temperature: None,
        }
    }

    fn name(&self) -> String {
        "scripted".into()
    }
}

fn assignment(pairs: &[(u32, u8)]) -> Solution {
    Solution::from_pairs(pairs.iter().map(|&(i, p)| (CustomerId(i), p == 1)))
}

fn pair_list(bb: &Backbone) -> Vec<(u32, u8)> {
    bb.pairs().map(|(id, p)| (id.0, p as u8)).collect()
}

fn criterion_4() -> Verdict {
    let inst = worked_example();
    let mut failures = Vec::new();
    let mut expect = |what: &str, ok: bool| {
        if !ok {
            failures.push(what.to_string());
        }
    };

    expect("bound 26", inst.budget() == 26);
    let pick = |ids: &[u32]| Solution::from_selected(&inst, &ids.iter().map(|&i| CustomerId(i)).collect::<Vec<_>>());
    for (name, ids, cost, profit) in [("X1", &[1, 3, 7][..], 20, Some(14)), ("X2", &[1, 5, 6, 7], 25, Some(15)), ("X3", &[2, 4, 6], 29, None)] {
        let x = pick(ids);
        let c = inst.solution_cost(&x).unwrap();
        expect(&format!("{name} cost {c} != {cost}"), c == cost);
        match profit {
            Some(p) => expect(&format!("{name} profit"), inst.solution_profit(&x).unwrap() == p && c <= 26),
            None => expect(&format!("{name} must be infeasible"), c > 26),
        }
    }

    // Two local optima per level whose common part is the recorded
    // approximate backbone, then the recorded smallest-instance solution.
    let base = 42;
    let params = BmaParams { alpha: 10, beta: 2, gamma: 2, operator: SearchOperator::default(), rng_seed: base };
    let script = Scripted {
        by_seed: HashMap::from([
            (level_run_seed(base, 1, 0), assignment(&[(1, 1), (2, 1), (3, 1), (4, 0), (5, 0), (6, 1), (7, 1)])),
            (level_run_seed(base, 1, 1), assignment(&[(1, 1), (2, 0), (3, 0), (4, 0), (5, 1), (6, 0), (7, 0)])),
            (level_run_seed(base, 2, 0), assignment(&[(3, 1), (5, 0), (6, 1), (7, 1)])),
            (level_run_seed(base, 2, 1), assignment(&[(3, 0), (5, 1), (6, 1), (7, 0)])),
            (solve_seed(base), assignment(&[(3, 1), (5, 0)])),
        ]),
    };
    let result = match bma_solve_with(&inst, &params, &script) {
        Ok(r) => r,
        Err(e) => return verdict(false, format!("replay failed: {e}")),
    };
    let req = |ids: &[u32]| ids.iter().map(|&j| RequirementId(j)).collect::<Vec<_>>();
    let reqs = |i: &Instance| i.requirements().iter().map(|r| r.id).collect::<Vec<_>>();
    let [l1, l2] = &result.levels[..] else {
        return verdict(false, format!("expected 2 levels, got {}", result.levels.len()));
    };
    expect("level 1 approximate backbone", pair_list(&l1.approx_backbone) == [(1, 1), (4, 0)]);
    expect("level 1 remainder 5 customers, 5 requirements", l1.instance_mid.num_customers() == 5 && l1.instance_mid.num_requirements() == 5);
    expect("level 1 soft backbone", pair_list(&l1.soft_backbone) == [(2, 1)]);
    expect("level 2 input 4 customers, 5 requirements", l2.instance_before.num_customers() == 4 && l2.instance_before.num_requirements() == 5);
    expect("level 2 approximate backbone", pair_list(&l2.approx_backbone) == [(6, 1)]);
    expect("level 2 remainder {r5, r7}", l2.instance_mid.num_customers() == 3 && reqs(&l2.instance_mid) == req(&[5, 7]));
    expect("level 2 soft backbone", pair_list(&l2.soft_backbone) == [(7, 1)]);
    let smallest = result.smallest_instance(&inst);
    let ids: Vec<u32> = smallest.customers().iter().map(|c| c.id.0).collect();
    expect("smallest instance {s3, s5} with bound 9", ids == [3, 5] && smallest.budget() == 9);
    let target = assignment(&[(1, 1), (2, 1), (3, 1), (4, 0), (5, 0), (6, 1), (7, 1)]);
    expect("refined solution", result.solution == target);
    expect("refined cost 22, profit 19", result.cost == 22 && result.profit == 19);

    verdict(
        failures.is_empty(),
        if failures.is_empty() {
            "X1 (20, 14), X2 (25, 15), X3 cost 29 infeasible; replay gives {(1,1),(2,1),(3,1),(4,0),(5,0),(6,1),(7,1)}".into()
        } else {
            format!("mismatches: {}", failures.join("; "))
        },
    )
}

const LARGE_PRESETS: [&str; 4] = ["nrp-2", "nrp-3", "nrp-4", "nrp-5"];

fn criterion_5() -> Verdict {
    let started = Instant::now();
    let operator = SearchOperator::default();
    let mut report = Vec::new();
    let mut all_within = true;
    for name in LARGE_PRESETS {
        let fractions: Vec<f64> = (0..5u64)
            .map(|seed| {
                let inst = preset(name, 0.5, seed);
                let t = reduction_trajectory(&inst, 12, 5, &operator, derive_seed(12, &[seed])).unwrap();
                assert!(t.half_steps().windows(2).all(|w| w[1] <= w[0]));
                t.remainder_fraction()
            })
            .collect();
        let mean = fractions.iter().sum::<f64>() / fractions.len() as f64;
        all_within &= mean <= 0.20;
        report.push(format!("{name} {:.1}%", 100.0 * mean));
    }
    let (fast, time) = within(started.elapsed(), 15 * 60);
    verdict(all_within && fast, format!("mean remainder after 12 pairs (need <= 20%): {}, {time}", report.join(", ")))
}

fn criterion_6() -> Verdict {
    let started = Instant::now();
    let gammas = [2usize, 4, 6, 8, 10];
    let mut pass = true;
    let mut report = Vec::new();
    for name in ["nrp-2", "nrp-3", "nrp-4"] {
        let inst = preset(name, 0.5, 0);
        let reference = best_known(&inst, &BestKnownBudget::default(), 13).unwrap().solution;
        let mut scale = Vec::new();
        let mut quality = Vec::new();
        for &gamma in &gammas {
            let runs: Vec<(f64, Option<f64>)> = (0..10u64)
                .map(|r| {
                    let params = BmaParams { gamma, rng_seed: derive_seed(14, &[gamma as u64, r]), ..BmaParams::default() };
                    let result = bma_solve(&inst, &params).unwrap();
                    (backbone_scale_ratio(&result, &inst), backbone_optimal_ratio(&result, &reference).ok())
                })
                .collect();
            scale.push(runs.iter().map(|r| r.0).sum::<f64>() / runs.len() as f64);
            let defined: Vec<f64> = runs.iter().filter_map(|r| r.1).collect();
            quality.push(if defined.is_empty() { 0.0 } else { defined.iter().sum::<f64>() / defined.len() as f64 });
        }
        let g: Vec<f64> = gammas.iter().map(|&g| g as f64).collect();
        let rho_scale = spearman(&g, &scale).unwrap_or(f64::NAN);
        let rho_quality = spearman(&g, &quality).unwrap_or(f64::NAN);
        let last = quality[quality.len() - 1];
        pass &= rho_scale <= -0.8 && rho_quality >= 0.8 && last >= 0.85;
        let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join("/");
        report.push(format!(
            "{name}: scale {} rho {rho_scale:.2}, optimal ratio {} rho {rho_quality:.2}",
            fmt(&scale),
            fmt(&quality)
        ));
    }
    let (fast, time) = within(started.elapsed(), 30 * 60);
    verdict(pass && fast, format!("{}; {time}", report.join("; ")))
}

fn criterion_7() -> Verdict {
    let started = Instant::now();
    let instances = LARGE_PRESETS
        .iter()
        .flat_map(|name| {
            [0.3, 0.5].map(|cost_ratio| InstanceSource::Preset { preset: name.to_string(), cost_ratio, seed: 0 })
        })
        .collect();
    let spec = ExperimentSpec {
        instances,
        algorithms: vec![Algorithm::mssa().into(), Algorithm::Bma(BmaParams::default()).into()],
        repetitions: 10,
        base_seed: 15,
        output_dir: "unused".into(),
        baselines: vec!["mssa".into()],
    };
    let report = match execute(&spec) {
        Ok(r) => r,
        Err(e) => return verdict(false, format!("experiment failed: {e}")),
    };
    let advantages: Vec<(String, f64)> = report
        .rows
        .iter()
        .filter(|r| r.algorithm == "bma")
        .map(|r| (r.instance.clone(), r.advantage("mssa").expect("mssa row present")))
        .collect();
    let mean = advantages.iter().map(|a| a.1).sum::<f64>() / advantages.len() as f64;
    let every = advantages.iter().all(|a| a.1 >= 0.0);
    let (fast, time) = within(started.elapsed(), 60 * 60);
    let listing = advantages.iter().map(|(i, a)| format!("{i} {a:+.2}%")).collect::<Vec<_>>().join(", ");
    verdict(every && mean >= 2.0 && fast, format!("BMA vs MSSA: {listing}; mean {mean:+.2}% (need >= +2%), {time}"))
}

fn nrp(args: &[&str], dir: &Path) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_nrp"))
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("nrp {} exited with {}: {}", args.join(" "), out.status, String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

/// `stats.csv` without its wall-time column.
fn stats_without_time(path: &Path) -> String {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let time = reader.headers().unwrap().iter().position(|h| h == "avg_time_s").unwrap();
    reader
        .records()
        .map(|r| r.unwrap().iter().enumerate().filter(|&(i, _)| i != time).map(|(_, f)| f).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("\n")
}

/// `runs.jsonl` without wall times.
fn runs_without_time(path: &Path) -> Vec<serde_json::Value> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| {
            let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
            v.as_object_mut().unwrap().remove("wall_time");
            v
        })
        .collect()
}

fn criterion_8() -> Verdict {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data");
    let example = data.join("worked_example.nrp");
    let dump = data.join("sample_dump.tsv");
    let (example, dump) = (example.to_str().unwrap(), dump.to_str().unwrap());
    let quick = ["--sa-iterations", "20000", "--climb-iterations", "20000"];
    let mut invocations: Vec<Vec<&str>> = vec![
        vec!["gen", "--preset", "nrp-2", "--cost-ratio", "0.3", "--seed", "7"],
        vec!["mine", "--dump", dump, "--window", "12", "--start-offset", "1", "--user-min", "2", "--report-max", "3", "--seed", "7"],
        vec!["oracle", "--instance", example, "--all"],
        vec!["solve", "--instance", example, "--algo", "ga", "--generations", "200", "--seed", "7"],
    ];
    for algo in ["rs", "ffhc", "shc", "sa", "mssa", "bma"] {
        let mut v = vec!["solve", "--preset", "nrp-1", "--algo", algo, "--seed", "7", "--restarts", "4"];
        v.extend(quick);
        invocations.push(v);
    }
    let mut land = vec!["landscape", "--preset", "nrp-1", "--runs", "20", "--rs-runs", "50", "--bma-runs", "2", "--seed", "7"];
    land.extend(quick);
    invocations.push(land);
    let mut traj = vec!["trajectory", "--preset", "nrp-1", "--pairs", "6", "--seed", "7"];
    traj.extend(quick);
    invocations.push(traj);

    let dir = tempfile::tempdir().unwrap();
    let config = r#"
        repetitions = 3
        base_seed = 7
        [[instances]]
        preset = "nrp-1"
        cost_ratio = 0.3
        [[algorithms]]
        kind = "mssa"
        restarts = 3
        sa = { iteration_budget = 20000 }
        [[algorithms]]
        kind = "ga"
        max_iterations = 100
        [[algorithms]]
        kind = "bma"
        operator = { kind = "annealing", iteration_budget = 20000 }
    "#;
    std::fs::write(dir.path().join("bench.toml"), config).unwrap();

    let mut mismatches = Vec::new();
    let mut compared = 0;
    for args in &invocations {
        match (nrp(args, dir.path()), nrp(args, dir.path())) {
            (Ok(a), Ok(b)) if a == b && !a.is_empty() => compared += 1,
            (Ok(_), Ok(_)) => mismatches.push(args[0..3].join(" ")),
            (Err(e), _) | (_, Err(e)) => mismatches.push(e),
        }
    }
    let mut bench_outputs = Vec::new();
    for out in ["out-a", "out-b"] {
        match nrp(&["bench", "bench.toml", "--output-dir", out], dir.path()) {
            Ok(stdout) => bench_outputs.push((
                stdout,
                stats_without_time(&dir.path().join(out).join("stats.csv")),
                runs_without_time(&dir.path().join(out).join("runs.jsonl")),
            )),
            Err(e) => mismatches.push(e),
        }
    }
    if let [a, b] = &bench_outputs[..] {
        if a == b {
            compared += 1;
        } else {
            mismatches.push("bench".into());
        }
    }
    verdict(
        mismatches.is_empty(),
        format!("{compared} invocations repeated byte-identically, mismatches: {mismatches:?}"),
    )
}

fn criterion_9() -> Verdict {
    let inst = worked_example();
    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    for k in [1_000u64, 100_000] {
        let params = SaParams { iteration_budget: k, ..SaParams::default() };
        let expected = params.start_temperature / (1.0 + k as f64 * params.cooling_ratio * params.start_temperature);
        let measured = simulated_annealing(&inst, 1, &params).final_temperature.unwrap();
        let mut recurrence = LundyMees::new(params.start_temperature, params.cooling_ratio);
        for _ in 0..k {
            recurrence.cool();
        }
        for value in [measured, recurrence.temperature()] {
            worst = worst.max((value - expected).abs() / expected);
        }
        lines.push(format!("T({k}) = {measured:.12}"));
    }
    verdict(worst <= 1e-12, format!("{}, worst relative error {worst:.2e} (need <= 1e-12)", lines.join(", ")))
}

type Criterion = (usize, &'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "oracle equivalence", criterion_1),
        (2, "reduction soundness", criterion_2),
        (3, "soft-backbone optimality", criterion_3),
        (4, "worked-example replay", criterion_4),
        (5, "multilevel shrinkage", criterion_5),
        (6, "backbone quality trend", criterion_6),
        (7, "directional performance", criterion_7),
        (8, "determinism", criterion_8),
        (9, "annealing schedule", criterion_9),
    ];
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (number, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&number) {
            continue;
        }
        let started = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| {
                let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
                verdict(false, format!("panicked: {}", msg.unwrap_or_default()))
            });
        failed += usize::from(!v.pass);
        println!(
            "{} criterion {number} ({name}): {} [{:.1} s]",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            started.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
