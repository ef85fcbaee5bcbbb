//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit status
//! if any criterion fails.

mod common;

use std::time::Instant;

use rand::Rng;
use tracpf_core::analysis::{alpha_sweep, branch_report, timing_harness, SweepReport};
use tracpf_core::network::{assemble, euclidean_norm, CircuitSpec, MnaSystem, Potentials};
use tracpf_core::newton::NrConfig;
use tracpf_core::scenarios::{
    constant_demand_sweep, single_load_circuit, straight_route_timeline, toy_case_1, toy_case_2,
    RouteParams, TOY1_ALPHA_REF, TOY2_ALPHA_REF,
};
use tracpf_core::search::{search_basic, search_efficient, SearchConfig, SearchResult};

use common::{
    closed_form_alpha, fd_jacobian, frobenius, high_root, random_circuit, random_ladder, rng,
};

const DELTA_CON: f64 = 1e-8;

/// Every solution accepted during the run, for the residual and power
/// balance criteria.
#[derive(Default)]
struct Accepted {
    solves: Vec<(CircuitSpec, Potentials, f64)>,
    sweep_residuals: Vec<f64>,
}

impl Accepted {
    fn search(&mut self, spec: &CircuitSpec, res: &SearchResult) {
        self.solves
            .push((spec.clone(), res.phi_hat.clone(), res.alpha_hat));
    }

    fn sweep(&mut self, rep: &SweepReport) {
        self.sweep_residuals.extend(
            rep.records
                .iter()
                .filter(|r| r.converged)
                .map(|r| r.residual_norm),
        );
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn system(spec: &CircuitSpec) -> MnaSystem {
    assemble(spec).expect("test circuits are valid")
}

fn closed_form_oracle(acc: &mut Accepted) -> Outcome {
    let mut r = rng(1);
    let cfg = SearchConfig::default();
    let (mut worst_alpha, mut worst_phi, mut elapsed) = (0.0_f64, 0.0_f64, 0.0);
    for _ in 0..50 {
        let volts = r.gen_range(400.0..800.0);
        let ohms = r.gen_range(0.02..0.3);
        let watts = r.gen_range(0.5..3.0) * volts * volts / (4.0 * ohms);
        let spec = single_load_circuit(volts, ohms, watts);
        let sys = system(&spec);
        let t0 = Instant::now();
        let res = search_efficient(&sys, &cfg).unwrap();
        elapsed += t0.elapsed().as_secs_f64();
        worst_alpha =
            worst_alpha.max((res.alpha_hat - closed_form_alpha(volts, ohms, watts)).abs());
        let phi2 = res.phi_hat[sys.position_of("n2").unwrap()];
        let root = high_root(volts, ohms, watts, res.alpha_hat);
        worst_phi = worst_phi.max((phi2 - root).abs() / root);
        acc.search(&spec, &res);
    }
    outcome(
        worst_alpha <= 1e-4 && worst_phi <= 0.01 && elapsed < 1.0,
        format!(
            "50 single-load circuits: max |alpha err| {worst_alpha:.2e} (<= 1e-4), max potential err {:.3}% (<= 1%), {elapsed:.3} s (< 1 s)",
            100.0 * worst_phi
        ),
    )
}

fn solvable_fast_path(acc: &mut Accepted) -> Outcome {
    let cfg = SearchConfig::default();
    let fine = SearchConfig {
        delta_alpha: 1e-3,
        ..SearchConfig::default()
    };
    let mut r = rng(2);
    let (mut checked, mut bad) = (0, Vec::new());
    // single loads strictly below the critical power
    for k in 0..30 {
        let volts = r.gen_range(400.0..800.0);
        let ohms = r.gen_range(0.02..0.3);
        let watts = r.gen_range(0.0..0.99) * volts * volts / (4.0 * ohms);
        let spec = single_load_circuit(volts, ohms, watts);
        let res = search_efficient(&system(&spec), &cfg).unwrap();
        checked += 1;
        if res.outer_iterations != 1 || !res.fully_supplied {
            bad.push(format!("single#{k}"));
        }
        acc.search(&spec, &res);
    }
    // general circuits, solvability at alpha = 1 established by continuation
    for seed in 0..100 {
        let spec = random_circuit(&mut rng(1000 + seed), 12);
        let sys = system(&spec);
        if search_basic(&sys, &fine).unwrap().alpha_hat < 1.0 {
            continue;
        }
        let res = search_efficient(&sys, &cfg).unwrap();
        checked += 1;
        if res.outer_iterations != 1 || !res.fully_supplied {
            bad.push(format!("random#{seed}"));
        }
        acc.search(&spec, &res);
    }
    outcome(
        bad.is_empty(),
        format!(
            "{checked} circuits solvable at alpha = 1, single outer iteration violated on {bad:?}"
        ),
    )
}

fn fine_sweep_two_node(acc: &mut Accepted) -> (SweepReport, usize) {
    let spec = single_load_circuit(600.0, 0.1, 1e6);
    let sys = system(&spec);
    let res = search_efficient(&sys, &SearchConfig::default()).unwrap();
    acc.search(&spec, &res);
    let grid: Vec<f64> = (0..=10_000).map(|k| k as f64 / 10_000.0).collect();
    let nr = NrConfig::default().with_max_iters(res.final_nr_budget);
    let rep = alpha_sweep(&sys, &grid, &nr).unwrap();
    acc.sweep(&rep);
    (rep, res.final_nr_budget)
}

fn dichotomy(rep: &SweepReport, budget: usize) -> Outcome {
    let last = rep.last_converged().map_or(f64::NAN, |r| r.alpha);
    outcome(
        rep.converged_is_prefix() && (last - 0.9).abs() <= 2e-4,
        format!(
            "10^4-step grid, Newton budget {budget}: converged set is a prefix = {}, last converged {last:.4} (|. - 0.9| <= 2e-4)",
            rep.converged_is_prefix()
        ),
    )
}

fn condition_blow_up(rep: &SweepReport) -> Outcome {
    let converged: Vec<_> = rep.records.iter().filter(|r| r.converged).collect();
    let first = converged[0].condition.unwrap();
    let last = converged.last().unwrap().condition.unwrap();
    let decile = converged.len() / 10;
    let max_iters =
        |rs: &[&tracpf_core::analysis::SweepRecord]| rs.iter().map(|r| r.iterations).max().unwrap();
    let bottom = max_iters(&converged[..decile]);
    let top = max_iters(&converged[converged.len() - decile..]);
    let ratio = last / first;
    outcome(
        ratio >= 100.0 && top >= bottom,
        format!("cond ratio {ratio:.3e} (>= 100), max Newton iterations top decile {top} >= bottom decile {bottom}"),
    )
}

fn residual_guarantee(acc: &Accepted) -> Outcome {
    let mut worst = 0.0_f64;
    for (spec, phi, alpha) in &acc.solves {
        let sys = system(spec);
        worst = worst.max(euclidean_norm(&sys.residual(phi, *alpha).unwrap()));
    }
    worst = acc.sweep_residuals.iter().copied().fold(worst, f64::max);
    outcome(
        worst < DELTA_CON,
        format!(
            "{} search solutions and {} sweep solutions, max residual {worst:.2e} (< 1e-8)",
            acc.solves.len(),
            acc.sweep_residuals.len()
        ),
    )
}

fn jacobian_check() -> Outcome {
    let mut worst = 0.0_f64;
    for seed in 0..100 {
        let mut r = rng(3000 + seed);
        let sys = system(&random_circuit(&mut r, 12));
        let alpha = r.gen_range(0.0..1.0);
        let phi: Vec<f64> = (0..sys.dim())
            .map(|_| r.gen_range(10.0..1000.0) * if r.gen_bool(0.1) { -1.0 } else { 1.0 })
            .collect();
        let exact = sys.jacobian(&phi, alpha).unwrap().to_dense();
        let fd = fd_jacobian(&sys, &phi, alpha);
        let mut diff = exact.clone();
        for i in 0..diff.n_rows() {
            for j in 0..diff.n_cols() {
                diff.set(i, j, exact.get(i, j) - fd.get(i, j));
            }
        }
        worst = worst.max(frobenius(&diff) / frobenius(&exact));
    }
    outcome(
        worst < 1e-6,
        format!("100 random circuits (<= 12 nodes): max relative error {worst:.2e} (< 1e-6)"),
    )
}

fn algorithm_agreement(acc: &mut Accepted) -> Outcome {
    let fine = SearchConfig {
        delta_alpha: 1e-3,
        ..SearchConfig::default()
    };
    let mut cases: Vec<(String, CircuitSpec)> = vec![
        ("toy1".into(), toy_case_1().to_circuit().unwrap()),
        ("toy2".into(), toy_case_2().to_circuit().unwrap()),
    ];
    cases.extend((0..20).map(|s| {
        (
            format!("ladder#{s}"),
            random_ladder(&mut rng(4000 + s)).to_circuit().unwrap(),
        )
    }));
    let mut worst = (0.0_f64, String::new());
    for (name, spec) in &cases {
        let sys = system(spec);
        let a = search_basic(&sys, &fine).unwrap();
        let b = search_efficient(&sys, &SearchConfig::default()).unwrap();
        acc.search(spec, &a);
        acc.search(spec, &b);
        let gap = (a.alpha_hat - b.alpha_hat).abs();
        if gap >= worst.0 {
            worst = (gap, name.clone());
        }
    }
    outcome(
        worst.0 <= 1e-3,
        format!(
            "2 toy cases + 20 random ladders: max |basic - efficient| {:.2e} on {} (<= 1e-3)",
            worst.0, worst.1
        ),
    )
}

fn toy_regression(acc: &mut Accepted) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, sc, stored, reference, loads, feeds) in [
        ("toy1", toy_case_1(), TOY1_ALPHA_REF, 0.3715, 4, 1),
        ("toy2", toy_case_2(), TOY2_ALPHA_REF, 0.8849, 10, 2),
    ] {
        let spec = sc.to_circuit().unwrap();
        let sys = system(&spec);
        let part = sys.partition();
        let feed_cables = spec
            .resistors
            .iter()
            .filter(|r| r.a == "sub" || r.b == "sub")
            .count();
        let in_range = spec
            .resistors
            .iter()
            .all(|r| (0.023..=0.23).contains(&r.ohms));
        let structure =
            part.n_load() == loads && part.n_source() == 1 && feed_cables == feeds && in_range;

        let res = search_efficient(&sys, &SearchConfig::default()).unwrap();
        acc.search(&spec, &res);

        // brute force: coarse warm-up grid, then 1e-5 steps around the value
        let mut grid: Vec<f64> = (0..)
            .map(|k| k as f64 * 1e-3)
            .take_while(|&a| a < stored - 2e-3)
            .collect();
        let lo = ((stored - 2e-3) / 1e-5).round() as i64;
        grid.extend((lo..=lo + 400).map(|k| k as f64 * 1e-5));
        let nr = NrConfig::default().with_max_iters(res.final_nr_budget);
        let sweep = alpha_sweep(&sys, &grid, &nr).unwrap();
        acc.sweep(&sweep);
        let brute = sweep.last_converged().map_or(f64::NAN, |r| r.alpha);

        let ok =
            structure && (res.alpha_hat - stored).abs() <= 1e-4 && (brute - stored).abs() <= 1e-9;
        pass &= ok;
        parts.push(format!(
            "{name}: |J|={} feeds={feed_cables} segments in [0.023, 0.23] = {in_range}, alpha {:.4} stored {stored} brute force {brute:.5} (reference {reference})",
            part.n_load(),
            res.alpha_hat
        ));
    }
    outcome(pass, parts.join("; "))
}

fn power_bookkeeping(acc: &Accepted) -> Outcome {
    let mut worst = 0.0_f64;
    for (spec, phi, alpha) in &acc.solves {
        let sys = system(spec);
        let rep = branch_report(spec, &sys, phi, *alpha, DELTA_CON).unwrap();
        worst = worst.max(rep.balance_error());
    }
    outcome(
        worst < 1e-4,
        format!(
            "{} converged solves: max relative balance error {worst:.2e} (< 1e-4)",
            acc.solves.len()
        ),
    )
}

fn timeline_property() -> Outcome {
    let params = RouteParams::default();
    let cfg = SearchConfig::default();
    let positions: Vec<f64> = (0..=40).map(|k| k as f64 * 200.0).collect();
    let sweep = constant_demand_sweep(&params, 300e3, &positions, &cfg).unwrap();
    let monotone = sweep.windows(2).all(|w| w[1].alpha_hat <= w[0].alpha_hat);
    let drive = straight_route_timeline(&params, &cfg).unwrap();
    let non_negative = sweep.iter().chain(&drive).all(|s| s.deficit_energy >= 0.0);
    let deficit: f64 = drive.iter().map(|s| s.deficit_energy).sum();
    outcome(
        monotone && non_negative,
        format!(
            "300 kW parked at 41 positions: alpha non-increasing = {monotone} ({:.4} at 0 m to {:.4} at 8000 m); {} driving steps, deficit >= 0 = {non_negative}, total {:.1} MJ",
            sweep[0].alpha_hat,
            sweep.last().unwrap().alpha_hat,
            drive.len(),
            deficit / 1e6
        ),
    )
}

fn performance() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, sc) in [("toy1", toy_case_1()), ("toy2", toy_case_2())] {
        let t = timing_harness(&sc.to_circuit().unwrap(), 100, &SearchConfig::default()).unwrap();
        pass &= t.max_s < 0.05;
        parts.push(format!(
            "{name}: mean {:.2} ms, min {:.2} ms, max {:.2} ms",
            1e3 * t.mean_s,
            1e3 * t.min_s,
            1e3 * t.max_s
        ));
    }
    outcome(
        pass,
        format!("100 runs each, every run < 50 ms: {}", parts.join("; ")),
    )
}

fn main() {
    let mut acc = Accepted::default();
    let (sweep, budget) = fine_sweep_two_node(&mut acc);
    let results = vec![
        (
            "AC1",
            "closed-form supply limit",
            closed_form_oracle(&mut acc),
        ),
        ("AC2", "solvable fast path", solvable_fast_path(&mut acc)),
        (
            "AC3",
            "solution set is an interval",
            dichotomy(&sweep, budget),
        ),
        ("AC4", "condition number blow-up", condition_blow_up(&sweep)),
        (
            "AC6",
            "Jacobian against finite differences",
            jacobian_check(),
        ),
        ("AC7", "strategy agreement", algorithm_agreement(&mut acc)),
        ("AC8", "toy-case regression", toy_regression(&mut acc)),
        ("AC10", "straight-route timeline", timeline_property()),
        ("AC11", "performance smoke", performance()),
    ];
    // these two audit everything accepted above
    let audit = vec![
        ("AC5", "residual guarantee", residual_guarantee(&acc)),
        ("AC9", "power bookkeeping", power_bookkeeping(&acc)),
    ];
    let mut all: Vec<_> = results.into_iter().chain(audit).collect();
    all.sort_by_key(|(id, _, _)| id[2..].parse::<u32>().unwrap());

    let mut failed = 0;
    for (id, title, o) in &all {
        println!(
            "{id:<5} {} {title}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", all.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
