use std::fs;

use anyhow::{anyhow, bail, Context};
use tracpf_core::analysis::{alpha_sweep_with, branch_report, potentials_table, SweepMode};
use tracpf_core::linsolve::{linear_solver, linear_solver_names};
use tracpf_core::network::{assemble, CircuitSpec, MnaSystem};
use tracpf_core::newton::{initial_guess_with, newton_solve};
use tracpf_core::report::{Cell, Table};
use tracpf_core::scenarios::{
    self, constant_demand_sweep, straight_route_timeline, RouteParams, TimelineStep,
};
use tracpf_core::search::{
    dichotomy_grid, search_efficient, strategy, strategy_names, verify_dichotomy, SearchConfig,
};

use crate::args::{Command, CommonArgs, InputArgs};
use crate::output::{emit, Report};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_NO_SOLUTION: u8 = 2;
pub const EXIT_NOT_AN_INTERVAL: u8 = 3;

pub fn run(command: Command) -> anyhow::Result<u8> {
    match command {
        Command::Solve {
            input,
            alpha,
            common,
        } => solve(&input, alpha, &common),
        Command::Search {
            input,
            basic,
            strategy,
            common,
        } => {
            let name =
                strategy.unwrap_or_else(|| if basic { "basic" } else { "efficient" }.to_owned());
            search(&input, &name, &common)
        }
        Command::Sweep {
            input,
            grid,
            cold,
            common,
        } => sweep(&input, grid, cold, &common),
        Command::Scenario { name, out } => scenario(name.as_deref(), out.as_deref()),
        Command::Timeline {
            route_length,
            spacing,
            dt,
            constant_power,
            common,
        } => {
            let params = RouteParams {
                route_length,
                intersection_spacing: spacing,
                dt,
                ..RouteParams::default()
            };
            timeline(&params, constant_power, &common)
        }
        Command::Verify {
            input,
            points,
            common,
        } => verify(&input, points, &common),
    }
}

fn load_input(input: &InputArgs) -> anyhow::Result<CircuitSpec> {
    if let Some(name) = &input.scenario {
        let sc = scenarios::scenario(name).ok_or_else(|| {
            anyhow!(
                "unknown scenario {name:?} (available: {})",
                scenarios::scenario_names().collect::<Vec<_>>().join(", ")
            )
        })?;
        return Ok(sc.build());
    }
    let path = input.netlist.as_ref().expect("clap requires one input");
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    CircuitSpec::parse_netlist(&text).with_context(|| format!("invalid netlist {}", path.display()))
}

fn search_config(common: &CommonArgs) -> anyhow::Result<SearchConfig> {
    let mut cfg = SearchConfig::default();
    if let Some(v) = common.delta_con {
        cfg.nr.delta_con = v;
    }
    if let Some(v) = common.max_nr {
        cfg.nr.max_iters = v;
    }
    if let Some(name) = &common.linear_solver {
        cfg.nr.linear_solver = linear_solver(name).ok_or_else(|| {
            anyhow!(
                "unknown linear solver {name:?} (available: {})",
                linear_solver_names().collect::<Vec<_>>().join(", ")
            )
        })?;
    }
    if let Some(v) = common.delta_opt {
        cfg.delta_opt = v;
    }
    if let Some(v) = common.delta_act {
        cfg.delta_act = v;
    }
    if let Some(v) = common.c_bi {
        cfg.c_bi = v;
    }
    if let Some(v) = common.delta_alpha {
        cfg.delta_alpha = v;
    }
    if let Some(v) = common.max_outer {
        cfg.max_outer = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn prepare(
    input: &InputArgs,
    common: &CommonArgs,
) -> anyhow::Result<(CircuitSpec, MnaSystem, SearchConfig)> {
    let cfg = search_config(common)?;
    let spec = load_input(input)?;
    let sys = assemble(&spec)?;
    Ok((spec, sys, cfg))
}

fn single_row(columns: Vec<&'static str>, row: Vec<Cell>) -> Table {
    let mut t = Table::new(columns);
    t.push(row);
    t
}

fn solve(input: &InputArgs, alpha: f64, common: &CommonArgs) -> anyhow::Result<u8> {
    let (spec, sys, cfg) = prepare(input, common)?;
    if !(0.0..=1.0).contains(&alpha) {
        bail!("--alpha must lie in [0, 1], got {alpha}");
    }
    let start = initial_guess_with(&sys, cfg.nr.linear_solver.as_ref())?;
    let out = newton_solve(&sys, alpha, &start, &cfg.nr);
    if !out.converged {
        eprintln!(
            "no solution at alpha = {alpha}: {} after {} iterations (residual {:.3e})",
            out.failure.map_or("not converged", |f| f.label()),
            out.iterations,
            out.final_residual_norm
        );
        return Ok(EXIT_NO_SOLUTION);
    }
    let branches = branch_report(&spec, &sys, &out.phi, alpha, cfg.nr.delta_con)?;
    let summary = single_row(
        vec!["alpha", "iterations", "residual_norm"],
        vec![
            Cell::Alpha(alpha),
            Cell::Int(out.iterations as u64),
            Cell::Float(out.final_residual_norm),
        ],
    );
    let report = Report::default()
        .section("summary", summary)
        .section("potentials", potentials_table(&sys, &out.phi))
        .section("branches", branches.to_table());
    emit(&report.render(common.format), common.out.as_deref())?;
    Ok(EXIT_OK)
}

fn search(input: &InputArgs, name: &str, common: &CommonArgs) -> anyhow::Result<u8> {
    let strat = strategy(name).ok_or_else(|| {
        anyhow!(
            "unknown strategy {name:?} (available: {})",
            strategy_names().collect::<Vec<_>>().join(", ")
        )
    })?;
    let (spec, sys, cfg) = prepare(input, common)?;
    let res = strat.search(&sys, &cfg)?;
    let branches = branch_report(&spec, &sys, &res.phi_hat, res.alpha_hat, cfg.nr.delta_con)?;
    let summary = single_row(
        vec![
            "strategy",
            "alpha_hat",
            "fully_supplied",
            "outer_iterations",
            "bisections",
            "adaptations",
            "nr_budget",
        ],
        vec![
            Cell::text(res.strategy),
            Cell::Alpha(res.alpha_hat),
            Cell::Bool(res.fully_supplied),
            Cell::Int(res.outer_iterations as u64),
            Cell::Int(res.bisections as u64),
            Cell::Int(res.adaptations as u64),
            Cell::Int(res.final_nr_budget as u64),
        ],
    );
    let report = Report::default()
        .section("summary", summary)
        .section("potentials", potentials_table(&sys, &res.phi_hat))
        .section("branches", branches.to_table());
    emit(&report.render(common.format), common.out.as_deref())?;
    Ok(EXIT_OK)
}

fn sweep(input: &InputArgs, points: usize, cold: bool, common: &CommonArgs) -> anyhow::Result<u8> {
    if points == 0 {
        bail!("--grid needs at least one point");
    }
    let (_, sys, cfg) = prepare(input, common)?;
    let mode = if cold {
        SweepMode::ColdParallel
    } else {
        SweepMode::WarmSequential
    };
    let grid = if points == 1 {
        vec![0.0]
    } else {
        dichotomy_grid(1.0, points)
    };
    let rep = alpha_sweep_with(&sys, &grid, &cfg.nr, mode)?;
    let report = Report::default().section("sweep", rep.to_table());
    emit(&report.render(common.format), common.out.as_deref())?;
    Ok(EXIT_OK)
}

fn scenario(name: Option<&str>, out: Option<&std::path::Path>) -> anyhow::Result<u8> {
    let Some(name) = name else {
        let mut t = Table::new(vec!["name", "description"]);
        for n in scenarios::scenario_names() {
            let sc = scenarios::scenario(n).expect("listed name resolves");
            t.push(vec![Cell::text(n), Cell::text(sc.description())]);
        }
        emit(&t.to_text(), out)?;
        return Ok(EXIT_OK);
    };
    let sc = scenarios::scenario(name).ok_or_else(|| anyhow!("unknown scenario {name:?}"))?;
    let mut text = sc.build().to_json_pretty();
    text.push('\n');
    emit(&text, out)?;
    Ok(EXIT_OK)
}

fn timeline(
    params: &RouteParams,
    constant_power: Option<f64>,
    common: &CommonArgs,
) -> anyhow::Result<u8> {
    let cfg = search_config(common)?;
    let steps: Vec<TimelineStep> = match constant_power {
        Some(p) => {
            let n = (params.route_length / params.intersection_spacing).round() as usize;
            let positions: Vec<f64> = (0..=n)
                .map(|k| k as f64 * params.intersection_spacing)
                .collect();
            constant_demand_sweep(params, p, &positions, &cfg)?
        }
        None => straight_route_timeline(params, &cfg)?,
    };
    let mut t = Table::new(vec![
        "time_s",
        "position_m",
        "speed_mps",
        "demanded_w",
        "alpha_hat",
        "received_w",
        "deficit_j",
    ]);
    for s in &steps {
        t.push(vec![
            Cell::Float(s.time),
            Cell::Float(s.position),
            Cell::Float(s.speed),
            Cell::Float(s.demanded),
            Cell::Alpha(s.alpha_hat),
            Cell::Float(s.received),
            Cell::Float(s.deficit_energy),
        ]);
    }
    let summary = single_row(
        vec!["steps", "min_alpha", "deficit_j"],
        vec![
            Cell::Int(steps.len() as u64),
            Cell::Alpha(steps.iter().map(|s| s.alpha_hat).fold(1.0, f64::min)),
            Cell::Float(steps.iter().map(|s| s.deficit_energy).sum()),
        ],
    );
    let report = Report::default()
        .section("summary", summary)
        .section("timeline", t);
    emit(&report.render(common.format), common.out.as_deref())?;
    Ok(EXIT_OK)
}

fn verify(input: &InputArgs, points: usize, common: &CommonArgs) -> anyhow::Result<u8> {
    let (_, sys, cfg) = prepare(input, common)?;
    let res = search_efficient(&sys, &cfg)?;
    let nr = cfg.nr.with_max_iters(res.final_nr_budget);
    let check = verify_dichotomy(&sys, res.alpha_hat, points, &nr)?;
    let summary = single_row(
        vec!["alpha_hat", "points_checked", "holds", "offending_alpha"],
        vec![
            Cell::Alpha(res.alpha_hat),
            Cell::Int(check.points_checked as u64),
            Cell::Bool(check.holds),
            check.offending_alpha.map_or(Cell::Empty, Cell::Alpha),
        ],
    );
    emit(
        &Report::default()
            .section("verify", summary)
            .render(common.format),
        common.out.as_deref(),
    )?;
    Ok(if check.holds {
        EXIT_OK
    } else {
        EXIT_NOT_AN_INTERVAL
    })
}
