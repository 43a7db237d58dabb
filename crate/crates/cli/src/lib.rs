//! The `vsnopt` command line.
//!
//! [`run`] is the whole program minus process exit, so tests can drive it
//! in-process. Exit codes: 0 success, 1 infeasible instance or invalid plan,
//! 2 usage, I/O, schema or generation errors.

pub mod args;
pub mod plot;

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;
use vsnopt_core::experiments::{compare, csv_string, run_sweep, summary_table, SweepFamily};
use vsnopt_core::model::{plan_cost, validate_plan, Scenario};
use vsnopt_core::scenario::{
    generate, load_plan, load_scenario, save_plan, save_scenario, scenario_fingerprint,
    write_atomic, PlanFile, Preset,
};
use vsnopt_core::solver::{
    brute_force_with_cap, solve_exact_with, solve_traditional, BoundKind, ExactOptions,
    SolveResult, DEFAULT_BRUTE_CAP,
};

use args::{
    BaselineArgs, Cli, Command, CompareArgs, GenerateArgs, PlotArgs, SolveArgs, SweepArgs,
    ValidateArgs,
};
use plot::{render_svg, PlotOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Environment variable overriding the brute-force size cap.
pub const BRUTE_CAP_VAR: &str = "VSNOPT_BRUTE_CAP";

struct Failure {
    code: i32,
    message: String,
}

fn error(e: impl Display) -> Failure {
    Failure {
        code: EXIT_ERROR,
        message: e.to_string(),
    }
}

type Outcome = Result<i32, Failure>;

pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_ERROR
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Generate(a) => cmd_generate(a, out),
        Command::Solve(a) => cmd_solve(a, out),
        Command::Baseline(a) => cmd_baseline(a, out),
        Command::Validate(a) => cmd_validate(a, out),
        Command::Compare(a) => cmd_compare(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Plot(a) => cmd_plot(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn cmd_generate(a: &GenerateArgs, out: &mut dyn Write) -> Outcome {
    let preset = a.preset.unwrap_or(Preset::S1);
    let config = a.overrides.apply(preset.config(a.seed));
    let scenario = generate(&config).map_err(error)?;
    save_scenario(&scenario, &a.output).map_err(error)?;
    let _ = writeln!(
        out,
        "wrote {}: {} nodes, {} tasks, {}x{} m, seed {}",
        a.output.display(),
        scenario.nodes.len(),
        scenario.tasks.len(),
        scenario.area.width,
        scenario.area.height,
        a.seed
    );
    Ok(EXIT_OK)
}

fn brute_cap() -> Result<usize, Failure> {
    match std::env::var(BRUTE_CAP_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_BRUTE_CAP),
        Err(e) => Err(error(format!("{BRUTE_CAP_VAR}: {e}"))),
        Ok(v) => v.trim().parse().map_err(|_| {
            error(format!(
                "{BRUTE_CAP_VAR} must be a non-negative integer, got '{v}'"
            ))
        }),
    }
}

fn report_result(
    label: &str,
    result: &SolveResult,
    scenario: &Scenario,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let _ = writeln!(out, "{label}: {}", result.status);
    let (Some(plan), Some(cost)) = (&result.plan, &result.cost) else {
        let _ = writeln!(out, "no plan satisfies every constraint");
        return Ok(EXIT_INFEASIBLE);
    };
    let _ = writeln!(
        out,
        "cost: {} (physical {}, virtual {})",
        cost.total, cost.c_ps, cost.c_vs
    );
    let virtualized: Vec<String> = plan.virtualized.iter().map(|n| n.to_string()).collect();
    let _ = writeln!(out, "virtualized nodes: [{}]", virtualized.join(", "));
    let s = &result.stats;
    let _ = writeln!(
        out,
        "search: {} nodes, {} pruned, {} flow calls, {:.3} s",
        s.nodes_explored,
        s.bound_prunes,
        s.flow_calls,
        s.wall_time.as_secs_f64()
    );
    if let Some(path) = output {
        let file = PlanFile::new(plan, scenario).map_err(error)?;
        save_plan(&file, path).map_err(error)?;
        let _ = writeln!(out, "wrote {}", path.display());
    }
    Ok(EXIT_OK)
}

fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> Outcome {
    let scenario = load_scenario(&a.scenario).map_err(error)?;
    let result = if a.brute_force {
        brute_force_with_cap(&scenario, brute_cap()?).map_err(error)?
    } else {
        let bound = if a.plain_bound {
            BoundKind::Plain
        } else {
            BoundKind::Amortized
        };
        solve_exact_with(
            &scenario,
            &ExactOptions {
                bound,
                skip_warm_start: false,
            },
        )
    };
    report_result("status", &result, &scenario, a.output.as_deref(), out)
}

fn cmd_baseline(a: &BaselineArgs, out: &mut dyn Write) -> Outcome {
    let scenario = load_scenario(&a.scenario).map_err(error)?;
    let result = solve_traditional(&scenario);
    report_result("status", &result, &scenario, a.output.as_deref(), out)
}

fn cmd_validate(a: &ValidateArgs, out: &mut dyn Write) -> Outcome {
    let scenario = load_scenario(&a.scenario).map_err(error)?;
    let file = load_plan(&a.plan).map_err(error)?;
    let plan = file.plan();
    let fingerprint = scenario_fingerprint(&scenario);
    if file.scenario_ref != fingerprint {
        let _ = writeln!(
            out,
            "warning: plan was written for {}, this scenario is {}",
            file.scenario_ref, fingerprint
        );
    }
    let report = validate_plan(&plan, &scenario);
    for w in &report.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    if !report.is_ok() {
        let _ = writeln!(out, "INVALID: {} violation(s)", report.violations.len());
        for v in &report.violations {
            let _ = writeln!(out, "  {v}");
        }
        return Ok(EXIT_INFEASIBLE);
    }
    let cost = plan_cost(&plan, &scenario).map_err(error)?;
    if cost != file.recorded_cost() {
        let _ = writeln!(
            out,
            "INVALID: recorded cost {} does not match recomputed cost {}",
            file.recorded_cost().total,
            cost.total
        );
        return Ok(EXIT_INFEASIBLE);
    }
    let _ = writeln!(out, "OK: cost {}", cost.total);
    Ok(EXIT_OK)
}

fn fmt_opt<T: Display>(v: Option<T>, none: &str) -> String {
    v.map(|v| v.to_string()).unwrap_or_else(|| none.to_string())
}

fn cmd_compare(a: &CompareArgs, out: &mut dyn Write) -> Outcome {
    let scenario = load_scenario(&a.scenario).map_err(error)?;
    let r = compare(&scenario);
    let _ = writeln!(out, "scenario: {}", r.scenario_id);
    let _ = writeln!(
        out,
        "virtualized cost: {}",
        fmt_opt(r.virt_cost, "infeasible")
    );
    let _ = writeln!(
        out,
        "traditional cost: {}",
        fmt_opt(r.trad_cost, "infeasible")
    );
    let _ = writeln!(
        out,
        "nodes used: {} virtualized + {} physical vs {} traditional",
        r.nodes_virtualized,
        r.nodes_physical_mode,
        fmt_opt(r.nodes_used_trad, "-")
    );
    let _ = writeln!(
        out,
        "savings: {}",
        fmt_opt(
            r.savings_fraction.map(|f| format!("{:.1}%", 100.0 * f)),
            "-"
        )
    );
    let _ = writeln!(
        out,
        "node ratio: {}",
        fmt_opt(r.node_ratio.map(|f| format!("{f:.2}")), "-")
    );
    if let Some(path) = &a.csv {
        write_atomic(path, csv_string(std::slice::from_ref(&r)).as_bytes()).map_err(error)?;
    }
    Ok(if r.virt_cost.is_none() {
        EXIT_INFEASIBLE
    } else {
        EXIT_OK
    })
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Outcome {
    let presets = if a.preset.is_empty() {
        Preset::ALL.to_vec()
    } else {
        a.preset.clone()
    };
    let families: Vec<SweepFamily> = presets
        .iter()
        .map(|p| SweepFamily::new(p.name(), a.overrides.apply(p.config(0))))
        .collect();
    for f in &families {
        f.template.validate().map_err(error)?;
    }
    let report = run_sweep(&families, &a.seeds.seeds()).map_err(error)?;
    let table = summary_table(&report.aggregates);
    match &a.output {
        Some(path) => {
            write_atomic(path, table.as_bytes()).map_err(error)?;
            let _ = writeln!(out, "wrote {}", path.display());
        }
        None => {
            let _ = out.write_all(table.as_bytes());
        }
    }
    if let Some(path) = &a.csv {
        write_atomic(path, csv_string(&report.records).as_bytes()).map_err(error)?;
        let _ = writeln!(out, "wrote {}", path.display());
    }
    Ok(EXIT_OK)
}

fn cmd_plot(a: &PlotArgs, out: &mut dyn Write) -> Outcome {
    let scenario = load_scenario(&a.scenario).map_err(error)?;
    let plan = match &a.plan {
        Some(path) => Some(load_plan(path).map_err(error)?.plan()),
        None => None,
    };
    let svg = render_svg(
        &scenario,
        plan.as_ref(),
        PlotOptions {
            range_circles: !a.no_range_circles,
        },
    )
    .map_err(|e| Failure {
        code: EXIT_INFEASIBLE,
        message: e.to_string(),
    })?;
    write_atomic(&a.output, svg.as_bytes()).map_err(error)?;
    let _ = writeln!(out, "wrote {}", a.output.display());
    Ok(EXIT_OK)
}
