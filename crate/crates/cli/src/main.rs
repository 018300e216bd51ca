//! Scenario-driven front end: load a JSON scenario, validate assumptions,
//! run analysis / simulation / certificate checks, emit CSV and JSON files.
//!
//! Exit codes: 0 pass, 1 runtime error (or a failed verdict), 2 assumption
//! or inequality violation, 3 certificate search gave up ("not certified").

use std::collections::VecDeque;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};

use kpp_core::dynamics::{guard_start, run, Grid, InitialData, SnapshotRecorder};
use kpp_core::fronts::{
    default_burn_in, fit_speed, theoretical_envelope, verdict, FrontTracker, TailClass,
};
use kpp_core::scenario::{apply_overrides, CheckKind, Lab, Scenario};
use kpp_core::speed::{c_autonomous, c_truncated};
use kpp_core::verify::{
    comparison_test, dominating_amplitude, persistence_diagnostics, positivity_test,
    random_ordered_pairs, residual, search_cosine_witness, search_two_exp_witness, Adjuster,
    CandidateSolution, CertStatus, ResidualParams,
};
use kpp_core::Error;

const EXIT_PASS: i32 = 0;
const EXIT_RUNTIME: i32 = 1;
const EXIT_VIOLATION: i32 = 2;
const EXIT_NOT_CERTIFIED: i32 = 3;

#[derive(Parser)]
#[command(
    name = "nonlocal-kpp",
    version,
    about = "Spreading-speed analysis and simulation for nonlocal KPP dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Scenario JSON file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (files land in OUT/<scenario name>/).
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override a leaf field by dotted path, e.g. --set grid.n=4096.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Number of rows in speed_curve.csv.
    #[arg(long)]
    lambda_grid: Option<usize>,
    /// Seed override for randomized checks.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Speed curve, minimizer, truncated-speed ladder, assumption report.
    Speeds(Common),
    /// Evolve the field, track fronts, compare against the envelopes.
    Simulate(Common),
    /// Residual certificates plus comparison/positivity tests.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Also run deliberately broken sub-solution constants; the
        /// expected outcome is a "violated" report (exit 2).
        #[arg(long)]
        perturb: bool,
    },
    /// Run several scenarios across worker threads (NONLOCAL_KPP_THREADS
    /// caps the pool), one output directory each.
    Sweep {
        /// Scenario JSON files (repeatable).
        #[arg(long = "config", required = true)]
        configs: Vec<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Summarize the JSON outputs under a directory.
    Report { dir: PathBuf },
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Speeds(c) => with_scenario(&c, cmd_speeds),
        Command::Simulate(c) => with_scenario(&c, |sc, dir| cmd_simulate(sc, dir, false)),
        Command::Verify { common, perturb } => {
            with_scenario(&common, |sc, dir| cmd_verify(sc, dir, perturb))
        }
        Command::Sweep { configs, out } => cmd_sweep(&configs, &out),
        Command::Report { dir } => cmd_report(&dir),
    };
    std::process::exit(code);
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::AssumptionViolation(_) => EXIT_VIOLATION,
        Error::NotCertified(_) => EXIT_NOT_CERTIFIED,
        _ => EXIT_RUNTIME,
    }
}

fn with_scenario<F: FnOnce(Scenario, &Path) -> Result<i32, Error>>(common: &Common, f: F) -> i32 {
    let scenario = match load_scenario(common) {
        Ok(sc) => sc,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let dir = common.out.join(&scenario.name);
    if let Err(e) = std::fs::create_dir_all(&dir) {
        eprintln!("error: cannot create {}: {e}", dir.display());
        return EXIT_RUNTIME;
    }
    match f(scenario, &dir) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::DomainExhausted { .. } = e {
                eprintln!("hint: widen the grid (raise grid.x_max) or shorten t_end");
            }
            if let Error::Stability { dt_stable, .. } = e {
                eprintln!("hint: set dt below {dt_stable}");
            }
            exit_code(&e)
        }
    }
}

fn load_scenario(common: &Common) -> Result<Scenario, Error> {
    let text = std::fs::read_to_string(&common.config)?;
    let mut doc: serde_json::Value = serde_json::from_str(&text)?;
    apply_overrides(&mut doc, &common.sets)?;
    let mut scenario: Scenario = serde_json::from_value(doc)?;
    if let Some(n) = common.lambda_grid {
        scenario.lambda_grid = n;
    }
    if let Some(seed) = common.seed {
        scenario.seed = seed;
    }
    scenario.validate()?;
    Ok(scenario)
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), Error> {
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(&path, text)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<(), Error> {
    let path = dir.join(name);
    std::fs::write(&path, text)?;
    println!("wrote {}", path.display());
    Ok(())
}

// ---------------------------------------------------------------- speeds --

fn cmd_speeds(scenario: Scenario, dir: &Path) -> Result<i32, Error> {
    let lab = Lab::prepare(scenario)?;
    let sc = &lab.scenario;

    let mut curve_csv = String::from("lambda,speed\n");
    let mut summary = serde_json::json!({
        "name": sc.name,
        "kbar": sc.kernel.mass(),
        "sigma": finite_or_null(sc.kernel.abscissa()),
        "mu_least_mean": lab.least_mean.value,
        "least_mean": lab.least_mean,
        "assumptions": lab.assumptions,
    });

    if let Ok(curve) = lab.curve() {
        for (l, v) in &curve.samples {
            curve_csv.push_str(&format!("{l},{v}\n"));
        }
        summary["lambda_star"] = serde_json::json!(curve.lambda_star);
        summary["c_star"] = serde_json::json!(curve.c_star);
        summary["star_interior"] = serde_json::json!(curve.star_interior);

        // Truncated-speed ladder at γ = λ*.
        let mut ladder = Vec::new();
        for rb in [12.5, 25.0, 50.0, 100.0] {
            if let Ok(v) = c_truncated(&sc.kernel, curve.lambda_star, rb, rb) {
                ladder.push(serde_json::json!({"r": rb, "b": rb, "value": v}));
            }
        }
        summary["c_rb_ladder"] = serde_json::json!(ladder);

        // Minorant speed c₀ with m = k̄ + ⌊μ⌋ − K̄, shrinking δ until the
        // kernel stays positive on [−δ, δ].
        for delta in [1.0, 0.5, 0.25, 0.125] {
            if let Ok(minorant) = sc.kernel.minorant(delta) {
                let m = minorant.mass() + lab.least_mean.value - sc.kernel.mass();
                if m > 0.0 {
                    let c0 = c_autonomous(&minorant, m)?;
                    summary["c0_minorant"] = serde_json::json!({
                        "delta": delta,
                        "amplitude": minorant.amplitude,
                        "kbar": minorant.mass(),
                        "m": m,
                        "c0": c0,
                    });
                    break;
                }
            }
        }
    }

    write_text(dir, "speed_curve.csv", &curve_csv)?;
    write_json(dir, "summary.json", &summary)?;

    if !lab.assumptions.all_pass {
        let failed: Vec<&str> = lab
            .assumptions
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        eprintln!("assumption check failed: {}", failed.join(", "));
        return Ok(EXIT_VIOLATION);
    }
    Ok(EXIT_PASS)
}

fn finite_or_null(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else {
        serde_json::Value::Null
    }
}

// -------------------------------------------------------------- simulate --

fn cmd_simulate(scenario: Scenario, dir: &Path, force_persistence: bool) -> Result<i32, Error> {
    let want_persistence = force_persistence || scenario.checks.contains(&CheckKind::Persistence);
    let lab = Lab::prepare(scenario)?;
    let sc = &lab.scenario;
    if !lab.assumptions.all_pass {
        write_json(dir, "assumptions.json", &lab.assumptions)?;
        eprintln!("assumption check failed; not simulating");
        return Ok(EXIT_VIOLATION);
    }
    let curve = lab.curve()?;
    let grid = sc.grid.build()?;
    let nl = lab.nl.clone();

    let mut tracker = FrontTracker::new(&sc.thresholds, guard_start(&sc.kernel, grid));
    let mut snaps = SnapshotRecorder::default();
    let need_snaps = sc.snapshots || want_persistence;

    let (final_field, summary) = {
        let mut observers: Vec<&mut dyn kpp_core::dynamics::Observer> = vec![&mut tracker];
        if need_snaps {
            observers.push(&mut snaps);
        }
        run(&sc.kernel, &nl, &sc.initial, grid, sc.t_end, sc.dt, sc.stride, &mut observers)?
    };

    // Front CSV across all thresholds.
    let mut fronts_csv = String::from("t,theta,x\n");
    for trace in &tracker.traces {
        for (t, x) in &trace.points {
            fronts_csv.push_str(&format!("{t},{},{x}\n", trace.theta));
        }
    }
    write_text(dir, "fronts.csv", &fronts_csv)?;

    if sc.t_end <= 0.0 {
        // Nothing evolved: emit the initial snapshot and stop.
        let mut csv = String::from("t,x,u\n");
        for i in 0..final_field.grid.n {
            csv.push_str(&format!("0,{},{}\n", final_field.grid.x(i), final_field.values[i]));
        }
        write_text(dir, "snapshots.csv", &csv)?;
        println!("t_end = 0: wrote the initial state only");
        return Ok(EXIT_PASS);
    }

    let theta0 = sc.thresholds.first().copied().unwrap_or(0.5);
    let trace = tracker
        .trace(theta0)
        .ok_or_else(|| Error::InsufficientData("no trace for the first threshold".into()))?;

    let tail = match sc.initial.tail_rate() {
        Some(rate) if rate < curve.lambda_star => TailClass::Exponential { rate },
        _ => TailClass::Compact,
    };
    let times: Vec<f64> = trace.points.iter().map(|p| p.0).collect();
    let envelopes = theoretical_envelope(curve, &sc.coefficient, tail, &times)?;
    let mut env_csv = String::from("t,upper,lower\n");
    for (i, t) in envelopes.times.iter().enumerate() {
        env_csv.push_str(&format!("{t},{},{}\n", envelopes.upper[i], envelopes.lower[i]));
    }
    write_text(dir, "envelope.csv", &env_csv)?;

    let burn_in = default_burn_in(sc.kernel.mass(), sc.t_end);
    let fit = fit_speed(trace, burn_in.max(0.5 * sc.t_end), sc.t_end)?;
    let eta = sc.eta_fraction * curve.c_star;
    let tol = sc.tolerance_fraction * curve.c_star;
    let v = verdict(
        trace,
        &envelopes,
        eta,
        tol,
        burn_in,
        &fit,
        Some(&final_field),
        sc.level_tolerance,
    );

    let vjson = serde_json::json!({
        "verdict": v,
        "fit": fit,
        "lambda_star": curve.lambda_star,
        "c_star": curve.c_star,
        "tail": tail,
        "run": summary,
    });
    write_json(dir, "verdict.json", &vjson)?;

    if want_persistence {
        let report = persistence_diagnostics(&snaps.snapshots, trace, 0.1)?;
        write_json(dir, "persistence.json", &report)?;
    }

    if sc.snapshots {
        let mut csv = String::from("t,x,u\n");
        for field in &snaps.snapshots {
            for i in 0..field.grid.n {
                csv.push_str(&format!("{},{},{}\n", field.t, field.grid.x(i), field.values[i]));
            }
        }
        write_text(dir, "snapshots.csv", &csv)?;
        let sidecar = serde_json::json!({
            "grid": sc.grid,
            "kernel": sc.kernel,
            "coefficient": sc.coefficient,
            "nonlinearity": sc.nonlinearity,
            "dt": sc.dt,
            "stride": sc.stride,
        });
        write_json(dir, "snapshots.meta.json", &sidecar)?;
    }

    if v.pass {
        println!("verdict: pass (fitted slope {:.4})", fit.slope);
        Ok(EXIT_PASS)
    } else {
        eprintln!("verdict: fail");
        Ok(EXIT_RUNTIME)
    }
}

// ---------------------------------------------------------------- verify --

fn cmd_verify(scenario: Scenario, dir: &Path, perturb: bool) -> Result<i32, Error> {
    let lab = Lab::prepare(scenario)?;
    let sc = &lab.scenario;
    if !lab.assumptions.all_pass {
        write_json(dir, "assumptions.json", &lab.assumptions)?;
        eprintln!("assumption check failed; not verifying");
        return Ok(EXIT_VIOLATION);
    }
    let curve = lab.curve()?;
    let nl = &lab.nl;
    let kernel = &sc.kernel;
    let mut worst = EXIT_PASS;

    // Super-solution certificate for the scenario's initial data.
    let lambda_init = sc.initial.tail_rate().unwrap_or(curve.lambda_star);
    let l_eff = lambda_init.min(curve.lambda_star);
    let amp = dominating_amplitude(&sc.initial, l_eff, sc.grid.x_min, sc.grid.x_max);
    let cand = CandidateSolution::supersolution_exp(amp, lambda_init, curve, &sc.coefficient)?;
    let xi0 = amp.ln() / l_eff;
    let super_report = residual(
        kernel,
        nl,
        &cand,
        &ResidualParams {
            t_lo: 0.0,
            t_hi: 10.0,
            xi_lo: xi0 - 2.0,
            xi_hi: xi0 + 50.0 / l_eff.min(1.0),
            nt: 200,
            nx: 200,
        },
    )?;
    if super_report.status != CertStatus::Certified {
        worst = worst.max(EXIT_VIOLATION);
    }

    // Sub-solution witnesses.
    let gamma = 0.9 * curve.lambda_star;
    let cosine = search_cosine_witness(kernel, nl, curve, gamma);
    let lambda_slow = match sc.initial.tail_rate() {
        Some(rate) if rate < curve.lambda_star => rate,
        _ => 0.5 * curve.lambda_star,
    };
    let two_exp = search_two_exp_witness(kernel, nl, curve, lambda_slow);

    // Comparison principle on a dedicated desk-scale grid.
    let cgrid = Grid::new(-60.0, 140.0, 2048)?;
    let cdt = sc.dt.min(0.8 * kpp_core::dynamics::dt_stable(kernel, nl));
    let mut comparisons = Vec::new();
    let mut comparison_pass = true;
    for (lo, hi) in random_ordered_pairs(sc.seed, 20, -40.0, 100.0) {
        let report = comparison_test(kernel, nl, &lo, &hi, cgrid, 20.0, cdt, 20)?;
        comparison_pass &= report.pass;
        comparisons.push(report);
    }
    if !comparison_pass {
        worst = worst.max(EXIT_VIOLATION);
    }

    // Strict positivity.
    let pgrid = Grid::new(-60.0, 80.0, 1024)?;
    let positivity =
        positivity_test(kernel, nl, &InitialData::compact_bump(6.0, 0.5), pgrid, 1.0, cdt)?;
    if !positivity.pass && !positivity.skipped {
        worst = worst.max(EXIT_VIOLATION);
    }

    // Optional deliberate perturbation: h beyond its admissible rule breaks
    // the two-exponential margin and must be reported as violated.
    let perturbed = if perturb {
        let l = lambda_slow;
        let sigma = kernel.abscissa();
        let h_bad = if sigma.is_finite() {
            (4.0 * (curve.lambda_star - l)).min(0.9 * (sigma - l))
        } else {
            4.0 * (curve.lambda_star - l)
        };
        let bad = CandidateSolution::subsolution_two_exp(
            kernel,
            l,
            h_bad,
            Adjuster::Zero,
            0.0,
            0.0,
            &sc.coefficient,
        )?;
        let report = residual(
            kernel,
            nl,
            &bad,
            &ResidualParams {
                t_lo: 0.0,
                t_hi: 5.0,
                xi_lo: 0.0,
                xi_hi: 40.0 / l,
                nt: 16,
                nx: 640,
            },
        )?;
        Some(report)
    } else {
        None
    };

    let report = serde_json::json!({
        "supersolution": {
            "amplitude": amp,
            "lambda": lambda_init,
            "report": super_report,
        },
        "cosine_witness": match &cosine {
            Ok((cand, search)) => {
                serde_json::json!({"found": true, "candidate": cand, "search": search})
            }
            Err(e) => serde_json::json!({"found": false, "error": e.to_string()}),
        },
        "two_exp_witness": match &two_exp {
            Ok((cand, search)) => {
                serde_json::json!({"found": true, "candidate": cand, "search": search})
            }
            Err(e) => serde_json::json!({"found": false, "error": e.to_string()}),
        },
        "comparison": comparisons,
        "positivity": positivity,
        "perturbed": perturbed,
    });
    write_json(dir, "verify.json", &report)?;

    match (&cosine, &two_exp) {
        (Err(Error::NotCertified(_)), _) | (_, Err(Error::NotCertified(_))) => {
            worst = worst.max(EXIT_NOT_CERTIFIED);
        }
        (Err(_), _) | (_, Err(_)) => worst = worst.max(EXIT_RUNTIME),
        _ => {}
    }
    if let Some(p) = &perturbed {
        if p.status == CertStatus::Violated {
            println!(
                "perturbed constants violated as expected at (t,x) = ({:.3}, {:.3})",
                p.extremum.0, p.extremum.1
            );
            worst = worst.max(EXIT_VIOLATION);
        } else {
            eprintln!("perturbed constants unexpectedly not violated");
            worst = worst.max(EXIT_RUNTIME);
        }
    }
    Ok(worst)
}

// ----------------------------------------------------------------- sweep --

fn run_checks(scenario: Scenario, dir: &Path) -> i32 {
    let mut checks = scenario.checks.clone();
    if checks.is_empty() {
        checks = vec![CheckKind::Assumptions, CheckKind::Speeds, CheckKind::Simulate];
    }
    let mut worst = EXIT_PASS;
    for check in checks {
        let sc = scenario.clone();
        let outcome = match check {
            CheckKind::Assumptions | CheckKind::Speeds => cmd_speeds(sc, dir),
            CheckKind::Simulate => cmd_simulate(sc, dir, false),
            CheckKind::Persistence => cmd_simulate(sc, dir, true),
            CheckKind::Verify => cmd_verify(sc, dir, false),
        };
        match outcome {
            Ok(code) => worst = worst.max(code),
            Err(e) => {
                eprintln!("{}: {e}", scenario.name);
                worst = worst.max(exit_code(&e));
            }
        }
    }
    worst
}

fn cmd_sweep(configs: &[PathBuf], out: &Path) -> i32 {
    let mut scenarios = Vec::new();
    for path in configs {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error reading {}: {e}", path.display());
                return EXIT_RUNTIME;
            }
        };
        match Scenario::from_json(&text) {
            Ok(sc) => scenarios.push(sc),
            Err(e) => {
                eprintln!("error in {}: {e}", path.display());
                return EXIT_RUNTIME;
            }
        }
    }

    let workers = std::env::var("NONLOCAL_KPP_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(2))
        .clamp(1, scenarios.len().max(1));

    let queue: Mutex<VecDeque<Scenario>> = Mutex::new(scenarios.into());
    let results: Mutex<Vec<(String, i32)>> = Mutex::new(Vec::new());

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let scenario = match queue.lock().unwrap().pop_front() {
                    Some(sc) => sc,
                    None => break,
                };
                let name = scenario.name.clone();
                let dir = out.join(&name);
                let code = match std::fs::create_dir_all(&dir) {
                    Ok(()) => run_checks(scenario, &dir),
                    Err(e) => {
                        eprintln!("{name}: cannot create {}: {e}", dir.display());
                        EXIT_RUNTIME
                    }
                };
                results.lock().unwrap().push((name, code));
            });
        }
    });

    let mut results = results.into_inner().unwrap();
    results.sort();
    let mut worst = EXIT_PASS;
    for (name, code) in &results {
        println!("{name}: {}", if *code == 0 { "pass" } else { "FAIL" });
        worst = worst.max(*code);
    }
    worst
}

// ---------------------------------------------------------------- report --

fn cmd_report(dir: &Path) -> i32 {
    let mut rows = Vec::new();
    let mut dirs = vec![dir.to_path_buf()];
    if let Ok(entries) = std::fs::read_dir(dir) {
        for entry in entries.flatten() {
            if entry.path().is_dir() {
                dirs.push(entry.path());
            }
        }
    }
    dirs.sort();
    for d in dirs {
        let name = d
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| d.display().to_string());
        let mut row = serde_json::json!({ "name": name });
        let mut seen = false;
        if let Ok(text) = std::fs::read_to_string(d.join("summary.json")) {
            if let Ok(v) = text.parse::<serde_json::Value>() {
                row["c_star"] = v.get("c_star").cloned().unwrap_or(serde_json::Value::Null);
                row["lambda_star"] =
                    v.get("lambda_star").cloned().unwrap_or(serde_json::Value::Null);
                row["assumptions_pass"] = v
                    .pointer("/assumptions/all_pass")
                    .cloned()
                    .unwrap_or(serde_json::Value::Null);
                seen = true;
            }
        }
        if let Ok(text) = std::fs::read_to_string(d.join("verdict.json")) {
            if let Ok(v) = text.parse::<serde_json::Value>() {
                row["verdict_pass"] =
                    v.pointer("/verdict/pass").cloned().unwrap_or(serde_json::Value::Null);
                row["fitted_slope"] =
                    v.pointer("/fit/slope").cloned().unwrap_or(serde_json::Value::Null);
                seen = true;
            }
        }
        if let Ok(text) = std::fs::read_to_string(d.join("verify.json")) {
            if let Ok(v) = text.parse::<serde_json::Value>() {
                row["supersolution_status"] = v
                    .pointer("/supersolution/report/status")
                    .cloned()
                    .unwrap_or(serde_json::Value::Null);
                row["cosine_found"] = v
                    .pointer("/cosine_witness/found")
                    .cloned()
                    .unwrap_or(serde_json::Value::Null);
                seen = true;
            }
        }
        if seen {
            rows.push(row);
        }
    }

    if rows.is_empty() {
        eprintln!("no results under {}", dir.display());
        return EXIT_RUNTIME;
    }

    let mut all_pass = true;
    for row in &rows {
        let verdict_ok = row.get("verdict_pass").map(|v| v != false).unwrap_or(true);
        let assum_ok = row.get("assumptions_pass").map(|v| v != false).unwrap_or(true);
        let pass = verdict_ok && assum_ok;
        all_pass &= pass;
        println!(
            "{:<24} {}  c*={} slope={}",
            row["name"].as_str().unwrap_or("?"),
            if pass { "pass" } else { "FAIL" },
            row.get("c_star").unwrap_or(&serde_json::Value::Null),
            row.get("fitted_slope").unwrap_or(&serde_json::Value::Null),
        );
    }
    let aggregate = serde_json::json!({"results": rows, "pass": all_pass});
    let path = dir.join("report.json");
    match serde_json::to_string_pretty(&aggregate) {
        Ok(mut text) => {
            text.push('\n');
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_RUNTIME;
            }
            println!("wrote {}", path.display());
        }
        Err(e) => {
            eprintln!("serialization error: {e}");
            return EXIT_RUNTIME;
        }
    }
    if all_pass {
        EXIT_PASS
    } else {
        EXIT_RUNTIME
    }
}
