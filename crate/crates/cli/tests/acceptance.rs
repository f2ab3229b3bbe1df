//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! PASS/FAIL line per criterion and exits non-zero if any criterion fails.

use std::io::Write;
use std::process::{Command, ExitCode};
use std::time::Instant;

use contract_menu::exec::Rayon;
use contract_menu::parse_config;
use contract_menu::sweep::run_sweep;
use contract_menu_core::agent::{
    best_response_effort, build_contract, certainty_equivalent, imitation_effort, rent_integrand,
};
use contract_menu_core::solver::{
    effort_l_pch_slack, profit_with_binding_icch, second_best_effort, solve,
};
use contract_menu_core::verify::{dp_best_response, simulate_ce, DpSettings, McSettings};
use contract_menu_core::{AgentType, CostModel, ModelParams, Regime};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use AgentType::{High, Low};

const BENCH_CONFIG: &str = r#"{
    "model": { "theta_l": 1.0, "theta_h": 1.2, "rho": 1.0, "sigma": 1.0,
               "alpha": 0.5, "w_l": 0.0, "w_h": 0.0 },
    "cost": { "family": "quadratic", "kappa": 1.0 }
}"#;

fn bench() -> ModelParams {
    ModelParams {
        theta_l: 1.0,
        theta_h: 1.2,
        rho: 1.0,
        sigma: 1.0,
        alpha: 0.5,
        w_l: 0.0,
        w_h: 0.0,
        mu_max: 5.0,
    }
}

fn q1() -> CostModel {
    CostModel::quadratic(1.0).unwrap()
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn draw_cost(rng: &mut StdRng) -> CostModel {
    let kappa = rng.random_range(0.5..2.0);
    match rng.random_range(0..3) {
        0 => CostModel::quadratic(kappa).unwrap(),
        1 => CostModel::power(kappa, 2.0).unwrap(),
        _ => CostModel::power(kappa, rng.random_range(3.0..5.0)).unwrap(),
    }
}

fn draw_params(rng: &mut StdRng, alpha_lo: f64) -> ModelParams {
    let theta_l = rng.random_range(0.5..1.5);
    let w = rng.random_range(-0.2..0.0);
    ModelParams {
        theta_l,
        theta_h: theta_l * rng.random_range(1.05..2.0),
        rho: rng.random_range(0.2..3.0),
        sigma: rng.random_range(0.2..2.0),
        alpha: rng.random_range(alpha_lo..0.95),
        w_l: w,
        w_h: w,
        mu_max: 20.0,
    }
}

// Quadratic closed forms with kappa = 1, written out independently of the
// solver.
fn closed_forms(p: &ModelParams) -> (f64, f64, f64) {
    let mu_h = p.theta_h / (1.0 + p.rho * p.sigma.powi(2) / p.theta_h.powi(2));
    let ratio2 = (p.theta_h / p.theta_l).powi(2);
    let odds = p.alpha / (1.0 - p.alpha);
    let mu_l =
        p.theta_l / (1.0 + p.rho * p.sigma.powi(2) / p.theta_l.powi(2) + odds * (ratio2 - 1.0));
    let rent = (ratio2 - 1.0) * mu_l * mu_l / 2.0;
    (mu_h, mu_l, rent)
}

fn closed_form_equivalence() -> Outcome {
    let p = bench();
    let report = match solve(&q1(), &p) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("solve failed: {e}")),
    };
    let (mu_h, mu_l, rent) = closed_forms(&p);
    let errs = [
        (report.menu.mu_h_star - mu_h).abs(),
        (report.menu.mu_l_star - mu_l).abs(),
        (report.rent - rent).abs(),
    ];
    let worst = errs.iter().cloned().fold(0.0, f64::max);
    outcome(
        worst <= 1e-8,
        format!(
            "mu_H {:.10} mu_L {:.10} rent {:.10}; max error {worst:.2e} (tol 1e-8)",
            report.menu.mu_h_star, report.menu.mu_l_star, report.rent
        ),
    )
}

fn distortion() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let mut draws = 0;
    let mut strict = 0;
    let mut worst = f64::NEG_INFINITY;
    let mut failures = Vec::new();
    while draws < 50 {
        let model = draw_cost(&mut rng);
        let p = draw_params(&mut rng, 0.001);
        let Ok(Some(mu_l)) = effort_l_pch_slack(&model, &p) else {
            continue;
        };
        let sb = second_best_effort(&model, &p, Low).unwrap();
        draws += 1;
        worst = worst.max(mu_l - sb);
        let ok = if p.alpha >= 0.01 {
            strict += 1;
            mu_l < sb
        } else {
            mu_l <= sb + 1e-10
        };
        if !ok {
            failures.push(format!("{model:?} {p:?}: {mu_l} vs {sb}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{draws} draws ({strict} strict), max mu_L - mu_L^SB = {worst:.3e}{}",
            failures
                .first()
                .map(|f| format!("; first failure {f}"))
                .unwrap_or_default()
        ),
    )
}

fn orderings() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let mut failures = 0;
    let mut min_rent = f64::INFINITY;
    for _ in 0..100 {
        let model = draw_cost(&mut rng);
        let p = draw_params(&mut rng, 0.01);
        let mu_l = 10f64.powf(rng.random_range(-6.0..0.3));
        let mu_h = 10f64.powf(rng.random_range(-6.0..0.3));
        let hl = imitation_effort(&model, &p, mu_l, High, Low).unwrap();
        let rent = rent_integrand(&model, &p, mu_l).unwrap();
        let lh = imitation_effort(&model, &p, mu_h, Low, High).unwrap();
        min_rent = min_rent.min(rent);
        if !(hl > mu_l && rent > 0.0 && lh < mu_h) {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!(
            "100 draws, mu_L down to 1e-6; {failures} violations; smallest rent {min_rent:.3e}"
        ),
    )
}

fn binding_audit() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let mut menus: Vec<(CostModel, ModelParams)> = vec![
        (q1(), bench()),
        (
            q1(),
            ModelParams {
                w_h: 0.05,
                ..bench()
            },
        ),
        (CostModel::power(1.0, 3.0).unwrap(), bench()),
        (
            q1(),
            ModelParams {
                alpha: 0.999,
                theta_h: 2.0,
                w_l: 0.1,
                w_h: 0.1,
                ..bench()
            },
        ),
    ];
    for _ in 0..60 {
        let model = draw_cost(&mut rng);
        let mut p = draw_params(&mut rng, 0.01);
        p.w_h = p.w_l + rng.random_range(0.0..0.1);
        menus.push((model, p));
    }
    let mut solved = 0;
    let mut regimes = [0usize; 3];
    let mut unsupported = 0;
    let mut worst_binding: f64 = 0.0;
    let mut worst_slack = f64::INFINITY;
    let mut failures = 0;
    for (model, p) in &menus {
        let report = match solve(model, p) {
            Ok(r) => r,
            Err(contract_menu_core::Error::RegimeUnsupported { .. }) => {
                unsupported += 1;
                continue;
            }
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        solved += 1;
        let m = &report.menu;
        regimes[m.regime as usize] += 1;
        let ce = |agent, contract: &_| {
            certainty_equivalent(model, p, contract, agent)
                .unwrap()
                .value
        };
        let hh = ce(High, &m.contract_h);
        let lh = ce(Low, &m.contract_h);
        let (pc_l, icc_h, icc_l) = match &m.contract_l {
            Some(cl) => (ce(Low, cl) - p.w_l, hh - ce(High, cl), ce(Low, cl) - lh),
            None => (0.0, 0.0, p.w_l - lh),
        };
        let pc_h = hh - p.w_h;
        worst_binding = worst_binding.max(pc_l.abs()).max(icc_h.abs());
        worst_slack = worst_slack.min(icc_l).min(pc_h);
        if !(pc_l.abs() <= 1e-8 && icc_h.abs() <= 1e-8 && icc_l >= -1e-8 && pc_h >= -1e-8) {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!(
            "{solved} menus (slack {}, binding {}, excluded {}; {unsupported} regime-unsupported skipped); \
             max |binding slack| {worst_binding:.2e}, min inequality slack {worst_slack:.3e}",
            regimes[0], regimes[1], regimes[2]
        ),
    )
}

fn round_trip() -> Outcome {
    let costs = [q1(), CostModel::power(1.5, 3.0).unwrap()];
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for model in &costs {
        let p = bench();
        for agent in [High, Low] {
            for i in 0..10 {
                for j in 0..10 {
                    let mu = 0.05 + 0.2 * i as f64;
                    let w = -1.0 + 2.0 * j as f64 / 9.0;
                    let c = build_contract(model, &p, mu, w, agent).unwrap();
                    let effort = best_response_effort(model, &p, &c, agent).unwrap();
                    let value = certainty_equivalent(model, &p, &c, agent).unwrap().value;
                    worst = worst.max((effort - mu).abs()).max((value - w).abs());
                    count += 1;
                }
            }
        }
    }
    outcome(
        worst <= 1e-10,
        format!("{count} contracts, max error {worst:.2e} (tol 1e-10)"),
    )
}

fn benchmark_pairs() -> Vec<(AgentType, AgentType, contract_menu_core::LinearContract)> {
    let report = solve(&q1(), &bench()).unwrap();
    let cl = report.menu.contract_l.unwrap();
    let ch = report.menu.contract_h;
    vec![
        (High, High, ch),
        (Low, High, ch),
        (High, Low, cl),
        (Low, Low, cl),
    ]
}

fn dp_agreement() -> Outcome {
    let p = bench();
    let settings = DpSettings {
        n_steps: 50,
        ..DpSettings::with_spacing(p.mu_max, 1e-3)
    };
    let mut lines = Vec::new();
    let mut ok = true;
    for (agent, slot, contract) in benchmark_pairs() {
        let cf = certainty_equivalent(&q1(), &p, &contract, agent).unwrap();
        let dp = dp_best_response(&q1(), &p, &contract, agent, &settings).unwrap();
        let cell = dp.effort_spacing * (1.0 + 1e-9);
        let de = (dp.policy.initial() - cf.effort).abs();
        let dv = (dp.value_ce - cf.value).abs();
        let spread = dp.policy.spread();
        ok &= de <= cell && dv <= 2e-3 && spread <= cell;
        lines.push(format!(
            "{}/{} effort {de:.1e} value {dv:.1e} spread {spread:.1e}",
            agent.label(),
            slot.label()
        ));
    }
    outcome(
        ok,
        format!("cell 1e-3, value tol 2e-3: {}", lines.join("; ")),
    )
}

fn mc_agreement() -> Outcome {
    let p = bench();
    let settings = McSettings {
        n_paths: 1_000_000,
        n_steps: 50,
        seed: 20240601,
    };
    let mut lines = Vec::new();
    let mut ok = true;
    for (agent, slot, contract) in benchmark_pairs() {
        let cf = certainty_equivalent(&q1(), &p, &contract, agent).unwrap();
        let est = simulate_ce(&q1(), &p, &contract, agent, cf.effort, &settings, &Rayon).unwrap();
        let z = (est.ce - cf.value).abs() / est.std_error;
        ok &= z <= 3.0 && est.std_error < 2e-3;
        lines.push(format!(
            "{}/{} {z:.2} SE (SE {:.2e})",
            agent.label(),
            slot.label(),
            est.std_error
        ));
    }
    outcome(ok, format!("10^6 paths: {}", lines.join("; ")))
}

/// Quadratic through three points, evaluated at `x`.
fn extrapolate(points: &[(f64, f64)], x: f64) -> f64 {
    let mut total = 0.0;
    for (i, &(xi, yi)) in points.iter().enumerate() {
        let mut basis = 1.0;
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i != j {
                basis *= (x - xj) / (xi - xj);
            }
        }
        total += yi * basis;
    }
    total
}

fn regime_boundary() -> Outcome {
    let p = bench();
    let (_, _, rent) = closed_forms(&p);
    let boundary = p.w_l + rent;
    let text = BENCH_CONFIG.replace(
        "\"cost\"",
        "\"sweep\": { \"parameter\": \"w_h\", \"from\": 0.030, \"to\": 0.044, \"steps\": 141 },\n    \"cost\"",
    );
    let config = parse_config(&text).unwrap();
    let rows = run_sweep(&config).unwrap();
    let mut points = Vec::new();
    for row in &rows {
        match row.report() {
            Some(r) => points.push((row.value, r.menu.regime, r.menu.mu_l_star)),
            None => {
                return outcome(
                    false,
                    format!("point {} failed: {}", row.index, row.status()),
                )
            }
        }
    }
    let flips: Vec<usize> = (1..points.len())
        .filter(|&i| points[i].1 != points[i - 1].1)
        .collect();
    if flips.len() != 1 {
        return outcome(false, format!("{} regime flips", flips.len()));
    }
    let k = flips[0];
    let left: Vec<(f64, f64)> = points[k - 3..k].iter().map(|&(w, _, mu)| (w, mu)).collect();
    let right: Vec<(f64, f64)> = points[k..k + 3].iter().map(|&(w, _, mu)| (w, mu)).collect();
    let sides_ok = points[k - 1].1 == Regime::PchSlack && points[k].1 == Regime::PchBinding;
    let gap = (extrapolate(&left, boundary) - extrapolate(&right, boundary)).abs();
    let straddle = points[k - 1].0 < boundary && boundary <= points[k].0;
    outcome(
        sides_ok && straddle && gap <= 1e-7,
        format!(
            "one flip between w_H {:.4} and {:.4} (boundary {boundary:.7}); \
             one-sided limit gap {gap:.2e} (tol 1e-7); raw adjacent gap {:.2e}",
            points[k - 1].0,
            points[k].0,
            (points[k].2 - points[k - 1].2).abs()
        ),
    )
}

fn local_optimality() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let mut draws = 0;
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    while draws < 20 {
        let model = draw_cost(&mut rng);
        let p = draw_params(&mut rng, 0.01);
        let Ok(report) = solve(&model, &p) else {
            continue;
        };
        if report.menu.regime != Regime::PchSlack {
            continue;
        }
        draws += 1;
        let m = &report.menu;
        for delta in [-1e-2, 1e-2] {
            let mu = m.mu_l_star + delta;
            if mu < 0.0 {
                continue;
            }
            let perturbed = profit_with_binding_icch(&model, &p, m.mu_h_star, mu).unwrap();
            let margin = report.principal_profit - perturbed;
            worst = worst.min(margin);
            if margin < -1e-3 {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0,
        format!(
            "{draws} draws, smallest profit margin over mu_L +/- 1e-2: {worst:.3e} (tol -1e-3)"
        ),
    )
}

fn verify_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bench.json");
    std::fs::write(&config, BENCH_CONFIG).unwrap();
    let mut reports = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("verify-{run}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_contract-menu"))
            .args(["verify", "--seed", "7", "--paths", "200000"])
            .arg("--config")
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .env("CONTRACT_MENU_WORKERS", if run == 0 { "1" } else { "4" })
            .output()
            .unwrap();
        if !status.status.success() {
            return outcome(
                false,
                format!("verify exited with {:?}", status.status.code()),
            );
        }
        reports.push(std::fs::read(&out).unwrap());
    }
    outcome(
        reports[0] == reports[1],
        format!(
            "two verify runs (1 and 4 workers), {} bytes each, identical: {}",
            reports[0].len(),
            reports[0] == reports[1]
        ),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("1 quadratic closed forms", closed_form_equivalence),
        ("2 distortion at the bottom", distortion),
        ("3 imitation orderings", orderings),
        ("4 binding constraints", binding_audit),
        ("5 contract round trip", round_trip),
        ("6 dp oracle agreement", dp_agreement),
        ("7 monte carlo agreement", mc_agreement),
        ("8 regime boundary", regime_boundary),
        ("9 hamiltonian local optimum", local_optimality),
        ("10 verify determinism", verify_determinism),
    ];
    let mut stdout = std::io::stdout().lock();
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let result = run();
        failed += usize::from(!result.passed);
        let _ = writeln!(
            stdout,
            "{} {name} ({:.1}s): {}",
            if result.passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            result.detail
        );
        let _ = stdout.flush();
    }
    let _ = writeln!(stdout, "acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
