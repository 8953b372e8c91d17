//! Acceptance criteria 1 to 11. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails. Expected values are recomputed here
//! from closed forms, independently of the library's bound code.

#![allow(clippy::approx_constant)]

use std::f64::consts::SQRT_2;
use std::process::ExitCode;

use rppa_core::bounds::Measure;
use rppa_core::certify::{
    build_certificate_matrix, default_starts, default_sweep_schedules, first_exit_from_linear_branch,
    gd_certificate_check, gd_upper_bound_sweep, qp_table, random_prox_instance, random_smooth_instance,
    rppa_certificate_check, run_suite, upper_bound_sweep, worst_instance, worst_instance_gd_huber, Suite,
};
use rppa_core::math::{gaussian_vector, seeded_rng, IdentityResidual};
use rppa_core::prox::{catalog, SmoothInstance, SmoothKind};
use rppa_core::schedule::{silver_constants, Schedule};
use rppa_core::solver::{gd_measures, measures, run_gd, run_rppa, MeasureReport};
use rppa_core::{Result, Vector};

const TIGHT_TOL: f64 = 1e-9;

fn rho_pow(m: u32) -> f64 {
    (1.0 + SQRT_2).powi(m as i32)
}

/// `T_m = gamma_m^2` with `gamma_m` the positive root of `g^2 = g + rho^m`.
fn t_m(m: u32) -> f64 {
    let g = 0.5 * (1.0 + (1.0 + 4.0 * rho_pow(m)).sqrt());
    g * g
}

/// Partial sums of the TV schedule, each step found by bisection on
/// `a^2 + A a - 2 (1 + A) = 0` over `[sqrt 2, 2]`.
fn tv_total(n: usize) -> f64 {
    let mut total = 0.0f64;
    for k in 0..n {
        let alpha = if k == 0 {
            SQRT_2
        } else {
            let p = |a: f64| a * a + total * a - 2.0 * (1.0 + total);
            let (mut lo, mut hi) = (SQRT_2, 2.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if p(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        total += alpha;
    }
    total
}

#[derive(Default)]
struct Tally {
    checked: usize,
    worst: f64,
    failures: Vec<String>,
}

impl Tally {
    fn fail(&mut self, what: String) {
        if self.failures.len() < 5 {
            self.failures.push(what);
        } else if self.failures.len() == 5 {
            self.failures.push("...".into());
        }
    }

    fn gap(&mut self, achieved: f64, expected: f64, tol: f64, what: impl FnOnce() -> String) {
        let g = (achieved - expected).abs() / expected.abs().max(f64::MIN_POSITIVE);
        self.checked += 1;
        self.worst = self.worst.max(g);
        if g.is_nan() || g > tol {
            self.fail(format!(
                "{}: achieved {achieved:e}, expected {expected:e}, rel_gap {g:e}",
                what()
            ));
        }
    }

    fn flag(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn identity(&mut self, res: &IdentityResidual, what: impl FnOnce() -> String) {
        let scale = 1f64.max(res.lhs.abs()).max(res.rhs.abs());
        self.checked += 1;
        self.worst = self.worst.max(res.rel_gap);
        if !(res.rel_gap <= TIGHT_TOL && res.lhs >= -TIGHT_TOL * scale) {
            self.fail(format!(
                "{}: lhs {:e} rhs {:e} rel_gap {:e}",
                what(),
                res.lhs,
                res.rhs,
                res.rel_gap
            ));
        }
    }
}

fn rppa_report(schedule: &Schedule, lambda: f64, measure: Measure) -> Result<MeasureReport> {
    let (inst, x0) = worst_instance(schedule, lambda, measure)?;
    let trace = run_rppa(&inst, lambda, schedule, &x0)?;
    measures(&trace, &inst)
}

fn criterion_1(t: &mut Tally) -> Result<()> {
    for alpha in [0.25, 0.5, 1.0, 1.2, SQRT_2] {
        for n in [1usize, 2, 5, 10, 100, 1000] {
            for lambda in [0.1, 1.0, 10.0] {
                let s = Schedule::constant(alpha, n)?;
                let base = lambda * (alpha * n as f64 + 1.0);
                let r = rppa_report(&s, lambda, Measure::FvalOverDistSq)?;
                t.gap(r.fval_residual / r.init_dist_sq, 1.0 / (4.0 * base), TIGHT_TOL, || {
                    format!("fval alpha={alpha} N={n} lambda={lambda}")
                });
                let r = rppa_report(&s, lambda, Measure::SubgradOverDist)?;
                t.gap(r.subgrad_norm / r.init_dist_sq.sqrt(), 1.0 / base, TIGHT_TOL, || {
                    format!("subgrad alpha={alpha} N={n} lambda={lambda}")
                });
            }
        }
    }
    Ok(())
}

fn criterion_2(t: &mut Tally) -> Result<()> {
    for n in (1..=10).chain([100, 1000]) {
        let s = Schedule::tv(n)?;
        let r = rppa_report(&s, 1.0, Measure::FvalOverDistSq)?;
        let expected = 1.0 / (4.0 * (tv_total(n) + 1.0));
        t.gap(r.fval_residual / r.init_dist_sq, expected, TIGHT_TOL, || {
            format!("tv N={n}")
        });
    }
    let n = 10_000;
    let ratio = Schedule::tv(n)?.total() / (2.0 * n as f64);
    t.flag((0.98..=1.0).contains(&ratio), || {
        format!("A_(N-1)/(2N) = {ratio} at N={n}")
    });
    let oracle = tv_total(n) / (2.0 * n as f64);
    t.gap(ratio, oracle, 1e-12, || format!("tv total at N={n}"));
    Ok(())
}

fn criterion_3(t: &mut Tally) -> Result<()> {
    for m in 1..=10 {
        for lambda in [0.5, 1.0, 2.0] {
            let s = Schedule::silver(m)?;
            let r = rppa_report(&s, lambda, Measure::SubgradOverDist)?;
            t.gap(
                r.subgrad_norm / r.init_dist_sq.sqrt(),
                1.0 / (lambda * rho_pow(m)),
                TIGHT_TOL,
                || format!("silver m={m} lambda={lambda}"),
            );
        }
    }
    for inst in catalog(3) {
        let starts = default_starts(inst.dim(), inst.x_star(), |x| inst.prox(x, 1.0))?;
        for m in 1..=6 {
            let s = Schedule::silver(m)?;
            for lambda in [0.5, 1.0, 2.0] {
                let bound = 1.0 / ((4.0 * rho_pow(m) - 2.0) * lambda);
                for (k, x0) in starts.iter().enumerate() {
                    let r = measures(&run_rppa(&inst, lambda, &s, x0)?, &inst)?;
                    let composite = r.composite.expect("RPPA reports the composite measure");
                    let ok = composite <= bound * r.init_dist_sq * (1.0 + TIGHT_TOL) + 1e-15;
                    t.flag(ok, || {
                        format!(
                            "composite {} m={m} lambda={lambda} start={k}: {composite:e}",
                            inst.label()
                        )
                    });
                }
            }
        }
    }
    Ok(())
}

fn criterion_4(t: &mut Tally) -> Result<()> {
    for m in 0..=10 {
        for lambda in [0.5, 1.0, 2.0] {
            let s = Schedule::right_silver(m)?;
            let r = rppa_report(&s, lambda, Measure::FvalOverDistSq)?;
            t.gap(
                r.fval_residual / r.init_dist_sq,
                1.0 / (4.0 * lambda * t_m(m)),
                TIGHT_TOL,
                || format!("right_silver m={m} lambda={lambda}"),
            );
        }
    }
    for (m, printed) in [(0, "0.095492"), (1, "0.054988"), (2, "0.028429"), (3, "0.013620")] {
        let bound = format!("{:.6}", 1.0 / (4.0 * t_m(m)));
        let r = rppa_report(&Schedule::right_silver(m)?, 1.0, Measure::FvalOverDistSq)?;
        let achieved = format!("{:.6}", r.fval_residual / r.init_dist_sq);
        t.flag(bound == printed && achieved == printed, || {
            format!("m={m}: bound {bound}, achieved {achieved}, printed {printed}")
        });
    }
    Ok(())
}

fn criterion_5(t: &mut Tally) -> Result<()> {
    for m in 0..=10 {
        for lambda in [0.5, 1.0, 2.0] {
            let s = Schedule::left_silver(m)?;
            let r = rppa_report(&s, lambda, Measure::SubgradSqOverFval)?;
            let achieved = r.subgrad_norm * r.subgrad_norm / r.init_fval_gap;
            t.gap(achieved, 1.0 / (lambda * t_m(m)), TIGHT_TOL, || {
                format!("left_silver m={m} lambda={lambda}")
            });
        }
    }
    Ok(())
}

fn criterion_6(t: &mut Tally) -> Result<()> {
    for m in 1..=10 {
        let s = Schedule::silver(m)?;
        for lipschitz in [0.5, 1.0, 4.0] {
            let cases = [
                (Measure::FvalOverDistSq, lipschitz / (4.0 * rho_pow(m) - 2.0)),
                (Measure::SubgradOverDist, lipschitz / rho_pow(m)),
            ];
            for (measure, expected) in cases {
                let (inst, x0) = worst_instance_gd_huber(m, lipschitz, measure)?;
                let trace = run_gd(&inst, &s, &x0)?;
                let r = gd_measures(&trace, &inst)?;
                let achieved = match measure {
                    Measure::FvalOverDistSq => r.fval_residual / r.init_dist_sq,
                    _ => r.subgrad_norm / r.init_dist_sq.sqrt(),
                };
                t.gap(achieved, expected, TIGHT_TOL, || {
                    format!("gd {measure} m={m} L={lipschitz}")
                });
                check_linear_branch(t, &inst, &trace.xs, m, lipschitz);
                t.flag(first_exit_from_linear_branch(&trace, &inst).is_none(), || {
                    format!("library reports a branch exit, m={m} L={lipschitz}")
                });
            }
        }
    }
    Ok(())
}

/// Every iterate must satisfy `|x| >= eta / L` up to rounding.
fn check_linear_branch(t: &mut Tally, inst: &SmoothInstance, xs: &[Vector], m: u32, lipschitz: f64) {
    let SmoothKind::Huber { eta } = *inst.kind() else {
        t.flag(false, || "GD worst case is not a Huber function".into());
        return;
    };
    let kink = eta / inst.lipschitz();
    for (k, x) in xs.iter().enumerate() {
        let slack = 1e-12 * xs[0].norm().max(1.0);
        t.flag(x.norm() >= kink - slack, || {
            format!("m={m} L={lipschitz} step {k}: |x|={} below {kink}", x.norm())
        });
    }
}

fn criterion_7(t: &mut Tally) -> Result<()> {
    let mut rng = seeded_rng(2024);
    let lambdas = [0.5, 1.0, 2.0, 4.0];
    for m in 1..=4 {
        for c in 0..20 {
            let smooth = random_smooth_instance(&mut rng, 3, c);
            let x0 = smooth.x_star() + &gaussian_vector(&mut rng, 3, 2.0);
            let res = gd_certificate_check(m, &smooth, &x0)?;
            t.identity(&res, || format!("gd m={m} {}", smooth.label()));

            let prox = random_prox_instance(&mut rng, 3, c);
            let lambda = lambdas[c % lambdas.len()];
            let x0 = prox.x_star() + &gaussian_vector(&mut rng, 3, 2.0);
            let res = rppa_certificate_check(m, &prox, lambda, &x0)?;
            t.identity(&res, || format!("rppa m={m} {} lambda={lambda}", prox.label()));
        }
    }
    for m in 1..=10 {
        let a = build_certificate_matrix(m)?;
        t.flag(a.size() == 1 << m, || format!("A^({m}) has size {}", a.size()));
        t.flag(a.min_entry() >= 0.0, || format!("A^({m}) has entry {}", a.min_entry()));
    }
    Ok(())
}

fn criterion_8(t: &mut Tally) -> Result<()> {
    let mut rng = seeded_rng(8);
    let schedules = [Schedule::silver(2)?, Schedule::constant(1.0, 7)?, Schedule::tv(7)?];
    for inst in catalog(3) {
        for s in &schedules {
            for lambda in [0.5, 1.0, 2.0] {
                let starts = [
                    inst.x_star().axpy(3.0, &Vector::unit(3, 0)),
                    inst.x_star() + &gaussian_vector(&mut rng, 3, 2.0),
                ];
                for x0 in &starts {
                    let table = qp_table(&inst, lambda, s, x0)?;
                    let limit = 1e-10 * table.scale();
                    t.checked += 1;
                    t.worst = t.worst.max(table.max_gap() / table.scale());
                    if table.max_gap().is_nan() || table.max_gap() > limit {
                        t.fail(format!(
                            "{} {} lambda={lambda}: gap {:e} > {limit:e}",
                            inst.label(),
                            s.label(),
                            table.max_gap()
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

fn criterion_9(t: &mut Tally) -> Result<()> {
    let required = [
        "identities.convex_combination",
        "identities.inner_product",
        "identities.simplify_1",
        "identities.simplify_2",
        "identities.three_point",
        "identities.tv_implication",
        "identities.young",
        "lemmas.lem_basic_1",
        "lemmas.lem_basic_2",
        "lemmas.lem_basic_3",
        "lemmas.monotone_residual",
        "lemmas.double_decrease_1",
        "lemmas.double_decrease_2",
    ];
    let mut checks = run_suite(Suite::Identities, 0)?;
    checks.extend(run_suite(Suite::Lemmas, 0)?);
    for id in required {
        match checks.iter().find(|c| c.id == id) {
            Some(c) => t.flag(c.passed() && c.checked >= 1000, || format!("{c}")),
            None => t.flag(false, || format!("{id} missing")),
        }
    }
    for c in &checks {
        t.flag(c.passed(), || format!("{c}"));
    }
    Ok(())
}

fn criterion_10(t: &mut Tally) -> Result<()> {
    let silver: [(u32, &[f64]); 3] = [
        (1, &[1.414214]),
        (2, &[1.414214, 2.0, 1.414214]),
        (3, &[1.414214, 2.0, 1.414214, 3.414214, 1.414214, 2.0, 1.414214]),
    ];
    let right: [(u32, &[f64]); 4] = [
        (0, &[1.618034]),
        (1, &[1.414214, 2.132242]),
        (2, &[1.414214, 2.0, 1.414214, 2.965447]),
        (
            3,
            &[1.414214, 2.0, 1.414214, 3.414214, 1.414214, 2.0, 1.414214, 4.284319],
        ),
    ];
    let mut compare = |name: &str, m: u32, s: &Schedule, printed: &[f64]| {
        let ours: Vec<String> = s.steps().iter().map(|a| format!("{a:.6}")).collect();
        let theirs: Vec<String> = printed.iter().map(|a| format!("{a:.6}")).collect();
        t.flag(ours == theirs, || format!("{name} m={m}: {ours:?} vs {theirs:?}"));
    };
    for (m, printed) in silver {
        compare("silver", m, &Schedule::silver(m)?, printed);
    }
    for (m, printed) in right {
        compare("right_silver", m, &Schedule::right_silver(m)?, printed);
    }
    for m in 1..=12 {
        let total = Schedule::silver(m)?.total();
        t.gap(total, rho_pow(m) - 1.0, 1e-11, || format!("sum of silver m={m}"));
    }
    for m in 0..=12 {
        let c = silver_constants(m);
        let residual = (c.gamma_m * c.gamma_m - c.gamma_m - rho_pow(m)).abs() / rho_pow(m);
        t.checked += 1;
        t.worst = t.worst.max(residual);
        if residual.is_nan() || residual > 1e-11 {
            t.fail(format!("gamma quadratic m={m}: residual {residual:e}"));
        }
    }
    Ok(())
}

fn criterion_11(t: &mut Tally) -> Result<()> {
    let instances = catalog(3);
    let mut schedules = default_sweep_schedules();
    schedules.extend([Schedule::constant(0.25, 7)?, Schedule::tv(5)?, Schedule::silver(2)?]);
    let rppa = upper_bound_sweep(&instances, &schedules, &[0.1, 1.0, 10.0])?;
    let smooth: Vec<SmoothInstance> = instances
        .iter()
        .filter_map(|i| SmoothInstance::try_from(i).ok())
        .collect();
    let gd = gd_upper_bound_sweep(&smooth, &[1, 2, 3, 4, 5])?;
    for row in rppa.rows.iter().chain(&gd.rows) {
        t.flag(row.ok(), || {
            format!(
                "{} {} scale={} start={} {}: {:e} > {:e}",
                row.instance, row.schedule, row.scale, row.start, row.measure, row.achieved, row.bound
            )
        });
    }
    let kinds = ["constant", "tv", "silver", "right_silver", "left_silver"];
    for kind in kinds {
        t.flag(rppa.rows.iter().any(|r| r.schedule.starts_with(kind)), || {
            format!("no {kind} rows")
        });
    }
    Ok(())
}

type Criterion = (u8, &'static str, fn(&mut Tally) -> Result<()>);

const CRITERIA: [Criterion; 11] = [
    (1, "constant schedule tightness", criterion_1),
    (2, "TV schedule tightness and asymptote", criterion_2),
    (3, "silver subgradient tightness and composite validity", criterion_3),
    (4, "right silver objective tightness and printed values", criterion_4),
    (5, "left silver squared-gradient tightness", criterion_5),
    (
        6,
        "GD silver tightness on Huber with linear-branch containment",
        criterion_6,
    ),
    (7, "certificate identities and matrix shape", criterion_7),
    (8, "Q and P agreement along RPPA", criterion_8),
    (9, "lemma and identity suites", criterion_9),
    (10, "schedule fixtures and silver constants", criterion_10),
    (11, "upper-bound sweep", criterion_11),
];

fn main() -> ExitCode {
    let mut failed = 0;
    for (id, title, run) in CRITERIA {
        let mut t = Tally::default();
        if let Err(e) = run(&mut t) {
            t.fail(format!("error: {e}"));
        }
        let ok = t.failures.is_empty() && t.checked > 0;
        failed += usize::from(!ok);
        println!(
            "{} criterion {id:>2}: {title} (checked={}, worst_rel_gap={:.3e})",
            if ok { "PASS" } else { "FAIL" },
            t.checked,
            t.worst
        );
        for f in &t.failures {
            println!("    {f}");
        }
    }
    println!("acceptance: {} passed, {failed} failed", CRITERIA.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
