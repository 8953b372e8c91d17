use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use super::lemmas::{basic_inequalities, constant_schedule_properties, InequalityStat};
use super::matrix::{
    build_certificate_matrix, certificate_holds, gd_certificate_check, left_silver_scaled_check, rppa_certificate_check,
};
use super::qp::qp_table;
use super::random::{random_prox_instance, random_smooth_instance};
use super::sweep::{default_sweep_schedules, gd_upper_bound_sweep, upper_bound_sweep, SweepReport};
use super::worst::{tightness_report, tightness_report_gd, worst_instance, TightnessReport};
use crate::bounds::{upper_right_silver_fval, Measure};
use crate::error::{Error, Result};
use crate::fixtures::{RIGHT_SILVER_PRINTED, SILVER_PRINTED, TABLE4_RIGHT_SILVER};
use crate::math::{
    convex_combination_identity, gaussian_vector, rel_gap, seeded_rng, simplify_identity_1, simplify_identity_2,
    three_point_identity, tv_implication_check, young_bounds, IdentityResidual, SampleRng, TvOutcome, Vector,
};
use crate::prox::{catalog, ProxInstance, SmoothInstance};
use crate::schedule::{rho_pow, silver_constants, Schedule, RHO};
use crate::solver::run_rppa;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Schedules,
    Lemmas,
    Tightness,
    Certificates,
    Sweep,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = [
        "identities",
        "schedules",
        "lemmas",
        "tightness",
        "certificates",
        "sweep",
        "all",
    ];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "identities" => Suite::Identities,
            "schedules" => Suite::Schedules,
            "lemmas" => Suite::Lemmas,
            "tightness" => Suite::Tightness,
            "certificates" => Suite::Certificates,
            "sweep" => Suite::Sweep,
            "all" => Suite::All,
            other => {
                return Err(Error::invalid(
                    "suite",
                    format!("unknown suite `{other}`; expected one of {}", Suite::NAMES.join(", ")),
                ))
            }
        })
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub id: String,
    pub checked: usize,
    pub violations: usize,
    /// `rel_gap` for equalities (largest seen) or `slack` for inequalities
    /// (smallest normalized slack seen).
    pub metric: &'static str,
    pub worst: f64,
    /// Up to five descriptions of violating cases.
    pub details: Vec<String>,
}

impl CheckSummary {
    fn gap(id: &str) -> Self {
        CheckSummary {
            id: id.to_string(),
            checked: 0,
            violations: 0,
            metric: "rel_gap",
            worst: 0.0,
            details: Vec::new(),
        }
    }

    fn slack(id: &str) -> Self {
        CheckSummary {
            metric: "slack",
            worst: f64::INFINITY,
            ..Self::gap(id)
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.checked > 0
    }

    fn fail(&mut self, detail: impl FnOnce() -> String) {
        self.violations += 1;
        if self.details.len() < 5 {
            self.details.push(detail());
        }
    }

    /// Records a gap against `limit`.
    fn gap_case(&mut self, gap: f64, limit: f64, detail: impl FnOnce() -> String) {
        self.checked += 1;
        self.worst = self.worst.max(gap);
        if gap.is_nan() || gap > limit {
            self.fail(detail);
        }
    }

    fn flag(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(detail);
        }
    }

    fn absorb(&mut self, stat: &InequalityStat, detail: impl FnOnce() -> String) {
        self.checked += stat.checked;
        self.worst = self.worst.min(stat.worst);
        if stat.violations > 0 {
            let before = self.violations;
            self.fail(detail);
            self.violations = before + stat.violations;
        }
    }
}

impl fmt::Display for CheckSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} checked={} violations={} worst_{}={:.3e}",
            self.id, self.checked, self.violations, self.metric, self.worst
        )?;
        for d in &self.details {
            write!(f, "\n    {d}")?;
        }
        Ok(())
    }
}

/// Runs a suite and returns its checks sorted by id.
pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<CheckSummary>> {
    let mut out = match suite {
        Suite::Identities => identities(seed)?,
        Suite::Schedules => schedules()?,
        Suite::Lemmas => lemmas(seed)?,
        Suite::Tightness => tightness()?,
        Suite::Certificates => certificates(seed)?,
        Suite::Sweep => sweep()?,
        Suite::All => {
            let mut all = identities(seed)?;
            all.extend(schedules()?);
            all.extend(lemmas(seed)?);
            all.extend(tightness()?);
            all.extend(certificates(seed)?);
            all.extend(sweep()?);
            all
        }
    };
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

fn residual_case(check: &mut CheckSummary, res: IdentityResidual, limit: f64, what: impl Fn() -> String) {
    check.gap_case(res.rel_gap, limit, || {
        format!("{}: lhs={:e} rhs={:e}", what(), res.lhs, res.rhs)
    });
}

fn identities(seed: u64) -> Result<Vec<CheckSummary>> {
    let mut rng = seeded_rng(seed);
    let d = 10;
    let g = |rng: &mut SampleRng| gaussian_vector(rng, d, 1.0);

    let mut three = CheckSummary::gap("identities.three_point");
    let mut cvx = CheckSummary::gap("identities.convex_combination");
    let mut young = CheckSummary::gap("identities.young");
    let mut inner = CheckSummary::gap("identities.inner_product");
    for i in 0..1000 {
        let (x, y, z, w) = (g(&mut rng), g(&mut rng), g(&mut rng), g(&mut rng));
        residual_case(&mut three, three_point_identity(&x, &y, &z, &w)?, 1e-12, || {
            format!("sample {i}")
        });
        let theta = rng.random_range(-2.0..3.0);
        residual_case(&mut cvx, convex_combination_identity(&x, &y, theta)?, 1e-12, || {
            format!("sample {i} theta={theta}")
        });
        let kappa = 10f64.powf(rng.random_range(-2.0..2.0));
        let yb = young_bounds(&x, &y, kappa)?;
        young.flag(yb.upper_ok && yb.lower_ok, || format!("sample {i} kappa={kappa}"));
        let (a, b) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let sym = (x.dot(&y) - y.dot(&x)).abs();
        let lin = rel_gap((&x.scaled(a) + &y.scaled(b)).dot(&z), a * x.dot(&z) + b * y.dot(&z));
        inner.gap_case(sym.max(lin), 1e-12, || format!("sample {i}"));
    }

    let mut s1 = CheckSummary::gap("identities.simplify_1");
    let mut s1_golden = CheckSummary::gap("identities.simplify_1_golden");
    let mut s2 = CheckSummary::gap("identities.simplify_2");
    let mut s2_c0 = CheckSummary::gap("identities.simplify_2_c_zero");
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let zero = Vector::zeros(d);
    for i in 0..1000 {
        let (a, b, c, dd) = (g(&mut rng), g(&mut rng), g(&mut rng), g(&mut rng));
        let r = rng.random_range(0.05..5.0);
        let s = rng.random_range(0.05..5.0);
        residual_case(&mut s1, simplify_identity_1(&a, &b, &c, &dd, r, s)?, 1e-11, || {
            format!("sample {i} r={r} s={s}")
        });
        residual_case(
            &mut s1_golden,
            simplify_identity_1(&a, &b, &c, &dd, 1.0, golden)?,
            1e-11,
            || format!("sample {i}"),
        );
        residual_case(&mut s2, simplify_identity_2(&b, &c, &dd, r, s)?, 1e-11, || {
            format!("sample {i} r={r} s={s}")
        });
        residual_case(&mut s2_c0, simplify_identity_2(&b, &zero, &dd, r, s)?, 1e-11, || {
            format!("sample {i} r={r} s={s}")
        });
    }

    let mut tv = CheckSummary::gap("identities.tv_implication");
    let (mut accepted, mut attempts) = (0usize, 0usize);
    while accepted < 10_000 && attempts < 2_000_000 {
        attempts += 1;
        let s = rng.random_range(1e-3..=10.0);
        let gamma = rng.random_range(-s..=10.0);
        let x = gaussian_vector(&mut rng, 3, 10.0);
        let y = gaussian_vector(&mut rng, 3, 1.0);
        let z = gaussian_vector(&mut rng, 3, 1.0);
        let v = rng.random_range(-20.0..20.0);
        match tv_implication_check(&x, &y, &z, s, gamma, v)? {
            TvOutcome::Vacuous => continue,
            outcome => {
                accepted += 1;
                tv.flag(outcome == TvOutcome::Confirmed, || format!("s={s} gamma={gamma} v={v}"));
            }
        }
    }
    tv.flag(accepted == 10_000, || {
        format!("only {accepted} hypothesis-satisfying samples in {attempts} draws")
    });

    Ok(vec![three, cvx, young, inner, s1, s1_golden, s2, s2_c0, tv])
}

fn schedules() -> Result<Vec<CheckSummary>> {
    let mut printed = CheckSummary::gap("schedules.printed_values");
    let six = |v: &[f64]| v.iter().map(|a| format!("{a:.6}")).collect::<Vec<_>>();
    for (m, expect) in SILVER_PRINTED {
        let ours = Schedule::silver(m)?;
        printed.flag(six(ours.steps()) == six(expect), || {
            format!("silver m={m}: {:?}", six(ours.steps()))
        });
    }
    for (m, expect) in RIGHT_SILVER_PRINTED {
        let ours = Schedule::right_silver(m)?;
        printed.flag(six(ours.steps()) == six(expect), || {
            format!("right_silver m={m}: {:?}", six(ours.steps()))
        });
    }

    let mut totals = CheckSummary::gap("schedules.silver_totals");
    let mut quad = CheckSummary::gap("schedules.gamma_quadratic");
    let mut shape = CheckSummary::gap("schedules.silver_shape");
    for m in 1..=12 {
        let s = Schedule::silver(m)?;
        totals.gap_case(rel_gap(s.total(), rho_pow(m) - 1.0), 1e-11, || format!("m={m}"));
        let mut rev = s.steps().to_vec();
        rev.reverse();
        shape.flag(rev == s.steps() && s.len() == (1 << m) - 1, || {
            format!("silver m={m} not a palindrome of length 2^m-1")
        });
    }
    for m in 0..=12 {
        let c = silver_constants(m);
        quad.gap_case(rel_gap(c.gamma_m * c.gamma_m - c.gamma_m, c.rho_m), 1e-11, || {
            format!("m={m}")
        });
        quad.gap_case(rel_gap(c.t_m, c.gamma_m * c.gamma_m), 1e-11, || {
            format!("T_m vs gamma_m^2 at m={m}")
        });
    }
    let mut mirror = CheckSummary::gap("schedules.right_left_silver");
    for m in 0..=10 {
        let r = Schedule::right_silver(m)?;
        let l = Schedule::left_silver(m)?;
        mirror.flag(l.reversed().steps() == r.steps(), || {
            format!("m={m}: left is not the mirror of right")
        });
        mirror.gap_case(rel_gap(1.0 + r.total(), silver_constants(m).t_m), 1e-12, || {
            format!("m={m}: 1+total != T_m")
        });
        if m >= 1 {
            let prefix = &r.steps()[..r.len() - 1];
            mirror.flag(prefix == Schedule::silver(m)?.steps(), || {
                format!("m={m}: prefix differs from silver")
            });
        }
    }

    let mut tv = CheckSummary::gap("schedules.tv_properties");
    let s = Schedule::tv(10_000)?;
    tv.gap_case(s.tv_identity_residual(), 1e-12, || "step identity".into());
    tv.flag(s.steps().iter().all(|&a| (SQRT_2..2.0).contains(&a)), || {
        "steps outside [sqrt2, 2)".into()
    });
    tv.flag(s.steps().windows(2).all(|w| w[0] <= w[1]), || {
        "steps not nondecreasing".into()
    });
    let ratio = s.total() / (2.0 * s.len() as f64);
    tv.flag((0.98..=1.0).contains(&ratio), || {
        format!("A_(N-1)/(2N) = {ratio} at N=10^4")
    });

    let mut asym = CheckSummary::gap("schedules.t_m_asymptote");
    let n = (1u64 << 12) as f64;
    let ratio = silver_constants(12).t_m / n.powf(RHO.log2());
    asym.gap_case((ratio - 1.0).abs(), 0.05, || format!("ratio {ratio}"));

    Ok(vec![printed, totals, quad, shape, mirror, tv, asym])
}

fn lemma_schedules(rng: &mut SampleRng) -> Result<Vec<Schedule>> {
    let random_steps: Vec<f64> = (0..12).map(|_| rng.random_range(0.1..3.0)).collect();
    Ok(vec![
        Schedule::silver(3)?,
        Schedule::tv(20)?,
        Schedule::constant(1.0, 10)?,
        Schedule::right_silver(2)?,
        Schedule::left_silver(2)?,
        Schedule::explicit(random_steps)?,
    ])
}

fn lemmas(seed: u64) -> Result<Vec<CheckSummary>> {
    let mut rng = seeded_rng(seed.wrapping_add(1));
    let names = ["lem_basic_1", "lem_basic_2", "lem_basic_3", "lem_basic_3_identity"];
    let mut basic: Vec<CheckSummary> = names
        .iter()
        .map(|n| CheckSummary::slack(&format!("lemmas.{n}")))
        .collect();
    let lambdas = [0.5, 1.0, 2.0];
    for sched in lemma_schedules(&mut rng)? {
        for kind in 0..5 {
            for &lambda in &lambdas {
                let inst = random_prox_instance(&mut rng, 3, kind);
                for _ in 0..3 {
                    let x0 = gaussian_vector(&mut rng, 3, 2.0);
                    let trace = run_rppa(&inst, lambda, &sched, &x0)?;
                    for (check, stat) in basic.iter_mut().zip(basic_inequalities(&trace, &inst)?) {
                        check.absorb(&stat, || format!("{} {} lambda={lambda}", inst.label(), sched.label()));
                    }
                }
            }
        }
    }

    let mut mono = CheckSummary::slack("lemmas.monotone_residual");
    let mut sd1 = CheckSummary::slack("lemmas.double_decrease_1");
    let mut sd2 = CheckSummary::slack("lemmas.double_decrease_2");
    for alpha in [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0] {
        let sched = Schedule::constant(alpha, 20)?;
        for kind in 0..5 {
            for &lambda in &lambdas {
                let inst = random_prox_instance(&mut rng, 3, kind);
                for _ in 0..3 {
                    let x0 = gaussian_vector(&mut rng, 3, 2.0);
                    let trace = run_rppa(&inst, lambda, &sched, &x0)?;
                    for stat in constant_schedule_properties(&trace)? {
                        let target = match stat.name {
                            "monotone_residual" => &mut mono,
                            "double_decrease_1" => &mut sd1,
                            _ => &mut sd2,
                        };
                        target.absorb(&stat, || format!("{} alpha={alpha} lambda={lambda}", inst.label()));
                    }
                }
            }
        }
    }
    basic.extend([mono, sd1, sd2]);
    Ok(basic)
}

fn tight_case(check: &mut CheckSummary, report: Result<TightnessReport>, what: impl Fn() -> String) {
    match report {
        Ok(r) => {
            let ok = r.passes(1e-9);
            check.checked += 1;
            check.worst = check.worst.max(r.rel_gap);
            if !ok {
                check.fail(|| format!("{}: achieved={:e} bound={:e}", what(), r.achieved, r.bound));
            }
        }
        Err(e) => {
            check.checked += 1;
            check.fail(|| format!("{}: {e}", what()));
        }
    }
}

fn tightness() -> Result<Vec<CheckSummary>> {
    let mut constant = CheckSummary::gap("tightness.constant");
    for alpha in [0.25, 0.5, 1.0, 1.2, SQRT_2] {
        for n in [1, 2, 5, 10, 100, 1000] {
            let s = Schedule::constant(alpha, n)?;
            for lambda in [0.1, 1.0, 10.0] {
                for m in [Measure::FvalOverDistSq, Measure::SubgradOverDist] {
                    tight_case(&mut constant, tightness_report(&s, lambda, m), || {
                        format!("alpha={alpha} N={n} lambda={lambda} {m}")
                    });
                }
            }
        }
    }
    let mut tv = CheckSummary::gap("tightness.tv");
    for n in (1..=10).chain([100, 1000]) {
        let s = Schedule::tv(n)?;
        tight_case(&mut tv, tightness_report(&s, 1.0, Measure::FvalOverDistSq), || {
            format!("N={n}")
        });
    }
    let mut silver = CheckSummary::gap("tightness.silver_subgrad");
    let mut right = CheckSummary::gap("tightness.right_silver_fval");
    let mut left = CheckSummary::gap("tightness.left_silver_subgrad_sq");
    for lambda in [0.5, 1.0, 2.0] {
        for m in 1..=10 {
            let s = Schedule::silver(m)?;
            tight_case(
                &mut silver,
                tightness_report(&s, lambda, Measure::SubgradOverDist),
                || format!("m={m} lambda={lambda}"),
            );
        }
        for m in 0..=10 {
            let r = Schedule::right_silver(m)?;
            tight_case(
                &mut right,
                tightness_report(&r, lambda, Measure::FvalOverDistSq),
                || format!("m={m} lambda={lambda}"),
            );
            let l = Schedule::left_silver(m)?;
            tight_case(
                &mut left,
                tightness_report(&l, lambda, Measure::SubgradSqOverFval),
                || format!("m={m} lambda={lambda}"),
            );
        }
    }
    let mut table4 = CheckSummary::gap("tightness.table4_values");
    for (m, printed) in TABLE4_RIGHT_SILVER {
        let bound = upper_right_silver_fval(m, 1.0)?;
        table4.flag(format!("{bound:.6}") == format!("{printed:.6}"), || {
            format!("m={m}: {bound:.6}")
        });
    }
    let mut gd = CheckSummary::gap("tightness.gd_silver");
    for l in [0.5, 1.0, 4.0] {
        for m in 1..=10 {
            for measure in [Measure::FvalOverDistSq, Measure::SubgradOverDist] {
                tight_case(&mut gd, tightness_report_gd(m, l, measure), || {
                    format!("m={m} L={l} {measure}")
                });
            }
        }
    }
    Ok(vec![constant, tv, silver, right, left, table4, gd])
}

fn certificates(seed: u64) -> Result<Vec<CheckSummary>> {
    let mut rng = seeded_rng(seed.wrapping_add(2));
    let mut matrix = CheckSummary::gap("certificates.matrix_shape");
    for m in 1..=10 {
        let a = build_certificate_matrix(m)?;
        matrix.flag(a.size() == 1 << m && a.min_entry() >= 0.0, || format!("m={m}"));
    }
    let mut gd = CheckSummary::gap("certificates.gd_identity");
    let mut rppa = CheckSummary::gap("certificates.rppa_identity");
    let mut scaled = CheckSummary::gap("certificates.left_silver_scaled");
    for m in 1..=4 {
        for k in 0..20 {
            let dim = 1 + k % 4;
            let h = random_smooth_instance(&mut rng, dim, k);
            let x0 = gaussian_vector(&mut rng, dim, 2.0);
            let res = gd_certificate_check(m, &h, &x0)?;
            gd.gap_case(res.rel_gap, 1e-9, || {
                format!("m={m} {} lhs={:e} rhs={:e}", h.label(), res.lhs, res.rhs)
            });
            gd.flag(certificate_holds(&res), || {
                format!("m={m} {} negative lhs {:e}", h.label(), res.lhs)
            });

            let f = random_prox_instance(&mut rng, dim, k);
            let lambda = 10f64.powf(rng.random_range(-0.7..0.7));
            let x0 = gaussian_vector(&mut rng, dim, 2.0);
            let res = rppa_certificate_check(m, &f, lambda, &x0)?;
            rppa.gap_case(res.rel_gap, 1e-9, || {
                format!("m={m} {} lhs={:e} rhs={:e}", f.label(), res.lhs, res.rhs)
            });
            rppa.flag(certificate_holds(&res), || {
                format!("m={m} {} negative lhs {:e}", f.label(), res.lhs)
            });
            let res = left_silver_scaled_check(m, &f, lambda, &x0)?;
            scaled.gap_case(res.rel_gap, 1e-9, || {
                format!("m={m} {} lhs={:e} rhs={:e}", f.label(), res.lhs, res.rhs)
            });
            scaled.flag(certificate_holds(&res), || {
                format!("m={m} {} negative lhs {:e}", f.label(), res.lhs)
            });
        }
    }
    let mut qp = CheckSummary::gap("certificates.q_equals_p");
    let mut qp_nonneg = CheckSummary::slack("certificates.q_p_nonnegative");
    let schedules = [Schedule::silver(2)?, Schedule::constant(1.0, 4)?, Schedule::tv(7)?];
    for inst in catalog(3) {
        for sched in &schedules {
            for lambda in [0.5, 1.0, 2.0] {
                let x0 = gaussian_vector(&mut rng, 3, 2.0);
                let table = qp_table(&inst, lambda, sched, &x0)?;
                let scale = table.scale();
                let what = || format!("{} {} lambda={lambda}", inst.label(), sched.label());
                qp.gap_case(table.max_gap() / scale, 1e-10, what);
                let mut stat = InequalityStat::new("q_p_nonnegative");
                stat.record(table.min_entry(), scale);
                qp_nonneg.absorb(&stat, what);
            }
        }
    }
    Ok(vec![matrix, gd, rppa, scaled, qp, qp_nonneg])
}

fn sweep_summary(id: &str, report: &SweepReport) -> CheckSummary {
    let mut check = CheckSummary::gap(id);
    check.metric = "ratio";
    for row in &report.rows {
        let ratio = if row.bound > 0.0 { row.achieved / row.bound } else { 0.0 };
        check.checked += 1;
        check.worst = check.worst.max(ratio);
        if !row.ok() {
            check.fail(|| {
                format!(
                    "{} {} lambda={} start={} {}: {:e} > {:e}",
                    row.instance, row.schedule, row.scale, row.start, row.measure, row.achieved, row.bound
                )
            });
        }
    }
    check
}

/// Catalog instances plus the worst-case constructions for the sweep schedules.
fn sweep_instances() -> Result<Vec<ProxInstance>> {
    let mut insts = catalog(3);
    for sched in default_sweep_schedules() {
        for measure in [Measure::FvalOverDistSq, Measure::SubgradOverDist] {
            insts.push(worst_instance(&sched, 1.0, measure)?.0);
        }
    }
    Ok(insts)
}

fn sweep() -> Result<Vec<CheckSummary>> {
    let rppa = upper_bound_sweep(&sweep_instances()?, &default_sweep_schedules(), &[0.1, 1.0, 10.0])?;
    let smooth = vec![
        SmoothInstance::huber(1.0, 1.0, 3)?,
        SmoothInstance::huber(0.2, 4.0, 2)?,
        SmoothInstance::quadratic(Vector::new(vec![0.5, 1.0, 3.0])?, Vector::new(vec![0.3, -0.6, 0.3])?)?,
    ];
    let gd = gd_upper_bound_sweep(&smooth, &[1, 2, 3, 4, 5, 6])?;
    Ok(vec![
        sweep_summary("sweep.rppa_upper_bounds", &rppa),
        sweep_summary("sweep.gd_upper_bounds", &gd),
    ])
}
