//! The `verify` suites: parameter sweeps over the checks of
//! `cube_constants_core::verify` and `combinatorics`, summarized into a
//! short list of reports.

use cube_constants_core::combinatorics::{beckner_coefficients, c_coefficient, verify_power_identity};
use cube_constants_core::projection::LevelMode;
use cube_constants_core::verify::{
    check_homog_vs_upto, check_klimek, check_range_bounds, check_szarek_bounds, desigforo_sweep,
    mckay_sweep, BoundsReport, MAX_MCKAY_N,
};
use rayon::prelude::*;
use rayon::ThreadPool;
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Range,
    Mckay,
    Desigforo,
    Klimek,
    Combinatorics,
    All,
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    /// Largest `N` of the exact sweeps.
    pub max_n: usize,
    pub mckay_max_n: usize,
    pub desigforo_max_n: usize,
    pub klimek_trials: u64,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_n: 14,
            mckay_max_n: MAX_MCKAY_N,
            desigforo_max_n: 200,
            klimek_trials: 500,
            seed: 42,
        }
    }
}

/// Collapses reports sharing a name into one: the largest `lhs/rhs`
/// against 1, passing only if every member passes. Failing members are
/// kept verbatim after the summary.
pub fn summarize(reports: Vec<BoundsReport>) -> Vec<BoundsReport> {
    let mut names: Vec<String> = Vec::new();
    for r in &reports {
        if !names.contains(&r.name) {
            names.push(r.name.clone());
        }
    }
    let mut out = Vec::new();
    for name in names {
        let group: Vec<&BoundsReport> = reports.iter().filter(|r| r.name == name).collect();
        let worst = group
            .iter()
            .max_by(|a, b| (a.lhs / a.rhs).total_cmp(&(b.lhs / b.rhs)))
            .expect("group is nonempty");
        let mut context = vec![("points", group.len().to_string())];
        context.extend(worst.context.iter().map(|(k, v)| (*k, v.clone())));
        out.push(BoundsReport {
            name: format!("{name} (worst ratio)"),
            lhs: worst.lhs / worst.rhs,
            rhs: 1.0,
            exact_lhs: None,
            exact_rhs: None,
            pass: group.iter().all(|r| r.pass),
            context,
        });
        out.extend(group.iter().filter(|r| !r.pass).map(|r| (*r).clone()));
    }
    out
}

pub fn range(cfg: &SuiteConfig, pool: &ThreadPool) -> Result<Vec<BoundsReport>, CliError> {
    let points: Vec<(usize, usize)> = (1..=cfg.max_n).flat_map(|n| (1..=n).map(move |d| (n, d))).collect();
    let reports = pool.install(|| {
        points
            .par_iter()
            .map(|&(n, d)| {
                let mut r = check_range_bounds(n, d, LevelMode::ExactDegree)?;
                r.extend(check_range_bounds(n, d, LevelMode::UpToDegree)?);
                r.push(check_homog_vs_upto(n, d)?);
                Ok(r)
            })
            .collect::<Result<Vec<_>, cube_constants_core::Error>>()
    })?;
    let mut homog = Vec::new();
    let mut upto = Vec::new();
    for r in reports.into_iter().flatten() {
        let is_upto = r.context.iter().any(|(k, v)| *k == "mode" && v == "up-to");
        if is_upto {
            upto.push(r);
        } else {
            homog.push(r);
        }
    }
    for r in &mut homog {
        if r.context.iter().any(|(k, _)| *k == "mode") {
            r.name = format!("{} [homogeneous]", r.name);
        }
    }
    for r in &mut upto {
        r.name = format!("{} [up-to]", r.name);
    }
    homog.extend(upto);
    Ok(summarize(homog))
}

pub fn szarek_grid() -> Vec<f64> {
    (0..=500).map(|k| k as f64 / 10.0).collect()
}

pub fn mckay(cfg: &SuiteConfig, pool: &ThreadPool) -> Result<Vec<BoundsReport>, CliError> {
    let mut out = pool.install(|| {
        [0usize, 2, 4]
            .par_iter()
            .map(|&alpha| {
                let mut r = mckay_sweep(cfg.mckay_max_n, alpha)?;
                r.name = format!("{} [alpha = {alpha}]", r.name);
                Ok(r)
            })
            .collect::<Result<Vec<_>, cube_constants_core::Error>>()
    })?;
    out.extend(check_szarek_bounds(&szarek_grid())?);
    Ok(out)
}

pub fn desigforo(cfg: &SuiteConfig) -> Result<Vec<BoundsReport>, CliError> {
    Ok(vec![desigforo_sweep(cfg.desigforo_max_n)?])
}

pub fn klimek(cfg: &SuiteConfig, pool: &ThreadPool) -> Result<Vec<BoundsReport>, CliError> {
    let mut points = vec![(8usize, 3usize, cfg.klimek_trials)];
    for n in 1..=cfg.max_n.min(10) {
        for d in 0..=n.min(3) {
            if (n, d) != (8, 3) {
                points.push((n, d, 50));
            }
        }
    }
    let reports = pool.install(|| {
        points
            .par_iter()
            .map(|&(n, d, trials)| check_klimek(n, d, trials, cfg.seed))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut out = vec![reports[0].clone()];
    out.extend(summarize(reports[1..].to_vec()));
    Ok(out)
}

/// The combinatorial identities as an object:
/// `{identity, c_table, beckner, reports}`.
pub fn combinatorics(cfg: &SuiteConfig, pool: &ThreadPool) -> Result<(Value, Vec<BoundsReport>), CliError> {
    let max_n = cfg.max_n.min(12);
    let points: Vec<(usize, usize)> = (1..=5)
        .flat_map(|d| (d..=max_n).map(move |n| (d, n)))
        .collect();
    let identity = pool.install(|| {
        points
            .par_iter()
            .map(|&(d, n)| verify_power_identity(d, n))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let identity_pass = identity.iter().all(|r| r.pass);
    let worst = identity.iter().map(|r| r.max_discrepancy).max().unwrap_or(0);
    let mut reports = vec![BoundsReport {
        name: "power identity discrepancy".into(),
        lhs: worst as f64,
        rhs: 0.0,
        exact_lhs: None,
        exact_rhs: None,
        pass: identity_pass,
        context: vec![("max_d", "5".into()), ("max_N", max_n.to_string())],
    }];

    let mut c_table = Vec::new();
    let mut c_pass = true;
    for n in 2..=50usize {
        let c21 = c_coefficient(2, 1, n)?;
        let c31 = if n >= 3 { Some(c_coefficient(3, 1, n)?) } else { None };
        c_pass &= c21 == n as u128 && c31.is_none_or(|c| c == 3 * n as u128 - 2);
        c_table.push(json!({ "N": n, "c21": c21.to_string(), "c31": c31.map(|c| c.to_string()) }));
    }
    reports.push(BoundsReport {
        name: "c coefficients (c21 = N, c31 = 3N - 2)".into(),
        lhs: if c_pass { 0.0 } else { 1.0 },
        rhs: 0.0,
        exact_lhs: None,
        exact_rhs: None,
        pass: c_pass,
        context: vec![("max_N", "50".into())],
    });

    let ns = [10usize, 20, 40, 80, 160];
    let fits = pool.install(|| {
        (2..=5usize)
            .flat_map(|d| ns.iter().map(move |&n| (d, n)))
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&(d, n)| beckner_coefficients(d, n))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut beckner = Vec::new();
    let mut low_dev = 0.0f64;
    for f in &fits {
        beckner.push(json!({ "d": f.d, "N": f.n, "a": f.a, "residual": f.residual }));
        let expected = match f.d {
            2 => Some(0.0),
            3 => Some(2.0),
            _ => None,
        };
        if let Some(e) = expected {
            low_dev = low_dev.max((f.a[0] - e).abs());
        }
    }
    reports.push(BoundsReport {
        name: "beckner a21 = 0, a31 = 2 (deviation)".into(),
        lhs: low_dev,
        rhs: 1e-8,
        exact_lhs: None,
        exact_rhs: None,
        pass: low_dev <= 1e-8,
        context: vec![("N", "10,20,40,80,160".into())],
    });
    let mut spread = 0.0f64;
    for d in 4..=5 {
        let group: Vec<_> = fits.iter().filter(|f| f.d == d && f.n >= 40).collect();
        for k in 0..group[0].a.len() {
            let values: Vec<f64> = group.iter().map(|f| f.a[k].abs()).collect();
            let hi = values.iter().cloned().fold(f64::MIN, f64::max);
            let lo = values.iter().cloned().fold(f64::MAX, f64::min);
            spread = spread.max((hi - lo) / hi);
        }
    }
    reports.push(BoundsReport {
        name: "beckner relative spread d = 4, 5".into(),
        lhs: spread,
        rhs: 0.05,
        exact_lhs: None,
        exact_rhs: None,
        pass: spread < 0.05,
        context: vec![("N", "40,80,160".into())],
    });
    let object = json!({
        "identity": if identity_pass { "pass" } else { "fail" },
        "c_table": c_table,
        "beckner": beckner,
    });
    Ok((object, reports))
}

pub fn run(suite: Suite, cfg: &SuiteConfig, pool: &ThreadPool) -> Result<Vec<BoundsReport>, CliError> {
    Ok(match suite {
        Suite::Range => range(cfg, pool)?,
        Suite::Mckay => mckay(cfg, pool)?,
        Suite::Desigforo => desigforo(cfg)?,
        Suite::Klimek => klimek(cfg, pool)?,
        Suite::Combinatorics => combinatorics(cfg, pool)?.1,
        Suite::All => {
            let mut all = range(cfg, pool)?;
            all.extend(mckay(cfg, pool)?);
            all.extend(desigforo(cfg)?);
            all.extend(klimek(cfg, pool)?);
            all.extend(combinatorics(cfg, pool)?.1);
            all
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(name: &str, lhs: f64, rhs: f64, pass: bool) -> BoundsReport {
        BoundsReport {
            name: name.into(),
            lhs,
            rhs,
            exact_lhs: None,
            exact_rhs: None,
            pass,
            context: vec![],
        }
    }

    #[test]
    fn summary_keeps_worst_and_failures() {
        let s = summarize(vec![
            report("a", 1.0, 4.0, true),
            report("b", 3.0, 1.0, false),
            report("a", 3.0, 4.0, true),
        ]);
        assert_eq!(s.len(), 3);
        assert_eq!(s[0].lhs, 0.75);
        assert!(s[0].pass);
        assert!(!s[1].pass && s[2].name == "b");
    }

    #[test]
    fn small_sweeps_pass() {
        let cfg = SuiteConfig {
            max_n: 6,
            mckay_max_n: 101,
            desigforo_max_n: 30,
            klimek_trials: 20,
            seed: 1,
        };
        let pool = crate::parallel::pool(2).unwrap();
        for suite in [Suite::Range, Suite::Mckay, Suite::Desigforo, Suite::Klimek] {
            assert!(run(suite, &cfg, &pool).unwrap().iter().all(|r| r.pass), "{suite:?}");
        }
    }
}
