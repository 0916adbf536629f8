//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any
//! criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use cube_constants_core::combinatorics::{beckner_coefficients, c_coefficient, verify_power_identity};
use cube_constants_core::hermite::{hermite_poly, limit_constant, normalized_limit_constant, p_poly};
use cube_constants_core::projection::{
    haagerup_lambda, lambda_exact, lambda_level_exact, prime_singleton_report, squarefree_mc, LevelMode,
};
use cube_constants_core::rational::{factorial, to_f64};
use cube_constants_core::sidon::{check_sidon_projection_bound, kappa_constant, sidon_exact};
use cube_constants_core::{make_family, ExactRational, FamilySpec, SubsetMask, SupportFamily};
use serde_json::Value;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn homogeneous(n: usize, d: usize) -> SupportFamily {
    make_family(&FamilySpec::Homogeneous { n, d }).unwrap()
}

fn explicit(n: usize, masks: &[u128]) -> SupportFamily {
    let sets = masks.iter().map(|&b| SubsetMask::new(n, b).unwrap()).collect();
    SupportFamily::explicit(n, sets).unwrap()
}

fn rational(num: i64, den: i64) -> ExactRational {
    ExactRational::new(num.into(), den.into())
}

/// `Γ((m + 2)/2) / Γ((m + 1)/2)` by `Γ(x + 1) = xΓ(x)` from
/// `Γ(1/2) = √π` and `Γ(1) = 1`.
fn gamma_half_ratio(m: usize) -> f64 {
    let (mut top, mut bottom) = if m.is_multiple_of(2) { (1.0, std::f64::consts::PI.sqrt()) } else { (std::f64::consts::PI.sqrt() / 2.0, 1.0) };
    let (mut a, mut b) = if m.is_multiple_of(2) { (1.0, 0.5) } else { (1.5, 1.0) };
    while a < (m as f64 + 2.0) / 2.0 - 0.25 {
        top *= a;
        a += 1.0;
    }
    while b < (m as f64 + 1.0) / 2.0 - 0.25 {
        bottom *= b;
        b += 1.0;
    }
    top / bottom
}

/// Real projection constant of `ℓ_1^N`: `λ(ℓ_2^M)` with `M` the largest odd
/// number not above `N`.
fn l1_projection_constant(n: usize) -> f64 {
    let m = if n % 2 == 1 { n } else { n - 1 };
    2.0 / std::f64::consts::PI.sqrt() * gamma_half_ratio(m)
}

fn c1_closed_forms() -> Outcome {
    for n in 1..=16 {
        let lambda = lambda_exact(&homogeneous(n, 1)).map_err(err)?;
        let want = l1_projection_constant(n);
        let got = to_f64(&lambda);
        ensure((got - want).abs() <= 1e-12 * want, || format!("N = {n}: {got} vs {want}"))?;
    }
    let three = lambda_exact(&homogeneous(3, 1)).map_err(err)?;
    ensure(three == rational(3, 2), || format!("N = 3 gives {three}"))?;
    Ok("N = 1..16 within 1e-12, N = 3 is 3/2".into())
}

fn c2_full_space() -> Outcome {
    for n in 1..=10 {
        let masks: Vec<u128> = (0..1u128 << n).collect();
        let lambda = lambda_exact(&explicit(n, &masks)).map_err(err)?;
        ensure(lambda == rational(1, 1), || format!("N = {n}: {lambda}"))?;
    }
    Ok("lambda = 1 for N = 1..10".into())
}

fn c3_fast_path() -> Outcome {
    let mut count = 0;
    for n in 1..=16 {
        for d in 1..=n {
            for (mode, spec) in [
                (LevelMode::ExactDegree, FamilySpec::Homogeneous { n, d }),
                (LevelMode::UpToDegree, FamilySpec::UpTo { n, d }),
            ] {
                let level = lambda_level_exact(n, d, mode).map_err(err)?;
                let sweep = lambda_exact(&make_family(&spec).map_err(err)?).map_err(err)?;
                ensure(level == sweep, || format!("N = {n}, d = {d}, {mode:?}: {level} vs {sweep}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} (N, d, mode) points agree exactly"))
}

fn c4_limit_at_scale() -> Outcome {
    let t = Instant::now();
    let l2 = to_f64(&lambda_level_exact(4000, 2, LevelMode::ExactDegree).map_err(err)?) / 4000.0;
    let t2 = t.elapsed();
    let closed = (2.0 / (std::f64::consts::PI * std::f64::consts::E)).sqrt();
    ensure((l2 - closed).abs() <= 0.005, || format!("d = 2: {l2} vs {closed}"))?;
    let t = Instant::now();
    let l3 = to_f64(&lambda_level_exact(2000, 3, LevelMode::ExactDegree).map_err(err)?) / 2000f64.powf(1.5);
    let t3 = t.elapsed();
    let c3 = limit_constant(3).map_err(err)?;
    ensure((l3 - c3).abs() <= 0.01, || format!("d = 3: {l3} vs {c3}"))?;
    ensure(t2.max(t3) < Duration::from_secs(30), || format!("took {t2:?} and {t3:?}"))?;
    Ok(format!("d = 2 off by {:.2e}, d = 3 off by {:.2e}", (l2 - closed).abs(), (l3 - c3).abs()))
}

fn c5_table() -> Outcome {
    let published = [(2, 0.814), (3, 0.811), (4, 0.808), (5, 0.807), (6, 0.806)];
    let mut worst = 0.0f64;
    for (d, p) in published {
        let df = d as f64;
        let normalized = normalized_limit_constant(d).map_err(err)?;
        let reference = p / df.powf(0.25);
        worst = worst.max((normalized - reference).abs());
        ensure((normalized - reference).abs() <= 0.002, || format!("d = {d}: {normalized} vs {reference}"))?;
    }
    // the closed form is the d = 2 table entry before division by 2^{1/4}
    let closed = 2f64.powf(1.75) / (std::f64::consts::E.sqrt() * (2.0 * std::f64::consts::PI).sqrt());
    let scaled = normalized_limit_constant(2).map_err(err)? * 2f64.powf(0.25);
    ensure((scaled - closed).abs() <= 1e-10, || format!("d = 2: {scaled} vs {closed}"))?;
    Ok(format!("max deviation {worst:.2e}, d = 2 closed form off by {:.1e}", (scaled - closed).abs()))
}

fn c6_identities() -> Outcome {
    for d in 0..=60usize {
        let scaled = p_poly(d).map_err(err)?.scale(&ExactRational::from_integer(factorial(d as u64).into()));
        ensure(scaled == hermite_poly(d).map_err(err)?, || format!("d = {d}"))?;
    }
    for d in 1..=5 {
        for n in d..=12 {
            let r = verify_power_identity(d, n).map_err(err)?;
            ensure(r.pass && r.max_discrepancy == 0, || format!("d = {d}, N = {n}: {}", r.max_discrepancy))?;
        }
    }
    for n in 2..=50usize {
        ensure(c_coefficient(2, 1, n).map_err(err)? == n as u128, || format!("c21 at N = {n}"))?;
        if n >= 3 {
            ensure(c_coefficient(3, 1, n).map_err(err)? == 3 * n as u128 - 2, || format!("c31 at N = {n}"))?;
        }
    }
    Ok("hermite scaling d <= 60, power identity d <= 5 N <= 12, c21 and c31 for N <= 50".into())
}

fn c7_beckner() -> Outcome {
    let mut worst = 0.0f64;
    for n in [10, 20, 40, 80, 160] {
        let a2 = beckner_coefficients(2, n).map_err(err)?.a[0];
        let a3 = beckner_coefficients(3, n).map_err(err)?.a[0];
        worst = worst.max(a2.abs()).max((a3 - 2.0).abs());
        ensure(a2.abs() <= 1e-8 && (a3 - 2.0).abs() <= 1e-8, || format!("N = {n}: a21 = {a2}, a31 = {a3}"))?;
    }
    let mut spread = 0.0f64;
    for d in [4, 5] {
        let fits: Vec<Vec<f64>> = [40, 80, 160]
            .iter()
            .map(|&n| beckner_coefficients(d, n).map(|f| f.a))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        for k in 0..fits[0].len() {
            let values: Vec<f64> = fits.iter().map(|a| a[k].abs()).collect();
            let hi = values.iter().cloned().fold(f64::MIN, f64::max);
            let lo = values.iter().cloned().fold(f64::MAX, f64::min);
            let rel = (hi - lo) / hi;
            spread = spread.max(rel);
            ensure(rel < 0.05, || format!("d = {d}, k = {}: {values:?}", k + 1))?;
        }
    }
    Ok(format!("low-degree deviation {worst:.1e}, d = 4, 5 spread {:.1}%", spread * 100.0))
}

fn c8_kappa() -> Outcome {
    let k = kappa_constant(1e-4).map_err(err)?;
    ensure((2.2085..=2.2095).contains(&k), || format!("{k}"))?;
    Ok(format!("kappa = {k:.6}"))
}

/// Largest `Σ|a_S|` over vertices of `{a : |Σ a_S χ_S(x)| ≤ 1 ∀x}`, found by
/// solving every square subsystem of active constraints.
fn sidon_by_vertices(n: usize, masks: &[u128]) -> f64 {
    let m = masks.len();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for x in 0..1u128 << n {
        let row: Vec<f64> = masks.iter().map(|&s| if (s & x).count_ones() % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let neg: Vec<f64> = row.iter().map(|v| -v).collect();
        if !rows.contains(&row) && !rows.contains(&neg) {
            rows.push(row);
        }
    }
    let feasible = |a: &[f64]| {
        rows.iter()
            .all(|r| r.iter().zip(a).map(|(u, v)| u * v).sum::<f64>().abs() <= 1.0 + 1e-9)
    };
    let mut best = 0.0f64;
    let mut chosen = Vec::with_capacity(m);
    fn subsets(start: usize, total: usize, need: usize, chosen: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if chosen.len() == need {
            visit(chosen);
            return;
        }
        for i in start..total {
            chosen.push(i);
            subsets(i + 1, total, need, chosen, visit);
            chosen.pop();
        }
    }
    subsets(0, rows.len(), m, &mut chosen, &mut |picked| {
        for signs in 0..1u32 << m {
            let mut a: Vec<Vec<f64>> = picked.iter().map(|&i| rows[i].clone()).collect();
            let mut b: Vec<f64> = (0..m).map(|k| if signs >> k & 1 == 1 { -1.0 } else { 1.0 }).collect();
            let Some(x) = gauss(&mut a, &mut b) else { return };
            if feasible(&x) {
                best = best.max(x.iter().map(|v| v.abs()).sum());
            }
        }
    });
    best
}

fn gauss(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let m = b.len();
    for col in 0..m {
        let p = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[p][col].abs() < 1e-9 {
            return None;
        }
        a.swap(col, p);
        b.swap(col, p);
        for r in 0..m {
            if r != col {
                let factor = a[r][col] / a[col][col];
                for k in col..m {
                    a[r][k] -= factor * a[col][k];
                }
                b[r] -= factor * b[col];
            }
        }
    }
    Some((0..m).map(|i| b[i] / a[i][i]).collect())
}

fn c9_sidon() -> Outcome {
    let full = sidon_exact(&explicit(2, &[0, 1, 2, 3]), 1e-9).map_err(err)?.value;
    ensure((full - 2.0).abs() <= 1e-8, || format!("full N = 2: {full}"))?;
    let h32 = sidon_exact(&homogeneous(3, 2), 1e-9).map_err(err)?.value;
    ensure((h32 - 1.0).abs() <= 1e-8, || format!("homogeneous(3, 2): {h32}"))?;
    let mut families = 0;
    for n in 1..=4usize {
        let all: Vec<u128> = (0..1u128 << n).collect();
        for size in 1..=4usize.min(all.len()) {
            let mut chosen = Vec::new();
            let mut failure = None;
            fn each(start: usize, all: &[u128], size: usize, chosen: &mut Vec<u128>, visit: &mut dyn FnMut(&[u128])) {
                if chosen.len() == size {
                    visit(chosen);
                    return;
                }
                for i in start..all.len() {
                    chosen.push(all[i]);
                    each(i + 1, all, size, chosen, visit);
                    chosen.pop();
                }
            }
            each(0, &all, size, &mut chosen, &mut |masks| {
                if failure.is_some() {
                    return;
                }
                families += 1;
                let lp = sidon_exact(&explicit(n, masks), 1e-9).map(|r| r.value);
                let oracle = sidon_by_vertices(n, masks);
                match lp {
                    Ok(v) if (v - oracle).abs() <= 1e-6 => {}
                    other => failure = Some(format!("N = {n}, sets {masks:?}: {other:?} vs {oracle}")),
                }
            });
            if let Some(f) = failure {
                return Err(f);
            }
        }
    }
    for (d, max_n) in [(2, 8), (3, 6)] {
        for n in d..=max_n {
            let r = check_sidon_projection_bound(n, d).map_err(err)?;
            ensure(r.pass, || format!("bound fails at N = {n}, d = {d}: {} > {}", r.sidon, r.rhs))?;
        }
    }
    Ok(format!("full(2) = {full}, homogeneous(3,2) = {h32}, {families} families match the vertex oracle, bound holds"))
}

fn c10_primes() -> Outcome {
    for n in 1..=16 {
        let h = haagerup_lambda(n).map_err(err)?;
        let e = lambda_exact(&homogeneous(n, 1)).map_err(err)?;
        ensure(h == e, || format!("n = {n}: {h} vs {e}"))?;
    }
    let r = prime_singleton_report(10).map_err(err)?;
    ensure(r.lambda == rational(3, 2), || format!("N = 10 gives {}", r.lambda))?;
    Ok("closed form = sweep for n <= 16, primes up to 10 give 3/2".into())
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cube-constants"))
}

fn c11_suites() -> Outcome {
    let out = binary().args(["verify", "--suite", "all", "--threads", "1"]).output().map_err(err)?;
    let code = out.status.code();
    let reports: Vec<Value> = serde_json::from_slice(&out.stdout).map_err(err)?;
    let named = |prefix: &str| reports.iter().filter(|r| r["name"].as_str().unwrap_or("").starts_with(prefix)).count();
    ensure(named("mckay c") == 3, || "missing McKay reports".into())?;
    ensure(named("partial binomial") == 1, || "missing Desigforo report".into())?;
    ensure(named("homogeneous part") >= 1, || "missing Klimek report".into())?;
    ensure(named("szarek") + named("Y /") == 2, || "missing Szarek reports".into())?;
    for r in &reports {
        if r["name"].as_str().unwrap_or("").starts_with("mckay c") {
            let hi = r["lhs"].as_f64().unwrap_or(f64::NAN);
            let lo: f64 = r["context"]["min_c"].as_str().and_then(|s| s.parse().ok()).unwrap_or(f64::NAN);
            ensure(lo >= 0.0 && hi <= (std::f64::consts::PI / 2.0).sqrt(), || format!("McKay range [{lo}, {hi}]"))?;
        }
    }
    let failing: Vec<&str> = reports.iter().filter(|r| r["pass"] != true).filter_map(|r| r["name"].as_str()).collect();
    ensure(failing.is_empty() && code == Some(0), || format!("exit {code:?}, failing {failing:?}"))?;
    Ok(format!("{} reports, exit 0", reports.len()))
}

fn c12_squarefree() -> Outcome {
    let r = squarefree_mc(16, 100_000, 42).map_err(err)?;
    let exact = r.exact.as_ref().map(to_f64).ok_or("no exact value at N = 16")?;
    let z = (r.estimate.mean - exact).abs() / r.estimate.stderr;
    ensure(r.within_4se == Some(true) && z <= 4.0, || format!("z = {z}"))?;
    let primes = prime_singleton_report(10_000).map_err(err)?;
    let big = squarefree_mc(10_000, 20_000, 42).map_err(err)?;
    Ok(format!(
        "N = 16 estimate within {z:.2} SE; report-only ratios: primes {:.4}, square-free {:.4}",
        primes.ratio, big.ratio
    ))
}

fn c13_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let family = dir.path().join("family.json");
    std::fs::write(&family, r#"{"kind":"explicit","N":5,"sets":[[1,2],[2,3],[3,4],[4,5],[1,5]]}"#).map_err(err)?;
    let family = family.to_str().unwrap().to_string();
    let runs: Vec<Vec<&str>> = vec![
        vec!["exact", "--family", &family],
        vec!["exact", "--family", "homog:18:3"],
        vec!["mc", "--family", "upto:40:2", "--samples", "50000"],
        vec!["limit", "--d", "3", "--ns", "50,500"],
        vec!["table"],
        vec!["sidon", "--family", "homog:6:2"],
        vec!["kappa"],
        vec!["verify", "--suite", "klimek"],
        vec!["families", "--family", "sqfree:30"],
        vec!["primes", "--N", "40", "--samples", "20000"],
    ];
    for args in &runs {
        let mut outputs = Vec::new();
        for threads in ["1", "8", "8"] {
            let out = binary().args(args).args(["--threads", threads]).output().map_err(err)?;
            ensure(out.status.success(), || format!("{args:?} exited {:?}", out.status.code()))?;
            outputs.push(out.stdout);
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("{args:?} output differs"))?;
    }
    Ok(format!("{} subcommand runs identical across reruns and 1 vs 8 threads", runs.len()))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 13] = [
        ("1 exactness vs closed forms", Duration::from_secs(5), c1_closed_forms),
        ("2 full-space identity", Duration::from_secs(10), c2_full_space),
        ("3 fast-path equivalence", Duration::from_secs(120), c3_fast_path),
        ("4 limit theorem at scale", Duration::from_secs(60), c4_limit_at_scale),
        ("5 table reproduction", Duration::from_secs(60), c5_table),
        ("6 identity suite", Duration::from_secs(120), c6_identities),
        ("7 beckner coefficients", Duration::from_secs(120), c7_beckner),
        ("8 kappa", Duration::from_secs(5), c8_kappa),
        ("9 sidon", Duration::from_secs(300), c9_sidon),
        ("10 haagerup and primes", Duration::from_secs(60), c10_primes),
        ("11 verification suites", Duration::from_secs(300), c11_suites),
        ("12 square-free cross-check", Duration::from_secs(300), c12_squarefree),
        ("13 determinism", Duration::from_secs(300), c13_determinism),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; over budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  {name:<30} {:>8.2}s  {detail}", elapsed.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name:<30} {:>8.2}s  {detail}", elapsed.as_secs_f64());
            }
        }
    }
    println!("{} of 13 criteria pass", 13 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
