//! Acceptance suite. Runs every criterion in order, prints one verdict line
//! each, and exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperwell::aim::{aim_find_eigenvalues, m1_wavefunction, AimOptions, AimProblem};
use hyperwell::fd::{fd_spectrum, fd_spectrum_richardson, GridSpec};
use hyperwell::heun::{sufficiency, HeunCoefficients};
use hyperwell::poschl_teller::{pt_eigenvalue, pt_spectrum, pt_wavefunction};
use hyperwell::potential::{exact_bound_state_count_pt, PotentialSpec};
use hyperwell::qes::{identify_degree, qes_enumerate, qes_wavefunction, EnumerateOptions, QesPair};
use hyperwell::reference::{parse_strength, reproduce_table, rows_for, TableReport, TableSettings};
use hyperwell::{BigReal, EigenResult, Parity, Precision};

struct Verdict {
    pass: bool,
    detail: String,
}

fn prec() -> Precision {
    Precision::DEFAULT
}

fn num(x: i64) -> BigReal {
    BigReal::from_i64(x, prec())
}

fn dec(s: &str) -> BigReal {
    BigReal::parse(s, prec()).expect("valid decimal")
}

fn within(elapsed: Duration, budget_secs: u64) -> (bool, String) {
    let ok = elapsed <= Duration::from_secs(budget_secs);
    (ok, format!("{:.1}s of {budget_secs}s", elapsed.as_secs_f64()))
}

/// Gated failures with their deviations, for the verdict line.
fn describe_failures(report: &TableReport) -> Vec<String> {
    report
        .rows
        .iter()
        .filter(|r| r.gated && !r.pass)
        .map(|r| {
            let dev = r.deviation.as_ref().map_or("none".into(), |d| d.to_significant(2));
            format!("T{} v={} level {}: dev {dev}", r.row.table, r.row.v_text, r.row.level)
        })
        .collect()
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let unit = BigReal::pow10(-20, prec());
    let rows = rows_for("1").expect("table 1");
    let mut bad = Vec::new();
    for row in &rows {
        let v = row.v(prec()).expect("strength");
        let exact = pt_eigenvalue(&v, row.parity, row.level).expect("state exists");
        if (exact - row.epsilon(prec())).abs() > unit {
            bad.push(format!("v={} level {}", row.v_text, row.level));
        }
    }
    let (fast, time) = within(start.elapsed(), 1);
    Verdict {
        pass: bad.is_empty() && fast,
        detail: format!("{} rows, {} mismatched, {time}", rows.len(), bad.len()),
    }
}

fn criterion_2() -> Verdict {
    let report = reproduce_table("1", &TableSettings::default()).expect("table 1");
    let (fast, time) = within(report.elapsed, 30);
    let worst = report.rows.iter().filter_map(|r| r.iterations).max().unwrap_or(0);
    let failures = describe_failures(&report);
    Verdict {
        pass: report.passed() && fast,
        detail: format!("max iterations {worst}, {} failing {:?}, {time}", failures.len(), failures),
    }
}

fn criterion_3() -> Verdict {
    let mut failures = Vec::new();
    let mut elapsed = Duration::ZERO;
    let mut worst = BigReal::zero(prec());
    let mut rows = 0;
    for table in ["2", "3"] {
        let report = reproduce_table(table, &TableSettings::default()).expect("table");
        elapsed += report.elapsed;
        rows += report.rows.len();
        for r in &report.rows {
            if let Some(d) = &r.deviation {
                worst = worst.max(d.clone());
            }
        }
        failures.extend(describe_failures(&report));
    }
    let (fast, time) = within(elapsed, 600);
    Verdict {
        pass: failures.is_empty() && fast,
        detail: format!(
            "{rows} rows, {} outside ±2e-24, largest deviation {}, {time}",
            failures.len(),
            worst.to_significant(2)
        ),
    }
}

fn criterion_4() -> Verdict {
    let mut problems = Vec::new();
    let twelve = BigReal::pow10(-12, prec()) * 2;
    let window = BigReal::pow10(-10, prec());
    for (v, parity, printed) in [
        ("29+8*sqrt(13)", Parity::Even, "-5.302775637732"),
        ("125+16*sqrt(61)", Parity::Odd, "-29.215374513860"),
    ] {
        let v = parse_strength(v, prec()).expect("strength");
        match identify_degree(parity, &v, 5, &window) {
            Some(pair) if (pair.epsilon.clone() - dec(printed)).abs() <= twelve => {}
            _ => problems.push(format!("anchor {printed}")),
        }
    }

    let mut reported = 0;
    let mut table4 = Duration::ZERO;
    let mut rest = Duration::ZERO;
    for table in ["4", "5", "6"] {
        let report = reproduce_table(table, &TableSettings::default()).expect("table");
        if table == "4" {
            table4 = report.elapsed;
        } else {
            rest += report.elapsed;
        }
        reported += report.rows.iter().filter(|r| !r.gated).count();
        problems.extend(describe_failures(&report));
    }
    let (fast, time) = within(table4, 600);
    Verdict {
        pass: problems.is_empty() && fast,
        detail: format!(
            "{} failing {:?}; {reported} rows reported only; Table 4 {time}, Tables 5-6 {:.1}s",
            problems.len(),
            problems,
            rest.as_secs_f64()
        ),
    }
}

fn criterion_5() -> Verdict {
    let start = Instant::now();
    let mut problems = Vec::new();
    for degree in 3..=5 {
        for parity in Parity::BOTH {
            let found = qes_enumerate(degree, parity, &EnumerateOptions::default()).expect("enumeration");
            if found.pairs.len() != degree + 1 {
                problems.push(format!("N={degree} {parity}: {} pairs", found.pairs.len()));
            }
        }
    }
    let report = reproduce_table("A2", &TableSettings::default()).expect("appendix table");
    problems.extend(describe_failures(&report));
    let (fast, time) = within(start.elapsed(), 300);
    Verdict {
        pass: problems.is_empty() && fast,
        detail: format!("{} rows, {} problems {:?}, {time}", report.rows.len(), problems.len(), problems),
    }
}

/// The closed-form constraint polynomials for `N = 1..=4`.
fn printed_constraint(degree: usize, c: &HeunCoefficients, t: &BigReal) -> BigReal {
    let (a1, a2, b0, b1, b2) = (&c.a1, &c.a2, &c.b0, &c.b1, &c.b2);
    let t2 = t.square();
    let t3 = &t2 * t;
    let t4 = &t3 * t;
    match degree {
        1 => &t2 - &(b1 * t) + b0 * b2,
        2 => {
            &t3 - &((a2 * 2 + b1 * 3) * &t2) + (b1 * (a2 + b1) + (a1 + &(b0 * 2)) * b2) * 2 * t
                - b0 * (a2 + b1) * b2 * 4
        }
        3 => {
            let c2 = a2.square() * 12 + a2 * b1 * 26 + b1.square() * 11 + (a1 + b0) * b2 * 10;
            let c1 = (b1 * (a2 + b1) * (a2 * 2 + b1) + (a1 * a2 * 4 + a2 * b0 * 8 + a1 * b1 * 3 + b0 * b1 * 5) * b2) * 6;
            let c0 = b0 * b2 * 9 * ((a2 + b1) * (a2 * 2 + b1) * 2 + (a1 * 2 + b0) * b2);
            &t4 - &((a2 * 4 + b1 * 3) * 2 * &t3) + c2 * &t2 - c1 * t + c0
        }
        4 => {
            let t5 = &t4 * t;
            let c4 = (a2 * 2 + b1) * 10;
            let c3 = a2.square() * 108 + a2 * b1 * 130 + b1.square() * 35 + a1 * b2 * 30 + b0 * b2 * 20;
            let c2 = (a2.powi(3) * 72
                + a2.square() * b1 * 186
                + a2 * b1.square() * 127
                + b1.powi(3) * 25
                + a1 * a2 * b2 * 138
                + a2 * b0 * b2 * 134
                + a1 * b1 * b2 * 69
                + b0 * b1 * b2 * 60)
                * 2;
            let c1 = (a2.powi(3) * b1 * 18
                + a2.square() * b1.square() * 33
                + a2 * b1.powi(3) * 18
                + b1.powi(4) * 3
                + a1 * a2.square() * b2 * 54
                + a2.square() * b0 * b2 * 108
                + a1 * a2 * b1 * b2 * 66
                + a2 * b0 * b1 * b2 * 110
                + a1 * b1.square() * b2 * 18
                + b0 * b1.square() * b2 * 26
                + a1.square() * b2.square() * 9
                + a1 * b0 * b2.square() * 24
                + b0.square() * b2.square() * 8)
                * 8;
            let c0 = b0
                * b2
                * 32
                * (a2.powi(3) * 18
                    + a2.square() * b1 * 33
                    + a2 * b1.square() * 18
                    + b1.powi(3) * 3
                    + a1 * a2 * b2 * 21
                    + a2 * b0 * b2 * 10
                    + a1 * b1 * b2 * 9
                    + b0 * b1 * b2 * 4);
            t5 - c4 * &t4 + c3 * &t3 - c2 * &t2 + c1 * t - c0
        }
        _ => unreachable!("constraints printed for N ≤ 4"),
    }
}

fn criterion_6() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let random = |rng: &mut ChaCha8Rng| {
        let x: f64 = rng.gen_range(-5.0..5.0);
        // sprinkle extra digits beyond f64 so the check exercises full precision
        BigReal::from_f64(x, prec()) + BigReal::from_ratio(rng.gen_range(1..1000), 7919, prec())
    };
    let rel = BigReal::pow10(-60, prec());
    let mut worst = BigReal::zero(prec());
    let mut checked = 0;
    let mut failed = 0;
    for degree in 1..=4 {
        for _ in 0..20 {
            let coeffs = HeunCoefficients {
                a1: random(&mut rng),
                a2: random(&mut rng),
                b0: random(&mut rng),
                b1: random(&mut rng),
                b2: random(&mut rng),
                tau0: num(0),
                tau1: num(0),
            };
            for _ in 0..20 {
                let t = random(&mut rng);
                let from_recurrence = sufficiency(&coeffs, degree, &t);
                let printed = printed_constraint(degree, &coeffs, &t);
                let scale = from_recurrence.abs().max(printed.abs());
                let err = (from_recurrence - printed).abs() / scale;
                if err > rel {
                    failed += 1;
                }
                worst = worst.max(err);
                checked += 1;
            }
        }
    }
    Verdict {
        pass: failed == 0,
        detail: format!("{checked} evaluations, {failed} above 1e-60, worst relative {}", worst.to_significant(2)),
    }
}

/// Every high-precision level of one sector, by the engine that owns it.
fn library_levels(m: u32, v: &BigReal, parity: Parity) -> Vec<EigenResult> {
    if m == 0 {
        return pt_spectrum(v, parity);
    }
    let n_max = 80;
    let problem = AimProblem::new(m, parity, v.clone(), n_max).expect("problem");
    let options = AimOptions::new(&problem).with_n_max(n_max).with_tol(BigReal::pow10(-10, prec()));
    aim_find_eigenvalues(&problem, &options).expect("scan")
}

fn criterion_7() -> Verdict {
    let start = Instant::now();
    let grid = GridSpec::standard();
    let cases = [
        (0, "1"),
        (0, "25"),
        (1, "5"),
        (1, "100"),
        (2, "29+8*sqrt(13)"),
        (2, "1740.792785280901099"),
    ];
    let mut worst = 0f64;
    let mut compared = 0;
    let mut problems = Vec::new();
    for (m, v_text) in cases {
        let v = parse_strength(v_text, prec()).expect("strength");
        let spec = PotentialSpec::new(m, v.clone()).expect("spec");
        let mut levels: Vec<EigenResult> = Parity::BOTH.iter().flat_map(|&p| library_levels(m, &v, p)).collect();
        levels.sort_by(|a, b| a.epsilon.partial_cmp(&b.epsilon).expect("finite"));
        let oracle = fd_spectrum_richardson(&spec, &grid, levels.len() + 2).expect("oracle");
        for level in &levels {
            let e = level.epsilon.to_f64();
            let gap = oracle.iter().map(|o| (o - e).abs()).fold(f64::INFINITY, f64::min);
            worst = worst.max(gap);
            compared += 1;
            if gap > 5e-6 {
                problems.push(format!("m={m} v={v_text} ε={e:.9} gap {gap:.1e}"));
            }
        }
    }
    let (fast, time) = within(start.elapsed(), 120);
    Verdict {
        pass: problems.is_empty() && fast,
        detail: format!("{compared} levels, worst gap {worst:.1e}, {} problems {:?}, {time}", problems.len(), problems),
    }
}

fn aim_levels(m: u32, parity: Parity, v: &BigReal, r0: &str, n_max: usize, tol: &BigReal) -> Vec<EigenResult> {
    let problem = AimProblem::with_r0(m, parity, v.clone(), dec(r0), n_max).expect("problem");
    let options = AimOptions::new(&problem).with_n_max(n_max).with_tol(tol.clone());
    aim_find_eigenvalues(&problem, &options).expect("scan")
}

fn criterion_8() -> Verdict {
    let start = Instant::now();
    let mut problems: Vec<String> = Vec::new();
    let mut check = |ok: bool, what: String| {
        if !ok {
            problems.push(what);
        }
    };

    // potentials are even
    for m in 0..=2 {
        let spec = PotentialSpec::new(m, dec("37.25")).expect("spec");
        for z in ["0.1", "0.77", "2.5", "6"] {
            let z = dec(z);
            check(spec.value(&z) == spec.value(&-z.clone()), format!("V_{m} not even"));
        }
    }

    // constructed wavefunctions: definite parity and small residual
    let pt_v = num(25);
    let qes_pairs: Vec<QesPair> = [(Parity::Even, 2), (Parity::Odd, 1)]
        .into_iter()
        .flat_map(|(p, n)| qes_enumerate(n, p, &EnumerateOptions::default()).expect("enumeration").pairs)
        .collect();
    let m1_even = dec("-0.54795220509546095910308169637");
    let z_probe = dec("1.1");
    for parity in Parity::BOTH {
        let spec = PotentialSpec::new(0, pt_v.clone()).expect("spec");
        for n in 0..exact_bound_state_count_pt(&pt_v, parity) {
            let psi = |z: &BigReal| pt_wavefunction(&pt_v, parity, n, z).expect("state");
            let eps = pt_eigenvalue(&pt_v, parity, n).expect("state");
            let r = spec.residual_check(&psi, &eps, &num(-4), &num(4), 17);
            check(r.relative < 1e-8, format!("PT {parity} {n} residual {:.1e}", r.relative));
            let sign = if parity == Parity::Even { 1 } else { -1 };
            check((psi(&z_probe) - psi(&-z_probe.clone()) * sign).abs() < BigReal::pow10(-80, prec()), format!("PT {parity} {n} parity"));
        }
    }
    for pair in &qes_pairs {
        let spec = PotentialSpec::new(2, pair.v.clone()).expect("spec");
        let psi = |z: &BigReal| qes_wavefunction(pair, z);
        let r = spec.residual_check(&psi, &pair.epsilon, &num(-4), &num(4), 17);
        check(r.relative < 1e-8, format!("QES N={} residual {:.1e}", pair.degree, r.relative));
        let sign = if pair.parity == Parity::Even { 1 } else { -1 };
        check((psi(&z_probe) - psi(&-z_probe.clone()) * sign).abs() < BigReal::pow10(-80, prec()), "QES parity".into());
    }
    {
        let spec = PotentialSpec::new(1, num(5)).expect("spec");
        let psi = |z: &BigReal| m1_wavefunction(Parity::Even, &m1_even, &num(5), z, 3000).expect("series");
        let r = spec.residual_check(&psi, &m1_even, &dec("0.5"), &num(4), 8);
        check(r.relative < 1e-8, format!("m=1 residual {:.1e}", r.relative));
    }

    // ordering and census
    let census_tol = BigReal::pow10(-12, prec());
    for v in [1, 4, 9, 16, 25] {
        let v = num(v);
        let mut evens = Vec::new();
        let mut odds = Vec::new();
        for parity in Parity::BOTH {
            let found = aim_levels(0, parity, &v, "0.5", 30, &census_tol);
            check(found.len() == exact_bound_state_count_pt(&v, parity), format!("census v={} {parity}", v.to_f64()));
            check(found.windows(2).all(|w| w[0].epsilon < w[1].epsilon), "ascending".into());
            let energies: Vec<f64> = found.iter().map(|r| r.epsilon.to_f64()).collect();
            if parity == Parity::Even {
                evens = energies;
            } else {
                odds = energies;
            }
        }
        // even and odd levels interleave, starting with an even one
        let mut merged: Vec<(f64, bool)> = evens.iter().map(|&e| (e, true)).chain(odds.iter().map(|&e| (e, false))).collect();
        merged.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
        check(merged.iter().enumerate().all(|(i, &(_, even))| even == (i % 2 == 0)), "interleaving".into());
    }

    // expansion point
    let tol = BigReal::pow10(-20, prec());
    for parity in Parity::BOTH {
        let runs: Vec<Vec<EigenResult>> = ["0.3", "0.5", "0.7"].iter().map(|r0| aim_levels(1, parity, &num(5), r0, 60, &tol)).collect();
        let ground: Vec<&BigReal> = runs.iter().map(|r| &r[0].epsilon).collect();
        let spread = (ground[0].clone() - ground[1]).abs().max((ground[2].clone() - ground[1]).abs());
        check(spread <= tol.clone() * 10, format!("r0 spread {} for {parity}", spread.to_significant(2)));
    }

    // oracle convergence order
    for (v, parity, n) in [(9, Parity::Even, 0), (25, Parity::Odd, 1)] {
        let spec = PotentialSpec::new(0, num(v)).expect("spec");
        let exact = pt_eigenvalue(&num(v), parity, n).expect("state").to_f64();
        let k = 2 * n + usize::from(parity == Parity::Odd);
        let coarse = fd_spectrum(&spec, &GridSpec::new(15.0, 2001).expect("grid"), k + 1).expect("fd")[k];
        let fine = fd_spectrum(&spec, &GridSpec::new(15.0, 4001).expect("grid"), k + 1).expect("fd")[k];
        let ratio = (coarse - exact).abs() / (fine - exact).abs();
        check((ratio - 4.0).abs() < 0.2, format!("Richardson ratio {ratio:.3}"));
    }

    // parallel scans are reproducible
    let a = aim_levels(2, Parity::Odd, &num(200), "0.5", 24, &BigReal::pow10(-8, prec()));
    let b = aim_levels(2, Parity::Odd, &num(200), "0.5", 24, &BigReal::pow10(-8, prec()));
    check(a == b && !a.is_empty(), "determinism".into());

    Verdict {
        pass: problems.is_empty(),
        detail: format!("{} problems {:?}, {:.1}s", problems.len(), problems, start.elapsed().as_secs_f64()),
    }
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Verdict); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut all = true;
    for (id, run) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let verdict = run();
        all &= verdict.pass;
        println!("criterion {id}: {} ({})", if verdict.pass { "PASS" } else { "FAIL" }, verdict.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
