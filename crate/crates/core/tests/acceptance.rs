//! Acceptance gate: one pass/fail line per criterion; exits non-zero if any fails.

use std::time::{Duration, Instant};

use germlab::germs::{EvenPrefactor, TermSigns};
use germlab::verify::algebraic::{
    catalan_suite, weyl_suite, zeta_suite, CatalanConfig, WeylConfig, ZetaConfig,
};
use germlab::verify::compare_across_jobs;
use germlab::verify::endoscopy::{endoscopy_suite, EndoscopyConfig};
use germlab::verify::even::{even_suite, CurveConvention, EvenConfig};
use germlab::verify::flags::{flag_suite, germ_suite, OddCases, VariantOutcome};
use germlab::verify::parity::{parity_suite, ParityConfig};
use germlab::verify::VerifyError;

struct Line {
    id: usize,
    passed: bool,
    detail: String,
    elapsed: Duration,
    limit: Duration,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn line(id: usize, limit_secs: u64, passed: bool, detail: String, elapsed: Duration) -> Line {
    Line {
        id,
        passed,
        detail,
        elapsed,
        limit: Duration::from_secs(limit_secs),
    }
}

fn criterion_1() -> Line {
    let (r, t) = timed(|| catalan_suite(&CatalanConfig::default()));
    let detail = format!(
        "Catalan recurrence, convolution, series, inverse pair and composite matrix (composite {})",
        r.composite
    );
    line(1, 10, r.passed, detail, t)
}

fn criterion_2() -> Line {
    let (r, t) = timed(|| weyl_suite(&WeylConfig::default()));
    line(
        2,
        120,
        r.passed,
        format!("{} (g, m, m') rows, {} failing", r.rows.len(), r.failures),
        t,
    )
}

fn criterion_3() -> Result<Line, VerifyError> {
    let (r, t) = timed(|| zeta_suite(&ZetaConfig::default()));
    let r = r?;
    Ok(line(
        3,
        60,
        r.passed && r.cases >= 200,
        format!("{} sampled curves, {} failing", r.cases, r.failing.len()),
        t,
    ))
}

fn criterion_4() -> Result<Line, VerifyError> {
    let (r, t) = timed(|| flag_suite(&OddCases::default()));
    let r = r?;
    let detail = format!(
        "{} polynomials ({} with the group route), anchor J = {:?}, Γ = {:?}, {} failing",
        r.cases,
        r.group_route_cases,
        r.anchor.j,
        r.anchor.gamma,
        r.failing.len()
    );
    Ok(line(4, 1800, r.passed, detail, t))
}

fn criterion_5() -> Result<Line, VerifyError> {
    let (r, t) = timed(|| germ_suite(&OddCases::default()));
    let r = r?;
    let detail = format!(
        "{} orbits over {} polynomials; main variant {}/{}, long variant {}/{}; uniform: {:?}",
        r.orbits,
        r.cases,
        r.main_matching_cases,
        r.cases,
        r.long_matching_cases,
        r.cases,
        r.uniform_variant
    );
    Ok(line(
        5,
        1800,
        r.passed && r.uniform_variant == VariantOutcome::Main,
        detail,
        t,
    ))
}

fn criterion_6() -> Result<Line, VerifyError> {
    let (r, t) = timed(|| even_suite(&EvenConfig::default()));
    let r = r?;
    let uniform: Vec<String> = r
        .variants
        .iter()
        .filter(|v| v.uniform)
        .map(|v| format!("{:?}/{:?}", v.signs, v.prefactor))
        .collect();
    let expected = r.variants.iter().any(|v| {
        v.uniform && v.signs == TermSigns::Swapped && v.prefactor == EvenPrefactor::Stabilizer
    });
    let detail = format!(
        "{} polynomials, surviving convention {:?}, uniform variants {:?}",
        r.cases, r.surviving_conventions, uniform
    );
    Ok(line(
        6,
        1800,
        r.passed && expected && r.surviving_conventions == [CurveConvention::Plain],
        detail,
        t,
    ))
}

fn criterion_7() -> Result<Line, VerifyError> {
    let (r, t) = timed(|| endoscopy_suite(&EndoscopyConfig::default()));
    let r = r?;
    let cases: usize = r.summaries.iter().map(|s| s.cases).sum();
    let enough = r.summaries.iter().all(|s| s.cases >= 50);
    let detail = format!(
        "{} pairs, {} failing; κ = second-factor norm character matches {}/{} (informational)",
        cases,
        r.failing.len(),
        r.kappa.second_factor_signed,
        r.kappa.pairs
    );
    Ok(line(7, 300, r.passed && enough, detail, t))
}

fn criterion_8() -> Result<Line, VerifyError> {
    let (r, t) = timed(|| parity_suite(&ParityConfig::default()));
    let r = r?;
    let found = r.rows.iter().filter(|row| row.witness.is_some()).count();
    Ok(line(
        8,
        60,
        r.passed,
        format!(
            "{found}/{} rows with a witness, missing {:?}",
            r.rows.len(),
            r.missing
        ),
        t,
    ))
}

/// Reduced configurations exercise every sampled and parallel code path.
fn criterion_9() -> Result<Line, VerifyError> {
    const JOBS: [usize; 3] = [1, 2, 5];
    let start = Instant::now();
    let mut identical = Vec::new();
    identical.push((
        "catalan",
        compare_across_jobs(&JOBS, || Ok(catalan_suite(&CatalanConfig::default())))?.1,
    ));
    identical.push((
        "weyl",
        compare_across_jobs(&JOBS, || {
            Ok(weyl_suite(&WeylConfig {
                gmax: 5,
                ..WeylConfig::default()
            }))
        })?
        .1,
    ));
    let zeta = ZetaConfig {
        samples_per_q: 20,
        seed: 9,
        ..ZetaConfig::default()
    };
    identical.push(("zeta", compare_across_jobs(&JOBS, || zeta_suite(&zeta))?.1));
    let odd = OddCases {
        exhaustive: vec![(3, 3)],
        sampled: vec![(3, 5, 3)],
        seed: 9,
        group_route: true,
    };
    identical.push(("flags", compare_across_jobs(&JOBS, || flag_suite(&odd))?.1));
    identical.push(("germs", compare_across_jobs(&JOBS, || germ_suite(&odd))?.1));
    let even = EvenConfig {
        exhaustive: vec![],
        sampled: vec![(3, 4, 10), (3, 6, 2)],
        seed: 9,
    };
    identical.push(("even", compare_across_jobs(&JOBS, || even_suite(&even))?.1));
    let endo = EndoscopyConfig {
        pairs: 4,
        kappa_pairs: 3,
        seed: 9,
        ..EndoscopyConfig::default()
    };
    identical.push((
        "endoscopy",
        compare_across_jobs(&JOBS, || endoscopy_suite(&endo))?.1,
    ));
    identical.push((
        "parity",
        compare_across_jobs(&JOBS, || {
            parity_suite(&ParityConfig {
                gmax: 2,
                qs: vec![3, 5],
            })
        })?
        .1,
    ));
    let differing: Vec<&str> = identical
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(n, _)| *n)
        .collect();
    let detail = format!(
        "{} suites under {:?} threads, differing: {:?}",
        identical.len(),
        JOBS,
        differing
    );
    Ok(line(9, 1800, differing.is_empty(), detail, start.elapsed()))
}

fn main() -> std::process::ExitCode {
    let lines = vec![
        criterion_1(),
        criterion_2(),
        criterion_3().expect("zeta suite runs"),
        criterion_4().expect("flag suite runs"),
        criterion_5().expect("germ suite runs"),
        criterion_6().expect("even suite runs"),
        criterion_7().expect("endoscopy suite runs"),
        criterion_8().expect("parity suite runs"),
        criterion_9().expect("determinism suite runs"),
    ];
    let mut all = true;
    for l in &lines {
        let in_time = l.elapsed <= l.limit;
        let ok = l.passed && in_time;
        all &= ok;
        println!(
            "criterion {}: {} | {} | {:.1}s (limit {}s{})",
            l.id,
            if ok { "PASS" } else { "FAIL" },
            l.detail,
            l.elapsed.as_secs_f64(),
            l.limit.as_secs(),
            if in_time { "" } else { ", exceeded" }
        );
    }
    if all {
        std::process::ExitCode::SUCCESS
    } else {
        println!("acceptance criteria failed");
        std::process::ExitCode::FAILURE
    }
}
