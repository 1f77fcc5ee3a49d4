//! Command-line driver: exact computations for one characteristic polynomial
//! and the verification suites, with versioned JSON or CSV output.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use germlab::algebra::rational::q_render;
use germlab::algebra::{factor, parse_poly, Field, Poly};
use germlab::germs::{
    even_covers_from_flags, even_stable_from_cover_sum, germ_from_flags, nilpotent_labels,
    odd_formula, stable_germs, sym_tilde_from_exact, two_torsion_order, Branch, EvenPrefactor,
    OddVariant, TermSigns,
};
use germlab::quadrics::{
    build_orbit_representatives, even_census, exact_flags_from_group, odd_census, so_order,
    torsion_sizes, CornerSign, NilpotentFamily, MAX_GROUP_ORDER,
};
use germlab::verify::algebraic::{
    catalan_suite, weyl_suite, zeta_suite, CatalanConfig, WeylConfig, ZetaConfig,
};
use germlab::verify::endoscopy::{endoscopy_suite, EndoscopyConfig};
use germlab::verify::even::{even_suite, EvenConfig};
use germlab::verify::flags::{flag_suite, germ_suite, OddCases};
use germlab::verify::parity::{parity_suite, ParityConfig};
use germlab::zeta::{weil_polynomial, CurveModel, Parity};

/// Output schema identifier; bump on incompatible envelope changes.
const SCHEMA: &str = "germlab/1";

#[derive(Parser)]
#[command(
    name = "germlab",
    version,
    about = "Stable germs of self-adjoint operators over finite fields"
)]
struct Cli {
    /// Worker threads; reports do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct PolyArgs {
    /// Field size, a prime power.
    #[arg(long)]
    q: u64,
    /// Coefficients, constant term first, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
}

#[derive(Subcommand)]
enum Command {
    /// Point counts, Weil polynomial, stable coefficients and symmetric powers of `y^2 = f`.
    Zeta(PolyArgs),
    /// Flag census for every orbit with the given characteristic polynomial.
    Flags(PolyArgs),
    /// Orbital counts over the group for every orbit (odd dimension).
    Orbital(PolyArgs),
    /// Germs per orbit and stable germs.
    Germs(PolyArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Override the number of sampled inputs per group.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Catalan,
    Weyl,
    Zeta,
    Flags,
    Germs,
    Even,
    Endoscopy,
    Parity,
    All,
}

impl Suite {
    const EACH: [Suite; 8] = [
        Suite::Catalan,
        Suite::Weyl,
        Suite::Zeta,
        Suite::Flags,
        Suite::Germs,
        Suite::Even,
        Suite::Endoscopy,
        Suite::Parity,
    ];

    fn name(self) -> &'static str {
        match self {
            Suite::Catalan => "catalan",
            Suite::Weyl => "weyl",
            Suite::Zeta => "zeta",
            Suite::Flags => "flags",
            Suite::Germs => "germs",
            Suite::Even => "even",
            Suite::Endoscopy => "endoscopy",
            Suite::Parity => "parity",
            Suite::All => "all",
        }
    }
}

/// A command result: the report plus a flat table for CSV output.
struct Outcome {
    report: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    passed: bool,
}

fn load(args: &PolyArgs) -> Result<(Arc<Field>, Poly)> {
    let f = Field::cached(args.q).with_context(|| format!("no field of order {}", args.q))?;
    let p = parse_poly(&f, &args.poly).context("parsing --poly")?;
    if p.degree().unwrap_or(0) == 0 {
        bail!("polynomial must be nonconstant");
    }
    Ok((f, p))
}

fn monic_charpoly(f: &Arc<Field>, p: &Poly) -> Result<Poly> {
    if !p.is_monic() {
        bail!("characteristic polynomial must be monic");
    }
    if !factor(f, p)?.is_squarefree() {
        bail!("characteristic polynomial must be squarefree");
    }
    Ok(p.clone())
}

fn run_zeta(args: &PolyArgs) -> Result<Outcome> {
    let (f, p) = load(args)?;
    let curve = CurveModel::new(&f, p)?;
    let w = weil_polynomial(&curve)?;
    let a = w.a_stable();
    let len = 2 * w.genus + 3;
    let sym: Vec<i128> = (0..len).map(|m| w.sym_power_count(m)).collect();
    let x: Vec<i128> = (0..len as i64).map(|m| w.x_count(m)).collect();
    let twist = weil_polynomial(&curve.quadratic_twist())?;
    let rows = (0..len)
        .map(|m| {
            vec![
                m.to_string(),
                a.get(m).map_or(String::new(), |v| v.to_string()),
                w.a_hat_at(m).to_string(),
                sym[m].to_string(),
                x[m].to_string(),
            ]
        })
        .collect();
    Ok(Outcome {
        report: json!({
            "q": w.q,
            "poly": curve.poly().to_list(),
            "weil": w,
            "a_stable": a,
            "a_hat": w.a_hat(),
            "sym_power_counts": sym,
            "x_counts": x,
            "p_at_one": w.p_at_one(),
            "twist_counts": twist.counts,
        }),
        header: vec!["m", "a_stable", "a_hat", "sym_power_count", "x_count"],
        rows,
        passed: true,
    })
}

fn run_flags(args: &PolyArgs) -> Result<Outcome> {
    let (f, p) = load(args)?;
    let p = monic_charpoly(&f, &p)?;
    let reps = build_orbit_representatives(&f, &p)?;
    let odd = p.degree().unwrap_or(0) % 2 == 1;
    let mut orbits = Vec::new();
    let mut rows = Vec::new();
    for (i, rep) in reps.iter().enumerate() {
        if odd {
            let c = odd_census(&f, &rep.matrix, CornerSign::Matched)?;
            for (m, e) in c.exact.iter().enumerate() {
                rows.push(vec![
                    i.to_string(),
                    m.to_string(),
                    e.to_string(),
                    String::new(),
                ]);
            }
            orbits
                .push(json!({ "label": rep.label(i), "census": c, "stratified": c.stratified() }));
        } else {
            let c = even_census(&f, &rep.matrix)?;
            for (m, e) in c.exact.iter().enumerate() {
                rows.push(vec![
                    i.to_string(),
                    m.to_string(),
                    e[0].to_string(),
                    e[1].to_string(),
                ]);
            }
            orbits
                .push(json!({ "label": rep.label(i), "census": c, "consistent": c.consistent() }));
        }
    }
    Ok(Outcome {
        report: json!({ "q": f.order(), "poly": p.to_list(), "orbits": orbits }),
        header: vec!["orbit", "m", "exact", "exact_second_ruling"],
        rows,
        passed: true,
    })
}

fn run_orbital(args: &PolyArgs) -> Result<Outcome> {
    let (f, p) = load(args)?;
    let p = monic_charpoly(&f, &p)?;
    let n = p.degree().unwrap_or(0);
    if n % 2 == 0 {
        bail!("orbital counts are implemented for odd dimension");
    }
    let order = so_order(n, f.order() as u128);
    if order > MAX_GROUP_ORDER {
        bail!(
            "SO_{n}(F_{}) has order {order}, above the enumeration bound {MAX_GROUP_ORDER}",
            f.order()
        );
    }
    let g = (n - 1) / 2;
    let reps = build_orbit_representatives(&f, &p)?;
    let mut orbits = Vec::new();
    let mut rows = Vec::new();
    for (i, rep) in reps.iter().enumerate() {
        let mut per_family = serde_json::Map::new();
        for family in [NilpotentFamily::Primary, NilpotentFamily::Companion] {
            let exact = (0..=g)
                .map(|m| exact_flags_from_group(&f, &rep.matrix, m, family))
                .collect::<Result<Vec<u64>, _>>()?;
            for (m, e) in exact.iter().enumerate() {
                rows.push(vec![
                    i.to_string(),
                    json!(family).as_str().unwrap_or("").to_string(),
                    m.to_string(),
                    e.to_string(),
                ]);
            }
            per_family.insert(
                json!(family).as_str().unwrap_or("").to_string(),
                json!(exact),
            );
        }
        orbits.push(json!({ "label": rep.label(i), "exact_flags": per_family }));
    }
    Ok(Outcome {
        report: json!({ "q": f.order(), "poly": p.to_list(), "group_order": order.to_string(), "orbits": orbits }),
        header: vec!["orbit", "family", "m", "exact_flags"],
        rows,
        passed: true,
    })
}

fn run_germs(args: &PolyArgs) -> Result<Outcome> {
    let (f, p) = load(args)?;
    let p = monic_charpoly(&f, &p)?;
    let n = p.degree().unwrap_or(0);
    let q = f.order();
    let curve = CurveModel::new(&f, p.clone())?;
    let stable = stable_germs(&curve)?;
    let reps = build_orbit_representatives(&f, &p)?;
    let mut rows = Vec::new();
    let report = if curve.parity() == Parity::Odd {
        let g = (n - 1) / 2;
        let h0 = two_torsion_order(&f, &p)?;
        let mut orbits = Vec::new();
        for (i, rep) in reps.iter().enumerate() {
            let solved = germ_from_flags(&f, &rep.matrix, NilpotentFamily::Primary)?;
            let census = odd_census(&f, &rep.matrix, CornerSign::Matched)?;
            let exact: Vec<u64> = census.exact.iter().map(|&c| c as u64).collect();
            let sym = sym_tilde_from_exact(&exact, q as i128)?;
            let formula = (0..=g)
                .map(|m| odd_formula(&sym, h0, g, q as i64, m, OddVariant::Main))
                .collect::<Result<Vec<_>, _>>()?;
            for m in 0..=g {
                rows.push(vec![
                    i.to_string(),
                    m.to_string(),
                    q_render(&solved.values[m]),
                    q_render(&formula[m]),
                ]);
            }
            orbits.push(json!({
                "label": rep.label(i),
                "solved": solved.values.iter().map(q_render).collect::<Vec<_>>(),
                "formula": formula.iter().map(q_render).collect::<Vec<_>>(),
            }));
        }
        json!({ "q": q, "poly": p.to_list(), "stable": stable, "orbits": orbits })
    } else {
        let g = (n - 2) / 2;
        let mut shape = factor(&f, &p)?.degrees();
        shape.sort_unstable();
        let sizes = torsion_sizes(&shape);
        let mats: Vec<_> = reps.iter().map(|r| r.matrix.clone()).collect();
        let covers = even_covers_from_flags(&f, &mats)?;
        let mut sum = vec![0i128; g + 1];
        for c in &covers {
            for (acc, x) in sum.iter_mut().zip(c) {
                *acc += x;
            }
        }
        let pre = EvenPrefactor::Stabilizer.value(shape.len(), sizes.stabilizer);
        let mut hyperbolic = Vec::new();
        for m in 0..=g {
            if nilpotent_labels(n, m)
                .iter()
                .any(|l| l.branch == Branch::Hyperbolic)
            {
                let v = even_stable_from_cover_sum(
                    &sum,
                    g,
                    q as i64,
                    m,
                    Branch::Hyperbolic,
                    TermSigns::Swapped,
                    &pre,
                )?;
                rows.push(vec![
                    "stable".to_string(),
                    m.to_string(),
                    q_render(&v),
                    stable.primary[m].to_string(),
                ]);
                hyperbolic.push(q_render(&v));
            }
        }
        json!({
            "q": q,
            "poly": p.to_list(),
            "stable": stable,
            "orbit_covers": covers,
            "hyperbolic_from_flags": hyperbolic,
        })
    };
    Ok(Outcome {
        report,
        header: vec!["orbit", "m", "from_flags", "closed_form"],
        rows,
        passed: true,
    })
}

fn suite_report(suite: Suite, seed: u64, samples: Option<usize>) -> Result<(Value, bool)> {
    let value = |r: &dyn erased::Report| (r.value(), r.passed());
    Ok(match suite {
        Suite::Catalan => value(&catalan_suite(&CatalanConfig::default())),
        Suite::Weyl => value(&weyl_suite(&WeylConfig::default())),
        Suite::Zeta => {
            let d = ZetaConfig::default();
            value(&zeta_suite(&ZetaConfig {
                seed,
                samples_per_q: samples.unwrap_or(d.samples_per_q),
                ..d
            })?)
        }
        Suite::Flags | Suite::Germs => {
            let mut c = OddCases {
                seed,
                ..OddCases::default()
            };
            if let Some(s) = samples {
                c.sampled.iter_mut().for_each(|x| x.2 = s);
            }
            if suite == Suite::Flags {
                value(&flag_suite(&c)?)
            } else {
                value(&germ_suite(&c)?)
            }
        }
        Suite::Even => {
            let mut c = EvenConfig {
                seed,
                ..EvenConfig::default()
            };
            if let Some(s) = samples {
                c.sampled.iter_mut().for_each(|x| x.2 = s);
            }
            value(&even_suite(&c)?)
        }
        Suite::Endoscopy => {
            let d = EndoscopyConfig::default();
            value(&endoscopy_suite(&EndoscopyConfig {
                seed,
                pairs: samples.unwrap_or(d.pairs),
                ..d
            })?)
        }
        Suite::Parity => value(&parity_suite(&ParityConfig::default())?),
        Suite::All => unreachable!("expanded by the caller"),
    })
}

/// Object-safe view of the suite reports.
mod erased {
    use serde::Serialize;
    use serde_json::Value;

    use germlab::verify::algebraic::{CatalanReport, WeylReport, ZetaReport};
    use germlab::verify::endoscopy::EndoscopyReport;
    use germlab::verify::even::EvenReport;
    use germlab::verify::flags::{FlagReport, GermReport};
    use germlab::verify::parity::ParityReport;

    pub trait Report {
        fn value(&self) -> Value;
        fn passed(&self) -> bool;
    }

    macro_rules! report {
        ($($t:ty),*) => {$(
            impl Report for $t {
                fn value(&self) -> Value {
                    to_value(self)
                }
                fn passed(&self) -> bool {
                    self.passed
                }
            }
        )*};
    }

    fn to_value<T: Serialize>(t: &T) -> Value {
        serde_json::to_value(t).expect("reports serialize")
    }

    report!(
        CatalanReport,
        WeylReport,
        ZetaReport,
        FlagReport,
        GermReport,
        EvenReport,
        EndoscopyReport,
        ParityReport
    );
}

fn run_verify(args: &VerifyArgs) -> Result<Outcome> {
    let suites: Vec<Suite> = if args.suite == Suite::All {
        Suite::EACH.to_vec()
    } else {
        vec![args.suite]
    };
    let mut reports = serde_json::Map::new();
    let mut rows = Vec::new();
    let mut passed = true;
    for s in suites {
        let start = Instant::now();
        let (report, ok) = suite_report(s, args.seed, args.samples)?;
        eprintln!(
            "{}: {} in {:.2}s",
            s.name(),
            if ok { "pass" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        rows.push(vec![s.name().to_string(), ok.to_string()]);
        passed &= ok;
        reports.insert(s.name().to_string(), report);
    }
    let report = if args.suite == Suite::All {
        json!({ "suites": reports, "passed": passed })
    } else {
        reports
            .into_iter()
            .next()
            .map(|(_, v)| v)
            .unwrap_or(Value::Null)
    };
    Ok(Outcome {
        report,
        header: vec!["suite", "passed"],
        rows,
        passed,
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .context("configuring worker threads")?;
    }
    let start = Instant::now();
    let (name, seed, outcome) = match &cli.command {
        Command::Zeta(a) => ("zeta", None, run_zeta(a)?),
        Command::Flags(a) => ("flags", None, run_flags(a)?),
        Command::Orbital(a) => ("orbital", None, run_orbital(a)?),
        Command::Germs(a) => ("germs", None, run_germs(a)?),
        Command::Verify(a) => ("verify", Some(a.seed), run_verify(a)?),
    };
    eprintln!("{name}: {:.2}s", start.elapsed().as_secs_f64());
    match cli.format {
        Format::Json => {
            let envelope = json!({
                "schema": SCHEMA,
                "command": name,
                "seed": seed,
                "passed": outcome.passed,
                "report": outcome.report,
            });
            println!("{}", serde_json::to_string_pretty(&envelope)?);
        }
        Format::Csv => {
            println!("{}", outcome.header.join(","));
            for row in &outcome.rows {
                println!(
                    "{}",
                    row.iter()
                        .map(|s| csv_field(s))
                        .collect::<Vec<_>>()
                        .join(",")
                );
            }
        }
    }
    Ok(if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
