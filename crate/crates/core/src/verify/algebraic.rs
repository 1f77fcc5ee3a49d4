//! Catalan, Weyl and zeta suites.

use rayon::prelude::*;
use serde::Serialize;

use super::{stream_key, Sampler, VerifyError};
use crate::algebra::rational::q_int;
use crate::algebra::{Field, Poly};
use crate::catalan::{
    catalan_numbers, convolution_failures, generating_function_failures, matrix_checks,
    recurrence_failures,
};
use crate::germs::catalan_at;
use crate::weyl::{
    orbital_closed_form, permutations, signed_permutations, summarize, xi_members, SignedPerm,
};
use crate::zeta::{weil_polynomial, CurveModel, Parity};

#[derive(Clone, Debug, Serialize)]
pub struct CatalanConfig {
    pub recurrence_lmax: usize,
    pub convolution_lmax: usize,
    pub series_x: Vec<i64>,
    pub series_order: usize,
    pub matrix_size: usize,
}

impl Default for CatalanConfig {
    fn default() -> Self {
        CatalanConfig {
            recurrence_lmax: 20,
            convolution_lmax: 12,
            series_x: (-5..=5).collect(),
            series_order: 12,
            matrix_size: 12,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalanReport {
    pub config: CatalanConfig,
    /// `C_l(1)` for `l <= 4` against the classical Catalan numbers.
    pub classical_values: bool,
    pub recurrence_failures: Vec<usize>,
    pub convolution_failures: Vec<usize>,
    /// `(x, l)` where the series coefficient differs from `C_l(x)`.
    pub series_failures: Vec<(i64, usize)>,
    pub inverse_pair: bool,
    pub b_commute: bool,
    pub b4_factorization: bool,
    pub composite: bool,
    pub passed: bool,
}

pub fn catalan_suite(config: &CatalanConfig) -> CatalanReport {
    let classical_values = (0..5).all(|l| catalan_at(l, 1) == catalan_numbers(5)[l as usize])
        && catalan_numbers(5) == [1, 1, 2, 5, 14].map(q_int);
    let recurrence_failures = recurrence_failures(config.recurrence_lmax);
    let convolution_failures = convolution_failures(config.convolution_lmax);
    let series_failures = generating_function_failures(&config.series_x, config.series_order);
    let m = matrix_checks(config.matrix_size);
    let passed = classical_values
        && recurrence_failures.is_empty()
        && convolution_failures.is_empty()
        && series_failures.is_empty()
        && m.inverse_pair
        && m.b_commute
        && m.b4_factorization
        && m.composite;
    CatalanReport {
        config: config.clone(),
        classical_values,
        recurrence_failures,
        convolution_failures,
        series_failures,
        inverse_pair: m.inverse_pair,
        b_commute: m.b_commute,
        b4_factorization: m.b4_factorization,
        composite: m.composite,
        passed,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylConfig {
    pub gmax: usize,
    /// Filter the full signed group up to this rank; above it only `S_g`.
    pub signed_gmax: usize,
    pub qs: Vec<i128>,
}

impl Default for WeylConfig {
    fn default() -> Self {
        WeylConfig {
            gmax: 7,
            signed_gmax: 5,
            qs: vec![2, 3, 5, 7, 11],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylRow {
    pub g: usize,
    pub m: usize,
    pub mp: usize,
    pub size: usize,
    /// Descent sums, then closed forms, per `q`.
    pub descent_sums: Vec<i128>,
    pub closed_forms: Vec<i128>,
    pub path_distribution: bool,
    /// `None` when only `S_g` was filtered.
    pub members_in_sg: Option<bool>,
    pub exponent_identity: bool,
}

impl WeylRow {
    fn passed(&self) -> bool {
        self.descent_sums == self.closed_forms
            && self.path_distribution
            && self.members_in_sg.unwrap_or(true)
            && self.exponent_identity
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylReport {
    pub config: WeylConfig,
    pub rows: Vec<WeylRow>,
    pub failures: usize,
    pub passed: bool,
}

pub fn weyl_suite(config: &WeylConfig) -> WeylReport {
    let mut rows = Vec::new();
    for g in 0..=config.gmax {
        let signed = g <= config.signed_gmax;
        let candidates: Vec<SignedPerm> = if signed {
            signed_permutations(g)
        } else {
            permutations(g).into_iter().map(SignedPerm::new).collect()
        };
        let triples: Vec<(usize, usize)> = (0..=g)
            .flat_map(|m| (0..=m).map(move |mp| (m, mp)))
            .collect();
        let batch: Vec<WeylRow> = triples
            .par_iter()
            .map(|&(m, mp)| {
                let members = xi_members(&candidates, g, m, mp);
                let s = summarize(&members, g, m, mp);
                WeylRow {
                    g,
                    m,
                    mp,
                    size: s.size,
                    descent_sums: config.qs.iter().map(|&q| s.descent_sum(q)).collect(),
                    closed_forms: config
                        .qs
                        .iter()
                        .map(|&q| orbital_closed_form(g, m, mp, q))
                        .collect(),
                    path_distribution: s.path_distribution_holds(),
                    members_in_sg: signed.then_some(s.members_in_sg),
                    exponent_identity: s.exponent_identity,
                }
            })
            .collect();
        rows.extend(batch);
    }
    let failures = rows.iter().filter(|r| !r.passed()).count();
    WeylReport {
        config: config.clone(),
        rows,
        failures,
        passed: failures == 0,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZetaConfig {
    pub qs: Vec<u64>,
    pub samples_per_q: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    /// Extension degrees compared between direct counts and `P`.
    pub count_depth: u32,
    pub seed: u64,
}

impl Default for ZetaConfig {
    fn default() -> Self {
        ZetaConfig {
            qs: vec![3, 5, 7],
            samples_per_q: 200,
            min_degree: 3,
            max_degree: 7,
            count_depth: 3,
            seed: 1,
        }
    }
}

/// Checks on one sampled curve.
#[derive(Clone, Debug, Serialize)]
pub struct ZetaCase {
    pub q: u64,
    pub poly: String,
    pub genus: usize,
    pub parity: Parity,
    /// Coefficients of `P/((1-T)(1-qT))` against the `â` sums.
    pub sym_routes: bool,
    pub expansion: bool,
    pub functional_equation: bool,
    pub p_at_one: i128,
    /// `s_d(C') = (-1)^d s_d(C)` for the quadratic twist.
    pub twist_complement: bool,
    /// `N_d` from `P` equals the direct count.
    pub counts_from_p: bool,
}

impl ZetaCase {
    fn passed(&self) -> bool {
        self.sym_routes
            && self.expansion
            && self.functional_equation
            && self.p_at_one > 0
            && self.twist_complement
            && self.counts_from_p
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZetaAnchor {
    pub counts: Vec<i64>,
    pub p: Vec<i128>,
    pub a: Vec<i128>,
    pub sym2: i128,
    pub x2: i128,
    pub twist_n1: i64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZetaReport {
    pub config: ZetaConfig,
    pub anchor: ZetaAnchor,
    pub cases: usize,
    pub failing: Vec<ZetaCase>,
    pub passed: bool,
}

fn zeta_case(curve: &CurveModel, depth: u32) -> Result<ZetaCase, VerifyError> {
    let w = weil_polynomial(curve)?;
    let g = w.genus;
    let len = 2 * g + 3;
    let series = w.sym_series(len);
    let sym_routes = (0..len).all(|m| series[m] == w.sym_power_count(m));
    let twist = curve.quadratic_twist();
    let q = w.q;
    let mut twist_complement = true;
    let mut counts_from_p = true;
    for d in 1..=depth {
        let (n, nt) = (
            curve.count_points(d)? as i128,
            twist.count_points(d)? as i128,
        );
        let base = q.pow(d) + 1;
        let sign = if d % 2 == 0 { 1 } else { -1 };
        twist_complement &= base - nt == sign * (base - n);
        counts_from_p &= w.count_from_weil(d as usize) == n;
    }
    Ok(ZetaCase {
        q: q as u64,
        poly: curve.poly().to_list(),
        genus: g,
        parity: w.parity,
        sym_routes,
        expansion: w.lemma_expansion_holds(),
        functional_equation: w.functional_equation_holds(),
        p_at_one: w.p_at_one(),
        twist_complement,
        counts_from_p,
    })
}

fn running_anchor() -> Result<ZetaAnchor, VerifyError> {
    let f = Field::cached(3)?;
    let curve = CurveModel::new(&f, Poly::new(vec![1, 2, 0, 1]))?;
    let w = weil_polynomial(&curve)?;
    let t = weil_polynomial(&curve.quadratic_twist())?;
    let anchor = ZetaAnchor {
        counts: w.counts.clone(),
        p: w.a_hat(),
        a: w.a_stable(),
        sym2: w.sym_power_count(2),
        x2: w.x_count(2),
        twist_n1: t.counts[0],
        holds: false,
    };
    let holds = anchor.counts == [7]
        && anchor.p == [1, 3, 3]
        && anchor.a == [1, 3]
        && anchor.sym2 == 28
        && anchor.x2 == 25
        && anchor.twist_n1 == 1;
    Ok(ZetaAnchor { holds, ..anchor })
}

pub fn zeta_suite(config: &ZetaConfig) -> Result<ZetaReport, VerifyError> {
    let sampler = Sampler::new(config.seed);
    let jobs: Vec<(u64, usize)> = config
        .qs
        .iter()
        .flat_map(|&q| (0..config.samples_per_q).map(move |i| (q, i)))
        .collect();
    let span = config.max_degree - config.min_degree + 1;
    let cases = jobs
        .par_iter()
        .map(|&(q, i)| {
            let f = Field::cached(q)?;
            let n = config.min_degree + i % span;
            let p = sampler.squarefree_monic(&f, n, stream_key(3, q, n, i))?;
            zeta_case(&CurveModel::new(&f, p)?, config.count_depth)
        })
        .collect::<Result<Vec<_>, VerifyError>>()?;
    let anchor = running_anchor()?;
    let failing: Vec<ZetaCase> = cases.iter().filter(|c| !c.passed()).cloned().collect();
    Ok(ZetaReport {
        config: config.clone(),
        passed: anchor.holds && failing.is_empty(),
        anchor,
        cases: cases.len(),
        failing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_catalan_suite_passes() {
        let c = CatalanConfig {
            recurrence_lmax: 6,
            convolution_lmax: 4,
            series_x: vec![-2, 0, 3],
            series_order: 6,
            matrix_size: 5,
        };
        assert!(catalan_suite(&c).passed);
    }

    #[test]
    fn small_weyl_suite_passes() {
        let r = weyl_suite(&WeylConfig {
            gmax: 4,
            signed_gmax: 3,
            qs: vec![2, 3],
        });
        assert!(r.passed);
        assert_eq!(r.rows.len(), 1 + 3 + 6 + 10 + 15);
    }

    #[test]
    fn small_zeta_suite_passes() {
        let r = zeta_suite(&ZetaConfig {
            qs: vec![3, 5],
            samples_per_q: 6,
            count_depth: 2,
            ..ZetaConfig::default()
        })
        .unwrap();
        assert!(r.passed, "{:?}", r.failing);
        assert_eq!(r.cases, 12);
    }
}
