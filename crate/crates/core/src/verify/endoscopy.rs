//! Endoscopic convolution identity, biquadratic covers and the κ check.

use rayon::prelude::*;
use serde::Serialize;

use super::{stream_key, Sampler, VerifyError};
use crate::algebra::Field;
use crate::endoscopy::{
    cover_check, endoscopic_identity_check, factor_shapes, kappa_weighted_flag_check,
    EndoscopyError, SplitCharPoly,
};

/// Draws allowed per admissible pair.
const MAX_PAIR_DRAWS: usize = 10_000;

#[derive(Clone, Debug, Serialize)]
pub struct EndoscopyConfig {
    pub qs: Vec<u64>,
    /// `(deg p_1, deg p_2)`.
    pub degrees: Vec<(usize, usize)>,
    pub pairs: usize,
    pub cover_depth: u32,
    /// Pairs of degrees `(3, 2)` over `F_3` for the κ check.
    pub kappa_pairs: usize,
    pub seed: u64,
}

impl Default for EndoscopyConfig {
    fn default() -> Self {
        EndoscopyConfig {
            qs: vec![3, 5, 7],
            degrees: vec![(3, 2), (3, 4), (5, 2), (5, 4)],
            pairs: 50,
            cover_depth: 4,
            kappa_pairs: 30,
            seed: 1,
        }
    }
}

/// Uniform admissible pair `(p_1, p_2)` by rejection.
pub fn sample_split(
    sampler: &Sampler,
    f: &std::sync::Arc<Field>,
    n1: usize,
    n2: usize,
    key: u64,
) -> Result<SplitCharPoly, VerifyError> {
    let mut rng = sampler.rng(key);
    for _ in 0..MAX_PAIR_DRAWS {
        let p1 = Sampler::monic(&mut rng, f, n1);
        let p2 = Sampler::monic(&mut rng, f, n2);
        match SplitCharPoly::new(f, p1, p2) {
            Ok(s) => return Ok(s),
            Err(EndoscopyError::NotCoprime) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(VerifyError::SamplingExhausted {
        q: f.order() as u64,
        degree: n1 + n2,
        tries: MAX_PAIR_DRAWS,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EndoscopyCase {
    pub q: u32,
    pub p1: String,
    pub p2: String,
    pub shapes: (Vec<usize>, Vec<usize>),
    pub identity: bool,
    pub odd_expansion: bool,
    pub even_expansion: bool,
    pub odd_expansion_literal_traces: bool,
    pub even_expansion_first_genus: bool,
    pub inclusion_exclusion: bool,
    pub trace_additivity: bool,
    pub genus_consistent: bool,
}

impl EndoscopyCase {
    fn passed(&self) -> bool {
        self.identity && self.inclusion_exclusion && self.trace_additivity && self.genus_consistent
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeSummary {
    pub q: u64,
    pub degrees: (usize, usize),
    pub cases: usize,
    pub passing: usize,
    /// Cases where the expansion with literal traces still holds.
    pub literal_traces_hold: usize,
    /// Cases where the even expansion with the odd factor's genus holds.
    pub first_genus_holds: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct KappaSummary {
    pub pairs: usize,
    /// Pairs where the second-factor norm character matches
    /// `#J_T[2](k) (-1)^m Tr_m`.
    pub second_factor_signed: usize,
    /// Pairs where it matches without the sign.
    pub second_factor_unsigned: usize,
    /// Pairs where a subset other than the second factor and its complement
    /// also matches. The complement always agrees: representatives have
    /// square total norm, so the product of all local characters is trivial.
    pub ambiguous: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EndoscopyReport {
    pub config: EndoscopyConfig,
    pub summaries: Vec<DegreeSummary>,
    pub kappa: KappaSummary,
    pub failing: Vec<EndoscopyCase>,
    pub passed: bool,
}

fn endoscopy_case(split: &SplitCharPoly, depth: u32) -> Result<EndoscopyCase, VerifyError> {
    let n = split.product().degree().unwrap_or(0);
    let id = endoscopic_identity_check(split, n / 2)?;
    let cover = cover_check(split, depth)?;
    Ok(EndoscopyCase {
        q: split.field().order(),
        p1: split.p1().to_list(),
        p2: split.p2().to_list(),
        shapes: factor_shapes(split)?,
        identity: id.holds(),
        odd_expansion: id.expansions.odd_factor,
        even_expansion: id.expansions.even_factor,
        odd_expansion_literal_traces: id.expansions.odd_factor_literal_traces,
        even_expansion_first_genus: id.expansions.even_factor_first_genus,
        inclusion_exclusion: cover.inclusion_exclusion,
        trace_additivity: cover.trace_additivity,
        genus_consistent: cover.genus_consistent,
    })
}

fn kappa_summary(config: &EndoscopyConfig) -> Result<KappaSummary, VerifyError> {
    let sampler = Sampler::new(config.seed);
    let f = Field::cached(3)?;
    let reports = (0..config.kappa_pairs)
        .into_par_iter()
        .map(|i| {
            let split = sample_split(&sampler, &f, 3, 2, stream_key(8, 3, 5, i))?;
            Ok(kappa_weighted_flag_check(&split)?)
        })
        .collect::<Result<Vec<_>, VerifyError>>()?;
    let second = |r: &crate::endoscopy::KappaReport| {
        r.candidates
            .iter()
            .find(|c| c.is_second_factor_norm)
            .cloned()
            .expect("one subset is the second factor")
    };
    Ok(KappaSummary {
        pairs: reports.len(),
        second_factor_signed: reports.iter().filter(|r| second(r).matches_signed).count(),
        second_factor_unsigned: reports
            .iter()
            .filter(|r| second(r).matches_unsigned)
            .count(),
        ambiguous: reports
            .iter()
            .filter(|r| {
                let second = second(r);
                let rank = r.candidates.len().trailing_zeros() as usize;
                let complement: Vec<usize> =
                    (0..rank).filter(|i| !second.factors.contains(i)).collect();
                r.passing()
                    .iter()
                    .any(|c| c.factors != second.factors && c.factors != complement)
            })
            .count(),
    })
}

pub fn endoscopy_suite(config: &EndoscopyConfig) -> Result<EndoscopyReport, VerifyError> {
    let sampler = Sampler::new(config.seed);
    let jobs: Vec<(u64, usize, usize, usize)> = config
        .qs
        .iter()
        .flat_map(|&q| {
            config
                .degrees
                .iter()
                .flat_map(move |&(a, b)| (0..config.pairs).map(move |i| (q, a, b, i)))
        })
        .collect();
    let cases = jobs
        .par_iter()
        .map(|&(q, n1, n2, i)| {
            let f = Field::cached(q)?;
            let split = sample_split(&sampler, &f, n1, n2, stream_key(7, q, n1 * 16 + n2, i))?;
            endoscopy_case(&split, config.cover_depth)
        })
        .collect::<Result<Vec<_>, VerifyError>>()?;
    let summaries = config
        .qs
        .iter()
        .flat_map(|&q| config.degrees.iter().map(move |&d| (q, d)))
        .map(|(q, d)| {
            let group: Vec<&EndoscopyCase> = cases
                .iter()
                .zip(&jobs)
                .filter(|(_, j)| (j.0, j.1, j.2) == (q, d.0, d.1))
                .map(|(c, _)| c)
                .collect();
            DegreeSummary {
                q,
                degrees: d,
                cases: group.len(),
                passing: group.iter().filter(|c| c.passed()).count(),
                literal_traces_hold: group
                    .iter()
                    .filter(|c| c.odd_expansion_literal_traces)
                    .count(),
                first_genus_holds: group
                    .iter()
                    .filter(|c| c.even_expansion_first_genus)
                    .count(),
            }
        })
        .collect();
    let kappa = kappa_summary(config)?;
    let failing: Vec<EndoscopyCase> = cases.iter().filter(|c| !c.passed()).cloned().collect();
    Ok(EndoscopyReport {
        config: config.clone(),
        summaries,
        kappa,
        passed: failing.is_empty() && !cases.is_empty(),
        failing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_endoscopy_suite_passes() {
        let config = EndoscopyConfig {
            qs: vec![3],
            degrees: vec![(3, 2)],
            pairs: 4,
            cover_depth: 3,
            kappa_pairs: 2,
            seed: 3,
        };
        let r = endoscopy_suite(&config).unwrap();
        assert!(r.passed, "{:?}", r.failing);
        assert_eq!(r.summaries[0].cases, 4);
        assert_eq!(r.kappa.pairs, 2);
    }
}
