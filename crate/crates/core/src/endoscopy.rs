//! The endoscopic trace identity for a split characteristic polynomial
//! `p = p_1 p_2` (odd `p_1`, even `p_2`, coprime), the biquadratic cover
//! `k(x, √p_1, √p_2)` and the κ-weighted cover experiment.
//!
//! Traces on `H^j(J)` are `(-1)^j â_j`. The factor expansions are written in
//! `â`: for an odd model of genus `g`,
//! `a_m = sum_l q^l C_l(-g + m - 2l) â_{m-2l}`, and for an even model of
//! genus `g_2`, `a_m = A(m) - (q+1) A(m-1)` with `A` the odd-model expansion
//! at genus `g_2`.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::rational::q_int;
use crate::algebra::{factor, is_squarefree, AlgebraError, Extension, Field, Poly, Q};
use crate::germs::{catalan_at, sym_tilde_from_exact, two_torsion_order, GermsError};
use crate::quadrics::{
    build_orbit_representatives, odd_census, CornerSign, QuadricsError, SquareClasses,
};
use crate::zeta::{weil_polynomial, CurveModel, WeilData, ZetaError};

#[derive(Debug, Error)]
pub enum EndoscopyError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    Quadrics(#[from] QuadricsError),
    #[error(transparent)]
    Germs(#[from] GermsError),
    #[error("first factor must have odd degree and second factor even degree, got {0} and {1}")]
    BadDegrees(usize, usize),
    #[error("factors must be monic, squarefree and coprime")]
    NotCoprime,
    #[error("extension degree {0} over the cover-count bound")]
    TooDeep(u32),
}

/// `p = p_1 p_2` with `deg p_1` odd, `deg p_2` even, both monic squarefree and
/// coprime.
#[derive(Clone, Debug)]
pub struct SplitCharPoly {
    field: Arc<Field>,
    p1: Poly,
    p2: Poly,
    product: Poly,
}

impl SplitCharPoly {
    pub fn new(field: &Arc<Field>, p1: Poly, p2: Poly) -> Result<SplitCharPoly, EndoscopyError> {
        let (n1, n2) = (p1.degree().unwrap_or(0), p2.degree().unwrap_or(0));
        if n1 % 2 == 0 || n2 % 2 == 1 || n2 == 0 {
            return Err(EndoscopyError::BadDegrees(n1, n2));
        }
        let f = field.as_ref();
        let coprime = p1.gcd(f, &p2).degree() == Some(0);
        if !(p1.is_monic()
            && p2.is_monic()
            && coprime
            && is_squarefree(f, &p1)?
            && is_squarefree(f, &p2)?)
        {
            return Err(EndoscopyError::NotCoprime);
        }
        let product = p1.mul(f, &p2);
        Ok(SplitCharPoly {
            field: field.clone(),
            p1,
            p2,
            product,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn p1(&self) -> &Poly {
        &self.p1
    }

    pub fn p2(&self) -> &Poly {
        &self.p2
    }

    pub fn product(&self) -> &Poly {
        &self.product
    }

    pub fn curves(&self) -> Result<[CurveModel; 3], EndoscopyError> {
        Ok([
            CurveModel::new(&self.field, self.p1.clone())?,
            CurveModel::new(&self.field, self.p2.clone())?,
            CurveModel::new(&self.field, self.product.clone())?,
        ])
    }
}

fn hat(w: &WeilData, j: i64) -> i128 {
    if j < 0 {
        0
    } else {
        w.a_hat_at(j as usize)
    }
}

fn sign(j: i64) -> i128 {
    if j.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `Tr(Frob | ⊕_d H^d(J_1) ⊗ H^{m-d}(J_2))` for `0 <= m <= m_max`.
pub fn joint_traces(w1: &WeilData, w2: &WeilData, m_max: usize) -> Vec<i128> {
    (0..=m_max as i64)
        .map(|m| {
            (0..=m)
                .map(|d| sign(d) * hat(w1, d) * sign(m - d) * hat(w2, m - d))
                .sum()
        })
        .collect()
}

/// Odd-model expansion `sum_l q^l C_l(-g + m - 2l) â_{m-2l}`, with the
/// trace sign `(-1)^{m-2l}` applied to `â` when `literal_traces` is set.
fn odd_expansion(w: &WeilData, genus: i64, m: i64, literal_traces: bool) -> Q {
    if m < 0 {
        return q_int(0);
    }
    let q = w.q as i64;
    (0..=m / 2)
        .map(|l| {
            let j = m - 2 * l;
            let tr = if literal_traces {
                sign(j) * hat(w, j)
            } else {
                hat(w, j)
            };
            q_int(q.pow(l as u32)) * catalan_at(l, -genus + m - 2 * l) * Q::from_integer(tr.into())
        })
        .sum()
}

fn even_expansion(w: &WeilData, genus: i64, m: i64, literal_traces: bool) -> Q {
    let q = w.q as i64;
    odd_expansion(w, genus, m, literal_traces)
        - q_int(q + 1) * odd_expansion(w, genus, m - 1, literal_traces)
}

fn stable_at(a: &[i128], m: i64) -> i128 {
    if m < 0 {
        0
    } else {
        a.get(m as usize).copied().unwrap_or(0)
    }
}

/// Per-factor expansions against `a_stable`, for every `m` up to `m_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpansionReport {
    /// Expansion written in `â`.
    pub odd_factor: bool,
    pub even_factor: bool,
    /// Expansion with `Tr(H^j)` in place of `â_j`.
    pub odd_factor_literal_traces: bool,
    /// Even expansion with the odd factor's genus in the Catalan argument.
    pub even_factor_first_genus: bool,
}

/// One row of the identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityRow {
    pub m: usize,
    pub left: i128,
    pub right: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub rows: Vec<IdentityRow>,
    pub expansions: ExpansionReport,
    pub joint_traces: Vec<i128>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
            && self.expansions.odd_factor
            && self.expansions.even_factor
    }
}

/// `sum_{m_1 + m_2 = m} a_{m_1}(T_1) a_{m_2}(T_2)` against the Catalan
/// combination of joint traces obtained by multiplying the two expansions:
/// with `I(j) = (-1)^j Tr_j` and `G = g_1 + g_2`,
/// `B(m) = sum_l q^l C_l(-G + m - 2l) I(m - 2l)` and
/// `RIGHT(m) = B(m) - (q+1) B(m-1)`.
pub fn endoscopic_identity_check(
    split: &SplitCharPoly,
    m_max: usize,
) -> Result<IdentityReport, EndoscopyError> {
    let [c1, c2, _] = split.curves()?;
    let (w1, w2) = (weil_polynomial(&c1)?, weil_polynomial(&c2)?);
    let (g1, g2) = (w1.genus as i64, w2.genus as i64);
    let q = w1.q as i64;
    let (a1, a2) = (w1.a_stable(), w2.a_stable());
    let traces = joint_traces(&w1, &w2, m_max);
    let signed = |j: i64| -> Q {
        if j < 0 {
            q_int(0)
        } else {
            Q::from_integer((sign(j) * traces[j as usize]).into())
        }
    };
    let big_g = g1 + g2;
    let b = |m: i64| -> Q {
        if m < 0 {
            return q_int(0);
        }
        (0..=m / 2)
            .map(|l| q_int(q.pow(l as u32)) * catalan_at(l, -big_g + m - 2 * l) * signed(m - 2 * l))
            .sum()
    };
    let rows = (0..=m_max as i64)
        .map(|m| {
            let left: i128 = (0..=m)
                .map(|m1| stable_at(&a1, m1) * stable_at(&a2, m - m1))
                .sum();
            let right = b(m) - q_int(q + 1) * b(m - 1);
            IdentityRow {
                m: m as usize,
                left,
                holds: right == Q::from_integer(left.into()),
                right: crate::algebra::rational::q_render(&right),
            }
        })
        .collect();
    let top1 = 2 * g1 + 2;
    let top2 = 2 * g2 + 3;
    let matches = |f: &dyn Fn(i64) -> Q, a: &[i128], top: i64| {
        (0..=top).all(|m| f(m) == Q::from_integer(stable_at(a, m).into()))
    };
    let expansions = ExpansionReport {
        odd_factor: matches(&|m| odd_expansion(&w1, g1, m, false), &a1, top1),
        even_factor: matches(&|m| even_expansion(&w2, g2, m, false), &a2, top2),
        odd_factor_literal_traces: matches(&|m| odd_expansion(&w1, g1, m, true), &a1, top1),
        even_factor_first_genus: matches(&|m| even_expansion(&w2, g1, m, false), &a2, top2),
    };
    Ok(IdentityReport {
        rows,
        expansions,
        joint_traces: traces,
    })
}

/// Extension degrees allowed in [`biquadratic_cover_count`].
pub const MAX_COVER_DEGREE: u32 = 6;

/// `#C^κ(F_{q^d})` for the smooth model of `k(x, √p_1, √p_2)`, counted
/// fiberwise. Over `x` with `p_1 p_2 (x) ≠ 0` there are
/// `(1 + χ(p_1(x)))(1 + χ(p_2(x)))` points; over a root of one factor the
/// other square root decides `1 + χ`; above `∞` the odd factor ramifies and
/// the monic even factor splits, giving two points.
pub fn biquadratic_cover_count(split: &SplitCharPoly, d: u32) -> Result<i64, EndoscopyError> {
    if d == 0 || d > MAX_COVER_DEGREE {
        return Err(EndoscopyError::TooDeep(d));
    }
    let ext = Extension::cached(split.field.order() as u64, d)?;
    let big = &ext.big;
    let lift = |p: &Poly| -> Vec<u32> { p.coeffs().iter().map(|&c| ext.embed(c)).collect() };
    let (c1, c2) = (lift(&split.p1), lift(&split.p2));
    let eval = |c: &[u32], x| {
        c.iter()
            .rev()
            .fold(0, |acc, &a| big.add(big.mul(acc, x), a))
    };
    let affine: i64 = big
        .elements()
        .map(|x| {
            let (u, v) = (eval(&c1, x), eval(&c2, x));
            match (u == 0, v == 0) {
                (false, false) => ((1 + big.chi(u)) * (1 + big.chi(v))) as i64,
                (true, false) => (1 + big.chi(v)) as i64,
                (false, true) => (1 + big.chi(u)) as i64,
                (true, true) => unreachable!("coprime factors"),
            }
        })
        .sum();
    Ok(affine + 2)
}

/// Cover-count checks for one split polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub counts: Vec<i64>,
    /// `N_d(C^κ) = N_d(C_1) + N_d(C_2) + N_d(C_T) - 2(q^d + 1)`.
    pub inclusion_exclusion: bool,
    /// `s_d(C^κ) = s_d(C_1) + s_d(C_2) + s_d(C_T)`.
    pub trace_additivity: bool,
    /// Counts agree with the Weil numerator `P_1 P_2 P_T` of degree
    /// `2(g_1 + g_2 + g_T)`, and Riemann-Hurwitz gives that genus.
    pub genus_consistent: bool,
    pub genus: usize,
}

fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `N_d = q^d + 1 - s_d` with `s_d` the power sums of the reciprocal roots of
/// `P`, from Newton's identities.
fn counts_from_numerator(q: i128, p: &[i128], d_max: usize) -> Vec<i128> {
    let mut s: Vec<i128> = Vec::with_capacity(d_max);
    for k in 1..=d_max {
        let mut v = -(k as i128) * p.get(k).copied().unwrap_or(0);
        for i in 1..k {
            v -= p.get(k - i).copied().unwrap_or(0) * s[i - 1];
        }
        s.push(v);
    }
    s.iter()
        .enumerate()
        .map(|(i, si)| q.pow(i as u32 + 1) + 1 - si)
        .collect()
}

pub fn cover_check(split: &SplitCharPoly, d_max: u32) -> Result<CoverReport, EndoscopyError> {
    let curves = split.curves()?;
    let counts: Vec<i64> = (1..=d_max)
        .map(|d| biquadratic_cover_count(split, d))
        .collect::<Result<_, _>>()?;
    let q = split.field.order() as i128;
    let weils = curves
        .iter()
        .map(weil_polynomial)
        .collect::<Result<Vec<_>, _>>()?;
    let mut inclusion_exclusion = true;
    let mut trace_additivity = true;
    for (i, &n) in counts.iter().enumerate() {
        let d = i as u32 + 1;
        let qd1 = q.pow(d) + 1;
        let factor_counts = curves
            .iter()
            .map(|c| c.count_points(d).map(i128::from))
            .collect::<Result<Vec<_>, _>>()?;
        inclusion_exclusion &= n as i128 == factor_counts.iter().sum::<i128>() - 2 * qd1;
        let s = |x: i128| qd1 - x;
        trace_additivity &= s(n as i128) == factor_counts.iter().map(|&x| s(x)).sum::<i128>();
    }
    let numerator = weils
        .iter()
        .fold(vec![1i128], |acc, w| poly_mul(&acc, &w.p));
    let genus = weils.iter().map(|w| w.genus).sum::<usize>();
    let (n1, n2) = (
        split.p1.degree().unwrap_or(0),
        split.p2.degree().unwrap_or(0),
    );
    // Degree 4 over P^1, every branch point (roots and ∞) has two points of
    // index 2: 2g - 2 = -8 + 2(n_1 + n_2 + 1).
    let hurwitz = (2 * (n1 + n2 + 1) - 8 + 2) / 2;
    let predicted = counts_from_numerator(q, &numerator, d_max as usize);
    let genus_consistent = numerator.len() == 2 * genus + 1
        && hurwitz == genus
        && predicted.iter().zip(&counts).all(|(a, &b)| *a == b as i128);
    Ok(CoverReport {
        counts,
        inclusion_exclusion,
        trace_additivity,
        genus_consistent,
        genus,
    })
}

/// A candidate κ: the product of the norm characters of the listed factors
/// of `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KappaCandidate {
    pub factors: Vec<usize>,
    /// The factors dividing `p_2`.
    pub is_second_factor_norm: bool,
    /// `sum_α κ(α) #S̃ym^m(C_{T_α})` for each `m`.
    pub weighted: Vec<i128>,
    /// Matches `#J_T[2](k) (-1)^m Tr_m` for all `m`.
    pub matches_signed: bool,
    /// Matches `#J_T[2](k) Tr_m` for all `m`.
    pub matches_unsigned: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KappaReport {
    pub torsion: u64,
    pub joint_traces: Vec<i128>,
    pub candidates: Vec<KappaCandidate>,
}

impl KappaReport {
    /// Candidates matching under either sign convention.
    pub fn passing(&self) -> Vec<&KappaCandidate> {
        self.candidates
            .iter()
            .filter(|c| c.matches_signed || c.matches_unsigned)
            .collect()
    }
}

/// Weighted cover sums from per-orbit flag census data, for every candidate
/// built from factor norm characters.
pub fn kappa_weighted_flag_check(split: &SplitCharPoly) -> Result<KappaReport, EndoscopyError> {
    let f = split.field.as_ref();
    let p = &split.product;
    let n = p.degree().unwrap_or(0);
    let g = (n - 1) / 2;
    let q = f.order() as i128;
    let classes = SquareClasses::new(f, p)?;
    let in_second: Vec<bool> = classes
        .factors
        .iter()
        .map(|pi| split.p2.rem(f, pi).is_some_and(|r| r.is_zero()))
        .collect();
    let reps = build_orbit_representatives(f, p)?;
    let covers = reps
        .iter()
        .map(|r| {
            let census = odd_census(f, &r.matrix, CornerSign::Matched)?;
            let exact: Vec<u64> = census.exact.iter().map(|&c| c as u64).collect();
            Ok(sym_tilde_from_exact(&exact, q)?)
        })
        .collect::<Result<Vec<_>, EndoscopyError>>()?;
    let [c1, c2, _] = split.curves()?;
    let traces = joint_traces(&weil_polynomial(&c1)?, &weil_polynomial(&c2)?, g);
    let torsion = two_torsion_order(f, p)?;
    let r = classes.rank();
    let candidates = (0..(1u32 << r))
        .map(|subset| {
            let members: Vec<usize> = (0..r).filter(|i| subset >> i & 1 == 1).collect();
            let weighted: Vec<i128> = (0..=g)
                .map(|m| {
                    reps.iter()
                        .zip(&covers)
                        .map(|(rep, cov)| {
                            let kappa: i32 = members
                                .iter()
                                .map(|&i| classes.local_norm_character(rep.delta_mask, i))
                                .product();
                            kappa as i128 * cov[m]
                        })
                        .sum()
                })
                .collect();
            let t = torsion as i128;
            let matches_signed = (0..=g).all(|m| weighted[m] == t * sign(m as i64) * traces[m]);
            let matches_unsigned = (0..=g).all(|m| weighted[m] == t * traces[m]);
            KappaCandidate {
                is_second_factor_norm: (0..r).all(|i| members.contains(&i) == in_second[i]),
                factors: members,
                weighted,
                matches_signed,
                matches_unsigned,
            }
        })
        .collect();
    Ok(KappaReport {
        torsion,
        joint_traces: traces,
        candidates,
    })
}

/// Irreducible-factor degrees of `p_1` and `p_2`, for reporting.
pub fn factor_shapes(split: &SplitCharPoly) -> Result<(Vec<usize>, Vec<usize>), EndoscopyError> {
    let f = split.field.as_ref();
    Ok((
        factor(f, &split.p1)?.degrees(),
        factor(f, &split.p2)?.degrees(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(f: &Field, c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| f.from_int(x)).collect())
    }

    fn running_split() -> SplitCharPoly {
        let f = Field::cached(3).unwrap();
        // x^3 - x + 1 and x^2 + 1 are coprime over F_3.
        SplitCharPoly::new(&f, poly(&f, &[1, -1, 0, 1]), poly(&f, &[1, 0, 1])).unwrap()
    }

    #[test]
    fn rejects_shared_roots_and_bad_degrees() {
        let f = Field::cached(3).unwrap();
        let x = poly(&f, &[0, 1]);
        assert!(matches!(
            SplitCharPoly::new(&f, x.clone(), poly(&f, &[0, 1, 1])),
            Err(EndoscopyError::NotCoprime)
        ));
        assert!(matches!(
            SplitCharPoly::new(&f, poly(&f, &[1, 0, 1]), x),
            Err(EndoscopyError::BadDegrees(2, 1))
        ));
    }

    #[test]
    fn joint_traces_low_degree() {
        let s = running_split();
        let [c1, c2, _] = s.curves().unwrap();
        let (w1, w2) = (weil_polynomial(&c1).unwrap(), weil_polynomial(&c2).unwrap());
        let t = joint_traces(&w1, &w2, 2);
        assert_eq!(t[0], 1);
        assert_eq!(t[1], -w1.a_hat_at(1) - w2.a_hat_at(1));
    }

    #[test]
    fn identity_on_running_split() {
        let report = endoscopic_identity_check(&running_split(), 2).unwrap();
        assert!(report.holds(), "{report:?}");
        assert_eq!(report.rows[0].left, 1);
    }

    #[test]
    fn cover_counts_on_running_split() {
        let c = cover_check(&running_split(), 4).unwrap();
        assert!(
            c.inclusion_exclusion && c.trace_additivity && c.genus_consistent,
            "{c:?}"
        );
        assert_eq!(c.genus, 1 + 2);
    }

    #[test]
    fn genus_zero_first_factor_contributes_nothing() {
        let f = Field::cached(5).unwrap();
        let s = SplitCharPoly::new(&f, poly(&f, &[0, 1]), poly(&f, &[2, 0, 1])).unwrap();
        let c = cover_check(&s, 3).unwrap();
        let t = s.curves().unwrap()[2].clone();
        for d in 1..=3u32 {
            let qd1 = 5i64.pow(d) + 1;
            let c2 = s.curves().unwrap()[1].count_points(d).unwrap();
            assert_eq!(c2, qd1);
            assert_eq!(
                qd1 - c.counts[d as usize - 1],
                qd1 - t.count_points(d).unwrap()
            );
        }
    }
}
