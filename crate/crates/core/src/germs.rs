//! Germ expansions at regular semisimple operators: stable values from zeta
//! data, per-orbit values solved from flag or group counts, cover counts
//! derived from censuses, and the closed formulas in Catalan polynomials.
//!
//! Odd case (`n = 2g + 1`): with `J_m = #F_{T,m}(k) / #J_T[2](k)`, the germs
//! solve the unipotent lower-triangular system
//! `J_m = sum_{m' <= m} Γ_{m'} · orbital_closed_form(g, m, m', q)`.
//!
//! Even case (`n = 2g + 2`): only sums `Γ(T) + Γ(ad(u) T)` are reachable;
//! the closed formulas are evaluated per orbit and aggregated.

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::rational::{q_frac, q_int};
use crate::algebra::{factor, is_irreducible, is_squarefree, AlgebraError, Field, Mat, Poly, Q};
use crate::catalan::catalan_poly;
use crate::quadrics::orbits::SquareClasses;
use crate::quadrics::{
    even_census, exact_flags_from_group, odd_census, torsion_sizes, NilpotentFamily, QuadricsError,
};
use crate::weyl::orbital_closed_form;
use crate::zeta::{weil_polynomial, CurveModel, WeilData, ZetaError};

#[derive(Debug, Error)]
pub enum GermsError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    Quadrics(#[from] QuadricsError),
    #[error("derived cover count at m = {m} is negative ({value})")]
    NegativeCount { m: usize, value: i128 },
    #[error("m = {m} out of range for g = {g}")]
    BadIndex { m: usize, g: usize },
    #[error("operator has size {0}; this route needs {1} size")]
    WrongParity(usize, &'static str),
}

/// `C_l(x)` at an integer, with `C_{-1} = 0`.
pub fn catalan_at(l: i64, x: i64) -> Q {
    if l < 0 {
        return Q::zero();
    }
    catalan_poly(l as usize).eval(&q_int(x))
}

fn q_pow(q: i64, e: i64) -> Q {
    q_int(q.pow(e as u32))
}

fn at(v: &[i128], j: i64) -> Q {
    if j < 0 {
        return Q::zero();
    }
    v.get(j as usize)
        .map_or_else(Q::zero, |&x| Q::from_integer(x.into()))
}

/// Stable germs of the two two-block families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableGerms {
    /// `a_m(T)` of `y^2 = p_T`.
    pub primary: Vec<i128>,
    /// `a_m` of the quadratic twist; `(-1)^m a_m(T)` in the odd case.
    pub companion: Vec<i128>,
}

pub fn stable_germs(curve: &CurveModel) -> Result<StableGerms, GermsError> {
    let primary = weil_polynomial(curve)?.a_stable();
    let companion = weil_polynomial(&curve.quadratic_twist())?.a_stable();
    Ok(StableGerms { primary, companion })
}

/// How a germ vector was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Formula,
    TriangularSolve,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermVector {
    /// `Γ_{Ñ_m}(T̃)` for `0 <= m <= g`.
    pub values: Vec<Q>,
    pub route: Route,
}

/// Forward substitution in `J_m = sum_{m' <= m} Γ_{m'} c(g, m, m', q)`.
pub fn solve_germs(j: &[Q], g: usize, q: i128) -> Vec<Q> {
    let mut gamma: Vec<Q> = Vec::with_capacity(j.len());
    for (m, jm) in j.iter().enumerate() {
        let lower: Q = (0..m)
            .map(|mp| &gamma[mp] * Q::from_integer(orbital_closed_form(g, m, mp, q).into()))
            .sum();
        debug_assert_eq!(orbital_closed_form(g, m, m, q), 1);
        gamma.push(jm - lower);
    }
    gamma
}

fn odd_genus(t: &Mat) -> Result<usize, GermsError> {
    let n = t.rows();
    if n.is_multiple_of(2) {
        return Err(GermsError::WrongParity(n, "odd"));
    }
    Ok((n - 1) / 2)
}

/// `#J_T[2](k)` from the factorization of the characteristic polynomial.
pub fn two_torsion_order(f: &Field, p: &Poly) -> Result<u64, GermsError> {
    let degrees = SquareClasses::new(f, p)?.degrees();
    Ok(torsion_sizes(&degrees).h0)
}

fn normalized(counts: &[u64], h0: u64) -> Vec<Q> {
    counts
        .iter()
        .map(|&c| q_frac(c as i64, h0 as i64))
        .collect()
}

/// Germs of one orbit from its `m`-exact flag counts.
pub fn germ_from_flags(
    f: &Field,
    t: &Mat,
    family: NilpotentFamily,
) -> Result<GermVector, GermsError> {
    let g = odd_genus(t)?;
    let census = odd_census(f, t, family.corner_sign())?;
    let h0 = two_torsion_order(f, &t.charpoly(f))?;
    let counts: Vec<u64> = census.exact.iter().map(|&c| c as u64).collect();
    Ok(GermVector {
        values: solve_germs(&normalized(&counts, h0), g, f.order() as i128),
        route: Route::TriangularSolve,
    })
}

/// Germs of one orbit from the orbital count over `SO(V)(k)`.
pub fn germ_from_group(
    f: &Field,
    t: &Mat,
    family: NilpotentFamily,
) -> Result<GermVector, GermsError> {
    let g = odd_genus(t)?;
    let h0 = two_torsion_order(f, &t.charpoly(f))?;
    let counts = (0..=g)
        .map(|m| exact_flags_from_group(f, t, m, family))
        .collect::<Result<Vec<u64>, _>>()?;
    Ok(GermVector {
        values: solve_germs(&normalized(&counts, h0), g, f.order() as i128),
        route: Route::TriangularSolve,
    })
}

/// `#S̃ym^m(C_T)(k)` from `#F_{T,m}(k)`: `X̃_m` is the cumulative count and
/// `S̃ym^m = sum_l q^l X̃_{m-2l}`.
pub fn sym_tilde_from_exact(exact: &[u64], q: i128) -> Result<Vec<i128>, GermsError> {
    let x: Vec<i128> = exact
        .iter()
        .scan(0i128, |acc, &c| {
            *acc += c as i128;
            Some(*acc)
        })
        .collect();
    lift_by_q(&x, q)
}

fn lift_by_q(x: &[i128], q: i128) -> Result<Vec<i128>, GermsError> {
    let mut out = Vec::with_capacity(x.len());
    for m in 0..x.len() {
        let v: i128 = (0..=m / 2).map(|l| q.pow(l as u32) * x[m - 2 * l]).sum();
        if v < 0 {
            return Err(GermsError::NegativeCount { m, value: v });
        }
        out.push(v);
    }
    Ok(out)
}

/// The two printed forms of the odd closed formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OddVariant {
    /// `q^l C_l(-g+m-2l+1)` and `q^l C_l(-g+m-2l)`.
    Main,
    /// `(-q)^l C_l(-g+m-2l-1)` and `(-q)^l C_l(-g+m-2l)`.
    Long,
}

/// Closed formula for `Γ_{Ñ_m}(T̃)` from cover counts.
pub fn odd_formula(
    sym: &[i128],
    h0: u64,
    g: usize,
    q: i64,
    m: usize,
    variant: OddVariant,
) -> Result<Q, GermsError> {
    if m > g {
        return Err(GermsError::BadIndex { m, g });
    }
    let (gi, mi) = (g as i64, m as i64);
    let (base, shift) = match variant {
        OddVariant::Main => (q, 1),
        OddVariant::Long => (-q, -1),
    };
    let first: Q = (0..=mi / 2)
        .map(|l| at(sym, mi - 2 * l) * q_pow(base, l) * catalan_at(l, -gi + mi - 2 * l + shift))
        .sum();
    let second: Q = (0..=(mi - 1) / 2)
        .filter(|l| 2 * l < mi)
        .map(|l| at(sym, mi - 2 * l - 1) * q_pow(base, l) * catalan_at(l, -gi + mi - 2 * l))
        .sum();
    Ok((first - q_int(q + 1) * second) / q_int(h0 as i64))
}

/// Per-orbit `S̃^m(C_T)` in the even case from ruling-summed exact counts
/// `σ_m`: `x̃_m = σ_m + 2 x̃_{m-1} - x̃_{m-2}` and `S̃^m = sum_l q^l x̃_{m-2l}`.
pub fn even_cover_from_ruling_sums(sums: &[u64], q: i128) -> Result<Vec<i128>, GermsError> {
    let mut x: Vec<i128> = Vec::with_capacity(sums.len());
    for (m, &s) in sums.iter().enumerate() {
        let prev = if m >= 1 { x[m - 1] } else { 0 };
        let prev2 = if m >= 2 { x[m - 2] } else { 0 };
        x.push(s as i128 + 2 * prev - prev2);
    }
    lift_by_q(&x, q)
}

/// Two-block nilpotent class used by the even formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Hyperbolic,
    Elliptic,
}

/// Sign placement on the `(√q + 1/√q)^2 C_{l-1}` terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TermSigns {
    /// Minus in the hyperbolic branch, plus in the elliptic branch.
    Printed,
    /// Plus in the hyperbolic branch, minus in the elliptic branch.
    Swapped,
}

/// Normalization in front of the even formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EvenPrefactor {
    /// `2^{-(r-1)}`, `r` the number of irreducible factors.
    Literal,
    /// `1 / #ker(Nm)(k)`; equal to the literal one unless every factor has
    /// even degree.
    Stabilizer,
}

impl EvenPrefactor {
    pub fn value(self, factors: usize, stabilizer: u64) -> Q {
        match self {
            EvenPrefactor::Literal => Q::one() / q_int(1i64 << (factors - 1)),
            EvenPrefactor::Stabilizer => Q::one() / q_int(stabilizer as i64),
        }
    }
}

/// The bracket of the even closed formula for `Γ(T̃) + Γ(ad(u) T̃)`, before
/// the prefactor. `cover` holds `S̃^j(C_T)` for the hyperbolic branch and
/// `S̃^j(C_T')` for the elliptic branch.
pub fn even_bracket(
    cover: &[i128],
    g: usize,
    q: i64,
    m: usize,
    branch: Branch,
    signs: TermSigns,
) -> Result<Q, GermsError> {
    if m > g + 1 {
        return Err(GermsError::BadIndex { m, g });
    }
    let (gi, mi) = (g as i64, m as i64);
    let plus = match (branch, signs) {
        (Branch::Hyperbolic, TermSigns::Printed) | (Branch::Elliptic, TermSigns::Swapped) => false,
        (Branch::Hyperbolic, TermSigns::Swapped) | (Branch::Elliptic, TermSigns::Printed) => true,
    };
    let coupling = q_frac((q + 1) * (q + 1), q);
    let first: Q = (0..=mi / 2)
        .map(|l| {
            let x = -gi + mi - 2 * l + 1;
            let tail = &coupling * catalan_at(l - 1, x);
            let c = if plus {
                catalan_at(l, x) + tail
            } else {
                catalan_at(l, x) - tail
            };
            at(cover, mi - 2 * l) * q_pow(q, l) * c
        })
        .sum();
    if branch == Branch::Elliptic {
        return Ok(first);
    }
    let second: Q = (0..=mi / 2)
        .filter(|l| 2 * l < mi)
        .map(|l| at(cover, mi - 2 * l - 1) * q_pow(q, l) * catalan_at(l, -gi + mi - 2 * l))
        .sum();
    Ok(first - q_int(2 * (q + 1)) * second)
}

/// Stable germ from orbit-summed covers: every `SO(V)(k)`-orbit reaches
/// `Γ(T̃_α) + Γ(ad(u) T̃_α)` and `ad(u)` permutes the orbits, so the stable
/// value is half the sum.
pub fn even_stable_from_cover_sum(
    cover_sum: &[i128],
    g: usize,
    q: i64,
    m: usize,
    branch: Branch,
    signs: TermSigns,
    prefactor: &Q,
) -> Result<Q, GermsError> {
    Ok(even_bracket(cover_sum, g, q, m, branch, signs)? * prefactor / q_int(2))
}

/// Twist aggregate of the covers of a curve: `2 #ker(Nm)(k) #Sym^j`.
pub fn cover_aggregate(weil: &WeilData, stabilizer: u64, len: usize) -> Vec<i128> {
    (0..len)
        .map(|j| 2 * stabilizer as i128 * weil.sym_power_count(j))
        .collect()
}

/// Even-case per-orbit covers from flag censuses, in orbit order.
pub fn even_covers_from_flags(f: &Field, reps: &[Mat]) -> Result<Vec<Vec<i128>>, GermsError> {
    reps.iter()
        .map(|t| {
            if t.rows() % 2 == 1 {
                return Err(GermsError::WrongParity(t.rows(), "even"));
            }
            let census = even_census(f, t)?;
            let sums: Vec<u64> = census.ruling_sums().iter().map(|&s| s as u64).collect();
            even_cover_from_ruling_sums(&sums, f.order() as i128)
        })
        .collect()
}

/// Two-block nilpotent orbit label. Classes are `1` or `-1` for the trivial
/// and non-trivial norm class of each block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NilpotentOrbitLabel {
    pub blocks: Vec<usize>,
    pub classes: Vec<i8>,
    pub branch: Branch,
}

/// Labels with blocks `(n - m, m)`. Odd-length blocks carry the forced
/// class; two even blocks are hyperbolic exactly when their classes differ
/// (or, for equal blocks, when the single class is trivial).
pub fn nilpotent_labels(n: usize, m: usize) -> Vec<NilpotentOrbitLabel> {
    let hyperbolic = |classes: Vec<i8>, blocks: Vec<usize>| NilpotentOrbitLabel {
        blocks,
        classes,
        branch: Branch::Hyperbolic,
    };
    if m == 0 {
        return if n % 2 == 1 {
            vec![hyperbolic(vec![1], vec![n])]
        } else {
            vec![hyperbolic(vec![1], vec![n]), hyperbolic(vec![-1], vec![n])]
        };
    }
    let big = n - m;
    if n % 2 == 1 {
        // One odd and one even block; the even block carries the free class.
        return [1, -1]
            .into_iter()
            .map(|d| {
                let classes = if m.is_multiple_of(2) {
                    vec![1, d]
                } else {
                    vec![d, 1]
                };
                hyperbolic(classes, vec![big, m])
            })
            .collect();
    }
    if m % 2 == 1 {
        return if big == m {
            vec![hyperbolic(vec![1], vec![m, m])]
        } else {
            [1, -1]
                .into_iter()
                .map(|d| hyperbolic(vec![d, d], vec![big, m]))
                .collect()
        };
    }
    if big == m {
        return [1, -1]
            .into_iter()
            .map(|d: i8| NilpotentOrbitLabel {
                blocks: vec![m, m],
                classes: vec![d],
                branch: if d == 1 {
                    Branch::Hyperbolic
                } else {
                    Branch::Elliptic
                },
            })
            .collect();
    }
    let mut out = Vec::new();
    for d1 in [1i8, -1] {
        for d2 in [1i8, -1] {
            out.push(NilpotentOrbitLabel {
                blocks: vec![big, m],
                classes: vec![d1, d2],
                branch: if d1 * d2 == -1 {
                    Branch::Hyperbolic
                } else {
                    Branch::Elliptic
                },
            });
        }
    }
    out
}

/// A characteristic polynomial with an odd stable coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityWitness {
    pub poly: String,
    pub shape: Vec<usize>,
    /// `a_m`, or `a_{g+1} / (q+1)` for `m = g + 1` in the even case.
    pub value: i128,
    /// For `m = g + 1` in the even case: `a_g`, whose parity must agree.
    pub tracked: Option<i128>,
}

/// Value whose oddness certifies `a_m != 0`, and the tracked partner.
fn parity_value(w: &WeilData, m: usize) -> Option<(i128, Option<i128>)> {
    let a = w.a_stable();
    let g = w.genus;
    let value = *a.get(m)?;
    if w.parity == crate::zeta::Parity::Even && m == g + 1 {
        let q1 = w.q + 1;
        debug_assert_eq!(value % q1, 0);
        return Some((value / q1, Some(a[g])));
    }
    Some((value, None))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Tier {
    Irreducible,
    TwoFactors,
    Squarefree,
}

/// First monic squarefree `p_T` of degree `n` with `a_m(T)` odd, trying
/// irreducible polynomials first, then two factors of degrees `m` and
/// `n - m`, then any squarefree polynomial.
pub fn parity_witness_search(
    f: &std::sync::Arc<Field>,
    n: usize,
    m: usize,
) -> Result<Option<ParityWitness>, GermsError> {
    let g = (n - 1) / 2;
    let top = if n % 2 == 1 { g } else { g + 1 };
    if m > top {
        return Err(GermsError::BadIndex { m, g });
    }
    let mut two = vec![m.min(n - m), m.max(n - m)];
    two.retain(|&d| d > 0);
    for tier in [Tier::Irreducible, Tier::TwoFactors, Tier::Squarefree] {
        for p in Poly::monics(f, n) {
            let admissible = match tier {
                Tier::Irreducible => is_irreducible(f, &p)?,
                _ => is_squarefree(f, &p)?,
            };
            if !admissible {
                continue;
            }
            let mut shape = factor(f, &p)?.degrees();
            shape.sort_unstable();
            if tier == Tier::TwoFactors && shape != two {
                continue;
            }
            let w = weil_polynomial(&CurveModel::new(f, p.clone())?)?;
            let Some((value, tracked)) = parity_value(&w, m) else {
                continue;
            };
            if value.rem_euclid(2) == 1 {
                return Ok(Some(ParityWitness {
                    poly: p.to_list(),
                    shape,
                    value,
                    tracked,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrics::build_orbit_representatives;

    fn poly(f: &Field, c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| f.from_int(x)).collect())
    }

    #[test]
    fn running_cubic_germs() {
        let f = Field::cached(3).unwrap();
        let p = poly(&f, &[1, -1, 0, 1]);
        let s = stable_germs(&CurveModel::new(&f, p.clone()).unwrap()).unwrap();
        assert_eq!(s.primary, vec![1, 3]);
        assert_eq!(s.companion, vec![1, -3]);
        let reps = build_orbit_representatives(&f, &p).unwrap();
        let gv = germ_from_flags(&f, &reps[0].matrix, NilpotentFamily::Primary).unwrap();
        assert_eq!(gv.values, vec![q_int(1), q_int(3)]);
        let gt = germ_from_group(&f, &reps[0].matrix, NilpotentFamily::Primary).unwrap();
        assert_eq!(gt.values, gv.values);
    }

    #[test]
    fn solve_running_example_by_hand() {
        // J = (1, 6): Γ_0 = 1 and 6 = 3 Γ_0 + Γ_1.
        assert_eq!(
            solve_germs(&[q_int(1), q_int(6)], 1, 3),
            vec![q_int(1), q_int(3)]
        );
    }

    #[test]
    fn odd_formula_small_cases() {
        // Single-orbit g = 1 curve with N_1 = 7: S̃ym = (1, 7).
        let sym = sym_tilde_from_exact(&[1, 6], 3).unwrap();
        assert_eq!(sym, vec![1, 7]);
        assert_eq!(
            odd_formula(&sym, 1, 1, 3, 0, OddVariant::Main).unwrap(),
            q_int(1)
        );
        assert_eq!(
            odd_formula(&sym, 1, 1, 3, 1, OddVariant::Main).unwrap(),
            q_int(3)
        );
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan_at(-1, 4), Q::zero());
        assert_eq!(catalan_at(0, -7), q_int(1));
        assert_eq!(catalan_at(2, 1), q_int(2));
        assert_eq!(catalan_at(3, 1), q_int(5));
    }

    #[test]
    fn even_branches_agree_at_zero() {
        let cover = vec![8i128, 20, 40];
        for signs in [TermSigns::Printed, TermSigns::Swapped] {
            let h = even_bracket(&cover, 2, 3, 0, Branch::Hyperbolic, signs).unwrap();
            let e = even_bracket(&cover, 2, 3, 0, Branch::Elliptic, signs).unwrap();
            assert_eq!(h, e);
        }
    }

    #[test]
    fn hyperbolic_at_one_uses_only_leading_terms() {
        let cover = vec![2i128, 11];
        let h = even_bracket(&cover, 1, 3, 1, Branch::Hyperbolic, TermSigns::Printed).unwrap();
        assert_eq!(h, q_int(11 - 2 * 4 * 2));
    }

    #[test]
    fn label_counts() {
        assert_eq!(nilpotent_labels(3, 0).len(), 1);
        assert_eq!(nilpotent_labels(5, 2).len(), 2);
        let l = nilpotent_labels(6, 2);
        assert_eq!(l.len(), 4);
        assert_eq!(
            l.iter().filter(|x| x.branch == Branch::Hyperbolic).count(),
            2
        );
        assert_eq!(nilpotent_labels(6, 1).len(), 2);
        assert_eq!(nilpotent_labels(8, 4).len(), 2);
        assert_eq!(nilpotent_labels(6, 3).len(), 1);
    }

    #[test]
    fn running_cubic_is_a_parity_witness() {
        let f = Field::cached(3).unwrap();
        let w = parity_witness_search(&f, 3, 1).unwrap().unwrap();
        assert_eq!(w.value.rem_euclid(2), 1);
        assert_eq!(w.shape, vec![3]);
        let w0 = parity_witness_search(&f, 4, 0).unwrap().unwrap();
        assert_eq!(w0.value, 1);
    }
}
