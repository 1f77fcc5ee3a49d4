//! Common isotropic subspaces of a pencil and the census of `m`-exact flags.
//!
//! Odd case: `V` of dimension `2g + 1`, flags `W^1 ⊂ ... ⊂ W^g ⊂ V ⊕ k`.
//! Even case: `V` of dimension `2g + 2`, flags `W^1 ⊂ ... ⊂ W^{g+1} ⊂ V`.
//! A flag carries the set of `m` for which it is `m`-good; it is
//! `m`-excellent and `m`-general exactly when that set is `[m, g]`.
//!
//! In the odd case `1`-goodness reads `T(W^{g-1}) ⊂ π_1(W^g)`: `T` maps `V`
//! into `V`, and `T(W^{g-1}) ⊂ W^g` would force an isotropic eigenline.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use super::forms::{split_gram, CornerSign, Pencil};
use super::QuadricsError;
use crate::algebra::linalg::{all_vectors, combine, dot, Mat, Subspace};
use crate::algebra::{Elem, Field};

/// Bound on `q^{ambient}` for exhaustive vector enumeration.
pub const MAX_AMBIENT_VECTORS: u64 = 2_000_000;

fn guard(f: &Field, ambient: usize) -> Result<(), QuadricsError> {
    let size = (f.order() as u64).checked_pow(ambient as u32);
    match size {
        Some(s) if s <= MAX_AMBIENT_VECTORS => Ok(()),
        _ => Err(QuadricsError::TooLarge {
            what: format!("F_{}^{}", f.order(), ambient),
        }),
    }
}

/// Vectors with first nonzero coordinate `1`, one per line.
fn projective_points(f: &Field, n: usize) -> impl Iterator<Item = Vec<Elem>> + '_ {
    all_vectors(f, n).filter(|v| v.iter().find(|&&c| c != 0) == Some(&1))
}

/// All `dim`-dimensional subspaces isotropic for every form, sorted.
pub fn common_isotropic(
    f: &Field,
    grams: &[&Mat],
    dim: usize,
) -> Result<Vec<Subspace>, QuadricsError> {
    let n = grams[0].rows();
    guard(f, n)?;
    let points: Vec<Vec<Elem>> = projective_points(f, n)
        .filter(|v| grams.iter().all(|g| g.bilinear(f, v, v) == 0))
        .collect();
    let mut level: Vec<Subspace> = vec![Subspace::zero(n)];
    for _ in 0..dim {
        let next: HashSet<Subspace> = level
            .par_iter()
            .flat_map_iter(|s| {
                let functionals: Vec<Vec<Elem>> = s
                    .basis()
                    .iter()
                    .flat_map(|b| grams.iter().map(move |g| g.apply(f, b)))
                    .collect();
                points
                    .iter()
                    .filter(move |v| functionals.iter().all(|phi| dot(f, phi, v) == 0))
                    .filter(move |v| !s.contains(f, v))
                    .map(move |v| s.with_vector(f, v.clone()))
                    .collect::<Vec<_>>()
            })
            .collect();
        level = next.into_iter().collect();
        level.sort();
    }
    Ok(level)
}

/// A flag `W^1 ⊂ ... ⊂ W^top`; `spaces[i - 1] = W^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flag {
    pub spaces: Vec<Subspace>,
    /// Bit `m` set when the flag is `m`-good.
    pub good_mask: u32,
}

impl Flag {
    fn level(&self, i: usize) -> Option<&Subspace> {
        i.checked_sub(1).map(|j| &self.spaces[j])
    }

    pub fn is_good_for(&self, m: usize) -> bool {
        self.good_mask >> m & 1 == 1
    }

    /// `m`-good and `n`-good for `m < n <= g`.
    pub fn is_excellent(&self, m: usize, g: usize) -> bool {
        (m..=g).all(|n| self.is_good_for(n))
    }

    /// Not `n`-good for any `n < m`.
    pub fn is_general(&self, m: usize) -> bool {
        self.good_mask & ((1u32 << m) - 1) == 0
    }

    /// The unique `m` with good set `[m, g]`, if any.
    pub fn exact_index(&self, g: usize) -> Option<usize> {
        (0..=g).find(|&m| self.is_excellent(m, g) && self.is_general(m))
    }
}

/// Predicates of a flag at a fixed `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FlagPredicates {
    pub good: bool,
    pub m_good: bool,
    pub m_excellent: bool,
    pub m_general: bool,
    pub m_exact: bool,
}

/// `T(A) ⊂ B` for `A` inside the first `n` coordinates.
fn maps_into(f: &Field, t: &Mat, a: Option<&Subspace>, b: Option<&Subspace>) -> bool {
    let Some(a) = a else { return true };
    let n = t.rows();
    a.basis().iter().all(|v| {
        if v[n..].iter().any(|&c| c != 0) {
            return false;
        }
        let mut tv = t.apply(f, &v[..n]);
        tv.resize(v.len(), 0);
        b.is_some_and(|b| b.contains(f, &tv))
    })
}

fn inside_first(w: &Subspace, n: usize) -> bool {
    w.basis().iter().all(|v| v[n..].iter().all(|&c| c == 0))
}

/// `W ∩ (first n coordinates)` when `W` has ambient `n + 1`.
fn intersect_first(f: &Field, w: &Subspace, n: usize) -> Subspace {
    let basis = w.basis();
    let Some(pos) = basis.iter().position(|v| v[n] != 0) else {
        return w.clone();
    };
    let pivot = &basis[pos];
    let inv = f.inv(pivot[n]).expect("nonzero");
    let vs = basis
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != pos)
        .map(|(_, v)| {
            let c = f.mul(v[n], inv);
            v.iter()
                .zip(pivot)
                .map(|(&a, &b)| f.sub(a, f.mul(c, b)))
                .collect()
        })
        .collect();
    Subspace::span(f, w.ambient(), vs)
}

fn project_first(f: &Field, w: &Subspace, n: usize) -> Subspace {
    let vs = w
        .basis()
        .iter()
        .map(|v| {
            let mut p = v.clone();
            for c in p[n..].iter_mut() {
                *c = 0;
            }
            p
        })
        .collect();
    Subspace::span(f, w.ambient(), vs)
}

/// Fill `spaces[..=top_free]` downward by hyperplanes subject to
/// `T(W^i) ⊂ target(W^{i+1}, W^{i+2}, ...)`.
fn extend_down(
    f: &Field,
    t: &Mat,
    partial: &mut Vec<Option<Subspace>>,
    i: usize,
    constraint: &dyn Fn(usize, &[Option<Subspace>]) -> Option<Subspace>,
    out: &mut Vec<Vec<Subspace>>,
) {
    if i == 0 {
        out.push(
            partial[1..]
                .iter()
                .map(|s| s.clone().expect("filled"))
                .collect(),
        );
        return;
    }
    let above = partial[i + 1].clone().expect("filled");
    for h in above.hyperplanes(f) {
        if let Some(target) = constraint(i, partial) {
            if !maps_into(f, t, Some(&h), Some(&target)) {
                continue;
            }
        }
        partial[i] = Some(h);
        extend_down(f, t, partial, i - 1, constraint, out);
    }
    partial[i] = None;
}

/// Odd-case census for one operator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddCensus {
    pub g: usize,
    /// `#F_T(k)`.
    pub total: usize,
    /// `#F_{T,m}(k)` for `0 <= m <= g`.
    pub exact: Vec<usize>,
    pub good_flags: usize,
    /// Points of `F_T` without exactly one exact flag above them.
    pub unstratified: usize,
}

impl OddCensus {
    pub fn stratified(&self) -> bool {
        self.unstratified == 0 && self.exact.iter().sum::<usize>() == self.total
    }
}

/// Good flags above one `W^g` in the odd case.
fn odd_flags_over(f: &Field, t: &Mat, w: &Subspace, g: usize) -> Vec<Flag> {
    let n = t.rows();
    let pi_w = project_first(f, w, n);
    let top_choices: Vec<Subspace> = if g == 1 {
        vec![Subspace::zero(n + 1)]
    } else if inside_first(w, n) {
        w.hyperplanes(f)
    } else {
        vec![intersect_first(f, w, n)]
    };
    let mut chains = Vec::new();
    for wg1 in top_choices {
        if g == 1 {
            chains.push(vec![w.clone()]);
            continue;
        }
        let mut partial: Vec<Option<Subspace>> = vec![None; g + 1];
        partial[g] = Some(w.clone());
        partial[g - 1] = Some(wg1);
        let constraint = |i: usize, p: &[Option<Subspace>]| -> Option<Subspace> {
            if i + 2 == g {
                Some(pi_w.clone())
            } else {
                p[i + 2].clone()
            }
        };
        if g == 2 {
            // W^1 = W^{g-1} is already fixed.
            chains.push(vec![partial[1].clone().unwrap(), w.clone()]);
            continue;
        }
        extend_down(f, t, &mut partial, g - 2, &constraint, &mut chains);
    }
    chains
        .into_iter()
        .map(|spaces| {
            let mut flag = Flag {
                spaces,
                good_mask: 0,
            };
            let mut mask = 0u32;
            if inside_first(w, n) {
                mask |= 1;
            }
            for m in 1..=g {
                let target = if m == 1 {
                    Some(&pi_w)
                } else {
                    flag.level(g - m + 1)
                };
                if maps_into(f, t, flag.level(g - m), target) {
                    mask |= 1 << m;
                }
            }
            flag.good_mask = mask;
            flag
        })
        .collect()
}

/// `#F_T(k)` and `#F_{T,m}(k)` for a self-adjoint `T` of odd size.
pub fn odd_census(f: &Field, t: &Mat, sign: CornerSign) -> Result<OddCensus, QuadricsError> {
    let n = t.rows();
    let g = (n - 1) / 2;
    let pencil = Pencil::extended(f, t, sign);
    let ft = common_isotropic(f, &[&pencil.gram1, &pencil.gram2], g)?;
    let per_w: Vec<(usize, Vec<usize>)> = ft
        .par_iter()
        .map(|w| {
            let flags = odd_flags_over(f, t, w, g);
            let mut exact = vec![0usize; g + 1];
            for fl in &flags {
                if let Some(m) = fl.exact_index(g) {
                    exact[m] += 1;
                }
            }
            (flags.len(), exact)
        })
        .collect();
    let mut exact = vec![0usize; g + 1];
    let mut good_flags = 0;
    let mut unstratified = 0;
    for (count, e) in &per_w {
        good_flags += count;
        if e.iter().sum::<usize>() != 1 {
            unstratified += 1;
        }
        for (acc, x) in exact.iter_mut().zip(e) {
            *acc += x;
        }
    }
    Ok(OddCensus {
        g,
        total: ft.len(),
        exact,
        good_flags,
        unstratified,
    })
}

/// Predicates of an odd-case flag (inside `V ⊕ k`) at `m`.
pub fn odd_predicates(
    f: &Field,
    t: &Mat,
    sign: CornerSign,
    spaces: &[Subspace],
    m: usize,
) -> Result<FlagPredicates, QuadricsError> {
    let n = t.rows();
    let g = (n - 1) / 2;
    if spaces.len() != g
        || m > g
        || spaces
            .iter()
            .enumerate()
            .any(|(i, s)| s.dim() != i + 1 || s.ambient() != n + 1)
    {
        return Err(QuadricsError::BadIndex { m, g });
    }
    let pencil = Pencil::extended(f, t, sign);
    let w = &spaces[g - 1];
    let isotropic = [&pencil.gram1, &pencil.gram2].iter().all(|gr| {
        w.basis()
            .iter()
            .all(|u| w.basis().iter().all(|v| gr.bilinear(f, u, v) == 0))
    });
    let nested = spaces.windows(2).all(|p| p[1].contains_space(f, &p[0]));
    let below_in_v = g < 2 || inside_first(&spaces[g - 2], n);
    let pi_w = project_first(f, w, n);
    let level = |i: usize| i.checked_sub(1).map(|j| &spaces[j]);
    let iv = (1..g.saturating_sub(2)).all(|i| maps_into(f, t, level(i), level(i + 2)));
    let v = g < 2 || maps_into(f, t, level(g - 2), Some(&pi_w));
    let good = isotropic && nested && below_in_v && iv && v;
    let mut mask = 0u32;
    if inside_first(w, n) {
        mask |= 1;
    }
    for k in 1..=g {
        let target = if k == 1 {
            Some(&pi_w)
        } else {
            level(g - k + 1)
        };
        if maps_into(f, t, level(g - k), target) {
            mask |= 1 << k;
        }
    }
    let flag = Flag {
        spaces: spaces.to_vec(),
        good_mask: if good { mask } else { 0 },
    };
    let m_good = good && flag.is_good_for(m);
    let m_excellent = good && flag.is_excellent(m, g);
    let m_general = good && flag.is_general(m);
    Ok(FlagPredicates {
        good,
        m_good,
        m_excellent,
        m_general,
        m_exact: m_excellent && m_general,
    })
}

/// Even-case census for one operator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvenCensus {
    pub g: usize,
    /// `#F_T(k)`.
    pub total: usize,
    /// `#F^{(1)}_{T,m}(k)` and `#F^{(2)}_{T,m}(k)` for `0 <= m <= g`.
    pub exact: Vec<[usize; 2]>,
    pub good_flags: usize,
    /// Excellent and general flags without an auxiliary flag.
    pub aux_missing: usize,
    /// Excellent and general flags with more than one auxiliary flag.
    pub aux_multiple: usize,
    /// `W^g` carrying two exact flags with the same `m` and ruling.
    pub embedding_failures: usize,
    /// `W^g` exact for an odd `m` in one ruling only.
    pub odd_ruling_mismatches: usize,
    /// `W^g` carrying no exact flag.
    pub uncovered: usize,
}

impl EvenCensus {
    /// Each ruling component embeds into `F_T` and odd-`m` images agree.
    pub fn consistent(&self) -> bool {
        self.aux_missing == 0
            && self.aux_multiple == 0
            && self.embedding_failures == 0
            && self.odd_ruling_mismatches == 0
            && self
                .exact
                .iter()
                .enumerate()
                .all(|(m, e)| m % 2 == 0 || e[0] == e[1])
    }

    /// `#F^{(1)}_{T,m} + #F^{(2)}_{T,m}`.
    pub fn ruling_sums(&self) -> Vec<usize> {
        self.exact.iter().map(|e| e[0] + e[1]).collect()
    }
}

/// Lagrangians of the split form containing an isotropic `W` of codimension
/// one in a Lagrangian.
fn lagrangians_over(f: &Field, j: &Mat, w: &Subspace) -> Vec<Subspace> {
    let n = j.rows();
    let rows: Vec<Vec<Elem>> = w.basis().iter().map(|b| j.apply(f, b)).collect();
    let perp = Mat::from_rows(&rows).kernel(f);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for c in projective_points(f, perp.len()) {
        let v = combine(f, &perp, &c);
        if j.bilinear(f, &v, &v) != 0 || w.contains(f, &v) {
            continue;
        }
        let l = w.with_vector(f, v);
        debug_assert_eq!(l.dim(), n / 2);
        if seen.insert(l.clone()) {
            out.push(l);
        }
    }
    out.sort();
    out
}

fn even_flags_over(f: &Field, t: &Mat, j: &Mat, w: &Subspace, g: usize) -> Vec<Flag> {
    let mut chains: Vec<Vec<Subspace>> = Vec::new();
    for top in lagrangians_over(f, j, w) {
        let mut partial: Vec<Option<Subspace>> = vec![None; g + 2];
        partial[g + 1] = Some(top);
        partial[g] = Some(w.clone());
        let constraint = |i: usize, p: &[Option<Subspace>]| p[i + 2].clone();
        if g == 0 {
            chains.push(partial[1..].iter().map(|s| s.clone().unwrap()).collect());
            continue;
        }
        extend_down(f, t, &mut partial, g - 1, &constraint, &mut chains);
    }
    chains
        .into_iter()
        .map(|spaces| {
            let mut flag = Flag {
                spaces,
                good_mask: 0,
            };
            let mut mask = 0u32;
            for m in 0..=g {
                let lower = if m < g { flag.level(g - m) } else { None };
                if maps_into(f, t, lower, flag.level(g - m + 1)) {
                    mask |= 1 << m;
                }
            }
            flag.good_mask = mask;
            flag
        })
        .collect()
}

/// Ruling index (0 or 1) of a Lagrangian relative to `span(e_1..e_{n/2})`.
pub fn ruling(f: &Field, l: &Subspace) -> usize {
    let n = l.ambient();
    let h = n / 2;
    let base = Subspace::span(
        f,
        n,
        (0..h)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                e
            })
            .collect(),
    );
    (h - l.intersection_dim(f, &base)) % 2
}

/// `#F_T(k)` and the ruling-split `#F^{(i)}_{T,m}(k)` for a self-adjoint `T`
/// of even size.
pub fn even_census(f: &Field, t: &Mat) -> Result<EvenCensus, QuadricsError> {
    let n = t.rows();
    let g = (n - 2) / 2;
    let pencil = Pencil::on_v(f, t);
    let j = split_gram(n);
    let ft = common_isotropic(f, &[&pencil.gram1, &pencil.gram2], g)?;
    let flags: Vec<Flag> = ft
        .par_iter()
        .flat_map_iter(|w| even_flags_over(f, t, &j, w, g))
        .collect();
    let by_wg: HashMap<&Subspace, Vec<usize>> =
        flags
            .iter()
            .enumerate()
            .fold(HashMap::new(), |mut acc, (i, fl)| {
                acc.entry(&fl.spaces[g - 1]).or_default().push(i);
                acc
            });
    let by_ends: HashMap<(Option<&Subspace>, &Subspace), Vec<usize>> = flags
        .iter()
        .enumerate()
        .fold(HashMap::new(), |mut acc, (i, fl)| {
            acc.entry((fl.level(g - 1), &fl.spaces[g]))
                .or_default()
                .push(i);
            acc
        });
    let mut exact = vec![[0usize; 2]; g + 1];
    let mut aux_missing = 0;
    let mut aux_multiple = 0;
    let mut per_w: HashMap<&Subspace, Vec<(usize, usize)>> = HashMap::new();
    for fl in &flags {
        let Some(m) = fl.exact_index(g) else { continue };
        let is_exact = if m == 0 {
            true
        } else {
            let candidates: Vec<&Flag> = if m % 2 == 1 {
                by_wg[&fl.spaces[g - 1]]
                    .iter()
                    .map(|&i| &flags[i])
                    .filter(|u| u.spaces[g] != fl.spaces[g])
                    .collect()
            } else {
                by_ends
                    .get(&(fl.level(g - 1), &fl.spaces[g]))
                    .into_iter()
                    .flatten()
                    .map(|&i| &flags[i])
                    .filter(|u| u.spaces[g - 1] != fl.spaces[g - 1])
                    .collect()
            };
            let candidates: Vec<&Flag> = candidates
                .into_iter()
                .filter(|u| u.is_excellent(m, g))
                .collect();
            if candidates.is_empty() {
                aux_missing += 1;
            }
            if candidates.len() > 1 {
                aux_multiple += 1;
            }
            !candidates.is_empty() && candidates.iter().all(|u| u.is_general(m))
        };
        if is_exact {
            let r = ruling(f, &fl.spaces[g]);
            exact[m][r] += 1;
            per_w.entry(&fl.spaces[g - 1]).or_default().push((m, r));
        }
    }
    let mut embedding_failures = 0;
    let mut odd_ruling_mismatches = 0;
    let mut uncovered = 0;
    for w in &ft {
        let hits = per_w.get(w).map(Vec::as_slice).unwrap_or(&[]);
        if hits.is_empty() {
            uncovered += 1;
        }
        let distinct: HashSet<&(usize, usize)> = hits.iter().collect();
        if distinct.len() != hits.len() {
            embedding_failures += 1;
        }
        let odd_mismatch = hits
            .iter()
            .any(|&(m, r)| m % 2 == 1 && !distinct.contains(&(m, 1 - r)));
        if odd_mismatch {
            odd_ruling_mismatches += 1;
        }
    }
    Ok(EvenCensus {
        g,
        total: ft.len(),
        exact,
        good_flags: flags.len(),
        aux_missing,
        aux_multiple,
        embedding_failures,
        odd_ruling_mismatches,
        uncovered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Poly;
    use crate::quadrics::orbits::build_orbit_representatives;

    fn poly(f: &Field, c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| f.from_int(x)).collect())
    }

    #[test]
    fn running_cubic_census() {
        let f = Field::new(3).unwrap();
        let reps = build_orbit_representatives(&f, &poly(&f, &[1, -1, 0, 1])).unwrap();
        let c = odd_census(&f, &reps[0].matrix, CornerSign::Matched).unwrap();
        assert_eq!(c.total, 7);
        assert_eq!(c.exact, vec![1, 6]);
        assert!(c.stratified());
    }

    #[test]
    fn predicates_agree_with_census() {
        let f = Field::new(3).unwrap();
        let reps = build_orbit_representatives(&f, &poly(&f, &[1, -1, 0, 1])).unwrap();
        let t = &reps[0].matrix;
        let pencil = Pencil::extended(&f, t, CornerSign::Matched);
        let ft = common_isotropic(&f, &[&pencil.gram1, &pencil.gram2], 1).unwrap();
        let exact1 = ft
            .iter()
            .filter(|w| {
                odd_predicates(&f, t, CornerSign::Matched, &[(*w).clone()], 1)
                    .unwrap()
                    .m_exact
            })
            .count();
        assert_eq!(exact1, 6);
        for w in &ft {
            assert!(
                odd_predicates(&f, t, CornerSign::Matched, std::slice::from_ref(w), 1)
                    .unwrap()
                    .m_good
            );
        }
    }

    #[test]
    fn ruling_of_coordinate_lagrangians() {
        let f = Field::new(3).unwrap();
        let e = |i: usize| {
            let mut v = vec![0; 4];
            v[i] = 1;
            v
        };
        let l0 = Subspace::span(&f, 4, vec![e(0), e(1)]);
        let l1 = Subspace::span(&f, 4, vec![e(0), e(2)]);
        let l2 = Subspace::span(&f, 4, vec![e(2), e(3)]);
        assert_eq!(ruling(&f, &l0), 0);
        assert_eq!(ruling(&f, &l1), 1);
        assert_eq!(ruling(&f, &l2), 0);
    }
}
