//! Signed permutations of `{0, ±1, ..., ±g}` and the sums over the sets
//! `Xi_{m,m'}` that evaluate unipotent integrals of nilpotent orbits.
//!
//! A signed permutation is stored by its values on `1..=g`; it extends by
//! `sigma(-i) = -sigma(i)` and `sigma(0) = 0`.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::rational::binom_nonneg;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm(Vec<i32>);

impl SignedPerm {
    pub fn new(values: Vec<i32>) -> SignedPerm {
        SignedPerm(values)
    }

    pub fn identity(g: usize) -> SignedPerm {
        SignedPerm((1..=g as i32).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// `sigma(i)` for `-g <= i <= g`.
    #[inline]
    pub fn apply(&self, i: i32) -> i32 {
        match i {
            0 => 0,
            i if i > 0 => self.0[i as usize - 1],
            i => -self.0[(-i) as usize - 1],
        }
    }

    /// Whether `sigma` maps positive indices to positive indices.
    pub fn is_unsigned(&self) -> bool {
        self.0.iter().all(|&v| v > 0)
    }

    /// Whether `sigma` fixes `1..=k` pointwise.
    pub fn fixes_prefix(&self, k: usize) -> bool {
        self.0
            .iter()
            .take(k)
            .enumerate()
            .all(|(i, &v)| v == i as i32 + 1)
    }

    /// `#{1 <= i < g : sigma(i) > sigma(i+1)}`.
    pub fn descents(&self) -> usize {
        self.0.windows(2).filter(|w| w[0] > w[1]).count()
    }

    /// `#{1 <= i < j <= g : sigma(i) > sigma(j)}`.
    pub fn inversions(&self) -> usize {
        self.inversions_with_gap(1)
    }

    /// Inversions with `j - i >= gap`.
    pub fn inversions_with_gap(&self, gap: usize) -> usize {
        let g = self.0.len();
        (0..g)
            .flat_map(|i| ((i + gap)..g).map(move |j| (i, j)))
            .filter(|&(i, j)| self.0[i] > self.0[j])
            .count()
    }
}

/// All `2^g g!` signed permutations, in a fixed order.
pub fn signed_permutations(g: usize) -> Vec<SignedPerm> {
    let perms = permutations(g);
    let mut out = Vec::with_capacity(perms.len() << g);
    for p in &perms {
        for mask in 0u32..(1 << g) {
            out.push(SignedPerm(
                p.iter()
                    .enumerate()
                    .map(|(k, &v)| if mask >> k & 1 == 1 { -v } else { v })
                    .collect(),
            ));
        }
    }
    out
}

/// All permutations of `1..=g` in lexicographic order.
pub fn permutations(g: usize) -> Vec<Vec<i32>> {
    let mut cur: Vec<i32> = (1..=g as i32).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (0..g.saturating_sub(1))
            .rev()
            .find(|&i| cur[i] < cur[i + 1])
        else {
            return out;
        };
        let j = (i + 1..g)
            .rev()
            .find(|&j| cur[j] > cur[i])
            .expect("successor");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

/// The index pairs `(i, j)`, `-g <= i < j <= g`, constrained for a given `m`:
/// `j - i = 2` with `|i + j| < 2m`, or `j - i = 1` with
/// `2m < |i + j| <= 2g + 1`.
pub fn constrained_pairs(g: usize, m: usize) -> Vec<(i32, i32)> {
    let (g, m) = (g as i32, m as i32);
    let mut out = Vec::new();
    for i in -g..=g {
        for j in (i + 1)..=g {
            let s = (i + j).abs();
            let clause_i = j - i == 2 && s < 2 * m;
            let clause_ii = j - i == 1 && 2 * m < s && s <= 2 * g + 1;
            if clause_i || clause_ii {
                out.push((i, j));
            }
        }
    }
    out
}

/// Membership in `Xi_{m,m'}`: every constrained pair satisfies
/// `sigma(j) - sigma(i) = 1` with `|sigma(i) + sigma(j)| > 2m'`, or
/// `sigma(j) - sigma(i) >= 2`.
pub fn satisfies_cond(sigma: &SignedPerm, pairs: &[(i32, i32)], mp: usize) -> bool {
    let mp = mp as i32;
    pairs.iter().all(|&(i, j)| {
        let (a, b) = (sigma.apply(i), sigma.apply(j));
        (b - a == 1 && (a + b).abs() > 2 * mp) || b - a >= 2
    })
}

pub fn xi_members(candidates: &[SignedPerm], g: usize, m: usize, mp: usize) -> Vec<SignedPerm> {
    let pairs = constrained_pairs(g, m);
    candidates
        .par_iter()
        .filter(|s| satisfies_cond(s, &pairs, mp))
        .cloned()
        .collect()
}

/// Summary of `Xi_{m,m'}` for one triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XiSummary {
    pub g: usize,
    pub m: usize,
    pub mp: usize,
    pub size: usize,
    /// `descent_hist[r] = #{sigma : delta_3(sigma) = r}`.
    pub descent_hist: Vec<usize>,
    /// Every member is unsigned and fixes `1..=m'`.
    pub members_in_sg: bool,
    /// `delta_1 + delta_2 - g^2 = m - m' - delta_3` for every member.
    pub exponent_identity: bool,
}

pub fn summarize(members: &[SignedPerm], g: usize, m: usize, mp: usize) -> XiSummary {
    let mut hist = vec![0usize; g + 1];
    let mut in_sg = true;
    let mut ident = true;
    let d = (m - mp) as i64;
    for s in members {
        let d3 = s.descents();
        hist[d3] += 1;
        in_sg &= s.is_unsigned() && s.fixes_prefix(mp);
        let delta1 = (g * g) as i64 - s.inversions() as i64;
        let delta2 = d + s.inversions_with_gap(2) as i64;
        ident &= delta1 + delta2 - (g * g) as i64 == d - d3 as i64;
    }
    while hist.len() > 1 && *hist.last().unwrap() == 0 {
        hist.pop();
    }
    XiSummary {
        g,
        m,
        mp,
        size: members.len(),
        descent_hist: hist,
        members_in_sg: in_sg,
        exponent_identity: ident,
    }
}

impl XiSummary {
    /// `sum_{sigma} q^{m - m' - delta_3(sigma)}`.
    pub fn descent_sum(&self, q: i128) -> i128 {
        let d = (self.m - self.mp) as u32;
        self.descent_hist
            .iter()
            .enumerate()
            .map(|(r, &c)| {
                if c == 0 {
                    0
                } else {
                    c as i128 * q.pow(d - r as u32)
                }
            })
            .sum()
    }

    /// `#{delta_3 <= r} = binom(g - m', r)` for `r <= floor((m - m')/2)`, no
    /// member beyond that, and `|Xi| = binom(g - m', floor((m - m')/2))`.
    pub fn path_distribution_holds(&self) -> bool {
        let top = (self.m - self.mp) / 2;
        let n = (self.g - self.mp) as i64;
        let mut cum = 0usize;
        for (r, &c) in self.descent_hist.iter().enumerate() {
            cum += c;
            if r > top && c != 0 {
                return false;
            }
            if r <= top && cum as i128 != binom_nonneg(n, r as i64) {
                return false;
            }
        }
        let total_ok = self.size as i128 == binom_nonneg(n, top as i64);
        let reaches_top = self.descent_hist.len() > top || top == 0;
        total_ok && reaches_top
    }
}

/// Closed form `q^{ceil(d/2)} binom(g-m', floor(d/2)) + sum_{j < floor(d/2)}
/// (q^{d-j} - q^{d-j-1}) binom(g-m', j)` with `d = m - m'`.
pub fn orbital_closed_form(g: usize, m: usize, mp: usize, q: i128) -> i128 {
    let d = (m - mp) as u32;
    let n = (g - mp) as i64;
    let half = d / 2;
    let mut acc = q.pow(d.div_ceil(2)) * binom_nonneg(n, half as i64);
    for j in 0..half {
        acc += (q.pow(d - j) - q.pow(d - j - 1)) * binom_nonneg(n, j as i64);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_permutation_count() {
        assert_eq!(signed_permutations(3).len(), 48);
        assert_eq!(permutations(4).len(), 24);
    }

    #[test]
    fn xi_for_g3_m2_has_three_members() {
        let all = signed_permutations(3);
        let xi = xi_members(&all, 3, 2, 0);
        assert_eq!(xi.len(), 3);
        let s = summarize(&xi, 3, 2, 0);
        assert!(s.members_in_sg && s.path_distribution_holds());
        assert_eq!(s.descent_sum(3), orbital_closed_form(3, 2, 0, 3));
    }

    #[test]
    fn identity_always_belongs() {
        for g in 1..5 {
            for m in 0..=g {
                for mp in 0..=m {
                    let pairs = constrained_pairs(g, m);
                    assert!(satisfies_cond(&SignedPerm::identity(g), &pairs, mp));
                }
            }
        }
    }

    #[test]
    fn closed_form_small_values() {
        assert_eq!(orbital_closed_form(1, 1, 0, 3), 3);
        assert_eq!(orbital_closed_form(1, 1, 1, 3), 1);
        assert_eq!(orbital_closed_form(2, 2, 0, 3), 3 * 2 + (9 - 3));
    }
}
