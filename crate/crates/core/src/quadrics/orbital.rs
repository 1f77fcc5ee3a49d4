//! The finite orbital sum realizing the test-function integral, by
//! enumerating `SO(V)(k)` and testing `Ad(h) T ∈ N_m + g(1)_{>= -1}`.
//!
//! Odd case only, `dim V = 2g + 1`. The grading is the one attached to
//! `N_m`: `V = ⊕ V_j` for `-g <= j <= g`, `V_j = k e_{g+1-j}`, with weight
//! `2j - m` for `j >= m`, `j` for `|j| <= m` and `2j + m` for `j <= -m`.

use rayon::prelude::*;

use serde::Serialize;

use super::forms::{split_isometry_inverse, CornerSign};
use super::group::{cached_so, MAX_GROUP_ORDER};
use super::QuadricsError;
use crate::algebra::{Elem, Field, Mat};

/// Basis position of `V_j`.
fn position(g: usize, j: i64) -> usize {
    (g as i64 - j) as usize
}

/// Weights of `e_1, ..., e_{2g+1}` under the grading attached to `N_m`.
pub fn weights(g: usize, m: usize) -> Vec<i64> {
    let (g, m) = (g as i64, m as i64);
    (0..=2 * g)
        .map(|pos| {
            let j = g - pos;
            if j >= m {
                2 * j - m
            } else if j <= -m {
                2 * j + m
            } else {
                j
            }
        })
        .collect()
}

/// The two rational orbits of two-block nilpotents, told apart by the class
/// of `<v, N^{λ-1} v>` on the even Jordan block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NilpotentFamily {
    /// Class `-1`; pairs with the pencil sign [`CornerSign::Matched`].
    Primary,
    /// Class `-ε`; pairs with [`CornerSign::Twisted`].
    Companion,
}

impl NilpotentFamily {
    pub fn middle_entry(self, f: &Field) -> Elem {
        match self {
            NilpotentFamily::Primary => f.neg(1),
            NilpotentFamily::Companion => f.neg(f.least_nonsquare().expect("odd characteristic")),
        }
    }

    pub fn corner_sign(self) -> CornerSign {
        match self {
            NilpotentFamily::Primary => CornerSign::Matched,
            NilpotentFamily::Companion => CornerSign::Twisted,
        }
    }
}

/// Self-adjoint nilpotent with Jordan blocks `2g + 1 - m` and `m`, of weight
/// `-2` for [`weights`]. Edges inside `V_{m-1} ⊕ ... ⊕ V_{-m+1}` and into
/// `V_{-m}` carry `middle`, the others `1`.
pub fn nilpotent(
    f: &Field,
    g: usize,
    m: usize,
    family: NilpotentFamily,
) -> Result<Mat, QuadricsError> {
    if m > g {
        return Err(QuadricsError::BadIndex { m, g });
    }
    let n = 2 * g + 1;
    let (gi, mi) = (g as i64, m as i64);
    let mut nm = Mat::zeros(n, n);
    let middle = family.middle_entry(f);
    let mut edge = |from: i64, to: i64, c| nm.set(position(g, to), position(g, from), c);
    for i in (-gi + 1)..=gi {
        if i > mi || i <= -mi {
            edge(i, i - 1, 1);
        }
    }
    for i in (-mi + 1)..mi {
        edge(i + 1, i - 1, middle);
    }
    Ok(nm)
}

/// `X ∈ N + g(1)_{>= -1}`: entries of weight `<= -2` agree with `N`.
pub fn in_coset(x: &Mat, nm: &Mat, w: &[i64]) -> bool {
    let n = x.rows();
    (0..n).all(|a| (0..n).all(|b| w[a] - w[b] > -2 || x.get(a, b) == nm.get(a, b)))
}

/// `#{h ∈ SO(V)(k) : Ad(h) T ∈ N_m + g(1)_{>= -1}}`.
pub fn orbital_count(
    f: &Field,
    t: &Mat,
    m: usize,
    family: NilpotentFamily,
) -> Result<u64, QuadricsError> {
    let n = t.rows();
    let g = (n - 1) / 2;
    let nm = nilpotent(f, g, m, family)?;
    let w = weights(g, m);
    let group = cached_so(f, n, MAX_GROUP_ORDER)?;
    Ok(group
        .par_iter()
        .filter(|h| in_coset(&h.mul(f, t).mul(f, &split_isometry_inverse(h)), &nm, &w))
        .count() as u64)
}

/// `#U(0)(k) = q^{g^2}`, the unipotent radical of the Borel of `SO(V)`.
pub fn unipotent_order(g: usize, q: u32) -> u64 {
    (q as u64).pow((g * g) as u32)
}

/// `#F_{T,m}(k)` recovered from the orbital count.
pub fn exact_flags_from_group(
    f: &Field,
    t: &Mat,
    m: usize,
    family: NilpotentFamily,
) -> Result<u64, QuadricsError> {
    let g = (t.rows() - 1) / 2;
    let count = orbital_count(f, t, m, family)?;
    let u = unipotent_order(g, f.order());
    debug_assert_eq!(count % u, 0);
    Ok(count / u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Poly;
    use crate::quadrics::forms::{is_self_adjoint_split, split_gram};
    use crate::quadrics::orbits::build_orbit_representatives;

    fn poly(f: &Field, c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| f.from_int(x)).collect())
    }

    #[test]
    fn nilpotents_are_self_adjoint_of_weight_minus_two() {
        let f = Field::new(5).unwrap();
        for g in 1..=3 {
            for m in 0..=g {
                for family in [NilpotentFamily::Primary, NilpotentFamily::Companion] {
                    let nm = nilpotent(&f, g, m, family).unwrap();
                    assert!(is_self_adjoint_split(&f, &nm));
                    let w = weights(g, m);
                    let n = 2 * g + 1;
                    for a in 0..n {
                        for b in 0..n {
                            if nm.get(a, b) != 0 {
                                assert_eq!(w[a] - w[b], -2);
                            }
                        }
                    }
                    let mut sorted_w = w.clone();
                    sorted_w.sort();
                    assert!(sorted_w
                        .iter()
                        .zip(sorted_w.iter().rev())
                        .all(|(a, b)| a == &-b));
                    let rank = nm.rank(&f);
                    assert_eq!(rank, if m == 0 { 2 * g } else { 2 * g - 1 });
                    assert_eq!(split_gram(n).rows(), n);
                }
            }
        }
    }

    #[test]
    fn running_cubic_orbital_counts() {
        let f = Field::new(3).unwrap();
        let reps = build_orbit_representatives(&f, &poly(&f, &[1, -1, 0, 1])).unwrap();
        let t = &reps[0].matrix;
        let primary = NilpotentFamily::Primary;
        assert_eq!(orbital_count(&f, t, 0, primary).unwrap(), 3);
        assert_eq!(orbital_count(&f, t, 1, primary).unwrap(), 18);
        assert_eq!(exact_flags_from_group(&f, t, 1, primary).unwrap(), 6);
        assert_eq!(
            exact_flags_from_group(&f, t, 1, NilpotentFamily::Companion).unwrap(),
            0
        );
    }

    #[test]
    fn group_route_matches_flag_route_on_cubics() {
        use crate::quadrics::flags::odd_census;
        for q in [3, 5] {
            let f = Field::new(q).unwrap();
            for p in Poly::monics(&f, 3) {
                if !crate::algebra::is_squarefree(&f, &p).unwrap() {
                    continue;
                }
                for r in build_orbit_representatives(&f, &p).unwrap() {
                    for family in [NilpotentFamily::Primary, NilpotentFamily::Companion] {
                        let census = odd_census(&f, &r.matrix, family.corner_sign()).unwrap();
                        for m in 0..=1 {
                            let from_group =
                                exact_flags_from_group(&f, &r.matrix, m, family).unwrap();
                            assert_eq!(
                                from_group as usize, census.exact[m],
                                "{p:?} {family:?} {m}"
                            );
                        }
                    }
                }
            }
        }
    }
}
