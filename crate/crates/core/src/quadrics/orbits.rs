//! Rational orbit representatives in a stable orbit of self-adjoint
//! operators with a given squarefree characteristic polynomial.
//!
//! With `L = k[x]/p`, an operator with characteristic polynomial `p` makes
//! `V` free of rank one over `L`, and the split form becomes
//! `<u, v>_δ = coefficient of x^{n-1} in δuv` for some `δ ∈ L^×`, well
//! defined modulo squares. Classes `δ` whose form is isometric to the split
//! form give the `O(V)`-orbits; when every factor of `p` has even degree an
//! `O(V)`-orbit splits into two `SO(V)`-orbits.

use std::collections::HashSet;

use serde::Serialize;

use super::forms::{is_self_adjoint_split, split_basis, split_gram};
use super::QuadricsError;
use crate::algebra::linalg::Mat;
use crate::algebra::{factor, Elem, Field, Poly};

/// One representative of an `SO(V)(k)`-orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRep {
    /// Bit `i` set when the class is a non-square on the `i`-th factor.
    pub delta_mask: u32,
    pub delta: Poly,
    /// Conjugated by an element of `O(V) \ SO(V)` (even dimension only).
    pub reflected: bool,
    pub matrix: Mat,
}

/// Serializable summary of a representative.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitLabel {
    pub index: usize,
    pub delta_mask: u32,
    pub delta: String,
    pub reflected: bool,
}

impl OrbitRep {
    pub fn label(&self, index: usize) -> OrbitLabel {
        OrbitLabel {
            index,
            delta_mask: self.delta_mask,
            delta: self.delta.to_list(),
            reflected: self.reflected,
        }
    }

    pub fn is_distinguished_class(&self) -> bool {
        self.delta_mask == 0 && !self.reflected
    }
}

/// Inverse of `a` modulo an irreducible `m` of degree `d`: `a^{q^d - 2}`.
fn inverse_mod_irreducible(f: &Field, a: &Poly, m: &Poly) -> Poly {
    let d = m.degree().expect("nonconstant") as u32;
    let qd = (f.order() as u128).pow(d);
    a.powmod(f, qd - 2, m)
}

/// Least element (in code order) of `k[x]/m` that is not a square.
fn least_nonsquare_mod(f: &Field, m: &Poly) -> Poly {
    let d = m.degree().expect("nonconstant");
    let qd = (f.order() as u128).pow(d as u32);
    let minus_one = Poly::constant(f.neg(1));
    let q = f.order() as u64;
    for code in 1..q.pow(d as u32) {
        let mut c = code;
        let coeffs: Vec<Elem> = (0..d)
            .map(|_| {
                let x = (c % q) as Elem;
                c /= q;
                x
            })
            .collect();
        let a = Poly::new(coeffs);
        if a.powmod(f, (qd - 1) / 2, m) == minus_one {
            return a;
        }
    }
    unreachable!("non-squares exist in odd characteristic")
}

/// Companion-style matrix of multiplication by `x` on `k[x]/p` in the
/// monomial basis.
pub fn multiplication_by_x(f: &Field, p: &Poly) -> Mat {
    let n = p.degree().expect("nonconstant");
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut mono = vec![0; j + 2];
        mono[j + 1] = 1;
        let r = Poly::new(mono).rem(f, p).expect("nonzero");
        cols.push((0..n).map(|i| r.coeff(i)).collect::<Vec<_>>());
    }
    Mat::from_cols(&cols)
}

/// Gram matrix of `<u, v>_δ` in the monomial basis.
pub fn trace_form_gram(f: &Field, p: &Poly, delta: &Poly) -> Mat {
    let n = p.degree().expect("nonconstant");
    let mut powers = Vec::with_capacity(2 * n);
    let mut cur = delta.rem(f, p).expect("nonzero");
    for _ in 0..2 * n - 1 {
        powers.push(cur.coeff(n - 1));
        cur = cur.mul(f, &Poly::x()).rem(f, p).expect("nonzero");
    }
    let mut g = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g.set(i, j, powers[i + j]);
        }
    }
    g
}

/// The factors of `p` with idempotent-based lifts of local classes.
pub struct SquareClasses {
    pub factors: Vec<Poly>,
    local_nonsquares: Vec<Poly>,
    idempotents: Vec<Poly>,
    modulus: Poly,
}

impl SquareClasses {
    pub fn new(f: &Field, p: &Poly) -> Result<SquareClasses, QuadricsError> {
        let fac = factor(f, p)?;
        if !fac.is_squarefree() || !p.is_monic() {
            return Err(QuadricsError::NotRegular);
        }
        let factors: Vec<Poly> = fac.factors.into_iter().map(|(g, _)| g).collect();
        let idempotents = factors
            .iter()
            .map(|pi| {
                let co = p.divrem(f, pi).expect("nonzero").0;
                let inv = inverse_mod_irreducible(f, &co.rem(f, pi).expect("nonzero"), pi);
                co.mul(f, &inv).rem(f, p).expect("nonzero")
            })
            .collect();
        let local_nonsquares = factors
            .iter()
            .map(|pi| least_nonsquare_mod(f, pi))
            .collect();
        Ok(SquareClasses {
            factors,
            local_nonsquares,
            idempotents,
            modulus: p.clone(),
        })
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.factors
            .iter()
            .map(|g| g.degree().unwrap_or(0))
            .collect()
    }

    /// `δ ≡ ν_i` on factors in the mask and `≡ 1` elsewhere.
    pub fn delta(&self, f: &Field, mask: u32) -> Poly {
        let mut acc = Poly::zero();
        for (i, e) in self.idempotents.iter().enumerate() {
            let local = if mask >> i & 1 == 1 {
                self.local_nonsquares[i].clone()
            } else {
                Poly::one()
            };
            acc = acc.add(f, &e.mul(f, &local));
        }
        acc.rem(f, &self.modulus).expect("nonzero")
    }

    /// Quadratic character of `Nm_{L_i/k}(δ_i)` on factor `i`, read off the
    /// mask: local non-squares have non-square norm.
    pub fn local_norm_character(&self, mask: u32, i: usize) -> i32 {
        if mask >> i & 1 == 1 {
            -1
        } else {
            1
        }
    }
}

/// Reflection swapping the two middle basis vectors (`det = -1`).
fn middle_swap(n: usize) -> Mat {
    let mut r = Mat::identity(n);
    let h = n / 2;
    r.set(h - 1, h - 1, 0);
    r.set(h, h, 0);
    r.set(h - 1, h, 1);
    r.set(h, h - 1, 1);
    r
}

/// One representative per `SO(V)(k)`-orbit with characteristic polynomial
/// `p`, ordered by class mask.
pub fn build_orbit_representatives(f: &Field, p: &Poly) -> Result<Vec<OrbitRep>, QuadricsError> {
    let n = p.degree().ok_or(QuadricsError::NotRegular)?;
    let classes = SquareClasses::new(f, p)?;
    let mx = multiplication_by_x(f, p);
    let all_even = classes.degrees().iter().all(|d| d % 2 == 0);
    let mut reps = Vec::new();
    for mask in 0..(1u32 << classes.rank()) {
        let delta = classes.delta(f, mask);
        let gram = trace_form_gram(f, p, &delta);
        let Some(s) = split_basis(f, &gram) else {
            continue;
        };
        let sinv = s.inverse(f).expect("basis");
        let t = sinv.mul(f, &mx).mul(f, &s);
        debug_assert!(is_self_adjoint_split(f, &t));
        reps.push(OrbitRep {
            delta_mask: mask,
            delta: delta.clone(),
            reflected: false,
            matrix: t.clone(),
        });
        if n % 2 == 0 && all_even {
            let r = middle_swap(n);
            reps.push(OrbitRep {
                delta_mask: mask,
                delta,
                reflected: true,
                matrix: r.mul(f, &t).mul(f, &r),
            });
        }
    }
    Ok(reps)
}

/// All self-adjoint matrices for the split form with characteristic
/// polynomial `p` (exhaustive; small `n` and `q` only).
pub fn self_adjoint_with_charpoly(f: &Field, p: &Poly) -> Vec<Mat> {
    let n = p.degree().expect("nonconstant");
    // J T symmetric: choose the symmetric matrix S = J T freely, T = J S.
    let j = split_gram(n);
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |k| (i, k))).collect();
    let q = f.order() as u64;
    let total = q.pow(slots.len() as u32);
    (0..total)
        .filter_map(|mut code| {
            let mut s = Mat::zeros(n, n);
            for &(a, b) in &slots {
                let v = (code % q) as Elem;
                code /= q;
                s.set(a, b, v);
                s.set(b, a, v);
            }
            let t = j.mul(f, &s);
            (t.charpoly(f) == *p).then_some(t)
        })
        .collect()
}

/// Number of `SO(V)(k)`-orbits among the given matrices, and the orbit index
/// of each query matrix.
pub fn orbit_partition(
    f: &Field,
    group: &[Mat],
    all: &[Mat],
    queries: &[Mat],
) -> (usize, Vec<usize>) {
    let mut orbit_of: std::collections::HashMap<Mat, usize> = Default::default();
    let mut count = 0;
    for t in all {
        if orbit_of.contains_key(t) {
            continue;
        }
        let orbit: HashSet<Mat> = group
            .iter()
            .map(|h| h.mul(f, t).mul(f, &super::forms::split_isometry_inverse(h)))
            .collect();
        for m in orbit {
            orbit_of.insert(m, count);
        }
        count += 1;
    }
    let idx = queries.iter().map(|m| orbit_of[m]).collect();
    (count, idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrics::group::{enumerate_so, MAX_GROUP_ORDER};
    use crate::quadrics::torsion::torsion_sizes;

    fn poly(f: &Field, c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| f.from_int(x)).collect())
    }

    #[test]
    fn irreducible_cubic_has_one_orbit() {
        let f = Field::new(3).unwrap();
        let reps = build_orbit_representatives(&f, &poly(&f, &[1, -1, 0, 1])).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].delta_mask, 0);
    }

    #[test]
    fn split_cubic_has_four_orbits() {
        let f = Field::new(3).unwrap();
        let p = poly(&f, &[0, -1, 0, 1]);
        let reps = build_orbit_representatives(&f, &p).unwrap();
        assert_eq!(reps.len(), 4);
        for r in &reps {
            assert!(is_self_adjoint_split(&f, &r.matrix));
            assert_eq!(r.matrix.charpoly(&f), p);
        }
    }

    #[test]
    fn representatives_match_exhaustive_orbits_in_dimension_three() {
        let f = Field::new(3).unwrap();
        let group = enumerate_so(&f, 3, MAX_GROUP_ORDER).unwrap();
        for p in Poly::monics(&f, 3) {
            if !crate::algebra::is_squarefree(&f, &p).unwrap() {
                continue;
            }
            let reps = build_orbit_representatives(&f, &p).unwrap();
            let mats: Vec<Mat> = reps.iter().map(|r| r.matrix.clone()).collect();
            let all = self_adjoint_with_charpoly(&f, &p);
            let (count, idx) = orbit_partition(&f, &group, &all, &mats);
            assert_eq!(count, reps.len(), "{p:?}");
            let distinct: HashSet<usize> = idx.iter().copied().collect();
            assert_eq!(distinct.len(), reps.len());
            let degs = SquareClasses::new(&f, &p).unwrap().degrees();
            assert_eq!(torsion_sizes(&degs).h1 as usize, reps.len());
        }
    }
}
