//! Catalan polynomials `C_l(x) = x/((x+2l) l!) prod_{i=1}^{l} (x+l+i)`,
//! their identities, and the unipotent triangular matrices over `Q[x, q]`
//! that they invert.
//!
//! Matrices are lower triangular with entries in `Q[x, q]`, stored as
//! [`Poly2`] with the first variable `x` and the second variable `q`.

use num_traits::{One, Zero};

use crate::algebra::rational::{q_int, Poly2, RatPoly, Series, Q};

/// `C_l(x)` as the product `x prod_{i=1}^{l-1} (x+l+i) / l!`, with `C_0 = 1`.
pub fn catalan_poly(l: usize) -> RatPoly {
    if l == 0 {
        return RatPoly::one();
    }
    let mut p = RatPoly::from_ints(&[0, 1]);
    let mut fact = Q::one();
    for i in 1..l {
        p = &p * &RatPoly::x_plus(q_int((l + i) as i64));
    }
    for i in 1..=l {
        fact *= q_int(i as i64);
    }
    p.scale(&(Q::one() / fact))
}

/// `C_l(x)` from the defining quotient, dividing `x prod_{i=1}^{l}(x+l+i)`
/// by `(x + 2l) l!`. `None` if the division is not exact.
pub fn catalan_poly_by_quotient(l: usize) -> Option<RatPoly> {
    let mut num = RatPoly::from_ints(&[0, 1]);
    for i in 1..=l {
        num = &num * &RatPoly::x_plus(q_int((l + i) as i64));
    }
    let den = RatPoly::x_plus(q_int(2 * l as i64));
    let fact: Q = (1..=l as i64).map(q_int).fold(Q::one(), |a, b| a * b);
    num.div_exact(&den).map(|p| p.scale(&(Q::one() / fact)))
}

/// Values `C_l(1)` for `l < n`.
pub fn catalan_numbers(n: usize) -> Vec<Q> {
    (0..n).map(|l| catalan_poly(l).eval(&Q::one())).collect()
}

/// `C_l(x + 1) - C_l(x) = C_{l-1}(x + 2)` coefficientwise, for `1 <= l <= lmax`.
pub fn recurrence_failures(lmax: usize) -> Vec<usize> {
    (1..=lmax)
        .filter(|&l| {
            let c = catalan_poly(l);
            let lhs = &c.shift(&Q::one()) - &c;
            lhs != catalan_poly(l - 1).shift(&q_int(2))
        })
        .collect()
}

/// The series `(1 - sqrt(1 - 4t)) / (2t)` modulo `t^len`.
pub fn catalan_series(len: usize) -> Series {
    let inner = Series::new(vec![Q::one(), q_int(-4)], len + 1);
    let root = inner.sqrt().expect("constant term 1");
    // (1 - root) / (2t): drop the vanishing constant term and halve.
    let c: Vec<Q> = root.coeffs()[1..].iter().map(|a| -a / q_int(2)).collect();
    Series::new(c, len)
}

/// Pairs `(x, l)` where the coefficient of `t^l` in the `x`-th power of the
/// Catalan series differs from `C_l(x)`.
pub fn generating_function_failures(xs: &[i64], order: usize) -> Vec<(i64, usize)> {
    let s = catalan_series(order + 1);
    let mut bad = Vec::new();
    for &x in xs {
        let pw = s.pow(x).expect("invertible series");
        for l in 0..=order {
            if pw.coeffs()[l] != catalan_poly(l).eval(&q_int(x)) {
                bad.push((x, l));
            }
        }
    }
    bad
}

/// `C_l(x + y) = sum_i C_{l-i}(x) C_i(y)` in `Q[x, y]`, for `l <= lmax`.
pub fn convolution_failures(lmax: usize) -> Vec<usize> {
    let polys: Vec<RatPoly> = (0..=lmax).map(catalan_poly).collect();
    let in_y: Vec<Poly2> = polys
        .iter()
        .map(|p| p.compose_linear2(&Q::zero(), &Q::one(), &Q::zero()))
        .collect();
    (0..=lmax)
        .filter(|&l| {
            let lhs = polys[l].compose_linear2(&Q::one(), &Q::one(), &Q::zero());
            let rhs = (0..=l).fold(Poly2::zero(), |acc, i| {
                &acc + &(&polys[l - i].in_x() * &in_y[i])
            });
            lhs != rhs
        })
        .collect()
}

/// Square matrix over `Q[x, q]`.
pub type PolyMatrix = Vec<Vec<Poly2>>;

pub fn identity(size: usize) -> PolyMatrix {
    (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    if i == j {
                        Poly2::constant(Q::one())
                    } else {
                        Poly2::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(Poly2::zero(), |acc, k| {
                        if a[i][k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            &acc + &(&a[i][k] * &b[k][j])
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// `binom(x - j, l)` as a polynomial in `x`.
fn binom_shifted(j: usize, l: usize) -> RatPoly {
    let mut p = RatPoly::one();
    let mut fact = Q::one();
    for i in 0..l {
        p = &p * &RatPoly::x_plus(q_int(-((j + i) as i64)));
        fact *= q_int(i as i64 + 1);
    }
    p.scale(&(Q::one() / fact))
}

/// `C_l(-x + c)` as a polynomial in `x`.
fn catalan_reflected(l: usize, c: i64) -> RatPoly {
    catalan_poly(l).shift(&q_int(c)).reflect()
}

/// Entry `(i, j)` equal to `q^l poly(l, j)` when `i = j + 2l`.
fn even_band(size: usize, entry: impl Fn(usize, usize) -> RatPoly) -> PolyMatrix {
    let mut m: PolyMatrix = vec![vec![Poly2::zero(); size]; size];
    for j in 0..size {
        let mut l = 0;
        while j + 2 * l < size {
            m[j + 2 * l][j] = &entry(l, j).in_x() * &Poly2::y_pow(l, Q::one());
            l += 1;
        }
    }
    m
}

/// `A_{ij} = q^l binom(x - j, l)` for `i = j + 2l`.
pub fn matrix_a(size: usize) -> PolyMatrix {
    even_band(size, |l, j| binom_shifted(j, l))
}

/// `A^{-1}_{ij} = q^l C_l(-x + j)` for `i = j + 2l`.
pub fn matrix_a_inverse(size: usize) -> PolyMatrix {
    even_band(size, |l, j| catalan_reflected(l, j as i64))
}

fn banded(size: usize, bands: &[(usize, Poly2)]) -> PolyMatrix {
    let mut m: PolyMatrix = vec![vec![Poly2::zero(); size]; size];
    for (off, val) in bands {
        for j in 0..size {
            if j + off < size {
                m[j + off][j] = val.clone();
            }
        }
    }
    m
}

fn q_poly(c: &[i64]) -> Poly2 {
    c.iter().enumerate().fold(Poly2::zero(), |acc, (k, &v)| {
        &acc + &Poly2::y_pow(k, q_int(v))
    })
}

/// `1` on the diagonal, `-1` below it.
pub fn matrix_b1(size: usize) -> PolyMatrix {
    banded(size, &[(0, q_poly(&[1])), (1, q_poly(&[-1]))])
}

/// `1` on the diagonal, `-q` two below it.
pub fn matrix_b2(size: usize) -> PolyMatrix {
    banded(size, &[(0, q_poly(&[1])), (2, q_poly(&[0, -1]))])
}

/// `q^{i-j}` for `i >= j`.
pub fn matrix_b3(size: usize) -> PolyMatrix {
    let bands: Vec<(usize, Poly2)> = (0..size).map(|k| (k, Poly2::y_pow(k, Q::one()))).collect();
    banded(size, &bands)
}

/// `1`, `-(q+1)`, `q` on the diagonal and the two bands below.
pub fn matrix_b4(size: usize) -> PolyMatrix {
    banded(
        size,
        &[
            (0, q_poly(&[1])),
            (1, q_poly(&[-1, -1])),
            (2, q_poly(&[0, 1])),
        ],
    )
}

/// Expected entries of `A^{-1} B4`: `q^l C_l(-x+j+1)` at `i = j + 2l` and
/// `-(q+1) q^l C_l(-x+j+1)` at `i = j + 2l + 1`.
pub fn composite_closed_form(size: usize) -> PolyMatrix {
    let mut m: PolyMatrix = vec![vec![Poly2::zero(); size]; size];
    let qp1 = q_poly(&[-1, -1]);
    for j in 0..size {
        for l in 0..size {
            let base = &catalan_reflected(l, j as i64 + 1).in_x() * &Poly2::y_pow(l, Q::one());
            if j + 2 * l < size {
                m[j + 2 * l][j] = base.clone();
            }
            if j + 2 * l + 1 < size {
                m[j + 2 * l + 1][j] = &qp1 * &base;
            }
        }
    }
    m
}

/// Evaluate `B3 B2 A` at `x = g` as integer polynomials in `q`.
pub fn lower_matrix_at(size: usize, g: i64) -> Vec<Vec<RatPoly>> {
    let m = mat_mul(
        &mat_mul(&matrix_b3(size), &matrix_b2(size)),
        &matrix_a(size),
    );
    m.iter()
        .map(|row| row.iter().map(|e| e.eval_x(&q_int(g))).collect())
        .collect()
}

/// Outcome of the matrix identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixChecks {
    pub inverse_pair: bool,
    pub b_commute: bool,
    pub b4_factorization: bool,
    pub composite: bool,
}

pub fn matrix_checks(size: usize) -> MatrixChecks {
    let a = matrix_a(size);
    let ainv = matrix_a_inverse(size);
    let id = identity(size);
    let (b1, b2, b3, b4) = (
        matrix_b1(size),
        matrix_b2(size),
        matrix_b3(size),
        matrix_b4(size),
    );
    let inverse_pair = mat_mul(&a, &ainv) == id && mat_mul(&ainv, &a) == id;
    let commute = |x: &PolyMatrix, y: &PolyMatrix| mat_mul(x, y) == mat_mul(y, x);
    let b_commute = commute(&b1, &b2) && commute(&b1, &b3) && commute(&b2, &b3);
    let b4_factorization = mat_mul(&b3, &b4) == b1;
    let composite = mat_mul(&ainv, &b4) == composite_closed_form(size);
    MatrixChecks {
        inverse_pair,
        b_commute,
        b4_factorization,
        composite,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let vals: Vec<Q> = catalan_numbers(5);
        assert_eq!(vals, [1, 1, 2, 5, 14].map(q_int).to_vec());
        assert_eq!(catalan_poly(1), RatPoly::from_ints(&[0, 1]));
        assert_eq!(
            catalan_poly(2),
            RatPoly::new(vec![Q::zero(), q_int(3) / q_int(2), Q::one() / q_int(2)])
        );
    }

    #[test]
    fn product_form_matches_quotient() {
        for l in 0..10 {
            assert_eq!(catalan_poly_by_quotient(l), Some(catalan_poly(l)));
        }
    }

    #[test]
    fn small_matrix_identities() {
        let c = matrix_checks(6);
        assert_eq!(
            c,
            MatrixChecks {
                inverse_pair: true,
                b_commute: true,
                b4_factorization: true,
                composite: true
            }
        );
    }
}
