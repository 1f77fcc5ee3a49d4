//! Exact rational arithmetic: polynomials in one variable, polynomials in two
//! variables, and truncated power series, all over `Q`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Render as `"num/den"`, or `"num"` for integers.
pub fn q_render(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Integer value of an exact rational, when it is an integer fitting `i128`.
pub fn q_to_i128(x: &Q) -> Option<i128> {
    if !x.denom().is_one() {
        return None;
    }
    i128::try_from(x.numer().clone()).ok()
}

/// Polynomial in `x` with rational coefficients, low degree first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly(Vec<Q>);

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(q_render).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl RatPoly {
    pub fn new(mut c: Vec<Q>) -> RatPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        RatPoly(c)
    }

    pub fn from_ints(c: &[i64]) -> RatPoly {
        RatPoly::new(c.iter().map(|&x| q_int(x)).collect())
    }

    pub fn zero() -> RatPoly {
        RatPoly(Vec::new())
    }

    pub fn one() -> RatPoly {
        RatPoly(vec![Q::one()])
    }

    pub fn constant(c: Q) -> RatPoly {
        RatPoly::new(vec![c])
    }

    /// `x + c`.
    pub fn x_plus(c: Q) -> RatPoly {
        RatPoly::new(vec![c, Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.0.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, c: &Q) -> RatPoly {
        RatPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    /// `p(x + c)`.
    pub fn shift(&self, c: &Q) -> RatPoly {
        let lin = RatPoly::x_plus(c.clone());
        self.0.iter().rev().fold(RatPoly::zero(), |acc, a| {
            &(&acc * &lin) + &RatPoly::constant(a.clone())
        })
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> RatPoly {
        RatPoly::new(
            self.0
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Exact division; `None` when the remainder is nonzero.
    pub fn div_exact(&self, d: &RatPoly) -> Option<RatPoly> {
        let dd = d.degree()?;
        let lead = d.0[dd].clone();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return r.iter().all(|c| c.is_zero()).then(RatPoly::zero);
        }
        let mut q = vec![Q::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = &r[i] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.0.iter().enumerate() {
                r[i - dd + j] = &r[i - dd + j] - &c * b;
            }
            q[i - dd] = c;
        }
        r.iter().all(|c| c.is_zero()).then(|| RatPoly::new(q))
    }

    /// As a bivariate polynomial in the first variable.
    pub fn in_x(&self) -> Poly2 {
        let mut p = Poly2::zero();
        for (i, c) in self.0.iter().enumerate() {
            p.add_term(i, 0, c.clone());
        }
        p
    }

    /// `p(a x + b y + c)` as a bivariate polynomial.
    pub fn compose_linear2(&self, a: &Q, b: &Q, c: &Q) -> Poly2 {
        let mut lin = Poly2::zero();
        lin.add_term(1, 0, a.clone());
        lin.add_term(0, 1, b.clone());
        lin.add_term(0, 0, c.clone());
        self.0.iter().rev().fold(Poly2::zero(), |acc, k| {
            &(&acc * &lin) + &Poly2::constant(k.clone())
        })
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, o: &RatPoly) -> RatPoly {
        let n = self.0.len().max(o.0.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, o: &RatPoly) -> RatPoly {
        let n = self.0.len().max(o.0.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.0.iter().map(|c| -c).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, o: &RatPoly) -> RatPoly {
        if self.is_zero() || o.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

/// Polynomial in two variables `(x, y)` over `Q`, sparse.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2(BTreeMap<(usize, usize), Q>);

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|((i, j), c)| format!("{}*x^{}*y^{}", q_render(c), i, j))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Poly2 {
    pub fn zero() -> Poly2 {
        Poly2(BTreeMap::new())
    }

    pub fn constant(c: Q) -> Poly2 {
        let mut p = Poly2::zero();
        p.add_term(0, 0, c);
        p
    }

    /// `c * y^j`.
    pub fn y_pow(j: usize, c: Q) -> Poly2 {
        let mut p = Poly2::zero();
        p.add_term(0, j, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, i: usize, j: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry((i, j)).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &Q)> {
        self.0.iter()
    }

    /// Evaluate at rational `(x, y)`.
    pub fn eval(&self, x: &Q, y: &Q) -> Q {
        self.0.iter().fold(Q::zero(), |acc, ((i, j), c)| {
            acc + c * pow_q(x, *i) * pow_q(y, *j)
        })
    }

    /// Substitute a rational value for `x`, leaving a polynomial in `y`.
    pub fn eval_x(&self, x: &Q) -> RatPoly {
        let mut c: Vec<Q> = Vec::new();
        for ((i, j), k) in &self.0 {
            if c.len() <= *j {
                c.resize(*j + 1, Q::zero());
            }
            c[*j] += k * pow_q(x, *i);
        }
        RatPoly::new(c)
    }
}

pub fn pow_q(x: &Q, e: usize) -> Q {
    (0..e).fold(Q::one(), |acc, _| acc * x)
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, o: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(i, j), c) in &o.0 {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, o: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(i, j), c) in &o.0 {
            out.add_term(i, j, -c);
        }
        out
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, o: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i, j), a) in &self.0 {
            for (&(k, l), b) in &o.0 {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }
}

/// Truncated power series `sum c_i t^i mod t^len` over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series(Vec<Q>);

impl Series {
    pub fn new(mut c: Vec<Q>, len: usize) -> Series {
        c.resize(len, Q::zero());
        Series(c)
    }

    pub fn one(len: usize) -> Series {
        Series::new(vec![Q::one()], len)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn mul(&self, o: &Series) -> Series {
        let n = self.len();
        let mut out = vec![Q::zero(); n];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate().take(n - i) {
                out[i + j] += a * b;
            }
        }
        Series(out)
    }

    /// Multiplicative inverse; `None` when the constant term vanishes.
    pub fn inverse(&self) -> Option<Series> {
        let n = self.len();
        let c0 = self.0.first()?.clone();
        if c0.is_zero() {
            return None;
        }
        let mut inv = vec![Q::zero(); n];
        inv[0] = Q::one() / &c0;
        for k in 1..n {
            let mut s = Q::zero();
            for i in 1..=k {
                s += &self.0[i] * &inv[k - i];
            }
            inv[k] = -s / &c0;
        }
        Some(Series(inv))
    }

    /// Square root with constant term 1; `None` unless the constant term is 1.
    pub fn sqrt(&self) -> Option<Series> {
        let n = self.len();
        if self.0.first() != Some(&Q::one()) {
            return None;
        }
        let mut r = vec![Q::zero(); n];
        r[0] = Q::one();
        let two = q_int(2);
        for k in 1..n {
            let mut s = self.0[k].clone();
            for i in 1..k {
                s -= &r[i] * &r[k - i];
            }
            r[k] = s / &two;
        }
        Some(Series(r))
    }

    /// Integer power by repeated multiplication; negative exponents invert.
    pub fn pow(&self, e: i64) -> Option<Series> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Series::one(self.len());
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        Some(acc)
    }
}

/// Binomial coefficient `binom(n, k)` for integer `n` (possibly negative).
pub fn binom_q(n: i64, k: i64) -> Q {
    if k < 0 {
        return Q::zero();
    }
    let mut acc = Q::one();
    for i in 0..k {
        acc = acc * q_int(n - i) / q_int(i + 1);
    }
    acc
}

/// Nonnegative binomial coefficient as `i128`; zero when `n < k` or `n < 0`.
pub fn binom_nonneg(n: i64, k: i64) -> i128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

pub fn is_nonneg(x: &Q) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_and_divide() {
        let p = RatPoly::from_ints(&[0, 3, 1]);
        let s = p.shift(&q_int(1));
        assert_eq!(s, RatPoly::from_ints(&[4, 5, 1]));
        let d = RatPoly::from_ints(&[3, 1]);
        assert_eq!(p.div_exact(&d), Some(RatPoly::from_ints(&[0, 1])));
        assert_eq!(s.div_exact(&d), None);
    }

    #[test]
    fn series_sqrt_squares_back() {
        let s = Series::new(vec![q_int(1), q_int(-4)], 10);
        let r = s.sqrt().unwrap();
        assert_eq!(r.mul(&r), s);
    }

    #[test]
    fn binomials() {
        assert_eq!(binom_q(-1, 3), q_int(-1));
        assert_eq!(binom_q(5, 2), q_int(10));
        assert_eq!(binom_nonneg(3, 5), 0);
        assert_eq!(binom_nonneg(7, 3), 35);
    }
}
