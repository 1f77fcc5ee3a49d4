//! Dense univariate polynomials over a [`Field`].
//!
//! A [`Poly`] stores its coefficients low degree first with no trailing
//! zeros; the zero polynomial is the empty vector. Arithmetic takes the
//! field explicitly.

use super::field::{Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly(Vec<Elem>);

impl Poly {
    pub fn new(mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn one() -> Poly {
        Poly(vec![1])
    }

    pub fn constant(c: Elem) -> Poly {
        Poly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Poly {
        Poly(vec![0, 1])
    }

    /// `x - a`.
    pub fn linear(f: &Field, a: Elem) -> Poly {
        Poly(vec![f.neg(a), 1])
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Elem {
        self.0.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn add(&self, f: &Field, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new(
            (0..n)
                .map(|i| f.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, f: &Field, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new(
            (0..n)
                .map(|i| f.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn scale(&self, f: &Field, c: Elem) -> Poly {
        Poly::new(self.0.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &Field, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder; `None` when dividing by zero.
    pub fn divrem(&self, f: &Field, d: &Poly) -> Option<(Poly, Poly)> {
        let dd = d.degree()?;
        let inv_lead = f.inv(d.lead())?;
        let mut r = self.0.clone();
        if r.len() <= dd {
            return Some((Poly::zero(), self.clone()));
        }
        let mut q = vec![0; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(r[i], inv_lead);
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            for (j, &b) in d.0.iter().enumerate() {
                r[i - dd + j] = f.sub(r[i - dd + j], f.mul(c, b));
            }
        }
        r.truncate(dd);
        Some((Poly::new(q), Poly::new(r)))
    }

    pub fn rem(&self, f: &Field, d: &Poly) -> Option<Poly> {
        self.divrem(f, d).map(|(_, r)| r)
    }

    pub fn monic(&self, f: &Field) -> Poly {
        match f.inv(self.lead()) {
            Some(c) => self.scale(f, c),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, f: &Field, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn derivative(&self, f: &Field) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
                .collect(),
        )
    }

    /// Horner evaluation in the same field.
    pub fn eval(&self, f: &Field, x: Elem) -> Elem {
        self.0
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self^e mod m`.
    pub fn powmod(&self, f: &Field, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(f, m).expect("nonzero modulus");
        let mut acc = Poly::one().rem(f, m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, m).expect("nonzero modulus");
            }
            base = base.mul(f, &base).rem(f, m).expect("nonzero modulus");
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, f: &Field, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(f, self))
    }

    /// Substitute `x -> x^p`-inverse: when every exponent is divisible by `p`,
    /// return the `p`-th root.
    pub(crate) fn pth_root(&self, f: &Field) -> Poly {
        let p = f.characteristic() as usize;
        // a^(q/p) inverts Frobenius on F_q.
        let root_exp = (f.order() / f.characteristic()) as u64;
        Poly::new(
            self.0
                .iter()
                .step_by(p)
                .map(|&c| f.pow(c, root_exp))
                .collect(),
        )
    }

    /// Iterate all monic polynomials of exact degree `n` in code order.
    pub fn monics(f: &Field, n: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = f.order() as u64;
        let count = q.pow(n as u32);
        (0..count).map(move |mut code| {
            let mut c: Vec<Elem> = (0..n)
                .map(|_| {
                    let d = (code % q) as Elem;
                    code /= q;
                    d
                })
                .collect();
            c.push(1);
            Poly(c)
        })
    }

    /// Decimal list of coefficient codes, low degree first.
    pub fn to_list(&self) -> String {
        self.0
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_recomposes() {
        let f = Field::new(5).unwrap();
        let a = Poly::new(vec![1, 2, 3, 4, 1]);
        let b = Poly::new(vec![2, 0, 1]);
        let (q, r) = a.divrem(&f, &b).unwrap();
        assert_eq!(q.mul(&f, &b).add(&f, &r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gcd_of_products() {
        let f = Field::new(7).unwrap();
        let a = Poly::linear(&f, 2).mul(&f, &Poly::linear(&f, 3));
        let b = Poly::linear(&f, 3).mul(&f, &Poly::linear(&f, 5));
        assert_eq!(a.gcd(&f, &b), Poly::linear(&f, 3));
    }

    #[test]
    fn pth_root_undoes_frobenius() {
        let f = Field::new(9).unwrap();
        let a = Poly::new(vec![4, 0, 7, 1]);
        let ap = a.pow(&f, 3);
        assert_eq!(ap.pth_root(&f), a);
    }
}
