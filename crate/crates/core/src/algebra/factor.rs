//! Factorization over finite fields: squarefree decomposition, then
//! distinct-degree and equal-degree splitting (Cantor–Zassenhaus).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{Elem, Field};
use super::poly::Poly;
use super::AlgebraError;

/// Complete factorization `unit * prod factor^mult` with monic irreducible
/// factors sorted by degree, then coefficient codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Elem,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, m)| m == 1)
    }

    /// Degrees of the irreducible factors, with multiplicity, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|(p, m)| std::iter::repeat_n(p.degree().unwrap_or(0), *m as usize))
            .collect();
        ds.sort_unstable();
        ds
    }

    pub fn recompose(&self, f: &Field) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.unit), |acc, (p, m)| {
                acc.mul(f, &p.pow(f, *m))
            })
    }
}

/// Squarefree decomposition of a monic polynomial: pairs `(g_i, i)` with
/// `f = prod g_i^i`, each `g_i` squarefree and the `g_i` pairwise coprime.
fn squarefree_parts(f: &Field, a: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if a.degree().unwrap_or(0) == 0 {
        return out;
    }
    let da = a.derivative(f);
    let mut c = a.gcd(f, &da);
    let mut w = a.divrem(f, &c).expect("nonzero").0;
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(f, &c);
        let fac = w.divrem(f, &y).expect("nonzero").0;
        if fac.degree().unwrap_or(0) > 0 {
            out.push((fac, i));
        }
        c = c.divrem(f, &y).expect("nonzero").0;
        w = y;
        i += 1;
    }
    if c.degree().unwrap_or(0) > 0 {
        let root = c.pth_root(f);
        let p = f.characteristic();
        for (g, m) in squarefree_parts(f, &root) {
            out.push((g, m * p));
        }
    }
    out
}

/// Distinct-degree factorization of a squarefree monic polynomial.
fn distinct_degree(f: &Field, a: &Poly) -> Vec<(Poly, usize)> {
    let q = f.order() as u128;
    let mut out = Vec::new();
    let mut rest = a.clone();
    let mut h = Poly::x();
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(f, q, &rest);
        let g = h.sub(f, &Poly::x()).gcd(f, &rest);
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.divrem(f, &g).expect("nonzero").0;
            h = h.rem(f, &rest).expect("nonzero");
            out.push((g, d));
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        let dr = rest.degree().unwrap();
        out.push((rest, dr));
    }
    out
}

/// Split a product of distinct irreducibles of degree `d`.
fn equal_degree(f: &Field, a: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = a.degree().unwrap_or(0);
    if n == d {
        return vec![a.clone()];
    }
    let q = f.order() as u128;
    let qd = q.pow(d as u32);
    loop {
        let r = Poly::new((0..n).map(|_| rng.gen_range(0..f.order())).collect());
        if r.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if f.characteristic() == 2 {
            // Trace map to F_2: sum of r^(2^i), i < k d.
            let kd = f.degree() as usize * d;
            let mut t = r.rem(f, a).expect("nonzero");
            let mut acc = t.clone();
            for _ in 1..kd {
                t = t.mul(f, &t).rem(f, a).expect("nonzero");
                acc = acc.add(f, &t);
            }
            acc
        } else {
            r.powmod(f, (qd - 1) / 2, a).sub(f, &Poly::one())
        };
        let g = b.gcd(f, a);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = a.divrem(f, &g).expect("nonzero").0;
            let mut out = equal_degree(f, &g, d, rng);
            out.extend(equal_degree(f, &h, d, rng));
            return out;
        }
    }
}

/// Factor a nonzero polynomial into monic irreducibles.
pub fn factor(f: &Field, a: &Poly) -> Result<Factorization, AlgebraError> {
    if a.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let unit = a.lead();
    let m = a.monic(f);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let mut factors = Vec::new();
    for (part, mult) in squarefree_parts(f, &m) {
        for (block, d) in distinct_degree(f, &part) {
            for irr in equal_degree(f, &block, d, &mut rng) {
                factors.push((irr, mult));
            }
        }
    }
    factors.sort_by(|(p, _), (r, _)| (p.degree(), p.coeffs()).cmp(&(r.degree(), r.coeffs())));
    Ok(Factorization { unit, factors })
}

pub fn is_squarefree(f: &Field, a: &Poly) -> Result<bool, AlgebraError> {
    if a.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    Ok(a.gcd(f, &a.derivative(f)).degree() == Some(0))
}

pub fn is_irreducible(f: &Field, a: &Poly) -> Result<bool, AlgebraError> {
    let fac = factor(f, a)?;
    Ok(fac.factors.len() == 1 && fac.factors[0].1 == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(f: &Field, c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| f.from_int(x)).collect())
    }

    #[test]
    fn cubic_over_f3_splits() {
        let f = Field::new(3).unwrap();
        let fac = factor(&f, &p(&f, &[0, -1, 0, 1])).unwrap();
        let lin: Vec<Poly> = fac.factors.iter().map(|(g, _)| g.clone()).collect();
        assert_eq!(lin, vec![p(&f, &[0, 1]), p(&f, &[1, 1]), p(&f, &[2, 1])]);
        assert!(fac.is_squarefree());
    }

    #[test]
    fn artin_schreier_cubic_is_irreducible() {
        let f = Field::new(3).unwrap();
        assert!(is_irreducible(&f, &p(&f, &[1, -1, 0, 1])).unwrap());
    }

    #[test]
    fn x2_plus_1_over_f5() {
        let f = Field::new(5).unwrap();
        let fac = factor(&f, &p(&f, &[1, 0, 1])).unwrap();
        assert_eq!(fac.factors, vec![(p(&f, &[2, 1]), 1), (p(&f, &[3, 1]), 1)]);
    }

    #[test]
    fn zero_polynomial_rejected() {
        let f = Field::new(3).unwrap();
        assert_eq!(factor(&f, &Poly::zero()), Err(AlgebraError::ZeroPolynomial));
    }

    #[test]
    fn repeated_and_inseparable_factors() {
        let f = Field::new(3).unwrap();
        // (x + 1)^3 (x^2 + 1)^2 x
        let a = p(&f, &[1, 1])
            .pow(&f, 3)
            .mul(&f, &p(&f, &[1, 0, 1]).pow(&f, 2))
            .mul(&f, &p(&f, &[0, 1]));
        let fac = factor(&f, &a).unwrap();
        assert_eq!(fac.recompose(&f), a);
        assert_eq!(fac.degrees(), vec![1, 1, 1, 1, 2, 2]);
        assert!(!fac.is_squarefree());
    }
}
