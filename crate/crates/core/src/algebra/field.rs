//! Finite fields `F_{p^k}` with table-driven arithmetic.
//!
//! Elements are `u32` codes: the base-`p` digits of a code are the
//! coefficients (low degree first) of the residue modulo the defining
//! polynomial. Constants `0..p` therefore coincide in every field of
//! characteristic `p`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::AlgebraError;

/// Element code inside a [`Field`].
pub type Elem = u32;

/// Largest field order for which tables are built.
pub const MAX_TABLE_ORDER: u64 = 1 << 22;

/// A finite field `F_{p^k}` with exp/log tables.
pub struct Field {
    p: u32,
    k: u32,
    order: u32,
    /// Monic defining polynomial over `F_p`, low degree first, length `k + 1`.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for `i < 2(order - 1)`.
    exp: Vec<Elem>,
    /// `log[a]` for `a != 0`; `log[0]` is unused.
    log: Vec<u32>,
    generator: Elem,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} (modulus {:?})", self.p, self.k, self.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}
impl Eq for Field {}

/// Returns `Some(p, k)` when `n = p^k` for a prime `p`.
pub fn prime_power(n: u64) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > n {
        p = n;
    }
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p as u32, k))
}

/// Digits of `x` in base `p`, exactly `k` of them.
fn digits(mut x: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Multiply two residues modulo a monic polynomial over `F_p`.
fn mulmod_fp(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + (x as u64) * (y as u64)) % p as u64;
        }
    }
    for deg in (k..2 * k).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for (i, &m) in modulus[..k].iter().enumerate() {
            let sub = c * m as u64 % p as u64;
            prod[deg - k + i] = (prod[deg - k + i] + p as u64 - sub) % p as u64;
        }
    }
    prod.truncate(k);
    prod.into_iter().map(|x| x as u32).collect()
}

/// Irreducibility over `F_p` by trial division with all monic polynomials of
/// degree at most `deg / 2`.
fn is_irreducible_fp(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if n <= 1 {
        return n == 1;
    }
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut g = digits(code as u32, p, d as u32);
            g.push(1);
            if rem_fp(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn rem_fp(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        if lead != 0 {
            for (i, &c) in g.iter().enumerate() {
                let sub = (lead as u64 * c as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
    }
    r
}

/// Least monic irreducible polynomial of degree `k` over `F_p` in the
/// lexicographic order of coefficient codes.
pub fn least_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    for code in 0..count {
        let mut f = digits(code as u32, p, k);
        f.push(1);
        if is_irreducible_fp(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    /// Build `F_{p^k}` from its order `q = p^k`.
    pub fn new(q: u64) -> Result<Arc<Field>, AlgebraError> {
        let (p, k) = prime_power(q).ok_or(AlgebraError::NotPrimePower(q))?;
        Self::with_degree(p, k)
    }

    /// Shared instance of `F_q`, built once per order.
    pub fn cached(q: u64) -> Result<Arc<Field>, AlgebraError> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Field>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(f) = cache.lock().expect("field cache").get(&q) {
            return Ok(f.clone());
        }
        let f = Field::new(q)?;
        cache.lock().expect("field cache").insert(q, f.clone());
        Ok(f)
    }

    /// Build `F_{p^k}` as `F_p[x]/(f)` with `f` the least irreducible.
    pub fn with_degree(p: u32, k: u32) -> Result<Arc<Field>, AlgebraError> {
        if prime_power(p as u64) != Some((p, 1)) {
            return Err(AlgebraError::NotPrimePower(p as u64));
        }
        let order = (p as u64)
            .checked_pow(k)
            .filter(|&o| o <= MAX_TABLE_ORDER)
            .ok_or(AlgebraError::FieldTooLarge { p, k })?;
        let order = order as u32;
        let modulus = least_irreducible(p, k);
        let n1 = order - 1;
        // Smallest code whose multiplicative order is q - 1.
        let prime_factors = factor_small(n1);
        let mut generator = None;
        'search: for cand in 1..order {
            let c = digits(cand, p, k);
            for &r in &prime_factors {
                let e = n1 / r;
                if pow_residue(&c, e, &modulus, p) == one_residue(k) {
                    continue 'search;
                }
            }
            generator = Some(cand);
            break;
        }
        let generator = generator.unwrap_or(1);
        let g = digits(generator, p, k);
        let mut exp = vec![0u32; 2 * n1 as usize];
        let mut log = vec![0u32; order as usize];
        let mut cur = one_residue(k);
        for i in 0..n1 {
            let code = undigits(&cur, p);
            exp[i as usize] = code;
            exp[(i + n1) as usize] = code;
            log[code as usize] = i;
            cur = mulmod_fp(&cur, &g, &modulus, p);
        }
        Ok(Arc::new(Field {
            p,
            k,
            order,
            modulus,
            exp,
            log,
            generator,
        }))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Generator of the multiplicative group used for the log tables.
    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order
    }

    /// Image of an integer under `Z -> F_p`.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as Elem
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else {
            let (mut a, mut b) = (a, b);
            let mut out = 0;
            let mut place = 1;
            while a > 0 || b > 0 {
                let d = (a % self.p + b % self.p) % self.p;
                out += d * place;
                place *= self.p;
                a /= self.p;
                b /= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.k == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else {
            let mut a = a;
            let mut out = 0;
            let mut place = 1;
            while a > 0 {
                let d = (self.p - a % self.p) % self.p;
                out += d * place;
                place *= self.p;
                a /= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| {
            let n1 = self.order - 1;
            self.exp[((n1 - self.log[a as usize]) % n1) as usize]
        })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n1 = (self.order - 1) as u64;
        let l = self.log[a as usize] as u64 * (e % n1) % n1;
        self.exp[l as usize]
    }

    /// Discrete logarithm to the table generator.
    pub fn log(&self, a: Elem) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Quadratic character `a^((q-1)/2)` as `-1, 0, 1` (odd characteristic).
    pub fn chi(&self, a: Elem) -> i32 {
        if a == 0 {
            return 0;
        }
        if self.p == 2 {
            return 1;
        }
        let r = self.pow(a, (self.order as u64 - 1) / 2);
        if r == 1 {
            1
        } else {
            -1
        }
    }

    pub fn is_square(&self, a: Elem) -> bool {
        self.chi(a) >= 0
    }

    /// Least element code that is not a square (odd characteristic).
    pub fn least_nonsquare(&self) -> Option<Elem> {
        self.elements().find(|&a| self.chi(a) == -1)
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Elem) -> Option<u32> {
        let l = self.log(a)?;
        let n1 = self.order - 1;
        Some(n1 / gcd(l, n1))
    }

    /// Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.p as u64)
    }

    /// Coefficients of the residue in `F_p`, low degree first.
    pub fn to_digits(&self, a: Elem) -> Vec<u32> {
        digits(a, self.p, self.k)
    }
}

fn one_residue(k: u32) -> Vec<u32> {
    let mut v = vec![0; k as usize];
    v[0] = 1;
    v
}

fn pow_residue(a: &[u32], mut e: u32, modulus: &[u32], p: u32) -> Vec<u32> {
    let mut base = a.to_vec();
    let mut acc = one_residue(modulus.len() as u32 - 1);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_fp(&acc, &base, modulus, p);
        }
        base = mulmod_fp(&base, &base, modulus, p);
        e >>= 1;
    }
    acc
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Distinct prime factors.
pub(crate) fn factor_small(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An embedding `F_q -> F_{q^d}` together with both fields.
#[derive(Clone, Debug)]
pub struct Extension {
    pub base: Arc<Field>,
    pub big: Arc<Field>,
    /// `map[a]` is the image of base code `a`.
    map: Vec<Elem>,
    degree: u32,
}

impl Extension {
    /// `F_{q^d}` over `base = F_q`, embedding via the least root of the base
    /// modulus.
    pub fn new(base: &Arc<Field>, d: u32) -> Result<Extension, AlgebraError> {
        let p = base.characteristic();
        let big = if d == 1 {
            base.clone()
        } else {
            Field::with_degree(p, base.degree() * d)?
        };
        let map = if d == 1 {
            base.elements().collect()
        } else {
            let m = base.modulus();
            let root = big
                .elements()
                .find(|&r| {
                    let v = m
                        .iter()
                        .rev()
                        .fold(0, |acc, &c| big.add(big.mul(acc, r), c));
                    v == 0
                })
                .ok_or(AlgebraError::NoEmbedding)?;
            let kb = base.degree();
            base.elements()
                .map(|a| {
                    let ds = base.to_digits(a);
                    let mut acc = 0;
                    for i in (0..kb as usize).rev() {
                        acc = big.add(big.mul(acc, root), ds[i]);
                    }
                    acc
                })
                .collect()
        };
        Ok(Extension {
            base: base.clone(),
            big,
            map,
            degree: d,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Shared `F_{q^d}` over the cached `F_q`.
    pub fn cached(q: u64, d: u32) -> Result<Extension, AlgebraError> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Extension>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(e) = cache.lock().expect("extension cache").get(&(q, d)) {
            return Ok(e.clone());
        }
        let e = Extension::new(&Field::cached(q)?, d)?;
        cache
            .lock()
            .expect("extension cache")
            .insert((q, d), e.clone());
        Ok(e)
    }

    #[inline]
    pub fn embed(&self, a: Elem) -> Elem {
        self.map[a as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn f25_generator_has_order_24() {
        let f = Field::new(25).unwrap();
        assert_eq!(f.mult_order(f.generator()), Some(24));
        let count = f
            .elements()
            .filter(|&a| f.mult_order(a) == Some(24))
            .count();
        // phi(24) generators.
        assert_eq!(count, 8);
    }

    #[test]
    fn f9_modulus_is_least_irreducible() {
        let f = Field::new(9).unwrap();
        // x^2 + 1 is the first monic irreducible quadratic over F_3.
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let base = Field::new(9).unwrap();
        let ext = Extension::new(&base, 2).unwrap();
        for a in base.elements() {
            for b in base.elements() {
                let lhs = ext.embed(base.mul(a, b));
                let rhs = ext.big.mul(ext.embed(a), ext.embed(b));
                assert_eq!(lhs, rhs);
                assert_eq!(
                    ext.embed(base.add(a, b)),
                    ext.big.add(ext.embed(a), ext.embed(b))
                );
            }
        }
    }

    #[test]
    fn squares_are_half_of_units() {
        for q in [3u64, 5, 7, 9, 25, 27] {
            let f = Field::new(q).unwrap();
            let sq = f.elements().filter(|&a| f.chi(a) == 1).count() as u64;
            assert_eq!(sq, (q - 1) / 2);
        }
    }
}
