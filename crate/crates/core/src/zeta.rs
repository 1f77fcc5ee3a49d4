//! Hyperelliptic curves `y^2 = f(x)` over `F_q`: point counts, the Weil
//! polynomial, its reparametrization `H(u)`, stable coefficients `a_m`,
//! point counts of symmetric powers, and quadratic twists.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::rational::binom_nonneg;
use crate::algebra::{is_squarefree, AlgebraError, Extension, Field, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZetaError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("polynomial must be squarefree of degree at least 1")]
    NotSquarefree,
    #[error("Newton identities produced a non-integral coefficient at degree {0}")]
    NonIntegral(usize),
    #[error("reparametrization P(T) = T^g H(1/T + qT) failed")]
    BadReparametrization,
    #[error("characteristic 2 is not supported for curve models")]
    EvenCharacteristic,
}

/// Degree parity of the model: `2g + 1` or `2g + 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

/// The smooth projective curve attached to `y^2 = f(x)`, `f` squarefree.
#[derive(Clone, Debug)]
pub struct CurveModel {
    field: Arc<Field>,
    f: Poly,
    genus: usize,
    parity: Parity,
    /// Quadratic character of the leading coefficient.
    twist_class: i32,
}

impl CurveModel {
    pub fn new(field: &Arc<Field>, f: Poly) -> Result<CurveModel, ZetaError> {
        if field.characteristic() == 2 {
            return Err(ZetaError::EvenCharacteristic);
        }
        let deg = f
            .degree()
            .filter(|&d| d >= 1)
            .ok_or(ZetaError::NotSquarefree)?;
        if !is_squarefree(field, &f)? {
            return Err(ZetaError::NotSquarefree);
        }
        let genus = (deg - 1) / 2;
        let parity = if deg % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        };
        let twist_class = field.chi(f.lead());
        Ok(CurveModel {
            field: field.clone(),
            f,
            genus,
            parity,
            twist_class,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn q(&self) -> i128 {
        self.field.order() as i128
    }

    pub fn poly(&self) -> &Poly {
        &self.f
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn twist_class(&self) -> i32 {
        self.twist_class
    }

    /// Number of points at infinity over `F_{q^d}`.
    fn points_at_infinity(&self, ext: &Extension) -> i64 {
        match self.parity {
            Parity::Odd => 1,
            Parity::Even => 1 + ext.big.chi(ext.embed(self.f.lead())) as i64,
        }
    }

    /// `#C(F_{q^d})`.
    pub fn count_points(&self, d: u32) -> Result<i64, ZetaError> {
        let ext = Extension::cached(self.field.order() as u64, d)?;
        let big = &ext.big;
        let coeffs: Vec<u32> = self.f.coeffs().iter().map(|&c| ext.embed(c)).collect();
        let affine: i64 = big
            .elements()
            .map(|x| {
                let v = coeffs
                    .iter()
                    .rev()
                    .fold(0, |acc, &c| big.add(big.mul(acc, x), c));
                1 + big.chi(v) as i64
            })
            .sum();
        Ok(affine + self.points_at_infinity(&ext))
    }

    /// The curve `y^2 = u f(x)` with `u` the least non-square of `F_q`.
    pub fn quadratic_twist(&self) -> CurveModel {
        let f = &self.field;
        let u = f.least_nonsquare().expect("odd characteristic");
        CurveModel::new(f, self.f.scale(f, u)).expect("twist of a valid model")
    }
}

/// Zeta data of a curve of genus `g` over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeilData {
    pub q: i128,
    pub genus: usize,
    pub parity: Parity,
    /// `N_1, ..., N_g`.
    pub counts: Vec<i64>,
    /// `P(T)`, degree `2g`, low degree first.
    pub p: Vec<i128>,
    /// `H(u)`, monic of degree `g`, low degree first.
    pub h: Vec<i128>,
}

fn pow_i(q: i128, e: usize) -> i128 {
    q.pow(e as u32)
}

/// Elementary symmetric functions from power sums via Newton's identities.
fn newton(power_sums: &[i128]) -> Result<Vec<i128>, ZetaError> {
    let mut e = vec![1i128];
    for k in 1..=power_sums.len() {
        let mut acc = 0i128;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            acc += sign * e[k - i] * power_sums[i - 1];
        }
        if acc % k as i128 != 0 {
            return Err(ZetaError::NonIntegral(k));
        }
        e.push(acc / k as i128);
    }
    Ok(e)
}

/// `P(T)` from the counts `N_1..N_g` and the functional equation.
pub fn weil_from_counts(q: i128, genus: usize, counts: &[i64]) -> Result<Vec<i128>, ZetaError> {
    let s: Vec<i128> = counts
        .iter()
        .take(genus)
        .enumerate()
        .map(|(i, &n)| pow_i(q, i + 1) + 1 - n as i128)
        .collect();
    let e = newton(&s)?;
    let mut p = vec![0i128; 2 * genus + 1];
    for k in 0..=genus {
        let c = if k % 2 == 0 { e[k] } else { -e[k] };
        p[k] = c;
        p[2 * genus - k] = pow_i(q, genus - k) * c;
    }
    Ok(p)
}

/// `P(T)` from counts `N_1..N_{2g}` by Newton's identities alone.
pub fn weil_from_all_counts(q: i128, genus: usize, counts: &[i64]) -> Result<Vec<i128>, ZetaError> {
    let s: Vec<i128> = counts
        .iter()
        .take(2 * genus)
        .enumerate()
        .map(|(i, &n)| pow_i(q, i + 1) + 1 - n as i128)
        .collect();
    let e = newton(&s)?;
    Ok(e.iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 0 { c } else { -c })
        .collect())
}

/// `H(u)` with `P(T) = T^g H(1/T + qT)`, solved from the top coefficient
/// down and then verified exactly.
pub fn reparametrize(q: i128, genus: usize, p: &[i128]) -> Result<Vec<i128>, ZetaError> {
    let g = genus;
    let mut h = vec![0i128; g + 1];
    for j in (0..=g).rev() {
        let mut v = p[g - j];
        let mut jp = j + 2;
        while jp <= g {
            let k = (jp - j) / 2;
            v -= h[jp] * binom_nonneg(jp as i64, k as i64) * pow_i(q, k);
            jp += 2;
        }
        h[j] = v;
    }
    if expand_reparametrized(q, g, &h) != p {
        return Err(ZetaError::BadReparametrization);
    }
    Ok(h)
}

/// `T^g H(1/T + qT)` as coefficients of `T^0..T^{2g}`.
pub fn expand_reparametrized(q: i128, genus: usize, h: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; 2 * genus + 1];
    for (j, &hj) in h.iter().enumerate() {
        // T^{g-j} (1 + q T^2)^j
        for k in 0..=j {
            out[genus - j + 2 * k] += hj * binom_nonneg(j as i64, k as i64) * pow_i(q, k);
        }
    }
    out
}

/// Counts `N_1..N_g`, then `P` and `H`.
pub fn weil_polynomial(curve: &CurveModel) -> Result<WeilData, ZetaError> {
    let g = curve.genus();
    let counts: Vec<i64> = (1..=g as u32)
        .map(|d| curve.count_points(d))
        .collect::<Result<_, _>>()?;
    let q = curve.q();
    let p = weil_from_counts(q, g, &counts)?;
    let h = reparametrize(q, g, &p)?;
    Ok(WeilData {
        q,
        genus: g,
        parity: curve.parity(),
        counts,
        p,
        h,
    })
}

impl WeilData {
    /// `a_m` for `0 <= m <= g` (odd model) or `0 <= m <= g + 1` (even model,
    /// with `t_0 = 1 + q` adjoined).
    pub fn a_stable(&self) -> Vec<i128> {
        let odd: Vec<i128> = self.h.iter().rev().copied().collect();
        match self.parity {
            Parity::Odd => odd,
            Parity::Even => even_from_odd(self.q, &odd),
        }
    }

    /// `a_m` computed as if the model were odd, i.e. without `t_0`.
    pub fn a_odd(&self) -> Vec<i128> {
        self.h.iter().rev().copied().collect()
    }

    /// Coefficients of `P(T)`.
    pub fn a_hat(&self) -> Vec<i128> {
        self.p.clone()
    }

    pub fn a_hat_at(&self, m: usize) -> i128 {
        self.p.get(m).copied().unwrap_or(0)
    }

    /// `#Sym^m C(F_q)` as `sum_{m'} (q^{m'} + ... + 1) â_{m - m'}`.
    pub fn sym_power_count(&self, m: usize) -> i128 {
        (0..=m)
            .map(|mp| {
                let geom: i128 = (0..=mp).map(|i| pow_i(self.q, i)).sum();
                geom * self.a_hat_at(m - mp)
            })
            .sum()
    }

    /// `#Sym^m C(F_q)` for `m = 0..=len-1` as coefficients of
    /// `P(T) / ((1 - T)(1 - qT))`, via the two first-order recurrences.
    pub fn sym_series(&self, len: usize) -> Vec<i128> {
        let mut partial = Vec::with_capacity(len);
        let mut acc = 0i128;
        for m in 0..len {
            acc += self.a_hat_at(m);
            partial.push(acc);
        }
        let mut out = Vec::with_capacity(len);
        let mut prev = 0i128;
        for c in partial {
            prev = c + self.q * prev;
            out.push(prev);
        }
        out
    }

    /// `#X_m = #Sym^m - q #Sym^{m-2}`, zero for negative `m`.
    pub fn x_count(&self, m: i64) -> i128 {
        if m < 0 {
            return 0;
        }
        let m = m as usize;
        let lower = if m >= 2 {
            self.sym_power_count(m - 2)
        } else {
            0
        };
        self.sym_power_count(m) - self.q * lower
    }

    /// `N_d` recovered from `P` via power sums of its reciprocal roots.
    pub fn count_from_weil(&self, d: usize) -> i128 {
        // log P = -sum s_k T^k / k; recover s_d by the Newton recurrence on P.
        let c = &self.p;
        let mut s: Vec<i128> = Vec::with_capacity(d);
        for k in 1..=d {
            let mut v = -(k as i128) * c.get(k).copied().unwrap_or(0);
            for i in 1..k {
                v -= c.get(k - i).copied().unwrap_or(0) * s[i - 1];
            }
            s.push(v);
        }
        pow_i(self.q, d) + 1 - s[d - 1]
    }

    /// `P(1)`.
    pub fn p_at_one(&self) -> i128 {
        self.p.iter().sum()
    }

    /// Every `â_m` for `0 <= m <= 2g` against
    /// `sum_{m'} q^{m'} binom(g - m + 2m', m') a_{m - 2m'}` with the odd `a`.
    pub fn lemma_expansion_holds(&self) -> bool {
        let a = self.a_odd();
        let g = self.genus as i64;
        (0..=2 * self.genus).all(|m| {
            let m = m as i64;
            let rhs: i128 = (0..=m / 2)
                .map(|mp| {
                    let j = m - 2 * mp;
                    let aj = if j <= g { a[j as usize] } else { 0 };
                    pow_i(self.q, mp as usize) * binom_nonneg(g - j, mp) * aj
                })
                .sum();
            rhs == self.a_hat_at(m as usize)
        })
    }

    /// `P(T) = T^g H(1/T + qT)` and the functional equation
    /// `â_{2g-k} = q^{g-k} â_k`.
    pub fn functional_equation_holds(&self) -> bool {
        let g = self.genus;
        let fe = (0..=g).all(|k| self.p[2 * g - k] == pow_i(self.q, g - k) * self.p[k]);
        fe && expand_reparametrized(self.q, g, &self.h) == self.p
    }
}

/// `a_m` with `t_0 = 1 + q` adjoined: `a_m - (1 + q) a_{m-1}`.
pub fn even_from_odd(q: i128, odd: &[i128]) -> Vec<i128> {
    let mut out = Vec::with_capacity(odd.len() + 1);
    for m in 0..=odd.len() {
        let cur = odd.get(m).copied().unwrap_or(0);
        let prev = if m > 0 { odd[m - 1] } else { 0 };
        out.push(cur - (1 + q) * prev);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(q: u64, c: &[i64]) -> CurveModel {
        let f = Field::cached(q).unwrap();
        let p = Poly::new(c.iter().map(|&x| f.from_int(x)).collect());
        CurveModel::new(&f, p).unwrap()
    }

    #[test]
    fn running_example_over_f3() {
        let c = curve(3, &[1, -1, 0, 1]);
        let w = weil_polynomial(&c).unwrap();
        assert_eq!(w.counts, vec![7]);
        assert_eq!(w.p, vec![1, 3, 3]);
        assert_eq!(w.h, vec![3, 1]);
        assert_eq!(w.a_stable(), vec![1, 3]);
        assert_eq!(w.sym_power_count(2), 28);
        assert_eq!(w.x_count(2), 25);
        let t = weil_polynomial(&c.quadratic_twist()).unwrap();
        assert_eq!(t.counts, vec![1]);
        assert_eq!(t.a_stable(), vec![1, -3]);
    }

    #[test]
    fn cuspidal_example() {
        let w = weil_polynomial(&curve(3, &[0, -1, 0, 1])).unwrap();
        assert_eq!(w.counts, vec![4]);
        assert_eq!(w.p, vec![1, 0, 3]);
        assert_eq!(w.h, vec![0, 1]);
    }

    #[test]
    fn non_squarefree_rejected() {
        let f = Field::cached(3).unwrap();
        let p = Poly::new(vec![0, 0, 1, 1]);
        assert!(matches!(
            CurveModel::new(&f, p),
            Err(ZetaError::NotSquarefree)
        ));
    }

    #[test]
    fn newton_rejects_fractions() {
        assert_eq!(newton(&[1, 0]), Err(ZetaError::NonIntegral(2)));
    }
}
