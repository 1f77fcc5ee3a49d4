//! The special orthogonal group of the split form, enumerated by closure
//! from products of pairs of reflections.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use super::forms::split_gram;
use super::QuadricsError;
use crate::algebra::linalg::all_vectors;
use crate::algebra::{Elem, Field, Mat};

/// Default bound on `|SO_n(F_q)|` for explicit enumeration.
pub const MAX_GROUP_ORDER: u128 = 2_000_000;

/// `|SO_n(F_q)|` for the split form, `q` odd.
pub fn so_order(n: usize, q: u128) -> u128 {
    let m = n / 2;
    let top = if n % 2 == 1 { m } else { m.saturating_sub(1) };
    let prod: u128 = (1..=top).map(|i| q.pow(2 * i as u32) - 1).product();
    if n % 2 == 1 {
        q.pow((m * m) as u32) * prod
    } else if m == 0 {
        1
    } else {
        q.pow((m * (m - 1)) as u32) * (q.pow(m as u32) - 1) * prod
    }
}

/// Reflection `w -> w - 2 <w,v>/<v,v> v` for the split form.
fn reflection(f: &Field, v: &[Elem]) -> Option<Mat> {
    let n = v.len();
    let j = split_gram(n);
    let jv = j.apply(f, v);
    let bvv: Elem = v
        .iter()
        .zip(&jv)
        .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
    let c = f.mul(f.from_int(2), f.inv(bvv)?);
    let mut r = Mat::identity(n);
    for a in 0..n {
        for b in 0..n {
            let val = f.sub(r.get(a, b), f.mul(c, f.mul(v[a], jv[b])));
            r.set(a, b, val);
        }
    }
    Some(r)
}

fn key(m: &Mat) -> Box<[u8]> {
    m.data().iter().map(|&x| x as u8).collect()
}

fn closure(f: &Field, gens: &[Mat], cap: u128) -> Vec<Mat> {
    let n = gens.first().map_or(0, Mat::rows);
    let id = Mat::identity(n);
    let mut seen: HashSet<Box<[u8]>> = HashSet::new();
    seen.insert(key(&id));
    let mut elems = vec![id];
    let mut head = 0;
    while head < elems.len() {
        let cur = elems[head].clone();
        head += 1;
        for g in gens {
            let next = cur.mul(f, g);
            if seen.insert(key(&next)) {
                elems.push(next);
                if elems.len() as u128 > cap {
                    return elems;
                }
            }
        }
    }
    elems
}

/// All elements of `SO_n(F_q)` for the split form, in a deterministic order.
pub fn enumerate_so(f: &Field, n: usize, max_order: u128) -> Result<Vec<Mat>, QuadricsError> {
    let order = so_order(n, f.order() as u128);
    if order > max_order {
        return Err(QuadricsError::GroupTooLarge {
            n,
            q: f.order(),
            order,
        });
    }
    if f.order() > 255 {
        return Err(QuadricsError::GroupTooLarge {
            n,
            q: f.order(),
            order,
        });
    }
    let j = split_gram(n);
    let anisotropic: Vec<Vec<Elem>> = all_vectors(f, n)
        .filter(|v| v.iter().find(|&&c| c != 0) == Some(&1))
        .filter(|v| j.bilinear(f, v, v) != 0)
        .collect();
    let Some(u0) = anisotropic.first() else {
        return Ok(vec![Mat::identity(n)]);
    };
    let r0 = reflection(f, u0).expect("anisotropic");
    let pair_products: Vec<Mat> = anisotropic[1..]
        .iter()
        .map(|v| r0.mul(f, &reflection(f, v).expect("anisotropic")))
        .collect();
    let mut k = 4.min(pair_products.len());
    loop {
        let group = closure(f, &pair_products[..k], order);
        if group.len() as u128 == order || k == pair_products.len() {
            if group.len() as u128 != order {
                return Err(QuadricsError::GroupClosure {
                    expected: order,
                    found: group.len() as u128,
                });
            }
            return Ok(group);
        }
        k = (2 * k).min(pair_products.len());
    }
}

/// Shared copy of [`enumerate_so`].
pub fn cached_so(f: &Field, n: usize, max_order: u128) -> Result<Arc<Vec<Mat>>, QuadricsError> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, Vec<u32>, u32), Arc<Vec<Mat>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let k = (n, f.modulus().to_vec(), f.characteristic());
    if let Some(g) = cache.lock().expect("group cache").get(&k) {
        return Ok(g.clone());
    }
    let g = Arc::new(enumerate_so(f, n, max_order)?);
    cache.lock().expect("group cache").insert(k, g.clone());
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(so_order(3, 3), 24);
        assert_eq!(so_order(5, 3), 51840);
        assert_eq!(so_order(3, 5), 120);
        assert_eq!(so_order(4, 3), 576);
        assert_eq!(so_order(2, 3), 2);
    }

    #[test]
    fn so3_over_f3_preserves_form() {
        let f = Field::new(3).unwrap();
        let g = enumerate_so(&f, 3, MAX_GROUP_ORDER).unwrap();
        assert_eq!(g.len(), 24);
        let j = split_gram(3);
        for h in &g {
            assert_eq!(h.transpose().mul(&f, &j).mul(&f, h), j);
            assert_eq!(h.det(&f), 1);
        }
    }

    #[test]
    fn so4_over_f3() {
        let f = Field::new(3).unwrap();
        assert_eq!(enumerate_so(&f, 4, MAX_GROUP_ORDER).unwrap().len(), 576);
    }
}
