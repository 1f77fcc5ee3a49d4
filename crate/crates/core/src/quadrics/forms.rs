//! Symmetric bilinear forms: the split form with antidiagonal Gram matrix,
//! self-adjointness, hyperbolic splitting, and the pencil on `V ⊕ k`.

use serde::Serialize;

use crate::algebra::linalg::{all_vectors, combine, Mat};
use crate::algebra::{Elem, Field};

/// Gram matrix of the split form: `<e_i, e_j> = 1` iff `i + j = n + 1`.
pub fn split_gram(n: usize) -> Mat {
    Mat::anti_identity(n)
}

/// `<u, Tv> = <Tu, v>` for the split form.
pub fn is_self_adjoint_split(f: &Field, t: &Mat) -> bool {
    split_gram(t.rows()).mul(f, t).is_symmetric()
}

/// `Ad(h) t = h t h^{-1}`.
pub fn conjugate(f: &Field, h: &Mat, t: &Mat) -> Mat {
    let hinv = h.inverse(f).expect("invertible");
    h.mul(f, t).mul(f, &hinv)
}

/// Inverse of an isometry of the split form: `J h^T J`.
pub fn split_isometry_inverse(h: &Mat) -> Mat {
    let n = h.rows();
    let mut out = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, h.get(n - 1 - j, n - 1 - i));
        }
    }
    out
}

/// Columns `S` with `S^T G S = J` (antidiagonal), or `None` when `G` is not
/// isometric to the split form.
///
/// Hyperbolic pairs are split off one at a time: an isotropic `x`, a partner
/// `y` with `<x, y> = 1`, `<y, y> = 0`, then recursion on `{x, y}^⊥`.
pub fn split_basis(f: &Field, gram: &Mat) -> Option<Mat> {
    let n = gram.rows();
    let two_inv = f.inv(f.from_int(2))?;
    let b = |u: &[Elem], v: &[Elem]| gram.bilinear(f, u, v);
    // Basis of the current orthogonal complement, as ambient vectors.
    let mut rest: Vec<Vec<Elem>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        })
        .collect();
    let mut pairs: Vec<(Vec<Elem>, Vec<Elem>)> = Vec::new();
    while rest.len() >= 2 {
        let d = rest.len();
        let Some(x) = all_vectors(f, d)
            .skip(1)
            .map(|c| combine(f, &rest, &c))
            .find(|v| b(v, v) == 0)
        else {
            break;
        };
        let w = rest.iter().find(|r| b(&x, r) != 0)?.clone();
        let s = f.inv(b(&x, &w))?;
        let y0: Vec<Elem> = w.iter().map(|&c| f.mul(c, s)).collect();
        let corr = f.mul(b(&y0, &y0), two_inv);
        let y: Vec<Elem> = y0
            .iter()
            .zip(&x)
            .map(|(&a, &xa)| f.sub(a, f.mul(corr, xa)))
            .collect();
        // Project the remaining basis onto {x, y}^⊥.
        let mut next: Vec<Vec<Elem>> = Vec::new();
        for r in &rest {
            let bx = b(r, &x);
            let by = b(r, &y);
            let proj: Vec<Elem> = (0..n)
                .map(|k| f.sub(f.sub(r[k], f.mul(by, x[k])), f.mul(bx, y[k])))
                .collect();
            next.push(proj);
        }
        let (rref_rows, _) = crate::algebra::linalg::rref(f, next);
        rest = rref_rows;
        pairs.push((x, y));
    }
    let mut cols: Vec<Vec<Elem>> = vec![Vec::new(); n];
    let h = pairs.len();
    match (n - 2 * h, rest.len()) {
        (0, 0) => {}
        (1, 1) => {
            let z = &rest[0];
            let c = b(z, z);
            if f.chi(c) != 1 {
                return None;
            }
            let root = f.elements().find(|&r| f.mul(r, r) == c)?;
            let ri = f.inv(root)?;
            cols[h] = z.iter().map(|&a| f.mul(a, ri)).collect();
        }
        _ => return None,
    }
    for (i, (x, y)) in pairs.into_iter().enumerate() {
        cols[i] = x;
        cols[n - 1 - i] = y;
    }
    let s = Mat::from_cols(&cols);
    debug_assert_eq!(s.transpose().mul(f, gram).mul(f, &s), split_gram(n));
    Some(s)
}

/// Sign of the `cd` term in the second form on `V ⊕ k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CornerSign {
    /// `<v,Tw> - cd`: common isotropic subspaces form a torsor for the
    /// Jacobian of `y^2 = -p_T(x)`.
    Literal,
    /// `<v,Tw> + cd`: the torsor is for the Jacobian of `y^2 = p_T(x)`.
    Matched,
    /// `<v,Tw> + ε cd` with `ε` the least non-square: the quadratic twist.
    Twisted,
}

impl CornerSign {
    pub fn value(self, f: &Field) -> Elem {
        match self {
            CornerSign::Literal => f.neg(1),
            CornerSign::Matched => 1,
            CornerSign::Twisted => f.least_nonsquare().expect("odd characteristic"),
        }
    }
}

/// The pencil on `V ⊕ k` for an odd-dimensional `V`:
/// `<(v,c),(w,d)>_1 = <v,w>` and `<(v,c),(w,d)>_2 = <v,Tw> + s cd`.
#[derive(Clone, Debug)]
pub struct Pencil {
    pub gram1: Mat,
    pub gram2: Mat,
}

impl Pencil {
    pub fn extended(f: &Field, t: &Mat, sign: CornerSign) -> Pencil {
        let n = t.rows();
        let j = split_gram(n);
        let jt = j.mul(f, t);
        let mut g1 = Mat::zeros(n + 1, n + 1);
        let mut g2 = Mat::zeros(n + 1, n + 1);
        for a in 0..n {
            for c in 0..n {
                g1.set(a, c, j.get(a, c));
                g2.set(a, c, jt.get(a, c));
            }
        }
        g2.set(n, n, sign.value(f));
        Pencil {
            gram1: g1,
            gram2: g2,
        }
    }

    /// `<v,w>` and `<v,Tw>` on `V` itself.
    pub fn on_v(f: &Field, t: &Mat) -> Pencil {
        let j = split_gram(t.rows());
        Pencil {
            gram2: j.mul(f, t),
            gram1: j,
        }
    }

    pub fn dim(&self) -> usize {
        self.gram1.rows()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_basis_of_diagonal_form() {
        let f = Field::new(5).unwrap();
        // x^2 + y^2 + z^2 over F_5 has discriminant 1.
        let g = Mat::identity(3);
        let s = split_basis(&f, &g).unwrap();
        assert_eq!(s.transpose().mul(&f, &g).mul(&f, &s), split_gram(3));
    }

    #[test]
    fn anisotropic_plane_is_not_split() {
        let f = Field::new(3).unwrap();
        // x^2 + y^2 is anisotropic over F_3.
        assert!(split_basis(&f, &Mat::identity(2)).is_none());
        // x^2 - y^2 is hyperbolic.
        let g = Mat::from_rows(&[vec![1, 0], vec![0, 2]]);
        assert!(split_basis(&f, &g).is_some());
    }

    #[test]
    fn inverse_of_split_isometry() {
        let f = Field::new(3).unwrap();
        let g = split_gram(3);
        let refl = Mat::from_rows(&[vec![0, 0, 1], vec![0, 2, 0], vec![1, 0, 0]]);
        assert_eq!(refl.transpose().mul(&f, &g).mul(&f, &refl), g);
        assert_eq!(
            refl.mul(&f, &split_isometry_inverse(&refl)),
            Mat::identity(3)
        );
    }
}
