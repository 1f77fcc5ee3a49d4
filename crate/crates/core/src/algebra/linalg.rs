//! Dense matrices and subspaces over a [`Field`].

use super::field::{Elem, Field};
use super::poly::Poly;

/// Row-major square or rectangular matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Antidiagonal identity: `1` at `(i, n - 1 - i)`.
    pub fn anti_identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, n - 1 - i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Mat {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Elem>]) -> Mat {
        Mat::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Elem> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, f: &Field, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = Mat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let v = f.add(out.get(i, j), f.mul(a, o.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, f: &Field, o: &Mat) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, f: &Field, c: Elem) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn apply(&self, f: &Field, v: &[Elem]) -> Vec<Elem> {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0, |acc, j| f.add(acc, f.mul(self.get(i, j), v[j]))))
            .collect()
    }

    /// `u^T M v`.
    pub fn bilinear(&self, f: &Field, u: &[Elem], v: &[Elem]) -> Elem {
        let mv = self.apply(f, v);
        dot(f, u, &mv)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Gaussian elimination returning `(rank, determinant)` for square input.
    fn eliminate(&self, f: &Field) -> (usize, Elem) {
        let mut m = self.clone();
        let mut det = 1;
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(piv) = (rank..m.rows).find(|&r| m.get(r, c) != 0) else {
                det = 0;
                continue;
            };
            if piv != rank {
                m.swap_rows(piv, rank);
                det = f.neg(det);
            }
            let pv = m.get(rank, c);
            det = f.mul(det, pv);
            let inv = f.inv(pv).expect("nonzero pivot");
            for r in rank + 1..m.rows {
                let factor = f.mul(m.get(r, c), inv);
                if factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(rank, j)));
                    m.set(r, j, v);
                }
            }
            rank += 1;
        }
        if self.rows != self.cols || rank < self.rows {
            det = 0;
        }
        (rank, det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.eliminate(f).0
    }

    pub fn det(&self, f: &Field) -> Elem {
        self.eliminate(f).1
    }

    pub fn inverse(&self, f: &Field) -> Option<Mat> {
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        for c in 0..n {
            let piv = (c..n).find(|&r| aug.get(r, c) != 0)?;
            aug.swap_rows(piv, c);
            let inv = f.inv(aug.get(c, c))?;
            for j in 0..2 * n {
                let v = f.mul(aug.get(c, j), inv);
                aug.set(c, j, v);
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let factor = aug.get(r, c);
                if factor == 0 {
                    continue;
                }
                for j in 0..2 * n {
                    let v = f.sub(aug.get(r, j), f.mul(factor, aug.get(c, j)));
                    aug.set(r, j, v);
                }
            }
        }
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j));
            }
        }
        Some(out)
    }

    /// Null space basis of `M` acting on column vectors.
    pub fn kernel(&self, f: &Field) -> Vec<Vec<Elem>> {
        let rows: Vec<Vec<Elem>> = (0..self.rows).map(|i| self.row(i)).collect();
        let (rref, pivots) = rref(f, rows);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0; self.cols];
                v[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(rref[r][fc]);
                }
                v
            })
            .collect()
    }

    /// Characteristic polynomial `det(x I - M)` via Hessenberg reduction.
    pub fn charpoly(&self, f: &Field) -> Poly {
        let n = self.rows;
        let mut h = self.clone();
        // Reduce to upper Hessenberg form by similarity.
        for c in 0..n.saturating_sub(2) {
            let Some(piv) = (c + 1..n).find(|&r| h.get(r, c) != 0) else {
                continue;
            };
            if piv != c + 1 {
                h.swap_rows(piv, c + 1);
                for i in 0..n {
                    h.data.swap(i * n + piv, i * n + c + 1);
                }
            }
            let inv = f.inv(h.get(c + 1, c)).expect("nonzero pivot");
            for r in c + 2..n {
                let factor = f.mul(h.get(r, c), inv);
                if factor == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = f.sub(h.get(r, j), f.mul(factor, h.get(c + 1, j)));
                    h.set(r, j, v);
                }
                for i in 0..n {
                    let v = f.add(h.get(i, c + 1), f.mul(factor, h.get(i, r)));
                    h.set(i, c + 1, v);
                }
            }
        }
        // p_k(x) = (x - h_kk) p_{k-1} - sum_{i<k} h_ik (prod sub-diagonal) p_{i-1}
        let mut ps: Vec<Poly> = vec![Poly::one()];
        for k in 0..n {
            let mut pk = Poly::linear(f, h.get(k, k)).mul(f, &ps[k]);
            let mut prod = 1;
            for i in (0..k).rev() {
                prod = f.mul(prod, h.get(i + 1, i));
                let c = f.mul(prod, h.get(i, k));
                if c != 0 {
                    pk = pk.sub(f, &ps[i].scale(f, c));
                }
            }
            ps.push(pk);
        }
        ps.pop().expect("nonempty")
    }
}

pub fn dot(f: &Field, u: &[Elem], v: &[Elem]) -> Elem {
    u.iter()
        .zip(v)
        .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
}

/// Reduced row echelon form of the given rows; returns nonzero rows and their
/// pivot columns.
pub fn rref(f: &Field, mut rows: Vec<Vec<Elem>>) -> (Vec<Vec<Elem>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(piv, r);
        let inv = f.inv(rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c] == 0 {
                continue;
            }
            let factor = rows[i][c];
            for j in 0..ncols {
                let v = f.sub(rows[i][j], f.mul(factor, rows[r][j]));
                rows[i][j] = v;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// A subspace stored as its canonical reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn span(f: &Field, ambient: usize, vs: Vec<Vec<Elem>>) -> Subspace {
        if vs.is_empty() {
            return Subspace::zero(ambient);
        }
        let (basis, pivots) = rref(f, vs);
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    /// Membership by reduction against the pivots.
    pub fn contains(&self, f: &Field, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = w[pc];
            if c != 0 {
                for j in 0..self.ambient {
                    w[j] = f.sub(w[j], f.mul(c, row[j]));
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, f: &Field, o: &Subspace) -> bool {
        o.basis.iter().all(|v| self.contains(f, v))
    }

    pub fn with_vector(&self, f: &Field, v: Vec<Elem>) -> Subspace {
        let mut vs = self.basis.clone();
        vs.push(v);
        Subspace::span(f, self.ambient, vs)
    }

    /// Image under a linear map given as a matrix of the right shape.
    pub fn image(&self, f: &Field, m: &Mat) -> Subspace {
        Subspace::span(
            f,
            m.rows(),
            self.basis.iter().map(|v| m.apply(f, v)).collect(),
        )
    }

    pub fn sum(&self, f: &Field, o: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(o.basis.iter().cloned());
        Subspace::span(f, self.ambient, vs)
    }

    pub fn intersection_dim(&self, f: &Field, o: &Subspace) -> usize {
        self.dim() + o.dim() - self.sum(f, o).dim()
    }

    /// All hyperplanes of this subspace, deterministic order.
    pub fn hyperplanes(&self, f: &Field) -> Vec<Subspace> {
        let d = self.dim();
        if d == 0 {
            return Vec::new();
        }
        // Hyperplanes correspond to nonzero functionals up to scaling; take the
        // functional with leading coefficient 1 in coordinates of the basis.
        let q = f.order() as u64;
        let mut out = Vec::new();
        for lead in 0..d {
            let free = d - lead - 1;
            for code in 0..q.pow(free as u32) {
                let mut phi = vec![0; d];
                phi[lead] = 1;
                let mut c = code;
                for slot in phi.iter_mut().skip(lead + 1) {
                    *slot = (c % q) as Elem;
                    c /= q;
                }
                // Kernel of phi in basis coordinates.
                let coeff_mat = Mat::from_rows(&[phi]);
                let ker = coeff_mat.kernel(f);
                let vs: Vec<Vec<Elem>> = ker.iter().map(|k| combine(f, &self.basis, k)).collect();
                out.push(Subspace::span(f, self.ambient, vs));
            }
        }
        out
    }
}

/// `sum_i k_i b_i`.
pub fn combine(f: &Field, basis: &[Vec<Elem>], k: &[Elem]) -> Vec<Elem> {
    let n = basis.first().map_or(0, Vec::len);
    let mut out = vec![0; n];
    for (b, &c) in basis.iter().zip(k) {
        if c == 0 {
            continue;
        }
        for j in 0..n {
            out[j] = f.add(out[j], f.mul(c, b[j]));
        }
    }
    out
}

/// Iterate all vectors of `F_q^n` in code order.
pub fn all_vectors(f: &Field, n: usize) -> impl Iterator<Item = Vec<Elem>> + '_ {
    let q = f.order() as u64;
    (0..q.pow(n as u32)).map(move |mut code| {
        (0..n)
            .map(|_| {
                let d = (code % q) as Elem;
                code /= q;
                d
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let f = Field::new(5).unwrap();
        let m = Mat::from_rows(&[vec![1, 2, 0], vec![3, 1, 4], vec![0, 2, 2]]);
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&f, &inv), Mat::identity(3));
        assert_ne!(m.det(&f), 0);
    }

    #[test]
    fn charpoly_of_companion() {
        let f = Field::new(7).unwrap();
        // Companion matrix of x^3 + 2x^2 + 3x + 5.
        let m = Mat::from_rows(&[vec![0, 0, 2], vec![1, 0, 4], vec![0, 1, 5]]);
        assert_eq!(m.charpoly(&f), Poly::new(vec![5, 3, 2, 1]));
    }

    #[test]
    fn hyperplane_count() {
        let f = Field::new(3).unwrap();
        let s = Subspace::span(
            &f,
            4,
            vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]],
        );
        let hs = s.hyperplanes(&f);
        assert_eq!(hs.len(), 13);
        let mut uniq = hs.clone();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), 13);
        assert!(hs.iter().all(|h| h.dim() == 2 && s.contains_space(&f, h)));
    }

    #[test]
    fn kernel_is_annihilated() {
        let f = Field::new(3).unwrap();
        let m = Mat::from_rows(&[vec![1, 1, 0, 2], vec![0, 1, 1, 1]]);
        let ker = m.kernel(&f);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.apply(&f, v).iter().all(|&x| x == 0));
        }
    }
}
