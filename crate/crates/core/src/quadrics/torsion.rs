//! Frobenius modules over `F_2` attached to the roots of `p_T`.
//!
//! With `n` roots permuted by Frobenius in cycles of lengths `d_i` (the
//! degrees of the irreducible factors), `Res mu_2 = F_2^n` and
//! `ker(Nm)` is the even-weight submodule. In odd degree the two-torsion of
//! the Jacobian is `ker(Nm)`; in even degree it is `ker(Nm)` modulo the
//! diagonal.

use serde::Serialize;

type Bits = u64;

/// Cohomology sizes of the torsion module and of the stabilizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionSizes {
    /// `#J_T[2](k)`, fixed points of Frobenius.
    pub h0: u64,
    /// `#H^1(k, J_T[2])`, coinvariants of Frobenius.
    pub h1: u64,
    /// `#ker(Nm)(k)`, the rational points of the stabilizer in `SO(V)`.
    pub stabilizer: u64,
}

fn frobenius(v: Bits, cycles: &[(usize, usize)]) -> Bits {
    // Rotate the bits inside each cycle by one place.
    let mut out = 0;
    for &(start, len) in cycles {
        for k in 0..len {
            if v >> (start + k) & 1 == 1 {
                out |= 1 << (start + (k + 1) % len);
            }
        }
    }
    out
}

/// Dimension of the `F_2`-span of the given vectors.
fn rank(vs: impl IntoIterator<Item = Bits>) -> u32 {
    let mut basis: Vec<Bits> = Vec::new();
    for mut v in vs {
        for &b in &basis {
            let hb = 63 - b.leading_zeros();
            if v >> hb & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len() as u32
}

pub fn torsion_sizes(degrees: &[usize]) -> TorsionSizes {
    let n: usize = degrees.iter().sum();
    assert!(n < 64, "degree bound");
    let mut cycles = Vec::new();
    let mut start = 0;
    for &d in degrees {
        cycles.push((start, d));
        start += d;
    }
    let all_ones: Bits = (1 << n) - 1;
    let even_n = n.is_multiple_of(2);
    let kernel: Vec<Bits> = (0..1u64 << n).filter(|v| v.count_ones() % 2 == 0).collect();
    let in_diag = |v: Bits| v == 0 || (even_n && v == all_ones);
    let diag_size: u64 = if even_n { 2 } else { 1 };

    let stabilizer = kernel
        .iter()
        .filter(|&&v| frobenius(v, &cycles) == v)
        .count() as u64;
    let h0_lifts = kernel
        .iter()
        .filter(|&&v| in_diag(frobenius(v, &cycles) ^ v))
        .count() as u64;
    let h0 = h0_lifts / diag_size;

    // H^1 = K / (D + (F - 1) K).
    let dim_k = rank(kernel.iter().copied());
    let mut image: Vec<Bits> = kernel.iter().map(|&v| frobenius(v, &cycles) ^ v).collect();
    if even_n {
        image.push(all_ones);
    }
    let h1 = 1u64 << (dim_k - rank(image));
    TorsionSizes { h0, h1, stabilizer }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_degree_counts() {
        // Irreducible cubic: only the trivial class.
        assert_eq!(torsion_sizes(&[3]).h0, 1);
        // Three linear factors: 2^{r-1}.
        let t = torsion_sizes(&[1, 1, 1]);
        assert_eq!((t.h0, t.h1), (4, 4));
        let t = torsion_sizes(&[1, 2, 2]);
        assert_eq!((t.h0, t.h1), (4, 4));
    }

    #[test]
    fn h0_equals_h1() {
        for degs in [
            vec![4],
            vec![2, 2],
            vec![1, 3],
            vec![1, 1, 2],
            vec![1, 1, 1, 1],
            vec![2, 4],
            vec![3, 3],
        ] {
            let t = torsion_sizes(&degs);
            assert_eq!(t.h0, t.h1, "{degs:?}");
        }
    }
}
