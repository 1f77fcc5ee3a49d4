use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::VerifyError;
use crate::algebra::{is_squarefree, Field, Poly};

/// Draws allowed per squarefree sample before giving up.
const MAX_DRAWS: usize = 10_000;

/// Stream key for one sample: suite tag, field size, degree and index.
pub fn stream_key(tag: u8, q: u64, degree: usize, index: usize) -> u64 {
    (tag as u64) << 56
        | (q & 0xff_ffff) << 32
        | (degree as u64 & 0xff) << 24
        | index as u64 & 0xff_ffff
}

/// Seeded source of independent streams.
#[derive(Clone, Copy, Debug)]
pub struct Sampler {
    seed: u64,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rng(&self, key: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(key);
        rng
    }

    /// A uniform monic polynomial of degree `n`.
    pub fn monic(rng: &mut ChaCha8Rng, f: &Field, n: usize) -> Poly {
        let mut c: Vec<u32> = (0..n).map(|_| rng.gen_range(0..f.order())).collect();
        c.push(1);
        Poly::new(c)
    }

    /// A uniform squarefree monic polynomial of degree `n`, by rejection.
    pub fn squarefree_monic(&self, f: &Field, n: usize, key: u64) -> Result<Poly, VerifyError> {
        let mut rng = self.rng(key);
        for _ in 0..MAX_DRAWS {
            let p = Sampler::monic(&mut rng, f, n);
            if is_squarefree(f, &p)? {
                return Ok(p);
            }
        }
        Err(VerifyError::SamplingExhausted {
            q: f.order() as u64,
            degree: n,
            tries: MAX_DRAWS,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let f = Field::cached(5).unwrap();
        let s = Sampler::new(7);
        let a = s.squarefree_monic(&f, 5, stream_key(1, 5, 5, 0)).unwrap();
        let b = s.squarefree_monic(&f, 5, stream_key(1, 5, 5, 0)).unwrap();
        assert_eq!(a, b);
        let others: Vec<Poly> = (1..6)
            .map(|i| s.squarefree_monic(&f, 5, stream_key(1, 5, 5, i)).unwrap())
            .collect();
        assert!(others.iter().any(|p| *p != a));
    }
}
