//! Seeded, splittable random streams.
//!
//! A stream is identified by a master seed and a path of indices. The ChaCha
//! key is the SHA-256 digest of that identity, so a substream never depends on
//! how many draws were taken from its parent.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use sha2::{Digest, Sha256};

use crate::real::Real;

#[derive(Clone, Debug)]
pub struct RngStream {
    master_seed: u64,
    path: Vec<u64>,
    core: ChaCha12Rng,
}

fn derive_key(seed: u64, path: &[u64]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(b"idtsub/stream/v1");
    h.update(seed.to_le_bytes());
    h.update((path.len() as u64).to_le_bytes());
    for idx in path {
        h.update(idx.to_le_bytes());
    }
    h.finalize().into()
}

impl RngStream {
    pub fn new(master_seed: u64) -> Self {
        Self::at(master_seed, Vec::new())
    }

    fn at(master_seed: u64, path: Vec<u64>) -> Self {
        let core = ChaCha12Rng::from_seed(derive_key(master_seed, &path));
        RngStream {
            master_seed,
            path,
            core,
        }
    }

    /// Child stream obtained by appending `index` to the path.
    pub fn substream(&self, index: u64) -> RngStream {
        let mut path = self.path.clone();
        path.push(index);
        Self::at(self.master_seed, path)
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn path(&self) -> &[u64] {
        &self.path
    }

    /// Uniform draw from the open interval (0, 1).
    pub fn uniform<T: Real>(&mut self) -> T {
        loop {
            let bits = self.core.next_u64() >> 11;
            let u = (bits as f64 + 0.5) * (1.0 / 9007199254740992.0);
            let v = T::lit(u);
            if v > T::zero() && v < T::one() {
                return v;
            }
        }
    }

    /// Unit exponential draw, always finite and positive.
    pub fn exp1<T: Real>(&mut self) -> T {
        -self.uniform::<T>().ln()
    }

    /// Draw an index uniformly from `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        if n <= 1 {
            return 0;
        }
        let u: f64 = self.uniform();
        ((u * n as f64) as usize).min(n - 1)
    }

    pub fn poisson(&mut self, mean: f64) -> u64 {
        if !(mean > 0.0) {
            return 0;
        }
        match Poisson::new(mean) {
            Ok(p) => {
                let k: f64 = p.sample(self);
                k as u64
            }
            Err(_) => 0,
        }
    }

    /// Gamma draw with the given shape and scale.
    pub fn gamma<T: Real>(&mut self, shape: T, scale: T) -> T {
        let g = Gamma::new(shape.as_f64(), scale.as_f64()).expect("gamma parameters must be positive");
        let mut x: f64 = g.sample(self);
        // rand_distr can return exact zero for tiny shapes; nudge into (0, inf)
        if x <= 0.0 {
            x = f64::MIN_POSITIVE;
        }
        T::lit(x)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.core.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.core.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.core.fill_bytes(dest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_identity_same_sequence() {
        let mut a = RngStream::new(9).substream(3);
        let mut b = RngStream::new(9).substream(3);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn substream_ignores_parent_state() {
        let parent = RngStream::new(1);
        let mut used = parent.clone();
        for _ in 0..17 {
            used.next_u64();
        }
        let mut x = parent.substream(5);
        let mut y = used.substream(5);
        assert_eq!(x.next_u64(), y.next_u64());
        assert_ne!(parent.substream(5).next_u64(), parent.substream(6).next_u64());
    }

    #[test]
    fn uniform_is_open() {
        let mut r = RngStream::new(0);
        for _ in 0..10_000 {
            let u: f32 = r.uniform();
            assert!(u > 0.0 && u < 1.0);
            let v: f64 = r.uniform();
            assert!(v > 0.0 && v < 1.0);
        }
    }

    #[test]
    fn exponential_mean() {
        let mut r = RngStream::new(4);
        let n = 200_000;
        let m: f64 = (0..n).map(|_| r.exp1::<f64>()).sum::<f64>() / n as f64;
        assert!((m - 1.0).abs() < 3.0 * 4.0 / (n as f64).sqrt());
    }
}
