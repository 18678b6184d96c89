//! Named, seedable random streams.
//!
//! A stream is identified by a `(seed, label)` pair. The ChaCha20 key is the
//! SHA-256 digest of the little-endian seed followed by the UTF-8 label, so a
//! given pair produces the same sequence on every platform. Child streams are
//! derived from the identity of the parent, never from its consumed state, which
//! makes hierarchical derivation independent of execution order.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    label: String,
    inner: ChaCha20Rng,
}

impl RngStream {
    pub fn new(seed: u64, label: impl Into<String>) -> Self {
        let label = label.into();
        let mut hasher = Sha256::new();
        hasher.update(seed.to_le_bytes());
        hasher.update(label.as_bytes());
        let digest = hasher.finalize();
        let mut key = [0u8; 32];
        key.copy_from_slice(&digest);
        Self {
            seed,
            label,
            inner: ChaCha20Rng::from_seed(key),
        }
    }

    /// Child stream `label/sub`, independent of how much of `self` was consumed.
    pub fn split(&self, sub: impl AsRef<str>) -> Self {
        Self::new(self.seed, format!("{}/{}", self.label, sub.as_ref()))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Fresh stream with the same identity, rewound to the start.
    pub fn replay(&self) -> Self {
        Self::new(self.seed, self.label.clone())
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_identity_same_sequence() {
        let mut a = RngStream::new(7, "noise/run0");
        let mut b = RngStream::new(7, "noise/run0");
        let xs: Vec<u64> = (0..32).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..32).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn labels_and_seeds_separate_streams() {
        let a = RngStream::new(7, "a").next_u64_once();
        let b = RngStream::new(7, "b").next_u64_once();
        let c = RngStream::new(8, "a").next_u64_once();
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn split_ignores_consumed_state() {
        let parent = RngStream::new(1, "root");
        let mut used = parent.clone();
        let _: f64 = used.random();
        assert_eq!(
            parent.split("x").next_u64_once(),
            used.split("x").next_u64_once()
        );
        assert_eq!(parent.split("x").label(), "root/x");
    }

    #[test]
    fn frozen_first_output() {
        // Reference: first keystream word of ChaCha20 keyed by SHA-256(0u64 LE),
        // zero nonce, computed with an independent ChaCha20 implementation.
        assert_eq!(RngStream::new(0, "").next_u64_once(), 11_567_174_389_191_315_219);
    }

    trait Once {
        fn next_u64_once(self) -> u64;
    }

    impl Once for RngStream {
        fn next_u64_once(mut self) -> u64 {
            self.next_u64()
        }
    }
}
