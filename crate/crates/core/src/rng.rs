//! Seeded generators and complex Gaussian sampling.
//!
//! Variance `v` for a complex entry means variance `v/2` on each of the real
//! and imaginary parts.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::CMatrix;

pub type SimRng = ChaCha8Rng;

/// Generator for trial `index` of a run seeded with `master`.
///
/// Each index selects a distinct ChaCha stream, so the value of trial `i`
/// does not depend on how many other trials ran or in which order.
pub fn derive(master: u64, index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

/// Mixes a tag into a seed (splitmix64 finalizer) so that independent parts
/// of one experiment do not share streams.
pub fn sub_seed(master: u64, tag: u64) -> u64 {
    let mut z = master ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn cscg<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let scale = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(scale * re, scale * im)
}

/// `rows x cols` matrix of i.i.d. CSCG entries, filled column by column.
pub fn cscg_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, variance: f64, rng: &mut R) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    for c in 0..cols {
        for r in 0..rows {
            m[(r, c)] = cscg(rng, variance);
        }
    }
    m
}
