use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Grid, SineBasis};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RhsKind {
    Ones,
    E1,
    Checkerboard,
    RandomEigenMix,
}

/// `sum_i gamma_i Psi_i` with `gamma_i` uniform on `[-1, 1]`.
pub fn random_eigen_mix<R: Rng>(basis: &SineBasis, rng: &mut R) -> Vec<f64> {
    let c: Vec<f64> = (0..basis.len()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    basis.synthesize(&c)
}

/// Right-hand sides of the experiments on `grid`.
///
/// The checkerboard is `+1` where `(x - 1/2)(y - 1/2) > 0` and `-1`
/// elsewhere, sampled at the nodes without any scaling; it needs a 2D grid.
pub fn special_rhs(kind: RhsKind, grid: &Grid, seed: u64) -> Vec<f64> {
    let n = grid.len();
    match kind {
        RhsKind::Ones => vec![1.0; n],
        RhsKind::E1 => {
            let mut v = vec![0.0; n];
            v[0] = 1.0;
            v
        }
        RhsKind::Checkerboard => {
            assert_eq!(grid.dims.len(), 2, "the checkerboard lives on a 2D grid");
            (0..n)
                .map(|i| {
                    let p = grid.point(i);
                    if (p[0] - 0.5) * (p[1] - 0.5) > 0.0 {
                        1.0
                    } else {
                        -1.0
                    }
                })
                .collect()
        }
        RhsKind::RandomEigenMix => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_eigen_mix(&SineBasis::new(&grid.dims), &mut rng)
        }
    }
}
