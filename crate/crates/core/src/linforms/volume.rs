use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::system::AffineSystem;
use crate::error::{invalid, Result};

pub const MIN_SAMPLES: u64 = 1_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
    pub hits: u64,
}

/// Monte Carlo volume of `{x in [-N, N]^d : psi_i(x) > 0 for all i}`.
pub fn beta_infinity_mc(system: &AffineSystem, n: u64, samples: u64, seed: u64) -> Result<VolumeEstimate> {
    if samples < MIN_SAMPLES {
        return invalid(format!("need at least {MIN_SAMPLES} samples, got {samples}"));
    }
    if n == 0 {
        return invalid("box half-width N must be positive");
    }
    let d = system.dimension();
    let forms: Vec<(Vec<f64>, f64)> = system
        .forms()
        .iter()
        .map(|f| {
            let lin = f.linear.iter().map(|a| a.to_f64().unwrap_or(f64::NAN)).collect();
            (lin, f.constant.to_f64().unwrap_or(f64::NAN))
        })
        .collect();
    let half = n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; d];
    let mut hits = 0u64;
    for _ in 0..samples {
        for v in x.iter_mut() {
            *v = rng.random_range(-half..half);
        }
        let inside = forms.iter().all(|(lin, c)| {
            let v: f64 = lin.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() + c;
            v > 0.0
        });
        hits += inside as u64;
    }
    let box_volume = (2.0 * half).powi(d as i32);
    let frac = hits as f64 / samples as f64;
    Ok(VolumeEstimate {
        estimate: box_volume * frac,
        std_error: box_volume * (frac * (1.0 - frac) / samples as f64).sqrt(),
        samples,
        hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_line() {
        let s = AffineSystem::from_rows(&[(&[1], 0)]).unwrap();
        let e = beta_infinity_mc(&s, 1000, 100_000, 1).unwrap();
        assert!((e.estimate - 1000.0).abs() <= 3.0 * e.std_error, "{e:?}");
    }

    #[test]
    fn deterministic_given_seed() {
        let s = AffineSystem::from_rows(&[(&[1, 1], 0), (&[1, -1], 0)]).unwrap();
        let a = beta_infinity_mc(&s, 10, 5_000, 42).unwrap();
        let b = beta_infinity_mc(&s, 10, 5_000, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn positive_orthant_sanity() {
        let s = AffineSystem::from_rows(&[(&[1, 0], 0), (&[0, 1], 0), (&[2, 3], 1)]).unwrap();
        let e = beta_infinity_mc(&s, 50, 20_000, 3).unwrap();
        assert!(e.estimate >= 50.0f64.powi(2) * 0.95);
    }

    #[test]
    fn rejects_few_samples() {
        let s = AffineSystem::from_rows(&[(&[1], 0)]).unwrap();
        assert!(beta_infinity_mc(&s, 10, 999, 0).is_err());
    }
}
