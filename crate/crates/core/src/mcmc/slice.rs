use crate::error::{Error, Result};
use rand::Rng;

/// Maximum number of width steps taken while stepping out.
const MAX_STEPS: usize = 64;
/// Guard on shrinkage rejections; the interval halves often enough that this
/// is never reached for a density finite at the current point.
const MAX_SHRINK: usize = 500;

/// One univariate slice-sampling update with stepping out and shrinkage.
///
/// `log_density` may return `-inf` outside its support; proposals are also
/// confined to `[lower, upper]`, so the result always lies inside the bounds.
pub fn slice_sample_1d<F, R>(mut log_density: F, current: f64, width: f64, lower: f64, upper: f64, rng: &mut R) -> Result<f64>
where
    F: FnMut(f64) -> f64,
    R: Rng + ?Sized,
{
    if !(lower < upper) {
        return Err(Error::domain(format!("slice bounds need lower < upper, got [{lower}, {upper}]")));
    }
    if !(current >= lower && current <= upper) {
        return Err(Error::domain(format!("slice start {current} outside [{lower}, {upper}]")));
    }
    let f0 = log_density(current);
    if !f0.is_finite() {
        return Err(Error::domain(format!("log density is not finite at the current point {current}")));
    }
    Ok(slice_step(&mut log_density, current, f0, width, lower, upper, rng))
}

/// Unchecked variant for hot loops; `f0` must be `log_density(current)`.
pub(crate) fn slice_step<F, R>(log_density: &mut F, current: f64, f0: f64, width: f64, lower: f64, upper: f64, rng: &mut R) -> f64
where
    F: FnMut(f64) -> f64,
    R: Rng + ?Sized,
{
    let level = f0 + rng.random::<f64>().ln();
    let w = if width > 0.0 && width.is_finite() { width } else { 1.0 };

    let mut left = current - w * rng.random::<f64>();
    let mut right = left + w;
    let mut j = (MAX_STEPS as f64 * rng.random::<f64>()) as usize;
    let mut k = MAX_STEPS - 1 - j;
    while j > 0 && left > lower && log_density(left) > level {
        left -= w;
        j -= 1;
    }
    while k > 0 && right < upper && log_density(right) > level {
        right += w;
        k -= 1;
    }
    left = left.max(lower);
    right = right.min(upper);

    for _ in 0..MAX_SHRINK {
        let x = left + rng.random::<f64>() * (right - left);
        if log_density(x) > level {
            return x;
        }
        if x < current {
            left = x;
        } else {
            right = x;
        }
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::normal;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn standard_normal_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut x = 0.0;
        let n = 100_000;
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            x = slice_sample_1d(|v| -0.5 * v * v, x, 2.0, f64::NEG_INFINITY, f64::INFINITY, &mut rng).unwrap();
            s1 += x;
            s2 += x * x;
        }
        let mean = s1 / n as f64;
        let var = s2 / n as f64 - mean * mean;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.03, "var {var}");
    }

    #[test]
    fn flat_target_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut x = 0.5;
        let mut draws = Vec::with_capacity(100_000);
        for _ in 0..100_000 {
            x = slice_sample_1d(|_| 0.0, x, 0.3, 0.0, 1.0, &mut rng).unwrap();
            draws.push(x);
        }
        draws.sort_by(f64::total_cmp);
        let n = draws.len() as f64;
        let ks = draws.iter().enumerate().map(|(i, &v)| ((i + 1) as f64 / n - v).abs().max((v - i as f64 / n).abs())).fold(0.0, f64::max);
        assert!(ks < 0.01, "KS {ks}");
    }

    #[test]
    fn truncated_latent_update_respects_bound() {
        let lower = normal::quantile(0.3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut x = 0.0;
        for _ in 0..20_000 {
            x = slice_sample_1d(|v| normal::ln_pdf(v) - normal::ln_cdf(v), x, 1.0, lower, f64::INFINITY, &mut rng).unwrap();
            assert!(x >= lower);
        }
    }

    #[test]
    fn rejects_non_finite_start() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = slice_sample_1d(|v| if v < 1.0 { f64::NEG_INFINITY } else { 0.0 }, 0.0, 1.0, -5.0, 5.0, &mut rng);
        assert!(r.is_err());
        assert!(slice_sample_1d(|_| 0.0, 0.0, 1.0, 1.0, 0.0, &mut rng).is_err());
    }
}
