//! Seeded point-cloud generators.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::metric::{regular_polygon, PointCloud};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` points on the unit circle at uniform angles, pushed radially by
/// Gaussian noise of standard deviation `noise` truncated at `3 noise`.
pub fn noisy_circle(n: usize, noise: f64, seed: u64) -> Result<PointCloud> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise must be a finite non-negative number, got {noise}"
        )));
    }
    let mut rng = rng(seed);
    let normal = (noise > 0.0).then(|| Normal::new(0.0, noise).expect("positive finite sigma"));
    let points = (0..n)
        .map(|_| {
            let theta = rng.gen_range(0.0..TAU);
            let dr = match &normal {
                Some(g) => loop {
                    let x: f64 = g.sample(&mut rng);
                    if x.abs() <= 3.0 * noise {
                        break x;
                    }
                },
                None => 0.0,
            };
            let r = 1.0 + dr;
            vec![r * theta.cos(), r * theta.sin()]
        })
        .collect();
    PointCloud::new(points)
}

/// `k × k` grid on the flat torus `(R/Z)^2` embedded in `R^4` as a product
/// of two circles of circumference one.
pub fn torus_grid(k: usize) -> Result<PointCloud> {
    if k == 0 {
        return Err(Error::InvalidParameter("grid side must be positive".into()));
    }
    let radius = 1.0 / TAU;
    let mut points = Vec::with_capacity(k * k);
    for a in 0..k {
        for b in 0..k {
            let (s, t) = (TAU * a as f64 / k as f64, TAU * b as f64 / k as f64);
            points.push(vec![
                radius * s.cos(),
                radius * s.sin(),
                radius * t.cos(),
                radius * t.sin(),
            ]);
        }
    }
    PointCloud::new(points)
}

/// Regular hexagon with unit circumradius.
pub fn hexagon() -> PointCloud {
    regular_polygon(6, 1.0)
}

/// Moves every coordinate by an independent uniform amount in `[-delta, delta]`.
pub fn perturb(cloud: &PointCloud, delta: f64, seed: u64) -> Result<PointCloud> {
    let mut rng = rng(seed);
    let points = cloud
        .points()
        .iter()
        .map(|p| {
            p.iter()
                .map(|&x| {
                    x + if delta > 0.0 {
                        rng.gen_range(-delta..=delta)
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    PointCloud::new(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_is_seeded_and_banded() {
        let a = noisy_circle(50, 0.05, 7).unwrap();
        assert_eq!(a, noisy_circle(50, 0.05, 7).unwrap());
        assert_ne!(a, noisy_circle(50, 0.05, 8).unwrap());
        for p in a.points() {
            let r = p[0].hypot(p[1]);
            assert!((r - 1.0).abs() <= 0.15 + 1e-12);
        }
        for p in noisy_circle(10, 0.0, 1).unwrap().points() {
            assert!((p[0].hypot(p[1]) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn torus_grid_neighbors() {
        let t = torus_grid(4).unwrap();
        assert_eq!(t.len(), 16);
        let m = t.to_metric();
        let step = 2.0 * (1.0 / TAU) * (std::f64::consts::PI / 4.0).sin();
        assert!((m.d(0, 1) - step).abs() < 1e-12);
        assert!((m.d(0, 4) - step).abs() < 1e-12);
    }

    #[test]
    fn perturbation_is_bounded() {
        let c = hexagon();
        let p = perturb(&c, 0.02, 3).unwrap();
        for (a, b) in c.points().iter().zip(p.points()) {
            assert!(a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 0.02));
        }
    }
}
