//! Desk-scale experiments: the dominant-cycle probe on noisy circle
//! samples and the small-scale homology probe of sampled thickenings.

use serde::Serialize;

use crate::complex::vietoris_complex;
use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::homology::{betti_numbers, build_vr_filtration, persistence, PersistenceDiagram};
use crate::metric::{FiniteMetricSpace, PointCloud};
use crate::thickening::{sample_thickening_with_cap, ThickeningSpec, DEFAULT_SIZE_CAP};

/// Persistence over the full scale range of `space`.
pub fn full_vr_persistence(
    space: &FiniteMetricSpace,
    max_dim: usize,
) -> Result<PersistenceDiagram> {
    let r_max = space.space_diameter() + 1.0;
    persistence(&build_vr_filtration(space, max_dim, r_max)?)
}

/// H1 bar lengths, longest first. Essential bars have infinite length.
pub fn h1_lengths(d: &PersistenceDiagram) -> Vec<f64> {
    let mut lengths: Vec<f64> = d.bars(1).iter().map(|&(b, e)| e - b).collect();
    lengths.sort_by(|a, b| b.total_cmp(a));
    lengths
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatschevThresholds {
    pub long: f64,
    pub short: f64,
}

impl Default for LatschevThresholds {
    fn default() -> Self {
        LatschevThresholds {
            long: 0.5,
            short: 0.2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatschevReport {
    pub n: usize,
    pub h1_lengths: Vec<f64>,
    /// Birth and death of the longest H1 bar: the empirical window of
    /// scales where the sample's complex looks like a circle.
    pub dominant_window: Option<(f64, f64)>,
    pub long_bars: usize,
    pub largest_other: f64,
    pub pass: bool,
    pub insufficient_sampling: bool,
}

/// Exactly one H1 bar longer than `long` and all others shorter than `short`.
pub fn latschev_probe(
    cloud: &PointCloud,
    thresholds: &LatschevThresholds,
) -> Result<LatschevReport> {
    let diagram = full_vr_persistence(&cloud.to_metric(), 1)?;
    let lengths = h1_lengths(&diagram);
    let long_bars = lengths.iter().filter(|&&l| l > thresholds.long).count();
    let largest_other = lengths.get(1).copied().unwrap_or(0.0);
    let dominant_window = diagram
        .bars(1)
        .iter()
        .copied()
        .max_by(|a, b| (a.1 - a.0).total_cmp(&(b.1 - b.0)));
    let pass = long_bars == 1 && largest_other < thresholds.short;
    Ok(LatschevReport {
        n: cloud.len(),
        h1_lengths: lengths,
        dominant_window,
        long_bars,
        largest_other,
        pass,
        insufficient_sampling: long_bars == 0,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeConfig {
    pub r: f64,
    pub grid_ms: Vec<usize>,
    pub max_support: usize,
    pub max_dim: usize,
    /// The window is `[lo · ε, hi · ε]` where `ε` is the sample's
    /// nearest-neighbor radius.
    pub window: (f64, f64),
    pub cap: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            r: 1.2,
            grid_ms: vec![2, 3, 4],
            max_support: 2,
            max_dim: 1,
            window: (1.05, 1.5),
            cap: DEFAULT_SIZE_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeLevel {
    pub grid_m: usize,
    pub measures: usize,
    pub eps_net: f64,
    pub window: (f64, f64),
    pub window_betti: Vec<usize>,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub r: f64,
    pub vr_betti: Vec<usize>,
    pub levels: Vec<ProbeLevel>,
    pub pass: bool,
    /// The last two grid levels report the same window Betti numbers.
    pub stabilized: bool,
}

/// Compares the Betti numbers of `VR(X; r)` with the features of the
/// sampled thickening alive across a small-scale window, per grid level.
pub fn thickening_probe(space: &FiniteMetricSpace, cfg: &ProbeConfig) -> Result<ProbeReport> {
    let (lo, hi) = cfg.window;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidParameter(format!(
            "window factors must satisfy 0 < lo < hi, got ({lo}, {hi})"
        )));
    }
    let cover = Cover::diameter(cfg.r)?;
    let vr = vietoris_complex(space, &cover, cfg.max_dim + 1)?;
    let vr_betti = betti_numbers(&vr, cfg.max_dim);
    let spec = ThickeningSpec::new(space.clone(), cover)?;
    let mut levels = Vec::with_capacity(cfg.grid_ms.len());
    for &grid_m in &cfg.grid_ms {
        let sample = sample_thickening_with_cap(&spec, grid_m, cfg.max_support, cfg.cap)?;
        let eps_net = sample.nearest_neighbor_radius();
        let window = (lo * eps_net, hi * eps_net);
        let betti = if eps_net > 0.0 {
            let diagram = persistence(&build_vr_filtration(
                sample.metric(),
                cfg.max_dim,
                window.1 * (1.0 + 1e-9),
            )?)?;
            (0..=cfg.max_dim)
                .map(|k| diagram.alive_over(k, window.0, window.1))
                .collect()
        } else {
            // a single measure
            betti_numbers(
                &vietoris_complex(sample.metric(), &Cover::diameter(1.0)?, cfg.max_dim + 1)?,
                cfg.max_dim,
            )
        };
        levels.push(ProbeLevel {
            grid_m,
            measures: sample.len(),
            eps_net,
            window,
            agrees: betti == vr_betti,
            window_betti: betti,
        });
    }
    let pass = levels.iter().all(|l| l.agrees);
    let stabilized = levels.len() < 2
        || levels[levels.len() - 2].window_betti == levels[levels.len() - 1].window_betti;
    Ok(ProbeReport {
        r: cfg.r,
        vr_betti,
        levels,
        pass,
        stabilized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{hexagon, noisy_circle};

    #[test]
    fn hexagon_latschev() {
        let rep = latschev_probe(&hexagon(), &LatschevThresholds::default()).unwrap();
        assert!(rep.pass);
        let (b, d) = rep.dominant_window.unwrap();
        assert!((b - 1.0).abs() < 1e-9 && (d - 3f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn three_points_are_flagged() {
        let rep = latschev_probe(
            &noisy_circle(3, 0.0, 1).unwrap(),
            &LatschevThresholds::default(),
        )
        .unwrap();
        assert!(!rep.pass && rep.insufficient_sampling);
    }

    #[test]
    fn hexagon_probe_agrees() {
        let space = hexagon().to_metric();
        let rep = thickening_probe(
            &space,
            &ProbeConfig {
                grid_ms: vec![1, 2],
                ..ProbeConfig::default()
            },
        )
        .unwrap();
        assert_eq!(rep.vr_betti, vec![1, 1]);
        assert_eq!(rep.levels[0].measures, 6);
        assert_eq!(rep.levels[1].measures, 12);
        assert!(rep.pass, "{rep:#?}");
    }

    #[test]
    fn single_support_is_the_ground_space() {
        let space = hexagon().to_metric();
        let cfg = ProbeConfig {
            grid_ms: vec![3],
            max_support: 1,
            ..ProbeConfig::default()
        };
        let rep = thickening_probe(&space, &cfg).unwrap();
        assert_eq!(rep.levels[0].measures, 6);
    }
}
