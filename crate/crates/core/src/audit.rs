//! Seeded randomized audits of the neighborhood constructions in
//! [`crate::local`]. Each audit draws random instances, draws random
//! measures, and checks that every measure satisfying the hypothesis of an
//! inclusion also satisfies its conclusion. One failure is a counterexample.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cover::Cover;
use crate::error::Result;
use crate::local::{
    f_witness, in_n, in_o, in_p_mue, in_p_system, in_p_upper, refine_to_o, retraction_path,
    separating_functions, shrink_basis, DisjointSystem, TestFunctionFamily,
};
use crate::metric::{PointCloud, Subset};
use crate::sampling;
use crate::thickening::ThickeningSpec;
use crate::transport::{convex_combination, DiscreteMeasure};

const LIPSCHITZ_SLACK: f64 = 1e-9;
const ENDPOINT_TOL: f64 = 1e-12;
const COVER_RADIUS: f64 = 0.9;

/// Trial counts and the optional fixed `ε`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditConfig {
    pub seed: u64,
    pub instances: usize,
    pub trials: usize,
    pub convexity_trials: usize,
    pub witness_instances: usize,
    pub retraction_instances: usize,
    pub path_steps: usize,
    pub eps: Option<f64>,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            seed: 0,
            instances: 10,
            trials: 500,
            convexity_trials: 1000,
            witness_instances: 500,
            retraction_instances: 200,
            path_steps: 8,
            eps: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub check: String,
    pub pass: bool,
    pub trials: usize,
    /// Trials in which the hypothesis held, so the conclusion was tested.
    pub hits: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl AuditReport {
    fn new(check: &str) -> Self {
        AuditReport {
            check: check.into(),
            pass: true,
            trials: 0,
            hits: 0,
            counterexample: None,
            note: None,
        }
    }

    fn record(
        &mut self,
        hypothesis: bool,
        conclusion: impl FnOnce() -> bool,
        describe: impl FnOnce() -> String,
    ) {
        self.trials += 1;
        if !hypothesis {
            return;
        }
        self.hits += 1;
        if self.pass && !conclusion() {
            self.pass = false;
            self.counterexample = Some(describe());
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.record(true, || ok, describe);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditSuite {
    pub config: AuditConfig,
    pub reports: Vec<AuditReport>,
}

impl AuditSuite {
    pub fn pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    pub fn report(&self, check: &str) -> Option<&AuditReport> {
        self.reports.iter().find(|r| r.check == check)
    }
}

/// A random ground space with a diameter cover, a base measure and a
/// disjoint system around it.
#[derive(Clone, Debug)]
pub struct Instance {
    pub spec: ThickeningSpec,
    pub sys: DisjointSystem,
    pub eps: f64,
}

fn weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

fn measure(points: &[usize], w: &[f64]) -> DiscreteMeasure {
    DiscreteMeasure::new(points.iter().copied().zip(w.iter().copied()))
        .expect("positive normalized weights")
}

fn random_nonempty_subset(rng: &mut ChaCha8Rng, s: &Subset) -> Vec<usize> {
    let mut pick: Vec<usize> = s
        .indices()
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    if pick.is_empty() {
        pick.push(*s.indices().choose(rng).expect("sets are non-empty"));
    }
    pick
}

pub fn random_instance(rng: &mut ChaCha8Rng, eps: Option<f64>) -> Instance {
    let n = rng.gen_range(8..=12);
    let pts = (0..n)
        .map(|_| vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)])
        .collect();
    let space = PointCloud::new(pts)
        .expect("finite coordinates")
        .to_metric();
    let spec = ThickeningSpec::new(
        space,
        Cover::diameter(COVER_RADIUS).expect("positive radius"),
    )
    .expect("valid cover");
    let k = rng.gen_range(1..=3);
    let mut support = Subset::singleton(rng.gen_range(0..n));
    for _ in 0..20 {
        if support.len() == k {
            break;
        }
        let grown = support.with(rng.gen_range(0..n));
        if spec
            .cover
            .contains_set(&spec.space, &grown)
            .expect("indices in range")
        {
            support = grown;
        }
    }
    let eta = measure(support.indices(), &weights(rng, support.len()));
    let radius = rng.gen_range(0.05..0.5);
    let sys = DisjointSystem::balls(&spec, eta, radius).expect("balls fall back to singletons");
    let eps = eps.unwrap_or_else(|| rng.gen_range(0.05..0.5));
    Instance { spec, sys, eps }
}

/// Mass of `base` spread at random over each atom's own set.
fn redistribute(rng: &mut ChaCha8Rng, base: &DiscreteMeasure, sets: &[Subset]) -> DiscreteMeasure {
    let mut atoms = Vec::new();
    for (&(_, p), set) in base.atoms().iter().zip(sets) {
        let pick = random_nonempty_subset(rng, set);
        let w = weights(rng, pick.len());
        atoms.extend(pick.into_iter().zip(w).map(|(x, wx)| (x, p * wx)));
    }
    DiscreteMeasure::new(atoms).expect("mass preserved")
}

/// A random measure whose support, together with `core`, stays inside a
/// cover element.
fn noise(rng: &mut ChaCha8Rng, spec: &ThickeningSpec, core: &Subset) -> DiscreteMeasure {
    let mut region = core.clone();
    for _ in 0..4 {
        let grown = region.with(rng.gen_range(0..spec.space.len()));
        if spec
            .cover
            .contains_set(&spec.space, &grown)
            .expect("indices in range")
        {
            region = grown;
        }
    }
    let pick = random_nonempty_subset(rng, &region);
    let w = weights(rng, pick.len());
    measure(&pick, &w)
}

/// `(1 - s) · redistribute(base) + s · noise`, a member of the thickening.
fn nearby(
    rng: &mut ChaCha8Rng,
    spec: &ThickeningSpec,
    sys: &DisjointSystem,
    s: f64,
) -> DiscreteMeasure {
    let core = redistribute(rng, sys.base(), sys.sets());
    let region = core.support().union(sys.union());
    let rho = noise(rng, spec, &region);
    convex_combination(s.clamp(0.0, 1.0), &core, &rho).expect("valid weights")
}

fn describe(zeta: &DiscreteMeasure, sys: &DisjointSystem, eps: f64) -> String {
    let sets: Vec<String> = sys.sets().iter().map(|s| s.to_string()).collect();
    format!(
        "base {} sets [{}] eps {eps} measure {}",
        sys.base(),
        sets.join(", "),
        zeta
    )
}

fn sub_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = sampling::rng(seed);
    rng.set_stream(stream);
    rng
}

fn empty_note(eps: f64) -> Option<String> {
    (eps <= 0.0)
        .then(|| "empty neighborhood: strict inequality with eps = 0 admits no measure".to_string())
}

/// Every `ζ ∈ N(ν, 𝒱, δ)` lies in `N(η, 𝒰, ε)`.
pub fn audit_shrink_basis(cfg: &AuditConfig) -> Result<AuditReport> {
    let mut rep = AuditReport::new("shrink_basis");
    let mut rng = sub_rng(cfg.seed, 1);
    for _ in 0..cfg.instances {
        let inst = random_instance(&mut rng, cfg.eps);
        let s = rng.gen_range(0.0..1.0) * inst.eps;
        let nu = nearby(&mut rng, &inst.spec, &inst.sys, s);
        if !in_n(&inst.sys, inst.eps, &nu) {
            rep.note = empty_note(inst.eps);
            rep.trials += cfg.trials;
            continue;
        }
        let (v, delta) = shrink_basis(&inst.spec, &inst.sys, inst.eps, &nu)?;
        for _ in 0..cfg.trials {
            let s = rng.gen_range(0.0..3.0) * delta;
            let zeta = nearby(&mut rng, &inst.spec, &v, s);
            rep.record(
                in_n(&v, delta, &zeta),
                || in_n(&inst.sys, inst.eps, &zeta),
                || describe(&zeta, &inst.sys, inst.eps),
            );
        }
    }
    Ok(rep)
}

/// `O(η, f, g, ε) ⊆ N(η, 𝒰, ε)` for the separating indicators.
pub fn audit_separating_functions(cfg: &AuditConfig) -> Result<AuditReport> {
    let mut rep = AuditReport::new("separating_functions");
    let mut rng = sub_rng(cfg.seed, 2);
    for _ in 0..cfg.instances {
        let inst = random_instance(&mut rng, cfg.eps);
        let fam = separating_functions(&inst.spec, &inst.sys);
        for _ in 0..cfg.trials {
            let s = rng.gen_range(0.0..2.0) * inst.eps;
            let nu = nearby(&mut rng, &inst.spec, &inst.sys, s);
            rep.record(
                in_o(inst.sys.base(), &fam, inst.eps, &nu),
                || in_n(&inst.sys, inst.eps, &nu),
                || describe(&nu, &inst.sys, inst.eps),
            );
        }
        rep.note = rep.note.take().or_else(|| empty_note(inst.eps));
    }
    Ok(rep)
}

/// `N(η, 𝒰, δ) ⊆ O(η, h, ε)` for random test functions.
pub fn audit_refine_to_o(cfg: &AuditConfig) -> Result<AuditReport> {
    let mut rep = AuditReport::new("refine_to_O");
    let mut rng = sub_rng(cfg.seed, 3);
    for _ in 0..cfg.instances {
        let inst = random_instance(&mut rng, cfg.eps);
        let n = inst.spec.space.len();
        let k = rng.gen_range(1..=3);
        let fam = TestFunctionFamily::new(
            (0..k)
                .map(|_| (0..n).map(|_| rng.gen_range(-2.0..=3.0)).collect())
                .collect(),
        )?;
        let eta = inst.sys.base().clone();
        let (u, delta) = refine_to_o(&inst.spec, &eta, &fam, inst.eps)?;
        for _ in 0..cfg.trials {
            let s = rng.gen_range(0.0..3.0) * delta;
            let nu = nearby(&mut rng, &inst.spec, &u, s);
            rep.record(
                in_n(&u, delta, &nu),
                || in_o(&eta, &fam, inst.eps, &nu),
                || describe(&nu, &u, delta),
            );
        }
        rep.note = rep.note.take().or_else(|| empty_note(inst.eps));
    }
    Ok(rep)
}

/// Convex combinations stay in `P^Y` and in `P(μ, 𝒰, ε)`.
pub fn audit_convexity(cfg: &AuditConfig) -> Result<Vec<AuditReport>> {
    let mut upper = AuditReport::new("convexity_P_upper");
    let mut pmue = AuditReport::new("convexity_P_mue");
    let mut rng = sub_rng(cfg.seed, 4);
    for _ in 0..cfg.convexity_trials {
        let inst = random_instance(&mut rng, cfg.eps);
        let y = inst.sys.union().clone();
        let draw = |rng: &mut ChaCha8Rng| {
            let pick = random_nonempty_subset(rng, &y);
            let w = weights(rng, pick.len());
            measure(&pick, &w)
        };
        let (a, b) = (draw(&mut rng), draw(&mut rng));
        let t = rng.gen_range(0.0..=1.0);
        let c = convex_combination(t, &a, &b)?;
        upper.check(in_p_upper(&c, &y) && inst.spec.member(&c), || {
            format!("Y {y} t {t} {a} {b}")
        });

        let draw_p = |rng: &mut ChaCha8Rng| {
            for _ in 0..32 {
                let nu = pmue_candidate(rng, &inst);
                if in_p_mue(&inst.sys, inst.eps, &nu) {
                    return nu;
                }
            }
            inst.sys.base().clone()
        };
        let (a, b) = (draw_p(&mut rng), draw_p(&mut rng));
        let t = rng.gen_range(0.0..=1.0);
        let c = convex_combination(t, &a, &b)?;
        pmue.check(in_p_mue(&inst.sys, inst.eps, &c), || {
            format!("t {t} {a} {b}; {}", describe(&c, &inst.sys, inst.eps))
        });
    }
    if cfg.eps.is_some_and(|e| e <= 0.0) {
        pmue.note = Some("eps = 0 leaves only exact block masses".into());
    }
    Ok(vec![upper, pmue])
}

/// A measure supported on `∪𝒰` whose block masses are a random convex
/// perturbation of `μ(U_i)`.
fn pmue_candidate(rng: &mut ChaCha8Rng, inst: &Instance) -> DiscreteMeasure {
    let m: Vec<f64> = inst.sys.base().atoms().iter().map(|a| a.1).collect();
    let w = weights(rng, m.len());
    let s = rng.gen_range(0.0..1.0) * inst.eps.min(1.0);
    let block: Vec<f64> = m
        .iter()
        .zip(&w)
        .map(|(mi, wi)| (1.0 - s) * mi + s * wi)
        .collect();
    let mut atoms = Vec::new();
    for (set, b) in inst.sys.sets().iter().zip(block) {
        let pick = random_nonempty_subset(rng, set);
        let split = weights(rng, pick.len());
        atoms.extend(pick.into_iter().zip(split).map(|(x, p)| (x, b * p)));
    }
    DiscreteMeasure::new(atoms).expect("block masses sum to one")
}

fn p_system_member(rng: &mut ChaCha8Rng, inst: &Instance) -> DiscreteMeasure {
    let s = rng.gen_range(0.0..0.9);
    nearby(rng, &inst.spec, &inst.sys, s)
}

/// The witness lies in `F(ζ)` with exact block masses.
pub fn audit_witness(cfg: &AuditConfig) -> Result<AuditReport> {
    let mut rep = AuditReport::new("F_witness");
    let mut rng = sub_rng(cfg.seed, 5);
    for _ in 0..cfg.witness_instances {
        let inst = random_instance(&mut rng, cfg.eps);
        let zeta = p_system_member(&mut rng, &inst);
        debug_assert!(in_p_system(&zeta, inst.sys.sets()));
        let w = f_witness(&inst.sys, &zeta)?;
        let exact = inst
            .sys
            .sets()
            .iter()
            .zip(inst.sys.base().atoms())
            .all(|(u, &(_, m))| (w.measure_of_set(u) - m).abs() <= ENDPOINT_TOL);
        let ok =
            exact && w.support().is_subset_of(&zeta.support()) && in_p_mue(&inst.sys, inst.eps, &w);
        rep.check(ok, || {
            format!("witness {w} for {}", describe(&zeta, &inst.sys, inst.eps))
        });
    }
    Ok(rep)
}

/// Membership along both stages, the endpoint, the fixed base point, and
/// the Lipschitz bound along each straight segment.
pub fn audit_retraction(cfg: &AuditConfig) -> Result<Vec<AuditReport>> {
    let mut path_rep = AuditReport::new("retraction_path");
    let mut lip = AuditReport::new("straight_line_lipschitz");
    let mut rng = sub_rng(cfg.seed, 6);
    let steps = cfg.path_steps.max(1);
    for _ in 0..cfg.retraction_instances {
        let inst = random_instance(&mut rng, cfg.eps);
        let mu = inst.sys.base();
        let zeta = p_system_member(&mut rng, &inst);
        let radius = inst.spec.distance(&zeta, mu)? + 1.0;
        let path = retraction_path(&inst.spec, &inst.sys, &zeta, steps, Some(radius))?;
        let ok = path.stage_one.iter().all(|p| inst.spec.member(p))
            && path
                .stage_two
                .iter()
                .all(|p| in_p_mue(&inst.sys, inst.eps, p))
            && path.end().approx_eq(mu, ENDPOINT_TOL);
        path_rep.check(ok, || {
            format!("path from {}", describe(&zeta, &inst.sys, inst.eps))
        });
        let fixed = retraction_path(&inst.spec, &inst.sys, mu, steps, None)?;
        path_rep.check(
            fixed.points().all(|p| p.approx_eq(mu, ENDPOINT_TOL)),
            || format!("base point moved: {mu}"),
        );

        for stage in [&path.stage_one, &path.stage_two] {
            let span = inst.spec.distance(&stage[0], &stage[steps])?;
            for i in 0..=steps {
                for j in (i + 1)..=steps {
                    let d = inst.spec.distance(&stage[i], &stage[j])?;
                    let bound = (j - i) as f64 / steps as f64 * span + LIPSCHITZ_SLACK;
                    lip.check(d <= bound, || {
                        format!(
                            "d = {d} > {bound} between steps {i} and {j} from {}",
                            stage[0]
                        )
                    });
                }
            }
        }
    }
    Ok(vec![path_rep, lip])
}

/// Overlapping sets must be rejected when the system is built.
pub fn audit_disjointness_guard(cfg: &AuditConfig) -> AuditReport {
    let mut rep = AuditReport::new("overlap_rejected");
    let mut rng = sub_rng(cfg.seed, 7);
    for _ in 0..cfg.instances {
        let inst = random_instance(&mut rng, cfg.eps);
        let (a, b) = (
            rng.gen_range(0..inst.spec.space.len()),
            rng.gen_range(0..inst.spec.space.len()),
        );
        if a == b {
            continue;
        }
        let eta = measure(&[a, b], &[0.5, 0.5]);
        let shared = Subset::new(vec![a, b]);
        let rejected = DisjointSystem::new(&inst.spec, eta, vec![shared.clone(), shared]).is_err();
        rep.check(rejected, || {
            format!("overlapping sets around {a}, {b} accepted")
        });
    }
    rep
}

pub fn run_all(cfg: &AuditConfig) -> Result<AuditSuite> {
    let mut reports = vec![
        audit_shrink_basis(cfg)?,
        audit_separating_functions(cfg)?,
        audit_refine_to_o(cfg)?,
    ];
    reports.extend(audit_convexity(cfg)?);
    reports.push(audit_witness(cfg)?);
    reports.extend(audit_retraction(cfg)?);
    reports.push(audit_disjointness_guard(cfg));
    Ok(AuditSuite {
        config: cfg.clone(),
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> AuditConfig {
        AuditConfig {
            seed: 11,
            instances: 3,
            trials: 60,
            convexity_trials: 100,
            witness_instances: 40,
            retraction_instances: 15,
            path_steps: 4,
            eps: None,
        }
    }

    #[test]
    fn small_suite_passes_with_hits() {
        let suite = run_all(&small()).unwrap();
        assert!(suite.pass(), "{:#?}", suite.reports);
        for r in &suite.reports {
            assert!(r.hits > 0, "{} never tested its conclusion", r.check);
        }
    }

    #[test]
    fn suite_is_deterministic() {
        assert_eq!(run_all(&small()).unwrap(), run_all(&small()).unwrap());
    }

    #[test]
    fn zero_eps_degrades_gracefully() {
        let suite = run_all(&AuditConfig {
            eps: Some(0.0),
            ..small()
        })
        .unwrap();
        assert!(suite.pass(), "{:#?}", suite.reports);
        let r = suite.report("shrink_basis").unwrap();
        assert_eq!(r.hits, 0);
        assert!(r.note.as_deref().unwrap().contains("empty neighborhood"));
        assert_eq!(suite.report("separating_functions").unwrap().hits, 0);
    }

    #[test]
    fn instances_are_valid() {
        let mut rng = sampling::rng(5);
        for _ in 0..50 {
            let inst = random_instance(&mut rng, None);
            assert!(inst.spec.member(inst.sys.base()));
            let nu = nearby(&mut rng, &inst.spec, &inst.sys, 0.5);
            assert!(inst.spec.member(&nu));
            assert!(in_p_system(
                &p_system_member(&mut rng, &inst),
                inst.sys.sets()
            ));
        }
    }
}
