//! Neighborhood bases of a metric thickening and the explicit constructions
//! behind its strict strong local contractibility: shrinking a block-mass
//! neighborhood, trading it for test-function neighborhoods and back, the
//! witness selection `ζ ↦ ν ∈ F(ζ)`, and the two-stage retraction path.
//!
//! Every subset of a finite space is treated as open, so "disjoint open
//! neighborhoods" are just disjoint subsets.

use crate::error::{Error, Result};
use crate::metric::Subset;
use crate::thickening::{straight_line_path, ThickeningSpec};
use crate::transport::{convex_combination, DiscreteMeasure};

/// Rounding allowance on block masses in [`in_p_mue`].
pub const BLOCK_TOLERANCE: f64 = 1e-12;

/// A base measure `η = Σ p_i δ_{y_i}` with pairwise disjoint sets `U_i ∋ y_i`
/// whose union lies in one cover element. `sets()[i]` belongs to the `i`-th
/// atom of `η`.
#[derive(Clone, Debug, PartialEq)]
pub struct DisjointSystem {
    base: DiscreteMeasure,
    sets: Vec<Subset>,
    union: Subset,
}

impl DisjointSystem {
    pub fn new(spec: &ThickeningSpec, base: DiscreteMeasure, sets: Vec<Subset>) -> Result<Self> {
        let atoms = base.atoms();
        if sets.len() != atoms.len() {
            return Err(Error::InvalidSystem(format!(
                "{} sets for {} atoms",
                sets.len(),
                atoms.len()
            )));
        }
        for (k, (set, &(y, _))) in sets.iter().zip(atoms).enumerate() {
            set.check_range(spec.space.len())?;
            if !set.contains(y) {
                return Err(Error::InvalidSystem(format!(
                    "U_{k} = {set} does not contain its atom {y}"
                )));
            }
        }
        for a in 0..sets.len() {
            for b in (a + 1)..sets.len() {
                if !sets[a].is_disjoint(&sets[b]) {
                    return Err(Error::InvalidSystem(format!("U_{a} and U_{b} overlap")));
                }
            }
        }
        let union = sets.iter().fold(Subset::default(), |acc, s| acc.union(s));
        if !spec.cover.contains_set(&spec.space, &union)? {
            return Err(Error::InvalidSystem(format!(
                "union {union} is not contained in a cover element"
            )));
        }
        Ok(DisjointSystem { base, sets, union })
    }

    /// `U_i = B(y_i; radius)`, shrunk to singletons
    /// when the balls overlap or leave the cover element.
    pub fn balls(spec: &ThickeningSpec, base: DiscreteMeasure, radius: f64) -> Result<Self> {
        let sets = ball_sets(spec, &base, radius, |_| true)?;
        Self::new(spec, base, sets)
    }

    pub fn base(&self) -> &DiscreteMeasure {
        &self.base
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn union(&self) -> &Subset {
        &self.union
    }

    /// `|η(U_i) - ν(U_i)|` for every `i`.
    pub fn block_gaps(&self, nu: &DiscreteMeasure) -> Vec<f64> {
        self.sets
            .iter()
            .map(|u| (self.base.measure_of_set(u) - nu.measure_of_set(u)).abs())
            .collect()
    }
}

/// Candidate neighborhoods around each atom: points within `radius` of
/// the atom that pass `keep`, restricted so the sets stay disjoint and
/// jointly inside a cover element. Falls back to singletons.
fn ball_sets(
    spec: &ThickeningSpec,
    base: &DiscreteMeasure,
    radius: f64,
    keep: impl Fn(usize) -> bool,
) -> Result<Vec<Subset>> {
    let space = &spec.space;
    let atoms: Vec<usize> = base.atoms().iter().map(|a| a.0).collect();
    let mut sep = f64::INFINITY;
    for (k, &a) in atoms.iter().enumerate() {
        for &b in &atoms[k + 1..] {
            sep = sep.min(space.d(a, b));
        }
    }
    // balls of radius sep/2 around distinct atoms cannot meet
    let rho = radius.min(sep / 2.0);
    let balls: Vec<Subset> = atoms
        .iter()
        .map(|&y| {
            let mut s: Subset = (0..space.len())
                .filter(|&x| x == y || (space.d(x, y) < rho && keep(x)))
                .collect();
            if s.is_empty() {
                s = Subset::singleton(y);
            }
            s
        })
        .collect();
    let union = balls.iter().fold(Subset::default(), |acc, s| acc.union(s));
    if spec.cover.contains_set(space, &union)? {
        Ok(balls)
    } else {
        Ok(atoms.into_iter().map(Subset::singleton).collect())
    }
}

/// Test functions `h_1..h_k` given by their values on the points of `X`,
/// with the bound `M = 1 + max |h_t(x)|`.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunctionFamily {
    functions: Vec<Vec<f64>>,
    bound: f64,
}

impl TestFunctionFamily {
    pub fn new(functions: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(first) = functions.first() {
            if functions.iter().any(|h| h.len() != first.len()) {
                return Err(Error::InvalidParameter(
                    "test functions must share a domain".into(),
                ));
            }
        }
        if functions.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "test functions must be finite".into(),
            ));
        }
        let bound = 1.0
            + functions
                .iter()
                .flatten()
                .fold(0.0f64, |m, x| m.max(x.abs()));
        Ok(TestFunctionFamily { functions, bound })
    }

    pub fn functions(&self) -> &[Vec<f64>] {
        &self.functions
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn integrate(&self, t: usize, mu: &DiscreteMeasure) -> f64 {
        let h = &self.functions[t];
        mu.integrate(|i| h[i])
    }
}

/// `ν ∈ N(η, 𝒰, ε)`: `|η(U_i) - ν(U_i)| < ε` for all `i`. Membership of `ν`
/// in the thickening is the caller's precondition.
pub fn in_n(sys: &DisjointSystem, eps: f64, nu: &DiscreteMeasure) -> bool {
    sys.block_gaps(nu).iter().all(|&g| g < eps)
}

/// `ν ∈ O(η, h_1..h_k, ε)`: `|η(h_t) - ν(h_t)| < ε` for all `t`.
pub fn in_o(
    eta: &DiscreteMeasure,
    fam: &TestFunctionFamily,
    eps: f64,
    nu: &DiscreteMeasure,
) -> bool {
    (0..fam.len()).all(|t| (fam.integrate(t, eta) - fam.integrate(t, nu)).abs() < eps)
}

/// Given `ν ∈ N(η, 𝒰, ε)`, builds disjoint `V_j ∋ a_j` (with `V_j ⊆ U_i`
/// whenever `a_j ∈ U_i`) and `δ = min_i (ε - |η(U_i) - ν(U_i)|) / 2m` so that
/// `N(ν, 𝒱, δ) ⊆ N(η, 𝒰, ε)`. Atoms outside `∪𝒰` get `V_j = {a_j}`.
pub fn shrink_basis(
    spec: &ThickeningSpec,
    sys: &DisjointSystem,
    eps: f64,
    nu: &DiscreteMeasure,
) -> Result<(DisjointSystem, f64)> {
    if !spec.member(nu) {
        return Err(Error::OutsideNeighborhood(
            "ν is not in the thickening".into(),
        ));
    }
    if !in_n(sys, eps, nu) {
        return Err(Error::OutsideNeighborhood(format!("ν ∉ N(η, 𝒰, {eps})")));
    }
    let m = nu.support_len() as f64;
    let slack = sys
        .block_gaps(nu)
        .iter()
        .map(|g| eps - g)
        .fold(f64::INFINITY, f64::min);
    let delta = slack / (2.0 * m);

    let owner = |x: usize| sys.sets.iter().position(|u| u.contains(x));
    let space = &spec.space;
    let atoms: Vec<usize> = nu.atoms().iter().map(|a| a.0).collect();
    let reach = space.space_diameter() + 1.0;
    let balls = ball_sets(spec, nu, reach, |_| true)?;
    let sets: Vec<Subset> = atoms
        .iter()
        .zip(balls)
        .map(|(&a, ball)| match owner(a) {
            Some(i) => ball.intersection(&sys.sets[i]),
            None => Subset::singleton(a),
        })
        .collect();
    let system = match DisjointSystem::new(spec, nu.clone(), sets) {
        Ok(s) => s,
        Err(_) => DisjointSystem::new(
            spec,
            nu.clone(),
            atoms.iter().map(|&a| Subset::singleton(a)).collect(),
        )?,
    };
    Ok((system, delta))
}

/// `f_i = 1_{U_i}` followed by `g_i = 1_{{y_i}}`, so that
/// `O(η, f, g, ε) ⊆ N(η, 𝒰, ε)`.
pub fn separating_functions(spec: &ThickeningSpec, sys: &DisjointSystem) -> TestFunctionFamily {
    let n = spec.space.len();
    let indicator = |s: &dyn Fn(usize) -> bool| {
        (0..n)
            .map(|x| if s(x) { 1.0 } else { 0.0 })
            .collect::<Vec<f64>>()
    };
    let mut functions: Vec<Vec<f64>> = sys
        .sets
        .iter()
        .map(|u| indicator(&|x| u.contains(x)))
        .collect();
    functions.extend(
        sys.base
            .atoms()
            .iter()
            .map(|&(y, _)| indicator(&|x| x == y)),
    );
    TestFunctionFamily {
        functions,
        bound: 2.0,
    }
}

/// Builds `𝒰` and `δ = ε / (M (2n + 1))` with `N(η, 𝒰, δ) ⊆ O(η, h, ε)`.
/// Each `U_i` keeps only points where every `h_t` is within `δ` of `h_t(y_i)`.
pub fn refine_to_o(
    spec: &ThickeningSpec,
    eta: &DiscreteMeasure,
    fam: &TestFunctionFamily,
    eps: f64,
) -> Result<(DisjointSystem, f64)> {
    if !spec.member(eta) {
        return Err(Error::OutsideNeighborhood(
            "η is not in the thickening".into(),
        ));
    }
    if fam
        .functions
        .first()
        .is_some_and(|h| h.len() != spec.space.len())
    {
        return Err(Error::InvalidParameter(
            "test functions must be defined on every point".into(),
        ));
    }
    let n = eta.support_len() as f64;
    let delta = eps / (fam.bound * (2.0 * n + 1.0));
    let reach = spec.space.space_diameter() + 1.0;
    let mut sets = ball_sets(spec, eta, reach, |_| true)?;
    for (set, &(y, _)) in sets.iter_mut().zip(eta.atoms()) {
        *set = set
            .indices()
            .iter()
            .copied()
            .filter(|&x| x == y || fam.functions.iter().all(|h| (h[y] - h[x]).abs() < delta))
            .collect();
    }
    let system = DisjointSystem::new(spec, eta.clone(), sets)?;
    Ok((system, delta))
}

/// `μ ∈ P_U`: the support meets `U`.
pub fn in_p_u(mu: &DiscreteMeasure, u: &Subset) -> bool {
    mu.atoms().iter().any(|a| u.contains(a.0))
}

/// `μ ∈ P^Y`: the support lies inside `Y`.
pub fn in_p_upper(mu: &DiscreteMeasure, y: &Subset) -> bool {
    mu.atoms().iter().all(|a| y.contains(a.0))
}

/// `μ ∈ P_𝒰 = ∩ P_{U_i}`.
pub fn in_p_system(mu: &DiscreteMeasure, sets: &[Subset]) -> bool {
    sets.iter().all(|u| in_p_u(mu, u))
}

/// `ν ∈ P(μ, 𝒰, ε)`: `supp ν ⊆ ∪𝒰` and `|ν(U_i) - μ(U_i)| <= ε` (non-strict,
/// up to [`BLOCK_TOLERANCE`] of rounding).
pub fn in_p_mue(sys: &DisjointSystem, eps: f64, nu: &DiscreteMeasure) -> bool {
    in_p_upper(nu, &sys.union)
        && sys
            .block_gaps(nu)
            .iter()
            .all(|&g| g <= eps + BLOCK_TOLERANCE)
}

/// The explicit element of `F(ζ) = {ν ∈ P(μ, 𝒰, ε) : supp ν ⊆ supp ζ}`:
/// each block mass `m_i` spread uniformly over `supp ζ ∩ U_i`.
pub fn f_witness(sys: &DisjointSystem, zeta: &DiscreteMeasure) -> Result<DiscreteMeasure> {
    let support = zeta.support();
    let mut atoms = Vec::new();
    for (i, (u, &(_, m))) in sys.sets.iter().zip(sys.base.atoms()).enumerate() {
        let hits = support.intersection(u);
        if hits.is_empty() {
            return Err(Error::NotInPSystem(i));
        }
        let share = m / hits.len() as f64;
        atoms.extend(hits.indices().iter().map(|&y| (y, share)));
    }
    DiscreteMeasure::new(atoms)
}

/// The deformation of `ζ` onto `μ`: a straight line from `ζ` to its witness
/// (support never grows) followed by a straight line inside the convex set
/// `P(μ, 𝒰, ε)` to `μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct RetractionPath {
    pub witness: DiscreteMeasure,
    pub stage_one: Vec<DiscreteMeasure>,
    pub stage_two: Vec<DiscreteMeasure>,
}

impl RetractionPath {
    /// Both stages joined, with the shared witness listed once.
    pub fn points(&self) -> impl Iterator<Item = &DiscreteMeasure> {
        self.stage_one.iter().chain(self.stage_two.iter().skip(1))
    }

    pub fn end(&self) -> &DiscreteMeasure {
        self.stage_two
            .last()
            .expect("paths have at least two points")
    }
}

/// Builds the retraction path of `ζ ∈ P_𝒰` (within `radius` of `μ` in the
/// transport metric when a radius is given).
pub fn retraction_path(
    spec: &ThickeningSpec,
    sys: &DisjointSystem,
    zeta: &DiscreteMeasure,
    steps: usize,
    radius: Option<f64>,
) -> Result<RetractionPath> {
    if let Some(r) = radius {
        let d = spec.distance(zeta, &sys.base)?;
        if !(d < r) {
            return Err(Error::OutsideNeighborhood(format!(
                "d_W(ζ, μ) = {d} is not below {r}"
            )));
        }
    }
    let witness = f_witness(sys, zeta)?;
    let stage_one = straight_line_path(spec, zeta, &witness, steps)?;
    let stage_two = (0..=steps)
        .map(|i| convex_combination(i as f64 / steps as f64, &witness, &sys.base))
        .collect::<Result<Vec<_>>>()?;
    Ok(RetractionPath {
        witness,
        stage_one,
        stage_two,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::Cover;
    use crate::metric::PointCloud;
    use crate::transport::dirac;

    /// Points 0..=4 on a line at 0, 0.1, 0.2, 1.0, 1.1 and a far point 5 at 3.0.
    fn spec() -> ThickeningSpec {
        let pts = [0.0, 0.1, 0.2, 1.0, 1.1, 3.0]
            .iter()
            .map(|&x| vec![x])
            .collect();
        ThickeningSpec::new(
            PointCloud::new(pts).unwrap().to_metric(),
            Cover::diameter(1.5).unwrap(),
        )
        .unwrap()
    }

    fn m(atoms: &[(usize, f64)]) -> DiscreteMeasure {
        DiscreteMeasure::new(atoms.iter().copied()).unwrap()
    }

    fn two_block() -> (ThickeningSpec, DisjointSystem) {
        let spec = spec();
        let sys = DisjointSystem::new(
            &spec,
            m(&[(0, 0.5), (3, 0.5)]),
            vec![Subset::new(vec![0, 1, 2]), Subset::new(vec![3, 4])],
        )
        .unwrap();
        (spec, sys)
    }

    #[test]
    fn system_validation() {
        let spec = spec();
        let eta = m(&[(0, 0.5), (3, 0.5)]);
        let overlap = DisjointSystem::new(
            &spec,
            eta.clone(),
            vec![Subset::new(vec![0, 1]), Subset::new(vec![1, 3])],
        );
        assert!(matches!(overlap, Err(Error::InvalidSystem(_))));
        let missing = DisjointSystem::new(
            &spec,
            eta.clone(),
            vec![Subset::new(vec![1]), Subset::new(vec![3])],
        );
        assert!(missing.is_err());
        let too_wide = DisjointSystem::new(
            &spec,
            eta,
            vec![Subset::new(vec![0]), Subset::new(vec![3, 5])],
        );
        assert!(too_wide.is_err());
    }

    #[test]
    fn n_membership() {
        let spec = spec();
        let u = spec.space.open_ball(0, 0.15).unwrap();
        let sys = DisjointSystem::new(&spec, dirac(0), vec![u.clone()]).unwrap();
        assert!(in_n(&sys, 1e-6, &dirac(0)));
        for alpha in [0.1, 0.3] {
            let nu = m(&[(0, 1.0 - alpha), (3, alpha)]);
            assert!(!u.contains(3));
            assert_eq!(in_n(&sys, 0.2, &nu), alpha < 0.2);
        }
        assert!(in_n(&sys, 1.0001, &dirac(5)));
    }

    #[test]
    fn o_membership() {
        let eta = m(&[(0, 0.5), (3, 0.5)]);
        let constants = TestFunctionFamily::new(vec![vec![2.0; 6], vec![-1.0; 6]]).unwrap();
        assert!(in_o(&eta, &constants, 1e-9, &dirac(5)));
        assert!(in_o(&eta, &constants, 1e-9, &eta));
        let u = Subset::new(vec![0, 1]);
        let ind = TestFunctionFamily::new(vec![(0..6)
            .map(|x| if u.contains(x) { 1.0 } else { 0.0 })
            .collect()])
        .unwrap();
        let nu = m(&[(1, 0.2), (4, 0.8)]);
        let gap = (eta.measure_of_set(&u) - nu.measure_of_set(&u)).abs();
        assert_eq!(in_o(&eta, &ind, 0.31, &nu), gap < 0.31);
        assert_eq!(in_o(&eta, &ind, 0.29, &nu), gap < 0.29);
    }

    #[test]
    fn shrink_basis_examples() {
        let spec = spec();
        let u = Subset::new(vec![0, 1, 2]);
        let sys = DisjointSystem::new(&spec, dirac(0), vec![u.clone()]).unwrap();
        let (v, delta) = shrink_basis(&spec, &sys, 0.4, &dirac(0)).unwrap();
        assert_eq!(delta, 0.2);
        assert!(v.sets()[0].contains(0) && v.sets()[0].is_subset_of(&u));

        // m = 2, slacks 0.4 and 0.2 against eps = 0.5
        let (spec, sys) = two_block();
        let nu = m(&[(1, 0.6), (4, 0.4)]);
        let gaps = sys.block_gaps(&nu);
        assert!((gaps[0] - 0.1).abs() < 1e-12 && (gaps[1] - 0.1).abs() < 1e-12);
        let (_, delta) = shrink_basis(&spec, &sys, 0.5, &nu).unwrap();
        assert!((delta - 0.1).abs() < 1e-12);
        let skew = m(&[(1, 0.8), (4, 0.2)]);
        let (_, delta) = shrink_basis(&spec, &sys, 0.5, &skew).unwrap();
        assert!((delta - 0.2 / 4.0).abs() < 1e-12);
        assert!(matches!(
            shrink_basis(&spec, &sys, 0.05, &nu),
            Err(Error::OutsideNeighborhood(_))
        ));
    }

    #[test]
    fn two_atom_delta_arithmetic() {
        // block gaps 0.2 and 0.4 against eps = 0.5, two atoms in ν
        let pts = [0.0, 0.1, 0.2, 1.0, 1.1, 3.0]
            .iter()
            .map(|&x| vec![x])
            .collect();
        let spec = ThickeningSpec::new(
            PointCloud::new(pts).unwrap().to_metric(),
            Cover::diameter(3.5).unwrap(),
        )
        .unwrap();
        let eta = m(&[(0, 0.6), (3, 0.4)]);
        let sys = DisjointSystem::new(
            &spec,
            eta,
            vec![Subset::new(vec![0, 1]), Subset::new(vec![3, 4])],
        )
        .unwrap();
        let nu = m(&[(1, 0.4), (5, 0.6)]);
        let gaps = sys.block_gaps(&nu);
        assert!((gaps[0] - 0.2).abs() < 1e-12 && (gaps[1] - 0.4).abs() < 1e-12);
        let (v, delta) = shrink_basis(&spec, &sys, 0.5, &nu).unwrap();
        assert!((delta - 0.025).abs() < 1e-12);
        assert!(v.sets()[0].is_subset_of(&Subset::new(vec![0, 1])));
        assert_eq!(v.sets()[1], Subset::singleton(5));
    }

    #[test]
    fn separating_functions_integrals() {
        let (spec, sys) = two_block();
        let fam = separating_functions(&spec, &sys);
        assert_eq!(fam.len(), 4);
        let eta = sys.base().clone();
        for i in 0..2 {
            assert_eq!(fam.integrate(i, &eta), eta.measure_of_set(&sys.sets()[i]));
            assert_eq!(fam.integrate(2 + i, &eta), eta.atoms()[i].1);
        }
    }

    #[test]
    fn refine_bound_and_constants() {
        let fam = TestFunctionFamily::new(vec![vec![-2.0, 0.0, 3.0, 1.0, 0.5, 0.0]]).unwrap();
        assert_eq!(fam.bound(), 4.0);
        let spec = spec();
        let constants = TestFunctionFamily::new(vec![vec![1.0; 6]]).unwrap();
        let eta = m(&[(0, 0.5), (3, 0.5)]);
        let (sys, delta) = refine_to_o(&spec, &eta, &constants, 0.5).unwrap();
        assert!((delta - 0.5 / (2.0 * 5.0)).abs() < 1e-12);
        assert!(in_o(&eta, &constants, 0.5, &m(&[(1, 0.5), (4, 0.5)])));
        assert_eq!(sys.sets().len(), 2);
    }

    #[test]
    fn p_predicates() {
        let u = Subset::new(vec![0, 1]);
        assert!(in_p_u(&dirac(0), &u) && in_p_upper(&dirac(0), &u));
        let split = m(&[(0, 0.5), (3, 0.5)]);
        assert!(in_p_u(&split, &u) && !in_p_upper(&split, &u));
        let sets = vec![u.clone(), Subset::singleton(3)];
        assert!(in_p_system(&split, &sets));
        assert!(!in_p_system(&dirac(0), &sets));
    }

    #[test]
    fn p_mue_is_non_strict() {
        let (_, sys) = two_block();
        assert!(in_p_mue(&sys, 0.0, sys.base()));
        assert!(!in_p_mue(&sys, 0.9, &m(&[(0, 0.5), (5, 0.5)])));
        let edge = m(&[(1, 0.75), (4, 0.25)]);
        assert!(in_p_mue(&sys, 0.25, &edge));
        assert!(!in_n(&sys, 0.25, &edge));
    }

    #[test]
    fn witness_examples() {
        let (_, sys) = two_block();
        let w = f_witness(&sys, sys.base()).unwrap();
        assert_eq!(&w, sys.base());
        let zeta = m(&[(0, 0.1), (1, 0.2), (2, 0.3), (4, 0.4)]);
        let w = f_witness(&sys, &zeta).unwrap();
        assert!(w.support().is_subset_of(&zeta.support()));
        for (u, &(_, mass)) in sys.sets().iter().zip(sys.base().atoms()) {
            assert!((w.measure_of_set(u) - mass).abs() < 1e-15);
        }
        assert!((w.weight_at(0) - 0.5 / 3.0).abs() < 1e-15);
        assert_eq!(w.weight_at(4), 0.5);
        assert!(matches!(
            f_witness(&sys, &m(&[(0, 1.0)])),
            Err(Error::NotInPSystem(1))
        ));
    }

    #[test]
    fn retraction_fixes_the_base_point() {
        let (spec, sys) = two_block();
        let path = retraction_path(&spec, &sys, sys.base(), 4, None).unwrap();
        assert!(path.points().all(|p| p == sys.base()));
        let zeta = m(&[(1, 0.5), (2, 0.25), (4, 0.25)]);
        let path = retraction_path(&spec, &sys, &zeta, 4, Some(10.0)).unwrap();
        assert!(path.end().approx_eq(sys.base(), 1e-12));
        assert!(path.stage_one.iter().all(|p| spec.member(p)));
        assert!(path.stage_two.iter().all(|p| in_p_mue(&sys, 0.0, p)));
        assert!(retraction_path(&spec, &sys, &zeta, 4, Some(1e-3)).is_err());
    }
}
