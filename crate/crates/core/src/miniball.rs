//! Minimal enclosing Euclidean ball via Welzl's move-to-front recursion.

use crate::metric::euclidean;

/// Relative slack used when testing whether a point lies in a ball built
/// from floating-point circumcenters.
const INSIDE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    fn contains(&self, p: &[f64]) -> bool {
        euclidean(&self.center, p) <= self.radius * (1.0 + INSIDE_TOLERANCE) + INSIDE_TOLERANCE
    }
}

/// Smallest closed ball containing every point. `points` must be nonempty
/// and share one dimension.
pub fn minimal_enclosing_ball(points: &[&[f64]]) -> Ball {
    assert!(!points.is_empty(), "minimal enclosing ball of an empty set");
    let dim = points[0].len();
    let mut order: Vec<&[f64]> = points.to_vec();
    let mut boundary: Vec<&[f64]> = Vec::with_capacity(dim + 1);
    welzl(&mut order, points.len(), &mut boundary, dim)
}

fn welzl<'a>(
    pts: &mut Vec<&'a [f64]>,
    end: usize,
    boundary: &mut Vec<&'a [f64]>,
    dim: usize,
) -> Ball {
    let mut ball = circumball(boundary, dim);
    if boundary.len() == dim + 1 {
        return ball;
    }
    let mut i = 0;
    while i < end {
        let p = pts[i];
        if !ball.contains(p) {
            boundary.push(p);
            ball = welzl(pts, i, boundary, dim);
            boundary.pop();
            // move to front so later calls see the hard point first
            let moved = pts.remove(i);
            pts.insert(0, moved);
        }
        i += 1;
    }
    ball
}

/// Smallest ball with all `boundary` points on its sphere, centered in their
/// affine hull. Affinely dependent directions are dropped.
fn circumball(boundary: &[&[f64]], dim: usize) -> Ball {
    match boundary.len() {
        0 => Ball {
            center: vec![0.0; dim],
            radius: -1.0,
        },
        1 => Ball {
            center: boundary[0].to_vec(),
            radius: 0.0,
        },
        _ => {
            let origin = boundary[0];
            let dirs: Vec<Vec<f64>> = boundary[1..]
                .iter()
                .map(|p| p.iter().zip(origin).map(|(a, b)| a - b).collect())
                .collect();
            let k = dirs.len();
            let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
            // Gram system 2 G λ = |d_i|²
            let mut a = vec![vec![0.0; k + 1]; k];
            for i in 0..k {
                for j in 0..k {
                    a[i][j] = 2.0 * dot(&dirs[i], &dirs[j]);
                }
                a[i][k] = dot(&dirs[i], &dirs[i]);
            }
            let lambda = solve_dropping_degenerate(a);
            let mut center = origin.to_vec();
            for (l, d) in lambda.iter().zip(&dirs) {
                for (c, x) in center.iter_mut().zip(d) {
                    *c += l * x;
                }
            }
            let radius = boundary
                .iter()
                .map(|p| euclidean(&center, p))
                .fold(0.0, f64::max);
            Ball { center, radius }
        }
    }
}

/// Gaussian elimination with partial pivoting on an augmented `k x (k+1)`
/// system; variables whose pivot vanishes are set to zero.
fn solve_dropping_degenerate(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let k = a.len();
    let scale = a
        .iter()
        .flat_map(|r| r[..k].iter())
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    let mut pivot_of_col = vec![None; k];
    let mut row = 0;
    for col in 0..k {
        let best = (row..k).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()));
        let Some(best) = best else { break };
        if a[best][col].abs() <= 1e-12 * scale {
            continue;
        }
        a.swap(row, best);
        for r in 0..k {
            if r != row {
                let f = a[r][col] / a[row][col];
                if f != 0.0 {
                    for c in col..=k {
                        a[r][c] -= f * a[row][c];
                    }
                }
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
    }
    pivot_of_col
        .iter()
        .enumerate()
        .map(|(col, p)| p.map_or(0.0, |r| a[r][k] / a[r][col]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(points: &[Vec<f64>]) -> f64 {
        // smallest circumball over all subsets of size <= 3 that encloses everything (planar)
        let n = points.len();
        let mut best = f64::INFINITY;
        let refs: Vec<&[f64]> = points.iter().map(|p| p.as_slice()).collect();
        for mask in 1u32..(1 << n) {
            if mask.count_ones() > 3 {
                continue;
            }
            let sub: Vec<&[f64]> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| refs[i])
                .collect();
            let b = circumball(&sub, 2);
            if refs.iter().all(|p| b.contains(p)) {
                best = best.min(b.radius);
            }
        }
        best
    }

    #[test]
    fn equilateral_triangle_circumradius() {
        let h = 3f64.sqrt() / 2.0;
        let pts = [vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]];
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let b = minimal_enclosing_ball(&refs);
        assert!((b.radius - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn obtuse_triangle_uses_longest_side() {
        let pts = [vec![0.0, 0.0], vec![2.0, 0.0], vec![1.0, 0.2]];
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        assert!((minimal_enclosing_ball(&refs).radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn duplicates_and_collinear_points() {
        let pts = [
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![2.0, 2.0],
        ];
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        assert!((minimal_enclosing_ball(&refs).radius - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn matches_brute_force_on_random_sets() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let n = rng.gen_range(1..8);
            let pts: Vec<Vec<f64>> = (0..n)
                .map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
                .collect();
            let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
            let fast = minimal_enclosing_ball(&refs);
            assert!(refs.iter().all(|p| fast.contains(p)));
            assert!((fast.radius - brute_force(&pts)).abs() < 1e-9);
        }
    }

    #[test]
    fn regular_tetrahedron_in_three_dimensions() {
        let pts = [
            vec![1.0, 1.0, 1.0],
            vec![1.0, -1.0, -1.0],
            vec![-1.0, 1.0, -1.0],
            vec![-1.0, -1.0, 1.0],
        ];
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        assert!((minimal_enclosing_ball(&refs).radius - 3f64.sqrt()).abs() < 1e-12);
    }
}
