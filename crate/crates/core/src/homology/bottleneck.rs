//! Bottleneck distance between persistence diagrams.

use super::{Bar, PersistenceDiagram};

/// Bottleneck distance in dimension `dim`. Essential bars are matched only
/// with essential bars (by sorted births); if their counts differ the
/// distance is infinite. Finite bars use binary search over candidate radii
/// with a bipartite perfect-matching feasibility test.
pub fn bottleneck_distance(a: &PersistenceDiagram, b: &PersistenceDiagram, dim: usize) -> f64 {
    let split = |bars: &[Bar]| {
        let (fin, inf): (Vec<Bar>, Vec<Bar>) = bars.iter().partition(|x| x.1.is_finite());
        let mut inf_births: Vec<f64> = inf.into_iter().map(|x| x.0).collect();
        inf_births.sort_by(f64::total_cmp);
        (fin, inf_births)
    };
    let (fa, ia) = split(a.bars(dim));
    let (fb, ib) = split(b.bars(dim));
    if ia.len() != ib.len() {
        return f64::INFINITY;
    }
    let essential = ia
        .iter()
        .zip(&ib)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    essential.max(finite_bottleneck(&fa, &fb))
}

fn linf(p: Bar, q: Bar) -> f64 {
    (p.0 - q.0).abs().max((p.1 - q.1).abs())
}

fn to_diagonal(p: Bar) -> f64 {
    (p.1 - p.0) / 2.0
}

fn finite_bottleneck(a: &[Bar], b: &[Bar]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let mut candidates: Vec<f64> = Vec::with_capacity(a.len() * b.len() + a.len() + b.len() + 1);
    candidates.push(0.0);
    candidates.extend(a.iter().chain(b).map(|&p| to_diagonal(p)));
    for &p in a {
        for &q in b {
            candidates.push(linf(p, q));
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    // the largest candidate is always feasible
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(a, b, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Perfect matching in the graph whose left side is `a` plus one diagonal
/// copy per point of `b`, right side `b` plus one diagonal copy per point
/// of `a`, with edges of cost `<= eps`.
fn feasible(a: &[Bar], b: &[Bar], eps: f64) -> bool {
    let (n, m) = (a.len(), b.len());
    let size = n + m;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); size];
    for i in 0..n {
        for j in 0..m {
            if linf(a[i], b[j]) <= eps {
                adj[i].push(j);
            }
        }
        if to_diagonal(a[i]) <= eps {
            adj[i].push(m + i);
        }
    }
    for j in 0..m {
        if to_diagonal(b[j]) <= eps {
            adj[n + j].push(j);
        }
        // diagonal-to-diagonal is free
        adj[n + j].extend(m..m + n);
    }
    hopcroft_karp(&adj, size) == size
}

fn hopcroft_karp(adj: &[Vec<usize>], n_right: usize) -> usize {
    const NONE: usize = usize::MAX;
    let n_left = adj.len();
    let mut match_l = vec![NONE; n_left];
    let mut match_r = vec![NONE; n_right];
    let mut dist = vec![0usize; n_left];
    let mut matched = 0;
    loop {
        // BFS layering from free left vertices
        let mut queue = std::collections::VecDeque::new();
        for u in 0..n_left {
            if match_l[u] == NONE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == NONE {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return matched;
        }
        fn augment(
            u: usize,
            adj: &[Vec<usize>],
            ml: &mut [usize],
            mr: &mut [usize],
            dist: &mut [usize],
            it: &mut [usize],
        ) -> bool {
            while it[u] < adj[u].len() {
                let v = adj[u][it[u]];
                it[u] += 1;
                let w = mr[v];
                if w == usize::MAX || (dist[w] == dist[u] + 1 && augment(w, adj, ml, mr, dist, it))
                {
                    ml[u] = v;
                    mr[v] = u;
                    return true;
                }
            }
            dist[u] = usize::MAX;
            false
        }
        let mut it = vec![0usize; n_left];
        for u in 0..n_left {
            if match_l[u] == NONE && augment(u, adj, &mut match_l, &mut match_r, &mut dist, &mut it)
            {
                matched += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dgm(bars: Vec<Bar>) -> PersistenceDiagram {
        PersistenceDiagram::new(vec![bars], f64::INFINITY)
    }

    /// Exhaustive oracle: all injective partial matchings, unmatched bars
    /// go to the diagonal.
    fn brute(a: &[Bar], b: &[Bar]) -> f64 {
        fn rec(i: usize, a: &[Bar], b: &[Bar], used: &mut Vec<bool>, cur: f64, best: &mut f64) {
            if cur >= *best {
                return;
            }
            if i == a.len() {
                let rest = b
                    .iter()
                    .zip(used.iter())
                    .filter(|(_, &u)| !u)
                    .map(|(&q, _)| to_diagonal(q))
                    .fold(0.0, f64::max);
                *best = best.min(cur.max(rest));
                return;
            }
            rec(i + 1, a, b, used, cur.max(to_diagonal(a[i])), best);
            for j in 0..b.len() {
                if !used[j] {
                    used[j] = true;
                    rec(i + 1, a, b, used, cur.max(linf(a[i], b[j])), best);
                    used[j] = false;
                }
            }
        }
        let mut best = f64::INFINITY;
        rec(0, a, b, &mut vec![false; b.len()], 0.0, &mut best);
        best
    }

    #[test]
    fn examples() {
        let a = dgm(vec![(0.0, 2.0), (0.5, 1.0)]);
        assert_eq!(bottleneck_distance(&a, &a, 0), 0.0);
        assert!((bottleneck_distance(&dgm(vec![(0.0, 2.0)]), &dgm(vec![]), 0) - 1.0).abs() < 1e-12);
        let s = 3f64.sqrt();
        let d = bottleneck_distance(&dgm(vec![(1.0, s)]), &dgm(vec![(1.1, s)]), 0);
        assert!((d - 0.1).abs() < 1e-12);
    }

    #[test]
    fn essential_bars() {
        let a = dgm(vec![(0.0, f64::INFINITY), (0.0, 1.0)]);
        let b = dgm(vec![(0.25, f64::INFINITY)]);
        assert!((bottleneck_distance(&a, &b, 0) - 0.5).abs() < 1e-12);
        assert!(bottleneck_distance(&a, &dgm(vec![(0.0, 1.0)]), 0).is_infinite());
    }

    #[test]
    fn agrees_with_exhaustive_matching() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let (na, nb) = (rng.gen_range(0..5), rng.gen_range(0..5));
            let mut gen = |k: usize| -> Vec<Bar> {
                (0..k)
                    .map(|_| {
                        let b: f64 = rng.gen_range(0.0..2.0);
                        (b, b + rng.gen_range(0.01..1.5))
                    })
                    .collect()
            };
            let (a, b) = (gen(na), gen(nb));
            let fast = bottleneck_distance(&dgm(a.clone()), &dgm(b.clone()), 0);
            assert!((fast - brute(&a, &b)).abs() < 1e-12, "{a:?} {b:?}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn diagram() -> impl Strategy<Value = PersistenceDiagram> {
            prop::collection::vec((0.0f64..3.0, 0.01f64..2.0), 0..6)
                .prop_map(|v| dgm(v.into_iter().map(|(b, l)| (b, b + l)).collect()))
        }

        proptest! {
            #[test]
            fn pseudometric(a in diagram(), b in diagram(), c in diagram()) {
                let ab = bottleneck_distance(&a, &b, 0);
                prop_assert_eq!(ab, bottleneck_distance(&b, &a, 0));
                let ac = bottleneck_distance(&a, &c, 0);
                let cb = bottleneck_distance(&c, &b, 0);
                prop_assert!(ab <= ac + cb + 1e-9);
                prop_assert_eq!(bottleneck_distance(&a, &a, 0), 0.0);
            }
        }
    }
}
