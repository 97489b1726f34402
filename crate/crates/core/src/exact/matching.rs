//! Maximum-weight bipartite matching (Hungarian algorithm with potentials).

/// Matches rows to columns maximizing total weight. Pairs with a
/// non-positive weight are never reported; `weights` must be rectangular.
/// Returns the matched column of every row.
pub fn max_weight_matching(weights: &[Vec<f64>]) -> Vec<Option<usize>> {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return vec![None; rows];
    }
    // Clipping at zero makes a full assignment of the smaller side optimal.
    let gain = |r: usize, c: usize| weights[r][c].max(0.0);

    let mut result = vec![None; rows];
    if rows <= cols {
        for (r, c) in hungarian(rows, cols, |r, c| -gain(r, c))
            .into_iter()
            .enumerate()
        {
            if gain(r, c) > 0.0 {
                result[r] = Some(c);
            }
        }
    } else {
        for (c, r) in hungarian(cols, rows, |c, r| -gain(r, c))
            .into_iter()
            .enumerate()
        {
            if gain(r, c) > 0.0 {
                result[r] = Some(c);
            }
        }
    }
    result
}

/// Minimum-cost assignment of `n` rows into `m >= n` columns.
fn hungarian(n: usize, m: usize, cost: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    debug_assert!(n <= m);
    let inf = f64::INFINITY;
    // 1-based with column 0 as the virtual start, as in the classic O(n^2 m) form.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=m {
        if p[j] != 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    assignment
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn weight(w: &[Vec<f64>], m: &[Option<usize>]) -> f64 {
        m.iter()
            .enumerate()
            .filter_map(|(r, c)| c.map(|c| w[r][c]))
            .sum()
    }

    /// Exhaustive optimum over all partial injections.
    fn brute(w: &[Vec<f64>], r: usize, used: &mut Vec<bool>) -> f64 {
        if r == w.len() {
            return 0.0;
        }
        let mut best = brute(w, r + 1, used);
        for c in 0..used.len() {
            if !used[c] {
                used[c] = true;
                best = best.max(w[r][c] + brute(w, r + 1, used));
                used[c] = false;
            }
        }
        best
    }

    #[test]
    fn picks_the_heavy_diagonal() {
        let w = vec![vec![10.0, 6.0], vec![9.0, 1.0]];
        let m = max_weight_matching(&w);
        assert_eq!(m, vec![Some(1), Some(0)]);
        assert_eq!(weight(&w, &m), 15.0);
    }

    #[test]
    fn negative_edges_stay_unmatched() {
        let w = vec![vec![-1.0, -2.0], vec![3.0, -5.0]];
        assert_eq!(max_weight_matching(&w), vec![None, Some(0)]);
    }

    proptest! {
        #[test]
        fn agrees_with_exhaustive(rows in 1usize..5, cols in 1usize..5,
                                  seed in proptest::collection::vec(-5.0f64..20.0, 16)) {
            let w: Vec<Vec<f64>> = (0..rows)
                .map(|r| (0..cols).map(|c| seed[r * 4 + c]).collect())
                .collect();
            let m = max_weight_matching(&w);
            let mut seen = std::collections::HashSet::new();
            for c in m.iter().flatten() {
                prop_assert!(seen.insert(*c));
            }
            let expected = brute(&w, 0, &mut vec![false; cols]);
            prop_assert!((weight(&w, &m) - expected).abs() < 1e-9);
        }
    }
}
