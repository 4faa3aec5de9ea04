//! Nearest-neighbour construction followed by 2-opt.

/// Path over `0..n` built greedily. With `fixed_ends` the path starts at 0
/// and ends at `n - 1`; otherwise it starts at 0 and ends anywhere.
pub(crate) fn nearest_neighbor(n: usize, d: &[f64], fixed_ends: bool) -> Vec<usize> {
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    visited[0] = true;
    order.push(0);
    let reserved = fixed_ends && n > 1;
    if reserved {
        visited[n - 1] = true;
    }
    let inner = if reserved { n - 1 } else { n };
    while order.len() < inner {
        let cur = *order.last().unwrap();
        let next = (0..n)
            .filter(|&k| !visited[k])
            .min_by(|&a, &b| d[cur * n + a].total_cmp(&d[cur * n + b]).then(a.cmp(&b)))
            .expect("unvisited node remains");
        visited[next] = true;
        order.push(next);
    }
    if reserved {
        order.push(n - 1);
    }
    order
}

/// First-improvement 2-opt until no segment reversal shortens the path.
/// With `fixed_ends` the first and last nodes stay in place.
pub(crate) fn two_opt(order: &mut [usize], n: usize, d: &[f64], fixed_ends: bool) {
    let len = order.len();
    if len < 3 {
        return;
    }
    let dist = |a: usize, b: usize| d[a * n + b];
    let (lo, hi) = if fixed_ends {
        (1, len - 2)
    } else {
        (0, len - 1)
    };
    let mut improved = true;
    while improved {
        improved = false;
        for i in lo..=hi {
            for j in (i + 1)..=hi {
                // reversing order[i..=j]; missing neighbours contribute nothing
                let before = if i > 0 {
                    dist(order[i - 1], order[i])
                } else {
                    0.0
                };
                let after = if j + 1 < len {
                    dist(order[j], order[j + 1])
                } else {
                    0.0
                };
                let new_before = if i > 0 {
                    dist(order[i - 1], order[j])
                } else {
                    0.0
                };
                let new_after = if j + 1 < len {
                    dist(order[i], order[j + 1])
                } else {
                    0.0
                };
                if new_before + new_after < before + after - 1e-12 {
                    order[i..=j].reverse();
                    improved = true;
                }
            }
        }
    }
}
