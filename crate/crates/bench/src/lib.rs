//! Inputs shared by the benchmarks.

use clusterkit::{ClusterMap, Seed, VarId};

/// Linearly oriented path `x1 -> x2 -> ... -> xn`, all exchangeable.
pub fn path_seed(n: usize) -> Seed {
    let labels: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let arrows: Vec<(&str, &str, i64)> = refs.windows(2).map(|w| (w[0], w[1], 1)).collect();
    Seed::from_arrows(&refs, &refs, &arrows).expect("path quiver")
}

pub fn a2() -> Seed {
    Seed::from_arrows(&["y1", "y2"], &["y1", "y2"], &[("y1", "y2", 1)]).expect("A2")
}

/// `x1 -> x2 <- x3` with `x1` a coefficient, mapped onto A2 with `x3 -> 1`.
pub fn example_map() -> ClusterMap {
    let s = Seed::from_arrows(&["x1", "x2", "x3"], &["x2", "x3"], &[("x1", "x2", 1), ("x3", "x2", 1)]).expect("seed");
    ClusterMap::from_pairs(s, a2(), &[("x1", "y1"), ("x2", "y2")], &[("x3", 1)]).expect("map")
}

/// Alternating sweep `x1, x2, ..., xn, x1, ...` of the given length.
pub fn sweep(n: usize, len: usize) -> Vec<VarId> {
    (0..len)
        .map(|i| VarId::from(format!("x{}", i % n + 1).as_str()))
        .collect()
}
