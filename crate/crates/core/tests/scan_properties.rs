use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ergap::graph::{generate_er, Graph, RngSeed};
use ergap::scan::{choose_tau, expected_line_count, find_pendant_lines, low_degree_scan, LineDetection};

/// Induced edges inside `set` and edges leaving it.
fn edge_counts(g: &Graph, set: &HashSet<usize>) -> (usize, Vec<(usize, usize)>) {
    let mut inside = 0;
    let mut leaving = Vec::new();
    for &x in set {
        for &y in g.neighbors(x) {
            if set.contains(&y) {
                inside += 1;
            } else {
                leaving.push((x, y));
            }
        }
    }
    (inside / 2, leaving)
}

fn second_sphere(g: &Graph, z: usize) -> usize {
    let first: HashSet<usize> = g.neighbors(z).iter().copied().collect();
    let mut second = HashSet::new();
    for &y in &first {
        for &w in g.neighbors(y) {
            if w != z && !first.contains(&w) {
                second.insert(w);
            }
        }
    }
    second.len()
}

/// Every sequence of `t` distinct vertices forming a path, found by DFS.
fn all_paths(g: &Graph, t: usize) -> Vec<Vec<usize>> {
    fn extend(g: &Graph, t: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if path.len() == t {
            out.push(path.clone());
            return;
        }
        let last = *path.last().unwrap();
        for &y in g.neighbors(last) {
            if !path.contains(&y) {
                path.push(y);
                extend(g, t, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for x in 0..g.n() {
        extend(g, t, &mut vec![x], &mut out);
    }
    out
}

/// Detections straight from the definition: a vertex sequence inducing a
/// path, with a single edge leaving the set, from the last vertex.
fn brute_force(g: &Graph, t: usize) -> BTreeSet<(Vec<usize>, usize)> {
    let mut found = BTreeSet::new();
    for path in all_paths(g, t) {
        let set: HashSet<usize> = path.iter().copied().collect();
        let (inside, leaving) = edge_counts(g, &set);
        if inside == t - 1 && leaving.len() == 1 && leaving[0].0 == *path.last().unwrap() {
            found.insert((path, leaving[0].1));
        }
    }
    found
}

fn recheck(g: &Graph, t: usize, l: &LineDetection) -> Result<(), TestCaseError> {
    prop_assert_eq!(l.path.len(), t);
    let set: HashSet<usize> = l.path.iter().copied().collect();
    prop_assert_eq!(set.len(), t);
    for w in l.path.windows(2) {
        prop_assert!(g.has_edge(w[0], w[1]));
    }
    let (inside, leaving) = edge_counts(g, &set);
    prop_assert_eq!(inside, t - 1);
    prop_assert_eq!(leaving, vec![(*l.path.last().unwrap(), l.anchor)]);
    prop_assert_eq!(l.anchor_degree, g.degree(l.anchor));
    prop_assert_eq!(l.s2_size, second_sphere(g, l.anchor));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn detections_match_the_definition(n in 4usize..80, d in 0.5f64..3.5, t in 1usize..5, seed in any::<u64>()) {
        let g = generate_er(n, d, RngSeed::new(seed, 0)).unwrap();
        let lines = find_pendant_lines(&g, t);
        for l in &lines {
            recheck(&g, t, l)?;
        }
        let got: BTreeSet<_> = lines.iter().map(|l| (l.path.clone(), l.anchor)).collect();
        prop_assert_eq!(got.len(), lines.len());
        prop_assert_eq!(got, brute_force(&g, t));
        let firsts: Vec<usize> = lines.iter().map(|l| *l.path.iter().min().unwrap()).collect();
        prop_assert!(firsts.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn detections_commute_with_relabelling(n in 4usize..150, d in 0.5f64..3.0, t in 1usize..4, seed in any::<u64>()) {
        let g = generate_er(n, d, RngSeed::new(seed, 2)).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let h = g.permuted(&perm).unwrap();
        let mut inverse = vec![0; n];
        for (x, &y) in perm.iter().enumerate() {
            inverse[y] = x;
        }
        let direct: BTreeSet<_> = find_pendant_lines(&g, t)
            .into_iter()
            .map(|l| (l.path, l.anchor, l.anchor_degree, l.s2_size))
            .collect();
        let mapped: BTreeSet<_> = find_pendant_lines(&h, t)
            .into_iter()
            .map(|l| {
                let path = l.path.iter().map(|&y| inverse[y]).collect::<Vec<_>>();
                (path, inverse[l.anchor], l.anchor_degree, l.s2_size)
            })
            .collect();
        prop_assert_eq!(direct, mapped);
    }
}

#[test]
fn line_count_is_calibrated() {
    let n = 10_000;
    let d = (n as f64).ln() / 2.5;
    let trials = 60;
    let counts: Vec<f64> = (0..trials)
        .map(|s| find_pendant_lines(&generate_er(n, d, RngSeed::new(808, s)).unwrap(), 2).len() as f64)
        .collect();
    let mean = counts.iter().sum::<f64>() / trials as f64;
    let expected = expected_line_count(n, d, 2);
    assert!((expected - 85.64).abs() < 0.01, "{expected}");
    let band = 4.0 * (mean / trials as f64).sqrt();
    assert!((mean - expected).abs() <= band, "mean {mean}, expected {expected}, band {band}");
}

#[test]
fn low_degree_set_is_a_small_forest_in_regime() {
    let n = 10_000;
    let tau = choose_tau(0.2).unwrap();
    for (t, t_star) in [(1.5, 1usize), (2.5, 2), (3.3, 3)] {
        let d = (n as f64).ln() / t;
        let seeds = 40;
        let good = (0..seeds)
            .filter(|&s| {
                let scan = low_degree_scan(&generate_er(n, d, RngSeed::new(9, s)).unwrap(), tau, d);
                scan.is_forest && scan.max_tree_size() <= t_star
            })
            .count();
        assert!(good * 10 >= seeds as usize * 9, "t = {t}: {good}/{seeds}");
    }
}
