use std::collections::{BTreeMap, BTreeSet};

use ergap::trees::{
    canonical_code, enumerate_trees, sym_eigenvalues, weighted_laplacian, Anchor, AnchoredTree,
    FreeTree,
};

const FREE_TREE_COUNTS: [usize; 10] = [1, 1, 1, 2, 3, 6, 11, 23, 47, 106];

/// Labelled tree on `0..t` from a Prüfer sequence of length `t − 2`.
fn prufer_tree(t: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; t];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(t - 1);
    for &x in seq {
        let leaf = (0..t).find(|&y| degree[y] == 1).unwrap();
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..t).filter(|&y| degree[y] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

fn all_prufer_trees(t: usize) -> Vec<Vec<(usize, usize)>> {
    if t == 1 {
        return vec![vec![]];
    }
    if t == 2 {
        return vec![vec![(0, 1)]];
    }
    let len = t - 2;
    (0..t.pow(len as u32))
        .map(|mut code| {
            let seq: Vec<usize> = (0..len)
                .map(|_| {
                    let x = code % t;
                    code /= t;
                    x
                })
                .collect();
            prufer_tree(t, &seq)
        })
        .collect()
}

/// Isomorphism class key: lexicographically smallest sorted edge list over
/// all relabellings.
fn brute_force_key(t: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..t).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    loop {
        let mut relabelled: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(u, v)| (perm[u].min(perm[v]), perm[u].max(perm[v])))
            .collect();
        relabelled.sort_unstable();
        if best.as_ref().is_none_or(|b| relabelled < *b) {
            best = Some(relabelled);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[test]
fn enumeration_matches_prufer_and_permutation_oracle() {
    for t in 1..=6 {
        let mut classes: BTreeMap<Vec<(usize, usize)>, BTreeSet<String>> = BTreeMap::new();
        for edges in all_prufer_trees(t) {
            let code = canonical_code(t, &edges).unwrap();
            classes
                .entry(brute_force_key(t, &edges))
                .or_default()
                .insert(code);
        }
        // One code per class, distinct codes across classes.
        assert!(classes.values().all(|codes| codes.len() == 1), "t = {t}");
        let codes: BTreeSet<String> = classes.values().flatten().cloned().collect();
        assert_eq!(codes.len(), classes.len());
        let enumerated: BTreeSet<String> =
            enumerate_trees(t).unwrap().into_iter().map(|f| f.code).collect();
        assert_eq!(enumerated, codes, "t = {t}");
        assert_eq!(enumerated.len(), FREE_TREE_COUNTS[t - 1]);
    }
}

#[test]
fn prufer_classes_up_to_eight() {
    for t in 7..=8 {
        let codes: BTreeSet<String> = all_prufer_trees(t)
            .iter()
            .map(|e| canonical_code(t, e).unwrap())
            .collect();
        assert_eq!(codes.len(), FREE_TREE_COUNTS[t - 1]);
        let enumerated: BTreeSet<String> =
            enumerate_trees(t).unwrap().into_iter().map(|f| f.code).collect();
        assert_eq!(enumerated, codes);
    }
    for t in 9..=10 {
        assert_eq!(enumerate_trees(t).unwrap().len(), FREE_TREE_COUNTS[t - 1]);
    }
}

fn smallest(tree: &FreeTree, anchor: Anchor) -> f64 {
    let at = AnchoredTree::new(tree.size(), tree.edges.clone(), anchor).unwrap();
    sym_eigenvalues(&weighted_laplacian(&at))[0]
}

fn trees_up_to(t: usize) -> Vec<FreeTree> {
    (1..=t).flat_map(|s| enumerate_trees(s).unwrap()).collect()
}

/// All anchors on `0..s` with multiplicities at most `cap`, including the
/// empty one.
fn anchors(s: usize, cap: u32) -> Vec<Anchor> {
    let base = cap as usize + 1;
    (0..base.pow(s as u32))
        .map(|mut code| {
            let mut a = Anchor::new();
            for x in 0..s {
                let k = (code % base) as u32;
                code /= base;
                if k > 0 {
                    a.insert(x, k);
                }
            }
            a
        })
        .collect()
}

fn contained(small: &Anchor, big: &Anchor) -> bool {
    small.iter().all(|(x, &k)| big.get(x).is_some_and(|&m| m >= k))
}

#[test]
fn smallest_eigenvalue_grows_with_the_anchor() {
    for tree in trees_up_to(5) {
        let all = anchors(tree.size(), 2);
        let values: Vec<f64> = all.iter().map(|a| smallest(&tree, a.clone())).collect();
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                if contained(a, b) {
                    assert!(values[i] <= values[j] + 1e-12, "{} {a:?} {b:?}", tree.code);
                }
            }
        }
    }
}

#[test]
fn single_anchor_interlaces_strictly() {
    for tree in trees_up_to(6).into_iter().filter(|t| t.size() >= 2) {
        let free = sym_eigenvalues(&weighted_laplacian(
            &AnchoredTree::new(tree.size(), tree.edges.clone(), Anchor::new()).unwrap(),
        ));
        assert!(free[0].abs() < 1e-12);
        for i in 0..tree.size() {
            let value = smallest(&tree, Anchor::from([(i, 1)]));
            assert!(value > 1e-9 && value < free[1] - 1e-9, "{} at {i}", tree.code);
        }
    }
}

#[test]
fn removing_a_leaf_raises_the_smallest_eigenvalue() {
    for tree in trees_up_to(6).into_iter().filter(|t| t.size() >= 2) {
        let s = tree.size();
        let degrees = tree.degrees();
        for leaf in (0..s).filter(|&x| degrees[x] == 1) {
            // Relabel so that the leaf becomes the last vertex.
            let relabel = |x: usize| match x {
                x if x == leaf => s - 1,
                x if x == s - 1 => leaf,
                x => x,
            };
            let edges: Vec<(usize, usize)> =
                tree.edges.iter().map(|&(u, v)| (relabel(u), relabel(v))).collect();
            let sub: Vec<(usize, usize)> =
                edges.iter().copied().filter(|&(u, v)| u != s - 1 && v != s - 1).collect();
            for i in 0..s - 1 {
                let anchor = Anchor::from([(i, 1)]);
                let whole = sym_eigenvalues(&weighted_laplacian(
                    &AnchoredTree::new(s, edges.clone(), anchor.clone()).unwrap(),
                ))[0];
                let part = sym_eigenvalues(&weighted_laplacian(
                    &AnchoredTree::new(s - 1, sub.clone(), anchor).unwrap(),
                ))[0];
                assert!(whole < part - 1e-12, "{}: leaf {leaf}, anchor {i}", tree.code);
            }
        }
    }
}

#[test]
fn spectrum_has_one_nonnegative_value_per_vertex() {
    for tree in trees_up_to(6) {
        for anchor in anchors(tree.size(), 1) {
            let at = AnchoredTree::new(tree.size(), tree.edges.clone(), anchor).unwrap();
            let values = sym_eigenvalues(&weighted_laplacian(&at));
            assert_eq!(values.len(), tree.size());
            assert!(values.iter().all(|&v| v >= -1e-12));
        }
    }
}
