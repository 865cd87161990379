use std::collections::{BTreeMap, BTreeSet};

use gwloc_core::graphs::{enumerate, DecoratedGraph};
use gwloc_core::target::{CurveClass, TargetModel};

type Key = (Vec<usize>, Vec<(usize, usize, u32)>, Vec<usize>);

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Lexicographically smallest relabeling of a vertex-labeled decorated tree.
fn brute_key(labels: &[usize], edges: &[(usize, usize, u32)], marks: &[usize]) -> Key {
    permutations(labels.len())
        .into_iter()
        .map(|s| {
            let mut l = vec![0; labels.len()];
            for (v, &fp) in labels.iter().enumerate() {
                l[s[v]] = fp;
            }
            let mut e: Vec<(usize, usize, u32)> =
                edges.iter().map(|&(a, b, d)| (s[a].min(s[b]), s[a].max(s[b]), d)).collect();
            e.sort_unstable();
            let m: Vec<usize> = marks.iter().map(|&v| s[v]).collect();
            (l, e, m)
        })
        .min()
        .unwrap()
}

/// All labeled trees on n vertices via Prüfer sequences.
fn labeled_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    match n {
        1 => return vec![vec![]],
        2 => return vec![vec![(0, 1)]],
        _ => {}
    }
    let mut out = Vec::new();
    let total = n.pow(n as u32 - 2);
    for code in 0..total {
        let mut seq = Vec::new();
        let mut c = code;
        for _ in 0..n - 2 {
            seq.push(c % n);
            c /= n;
        }
        let mut degree = vec![1usize; n];
        for &x in &seq {
            degree[x] += 1;
        }
        let mut edges = Vec::new();
        for &x in &seq {
            let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
            edges.push((leaf, x));
            degree[leaf] -= 1;
            degree[x] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        out.push(edges);
    }
    out
}

fn tuples(base: usize, len: usize) -> Vec<Vec<usize>> {
    (0..base.pow(len as u32))
        .map(|mut c| {
            (0..len)
                .map(|_| {
                    let d = c % base;
                    c /= base;
                    d
                })
                .collect()
        })
        .collect()
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Isomorphism classes with automorphism counts, found by brute force.
fn brute_force(points: usize, d: u32, n: usize) -> BTreeMap<Key, u64> {
    let mut labeled_counts: BTreeMap<Key, u64> = BTreeMap::new();
    let mut sizes: BTreeMap<Key, usize> = BTreeMap::new();
    for v in 2..=(d as usize + 1) {
        for tree in labeled_trees(v) {
            for labels in tuples(points, v) {
                if tree.iter().any(|&(a, b)| labels[a] == labels[b]) {
                    continue;
                }
                for degs in compositions(d, v - 1) {
                    let edges: Vec<(usize, usize, u32)> =
                        tree.iter().zip(&degs).map(|(&(a, b), &k)| (a, b, k)).collect();
                    for marks in tuples(v, n) {
                        let key = brute_key(&labels, &edges, &marks);
                        *labeled_counts.entry(key.clone()).or_insert(0) += 1;
                        sizes.insert(key, v);
                    }
                }
            }
        }
    }
    // Each class appears v!/|Aut| times among labeled objects.
    labeled_counts
        .into_iter()
        .map(|(k, c)| {
            let fact: u64 = (1..=sizes[&k] as u64).product();
            (k, fact / c)
        })
        .collect()
}

fn key_of(g: &DecoratedGraph) -> Key {
    let edges: Vec<(usize, usize, u32)> = g.skeleton.edges.iter().map(|e| (e.a, e.b, e.degree)).collect();
    brute_key(&g.skeleton.labels, &edges, &g.markings)
}

#[test]
fn enumeration_matches_brute_force() {
    for m in [1u32, 2] {
        let model = TargetModel::projective_space(m);
        for d in 1..=3u32 {
            for n in 0..=2usize {
                let graphs = enumerate(&model, &CurveClass::new(d as i64, 0), n).unwrap();
                let mut seen = BTreeSet::new();
                let mut ours = BTreeMap::new();
                for g in &graphs {
                    assert_eq!(g.skeleton.class(&model), CurveClass::new(d as i64, 0));
                    assert_eq!(g.markings.len(), n);
                    assert!(g.markings.iter().all(|&v| v < g.skeleton.num_vertices()));
                    let k = key_of(g);
                    assert!(seen.insert(k.clone()), "duplicate graph for P^{m}, d={d}, n={n}");
                    ours.insert(k, g.automorphisms);
                }
                let brute = brute_force(m as usize + 1, d, n);
                assert_eq!(ours, brute, "P^{m}, d={d}, n={n}");
            }
        }
    }
}

#[test]
fn degree_two_regressions() {
    let p1 = TargetModel::projective_space(1);
    let g0 = enumerate(&p1, &CurveClass::new(2, 0), 0).unwrap();
    assert_eq!(g0.len(), 3);
    let g1 = enumerate(&p1, &CurveClass::new(2, 0), 1).unwrap();
    assert_eq!(g1.len(), 6);
}
