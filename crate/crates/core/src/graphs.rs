//! Decorated trees indexing the torus-fixed loci of genus-0 stable maps.
//!
//! A skeleton is a tree whose vertices sit at fixed points and whose edges
//! cover invariant lines with some degree. Markings are distributed over the
//! vertices afterwards. Isomorphism classes are detected by an AHU-style
//! canonical code computed from the tree center, which also yields the size
//! of the automorphism group.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::target::{CurveClass, TargetModel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub line: usize,
    pub degree: u32,
}

impl Edge {
    pub fn other(&self, v: usize) -> usize {
        if v == self.a {
            self.b
        } else {
            self.a
        }
    }
}

/// An unmarked decorated tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Skeleton {
    /// Fixed point index of each vertex.
    pub labels: Vec<usize>,
    pub edges: Vec<Edge>,
    /// Order of the automorphism group of the decorated tree.
    pub automorphisms: u64,
    #[serde(skip)]
    pub code: String,
}

impl Skeleton {
    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    /// Incident edge indices per vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.labels.len()];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.a].push(i);
            inc[e.b].push(i);
        }
        inc
    }

    pub fn degree_product(&self) -> u64 {
        self.edges.iter().map(|e| e.degree as u64).product()
    }

    pub fn sorted_degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.edges.iter().map(|e| e.degree).collect();
        d.sort_unstable();
        d
    }

    pub fn class(&self, model: &TargetModel) -> CurveClass {
        self.edges
            .iter()
            .fold(CurveClass::default(), |acc, e| acc.plus(&model.lines()[e.line].class.scaled(e.degree as i64)))
    }
}

/// A skeleton with markings assigned to vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecoratedGraph {
    #[serde(flatten)]
    pub skeleton: Skeleton,
    /// Vertex carrying each marking.
    pub markings: Vec<usize>,
    /// |Aut| of the marked decorated tree.
    pub automorphisms: u64,
    /// |Aut| times the product of edge degrees.
    pub aut_factor: u64,
}

/// Rooted unlabeled trees as canonical parenthesis strings, by vertex count.
fn rooted_trees(max_n: usize) -> Vec<Vec<String>> {
    let mut by_size: Vec<Vec<String>> = vec![Vec::new(); max_n + 1];
    if max_n == 0 {
        return by_size;
    }
    by_size[1].push("()".to_string());
    for n in 2..=max_n {
        // Forests of total size n − 1 as non-increasing sequences of trees.
        let flat: Vec<(usize, &String)> = (1..n).flat_map(|s| by_size[s].iter().map(move |t| (s, t))).collect();
        let mut out = Vec::new();
        let mut stack = Vec::new();
        forests(&flat, n - 1, flat.len(), &mut stack, &mut out);
        by_size[n] = out;
    }
    by_size
}

fn forests(flat: &[(usize, &String)], remaining: usize, max_idx: usize, stack: &mut Vec<usize>, out: &mut Vec<String>) {
    if remaining == 0 {
        let mut children: Vec<&str> = stack.iter().map(|&i| flat[i].1.as_str()).collect();
        children.sort_unstable();
        out.push(format!("({})", children.concat()));
        return;
    }
    for idx in 0..max_idx {
        let (size, _) = flat[idx];
        if size <= remaining {
            stack.push(idx);
            forests(flat, remaining - size, idx + 1, stack, out);
            stack.pop();
        }
    }
}

fn parse_rooted(code: &str) -> Vec<Vec<usize>> {
    let mut adj: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for ch in code.chars() {
        match ch {
            '(' => {
                let v = adj.len();
                adj.push(Vec::new());
                if let Some(&p) = stack.last() {
                    adj[p].push(v);
                    adj[v].push(p);
                }
                stack.push(v);
            }
            ')' => {
                stack.pop();
            }
            _ => unreachable!(),
        }
    }
    adj
}

/// Center vertices of a tree (one or two).
fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut deg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut leaves: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    let mut left = n;
    while left > 2 {
        left -= leaves.len();
        let mut next = Vec::new();
        for &l in &leaves {
            for &u in &adj[l] {
                if deg[u] > 1 {
                    deg[u] -= 1;
                    if deg[u] == 1 {
                        next.push(u);
                    }
                }
            }
            deg[l] = 0;
        }
        leaves = next;
    }
    leaves
}

/// Unlabeled free trees with `n` vertices, one adjacency list per class.
pub fn free_trees(n: usize) -> Vec<Vec<Vec<usize>>> {
    let rooted = rooted_trees(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for code in &rooted[n] {
        let adj = parse_rooted(code);
        let labels = vec![0usize; n];
        let edges: Vec<(usize, usize, u32)> = adj
            .iter()
            .enumerate()
            .flat_map(|(v, ns)| ns.iter().filter(move |&&u| u > v).map(move |&u| (v, u, 0)))
            .collect();
        let (key, _) = canonical(&labels, &edges, &vec![Vec::new(); n]);
        if seen.insert(key) {
            out.push(adj);
        }
    }
    out
}

/// Canonical code and automorphism count of a tree with vertex labels,
/// edge labels and per-vertex marking sets.
fn canonical(labels: &[usize], edges: &[(usize, usize, u32)], marks: &[Vec<usize>]) -> (String, u64) {
    let n = labels.len();
    let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
    for &(a, b, d) in edges {
        adj[a].push((b, d));
        adj[b].push((a, d));
    }
    let plain: Vec<Vec<usize>> = adj.iter().map(|a| a.iter().map(|x| x.0).collect()).collect();
    let c = centers(&plain);
    let vertex_tag = |v: usize| {
        let m: Vec<String> = marks[v].iter().map(|x| x.to_string()).collect();
        format!("{}{{{}}}", labels[v], m.join(","))
    };
    // Rooted code and aut count of the subtree at v, away from `parent`.
    fn rooted(
        v: usize,
        parent: Option<usize>,
        adj: &[Vec<(usize, u32)>],
        tag: &dyn Fn(usize) -> String,
    ) -> (String, u64) {
        let mut kids: Vec<(String, u64)> = adj[v]
            .iter()
            .filter(|&&(u, _)| Some(u) != parent)
            .map(|&(u, d)| {
                let (c, a) = rooted(u, Some(v), adj, tag);
                (format!("{d}:{c}"), a)
            })
            .collect();
        kids.sort();
        let mut aut: u64 = kids.iter().map(|k| k.1).product();
        let mut i = 0;
        while i < kids.len() {
            let mut j = i;
            while j < kids.len() && kids[j].0 == kids[i].0 {
                j += 1;
            }
            aut *= (1..=(j - i) as u64).product::<u64>();
            i = j;
        }
        let body: Vec<&str> = kids.iter().map(|k| k.0.as_str()).collect();
        (format!("[{}|{}]", tag(v), body.join(",")), aut)
    }
    if c.len() == 1 {
        rooted(c[0], None, &adj, &vertex_tag)
    } else {
        let (u, v) = (c[0], c[1]);
        let d = adj[u].iter().find(|x| x.0 == v).unwrap().1;
        let (cu, au) = rooted(u, Some(v), &adj, &vertex_tag);
        let (cv, av) = rooted(v, Some(u), &adj, &vertex_tag);
        let swap = if cu == cv { 2 } else { 1 };
        let (lo, hi) = if cu <= cv { (cu, cv) } else { (cv, cu) };
        (format!("<{lo}~{d}~{hi}>"), au * av * swap)
    }
}

fn check_stable(model: &TargetModel, class: &CurveClass, n: usize) -> Result<()> {
    let _ = model;
    if class.is_zero() && n < 3 {
        return Err(Error::UnstableModuli);
    }
    Ok(())
}

/// All unmarked decorated trees of the given class, in canonical order.
pub fn skeletons(model: &TargetModel, class: &CurveClass) -> Result<Vec<Skeleton>> {
    if !model.is_effective(class) {
        return Ok(Vec::new());
    }
    if class.is_zero() {
        return Ok((0..model.fixed_points().len())
            .map(|p| Skeleton {
                labels: vec![p],
                edges: Vec::new(),
                automorphisms: 1,
                code: canonical(&[p], &[], &[Vec::new()]).0,
            })
            .collect());
    }
    let budget = model.ample_bound(class);
    if budget <= 0 {
        return Ok(Vec::new());
    }
    let mut found: BTreeMap<String, Skeleton> = BTreeMap::new();
    for num_edges in 1..=budget as usize {
        for shape in free_trees(num_edges + 1) {
            decorate_shape(model, class, budget, &shape, &mut found);
        }
    }
    let mut out: Vec<Skeleton> = found.into_values().collect();
    out.sort_by(|a, b| (a.edges.len(), a.sorted_degrees(), &a.code).cmp(&(b.edges.len(), b.sorted_degrees(), &b.code)));
    Ok(out)
}

fn decorate_shape(
    model: &TargetModel,
    class: &CurveClass,
    budget: i64,
    shape: &[Vec<usize>],
    found: &mut BTreeMap<String, Skeleton>,
) {
    let n = shape.len();
    // BFS order from vertex 0 so every vertex after the first has an earlier parent.
    let mut order = vec![0usize];
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &u in &shape[v] {
            if !seen[u] {
                seen[u] = true;
                parent[u] = v;
                order.push(u);
                queue.push_back(u);
            }
        }
    }
    let mut labels = vec![0usize; n];
    label_rec(model, class, budget, &order, &parent, 0, &mut labels, found);
}

#[allow(clippy::too_many_arguments)]
fn label_rec(
    model: &TargetModel,
    class: &CurveClass,
    budget: i64,
    order: &[usize],
    parent: &[usize],
    i: usize,
    labels: &mut Vec<usize>,
    found: &mut BTreeMap<String, Skeleton>,
) {
    if i == order.len() {
        let edges: Vec<(usize, usize, usize)> = order[1..]
            .iter()
            .map(|&v| {
                let p = parent[v];
                (p, v, model.line_between(labels[p], labels[v]).unwrap())
            })
            .collect();
        let mut degrees = vec![0u32; edges.len()];
        degree_rec(model, class, budget, &edges, 0, CurveClass::default(), 0, labels, &mut degrees, found);
        return;
    }
    let v = order[i];
    if i == 0 {
        for p in 0..model.fixed_points().len() {
            labels[v] = p;
            label_rec(model, class, budget, order, parent, i + 1, labels, found);
        }
    } else {
        let pl = labels[parent[v]];
        let neighbors: Vec<usize> = model.tangent_weights(pl).iter().map(|t| t.0).collect();
        for q in neighbors {
            labels[v] = q;
            label_rec(model, class, budget, order, parent, i + 1, labels, found);
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn degree_rec(
    model: &TargetModel,
    class: &CurveClass,
    budget: i64,
    edges: &[(usize, usize, usize)],
    i: usize,
    acc: CurveClass,
    used: i64,
    labels: &[usize],
    degrees: &mut Vec<u32>,
    found: &mut BTreeMap<String, Skeleton>,
) {
    if i == edges.len() {
        if acc != *class {
            return;
        }
        let triples: Vec<(usize, usize, u32)> =
            edges.iter().zip(degrees.iter()).map(|(&(a, b, _), &d)| (a, b, d)).collect();
        let (code, aut) = canonical(labels, &triples, &vec![Vec::new(); labels.len()]);
        found.entry(code.clone()).or_insert_with(|| Skeleton {
            labels: labels.to_vec(),
            edges: edges
                .iter()
                .zip(degrees.iter())
                .map(|(&(a, b, line), &degree)| Edge { a, b, line, degree })
                .collect(),
            automorphisms: aut,
            code,
        });
        return;
    }
    let line = edges[i].2;
    let cost = model.ample_degree_of_line(line);
    let rest = (edges.len() - i - 1) as i64;
    let mut d = 1i64;
    while used + d * cost + rest <= budget {
        degrees[i] = d as u32;
        let next = acc.plus(&model.lines()[line].class.scaled(d));
        degree_rec(model, class, budget, edges, i + 1, next, used + d * cost, labels, degrees, found);
        d += 1;
    }
}

/// Every marked decorated graph of the given class with `n` markings,
/// each isomorphism class exactly once.
pub fn enumerate(model: &TargetModel, class: &CurveClass, n: usize) -> Result<Vec<DecoratedGraph>> {
    check_stable(model, class, n)?;
    let mut out = Vec::new();
    for sk in skeletons(model, class)? {
        let nv = sk.num_vertices();
        let triples: Vec<(usize, usize, u32)> = sk.edges.iter().map(|e| (e.a, e.b, e.degree)).collect();
        let mut seen: BTreeMap<String, DecoratedGraph> = BTreeMap::new();
        let mut assign = vec![0usize; n];
        loop {
            let mut marks = vec![Vec::new(); nv];
            for (i, &v) in assign.iter().enumerate() {
                marks[v].push(i);
            }
            let (code, aut) = canonical(&sk.labels, &triples, &marks);
            seen.entry(code).or_insert_with(|| DecoratedGraph {
                skeleton: sk.clone(),
                markings: assign.clone(),
                automorphisms: aut,
                aut_factor: aut * sk.degree_product(),
            });
            // Next function {markings} → {vertices} in lexicographic order.
            let mut k = 0;
            while k < n {
                assign[k] += 1;
                if assign[k] < nv {
                    break;
                }
                assign[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        out.extend(seen.into_values());
    }
    Ok(out)
}

/// Graph counts keyed by (number of edges, sorted edge degrees).
pub fn count_by_profile(
    model: &TargetModel,
    class: &CurveClass,
    n: usize,
) -> Result<BTreeMap<(usize, Vec<u32>), usize>> {
    let mut table = BTreeMap::new();
    for g in enumerate(model, class, n)? {
        *table.entry((g.skeleton.edges.len(), g.skeleton.sorted_degrees())).or_insert(0) += 1;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_tree_counts() {
        let counts: Vec<usize> = (1..=9).map(|n| free_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23, 47]);
    }

    #[test]
    fn p1_degree_one() {
        let m = TargetModel::projective_space(1);
        let gs = enumerate(&m, &CurveClass::new(1, 0), 0).unwrap();
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0].aut_factor, 1);
    }

    #[test]
    fn p1_degree_two() {
        let m = TargetModel::projective_space(1);
        let gs = enumerate(&m, &CurveClass::new(2, 0), 0).unwrap();
        assert_eq!(gs.len(), 3);
        assert!(gs.iter().all(|g| g.aut_factor == 2));
        let marked = enumerate(&m, &CurveClass::new(2, 0), 1).unwrap();
        assert_eq!(marked.len(), 6);
    }

    #[test]
    fn profiles() {
        let m = TargetModel::projective_space(1);
        let t = count_by_profile(&m, &CurveClass::new(2, 0), 0).unwrap();
        assert_eq!(t[&(1, vec![2])], 1);
        assert_eq!(t[&(2, vec![1, 1])], 2);
        let p2 = TargetModel::projective_space(2);
        let t = count_by_profile(&p2, &CurveClass::new(1, 0), 0).unwrap();
        assert_eq!(t, [((1, vec![1]), 3)].into());
        let pt = TargetModel::point();
        let t = count_by_profile(&pt, &CurveClass::default(), 3).unwrap();
        assert_eq!(t, [((0, vec![]), 1)].into());
    }

    #[test]
    fn unstable_rejected() {
        let pt = TargetModel::point();
        assert_eq!(enumerate(&pt, &CurveClass::default(), 2), Err(Error::UnstableModuli));
    }

    #[test]
    fn bicentral_swap_counts() {
        // With three unit edges on P¹ there is one alternating path, whose
        // reversal swaps q0 and q1 and so is not a symmetry, and two stars.
        let m = TargetModel::projective_space(1);
        let sk = skeletons(&m, &CurveClass::new(3, 0)).unwrap();
        let three: Vec<&Skeleton> = sk.iter().filter(|s| s.edges.len() == 3).collect();
        let mut auts: Vec<u64> = three.iter().map(|s| s.automorphisms).collect();
        auts.sort();
        assert_eq!(auts, vec![1, 6, 6]);
        // Paths with degrees 1 and 2 have no symmetry, one per middle label.
        let two: Vec<&Skeleton> = sk.iter().filter(|s| s.edges.len() == 2).collect();
        assert_eq!(two.len(), 2);
        assert!(two.iter().all(|s| s.automorphisms == 1));
    }
}
