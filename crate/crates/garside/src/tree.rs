//! Labelled trees, tree products of infinite cyclic groups, vertex exponent
//! calculus, HNN-over-tree decisions, and the chain pipeline for one-relator
//! groups with non-trivial centre.
//!
//! Tree text format (`#` comments allowed):
//!
//! ```text
//! vertex: u1
//! vertex: u2
//! edge: u1 u2 3 2     # λ_{u1,u2} = 3, λ_{u2,u1} = 2
//! ```
//!
//! Chain data format: `p: 4 3`, `q: 2 6`, `stable: yes|no`.

use crate::caps::Caps;
use crate::combinators::{amalgam, hnn_stuffed, AmalgamSpec, HnnBuild, HnnSpec};
use crate::presentation::{Presentation, Word};
use crate::structure::{simple_closure, GarsideStructure};
use crate::Error;
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct LabelledTree {
    names: Vec<String>,
    index: HashMap<String, usize>,
    /// (a, b, λ_{a,b}, λ_{b,a})
    edges: Vec<(usize, usize, u64, u64)>,
    /// adjacency: (neighbour, λ_{v,n}, λ_{n,v})
    adj: Vec<Vec<(usize, u64, u64)>>,
}

impl LabelledTree {
    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn edges(&self) -> &[(usize, usize, u64, u64)] {
        &self.edges
    }

    fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// The unique simple path from `from` to `to` as vertex indices.
    fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut prev = vec![usize::MAX; self.names.len()];
        let mut queue = std::collections::VecDeque::new();
        prev[from] = from;
        queue.push_back(from);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &(n, _, _) in &self.adj[v] {
                if prev[n] == usize::MAX {
                    prev[n] = v;
                    queue.push_back(n);
                }
            }
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    fn label(&self, a: usize, b: usize) -> (u64, u64) {
        for &(n, ab, ba) in &self.adj[a] {
            if n == b {
                return (ab, ba);
            }
        }
        unreachable!("label queried on a non-edge")
    }
}

pub fn parse_tree(text: &str) -> Result<LabelledTree, Error> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<(usize, usize, u64, u64)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vertex:") {
            let name = rest.trim().to_string();
            if name.is_empty() || name.split_whitespace().count() != 1 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "vertex line needs exactly one name".into(),
                });
            }
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("duplicate vertex `{name}`"),
                });
            }
            names.push(name);
        } else if let Some(rest) = line.strip_prefix("edge:") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 4 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "edge line needs: edge: A B labelAB labelBA".into(),
                });
            }
            let a = *index.get(toks[0]).ok_or(Error::Parse {
                line: line_no,
                msg: format!("unknown vertex `{}`", toks[0]),
            })?;
            let b = *index.get(toks[1]).ok_or(Error::Parse {
                line: line_no,
                msg: format!("unknown vertex `{}`", toks[1]),
            })?;
            if a == b {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "loop edge (cycle)".into(),
                });
            }
            let pa: u64 = toks[2].parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad label `{}`", toks[2]),
            })?;
            let pb: u64 = toks[3].parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad label `{}`", toks[3]),
            })?;
            if pa < 2 || pb < 2 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "edge labels must be at least 2".into(),
                });
            }
            edges.push((a, b, pa, pb));
        } else {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("unrecognized line `{line}`"),
            });
        }
    }
    if names.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "tree has no vertices".into(),
        });
    }
    if edges.len() + 1 != names.len() {
        return Err(Error::Invalid(if edges.len() + 1 > names.len() {
            "tree input contains a cycle".into()
        } else {
            "tree input is disconnected".into()
        }));
    }
    let mut adj = vec![Vec::new(); names.len()];
    for &(a, b, ab, ba) in &edges {
        adj[a].push((b, ab, ba));
        adj[b].push((a, ba, ab));
    }
    // connectivity (edge count alone admits cycle + isolated vertex)
    let mut seen = vec![false; names.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &(n, _, _) in &adj[v] {
            if !seen[n] {
                seen[n] = true;
                count += 1;
                stack.push(n);
            }
        }
    }
    if count != names.len() {
        return Err(Error::Invalid("tree input is disconnected".into()));
    }
    Ok(LabelledTree {
        names,
        index,
        edges,
        adj,
    })
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Fold the exponent recursion e₁ = q₁, eᵢ = (e_{i−1} ∨ pᵢ)/pᵢ · qᵢ along a
/// path given as (pᵢ, qᵢ) pairs.
fn fold_path_exponent(labels: &[(u64, u64)]) -> u64 {
    let mut e = 0u64;
    for (i, &(p, q)) in labels.iter().enumerate() {
        e = if i == 0 { q } else { lcm_u64(e, p) / p * q };
    }
    e.max(1)
}

fn path_labels(t: &LabelledTree, path: &[usize]) -> Vec<(u64, u64)> {
    path.windows(2)
        .map(|w| {
            let (p, q) = t.label(w[0], w[1]);
            (p, q)
        })
        .collect()
}

/// ε(v): the power of the vertex generator spanning the centre of the tree
/// product, computed as the lcm of the path recursion over all maximal paths
/// ending at v.
pub fn vertex_exponent(t: &LabelledTree, v: usize) -> u64 {
    let mut acc = 1u64;
    for leaf in 0..t.vertex_names().len() {
        if leaf == v || t.degree(leaf) > 1 {
            continue;
        }
        let path = t.path(leaf, v);
        acc = lcm_u64(acc, fold_path_exponent(&path_labels(t, &path)));
    }
    acc
}

/// Whether the cyclic HNN extension identifying v0 with v1 across a stable
/// letter is Garside: the path label products must agree. Cross-checked
/// against equality of the vertex exponents.
pub fn hnn_over_tree_garside(t: &LabelledTree, v0: usize, v1: usize) -> bool {
    if v0 == v1 {
        return true;
    }
    let labels = path_labels(t, &t.path(v0, v1));
    let prod_p: u64 = labels.iter().map(|&(p, _)| p).product();
    let prod_q: u64 = labels.iter().map(|&(_, q)| q).product();
    let by_products = prod_p == prod_q;
    debug_assert_eq!(
        by_products,
        vertex_exponent(t, v0) == vertex_exponent(t, v1),
        "product criterion and exponent criterion must agree"
    );
    by_products
}

pub struct TreeProductBuild {
    /// One generator per vertex, one relation a^{λ_{a,b}} = b^{λ_{b,a}} per
    /// edge, in fold order.
    pub presentation: Presentation,
    pub structure: GarsideStructure,
    /// vertex indices in attachment (BFS) order
    pub fold_order: Vec<usize>,
}

/// Iterated amalgamation over the edges, breadth-first from the
/// lexicographically least vertex. Every intermediate product is verified.
pub fn tree_product(t: &LabelledTree, caps: &Caps) -> Result<TreeProductBuild, Error> {
    let root = (0..t.names.len())
        .min_by_key(|&v| &t.names[v])
        .expect("non-empty tree");
    let free = |name: &str| -> Result<GarsideStructure, Error> {
        let p = Presentation::parse(&format!("monoid: t_{name}\ngens: {name}\n"))?;
        crate::structure::structure_of(&p, caps)
    };
    let mut structure = free(&t.names[root])?;
    let mut fold_order = vec![root];
    let mut attached = vec![false; t.names.len()];
    attached[root] = true;
    let mut frontier = std::collections::VecDeque::new();
    frontier.push_back(root);
    let mut clean_rels: Vec<(String, u64, String, u64)> = Vec::new();
    while let Some(v) = frontier.pop_front() {
        let mut nbrs: Vec<(usize, u64, u64)> = t.adj[v]
            .iter()
            .copied()
            .filter(|&(n, _, _)| !attached[n])
            .collect();
        nbrs.sort_by(|a, b| t.names[a.0].cmp(&t.names[b.0]));
        for (n, lab_vn, lab_nv) in nbrs {
            if attached[n] {
                continue;
            }
            let fresh = free(&t.names[n])?;
            let h_left = {
                let l = structure
                    .presentation
                    .letter_of(&t.names[v])
                    .expect("attached vertex generator");
                Word::letter(l).pow(lab_vn as usize)
            };
            let h_right = Word::letter(0).pow(lab_nv as usize);
            let spec = AmalgamSpec {
                left: &structure,
                right: &fresh,
                h_left,
                h_right,
            };
            let build = amalgam(&spec, caps)?;
            structure = simple_closure(build.input, caps)?;
            clean_rels.push((t.names[v].clone(), lab_vn, t.names[n].clone(), lab_nv));
            attached[n] = true;
            fold_order.push(n);
            frontier.push_back(n);
        }
    }
    // the clean presentation: vertex generators and one relation per edge
    let gen_names: Vec<String> = fold_order.iter().map(|&v| t.names[v].clone()).collect();
    let refs: Vec<&str> = gen_names.iter().map(|s| s.as_str()).collect();
    let mut presentation = Presentation::new("tree_product", &refs)?;
    for (a, pa, b, pb) in &clean_rels {
        let la = presentation.letter_of(a).unwrap();
        let lb = presentation.letter_of(b).unwrap();
        presentation.add_relation(
            Word::letter(la).pow(*pa as usize),
            Word::letter(lb).pow(*pb as usize),
        )?;
    }
    Ok(TreeProductBuild {
        presentation,
        structure,
        fold_order,
    })
}

// ---------------------------------------------------------------------------
// Chain presentations of one-relator groups with non-trivial centre

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PietrowskiData {
    pub p: Vec<u64>,
    pub q: Vec<u64>,
    pub has_stable: bool,
}

pub fn parse_pietrowski(text: &str) -> Result<PietrowskiData, Error> {
    let mut p: Option<Vec<u64>> = None;
    let mut q: Option<Vec<u64>> = None;
    let mut stable: Option<bool> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let parse_list = |rest: &str| -> Result<Vec<u64>, Error> {
            rest.split_whitespace()
                .map(|tok| {
                    tok.parse().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("bad exponent `{tok}`"),
                    })
                })
                .collect()
        };
        if let Some(rest) = line.strip_prefix("p:") {
            p = Some(parse_list(rest)?);
        } else if let Some(rest) = line.strip_prefix("q:") {
            q = Some(parse_list(rest)?);
        } else if let Some(rest) = line.strip_prefix("stable:") {
            stable = Some(match rest.trim() {
                "yes" => true,
                "no" => false,
                other => {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("stable must be yes or no, got `{other}`"),
                    })
                }
            });
        } else {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("unrecognized line `{line}`"),
            });
        }
    }
    Ok(PietrowskiData {
        p: p.ok_or(Error::Parse {
            line: 0,
            msg: "missing p: line".into(),
        })?,
        q: q.ok_or(Error::Parse {
            line: 0,
            msg: "missing q: line".into(),
        })?,
        has_stable: stable.unwrap_or(false),
    })
}

/// Arithmetic side conditions of the chain form: all exponents at least 2,
/// (pᵢ, qⱼ) coprime for i > j, and equal products when a stable letter closes
/// the chain.
pub fn pietrowski_validate(d: &PietrowskiData) -> Vec<String> {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let mut failures = Vec::new();
    if d.p.len() != d.q.len() {
        failures.push(format!(
            "p and q have different lengths ({} vs {})",
            d.p.len(),
            d.q.len()
        ));
        return failures;
    }
    if d.p.is_empty() {
        failures.push("chain needs at least one edge".into());
        return failures;
    }
    for (i, &x) in d.p.iter().enumerate() {
        if x < 2 {
            failures.push(format!("p{} = {} is below 2", i + 1, x));
        }
    }
    for (j, &x) in d.q.iter().enumerate() {
        if x < 2 {
            failures.push(format!("q{} = {} is below 2", j + 1, x));
        }
    }
    for i in 0..d.p.len() {
        for j in 0..i {
            let g = gcd(d.p[i], d.q[j]);
            if g != 1 {
                failures.push(format!(
                    "gcd(p{}, q{}) = gcd({}, {}) = {} is not 1",
                    i + 1,
                    j + 1,
                    d.p[i],
                    d.q[j],
                    g
                ));
            }
        }
    }
    if d.has_stable {
        let pp: u64 = d.p.iter().product();
        let qq: u64 = d.q.iter().product();
        if pp != qq {
            failures.push(format!(
                "stable letter requires equal products, got {pp} ≠ {qq}"
            ));
        }
    }
    failures
}

pub struct PietrowskiBuild {
    pub presentation: Presentation,
    pub structure: GarsideStructure,
    pub hnn: Option<HnnBuild>,
}

/// Build the chain tree product x₁^{p₁} = x₂^{q₁}, …, and when a stable
/// letter is requested, the stuffed HNN extension identifying x_m with x₁
/// across it (a·x₁ = x_m·a).
pub fn pietrowski_build(d: &PietrowskiData, caps: &Caps) -> Result<PietrowskiBuild, Error> {
    let failures = pietrowski_validate(d);
    if !failures.is_empty() {
        return Err(Error::Invalid(failures.join("; ")));
    }
    let m = d.p.len() + 1;
    let mut text = String::new();
    for i in 1..=m {
        text.push_str(&format!("vertex: x{i}\n"));
    }
    for i in 0..d.p.len() {
        text.push_str(&format!("edge: x{} x{} {} {}\n", i + 1, i + 2, d.p[i], d.q[i]));
    }
    let tree = parse_tree(&text)?;
    let product = tree_product(&tree, caps)?;
    if !d.has_stable {
        return Ok(PietrowskiBuild {
            presentation: product.presentation,
            structure: product.structure,
            hnn: None,
        });
    }
    let base = product.structure;
    let h1 = Word::letter(
        base.presentation
            .letter_of(&format!("x{m}"))
            .expect("chain end generator"),
    );
    let h2 = Word::letter(base.presentation.letter_of("x1").expect("chain start"));
    let spec = HnnSpec {
        base: &base,
        h1,
        h2,
        stable: "a".into(),
    };
    let build = hnn_stuffed(&spec, caps)?;
    let presentation = build.input.presentation.clone();
    let structure = simple_closure(build.input.clone(), caps)?;
    Ok(PietrowskiBuild {
        presentation,
        structure,
        hnn: Some(build),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    const FIG_TREE: &str = "\
vertex: u1\nvertex: u2\nvertex: u3\nvertex: u4\nvertex: u5\nvertex: u6\nvertex: u7\n\
edge: u1 u2 3 2\nedge: u2 u3 4 3\nedge: u2 u4 3 3\nedge: u4 u5 5 4\nedge: u6 u7 3 6\nedge: u6 u4 2 5\n";

    #[test]
    fn parse_small_and_errors() {
        let t = parse_tree("vertex: a\nvertex: b\nedge: a b 3 4\n").unwrap();
        assert_eq!(t.vertex_names().len(), 2);
        assert!(parse_tree("vertex: a\nvertex: b\nedge: a b 1 4\n").is_err());
        let cyc = parse_tree(
            "vertex: a\nvertex: b\nvertex: c\nedge: a b 2 2\nedge: b c 2 2\nedge: c a 2 2\n",
        );
        match cyc {
            Err(Error::Invalid(msg)) => assert!(msg.contains("cycle")),
            other => panic!("unexpected {:?}", other.map(|_| ())),
        }
        let disc = parse_tree("vertex: a\nvertex: b\nvertex: c\nedge: a b 2 2\n");
        match disc {
            Err(Error::Invalid(msg)) => assert!(msg.contains("disconnected")),
            other => panic!("unexpected {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn seven_vertex_tree_parses() {
        let t = parse_tree(FIG_TREE).unwrap();
        assert_eq!(t.vertex_names().len(), 7);
        assert_eq!(t.edges().len(), 6);
    }

    #[test]
    fn single_edge_exponents() {
        let t = parse_tree("vertex: a\nvertex: b\nedge: a b 3 4\n").unwrap();
        assert_eq!(vertex_exponent(&t, t.vertex("a").unwrap()), 3);
        assert_eq!(vertex_exponent(&t, t.vertex("b").unwrap()), 4);
    }

    #[test]
    fn seven_vertex_exponents() {
        let t = parse_tree(FIG_TREE).unwrap();
        let want = [90, 60, 45, 60, 48, 24, 48];
        for (i, w) in want.iter().enumerate() {
            let v = t.vertex(&format!("u{}", i + 1)).unwrap();
            assert_eq!(vertex_exponent(&t, v), *w, "vertex u{}", i + 1);
        }
    }

    #[test]
    fn chain_exponent_example() {
        let t = parse_tree(
            "vertex: x1\nvertex: x2\nvertex: x3\nedge: x1 x2 4 2\nedge: x2 x3 3 6\n",
        )
        .unwrap();
        assert_eq!(vertex_exponent(&t, t.vertex("x3").unwrap()), 12);
    }

    #[test]
    fn hnn_over_tree_decisions() {
        let t = parse_tree(FIG_TREE).unwrap();
        let v = |n: &str| t.vertex(n).unwrap();
        assert!(hnn_over_tree_garside(&t, v("u1"), v("u1")));
        let mut good = Vec::new();
        for i in 1..=7 {
            for j in (i + 1)..=7 {
                if hnn_over_tree_garside(&t, v(&format!("u{i}")), v(&format!("u{j}"))) {
                    good.push((i, j));
                }
            }
        }
        assert_eq!(good, [(2, 4), (5, 7)]);
    }

    #[test]
    fn chain_endpoints_qualify() {
        let t = parse_tree(
            "vertex: x1\nvertex: x2\nvertex: x3\nedge: x1 x2 4 2\nedge: x2 x3 3 6\n",
        )
        .unwrap();
        assert!(hnn_over_tree_garside(
            &t,
            t.vertex("x1").unwrap(),
            t.vertex("x3").unwrap()
        ));
    }

    #[test]
    fn tree_product_presentations() {
        let t = parse_tree("vertex: a\nvertex: b\nedge: a b 3 4\n").unwrap();
        let build = tree_product(&t, &caps()).unwrap();
        let p = &build.presentation;
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.word_string(&p.relations[0].lhs), "a a a");
        assert_eq!(p.word_string(&p.relations[0].rhs), "b b b b");
        assert_eq!(build.structure.simple_count(), 7);

        let t = parse_tree(
            "vertex: x1\nvertex: x2\nvertex: x3\nedge: x1 x2 4 2\nedge: x2 x3 3 6\n",
        )
        .unwrap();
        let build = tree_product(&t, &caps()).unwrap();
        let rels: Vec<String> = build
            .presentation
            .relations
            .iter()
            .map(|r| {
                format!(
                    "{}={}",
                    build.presentation.word_string(&r.lhs),
                    build.presentation.word_string(&r.rhs)
                )
            })
            .collect();
        assert_eq!(rels, ["x1 x1 x1 x1=x2 x2", "x2 x2 x2=x3 x3 x3 x3 x3 x3"]);
    }

    #[test]
    fn pietrowski_parse_validate() {
        let d = parse_pietrowski("p: 4 3\nq: 2 6\nstable: yes\n").unwrap();
        assert_eq!(
            d,
            PietrowskiData {
                p: vec![4, 3],
                q: vec![2, 6],
                has_stable: true
            }
        );
        assert!(pietrowski_validate(&d).is_empty());

        let d = PietrowskiData {
            p: vec![2, 5, 3],
            q: vec![2, 5, 3],
            has_stable: false,
        };
        assert!(pietrowski_validate(&d).is_empty());

        let d = PietrowskiData {
            p: vec![4, 2],
            q: vec![2, 6],
            has_stable: true,
        };
        let failures = pietrowski_validate(&d);
        assert!(failures.iter().any(|f| f.contains("gcd(p2, q1)")));
    }

    #[test]
    fn pietrowski_small_builds() {
        // m = 2, no stable: a (3,4) torus chain
        let d = PietrowskiData {
            p: vec![3],
            q: vec![4],
            has_stable: false,
        };
        let b = pietrowski_build(&d, &caps()).unwrap();
        assert_eq!(b.structure.simple_count(), 7);

        // m = 2 with stable letter: the three-generator stuffed monoid; its
        // simple count is replayed against the brute-force divisor oracle
        let d = PietrowskiData {
            p: vec![2],
            q: vec![2],
            has_stable: true,
        };
        let b = pietrowski_build(&d, &caps()).unwrap();
        assert!(b.hnn.is_some());
        let gs = &b.structure;
        let oracle = crate::oracle::divisors_by_enumeration(
            &gs.presentation,
            &gs.delta,
            caps().class_caps(),
        )
        .unwrap();
        assert_eq!(gs.simple_count(), oracle.len());
        assert_eq!(gs.simple_count(), 13);
    }
}
