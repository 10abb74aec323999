//! Enumeration of the left divisors of a fixed element as a finite lattice.
//!
//! Nodes are elements, not words. The enumeration walks the left-Cayley graph
//! restricted to divisors of the target: a node carries the remainder word
//! `d\T`, an atom `a` extends `d` exactly when `θ(d\T, a) = ε`, and the new
//! remainder is `θ(a, d\T)`. Distinct remainder words can denote one element,
//! so nodes are first deduplicated textually and then identified by closing
//! the transition graph under the defining relations (every relation traced
//! from every node, with transition maps of merged classes folded together).
//! That closure is complete: two raw nodes reached by words equal in the
//! monoid end up in one class, because every intermediate word of a
//! derivation stays inside the divisor set.
//!
//! Canonical names come last: a breadth-first pass in letter order labels each
//! class with its shortlex-minimal geodesic word, which is also the canonical
//! (shortlex-minimal) representative of the element's equivalence class.

use crate::complement::ComplementTable;
use crate::presentation::{Letter, Relation, Word};
use crate::reversing::{Reverser, Stop};
use std::collections::HashMap;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    Diverged { steps: u64 },
    CapExceeded { cap: usize },
}

impl std::fmt::Display for LatticeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LatticeError::Diverged { steps } => {
                write!(f, "reversing diverged after {steps} steps")
            }
            LatticeError::CapExceeded { cap } => {
                write!(f, "divisor enumeration exceeded the cap of {cap} nodes")
            }
        }
    }
}

/// The lattice of left divisors of a target element, nodes in shortlex order
/// of their canonical representatives. Node 0 is ε.
#[derive(Clone, Debug)]
pub struct DivisorLattice {
    n_letters: usize,
    reps: Vec<Word>,
    trans: Vec<u32>,
    depth: Vec<u32>,
    top: u32,
}

impl DivisorLattice {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn n_letters(&self) -> usize {
        self.n_letters
    }

    pub fn reps(&self) -> &[Word] {
        &self.reps
    }

    pub fn rep(&self, node: u32) -> &Word {
        &self.reps[node as usize]
    }

    pub fn depth(&self, node: u32) -> u32 {
        self.depth[node as usize]
    }

    /// The node of the target element.
    pub fn top(&self) -> u32 {
        self.top
    }

    pub fn transition(&self, node: u32, a: Letter) -> Option<u32> {
        let t = self.trans[node as usize * self.n_letters + a as usize];
        if t == NONE {
            None
        } else {
            Some(t)
        }
    }

    /// Node of the element represented by `w`, provided every prefix of `w`
    /// divides the target.
    pub fn locate(&self, w: &[Letter]) -> Option<u32> {
        let mut cur = 0u32;
        for &a in w {
            cur = self.transition(cur, a)?;
        }
        Some(cur)
    }

    /// All covering edges (node, atom, node·atom) in node order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, Letter, u32)> + '_ {
        (0..self.reps.len() as u32).flat_map(move |i| {
            (0..self.n_letters as Letter).filter_map(move |a| {
                self.transition(i, a).map(|j| (i, a, j))
            })
        })
    }

    pub fn edge_count(&self) -> usize {
        self.trans.iter().filter(|&&t| t != NONE).count()
    }

    /// True when the element of `node` left-divides the element of `other`,
    /// decided inside the lattice by reversing the stored representatives.
    pub fn divides_within(
        &self,
        rev: &Reverser,
        node: u32,
        other: u32,
    ) -> Result<bool, LatticeError> {
        rev.left_divides(self.rep(node), self.rep(other))
            .map_err(|steps| LatticeError::Diverged { steps })
    }
}

fn hash_word(w: &[Letter]) -> u64 {
    let mut h = DefaultHasher::new();
    w.hash(&mut h);
    h.finish()
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }
    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }
}

/// Enumerate the left divisors of `target`.
///
/// Requires a table whose reversing soundly decides divisibility (cube
/// condition plus atomicity); callers check both beforehand.
pub fn divisors_of(
    table: &ComplementTable,
    relations: &[Relation],
    target: &Word,
    node_cap: usize,
    budget: u64,
) -> Result<DivisorLattice, LatticeError> {
    let nl = table.n_letters();
    let rev = Reverser::new(table, budget);

    // Phase 1: breadth-first expansion, nodes keyed by remainder word.
    let mut rems: Vec<Word> = vec![target.clone()];
    let mut trans: Vec<u32> = vec![NONE; nl];
    let mut buckets: HashMap<u64, Vec<u32>> = HashMap::new();
    buckets.insert(hash_word(target.as_slice()), vec![0]);
    let mut raw_top: Option<u32> = if target.is_empty() { Some(0) } else { None };

    let mut i = 0usize;
    while i < rems.len() {
        let rem = rems[i].clone();
        for a in 0..nl as Letter {
            let mut steps = 0u64;
            match rev.rev_pair(rem.as_slice(), &[a], &mut steps) {
                Ok((rem_a, a_rem)) => {
                    if !rem_a.is_empty() {
                        continue;
                    }
                    let new_rem = Word(a_rem);
                    let h = hash_word(new_rem.as_slice());
                    let bucket = buckets.entry(h).or_default();
                    let mut found = NONE;
                    for &cand in bucket.iter() {
                        if rems[cand as usize] == new_rem {
                            found = cand;
                            break;
                        }
                    }
                    if found == NONE {
                        found = rems.len() as u32;
                        if rems.len() >= node_cap {
                            return Err(LatticeError::CapExceeded { cap: node_cap });
                        }
                        if new_rem.is_empty() && raw_top.is_none() {
                            raw_top = Some(found);
                        }
                        rems.push(new_rem);
                        trans.extend(std::iter::repeat(NONE).take(nl));
                        bucket.push(found);
                    }
                    trans[i * nl + a as usize] = found;
                }
                Err(Stop::Undefined) => continue,
                Err(Stop::Diverged) => return Err(LatticeError::Diverged { steps }),
            }
        }
        i += 1;
    }
    drop(buckets);
    let raw_count = rems.len();
    let raw_top = raw_top.expect("target divides itself");
    drop(rems);

    // Phase 2: close the graph under the relations. Tracing uses the raw
    // transitions, which are total on semantically valid steps, so a relation
    // either completes on both sides or dies on both.
    let mut uf = UnionFind::new(raw_count);
    let follow = |trans: &[u32], start: u32, w: &Word| -> Option<u32> {
        let mut cur = start;
        for &a in w.as_slice() {
            let t = trans[cur as usize * nl + a as usize];
            if t == NONE {
                return None;
            }
            cur = t;
        }
        Some(cur)
    };
    let mut pending: Vec<(u32, u32)> = Vec::new();
    for n in 0..raw_count as u32 {
        for r in relations {
            let e1 = follow(&trans, n, &r.lhs);
            let e2 = follow(&trans, n, &r.rhs);
            if let (Some(e1), Some(e2)) = (e1, e2) {
                if e1 != e2 {
                    pending.push((e1, e2));
                }
            }
        }
        while let Some((a, b)) = pending.pop() {
            let ra = uf.find(a);
            let rb = uf.find(b);
            if ra == rb {
                continue;
            }
            let (keep, gone) = if ra < rb { (ra, rb) } else { (rb, ra) };
            uf.parent[gone as usize] = keep;
            for l in 0..nl {
                let tk = trans[keep as usize * nl + l];
                let tg = trans[gone as usize * nl + l];
                if tk == NONE {
                    trans[keep as usize * nl + l] = tg;
                } else if tg != NONE {
                    let (fk, fg) = (uf.find(tk), uf.find(tg));
                    if fk != fg {
                        pending.push((fk, fg));
                    }
                }
            }
        }
    }

    // Phase 3: shortlex labelling of the classes.
    let root = uf.find(0);
    let mut out_id: Vec<u32> = vec![NONE; raw_count];
    let mut order: Vec<u32> = Vec::new(); // class roots in output order
    out_id[root as usize] = 0;
    order.push(root);
    let mut reps: Vec<Word> = vec![Word::empty()];
    let mut depth: Vec<u32> = vec![0];
    let mut qi = 0usize;
    while qi < order.len() {
        let cls = order[qi];
        let my_out = out_id[cls as usize];
        for a in 0..nl as Letter {
            let t = trans[cls as usize * nl + a as usize];
            if t == NONE {
                continue;
            }
            let child = uf.find(t);
            if out_id[child as usize] == NONE {
                let id = order.len() as u32;
                out_id[child as usize] = id;
                order.push(child);
                let mut w = reps[my_out as usize].clone();
                w.0.push(a);
                reps.push(w);
                depth.push(depth[my_out as usize] + 1);
            }
        }
        qi += 1;
    }

    let n_out = order.len();
    let mut out_trans = vec![NONE; n_out * nl];
    for (oi, &cls) in order.iter().enumerate() {
        for l in 0..nl {
            let t = trans[cls as usize * nl + l];
            if t != NONE {
                out_trans[oi * nl + l] = out_id[uf.find(t) as usize];
            }
        }
    }
    let top = out_id[uf.find(raw_top) as usize];

    Ok(DivisorLattice {
        n_letters: nl,
        reps,
        trans: out_trans,
        depth,
        top,
    })
}
