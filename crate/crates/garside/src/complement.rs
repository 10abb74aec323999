//! Syntactic right-complements: the letter-level table θ behind word reversing.
//!
//! A presentation is right-complemented when it has no ε-relation, no relation
//! `s… = s…`, and at most one relation `s… = t…` per unordered letter pair.
//! Splitting each relation at its leading letters then yields the partial map
//! θ with `x·θ(x,y) = y·θ(y,x)`.
//!
//! Letter pairs without a relation get a canonical completion when a common
//! right multiple exists: the pair's least common multiple is located by a
//! bounded search and split into the two complements, taking shortlex-minimal
//! words on both sides. The five-generator table of a typical amalgam comes
//! out fully defined this way; pairs of a free product stay undefined.

use crate::atomicity::{canonical_rep, equivalence_class, ClassCaps};
use crate::presentation::{Letter, Presentation, Relation, Word};
use crate::Error;
use std::collections::BTreeSet;

/// Reasons a presentation fails to be right-complemented.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotComplemented {
    EpsilonRelation { relation: usize },
    SameHead { relation: usize },
    DuplicatePair { x: String, y: String },
}

impl std::fmt::Display for NotComplemented {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NotComplemented::EpsilonRelation { relation } => {
                write!(f, "relation #{relation} has an empty side")
            }
            NotComplemented::SameHead { relation } => {
                write!(f, "relation #{relation} has both sides starting with the same letter")
            }
            NotComplemented::DuplicatePair { x, y } => {
                write!(f, "two relations start with the letter pair {x}/{y}")
            }
        }
    }
}

/// The partial map θ on letter pairs, with θ(x,x) = ε built in.
#[derive(Clone, Debug)]
pub struct ComplementTable {
    n: usize,
    entries: Vec<Option<Word>>,
}

impl ComplementTable {
    pub fn new_empty(n_letters: usize) -> Self {
        let mut t = ComplementTable {
            n: n_letters,
            entries: vec![None; n_letters * n_letters],
        };
        for x in 0..n_letters {
            t.entries[x * n_letters + x] = Some(Word::empty());
        }
        t
    }

    pub fn n_letters(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: Letter, y: Letter) -> Option<&Word> {
        self.entries[x as usize * self.n + y as usize].as_ref()
    }

    pub fn set(&mut self, x: Letter, y: Letter, w: Word) {
        self.entries[x as usize * self.n + y as usize] = Some(w);
    }

    /// Letter pairs (x, y), x ≠ y, with a defined entry.
    pub fn defined_pairs(&self) -> impl Iterator<Item = (Letter, Letter)> + '_ {
        (0..self.n).flat_map(move |x| {
            (0..self.n).filter_map(move |y| {
                if x != y && self.entries[x * self.n + y].is_some() {
                    Some((x as Letter, y as Letter))
                } else {
                    None
                }
            })
        })
    }

    /// The relations `x·θ(x,y) = y·θ(y,x)` over unordered pairs, in letter order.
    pub fn induced_relations(&self) -> Vec<Relation> {
        let mut out = Vec::new();
        for x in 0..self.n as Letter {
            for y in (x + 1)..self.n as Letter {
                if let (Some(u), Some(v)) = (self.get(x, y), self.get(y, x)) {
                    let mut lhs = Word::letter(x);
                    lhs.0.extend_from_slice(&u.0);
                    let mut rhs = Word::letter(y);
                    rhs.0.extend_from_slice(&v.0);
                    out.push(Relation { lhs, rhs });
                }
            }
        }
        out
    }

    /// θ(x,y) defined iff θ(y,x) defined, and the diagonal is ε.
    pub fn check_symmetry(&self) -> bool {
        for x in 0..self.n {
            if self.entries[x * self.n + x].as_ref() != Some(&Word::empty()) {
                return false;
            }
            for y in 0..self.n {
                if self.entries[x * self.n + y].is_some() != self.entries[y * self.n + x].is_some()
                {
                    return false;
                }
            }
        }
        true
    }
}

/// Split the relations at their leading letters, without completion. The
/// induced relations of the result are exactly the input relations.
pub fn split_complement_table(p: &Presentation) -> Result<ComplementTable, Error> {
    let mut t = ComplementTable::new_empty(p.gen_count());
    for (i, r) in p.relations.iter().enumerate() {
        if r.lhs.is_empty() || r.rhs.is_empty() {
            return Err(Error::NotComplemented(NotComplemented::EpsilonRelation {
                relation: i,
            }));
        }
        let x = r.lhs.0[0];
        let y = r.rhs.0[0];
        if x == y {
            return Err(Error::NotComplemented(NotComplemented::SameHead {
                relation: i,
            }));
        }
        if t.get(x, y).is_some() || t.get(y, x).is_some() {
            return Err(Error::NotComplemented(NotComplemented::DuplicatePair {
                x: p.gen_name(x).to_string(),
                y: p.gen_name(y).to_string(),
            }));
        }
        t.set(x, y, Word(r.lhs.0[1..].to_vec()));
        t.set(y, x, Word(r.rhs.0[1..].to_vec()));
    }
    debug_assert!(t.check_symmetry());
    Ok(t)
}

/// Canonical completion of one missing pair: walk the right multiples of `x`
/// smallest first and stop at the first one `y` divides. Returns the two
/// complement words (shortlex-minimal members of the found class, beheaded).
fn complete_pair(
    p: &Presentation,
    x: Letter,
    y: Letter,
    caps: ClassCaps,
) -> Option<(Word, Word)> {
    let caps = ClassCaps {
        length_cap: caps.length_cap.min(12),
        size_cap: caps.size_cap,
    };
    let mut frontier: BTreeSet<Word> = BTreeSet::new();
    let mut seen: BTreeSet<Word> = BTreeSet::new();
    let start = canonical_rep(p, &Word::letter(x), caps)?;
    frontier.insert(start.clone());
    seen.insert(start);
    let mut examined = 0usize;
    while let Some(m) = frontier.pop_first() {
        examined += 1;
        if examined > 4096 {
            return None;
        }
        let cls = equivalence_class(p, &m, caps);
        if cls.truncated {
            continue;
        }
        if cls.members.iter().any(|w| w.as_slice().first() == Some(&y)) {
            let behead = |h: Letter| {
                cls.members
                    .iter()
                    .filter(|w| w.as_slice().first() == Some(&h))
                    .map(|w| Word(w.as_slice()[1..].to_vec()))
                    .min()
            };
            return Some((behead(x)?, behead(y)?));
        }
        if m.len() >= caps.length_cap {
            continue;
        }
        for a in 0..p.gen_count() as Letter {
            let mut w = m.clone();
            w.0.push(a);
            if let Some(c) = canonical_rep(p, &w, caps) {
                if seen.insert(c.clone()) {
                    frontier.insert(c);
                }
            }
        }
    }
    None
}

/// The letter-level complement table: relations split at their heads, plus a
/// canonical completion of every relation-free pair that admits a common
/// right multiple within the caps. Pairs without one stay undefined.
pub fn right_complement_table(p: &Presentation, caps: ClassCaps) -> Result<ComplementTable, Error> {
    let mut t = split_complement_table(p)?;
    for x in 0..p.gen_count() as Letter {
        for y in (x + 1)..p.gen_count() as Letter {
            if t.get(x, y).is_some() {
                continue;
            }
            if let Some((xw, yw)) = complete_pair(p, x, y, caps) {
                t.set(x, y, xw);
                t.set(y, x, yw);
            }
        }
    }
    debug_assert!(t.check_symmetry());
    Ok(t)
}
