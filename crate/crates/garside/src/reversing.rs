//! Word reversing: the unique extension of a syntactic right-complement from
//! letters to words.
//!
//! The extension is driven by
//!
//! ```text
//! θ(u, ε) = ε     θ(ε, u) = u
//! θ(u, vw) = θ(u,v) · θ(θ(v,u), w)     θ(vw, u) = θ(w, θ(v,u))
//! ```
//!
//! Both directions of a pair come out of a single computation. Partiality is
//! in-band: a missing table entry gives `Undefined`, exhausting the step
//! budget gives `Diverged` (reversing need not terminate on arbitrary
//! presentations; no general bound exists).

use crate::complement::ComplementTable;
use crate::presentation::{Letter, Word};

/// Result of extending θ to a pair of words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReversingOutcome {
    Defined(Word),
    Undefined,
    Diverged(u64),
}

impl ReversingOutcome {
    pub fn defined(&self) -> Option<&Word> {
        match self {
            ReversingOutcome::Defined(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_epsilon(&self) -> bool {
        matches!(self, ReversingOutcome::Defined(w) if w.is_empty())
    }
}

pub(crate) enum Stop {
    Undefined,
    Diverged,
}

pub struct Reverser<'t> {
    pub table: &'t ComplementTable,
    pub budget: u64,
}

impl<'t> Reverser<'t> {
    pub fn new(table: &'t ComplementTable, budget: u64) -> Self {
        Reverser { table, budget }
    }

    /// Compute (θ(u,v), θ(v,u)) jointly. `steps` counts letter-pair lookups.
    ///
    /// Iterative rendition of the extension rules. A frame pushes one row
    /// word through the shared column register:
    ///
    /// ```text
    /// θ(x·u1, v)   = θ(u1, θ(x,v))                (column evolves)
    /// θ(v, x·u1)   = θ(v,x) · θ(θ(x,v), u1)       (vu accumulates)
    /// θ(x, y·v1)   = θ(x,y) · θ(θ(y,x), v1)       (child frame, prefix θ(x,y))
    /// θ(y·v1, x)   = θ(v1, θ(y,x))
    /// ```
    ///
    /// Divergent reversings grow the heap, not the call stack, until the
    /// budget trips.
    pub(crate) fn rev_pair(
        &self,
        u: &[Letter],
        v: &[Letter],
        steps: &mut u64,
    ) -> Result<(Vec<Letter>, Vec<Letter>), Stop> {
        struct Frame<'f> {
            row: &'f [Letter],
            at: usize,
            vu: Vec<Letter>,
            prefix: &'f [Letter],
        }
        let mut col: std::collections::VecDeque<Letter> = v.iter().copied().collect();
        let mut stack = vec![Frame {
            row: u,
            at: 0,
            vu: Vec::new(),
            prefix: &[],
        }];
        loop {
            let frame = stack.last_mut().expect("machine stack never empties here");
            if frame.at == frame.row.len() {
                let done = stack.pop().unwrap();
                for &p in done.prefix.iter().rev() {
                    col.push_front(p);
                }
                match stack.last_mut() {
                    None => return Ok((col.into_iter().collect(), done.vu)),
                    Some(parent) => {
                        parent.vu.extend_from_slice(&done.vu);
                    }
                }
                continue;
            }
            let x = frame.row[frame.at];
            frame.at += 1;
            let Some(&y) = col.front() else {
                frame.vu.push(x);
                continue;
            };
            *steps += 1;
            if *steps > self.budget {
                return Err(Stop::Diverged);
            }
            let a = self.table.get(x, y).ok_or(Stop::Undefined)?;
            let b = self.table.get(y, x).ok_or(Stop::Undefined)?;
            col.pop_front();
            stack.push(Frame {
                row: b.as_slice(),
                at: 0,
                vu: Vec::new(),
                prefix: a.as_slice(),
            });
        }
    }

    fn outcome(&self, r: Result<Vec<Letter>, Stop>, steps: u64) -> ReversingOutcome {
        match r {
            Ok(w) => ReversingOutcome::Defined(Word(w)),
            Err(Stop::Undefined) => ReversingOutcome::Undefined,
            Err(Stop::Diverged) => ReversingOutcome::Diverged(steps),
        }
    }

    /// θ(u, v).
    pub fn complement(&self, u: &Word, v: &Word) -> ReversingOutcome {
        let mut steps = 0;
        let r = self.rev_pair(&u.0, &v.0, &mut steps).map(|(uv, _)| uv);
        self.outcome(r, steps)
    }

    /// (θ(u,v), θ(v,u)) as outcomes of one computation.
    pub fn complement_pair(&self, u: &Word, v: &Word) -> (ReversingOutcome, ReversingOutcome) {
        let mut steps = 0;
        match self.rev_pair(&u.0, &v.0, &mut steps) {
            Ok((uv, vu)) => (
                ReversingOutcome::Defined(Word(uv)),
                ReversingOutcome::Defined(Word(vu)),
            ),
            Err(Stop::Undefined) => (ReversingOutcome::Undefined, ReversingOutcome::Undefined),
            Err(Stop::Diverged) => (
                ReversingOutcome::Diverged(steps),
                ReversingOutcome::Diverged(steps),
            ),
        }
    }

    /// Double reversing: u ≡ v iff θ(u,v) = ε and θ(v,u) = ε.
    ///
    /// Sound once the table satisfies the cube condition and the monoid is
    /// atomic; callers are expected to have checked both.
    pub fn words_equal(&self, u: &Word, v: &Word) -> Result<bool, u64> {
        let mut steps = 0;
        match self.rev_pair(&u.0, &v.0, &mut steps) {
            Ok((uv, vu)) => Ok(uv.is_empty() && vu.is_empty()),
            Err(Stop::Undefined) => Ok(false),
            Err(Stop::Diverged) => Err(steps),
        }
    }

    /// d left-divides big iff θ(big, d) = ε.
    pub fn left_divides(&self, d: &Word, big: &Word) -> Result<bool, u64> {
        let mut steps = 0;
        match self.rev_pair(&big.0, &d.0, &mut steps) {
            Ok((big_d, _)) => Ok(big_d.is_empty()),
            Err(Stop::Undefined) => Ok(false),
            Err(Stop::Diverged) => Err(steps),
        }
    }

    /// a ∨ b = a·θ(a,b).
    pub fn right_lcm(&self, a: &Word, b: &Word) -> ReversingOutcome {
        match self.complement(a, b) {
            ReversingOutcome::Defined(c) => ReversingOutcome::Defined(a.concat(&c)),
            other => other,
        }
    }
}

/// One failed (or diverged) triple of the cube check.
#[derive(Clone, Debug)]
pub struct CubeFailure {
    pub x: Letter,
    pub y: Letter,
    pub z: Letter,
    pub lhs: ReversingOutcome,
    pub rhs: ReversingOutcome,
}

/// Outcome of checking the θ-cube condition on all letter triples.
#[derive(Clone, Debug)]
pub struct CubeReport {
    pub ok: bool,
    pub failures: Vec<CubeFailure>,
}

enum Side {
    Defined(Word),
    Undefined,
    Diverged(u64),
}

fn cube_side(
    rev: &Reverser,
    u: &Word,
    v: &Word,
    w: &Word,
) -> Side {
    // θ(θ(u,v), θ(u,w)): any Undefined inside makes the side undefined.
    let uv = match rev.complement(u, v) {
        ReversingOutcome::Defined(x) => x,
        ReversingOutcome::Undefined => return Side::Undefined,
        ReversingOutcome::Diverged(s) => return Side::Diverged(s),
    };
    let uw = match rev.complement(u, w) {
        ReversingOutcome::Defined(x) => x,
        ReversingOutcome::Undefined => return Side::Undefined,
        ReversingOutcome::Diverged(s) => return Side::Diverged(s),
    };
    match rev.complement(&uv, &uw) {
        ReversingOutcome::Defined(x) => Side::Defined(x),
        ReversingOutcome::Undefined => Side::Undefined,
        ReversingOutcome::Diverged(s) => Side::Diverged(s),
    }
}

/// The θ-cube condition for one triple: θ(θ(u,v), θ(u,w)) = θ(θ(v,u), θ(v,w)),
/// where either both sides are defined and equal or neither is defined.
/// Divergence is an error, not a verdict.
pub fn cube_condition(
    table: &ComplementTable,
    u: &Word,
    v: &Word,
    w: &Word,
    budget: u64,
) -> Result<bool, u64> {
    let rev = Reverser::new(table, budget);
    let lhs = cube_side(&rev, u, v, w);
    let rhs = cube_side(&rev, v, u, w);
    match (lhs, rhs) {
        (Side::Diverged(s), _) | (_, Side::Diverged(s)) => Err(s),
        (Side::Defined(a), Side::Defined(b)) => Ok(a == b),
        (Side::Undefined, Side::Undefined) => Ok(true),
        _ => Ok(false),
    }
}

/// Check the cube condition on all ordered triples of pairwise distinct
/// letters. This is the letter-level hypothesis that, with atomicity, yields
/// left cancellativity and conditional right lcms.
pub fn cube_check_all(table: &ComplementTable, budget: u64) -> CubeReport {
    let n = table.n_letters() as u8;
    let rev = Reverser::new(table, budget);
    let mut failures = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if y == x {
                continue;
            }
            for z in 0..n {
                if z == x || z == y {
                    continue;
                }
                let (wx, wy, wz) = (Word::letter(x), Word::letter(y), Word::letter(z));
                let lhs = cube_side(&rev, &wx, &wy, &wz);
                let rhs = cube_side(&rev, &wy, &wx, &wz);
                let bad = match (&lhs, &rhs) {
                    (Side::Diverged(_), _) | (_, Side::Diverged(_)) => true,
                    (Side::Defined(a), Side::Defined(b)) => a != b,
                    (Side::Undefined, Side::Undefined) => false,
                    _ => true,
                };
                if bad {
                    let pack = |s: Side| match s {
                        Side::Defined(w) => ReversingOutcome::Defined(w),
                        Side::Undefined => ReversingOutcome::Undefined,
                        Side::Diverged(n) => ReversingOutcome::Diverged(n),
                    };
                    failures.push(CubeFailure {
                        x,
                        y,
                        z,
                        lhs: pack(lhs),
                        rhs: pack(rhs),
                    });
                }
            }
        }
    }
    CubeReport {
        ok: failures.is_empty(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complement::right_complement_table;
    use crate::presentation::Presentation;

    const BUDGET: u64 = 1_000_000;

    fn chi() -> (Presentation, ComplementTable) {
        let p =
            Presentation::parse("monoid: chi\ngens: a b c\nrel: a a = b c\nrel: b b b = c a\n")
                .unwrap();
        let t = right_complement_table(&p, crate::atomicity::ClassCaps::default()).unwrap();
        (p, t)
    }

    fn kappa() -> (Presentation, ComplementTable) {
        let p = Presentation::parse("monoid: kappa\ngens: x y\nrel: x y x y x = y y\n").unwrap();
        let t = right_complement_table(&p, crate::atomicity::ClassCaps::default()).unwrap();
        (p, t)
    }

    fn cube_fail_case() -> (Presentation, ComplementTable) {
        let p = Presentation::parse("gens: a b c\nrel: a b = b a\nrel: a c = c a\nrel: b a = c a\n")
            .unwrap();
        let t = right_complement_table(&p, crate::atomicity::ClassCaps::default()).unwrap();
        (p, t)
    }

    #[test]
    fn complement_examples_chi() {
        let (p, t) = chi();
        let rev = Reverser::new(&t, BUDGET);
        let w = |s: &str| p.parse_word(s).unwrap();
        // θχ(a, cb) = aac (inner value of the paper's cube computation)
        assert_eq!(
            rev.complement(&w("a"), &w("c b")),
            ReversingOutcome::Defined(w("a a c"))
        );
        // θ(u, ε) = ε and θ(ε, u) = u
        assert_eq!(
            rev.complement(&w("c b a"), &Word::empty()),
            ReversingOutcome::Defined(Word::empty())
        );
        assert_eq!(
            rev.complement(&Word::empty(), &w("c b a")),
            ReversingOutcome::Defined(w("c b a"))
        );
    }

    #[test]
    fn complement_examples_kappa() {
        let (p, t) = kappa();
        let rev = Reverser::new(&t, BUDGET);
        let w = |s: &str| p.parse_word(s).unwrap();
        assert_eq!(
            rev.complement(&w("x"), &w("y")),
            ReversingOutcome::Defined(w("y x y x"))
        );
    }

    #[test]
    fn cube_triple_examples() {
        let (p, t) = chi();
        let w = |s: &str| p.parse_word(s).unwrap();
        // (a, b, cb): both sides evaluate to ac
        let rev = Reverser::new(&t, BUDGET);
        match cube_side(&rev, &w("a"), &w("b"), &w("c b")) {
            Side::Defined(x) => assert_eq!(x, w("a c")),
            _ => panic!("lhs undefined"),
        }
        assert!(cube_condition(&t, &w("a"), &w("b"), &w("c b"), BUDGET).unwrap());
        // (u, u, w) is trivially fine
        assert!(cube_condition(&t, &w("b b"), &w("b b"), &w("c a b"), BUDGET).unwrap());
    }

    #[test]
    fn cube_failure_detected() {
        let (p, t) = cube_fail_case();
        let w = |s: &str| p.parse_word(s).unwrap();
        // lhs = θ(θ(a,b), θ(a,c)) = θ(b,c) = a; rhs = θ(θ(b,a), θ(b,c)) = θ(a,a) = ε
        assert!(!cube_condition(&t, &w("a"), &w("b"), &w("c"), BUDGET).unwrap());
        let report = cube_check_all(&t, BUDGET);
        assert!(!report.ok);
        assert!(report
            .failures
            .iter()
            .any(|f| (f.x, f.y, f.z) == (0, 1, 2)));
    }

    #[test]
    fn cube_check_all_passes_chi_kappa() {
        let (_, t) = chi();
        assert!(cube_check_all(&t, BUDGET).ok);
        let (_, t) = kappa();
        assert!(cube_check_all(&t, BUDGET).ok);
    }

    #[test]
    fn equality_by_double_reversing() {
        let (p, t) = kappa();
        let rev = Reverser::new(&t, BUDGET);
        let w = |s: &str| p.parse_word(s).unwrap();
        assert!(rev.words_equal(&w("x y x y x"), &w("y y")).unwrap());
        assert!(!rev.words_equal(&w("x"), &w("y")).unwrap());
        let (p, t) = chi();
        let rev = Reverser::new(&t, BUDGET);
        let w = |s: &str| p.parse_word(s).unwrap();
        assert!(rev.words_equal(&w("a a"), &w("b c")).unwrap());
        assert!(!rev.words_equal(&w("a"), &w("b")).unwrap());
    }

    #[test]
    fn divisibility_and_lcm() {
        let (p, t) = kappa();
        let rev = Reverser::new(&t, BUDGET);
        let w = |s: &str| p.parse_word(s).unwrap();
        assert!(rev.left_divides(&w("x"), &w("y y")).unwrap());
        assert!(rev.left_divides(&w("y x"), &w("y x")).unwrap());
        // x ∨ y = xyxyx ≡ yy
        let lcm = rev.right_lcm(&w("x"), &w("y"));
        assert_eq!(lcm, ReversingOutcome::Defined(w("x y x y x")));
        let (p, t) = chi();
        let rev = Reverser::new(&t, BUDGET);
        let w = |s: &str| p.parse_word(s).unwrap();
        assert!(rev.left_divides(&w("b"), &w("a a")).unwrap());
        assert_eq!(rev.right_lcm(&w("a"), &w("b")), ReversingOutcome::Defined(w("a a")));
        assert_eq!(rev.right_lcm(&w("a"), &w("a")), ReversingOutcome::Defined(w("a")));
    }

    #[test]
    fn undefined_when_no_table_entry() {
        let p = Presentation::parse("gens: s t\n").unwrap(); // free: no relation s/t
        let t = right_complement_table(&p, crate::atomicity::ClassCaps::default()).unwrap();
        let rev = Reverser::new(&t, BUDGET);
        assert_eq!(
            rev.complement(&Word::letter(0), &Word::letter(1)),
            ReversingOutcome::Undefined
        );
    }

    #[test]
    fn divergence_reported() {
        // BS⁺(2,2): reversing t against st loops forever
        let p = Presentation::parse("gens: s t\nrel: s s t = t s s\n").unwrap();
        let t = right_complement_table(&p, crate::atomicity::ClassCaps::default()).unwrap();
        let rev = Reverser::new(&t, 10_000);
        match rev.complement(&p.parse_word("t").unwrap(), &p.parse_word("s t").unwrap()) {
            ReversingOutcome::Diverged(_) => {}
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn extension_coherence_on_samples() {
        // θ(u, vw) = θ(u,v) · θ(θ(v,u), w) letter-wise, where defined
        let (p, t) = chi();
        let rev = Reverser::new(&t, BUDGET);
        let words: Vec<Word> = ["a", "b", "c", "a b", "c b", "b a c", "a a", "c c b"]
            .iter()
            .map(|s| p.parse_word(s).unwrap())
            .collect();
        for u in &words {
            for v in &words {
                for w in &words {
                    let vw = v.concat(w);
                    let lhs = rev.complement(u, &vw);
                    let uv = rev.complement(u, v);
                    let vu = rev.complement(v, u);
                    if let (ReversingOutcome::Defined(uv), ReversingOutcome::Defined(vu)) =
                        (uv, vu)
                    {
                        let tail = rev.complement(&vu, w);
                        if let ReversingOutcome::Defined(tail) = tail {
                            assert_eq!(lhs, ReversingOutcome::Defined(uv.concat(&tail)));
                        }
                    }
                }
            }
        }
    }
}
