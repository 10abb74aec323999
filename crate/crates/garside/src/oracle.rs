//! Brute-force reference computations built purely on class enumeration.
//!
//! Nothing here touches the reversing engine or the lattice machinery; the
//! test suites replay equality, divisibility and divisor counts through these
//! functions to cross-check the fast paths.

use crate::atomicity::{canonical_rep, equivalence_class, ClassCaps};
use crate::presentation::{Presentation, Word};
use std::collections::BTreeSet;

/// Equality by exhaustive class enumeration.
pub fn equal_by_enumeration(
    p: &Presentation,
    u: &Word,
    v: &Word,
    caps: ClassCaps,
) -> Option<bool> {
    let c = equivalence_class(p, u, caps);
    if c.truncated {
        None
    } else {
        Some(c.members.contains(v))
    }
}

/// All left divisors of `target`, as canonical representatives: every left
/// divisor heads some word of the class, so the canonical prefixes of the
/// class members enumerate the divisor set exactly.
pub fn divisors_by_enumeration(
    p: &Presentation,
    target: &Word,
    caps: ClassCaps,
) -> Option<BTreeSet<Word>> {
    let cls = equivalence_class(p, target, caps);
    if cls.truncated {
        return None;
    }
    let mut seen_prefixes: BTreeSet<Word> = BTreeSet::new();
    let mut out = BTreeSet::new();
    for w in &cls.members {
        for k in 0..=w.len() {
            let prefix = Word(w.as_slice()[..k].to_vec());
            if !seen_prefixes.insert(prefix.clone()) {
                continue;
            }
            out.insert(canonical_rep(p, &prefix, caps)?);
        }
    }
    Some(out)
}

/// d left-divides big iff some word of big's class starts with some word of
/// d's class.
pub fn divides_by_enumeration(
    p: &Presentation,
    d: &Word,
    big: &Word,
    caps: ClassCaps,
) -> Option<bool> {
    let cd = equivalence_class(p, d, caps);
    let cb = equivalence_class(p, big, caps);
    if cd.truncated || cb.truncated {
        return None;
    }
    for w in &cb.members {
        for m in &cd.members {
            if w.len() >= m.len() && &w.as_slice()[..m.len()] == m.as_slice() {
                return Some(true);
            }
        }
    }
    Some(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_divisor_count_is_twelve() {
        let p = Presentation::parse("gens: x y\nrel: x y x y x = y y\n").unwrap();
        let delta = p.parse_word("y y y").unwrap();
        let divs = divisors_by_enumeration(&p, &delta, ClassCaps::default()).unwrap();
        assert_eq!(divs.len(), 12);
    }

    #[test]
    fn chi_divisor_count_is_nine() {
        let p = Presentation::parse("gens: a b c\nrel: a a = b c\nrel: b b b = c a\n").unwrap();
        let delta = p.parse_word("a a a").unwrap();
        let divs = divisors_by_enumeration(&p, &delta, ClassCaps::default()).unwrap();
        assert_eq!(divs.len(), 9);
    }

    #[test]
    fn dihedral_divisor_count_is_eight() {
        let p = Presentation::parse("gens: s t\nrel: s t s t = t s t s\n").unwrap();
        let delta = p.parse_word("s t s t").unwrap();
        let divs = divisors_by_enumeration(&p, &delta, ClassCaps::default()).unwrap();
        assert_eq!(divs.len(), 8);
    }

    #[test]
    fn divisibility_matches() {
        let p = Presentation::parse("gens: x y\nrel: x y x y x = y y\n").unwrap();
        let w = |s: &str| p.parse_word(s).unwrap();
        let caps = ClassCaps::default();
        assert_eq!(
            divides_by_enumeration(&p, &w("x"), &w("y y"), caps),
            Some(true)
        );
        assert_eq!(
            divides_by_enumeration(&p, &w("x x"), &w("y y y"), caps),
            Some(false)
        );
    }
}
