//! Monoid presentations: alphabets, words, relations, parsing and serialization.
//!
//! The text format is line oriented, `#` starts a comment:
//!
//! ```text
//! monoid: chi
//! gens: a b c
//! rel: a a = b c
//! rel: b b b = c a
//! ```
//!
//! Generators are whole tokens over `[A-Za-z0-9_]`, so machine-generated
//! names and stable letters never collide with single-character alphabets.
//! Words are space-separated generator sequences; the empty word is `ε`.

use crate::Error;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

/// Index of a generator in its presentation's alphabet (declaration order).
pub type Letter = u8;

/// A word over an alphabet, stored as letter indices.
///
/// `Ord` is shortlex with respect to declaration order: shorter words first,
/// ties broken letter-wise. This is the canonical order used for every
/// set-valued output.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(x: Letter) -> Self {
        Word(vec![x])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, n: usize) -> Word {
        let mut v = Vec::with_capacity(self.len() * n);
        for _ in 0..n {
            v.extend_from_slice(&self.0);
        }
        Word(v)
    }

    pub fn as_slice(&self) -> &[Letter] {
        &self.0
    }

    /// True when `factor` occurs as a contiguous subword.
    pub fn contains_factor(&self, factor: &[Letter]) -> bool {
        if factor.is_empty() {
            return true;
        }
        self.0.windows(factor.len()).any(|w| w == factor)
    }
}

pub fn shortlex(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex(&self.0, &other.0)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({:?})", self.0)
    }
}

/// A defining relation `lhs = rhs`. Neither side is empty and the sides are
/// distinct as words.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: Word,
}

/// A finitely presented monoid: named alphabet plus relations.
#[derive(Clone)]
pub struct Presentation {
    pub name: String,
    gens: Vec<String>,
    index: HashMap<String, Letter>,
    pub relations: Vec<Relation>,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.gens == other.gens && self.relations == other.relations
    }
}
impl Eq for Presentation {}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presentation({})", self.to_text(&[]))
    }
}

fn valid_token(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Presentation {
    pub fn new(name: &str, gens: &[&str]) -> Result<Self, Error> {
        let mut index = HashMap::new();
        let mut list = Vec::new();
        if gens.len() > Letter::MAX as usize {
            return Err(Error::Parse {
                line: 0,
                msg: format!("too many generators ({})", gens.len()),
            });
        }
        for (i, g) in gens.iter().enumerate() {
            if !valid_token(g) {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("invalid generator token `{g}`"),
                });
            }
            if index.insert(g.to_string(), i as Letter).is_some() {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("duplicate generator `{g}`"),
                });
            }
            list.push(g.to_string());
        }
        Ok(Presentation {
            name: name.to_string(),
            gens: list,
            index,
            relations: Vec::new(),
        })
    }

    pub fn gen_count(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gens
    }

    pub fn gen_name(&self, x: Letter) -> &str {
        &self.gens[x as usize]
    }

    pub fn letter_of(&self, name: &str) -> Option<Letter> {
        self.index.get(name).copied()
    }

    pub fn add_relation(&mut self, lhs: Word, rhs: Word) -> Result<(), Error> {
        self.add_relation_at(lhs, rhs, 0)
    }

    fn add_relation_at(&mut self, lhs: Word, rhs: Word, line: usize) -> Result<(), Error> {
        if lhs.is_empty() || rhs.is_empty() {
            return Err(Error::Parse {
                line,
                msg: "empty relation side (ε-relations are not allowed)".into(),
            });
        }
        if lhs == rhs {
            return Err(Error::Parse {
                line,
                msg: "relation has identical sides".into(),
            });
        }
        for &x in lhs.0.iter().chain(rhs.0.iter()) {
            if x as usize >= self.gens.len() {
                return Err(Error::Parse {
                    line,
                    msg: format!("letter index {x} out of range"),
                });
            }
        }
        self.relations.push(Relation { lhs, rhs });
        Ok(())
    }

    /// Parse a space-separated word such as `"y x y x"`. The empty string is ε.
    pub fn parse_word(&self, text: &str) -> Result<Word, Error> {
        let mut w = Vec::new();
        for tok in text.split_whitespace() {
            match self.index.get(tok) {
                Some(&l) => w.push(l),
                None => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("unknown generator `{tok}`"),
                    })
                }
            }
        }
        Ok(Word(w))
    }

    /// Render a word with generator names; ε prints as `1`.
    pub fn word_string(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.0.iter()
            .map(|&x| self.gens[x as usize].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parse the line-oriented text format.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut name = String::new();
        let mut pres: Option<Presentation> = None;
        let mut pending: Vec<(usize, String, String)> = Vec::new();
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
            if let Some(rest) = line.strip_prefix("monoid:") {
                let tok = rest.trim();
                if !valid_token(tok) {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("invalid monoid name `{tok}`"),
                    });
                }
                name = tok.to_string();
            } else if let Some(rest) = line.strip_prefix("gens:") {
                if pres.is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "duplicate gens: line".into(),
                    });
                }
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.is_empty() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "gens: line lists no generators".into(),
                    });
                }
                let mut p = Presentation::new(&name, &toks).map_err(|e| match e {
                    Error::Parse { msg, .. } => Error::Parse { line: line_no, msg },
                    other => other,
                })?;
                p.name = name.clone();
                pres = Some(p);
            } else if let Some(rest) = line.strip_prefix("rel:") {
                let (l, r) = match rest.split_once('=') {
                    Some(pair) => pair,
                    None => {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: "relation line has no `=`".into(),
                        })
                    }
                };
                pending.push((line_no, l.trim().to_string(), r.trim().to_string()));
            } else {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("unrecognized line `{line}`"),
                });
            }
        }
        let mut p = pres.ok_or(Error::Parse {
            line: 0,
            msg: "missing gens: line".into(),
        })?;
        for (line_no, l, r) in pending {
            let lw = p.parse_word(&l).map_err(|e| match e {
                Error::Parse { msg, .. } => Error::Parse { line: line_no, msg },
                other => other,
            })?;
            let rw = p.parse_word(&r).map_err(|e| match e {
                Error::Parse { msg, .. } => Error::Parse { line: line_no, msg },
                other => other,
            })?;
            p.add_relation_at(lw, rw, line_no)?;
        }
        Ok(p)
    }

    /// Canonical text serialization; `header` lines are emitted as comments.
    pub fn to_text(&self, header: &[String]) -> String {
        let mut out = String::new();
        for h in header {
            out.push_str("# ");
            out.push_str(h);
            out.push('\n');
        }
        if !self.name.is_empty() {
            out.push_str(&format!("monoid: {}\n", self.name));
        }
        out.push_str(&format!("gens: {}\n", self.gens.join(" ")));
        for r in &self.relations {
            out.push_str(&format!(
                "rel: {} = {}\n",
                self.word_string(&r.lhs),
                self.word_string(&r.rhs)
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rels: Vec<serde_json::Value> = self
            .relations
            .iter()
            .map(|r| {
                serde_json::json!([self.word_string(&r.lhs), self.word_string(&r.rhs)])
            })
            .collect();
        serde_json::json!({
            "monoid": self.name,
            "gens": self.gens,
            "rels": rels,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, Error> {
        #[derive(Deserialize, Serialize)]
        struct Doc {
            #[serde(default)]
            monoid: String,
            gens: Vec<String>,
            rels: Vec<(String, String)>,
        }
        let doc: Doc = serde_json::from_value(v.clone()).map_err(|e| Error::Parse {
            line: 0,
            msg: format!("bad json presentation: {e}"),
        })?;
        let refs: Vec<&str> = doc.gens.iter().map(|s| s.as_str()).collect();
        let mut p = Presentation::new(&doc.monoid, &refs)?;
        for (l, r) in &doc.rels {
            let lw = p.parse_word(l)?;
            let rw = p.parse_word(r)?;
            p.add_relation(lw, rw)?;
        }
        Ok(p)
    }

    /// Letter-wise reversal of every relation word. An involution; turns
    /// right-complemented questions about the monoid into left-complemented
    /// ones about the mirror.
    pub fn mirror(&self) -> Presentation {
        let mut p = self.clone();
        for r in &mut p.relations {
            r.lhs = r.lhs.reversed();
            r.rhs = r.rhs.reversed();
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const CHI: &str = "monoid: chi\ngens: a b c\nrel: a a = b c\nrel: b b b = c a\n";
    pub(crate) const KAPPA: &str = "monoid: kappa\ngens: x y\nrel: x y x y x = y y\n";

    #[test]
    fn parses_chi() {
        let p = Presentation::parse(CHI).unwrap();
        assert_eq!(p.name, "chi");
        assert_eq!(p.gen_count(), 3);
        assert_eq!(p.relations.len(), 2);
        assert_eq!(p.word_string(&p.relations[0].lhs), "a a");
        assert_eq!(p.word_string(&p.relations[1].rhs), "c a");
    }

    #[test]
    fn parses_free_monoid() {
        let p = Presentation::parse("gens: x\n").unwrap();
        assert_eq!(p.gen_count(), 1);
        assert!(p.relations.is_empty());
    }

    #[test]
    fn rejects_epsilon_relation() {
        let err = Presentation::parse("gens: a\nrel: a = \n").unwrap_err();
        match err {
            Error::Parse { line, msg } => {
                assert_eq!(line, 2);
                assert!(msg.contains("ε"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_duplicate_generator() {
        assert!(Presentation::parse("gens: a b a\n").is_err());
    }

    #[test]
    fn rejects_undeclared_generator() {
        let err = Presentation::parse("gens: a b\nrel: a c = b a\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn text_round_trip() {
        for src in [CHI, KAPPA] {
            let p = Presentation::parse(src).unwrap();
            let q = Presentation::parse(&p.to_text(&[])).unwrap();
            assert_eq!(p, q);
        }
    }

    #[test]
    fn json_round_trip() {
        let p = Presentation::parse(CHI).unwrap();
        let v = p.to_json();
        assert!(v.get("gens").is_some() && v.get("rels").is_some());
        let q = Presentation::from_json(&v).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn mirror_is_involution_and_reverses() {
        let p = Presentation::parse(CHI).unwrap();
        let m = p.mirror();
        // a²=bc mirrors to a²=cb, b³=ca to b³=ac
        assert_eq!(m.word_string(&m.relations[0].rhs), "c b");
        assert_eq!(m.word_string(&m.relations[1].rhs), "a c");
        assert_eq!(m.mirror(), p);

        let k = Presentation::parse(KAPPA).unwrap();
        // palindromic lhs
        assert_eq!(k.mirror().relations[0].lhs, k.relations[0].lhs);
        assert_eq!(k.mirror().mirror(), k);

        let free = Presentation::parse("gens: x\n").unwrap();
        assert_eq!(free.mirror(), free);
    }

    #[test]
    fn shortlex_order() {
        let a = Word(vec![1, 0]);
        let b = Word(vec![0, 0, 1]);
        assert!(a < b, "shorter word wins");
        assert!(Word(vec![0, 1]) < Word(vec![1, 0]));
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let p = Presentation::parse("# header\nmonoid: m\n\ngens: a b # trailing\nrel: a b = b a\n")
            .unwrap();
        assert_eq!(p.gen_count(), 2);
        assert_eq!(p.relations.len(), 1);
    }
}
