//! Garside-preserving constructions: cyclic amalgamated free products and
//! stuffed cyclic HNN extensions.
//!
//! Both constructions output a presentation together with ready-made
//! complement tables for the monoid and its mirror, plus a Garside-element
//! candidate, so downstream verification can enumerate the simples without
//! rediscovering Δ.

use crate::atomicity;
use crate::caps::Caps;
use crate::complement::ComplementTable;
use crate::presentation::{Letter, Presentation, Relation, Word};
use crate::reversing::{Reverser, ReversingOutcome};
use crate::structure::{simple_closure, GarsideStructure, StructureInput};
use crate::Error;

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

// ---------------------------------------------------------------------------
// Amalgamated free products

pub struct AmalgamSpec<'a> {
    pub left: &'a GarsideStructure,
    pub right: &'a GarsideStructure,
    pub h_left: Word,
    pub h_right: Word,
}

pub struct AmalgamBuild {
    pub input: StructureInput,
    /// μ per left letter: least m with the letter dividing h_left^m.
    pub mu_left: Vec<u32>,
    pub mu_right: Vec<u32>,
    /// canonical representatives of the identified roots, combined alphabet
    pub u_left: Word,
    pub u_right: Word,
    pub desc_left: (u32, u32),
    pub desc_right: (u32, u32),
    /// second-factor generators renamed to keep the alphabets disjoint
    pub renames: Vec<(String, String)>,
}

fn mu_table(
    table: &ComplementTable,
    u: &Word,
    n_letters: usize,
    budget: u64,
    mu_cap: u32,
) -> Result<Vec<u32>, Error> {
    let rev = Reverser::new(table, budget);
    let mut mu = Vec::with_capacity(n_letters);
    for x in 0..n_letters as Letter {
        let mut found = None;
        for m in 1..=mu_cap {
            let power = u.pow(m as usize);
            match rev.left_divides(&Word::letter(x), &power) {
                Ok(true) => {
                    found = Some(m);
                    break;
                }
                Ok(false) => {}
                Err(steps) => return Err(Error::Diverged { steps }),
            }
        }
        match found {
            Some(m) => mu.push(m),
            None => {
                return Err(Error::CapExceeded(format!(
                    "μ for letter #{x} exceeds cap {mu_cap}"
                )))
            }
        }
    }
    Ok(mu)
}

fn expect_defined(o: ReversingOutcome, what: &str) -> Result<Word, Error> {
    match o {
        ReversingOutcome::Defined(w) => Ok(w),
        ReversingOutcome::Undefined => Err(Error::NotGarside(format!(
            "complement {what} is undefined in a factor"
        ))),
        ReversingOutcome::Diverged(steps) => Err(Error::Diverged { steps }),
    }
}

/// Combined complement table: factor tables on the diagonal blocks,
/// cross complements per the μ case split
///   θ(x,y) = θ_i(x, u_i^{μ_y})                      for μ_x ≥ μ_y,
///   θ(x,y) = θ_i(x, u_i^{μ_x})·θ_{3−i}(u_{3−i}^{μ_x}, y)  for μ_x < μ_y.
fn amalgam_table(
    lt: &ComplementTable,
    rt: &ComplementTable,
    u_l: &Word,
    u_r: &Word,
    mu_l: &[u32],
    mu_r: &[u32],
    budget: u64,
) -> Result<ComplementTable, Error> {
    let nl = lt.n_letters();
    let nr = rt.n_letters();
    let n = nl + nr;
    let shift = |w: &Word| Word(w.as_slice().iter().map(|&x| x + nl as Letter).collect());
    let mut t = ComplementTable::new_empty(n);
    for (x, y) in lt.defined_pairs() {
        t.set(x, y, lt.get(x, y).unwrap().clone());
    }
    for (x, y) in rt.defined_pairs() {
        t.set(x + nl as Letter, y + nl as Letter, shift(rt.get(x, y).unwrap()));
    }
    let rev_l = Reverser::new(lt, budget);
    let rev_r = Reverser::new(rt, budget);
    for x in 0..nl as Letter {
        for y in 0..nr as Letter {
            let (mx, my) = (mu_l[x as usize], mu_r[y as usize]);
            let lx = Word::letter(x);
            let ly = Word::letter(y);
            // left letter against right letter
            let xe = if mx >= my {
                expect_defined(rev_l.complement(&lx, &u_l.pow(my as usize)), "θ(x, u^μy)")?
            } else {
                let head =
                    expect_defined(rev_l.complement(&lx, &u_l.pow(mx as usize)), "θ(x, u^μx)")?;
                let tail = expect_defined(
                    rev_r.complement(&u_r.pow(mx as usize), &ly),
                    "θ(u^μx, y)",
                )?;
                head.concat(&shift(&tail))
            };
            // right letter against left letter
            let ye = if my >= mx {
                let w =
                    expect_defined(rev_r.complement(&ly, &u_r.pow(mx as usize)), "θ(y, u^μx)")?;
                shift(&w)
            } else {
                let head =
                    expect_defined(rev_r.complement(&ly, &u_r.pow(my as usize)), "θ(y, u^μy)")?;
                let tail = expect_defined(
                    rev_l.complement(&u_l.pow(my as usize), &lx),
                    "θ(u^μy, x)",
                )?;
                shift(&head).concat(&tail)
            };
            t.set(x, y + nl as Letter, xe);
            t.set(y + nl as Letter, x, ye);
        }
    }
    Ok(t)
}

/// Construct the cyclic amalgamated free product identifying `h_left` with
/// `h_right`. Both must be roots of Garside elements in their factors.
pub fn amalgam(spec: &AmalgamSpec, caps: &Caps) -> Result<AmalgamBuild, Error> {
    let desc_left = spec.left.root_descriptor(&spec.h_left, caps)?;
    let desc_right = spec.right.root_descriptor(&spec.h_right, caps)?;
    let u_l = spec.left.canonical(&spec.h_left)?;
    let u_r = spec.right.canonical(&spec.h_right)?;
    if u_l.is_empty() || u_r.is_empty() {
        return Err(Error::Invalid("amalgamated roots must be non-trivial".into()));
    }

    let lp = &spec.left.presentation;
    let rp = &spec.right.presentation;
    let mut gens: Vec<String> = lp.gen_names().to_vec();
    let mut renames = Vec::new();
    for g in rp.gen_names() {
        let mut name = g.clone();
        while gens.contains(&name) {
            name.push('2');
        }
        if &name != g {
            renames.push((g.clone(), name.clone()));
        }
        gens.push(name);
    }
    let name = format!(
        "{}_star_{}",
        if lp.name.is_empty() { "m1" } else { &lp.name },
        if rp.name.is_empty() { "m2" } else { &rp.name }
    );
    let gen_refs: Vec<&str> = gens.iter().map(|s| s.as_str()).collect();
    let mut presentation = Presentation::new(&name, &gen_refs)?;

    let mu_l = mu_table(
        &spec.left.table,
        &u_l,
        lp.gen_count(),
        caps.budget,
        caps.mu_cap,
    )?;
    let mu_r = mu_table(
        &spec.right.table,
        &u_r,
        rp.gen_count(),
        caps.budget,
        caps.mu_cap,
    )?;
    let table = amalgam_table(
        &spec.left.table,
        &spec.right.table,
        &u_l,
        &u_r,
        &mu_l,
        &mu_r,
        caps.budget,
    )?;
    for r in table.induced_relations() {
        presentation.add_relation(r.lhs, r.rhs)?;
    }

    // the mirror amalgam is the amalgam of the mirrors along reversed roots
    let mu_l_m = mu_table(
        &spec.left.mirror_table,
        &u_l.reversed(),
        lp.gen_count(),
        caps.budget,
        caps.mu_cap,
    )?;
    let mu_r_m = mu_table(
        &spec.right.mirror_table,
        &u_r.reversed(),
        rp.gen_count(),
        caps.budget,
        caps.mu_cap,
    )?;
    let mirror_table = amalgam_table(
        &spec.left.mirror_table,
        &spec.right.mirror_table,
        &u_l.reversed(),
        &u_r.reversed(),
        &mu_l_m,
        &mu_r_m,
        caps.budget,
    )?;
    let mut mirror_presentation = Presentation::new(&name, &gen_refs)?;
    for r in mirror_table.induced_relations() {
        mirror_presentation.add_relation(r.lhs, r.rhs)?;
    }

    // Δ candidate: the identified root raised to the lcm of the exponents
    let exponent = lcm_u64(desc_left.1 as u64, desc_right.1 as u64) as usize;
    let delta_hint = Some(u_l.pow(exponent));

    Ok(AmalgamBuild {
        input: StructureInput {
            presentation,
            table,
            mirror_presentation,
            mirror_table,
            delta_hint,
        },
        mu_left: mu_l,
        mu_right: mu_r,
        u_left: u_l,
        u_right: Word(u_r.as_slice().iter().map(|&x| x + lp.gen_count() as Letter).collect()),
        desc_left,
        desc_right,
        renames,
    })
}

/// Amalgamate and verify.
pub fn amalgam_structure(spec: &AmalgamSpec, caps: &Caps) -> Result<GarsideStructure, Error> {
    let build = amalgam(spec, caps)?;
    simple_closure(build.input, caps)
}

// ---------------------------------------------------------------------------
// Stuffed cyclic HNN extensions

pub struct HnnSpec<'a> {
    pub base: &'a GarsideStructure,
    pub h1: Word,
    pub h2: Word,
    pub stable: String,
}

/// Hypothesis report for the HNN Garside criterion: whether the two images
/// are n-th roots of one Garside element, and whether their norms agree.
/// The construction proceeds either way; these are warnings, not gates.
#[derive(Clone, Debug)]
pub struct HnnHypothesis {
    /// minimal (n, p) with h1^n ≡ h2^n ≡ Δ^p
    pub root_power: Option<(u32, u32)>,
    pub norm1: Option<u64>,
    pub norm2: Option<u64>,
}

impl HnnHypothesis {
    pub fn norms_equal(&self) -> Option<bool> {
        match (self.norm1, self.norm2) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        }
    }
}

pub struct HnnBuild {
    pub input: StructureInput,
    pub hypothesis: HnnHypothesis,
    pub u1: Word,
    pub u2: Word,
    pub stable_letter: Letter,
}

/// Interleave the stable letter between consecutive letters: a₁ t a₂ t … t aₘ.
pub fn stuff_shuffle(u: &Word, stable: Letter) -> Result<Word, Error> {
    if u.is_empty() {
        return Err(Error::Invalid("cannot stuff the empty word".into()));
    }
    Ok(shuffle(u, stable))
}

fn shuffle(u: &Word, t: Letter) -> Word {
    let mut out = Vec::with_capacity(u.len() * 2);
    for (i, &x) in u.as_slice().iter().enumerate() {
        if i > 0 {
            out.push(t);
        }
        out.push(x);
    }
    Word(out)
}

/// ψ(w) = (w⧢t)·t, with ψ(ε) = ε.
fn psi(u: &Word, t: Letter) -> Word {
    if u.is_empty() {
        return Word::empty();
    }
    let mut w = shuffle(u, t);
    w.0.push(t);
    w
}

/// Complement table of the stuffed extension over A ⊔ {t}:
///   θ̂(x,y)  = t·(θ(x,y)⧢t)           for base letters,
///   θ̂(x₁,t) = t·ψ(v₁),  θ̂(t,x₁) = u₂⧢t   where u₁ = x₁v₁,
///   θ̂(x,t)  = t·(θ(x,x₁)⧢t)·θ̂(θ(x₁,x)⧢t, ψ(v₁)),
///   θ̂(t,x)  = (u₂⧢t)·(θ(u₁,x)⧢t)     for x ≠ x₁,
/// where the nested complement evaluates to t·(θ(θ(x₁,x), v₁)⧢t) when v₁ ≠ ε
/// and to ε when v₁ = ε. Pairs whose base complements are undefined are left
/// undefined.
fn hnn_table(
    base: &ComplementTable,
    u1: &Word,
    u2: &Word,
    t: Letter,
    budget: u64,
) -> Result<ComplementTable, Error> {
    let nb = base.n_letters();
    let mut out = ComplementTable::new_empty(nb + 1);
    for (x, y) in base.defined_pairs() {
        let mut w = Word::letter(t);
        let inner = base.get(x, y).unwrap();
        if !inner.is_empty() {
            w = w.concat(&shuffle(inner, t));
        }
        out.set(x, y, w);
    }
    let rev = Reverser::new(base, budget);
    let x1 = u1.as_slice()[0];
    let v1 = Word(u1.as_slice()[1..].to_vec());
    out.set(x1, t, Word::letter(t).concat(&psi(&v1, t)));
    out.set(t, x1, shuffle(u2, t));
    for x in 0..nb as Letter {
        if x == x1 {
            continue;
        }
        let (Some(a), Some(q)) = (base.get(x, x1), base.get(x1, x)) else {
            continue;
        };
        let tail = if v1.is_empty() {
            Some(Word::empty())
        } else {
            match rev.complement(q, &v1) {
                ReversingOutcome::Defined(b) => {
                    let mut w = Word::letter(t);
                    if !b.is_empty() {
                        w = w.concat(&shuffle(&b, t));
                    }
                    Some(w)
                }
                ReversingOutcome::Undefined => None,
                ReversingOutcome::Diverged(steps) => return Err(Error::Diverged { steps }),
            }
        };
        let back = match rev.complement(u1, &Word::letter(x)) {
            ReversingOutcome::Defined(w) => Some(w),
            ReversingOutcome::Undefined => None,
            ReversingOutcome::Diverged(steps) => return Err(Error::Diverged { steps }),
        };
        if let (Some(tail), Some(back)) = (tail, back) {
            let mut xt = Word::letter(t);
            if !a.is_empty() {
                xt = xt.concat(&shuffle(a, t));
            }
            xt = xt.concat(&tail);
            let mut tx = shuffle(u2, t);
            if !back.is_empty() {
                tx = tx.concat(&shuffle(&back, t));
            }
            out.set(x, t, xt);
            out.set(t, x, tx);
        }
    }
    Ok(out)
}

fn stuffed_relations(rels: &[Relation], t: Letter) -> Vec<Relation> {
    rels.iter()
        .map(|r| Relation {
            lhs: shuffle(&r.lhs, t),
            rhs: shuffle(&r.rhs, t),
        })
        .collect()
}

/// Search the minimal (n, p) with h1^n ≡ h2^n ≡ Δ^p, plus the norms of both
/// images in the base.
pub fn hnn_hypothesis_check(spec: &HnnSpec, caps: &Caps) -> Result<HnnHypothesis, Error> {
    let base = spec.base;
    let p = &base.presentation;
    let ccaps = caps.class_caps();
    let norm1 = atomicity::norm(p, &spec.h1, ccaps).ok();
    let norm2 = atomicity::norm(p, &spec.h2, ccaps).ok();
    let rev = Reverser::new(&base.table, caps.budget);
    let funcs = crate::structure::invariant_functionals(p);
    let f1 = crate::structure::eval_functionals(&funcs, &spec.h1);
    let f2 = crate::structure::eval_functionals(&funcs, &spec.h2);
    let fd = crate::structure::eval_functionals(&funcs, &base.delta);
    let mut root_power = None;
    'outer: for n in 1..=caps.root_cap {
        for pw in 1..=caps.root_cap {
            let filter = |fh: &[i128]| {
                fh.iter()
                    .zip(&fd)
                    .all(|(h, d)| h * n as i128 == d * pw as i128)
            };
            if !filter(&f1) || !filter(&f2) {
                continue;
            }
            let target = base.delta.pow(pw as usize);
            let e1 = rev
                .words_equal(&spec.h1.pow(n as usize), &target)
                .map_err(|steps| Error::Diverged { steps })?;
            if !e1 {
                continue;
            }
            let e2 = rev
                .words_equal(&spec.h2.pow(n as usize), &target)
                .map_err(|steps| Error::Diverged { steps })?;
            if e2 {
                root_power = Some((n, pw));
                break 'outer;
            }
        }
    }
    Ok(HnnHypothesis {
        root_power,
        norm1,
        norm2,
    })
}

/// Construct the stuffed HNN extension ⟨M, t : h₁t = th₂⟩ with every base
/// relation interleaved with the stable letter.
pub fn hnn_stuffed(spec: &HnnSpec, caps: &Caps) -> Result<HnnBuild, Error> {
    let base = spec.base;
    let bp = &base.presentation;
    if bp.letter_of(&spec.stable).is_some() {
        return Err(Error::Invalid(format!(
            "stable letter `{}` collides with a base generator",
            spec.stable
        )));
    }
    if spec.h1.is_empty() || spec.h2.is_empty() {
        return Err(Error::Invalid("HNN images must be non-trivial".into()));
    }
    let u1 = base.canonical(&spec.h1)?;
    let u2 = base.canonical(&spec.h2)?;
    let hypothesis = hnn_hypothesis_check(spec, caps)?;

    let mut gens: Vec<String> = bp.gen_names().to_vec();
    gens.push(spec.stable.clone());
    let gen_refs: Vec<&str> = gens.iter().map(|s| s.as_str()).collect();
    let t = bp.gen_count() as Letter;
    let name = format!(
        "{}_hnn",
        if bp.name.is_empty() { "m" } else { &bp.name }
    );

    let mut presentation = Presentation::new(&name, &gen_refs)?;
    for r in stuffed_relations(&bp.relations, t) {
        presentation.add_relation(r.lhs, r.rhs)?;
    }
    let lhs = {
        let mut w = shuffle(&u1, t);
        w.0.push(t);
        w
    };
    let rhs = Word::letter(t).concat(&shuffle(&u2, t));
    presentation.add_relation(lhs, rhs)?;

    let table = hnn_table(&base.table, &u1, &u2, t, caps.budget)?;

    // mirror: stuffed extension of the mirror base with reversed, swapped roots
    let m1 = u2.reversed();
    let m2 = u1.reversed();
    let mut mirror_presentation = Presentation::new(&name, &gen_refs)?;
    for r in stuffed_relations(&base.mirror_presentation.relations, t) {
        mirror_presentation.add_relation(r.lhs, r.rhs)?;
    }
    let mlhs = {
        let mut w = shuffle(&m1, t);
        w.0.push(t);
        w
    };
    let mrhs = Word::letter(t).concat(&shuffle(&m2, t));
    mirror_presentation.add_relation(mlhs, mrhs)?;
    let mirror_table = hnn_table(&base.mirror_table, &m1, &m2, t, caps.budget)?;

    // ψ(Δ^k) with Δ^k the least central Garside power reached by both images
    let delta_hint = hypothesis.root_power.map(|(_, p)| {
        let k = lcm_u64(p as u64, base.central_exponent as u64) as usize;
        psi(&base.delta.pow(k), t)
    });

    Ok(HnnBuild {
        input: StructureInput {
            presentation,
            table,
            mirror_presentation,
            mirror_table,
            delta_hint,
        },
        hypothesis,
        u1,
        u2,
        stable_letter: t,
    })
}

/// Stuff and verify.
pub fn hnn_structure(spec: &HnnSpec, caps: &Caps) -> Result<GarsideStructure, Error> {
    let build = hnn_stuffed(spec, caps)?;
    simple_closure(build.input, caps)
}

/// The stuffed Baumslag–Solitar monoid: the HNN extension of ⟨s⟩ identifying
/// s^m across the stable letter.
pub fn baumslag_solitar_stuffed(m: u32, caps: &Caps) -> Result<HnnBuild, Error> {
    if m == 0 {
        return Err(Error::Invalid("m must be positive".into()));
    }
    let p = Presentation::parse(&format!("monoid: bs{m}{m}\ngens: s\n"))?;
    let base = crate::structure::structure_of(&p, caps)?;
    let h = base.presentation.parse_word("s")?.pow(m as usize);
    let spec = HnnSpec {
        base: &base,
        h1: h.clone(),
        h2: h,
        stable: "t".into(),
    };
    hnn_stuffed(&spec, caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::structure_of;

    fn caps() -> Caps {
        Caps::default()
    }

    fn chi() -> GarsideStructure {
        let p = Presentation::parse("monoid: chi\ngens: a b c\nrel: a a = b c\nrel: b b b = c a\n")
            .unwrap();
        structure_of(&p, &caps()).unwrap()
    }

    fn kappa() -> GarsideStructure {
        let p = Presentation::parse("monoid: kappa\ngens: x y\nrel: x y x y x = y y\n").unwrap();
        structure_of(&p, &caps()).unwrap()
    }

    #[test]
    fn torus_knot_amalgam() {
        let s = structure_of(&Presentation::parse("monoid: zs\ngens: s\n").unwrap(), &caps())
            .unwrap();
        let t = structure_of(&Presentation::parse("monoid: zt\ngens: t\n").unwrap(), &caps())
            .unwrap();
        let spec = AmalgamSpec {
            left: &s,
            right: &t,
            h_left: s.presentation.parse_word("s").unwrap().pow(3),
            h_right: t.presentation.parse_word("t").unwrap().pow(4),
        };
        let build = amalgam(&spec, &caps()).unwrap();
        let p = &build.input.presentation;
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.word_string(&p.relations[0].lhs), "s s s");
        assert_eq!(p.word_string(&p.relations[0].rhs), "t t t t");
        let gs = simple_closure(build.input, &caps()).unwrap();
        assert_eq!(gs.simple_count(), 7);
    }

    #[test]
    fn stuff_shuffle_examples() {
        let p = Presentation::parse("gens: x y z\n").unwrap();
        let z = p.letter_of("z").unwrap();
        let w = stuff_shuffle(&p.parse_word("x y").unwrap(), z).unwrap();
        assert_eq!(p.word_string(&w), "x z y");
        let w = stuff_shuffle(&p.parse_word("x").unwrap(), z).unwrap();
        assert_eq!(p.word_string(&w), "x");
        let w = stuff_shuffle(&p.parse_word("x y x y x").unwrap(), z).unwrap();
        assert_eq!(p.word_string(&w), "x z y z x z y z x");
        assert!(stuff_shuffle(&Word::empty(), z).is_err());
    }

    #[test]
    fn hnn_presentation_xy_xy() {
        let base = kappa();
        let h = base.presentation.parse_word("x y").unwrap();
        let spec = HnnSpec {
            base: &base,
            h1: h.clone(),
            h2: h,
            stable: "z".into(),
        };
        let build = hnn_stuffed(&spec, &caps()).unwrap();
        let p = &build.input.presentation;
        let rels: Vec<(String, String)> = p
            .relations
            .iter()
            .map(|r| (p.word_string(&r.lhs), p.word_string(&r.rhs)))
            .collect();
        assert_eq!(
            rels,
            [
                (
                    "x z y z x z y z x".to_string(),
                    "y z y".to_string()
                ),
                ("x z y z".to_string(), "z x z y".to_string()),
            ]
        );
        assert_eq!(build.hypothesis.root_power, Some((3, 1)));
        assert_eq!(build.hypothesis.norms_equal(), Some(true));
    }

    #[test]
    fn hnn_presentation_y_xy() {
        let base = kappa();
        let spec = HnnSpec {
            base: &base,
            h1: base.presentation.parse_word("y").unwrap(),
            h2: base.presentation.parse_word("x y").unwrap(),
            stable: "z".into(),
        };
        let build = hnn_stuffed(&spec, &caps()).unwrap();
        let p = &build.input.presentation;
        let last = p.relations.last().unwrap();
        assert_eq!(p.word_string(&last.lhs), "y z");
        assert_eq!(p.word_string(&last.rhs), "z x z y");
        // root condition holds with unequal norms: a warning case
        assert_eq!(build.hypothesis.root_power, Some((3, 1)));
        assert_eq!(build.hypothesis.norms_equal(), Some(false));
    }

    #[test]
    fn bs_stuffed_is_dihedral_artin() {
        for m in 1..=3u32 {
            let build = baumslag_solitar_stuffed(m, &caps()).unwrap();
            let p = &build.input.presentation;
            assert_eq!(p.relations.len(), 1);
            let r = &p.relations[0];
            let st = p.parse_word("s t").unwrap().pow(m as usize);
            let ts = p.parse_word("t s").unwrap().pow(m as usize);
            assert_eq!(r.lhs, st);
            assert_eq!(r.rhs, ts);
        }
    }

    #[test]
    fn stable_name_collision_rejected() {
        let base = kappa();
        let spec = HnnSpec {
            base: &base,
            h1: base.presentation.parse_word("y").unwrap(),
            h2: base.presentation.parse_word("y").unwrap(),
            stable: "x".into(),
        };
        assert!(hnn_stuffed(&spec, &caps()).is_err());
    }

    #[test]
    fn amalgam_renames_colliding_generators() {
        let a = structure_of(&Presentation::parse("monoid: za\ngens: g\n").unwrap(), &caps())
            .unwrap();
        let b = structure_of(&Presentation::parse("monoid: zb\ngens: g\n").unwrap(), &caps())
            .unwrap();
        let spec = AmalgamSpec {
            left: &a,
            right: &b,
            h_left: a.presentation.parse_word("g").unwrap().pow(2),
            h_right: b.presentation.parse_word("g").unwrap().pow(3),
        };
        let build = amalgam(&spec, &caps()).unwrap();
        assert_eq!(build.renames, [("g".to_string(), "g2".to_string())]);
        assert_eq!(build.input.presentation.gen_names(), ["g", "g2"]);
    }

    #[test]
    fn small_amalgam_verifies() {
        // Mχ ⋆_{a = y} Mκ: Table row/column (a, y) gives 17 simples
        let l = chi();
        let r = kappa();
        let spec = AmalgamSpec {
            left: &l,
            right: &r,
            h_left: l.presentation.parse_word("a").unwrap(),
            h_right: r.presentation.parse_word("y").unwrap(),
        };
        let gs = amalgam_structure(&spec, &caps()).unwrap();
        assert_eq!(gs.simple_count(), 17);
    }

    #[test]
    fn hnn_root_precondition_reported() {
        let l = chi();
        let r = kappa();
        // x is not a root of any Garside power in Mκ
        let spec = AmalgamSpec {
            left: &l,
            right: &r,
            h_left: l.presentation.parse_word("a").unwrap(),
            h_right: r.presentation.parse_word("x").unwrap(),
        };
        match amalgam(&spec, &caps()) {
            Err(Error::NotARoot { .. }) => {}
            other => panic!("expected NotARoot, got {:?}", other.map(|_| ())),
        }
    }
}
