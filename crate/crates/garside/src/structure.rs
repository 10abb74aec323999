//! Verified Garside structures: simple-element lattices, the minimal Garside
//! element, central exponents, roots of Garside powers, and gcds.
//!
//! The pipeline behind [`simple_closure`] runs, in order: right-complemented
//! splitting (both sides), atomicity, the letter cube condition (both sides),
//! a Garside-element candidate (supplied by a combinator or computed as the
//! iterated lcm of the complement closure of the atoms), the divisor lattice
//! of that candidate, refinement down to the minimal Garside element, and the
//! two-sided divisor check. Everything downstream (roots, gcds, exponents)
//! works inside the verified lattice.

use crate::atomicity::{self, AtomicityReport, AtomicityVerdict};
use crate::caps::Caps;
use crate::complement::{right_complement_table, ComplementTable};
use crate::lattice::{divisors_of, DivisorLattice};
use crate::presentation::{shortlex, Letter, Presentation, Word};
use crate::reversing::{cube_check_all, CubeReport, Reverser, ReversingOutcome};
use crate::Error;
use std::collections::BTreeSet;

/// A presentation together with everything needed to run reversing on both
/// sides. Combinators construct these directly; plain presentations get them
/// from [`StructureInput::from_presentation`].
#[derive(Clone)]
pub struct StructureInput {
    pub presentation: Presentation,
    pub table: ComplementTable,
    pub mirror_presentation: Presentation,
    pub mirror_table: ComplementTable,
    /// Word of a known Garside element, when the construction provides one.
    pub delta_hint: Option<Word>,
}

impl StructureInput {
    pub fn from_presentation(p: &Presentation, caps: &Caps) -> Result<Self, Error> {
        let table = right_complement_table(p, caps.class_caps())?;
        let mirror = p.mirror();
        let mirror_table = right_complement_table(&mirror, caps.class_caps())?;
        Ok(StructureInput {
            presentation: p.clone(),
            table,
            mirror_presentation: mirror,
            mirror_table,
            delta_hint: None,
        })
    }
}

/// A fully verified Garside monoid at desk scale.
pub struct GarsideStructure {
    pub presentation: Presentation,
    pub table: ComplementTable,
    pub mirror_presentation: Presentation,
    pub mirror_table: ComplementTable,
    /// Lattice of the simple elements = left divisors of `delta`.
    pub lattice: DivisorLattice,
    /// Canonical word of the minimal Garside element.
    pub delta: Word,
    pub central_exponent: u32,
    pub atomicity: AtomicityReport,
    pub caps: Caps,
}

impl GarsideStructure {
    pub fn simple_count(&self) -> usize {
        self.lattice.len()
    }

    pub fn simples(&self) -> &[Word] {
        self.lattice.reps()
    }

    fn reverser(&self) -> Reverser<'_> {
        Reverser::new(&self.table, self.caps.budget)
    }

    /// Equality by double reversing (the cube condition was verified when the
    /// structure was built).
    pub fn words_equal(&self, u: &Word, v: &Word) -> Result<bool, Error> {
        self.reverser()
            .words_equal(u, v)
            .map_err(|steps| Error::Diverged { steps })
    }

    pub fn left_divides(&self, d: &Word, big: &Word) -> Result<bool, Error> {
        self.reverser()
            .left_divides(d, big)
            .map_err(|steps| Error::Diverged { steps })
    }

    pub fn right_lcm(&self, a: &Word, b: &Word) -> Result<Word, Error> {
        match self.reverser().right_lcm(a, b) {
            ReversingOutcome::Defined(w) => Ok(w),
            ReversingOutcome::Undefined => Err(Error::NotGarside(
                "elements admit no common right multiple".into(),
            )),
            ReversingOutcome::Diverged(steps) => Err(Error::Diverged { steps }),
        }
    }

    pub fn complement(&self, u: &Word, v: &Word) -> ReversingOutcome {
        self.reverser().complement(u, v)
    }

    /// Left-sided operations delegate to the mirror table on reversed words.
    pub fn right_divides(&self, d: &Word, big: &Word) -> Result<bool, Error> {
        Reverser::new(&self.mirror_table, self.caps.budget)
            .left_divides(&d.reversed(), &big.reversed())
            .map_err(|steps| Error::Diverged { steps })
    }

    pub fn left_lcm(&self, a: &Word, b: &Word) -> Result<Word, Error> {
        match Reverser::new(&self.mirror_table, self.caps.budget)
            .right_lcm(&a.reversed(), &b.reversed())
        {
            ReversingOutcome::Defined(w) => Ok(w.reversed()),
            ReversingOutcome::Undefined => Err(Error::NotGarside(
                "elements admit no common left multiple".into(),
            )),
            ReversingOutcome::Diverged(steps) => Err(Error::Diverged { steps }),
        }
    }

    /// Canonical representative: looked up in the lattice when the element is
    /// a simple, otherwise by bounded class enumeration.
    pub fn canonical(&self, w: &Word) -> Result<Word, Error> {
        if let Some(node) = self.lattice.locate(w.as_slice()) {
            return Ok(self.lattice.rep(node).clone());
        }
        atomicity::canonical_rep(&self.presentation, w, self.caps.class_caps())
            .ok_or_else(|| Error::CapExceeded("class enumeration for canonical form".into()))
    }

    /// Left gcd: the right lcm of the common left divisors.
    pub fn left_gcd(&self, a: &Word, b: &Word) -> Result<Word, Error> {
        let da = divisors_of(
            &self.table,
            &self.presentation.relations,
            a,
            self.caps.bfs_cap,
            self.caps.budget,
        )?;
        let db = divisors_of(
            &self.table,
            &self.presentation.relations,
            b,
            self.caps.bfs_cap,
            self.caps.budget,
        )?;
        let sa: BTreeSet<&Word> = da.reps().iter().collect();
        let sb: BTreeSet<&Word> = db.reps().iter().collect();
        let mut g = Word::empty();
        for d in sa.intersection(&sb) {
            g = self.right_lcm(&g, d)?;
        }
        // the gcd divides a; its canonical name lives in a's divisor lattice
        match da.locate(g.as_slice()) {
            Some(n) => Ok(da.rep(n).clone()),
            None => Err(Error::NotGarside(
                "gcd computation left the divisor lattice".into(),
            )),
        }
    }

    /// All q-th roots of Δ^p, canonicalized and sorted.
    pub fn roots(&self, p: u32, q: u32, caps: &Caps) -> Result<BTreeSet<Word>, Error> {
        if p == 0 || q == 0 {
            return Err(Error::Invalid("root powers must be positive".into()));
        }
        let target = self.delta.pow(p as usize);
        let own;
        let lat = if p == 1 {
            &self.lattice
        } else {
            own = divisors_of(
                &self.table,
                &self.presentation.relations,
                &target,
                caps.bfs_cap,
                caps.budget,
            )?;
            &own
        };
        let funcs = invariant_functionals(&self.presentation);
        let tvals = eval_functionals(&funcs, &target);
        let rev = self.reverser();
        let mut out = BTreeSet::new();
        for node in 0..lat.len() as u32 {
            let rep = lat.rep(node);
            if rep.is_empty() {
                continue;
            }
            let vals = eval_functionals(&funcs, rep);
            if vals
                .iter()
                .zip(&tvals)
                .any(|(v, t)| v * q as i128 != *t)
            {
                continue;
            }
            let powered = rep.pow(q as usize);
            match rev.words_equal(&powered, &target) {
                Ok(true) => {
                    out.insert(rep.clone());
                }
                Ok(false) => {}
                Err(steps) => return Err(Error::Diverged { steps }),
            }
        }
        Ok(out)
    }

    /// Lexicographically minimal (p, q) with h^q ≡ Δ^p.
    pub fn root_descriptor(&self, h: &Word, caps: &Caps) -> Result<(u32, u32), Error> {
        if h.is_empty() {
            return Err(Error::Invalid("ε is not a root of a Garside element".into()));
        }
        let funcs = invariant_functionals(&self.presentation);
        let hv = eval_functionals(&funcs, h);
        let dv = eval_functionals(&funcs, &self.delta);
        let rev = self.reverser();
        for p in 1..=caps.root_cap {
            for q in 1..=caps.root_cap {
                if hv
                    .iter()
                    .zip(&dv)
                    .any(|(h, d)| h * q as i128 != d * p as i128)
                {
                    continue;
                }
                let lhs = h.pow(q as usize);
                let rhs = self.delta.pow(p as usize);
                match rev.words_equal(&lhs, &rhs) {
                    Ok(true) => return Ok((p, q)),
                    Ok(false) => {}
                    Err(steps) => return Err(Error::Diverged { steps }),
                }
            }
        }
        Err(Error::NotARoot {
            element: self.presentation.word_string(h),
        })
    }

    /// DOT rendering of the Hasse diagram: nodes in canonical order, edges
    /// labelled by atom names.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph simples {\n");
        for (i, w) in self.lattice.reps().iter().enumerate() {
            out.push_str(&format!(
                "  n{} [label=\"{}\"];\n",
                i,
                self.presentation.word_string(w)
            ));
        }
        for (i, a, j) in self.lattice.edges() {
            out.push_str(&format!(
                "  n{} -> n{} [label=\"{}\"];\n",
                i,
                j,
                self.presentation.gen_name(a)
            ));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let simples: Vec<String> = self
            .lattice
            .reps()
            .iter()
            .map(|w| self.presentation.word_string(w))
            .collect();
        let edges: Vec<serde_json::Value> = self
            .lattice
            .edges()
            .map(|(i, a, j)| {
                serde_json::json!([i, j, self.presentation.gen_name(a)])
            })
            .collect();
        serde_json::json!({
            "simples": simples,
            "delta": self.presentation.word_string(&self.delta),
            "edges": edges,
            "central_exponent": self.central_exponent,
        })
    }
}

/// Integer functionals constant on equivalence classes: a basis of the kernel
/// of the relation balance matrix, scaled to integers. Used as cheap filters
/// before exact equality tests.
pub(crate) fn invariant_functionals(p: &Presentation) -> Vec<Vec<i128>> {
    // weighted letter counts w with Σw(lhs) = Σw(rhs) per relation
    let n = p.gen_count();
    let rows: Vec<Vec<i128>> = p
        .relations
        .iter()
        .map(|r| {
            let mut row = vec![0i128; n];
            for &x in r.lhs.as_slice() {
                row[x as usize] += 1;
            }
            for &x in r.rhs.as_slice() {
                row[x as usize] -= 1;
            }
            row
        })
        .collect();
    // fraction-free Gaussian elimination on the transpose problem
    let mut m = rows;
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank_rows: Vec<Vec<i128>> = Vec::new();
    for col in 0..n {
        let mut pr = None;
        for (ri, row) in m.iter().enumerate() {
            if row[col] != 0 {
                pr = Some(ri);
                break;
            }
        }
        let Some(pr) = pr else { continue };
        let prow = m.remove(pr);
        for row in m.iter_mut() {
            if row[col] != 0 {
                let a = prow[col];
                let b = row[col];
                let g = gcd(a.abs(), b.abs()).max(1);
                let (fa, fb) = (b / g, a / g);
                for c in 0..n {
                    row[c] = row[c] * fb - prow[c] * fa;
                }
                let rg = row.iter().fold(0i128, |acc, &x| gcd(acc, x.abs()));
                if rg > 1 {
                    row.iter_mut().for_each(|x| *x /= rg);
                }
            }
        }
        pivots.push(col);
        rank_rows.push(prow);
    }
    // back-substitute basis vectors for each free column
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for f in free {
        // solve rank_rows · v = 0 with v[f] = 1, other free coords 0
        let mut v = vec![num_rational_stub(0); n];
        v[f] = num_rational_stub(1);
        for (ri, &pc) in pivots.iter().enumerate().rev() {
            let row = &rank_rows[ri];
            // row·v = 0 → v[pc] = −(Σ_{c≠pc} row[c]·v[c]) / row[pc]
            let mut num = 0i128;
            let mut den = 1i128;
            for c in 0..n {
                if c == pc || row[c] == 0 {
                    continue;
                }
                // accumulate row[c] * v[c]
                let (vn, vd) = v[c];
                num = num * vd + row[c] * vn * den;
                den *= vd;
            }
            v[pc] = reduce((-num, den * row[pc]));
        }
        // scale to integers
        let mut lcm_den = 1i128;
        for &(_, d) in &v {
            lcm_den = lcm_den / gcd(lcm_den, d.abs()) * d.abs();
        }
        let ints: Vec<i128> = v.iter().map(|&(n_, d)| n_ * (lcm_den / d)).collect();
        basis.push(ints);
    }
    basis
}

type Rat = (i128, i128);

fn num_rational_stub(n: i128) -> Rat {
    (n, 1)
}

fn reduce((n, d): Rat) -> Rat {
    let g = gcd(n.abs(), d.abs()).max(1);
    if d < 0 {
        (-n / g, -d / g)
    } else {
        (n / g, d / g)
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn eval_functionals(funcs: &[Vec<i128>], w: &Word) -> Vec<i128> {
    funcs
        .iter()
        .map(|f| w.as_slice().iter().map(|&x| f[x as usize]).sum())
        .collect()
}

/// Iterated-lcm Garside-element candidate: the right lcm of the complement
/// closure of the atoms, computed at word level with class-enumeration
/// canonicalization. Desk scale only; combinators supply hints instead.
fn delta_candidate(
    p: &Presentation,
    table: &ComplementTable,
    caps: &Caps,
) -> Result<Word, Error> {
    let rev = Reverser::new(table, caps.budget);
    let ccaps = caps.class_caps();
    let canon = |w: &Word| -> Result<Word, Error> {
        atomicity::canonical_rep(p, w, ccaps)
            .ok_or_else(|| Error::CapExceeded("class enumeration during closure".into()))
    };
    let mut set: Vec<Word> = Vec::new();
    for g in 0..p.gen_count() as Letter {
        let c = canon(&Word::letter(g))?;
        if !set.contains(&c) {
            set.push(c);
        }
    }
    set.sort_by(|a, b| shortlex(a.as_slice(), b.as_slice()));
    let mut queue: Vec<(usize, usize)> = Vec::new();
    for i in 0..set.len() {
        for j in 0..set.len() {
            if i != j {
                queue.push((i, j));
            }
        }
    }
    let mut qi = 0;
    while qi < queue.len() {
        let (i, j) = queue[qi];
        qi += 1;
        let (u, v) = (set[i].clone(), set[j].clone());
        match rev.complement(&u, &v) {
            ReversingOutcome::Defined(w) => {
                let c = canon(&w)?;
                if !c.is_empty() && !set.contains(&c) {
                    if set.len() >= caps.closure_cap {
                        return Err(Error::CapExceeded(format!(
                            "complement closure cap of {}",
                            caps.closure_cap
                        )));
                    }
                    let k = set.len();
                    set.push(c);
                    for e in 0..k {
                        queue.push((e, k));
                        queue.push((k, e));
                    }
                }
            }
            ReversingOutcome::Undefined => {}
            ReversingOutcome::Diverged(steps) => return Err(Error::Diverged { steps }),
        }
    }
    // Δ = iterated right lcm of the closure
    let mut delta = set.first().cloned().unwrap_or_default();
    for s in set.iter().skip(1) {
        match rev.right_lcm(&delta, s) {
            ReversingOutcome::Defined(w) => delta = w,
            ReversingOutcome::Undefined => {
                return Err(Error::NotGarside(
                    "atoms admit no common right multiple".into(),
                ))
            }
            ReversingOutcome::Diverged(steps) => return Err(Error::Diverged { steps }),
        }
    }
    Ok(delta)
}

/// Refine a divisor lattice of a Garside-element candidate down to the
/// minimal Garside element: the iterated lcm of the complement closure of the
/// atoms, computed on lattice nodes. Stops early once the fold reaches the
/// candidate itself.
fn minimal_delta_node(
    lat: &DivisorLattice,
    table: &ComplementTable,
    caps: &Caps,
) -> Result<u32, Error> {
    let rev = Reverser::new(table, caps.budget);
    let nl = lat.n_letters();
    let mut set: Vec<u32> = Vec::new();
    for a in 0..nl as Letter {
        match lat.transition(0, a) {
            Some(n) => {
                if !set.contains(&n) {
                    set.push(n);
                }
            }
            None => {
                return Err(Error::NotGarside(format!(
                    "atom #{a} does not divide the Garside element candidate"
                )))
            }
        }
    }
    let walk = |from: u32, w: &Word| -> Result<u32, Error> {
        let mut cur = from;
        for &x in w.as_slice() {
            cur = lat.transition(cur, x).ok_or_else(|| {
                Error::NotGarside("complement escapes the divisor lattice".into())
            })?;
        }
        Ok(cur)
    };
    let join = |cur: u32, other: u32, rev: &Reverser| -> Result<u32, Error> {
        match rev.complement(lat.rep(cur), lat.rep(other)) {
            ReversingOutcome::Defined(w) => walk(cur, &w),
            ReversingOutcome::Undefined => Err(Error::NotGarside(
                "simples admit no common right multiple".into(),
            )),
            ReversingOutcome::Diverged(steps) => Err(Error::Diverged { steps }),
        }
    };
    let mut cur = set[0];
    for k in 1..set.len() {
        cur = join(cur, set[k], &rev)?;
    }
    if cur == lat.top() {
        return Ok(cur);
    }
    let mut queue: Vec<(usize, usize)> = Vec::new();
    for i in 0..set.len() {
        for j in 0..set.len() {
            if i != j {
                queue.push((i, j));
            }
        }
    }
    let mut qi = 0;
    while qi < queue.len() {
        let (i, j) = queue[qi];
        qi += 1;
        let (u, v) = (set[i], set[j]);
        let w = match rev.complement(lat.rep(u), lat.rep(v)) {
            ReversingOutcome::Defined(w) => w,
            ReversingOutcome::Undefined => {
                return Err(Error::NotGarside(
                    "simples admit no common right multiple".into(),
                ))
            }
            ReversingOutcome::Diverged(steps) => return Err(Error::Diverged { steps }),
        };
        let node = walk(0, &w)?;
        if node != 0 && !set.contains(&node) {
            if set.len() >= caps.closure_cap {
                return Err(Error::CapExceeded(format!(
                    "complement closure cap of {}",
                    caps.closure_cap
                )));
            }
            let k = set.len();
            set.push(node);
            for e in 0..k {
                queue.push((e, k));
                queue.push((k, e));
            }
            cur = join(cur, node, &rev)?;
            if cur == lat.top() {
                return Ok(cur);
            }
        }
    }
    Ok(cur)
}

fn check_atoms(p: &Presentation, caps: &Caps) -> Result<(), Error> {
    for g in 0..p.gen_count() as Letter {
        let c = atomicity::equivalence_class(p, &Word::letter(g), caps.class_caps());
        if c.truncated {
            return Err(Error::CapExceeded(format!(
                "class of generator {} during atom check",
                p.gen_name(g)
            )));
        }
        if c.members.iter().any(|m| m.len() > 1) {
            return Err(Error::NotGarside(format!(
                "generator {} is not an atom",
                p.gen_name(g)
            )));
        }
    }
    Ok(())
}

/// Left-divisor set of Δ must equal its right-divisor set. The right side is
/// the left-divisor lattice of the reversed word in the mirror; elements are
/// compared through the main lattice. Full element-wise comparison up to a
/// size threshold, sampled above it (counts are always compared).
fn check_two_sided(
    lat: &DivisorLattice,
    mirror_lat: &DivisorLattice,
) -> Result<(), Error> {
    if lat.len() != mirror_lat.len() {
        return Err(Error::NotGarside(format!(
            "Δ has {} left divisors but {} right divisors",
            lat.len(),
            mirror_lat.len()
        )));
    }
    let full = lat.len() <= 65_536;
    let stride = if full { 1 } else { 97 };
    let mut i = 0usize;
    while i < mirror_lat.len() {
        let r = mirror_lat.rep(i as u32).reversed();
        if lat.locate(r.as_slice()).is_none() {
            return Err(Error::NotGarside(
                "a right divisor of Δ is not a left divisor".into(),
            ));
        }
        i += stride;
    }
    Ok(())
}

fn central_exponent_of(
    p: &Presentation,
    table: &ComplementTable,
    delta: &Word,
    caps: &Caps,
) -> Result<u32, Error> {
    let rev = Reverser::new(table, caps.budget);
    for e in 1..=caps.central_cap {
        let d = delta.pow(e as usize);
        let mut ok = true;
        for a in 0..p.gen_count() as Letter {
            let la = Word::letter(a);
            let lhs = d.concat(&la);
            let rhs = la.concat(&d);
            match rev.words_equal(&lhs, &rhs) {
                Ok(true) => {}
                Ok(false) => {
                    ok = false;
                    break;
                }
                Err(steps) => return Err(Error::Diverged { steps }),
            }
        }
        if ok {
            return Ok(e);
        }
    }
    Err(Error::CapExceeded(format!(
        "no central power of Δ up to exponent {}",
        caps.central_cap
    )))
}

/// Run the whole pipeline and return the verified structure.
pub fn simple_closure(input: StructureInput, caps: &Caps) -> Result<GarsideStructure, Error> {
    let report = atomicity::atomicity(&input.presentation, caps.class_caps());
    match &report.verdict {
        AtomicityVerdict::Atomic => {}
        AtomicityVerdict::NonAtomic(w) => {
            return Err(Error::NotAtomic(format!(
                "non-atomic: {} pumps to {}",
                input.presentation.word_string(&w.start),
                input.presentation.word_string(&w.pumped)
            )))
        }
        AtomicityVerdict::Unknown { cap } => {
            return Err(Error::NotAtomic(format!("atomicity unknown: {cap}")))
        }
    }
    build_structure(input, report, caps)
}

/// Same as [`simple_closure`] but with the atomicity verdict already in hand.
pub(crate) fn build_structure(
    input: StructureInput,
    report: AtomicityReport,
    caps: &Caps,
) -> Result<GarsideStructure, Error> {
    let StructureInput {
        presentation,
        table,
        mirror_presentation,
        mirror_table,
        delta_hint,
    } = input;
    check_atoms(&presentation, caps)?;
    let cube = cube_check_all(&table, caps.budget);
    if !cube.ok {
        return Err(Error::CubeFailed {
            mirror: false,
            failures: cube.failures.len(),
        });
    }
    let mcube = cube_check_all(&mirror_table, caps.budget);
    if !mcube.ok {
        return Err(Error::CubeFailed {
            mirror: true,
            failures: mcube.failures.len(),
        });
    }
    let candidate = match delta_hint {
        Some(w) => w,
        None => delta_candidate(&presentation, &table, caps)?,
    };
    let mut lat = divisors_of(
        &table,
        &presentation.relations,
        &candidate,
        caps.bfs_cap,
        caps.budget,
    )?;
    let min_node = minimal_delta_node(&lat, &table, caps)?;
    let delta = lat.rep(min_node).clone();
    if min_node != lat.top() {
        lat = divisors_of(
            &table,
            &presentation.relations,
            &delta,
            caps.bfs_cap,
            caps.budget,
        )?;
        // atoms must still divide the refined Δ
        for a in 0..presentation.gen_count() as Letter {
            if lat.transition(0, a).is_none() {
                return Err(Error::NotGarside(format!(
                    "atom {} does not divide the minimal candidate",
                    presentation.gen_name(a)
                )));
            }
        }
    }
    let mirror_lat = divisors_of(
        &mirror_table,
        &mirror_presentation.relations,
        &delta.reversed(),
        caps.bfs_cap,
        caps.budget,
    )?;
    check_two_sided(&lat, &mirror_lat)?;
    let delta = lat.rep(lat.top()).clone();
    let central_exponent = central_exponent_of(&presentation, &table, &delta, caps)?;
    Ok(GarsideStructure {
        presentation,
        table,
        mirror_presentation,
        mirror_table,
        lattice: lat,
        delta,
        central_exponent,
        atomicity: report,
        caps: *caps,
    })
}

/// One stage of a verification report.
#[derive(Clone, Debug)]
pub struct VerifyStage {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

pub struct VerifyReport {
    pub stages: Vec<VerifyStage>,
    pub atomicity: Option<AtomicityReport>,
    pub cube: Option<CubeReport>,
    pub structure: Option<GarsideStructure>,
}

impl VerifyReport {
    pub fn garside(&self) -> bool {
        self.structure.is_some() && self.stages.iter().all(|s| s.pass)
    }

    /// True when some stage failed only for resource reasons.
    pub fn capped(&self) -> bool {
        self.stages
            .iter()
            .any(|s| !s.pass && (s.detail.contains("cap") || s.detail.contains("diverged")))
    }
}

/// Ordered verification: right-complementedness (both sides), atomicity,
/// cube condition (both sides), simple closure, two-sided Δ check.
pub fn verify_garside(p: &Presentation, caps: &Caps) -> VerifyReport {
    verify_garside_with(p, caps, None)
}

pub fn verify_garside_with(
    p: &Presentation,
    caps: &Caps,
    hint: Option<Word>,
) -> VerifyReport {
    let mut stages = Vec::new();
    let fail = |stages: &mut Vec<VerifyStage>, name, detail: String| {
        stages.push(VerifyStage {
            name,
            pass: false,
            detail,
        });
    };
    let table = match right_complement_table(p, caps.class_caps()) {
        Ok(t) => {
            stages.push(VerifyStage {
                name: "right-complemented",
                pass: true,
                detail: String::new(),
            });
            t
        }
        Err(e) => {
            fail(&mut stages, "right-complemented", e.to_string());
            return VerifyReport {
                stages,
                atomicity: None,
                cube: None,
                structure: None,
            };
        }
    };
    let mirror_presentation = p.mirror();
    let mirror_table = match right_complement_table(&mirror_presentation, caps.class_caps()) {
        Ok(t) => {
            stages.push(VerifyStage {
                name: "left-complemented (mirror)",
                pass: true,
                detail: String::new(),
            });
            t
        }
        Err(e) => {
            fail(&mut stages, "left-complemented (mirror)", e.to_string());
            return VerifyReport {
                stages,
                atomicity: None,
                cube: None,
                structure: None,
            };
        }
    };
    let report = atomicity::atomicity(p, caps.class_caps());
    match &report.verdict {
        AtomicityVerdict::Atomic => stages.push(VerifyStage {
            name: "atomicity",
            pass: true,
            detail: match &report.additive_weights {
                Some(w) => format!(
                    "additive weights {}",
                    w.iter()
                        .enumerate()
                        .map(|(i, x)| format!("{}={}", p.gen_name(i as Letter), x))
                        .collect::<Vec<_>>()
                        .join(" ")
                ),
                None => "finite classes, no additive weights".into(),
            },
        }),
        AtomicityVerdict::NonAtomic(w) => {
            fail(
                &mut stages,
                "atomicity",
                format!(
                    "non-atomic: {} rewrites to {} which contains it",
                    p.word_string(&w.start),
                    p.word_string(&w.pumped)
                ),
            );
            return VerifyReport {
                stages,
                atomicity: Some(report),
                cube: None,
                structure: None,
            };
        }
        AtomicityVerdict::Unknown { cap } => {
            fail(&mut stages, "atomicity", format!("unknown: {cap}"));
            return VerifyReport {
                stages,
                atomicity: Some(report),
                cube: None,
                structure: None,
            };
        }
    }
    let cube = cube_check_all(&table, caps.budget);
    if cube.ok {
        stages.push(VerifyStage {
            name: "cube condition",
            pass: true,
            detail: String::new(),
        });
    } else {
        let f = &cube.failures[0];
        fail(
            &mut stages,
            "cube condition",
            format!(
                "fails at ({}, {}, {})",
                p.gen_name(f.x),
                p.gen_name(f.y),
                p.gen_name(f.z)
            ),
        );
        return VerifyReport {
            stages,
            atomicity: Some(report),
            cube: Some(cube),
            structure: None,
        };
    }
    let mcube = cube_check_all(&mirror_table, caps.budget);
    if mcube.ok {
        stages.push(VerifyStage {
            name: "cube condition (mirror)",
            pass: true,
            detail: String::new(),
        });
    } else {
        fail(
            &mut stages,
            "cube condition (mirror)",
            format!("fails on {} triple(s)", mcube.failures.len()),
        );
        return VerifyReport {
            stages,
            atomicity: Some(report),
            cube: Some(mcube),
            structure: None,
        };
    }
    let input = StructureInput {
        presentation: p.clone(),
        table,
        mirror_presentation,
        mirror_table,
        delta_hint: hint,
    };
    match build_structure(input, report.clone(), caps) {
        Ok(gs) => {
            stages.push(VerifyStage {
                name: "simple closure",
                pass: true,
                detail: format!(
                    "{} simples, Δ = {}",
                    gs.simple_count(),
                    gs.presentation.word_string(&gs.delta)
                ),
            });
            stages.push(VerifyStage {
                name: "Δ two-sided",
                pass: true,
                detail: String::new(),
            });
            VerifyReport {
                stages,
                atomicity: Some(report),
                cube: Some(cube),
                structure: Some(gs),
            }
        }
        Err(e) => {
            let name = match &e {
                Error::NotGarside(msg) if msg.contains("divisor") => "Δ two-sided",
                _ => "simple closure",
            };
            fail(&mut stages, name, e.to_string());
            VerifyReport {
                stages,
                atomicity: Some(report),
                cube: Some(cube),
                structure: None,
            }
        }
    }
}

/// Build a verified structure directly from a presentation.
pub fn structure_of(p: &Presentation, caps: &Caps) -> Result<GarsideStructure, Error> {
    simple_closure(StructureInput::from_presentation(p, caps)?, caps)
}

/// Word equality with explicit engine choice: double reversing when the cube
/// condition holds, bounded class enumeration otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EqualityMethod {
    DoubleReversing,
    ClassEnumeration,
}

pub fn words_equal_any(
    p: &Presentation,
    u: &Word,
    v: &Word,
    caps: &Caps,
) -> Result<(bool, EqualityMethod), Error> {
    if let Ok(table) = right_complement_table(p, caps.class_caps()) {
        if cube_check_all(&table, caps.budget).ok {
            let rev = Reverser::new(&table, caps.budget);
            return rev
                .words_equal(u, v)
                .map(|b| (b, EqualityMethod::DoubleReversing))
                .map_err(|steps| Error::Diverged { steps });
        }
    }
    let cu = atomicity::equivalence_class(p, u, caps.class_caps());
    if cu.truncated {
        return Err(Error::CapExceeded("class enumeration for equality".into()));
    }
    Ok((
        cu.members.contains(v),
        EqualityMethod::ClassEnumeration,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    fn chi() -> Presentation {
        Presentation::parse("monoid: chi\ngens: a b c\nrel: a a = b c\nrel: b b b = c a\n").unwrap()
    }

    fn kappa() -> Presentation {
        Presentation::parse("monoid: kappa\ngens: x y\nrel: x y x y x = y y\n").unwrap()
    }

    #[test]
    fn chi_structure() {
        let gs = structure_of(&chi(), &caps()).unwrap();
        assert_eq!(gs.simple_count(), 9);
        assert_eq!(gs.presentation.word_string(&gs.delta), "a a a");
    }

    #[test]
    fn kappa_structure() {
        let gs = structure_of(&kappa(), &caps()).unwrap();
        assert_eq!(gs.simple_count(), 12);
        assert_eq!(gs.presentation.word_string(&gs.delta), "y y y");
        assert_eq!(gs.central_exponent, 1);
    }

    #[test]
    fn free_abelian_structure() {
        let p = Presentation::parse("gens: a b\nrel: a b = b a\n").unwrap();
        let gs = structure_of(&p, &caps()).unwrap();
        assert_eq!(gs.simple_count(), 4);
        assert_eq!(gs.central_exponent, 1);
        let simples: Vec<String> = gs
            .simples()
            .iter()
            .map(|w| gs.presentation.word_string(w))
            .collect();
        assert_eq!(simples, ["1", "a", "b", "a b"]);
    }

    #[test]
    fn braid_central_exponent_two() {
        let p = Presentation::parse("gens: s t\nrel: s t s = t s t\n").unwrap();
        let gs = structure_of(&p, &caps()).unwrap();
        assert_eq!(gs.simple_count(), 6);
        assert_eq!(gs.central_exponent, 2);
    }

    #[test]
    fn kappa_roots() {
        let gs = structure_of(&kappa(), &caps()).unwrap();
        let p = &gs.presentation;
        let r13 = gs.roots(1, 3, &caps()).unwrap();
        let names: Vec<String> = r13.iter().map(|w| p.word_string(w)).collect();
        assert_eq!(names, ["y", "x y", "y x"]);
        let r23 = gs.roots(2, 3, &caps()).unwrap();
        let names: Vec<String> = r23.iter().map(|w| p.word_string(w)).collect();
        assert_eq!(
            names,
            [
                "y y",
                "x y x y",
                "y x y x",
                "x x y x y",
                "x y x x y",
                "y x x y x",
                "y x y x x"
            ]
        );
    }

    #[test]
    fn chi_roots_2_3() {
        let gs = structure_of(&chi(), &caps()).unwrap();
        let r = gs.roots(2, 3, &caps()).unwrap();
        let names: Vec<String> = r.iter().map(|w| gs.presentation.word_string(w)).collect();
        assert_eq!(names, ["a a", "c b"]);
    }

    #[test]
    fn root_descriptors() {
        let gs = structure_of(&kappa(), &caps()).unwrap();
        let p = &gs.presentation;
        assert_eq!(
            gs.root_descriptor(&p.parse_word("x y").unwrap(), &caps()).unwrap(),
            (1, 3)
        );
        assert_eq!(
            gs.root_descriptor(&p.parse_word("y y").unwrap(), &caps()).unwrap(),
            (2, 3)
        );
        assert_eq!(
            gs.root_descriptor(&p.parse_word("y y y").unwrap(), &caps()).unwrap(),
            (1, 1)
        );
        match gs.root_descriptor(&p.parse_word("x").unwrap(), &caps()) {
            Err(Error::NotARoot { .. }) => {}
            other => panic!("x is not a root, got {other:?}"),
        }
    }

    #[test]
    fn gcd_examples() {
        let gs = structure_of(&kappa(), &caps()).unwrap();
        let p = &gs.presentation;
        let g = gs
            .left_gcd(&p.parse_word("y y").unwrap(), &p.parse_word("y x").unwrap())
            .unwrap();
        assert_eq!(p.word_string(&g), "y");
        let g = gs
            .left_gcd(&p.parse_word("y x").unwrap(), &p.parse_word("y x").unwrap())
            .unwrap();
        assert_eq!(p.word_string(&g), "y x");
        let gs = structure_of(&chi(), &caps()).unwrap();
        let p = &gs.presentation;
        let g = gs
            .left_gcd(&p.parse_word("a").unwrap(), &p.parse_word("b").unwrap())
            .unwrap();
        assert!(g.is_empty());
    }

    #[test]
    fn verify_bs22_fails() {
        let p = Presentation::parse("gens: s t\nrel: s s t = t s s\n").unwrap();
        let report = verify_garside(&p, &caps());
        assert!(!report.garside());
        // complemented, atomic, cube fine (no triples); closure diverges
        assert!(report.stages.iter().any(|s| s.name == "simple closure" && !s.pass));
    }

    #[test]
    fn verify_cube_failure_reported() {
        let p = Presentation::parse("gens: a b c\nrel: a b = b a\nrel: a c = c a\nrel: b a = c a\n")
            .unwrap();
        // the cube check itself pins the failing triple
        let t = right_complement_table(&p, caps().class_caps()).unwrap();
        let report = cube_check_all(&t, caps().budget);
        assert!(!report.ok);
        assert!(report.failures.iter().any(|f| {
            (p.gen_name(f.x), p.gen_name(f.y), p.gen_name(f.z)) == ("a", "b", "c")
        }));
        // the full pipeline rejects the presentation as well (its mirror is
        // not even complemented: both mirrored relations head with a)
        assert!(!verify_garside(&p, &caps()).garside());
    }

    #[test]
    fn two_sided_delta_checked() {
        let gs = structure_of(&chi(), &caps()).unwrap();
        // every simple right-divides Δ as well
        for s in gs.simples() {
            assert!(gs.right_divides(s, &gs.delta.clone()).unwrap());
        }
    }

    #[test]
    fn dot_and_json_outputs() {
        let gs = structure_of(&kappa(), &caps()).unwrap();
        let dot = gs.to_dot();
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("label=\"1\""));
        let v = gs.to_json();
        assert_eq!(v["simples"].as_array().unwrap().len(), 12);
        assert_eq!(v["delta"], "y y y");
        assert_eq!(v["central_exponent"], 1);
    }

    #[test]
    fn equality_fallback_method() {
        let p = Presentation::parse("gens: a b c\nrel: a b = b a\nrel: a c = c a\nrel: b a = c a\n")
            .unwrap();
        let u = p.parse_word("a b").unwrap();
        let v = p.parse_word("b a").unwrap();
        let (eq, method) = words_equal_any(&p, &u, &v, &caps()).unwrap();
        assert!(eq);
        assert_eq!(method, EqualityMethod::ClassEnumeration);
        let k = kappa();
        let (eq, method) = words_equal_any(
            &k,
            &k.parse_word("x y x y x").unwrap(),
            &k.parse_word("y y").unwrap(),
            &caps(),
        )
        .unwrap();
        assert!(eq);
        assert_eq!(method, EqualityMethod::DoubleReversing);
    }
}
