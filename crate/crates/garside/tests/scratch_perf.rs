use garside::combinators::{amalgam_structure, AmalgamSpec};
use garside::structure::structure_of;
use garside::{Caps, Presentation};
use std::time::Instant;

fn chi() -> garside::structure::GarsideStructure {
    let p = Presentation::parse("monoid: chi\ngens: a b c\nrel: a a = b c\nrel: b b b = c a\n")
        .unwrap();
    structure_of(&p, &Caps::default()).unwrap()
}

fn kappa() -> garside::structure::GarsideStructure {
    let p = Presentation::parse("monoid: kappa\ngens: x y\nrel: x y x y x = y y\n").unwrap();
    structure_of(&p, &Caps::default()).unwrap()
}

#[test]
fn timing_amalgams() {
    let caps = Caps::default();
    let l = chi();
    let r = kappa();
    for (hl, hr, want) in [
        ("a", "y", 17usize),
        ("a", "x y", 19),
        ("c b", "y x y x", 161),
        ("b", "y", 4242),
    ] {
        let t0 = Instant::now();
        let spec = AmalgamSpec {
            left: &l,
            right: &r,
            h_left: l.presentation.parse_word(hl).unwrap(),
            h_right: r.presentation.parse_word(hr).unwrap(),
        };
        let gs = amalgam_structure(&spec, &caps).unwrap();
        println!(
            "amalgam ({hl}, {hr}): {} simples in {:?} (want {want})",
            gs.simple_count(),
            t0.elapsed()
        );
        assert_eq!(gs.simple_count(), want);
    }
}
