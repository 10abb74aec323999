use garside::combinators::{amalgam, AmalgamSpec};
use garside::structure::{structure_of, simple_closure};
use garside::{Caps, Presentation};

fn main() {
    let caps = Caps::default();
    let p = Presentation::parse("monoid: chi\ngens: a b c\nrel: a a = b c\nrel: b b b = c a\n").unwrap();
    let l = structure_of(&p, &caps).unwrap();
    let p = Presentation::parse("monoid: kappa\ngens: x y\nrel: x y x y x = y y\n").unwrap();
    let r = structure_of(&p, &caps).unwrap();
    let spec = AmalgamSpec {
        left: &l,
        right: &r,
        h_left: l.presentation.parse_word("a").unwrap(),
        h_right: r.presentation.parse_word("x y").unwrap(),
    };
    match amalgam(&spec, &caps) {
        Ok(b) => {
            println!("desc_left {:?} desc_right {:?}", b.desc_left, b.desc_right);
            println!("mu_left {:?} mu_right {:?}", b.mu_left, b.mu_right);
            println!("relations:\n{}", b.input.presentation.to_text(&[]));
            println!("hint: {}", b.input.presentation.word_string(b.input.delta_hint.as_ref().unwrap()));
            match simple_closure(b.input, &caps) {
                Ok(gs) => println!("simples: {}", gs.simple_count()),
                Err(e) => println!("closure error: {e}"),
            }
        }
        Err(e) => println!("amalgam error: {e}"),
    }
}
