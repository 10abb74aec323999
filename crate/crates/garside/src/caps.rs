//! Resource caps. Reversing has no termination bound on arbitrary
//! presentations and divisor lattices can be astronomically large, so every
//! open-ended computation is budgeted and reports cap exhaustion in-band.

use crate::atomicity::ClassCaps;

#[derive(Clone, Copy, Debug)]
pub struct Caps {
    /// letter-pair resolution steps per reversing call
    pub budget: u64,
    /// elements in a complement-closure fixpoint
    pub closure_cap: usize,
    /// nodes in a divisor-lattice enumeration
    pub bfs_cap: usize,
    /// member length in class enumeration
    pub length_cap: usize,
    /// member count in class enumeration
    pub size_cap: usize,
    /// power search bound for μ values
    pub mu_cap: u32,
    /// power bounds (p and q) in root searches
    pub root_cap: u32,
    /// search bound for the central exponent
    pub central_cap: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            budget: 1_000_000,
            closure_cap: 1_000_000,
            bfs_cap: 10_000_000,
            length_cap: 64,
            size_cap: 1_000_000,
            mu_cap: 64,
            root_cap: 128,
            central_cap: 64,
        }
    }
}

impl Caps {
    pub fn class_caps(&self) -> ClassCaps {
        ClassCaps {
            length_cap: self.length_cap,
            size_cap: self.size_cap,
        }
    }

    /// Raised caps for instances far beyond desk scale.
    pub fn stress(mut self) -> Self {
        self.budget = self.budget.saturating_mul(16);
        self.closure_cap = self.closure_cap.saturating_mul(16);
        self.bfs_cap = self.bfs_cap.saturating_mul(16);
        self.size_cap = self.size_cap.saturating_mul(4);
        self.length_cap *= 4;
        self
    }
}
