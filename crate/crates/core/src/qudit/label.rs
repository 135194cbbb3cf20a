//! Basis labels for mode spaces.
//!
//! A label identifies one basis state of a Hilbert space: a single OAM mode,
//! a path, or any tuple of simpler labels. Tuples compose under tensor
//! products, so a two-photon basis label is simply `(Oam, Oam)` and a
//! path-resolved single-photon label is `(Path, Oam)`.

use std::fmt;
use std::hash::Hash;

/// A basis label: orderable, hashable, and renderable for diagnostics.
pub trait BasisLabel: Clone + PartialEq + Eq + Hash + PartialOrd + Ord + fmt::Debug {
    fn render(&self) -> String;
}

/// An orbital-angular-momentum mode `|l>` carrying `l*hbar` per photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Oam(pub i32);

impl BasisLabel for Oam {
    fn render(&self) -> String {
        self.0.to_string()
    }
}

impl fmt::Display for Oam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A named optical path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub String);

impl Path {
    pub fn new(name: impl Into<String>) -> Self {
        Path(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl BasisLabel for Path {
    fn render(&self) -> String {
        self.0.clone()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<A: BasisLabel, B: BasisLabel> BasisLabel for (A, B) {
    fn render(&self) -> String {
        format!("({},{})", self.0.render(), self.1.render())
    }
}
