//! Linear systems whose unknowns are the entries of Laurent-linear maps.
//!
//! Since every entry of a graded map is a pinned monomial, an unknown map is
//! just a GF(2) variable per admissible `(source, target)` pair. Composites
//! with known maps are again pinned, so equations are indexed by
//! `(family, source, target)`.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;

use crate::complex::{pinned_power, Generator, LinearMap};
use crate::gf2::{BitVec, LinearSystem};

/// Handle to a block of variables standing for one unknown map.
#[derive(Clone, Debug)]
pub struct UnknownMap {
    pub shift: i64,
    vars: Vec<(usize, usize, i64)>,
    offset: usize,
    by_source: HashMap<usize, Vec<(usize, usize)>>,
}

impl UnknownMap {
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
}

#[derive(Default, Debug)]
pub struct MapSystem {
    nvars: usize,
    eqs: BTreeMap<(usize, usize, usize), (Vec<usize>, bool)>,
}

impl MapSystem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Register an unknown map `src -> tgt` with the given shift. `allow`
    /// receives `(g, h, rise)` for each grading-coherent pair and decides
    /// whether that entry may be nonzero.
    pub fn unknown(
        &mut self,
        src: &[Generator],
        tgt: &[Generator],
        shift: i64,
        mut allow: impl FnMut(usize, usize, &BigRational) -> bool,
    ) -> UnknownMap {
        let mut vars = Vec::new();
        for (g, sg) in src.iter().enumerate() {
            for (h, th) in tgt.iter().enumerate() {
                if let Some(k) = pinned_power(sg, th, shift) {
                    let rise = th.level_at(k) - &sg.deg_i;
                    if allow(g, h, &rise) {
                        vars.push((g, h, k));
                    }
                }
            }
        }
        let offset = self.nvars;
        self.nvars += vars.len();
        let mut by_source: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for (i, &(g, h, _)) in vars.iter().enumerate() {
            by_source.entry(g).or_default().push((offset + i, h));
        }
        UnknownMap {
            shift,
            vars,
            offset,
            by_source,
        }
    }

    fn term(&mut self, key: (usize, usize, usize), var: usize) {
        let e = self.eqs.entry(key).or_default();
        e.0.push(var);
    }

    /// Add `known ∘ x` to equation family `fam`.
    pub fn left(&mut self, fam: usize, known: &LinearMap, x: &UnknownMap) {
        for (i, &(a, b, _)) in x.vars.iter().enumerate() {
            for (c, _) in known.row(b) {
                self.term((fam, a, c), x.offset + i);
            }
        }
    }

    /// Add `x ∘ known` to equation family `fam`.
    pub fn right(&mut self, fam: usize, x: &UnknownMap, known: &LinearMap) {
        for (a, b, _) in known.entries() {
            if let Some(vs) = x.by_source.get(&b) {
                for &(var, c) in vs {
                    self.term((fam, a, c), var);
                }
            }
        }
    }

    /// Add `x` itself to equation family `fam`.
    pub fn plain(&mut self, fam: usize, x: &UnknownMap) {
        for (i, &(a, c, _)) in x.vars.iter().enumerate() {
            self.term((fam, a, c), x.offset + i);
        }
    }

    /// Add a known map to the constant side of family `fam`.
    pub fn constant(&mut self, fam: usize, known: &LinearMap) {
        for (a, c, _) in known.entries() {
            let e = self.eqs.entry((fam, a, c)).or_default();
            e.1 ^= true;
        }
    }

    /// Fix one variable of `x` to a value, if that entry is a variable.
    /// Returns false if the entry is not admissible.
    pub fn fix(&mut self, x: &UnknownMap, g: usize, h: usize, value: bool) -> bool {
        let Some(i) = x.vars.iter().position(|&(a, b, _)| a == g && b == h) else {
            return false;
        };
        // a dedicated family id that no caller uses
        let key = (usize::MAX, x.offset + i, 0);
        let e = self.eqs.entry(key).or_default();
        e.0.push(x.offset + i);
        e.1 = value;
        true
    }

    fn system(&self) -> LinearSystem {
        let mut sys = LinearSystem::new(self.nvars);
        for (vars, rhs) in self.eqs.values() {
            let v = BitVec::from_indices(self.nvars, vars.iter().copied());
            sys.push(v, *rhs);
        }
        sys
    }

    /// Lexicographically least solution in variable order.
    pub fn solve(&self) -> Option<BitVec> {
        self.system().solve()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn extract(x: &UnknownMap, sol: &BitVec) -> LinearMap {
        let mut m = LinearMap::zero(x.shift);
        for (i, &(g, h, k)) in x.vars.iter().enumerate() {
            if sol.get(x.offset + i) {
                m.toggle_raw(g, h, k);
            }
        }
        m
    }
}

/// Distinct entry rises available to unknown maps `src -> tgt` of a given
/// shift, sorted ascending. Used to search for minimal levels.
pub fn candidate_rises(src: &[Generator], tgt: &[Generator], shift: i64) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::new();
    for sg in src {
        for th in tgt {
            if let Some(k) = pinned_power(sg, th, shift) {
                out.push(th.level_at(k) - &sg.deg_i);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}
