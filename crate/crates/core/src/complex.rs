//! Instanton-type complexes over GF(2)[y, 1/y] and maps between them.
//!
//! Every map carries a fixed shift in the ℤ-grading. Because `y` has
//! ℤ-degree 8, an entry `g -> h` of a map with shift `t` can only be the
//! monomial `y^k` with `deg_z(h) + 8k = deg_z(g) + t`. Entries are therefore
//! stored as a set of `(source, target)` pairs with the pinned power cached.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::filt::FiltValue;

/// Which of the two reducible conventions a complex follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Flavor {
    /// θ spans the quotient, sits at (deg_z, deg_i) = (-3, 0), and the
    /// differential may flow out of it.
    D2,
    /// θ spans a subcomplex, sits at (0, 0), and the differential may flow
    /// into it.
    D1,
}

impl Flavor {
    pub fn theta_grading(self) -> i64 {
        match self {
            Flavor::D2 => -3,
            Flavor::D1 => 0,
        }
    }

    pub fn flip(self) -> Flavor {
        match self {
            Flavor::D2 => Flavor::D1,
            Flavor::D1 => Flavor::D2,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::D2 => write!(f, "D2"),
            Flavor::D1 => write!(f, "D1"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: String,
    pub deg_z: i64,
    pub deg_i: BigRational,
    pub is_theta: bool,
}

impl Generator {
    pub fn new(id: impl Into<String>, deg_z: i64, deg_i: BigRational) -> Self {
        Generator {
            id: id.into(),
            deg_z,
            deg_i,
            is_theta: false,
        }
    }

    pub fn theta(flavor: Flavor) -> Self {
        Generator {
            id: "theta".into(),
            deg_z: flavor.theta_grading(),
            deg_i: BigRational::zero(),
            is_theta: true,
        }
    }

    /// Filtration level of `y^k` times this generator.
    pub fn level_at(&self, k: i64) -> BigRational {
        &self.deg_i + BigRational::from_integer(k.into())
    }
}

/// The power of `y` forced on an entry `src -> tgt` of a map with the given
/// ℤ-grading shift, if any.
pub fn pinned_power(src: &Generator, tgt: &Generator, shift: i64) -> Option<i64> {
    let diff = src.deg_z + shift - tgt.deg_z;
    (diff.rem_euclid(8) == 0).then_some(diff.div_euclid(8))
}

/// A GF(2)[y, 1/y]-linear map between free modules on two generator lists.
///
/// Entries are monomials; `entries[(g, h)] = k` means the map sends `g` to a
/// sum containing `y^k h`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinearMap {
    pub shift: i64,
    entries: BTreeMap<(usize, usize), i64>,
}

impl LinearMap {
    pub fn zero(shift: i64) -> Self {
        LinearMap {
            shift,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(gens: &[Generator]) -> Self {
        let mut m = LinearMap::zero(0);
        for i in 0..gens.len() {
            m.entries.insert((i, i), 0);
        }
        m
    }

    /// Build from `(source, target)` pairs, computing the pinned powers.
    /// Repeated pairs cancel.
    pub fn from_pairs(
        src: &[Generator],
        tgt: &[Generator],
        shift: i64,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut m = LinearMap::zero(shift);
        for (g, h) in pairs {
            m.toggle(src, tgt, g, h)?;
        }
        Ok(m)
    }

    /// Build from explicit `(source, target, ypow)` triples, checking each
    /// power against the gradings.
    pub fn from_triples(
        src: &[Generator],
        tgt: &[Generator],
        shift: i64,
        triples: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self> {
        let mut m = LinearMap::zero(shift);
        for (g, h, k) in triples {
            let (sg, th) = endpoint(src, tgt, g, h)?;
            match pinned_power(sg, th, shift) {
                Some(p) if p == k => {}
                _ => {
                    return Err(Error::Structural(format!(
                        "entry {} --y^{k}--> {} is incoherent with gradings {} -> {} (shift {shift})",
                        sg.id, th.id, sg.deg_z, th.deg_z
                    )))
                }
            }
            m.toggle(src, tgt, g, h)?;
        }
        Ok(m)
    }

    /// Add the pinned monomial `g -> h` (mod 2).
    pub fn toggle(&mut self, src: &[Generator], tgt: &[Generator], g: usize, h: usize) -> Result<()> {
        let (sg, th) = endpoint(src, tgt, g, h)?;
        let k = pinned_power(sg, th, self.shift).ok_or_else(|| {
            Error::Structural(format!(
                "no power of y makes {} -> {} coherent (gradings {} -> {}, shift {})",
                sg.id, th.id, sg.deg_z, th.deg_z, self.shift
            ))
        })?;
        self.toggle_raw(g, h, k);
        Ok(())
    }

    pub(crate) fn toggle_raw(&mut self, g: usize, h: usize, k: i64) {
        if self.entries.remove(&(g, h)).is_none() {
            self.entries.insert((g, h), k);
        }
    }

    pub fn get(&self, g: usize, h: usize) -> Option<i64> {
        self.entries.get(&(g, h)).copied()
    }

    pub fn contains(&self, g: usize, h: usize) -> bool {
        self.entries.contains_key(&(g, h))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All entries as `(source, target, ypow)` in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.entries.iter().map(|(&(g, h), &k)| (g, h, k))
    }

    /// Entries leaving `g`.
    pub fn row(&self, g: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.entries
            .range((g, 0)..(g + 1, 0))
            .map(|(&(_, h), &k)| (h, k))
    }

    /// `other ∘ self`: apply `self` first.
    pub fn then(&self, other: &LinearMap) -> LinearMap {
        let mut out = LinearMap::zero(self.shift + other.shift);
        for (g, h, k) in self.entries() {
            for (t, k2) in other.row(h) {
                out.toggle_raw(g, t, k + k2);
            }
        }
        out
    }

    pub fn add(&self, other: &LinearMap) -> LinearMap {
        assert_eq!(self.shift, other.shift, "adding maps of different shifts");
        let mut out = self.clone();
        for (g, h, k) in other.entries() {
            out.toggle_raw(g, h, k);
        }
        out
    }

    /// Filtration rise `deg_i(h) + k - deg_i(g)` of one entry.
    pub fn rise(src: &[Generator], tgt: &[Generator], g: usize, h: usize, k: i64) -> BigRational {
        tgt[h].level_at(k) - &src[g].deg_i
    }

    /// The least δ for which this map has level δ: the maximum entry rise,
    /// or `-inf` for the zero map.
    pub fn level(&self, src: &[Generator], tgt: &[Generator]) -> FiltValue {
        self.entries()
            .map(|(g, h, k)| FiltValue::Finite(Self::rise(src, tgt, g, h, k)))
            .max()
            .unwrap_or(FiltValue::NegInf)
    }

    /// The transpose map `tgt* -> src*`, with entry `h* -> g*` carrying the
    /// same power of `y`.
    pub fn transpose(&self) -> LinearMap {
        let mut out = LinearMap::zero(self.shift);
        for (g, h, k) in self.entries() {
            out.toggle_raw(h, g, k);
        }
        out
    }

    /// Relabel source and target indices.
    pub fn reindex(&self, src_map: &[usize], tgt_map: &[usize]) -> LinearMap {
        let mut out = LinearMap::zero(self.shift);
        for (g, h, k) in self.entries() {
            out.toggle_raw(src_map[g], tgt_map[h], k);
        }
        out
    }

    pub fn apply(&self, chain: &Chain) -> Chain {
        let mut out = Chain::zero();
        for &(g, m) in chain.terms() {
            for (h, k) in self.row(g) {
                out.toggle(h, m + k);
            }
        }
        out
    }

    /// Check every entry's power against the gradings.
    pub fn check_coherence(&self, src: &[Generator], tgt: &[Generator]) -> Result<()> {
        for (g, h, k) in self.entries() {
            let (sg, th) = endpoint(src, tgt, g, h)?;
            if pinned_power(sg, th, self.shift) != Some(k) {
                return Err(Error::Structural(format!(
                    "entry {} --y^{k}--> {} is incoherent (shift {})",
                    sg.id, th.id, self.shift
                )));
            }
        }
        Ok(())
    }

    pub fn describe(&self, src: &[Generator], tgt: &[Generator]) -> Vec<String> {
        self.entries()
            .map(|(g, h, k)| format!("{} --y^{}--> {}", src[g].id, k, tgt[h].id))
            .collect()
    }
}

fn endpoint<'a>(src: &'a [Generator], tgt: &'a [Generator], g: usize, h: usize) -> Result<(&'a Generator, &'a Generator)> {
    let sg = src
        .get(g)
        .ok_or_else(|| Error::Structural(format!("source index {g} out of range")))?;
    let th = tgt
        .get(h)
        .ok_or_else(|| Error::Structural(format!("target index {h} out of range")))?;
    Ok((sg, th))
}

/// A finite formal GF(2) sum of lattice points `y^k g`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain(BTreeSet<(usize, i64)>);

impl Chain {
    pub fn zero() -> Self {
        Chain(BTreeSet::new())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut c = Chain::zero();
        for (g, k) in terms {
            c.toggle(g, k);
        }
        c
    }

    pub fn generator(g: usize) -> Self {
        Chain::from_terms([(g, 0)])
    }

    pub fn toggle(&mut self, g: usize, k: i64) {
        if !self.0.remove(&(g, k)) {
            self.0.insert((g, k));
        }
    }

    pub fn contains(&self, g: usize, k: i64) -> bool {
        self.0.contains(&(g, k))
    }

    pub fn terms(&self) -> impl Iterator<Item = &(usize, i64)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        for &(g, k) in other.terms() {
            out.toggle(g, k);
        }
        out
    }

    /// Multiply by `y^k`.
    pub fn shift(&self, k: i64) -> Chain {
        Chain(self.0.iter().map(|&(g, m)| (g, m + k)).collect())
    }

    pub fn describe(&self, gens: &[Generator]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms()
            .map(|&(g, k)| {
                if k == 0 {
                    gens[g].id.clone()
                } else {
                    format!("y^{k}·{}", gens[g].id)
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// ℤ-grading of a chain: a single value, mixed, or undefined for zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainGrading {
    Homogeneous(i64),
    Inhomogeneous,
    Undefined,
}

/// ℤ-grading and filtration level of a chain. The level of a sum is the
/// maximum over its terms; the empty chain sits at `-inf`.
pub fn chain_degree(gens: &[Generator], chain: &Chain) -> (ChainGrading, FiltValue) {
    let mut grading = ChainGrading::Undefined;
    let mut level = FiltValue::NegInf;
    for &(g, k) in chain.terms() {
        let z = gens[g].deg_z + 8 * k;
        grading = match grading {
            ChainGrading::Undefined => ChainGrading::Homogeneous(z),
            ChainGrading::Homogeneous(w) if w == z => ChainGrading::Homogeneous(w),
            _ => ChainGrading::Inhomogeneous,
        };
        let l = FiltValue::Finite(gens[g].level_at(k));
        if l > level {
            level = l;
        }
    }
    (grading, level)
}

/// An instanton-type complex with a fixed splitting (the designated θ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstantonComplex {
    pub flavor: Flavor,
    pub gens: Vec<Generator>,
    pub diff: LinearMap,
    theta: usize,
}

impl InstantonComplex {
    /// Assemble without semantic checks. Structural problems (duplicate ids,
    /// no or several θ, incoherent entries, wrong differential shift) are
    /// still errors.
    pub fn from_parts(flavor: Flavor, gens: Vec<Generator>, diff: LinearMap) -> Result<Self> {
        let mut seen = HashSet::new();
        for g in &gens {
            if !seen.insert(g.id.as_str()) {
                return Err(Error::Structural(format!("duplicate generator id {:?}", g.id)));
            }
        }
        let thetas: Vec<usize> = gens.iter().enumerate().filter(|(_, g)| g.is_theta).map(|(i, _)| i).collect();
        let theta = match thetas.as_slice() {
            [t] => *t,
            [] => return Err(Error::Structural("no generator is marked theta".into())),
            _ => return Err(Error::Structural("more than one generator is marked theta".into())),
        };
        if diff.shift != -1 {
            return Err(Error::Structural(format!("differential has grading shift {}, expected -1", diff.shift)));
        }
        diff.check_coherence(&gens, &gens)?;
        Ok(InstantonComplex { flavor, gens, diff, theta })
    }

    /// Assemble and require every invariant to hold.
    pub fn new(flavor: Flavor, gens: Vec<Generator>, diff: LinearMap) -> Result<Self> {
        let c = Self::from_parts(flavor, gens, diff)?;
        c.validate().into_result()?;
        Ok(c)
    }

    /// Convenience builder from generator list and differential pairs given
    /// by id.
    pub fn build(flavor: Flavor, gens: Vec<Generator>, diff: &[(&str, &str)]) -> Result<Self> {
        let pairs = resolve_pairs(&gens, &gens, diff)?;
        let d = LinearMap::from_pairs(&gens, &gens, -1, pairs)?;
        Self::new(flavor, gens, d)
    }

    /// The complex spanned by θ alone.
    pub fn trivial(flavor: Flavor) -> Self {
        InstantonComplex {
            flavor,
            gens: vec![Generator::theta(flavor)],
            diff: LinearMap::zero(-1),
            theta: 0,
        }
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.id == id)
    }

    pub fn index(&self, id: &str) -> Result<usize> {
        self.index_of(id)
            .ok_or_else(|| Error::Structural(format!("unknown generator {id:?}")))
    }

    /// Apply the differential to a chain.
    pub fn d(&self, chain: &Chain) -> Chain {
        self.diff.apply(chain)
    }

    /// Distinct filtration levels of lattice points in ℤ-grading `grading`.
    /// Each generator contributes at most one point per grading.
    pub fn points_in_grading(&self, grading: i64) -> Vec<(usize, i64)> {
        self.gens
            .iter()
            .enumerate()
            .filter_map(|(i, g)| {
                let diff = grading - g.deg_z;
                (diff.rem_euclid(8) == 0).then_some((i, diff.div_euclid(8)))
            })
            .collect()
    }

    /// Whether a map entry `g -> h` respects the two-step filtration when both
    /// complexes have flavor `flavor`.
    pub fn two_step_allows(flavor: Flavor, src: &InstantonComplex, tgt: &InstantonComplex, g: usize, h: usize) -> bool {
        match flavor {
            Flavor::D2 => !(h == tgt.theta && g != src.theta),
            Flavor::D1 => !(g == src.theta && h != tgt.theta),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let th = &self.gens[self.theta];
        let expect = self.flavor.theta_grading();
        r.check(
            "theta-conventions",
            th.deg_z == expect && th.deg_i.is_zero(),
            || format!("theta at ({}, {}), expected ({expect}, 0) for {}", th.deg_z, th.deg_i, self.flavor),
        );
        let d2 = self.diff.then(&self.diff);
        r.check("diff-squared-zero", d2.is_zero(), || {
            format!("d∘d has entries {}", d2.describe(&self.gens, &self.gens).join(", "))
        });
        let bad: Vec<String> = self
            .diff
            .entries()
            .filter(|&(g, h, k)| LinearMap::rise(&self.gens, &self.gens, g, h, k) > BigRational::zero())
            .map(|(g, h, k)| format!("{} --y^{k}--> {}", self.gens[g].id, self.gens[h].id))
            .collect();
        r.check("diff-filtered", bad.is_empty(), || format!("differential not filtered: {}", bad.join(", ")));
        let bad: Vec<String> = self
            .diff
            .entries()
            .filter(|&(g, h, _)| !Self::two_step_allows(self.flavor, self, self, g, h))
            .map(|(g, h, k)| format!("{} --y^{k}--> {}", self.gens[g].id, self.gens[h].id))
            .collect();
        let name = match self.flavor {
            Flavor::D2 => "two-step (nothing maps onto theta)",
            Flavor::D1 => "two-step (theta spans a subcomplex)",
        };
        r.check(name, bad.is_empty(), || format!("offending entries: {}", bad.join(", ")));
        r
    }
}

/// Resolve `(id, id)` pairs into index pairs.
pub fn resolve_pairs(src: &[Generator], tgt: &[Generator], pairs: &[(&str, &str)]) -> Result<Vec<(usize, usize)>> {
    let find = |gens: &[Generator], id: &str| {
        gens.iter()
            .position(|g| g.id == id)
            .ok_or_else(|| Error::Structural(format!("unknown generator {id:?}")))
    };
    pairs.iter().map(|(a, b)| Ok((find(src, a)?, find(tgt, b)?))).collect()
}

/// One line of a validation report.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
    /// For involutive complexes: the least level at which a homotopy `H`
    /// with `dH + Hd = τ² + id` exists, `None` if no witness exists at all.
    pub witness_level: Option<String>,
}

impl ValidationReport {
    fn check(&mut self, name: &str, pass: bool, detail: impl FnOnce() -> String) {
        self.checks.push(CheckResult {
            name: name.into(),
            pass,
            detail: (!pass).then(detail),
        });
    }

    pub fn push(&mut self, name: &str, pass: bool, detail: Option<String>) {
        self.checks.push(CheckResult { name: name.into(), pass, detail });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            let msg = self
                .failures()
                .map(|c| format!("{}: {}", c.name, c.detail.clone().unwrap_or_default()))
                .collect::<Vec<_>>()
                .join("; ");
            Err(Error::Invalid(msg))
        }
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
        if other.witness_level.is_some() {
            self.witness_level = other.witness_level;
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "[{}] {}", if c.pass { "pass" } else { "FAIL" }, c.name)?;
            if let Some(d) = &c.detail {
                write!(f, ": {d}")?;
            }
            writeln!(f)?;
        }
        if let Some(w) = &self.witness_level {
            writeln!(f, "homotopy witness level: {w}")?;
        }
        Ok(())
    }
}
