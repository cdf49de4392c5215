//! Morphisms between complexes: checks, local-map search, homotopy
//! equivalences and the pushforward of approximate equivariant cycles.

use num_rational::BigRational;
use num_traits::Zero;

use crate::complex::{chain_degree, Chain, Flavor, InstantonComplex, LinearMap};
use crate::error::{Error, Result};
use crate::filt::{fmt_rational, FiltValue};
use crate::involutive::InvolutiveComplex;
use crate::solver::MapSystem;

/// A morphism `f`, with the homotopy `H` for `d'H + Hd = τ'f + fτ` when it
/// is equivariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismWitness {
    pub f: LinearMap,
    pub equivariance_h: Option<LinearMap>,
}

impl MorphismWitness {
    pub fn identity(c: &InstantonComplex) -> Self {
        MorphismWitness {
            f: LinearMap::identity(&c.gens),
            equivariance_h: Some(LinearMap::zero(1)),
        }
    }

    /// Level of the witness: the larger of the levels of `f` and `H`.
    pub fn level(&self, src: &InstantonComplex, tgt: &InstantonComplex) -> FiltValue {
        let lf = self.f.level(&src.gens, &tgt.gens);
        match &self.equivariance_h {
            Some(h) => FiltValue::max(&lf, &h.level(&src.gens, &tgt.gens)),
            None => lf,
        }
    }

    /// `(g ∘ self)`: apply `self`, then `other`. Equivariance homotopies
    /// compose as `H_g f + g H_f`.
    pub fn then(&self, other: &MorphismWitness) -> MorphismWitness {
        let h = match (&self.equivariance_h, &other.equivariance_h) {
            (Some(h1), Some(h2)) => Some(self.f.then(h2).add(&h1.then(&other.f))),
            _ => None,
        };
        MorphismWitness {
            f: self.f.then(&other.f),
            equivariance_h: h,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismReport {
    pub chain_map: bool,
    pub two_step: bool,
    pub level: FiltValue,
    pub local: bool,
    pub notes: Vec<String>,
}

impl MorphismReport {
    pub fn is_local_map(&self) -> bool {
        self.chain_map && self.two_step && self.local
    }
}

fn same_flavor(a: &InstantonComplex, b: &InstantonComplex) -> Result<Flavor> {
    if a.flavor != b.flavor {
        return Err(Error::Flavor(format!("source is {}, target is {}", a.flavor, b.flavor)));
    }
    Ok(a.flavor)
}

fn two_step_offenders(f: &LinearMap, src: &InstantonComplex, tgt: &InstantonComplex) -> Vec<String> {
    f.entries()
        .filter(|&(g, h, _)| !InstantonComplex::two_step_allows(src.flavor, src, tgt, g, h))
        .map(|(g, h, k)| format!("{} --y^{k}--> {}", src.gens[g].id, tgt.gens[h].id))
        .collect()
}

pub fn check_morphism(f: &LinearMap, source: &InstantonComplex, target: &InstantonComplex) -> Result<MorphismReport> {
    same_flavor(source, target)?;
    if f.shift != 0 {
        return Err(Error::Structural(format!("morphism has grading shift {}", f.shift)));
    }
    f.check_coherence(&source.gens, &target.gens)?;
    let mut notes = Vec::new();
    let comm = f.then(&target.diff).add(&source.diff.then(f));
    if !comm.is_zero() {
        notes.push(format!("d'f + fd has entries {}", comm.describe(&source.gens, &target.gens).join(", ")));
    }
    let bad = two_step_offenders(f, source, target);
    if !bad.is_empty() {
        notes.push(format!("two-step violations: {}", bad.join(", ")));
    }
    let local = f.get(source.theta(), target.theta()) == Some(0);
    if !local {
        notes.push("theta -> theta' coefficient is 0".into());
    }
    Ok(MorphismReport {
        chain_map: comm.is_zero(),
        two_step: bad.is_empty(),
        level: FiltValue::max(&f.level(&source.gens, &target.gens), &FiltValue::zero()),
        local,
        notes,
    })
}

/// Check that `H` is an equivariance homotopy for `f`.
pub fn check_equivariance(
    f: &LinearMap,
    h: &LinearMap,
    source: &InvolutiveComplex,
    target: &InvolutiveComplex,
) -> Result<Vec<String>> {
    let (s, t) = (&source.complex, &target.complex);
    same_flavor(s, t)?;
    if h.shift != 1 {
        return Err(Error::Structural(format!("equivariance homotopy has grading shift {}", h.shift)));
    }
    h.check_coherence(&s.gens, &t.gens)?;
    let lhs = h.then(&t.diff).add(&s.diff.then(h));
    let rhs = f.then(&target.tau).add(&source.tau.then(f));
    let diff = lhs.add(&rhs);
    let mut notes = Vec::new();
    if !diff.is_zero() {
        notes.push(format!("d'H + Hd + τ'f + fτ has entries {}", diff.describe(&s.gens, &t.gens).join(", ")));
    }
    let bad = two_step_offenders(h, s, t);
    if !bad.is_empty() {
        notes.push(format!("homotopy two-step violations: {}", bad.join(", ")));
    }
    Ok(notes)
}

/// Search for a local map `source -> target` of level at most `max_level`,
/// equivariant if requested. The lexicographically least solution in the
/// deterministic variable order is returned.
pub fn find_local_map(
    source: &InvolutiveComplex,
    target: &InvolutiveComplex,
    max_level: &FiltValue,
    equivariant: bool,
) -> Result<Option<MorphismWitness>> {
    let (s, t) = (&source.complex, &target.complex);
    if s.flavor != Flavor::D2 || t.flavor != Flavor::D2 {
        return Err(Error::Flavor("local map search needs D2 complexes".into()));
    }
    if max_level < &BigRational::zero() {
        return Err(Error::Argument(format!("negative level {max_level}")));
    }
    let (th, th2) = (s.theta(), t.theta());
    let bound = |rise: &BigRational| max_level >= rise;
    let f0 = LinearMap::from_pairs(&s.gens, &t.gens, 0, [(th, th2)])?;
    let mut sys = MapSystem::new();
    let x = sys.unknown(&s.gens, &t.gens, 0, |g, h, rise| {
        (g, h) != (th, th2) && InstantonComplex::two_step_allows(Flavor::D2, s, t, g, h) && bound(rise)
    });
    sys.left(0, &t.diff, &x);
    sys.right(0, &x, &s.diff);
    sys.constant(0, &f0.then(&t.diff));
    sys.constant(0, &s.diff.then(&f0));
    let h = equivariant.then(|| {
        let h = sys.unknown(&s.gens, &t.gens, 1, |g, hh, rise| {
            InstantonComplex::two_step_allows(Flavor::D2, s, t, g, hh) && bound(rise)
        });
        sys.left(1, &t.diff, &h);
        sys.right(1, &h, &s.diff);
        sys.left(1, &target.tau, &x);
        sys.right(1, &x, &source.tau);
        sys.constant(1, &f0.then(&target.tau));
        sys.constant(1, &source.tau.then(&f0));
        h
    });
    let Some(sol) = sys.solve() else {
        return Ok(None);
    };
    Ok(Some(MorphismWitness {
        f: f0.add(&MapSystem::extract(&x, &sol)),
        equivariance_h: h.map(|h| MapSystem::extract(&h, &sol)),
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyReport {
    pub ok: bool,
    pub notes: Vec<String>,
}

/// Verify that `f: C -> C'` and `g: C' -> C` are mutually inverse up to
/// the homotopies `H` on `C` and `H'` on `C'`, all two-step filtered and of
/// level at most `level`.
pub fn check_homotopy_equivalence(
    f: &LinearMap,
    g: &LinearMap,
    h: &LinearMap,
    h2: &LinearMap,
    source: &InstantonComplex,
    target: &InstantonComplex,
    level: &BigRational,
) -> Result<HomotopyReport> {
    same_flavor(source, target)?;
    let mut notes = Vec::new();
    let lvl = FiltValue::Finite(level.clone());
    let maps: [(&str, &LinearMap, &InstantonComplex, &InstantonComplex, i64); 4] = [
        ("f", f, source, target, 0),
        ("g", g, target, source, 0),
        ("H", h, source, source, 1),
        ("H'", h2, target, target, 1),
    ];
    for (name, m, a, b, shift) in maps {
        if m.shift != shift {
            notes.push(format!("{name} has grading shift {}, expected {shift}", m.shift));
            continue;
        }
        m.check_coherence(&a.gens, &b.gens)?;
        let bad = two_step_offenders(m, a, b);
        if !bad.is_empty() {
            notes.push(format!("{name} violates the two-step filtration: {}", bad.join(", ")));
        }
        let l = m.level(&a.gens, &b.gens);
        if l > lvl {
            notes.push(format!("{name} has level {l} > {}", fmt_rational(level)));
        }
    }
    if notes.is_empty() {
        for (name, c, there, back, hh) in [("gf", source, f, g, h), ("fg", target, g, f, h2)] {
            let lhs = there.then(back).add(&LinearMap::identity(&c.gens));
            let rhs = hh.then(&c.diff).add(&c.diff.then(hh));
            let diff = lhs.add(&rhs);
            if !diff.is_zero() {
                notes.push(format!("{name} + id differs from dH + Hd at {}", diff.describe(&c.gens, &c.gens).join(", ")));
            }
        }
    }
    Ok(HomotopyReport {
        ok: notes.is_empty(),
        notes,
    })
}

/// Result of pushing an approximate equivariant cycle through a morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushResult {
    pub z: Chain,
    pub xi: Chain,
    pub identity_check: bool,
    pub delta: FiltValue,
    /// `deg_i(ξ') ≤ max(deg_i(ξ), deg_i(dz)) + δ`
    pub xi_bound: bool,
    /// `deg_i(dz') ≤ deg_i(dz) + δ`
    pub dz_bound: bool,
}

fn level(gens: &[crate::complex::Generator], c: &Chain) -> FiltValue {
    chain_degree(gens, c).1
}

fn plus(a: &FiltValue, d: &FiltValue) -> FiltValue {
    if *a == FiltValue::NegInf {
        FiltValue::NegInf
    } else {
        a + d
    }
}

/// Given `dh = z + τz + ξ` in the source and an equivariant morphism
/// `(λ, H)`, return `z' = λz` and `ξ' = λξ + H dz`, and verify
/// `z' + τ'z' = d'(Hz + λh) + ξ'` in the target.
pub fn push_obstruction(
    z: &Chain,
    h: &Chain,
    xi: &Chain,
    source: &InvolutiveComplex,
    target: &InvolutiveComplex,
    witness: &MorphismWitness,
) -> Result<PushResult> {
    let (s, t) = (&source.complex, &target.complex);
    let lambda = &witness.f;
    let hh = witness
        .equivariance_h
        .as_ref()
        .ok_or_else(|| Error::Argument("witness has no equivariance homotopy".into()))?;
    let lhs = s.d(h);
    let rhs = z.add(&source.tau.apply(z)).add(xi);
    if lhs != rhs {
        return Err(Error::NotApproximateCycle(format!(
            "dh + z + τz + ξ = {}",
            lhs.add(&rhs).describe(&s.gens)
        )));
    }
    let dz = s.d(z);
    let z2 = lambda.apply(z);
    let xi2 = lambda.apply(xi).add(&hh.apply(&dz));
    let left = z2.add(&target.tau.apply(&z2));
    let right = t.d(&hh.apply(z).add(&lambda.apply(h))).add(&xi2);
    let delta = FiltValue::max(&witness.level(s, t), &FiltValue::zero());
    let xi_bound = level(&t.gens, &xi2) <= plus(&FiltValue::max(&level(&s.gens, xi), &level(&s.gens, &dz)), &delta);
    let dz_bound = level(&t.gens, &t.d(&z2)) <= plus(&level(&s.gens, &dz), &delta);
    Ok(PushResult {
        z: z2,
        xi: xi2,
        identity_check: left == right,
        delta,
        xi_bound,
        dz_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Generator;
    use crate::filt::q;

    fn th() -> Generator {
        Generator::theta(Flavor::D2)
    }

    fn fig31b() -> InstantonComplex {
        InstantonComplex::build(Flavor::D2, vec![th(), Generator::new("x", -4, q(-1, 2))], &[("theta", "x")]).unwrap()
    }

    fn fig41a() -> InvolutiveComplex {
        let c = InstantonComplex::build(Flavor::D2, vec![th(), Generator::new("a", -3, q(-3, 4))], &[]).unwrap();
        InvolutiveComplex::build(c, &[("theta", "a")]).unwrap()
    }

    #[test]
    fn identity_is_local() {
        let c = fig31b();
        let r = check_morphism(&LinearMap::identity(&c.gens), &c, &c).unwrap();
        assert!(r.is_local_map());
        assert_eq!(r.level, FiltValue::zero());
    }

    #[test]
    fn projection_and_inclusion() {
        let c = fig31b();
        let t = InstantonComplex::trivial(Flavor::D2);
        let pi = LinearMap::from_pairs(&c.gens, &t.gens, 0, [(0, 0)]).unwrap();
        assert!(check_morphism(&pi, &c, &t).unwrap().is_local_map());
        let inc = LinearMap::from_pairs(&t.gens, &c.gens, 0, [(0, 0)]).unwrap();
        assert!(!check_morphism(&inc, &t, &c).unwrap().chain_map);
    }

    #[test]
    fn search_trivial_into_fig31b() {
        let c = InvolutiveComplex::identity(fig31b());
        let t = InvolutiveComplex::trivial();
        for lvl in [FiltValue::zero(), FiltValue::ratio(1, 2), FiltValue::int(3)] {
            assert!(find_local_map(&t, &c, &lvl, false).unwrap().is_none());
        }
        let back = find_local_map(&c, &t, &FiltValue::zero(), true).unwrap().unwrap();
        assert_eq!(back.f.len(), 1);
    }

    #[test]
    fn equivariant_identity_found() {
        let a = fig41a();
        let w = find_local_map(&a, &a, &FiltValue::zero(), true).unwrap().unwrap();
        assert!(check_morphism(&w.f, &a.complex, &a.complex).unwrap().is_local_map());
        assert!(check_equivariance(&w.f, w.equivariance_h.as_ref().unwrap(), &a, &a).unwrap().is_empty());
        // trivial -> fig41a is not equivariant: r0 is finite
        let t = InvolutiveComplex::trivial();
        assert!(find_local_map(&t, &a, &FiltValue::zero(), true).unwrap().is_none());
        assert!(find_local_map(&t, &a, &FiltValue::zero(), false).unwrap().is_some());
    }

    #[test]
    fn homotopy_equivalence_identity() {
        let c = fig31b();
        let id = LinearMap::identity(&c.gens);
        let z = LinearMap::zero(1);
        assert!(check_homotopy_equivalence(&id, &id, &z, &z, &c, &c, &q(0, 1)).unwrap().ok);
        // H: x -> theta is never allowed
        let bad = LinearMap::from_triples(&c.gens, &c.gens, 1, [(1, 0, 0)]);
        assert!(bad.is_ok());
        let rep = check_homotopy_equivalence(&id, &id, &bad.unwrap(), &z, &c, &c, &q(0, 1)).unwrap();
        assert!(!rep.ok);
        assert!(rep.notes[0].contains("two-step"));
    }

    #[test]
    fn push_through_identity() {
        let a = fig41a();
        let w = MorphismWitness::identity(&a.complex);
        let z = Chain::generator(0);
        let xi = Chain::generator(1);
        let p = push_obstruction(&z, &Chain::zero(), &xi, &a, &a, &w).unwrap();
        assert!(p.identity_check && p.xi_bound && p.dz_bound);
        assert_eq!(p.xi, xi);
        let bad = push_obstruction(&z, &Chain::zero(), &Chain::zero(), &a, &a, &w);
        assert!(matches!(bad, Err(Error::NotApproximateCycle(_))));
    }
}
