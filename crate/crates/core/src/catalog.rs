//! Builders for the explicit example complexes, and a seeded random
//! generator of valid (involutive) complexes.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::dualize;
use crate::complex::{pinned_power, resolve_pairs, Chain, Flavor, Generator, InstantonComplex, LinearMap};
use crate::error::{Error, Result};
use crate::filt::{fmt_rational, parse_rational, q};
use crate::involutive::InvolutiveComplex;

fn th() -> Generator {
    Generator::theta(Flavor::D2)
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Argument(msg()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fig31 {
    A,
    B,
    C,
    D,
}

/// The four complexes of the `r_s` graph example: (a) θ alone; (b) `dθ = x`
/// with `x` at level β; (c) adds `w` with `dw = x` at `extra ∈ (β, 0]`;
/// (d) as (c) with `w` at level `α > 0`.
pub fn build_fig31(variant: Fig31, beta: &BigRational, alpha: &BigRational, extra: &BigRational) -> Result<InstantonComplex> {
    require(beta.is_negative(), || format!("beta = {} must be negative", fmt_rational(beta)))?;
    let x = || Generator::new("x", -4, beta.clone());
    match variant {
        Fig31::A => Ok(InstantonComplex::trivial(Flavor::D2)),
        Fig31::B => InstantonComplex::build(Flavor::D2, vec![th(), x()], &[("theta", "x")]),
        Fig31::C => {
            require(extra > beta && !extra.is_positive(), || {
                format!("extra level {} must lie in (beta, 0]", fmt_rational(extra))
            })?;
            InstantonComplex::build(
                Flavor::D2,
                vec![th(), x(), Generator::new("w", -3, extra.clone())],
                &[("theta", "x"), ("w", "x")],
            )
        }
        Fig31::D => {
            require(alpha.is_positive(), || format!("alpha = {} must be positive", fmt_rational(alpha)))?;
            InstantonComplex::build(
                Flavor::D2,
                vec![th(), x(), Generator::new("w", -3, alpha.clone())],
                &[("theta", "x"), ("w", "x")],
            )
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fig41 {
    A,
    B,
    C,
}

/// The three involutive examples: (a) `τθ = θ + a`; (b) `u`, `v` with
/// `du = dv = x = dθ`, swapped by τ; (c) `dw = x`, `τθ = θ + x`.
pub fn build_fig41(variant: Fig41, beta: &BigRational, alpha: &BigRational, mid: &BigRational) -> Result<InvolutiveComplex> {
    require(beta.is_negative(), || format!("beta = {} must be negative", fmt_rational(beta)))?;
    match variant {
        Fig41::A => {
            let c = InstantonComplex::build(Flavor::D2, vec![th(), Generator::new("a", -3, beta.clone())], &[])?;
            InvolutiveComplex::build(c, &[("theta", "a")])
        }
        Fig41::B => {
            require(mid > beta && !mid.is_positive(), || {
                format!("mid level {} must lie in (beta, 0]", fmt_rational(mid))
            })?;
            let c = InstantonComplex::build(
                Flavor::D2,
                vec![
                    th(),
                    Generator::new("u", -3, mid.clone()),
                    Generator::new("v", -3, mid.clone()),
                    Generator::new("x", -4, beta.clone()),
                ],
                &[("theta", "x"), ("u", "x"), ("v", "x")],
            )?;
            InvolutiveComplex::build(c, &[("u", "u"), ("u", "v"), ("v", "v"), ("v", "u")])
        }
        Fig41::C => {
            require(alpha.is_positive(), || format!("alpha = {} must be positive", fmt_rational(alpha)))?;
            let c = InstantonComplex::build(
                Flavor::D2,
                vec![th(), Generator::new("x", -3, beta.clone()), Generator::new("w", -2, alpha.clone())],
                &[("w", "x")],
            )?;
            InvolutiveComplex::build(c, &[("theta", "x")])
        }
    }
}

/// Which correction τθ carries in the Akbulut complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Akbulut {
    /// `τθ = θ + α_i` for `i ∈ {2, 3, 4}`.
    Alpha(usize),
    /// `τθ = θ + β₁`.
    Beta,
}

/// Filtration levels of the six irreducible generators. Nothing pins
/// them down; `beta` is shared by β₁ and β₂ since τ swaps them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AkbulutLevels {
    pub beta: BigRational,
    pub alpha: [BigRational; 4],
}

impl Default for AkbulutLevels {
    fn default() -> Self {
        AkbulutLevels {
            beta: q(-1, 2),
            alpha: [q(-1, 4), q(-2, 3), q(-1, 3), q(-1, 5)],
        }
    }
}

fn nonpositive(levels: &[(&str, &BigRational)]) -> Result<()> {
    for (name, l) in levels {
        require(!l.is_positive(), || format!("level of {name} is {}, must be <= 0", fmt_rational(l)))?;
    }
    Ok(())
}

/// `C(Y)` for the Akbulut cork: θ, β₁, β₂, α₂, α₃, α₄ in grading −3, α₁ in
/// −2, `dα₁ = β₁ + β₂`, τ swapping the β's.
pub fn build_akbulut(variant: Akbulut, levels: &AkbulutLevels) -> Result<InvolutiveComplex> {
    let a = &levels.alpha;
    nonpositive(&[("beta", &levels.beta), ("alpha1", &a[0]), ("alpha2", &a[1]), ("alpha3", &a[2]), ("alpha4", &a[3])])?;
    require(levels.beta <= a[0], || "d alpha1 = beta1 + beta2 needs level(beta) <= level(alpha1)".into())?;
    let gens = vec![
        th(),
        Generator::new("beta1", -3, levels.beta.clone()),
        Generator::new("beta2", -3, levels.beta.clone()),
        Generator::new("alpha1", -2, a[0].clone()),
        Generator::new("alpha2", -3, a[1].clone()),
        Generator::new("alpha3", -3, a[2].clone()),
        Generator::new("alpha4", -3, a[3].clone()),
    ];
    let c = InstantonComplex::build(Flavor::D2, gens, &[("alpha1", "beta1"), ("alpha1", "beta2")])?;
    let swap = [("beta1", "beta1"), ("beta1", "beta2"), ("beta2", "beta2"), ("beta2", "beta1")];
    match variant {
        Akbulut::Alpha(i) => {
            require((2..=4).contains(&i), || format!("alpha index {i} must be 2, 3 or 4"))?;
            let name = format!("alpha{i}");
            let mut extra: Vec<(&str, &str)> = swap.to_vec();
            extra.push(("theta", name.as_str()));
            InvolutiveComplex::build(c, &extra)
        }
        Akbulut::Beta => {
            let mut extra: Vec<(&str, &str)> = swap.to_vec();
            extra.push(("theta", "beta1"));
            InvolutiveComplex::build(c, &extra)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AkbulutReversed {
    /// `τθ = θ`.
    Fixed,
    /// `τθ = θ + α₁^∨`.
    Corrected,
}

/// Levels for `C(-Y)`: `alpha1` for α₁^∨ in grading −3, `beta` for both
/// β^∨ and `alpha[0..3]` for α₂^∨..α₄^∨, all in grading −2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AkbulutReversedLevels {
    pub alpha1: BigRational,
    pub beta: BigRational,
    pub alpha: [BigRational; 3],
}

impl Default for AkbulutReversedLevels {
    fn default() -> Self {
        AkbulutReversedLevels {
            alpha1: q(-1, 2),
            beta: q(-1, 4),
            alpha: [q(-1, 3), q(-1, 5), q(-1, 7)],
        }
    }
}

/// `C(-Y)`: `dβ₁^∨ = dβ₂^∨ = α₁^∨`, τ swapping the β^∨.
pub fn build_akbulut_reversed(variant: AkbulutReversed, levels: &AkbulutReversedLevels) -> Result<InvolutiveComplex> {
    let a = &levels.alpha;
    nonpositive(&[
        ("alpha1", &levels.alpha1),
        ("beta", &levels.beta),
        ("alpha2", &a[0]),
        ("alpha3", &a[1]),
        ("alpha4", &a[2]),
    ])?;
    require(levels.alpha1 <= levels.beta, || "d beta* = alpha1* needs level(alpha1) <= level(beta)".into())?;
    let gens = vec![
        th(),
        Generator::new("alpha1*", -3, levels.alpha1.clone()),
        Generator::new("beta1*", -2, levels.beta.clone()),
        Generator::new("beta2*", -2, levels.beta.clone()),
        Generator::new("alpha2*", -2, a[0].clone()),
        Generator::new("alpha3*", -2, a[1].clone()),
        Generator::new("alpha4*", -2, a[2].clone()),
    ];
    let c = InstantonComplex::build(Flavor::D2, gens, &[("beta1*", "alpha1*"), ("beta2*", "alpha1*")])?;
    let mut extra = vec![("beta1*", "beta1*"), ("beta1*", "beta2*"), ("beta2*", "beta2*"), ("beta2*", "beta1*")];
    if variant == AkbulutReversed::Corrected {
        extra.push(("theta", "alpha1*"));
    }
    InvolutiveComplex::build(c, &extra)
}

/// No differential and τ = id; generators alternate between gradings −2
/// and −4.
pub fn build_brieskorn_like(levels: &[BigRational]) -> Result<InvolutiveComplex> {
    let mut gens = vec![th()];
    for (i, l) in levels.iter().enumerate() {
        gens.push(Generator::new(format!("g{}", i + 1), if i % 2 == 0 { -2 } else { -4 }, l.clone()));
    }
    let c = InstantonComplex::new(Flavor::D2, gens, LinearMap::zero(-1))?;
    Ok(InvolutiveComplex::identity(c))
}

/// `θ` in grading −3 whose class is not fixed by `τ_*` in the full
/// complex, if every θ-supported cycle has that property.
pub fn unfixed_theta_class(c: &InvolutiveComplex) -> Result<Option<Chain>> {
    use crate::filt::FiltValue;
    use crate::rs::find_theta_cycle;
    let (lo, hi) = (FiltValue::NegInf, FiltValue::PosInf);
    let plain = find_theta_cycle(&c.complex, None, &lo, &hi, false)?;
    let eq = find_theta_cycle(&c.complex, Some(&c.tau), &lo, &hi, true)?;
    Ok(match (plain, eq) {
        (Some(cert), None) => Some(cert.z),
        _ => None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub max_gens: usize,
    pub flavor: Flavor,
    pub involutive: bool,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            max_gens: 6,
            flavor: Flavor::D2,
            involutive: true,
        }
    }
}

/// A random valid complex, deterministic in `seed`. Involutive complexes
/// carry `τ = σ + T + (dK + Kd)` where σ swaps duplicated blocks, `T` sends
/// θ to a cycle and `K` is a random filtered map; candidates without a
/// level-0 homotopy are discarded. Non-involutive ones get `τ = id`.
pub fn random_complex(seed: u64, spec: &RandomSpec) -> Result<InvolutiveComplex> {
    require(spec.max_gens >= 1, || "max_gens must be at least 1".into())?;
    let d2 = random_d2(seed, spec.max_gens, spec.involutive)?;
    match spec.flavor {
        Flavor::D2 => Ok(d2),
        Flavor::D1 => dualize(&d2),
    }
}

fn random_d2(seed: u64, max_gens: usize, involutive: bool) -> Result<InvolutiveComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_gens);
    let den: i64 = if rng.gen_bool(0.5) { 3 } else { 4 };
    let others = n - 1;
    let pairs = if involutive && others >= 2 { rng.gen_range(0..=others / 2) } else { 0 };
    let singles = others - 2 * pairs;
    let mut gens = vec![th()];
    let mut sigma: Vec<usize> = vec![0];
    let level = |rng: &mut ChaCha8Rng| q(rng.gen_range(-2 * den..=den / 2), den);
    // mostly the three gradings that carry θ-supported cycles
    let grading = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.8) { rng.gen_range(-4..=-2) } else { rng.gen_range(-5..=-1) };
    for i in 0..singles {
        let z = grading(&mut rng);
        gens.push(Generator::new(format!("g{}", i + 1), z, level(&mut rng)));
        sigma.push(gens.len() - 1);
    }
    for i in 0..pairs {
        let z = grading(&mut rng);
        let l = level(&mut rng);
        let a = gens.len();
        gens.push(Generator::new(format!("p{}", i + 1), z, l.clone()));
        gens.push(Generator::new(format!("p{}'", i + 1), z, l));
        sigma.push(a + 1);
        sigma.push(a);
    }

    // differential, one σ-orbit of edges at a time
    let mut cands = Vec::new();
    for g in 0..n {
        for h in 1..n {
            if g == h {
                continue;
            }
            if let Some(k) = pinned_power(&gens[g], &gens[h], -1) {
                if LinearMap::rise(&gens, &gens, g, h, k) <= BigRational::zero() {
                    cands.push((g, h));
                }
            }
        }
    }
    let mut d = LinearMap::zero(-1);
    cands.shuffle(&mut rng);
    for &(g, h) in &cands {
        if !rng.gen_bool(0.6) {
            continue;
        }
        let mut orbit = vec![(g, h)];
        if (sigma[g], sigma[h]) != (g, h) {
            orbit.push((sigma[g], sigma[h]));
        }
        let mut next = d.clone();
        for &(a, b) in &orbit {
            next.toggle(&gens, &gens, a, b)?;
        }
        if next.then(&next).is_zero() {
            d = next;
        }
    }
    let c = InstantonComplex::new(Flavor::D2, gens, d)?;
    if !involutive {
        return Ok(InvolutiveComplex::identity(c));
    }

    let sig = LinearMap::from_pairs(&c.gens, &c.gens, 0, sigma.iter().enumerate().map(|(g, &h)| (g, h)))?;
    for attempt in 0..6 {
        let tau = if attempt == 5 {
            sig.clone()
        } else {
            let t = random_twist(&mut rng, &c)?;
            let k = random_homotopy(&mut rng, &c)?;
            sig.add(&t).add(&k.then(&c.diff)).add(&c.diff.then(&k))
        };
        let ic = InvolutiveComplex::from_parts(c.clone(), tau, BigRational::zero(), None)?;
        if let Some(h) = ic.solve_homotopy(Some(&BigRational::zero())) {
            let out = InvolutiveComplex { h_witness: Some(h), ..ic };
            if out.validate().passed() {
                return Ok(out);
            }
        }
    }
    Err(Error::Invalid(format!("seed {seed}: no valid involution found")))
}

/// `θ ↦ u` for a random cycle `u` of level ≤ 0 in grading −3, or zero.
fn random_twist(rng: &mut ChaCha8Rng, c: &InstantonComplex) -> Result<LinearMap> {
    let pts: Vec<(usize, i64)> = c
        .points_in_grading(-3)
        .into_iter()
        .filter(|&(g, k)| g != c.theta() && !c.gens[g].level_at(k).is_positive())
        .collect();
    for _ in 0..4 {
        let u = Chain::from_terms(pts.iter().copied().filter(|_| rng.gen_bool(0.5)));
        if !u.is_zero() && c.d(&u).is_zero() {
            let mut t = LinearMap::zero(0);
            for &(g, _) in u.terms() {
                t.toggle(&c.gens, &c.gens, c.theta(), g)?;
            }
            return Ok(t);
        }
    }
    Ok(LinearMap::zero(0))
}

/// A random filtered degree-(+1) map that never hits θ.
fn random_homotopy(rng: &mut ChaCha8Rng, c: &InstantonComplex) -> Result<LinearMap> {
    let mut k = LinearMap::zero(1);
    for g in 0..c.len() {
        for h in 0..c.len() {
            if h == c.theta() {
                continue;
            }
            if let Some(p) = pinned_power(&c.gens[g], &c.gens[h], 1) {
                if LinearMap::rise(&c.gens, &c.gens, g, h, p) <= BigRational::zero() && rng.gen_bool(0.3) {
                    k.toggle(&c.gens, &c.gens, g, h)?;
                }
            }
        }
    }
    Ok(k)
}

/// A named catalog entry with its parameters and defaults.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub params: &'static [(&'static str, &'static str)],
}

const FIG31_PARAMS: &[(&str, &str)] = &[("beta", "-1/2"), ("alpha", "1/3"), ("extra", "-1/4")];
const FIG41_PARAMS: &[(&str, &str)] = &[("beta", "-3/4"), ("alpha", "1/2"), ("mid", "-1/4")];
const AKBULUT_PARAMS: &[(&str, &str)] = &[
    ("beta", "-1/2"),
    ("alpha1", "-1/4"),
    ("alpha2", "-2/3"),
    ("alpha3", "-1/3"),
    ("alpha4", "-1/5"),
    ("twist", "2"),
];
const REVERSED_PARAMS: &[(&str, &str)] = &[
    ("alpha1", "-1/2"),
    ("beta", "-1/4"),
    ("alpha2", "-1/3"),
    ("alpha3", "-1/5"),
    ("alpha4", "-1/7"),
];

pub fn list() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry { name: "trivial", description: "theta alone", params: &[] },
        CatalogEntry { name: "fig31a", description: "theta alone, r_s = inf", params: FIG31_PARAMS },
        CatalogEntry { name: "fig31b", description: "d theta = x, r_s = -beta", params: FIG31_PARAMS },
        CatalogEntry { name: "fig31c", description: "d theta = d w = x, r_s = inf", params: FIG31_PARAMS },
        CatalogEntry { name: "fig31d", description: "as fig31c with w above 0", params: FIG31_PARAMS },
        CatalogEntry { name: "fig41a", description: "tau theta = theta + a", params: FIG41_PARAMS },
        CatalogEntry { name: "fig41b", description: "tau swaps u and v over d theta = x", params: FIG41_PARAMS },
        CatalogEntry { name: "fig41c", description: "tau theta = theta + x, d w = x", params: FIG41_PARAMS },
        CatalogEntry { name: "akbulut-alpha", description: "Akbulut cork, tau theta = theta + alpha_i", params: AKBULUT_PARAMS },
        CatalogEntry { name: "akbulut-beta", description: "Akbulut cork, tau theta = theta + beta1", params: AKBULUT_PARAMS },
        CatalogEntry { name: "akbulut-reversed-fixed", description: "reversed Akbulut cork, tau theta = theta", params: REVERSED_PARAMS },
        CatalogEntry {
            name: "akbulut-reversed-corrected",
            description: "reversed Akbulut cork, tau theta = theta + alpha1*",
            params: REVERSED_PARAMS,
        },
        CatalogEntry { name: "brieskorn", description: "no differential, tau = id", params: &[("levels", "-1/2,-1/3")] },
        CatalogEntry {
            name: "random",
            description: "seeded random complex",
            params: &[("seed", "1"), ("max_gens", "6"), ("flavor", "D2"), ("involutive", "true")],
        },
    ]
}

struct Params<'a> {
    given: &'a BTreeMap<String, String>,
    defaults: &'static [(&'static str, &'static str)],
}

impl Params<'_> {
    fn raw(&self, key: &str) -> &str {
        self.given
            .get(key)
            .map(String::as_str)
            .or_else(|| self.defaults.iter().find(|(k, _)| *k == key).map(|(_, v)| *v))
            .expect("parameter without default")
    }

    fn rational(&self, key: &str) -> Result<BigRational> {
        parse_rational(self.raw(key)).map_err(|e| Error::Argument(format!("parameter {key}: {e}")))
    }

    fn int<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        self.raw(key)
            .parse()
            .map_err(|_| Error::Argument(format!("parameter {key}: not an integer: {:?}", self.raw(key))))
    }
}

/// Build a catalog entry by name with `key=value` overrides.
pub fn emit(name: &str, given: &BTreeMap<String, String>) -> Result<InvolutiveComplex> {
    let entry = list()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::Argument(format!("unknown catalog entry {name:?}")))?;
    for key in given.keys() {
        if !entry.params.iter().any(|(k, _)| k == key) {
            return Err(Error::Argument(format!("{name} has no parameter {key:?}")));
        }
    }
    let p = Params {
        given,
        defaults: entry.params,
    };
    let fig31 = |v| -> Result<InvolutiveComplex> {
        Ok(InvolutiveComplex::identity(build_fig31(v, &p.rational("beta")?, &p.rational("alpha")?, &p.rational("extra")?)?))
    };
    let fig41 = |v| build_fig41(v, &p.rational("beta")?, &p.rational("alpha")?, &p.rational("mid")?);
    let akbulut_levels = || -> Result<AkbulutLevels> {
        Ok(AkbulutLevels {
            beta: p.rational("beta")?,
            alpha: [p.rational("alpha1")?, p.rational("alpha2")?, p.rational("alpha3")?, p.rational("alpha4")?],
        })
    };
    let reversed_levels = || -> Result<AkbulutReversedLevels> {
        Ok(AkbulutReversedLevels {
            alpha1: p.rational("alpha1")?,
            beta: p.rational("beta")?,
            alpha: [p.rational("alpha2")?, p.rational("alpha3")?, p.rational("alpha4")?],
        })
    };
    match name {
        "trivial" => Ok(InvolutiveComplex::trivial()),
        "fig31a" => fig31(Fig31::A),
        "fig31b" => fig31(Fig31::B),
        "fig31c" => fig31(Fig31::C),
        "fig31d" => fig31(Fig31::D),
        "fig41a" => fig41(Fig41::A),
        "fig41b" => fig41(Fig41::B),
        "fig41c" => fig41(Fig41::C),
        "akbulut-alpha" => build_akbulut(Akbulut::Alpha(p.int("twist")?), &akbulut_levels()?),
        "akbulut-beta" => build_akbulut(Akbulut::Beta, &akbulut_levels()?),
        "akbulut-reversed-fixed" => build_akbulut_reversed(AkbulutReversed::Fixed, &reversed_levels()?),
        "akbulut-reversed-corrected" => build_akbulut_reversed(AkbulutReversed::Corrected, &reversed_levels()?),
        "brieskorn" => {
            let raw = p.raw("levels");
            let levels = raw
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| parse_rational(s.trim()))
                .collect::<Result<Vec<_>>>()?;
            build_brieskorn_like(&levels)
        }
        "random" => {
            let flavor = match p.raw("flavor") {
                "D2" => Flavor::D2,
                "D1" => Flavor::D1,
                other => return Err(Error::Argument(format!("flavor {other:?}"))),
            };
            let involutive = match p.raw("involutive") {
                "true" => true,
                "false" => false,
                other => return Err(Error::Argument(format!("involutive {other:?}"))),
            };
            random_complex(p.int("seed")?, &RandomSpec { max_gens: p.int("max_gens")?, flavor, involutive })
        }
        _ => unreachable!(),
    }
}

/// Resolve `(id, id)` pairs of one complex and build a shift-0 map.
pub fn map_by_ids(c: &InstantonComplex, pairs: &[(&str, &str)]) -> Result<LinearMap> {
    let p = resolve_pairs(&c.gens, &c.gens, pairs)?;
    LinearMap::from_pairs(&c.gens, &c.gens, 0, p)
}
