//! Finite enriched sequences: level-δᵢ involutive complexes joined by maps
//! ψ, with levels clustering around `𝔎 + ℤ`. Stable windows are certified
//! on the last two terms; `r_s` is read off the certified window.
//!
//! Indices in messages and reports are 1-based.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::complex::{Flavor, InstantonComplex, LinearMap, ValidationReport};
use crate::error::{Error, Result};
use crate::filt::{fmt_rational, FiltValue};
use crate::gf2::{LinearSystem, Matrix};
use crate::involutive::InvolutiveComplex;
use crate::morphism::{check_equivariance, check_morphism};
use crate::rs::{solve_in_window, BAND};
use crate::solver::MapSystem;
use crate::window::{truncate_involutive, WindowComplex};

/// The discrete set `𝔎 + ℤ`, stored as representatives in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterSet {
    reps: Vec<BigRational>,
}

fn frac(x: &BigRational) -> (BigRational, BigRational) {
    let base = x.floor();
    (x - &base, base)
}

impl ClusterSet {
    pub fn new(values: &[BigRational]) -> Self {
        let mut reps: Vec<BigRational> = values.iter().map(|v| frac(v).0).collect();
        reps.push(BigRational::zero());
        reps.sort();
        reps.dedup();
        ClusterSet { reps }
    }

    pub fn reps(&self) -> &[BigRational] {
        &self.reps
    }

    pub fn distance(&self, x: &BigRational) -> BigRational {
        let (f, _) = frac(x);
        self.reps
            .iter()
            .map(|p| {
                let d = (&f - p).abs();
                let wrap = BigRational::one() - &d;
                d.min(wrap)
            })
            .min()
            .expect("cluster set contains 0")
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.distance(x).is_zero()
    }

    /// Least element strictly above `x`.
    pub fn above(&self, x: &BigRational) -> BigRational {
        let (f, base) = frac(x);
        match self.reps.iter().find(|p| **p > f) {
            Some(p) => base + p,
            None => base + BigRational::one() + &self.reps[0],
        }
    }

    /// Greatest element strictly below `x`.
    pub fn below(&self, x: &BigRational) -> BigRational {
        let (f, base) = frac(x);
        match self.reps.iter().rev().find(|p| **p < f) {
            Some(p) => base + p,
            None => base - BigRational::one() + self.reps.last().unwrap(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnrichedTerm {
    pub complex: InvolutiveComplex,
    /// δᵢ.
    pub level: BigRational,
    /// Every lattice level lies within this distance of `𝔎 + ℤ`.
    pub radius: BigRational,
}

/// A map `ψ_from^to` with its level and optional equivariance homotopy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Psi {
    pub from: usize,
    pub to: usize,
    pub f: LinearMap,
    pub h: Option<LinearMap>,
    pub level: BigRational,
}

/// Declared level `δ_{i,j,k}` of the homotopy `ψ_j^k ψ_i^j ≃ ψ_i^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composition {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub level: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnrichedComplex {
    pub terms: Vec<EnrichedTerm>,
    pub psi: Vec<Psi>,
    pub cluster: ClusterSet,
    pub compositions: Vec<Composition>,
}

impl EnrichedComplex {
    /// `copies` copies of `c` joined by identities, clustered exactly at the
    /// generator levels.
    pub fn constant(c: &InvolutiveComplex, copies: usize) -> Self {
        let levels: Vec<BigRational> = c.gens().iter().map(|g| g.deg_i.clone()).collect();
        let id = LinearMap::identity(c.gens());
        let mut psi = Vec::new();
        for i in 0..copies {
            for j in 0..copies {
                if i != j {
                    psi.push(Psi {
                        from: i,
                        to: j,
                        f: id.clone(),
                        h: Some(LinearMap::zero(1)),
                        level: BigRational::zero(),
                    });
                }
            }
        }
        EnrichedComplex {
            terms: (0..copies)
                .map(|_| EnrichedTerm {
                    complex: c.clone(),
                    level: c.level.clone(),
                    radius: BigRational::zero(),
                })
                .collect(),
            psi,
            cluster: ClusterSet::new(&levels),
            compositions: Vec::new(),
        }
    }

    pub fn psi(&self, from: usize, to: usize) -> Option<&Psi> {
        self.psi.iter().find(|p| p.from == from && p.to == to)
    }

    fn bound_for(&self, i: usize, j: usize) -> BigRational {
        let mut b = BigRational::zero();
        for t in [i, j] {
            let term = &self.terms[t];
            b = b.max(&term.radius + &term.level);
        }
        for p in [self.psi(i, j), self.psi(j, i)].into_iter().flatten() {
            b = b.max(&self.terms[p.to].radius + &p.level);
        }
        b
    }
}

/// Solve `d'K + Kd = m` for a two-step filtered `K: src -> tgt` of shift +1
/// whose entries rise by at most `bound`.
fn solve_null_homotopy(
    src: &InstantonComplex,
    tgt: &InstantonComplex,
    m: &LinearMap,
    bound: &BigRational,
) -> Option<LinearMap> {
    let mut sys = MapSystem::new();
    let k = sys.unknown(&src.gens, &tgt.gens, 1, |g, h, rise| {
        InstantonComplex::two_step_allows(Flavor::D2, src, tgt, g, h) && rise <= bound
    });
    sys.left(0, &tgt.diff, &k);
    sys.right(0, &k, &src.diff);
    sys.constant(0, m);
    sys.solve().map(|x| MapSystem::extract(&k, &x))
}

/// Check every invariant of a finite enriched sequence.
pub fn validate_enriched(e: &EnrichedComplex) -> ValidationReport {
    let mut rep = ValidationReport::default();
    rep.push("nonempty", !e.terms.is_empty(), e.terms.is_empty().then(|| "no terms".into()));
    for (i, t) in e.terms.iter().enumerate() {
        let n = i + 1;
        let c = &t.complex;
        let flavor_ok = c.flavor() == Flavor::D2;
        rep.push(&format!("term {n} flavor"), flavor_ok, (!flavor_ok).then(|| "enriched terms must be D2".into()));
        let v = c.validate();
        rep.push(
            &format!("term {n} valid"),
            v.passed(),
            (!v.passed()).then(|| v.failures().map(|f| f.name.clone()).collect::<Vec<_>>().join(", ")),
        );
        let lvl_ok = c.level <= t.level && !t.level.is_negative();
        rep.push(
            &format!("term {n} level"),
            lvl_ok,
            (!lvl_ok).then(|| format!("complex level {} exceeds δ = {}", fmt_rational(&c.level), fmt_rational(&t.level))),
        );
        let far: Vec<String> = c
            .gens()
            .iter()
            .filter(|g| e.cluster.distance(&g.deg_i) > t.radius)
            .map(|g| format!("{} at {}", g.id, fmt_rational(&g.deg_i)))
            .collect();
        rep.push(
            &format!("term {n} clustering"),
            far.is_empty(),
            (!far.is_empty()).then(|| format!("farther than {} from the cluster set: {}", fmt_rational(&t.radius), far.join(", "))),
        );
    }
    for w in e.terms.windows(2).enumerate() {
        let (i, pair) = w;
        let ok = pair[1].level <= pair[0].level && pair[1].radius <= pair[0].radius;
        rep.push(
            &format!("schedule {}->{}", i + 1, i + 2),
            ok,
            (!ok).then(|| "levels and radii must be nonincreasing".into()),
        );
    }
    for p in &e.psi {
        let name = format!("psi {}->{}", p.from + 1, p.to + 1);
        if p.from >= e.terms.len() || p.to >= e.terms.len() {
            rep.push(&name, false, Some("index out of range".into()));
            continue;
        }
        let (s, t) = (&e.terms[p.from].complex, &e.terms[p.to].complex);
        if p.from == p.to {
            let ok = p.f == LinearMap::identity(s.gens());
            rep.push(&format!("{name} identity"), ok, (!ok).then(|| "psi_i^i must be the identity".into()));
            continue;
        }
        match check_morphism(&p.f, &s.complex, &t.complex) {
            Ok(m) => {
                let lvl = FiltValue::Finite(p.level.clone());
                rep.push(&format!("{name} chain map"), m.chain_map, (!m.chain_map).then(|| m.notes.join("; ")));
                rep.push(&format!("{name} local"), m.is_local_map(), (!m.is_local_map()).then(|| m.notes.join("; ")));
                rep.push(
                    &format!("{name} level"),
                    m.level <= lvl,
                    (m.level > lvl).then(|| format!("level {} > {}", m.level, fmt_rational(&p.level))),
                );
            }
            Err(err) => rep.push(&name, false, Some(err.to_string())),
        }
        let eq = match &p.h {
            Some(h) => check_equivariance(&p.f, h, s, t).map(|notes| notes.join("; ")),
            None => {
                let m = p.f.then(&t.tau).add(&s.tau.then(&p.f));
                Ok(match solve_null_homotopy(&s.complex, &t.complex, &m, &p.level) {
                    Some(_) => String::new(),
                    None => "no equivariance homotopy at the declared level".into(),
                })
            }
        };
        match eq {
            Ok(notes) => rep.push(&format!("{name} equivariant"), notes.is_empty(), Some(notes).filter(|n| !n.is_empty())),
            Err(err) => rep.push(&format!("{name} equivariant"), false, Some(err.to_string())),
        }
    }
    for (i, j, k, bound) in composition_triples(e) {
        let (a, b, c) = (e.psi_or_id(i, j), e.psi_or_id(j, k), e.psi_or_id(i, k));
        let m = a.then(&b).add(&c);
        let src = &e.terms[i].complex.complex;
        let tgt = &e.terms[k].complex.complex;
        let ok = solve_null_homotopy(src, tgt, &m, &bound).is_some();
        rep.push(
            &format!("composition {}->{}->{}", i + 1, j + 1, k + 1),
            ok,
            (!ok).then(|| format!("no homotopy of level {}", fmt_rational(&bound))),
        );
    }
    rep
}

impl EnrichedComplex {
    fn psi_or_id(&self, i: usize, j: usize) -> LinearMap {
        if i == j {
            return LinearMap::identity(self.terms[i].complex.gens());
        }
        self.psi(i, j).expect("checked").f.clone()
    }

    fn has_map(&self, i: usize, j: usize) -> bool {
        i == j || self.psi(i, j).is_some()
    }

    fn map_level(&self, i: usize, j: usize) -> BigRational {
        self.psi(i, j).map(|p| p.level.clone()).unwrap_or_default()
    }
}

fn composition_triples(e: &EnrichedComplex) -> Vec<(usize, usize, usize, BigRational)> {
    let n = e.terms.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || !(e.has_map(i, j) && e.has_map(j, k) && e.has_map(i, k)) {
                    continue;
                }
                let declared = e.compositions.iter().find(|c| (c.i, c.j, c.k) == (i, j, k));
                let bound = match declared {
                    Some(c) => c.level.clone(),
                    None => (e.map_level(i, j) + e.map_level(j, k)).max(e.map_level(i, k)),
                };
                out.push((i, j, k, bound));
            }
        }
    }
    out
}

/// A certified stable window: the truncation of the last term, shown to
/// agree with the previous term's up to equivariant homotopy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableWindow {
    /// 0-based index of the term the window was taken from.
    pub index: usize,
    pub window: WindowComplex,
}

fn check_endpoint(e: &EnrichedComplex, x: &FiltValue, bound: &BigRational) -> Result<()> {
    let Some(v) = x.finite() else { return Ok(()) };
    let d = e.cluster.distance(v);
    if d.is_zero() {
        return Err(Error::CriticalEndpoint(format!("{} lies in the cluster set", fmt_rational(v))));
    }
    if d <= *bound {
        return Err(Error::CriticalEndpoint(format!(
            "{} is within {} of the cluster set, inside the band of width {}",
            fmt_rational(v),
            fmt_rational(&d),
            fmt_rational(bound)
        )));
    }
    Ok(())
}

/// Whether a map of windows `A -> B` is null-homotopic.
fn window_null_homotopic(a: &WindowComplex, b: &WindowComplex, m: &Matrix) -> bool {
    let mut vars = Vec::new();
    for i in 0..a.len() {
        for j in 0..b.len() {
            if b.gradings[j] == a.gradings[i] + 1 {
                vars.push((i, j));
            }
        }
    }
    let mut sys = LinearSystem::new(vars.len());
    for col in 0..a.len() {
        for row in 0..b.len() {
            if b.gradings[row] != a.gradings[col] {
                continue;
            }
            // (dK + Kd)(row, col)
            let idx = vars.iter().enumerate().filter_map(|(v, &(i, j))| {
                let dk = i == col && b.diff.get(row, j);
                let kd = j == row && a.diff.get(i, col);
                (dk != kd).then_some(v)
            });
            sys.push_indices(idx.collect::<Vec<_>>(), m.get(row, col));
        }
    }
    sys.is_solvable()
}

fn certify(a: &WindowComplex, b: &WindowComplex, ab: &Matrix, ba: &Matrix, theta: (usize, usize)) -> Vec<String> {
    let mut notes = Vec::new();
    for (name, src, tgt, m) in [("forward", a, b, ab), ("backward", b, a, ba)] {
        if !tgt.diff.compose(m).add(&m.compose(&src.diff)).is_zero() {
            notes.push(format!("{name} window map is not a chain map"));
        }
        let tau = tgt.tau.as_ref().unwrap().compose(m).add(&m.compose(src.tau.as_ref().unwrap()));
        if !window_null_homotopic(src, tgt, &tau) {
            notes.push(format!("{name} window map is not equivariant up to homotopy"));
        }
    }
    let (ta, tb) = theta;
    if let (Some(pa), Some(pb)) = (a.position(ta, 0), b.position(tb, 0)) {
        if !ab.get(pb, pa) || !ba.get(pa, pb) {
            notes.push("window maps do not preserve θ".into());
        }
    }
    for (name, w, m) in [("backward after forward", a, ba.compose(ab)), ("forward after backward", b, ab.compose(ba))] {
        let m = m.add(&Matrix::identity(w.len()));
        if !window_null_homotopic(w, w, &m) {
            notes.push(format!("{name} is not homotopic to the identity"));
        }
    }
    notes
}

/// The stable truncation `E^[r,s]`.
pub fn stable_truncation(e: &EnrichedComplex, r: &FiltValue, s: &FiltValue) -> Result<StableWindow> {
    let n = e.terms.len();
    if n < 2 {
        return Err(Error::InsufficientTail(format!("{n} term(s); stabilization needs two")));
    }
    let (i, j) = (n - 2, n - 1);
    let bound = e.bound_for(i, j);
    check_endpoint(e, r, &bound)?;
    check_endpoint(e, s, &bound)?;
    let (Some(fw), Some(bw)) = (e.psi(i, j), e.psi(j, i)) else {
        return Err(Error::InsufficientTail(format!("maps between terms {} and {} are missing", i + 1, j + 1)));
    };
    let (ci, cj) = (&e.terms[i].complex, &e.terms[j].complex);
    let tail = |err: Error| Error::InsufficientTail(format!("terms {} and {}: {err}", i + 1, j + 1));
    let a = truncate_involutive(ci, r, s).map_err(tail)?;
    let b = truncate_involutive(cj, r, s).map_err(tail)?;
    let ab = a.map_into(ci.gens(), cj.gens(), &fw.f, &b).map_err(tail)?;
    let ba = b.map_into(cj.gens(), ci.gens(), &bw.f, &a).map_err(tail)?;
    let notes = certify(&a, &b, &ab, &ba, (ci.complex.theta(), cj.complex.theta()));
    if !notes.is_empty() {
        return Err(Error::InsufficientTail(format!(
            "windows of terms {} and {} not certified equivalent: {}",
            i + 1,
            j + 1,
            notes.join("; ")
        )));
    }
    Ok(StableWindow { index: j, window: b })
}

/// Enriched involutive `r_s`, with both one-sided values at critical `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnrichedRs {
    pub s: FiltValue,
    pub value: FiltValue,
    pub critical: bool,
    /// Value on the interval just below `s`.
    pub left: FiltValue,
    /// Value on the interval just above `s`, when that is still `≤ 0`.
    pub right: Option<FiltValue>,
}

fn mid(a: &BigRational, b: &BigRational) -> BigRational {
    (a + b) / BigRational::from_integer(2.into())
}

/// Band levels (gradings −4..−2) of the last term.
fn band_range(e: &EnrichedComplex) -> (BigRational, BigRational) {
    let c = &e.terms.last().unwrap().complex.complex;
    let w = WindowComplex::banded(c, None, &FiltValue::NegInf, &FiltValue::PosInf, BAND.0, BAND.1).expect("band");
    let lo = w.levels.first().cloned().unwrap_or_default().min(BigRational::zero());
    let hi = w.levels.last().cloned().unwrap_or_default().max(BigRational::zero());
    (lo, hi)
}

fn has_cycle(e: &EnrichedComplex, r: &BigRational, top: &BigRational) -> Result<bool> {
    let sw = stable_truncation(e, &FiltValue::Finite(r.clone()), &FiltValue::Finite(top.clone()))?;
    let theta = e.terms[sw.index].complex.complex.theta();
    Ok(solve_in_window(&sw.window, theta, true).is_some())
}

/// `r_s` for the window top `top` (that is, `s = -top`), which must be
/// noncritical.
fn value_at_top(e: &EnrichedComplex, top: &BigRational, lo: &BigRational) -> Result<FiltValue> {
    let mut upper = BigRational::zero();
    let mut last_ok: Option<BigRational> = None;
    loop {
        let lower = e.cluster.below(&upper);
        let r = mid(&lower, &upper);
        if !has_cycle(e, &r, top)? {
            return Ok(match last_ok {
                Some(k) => FiltValue::Finite(-k),
                None => FiltValue::NegInf,
            });
        }
        last_ok = Some(lower.clone());
        if lower < *lo {
            return Ok(FiltValue::PosInf);
        }
        upper = lower;
    }
}

/// The enriched involutive `r_s` of the stable tail.
pub fn enriched_rs(e: &EnrichedComplex, s: &FiltValue) -> Result<EnrichedRs> {
    if s > &BigRational::zero() {
        return Err(Error::Domain(format!("s = {s} is positive")));
    }
    if e.terms.is_empty() {
        return Err(Error::InsufficientTail("no terms".into()));
    }
    let (lo, hi) = band_range(e);
    let lo = lo - BigRational::one();
    let Some(sv) = s.finite() else {
        let top = mid(&hi, &e.cluster.above(&hi));
        let v = value_at_top(e, &top, &lo)?;
        return Ok(EnrichedRs {
            s: s.clone(),
            value: v.clone(),
            critical: false,
            left: v.clone(),
            right: Some(v),
        });
    };
    let t = -sv;
    if !e.cluster.contains(&t) {
        let v = value_at_top(e, &t, &lo)?;
        return Ok(EnrichedRs {
            s: s.clone(),
            value: v.clone(),
            critical: false,
            left: v.clone(),
            right: Some(v),
        });
    }
    let left = value_at_top(e, &mid(&t, &e.cluster.above(&t)), &lo)?;
    let right = if t.is_positive() {
        Some(value_at_top(e, &mid(&e.cluster.below(&t), &t), &lo)?)
    } else {
        None
    };
    Ok(EnrichedRs {
        s: s.clone(),
        value: left.clone(),
        critical: true,
        left,
        right,
    })
}
