//! θ-supported cycles and the `r_s` invariants.
//!
//! Everything reduces to the three gradings around θ: a θ-supported cycle
//! lives in grading −3, its boundary in −4, and the equivariance witness `b`
//! in −2. Restricted to those gradings every window is finite, infinite
//! endpoints included.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::json;

use crate::complex::{Chain, Flavor, InstantonComplex, LinearMap};
use crate::error::{Error, Result};
use crate::filt::{fmt_rational, FiltValue};
use crate::gf2::{BitVec, LinearSystem};
use crate::involutive::InvolutiveComplex;
use crate::window::WindowComplex;

/// Gradings touched by the θ-cycle equations of a D₂ complex.
pub const BAND: (i64, i64) = (-4, -2);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaCycleCertificate {
    pub r: FiltValue,
    pub s: FiltValue,
    pub equivariant: bool,
    pub z: Chain,
    /// `db = τz + z` inside the window, for equivariant certificates.
    pub b: Option<Chain>,
}

impl ThetaCycleCertificate {
    pub fn describe(&self, gens: &[crate::complex::Generator]) -> String {
        let mut s = format!("z = {}", self.z.describe(gens));
        if let Some(b) = &self.b {
            s.push_str(&format!("; b = {}", b.describe(gens)));
        }
        s
    }

    pub fn to_json(&self, gens: &[crate::complex::Generator]) -> serde_json::Value {
        let terms = |c: &Chain| {
            c.terms()
                .map(|&(g, k)| json!({"id": gens[g].id, "ypow": k}))
                .collect::<Vec<_>>()
        };
        let mut v = json!({
            "window": {"r": self.r.to_string(), "s": self.s.to_string()},
            "equivariant": self.equivariant,
            "z": terms(&self.z),
        });
        if let Some(b) = &self.b {
            v["b"] = json!(terms(b));
        }
        v
    }
}

/// Solve for a θ-supported cycle `z` (and `b` when equivariant) inside a
/// built window. The window's θ-point `(θ, 0)` must be present.
pub fn solve_in_window(w: &WindowComplex, theta: usize, equivariant: bool) -> Option<(BitVec, Option<BitVec>)> {
    let tp = w.position(theta, 0)?;
    let grading = w.gradings[tp];
    let zs = w.in_grading(grading);
    let bs = if equivariant { w.in_grading(grading + 1) } else { Vec::new() };
    let nz = zs.len();
    let mut sys = LinearSystem::new(nz + bs.len());
    for i in w.in_grading(grading - 1) {
        sys.push_indices((0..nz).filter(|&j| w.diff.get(i, zs[j])), false);
    }
    let tz = zs.iter().position(|&p| p == tp).unwrap();
    sys.push_indices([tz], true);
    if equivariant {
        let tau = w.tau.as_ref().expect("equivariant window without tau");
        for &i in &zs {
            let mut row: Vec<usize> = (0..nz)
                .filter(|&j| tau.get(i, zs[j]) != (i == zs[j]))
                .collect();
            row.extend((0..bs.len()).filter(|&m| w.diff.get(i, bs[m])).map(|m| nz + m));
            sys.push_indices(row, false);
        }
    }
    let x = sys.solve()?;
    let z = BitVec::from_indices(w.len(), (0..nz).filter(|&j| x.get(j)).map(|j| zs[j]));
    let b = equivariant.then(|| BitVec::from_indices(w.len(), (0..bs.len()).filter(|&m| x.get(nz + m)).map(|m| bs[m])));
    Some((z, b))
}

fn check_flavor(c: &InstantonComplex) -> Result<()> {
    if c.flavor != Flavor::D2 {
        return Err(Error::Flavor(format!("θ-supported cycles need a D2 complex, got {}", c.flavor)));
    }
    Ok(())
}

/// Find a θ-supported `(r, s]`-cycle, equivariant if `tau` is given and
/// `equivariant` is set. Either endpoint may be infinite.
pub fn find_theta_cycle(
    c: &InstantonComplex,
    tau: Option<&LinearMap>,
    r: &FiltValue,
    s: &FiltValue,
    equivariant: bool,
) -> Result<Option<ThetaCycleCertificate>> {
    check_flavor(c)?;
    if equivariant && tau.is_none() {
        return Err(Error::Argument("equivariant search requested without tau".into()));
    }
    if !(r < &BigRational::zero() && s >= &BigRational::zero()) {
        return Ok(None);
    }
    let w = WindowComplex::banded(c, tau.filter(|_| equivariant), r, s, BAND.0, BAND.1)?;
    Ok(solve_in_window(&w, c.theta(), equivariant).map(|(z, b)| ThetaCycleCertificate {
        r: r.clone(),
        s: s.clone(),
        equivariant,
        z: w.chain(&z),
        b: b.map(|b| w.chain(&b)),
    }))
}

/// Value of `r_s` together with the window that realizes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsValue {
    pub value: FiltValue,
    /// A certificate at the infimum (`r = -value`, or `r = -inf` for ∞).
    pub certificate: Option<ThetaCycleCertificate>,
}

fn upper_end(s: &FiltValue) -> Result<FiltValue> {
    if s > &BigRational::zero() {
        return Err(Error::Domain(format!("s = {s} is positive")));
    }
    Ok(-s)
}

/// Distinct levels of band lattice points in `(lo, hi]`, ascending.
fn band_levels(c: &InstantonComplex, lo: &FiltValue, hi: &FiltValue) -> Vec<BigRational> {
    let w = WindowComplex::banded(c, None, lo, hi, BAND.0, BAND.1).expect("band levels");
    let mut v = w.levels.clone();
    v.dedup();
    v
}

/// `r_s`, involutive when `tau` is given.
pub fn rs_value(c: &InstantonComplex, tau: Option<&LinearMap>, s: &FiltValue) -> Result<RsValue> {
    check_flavor(c)?;
    let top = upper_end(s)?;
    let eq = tau.is_some();
    let search = |r: &FiltValue| find_theta_cycle(c, tau, r, &top, eq);
    let zero = FiltValue::zero();
    let mut levels = band_levels(c, &FiltValue::NegInf, &zero);
    levels.retain(|l| l < &BigRational::zero());
    // existence is constant for r in [l_i, l_{i+1}) and monotone in r
    let mut best: Option<ThetaCycleCertificate> = None;
    for l in levels.iter().rev() {
        match search(&FiltValue::Finite(l.clone()))? {
            Some(cert) => best = Some(cert),
            None => {
                return Ok(match best {
                    Some(cert) => RsValue {
                        value: -&cert.r,
                        certificate: Some(cert),
                    },
                    None => RsValue {
                        value: FiltValue::NegInf,
                        certificate: None,
                    },
                });
            }
        }
    }
    if let Some(cert) = search(&FiltValue::NegInf)? {
        return Ok(RsValue {
            value: FiltValue::PosInf,
            certificate: Some(cert),
        });
    }
    Ok(match best {
        Some(cert) => RsValue {
            value: -&cert.r,
            certificate: Some(cert),
        },
        None => RsValue {
            value: FiltValue::NegInf,
            certificate: None,
        },
    })
}

/// One piece `(lo, hi]` of a step function; the first piece also contains
/// `-inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepPiece {
    pub lo: FiltValue,
    pub hi: FiltValue,
    pub value: FiltValue,
}

/// `s ↦ r_s` on `[-inf, 0]`. Pieces are half-open on the left, so the
/// function is left-continuous at each breakpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepFunction {
    pub pieces: Vec<StepPiece>,
}

impl StepFunction {
    pub fn constant(value: FiltValue) -> Self {
        StepFunction {
            pieces: vec![StepPiece {
                lo: FiltValue::NegInf,
                hi: FiltValue::zero(),
                value,
            }],
        }
    }

    /// Build from right endpoints and values, merging equal neighbours.
    pub fn from_samples(samples: Vec<(FiltValue, FiltValue)>) -> Self {
        let mut pieces: Vec<StepPiece> = Vec::new();
        let mut lo = FiltValue::NegInf;
        for (hi, value) in samples {
            match pieces.last_mut() {
                Some(p) if p.value == value => p.hi = hi.clone(),
                _ => pieces.push(StepPiece {
                    lo: lo.clone(),
                    hi: hi.clone(),
                    value,
                }),
            }
            lo = hi;
        }
        StepFunction { pieces }
    }

    pub fn eval(&self, s: &FiltValue) -> Option<&FiltValue> {
        self.pieces
            .iter()
            .find(|p| s <= &p.hi && (s > &p.lo || p.lo == FiltValue::NegInf))
            .map(|p| &p.value)
    }

    /// Limit from the right at `s < 0`.
    pub fn right_limit(&self, s: &FiltValue) -> Option<&FiltValue> {
        self.pieces.iter().find(|p| s >= &p.lo && s < &p.hi).map(|p| &p.value)
    }

    pub fn breakpoints(&self) -> Vec<FiltValue> {
        self.pieces.iter().skip(1).map(|p| p.lo.clone()).collect()
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.pieces.windows(2).all(|w| w[0].value >= w[1].value)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for p in &self.pieces {
            out.push_str(&format!("{}\t{}\t{}\n", p.lo, p.hi, p.value));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!(self
            .pieces
            .iter()
            .map(|p| json!({"s_lo": p.lo.to_string(), "s_hi": p.hi.to_string(), "value": p.value.to_string()}))
            .collect::<Vec<_>>())
    }
}

impl fmt::Display for StepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.pieces {
            let open = if p.lo == FiltValue::NegInf { "[" } else { "(" };
            writeln!(f, "s in {open}{}, {}]: {}", p.lo, p.hi, p.value)?;
        }
        Ok(())
    }
}

/// Right endpoints of the pieces on which `r_s` can be constant: `-L` for
/// each positive band level `L`, then 0.
pub fn s_breakpoints(c: &InstantonComplex) -> Vec<FiltValue> {
    let mut out: Vec<FiltValue> = band_levels(c, &FiltValue::zero(), &FiltValue::PosInf)
        .into_iter()
        .rev()
        .map(|l| FiltValue::Finite(-l))
        .collect();
    out.push(FiltValue::zero());
    out
}

/// The full function `s ↦ r_s` on `[-inf, 0]`, sampled at every breakpoint.
pub fn rs_function(c: &InstantonComplex, tau: Option<&LinearMap>) -> Result<StepFunction> {
    Ok(rs_function_with_certificates(c, tau)?.0)
}

pub fn rs_function_with_certificates(
    c: &InstantonComplex,
    tau: Option<&LinearMap>,
) -> Result<(StepFunction, Vec<(FiltValue, RsValue)>)> {
    let mut samples = Vec::new();
    let mut values = Vec::new();
    for s in s_breakpoints(c) {
        let v = rs_value(c, tau, &s)?;
        samples.push((s.clone(), v.value.clone()));
        values.push((s, v));
    }
    Ok((StepFunction::from_samples(samples), values))
}

/// Value at `s` plus the right limit when `s` is a breakpoint where the
/// two differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsReport {
    pub s: FiltValue,
    pub value: FiltValue,
    pub right_limit: Option<FiltValue>,
}

pub fn rs_report(c: &InstantonComplex, tau: Option<&LinearMap>, s: &FiltValue) -> Result<RsReport> {
    let value = rs_value(c, tau, s)?.value;
    let mut right_limit = None;
    if s < &BigRational::zero() && s.is_finite() && s_breakpoints(c).contains(s) {
        let f = rs_function(c, tau)?;
        if let Some(v) = f.right_limit(s) {
            if v != &value {
                right_limit = Some(v.clone());
            }
        }
    }
    Ok(RsReport {
        s: s.clone(),
        value,
        right_limit,
    })
}

/// Outcome of the local triviality test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalTriviality {
    pub trivial: bool,
    pub r0: FiltValue,
    /// For trivial complexes: the local map from the trivial complex,
    /// `θ ↦ z`, and its equivariance homotopy `θ ↦ b`.
    pub local_map: Option<(LinearMap, LinearMap)>,
}

pub fn local_triviality(c: &InvolutiveComplex) -> Result<LocalTriviality> {
    let cx = &c.complex;
    let v = rs_value(cx, Some(&c.tau), &FiltValue::zero())?;
    if v.value != FiltValue::PosInf {
        return Ok(LocalTriviality {
            trivial: false,
            r0: v.value,
            local_map: None,
        });
    }
    let cert = v.certificate.expect("certificate for r = inf");
    let triv = InstantonComplex::trivial(Flavor::D2);
    let mut f = LinearMap::zero(0);
    for &(g, k) in cert.z.terms() {
        f.toggle_raw(0, g, k);
    }
    let mut h = LinearMap::zero(1);
    for &(g, k) in cert.b.as_ref().expect("equivariant certificate").terms() {
        h.toggle_raw(0, g, k);
    }
    f.check_coherence(&triv.gens, &cx.gens)?;
    h.check_coherence(&triv.gens, &cx.gens)?;
    Ok(LocalTriviality {
        trivial: true,
        r0: v.value,
        local_map: Some((f, h)),
    })
}

/// Describe a value for reports: `p/q`, `inf` or `-inf`.
pub fn fmt_value(v: &FiltValue) -> String {
    match v {
        FiltValue::Finite(q) => fmt_rational(q),
        other => other.to_string(),
    }
}
