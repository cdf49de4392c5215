//! Involutive complexes: an instanton-type complex with a homotopy
//! involution τ of some level δ ≥ 0.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::complex::{resolve_pairs, Flavor, InstantonComplex, LinearMap, ValidationReport};
use crate::error::{Error, Result};
use crate::filt::{fmt_rational, FiltValue};
use crate::solver::{candidate_rises, MapSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutiveComplex {
    pub complex: InstantonComplex,
    pub tau: LinearMap,
    /// Declared level δ of τ and of the homotopy `H`.
    pub level: BigRational,
    /// Homotopy with `dH + Hd = τ² + id`, when supplied.
    pub h_witness: Option<LinearMap>,
}

impl InvolutiveComplex {
    pub fn from_parts(
        complex: InstantonComplex,
        tau: LinearMap,
        level: BigRational,
        h_witness: Option<LinearMap>,
    ) -> Result<Self> {
        if tau.shift != 0 {
            return Err(Error::Structural(format!("tau has grading shift {}, expected 0", tau.shift)));
        }
        tau.check_coherence(&complex.gens, &complex.gens)?;
        if let Some(h) = &h_witness {
            if h.shift != 1 {
                return Err(Error::Structural(format!("homotopy has grading shift {}, expected +1", h.shift)));
            }
            h.check_coherence(&complex.gens, &complex.gens)?;
        }
        if level.is_negative() {
            return Err(Error::Structural(format!("negative tau level {}", fmt_rational(&level))));
        }
        Ok(InvolutiveComplex {
            complex,
            tau,
            level,
            h_witness,
        })
    }

    pub fn new(
        complex: InstantonComplex,
        tau: LinearMap,
        level: BigRational,
        h_witness: Option<LinearMap>,
    ) -> Result<Self> {
        let c = Self::from_parts(complex, tau, level, h_witness)?;
        c.validate().into_result()?;
        Ok(c)
    }

    /// Build a level-0 involutive complex from a complex and the
    /// non-identity part of τ, given as `(source id, target id)` pairs that
    /// are added to the identity.
    pub fn build(complex: InstantonComplex, tau_extra: &[(&str, &str)]) -> Result<Self> {
        let pairs = resolve_pairs(&complex.gens, &complex.gens, tau_extra)?;
        let extra = LinearMap::from_pairs(&complex.gens, &complex.gens, 0, pairs)?;
        let tau = LinearMap::identity(&complex.gens).add(&extra);
        Self::new(complex, tau, BigRational::zero(), None)
    }

    /// τ = id.
    pub fn identity(complex: InstantonComplex) -> Self {
        let tau = LinearMap::identity(&complex.gens);
        InvolutiveComplex {
            complex,
            tau,
            level: BigRational::zero(),
            h_witness: Some(LinearMap::zero(1)),
        }
    }

    pub fn trivial() -> Self {
        Self::identity(InstantonComplex::trivial(Flavor::D2))
    }

    pub fn flavor(&self) -> Flavor {
        self.complex.flavor
    }

    pub fn gens(&self) -> &[crate::complex::Generator] {
        &self.complex.gens
    }

    pub fn validate(&self) -> ValidationReport {
        let c = &self.complex;
        let mut r = c.validate();
        let dt = self.tau.then(&c.diff);
        let td = c.diff.then(&self.tau);
        let comm = dt.add(&td);
        r.push(
            "tau-chain-map",
            comm.is_zero(),
            (!comm.is_zero()).then(|| format!("dτ + τd has entries {}", comm.describe(&c.gens, &c.gens).join(", "))),
        );
        let lvl = self.tau.level(&c.gens, &c.gens);
        let ok = lvl <= FiltValue::Finite(self.level.clone());
        r.push(
            "tau-level",
            ok,
            (!ok).then(|| format!("tau has level {lvl}, declared {}", fmt_rational(&self.level))),
        );
        let th = c.theta();
        let (ok, detail) = match c.flavor {
            Flavor::D2 => {
                let fixes = self.tau.get(th, th) == Some(0);
                let bad: Vec<String> = self
                    .tau
                    .entries()
                    .filter(|&(g, h, _)| h == th && g != th)
                    .map(|(g, _, _)| c.gens[g].id.clone())
                    .collect();
                (
                    fixes && bad.is_empty(),
                    format!(
                        "theta->theta coefficient {}; non-theta generators mapping onto theta: [{}]",
                        if fixes { 1 } else { 0 },
                        bad.join(", ")
                    ),
                )
            }
            Flavor::D1 => {
                let row: Vec<_> = self.tau.row(th).collect();
                (row == vec![(th, 0)], "tau must fix theta exactly".to_string())
            }
        };
        r.push("tau-two-step", ok, (!ok).then_some(detail));

        match &self.h_witness {
            Some(h) => {
                let lhs = h.then(&c.diff).add(&c.diff.then(h));
                let rhs = self.tau.then(&self.tau).add(&LinearMap::identity(&c.gens));
                let diff = lhs.add(&rhs);
                r.push(
                    "homotopy-involution",
                    diff.is_zero(),
                    (!diff.is_zero()).then(|| format!("dH + Hd + τ² + id has entries {}", diff.describe(&c.gens, &c.gens).join(", "))),
                );
                let two_step_bad: Vec<String> = h
                    .entries()
                    .filter(|&(g, h2, _)| !InstantonComplex::two_step_allows(c.flavor, c, c, g, h2))
                    .map(|(g, h2, _)| format!("{} -> {}", c.gens[g].id, c.gens[h2].id))
                    .collect();
                r.push(
                    "homotopy-two-step",
                    two_step_bad.is_empty(),
                    (!two_step_bad.is_empty()).then(|| two_step_bad.join(", ")),
                );
                let hl = h.level(&c.gens, &c.gens);
                let ok = hl <= FiltValue::Finite(self.level.clone());
                r.push(
                    "homotopy-level",
                    ok,
                    (!ok).then(|| format!("H has level {hl}, declared {}", fmt_rational(&self.level))),
                );
                r.witness_level = Some(FiltValue::max(&hl, &FiltValue::zero()).to_string());
            }
            None => match self.minimal_witness_level() {
                Some((lvl, _)) => {
                    let ok = lvl <= self.level;
                    r.push(
                        "homotopy-involution (solved)",
                        ok,
                        (!ok).then(|| format!("least witness level {} exceeds declared {}", fmt_rational(&lvl), fmt_rational(&self.level))),
                    );
                    r.witness_level = Some(fmt_rational(&lvl));
                }
                None => {
                    r.push("homotopy-involution (solved)", false, Some("no witness at any level".into()));
                    r.witness_level = Some("none".into());
                }
            },
        }
        r
    }

    /// Solve for `H` with `dH + Hd = τ² + id`, two-step filtered, with every
    /// entry rising by at most `bound` (unbounded when `None`).
    pub fn solve_homotopy(&self, bound: Option<&BigRational>) -> Option<LinearMap> {
        let c = &self.complex;
        let mut sys = MapSystem::new();
        let h = sys.unknown(&c.gens, &c.gens, 1, |g, t, rise| {
            InstantonComplex::two_step_allows(c.flavor, c, c, g, t) && bound.is_none_or(|b| rise <= b)
        });
        sys.left(0, &c.diff, &h);
        sys.right(0, &h, &c.diff);
        sys.constant(0, &self.tau.then(&self.tau));
        sys.constant(0, &LinearMap::identity(&c.gens));
        sys.solve().map(|x| MapSystem::extract(&h, &x))
    }

    /// Least δ ≥ 0 admitting a level-δ witness, together with the witness.
    pub fn minimal_witness_level(&self) -> Option<(BigRational, LinearMap)> {
        let g = &self.complex.gens;
        let zero = BigRational::zero();
        let mut levels = vec![zero.clone()];
        levels.extend(candidate_rises(g, g, 1).into_iter().filter(|r| r > &zero));
        levels
            .into_iter()
            .find_map(|l| self.solve_homotopy(Some(&l)).map(|h| (l, h)))
    }

    /// A copy with the homotopy witness filled in (solved at the declared
    /// level if it was absent).
    pub fn with_witness(&self) -> Result<Self> {
        if self.h_witness.is_some() {
            return Ok(self.clone());
        }
        let h = self
            .solve_homotopy(Some(&self.level))
            .ok_or_else(|| Error::Invalid("no homotopy witness at the declared level".into()))?;
        let mut out = self.clone();
        out.h_witness = Some(h);
        Ok(out)
    }
}
