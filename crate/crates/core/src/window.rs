//! Truncated complexes `C^[r,s]`: the finite GF(2) complexes spanned by
//! lattice points `y^k g` with `r < deg_i(g) + k ≤ s`.
//!
//! Every ℤ-graded piece of a finitely generated complex is finite (each
//! generator contributes at most one lattice point per grading), so a
//! window restricted to a band of gradings is finite even when an endpoint
//! is infinite. [`WindowComplex::banded`] builds those; [`truncate`] is the
//! plain finite window.

use std::collections::HashMap;

use num_rational::BigRational;
use serde_json::json;

use crate::complex::{Chain, Generator, InstantonComplex, LinearMap};
use crate::error::{Error, Result};
use crate::filt::{fmt_rational, FiltValue};
use crate::gf2::{echelon_basis, kernel, BitVec, Matrix};
use crate::involutive::InvolutiveComplex;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowComplex {
    pub r: FiltValue,
    pub s: FiltValue,
    /// Inclusive range of ℤ-gradings kept, `None` for all of them.
    pub band: Option<(i64, i64)>,
    /// Lattice points `(generator, y-power)` sorted by (level, generator, power).
    pub points: Vec<(usize, i64)>,
    pub gradings: Vec<i64>,
    pub levels: Vec<BigRational>,
    pub diff: Matrix,
    pub tau: Option<Matrix>,
    /// Indices (into `points`) of the points `y^k θ`.
    pub theta_points: Vec<usize>,
    index: HashMap<(usize, i64), usize>,
}

fn check_order(r: &FiltValue, s: &FiltValue) -> Result<()> {
    if r >= s {
        return Err(Error::Domain(format!("empty window ({r}, {s}]")));
    }
    Ok(())
}

fn in_window(level: &BigRational, r: &FiltValue, s: &FiltValue) -> bool {
    r < level && s >= level
}

impl WindowComplex {
    /// The window `(r, s]` of `c`, keeping only gradings in `lo..=hi`.
    /// Differential components that leave the band are dropped, so the
    /// result is a chain complex only away from the band edges.
    pub fn banded(
        c: &InstantonComplex,
        tau: Option<&LinearMap>,
        r: &FiltValue,
        s: &FiltValue,
        lo: i64,
        hi: i64,
    ) -> Result<Self> {
        check_order(r, s)?;
        let mut pts = Vec::new();
        for (gi, g) in c.gens.iter().enumerate() {
            for grading in lo..=hi {
                let diff = grading - g.deg_z;
                if diff.rem_euclid(8) != 0 {
                    continue;
                }
                let k = diff.div_euclid(8);
                if in_window(&g.level_at(k), r, s) {
                    pts.push((gi, k));
                }
            }
        }
        Self::assemble(c, tau, r, s, Some((lo, hi)), pts)
    }

    fn assemble(
        c: &InstantonComplex,
        tau: Option<&LinearMap>,
        r: &FiltValue,
        s: &FiltValue,
        band: Option<(i64, i64)>,
        mut pts: Vec<(usize, i64)>,
    ) -> Result<Self> {
        let gens = &c.gens;
        pts.sort_by(|a, b| {
            gens[a.0]
                .level_at(a.1)
                .cmp(&gens[b.0].level_at(b.1))
                .then(a.0.cmp(&b.0))
                .then(a.1.cmp(&b.1))
        });
        let index: HashMap<(usize, i64), usize> = pts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut w = WindowComplex {
            r: r.clone(),
            s: s.clone(),
            band,
            gradings: pts.iter().map(|&(g, k)| gens[g].deg_z + 8 * k).collect(),
            levels: pts.iter().map(|&(g, k)| gens[g].level_at(k)).collect(),
            theta_points: pts
                .iter()
                .enumerate()
                .filter(|(_, p)| p.0 == c.theta())
                .map(|(i, _)| i)
                .collect(),
            points: pts,
            diff: Matrix::zero(0, 0),
            tau: None,
            index,
        };
        w.diff = w.self_map(gens, &c.diff, "differential")?;
        if let Some(t) = tau {
            w.tau = Some(w.self_map(gens, t, "tau")?);
        }
        Ok(w)
    }

    fn self_map(&self, gens: &[Generator], f: &LinearMap, what: &str) -> Result<Matrix> {
        self.map_into(gens, gens, f, self).map_err(|e| match e {
            Error::LevelViolation(m) => Error::LevelViolation(format!("{what}: {m}")),
            other => other,
        })
    }

    /// Matrix of `f` from this window into `target`. Terms at or below the
    /// target's lower end vanish in the quotient; terms above its upper end
    /// are a level violation.
    pub fn map_into(&self, src: &[Generator], tgt: &[Generator], f: &LinearMap, target: &WindowComplex) -> Result<Matrix> {
        let mut m = Matrix::zero(target.len(), self.len());
        for (j, &(g, k)) in self.points.iter().enumerate() {
            for (h, e) in f.row(g) {
                let kk = k + e;
                let level = tgt[h].level_at(kk);
                if target.s < level {
                    return Err(Error::LevelViolation(format!(
                        "y^{k}·{} maps to y^{kk}·{} at level {} above {}",
                        src[g].id,
                        tgt[h].id,
                        fmt_rational(&level),
                        target.s
                    )));
                }
                if let Some(&i) = target.index.get(&(h, kk)) {
                    m.cols[j].flip(i);
                }
            }
        }
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn position(&self, g: usize, k: i64) -> Option<usize> {
        self.index.get(&(g, k)).copied()
    }

    /// Indices of the points in one ℤ-grading.
    pub fn in_grading(&self, grading: i64) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.gradings[i] == grading).collect()
    }

    pub fn chain(&self, v: &BitVec) -> Chain {
        Chain::from_terms(v.ones().map(|i| self.points[i]))
    }

    /// Coordinates of a chain; terms outside the window are dropped.
    pub fn vector(&self, chain: &Chain) -> BitVec {
        BitVec::from_indices(
            self.len(),
            chain.terms().filter_map(|&(g, k)| self.position(g, k)),
        )
    }

    /// Cycles and boundaries in one grading, as reduced bases in window
    /// coordinates.
    pub fn homology(&self, grading: i64) -> WindowHomology {
        let here = self.in_grading(grading);
        let sub = Matrix {
            rows: self.len(),
            cols: here.iter().map(|&j| self.diff.cols[j].clone()).collect(),
        };
        let cycles: Vec<BitVec> = kernel(&sub)
            .into_iter()
            .map(|v| BitVec::from_indices(self.len(), v.ones().map(|i| here[i])))
            .collect();
        let cycle_basis = echelon_basis(cycles);
        let boundary_basis = echelon_basis(
            self.in_grading(grading + 1)
                .into_iter()
                .map(|j| self.diff.cols[j].clone()),
        );
        WindowHomology {
            rank: cycle_basis.len() - boundary_basis.len(),
            cycle_basis,
            boundary_basis,
        }
    }

    pub fn describe_point(&self, gens: &[Generator], i: usize) -> String {
        Chain::from_terms([self.points[i]]).describe(gens)
    }

    /// JSON dump: the points with their degrees and the matrices as
    /// `(from, to)` index pairs.
    pub fn to_json(&self, gens: &[Generator]) -> serde_json::Value {
        let pairs = |m: &Matrix| {
            let mut out = Vec::new();
            for (j, col) in m.cols.iter().enumerate() {
                for i in col.ones() {
                    out.push(json!({"from": j, "to": i}));
                }
            }
            out
        };
        let points: Vec<_> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, &(g, k))| {
                json!({
                    "id": gens[g].id,
                    "ypow": k,
                    "deg_z": self.gradings[i],
                    "deg_i": fmt_rational(&self.levels[i]),
                    "theta": gens[g].is_theta,
                })
            })
            .collect();
        let mut v = json!({
            "window": {"r": self.r.to_string(), "s": self.s.to_string()},
            "points": points,
            "diff": pairs(&self.diff),
        });
        if let Some((lo, hi)) = self.band {
            v["band"] = json!([lo, hi]);
        }
        if let Some(t) = &self.tau {
            v["tau"] = json!(pairs(t));
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowHomology {
    pub rank: usize,
    pub cycle_basis: Vec<BitVec>,
    pub boundary_basis: Vec<BitVec>,
}

fn finite_endpoints(r: &FiltValue, s: &FiltValue) -> Result<()> {
    if !r.is_finite() || !s.is_finite() {
        return Err(Error::InfiniteEndpoint(r.to_string(), s.to_string()));
    }
    check_order(r, s)
}

fn all_points(c: &InstantonComplex, r: &FiltValue, s: &FiltValue) -> Vec<(usize, i64)> {
    let mut pts = Vec::new();
    for (gi, g) in c.gens.iter().enumerate() {
        let lo = r.strict_ceil_offset(&g.deg_i).unwrap();
        let hi = s.floor_offset(&g.deg_i).unwrap();
        pts.extend((lo..=hi).map(|k| (gi, k)));
    }
    pts
}

/// The finite window `C^[r,s]`.
pub fn truncate(c: &InstantonComplex, r: &FiltValue, s: &FiltValue) -> Result<WindowComplex> {
    finite_endpoints(r, s)?;
    WindowComplex::assemble(c, None, r, s, None, all_points(c, r, s))
}

/// The finite window of an involutive complex, with the induced `τ`.
pub fn truncate_involutive(c: &InvolutiveComplex, r: &FiltValue, s: &FiltValue) -> Result<WindowComplex> {
    finite_endpoints(r, s)?;
    WindowComplex::assemble(&c.complex, Some(&c.tau), r, s, None, all_points(&c.complex, r, s))
}

/// Matrix of the map `C^[r,s] -> C'^[r+δ,s+δ]` induced by a level-δ map.
pub fn induced_window_map(
    f: &LinearMap,
    source: &InstantonComplex,
    target: &InstantonComplex,
    r: &FiltValue,
    s: &FiltValue,
    delta: &BigRational,
) -> Result<(WindowComplex, WindowComplex, Matrix)> {
    let a = truncate(source, r, s)?;
    let shift = FiltValue::Finite(delta.clone());
    let b = truncate(target, &(r + &shift), &(s + &shift))?;
    let m = a.map_into(&source.gens, &target.gens, f, &b)?;
    Ok((a, b, m))
}
