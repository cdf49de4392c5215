//! Brute-force reference computations. Nothing here goes through the
//! window or solver modules: lattice points, differentials and τ are
//! recomputed from the raw map entries and every candidate chain is
//! enumerated.

#![allow(dead_code)]

use std::collections::BTreeSet;

use corkcalc_core::filt::q;
use corkcalc_core::{FiltValue, InstantonComplex, LinearMap};
use num_rational::BigRational;
use num_traits::Zero;

pub type Point = (usize, i64);

pub fn level(c: &InstantonComplex, p: Point) -> BigRational {
    &c.gens[p.0].deg_i + BigRational::from_integer(p.1.into())
}

pub fn grading(c: &InstantonComplex, p: Point) -> i64 {
    c.gens[p.0].deg_z + 8 * p.1
}

fn inside(c: &InstantonComplex, p: Point, r: &FiltValue, s: &FiltValue) -> bool {
    let l = FiltValue::Finite(level(c, p));
    r < &l && &l <= s
}

/// Lattice points in `(r, s]` of the given ℤ-grading.
pub fn points_in(c: &InstantonComplex, g: i64, r: &FiltValue, s: &FiltValue) -> Vec<Point> {
    (0..c.gens.len())
        .filter_map(|i| {
            let d = g - c.gens[i].deg_z;
            (d.rem_euclid(8) == 0).then(|| (i, d.div_euclid(8)))
        })
        .filter(|&p| inside(c, p, r, s))
        .collect()
}

/// Every lattice point of a finite window, over all gradings.
pub fn all_points(c: &InstantonComplex, r: &BigRational, s: &BigRational) -> Vec<Point> {
    let mut out = Vec::new();
    for (i, g) in c.gens.iter().enumerate() {
        for k in -64..=64 {
            let l = &g.deg_i + BigRational::from_integer(k.into());
            if &l > r && &l <= s {
                out.push((i, k));
            }
        }
    }
    out
}

/// Image of a set of points under `f`, reduced mod 2 and cut to `(r, s]`.
/// Panics on a term above `s`.
pub fn image(
    c: &InstantonComplex,
    f: &LinearMap,
    chain: &BTreeSet<Point>,
    r: &FiltValue,
    s: &FiltValue,
) -> BTreeSet<Point> {
    let mut out = BTreeSet::new();
    for &(g, k) in chain {
        for (a, b, m) in f.entries() {
            if a != g {
                continue;
            }
            let p = (b, k + m);
            let l = FiltValue::Finite(level(c, p));
            assert!(&l <= s, "term above the window");
            if &l > r && !out.insert(p) {
                out.remove(&p);
            }
        }
    }
    out
}

fn subsets(pts: &[Point]) -> Vec<BTreeSet<Point>> {
    assert!(pts.len() <= 20, "brute force over {} points", pts.len());
    (0u32..1 << pts.len())
        .map(|mask| {
            pts.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect()
        })
        .collect()
}

fn xor(a: &BTreeSet<Point>, b: &BTreeSet<Point>) -> BTreeSet<Point> {
    a.symmetric_difference(b).copied().collect()
}

/// Does `(r, s]` carry a θ-supported cycle (equivariant when `tau` is
/// given)? Exhaustive over the chains in gradings −3 and −2.
pub fn theta_cycle(c: &InstantonComplex, tau: Option<&LinearMap>, r: &FiltValue, s: &FiltValue) -> bool {
    let theta = (c.theta(), 0);
    if !inside(c, theta, r, s) {
        return false;
    }
    let g = grading(c, theta);
    let zs = points_in(c, g, r, s);
    let bs = points_in(c, g + 1, r, s);
    let boundaries: Vec<BTreeSet<Point>> = match tau {
        Some(_) => subsets(&bs).iter().map(|b| image(c, &c.diff, b, r, s)).collect(),
        None => Vec::new(),
    };
    subsets(&zs).into_iter().any(|z| {
        if !z.contains(&theta) || !image(c, &c.diff, &z, r, s).is_empty() {
            return false;
        }
        match tau {
            None => true,
            Some(t) => {
                let w = xor(&image(c, t, &z, r, s), &z);
                boundaries.contains(&w)
            }
        }
    })
}

/// Band levels (gradings −4..−2) of all lattice points.
pub fn band_levels(c: &InstantonComplex) -> Vec<BigRational> {
    let (lo, hi) = (FiltValue::NegInf, FiltValue::PosInf);
    let mut v: Vec<BigRational> = (-4..=-2)
        .flat_map(|g| points_in(c, g, &lo, &hi))
        .map(|p| level(c, p))
        .collect();
    v.sort();
    v.dedup();
    v
}

/// `r_s` from the definition: the negated least `r < 0` (among the finitely
/// many relevant cut points, plus one below all of them) admitting a cycle.
pub fn rs(c: &InstantonComplex, tau: Option<&LinearMap>, s: &FiltValue) -> FiltValue {
    let top = -s;
    let levels = band_levels(c);
    let bottom = levels.first().cloned().unwrap_or_default().min(BigRational::zero()) - BigRational::from_integer(1.into());
    if theta_cycle(c, tau, &FiltValue::Finite(bottom), &top) {
        return FiltValue::PosInf;
    }
    let mut best = FiltValue::NegInf;
    for l in levels.iter().filter(|l| **l < BigRational::zero()) {
        if theta_cycle(c, tau, &FiltValue::Finite(l.clone()), &top) {
            let v = FiltValue::Finite(-l);
            if v > best {
                best = v;
            }
        }
    }
    best
}

/// Values of `s` worth sampling: the negated positive band levels, 0,
/// points between them and `-inf`.
pub fn sample_s(c: &InstantonComplex) -> Vec<FiltValue> {
    let mut cuts: Vec<BigRational> = band_levels(c).into_iter().filter(|l| *l > BigRational::zero()).map(|l| -l).collect();
    cuts.push(BigRational::zero());
    cuts.sort();
    cuts.dedup();
    let mut out = vec![FiltValue::NegInf];
    let mut prev: Option<BigRational> = None;
    for c in cuts {
        match &prev {
            Some(p) => out.push(FiltValue::Finite((p + &c) / BigRational::from_integer(2.into()))),
            None => out.push(FiltValue::Finite(&c - q(1, 3))),
        }
        out.push(FiltValue::Finite(c.clone()));
        prev = Some(c);
    }
    out
}

/// Whether `v` is a negated lattice level of `c`.
pub fn in_negated_levels(c: &InstantonComplex, v: &BigRational) -> bool {
    c.gens.iter().any(|g| (-v - &g.deg_i).is_integer())
}
