//! End-to-end acceptance run. One line per criterion; exits nonzero if any
//! criterion fails or overruns its time budget.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use corkcalc_core::algebra::{
    check_connected_sum_inequality, dualize, linear_combination_witness, tensor, FamilyMember,
};
use corkcalc_core::catalog::{
    self, build_akbulut, build_akbulut_reversed, build_fig31, build_fig41, random_complex, Akbulut, AkbulutLevels,
    AkbulutReversed, AkbulutReversedLevels, Fig31, Fig41, RandomSpec,
};
use corkcalc_core::enriched::{enriched_rs, EnrichedComplex};
use corkcalc_core::filt::q;
use corkcalc_core::gf2::BitVec;
use corkcalc_core::morphism::{find_local_map, push_obstruction, MorphismWitness};
use corkcalc_core::rs::{find_theta_cycle, local_triviality, rs_function, rs_value, s_breakpoints, StepFunction, StepPiece};
use corkcalc_core::window::truncate_involutive;
use corkcalc_core::{Chain, Flavor, FiltValue, InvolutiveComplex};
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fin(v: BigRational) -> FiltValue {
    FiltValue::Finite(v)
}

fn neg(v: &BigRational) -> FiltValue {
    FiltValue::Finite(-v)
}

/// Uniform fraction `n/d` in `(lo, hi]` with a random small denominator.
fn frac(rng: &mut ChaCha8Rng, lo: i64, hi: i64, open_hi: bool) -> BigRational {
    let d = *[2i64, 3, 4, 5, 6, 7, 8, 12].choose(rng).unwrap();
    let top = if open_hi { hi * d - 1 } else { hi * d };
    q(rng.gen_range(lo * d + 1..=top), d)
}

fn step(pieces: &[(FiltValue, FiltValue, FiltValue)]) -> StepFunction {
    StepFunction {
        pieces: pieces
            .iter()
            .map(|(lo, hi, value)| StepPiece {
                lo: lo.clone(),
                hi: hi.clone(),
                value: value.clone(),
            })
            .collect(),
    }
}

fn jump(alpha: &BigRational, low: FiltValue, high: FiltValue) -> StepFunction {
    step(&[
        (FiltValue::NegInf, neg(alpha), low),
        (neg(alpha), FiltValue::zero(), high),
    ])
}

fn spec(max_gens: usize) -> RandomSpec {
    RandomSpec {
        max_gens,
        flavor: Flavor::D2,
        involutive: true,
    }
}

fn catalog_complexes() -> Vec<(String, InvolutiveComplex)> {
    catalog::list()
        .into_iter()
        .map(|e| (e.name.to_string(), catalog::emit(e.name, &BTreeMap::new()).unwrap()))
        .collect()
}

fn r0(c: &InvolutiveComplex) -> FiltValue {
    rs_value(&c.complex, Some(&c.tau), &FiltValue::zero()).unwrap().value
}

/// Complexes exercised by criteria 1–4, re-examined by 5 and 6.
#[derive(Default)]
struct Pool(Vec<InvolutiveComplex>);

fn fig31_suite(pool: &mut Pool) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut draws = vec![(q(-1, 2), q(1, 3), q(-1, 4))];
    for _ in 0..20 {
        let beta = frac(&mut rng, -2, 0, true);
        let alpha = frac(&mut rng, 0, 2, true);
        let extra = loop {
            let e = frac(&mut rng, -2, 0, false);
            if e > beta {
                break e;
            }
        };
        draws.push((beta, alpha, extra));
    }
    let inf = FiltValue::PosInf;
    for (beta, alpha, extra) in &draws {
        for v in [Fig31::A, Fig31::B, Fig31::C, Fig31::D] {
            let c = build_fig31(v, beta, alpha, extra).map_err(|e| e.to_string())?;
            let expect = match v {
                Fig31::A | Fig31::C => StepFunction::constant(inf.clone()),
                Fig31::B => StepFunction::constant(neg(beta)),
                Fig31::D => jump(alpha, inf.clone(), neg(beta)),
            };
            let got = rs_function(&c, None).map_err(|e| e.to_string())?;
            ensure(got == expect, || {
                format!("{v:?} at beta={beta}, alpha={alpha}, extra={extra}: got {}", got.to_tsv())
            })?;
            pool.0.push(InvolutiveComplex::identity(c));
        }
    }
    Ok(format!("{} parameter sets x 4 variants exact", draws.len()))
}

fn fig41_suite(pool: &mut Pool) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut draws = vec![(q(-3, 4), q(1, 2), q(-1, 4))];
    for _ in 0..20 {
        let beta = frac(&mut rng, -2, 0, true);
        let alpha = frac(&mut rng, 0, 2, true);
        let mid = loop {
            let m = frac(&mut rng, -2, 0, false);
            if m > beta {
                break m;
            }
        };
        draws.push((beta, alpha, mid));
    }
    for (beta, alpha, mid) in &draws {
        for v in [Fig41::A, Fig41::B, Fig41::C] {
            let c = build_fig41(v, beta, alpha, mid).map_err(|e| e.to_string())?;
            let plain = rs_function(&c.complex, None).map_err(|e| e.to_string())?;
            ensure(plain == StepFunction::constant(FiltValue::PosInf), || {
                format!("{v:?}: plain r_s not identically inf: {}", plain.to_tsv())
            })?;
            let expect = match v {
                Fig41::C => jump(alpha, FiltValue::PosInf, neg(beta)),
                _ => StepFunction::constant(neg(beta)),
            };
            let got = rs_function(&c.complex, Some(&c.tau)).map_err(|e| e.to_string())?;
            ensure(got == expect, || {
                format!("{v:?} at beta={beta}, alpha={alpha}, mid={mid}: got {}", got.to_tsv())
            })?;
            pool.0.push(c);
        }
    }
    Ok(format!("{} parameter sets x 3 variants exact", draws.len()))
}

fn oracle_equivalence(pool: &mut Pool) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut windows = 0;
    let mut cycles = [0usize; 2];
    for seed in 0..500u64 {
        let c = random_complex(10_000 + seed, &spec(10)).map_err(|e| e.to_string())?;
        ensure(c.validate().passed(), || format!("seed {seed}: invalid complex"))?;
        for _ in 0..5 {
            let r = q(rng.gen_range(-36..=0), 12);
            let mut width = rng.gen_range(1..=36i64);
            let (r, s) = loop {
                let s = &r + q(width, 12);
                let w = truncate_involutive(&c, &fin(r.clone()), &fin(s.clone())).map_err(|e| e.to_string())?;
                if w.len() <= 16 {
                    break (fin(r.clone()), fin(s));
                }
                width = (width / 2).max(1);
            };
            windows += 1;
            for eq in [false, true] {
                let engine = find_theta_cycle(&c.complex, Some(&c.tau), &r, &s, eq).map_err(|e| e.to_string())?.is_some();
                let brute = common::theta_cycle(&c.complex, eq.then_some(&c.tau), &r, &s);
                ensure(engine == brute, || {
                    format!("seed {seed}, ({r}, {s}], equivariant {eq}: engine {engine}, enumeration {brute}")
                })?;
                cycles[eq as usize] += engine as usize;
            }
        }
        pool.0.push(c);
    }
    Ok(format!(
        "{windows} windows, 0 discrepancies ({} plain and {} equivariant cycles)",
        cycles[0], cycles[1]
    ))
}

fn connected_sums(pool: &mut Pool) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let vals = [q(-1, 1), q(-1, 2), q(-1, 4), q(0, 1)];
    let mut finite = 0;
    for i in 0..200u64 {
        let a = random_complex(20_000 + 2 * i, &spec(5)).map_err(|e| e.to_string())?;
        let b = random_complex(20_001 + 2 * i, &spec(5)).map_err(|e| e.to_string())?;
        let (s, s2) = (vals.choose(&mut rng).unwrap(), vals.choose(&mut rng).unwrap());
        let rep = check_connected_sum_inequality(&a, &b, s, s2).map_err(|e| e.to_string())?;
        ensure(rep.holds, || format!("pair {i}: {rep:?}"))?;
        finite += rep.r_ab.is_finite() as usize;
        pool.0.push(a);
        pool.0.push(b);
    }
    Ok(format!("200 pairs, 0 violations ({finite} with finite r_(s+s'))"))
}

fn monotone_and_ranged(pool: &mut Pool) -> Outcome {
    for (i, c) in pool.0.iter().enumerate() {
        for tau in [None, Some(&c.tau)] {
            let f = rs_function(&c.complex, tau).map_err(|e| e.to_string())?;
            ensure(f.is_nonincreasing(), || format!("complex {i}: not nonincreasing: {}", f.to_tsv()))?;
            for p in &f.pieces {
                if let Some(v) = p.value.finite() {
                    ensure(common::in_negated_levels(&c.complex, v), || {
                        format!("complex {i}: value {v} is not a negated level")
                    })?;
                }
            }
        }
    }
    Ok(format!("{} complexes, both modes", pool.0.len()))
}

fn comparison(pool: &mut Pool) -> Outcome {
    let mut points = 0;
    for (i, c) in pool.0.iter().enumerate() {
        let plain = rs_function(&c.complex, None).map_err(|e| e.to_string())?;
        let inv = rs_function(&c.complex, Some(&c.tau)).map_err(|e| e.to_string())?;
        let mut ss = s_breakpoints(&c.complex);
        ss.extend(plain.breakpoints());
        ss.extend(inv.breakpoints());
        ss.push(FiltValue::NegInf);
        for s in ss {
            let (a, b) = (inv.eval(&s), plain.eval(&s));
            ensure(a.is_some() && a <= b, || format!("complex {i} at {s}: involutive {a:?} > plain {b:?}"))?;
            points += 1;
        }
    }
    Ok(format!("{} complexes, {points} breakpoints", pool.0.len()))
}

fn functoriality(_: &mut Pool) -> Outcome {
    let mut complexes: Vec<InvolutiveComplex> = catalog_complexes().into_iter().map(|(_, c)| c).collect();
    let n_catalog = complexes.len();
    for seed in 0..100u64 {
        complexes.push(random_complex(30_000 + seed, &spec(5)).map_err(|e| e.to_string())?);
    }
    let ss = [q(0, 1), q(-1, 8), q(-1, 4), q(-1, 2), q(-1, 1)]
        .into_iter()
        .map(FiltValue::Finite)
        .chain([FiltValue::NegInf])
        .collect::<Vec<_>>();
    let deltas = [q(0, 1), q(1, 4), q(1, 2)].map(FiltValue::Finite);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..n_catalog {
        for j in 0..n_catalog {
            pairs.push((i, j));
        }
    }
    for i in 0..100 {
        pairs.push((n_catalog + i, n_catalog + (i + 1) % 100));
        pairs.push((n_catalog + i, i % n_catalog));
    }
    let mut found = 0;
    for &(i, j) in &pairs {
        let (a, b) = (&complexes[i], &complexes[j]);
        for delta in &deltas {
            for eq in [false, true] {
                let Some(_) = find_local_map(a, b, delta, eq).map_err(|e| e.to_string())? else {
                    continue;
                };
                found += 1;
                let tau = |c: &InvolutiveComplex| eq.then(|| c.tau.clone());
                for s in &ss {
                    let lhs = &rs_value(&a.complex, tau(a).as_ref(), s).unwrap().value - delta;
                    let shifted = s - delta;
                    let rhs = rs_value(&b.complex, tau(b).as_ref(), &shifted).unwrap().value;
                    ensure(lhs <= rhs, || format!("pair ({i}, {j}), level {delta}, eq {eq}, s {s}: {lhs} > {rhs}"))?;
                }
            }
        }
    }
    let trivial = InvolutiveComplex::trivial();
    for (i, c) in complexes.iter().enumerate() {
        let unit = find_local_map(&trivial, c, &FiltValue::zero(), true).map_err(|e| e.to_string())?.is_some();
        ensure(unit == (r0(c) == FiltValue::PosInf), || format!("complex {i}: unit map {unit}, r0 {}", r0(c)))?;
    }
    Ok(format!(
        "{} pairs, {found} local maps checked; unit criterion on {} complexes",
        pairs.len(),
        complexes.len()
    ))
}

fn akbulut(_: &mut Pool) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let mut forward = vec![AkbulutLevels::default()];
    let mut reversed = vec![AkbulutReversedLevels::default()];
    for _ in 0..10 {
        let beta = frac(&mut rng, -2, 0, true);
        let alpha1 = loop {
            let a = frac(&mut rng, -2, 0, true);
            if a >= beta {
                break a;
            }
        };
        let mut alpha = [alpha1, q(0, 1), q(0, 1), q(0, 1)];
        for a in alpha.iter_mut().skip(1) {
            *a = frac(&mut rng, -2, 0, true);
        }
        forward.push(AkbulutLevels { beta, alpha });
        let beta = frac(&mut rng, -2, 0, false);
        let alpha1 = loop {
            let a = frac(&mut rng, -2, 0, false);
            if a <= beta {
                break a;
            }
        };
        reversed.push(AkbulutReversedLevels {
            alpha1,
            beta,
            alpha: [frac(&mut rng, -2, 0, false), frac(&mut rng, -2, 0, false), frac(&mut rng, -2, 0, false)],
        });
    }
    for levels in &forward {
        for (v, corr) in [
            (Akbulut::Alpha(2), &levels.alpha[1]),
            (Akbulut::Alpha(3), &levels.alpha[2]),
            (Akbulut::Alpha(4), &levels.alpha[3]),
            (Akbulut::Beta, &levels.beta),
        ] {
            let c = build_akbulut(v, levels).map_err(|e| e.to_string())?;
            let lt = local_triviality(&c).map_err(|e| e.to_string())?;
            ensure(!lt.trivial && lt.r0 == neg(corr), || format!("{v:?} {levels:?}: {lt:?}"))?;
            let plain = rs_function(&c.complex, None).map_err(|e| e.to_string())?;
            ensure(plain == StepFunction::constant(FiltValue::PosInf), || {
                format!("{v:?} {levels:?}: plain r_s {}", plain.to_tsv())
            })?;
        }
    }
    for levels in &reversed {
        for v in [AkbulutReversed::Fixed, AkbulutReversed::Corrected] {
            let c = build_akbulut_reversed(v, levels).map_err(|e| e.to_string())?;
            let lt = local_triviality(&c).map_err(|e| e.to_string())?;
            ensure(lt.trivial && lt.local_map.is_some(), || format!("{v:?} {levels:?}: {lt:?}"))?;
        }
    }
    Ok(format!("{} level sets for Y, {} for -Y", forward.len(), reversed.len()))
}

fn random_chain(rng: &mut ChaCha8Rng, c: &InvolutiveComplex, grading: i64) -> Chain {
    let pts: Vec<(usize, i64)> = c
        .gens()
        .iter()
        .enumerate()
        .filter_map(|(i, g)| {
            let d = grading - g.deg_z;
            (d.rem_euclid(8) == 0).then(|| (i, d.div_euclid(8)))
        })
        .flat_map(|(i, k)| [(i, k - 1), (i, k), (i, k + 1)])
        .collect();
    Chain::from_terms(pts.into_iter().filter(|_| rng.gen_bool(0.5)))
}

fn push_bookkeeping(_: &mut Pool) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    let mut instances = 0;
    let mut cross = 0;
    let mut seed = 40_000u64;
    while instances < 100 {
        let src = random_complex(seed, &spec(6)).map_err(|e| e.to_string())?;
        let tgt = random_complex(seed + 1, &spec(6)).map_err(|e| e.to_string())?;
        seed += 2;
        let (tgt, witness) = match find_local_map(&src, &tgt, &fin(q(1, 2)), true).map_err(|e| e.to_string())? {
            Some(w) => {
                cross += 1;
                (tgt, w)
            }
            None => (src.clone(), MorphismWitness::identity(&src.complex)),
        };
        let z = random_chain(&mut rng, &src, src.complex.gens[src.complex.theta()].deg_z);
        let h = random_chain(&mut rng, &src, src.complex.gens[src.complex.theta()].deg_z + 1);
        let xi = src.complex.d(&h).add(&z).add(&src.tau.apply(&z));
        let res = push_obstruction(&z, &h, &xi, &src, &tgt, &witness).map_err(|e| e.to_string())?;
        ensure(res.identity_check && res.xi_bound && res.dz_bound, || {
            format!("seed {seed}: identity {}, xi bound {}, dz bound {}", res.identity_check, res.xi_bound, res.dz_bound)
        })?;
        instances += 1;
    }
    Ok(format!("{instances} instances ({cross} through a searched morphism)"))
}

fn sequence_replay(_: &mut Pool) -> Outcome {
    let zero = q(0, 1);
    let family: Vec<FamilyMember> = [(-3, 4), (-1, 2), (-1, 4)]
        .into_iter()
        .enumerate()
        .map(|(i, (n, d))| {
            let forward = build_fig41(Fig41::A, &q(n, d), &q(1, 2), &zero).unwrap();
            let reversed = build_fig31(Fig31::C, &q(n, d), &q(1, 2), &zero).unwrap();
            FamilyMember {
                name: format!("Y{}", i + 1),
                forward,
                reversed: Some(InvolutiveComplex::identity(reversed)),
            }
        })
        .collect();
    let mut checked = 0;
    let mut direct = 0;
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            for c in -2i64..=2 {
                let n = [a, b, c];
                let Some(top) = n.iter().rposition(|&x| x != 0) else { continue };
                if n[top] < 0 {
                    continue;
                }
                let v = linear_combination_witness(&family, &n).map_err(|e| e.to_string())?;
                ensure(v.hypotheses.iter().all(|(_, ok)| *ok), || format!("{n:?}: hypotheses {:?}", v.hypotheses))?;
                ensure(v.obstruction && v.top == Some(top), || format!("{n:?}: no obstruction\n{}", v.log.join("\n")))?;
                let steps = v.log.iter().filter(|l| l.contains(">= min{")).count();
                let expected_steps: i64 = n[..top].iter().map(|x| x.abs()).sum::<i64>() + n[top] - 1;
                ensure(steps as i64 == expected_steps, || format!("{n:?}: {steps} inequality steps logged"))?;
                ensure(v.log.iter().any(|l| l.contains("not locally trivial")), || format!("{n:?}: conclusion missing"))?;
                if let Some(r) = &v.combination_r0 {
                    ensure(r.is_finite(), || format!("{n:?}: direct r0 of the combination is {r}"))?;
                    direct += 1;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} combinations obstructed ({direct} confirmed directly)"))
}

/// Whether `perm` (index in `x` to index in `y`) is an isomorphism of
/// graded complexes carrying τ.
fn relabels(x: &InvolutiveComplex, y: &InvolutiveComplex, perm: &[usize]) -> bool {
    let (gx, gy) = (x.gens(), y.gens());
    gx.len() == gy.len()
        && gx.iter().enumerate().all(|(i, g)| {
            let h = &gy[perm[i]];
            g.deg_z == h.deg_z && g.deg_i == h.deg_i && g.is_theta == h.is_theta
        })
        && x.complex.diff.reindex(perm, perm) == y.complex.diff
        && x.tau.reindex(perm, perm) == y.tau
}

fn index_of(factors: &[(usize, usize)]) -> BTreeMap<(usize, usize), usize> {
    factors.iter().enumerate().map(|(t, &p)| (p, t)).collect()
}

fn tensor_algebra(_: &mut Pool) -> Outcome {
    let cat = catalog_complexes();
    let trivial = InvolutiveComplex::trivial();
    for (name, c) in &cat {
        let d = dualize(c).map_err(|e| e.to_string())?;
        ensure(d.flavor() == Flavor::D1 && dualize(&d).map_err(|e| e.to_string())? == *c, || {
            format!("{name}: double dual differs")
        })?;
        let right = tensor(c, &trivial).map_err(|e| e.to_string())?;
        let perm: Vec<usize> = right.factors.iter().map(|&(i, _)| i).collect();
        ensure(relabels(&right.complex, c, &perm), || format!("{name} ⊗ 1 is not {name}"))?;
        let left = tensor(&trivial, c).map_err(|e| e.to_string())?;
        let perm: Vec<usize> = left.factors.iter().map(|&(_, j)| j).collect();
        ensure(relabels(&left.complex, c, &perm), || format!("1 ⊗ {name} is not {name}"))?;
    }
    let mut commuted = 0;
    for (i, (na, a)) in cat.iter().enumerate() {
        for (nb, b) in cat.iter().skip(i) {
            let ab = tensor(a, b).map_err(|e| e.to_string())?;
            let ba = tensor(b, a).map_err(|e| e.to_string())?;
            let idx = index_of(&ba.factors);
            let perm: Vec<usize> = ab.factors.iter().map(|&(x, y)| idx[&(y, x)]).collect();
            ensure(relabels(&ab.complex, &ba.complex, &perm), || format!("{na} ⊗ {nb} vs {nb} ⊗ {na}"))?;
            commuted += 1;
        }
    }
    let small: Vec<&(String, InvolutiveComplex)> =
        cat.iter().filter(|(n, _)| ["fig31b", "fig41a", "fig41c"].contains(&n.as_str())).collect();
    let mut associated = 0;
    for (na, a) in &cat {
        for (nb, b) in small.iter().map(|p| (&p.0, &p.1)) {
            for (nc, c) in small.iter().map(|p| (&p.0, &p.1)) {
                let ab = tensor(a, b).map_err(|e| e.to_string())?;
                let ab_c = tensor(&ab.complex, c).map_err(|e| e.to_string())?;
                let bc = tensor(b, c).map_err(|e| e.to_string())?;
                let a_bc = tensor(a, &bc.complex).map_err(|e| e.to_string())?;
                let idx_bc = index_of(&bc.factors);
                let idx = index_of(&a_bc.factors);
                let perm: Vec<usize> = ab_c
                    .factors
                    .iter()
                    .map(|&(p, k)| {
                        let (i, j) = ab.factors[p];
                        idx[&(i, idx_bc[&(j, k)])]
                    })
                    .collect();
                ensure(relabels(&ab_c.complex, &a_bc.complex, &perm), || {
                    format!("({na} ⊗ {nb}) ⊗ {nc} vs {na} ⊗ ({nb} ⊗ {nc})")
                })?;
                associated += 1;
            }
        }
    }
    let windows = windows_of_tensors()?;
    Ok(format!(
        "{} catalog complexes; {commuted} commuted pairs, {associated} associated triples, {windows} tensor windows",
        cat.len()
    ))
}

/// Window of `A ⊗ B` against the product structure computed from large
/// windows of the factors.
fn windows_of_tensors() -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let big = (fin(q(-12, 1)), fin(q(12, 1)));
    for case in 0..50u64 {
        let a = random_complex(50_000 + 2 * case, &spec(4)).map_err(|e| e.to_string())?;
        let b = random_complex(50_001 + 2 * case, &spec(4)).map_err(|e| e.to_string())?;
        let t = tensor(&a, &b).map_err(|e| e.to_string())?;
        let idx = index_of(&t.factors);
        let r = q(rng.gen_range(-24..0), 12);
        let s = &r + q(rng.gen_range(1..=24), 12);
        let (r, s) = (fin(r), fin(s));
        let w = truncate_involutive(&t.complex, &r, &s).map_err(|e| e.to_string())?;
        let wa = truncate_involutive(&a, &big.0, &big.1).map_err(|e| e.to_string())?;
        let wb = truncate_involutive(&b, &big.0, &big.1).map_err(|e| e.to_string())?;
        let (ta, tb, tw) = (wa.tau.as_ref().unwrap(), wb.tau.as_ref().unwrap(), w.tau.as_ref().unwrap());
        let place = |out: &mut BitVec, g: usize, k: i64| -> Result<(), String> {
            let l = fin(t.complex.gens()[g].level_at(k));
            if l > s {
                return Err(format!("case {case}: image above the window"));
            }
            if l > r {
                out.flip(w.position(g, k).ok_or_else(|| format!("case {case}: point missing from window"))?);
            }
            Ok(())
        };
        for (col, &(g, k)) in w.points.iter().enumerate() {
            let (i, j) = t.factors[g];
            let pa = wa.position(i, k).ok_or("factor window too small")?;
            let pb = wb.position(j, 0).ok_or("factor window too small")?;
            let mut d = BitVec::zeros(w.len());
            for x in wa.diff.cols[pa].ones() {
                let (i2, k2) = wa.points[x];
                place(&mut d, idx[&(i2, j)], k2)?;
            }
            for y in wb.diff.cols[pb].ones() {
                let (j2, m) = wb.points[y];
                place(&mut d, idx[&(i, j2)], k + m)?;
            }
            ensure(d == w.diff.cols[col], || format!("case {case}: differential column {col} differs"))?;
            let mut tv = BitVec::zeros(w.len());
            for x in ta.cols[pa].ones() {
                for y in tb.cols[pb].ones() {
                    let ((i2, k2), (j2, m)) = (wa.points[x], wb.points[y]);
                    place(&mut tv, idx[&(i2, j2)], k2 + m)?;
                }
            }
            ensure(tv == tw.cols[col], || format!("case {case}: τ column {col} differs"))?;
        }
    }
    Ok(50)
}

fn enriched_consistency(_: &mut Pool) -> Outcome {
    let mut compared = 0;
    for (name, c) in catalog_complexes() {
        let e = EnrichedComplex::constant(&c, 2);
        for k in 1..=10 {
            let s = fin(q(-k, 13));
            let got = enriched_rs(&e, &s).map_err(|e| format!("{name} at {s}: {e}"))?;
            let want = rs_value(&c.complex, Some(&c.tau), &s).unwrap().value;
            ensure(!got.critical && got.value == want, || format!("{name} at {s}: {got:?}, single complex {want}"))?;
            compared += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut draws = vec![(q(-3, 4), q(1, 2))];
    for _ in 0..5 {
        draws.push((frac(&mut rng, -2, 0, true), frac(&mut rng, 0, 1, true)));
    }
    let eps = fin(q(1, 1000));
    for (beta, alpha) in &draws {
        let c = build_fig41(Fig41::C, beta, alpha, &q(0, 1)).map_err(|e| e.to_string())?;
        let e = EnrichedComplex::constant(&c, 3);
        let s = neg(alpha);
        let got = enriched_rs(&e, &s).map_err(|e| e.to_string())?;
        let at = |v: FiltValue| rs_value(&c.complex, Some(&c.tau), &v).unwrap().value;
        let (below, above) = (at(&s - &eps), at(&s + &eps));
        ensure(got.critical, || format!("alpha={alpha}: s not flagged critical"))?;
        ensure(got.value == got.left && got.left == below && got.value == at(s.clone()), || {
            format!("alpha={alpha}: value {} left {} vs {below}", got.value, got.left)
        })?;
        ensure(got.right.as_ref() == Some(&above), || format!("alpha={alpha}: right {:?} vs {above}", got.right))?;
    }
    Ok(format!("{compared} noncritical values; {} critical cases", draws.len()))
}

type Criterion = (&'static str, fn(&mut Pool) -> Outcome, Option<Duration>);

fn main() -> ExitCode {
    let secs = |s: u64| Some(Duration::from_secs(s));
    let criteria: [Criterion; 12] = [
        ("r_s graphs of the four basic complexes", fig31_suite, secs(1)),
        ("involutive r_s of the three basic examples", fig41_suite, secs(1)),
        ("θ-cycle search against exhaustive enumeration", oracle_equivalence, secs(120)),
        ("connected-sum inequality", connected_sums, secs(120)),
        ("monotonicity and range", monotone_and_ranged, None),
        ("involutive below plain", comparison, None),
        ("local-map functoriality", functoriality, None),
        ("Akbulut cork complexes", akbulut, secs(5)),
        ("pushing approximate cycles", push_bookkeeping, None),
        ("linear-combination obstruction", sequence_replay, None),
        ("duality and tensor algebra", tensor_algebra, None),
        ("enriched consistency", enriched_consistency, None),
    ];
    let mut pool = Pool::default();
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run(&mut pool);
        let took = start.elapsed();
        let out = match (out, budget) {
            (Ok(_), Some(b)) if took > *b => Err(format!("took {took:.2?}, budget {b:?}")),
            (o, _) => o,
        };
        match out {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{took:.2?}]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
