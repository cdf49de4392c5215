//! Tensor products, duals, the connected-sum inequality and the replay of
//! the linear-independence argument for sequences of involutive complexes.

use num_rational::BigRational;
use num_traits::Zero;

use crate::complex::{Chain, Flavor, Generator, InstantonComplex, LinearMap};
use crate::error::{Error, Result};
use crate::filt::FiltValue;
use crate::involutive::InvolutiveComplex;
use crate::rs::rs_value;

/// A tensor product together with the factor indices of each generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    pub complex: InvolutiveComplex,
    pub factors: Vec<(usize, usize)>,
}

fn pair_id(a: &Generator, b: &Generator) -> String {
    if a.is_theta && b.is_theta {
        return "theta".into();
    }
    let wrap = |id: &str| if id.contains('⊗') { format!("({id})") } else { id.to_string() };
    format!("{}⊗{}", wrap(&a.id), wrap(&b.id))
}

/// `f ⊗ g` on the product basis `i * nb + j`.
pub fn tensor_maps(f: &LinearMap, g: &LinearMap, nb: usize) -> LinearMap {
    let mut out = LinearMap::zero(f.shift + g.shift);
    for (i, i2, k1) in f.entries() {
        for (j, j2, k2) in g.entries() {
            out.toggle_raw(i * nb + j, i2 * nb + j2, k1 + k2);
        }
    }
    out
}

/// Tensor of two plain complexes with a `[3]` grading shift.
pub fn tensor_complexes(a: &InstantonComplex, b: &InstantonComplex) -> Result<(InstantonComplex, Vec<(usize, usize)>)> {
    if a.flavor != Flavor::D2 || b.flavor != Flavor::D2 {
        return Err(Error::Flavor(format!("tensor products need two D2 complexes, got {} and {}", a.flavor, b.flavor)));
    }
    let nb = b.len();
    let mut gens = Vec::with_capacity(a.len() * nb);
    let mut factors = Vec::with_capacity(a.len() * nb);
    for (i, ga) in a.gens.iter().enumerate() {
        for (j, gb) in b.gens.iter().enumerate() {
            let mut g = Generator::new(pair_id(ga, gb), ga.deg_z + gb.deg_z + 3, &ga.deg_i + &gb.deg_i);
            g.is_theta = ga.is_theta && gb.is_theta;
            gens.push(g);
            factors.push((i, j));
        }
    }
    let d = tensor_maps(&a.diff, &LinearMap::identity(&b.gens), nb)
        .add(&tensor_maps(&LinearMap::identity(&a.gens), &b.diff, nb));
    Ok((InstantonComplex::new(Flavor::D2, gens, d)?, factors))
}

/// Tensor product of involutive complexes: `τ = τ_a ⊗ τ_b`, level
/// `δ_a + δ_b`. The homotopy is `H_a ⊗ τ_b² + id ⊗ H_b`, falling back to
/// a solved witness if that one exceeds the level.
pub fn tensor(a: &InvolutiveComplex, b: &InvolutiveComplex) -> Result<Tensor> {
    let (c, factors) = tensor_complexes(&a.complex, &b.complex)?;
    let nb = b.gens().len();
    let tau = tensor_maps(&a.tau, &b.tau, nb);
    let level = &a.level + &b.level;
    let (wa, wb) = (a.with_witness()?, b.with_witness()?);
    let (ha, hb) = (wa.h_witness.unwrap(), wb.h_witness.unwrap());
    let h = tensor_maps(&ha, &b.tau.then(&b.tau), nb).add(&tensor_maps(&LinearMap::identity(a.gens()), &hb, nb));
    let mut out = InvolutiveComplex::from_parts(c, tau, level, Some(h))?;
    if !out.validate().passed() {
        out.h_witness = None;
        out = out.with_witness()?;
    }
    out.validate().into_result()?;
    Ok(Tensor { complex: out, factors })
}

/// Tensor of a list, left to right; the empty product is the trivial complex.
pub fn tensor_all(items: &[&InvolutiveComplex]) -> Result<InvolutiveComplex> {
    let mut acc = InvolutiveComplex::trivial();
    for c in items {
        acc = tensor(&acc, c)?.complex;
    }
    Ok(acc)
}

/// `z ⊗ z'` in the product basis.
pub fn tensor_chain(z: &Chain, z2: &Chain, nb: usize) -> Chain {
    let mut out = Chain::zero();
    for &(g, k) in z.terms() {
        for &(h, m) in z2.terms() {
            out.toggle(g * nb + h, k + m);
        }
    }
    out
}

fn dual_id(id: &str) -> String {
    match id.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{id}*"),
    }
}

/// Dual complex: `deg_z(g*) = -deg_z(g) - 3`, `deg_i(g*) = -deg_i(g)`,
/// transposed differential, flavor flipped.
pub fn dualize_complex(c: &InstantonComplex) -> Result<InstantonComplex> {
    let gens = c
        .gens
        .iter()
        .map(|g| {
            let mut d = Generator::new(if g.is_theta { g.id.clone() } else { dual_id(&g.id) }, -g.deg_z - 3, -&g.deg_i);
            d.is_theta = g.is_theta;
            d
        })
        .collect();
    InstantonComplex::new(c.flavor.flip(), gens, c.diff.transpose())
}

pub fn dualize(c: &InvolutiveComplex) -> Result<InvolutiveComplex> {
    let d = dualize_complex(&c.complex)?;
    InvolutiveComplex::new(d, c.tau.transpose(), c.level.clone(), c.h_witness.as_ref().map(LinearMap::transpose))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectedSumReport {
    pub s: BigRational,
    pub s2: BigRational,
    pub r_a: FiltValue,
    pub r_b: FiltValue,
    pub r_ab: FiltValue,
    pub bound: FiltValue,
    pub holds: bool,
}

/// `r_{s+s'}(a ⊗ b) ≥ min{r_s(a) + s', r_{s'}(b) + s}` for involutive values.
pub fn check_connected_sum_inequality(
    a: &InvolutiveComplex,
    b: &InvolutiveComplex,
    s: &BigRational,
    s2: &BigRational,
) -> Result<ConnectedSumReport> {
    if s > &BigRational::zero() || s2 > &BigRational::zero() {
        return Err(Error::Domain("s and s' must be nonpositive".into()));
    }
    let t = tensor(a, b)?.complex;
    let (fs, fs2) = (FiltValue::Finite(s.clone()), FiltValue::Finite(s2.clone()));
    let r_a = rs_value(&a.complex, Some(&a.tau), &fs)?.value;
    let r_b = rs_value(&b.complex, Some(&b.tau), &fs2)?.value;
    let r_ab = rs_value(&t.complex, Some(&t.tau), &(&fs + &fs2))?.value;
    let bound = (&r_a + &fs2).min(&r_b + &fs);
    Ok(ConnectedSumReport {
        s: s.clone(),
        s2: s2.clone(),
        holds: r_ab >= bound,
        r_a,
        r_b,
        r_ab,
        bound,
    })
}

/// One member `(Y_i, τ_i)` of a sequence, with independent data for the
/// reversed orientation.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub name: String,
    pub forward: InvolutiveComplex,
    pub reversed: Option<InvolutiveComplex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinationVerdict {
    pub coefficients: Vec<i64>,
    /// Index of the top nonzero coefficient after normalizing it positive.
    pub top: Option<usize>,
    pub r0_forward: Vec<FiltValue>,
    pub r0_reversed: Vec<FiltValue>,
    pub hypotheses: Vec<(String, bool)>,
    /// Lower bound on `r_0` of the rearranged side from the connected-sum
    /// inequality.
    pub bound: Option<FiltValue>,
    /// `r_0` of the rearranged side, computed directly when small enough.
    pub rearranged_r0: Option<FiltValue>,
    /// `r_0` of the whole combination, computed directly when small enough.
    pub combination_r0: Option<FiltValue>,
    pub obstruction: bool,
    pub log: Vec<String>,
}

/// Largest tensor product (in generators) that is formed explicitly.
pub const DIRECT_LIMIT: usize = 512;

fn r0(c: &InvolutiveComplex) -> Result<FiltValue> {
    Ok(rs_value(&c.complex, Some(&c.tau), &FiltValue::zero())?.value)
}

fn direct_r0(copies: &[&InvolutiveComplex]) -> Result<Option<FiltValue>> {
    let size: usize = copies.iter().map(|c| c.gens().len()).product();
    if size > DIRECT_LIMIT {
        return Ok(None);
    }
    Ok(Some(r0(&tensor_all(copies)?)?))
}

/// Replay the argument that a nontrivial combination `Σ n_i Y_i` of a
/// sequence with strictly decreasing finite `r_0` and reversed complexes of
/// `r_0 = ∞` cannot be locally trivial.
pub fn linear_combination_witness(family: &[FamilyMember], coefficients: &[i64]) -> Result<CombinationVerdict> {
    if family.len() != coefficients.len() {
        return Err(Error::Argument(format!(
            "{} coefficients for {} family members",
            coefficients.len(),
            family.len()
        )));
    }
    let mut reversed = Vec::new();
    for m in family {
        reversed.push(
            m.reversed
                .as_ref()
                .ok_or_else(|| Error::Argument(format!("{}: missing reversed orientation data", m.name)))?,
        );
    }
    let r0_forward = family.iter().map(|m| r0(&m.forward)).collect::<Result<Vec<_>>>()?;
    let r0_reversed = reversed.iter().map(|c| r0(c)).collect::<Result<Vec<_>>>()?;
    let mut log = Vec::new();
    let hypotheses = vec![
        ("r0(Y_i) strictly decreasing".to_string(), r0_forward.windows(2).all(|w| w[0] > w[1])),
        ("r0(Y_1) finite".to_string(), r0_forward.first().is_some_and(FiltValue::is_finite)),
        ("r0(-Y_i) = inf for all i".to_string(), r0_reversed.iter().all(|v| *v == FiltValue::PosInf)),
    ];
    for (i, m) in family.iter().enumerate() {
        log.push(format!("r0({}) = {}, r0(-{}) = {}", m.name, r0_forward[i], m.name, r0_reversed[i]));
    }

    let mut verdict = CombinationVerdict {
        coefficients: coefficients.to_vec(),
        top: None,
        r0_forward,
        r0_reversed,
        hypotheses,
        bound: None,
        rearranged_r0: None,
        combination_r0: None,
        obstruction: false,
        log,
    };
    let Some(k) = coefficients.iter().rposition(|&n| n != 0) else {
        verdict.log.push("all coefficients vanish: nothing to obstruct".into());
        verdict.combination_r0 = Some(FiltValue::PosInf);
        return Ok(verdict);
    };
    let mut n = coefficients.to_vec();
    if n[k] < 0 {
        n.iter_mut().for_each(|x| *x = -*x);
        verdict.log.push("top coefficient negative: negating the combination".into());
    }
    verdict.top = Some(k);

    let copies = |i: usize, count: i64, sign: i64| -> Vec<(&InvolutiveComplex, String, FiltValue)> {
        let (c, name, v) = if sign > 0 {
            (&family[i].forward, family[i].name.clone(), verdict.r0_forward[i].clone())
        } else {
            (reversed[i], format!("-{}", family[i].name), verdict.r0_reversed[i].clone())
        };
        (0..count).map(|_| (c, name.clone(), v.clone())).collect()
    };
    let mut combo = Vec::new();
    for (i, &ni) in n.iter().enumerate() {
        combo.extend(copies(i, ni.abs(), ni.signum()));
    }
    // Y_k = -Σ_{i<k} n_i Y_i - (n_k - 1) Y_k
    let mut rhs = Vec::new();
    for (i, &ni) in n.iter().enumerate().take(k) {
        rhs.extend(copies(i, ni.abs(), -ni.signum()));
    }
    rhs.extend(copies(k, n[k] - 1, -1));
    let terms: Vec<String> = rhs.iter().map(|(_, name, _)| name.clone()).collect();
    verdict.log.push(format!(
        "{} = {}",
        family[k].name,
        if terms.is_empty() { "0".to_string() } else { terms.join(" + ") }
    ));

    let mut bound = FiltValue::PosInf;
    let mut acc_name = "0".to_string();
    for (_, name, v) in &rhs {
        let next = bound.clone().min(v.clone());
        verdict.log.push(format!(
            "r0({acc_name} + {name}) >= min{{r0({acc_name}) + 0, r0({name}) + 0}} >= min{{{bound}, {v}}} = {next}"
        ));
        bound = next;
        acc_name = if acc_name == "0" { name.clone() } else { format!("{acc_name} + {name}") };
    }
    let lhs = verdict.r0_forward[k].clone();
    verdict.obstruction = lhs.is_finite() && bound > lhs;
    verdict.log.push(if verdict.obstruction {
        format!(
            "r0({}) = {lhs} < {bound} <= r0(right-hand side): the two sides differ, so the combination is not locally trivial",
            family[k].name
        )
    } else {
        format!("r0({}) = {lhs}, bound {bound}: no contradiction", family[k].name)
    });
    verdict.bound = Some(bound);

    let rhs_refs: Vec<&InvolutiveComplex> = rhs.iter().map(|(c, _, _)| *c).collect();
    verdict.rearranged_r0 = direct_r0(&rhs_refs)?;
    let combo_refs: Vec<&InvolutiveComplex> = combo.iter().map(|(c, _, _)| *c).collect();
    verdict.combination_r0 = direct_r0(&combo_refs)?;
    if let Some(v) = &verdict.rearranged_r0 {
        verdict.log.push(format!("direct: r0(right-hand side) = {v}"));
    }
    if let Some(v) = &verdict.combination_r0 {
        verdict.log.push(format!("direct: r0(combination) = {v}"));
    }
    Ok(verdict)
}
