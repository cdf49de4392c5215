//! Exhaustive search for θ-supported cycles in one small finite window.

use anyhow::bail;

use corkcalc_core::gf2::BitVec;
use corkcalc_core::rs::find_theta_cycle;
use corkcalc_core::window::truncate_involutive;
use corkcalc_core::{Error, FiltValue, InvolutiveComplex};

pub const MAX_POINTS: usize = 20;

pub struct OracleReport {
    pub points: usize,
    pub engine: bool,
    pub brute: bool,
}

fn subsets(idx: &[usize], len: usize) -> impl Iterator<Item = BitVec> + '_ {
    (0u64..1 << idx.len()).map(move |mask| {
        BitVec::from_indices(len, idx.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &i)| i))
    })
}

pub fn cross_check(c: &InvolutiveComplex, r: &FiltValue, s: &FiltValue, involutive: bool) -> anyhow::Result<OracleReport> {
    let w = truncate_involutive(c, r, s)?;
    if w.len() > MAX_POINTS {
        bail!(Error::Argument(format!(
            "window has {} lattice points; the oracle handles at most {MAX_POINTS}",
            w.len()
        )));
    }
    let cx = &c.complex;
    let engine = find_theta_cycle(cx, Some(&c.tau), r, s, involutive)?.is_some();
    let brute = match w.position(cx.theta(), 0) {
        None => false,
        Some(tp) => {
            let g = w.gradings[tp];
            let zs: Vec<usize> = (0..w.len()).filter(|&i| w.gradings[i] == g).collect();
            let bs: Vec<usize> = (0..w.len()).filter(|&i| w.gradings[i] == g + 1).collect();
            let tau = w.tau.as_ref().expect("involutive window");
            let images: Vec<BitVec> = subsets(&bs, w.len()).map(|b| w.diff.apply(&b)).collect();
            let found = subsets(&zs, w.len()).any(|z| {
                if !z.get(tp) || !w.diff.apply(&z).is_zero() {
                    return false;
                }
                if !involutive {
                    return true;
                }
                let mut t = tau.apply(&z);
                t.xor_assign(&z);
                images.contains(&t)
            });
            found
        }
    };
    Ok(OracleReport {
        points: w.len(),
        engine,
        brute,
    })
}
