//! ψ-class intersection numbers on M̄₀,ₙ and the vertex integrals built from them.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{factorial, Rational};
use crate::error::{Error, Result};

/// ∫_{M̄₀,ₙ} ∏ ψᵢ^{kᵢ} = (n−3)!/∏kᵢ! when Σkᵢ = n−3, else 0.
pub fn psi_integral(exps: &[u32]) -> Rational {
    let n = exps.len() as u32;
    if n < 3 {
        return Rational::zero();
    }
    let total: u32 = exps.iter().sum();
    if total != n - 3 {
        return Rational::zero();
    }
    let den = exps.iter().fold(BigInt::one(), |acc, &k| acc * factorial(k));
    Rational::new(factorial(n - 3), den)
}

/// The same numbers from the string equation, without the closed form.
pub fn string_oracle(exps: &[u32]) -> Rational {
    let mut memo = HashMap::new();
    let mut key: Vec<u32> = exps.to_vec();
    key.sort_unstable();
    string_rec(&key, &mut memo)
}

fn string_rec(exps: &[u32], memo: &mut HashMap<Vec<u32>, Rational>) -> Rational {
    let n = exps.len();
    if n < 3 {
        return Rational::zero();
    }
    if n == 3 {
        return if exps.iter().all(|&k| k == 0) { Rational::one() } else { Rational::zero() };
    }
    if let Some(v) = memo.get(exps) {
        return v.clone();
    }
    // Forget a marking without ψ; the others lower their exponents one at a time.
    let value = match exps.iter().position(|&k| k == 0) {
        None => Rational::zero(),
        Some(z) => {
            let rest: Vec<u32> = exps.iter().enumerate().filter(|&(i, _)| i != z).map(|(_, &k)| k).collect();
            let mut acc = Rational::zero();
            for i in 0..rest.len() {
                if rest[i] == 0 {
                    continue;
                }
                let mut next = rest.clone();
                next[i] -= 1;
                next.sort_unstable();
                acc += string_rec(&next, memo);
            }
            acc
        }
    };
    memo.insert(exps.to_vec(), value.clone());
    value
}

/// ∫_{M̄₀,ₘ} ∏_F ψ_F^{e_F}/(w_F − ψ_F), expanding every factor as a geometric
/// series and summing ψ-integrals over all distributions of the degree.
pub fn flag_sum<F: crate::arith::Field>(weights: &[F], extra: &[u32]) -> Result<F> {
    let m = weights.len();
    if m < 3 || extra.len() != m {
        return Err(Error::InvalidInput(format!("flag_sum needs m ≥ 3 matching flags, got {m}")));
    }
    if weights.iter().any(|w| w.is_zero()) {
        return Err(Error::VanishingFlagWeight);
    }
    let inv: Vec<F> = weights.iter().map(|w| w.inv().unwrap()).collect();
    let e_total: u32 = extra.iter().sum();
    let dim = (m - 3) as u32;
    if e_total > dim {
        return Ok(F::zero());
    }
    let mut acc = F::zero();
    let mut js = vec![0u32; m];
    distribute(dim - e_total, 0, &mut js, &mut |js| {
        let exps: Vec<u32> = js.iter().zip(extra).map(|(j, e)| j + e).collect();
        let mut term = F::from_rational(psi_integral(&exps));
        for (j, wi) in js.iter().zip(&inv) {
            term = term.mul(&wi.powi(*j as i64 + 1).unwrap());
        }
        acc = acc.add(&term);
    });
    Ok(acc)
}

fn distribute(left: u32, i: usize, js: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if i + 1 == js.len() {
        js[i] = left;
        f(js);
        return;
    }
    for j in 0..=left {
        js[i] = j;
        distribute(left - j, i + 1, js, f);
    }
}

/// ∫_{M̄₀,ₘ} ∏_flags 1/(w_F − ψ_F) ∏_markings ψᵢ^{kᵢ} with m = #flags + #markings,
/// by the closed form (∏1/w)·(m−3)!/(R!∏kᵢ!)·(Σ1/w)^R, R = m − 3 − Σkᵢ.
pub fn vertex_integral<F: crate::arith::Field>(weights: &[F], marking_psi: &[u32]) -> Result<F> {
    let m = weights.len() + marking_psi.len();
    if m < 3 {
        return Err(Error::InvalidInput("vertex integral needs at least three special points".into()));
    }
    let k_total: u32 = marking_psi.iter().sum();
    let dim = (m - 3) as u32;
    if k_total > dim {
        return Ok(F::zero());
    }
    let r = dim - k_total;
    let mut prod = F::one();
    let mut sum = F::zero();
    for w in weights {
        let i = w.inv().ok_or(Error::VanishingFlagWeight)?;
        prod = prod.mul(&i);
        sum = sum.add(&i);
    }
    let den = marking_psi.iter().fold(factorial(r), |acc, &k| acc * factorial(k));
    let c = Rational::new(factorial(dim), den);
    Ok(prod.mul(&sum.powi(r as i64).unwrap()).mul(&F::from_rational(c)))
}
