//! Formal OPE of a free-field current against a vertex operator V_α.
//!
//! Each symbol ⟨eₐ,∂ᵖΦ(z)⟩ of the current either contracts with V_α(t), giving
//! s·(−1)ᵖ(p−1)!⟨eₐ,α⟩/(2(z−t)ᵖ) with s the contraction sign, or is Taylor
//! expanded around t. The mode J₋ₙ of a spin-s current is the coefficient of
//! (z−t)ⁿ⁻ˢ.

use w3_algebra::{q_frac, CartanVector, Ring, Q};

use crate::field_poly::{FieldMonomial, FieldPolynomial};

fn factorial(n: u32) -> Q {
    (1..=n as i64).fold(q_frac(1, 1), |acc, k| acc * q_frac(k, 1))
}

/// All ways to write `total` as an ordered sum of `parts` non-negative integers.
fn compositions(total: u32, parts: usize, f: &mut impl FnMut(&[u32])) {
    fn go(total: u32, parts: usize, buf: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if parts == 1 {
            buf.push(total);
            f(buf);
            buf.pop();
            return;
        }
        for m in 0..=total {
            buf.push(m);
            go(total - m, parts - 1, buf, f);
            buf.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    go(total, parts, &mut Vec::with_capacity(parts), f);
}

pub fn ope_mode<T: Ring>(
    current: &FieldPolynomial<T>,
    n: i64,
    alpha: &CartanVector<T>,
    sign: i8,
) -> FieldPolynomial<T> {
    if n < 0 {
        return FieldPolynomial::zero(0);
    }
    let spin = current.level() as i64;
    let pair = [alpha.pair_root(1), alpha.pair_root(2)];
    let mut terms: Vec<(FieldMonomial, T)> = Vec::new();
    for (mono, coeff) in current.terms() {
        let f = mono.factors();
        for mask in 0u32..(1 << f.len()) {
            let mut c = coeff.clone();
            let mut pole = 0i64;
            let mut rest = Vec::new();
            for (k, &(p, a)) in f.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    let mut w = factorial(p - 1) * q_frac(sign as i64, 2);
                    if p % 2 == 1 {
                        w = -w;
                    }
                    c = c * pair[a as usize - 1].scale_q(&w);
                    pole += p as i64;
                } else {
                    rest.push((p, a));
                }
            }
            let total = n - spin + pole;
            if total < 0 || c.is_zero() {
                continue;
            }
            compositions(total as u32, rest.len(), &mut |ms| {
                let mut w = q_frac(1, 1);
                let factors = rest
                    .iter()
                    .zip(ms)
                    .map(|(&(p, a), &m)| {
                        w = w.clone() / factorial(m);
                        (p + m, a)
                    })
                    .collect();
                terms.push((FieldMonomial::new(factors), c.scale_q(&w)));
            });
        }
    }
    FieldPolynomial::from_terms(n as u32, terms).expect("every term has level n")
}
