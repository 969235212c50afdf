//! Virasoro descendant forms L₋λ^α.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use w3_algebra::{q_frac, CartanVector, Couplings, GammaRational, Ring, Q};

use crate::error::FormError;
use crate::field_poly::FieldPolynomial;

/// Supported partitions: (n), (1,1), (1,2), (1,1,1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Partition {
    Single(u32),
    OneOne,
    OneTwo,
    OneOneOne,
}

pub const SUPPORTED_PARTITIONS: &str = "(n) for n ≥ 1, (1,1), (1,2), (1,1,1)";

impl Partition {
    pub fn from_parts(parts: &[u32]) -> Result<Self, FormError> {
        match parts {
            [n] if *n >= 1 => Ok(Partition::Single(*n)),
            [1, 1] => Ok(Partition::OneOne),
            [1, 2] | [2, 1] => Ok(Partition::OneTwo),
            [1, 1, 1] => Ok(Partition::OneOneOne),
            _ => Err(FormError::UnsupportedPartition {
                got: format!("{parts:?}"),
                supported: SUPPORTED_PARTITIONS,
            }),
        }
    }

    pub fn level(&self) -> u32 {
        match self {
            Partition::Single(n) => *n,
            Partition::OneOne => 2,
            Partition::OneTwo | Partition::OneOneOne => 3,
        }
    }
}

impl FromStr for Partition {
    type Err = FormError;
    fn from_str(s: &str) -> Result<Self, FormError> {
        let cleaned = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Result<Vec<u32>, _> = cleaned
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect();
        match parts {
            Ok(p) => Self::from_parts(&p),
            Err(_) => Err(FormError::UnsupportedPartition {
                got: s.to_string(),
                supported: SUPPORTED_PARTITIONS,
            }),
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Partition::Single(n) => write!(f, "({n})"),
            Partition::OneOne => write!(f, "(1,1)"),
            Partition::OneTwo => write!(f, "(1,2)"),
            Partition::OneOneOne => write!(f, "(1,1,1)"),
        }
    }
}

fn factorial(n: u32) -> Q {
    (1..=n as i64).fold(q_frac(1, 1), |acc, k| acc * q_frac(k, 1))
}

type Fp<T> = FieldPolynomial<T>;

fn sum<T: Ring>(parts: Vec<Fp<T>>) -> Fp<T> {
    let level = parts[0].level();
    parts.into_iter().fold(Fp::zero(level), |acc, p| {
        acc.checked_add(&p).expect("uniform level")
    })
}

/// L₋λ^α with the background charge taken from `c`.
pub fn l_form_with<T: Ring>(lambda: Partition, alpha: &CartanVector<T>, c: &Couplings<T>) -> Fp<T> {
    let lin = |u: &CartanVector<T>, p| Fp::linear(u, p);
    let bg = c.background();
    match lambda {
        Partition::Single(n) => {
            let shifted = bg.scale(&T::from_int(n as i64 - 1)) + alpha.clone();
            let mut acc = lin(&shifted, n).scale(&T::from_q(&(q_frac(1, 1) / factorial(n - 1))));
            for i in 0..n.saturating_sub(1) {
                let w = q_frac(1, 1) / (factorial(i) * factorial(n - 2 - i));
                acc = acc
                    .checked_add_scaled(&T::from_q(&-w), &Fp::pairing(i + 1, n - 1 - i))
                    .expect("level n");
            }
            acc
        }
        Partition::OneOne => sum(vec![lin(alpha, 2), lin(alpha, 1).mul(&lin(alpha, 1))]),
        Partition::OneTwo => {
            let qa = bg + alpha.clone();
            let a1 = lin(alpha, 1);
            sum(vec![
                lin(&qa, 3),
                lin(&qa, 2).mul(&a1),
                Fp::pairing(2, 1).scale(&T::from_int(-2)),
                Fp::pairing(1, 1).mul(&a1).scale(&T::from_int(-1)),
            ])
        }
        Partition::OneOneOne => {
            let a1 = lin(alpha, 1);
            sum(vec![
                lin(alpha, 3),
                lin(alpha, 2).mul(&a1).scale(&T::from_int(3)),
                a1.mul(&a1).mul(&a1),
            ])
        }
    }
}

/// L₋λ^α at symbolic γ.
pub fn l_form(lambda: Partition, alpha: &CartanVector) -> FieldPolynomial<GammaRational> {
    l_form_with(lambda, alpha, &Couplings::symbolic())
}
