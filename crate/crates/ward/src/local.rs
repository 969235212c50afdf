//! Pole expansions of a current inserted at a probe point.

use num_traits::Zero;
use w3_algebra::Couplings;
use w3_freefield::{Entry, InsertionData, Scalar, C};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Current {
    L,
    W,
}

/// What multiplies the pole: a descendant of entry k, or the primary itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    L1,
    W1,
    W2,
    Primary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoleTerm<S> {
    pub entry: usize,
    /// power of 1/(x_k − t); negative for the regular terms of low modes
    pub order: i32,
    pub source: Source,
    pub coefficient: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalExpansion<S> {
    pub current: Current,
    pub n: u32,
    pub terms: Vec<PoleTerm<S>>,
}

/// Right-hand side of the local identity for 𝐋₋ₙ or 𝐖₋ₙ at a probe, in terms
/// of the descendants of every other entry.
pub fn local_ward_rhs<S: Scalar>(
    current: Current,
    n: u32,
    entries: &[Entry<S>],
    c: &Couplings<S>,
) -> LocalExpansion<S> {
    assert!(n >= 1, "mode index must be positive");
    let ni = S::from_int(n as i64);
    let one = S::one();
    let two = S::from_int(2);
    let mut terms = Vec::new();
    let mut push = |entry, order: i64, source, coefficient: S| {
        if !coefficient.is_zero() {
            terms.push(PoleTerm {
                entry,
                order: order as i32,
                source,
                coefficient,
            });
        }
    };
    let n = n as i64;
    for (k, e) in entries.iter().enumerate() {
        match current {
            Current::L => {
                push(k, n - 1, Source::L1, -one.clone());
                push(
                    k,
                    n,
                    Source::Primary,
                    (ni.clone() - one.clone()) * c.conformal_weight(&e.weight),
                );
            }
            Current::W => {
                push(k, n - 2, Source::W2, -one.clone());
                push(k, n - 1, Source::W1, ni.clone() - two.clone());
                let w = c.spin(&e.weight);
                push(
                    k,
                    n,
                    Source::Primary,
                    -((ni.clone() - one.clone()) * (ni.clone() - two.clone()) * w) / two.clone(),
                );
            }
        }
    }
    LocalExpansion {
        current,
        n: n as u32,
        terms,
    }
}

impl<S: Scalar> LocalExpansion<S> {
    pub fn eval(&self, entries: &[Entry<S>], data: &[InsertionData<S>], t: &C<S>) -> C<S> {
        self.terms.iter().fold(C::zero(), |acc, term| {
            let d = &data[term.entry];
            let v = match term.source {
                Source::L1 => d.l1.clone(),
                Source::W1 => d.w1.clone(),
                Source::W2 => d.w2.clone(),
                Source::Primary => C::new(S::one(), S::zero()),
            };
            let d = entries[term.entry].x.clone() - t.clone();
            let p = if term.order >= 0 {
                C::new(S::one(), S::zero()) / d.powu(term.order as u32)
            } else {
                d.powu(term.order.unsigned_abs())
            };
            acc + v * p * C::new(term.coefficient.clone(), S::zero())
        })
    }

    /// Coefficient of the given source at the given pole order of entry k.
    pub fn coefficient(&self, entry: usize, order: i32, source: Source) -> S {
        self.terms
            .iter()
            .filter(|t| t.entry == entry && t.order == order && t.source == source)
            .fold(S::zero(), |acc, t| acc + t.coefficient.clone())
    }
}
