//! Canonical polynomials in the formal symbols ⟨eᵢ, ∂ᵖΦ⟩.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use w3_algebra::{q_frac, CartanVector, GammaRational, Ring};

use crate::error::FormError;

/// Sorted multiset of `(p, i)` pairs, each standing for ⟨eᵢ, ∂ᵖΦ⟩.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct FieldMonomial(Vec<(u32, u8)>);

impl FieldMonomial {
    pub fn new(mut factors: Vec<(u32, u8)>) -> Self {
        factors.sort_unstable();
        FieldMonomial(factors)
    }

    pub fn one() -> Self {
        FieldMonomial(Vec::new())
    }

    pub fn factors(&self) -> &[(u32, u8)] {
        &self.0
    }

    pub fn level(&self) -> u32 {
        self.0.iter().map(|&(p, _)| p).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Self::new(v)
    }
}

impl fmt::Display for FieldMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|(p, i)| format!("<e{i},d{p}>")).collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// Σ coeff·monomial with every monomial at the same level.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldPolynomial<T = GammaRational> {
    terms: BTreeMap<FieldMonomial, T>,
    level: u32,
}

impl<T: Ring> FieldPolynomial<T> {
    pub fn zero(level: u32) -> Self {
        FieldPolynomial {
            terms: BTreeMap::new(),
            level,
        }
    }

    pub fn constant(c: T) -> Self {
        Self::zero(0).with_term(FieldMonomial::one(), c)
    }

    /// ⟨eᵢ, ∂ᵖΦ⟩.
    pub fn field(p: u32, i: u8) -> Self {
        assert!(
            p >= 1 && (i == 1 || i == 2),
            "invalid field symbol ({p}, {i})"
        );
        Self::zero(p).with_term(FieldMonomial(vec![(p, i)]), T::one())
    }

    /// ⟨u, ∂ᵖΦ⟩, expanded on the basis symbols.
    pub fn linear(u: &CartanVector<T>, p: u32) -> Self {
        Self::zero(p)
            .with_term(FieldMonomial(vec![(p, 1)]), u.c1.clone())
            .with_term(FieldMonomial(vec![(p, 2)]), u.c2.clone())
    }

    /// ⟨∂ᵃΦ, ∂ᵇΦ⟩ = Σ (A⁻¹)ᵢⱼ ⟨eᵢ,∂ᵃΦ⟩⟨eⱼ,∂ᵇΦ⟩.
    pub fn pairing(a: u32, b: u32) -> Self {
        let mut out = Self::zero(a + b);
        for i in 1..=2u8 {
            for j in 1..=2u8 {
                let w = if i == j { q_frac(2, 3) } else { q_frac(1, 3) };
                out.add_term(FieldMonomial::new(vec![(a, i), (b, j)]), T::from_q(&w));
            }
        }
        out
    }

    /// Build from raw terms; fails if the monomials disagree on the level.
    pub fn from_terms(
        level: u32,
        terms: impl IntoIterator<Item = (FieldMonomial, T)>,
    ) -> Result<Self, FormError> {
        let mut out = Self::zero(level);
        for (m, c) in terms {
            if m.level() != level {
                return Err(FormError::MixedLevels {
                    expected: level,
                    found: m.level(),
                });
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    fn with_term(mut self, m: FieldMonomial, c: T) -> Self {
        self.add_term(m, c);
        self
    }

    fn add_term(&mut self, m: FieldMonomial, c: T) {
        debug_assert_eq!(m.level(), self.level);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = existing.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FieldMonomial, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &FieldMonomial) -> T {
        self.terms.get(m).cloned().unwrap_or_else(T::zero)
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(self.level);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FormError> {
        self.checked_add_scaled(&T::one(), other)
    }

    /// self + c·other.
    pub fn checked_add_scaled(&self, c: &T, other: &Self) -> Result<Self, FormError> {
        if self.level != other.level {
            return Err(FormError::MixedLevels {
                expected: self.level,
                found: other.level,
            });
        }
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(m.clone(), c.clone() * v.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FormError> {
        self.checked_add_scaled(&-T::one(), other)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.level + other.level);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mul(b), x.clone() * y.clone());
            }
        }
        out
    }

    /// Total derivative: each symbol ∂ᵖ becomes ∂ᵖ⁺¹ by the Leibniz rule.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(self.level + 1);
        for (m, c) in &self.terms {
            for k in 0..m.0.len() {
                let mut f = m.0.clone();
                f[k].0 += 1;
                out.add_term(FieldMonomial::new(f), c.clone());
            }
        }
        out
    }

    pub fn map_coeffs<U: Ring>(&self, f: impl Fn(&T) -> U) -> FieldPolynomial<U> {
        let mut out = FieldPolynomial::zero(self.level);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Constant term (the coefficient of the empty monomial).
    pub fn constant_term(&self) -> T {
        self.coeff(&FieldMonomial::one())
    }
}

/// Exact linear combination Σ cᵢ·formᵢ; all forms must share one level.
pub fn combine<T: Ring>(
    coeffs: &[T],
    forms: &[FieldPolynomial<T>],
) -> Result<FieldPolynomial<T>, FormError> {
    if coeffs.len() != forms.len() {
        return Err(FormError::LengthMismatch {
            coeffs: coeffs.len(),
            forms: forms.len(),
        });
    }
    let Some(first) = forms.first() else {
        return Ok(FieldPolynomial::zero(0));
    };
    let mut acc = FieldPolynomial::zero(first.level());
    for (c, f) in coeffs.iter().zip(forms) {
        acc = acc.checked_add_scaled(c, f)?;
    }
    Ok(acc)
}

impl<T: Ring + fmt::Display> fmt::Display for FieldPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c})·{m}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<T: fmt::Debug> fmt::Debug for FieldPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldPolynomial")
            .field("level", &self.level)
            .field("terms", &self.terms)
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct WireTerm {
    factors: Vec<(u32, u8)>,
    coeff: GammaRational,
}

impl Serialize for FieldPolynomial<GammaRational> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<WireTerm> = self
            .terms
            .iter()
            .map(|(m, c)| WireTerm {
                factors: m.0.clone(),
                coeff: c.clone(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldPolynomial<GammaRational> {
    /// The empty list deserializes as the level-0 zero form.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let terms = Vec::<WireTerm>::deserialize(d)?;
        for t in &terms {
            if t.factors
                .iter()
                .any(|&(p, i)| p == 0 || !(i == 1 || i == 2))
            {
                return Err(D::Error::custom(format!(
                    "invalid factor list {:?}",
                    t.factors
                )));
            }
        }
        let level = terms
            .first()
            .map(|t| FieldMonomial::new(t.factors.clone()).level())
            .unwrap_or(0);
        let terms = terms
            .into_iter()
            .map(|t| (FieldMonomial::new(t.factors), t.coeff));
        FieldPolynomial::from_terms(level, terms).map_err(D::Error::custom)
    }
}

impl<T: Ring> Zero for FieldPolynomial<T> {
    fn zero() -> Self {
        FieldPolynomial::zero(0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<T: Ring> std::ops::Add for FieldPolynomial<T> {
    type Output = Self;
    /// Zero forms adapt to the other operand's level; otherwise levels must agree.
    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        self.checked_add(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}
