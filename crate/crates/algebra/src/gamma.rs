//! Exact rational functions of the coupling γ.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_traits::{Num, One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::AlgebraError;
use crate::poly::{fmt_poly, Poly};
use crate::scalar::{parse_q, q_int, q_to_f64, Field, Ring, Q};

/// Largest degree allowed for numerator or denominator.
pub const MAX_DEGREE: usize = 64;

/// `num/den` in lowest terms with a monic denominator, so `==` is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GammaRational {
    num: Poly<Q>,
    den: Poly<Q>,
}

fn check_degree(p: &Poly<Q>) -> Result<(), AlgebraError> {
    match p.degree() {
        Some(d) if d > MAX_DEGREE => Err(AlgebraError::DegreeOverflow {
            degree: d,
            cap: MAX_DEGREE,
        }),
        _ => Ok(()),
    }
}

fn or_panic<T>(r: Result<T, AlgebraError>) -> T {
    r.unwrap_or_else(|e| panic!("{e}"))
}

impl GammaRational {
    pub fn new(num: Poly<Q>, den: Poly<Q>) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = Poly::gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            }
        };
        let lead = den.lead().cloned().expect("nonzero denominator");
        let inv = Q::one() / lead;
        let (num, den) = (num.scale(&inv), den.scale(&inv));
        check_degree(&num)?;
        check_degree(&den)?;
        Ok(GammaRational { num, den })
    }

    pub fn from_poly(num: Poly<Q>) -> Result<Self, AlgebraError> {
        check_degree(&num)?;
        Ok(GammaRational {
            num,
            den: Poly::one(),
        })
    }

    /// The coupling γ itself.
    pub fn gamma() -> Self {
        GammaRational {
            num: Poly::var(),
            den: Poly::one(),
        }
    }

    pub fn constant(q: Q) -> Self {
        GammaRational {
            num: Poly::constant(q),
            den: Poly::one(),
        }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(q_int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::constant(crate::scalar::q_frac(n, d))
    }

    pub fn numer(&self) -> &Poly<Q> {
        &self.num
    }

    pub fn denom(&self) -> &Poly<Q> {
        &self.den
    }

    /// The value as a rational constant, if it does not depend on γ.
    pub fn as_constant(&self) -> Option<Q> {
        (self.num.is_constant() && self.den.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.den == rhs.den {
            return Self::new(self.num.clone() + rhs.num.clone(), self.den.clone());
        }
        Self::new(
            self.num.clone() * rhs.den.clone() + rhs.num.clone() * self.den.clone(),
            self.den.clone() * rhs.den.clone(),
        )
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Self::from_poly(self.num.clone() * rhs.num.clone());
        }
        // cross-cancel first to keep intermediate degrees small
        let g1 = Poly::gcd(&self.num, &rhs.den);
        let g2 = Poly::gcd(&rhs.num, &self.den);
        let n = self.num.div_rem(&g1).0 * rhs.num.div_rem(&g2).0;
        let d = self.den.div_rem(&g2).0 * rhs.den.div_rem(&g1).0;
        Self::new(n, d)
    }

    pub fn checked_inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.checked_mul(&rhs.checked_inv()?)
    }

    /// Value at a rational γ₀; `None` at a pole.
    pub fn eval_q(&self, g: &Q) -> Option<Q> {
        let d = self.den.eval(g);
        (!d.is_zero()).then(|| self.num.eval(g) / d)
    }

    /// Substitute γ ↦ x in any field containing ℚ; `None` at a pole.
    pub fn eval_in<S: Field>(&self, x: &S) -> Option<S> {
        let horner = |p: &Poly<Q>| {
            p.coeffs()
                .iter()
                .rev()
                .fold(S::zero(), |acc, c| acc * x.clone() + S::from_q(c))
        };
        let d = horner(&self.den);
        (!d.is_zero()).then(|| horner(&self.num) / d)
    }

    pub fn eval_f64(&self, g: f64) -> f64 {
        let ev = |p: &Poly<Q>| {
            p.coeffs()
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * g + q_to_f64(c))
        };
        ev(&self.num) / ev(&self.den)
    }
}

impl Zero for GammaRational {
    fn zero() -> Self {
        GammaRational {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for GammaRational {
    fn one() -> Self {
        Self::int(1)
    }
}

impl Add for GammaRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        or_panic(self.checked_add(&rhs))
    }
}

impl Sub for GammaRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        or_panic(self.checked_add(&-rhs))
    }
}

impl Neg for GammaRational {
    type Output = Self;
    fn neg(self) -> Self {
        GammaRational {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Mul for GammaRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        or_panic(self.checked_mul(&rhs))
    }
}

impl Div for GammaRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        or_panic(self.checked_div(&rhs))
    }
}

/// Exact division always succeeds, so the remainder is zero.
impl Rem for GammaRational {
    type Output = Self;
    fn rem(self, _rhs: Self) -> Self {
        Self::zero()
    }
}

impl Num for GammaRational {
    type FromStrRadixErr = AlgebraError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, AlgebraError> {
        if radix != 10 {
            return Err(AlgebraError::Parse(format!("radix {radix} unsupported")));
        }
        parse_q(s)
            .map(Self::constant)
            .ok_or_else(|| AlgebraError::Parse(s.to_string()))
    }
}

impl Ring for GammaRational {
    fn from_q(q: &Q) -> Self {
        Self::constant(q.clone())
    }
}

impl Field for GammaRational {}

/// Rings that contain ℚ(γ).
pub trait FromGamma: Ring {
    fn from_gamma(g: &GammaRational) -> Self;
}

impl FromGamma for GammaRational {
    fn from_gamma(g: &GammaRational) -> Self {
        g.clone()
    }
}

impl FromGamma for Poly<GammaRational> {
    fn from_gamma(g: &GammaRational) -> Self {
        Poly::constant(g.clone())
    }
}

impl FromGamma for num_complex::Complex<GammaRational> {
    fn from_gamma(g: &GammaRational) -> Self {
        num_complex::Complex::new(g.clone(), GammaRational::zero())
    }
}

impl From<Q> for GammaRational {
    fn from(q: Q) -> Self {
        Self::constant(q)
    }
}

impl From<i64> for GammaRational {
    fn from(n: i64) -> Self {
        Self::int(n)
    }
}

impl fmt::Display for GammaRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return fmt_poly(self.num.coeffs(), "γ", f);
        }
        write!(f, "(")?;
        fmt_poly(self.num.coeffs(), "γ", f)?;
        write!(f, ")/(")?;
        fmt_poly(self.den.coeffs(), "γ", f)?;
        write!(f, ")")
    }
}

impl fmt::Debug for GammaRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    num: Vec<WireCoeff>,
    den: Vec<WireCoeff>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireCoeff {
    Int(i64),
    Float(f64),
    Text(String),
}

impl WireCoeff {
    fn to_q(&self) -> Result<Q, String> {
        match self {
            WireCoeff::Int(n) => Ok(q_int(*n)),
            // shortest round-trip decimal, then exact
            WireCoeff::Float(x) => {
                parse_q(&format!("{x}")).ok_or_else(|| format!("bad number {x}"))
            }
            WireCoeff::Text(s) => parse_q(s).ok_or_else(|| format!("bad rational {s:?}")),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnyRepr {
    Full(Wire),
    Scalar(WireCoeff),
}

impl Serialize for GammaRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let enc = |p: &Poly<Q>| {
            p.coeffs()
                .iter()
                .map(|c| WireCoeff::Text(c.to_string()))
                .collect()
        };
        Wire {
            num: enc(&self.num),
            den: enc(&self.den),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GammaRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match AnyRepr::deserialize(d)? {
            AnyRepr::Scalar(c) => c.to_q().map(Self::constant).map_err(D::Error::custom),
            AnyRepr::Full(w) => {
                let dec =
                    |v: &[WireCoeff]| v.iter().map(WireCoeff::to_q).collect::<Result<Vec<_>, _>>();
                let num = Poly::new(dec(&w.num).map_err(D::Error::custom)?);
                let den = Poly::new(dec(&w.den).map_err(D::Error::custom)?);
                Self::new(num, den).map_err(D::Error::custom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> GammaRational {
        GammaRational::gamma()
    }

    #[test]
    fn cancels_to_lowest_terms() {
        let x = (g() * g() - GammaRational::int(1)) / (g() - GammaRational::int(1));
        assert_eq!(x, g() + GammaRational::int(1));
        assert!(x.denom().is_one());
    }

    #[test]
    fn denominator_is_monic() {
        let x = GammaRational::int(1) / (GammaRational::int(3) * g());
        assert_eq!(x.denom().lead(), Some(&q_int(1)));
        assert_eq!(x.numer().coeff(0), crate::scalar::q_frac(1, 3));
    }

    #[test]
    fn json_round_trip() {
        let x = (g() + GammaRational::frac(2, 3)) / (g() * g() + GammaRational::int(2));
        let s = serde_json::to_string(&x).unwrap();
        let y: GammaRational = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        let z: GammaRational = serde_json::from_str("0.5").unwrap();
        assert_eq!(z, GammaRational::frac(1, 2));
    }

    #[test]
    fn degree_cap_is_enforced() {
        let big = Poly::new(vec![q_int(1); MAX_DEGREE + 2]);
        assert!(matches!(
            GammaRational::from_poly(big),
            Err(AlgebraError::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            g().checked_div(&GammaRational::zero()),
            Err(AlgebraError::DivisionByZero)
        );
    }
}
