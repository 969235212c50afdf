//! Rational functions of a probe point t with poles only at fixed points xₖ,
//! kept in partial-fraction form: c + Σ c_{k,p}·uₖᵖ with uₖ = 1/(xₖ − t).

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{Num, One, Zero};
use w3_algebra::{Field, Ring};

use crate::error::FreeFieldError;

/// Scalars usable for positions: exact fields such as ℚ or ℚ(γ).
pub trait Scalar: Field + Num {}
impl<T: Field + Num> Scalar for T {}

pub type C<S> = Complex<S>;

#[derive(Clone)]
pub struct RationalField<S: Scalar> {
    points: Arc<Vec<C<S>>>,
    constant: C<S>,
    /// poles[k][p − 1] multiplies uₖᵖ
    poles: Vec<Vec<C<S>>>,
}

impl<S: Scalar> RationalField<S> {
    pub fn zero(points: Arc<Vec<C<S>>>) -> Self {
        let n = points.len();
        RationalField {
            points,
            constant: C::zero(),
            poles: vec![Vec::new(); n],
        }
    }

    pub fn constant(points: Arc<Vec<C<S>>>, c: C<S>) -> Self {
        let mut f = Self::zero(points);
        f.constant = c;
        f
    }

    /// c·uₖᵖ
    pub fn pole(points: Arc<Vec<C<S>>>, k: usize, p: usize, c: C<S>) -> Self {
        let mut f = Self::zero(points);
        f.add_pole(k, p, c);
        f.trim();
        f
    }

    pub fn points(&self) -> &Arc<Vec<C<S>>> {
        &self.points
    }

    pub fn constant_term(&self) -> &C<S> {
        &self.constant
    }

    /// Coefficient of uₖᵖ.
    pub fn coeff(&self, k: usize, p: usize) -> C<S> {
        self.poles[k].get(p - 1).cloned().unwrap_or_else(C::zero)
    }

    /// Nonzero (k, p, coefficient) triples in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &C<S>)> {
        self.poles.iter().enumerate().flat_map(|(k, ps)| {
            ps.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(p, c)| (k, p + 1, c))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.poles.iter().all(Vec::is_empty)
    }

    fn add_pole(&mut self, k: usize, p: usize, c: C<S>) {
        let v = &mut self.poles[k];
        if v.len() < p {
            v.resize(p, C::zero());
        }
        v[p - 1] = v[p - 1].clone() + c;
    }

    fn trim(&mut self) {
        for v in &mut self.poles {
            while v.last().is_some_and(Zero::is_zero) {
                v.pop();
            }
        }
    }

    fn same_points(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.points, &other.points) || self.points == other.points,
            "pole sets differ"
        );
    }

    pub fn scale(&self, s: &C<S>) -> Self {
        let mut out = self.clone();
        out.constant = out.constant * s.clone();
        for v in &mut out.poles {
            for c in v.iter_mut() {
                *c = c.clone() * s.clone();
            }
        }
        out.trim();
        out
    }

    pub fn add_scaled(&self, s: &C<S>, other: &Self) -> Self {
        self.same_points(other);
        let mut out = self.clone();
        out.constant = out.constant + other.constant.clone() * s.clone();
        for (k, v) in other.poles.iter().enumerate() {
            for (p, c) in v.iter().enumerate() {
                out.add_pole(k, p + 1, c.clone() * s.clone());
            }
        }
        out.trim();
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(&C::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(&-C::<S>::one(), other)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_points(other);
        let mut out = Self::zero(self.points.clone());
        out.constant = self.constant.clone() * other.constant.clone();
        for (k, (a, b)) in self.poles.iter().zip(&other.poles).enumerate() {
            for (p, c) in a.iter().enumerate() {
                out.add_pole(k, p + 1, c.clone() * other.constant.clone());
            }
            for (p, c) in b.iter().enumerate() {
                out.add_pole(k, p + 1, c.clone() * self.constant.clone());
            }
        }
        for (k, a) in self.poles.iter().enumerate().filter(|(_, a)| !a.is_empty()) {
            for (l, b) in other
                .poles
                .iter()
                .enumerate()
                .filter(|(_, b)| !b.is_empty())
            {
                if k == l {
                    for (p, x) in a.iter().enumerate() {
                        for (q, y) in b.iter().enumerate() {
                            out.add_pole(k, p + q + 2, x.clone() * y.clone());
                        }
                    }
                    continue;
                }
                let table = partial_fractions(&self.points[k], &self.points[l], a.len(), b.len());
                for (p, x) in a.iter().enumerate() {
                    for (q, y) in b.iter().enumerate() {
                        let xy = x.clone() * y.clone();
                        if xy.is_zero() {
                            continue;
                        }
                        let (ck, cl) = &table[p + 1][q + 1];
                        for (i, c) in ck.iter().enumerate() {
                            out.add_pole(k, i + 1, c.clone() * xy.clone());
                        }
                        for (j, c) in cl.iter().enumerate() {
                            out.add_pole(l, j + 1, c.clone() * xy.clone());
                        }
                    }
                }
            }
        }
        out.trim();
        out
    }

    /// d/dt, using d uₖᵖ/dt = p·uₖᵖ⁺¹.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(self.points.clone());
        for (k, v) in self.poles.iter().enumerate() {
            for (p, c) in v.iter().enumerate() {
                out.add_pole(k, p + 2, c.scale_q(&w3_algebra::q_int(p as i64 + 1)));
            }
        }
        out.trim();
        out
    }

    pub fn eval(&self, t: &C<S>) -> Result<C<S>, FreeFieldError> {
        let mut acc = self.constant.clone();
        for (k, v) in self.poles.iter().enumerate() {
            if v.is_empty() {
                continue;
            }
            let d = self.points[k].clone() - t.clone();
            if d.is_zero() {
                return Err(FreeFieldError::ProbeCollision(k));
            }
            let u = C::<S>::one() / d;
            let mut up = u.clone();
            for c in v {
                acc = acc + c.clone() * up.clone();
                up = up * u.clone();
            }
        }
        Ok(acc)
    }
}

/// table[p][q] = (coefficients of uₖ¹..uₖᵖ, coefficients of uₗ¹..uₗ^q) for uₖᵖuₗ^q,
/// from uₖuₗ = (uₖ − uₗ)/(xₗ − xₖ).
#[allow(clippy::type_complexity)]
fn partial_fractions<S: Scalar>(
    xk: &C<S>,
    xl: &C<S>,
    pmax: usize,
    qmax: usize,
) -> Vec<Vec<(Vec<C<S>>, Vec<C<S>>)>> {
    let inv = C::<S>::one() / (xl.clone() - xk.clone());
    let unit = |n: usize| {
        let mut v = vec![C::zero(); n];
        v[n - 1] = C::one();
        v
    };
    let mut t: Vec<Vec<(Vec<C<S>>, Vec<C<S>>)>> =
        vec![vec![(Vec::new(), Vec::new()); qmax + 1]; pmax + 1];
    for p in 1..=pmax {
        t[p][0] = (unit(p), Vec::new());
    }
    for q in 1..=qmax {
        t[0][q] = (Vec::new(), unit(q));
    }
    for p in 1..=pmax {
        for q in 1..=qmax {
            let (a1, b1) = &t[p][q - 1];
            let (a2, b2) = &t[p - 1][q];
            let combine = |x: &[C<S>], y: &[C<S>], n: usize| {
                (0..n)
                    .map(|i| {
                        let xi = x.get(i).cloned().unwrap_or_else(C::zero);
                        let yi = y.get(i).cloned().unwrap_or_else(C::zero);
                        (xi - yi) * inv.clone()
                    })
                    .collect::<Vec<_>>()
            };
            t[p][q] = (combine(a1, a2, p), combine(b1, b2, q));
        }
    }
    t
}

impl<S: Scalar> PartialEq for RationalField<S> {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for RationalField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        if !self.constant.is_zero() {
            write!(f, "({} + {}i)", self.constant.re, self.constant.im)?;
            first = false;
        }
        for (k, p, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({} + {}i)/(x{k} - t)^{p}", c.re, c.im)?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for RationalField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RationalField")
            .field("constant", &self.constant)
            .field("poles", &self.poles)
            .finish()
    }
}
