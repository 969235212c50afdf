//! Vectors of the rank-two Cartan subalgebra in the simple-root basis.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::scalar::{q_frac, Ring};
use crate::GammaRational;

/// x = c1·e₁ + c2·e₂.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanVector<T = GammaRational> {
    pub c1: T,
    pub c2: T,
}

impl<T: Ring> CartanVector<T> {
    pub fn new(c1: T, c2: T) -> Self {
        CartanVector { c1, c2 }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn e1() -> Self {
        Self::new(T::one(), T::zero())
    }

    pub fn e2() -> Self {
        Self::new(T::zero(), T::one())
    }

    pub fn omega1() -> Self {
        Self::new(T::from_q(&q_frac(2, 3)), T::from_q(&q_frac(1, 3)))
    }

    pub fn omega2() -> Self {
        Self::new(T::from_q(&q_frac(1, 3)), T::from_q(&q_frac(2, 3)))
    }

    pub fn rho() -> Self {
        Self::new(T::one(), T::one())
    }

    /// Weights of the first fundamental representation, h₁ + h₂ + h₃ = 0.
    pub fn h(i: usize) -> Self {
        let t = |n, d| T::from_q(&q_frac(n, d));
        match i {
            1 => Self::new(t(2, 3), t(1, 3)),
            2 => Self::new(t(-1, 3), t(1, 3)),
            3 => Self::new(t(-1, 3), t(-2, 3)),
            _ => panic!("h index {i} out of range 1..=3"),
        }
    }

    pub fn basis(i: usize) -> Self {
        match i {
            1 => Self::e1(),
            2 => Self::e2(),
            _ => panic!("basis index {i} out of range 1..=2"),
        }
    }

    pub fn coord(&self, i: usize) -> &T {
        match i {
            1 => &self.c1,
            2 => &self.c2,
            _ => panic!("basis index {i} out of range 1..=2"),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.c1.clone() * s.clone(), self.c2.clone() * s.clone())
    }

    /// ⟨x, y⟩ through the Cartan matrix [[2,−1],[−1,2]].
    pub fn inner(&self, other: &Self) -> T {
        let two = T::from_int(2);
        two.clone() * self.c1.clone() * other.c1.clone()
            - self.c1.clone() * other.c2.clone()
            - self.c2.clone() * other.c1.clone()
            + two * self.c2.clone() * other.c2.clone()
    }

    pub fn norm2(&self) -> T {
        self.inner(self)
    }

    /// ⟨x, eᵢ⟩, i.e. the coordinates of x in the fundamental-weight basis.
    pub fn pair_root(&self, i: usize) -> T {
        self.inner(&Self::basis(i))
    }

    pub fn to_omega_basis(&self) -> (T, T) {
        (self.pair_root(1), self.pair_root(2))
    }

    pub fn from_omega_basis(a: T, b: T) -> Self {
        Self::omega1().scale(&a) + Self::omega2().scale(&b)
    }

    pub fn is_zero(&self) -> bool {
        self.c1.is_zero() && self.c2.is_zero()
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> CartanVector<U> {
        CartanVector::new(f(&self.c1), f(&self.c2))
    }
}

impl<T: Ring> Add for CartanVector<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.c1 + o.c1, self.c2 + o.c2)
    }
}

impl<T: Ring> Sub for CartanVector<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.c1 - o.c1, self.c2 - o.c2)
    }
}

impl<T: Ring> Neg for CartanVector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.c1, -self.c2)
    }
}

impl<T: Ring> Mul<T> for CartanVector<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(&s)
    }
}

impl<T: Ring> Zero for CartanVector<T> {
    fn zero() -> Self {
        CartanVector::zero()
    }
    fn is_zero(&self) -> bool {
        CartanVector::is_zero(self)
    }
}

impl<T: fmt::Display> fmt::Display for CartanVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.c1, self.c2)
    }
}

impl<T: fmt::Debug> fmt::Debug for CartanVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.c1, self.c2)
    }
}
