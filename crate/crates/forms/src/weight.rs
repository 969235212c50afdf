//! Insertion weights tagged by their degeneracy class.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use w3_algebra::{CartanVector, Couplings, Field, GammaRational};

use crate::error::FormError;

/// The two admissible values χ ∈ {γ, 2/γ}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chi {
    Gamma,
    TwoOverGamma,
}

impl Chi {
    pub const BOTH: [Chi; 2] = [Chi::Gamma, Chi::TwoOverGamma];

    pub fn value<T: Field>(&self, c: &Couplings<T>) -> T {
        match self {
            Chi::Gamma => c.gamma.clone(),
            Chi::TwoOverGamma => c.two_over_gamma(),
        }
    }

    pub fn symbolic(&self) -> GammaRational {
        self.value(&Couplings::symbolic())
    }

    pub fn eval(&self, gamma: f64) -> f64 {
        match self {
            Chi::Gamma => gamma,
            Chi::TwoOverGamma => 2.0 / gamma,
        }
    }
}

impl FromStr for Chi {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "gamma" | "γ" => Ok(Chi::Gamma),
            "2/gamma" | "2/γ" => Ok(Chi::TwoOverGamma),
            other => Err(format!("unknown chi {other:?}; expected gamma or 2/gamma")),
        }
    }
}

impl fmt::Display for Chi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chi::Gamma => "gamma",
            Chi::TwoOverGamma => "2/gamma",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightTag {
    Generic,
    /// κωᵢ
    SemiDegenerate {
        index: u8,
        kappa: GammaRational,
    },
    /// −χω₁
    FullyDegenerate {
        chi: Chi,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    pub vector: CartanVector,
    pub tag: WeightTag,
}

impl Weight {
    pub fn generic(vector: CartanVector) -> Self {
        Weight {
            vector,
            tag: WeightTag::Generic,
        }
    }

    pub fn semi_degenerate(index: u8, kappa: GammaRational) -> Result<Self, FormError> {
        let base = match index {
            1 => CartanVector::omega1(),
            2 => CartanVector::omega2(),
            _ => {
                return Err(FormError::TagMismatch(format!(
                    "fundamental weight index {index}"
                )))
            }
        };
        Ok(Weight {
            vector: base.scale(&kappa),
            tag: WeightTag::SemiDegenerate { index, kappa },
        })
    }

    pub fn fully_degenerate(chi: Chi) -> Self {
        Weight {
            vector: CartanVector::omega1().scale(&-chi.symbolic()),
            tag: WeightTag::FullyDegenerate { chi },
        }
    }

    /// Re-derive the vector from the tag and compare.
    pub fn validate(&self) -> Result<(), FormError> {
        let expected = match &self.tag {
            WeightTag::Generic => return Ok(()),
            WeightTag::SemiDegenerate { index, kappa } => {
                Self::semi_degenerate(*index, kappa.clone())?.vector
            }
            WeightTag::FullyDegenerate { chi } => Self::fully_degenerate(*chi).vector,
        };
        if expected == self.vector {
            Ok(())
        } else {
            Err(FormError::TagMismatch(format!(
                "{:?} does not match {:?}",
                self.tag, self.vector
            )))
        }
    }
}
