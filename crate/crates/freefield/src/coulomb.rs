//! Coulomb-gas correlators at vanishing cosmological constants, as ratios.
//!
//! Every insertion is split into holomorphic charges on the doubled list
//! (z₁..z_N, z̄₁..z̄_N, s₁..s_M) with weights (α, α, β). The correlator is then
//! ∏_{a<b}(x_a − x_b)^{−⟨A_a,A_b⟩/2} and a descendant form inserted at t turns
//! into a rational function of t by Gaussian integration by parts.

use std::sync::Arc;

use num_complex::Complex;
use num_traits::{One, Zero};
use w3_algebra::{q_frac, q_to_f64, CartanVector, Couplings, GammaRational, Q};
use w3_forms::{l_form_with, realization, FieldPolynomial, Partition};

use crate::config::CorrelatorConfig;
use crate::error::FreeFieldError;
use crate::rational::{RationalField, Scalar, C};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    Bulk(usize),
    /// complex conjugate of bulk insertion k
    Mirror(usize),
    Boundary(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Entry<S> {
    pub x: C<S>,
    pub weight: CartanVector<S>,
    pub origin: Origin,
}

fn embed<S: Scalar>(q: &Q) -> S {
    S::from_q(q)
}

/// The doubled list with weights specialized at γ ↦ `gamma`.
pub fn doubled_insertions_in<S: Scalar>(
    cfg: &CorrelatorConfig,
    gamma: &S,
) -> Result<Vec<Entry<S>>, FreeFieldError> {
    let spec = |v: &CartanVector| -> Result<CartanVector<S>, FreeFieldError> {
        let c1 = v.c1.eval_in(gamma).ok_or(FreeFieldError::PoleAtCoupling)?;
        let c2 = v.c2.eval_in(gamma).ok_or(FreeFieldError::PoleAtCoupling)?;
        Ok(CartanVector::new(c1, c2))
    };
    let mut out = Vec::with_capacity(2 * cfg.bulk.len() + cfg.boundary.len());
    for (k, b) in cfg.bulk.iter().enumerate() {
        let z = Complex::new(embed(&b.z.re), embed(&b.z.im));
        out.push(Entry {
            x: z,
            weight: spec(&b.alpha.vector)?,
            origin: Origin::Bulk(k),
        });
    }
    for (k, b) in cfg.bulk.iter().enumerate() {
        let zb = Complex::new(embed(&b.z.re), -embed::<S>(&b.z.im));
        out.push(Entry {
            x: zb,
            weight: spec(&b.alpha.vector)?,
            origin: Origin::Mirror(k),
        });
    }
    for (l, b) in cfg.boundary.iter().enumerate() {
        out.push(Entry {
            x: Complex::new(embed(&b.s), S::zero()),
            weight: spec(&b.beta.vector)?,
            origin: Origin::Boundary(l),
        });
    }
    Ok(out)
}

/// The doubled list at the configured coupling.
pub fn doubled_insertions(cfg: &CorrelatorConfig) -> Vec<Entry<Q>> {
    doubled_insertions_in(cfg, &cfg.gamma).expect("validated config")
}

/// Symbolic doubled list (weights stay functions of γ).
pub fn doubled_insertions_symbolic(cfg: &CorrelatorConfig) -> Vec<Entry<GammaRational>> {
    doubled_insertions_in(cfg, &GammaRational::gamma()).expect("identity substitution")
}

fn total<S: Scalar>(weights: impl Iterator<Item = CartanVector<S>>) -> CartanVector<S> {
    weights.fold(CartanVector::zero(), |acc, w| acc + w)
}

/// Σ_doubled A = 2Q.
pub fn check_neutral<S: Scalar>(
    weights: impl Iterator<Item = CartanVector<S>>,
    c: &Couplings<S>,
) -> Result<(), FreeFieldError> {
    let s = total(weights) - c.background().scale(&S::from_int(2));
    if s.is_zero() {
        Ok(())
    } else {
        Err(FreeFieldError::NotNeutral(format!("{s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairExponent {
    pub a: usize,
    pub b: usize,
    /// exponent of (x_a − x_b)
    pub exponent: GammaRational,
}

/// Exponent table of the Coulomb factor over all pairs a < b of the doubled
/// list, the (z_k, z̄_k) self pairs included.
pub fn coulomb_log_correlator(cfg: &CorrelatorConfig) -> Result<Vec<PairExponent>, FreeFieldError> {
    if !cfg.neutral() {
        return Err(FreeFieldError::NotNeutral(format!(
            "{:?}",
            cfg.total_charge()
        )));
    }
    let e = doubled_insertions_symbolic(cfg);
    let mut out = Vec::new();
    for a in 0..e.len() {
        for b in a + 1..e.len() {
            let exponent = -e[a].weight.inner(&e[b].weight) * GammaRational::frac(1, 2);
            out.push(PairExponent { a, b, exponent });
        }
    }
    Ok(out)
}

/// ln|C| at the configured coupling, from the exponent table.
pub fn log_coulomb_value(cfg: &CorrelatorConfig, table: &[PairExponent]) -> f64 {
    let e = doubled_insertions(cfg);
    let g = q_to_f64(&cfg.gamma);
    table
        .iter()
        .map(|p| {
            let d = e[p.a].x.clone() - e[p.b].x.clone();
            let r = q_to_f64(&d.re).hypot(q_to_f64(&d.im));
            p.exponent.eval_f64(g) * r.ln()
        })
        .sum()
}

fn factorial(n: usize) -> Q {
    (1..=n as i64).fold(q_frac(1, 1), |acc, k| acc * q_frac(k, 1))
}

/// Σ_k ⟨v, A_k⟩·uₖ as a rational function of t.
pub fn charge_sum<S: Scalar>(
    entries: &[Entry<S>],
    points: &Arc<Vec<C<S>>>,
    v: &CartanVector<S>,
    p: usize,
) -> RationalField<S> {
    let w = factorial(p - 1) * q_frac(1, 2);
    entries
        .iter()
        .enumerate()
        .fold(RationalField::zero(points.clone()), |acc, (k, e)| {
            let c = v.inner(&e.weight).scale_q(&w);
            acc.add(&RationalField::pole(
                points.clone(),
                k,
                p,
                Complex::new(c, S::zero()),
            ))
        })
}

pub fn points_of<S: Scalar>(entries: &[Entry<S>]) -> Arc<Vec<C<S>>> {
    Arc::new(entries.iter().map(|e| e.x.clone()).collect())
}

/// ⟨form·V(t)𝐕⟩/⟨V(t)𝐕⟩ as a rational function of t: each ⟨eₐ,∂ᵖΦ⟩ becomes
/// (p−1)!·Σ_k ⟨eₐ,A_k⟩/(2(x_k − t)ᵖ).
pub fn ipp_insert<S: Scalar>(form: &FieldPolynomial<S>, entries: &[Entry<S>]) -> RationalField<S> {
    let points = points_of(entries);
    let mut cache = std::collections::HashMap::new();
    let mut out = RationalField::zero(points.clone());
    for (mono, coeff) in form.terms() {
        let mut prod =
            RationalField::constant(points.clone(), Complex::new(coeff.clone(), S::zero()));
        for &(p, a) in mono.factors() {
            let f = cache.entry((p, a)).or_insert_with(|| {
                charge_sum(
                    entries,
                    &points,
                    &CartanVector::basis(a as usize),
                    p as usize,
                )
            });
            prod = prod.mul(f);
        }
        out = out.add(&prod);
    }
    out
}

/// Same as [`ipp_insert`] evaluated at a single probe point.
pub fn ipp_eval<S: Scalar>(
    form: &FieldPolynomial<S>,
    entries: &[Entry<S>],
    t: &C<S>,
) -> Result<C<S>, FreeFieldError> {
    let mut inv = Vec::with_capacity(entries.len());
    for (k, e) in entries.iter().enumerate() {
        let d = e.x.clone() - t.clone();
        if d.is_zero() {
            return Err(FreeFieldError::ProbeCollision(k));
        }
        inv.push(C::<S>::one() / d);
    }
    let mut cache = std::collections::HashMap::new();
    let mut sum = |p: u32, a: u8| -> C<S> {
        cache
            .entry((p, a))
            .or_insert_with(|| {
                let w = factorial(p as usize - 1) * q_frac(1, 2);
                entries
                    .iter()
                    .zip(&inv)
                    .fold(C::<S>::zero(), |acc, (e, u)| {
                        let c = e.weight.pair_root(a as usize).scale_q(&w);
                        acc + Complex::new(c, S::zero()) * u.powu(p)
                    })
            })
            .clone()
    };
    let mut out = C::zero();
    for (mono, coeff) in form.terms() {
        let mut prod = Complex::new(coeff.clone(), S::zero());
        for &(p, a) in mono.factors() {
            prod = prod * sum(p, a);
        }
        out = out + prod;
    }
    Ok(out)
}

/// Residual of the differential identity matching the descendant L₋λ^β at t
/// with t-derivatives of the correlator, normalized by the correlator.
///
/// With S = ∂ₜ ln C: (1) ↔ S; (1,1) ↔ S² + S′; (1,1,1) ↔ S³ + 3SS′ + S″;
/// (2) ↔ G with G = Σₖ[∂ₖ ln C/(t−xₖ) + Δₖ/(t−xₖ)²]; (1,2) ↔ G′ + GS.
pub fn derivative_identity_residual<S: Scalar>(
    lambda: Partition,
    beta: &CartanVector<S>,
    entries: &[Entry<S>],
    c: &Couplings<S>,
) -> Result<RationalField<S>, FreeFieldError> {
    check_neutral(
        entries
            .iter()
            .map(|e| e.weight.clone())
            .chain([beta.clone()]),
        c,
    )?;
    let points = points_of(entries);
    let s = charge_sum(entries, &points, beta, 1);
    let s1 = s.derivative();
    let local = || {
        // ∂ₖ ln C without the probe, as constants cₖ
        let mut g = RationalField::zero(points.clone());
        for (k, e) in entries.iter().enumerate() {
            let mut ck = C::<S>::zero();
            for (l, f) in entries.iter().enumerate() {
                if l != k {
                    let a = e.weight.inner(&f.weight).scale_q(&q_frac(-1, 2));
                    ck = ck + Complex::new(a, S::zero()) / (e.x.clone() - f.x.clone());
                }
            }
            let pair = e.weight.inner(beta).scale_q(&q_frac(1, 2)) + c.conformal_weight(&e.weight);
            g = g.add(&RationalField::pole(points.clone(), k, 1, -ck));
            g = g.add(&RationalField::pole(
                points.clone(),
                k,
                2,
                Complex::new(pair, S::zero()),
            ));
        }
        g
    };
    let target = match lambda {
        Partition::Single(1) => s.clone(),
        Partition::Single(2) => local(),
        Partition::OneOne => s.mul(&s).add(&s1),
        Partition::OneOneOne => {
            let three = Complex::new(S::from_int(3), S::zero());
            s.mul(&s)
                .mul(&s)
                .add(&s.mul(&s1).scale(&three))
                .add(&s1.derivative())
        }
        Partition::OneTwo => {
            let g = local();
            g.derivative().add(&g.mul(&s))
        }
        other => {
            return Err(FreeFieldError::Form(
                w3_forms::FormError::UnsupportedPartition {
                    got: format!("{other:?}"),
                    supported: "(1), (2), (1,1), (1,2), (1,1,1)".into(),
                },
            ))
        }
    };
    let lhs = ipp_insert(&l_form_with(lambda, beta, c), entries);
    Ok(lhs.sub(&target))
}

/// Descendant data of one doubled entry, computed by integrating by parts
/// against all other entries.
#[derive(Clone, Debug, PartialEq)]
pub struct InsertionData<S> {
    pub l1: C<S>,
    pub w1: C<S>,
    pub w2: C<S>,
    pub delta: S,
    pub spin: S,
}

pub fn insertion_data<S: Scalar>(
    entries: &[Entry<S>],
    k: usize,
    c: &Couplings<S>,
    gamma: &S,
) -> Result<InsertionData<S>, FreeFieldError> {
    let real = realization()?;
    let here = &entries[k];
    let others: Vec<Entry<S>> = entries
        .iter()
        .enumerate()
        .filter(|(l, _)| *l != k)
        .map(|(_, e)| e.clone())
        .collect();
    let embed = |g: &GammaRational| {
        g.eval_in(gamma)
            .expect("current is regular at the coupling")
    };
    let a = &here.weight;
    Ok(InsertionData {
        l1: ipp_eval(&l_form_with(Partition::Single(1), a, c), &others, &here.x)?,
        w1: ipp_eval(&real.mode_with(1, a, embed), &others, &here.x)?,
        w2: ipp_eval(&real.mode_with(2, a, embed), &others, &here.x)?,
        delta: c.conformal_weight(a),
        spin: c.spin(a),
    })
}

/// Residuals of the three global Virasoro rows (n = 0..2) and five global W
/// rows (m = 0..4) with the free-field descendants substituted.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalWardResiduals<S> {
    pub virasoro: Vec<C<S>>,
    pub w: Vec<C<S>>,
}

impl<S: Scalar> GlobalWardResiduals<S> {
    pub fn all_zero(&self) -> bool {
        self.virasoro.iter().chain(&self.w).all(|r| r.is_zero())
    }
}

fn coeff_pow<S: Scalar>(x: &C<S>, n: i64, factor: i64) -> C<S> {
    if n < 0 || factor == 0 {
        return C::zero();
    }
    x.powu(n as u32).scale(S::from_int(factor))
}

pub fn global_ward_residuals<S: Scalar>(
    entries: &[Entry<S>],
    c: &Couplings<S>,
    gamma: &S,
) -> Result<GlobalWardResiduals<S>, FreeFieldError> {
    check_neutral(entries.iter().map(|e| e.weight.clone()), c)?;
    let data: Vec<InsertionData<S>> = (0..entries.len())
        .map(|k| insertion_data(entries, k, c, gamma))
        .collect::<Result<_, _>>()?;
    let re = |s: &S| Complex::new(s.clone(), S::zero());
    let virasoro = (0..3i64)
        .map(|n| {
            entries.iter().zip(&data).fold(C::zero(), |acc, (e, d)| {
                acc + coeff_pow(&e.x, n, 1) * d.l1.clone()
                    + coeff_pow(&e.x, n - 1, n) * re(&d.delta)
            })
        })
        .collect();
    let w = (0..5i64)
        .map(|m| {
            entries.iter().zip(&data).fold(C::zero(), |acc, (e, d)| {
                acc + coeff_pow(&e.x, m, 1) * d.w2.clone()
                    + coeff_pow(&e.x, m - 1, m) * d.w1.clone()
                    + coeff_pow(&e.x, m - 2, m * (m - 1) / 2) * re(&d.spin)
            })
        })
        .collect();
    Ok(GlobalWardResiduals { virasoro, w })
}
