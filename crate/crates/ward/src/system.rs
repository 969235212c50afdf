//! Global Ward identities as a linear system in the W-descendants of the
//! doubled insertions.

use std::fmt::Display;

use num_traits::Zero;
use serde_json::{json, Value};
use w3_algebra::{Couplings, GammaRational, Q};
use w3_forms::WeightTag;
use w3_freefield::{
    doubled_insertions_in, CorrelatorConfig, Entry, InsertionData, Origin, Scalar, C,
};

use crate::error::WardError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WKind {
    /// 𝒲₋₁
    W1,
    /// 𝒲₋₂
    W2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Unknown {
    pub entry: usize,
    pub origin: Origin,
    pub kind: WKind,
}

/// Σ a·unknown + Σ b·𝓛₋₁^{(k)} + c = 0, everything divided by the primary
/// correlator.
#[derive(Clone, Debug, PartialEq)]
pub struct WardRow<S> {
    pub label: String,
    pub unknowns: Vec<(usize, C<S>)>,
    pub derivatives: Vec<(usize, C<S>)>,
    pub constant: C<S>,
}

/// 𝒲₋₁^{(entry)} = factor·𝓛₋₁^{(entry)}, from a level-one null vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction<S> {
    pub unknown: usize,
    pub factor: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WardSystem<S> {
    pub points: Vec<C<S>>,
    pub origins: Vec<Origin>,
    pub unknowns: Vec<Unknown>,
    /// m = 0..4
    pub w_rows: Vec<WardRow<S>>,
    /// n = 0..2
    pub virasoro_rows: Vec<WardRow<S>>,
    pub reductions: Vec<Reduction<S>>,
}

fn pow<S: Scalar>(x: &C<S>, n: i64, factor: i64) -> C<S> {
    if n < 0 || factor == 0 {
        return C::zero();
    }
    x.powu(n as u32).scale(S::from_int(factor))
}

fn real<S: Scalar>(s: S) -> C<S> {
    C::new(s, S::zero())
}

fn tag_of<'a>(cfg: &'a CorrelatorConfig, origin: Origin) -> &'a WeightTag {
    match origin {
        Origin::Bulk(k) | Origin::Mirror(k) => &cfg.bulk[k].alpha.tag,
        Origin::Boundary(l) => &cfg.boundary[l].beta.tag,
    }
}

/// Assemble the eight global rows with weights specialized at γ ↦ `gamma`.
pub fn global_ward_system_in<S: Scalar>(
    cfg: &CorrelatorConfig,
    gamma: &S,
) -> Result<WardSystem<S>, WardError> {
    let entries: Vec<Entry<S>> = doubled_insertions_in(cfg, gamma)?;
    let c = Couplings::from_gamma(gamma.clone());
    let unknowns: Vec<Unknown> = entries
        .iter()
        .enumerate()
        .flat_map(|(k, e)| {
            [WKind::W1, WKind::W2].map(|kind| Unknown {
                entry: k,
                origin: e.origin,
                kind,
            })
        })
        .collect();
    let index = |k: usize, kind: WKind| 2 * k + usize::from(kind == WKind::W2);

    let w_rows = (0..5i64)
        .map(|m| {
            let mut row = WardRow {
                label: format!("W, m={m}"),
                unknowns: Vec::new(),
                derivatives: Vec::new(),
                constant: C::zero(),
            };
            for (k, e) in entries.iter().enumerate() {
                row.unknowns.push((index(k, WKind::W2), pow(&e.x, m, 1)));
                if m >= 1 {
                    row.unknowns
                        .push((index(k, WKind::W1), pow(&e.x, m - 1, m)));
                }
                row.constant = row.constant.clone()
                    + pow(&e.x, m - 2, m * (m - 1) / 2) * real(c.spin(&e.weight));
            }
            row
        })
        .collect();
    let virasoro_rows = (0..3i64)
        .map(|n| {
            let mut row = WardRow {
                label: format!("L, n={n}"),
                unknowns: Vec::new(),
                derivatives: Vec::new(),
                constant: C::zero(),
            };
            for (k, e) in entries.iter().enumerate() {
                row.derivatives.push((k, pow(&e.x, n, 1)));
                row.constant = row.constant.clone()
                    + pow(&e.x, n - 1, n) * real(c.conformal_weight(&e.weight));
            }
            row
        })
        .collect();

    let mut reductions = Vec::new();
    for (k, e) in entries.iter().enumerate() {
        if let WeightTag::SemiDegenerate { .. } = tag_of(cfg, e.origin) {
            let delta = c.conformal_weight(&e.weight);
            if delta.is_zero() {
                return Err(WardError::Weights(format!(
                    "semi-degenerate entry {k} has vanishing conformal weight"
                )));
            }
            let factor = c.spin(&e.weight).scale_q(&w3_algebra::q_frac(3, 2)) / delta;
            reductions.push(Reduction {
                unknown: index(k, WKind::W1),
                factor,
            });
        }
    }
    Ok(WardSystem {
        points: entries.iter().map(|e| e.x.clone()).collect(),
        origins: entries.iter().map(|e| e.origin).collect(),
        unknowns,
        w_rows,
        virasoro_rows,
        reductions,
    })
}

/// Symbolic in γ.
pub fn global_ward_system(cfg: &CorrelatorConfig) -> Result<WardSystem<GammaRational>, WardError> {
    global_ward_system_in(cfg, &GammaRational::gamma())
}

/// At the configured coupling.
pub fn global_ward_system_at(cfg: &CorrelatorConfig) -> Result<WardSystem<Q>, WardError> {
    global_ward_system_in(cfg, &cfg.gamma)
}

impl<S: Scalar> WardRow<S> {
    /// Row value with `unknown(i)` and 𝓛₋₁^{(k)} = `l1(k)` supplied.
    pub fn eval(&self, unknown: impl Fn(usize) -> C<S>, l1: impl Fn(usize) -> C<S>) -> C<S> {
        let a = self
            .unknowns
            .iter()
            .fold(C::<S>::zero(), |acc, (i, c)| acc + c.clone() * unknown(*i));
        let b = self
            .derivatives
            .iter()
            .fold(C::<S>::zero(), |acc, (k, c)| acc + c.clone() * l1(*k));
        a + b + self.constant.clone()
    }
}

impl<S: Scalar> WardSystem<S> {
    pub fn rows(&self) -> impl Iterator<Item = &WardRow<S>> {
        self.w_rows.iter().chain(&self.virasoro_rows)
    }

    fn value(&self, data: &[InsertionData<S>], i: usize) -> C<S> {
        let u = &self.unknowns[i];
        match u.kind {
            WKind::W1 => data[u.entry].w1.clone(),
            WKind::W2 => data[u.entry].w2.clone(),
        }
    }

    /// Row residuals (W rows first) with descendant data substituted.
    pub fn residuals(&self, data: &[InsertionData<S>]) -> Vec<C<S>> {
        self.rows()
            .map(|r| r.eval(|i| self.value(data, i), |k| data[k].l1.clone()))
            .collect()
    }

    /// The system after eliminating the reducible 𝒲₋₁ in favour of 𝓛₋₁.
    pub fn reduced(&self) -> WardSystem<S> {
        let mut out = self.clone();
        for row in out.w_rows.iter_mut().chain(out.virasoro_rows.iter_mut()) {
            let mut kept = Vec::new();
            for (i, c) in row.unknowns.drain(..) {
                match self.reductions.iter().find(|r| r.unknown == i) {
                    Some(r) => {
                        let k = self.unknowns[i].entry;
                        let add = c * real(r.factor.clone());
                        match row.derivatives.iter_mut().find(|(j, _)| *j == k) {
                            Some((_, d)) => *d = d.clone() + add,
                            None => row.derivatives.push((k, add)),
                        }
                    }
                    None => kept.push((i, c)),
                }
            }
            row.unknowns = kept;
        }
        out
    }

    /// Unknowns not removed by a reduction.
    pub fn free_unknowns(&self) -> Vec<usize> {
        (0..self.unknowns.len())
            .filter(|i| self.reductions.iter().all(|r| r.unknown != *i))
            .collect()
    }
}

fn origin_label(o: Origin) -> String {
    match o {
        Origin::Bulk(k) => format!("z{k}"),
        Origin::Mirror(k) => format!("conj(z{k})"),
        Origin::Boundary(l) => format!("s{l}"),
    }
}

fn cplx<S: Scalar + Display>(c: &C<S>) -> Value {
    json!([c.re.to_string(), c.im.to_string()])
}

impl<S: Scalar + Display> WardSystem<S> {
    /// Dense matrix form: one column per unknown, one per 𝓛₋₁^{(k)}, then the
    /// constant column; entries are [re, im] strings.
    pub fn to_json(&self) -> Value {
        let n = self.points.len();
        let mut columns: Vec<String> = self
            .unknowns
            .iter()
            .map(|u| {
                format!(
                    "{}[{}]",
                    if u.kind == WKind::W1 { "W_-1" } else { "W_-2" },
                    origin_label(u.origin)
                )
            })
            .collect();
        columns.extend(
            self.origins
                .iter()
                .map(|o| format!("L_-1[{}]", origin_label(*o))),
        );
        columns.push("1".into());
        let zero = C::<S>::zero();
        let rows: Vec<Value> = self
            .rows()
            .map(|r| {
                let mut dense = vec![zero.clone(); self.unknowns.len() + n + 1];
                for (i, c) in &r.unknowns {
                    dense[*i] = dense[*i].clone() + c.clone();
                }
                for (k, c) in &r.derivatives {
                    dense[self.unknowns.len() + k] = dense[self.unknowns.len() + k].clone() + c.clone();
                }
                dense[self.unknowns.len() + n] = r.constant.clone();
                json!({"label": r.label, "coefficients": dense.iter().map(cplx).collect::<Vec<_>>()})
            })
            .collect();
        let reductions: Vec<Value> = self
            .reductions
            .iter()
            .map(|r| json!({"unknown": columns[r.unknown], "equals": format!("({})*{}", r.factor, columns[self.unknowns.len() + self.unknowns[r.unknown].entry])}))
            .collect();
        json!({
            "points": self.points.iter().map(cplx).collect::<Vec<_>>(),
            "columns": columns,
            "rows": rows,
            "reductions": reductions,
        })
    }
}
