//! Counting W-descendants left over once a boundary fully degenerate probe is
//! inserted and the global W identities are used.

use serde::Serialize;
use w3_forms::WeightTag;
use w3_freefield::CorrelatorConfig;

use crate::error::WardError;

/// Insertions other than the probe, grouped by degeneracy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct InsertionCounts {
    pub bulk_generic: usize,
    pub bulk_semi: usize,
    pub boundary_generic: usize,
    pub boundary_semi: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Closability {
    pub closable: bool,
    pub deficit: i64,
}

impl InsertionCounts {
    pub fn bulk(&self) -> usize {
        self.bulk_generic + self.bulk_semi
    }

    pub fn boundary(&self) -> usize {
        self.boundary_generic + self.boundary_semi
    }

    /// 4N + 2M unknowns, five W rows, two reductions per bulk and one per
    /// boundary semi-degenerate insertion. The probe's own descendants are
    /// differential operators and never count.
    pub fn deficit(&self) -> i64 {
        (4 * self.bulk() + 2 * self.boundary()) as i64
            - 5
            - 2 * self.bulk_semi as i64
            - self.boundary_semi as i64
    }

    pub fn closability(&self) -> Closability {
        let deficit = self.deficit();
        Closability {
            closable: deficit <= 0,
            deficit,
        }
    }

    /// Real dimension of the moduli once the probe is added: 2N + M + 1 − 3.
    pub fn cross_ratios(&self) -> i64 {
        (2 * self.bulk() + self.boundary()) as i64 - 2
    }

    /// Every way to turn exactly one semi-degenerate insertion generic.
    fn relaxations(&self) -> Vec<InsertionCounts> {
        let mut out = Vec::new();
        if self.bulk_semi > 0 {
            out.push(InsertionCounts {
                bulk_semi: self.bulk_semi - 1,
                bulk_generic: self.bulk_generic + 1,
                ..*self
            });
        }
        if self.boundary_semi > 0 {
            out.push(InsertionCounts {
                boundary_semi: self.boundary_semi - 1,
                boundary_generic: self.boundary_generic + 1,
                ..*self
            });
        }
        out
    }

    /// Closable, and no degenerate insertion can be relaxed to generic while
    /// staying closable.
    pub fn minimal(&self) -> bool {
        self.closability().closable && self.relaxations().iter().all(|r| !r.closability().closable)
    }

    /// The correlators that lead to an ordinary differential equation in one
    /// cross-ratio with no W-descendant left over.
    pub fn yields_ode(&self) -> bool {
        self.cross_ratios() == 1 && self.minimal()
    }
}

/// Counts from a configuration with exactly one fully degenerate boundary probe.
pub fn insertion_counts(cfg: &CorrelatorConfig) -> Result<InsertionCounts, WardError> {
    let mut counts = InsertionCounts {
        bulk_generic: 0,
        bulk_semi: 0,
        boundary_generic: 0,
        boundary_semi: 0,
    };
    for b in &cfg.bulk {
        match b.alpha.tag {
            WeightTag::Generic => counts.bulk_generic += 1,
            WeightTag::SemiDegenerate { .. } => counts.bulk_semi += 1,
            WeightTag::FullyDegenerate { .. } => {
                return Err(WardError::Weights(
                    "fully degenerate bulk insertions are not supported".into(),
                ))
            }
        }
    }
    let mut probes = 0;
    for b in &cfg.boundary {
        match b.beta.tag {
            WeightTag::Generic => counts.boundary_generic += 1,
            WeightTag::SemiDegenerate { .. } => counts.boundary_semi += 1,
            WeightTag::FullyDegenerate { .. } => probes += 1,
        }
    }
    if probes != 1 {
        return Err(WardError::Probe(probes));
    }
    Ok(counts)
}

pub fn closable(cfg: &CorrelatorConfig) -> Result<Closability, WardError> {
    Ok(insertion_counts(cfg)?.closability())
}

/// All degeneracy patterns with at most `max_bulk` bulk and `max_boundary`
/// boundary insertions (besides the probe), in a fixed order.
pub fn patterns(max_bulk: usize, max_boundary: usize) -> Vec<InsertionCounts> {
    let mut out = Vec::new();
    for n in 0..=max_bulk {
        for m in 0..=max_boundary {
            for bulk_semi in 0..=n {
                for boundary_semi in 0..=m {
                    out.push(InsertionCounts {
                        bulk_generic: n - bulk_semi,
                        bulk_semi,
                        boundary_generic: m - boundary_semi,
                        boundary_semi,
                    });
                }
            }
        }
    }
    out
}

/// Patterns for which the probe yields a closed ordinary differential equation.
pub fn closable_classes(max_bulk: usize, max_boundary: usize) -> Vec<InsertionCounts> {
    patterns(max_bulk, max_boundary)
        .into_iter()
        .filter(InsertionCounts::yields_ode)
        .collect()
}
