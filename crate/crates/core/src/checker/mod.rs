//! Stability decisions: single polynomials, segments, critical families,
//! whole families, and a Monte Carlo oracle.

mod driver;
mod exclusion;
mod oracle;
mod value_set;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::CellParam;
use crate::polynomial::Polynomial;
use crate::region::Region;

pub use driver::family_stable;
pub use exclusion::{critical_family_stable, segment_stable, MultiAffineDet};
pub use oracle::{boundary_margin, monte_carlo_oracle, OracleOutcome};
pub use value_set::{
    critical_enclosure, family_enclosure, family_sweep_limit, value_set, ValueSetSource,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckerConfig {
    /// Number of initial boundary arcs (and sample points for exports).
    pub boundary_count: usize,
    /// Sweep limit for unbounded boundaries, as a multiple of `1 + R` where
    /// `R` is a Cauchy bound on the roots.
    pub sweep_multiple: f64,
    /// Maximum number of bisections along any branch of the subdivision.
    pub max_depth: usize,
    /// Relative margin by which enclosures must miss the origin.
    pub exclusion_margin: f64,
    pub oracle_samples: usize,
    pub seed: u64,
    /// Largest critical subset the driver will enumerate.
    pub budget: u64,
    /// Random interior members used by the degree-invariance precheck.
    pub degree_samples: usize,
    /// Roots closer than this to the boundary count as not inside.
    pub marginal_tol: f64,
}

impl Default for CheckerConfig {
    fn default() -> Self {
        CheckerConfig {
            boundary_count: 512,
            sweep_multiple: 10.0,
            max_depth: 24,
            exclusion_margin: 1e-9,
            oracle_samples: 10_000,
            seed: 42,
            budget: 2_000_000,
            degree_samples: 1000,
            marginal_tol: 1e-6,
        }
    }
}

impl CheckerConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("boundary_count", self.boundary_count as f64),
            ("sweep_multiple", self.sweep_multiple),
            ("max_depth", self.max_depth as f64),
            ("exclusion_margin", self.exclusion_margin),
            ("oracle_samples", self.oracle_samples as f64),
            ("budget", self.budget as f64),
            ("degree_samples", self.degree_samples as f64),
            ("marginal_tol", self.marginal_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Invalid(format!("config field {name} must be positive")));
            }
        }
        if self.boundary_count < 2 {
            return Err(Error::Invalid("boundary_count must be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Stable,
    Unstable,
    Inconclusive,
}

/// A complex number in reports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Point {
    fn from(z: Complex64) -> Self {
        Point { re: z.re, im: z.im }
    }
}

impl From<Point> for Complex64 {
    fn from(p: Point) -> Self {
        Complex64::new(p.re, p.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessLocation {
    /// A root of the member's determinant outside the region or within the
    /// marginal tolerance of its boundary; `distance` is the signed distance
    /// (positive inside).
    Root { root: Point, distance: f64 },
    /// The member's determinant vanishes at this boundary point.
    BoundaryCrossing { point: Point },
    /// The member's determinant is identically zero.
    Singular,
}

/// An unstable member, re-checkable from its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Edge parameters of the critical family the member came from.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<f64>>,
    /// Designated columns of that critical family.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<Vec<usize>>,
    /// Row-major cell parameters within the original family.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<CellParam>>,
    pub det: Polynomial,
    pub location: WitnessLocation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Inconclusive {
    /// The determinant degree changes along the parameter box.
    DegreeDrop {
        lambda: Vec<f64>,
        degree: Option<usize>,
        expected: Option<usize>,
    },
    /// The family-wide degree precheck saw several degrees.
    DegreeVariance { observed: Vec<Option<usize>> },
    /// Subdivision reached the depth limit without excluding zero or finding
    /// a crossing.
    DepthExhausted {
        max_depth: usize,
        point: Point,
        lambda: Vec<f64>,
    },
    /// The critical subset is larger than the configured budget.
    Budget { count: u128, budget: u64 },
    Numerical { message: String },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub families_checked: u64,
    pub vertex_members_checked: u64,
    pub boundary_arcs: u64,
    pub boxes_examined: u64,
    pub max_depth_reached: usize,
    /// Smallest `dist(0, enclosure) / scale` over excluded boxes.
    pub min_exclusion_margin: Option<f64>,
}

impl Diagnostics {
    pub fn merge(&mut self, other: &Diagnostics) {
        self.families_checked += other.families_checked;
        self.vertex_members_checked += other.vertex_members_checked;
        self.boundary_arcs += other.boundary_arcs;
        self.boxes_examined += other.boxes_examined;
        self.max_depth_reached = self.max_depth_reached.max(other.max_depth_reached);
        self.min_exclusion_margin = match (self.min_exclusion_margin, other.min_exclusion_margin) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<Inconclusive>,
    pub diagnostics: Diagnostics,
}

impl Verdict {
    pub fn stable(diagnostics: Diagnostics) -> Self {
        Verdict { status: Status::Stable, witness: None, reason: None, diagnostics }
    }

    pub fn unstable(witness: Witness, diagnostics: Diagnostics) -> Self {
        Verdict { status: Status::Unstable, witness: Some(witness), reason: None, diagnostics }
    }

    pub fn inconclusive(reason: Inconclusive, diagnostics: Diagnostics) -> Self {
        Verdict { status: Status::Inconclusive, witness: None, reason: Some(reason), diagnostics }
    }

    pub fn is_stable(&self) -> bool {
        self.status == Status::Stable
    }

    pub fn is_unstable(&self) -> bool {
        self.status == Status::Unstable
    }

    /// Combines verdicts of disjoint parts: any unstable wins (the left one
    /// on ties), then any inconclusive, else stable. Diagnostics add up.
    pub fn merge(self, other: Verdict) -> Verdict {
        let mut diagnostics = self.diagnostics.clone();
        diagnostics.merge(&other.diagnostics);
        let winner = match (self.status, other.status) {
            (Status::Unstable, _) => self,
            (_, Status::Unstable) => other,
            (Status::Inconclusive, _) => self,
            (_, Status::Inconclusive) => other,
            _ => self,
        };
        Verdict { diagnostics, ..winner }
    }
}

/// Result of checking one concrete determinant against a region.
#[derive(Clone, Debug, PartialEq)]
pub enum MemberCheck {
    Stable,
    Unstable(WitnessLocation),
}

/// Whether every root of `p` lies strictly inside `region`.
pub fn is_stable(p: &Polynomial, region: &Region) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::Domain("stability of the zero polynomial".into()));
    }
    Ok(p.roots()?.into_iter().all(|r| region.contains(r)))
}

/// Member check with the marginal tie-break: a root within `marginal_tol`
/// of the boundary makes the member not stable. A zero determinant is
/// reported as singular.
pub fn check_member(det: &Polynomial, region: &Region, marginal_tol: f64) -> Result<MemberCheck> {
    if det.is_zero() {
        return Ok(MemberCheck::Unstable(WitnessLocation::Singular));
    }
    let worst = det
        .roots()?
        .into_iter()
        .map(|r| (r, region.signed_distance(r)))
        .min_by(|a, b| a.1.total_cmp(&b.1));
    Ok(match worst {
        Some((root, distance)) if distance <= marginal_tol => {
            MemberCheck::Unstable(WitnessLocation::Root { root: root.into(), distance })
        }
        _ => MemberCheck::Stable,
    })
}

/// Independent confirmation of a witness: its determinant is zero or has a
/// root outside the region or within `tol` of the boundary.
pub fn confirm_unstable(det: &Polynomial, region: &Region, tol: f64) -> bool {
    matches!(check_member(det, region, tol), Ok(MemberCheck::Unstable(_)))
}
