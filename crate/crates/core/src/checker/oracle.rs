//! Brute-force oracle: pure-vertex members plus uniformly sampled members,
//! each checked by direct root computation. Only unstable answers are
//! certain.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{check_member, CheckerConfig, Diagnostics, MemberCheck, Verdict, Witness, WitnessLocation};
use crate::determinant::VERTEX_ENUMERATION_CAP;
use crate::family::{vertex_members, CellParam, MatrixFamily};
use crate::polynomial::Polynomial;
use crate::region::Region;

/// Samples drawn from one random stream.
const STREAM_CHUNK: usize = 256;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleOutcome {
    /// Stable here means "no counterexample found".
    pub verdict: Verdict,
    pub samples: usize,
    pub vertex_members: u64,
    pub vertices_exhaustive: bool,
    /// Smallest normalized `|det|` at the boundary points nearest to the
    /// roots of the examined members.
    pub min_boundary_margin: Option<f64>,
    /// Some sampled member has a root outside the region by more than the
    /// tie-break tolerance.
    pub robust_counterexample: bool,
}

/// Normalized `|det(z)| / Σ|a_k||z|^k` at the boundary point closest to each
/// root of `det`, minimized over the roots. `None` for a constant.
pub fn boundary_margin(det: &Polynomial, region: &Region) -> Option<f64> {
    if det.is_zero() {
        return Some(0.0);
    }
    let roots = det.roots().ok()?;
    roots
        .into_iter()
        .map(|r| {
            let (piece, t) = region.project(r, f64::MAX);
            let z = piece.point(t);
            let scale = det.magnitude_scale(z);
            if scale > 0.0 {
                det.evaluate(z).norm() / scale
            } else {
                0.0
            }
        })
        .reduce(f64::min)
}

struct Probe {
    witness: Option<Witness>,
    margin: Option<f64>,
    robust: bool,
}

fn probe(f: &MatrixFamily, params: Vec<CellParam>, region: &Region, tol: f64) -> Probe {
    let det = match f.sample(&params) {
        Ok(m) => m.det(),
        Err(_) => return Probe { witness: None, margin: None, robust: false },
    };
    let margin = boundary_margin(&det, region);
    let witness = match check_member(&det, region, tol) {
        Ok(MemberCheck::Unstable(location)) => Some(Witness {
            lambda: None,
            pattern: None,
            params: Some(params),
            det,
            location,
        }),
        _ => None,
    };
    let robust = matches!(
        witness.as_ref().map(|w| &w.location),
        Some(WitnessLocation::Root { distance, .. }) if *distance < -tol
    );
    Probe { witness, margin, robust }
}

fn min_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

/// Checks all pure-vertex members (up to a cap) and `cfg.oracle_samples`
/// random members. Sample `k` comes from stream `k / 256` of a ChaCha8
/// generator seeded with `cfg.seed`, so results do not depend on the number
/// of worker threads.
pub fn monte_carlo_oracle(f: &MatrixFamily, region: &Region, cfg: &CheckerConfig) -> OracleOutcome {
    let tol = cfg.marginal_tol;
    let per_cell = f.vertex_params();
    let vertex_count = f.vertex_member_count();
    let exhaustive = vertex_count <= VERTEX_ENUMERATION_CAP;
    let vertex_list: Vec<Vec<CellParam>> = vertex_members(&per_cell)
        .take(VERTEX_ENUMERATION_CAP as usize)
        .collect();
    let vertex_probes: Vec<Probe> = vertex_list
        .into_par_iter()
        .map(|params| probe(f, params, region, tol))
        .collect();

    let chunks = cfg.oracle_samples.div_ceil(STREAM_CHUNK);
    let sample_probes: Vec<Probe> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(c as u64);
            let len = STREAM_CHUNK.min(cfg.oracle_samples - c * STREAM_CHUNK);
            (0..len)
                .map(|_| probe(f, f.random_params(&mut rng), region, tol))
                .collect::<Vec<_>>()
        })
        .collect();

    let vertex_members = vertex_probes.len() as u64;
    let mut margin = None;
    let mut witness = None;
    let mut robust = false;
    for pr in vertex_probes.into_iter().chain(sample_probes) {
        margin = min_opt(margin, pr.margin);
        robust |= pr.robust;
        if witness.is_none() {
            witness = pr.witness;
        }
    }
    let diagnostics = Diagnostics {
        families_checked: 1,
        vertex_members_checked: vertex_members,
        ..Default::default()
    };
    let verdict = match witness {
        Some(w) => Verdict::unstable(w, diagnostics),
        None => Verdict::stable(diagnostics),
    };
    OracleOutcome {
        verdict,
        samples: cfg.oracle_samples,
        vertex_members,
        vertices_exhaustive: exhaustive,
        min_boundary_margin: margin,
        robust_counterexample: robust,
    }
}
