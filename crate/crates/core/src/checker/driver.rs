//! Whole-family driver: builds the critical subset, checks pure vertices,
//! then every critical family.

use rayon::prelude::*;

use super::exclusion::critical_family_stable_after_vertices;
use super::{
    check_member, critical_family_stable, CheckerConfig, Diagnostics, Inconclusive, MemberCheck,
    Verdict, Witness,
};
use crate::critical_set::{CriticalFamily, CriticalIndex, CriticalSets};
use crate::determinant::{check_degree_invariant, PolyMatrix};
use crate::error::{Error, Result};
use crate::family::{CellParam, Entry, FamilyKind, MatrixFamily, Odometer, CORNER_COEFF_CAP};
use crate::polynomial::Polynomial;
use crate::region::Region;

/// Largest vertex set enumerated up front.
const VERTEX_PASS_CAP: u128 = 1 << 20;
/// Work items handed to the thread pool at a time.
const CHUNK: usize = 1024;

/// Parameter of one cell of the original family for the point `λ` of the
/// edge `from -> to` of its critical sets.
fn cell_param(entry: &Entry, from: usize, to: usize, lambda: f64, poly: &Polynomial) -> CellParam {
    match entry {
        Entry::Polytopic(p) => {
            let idx = p.distinct_indices();
            let mut w = vec![0.0; p.generators().len()];
            w[idx[from]] += 1.0 - lambda;
            w[idx[to]] += lambda;
            CellParam::Weights(w)
        }
        Entry::Interval(b) => CellParam::Coeffs(
            (0..b.len())
                .map(|k| poly.coeff(k).clamp(b.lower()[k], b.upper()[k]))
                .collect(),
        ),
    }
}

/// Rewrites a witness in terms of the original family's cell parameters and
/// recomputes its determinant from them.
fn lift_witness(f: &MatrixFamily, params: Vec<CellParam>, mut w: Witness) -> Witness {
    if let Ok(m) = f.sample(&params) {
        w.det = m.det();
    }
    w.params = Some(params);
    w
}

fn critical_params(f: &MatrixFamily, cf: &CriticalFamily, lambda: &[f64]) -> Vec<CellParam> {
    let n = cf.n;
    let member = cf.instantiate(lambda);
    (0..n * n)
        .map(|k| {
            let (row, col) = (k / n, k % n);
            let poly = member.get(row, col);
            match &cf.fixed[k] {
                Some(fc) => cell_param(f.entry(row, col), fc.vertex, fc.vertex, 0.0, poly),
                None => {
                    let e = &cf.designated[row];
                    cell_param(f.entry(row, col), e.from_vertex, e.to_vertex, lambda[row], poly)
                }
            }
        })
        .collect()
}

/// Checks up to `limit` pure-vertex members of `sets` in enumeration order.
/// Returns the first unstable one and whether the enumeration was complete.
fn vertex_pass(
    f: &MatrixFamily,
    sets: &CriticalSets,
    region: &Region,
    cfg: &CheckerConfig,
    limit: u128,
    diag: &mut Diagnostics,
) -> Result<(Option<Witness>, bool)> {
    let n = sets.n();
    let radices: Vec<usize> = (0..n * n).map(|k| sets.cell(k / n, k % n).vertices.len()).collect();
    let mut odometer = Odometer::new(radices);
    let mut seen: u128 = 0;
    loop {
        let take = (limit - seen).min(CHUNK as u128 * 16) as usize;
        let chunk: Vec<Vec<usize>> = odometer.by_ref().take(take).collect();
        if chunk.is_empty() {
            return Ok((None, true));
        }
        seen += chunk.len() as u128;
        diag.vertex_members_checked += chunk.len() as u64;
        let found = chunk
            .par_iter()
            .map(|digits| -> Result<Option<Witness>> {
                let cells: Vec<Polynomial> = digits
                    .iter()
                    .enumerate()
                    .map(|(k, &d)| sets.cell(k / n, k % n).vertices[d].clone())
                    .collect();
                let m = PolyMatrix::new(n, cells);
                let det = m.det();
                Ok(match check_member(&det, region, cfg.marginal_tol)? {
                    MemberCheck::Stable => None,
                    MemberCheck::Unstable(location) => {
                        let params = digits
                            .iter()
                            .enumerate()
                            .map(|(k, &d)| cell_param(f.entry(k / n, k % n), d, d, 0.0, m.get(k / n, k % n)))
                            .collect();
                        let w = Witness { lambda: None, pattern: None, params: None, det, location };
                        Some(lift_witness(f, params, w))
                    }
                })
            })
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            });
        if let Some(r) = found {
            return r.map(|w| (w, false));
        }
        if seen >= limit {
            return Ok((None, false));
        }
    }
}

/// Decides robust stability of a family over `region` by checking its
/// critical subset. Interval families on the Hurwitz region use the
/// Kharitonov sets; everything else goes through the polytopic sets.
pub fn family_stable(f: &MatrixFamily, region: &Region, cfg: &CheckerConfig) -> Result<Verdict> {
    cfg.validate()?;
    let sets = if f.kind() == FamilyKind::Interval && *region == Region::Hurwitz {
        CriticalSets::kharitonov(f)?
    } else {
        CriticalSets::polytopic(&f.to_polytopic(CORNER_COEFF_CAP)?)?
    };
    let count = sets.count();
    if count > cfg.budget as u128 {
        return Err(Error::Capacity {
            what: "critical subset".into(),
            count,
            limit: cfg.budget as u128,
        });
    }

    let mut diag = Diagnostics::default();
    let degree = check_degree_invariant(f, cfg.degree_samples, cfg.seed);
    let vertex_count = sets.vertex_member_count();
    let (witness, exhaustive) = vertex_pass(f, &sets, region, cfg, vertex_count.min(VERTEX_PASS_CAP), &mut diag)?;
    if let Some(w) = witness {
        return Ok(Verdict::unstable(w, diag));
    }
    if !degree.constant {
        return Ok(Verdict::inconclusive(
            Inconclusive::DegreeVariance { observed: degree.observed_degrees },
            diag,
        ));
    }

    let mut verdict = Verdict::stable(diag);
    let mut indices = sets.indices();
    loop {
        let chunk: Vec<CriticalIndex> = indices.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let results: Vec<(Verdict, Option<CriticalFamily>)> = chunk
            .par_iter()
            .map(|idx| {
                let cf = sets.materialize(idx);
                let v = if exhaustive {
                    critical_family_stable_after_vertices(&cf, region, cfg)
                } else {
                    critical_family_stable(&cf, region, cfg)
                };
                let keep = v.is_unstable().then_some(cf);
                (v, keep)
            })
            .collect();
        for (mut v, cf) in results {
            if let (Some(cf), Some(w)) = (cf, v.witness.take()) {
                let lambda = w.lambda.clone().unwrap_or_else(|| vec![0.0; cf.n]);
                let params = critical_params(f, &cf, &lambda);
                v.witness = Some(lift_witness(f, params, w));
            }
            verdict = verdict.merge(v);
            if verdict.is_unstable() {
                return Ok(verdict);
            }
        }
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{confirm_unstable, monte_carlo_oracle, segment_stable, Status};
    use crate::family::{IntervalEntry, PolytopicEntry};

    fn p(c: &[f64]) -> Polynomial {
        Polynomial::new(c.to_vec())
    }

    fn poly_entry(gens: &[&[f64]]) -> Entry {
        Entry::Polytopic(PolytopicEntry::new(gens.iter().map(|g| p(g)).collect()).unwrap())
    }

    fn interval_entry(lo: &[f64], hi: &[f64]) -> Entry {
        Entry::Interval(IntervalEntry::new(lo.to_vec(), hi.to_vec()).unwrap())
    }

    fn one(e: Entry) -> MatrixFamily {
        MatrixFamily::new(1, vec![e]).unwrap()
    }

    fn cfg() -> CheckerConfig {
        CheckerConfig::default()
    }

    #[test]
    fn scalar_interval_examples() {
        let f = one(interval_entry(&[1.0, 1.0], &[2.0, 1.0]));
        assert_eq!(family_stable(&f, &Region::Hurwitz, &cfg()).unwrap().status, Status::Stable);

        let f = one(interval_entry(&[-1.0, 1.0], &[1.0, 1.0]));
        let v = family_stable(&f, &Region::Hurwitz, &cfg()).unwrap();
        assert_eq!(v.status, Status::Unstable);
        let w = v.witness.unwrap();
        let params = w.params.clone().unwrap();
        let CellParam::Coeffs(c) = &params[0] else { panic!("interval witness") };
        assert!(c[0] <= 1e-6, "root at -a must not be inside: a = {}", c[0]);
        let det = f.sample(&params).unwrap().det();
        assert!(confirm_unstable(&det, &Region::Hurwitz, 1e-6));
    }

    #[test]
    fn two_by_two_polytopic_example() {
        let ab = || poly_entry(&[&[1.0, 1.0], &[2.0, 1.0]]);
        let c = || poly_entry(&[&[0.0], &[0.1]]);
        let f = MatrixFamily::from_rows(vec![vec![ab(), c()], vec![c(), ab()]]).unwrap();
        let v = family_stable(&f, &Region::Hurwitz, &cfg()).unwrap();
        assert_eq!(v.status, Status::Stable, "{:?}", v.reason);
        assert_eq!(v.diagnostics.families_checked as u128, count_of(&f));
        let oracle = monte_carlo_oracle(&f, &Region::Hurwitz, &CheckerConfig { oracle_samples: 100_000, ..cfg() });
        assert_eq!(oracle.verdict.status, Status::Stable);
    }

    fn count_of(f: &MatrixFamily) -> u128 {
        crate::critical_set::count_critical(f).unwrap()
    }

    #[test]
    fn budget_is_enforced() {
        let g = || poly_entry(&[&[1.0, 1.0], &[2.0, 1.0], &[3.0, 1.0]]);
        let f = MatrixFamily::from_rows(vec![vec![g(), g()], vec![g(), g()]]).unwrap();
        let err = family_stable(&f, &Region::Hurwitz, &CheckerConfig { budget: 10, ..cfg() }).unwrap_err();
        assert_eq!(err, Error::Capacity { what: "critical subset".into(), count: 162, limit: 10 });
    }

    #[test]
    fn degree_variance_is_inconclusive_without_vertex_witness() {
        // [[λ s + 1]]: degree 0 at λ = 0, degree 1 elsewhere, always stable
        let f = one(poly_entry(&[&[1.0], &[1.0, 1.0]]));
        let v = family_stable(&f, &Region::Hurwitz, &cfg()).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert!(matches!(v.reason, Some(Inconclusive::DegreeVariance { .. })));
    }

    #[test]
    fn scalar_families_agree_with_segment_and_kharitonov_checks() {
        let box_ = IntervalEntry::new(vec![1.0, 2.0, 1.5, 1.0], vec![2.0, 3.0, 2.5, 1.2]).unwrap();
        let f = one(Entry::Interval(box_.clone()));
        let family = family_stable(&f, &Region::Hurwitz, &cfg()).unwrap();
        let edges = box_
            .kharitonov_edges()
            .iter()
            .map(|(a, b)| segment_stable(a, b, &Region::Hurwitz, &cfg()))
            .fold(Verdict::stable(Diagnostics::default()), Verdict::merge);
        assert_eq!(family.status, edges.status);

        let f = one(poly_entry(&[&[2.0, 2.0, 1.0], &[2.0, -2.0, 1.0]]));
        let family = family_stable(&f, &Region::Hurwitz, &cfg()).unwrap();
        let seg = segment_stable(&p(&[2.0, 2.0, 1.0]), &p(&[2.0, -2.0, 1.0]), &Region::Hurwitz, &cfg());
        assert_eq!(family.status, Status::Unstable);
        assert_eq!(family.status, seg.status);
    }

    #[test]
    fn interior_crossing_is_lifted_to_family_parameters() {
        let f = one(poly_entry(&[&[1.0, 4.0, 4.0, 10.0], &[10.0, 4.0, 4.0, 1.0]]));
        let v = family_stable(&f, &Region::Hurwitz, &cfg()).unwrap();
        assert_eq!(v.status, Status::Unstable);
        let w = v.witness.unwrap();
        let params = w.params.unwrap();
        let det = f.sample(&params).unwrap().det();
        assert!(confirm_unstable(&det, &Region::Hurwitz, 1e-6));
    }

    #[test]
    fn non_hurwitz_interval_uses_corners() {
        let f = one(interval_entry(&[0.1, 1.0], &[0.3, 1.0]));
        let v = family_stable(&f, &Region::Disk, &cfg()).unwrap();
        assert_eq!(v.status, Status::Stable);
        let f = one(interval_entry(&[0.5, 1.0], &[1.5, 1.0]));
        let v = family_stable(&f, &Region::Disk, &cfg()).unwrap();
        assert_eq!(v.status, Status::Unstable);
    }

    #[test]
    fn shrinking_a_family_keeps_it_stable() {
        let full = MatrixFamily::from_rows(vec![
            vec![poly_entry(&[&[1.0, 1.0], &[2.0, 1.0], &[3.0, 1.0]]), poly_entry(&[&[0.0], &[0.2]])],
            vec![poly_entry(&[&[0.1]]), poly_entry(&[&[2.0, 1.0], &[4.0, 1.0]])],
        ])
        .unwrap();
        let sub = MatrixFamily::from_rows(vec![
            vec![poly_entry(&[&[1.0, 1.0], &[3.0, 1.0]]), poly_entry(&[&[0.2]])],
            vec![poly_entry(&[&[0.1]]), poly_entry(&[&[4.0, 1.0]])],
        ])
        .unwrap();
        assert!(family_stable(&full, &Region::Hurwitz, &cfg()).unwrap().is_stable());
        assert!(family_stable(&sub, &Region::Hurwitz, &cfg()).unwrap().is_stable());
    }

    #[test]
    fn fixed_matrix() {
        let m = PolyMatrix::from_rows(vec![
            vec![p(&[1.0, 1.0]), p(&[1.0])],
            vec![p(&[0.0]), p(&[-1.0, 1.0])],
        ]);
        let f = MatrixFamily::fixed(&m);
        let v = family_stable(&f, &Region::Hurwitz, &cfg()).unwrap();
        assert_eq!(v.status, Status::Unstable);
        assert!(confirm_unstable(&v.witness.unwrap().det, &Region::Hurwitz, 1e-6));
    }
}
