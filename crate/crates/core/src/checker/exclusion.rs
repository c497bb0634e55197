//! Zero exclusion for critical families.
//!
//! With one designated cell per row and column, the determinant of a
//! critical family is multi-affine in its edge parameters:
//!
//! ```text
//! det(s; λ) = Σ_{S ⊆ rows} (Π_{r ∈ S} λ_r) c_S(s)
//! ```
//!
//! where `c_S` is the determinant of the matrix whose rows in `S` are
//! replaced by the edge direction at the designated cell. The engine covers
//! the boundary with arcs and the parameter cube with boxes, encloses the
//! value set of each arc-box by a mean-value rectangle and bisects until
//! zero is excluded, a crossing is found, or the depth limit is reached.


use num_complex::Complex64;

use super::{
    check_member, CheckerConfig, Diagnostics, Inconclusive, MemberCheck, Verdict, Witness,
    WitnessLocation,
};
use crate::critical_set::CriticalFamily;
use crate::determinant::PolyMatrix;
use crate::error::Result;
use crate::interval::Rect;
use crate::polynomial::Polynomial;
use crate::region::{BoundaryPiece, Region};

/// Grid used to locate the first unstable member along a ray of the cube.
const EXIT_GRID: usize = 1000;
/// Leaves left undecided before the engine gives up on a family.
const UNRESOLVED_CAP: usize = 16;
/// Point sets up to this size get an exact hull distance.
const HULL_POINTS: usize = 16;
/// Hard cap on arc-boxes examined for one family.
const BOX_CAP: u64 = 1 << 22;

/// Multi-affine expansion of a critical family's determinant.
#[derive(Clone, Debug)]
pub struct MultiAffineDet {
    n: usize,
    terms: Vec<Polynomial>,
    dterms: Vec<Polynomial>,
    /// Absolute coefficients of `c_S'` and `c_S''`, bounding them on disks.
    dabs: Vec<Vec<f64>>,
    d2abs: Vec<Vec<f64>>,
    abs_sum: Polynomial,
    /// Subsets of the active rows, the empty set first.
    subsets: Vec<usize>,
    /// Bit `r` is set when row `r` has a nondegenerate edge.
    active: usize,
}

impl MultiAffineDet {
    pub fn new(cf: &CriticalFamily) -> Self {
        let n = cf.n;
        let base: Vec<Polynomial> = cf
            .fixed
            .iter()
            .map(|c| c.as_ref().map(|f| f.poly.clone()).unwrap_or_default())
            .collect();
        let mut active = 0usize;
        for e in &cf.designated {
            if e.from != e.to {
                active |= 1 << e.row;
            }
        }
        let terms: Vec<Polynomial> = (0..1usize << n)
            .map(|mask| {
                if mask & !active != 0 {
                    return Polynomial::zero();
                }
                let mut cells = base.clone();
                for e in &cf.designated {
                    if mask >> e.row & 1 == 1 {
                        for c in 0..n {
                            cells[e.row * n + c] = Polynomial::zero();
                        }
                        cells[e.row * n + e.col] = &e.to - &e.from;
                    } else {
                        cells[e.row * n + e.col] = e.from.clone();
                    }
                }
                PolyMatrix::new(n, cells).det()
            })
            .collect();
        let dterms: Vec<Polynomial> = terms.iter().map(Polynomial::derivative).collect();
        let abs_of = |p: &Polynomial| -> Vec<f64> { p.coeffs().iter().map(|c| c.abs()).collect() };
        let dabs = dterms.iter().map(abs_of).collect();
        let d2abs = dterms.iter().map(|d| abs_of(&d.derivative())).collect();
        let abs_sum = terms
            .iter()
            .fold(Polynomial::zero(), |acc, t| &acc + &t.abs_coeffs());
        MultiAffineDet { n, terms, dterms, dabs, d2abs, abs_sum, subsets: active_subsets(active).collect(), active }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coefficient polynomial of `Π_{r ∈ S} λ_r`, `S` given as a bitmask.
    pub fn term(&self, mask: usize) -> &Polynomial {
        &self.terms[mask]
    }

    fn weights(&self, lambda: &[f64]) -> Vec<f64> {
        let mut w = vec![1.0; 1 << self.n];
        for mask in 1..w.len() {
            let low = mask.trailing_zeros() as usize;
            w[mask] = w[mask & (mask - 1)] * lambda[low];
        }
        w
    }

    /// The determinant at parameters `lambda`.
    pub fn poly_at(&self, lambda: &[f64]) -> Polynomial {
        self.weights(lambda)
            .iter()
            .zip(&self.terms)
            .filter(|(&w, _)| w != 0.0)
            .fold(Polynomial::zero(), |acc, (&w, t)| &acc + &t.scale(w))
    }

    /// The determinant at the cube vertex whose coordinates are the bits of `mask`.
    pub fn vertex_poly(&self, mask: usize) -> Polynomial {
        (0..self.terms.len())
            .filter(|&s| s & !mask == 0)
            .fold(Polynomial::zero(), |acc, s| &acc + &self.terms[s])
    }

    pub fn evaluate(&self, z: Complex64, lambda: &[f64]) -> Complex64 {
        self.weights(lambda)
            .iter()
            .zip(&self.terms)
            .map(|(&w, t)| t.evaluate(z) * w)
            .sum()
    }

    /// Coefficientwise `Σ_S |c_S|`, a scale for values at parameters in the cube.
    pub fn magnitude_scale(&self, z: Complex64) -> f64 {
        self.abs_sum.evaluate_real(z.norm())
    }

    /// `∂ det / ∂ λ_k` at `z`, from the term values there.
    fn partial(&self, values: &[Complex64], lambda: &[f64], k: usize) -> Complex64 {
        let mut lam = lambda.to_vec();
        lam[k] = 1.0;
        let w = self.weights(&lam);
        (0..values.len())
            .filter(|&s| s >> k & 1 == 1)
            .map(|s| values[s] * w[s & !(1 << k)])
            .sum()
    }

    fn active_rows(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&r| self.active >> r & 1 == 1)
    }
}

/// Outcome of the degree check over the cube vertices.
enum DegreeCheck {
    Constant { degree: usize, sweep_limit: f64 },
    Drop { lambda: Vec<f64>, degree: Option<usize>, expected: Option<usize> },
}

fn check_degree(ma: &MultiAffineDet) -> DegreeCheck {
    let vertices: Vec<(usize, Polynomial)> = active_subsets(ma.active)
        .map(|mask| (mask, ma.vertex_poly(mask)))
        .collect();
    let reference = &vertices[0].1;
    let expected = reference.degree();
    let lambda_of = |mask: usize| -> Vec<f64> {
        (0..ma.n).map(|r| (mask >> r & 1) as f64).collect()
    };
    for (mask, p) in &vertices {
        if p.degree() != expected {
            return DegreeCheck::Drop { lambda: lambda_of(*mask), degree: p.degree(), expected };
        }
    }
    let Some(d) = expected else {
        return DegreeCheck::Drop { lambda: lambda_of(0), degree: None, expected: None };
    };
    let sign = reference.leading().signum();
    if let Some((mask, _)) = vertices.iter().find(|(_, p)| p.leading().signum() != sign) {
        // the leading coefficient changes sign, so it vanishes on the
        // diagonal from 0 to this vertex
        let lead = |tau: f64| {
            let lam: Vec<f64> = lambda_of(*mask).iter().map(|x| x * tau).collect();
            ma.poly_at(&lam).coeff(d)
        };
        let (mut a, mut b) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (a + b);
            if lead(mid).signum() == sign {
                a = mid;
            } else {
                b = mid;
            }
        }
        let lambda: Vec<f64> = lambda_of(*mask).iter().map(|x| x * b).collect();
        let degree = ma.poly_at(&lambda).degree();
        return DegreeCheck::Drop { lambda, degree, expected };
    }
    let lead_min = vertices
        .iter()
        .map(|(_, p)| p.coeff(d).abs())
        .fold(f64::INFINITY, f64::min);
    let tail_max = vertices
        .iter()
        .flat_map(|(_, p)| p.coeffs()[..d].iter().map(|c| c.abs()))
        .fold(0.0, f64::max);
    DegreeCheck::Constant { degree: d, sweep_limit: 1.0 + tail_max / lead_min }
}

/// Subsets of `mask`, starting with the empty set.
fn active_subsets(mask: usize) -> impl Iterator<Item = usize> {
    let mut next = Some(0usize);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask { None } else { Some(((cur | !mask).wrapping_add(1)) & mask) };
        Some(cur)
    })
}

fn witness(cf: &CriticalFamily, lambda: Vec<f64>, det: Polynomial, location: WitnessLocation) -> Witness {
    Witness {
        lambda: Some(lambda),
        pattern: Some(cf.pattern.clone()),
        params: None,
        det,
        location,
    }
}

/// Checks the member at `lambda`; returns a witness when it is not stable.
fn member_witness(
    cf: &CriticalFamily,
    lambda: &[f64],
    region: &Region,
    tol: f64,
) -> Result<Option<Witness>> {
    let det = cf.instantiate(lambda).det();
    Ok(match check_member(&det, region, tol)? {
        MemberCheck::Stable => None,
        MemberCheck::Unstable(loc) => Some(witness(cf, lambda.to_vec(), det, loc)),
    })
}

/// First unstable member on the ray from the origin of the cube to `target`,
/// given that the origin member is stable and the target member is not.
fn first_exit(
    cf: &CriticalFamily,
    target: &[f64],
    region: &Region,
    tol: f64,
) -> Result<Witness> {
    let at = |tau: f64| -> Vec<f64> { target.iter().map(|x| x * tau).collect() };
    let mut prev = 0.0;
    let mut hit = 1.0;
    for k in 1..=EXIT_GRID {
        let tau = k as f64 / EXIT_GRID as f64;
        if member_witness(cf, &at(tau), region, tol)?.is_some() {
            hit = tau;
            break;
        }
        prev = tau;
    }
    let (mut a, mut b) = (prev, hit);
    for _ in 0..40 {
        let mid = 0.5 * (a + b);
        if member_witness(cf, &at(mid), region, tol)?.is_some() {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(member_witness(cf, &at(b), region, tol)?
        .expect("the upper end of the bracket is unstable"))
}

#[derive(Clone, Debug)]
struct ArcBox {
    t0: f64,
    t1: f64,
    lo: Vec<f64>,
    hi: Vec<f64>,
    depth: usize,
}

struct Enclosure {
    /// Hull of the values at the arc midpoint over the box vertices.
    values: Rect,
    /// Bound on the variation along the arc.
    spread: f64,
    distance: f64,
    scale: f64,
    center: Complex64,
}

/// Distance from the origin to the convex hull of `points`.
fn hull_distance(points: &[Complex64]) -> f64 {
    let mut angles = Vec::with_capacity(points.len());
    for p in points {
        if *p == Complex64::new(0.0, 0.0) {
            return 0.0;
        }
        angles.push(p.arg());
    }
    angles.sort_by(f64::total_cmp);
    let wrap = angles[0] + std::f64::consts::TAU - angles[angles.len() - 1];
    let gap = angles.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max);
    if gap <= std::f64::consts::PI {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for (i, &p) in points.iter().enumerate() {
        for &q in &points[i..] {
            best = best.min(segment_distance_sq(p, q));
        }
    }
    best.sqrt()
}

fn segment_distance_sq(a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return a.norm_sqr();
    }
    let t = (-(a.re * d.re + a.im * d.im) / len2).clamp(0.0, 1.0);
    (a + d * t).norm_sqr()
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn horner_real(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

struct Engine<'a> {
    cf: &'a CriticalFamily,
    ma: &'a MultiAffineDet,
    region: &'a Region,
    cfg: &'a CheckerConfig,
    diag: Diagnostics,
    unresolved: usize,
    first_unresolved: Option<(Complex64, Vec<f64>)>,
    center_values: Vec<Complex64>,
    center_slopes: Vec<Complex64>,
    weights: Vec<f64>,
    points: Vec<Complex64>,
}

impl Engine<'_> {
    /// Second-order enclosure along the arc: with `g(t) = det(z(t); λ)`,
    /// `g(t) ∈ g(t_m) + (t - t_m) g'(t_m) + h²/2 · max|g''|`, and the linear
    /// part is multi-affine in `(t, λ)`, so its range lies in the hull of
    /// its vertex values.
    fn enclose(&mut self, piece: &BoundaryPiece, b: &ArcBox) -> Enclosure {
        let ma = self.ma;
        let h = 0.5 * (b.t1 - b.t0);
        let tm = b.t0 + h;
        let center = piece.point(tm);
        let tangent = piece.tangent(tm);
        let (reach, curvature) = match piece {
            BoundaryPiece::Line { direction, .. } => (center.norm() + direction.norm() * h, 0.0),
            BoundaryPiece::Circle => (1.0, 1.0),
        };
        let (mut m1, mut m2) = (0.0, 0.0);
        for &s in &ma.subsets {
            self.center_values[s] = horner(ma.terms[s].coeffs(), center);
            self.center_slopes[s] = horner(ma.dterms[s].coeffs(), center) * tangent;
            let mut w = 1.0;
            let mut rest = s;
            while rest != 0 {
                w *= b.hi[rest.trailing_zeros() as usize];
                rest &= rest - 1;
            }
            if w != 0.0 {
                m1 += w * horner_real(&ma.dabs[s], reach);
                m2 += w * horner_real(&ma.d2abs[s], reach);
            }
        }
        let remainder = 0.5 * h * h * (tangent.norm_sqr() * m2 + curvature * m1);
        self.points.clear();
        let mut values: Option<Rect> = None;
        let mut all: Option<Rect> = None;
        let mut step_max: f64 = 0.0;
        for &v in &ma.subsets {
            self.weights[0] = 1.0;
            let mut val = self.center_values[0];
            let mut step = self.center_slopes[0];
            for &s in &ma.subsets[1..] {
                let low = s.trailing_zeros() as usize;
                let x = if v >> low & 1 == 1 { b.hi[low] } else { b.lo[low] };
                let w = self.weights[s & (s - 1)] * x;
                self.weights[s] = w;
                if w != 0.0 {
                    val += self.center_values[s] * w;
                    step += self.center_slopes[s] * w;
                }
            }
            step *= h;
            step_max = step_max.max(step.norm());
            let ends = [val - step, val + step];
            self.points.extend(ends);
            let r = Rect::hull_of(ends).expect("two points");
            values = Some(values.map_or(Rect::point(val), |x| x.union(&Rect::point(val))));
            all = Some(all.map_or(r, |x| x.union(&r)));
        }
        let mut distance = all.expect("at least one vertex").distance_to_origin();
        if distance > 0.0 && self.points.len() <= HULL_POINTS {
            distance = hull_distance(&self.points);
        }
        Enclosure {
            values: values.expect("at least one vertex"),
            spread: step_max + remainder,
            distance: distance - remainder,
            scale: ma.magnitude_scale(center),
            center,
        }
    }

    /// Runs the subdivision over one boundary piece; returns a witness if a
    /// crossing or an unstable member is found.
    fn sweep(&mut self, piece: BoundaryPiece, t0: f64, t1: f64, arcs: usize) -> Result<Option<Witness>> {
        let base_width = (t1 - t0) / arcs as f64;
        let n = self.ma.n;
        let hi: Vec<f64> = (0..n).map(|r| (self.ma.active >> r & 1) as f64).collect();
        let mut stack = vec![ArcBox { t0, t1, lo: vec![0.0; n], hi, depth: 0 }];
        self.diag.boundary_arcs += arcs as u64;
        while let Some(b) = stack.pop() {
            self.diag.boxes_examined += 1;
            self.diag.max_depth_reached = self.diag.max_depth_reached.max(b.depth);
            if self.diag.boxes_examined > BOX_CAP {
                self.unresolved = UNRESOLVED_CAP;
                return Ok(None);
            }
            let enc = self.enclose(&piece, &b);
            if enc.distance > self.cfg.exclusion_margin * enc.scale {
                let m = enc.distance / enc.scale;
                self.diag.min_exclusion_margin =
                    Some(self.diag.min_exclusion_margin.map_or(m, |x| x.min(m)));
                continue;
            }
            let coarse = b.t1 - b.t0 > base_width * (1.0 + 1e-9);
            if !coarse && b.depth >= self.cfg.max_depth {
                if let Some(w) = self.leaf(&piece, (t0, t1), &b, &enc)? {
                    return Ok(Some(w));
                }
                if self.unresolved >= UNRESOLVED_CAP {
                    return Ok(None);
                }
                continue;
            }
            let mid_lambda: Vec<f64> = b.lo.iter().zip(&b.hi).map(|(l, h)| 0.5 * (l + h)).collect();
            let split_lambda = if coarse || 2.0 * enc.spread >= enc.values.width() {
                None
            } else {
                self.ma
                    .active_rows()
                    .filter(|&r| b.hi[r] > b.lo[r])
                    .map(|r| {
                        let g = self.ma.partial(&self.center_values, &mid_lambda, r).norm();
                        (r, (b.hi[r] - b.lo[r]) * g)
                    })
                    .filter(|&(_, w)| w > 0.0)
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .map(|(r, _)| r)
            };
            let depth = if coarse { b.depth } else { b.depth + 1 };
            let (mut left, mut right) = (b.clone(), b);
            left.depth = depth;
            right.depth = depth;
            match split_lambda {
                Some(r) => {
                    let m = mid_lambda[r];
                    left.hi[r] = m;
                    right.lo[r] = m;
                }
                None => {
                    let m = 0.5 * (left.t0 + left.t1);
                    left.t1 = m;
                    right.t0 = m;
                }
            }
            stack.push(right);
            stack.push(left);
        }
        Ok(None)
    }

    fn leaf(
        &mut self,
        piece: &BoundaryPiece,
        range: (f64, f64),
        b: &ArcBox,
        enc: &Enclosure,
    ) -> Result<Option<Witness>> {
        let lambda: Vec<f64> = b.lo.iter().zip(&b.hi).map(|(l, h)| 0.5 * (l + h)).collect();
        if let Some(w) = member_witness(self.cf, &lambda, self.region, self.cfg.marginal_tol)? {
            return Ok(Some(w));
        }
        let tm = 0.5 * (b.t0 + b.t1);
        if let Some((t, lam)) = self.newton(piece, range, tm, lambda.clone()) {
            let point = piece.point(t);
            let det = self.cf.instantiate(&lam).det();
            if let MemberCheck::Unstable(_) = check_member(&det, self.region, self.cfg.marginal_tol)? {
                return Ok(Some(witness(
                    self.cf,
                    lam,
                    det,
                    WitnessLocation::BoundaryCrossing { point: point.into() },
                )));
            }
        }
        self.unresolved += 1;
        if self.first_unresolved.is_none() {
            self.first_unresolved = Some((enc.center, lambda));
        }
        Ok(None)
    }

    /// Newton iteration on `det(z(t); λ) = 0` in `t` and the most sensitive
    /// parameter, starting from an undecided leaf.
    fn newton(
        &self,
        piece: &BoundaryPiece,
        range: (f64, f64),
        mut t: f64,
        mut lambda: Vec<f64>,
    ) -> Option<(f64, Vec<f64>)> {
        let values_at = |z: Complex64| -> Vec<Complex64> {
            self.ma.terms.iter().map(|p| p.evaluate(z)).collect()
        };
        let start = values_at(piece.point(t));
        let k = self
            .ma
            .active_rows()
            .max_by(|&a, &b| {
                let ga = self.ma.partial(&start, &lambda, a).norm();
                let gb = self.ma.partial(&start, &lambda, b).norm();
                ga.total_cmp(&gb)
            });
        for _ in 0..50 {
            let z = piece.point(t);
            let w = self.ma.weights(&lambda);
            let mut f = Complex64::new(0.0, 0.0);
            let mut fz = Complex64::new(0.0, 0.0);
            let mut vals = Vec::with_capacity(w.len());
            for ((p, dp), &ws) in self.ma.terms.iter().zip(&self.ma.dterms).zip(&w) {
                let v = p.evaluate(z);
                vals.push(v);
                f += v * ws;
                fz += dp.evaluate(z) * ws;
            }
            if f.norm() <= 1e-13 * self.ma.magnitude_scale(z) {
                return Some((t, lambda));
            }
            let ft = fz * piece.tangent(t);
            let fl = k.map_or(Complex64::new(0.0, 0.0), |k| self.ma.partial(&vals, &lambda, k));
            let det = ft.re * fl.im - fl.re * ft.im;
            let (dt, dl) = if det.abs() > 1e-300 && k.is_some() {
                (
                    (-f.re * fl.im + fl.re * f.im) / det,
                    (-ft.re * f.im + ft.im * f.re) / det,
                )
            } else if ft.norm_sqr() > 0.0 {
                // least-squares step in t alone
                (-(f.re * ft.re + f.im * ft.im) / ft.norm_sqr(), 0.0)
            } else {
                return None;
            };
            t += dt;
            if !(range.0..=range.1).contains(&t) {
                return None;
            }
            if let Some(k) = k {
                let x = lambda[k] + dl;
                if !(-1e-9..=1.0 + 1e-9).contains(&x) {
                    return None;
                }
                lambda[k] = x.clamp(0.0, 1.0);
            }
        }
        None
    }
}

fn run(cf: &CriticalFamily, region: &Region, cfg: &CheckerConfig, vertices_known_stable: bool) -> Result<Verdict> {
    let ma = MultiAffineDet::new(cf);
    let mut diag = Diagnostics { families_checked: 1, ..Default::default() };
    let n = cf.n;
    let lambda_of = |mask: usize| -> Vec<f64> { (0..n).map(|r| (mask >> r & 1) as f64).collect() };

    if !vertices_known_stable {
        for mask in active_subsets(ma.active) {
            diag.vertex_members_checked += 1;
            if let Some(w) = member_witness(cf, &lambda_of(mask), region, cfg.marginal_tol)? {
                let w = if mask == 0 { w } else { first_exit(cf, &lambda_of(mask), region, cfg.marginal_tol)? };
                return Ok(Verdict::unstable(w, diag));
            }
        }
    }

    let sweep_limit = match check_degree(&ma) {
        DegreeCheck::Drop { lambda, degree, expected } => {
            return Ok(Verdict::inconclusive(Inconclusive::DegreeDrop { lambda, degree, expected }, diag));
        }
        DegreeCheck::Constant { degree: 0, .. } => return Ok(Verdict::stable(diag)),
        DegreeCheck::Constant { sweep_limit, .. } => cfg.sweep_multiple * (1.0 + sweep_limit),
    };

    let arcs = region.boundary_arcs(sweep_limit);
    let per_arc = (cfg.boundary_count / arcs.len()).max(1);
    let mut engine = Engine {
        cf,
        ma: &ma,
        region,
        cfg,
        diag,
        unresolved: 0,
        first_unresolved: None,
        center_values: vec![Complex64::new(0.0, 0.0); ma.terms.len()],
        center_slopes: vec![Complex64::new(0.0, 0.0); ma.terms.len()],
        weights: vec![0.0; ma.terms.len()],
        points: Vec::with_capacity(2 * ma.subsets.len()),
    };
    for arc in &arcs {
        if let Some(w) = engine.sweep(arc.piece, arc.t0, arc.t1, per_arc)? {
            return Ok(Verdict::unstable(w, engine.diag));
        }
        if engine.unresolved >= UNRESOLVED_CAP {
            break;
        }
    }
    if engine.unresolved > 0 || engine.diag.boxes_examined > BOX_CAP {
        let (point, lambda) = engine
            .first_unresolved
            .unwrap_or((Complex64::new(0.0, 0.0), vec![0.5; n]));
        return Ok(Verdict::inconclusive(
            Inconclusive::DepthExhausted { max_depth: cfg.max_depth, point: point.into(), lambda },
            engine.diag,
        ));
    }
    Ok(Verdict::stable(engine.diag))
}

fn numerical(e: crate::error::Error) -> Verdict {
    Verdict::inconclusive(
        Inconclusive::Numerical { message: e.to_string() },
        Diagnostics { families_checked: 1, ..Default::default() },
    )
}

/// Decides stability of every member of a critical family.
pub fn critical_family_stable(cf: &CriticalFamily, region: &Region, cfg: &CheckerConfig) -> Verdict {
    run(cf, region, cfg, false).unwrap_or_else(numerical)
}

/// Same as [`critical_family_stable`], trusting that every pure-vertex member
/// was already found stable.
pub(crate) fn critical_family_stable_after_vertices(
    cf: &CriticalFamily,
    region: &Region,
    cfg: &CheckerConfig,
) -> Verdict {
    run(cf, region, cfg, true).unwrap_or_else(numerical)
}

/// Decides stability of the segment `(1 - λ) p0 + λ p1`, `λ ∈ [0, 1]`.
pub fn segment_stable(p0: &Polynomial, p1: &Polynomial, region: &Region, cfg: &CheckerConfig) -> Verdict {
    critical_family_stable(&CriticalFamily::segment(p0.clone(), p1.clone()), region, cfg)
}

/// Rectangle enclosing `det(z; λ)` over the whole cube, as used by the
/// engine on its first box.
pub(crate) fn cube_enclosure(ma: &MultiAffineDet, z: Complex64) -> Rect {
    let vals: Vec<Complex64> = ma.terms.iter().map(|t| t.evaluate(z)).collect();
    active_subsets(ma.active)
        .map(|v| {
            (0..vals.len())
                .filter(|&s| s & !v == 0)
                .map(|s| vals[s])
                .sum::<Complex64>()
        })
        .map(Rect::point)
        .reduce(|a, b| a.union(&b))
        .expect("at least one vertex")
}
