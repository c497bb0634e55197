//! Uncertain polynomial matrices: polytopic entries, interval entries and the
//! vertex / edge sets derived from them.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::determinant::PolyMatrix;
use crate::error::{Error, Result};
use crate::polynomial::Polynomial;

/// Default cap on the number of coefficients of an interval entry that may
/// be expanded into box corners.
pub const CORNER_COEFF_CAP: usize = 12;

/// Tolerance on barycentric weights summing to one.
const SIMPLEX_TOL: f64 = 1e-9;

/// Convex hull of a nonempty list of generator polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct PolytopicEntry {
    generators: Vec<Polynomial>,
}

impl PolytopicEntry {
    pub fn new(generators: Vec<Polynomial>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Invalid("polytopic entry needs at least one generator".into()));
        }
        Ok(PolytopicEntry { generators })
    }

    /// A single fixed polynomial.
    pub fn point(p: Polynomial) -> Self {
        PolytopicEntry { generators: vec![p] }
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// Index (into `generators`) of the first occurrence of each distinct generator.
    pub fn distinct_indices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for (k, g) in self.generators.iter().enumerate() {
            if !out.iter().any(|&j| self.generators[j] == *g) {
                out.push(k);
            }
        }
        out
    }

    /// The vertex set `K`: generators with duplicates removed.
    pub fn vertex_set(&self) -> Vec<Polynomial> {
        self.distinct_indices()
            .into_iter()
            .map(|k| self.generators[k].clone())
            .collect()
    }

    /// Unordered pairs `(s, t)`, `s < t`, of indices into [`vertex_set`](Self::vertex_set).
    pub fn edge_indices(&self) -> Vec<(usize, usize)> {
        let m = self.distinct_indices().len();
        (0..m)
            .flat_map(|s| (s + 1..m).map(move |t| (s, t)))
            .collect()
    }

    /// All segments between distinct generators; a superset of the exposed edges.
    pub fn edge_set(&self) -> Vec<(Polynomial, Polynomial)> {
        let v = self.vertex_set();
        self.edge_indices()
            .into_iter()
            .map(|(s, t)| (v[s].clone(), v[t].clone()))
            .collect()
    }
}

/// Polynomial whose coefficients range independently over `[lower_k, upper_k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalEntry {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl IntervalEntry {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::Invalid(format!(
                "interval bounds must be nonempty and of equal length ({} vs {})",
                lower.len(),
                upper.len()
            )));
        }
        if let Some(k) = (0..lower.len()).find(|&k| !(lower[k] <= upper[k])) {
            return Err(Error::Invalid(format!(
                "coefficient {k}: lower bound {} exceeds upper bound {}",
                lower[k], upper[k]
            )));
        }
        Ok(IntervalEntry { lower, upper })
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    fn pick(&self, high: impl Fn(usize) -> bool) -> Polynomial {
        Polynomial::new(
            (0..self.len())
                .map(|k| if high(k) { self.upper[k] } else { self.lower[k] })
                .collect(),
        )
    }

    /// The four Kharitonov polynomials `f1..f4`, following the period-4
    /// low/high patterns (ll hh), (l hh l), (h ll h), (hh ll).
    pub fn kharitonov_vertices(&self) -> [Polynomial; 4] {
        [
            self.pick(|k| matches!(k % 4, 2 | 3)),
            self.pick(|k| matches!(k % 4, 1 | 2)),
            self.pick(|k| matches!(k % 4, 0 | 3)),
            self.pick(|k| matches!(k % 4, 0 | 1)),
        ]
    }

    /// Index pairs into [`kharitonov_vertices`](Self::kharitonov_vertices)
    /// for the edge cycle (1,2), (2,4), (4,3), (3,1).
    pub const KHARITONOV_EDGE_INDICES: [(usize, usize); 4] = [(0, 1), (1, 3), (3, 2), (2, 0)];

    pub fn kharitonov_edges(&self) -> [(Polynomial, Polynomial); 4] {
        let f = self.kharitonov_vertices();
        Self::KHARITONOV_EDGE_INDICES.map(|(s, t)| (f[s].clone(), f[t].clone()))
    }

    fn free_coords(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.lower[k] < self.upper[k]).collect()
    }

    /// Number of distinct corners of the coefficient box.
    pub fn corner_count(&self) -> u128 {
        1u128 << self.free_coords().len()
    }

    /// All corners of the coefficient box, as polynomials.
    pub fn corners(&self, cap: usize) -> Result<Vec<Polynomial>> {
        if self.len() > cap {
            return Err(Error::Capacity {
                what: "interval entry corner expansion (sample the box directly instead)".into(),
                count: self.corner_count(),
                limit: 1u128 << cap,
            });
        }
        let free = self.free_coords();
        Ok((0..1usize << free.len())
            .map(|mask| {
                let mut c = self.lower.clone();
                for (bit, &k) in free.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        c[k] = self.upper[k];
                    }
                }
                Polynomial::new(c)
            })
            .collect())
    }

    /// The box as a polytope whose generators are its corners.
    pub fn as_polytopic(&self, cap: usize) -> Result<PolytopicEntry> {
        PolytopicEntry::new(self.corners(cap)?)
    }

    pub fn contains(&self, coeffs: &[f64]) -> bool {
        coeffs.len() == self.len()
            && (0..self.len()).all(|k| self.lower[k] <= coeffs[k] && coeffs[k] <= self.upper[k])
    }

    /// Whether polynomial `p` lies in the box, up to a relative tolerance.
    pub fn contains_poly(&self, p: &Polynomial, tol: f64) -> bool {
        if p.coeffs().len() > self.len() {
            return false;
        }
        (0..self.len()).all(|k| {
            let c = p.coeff(k);
            let slack = tol * (1.0 + self.lower[k].abs().max(self.upper[k].abs()));
            self.lower[k] - slack <= c && c <= self.upper[k] + slack
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Entry {
    Polytopic(PolytopicEntry),
    Interval(IntervalEntry),
}

/// A concrete parameter choice for one cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellParam {
    /// Barycentric weights over the generators of a polytopic entry.
    Weights(Vec<f64>),
    /// Coefficient vector inside the box of an interval entry.
    Coeffs(Vec<f64>),
}

impl Entry {
    pub fn is_interval(&self) -> bool {
        matches!(self, Entry::Interval(_))
    }

    /// The entry as a polytope; interval boxes are expanded into corners.
    pub fn to_polytopic(&self, cap: usize) -> Result<PolytopicEntry> {
        match self {
            Entry::Polytopic(p) => Ok(p.clone()),
            Entry::Interval(b) => b.as_polytopic(cap),
        }
    }

    /// Whether the entry represents a single polynomial.
    pub fn is_point(&self) -> bool {
        match self {
            Entry::Polytopic(p) => p.distinct_indices().len() == 1,
            Entry::Interval(b) => b.free_coords().is_empty(),
        }
    }

    pub fn instantiate(&self, param: &CellParam) -> Result<Polynomial> {
        match (self, param) {
            (Entry::Polytopic(p), CellParam::Weights(w)) => {
                if w.len() != p.generators.len() {
                    return Err(Error::Parameter(format!(
                        "expected {} barycentric weights, got {}",
                        p.generators.len(),
                        w.len()
                    )));
                }
                let sum: f64 = w.iter().sum();
                if w.iter().any(|&x| !(x >= 0.0)) || (sum - 1.0).abs() > SIMPLEX_TOL {
                    return Err(Error::Parameter(format!(
                        "weights {w:?} are not a point of the simplex"
                    )));
                }
                let len = p.generators.iter().map(|g| g.coeffs().len()).max().unwrap_or(0);
                Ok(Polynomial::new(
                    (0..len)
                        .map(|k| w.iter().zip(&p.generators).map(|(x, g)| x * g.coeff(k)).sum())
                        .collect(),
                ))
            }
            (Entry::Interval(b), CellParam::Coeffs(c)) => {
                if !b.contains(c) {
                    return Err(Error::Parameter(format!(
                        "coefficients {c:?} outside the box [{:?}, {:?}]",
                        b.lower, b.upper
                    )));
                }
                Ok(Polynomial::new(c.clone()))
            }
            (Entry::Polytopic(_), CellParam::Coeffs(_)) => Err(Error::Parameter(
                "polytopic entry needs barycentric weights".into(),
            )),
            (Entry::Interval(_), CellParam::Weights(_)) => Err(Error::Parameter(
                "interval entry needs a coefficient vector".into(),
            )),
        }
    }

    /// Uniform random member: symmetric Dirichlet weights or a uniform box point.
    pub fn random_param<R: Rng + ?Sized>(&self, rng: &mut R) -> CellParam {
        match self {
            Entry::Polytopic(p) => {
                let mut w: Vec<f64> = p
                    .generators
                    .iter()
                    .map(|_| -(1.0 - rng.gen::<f64>()).ln())
                    .collect();
                let sum: f64 = w.iter().sum();
                w.iter_mut().for_each(|x| *x /= sum);
                CellParam::Weights(w)
            }
            Entry::Interval(b) => CellParam::Coeffs(
                (0..b.len())
                    .map(|k| {
                        if b.lower[k] < b.upper[k] {
                            rng.gen_range(b.lower[k]..=b.upper[k])
                        } else {
                            b.lower[k]
                        }
                    })
                    .collect(),
            ),
        }
    }

    /// Parameters of the entry's vertices: one-hot weights on the distinct
    /// generators, or the box corners (Kharitonov vertices when the box is
    /// too large to expand).
    pub fn vertex_params(&self) -> Vec<CellParam> {
        match self {
            Entry::Polytopic(p) => {
                let m = p.generators.len();
                p.distinct_indices()
                    .into_iter()
                    .map(|k| {
                        let mut w = vec![0.0; m];
                        w[k] = 1.0;
                        CellParam::Weights(w)
                    })
                    .collect()
            }
            Entry::Interval(b) => {
                let polys = b
                    .corners(CORNER_COEFF_CAP)
                    .unwrap_or_else(|_| b.kharitonov_vertices().to_vec());
                polys.iter().map(|q| self.coeff_param(q)).collect()
            }
        }
    }

    /// Coefficient parameter for an interval entry, padded to the box length.
    pub(crate) fn coeff_param(&self, q: &Polynomial) -> CellParam {
        let len = match self {
            Entry::Interval(b) => b.len(),
            Entry::Polytopic(_) => q.coeffs().len(),
        };
        CellParam::Coeffs((0..len).map(|k| q.coeff(k)).collect())
    }
}

/// Kind of the entries of a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Polytopic,
    Interval,
    Mixed,
}

/// An `n x n` grid of uncertain entries, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFamily {
    n: usize,
    entries: Vec<Entry>,
}

impl MatrixFamily {
    pub fn new(n: usize, entries: Vec<Entry>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("matrix dimension must be at least 1".into()));
        }
        if entries.len() != n * n {
            return Err(Error::Invalid(format!(
                "expected {} entries for n = {n}, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(MatrixFamily { n, entries })
    }

    /// Builds a family from rows of entries.
    pub fn from_rows(rows: Vec<Vec<Entry>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("entry grid is not square".into()));
        }
        MatrixFamily::new(n, rows.into_iter().flatten().collect())
    }

    /// A family containing only the given polynomial matrix.
    pub fn fixed(m: &PolyMatrix) -> Self {
        MatrixFamily {
            n: m.n(),
            entries: m
                .cells()
                .iter()
                .map(|p| Entry::Polytopic(PolytopicEntry::point(p.clone())))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Entry {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn kind(&self) -> FamilyKind {
        let intervals = self.entries.iter().filter(|e| e.is_interval()).count();
        match intervals {
            0 => FamilyKind::Polytopic,
            k if k == self.entries.len() => FamilyKind::Interval,
            _ => FamilyKind::Mixed,
        }
    }

    /// Whether the family is a single matrix.
    pub fn is_fixed(&self) -> bool {
        self.entries.iter().all(Entry::is_point)
    }

    /// The same family with every entry expressed as a polytope.
    pub fn to_polytopic(&self, cap: usize) -> Result<MatrixFamily> {
        Ok(MatrixFamily {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|e| e.to_polytopic(cap).map(Entry::Polytopic))
                .collect::<Result<_>>()?,
        })
    }

    /// The concrete member selected by one parameter per cell (row-major).
    pub fn sample(&self, params: &[CellParam]) -> Result<PolyMatrix> {
        if params.len() != self.entries.len() {
            return Err(Error::Parameter(format!(
                "expected {} cell parameters, got {}",
                self.entries.len(),
                params.len()
            )));
        }
        let cells = self
            .entries
            .iter()
            .zip(params)
            .map(|(e, p)| e.instantiate(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix::new(self.n, cells))
    }

    pub fn random_params<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<CellParam> {
        self.entries.iter().map(|e| e.random_param(rng)).collect()
    }

    /// Number of pure-vertex members (one vertex per cell).
    pub fn vertex_member_count(&self) -> u128 {
        self.entries.iter().fold(1u128, |acc, e| {
            let k = match e {
                Entry::Polytopic(p) => p.distinct_indices().len() as u128,
                Entry::Interval(b) if b.len() <= CORNER_COEFF_CAP => b.corner_count(),
                Entry::Interval(_) => 4,
            };
            acc.saturating_mul(k)
        })
    }

    /// Per-cell vertex parameter lists.
    pub fn vertex_params(&self) -> Vec<Vec<CellParam>> {
        self.entries.iter().map(Entry::vertex_params).collect()
    }
}

/// Mixed-radix counter over `radices`, yielding every digit vector once.
#[derive(Clone, Debug)]
pub struct Odometer {
    radices: Vec<usize>,
    digits: Vec<usize>,
    done: bool,
}

impl Odometer {
    pub fn new(radices: Vec<usize>) -> Self {
        let done = radices.iter().any(|&r| r == 0);
        Odometer {
            digits: vec![0; radices.len()],
            radices,
            done,
        }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let current = self.digits.clone();
        let mut k = 0;
        loop {
            if k == self.digits.len() {
                self.done = true;
                break;
            }
            self.digits[k] += 1;
            if self.digits[k] < self.radices[k] {
                break;
            }
            self.digits[k] = 0;
            k += 1;
        }
        Some(current)
    }
}

/// Iterates over all pure-vertex members as cell-parameter vectors.
pub fn vertex_members(per_cell: &[Vec<CellParam>]) -> impl Iterator<Item = Vec<CellParam>> + '_ {
    Odometer::new(per_cell.iter().map(Vec::len).collect()).map(move |digits| {
        digits
            .iter()
            .zip(per_cell)
            .map(|(&d, options)| options[d].clone())
            .collect()
    })
}
