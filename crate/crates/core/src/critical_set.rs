//! Enumeration of the critical subsets of a matrix family.
//!
//! A critical family designates one cell per row, the designated columns
//! forming a permutation. Each designated cell ranges over one edge of its
//! entry with its own parameter `λ_s ∈ [0, 1]`; every other cell is fixed at
//! one of its entry's vertices. For polytopic entries the edges are all pairs
//! of distinct generators and the vertices are the distinct generators; for
//! interval entries they are the four Kharitonov edges and vertices.
//!
//! Designation is indexed by row (`p_{s l_s}`); indexing by column gives the
//! same set with the inverse permutation.

use serde::Serialize;

use crate::determinant::PolyMatrix;
use crate::error::{Error, Result};
use crate::family::{Entry, IntervalEntry, MatrixFamily, Odometer};
use crate::polynomial::Polynomial;

/// Vertex and edge sets of a single cell.
#[derive(Clone, Debug, PartialEq)]
pub struct EntrySets {
    pub vertices: Vec<Polynomial>,
    /// Index pairs into `vertices`.
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    /// Polytopic entries: all-pairs edges, generator vertices.
    EpsilonA,
    /// Interval entries: Kharitonov edges and vertices.
    EpsilonB2,
}

/// Per-cell vertex/edge sets of a family, ready for enumeration.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalSets {
    n: usize,
    kind: SetKind,
    cells: Vec<EntrySets>,
}

/// Position of a critical family in the enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CriticalIndex {
    /// `pattern[s]` is the designated column of row `s`.
    pub pattern: Vec<usize>,
    /// Edge chosen for each row's designated cell.
    pub edge_choice: Vec<usize>,
    /// Vertex chosen for every cell, row-major; ignored at designated cells.
    pub vertex_choice: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DesignatedEdge {
    pub row: usize,
    pub col: usize,
    pub from: Polynomial,
    pub to: Polynomial,
    pub from_vertex: usize,
    pub to_vertex: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedCell {
    pub vertex: usize,
    pub poly: Polynomial,
}

/// One member of a critical subset: an `n`-parameter family of matrices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalFamily {
    pub n: usize,
    pub pattern: Vec<usize>,
    /// One per row, in row order.
    pub designated: Vec<DesignatedEdge>,
    /// Row-major; `None` at designated cells.
    pub fixed: Vec<Option<FixedCell>>,
}

impl CriticalFamily {
    /// A single segment `(1 - λ) p0 + λ p1` viewed as a `1 x 1` critical family.
    pub fn segment(p0: Polynomial, p1: Polynomial) -> Self {
        CriticalFamily {
            n: 1,
            pattern: vec![0],
            designated: vec![DesignatedEdge {
                row: 0,
                col: 0,
                from: p0,
                to: p1,
                from_vertex: 0,
                to_vertex: 1,
            }],
            fixed: vec![None],
        }
    }

    /// Builds a critical family from a base matrix, a permutation pattern and
    /// the designated endpoint polynomials.
    pub fn from_parts(base: &PolyMatrix, pattern: Vec<usize>, ends: Vec<(Polynomial, Polynomial)>) -> Result<Self> {
        let n = base.n();
        if pattern.len() != n || ends.len() != n || !is_permutation(&pattern) {
            return Err(Error::Invalid("pattern must be a permutation of the columns".into()));
        }
        let mut fixed: Vec<Option<FixedCell>> = base
            .cells()
            .iter()
            .map(|p| Some(FixedCell { vertex: 0, poly: p.clone() }))
            .collect();
        let designated = ends
            .into_iter()
            .enumerate()
            .map(|(row, (from, to))| {
                let col = pattern[row];
                fixed[row * n + col] = None;
                DesignatedEdge { row, col, from, to, from_vertex: 0, to_vertex: 1 }
            })
            .collect();
        Ok(CriticalFamily { n, pattern, designated, fixed })
    }

    /// The member at parameters `lambda` (one per row, each in `[0, 1]`).
    pub fn instantiate(&self, lambda: &[f64]) -> PolyMatrix {
        let mut cells: Vec<Polynomial> = self
            .fixed
            .iter()
            .map(|c| c.as_ref().map(|f| f.poly.clone()).unwrap_or_default())
            .collect();
        for (e, &l) in self.designated.iter().zip(lambda) {
            cells[e.row * self.n + e.col] = Polynomial::lerp(&e.from, &e.to, l);
        }
        PolyMatrix::new(self.n, cells)
    }

    /// Whether every designated endpoint pair is a single polynomial.
    pub fn is_degenerate(&self) -> bool {
        self.designated.iter().all(|e| e.from == e.to)
    }

    /// Canonical key, used to compare enumerations as multisets.
    pub fn key(&self) -> String {
        serde_json::to_string(self).expect("critical family serializes")
    }
}

pub(crate) fn is_permutation(pattern: &[usize]) -> bool {
    let mut seen = vec![false; pattern.len()];
    pattern.iter().all(|&c| {
        c < seen.len() && !std::mem::replace(&mut seen[c], true)
    })
}

/// Next permutation in lexicographic order; false once the last one is passed.
fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[i - 1] < a[j]).expect("pivot exists");
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

impl CriticalSets {
    /// Sets for the polytopic critical subset. Every entry must be polytopic.
    ///
    /// When some entries are single points while others have edges, each
    /// point entry contributes one degenerate edge so that permutation
    /// patterns through it are kept. A family without any edge has an empty
    /// critical subset; it is a single matrix.
    pub fn polytopic(family: &MatrixFamily) -> Result<Self> {
        let mut cells = family
            .entries()
            .iter()
            .map(|e| match e {
                Entry::Polytopic(p) => Ok(EntrySets {
                    vertices: p.vertex_set(),
                    edges: p.edge_indices(),
                }),
                Entry::Interval(_) => Err(Error::Invalid(
                    "polytopic critical set requires polytopic entries".into(),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        if cells.iter().any(|c| !c.edges.is_empty()) {
            for c in cells.iter_mut().filter(|c| c.edges.is_empty()) {
                c.edges.push((0, 0));
            }
        }
        Ok(CriticalSets { n: family.n(), kind: SetKind::EpsilonA, cells })
    }

    /// Kharitonov sets for the interval critical subset. Every entry must be
    /// an interval polynomial.
    pub fn kharitonov(family: &MatrixFamily) -> Result<Self> {
        let cells = family
            .entries()
            .iter()
            .map(|e| match e {
                Entry::Interval(b) => Ok(EntrySets {
                    vertices: b.kharitonov_vertices().to_vec(),
                    edges: IntervalEntry::KHARITONOV_EDGE_INDICES.to_vec(),
                }),
                Entry::Polytopic(_) => Err(Error::Invalid(
                    "Kharitonov critical set requires interval entries".into(),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CriticalSets { n: family.n(), kind: SetKind::EpsilonB2, cells })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn cell(&self, i: usize, j: usize) -> &EntrySets {
        &self.cells[i * self.n + j]
    }

    fn radices(&self, pattern: &[usize]) -> Vec<usize> {
        let n = self.n;
        let mut r: Vec<usize> = pattern
            .iter()
            .enumerate()
            .map(|(s, &l)| self.cell(s, l).edges.len())
            .collect();
        r.extend((0..n * n).map(|k| {
            if pattern[k / n] == k % n {
                1
            } else {
                self.cells[k].vertices.len()
            }
        }));
        r
    }

    /// Exact number of critical families, summed over permutation patterns.
    pub fn count(&self) -> u128 {
        let mut pattern: Vec<usize> = (0..self.n).collect();
        let mut total = 0u128;
        loop {
            total = total.saturating_add(
                self.radices(&pattern)
                    .into_iter()
                    .fold(1u128, |acc, r| acc.saturating_mul(r as u128)),
            );
            if !next_permutation(&mut pattern) {
                return total;
            }
        }
    }

    /// Number of pure-vertex matrices of these sets.
    pub fn vertex_member_count(&self) -> u128 {
        self.cells
            .iter()
            .fold(1u128, |acc, c| acc.saturating_mul(c.vertices.len() as u128))
    }

    pub fn indices(&self) -> Indices<'_> {
        Indices { sets: self, cursor: Cursor::new(self.n) }
    }

    pub fn families(&self) -> impl Iterator<Item = CriticalFamily> + '_ {
        self.indices().map(move |idx| self.materialize(&idx))
    }

    pub fn into_stream(self) -> CriticalStream {
        CriticalStream { cursor: Cursor::new(self.n), sets: self }
    }

    pub fn materialize(&self, idx: &CriticalIndex) -> CriticalFamily {
        let n = self.n;
        let designated = (0..n)
            .map(|row| {
                let col = idx.pattern[row];
                let cell = self.cell(row, col);
                let (a, b) = cell.edges[idx.edge_choice[row]];
                DesignatedEdge {
                    row,
                    col,
                    from: cell.vertices[a].clone(),
                    to: cell.vertices[b].clone(),
                    from_vertex: a,
                    to_vertex: b,
                }
            })
            .collect();
        let fixed = (0..n * n)
            .map(|k| {
                (idx.pattern[k / n] != k % n).then(|| FixedCell {
                    vertex: idx.vertex_choice[k],
                    poly: self.cells[k].vertices[idx.vertex_choice[k]].clone(),
                })
            })
            .collect();
        CriticalFamily { n, pattern: idx.pattern.clone(), designated, fixed }
    }
}

#[derive(Clone, Debug)]
struct Cursor {
    pattern: Vec<usize>,
    odometer: Option<Odometer>,
    exhausted: bool,
}

impl Cursor {
    fn new(n: usize) -> Self {
        Cursor { pattern: (0..n).collect(), odometer: None, exhausted: false }
    }

    fn advance(&mut self, sets: &CriticalSets) -> Option<CriticalIndex> {
        let n = sets.n;
        loop {
            if self.exhausted {
                return None;
            }
            let odo = self
                .odometer
                .get_or_insert_with(|| Odometer::new(sets.radices(&self.pattern)));
            if let Some(digits) = odo.next() {
                return Some(CriticalIndex {
                    pattern: self.pattern.clone(),
                    edge_choice: digits[..n].to_vec(),
                    vertex_choice: digits[n..].to_vec(),
                });
            }
            self.odometer = None;
            if !next_permutation(&mut self.pattern) {
                self.exhausted = true;
            }
        }
    }
}

/// Borrowing stream of critical indices.
pub struct Indices<'a> {
    sets: &'a CriticalSets,
    cursor: Cursor,
}

impl Iterator for Indices<'_> {
    type Item = CriticalIndex;

    fn next(&mut self) -> Option<CriticalIndex> {
        self.cursor.advance(self.sets)
    }
}

/// Owning stream of critical families.
pub struct CriticalStream {
    sets: CriticalSets,
    cursor: Cursor,
}

impl CriticalStream {
    pub fn sets(&self) -> &CriticalSets {
        &self.sets
    }
}

impl Iterator for CriticalStream {
    type Item = CriticalFamily;

    fn next(&mut self) -> Option<CriticalFamily> {
        let idx = self.cursor.advance(&self.sets)?;
        Some(self.sets.materialize(&idx))
    }
}

/// Streams the polytopic critical subset of an all-polytopic family.
pub fn enumerate_epsilon_a(family: &MatrixFamily) -> Result<CriticalStream> {
    Ok(CriticalSets::polytopic(family)?.into_stream())
}

/// Streams the Kharitonov critical subset of an all-interval family.
pub fn enumerate_epsilon_b2(family: &MatrixFamily) -> Result<CriticalStream> {
    Ok(CriticalSets::kharitonov(family)?.into_stream())
}

/// Closed-form size of the applicable critical subset: Kharitonov sets for
/// all-interval families, polytopic sets otherwise (interval entries of a
/// mixed family expanded into box corners).
pub fn count_critical(family: &MatrixFamily) -> Result<u128> {
    use crate::family::{FamilyKind, CORNER_COEFF_CAP};
    match family.kind() {
        FamilyKind::Interval => Ok(CriticalSets::kharitonov(family)?.count()),
        FamilyKind::Polytopic => Ok(CriticalSets::polytopic(family)?.count()),
        FamilyKind::Mixed => Ok(CriticalSets::polytopic(&family.to_polytopic(CORNER_COEFF_CAP)?)?.count()),
    }
}

/// Fast path for two-generator families `p⁰ + λ p¹`, `λ ∈ [0, 1]`: in each
/// critical family the designated cells sweep `λ ∈ [0, 1]` while every other
/// cell takes `λ ∈ {0, 1}`.
///
/// Produces the same set of critical families as [`enumerate_epsilon_a`].
pub fn specialize_remark1(family: &MatrixFamily) -> Result<impl Iterator<Item = CriticalFamily>> {
    let n = family.n();
    // (p⁰, p⁰ + p¹, whether p¹ vanishes)
    let cells: Vec<(Polynomial, Polynomial, bool)> = family
        .entries()
        .iter()
        .map(|e| match e {
            Entry::Polytopic(p) if p.generators().len() == 2 => {
                let g = p.generators();
                Ok((g[0].clone(), g[1].clone(), g[0] == g[1]))
            }
            _ => Err(Error::Invalid(
                "the two-generator fast path needs exactly two generators per entry".into(),
            )),
        })
        .collect::<Result<_>>()?;
    let any_edge = cells.iter().any(|c| !c.2);

    let mut patterns = Vec::new();
    let mut pattern: Vec<usize> = (0..n).collect();
    if any_edge {
        loop {
            patterns.push(pattern.clone());
            if !next_permutation(&mut pattern) {
                break;
            }
        }
    }

    Ok(patterns.into_iter().flat_map(move |pattern| {
        let cells = cells.clone();
        // non-designated cells whose λ is free to be 0 or 1
        let free: Vec<usize> = (0..n * n)
            .filter(|&k| pattern[k / n] != k % n && !cells[k].2)
            .collect();
        (0u64..1u64 << free.len()).map(move |mask| {
            let designated = (0..n)
                .map(|row| {
                    let col = pattern[row];
                    let (p0, p1, flat) = &cells[row * n + col];
                    DesignatedEdge {
                        row,
                        col,
                        from: p0.clone(),
                        to: if *flat { p0.clone() } else { p1.clone() },
                        from_vertex: 0,
                        to_vertex: usize::from(!*flat),
                    }
                })
                .collect();
            let fixed = (0..n * n)
                .map(|k| {
                    (pattern[k / n] != k % n).then(|| {
                        let bit = free
                            .iter()
                            .position(|&f| f == k)
                            .map(|b| (mask >> b) & 1 == 1)
                            .unwrap_or(false);
                        let (p0, p1, _) = &cells[k];
                        FixedCell {
                            vertex: usize::from(bit),
                            poly: if bit { p1.clone() } else { p0.clone() },
                        }
                    })
                })
                .collect();
            CriticalFamily { n, pattern: pattern.clone(), designated, fixed }
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::PolytopicEntry;
    use proptest::prelude::*;

    fn p(c: &[f64]) -> Polynomial {
        Polynomial::new(c.to_vec())
    }

    pub(crate) fn uniform_polytopic(n: usize, m: usize) -> MatrixFamily {
        let entries = (0..n * n)
            .map(|k| {
                Entry::Polytopic(
                    PolytopicEntry::new(
                        (0..m).map(|g| p(&[(k * 10 + g) as f64, 1.0])).collect(),
                    )
                    .unwrap(),
                )
            })
            .collect();
        MatrixFamily::new(n, entries).unwrap()
    }

    fn uniform_interval(n: usize) -> MatrixFamily {
        let entries = (0..n * n)
            .map(|k| {
                Entry::Interval(
                    IntervalEntry::new(vec![k as f64, 1.0], vec![k as f64 + 1.0, 2.0]).unwrap(),
                )
            })
            .collect();
        MatrixFamily::new(n, entries).unwrap()
    }

    fn factorial(n: usize) -> u128 {
        (1..=n as u128).product()
    }

    fn closed_form_a(n: usize, m: usize) -> u128 {
        let pairs = (m * m.saturating_sub(1) / 2) as u128;
        factorial(n) * pairs.pow(n as u32) * (m as u128).pow((n * (n - 1)) as u32)
    }

    #[test]
    fn epsilon_a_examples() {
        let one = enumerate_epsilon_a(&uniform_polytopic(1, 2)).unwrap().collect::<Vec<_>>();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].designated[0].from, p(&[0.0, 1.0]));
        assert_eq!(one[0].designated[0].to, p(&[1.0, 1.0]));

        assert_eq!(enumerate_epsilon_a(&uniform_polytopic(2, 2)).unwrap().count(), 8);
        assert_eq!(enumerate_epsilon_a(&uniform_polytopic(2, 3)).unwrap().count(), 162);
        assert_eq!(closed_form_a(2, 3), 162);
    }

    #[test]
    fn epsilon_b2_examples() {
        let f = uniform_interval(1);
        let fams: Vec<_> = enumerate_epsilon_b2(&f).unwrap().collect();
        assert_eq!(fams.len(), 4);
        let Entry::Interval(b) = f.entry(0, 0) else { unreachable!() };
        for (fam, edge) in fams.iter().zip(b.kharitonov_edges()) {
            assert_eq!((fam.designated[0].from.clone(), fam.designated[0].to.clone()), edge);
        }
        assert_eq!(enumerate_epsilon_b2(&uniform_interval(2)).unwrap().count(), 512);
    }

    #[test]
    fn degenerate_boxes_collapse_to_the_fixed_matrix() {
        let entries = (0..4)
            .map(|k| Entry::Interval(IntervalEntry::new(vec![k as f64, 1.0], vec![k as f64, 1.0]).unwrap()))
            .collect();
        let f = MatrixFamily::new(2, entries).unwrap();
        let params: Vec<_> = (0..4)
            .map(|k| crate::family::CellParam::Coeffs(vec![k as f64, 1.0]))
            .collect();
        let fixed = f.sample(&params).unwrap();
        for fam in enumerate_epsilon_b2(&f).unwrap() {
            assert_eq!(fam.instantiate(&[0.3, 0.8]), fixed);
        }
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_critical(&uniform_polytopic(2, 2)).unwrap(), 8);
        assert_eq!(count_critical(&uniform_interval(2)).unwrap(), 512);
        assert_eq!(count_critical(&uniform_polytopic(1, 1)).unwrap(), 0);
        assert_eq!(enumerate_epsilon_a(&uniform_polytopic(1, 1)).unwrap().count(), 0);
    }

    #[test]
    fn point_entries_keep_their_patterns() {
        // (0,0) is a single polynomial; the identity pattern must survive
        let seg = |a: f64| {
            Entry::Polytopic(PolytopicEntry::new(vec![p(&[a, 1.0]), p(&[a + 1.0, 1.0])]).unwrap())
        };
        let f = MatrixFamily::from_rows(vec![
            vec![Entry::Polytopic(PolytopicEntry::point(p(&[1.0]))), seg(0.0)],
            vec![seg(2.0), seg(4.0)],
        ])
        .unwrap();
        let fams: Vec<_> = enumerate_epsilon_a(&f).unwrap().collect();
        assert_eq!(fams.len() as u128, count_critical(&f).unwrap());
        assert!(fams.iter().any(|c| c.pattern == vec![0, 1]));
        assert_eq!(fams.len(), 1 * 1 * 2 * 2 + 1 * 1 * 1 * 2);
    }

    #[test]
    fn remark1_examples() {
        let f = uniform_polytopic(2, 2);
        assert_eq!(specialize_remark1(&f).unwrap().count(), 8);
        assert!(specialize_remark1(&uniform_polytopic(2, 3)).is_err());

        // p¹ = 0 in one cell: its edge is a point
        let flat = |a: f64| {
            Entry::Polytopic(PolytopicEntry::new(vec![p(&[a, 1.0]), p(&[a, 1.0])]).unwrap())
        };
        let seg = |a: f64| {
            Entry::Polytopic(PolytopicEntry::new(vec![p(&[a, 1.0]), p(&[a + 1.0, 1.0])]).unwrap())
        };
        let f = MatrixFamily::from_rows(vec![vec![flat(1.0), seg(2.0)], vec![seg(3.0), seg(4.0)]]).unwrap();
        for fam in specialize_remark1(&f).unwrap() {
            if fam.pattern[0] == 0 {
                assert_eq!(fam.designated[0].from, fam.designated[0].to);
            }
        }
        assert_same_multiset(&f);
    }

    fn assert_same_multiset(f: &MatrixFamily) {
        let mut a: Vec<String> = enumerate_epsilon_a(f).unwrap().map(|c| c.key()).collect();
        let mut b: Vec<String> = specialize_remark1(f).unwrap().map(|c| c.key()).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    fn small_family(max_n: usize, m: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = MatrixFamily> {
        (1..=max_n, m).prop_flat_map(|(n, m)| {
            prop::collection::vec(
                prop::collection::vec(prop::collection::vec(-2i32..=2, 1..=2), m),
                n * n,
            )
            .prop_map(move |cells| {
                let entries = cells
                    .into_iter()
                    .map(|gens| {
                        Entry::Polytopic(
                            PolytopicEntry::new(
                                gens.into_iter()
                                    .map(|c| Polynomial::new(c.into_iter().map(f64::from).collect()))
                                    .collect(),
                            )
                            .unwrap(),
                        )
                    })
                    .collect();
                MatrixFamily::new(n, entries).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn remark1_matches_general_enumeration(f in small_family(3, 2..=2)) {
            assert_same_multiset(&f);
        }

        #[test]
        fn stream_respects_structure(f in small_family(3, 1..=3)) {
            let sets = CriticalSets::polytopic(&f).unwrap();
            let mut seen = 0u128;
            for fam in sets.families() {
                seen += 1;
                prop_assert!(is_permutation(&fam.pattern));
                for e in &fam.designated {
                    let cell = sets.cell(e.row, e.col);
                    prop_assert!(cell.edges.contains(&(e.from_vertex, e.to_vertex)));
                    prop_assert_eq!(&cell.vertices[e.from_vertex], &e.from);
                    prop_assert_eq!(&cell.vertices[e.to_vertex], &e.to);
                }
                for (k, c) in fam.fixed.iter().enumerate() {
                    if let Some(c) = c {
                        prop_assert!(sets.cell(k / f.n(), k % f.n()).vertices.contains(&c.poly));
                    }
                }
            }
            prop_assert_eq!(seen, sets.count());
        }
    }

    #[test]
    fn critical_members_lie_in_the_family() {
        // generators are c + s with increasing constants, so the hull is
        // { c + s : c between the extreme constants }
        let f = uniform_polytopic(2, 3);
        for fam in enumerate_epsilon_a(&f).unwrap().step_by(7) {
            let m = fam.instantiate(&[0.25, 0.6]);
            for i in 0..2 {
                for j in 0..2 {
                    let Entry::Polytopic(e) = f.entry(i, j) else { unreachable!() };
                    let lo = e.generators()[0].coeff(0);
                    let hi = e.generators()[2].coeff(0);
                    let c = m.get(i, j).coeff(0);
                    assert!(c >= lo - 1e-12 && c <= hi + 1e-12);
                    assert_eq!(m.get(i, j).coeff(1), 1.0);
                }
            }
        }
    }

    #[test]
    fn interval_edges_use_kharitonov_vertices() {
        let f = uniform_interval(2);
        for fam in enumerate_epsilon_b2(&f).unwrap().step_by(13) {
            for e in &fam.designated {
                let Entry::Interval(b) = f.entry(e.row, e.col) else { unreachable!() };
                let k = b.kharitonov_vertices();
                assert!(k.contains(&e.from) && k.contains(&e.to));
                assert!(b.contains_poly(&Polynomial::lerp(&e.from, &e.to, 0.37), 1e-12));
            }
        }
    }
}
