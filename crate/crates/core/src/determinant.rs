//! Determinants and cofactors of concrete polynomial matrices.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{vertex_members, CellParam, MatrixFamily};
use crate::polynomial::Polynomial;

/// Above this many pure-vertex members the degree check samples vertices
/// instead of enumerating them.
pub const VERTEX_ENUMERATION_CAP: u128 = 1 << 16;

/// Square matrix of polynomials, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    n: usize,
    cells: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn new(n: usize, cells: Vec<Polynomial>) -> Self {
        assert_eq!(cells.len(), n * n, "PolyMatrix needs n*n cells");
        PolyMatrix { n, cells }
    }

    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        PolyMatrix::new(n, rows.into_iter().flatten().collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.cells[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.cells[i * self.n + j] = p;
    }

    pub fn cells(&self) -> &[Polynomial] {
        &self.cells
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.n {
            self.cells.swap(a * self.n + j, b * self.n + j);
        }
    }

    /// The matrix with row `i` and column `j` removed.
    pub fn submatrix(&self, i: usize, j: usize) -> PolyMatrix {
        let cells = (0..self.n)
            .filter(|&r| r != i)
            .flat_map(|r| {
                (0..self.n)
                    .filter(move |&c| c != j)
                    .map(move |c| self.get(r, c).clone())
            })
            .collect();
        PolyMatrix::new(self.n - 1, cells)
    }

    /// Determinant by Laplace expansion down the rows, memoized over the
    /// subset of columns still available.
    pub fn det(&self) -> Polynomial {
        let n = self.n;
        let full = (1usize << n) - 1;
        let mut memo: Vec<Option<Polynomial>> = vec![None; 1 << n];
        memo[0] = Some(Polynomial::one());
        self.det_cols(full, &mut memo)
    }

    fn det_cols(&self, mask: usize, memo: &mut [Option<Polynomial>]) -> Polynomial {
        if let Some(p) = &memo[mask] {
            return p.clone();
        }
        let row = self.n - mask.count_ones() as usize;
        let mut acc = Polynomial::zero();
        let mut position = 0;
        for col in 0..self.n {
            if mask >> col & 1 == 0 {
                continue;
            }
            let a = self.get(row, col);
            if !a.is_zero() {
                let term = a * &self.det_cols(mask & !(1 << col), memo);
                acc = if position % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            position += 1;
        }
        memo[mask] = Some(acc.clone());
        acc
    }

    /// Signed cofactor `(-1)^{i+j} det(submatrix(i, j))`, zero-based indices.
    pub fn cofactor(&self, i: usize, j: usize) -> Result<Polynomial> {
        if i >= self.n || j >= self.n {
            return Err(Error::Parameter(format!(
                "cofactor index ({i}, {j}) out of range for n = {}",
                self.n
            )));
        }
        if self.n == 1 {
            return Ok(Polynomial::one());
        }
        let m = self.submatrix(i, j).det();
        Ok(if (i + j) % 2 == 0 { m } else { -&m })
    }

    /// Laplace expansion down column `j`: `Σ_i cell(i, j) * cofactor(i, j)`.
    pub fn det_by_column(&self, j: usize) -> Result<Polynomial> {
        (0..self.n).try_fold(Polynomial::zero(), |acc, i| {
            Ok(&acc + &(self.get(i, j) * &self.cofactor(i, j)?))
        })
    }

    /// Determinant by fraction-free (Bareiss) elimination with row pivoting.
    pub fn det_fraction_free(&self) -> Polynomial {
        let n = self.n;
        let mut a = self.clone();
        let mut sign = 1.0;
        let mut prev = Polynomial::one();
        for k in 0..n.saturating_sub(1) {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !a.get(r, k).is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return Polynomial::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(a.get(k, k) * a.get(i, j)) - &(a.get(i, k) * a.get(k, j));
                    a.set(i, j, div_exact(&num, &prev));
                }
                a.set(i, k, Polynomial::zero());
            }
            prev = a.get(k, k).clone();
        }
        a.get(n - 1, n - 1).scale(sign)
    }
}

/// Quotient of polynomial long division; the remainder is discarded, so this
/// is only meaningful when `den` divides `num`.
fn div_exact(num: &Polynomial, den: &Polynomial) -> Polynomial {
    let (Some(dn), Some(dd)) = (num.degree(), den.degree()) else {
        return Polynomial::zero();
    };
    if dn < dd {
        return Polynomial::zero();
    }
    let mut rem = num.coeffs().to_vec();
    let lead = den.leading();
    let mut quot = vec![0.0; dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let q = rem[k + dd] / lead;
        quot[k] = q;
        for (t, &c) in den.coeffs().iter().enumerate() {
            rem[k + t] -= q * c;
        }
    }
    Polynomial::new(quot)
}

/// Outcome of the degree-invariance check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeReport {
    pub constant: bool,
    /// Distinct observed degrees; `None` is the zero determinant.
    pub observed_degrees: Vec<Option<usize>>,
    /// A member whose determinant degree falls below the largest observed one.
    pub witness: Option<DegreeWitness>,
    pub vertices_checked: usize,
    /// False when the vertex set was sampled rather than enumerated.
    pub vertices_exhaustive: bool,
    pub samples_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeWitness {
    pub params: Vec<CellParam>,
    pub degree: Option<usize>,
    pub is_vertex: bool,
}

/// Heuristic check that `deg det A` is the same for every member: all
/// pure-vertex members (or a random subset when there are too many) plus
/// `samples` random interior members. Two members of top degree whose
/// leading coefficients differ in sign also count as a drop, since the
/// leading coefficient vanishes between them; the witness is then located
/// by bisection on the segment joining them.
pub fn check_degree_invariant(family: &MatrixFamily, samples: usize, seed: u64) -> DegreeReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_cell = family.vertex_params();
    let count = family.vertex_member_count();
    let exhaustive = count <= VERTEX_ENUMERATION_CAP;

    let mut members: Vec<(Vec<CellParam>, bool)> = if exhaustive {
        vertex_members(&per_cell).map(|v| (v, true)).collect()
    } else {
        (0..VERTEX_ENUMERATION_CAP)
            .map(|_| {
                let v = per_cell
                    .iter()
                    .map(|opts| opts.choose(&mut rng).expect("nonempty vertex list").clone())
                    .collect();
                (v, true)
            })
            .collect()
    };
    let vertices_checked = members.len();
    members.extend((0..samples).map(|_| (family.random_params(&mut rng), false)));

    let degrees: Vec<Option<usize>> = members
        .iter()
        .map(|(params, _)| {
            family
                .sample(params)
                .expect("vertex and random parameters are admissible")
                .det()
                .degree()
        })
        .collect();

    let max = degrees.iter().copied().max().flatten();
    let mut observed = degrees.clone();
    observed.sort();
    observed.dedup();
    let mut witness = degrees
        .iter()
        .position(|&d| d != max)
        .map(|k| DegreeWitness {
            params: members[k].0.clone(),
            degree: degrees[k],
            is_vertex: members[k].1,
        });
    if let (None, Some(d)) = (&witness, max) {
        witness = sign_change_witness(family, &members, d);
        if let Some(w) = &witness {
            observed.push(w.degree);
            observed.sort();
            observed.dedup();
        }
    }

    DegreeReport {
        constant: observed.len() == 1 && max.is_some() && witness.is_none(),
        observed_degrees: observed,
        witness,
        vertices_checked,
        vertices_exhaustive: exhaustive,
        samples_checked: samples,
    }
}

fn lerp_params(a: &[CellParam], b: &[CellParam], t: f64) -> Vec<CellParam> {
    let mix = |x: &[f64], y: &[f64]| -> Vec<f64> {
        x.iter().zip(y).map(|(u, v)| (1.0 - t) * u + t * v).collect()
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| match (x, y) {
            (CellParam::Weights(x), CellParam::Weights(y)) => CellParam::Weights(mix(x, y)),
            (CellParam::Coeffs(x), CellParam::Coeffs(y)) => CellParam::Coeffs(mix(x, y)),
            _ => unreachable!("parameters of one cell share a kind"),
        })
        .collect()
}

/// A member of lower degree between two members of degree `d` whose leading
/// coefficients have opposite signs.
fn sign_change_witness(
    family: &MatrixFamily,
    members: &[(Vec<CellParam>, bool)],
    d: usize,
) -> Option<DegreeWitness> {
    let lead = |params: &[CellParam]| -> f64 {
        family
            .sample(params)
            .expect("convex combinations of admissible parameters are admissible")
            .det()
            .coeff(d)
    };
    let sign = lead(&members[0].0).signum();
    let other = members.iter().find(|(p, _)| lead(p).signum() != sign)?;
    let (a, b) = (&members[0].0, &other.0);
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if lead(&lerp_params(a, b, mid)) * sign > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let params = lerp_params(a, b, hi);
    let degree = family.sample(&params).ok()?.det().degree();
    Some(DegreeWitness { params, degree, is_vertex: false })
}
