//! Determinant value sets at a point, and the rectangles enclosing them.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::exclusion::{cube_enclosure, MultiAffineDet};
use crate::critical_set::CriticalFamily;
use crate::error::Result;
use crate::family::{vertex_members, Entry, MatrixFamily};
use crate::interval::{Interval, Rect};

#[derive(Clone, Copy, Debug)]
pub enum ValueSetSource<'a> {
    Family(&'a MatrixFamily),
    Critical(&'a CriticalFamily),
}

/// `det(z)` over `samples` random parameter choices. A source with a single
/// member yields a single point.
pub fn value_set(source: ValueSetSource<'_>, z: Complex64, samples: usize, seed: u64) -> Result<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match source {
        ValueSetSource::Family(f) => {
            if f.is_fixed() {
                let params = f.random_params(&mut rng);
                return Ok(vec![f.sample(&params)?.det().evaluate(z)]);
            }
            (0..samples)
                .map(|_| {
                    let params = f.random_params(&mut rng);
                    Ok(f.sample(&params)?.det().evaluate(z))
                })
                .collect()
        }
        ValueSetSource::Critical(cf) => {
            let ma = MultiAffineDet::new(cf);
            if cf.is_degenerate() {
                return Ok(vec![ma.evaluate(z, &vec![0.0; cf.n])]);
            }
            Ok((0..samples)
                .map(|_| {
                    let lambda: Vec<f64> = (0..cf.n).map(|_| rng.gen()).collect();
                    ma.evaluate(z, &lambda)
                })
                .collect())
        }
    }
}

/// Sweep limit for sampling unbounded boundaries: `sweep_multiple` times
/// one plus the largest Cauchy root bound of the pure-vertex determinants
/// (the first 4096 of them).
pub fn family_sweep_limit(f: &MatrixFamily, sweep_multiple: f64) -> f64 {
    let per_cell = f.vertex_params();
    let bound = vertex_members(&per_cell)
        .take(4096)
        .filter_map(|params| f.sample(&params).ok()?.det().cauchy_bound())
        .fold(1.0, f64::max);
    sweep_multiple * (1.0 + bound)
}

/// Rectangle containing `det(z; λ)` for every `λ` in the cube.
pub fn critical_enclosure(cf: &CriticalFamily, z: Complex64) -> Rect {
    cube_enclosure(&MultiAffineDet::new(cf), z)
}

fn entry_rect(e: &Entry, z: Complex64) -> Rect {
    match e {
        Entry::Polytopic(p) => Rect::hull_of(p.generators().iter().map(|g| g.evaluate(z)))
            .expect("polytopic entries are nonempty"),
        Entry::Interval(b) => {
            let mut power = Complex64::new(1.0, 0.0);
            let mut acc = Rect::zero();
            for k in 0..b.len() {
                let coeff = Rect { re: Interval::new(b.lower()[k], b.upper()[k]), im: Interval::point(0.0) };
                acc = acc + coeff * Rect::point(power);
                power *= z;
            }
            acc
        }
    }
}

fn det_rect(cells: &[Rect], n: usize) -> Rect {
    match n {
        0 => Rect::point(Complex64::new(1.0, 0.0)),
        1 => cells[0],
        _ => (0..n).fold(Rect::zero(), |acc, j| {
            let minor: Vec<Rect> = (1..n)
                .flat_map(|i| (0..n).filter(move |&c| c != j).map(move |c| (i, c)))
                .map(|(i, c)| cells[i * n + c])
                .collect();
            let term = cells[j] * det_rect(&minor, n - 1);
            if j % 2 == 0 {
                acc + term
            } else {
                acc - term
            }
        }),
    }
}

/// Rectangle containing `det(z)` for every member of the family: cellwise
/// hulls combined by interval cofactor expansion.
pub fn family_enclosure(f: &MatrixFamily, z: Complex64) -> Rect {
    let cells: Vec<Rect> = f.entries().iter().map(|e| entry_rect(e, z)).collect();
    det_rect(&cells, f.n())
}
