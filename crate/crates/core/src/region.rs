//! Open stability regions in the complex plane and their boundaries.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::Error;

/// Relative slack under which a point counts as lying on the boundary.
/// Boundary samples computed with `cos`/`sin` are only accurate to a few ulps.
const BOUNDARY_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    /// Open left half-plane, `Re s < 0`.
    Hurwitz,
    /// Open unit disk, `|s| < 1`.
    Disk,
    /// `Re s < -sigma`, `sigma >= 0`.
    Shifted { sigma: f64 },
    /// Open sector of half-angle `phi` about the negative real axis.
    Sector { phi: f64 },
}

/// A piece of the boundary parametrized by a real `t` over `[t0, t1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryPiece {
    /// `z(t) = origin + t * direction`
    Line {
        origin: Complex64,
        direction: Complex64,
    },
    /// `z(t) = e^{i t}`
    Circle,
}

impl BoundaryPiece {
    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            BoundaryPiece::Line { origin, direction } => origin + direction * t,
            BoundaryPiece::Circle => Complex64::from_polar(1.0, t),
        }
    }

    /// `dz/dt`
    pub fn tangent(&self, t: f64) -> Complex64 {
        match *self {
            BoundaryPiece::Line { direction, .. } => direction,
            BoundaryPiece::Circle => Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, t),
        }
    }
}

/// A boundary piece together with the parameter range it is swept over.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryArc {
    pub piece: BoundaryPiece,
    pub t0: f64,
    pub t1: f64,
}

impl Region {
    pub fn sector(phi: f64) -> Result<Region, Error> {
        if !(phi > 0.0 && phi <= FRAC_PI_2) {
            return Err(Error::Invalid(format!(
                "sector half-angle {phi} outside (0, pi/2]"
            )));
        }
        if phi == FRAC_PI_2 {
            return Ok(Region::Hurwitz);
        }
        Ok(Region::Sector { phi })
    }

    pub fn shifted(sigma: f64) -> Result<Region, Error> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::Invalid(format!("shift {sigma} must be finite and >= 0")));
        }
        Ok(Region::Shifted { sigma })
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, Region::Disk)
    }

    /// Signed distance from `z` to the boundary: positive inside, negative outside.
    pub fn signed_distance(&self, z: Complex64) -> f64 {
        match *self {
            Region::Hurwitz => -z.re,
            Region::Shifted { sigma } => -sigma - z.re,
            Region::Disk => 1.0 - z.norm(),
            Region::Sector { phi } => {
                let r = z.norm();
                if r == 0.0 {
                    return 0.0;
                }
                // angle measured from the negative real axis
                let theta = z.im.atan2(-z.re).abs();
                if theta < phi {
                    r * (phi - theta).sin()
                } else if theta - phi <= FRAC_PI_2 {
                    -r * (theta - phi).sin()
                } else {
                    -r
                }
            }
        }
    }

    /// Strict membership in the open region.
    pub fn contains(&self, z: Complex64) -> bool {
        self.signed_distance(z) > BOUNDARY_SLACK * (1.0 + z.norm())
    }

    /// The boundary as a list of pieces covering `[-sweep_limit, sweep_limit]`
    /// for unbounded regions and the full circle for the disk.
    pub fn boundary_arcs(&self, sweep_limit: f64) -> Vec<BoundaryArc> {
        let i = Complex64::new(0.0, 1.0);
        match *self {
            Region::Hurwitz => vec![BoundaryArc {
                piece: BoundaryPiece::Line {
                    origin: Complex64::new(0.0, 0.0),
                    direction: i,
                },
                t0: -sweep_limit,
                t1: sweep_limit,
            }],
            Region::Shifted { sigma } => vec![BoundaryArc {
                piece: BoundaryPiece::Line {
                    origin: Complex64::new(-sigma, 0.0),
                    direction: i,
                },
                t0: -sweep_limit,
                t1: sweep_limit,
            }],
            Region::Disk => vec![BoundaryArc {
                piece: BoundaryPiece::Circle,
                t0: 0.0,
                t1: 2.0 * PI,
            }],
            Region::Sector { phi } => vec![
                // lower ray, t <= 0: z = t e^{i phi}
                BoundaryArc {
                    piece: BoundaryPiece::Line {
                        origin: Complex64::new(0.0, 0.0),
                        direction: Complex64::from_polar(1.0, phi),
                    },
                    t0: -sweep_limit,
                    t1: 0.0,
                },
                // upper ray, t >= 0: z = t e^{i (pi - phi)}
                BoundaryArc {
                    piece: BoundaryPiece::Line {
                        origin: Complex64::new(0.0, 0.0),
                        direction: Complex64::from_polar(1.0, PI - phi),
                    },
                    t0: 0.0,
                    t1: sweep_limit,
                },
            ],
        }
    }

    /// Ordered samples of the boundary.
    ///
    /// Unbounded regions use a uniform grid of `count` parameters over
    /// `[-sweep_limit, sweep_limit]`; the disk uses `e^{2 pi i k / count}`.
    pub fn boundary_points(&self, count: usize, sweep_limit: f64) -> Vec<Complex64> {
        assert!(count >= 2, "boundary sampling needs at least two points");
        match *self {
            Region::Disk => (0..count)
                .map(|k| {
                    let theta = 2.0 * PI * k as f64 / count as f64;
                    // exact quarter points
                    match (4 * k) % count {
                        0 => match (4 * k) / count {
                            0 => Complex64::new(1.0, 0.0),
                            1 => Complex64::new(0.0, 1.0),
                            2 => Complex64::new(-1.0, 0.0),
                            _ => Complex64::new(0.0, -1.0),
                        },
                        _ => Complex64::from_polar(1.0, theta),
                    }
                })
                .collect(),
            _ => {
                let arcs = self.boundary_arcs(sweep_limit);
                (0..count)
                    .map(|k| {
                        let t = -sweep_limit + 2.0 * sweep_limit * k as f64 / (count - 1) as f64;
                        let arc = arcs
                            .iter()
                            .find(|a| t >= a.t0 && t <= a.t1)
                            .unwrap_or(&arcs[arcs.len() - 1]);
                        arc.piece.point(t)
                    })
                    .collect()
            }
        }
    }

    /// Boundary parameter of the point on the boundary nearest to `z`, with
    /// the piece it belongs to.
    pub fn project(&self, z: Complex64, sweep_limit: f64) -> (BoundaryPiece, f64) {
        let arcs = self.boundary_arcs(sweep_limit);
        let mut best = (arcs[0].piece, arcs[0].t0, f64::INFINITY);
        for arc in arcs {
            let t = match arc.piece {
                BoundaryPiece::Circle => {
                    let a = z.arg();
                    if a < 0.0 {
                        a + 2.0 * PI
                    } else {
                        a
                    }
                }
                BoundaryPiece::Line { origin, direction } => {
                    let rel = z - origin;
                    (rel.re * direction.re + rel.im * direction.im).clamp(arc.t0, arc.t1)
                }
            };
            let dist = (arc.piece.point(t) - z).norm();
            if dist < best.2 {
                best = (arc.piece, t, dist);
            }
        }
        (best.0, best.1)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Hurwitz => write!(f, "hurwitz"),
            Region::Disk => write!(f, "disk"),
            Region::Shifted { sigma } => write!(f, "shifted:{sigma}"),
            Region::Sector { phi } => write!(f, "sector:{phi}"),
        }
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| Error::Invalid(format!("region parameter '{v}': {e}")))
        };
        match s.split_once(':') {
            None if s == "hurwitz" => Ok(Region::Hurwitz),
            None if s == "disk" => Ok(Region::Disk),
            Some(("shifted", v)) => Region::shifted(parse(v)?),
            Some(("sector", v)) => Region::sector(parse(v)?),
            _ => Err(Error::Invalid(format!(
                "unknown region '{s}' (expected hurwitz, disk, shifted:<sigma> or sector:<phi>)"
            ))),
        }
    }
}
