//! Latitude paths on the two-sphere and the oriented count of their
//! preimages of a point on the circle.
//!
//! Angles are exact rationals in units of `π`. A path of class `n` is a
//! piecewise-linear map `[0, 1] → R` through equally spaced nodes, running
//! from `0` to `(2n+1)` (or back, for reversed paths). A point at angle `α`
//! of the circle is hit at every level `α + 2m`; a crossing of a level with
//! increasing angle counts `+1`, with decreasing angle `-1`.
//!
//! The chamber `first_half` (`0 < α < 1`) receives the larger count `n + 1`
//! on the canonical path, `second_half` (`1 < α < 2`) receives `n`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChamberError {
    #[error("angle {0}π is a pole; pick a point off the fixed circle")]
    Pole(Rational),
    #[error("angle {0}π is outside (0, 2)π")]
    OutOfRange(Rational),
    #[error("invalid path: {0}")]
    InvalidPath(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatitudePath {
    n: u32,
    /// Node angles in units of `π`.
    nodes: Vec<Rational>,
}

impl LatitudePath {
    /// A path through the given nodes. The endpoints must be `0` and
    /// `2n+1`, in either order.
    pub fn from_nodes(n: u32, nodes: Vec<Rational>) -> Result<Self, ChamberError> {
        if nodes.len() < 2 {
            return Err(ChamberError::InvalidPath("a path needs at least two nodes".into()));
        }
        let total = Rational::from(2 * n as i64 + 1);
        let (first, last) = (&nodes[0], &nodes[nodes.len() - 1]);
        let forward = first.is_zero() && *last == total;
        let backward = *first == total && last.is_zero();
        if !forward && !backward {
            return Err(ChamberError::InvalidPath(format!(
                "endpoints must be 0 and {total}, got {first} and {last}"
            )));
        }
        Ok(LatitudePath { n, nodes })
    }

    /// A monotone path through the given interior nodes.
    pub fn reparametrized(n: u32, interior: Vec<Rational>) -> Result<Self, ChamberError> {
        let mut nodes = vec![Rational::zero()];
        nodes.extend(interior);
        nodes.push(Rational::from(2 * n as i64 + 1));
        if nodes.windows(2).any(|w| w[1] < w[0]) {
            return Err(ChamberError::InvalidPath("nodes are not monotone".into()));
        }
        Self::from_nodes(n, nodes)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn nodes(&self) -> &[Rational] {
        &self.nodes
    }

    /// Total angle swept, `±(2n+1)`.
    pub fn total_angle(&self) -> Rational {
        &self.nodes[self.nodes.len() - 1] - &self.nodes[0]
    }

    /// Angle at parameter `t ∈ [0, 1]`.
    pub fn angle_at(&self, t: &Rational) -> Rational {
        let segments = self.nodes.len() - 1;
        let s = t * &Rational::from(segments as i64);
        let i = s.floor().try_into().unwrap_or(0usize).min(segments - 1);
        let frac = &s - &Rational::from(i as i64);
        &self.nodes[i] + &(&frac * &(&self.nodes[i + 1] - &self.nodes[i]))
    }

    /// The same path run backwards.
    pub fn reversed(&self) -> Self {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        LatitudePath { n: self.n, nodes }
    }
}

/// The canonical path of class `n`: a single segment from `0` to `2n+1`.
pub fn make_path(n: u32) -> LatitudePath {
    LatitudePath::from_nodes(n, vec![Rational::zero(), Rational::from(2 * n as i64 + 1)]).expect("valid endpoints")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chamber {
    FirstHalf,
    SecondHalf,
}

impl Chamber {
    /// Chamber of a non-pole angle in `(0, 2)`.
    pub fn of(angle: &Rational) -> Result<Self, ChamberError> {
        if angle.is_zero() || *angle == 1 || *angle == 2 {
            return Err(ChamberError::Pole(angle.clone()));
        }
        if !angle.is_positive() || *angle > 2 {
            return Err(ChamberError::OutOfRange(angle.clone()));
        }
        Ok(if *angle < 1 {
            Chamber::FirstHalf
        } else {
            Chamber::SecondHalf
        })
    }

    /// A fixed representative angle.
    pub fn representative(self) -> Rational {
        match self {
            Chamber::FirstHalf => Rational::new(1, 2),
            Chamber::SecondHalf => Rational::new(3, 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberCount {
    /// In units of `π`.
    pub point_angle: Rational,
    pub chamber: Chamber,
    pub signed_count: i64,
}

/// Oriented number of parameters at which the path passes `α` mod `2`.
pub fn signed_preimage_count(path: &LatitudePath, point_angle: &Rational) -> Result<ChamberCount, ChamberError> {
    let chamber = Chamber::of(point_angle)?;
    let lo = path.nodes.iter().min().expect("nonempty");
    let hi = path.nodes.iter().max().expect("nonempty");
    let two = Rational::from(2);
    // levels α + 2m covering [lo, hi]
    let m_lo: BigInt = ((lo - point_angle) / &two).floor();
    let m_hi: BigInt = ((hi - point_angle) / &two).ceil();
    let mut count = 0i64;
    let mut m = m_lo;
    while m <= m_hi {
        let level = point_angle + &(&two * &Rational::from(m.clone()));
        for w in path.nodes.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if *a < level && level <= *b {
                count += 1;
            } else if *b < level && level <= *a {
                count -= 1;
            }
        }
        m += 1;
    }
    Ok(ChamberCount {
        point_angle: point_angle.clone(),
        chamber,
        signed_count: count,
    })
}

/// `count(first_half) - count(second_half)`.
pub fn wall_crossing_jump(path: &LatitudePath) -> i64 {
    let first = signed_preimage_count(path, &Chamber::FirstHalf.representative()).expect("generic");
    let second = signed_preimage_count(path, &Chamber::SecondHalf.representative()).expect("generic");
    first.signed_count - second.signed_count
}
