//! Axial integer coordinates on the triangular lattice spanned by
//! `e1 = (1, 0)` and `e2 = (1/2, sqrt(3)/2)`, together with its point group.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// The six unit steps, ordered counter-clockwise starting at `e1` (angle 0).
pub const DIRECTIONS: [LatticeSite; 6] = [
    LatticeSite::new(1, 0),
    LatticeSite::new(0, 1),
    LatticeSite::new(-1, 1),
    LatticeSite::new(-1, 0),
    LatticeSite::new(0, -1),
    LatticeSite::new(1, -1),
];

/// A lattice point `m e1 + n e2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct LatticeSite {
    pub m: i64,
    pub n: i64,
}

impl LatticeSite {
    pub const ORIGIN: LatticeSite = LatticeSite { m: 0, n: 0 };

    pub const fn new(m: i64, n: i64) -> Self {
        LatticeSite { m, n }
    }

    pub fn to_cartesian(self) -> (f64, f64) {
        (self.m as f64 + 0.5 * self.n as f64, 0.5 * SQRT_3 * self.n as f64)
    }

    pub fn neighbors(self) -> [LatticeSite; 6] {
        DIRECTIONS.map(|d| self + d)
    }

    /// Graph distance on the lattice, `max(|m|, |n|, |m + n|)` of the difference.
    pub fn hex_distance(self, other: LatticeSite) -> i64 {
        let d = other - self;
        d.m.abs().max(d.n.abs()).max((d.m + d.n).abs())
    }

    pub fn is_neighbor(self, other: LatticeSite) -> bool {
        direction_index(other - self).is_some()
    }

    /// Coordinate along the third lattice axis; constant on lines parallel to `e2 - e1`.
    pub fn diagonal(self) -> i64 {
        self.m + self.n
    }

    /// Rotation by `sixths * pi/3` about the origin.
    pub fn rotated(self, sixths: i64) -> LatticeSite {
        let mut p = self;
        for _ in 0..sixths.rem_euclid(6) {
            p = LatticeSite::new(-p.n, p.m + p.n);
        }
        p
    }

    /// Reflection across the `e1` axis, `(x, y) -> (x, -y)`.
    pub fn reflected(self) -> LatticeSite {
        LatticeSite::new(self.m + self.n, -self.n)
    }
}

/// Index into [`DIRECTIONS`] of a unit step, if `d` is one.
pub fn direction_index(d: LatticeSite) -> Option<usize> {
    DIRECTIONS.iter().position(|&u| u == d)
}

impl Add for LatticeSite {
    type Output = LatticeSite;
    fn add(self, rhs: LatticeSite) -> LatticeSite {
        LatticeSite::new(self.m + rhs.m, self.n + rhs.n)
    }
}

impl Sub for LatticeSite {
    type Output = LatticeSite;
    fn sub(self, rhs: LatticeSite) -> LatticeSite {
        LatticeSite::new(self.m - rhs.m, self.n - rhs.n)
    }
}

impl Neg for LatticeSite {
    type Output = LatticeSite;
    fn neg(self) -> LatticeSite {
        LatticeSite::new(-self.m, -self.n)
    }
}

impl std::ops::Mul<LatticeSite> for i64 {
    type Output = LatticeSite;
    fn mul(self, rhs: LatticeSite) -> LatticeSite {
        LatticeSite::new(self * rhs.m, self * rhs.n)
    }
}

impl fmt::Display for LatticeSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

impl From<(i64, i64)> for LatticeSite {
    fn from((m, n): (i64, i64)) -> Self {
        LatticeSite::new(m, n)
    }
}

/// `p -> R^rotation F^reflect p + translation`, where `R` is the rotation by
/// `pi/3` and `F` the reflection across the `e1` axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeIsometry {
    rotation: u8,
    reflect: bool,
    translation: LatticeSite,
}

impl Default for LatticeIsometry {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl LatticeIsometry {
    pub const IDENTITY: LatticeIsometry =
        LatticeIsometry { rotation: 0, reflect: false, translation: LatticeSite::ORIGIN };

    pub fn new(rotation: i64, reflect: bool, translation: LatticeSite) -> Self {
        LatticeIsometry { rotation: rotation.rem_euclid(6) as u8, reflect, translation }
    }

    pub fn rotation(sixths: i64) -> Self {
        Self::new(sixths, false, LatticeSite::ORIGIN)
    }

    pub fn reflection() -> Self {
        Self::new(0, true, LatticeSite::ORIGIN)
    }

    pub fn translation(t: LatticeSite) -> Self {
        Self::new(0, false, t)
    }

    /// The twelve elements of the point group fixing the origin.
    pub fn point_group() -> impl Iterator<Item = LatticeIsometry> {
        (0..2).flat_map(|f| (0..6).map(move |r| Self::new(r, f == 1, LatticeSite::ORIGIN)))
    }

    pub fn rotation_index(&self) -> u8 {
        self.rotation
    }

    pub fn is_reflection(&self) -> bool {
        self.reflect
    }

    pub fn translation_part(&self) -> LatticeSite {
        self.translation
    }

    fn linear(&self, p: LatticeSite) -> LatticeSite {
        let p = if self.reflect { p.reflected() } else { p };
        p.rotated(self.rotation as i64)
    }

    pub fn apply(&self, p: LatticeSite) -> LatticeSite {
        self.linear(p) + self.translation
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &LatticeIsometry) -> LatticeIsometry {
        // F R^r = R^-r F
        let r2 = if self.reflect { -(other.rotation as i64) } else { other.rotation as i64 };
        LatticeIsometry::new(
            self.rotation as i64 + r2,
            self.reflect ^ other.reflect,
            self.apply(other.translation),
        )
    }

    pub fn inverse(&self) -> LatticeIsometry {
        // (R^r F^f)^-1 = F^f R^-r = R^(f ? r : -r) F^f
        let r = if self.reflect { self.rotation as i64 } else { -(self.rotation as i64) };
        let lin = LatticeIsometry::new(r, self.reflect, LatticeSite::ORIGIN);
        LatticeIsometry { translation: -lin.apply(self.translation), ..lin }
    }
}

/// Orbit representative under the point group and all translations: the
/// lexicographically smallest sorted image, each image translated so its
/// smallest site is the origin.
pub fn canonical_form(sites: &[LatticeSite]) -> Result<Vec<LatticeSite>> {
    if sites.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    let mut best: Option<Vec<LatticeSite>> = None;
    let mut image = Vec::with_capacity(sites.len());
    for g in LatticeIsometry::point_group() {
        image.clear();
        image.extend(sites.iter().map(|&s| g.apply(s)));
        normalize_translation(&mut image);
        if best.as_ref().is_none_or(|b| image < *b) {
            best = Some(image.clone());
        }
    }
    Ok(best.expect("point group is non-empty"))
}

/// Sorts and translates so the smallest site sits at the origin.
pub fn normalize_translation(sites: &mut [LatticeSite]) {
    sites.sort_unstable();
    if let Some(&first) = sites.first() {
        for s in sites.iter_mut() {
            *s = *s - first;
        }
    }
}
