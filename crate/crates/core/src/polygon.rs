//! Boundary polygon of a simply connected configuration.

use std::collections::HashMap;
use std::fmt;

use crate::configuration::Configuration;
use crate::error::{Error, Result};
use crate::lattice::{direction_index, LatticeSite, DIRECTIONS};

/// Interior angle of the boundary polygon, in units of `pi/3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Angle(u8);

impl Angle {
    pub const ACUTE: Angle = Angle(1);
    pub const OBTUSE: Angle = Angle(2);
    pub const FLAT: Angle = Angle(3);
    pub const REFLEX: Angle = Angle(4);

    pub fn from_sixths(k: u8) -> Option<Angle> {
        (1..=4).contains(&k).then_some(Angle(k))
    }

    pub fn sixths(self) -> u8 {
        self.0
    }

    pub fn radians(self) -> f64 {
        self.0 as f64 * std::f64::consts::FRAC_PI_3
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            3 => write!(f, "pi"),
            k => write!(f, "{k}pi/3"),
        }
    }
}

/// Counter-clockwise cycle of boundary atoms with the interior angle at each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryPolygon {
    vertices: Vec<LatticeSite>,
    angles: Vec<Angle>,
}

impl BoundaryPolygon {
    /// Checks closure, unit steps, and the angle set; angles are recomputed.
    pub fn from_vertices(vertices: Vec<LatticeSite>) -> Result<Self> {
        let m = vertices.len();
        if m < 3 {
            return Err(Error::NotSimple(format!("{m} vertices")));
        }
        let mut angles = Vec::with_capacity(m);
        for i in 0..m {
            let prev = vertices[(i + m - 1) % m];
            let next = vertices[(i + 1) % m];
            let v = vertices[i];
            let (Some(out), Some(back)) = (direction_index(next - v), direction_index(prev - v)) else {
                return Err(Error::NotSimple(format!("edge at {v} is not a lattice bond")));
            };
            let k = ((back + 6 - out) % 6) as u8;
            let angle = Angle::from_sixths(k)
                .ok_or_else(|| Error::NotSimple(format!("angle {k}pi/3 at {v}")))?;
            angles.push(angle);
        }
        let turning: i64 = angles.iter().map(|a| 3 - a.0 as i64).sum();
        if turning != 6 {
            return Err(Error::NotSimple(format!("turning number {turning}/6")));
        }
        Ok(BoundaryPolygon { vertices, angles })
    }

    pub fn vertices(&self) -> &[LatticeSite] {
        &self.vertices
    }

    pub fn angles(&self) -> &[Angle] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Euclidean length; every edge is one bond.
    pub fn length(&self) -> f64 {
        self.vertices.len() as f64
    }

    /// `sum(pi - phi_i)` in units of `pi/3`; six for a counter-clockwise simple polygon.
    pub fn turning_sixths(&self) -> i64 {
        self.angles.iter().map(|a| 3 - a.0 as i64).sum()
    }

    /// Unit edge vectors `v_{i+1} - v_i`.
    pub fn edges(&self) -> impl Iterator<Item = LatticeSite> + '_ {
        let m = self.vertices.len();
        (0..m).map(move |i| self.vertices[(i + 1) % m] - self.vertices[i])
    }
}

/// Traces the boundary bonds counter-clockwise, interior on the left, from
/// the lexicographically smallest boundary site.
pub fn boundary_polygon(config: &Configuration) -> Result<BoundaryPolygon> {
    if config.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    if config.len() < 3 {
        return Err(Error::NotSimple(format!("{} atoms bound no area", config.len())));
    }
    if !config.is_connected() {
        return Err(Error::Disconnected);
    }
    if let Some(h) = config.find_hole() {
        return Err(Error::Hole(h));
    }
    let mut next: HashMap<LatticeSite, LatticeSite> = HashMap::new();
    let mut directed = 0usize;
    for &u in config.sites() {
        for d in 0..6 {
            let v = u + DIRECTIONS[d];
            if !config.contains(v) {
                continue;
            }
            let left = config.contains(u + DIRECTIONS[(d + 1) % 6]);
            let right = config.contains(u + DIRECTIONS[(d + 5) % 6]);
            if !left && !right {
                return Err(Error::NotSimple(format!("bond {u}-{v} borders no triangle")));
            }
            if left && !right {
                directed += 1;
                if next.insert(u, v).is_some() {
                    return Err(Error::NotSimple(format!("cut vertex at {u}")));
                }
            }
        }
    }
    let start = *next.keys().min().ok_or_else(|| Error::NotSimple("no boundary bonds".into()))?;
    let mut vertices = vec![start];
    let mut cur = next[&start];
    while cur != start {
        vertices.push(cur);
        if vertices.len() > directed {
            return Err(Error::NotSimple("boundary walk does not close".into()));
        }
        cur = *next.get(&cur).ok_or_else(|| Error::NotSimple(format!("boundary breaks at {cur}")))?;
    }
    if vertices.len() != directed {
        return Err(Error::NotSimple("boundary has several cycles".into()));
    }
    BoundaryPolygon::from_vertices(vertices)
}
