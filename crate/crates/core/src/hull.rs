//! The smallest lattice-aligned convex hexagon around a configuration, and
//! the unoccupied corner regions inside it.

use std::collections::{HashSet, VecDeque};

use crate::configuration::Configuration;
use crate::error::{Error, Result};
use crate::lattice::{LatticeSite, DIRECTIONS};
use crate::polygon::{boundary_polygon, Angle};

/// Corners `A_1..A_6` (stored at indices 0..5) of the enclosing hexagon.
/// Side `a_i` runs from `A_i` to `A_{i+1}` in direction `DIRECTIONS[i % 6]`
/// for `i = 1..6`, i.e. `e2`, `e2 - e1`, `-e1`, `-e2`, `e1 - e2`, `e1`.
/// Sides of length zero are allowed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HexFrame {
    pub m_range: (i64, i64),
    pub n_range: (i64, i64),
    pub diagonal_range: (i64, i64),
}

impl HexFrame {
    pub fn enclosing(config: &Configuration) -> Result<HexFrame> {
        let first = *config.sites().first().ok_or(Error::EmptyConfiguration)?;
        let mut f = HexFrame {
            m_range: (first.m, first.m),
            n_range: (first.n, first.n),
            diagonal_range: (first.diagonal(), first.diagonal()),
        };
        for s in config.sites() {
            widen(&mut f.m_range, s.m);
            widen(&mut f.n_range, s.n);
            widen(&mut f.diagonal_range, s.diagonal());
        }
        Ok(f)
    }

    /// The frame of the lattice hexagon of radius `k` about the origin.
    pub fn regular(k: i64) -> HexFrame {
        HexFrame { m_range: (-k, k), n_range: (-k, k), diagonal_range: (-k, k) }
    }

    pub fn contains(&self, s: LatticeSite) -> bool {
        let within = |(lo, hi): (i64, i64), x: i64| lo <= x && x <= hi;
        within(self.m_range, s.m) && within(self.n_range, s.n) && within(self.diagonal_range, s.diagonal())
    }

    pub fn corners(&self) -> [LatticeSite; 6] {
        let (m0, m1) = self.m_range;
        let (n0, n1) = self.n_range;
        let (s0, s1) = self.diagonal_range;
        [
            LatticeSite::new(m1, n0),
            LatticeSite::new(m1, s1 - m1),
            LatticeSite::new(s1 - n1, n1),
            LatticeSite::new(m0, n1),
            LatticeSite::new(m0, s0 - m0),
            LatticeSite::new(s0 - n0, n0),
        ]
    }

    /// `|A_{i+1} - A_i|` for sides `a_1..a_6`.
    pub fn side_lengths(&self) -> [i64; 6] {
        let c = self.corners();
        std::array::from_fn(|i| c[i].hex_distance(c[(i + 1) % 6]))
    }

    pub fn side_direction(i: usize) -> LatticeSite {
        DIRECTIONS[(i + 1) % 6]
    }

    /// Lattice points of side `a_{i+1}`, from `A_{i+1}` to `A_{i+2}`.
    pub fn side_sites(&self, i: usize) -> Vec<LatticeSite> {
        let start = self.corners()[i];
        let len = self.side_lengths()[i];
        (0..=len).map(|t| start + t * Self::side_direction(i)).collect()
    }

    /// All lattice points inside or on the hexagon, sorted.
    pub fn lattice_points(&self) -> Vec<LatticeSite> {
        let mut v = Vec::new();
        for n in self.n_range.0..=self.n_range.1 {
            let lo = self.m_range.0.max(self.diagonal_range.0 - n);
            let hi = self.m_range.1.min(self.diagonal_range.1 - n);
            v.extend((lo..=hi).map(|m| LatticeSite::new(m, n)));
        }
        v.sort_unstable();
        v
    }

    pub fn lattice_point_count(&self) -> u64 {
        (self.n_range.0..=self.n_range.1)
            .map(|n| {
                let lo = self.m_range.0.max(self.diagonal_range.0 - n);
                let hi = self.m_range.1.min(self.diagonal_range.1 - n);
                (hi - lo + 1).max(0) as u64
            })
            .sum()
    }
}

fn widen(range: &mut (i64, i64), x: i64) {
    range.0 = range.0.min(x);
    range.1 = range.1.max(x);
}

/// Unoccupied regions of the enclosing hexagon, sorted by the corner they hold.
#[derive(Clone, Debug, Default)]
pub struct CornerComponents {
    /// `C_1..C_6`; empty when the corner is occupied.
    pub components: [Vec<LatticeSite>; 6],
    /// Per side, the first and last occupied site `(P_i, P_i')` along it.
    pub side_extremes: [Option<(LatticeSite, LatticeSite)>; 6],
    /// Per side, whether the occupied sites on it form one interval.
    pub side_contiguous: [bool; 6],
    /// Components holding no corner.
    pub cornerless: Vec<Vec<LatticeSite>>,
    /// Components holding two or more distinct corners, with their corner indices.
    pub multi_corner: Vec<(Vec<LatticeSite>, Vec<usize>)>,
}

impl CornerComponents {
    pub fn total_size(&self) -> usize {
        self.components.iter().map(Vec::len).sum::<usize>()
            + self.cornerless.iter().map(Vec::len).sum::<usize>()
            + self.multi_corner.iter().map(|(c, _)| c.len()).sum::<usize>()
    }

    pub fn is_well_formed(&self) -> bool {
        self.cornerless.is_empty() && self.multi_corner.is_empty()
    }
}

/// Splits the empty part of the enclosing hexagon into connected pieces and
/// assigns each to the corner it contains. No preconditions; malformed
/// pieces land in `cornerless` / `multi_corner`.
pub fn analyze_corners(config: &Configuration) -> Result<(HexFrame, CornerComponents)> {
    let frame = HexFrame::enclosing(config)?;
    let corners = frame.corners();
    let empty: HashSet<LatticeSite> =
        frame.lattice_points().into_iter().filter(|&s| !config.contains(s)).collect();
    let mut out = CornerComponents::default();

    let mut sorted: Vec<_> = empty.iter().copied().collect();
    sorted.sort_unstable();
    let mut seen = HashSet::new();
    for start in sorted {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for t in s.neighbors() {
                if empty.contains(&t) && seen.insert(t) {
                    comp.push(t);
                    queue.push_back(t);
                }
            }
        }
        comp.sort_unstable();
        let mut held: Vec<usize> = Vec::new();
        for (i, c) in corners.iter().enumerate() {
            if comp.binary_search(c).is_ok() && !held.iter().any(|&j| corners[j] == *c) {
                held.push(i);
            }
        }
        match held.as_slice() {
            [] => out.cornerless.push(comp),
            [i] => out.components[*i] = comp,
            _ => out.multi_corner.push((comp, held)),
        }
    }

    for i in 0..6 {
        let side = frame.side_sites(i);
        let occ: Vec<usize> = (0..side.len()).filter(|&t| config.contains(side[t])).collect();
        if let (Some(&a), Some(&b)) = (occ.first(), occ.last()) {
            out.side_extremes[i] = Some((side[a], side[b]));
            out.side_contiguous[i] = b - a + 1 == occ.len();
        }
    }
    Ok((frame, out))
}

/// As [`analyze_corners`], for ground states: rejects an acute boundary
/// angle and any empty region not holding exactly one corner.
pub fn corner_components(config: &Configuration) -> Result<(HexFrame, CornerComponents)> {
    if config.len() >= 3 {
        let polygon = boundary_polygon(config)?;
        if let Some(i) = polygon.angles().iter().position(|&a| a == Angle::ACUTE) {
            return Err(Error::Precondition(format!(
                "acute boundary angle at {}; delete that atom first",
                polygon.vertices()[i]
            )));
        }
    }
    let (frame, cc) = analyze_corners(config)?;
    if let Some(c) = cc.cornerless.first() {
        return Err(Error::Construction(format!("empty region at {} holds no corner", c[0])));
    }
    if let Some((c, held)) = cc.multi_corner.first() {
        return Err(Error::Construction(format!("empty region at {} holds corners {held:?}", c[0])));
    }
    Ok((frame, cc))
}
