//! Finite atomic configurations on the lattice and their bond graphs.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::lattice::{canonical_form, LatticeIsometry, LatticeSite, DIRECTIONS};

/// Energy of a raw list of positions under the sticky-disc potential.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Energy {
    Finite(i64),
    /// Some pair of atoms sits closer than the hard-core distance.
    Infinite,
}

/// A finite set of lattice sites with its bond count cached at construction.
#[derive(Clone, Debug)]
pub struct Configuration {
    sites: Vec<LatticeSite>,
    index: HashSet<LatticeSite>,
    bonds: u64,
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.sites == other.sites
    }
}

impl Eq for Configuration {}

impl Configuration {
    /// Builds a configuration, rejecting repeated sites.
    pub fn new(sites: impl IntoIterator<Item = LatticeSite>) -> Result<Self> {
        let mut index = HashSet::new();
        let mut list = Vec::new();
        for s in sites {
            if !index.insert(s) {
                return Err(Error::DuplicateSite(s));
            }
            list.push(s);
        }
        Ok(Self::from_parts(list, index))
    }

    pub fn empty() -> Self {
        Self::from_parts(Vec::new(), HashSet::new())
    }

    fn from_parts(mut sites: Vec<LatticeSite>, index: HashSet<LatticeSite>) -> Self {
        sites.sort_unstable();
        let bonds = count_bonds(&sites, &index);
        Configuration { sites, index, bonds }
    }

    pub(crate) fn from_set(index: HashSet<LatticeSite>) -> Self {
        let sites = index.iter().copied().collect();
        Self::from_parts(sites, index)
    }

    pub fn sites(&self) -> &[LatticeSite] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, s: LatticeSite) -> bool {
        self.index.contains(&s)
    }

    pub fn bond_count(&self) -> u64 {
        self.bonds
    }

    /// `-2` per bond: the pair sum runs over ordered pairs.
    pub fn energy(&self) -> i64 {
        -2 * self.bonds as i64
    }

    pub fn degree(&self, s: LatticeSite) -> usize {
        s.neighbors().iter().filter(|t| self.contains(**t)).count()
    }

    pub fn transformed(&self, g: &LatticeIsometry) -> Configuration {
        let index: HashSet<_> = self.sites.iter().map(|&s| g.apply(s)).collect();
        Self::from_set(index)
    }

    pub fn canonical(&self) -> Result<Vec<LatticeSite>> {
        canonical_form(&self.sites)
    }

    /// Sites with at most five occupied neighbors.
    pub fn boundary_sites(&self) -> Vec<LatticeSite> {
        self.sites.iter().copied().filter(|&s| self.degree(s) <= 5).collect()
    }

    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.sites.first() else { return true };
        let mut seen = HashSet::with_capacity(self.len());
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for t in s.neighbors() {
                if self.contains(t) && seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        seen.len() == self.len()
    }

    /// First unoccupied site enclosed by the configuration, if any.
    pub fn find_hole(&self) -> Option<LatticeSite> {
        let (lo, hi) = self.bounding_box()?;
        let (lo, hi) = (lo - LatticeSite::new(1, 1), hi + LatticeSite::new(1, 1));
        let width = (hi.m - lo.m + 1) as usize;
        let height = (hi.n - lo.n + 1) as usize;
        let idx = |s: LatticeSite| (s.n - lo.n) as usize * width + (s.m - lo.m) as usize;
        let inside = |s: LatticeSite| s.m >= lo.m && s.m <= hi.m && s.n >= lo.n && s.n <= hi.n;
        let mut outside = vec![false; width * height];
        let mut queue = VecDeque::from([lo]);
        outside[idx(lo)] = true;
        while let Some(s) = queue.pop_front() {
            for t in s.neighbors() {
                if inside(t) && !outside[idx(t)] && !self.contains(t) {
                    outside[idx(t)] = true;
                    queue.push_back(t);
                }
            }
        }
        for n in lo.n..=hi.n {
            for m in lo.m..=hi.m {
                let s = LatticeSite::new(m, n);
                if !outside[idx(s)] && !self.contains(s) {
                    return Some(s);
                }
            }
        }
        None
    }

    /// Connected, and every lattice site enclosed by the configuration is occupied.
    pub fn is_simply_connected(&self) -> bool {
        self.is_connected() && self.find_hole().is_none()
    }

    /// Componentwise minimum and maximum of the axial coordinates.
    pub fn bounding_box(&self) -> Option<(LatticeSite, LatticeSite)> {
        let first = *self.sites.first()?;
        let (mut lo, mut hi) = (first, first);
        for s in &self.sites {
            lo = LatticeSite::new(lo.m.min(s.m), lo.n.min(s.n));
            hi = LatticeSite::new(hi.m.max(s.m), hi.n.max(s.n));
        }
        Some((lo, hi))
    }

    /// Number of unit triangles with all three corners occupied.
    pub fn triangle_count(&self) -> u64 {
        let up = [DIRECTIONS[0], DIRECTIONS[1]];
        let down = [DIRECTIONS[0], DIRECTIONS[5]];
        self.sites
            .iter()
            .map(|&s| {
                let has = |pair: [LatticeSite; 2]| pair.iter().all(|&d| self.contains(s + d));
                has(up) as u64 + has(down) as u64
            })
            .sum()
    }

    /// Triangle count of a simply connected configuration; Euler's formula
    /// then reads `N - bonds + triangles = 1`.
    pub fn euler_triangle_check(&self) -> Result<u64> {
        if self.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        if let Some(h) = self.find_hole() {
            return Err(Error::Hole(h));
        }
        let t = self.triangle_count();
        debug_assert_eq!(self.len() as i64 - self.bonds as i64 + t as i64, 1);
        Ok(t)
    }

    pub fn with_added(&self, extra: impl IntoIterator<Item = LatticeSite>) -> Result<Configuration> {
        Configuration::new(self.sites.iter().copied().chain(extra))
    }
}

fn count_bonds(sites: &[LatticeSite], index: &HashSet<LatticeSite>) -> u64 {
    // each bond counted once via the three "forward" directions
    sites
        .iter()
        .map(|&s| DIRECTIONS[..3].iter().filter(|&&d| index.contains(&(s + d))).count() as u64)
        .sum()
}

/// Energy of raw positions that may contain repeats (e.g. straight from a file).
pub fn energy_of_raw(sites: &[LatticeSite]) -> Energy {
    match Configuration::new(sites.iter().copied()) {
        Ok(c) => Energy::Finite(c.energy()),
        Err(_) => Energy::Infinite,
    }
}
