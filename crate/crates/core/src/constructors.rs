//! Explicit ground-state families: filled hexagons, the spiral, the
//! bond-preserving degenerate rearrangement, and normalization.

use std::collections::HashSet;

use crate::configuration::Configuration;
use crate::error::{Error, Result};
use crate::formula::{hexagonal_number, isqrt, max_bond_formula};
use crate::hull::HexFrame;
use crate::lattice::{LatticeIsometry, LatticeSite, DIRECTIONS};

/// Corners `B_1..B_6` of the lattice hexagon of radius `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HexCorners {
    pub k: i64,
    pub b: [LatticeSite; 6],
}

impl HexCorners {
    pub fn new(k: i64) -> Self {
        let b1 = LatticeSite::new(k, -k);
        let b2 = LatticeSite::new(k, 0);
        let b3 = LatticeSite::new(0, k);
        HexCorners { k, b: [b1, b2, b3, -b1, -b2, -b3] }
    }
}

/// One step of a rearrangement: atoms lifted off, atoms put down, and the
/// resulting change in bond count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub removed: Vec<LatticeSite>,
    pub added: Vec<LatticeSite>,
    pub bond_delta: i64,
}

impl Move {
    pub fn atoms_moved(&self) -> usize {
        self.removed.len()
    }
}

/// A constructed configuration together with the moves that produced it.
#[derive(Clone, Debug)]
pub struct Rearrangement {
    pub config: Configuration,
    pub moves: Vec<Move>,
}

impl Rearrangement {
    pub fn atoms_moved(&self) -> usize {
        self.moves.iter().map(Move::atoms_moved).sum()
    }
}

/// Mutable site set with a running bond count.
struct Workspace {
    sites: HashSet<LatticeSite>,
    bonds: i64,
}

impl Workspace {
    fn new(config: &Configuration) -> Self {
        Workspace { sites: config.sites().iter().copied().collect(), bonds: config.bond_count() as i64 }
    }

    fn degree(&self, s: LatticeSite) -> i64 {
        s.neighbors().iter().filter(|t| self.sites.contains(t)).count() as i64
    }

    fn remove(&mut self, s: LatticeSite) -> Result<i64> {
        if !self.sites.remove(&s) {
            return Err(Error::Construction(format!("no atom at {s}")));
        }
        let d = self.degree(s);
        self.bonds -= d;
        Ok(d)
    }

    fn add(&mut self, s: LatticeSite) -> Result<i64> {
        if !self.sites.insert(s) {
            return Err(Error::Construction(format!("site {s} already occupied")));
        }
        let d = self.degree(s);
        self.bonds += d;
        Ok(d)
    }

    /// Moves a whole group at once; bonds internal to the group are kept.
    fn shift_group(&mut self, from: &[LatticeSite], to: &[LatticeSite]) -> Result<Move> {
        let before = self.bonds;
        for &s in from {
            self.remove(s)?;
        }
        for &s in to {
            self.add(s)?;
        }
        Ok(Move { removed: from.to_vec(), added: to.to_vec(), bond_delta: self.bonds - before })
    }

    fn into_config(self) -> Configuration {
        let c = Configuration::from_set(self.sites);
        debug_assert_eq!(c.bond_count() as i64, self.bonds);
        c
    }
}

/// `L ∩ conv(B_1..B_6)` for radius `k`.
pub fn hexagon(k: i64) -> Result<Configuration> {
    if k < 0 {
        return Err(Error::OutOfRange(format!("hexagon radius {k} < 0")));
    }
    Ok(Configuration::from_set(HexFrame::regular(k).lattice_points().into_iter().collect()))
}

/// The `6r` sites at hex distance `r`, counter-clockwise from `B_1^(r) + e2`
/// and ending at `B_1^(r)`.
pub fn ring(r: i64) -> Vec<LatticeSite> {
    if r == 0 {
        return vec![LatticeSite::ORIGIN];
    }
    let mut cur = HexCorners::new(r).b[0];
    let mut out = Vec::with_capacity(6 * r as usize);
    for side in 0..6 {
        for _ in 0..r {
            cur = cur + DIRECTIONS[(side + 1) % 6];
            out.push(cur);
        }
    }
    out
}

/// Largest `k` with `3k(k+1) + 1 <= n`.
pub fn hexagon_radius_below(n: u64) -> i64 {
    // 3k^2 + 3k + 1 <= n  <=>  k <= (sqrt(12n - 3) - 3) / 6
    let mut k = ((isqrt(12 * n as u128 - 3) as i64) - 3) / 6;
    while hexagonal_number(k as u64 + 1) <= n {
        k += 1;
    }
    while k > 0 && hexagonal_number(k as u64) > n {
        k -= 1;
    }
    k
}

/// Hexagon of radius `k` plus a connected arc of the next ring, filled
/// counter-clockwise from `B_1^(k) + e1`.
pub fn spiral(n: u64) -> Result<Configuration> {
    if n == 0 {
        return Err(Error::OutOfRange("spiral needs N >= 1".into()));
    }
    let k = hexagon_radius_below(n);
    let extra = (n - hexagonal_number(k as u64)) as usize;
    let mut sites: HashSet<_> = HexFrame::regular(k).lattice_points().into_iter().collect();
    sites.extend(ring(k + 1).into_iter().take(extra));
    Ok(Configuration::from_set(sites))
}

/// Parameters of the degenerate construction for radius `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegenerateParams {
    pub k: i64,
    pub n: u64,
    /// Width of the moved strip, `floor(sqrt(k/2))`.
    pub m: i64,
}

impl DegenerateParams {
    pub fn new(k: i64) -> Result<Self> {
        if k < 2 {
            return Err(Error::OutOfRange(format!("degenerate construction needs k >= 2, got {k}")));
        }
        let m = isqrt(k as u128 / 2) as i64;
        Ok(DegenerateParams { k, n: hexagonal_number(k as u64) + 1, m })
    }
}

/// A second ground state with `3k(k+1) + 2` atoms whose hexagon sides differ
/// by `m ~ sqrt(k/2)`.
///
/// Starting from `spiral(N)`, the `m x m` block at corner `B_2` is peeled off
/// atom by atom onto the column `B_1 + e1 + i e2`, then the remaining
/// width-`m` strip along `[B_2, B_3]` is lifted as one piece and set down,
/// rotated, against `[B_6, B_1]`. Every move is checked to keep the bond count.
pub fn degenerate(k: i64) -> Result<Rearrangement> {
    let p = DegenerateParams::new(k)?;
    let start = spiral(p.n)?;
    let mut ws = Workspace::new(&start);
    let mut moves = Vec::new();
    let (k, m) = (p.k, p.m);
    let strip_site = |s: i64, t: i64| LatticeSite::new(k - t, t - s);

    // The column would touch the vacated block corner only when m^2 + 1 >= k,
    // i.e. k = 2; there the block stays and travels with the strip.
    let column_clear = m * m + 1 < k;
    if column_clear {
        let mut i = 1;
        for s in 0..m {
            for t in 0..m {
                let from = strip_site(s, t);
                let to = LatticeSite::new(k + 1, -k + i);
                let mv = ws.shift_group(&[from], &[to])?;
                if mv.bond_delta != 0 {
                    return Err(Error::Construction(format!("block move {from} -> {to} changed bonds by {}", mv.bond_delta)));
                }
                moves.push(mv);
                i += 1;
            }
        }
    }

    let mut strip: Vec<LatticeSite> = (0..m)
        .flat_map(|s| (0..=k + s).map(move |t| (s, t)))
        .map(|(s, t)| strip_site(s, t))
        .filter(|x| ws.sites.contains(x))
        .collect();
    strip.sort_unstable();
    // below [B_6, B_1]: row j holds m in [j, k], one longer when the block
    // stayed in the strip
    let shift = if column_clear { 0 } else { 1 };
    let mut target: Vec<LatticeSite> = (1..=m)
        .flat_map(|j| (j..=k + shift).map(move |a| LatticeSite::new(a, -k - j)))
        .collect();
    target.sort_unstable();
    let placed = congruent_image(&strip, &target).ok_or_else(|| {
        Error::Construction(format!("strip of {} atoms does not fit under [B6, B1]", strip.len()))
    })?;
    let mv = ws.shift_group(&strip, &placed)?;
    if mv.bond_delta != 0 {
        return Err(Error::Construction(format!("strip move changed bonds by {}", mv.bond_delta)));
    }
    moves.push(mv);

    let config = ws.into_config();
    debug_assert_eq!(config.len() as u64, p.n);
    Ok(Rearrangement { config, moves })
}

/// Image of `from` under some lattice isometry that equals `to` as a set,
/// listed in the order of `from`.
fn congruent_image(from: &[LatticeSite], to: &[LatticeSite]) -> Option<Vec<LatticeSite>> {
    if from.len() != to.len() || from.is_empty() {
        return None;
    }
    for g in LatticeIsometry::point_group() {
        let mut img: Vec<_> = from.iter().map(|&s| g.apply(s)).collect();
        img.sort_unstable();
        let shift = to[0] - img[0];
        if img.iter().zip(to).all(|(&a, &b)| a + shift == b) {
            let full = LatticeIsometry::translation(shift).compose(&g);
            return Some(from.iter().map(|&s| full.apply(s)).collect());
        }
    }
    None
}

/// Rearranges a ground state so its enclosing hexagon is completely filled
/// except for one partial row at corner `A_1`: the boundary then runs
/// `A_1 + e2 -> A_2 -> ... -> A_6 -> P_6' -> P_6' + e2 -> A_1 + e2`.
///
/// Atoms are moved one at a time, lowest current degree first, each to the
/// target site with the most occupied neighbors.
pub fn normalize(config: &Configuration) -> Result<Rearrangement> {
    let n = config.len() as u64;
    if n == 0 {
        return Err(Error::EmptyConfiguration);
    }
    let expected = max_bond_formula(n)?;
    if config.bond_count() != expected {
        return Err(Error::NotGroundState { bonds: config.bond_count(), expected });
    }
    for r in 0..6 {
        let g = LatticeIsometry::rotation(r);
        let turned = config.transformed(&g);
        let Some(target) = normalized_target(&turned)? else { continue };
        let Ok(mut result) = move_to(&turned, &target) else { continue };
        if result.config.bond_count() != expected {
            continue;
        }
        let back = g.inverse();
        result.config = result.config.transformed(&back);
        for mv in &mut result.moves {
            mv.removed.iter_mut().for_each(|s| *s = back.apply(*s));
            mv.added.iter_mut().for_each(|s| *s = back.apply(*s));
        }
        return Ok(result);
    }
    Err(Error::Construction("no orientation admits the normalized form".into()))
}

/// The hull minus `D` sites of side `a_6` ending at `A_1`, where `D` is the
/// number of empty hull sites; `None` if that side is too short.
fn normalized_target(config: &Configuration) -> Result<Option<HashSet<LatticeSite>>> {
    let frame = HexFrame::enclosing(config)?;
    let hull: HashSet<_> = frame.lattice_points().into_iter().collect();
    let deficit = (hull.len() - config.len()) as i64;
    if deficit == 0 {
        return Ok(Some(hull));
    }
    let sides = frame.side_lengths();
    if sides[5] < deficit || sides[0] < 1 {
        return Ok(None);
    }
    let a1 = frame.corners()[0];
    let mut target = hull;
    for j in 0..deficit {
        target.remove(&(a1 - j * DIRECTIONS[0]));
    }
    Ok(Some(target))
}

fn move_to(config: &Configuration, target: &HashSet<LatticeSite>) -> Result<Rearrangement> {
    let mut ws = Workspace::new(config);
    let mut lift: Vec<LatticeSite> = config.sites().iter().copied().filter(|s| !target.contains(s)).collect();
    let mut drop: Vec<LatticeSite> = {
        let mut v: Vec<_> = target.iter().copied().filter(|&s| !config.contains(s)).collect();
        v.sort_unstable();
        v
    };
    if lift.len() != drop.len() {
        return Err(Error::Construction("target has a different atom count".into()));
    }
    let mut moves = Vec::with_capacity(lift.len());
    while !lift.is_empty() {
        let i = (0..lift.len()).min_by_key(|&i| (ws.degree(lift[i]), lift[i])).expect("non-empty");
        let from = lift.swap_remove(i);
        let lost = ws.remove(from)?;
        let j = (0..drop.len()).max_by_key(|&j| (ws.degree(drop[j]), std::cmp::Reverse(drop[j]))).expect("same length");
        let to = drop.swap_remove(j);
        let gained = ws.add(to)?;
        moves.push(Move { removed: vec![from], added: vec![to], bond_delta: gained - lost });
    }
    Ok(Rearrangement { config: ws.into_config(), moves })
}
