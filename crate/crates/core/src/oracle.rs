//! Exhaustive ground-state search for small `N`.
//!
//! Fixed lattice animals are grown with Redelmeier's untried-set scheme, so
//! each one is visited exactly once; maximizers are then deduplicated up to
//! isometry by canonical form. A branch is cut only when an upper bound on
//! its best completion falls strictly below the best count seen, which keeps
//! every maximizer.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use crate::configuration::Configuration;
use crate::constructors::spiral;
use crate::error::{Error, Result};
use crate::formula::max_bond_formula;
use crate::lattice::{canonical_form, LatticeSite};

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Largest `N` for which the search is expected to finish in minutes.
pub const GUARANTEED_MAX_N: u64 = 12;

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub n: u64,
    /// Best bond count found; the true maximum when `complete`.
    pub max_bonds: u64,
    /// Distinct canonical forms reaching `max_bonds`.
    pub maximizer_count: u64,
    /// Canonical maximizers in lexicographic order.
    pub maximizers: Vec<Configuration>,
    pub nodes_explored: u64,
    /// False when the node budget ran out.
    pub complete: bool,
}

/// Maximum bond count over all connected `n`-site configurations.
pub fn max_bonds(n: u64, budget: u64) -> Result<OracleResult> {
    if n == 0 {
        return Err(Error::OutOfRange("search needs N >= 1".into()));
    }
    if n > 64 {
        return Err(Error::OutOfRange(format!("N={n} is far beyond exhaustive reach")));
    }
    // a real configuration: any maximizer has at least this many bonds
    let floor = spiral(n)?.bond_count();
    let out = search(n as usize, Some(floor), budget);
    let max = out.best;
    let maximizers: Vec<Configuration> = out
        .found
        .into_iter()
        .map(|s| Configuration::new(s).expect("canonical forms have distinct sites"))
        .collect();
    Ok(OracleResult {
        n,
        max_bonds: max,
        maximizer_count: maximizers.len() as u64,
        maximizers,
        nodes_explored: out.nodes,
        complete: out.complete,
    })
}

/// Number of maximizers up to isometry; fails if the default budget runs out.
pub fn count_maximizers(n: u64) -> Result<u64> {
    let r = max_bonds(n, DEFAULT_BUDGET)?;
    if !r.complete {
        return Err(Error::Incomplete { nodes: r.nodes_explored });
    }
    Ok(r.maximizer_count)
}

/// Number of fixed animals (distinct up to translation only) with `n` sites.
pub fn count_fixed_animals(n: u64, budget: u64) -> Result<u64> {
    if n == 0 || n > 64 {
        return Err(Error::OutOfRange(format!("N={n}")));
    }
    let out = search(n as usize, None, budget);
    if !out.complete {
        return Err(Error::Incomplete { nodes: out.nodes });
    }
    Ok(out.leaves)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormulaRow {
    pub n: u64,
    pub oracle: u64,
    pub formula: u64,
    pub maximizers: u64,
}

/// Compares the exhaustive maximum against the closed form for `1..=n_max`.
pub fn verify_formula_range(n_max: u64) -> Result<Vec<FormulaRow>> {
    if n_max > GUARANTEED_MAX_N {
        return Err(Error::OutOfRange(format!("N_max={n_max} > {GUARANTEED_MAX_N}")));
    }
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let r = max_bonds(n, DEFAULT_BUDGET)?;
        if !r.complete {
            return Err(Error::Incomplete { nodes: r.nodes_explored });
        }
        let formula = max_bond_formula(n)?;
        if r.max_bonds != formula {
            return Err(Error::FormulaMismatch {
                n,
                found: r.max_bonds,
                formula,
                witness: r.maximizers.first().map(|c| c.sites().to_vec()).unwrap_or_default(),
            });
        }
        rows.push(FormulaRow { n, oracle: r.max_bonds, formula, maximizers: r.maximizer_count });
    }
    Ok(rows)
}

struct SearchOutput {
    best: u64,
    found: BTreeSet<Vec<LatticeSite>>,
    nodes: u64,
    leaves: u64,
    complete: bool,
}

/// Grid with a two-site margin around every site reachable from the origin in `n - 1` steps
/// with `n >= 0`, or `n == 0` and `m >= 0`.
#[derive(Clone, Copy)]
struct Grid {
    n: usize,
    width: usize,
    offsets: [isize; 6],
}

impl Grid {
    fn new(n: usize) -> Self {
        let width = 2 * n + 3;
        let w = width as isize;
        Grid { n, width, offsets: [1, w, w - 1, -1, -w, 1 - w] }
    }

    fn len(&self) -> usize {
        self.width * (self.n + 4)
    }

    fn origin(&self) -> usize {
        2 * self.width + self.n + 1
    }

    fn site(&self, i: usize) -> LatticeSite {
        LatticeSite::new((i % self.width) as i64 - self.n as i64 - 1, (i / self.width) as i64 - 2)
    }

    /// Sites after the origin in row-major order; the origin is the animal's
    /// smallest site, so this fixes one representative per translation class.
    fn allowed(&self, i: usize) -> bool {
        let s = self.site(i);
        let inner = s.m.abs() < self.n as i64 && s.n < self.n as i64;
        inner && (s.n > 0 || (s.n == 0 && s.m >= 0))
    }

    fn neighbor(&self, i: usize, d: usize) -> usize {
        (i as isize + self.offsets[d]) as usize
    }
}

#[derive(Clone)]
struct Task {
    cells: Vec<usize>,
    untried: Vec<usize>,
    seen: Vec<bool>,
}

struct Searcher<'a> {
    grid: Grid,
    target: usize,
    /// Keep only animals with at least this many bonds; `None` counts all.
    floor: Option<u64>,
    occupied: Vec<bool>,
    seen: Vec<bool>,
    stamp: Vec<u32>,
    epoch: u32,
    cells: Vec<usize>,
    bonds: u64,
    best: u64,
    found: BTreeSet<Vec<LatticeSite>>,
    nodes: u64,
    leaves: u64,
    split: Option<(usize, Vec<Task>)>,
    budget: &'a Budget,
}

struct Budget {
    limit: u64,
    used: AtomicU64,
    stop: AtomicBool,
}

impl Budget {
    const CHUNK: u64 = 1 << 12;

    fn charge(&self, local: u64) -> bool {
        if local % Self::CHUNK == 0 {
            let total = self.used.fetch_add(Self::CHUNK, Ordering::Relaxed) + Self::CHUNK;
            if total > self.limit {
                self.stop.store(true, Ordering::Relaxed);
            }
        }
        !self.stop.load(Ordering::Relaxed)
    }
}

impl<'a> Searcher<'a> {
    fn new(grid: Grid, target: usize, floor: Option<u64>, budget: &'a Budget) -> Self {
        let len = grid.len();
        Searcher {
            grid,
            target,
            floor,
            occupied: vec![false; len],
            seen: vec![false; len],
            stamp: vec![0; len],
            epoch: 0,
            cells: Vec::with_capacity(target),
            bonds: 0,
            best: floor.unwrap_or(0),
            found: BTreeSet::new(),
            nodes: 0,
            leaves: 0,
            split: None,
            budget,
        }
    }

    fn resume(&mut self, task: Task) {
        for &c in &task.cells {
            self.place(c);
        }
        self.seen = task.seen;
        let mut untried = task.untried;
        self.grow(&mut untried);
    }

    fn degree(&self, i: usize) -> u64 {
        (0..6).filter(|&d| self.occupied[self.grid.neighbor(i, d)]).count() as u64
    }

    fn place(&mut self, i: usize) {
        self.bonds += self.degree(i);
        self.occupied[i] = true;
        self.cells.push(i);
    }

    fn lift(&mut self) {
        let i = self.cells.pop().expect("non-empty");
        self.occupied[i] = false;
        self.bonds -= self.degree(i);
    }

    /// Bonds the remaining `r` atoms can add: each binds to at most its
    /// current occupied neighbors (take the `r` best empty sites), and `r`
    /// sites bond among themselves at most `3(r - 1)` times, since the
    /// largest of them has none of its three forward neighbors in the set.
    fn optimistic(&mut self) -> u64 {
        let r = (self.target - self.cells.len()) as u64;
        if r == 0 {
            return self.bonds;
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let mut hist = [0u64; 7];
        for k in 0..self.cells.len() {
            let c = self.cells[k];
            for d in 0..6 {
                let u = self.grid.neighbor(c, d);
                if !self.occupied[u] && self.stamp[u] != self.epoch {
                    self.stamp[u] = self.epoch;
                    hist[self.degree(u) as usize] += 1;
                }
            }
        }
        let mut left = r;
        let mut add = 0;
        for deg in (1..=6).rev() {
            let take = hist[deg].min(left);
            add += take * deg as u64;
            left -= take;
        }
        self.bonds + add + 3 * (r - 1)
    }

    fn leaf(&mut self) {
        self.leaves += 1;
        let Some(_) = self.floor else { return };
        if self.bonds < self.best {
            return;
        }
        if self.bonds > self.best {
            self.best = self.bonds;
            self.found.clear();
        }
        let sites: Vec<_> = self.cells.iter().map(|&c| self.grid.site(c)).collect();
        self.found.insert(canonical_form(&sites).expect("non-empty"));
    }

    fn grow(&mut self, untried: &mut Vec<usize>) {
        while let Some(v) = untried.pop() {
            self.nodes += 1;
            if !self.budget.charge(self.nodes) {
                return;
            }
            self.place(v);
            if self.cells.len() == self.target {
                self.leaf();
            } else if self.floor.is_none() || self.optimistic() >= self.best {
                let mut next = untried.clone();
                let mut added = [0usize; 6];
                let mut count = 0;
                for d in 0..6 {
                    let u = self.grid.neighbor(v, d);
                    if !self.seen[u] && self.grid.allowed(u) {
                        self.seen[u] = true;
                        next.push(u);
                        added[count] = u;
                        count += 1;
                    }
                }
                let split_here = matches!(&self.split, Some((depth, _)) if *depth == self.cells.len());
                if split_here {
                    let task = Task { cells: self.cells.clone(), untried: next.clone(), seen: self.seen.clone() };
                    self.split.as_mut().expect("checked").1.push(task);
                } else {
                    self.grow(&mut next);
                }
                for &u in &added[..count] {
                    self.seen[u] = false;
                }
            }
            self.lift();
        }
    }
}

fn search(n: usize, floor: Option<u64>, limit: u64) -> SearchOutput {
    let grid = Grid::new(n);
    let budget = Budget { limit, used: AtomicU64::new(0), stop: AtomicBool::new(false) };
    let mut root = Searcher::new(grid, n, floor, &budget);
    let depth = 4.min(n.saturating_sub(1));
    if depth >= 2 {
        root.split = Some((depth, Vec::new()));
    }
    root.seen[grid.origin()] = true;
    root.grow(&mut vec![grid.origin()]);
    let tasks = root.split.take().map(|(_, t)| t).unwrap_or_default();

    let parts: Vec<_> = tasks
        .into_par_iter()
        .map(|task| {
            let mut s = Searcher::new(grid, n, floor, &budget);
            s.resume(task);
            (s.best, s.found, s.nodes, s.leaves)
        })
        .collect();

    let mut best = root.best;
    for p in &parts {
        best = best.max(p.0);
    }
    let mut found = BTreeSet::new();
    let (mut nodes, mut leaves) = (root.nodes, root.leaves);
    let mut consider = |b: u64, f: BTreeSet<Vec<LatticeSite>>| {
        if b == best {
            found.extend(f);
        }
    };
    consider(root.best, root.found);
    for (b, f, nd, lv) in parts {
        nodes += nd;
        leaves += lv;
        consider(b, f);
    }
    SearchOutput { best, found, nodes, leaves, complete: !budget.stop.load(Ordering::Relaxed) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    use crate::lattice::normalize_translation;

    /// Every fixed animal of each size up to `n`, grown one site at a time
    /// and stored explicitly.
    fn naive_animals(n: usize) -> Vec<HashSet<Vec<LatticeSite>>> {
        let mut levels = vec![HashSet::from([vec![LatticeSite::ORIGIN]])];
        while levels.len() < n {
            let mut next = HashSet::new();
            for a in levels.last().unwrap() {
                for s in a {
                    for t in s.neighbors() {
                        if !a.contains(&t) {
                            let mut b = a.clone();
                            b.push(t);
                            normalize_translation(&mut b);
                            next.insert(b);
                        }
                    }
                }
            }
            levels.push(next);
        }
        levels
    }

    fn naive_max(animals: &HashSet<Vec<LatticeSite>>) -> (u64, usize) {
        let bonds = |a: &Vec<LatticeSite>| Configuration::new(a.iter().copied()).unwrap().bond_count();
        let max = animals.iter().map(bonds).max().unwrap();
        let free: HashSet<_> = animals.iter().filter(|a| bonds(a) == max).map(|a| canonical_form(a).unwrap()).collect();
        (max, free.len())
    }

    #[test]
    fn small_examples() {
        let r = max_bonds(3, DEFAULT_BUDGET).unwrap();
        assert_eq!((r.max_bonds, r.maximizer_count), (3, 1));
        assert!(r.complete);
        let r = max_bonds(4, DEFAULT_BUDGET).unwrap();
        assert_eq!((r.max_bonds, r.maximizer_count), (5, 1));
        let r = max_bonds(7, DEFAULT_BUDGET).unwrap();
        assert_eq!((r.max_bonds, r.maximizer_count), (12, 1));
        let hex = crate::constructors::hexagon(1).unwrap();
        assert_eq!(r.maximizers[0].sites(), hex.canonical().unwrap().as_slice());
        assert_eq!(count_maximizers(1).unwrap(), 1);
        // every 7-bond 5-atom animal is the trapezoid; the rhombus with a
        // one-bond tail has only 6
        assert_eq!(count_maximizers(5).unwrap(), 1);
        assert!(max_bonds(0, 10).is_err());
    }

    #[test]
    fn fixed_animal_counts_match_naive_growth() {
        let naive = naive_animals(7);
        for n in 1..=7 {
            assert_eq!(count_fixed_animals(n as u64, DEFAULT_BUDGET).unwrap(), naive[n - 1].len() as u64, "N={n}");
        }
        // known fixed polyhex counts
        assert_eq!(count_fixed_animals(8, DEFAULT_BUDGET).unwrap(), 16689);
    }

    #[test]
    fn maxima_and_counts_match_naive_growth() {
        let naive = naive_animals(8);
        for n in 1..=8 {
            let r = max_bonds(n as u64, DEFAULT_BUDGET).unwrap();
            let (max, count) = naive_max(&naive[n - 1]);
            assert_eq!((r.max_bonds, r.maximizer_count), (max, count as u64), "N={n}");
        }
    }

    #[test]
    fn formula_table_to_ten() {
        let rows = verify_formula_range(10).unwrap();
        assert_eq!(rows.len(), 10);
        assert_eq!(&rows[..3].iter().map(|r| (r.n, r.oracle)).collect::<Vec<_>>(), &[(1, 0), (2, 1), (3, 3)]);
        assert_eq!((rows[6].n, rows[6].oracle), (7, 12));
        assert_eq!((rows[9].n, rows[9].oracle), (10, 19));
        assert!(verify_formula_range(13).is_err());
    }

    #[test]
    fn maximizers_are_simple_ground_states() {
        for n in 3..=10 {
            let r = max_bonds(n, DEFAULT_BUDGET).unwrap();
            for c in &r.maximizers {
                assert_eq!(c.bond_count(), r.max_bonds);
                assert!(c.is_simply_connected());
                assert!(crate::polygon::boundary_polygon(c).is_ok());
            }
        }
    }

    #[test]
    fn monotone_in_n() {
        let m: Vec<u64> = (1..=10).map(|n| max_bonds(n, DEFAULT_BUDGET).unwrap().max_bonds).collect();
        assert!(m.windows(2).skip(1).all(|w| w[1] >= w[0] + 1));
    }

    #[test]
    fn deterministic_across_runs_and_pools() {
        let a = max_bonds(9, DEFAULT_BUDGET).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| max_bonds(9, DEFAULT_BUDGET).unwrap());
        assert_eq!(a.max_bonds, b.max_bonds);
        assert_eq!(a.maximizers, b.maximizers);
        assert_eq!(a.nodes_explored, b.nodes_explored);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let r = max_bonds(11, 10_000).unwrap();
        assert!(!r.complete);
        assert!(matches!(count_fixed_animals(10, 10_000), Err(Error::Incomplete { .. })));
    }
}
