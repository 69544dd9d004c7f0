//! Structural necessary conditions on ground-state boundaries.
//!
//! The angle conditions only bind for large `N`, so below a size threshold
//! findings are reported as informational rather than as violations.

use std::fmt;

use serde::Serialize;

use crate::configuration::Configuration;
use crate::error::{Error, Result};
use crate::hull::analyze_corners;
use crate::lattice::LatticeSite;
use crate::polygon::{boundary_polygon, Angle, BoundaryPolygon};

/// Smallest `N` at which findings count as violations.
pub const DEFAULT_THRESHOLD: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Rule {
    /// Reflex, flat..., reflex run along the boundary.
    #[serde(rename = "L2.2.i")]
    ReflexRun,
    /// A reflex angle away from an acute tip's neighbors.
    #[serde(rename = "L2.2.ii")]
    TipWithDistantReflex,
    /// More than one acute angle.
    #[serde(rename = "L2.2.iii")]
    SeveralTips,
    /// Acute tip not flanked by (flat or reflex, not both flat).
    #[serde(rename = "L2.2.iv")]
    TipNeighbors,
    /// Occupied sites on a hull side are not one interval.
    #[serde(rename = "L2.3.i")]
    BrokenSide,
    /// An empty hull region with zero or several corners.
    #[serde(rename = "L2.3.ii")]
    CornerAssignment,
    /// Empty hull regions larger than the shortest side.
    #[serde(rename = "L2.3.iv")]
    OversizedCorners,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::ReflexRun => "L2.2.i",
            Rule::TipWithDistantReflex => "L2.2.ii",
            Rule::SeveralTips => "L2.2.iii",
            Rule::TipNeighbors => "L2.2.iv",
            Rule::BrokenSide => "L2.3.i",
            Rule::CornerAssignment => "L2.3.ii",
            Rule::OversizedCorners => "L2.3.iv",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Violation,
    Informational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ViolationReport {
    pub rule: Rule,
    /// Boundary vertex indices, when the finding is about angles.
    pub witnesses: Vec<usize>,
    pub sites: Vec<LatticeSite>,
    pub message: String,
    pub severity: Severity,
}

impl ViolationReport {
    fn new(rule: Rule, witnesses: Vec<usize>, sites: Vec<LatticeSite>, message: String) -> Self {
        ViolationReport { rule, witnesses, sites, message, severity: Severity::Violation }
    }

    pub fn is_violation(&self) -> bool {
        self.severity == Severity::Violation
    }
}

/// Checks the four angle conditions, indices taken cyclically.
pub fn check_angle_grammar(polygon: &BoundaryPolygon) -> Vec<ViolationReport> {
    let a = polygon.angles();
    let v = polygon.vertices();
    let m = a.len();
    let at = |i: usize| a[i % m];
    let sites = |idx: &[usize]| idx.iter().map(|&i| v[i]).collect::<Vec<_>>();
    let mut out = Vec::new();

    // runs reflex, flat*, reflex; each reflex starts at most one run
    for i in (0..m).filter(|&i| a[i] == Angle::REFLEX) {
        let mut j = 1;
        while j < m && at(i + j) == Angle::FLAT {
            j += 1;
        }
        if j < m && at(i + j) == Angle::REFLEX && (i + j) % m != i {
            let idx: Vec<usize> = (0..=j).map(|t| (i + t) % m).collect();
            let msg = format!("reflex angles at {} and {} joined by {} flat angles", v[i], v[(i + j) % m], j - 1);
            out.push(ViolationReport::new(Rule::ReflexRun, idx.clone(), sites(&idx), msg));
        }
    }

    let tips: Vec<usize> = (0..m).filter(|&i| a[i] == Angle::ACUTE).collect();
    if tips.len() > 1 {
        let msg = format!("{} acute angles", tips.len());
        out.push(ViolationReport::new(Rule::SeveralTips, tips.clone(), sites(&tips), msg));
    }
    for &i in &tips {
        let (prev, next) = ((i + m - 1) % m, (i + 1) % m);
        for j in (0..m).filter(|&j| a[j] == Angle::REFLEX && j != prev && j != next) {
            let msg = format!("acute angle at {} with a reflex angle at {}", v[i], v[j]);
            out.push(ViolationReport::new(Rule::TipWithDistantReflex, vec![i, j], sites(&[i, j]), msg));
        }
        let ok = |x: Angle| x == Angle::FLAT || x == Angle::REFLEX;
        let (p, q) = (a[prev], a[next]);
        if !(ok(p) && ok(q)) || (p == Angle::FLAT && q == Angle::FLAT) {
            let idx = vec![prev, i, next];
            let msg = format!("acute angle at {} flanked by {p} and {q}", v[i]);
            out.push(ViolationReport::new(Rule::TipNeighbors, idx.clone(), sites(&idx), msg));
        }
    }
    out
}

/// Hull-side conditions; needs a simply connected configuration whose
/// boundary has no acute angle.
pub fn check_side_structure(config: &Configuration) -> Result<Vec<ViolationReport>> {
    if config.len() >= 3 {
        let p = boundary_polygon(config)?;
        if let Some(i) = p.angles().iter().position(|&a| a == Angle::ACUTE) {
            return Err(Error::Precondition(format!(
                "acute boundary angle at {}; delete that atom first",
                p.vertices()[i]
            )));
        }
    } else if !config.is_connected() {
        return Err(Error::Disconnected);
    }
    let (frame, cc) = analyze_corners(config)?;
    let mut out = Vec::new();
    for i in 0..6 {
        if !cc.side_contiguous[i] {
            let side = frame.side_sites(i);
            let gaps: Vec<_> = match cc.side_extremes[i] {
                Some((p, q)) => {
                    let (a, b) = (side.iter().position(|&s| s == p).unwrap(), side.iter().position(|&s| s == q).unwrap());
                    side[a..=b].iter().copied().filter(|&s| !config.contains(s)).collect()
                }
                None => Vec::new(),
            };
            let msg = format!("side {} has {} empty sites between occupied ones", i + 1, gaps.len());
            out.push(ViolationReport::new(Rule::BrokenSide, Vec::new(), gaps, msg));
        }
    }
    for c in &cc.cornerless {
        let msg = format!("empty region of {} sites at {} holds no corner", c.len(), c[0]);
        out.push(ViolationReport::new(Rule::CornerAssignment, Vec::new(), c.clone(), msg));
    }
    for (c, held) in &cc.multi_corner {
        let names: Vec<String> = held.iter().map(|i| format!("A{}", i + 1)).collect();
        let msg = format!("empty region of {} sites holds corners {}", c.len(), names.join(", "));
        out.push(ViolationReport::new(Rule::CornerAssignment, Vec::new(), c.clone(), msg));
    }
    let total = cc.total_size() as i64;
    let shortest = frame.side_lengths().into_iter().min().expect("six sides");
    if total > shortest {
        let msg = format!("{total} empty hull sites exceed the shortest side {shortest}");
        let mut all: Vec<_> = cc.components.iter().flatten().copied().collect();
        all.extend(cc.cornerless.iter().flatten());
        all.extend(cc.multi_corner.iter().flat_map(|(c, _)| c));
        all.sort_unstable();
        out.push(ViolationReport::new(Rule::OversizedCorners, Vec::new(), all, msg));
    }
    Ok(out)
}

/// Result of running every check on one configuration.
#[derive(Clone, Debug, Serialize)]
pub struct Validation {
    pub n: usize,
    pub bonds: u64,
    pub formula_bonds: u64,
    pub reports: Vec<ViolationReport>,
    /// Set when the side checks ran on the configuration minus its tip atom.
    pub tip_removed: Option<LatticeSite>,
}

impl Validation {
    pub fn violations(&self) -> impl Iterator<Item = &ViolationReport> {
        self.reports.iter().filter(|r| r.is_violation())
    }

    pub fn has_violations(&self) -> bool {
        self.violations().next().is_some()
    }
}

/// Runs the angle and side checks; with a single acute tip the side checks
/// see the configuration without that atom.
pub fn validate(config: &Configuration, threshold: usize) -> Result<Validation> {
    if config.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    let formula_bonds = crate::formula::max_bond_formula(config.len() as u64)?;
    let mut reports = Vec::new();
    let mut tip_removed = None;
    if config.len() >= 3 {
        let polygon = boundary_polygon(config)?;
        reports.extend(check_angle_grammar(&polygon));
        let tips: Vec<usize> = (0..polygon.len()).filter(|&i| polygon.angles()[i] == Angle::ACUTE).collect();
        let target = match tips.as_slice() {
            [] => Some(config.clone()),
            [i] if config.len() > 3 => {
                let tip = polygon.vertices()[*i];
                tip_removed = Some(tip);
                let trimmed = Configuration::new(config.sites().iter().copied().filter(|&s| s != tip))?;
                let acute_free = boundary_polygon(&trimmed)
                    .map(|p| !p.angles().contains(&Angle::ACUTE))
                    .unwrap_or(false);
                acute_free.then_some(trimmed)
            }
            _ => None,
        };
        if let Some(t) = target {
            reports.extend(check_side_structure(&t)?);
        }
    }
    let severity = if config.len() >= threshold { Severity::Violation } else { Severity::Informational };
    for r in &mut reports {
        r.severity = severity;
    }
    Ok(Validation { n: config.len(), bonds: config.bond_count(), formula_bonds, reports, tip_removed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{degenerate, hexagon, normalize, spiral};
    use crate::lattice::LatticeIsometry;
    use std::collections::BTreeSet;

    fn rules(reports: &[ViolationReport]) -> BTreeSet<Rule> {
        reports.iter().map(|r| r.rule).collect()
    }

    fn polygon_of(c: &Configuration) -> BoundaryPolygon {
        boundary_polygon(c).unwrap()
    }

    /// Trapezoid rows `n = -j`, `m in [j, 8]`, with a top row missing its
    /// middle four sites.
    fn pit() -> Configuration {
        let mut s: Vec<LatticeSite> = (0..4).flat_map(|j| (j..=8).map(move |m| LatticeSite::new(m, -j))).collect();
        s.extend([0, 1, 6, 7].map(|m| LatticeSite::new(m, 1)));
        Configuration::new(s).unwrap()
    }

    #[test]
    fn hexagon_passes() {
        for k in 1..8 {
            let h = hexagon(k).unwrap();
            assert!(check_angle_grammar(&polygon_of(&h)).is_empty());
            assert!(check_side_structure(&h).unwrap().is_empty());
            assert!(validate(&h, DEFAULT_THRESHOLD).unwrap().reports.is_empty());
        }
    }

    #[test]
    fn pit_triggers_reflex_run_only() {
        let p = pit();
        let reports = check_angle_grammar(&polygon_of(&p));
        assert_eq!(rules(&reports), BTreeSet::from([Rule::ReflexRun]));
        let r = &reports[0];
        let angles: Vec<u8> = r.witnesses.iter().map(|&i| polygon_of(&p).angles()[i].sixths()).collect();
        assert_eq!(angles, vec![4, 3, 3, 3, 4]);
        assert!(p.bond_count() < crate::formula::max_bond_formula(p.len() as u64).unwrap());
    }

    #[test]
    fn triangle_has_several_tips() {
        let t = Configuration::new([(0, 0), (1, 0), (0, 1)].map(LatticeSite::from)).unwrap();
        let r = check_angle_grammar(&polygon_of(&t));
        assert!(rules(&r).contains(&Rule::SeveralTips));
        let v = validate(&t, DEFAULT_THRESHOLD).unwrap();
        assert!(!v.reports.is_empty() && !v.has_violations());
    }

    #[test]
    fn adjacent_reflex_pair_is_a_run() {
        // one site missing from the middle of a side
        let mut s = hexagon(3).unwrap().sites().to_vec();
        s.retain(|&x| x != LatticeSite::new(1, -3));
        let c = Configuration::new(s).unwrap();
        let r = check_angle_grammar(&polygon_of(&c));
        assert!(r.iter().any(|x| x.rule == Rule::ReflexRun && x.witnesses.len() == 2), "{r:?}");
    }

    #[test]
    fn tip_rules() {
        // a lone atom past a corner: flanked by pi and 4pi/3, allowed
        let s = spiral(62).unwrap();
        assert!(check_angle_grammar(&polygon_of(&s)).is_empty());
        // on the unit hexagon both flanks are flat: a small-N exception
        let s = spiral(8).unwrap();
        assert_eq!(rules(&check_angle_grammar(&polygon_of(&s))), BTreeSet::from([Rule::TipNeighbors]));
        assert!(!validate(&s, DEFAULT_THRESHOLD).unwrap().has_violations());
        // rhombus: two acute tips, each flanked by obtuse angles
        let rh = Configuration::new([(0, 0), (1, 0), (0, 1), (1, 1)].map(LatticeSite::from)).unwrap();
        let r = rules(&check_angle_grammar(&polygon_of(&rh)));
        assert!(r.contains(&Rule::SeveralTips) && r.contains(&Rule::TipNeighbors));
        // a tip next to a notch elsewhere
        let mut sites = hexagon(3).unwrap().sites().to_vec();
        sites.retain(|&x| x != LatticeSite::new(-3, 1));
        let c = Configuration::new(sites).unwrap().with_added([LatticeSite::new(4, -3)]).unwrap();
        let r = rules(&check_angle_grammar(&polygon_of(&c)));
        assert!(r.contains(&Rule::TipWithDistantReflex), "{r:?}");
    }

    #[test]
    fn moved_side_atoms_break_the_side() {
        let mut s = hexagon(5).unwrap().sites().to_vec();
        s.retain(|&x| x != LatticeSite::new(2, -5) && x != LatticeSite::new(3, -5));
        let c = Configuration::new(s).unwrap().with_added([LatticeSite::new(-3, 6), LatticeSite::new(-2, 6)]).unwrap();
        assert!(c.bond_count() < crate::formula::max_bond_formula(c.len() as u64).unwrap());
        let r = check_side_structure(&c).unwrap();
        assert!(rules(&r).contains(&Rule::BrokenSide), "{r:?}");
        assert!(validate(&c, DEFAULT_THRESHOLD).unwrap().has_violations());
    }

    #[test]
    fn side_check_requires_no_tip() {
        let c = hexagon(3).unwrap().with_added([LatticeSite::new(4, -3)]).unwrap();
        assert!(matches!(check_side_structure(&c), Err(Error::Precondition(_))));
        let v = validate(&c, DEFAULT_THRESHOLD).unwrap();
        assert_eq!(v.tip_removed, Some(LatticeSite::new(4, -3)));
        assert!(!v.has_violations());
    }

    #[test]
    fn constructed_families_pass() {
        let mut configs: Vec<Configuration> = (1..400).map(|n| spiral(n).unwrap()).collect();
        configs.extend((0..10).map(|k| hexagon(k).unwrap()));
        configs.extend((2..30).map(|k| degenerate(k).unwrap().config));
        configs.extend([62u64, 100, 200].map(|n| normalize(&spiral(n).unwrap()).unwrap().config));
        for c in configs {
            let v = validate(&c, DEFAULT_THRESHOLD).unwrap();
            assert!(!v.has_violations(), "N={}: {:?}", c.len(), v.reports);
            if c.len() >= DEFAULT_THRESHOLD {
                assert!(v.reports.is_empty(), "N={}: {:?}", c.len(), v.reports);
            }
        }
        let n = normalize(&spiral(200).unwrap()).unwrap().config;
        assert!(check_side_structure(&n).unwrap().is_empty());
    }

    #[test]
    fn reports_are_isometry_invariant() {
        let mut s = hexagon(5).unwrap().sites().to_vec();
        s.retain(|&x| x != LatticeSite::new(2, -5) && x != LatticeSite::new(3, -5));
        let c = Configuration::new(s).unwrap().with_added([LatticeSite::new(-3, 6), LatticeSite::new(-2, 6)]).unwrap();
        let base = validate(&c, 0).unwrap();
        for g in LatticeIsometry::point_group() {
            let t = validate(&c.transformed(&g), 0).unwrap();
            let mut a: Vec<_> = base.reports.iter().map(|r| (r.rule, r.sites.len())).collect();
            let mut b: Vec<_> = t.reports.iter().map(|r| (r.rule, r.sites.len())).collect();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
        let p = pit();
        for g in LatticeIsometry::point_group() {
            assert_eq!(rules(&validate(&p.transformed(&g), 0).unwrap().reports), rules(&validate(&p, 0).unwrap().reports));
        }
    }

    #[test]
    fn threshold_sets_severity() {
        let p = pit();
        assert!(validate(&p, p.len()).unwrap().has_violations());
        assert!(!validate(&p, p.len() + 1).unwrap().has_violations());
    }
}
