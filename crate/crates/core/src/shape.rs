//! Deviation from the hexagonal Wulff shape.

use std::f64::consts::FRAC_PI_3;

use rayon::prelude::*;

use crate::configuration::Configuration;
use crate::error::{Error, Result};
use crate::hull::HexFrame;
use crate::lattice::{LatticeSite, SQRT_3};
use crate::polygon::BoundaryPolygon;

/// Number density of the unit triangular lattice, `2/sqrt(3)`.
pub const DENSITY: f64 = 2.0 / SQRT_3;

/// Area of one Voronoi cell of the unit lattice.
pub const CELL_AREA: f64 = SQRT_3 / 2.0;

/// Total configurations above this size are fitted by local search instead
/// of trying every center in the enclosing hexagon.
pub const EXHAUSTIVE_FIT_MAX_N: usize = 4000;

/// Default width factor `c` of the side-length window `s0 +- (c N^(1/4) + 3)`.
pub const DEFAULT_WINDOW_FACTOR: f64 = 4.0;

/// Positions `x_j / sqrt(N)`, each with mass `1/N`.
#[derive(Clone, Debug)]
pub struct EmpiricalMeasure {
    pub n: usize,
    pub points: Vec<(f64, f64)>,
}

impl EmpiricalMeasure {
    pub fn new(config: &Configuration) -> Result<Self> {
        if config.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        let scale = (config.len() as f64).sqrt();
        let points = config
            .sites()
            .iter()
            .map(|s| {
                let (x, y) = s.to_cartesian();
                (x / scale, y / scale)
            })
            .collect();
        Ok(EmpiricalMeasure { n: config.len(), points })
    }

    pub fn total_mass(&self) -> f64 {
        self.points.len() as f64 / self.n as f64
    }

    pub fn barycenter(&self) -> (f64, f64) {
        let (sx, sy) = self.points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
        (sx / self.n as f64, sy / self.n as f64)
    }
}

/// Surface tension of the lattice: for `nu = (-sin phi, cos phi)` with `phi`
/// reduced into `[0, pi/3)`, `2 (nu_2 - nu_1 / sqrt(3))`.
pub fn gamma(nu: (f64, f64)) -> Result<f64> {
    let len = nu.0.hypot(nu.1);
    if !(len > 0.0) || !len.is_finite() {
        return Err(Error::Degenerate("normal must be a non-zero vector".into()));
    }
    let phi = (-nu.0 / len).atan2(nu.1 / len).rem_euclid(FRAC_PI_3);
    let (n1, n2) = (-phi.sin(), phi.cos());
    Ok(2.0 * (n2 - n1 / SQRT_3))
}

/// `nu(phi) = (-sin phi, cos phi)`.
pub fn normal_at(phi: f64) -> (f64, f64) {
    (-phi.sin(), phi.cos())
}

/// Intersection of the half-planes `x . nu(j pi/3) <= gamma(nu(j pi/3))`.
#[derive(Clone, Debug)]
pub struct WulffSet {
    pub normals: [(f64, f64); 6],
    pub bounds: [f64; 6],
    pub corners: Vec<(f64, f64)>,
}

impl WulffSet {
    pub fn apothem(&self) -> f64 {
        self.bounds.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn circumradius(&self) -> f64 {
        self.corners.iter().map(|c| c.0.hypot(c.1)).fold(0.0, f64::max)
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.corners)
    }

    pub fn contains(&self, p: (f64, f64)) -> bool {
        self.normals.iter().zip(&self.bounds).all(|(n, &b)| p.0 * n.0 + p.1 * n.1 <= b + 1e-12)
    }
}

pub fn wulff_set() -> WulffSet {
    let normals: [(f64, f64); 6] = std::array::from_fn(|j| normal_at(j as f64 * FRAC_PI_3));
    let bounds = normals.map(|n| gamma(n).expect("unit normal"));
    // consecutive boundary lines meet at the corners
    let corners = (0..6)
        .map(|j| {
            let (a, b) = (normals[j], normals[(j + 1) % 6]);
            let det = a.0 * b.1 - a.1 * b.0;
            let (ca, cb) = (bounds[j], bounds[(j + 1) % 6]);
            ((ca * b.1 - cb * a.1) / det, (a.0 * cb - b.0 * ca) / det)
        })
        .collect();
    WulffSet { normals, bounds, corners }
}

/// `sum gamma(outward normal) * |edge|` over the polygon's edges.
pub fn surface_energy(polygon: &BoundaryPolygon) -> Result<f64> {
    let mut total = 0.0;
    for e in polygon.edges() {
        let (x, y) = e.to_cartesian();
        if ((x * x + y * y) - 1.0).abs() > 1e-9 {
            return Err(Error::Degenerate(format!("edge {e} is not a unit bond")));
        }
        // counter-clockwise, interior on the left: outward is the right normal
        total += gamma((y, -x))?;
    }
    Ok(total)
}

/// Best lattice-aligned regular hexagon for a configuration.
///
/// Candidates are `{x in L : d_hex(x, c) <= lambda}` for centers `c` on the
/// half-lattice grid; `center` holds `2c` in axial coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HexagonFit {
    pub center: (i64, i64),
    pub side: i64,
    /// `#(S symmetric-difference hexagon)`.
    pub deviation_count: u64,
    /// Lattice points of the fitted hexagon.
    pub hexagon_size: u64,
    pub n: u64,
    /// Whether every center in the enclosing hexagon was tried.
    pub exhaustive: bool,
}

impl HexagonFit {
    pub fn center_cartesian(&self) -> (f64, f64) {
        let (p, q) = (self.center.0 as f64 / 2.0, self.center.1 as f64 / 2.0);
        (p + q / 2.0, q * SQRT_3 / 2.0)
    }

    pub fn center_rescaled(&self) -> (f64, f64) {
        let (x, y) = self.center_cartesian();
        let s = (self.n as f64).sqrt();
        (x / s, y / s)
    }

    /// `d / N`.
    pub fn normalized_deviation(&self) -> f64 {
        self.deviation_count as f64 / self.n as f64
    }

    pub fn contains(&self, s: LatticeSite) -> bool {
        doubled_distance(s, self.center) <= 2 * self.side
    }

    pub fn lattice_points(&self) -> Vec<LatticeSite> {
        let (p, q) = self.center;
        let r = self.side + 1;
        let mut out = Vec::new();
        for n in q.div_euclid(2) - r..=q.div_euclid(2) + r {
            for m in p.div_euclid(2) - 2 * r..=p.div_euclid(2) + 2 * r {
                let s = LatticeSite::new(m, n);
                if self.contains(s) {
                    out.push(s);
                }
            }
        }
        out
    }
}

/// Twice the hex distance from `s` to the point with doubled axial coordinates `c`.
fn doubled_distance(s: LatticeSite, c: (i64, i64)) -> i64 {
    let (dm, dn) = (2 * s.m - c.0, 2 * s.n - c.1);
    dm.abs().max(dn.abs()).max((dm + dn).abs())
}

/// Prefix counts of lattice points within doubled distance `t`, for each of
/// the four center parities.
struct LatticeCounts {
    by_parity: [Vec<u64>; 4],
}

impl LatticeCounts {
    fn new(max_side: i64) -> Self {
        let limit = 2 * max_side + 2;
        let by_parity = std::array::from_fn(|k| {
            let c = ((k & 1) as i64, (k >> 1) as i64);
            let mut hist = vec![0u64; limit as usize + 1];
            let r = max_side + 2;
            for n in -r..=r {
                for m in -2 * r..=2 * r {
                    let d = doubled_distance(LatticeSite::new(m, n), c);
                    if d <= limit {
                        hist[d as usize] += 1;
                    }
                }
            }
            prefix(hist)
        });
        LatticeCounts { by_parity }
    }

    fn within(&self, center: (i64, i64), side: i64) -> u64 {
        let k = (center.0.rem_euclid(2) + 2 * center.1.rem_euclid(2)) as usize;
        self.by_parity[k][2 * side as usize]
    }
}

fn prefix(mut hist: Vec<u64>) -> Vec<u64> {
    for i in 1..hist.len() {
        hist[i] += hist[i - 1];
    }
    hist
}

/// Side-length window for an `n`-atom configuration.
pub fn side_window(n: usize, c: f64) -> (i64, i64) {
    let s0 = (n as f64 / 3.0).sqrt().round() as i64;
    let w = (c * (n as f64).powf(0.25)).ceil() as i64 + 3;
    ((s0 - w).max(0), s0 + w)
}

/// How fit centers are searched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CenterSearch {
    /// Exhaustive up to [`EXHAUSTIVE_FIT_MAX_N`] atoms, local above.
    Auto,
    Exhaustive,
    Local,
}

pub fn fit_hexagon(config: &Configuration) -> Result<HexagonFit> {
    fit_hexagon_with(config, DEFAULT_WINDOW_FACTOR, CenterSearch::Auto)
}

/// Minimizes the symmetric difference over sides in [`side_window`] and
/// half-lattice centers; ties go to the smaller side, then the smaller center.
pub fn fit_hexagon_with(config: &Configuration, window: f64, search: CenterSearch) -> Result<HexagonFit> {
    if config.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    let n = config.len();
    let (lo, hi) = side_window(n, window);
    let counts = LatticeCounts::new(hi);
    let eval = |c: (i64, i64)| evaluate(config, &counts, c, lo, hi);

    let exhaustive = match search {
        CenterSearch::Auto => n <= EXHAUSTIVE_FIT_MAX_N,
        CenterSearch::Exhaustive => true,
        CenterSearch::Local => false,
    };
    if exhaustive {
        let frame = HexFrame::enclosing(config)?;
        let centers: Vec<(i64, i64)> = doubled_frame_points(&frame);
        let best = centers.par_iter().map(|&c| eval(c)).min().expect("non-empty frame");
        return Ok(best.into_fit(n, true));
    }

    // local search: a window of centers around the current best, recentred
    // until the best lies strictly inside it
    const HALF: i64 = 6;
    let (mut cm, mut cn) = centroid_doubled(config);
    let mut best = None::<Candidate>;
    for _ in 0..64 {
        let centers: Vec<(i64, i64)> =
            (-HALF..=HALF).flat_map(|a| (-HALF..=HALF).map(move |b| (cm + a, cn + b))).collect();
        let local = centers.par_iter().map(|&c| eval(c)).min().expect("non-empty window");
        let improved = best.is_none_or(|b| local < b);
        if improved {
            best = Some(local);
        }
        let (dp, dq) = (local.center.0 - cm, local.center.1 - cn);
        if !improved || (dp.abs() < HALF && dq.abs() < HALF) {
            break;
        }
        cm = local.center.0;
        cn = local.center.1;
    }
    Ok(best.expect("at least one window").into_fit(n, false))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Candidate {
    deviation: u64,
    side: i64,
    center: (i64, i64),
    size: u64,
}

impl Candidate {
    fn into_fit(self, n: usize, exhaustive: bool) -> HexagonFit {
        HexagonFit {
            center: self.center,
            side: self.side,
            deviation_count: self.deviation,
            hexagon_size: self.size,
            n: n as u64,
            exhaustive,
        }
    }
}

fn evaluate(config: &Configuration, counts: &LatticeCounts, c: (i64, i64), lo: i64, hi: i64) -> Candidate {
    let mut hist = vec![0u64; 2 * hi as usize + 1];
    for &s in config.sites() {
        let d = doubled_distance(s, c);
        if d <= 2 * hi {
            hist[d as usize] += 1;
        }
    }
    let inside = prefix(hist);
    let n = config.len() as u64;
    (lo..=hi)
        .map(|side| {
            let size = counts.within(c, side);
            let hit = inside[2 * side as usize];
            Candidate { deviation: n + size - 2 * hit, side, center: c, size }
        })
        .min()
        .expect("non-empty side window")
}

fn doubled_frame_points(frame: &HexFrame) -> Vec<(i64, i64)> {
    let (m0, m1) = frame.m_range;
    let (n0, n1) = frame.n_range;
    let (s0, s1) = frame.diagonal_range;
    let mut out = Vec::new();
    for q in 2 * n0..=2 * n1 {
        for p in 2 * m0..=2 * m1 {
            if (2 * s0..=2 * s1).contains(&(p + q)) {
                out.push((p, q));
            }
        }
    }
    out
}

fn centroid_doubled(config: &Configuration) -> (i64, i64) {
    let n = config.len() as f64;
    let (sm, sn) = config.sites().iter().fold((0.0, 0.0), |(a, b), s| (a + s.m as f64, b + s.n as f64));
    ((2.0 * sm / n).round() as i64, (2.0 * sn / n).round() as i64)
}

/// `L^1` distance between the Voronoi-smeared empirical measure and `rho_0`
/// times the indicator of the fitted hexagon, both rescaled by `1/sqrt(N)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlatNormProxy {
    pub value: f64,
    /// `d / N`, the part carried by whole mismatched cells.
    pub cell_term: f64,
    /// `value - d/N`, from cells cut by the hexagon's boundary.
    pub boundary_term: f64,
    /// `|boundary_term| * sqrt(N)`.
    pub boundary_constant: f64,
}

/// The real hexagon used is regular, lattice aligned, centred on the fit and
/// scaled so that its area equals that of the fitted lattice hexagon's cells;
/// both measures then have mass `hexagon_size / N` and `1`.
pub fn flat_norm_proxy(config: &Configuration, fit: &HexagonFit) -> Result<FlatNormProxy> {
    if config.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    if fit.n != config.len() as u64 {
        return Err(Error::Precondition(format!("fit is for N={}, configuration has {}", fit.n, config.len())));
    }
    let n = config.len() as f64;
    let center = fit.center_cartesian();
    let radius = (fit.hexagon_size as f64 / 3.0).sqrt();
    let hexagon = RegularHexagon::new(center, radius, 0.0);
    let cell_r = 1.0 / SQRT_3;
    let inner = hexagon.apothem() - cell_r;
    let outer = radius + cell_r;

    let overlap: f64 = config
        .sites()
        .par_iter()
        .map(|s| {
            let (x, y) = s.to_cartesian();
            let d = (x - center.0).hypot(y - center.1);
            if d <= inner {
                CELL_AREA
            } else if d >= outer {
                0.0
            } else {
                let cell = RegularHexagon::new((x, y), cell_r, std::f64::consts::FRAC_PI_6).vertices();
                polygon_area(&hexagon.clip(&cell))
            }
        })
        .sum();
    let union = n * CELL_AREA;
    let hex_area = fit.hexagon_size as f64 * CELL_AREA;
    let value = DENSITY * (union + hex_area - 2.0 * overlap) / n;
    let cell_term = fit.normalized_deviation();
    let boundary_term = value - cell_term;
    Ok(FlatNormProxy { value, cell_term, boundary_term, boundary_constant: boundary_term.abs() * n.sqrt() })
}

/// `L^1` distance between the Voronoi-smeared measures of two equal-size
/// configurations: matched cells cancel, each unmatched one carries `1/N`.
pub fn voronoi_l1(a: &Configuration, b: &Configuration) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    if a.len() != b.len() {
        return Err(Error::Precondition(format!("sizes differ: {} vs {}", a.len(), b.len())));
    }
    let unmatched = a.sites().iter().filter(|&&s| !b.contains(s)).count()
        + b.sites().iter().filter(|&&s| !a.contains(s)).count();
    Ok(unmatched as f64 / a.len() as f64)
}

#[derive(Clone, Copy, Debug)]
struct RegularHexagon {
    center: (f64, f64),
    radius: f64,
    phase: f64,
}

impl RegularHexagon {
    fn new(center: (f64, f64), radius: f64, phase: f64) -> Self {
        RegularHexagon { center, radius, phase }
    }

    fn apothem(&self) -> f64 {
        self.radius * SQRT_3 / 2.0
    }

    fn vertices(&self) -> Vec<(f64, f64)> {
        (0..6)
            .map(|j| {
                let a = self.phase + j as f64 * FRAC_PI_3;
                (self.center.0 + self.radius * a.cos(), self.center.1 + self.radius * a.sin())
            })
            .collect()
    }

    /// Sutherland-Hodgman clip of a convex polygon against this hexagon.
    fn clip(&self, poly: &[(f64, f64)]) -> Vec<(f64, f64)> {
        let mut out = poly.to_vec();
        let h = self.apothem();
        for j in 0..6 {
            let a = self.phase + FRAC_PI_3 / 2.0 + j as f64 * FRAC_PI_3;
            let (nx, ny) = (a.cos(), a.sin());
            let side = |p: (f64, f64)| (p.0 - self.center.0) * nx + (p.1 - self.center.1) * ny - h;
            let input = std::mem::take(&mut out);
            for i in 0..input.len() {
                let (p, q) = (input[i], input[(i + 1) % input.len()]);
                let (fp, fq) = (side(p), side(q));
                if fp <= 0.0 {
                    out.push(p);
                }
                if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
                    let t = fp / (fp - fq);
                    out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
                }
            }
            if out.is_empty() {
                break;
            }
        }
        out
    }
}

fn polygon_area(v: &[(f64, f64)]) -> f64 {
    if v.len() < 3 {
        return 0.0;
    }
    let twice: f64 = (0..v.len())
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum();
    twice.abs() / 2.0
}

/// Least-squares line through `(log N, log deviation)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingFit {
    pub exponent: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

pub fn fit_scaling_exponent(records: &[(f64, f64)]) -> Result<ScalingFit> {
    if records.len() < 3 {
        return Err(Error::Degenerate(format!("{} points; need at least 3", records.len())));
    }
    if let Some(&(n, d)) = records.iter().find(|&&(n, d)| !(n > 0.0 && d > 0.0)) {
        return Err(Error::Degenerate(format!("non-positive record ({n}, {d})")));
    }
    let mut xs: Vec<f64> = records.iter().map(|r| r.0).collect();
    xs.sort_by(f64::total_cmp);
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Degenerate("repeated N".into()));
    }
    let pts: Vec<(f64, f64)> = records.iter().map(|&(n, d)| (n.ln(), d.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let sse: f64 = pts.iter().map(|p| (p.1 - intercept - exponent * p.0).powi(2)).sum();
    Ok(ScalingFit { exponent, intercept, residual: (sse / k).sqrt() })
}
