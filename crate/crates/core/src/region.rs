//! Rate pairs, rate-region frontiers and region comparison.
//!
//! A region is stored as the Pareto frontier of its time-sharing closure:
//! the upper concave envelope of the generating points, downward closed
//! toward the origin. Two-user regions only.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Default tolerance (in bits) for region comparisons.
pub const DEFAULT_TOL: f64 = 1e-6;

/// A nonnegative, finite pair of rates in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        if !(r1.is_finite() && r2.is_finite() && r1 >= 0.0 && r2 >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "rate pair must be finite and nonnegative, got ({r1}, {r2})"
            )));
        }
        Ok(Self { r1, r2 })
    }

    /// Clamp small negative round-off to zero; reject NaN/inf.
    pub fn clamped(r1: f64, r2: f64) -> Result<Self> {
        Self::new(r1.max(0.0), r2.max(0.0))
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &RatePair) -> bool {
        self.r1 >= other.r1 && self.r2 >= other.r2
    }
}

/// Pareto frontier of a rate region, ordered by strictly increasing `r2`
/// (hence strictly decreasing `r1`). The region it denotes is the downward
/// closure of the piecewise-linear chain through the vertices.
#[derive(Debug, Clone)]
pub struct RateRegion {
    frontier: Vec<RatePair>,
    provenance: String,
}

/// Outcome of an inner-in-outer containment check.
#[derive(Debug, Clone, Copy)]
pub struct RegionComparison {
    pub subset_holds: bool,
    /// Largest outward excess of an inner vertex, in bits (0 when contained).
    pub max_violation: f64,
    /// An offending inner vertex when `max_violation > 0`.
    pub witness: Option<RatePair>,
}

impl RateRegion {
    /// The empty region (e.g. the projection of an infeasible system).
    pub fn empty(provenance: impl Into<String>) -> Self {
        Self { frontier: Vec::new(), provenance: provenance.into() }
    }

    pub fn frontier(&self) -> &[RatePair] {
        &self.frontier
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn is_empty(&self) -> bool {
        self.frontier.is_empty()
    }

    /// Largest achievable `r1` (0 for the empty region).
    pub fn r1_intercept(&self) -> f64 {
        self.frontier.first().map_or(0.0, |p| p.r1)
    }

    /// Largest achievable `r2` (0 for the empty region).
    pub fn r2_intercept(&self) -> f64 {
        self.frontier.last().map_or(0.0, |p| p.r2)
    }

    /// Boundary value: the largest `r1` available at rate `r2`, or `None`
    /// when `r2` exceeds the region.
    pub fn max_r1_at(&self, r2: f64) -> Option<f64> {
        if self.frontier.is_empty() || r2 > self.r2_intercept() {
            return None;
        }
        let first = self.frontier[0];
        if r2 <= first.r2 {
            return Some(first.r1);
        }
        // Find the bracketing segment; frontier r2 is strictly increasing.
        let idx = self.frontier.partition_point(|p| p.r2 < r2);
        let hi = self.frontier[idx];
        if hi.r2 == r2 {
            return Some(hi.r1);
        }
        let lo = self.frontier[idx - 1];
        let t = (r2 - lo.r2) / (hi.r2 - lo.r2);
        Some(lo.r1 + t * (hi.r1 - lo.r1))
    }

    /// Membership in the downward closure, with slack `tol` on each axis.
    pub fn contains_point(&self, p: RatePair, tol: f64) -> bool {
        match self.max_r1_at((p.r2 - tol).max(0.0)) {
            Some(bound) => p.r1 <= bound + tol,
            None => false,
        }
    }

    /// How far `p` must be shrunk toward the origin (Chebyshev distance)
    /// before it enters the region. Zero for points already inside.
    pub fn violation_of(&self, p: RatePair) -> f64 {
        if self.frontier.is_empty() {
            return p.r1.max(p.r2);
        }
        if self.contains_point(p, 0.0) {
            return 0.0;
        }
        let shrunk_inside = |t: f64| {
            let q = RatePair { r1: (p.r1 - t).max(0.0), r2: (p.r2 - t).max(0.0) };
            self.contains_point(q, 0.0)
        };
        let mut lo = 0.0;
        let mut hi = p.r1.max(p.r2);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if shrunk_inside(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// Check the frontier invariants: nonnegative finite vertices, strictly
    /// increasing `r2`, strictly decreasing `r1`, concave chain.
    pub fn validate(&self) -> Result<()> {
        for p in &self.frontier {
            RatePair::new(p.r1, p.r2)?;
        }
        for w in self.frontier.windows(2) {
            if !(w[1].r2 > w[0].r2 && w[1].r1 < w[0].r1) {
                return Err(Error::InvalidParameter(format!(
                    "frontier not strictly monotone: ({}, {}) then ({}, {})",
                    w[0].r1, w[0].r2, w[1].r1, w[1].r2
                )));
            }
        }
        let scale = self
            .frontier
            .iter()
            .map(|p| p.r1.abs().max(p.r2.abs()))
            .fold(1.0, f64::max);
        for w in self.frontier.windows(3) {
            if cross(w[0], w[1], w[2]) > 1e-9 * scale * scale {
                return Err(Error::InvalidParameter(
                    "frontier is not concave".to_string(),
                ));
            }
        }
        Ok(())
    }
}

/// Cross product (b - a) x (c - a) in (x = r2, y = r1) coordinates.
/// Negative when `b` lies strictly above the chord from `a` to `c`.
fn cross(a: RatePair, b: RatePair, c: RatePair) -> f64 {
    (b.r2 - a.r2) * (c.r1 - a.r1) - (b.r1 - a.r1) * (c.r2 - a.r2)
}

/// Upper concave envelope of the downward closures of `points`, i.e. the
/// time-sharing closure of the achieved rate pairs, represented by its
/// vertices. Every input point is dominated by (or on) the result.
pub fn pareto_frontier(points: &[RatePair], provenance: impl Into<String>) -> Result<RateRegion> {
    if points.is_empty() {
        return Err(Error::NoPoints);
    }
    for p in points {
        RatePair::new(p.r1, p.r2)?;
    }
    // Pareto staircase: scan by descending r2, keep strictly increasing r1.
    let mut sorted: Vec<RatePair> = points.to_vec();
    sorted.sort_by(|a, b| {
        b.r2.partial_cmp(&a.r2)
            .unwrap()
            .then(b.r1.partial_cmp(&a.r1).unwrap())
    });
    let mut stair: Vec<RatePair> = Vec::new();
    let mut best_r1 = f64::NEG_INFINITY;
    for p in sorted {
        if p.r1 > best_r1 {
            stair.push(p);
            best_r1 = p.r1;
        }
    }
    stair.reverse(); // now r2 ascending, r1 descending

    // Concave envelope (monotone chain in (r2, r1)); collinear middles drop.
    let mut hull: Vec<RatePair> = Vec::with_capacity(stair.len());
    for p in stair {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) >= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let region = RateRegion { frontier: hull, provenance: provenance.into() };
    debug_assert!(region.validate().is_ok());
    Ok(region)
}

/// Does `outer` contain `inner` up to `tol` bits?
///
/// Every frontier vertex of `inner` must lie within `tol` (Chebyshev
/// distance toward the origin) of the downward closure of `outer`.
pub fn region_contains(outer: &RateRegion, inner: &RateRegion, tol: f64) -> RegionComparison {
    let mut max_violation = 0.0_f64;
    let mut witness = None;
    for &p in inner.frontier() {
        let v = outer.violation_of(p);
        if v > max_violation {
            max_violation = v;
            witness = Some(p);
        }
    }
    RegionComparison { subset_holds: max_violation <= tol, max_violation, witness }
}

/// Symmetric frontier discrepancy: the larger of the two one-sided
/// containment violations. Used as a Hausdorff-style convergence metric.
pub fn frontier_discrepancy(a: &RateRegion, b: &RateRegion) -> f64 {
    region_contains(a, b, 0.0)
        .max_violation
        .max(region_contains(b, a, 0.0).max_violation)
}

/// Write the region as CSV: header `r1_bits,r2_bits`, one vertex per row,
/// `r2` ascending. Values are printed with 17 significant digits so they
/// re-parse to the identical bit pattern.
pub fn write_csv<W: Write>(region: &RateRegion, mut w: W) -> Result<()> {
    writeln!(w, "r1_bits,r2_bits")?;
    for p in region.frontier() {
        writeln!(w, "{:.16e},{:.16e}", p.r1, p.r2)?;
    }
    Ok(())
}

/// Read a region written by [`write_csv`], re-validating the frontier
/// invariants.
pub fn read_csv<R: BufRead>(r: R, provenance: impl Into<String>) -> Result<RateRegion> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Csv("empty file".to_string()))??;
    if header.trim() != "r1_bits,r2_bits" {
        return Err(Error::Csv(format!("unexpected header: {header:?}")));
    }
    let mut frontier = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split(',');
        let (a, b) = (it.next(), it.next());
        match (a, b, it.next()) {
            (Some(a), Some(b), None) => {
                let r1: f64 = a
                    .trim()
                    .parse()
                    .map_err(|e| Error::Csv(format!("row {}: {e}", i + 2)))?;
                let r2: f64 = b
                    .trim()
                    .parse()
                    .map_err(|e| Error::Csv(format!("row {}: {e}", i + 2)))?;
                frontier.push(RatePair::new(r1, r2).map_err(|e| Error::Csv(e.to_string()))?);
            }
            _ => return Err(Error::Csv(format!("row {}: expected two fields", i + 2))),
        }
    }
    let region = RateRegion { frontier, provenance: provenance.into() };
    region.validate().map_err(|e| Error::Csv(e.to_string()))?;
    Ok(region)
}
