//! Numeric Fourier–Motzkin elimination over linear rate inequalities.
//!
//! Systems hold rows `coeff . vars <= bound` with input coefficients
//! restricted to `{-1, 0, +1}` (rate-split systems), plus an implicit
//! `var >= 0` for every variable. Elimination is the exact projection:
//! every (upper, lower) pair on the eliminated variable is combined, and
//! redundant rows are pruned by pairwise syntactic dominance only.

use crate::error::{Error, Result};
use crate::region::{pareto_frontier, RatePair, RateRegion};

const COEFF_EPS: f64 = 1e-12;

/// One inequality `coeffs . vars <= bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub bound: f64,
}

/// A system of linear rate inequalities with implicit nonnegativity.
#[derive(Debug, Clone)]
pub struct IneqSystem {
    vars: Vec<String>,
    rows: Vec<Row>,
}

impl IneqSystem {
    pub fn new(vars: &[&str]) -> Self {
        Self { vars: vars.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn vars(&self) -> Vec<&str> {
        self.vars.iter().map(|s| s.as_str()).collect()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    fn var_index(&self, var: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| Error::UnknownLabel(var.to_string()))
    }

    /// Add `sum(coeff * var) <= bound`; coefficients must be -1, 0 or +1.
    pub fn add_row(&mut self, terms: &[(&str, i32)], bound: f64) -> Result<()> {
        if !bound.is_finite() {
            return Err(Error::InvalidParameter("row bound must be finite".into()));
        }
        let mut coeffs = vec![0.0; self.vars.len()];
        for &(var, c) in terms {
            if !(-1..=1).contains(&c) {
                return Err(Error::InvalidParameter(format!(
                    "coefficient {c} for {var:?} outside {{-1, 0, +1}}"
                )));
            }
            coeffs[self.var_index(var)?] += c as f64;
        }
        if coeffs.iter().any(|c| c.abs() > 1.0 + COEFF_EPS) {
            return Err(Error::InvalidParameter("accumulated coefficient outside {-1, 0, +1}".into()));
        }
        self.rows.push(Row { coeffs, bound });
        Ok(())
    }

    /// Encode the split definition `total = sum(parts)` as two opposing
    /// inequalities.
    pub fn add_split(&mut self, total: &str, parts: &[&str]) -> Result<()> {
        let mut fwd: Vec<(&str, i32)> = vec![(total, 1)];
        let mut bwd: Vec<(&str, i32)> = vec![(total, -1)];
        for &p in parts {
            fwd.push((p, -1));
            bwd.push((p, 1));
        }
        self.add_row(&fwd, 0.0)?;
        self.add_row(&bwd, 0.0)
    }

    /// Does `point` (ordered like `vars`) satisfy all rows and
    /// nonnegativity within `tol`?
    pub fn is_feasible_point(&self, point: &[f64], tol: f64) -> bool {
        if point.len() != self.vars.len() || point.iter().any(|&x| x < -tol) {
            return false;
        }
        self.rows.iter().all(|r| {
            let lhs: f64 = r.coeffs.iter().zip(point).map(|(c, x)| c * x).sum();
            lhs <= r.bound + tol
        })
    }

    /// An all-zero row with a negative bound marks an infeasible system.
    pub fn is_trivially_infeasible(&self) -> bool {
        self.rows
            .iter()
            .any(|r| r.coeffs.iter().all(|c| c.abs() <= COEFF_EPS) && r.bound < -1e-9)
    }

    /// Exact projection eliminating `var`: combine every upper-bound row
    /// with every lower-bound row on `var` (nonnegativity acts as one more
    /// lower bound). A point satisfies the result iff it extends to a
    /// point satisfying `self`.
    pub fn eliminate(&self, var: &str) -> Result<IneqSystem> {
        let vi = self.var_index(var)?;
        let keep_var = |v: &usize| *v != vi;
        let new_vars: Vec<String> =
            self.vars.iter().enumerate().filter(|(i, _)| keep_var(i)).map(|(_, v)| v.clone()).collect();

        let mut uppers: Vec<&Row> = Vec::new();
        let mut lowers: Vec<&Row> = Vec::new();
        let mut neutral: Vec<&Row> = Vec::new();
        for r in &self.rows {
            let c = r.coeffs[vi];
            if c > COEFF_EPS {
                uppers.push(r);
            } else if c < -COEFF_EPS {
                lowers.push(r);
            } else {
                neutral.push(r);
            }
        }

        let strip = |r: &Row| -> Row {
            let coeffs = r.coeffs.iter().enumerate().filter(|(i, _)| keep_var(i)).map(|(_, &c)| c).collect();
            Row { coeffs, bound: r.bound }
        };

        let mut out = IneqSystem { vars: new_vars, rows: Vec::new() };
        for r in neutral {
            out.push_pruned(strip(r));
        }
        // No upper bound: the variable can absorb any lower bound, so all
        // of its rows vanish from the projection.
        if uppers.is_empty() {
            return Ok(out);
        }
        // Implicit nonnegativity -var <= 0 as a synthetic lower row.
        let mut nonneg = Row { coeffs: vec![0.0; self.vars.len()], bound: 0.0 };
        nonneg.coeffs[vi] = -1.0;
        for u in &uppers {
            let cu = u.coeffs[vi];
            for l in lowers.iter().copied().chain(std::iter::once(&nonneg)) {
                let cl = -l.coeffs[vi];
                let mut coeffs = Vec::with_capacity(self.vars.len() - 1);
                for i in 0..self.vars.len() {
                    if i == vi {
                        continue;
                    }
                    coeffs.push(u.coeffs[i] / cu + l.coeffs[i] / cl);
                }
                let bound = u.bound / cu + l.bound / cl;
                out.push_pruned(Row { coeffs, bound });
            }
        }
        Ok(out)
    }

    /// Eliminate several variables in the given order.
    pub fn eliminate_all(&self, vars: &[&str]) -> Result<IneqSystem> {
        let mut sys = self.clone();
        for v in vars {
            sys = sys.eliminate(v)?;
        }
        Ok(sys)
    }

    fn push_pruned(&mut self, row: Row) {
        // Rows implied by nonnegativity alone are vacuous.
        let all_nonpos = row.coeffs.iter().all(|&c| c <= COEFF_EPS);
        let all_zero = row.coeffs.iter().all(|c| c.abs() <= COEFF_EPS);
        if all_zero && row.bound < -1e-9 {
            // Keep as an infeasibility marker.
            self.rows.push(row);
            return;
        }
        if all_nonpos && row.bound >= -1e-9 {
            return;
        }
        // Pairwise syntactic dominance: identical coefficient vector keeps
        // the tighter bound.
        for existing in &mut self.rows {
            let same = existing
                .coeffs
                .iter()
                .zip(&row.coeffs)
                .all(|(a, b)| (a - b).abs() <= COEFF_EPS);
            if same {
                existing.bound = existing.bound.min(row.bound);
                return;
            }
        }
        self.rows.push(row);
    }

    /// Eliminate every variable except `R1` and `R2`, then convert the
    /// surviving two-dimensional system into a rate-region frontier.
    /// Infeasible systems yield the empty region.
    pub fn project_to_r1r2(&self, provenance: &str) -> Result<RateRegion> {
        self.var_index("R1")?;
        self.var_index("R2")?;
        let mut sys = self.clone();
        let to_drop: Vec<String> =
            sys.vars.iter().filter(|v| *v != "R1" && *v != "R2").cloned().collect();
        for v in &to_drop {
            sys = sys.eliminate(v)?;
        }
        if sys.is_trivially_infeasible() {
            return Ok(RateRegion::empty(provenance));
        }
        let i1 = sys.var_index("R1")?;
        let i2 = sys.var_index("R2")?;
        let scale = sys
            .rows
            .iter()
            .map(|r| r.bound.abs())
            .fold(1.0, f64::max);
        // Unbounded projections are not rate regions.
        let big = 4.0 * scale * (sys.rows.len() as f64 + 1.0) + 1.0;
        let mk = |r1: f64, r2: f64| {
            let mut p = vec![0.0; 2];
            p[i1] = r1;
            p[i2] = r2;
            p
        };
        if sys.is_feasible_point(&mk(big, big), 0.0)
            || sys.is_feasible_point(&mk(big, 0.0), 0.0)
            || sys.is_feasible_point(&mk(0.0, big), 0.0)
        {
            return Err(Error::InvalidParameter("projected region is unbounded".into()));
        }

        // Boundary lines a*r1 + b*r2 = c from the rows, plus both axes.
        let mut lines: Vec<(f64, f64, f64)> =
            sys.rows.iter().map(|r| (r.coeffs[i1], r.coeffs[i2], r.bound)).collect();
        lines.push((1.0, 0.0, 0.0));
        lines.push((0.0, 1.0, 0.0));

        let tol = 1e-9 * scale.max(1.0);
        let mut candidates: Vec<RatePair> = Vec::new();
        let mut consider = |r1: f64, r2: f64| {
            if r1 < -tol || r2 < -tol {
                return;
            }
            let p = mk(r1.max(0.0), r2.max(0.0));
            if sys.is_feasible_point(&p, tol) {
                candidates.push(RatePair { r1: p[i1], r2: p[i2] });
            }
        };
        consider(0.0, 0.0);
        for i in 0..lines.len() {
            for j in (i + 1)..lines.len() {
                let (a1, b1, c1) = lines[i];
                let (a2, b2, c2) = lines[j];
                let det = a1 * b2 - a2 * b1;
                if det.abs() <= 1e-12 {
                    continue;
                }
                consider((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det);
            }
        }
        if candidates.is_empty() {
            return Ok(RateRegion::empty(provenance));
        }
        pareto_frontier(&candidates, provenance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Oracle: does `point` on the remaining variables extend to a feasible
    /// value of `var` in the original system? Computed by intersecting the
    /// one-dimensional intervals induced by every row (plus `var >= 0`).
    fn extends(original: &IneqSystem, var: &str, remaining_vars: &[&str], point: &[f64]) -> bool {
        let vi = original.vars().iter().position(|v| *v == var).unwrap();
        let mut lo = 0.0f64;
        let mut hi = f64::INFINITY;
        for row in original.rows() {
            let mut rest = 0.0;
            for (name, &val) in remaining_vars.iter().zip(point) {
                let idx = original.vars().iter().position(|v| v == name).unwrap();
                rest += row.coeffs[idx] * val;
            }
            let c = row.coeffs[vi];
            if c.abs() <= 1e-12 {
                if rest > row.bound + 1e-9 {
                    return false;
                }
            } else if c > 0.0 {
                hi = hi.min((row.bound - rest) / c);
            } else {
                lo = lo.max((row.bound - rest) / c);
            }
        }
        lo <= hi + 1e-9
    }

    #[test]
    fn sum_of_box_bounds() {
        let mut sys = IneqSystem::new(&["R1a", "Rc", "R1"]);
        sys.add_row(&[("R1a", 1)], 1.0).unwrap();
        sys.add_row(&[("Rc", 1)], 2.0).unwrap();
        sys.add_split("R1", &["R1a", "Rc"]).unwrap();
        let out = sys.eliminate_all(&["R1a", "Rc"]).unwrap();
        assert_eq!(out.vars(), vec!["R1"]);
        assert_eq!(out.rows().len(), 1);
        assert_eq!(out.rows()[0].coeffs, vec![1.0]);
        assert!((out.rows()[0].bound - 3.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_variable_drops_its_rows() {
        let mut sys = IneqSystem::new(&["X", "Y"]);
        // Only lower-bound information on X: X >= Y - 2. Projection keeps
        // nothing about X.
        sys.add_row(&[("Y", 1), ("X", -1)], 2.0).unwrap();
        sys.add_row(&[("Y", 1)], 5.0).unwrap();
        let out = sys.eliminate("X").unwrap();
        assert_eq!(out.rows().len(), 1);
        assert_eq!(out.rows()[0].coeffs, vec![1.0]);
        assert_eq!(out.rows()[0].bound, 5.0);
    }

    #[test]
    fn projection_matches_sampling_oracle_on_random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let vars = ["A", "B", "C", "D"];
            let mut sys = IneqSystem::new(&vars);
            for _ in 0..6 {
                let terms: Vec<(&str, i32)> =
                    vars.iter().map(|v| (*v, rng.gen_range(-1..=1))).collect();
                sys.add_row(&terms, rng.gen_range(-0.25..2.0)).unwrap();
            }
            let out = sys.eliminate("D").unwrap();
            let remaining = ["A", "B", "C"];
            for _ in 0..5_000 {
                let p: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..2.5)).collect();
                let in_projection = out.is_feasible_point(&p, 1e-9);
                let has_extension = extends(&sys, "D", &remaining, &p);
                assert_eq!(
                    in_projection, has_extension,
                    "point {p:?} disagrees with extension oracle"
                );
            }
        }
    }

    #[test]
    fn elimination_order_does_not_change_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let vars = ["R1", "R2", "P", "Q", "S"];
        let mut sys = IneqSystem::new(&vars);
        for _ in 0..7 {
            let terms: Vec<(&str, i32)> = vars.iter().map(|v| (*v, rng.gen_range(-1..=1))).collect();
            sys.add_row(&terms, rng.gen_range(0.1..2.0)).unwrap();
        }
        sys.add_row(&[("R1", 1)], 2.0).unwrap();
        sys.add_row(&[("R2", 1)], 2.0).unwrap();
        let orders: Vec<Vec<&str>> = vec![
            vec!["P", "Q", "S"],
            vec!["P", "S", "Q"],
            vec!["Q", "P", "S"],
            vec!["Q", "S", "P"],
            vec!["S", "P", "Q"],
            vec!["S", "Q", "P"],
        ];
        let mut regions = Vec::new();
        for ord in &orders {
            let projected = sys.eliminate_all(ord).unwrap().project_to_r1r2("order").unwrap();
            regions.push(projected);
        }
        for r in &regions[1..] {
            assert_eq!(r.frontier().len(), regions[0].frontier().len());
            for (a, b) in r.frontier().iter().zip(regions[0].frontier()) {
                assert!((a.r1 - b.r1).abs() < 1e-9 && (a.r2 - b.r2).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn projection_is_monotone_in_the_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(57);
        for _ in 0..10 {
            let vars = ["R1", "R2", "U", "V"];
            let mut sys = IneqSystem::new(&vars);
            let mut rows = Vec::new();
            for _ in 0..6 {
                let terms: Vec<(&str, i32)> =
                    vars.iter().map(|v| (*v, rng.gen_range(-1..=1))).collect();
                let bound = rng.gen_range(0.1..2.0);
                rows.push((terms.clone(), bound));
                sys.add_row(&terms, bound).unwrap();
            }
            sys.add_row(&[("R1", 1), ("R2", 1), ("U", 1), ("V", 1)], 3.0).unwrap();
            let base = sys.project_to_r1r2("base").unwrap();

            let mut relaxed = IneqSystem::new(&vars);
            for (terms, bound) in &rows {
                relaxed.add_row(terms, bound + rng.gen_range(0.0..0.5)).unwrap();
            }
            relaxed.add_row(&[("R1", 1), ("R2", 1), ("U", 1), ("V", 1)], 3.25).unwrap();
            let bigger = relaxed.project_to_r1r2("relaxed").unwrap();
            if base.is_empty() {
                continue;
            }
            let cmp = crate::region::region_contains(&bigger, &base, 1e-9);
            assert!(cmp.subset_holds, "relaxing bounds shrank the projection");
        }
    }

    #[test]
    fn every_kept_row_is_supported_after_pruning() {
        // Box-plus-sum system: all three rows are tight somewhere.
        let mut sys = IneqSystem::new(&["R1", "R2"]);
        sys.add_row(&[("R1", 1)], 1.0).unwrap();
        sys.add_row(&[("R2", 1)], 1.0).unwrap();
        sys.add_row(&[("R1", 1), ("R2", 1)], 1.5).unwrap();
        for row in sys.rows() {
            let mut supported = false;
            'outer: for i in 0..=60 {
                for j in 0..=60 {
                    let p = [i as f64 * 0.025, j as f64 * 0.025];
                    if sys.is_feasible_point(&p, 1e-12) {
                        let lhs = row.coeffs[0] * p[0] + row.coeffs[1] * p[1];
                        if (lhs - row.bound).abs() < 1e-9 {
                            supported = true;
                            break 'outer;
                        }
                    }
                }
            }
            assert!(supported, "row {row:?} is vacuous");
        }
    }

    #[test]
    fn all_zero_bounds_give_origin_region() {
        let mut sys = IneqSystem::new(&["R1", "R2", "Rc"]);
        sys.add_row(&[("R1", 1)], 0.0).unwrap();
        sys.add_row(&[("R2", 1)], 0.0).unwrap();
        sys.add_row(&[("Rc", 1)], 0.0).unwrap();
        let region = sys.project_to_r1r2("zero").unwrap();
        assert_eq!(region.frontier(), &[RatePair { r1: 0.0, r2: 0.0 }]);
    }

    #[test]
    fn infeasible_system_projects_to_empty_region() {
        let mut sys = IneqSystem::new(&["R1", "R2", "T"]);
        sys.add_row(&[("T", 1)], -0.5).unwrap(); // conflicts with T >= 0
        sys.add_row(&[("R1", 1)], 1.0).unwrap();
        sys.add_row(&[("R2", 1)], 1.0).unwrap();
        let region = sys.project_to_r1r2("bad").unwrap();
        assert!(region.is_empty());
    }

    #[test]
    fn coefficients_outside_unit_range_are_rejected() {
        let mut sys = IneqSystem::new(&["R1"]);
        assert!(sys.add_row(&[("R1", 2)], 1.0).is_err());
        assert!(sys.add_row(&[("R1", 1), ("R1", 1)], 1.0).is_err());
    }
}
