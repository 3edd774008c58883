//! The strong-interference outer bound for the Gaussian channel.
//!
//! When receiver 2 sees the cognitive signal at least as well as receiver 1
//! does (`b^2 >= 1`), any achievable pair satisfies, for some input
//! correlation `rho` in `[0, 1]`:
//!
//! ```text
//! R1      <= C((1 - rho^2) * P1)
//! R1 + R2 <= C(b^2*P1 + P2 + 2*rho*sqrt(b^2*P1*P2))
//! ```
//!
//! The bound holds for *some* rho achieved by the code's input correlation,
//! so the outer region is the union over rho of the per-rho caps; sweeping
//! rho traces its frontier. Taking the concave envelope of the swept
//! corners is sound because the capacity region itself is convex.

use crate::error::{Error, Result};
use crate::gaussian::{capacity_bits, GaussianChannel};
use crate::region::{pareto_frontier, RatePair, RateRegion};

/// Input-correlation parameter of the outer bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterParams {
    pub rho: f64,
}

impl OuterParams {
    pub fn new(rho: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::InvalidParameter(format!("rho must lie in [0,1], got {rho}")));
        }
        Ok(Self { rho })
    }
}

/// Gaussian specialization of the strong-interference condition
/// `I(X1;Y1|X2) <= I(X1;Y2|X2)`: conditional on `X2`, receiver 2 sees `X1`
/// with gain `b` against the unit gain at receiver 1, so the condition is
/// `b^2 >= 1`.
pub fn strong_condition_holds(ch: &GaussianChannel) -> bool {
    ch.b() * ch.b() >= 1.0
}

/// The two caps of the outer bound for a given `rho`, in bits:
/// `(r1_cap, sum_cap)`.
pub fn outer_corner(ch: &GaussianChannel, op: &OuterParams) -> Result<(f64, f64)> {
    OuterParams::new(op.rho)?;
    if !strong_condition_holds(ch) {
        return Err(Error::WeakChannel { b2: ch.b() * ch.b() });
    }
    let b2 = ch.b() * ch.b();
    let r1_cap = capacity_bits((1.0 - op.rho * op.rho) * ch.p1());
    let sum_cap =
        capacity_bits(b2 * ch.p1() + ch.p2() + 2.0 * op.rho * (b2 * ch.p1() * ch.p2()).sqrt());
    Ok((r1_cap, sum_cap))
}

/// Sweep `rho` over a uniform grid of `steps` points and return the outer
/// frontier: for each `rho` the extreme corner `(r1_cap, sum_cap - r1_cap)`
/// of `{R1 <= r1_cap, R1 + R2 <= sum_cap}` (in the strong regime
/// `r1_cap <= sum_cap` always holds).
pub fn trace_outer_frontier(ch: &GaussianChannel, steps: usize) -> Result<RateRegion> {
    if steps < 2 {
        return Err(Error::InvalidParameter(format!("steps must be >= 2, got {steps}")));
    }
    let mut corners = Vec::with_capacity(steps);
    for i in 0..steps {
        let rho = i as f64 / (steps - 1) as f64;
        let (r1_cap, sum_cap) = outer_corner(ch, &OuterParams { rho })?;
        corners.push(RatePair::new(r1_cap, sum_cap - r1_cap)?);
    }
    pareto_frontier(&corners, "outer:strong")
}
