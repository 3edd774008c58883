//! Achievable-rate regions of the cognitive interference channel and their
//! frontier search.
//!
//! Three Gaussian schemes are evaluated per parameter point and swept to a
//! Pareto frontier:
//!
//! - **joint**: both codewords of encoder 1 are binned against `X2`; both
//!   indices are decoded jointly (the four-inequality region left after
//!   eliminating the split rates),
//! - **sequential**: receiver decoding proceeds codeword by codeword, which
//!   charges the common rate against the worse of the two receivers,
//! - **superposition**: no binning; encoder 1 layers a common codeword that
//!   receiver 2 (and hence the strong receiver) can strip,
//!
//! plus the broadcast-channel baseline (`P2 = 0`), whose frontier is closed
//! form.
//!
//! A parameter point is *excluded* whenever a rate bound that the scheme
//! needs is negative (the binning penalty exceeds what the codeword can
//! carry); excluded points contribute nothing to the frontier.

use crate::error::{Error, Result};
use crate::fme::IneqSystem;
use crate::gaussian::{
    assemble_joint, capacity_bits, costa_coefficient, DpcParams, GaussianChannel, JointGaussian,
};
use crate::region::{pareto_frontier, RatePair, RateRegion};

/// Slack below which a rate bound is treated as genuinely negative (the
/// parameter point is excluded) rather than as round-off.
const EXCLUSION_SLACK: f64 = 1e-9;

/// Which achievable region to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerScheme {
    Joint,
    Sequential,
    Superposition,
    BcBaseline,
}

impl InnerScheme {
    pub fn name(&self) -> &'static str {
        match self {
            InnerScheme::Joint => "joint",
            InnerScheme::Sequential => "sequential",
            InnerScheme::Superposition => "superposition",
            InnerScheme::BcBaseline => "bc",
        }
    }
}

impl std::str::FromStr for InnerScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "joint" => Ok(InnerScheme::Joint),
            "sequential" => Ok(InnerScheme::Sequential),
            "superposition" => Ok(InnerScheme::Superposition),
            "bc" => Ok(InnerScheme::BcBaseline),
            other => Err(Error::InvalidParameter(format!("unknown scheme {other:?}"))),
        }
    }
}

/// Grid resolution and local-refinement settings for frontier tracing.
#[derive(Debug, Clone, Copy)]
pub struct SearchSettings {
    /// Grid points per parameter axis (>= 2).
    pub grid: usize,
    /// Rounds of step-halving local refinement around frontier cells.
    pub refine_rounds: usize,
}

impl Default for SearchSettings {
    fn default() -> Self {
        Self { grid: 25, refine_rounds: 3 }
    }
}

impl SearchSettings {
    pub fn validate(&self) -> Result<()> {
        if self.grid < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid must have at least 2 points per axis, got {}",
                self.grid
            )));
        }
        Ok(())
    }
}

/// A frontier-tracing request.
#[derive(Debug, Clone, Copy)]
pub struct InnerBoundSpec {
    pub scheme: InnerScheme,
    pub channel: GaussianChannel,
    pub search: SearchSettings,
}

/// Split rates of the encoding scheme; `R1 = R1a + Rc`, `R2 = R2a + R2b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateTuple {
    pub r1a: f64,
    pub rc: f64,
    pub r2a: f64,
    pub r2b: f64,
}

impl RateTuple {
    pub fn new(r1a: f64, rc: f64, r2a: f64, r2b: f64) -> Result<Self> {
        for (name, v) in [("r1a", r1a), ("rc", rc), ("r2a", r2a), ("r2b", r2b)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "split rate {name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(Self { r1a, rc, r2a, r2b })
    }

    pub fn r1(&self) -> f64 {
        self.r1a + self.rc
    }

    pub fn r2(&self) -> f64 {
        self.r2a + self.r2b
    }
}

/// Zero binning coefficients on empty codebooks: a codeword of zero power
/// carries no message, so it is the empty signal rather than a scaled copy
/// of the interference. Keeps every evaluated mutual information exact.
fn sanitize(ch: &GaussianChannel, p: &DpcParams) -> DpcParams {
    let alpha = if ch.p2() == 0.0 { 1.0 } else { p.alpha };
    let var_x1c = alpha * p.beta * ch.p1();
    let var_x1a = alpha * (1.0 - p.beta) * ch.p1();
    DpcParams {
        alpha: p.alpha,
        beta: p.beta,
        lambda1: if var_x1c < 1e-300 { 0.0 } else { p.lambda1 },
        lambda2: if var_x1a < 1e-300 { 0.0 } else { p.lambda2 },
    }
}

/// Mutual-information values entering the joint-decoding region with
/// `X2a` empty and no time sharing.
#[derive(Debug, Clone, Copy)]
pub struct JointTerms {
    /// `I(U1a; Y1 | U1c) - I(U1a; X2 | U1c)` — private-rate bound.
    pub r1a: f64,
    /// `I(U1c,U1a; Y1) - I(U1c,U1a; X2)` — total `R1` bound.
    pub r1: f64,
    /// `I(X2; Y2, U1c)` — `R2` bound.
    pub r2: f64,
    /// `I(X2,U1c; Y2)` — `R2 + Rc` bound.
    pub r2_rc: f64,
    /// `I(U1a; Y1, U1c) - I(U1a; X2, U1c)` — joint-entropy form of `r1a`,
    /// as it appears in the eliminated sum bound.
    pub r1a_joint: f64,
}

impl JointTerms {
    /// The scheme requires every right-hand side to be nonnegative.
    pub fn excluded(&self) -> bool {
        self.r1a < -EXCLUSION_SLACK || self.r1 < -EXCLUSION_SLACK
    }

    /// Sum bound of the eliminated region: `R1 + R2 <= r2_rc + r1a_joint`.
    pub fn sum_bound(&self) -> f64 {
        self.r2_rc + self.r1a_joint
    }
}

pub fn joint_terms(ch: &GaussianChannel, p: &DpcParams) -> Result<JointTerms> {
    let p = sanitize(ch, p);
    let jg = assemble_joint(ch, &p)?;
    let m_y = jg.mi(&["U1a"], &["Y1", "U1c"])?;
    let m_x = jg.mi(&["U1a"], &["X2", "U1c"])?;
    let m_c = jg.mi(&["U1a"], &["U1c"])?;
    Ok(JointTerms {
        r1a: (m_y - m_c).max(0.0) - (m_x - m_c).max(0.0),
        r1: jg.mi(&["U1c", "U1a"], &["Y1"])? - jg.mi(&["U1c", "U1a"], &["X2"])?,
        r2: jg.mi(&["X2"], &["Y2", "U1c"])?,
        r2_rc: jg.mi(&["X2", "U1c"], &["Y2"])?,
        r1a_joint: m_y - m_x,
    })
}

/// Mutual-information values of the sequential-decoding region (same
/// specialization).
#[derive(Debug, Clone, Copy)]
pub struct SequentialTerms {
    /// `I(U1a; Y1 | U1c) - I(U1a; X2 | U1c)` — private-rate bound.
    pub r1a: f64,
    /// `min{I(U1c; Y1), I(U1c; Y2)} - I(U1c; X2)` — common-rate bound.
    pub rc: f64,
    /// `I(X2; Y2, U1c)` — `R2` bound.
    pub r2: f64,
    /// `I(U1c; Y1)`, kept for regime checks.
    pub u1c_y1: f64,
    /// `I(U1c; Y2)`, kept for regime checks.
    pub u1c_y2: f64,
}

impl SequentialTerms {
    pub fn excluded(&self) -> bool {
        self.r1a < -EXCLUSION_SLACK || self.rc < -EXCLUSION_SLACK
    }
}

pub fn sequential_terms(ch: &GaussianChannel, p: &DpcParams) -> Result<SequentialTerms> {
    let p = sanitize(ch, p);
    let jg = assemble_joint(ch, &p)?;
    let m_y = jg.mi(&["U1a"], &["Y1", "U1c"])?;
    let m_x = jg.mi(&["U1a"], &["X2", "U1c"])?;
    let m_c = jg.mi(&["U1a"], &["U1c"])?;
    let u1c_y1 = jg.mi(&["U1c"], &["Y1"])?;
    let u1c_y2 = jg.mi(&["U1c"], &["Y2"])?;
    let u1c_x2 = jg.mi(&["U1c"], &["X2"])?;
    Ok(SequentialTerms {
        r1a: (m_y - m_c).max(0.0) - (m_x - m_c).max(0.0),
        rc: u1c_y1.min(u1c_y2) - u1c_x2,
        r2: jg.mi(&["X2"], &["Y2", "U1c"])?,
        u1c_y1,
        u1c_y2,
    })
}

/// Power-split parameters of the superposition scheme: `beta` is the share
/// of non-cooperative power in the common layer, `gamma` scales the
/// coherent ride on `X2` (cooperative power `gamma^2 * P1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionParams {
    pub beta: f64,
    pub gamma: f64,
}

impl SuperpositionParams {
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        if !((0.0..=1.0).contains(&beta) && (0.0..=1.0).contains(&gamma)) {
            return Err(Error::InvalidParameter(format!(
                "superposition params must lie in [0,1], got beta={beta}, gamma={gamma}"
            )));
        }
        Ok(Self { beta, gamma })
    }
}

/// Mutual-information values of the superposition region.
#[derive(Debug, Clone, Copy)]
pub struct SuperpositionTerms {
    /// `I(X1; Y1 | X2, U1c)` — private-layer bound.
    pub r1a: f64,
    /// `I(X1; Y1 | X2)` — `R1` bound.
    pub r1: f64,
    /// `I(X1, X2; Y1)` — sum bound at receiver 1.
    pub sum_y1: f64,
    /// `I(U1c, X2; Y2)` — `Rc + R2` bound.
    pub rc_r2: f64,
}

pub fn superposition_terms(
    ch: &GaussianChannel,
    sp: &SuperpositionParams,
) -> Result<SuperpositionTerms> {
    SuperpositionParams::new(sp.beta, sp.gamma)?;
    if ch.p2() == 0.0 {
        return Err(Error::InvalidParameter(
            "superposition scheme needs P2 > 0 (use the BC baseline instead)".into(),
        ));
    }
    let layered = (1.0 - sp.gamma * sp.gamma) * ch.p1();
    let coop = sp.gamma * (ch.p1() / ch.p2()).sqrt();
    if layered < 1e-12 * ch.p1().max(1.0) {
        // Full cooperation: X1 is a deterministic multiple of X2, so user 1
        // gets nothing and receiver 2 sees a coherent single-user channel.
        let g2 = ch.b() * coop + 1.0;
        return Ok(SuperpositionTerms {
            r1a: 0.0,
            r1: 0.0,
            sum_y1: capacity_bits((coop + ch.a()).powi(2) * ch.p2()),
            rc_r2: capacity_bits(g2 * g2 * ch.p2()),
        });
    }
    let jg = superposition_joint(ch, sp)?;
    // X1 is deterministic given (X2, U1c) when the private layer is empty.
    let r1a = if (1.0 - sp.beta) * layered < 1e-12 * ch.p1().max(1.0) {
        0.0
    } else {
        jg.mi_cond(&["X1"], &["Y1"], &["X2", "U1c"])?
    };
    Ok(SuperpositionTerms {
        r1a,
        r1: jg.mi_cond(&["X1"], &["Y1"], &["X2"])?,
        sum_y1: jg.mi(&["X1", "X2"], &["Y1"])?,
        rc_r2: jg.mi(&["U1c", "X2"], &["Y2"])?,
    })
}

fn superposition_joint(ch: &GaussianChannel, sp: &SuperpositionParams) -> Result<JointGaussian> {
    let layered = (1.0 - sp.gamma * sp.gamma) * ch.p1();
    let coop = sp.gamma * (ch.p1() / ch.p2()).sqrt();
    let mut sys = crate::gaussian::GaussianSystem::new();
    let x2 = sys.add_source(ch.p2())?;
    let u1c = sys.add_source(sp.beta * layered)?;
    let x1p = sys.add_source((1.0 - sp.beta) * layered)?;
    let z1 = sys.add_source(1.0)?;
    let z2 = sys.add_source(1.0)?;
    sys.define("X2", &[(1.0, x2)])?;
    sys.define("U1c", &[(1.0, u1c)])?;
    sys.define("X1", &[(1.0, u1c), (1.0, x1p), (coop, x2)])?;
    sys.define("Y1", &[(1.0, u1c), (1.0, x1p), (coop + ch.a(), x2), (1.0, z1)])?;
    sys.define("Y2", &[(ch.b(), u1c), (ch.b(), x1p), (ch.b() * coop + 1.0, x2), (1.0, z2)])?;
    Ok(sys.build())
}

/// Both extreme corners of `{R1 <= r1_cap, R2 <= r2_cap, R1+R2 <= sum_cap}`,
/// clamped to the nonnegative quadrant. The first favors `R1`.
fn corner_candidates(r1_cap: f64, r2_cap: f64, sum_cap: f64) -> [RatePair; 2] {
    let r1_cap = r1_cap.max(0.0);
    let r2_cap = r2_cap.max(0.0);
    let sum_cap = sum_cap.max(0.0);
    let a1 = r1_cap.min(sum_cap);
    let first = RatePair { r1: a1, r2: r2_cap.min(sum_cap - a1).max(0.0) };
    let b2 = r2_cap.min(sum_cap);
    let second = RatePair { r1: r1_cap.min(sum_cap - b2).max(0.0), r2: b2 };
    [first, second]
}

/// Maximal corner (favoring `R1`) of the joint-decoding region for one
/// parameter point. Parameter points excluded by the nonnegativity
/// requirement return the origin.
pub fn eval_joint_g2(ch: &GaussianChannel, p: &DpcParams) -> Result<RatePair> {
    let t = joint_terms(ch, p)?;
    if t.excluded() {
        return Ok(RatePair { r1: 0.0, r2: 0.0 });
    }
    Ok(corner_candidates(t.r1, t.r2.min(t.r2_rc), t.sum_bound())[0])
}

/// Rate pair achieved by sequential decoding for one parameter point;
/// excluded points return the origin.
pub fn eval_sequential_gseq(ch: &GaussianChannel, p: &DpcParams) -> Result<RatePair> {
    let t = sequential_terms(ch, p)?;
    if t.excluded() {
        return Ok(RatePair { r1: 0.0, r2: 0.0 });
    }
    RatePair::clamped(t.r1a.max(0.0) + t.rc.max(0.0), t.r2)
}

/// Maximal corner (favoring `R1`) of the superposition region for one
/// parameter point.
pub fn eval_superposition(ch: &GaussianChannel, sp: &SuperpositionParams) -> Result<RatePair> {
    let t = superposition_terms(ch, sp)?;
    Ok(corner_candidates(t.r1, t.rc_r2, t.sum_y1.min(t.r1a + t.rc_r2))[0])
}

/// One point of the broadcast-channel baseline (`P2 = 0`): encoder 1
/// serves both receivers alone, splitting its power with share `theta`
/// for message 1. Closed form; the stronger receiver decodes both layers.
pub fn bc_corner(ch: &GaussianChannel, theta: f64) -> Result<RatePair> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::InvalidParameter(format!("theta must lie in [0,1], got {theta}")));
    }
    let p1 = ch.p1();
    let b2 = ch.b() * ch.b();
    let (r1, r2) = if b2 >= 1.0 {
        // Receiver 2 is the stronger one; receiver 1 treats its layer as noise.
        (
            capacity_bits(theta * p1 / (1.0 + (1.0 - theta) * p1)),
            capacity_bits((1.0 - theta) * b2 * p1),
        )
    } else {
        (
            capacity_bits(theta * p1),
            capacity_bits((1.0 - theta) * b2 * p1 / (1.0 + theta * b2 * p1)),
        )
    };
    RatePair::new(r1, r2)
}

// ---------------------------------------------------------------------------
// Constraint-system builders (consumed by the elimination cross-checks)
// ---------------------------------------------------------------------------

/// The four-inequality split-rate system before elimination
/// (`X2a` empty, no time sharing): variables `R1, R2, R1a, Rc` with
/// `R1 = R1a + Rc`.
pub fn joint_split_system(t: &JointTerms) -> IneqSystem {
    let mut sys = IneqSystem::new(&["R1", "R2", "R1a", "Rc"]);
    sys.add_row(&[("R1a", 1)], t.r1a).unwrap();
    sys.add_row(&[("R1", 1)], t.r1).unwrap();
    sys.add_row(&[("R2", 1)], t.r2).unwrap();
    sys.add_row(&[("R2", 1), ("Rc", 1)], t.r2_rc).unwrap();
    sys.add_split("R1", &["R1a", "Rc"]).unwrap();
    sys
}

/// The eliminated joint-decoding region as a direct two-variable system.
pub fn joint_reduced_system(t: &JointTerms) -> IneqSystem {
    let mut sys = IneqSystem::new(&["R1", "R2"]);
    sys.add_row(&[("R1", 1)], t.r1).unwrap();
    sys.add_row(&[("R2", 1)], t.r2).unwrap();
    sys.add_row(&[("R2", 1)], t.r2_rc).unwrap();
    sys.add_row(&[("R1", 1), ("R2", 1)], t.sum_bound()).unwrap();
    sys
}

/// The split-rate superposition system: `R1a <= r1a`, `R1 <= r1`,
/// `R1 + R2 <= sum_y1`, `Rc + R2 <= rc_r2`, with `R1 = R1a + Rc`.
pub fn superposition_split_system(t: &SuperpositionTerms) -> IneqSystem {
    let mut sys = IneqSystem::new(&["R1", "R2", "R1a", "Rc"]);
    sys.add_row(&[("R1a", 1)], t.r1a).unwrap();
    sys.add_row(&[("R1", 1)], t.r1).unwrap();
    sys.add_row(&[("R1", 1), ("R2", 1)], t.sum_y1).unwrap();
    sys.add_row(&[("Rc", 1), ("R2", 1)], t.rc_r2).unwrap();
    sys.add_split("R1", &["R1a", "Rc"]).unwrap();
    sys
}

/// The eliminated superposition region (the degraded-message-set capacity
/// form): four inequalities over `R1, R2` only.
pub fn superposition_reduced_system(t: &SuperpositionTerms) -> IneqSystem {
    let mut sys = IneqSystem::new(&["R1", "R2"]);
    sys.add_row(&[("R1", 1)], t.r1).unwrap();
    sys.add_row(&[("R2", 1)], t.rc_r2).unwrap();
    sys.add_row(&[("R1", 1), ("R2", 1)], t.r1a + t.rc_r2).unwrap();
    sys.add_row(&[("R1", 1), ("R2", 1)], t.sum_y1).unwrap();
    sys
}

// ---------------------------------------------------------------------------
// Frontier tracing
// ---------------------------------------------------------------------------

/// A box sweep over up to four parameters with supporting-line refinement.
///
/// The initial grid seeds the pool; afterwards, for a fan of weight vectors
/// `w = (cos t, sin t)`, the pool's best point under `w . (R1, R2)` is
/// polished by coordinate descent with step halving. Since the traced
/// region is the concave envelope of the pool, its frontier is exactly the
/// set of scalarization maximizers, so refining the supporting points
/// converges the whole frontier. Deterministic throughout.
struct BoxSweep<'a> {
    dims: usize,
    hi: [f64; 4],
    eval: &'a dyn Fn(&[f64; 4]) -> Result<CornerSet>,
}

/// Up to two corners produced by one parameter point.
type CornerSet = arrayvec_lite::ArrayVecLite;

/// Minimal fixed-capacity vector for corner pairs, to keep the sweep
/// allocation-free per evaluation.
mod arrayvec_lite {
    use crate::region::RatePair;

    #[derive(Debug, Clone, Copy)]
    pub struct ArrayVecLite {
        buf: [RatePair; 2],
        len: usize,
    }

    impl ArrayVecLite {
        pub fn empty() -> Self {
            Self { buf: [RatePair { r1: 0.0, r2: 0.0 }; 2], len: 0 }
        }

        pub fn of(points: &[RatePair]) -> Self {
            let mut v = Self::empty();
            for &p in points {
                v.buf[v.len] = p;
                v.len += 1;
            }
            v
        }

        pub fn as_slice(&self) -> &[RatePair] {
            &self.buf[..self.len]
        }
    }
}

/// A supporting point found for one scalarization weight.
#[derive(Debug, Clone, Copy)]
struct Support {
    theta: f64,
    params: [f64; 4],
    corner: RatePair,
}

impl BoxSweep<'_> {
    /// Pattern search (Hooke-Jeeves) on `w . (R1, R2)` from `start`, with
    /// `rounds` step-halvings. Exploratory per-coordinate moves are chased
    /// with extrapolation steps, which follows the curved ridges that plain
    /// coordinate descent zigzags on. Every evaluated corner lands in the
    /// pool.
    #[allow(clippy::too_many_arguments)]
    fn polish(
        &self,
        start: [f64; 4],
        w: (f64, f64),
        rounds: usize,
        base_step: &[f64],
        corners: &mut Vec<RatePair>,
        owners: &mut Vec<[f64; 4]>,
    ) -> Result<Support> {
        let score = |c: &RatePair| w.0 * c.r1 + w.1 * c.r2;
        let mut probe = |q: &[f64; 4],
                         corners: &mut Vec<RatePair>,
                         owners: &mut Vec<[f64; 4]>|
         -> Result<(f64, RatePair)> {
            let set = (self.eval)(q)?;
            let mut out = (f64::NEG_INFINITY, RatePair { r1: 0.0, r2: 0.0 });
            for &c in set.as_slice() {
                corners.push(c);
                owners.push(*q);
                let s = score(&c);
                if s > out.0 {
                    out = (s, c);
                }
            }
            Ok(out)
        };
        let dims = self.dims;
        let hi = self.hi;
        // Exploratory pass: accept per-coordinate improvements sequentially.
        macro_rules! explore {
            ($from:expr, $fscore:expr, $step:expr, $corners:expr, $owners:expr) => {{
                let mut x = $from;
                let mut xs = $fscore;
                let mut xc: Option<RatePair> = None;
                for d in 0..dims {
                    if $step[d] == 0.0 {
                        continue;
                    }
                    for sign in [1.0f64, -1.0] {
                        let mut q = x;
                        q[d] = (q[d] + sign * $step[d]).clamp(0.0, hi[d]);
                        if q[d] == x[d] {
                            continue;
                        }
                        let (s, c) = probe(&q, $corners, $owners)?;
                        if s > xs + 1e-15 {
                            x = q;
                            xs = s;
                            xc = Some(c);
                            break;
                        }
                    }
                }
                (x, xs, xc)
            }};
        }

        let mut cur = start;
        let (mut cur_score, mut cur_corner) = probe(&cur, corners, owners)?;
        let mut step: Vec<f64> = base_step.to_vec();
        for _round in 0..rounds.max(1) {
            for _restart in 0..24 {
                let (next, next_score, next_corner) =
                    explore!(cur, cur_score, step, corners, owners);
                if next_score <= cur_score + 1e-15 {
                    break;
                }
                let mut base = cur;
                cur = next;
                cur_score = next_score;
                if let Some(c) = next_corner {
                    cur_corner = c;
                }
                // Pattern chase: extrapolate the successful move and explore
                // around the extrapolated point while it keeps paying off.
                for _chase in 0..48 {
                    let mut pat = cur;
                    for d in 0..dims {
                        pat[d] = (2.0 * cur[d] - base[d]).clamp(0.0, hi[d]);
                    }
                    let (ps, _pc) = probe(&pat, corners, owners)?;
                    let (cand, cand_score, cand_corner) =
                        explore!(pat, ps, step, corners, owners);
                    if cand_score > cur_score + 1e-15 {
                        base = cur;
                        cur = cand;
                        cur_score = cand_score;
                        if let Some(c) = cand_corner {
                            cur_corner = c;
                        }
                    } else {
                        break;
                    }
                }
            }
            for s in step.iter_mut() {
                *s *= 0.5;
            }
        }
        Ok(Support { theta: w.1.atan2(w.0), params: cur, corner: cur_corner })
    }

    /// Best supporting point for weight `theta`, polished from the pool
    /// argmax and from any warm starts.
    #[allow(clippy::too_many_arguments)]
    fn support_at(
        &self,
        theta: f64,
        warm: &[[f64; 4]],
        rounds: usize,
        base_step: &[f64],
        corners: &mut Vec<RatePair>,
        owners: &mut Vec<[f64; 4]>,
    ) -> Result<Support> {
        let (w1, w2) = (theta.cos(), theta.sin());
        let score = |c: &RatePair| w1 * c.r1 + w2 * c.r2;
        let (mut best_idx, mut best_score) = (0usize, f64::NEG_INFINITY);
        for (i, c) in corners.iter().enumerate() {
            let s = score(c);
            if s > best_score {
                best_score = s;
                best_idx = i;
            }
        }
        let mut starts = vec![owners[best_idx]];
        starts.extend_from_slice(warm);
        let mut best: Option<Support> = None;
        for start in starts {
            let sup = self.polish(start, (w1, w2), rounds, base_step, corners, owners)?;
            if best.map_or(true, |b| score(&sup.corner) > score(&b.corner)) {
                best = Some(sup);
            }
        }
        Ok(best.expect("at least one start"))
    }

    fn run(
        &self,
        grid: usize,
        rounds: usize,
        anchors: &[[f64; 4]],
        provenance: &str,
    ) -> Result<RateRegion> {
        let n: Vec<usize> =
            (0..self.dims).map(|d| if self.hi[d] > 0.0 { grid } else { 1 }).collect();
        let total: usize = n.iter().product();
        let mut corners: Vec<RatePair> = Vec::with_capacity(2 * total);
        let mut owners: Vec<[f64; 4]> = Vec::with_capacity(2 * total);
        let push = |p: [f64; 4], corners: &mut Vec<RatePair>, owners: &mut Vec<[f64; 4]>| -> Result<()> {
            for &c in (self.eval)(&p)?.as_slice() {
                corners.push(c);
                owners.push(p);
            }
            Ok(())
        };
        for id in 0..total {
            let mut p = [0.0f64; 4];
            let mut rest = id;
            for d in 0..self.dims {
                let i = rest % n[d];
                rest /= n[d];
                p[d] = if n[d] == 1 { 0.0 } else { self.hi[d] * i as f64 / (n[d] - 1) as f64 };
            }
            push(p, &mut corners, &mut owners)?;
        }
        for &a in anchors {
            push(a, &mut corners, &mut owners)?;
        }

        // Supporting-line refinement with continuation: each weight is
        // polished from the pool argmax and from the previous weight's
        // optimum, so the search tracks each branch of maximizers.
        let weights = 12 * grid + 1;
        let base_step: Vec<f64> = (0..self.dims)
            .map(|d| if n[d] == 1 { 0.0 } else { 0.5 * self.hi[d] / (n[d] - 1) as f64 })
            .collect();
        let mut supports: Vec<Support> = Vec::with_capacity(weights);
        for k in 0..weights {
            let theta = std::f64::consts::FRAC_PI_2 * k as f64 / (weights - 1) as f64;
            let warm: Vec<[f64; 4]> = supports.last().map(|s| s.params).into_iter().collect();
            let sup = self.support_at(theta, &warm, rounds, &base_step, &mut corners, &mut owners)?;
            supports.push(sup);
        }

        // Where consecutive supporting corners jump, the frontier has a
        // time-sharing chord between two maximizer branches. Bisect the
        // weight angle to pin the chord pivots; each probe is polished from
        // both branch endpoints.
        const CHORD_GAP: f64 = 1e-3;
        let gaps: Vec<(Support, Support)> = supports
            .windows(2)
            .filter(|w| {
                (w[0].corner.r1 - w[1].corner.r1)
                    .abs()
                    .max((w[0].corner.r2 - w[1].corner.r2).abs())
                    > CHORD_GAP
            })
            .map(|w| (w[0], w[1]))
            .collect();
        for (mut lo, mut hi) in gaps {
            for _ in 0..48 {
                let theta = 0.5 * (lo.theta + hi.theta);
                if hi.theta - lo.theta < 1e-14 {
                    break;
                }
                let sup = self.support_at(
                    theta,
                    &[lo.params, hi.params],
                    rounds,
                    &base_step,
                    &mut corners,
                    &mut owners,
                )?;
                let d_lo = (sup.corner.r1 - lo.corner.r1)
                    .abs()
                    .max((sup.corner.r2 - lo.corner.r2).abs());
                let d_hi = (sup.corner.r1 - hi.corner.r1)
                    .abs()
                    .max((sup.corner.r2 - hi.corner.r2).abs());
                if d_lo <= d_hi {
                    lo = sup;
                } else {
                    hi = sup;
                }
            }
        }
        if corners.is_empty() {
            corners.push(RatePair { r1: 0.0, r2: 0.0 });
        }
        pareto_frontier(&corners, provenance)
    }
}

/// Sweep the parameter box of `spec.scheme`, refine around the
/// Pareto-optimal cells by weighted coordinate descent, and return the
/// frontier of every evaluated corner. Deterministic for a fixed spec.
pub fn trace_frontier(spec: &InnerBoundSpec) -> Result<RateRegion> {
    spec.search.validate()?;
    let ch = &spec.channel;
    match spec.scheme {
        InnerScheme::BcBaseline => {
            let n = spec.search.grid * spec.search.grid;
            let mut pts = Vec::with_capacity(n + 1);
            for i in 0..=n {
                pts.push(bc_corner(ch, i as f64 / n as f64)?);
            }
            pareto_frontier(&pts, "bc")
        }
        InnerScheme::Superposition => {
            if ch.p2() == 0.0 {
                return Err(Error::InvalidParameter(
                    "superposition scheme needs P2 > 0 (use the BC baseline instead)".into(),
                ));
            }
            let eval = |v: &[f64; 4]| -> Result<CornerSet> {
                let sp = SuperpositionParams { beta: v[0], gamma: v[1] };
                let t = superposition_terms(ch, &sp)?;
                Ok(CornerSet::of(&corner_candidates(
                    t.r1,
                    t.rc_r2,
                    t.sum_y1.min(t.r1a + t.rc_r2),
                )))
            };
            let sweep = BoxSweep { dims: 2, hi: [1.0, 1.0, 0.0, 0.0], eval: &eval };
            sweep.run(
                spec.search.grid,
                spec.search.refine_rounds,
                &[[0.0, 1.0, 0.0, 0.0]],
                "inner:superposition",
            )
        }
        InnerScheme::Joint | InnerScheme::Sequential => {
            let sequential = spec.scheme == InnerScheme::Sequential;
            let eval = |v: &[f64; 4]| -> Result<CornerSet> {
                let p = DpcParams { alpha: v[0], beta: v[1], lambda1: v[2], lambda2: v[3] };
                if sequential {
                    let t = sequential_terms(ch, &p)?;
                    if t.excluded() {
                        return Ok(CornerSet::empty());
                    }
                    Ok(CornerSet::of(&[RatePair::clamped(
                        t.r1a.max(0.0) + t.rc.max(0.0),
                        t.r2,
                    )?]))
                } else {
                    let t = joint_terms(ch, &p)?;
                    if t.excluded() {
                        return Ok(CornerSet::empty());
                    }
                    Ok(CornerSet::of(&corner_candidates(
                        t.r1,
                        t.r2.min(t.r2_rc),
                        t.sum_bound(),
                    )))
                }
            };
            // The dirty-paper coefficient for full private power sets the
            // scale of useful binning coefficients; sweep up to three times
            // it.
            let lambda_max = 3.0 * costa_coefficient(ch.a().abs(), ch.p1());
            let sweep =
                BoxSweep { dims: 4, hi: [1.0, 1.0, lambda_max, lambda_max], eval: &eval };
            // Anchors: the full-cooperation corner and the interference-free
            // dirty-paper corner are exact endpoints of the frontier; seed
            // them so coarse grids keep them.
            let anchors = [
                [0.0, 0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0, costa_coefficient(ch.a().abs(), ch.p1())],
            ];
            let provenance = if sequential { "inner:sequential" } else { "inner:joint" };
            sweep.run(spec.search.grid, spec.search.refine_rounds, &anchors, provenance)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::region_contains;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn canonical() -> GaussianChannel {
        GaussianChannel::from_squared_gains(0.3, 2.0, 6.0, 6.0).unwrap()
    }

    fn r2_max_coherent(ch: &GaussianChannel) -> f64 {
        let g = 1.0 + ch.b() * (ch.p1() / ch.p2()).sqrt();
        capacity_bits(g * g * ch.p2())
    }

    #[test]
    fn full_cooperation_reaches_the_coherent_combining_rate() {
        let ch = canonical();
        let p = DpcParams::new(0.0, 0.0, 0.0, 0.0).unwrap();
        let got = eval_joint_g2(&ch, &p).unwrap();
        assert_eq!(got.r1, 0.0);
        assert!((got.r2 - r2_max_coherent(&ch)).abs() < 1e-9, "r2 = {}", got.r2);
    }

    #[test]
    fn costa_point_is_interference_free() {
        let ch = canonical();
        let p = DpcParams::new(1.0, 0.0, 0.0, costa_coefficient(ch.a(), ch.p1())).unwrap();
        let got = eval_joint_g2(&ch, &p).unwrap();
        assert!((got.r1 - capacity_bits(6.0)).abs() < 1e-9, "r1 = {}", got.r1);
        // Receiver 2 still gets the interference-as-noise rate.
        let ian = capacity_bits(ch.p2() / (1.0 + ch.b() * ch.b() * ch.p1()));
        assert!((got.r2 - ian).abs() < 1e-9, "r2 = {}", got.r2);
    }

    #[test]
    fn common_codeword_independent_of_x2_pays_no_binning_penalty() {
        let ch = canonical();
        let t = joint_terms(&ch, &DpcParams::new(1.0, 1.0, 0.0, 0.0).unwrap()).unwrap();
        let jg = assemble_joint(&ch, &DpcParams::new(1.0, 1.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(jg.mi(&["U1c", "U1a"], &["X2"]).unwrap(), 0.0);
        assert!((t.r1 - jg.mi(&["U1c"], &["Y1"]).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn sequential_r2_matches_joint_r2_at_full_cooperation() {
        let ch = canonical();
        let p = DpcParams::new(0.0, 0.0, 0.0, 0.0).unwrap();
        let seq = eval_sequential_gseq(&ch, &p).unwrap();
        let joint = eval_joint_g2(&ch, &p).unwrap();
        assert!((seq.r2 - joint.r2).abs() < 1e-9);
    }

    #[test]
    fn empty_common_codebook_zeroes_the_common_rate() {
        let ch = canonical();
        let t = sequential_terms(&ch, &DpcParams::new(1.0, 0.0, 0.7, 0.2).unwrap()).unwrap();
        assert_eq!(t.rc, 0.0);
        let got = eval_sequential_gseq(&ch, &DpcParams::new(1.0, 0.0, 0.7, 0.2).unwrap()).unwrap();
        assert!((got.r1 - t.r1a.max(0.0)).abs() < 1e-12);
    }

    #[test]
    fn sequential_equals_joint_when_receiver1_is_the_bottleneck() {
        // With an empty private codebook, joint and sequential decoding
        // achieve the same pair whenever I(U1c;Y1) <= I(U1c;Y2).
        let ch = canonical();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut tested = 0;
        while tested < 20 {
            let p = DpcParams::new(rng.gen_range(0.1..1.0), 1.0, rng.gen_range(0.0..1.2), 0.0)
                .unwrap();
            let t = sequential_terms(&ch, &p).unwrap();
            if t.u1c_y1 > t.u1c_y2 || t.excluded() {
                continue;
            }
            tested += 1;
            let seq = eval_sequential_gseq(&ch, &p).unwrap();
            let joint = eval_joint_g2(&ch, &p).unwrap();
            assert!(
                (seq.r1 - joint.r1).abs() < 1e-9 && (seq.r2 - joint.r2).abs() < 1e-9,
                "params {p:?}: seq {seq:?} vs joint {joint:?}"
            );
        }
    }

    #[test]
    fn corners_satisfy_their_defining_inequalities() {
        let ch = canonical();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let p = DpcParams::new(
                rng.gen_range(0.0..=1.0),
                rng.gen_range(0.0..=1.0),
                rng.gen_range(0.0..1.5),
                rng.gen_range(0.0..1.5),
            )
            .unwrap();
            let t = joint_terms(&ch, &p).unwrap();
            if t.excluded() {
                continue;
            }
            for c in corner_candidates(t.r1, t.r2.min(t.r2_rc), t.sum_bound()) {
                assert!(c.r1 <= t.r1 + 1e-9);
                assert!(c.r2 <= t.r2.min(t.r2_rc) + 1e-9);
                assert!(c.r1 + c.r2 <= t.sum_bound() + 1e-9);
            }
            let s = sequential_terms(&ch, &p).unwrap();
            if !s.excluded() {
                let pt = eval_sequential_gseq(&ch, &p).unwrap();
                assert!(pt.r1 <= s.r1a.max(0.0) + s.rc.max(0.0) + 1e-9);
                assert!(pt.r2 <= s.r2 + 1e-9);
            }
        }
    }

    #[test]
    fn superposition_with_independent_inputs() {
        let ch = canonical();
        let t = superposition_terms(&ch, &SuperpositionParams::new(0.0, 0.0).unwrap()).unwrap();
        assert!((t.r1 - capacity_bits(ch.p1())).abs() < 1e-9);
        // Receiver 2 treats b*X1 as noise.
        let ian = capacity_bits(ch.p2() / (1.0 + ch.b() * ch.b() * ch.p1()));
        assert!((t.rc_r2 - ian).abs() < 1e-9);
        let corner = eval_superposition(&ch, &SuperpositionParams::new(0.0, 0.0).unwrap()).unwrap();
        assert!(corner.r1 + corner.r2 <= t.sum_y1 + 1e-9, "sum bound violated");
    }

    #[test]
    fn superposition_rejects_zero_p2() {
        let ch = GaussianChannel::from_squared_gains(0.3, 2.0, 6.0, 0.0).unwrap();
        assert!(superposition_terms(&ch, &SuperpositionParams::new(0.5, 0.5).unwrap()).is_err());
    }

    #[test]
    fn superposition_sum_bound_is_reported_tight_or_slack() {
        let ch = canonical();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let sp = SuperpositionParams::new(rng.gen(), rng.gen()).unwrap();
            let t = superposition_terms(&ch, &sp).unwrap();
            let c = eval_superposition(&ch, &sp).unwrap();
            assert!(c.r1 + c.r2 <= t.sum_y1 + 1e-9);
        }
    }

    #[test]
    fn bc_baseline_endpoints() {
        let ch = canonical();
        let at_one = bc_corner(&ch, 1.0).unwrap();
        assert!((at_one.r1 - capacity_bits(6.0)).abs() < 1e-12);
        assert_eq!(at_one.r2, 0.0);
        let at_zero = bc_corner(&ch, 0.0).unwrap();
        assert_eq!(at_zero.r1, 0.0);
        assert!((at_zero.r2 - capacity_bits(12.0)).abs() < 1e-12);
        assert!((at_zero.r2 - 1.850219859070546).abs() < 1e-9);
    }

    fn spec(scheme: InnerScheme, ch: GaussianChannel, grid: usize) -> InnerBoundSpec {
        InnerBoundSpec { scheme, channel: ch, search: SearchSettings { grid, refine_rounds: 2 } }
    }

    #[test]
    fn joint_frontier_hits_both_endpoints() {
        let ch = canonical();
        let region = trace_frontier(&spec(InnerScheme::Joint, ch, 7)).unwrap();
        assert!((region.r2_intercept() - r2_max_coherent(&ch)).abs() < 1e-9);
        assert!((region.r1_intercept() - capacity_bits(6.0)).abs() < 1e-9);
        // Flat part: full R1 is still available at small positive R2.
        let flat = region.max_r1_at(0.2).unwrap();
        assert!(flat >= capacity_bits(6.0) - 1e-3, "boundary at r2=0.2 is {flat}");
        region.validate().unwrap();
    }

    #[test]
    fn sequential_frontier_is_inside_the_joint_frontier() {
        let ch = canonical();
        let joint = trace_frontier(&spec(InnerScheme::Joint, ch, 9)).unwrap();
        let seq = trace_frontier(&spec(InnerScheme::Sequential, ch, 9)).unwrap();
        let cmp = region_contains(&joint, &seq, 1e-6);
        assert!(cmp.subset_holds, "violation {} at {:?}", cmp.max_violation, cmp.witness);
    }

    #[test]
    fn frontier_grows_with_p1() {
        let small = GaussianChannel::from_squared_gains(0.3, 2.0, 3.0, 6.0).unwrap();
        let large = canonical();
        let inner_small = trace_frontier(&spec(InnerScheme::Joint, small, 9)).unwrap();
        let inner_large = trace_frontier(&spec(InnerScheme::Joint, large, 9)).unwrap();
        let cmp = region_contains(&inner_large, &inner_small, 1e-3);
        assert!(cmp.subset_holds, "violation {} at {:?}", cmp.max_violation, cmp.witness);
    }

    #[test]
    fn frontier_converges_under_grid_doubling() {
        let ch = canonical();
        let coarse = trace_frontier(&InnerBoundSpec {
            scheme: InnerScheme::Joint,
            channel: ch,
            search: SearchSettings { grid: 13, refine_rounds: 3 },
        })
        .unwrap();
        let fine = trace_frontier(&InnerBoundSpec {
            scheme: InnerScheme::Joint,
            channel: ch,
            search: SearchSettings { grid: 26, refine_rounds: 3 },
        })
        .unwrap();
        let d = crate::region::frontier_discrepancy(&coarse, &fine);
        assert!(d < 1e-4, "frontier moved by {d} bits under grid doubling");
    }
}
