//! The scalar Gaussian channel, its dirty-paper auxiliary parametrization,
//! and exact Gaussian mutual information via log-determinants.
//!
//! Channel model (unit noise at both receivers):
//!
//! ```text
//! Y1 = X1 + a*X2 + Z1        E[X1^2] <= P1
//! Y2 = b*X1 + X2 + Z2        E[X2^2] <= P2
//! ```
//!
//! Encoder 1 splits its power: a fraction `1 - alpha` rides coherently on
//! `X2` (cooperation), the rest is divided between a common codeword `X1c`
//! (fraction `beta`) and a private codeword `X1a`. Both codewords are
//! precoded against the known interference with binning coefficients
//! `lambda1`, `lambda2`:
//!
//! ```text
//! U1c = X1c + lambda1*X2
//! U1a = X1a + lambda2*X2
//! X1  = X1c + X1a + sqrt((1-alpha)*P1/P2) * X2
//! ```
//!
//! All second moments are assembled exactly from the independent sources
//! `(X2, X1c, X1a, Z1, Z2)`; no sampling is used outside of test oracles.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalues below `RANK_EPS * trace` are treated as zero when taking
/// determinants, so empty-codebook special cases project onto the
/// non-degenerate subspace instead of blowing up.
const RANK_EPS: f64 = 1e-10;

/// The scalar Gaussian interference channel `(a, b, P1, P2)`, unit noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianChannel {
    a: f64,
    b: f64,
    p1: f64,
    p2: f64,
}

impl GaussianChannel {
    pub fn new(a: f64, b: f64, p1: f64, p2: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && p1.is_finite() && p2.is_finite()) {
            return Err(Error::InvalidParameter("channel gains/powers must be finite".into()));
        }
        if p1 < 0.0 || p2 < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "powers must be nonnegative, got P1={p1}, P2={p2}"
            )));
        }
        Ok(Self { a, b, p1, p2 })
    }

    /// Build from squared gains as they appear in channel configs
    /// (`a^2`, `b^2`); the positive roots are used.
    pub fn from_squared_gains(a2: f64, b2: f64, p1: f64, p2: f64) -> Result<Self> {
        if a2 < 0.0 || b2 < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "squared gains must be nonnegative, got a2={a2}, b2={b2}"
            )));
        }
        Self::new(a2.sqrt(), b2.sqrt(), p1, p2)
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn p1(&self) -> f64 {
        self.p1
    }
    pub fn p2(&self) -> f64 {
        self.p2
    }
}

/// On-disk channel config: squared gains, as quoted in figure captions.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub a2: f64,
    pub b2: f64,
    pub p1: f64,
    pub p2: f64,
}

impl ChannelConfig {
    pub fn to_channel(self) -> Result<GaussianChannel> {
        GaussianChannel::from_squared_gains(self.a2, self.b2, self.p1, self.p2)
    }
}

impl From<GaussianChannel> for ChannelConfig {
    fn from(ch: GaussianChannel) -> Self {
        ChannelConfig { a2: ch.a * ch.a, b2: ch.b * ch.b, p1: ch.p1, p2: ch.p2 }
    }
}

/// Auxiliary-variable parameters of the dirty-paper scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpcParams {
    /// Fraction of `P1` not spent on cooperation, in `[0, 1]`.
    pub alpha: f64,
    /// Fraction of `alpha*P1` given to the common codeword, in `[0, 1]`.
    pub beta: f64,
    /// Binning coefficient of the common codeword (`>= 0`).
    pub lambda1: f64,
    /// Binning coefficient of the private codeword (`>= 0`).
    pub lambda2: f64,
}

impl DpcParams {
    pub fn new(alpha: f64, beta: f64, lambda1: f64, lambda2: f64) -> Result<Self> {
        let ok = (0.0..=1.0).contains(&alpha)
            && (0.0..=1.0).contains(&beta)
            && lambda1 >= 0.0
            && lambda2 >= 0.0
            && lambda1.is_finite()
            && lambda2.is_finite();
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "need 0<=alpha,beta<=1 and 0<=lambda1,lambda2, got \
                 alpha={alpha}, beta={beta}, lambda1={lambda1}, lambda2={lambda2}"
            )));
        }
        Ok(Self { alpha, beta, lambda1, lambda2 })
    }
}

/// The interference-canceling coefficient of dirty-paper coding: for a
/// codeword of power `power` facing interference with gain `gain` over
/// unit noise, `lambda = gain * power / (power + 1)` makes the channel
/// behave as if the interference were absent.
pub fn costa_coefficient(gain: f64, power: f64) -> f64 {
    gain * power / (power + 1.0)
}

/// Single-user AWGN capacity `C(x) = 0.5 * log2(1 + x)` in bits per use.
pub fn capacity_bits(snr: f64) -> f64 {
    0.5 * (1.0 + snr).log2()
}

/// A zero-mean jointly Gaussian vector identified by variable labels,
/// carrying its full covariance (second moments, in power units).
#[derive(Debug, Clone)]
pub struct JointGaussian {
    labels: Vec<String>,
    cov: DMatrix<f64>,
}

/// Incremental builder: declare independent zero-mean sources, then define
/// named variables as linear combinations of them. The covariance of the
/// named variables is `L * diag(vars) * L^T`, assembled exactly.
#[derive(Debug, Clone, Default)]
pub struct GaussianSystem {
    source_vars: Vec<f64>,
    names: Vec<String>,
    combos: Vec<Vec<f64>>,
}

/// Handle to a source declared on a [`GaussianSystem`].
#[derive(Debug, Clone, Copy)]
pub struct SourceId(usize);

impl GaussianSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_source(&mut self, variance: f64) -> Result<SourceId> {
        if !(variance.is_finite() && variance >= 0.0) {
            return Err(Error::InvalidParameter(format!("source variance must be >= 0, got {variance}")));
        }
        self.source_vars.push(variance);
        Ok(SourceId(self.source_vars.len() - 1))
    }

    pub fn define(&mut self, name: &str, terms: &[(f64, SourceId)]) -> Result<()> {
        if self.names.iter().any(|n| n == name) {
            return Err(Error::InvalidParameter(format!("duplicate variable name {name:?}")));
        }
        let mut row = vec![0.0; self.source_vars.len()];
        for &(c, SourceId(i)) in terms {
            if !c.is_finite() {
                return Err(Error::InvalidParameter(format!("coefficient for {name:?} not finite")));
            }
            row[i] += c;
        }
        self.names.push(name.to_string());
        self.combos.push(row);
        Ok(())
    }

    pub fn build(self) -> JointGaussian {
        let n = self.names.len();
        let ns = self.source_vars.len();
        let mut cov = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for k in 0..ns {
                    s += self.combos[i][k] * self.combos[j][k] * self.source_vars[k];
                }
                cov[(i, j)] = s;
                cov[(j, i)] = s;
            }
        }
        JointGaussian { labels: self.names, cov }
    }

    /// Draw one realization of the named variables (test oracle support).
    pub fn sample<R: rand::Rng>(&self, rng: &mut R, out: &mut [f64]) {
        let z: Vec<f64> = self
            .source_vars
            .iter()
            .map(|&v| {
                // Box-Muller; two uniforms per normal keeps this dependency-free.
                let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let u2: f64 = rng.gen();
                v.sqrt() * (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
            })
            .collect();
        for (o, combo) in out.iter_mut().zip(&self.combos) {
            *o = combo.iter().zip(&z).map(|(c, z)| c * z).sum();
        }
    }
}

impl JointGaussian {
    pub fn labels(&self) -> Vec<&str> {
        self.labels.iter().map(|s| s.as_str()).collect()
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn variance(&self, label: &str) -> Result<f64> {
        let i = self.index_of(label)?;
        Ok(self.cov[(i, i)])
    }

    pub fn covariance(&self, l1: &str, l2: &str) -> Result<f64> {
        let (i, j) = (self.index_of(l1)?, self.index_of(l2)?);
        Ok(self.cov[(i, j)])
    }

    fn indices(&self, labels: &[&str]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.index_of(l)).collect()
    }

    /// log2 pseudo-determinant and rank of the covariance sub-block.
    fn log2_pdet(&self, idx: &[usize]) -> (f64, usize) {
        let n = idx.len();
        let mut m = [0.0f64; MAX_DIM * MAX_DIM];
        assert!(n <= MAX_DIM, "mutual-information blocks are limited to {MAX_DIM} variables");
        let mut trace = 0.0;
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                m[r * n + c] = self.cov[(i, j)];
            }
            trace += self.cov[(i, i)];
        }
        if trace <= 0.0 {
            return (0.0, 0);
        }
        let mut eig = [0.0f64; MAX_DIM];
        sym_eigenvalues(&mut m, n, &mut eig);
        let thr = RANK_EPS * trace;
        let mut log2 = 0.0;
        let mut rank = 0;
        for &e in &eig[..n] {
            if e > thr {
                log2 += e.log2();
                rank += 1;
            }
        }
        (log2, rank)
    }

    /// Mutual information `I(A; B)` in bits:
    /// `0.5 * log2(det S_A * det S_B / det S_{A u B})`, with determinants
    /// taken over the non-degenerate subspace of each block. Zero-variance
    /// variables therefore drop out, and the result is clamped at zero.
    pub fn mi(&self, set_a: &[&str], set_b: &[&str]) -> Result<f64> {
        let (ia, ib) = self.checked_sets(set_a, set_b)?;
        Ok(self.mi_by_index(&ia, &ib))
    }

    fn mi_by_index(&self, ia: &[usize], ib: &[usize]) -> f64 {
        let (la, ra) = self.log2_pdet(ia);
        if ra == 0 {
            return 0.0;
        }
        let (lb, rb) = self.log2_pdet(ib);
        if rb == 0 {
            return 0.0;
        }
        let joint: Vec<usize> = ia.iter().chain(ib.iter()).copied().collect();
        let (lab, rab) = self.log2_pdet(&joint);
        let v = 0.5 * (la + lb - lab);
        if rab == ra + rb {
            // Non-degenerate across the cut: any negative value is round-off.
            debug_assert!(v > -1e-9, "round-off produced mi = {v}");
        }
        v.max(0.0)
    }

    /// Conditional mutual information `I(A; B | C) = I(A; B u C) - I(A; C)`,
    /// clamped at zero. An empty `C` reduces to [`JointGaussian::mi`].
    pub fn mi_cond(&self, set_a: &[&str], set_b: &[&str], set_c: &[&str]) -> Result<f64> {
        if set_c.is_empty() {
            return self.mi(set_a, set_b);
        }
        let (ia, ib) = self.checked_sets(set_a, set_b)?;
        let ic = self.indices(set_c)?;
        for &c in &ic {
            if ia.contains(&c) || ib.contains(&c) {
                return Err(Error::InvalidLabelSets(format!(
                    "conditioning set overlaps: {:?}",
                    self.labels[c]
                )));
            }
        }
        if ic.iter().any(|&i| ic.iter().filter(|&&j| j == i).count() > 1) {
            return Err(Error::InvalidLabelSets("duplicate label in conditioning set".into()));
        }
        let bc: Vec<usize> = ib.iter().chain(ic.iter()).copied().collect();
        Ok((self.mi_by_index(&ia, &bc) - self.mi_by_index(&ia, &ic)).max(0.0))
    }

    fn checked_sets(&self, set_a: &[&str], set_b: &[&str]) -> Result<(Vec<usize>, Vec<usize>)> {
        if set_a.is_empty() || set_b.is_empty() {
            return Err(Error::InvalidLabelSets("sets must be nonempty".into()));
        }
        let ia = self.indices(set_a)?;
        let ib = self.indices(set_b)?;
        let mut all: Vec<usize> = ia.iter().chain(ib.iter()).copied().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidLabelSets("sets must be disjoint without repeats".into()));
        }
        Ok((ia, ib))
    }

    /// Validate symmetry and positive semidefiniteness of the covariance.
    pub fn validate(&self) -> Result<()> {
        let n = self.labels.len();
        let scale = self.cov.diagonal().iter().fold(1.0f64, |a, &b| a.max(b.abs()));
        for i in 0..n {
            for j in 0..n {
                if (self.cov[(i, j)] - self.cov[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidParameter("covariance not symmetric".into()));
                }
            }
        }
        let trace: f64 = self.cov.diagonal().iter().sum();
        let mut m = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = self.cov[(i, j)];
            }
        }
        let min_eig = sym_eigenvalues_vec(&mut m, n).into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < -1e-9 * trace.max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "covariance not positive semidefinite (min eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(())
    }
}

const MAX_DIM: usize = 8;

/// Cyclic Jacobi eigenvalues of a symmetric matrix held row-major in `a`
/// (destroyed); results land in `out[..n]`. Enough accuracy for rank
/// thresholding at `RANK_EPS * trace`.
fn sym_eigenvalues(a: &mut [f64], n: usize, out: &mut [f64]) {
    let scale = (0..n).map(|i| a[i * n + i].abs()).fold(f64::MIN_POSITIVE, f64::max);
    for _ in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off <= (1e-16 * scale) * (1e-16 * scale) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    for i in 0..n {
        out[i] = a[i * n + i];
    }
}

/// Heap variant of [`sym_eigenvalues`] for matrices larger than the
/// mutual-information fast path.
fn sym_eigenvalues_vec(a: &mut [f64], n: usize) -> Vec<f64> {
    let mut chunks = vec![0.0f64; n];
    if n <= MAX_DIM {
        let mut buf = [0.0f64; MAX_DIM];
        sym_eigenvalues(a, n, &mut buf);
        chunks.copy_from_slice(&buf[..n]);
        return chunks;
    }
    // General case: same sweeps, heap scratch.
    let scale = (0..n).map(|i| a[i * n + i].abs()).fold(f64::MIN_POSITIVE, f64::max);
    for _ in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off <= (1e-16 * scale) * (1e-16 * scale) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    for i in 0..n {
        chunks[i] = a[i * n + i];
    }
    chunks
}

/// The variable labels produced by [`assemble_joint`], in order.
pub const DPC_LABELS: [&str; 8] = ["X2", "X1c", "X1a", "U1c", "U1a", "X1", "Y1", "Y2"];

/// Build the joint covariance of `(X2, X1c, X1a, U1c, U1a, X1, Y1, Y2)` for
/// the dirty-paper parametrization.
///
/// When `P2 = 0` the cooperation term `sqrt((1-alpha)P1/P2) * X2` is
/// ill-defined; the channel degenerates to a broadcast channel from
/// encoder 1, so `X2 = 0` and `alpha` is forced to 1 (all of `P1` goes to
/// the two codewords).
pub fn assemble_joint(ch: &GaussianChannel, p: &DpcParams) -> Result<JointGaussian> {
    DpcParams::new(p.alpha, p.beta, p.lambda1, p.lambda2)?;
    let alpha = if ch.p2 == 0.0 { 1.0 } else { p.alpha };
    let coop = if ch.p2 == 0.0 { 0.0 } else { ((1.0 - alpha) * ch.p1 / ch.p2).sqrt() };

    let mut sys = GaussianSystem::new();
    let x2 = sys.add_source(ch.p2)?;
    let x1c = sys.add_source(alpha * p.beta * ch.p1)?;
    let x1a = sys.add_source(alpha * (1.0 - p.beta) * ch.p1)?;
    let z1 = sys.add_source(1.0)?;
    let z2 = sys.add_source(1.0)?;

    sys.define("X2", &[(1.0, x2)])?;
    sys.define("X1c", &[(1.0, x1c)])?;
    sys.define("X1a", &[(1.0, x1a)])?;
    sys.define("U1c", &[(1.0, x1c), (p.lambda1, x2)])?;
    sys.define("U1a", &[(1.0, x1a), (p.lambda2, x2)])?;
    sys.define("X1", &[(1.0, x1c), (1.0, x1a), (coop, x2)])?;
    sys.define("Y1", &[(1.0, x1c), (1.0, x1a), (coop + ch.a, x2), (1.0, z1)])?;
    sys.define("Y2", &[(ch.b, x1c), (ch.b, x1a), (ch.b * coop + 1.0, x2), (1.0, z2)])?;
    Ok(sys.build())
}
