//! Capacity maximization over the diagonal input family, randomized audits of
//! the channel inequalities, and finite/asymptotic Hamming bounds.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::{
    parallel, quantum_fano_bound, run_channel, run_channel_full, run_on_purification,
    schumacher_fano_bound, transcript_from_state, Channel, ChannelTranscript, DilationChannel,
    KrausChannel,
};
use crate::depolarizing::{analytic_transcript, DepolParams};
use crate::entropy::{relative_entropy_binary, SubsystemEntropy};
use crate::error::{check_probability, Error, Result};
use crate::qmat::{partial_trace, random_density_with, DensityMatrix, SubsystemLayout};

/// Values this close to the running maximum count as ties.
const TIE_TOL: f64 = 1e-12;
const GRID_POINTS: usize = 101;
pub const DEFAULT_Q_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CapacityResult {
    pub value: f64,
    pub argmax_q: f64,
    pub evaluations: usize,
}

/// Maximizes `objective` over `q ∈ [0, 1]`: 101-point grid scan, ties broken
/// toward `q = 1/2`, then golden-section refinement inside the neighbouring
/// grid cells until the bracket is narrower than `tol`.
pub fn maximize_scalar<F>(mut objective: F, tol: f64) -> Result<CapacityResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tol} must be positive"
        )));
    }
    let mut evaluations = 0;
    let mut eval = |q: f64| -> Result<f64> {
        evaluations += 1;
        let v = objective(q)?;
        if !v.is_finite() {
            return Err(Error::NonFinite(q));
        }
        Ok(v)
    };

    let step = 1.0 / (GRID_POINTS - 1) as f64;
    let grid: Vec<(f64, f64)> = (0..GRID_POINTS)
        .map(|i| {
            let q = i as f64 * step;
            eval(q).map(|v| (q, v))
        })
        .collect::<Result<_>>()?;
    let top = grid
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let (best_q, best_v) = grid
        .iter()
        .filter(|&&(_, v)| v >= top - TIE_TOL)
        .min_by(|a, b| (a.0 - 0.5).abs().total_cmp(&(b.0 - 0.5).abs()))
        .copied()
        .expect("grid is nonempty");

    let (mut lo, mut hi) = ((best_q - step).max(0.0), (best_q + step).min(1.0));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = eval(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = eval(x1)?;
        }
    }
    let q_ref = 0.5 * (lo + hi);
    let v_ref = eval(q_ref)?;
    let (value, argmax_q) = if v_ref > best_v + TIE_TOL {
        (v_ref, q_ref)
    } else {
        (best_v, best_q)
    };
    Ok(CapacityResult {
        value,
        argmax_q,
        evaluations,
    })
}

/// Maximizes `I_Q` over a family of transcripts indexed by `q`.
pub fn maximize_capacity<F>(mut family: F, tol: f64) -> Result<CapacityResult>
where
    F: FnMut(f64) -> Result<ChannelTranscript>,
{
    maximize_scalar(|q| family(q).map(|t| t.mutual_entanglement), tol)
}

/// Closed-form depolarizing transcripts at fixed `p`.
pub fn depolarizing_family(p: f64) -> impl FnMut(f64) -> Result<ChannelTranscript> {
    move |q| DepolParams::new(p, q).map(analytic_transcript)
}

/// Simulated transcripts of `channel` on `ρ_Q = diag(q, 1 - q)`.
pub fn diagonal_family<C: Channel + ?Sized>(
    channel: &C,
) -> impl FnMut(f64) -> Result<ChannelTranscript> + '_ {
    move |q| {
        let rho = DensityMatrix::diagonal(&[q, 1.0 - q], SubsystemLayout::single(2))?;
        run_channel(channel, &rho)
    }
}

/// Inequalities checked by the audit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Inequality {
    /// `L_Q >= 0`.
    LossNonnegative,
    /// `L_Q <= 2S`.
    LossBelowTwiceInput,
    /// `L_Q <= 2S_e`.
    LossBelowTwiceExchange,
    /// `S(R:Q2) <= S(R:Q1)`.
    ForwardDataProcessing,
    /// `S(R:Q1) <= 2S`.
    ForwardDataProcessingBound,
    /// `S(R:Q2) <= S(RE1:Q2)`.
    ReverseDataProcessing,
    /// `S(RE1:Q2) <= 2S(Q2)`.
    ReverseDataProcessingBound,
    /// `L1 <= L12`.
    LossChaining,
    /// `S(E') <= H2[F] + (1-F) log2(d_Q d_R - 1)`.
    SchumacherFano,
    /// `L12 <= 2[H2[F] + (1-F) log2(d - 1)]`.
    QuantumFano,
    /// `S(R:Q1'Q2') <= S(RQ2:Q1') + S(RQ1:Q2')`.
    MutualSubadditivity,
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        write!(f, "{}", s.as_str().unwrap_or("?"))
    }
}

/// One evaluated inequality; negative slack means it failed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub inequality: Inequality,
    pub context: String,
    pub slack: f64,
}

impl Check {
    fn new(inequality: Inequality, context: &str, slack: f64) -> Self {
        Self {
            inequality,
            context: context.to_string(),
            slack,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub inequality: Inequality,
    pub trial: usize,
    pub context: String,
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub trials: usize,
    pub violations: Vec<Violation>,
    /// Most negative slack seen, or 0 when every slack was nonnegative.
    pub max_negative_slack: f64,
}

impl AuditReport {
    pub fn new() -> Self {
        Self {
            trials: 0,
            violations: Vec::new(),
            max_negative_slack: 0.0,
        }
    }

    /// Folds in the checks of one trial; a violation is recorded iff
    /// `slack < -tol`.
    pub fn record(&mut self, trial: usize, checks: &[Check], tol: f64) {
        self.trials += 1;
        for c in checks {
            if c.slack < self.max_negative_slack {
                self.max_negative_slack = c.slack;
            }
            if !(c.slack >= -tol) {
                self.violations.push(Violation {
                    inequality: c.inequality,
                    trial,
                    context: c.context.clone(),
                    slack: c.slack,
                });
            }
        }
    }

    pub fn merge(mut self, other: AuditReport) -> AuditReport {
        self.trials += other.trials;
        self.violations.extend(other.violations);
        self.max_negative_slack = self.max_negative_slack.min(other.max_negative_slack);
        self
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Default for AuditReport {
    fn default() -> Self {
        Self::new()
    }
}

/// Triangle bounds and the Schumacher Fano bound for a single transcript.
pub fn transcript_checks(
    t: &ChannelTranscript,
    d_q: usize,
    d_r: usize,
    context: &str,
) -> Vec<Check> {
    vec![
        Check::new(Inequality::LossNonnegative, context, t.loss),
        Check::new(
            Inequality::LossBelowTwiceInput,
            context,
            2.0 * t.s_in - t.loss,
        ),
        Check::new(
            Inequality::LossBelowTwiceExchange,
            context,
            2.0 * t.s_env - t.loss,
        ),
        Check::new(
            Inequality::SchumacherFano,
            context,
            schumacher_fano_bound(t.fidelity, d_q, d_r) - t.s_env,
        ),
    ]
}

/// Runs `ch1` then `ch2` on `rho_q`, purifying the intermediate input as
/// `R ⊗ E1`, and evaluates the data-processing, chaining and Fano bounds.
pub fn chain_checks<A, B>(ch1: &A, ch2: &B, rho_q: &DensityMatrix) -> Result<Vec<Check>>
where
    A: Channel + ?Sized,
    B: Channel + ?Sized,
{
    let first = run_channel_full(ch1, rho_q)?;
    let (d_q, d_r) = (first.input_dim(), first.reference_dim());
    let e1 = first.state.layout().dims()[2];
    let second = run_on_purification(ch2, &first.state)?;
    let d_q2 = second.input_dim();
    let e2 = second.state.layout().dims()[2];
    // [Q2, R, E1, E2]
    let full = second
        .state
        .relabel(SubsystemLayout::new(vec![d_q2, d_r, e1, e2])?)?;
    let overall = transcript_from_state(
        &first.input,
        &full.relabel(SubsystemLayout::new(vec![d_q2, d_r, e1 * e2])?)?,
    )?;

    let t1 = &first.transcript;
    let t2 = &second.transcript;
    let s_r_q2 = full.entropy_of(&[1])? + full.entropy_of(&[0])? - full.entropy_of(&[0, 1])?;
    let s_re1_q2 = t2.mutual_entanglement;
    let code_dim = (d_r * d_q2) as u64;

    let mut checks = transcript_checks(t1, d_q, d_r, "first leg");
    checks.extend(transcript_checks(t2, d_q2, d_r * e1, "second leg"));
    checks.extend(transcript_checks(&overall, d_q2, d_r, "chain"));
    checks.extend([
        Check::new(
            Inequality::ForwardDataProcessing,
            "chain",
            t1.mutual_entanglement - s_r_q2,
        ),
        Check::new(
            Inequality::ForwardDataProcessingBound,
            "chain",
            2.0 * t1.s_in - t1.mutual_entanglement,
        ),
        Check::new(
            Inequality::ReverseDataProcessing,
            "chain",
            s_re1_q2 - s_r_q2,
        ),
        Check::new(
            Inequality::ReverseDataProcessingBound,
            "chain",
            2.0 * t2.s_out - s_re1_q2,
        ),
        Check::new(Inequality::LossChaining, "chain", overall.loss - t1.loss),
        Check::new(
            Inequality::QuantumFano,
            "chain",
            quantum_fano_bound(overall.fidelity, code_dim)? - overall.loss,
        ),
    ]);
    Ok(checks)
}

/// `I_12 <= I_1 + I_2` for `ch1 ⊗ ch2` on a joint two-part input.
pub fn parallel_checks<A, B>(ch1: &A, ch2: &B, rho_12: &DensityMatrix) -> Result<Vec<Check>>
where
    A: Channel + ?Sized,
    B: Channel + ?Sized,
{
    let (d1, d2) = (ch1.input_dim(), ch2.input_dim());
    let rho = rho_12.relabel(SubsystemLayout::new(vec![d1, d2])?)?;
    let joint = parallel(ch1, ch2)?;
    let flat = rho.relabel(SubsystemLayout::single(d1 * d2))?;
    let t12 = run_channel(&joint, &flat)?;
    let t1 = run_channel(
        ch1,
        &partial_trace(&rho, &[0])?.relabel(SubsystemLayout::single(d1))?,
    )?;
    let t2 = run_channel(
        ch2,
        &partial_trace(&rho, &[1])?.relabel(SubsystemLayout::single(d2))?,
    )?;
    let mut checks = transcript_checks(&t12, d1 * d2, d1 * d2, "parallel");
    checks.push(Check::new(
        Inequality::MutualSubadditivity,
        "parallel",
        t1.mutual_entanglement + t2.mutual_entanglement - t12.mutual_entanglement,
    ));
    Ok(checks)
}

/// Draws random qubit dilations with four-dimensional environments and random
/// inputs; checks every inequality on single, chained and parallel uses.
pub fn audit_inequalities(seed: u64, trials: usize, tol: f64) -> Result<AuditReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "at least one trial is required".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AuditReport::new();
    for trial in 0..trials {
        let ch1 = DilationChannel::random(2, 4, &mut rng);
        let ch2 = DilationChannel::random(2, 4, &mut rng);
        let q: f64 = rng.random();
        let rho = DensityMatrix::diagonal(&[q, 1.0 - q], SubsystemLayout::single(2))?;
        let rho_12 = random_density_with(4, &mut rng);
        let mut checks = chain_checks(&ch1, &ch2, &rho)?;
        checks.extend(parallel_checks(&ch1, &ch2, &rho_12)?);
        report.record(trial, &checks, tol);
    }
    Ok(report)
}

/// `I_Q(wρ1 + (1-w)ρ2) - [w I_Q(ρ1) + (1-w) I_Q(ρ2)]`; nonnegative by concavity.
pub fn concavity_slack<C: Channel + ?Sized>(
    ch: &C,
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    w: f64,
) -> Result<f64> {
    concavity_gap(ch, rho1, rho2, w, |t| t.mutual_entanglement)
}

/// `w I_Q(ch1) + (1-w) I_Q(ch2) - I_Q(w ch1 + (1-w) ch2)` at a fixed input;
/// nonnegative by convexity in the channel.
pub fn convexity_slack(
    ch1: &KrausChannel,
    ch2: &KrausChannel,
    w: f64,
    rho: &DensityMatrix,
) -> Result<f64> {
    let mixed = KrausChannel::mixture(w, ch1, ch2)?;
    let i1 = run_channel(ch1, rho)?.mutual_entanglement;
    let i2 = run_channel(ch2, rho)?.mutual_entanglement;
    let im = run_channel(&mixed, rho)?.mutual_entanglement;
    Ok(w * i1 + (1.0 - w) * i2 - im)
}

fn concavity_gap<C, F>(
    ch: &C,
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    w: f64,
    value: F,
) -> Result<f64>
where
    C: Channel + ?Sized,
    F: Fn(&ChannelTranscript) -> f64,
{
    let w = check_probability(w)?;
    let mixed = DensityMatrix::mixture(&[w, 1.0 - w], &[rho1.clone(), rho2.clone()])?;
    let v1 = value(&run_channel(ch, rho1)?);
    let v2 = value(&run_channel(ch, rho2)?);
    let vm = value(&run_channel(ch, &mixed)?);
    Ok(vm - (w * v1 + (1.0 - w) * v2))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub instances: usize,
    pub min_concavity_slack: f64,
    pub min_convexity_slack: f64,
}

/// Concavity in the input and convexity in the channel on random qubit
/// channels, random inputs and random mixing weights.
pub fn axiom_spot_checks(seed: u64, instances: usize) -> Result<AxiomReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AxiomReport {
        instances,
        min_concavity_slack: f64::INFINITY,
        min_convexity_slack: f64::INFINITY,
    };
    for _ in 0..instances {
        let ch1 = crate::channel::kraus_from_dilation(&DilationChannel::random(2, 4, &mut rng))?;
        let ch2 = crate::channel::kraus_from_dilation(&DilationChannel::random(2, 4, &mut rng))?;
        let rho1 = random_density_with(2, &mut rng);
        let rho2 = random_density_with(2, &mut rng);
        let w: f64 = rng.random();
        let cc = concavity_slack(&ch1, &rho1, &rho2, w)?;
        let cv = convexity_slack(&ch1, &ch2, w, &rho1)?;
        report.min_concavity_slack = report.min_concavity_slack.min(cc);
        report.min_convexity_slack = report.min_convexity_slack.min(cv);
    }
    Ok(report)
}

/// Outcome of searching for instances where the coherent information
/// `I_e = S - L_Q` breaks concavity in the input or subadditivity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoherentInfoSearch {
    pub trials: usize,
    pub concavity_witnesses: usize,
    pub subadditivity_witnesses: usize,
    pub worst_concavity_slack: f64,
    pub worst_subadditivity_slack: f64,
}

/// Random search; a witness is an instance with slack below `-tol`. The same
/// instances never violate the corresponding `I_Q` inequalities.
pub fn coherent_info_search(seed: u64, trials: usize, tol: f64) -> Result<CoherentInfoSearch> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CoherentInfoSearch {
        trials,
        concavity_witnesses: 0,
        subadditivity_witnesses: 0,
        worst_concavity_slack: f64::INFINITY,
        worst_subadditivity_slack: f64::INFINITY,
    };
    for _ in 0..trials {
        let env_dim = rng.random_range(2..=4);
        let ch1 = DilationChannel::random(2, env_dim, &mut rng);
        let ch2 = DilationChannel::random(2, env_dim, &mut rng);
        let rho1 = random_density_with(2, &mut rng);
        let rho2 = random_density_with(2, &mut rng);
        let w: f64 = rng.random();
        let cc = concavity_gap(&ch1, &rho1, &rho2, w, |t| t.coherent_info)?;
        let rho_12 = random_density_with(4, &mut rng).relabel(SubsystemLayout::new(vec![2, 2])?)?;
        let t12 = run_channel(
            &parallel(&ch1, &ch2)?,
            &rho_12.relabel(SubsystemLayout::single(4))?,
        )?;
        let t1 = run_channel(
            &ch1,
            &partial_trace(&rho_12, &[0])?.relabel(SubsystemLayout::single(2))?,
        )?;
        let t2 = run_channel(
            &ch2,
            &partial_trace(&rho_12, &[1])?.relabel(SubsystemLayout::single(2))?,
        )?;
        let sa = t1.coherent_info + t2.coherent_info - t12.coherent_info;
        if cc < -tol {
            out.concavity_witnesses += 1;
        }
        if sa < -tol {
            out.subadditivity_witnesses += 1;
        }
        out.worst_concavity_slack = out.worst_concavity_slack.min(cc);
        out.worst_subadditivity_slack = out.worst_subadditivity_slack.min(sa);
    }
    Ok(out)
}

/// Which counting bound to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HammingMode {
    /// `2^k Σ C(n,i) <= 2^n`.
    Classical,
    /// `2^k Σ 3^i C(n,i) <= 2^n`.
    Quantum,
    /// `2^k Σ 3^i C(n,i) <= 2^{2n}`; the reference doubles the coding space.
    Entanglement,
}

impl HammingMode {
    fn syndrome_weight(self) -> u32 {
        match self {
            HammingMode::Classical => 1,
            _ => 3,
        }
    }

    fn space_exponent(self, n: u64) -> u64 {
        match self {
            HammingMode::Entanglement => 2 * n,
            _ => n,
        }
    }
}

impl FromStr for HammingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Self::Classical),
            "quantum" => Ok(Self::Quantum),
            "entanglement" => Ok(Self::Entanglement),
            other => Err(Error::InvalidArgument(format!(
                "unknown Hamming mode {other:?}"
            ))),
        }
    }
}

impl fmt::Display for HammingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HammingMode::Classical => "classical",
            HammingMode::Quantum => "quantum",
            HammingMode::Entanglement => "entanglement",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HammingQuery {
    pub n: u64,
    pub k: u64,
    pub t: u64,
    pub mode: HammingMode,
}

impl HammingQuery {
    pub fn new(n: u64, k: u64, t: u64, mode: HammingMode) -> Result<Self> {
        if n == 0 || k == 0 || t > n {
            return Err(Error::InvalidArgument(format!(
                "invalid Hamming query n={n}, k={k}, t={t}"
            )));
        }
        Ok(Self { n, k, t, mode })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HammingVerdict {
    pub holds: bool,
    /// `log2(rhs / lhs)`; zero at equality, negative when the bound fails.
    pub slack_log2: f64,
}

/// Row `n` of Pascal's triangle.
fn binomial_row(n: u64) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigUint::one());
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigUint::one());
        row = next;
    }
    row
}

/// `Σ_{i<=t} w^i C(n, i)` with `w` the number of error types per position.
pub fn syndrome_count(n: u64, t: u64, mode: HammingMode) -> BigUint {
    let row = binomial_row(n);
    let w = BigUint::from(mode.syndrome_weight());
    let mut power = BigUint::one();
    let mut total = BigUint::zero();
    for c in row.iter().take(t.min(n) as usize + 1) {
        total += c * &power;
        power *= &w;
    }
    total
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map_or(f64::INFINITY, f64::log2);
    }
    let shift = bits - 64;
    (x >> shift).to_f64().map_or(f64::INFINITY, f64::log2) + shift as f64
}

/// Exact finite-n bound check.
pub fn hamming_holds(query: &HammingQuery) -> Result<HammingVerdict> {
    let q = HammingQuery::new(query.n, query.k, query.t, query.mode)?;
    let syndromes = syndrome_count(q.n, q.t, q.mode);
    let space = q.mode.space_exponent(q.n);
    let lhs = &syndromes << q.k;
    let rhs = BigUint::one() << space;
    Ok(HammingVerdict {
        holds: lhs <= rhs,
        slack_log2: space as f64 - q.k as f64 - log2_big(&syndromes),
    })
}

/// Largest `k >= 1` for which the bound still holds, if any.
pub fn largest_message(n: u64, t: u64, mode: HammingMode) -> Option<u64> {
    let syndromes = syndrome_count(n, t, mode);
    // 2^k S <= 2^space  <=>  k <= space - ceil(log2 S)
    let ceil_log = (syndromes - BigUint::one()).bits();
    mode.space_exponent(n)
        .checked_sub(ceil_log)
        .filter(|&k| k >= 1)
}

/// Asymptotic rate limit as a relative entropy against the worst-case error
/// rate: `1 - H2(p)`, `1 - S_e(p)` or `2 - S_e(p)`.
pub fn rate_bound(p: f64, mode: HammingMode) -> Result<f64> {
    match mode {
        HammingMode::Classical => relative_entropy_binary(p, 0.5),
        HammingMode::Quantum => Ok(relative_entropy_binary(p, 0.75)? - 1.0),
        HammingMode::Entanglement => relative_entropy_binary(p, 0.75),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticRow {
    pub n: u64,
    pub t: u64,
    pub k: Option<u64>,
    pub rate: Option<f64>,
    pub limit: f64,
}

/// Finite-n rates `k/n` at `t = floor(p n)` next to the asymptotic limit.
pub fn asymptotic_consistency(
    p: f64,
    n_list: &[u64],
    mode: HammingMode,
) -> Result<Vec<AsymptoticRow>> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "error rate {p} must lie in (0, 1)"
        )));
    }
    let limit = rate_bound(p, mode)?;
    n_list
        .iter()
        .map(|&n| {
            if n < 10 {
                return Err(Error::InvalidArgument(format!("block length {n} < 10")));
            }
            let t = (p * n as f64).floor() as u64;
            let k = largest_message(n, t, mode);
            Ok(AsymptoticRow {
                n,
                t,
                k,
                rate: k.map(|k| k as f64 / n as f64),
                limit,
            })
        })
        .collect()
}
