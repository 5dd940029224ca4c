//! Completely positive trace-preserving maps in Kraus and unitary-dilation
//! form, and the entropy transcript of a single channel use.
//!
//! A run purifies the input `ρ_Q` into `|QR>`, attaches the environment in
//! its initial pure state and applies `U_QE ⊗ 1_R`. The resulting tripartite
//! pure state is kept with layout `[Q', R, E']`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::entropy::{h2, SubsystemEntropy};
use crate::error::{check_probability, Error, Result};
use crate::qmat::{
    apply_local, embed_operator, hermitian_eigen, random_unitary_with, ComplexMatrix,
    DensityMatrix, PureState, SubsystemLayout, C64, ONE, STATE_TOL, ZERO,
};

/// Tolerance for the entropy bookkeeping identities of a transcript.
pub const TRANSCRIPT_TOL: f64 = 1e-9;

/// Anything that can be run as a single-use channel.
pub trait Channel {
    fn input_dim(&self) -> usize;
    fn dilation(&self) -> Result<DilationChannel>;
    fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix>;
}

#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
struct KrausJson {
    kraus: Vec<Vec<[f64; 2]>>,
}

impl KrausChannel {
    /// Validates shapes and `Σ K† K = I` within 1e-10.
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = operators
            .first()
            .ok_or_else(|| Error::InvalidArgument("no Kraus operators".into()))?
            .rows();
        if operators.iter().any(|k| !k.is_square() || k.rows() != dim) {
            return Err(Error::DimensionMismatch(
                "Kraus operators must all be d x d".into(),
            ));
        }
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for k in &operators {
            sum = sum.add(&k.adjoint().matmul(k)?)?;
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if defect > STATE_TOL {
            return Err(Error::NotTracePreserving(defect));
        }
        Ok(Self { operators, dim })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            operators: vec![ComplexMatrix::identity(dim)],
            dim,
        }
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// Applies `ch1` with probability `w` and `ch2` otherwise.
    pub fn mixture(w: f64, ch1: &KrausChannel, ch2: &KrausChannel) -> Result<Self> {
        let w = check_probability(w)?;
        if ch1.dim != ch2.dim {
            return Err(Error::DimensionMismatch(
                "mixed channels differ in dimension".into(),
            ));
        }
        let a = C64::new(w.sqrt(), 0.0);
        let b = C64::new((1.0 - w).sqrt(), 0.0);
        let ops = ch1
            .operators
            .iter()
            .map(|k| k.scale(a))
            .chain(ch2.operators.iter().map(|k| k.scale(b)))
            .collect();
        Self::new(ops)
    }

    /// Parses `{"kraus": [[[re, im], ...], ...]}` with row-major d x d operators.
    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: KrausJson = serde_json::from_str(text)?;
        let ops = parsed
            .kraus
            .into_iter()
            .map(|entries| {
                let d = (entries.len() as f64).sqrt().round() as usize;
                if d == 0 || d * d != entries.len() {
                    return Err(Error::DimensionMismatch(format!(
                        "{} entries is not a square operator",
                        entries.len()
                    )));
                }
                ComplexMatrix::new(
                    d,
                    d,
                    entries.iter().map(|[re, im]| C64::new(*re, *im)).collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ops)
    }

    pub fn to_json(&self) -> String {
        let kraus = self
            .operators
            .iter()
            .map(|k| k.entries().iter().map(|z| [z.re, z.im]).collect())
            .collect();
        serde_json::to_string(&KrausJson { kraus }).expect("plain numbers serialize")
    }

    /// Stinespring dilation with one environment level per Kraus operator,
    /// environment starting in `|0>`.
    pub fn to_dilation(&self) -> Result<DilationChannel> {
        let d = self.dim;
        let n = self.operators.len();
        let total = d * n;
        // isometry columns V|i> = Σ_k K_k|i> ⊗ |k>, placed at column (i, 0)
        let mut columns: Vec<Option<Vec<C64>>> = vec![None; total];
        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(total);
        for i in 0..d {
            let mut v = vec![ZERO; total];
            for (k, op) in self.operators.iter().enumerate() {
                for a in 0..d {
                    v[a * n + k] = op[(a, i)];
                }
            }
            basis.push(v.clone());
            columns[i * n] = Some(v);
        }
        let mut free = (0..total).filter(|c| c % n != 0);
        for j in 0..total {
            if basis.len() == total {
                break;
            }
            let mut v = vec![ZERO; total];
            v[j] = ONE;
            for _ in 0..2 {
                for b in &basis {
                    let proj: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                    for (x, y) in v.iter_mut().zip(b) {
                        *x -= proj * y;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-6 {
                v.iter_mut().for_each(|z| *z /= norm);
                basis.push(v.clone());
                let slot = free.next().expect("free column available");
                columns[slot] = Some(v);
            }
        }
        let columns: Vec<Vec<C64>> = columns.into_iter().map(|c| c.expect("filled")).collect();
        let u = ComplexMatrix::from_columns(&columns)?;
        DilationChannel::new(u, n, PureState::basis(0, SubsystemLayout::single(n))?)
    }
}

impl Channel for KrausChannel {
    fn input_dim(&self) -> usize {
        self.dim
    }

    fn dilation(&self) -> Result<DilationChannel> {
        self.to_dilation()
    }

    fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch("input state dimension".into()));
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.operators {
            out = out.add(&k.matmul(rho.matrix())?.matmul(&k.adjoint())?)?;
        }
        DensityMatrix::from_parts(out, rho.layout().clone())
    }
}

/// Unitary `U_QE` with the environment starting in a fixed pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct DilationChannel {
    u_qe: ComplexMatrix,
    env_dim: usize,
    env_initial: PureState,
}

impl DilationChannel {
    pub fn new(u_qe: ComplexMatrix, env_dim: usize, env_initial: PureState) -> Result<Self> {
        if env_dim == 0 || !u_qe.is_square() || !u_qe.rows().is_multiple_of(env_dim) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} unitary with environment dimension {env_dim}",
                u_qe.rows(),
                u_qe.cols()
            )));
        }
        if env_initial.dim() != env_dim {
            return Err(Error::DimensionMismatch(
                "environment state dimension".into(),
            ));
        }
        if !u_qe.is_unitary(STATE_TOL) {
            return Err(Error::NotUnitary);
        }
        let env_initial = env_initial.relabel(SubsystemLayout::single(env_dim))?;
        Ok(Self {
            u_qe,
            env_dim,
            env_initial,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            u_qe: ComplexMatrix::identity(dim),
            env_dim: 1,
            env_initial: PureState::basis(0, SubsystemLayout::single(1)).expect("1-dim basis"),
        }
    }

    /// Random unitary on `Q ⊗ E` with the environment in `|0>`.
    pub fn random<R: Rng + ?Sized>(dim: usize, env_dim: usize, rng: &mut R) -> Self {
        let u = random_unitary_with(dim * env_dim, rng);
        let env = PureState::basis(0, SubsystemLayout::single(env_dim)).expect("valid index");
        Self::new(u, env_dim, env).expect("random unitary is unitary")
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.u_qe
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    pub fn env_initial(&self) -> &PureState {
        &self.env_initial
    }

    /// Applies `U_QE` to factor 0 (Q) and the last factor (E) of a state laid
    /// out as `[Q, ..., E]`.
    fn act_on(&self, psi: &PureState) -> Result<PureState> {
        let last = psi.layout().len() - 1;
        apply_local(&self.u_qe, psi, &[0, last])
    }
}

impl Channel for DilationChannel {
    fn input_dim(&self) -> usize {
        self.u_qe.rows() / self.env_dim
    }

    fn dilation(&self) -> Result<DilationChannel> {
        Ok(self.clone())
    }

    fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.input_dim() {
            return Err(Error::DimensionMismatch("input state dimension".into()));
        }
        let joint = rho
            .relabel(SubsystemLayout::single(rho.dim()))?
            .tensor(&self.env_initial.projector());
        let evolved = joint.conjugate_by(&self.u_qe)?;
        let reduced = crate::qmat::partial_trace(&evolved, &[0])?;
        reduced.relabel(rho.layout().clone())
    }
}

/// Kraus operators `K_k = <e_k| U |env>` in the computational environment basis.
/// Operators that vanish identically are dropped.
pub fn kraus_from_dilation(ch: &DilationChannel) -> Result<KrausChannel> {
    let basis: Vec<PureState> = (0..ch.env_dim)
        .map(|k| PureState::basis(k, SubsystemLayout::single(ch.env_dim)))
        .collect::<Result<_>>()?;
    kraus_from_dilation_in_basis(ch, &basis)
}

/// Kraus operators `K_k = <b_k| U |env>` for an orthonormal environment basis.
pub fn kraus_from_dilation_in_basis(
    ch: &DilationChannel,
    basis: &[PureState],
) -> Result<KrausChannel> {
    let d = ch.input_dim();
    let e = ch.env_dim;
    if basis.len() != e || basis.iter().any(|b| b.dim() != e) {
        return Err(Error::DimensionMismatch("environment basis".into()));
    }
    let env = ch.env_initial.amplitudes();
    let u = &ch.u_qe;
    let mut ops = Vec::with_capacity(e);
    for b in basis {
        let bk = b.amplitudes();
        let mut k = ComplexMatrix::zeros(d, d);
        for a in 0..d {
            for i in 0..d {
                let mut z = ZERO;
                for (kk, bkk) in bk.iter().enumerate() {
                    for (j, ej) in env.iter().enumerate() {
                        z += bkk.conj() * u[(a * e + kk, i * e + j)] * ej;
                    }
                }
                k[(a, i)] = z;
            }
        }
        if k.entries().iter().any(|z| z.norm() > 1e-15) {
            ops.push(k);
        }
    }
    KrausChannel::new(ops)
}

/// Purification `|QR> = Σ √p_i |v_i>_Q |i>_R` from the clamped
/// eigendecomposition; `R` has the dimension of `Q`.
pub fn purify(rho_q: &DensityMatrix) -> Result<PureState> {
    let d = rho_q.dim();
    let (values, vectors) = hermitian_eigen(rho_q.matrix())?;
    if let Some(&min) = values.last() {
        if min < -STATE_TOL {
            return Err(Error::NegativeEigenvalue(min));
        }
    }
    let clamped: Vec<f64> = values.iter().map(|&x| x.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    let mut amps = vec![ZERO; d * d];
    for (i, &p) in clamped.iter().enumerate() {
        let w = (p / total).sqrt();
        for a in 0..d {
            amps[a * d + i] = vectors[(a, i)] * w;
        }
    }
    // renormalize away the eigenvector rounding
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|z| *z /= norm);
    PureState::new(amps, SubsystemLayout::new(vec![d, d])?)
}

/// Entropies of one channel use, in bits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChannelTranscript {
    /// `S`, entropy of the input (equivalently of the reference).
    pub s_in: f64,
    /// `S'`, entropy of the output.
    pub s_out: f64,
    /// `S_e`, exchange entropy acquired by the environment.
    pub s_env: f64,
    /// `L_Q = S(R:E'|Q')`.
    pub loss: f64,
    /// `I_Q = S(R:Q')`.
    pub mutual_entanglement: f64,
    /// `I_e = S(R|E')`.
    pub coherent_info: f64,
    /// Entanglement fidelity `<QR|ρ_Q'R|QR>`.
    pub fidelity: f64,
}

impl ChannelTranscript {
    /// Checks `L = S_e + S - S'`, `I_Q + L = 2S`, `I_e = S - L` and
    /// `0 <= L <= 2 min(S, S_e)`.
    pub fn check_identities(&self, tol: f64) -> std::result::Result<(), String> {
        let checks = [
            (
                "L_Q = S_e + S - S'",
                self.loss - (self.s_env + self.s_in - self.s_out),
            ),
            (
                "I_Q + L_Q = 2S",
                self.mutual_entanglement + self.loss - 2.0 * self.s_in,
            ),
            (
                "I_e = S - L_Q",
                self.coherent_info - (self.s_in - self.loss),
            ),
        ];
        for (name, gap) in checks {
            if !(gap.abs() <= tol) {
                return Err(format!("{name} off by {gap:e}"));
            }
        }
        let upper = 2.0 * self.s_in.min(self.s_env);
        if !(self.loss >= -tol && self.loss <= upper + tol) {
            return Err(format!("loss {} outside [0, {upper}]", self.loss));
        }
        Ok(())
    }
}

/// Transcript together with the final `[Q', R, E']` pure state.
#[derive(Clone, Debug)]
pub struct ChannelRun {
    pub transcript: ChannelTranscript,
    pub input: PureState,
    pub state: PureState,
}

impl ChannelRun {
    pub fn input_dim(&self) -> usize {
        self.state.layout().dims()[0]
    }

    pub fn reference_dim(&self) -> usize {
        self.state.layout().dims()[1]
    }
}

pub fn run_channel<C: Channel + ?Sized>(
    ch: &C,
    rho_q: &DensityMatrix,
) -> Result<ChannelTranscript> {
    run_channel_full(ch, rho_q).map(|r| r.transcript)
}

/// Purifies `rho_q` and runs the channel, keeping the tripartite state.
pub fn run_channel_full<C: Channel + ?Sized>(ch: &C, rho_q: &DensityMatrix) -> Result<ChannelRun> {
    if rho_q.dim() != ch.input_dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}-dimensional input for a {}-dimensional channel",
            rho_q.dim(),
            ch.input_dim()
        )));
    }
    run_on_purification(ch, &purify(rho_q)?)
}

/// Runs the channel on an explicit purification whose first factor is `Q`;
/// all remaining factors together act as the reference.
pub fn run_on_purification<C: Channel + ?Sized>(ch: &C, psi_qr: &PureState) -> Result<ChannelRun> {
    let dil = ch.dilation()?;
    let d_q = psi_qr.layout().dims()[0];
    if d_q != dil.input_dim() {
        return Err(Error::DimensionMismatch(format!(
            "{d_q}-dimensional input for a {}-dimensional channel",
            dil.input_dim()
        )));
    }
    let d_r = psi_qr.dim() / d_q;
    let input = psi_qr.relabel(SubsystemLayout::new(vec![d_q, d_r])?)?;
    let env = dil.env_initial.clone();
    let joint = input.tensor(&env);
    let state = dil.act_on(&joint)?;
    let transcript = transcript_from_state(&input, &state)?;
    Ok(ChannelRun {
        transcript,
        input,
        state,
    })
}

/// Builds the transcript of a `[Q', R, E']` pure state produced from `input`.
pub fn transcript_from_state(input: &PureState, state: &PureState) -> Result<ChannelTranscript> {
    let s_in = state.entropy_of(&[1])?;
    let s_out = state.entropy_of(&[0])?;
    let s_env = state.entropy_of(&[2])?;
    let s_qr = state.entropy_of(&[0, 1])?;
    let s_qe = state.entropy_of(&[0, 2])?;
    let s_re = state.entropy_of(&[1, 2])?;
    let rho_qr = state.reduced(&[0, 1])?;
    let fidelity = rho_qr.expectation(input.amplitudes())?.clamp(0.0, 1.0);
    let transcript = ChannelTranscript {
        s_in,
        s_out,
        s_env,
        // S(R:E'|Q') with S(Q'R'E') = 0
        loss: s_qr + s_qe - s_out,
        mutual_entanglement: s_in + s_out - s_qr,
        coherent_info: s_re - s_env,
        fidelity,
    };
    transcript
        .check_identities(TRANSCRIPT_TOL)
        .map_err(Error::TranscriptIdentity)?;
    Ok(transcript)
}

/// `<QR| ρ_out |QR>` where `rho_qr_in` must be a pure-state projector.
pub fn entanglement_fidelity(rho_qr_in: &DensityMatrix, rho_qr_out: &DensityMatrix) -> Result<f64> {
    if rho_qr_in.dim() != rho_qr_out.dim() {
        return Err(Error::DimensionMismatch(
            "fidelity between different spaces".into(),
        ));
    }
    let (values, vectors) = hermitian_eigen(rho_qr_in.matrix())?;
    if (values[0] - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidState(format!(
            "input is not pure (largest eigenvalue {})",
            values[0]
        )));
    }
    let f = rho_qr_out.expectation(&vectors.column(0))?;
    if !(-STATE_TOL..=1.0 + STATE_TOL).contains(&f) {
        return Err(Error::InvalidState(format!("fidelity {f} outside [0, 1]")));
    }
    Ok(f.clamp(0.0, 1.0))
}

/// `ch2 ∘ ch1` as one dilation over the environment `E1 ⊗ E2`.
pub fn chain<A: Channel + ?Sized, B: Channel + ?Sized>(
    ch1: &A,
    ch2: &B,
) -> Result<DilationChannel> {
    let d1 = ch1.dilation()?;
    let d2 = ch2.dilation()?;
    if d1.input_dim() != d2.input_dim() {
        return Err(Error::DimensionMismatch(format!(
            "chaining a {}-dimensional output into a {}-dimensional input",
            d1.input_dim(),
            d2.input_dim()
        )));
    }
    let layout = SubsystemLayout::new(vec![d1.input_dim(), d1.env_dim, d2.env_dim])?;
    let u1 = embed_operator(&d1.u_qe, &layout, &[0, 1])?;
    let u2 = embed_operator(&d2.u_qe, &layout, &[0, 2])?;
    let env = d1.env_initial.tensor(&d2.env_initial);
    let env_dim = d1.env_dim * d2.env_dim;
    DilationChannel::new(
        u2.matmul(&u1)?,
        env_dim,
        env.relabel(SubsystemLayout::single(env_dim))?,
    )
}

/// `ch1 ⊗ ch2` on `Q1 ⊗ Q2` with environment `E1 ⊗ E2`.
pub fn parallel<A: Channel + ?Sized, B: Channel + ?Sized>(
    ch1: &A,
    ch2: &B,
) -> Result<DilationChannel> {
    let d1 = ch1.dilation()?;
    let d2 = ch2.dilation()?;
    let layout =
        SubsystemLayout::new(vec![d1.input_dim(), d2.input_dim(), d1.env_dim, d2.env_dim])?;
    let u1 = embed_operator(&d1.u_qe, &layout, &[0, 2])?;
    let u2 = embed_operator(&d2.u_qe, &layout, &[1, 3])?;
    let env = d1.env_initial.tensor(&d2.env_initial);
    let env_dim = d1.env_dim * d2.env_dim;
    DilationChannel::new(
        u2.matmul(&u1)?,
        env_dim,
        env.relabel(SubsystemLayout::single(env_dim))?,
    )
}

/// Fano inequality for a quantum code: `2 [H2(F) + (1 - F) log2(d - 1)]`.
pub fn quantum_fano_bound(fidelity: f64, code_dim: u64) -> Result<f64> {
    let f = check_probability(fidelity)?;
    if code_dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "code dimension {code_dim} < 2"
        )));
    }
    Ok(2.0 * (h2(f) + (1.0 - f) * ((code_dim - 1) as f64).log2()))
}

/// Schumacher's bound on the exchange entropy:
/// `H2(F) + (1 - F) log2(d_Q d_R - 1)`.
pub fn schumacher_fano_bound(fidelity: f64, d_q: usize, d_r: usize) -> f64 {
    let f = fidelity.clamp(0.0, 1.0);
    let d = (d_q * d_r) as f64;
    h2(f) + (1.0 - f) * (d - 1.0).max(1.0).log2()
}
