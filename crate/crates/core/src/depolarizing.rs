//! The depolarizing qubit channel worked out in full: q-basis states, the
//! four-dimensional environment realization, closed-form entropies for
//! quantum and classical use, the dephasing variant and noisy superdense
//! coding.
//!
//! All two-qubit states are ordered `|Q R>` (Q leftmost). Environment basis
//! states reuse the q-basis on a four-dimensional space.

use serde::Serialize;

use crate::channel::{
    run_on_purification, ChannelRun, ChannelTranscript, DilationChannel, KrausChannel,
};
use crate::entropy::{h2, shannon, ProbVector, SubsystemEntropy};
use crate::error::{check_probability, Error, Result};
use crate::qmat::{
    apply_local, pauli, tensor, ComplexMatrix, DensityMatrix, PureState, SubsystemLayout, C64,
};

/// `p = 3/4` is the fully depolarizing point.
pub const FULL_DEPOLARIZATION: f64 = 0.75;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DepolParams {
    /// Error probability.
    pub p: f64,
    /// Input mixing parameter, `ρ_Q = diag(q, 1 - q)`.
    pub q: f64,
}

impl DepolParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        Ok(Self {
            p: check_probability(p)?,
            q: check_probability(q)?,
        })
    }
}

/// The q-basis in the order `(Φ⁻, Φ⁺, Ψ⁻, Ψ⁺)`.
#[derive(Clone, Debug)]
pub struct QBasis {
    pub phi_minus: PureState,
    pub phi_plus: PureState,
    pub psi_minus: PureState,
    pub psi_plus: PureState,
}

impl QBasis {
    pub fn states(&self) -> [&PureState; 4] {
        [
            &self.phi_minus,
            &self.phi_plus,
            &self.psi_minus,
            &self.psi_plus,
        ]
    }
}

fn two_qubits() -> SubsystemLayout {
    SubsystemLayout::new(vec![2, 2]).expect("valid layout")
}

pub fn q_basis(q: f64) -> Result<QBasis> {
    let q = check_probability(q)?;
    let a = (1.0 - q).sqrt();
    let b = q.sqrt();
    // amplitudes over |00>, |01>, |10>, |11>
    let state = |v: [f64; 4]| PureState::from_real(&v, two_qubits());
    Ok(QBasis {
        phi_minus: state([a, 0.0, 0.0, -b])?,
        phi_plus: state([b, 0.0, 0.0, a])?,
        psi_minus: state([0.0, -b, a, 0.0])?,
        psi_plus: state([0.0, a, b, 0.0])?,
    })
}

/// Dilation of the depolarizing channel together with the initial `|Ψ⁻(q)>`.
#[derive(Clone, Debug)]
pub struct DepolarizingSetup {
    pub params: DepolParams,
    pub channel: DilationChannel,
    pub initial: PureState,
    /// q-basis used for the environment projectors.
    pub env_basis: QBasis,
}

impl DepolarizingSetup {
    /// Environment basis in the branch order `1, σ_x, -iσ_y, σ_z`.
    pub fn branch_basis(&self) -> Vec<PureState> {
        let b = &self.env_basis;
        vec![
            b.psi_minus.clone(),
            b.phi_minus.clone(),
            b.phi_plus.clone(),
            b.psi_plus.clone(),
        ]
    }

    pub fn run(&self) -> Result<ChannelRun> {
        run_on_purification(&self.channel, &self.initial)
    }
}

/// `U_QE = 1⊗P_Ψ⁻ + σ_x⊗P_Φ⁻ + (-iσ_y)⊗P_Φ⁺ + σ_z⊗P_Ψ⁺` with the environment in
/// `√(1-p)|Ψ⁻> + √(p/3)(|Φ⁻> + |Φ⁺> + |Ψ⁺>)`, all on the q-basis.
pub fn build_dilation(params: DepolParams) -> Result<DepolarizingSetup> {
    let basis = q_basis(params.q)?;
    let branches = [
        (ComplexMatrix::identity(2), &basis.psi_minus),
        (pauli::x(), &basis.phi_minus),
        (pauli::minus_i_y(), &basis.phi_plus),
        (pauli::z(), &basis.psi_plus),
    ];
    let mut u = ComplexMatrix::zeros(8, 8);
    for (op, state) in &branches {
        let proj = ComplexMatrix::outer(state.amplitudes(), state.amplitudes());
        u = u.add(&tensor(op, &proj))?;
    }
    let c0 = (1.0 - params.p).sqrt();
    let c1 = (params.p / 3.0).sqrt();
    let env: Vec<C64> = (0..4)
        .map(|i| {
            c0 * basis.psi_minus.amplitudes()[i]
                + c1 * (basis.phi_minus.amplitudes()[i]
                    + basis.phi_plus.amplitudes()[i]
                    + basis.psi_plus.amplitudes()[i])
        })
        .collect();
    let env = PureState::new(env, SubsystemLayout::single(4))?;
    let channel = DilationChannel::new(u, 4, env)?;
    Ok(DepolarizingSetup {
        params,
        channel,
        initial: basis.psi_minus.clone(),
        env_basis: basis,
    })
}

/// The four-branch Kraus form `{√(1-p) 1, √(p/3) σ_x, √(p/3) σ_z, √(p/3) σ_x σ_z}`.
pub fn depolarizing_kraus(p: f64) -> Result<KrausChannel> {
    let p = check_probability(p)?;
    let s = |x: f64| C64::new(x.sqrt(), 0.0);
    let xz = pauli::x().matmul(&pauli::z())?;
    KrausChannel::new(vec![
        ComplexMatrix::identity(2).scale(s(1.0 - p)),
        pauli::x().scale(s(p / 3.0)),
        pauli::z().scale(s(p / 3.0)),
        xz.scale(s(p / 3.0)),
    ])
}

/// `Δ = [(1 - 2p/3)² - (16/3) p(1-p) q(1-q)]^{1/2}`, radicand clamped at 0.
pub fn delta(p: f64, q: f64) -> f64 {
    let a = 1.0 - 2.0 * p / 3.0;
    (a * a - 16.0 / 3.0 * p * (1.0 - p) * q * (1.0 - q))
        .max(0.0)
        .sqrt()
}

/// Spectrum of `ρ_Q'R'`, whose entropy is the exchange entropy `S_e(p, q)`.
pub fn output_spectrum(params: DepolParams) -> [f64; 4] {
    let DepolParams { p, q } = params;
    let d = delta(p, q);
    let a = 1.0 - 2.0 * p / 3.0;
    [
        2.0 * p / 3.0 * (1.0 - q),
        2.0 * p * q / 3.0,
        0.5 * (a + d),
        0.5 * (a - d),
    ]
}

/// Flip-adjusted output population `q + (2p/3)(1 - 2q)`.
fn output_population(p: f64, q: f64) -> f64 {
    q + 2.0 * p / 3.0 * (1.0 - 2.0 * q)
}

/// Transcript from closed forms only.
pub fn analytic_transcript(params: DepolParams) -> ChannelTranscript {
    let DepolParams { p, q } = params;
    let s_in = h2(q);
    let s_out = h2(output_population(p, q));
    let s_env = shannon(&output_spectrum(params));
    let loss = s_in - s_out + s_env;
    let one_minus_2q = 1.0 - 2.0 * q;
    ChannelTranscript {
        s_in,
        s_out,
        s_env,
        loss,
        mutual_entanglement: 2.0 * s_in - loss,
        coherent_info: s_in - loss,
        fidelity: 1.0 - p + p / 3.0 * one_minus_2q * one_minus_2q,
    }
}

/// `C_Q(p) = 2 - H2[p] - p log2 3`.
pub fn quantum_capacity(p: f64) -> f64 {
    2.0 - h2(p) - p * 3f64.log2()
}

/// Beyond `p = 3/4` the capacity formula is evaluated but no longer physical
/// for the depolarizing family.
pub fn beyond_full_depolarization(p: f64) -> bool {
    p > FULL_DEPOLARIZATION
}

/// `(I, L)` for classical use, where `I = S(Q':R)` and `L` is the classical loss.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassicalUse {
    pub mutual_info: f64,
    pub classical_loss: f64,
}

/// Closed-form classical use: `L = H[four-term] - H2[q']`, `I = H2[q] - L`.
pub fn classical_use_transcript(params: DepolParams) -> ClassicalUse {
    let DepolParams { p, q } = params;
    let f = 2.0 * p / 3.0;
    let joint = shannon(&[f * (1.0 - q), f * q, (1.0 - f) * (1.0 - q), (1.0 - f) * q]);
    let loss = joint - h2(output_population(p, q));
    ClassicalUse {
        mutual_info: h2(q) - loss,
        classical_loss: loss,
    }
}

/// `|Ψ⁻_X(q)> = √(1-q)|110> - √q|001>` on `Q ⊗ X ⊗ R`.
pub fn ancilla_input(q: f64) -> Result<PureState> {
    let q = check_probability(q)?;
    let mut amps = [0.0; 8];
    amps[0b110] = (1.0 - q).sqrt();
    amps[0b001] = -q.sqrt();
    PureState::from_real(&amps, SubsystemLayout::new(vec![2, 2, 2])?)
}

/// Classical use of an arbitrary qubit dilation: `Q` is first copied into the
/// ancilla `X`, then `U_QE` acts on `Q ⊗ E` of the 32-dimensional `Q X R E`
/// state. `I = S(Q':R)` and `L = S(R|Q')` after tracing out `X` and `E`.
pub fn classical_use_simulated(channel: &DilationChannel, q: f64) -> Result<ClassicalUse> {
    if channel.unitary().rows() / channel.env_dim() != 2 {
        return Err(Error::DimensionMismatch(
            "classical use needs a qubit channel".into(),
        ));
    }
    let start = ancilla_input(q)?.tensor(&channel.env_initial().clone());
    let state = apply_local(channel.unitary(), &start, &[0, 3])?;
    let rho_qr = state.reduced(&[0, 2])?;
    let s_q = rho_qr.entropy_of(&[0])?;
    let s_r = rho_qr.entropy_of(&[1])?;
    let s_qr = rho_qr.entropy_of(&[0, 1])?;
    Ok(ClassicalUse {
        mutual_info: s_q + s_r - s_qr,
        classical_loss: s_qr - s_q,
    })
}

/// `C = 1 - H2[2p/3]`, the binary symmetric channel with flip probability `2p/3`.
pub fn classical_capacity(p: f64) -> f64 {
    1.0 - h2(2.0 * p / 3.0)
}

/// Kholevo quantity `S(Σ p_i ρ_i) - Σ p_i S(ρ_i)`.
pub fn kholevo_chi(probs: &ProbVector, outputs: &[DensityMatrix]) -> Result<f64> {
    if probs.len() != outputs.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} probabilities for {} states",
            probs.len(),
            outputs.len()
        )));
    }
    let average = DensityMatrix::mixture(probs.probs(), outputs)?;
    let mut chi = crate::entropy::von_neumann_entropy(&average)?;
    for (p, rho) in probs.probs().iter().zip(outputs) {
        if *p > 0.0 {
            chi -= p * crate::entropy::von_neumann_entropy(rho)?;
        }
    }
    Ok(chi)
}

/// Ensemble `{q: |0>, 1-q: |1>}` passed through the channel.
pub fn classical_ensemble<C: crate::channel::Channel + ?Sized>(
    channel: &C,
    q: f64,
) -> Result<(ProbVector, Vec<DensityMatrix>)> {
    let q = check_probability(q)?;
    let probs = ProbVector::new(vec![q, 1.0 - q])?;
    let l = SubsystemLayout::single(2);
    let outputs = [[1.0, 0.0], [0.0, 1.0]]
        .iter()
        .map(|d| channel.apply(&DensityMatrix::diagonal(d, l.clone())?))
        .collect::<Result<Vec<_>>>()?;
    Ok((probs, outputs))
}

/// Dephasing channel `{√(1-p) 1, √p σ_z}`.
pub fn dephasing_kraus(p: f64) -> Result<KrausChannel> {
    let p = check_probability(p)?;
    KrausChannel::new(vec![
        ComplexMatrix::identity(2).scale(C64::new((1.0 - p).sqrt(), 0.0)),
        pauli::z().scale(C64::new(p.sqrt(), 0.0)),
    ])
}

/// `I_Q(p) = 2 - H2[p]` for the dephasing channel on a maximally mixed input.
pub fn dephasing_mutual(p: f64) -> f64 {
    2.0 - h2(p)
}

/// Runs the dephasing Kraus pair on the maximally mixed qubit.
pub fn dephasing_mutual_simulated(p: f64) -> Result<f64> {
    let t = crate::channel::run_channel(&dephasing_kraus(p)?, &DensityMatrix::maximally_mixed(2))?;
    Ok(t.mutual_entanglement)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SuperdenseReport {
    /// `S(R:Q'|C)`.
    pub conditional_mutual: f64,
    /// `χ = S(RQ':C)`.
    pub kholevo_chi: f64,
    pub p: f64,
}

/// Classical bits `C` select one of the four Bell states on `QR`; `Q` passes
/// through the depolarizing channel. Works on `ρ_CQ'R`, with `C` leftmost.
pub fn superdense_scenario(p: f64) -> Result<SuperdenseReport> {
    let p = check_probability(p)?;
    let bell = q_basis(0.5)?;
    let channel = depolarizing_kraus(p)?;
    let mut joint = ComplexMatrix::zeros(16, 16);
    for (c, state) in bell.states().iter().enumerate() {
        let out = apply_on_first(&channel, &state.projector())?;
        for i in 0..4 {
            for j in 0..4 {
                joint[(4 * c + i, 4 * c + j)] = out[(i, j)] * 0.25;
            }
        }
    }
    let rho = DensityMatrix::new(joint, SubsystemLayout::new(vec![4, 2, 2])?)?;
    // factors: 0 = C, 1 = Q', 2 = R
    let s_c = rho.entropy_of(&[0])?;
    let s_cq = rho.entropy_of(&[0, 1])?;
    let s_cr = rho.entropy_of(&[0, 2])?;
    let s_qr = rho.entropy_of(&[1, 2])?;
    let s_all = rho.entropy_of(&[0, 1, 2])?;
    Ok(SuperdenseReport {
        conditional_mutual: s_cr + s_cq - s_c - s_all,
        kholevo_chi: s_qr + s_c - s_all,
        p,
    })
}

/// Applies a qubit Kraus channel to the first factor of a two-qubit state.
fn apply_on_first(channel: &KrausChannel, rho: &DensityMatrix) -> Result<ComplexMatrix> {
    let mut out = ComplexMatrix::zeros(4, 4);
    for k in channel.operators() {
        let lifted = tensor(k, &ComplexMatrix::identity(2));
        out = out.add(&lifted.matmul(rho.matrix())?.matmul(&lifted.adjoint())?)?;
    }
    Ok(out)
}

/// Root of `f` on `[a, b]` by bisection until the bracket is below `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (a, b);
    let (mut f_lo, f_hi) = (f(lo), f(hi));
    if !f_lo.is_finite() || !f_hi.is_finite() {
        return Err(Error::NonFinite(if f_lo.is_finite() { hi } else { lo }));
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange);
    }
    while (hi - lo).abs() > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Error rate at which the quantum capacity drops to one bit, the limit of
/// noisy superdense coding.
pub fn superdense_threshold() -> Result<f64> {
    bisect(
        |p| quantum_capacity(p) - 1.0,
        0.0,
        FULL_DEPOLARIZATION,
        1e-12,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{kraus_from_dilation_in_basis, run_channel, Channel};
    use crate::entropy::venn3;
    use crate::qmat::{hermitian_eigenvalues, random_density_with, ZERO};
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    fn params(p: f64, q: f64) -> DepolParams {
        DepolParams::new(p, q).unwrap()
    }

    #[test]
    fn q_basis_is_orthonormal() {
        for q in [0.0, 0.3, 0.5, 1.0] {
            let b = q_basis(q).unwrap();
            let s = b.states();
            for i in 0..4 {
                for j in 0..4 {
                    let g = s[i].inner(s[j]);
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((g - C64::new(expected, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn q_basis_limits() {
        let half = 0.5f64.sqrt();
        let b = q_basis(0.5).unwrap();
        // Bell states at q = 1/2
        let amps: Vec<f64> = b.phi_plus.amplitudes().iter().map(|z| z.re).collect();
        assert_eq!(amps, vec![half, 0.0, 0.0, half]);
        let amps: Vec<f64> = b.psi_minus.amplitudes().iter().map(|z| z.re).collect();
        assert_eq!(amps, vec![0.0, -half, half, 0.0]);
        // product states at q = 0
        let b = q_basis(0.0).unwrap();
        for s in b.states() {
            let v = crate::entropy::venn2(s, &[0], &[1]).unwrap();
            close(v.mutual, 0.0, 1e-12);
        }
    }

    #[test]
    fn pauli_relations_on_psi_minus() {
        let q = 0.3;
        let b = q_basis(q).unwrap();
        let b1 = q_basis(1.0 - q).unwrap();
        let act = |op: ComplexMatrix| apply_local(&op, &b.psi_minus, &[0]).unwrap();
        // equalities hold up to an overall sign
        let check = |a: &PureState, e: &PureState, sign: f64| {
            for (x, y) in a.amplitudes().iter().zip(e.amplitudes()) {
                assert!((x - sign * y).norm() < 1e-12);
            }
        };
        check(&act(pauli::x()), &b.phi_minus, 1.0);
        check(&act(pauli::minus_i_y()), &b1.phi_plus, -1.0);
        check(&act(pauli::z()), &b1.psi_plus, -1.0);
    }

    #[test]
    fn dilation_is_unitary_and_reproduces_output_state() {
        let prm = params(0.3, 0.25);
        let setup = build_dilation(prm).unwrap();
        assert!(setup.channel.unitary().is_unitary(1e-10));
        let run = setup.run().unwrap();
        // expected |Q'R'E'> from the four branches
        let b = q_basis(prm.q).unwrap();
        let b1 = q_basis(1.0 - prm.q).unwrap();
        let c0 = (1.0 - prm.p).sqrt();
        let c1 = (prm.p / 3.0).sqrt();
        let terms = [
            (c0, &b.psi_minus, &b.psi_minus),
            (c1, &b.phi_minus, &b.phi_minus),
            (-c1, &b1.phi_plus, &b.phi_plus),
            (-c1, &b1.psi_plus, &b.psi_plus),
        ];
        let mut expected = vec![ZERO; 16];
        for (c, qr, e) in terms {
            for (i, x) in qr.amplitudes().iter().enumerate() {
                for (j, y) in e.amplitudes().iter().enumerate() {
                    expected[i * 4 + j] += c * x * y;
                }
            }
        }
        for (a, e) in run.state.amplitudes().iter().zip(&expected) {
            assert!((a - e).norm() < 1e-12);
        }
    }

    #[test]
    fn traced_environment_matches_closed_form_rho_qr() {
        let prm = params(0.3, 0.25);
        let run = build_dilation(prm).unwrap().run().unwrap();
        let rho = run.state.reduced(&[0, 1]).unwrap();
        let b = q_basis(prm.q).unwrap();
        let b1 = q_basis(1.0 - prm.q).unwrap();
        let proj = |s: &PureState| ComplexMatrix::outer(s.amplitudes(), s.amplitudes());
        let expected = proj(&b.psi_minus)
            .scale(C64::new(1.0 - prm.p, 0.0))
            .add(
                &proj(&b.phi_minus)
                    .add(&proj(&b1.phi_plus))
                    .unwrap()
                    .add(&proj(&b1.psi_plus))
                    .unwrap()
                    .scale(C64::new(prm.p / 3.0, 0.0)),
            )
            .unwrap();
        assert!(rho.matrix().max_abs_diff(&expected) < 1e-12);

        let mut eig = hermitian_eigenvalues(rho.matrix()).unwrap();
        let mut formula = output_spectrum(prm).to_vec();
        eig.sort_by(f64::total_cmp);
        formula.sort_by(f64::total_cmp);
        for (a, b) in eig.iter().zip(&formula) {
            close(*a, *b, 1e-9);
        }
    }

    #[test]
    fn spectrum_at_half() {
        let mut s = output_spectrum(params(0.3, 0.5)).to_vec();
        s.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in s.iter().zip([0.7, 0.1, 0.1, 0.1]) {
            close(*a, b, 1e-12);
        }
    }

    #[test]
    fn noiseless_dilation() {
        let t = build_dilation(params(0.0, 0.3))
            .unwrap()
            .run()
            .unwrap()
            .transcript;
        close(t.loss, 0.0, 1e-9);
        close(t.mutual_entanglement, 2.0 * h2(0.3), 1e-9);
    }

    #[test]
    fn kraus_in_q_basis_has_branch_weights() {
        let p = 0.3;
        let setup = build_dilation(params(p, 0.5)).unwrap();
        let k = kraus_from_dilation_in_basis(&setup.channel, &setup.branch_basis()).unwrap();
        let weights: Vec<f64> = k
            .operators()
            .iter()
            .map(|op| op.adjoint().matmul(op).unwrap().trace().re / 2.0)
            .collect();
        for (w, e) in weights.iter().zip([1.0 - p, p / 3.0, p / 3.0, p / 3.0]) {
            close(*w, e, 1e-12);
        }
        let four_branch = depolarizing_kraus(p).unwrap();
        let mut g = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let rho = random_density_with(2, &mut g);
            let a = setup.channel.apply(&rho).unwrap();
            let b = four_branch.apply(&rho).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
        }
    }

    #[test]
    fn analytic_values() {
        let t = analytic_transcript(params(0.4, 0.0));
        assert_eq!((t.s_in, t.mutual_entanglement), (0.0, 0.0));
        close(t.loss, 0.0, 1e-12);
        let t = analytic_transcript(params(0.3, 0.5));
        close(t.mutual_entanglement, 0.643220, 1e-6);
        close(t.s_env, 1.356780, 1e-6);
        close(t.fidelity, 0.7, 1e-12);
        close(
            analytic_transcript(params(0.75, 0.5)).mutual_entanglement,
            0.0,
            1e-12,
        );
        close(analytic_transcript(params(0.3, 0.2)).fidelity, 0.736, 1e-12);
    }

    #[test]
    fn capacity_values() {
        assert_eq!(quantum_capacity(0.0), 2.0);
        close(quantum_capacity(0.75), 0.0, 1e-12);
        close(quantum_capacity(0.1), 1.372508, 1e-6);
        assert!(beyond_full_depolarization(0.8));
        assert!(!beyond_full_depolarization(0.75));
        assert_eq!(classical_capacity(0.0), 1.0);
        close(classical_capacity(0.75), 0.0, 1e-15);
        close(classical_capacity(0.3), 0.278072, 1e-6);
    }

    #[test]
    fn classical_use_values() {
        let c = classical_use_transcript(params(0.0, 0.3));
        close(c.mutual_info, h2(0.3), 1e-12);
        close(c.classical_loss, 0.0, 1e-12);
        close(
            classical_use_transcript(params(0.3, 0.5)).mutual_info,
            0.278072,
            1e-6,
        );
        close(
            classical_use_transcript(params(0.75, 0.5)).mutual_info,
            0.0,
            1e-12,
        );
    }

    #[test]
    fn classical_use_simulation_matches_closed_form() {
        for (p, q) in [(0.0, 0.3), (0.3, 0.5), (0.45, 0.2), (0.75, 0.9)] {
            let prm = params(p, q);
            let sim = classical_use_simulated(&build_dilation(prm).unwrap().channel, q).unwrap();
            let cf = classical_use_transcript(prm);
            close(sim.mutual_info, cf.mutual_info, 1e-9);
            close(sim.classical_loss, cf.classical_loss, 1e-9);
        }
    }

    #[test]
    fn kholevo_values() {
        let l = SubsystemLayout::single(2);
        let a = DensityMatrix::diagonal(&[1.0, 0.0], l.clone()).unwrap();
        let b = DensityMatrix::diagonal(&[0.0, 1.0], l.clone()).unwrap();
        let half = ProbVector::uniform(2);
        close(kholevo_chi(&half, &[a.clone(), b]).unwrap(), 1.0, 1e-12);
        close(
            kholevo_chi(&half, &[a.clone(), a.clone()]).unwrap(),
            0.0,
            1e-12,
        );
        assert!(kholevo_chi(&half, &[a]).is_err());

        let (probs, outs) = classical_ensemble(&depolarizing_kraus(0.3).unwrap(), 0.5).unwrap();
        let chi = kholevo_chi(&probs, &outs).unwrap();
        close(chi, 0.278072, 1e-6);
        close(
            chi,
            classical_use_transcript(params(0.3, 0.5)).mutual_info,
            1e-9,
        );
    }

    #[test]
    fn dephasing_values() {
        assert_eq!(dephasing_mutual(0.0), 2.0);
        assert_eq!(dephasing_mutual(0.5), 1.0);
        close(dephasing_mutual(0.2), 1.278072, 1e-6);
        for p in [0.0, 0.2, 0.5, 1.0] {
            close(
                dephasing_mutual_simulated(p).unwrap(),
                dephasing_mutual(p),
                1e-9,
            );
        }
    }

    #[test]
    fn superdense_values() {
        let r = superdense_scenario(0.0).unwrap();
        close(r.conditional_mutual, 2.0, 1e-9);
        close(r.kholevo_chi, 2.0, 1e-9);
        for p in [0.05, 0.3, 0.6] {
            let r = superdense_scenario(p).unwrap();
            close(r.conditional_mutual, r.kholevo_chi, 1e-9);
            close(r.conditional_mutual, quantum_capacity(p), 1e-9);
        }
    }

    #[test]
    fn threshold_and_bisection() {
        let p = superdense_threshold().unwrap();
        assert!((quantum_capacity(p) - 1.0).abs() < 1e-9);
        assert!((0.188..=0.191).contains(&p));
        close(p, 0.1893, 1e-3);
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-10),
            Err(Error::NoSignChange)
        ));
        assert_eq!(
            bisect(|x| x + 1.0, 0.0, 1.0, 1e-10)
                .unwrap_err()
                .to_string(),
            "no sign change"
        );
    }

    #[test]
    fn tripartite_diagram_of_the_channel() {
        // identity channel leaves the environment decoupled
        let run = build_dilation(params(0.0, 0.5)).unwrap().run().unwrap();
        let v = venn3(&run.state, &[1], &[0], &[2]).unwrap();
        close(v.s_c, 0.0, 1e-9);
        close(v.s_a + v.s_b - v.s_ab, 2.0, 1e-9);

        let p = 0.3;
        let run = build_dilation(params(p, 0.5)).unwrap().run().unwrap();
        // regions: a = R, b = Q', c = E'
        let v = venn3(&run.state, &[1], &[0], &[2]).unwrap();
        let se = h2(p) + p * 3f64.log2();
        close(v.s_a, 1.0, 1e-9);
        close(v.s_b, 1.0, 1e-9);
        close(v.s_c, se, 1e-9);
        close(v.center, 0.0, 1e-9);
        close(v.ac_given_b, run.transcript.loss, 1e-9);
        close(v.ac_given_b, se, 1e-9);
        assert!(v.recombination_error() < 1e-9);
    }

    #[test]
    fn generic_run_matches_closed_form() {
        let prm = params(0.45, 0.2);
        let rho =
            DensityMatrix::diagonal(&[prm.q, 1.0 - prm.q], SubsystemLayout::single(2)).unwrap();
        let via_purify = run_channel(&depolarizing_kraus(prm.p).unwrap(), &rho).unwrap();
        let cf = analytic_transcript(prm);
        close(via_purify.mutual_entanglement, cf.mutual_entanglement, 1e-9);
        close(via_purify.fidelity, cf.fidelity, 1e-9);
        close(via_purify.s_env, cf.s_env, 1e-9);
    }
}
