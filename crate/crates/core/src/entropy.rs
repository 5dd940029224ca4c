//! Shannon and von Neumann entropies (base 2) and entropy Venn diagrams.

use serde::Serialize;

use crate::error::{check_probability, Error, Result};
use crate::qmat::{hermitian_eigenvalues, DensityMatrix, PureState, STATE_TOL};

/// Probability distribution: entries in [0, 1] summing to 1 within 1e-10.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let mut probs = probs;
        for p in probs.iter_mut() {
            *p = check_probability(*p)?;
        }
        let total: f64 = probs.iter().sum();
        if probs.is_empty() || (total - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Self(probs))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `-x log2 x` with `0 log 0 = 0`.
pub(crate) fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Entropy of any nonnegative weights; no normalization check.
pub(crate) fn shannon(probs: &[f64]) -> f64 {
    probs.iter().copied().map(xlogx).sum()
}

/// `H2[p]` for arguments already known to lie in [0, 1].
pub(crate) fn h2(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    xlogx(p) + xlogx(1.0 - p)
}

pub fn binary_entropy(p: f64) -> Result<f64> {
    check_probability(p).map(h2)
}

pub fn shannon_entropy(p: &ProbVector) -> f64 {
    shannon(p.probs())
}

/// `H(p, 1-p || r, 1-r)` in bits.
pub fn relative_entropy_binary(p: f64, r: f64) -> Result<f64> {
    let p = check_probability(p)?;
    let r = check_probability(r)?;
    if r <= 0.0 || r >= 1.0 {
        return Err(Error::DegenerateReference);
    }
    let term = |a: f64, b: f64| if a <= 0.0 { 0.0 } else { a * (a / b).log2() };
    Ok((term(p, r) + term(1.0 - p, 1.0 - r)).max(0.0))
}

/// Spectrum with jitter in [-1e-10, 0) clamped to zero and renormalized.
pub fn clamped_spectrum(rho: &DensityMatrix) -> Result<Vec<f64>> {
    let mut eig = hermitian_eigenvalues(rho.matrix())?;
    if let Some(&min) = eig.last() {
        if min < -STATE_TOL {
            return Err(Error::NegativeEigenvalue(min));
        }
    }
    eig.iter_mut().for_each(|x| *x = x.max(0.0));
    let total: f64 = eig.iter().sum();
    eig.iter_mut().for_each(|x| *x /= total);
    Ok(eig)
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    clamped_spectrum(rho).map(|s| shannon(&s))
}

/// Entropy of a group of subsystems of a (pure or mixed) state.
pub trait SubsystemEntropy {
    fn factor_count(&self) -> usize;
    fn entropy_of(&self, factors: &[usize]) -> Result<f64>;
}

impl SubsystemEntropy for DensityMatrix {
    fn factor_count(&self) -> usize {
        self.layout().len()
    }

    fn entropy_of(&self, factors: &[usize]) -> Result<f64> {
        let keep = self.layout().normalize_subset(factors)?;
        if keep.is_empty() {
            return Ok(0.0);
        }
        if keep.len() == self.layout().len() {
            return von_neumann_entropy(self);
        }
        von_neumann_entropy(&crate::qmat::partial_trace(self, &keep)?)
    }
}

impl SubsystemEntropy for PureState {
    fn factor_count(&self) -> usize {
        self.layout().len()
    }

    fn entropy_of(&self, factors: &[usize]) -> Result<f64> {
        let keep = self.layout().normalize_subset(factors)?;
        if keep.is_empty() || keep.len() == self.layout().len() {
            return Ok(0.0);
        }
        von_neumann_entropy(&self.smaller_side(&keep)?)
    }
}

fn check_partition(n: usize, groups: &[&[usize]]) -> Result<()> {
    let mut seen = vec![false; n];
    for g in groups {
        if g.is_empty() {
            return Err(Error::InvalidArgument("empty group in partition".into()));
        }
        for &i in g.iter() {
            if i >= n || seen[i] {
                return Err(Error::InvalidArgument(format!("bad partition {groups:?}")));
            }
            seen[i] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::InvalidArgument(format!(
            "partition {groups:?} misses factors"
        )));
    }
    Ok(())
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().chain(b).copied().collect()
}

/// Bipartite entropy diagram, in bits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyVenn2 {
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    pub cond_a_given_b: f64,
    pub cond_b_given_a: f64,
    pub mutual: f64,
}

pub fn venn2<S: SubsystemEntropy + ?Sized>(
    state: &S,
    a: &[usize],
    b: &[usize],
) -> Result<EntropyVenn2> {
    check_partition(state.factor_count(), &[a, b])?;
    let s_a = state.entropy_of(a)?;
    let s_b = state.entropy_of(b)?;
    let s_ab = state.entropy_of(&union(a, b))?;
    Ok(EntropyVenn2 {
        s_a,
        s_b,
        s_ab,
        cond_a_given_b: s_ab - s_b,
        cond_b_given_a: s_ab - s_a,
        mutual: s_a + s_b - s_ab,
    })
}

/// Seven-region tripartite entropy diagram plus the seven entropies it was
/// built from. Regions are stored so recombination is a genuine check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyVenn3 {
    pub a_given_bc: f64,
    pub b_given_ac: f64,
    pub c_given_ab: f64,
    pub ab_given_c: f64,
    pub ac_given_b: f64,
    pub bc_given_a: f64,
    /// Ternary mutual entropy `S(A:B:C)`.
    pub center: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub s_c: f64,
    pub s_ab: f64,
    pub s_ac: f64,
    pub s_bc: f64,
    pub s_abc: f64,
}

impl EntropyVenn3 {
    /// Largest discrepancy between region sums and the source entropies.
    pub fn recombination_error(&self) -> f64 {
        let a = self.a_given_bc + self.ab_given_c + self.ac_given_b + self.center;
        let b = self.b_given_ac + self.ab_given_c + self.bc_given_a + self.center;
        let c = self.c_given_ab + self.ac_given_b + self.bc_given_a + self.center;
        let ab = a + self.b_given_ac + self.bc_given_a;
        let ac = a + self.c_given_ab + self.bc_given_a;
        let bc = b + self.c_given_ab + self.ac_given_b;
        let abc = ab + self.c_given_ab;
        [
            a - self.s_a,
            b - self.s_b,
            c - self.s_c,
            ab - self.s_ab,
            ac - self.s_ac,
            bc - self.s_bc,
            abc - self.s_abc,
        ]
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

pub fn venn3<S: SubsystemEntropy + ?Sized>(
    state: &S,
    a: &[usize],
    b: &[usize],
    c: &[usize],
) -> Result<EntropyVenn3> {
    check_partition(state.factor_count(), &[a, b, c])?;
    let s_a = state.entropy_of(a)?;
    let s_b = state.entropy_of(b)?;
    let s_c = state.entropy_of(c)?;
    let s_ab = state.entropy_of(&union(a, b))?;
    let s_ac = state.entropy_of(&union(a, c))?;
    let s_bc = state.entropy_of(&union(b, c))?;
    let s_abc = state.entropy_of(&union(&union(a, b), c))?;
    Ok(EntropyVenn3 {
        a_given_bc: s_abc - s_bc,
        b_given_ac: s_abc - s_ac,
        c_given_ab: s_abc - s_ab,
        ab_given_c: s_ac + s_bc - s_c - s_abc,
        ac_given_b: s_ab + s_bc - s_b - s_abc,
        bc_given_a: s_ab + s_ac - s_a - s_abc,
        center: s_a + s_b + s_c - s_ab - s_ac - s_bc + s_abc,
        s_a,
        s_b,
        s_c,
        s_ab,
        s_ac,
        s_bc,
        s_abc,
    })
}

/// `H(X) + H(Y) - H(X,Y)` for a joint distribution given as rows of x.
pub fn classical_mutual_information(joint: &[Vec<f64>]) -> Result<f64> {
    let cols = joint.first().map_or(0, Vec::len);
    if cols == 0 || joint.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidArgument(
            "joint distribution must be a nonempty matrix".into(),
        ));
    }
    let flat: Vec<f64> = joint.iter().flatten().copied().collect();
    if flat.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::InvalidArgument("negative joint probability".into()));
    }
    let total: f64 = flat.iter().sum();
    if (total - 1.0).abs() > STATE_TOL {
        return Err(Error::InvalidArgument(format!(
            "joint distribution sums to {total}"
        )));
    }
    let px: Vec<f64> = joint.iter().map(|r| r.iter().sum()).collect();
    let py: Vec<f64> = (0..cols)
        .map(|j| joint.iter().map(|r| r[j]).sum())
        .collect();
    Ok(shannon(&px) + shannon(&py) - shannon(&flat))
}

/// Classical Fano bound `H2[P_e] + P_e log2(s - 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FanoBound {
    pub bits: f64,
    /// The bound is zero although errors occur (only possible for `s = 2, P_e = 1`).
    pub degenerate: bool,
}

pub fn classical_fano_bound(p_error: f64, s: u64) -> Result<FanoBound> {
    let p = check_probability(p_error)?;
    if s < 2 {
        return Err(Error::InvalidArgument(format!("codeword count {s} < 2")));
    }
    let bits = h2(p) + p * ((s - 1) as f64).log2();
    Ok(FanoBound {
        bits,
        degenerate: p > 0.0 && bits == 0.0,
    })
}
