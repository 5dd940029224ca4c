//! Dense complex linear algebra over small multi-part Hilbert spaces.
//!
//! Every composite space is described by a [`SubsystemLayout`]. The leftmost
//! factor is the slowest-varying index, so a basis state `|a b c>` of a
//! `[da, db, dc]` layout sits at `(a * db + b) * dc + c`.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Tolerance for Hermiticity, trace and eigenvalue positivity of states.
pub const STATE_TOL: f64 = 1e-10;
/// Tolerance on the norm of pure states.
pub const NORM_TOL: f64 = 1e-12;

const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(
                "matrix dimensions must be positive".into(),
            ));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            values.iter().map(|&x| C64::new(x, 0.0)).collect(),
        )
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// `|a><b|`.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        let mut m = Self::zeros(a.len(), b.len());
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                m[(i, j)] = x * y.conj();
            }
        }
        m
    }

    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        let mut m = Self::zeros(rows.max(1), cols.max(1));
        for (j, col) in columns.iter().enumerate() {
            for (i, &z) in col.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(c, r)] = self[(r, c)].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// `max |u u† - I|` entrywise, or infinity for non-square input.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        match self.matmul(&self.adjoint()) {
            Ok(p) => p.max_abs_diff(&Self::identity(self.rows)),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on mismatched shapes; use [`ComplexMatrix::matmul`] for a checked product.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix shapes must agree")
    }
}

/// Pauli matrices and friends, as 2x2 operators.
pub mod pauli {
    use super::{ComplexMatrix, C64, I, ONE, ZERO};

    pub fn x() -> ComplexMatrix {
        ComplexMatrix {
            rows: 2,
            cols: 2,
            data: vec![ZERO, ONE, ONE, ZERO],
        }
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix {
            rows: 2,
            cols: 2,
            data: vec![ZERO, -I, I, ZERO],
        }
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix {
            rows: 2,
            cols: 2,
            data: vec![ONE, ZERO, ZERO, -ONE],
        }
    }

    /// `-i σ_y`, which equals `σ_x σ_z`.
    pub fn minus_i_y() -> ComplexMatrix {
        y().scale(C64::new(0.0, -1.0))
    }
}

/// Kronecker product; `a` supplies the slower-varying index.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let x = a[(ar, ac)];
            if x == ZERO {
                continue;
            }
            for br in 0..b.rows {
                for bc in 0..b.cols {
                    out[(ar * b.rows + br, ac * b.cols + bc)] = x * b[(br, bc)];
                }
            }
        }
    }
    out
}

fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// Local Hilbert-space dimensions of a composite system, leftmost slowest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsystemLayout {
    dims: Vec<usize>,
}

impl SubsystemLayout {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::DimensionMismatch(format!("invalid layout {dims:?}")));
        }
        Ok(Self { dims })
    }

    /// Single-factor layout.
    pub fn single(dim: usize) -> Self {
        Self {
            dims: vec![dim.max(1)],
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self {
            dims: self.dims.iter().chain(&other.dims).copied().collect(),
        }
    }

    /// Dimension of the product of the listed factors.
    pub fn dim_of(&self, factors: &[usize]) -> usize {
        factors.iter().map(|&i| self.dims[i]).product()
    }

    /// Sorted, deduplicated, range-checked copy of `factors`.
    pub fn normalize_subset(&self, factors: &[usize]) -> Result<Vec<usize>> {
        let mut v = factors.to_vec();
        v.sort_unstable();
        let before = v.len();
        v.dedup();
        if v.len() != before || v.iter().any(|&i| i >= self.dims.len()) {
            return Err(Error::BadSubsystemIndex);
        }
        Ok(v)
    }

    pub fn complement(&self, factors: &[usize]) -> Vec<usize> {
        (0..self.dims.len())
            .filter(|i| !factors.contains(i))
            .collect()
    }

    /// For every full basis index, its index within the `first` factors
    /// (composed in the given order) and within the `second` factors.
    fn split_table(&self, first: &[usize], second: &[usize]) -> Vec<(usize, usize)> {
        let n = self.dims.len();
        let mut digits = vec![0usize; n];
        let total = self.total();
        let mut table = Vec::with_capacity(total);
        for _ in 0..total {
            let compose = |factors: &[usize]| {
                factors
                    .iter()
                    .fold(0usize, |acc, &f| acc * self.dims[f] + digits[f])
            };
            table.push((compose(first), compose(second)));
            // increment the mixed-radix counter, rightmost fastest
            for f in (0..n).rev() {
                digits[f] += 1;
                if digits[f] < self.dims[f] {
                    break;
                }
                digits[f] = 0;
            }
        }
        table
    }
}

/// Normalized state vector with subsystem metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    layout: SubsystemLayout,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>, layout: SubsystemLayout) -> Result<Self> {
        if amplitudes.len() != layout.total() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for layout {:?}",
                amplitudes.len(),
                layout.dims()
            )));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm {norm} differs from 1")));
        }
        Ok(Self { amplitudes, layout })
    }

    pub fn from_real(amplitudes: &[f64], layout: SubsystemLayout) -> Result<Self> {
        Self::new(
            amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect(),
            layout,
        )
    }

    /// Computational basis state `|index>`.
    pub fn basis(index: usize, layout: SubsystemLayout) -> Result<Self> {
        let mut amps = vec![ZERO; layout.total()];
        *amps.get_mut(index).ok_or(Error::BadSubsystemIndex)? = ONE;
        Self::new(amps, layout)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Same amplitudes under a different factorization of the same dimension.
    pub fn relabel(&self, layout: SubsystemLayout) -> Result<Self> {
        if layout.total() != self.dim() {
            return Err(Error::DimensionMismatch(
                "relabel changes the dimension".into(),
            ));
        }
        Ok(Self {
            amplitudes: self.amplitudes.clone(),
            layout,
        })
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            amplitudes: kron_vec(&self.amplitudes, &other.amplitudes),
            layout: self.layout.concat(&other.layout),
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
            layout: self.layout.clone(),
        }
    }

    /// Reduced density matrix of the listed factors, built as `M M†` from the
    /// amplitude matrix without forming the full projector.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = self.layout.normalize_subset(keep)?;
        let rest = self.layout.complement(&keep);
        let dk = self.layout.dim_of(&keep);
        let dr = self.layout.dim_of(&rest);
        let mut m = vec![ZERO; dk * dr];
        for (full, (k, r)) in self
            .layout
            .split_table(&keep, &rest)
            .into_iter()
            .enumerate()
        {
            m[k * dr + r] = self.amplitudes[full];
        }
        let mut rho = ComplexMatrix::zeros(dk, dk);
        for i in 0..dk {
            for j in i..dk {
                let z: C64 = (0..dr).map(|r| m[i * dr + r] * m[j * dr + r].conj()).sum();
                rho[(i, j)] = z;
                rho[(j, i)] = z.conj();
            }
        }
        let dims = keep.iter().map(|&f| self.layout.dims[f]).collect();
        Ok(DensityMatrix {
            matrix: rho,
            layout: SubsystemLayout { dims },
        })
    }

    /// Reduced state of whichever side of the cut is smaller. For a pure
    /// global state both sides share their nonzero spectrum.
    pub fn smaller_side(&self, factors: &[usize]) -> Result<DensityMatrix> {
        let keep = self.layout.normalize_subset(factors)?;
        let rest = self.layout.complement(&keep);
        if !rest.is_empty() && self.layout.dim_of(&rest) < self.layout.dim_of(&keep) {
            self.reduced(&rest)
        } else {
            self.reduced(&keep)
        }
    }
}

/// Positive, unit-trace Hermitian operator with subsystem metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    layout: SubsystemLayout,
}

impl DensityMatrix {
    /// Validating constructor: Hermitian, unit trace, eigenvalues ≥ -1e-10.
    pub fn new(matrix: ComplexMatrix, layout: SubsystemLayout) -> Result<Self> {
        let rho = Self::from_parts(matrix, layout)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Shape checks only; callers guarantee positivity.
    pub(crate) fn from_parts(matrix: ComplexMatrix, layout: SubsystemLayout) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != layout.total() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for layout {:?}",
                matrix.rows(),
                matrix.cols(),
                layout.dims()
            )));
        }
        Ok(Self { matrix, layout })
    }

    pub fn diagonal(probs: &[f64], layout: SubsystemLayout) -> Result<Self> {
        Self::new(ComplexMatrix::diagonal(probs), layout)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let v = vec![1.0 / dim as f64; dim];
        Self {
            matrix: ComplexMatrix::diagonal(&v),
            layout: SubsystemLayout::single(dim),
        }
    }

    /// Convex combination `Σ w_i ρ_i` of states sharing one layout.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::DimensionMismatch(
                "weights and states differ in length".into(),
            ));
        }
        let layout = states[0].layout.clone();
        let mut acc = ComplexMatrix::zeros(layout.total(), layout.total());
        for (w, s) in weights.iter().zip(states) {
            if s.layout != layout {
                return Err(Error::DimensionMismatch("mixed layouts".into()));
            }
            acc = acc.add(&s.matrix.scale(C64::new(*w, 0.0)))?;
        }
        Self::new(acc, layout)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn relabel(&self, layout: SubsystemLayout) -> Result<Self> {
        Self::from_parts(self.matrix.clone(), layout)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: tensor(&self.matrix, &other.matrix),
            layout: self.layout.concat(&other.layout),
        }
    }

    /// Re-checks the state invariants.
    pub fn validate(&self) -> Result<()> {
        if !self.matrix.is_hermitian(STATE_TOL) {
            return Err(Error::NotHermitian);
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let eig = hermitian_eigenvalues(&self.matrix)?;
        if let Some(&min) = eig.last() {
            if min < -STATE_TOL {
                return Err(Error::NegativeEigenvalue(min));
            }
        }
        Ok(())
    }

    /// `<psi|ρ|psi>` as a real number.
    pub fn expectation(&self, psi: &[C64]) -> Result<f64> {
        let v = self.matrix.mul_vec(psi)?;
        Ok(psi
            .iter()
            .zip(&v)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            .re)
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        let m = u.matmul(&self.matrix)?.matmul(&u.adjoint())?;
        Self::from_parts(m, self.layout.clone())
    }
}

/// Reduced density matrix over the `keep` factors, kept in original order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let layout = &rho.layout;
    let keep = layout.normalize_subset(keep)?;
    let rest = layout.complement(&keep);
    let dk = layout.dim_of(&keep);
    let dr = layout.dim_of(&rest);
    // full[k * dr + r] = full basis index of (k, r)
    let mut full = vec![0usize; dk * dr];
    for (idx, (k, r)) in layout.split_table(&keep, &rest).into_iter().enumerate() {
        full[k * dr + r] = idx;
    }
    let mut out = ComplexMatrix::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            out[(i, j)] = (0..dr)
                .map(|r| rho.matrix[(full[i * dr + r], full[j * dr + r])])
                .sum();
        }
    }
    let dims = keep.iter().map(|&f| layout.dims[f]).collect();
    Ok(DensityMatrix {
        matrix: out,
        layout: SubsystemLayout { dims },
    })
}

/// Eigenvalues and eigenvectors (as matrix columns) of a Hermitian matrix,
/// eigenvalues in descending order. Cyclic complex Jacobi rotations.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !m.is_hermitian(STATE_TOL) {
        return Err(Error::NotHermitian);
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let frob = a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = JACOBI_OFF_TOL * frob.max(1.0);

    let off_norm = |a: &ComplexMatrix| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&a) < threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag < f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // G restricted to (p, q) = diag(1, conj(phase)) * [[c, s], [-s, c]]
                let g_pp = C64::new(c, 0.0);
                let g_pq = C64::new(s, 0.0);
                let g_qp = -phase.conj() * s;
                let g_qq = phase.conj() * c;
                // A <- A G
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
                // A <- G† A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
            }
        }
        converged = off_norm(&a) < threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let columns: Vec<Vec<C64>> = order.iter().map(|&i| v.column(i)).collect();
    Ok((values, ComplexMatrix::from_columns(&columns)?))
}

/// Real eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(m).map(|(values, _)| values)
}

/// Applies a unitary on the whole space of `psi`.
pub fn apply_unitary(u: &ComplexMatrix, psi: &PureState) -> Result<PureState> {
    if u.rows() != psi.dim() || !u.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator on a {}-dimensional state",
            u.rows(),
            u.cols(),
            psi.dim()
        )));
    }
    if !u.is_unitary(STATE_TOL) {
        return Err(Error::NotUnitary);
    }
    PureState::new(u.mul_vec(&psi.amplitudes)?, psi.layout.clone())
}

/// Lifts `op`, which acts on the listed factors in the listed order, to the
/// whole space of `layout`.
pub fn embed_operator(
    op: &ComplexMatrix,
    layout: &SubsystemLayout,
    targets: &[usize],
) -> Result<ComplexMatrix> {
    let (table, dt, dr) = local_table(op, layout, targets)?;
    let total = layout.total();
    let mut full = vec![0usize; dt * dr];
    for (idx, &(t, r)) in table.iter().enumerate() {
        full[t * dr + r] = idx;
    }
    let mut out = ComplexMatrix::zeros(total, total);
    for (col, &(t, r)) in table.iter().enumerate() {
        for t_out in 0..dt {
            let z = op[(t_out, t)];
            if z != ZERO {
                out[(full[t_out * dr + r], col)] = z;
            }
        }
    }
    Ok(out)
}

/// Applies a unitary acting on the listed factors of `psi`, identity elsewhere.
pub fn apply_local(op: &ComplexMatrix, psi: &PureState, targets: &[usize]) -> Result<PureState> {
    if !op.is_unitary(STATE_TOL) {
        return Err(Error::NotUnitary);
    }
    let (table, dt, dr) = local_table(op, &psi.layout, targets)?;
    let mut grouped = vec![ZERO; dt * dr];
    for (idx, &(t, r)) in table.iter().enumerate() {
        grouped[t * dr + r] = psi.amplitudes[idx];
    }
    let mut out = vec![ZERO; psi.dim()];
    for (idx, &(t, r)) in table.iter().enumerate() {
        out[idx] = (0..dt).map(|s| op[(t, s)] * grouped[s * dr + r]).sum();
    }
    PureState::new(out, psi.layout.clone())
}

/// Per full index `(target_idx, rest_idx)`, then the target and rest dimensions.
type LocalTable = (Vec<(usize, usize)>, usize, usize);

fn local_table(
    op: &ComplexMatrix,
    layout: &SubsystemLayout,
    targets: &[usize],
) -> Result<LocalTable> {
    // targets keep their given order, so only check range and uniqueness
    layout.normalize_subset(targets)?;
    if targets.is_empty() {
        return Err(Error::BadSubsystemIndex);
    }
    let dt = layout.dim_of(targets);
    if !op.is_square() || op.rows() != dt {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator on factors of total dimension {dt}",
            op.rows(),
            op.cols()
        )));
    }
    let rest = layout.complement(targets);
    let dr = layout.dim_of(&rest);
    Ok((layout.split_table(targets, &rest), dt, dr))
}

/// Haar-like random unitary from an explicit generator: Gram–Schmidt on a
/// matrix of complex standard-normal entries.
pub fn random_unitary_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let dim = dim.max(1);
    loop {
        let mut columns: Vec<Vec<C64>> = Vec::with_capacity(dim);
        let mut degenerate = false;
        for _ in 0..dim {
            let mut v: Vec<C64> = (0..dim)
                .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            // two passes of modified Gram–Schmidt
            for _ in 0..2 {
                for u in &columns {
                    let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (x, y) in v.iter_mut().zip(u) {
                        *x -= proj * y;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                degenerate = true;
                break;
            }
            v.iter_mut().for_each(|z| *z /= norm);
            columns.push(v);
        }
        if !degenerate {
            return ComplexMatrix::from_columns(&columns).expect("square by construction");
        }
    }
}

/// Deterministic random unitary for a 64-bit seed.
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_unitary_with(dim, &mut rng)
}

/// Random state `V diag(p) V†` with uniform-simplex spectrum.
pub fn random_density_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let probs = random_simplex(dim, rng);
    let v = random_unitary_with(dim, rng);
    let m = v
        .matmul(&ComplexMatrix::diagonal(&probs))
        .and_then(|x| x.matmul(&v.adjoint()));
    let mut m = m.expect("square by construction");
    // exact Hermitian symmetrization removes rounding asymmetry
    let adj = m.adjoint();
    m = m.add(&adj).expect("same shape").scale(C64::new(0.5, 0.0));
    DensityMatrix {
        matrix: m,
        layout: SubsystemLayout::single(dim),
    }
}

/// Uniform point on the probability simplex of the given size.
pub fn random_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}
