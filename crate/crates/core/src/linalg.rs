//! Dense complex linear algebra for registers of a few qubits.
//!
//! Everything here is sized for 2×2 up to 8×8 matrices. Qubits are numbered
//! from 1 and qubit 1 is the most significant bit of a computational-basis
//! index, so `|q1 q2 q3⟩` maps to index `4·q1 + 2·q2 + q3`.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);

/// Input to [`hermitian_eigs`] may deviate from Hermitian by this much.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_TOL, 0)` are treated as round-off and clipped.
pub const PSD_TOL: f64 = 1e-10;
/// Eigenvalues below this fraction of the largest one are treated as exact
/// zeros by [`psd_sqrt`]. Square roots amplify round-off near zero, so
/// without the cutoff an exactly rank-deficient input would leak `√ε`-sized
/// entries into its root.
pub const PSD_RELATIVE_CUTOFF: f64 = 1e-12;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_OFF_TOL: f64 = 1e-13;
const SVD_ORTHO_TOL: f64 = 1e-15;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
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

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from row-major real entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, entries.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    pub fn from_diag(diag: &[Complex]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let diag: Vec<Complex> = diag.iter().map(|&x| Complex::new(x, 0.0)).collect();
        Self::from_diag(&diag)
    }

    /// `|v⟩⟨v|`
    pub fn outer(v: &[Complex]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
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

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Kronecker product, first factor major: `(a⊗b)[(i1 i2),(j1 j2)] = a[i1,j1]·b[i2,j2]`.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = ComplexMatrix::zeros(rows, cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self[(i1, j1)];
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out[(i1 * other.rows + i2, j1 * other.cols + j2)] = a * other[(i2, j2)];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &ComplexMatrix, f: impl Fn(Complex, Complex) -> Complex) -> Result<ComplexMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |h_ij − conj(h_ji)|`, infinite for non-square input.
    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (r, c): (usize, usize)) -> &Complex {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
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

/// Amplitudes of an n-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "state dimension {dim} is not a power of two"
            )));
        }
        Ok(Self { amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    /// Computational basis state `|index⟩` on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        amplitudes[index] = ONE;
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= 1e-12
    }

    pub fn kron(&self, other: &StateVector) -> StateVector {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for &a in &self.amplitudes {
            for &b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        StateVector { amplitudes }
    }

    /// `|ψ⟩⟨ψ|`
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes)
    }
}

fn n_qubits_of(rho: &ComplexMatrix) -> Result<usize> {
    if !rho.is_square() || !rho.rows().is_power_of_two() || rho.rows() < 2 {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} is not a qubit-register operator",
            rho.rows(),
            rho.cols()
        )));
    }
    Ok(rho.rows().trailing_zeros() as usize)
}

fn check_qubit(qubit: usize, n_qubits: usize) -> Result<()> {
    if qubit == 0 || qubit > n_qubits {
        Err(Error::QubitOutOfRange { index: qubit, n_qubits })
    } else {
        Ok(())
    }
}

/// Bit mask selecting `qubit` (1-based, qubit 1 most significant).
fn qubit_mask(qubit: usize, n_qubits: usize) -> usize {
    1 << (n_qubits - qubit)
}

/// Embeds a single-qubit operator as `I ⊗ … ⊗ op ⊗ … ⊗ I`.
pub fn lift(op: &ComplexMatrix, qubit: usize, n_qubits: usize) -> Result<ComplexMatrix> {
    if op.rows() != 2 || op.cols() != 2 {
        return Err(Error::DimensionMismatch("single-qubit operator must be 2x2".into()));
    }
    check_qubit(qubit, n_qubits)?;
    let id = ComplexMatrix::identity(2);
    let mut out = if qubit == 1 { op.clone() } else { id.clone() };
    for k in 2..=n_qubits {
        out = out.kron(if k == qubit { op } else { &id });
    }
    Ok(out)
}

/// `L ρ L†` with `L` the lift of a single-qubit `op` onto `qubit`, without
/// materialising `L`.
pub fn conjugate_local(rho: &ComplexMatrix, op: &ComplexMatrix, qubit: usize) -> Result<ComplexMatrix> {
    conjugate_local_sum(rho, std::slice::from_ref(op), qubit)
}

/// `Σ_i L_i ρ L_i†` for single-qubit `ops` lifted onto `qubit`. Works on the
/// 2×2 blocks that pair each index with its partner across the qubit's bit.
pub fn conjugate_local_sum(rho: &ComplexMatrix, ops: &[ComplexMatrix], qubit: usize) -> Result<ComplexMatrix> {
    let n = n_qubits_of(rho)?;
    if ops.iter().any(|op| op.rows() != 2 || op.cols() != 2) {
        return Err(Error::DimensionMismatch("single-qubit operator must be 2x2".into()));
    }
    check_qubit(qubit, n)?;
    let dim = rho.rows();
    let mask = qubit_mask(qubit, n);
    let mut out = ComplexMatrix::zeros(dim, dim);
    for r0 in (0..dim).filter(|r| r & mask == 0) {
        let r1 = r0 | mask;
        for c0 in (0..dim).filter(|c| c & mask == 0) {
            let c1 = c0 | mask;
            let b = [[rho[(r0, c0)], rho[(r0, c1)]], [rho[(r1, c0)], rho[(r1, c1)]]];
            let mut acc = [[ZERO; 2]; 2];
            for op in ops {
                let m = [[op[(0, 0)], op[(0, 1)]], [op[(1, 0)], op[(1, 1)]]];
                // t = M·B, then acc += t·M†
                let t = [
                    [m[0][0] * b[0][0] + m[0][1] * b[1][0], m[0][0] * b[0][1] + m[0][1] * b[1][1]],
                    [m[1][0] * b[0][0] + m[1][1] * b[1][0], m[1][0] * b[0][1] + m[1][1] * b[1][1]],
                ];
                for i in 0..2 {
                    for j in 0..2 {
                        acc[i][j] += t[i][0] * m[j][0].conj() + t[i][1] * m[j][1].conj();
                    }
                }
            }
            out[(r0, c0)] = acc[0][0];
            out[(r0, c1)] = acc[0][1];
            out[(r1, c0)] = acc[1][0];
            out[(r1, c1)] = acc[1][1];
        }
    }
    Ok(out)
}

/// Reduced operator after tracing out the 1-based qubits in `traced`.
/// Remaining qubits keep their relative order.
pub fn partial_trace(rho: &ComplexMatrix, n_qubits: usize, traced: &[usize]) -> Result<ComplexMatrix> {
    if n_qubits_of(rho)? != n_qubits {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator does not act on {n_qubits} qubits",
            rho.rows(),
            rho.cols()
        )));
    }
    let mut traced_mask = 0usize;
    for &q in traced {
        check_qubit(q, n_qubits)?;
        traced_mask |= qubit_mask(q, n_qubits);
    }
    let kept: Vec<usize> = (1..=n_qubits)
        .filter(|q| traced_mask & qubit_mask(*q, n_qubits) == 0)
        .collect();
    if kept.is_empty() {
        return Err(Error::InvalidInput("cannot trace out every qubit".into()));
    }
    let reduced_index = |full: usize| -> usize {
        kept.iter()
            .fold(0, |acc, &q| (acc << 1) | usize::from(full & qubit_mask(q, n_qubits) != 0))
    };
    let dim = rho.rows();
    let mut out = ComplexMatrix::zeros(1 << kept.len(), 1 << kept.len());
    for r in 0..dim {
        for c in 0..dim {
            if r & traced_mask == c & traced_mask {
                out[(reduced_index(r), reduced_index(c))] += rho[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigen {
    /// Sorted descending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
}

impl Eigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            for i in 0..n {
                let vik = self.vectors[(i, k)] * lambda;
                for j in 0..n {
                    out[(i, j)] += vik * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Singular values of a square matrix, sorted descending, by one-sided
/// (Hestenes) Jacobi: columns are rotated pairwise until mutually
/// orthogonal, and the singular values are the final column norms. Small
/// singular values come out accurate relative to the matrix norm.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", m.rows(), m.cols())));
    }
    let n = m.rows();
    // Column-major copy so each column is contiguous.
    let mut cols: Vec<Vec<Complex>> = (0..n).map(|j| (0..n).map(|i| m[(i, j)]).collect()).collect();
    let col_norm = |c: &[Complex]| c.iter().map(|z| z.norm_sqr()).sum::<f64>();

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        converged = true;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = col_norm(&cols[p]);
                let beta = col_norm(&cols[q]);
                let gamma: Complex = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= SVD_ORTHO_TOL * (alpha * beta).sqrt() || g < f64::MIN_POSITIVE {
                    continue;
                }
                converged = false;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let (left, right) = cols.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let yp = *y * phase;
                    let xp = *x;
                    *x = xp * c - yp * s;
                    *y = xp * s + yp * c;
                }
            }
        }
        if converged {
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
    }
    let mut values: Vec<f64> = cols.iter().map(|c| col_norm(c).sqrt()).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
pub fn hermitian_eigs(h: &ComplexMatrix) -> Result<Eigen> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", h.rows(), h.cols())));
    }
    let residual = h.hermiticity_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian(residual));
    }
    let n = h.rows();
    // Symmetrise so the iteration starts from an exactly Hermitian matrix.
    let mut a = h.clone();
    for i in 0..n {
        a[(i, i)] = Complex::new(a[(i, i)].re, 0.0);
        for j in i + 1..n {
            let avg = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_OFF_TOL * a.frobenius_norm().max(f64::MIN_POSITIVE);

    let mut converged = off_diagonal_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a) <= threshold;
    }
    if !converged {
        return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)];
        }
    }
    Ok(Eigen { values, vectors })
}

/// One Jacobi rotation annihilating `a[p][q]`: `a ← U† a U`, `v ← v U`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let h = a[(p, q)];
    let mag = h.norm();
    if mag == 0.0 {
        return;
    }
    // Phase so the pivot becomes real, then a real symmetric rotation.
    let phase = h / mag;
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U restricted to (p, q): [[c, s], [-s·conj(phase), c·conj(phase)]]
    let u_pp = Complex::new(c, 0.0);
    let u_pq = Complex::new(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

/// Principal square root of a Hermitian positive-semidefinite matrix.
pub fn psd_sqrt(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigs(h)?;
    let largest = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let cutoff = PSD_RELATIVE_CUTOFF * largest;
    let mut roots = Vec::with_capacity(eig.values.len());
    for &lambda in &eig.values {
        if lambda < -PSD_TOL {
            return Err(Error::NotPositive(lambda));
        }
        roots.push(if lambda <= cutoff { 0.0 } else { lambda.sqrt() });
    }
    Ok(Eigen {
        values: roots,
        vectors: eig.vectors,
    }
    .reconstruct())
}
