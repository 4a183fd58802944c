//! Dense complex-matrix kernel.
//!
//! [`Operator`] is a row-major `dim x dim` complex matrix with `dim` a power
//! of two (the Hilbert space of `L` qubits). Everything here is a pure
//! function of its inputs.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{DbiError, Result};
use crate::scalar::Real;

const MAX_JACOBI_SWEEPS: usize = 100;

fn check_power_of_two(dim: usize) -> Result<()> {
    if dim.is_power_of_two() {
        Ok(())
    } else {
        Err(DbiError::NotPowerOfTwo(dim))
    }
}

fn check_same_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(DbiError::DimensionMismatch { left, right })
    }
}

/// Dense square complex matrix acting on `log2(dim)` qubits.
///
/// Basis order is the computational basis `|0...0>, ..., |1...1>` with
/// qubit 1 as the most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Operator<T> {
    fn raw(dim: usize, data: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_power_of_two(dim)?;
        Ok(Self::raw(dim, vec![Complex::new(T::zero(), T::zero()); dim * dim]))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut out = Self::zeros(dim)?;
        for i in 0..dim {
            out.data[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        Ok(out)
    }

    /// Builds from row-major entries.
    pub fn from_rows(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        check_power_of_two(dim)?;
        if entries.len() != dim * dim {
            return Err(DbiError::BadLength { expected: dim * dim, got: entries.len() });
        }
        Ok(Self::raw(dim, entries))
    }

    /// Builds from real row-major entries.
    pub fn from_real_rows(dim: usize, entries: &[T]) -> Result<Self> {
        Self::from_rows(dim, entries.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Result<Self> {
        check_power_of_two(dim)?;
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Ok(Self::raw(dim, data))
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[T]) -> Result<Self> {
        let dim = diag.len();
        let mut out = Self::zeros(dim)?;
        for (i, &d) in diag.iter().enumerate() {
            out.data[i * dim + i] = Complex::new(d, T::zero());
        }
        Ok(out)
    }

    pub fn zeros_like(&self) -> Self {
        Self::raw(self.dim, vec![Complex::new(T::zero(), T::zero()); self.dim * self.dim])
    }

    pub fn identity_like(&self) -> Self {
        let mut out = self.zeros_like();
        for i in 0..self.dim {
            out.data[i * self.dim + i] = Complex::new(T::one(), T::zero());
        }
        out
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits, `log2(dim)`.
    pub fn qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex<T>) {
        self.data[row * self.dim + col] = value;
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// Real parts of the diagonal.
    pub fn real_diagonal(&self) -> Vec<T> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        Self::from_fn_unchecked(n, |i, j| self.get(j, i).conj())
    }

    fn from_fn_unchecked(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        Self::raw(dim, (0..dim * dim).map(|k| f(k / dim, k % dim)).collect())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self.get(i, i)).fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
    }

    pub fn scale(&self, factor: T) -> Self {
        Self::raw(self.dim, self.data.iter().map(|&z| z * factor).collect())
    }

    pub fn scale_complex(&self, factor: Complex<T>) -> Self {
        Self::raw(self.dim, self.data.iter().map(|&z| z * factor).collect())
    }

    /// `self + z * I`.
    pub fn shift(&self, z: T) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.data[i * self.dim + i].re += z;
        }
        out
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (a, b)| m.max((a - b).norm()))
    }

    /// Max-abs entry of `A - A^dagger`.
    pub fn hermiticity_error(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Max-abs entry of `A + A^dagger`.
    pub fn anti_hermiticity_error(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) + self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Max-abs off-diagonal entry.
    pub fn off_diagonal_max(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(self.get(i, j).norm());
                }
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_error().as_f64() <= T::STRUCTURE_TOL
    }

    pub fn is_diagonal(&self) -> bool {
        self.off_diagonal_max().as_f64() <= T::STRUCTURE_TOL
    }

    /// Max-abs entry of `U U^dagger - I`.
    pub fn unitarity_error(&self) -> T {
        let prod = self.matmul(&self.adjoint());
        prod.max_abs_diff(&self.identity_like())
    }

    /// `(A + A^dagger) / 2`.
    pub fn symmetrized(&self) -> Self {
        let n = self.dim;
        let half = T::of(0.5);
        Self::from_fn_unchecked(n, |i, j| (self.get(i, j) + self.get(j, i).conj()) * half)
    }

    /// Matrix product `self * rhs`; panics on dimension mismatch.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let zero = Complex::new(T::zero(), T::zero());
        let mut out = vec![zero; n * n];
        for i in 0..n {
            let row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == zero {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Self::raw(n, out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.dim, v.len(), "dimension mismatch");
        let n = self.dim;
        (0..n)
            .map(|i| {
                self.data[i * n..(i + 1) * n]
                    .iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }
}

impl<'a, T: Real> Add<&'a Operator<T>> for &'a Operator<T> {
    type Output = Operator<T>;
    fn add(self, rhs: &'a Operator<T>) -> Operator<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Operator::raw(self.dim, self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect())
    }
}

impl<'a, T: Real> Sub<&'a Operator<T>> for &'a Operator<T> {
    type Output = Operator<T>;
    fn sub(self, rhs: &'a Operator<T>) -> Operator<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Operator::raw(self.dim, self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect())
    }
}

impl<'a, T: Real> Mul<&'a Operator<T>> for &'a Operator<T> {
    type Output = Operator<T>;
    fn mul(self, rhs: &'a Operator<T>) -> Operator<T> {
        self.matmul(rhs)
    }
}

/// Normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Wraps amplitudes that must already have unit norm.
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        check_power_of_two(amplitudes.len())?;
        let norm = euclidean_norm(&amplitudes);
        if (norm - T::one()).abs().as_f64() > T::NORM_TOL {
            return Err(DbiError::NotNormalized(norm.as_f64()));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        check_power_of_two(amplitudes.len())?;
        let norm = euclidean_norm(&amplitudes);
        if norm == T::zero() || !norm.is_finite() {
            return Err(DbiError::NotNormalized(norm.as_f64()));
        }
        Ok(Self { amplitudes: amplitudes.into_iter().map(|z| z / norm).collect() })
    }

    /// Computational basis state `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_power_of_two(dim)?;
        if index >= dim {
            return Err(DbiError::InvalidArgument(format!("basis index {index} out of range for dim {dim}")));
        }
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        amplitudes[index] = Complex::new(T::one(), T::zero());
        Ok(Self { amplitudes })
    }

    /// Seeded random state with uniformly drawn real and imaginary parts.
    pub fn random(dim: usize, seed: u64) -> Result<Self> {
        check_power_of_two(dim)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps = (0..dim)
            .map(|_| Complex::new(T::of(rng.gen_range(-1.0..1.0)), T::of(rng.gen_range(-1.0..1.0))))
            .collect();
        Self::normalized(amps)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    /// `<self|op|self>`.
    pub fn expectation(&self, op: &Operator<T>) -> Result<Complex<T>> {
        check_same_dim(op.dim(), self.dim())?;
        Ok(inner(&self.amplitudes, &op.apply(&self.amplitudes)))
    }
}

fn euclidean_norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// `<a|b>` with the first argument conjugated.
pub(crate) fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}

/// Hilbert-Schmidt inner product `Tr(A^dagger B)`.
pub fn hs_inner<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Result<Complex<T>> {
    check_same_dim(a.dim, b.dim)?;
    Ok(inner(&a.data, &b.data))
}

/// Hilbert-Schmidt (Frobenius) norm.
pub fn hs_norm<T: Real>(a: &Operator<T>) -> T {
    euclidean_norm(&a.data)
}

/// `Tr(A B)` without forming the product.
pub fn trace_product<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Result<Complex<T>> {
    check_same_dim(a.dim, b.dim)?;
    let n = a.dim;
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..n {
        for j in 0..n {
            acc += a.data[i * n + j] * b.data[j * n + i];
        }
    }
    Ok(acc)
}

/// Diagonal restriction.
pub fn delta_restrict<T: Real>(a: &Operator<T>) -> Operator<T> {
    let mut out = a.zeros_like();
    for i in 0..a.dim {
        out.data[i * a.dim + i] = a.data[i * a.dim + i];
    }
    out
}

/// Off-diagonal restriction, `a - delta_restrict(a)`.
pub fn sigma_restrict<T: Real>(a: &Operator<T>) -> Operator<T> {
    let mut out = a.clone();
    for i in 0..a.dim {
        out.data[i * a.dim + i] = Complex::new(T::zero(), T::zero());
    }
    out
}

/// `AB - BA`.
pub fn commutator<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Result<Operator<T>> {
    check_same_dim(a.dim, b.dim)?;
    Ok(&a.matmul(b) - &b.matmul(a))
}

/// Eigendecomposition of a Hermitian operator.
#[derive(Clone, Debug)]
pub struct Eigh<T> {
    /// Eigenvalues, nondecreasing.
    pub values: Vec<T>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: Operator<T>,
}

impl<T: Real> Eigh<T> {
    /// `V diag(f(lambda)) V^dagger`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> Complex<T>) -> Operator<T> {
        let n = self.vectors.dim;
        let weights: Vec<Complex<T>> = self.values.iter().map(|&l| f(l)).collect();
        let mut scaled = self.vectors.clone();
        for i in 0..n {
            for (j, w) in weights.iter().enumerate() {
                scaled.data[i * n + j] *= w;
            }
        }
        scaled.matmul(&self.vectors.adjoint())
    }

    pub fn reconstruct(&self) -> Operator<T> {
        self.map_spectrum(|l| Complex::new(l, T::zero()))
    }

    /// `e^{i t A}` for the decomposed operator `A`.
    pub fn phase_exp(&self, t: T) -> Operator<T> {
        self.map_spectrum(|l| Complex::from_polar(T::one(), t * l))
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// The input is symmetrized before the sweeps start.
pub fn eigh<T: Real>(a: &Operator<T>) -> Result<Eigh<T>> {
    let dev = a.hermiticity_error();
    if !(dev.as_f64() <= T::STRUCTURE_TOL) {
        return Err(DbiError::NotHermitian(dev.as_f64()));
    }
    let n = a.dim;
    let mut m = a.symmetrized().data;
    let mut v = a.identity_like().data;
    let threshold = T::of(T::JACOBI_TOL) * hs_norm(a);
    let zero = Complex::new(T::zero(), T::zero());

    let off_mass = |m: &[Complex<T>]| -> T {
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += m[i * n + j].norm_sqr();
                }
            }
        }
        acc.sqrt()
    };

    let mut converged = false;
    for _ in 0..MAX_JACOBI_SWEEPS {
        if off_mass(&m) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                let r = apq.norm();
                let app = m[p * n + p].re;
                let aqq = m[q * n + q].re;
                // entries this small carry too few bits for a unit phase;
                // dropping them moves eigenvalues by O(r^2)
                if r <= T::min_positive_value().sqrt() * (T::one() + app.abs() + aqq.abs()) {
                    m[p * n + q] = zero;
                    m[q * n + p] = zero;
                    continue;
                }
                let scaled = apq.unscale(apq.re.abs().max(apq.im.abs()));
                let phase = scaled.unscale(scaled.norm());
                let phase_conj = phase.conj();
                let theta = (aqq - app) / (r + r);
                let t = if theta.abs() > T::of(1e150) {
                    T::one() / (theta + theta)
                } else {
                    let t = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    if theta < T::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = akp * c - akq * phase_conj * s;
                    m[k * n + q] = akp * s + akq * phase_conj * c;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = apk * c - aqk * phase * s;
                    m[q * n + k] = apk * s + aqk * phase * c;
                }
                m[p * n + q] = zero;
                m[q * n + p] = zero;
                m[p * n + p] = Complex::new(m[p * n + p].re, T::zero());
                m[q * n + q] = Complex::new(m[q * n + q].re, T::zero());

                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * c - vkq * phase_conj * s;
                    v[k * n + q] = vkp * s + vkq * phase_conj * c;
                }
            }
        }
    }
    if !converged && off_mass(&m) > threshold {
        return Err(DbiError::NoConvergence(MAX_JACOBI_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].re.partial_cmp(&m[j * n + j].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| m[i * n + i].re).collect();
    let vectors = Operator::from_fn_unchecked(n, |row, col| v[row * n + order[col]]);
    Ok(Eigh { values, vectors })
}

/// `e^{s W}` for anti-Hermitian `W`, through the eigendecomposition of the
/// Hermitian matrix `iW`.
pub fn expm_antihermitian<T: Real>(w: &Operator<T>, s: T) -> Result<Operator<T>> {
    let dev = w.anti_hermiticity_error();
    if !(dev.as_f64() <= T::STRUCTURE_TOL) {
        return Err(DbiError::NotAntiHermitian(dev.as_f64()));
    }
    let k = w.scale_complex(Complex::new(T::zero(), T::one()));
    // W = -iK, so e^{sW} = e^{-isK}.
    Ok(eigh(&k)?.phase_exp(-s))
}

/// `U H U^dagger`.
pub fn conjugate<T: Real>(h: &Operator<T>, u: &Operator<T>) -> Result<Operator<T>> {
    check_same_dim(h.dim, u.dim)?;
    let dev = u.unitarity_error();
    if !(dev.as_f64() <= T::STRUCTURE_TOL) {
        return Err(DbiError::NotUnitary(dev.as_f64()));
    }
    Ok(u.matmul(h).matmul(&u.adjoint()))
}

/// Seeded random Hermitian matrix with entries uniform in `[-1, 1]`.
pub fn random_hermitian<T: Real>(dim: usize, seed: u64) -> Result<Operator<T>> {
    check_power_of_two(dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Operator::zeros(dim)?;
    for i in 0..dim {
        out.set(i, i, Complex::new(T::of(rng.gen_range(-1.0..1.0)), T::zero()));
        for j in (i + 1)..dim {
            let z = Complex::new(T::of(rng.gen_range(-1.0..1.0)), T::of(rng.gen_range(-1.0..1.0)));
            out.set(i, j, z);
            out.set(j, i, z.conj());
        }
    }
    Ok(out)
}

/// Seeded random unitary `e^{-iK}` for a random Hermitian `K`.
pub fn random_unitary<T: Real>(dim: usize, seed: u64) -> Result<Operator<T>> {
    let k = random_hermitian::<T>(dim, seed)?;
    Ok(eigh(&k)?.phase_exp(-T::one()))
}
