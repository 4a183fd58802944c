//! Product-formula approximations of the rotation unitary `e^{-s[D, H]}`
//! built only from evolutions under `H` and `D`.
//!
//! * group commutator (`gc`), error `O(s^{3/2})`:
//!   `e^{i sqrt(s) H} e^{-i sqrt(s) D} e^{-i sqrt(s) H} e^{i sqrt(s) D}`
//! * higher-order formula (`hopf`), error `O(s^2)`:
//!   `e^{i phi sqrt(s) H} e^{-i phi sqrt(s) D} e^{-i sqrt(s) H}
//!    e^{i (phi+1) sqrt(s) D} e^{i (1-phi) sqrt(s) H} e^{-i sqrt(s) D}`

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::costs::f1_off_diagonal_norm;
use crate::dbr::bracket;
use crate::error::{DbiError, Result};
use crate::linalg::{eigh, expm_antihermitian, hs_norm, Eigh, Operator};
use crate::scalar::Real;

/// `(sqrt(5) - 1) / 2`.
pub const PHI: f64 = 0.618_033_988_749_894_9;

/// Errors below this are round-off and left out of slope fits.
pub const ERROR_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormulaKind {
    #[serde(rename = "gc")]
    GroupCommutator,
    Hopf,
}

impl FormulaKind {
    pub fn phi<T: Real>() -> T {
        T::of(PHI)
    }

    /// Evolutions under `H` per formula step.
    pub fn hamiltonian_queries(self) -> usize {
        match self {
            FormulaKind::GroupCommutator => 2,
            FormulaKind::Hopf => 3,
        }
    }

    /// Leading error order in `s`.
    pub fn order(self) -> f64 {
        match self {
            FormulaKind::GroupCommutator => 1.5,
            FormulaKind::Hopf => 2.0,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            FormulaKind::GroupCommutator => "gc",
            FormulaKind::Hopf => "hopf",
        }
    }
}

impl fmt::Display for FormulaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for FormulaKind {
    type Err = DbiError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gc" => Ok(FormulaKind::GroupCommutator),
            "hopf" => Ok(FormulaKind::Hopf),
            other => Err(DbiError::InvalidArgument(format!("unknown product formula {other:?}"))),
        }
    }
}

/// Evolutions `e^{itH}` and `e^{itD}` for fixed `H` and diagonal `D`, with
/// `H` diagonalized once.
#[derive(Clone, Debug)]
pub struct FormulaPropagator<T> {
    h: Operator<T>,
    h_eig: Eigh<T>,
    d: Vec<T>,
}

impl<T: Real> FormulaPropagator<T> {
    pub fn new(h: &Operator<T>, d: &Operator<T>) -> Result<Self> {
        // validates d and the dimensions
        bracket(d, h)?;
        Ok(Self { h: h.clone(), h_eig: eigh(h)?, d: d.real_diagonal() })
    }

    fn evolve_h(&self, t: T) -> Operator<T> {
        self.h_eig.phase_exp(t)
    }

    fn evolve_d(&self, t: T) -> Operator<T> {
        let n = self.d.len();
        Operator::from_fn(n, |a, b| {
            if a == b {
                Complex::from_polar(T::one(), t * self.d[a])
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
        .expect("dimension inherited from a valid operator")
    }

    pub fn unitary(&self, kind: FormulaKind, s: T) -> Result<Operator<T>> {
        if s < T::zero() {
            return Err(DbiError::InvalidArgument(format!("rotation duration must be nonnegative, got {s}")));
        }
        let a = s.sqrt();
        let factors = match kind {
            FormulaKind::GroupCommutator => vec![self.evolve_h(a), self.evolve_d(-a), self.evolve_h(-a), self.evolve_d(a)],
            FormulaKind::Hopf => {
                let phi = FormulaKind::phi::<T>();
                vec![
                    self.evolve_h(phi * a),
                    self.evolve_d(-phi * a),
                    self.evolve_h(-a),
                    self.evolve_d((phi + T::one()) * a),
                    self.evolve_h((T::one() - phi) * a),
                    self.evolve_d(-a),
                ]
            }
        };
        Ok(factors.iter().skip(1).fold(factors[0].clone(), |acc, f| acc.matmul(f)))
    }

    /// `V^dagger H V` with `V` the formula unitary, symmetrized.
    pub fn step(&self, kind: FormulaKind, s: T) -> Result<Operator<T>> {
        let v = self.unitary(kind, s)?;
        Ok(v.adjoint().matmul(&self.h).matmul(&v).symmetrized())
    }
}

/// `e^{i sqrt(s) H} e^{-i sqrt(s) D} e^{-i sqrt(s) H} e^{i sqrt(s) D}`.
pub fn gc_unitary<T: Real>(h: &Operator<T>, d: &Operator<T>, s: T) -> Result<Operator<T>> {
    FormulaPropagator::new(h, d)?.unitary(FormulaKind::GroupCommutator, s)
}

/// The six-factor formula with golden-ratio weights.
pub fn hopf_unitary<T: Real>(h: &Operator<T>, d: &Operator<T>, s: T) -> Result<Operator<T>> {
    FormulaPropagator::new(h, d)?.unitary(FormulaKind::Hopf, s)
}

/// `e^{-s[D, H]}`, the unitary the formulas approximate.
pub fn exact_dbr_unitary<T: Real>(h: &Operator<T>, d: &Operator<T>, s: T) -> Result<Operator<T>> {
    expm_antihermitian(&bracket(d, h)?, -s)
}

/// One rotation with the exact unitary replaced by a product formula:
/// `V^dagger H V`, which tends to `e^{sW} H e^{-sW}` as `s -> 0`.
pub fn formula_dbr_step<T: Real>(h: &Operator<T>, d: &Operator<T>, s: T, kind: FormulaKind) -> Result<Operator<T>> {
    FormulaPropagator::new(h, d)?.step(kind, s)
}

/// `||V - R||_HS`.
pub fn approx_error<T: Real>(v: &Operator<T>, r: &Operator<T>) -> Result<T> {
    if v.dim() != r.dim() {
        return Err(DbiError::DimensionMismatch { left: v.dim(), right: r.dim() });
    }
    Ok(hs_norm(&(v - r)))
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Least-squares slope of `ln(err)` against `ln(s)`, skipping errors
/// below [`ERROR_FLOOR`]. `None` with fewer than two usable points.
pub fn fit_loglog_slope(s: &[f64], err: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        s.iter().zip(err).filter(|(&x, &e)| x > 0.0 && e > ERROR_FLOOR).map(|(&x, &e)| (x.ln(), e.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

/// `||V(s) - e^{-s[D,H]}||_HS` at each `s`.
pub fn error_curve<T: Real>(h: &Operator<T>, d: &Operator<T>, kind: FormulaKind, s_values: &[f64]) -> Result<Vec<f64>> {
    let prop = FormulaPropagator::new(h, d)?;
    let w = bracket(d, h)?;
    let k = w.scale_complex(Complex::new(T::zero(), T::one()));
    let k_eig = eigh(&k)?;
    s_values
        .par_iter()
        .map(|&s| {
            // e^{-sW} = V diag(e^{i s lambda}) V^dagger with iW = V diag(lambda) V^dagger
            let r = k_eig.phase_exp(T::of(s));
            Ok(approx_error(&prop.unitary(kind, T::of(s))?, &r)?.as_f64())
        })
        .collect()
}

/// Fitted error order over `s_values` (at least two usable points).
pub fn error_slope<T: Real>(h: &Operator<T>, d: &Operator<T>, kind: FormulaKind, s_values: &[f64]) -> Result<f64> {
    let err = error_curve(h, d, kind, s_values)?;
    fit_loglog_slope(s_values, &err)
        .ok_or_else(|| DbiError::InvalidArgument("too few error samples above the round-off floor".into()))
}

/// Off-diagonal norm after one formula step at each `s`.
pub fn formula_f1_curve<T: Real>(h: &Operator<T>, d: &Operator<T>, kind: FormulaKind, s_values: &[T]) -> Result<Vec<T>> {
    let prop = FormulaPropagator::new(h, d)?;
    s_values.par_iter().map(|&s| Ok(f1_off_diagonal_norm(&prop.step(kind, s)?))).collect()
}
