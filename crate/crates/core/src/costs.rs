//! Diagonalization cost functions.
//!
//! | tag | cost |
//! |-----|------|
//! | `f1` | off-diagonal norm `||sigma(H)||_HS` |
//! | `f2` | least squares `||D||^2 / 2 - Tr(H D)` |
//! | `f3` | energy `<psi|H|psi>` |
//! | `f4` | energy fluctuation `sqrt(<H^2> - <H>^2)` |

use std::fmt;
use std::str::FromStr;

use crate::error::{DbiError, Result};
use crate::linalg::{hs_norm, sigma_restrict, trace_product, Operator, StateVector};
use crate::scalar::Real;

/// Variance values this far below zero are treated as round-off.
const VARIANCE_FLOOR: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CostKind {
    OffDiagonalNorm,
    LeastSquares,
    Energy,
    EnergyFluctuation,
}

impl CostKind {
    pub fn tag(self) -> &'static str {
        match self {
            CostKind::OffDiagonalNorm => "f1",
            CostKind::LeastSquares => "f2",
            CostKind::Energy => "f3",
            CostKind::EnergyFluctuation => "f4",
        }
    }
}

impl FromStr for CostKind {
    type Err = DbiError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f1" => Ok(CostKind::OffDiagonalNorm),
            "f2" => Ok(CostKind::LeastSquares),
            "f3" => Ok(CostKind::Energy),
            "f4" => Ok(CostKind::EnergyFluctuation),
            other => Err(DbiError::InvalidArgument(format!("unknown cost {other:?}, expected f1..f4"))),
        }
    }
}

impl fmt::Display for CostKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A cost function together with its reference data.
#[derive(Clone, Debug, PartialEq)]
pub enum CostFunction<T> {
    OffDiagonalNorm,
    /// With `reference_d: None` the diagonal operator is the generator of the
    /// rotation being scheduled, which makes the cost follow a DBI's `D_k`.
    LeastSquares { reference_d: Option<Operator<T>> },
    Energy { reference_state: StateVector<T> },
    EnergyFluctuation { reference_state: StateVector<T> },
}

impl<T: Real> CostFunction<T> {
    /// Validating constructor for loosely typed inputs (configs).
    pub fn new(
        kind: CostKind,
        reference_d: Option<Operator<T>>,
        reference_state: Option<StateVector<T>>,
    ) -> Result<Self> {
        if kind != CostKind::LeastSquares && reference_d.is_some() {
            return Err(DbiError::InvalidArgument(format!("{kind} takes no reference operator")));
        }
        let wants_state = matches!(kind, CostKind::Energy | CostKind::EnergyFluctuation);
        if !wants_state && reference_state.is_some() {
            return Err(DbiError::InvalidArgument(format!("{kind} takes no reference state")));
        }
        match kind {
            CostKind::OffDiagonalNorm => Ok(CostFunction::OffDiagonalNorm),
            CostKind::LeastSquares => {
                if let Some(d) = &reference_d {
                    check_diagonal(d)?;
                }
                Ok(CostFunction::LeastSquares { reference_d })
            }
            CostKind::Energy => Ok(CostFunction::Energy {
                reference_state: reference_state.ok_or(DbiError::MissingReference("f3"))?,
            }),
            CostKind::EnergyFluctuation => Ok(CostFunction::EnergyFluctuation {
                reference_state: reference_state.ok_or(DbiError::MissingReference("f4"))?,
            }),
        }
    }

    pub fn kind(&self) -> CostKind {
        match self {
            CostFunction::OffDiagonalNorm => CostKind::OffDiagonalNorm,
            CostFunction::LeastSquares { .. } => CostKind::LeastSquares,
            CostFunction::Energy { .. } => CostKind::Energy,
            CostFunction::EnergyFluctuation { .. } => CostKind::EnergyFluctuation,
        }
    }

    /// Evaluates the cost on `h`. A generator-following least-squares cost
    /// has no reference here and fails with `MissingReference`.
    pub fn evaluate(&self, h: &Operator<T>) -> Result<T> {
        match self {
            CostFunction::OffDiagonalNorm => Ok(f1_off_diagonal_norm(h)),
            CostFunction::LeastSquares { reference_d: Some(d) } => f2_least_squares(h, d),
            CostFunction::LeastSquares { reference_d: None } => Err(DbiError::MissingReference("f2")),
            CostFunction::Energy { reference_state } => f3_energy(h, reference_state),
            CostFunction::EnergyFluctuation { reference_state } => f4_energy_fluctuation(h, reference_state),
        }
    }

    /// Like [`evaluate`](Self::evaluate), with `generator` standing in for a
    /// missing least-squares reference.
    pub fn evaluate_for_generator(&self, h: &Operator<T>, generator: &Operator<T>) -> Result<T> {
        match self {
            CostFunction::LeastSquares { reference_d: None } => f2_least_squares(h, generator),
            _ => self.evaluate(h),
        }
    }
}

/// Dispatches to `f1`..`f4`.
pub fn evaluate<T: Real>(cost: &CostFunction<T>, h: &Operator<T>) -> Result<T> {
    cost.evaluate(h)
}

fn check_diagonal<T: Real>(d: &Operator<T>) -> Result<()> {
    let off = d.off_diagonal_max();
    if off.as_f64() > T::STRUCTURE_TOL {
        return Err(DbiError::NotDiagonal(off.as_f64()));
    }
    Ok(())
}

pub fn f1_off_diagonal_norm<T: Real>(h: &Operator<T>) -> T {
    hs_norm(&sigma_restrict(h))
}

pub fn f2_least_squares<T: Real>(h: &Operator<T>, d: &Operator<T>) -> Result<T> {
    check_diagonal(d)?;
    let tr = trace_product(h, d)?;
    let nd = hs_norm(d);
    Ok(T::of(0.5) * nd * nd - tr.re)
}

pub fn f3_energy<T: Real>(h: &Operator<T>, psi: &StateVector<T>) -> Result<T> {
    Ok(psi.expectation(h)?.re)
}

pub fn f4_energy_fluctuation<T: Real>(h: &Operator<T>, psi: &StateVector<T>) -> Result<T> {
    let mean = f3_energy(h, psi)?;
    let h_psi = h.apply(psi.amplitudes());
    let second: T = h_psi.iter().map(|z| z.norm_sqr()).sum();
    let variance = second - mean * mean;
    let floor = T::of(VARIANCE_FLOOR).max(T::epsilon() * T::of(16.0) * second);
    if variance < -floor {
        return Err(DbiError::NegativeVariance(variance.as_f64()));
    }
    Ok(variance.max(T::zero()).sqrt())
}
