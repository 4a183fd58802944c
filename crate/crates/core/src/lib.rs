//! Double-bracket iterations (DBIs) for diagonalizing small quantum
//! many-body Hamiltonians.
//!
//! A double-bracket rotation conjugates a Hamiltonian `H` by `e^{sW}` with
//! `W = [D, H]` for a diagonal generator `D`. Repeating this drives `H`
//! towards diagonal form. The crate covers the three sub-problems of
//! building such an iteration:
//!
//! * [`scheduling`]: picking the duration `s` of each rotation,
//! * [`generators`]: picking the diagonal generator `D`,
//! * [`product_formulas`]: approximating the rotation unitary by products of
//!   plain Hamiltonian and diagonal evolutions.
//!
//! All numerics are generic over the real scalar ([`Real`], implemented for
//! `f32` and `f64`). The `*64` aliases below fix the scalar to `f64`, which
//! is what the experiment runner uses.

pub mod costs;
pub mod dbr;
pub mod error;
pub mod generators;
pub mod hamiltonians;
pub mod linalg;
pub mod product_formulas;
mod roots;
pub mod scalar;
pub mod scheduling;

pub use costs::CostFunction;
pub use dbr::{dbi_run, dbr_step, DbiState, GeneratorPolicy, StepRecord};
pub use error::{DbiError, Result};
pub use generators::{GdConfig, GeneratorSpec};
pub use linalg::{Eigh, Operator, StateVector};
pub use product_formulas::FormulaKind;
pub use scalar::Real;
pub use scheduling::{ScheduleConfig, ScheduleOutcome, SigmaPolynomial, Strategy};

pub type Operator64 = Operator<f64>;
pub type Operator32 = Operator<f32>;
pub type StateVector64 = StateVector<f64>;
pub type StateVector32 = StateVector<f32>;
pub type CostFunction64 = CostFunction<f64>;
pub type GeneratorSpec64 = GeneratorSpec<f64>;
pub type DbiState64 = DbiState<f64>;
pub type GeneratorPolicy64 = GeneratorPolicy<f64>;
pub type SigmaPolynomial64 = SigmaPolynomial<f64>;
pub type ScheduleOutcome64 = ScheduleOutcome<f64>;
