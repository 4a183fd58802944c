//! Double-bracket rotations and the iteration driver.
//!
//! One rotation maps `H -> e^{sW} H e^{-sW}` with `W = [D, H]`. A
//! [`DbiState`] records every rotation applied since the input Hamiltonian so
//! that runs can be replayed exactly.

use std::fmt::Write as _;

use num_complex::Complex;

use crate::costs::{f1_off_diagonal_norm, CostFunction};
use crate::error::{DbiError, Result};
use crate::generators::{hamming_search, optimize_gd, realize, GdConfig, GeneratorSpec};
use crate::linalg::{commutator, delta_restrict, eigh, hs_norm, Eigh, Operator};
use crate::scalar::Real;
use crate::scheduling::{schedule, ScheduleConfig, ScheduleOutcome};

/// Default relative cost gain below which a run stops.
pub const DEFAULT_MIN_RELATIVE_GAIN: f64 = 1e-3;

fn check_hermitian<T: Real>(h: &Operator<T>) -> Result<()> {
    let dev = h.hermiticity_error();
    if !(dev.as_f64() <= T::STRUCTURE_TOL) {
        return Err(DbiError::NotHermitian(dev.as_f64()));
    }
    Ok(())
}

fn check_diagonal_generator<T: Real>(d: &Operator<T>) -> Result<()> {
    let off = d.off_diagonal_max();
    if !(off.as_f64() <= T::STRUCTURE_TOL) {
        return Err(DbiError::NotDiagonal(off.as_f64()));
    }
    let imag = d.diagonal().iter().fold(T::zero(), |m, z| m.max(z.im.abs()));
    if imag.as_f64() > T::STRUCTURE_TOL {
        return Err(DbiError::NotHermitian(imag.as_f64()));
    }
    Ok(())
}

/// `W = DH - HD` for a diagonal generator `D`.
pub fn bracket<T: Real>(d: &Operator<T>, h: &Operator<T>) -> Result<Operator<T>> {
    check_diagonal_generator(d)?;
    commutator(d, h)
}

/// `[Gamma_0, ..., Gamma_{n_max}]` with `Gamma_0 = H`, `Gamma_n = [W, Gamma_{n-1}]`.
pub fn nested_commutators<T: Real>(w: &Operator<T>, h: &Operator<T>, n_max: usize) -> Result<Vec<Operator<T>>> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(h.clone());
    for n in 1..=n_max {
        let next = commutator(w, &out[n - 1])?;
        out.push(next);
    }
    Ok(out)
}

/// The rotation family `s -> e^{sW} H e^{-sW}` for fixed `H` and `D`.
///
/// Diagonalizes `iW` once; every later evaluation costs two matrix products.
#[derive(Clone, Debug)]
pub struct DbrFlow<T> {
    eig: Eigh<T>,
    /// `H` in the eigenbasis of `iW`.
    rotated: Operator<T>,
    norm_sq: T,
}

impl<T: Real> DbrFlow<T> {
    pub fn new(h: &Operator<T>, d: &Operator<T>) -> Result<Self> {
        check_hermitian(h)?;
        let w = bracket(d, h)?;
        let k = w.scale_complex(Complex::new(T::zero(), T::one()));
        let eig = eigh(&k)?;
        let rotated = eig.vectors.adjoint().matmul(h).matmul(&eig.vectors);
        let norm_sq = hs_norm(h).powi(2);
        Ok(Self { eig, rotated, norm_sq })
    }

    fn phases(&self, s: T) -> Vec<Complex<T>> {
        self.eig.values.iter().map(|&l| Complex::from_polar(T::one(), -s * l)).collect()
    }

    /// `e^{sW} H e^{-sW}`, symmetrized.
    pub fn at(&self, s: T) -> Operator<T> {
        // e^{sW} = V diag(e^{-is lambda}) V^dagger with iW = V diag(lambda) V^dagger
        let n = self.rotated.dim();
        let phases = self.phases(s);
        let inner = Operator::from_fn(n, |a, b| phases[a] * self.rotated.get(a, b) * phases[b].conj())
            .expect("dimension inherited from a valid operator");
        self.eig.vectors.matmul(&inner).matmul(&self.eig.vectors.adjoint()).symmetrized()
    }

    /// `||sigma(H(s))||` from the diagonal of `H(s)` alone, using
    /// `||sigma(A)||^2 = ||A||^2 - ||Delta(A)||^2`.
    pub fn off_diagonal_norm_at(&self, s: T) -> T {
        let n = self.rotated.dim();
        let phases = self.phases(s);
        let g = self.rotated.entries();
        let v = self.eig.vectors.entries();
        let zero = Complex::new(T::zero(), T::zero());
        let mut x = vec![zero; n];
        let mut t = vec![zero; n];
        let mut diag_sq = T::zero();
        for a in 0..n {
            for b in 0..n {
                x[b] = v[a * n + b] * phases[b];
            }
            // t = x^T G, row by row so the inner loop has no reduction
            t.fill(zero);
            for (b, &xb) in x.iter().enumerate() {
                // eigenvectors of iW are block sparse for symmetric models
                if xb == zero {
                    continue;
                }
                for (tc, &gbc) in t.iter_mut().zip(&g[b * n..(b + 1) * n]) {
                    *tc += xb * gbc;
                }
            }
            let acc = t.iter().zip(&x).fold(zero, |acc, (tc, xc)| acc + tc * xc.conj());
            diag_sq += acc.re * acc.re;
        }
        (self.norm_sq - diag_sq).max(T::zero()).sqrt()
    }
}

/// One double-bracket rotation `e^{sW} H e^{-sW}`, `W = [D, H]`.
pub fn dbr_step<T: Real>(h: &Operator<T>, d: &Operator<T>, s: T) -> Result<Operator<T>> {
    Ok(DbrFlow::new(h, d)?.at(s))
}

/// How each step's diagonal generator is chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorPolicy<T> {
    /// A single generator realized on the input Hamiltonian and reused
    /// every step.
    Fixed(GeneratorSpec<T>),
    /// `D_k = Delta(H_k)`, the canonical bracket.
    Canonical,
    /// Per-step gradient descent within a parametrized family.
    GradientDescent { template: GeneratorSpec<T>, gd: GdConfig },
    /// Per-step exhaustive search over Pauli-Z products.
    PauliZSearch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DbiMode {
    Bhmm,
    Gww,
    Adaptive,
}

impl<T> GeneratorPolicy<T> {
    pub fn mode(&self) -> DbiMode {
        match self {
            GeneratorPolicy::Fixed(_) => DbiMode::Bhmm,
            GeneratorPolicy::Canonical => DbiMode::Gww,
            GeneratorPolicy::GradientDescent { .. } | GeneratorPolicy::PauliZSearch => DbiMode::Adaptive,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord<T> {
    pub generator: GeneratorSpec<T>,
    pub d_realized: Operator<T>,
    pub s: T,
    pub cost_before: T,
    pub cost_after: T,
    /// Off-diagonal norm after the step.
    pub f1: T,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RunStatus {
    /// All requested steps were applied.
    Completed,
    /// Stopped because the next step would gain too little.
    MarginalGain,
    /// Stopped because a step could not be scheduled or optimized.
    Failed(DbiError),
}

#[derive(Clone, Debug)]
pub struct DbiState<T> {
    pub h0: Operator<T>,
    pub h_current: Operator<T>,
    pub steps: Vec<StepRecord<T>>,
    pub mode: DbiMode,
    pub status: RunStatus,
}

impl<T: Real> DbiState<T> {
    pub fn new(h0: Operator<T>, mode: DbiMode) -> Result<Self> {
        check_hermitian(&h0)?;
        Ok(Self { h_current: h0.clone(), h0, steps: Vec::new(), mode, status: RunStatus::Completed })
    }

    /// Re-applies the logged rotations to `h0`.
    pub fn replay(&self) -> Result<Operator<T>> {
        let mut h = self.h0.clone();
        for step in &self.steps {
            h = DbrFlow::new(&h, &step.d_realized)?.at(step.s);
        }
        Ok(h)
    }

    pub fn total_duration(&self) -> T {
        self.steps.iter().fold(T::zero(), |acc, st| acc + st.s)
    }

    /// Off-diagonal norm after each step, starting with the input.
    pub fn f1_trajectory(&self) -> Vec<T> {
        std::iter::once(f1_off_diagonal_norm(&self.h0)).chain(self.steps.iter().map(|s| s.f1)).collect()
    }

    /// CSV with columns `step,s,cost_before,cost_after,f1,generator_tag`.
    ///
    /// Row 0 describes the input (`s = 0`, tag `initial`); floats carry 17
    /// significant digits.
    pub fn trajectory_csv(&self, initial_cost: T) -> String {
        let mut out = String::from("step,s,cost_before,cost_after,f1,generator_tag\n");
        let f1_0 = f1_off_diagonal_norm(&self.h0);
        writeln!(out, "0,{},{},{},{},initial", fmt17(T::zero()), fmt17(initial_cost), fmt17(initial_cost), fmt17(f1_0))
            .unwrap();
        for (k, st) in self.steps.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                k + 1,
                fmt17(st.s),
                fmt17(st.cost_before),
                fmt17(st.cost_after),
                fmt17(st.f1),
                st.generator.tag()
            )
            .unwrap();
        }
        out
    }
}

/// Float with 17 significant digits.
pub fn fmt17<T: Real>(x: T) -> String {
    format!("{:.16e}", x.as_f64())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DbiOptions {
    pub n_steps: usize,
    /// Stop when `(cost_before - cost_after) / |cost_before|` of the
    /// scheduled step falls below this.
    pub min_relative_gain: f64,
}

impl DbiOptions {
    pub fn steps(n_steps: usize) -> Self {
        Self { n_steps, min_relative_gain: DEFAULT_MIN_RELATIVE_GAIN }
    }
}

/// Runs `n_steps` rotations with the default early-stop threshold.
pub fn dbi_run<T: Real>(
    h0: &Operator<T>,
    policy: &GeneratorPolicy<T>,
    sched: &ScheduleConfig,
    cost: &CostFunction<T>,
    n_steps: usize,
) -> Result<DbiState<T>> {
    dbi_run_with(h0, policy, sched, cost, &DbiOptions::steps(n_steps))
}

struct Choice<T> {
    spec: GeneratorSpec<T>,
    d: Operator<T>,
    outcome: ScheduleOutcome<T>,
}

fn choose<T: Real>(
    h: &Operator<T>,
    policy: &GeneratorPolicy<T>,
    fixed: Option<&Operator<T>>,
    sched: &ScheduleConfig,
    cost: &CostFunction<T>,
) -> Result<Choice<T>> {
    match policy {
        GeneratorPolicy::Fixed(spec) => {
            let d = fixed.expect("fixed generator realized up front").clone();
            let outcome = schedule(h, &d, cost, sched)?;
            Ok(Choice { spec: spec.clone(), d, outcome })
        }
        GeneratorPolicy::Canonical => {
            let d = delta_restrict(h);
            let outcome = schedule(h, &d, cost, sched)?;
            Ok(Choice { spec: GeneratorSpec::Dephasing, d, outcome })
        }
        GeneratorPolicy::GradientDescent { template, gd } => {
            let sel = optimize_gd(h, template, cost, sched, gd)?;
            Ok(Choice { spec: sel.spec, d: sel.d, outcome: sel.outcome })
        }
        GeneratorPolicy::PauliZSearch => {
            let sel = hamming_search(h, cost, sched)?;
            Ok(Choice { spec: sel.spec, d: sel.d, outcome: sel.outcome })
        }
    }
}

/// Runs a double-bracket iteration.
///
/// Stops early, without applying the step, once the scheduled relative gain
/// drops below `opts.min_relative_gain`; a step that cannot be chosen ends
/// the run with [`RunStatus::Failed`] and the partial trajectory. Only
/// invalid inputs are reported through `Err`.
pub fn dbi_run_with<T: Real>(
    h0: &Operator<T>,
    policy: &GeneratorPolicy<T>,
    sched: &ScheduleConfig,
    cost: &CostFunction<T>,
    opts: &DbiOptions,
) -> Result<DbiState<T>> {
    sched.validate()?;
    let mut state = DbiState::new(h0.clone(), policy.mode())?;
    let fixed = match policy {
        GeneratorPolicy::Fixed(spec) => Some(realize(spec, Some(h0))?),
        _ => None,
    };
    let min_gain = T::of(opts.min_relative_gain);

    for _ in 0..opts.n_steps {
        let choice = match choose(&state.h_current, policy, fixed.as_ref(), sched, cost) {
            Ok(c) => c,
            Err(e) => {
                state.status = RunStatus::Failed(e);
                return Ok(state);
            }
        };
        let before = choice.outcome.cost_at_zero;
        let after = choice.outcome.cost;
        let gain = if before == T::zero() { T::zero() } else { (before - after) / before.abs() };
        if choice.outcome.no_gain || !(gain >= min_gain) || gain == T::zero() {
            state.status = RunStatus::MarginalGain;
            return Ok(state);
        }
        let next = DbrFlow::new(&state.h_current, &choice.d)?.at(choice.outcome.s);
        let f1 = f1_off_diagonal_norm(&next);
        state.steps.push(StepRecord {
            generator: choice.spec,
            d_realized: choice.d,
            s: choice.outcome.s,
            cost_before: before,
            cost_after: after,
            f1,
        });
        state.h_current = next;
    }
    state.status = RunStatus::Completed;
    Ok(state)
}
