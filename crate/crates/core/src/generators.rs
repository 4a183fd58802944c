//! Diagonal generators: parametrized families, realization as operators and
//! per-step optimization.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::costs::CostFunction;
use crate::error::{DbiError, Result};
use crate::hamiltonians::{z_eigenvalue, MAX_QUBITS};
use crate::linalg::{delta_restrict, eigh, hs_norm, Operator};
use crate::scalar::Real;
use crate::scheduling::{schedule, ScheduleConfig, ScheduleOutcome};

/// Seed used by the `shuffled` and `sampled` presets.
pub const DEFAULT_PRESET_SEED: u64 = 1;

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 13] = [
    "minmax",
    "maxmin",
    "shuffled",
    "sampled",
    "eigen",
    "dephasing",
    "b-constant",
    "b-linear",
    "b-quadratic",
    "nn-ising",
    "a2a-ising",
    "pauli-z",
    "full-diagonal",
];

/// Families accepted by [`gd_template`].
pub const GD_FAMILIES: [&str; 4] = ["magnetic", "nn-ising", "a2a-ising", "full-diagonal"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec<T> {
    /// Equispaced entries `min + i * delta`, `i = 1..=2^L`, spanning the
    /// diagonal of the context Hamiltonian.
    MinMax,
    MaxMin,
    ShuffledMinMax { seed: u64 },
    /// `2^L` draws with replacement from the min-max entries, sorted.
    SampledMinMax { seed: u64 },
    /// Eigenvalues of the context Hamiltonian, ascending.
    EigenSorted,
    /// Diagonal part of the context Hamiltonian.
    Dephasing,
    /// `sum_j alpha_j Z_j`.
    MagneticField { alpha: Vec<T> },
    /// `sum_j alpha_j Z_j + beta_j Z_j Z_{j+1}`; with open boundaries
    /// `beta_L` is unused.
    NnIsing { alpha: Vec<T>, beta: Vec<T>, boundary: Boundary },
    /// `sum_j alpha_j Z_j + sum_{j<j'} beta_{j,j'} Z_j Z_j'`.
    AllToAllIsing { alpha: Vec<T>, beta: Vec<Vec<T>> },
    /// `prod_{j : mu_j} Z_j`; `mu[0]` is qubit 1.
    PauliZProduct { mu: Vec<bool> },
    /// Explicit diagonal. An empty vector in a gradient-descent template
    /// means "start from the diagonal of the current Hamiltonian".
    FullDiagonal { d: Vec<T> },
}

impl<T: Real> GeneratorSpec<T> {
    pub fn needs_context(&self) -> bool {
        matches!(
            self,
            GeneratorSpec::MinMax
                | GeneratorSpec::MaxMin
                | GeneratorSpec::ShuffledMinMax { .. }
                | GeneratorSpec::SampledMinMax { .. }
                | GeneratorSpec::EigenSorted
                | GeneratorSpec::Dephasing
        )
    }

    /// Qubit count fixed by the parameters, if any.
    pub fn qubits(&self) -> Option<usize> {
        match self {
            GeneratorSpec::MagneticField { alpha }
            | GeneratorSpec::NnIsing { alpha, .. }
            | GeneratorSpec::AllToAllIsing { alpha, .. } => Some(alpha.len()),
            GeneratorSpec::PauliZProduct { mu } => Some(mu.len()),
            GeneratorSpec::FullDiagonal { d } if !d.is_empty() => Some(d.len().trailing_zeros() as usize),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            GeneratorSpec::MinMax => "minmax",
            GeneratorSpec::MaxMin => "maxmin",
            GeneratorSpec::ShuffledMinMax { .. } => "shuffled",
            GeneratorSpec::SampledMinMax { .. } => "sampled",
            GeneratorSpec::EigenSorted => "eigen",
            GeneratorSpec::Dephasing => "dephasing",
            GeneratorSpec::MagneticField { .. } => "magnetic",
            GeneratorSpec::NnIsing { .. } => "nn-ising",
            GeneratorSpec::AllToAllIsing { .. } => "a2a-ising",
            GeneratorSpec::PauliZProduct { .. } => "pauli-z",
            GeneratorSpec::FullDiagonal { .. } => "full-diagonal",
        }
    }

    /// Short label for CSV output; Pauli-Z products carry their bit string.
    pub fn tag(&self) -> String {
        match self {
            GeneratorSpec::PauliZProduct { mu } => format!("pauli-z:{}", bits_to_string(mu)),
            other => other.kind_name().to_string(),
        }
    }

    /// Flat real parameter vector of the continuous families.
    pub fn parameters(&self) -> Vec<T> {
        match self {
            GeneratorSpec::MagneticField { alpha } => alpha.clone(),
            GeneratorSpec::NnIsing { alpha, beta, .. } => alpha.iter().chain(beta).copied().collect(),
            GeneratorSpec::AllToAllIsing { alpha, beta } => {
                let l = alpha.len();
                let mut out = alpha.clone();
                for j in 0..l {
                    for k in j + 1..l {
                        out.push(beta[j][k]);
                    }
                }
                out
            }
            GeneratorSpec::FullDiagonal { d } => d.clone(),
            _ => Vec::new(),
        }
    }

    /// Inverse of [`parameters`](Self::parameters).
    pub fn with_parameters(&self, theta: &[T]) -> Result<Self> {
        let expect = |n: usize| {
            if theta.len() == n {
                Ok(())
            } else {
                Err(DbiError::BadLength { expected: n, got: theta.len() })
            }
        };
        match self {
            GeneratorSpec::MagneticField { alpha } => {
                expect(alpha.len())?;
                Ok(GeneratorSpec::MagneticField { alpha: theta.to_vec() })
            }
            GeneratorSpec::NnIsing { alpha, beta, boundary } => {
                expect(alpha.len() + beta.len())?;
                let (a, b) = theta.split_at(alpha.len());
                Ok(GeneratorSpec::NnIsing { alpha: a.to_vec(), beta: b.to_vec(), boundary: *boundary })
            }
            GeneratorSpec::AllToAllIsing { alpha, .. } => {
                let l = alpha.len();
                expect(l + l * (l - 1) / 2)?;
                let mut beta = vec![vec![T::zero(); l]; l];
                let mut it = theta[l..].iter();
                for j in 0..l {
                    for k in j + 1..l {
                        beta[j][k] = *it.next().expect("length checked");
                    }
                }
                Ok(GeneratorSpec::AllToAllIsing { alpha: theta[..l].to_vec(), beta })
            }
            GeneratorSpec::FullDiagonal { .. } => {
                check_dim(theta.len())?;
                Ok(GeneratorSpec::FullDiagonal { d: theta.to_vec() })
            }
            other => Err(DbiError::InvalidGenerator(format!("{} has no continuous parameters", other.kind_name()))),
        }
    }
}

/// Unit couplings on the pairs `j < j'`.
fn upper_ones<T: Real>(qubits: usize) -> Vec<Vec<T>> {
    (0..qubits).map(|j| (0..qubits).map(|k| if k > j { T::one() } else { T::zero() }).collect()).collect()
}

fn check_dim(n: usize) -> Result<()> {
    if n.is_power_of_two() {
        Ok(())
    } else {
        Err(DbiError::NotPowerOfTwo(n))
    }
}

fn bits_to_string(mu: &[bool]) -> String {
    mu.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn bits_from_str(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(DbiError::InvalidGenerator(format!("mu must be a bit string, found {other:?}"))),
        })
        .collect()
}

/// `mu` as an integer with `mu[0]` the most significant bit.
pub fn mu_index(mu: &[bool]) -> usize {
    mu.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Bits of `index` on `qubits` qubits, most significant first.
pub fn mu_from_index(qubits: usize, index: usize) -> Vec<bool> {
    (0..qubits).map(|j| (index >> (qubits - 1 - j)) & 1 == 1).collect()
}

fn minmax_entries<T: Real>(h: &Operator<T>) -> Vec<T> {
    let diag = h.real_diagonal();
    let lo = diag.iter().copied().fold(T::infinity(), T::min);
    let hi = diag.iter().copied().fold(T::neg_infinity(), T::max);
    let n = diag.len();
    let delta = (hi - lo) / T::of(n as f64);
    (1..=n).map(|i| lo + T::of(i as f64) * delta).collect()
}

fn ising_diagonal<T: Real>(qubits: usize, alpha: &[T], pairs: &[(usize, usize, T)]) -> Result<Operator<T>> {
    if qubits == 0 || qubits > MAX_QUBITS {
        return Err(DbiError::TooManyQubits { qubits, limit: MAX_QUBITS });
    }
    let diag: Vec<T> = (0..1usize << qubits)
        .map(|i| {
            let z = |site: usize| T::of(z_eigenvalue(qubits, site, i) as f64);
            let field = alpha.iter().enumerate().fold(T::zero(), |acc, (j, &a)| acc + a * z(j + 1));
            pairs.iter().fold(field, |acc, &(j, k, b)| acc + b * z(j) * z(k))
        })
        .collect();
    Operator::from_diagonal(&diag)
}

/// The diagonal operator described by `spec`.
///
/// Context-dependent kinds (min-max family, eigen-sorted, dephasing) read
/// `h_context`; the others ignore it except for a dimension check.
pub fn realize<T: Real>(spec: &GeneratorSpec<T>, h_context: Option<&Operator<T>>) -> Result<Operator<T>> {
    let ctx = || h_context.ok_or(DbiError::MissingReference("context Hamiltonian"));
    let out = match spec {
        GeneratorSpec::MinMax => Operator::from_diagonal(&minmax_entries(ctx()?))?,
        GeneratorSpec::MaxMin => {
            let mut e = minmax_entries(ctx()?);
            e.reverse();
            Operator::from_diagonal(&e)?
        }
        GeneratorSpec::ShuffledMinMax { seed } => {
            let mut e = minmax_entries(ctx()?);
            e.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed));
            Operator::from_diagonal(&e)?
        }
        GeneratorSpec::SampledMinMax { seed } => {
            let e = minmax_entries(ctx()?);
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut drawn: Vec<T> = (0..e.len()).map(|_| e[rng.gen_range(0..e.len())]).collect();
            drawn.sort_by(|a, b| a.partial_cmp(b).expect("finite entries"));
            Operator::from_diagonal(&drawn)?
        }
        GeneratorSpec::EigenSorted => Operator::from_diagonal(&eigh(ctx()?)?.values)?,
        GeneratorSpec::Dephasing => delta_restrict(ctx()?),
        GeneratorSpec::MagneticField { alpha } => ising_diagonal(alpha.len(), alpha, &[])?,
        GeneratorSpec::NnIsing { alpha, beta, boundary } => {
            let l = alpha.len();
            if beta.len() != l {
                return Err(DbiError::BadLength { expected: l, got: beta.len() });
            }
            let bonds = match boundary {
                Boundary::Open => l.saturating_sub(1),
                Boundary::Periodic => l,
            };
            let pairs: Vec<_> = (1..=bonds).map(|j| (j, j % l + 1, beta[j - 1])).collect();
            ising_diagonal(l, alpha, &pairs)?
        }
        GeneratorSpec::AllToAllIsing { alpha, beta } => {
            let l = alpha.len();
            if beta.len() != l || beta.iter().any(|row| row.len() != l) {
                return Err(DbiError::BadLength { expected: l, got: beta.len() });
            }
            let pairs: Vec<_> =
                (0..l).flat_map(|j| (j + 1..l).map(move |k| (j + 1, k + 1))).map(|(j, k)| (j, k, beta[j - 1][k - 1])).collect();
            ising_diagonal(l, alpha, &pairs)?
        }
        GeneratorSpec::PauliZProduct { mu } => {
            let l = mu.len();
            if l == 0 || l > MAX_QUBITS {
                return Err(DbiError::TooManyQubits { qubits: l, limit: MAX_QUBITS });
            }
            let diag: Vec<T> = (0..1usize << l)
                .map(|i| {
                    let sign: i32 = (1..=l).filter(|&j| mu[j - 1]).map(|j| z_eigenvalue(l, j, i)).product();
                    T::of(sign as f64)
                })
                .collect();
            Operator::from_diagonal(&diag)?
        }
        GeneratorSpec::FullDiagonal { d } => {
            check_dim(d.len())?;
            Operator::from_diagonal(d)?
        }
    };
    if let Some(h) = h_context {
        if h.dim() != out.dim() {
            return Err(DbiError::DimensionMismatch { left: out.dim(), right: h.dim() });
        }
    }
    Ok(out)
}

/// Named generator on `qubits` qubits.
pub fn preset<T: Real>(name: &str, qubits: usize) -> Result<GeneratorSpec<T>> {
    preset_seeded(name, qubits, DEFAULT_PRESET_SEED)
}

/// Like [`preset`], with the seed of the randomized min-max variants.
pub fn preset_seeded<T: Real>(name: &str, qubits: usize, seed: u64) -> Result<GeneratorSpec<T>> {
    let ramp = |p: i32| (1..=qubits).map(|j| T::of((j as f64).powi(p))).collect::<Vec<T>>();
    Ok(match name {
        "minmax" => GeneratorSpec::MinMax,
        "maxmin" => GeneratorSpec::MaxMin,
        "shuffled" => GeneratorSpec::ShuffledMinMax { seed },
        "sampled" => GeneratorSpec::SampledMinMax { seed },
        "eigen" => GeneratorSpec::EigenSorted,
        "dephasing" => GeneratorSpec::Dephasing,
        "b-constant" => GeneratorSpec::MagneticField { alpha: ramp(0) },
        "b-linear" => GeneratorSpec::MagneticField { alpha: ramp(1) },
        "b-quadratic" => GeneratorSpec::MagneticField { alpha: ramp(2) },
        "nn-ising" => GeneratorSpec::NnIsing {
            alpha: vec![T::zero(); qubits],
            beta: vec![T::one(); qubits],
            boundary: Boundary::Periodic,
        },
        "a2a-ising" => GeneratorSpec::AllToAllIsing {
            alpha: vec![T::zero(); qubits],
            beta: upper_ones(qubits),
        },
        "pauli-z" => GeneratorSpec::PauliZProduct { mu: vec![true; qubits] },
        "full-diagonal" => GeneratorSpec::FullDiagonal { d: (0..1usize << qubits).map(|i| T::of(i as f64)).collect() },
        other => return Err(DbiError::InvalidGenerator(format!("unknown preset {other:?}"))),
    })
}

/// Starting point for gradient descent within a family.
pub fn gd_template<T: Real>(family: &str, qubits: usize) -> Result<GeneratorSpec<T>> {
    let ramp: Vec<T> = (1..=qubits).map(|j| T::of(j as f64)).collect();
    Ok(match family {
        "magnetic" => GeneratorSpec::MagneticField { alpha: ramp },
        "nn-ising" => GeneratorSpec::NnIsing { alpha: ramp, beta: vec![T::one(); qubits], boundary: Boundary::Open },
        "a2a-ising" => GeneratorSpec::AllToAllIsing { alpha: ramp, beta: upper_ones(qubits) },
        "full-diagonal" => GeneratorSpec::FullDiagonal { d: Vec::new() },
        other => return Err(DbiError::InvalidGenerator(format!("unknown gradient-descent family {other:?}"))),
    })
}

/// Rescales the parameters by `r` and absorbs the shift `z` where the
/// family has an identity component (only the full diagonal does).
pub fn normalize_spec<T: Real>(spec: &GeneratorSpec<T>, z: T, r: T) -> Result<GeneratorSpec<T>> {
    if r == T::zero() {
        return Err(DbiError::InvalidArgument("rescaling factor must be nonzero".into()));
    }
    if r == T::one() && z == T::zero() {
        return Ok(spec.clone());
    }
    match spec {
        GeneratorSpec::FullDiagonal { d } => Ok(GeneratorSpec::FullDiagonal { d: d.iter().map(|&x| r * x + z).collect() }),
        GeneratorSpec::MagneticField { .. } | GeneratorSpec::NnIsing { .. } | GeneratorSpec::AllToAllIsing { .. } => {
            let theta: Vec<T> = spec.parameters().into_iter().map(|x| r * x).collect();
            spec.with_parameters(&theta)
        }
        other => Err(DbiError::InvalidGenerator(format!("{} cannot be rescaled", other.kind_name()))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GdConfig {
    pub max_iters: usize,
    /// Central finite-difference step.
    pub fd_step: f64,
    /// Backtracking factor of the line search.
    pub shrink: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    pub initial_rate: f64,
    /// Keep `||D||_HS = sqrt(dim)` after every update.
    pub project_unit_norm: bool,
    /// Stop once the relative cost improvement of an iteration falls below.
    pub tol: f64,
}

impl Default for GdConfig {
    fn default() -> Self {
        Self { max_iters: 100, fd_step: 1e-5, shrink: 0.5, armijo: 1e-4, initial_rate: 0.1, project_unit_norm: false, tol: 1e-6 }
    }
}

impl GdConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.fd_step, self.shrink, self.armijo, self.initial_rate, self.tol];
        if positive.iter().any(|&x| !(x > 0.0 && x.is_finite())) || self.shrink >= 1.0 {
            return Err(DbiError::InvalidArgument(format!("invalid gradient-descent settings {self:?}")));
        }
        Ok(())
    }
}

/// A generator together with its scheduled rotation.
#[derive(Clone, Debug, PartialEq)]
pub struct Selection<T> {
    pub spec: GeneratorSpec<T>,
    pub d: Operator<T>,
    pub outcome: ScheduleOutcome<T>,
}

fn evaluate_spec<T: Real>(
    h: &Operator<T>,
    spec: GeneratorSpec<T>,
    cost: &CostFunction<T>,
    sched: &ScheduleConfig,
) -> Result<Selection<T>> {
    let d = realize(&spec, Some(h))?;
    let outcome = schedule(h, &d, cost, sched)?;
    Ok(Selection { spec, d, outcome })
}

fn project<T: Real>(spec: &GeneratorSpec<T>, theta: &[T], dim: usize) -> Result<Vec<T>> {
    let norm = hs_norm(&realize(&spec.with_parameters(theta)?, None)?);
    if norm == T::zero() {
        return Ok(theta.to_vec());
    }
    let r = T::of(dim as f64).sqrt() / norm;
    Ok(theta.iter().map(|&x| x * r).collect())
}

/// Gradient descent on the scheduled cost over one family's parameters.
///
/// The objective is the cost after the rotation chosen by `sched` for the
/// realized generator. Gradients come from central finite differences and
/// step sizes from Armijo backtracking, starting each iteration at twice the
/// previously accepted rate.
pub fn optimize_gd<T: Real>(
    h: &Operator<T>,
    template: &GeneratorSpec<T>,
    cost: &CostFunction<T>,
    sched: &ScheduleConfig,
    gd: &GdConfig,
) -> Result<Selection<T>> {
    gd.validate()?;
    let start = match template {
        GeneratorSpec::FullDiagonal { d } if d.is_empty() => GeneratorSpec::FullDiagonal { d: h.real_diagonal() },
        GeneratorSpec::MagneticField { .. }
        | GeneratorSpec::NnIsing { .. }
        | GeneratorSpec::AllToAllIsing { .. }
        | GeneratorSpec::FullDiagonal { .. } => template.clone(),
        other => {
            return Err(DbiError::InvalidGenerator(format!("{} is not a gradient-descent family", other.kind_name())))
        }
    };
    let mut theta = start.parameters();
    if gd.project_unit_norm {
        theta = project(&start, &theta, h.dim())?;
    }
    let mut best = evaluate_spec(h, start.with_parameters(&theta)?, cost, sched)?;
    let eps = T::of(gd.fd_step);
    let mut rate = T::of(gd.initial_rate);

    for _ in 0..gd.max_iters {
        let objective = |th: &[T]| -> Result<T> { Ok(evaluate_spec(h, start.with_parameters(th)?, cost, sched)?.outcome.cost) };
        let grad: Vec<T> = (0..theta.len())
            .into_par_iter()
            .map(|k| {
                let mut plus = theta.clone();
                let mut minus = theta.clone();
                plus[k] += eps;
                minus[k] -= eps;
                Ok((objective(&plus)? - objective(&minus)?) / (eps + eps))
            })
            .collect::<Result<_>>()?;
        if grad.iter().any(|g| !g.is_finite()) {
            break;
        }
        let grad_sq = grad.iter().fold(T::zero(), |acc, &g| acc + g * g);
        if grad_sq == T::zero() {
            break;
        }
        let current = best.outcome.cost;
        let mut step = rate + rate;
        let mut accepted = None;
        for _ in 0..40 {
            let mut trial: Vec<T> = theta.iter().zip(&grad).map(|(&x, &g)| x - step * g).collect();
            if gd.project_unit_norm {
                trial = project(&start, &trial, h.dim())?;
            }
            let sel = match evaluate_spec(h, start.with_parameters(&trial)?, cost, sched) {
                Ok(sel) if sel.outcome.cost.is_finite() => sel,
                _ => break,
            };
            if sel.outcome.cost <= current - T::of(gd.armijo) * step * grad_sq {
                accepted = Some((trial, sel));
                break;
            }
            step *= T::of(gd.shrink);
        }
        let Some((trial, sel)) = accepted else { break };
        let gain = (current - sel.outcome.cost) / current.abs().max(T::min_positive_value());
        theta = trial;
        best = sel;
        rate = step;
        if gain < T::of(gd.tol) {
            break;
        }
    }
    Ok(best)
}

/// Exhaustive search over the Pauli-Z products `mu != 0`, each with its own
/// scheduled duration; ties go to the smallest `mu`.
pub fn hamming_search<T: Real>(h: &Operator<T>, cost: &CostFunction<T>, sched: &ScheduleConfig) -> Result<Selection<T>> {
    let qubits = h.qubits();
    if qubits > MAX_QUBITS {
        return Err(DbiError::TooManyQubits { qubits, limit: MAX_QUBITS });
    }
    if qubits == 0 {
        return Err(DbiError::InvalidArgument("Pauli-Z search needs at least one qubit".into()));
    }
    let candidates: Vec<Selection<T>> = (1..1usize << qubits)
        .into_par_iter()
        .map(|idx| evaluate_spec(h, GeneratorSpec::PauliZProduct { mu: mu_from_index(qubits, idx) }, cost, sched))
        .collect::<Result<_>>()?;
    let best = candidates
        .into_iter()
        .reduce(|best, next| if next.outcome.cost < best.outcome.cost { next } else { best })
        .expect("at least one candidate");
    Ok(best)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawBeta {
    Flat(Vec<f64>),
    Nested(Vec<Vec<f64>>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<RawBeta>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mu: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    boundary: Option<Boundary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<Vec<f64>>,
}

fn to_f64<T: Real>(v: &[T]) -> Vec<f64> {
    v.iter().map(|x| x.as_f64()).collect()
}

fn from_f64<T: Real>(v: Vec<f64>) -> Vec<T> {
    v.into_iter().map(T::of).collect()
}

impl<T: Real> From<&GeneratorSpec<T>> for RawSpec {
    fn from(spec: &GeneratorSpec<T>) -> Self {
        let mut raw = RawSpec {
            kind: spec.kind_name().to_string(),
            alpha: None,
            beta: None,
            mu: None,
            seed: None,
            boundary: None,
            d: None,
        };
        match spec {
            GeneratorSpec::ShuffledMinMax { seed } | GeneratorSpec::SampledMinMax { seed } => raw.seed = Some(*seed),
            GeneratorSpec::MagneticField { alpha } => raw.alpha = Some(to_f64(alpha)),
            GeneratorSpec::NnIsing { alpha, beta, boundary } => {
                raw.alpha = Some(to_f64(alpha));
                raw.beta = Some(RawBeta::Flat(to_f64(beta)));
                raw.boundary = Some(*boundary);
            }
            GeneratorSpec::AllToAllIsing { alpha, beta } => {
                raw.alpha = Some(to_f64(alpha));
                raw.beta = Some(RawBeta::Nested(beta.iter().map(|row| to_f64(row)).collect()));
            }
            GeneratorSpec::PauliZProduct { mu } => raw.mu = Some(bits_to_string(mu)),
            GeneratorSpec::FullDiagonal { d } => raw.d = Some(to_f64(d)),
            _ => {}
        }
        raw
    }
}

impl<T: Real> TryFrom<RawSpec> for GeneratorSpec<T> {
    type Error = DbiError;

    fn try_from(raw: RawSpec) -> Result<Self> {
        let missing = |field: &str| DbiError::InvalidGenerator(format!("{} needs `{field}`", raw.kind));
        let alpha = raw.alpha.clone().map(from_f64::<T>);
        Ok(match raw.kind.as_str() {
            "minmax" => GeneratorSpec::MinMax,
            "maxmin" => GeneratorSpec::MaxMin,
            "shuffled" => GeneratorSpec::ShuffledMinMax { seed: raw.seed.unwrap_or(DEFAULT_PRESET_SEED) },
            "sampled" => GeneratorSpec::SampledMinMax { seed: raw.seed.unwrap_or(DEFAULT_PRESET_SEED) },
            "eigen" => GeneratorSpec::EigenSorted,
            "dephasing" => GeneratorSpec::Dephasing,
            "magnetic" => GeneratorSpec::MagneticField { alpha: alpha.ok_or_else(|| missing("alpha"))? },
            "nn-ising" => {
                let alpha = alpha.ok_or_else(|| missing("alpha"))?;
                let beta = match raw.beta {
                    Some(RawBeta::Flat(b)) => from_f64(b),
                    Some(RawBeta::Nested(_)) => {
                        return Err(DbiError::InvalidGenerator("nn-ising takes a flat `beta`".into()))
                    }
                    None => return Err(missing("beta")),
                };
                GeneratorSpec::NnIsing { alpha, beta, boundary: raw.boundary.unwrap_or(Boundary::Open) }
            }
            "a2a-ising" => {
                let alpha = alpha.ok_or_else(|| missing("alpha"))?;
                let l = alpha.len();
                let beta = match raw.beta {
                    Some(RawBeta::Nested(rows)) => rows.into_iter().map(from_f64).collect(),
                    Some(RawBeta::Flat(flat)) if flat.len() == l * l => flat.chunks(l).map(|r| from_f64(r.to_vec())).collect(),
                    Some(RawBeta::Flat(flat)) if flat.len() == l * (l - 1) / 2 => {
                        let mut beta = vec![vec![T::zero(); l]; l];
                        let mut it = flat.into_iter();
                        for j in 0..l {
                            for k in j + 1..l {
                                beta[j][k] = T::of(it.next().expect("length checked"));
                            }
                        }
                        beta
                    }
                    Some(RawBeta::Flat(flat)) => return Err(DbiError::BadLength { expected: l * l, got: flat.len() }),
                    None => return Err(missing("beta")),
                };
                GeneratorSpec::AllToAllIsing { alpha, beta }
            }
            "pauli-z" => GeneratorSpec::PauliZProduct { mu: bits_from_str(raw.mu.as_deref().ok_or_else(|| missing("mu"))?)? },
            "full-diagonal" => GeneratorSpec::FullDiagonal { d: from_f64(raw.d.ok_or_else(|| missing("d"))?) },
            other => return Err(DbiError::InvalidGenerator(format!("unknown generator kind {other:?}"))),
        })
    }
}

impl<T: Real> Serialize for GeneratorSpec<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawSpec::from(self).serialize(serializer)
    }
}

impl<'de, T: Real> Deserialize<'de> for GeneratorSpec<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSpec::deserialize(deserializer)?;
        GeneratorSpec::try_from(raw).map_err(D::Error::custom)
    }
}

impl<T: Real> fmt::Display for GeneratorSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}
