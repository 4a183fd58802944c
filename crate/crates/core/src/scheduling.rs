//! Choosing the rotation duration `s` for a fixed generator.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::costs::{CostFunction, CostKind};
use crate::dbr::{bracket, nested_commutators, DbrFlow};
use crate::error::{DbiError, Result};
use crate::linalg::{sigma_restrict, trace_product, Operator};
use crate::roots::{derivative, eval_poly, polynomial_roots};
use crate::scalar::Real;

/// Roots with a larger imaginary part are treated as complex.
const IMAG_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Grid,
    Random,
    Taylor,
}

impl Strategy {
    pub fn tag(self) -> &'static str {
        match self {
            Strategy::Grid => "grid",
            Strategy::Random => "random",
            Strategy::Taylor => "taylor",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Strategy {
    type Err = DbiError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "grid" => Ok(Strategy::Grid),
            "random" => Ok(Strategy::Random),
            "taylor" => Ok(Strategy::Taylor),
            other => Err(DbiError::InvalidArgument(format!("unknown schedule strategy `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleConfig {
    pub strategy: Strategy,
    pub s_max: f64,
    /// Candidate count for grid and random search.
    pub n_points: usize,
    /// Truncation order of the Taylor polynomial.
    pub poly_order: usize,
    pub rng_seed: Option<u64>,
    /// Taylor only: search the grid when no polynomial minimum exists.
    pub fallback_to_grid: bool,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self { strategy: Strategy::Grid, s_max: 1.0, n_points: 200, poly_order: 5, rng_seed: None, fallback_to_grid: true }
    }
}

impl ScheduleConfig {
    pub fn grid(s_max: f64, n_points: usize) -> Self {
        Self { strategy: Strategy::Grid, s_max, n_points, ..Self::default() }
    }

    pub fn taylor(s_max: f64, poly_order: usize) -> Self {
        Self { strategy: Strategy::Taylor, s_max, poly_order, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s_max > 0.0) || !self.s_max.is_finite() {
            return Err(DbiError::InvalidArgument(format!("s_max must be positive, got {}", self.s_max)));
        }
        if self.poly_order < 2 {
            return Err(DbiError::InvalidArgument(format!("poly_order must be at least 2, got {}", self.poly_order)));
        }
        if self.n_points == 0 && self.strategy != Strategy::Taylor {
            return Err(DbiError::InvalidArgument("n_points must be positive".into()));
        }
        if self.n_points == 0 && self.fallback_to_grid {
            return Err(DbiError::InvalidArgument("n_points must be positive when grid fallback is enabled".into()));
        }
        Ok(())
    }

    /// `i * s_max / n_points` for `i = 1..=n_points`.
    pub fn grid_points(&self) -> Vec<f64> {
        (1..=self.n_points).map(|i| i as f64 * self.s_max / self.n_points as f64).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleOutcome<T> {
    pub s: T,
    /// Cost after rotating by `s`.
    pub cost: T,
    pub cost_at_zero: T,
    /// The chosen `s` does not lower the cost.
    pub no_gain: bool,
    /// The strategy that produced `s`, after any fallback.
    pub strategy: Strategy,
}

/// Cost of `e^{sW} H e^{-sW}` at each `s`, evaluated in parallel.
pub fn scan<T: Real>(h: &Operator<T>, d: &Operator<T>, cost: &CostFunction<T>, s_values: &[T]) -> Result<Vec<T>> {
    scan_flow(&DbrFlow::new(h, d)?, d, cost, s_values)
}

fn scan_flow<T: Real>(flow: &DbrFlow<T>, d: &Operator<T>, cost: &CostFunction<T>, s_values: &[T]) -> Result<Vec<T>> {
    if cost.kind() == CostKind::OffDiagonalNorm {
        return Ok(s_values.par_iter().map(|&s| flow.off_diagonal_norm_at(s)).collect());
    }
    s_values.par_iter().map(|&s| cost.evaluate_for_generator(&flow.at(s), d)).collect()
}

fn best_of<T: Real>(
    h: &Operator<T>,
    d: &Operator<T>,
    cost: &CostFunction<T>,
    candidates: &[T],
    strategy: Strategy,
) -> Result<ScheduleOutcome<T>> {
    let cost_at_zero = cost.evaluate_for_generator(h, d)?;
    let flow = DbrFlow::new(h, d)?;
    let costs = scan_flow(&flow, d, cost, candidates)?;
    let (s, _) = candidates
        .iter()
        .zip(&costs)
        .map(|(&s, &c)| (s, c))
        .reduce(|best, next| {
            let better = next.1 < best.1 || (next.1 == best.1 && next.0 < best.0) || best.1.is_nan();
            if better && !next.1.is_nan() {
                next
            } else {
                best
            }
        })
        .expect("at least one candidate");
    // the scan may use a cheaper formula; report the cost of the rotated operator itself
    let c = cost.evaluate_for_generator(&flow.at(s), d)?;
    Ok(ScheduleOutcome { s, cost: c, cost_at_zero, no_gain: !(c < cost_at_zero), strategy })
}

/// Best of the `n_points` equispaced durations in `(0, s_max]`; ties go to
/// the smaller `s`.
pub fn grid_search<T: Real>(
    h: &Operator<T>,
    d: &Operator<T>,
    cost: &CostFunction<T>,
    config: &ScheduleConfig,
) -> Result<ScheduleOutcome<T>> {
    config.validate()?;
    let grid: Vec<T> = config.grid_points().into_iter().map(T::of).collect();
    best_of(h, d, cost, &grid, Strategy::Grid)
}

/// First interior local minimum of the cost along `0, s_max/n, ..., s_max`,
/// or `None` when the sampled curve has none.
pub fn grid_first_local_min<T: Real>(
    h: &Operator<T>,
    d: &Operator<T>,
    cost: &CostFunction<T>,
    config: &ScheduleConfig,
) -> Result<Option<ScheduleOutcome<T>>> {
    config.validate()?;
    let grid: Vec<T> = std::iter::once(0.0).chain(config.grid_points()).map(T::of).collect();
    let flow = DbrFlow::new(h, d)?;
    let costs = scan_flow(&flow, d, cost, &grid)?;
    let Some(i) = (1..grid.len().saturating_sub(1)).find(|&i| costs[i] < costs[i - 1] && costs[i] <= costs[i + 1]) else {
        return Ok(None);
    };
    let cost_at_zero = cost.evaluate_for_generator(h, d)?;
    let c = cost.evaluate_for_generator(&flow.at(grid[i]), d)?;
    Ok(Some(ScheduleOutcome { s: grid[i], cost: c, cost_at_zero, no_gain: !(c < cost_at_zero), strategy: Strategy::Grid }))
}

/// Best of `n_points` uniform draws in `(0, s_max]`, seeded by
/// `rng_seed` (0 when unset).
pub fn random_search<T: Real>(
    h: &Operator<T>,
    d: &Operator<T>,
    cost: &CostFunction<T>,
    config: &ScheduleConfig,
) -> Result<ScheduleOutcome<T>> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed.unwrap_or(0));
    let samples: Vec<T> =
        (0..config.n_points).map(|_| T::of(config.s_max * (1.0 - rng.gen::<f64>()))).collect();
    best_of(h, d, cost, &samples, Strategy::Random)
}

/// Power series coefficients of `||sigma(e^{sW} H e^{-sW})||^2` in `s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaPolynomial<T> {
    pub coefficients: Vec<T>,
}

impl<T: Real> SigmaPolynomial<T> {
    pub fn order(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn eval(&self, s: T) -> T {
        eval_poly(&self.coefficients, s)
    }

    pub fn derivative(&self) -> Vec<T> {
        derivative(&self.coefficients)
    }

    pub fn first_local_min(&self, s_max: T) -> Option<T> {
        polynomial_first_local_min(self, s_max)
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Truncated expansion built from the nested commutators of `W = [D, H]`:
/// `c_m = sum_{i+j=m} Tr(sigma(Gamma_i) sigma(Gamma_j)) / (i! j!)`.
pub fn sigma_polynomial<T: Real>(h: &Operator<T>, d: &Operator<T>, order: usize) -> Result<SigmaPolynomial<T>> {
    if order < 2 {
        return Err(DbiError::InvalidArgument(format!("polynomial order must be at least 2, got {order}")));
    }
    let w = bracket(d, h)?;
    let sig: Vec<Operator<T>> = nested_commutators(&w, h, order)?.iter().map(sigma_restrict).collect();
    let mut coefficients = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let mut c = T::zero();
        for i in 0..=m {
            let j = m - i;
            let tr = trace_product(&sig[i], &sig[j])?.re;
            c += tr / T::of(factorial(i) * factorial(j));
        }
        coefficients.push(c);
    }
    Ok(SigmaPolynomial { coefficients })
}

/// Smallest root of `p'` in `(0, s_max]` at which `p'' > 0`.
pub fn polynomial_first_local_min<T: Real>(poly: &SigmaPolynomial<T>, s_max: T) -> Option<T> {
    let dp = poly.derivative();
    let ddp = derivative(&dp);
    let roots = polynomial_roots(&dp)?;
    roots
        .into_iter()
        .filter(|&(re, im)| im.abs() <= T::of(IMAG_TOL) * re.abs().max(T::one()))
        .map(|(re, _)| re)
        .filter(|&s| s > T::zero() && s <= s_max && eval_poly(&ddp, s) > T::zero())
        .fold(None, |best: Option<T>, s| Some(best.map_or(s, |b| b.min(s))))
}

/// Taylor-polynomial schedule for the off-diagonal norm; `Ok(None)` when the
/// polynomial has no admissible minimum.
pub fn taylor_search<T: Real>(
    h: &Operator<T>,
    d: &Operator<T>,
    config: &ScheduleConfig,
) -> Result<Option<ScheduleOutcome<T>>> {
    config.validate()?;
    let poly = sigma_polynomial(h, d, config.poly_order)?;
    let Some(s) = poly.first_local_min(T::of(config.s_max)) else {
        return Ok(None);
    };
    let cost = CostFunction::OffDiagonalNorm;
    let cost_at_zero = cost.evaluate(h)?;
    let after = cost.evaluate(&DbrFlow::new(h, d)?.at(s))?;
    Ok(Some(ScheduleOutcome { s, cost: after, cost_at_zero, no_gain: !(after < cost_at_zero), strategy: Strategy::Taylor }))
}

/// Dispatches on `config.strategy`.
///
/// Taylor scheduling only exists for the off-diagonal norm; other costs, and
/// polynomials without a minimum in range, fall back to grid search when
/// enabled.
pub fn schedule<T: Real>(
    h: &Operator<T>,
    d: &Operator<T>,
    cost: &CostFunction<T>,
    config: &ScheduleConfig,
) -> Result<ScheduleOutcome<T>> {
    config.validate()?;
    match config.strategy {
        Strategy::Grid => grid_search(h, d, cost, config),
        Strategy::Random => random_search(h, d, cost, config),
        Strategy::Taylor => {
            let found =
                if cost.kind() == CostKind::OffDiagonalNorm { taylor_search(h, d, config)? } else { None };
            match found {
                Some(outcome) => Ok(outcome),
                None if config.fallback_to_grid => grid_search(h, d, cost, config),
                None => Err(DbiError::NoAdmissibleDuration { s_max: config.s_max }),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::f1_off_diagonal_norm;
    use crate::hamiltonians::tfim;
    use crate::linalg::{delta_restrict, hs_norm, StateVector};

    fn parabola(a: f64, c: f64) -> SigmaPolynomial<f64> {
        // (s - a)^2 + c
        SigmaPolynomial { coefficients: vec![a * a + c, -2.0 * a, 1.0] }
    }

    #[test]
    fn parabola_minimum() {
        assert!((polynomial_first_local_min(&parabola(0.3, 1.0), 1.0).unwrap() - 0.3).abs() < 1e-14);
        assert_eq!(polynomial_first_local_min(&parabola(0.3, 1.0), 0.2), None);
        let increasing = SigmaPolynomial { coefficients: vec![1.0, 1.0, 0.5, 0.1] };
        assert_eq!(polynomial_first_local_min(&increasing, 1.0), None);
    }

    #[test]
    fn first_of_several_minima() {
        // p'(s) = (s - 0.2)(s - 0.5)(s - 0.8): minima at 0.2 and 0.8
        let dp = [-0.08, 0.66, -1.5, 1.0];
        let mut c = vec![3.0];
        for (k, a) in dp.iter().enumerate() {
            c.push(a / (k + 1) as f64);
        }
        let poly = SigmaPolynomial { coefficients: c };
        assert!((polynomial_first_local_min(&poly, 1.0).unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn sigma_polynomial_leading_terms() {
        let h = tfim::<f64>(4, 3.0).unwrap();
        let d = delta_restrict(&h);
        let poly = sigma_polynomial(&h, &d, 4).unwrap();
        let f1 = f1_off_diagonal_norm(&h);
        assert!((poly.coefficients[0] - f1 * f1).abs() < 1e-9 * f1 * f1);
        let w = bracket(&d, &h).unwrap();
        let slope = -2.0 * hs_norm(&w).powi(2);
        assert!((poly.coefficients[1] - slope).abs() < 1e-9 * slope.abs());
        assert!(matches!(sigma_polynomial(&h, &d, 1), Err(DbiError::InvalidArgument(_))));
    }

    #[test]
    fn grid_on_diagonal_is_flagged() {
        let h = Operator::from_diagonal(&[1.0, -1.0, 2.0, 0.5]).unwrap();
        let d = delta_restrict(&h);
        let out = grid_search(&h, &d, &CostFunction::OffDiagonalNorm, &ScheduleConfig::grid(1.0, 20)).unwrap();
        assert!(out.no_gain);
        assert_eq!(out.s, 0.05);
    }

    #[test]
    fn first_local_min_on_grid() {
        let h = tfim::<f64>(4, 3.0).unwrap();
        let d = delta_restrict(&h);
        let cfg = ScheduleConfig::grid(0.05, 500);
        let first = grid_first_local_min(&h, &d, &CostFunction::OffDiagonalNorm, &cfg).unwrap().unwrap();
        let poly = sigma_polynomial(&h, &d, 10).unwrap().first_local_min(0.05).unwrap();
        assert!((first.s - poly).abs() <= 0.05 / 500.0);
        assert!(!first.no_gain);

        let diag = Operator::from_diagonal(&[1.0, 2.0]).unwrap();
        let none = grid_first_local_min(&diag, &diag, &CostFunction::OffDiagonalNorm, &cfg).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn taylor_on_diagonal_falls_back() {
        let h = Operator::from_diagonal(&[1.0, -1.0, 2.0, 0.5]).unwrap();
        let d = delta_restrict(&h);
        let out = schedule(&h, &d, &CostFunction::OffDiagonalNorm, &ScheduleConfig::taylor(1.0, 4)).unwrap();
        assert_eq!(out.strategy, Strategy::Grid);
        assert!(out.no_gain);

        let strict = ScheduleConfig { fallback_to_grid: false, ..ScheduleConfig::taylor(1.0, 4) };
        assert!(matches!(
            schedule(&h, &d, &CostFunction::OffDiagonalNorm, &strict),
            Err(DbiError::NoAdmissibleDuration { .. })
        ));
    }

    #[test]
    fn taylor_for_other_costs_uses_grid() {
        let h = tfim::<f64>(3, 1.0).unwrap();
        let d = delta_restrict(&h);
        let cost = CostFunction::Energy { reference_state: StateVector::basis(8, 0).unwrap() };
        let out = schedule(&h, &d, &cost, &ScheduleConfig::taylor(0.5, 5)).unwrap();
        assert_eq!(out.strategy, Strategy::Grid);
    }

    #[test]
    fn random_search_is_reproducible() {
        let h = tfim::<f64>(3, 2.0).unwrap();
        let d = delta_restrict(&h);
        let cfg = ScheduleConfig { strategy: Strategy::Random, rng_seed: Some(7), n_points: 30, ..Default::default() };
        let a = schedule(&h, &d, &CostFunction::OffDiagonalNorm, &cfg).unwrap();
        let b = schedule(&h, &d, &CostFunction::OffDiagonalNorm, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.s > 0.0 && a.s <= 1.0);
    }

    #[test]
    fn config_validation_and_serde() {
        assert!(ScheduleConfig { s_max: 0.0, ..Default::default() }.validate().is_err());
        assert!(ScheduleConfig { poly_order: 1, ..Default::default() }.validate().is_err());
        let cfg: ScheduleConfig = serde_json::from_str(r#"{"strategy":"taylor","poly_order":7}"#).unwrap();
        assert_eq!(cfg.strategy, Strategy::Taylor);
        assert_eq!(cfg.poly_order, 7);
        assert_eq!(cfg.n_points, 200);
        assert!(serde_json::from_str::<ScheduleConfig>(r#"{"bogus":1}"#).is_err());
        assert_eq!("Grid".parse::<Strategy>().unwrap(), Strategy::Grid);
    }
}
