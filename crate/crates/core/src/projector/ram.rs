use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ProjectorError;
use crate::catalog::ParamSurface;
use crate::exactalg::linalg::rank;
use crate::exactalg::{
    AlgError, Field, GroebnerBudget, Ideal, MonomialOrder, Polynomial, PrimeField, Ring,
};

type FpPoly = Polynomial<PrimeField>;

/// A general linear projection `P^N ⇢ P³` applied to an explicit chart, over `GF(p)`.
#[derive(Clone, Debug)]
pub struct ProjectionExperiment {
    surface: Arc<ParamSurface>,
    prime: u64,
    seed: u64,
    matrix: Vec<Vec<u64>>,
    coords: Vec<FpPoly>,
    redraws: usize,
}

impl ProjectionExperiment {
    pub fn surface(&self) -> &ParamSurface {
        &self.surface
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The `4 × (N+1)` matrix; the identity when `N = 3`.
    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    /// Homogeneous images `P₀, …, P₃`; the affine coordinates are `Pᵢ / P₀`.
    pub fn coords(&self) -> &[FpPoly] {
        &self.coords
    }

    /// Matrices rejected (rank or dehomogenization) before this one was accepted.
    pub fn redraws(&self) -> usize {
        self.redraws
    }
}

fn reduce_chart(surface: &ParamSurface, field: PrimeField) -> Result<Vec<FpPoly>, ProjectorError> {
    let ring = Ring::new(&["s", "t"], field, MonomialOrder::DegRevLex);
    Ok(surface
        .coords()
        .iter()
        .map(|c| c.map_field(&ring, |q| field.from_rational(q)))
        .collect::<Result<Vec<_>, _>>()?)
}

fn combine(row: &[u64], coords: &[FpPoly]) -> FpPoly {
    let ring = coords[0].ring();
    row.iter()
        .zip(coords)
        .filter(|(c, _)| **c != 0)
        .fold(Polynomial::zero(ring), |acc, (c, p)| &acc + &p.scale(c))
}

/// Draws a full-rank projection whose first output coordinate does not vanish at a random chart point.
pub fn project(surface: &ParamSurface, prime: u64, seed: u64) -> Result<ProjectionExperiment, ProjectorError> {
    const DRAWS: usize = 64;
    let field = PrimeField::new(prime)?;
    let chart = reduce_chart(surface, field)?;
    let n = chart.len();
    let surface = Arc::new(surface.clone());
    if n == 4 {
        let matrix = (0..4).map(|i| (0..4).map(|j| u64::from(i == j)).collect()).collect();
        return Ok(ProjectionExperiment {
            surface,
            prime,
            seed,
            matrix,
            coords: chart,
            redraws: 0,
        });
    }
    if n < 4 {
        return Err(ProjectorError::InvalidArgument(format!("ambient dimension {} is below 3", n - 1)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for redraws in 0..DRAWS {
        let matrix: Vec<Vec<u64>> = (0..4).map(|_| (0..n).map(|_| rng.gen_range(0..prime)).collect()).collect();
        let test_point = [rng.gen_range(0..prime), rng.gen_range(0..prime)];
        if rank(&field, &matrix) < 4 {
            continue;
        }
        let coords: Vec<FpPoly> = matrix.iter().map(|row| combine(row, &chart)).collect();
        if field.is_zero(&coords[0].evaluate(&test_point)) {
            continue;
        }
        return Ok(ProjectionExperiment {
            surface,
            prime,
            seed,
            matrix,
            coords,
            redraws,
        });
    }
    Err(ProjectorError::NoProjection(DRAWS))
}

fn det3(m: [[&FpPoly; 3]; 3]) -> FpPoly {
    let minor = |a: usize, b: usize| &(m[1][a] * m[2][b]) - &(m[1][b] * m[2][a]);
    let t0 = m[0][0] * &minor(1, 2);
    let t1 = m[0][1] * &minor(0, 2);
    let t2 = m[0][2] * &minor(0, 1);
    &(&t0 - &t1) + &t2
}

/// Ramification ideal of `(P₁/P₀, P₂/P₀, P₃/P₀)`, cleared of denominators.
///
/// Generated by the `3 × 3` minors of `[P; ∂ₛP; ∂ₜP]` through column 0, which are
/// `P₀³` times the `2 × 2` Jacobian minors of the affine map. Points with `P₀ = 0`
/// must be removed by localizing at `P₀`.
pub fn ram_ideal(experiment: &ProjectionExperiment) -> Result<Ideal<PrimeField>, ProjectorError> {
    let p = &experiment.coords;
    let ps: Vec<FpPoly> = p.iter().map(|q| q.derivative(0)).collect();
    let pt: Vec<FpPoly> = p.iter().map(|q| q.derivative(1)).collect();
    let minors = [(1, 2), (1, 3), (2, 3)]
        .iter()
        .map(|&(i, j)| det3([[&p[0], &p[i], &p[j]], [&ps[0], &ps[i], &ps[j]], [&pt[0], &pt[i], &pt[j]]]))
        .collect();
    Ok(Ideal::new(p[0].ring(), minors)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum AttemptOutcome {
    Length(usize),
    PositiveDimensional(usize),
    BudgetExceeded(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamAttempt {
    pub seed: u64,
    pub outcome: AttemptOutcome,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RamStatus {
    Agree,
    /// A zero-dimensional attempt existed but no attempt matched the lattice prediction.
    Disagree,
    /// Every attempt hit the Gröbner budget or a positive-dimensional ideal, at least one the budget.
    ResourceExhausted,
    /// Every attempt gave a positive-dimensional ramification ideal.
    Unlucky,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamReport {
    pub surface: String,
    pub prime: u64,
    pub seed: u64,
    pub predicted: i64,
    pub zero_dimensional: bool,
    pub length: Option<usize>,
    pub agreement: bool,
    pub status: RamStatus,
    pub attempts: Vec<RamAttempt>,
}

fn attempt(experiment: &ProjectionExperiment, budget: &GroebnerBudget) -> Result<AttemptOutcome, ProjectorError> {
    let ideal = match ram_ideal(experiment)?.buchberger(MonomialOrder::DegRevLex, budget) {
        Ok(i) => i,
        Err(AlgError::BudgetExceeded(msg)) => return Ok(AttemptOutcome::BudgetExceeded(msg)),
        Err(e) => return Err(e.into()),
    };
    let dim = ideal.quotient_dimension()?;
    if dim > 0 {
        return Ok(AttemptOutcome::PositiveDimensional(dim));
    }
    Ok(AttemptOutcome::Length(ideal.localized_length(&experiment.coords[0])?))
}

fn report(surface: &ParamSurface, prime: u64, seed: u64, attempts: Vec<RamAttempt>) -> RamReport {
    let predicted = surface.expected_pinch();
    let matched = attempts
        .iter()
        .any(|a| matches!(a.outcome, AttemptOutcome::Length(l) if l as i64 == predicted));
    let last_length = attempts.iter().rev().find_map(|a| match a.outcome {
        AttemptOutcome::Length(l) => Some(l),
        _ => None,
    });
    let length = if matched { Some(predicted as usize) } else { last_length };
    let status = if matched {
        RamStatus::Agree
    } else if last_length.is_some() {
        RamStatus::Disagree
    } else if attempts.iter().any(|a| matches!(a.outcome, AttemptOutcome::BudgetExceeded(_))) {
        RamStatus::ResourceExhausted
    } else {
        RamStatus::Unlucky
    };
    RamReport {
        surface: surface.name().to_string(),
        prime,
        seed,
        predicted,
        zero_dimensional: length.is_some(),
        length,
        agreement: matched,
        status,
        attempts,
    }
}

/// One projection, no resampling.
pub fn ram_length(experiment: &ProjectionExperiment, budget: &GroebnerBudget) -> Result<RamReport, ProjectorError> {
    let outcome = attempt(experiment, budget)?;
    let attempts = vec![RamAttempt { seed: experiment.seed, outcome }];
    Ok(report(&experiment.surface, experiment.prime, experiment.seed, attempts))
}

/// Seed of the `k`-th attempt of a run started from `seed`; attempt 0 uses `seed` itself.
pub fn attempt_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_add((k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Projects and measures, resampling up to `retries` more times on disagreement
/// or positive dimension. Every attempt is recorded.
pub fn ram_length_with_retries(
    surface: &ParamSurface,
    prime: u64,
    seed: u64,
    retries: usize,
    budget: &GroebnerBudget,
) -> Result<RamReport, ProjectorError> {
    let predicted = surface.expected_pinch();
    let mut attempts = Vec::new();
    for k in 0..=retries {
        let s = attempt_seed(seed, k);
        let experiment = project(surface, prime, s)?;
        let outcome = attempt(&experiment, budget)?;
        let done = matches!(outcome, AttemptOutcome::Length(l) if l as i64 == predicted);
        attempts.push(RamAttempt { seed: s, outcome });
        if done {
            break;
        }
    }
    Ok(report(surface, prime, seed, attempts))
}

/// Degree of the image: points of the chart on two random hyperplanes, away from a third.
pub fn image_degree(
    surface: &ParamSurface,
    prime: u64,
    seed: u64,
    budget: &GroebnerBudget,
) -> Result<usize, ProjectorError> {
    let field = PrimeField::new(prime)?;
    let chart = reduce_chart(surface, field)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut form = || {
        let row: Vec<u64> = (0..chart.len()).map(|_| rng.gen_range(1..prime)).collect();
        combine(&row, &chart)
    };
    let (l0, l1, l2) = (form(), form(), form());
    let ideal = Ideal::new(l0.ring(), vec![l1, l2])?.buchberger(MonomialOrder::DegRevLex, budget)?;
    let dim = ideal.quotient_dimension()?;
    if dim > 0 {
        return Err(ProjectorError::PositiveDimensional(dim));
    }
    Ok(ideal.localized_length(&l0)?)
}
