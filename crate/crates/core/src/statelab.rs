//! Quantum states, outcome distributions, and the sampling oracle that
//! checks bounds against actual entropy sums.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::entropy::{renyi_entropy, tsallis_entropy, EntropyOrder, WeightVector};
use crate::error::{invalid, Result};
use crate::exec::{self, ExecMode};
use crate::matrix::{hermitian_eigenvalues, standard_complex_normal, ComplexMatrix, UnitaryMatrix, C64};
use crate::optimize::{nelder_mead_min, NelderMeadOptions};

const PURE_NORM_TOL: f64 = 1e-12;
const DENSITY_TOL: f64 = 1e-10;

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(invalid("empty state vector"));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > PURE_NORM_TOL {
            return Err(invalid(format!("state norm {norm} is not 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(invalid("cannot normalize a zero or non-finite vector"));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        })
    }

    pub fn basis(d: usize, i: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); d];
        amplitudes[i] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `|<b_j|psi>|^2` for the columns `b_j` of `u`.
    pub fn probabilities(&self, u: &UnitaryMatrix) -> Result<WeightVector> {
        if u.dim() != self.dim() {
            return Err(invalid("state and unitary dimensions differ"));
        }
        let psi = DVector::from_column_slice(&self.amplitudes);
        let amps = u.matrix().as_nalgebra().adjoint() * psi;
        Ok(WeightVector::clamped(amps.iter().map(|z| z.norm_sqr()).collect()))
    }
}

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() || matrix.is_empty() {
            return Err(invalid("density matrix must be square and nonempty"));
        }
        if matrix.max_abs_diff(&matrix.adjoint()) > DENSITY_TOL {
            return Err(invalid("density matrix is not Hermitian"));
        }
        let trace: f64 = (0..matrix.rows()).map(|i| matrix.get(i, i).re).sum();
        if (trace - 1.0).abs() > DENSITY_TOL {
            return Err(invalid(format!("density matrix trace {trace} is not 1")));
        }
        let min_eig = hermitian_eigenvalues(matrix.as_nalgebra())?[0];
        if min_eig < -DENSITY_TOL {
            return Err(invalid(format!("density matrix has negative eigenvalue {min_eig:e}")));
        }
        Ok(Self { matrix })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let v = DVector::from_column_slice(psi.amplitudes());
        Self {
            matrix: ComplexMatrix::from_nalgebra(&v * v.adjoint()).expect("finite"),
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d).scale(C64::new(1.0 / d as f64, 0.0)),
        }
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let diag: Vec<C64> = probs.iter().map(|&p| C64::new(p, 0.0)).collect();
        Self::new(ComplexMatrix::diagonal(&diag))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// `L >= 1` orthonormal bases of one space, each given by its unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    unitaries: Vec<UnitaryMatrix>,
}

impl MeasurementSet {
    pub fn new(unitaries: Vec<UnitaryMatrix>) -> Result<Self> {
        let first = unitaries.first().ok_or_else(|| invalid("measurement set is empty"))?;
        let d = first.dim();
        if unitaries.iter().any(|u| u.dim() != d) {
            return Err(invalid("all unitaries in a measurement set must share one dimension"));
        }
        Ok(Self { unitaries })
    }

    /// `{identity, u}`: the standard basis against the columns of `u`.
    pub fn pair(u: UnitaryMatrix) -> Self {
        Self {
            unitaries: vec![UnitaryMatrix::identity(u.dim()), u],
        }
    }

    pub fn dim(&self) -> usize {
        self.unitaries[0].dim()
    }

    pub fn len(&self) -> usize {
        self.unitaries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn unitaries(&self) -> &[UnitaryMatrix] {
        &self.unitaries
    }
}

/// `q_j = <b_j| rho |b_j>` for the columns `b_j` of `u`.
pub fn measurement_probabilities(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<WeightVector> {
    if rho.dim() != u.dim() {
        return Err(invalid(format!(
            "state has dimension {} but unitary has {}",
            rho.dim(),
            u.dim()
        )));
    }
    let um = u.matrix().as_nalgebra();
    let rotated = um.adjoint() * rho.matrix.as_nalgebra() * um;
    Ok(WeightVector::clamped(
        (0..u.dim()).map(|j| rotated[(j, j)].re).collect(),
    ))
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let eig = hermitian_eigenvalues(rho.matrix.as_nalgebra())?;
    Ok(crate::entropy::shannon_entropy(&WeightVector::clamped(eig)).max(0.0))
}

/// Which entropy family a sum is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", content = "alpha", rename_all = "lowercase")]
pub enum Functional {
    Renyi(f64),
    Tsallis(f64),
}

impl Functional {
    pub const SHANNON: Functional = Functional::Renyi(1.0);

    pub fn eval(self, w: &WeightVector) -> f64 {
        match self {
            Functional::Renyi(a) => renyi_entropy(w, EntropyOrder::new(a).expect("valid order")),
            Functional::Tsallis(a) => tsallis_entropy(w, EntropyOrder::new(a).expect("valid order")),
        }
    }

    fn validate(self) -> Result<()> {
        let (Functional::Renyi(a) | Functional::Tsallis(a)) = self;
        EntropyOrder::new(a).map(|_| ())
    }
}

/// `sum_i H_alpha(p^(i))` over the bases of `ms`.
pub fn entropy_sum(rho: &DensityMatrix, ms: &MeasurementSet, order: EntropyOrder) -> Result<f64> {
    entropy_sum_with(rho, ms, Functional::Renyi(order.alpha()))
}

pub fn entropy_sum_with(rho: &DensityMatrix, ms: &MeasurementSet, functional: Functional) -> Result<f64> {
    functional.validate()?;
    ms.unitaries()
        .iter()
        .map(|u| measurement_probabilities(rho, u).map(|p| functional.eval(&p)))
        .sum()
}

fn pure_shannon_sum(psi: &PureState, ms: &MeasurementSet) -> f64 {
    ms.unitaries()
        .iter()
        .map(|u| crate::entropy::shannon_entropy(&psi.probabilities(u).expect("dims checked")))
        .sum()
}

pub fn random_pure_state(d: usize, seed: u64) -> Result<PureState> {
    random_pure_state_with(d, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn random_pure_state_with(d: usize, rng: &mut ChaCha8Rng) -> Result<PureState> {
    if d == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    PureState::normalized((0..d).map(|_| standard_complex_normal(rng)).collect())
}

/// Hilbert–Schmidt random state: partial trace of a Haar pure state on `d x d`.
pub fn random_mixed_state(d: usize, seed: u64) -> Result<DensityMatrix> {
    if d == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    let rng = &mut ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(d, d, |_, _| standard_complex_normal(rng));
    let mut rho = &g * g.adjoint();
    let trace: f64 = (0..d).map(|i| rho[(i, i)].re).sum();
    rho.apply(|z| *z /= trace);
    let rho = (&rho + rho.adjoint()).map(|z| z * 0.5);
    DensityMatrix::new(ComplexMatrix::from_nalgebra(rho)?)
}

#[derive(Debug, Clone, Copy)]
pub struct OptimalBoundOptions {
    /// Size of the first restart batch.
    pub restarts: usize,
    /// Restart count is doubled until two batches agree this closely...
    pub agreement: f64,
    /// ...or this many restarts have been spent.
    pub max_restarts: usize,
    pub nelder_mead: NelderMeadOptions,
    pub exec: ExecMode,
}

impl Default for OptimalBoundOptions {
    fn default() -> Self {
        Self {
            restarts: 64,
            agreement: 1e-8,
            max_restarts: 512,
            nelder_mead: NelderMeadOptions::default(),
            exec: ExecMode::default(),
        }
    }
}

/// Multi-start estimate of `min_psi sum_i H(p^(i))` (Shannon).
///
/// Every returned value is an entropy sum actually attained by some state,
/// so it can only overestimate the true minimum.
pub fn optimal_bound_numeric(ms: &MeasurementSet, restarts: usize, seed: u64) -> Result<f64> {
    optimal_bound_numeric_with(
        ms,
        seed,
        &OptimalBoundOptions {
            restarts,
            ..Default::default()
        },
    )
}

pub fn optimal_bound_numeric_with(ms: &MeasurementSet, seed: u64, opts: &OptimalBoundOptions) -> Result<f64> {
    if opts.restarts == 0 {
        return Err(invalid("restarts must be at least 1"));
    }
    let d = ms.dim();
    let objective = |x: &[f64]| -> f64 {
        let amps: Vec<C64> = (0..d).map(|i| C64::new(x[i], x[d + i])).collect();
        match PureState::normalized(amps) {
            Ok(psi) => pure_shannon_sum(&psi, ms),
            Err(_) => f64::INFINITY,
        }
    };
    let polish = |psi: &PureState| -> f64 {
        let start: Vec<f64> = psi
            .amplitudes()
            .iter()
            .map(|z| z.re)
            .chain(psi.amplitudes().iter().map(|z| z.im))
            .collect();
        let at_start = objective(&start);
        nelder_mead_min(objective, &start, &opts.nelder_mead).1.min(at_start)
    };

    // Basis vectors of every measurement are natural candidates for sharp minima.
    let probes: Vec<PureState> = ms
        .unitaries()
        .iter()
        .flat_map(|u| (0..d).map(move |j| u.matrix().column(j)))
        .map(PureState::normalized)
        .collect::<Result<_>>()?;
    let mut best = exec::map_indexed(opts.exec, probes.len(), |i| polish(&probes[i]))
        .into_iter()
        .fold(f64::INFINITY, f64::min);

    let batch = |from: usize, count: usize| -> f64 {
        exec::map_indexed(opts.exec, count, |i| {
            let task_seed = seed.wrapping_add((from + i) as u64);
            let psi = random_pure_state(d, task_seed).expect("d >= 1");
            polish(&psi)
        })
        .into_iter()
        .fold(f64::INFINITY, f64::min)
    };

    let mut spent = opts.restarts;
    best = best.min(batch(0, spent));
    while spent < opts.max_restarts {
        let count = spent.min(opts.max_restarts - spent);
        let next = best.min(batch(spent, count));
        spent += count;
        let settled = (best - next).abs() <= opts.agreement;
        best = next;
        if settled {
            break;
        }
    }
    Ok(best)
}

/// One inequality to certify: `sum_i F(p^(i)) >= value (+ S(rho))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub value: f64,
    pub functional: Functional,
    /// Multiple of the von Neumann entropy the bound grows by for mixed
    /// states (0 for state-independent bounds).
    pub state_entropy_weight: f64,
}

impl BoundCheck {
    pub fn shannon(value: f64) -> Self {
        Self {
            value,
            functional: Functional::SHANNON,
            state_entropy_weight: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ValidityOptions {
    /// Random states drawn; even indices are Haar pure, odd are
    /// Hilbert–Schmidt mixed. Basis states of every measurement are added.
    pub samples: usize,
    pub seed: u64,
    pub exec: ExecMode,
}

impl ValidityOptions {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            exec: ExecMode::default(),
        }
    }
}

/// Smallest `entropy sum - bound` found for a single Shannon bound.
pub fn validity_margin(ms: &MeasurementSet, bound_nats: f64, samples: usize, seed: u64) -> Result<f64> {
    validity_margins(
        ms,
        &[BoundCheck::shannon(bound_nats)],
        &ValidityOptions::new(samples, seed),
    )
    .map(|m| m[0])
}

/// Per-check minimum of `entropy sum - (bound + S(rho) if applicable)` over
/// the probe states. A value below `-1e-9` is a violation.
pub fn validity_margins(ms: &MeasurementSet, checks: &[BoundCheck], opts: &ValidityOptions) -> Result<Vec<f64>> {
    probe_entropy_sums(ms, checks, opts).map(|(margins, _)| margins)
}

/// As [`validity_margins`], also returning the smallest entropy sum seen per check.
pub fn probe_entropy_sums(
    ms: &MeasurementSet,
    checks: &[BoundCheck],
    opts: &ValidityOptions,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if opts.samples == 0 {
        return Err(invalid("samples must be at least 1"));
    }
    for c in checks {
        c.functional.validate()?;
    }
    let d = ms.dim();
    let basis: Vec<PureState> = ms
        .unitaries()
        .iter()
        .flat_map(|u| (0..d).map(move |j| u.matrix().column(j)))
        .map(PureState::normalized)
        .collect::<Result<_>>()?;

    let evaluate = |idx: usize| -> Result<Vec<(f64, f64)>> {
        let (probs, state_entropy) = if idx < basis.len() {
            let psi = &basis[idx];
            let probs: Result<Vec<_>> = ms.unitaries().iter().map(|u| psi.probabilities(u)).collect();
            (probs?, 0.0)
        } else {
            let i = idx - basis.len();
            let task_seed = opts.seed.wrapping_add(i as u64);
            if i.is_multiple_of(2) {
                let psi = random_pure_state(d, task_seed)?;
                let probs: Result<Vec<_>> = ms.unitaries().iter().map(|u| psi.probabilities(u)).collect();
                (probs?, 0.0)
            } else {
                let rho = random_mixed_state(d, task_seed)?;
                let probs: Result<Vec<_>> = ms
                    .unitaries()
                    .iter()
                    .map(|u| measurement_probabilities(&rho, u))
                    .collect();
                (probs?, von_neumann_entropy(&rho)?)
            }
        };
        Ok(checks
            .iter()
            .map(|c| {
                let sum: f64 = probs.iter().map(|p| c.functional.eval(p)).sum();
                let target = c.value + c.state_entropy_weight * state_entropy;
                (sum - target, sum)
            })
            .collect())
    };

    let rows = exec::try_map_indexed(opts.exec, basis.len() + opts.samples, evaluate)?;
    let mut margins = vec![f64::INFINITY; checks.len()];
    let mut minima = vec![f64::INFINITY; checks.len()];
    for row in rows {
        for (k, (margin, sum)) in row.into_iter().enumerate() {
            margins[k] = margins[k].min(margin);
            minima[k] = minima[k].min(sum);
        }
    }
    Ok((margins, minima))
}
