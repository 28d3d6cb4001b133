//! Parametric matrix families and parameter sweeps over them.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bounds::{compute_report, BoundReport, ReportOptions};
use crate::error::{invalid, Result};
use crate::exec::{self, ExecMode};
use crate::matrix::{
    c64, hermitian_phase_exp, unitary_fractional_power, ComplexMatrix, HermitianMatrix, UnitaryMatrix, C64,
};
use crate::statelab::{optimal_bound_numeric_with, MeasurementSet, OptimalBoundOptions};

const RANGE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyId {
    /// `M(theta) O3 M(theta)^dagger`, rotation in the last two coordinates.
    F1Theta,
    /// `(F3)^beta exp(i (1 - beta) H)`.
    F2Beta,
    /// `(F4)^beta`.
    F4Power,
    /// Three qubit bases, identical at 0 and mutually unbiased at pi/4.
    Qubit3Theta,
    /// Four qutrit bases, identical at 0 and mutually unbiased at pi/4.
    Qutrit4Theta,
}

impl FamilyId {
    pub const ALL: [FamilyId; 5] = [
        FamilyId::F1Theta,
        FamilyId::F2Beta,
        FamilyId::F4Power,
        FamilyId::Qubit3Theta,
        FamilyId::Qutrit4Theta,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::F1Theta => "f1_theta",
            FamilyId::F2Beta => "f2_beta",
            FamilyId::F4Power => "f4_power",
            FamilyId::Qubit3Theta => "qubit3_theta",
            FamilyId::Qutrit4Theta => "qutrit4_theta",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            FamilyId::F1Theta | FamilyId::F2Beta | FamilyId::Qutrit4Theta => 3,
            FamilyId::F4Power => 4,
            FamilyId::Qubit3Theta => 2,
        }
    }

    /// Number of bases in the measurement set.
    pub fn count_l(self) -> usize {
        match self {
            FamilyId::F1Theta | FamilyId::F2Beta | FamilyId::F4Power => 2,
            FamilyId::Qubit3Theta => 3,
            FamilyId::Qutrit4Theta => 4,
        }
    }

    /// Number of nontrivial unitaries (1 for the pairwise families).
    pub fn count_unitaries(self) -> usize {
        match self {
            FamilyId::F1Theta | FamilyId::F2Beta | FamilyId::F4Power => 1,
            _ => self.count_l(),
        }
    }

    pub fn is_multi(self) -> bool {
        self.count_l() > 2
    }

    /// Admissible parameter interval.
    pub fn valid_range(self) -> (f64, f64) {
        match self {
            FamilyId::F2Beta | FamilyId::F4Power => (0.0, 1.0),
            _ => (0.0, FRAC_PI_2),
        }
    }

    /// Default sweep interval.
    pub fn default_range(self) -> (f64, f64) {
        match self {
            FamilyId::F1Theta => (0.0, FRAC_PI_2),
            FamilyId::F2Beta | FamilyId::F4Power => (0.0, 1.0),
            FamilyId::Qubit3Theta | FamilyId::Qutrit4Theta => (0.0, FRAC_PI_4),
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilySpec {
    pub id: FamilyId,
    pub parameter: f64,
}

impl FamilySpec {
    pub fn new(id: FamilyId, parameter: f64) -> Result<Self> {
        let (lo, hi) = id.valid_range();
        if !parameter.is_finite() || parameter < lo - RANGE_SLACK || parameter > hi + RANGE_SLACK {
            return Err(invalid(format!("parameter {parameter} outside [{lo}, {hi}] for {id}")));
        }
        Ok(Self { id, parameter })
    }
}

/// `(F_d)_{jk} = exp(2 pi i jk / d) / sqrt(d)`, zero-based indices.
pub fn fourier_matrix(d: usize) -> Result<UnitaryMatrix> {
    if d == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    let n = d as f64;
    let entries = (0..d * d)
        .map(|idx| {
            // jk mod d keeps the phase argument small and exact.
            let jk = ((idx / d) * (idx % d)) % d;
            C64::from_polar(1.0 / n.sqrt(), 2.0 * PI * jk as f64 / n)
        })
        .collect();
    UnitaryMatrix::new(ComplexMatrix::from_row_major(d, d, entries)?)
}

/// The real orthogonal 3x3 example matrix (first row uniform).
pub fn o3() -> UnitaryMatrix {
    let s6 = 6f64.sqrt();
    let a = 2f64.sqrt() / s6;
    let b = 3f64.sqrt() / s6;
    let m =
        ComplexMatrix::from_real_rows(&[&[a, a, a], &[b, 0.0, -b], &[1.0 / s6, -2.0 / s6, 1.0 / s6]]).expect("finite");
    UnitaryMatrix::new(m).expect("O3 is orthogonal")
}

/// Model Hamiltonian used by the `f2_beta` family.
pub fn model_hamiltonian() -> HermitianMatrix {
    HermitianMatrix::from_real_rows(&[&[0.0, 1.0, 2.0], &[1.0, 0.0, 2.0], &[2.0, 2.0, 0.0]]).expect("symmetric")
}

fn rotation_m(theta: f64) -> UnitaryMatrix {
    let (s, c) = theta.sin_cos();
    let m = ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, c, s], &[0.0, -s, c]]).expect("finite");
    UnitaryMatrix::new(m).expect("rotation")
}

/// Unitaries of the family at one parameter value, without the identity
/// partner that the pairwise families get in [`build_family`].
pub fn family_unitaries(spec: &FamilySpec) -> Result<Vec<UnitaryMatrix>> {
    let t = spec.parameter;
    match spec.id {
        FamilyId::F1Theta => {
            let m = rotation_m(t);
            Ok(vec![m.compose(&o3())?.compose(&m.adjoint())?])
        }
        FamilyId::F2Beta => {
            let power = unitary_fractional_power(&fourier_matrix(3)?, t)?;
            let phase = hermitian_phase_exp(&model_hamiltonian(), 1.0 - t)?;
            Ok(vec![power.compose(&phase)?])
        }
        FamilyId::F4Power => Ok(vec![unitary_fractional_power(&fourier_matrix(4)?, t)?]),
        FamilyId::Qubit3Theta => {
            let (s, c) = t.sin_cos();
            let u2 = ComplexMatrix::from_real_rows(&[&[c, s], &[s, -c]])?;
            let u3 = ComplexMatrix::from_row_major(2, 2, vec![c64(c, 0.0), c64(s, 0.0), c64(0.0, s), c64(0.0, -c)])?;
            Ok(vec![
                UnitaryMatrix::identity(2),
                UnitaryMatrix::new(u2)?,
                UnitaryMatrix::new(u3)?,
            ])
        }
        FamilyId::Qutrit4Theta => {
            let g = unitary_fractional_power(&fourier_matrix(3)?, 4.0 * t / PI)?;
            let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
            let e = UnitaryMatrix::new(ComplexMatrix::diagonal(&[c64(1.0, 0.0), w, w]))?;
            let eg = e.compose(&g)?;
            let e2g = e.compose(&eg)?;
            Ok(vec![UnitaryMatrix::identity(3), g, eg, e2g])
        }
    }
}

/// The family's measurement set: `{identity, U}` for pairwise families, all
/// `L` bases for the multi families.
pub fn build_family(spec: &FamilySpec) -> Result<MeasurementSet> {
    let mut us = family_unitaries(spec)?;
    if spec.id.is_multi() {
        MeasurementSet::new(us)
    } else {
        Ok(MeasurementSet::pair(us.remove(0)))
    }
}

/// `steps` evenly spaced values over `[start, end]`, endpoints included.
pub fn grid(start: f64, end: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(invalid("a sweep needs at least 2 steps"));
    }
    let h = (end - start) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i == steps - 1 { end } else { start + h * i as f64 })
        .collect())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SweepOptions {
    pub report: ReportOptions,
    /// Also estimate the optimal bound numerically at each point.
    pub include_opt: bool,
    pub opt: OptimalBoundOptions,
    pub seed: u64,
    pub exec: ExecMode,
}

impl SweepOptions {
    /// Pairwise families skip the numeric optimum; multi families include it.
    pub fn for_family(id: FamilyId) -> Self {
        Self {
            include_opt: id.is_multi(),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub param: f64,
    pub report: BoundReport,
    pub opt: Option<f64>,
}

/// Evaluates every grid point; output is in parameter order.
pub fn sweep(
    id: FamilyId,
    param_start: f64,
    param_end: f64,
    steps: usize,
    opts: &SweepOptions,
) -> Result<Vec<SweepPoint>> {
    let params = grid(param_start, param_end, steps)?;
    for &p in &params {
        FamilySpec::new(id, p)?;
    }
    exec::try_map_indexed(opts.exec, params.len(), |i| {
        let param = params[i];
        let ms = build_family(&FamilySpec::new(id, param)?)?;
        let report = compute_report(&ms, &opts.report)?;
        let opt = if opts.include_opt {
            let seed = opts.seed.wrapping_add(i as u64);
            Some(optimal_bound_numeric_with(&ms, seed, &opts.opt)?)
        } else {
            None
        };
        Ok(SweepPoint { param, report, opt })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::BoundId;
    use crate::majorants::overlap_vector;
    use crate::matrix::operator_norm;

    #[test]
    fn fourier_examples() {
        let f1 = fourier_matrix(1).unwrap();
        assert!((f1.get(0, 0) - c64(1.0, 0.0)).norm() < 1e-15);
        let f5 = fourier_matrix(5).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert!((f5.get(i, j).norm() - 1.0 / 5f64.sqrt()).abs() < 1e-15);
            }
        }
        let f4 = fourier_matrix(4).unwrap();
        let mut p = f4.clone();
        for _ in 0..3 {
            p = p.compose(&f4).unwrap();
        }
        assert!(p.matrix().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-10);
        assert!((operator_norm(f4.matrix()).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn family_endpoints() {
        let f1 = build_family(&FamilySpec::new(FamilyId::F1Theta, 0.0).unwrap()).unwrap();
        assert!(f1.unitaries()[1].matrix().max_abs_diff(o3().matrix()) < 1e-15);

        let f2 = build_family(&FamilySpec::new(FamilyId::F2Beta, 1.0).unwrap()).unwrap();
        assert!(
            f2.unitaries()[1]
                .matrix()
                .max_abs_diff(fourier_matrix(3).unwrap().matrix())
                < 1e-10
        );

        let f4 = build_family(&FamilySpec::new(FamilyId::F4Power, 0.0).unwrap()).unwrap();
        assert!(f4.unitaries()[1].matrix().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-10);
    }

    #[test]
    fn unknown_ids_and_ranges() {
        assert!("f9".parse::<FamilyId>().is_err());
        for id in FamilyId::ALL {
            assert_eq!(id.as_str().parse::<FamilyId>().unwrap(), id);
        }
        assert!(FamilySpec::new(FamilyId::F2Beta, 1.5).is_err());
        assert!(FamilySpec::new(FamilyId::F1Theta, -0.1).is_err());
    }

    #[test]
    fn families_stay_unitary_on_fine_grid() {
        for id in FamilyId::ALL {
            let (lo, hi) = id.valid_range();
            for p in grid(lo, hi, 101).unwrap() {
                let ms = build_family(&FamilySpec::new(id, p).unwrap()).unwrap();
                assert_eq!(ms.len(), id.count_l());
                assert_eq!(ms.dim(), id.dim());
                for u in ms.unitaries() {
                    assert!(u.deviation() < 1e-10, "{id} at {p}");
                }
            }
        }
    }

    #[test]
    fn f1_at_zero_has_o3_overlaps() {
        let ms = build_family(&FamilySpec::new(FamilyId::F1Theta, 0.0).unwrap()).unwrap();
        assert_eq!(overlap_vector(&ms.unitaries()[1]), overlap_vector(&o3()));
    }

    fn cross_overlaps_equal(id: FamilyId, expected: f64) {
        let ms = build_family(&FamilySpec::new(id, FRAC_PI_4).unwrap()).unwrap();
        let us = ms.unitaries();
        for a in 0..us.len() {
            for b in 0..us.len() {
                if a == b {
                    continue;
                }
                let v = us[a].adjoint().compose(&us[b]).unwrap();
                for row in v.matrix().abs_squared() {
                    for x in row {
                        assert!((x - expected).abs() < 1e-9, "{id}: {x}");
                    }
                }
            }
        }
    }

    #[test]
    fn mub_endpoints_are_unbiased() {
        cross_overlaps_equal(FamilyId::Qubit3Theta, 0.5);
        cross_overlaps_equal(FamilyId::Qutrit4Theta, 1.0 / 3.0);
    }

    #[test]
    fn sweep_examples() {
        let pts = sweep(FamilyId::F1Theta, 0.0, FRAC_PI_2, 41, &SweepOptions::default()).unwrap();
        assert_eq!(pts.len(), 41);
        for p in &pts {
            let r = &p.report;
            assert!(r.get(BoundId::Maj2).unwrap() >= r.get(BoundId::Maj1).unwrap() - 1e-9);
        }
        assert!(pts.windows(2).all(|w| w[0].param < w[1].param));

        let q = sweep(FamilyId::Qubit3Theta, 0.0, FRAC_PI_4, 2, &SweepOptions::default()).unwrap();
        assert!(q[0].report.get(BoundId::Multi).unwrap().abs() < 1e-12);

        let f4 = sweep(FamilyId::F4Power, 0.0, 1.0, 2, &SweepOptions::default()).unwrap();
        assert!((f4[1].report.get(BoundId::MU).unwrap() - 4f64.ln()).abs() < 1e-10);

        assert!(sweep(FamilyId::F4Power, 0.0, 1.0, 1, &SweepOptions::default()).is_err());
    }
}
