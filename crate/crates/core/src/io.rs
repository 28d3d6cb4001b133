//! JSON file formats for matrices, states and bound reports.
//!
//! Matrix: `{"d": 3, "rows": [[[re, im], ...], ...]}` in row-major nesting.
//! State: the same layout tagged with `"kind": "pure"` (then `"amplitudes":
//! [[re, im], ...]`) or `"kind": "density"` (then `"rows"`).

use std::collections::BTreeMap;
use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::bounds::BoundReport;
use crate::error::{invalid, Result};
use crate::matrix::{c64, ComplexMatrix};
use crate::statelab::{DensityMatrix, PureState};

type Pair = [f64; 2];

#[derive(Debug, Serialize, Deserialize)]
struct MatrixJson {
    d: usize,
    rows: Vec<Vec<Pair>>,
}

fn rows_to_matrix(d: usize, rows: &[Vec<Pair>]) -> Result<ComplexMatrix> {
    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
        return Err(invalid(format!("expected {d} rows of {d} entries")));
    }
    let entries = rows.iter().flatten().map(|[re, im]| c64(*re, *im)).collect();
    ComplexMatrix::from_row_major(d, d, entries)
}

fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<Pair>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect())
        .collect()
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    let parsed: MatrixJson = serde_json::from_str(text).map_err(|e| invalid(format!("malformed matrix JSON: {e}")))?;
    rows_to_matrix(parsed.d, &parsed.rows)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Result<String> {
    if m.rows() != m.cols() {
        return Err(invalid("matrix JSON holds square matrices only"));
    }
    let json = MatrixJson {
        d: m.rows(),
        rows: matrix_to_rows(m),
    };
    Ok(serde_json::to_string(&json).expect("plain data serializes"))
}

#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(PureState),
    Density(DensityMatrix),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum StateJson {
    Pure { d: usize, amplitudes: Vec<Pair> },
    Density { d: usize, rows: Vec<Vec<Pair>> },
}

pub fn state_from_json(text: &str) -> Result<State> {
    let parsed: StateJson = serde_json::from_str(text).map_err(|e| invalid(format!("malformed state JSON: {e}")))?;
    match parsed {
        StateJson::Pure { d, amplitudes } => {
            if amplitudes.len() != d {
                return Err(invalid(format!("expected {d} amplitudes")));
            }
            let amps = amplitudes.iter().map(|[re, im]| c64(*re, *im)).collect();
            Ok(State::Pure(PureState::new(amps)?))
        }
        StateJson::Density { d, rows } => Ok(State::Density(DensityMatrix::new(rows_to_matrix(d, &rows)?)?)),
    }
}

pub fn state_to_json(state: &State) -> String {
    let json = match state {
        State::Pure(psi) => StateJson::Pure {
            d: psi.dim(),
            amplitudes: psi.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        },
        State::Density(rho) => StateJson::Density {
            d: rho.dim(),
            rows: matrix_to_rows(rho.matrix()),
        },
    };
    serde_json::to_string(&json).expect("plain data serializes")
}

/// Rounds to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("formatted float parses")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitValues {
    pub nats: f64,
    pub bits: f64,
}

/// Report values as `id -> {nats, bits}`, rounded to `digits` significant digits.
pub fn report_values(report: &BoundReport, digits: usize) -> BTreeMap<&'static str, UnitValues> {
    // BTreeMap on the id enum keeps the declared order; re-key by string for output.
    report
        .values
        .iter()
        .map(|(id, &v)| {
            (
                id.as_str(),
                UnitValues {
                    nats: round_sig(v, digits),
                    bits: round_sig(v / LN_2, digits),
                },
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::o3;
    use crate::matrix::haar_random_unitary;
    use proptest::prelude::*;

    #[test]
    fn parses_documented_layout() {
        let text = r#"{"d": 2, "rows": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]}"#;
        let m = matrix_from_json(text).unwrap();
        assert_eq!(m, ComplexMatrix::identity(2));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matrix_from_json(r#"{"d": 2, "rows": [[[1.0, 0.0]]]}"#).is_err());
        assert!(matrix_from_json("not json").is_err());
        assert!(state_from_json(r#"{"kind": "pure", "d": 2, "amplitudes": [[1.0, 0.0], [1.0, 0.0]]}"#).is_err());
        assert!(state_from_json(r#"{"kind": "mystery", "d": 1}"#).is_err());
    }

    #[test]
    fn states_round_trip() {
        let pure = State::Pure(PureState::basis(3, 1));
        assert_eq!(state_from_json(&state_to_json(&pure)).unwrap(), pure);
        let rho = State::Density(DensityMatrix::maximally_mixed(2));
        assert_eq!(state_from_json(&state_to_json(&rho)).unwrap(), rho);
    }

    #[test]
    fn o3_round_trips_exactly() {
        let m = o3().matrix().clone();
        assert_eq!(matrix_from_json(&matrix_to_json(&m).unwrap()).unwrap(), m);
    }

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.123456789123, 9), 0.123456789);
        assert_eq!(round_sig(0.0, 9), 0.0);
    }

    proptest! {
        #[test]
        fn random_unitaries_round_trip(seed in any::<u64>(), d in 1usize..6) {
            let m = haar_random_unitary(d, seed).unwrap().matrix().clone();
            prop_assert_eq!(matrix_from_json(&matrix_to_json(&m).unwrap()).unwrap(), m);
        }
    }
}
