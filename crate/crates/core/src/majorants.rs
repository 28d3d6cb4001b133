//! Majorizing data derived from a unitary or a set of unitaries.
//!
//! The singular profiles come from exhaustive submatrix search. Every bound
//! built on them is only valid if the maxima are exact, so there is no
//! heuristic fallback: inputs above the size caps are rejected.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::entropy::WeightVector;
use crate::error::{invalid, Error, Result};
use crate::exec::{self, ExecMode};
use crate::matrix::{max_hermitian_eigenvalue, operator_norm, UnitaryMatrix, C64};

pub const DEFAULT_PAIRWISE_CAP: usize = 8;
pub const DEFAULT_MULTI_CAP: usize = 16;
/// Consecutive singular-value differences below this are rounding noise.
pub const DIFFERENCE_SNAP: f64 = 1e-12;

/// Size caps and execution mode for the exhaustive searches.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Largest `d` accepted by [`sk_profile`].
    pub pairwise_cap: usize,
    /// Largest total column count `dL` accepted by [`multi_profile`].
    pub multi_cap: usize,
    pub exec: ExecMode,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            pairwise_cap: DEFAULT_PAIRWISE_CAP,
            multi_cap: DEFAULT_MULTI_CAP,
            exec: ExecMode::default(),
        }
    }
}

impl SearchOptions {
    pub fn with_exec(exec: ExecMode) -> Self {
        Self {
            exec,
            ..Self::default()
        }
    }
}

/// All `|U_ij|^2`, sorted in decreasing order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapVector {
    c: WeightVector,
}

impl OverlapVector {
    pub fn values(&self) -> &[f64] {
        self.c.entries()
    }

    pub fn weights(&self) -> &WeightVector {
        &self.c
    }

    /// Largest overlap.
    pub fn c1(&self) -> f64 {
        self.c.entries()[0]
    }

    /// Second largest overlap (0 for `d = 1`).
    pub fn c2(&self) -> f64 {
        self.c.entries().get(1).copied().unwrap_or(0.0)
    }

    /// `C = (1 + sqrt(c1)) / 2`.
    pub fn big_c(&self) -> f64 {
        (1.0 + self.c1().sqrt()) / 2.0
    }
}

pub fn overlap_vector(u: &UnitaryMatrix) -> OverlapVector {
    let mut values: Vec<f64> = u.matrix().abs_squared().into_iter().flatten().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    OverlapVector {
        c: WeightVector::clamped(values),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProfileKind {
    /// `s_1..s_d` of a single unitary.
    Pairwise { d: usize },
    /// `S_0..S_{dL-1}` of `L` stacked bases.
    Multi { d: usize, l: usize },
}

/// Maximal submatrix singular values, nondecreasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularProfile {
    #[serde(flatten)]
    kind: ProfileKind,
    values: Vec<f64>,
}

impl SingularProfile {
    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    /// Pairwise: `values()[k - 1] = s_k`. Multi: `values()[k] = S_k`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `s_k` for `k = 1..=d`.
    pub fn s(&self, k: usize) -> f64 {
        match self.kind {
            ProfileKind::Pairwise { .. } => self.values[k - 1],
            ProfileKind::Multi { .. } => panic!("s_k requested from a multi profile"),
        }
    }

    pub fn is_pairwise(&self) -> bool {
        matches!(self.kind, ProfileKind::Pairwise { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum MajorantLabel {
    W,
    W1,
    W2,
    Q0,
    Q1,
    Qd,
    Multi,
}

impl MajorantLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            MajorantLabel::W => "W",
            MajorantLabel::W1 => "W1",
            MajorantLabel::W2 => "W2",
            MajorantLabel::Q0 => "Q0",
            MajorantLabel::Q1 => "Q1",
            MajorantLabel::Qd => "Qd",
            MajorantLabel::Multi => "multi",
        }
    }
}

/// A labelled majorizing vector, stored in construction order (not sorted).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorizingVector {
    pub label: MajorantLabel,
    pub weights: WeightVector,
}

impl MajorizingVector {
    fn new(label: MajorantLabel, entries: Vec<f64>) -> Self {
        Self {
            label,
            weights: WeightVector::clamped(entries),
        }
    }

    pub fn entries(&self) -> &[f64] {
        self.weights.entries()
    }

    pub fn sorted_desc(&self) -> Vec<f64> {
        self.weights.sorted_desc()
    }
}

fn subset_indices(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|i| mask >> i & 1 == 1).collect()
}

/// `s_k = max ||M||` over submatrices with `#rows + #cols = k + 1`.
///
/// Every (row subset, column subset) pair is visited; rows-by-columns and
/// columns-by-rows shapes are not interchangeable for a general unitary.
pub fn sk_profile(u: &UnitaryMatrix, opts: &SearchOptions) -> Result<SingularProfile> {
    let d = u.dim();
    if d > opts.pairwise_cap {
        return Err(Error::SizeLimit {
            what: "d",
            value: d,
            cap: opts.pairwise_cap,
        });
    }
    let m = u.matrix();
    let full = 1usize << d;
    let best = exec::max_indexed(opts.exec, full - 1, d, |idx| {
        let row_mask = idx + 1;
        let rows = subset_indices(row_mask);
        let mut local = vec![0.0; d];
        for col_mask in 1..full {
            let size = rows.len() + col_mask.count_ones() as usize;
            if size > d + 1 {
                continue;
            }
            let cols = subset_indices(col_mask);
            // operator_norm only fails on empty input
            let norm = operator_norm(&m.submatrix(&rows, &cols)).unwrap_or(0.0);
            let k = size - 1;
            if norm > local[k - 1] {
                local[k - 1] = norm;
            }
        }
        local
    });
    if best.iter().any(|x| !x.is_finite()) {
        return Err(Error::NumericFailure("submatrix search produced no value".into()));
    }
    Ok(SingularProfile {
        kind: ProfileKind::Pairwise { d },
        values: best,
    })
}

/// `W = (s_1, s_2 - s_1, ..., s_d - s_{d-1})`.
pub fn direct_sum_vector(profile: &SingularProfile) -> Result<MajorizingVector> {
    if !profile.is_pairwise() {
        return Err(invalid("direct-sum vector needs a pairwise profile"));
    }
    Ok(MajorizingVector::new(
        MajorantLabel::W,
        differences(0.0, &profile.values),
    ))
}

fn differences(start: f64, values: &[f64]) -> Vec<f64> {
    let mut prev = start;
    values
        .iter()
        .map(|&v| {
            let diff = v - prev;
            prev = v;
            if diff.abs() < DIFFERENCE_SNAP {
                0.0
            } else {
                diff
            }
        })
        .collect()
}

/// `W2` clamps `sqrt(c1 + c2)` at 1; this reports whether the clamp was hit.
pub fn w2_is_clamped(c: &OverlapVector) -> bool {
    (c.c1() + c.c2()).sqrt() > 1.0
}

/// `Q0, Q1, Qd, W1, W2` in that order.
pub fn closed_form_majorants(c: &OverlapVector, profile: &SingularProfile) -> Result<Vec<MajorizingVector>> {
    let ProfileKind::Pairwise { d } = profile.kind else {
        return Err(invalid("closed-form majorants need a pairwise profile"));
    };
    if c.values().len() != d * d {
        return Err(invalid("overlap vector and profile come from different dimensions"));
    }
    let padded = |mut v: Vec<f64>, len: usize| {
        if v.len() < len {
            v.resize(len, 0.0);
        }
        v
    };

    let q0 = padded(vec![1.0], d);

    let big_c2 = c.big_c().powi(2);
    let q1 = padded(vec![big_c2, 1.0 - big_c2], d);

    let r: Vec<f64> = profile.values.iter().map(|s| ((1.0 + s) / 2.0).powi(2)).collect();
    let qd = differences(0.0, &r);

    let root_c1 = c.c1().sqrt();
    let w1 = padded(vec![root_c1, 1.0 - root_c1], d);

    let t = (c.c1() + c.c2()).sqrt().min(1.0);
    let w2 = padded(vec![root_c1, t - root_c1, 1.0 - t], d);

    Ok(vec![
        MajorizingVector::new(MajorantLabel::Q0, q0),
        MajorizingVector::new(MajorantLabel::Q1, q1),
        MajorizingVector::new(MajorantLabel::Qd, qd),
        MajorizingVector::new(MajorantLabel::W1, w1),
        MajorizingVector::new(MajorantLabel::W2, w2),
    ])
}

/// `S_k = max sigma_1^2` over `(k+1)`-subsets of the concatenated columns.
pub fn multi_profile(us: &[UnitaryMatrix], opts: &SearchOptions) -> Result<SingularProfile> {
    let first = us.first().ok_or_else(|| invalid("empty measurement set"))?;
    let d = first.dim();
    if us.iter().any(|u| u.dim() != d) {
        return Err(invalid("all unitaries must share one dimension"));
    }
    let l = us.len();
    let n = d * l;
    if n > opts.multi_cap {
        return Err(Error::SizeLimit {
            what: "dL",
            value: n,
            cap: opts.multi_cap,
        });
    }
    let columns: Vec<Vec<C64>> = us
        .iter()
        .flat_map(|u| (0..d).map(move |j| u.matrix().column(j)))
        .collect();

    const CHUNK: usize = 256;
    let masks = (1usize << n) - 1;
    let chunks = masks.div_ceil(CHUNK);
    let best = exec::max_indexed(opts.exec, chunks, n, |chunk| {
        let mut local = vec![0.0; n];
        let lo = chunk * CHUNK + 1;
        let hi = ((chunk + 1) * CHUNK).min(masks);
        for mask in lo..=hi {
            let chosen = subset_indices(mask);
            let sq = top_squared_singular_value(&columns, &chosen, d);
            let k = chosen.len() - 1;
            if sq > local[k] {
                local[k] = sq;
            }
        }
        local
    });
    if best.iter().any(|x| !x.is_finite()) {
        return Err(Error::NumericFailure("column search produced no value".into()));
    }
    Ok(SingularProfile {
        kind: ProfileKind::Multi { d, l },
        values: best,
    })
}

/// `sigma_1^2` of the `d x m` matrix formed by `columns[chosen]`, from the
/// smaller of its two Gram matrices.
fn top_squared_singular_value(columns: &[Vec<C64>], chosen: &[usize], d: usize) -> f64 {
    let m = chosen.len();
    if m == 1 {
        return columns[chosen[0]].iter().map(|z| z.norm_sqr()).sum();
    }
    let gram = if m <= d {
        DMatrix::from_fn(m, m, |a, b| {
            let (ca, cb) = (&columns[chosen[a]], &columns[chosen[b]]);
            ca.iter().zip(cb).map(|(x, y)| x.conj() * y).sum::<C64>()
        })
    } else {
        DMatrix::from_fn(d, d, |i, j| {
            chosen
                .iter()
                .map(|&c| columns[c][i] * columns[c][j].conj())
                .sum::<C64>()
        })
    };
    max_hermitian_eigenvalue(&gram).unwrap_or(f64::NAN)
}

/// `(1, S_1 - 1, S_2 - S_1, ..., S_{dL-1} - S_{dL-2})`, total mass `L`.
pub fn multi_majorizing_vector(profile: &SingularProfile) -> Result<MajorizingVector> {
    if profile.is_pairwise() {
        return Err(invalid("multi majorizing vector needs a multi profile"));
    }
    let mut entries = vec![1.0];
    entries.extend(differences(1.0, &profile.values[1..]));
    Ok(MajorizingVector::new(MajorantLabel::Multi, entries))
}

/// Everything derived from one unitary, computed once and shared by the bounds.
#[derive(Debug, Clone, Serialize)]
pub struct PairMajorants {
    pub overlap: OverlapVector,
    pub profile: SingularProfile,
    pub w: MajorizingVector,
    pub w1: MajorizingVector,
    pub w2: MajorizingVector,
    pub q0: MajorizingVector,
    pub q1: MajorizingVector,
    pub qd: MajorizingVector,
    pub w2_clamped: bool,
}

impl PairMajorants {
    pub fn compute(u: &UnitaryMatrix, opts: &SearchOptions) -> Result<Self> {
        let overlap = overlap_vector(u);
        let profile = sk_profile(u, opts)?;
        let w = direct_sum_vector(&profile)?;
        let mut closed = closed_form_majorants(&overlap, &profile)?.into_iter();
        let mut next = || closed.next().expect("five closed-form majorants");
        let (q0, q1, qd, w1, w2) = (next(), next(), next(), next(), next());
        let w2_clamped = w2_is_clamped(&overlap);
        Ok(Self {
            overlap,
            profile,
            w,
            w1,
            w2,
            q0,
            q1,
            qd,
            w2_clamped,
        })
    }
}
