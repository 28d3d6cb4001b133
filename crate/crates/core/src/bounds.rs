//! Lower bounds on sums of outcome entropies, all in nats.
//!
//! Pairwise bounds depend on one unitary `U_ij = <a_i|b_j>`; the multi bounds
//! depend on a whole [`MeasurementSet`]. The expensive submatrix search is
//! done once per unitary in [`PairMajorants`] and shared by every bound.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

use crate::entropy::{renyi_entropy, shannon_entropy, tsallis_entropy, EntropyOrder};
use crate::error::{invalid, Result};
use crate::majorants::{
    multi_majorizing_vector, multi_profile, MajorantLabel, MajorizingVector, OverlapVector, PairMajorants,
    SearchOptions,
};
use crate::matrix::{hermitian_eigenvalues, UnitaryMatrix, C64};
use crate::optimize::golden_section_max;
use crate::statelab::{BoundCheck, Functional, MeasurementSet};

/// Largest `d` accepted by [`bound_rpz3`] (its cost grows like `d^6 log d`).
pub const RPZ3_CAP: usize = 32;
/// Report values smaller than this in magnitude are rounding noise around 0.
pub const VALUE_SNAP: f64 = 1e-12;
const CP2_KAPPA_TOL: f64 = 1e-10;
const CP2_GRID: usize = 101;

/// Stable identifiers of every bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundId {
    D,
    MU,
    CP1,
    CP2,
    RPZ1,
    RPZ2,
    RPZ3,
    Maj1,
    Maj2,
    Multi,
    MultiTsallis,
}

impl BoundId {
    pub const ALL: [BoundId; 11] = [
        BoundId::D,
        BoundId::MU,
        BoundId::CP1,
        BoundId::CP2,
        BoundId::RPZ1,
        BoundId::RPZ2,
        BoundId::RPZ3,
        BoundId::Maj1,
        BoundId::Maj2,
        BoundId::Multi,
        BoundId::MultiTsallis,
    ];

    /// The bounds defined for a single pair of bases.
    pub const PAIRWISE: [BoundId; 9] = [
        BoundId::D,
        BoundId::MU,
        BoundId::CP1,
        BoundId::CP2,
        BoundId::RPZ1,
        BoundId::RPZ2,
        BoundId::RPZ3,
        BoundId::Maj1,
        BoundId::Maj2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::D => "D",
            BoundId::MU => "MU",
            BoundId::CP1 => "CP1",
            BoundId::CP2 => "CP2",
            BoundId::RPZ1 => "RPZ1",
            BoundId::RPZ2 => "RPZ2",
            BoundId::RPZ3 => "RPZ3",
            BoundId::Maj1 => "Maj1",
            BoundId::Maj2 => "Maj2",
            BoundId::Multi => "Multi",
            BoundId::MultiTsallis => "MultiTsallis",
        }
    }

    /// The RPZ bounds hold for mixed states with `S(rho)` added.
    pub fn adds_state_entropy(self) -> bool {
        matches!(self, BoundId::RPZ1 | BoundId::RPZ2 | BoundId::RPZ3)
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundId {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown bound id {s:?}")))
    }
}

impl Serialize for BoundId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

pub fn bound_deutsch(c: &OverlapVector) -> f64 {
    -2.0 * c.big_c().ln()
}

pub fn bound_maassen_uffink(c: &OverlapVector) -> f64 {
    -c.c1().ln()
}

pub fn bound_cp1(c: &OverlapVector) -> f64 {
    let (c1, c2) = (c.c1(), c.c2());
    if c2 <= 0.0 {
        // Only a permutation-with-phases unitary has c2 = 0; then c1 = 1.
        return 0.0;
    }
    -c1.ln() + (1.0 - c.big_c()) * (c1 / c2).ln()
}

/// `Delta(kappa) = kappa * diag_part + (1 - kappa) * rotated_part`.
struct DeltaPencil {
    diag_part: DMatrix<C64>,
    rotated_part: DMatrix<C64>,
}

impl DeltaPencil {
    fn new(u: &UnitaryMatrix) -> Self {
        let d = u.dim();
        let m = u.matrix().as_nalgebra();
        let row_max: Vec<f64> = (0..d)
            .map(|i| (0..d).map(|k| m[(i, k)].norm()).fold(0.0, f64::max).ln())
            .collect();
        let col_max: Vec<f64> = (0..d)
            .map(|j| (0..d).map(|k| m[(k, j)].norm()).fold(0.0, f64::max).ln())
            .collect();
        let diag_part = DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(row_max[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let weights = DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(col_max[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let rotated_part = m * weights * m.adjoint();
        Self {
            diag_part,
            rotated_part,
        }
    }

    /// `lambda_min(-2 Delta(kappa))`, concave in `kappa`.
    fn objective(&self, kappa: f64) -> Result<f64> {
        let delta =
            &self.diag_part * C64::new(-2.0 * kappa, 0.0) + &self.rotated_part * C64::new(-2.0 * (1.0 - kappa), 0.0);
        Ok(hermitian_eigenvalues(&delta)?[0])
    }
}

/// CP2 value and the maximizing `kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cp2 {
    pub value: f64,
    pub kappa: f64,
}

/// `max_{kappa in [0,1]} lambda_min(-2 Delta(kappa))`: golden-section search
/// cross-checked against a 101-point grid, keeping the better of the two.
pub fn bound_cp2(u: &UnitaryMatrix) -> Result<Cp2> {
    let pencil = DeltaPencil::new(u);
    let (mut kappa, mut value) = golden_section_max(|k| pencil.objective(k), 0.0, 1.0, CP2_KAPPA_TOL)?;
    for i in 0..CP2_GRID {
        let k = i as f64 / (CP2_GRID - 1) as f64;
        let v = pencil.objective(k)?;
        if v > value {
            value = v;
            kappa = k;
        }
    }
    Ok(Cp2 { value, kappa })
}

/// `Q` sorted decreasingly and zero-padded (or truncated past its support) to `len`.
fn sorted_padded(q: &MajorizingVector, len: usize) -> Vec<f64> {
    let mut v = q.sorted_desc();
    v.resize(len, 0.0);
    v
}

/// `-ln(Q · c) + S(rho)`.
pub fn bound_rpz1(c: &OverlapVector, q: &MajorizingVector, state_entropy: f64) -> f64 {
    let cv = c.values();
    let qv = sorted_padded(q, cv.len());
    let dot: f64 = qv.iter().zip(cv).map(|(a, b)| a * b).sum();
    -dot.ln() + state_entropy
}

/// `-ln(c1 C^2 + c2 (1 - C^2)) + S(rho)`.
pub fn bound_rpz2(c: &OverlapVector, state_entropy: f64) -> f64 {
    let c2_big = c.big_c().powi(2);
    -(c.c1() * c2_big + c.c2() * (1.0 - c2_big)).ln() + state_entropy
}

/// `(1/2) sum_i Q_i g_i + S(rho)` with `Q` decreasing and
/// `g_kl = -ln(Q · h_kl)` increasing, `h_kl = sort_desc(|U_kj|^2 |U_il|^2 over (i, j))`.
///
/// Pairing the largest weights with the smallest `g` minimizes `r · g` over
/// all `r ≺ Q`, which is what makes the result a lower bound.
pub fn bound_rpz3(u: &UnitaryMatrix, q: &MajorizingVector, state_entropy: f64) -> Result<f64> {
    let d = u.dim();
    if d > RPZ3_CAP {
        return Err(crate::error::Error::SizeLimit {
            what: "d",
            value: d,
            cap: RPZ3_CAP,
        });
    }
    let a = u.matrix().abs_squared();
    let qv = sorted_padded(q, d * d);
    let mut g = Vec::with_capacity(d * d);
    let mut h = vec![0.0; d * d];
    for k in 0..d {
        for l in 0..d {
            for i in 0..d {
                for j in 0..d {
                    h[i * d + j] = a[k][j] * a[i][l];
                }
            }
            h.sort_by(|x, y| y.total_cmp(x));
            let dot: f64 = qv.iter().zip(&h).map(|(x, y)| x * y).sum();
            g.push(-dot.ln());
        }
    }
    g.sort_by(f64::total_cmp);
    let pairing: f64 = qv.iter().zip(&g).map(|(x, y)| x * y).sum();
    Ok(0.5 * pairing + state_entropy)
}

/// `H_alpha(Q^(d-1))`, valid at every order by Rényi additivity.
pub fn bound_maj1(q: &MajorizingVector, order: EntropyOrder) -> f64 {
    renyi_entropy(&q.weights, order)
}

/// `H_alpha(W)` for `alpha <= 1`; `(2/(1-alpha)) ln((1 + sum W^alpha)/2)` above.
pub fn bound_maj2(w: &MajorizingVector, order: EntropyOrder) -> f64 {
    let alpha = order.alpha();
    if alpha <= 1.0 || order.is_shannon() {
        renyi_entropy(&w.weights, order)
    } else {
        2.0 / (1.0 - alpha) * ((1.0 + w.weights.power_sum(alpha)) / 2.0).ln()
    }
}

/// `T_alpha(W)`.
pub fn bound_tsallis_pair(w: &MajorizingVector, order: EntropyOrder) -> f64 {
    tsallis_entropy(&w.weights, order)
}

/// Shannon entropy of the multi majorizing vector; its leading 1 contributes 0.
pub fn bound_multi_shannon(mv: &MajorizingVector) -> f64 {
    shannon_entropy(&mv.weights)
}

/// `(sum_i mv_i^alpha - L) / (1 - alpha)` over all `dL` entries.
pub fn bound_multi_tsallis(mv: &MajorizingVector, order: EntropyOrder, l: usize) -> f64 {
    if order.is_shannon() {
        return bound_multi_shannon(mv);
    }
    (mv.weights.power_sum(order.alpha()) - l as f64) / (1.0 - order.alpha())
}

/// Which majorizing vector feeds RPZ1 and RPZ3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RpzChoice {
    Q1,
    Qd,
}

impl RpzChoice {
    pub fn label(self) -> MajorantLabel {
        match self {
            RpzChoice::Q1 => MajorantLabel::Q1,
            RpzChoice::Qd => MajorantLabel::Qd,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ReportOptions {
    pub rpz_q: RpzChoice,
    /// Order reported under [`BoundId::MultiTsallis`].
    pub multi_tsallis_order: EntropyOrder,
    /// `S(rho)` added to each pairwise RPZ value (0 for the state-independent
    /// report). Combined over `L` bases it appears with weight `L/2`.
    pub state_entropy: f64,
    pub search: SearchOptions,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            rpz_q: RpzChoice::Qd,
            multi_tsallis_order: EntropyOrder::new(2.0).expect("valid"),
            state_entropy: 0.0,
            search: SearchOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportParameters {
    pub d: usize,
    pub l: usize,
    /// Maximizing `kappa` of CP2, one per pair of bases.
    pub kappa_star: Vec<f64>,
    pub rpz_q: &'static str,
    /// `W2` had `sqrt(c1 + c2)` clamped at 1 for at least one pair.
    pub w2_clamped: bool,
    pub multi_tsallis_order: f64,
    /// Pairwise values for `L > 2` are `sum over pairs / (L - 1)`.
    pub pairwise_combination: bool,
}

/// Bound values in nats plus the metadata needed to interpret them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub values: BTreeMap<BoundId, f64>,
    pub state_entropy: f64,
    pub parameters: ReportParameters,
}

impl BoundReport {
    pub fn get(&self, id: BoundId) -> Option<f64> {
        self.values.get(&id).copied()
    }

    pub fn bits(&self, id: BoundId) -> Option<f64> {
        self.get(id).map(|v| v / LN_2)
    }

    /// Multiple of `S(rho)` carried by the RPZ values: each of the
    /// `L(L-1)/2` pairs contributes `S(rho)` before the `1/(L-1)` scaling.
    pub fn state_entropy_weight(&self) -> f64 {
        self.parameters.l as f64 / 2.0
    }

    /// What [`crate::statelab::validity_margins`] must certify for each value.
    pub fn checks(&self) -> Vec<(BoundId, BoundCheck)> {
        let tsallis = self.parameters.multi_tsallis_order;
        self.values
            .iter()
            .map(|(&id, &value)| {
                let functional = if id == BoundId::MultiTsallis {
                    Functional::Tsallis(tsallis)
                } else {
                    Functional::SHANNON
                };
                let weight = if id.adds_state_entropy() {
                    self.state_entropy_weight()
                } else {
                    0.0
                };
                // Checks are stated for the pure part; the oracle adds S(rho) per sample.
                let check = BoundCheck {
                    value: value - weight * self.state_entropy,
                    functional,
                    state_entropy_weight: weight,
                };
                (id, check)
            })
            .collect()
    }
}

/// All pairwise bounds for one unitary, Shannon entropy.
pub fn pair_bounds(
    u: &UnitaryMatrix,
    majorants: &PairMajorants,
    opts: &ReportOptions,
) -> Result<(BTreeMap<BoundId, f64>, Cp2)> {
    let c = &majorants.overlap;
    let q = match opts.rpz_q {
        RpzChoice::Q1 => &majorants.q1,
        RpzChoice::Qd => &majorants.qd,
    };
    let s = opts.state_entropy;
    let cp2 = bound_cp2(u)?;
    let shannon = EntropyOrder::SHANNON;
    let values = BTreeMap::from([
        (BoundId::D, bound_deutsch(c)),
        (BoundId::MU, bound_maassen_uffink(c)),
        (BoundId::CP1, bound_cp1(c)),
        (BoundId::CP2, cp2.value),
        (BoundId::RPZ1, bound_rpz1(c, q, s)),
        (BoundId::RPZ2, bound_rpz2(c, s)),
        (BoundId::RPZ3, bound_rpz3(u, q, s)?),
        (BoundId::Maj1, bound_maj1(&majorants.qd, shannon)),
        (BoundId::Maj2, bound_maj2(&majorants.w, shannon)),
    ]);
    Ok((values, cp2))
}

/// Every applicable bound for a measurement set.
///
/// For `L = 2` the pairwise bounds use `V = U1^dagger U2`. For `L > 2` they are
/// combined as `(1/(L-1)) sum_{i<j} B(V_ij)`, since summing the pairwise
/// inequalities counts every entropy `L - 1` times. `Multi` and
/// `MultiTsallis` are reported for every `L`.
pub fn compute_report(ms: &MeasurementSet, opts: &ReportOptions) -> Result<BoundReport> {
    if opts.state_entropy < 0.0 || !opts.state_entropy.is_finite() {
        return Err(invalid("state entropy must be finite and nonnegative"));
    }
    let us = ms.unitaries();
    let l = us.len();
    let mut values = BTreeMap::new();
    let mut kappa_star = Vec::new();
    let mut w2_clamped = false;

    if l >= 2 {
        let scale = 1.0 / (l - 1) as f64;
        for i in 0..l {
            for j in i + 1..l {
                let v = us[i].adjoint().compose(&us[j])?;
                let maj = PairMajorants::compute(&v, &opts.search)?;
                let (pair, cp2) = pair_bounds(&v, &maj, opts)?;
                kappa_star.push(cp2.kappa);
                w2_clamped |= maj.w2_clamped;
                for (id, b) in pair {
                    *values.entry(id).or_insert(0.0) += scale * b;
                }
            }
        }
    }

    let profile = multi_profile(us, &opts.search)?;
    let mv = multi_majorizing_vector(&profile)?;
    values.insert(BoundId::Multi, bound_multi_shannon(&mv));
    values.insert(
        BoundId::MultiTsallis,
        bound_multi_tsallis(&mv, opts.multi_tsallis_order, l),
    );

    for v in values.values_mut() {
        if v.abs() < VALUE_SNAP {
            *v = 0.0;
        }
    }

    Ok(BoundReport {
        values,
        state_entropy: opts.state_entropy,
        parameters: ReportParameters {
            d: ms.dim(),
            l,
            kappa_star,
            rpz_q: opts.rpz_q.label().as_str(),
            w2_clamped,
            multi_tsallis_order: opts.multi_tsallis_order.alpha(),
            pairwise_combination: l > 2,
        },
    })
}
