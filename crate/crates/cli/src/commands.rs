//! The five subcommands.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use eub_core::bounds::{compute_report, pair_bounds, BoundId, BoundReport, ReportOptions, RpzChoice};
use eub_core::entropy::EntropyOrder;
use eub_core::exec::{self, ExecMode};
use eub_core::families::{build_family, o3, sweep, FamilyId, FamilySpec, SweepOptions};
use eub_core::io::{matrix_from_json, report_values};
use eub_core::majorants::{multi_profile, sk_profile, PairMajorants, SearchOptions, SingularProfile};
use eub_core::matrix::{haar_random_unitary, UnitaryMatrix, UNITARITY_TOL};
use eub_core::statelab::{probe_entropy_sums, validity_margins, BoundCheck, MeasurementSet, ValidityOptions};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{
    parse_range, parse_real, BoundsArgs, Command, RandomArgs, RpzQ, SweepArgs, Table1Args, Unit, VerifyArgs,
};
use crate::output::{fmt_sig, sig, DIGITS};
use crate::{CliError, Outcome};

/// Margins below this count as violations.
pub const MARGIN_TOL: f64 = 1e-9;

/// Amount by which the `--self-test` bound exceeds both Maj2 and the smallest observed entropy sum.
pub const SELF_TEST_INFLATION: f64 = 0.1;

pub fn dispatch(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Bounds(a) => cmd_bounds(&a).map(Outcome::ok),
        Command::Table1(a) => cmd_table1(&a).map(Outcome::ok),
        Command::Sweep(a) => cmd_sweep(&a).map(Outcome::ok),
        Command::Random(a) => cmd_random(&a).map(Outcome::ok),
        Command::Verify(a) => cmd_verify(&a),
    }
}

fn read_unitary(path: &PathBuf, tol: f64) -> Result<UnitaryMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(UnitaryMatrix::with_tolerance(matrix_from_json(&text)?, tol)?)
}

/// One matrix pairs with the identity; several form the measurement set directly.
pub fn load_measurements(paths: &[PathBuf], tol: Option<f64>) -> Result<MeasurementSet, CliError> {
    let tol = tol.unwrap_or(UNITARITY_TOL);
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Argument(format!("tolerance must be positive, got {tol}")));
    }
    let mut us = paths
        .iter()
        .map(|p| read_unitary(p, tol))
        .collect::<Result<Vec<_>, _>>()?;
    match us.len() {
        0 => Err(CliError::Argument("at least one --matrix is required".into())),
        1 => Ok(MeasurementSet::pair(us.remove(0))),
        _ => Ok(MeasurementSet::new(us)?),
    }
}

fn parse_family(name: &str) -> Result<FamilyId, CliError> {
    Ok(name.parse::<FamilyId>()?)
}

fn profiles(ms: &MeasurementSet, search: &SearchOptions) -> Result<Vec<SingularProfile>, CliError> {
    let us = ms.unitaries();
    let mut out = Vec::new();
    for i in 0..us.len() {
        for j in i + 1..us.len() {
            out.push(sk_profile(&us[i].adjoint().compose(&us[j])?, search)?);
        }
    }
    out.push(multi_profile(us, search)?);
    Ok(out)
}

#[derive(Serialize)]
struct ParametersJson {
    d: usize,
    l: usize,
    kappa_star: Vec<f64>,
    rpz_q: &'static str,
    w2_clamped: bool,
    multi_tsallis_order: f64,
    pairwise_combination: bool,
}

/// The JSON artifact shared by `bounds` and `table1`.
pub fn report_json(report: &BoundReport, unit: Unit, profiles: Option<Vec<SingularProfile>>) -> Value {
    let p = &report.parameters;
    let values: BTreeMap<&str, f64> = report
        .values
        .iter()
        .map(|(id, &v)| (id.as_str(), sig(unit.convert(v))))
        .collect();
    let mut doc = json!({
        "unit": unit.as_str(),
        "values": values,
        "bounds": report_values(report, DIGITS),
        "parameters": ParametersJson {
            d: p.d,
            l: p.l,
            kappa_star: p.kappa_star.iter().map(|&k| sig(k)).collect(),
            rpz_q: p.rpz_q,
            w2_clamped: p.w2_clamped,
            multi_tsallis_order: p.multi_tsallis_order,
            pairwise_combination: p.pairwise_combination,
        },
    });
    if let Some(profiles) = profiles {
        doc["profiles"] = serde_json::to_value(profiles).expect("plain data serializes");
    }
    doc
}

fn bounds_for(ms: &MeasurementSet, opts: &ReportOptions, unit: Unit, dump: bool) -> Result<String, CliError> {
    let report = compute_report(ms, opts)?;
    let profiles = if dump { Some(profiles(ms, &opts.search)?) } else { None };
    let doc = report_json(&report, unit, profiles);
    Ok(pretty(&doc))
}

fn pretty(doc: &Value) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("plain data serializes");
    text.push('\n');
    text
}

pub fn cmd_bounds(a: &BoundsArgs) -> Result<String, CliError> {
    let ms = load_measurements(&a.matrices, a.tol)?;
    let opts = ReportOptions {
        rpz_q: match a.rpz_q {
            RpzQ::Q1 => RpzChoice::Q1,
            RpzQ::Qd => RpzChoice::Qd,
        },
        multi_tsallis_order: EntropyOrder::new(a.tsallis_order)?,
        ..Default::default()
    };
    bounds_for(&ms, &opts, a.common.unit(), a.dump_profile)
}

pub fn cmd_table1(a: &Table1Args) -> Result<String, CliError> {
    bounds_for(
        &MeasurementSet::pair(o3()),
        &ReportOptions::default(),
        a.common.unit(),
        a.dump_profile,
    )
}

pub fn sweep_header(id: FamilyId) -> String {
    let mut cols = vec!["param"];
    cols.extend(BoundId::PAIRWISE.iter().map(|b| b.as_str()));
    if id.is_multi() {
        cols.extend(["Multi", "OPT"]);
    }
    cols.join(",")
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<String, CliError> {
    let id = parse_family(&a.family)?;
    let unit = a.common.unit();
    let (start, end, steps, range_origin) = match &a.range {
        Some(r) => {
            let (s, e, n) = parse_range(r)?;
            (s, e, n, "given")
        }
        None => {
            let (s, e) = id.default_range();
            (s, e, 101, "default")
        }
    };
    let opts = SweepOptions {
        seed: a.seed,
        ..SweepOptions::for_family(id)
    };
    let points = sweep(id, start, end, steps, &opts)?;

    let mut text = format!(
        "# family={id} unit={} range={}:{}:{steps} range_source={range_origin} seed={}\n",
        unit.as_str(),
        fmt_sig(start),
        fmt_sig(end),
        a.seed
    );
    text.push_str(&sweep_header(id));
    text.push('\n');
    for p in &points {
        let mut row = vec![fmt_sig(p.param)];
        for b in BoundId::PAIRWISE {
            row.push(fmt_sig(unit.convert(p.report.get(b).expect("pairwise bound present"))));
        }
        if id.is_multi() {
            row.push(fmt_sig(
                unit.convert(p.report.get(BoundId::Multi).expect("multi present")),
            ));
            row.push(fmt_sig(unit.convert(p.opt.expect("optimum requested"))));
        }
        text.push_str(&row.join(","));
        text.push('\n');
    }
    Ok(text)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
}

/// Pairwise bounds for `samples` Haar unitaries, sample `i` drawn with seed `seed + i`.
pub fn random_bounds(d: usize, samples: usize, seed: u64) -> Result<Vec<BTreeMap<BoundId, f64>>, CliError> {
    let opts = ReportOptions::default();
    let rows = exec::try_map_indexed(ExecMode::default(), samples, |i| {
        let u = haar_random_unitary(d, seed.wrapping_add(i as u64))?;
        let maj = PairMajorants::compute(&u, &opts.search)?;
        pair_bounds(&u, &maj, &opts).map(|(values, _)| values)
    })?;
    Ok(rows)
}

pub fn cmd_random(a: &RandomArgs) -> Result<String, CliError> {
    if a.dim < 2 {
        return Err(CliError::Argument("--dim must be at least 2".into()));
    }
    if a.samples == 0 {
        return Err(CliError::Argument("--samples must be at least 1".into()));
    }
    let unit = a.common.unit();
    let rows = random_bounds(a.dim, a.samples, a.seed)?;
    let n = rows.len() as f64;

    let mut stats = BTreeMap::new();
    for b in BoundId::PAIRWISE {
        let xs: Vec<f64> = rows.iter().map(|r| unit.convert(r[&b])).collect();
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        stats.insert(
            b.as_str(),
            Summary {
                mean: sig(mean),
                std: sig(var.sqrt()),
            },
        );
    }

    let mut strict = BTreeMap::new();
    let mut weak = BTreeMap::new();
    for x in BoundId::PAIRWISE {
        for y in BoundId::PAIRWISE {
            if x == y {
                continue;
            }
            let gt = rows.iter().filter(|r| r[&x] > r[&y]).count() as f64 / n;
            let ge = rows.iter().filter(|r| r[&x] >= r[&y]).count() as f64 / n;
            strict.insert(format!("{x}>{y}"), sig(gt));
            weak.insert(format!("{x}>={y}"), sig(ge));
        }
    }

    Ok(pretty(&json!({
        "d": a.dim,
        "samples": a.samples,
        "seed": a.seed,
        "unit": unit.as_str(),
        "stats": stats,
        "win_rates": strict,
        "win_rates_ge": weak,
    })))
}

fn verify_set(a: &VerifyArgs) -> Result<MeasurementSet, CliError> {
    match (&a.family, a.matrices.is_empty()) {
        (Some(name), true) => {
            let param = parse_real(a.param.as_deref().unwrap_or_default())?;
            Ok(build_family(&FamilySpec::new(parse_family(name)?, param)?)?)
        }
        (None, false) => load_measurements(&a.matrices, a.tol),
        _ => Err(CliError::Argument(
            "give either --matrix or --family with --param".into(),
        )),
    }
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let ms = verify_set(a)?;
    let report = compute_report(&ms, &ReportOptions::default())?;
    let (ids, checks): (Vec<BoundId>, Vec<BoundCheck>) = report.checks().into_iter().unzip();
    let opts = ValidityOptions::new(a.samples, a.seed);
    let margins = validity_margins(&ms, &checks, &opts)?;

    let mut passed = margins.iter().all(|&m| m >= -MARGIN_TOL);
    let margin_map: BTreeMap<&str, f64> = ids
        .iter()
        .map(|id| id.as_str())
        .zip(margins.iter().map(|&m| sig(m)))
        .collect();
    let bounds: BTreeMap<&str, f64> = ids
        .iter()
        .map(|id| id.as_str())
        .zip(checks.iter().map(|c| sig(c.value)))
        .collect();

    let mut doc = json!({
        "d": ms.dim(),
        "l": ms.len(),
        "samples": a.samples,
        "seed": a.seed,
        "unit": "nats",
        "tolerance": MARGIN_TOL,
        "bounds": bounds,
        "margins": margin_map,
    });

    if a.self_test {
        let maj2 = report.get(BoundId::Maj2).expect("Maj2 present");
        let (_, minima) = probe_entropy_sums(&ms, &[BoundCheck::shannon(0.0)], &opts)?;
        let inflated = (maj2 + SELF_TEST_INFLATION).max(minima[0] + SELF_TEST_INFLATION);
        let margin = validity_margins(&ms, &[BoundCheck::shannon(inflated)], &opts)?[0];
        passed &= margin >= -MARGIN_TOL;
        doc["self_test"] = json!({ "bound": sig(inflated), "margin": sig(margin) });
    }
    doc["passed"] = json!(passed);
    Ok(Outcome {
        text: pretty(&doc),
        passed,
    })
}
