//! Published reference energies and their reproduction.
//!
//! The golden values live in `data/reference_values.csv`, one row per
//! printed number, kept as the original decimal text so that the number
//! of printed digits is part of the record.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::Deserialize;

use crate::aim::{aim_find_eigenvalues, AimOptions, AimProblem};
use crate::error::{Error, Result};
use crate::poschl_teller::pt_eigenvalue;
use crate::precision::{BigReal, Precision};
use crate::qes::{self, EnumerateOptions};
use crate::spectrum::{EigenResult, Parity};

const REFERENCE_CSV: &str = include_str!("../data/reference_values.csv");

/// Table identifiers in the golden file.
pub const TABLE_IDS: [&str; 7] = ["1", "2", "3", "4", "5", "6", "A2"];

/// Iteration counts above this are reported for Tables 5 and 6 but not gated.
pub const GATED_ITERATION_LIMIT: usize = 45;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    /// Found by asymptotic iteration in the source.
    Aim,
    /// Closed-form or quasi-exact level inside an iteration table.
    Exact,
    /// A quasi-exact `(ε, v)` pair.
    Qes,
}

#[derive(Debug, Clone, Deserialize)]
struct RawRow {
    table: String,
    m: u32,
    beta: String,
    v: String,
    level: usize,
    epsilon: String,
    iterations: Option<usize>,
    kind: RowKind,
}

/// One printed value.
#[derive(Debug, Clone)]
pub struct ReferenceRow {
    pub table: String,
    pub m: u32,
    pub parity: Parity,
    /// Strength as printed, possibly `a+b*sqrt(c)`.
    pub v_text: String,
    /// Level within the parity sector, or the polynomial degree for `A2`.
    pub level: usize,
    pub epsilon_text: String,
    pub iterations: Option<usize>,
    pub kind: RowKind,
}

impl ReferenceRow {
    pub fn v(&self, prec: Precision) -> Result<BigReal> {
        parse_strength(&self.v_text, prec)
    }

    pub fn epsilon(&self, prec: Precision) -> BigReal {
        BigReal::parse(&self.epsilon_text, prec).expect("golden file holds valid decimals")
    }

    /// Digits printed after the decimal point.
    pub fn printed_decimals(&self) -> usize {
        decimals(&self.epsilon_text)
    }

    /// One unit in the last printed place of `ε`.
    pub fn ulp(&self, prec: Precision) -> BigReal {
        BigReal::pow10(-(self.printed_decimals() as i32), prec)
    }
}

fn decimals(text: &str) -> usize {
    text.split_once('.').map_or(0, |(_, frac)| frac.len())
}

/// Sum of terms, each a decimal or `a*sqrt(b)`.
pub fn parse_strength(text: &str, prec: Precision) -> Result<BigReal> {
    let mut total = BigReal::zero(prec);
    for term in text.split('+') {
        let term = term.trim();
        let value = match term.split_once("*sqrt(") {
            Some((factor, rest)) => {
                let radicand = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(text.to_string()))?;
                BigReal::parse(factor, prec)? * BigReal::parse(radicand, prec)?.sqrt()
            }
            None => BigReal::parse(term, prec)?,
        };
        total += &value;
    }
    Ok(total)
}

/// Every golden row, in file order.
pub fn reference_rows() -> Vec<ReferenceRow> {
    let mut reader = csv::Reader::from_reader(REFERENCE_CSV.as_bytes());
    reader
        .deserialize::<RawRow>()
        .map(|r| {
            let r = r.expect("golden file is well formed");
            ReferenceRow {
                parity: Parity::parse(&r.beta).expect("golden β is 0 or 0.5"),
                table: r.table,
                m: r.m,
                v_text: r.v,
                level: r.level,
                epsilon_text: r.epsilon,
                iterations: r.iterations,
                kind: r.kind,
            }
        })
        .collect()
}

pub fn rows_for(table: &str) -> Result<Vec<ReferenceRow>> {
    if !TABLE_IDS.contains(&table) {
        return Err(Error::Usage(format!("unknown table {table:?}; expected one of {}", TABLE_IDS.join(", "))));
    }
    Ok(reference_rows().into_iter().filter(|r| r.table == table).collect())
}

/// Outcome for one golden row.
#[derive(Debug, Clone)]
pub struct RowReport {
    pub row: ReferenceRow,
    /// Primary reproduction: the iterated energy, or the enumerated pair energy.
    pub computed: Option<BigReal>,
    /// Closed-form or quasi-exact energy, where one exists.
    pub exact: Option<BigReal>,
    /// Strength of the enumerated pair (`A2` rows).
    pub strength: Option<BigReal>,
    pub iterations: Option<usize>,
    /// `|computed - printed|` (relative for `A2`).
    pub deviation: Option<BigReal>,
    pub tolerance: BigReal,
    /// Whether this row counts towards the pass/fail verdict.
    pub gated: bool,
    pub pass: bool,
    pub note: String,
}

#[derive(Debug, Clone)]
pub struct TableReport {
    pub table: String,
    pub rows: Vec<RowReport>,
    pub elapsed: Duration,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().filter(|r| r.gated).all(|r| r.pass)
    }

    pub fn gated_failures(&self) -> usize {
        self.rows.iter().filter(|r| r.gated && !r.pass).count()
    }
}

/// Knobs shared by every table reproduction.
#[derive(Debug, Clone)]
pub struct TableSettings {
    pub precision: Precision,
    pub r0: Option<BigReal>,
}

impl Default for TableSettings {
    fn default() -> Self {
        TableSettings {
            precision: Precision::DEFAULT,
            r0: None,
        }
    }
}

/// Recomputes every row of one table.
pub fn reproduce_table(table: &str, settings: &TableSettings) -> Result<TableReport> {
    let rows = rows_for(table)?;
    let start = Instant::now();
    let reports = if table == "A2" {
        reproduce_pairs(rows, settings)?
    } else {
        reproduce_levels(table, rows, settings)?
    };
    Ok(TableReport {
        table: table.to_string(),
        rows: reports,
        elapsed: start.elapsed(),
    })
}

/// Iteration budget for a group of rows sharing `(m, β, v)`.
fn group_n_max(table: &str, rows: &[ReferenceRow]) -> usize {
    if table == "1" {
        return 30;
    }
    rows.iter().filter_map(|r| r.iterations).max().map_or(60, |n| 2 * n)
}

fn reproduce_levels(table: &str, rows: Vec<ReferenceRow>, settings: &TableSettings) -> Result<Vec<RowReport>> {
    let prec = settings.precision;
    let mut groups: BTreeMap<(u32, Parity, String), Vec<usize>> = BTreeMap::new();
    for (i, row) in rows.iter().enumerate() {
        groups.entry((row.m, row.parity, row.v_text.clone())).or_default().push(i);
    }

    let mut reports: Vec<Option<RowReport>> = vec![None; rows.len()];
    for ((m, parity, v_text), members) in groups {
        let group: Vec<ReferenceRow> = members.iter().map(|&i| rows[i].clone()).collect();
        let v = parse_strength(&v_text, prec)?;
        let n_max = group_n_max(table, &group);
        let finest = group.iter().map(|r| r.printed_decimals()).max().unwrap_or(12);
        let tol = BigReal::pow10(-(finest as i32 + 2), prec);

        let mut problem = AimProblem::new(m, parity, v.clone(), n_max)?;
        if let Some(r0) = &settings.r0 {
            problem = AimProblem::with_r0(m, parity, v.clone(), r0.clone(), n_max)?;
        }
        let options = AimOptions::new(&problem).with_n_max(n_max).with_tol(tol);
        let found = aim_find_eigenvalues(&problem, &options)?;

        for (&i, row) in members.iter().zip(&group) {
            reports[i] = Some(level_report(table, row, &v, &found, prec));
        }
    }
    Ok(reports.into_iter().map(|r| r.expect("every row grouped")).collect())
}

fn nearest<'a>(found: &'a [EigenResult], target: &BigReal) -> Option<&'a EigenResult> {
    found
        .iter()
        .min_by(|a, b| {
            let da = (&a.epsilon - target).abs();
            let db = (&b.epsilon - target).abs();
            da.partial_cmp(&db).expect("finite energies")
        })
}

fn level_report(table: &str, row: &ReferenceRow, v: &BigReal, found: &[EigenResult], prec: Precision) -> RowReport {
    let printed = row.epsilon(prec);
    let ulp = row.ulp(prec);
    let hit = nearest(found, &printed);
    let computed = hit.map(|h| h.epsilon.clone());
    let iterations = hit.and_then(|h| h.iterations);
    let deviation = computed.as_ref().map(|c| (c - &printed).abs());
    let converged = hit.is_some_and(|h| h.converged);
    let mut notes = Vec::new();
    if hit.is_none() {
        notes.push("no eigenvalue found".to_string());
    } else if !converged {
        notes.push("not converged".to_string());
    }

    let (tolerance, exact, gated, mut pass) = match table {
        "1" => {
            // closed form to one unit of the 20th digit, iteration to 1e-20 within 30 steps
            let exact = pt_eigenvalue(v, row.parity, row.level).ok();
            let unit = BigReal::pow10(-20, prec);
            let exact_ok = exact.as_ref().is_some_and(|e| (e - &printed).abs() <= unit);
            if !exact_ok {
                notes.push("closed form disagrees with printed digits".into());
            }
            let aim_ok = match (&computed, &exact) {
                (Some(c), Some(e)) => (c - e).abs() <= unit,
                _ => false,
            };
            if !aim_ok {
                notes.push("iterated root differs from the closed form by more than 1e-20".into());
            }
            let budget_ok = iterations.is_some_and(|n| n <= 30);
            (unit, exact, true, exact_ok && aim_ok && budget_ok)
        }
        _ => {
            let tolerance = &ulp * 2;
            let close = deviation.as_ref().is_some_and(|d| d <= &tolerance);
            let budget_ok = match (iterations, row.iterations) {
                (Some(n), Some(printed)) => n <= 2 * printed,
                (Some(_), None) => true,
                _ => false,
            };
            if !budget_ok {
                notes.push("iteration count above twice the printed count".into());
            }
            // quasi-exact rows of Tables 5-6 sit at strengths printed to ~16 digits
            let gated = match row.kind {
                RowKind::Exact => table == "4",
                _ => !(matches!(table, "5" | "6") && row.iterations.is_some_and(|n| n > GATED_ITERATION_LIMIT)),
            };
            let mut exact = None;
            let mut exact_ok = true;
            if row.kind == RowKind::Exact {
                let window = BigReal::pow10(-10, prec);
                match qes::identify_degree(row.parity, v, 5, &window) {
                    Some(pair) => {
                        exact_ok = (&pair.epsilon - &printed).abs() <= tolerance;
                        if !exact_ok {
                            notes.push(format!("quasi-exact degree {} level disagrees", pair.degree));
                        }
                        exact = Some(pair.epsilon);
                    }
                    None => {
                        exact_ok = false;
                        notes.push("no quasi-exact pair at this strength".into());
                    }
                }
            }
            (tolerance, exact, gated, close && budget_ok && exact_ok)
        }
    };
    pass &= converged;
    if !gated {
        notes.push(match row.kind {
            RowKind::Exact => "quasi-exact level at a rounded strength: reported only".to_string(),
            _ => format!("printed count above {GATED_ITERATION_LIMIT}: reported only"),
        });
    }
    RowReport {
        row: row.clone(),
        computed,
        exact,
        strength: None,
        iterations,
        deviation,
        tolerance,
        gated,
        pass,
        note: notes.join("; "),
    }
}

/// Relative agreement required of enumerated pairs: 15 significant digits.
fn pair_tolerance(prec: Precision) -> BigReal {
    BigReal::pow10(-15, prec)
}

fn reproduce_pairs(rows: Vec<ReferenceRow>, settings: &TableSettings) -> Result<Vec<RowReport>> {
    let prec = settings.precision;
    let mut cache: BTreeMap<(usize, Parity), Vec<qes::QesPair>> = BTreeMap::new();
    let options = EnumerateOptions {
        precision: prec,
        ..EnumerateOptions::default()
    };
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let key = (row.level, row.parity);
        if !cache.contains_key(&key) {
            cache.insert(key, qes::qes_enumerate(row.level, row.parity, &options)?.pairs);
        }
        let pairs = &cache[&key];
        let printed_v = row.v(prec)?;
        let printed_eps = row.epsilon(prec);
        let hit = pairs.iter().min_by(|a, b| {
            let da = (&a.v - &printed_v).abs();
            let db = (&b.v - &printed_v).abs();
            da.partial_cmp(&db).expect("finite strengths")
        });
        let tolerance = pair_tolerance(prec);
        let deviation = hit.map(|p| {
            let dv = ((&p.v - &printed_v) / &printed_v).abs();
            let de = ((&p.epsilon - &printed_eps) / &printed_eps).abs();
            dv.max(de)
        });
        let pass = deviation.as_ref().is_some_and(|d| d <= &tolerance);
        out.push(RowReport {
            computed: hit.map(|p| p.epsilon.clone()),
            exact: None,
            strength: hit.map(|p| p.v.clone()),
            iterations: None,
            deviation,
            tolerance,
            gated: true,
            pass,
            note: if hit.is_none() { "no pair enumerated".into() } else { String::new() },
            row,
        });
    }
    Ok(out)
}
