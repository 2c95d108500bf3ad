//! Eigenvalue search: scan `ε ↦ δ_n(ε)` for sign changes, refine, and
//! repeat at `n + 4` until the roots settle.

use rayon::prelude::*;

use super::{delta_sequence, AimProblem};
use crate::error::Result;
use crate::precision::BigReal;
use crate::roots::{self, GridRoot};
use crate::spectrum::{EigenResult, Method};

/// Iterations added between successive refinement rounds.
const ROUND_STEP: usize = 4;

#[derive(Debug, Clone)]
pub struct AimOptions {
    /// Iteration count of the first round.
    pub n_start: usize,
    /// Last admissible iteration count.
    pub n_max: usize,
    /// Closest approach to `ε = 0` scanned.
    pub eps_floor: BigReal,
    /// Agreement between successive rounds that declares convergence;
    /// `None` means `10^-(digits-20)`.
    pub tol: Option<BigReal>,
    pub uniform_points: usize,
    pub log_points_per_decade: usize,
}

impl AimOptions {
    pub fn new(problem: &AimProblem) -> Self {
        AimOptions {
            n_start: 1,
            n_max: problem.taylor_order.saturating_sub(2).max(1),
            eps_floor: BigReal::pow10(-14, problem.precision()),
            tol: None,
            uniform_points: 256,
            log_points_per_decade: 8,
        }
    }

    pub fn with_tol(mut self, tol: BigReal) -> Self {
        self.tol = Some(tol);
        self
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }
}

/// A root followed across refinement rounds.
#[derive(Debug)]
struct Track {
    /// `(iterations, root)` per round in which the root was seen.
    history: Vec<(usize, BigReal)>,
    converged_at: Option<usize>,
}

impl Track {
    fn last(&self) -> &(usize, BigReal) {
        self.history.last().expect("tracks start non-empty")
    }

    /// `|root(n+4) - root(n)|` never grows over the last three rounds,
    /// ignoring steps already below `tol`.
    fn refines_monotonically(&self, tol: &BigReal) -> bool {
        let tail = &self.history[self.history.len().saturating_sub(4)..];
        let steps: Vec<BigReal> = tail.windows(2).map(|w| (&w[1].1 - &w[0].1).abs()).collect();
        steps.windows(2).all(|d| d[1] <= d[0] || d[1] <= *tol)
    }
}

/// All bound energies of the sector found by the δ_n scan, ascending.
///
/// Converged states carry the iteration count of the round that confirmed
/// them; roots that never settle before `n_max` are returned flagged.
pub fn aim_find_eigenvalues(problem: &AimProblem, options: &AimOptions) -> Result<Vec<EigenResult>> {
    let prec = problem.precision();
    let tol = options
        .tol
        .clone()
        .unwrap_or_else(|| BigReal::pow10(-(prec.digits() as i32 - 20), prec));
    let refine_tol = (&tol / 1000).max(BigReal::pow10(-(prec.digits() as i32 - 5), prec));
    let n_max = options.n_max.max(options.n_start);
    let mut problem = problem.clone();
    problem.taylor_order = n_max + 2;

    let grid = scan_grid(&problem, options);
    let table: Vec<Vec<BigReal>> = grid
        .par_iter()
        .map(|eps| delta_sequence(&problem, eps, n_max))
        .collect();

    let mut tracks: Vec<Track> = Vec::new();
    let mut settled_rounds = 0;
    let mut n = options.n_start.max(1);
    let mut last_round = n;
    while n <= n_max {
        last_round = n;
        let column: Vec<BigReal> = table.iter().map(|row| row[n - 1].clone()).collect();
        let frozen: Vec<BigReal> = tracks
            .iter()
            .filter(|t| t.converged_at.is_some())
            .map(|t| t.last().1.clone())
            .collect();
        let brackets: Vec<GridRoot> = roots::sign_changes(&grid, &column)
            .into_iter()
            .filter(|r| !holds_any(r, &frozen))
            .collect();
        let open_brackets = brackets.len();
        let delta_n = |eps: &BigReal| delta_sequence(&problem, eps, n).pop().expect("n ≥ 1");
        let found = roots::refine_all(&delta_n, brackets, &refine_tol);
        advance_tracks(&mut tracks, found, n, &tol);

        let pending = tracks.iter().any(|t| t.converged_at.is_none() && t.last().0 == n);
        if open_brackets == 0 && !pending {
            settled_rounds += 1;
        } else {
            settled_rounds = 0;
        }
        if settled_rounds >= 2 && n >= options.n_start + 2 * ROUND_STEP {
            break;
        }
        n += ROUND_STEP;
    }

    let mut states: Vec<(BigReal, usize, bool)> = tracks
        .iter()
        .filter_map(|t| match t.converged_at {
            Some(at) => Some((t.last().1.clone(), at, t.refines_monotonically(&tol))),
            None if t.last().0 == last_round => Some((t.last().1.clone(), last_round, false)),
            None => None,
        })
        .collect();
    states.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite roots"));

    Ok(states
        .into_iter()
        .enumerate()
        .map(|(index, (epsilon, iterations, converged))| {
            let residual = delta_sequence(&problem, &epsilon, iterations)
                .pop()
                .expect("iterations ≥ 1")
                .abs();
            EigenResult {
                n: index,
                parity: problem.parity,
                epsilon,
                method: Method::Aim,
                iterations: Some(iterations),
                residual: Some(residual),
                converged,
            }
        })
        .collect())
}

fn holds_any(root: &GridRoot, points: &[BigReal]) -> bool {
    match root {
        GridRoot::Node(x) => points.iter().any(|p| p == x),
        GridRoot::Bracket { lo, hi, .. } => points.iter().any(|p| p >= lo && p <= hi),
    }
}

/// Pairs this round's roots with the live tracks of the previous round,
/// nearest first, and marks tracks whose root moved by at most `tol`.
fn advance_tracks(tracks: &mut Vec<Track>, found: Vec<BigReal>, n: usize, tol: &BigReal) {
    let live: Vec<usize> = (0..tracks.len())
        .filter(|&i| tracks[i].converged_at.is_none() && tracks[i].last().0 + ROUND_STEP == n)
        .collect();
    let mut pairs: Vec<(BigReal, usize, usize)> = Vec::new();
    for (j, root) in found.iter().enumerate() {
        for &i in &live {
            pairs.push(((root - &tracks[i].last().1).abs(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite").then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut track_used = vec![false; tracks.len()];
    let mut root_used = vec![false; found.len()];
    for (distance, i, j) in pairs {
        if track_used[i] || root_used[j] {
            continue;
        }
        track_used[i] = true;
        root_used[j] = true;
        tracks[i].history.push((n, found[j].clone()));
        if distance <= *tol {
            tracks[i].converged_at = Some(n);
        }
    }
    for (j, root) in found.into_iter().enumerate() {
        if !root_used[j] {
            tracks.push(Track {
                history: vec![(n, root)],
                converged_at: None,
            });
        }
    }
}

/// Uniform points across `(V_min (1 - 10^-6), -eps_floor)` merged with
/// log-spaced points approaching zero, ascending and deduplicated.
fn scan_grid(problem: &AimProblem, options: &AimOptions) -> Vec<BigReal> {
    let prec = problem.precision();
    let (v_min, _) = problem.energy_window();
    let lo = &v_min * (BigReal::one(prec) - BigReal::pow10(-6, prec));
    let hi = -options.eps_floor.with_precision(prec);
    let mut grid = roots::uniform_grid(&lo, &hi, options.uniform_points.max(2));
    let top = (-&lo).log10().to_f64();
    let bottom = options.eps_floor.log10().to_f64();
    let per_decade = options.log_points_per_decade.max(1) as f64;
    let count = ((top - bottom) * per_decade).floor().max(0.0) as i64;
    let ten = BigReal::from_i64(10, prec);
    for k in 1..count {
        let exponent = BigReal::from_f64(bottom, prec) + BigReal::from_ratio(k, options.log_points_per_decade as i64, prec);
        grid.push(-ten.powf(&exponent));
    }
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup();
    grid
}
