//! Bracketed real root finding on high-precision scalar functions.

use rayon::prelude::*;

use crate::precision::BigReal;

/// Evaluates `f` on every grid point, in parallel, preserving grid order.
pub fn evaluate_grid<F>(f: &F, grid: &[BigReal]) -> Vec<BigReal>
where
    F: Fn(&BigReal) -> BigReal + Sync,
{
    grid.par_iter().map(f).collect()
}

/// A root-containing interval found on a grid.
#[derive(Debug, Clone)]
pub enum GridRoot {
    /// The function vanished exactly at a grid node.
    Node(BigReal),
    /// Strict sign change between two adjacent nodes.
    Bracket {
        lo: BigReal,
        hi: BigReal,
        f_lo: BigReal,
        f_hi: BigReal,
    },
}

/// Sign changes and exact zeros of a sampled function, in grid order.
pub fn sign_changes(grid: &[BigReal], values: &[BigReal]) -> Vec<GridRoot> {
    assert_eq!(grid.len(), values.len());
    let mut out = Vec::new();
    for i in 0..grid.len() {
        if values[i].is_zero() {
            out.push(GridRoot::Node(grid[i].clone()));
            continue;
        }
        if i + 1 < grid.len() && values[i].signum() * values[i + 1].signum() < 0 {
            out.push(GridRoot::Bracket {
                lo: grid[i].clone(),
                hi: grid[i + 1].clone(),
                f_lo: values[i].clone(),
                f_hi: values[i + 1].clone(),
            });
        }
    }
    out
}

/// Refines a root inside `[lo, hi]` (`f(lo)`, `f(hi)` of opposite sign).
///
/// Regula falsi with the Illinois modification, falling back to a
/// bisection step whenever the bracket fails to halve within three
/// steps. Stops once the bracket or the last step is below `tol`.
pub fn refine<F>(
    f: &F,
    mut lo: BigReal,
    mut hi: BigReal,
    mut f_lo: BigReal,
    mut f_hi: BigReal,
    tol: &BigReal,
) -> BigReal
where
    F: Fn(&BigReal) -> BigReal,
{
    debug_assert!(f_lo.signum() * f_hi.signum() <= 0);
    if f_lo.is_zero() {
        return lo;
    }
    if f_hi.is_zero() {
        return hi;
    }
    let mut last_side = 0i8;
    let mut width_checkpoint = (&hi - &lo).abs();
    let mut since_checkpoint = 0;
    let mut estimate = (&lo + &hi) / 2;
    for _ in 0..2000 {
        let width = (&hi - &lo).abs();
        if width <= *tol {
            break;
        }
        since_checkpoint += 1;
        let bisect = since_checkpoint > 3 && width * 2 > width_checkpoint;
        let mut c = if bisect {
            (&lo + &hi) / 2
        } else {
            &hi - &(&f_hi * &(&hi - &lo) / (&f_hi - &f_lo))
        };
        if !(c > lo && c < hi) {
            c = (&lo + &hi) / 2;
        }
        let fc = f(&c);
        let step = (&c - &estimate).abs();
        estimate = c.clone();
        if fc.is_zero() {
            return c;
        }
        if fc.signum() == f_hi.signum() {
            hi = c;
            f_hi = fc;
            if last_side == 1 {
                f_lo = f_lo / 2;
            }
            last_side = 1;
        } else {
            lo = c;
            f_lo = fc;
            if last_side == -1 {
                f_hi = f_hi / 2;
            }
            last_side = -1;
        }
        let new_width = (&hi - &lo).abs();
        if new_width * 2 <= width_checkpoint {
            width_checkpoint = (&hi - &lo).abs();
            since_checkpoint = 0;
        }
        if !bisect && step <= *tol {
            break;
        }
    }
    estimate
}

/// Refines every grid root of `f`, returning them in ascending order.
pub fn refine_all<F>(f: &F, roots: Vec<GridRoot>, tol: &BigReal) -> Vec<BigReal>
where
    F: Fn(&BigReal) -> BigReal + Sync,
{
    let mut out: Vec<BigReal> = roots
        .into_par_iter()
        .map(|r| match r {
            GridRoot::Node(x) => x,
            GridRoot::Bracket { lo, hi, f_lo, f_hi } => refine(f, lo, hi, f_lo, f_hi, tol),
        })
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    out
}

/// `points` evenly spaced nodes covering `[lo, hi]` inclusive.
pub fn uniform_grid(lo: &BigReal, hi: &BigReal, points: usize) -> Vec<BigReal> {
    assert!(points >= 2);
    let step = (hi - lo) / (points as i64 - 1);
    (0..points)
        .map(|i| {
            if i + 1 == points {
                hi.clone()
            } else {
                lo + &(&step * i as i64)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::Precision;

    fn p() -> Precision {
        Precision::DEFAULT
    }

    #[test]
    fn finds_sqrt_two() {
        let f = |x: &BigReal| x.square() - 2;
        let tol = BigReal::pow10(-90, p());
        let lo = BigReal::from_i64(1, p());
        let hi = BigReal::from_i64(2, p());
        let r = refine(&f, lo.clone(), hi.clone(), f(&lo), f(&hi), &tol);
        let exact = BigReal::from_i64(2, p()).sqrt();
        assert!(r.close_to(&exact, &BigReal::pow10(-88, p())));
    }

    #[test]
    fn handles_flat_ill_conditioned_roots() {
        // cubic with a steep side: regula falsi alone would stall
        let f = |x: &BigReal| (x - 1).powi(3) * 1000 + (x - 1) / 1000;
        let tol = BigReal::pow10(-60, p());
        let lo = BigReal::from_i64(-5, p());
        let hi = BigReal::from_i64(1000, p());
        let r = refine(&f, lo.clone(), hi.clone(), f(&lo), f(&hi), &tol);
        assert!(r.close_to(&BigReal::one(p()), &BigReal::pow10(-55, p())));
    }

    #[test]
    fn grid_scan_reports_brackets_and_nodes() {
        let grid = uniform_grid(&BigReal::from_i64(-3, p()), &BigReal::from_i64(3, p()), 7);
        let f = |x: &BigReal| x * x * x - x; // roots -1, 0, 1 all on nodes
        let vals = evaluate_grid(&f, &grid);
        let found = sign_changes(&grid, &vals);
        assert_eq!(found.len(), 3);
        assert!(found.iter().all(|r| matches!(r, GridRoot::Node(_))));

        let g = |x: &BigReal| x.square() * 4 - 1; // ±1/2 between nodes
        let vals = evaluate_grid(&g, &grid);
        let roots = refine_all(&g, sign_changes(&grid, &vals), &BigReal::pow10(-80, p()));
        assert_eq!(roots.len(), 2);
        assert!(roots[0].close_to(&BigReal::from_ratio(-1, 2, p()), &BigReal::pow10(-78, p())));
    }
}
