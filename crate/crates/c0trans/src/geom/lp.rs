//! Exact rational linear programming.
//!
//! A small dense two-phase simplex solver over `BigRational`, used for the
//! convex feasibility and Chebyshev-distance problems behind the geometric
//! predicates. Bland's rule guarantees termination; there is no tolerance
//! anywhere. Problem sizes here are tiny (tens of variables), so the dense
//! tableau is the right tool.

use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

/// Outcome of `minimize c.x subject to A x = b, x >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpResult {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, x: Vec<Rational> },
}

/// Solves `minimize c.x  s.t.  A x = b, x >= 0` exactly.
///
/// `a` is row-major with `a.len()` constraints over `c.len()` variables.
pub fn solve_lp(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpResult {
    let m = a.len();
    let n = c.len();
    debug_assert_eq!(b.len(), m);
    debug_assert!(a.iter().all(|row| row.len() == n));

    // Tableau over n structural + m artificial columns, rhs last.
    let total = n + m;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for i in 0..m {
        let negate = b[i].is_negative();
        let mut row: Vec<Rational> = Vec::with_capacity(total + 1);
        for j in 0..n {
            row.push(if negate { -&a[i][j] } else { a[i][j].clone() });
        }
        for j in 0..m {
            row.push(if i == j {
                Rational::one()
            } else {
                Rational::zero()
            });
        }
        row.push(if negate { -&b[i] } else { b[i].clone() });
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase 1: minimize the sum of artificials.
    let mut phase1_cost = vec![Rational::zero(); total];
    for item in phase1_cost.iter_mut().take(total).skip(n) {
        *item = Rational::one();
    }
    let mut obj = reduced_objective(&t, &basis, &phase1_cost, total);
    if !pivot_loop(&mut t, &mut basis, &mut obj, total, total) {
        // Phase 1 is always bounded below by zero.
        return LpResult::Infeasible;
    }
    let phase1_value = -obj[total].clone();
    if !phase1_value.is_zero() {
        return LpResult::Infeasible;
    }

    // Drive leftover artificials out of the basis; drop redundant rows.
    let mut row = 0;
    while row < t.len() {
        if basis[row] >= n {
            let pivot_col = (0..n).find(|&j| !t[row][j].is_zero());
            match pivot_col {
                Some(j) => {
                    pivot(&mut t, &mut basis, &mut obj, row, j, total);
                }
                None => {
                    t.remove(row);
                    basis.remove(row);
                    continue;
                }
            }
        }
        row += 1;
    }

    // Phase 2: the real objective, artificial columns barred from entering.
    let mut phase2_cost: Vec<Rational> = c.to_vec();
    phase2_cost.resize(total, Rational::zero());
    let mut obj = reduced_objective(&t, &basis, &phase2_cost, total);
    if !pivot_loop(&mut t, &mut basis, &mut obj, n, total) {
        return LpResult::Unbounded;
    }

    let mut x = vec![Rational::zero(); n];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < n {
            x[bj] = t[i][total].clone();
        }
    }
    LpResult::Optimal {
        value: -obj[total].clone(),
        x,
    }
}

/// Exact feasibility of `A x = b, x >= 0`.
pub fn feasible(a: &[Vec<Rational>], b: &[Rational]) -> bool {
    let n = a.first().map(|r| r.len()).unwrap_or(0);
    matches!(
        solve_lp(a, b, &vec![Rational::zero(); n]),
        LpResult::Optimal { .. }
    )
}

/// Builds the reduced-cost row for the given basis: `c - c_B B^-1 A`,
/// with `-z` in the rhs cell.
fn reduced_objective(
    t: &[Vec<Rational>],
    basis: &[usize],
    cost: &[Rational],
    total: usize,
) -> Vec<Rational> {
    let mut obj: Vec<Rational> = cost.to_vec();
    obj.push(Rational::zero());
    for (i, &bj) in basis.iter().enumerate() {
        if obj[bj].is_zero() {
            continue;
        }
        let factor = obj[bj].clone();
        for j in 0..=total {
            let delta = &factor * &t[i][j];
            obj[j] -= delta;
        }
    }
    obj
}

/// Runs Bland-rule pivots until optimal. Columns `>= allowed_cols` may not
/// enter. Returns false on unboundedness.
fn pivot_loop(
    t: &mut Vec<Vec<Rational>>,
    basis: &mut [usize],
    obj: &mut [Rational],
    allowed_cols: usize,
    total: usize,
) -> bool {
    loop {
        // Bland: smallest-index column with negative reduced cost.
        let entering = (0..allowed_cols).find(|&j| obj[j].is_negative());
        let Some(j) = entering else {
            return true;
        };
        // Ratio test; ties broken by smallest basis variable index.
        let mut best: Option<(usize, Rational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[j].is_positive() {
                let ratio = &row[total] / &row[j];
                match &best {
                    None => best = Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < *br || (ratio == *br && basis[i] < basis[*bi]) {
                            best = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((pivot_row, _)) = best else {
            return false;
        };
        pivot(t, basis, obj, pivot_row, j, total);
    }
}

fn pivot(
    t: &mut [Vec<Rational>],
    basis: &mut [usize],
    obj: &mut [Rational],
    row: usize,
    col: usize,
    total: usize,
) {
    let inv = {
        let p = t[row][col].clone();
        debug_assert!(!p.is_zero());
        p
    };
    for j in 0..=total {
        t[row][j] = &t[row][j] / &inv;
    }
    for i in 0..t.len() {
        if i == row || t[i][col].is_zero() {
            continue;
        }
        let factor = t[i][col].clone();
        for j in 0..=total {
            let delta = &factor * &t[row][j];
            t[i][j] -= delta;
        }
    }
    if !obj[col].is_zero() {
        let factor = obj[col].clone();
        for j in 0..=total {
            let delta = &factor * &t[row][j];
            obj[j] -= delta;
        }
    }
    basis[row] = col;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn r(s: &str) -> Rational {
        rat(s).unwrap()
    }

    fn rows(data: &[&[&str]]) -> Vec<Vec<Rational>> {
        data.iter().map(|row| row.iter().map(|s| r(s)).collect()).collect()
    }

    fn vecr(data: &[&str]) -> Vec<Rational> {
        data.iter().map(|s| r(s)).collect()
    }

    #[test]
    fn solves_simple_equality_program() {
        // min -x - 2y  s.t.  x + y + s = 4, x + 3y + t = 6, all >= 0.
        let a = rows(&[&["1", "1", "1", "0"], &["1", "3", "0", "1"]]);
        let b = vecr(&["4", "6"]);
        let c = vecr(&["-1", "-2", "0", "0"]);
        match solve_lp(&a, &b, &c) {
            LpResult::Optimal { value, x } => {
                assert_eq!(value, r("-5"));
                assert_eq!(x[0], r("3"));
                assert_eq!(x[1], r("1"));
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn detects_infeasibility() {
        // x + y = 1 and x + y = 2 cannot both hold.
        let a = rows(&[&["1", "1"], &["1", "1"]]);
        let b = vecr(&["1", "2"]);
        assert_eq!(solve_lp(&a, &b, &vecr(&["0", "0"])), LpResult::Infeasible);
        assert!(!feasible(&a, &b));
    }

    #[test]
    fn detects_unboundedness() {
        // min -x  s.t.  x - y = 0: x can grow without bound.
        let a = rows(&[&["1", "-1"]]);
        let b = vecr(&["0"]);
        assert_eq!(solve_lp(&a, &b, &vecr(&["-1", "0"])), LpResult::Unbounded);
    }

    #[test]
    fn handles_redundant_rows() {
        // Duplicate constraint rows: still feasible with the right value.
        let a = rows(&[&["1", "1"], &["1", "1"], &["1", "-1"]]);
        let b = vecr(&["1", "1", "0"]);
        match solve_lp(&a, &b, &vecr(&["1", "0"])) {
            LpResult::Optimal { value, x } => {
                assert_eq!(value, r("1/2"));
                assert_eq!(x, vecr(&["1/2", "1/2"]));
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn negative_rhs_is_normalized() {
        // -x = -3 => x = 3.
        let a = rows(&[&["-1"]]);
        let b = vecr(&["-3"]);
        match solve_lp(&a, &b, &vecr(&["1"])) {
            LpResult::Optimal { value, x } => {
                assert_eq!(value, r("3"));
                assert_eq!(x, vecr(&["3"]));
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }
}
