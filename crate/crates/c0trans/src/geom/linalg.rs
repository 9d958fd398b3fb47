//! Exact dense linear algebra: square solves and determinants over the
//! rationals, by Gaussian elimination with exact pivot selection.

use num_traits::{One, Zero};

use crate::scalar::Rational;

/// Solves the square system `A x = b` exactly.
///
/// Returns `None` when `A` is singular.
pub fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), n);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    for col in 0..n {
        let pivot_row = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, pivot_row);
        let inv = m[col][col].clone();
        for j in col..=n {
            m[col][j] = &m[col][j] / &inv;
        }
        for i in 0..n {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].clone();
            for j in col..=n {
                let delta = &factor * &m[col][j];
                m[i][j] -= delta;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Exact determinant of a square matrix.
pub fn determinant(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    let mut m: Vec<Vec<Rational>> = a.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot_row != col {
            m.swap(col, pivot_row);
            det = -det;
        }
        det *= m[col][col].clone();
        let inv = m[col][col].clone();
        for i in col + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = &m[i][col] / &inv;
            for j in col..n {
                let delta = &factor * &m[col][j];
                m[i][j] -= delta;
            }
        }
    }
    det
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

    #[test]
    fn solves_2x2() {
        let a = rows(&[&["2", "1"], &["1", "-1"]]);
        let b = vec![r("3"), r("0")];
        let x = solve_square(&a, &b).unwrap();
        assert_eq!(x, vec![r("1"), r("1")]);
    }

    #[test]
    fn singular_returns_none() {
        let a = rows(&[&["1", "2"], &["2", "4"]]);
        assert!(solve_square(&a, &[r("1"), r("2")]).is_none());
    }

    #[test]
    fn determinant_with_row_swaps() {
        let a = rows(&[&["0", "1"], &["1", "0"]]);
        assert_eq!(determinant(&a), r("-1"));
        let b = rows(&[&["2", "0", "0"], &["0", "3", "0"], &["0", "0", "1/6"]]);
        assert_eq!(determinant(&b), r("1"));
        let c = rows(&[&["1", "2"], &["2", "4"]]);
        assert_eq!(determinant(&c), r("0"));
    }
}
