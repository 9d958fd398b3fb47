//! Exact intersection and distance predicates for embedded simplices.
//!
//! An embedded simplex is given by its vertex points; the predicate applies
//! to the closed convex hull. Decisions are exact: intersection is a
//! rational feasibility problem and Chebyshev distance a rational linear
//! program. No tolerances.

use num_traits::{One, Zero};

use crate::error::Error;
use crate::scalar::Rational;

use super::lp::{feasible, solve_lp, LpResult};
use super::point::Point;

/// Chebyshev bounding box of a point set: per-coordinate (min, max).
pub fn bounding_box(points: &[Point]) -> Option<Vec<(Rational, Rational)>> {
    let first = points.first()?;
    let mut bb: Vec<(Rational, Rational)> = first
        .coords()
        .iter()
        .map(|c| (c.clone(), c.clone()))
        .collect();
    for p in &points[1..] {
        for (i, c) in p.coords().iter().enumerate() {
            if c < &bb[i].0 {
                bb[i].0 = c.clone();
            }
            if c > &bb[i].1 {
                bb[i].1 = c.clone();
            }
        }
    }
    Some(bb)
}

fn boxes_disjoint(s: &[Point], t: &[Point]) -> bool {
    match (bounding_box(s), bounding_box(t)) {
        (Some(bs), Some(bt)) => bs
            .iter()
            .zip(&bt)
            .any(|((slo, shi), (tlo, thi))| shi < tlo || thi < slo),
        _ => false,
    }
}

fn check_same_ambient(s: &[Point], t: &[Point]) -> Result<usize, Error> {
    let n = s
        .first()
        .or_else(|| t.first())
        .map(|p| p.dim())
        .ok_or_else(|| Error::InvalidInput("empty simplex pair".into()))?;
    for p in s.iter().chain(t) {
        if p.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.dim(),
            });
        }
    }
    if s.is_empty() || t.is_empty() {
        return Err(Error::InvalidInput("empty simplex".into()));
    }
    Ok(n)
}

/// Exact decision: do the closed convex hulls of `s` and `t` intersect?
///
/// Feasibility of `sum(lambda_i s_i) = sum(mu_j t_j)` with barycentric
/// lambda, mu, solved over the rationals.
pub fn simplex_pair_intersects(s: &[Point], t: &[Point]) -> Result<bool, Error> {
    let n = check_same_ambient(s, t)?;
    if boxes_disjoint(s, t) {
        return Ok(false);
    }
    let vars = s.len() + t.len();
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(n + 2);
    for coord in 0..n {
        let mut row = Vec::with_capacity(vars);
        for p in s {
            row.push(p.get(coord).clone());
        }
        for q in t {
            row.push(-q.get(coord).clone());
        }
        a.push(row);
    }
    let mut sum_s = vec![Rational::zero(); vars];
    for w in sum_s.iter_mut().take(s.len()) {
        *w = Rational::one();
    }
    let mut sum_t = vec![Rational::zero(); vars];
    for w in sum_t.iter_mut().skip(s.len()) {
        *w = Rational::one();
    }
    a.push(sum_s);
    a.push(sum_t);
    let mut b = vec![Rational::zero(); n];
    b.push(Rational::one());
    b.push(Rational::one());
    Ok(feasible(&a, &b))
}

/// Exact minimum Chebyshev distance between the closed convex hulls of two
/// embedded simplices. Zero exactly when they intersect.
///
/// Linear program: minimize `d` subject to `|x - y|_inf <= d` with `x`, `y`
/// barycentric points of the two hulls.
pub fn min_cheb_distance(s: &[Point], t: &[Point]) -> Result<Rational, Error> {
    let n = check_same_ambient(s, t)?;
    // Variables: lambda (s), mu (t), d, then per coordinate two slacks.
    let nl = s.len();
    let nm = t.len();
    let d_col = nl + nm;
    let slack0 = d_col + 1;
    let vars = slack0 + 2 * n;
    let mut a: Vec<Vec<Rational>> = Vec::new();
    let mut b: Vec<Rational> = Vec::new();
    for coord in 0..n {
        // diff_c - d + u_c = 0  (diff_c <= d)
        let mut row = vec![Rational::zero(); vars];
        for (j, p) in s.iter().enumerate() {
            row[j] = p.get(coord).clone();
        }
        for (j, q) in t.iter().enumerate() {
            row[nl + j] = -q.get(coord).clone();
        }
        row[d_col] = -Rational::one();
        row[slack0 + 2 * coord] = Rational::one();
        a.push(row);
        b.push(Rational::zero());
        // diff_c + d - w_c = 0  (diff_c >= -d)
        let mut row = vec![Rational::zero(); vars];
        for (j, p) in s.iter().enumerate() {
            row[j] = p.get(coord).clone();
        }
        for (j, q) in t.iter().enumerate() {
            row[nl + j] = -q.get(coord).clone();
        }
        row[d_col] = Rational::one();
        row[slack0 + 2 * coord + 1] = -Rational::one();
        a.push(row);
        b.push(Rational::zero());
    }
    let mut sum_s = vec![Rational::zero(); vars];
    for w in sum_s.iter_mut().take(nl) {
        *w = Rational::one();
    }
    a.push(sum_s);
    b.push(Rational::one());
    let mut sum_t = vec![Rational::zero(); vars];
    for w in sum_t.iter_mut().take(nl + nm).skip(nl) {
        *w = Rational::one();
    }
    a.push(sum_t);
    b.push(Rational::one());

    let mut c = vec![Rational::zero(); vars];
    c[d_col] = Rational::one();
    match solve_lp(&a, &b, &c) {
        LpResult::Optimal { value, .. } => Ok(value),
        LpResult::Infeasible => Err(Error::Internal(
            "distance program infeasible for nonempty simplices".into(),
        )),
        LpResult::Unbounded => Err(Error::Internal("distance program unbounded".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn pt(coords: &[&str]) -> Point {
        Point::new(coords.iter().map(|s| rat(s).unwrap()).collect())
    }

    #[test]
    fn parallel_segments_do_not_intersect() {
        let s = [pt(&["0", "0"]), pt(&["1", "0"])];
        let t = [pt(&["0", "1"]), pt(&["1", "1"])];
        assert!(!simplex_pair_intersects(&s, &t).unwrap());
        assert_eq!(min_cheb_distance(&s, &t).unwrap(), rat("1").unwrap());
    }

    #[test]
    fn crossing_segments_intersect() {
        let s = [pt(&["0", "-1"]), pt(&["0", "1"])];
        let t = [pt(&["-1", "0"]), pt(&["1", "0"])];
        assert!(simplex_pair_intersects(&s, &t).unwrap());
        assert_eq!(min_cheb_distance(&s, &t).unwrap(), rat("0").unwrap());
    }

    #[test]
    fn triangle_pierced_by_segment() {
        let s = [
            pt(&["0", "0", "0"]),
            pt(&["1", "0", "0"]),
            pt(&["0", "1", "0"]),
        ];
        let t = [pt(&["1/4", "1/4", "-1"]), pt(&["1/4", "1/4", "1"])];
        assert!(simplex_pair_intersects(&s, &t).unwrap());
    }

    #[test]
    fn touching_counts_as_intersecting() {
        // Closed hulls sharing exactly one endpoint.
        let s = [pt(&["0", "0"]), pt(&["1", "0"])];
        let t = [pt(&["1", "0"]), pt(&["2", "5"])];
        assert!(simplex_pair_intersects(&s, &t).unwrap());
    }

    #[test]
    fn segment_to_point_distance() {
        let s = [pt(&["0", "0"]), pt(&["1", "0"])];
        let t = [pt(&["0", "2"])];
        assert_eq!(min_cheb_distance(&s, &t).unwrap(), rat("2").unwrap());
        assert_eq!(min_cheb_distance(&t, &s).unwrap(), rat("2").unwrap());
    }

    #[test]
    fn chebyshev_distance_uses_max_norm() {
        // Point (3,1) to point (0,0): Chebyshev distance 3.
        let s = [pt(&["3", "1"])];
        let t = [pt(&["0", "0"])];
        assert_eq!(min_cheb_distance(&s, &t).unwrap(), rat("3").unwrap());
        // Diagonal separation: the optimum slides along the segment.
        let s = [pt(&["0", "0"]), pt(&["2", "2"])];
        let t = [pt(&["3", "0"])];
        // Closest hull point is (x,x); distance max(|3-x|, x) minimized at
        // x = 3/2.
        assert_eq!(min_cheb_distance(&s, &t).unwrap(), rat("3/2").unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let s = [pt(&["0", "0"])];
        let t = [pt(&["0", "0", "0"])];
        assert!(simplex_pair_intersects(&s, &t).is_err());
        assert!(min_cheb_distance(&s, &t).is_err());
    }
}
