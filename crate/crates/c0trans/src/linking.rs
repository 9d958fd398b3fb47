//! Linking coefficients of disjoint oriented PL cycles of complementary
//! dimensions in R^n, with an exact perturbation-stability radius.
//!
//! For cycles `z1` (dimension p) and `z2` (dimension q) with
//! `p + q = n - 1` and disjoint images, the linking number is the signed
//! count of transversal crossings between a spanning cone over `z1` and the
//! simplices of `z2`. The cone apex is drawn at random outside the joint
//! bounding box and every crossing is verified exactly: each cone simplex
//! must meet each `z2` simplex either not at all or in a single interior
//! point of both, otherwise the apex is rejected and redrawn. Failure is
//! detected, never masked.
//!
//! Sign convention: a crossing of the cone simplex `(a, v_0, ..., v_p)`
//! with `(w_0, ..., w_q)` contributes the sign of the determinant of the
//! edge matrix `[v_0 - a, ..., v_p - a, w_1 - w_0, ..., w_q - w_0]` times
//! both orientation coefficients; the ambient orientation is the standard
//! basis. Only the absolute value is convention-free geometry.

use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::geom::linalg::{determinant, solve_square};
use crate::geom::{bounding_box, min_cheb_distance, simplex_pair_intersects, OrientedCycle, Point};
use crate::scalar::Rational;

/// Result of a linking computation.
#[derive(Debug, Clone)]
pub struct LinkingResult {
    /// Signed linking coefficient; only `value.abs()` is convention-free.
    pub value: i64,
    /// Exact Chebyshev distance between the two cycle images (> 0).
    pub separation: Rational,
    /// Radius under which vertexwise perturbations of both cycles cannot
    /// change the linking value: `separation / 2`.
    pub stability_radius: Rational,
}

/// Default retry budget for randomized searches, overridable via the
/// `C0TRANS_RETRY_BUDGET` environment variable.
pub fn default_retry_budget() -> usize {
    std::env::var("C0TRANS_RETRY_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(64)
}

/// Exact minimum Chebyshev distance between the images of two cycles.
///
/// Zero exactly when the images intersect.
pub fn image_separation(z1: &OrientedCycle, z2: &OrientedCycle) -> Result<Rational, Error> {
    if z1.ambient_dim() != z2.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: z1.ambient_dim(),
            got: z2.ambient_dim(),
        });
    }
    let a: Vec<Vec<Point>> = z1.embedded_tops().into_iter().map(|(pts, _)| pts).collect();
    let b: Vec<Vec<Point>> = z2.embedded_tops().into_iter().map(|(pts, _)| pts).collect();
    polyhedron_separation(&a, &b)
}

/// Exact minimum Chebyshev distance between two unions of embedded
/// simplices.
pub fn polyhedron_separation(a: &[Vec<Point>], b: &[Vec<Point>]) -> Result<Rational, Error> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput(
            "separation of an empty polyhedron is undefined".into(),
        ));
    }
    let mut best: Option<Rational> = None;
    for s in a {
        for t in b {
            let d = min_cheb_distance(s, t)?;
            if best.as_ref().map(|b| &d < b).unwrap_or(true) {
                if d.is_zero() {
                    return Ok(d);
                }
                best = Some(d);
            }
        }
    }
    Ok(best.expect("nonempty polyhedra"))
}

/// How one cone simplex meets one cycle simplex.
enum Crossing {
    /// Closed hulls are disjoint.
    Empty,
    /// A single crossing, interior to both simplices; carries the
    /// determinant sign of the concatenated edge frames.
    Transversal(i8),
    /// Any touching, boundary, or non-generic contact: reject the apex.
    Degenerate,
}

/// Classifies the intersection of the hull of `cone` (p+2 points) with the
/// hull of `tau` (q+1 points), where (p+1) + q = n.
fn cone_tau_crossing(cone: &[Point], tau: &[Point]) -> Result<Crossing, Error> {
    let n = cone[0].dim();
    debug_assert_eq!(cone.len() + tau.len(), n + 2);
    let rows = n + 2;
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    for coord in 0..n {
        let mut row = Vec::with_capacity(rows);
        for p in cone {
            row.push(p.get(coord).clone());
        }
        for q in tau {
            row.push(-q.get(coord).clone());
        }
        a.push(row);
    }
    let one = Rational::from_integer(1.into());
    let mut alpha_row = vec![Rational::zero(); rows];
    for w in alpha_row.iter_mut().take(cone.len()) {
        *w = one.clone();
    }
    a.push(alpha_row);
    let mut beta_row = vec![Rational::zero(); rows];
    for w in beta_row.iter_mut().skip(cone.len()) {
        *w = one.clone();
    }
    a.push(beta_row);
    let mut b = vec![Rational::zero(); n];
    b.push(one.clone());
    b.push(one);

    match solve_square(&a, &b) {
        None => {
            // Parallel or flattened configuration: harmless if disjoint,
            // not generic otherwise.
            if simplex_pair_intersects(cone, tau)? {
                Ok(Crossing::Degenerate)
            } else {
                Ok(Crossing::Empty)
            }
        }
        Some(sol) => {
            let mut any_zero = false;
            for w in &sol {
                if w.is_negative() {
                    return Ok(Crossing::Empty);
                }
                if w.is_zero() {
                    any_zero = true;
                }
            }
            if any_zero {
                return Ok(Crossing::Degenerate);
            }
            let mut m: Vec<Vec<Rational>> = Vec::with_capacity(n);
            for p in &cone[1..] {
                m.push(p.sub(&cone[0]).coords().to_vec());
            }
            for q in &tau[1..] {
                m.push(q.sub(&tau[0]).coords().to_vec());
            }
            let det = determinant(&m);
            if det.is_zero() {
                return Err(Error::Internal(
                    "unique crossing with singular edge frame".into(),
                ));
            }
            Ok(Crossing::Transversal(if det.is_positive() { 1 } else { -1 }))
        }
    }
}

/// Signed crossing count of the cone over `z1` from `apex` with `z2`, or
/// `None` when the apex is not in general position.
pub fn apex_crossing_count(
    z1: &OrientedCycle,
    z2: &OrientedCycle,
    apex: &Point,
) -> Result<Option<i64>, Error> {
    let mut total = 0i64;
    for (pts1, sign1) in z1.embedded_tops() {
        let mut cone = Vec::with_capacity(pts1.len() + 1);
        cone.push(apex.clone());
        cone.extend(pts1);
        for (pts2, sign2) in z2.embedded_tops() {
            match cone_tau_crossing(&cone, &pts2)? {
                Crossing::Empty => {}
                Crossing::Degenerate => return Ok(None),
                Crossing::Transversal(det_sign) => {
                    total += (sign1 as i64) * (sign2 as i64) * (det_sign as i64);
                }
            }
        }
    }
    Ok(Some(total))
}

fn sample_apex<R: Rng>(rng: &mut R, bb: &[(Rational, Rational)]) -> Point {
    let one = Rational::from_integer(1.into());
    let mut diam = one;
    for (lo, hi) in bb {
        let d = hi - lo;
        if d > diam {
            diam = d;
        }
    }
    let coords = bb
        .iter()
        .map(|(lo, hi)| {
            // Offset between diam/4 and 2*diam beyond a random side, on a
            // rational grid to keep denominators small.
            let j: i64 = rng.gen_range(4..=32);
            let offset = &diam * Rational::new(j.into(), 16.into());
            if rng.gen_bool(0.5) {
                hi + offset
            } else {
                lo - offset
            }
        })
        .collect();
    Point::new(coords)
}

/// Searches for a cone apex outside the joint bounding box such that every
/// cone simplex over `z1` meets `z2` transversally (verified exactly).
/// Returns the apex, the signed crossing count it produced, and how many
/// attempts were needed.
pub fn cone_apex_search_counted(
    z1: &OrientedCycle,
    z2: &OrientedCycle,
    seed: u64,
    budget: usize,
) -> Result<(Point, i64, usize), Error> {
    let mut points: Vec<Point> = Vec::new();
    for (pts, _) in z1.embedded_tops().into_iter().chain(z2.embedded_tops()) {
        points.extend(pts);
    }
    if points.is_empty() {
        return Err(Error::InvalidInput("both cycles are empty".into()));
    }
    let bb = bounding_box(&points).expect("nonempty points");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..budget {
        let apex = sample_apex(&mut rng, &bb);
        if let Some(count) = apex_crossing_count(z1, z2, &apex)? {
            return Ok((apex, count, attempt + 1));
        }
    }
    Err(Error::RetryBudget(format!(
        "no generic cone apex found in {budget} attempts; the configuration is pathological"
    )))
}

/// Searches for a verified generic cone apex; see
/// [`cone_apex_search_counted`].
pub fn cone_apex_search(z1: &OrientedCycle, z2: &OrientedCycle, seed: u64) -> Result<Point, Error> {
    cone_apex_search_counted(z1, z2, seed, default_retry_budget()).map(|(apex, _, _)| apex)
}

/// Linking coefficient of two disjoint cycles of complementary dimensions
/// (`p + q = n - 1`), with a deterministic apex seed.
pub fn linking_number_seeded(
    z1: &OrientedCycle,
    z2: &OrientedCycle,
    seed: u64,
) -> Result<LinkingResult, Error> {
    let n = z1.ambient_dim();
    if z2.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: z2.ambient_dim(),
        });
    }
    if z1.cycle_dim() + z2.cycle_dim() + 1 != n {
        return Err(Error::Precondition(format!(
            "cycle dimensions {} + {} must equal ambient dimension {} minus 1",
            z1.cycle_dim(),
            z2.cycle_dim(),
            n
        )));
    }
    let separation = image_separation(z1, z2)?;
    if separation.is_zero() {
        return Err(Error::Precondition(
            "cycle images intersect; the linking coefficient is undefined".into(),
        ));
    }
    let (_, value, _) = cone_apex_search_counted(z1, z2, seed, default_retry_budget())?;
    let stability_radius = &separation / Rational::from_integer(2.into());
    Ok(LinkingResult {
        value,
        separation,
        stability_radius,
    })
}

/// Linking coefficient with the default apex seed.
pub fn linking_number(z1: &OrientedCycle, z2: &OrientedCycle) -> Result<LinkingResult, Error> {
    linking_number_seeded(z1, z2, 0)
}

/// Builds the closed polygon cycle through the given points, oriented by
/// traversal order.
pub fn polygon_cycle(points: Vec<Point>) -> Result<OrientedCycle, Error> {
    use crate::geom::{PLMap, SimplicialComplex};
    let n = points.len();
    if n < 2 {
        return Err(Error::InvalidInput("polygon needs at least 2 points".into()));
    }
    let tops: Vec<(Vec<usize>, i8)> = (0..n).map(|i| (vec![i, (i + 1) % n], 1)).collect();
    let tuples: Vec<Vec<usize>> = tops.iter().map(|(t, _)| t.clone()).collect();
    let complex = SimplicialComplex::from_top_simplices(&tuples)?;
    let map = PLMap::new(complex, points)?;
    OrientedCycle::new(map, tops, 1)
}

/// Builds the two-point 0-sphere cycle `+plus - minus`.
pub fn point_pair_cycle(plus: Point, minus: Point) -> Result<OrientedCycle, Error> {
    use crate::geom::{PLMap, SimplicialComplex};
    let complex = SimplicialComplex::from_top_simplices(&[vec![0], vec![1]])?;
    let map = PLMap::new(complex, vec![plus, minus])?;
    OrientedCycle::new(map, vec![(vec![0], 1), (vec![1], -1)], 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;

    fn r(s: &str) -> Rational {
        rat(s).unwrap()
    }

    fn pt(coords: &[&str]) -> Point {
        Point::new(coords.iter().map(|s| r(s)).collect())
    }

    fn unit_square() -> OrientedCycle {
        polygon_cycle(vec![
            pt(&["-1", "-1"]),
            pt(&["1", "-1"]),
            pt(&["1", "1"]),
            pt(&["-1", "1"]),
        ])
        .unwrap()
    }

    /// Interleaved 0-spheres on the line: hand-counted linking +1.
    ///
    /// Coning z1 = (+1 at x=1, -1 at x=-1) from apex 10: the segment
    /// [10,-1] carries orientation coefficient -1 and crosses the +1 point
    /// of z2 at x=0 with edge determinant -11, so the single crossing
    /// contributes (-1)(+1)(-1) = +1. From apex -10 three crossings
    /// contribute +1 - 1 + 1: the count is apex independent.
    #[test]
    fn interleaved_zero_spheres_on_the_line() {
        let z1 = point_pair_cycle(pt(&["1"]), pt(&["-1"])).unwrap();
        let z2 = point_pair_cycle(pt(&["0"]), pt(&["-5"])).unwrap();
        let result = linking_number(&z1, &z2).unwrap();
        assert_eq!(result.value, 1);
        assert_eq!(result.separation, r("1"));
        assert_eq!(result.stability_radius, r("1/2"));
    }

    #[test]
    fn nested_zero_spheres_do_not_link() {
        let z1 = point_pair_cycle(pt(&["1"]), pt(&["-1"])).unwrap();
        let z2 = point_pair_cycle(pt(&["3"]), pt(&["5"])).unwrap();
        assert_eq!(linking_number(&z1, &z2).unwrap().value, 0);
    }

    #[test]
    fn complementary_dimension_gate() {
        let z1 = point_pair_cycle(pt(&["1", "0"]), pt(&["-1", "0"])).unwrap();
        let z2 = point_pair_cycle(pt(&["0", "1"]), pt(&["0", "-1"])).unwrap();
        // 0 + 0 != 2 - 1.
        assert!(matches!(
            linking_number(&z1, &z2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn intersecting_images_are_rejected() {
        let z1 = point_pair_cycle(pt(&["1"]), pt(&["-1"])).unwrap();
        let z2 = point_pair_cycle(pt(&["1"]), pt(&["-5"])).unwrap();
        assert!(matches!(
            linking_number(&z1, &z2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn separation_of_coincident_and_distant_point_cycles() {
        let z1 = point_pair_cycle(pt(&["0", "0"]), pt(&["0", "0"])).unwrap();
        assert_eq!(image_separation(&z1, &z1).unwrap(), r("0"));
        let z2 = point_pair_cycle(pt(&["3", "0"]), pt(&["3", "0"])).unwrap();
        assert_eq!(image_separation(&z1, &z2).unwrap(), r("3"));
    }

    #[test]
    fn separation_segment_vs_point() {
        let z1 = polygon_cycle(vec![pt(&["0", "0"]), pt(&["1", "0"])]).unwrap();
        let z2 = point_pair_cycle(pt(&["0", "2"]), pt(&["0", "2"])).unwrap();
        assert_eq!(image_separation(&z1, &z2).unwrap(), r("2"));
    }

    /// A 0-sphere straddling a square 1-cycle links it once; one that sits
    /// entirely outside does not.
    #[test]
    fn zero_sphere_against_plane_square() {
        let square = unit_square();
        let straddling = point_pair_cycle(pt(&["0", "0"]), pt(&["0", "3"])).unwrap();
        let outside = point_pair_cycle(pt(&["0", "2"]), pt(&["0", "3"])).unwrap();
        assert_eq!(linking_number(&straddling, &square).unwrap().value.abs(), 1);
        assert_eq!(linking_number(&outside, &square).unwrap().value, 0);
    }

    #[test]
    fn orientation_flip_negates_value() {
        let square = unit_square();
        let points = point_pair_cycle(pt(&["0", "0"]), pt(&["0", "3"])).unwrap();
        let v = linking_number(&points, &square).unwrap().value;
        assert_eq!(
            linking_number(&points.reversed(), &square).unwrap().value,
            -v
        );
        assert_eq!(
            linking_number(&points, &square.reversed()).unwrap().value,
            -v
        );
    }

    #[test]
    fn translation_invariance() {
        let square = unit_square();
        let points = point_pair_cycle(pt(&["0", "0"]), pt(&["0", "3"])).unwrap();
        let v = linking_number(&points, &square).unwrap().value;
        let shift = [r("7/3"), r("-13/5")];
        let square2 = square.translated(&shift).unwrap();
        let points2 = points.translated(&shift).unwrap();
        assert_eq!(linking_number(&points2, &square2).unwrap().value, v);
    }

    #[test]
    fn apex_independence_across_seeds() {
        let square = unit_square();
        let points = point_pair_cycle(pt(&["1/3", "1/5"]), pt(&["2", "3"])).unwrap();
        let values: Vec<i64> = (0..5)
            .map(|seed| {
                linking_number_seeded(&points, &square, seed)
                    .unwrap()
                    .value
            })
            .collect();
        assert!(values.windows(2).all(|w| w[0] == w[1]), "{values:?}");
        assert_eq!(values[0].abs(), 1);
    }

    #[test]
    fn degenerate_apex_is_detected_and_search_recovers() {
        let z1 = point_pair_cycle(pt(&["1"]), pt(&["-1"])).unwrap();
        let z2 = point_pair_cycle(pt(&["0"]), pt(&["-5"])).unwrap();
        // An apex placed exactly on a z2 point makes a cone segment end on
        // it: boundary contact, rejected.
        let bad_apex = pt(&["-5"]);
        assert_eq!(apex_crossing_count(&z1, &z2, &bad_apex).unwrap(), None);
        let (apex, count, attempts) =
            cone_apex_search_counted(&z1, &z2, 7, default_retry_budget()).unwrap();
        assert!(attempts >= 1);
        assert_eq!(count, 1);
        assert_eq!(apex_crossing_count(&z1, &z2, &apex).unwrap(), Some(1));
        // A zero budget reports honestly instead of degrading.
        assert!(matches!(
            cone_apex_search_counted(&z1, &z2, 7, 0),
            Err(Error::RetryBudget(_))
        ));
    }

    #[test]
    fn empty_second_cycle_accepts_any_outside_apex() {
        use crate::geom::{OrientedCycle, PLMap, SimplicialComplex};
        let z1 = point_pair_cycle(pt(&["1", "0"]), pt(&["-1", "0"])).unwrap();
        let complex = SimplicialComplex::from_top_simplices(&[]).unwrap();
        let map = PLMap::new(complex, vec![]).unwrap();
        let z2 = OrientedCycle::new(map, vec![], 1).unwrap();
        let apex = cone_apex_search(&z1, &z2, 3).unwrap();
        assert_eq!(apex_crossing_count(&z1, &z2, &apex).unwrap(), Some(0));
    }

    /// Stability contract: perturbing both cycles vertexwise by less than
    /// the stability radius never changes the value. Monte Carlo with exact
    /// recomputation.
    #[test]
    fn monte_carlo_stability_under_small_perturbations() {
        let square = unit_square();
        let points = point_pair_cycle(pt(&["0", "0"]), pt(&["0", "3"])).unwrap();
        let base = linking_number(&points, &square).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let jitter = |cycle: &OrientedCycle, rng: &mut ChaCha8Rng| {
            let images: Vec<Point> = cycle
                .map()
                .images()
                .iter()
                .map(|p| {
                    let delta: Vec<Rational> = (0..p.dim())
                        .map(|_| {
                            let j: i64 = rng.gen_range(-127..=127);
                            &base.stability_radius * Rational::new(j.into(), 128.into())
                        })
                        .collect();
                    p.translate(&delta)
                })
                .collect();
            cycle.with_images(images).unwrap()
        };
        for _ in 0..25 {
            let p2 = jitter(&points, &mut rng);
            let s2 = jitter(&square, &mut rng);
            let perturbed = linking_number(&p2, &s2).unwrap();
            assert_eq!(perturbed.value, base.value);
        }
    }

    /// Cycles separated by a hyperplane never link.
    #[test]
    fn hyperplane_separated_squares_in_r3() {
        let left = polygon_cycle(vec![
            pt(&["-3", "-1", "0"]),
            pt(&["-2", "-1", "0"]),
            pt(&["-2", "1", "1"]),
            pt(&["-3", "1", "1"]),
        ])
        .unwrap();
        let right = polygon_cycle(vec![
            pt(&["2", "0", "-1"]),
            pt(&["3", "0", "-1"]),
            pt(&["3", "0", "1"]),
            pt(&["2", "0", "1"]),
        ])
        .unwrap();
        assert_eq!(linking_number(&left, &right).unwrap().value, 0);
    }
}
