//! Constructive refutation of delta-essentiality via dimension.
//!
//! Compact metric spaces are represented at desk scale by finite samples
//! with exact rational distance matrices. A sampled map is refuted in
//! three steps: approximate each map by a low-dimensional nerve
//! realization (deviation below delta/2, checked exactly on the sample),
//! gate on the dimension sum of the two nerve polyhedra being below the
//! ambient dimension, and find a small verified translation separating the
//! two polyhedra. The emitted witness is self-verifying: re-running the
//! exact disjointness and distance checks always passes.
//!
//! Covering dimension at a scale is estimated by a heuristic family of
//! covers and reported as an upper bound. Openness of covers — which the
//! finite sample cannot express directly — is captured by measuring
//! multiplicity with a distance slack of one sample resolution: a point
//! counts against every cover set within the minimal positive pairwise
//! distance. Under this reading a connected fine sample of a segment
//! admits no multiplicity-1 cover at scales below its extent, matching
//! the behavior of open covers of the underlying continuum.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::geom::{cheb_dist, simplex_pair_intersects, PLMap, Point, SimplicialComplex};
use crate::linking::default_retry_budget;
use crate::scalar::{rat_display, Rational};

/// A finite metric space with an exact, fully validated distance matrix.
#[derive(Debug, Clone)]
pub struct FiniteMetricSpace {
    names: Vec<String>,
    dist: Vec<Vec<Rational>>,
}

impl FiniteMetricSpace {
    /// Validates symmetry, zero diagonal, strict positivity off the
    /// diagonal, and the triangle inequality (full triple enumeration).
    pub fn new(names: Vec<String>, dist: Vec<Vec<Rational>>) -> Result<Self, Error> {
        let n = names.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput(format!(
                "distance matrix must be {n} x {n}"
            )));
        }
        for i in 0..n {
            if !dist[i][i].is_zero() {
                return Err(Error::InvalidInput(format!(
                    "nonzero diagonal at point {i}"
                )));
            }
            for j in 0..i {
                if dist[i][j] != dist[j][i] {
                    return Err(Error::InvalidInput(format!(
                        "asymmetric distances between {i} and {j}"
                    )));
                }
                if !dist[i][j].is_positive() {
                    return Err(Error::InvalidInput(format!(
                        "non-positive distance between distinct points {i} and {j}"
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][j] > &dist[i][k] + &dist[k][j] {
                        return Err(Error::InvalidInput(format!(
                            "triangle inequality fails on ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { names, dist })
    }

    /// Uniformly spaced sample of a segment of the given length, with the
    /// intrinsic (absolute difference) metric.
    pub fn sampled_segment(count: usize, length: &Rational) -> Result<Self, Error> {
        if count == 0 {
            return FiniteMetricSpace::new(vec![], vec![]);
        }
        let names = (0..count).map(|i| format!("p{i}")).collect();
        let denom = Rational::from_integer(((count.max(2) - 1) as i64).into());
        let positions: Vec<Rational> = (0..count)
            .map(|i| length * Rational::from_integer((i as i64).into()) / &denom)
            .collect();
        let dist = positions
            .iter()
            .map(|a| positions.iter().map(|b| (a - b).abs()).collect())
            .collect();
        FiniteMetricSpace::new(names, dist)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i][j]
    }

    /// Diameter of a point subset.
    pub fn diameter(&self, set: &BTreeSet<usize>) -> Rational {
        let mut best = Rational::zero();
        for &i in set {
            for &j in set {
                if self.dist[i][j] > best {
                    best = self.dist[i][j].clone();
                }
            }
        }
        best
    }

    /// Minimal positive pairwise distance (the sample resolution), or None
    /// for fewer than two points.
    pub fn resolution(&self) -> Option<Rational> {
        let n = self.len();
        let mut best: Option<Rational> = None;
        for i in 0..n {
            for j in 0..i {
                if best.as_ref().map(|b| &self.dist[i][j] < b).unwrap_or(true) {
                    best = Some(self.dist[i][j].clone());
                }
            }
        }
        best
    }

    fn distance_to_set(&self, p: usize, set: &BTreeSet<usize>) -> Option<Rational> {
        set.iter().map(|&q| self.dist[p][q].clone()).min()
    }
}

/// A cover of a finite metric space by subsets of bounded diameter.
#[derive(Debug, Clone)]
pub struct Cover {
    pub sets: Vec<BTreeSet<usize>>,
    /// Diameter bound: every set's diameter is at most `epsilon`.
    pub epsilon: Rational,
    /// Maximum number of sets containing a single point.
    pub multiplicity: usize,
}

impl Cover {
    pub fn new(
        space: &FiniteMetricSpace,
        sets: Vec<BTreeSet<usize>>,
        epsilon: Rational,
    ) -> Result<Self, Error> {
        if epsilon.is_negative() {
            return Err(Error::InvalidInput("epsilon must be nonnegative".into()));
        }
        let mut covered: BTreeSet<usize> = BTreeSet::new();
        for (idx, set) in sets.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::InvalidInput(format!("cover set {idx} is empty")));
            }
            if let Some(&max) = set.iter().next_back() {
                if max >= space.len() {
                    return Err(Error::InvalidInput(format!(
                        "cover set {idx} references point {max} outside the space"
                    )));
                }
            }
            let d = space.diameter(set);
            if d > epsilon {
                return Err(Error::InvalidInput(format!(
                    "cover set {idx} has diameter {} exceeding epsilon {}",
                    rat_display(&d),
                    rat_display(&epsilon)
                )));
            }
            covered.extend(set.iter().copied());
        }
        if covered.len() != space.len() {
            return Err(Error::InvalidInput(format!(
                "cover misses {} of {} points",
                space.len() - covered.len(),
                space.len()
            )));
        }
        let multiplicity = (0..space.len())
            .map(|p| sets.iter().filter(|s| s.contains(&p)).count())
            .max()
            .unwrap_or(0);
        Ok(Cover {
            sets,
            epsilon,
            multiplicity,
        })
    }

    /// Builds a cover whose `epsilon` is the largest set diameter.
    pub fn with_computed_epsilon(
        space: &FiniteMetricSpace,
        sets: Vec<BTreeSet<usize>>,
    ) -> Result<Self, Error> {
        let epsilon = sets
            .iter()
            .map(|s| space.diameter(s))
            .max()
            .unwrap_or_else(Rational::zero);
        Cover::new(space, sets, epsilon)
    }
}

/// Multiplicity measured with one sample resolution of slack: point `p`
/// counts against every set within distance `resolution` of `p`. This is
/// the openness surrogate for finite samples of continua.
pub fn slack_multiplicity(space: &FiniteMetricSpace, cover: &Cover) -> usize {
    let slack = space.resolution().unwrap_or_else(Rational::zero);
    (0..space.len())
        .map(|p| {
            cover
                .sets
                .iter()
                .filter(|s| {
                    space
                        .distance_to_set(p, s)
                        .map(|d| d <= slack)
                        .unwrap_or(false)
                })
                .count()
        })
        .max()
        .unwrap_or(0)
}

/// Greedy farthest-point net at radius `epsilon / 2`: every point ends up
/// within the radius of some center. Deterministic (ties by index).
fn farthest_point_net(space: &FiniteMetricSpace, epsilon: &Rational) -> Vec<usize> {
    let radius = epsilon / Rational::from_integer(2.into());
    let n = space.len();
    let mut centers = vec![0usize];
    let mut nearest: Vec<Rational> = (0..n).map(|p| space.dist(p, 0).clone()).collect();
    loop {
        let mut far: Option<usize> = None;
        for p in 0..n {
            if nearest[p] > radius && far.map(|f| nearest[p] > nearest[f]).unwrap_or(true) {
                far = Some(p);
            }
        }
        let Some(p) = far else { break };
        centers.push(p);
        for q in 0..n {
            let d = space.dist(q, p);
            if *d < nearest[q] {
                nearest[q] = d.clone();
            }
        }
    }
    centers
}

/// The connected components of the graph joining points at distance at
/// most `slack`.
fn slack_components(space: &FiniteMetricSpace, slack: &Rational) -> Vec<BTreeSet<usize>> {
    let n = space.len();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(p) = stack.pop() {
            comp.insert(p);
            for q in 0..n {
                if !seen[q] && space.dist(p, q) <= slack {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        components.push(comp);
    }
    components
}

/// Best cover found by the heuristic family, with its slack multiplicity.
/// Returns None for the empty space.
pub fn best_cover(
    space: &FiniteMetricSpace,
    epsilon: &Rational,
) -> Result<Option<(Cover, usize)>, Error> {
    if space.is_empty() {
        return Ok(None);
    }
    let mut candidates: Vec<Cover> = Vec::new();

    // Whole space as one set, when admissible.
    let all: BTreeSet<usize> = (0..space.len()).collect();
    if space.diameter(&all) <= *epsilon {
        candidates.push(Cover::new(space, vec![all.clone()], epsilon.clone())?);
    }

    // Resolution-connected components as sets, when admissible: pieces at
    // pairwise distance above the slack never interact.
    if let Some(slack) = space.resolution() {
        let comps = slack_components(space, &slack);
        if comps.iter().all(|c| space.diameter(c) <= *epsilon) {
            candidates.push(Cover::new(space, comps, epsilon.clone())?);
        }
    }

    // Voronoi partition of a greedy (epsilon/2)-net.
    let centers = farthest_point_net(space, epsilon);
    let mut cells: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); centers.len()];
    for p in 0..space.len() {
        let mut best = 0usize;
        for (ci, &c) in centers.iter().enumerate() {
            if space.dist(p, c) < space.dist(p, centers[best]) {
                best = ci;
            }
        }
        cells[best].insert(p);
    }
    cells.retain(|c| !c.is_empty());
    candidates.push(Cover::new(space, cells, epsilon.clone())?);

    // Full-ball cover around the same net, with redundant balls removed.
    let radius = epsilon / Rational::from_integer(2.into());
    let mut balls: Vec<BTreeSet<usize>> = centers
        .iter()
        .map(|&c| {
            (0..space.len())
                .filter(|&p| space.dist(p, c) <= &radius)
                .collect()
        })
        .collect();
    let mut idx = 0;
    while idx < balls.len() {
        let others: BTreeSet<usize> = balls
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != idx)
            .flat_map(|(_, b)| b.iter().copied())
            .collect();
        if balls[idx].is_subset(&others) && balls.len() > 1 {
            balls.remove(idx);
        } else {
            idx += 1;
        }
    }
    candidates.push(Cover::new(space, balls, epsilon.clone())?);

    let best = candidates
        .into_iter()
        .map(|c| {
            let m = slack_multiplicity(space, &c);
            (c, m)
        })
        .min_by_key(|(_, m)| *m)
        .expect("at least one candidate cover");
    Ok(Some(best))
}

/// Heuristic upper bound on the covering dimension at scale `epsilon`:
/// the best slack multiplicity found over a deterministic cover family,
/// minus one. `-1` for the empty space.
pub fn cover_dimension_bound(space: &FiniteMetricSpace, epsilon: &Rational) -> Result<i64, Error> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    match best_cover(space, epsilon)? {
        None => Ok(-1),
        Some((_, multiplicity)) => Ok(multiplicity as i64 - 1),
    }
}

/// A nerve realization of a sampled map.
#[derive(Debug, Clone)]
pub struct NerveApproximation {
    /// The realized nerve: one vertex per cover set, simplices for common
    /// membership, vertex images at representative sample images.
    pub nerve_map: PLMap,
    /// The approximated image of each sample point: the partition-of-unity
    /// combination of the realized nerve vertices of its sets.
    pub point_images: Vec<Point>,
    /// Conservative deviation bound reported with the output: twice the
    /// largest image diameter over cover sets.
    pub reported_bound: Rational,
    /// Exact maximum pointwise deviation over the sample.
    pub measured_deviation: Rational,
}

/// Builds the nerve of the cover, realizes each nerve vertex at the image
/// of its set's first sample point, and maps every sample point into the
/// realized nerve by distance-to-complement partition-of-unity weights.
///
/// The image polyhedron has dimension at most `multiplicity - 1`.
pub fn nerve_approximation(
    space: &FiniteMetricSpace,
    images: &[Point],
    cover: &Cover,
) -> Result<NerveApproximation, Error> {
    if images.len() != space.len() {
        return Err(Error::InvalidInput(format!(
            "expected {} sample images, got {}",
            space.len(),
            images.len()
        )));
    }
    if space.is_empty() {
        return Err(Error::InvalidInput("empty sample space".into()));
    }
    let ambient = images[0].dim();
    if let Some(bad) = images.iter().find(|p| p.dim() != ambient) {
        return Err(Error::DimensionMismatch {
            expected: ambient,
            got: bad.dim(),
        });
    }

    // Nerve tops: the membership tuple of each sample point.
    let memberships: Vec<Vec<usize>> = (0..space.len())
        .map(|p| {
            cover
                .sets
                .iter()
                .enumerate()
                .filter(|(_, s)| s.contains(&p))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let complex = SimplicialComplex::from_top_simplices(&memberships)?;

    // Realize each nerve vertex at its set's first sample image.
    let realizations: Vec<Point> = cover
        .sets
        .iter()
        .map(|s| images[*s.iter().next().expect("nonempty cover set")].clone())
        .collect();
    let nerve_map = PLMap::new(complex, realizations.clone())?;

    // Distance-to-complement partition of unity. A set covering the whole
    // space has empty complement; weight it by diameter + 1.
    let all: BTreeSet<usize> = (0..space.len()).collect();
    let full_weight = space.diameter(&all) + Rational::from_integer(1.into());
    let mut point_images = Vec::with_capacity(space.len());
    for (p, membership) in memberships.iter().enumerate() {
        let mut weights: Vec<Rational> = membership
            .iter()
            .map(|&si| {
                let complement: BTreeSet<usize> =
                    all.difference(&cover.sets[si]).copied().collect();
                match space.distance_to_set(p, &complement) {
                    Some(d) => d,
                    None => full_weight.clone(),
                }
            })
            .collect();
        let total: Rational = weights.iter().sum();
        if !total.is_positive() {
            return Err(Error::Internal(format!(
                "zero partition-of-unity total at sample {p}"
            )));
        }
        for w in weights.iter_mut() {
            *w = &*w / &total;
        }
        let mut acc = Point::origin(ambient);
        for (&si, w) in membership.iter().zip(&weights) {
            acc = acc.add(&realizations[si].scale(w));
        }
        point_images.push(acc);
    }

    let mut max_set_diam = Rational::zero();
    for s in &cover.sets {
        for &i in s {
            for &j in s {
                let d = cheb_dist(&images[i], &images[j])?;
                if d > max_set_diam {
                    max_set_diam = d;
                }
            }
        }
    }
    let reported_bound = Rational::from_integer(2.into()) * max_set_diam;
    let mut measured_deviation = Rational::zero();
    for (p, approx) in point_images.iter().enumerate() {
        let d = cheb_dist(approx, &images[p])?;
        if d > measured_deviation {
            measured_deviation = d;
        }
    }
    if measured_deviation > reported_bound {
        return Err(Error::Internal(
            "measured deviation exceeds the reported bound".into(),
        ));
    }

    Ok(NerveApproximation {
        nerve_map,
        point_images,
        reported_bound,
        measured_deviation,
    })
}

fn max_simplex_dim(simplices: &[Vec<Point>]) -> Result<usize, Error> {
    simplices
        .iter()
        .map(|s| {
            s.len()
                .checked_sub(1)
                .ok_or_else(|| Error::InvalidInput("empty simplex in separation input".into()))
        })
        .try_fold(0usize, |acc, d| d.map(|d| acc.max(d)))
}

/// Finds a rational vector `v` with `|v|_inf < bound` such that every
/// translated simplex of `sa` is exactly disjoint from every simplex of
/// `sb`. Requires the dimension gate `max_dim(sa) + max_dim(sb) < n`.
///
/// Random rational sampling with exact verification and retry; the grid
/// refines over attempts. Every returned vector has been verified.
pub fn separating_translation(
    sa: &[Vec<Point>],
    sb: &[Vec<Point>],
    bound: &Rational,
    seed: u64,
) -> Result<Vec<Rational>, Error> {
    if sa.is_empty() || sb.is_empty() {
        return Err(Error::InvalidInput("empty simplex family".into()));
    }
    if !bound.is_positive() {
        return Err(Error::InvalidInput(
            "translation bound must be positive".into(),
        ));
    }
    let n = sa[0][0].dim();
    for s in sa.iter().chain(sb) {
        for p in s {
            if p.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.dim(),
                });
            }
        }
    }
    let da = max_simplex_dim(sa)?;
    let db = max_simplex_dim(sb)?;
    if da + db >= n {
        return Err(Error::Precondition(format!(
            "dimension gate: {da} + {db} must be below the ambient dimension {n}"
        )));
    }

    let budget = default_retry_budget();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..budget {
        // Escalating grid: bound * j / 2^g with g growing over attempts.
        let g: u32 = 8 + (attempt as u32 / 8).min(16);
        let scale: i64 = 1 << g;
        let v: Vec<Rational> = (0..n)
            .map(|_| {
                let j: i64 = rng.gen_range(-(scale - 1)..=(scale - 1));
                bound * Rational::new(j.into(), scale.into())
            })
            .collect();
        let mut ok = true;
        'pairs: for s in sa {
            let shifted: Vec<Point> = s.iter().map(|p| p.translate(&v)).collect();
            for t in sb {
                if simplex_pair_intersects(&shifted, t)? {
                    ok = false;
                    break 'pairs;
                }
            }
        }
        if ok {
            return Ok(v);
        }
    }
    Err(Error::RetryBudget(format!(
        "no separating translation found in {budget} attempts; check the dimension gate or \
         degeneracy of the input"
    )))
}

/// A sampled map: a finite metric space, an image per sample point, and a
/// cover of the space.
#[derive(Debug, Clone)]
pub struct SampledMap {
    pub space: FiniteMetricSpace,
    pub images: Vec<Point>,
    pub cover: Cover,
}

impl SampledMap {
    pub fn new(space: FiniteMetricSpace, images: Vec<Point>, cover: Cover) -> Result<Self, Error> {
        if images.len() != space.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} images, got {}",
                space.len(),
                images.len()
            )));
        }
        Ok(SampledMap {
            space,
            images,
            cover,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.images.first().map(|p| p.dim()).unwrap_or(0)
    }
}

/// A verified witness that an intersection is not delta-essential: a pair
/// of perturbed maps with exactly disjoint images.
#[derive(Debug, Clone)]
pub struct RefutationWitness {
    /// Nerve realization of the first map, shifted by `v`.
    pub f_tilde: PLMap,
    /// Nerve realization of the second map.
    pub g_tilde: PLMap,
    pub delta_used: Rational,
    /// The separating translation applied to the first map.
    pub v: Vec<Rational>,
    /// Exact samplewise uniform distance from the first original map.
    pub dist_f: Rational,
    /// Exact samplewise uniform distance from the second original map.
    pub dist_g: Rational,
    /// Approximated-and-shifted sample images of the first map.
    pub f_point_images: Vec<Point>,
    /// Approximated sample images of the second map.
    pub g_point_images: Vec<Point>,
}

/// Builds a refutation witness: nerve-approximate both maps (deviation
/// strictly below `delta / 2`, checked), gate on dimensions, translate the
/// first nerve by a verified separating vector below `delta / 2`, and
/// re-verify every invariant exactly before returning.
pub fn refute_essential(
    a: &SampledMap,
    b: &SampledMap,
    delta: &Rational,
    seed: u64,
) -> Result<RefutationWitness, Error> {
    if !delta.is_positive() {
        return Err(Error::InvalidInput("delta must be positive".into()));
    }
    let n = a.ambient_dim();
    if b.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.ambient_dim(),
        });
    }
    let half = delta / Rational::from_integer(2.into());

    let nerve_a = nerve_approximation(&a.space, &a.images, &a.cover)?;
    let nerve_b = nerve_approximation(&b.space, &b.images, &b.cover)?;
    if nerve_a.measured_deviation >= half {
        return Err(Error::Precondition(format!(
            "cover of the first map too coarse: deviation {} not below delta/2 = {}",
            rat_display(&nerve_a.measured_deviation),
            rat_display(&half)
        )));
    }
    if nerve_b.measured_deviation >= half {
        return Err(Error::Precondition(format!(
            "cover of the second map too coarse: deviation {} not below delta/2 = {}",
            rat_display(&nerve_b.measured_deviation),
            rat_display(&half)
        )));
    }

    let sa = nerve_a.nerve_map.embedded_maximal_simplices();
    let sb = nerve_b.nerve_map.embedded_maximal_simplices();
    let v = separating_translation(&sa, &sb, &half, seed)?;

    let f_tilde = nerve_a.nerve_map.translated(&v)?;
    let g_tilde = nerve_b.nerve_map.clone();
    let f_point_images: Vec<Point> = nerve_a
        .point_images
        .iter()
        .map(|p| p.translate(&v))
        .collect();
    let g_point_images = nerve_b.point_images.clone();

    let mut dist_f = Rational::zero();
    for (approx, original) in f_point_images.iter().zip(&a.images) {
        let d = cheb_dist(approx, original)?;
        if d > dist_f {
            dist_f = d;
        }
    }
    let mut dist_g = Rational::zero();
    for (approx, original) in g_point_images.iter().zip(&b.images) {
        let d = cheb_dist(approx, original)?;
        if d > dist_g {
            dist_g = d;
        }
    }

    let witness = RefutationWitness {
        f_tilde,
        g_tilde,
        delta_used: delta.clone(),
        v,
        dist_f,
        dist_g,
        f_point_images,
        g_point_images,
    };
    verify_refutation(a, b, &witness)?;
    Ok(witness)
}

/// Exact recheck of a refutation witness: distances strictly below
/// `delta_used` and all simplex pairs exactly disjoint.
pub fn verify_refutation(
    a: &SampledMap,
    b: &SampledMap,
    witness: &RefutationWitness,
) -> Result<(), Error> {
    if witness.dist_f >= witness.delta_used || witness.dist_g >= witness.delta_used {
        return Err(Error::Internal(
            "witness distances are not strictly below delta".into(),
        ));
    }
    // Re-measure distances from scratch.
    for (approx, original) in witness.f_point_images.iter().zip(&a.images) {
        if cheb_dist(approx, original)? > witness.dist_f {
            return Err(Error::Internal("recorded dist_f is not the maximum".into()));
        }
    }
    for (approx, original) in witness.g_point_images.iter().zip(&b.images) {
        if cheb_dist(approx, original)? > witness.dist_g {
            return Err(Error::Internal("recorded dist_g is not the maximum".into()));
        }
    }
    for s in witness.f_tilde.embedded_maximal_simplices() {
        for t in witness.g_tilde.embedded_maximal_simplices() {
            if simplex_pair_intersects(&s, &t)? {
                return Err(Error::Internal(
                    "witness polyhedra are not exactly disjoint".into(),
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn r(s: &str) -> Rational {
        rat(s).unwrap()
    }

    fn pt(coords: &[&str]) -> Point {
        Point::new(coords.iter().map(|s| r(s)).collect())
    }

    fn set(ids: &[usize]) -> BTreeSet<usize> {
        ids.iter().copied().collect()
    }

    #[test]
    fn metric_space_validation() {
        // Asymmetric.
        assert!(FiniteMetricSpace::new(
            vec!["a".into(), "b".into()],
            vec![vec![r("0"), r("1")], vec![r("2"), r("0")]],
        )
        .is_err());
        // Triangle violation: d(a,c)=5 > 1 + 1.
        assert!(FiniteMetricSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![r("0"), r("1"), r("5")],
                vec![r("1"), r("0"), r("1")],
                vec![r("5"), r("1"), r("0")],
            ],
        )
        .is_err());
        assert!(FiniteMetricSpace::sampled_segment(10, &r("1")).is_ok());
    }

    #[test]
    fn dimension_bound_trivial_cases() {
        let empty = FiniteMetricSpace::new(vec![], vec![]).unwrap();
        assert_eq!(cover_dimension_bound(&empty, &r("1")).unwrap(), -1);
        let single = FiniteMetricSpace::new(vec!["p".into()], vec![vec![r("0")]]).unwrap();
        assert_eq!(cover_dimension_bound(&single, &r("1/100")).unwrap(), 0);
    }

    #[test]
    fn dimension_bound_on_sampled_segment() {
        // 100 evenly spaced points on a unit segment at scale 1/20.
        let space = FiniteMetricSpace::sampled_segment(100, &r("1")).unwrap();
        let eps = r("1/20");
        // Independent impossibility argument: a slack-multiplicity-1 cover
        // would split the sample into sets at pairwise distance above the
        // resolution, i.e. unions of resolution-connected components; here
        // the whole sample is one component of diameter 1 > epsilon, so no
        // such cover exists and every cover has slack multiplicity >= 2.
        let slack = space.resolution().unwrap();
        let comps = slack_components(&space, &slack);
        assert_eq!(comps.len(), 1);
        assert!(space.diameter(&comps[0]) > eps);
        // The heuristic finds a multiplicity-2 family member.
        assert_eq!(cover_dimension_bound(&space, &eps).unwrap(), 1);
    }

    #[test]
    fn dimension_bound_is_monotone_in_epsilon() {
        let space = FiniteMetricSpace::sampled_segment(60, &r("1")).unwrap();
        let mut last = i64::MAX;
        for eps in ["1/50", "1/10", "1/4", "1/2", "1", "2"] {
            let bound = cover_dimension_bound(&space, &r(eps)).unwrap();
            assert!(bound <= last, "bound increased at epsilon {eps}");
            last = bound;
        }
        // Past the diameter the whole space is one admissible set.
        assert_eq!(cover_dimension_bound(&space, &r("2")).unwrap(), 0);
    }

    #[test]
    fn separated_clusters_have_bound_zero() {
        // Two tight clusters far apart: scale-0-dimensional.
        let d = |same: bool| if same { r("1/100") } else { r("10") };
        let n = 4;
        let names = (0..n).map(|i| format!("c{i}")).collect();
        let dist = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            r("0")
                        } else {
                            d((i < 2) == (j < 2))
                        }
                    })
                    .collect()
            })
            .collect();
        let space = FiniteMetricSpace::new(names, dist).unwrap();
        assert_eq!(cover_dimension_bound(&space, &r("1/50")).unwrap(), 0);
    }

    #[test]
    fn nerve_single_set_is_constant() {
        let space = FiniteMetricSpace::sampled_segment(5, &r("1")).unwrap();
        let images: Vec<Point> = (0..5).map(|i| pt(&[&format!("{i}/4"), "0"])).collect();
        let cover = Cover::with_computed_epsilon(&space, vec![set(&[0, 1, 2, 3, 4])]).unwrap();
        let nerve = nerve_approximation(&space, &images, &cover).unwrap();
        assert_eq!(nerve.nerve_map.domain().dim(), Some(0));
        // Constant at the first sample's image.
        for p in &nerve.point_images {
            assert_eq!(p, &images[0]);
        }
        assert_eq!(nerve.measured_deviation, r("1"));
        assert_eq!(nerve.reported_bound, r("2"));
    }

    #[test]
    fn nerve_of_interval_cover_is_a_polyline() {
        let space = FiniteMetricSpace::sampled_segment(9, &r("1")).unwrap();
        let images: Vec<Point> = (0..9).map(|i| pt(&[&format!("{i}/8"), "0"])).collect();
        let sets: Vec<BTreeSet<usize>> = (0..8).map(|i| set(&[i, i + 1])).collect();
        let cover = Cover::with_computed_epsilon(&space, sets).unwrap();
        assert_eq!(cover.multiplicity, 2);
        let nerve = nerve_approximation(&space, &images, &cover).unwrap();
        assert_eq!(nerve.nerve_map.domain().dim(), Some(1));
        assert!(nerve.measured_deviation <= nerve.reported_bound);
        // Interior samples land midway between adjacent representatives
        // (half a spacing); the trailing endpoint sits a full spacing from
        // its set's representative, and that maximum is 1/8.
        assert_eq!(nerve.measured_deviation, r("1/8"));
    }

    #[test]
    fn nerve_of_disjoint_sets_is_zero_dimensional() {
        let space = FiniteMetricSpace::sampled_segment(4, &r("1")).unwrap();
        let images: Vec<Point> = (0..4).map(|i| pt(&[&format!("{i}"), "0"])).collect();
        let cover = Cover::with_computed_epsilon(&space, vec![set(&[0, 1]), set(&[2, 3])]).unwrap();
        let nerve = nerve_approximation(&space, &images, &cover).unwrap();
        assert_eq!(nerve.nerve_map.domain().dim(), Some(0));
        assert_eq!(nerve.nerve_map.domain().n_vertices(), 2);
    }

    #[test]
    fn separating_translation_examples() {
        // Two origin points in R^1.
        let v =
            separating_translation(&[vec![pt(&["0"])]], &[vec![pt(&["0"])]], &r("1/2"), 1).unwrap();
        assert_eq!(v.len(), 1);
        assert!(v[0].abs() < r("1/2"));
        assert!(!v[0].is_zero());

        // Two crossing segments in R^3.
        let sa = vec![vec![pt(&["-1", "0", "0"]), pt(&["1", "0", "0"])]];
        let sb = vec![vec![pt(&["0", "-1", "0"]), pt(&["0", "1", "0"])]];
        let v = separating_translation(&sa, &sb, &r("1/10"), 2).unwrap();
        let shifted: Vec<Point> = sa[0].iter().map(|p| p.translate(&v)).collect();
        assert!(!simplex_pair_intersects(&shifted, &sb[0]).unwrap());

        // Segment + triangle in R^3: 1 + 2 = 3 is not below 3.
        let tri = vec![vec![
            pt(&["0", "0", "0"]),
            pt(&["1", "0", "0"]),
            pt(&["0", "1", "0"]),
        ]];
        assert!(matches!(
            separating_translation(&sa, &tri, &r("1/10"), 3),
            Err(Error::Precondition(_))
        ));
    }

    fn segment_scene(count: usize, to_point: impl Fn(usize) -> Point) -> SampledMap {
        let space = FiniteMetricSpace::sampled_segment(count, &r("2")).unwrap();
        let images: Vec<Point> = (0..count).map(to_point).collect();
        let sets: Vec<BTreeSet<usize>> = (0..count - 1).map(|i| set(&[i, i + 1])).collect();
        let cover = Cover::with_computed_epsilon(&space, sets).unwrap();
        SampledMap::new(space, images, cover).unwrap()
    }

    #[test]
    fn refutes_crossing_segments_in_r3() {
        // Segments along the x and y axes, crossing at the origin. Image
        // gaps of 1/20 keep the nerve deviation below delta/2 = 1/10.
        let a = segment_scene(41, |i| pt(&[&format!("{}/20", i as i64 - 20), "0", "0"]));
        let b = segment_scene(41, |i| pt(&["0", &format!("{}/20", i as i64 - 20), "0"]));
        let delta = r("1/5");
        let w = refute_essential(&a, &b, &delta, 5).unwrap();
        assert!(w.dist_f < delta);
        assert!(w.dist_g < delta);
        verify_refutation(&a, &b, &w).unwrap();
        // The witness also validates under the probe module's exact
        // disjointness checker.
        assert!(!crate::probe::images_intersect(&w.f_tilde, &w.g_tilde).unwrap());
    }

    #[test]
    fn refutes_point_vs_arc_in_r2() {
        // A single point on a sampled arc: the intersection is unstable.
        // Image gaps of 1/5000 keep the deviation below the smallest
        // delta/2 = 1/2000 tested.
        let point_space = FiniteMetricSpace::new(vec!["p".into()], vec![vec![r("0")]]).unwrap();
        let point_cover = Cover::with_computed_epsilon(&point_space, vec![set(&[0])]).unwrap();
        let a = SampledMap::new(point_space, vec![pt(&["1/100", "1/100"])], point_cover).unwrap();
        let b = segment_scene(101, |i| pt(&[&format!("{i}/5000"), &format!("{i}/5000")]));
        for delta in ["1/10", "1/100", "1/1000"] {
            let w = refute_essential(&a, &b, &r(delta), 9).unwrap();
            verify_refutation(&a, &b, &w).unwrap();
        }
    }

    #[test]
    fn two_plane_curves_hit_the_dimension_gate() {
        let a = segment_scene(11, |i| pt(&[&format!("{}/5", i as i64 - 5), "0"]));
        let b = segment_scene(11, |i| pt(&["0", &format!("{}/5", i as i64 - 5)]));
        assert!(matches!(
            refute_essential(&a, &b, &r("1/5"), 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn coarse_cover_is_reported() {
        let a = segment_scene(21, |i| pt(&[&format!("{}/10", i as i64 - 10), "0", "0"]));
        let b = segment_scene(21, |i| pt(&["0", &format!("{}/10", i as i64 - 10), "1/10"]));
        // delta/2 = 1/200 is below the nerve deviation of 1/20.
        assert!(matches!(
            refute_essential(&a, &b, &r("1/100"), 1),
            Err(Error::Precondition(_))
        ));
    }
}
