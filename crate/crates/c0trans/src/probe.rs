//! Monte Carlo probing of delta-essentiality.
//!
//! A probe draws random PL perturbation pairs of two maps within a strict
//! uniform-norm budget and tests exact image intersection for each pair. A
//! separating pair is a *proof* that the intersection is not
//! delta-essential; absence of separating pairs is one-sided statistical
//! evidence only, and reports say so. The certified route is the only
//! positive proof this crate offers.
//!
//! Reports are reproducible bit-for-bit given the seed: every trial uses a
//! substream derived deterministically from the seed and the trial index,
//! so parallel and sequential execution produce identical reports.

use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Error;
use crate::geom::{c0_distance, simplex_pair_intersects, PLMap, Point};
use crate::scalar::Rational;

/// Perturbation sampling strategy.
///
/// Separating perturbations often live near the budget boundary, so
/// boundary-biased and directional (translation-like) strategies are
/// offered besides the uniform one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Independent vertex displacements uniform on a grid inside the ball.
    Uniform,
    /// One coordinate of every displacement pinned near the budget.
    Boundary,
    /// A single near-budget direction per trial: the first map translates
    /// along it, the second against it.
    Directional,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Uniform => "uniform",
            Strategy::Boundary => "boundary",
            Strategy::Directional => "directional",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "uniform" => Ok(Strategy::Uniform),
            "boundary" => Ok(Strategy::Boundary),
            "directional" => Ok(Strategy::Directional),
            other => Err(Error::Parse(format!(
                "unknown strategy {other:?}; expected uniform | boundary | directional"
            ))),
        }
    }
}

/// Grid resolution of displacement sampling: coordinates are multiples of
/// `delta / GRID`. Purely a sampling choice; all checks are exact.
const GRID: i64 = 1 << 16;

fn grid_fraction<R: Rng>(rng: &mut R) -> Rational {
    // Strictly inside (-1, 1).
    let j: i64 = rng.gen_range(-(GRID - 1)..=(GRID - 1));
    Rational::new(j.into(), GRID.into())
}

fn near_unit<R: Rng>(rng: &mut R) -> Rational {
    // Magnitude (GRID-1)/GRID with random sign: near the ball boundary
    // while keeping every displacement strictly below the budget.
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    Rational::new((sign * (GRID - 1)).into(), GRID.into())
}

fn displace(p: &Point, delta: &Rational, dir: &[Rational]) -> Point {
    let shift: Vec<Rational> = dir.iter().map(|d| d * delta).collect();
    p.translate(&shift)
}

fn sample_direction<R: Rng>(rng: &mut R, dim: usize, strategy: Strategy) -> Vec<Rational> {
    match strategy {
        Strategy::Uniform => (0..dim).map(|_| grid_fraction(rng)).collect(),
        Strategy::Boundary => {
            let pinned = rng.gen_range(0..dim);
            (0..dim)
                .map(|i| {
                    if i == pinned {
                        near_unit(rng)
                    } else {
                        grid_fraction(rng)
                    }
                })
                .collect()
        }
        Strategy::Directional => unreachable!("directional handled per trial"),
    }
}

/// Draws a random PL perturbation of `f` with `c0_distance(f, result)`
/// strictly below `delta` (uniform strategy). Deterministic in the seed.
pub fn random_perturbation(f: &PLMap, delta: &Rational, seed: u64) -> Result<PLMap, Error> {
    if delta < &Rational::zero() {
        return Err(Error::InvalidInput("delta must be nonnegative".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    perturb_with(f, delta, &mut rng, Strategy::Uniform)
}

fn perturb_with<R: Rng>(
    f: &PLMap,
    delta: &Rational,
    rng: &mut R,
    strategy: Strategy,
) -> Result<PLMap, Error> {
    if delta.is_zero() {
        return Ok(f.clone());
    }
    let dim = f.ambient_dim();
    let images: Vec<Point> = f
        .images()
        .iter()
        .map(|p| {
            let dir = sample_direction(rng, dim, strategy);
            displace(p, delta, &dir)
        })
        .collect();
    f.with_images(images)
}

/// Exact test: do the image polyhedra of two PL maps intersect?
pub fn images_intersect(f: &PLMap, g: &PLMap) -> Result<bool, Error> {
    if f.ambient_dim() != g.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: f.ambient_dim(),
            got: g.ambient_dim(),
        });
    }
    let fs = f.embedded_maximal_simplices();
    let gs = g.embedded_maximal_simplices();
    for s in &fs {
        for t in &gs {
            if simplex_pair_intersects(s, t)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// A separating perturbation pair: an exact disproof of delta-essentiality.
#[derive(Debug, Clone)]
pub struct ProbeWitness {
    /// Zero-based index of the trial that found the pair.
    pub trial: u64,
    pub f_perturbed: PLMap,
    pub g_perturbed: PLMap,
    pub dist_f: Rational,
    pub dist_g: Rational,
}

/// Outcome of a probe run.
#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub trials: u64,
    /// Number of trials whose perturbed images still intersected.
    pub intersecting: u64,
    /// First separating pair found, if any.
    pub witness: Option<ProbeWitness>,
    pub delta: Rational,
    pub seed: u64,
    pub strategy: Strategy,
}

impl ProbeReport {
    /// Human-readable conclusion; absence of a witness is evidence, not
    /// proof.
    pub fn conclusion(&self) -> String {
        match &self.witness {
            Some(w) => format!(
                "refuted: separating perturbation pair found at trial {} (exact witness)",
                w.trial
            ),
            None => format!(
                "no separating witness in {} trials (one-sided evidence only; not a proof of essentiality)",
                self.trials
            ),
        }
    }
}

fn mix_seed(seed: u64, trial: u64) -> u64 {
    // splitmix64 over seed + trial: independent per-trial substreams.
    let mut z = seed ^ trial.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn run_trial(
    f: &PLMap,
    g: &PLMap,
    delta: &Rational,
    seed: u64,
    trial: u64,
    strategy: Strategy,
) -> Result<(bool, Option<(PLMap, PLMap)>), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, trial));
    let (fp, gp) = match strategy {
        Strategy::Directional => {
            let dim = f.ambient_dim();
            let mut dir: Vec<Rational> = (0..dim).map(|_| grid_fraction(&mut rng)).collect();
            let pinned = rng.gen_range(0..dim);
            dir[pinned] = near_unit(&mut rng);
            let anti: Vec<Rational> = dir.iter().map(|d| -d).collect();
            let fp = f.with_images(f.images().iter().map(|p| displace(p, delta, &dir)).collect())?;
            let gp =
                g.with_images(g.images().iter().map(|p| displace(p, delta, &anti)).collect())?;
            (fp, gp)
        }
        other => {
            let fp = perturb_with(f, delta, &mut rng, other)?;
            let gp = perturb_with(g, delta, &mut rng, other)?;
            (fp, gp)
        }
    };
    if images_intersect(&fp, &gp)? {
        Ok((true, None))
    } else {
        Ok((false, Some((fp, gp))))
    }
}

/// Draws `trials` independent perturbation pairs within strict distance
/// `delta` and tests exact image intersection for each. Records the first
/// separating pair as a witness.
pub fn probe_essential(
    f: &PLMap,
    g: &PLMap,
    delta: &Rational,
    trials: u64,
    seed: u64,
    strategy: Strategy,
) -> Result<ProbeReport, Error> {
    if f.ambient_dim() != g.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: f.ambient_dim(),
            got: g.ambient_dim(),
        });
    }
    if delta < &Rational::zero() {
        return Err(Error::InvalidInput("delta must be nonnegative".into()));
    }

    // Parallel trials, deterministic reduction: counts add up and the
    // witness with the lowest trial index wins.
    let results: Result<Vec<(u64, bool, Option<(PLMap, PLMap)>)>, Error> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            run_trial(f, g, delta, seed, trial, strategy)
                .map(|(hit, separated)| (trial, hit, separated))
        })
        .collect();
    let results = results?;

    let mut intersecting = 0u64;
    let mut witness: Option<ProbeWitness> = None;
    for (trial, hit, separated) in results {
        if hit {
            intersecting += 1;
        } else if let Some((fp, gp)) = separated {
            if witness.as_ref().map(|w| trial < w.trial).unwrap_or(true) {
                let dist_f = c0_distance(f, &fp)?;
                let dist_g = c0_distance(g, &gp)?;
                witness = Some(ProbeWitness {
                    trial,
                    f_perturbed: fp,
                    g_perturbed: gp,
                    dist_f,
                    dist_g,
                });
            }
        }
    }

    let report = ProbeReport {
        trials,
        intersecting,
        witness,
        delta: delta.clone(),
        seed,
        strategy,
    };
    if let Some(w) = &report.witness {
        verify_witness(f, g, w, delta)?;
    }
    Ok(report)
}

/// Exact recheck of a probe witness: both maps strictly within `delta` of
/// the originals and images exactly disjoint.
pub fn verify_witness(
    f: &PLMap,
    g: &PLMap,
    witness: &ProbeWitness,
    delta: &Rational,
) -> Result<(), Error> {
    let df = c0_distance(f, &witness.f_perturbed)?;
    let dg = c0_distance(g, &witness.g_perturbed)?;
    if &df >= delta || &dg >= delta {
        return Err(Error::Internal(format!(
            "witness maps not strictly within delta: {df} and {dg}"
        )));
    }
    if images_intersect(&witness.f_perturbed, &witness.g_perturbed)? {
        return Err(Error::Internal("witness images are not disjoint".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::SimplicialComplex;
    use crate::scalar::rat;
    use num_traits::Signed;

    fn r(s: &str) -> Rational {
        rat(s).unwrap()
    }

    fn pt(coords: &[&str]) -> Point {
        Point::new(coords.iter().map(|s| r(s)).collect())
    }

    fn segment_map(a: &Point, b: &Point) -> PLMap {
        let c = SimplicialComplex::from_top_simplices(&[vec![0, 1]]).unwrap();
        PLMap::new(c, vec![a.clone(), b.clone()]).unwrap()
    }

    fn point_map(p: &Point) -> PLMap {
        let c = SimplicialComplex::from_top_simplices(&[vec![0]]).unwrap();
        PLMap::new(c, vec![p.clone()]).unwrap()
    }

    #[test]
    fn zero_delta_returns_input() {
        let f = segment_map(&pt(&["0", "0"]), &pt(&["1", "0"]));
        let p = random_perturbation(&f, &r("0"), 5).unwrap();
        assert_eq!(c0_distance(&f, &p).unwrap(), r("0"));
    }

    #[test]
    fn perturbations_stay_strictly_inside_the_ball() {
        let f = segment_map(&pt(&["0", "0"]), &pt(&["1", "0"]));
        let delta = r("1/8");
        for seed in 0..1000 {
            let p = random_perturbation(&f, &delta, seed).unwrap();
            assert!(c0_distance(&f, &p).unwrap() < delta);
        }
    }

    #[test]
    fn single_vertex_uniform_stays_in_square() {
        let f = point_map(&pt(&["0", "0"]));
        let delta = r("1");
        for seed in 0..200 {
            let p = random_perturbation(&f, &delta, seed).unwrap();
            for c in p.images()[0].coords() {
                assert!(c.abs() <= r("1"));
            }
        }
    }

    #[test]
    fn coincident_points_separate_quickly() {
        // Two 0-complexes at the same point, delta = 1/10 in R^1: a
        // separating pair exists and is found fast.
        let f = point_map(&pt(&["0"]));
        let g = point_map(&pt(&["0"]));
        let report =
            probe_essential(&f, &g, &r("1/10"), 50, 1, Strategy::Uniform).unwrap();
        let w = report.witness.expect("witness should be found");
        assert!(w.dist_f < r("1/10"));
        verify_witness(&f, &g, &w, &r("1/10")).unwrap();
    }

    #[test]
    fn huge_delta_separates_crossing_segments() {
        let f = segment_map(&pt(&["-1", "0"]), &pt(&["1", "0"]));
        let g = segment_map(&pt(&["0", "-1"]), &pt(&["0", "1"]));
        let report = probe_essential(&f, &g, &r("10"), 200, 3, Strategy::Uniform).unwrap();
        assert!(report.witness.is_some());
        // The directional strategy separates essentially immediately.
        let dir = probe_essential(&f, &g, &r("10"), 20, 3, Strategy::Directional).unwrap();
        assert!(dir.witness.is_some());
    }

    #[test]
    fn reports_are_reproducible() {
        let f = segment_map(&pt(&["-1", "0"]), &pt(&["1", "0"]));
        let g = segment_map(&pt(&["0", "-1"]), &pt(&["0", "1"]));
        for strategy in [Strategy::Uniform, Strategy::Boundary, Strategy::Directional] {
            let a = probe_essential(&f, &g, &r("1/4"), 100, 42, strategy).unwrap();
            let b = probe_essential(&f, &g, &r("1/4"), 100, 42, strategy).unwrap();
            assert_eq!(a.intersecting, b.intersecting);
            assert_eq!(
                a.witness.as_ref().map(|w| w.trial),
                b.witness.as_ref().map(|w| w.trial)
            );
            if let (Some(wa), Some(wb)) = (&a.witness, &b.witness) {
                assert_eq!(wa.f_perturbed, wb.f_perturbed);
                assert_eq!(wa.g_perturbed, wb.g_perturbed);
            }
        }
    }

    #[test]
    fn boundary_strategy_pins_one_coordinate() {
        let f = point_map(&pt(&["0", "0"]));
        let delta = r("1");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = perturb_with(&f, &delta, &mut rng, Strategy::Boundary).unwrap();
        let near = r(&format!("{}/{}", GRID - 1, GRID));
        let img = &p.images()[0];
        assert!(img.coords().iter().any(|c| c.abs() == near));
    }
}
