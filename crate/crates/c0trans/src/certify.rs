//! Certification of delta-essential intersections in chart coordinates.
//!
//! A scene describes, in flattening chart coordinates, a k-dimensional set
//! `A` lying in the coordinate k-plane and a candidate disk map
//! `f: D^{n-k} -> R^n` landing in the second set `B`. The sufficient
//! certificate checks:
//!
//! 1. the disk image stays inside the chart cube `[-1,1]^n`;
//! 2. the boundary-sphere image stays inside the cube and strictly clear
//!    of the base box `[-1-nu, 1+nu]^k x {0}^{n-k}`;
//! 3. the boundary sphere wraps the base box nontrivially, witnessed by a
//!    nonzero linking coefficient `kappa` against an explicit "plate"
//!    cycle built from the base box (top face equal to the box, walls
//!    extruded downward in coordinate k+1 with slope 3).
//!
//! When all three hold, the intersection of the two sets survives every
//! pair of PL perturbations of uniform norm up to `delta`, where `delta`
//! is half the smallest of three exactly computed margins. Margins
//! strictly dominate the motion budget below `delta`; a would-be
//! separating pair at exactly `delta` could be shrunk toward the base
//! maps while staying separated, so the closed budget is covered too.

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::geom::{
    freudenthal_cube, OrientedCycle, PLMap, Point, SimplicialComplex, TriangulatedCube,
};
use crate::linking::{linking_number_seeded, polyhedron_separation, LinkingResult};
use crate::scalar::{rat_display, Rational};

/// A scene in flattening chart coordinates: ambient dimension `n`, base
/// dimension `k`, margin `nu`, and a triangulated disk map for the
/// complementary dimension `n - k`.
#[derive(Debug, Clone)]
pub struct ChartScene {
    n: usize,
    k: usize,
    nu: Rational,
    disk: TriangulatedCube,
    disk_images: Vec<Point>,
    /// Dimension of the second set `B`, informational only.
    pub b_dim: Option<usize>,
    /// Records that coordinates are chart coordinates (the chart itself is
    /// not computed; scenes are authored flattened).
    pub chart_note: String,
}

impl ChartScene {
    /// Builds a scene from the disk map's vertex images, given in the grid
    /// order of [`freudenthal_cube`]`(n - k, subdivisions)`.
    pub fn new(
        n: usize,
        k: usize,
        nu: Rational,
        subdivisions: usize,
        disk_images: Vec<Point>,
    ) -> Result<Self, Error> {
        if n < 1 || k >= n {
            return Err(Error::InvalidInput(format!(
                "need 0 <= k < n, got k={k}, n={n}"
            )));
        }
        if !nu.is_positive() {
            return Err(Error::InvalidInput(format!(
                "margin nu must be positive, got {}",
                rat_display(&nu)
            )));
        }
        let disk = freudenthal_cube(n - k, subdivisions)?;
        if disk_images.len() != disk.vertex_count() {
            return Err(Error::InvalidInput(format!(
                "disk map needs {} vertex images for subdivisions={subdivisions}, got {}",
                disk.vertex_count(),
                disk_images.len()
            )));
        }
        for p in &disk_images {
            if p.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.dim(),
                });
            }
        }
        Ok(ChartScene {
            n,
            k,
            nu,
            disk,
            disk_images,
            b_dim: None,
            chart_note: "coordinates are flattening chart coordinates".into(),
        })
    }

    /// Builds a scene by evaluating a map on the disk's reference vertices.
    pub fn from_map<F>(
        n: usize,
        k: usize,
        nu: Rational,
        subdivisions: usize,
        f: F,
    ) -> Result<Self, Error>
    where
        F: Fn(&Point) -> Point,
    {
        let disk = freudenthal_cube(n - k, subdivisions)?;
        let images = disk.reference().images().iter().map(|p| f(p)).collect();
        ChartScene::new(n, k, nu, subdivisions, images)
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn base_dim(&self) -> usize {
        self.k
    }

    pub fn nu(&self) -> &Rational {
        &self.nu
    }

    pub fn disk(&self) -> &TriangulatedCube {
        &self.disk
    }

    pub fn disk_images(&self) -> &[Point] {
        &self.disk_images
    }

    /// The disk map as a PL map on the cube complex.
    pub fn disk_map(&self) -> PLMap {
        PLMap::new(self.disk.complex().clone(), self.disk_images.clone())
            .expect("scene validated at construction")
    }

    /// The oriented boundary-sphere cycle, embedded by the disk map.
    pub fn boundary_cycle(&self) -> Result<OrientedCycle, Error> {
        self.disk.boundary_cycle_with(&self.disk_images)
    }

    /// The same PL disk map on a finer triangulation (each axis further
    /// split by `factor`). Useful for re-triangulation invariance checks.
    pub fn refined(&self, factor: usize) -> Result<Self, Error> {
        if factor < 1 {
            return Err(Error::InvalidInput("refinement factor must be >= 1".into()));
        }
        let s = self.disk.subdivisions() * factor;
        let fine = freudenthal_cube(self.n - self.k, s)?;
        let images = fine
            .reference()
            .images()
            .iter()
            .map(|p| self.disk.eval_map(&self.disk_images, p))
            .collect::<Result<Vec<_>, _>>()?;
        ChartScene::new(self.n, self.k, self.nu.clone(), s, images)
    }
}

/// The base box `[-1-nu, 1+nu]^k x {0}^{n-k}`, triangulated and embedded.
///
/// For `k = 0` this is the single point at the origin.
pub fn build_base_box(k: usize, n: usize, nu: &Rational) -> Result<PLMap, Error> {
    if k >= n {
        return Err(Error::InvalidInput(format!(
            "need 0 <= k < n, got k={k}, n={n}"
        )));
    }
    if !nu.is_positive() {
        return Err(Error::InvalidInput("margin nu must be positive".into()));
    }
    if k == 0 {
        let complex = SimplicialComplex::from_top_simplices(&[vec![0]])?;
        return PLMap::new(complex, vec![Point::origin(n)]);
    }
    let cube = freudenthal_cube(k, 1)?;
    let scale = Rational::one() + nu;
    let images: Vec<Point> = cube
        .reference()
        .images()
        .iter()
        .map(|p| {
            let mut coords: Vec<Rational> = p.coords().iter().map(|c| c * &scale).collect();
            coords.resize(n, Rational::zero());
            Point::new(coords)
        })
        .collect();
    PLMap::new(cube.complex().clone(), images)
}

/// The plate cycle over the boundary of `[-1-nu, 1+nu]^(k+1)`, embedded
/// through a map `h` applied to the base-box footprint.
///
/// A boundary point with scaled coordinates `(a_1, ..., a_k, t)` maps to
/// `h(a_1, ..., a_k, 0, ..., 0) + 3 (t - 1 - nu) e_{k+1}`: the top face
/// (`t = 1 + nu`) is exactly `h` of the base box, and the walls and bottom
/// extrude downward in coordinate k+1 with slope 3.
pub fn build_plate_with<F>(k: usize, n: usize, nu: &Rational, h: F) -> Result<OrientedCycle, Error>
where
    F: Fn(&Point) -> Point,
{
    if k + 1 > n {
        return Err(Error::InvalidInput(format!(
            "plate needs k + 1 <= n, got k={k}, n={n}"
        )));
    }
    if !nu.is_positive() {
        return Err(Error::InvalidInput("margin nu must be positive".into()));
    }
    let cube = freudenthal_cube(k + 1, 1)?;
    let scale = Rational::one() + nu;
    let three = Rational::from_integer(3.into());
    let images: Vec<Point> = cube
        .reference()
        .images()
        .iter()
        .map(|p| {
            let scaled: Vec<Rational> = p.coords().iter().map(|c| c * &scale).collect();
            let mut foot: Vec<Rational> = scaled[..k].to_vec();
            foot.resize(n, Rational::zero());
            let image = h(&Point::new(foot));
            debug_assert_eq!(image.dim(), n);
            let drop = &three * (&scaled[k] - &scale);
            let mut coords = image.coords().to_vec();
            coords[k] += drop;
            Point::new(coords)
        })
        .collect();
    cube.boundary_cycle_with(&images)
}

/// The plate cycle for the identity chart embedding of the base box.
pub fn build_plate(k: usize, n: usize, nu: &Rational) -> Result<OrientedCycle, Error> {
    build_plate_with(k, n, nu, |p| p.clone())
}

/// Outcome of the wrap-condition check.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    /// The disk image lies inside the chart cube `[-1,1]^n`.
    pub disk_in_cube: bool,
    /// The boundary-sphere image lies inside the cube and strictly clear
    /// of the base box.
    pub boundary_clear: bool,
    /// Linking coefficient of the boundary sphere against the plate; 0
    /// whenever it is undefined because the sphere touches the plate.
    pub kappa: i64,
}

fn point_in_unit_cube(p: &Point) -> bool {
    let one = Rational::one();
    p.coords().iter().all(|c| c.abs() <= one)
}

/// Checks the wrap condition: disk containment, boundary clearance, and
/// the linking coefficient `kappa` against the plate. `kappa != 0` is the
/// homological wrap witness.
pub fn check_wrap_condition(scene: &ChartScene) -> Result<ConditionReport, Error> {
    let plate = build_plate(scene.k, scene.n, &scene.nu)?;
    check_wrap_condition_with(scene, &plate)
}

fn check_wrap_condition_with(
    scene: &ChartScene,
    plate: &OrientedCycle,
) -> Result<ConditionReport, Error> {
    let disk_in_cube = scene.disk_images.iter().all(point_in_unit_cube);

    let boundary = scene.boundary_cycle()?;
    let base = build_base_box(scene.k, scene.n, &scene.nu)?;
    let boundary_pieces: Vec<Vec<Point>> = boundary
        .embedded_tops()
        .into_iter()
        .map(|(pts, _)| pts)
        .collect();
    let base_pieces = base.embedded_maximal_simplices();

    let boundary_in_cube = boundary.map().images().iter().all(point_in_unit_cube);
    let base_separation = polyhedron_separation(&boundary_pieces, &base_pieces)?;
    let boundary_clear = boundary_in_cube && base_separation.is_positive();

    let plate_pieces: Vec<Vec<Point>> = plate
        .embedded_tops()
        .into_iter()
        .map(|(pts, _)| pts)
        .collect();
    let plate_separation = polyhedron_separation(&boundary_pieces, &plate_pieces)?;
    let kappa = if plate_separation.is_positive() {
        linking_number_seeded(&boundary, plate, 0)?.value
    } else {
        0
    };

    Ok(ConditionReport {
        disk_in_cube,
        boundary_clear,
        kappa,
    })
}

/// The three margins behind a certified delta, all exact and positive.
#[derive(Debug, Clone)]
pub struct Margins {
    /// Chebyshev distance from the boundary-sphere image to the base box.
    pub sphere_to_base: Rational,
    /// Half the box margin `nu`: protects the wall and overshoot bounds.
    pub nu_half: Rational,
    /// Chebyshev separation between the boundary sphere and the plate:
    /// protects the linking value.
    pub separation: Rational,
}

impl Margins {
    fn min(&self) -> Rational {
        let mut m = self.sphere_to_base.clone();
        if self.nu_half < m {
            m = self.nu_half.clone();
        }
        if self.separation < m {
            m = self.separation.clone();
        }
        m
    }
}

/// Computes the certified delta for a scene whose wrap condition holds:
/// half the smallest margin. Every margin must be strictly positive; a
/// nonpositive margin here means the caller ignored the precondition.
pub fn certified_delta(
    scene: &ChartScene,
    plate: &OrientedCycle,
    kappa_result: &LinkingResult,
) -> Result<(Rational, Margins), Error> {
    if kappa_result.value == 0 {
        return Err(Error::Precondition(
            "certified delta requires a nonzero linking coefficient".into(),
        ));
    }
    let boundary = scene.boundary_cycle()?;
    let base = build_base_box(scene.k, scene.n, &scene.nu)?;
    let boundary_pieces: Vec<Vec<Point>> = boundary
        .embedded_tops()
        .into_iter()
        .map(|(pts, _)| pts)
        .collect();
    let sphere_to_base =
        polyhedron_separation(&boundary_pieces, &base.embedded_maximal_simplices())?;
    let plate_pieces: Vec<Vec<Point>> = plate
        .embedded_tops()
        .into_iter()
        .map(|(pts, _)| pts)
        .collect();
    let separation = polyhedron_separation(&boundary_pieces, &plate_pieces)?;
    let margins = Margins {
        sphere_to_base,
        nu_half: &scene.nu / Rational::from_integer(2.into()),
        separation,
    };
    if !margins.sphere_to_base.is_positive()
        || !margins.nu_half.is_positive()
        || !margins.separation.is_positive()
    {
        return Err(Error::Internal(
            "nonpositive margin although the wrap condition was verified".into(),
        ));
    }
    let delta = margins.min() / Rational::from_integer(2.into());
    Ok((delta, margins))
}

/// Verdict of a certification attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Rejected { reason: String },
}

/// A transversality certificate: a nonzero `kappa` plus an explicit
/// `delta` under which the intersection is essential.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub kappa: i64,
    /// Certified perturbation budget; zero on rejected verdicts.
    pub delta: Rational,
    pub margins: Option<Margins>,
    pub disk_in_cube: bool,
    pub boundary_clear: bool,
    pub verdict: Verdict,
}

/// Runs the full sufficient-condition pipeline on a scene.
///
/// Certified verdicts are sound: for all PL perturbations of the base-box
/// embedding and of the disk map within `delta` in uniform norm, the
/// images intersect. Rejections carry the first failing condition.
pub fn certify_transverse(scene: &ChartScene) -> Result<Certificate, Error> {
    let plate = build_plate(scene.k, scene.n, &scene.nu)?;
    let report = check_wrap_condition_with(scene, &plate)?;

    let reason = if !report.disk_in_cube {
        Some("disk image leaves the chart cube".to_string())
    } else if !report.boundary_clear {
        Some("boundary sphere meets the base box or leaves the chart cube".to_string())
    } else if report.kappa == 0 {
        Some("linking coefficient kappa is zero: no homological wrap".to_string())
    } else {
        None
    };

    match reason {
        Some(reason) => Ok(Certificate {
            kappa: report.kappa,
            delta: Rational::zero(),
            margins: None,
            disk_in_cube: report.disk_in_cube,
            boundary_clear: report.boundary_clear,
            verdict: Verdict::Rejected { reason },
        }),
        None => {
            let boundary = scene.boundary_cycle()?;
            let kappa_result = linking_number_seeded(&boundary, &plate, 0)?;
            let (delta, margins) = certified_delta(scene, &plate, &kappa_result)?;
            Ok(Certificate {
                kappa: kappa_result.value,
                delta,
                margins: Some(margins),
                disk_in_cube: true,
                boundary_clear: true,
                verdict: Verdict::Certified,
            })
        }
    }
}
