//! Freudenthal (Kuhn) triangulations of the cube `[-1,1]^m` and their
//! oriented boundary spheres.
//!
//! The cube is split into `s^m` grid cells and each cell into `m!` Kuhn
//! simplices: starting from the low corner, walk one grid step along each
//! axis in the order given by a permutation. Top simplices are stored as
//! ordered vertex tuples that are positively oriented in the reference
//! coordinates, so the cube is a coherently oriented combinatorial ball and
//! its boundary is a closed oriented pseudomanifold sphere.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::scalar::Rational;

use super::complex::{sort_sign, OrientedCycle, PLMap, SignedSimplex, SimplicialComplex, VertexId};
use super::point::Point;

/// A triangulated, coherently oriented model of the cube `[-1,1]^m`,
/// together with its reference embedding.
#[derive(Debug, Clone)]
pub struct TriangulatedCube {
    complex: SimplicialComplex,
    reference: PLMap,
    oriented_tops: Vec<Vec<VertexId>>,
    m: usize,
    s: usize,
}

/// Triangulates `[-1,1]^m` with `s` subdivisions per axis into `m! * s^m`
/// positively oriented top simplices.
///
/// Grid vertices are indexed row-major: the vertex with grid position
/// `(i_0, ..., i_{m-1})`, `0 <= i_j <= s`, has id `sum_j i_j * (s+1)^j` and
/// reference coordinate `-1 + 2 i_j / s` in axis `j`.
pub fn freudenthal_cube(m: usize, s: usize) -> Result<TriangulatedCube, Error> {
    if m < 1 {
        return Err(Error::InvalidInput("cube dimension must be >= 1".into()));
    }
    if s < 1 {
        return Err(Error::InvalidInput("subdivision count must be >= 1".into()));
    }
    let side = s + 1;
    let n_vertices = side.pow(m as u32);

    let vertex_id = |grid: &[usize]| -> VertexId {
        grid.iter()
            .rev()
            .fold(0usize, |acc, &i| acc * side + i)
    };

    let mut images = Vec::with_capacity(n_vertices);
    let mut grid = vec![0usize; m];
    for id in 0..n_vertices {
        let mut rest = id;
        for g in grid.iter_mut() {
            *g = rest % side;
            rest /= side;
        }
        let coords = grid
            .iter()
            .map(|&i| {
                Rational::new((2 * i as i64 - s as i64).into(), (s as i64).into())
            })
            .collect();
        images.push(Point::new(coords));
    }

    let mut oriented_tops = Vec::with_capacity(factorial(m) * s.pow(m as u32));
    let mut cell = vec![0usize; m];
    loop {
        for perm in permutations(m) {
            let mut tuple = Vec::with_capacity(m + 1);
            let mut corner = cell.clone();
            tuple.push(vertex_id(&corner));
            for &axis in &perm {
                corner[axis] += 1;
                tuple.push(vertex_id(&corner));
            }
            // The walk's edge vectors are e_{perm(1)}, ..., e_{perm(m)}, so
            // the simplex orientation is the permutation sign; make every
            // stored tuple positively oriented.
            if perm_sign(&perm) < 0 {
                let len = tuple.len();
                tuple.swap(len - 1, len - 2);
            }
            oriented_tops.push(tuple);
        }
        // Advance to the next grid cell.
        let mut axis = 0;
        loop {
            if axis == m {
                break;
            }
            cell[axis] += 1;
            if cell[axis] < s {
                break;
            }
            cell[axis] = 0;
            axis += 1;
        }
        if axis == m {
            break;
        }
    }

    let complex = SimplicialComplex::from_top_simplices(&oriented_tops)?;
    let reference = PLMap::new(complex.clone(), images)?;
    Ok(TriangulatedCube {
        complex,
        reference,
        oriented_tops,
        m,
        s,
    })
}

fn factorial(m: usize) -> usize {
    (1..=m).product::<usize>().max(1)
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(factorial(m));
    let mut items: Vec<usize> = (0..m).collect();
    permute_rec(&mut items, 0, &mut out);
    out
}

fn permute_rec(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_rec(items, k + 1, out);
        items.swap(k, i);
    }
}

fn perm_sign(perm: &[usize]) -> i8 {
    sort_sign(perm)
}

impl TriangulatedCube {
    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    /// The identity embedding of the cube into R^m.
    pub fn reference(&self) -> &PLMap {
        &self.reference
    }

    /// Positively oriented top simplices, as ordered vertex tuples.
    pub fn oriented_tops(&self) -> &[Vec<VertexId>] {
        &self.oriented_tops
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn subdivisions(&self) -> usize {
        self.s
    }

    pub fn vertex_count(&self) -> usize {
        self.complex.n_vertices()
    }

    /// Signed boundary faces in the original vertex ids: the algebraic
    /// boundary of the oriented top chain, with interior faces cancelled.
    fn signed_boundary_faces(&self) -> Result<Vec<SignedSimplex>, Error> {
        let mut acc: BTreeMap<Vec<VertexId>, i64> = BTreeMap::new();
        for tuple in &self.oriented_tops {
            for skip in 0..tuple.len() {
                let mut face = tuple.clone();
                face.remove(skip);
                let orient = sort_sign(&face) as i64;
                face.sort_unstable();
                let coeff = if skip % 2 == 0 { 1 } else { -1 } * orient;
                *acc.entry(face).or_insert(0) += coeff;
            }
        }
        let mut out = Vec::new();
        for (face, coeff) in acc {
            match coeff {
                0 => {}
                1 => out.push((face, 1i8)),
                -1 => out.push((face, -1i8)),
                other => {
                    return Err(Error::InvalidInput(format!(
                        "face {face:?} has boundary coefficient {other}; not a combinatorial ball"
                    )))
                }
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidInput(
                "empty boundary; not a combinatorial ball".into(),
            ));
        }
        Ok(out)
    }

    /// Vertex ids (in the cube's numbering) that lie on the boundary sphere,
    /// ascending.
    pub fn boundary_vertices(&self) -> Result<Vec<VertexId>, Error> {
        let faces = self.signed_boundary_faces()?;
        let mut ids: Vec<VertexId> = faces.iter().flat_map(|(f, _)| f.iter().copied()).collect();
        ids.sort_unstable();
        ids.dedup();
        Ok(ids)
    }

    /// The induced oriented boundary sphere, embedded by the reference
    /// coordinates.
    pub fn boundary_cycle(&self) -> Result<OrientedCycle, Error> {
        let images = self.reference.images().to_vec();
        self.boundary_cycle_with(&images)
    }

    /// The oriented boundary sphere re-embedded through vertex images given
    /// for every cube vertex (e.g. a disk map's images).
    pub fn boundary_cycle_with(&self, images: &[Point]) -> Result<OrientedCycle, Error> {
        if images.len() != self.vertex_count() {
            return Err(Error::InvalidInput(format!(
                "expected {} vertex images, got {}",
                self.vertex_count(),
                images.len()
            )));
        }
        let faces = self.signed_boundary_faces()?;
        let old_ids = self.boundary_vertices()?;
        let renumber: BTreeMap<VertexId, VertexId> = old_ids
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        let tops: Vec<SignedSimplex> = faces
            .iter()
            .map(|(face, sign)| (face.iter().map(|v| renumber[v]).collect(), *sign))
            .collect();
        let tuples: Vec<Vec<VertexId>> = tops.iter().map(|(t, _)| t.clone()).collect();
        let complex = SimplicialComplex::from_top_simplices(&tuples)?;
        let boundary_images: Vec<Point> = old_ids.iter().map(|&v| images[v].clone()).collect();
        let map = PLMap::new(complex, boundary_images)?;
        OrientedCycle::new(map, tops, self.m - 1)
    }

    /// Evaluates the PL map given by `images` (one per cube vertex) at an
    /// arbitrary point of `[-1,1]^m` in reference coordinates, exactly.
    ///
    /// The containing Kuhn simplex of the grid cell is determined by the
    /// descending order of the fractional parts, and the barycentric
    /// weights are their successive differences.
    pub fn eval_map(&self, images: &[Point], at: &Point) -> Result<Point, Error> {
        if images.len() != self.vertex_count() {
            return Err(Error::InvalidInput(format!(
                "expected {} vertex images, got {}",
                self.vertex_count(),
                images.len()
            )));
        }
        if at.dim() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: at.dim(),
            });
        }
        let one = Rational::from_integer(1.into());
        let s_rat = Rational::from_integer((self.s as i64).into());
        let mut cell = vec![0usize; self.m];
        let mut frac = vec![Rational::from_integer(0.into()); self.m];
        for (j, c) in at.coords().iter().enumerate() {
            if c < &-one.clone() || c > &one {
                return Err(Error::InvalidInput(format!(
                    "reference point leaves the cube in axis {j}"
                )));
            }
            // grid coordinate in [0, s]
            let g = (c + &one) * &s_rat / Rational::from_integer(2.into());
            let mut fl = g.floor().to_integer();
            if fl == num_bigint::BigInt::from(self.s) {
                fl -= 1;
            }
            cell[j] = num_traits::ToPrimitive::to_usize(&fl).expect("small grid index");
            frac[j] = g - Rational::from_integer(fl);
        }
        // Axes sorted by descending fractional part; ties by axis index for
        // determinism (any tie order gives the same point).
        let mut order: Vec<usize> = (0..self.m).collect();
        order.sort_by(|&a, &b| frac[b].cmp(&frac[a]).then(a.cmp(&b)));

        let side = self.s + 1;
        let vertex_id = |grid: &[usize]| -> usize {
            grid.iter().rev().fold(0usize, |acc, &i| acc * side + i)
        };

        let mut weights: Vec<Rational> = Vec::with_capacity(self.m + 1);
        weights.push(&one - &frac[order[0]]);
        for w in order.windows(2) {
            weights.push(&frac[w[0]] - &frac[w[1]]);
        }
        weights.push(frac[order[self.m - 1]].clone());

        let mut corner = cell;
        let ambient = images.first().map(|p| p.dim()).unwrap_or(0);
        let mut acc = Point::origin(ambient);
        acc = acc.add(&images[vertex_id(&corner)].scale(&weights[0]));
        for (step, &axis) in order.iter().enumerate() {
            corner[axis] += 1;
            acc = acc.add(&images[vertex_id(&corner)].scale(&weights[step + 1]));
        }
        Ok(acc)
    }

    /// Euler characteristic by cell enumeration.
    pub fn euler_characteristic(&self) -> i64 {
        self.complex
            .simplices()
            .map(|s| if (s.len() - 1) % 2 == 0 { 1 } else { -1 })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::linalg::determinant;
    use num_traits::Zero;

    #[test]
    fn interval_cube() {
        let cube = freudenthal_cube(1, 1).unwrap();
        assert_eq!(cube.vertex_count(), 2);
        assert_eq!(cube.oriented_tops().len(), 1);
        let boundary = cube.boundary_cycle().unwrap();
        assert_eq!(boundary.cycle_dim(), 0);
        // S^0: two opposite signs, +1 at coordinate +1.
        let tops = boundary.embedded_tops();
        assert_eq!(tops.len(), 2);
        for (points, sign) in tops {
            let c = points[0].get(0).clone();
            if sign == 1 {
                assert_eq!(c, Rational::from_integer(1.into()));
            } else {
                assert_eq!(c, Rational::from_integer((-1).into()));
            }
        }
    }

    #[test]
    fn square_kuhn_triangulation() {
        let cube = freudenthal_cube(2, 1).unwrap();
        assert_eq!(cube.oriented_tops().len(), 2);
        let boundary = cube.boundary_cycle().unwrap();
        assert_eq!(boundary.tops().len(), 4);
        assert_eq!(cube.euler_characteristic(), 1);
    }

    #[test]
    fn subdivided_3_cube_counts() {
        let cube = freudenthal_cube(3, 2).unwrap();
        assert_eq!(cube.oriented_tops().len(), 48);
        assert_eq!(cube.euler_characteristic(), 1);
    }

    #[test]
    fn tops_are_positively_oriented() {
        for (m, s) in [(1usize, 2usize), (2, 2), (3, 1)] {
            let cube = freudenthal_cube(m, s).unwrap();
            for tuple in cube.oriented_tops() {
                let base = cube.reference().image(tuple[0]);
                let mat: Vec<Vec<Rational>> = tuple[1..]
                    .iter()
                    .map(|&v| cube.reference().image(v).sub(base).coords().to_vec())
                    .collect();
                // Column/row transposition does not change the sign of det
                // up to transpose symmetry: det(A) = det(A^T).
                assert!(determinant(&mat) > Rational::zero());
            }
        }
    }

    #[test]
    fn boundary_is_a_pseudomanifold_sphere() {
        // OrientedCycle::new validates the ridge condition; constructing the
        // boundary is itself the test.
        for (m, s) in [(2usize, 2usize), (3, 1), (3, 2)] {
            let cube = freudenthal_cube(m, s).unwrap();
            let boundary = cube.boundary_cycle().unwrap();
            assert_eq!(boundary.cycle_dim(), m - 1);
            // Boundary of the m-cube has 2m facets, each triangulated by
            // (m-1)! * s^(m-1) simplices.
            let expected = 2 * m * factorial(m - 1) * s.pow((m - 1) as u32);
            assert_eq!(boundary.tops().len(), expected);
        }
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(freudenthal_cube(0, 1).is_err());
        assert!(freudenthal_cube(2, 0).is_err());
    }

    #[test]
    fn eval_map_reproduces_vertices_and_affine_maps() {
        use crate::scalar::rat;
        let cube = freudenthal_cube(2, 2).unwrap();
        let images: Vec<Point> = cube.reference().images().to_vec();
        // The identity embedding evaluates to the point itself, also at
        // non-vertex locations.
        for v in 0..cube.vertex_count() {
            let p = cube.reference().image(v).clone();
            assert_eq!(cube.eval_map(&images, &p).unwrap(), p);
        }
        let q = Point::new(vec![rat("1/3").unwrap(), rat("-2/7").unwrap()]);
        assert_eq!(cube.eval_map(&images, &q).unwrap(), q);
        // Outside the cube is an error.
        let out = Point::new(vec![rat("3/2").unwrap(), rat("0").unwrap()]);
        assert!(cube.eval_map(&images, &out).is_err());
    }
}
