//! Abstract simplicial complexes, PL maps, and oriented cycles.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::Error;
use crate::scalar::Rational;

use super::point::{cheb_dist, Point};

/// Vertices are indices `0..n_vertices` into a complex's vertex set.
pub type VertexId = usize;

/// An abstract simplex: an ordered list of distinct vertex identifiers.
/// The orientation is the permutation class of the ordering; the canonical
/// (sorted) form is used for membership in a complex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Simplex {
    vertices: Vec<VertexId>,
}

impl Simplex {
    pub fn new(vertices: Vec<VertexId>) -> Result<Self, Error> {
        let mut seen = BTreeSet::new();
        for &v in &vertices {
            if !seen.insert(v) {
                return Err(Error::InvalidInput(format!(
                    "repeated vertex {v} in simplex {vertices:?}"
                )));
            }
        }
        if vertices.is_empty() {
            return Err(Error::InvalidInput("empty simplex".into()));
        }
        Ok(Simplex { vertices })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn sorted(&self) -> Vec<VertexId> {
        let mut v = self.vertices.clone();
        v.sort_unstable();
        v
    }
}

/// Sign of the permutation that sorts `tuple` ascending (+1 even, -1 odd).
/// Tuples here are short, so the quadratic inversion count is fine.
pub(crate) fn sort_sign(tuple: &[VertexId]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..tuple.len() {
        for j in i + 1..tuple.len() {
            if tuple[i] > tuple[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A finite simplicial complex, closed under taking faces.
///
/// Simplices are stored in canonical sorted form. Every vertex id in
/// `0..n_vertices` must occur in the complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    n_vertices: usize,
    simplices: BTreeSet<Vec<VertexId>>,
}

impl SimplicialComplex {
    /// Builds the face closure of the given top simplices.
    ///
    /// Vertex ids must form a contiguous range `0..k`.
    pub fn from_top_simplices(tops: &[Vec<VertexId>]) -> Result<Self, Error> {
        let mut simplices: BTreeSet<Vec<VertexId>> = BTreeSet::new();
        let mut used: BTreeSet<VertexId> = BTreeSet::new();
        for top in tops {
            let s = Simplex::new(top.clone())?;
            used.extend(s.vertices().iter().copied());
            insert_with_faces(&mut simplices, s.sorted());
        }
        let n_vertices = used.iter().next_back().map(|&v| v + 1).unwrap_or(0);
        if used.len() != n_vertices {
            return Err(Error::InvalidInput(format!(
                "vertex ids must form a contiguous range 0..{n_vertices}; {} ids used",
                used.len()
            )));
        }
        Ok(SimplicialComplex {
            n_vertices,
            simplices,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Dimension: the maximum simplex dimension, or None for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.len() - 1).max()
    }

    pub fn contains(&self, simplex: &Simplex) -> bool {
        self.simplices.contains(&simplex.sorted())
    }

    /// All simplices in canonical sorted form.
    pub fn simplices(&self) -> impl Iterator<Item = &Vec<VertexId>> {
        self.simplices.iter()
    }

    /// Simplices not contained in any larger simplex. Their union carries
    /// the whole polyhedron.
    pub fn maximal_simplices(&self) -> Vec<Vec<VertexId>> {
        self.simplices
            .iter()
            .filter(|s| {
                !self
                    .simplices
                    .iter()
                    .any(|t| t.len() > s.len() && is_subset(s, t))
            })
            .cloned()
            .collect()
    }
}

fn is_subset(small: &[VertexId], large: &[VertexId]) -> bool {
    small.iter().all(|v| large.binary_search(v).is_ok())
}

fn insert_with_faces(set: &mut BTreeSet<Vec<VertexId>>, sorted: Vec<VertexId>) {
    if set.contains(&sorted) {
        return;
    }
    for skip in 0..sorted.len() {
        if sorted.len() > 1 {
            let mut face = sorted.clone();
            face.remove(skip);
            insert_with_faces(set, face);
        }
    }
    set.insert(sorted);
}

/// A piecewise-linear map: vertex images in a common R^n, extended affinely
/// over each simplex of the domain complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLMap {
    domain: SimplicialComplex,
    images: Vec<Point>,
}

impl PLMap {
    pub fn new(domain: SimplicialComplex, images: Vec<Point>) -> Result<Self, Error> {
        if images.len() != domain.n_vertices() {
            return Err(Error::InvalidInput(format!(
                "map needs {} vertex images, got {}",
                domain.n_vertices(),
                images.len()
            )));
        }
        if let Some(first) = images.first() {
            let n = first.dim();
            if let Some(bad) = images.iter().find(|p| p.dim() != n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: bad.dim(),
                });
            }
        }
        Ok(PLMap { domain, images })
    }

    pub fn domain(&self) -> &SimplicialComplex {
        &self.domain
    }

    pub fn images(&self) -> &[Point] {
        &self.images
    }

    pub fn image(&self, v: VertexId) -> &Point {
        &self.images[v]
    }

    /// Ambient dimension of the image space.
    pub fn ambient_dim(&self) -> usize {
        self.images.first().map(|p| p.dim()).unwrap_or(0)
    }

    /// Evaluates the affine extension on a simplex at barycentric weights.
    ///
    /// Weights must be nonnegative and sum to one.
    pub fn eval(&self, simplex: &Simplex, bary: &[Rational]) -> Result<Point, Error> {
        if !self.domain.contains(simplex) {
            return Err(Error::InvalidInput(format!(
                "simplex {:?} not in the domain complex",
                simplex.vertices()
            )));
        }
        if bary.len() != simplex.vertices().len() {
            return Err(Error::InvalidInput(format!(
                "expected {} barycentric weights, got {}",
                simplex.vertices().len(),
                bary.len()
            )));
        }
        let mut sum = Rational::zero();
        for w in bary {
            if w < &Rational::zero() {
                return Err(Error::InvalidInput("negative barycentric weight".into()));
            }
            sum += w;
        }
        if sum != Rational::from_integer(1.into()) {
            return Err(Error::InvalidInput(
                "barycentric weights must sum to 1".into(),
            ));
        }
        let mut acc = Point::origin(self.ambient_dim());
        for (v, w) in simplex.vertices().iter().zip(bary) {
            acc = acc.add(&self.images[*v].scale(w));
        }
        Ok(acc)
    }

    /// Same domain, new images.
    pub fn with_images(&self, images: Vec<Point>) -> Result<Self, Error> {
        PLMap::new(self.domain.clone(), images)
    }

    /// Translates every vertex image by `v`.
    pub fn translated(&self, v: &[Rational]) -> Result<Self, Error> {
        if v.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: v.len(),
            });
        }
        let images = self.images.iter().map(|p| p.translate(v)).collect();
        self.with_images(images)
    }

    /// Embedded vertex tuples for the maximal simplices: the pieces whose
    /// union is the image polyhedron.
    pub fn embedded_maximal_simplices(&self) -> Vec<Vec<Point>> {
        self.domain
            .maximal_simplices()
            .into_iter()
            .map(|s| s.iter().map(|&v| self.images[v].clone()).collect())
            .collect()
    }
}

/// C0 (uniform Chebyshev) distance between two PL maps on the same
/// triangulation.
///
/// The difference of two affine maps on a simplex is affine, and the
/// Chebyshev norm of an affine map over a simplex is attained at a vertex,
/// so the supremum over the polyhedron equals the maximum over vertices.
pub fn c0_distance(f: &PLMap, g: &PLMap) -> Result<Rational, Error> {
    if f.domain != g.domain {
        return Err(Error::DomainMismatch(
            "C0 distance needs a common domain triangulation".into(),
        ));
    }
    if f.ambient_dim() != g.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: f.ambient_dim(),
            got: g.ambient_dim(),
        });
    }
    let mut best = Rational::zero();
    for (p, q) in f.images.iter().zip(&g.images) {
        let d = cheb_dist(p, q)?;
        if d > best {
            best = d;
        }
    }
    Ok(best)
}

/// A top-dimensional simplex of a cycle: an ordered vertex tuple with an
/// orientation coefficient (+1 or -1).
pub type SignedSimplex = (Vec<VertexId>, i8);

/// A PL map from a closed oriented pseudomanifold: the carrier of
/// linking-number arguments.
///
/// For `dim >= 1` every (dim-1)-face must be shared by exactly two top
/// simplices with opposite induced orientations; for `dim == 0` the
/// orientation coefficients must sum to zero.
#[derive(Debug, Clone)]
pub struct OrientedCycle {
    map: PLMap,
    tops: Vec<SignedSimplex>,
    dim: usize,
}

impl OrientedCycle {
    pub fn new(map: PLMap, tops: Vec<SignedSimplex>, dim: usize) -> Result<Self, Error> {
        for (tuple, sign) in &tops {
            let s = Simplex::new(tuple.clone())?;
            if s.dim() != dim {
                return Err(Error::InvalidInput(format!(
                    "cycle top {tuple:?} has dimension {}, expected {dim}",
                    s.dim()
                )));
            }
            if !map.domain().contains(&s) {
                return Err(Error::InvalidInput(format!(
                    "cycle top {tuple:?} not in the domain complex"
                )));
            }
            if *sign != 1 && *sign != -1 {
                return Err(Error::InvalidInput(format!(
                    "orientation coefficient must be +1 or -1, got {sign}"
                )));
            }
        }
        let cycle = OrientedCycle { map, tops, dim };
        cycle.validate_closed()?;
        Ok(cycle)
    }

    fn validate_closed(&self) -> Result<(), Error> {
        if self.dim == 0 {
            let total: i64 = self.tops.iter().map(|(_, s)| *s as i64).sum();
            if total != 0 {
                return Err(Error::InvalidInput(format!(
                    "0-cycle orientation coefficients sum to {total}, expected 0"
                )));
            }
            let mut seen = BTreeSet::new();
            for (tuple, _) in &self.tops {
                if !seen.insert(tuple[0]) {
                    return Err(Error::InvalidInput(format!(
                        "vertex {} appears in two tops of a 0-cycle",
                        tuple[0]
                    )));
                }
            }
            return Ok(());
        }
        // Signed boundary chain: every ridge must appear exactly twice and
        // cancel.
        let mut ridges: BTreeMap<Vec<VertexId>, (usize, i64)> = BTreeMap::new();
        for (tuple, sign) in &self.tops {
            for skip in 0..tuple.len() {
                let mut face: Vec<VertexId> = tuple.clone();
                face.remove(skip);
                let orient = sort_sign(&face);
                face.sort_unstable();
                let coeff =
                    (*sign as i64) * if skip % 2 == 0 { 1 } else { -1 } * (orient as i64);
                let entry = ridges.entry(face).or_insert((0, 0));
                entry.0 += 1;
                entry.1 += coeff;
            }
        }
        for (face, (count, coeff)) in &ridges {
            if *count != 2 {
                return Err(Error::InvalidInput(format!(
                    "ridge {face:?} lies in {count} top simplices, expected exactly 2"
                )));
            }
            if *coeff != 0 {
                return Err(Error::InvalidInput(format!(
                    "ridge {face:?} has non-cancelling induced orientations"
                )));
            }
        }
        Ok(())
    }

    pub fn map(&self) -> &PLMap {
        &self.map
    }

    pub fn tops(&self) -> &[SignedSimplex] {
        &self.tops
    }

    /// Intrinsic dimension of the cycle.
    pub fn cycle_dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.map.ambient_dim()
    }

    /// Embedded top simplices together with their orientation coefficients.
    pub fn embedded_tops(&self) -> Vec<(Vec<Point>, i8)> {
        self.tops
            .iter()
            .map(|(tuple, sign)| {
                (
                    tuple.iter().map(|&v| self.map.image(v).clone()).collect(),
                    *sign,
                )
            })
            .collect()
    }

    /// The same cycle with the opposite orientation.
    pub fn reversed(&self) -> Self {
        OrientedCycle {
            map: self.map.clone(),
            tops: self.tops.iter().map(|(t, s)| (t.clone(), -s)).collect(),
            dim: self.dim,
        }
    }

    /// The cycle translated by a vector.
    pub fn translated(&self, v: &[Rational]) -> Result<Self, Error> {
        Ok(OrientedCycle {
            map: self.map.translated(v)?,
            tops: self.tops.clone(),
            dim: self.dim,
        })
    }

    /// The same combinatorial cycle re-embedded through new vertex images.
    pub fn with_images(&self, images: Vec<Point>) -> Result<Self, Error> {
        Ok(OrientedCycle {
            map: self.map.with_images(images)?,
            tops: self.tops.clone(),
            dim: self.dim,
        })
    }
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

    #[test]
    fn face_closure_and_dim() {
        let c = SimplicialComplex::from_top_simplices(&[vec![0, 1, 2]]).unwrap();
        assert_eq!(c.dim(), Some(2));
        assert_eq!(c.simplices().count(), 7); // 3 vertices + 3 edges + 1 triangle
        assert!(c.contains(&Simplex::new(vec![2, 0]).unwrap()));
        assert_eq!(c.maximal_simplices(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn rejects_gaps_in_vertex_ids() {
        assert!(SimplicialComplex::from_top_simplices(&[vec![0, 2]]).is_err());
    }

    #[test]
    fn eval_pl_examples() {
        let c = SimplicialComplex::from_top_simplices(&[vec![0, 1]]).unwrap();
        let f = PLMap::new(c, vec![pt(&["0", "0"]), pt(&["2", "0"])]).unwrap();
        let seg = Simplex::new(vec![0, 1]).unwrap();
        assert_eq!(
            f.eval(&seg, &[r("1"), r("0")]).unwrap(),
            pt(&["0", "0"])
        );
        assert_eq!(
            f.eval(&seg, &[r("1/2"), r("1/2")]).unwrap(),
            pt(&["1", "0"])
        );

        let tri = SimplicialComplex::from_top_simplices(&[vec![0, 1, 2]]).unwrap();
        let g = PLMap::new(
            tri,
            vec![pt(&["0", "0"]), pt(&["3", "0"]), pt(&["0", "3"])],
        )
        .unwrap();
        let t = Simplex::new(vec![0, 1, 2]).unwrap();
        assert_eq!(
            g.eval(&t, &[r("1/3"), r("1/3"), r("1/3")]).unwrap(),
            pt(&["1", "1"])
        );
    }

    #[test]
    fn eval_pl_rejects_bad_weights() {
        let c = SimplicialComplex::from_top_simplices(&[vec![0, 1], vec![1, 2]]).unwrap();
        let f = PLMap::new(c, vec![pt(&["0"]), pt(&["1"]), pt(&["2"])]).unwrap();
        let seg = Simplex::new(vec![0, 1]).unwrap();
        assert!(f.eval(&seg, &[r("1/2"), r("1/4")]).is_err());
        assert!(f.eval(&seg, &[r("3/2"), r("-1/2")]).is_err());
        // Weight count must match the simplex.
        let vertex = Simplex::new(vec![0]).unwrap();
        assert!(f.eval(&vertex, &[r("1"), r("0")]).is_err());
        // [0,2] is not a simplex of the path complex.
        let missing = Simplex::new(vec![0, 2]).unwrap();
        assert!(f.eval(&missing, &[r("1/2"), r("1/2")]).is_err());
    }

    #[test]
    fn c0_distance_examples() {
        let c = SimplicialComplex::from_top_simplices(&[vec![0, 1]]).unwrap();
        let f = PLMap::new(c.clone(), vec![pt(&["0", "0"]), pt(&["1", "0"])]).unwrap();
        assert_eq!(c0_distance(&f, &f).unwrap(), r("0"));
        let g = f.translated(&[r("3/10"), r("0")]).unwrap();
        assert_eq!(c0_distance(&f, &g).unwrap(), r("3/10"));
        // Vertex gaps 0.1 and 0.7: the max is at a vertex.
        let h = PLMap::new(c, vec![pt(&["0", "1/10"]), pt(&["1", "7/10"])]).unwrap();
        assert_eq!(c0_distance(&f, &h).unwrap(), r("7/10"));
    }

    #[test]
    fn c0_distance_rejects_different_domains() {
        let c1 = SimplicialComplex::from_top_simplices(&[vec![0, 1]]).unwrap();
        let c2 = SimplicialComplex::from_top_simplices(&[vec![0, 1], vec![1, 2]]).unwrap();
        let f = PLMap::new(c1, vec![pt(&["0"]), pt(&["1"])]).unwrap();
        let g = PLMap::new(c2, vec![pt(&["0"]), pt(&["1"]), pt(&["2"])]).unwrap();
        assert!(c0_distance(&f, &g).is_err());
    }

    #[test]
    fn zero_cycle_must_cancel() {
        let c = SimplicialComplex::from_top_simplices(&[vec![0], vec![1]]).unwrap();
        let map = PLMap::new(c, vec![pt(&["0", "1"]), pt(&["0", "-1"])]).unwrap();
        assert!(OrientedCycle::new(map.clone(), vec![(vec![0], 1), (vec![1], -1)], 0).is_ok());
        assert!(OrientedCycle::new(map, vec![(vec![0], 1), (vec![1], 1)], 0).is_err());
    }

    #[test]
    fn one_cycle_ridge_condition() {
        // A triangle boundary: coherent orientation passes.
        let c =
            SimplicialComplex::from_top_simplices(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let map = PLMap::new(
            c,
            vec![pt(&["0", "0"]), pt(&["1", "0"]), pt(&["0", "1"])],
        )
        .unwrap();
        let good = OrientedCycle::new(
            map.clone(),
            vec![(vec![0, 1], 1), (vec![1, 2], 1), (vec![2, 0], 1)],
            1,
        );
        assert!(good.is_ok());
        // Flipping one edge breaks cancellation.
        let bad = OrientedCycle::new(
            map,
            vec![(vec![0, 1], 1), (vec![1, 2], 1), (vec![0, 2], 1)],
            1,
        );
        assert!(bad.is_err());
    }
}
