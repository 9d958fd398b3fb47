//! Points of R^n with exact rational coordinates, under the Chebyshev norm.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::scalar::{rat_display, Rational};

/// A point (or vector) of R^n with exact rational coordinates.
///
/// The ambient dimension is fixed per scene; operations that combine points
/// check that dimensions agree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    coords: Vec<Rational>,
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point { coords }
    }

    /// The origin of R^n.
    pub fn origin(dim: usize) -> Self {
        Point {
            coords: vec![Rational::zero(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    /// Chebyshev norm: max of absolute coordinate values.
    pub fn cheb_norm(&self) -> Rational {
        self.coords
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Point {
        Point {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    /// Translates by a raw coordinate vector.
    pub fn translate(&self, v: &[Rational]) -> Point {
        debug_assert_eq!(self.dim(), v.len());
        Point {
            coords: self.coords.iter().zip(v).map(|(a, b)| a + b).collect(),
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", rat_display(c))?;
        }
        write!(f, ")")
    }
}

/// Chebyshev distance between two points of the same R^n.
///
/// Symmetric, zero exactly on equal points.
pub fn cheb_dist(u: &Point, v: &Point) -> Result<Rational, Error> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            got: v.dim(),
        });
    }
    Ok(u.sub(v).cheb_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn pt(coords: &[&str]) -> Point {
        Point::new(coords.iter().map(|s| rat(s).unwrap()).collect())
    }

    #[test]
    fn cheb_dist_examples() {
        assert_eq!(
            cheb_dist(&pt(&["0", "0"]), &pt(&["0", "0"])).unwrap(),
            rat("0").unwrap()
        );
        assert_eq!(
            cheb_dist(&pt(&["0", "0"]), &pt(&["1", "-2"])).unwrap(),
            rat("2").unwrap()
        );
        assert_eq!(
            cheb_dist(&pt(&["1", "1", "1"]), &pt(&["-1", "2", "1"])).unwrap(),
            rat("2").unwrap()
        );
    }

    #[test]
    fn cheb_dist_dimension_mismatch() {
        assert!(cheb_dist(&pt(&["0"]), &pt(&["0", "0"])).is_err());
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..60).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
    }

    fn arb_point(dim: usize) -> impl Strategy<Value = Point> {
        prop::collection::vec(arb_rational(), dim).prop_map(Point::new)
    }

    proptest! {
        #[test]
        fn cheb_is_a_metric((u, v, w) in (arb_point(3), arb_point(3), arb_point(3))) {
            let duv = cheb_dist(&u, &v).unwrap();
            let dvu = cheb_dist(&v, &u).unwrap();
            prop_assert_eq!(&duv, &dvu);
            prop_assert_eq!(duv == Rational::zero(), u == v);
            let duw = cheb_dist(&u, &w).unwrap();
            let dwv = cheb_dist(&w, &v).unwrap();
            prop_assert!(duv <= duw + dwv);
        }
    }
}
