//! Dense points of `R^d`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub, SubAssign};

use crate::error::{check_dim, Error, Result};

/// A point of `R^d` stored as dense coordinates.
///
/// `From` conversions do not validate; [`Point::new`] rejects non-finite
/// coordinates and should be used at trust boundaries.
#[derive(Clone, PartialEq, Default)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// The `i`-th standard basis vector of `R^dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut p = Self::zeros(dim);
        p.0[i] = 1.0;
        p
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn dot(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// `self += alpha * x`
    pub fn axpy(&mut self, alpha: f64, x: &Point) {
        debug_assert_eq!(self.dim(), x.dim());
        for (s, xi) in self.0.iter_mut().zip(&x.0) {
            *s += alpha * xi;
        }
    }

    pub fn scaled(&self, alpha: f64) -> Point {
        Point(self.0.iter().map(|c| alpha * c).collect())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Point {
        Point(self.0.iter().map(|&c| f(c)).collect())
    }

    pub fn ensure_dim(&self, dim: usize) -> Result<()> {
        check_dim(dim, self.dim())
    }

    /// Arithmetic mean of a nonempty slice of equal-dimension points.
    pub fn mean<'a>(points: impl IntoIterator<Item = &'a Point>) -> Option<Point> {
        let mut iter = points.into_iter();
        let mut acc = iter.next()?.clone();
        let mut count = 1usize;
        for p in iter {
            acc += p;
            count += 1;
        }
        Some(acc.scaled(1.0 / count as f64))
    }

    /// Concatenates blocks into one point of the product space.
    pub fn concat(blocks: &[Point]) -> Point {
        Point(blocks.iter().flat_map(|b| b.0.iter().copied()).collect())
    }

    /// Splits a product-space point into `m` equal blocks.
    pub fn split(&self, blocks: usize) -> Vec<Point> {
        assert!(blocks > 0 && self.dim().is_multiple_of(blocks));
        self.0.chunks(self.dim() / blocks).map(|c| Point(c.to_vec())).collect()
    }

    /// Largest coordinate-wise absolute difference.
    pub fn max_abs_diff(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Point(coords)
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(coords: [f64; N]) -> Self {
        Point(coords.to_vec())
    }
}

impl Index<usize> for Point {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl AddAssign<&Point> for Point {
    fn add_assign(&mut self, rhs: &Point) {
        self.axpy(1.0, rhs);
    }
}

impl SubAssign<&Point> for Point {
    fn sub_assign(&mut self, rhs: &Point) {
        self.axpy(-1.0, rhs);
    }
}

impl Add<&Point> for &Point {
    type Output = Point;

    fn add(self, rhs: &Point) -> Point {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add<&Point> for Point {
    type Output = Point;

    fn add(mut self, rhs: &Point) -> Point {
        self += rhs;
        self
    }
}

impl Add<Point> for Point {
    type Output = Point;

    fn add(mut self, rhs: Point) -> Point {
        self += &rhs;
        self
    }
}

impl Sub<&Point> for &Point {
    type Output = Point;

    fn sub(self, rhs: &Point) -> Point {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub<&Point> for Point {
    type Output = Point;

    fn sub(mut self, rhs: &Point) -> Point {
        self -= rhs;
        self
    }
}

impl Sub<Point> for Point {
    type Output = Point;

    fn sub(mut self, rhs: Point) -> Point {
        self -= &rhs;
        self
    }
}

impl Sub<Point> for &Point {
    type Output = Point;

    fn sub(self, rhs: Point) -> Point {
        self - &rhs
    }
}

impl Mul<&Point> for f64 {
    type Output = Point;

    fn mul(self, rhs: &Point) -> Point {
        rhs.scaled(self)
    }
}

impl Mul<Point> for f64 {
    type Output = Point;

    fn mul(self, mut rhs: Point) -> Point {
        rhs.0.iter_mut().for_each(|c| *c *= self);
        rhs
    }
}

impl Neg for &Point {
    type Output = Point;

    fn neg(self) -> Point {
        self.scaled(-1.0)
    }
}

impl Neg for Point {
    type Output = Point;

    fn neg(self) -> Point {
        -1.0 * self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        assert_eq!(Point::new(vec![1.0, f64::NAN]), Err(Error::NonFinite { index: 1 }));
        assert!(Point::new(vec![1.0, 2.0]).is_ok());
    }

    #[test]
    fn split_and_concat_invert() {
        let p = Point::from([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let blocks = p.split(3);
        assert_eq!(blocks[1], Point::from([3.0, 4.0]));
        assert_eq!(Point::concat(&blocks), p);
    }

    #[test]
    fn mean_of_points() {
        let pts = [Point::from([1.0, 0.0]), Point::from([-1.0, 2.0])];
        assert_eq!(Point::mean(&pts), Some(Point::from([0.0, 1.0])));
        assert_eq!(Point::mean(&[] as &[Point]), None);
    }
}
