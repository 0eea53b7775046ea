//! Plane geometry over F_q: the quadratic distance, the unit circle, and
//! unit equilateral triangles.

mod plane;

use std::fmt;

use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};

pub use plane::{Plane, Step, MAX_PLANE_ORDER};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("points belong to different fields")]
    MixedFields,
    #[error("points are not at distance 1")]
    NotUnitPair,
    #[error("s must be a nonzero square root of 3")]
    InvalidS,
    #[error("q = {0} is too large for indexed plane enumeration")]
    PlaneTooLarge(u64),
    #[error("point index {index} is outside [0, {count})")]
    IndexOutOfRange { index: u64, count: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A point of F_q^2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub x1: FieldElement,
    pub x2: FieldElement,
}

impl Point {
    pub fn new(x1: FieldElement, x2: FieldElement) -> Result<Point, GeometryError> {
        if x1.field() != x2.field() {
            return Err(GeometryError::MixedFields);
        }
        Ok(Point { x1, x2 })
    }

    pub fn origin(field: &FieldSpec) -> Point {
        Point {
            x1: field.zero(),
            x2: field.zero(),
        }
    }

    /// Point from its canonical index `enc(x1) * q + enc(x2)`.
    pub fn from_index(field: &FieldSpec, index: u64) -> Result<Point, GeometryError> {
        let q = field.q();
        if index >= q * q {
            return Err(GeometryError::IndexOutOfRange {
                index,
                count: q * q,
            });
        }
        Ok(Point {
            x1: field.decode(index / q)?,
            x2: field.decode(index % q)?,
        })
    }

    pub fn index(&self) -> u64 {
        self.x1.encode() * self.x1.field().q() + self.x2.encode()
    }

    pub fn field(&self) -> &FieldSpec {
        self.x1.field()
    }

    fn check(&self, other: &Point) -> Result<(), GeometryError> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(GeometryError::MixedFields)
        }
    }

    pub fn add(&self, other: &Point) -> Result<Point, GeometryError> {
        self.check(other)?;
        Ok(Point {
            x1: &self.x1 + &other.x1,
            x2: &self.x2 + &other.x2,
        })
    }

    pub fn sub(&self, other: &Point) -> Result<Point, GeometryError> {
        self.check(other)?;
        Ok(Point {
            x1: &self.x1 - &other.x1,
            x2: &self.x2 - &other.x2,
        })
    }

    pub fn neg(&self) -> Point {
        Point {
            x1: self.x1.neg(),
            x2: self.x2.neg(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Point {
        Point {
            x1: c * &self.x1,
            x2: c * &self.x2,
        }
    }

    /// The quarter-turn (a, b) -> (-b, a).
    pub fn quarter_turn(&self) -> Point {
        Point {
            x1: self.x2.neg(),
            x2: self.x1.clone(),
        }
    }

    /// x1^2 + x2^2.
    pub fn norm(&self) -> FieldElement {
        &self.x1.square() + &self.x2.square()
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

/// d(x, y) = (x1 - y1)^2 + (x2 - y2)^2.
pub fn distance(x: &Point, y: &Point) -> Result<FieldElement, GeometryError> {
    Ok(x.sub(y)?.norm())
}

/// The solutions of v1^2 + v2^2 = 1, in canonical index order.
#[derive(Clone, Debug)]
pub struct UnitCircle {
    field: FieldSpec,
    vectors: Vec<Point>,
}

impl UnitCircle {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn vectors(&self) -> &[Point] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Builds the unit circle with one square root per abscissa.
pub fn unit_circle(field: &FieldSpec) -> UnitCircle {
    let one = field.one();
    let mut vectors = Vec::with_capacity(field.q() as usize + 1);
    for x1 in field.elements() {
        let rhs = &one - &x1.square();
        if let Some(roots) = rhs.sqrt() {
            let double = roots.is_double();
            vectors.push(Point {
                x1: x1.clone(),
                x2: roots.low,
            });
            if !double {
                vectors.push(Point { x1, x2: roots.high });
            }
        }
    }
    UnitCircle {
        field: field.clone(),
        vectors,
    }
}

/// |{(x, y) : d(x, y) = 1}| = q^2 * |circle|, counted as ordered pairs.
pub fn count_unit_pairs(field: &FieldSpec) -> u64 {
    field.q() * field.q() * unit_circle(field).len() as u64
}

/// The square root of 3 with the smaller encoding, if 3 is a square.
pub fn sqrt3(field: &FieldSpec) -> Option<FieldElement> {
    field.from_int(3).sqrt().map(|r| r.low)
}

pub fn triangles_exist(field: &FieldSpec) -> bool {
    sqrt3(field).is_some()
}

/// The two points completing the unit pair (x, y) to unit equilateral triangles.
///
/// With v = y - x and m = (x + y)/2 the apexes are m +- (s/2)·R v, where R is
/// the quarter-turn. Since <v, Rv> = 0 the cross terms vanish and
/// N(apex - x) = (1 + s^2)/4 · N(v) = 1.
pub fn apexes(x: &Point, y: &Point, s: &FieldElement) -> Result<(Point, Point), GeometryError> {
    x.check(y)?;
    let field = x.field();
    if s.field() != field {
        return Err(GeometryError::MixedFields);
    }
    if s.is_zero() || s.square() != field.from_int(3) {
        return Err(GeometryError::InvalidS);
    }
    let v = y.sub(x)?;
    if !v.norm().is_one() {
        return Err(GeometryError::NotUnitPair);
    }
    let half = field.from_int(2).inv()?;
    let mid = x.add(y)?.scale(&half);
    let offset = v.quarter_turn().scale(&(s * &half));
    Ok((mid.add(&offset)?, mid.sub(&offset)?))
}

/// A unit equilateral triangle, stored as its sorted canonical point indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangle([u32; 3]);

impl Triangle {
    pub fn from_indices(mut v: [u32; 3]) -> Triangle {
        v.sort_unstable();
        Triangle(v)
    }

    pub fn indices(&self) -> [u32; 3] {
        self.0
    }

    pub fn points(&self, field: &FieldSpec) -> [Point; 3] {
        self.0
            .map(|i| Point::from_index(field, i as u64).expect("triangle index within the plane"))
    }

    /// Recomputes all three distances from scratch.
    pub fn verify(&self, field: &FieldSpec) -> bool {
        let [a, b, c] = self.points(field);
        let distinct = self.0[0] < self.0[1] && self.0[1] < self.0[2];
        distinct
            && [(&a, &b), (&b, &c), (&a, &c)]
                .iter()
                .all(|(x, y)| distance(x, y).is_ok_and(|d| d.is_one()))
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.0[0], self.0[1], self.0[2])
    }
}

/// Every unit equilateral triangle of F_q^2 in canonical order.
pub fn enumerate_triangles(field: &FieldSpec) -> Result<Vec<Triangle>, GeometryError> {
    Ok(Plane::new(field)?.triangles().collect())
}

pub fn count_triangles(field: &FieldSpec) -> Result<u64, GeometryError> {
    Ok(Plane::new(field)?.count_triangles())
}
