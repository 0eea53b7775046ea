//! Index-level view of F_q^2 used by the enumeration hot loops.
//!
//! Points are `u32` canonical indices. Every unit step and both apex offsets
//! are precomputed once with exact field arithmetic, after which walking the
//! plane only needs coordinate-wise addition of encodings.

use rayon::prelude::*;

use super::{sqrt3, unit_circle, GeometryError, Point, Triangle, UnitCircle};
use crate::field::{FieldElement, FieldSpec};

/// Largest q for which q^2 point indices fit in a `u32`.
pub const MAX_PLANE_ORDER: u64 = 65_535;

/// A translation vector given by the encodings of its two coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub d1: u32,
    pub d2: u32,
}

impl Step {
    fn of(v: &Point) -> Step {
        Step {
            d1: v.x1.encode() as u32,
            d2: v.x2.encode() as u32,
        }
    }
}

pub struct Plane {
    field: FieldSpec,
    q: u32,
    p: u32,
    k: u32,
    circle: UnitCircle,
    steps: Vec<Step>,
    sqrt3: Option<FieldElement>,
    // For step v, x + leading[i] completes (x, x + v) to a triangle whose
    // vertices run x -> x + v -> apex in the same rotational sense;
    // trailing[i] is the other apex.
    leading: Vec<Step>,
    trailing: Vec<Step>,
}

impl Plane {
    pub fn new(field: &FieldSpec) -> Result<Plane, GeometryError> {
        if field.q() > MAX_PLANE_ORDER {
            return Err(GeometryError::PlaneTooLarge(field.q()));
        }
        let circle = unit_circle(field);
        let steps: Vec<Step> = circle.vectors().iter().map(Step::of).collect();
        let s = sqrt3(field);
        let (leading, trailing) = match &s {
            Some(s) => {
                let half = field.from_int(2).inv()?;
                let turn = s * &half;
                circle
                    .vectors()
                    .iter()
                    .map(|v| {
                        let base = v.scale(&half);
                        let off = v.quarter_turn().scale(&turn);
                        (
                            Step::of(&base.add(&off).unwrap()),
                            Step::of(&base.sub(&off).unwrap()),
                        )
                    })
                    .unzip()
            }
            None => (Vec::new(), Vec::new()),
        };
        Ok(Plane {
            field: field.clone(),
            q: field.q() as u32,
            p: field.p() as u32,
            k: field.k(),
            circle,
            steps,
            sqrt3: s,
            leading,
            trailing,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn point_count(&self) -> u32 {
        self.q * self.q
    }

    pub fn circle(&self) -> &UnitCircle {
        &self.circle
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn sqrt3(&self) -> Option<&FieldElement> {
        self.sqrt3.as_ref()
    }

    pub fn has_triangles(&self) -> bool {
        self.sqrt3.is_some()
    }

    #[inline]
    fn add_coord(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else {
            let (mut a, mut b) = (a, b);
            let mut out = 0;
            let mut place = 1;
            for _ in 0..self.k {
                let mut d = a % self.p + b % self.p;
                if d >= self.p {
                    d -= self.p;
                }
                out += d * place;
                place *= self.p;
                a /= self.p;
                b /= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn translate(&self, index: u32, step: Step) -> u32 {
        let (a1, a2) = (index / self.q, index % self.q);
        self.add_coord(a1, step.d1) * self.q + self.add_coord(a2, step.d2)
    }

    /// Unit neighbours of a point, in circle order.
    pub fn neighbors(&self, index: u32) -> impl Iterator<Item = u32> + '_ {
        self.steps.iter().map(move |&s| self.translate(index, s))
    }

    /// Both apexes of the unit pair (x, x + steps[i]).
    #[inline]
    pub fn apexes_of(&self, index: u32, step: usize) -> Option<(u32, u32)> {
        if !self.has_triangles() {
            return None;
        }
        Some((
            self.translate(index, self.leading[step]),
            self.translate(index, self.trailing[step]),
        ))
    }

    /// Calls `visit(y, c)` for every triangle {base, y, c} whose smallest index is `base`.
    ///
    /// Each triangle, traversed in its positive rotational sense, arises from
    /// exactly three (vertex, step) pairs; keeping only the one whose start is
    /// the minimum vertex visits it once.
    #[inline]
    pub fn for_each_triangle_at(&self, base: u32, mut visit: impl FnMut(u32, u32)) {
        for (&step, &lead) in self.steps.iter().zip(&self.leading) {
            let y = self.translate(base, step);
            if y < base {
                continue;
            }
            let c = self.translate(base, lead);
            if c > base {
                visit(y, c);
            }
        }
    }

    /// Triangles whose smallest vertex is `base`, sorted.
    pub fn triangles_at(&self, base: u32) -> Vec<Triangle> {
        let mut out = Vec::new();
        self.for_each_triangle_at(base, |y, c| out.push(Triangle::from_indices([base, y, c])));
        out.sort_unstable();
        out
    }

    /// All triangles in canonical (lexicographic) order, lazily.
    pub fn triangles(&self) -> impl Iterator<Item = Triangle> + '_ {
        (0..self.point_count()).flat_map(move |b| self.triangles_at(b))
    }

    /// Triangle count; work is split across the current rayon pool by base point.
    pub fn count_triangles(&self) -> u64 {
        if !self.has_triangles() {
            return 0;
        }
        (0..self.point_count())
            .into_par_iter()
            .map(|b| {
                let mut n = 0u64;
                self.for_each_triangle_at(b, |_, _| n += 1);
                n
            })
            .sum()
    }

    /// Unordered unit pairs, q^2 |C| / 2.
    pub fn unordered_unit_pairs(&self) -> u64 {
        self.point_count() as u64 * self.steps.len() as u64 / 2
    }

    pub fn point(&self, index: u32) -> Point {
        Point::from_index(&self.field, index as u64).expect("index within the plane")
    }
}
