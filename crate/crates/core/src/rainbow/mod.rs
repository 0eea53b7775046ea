//! Rainbow unit-triangle search over colorings of F_q^2.
//!
//! Colorings here are [`Coloring`]s whose ground set is the q^2 canonical point
//! indices of a [`Plane`]. All searches walk unit pairs through the plane's
//! precomputed circle and split the work by base point, so results never
//! depend on the size of the rayon pool.

mod pipeline;
mod report;

use num_rational::Ratio;
use rayon::prelude::*;
use thiserror::Error;

use crate::coloring::{Coloring, ColoringError};
use crate::geometry::{apexes, GeometryError, Plane, Triangle};

pub use pipeline::{default_u, theorem_pipeline, PipelineReport};
pub use report::{render, render_table, OutputFormat, Report};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RainbowError {
    #[error("coloring covers {got} points but the plane has {expected}")]
    IncompleteColoring { expected: usize, got: usize },
    #[error("the field has no unit equilateral triangles (3 is not a square)")]
    NoTriangles,
    #[error("color {color} has {size} points; at most 2 allowed")]
    ClassTooLarge { color: u32, size: usize },
    #[error("internal check failed: {0}")]
    InvariantViolated(&'static str),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    CountAll,
    FirstWitness,
}

/// A rainbow triangle together with the colors of its vertices (in index order).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Witness {
    pub triangle: Triangle,
    pub colors: [u32; 3],
}

impl Witness {
    fn new(triangle: Triangle, c: &Coloring) -> Witness {
        Witness {
            triangle,
            colors: triangle.indices().map(|i| c.color_of(i)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RainbowReport {
    pub mode: SearchMode,
    pub total_triangles: u64,
    /// Exact in `CountAll` mode; 0 or 1 in `FirstWitness` mode.
    pub rainbow_count: u64,
    /// The canonically least rainbow triangle.
    pub witness: Option<Witness>,
    /// Unordered same-color unit pairs (T).
    pub mono_pairs: u64,
}

pub(crate) fn check_coverage(plane: &Plane, c: &Coloring) -> Result<(), RainbowError> {
    let expected = plane.point_count() as usize;
    if c.ground_size() != expected {
        return Err(RainbowError::IncompleteColoring {
            expected,
            got: c.ground_size(),
        });
    }
    Ok(())
}

#[inline]
fn distinct3(a: u32, b: u32, c: u32) -> bool {
    a != b && b != c && a != c
}

/// Least rainbow triangle whose smallest vertex is `base`.
fn least_rainbow_at(plane: &Plane, colors: &[u32], base: u32) -> Option<Triangle> {
    let cb = colors[base as usize];
    let mut best: Option<Triangle> = None;
    plane.for_each_triangle_at(base, |y, z| {
        if distinct3(cb, colors[y as usize], colors[z as usize]) {
            let t = Triangle::from_indices([base, y, z]);
            if best.is_none_or(|b| t < b) {
                best = Some(t);
            }
        }
    });
    best
}

/// Searches the coloring for rainbow unit equilateral triangles.
pub fn find_rainbow(
    plane: &Plane,
    c: &Coloring,
    mode: SearchMode,
) -> Result<RainbowReport, RainbowError> {
    check_coverage(plane, c)?;
    let mono_pairs = mono_unit_pairs(plane, c)?;
    if !plane.has_triangles() {
        return Ok(RainbowReport {
            mode,
            total_triangles: 0,
            rainbow_count: 0,
            witness: None,
            mono_pairs,
        });
    }
    let colors = c.assignment();
    let (total_triangles, rainbow_count, least) = match mode {
        SearchMode::CountAll => (0..plane.point_count())
            .into_par_iter()
            .map(|base| {
                let cb = colors[base as usize];
                let (mut total, mut rainbow) = (0u64, 0u64);
                let mut best: Option<Triangle> = None;
                plane.for_each_triangle_at(base, |y, z| {
                    total += 1;
                    if distinct3(cb, colors[y as usize], colors[z as usize]) {
                        rainbow += 1;
                        let t = Triangle::from_indices([base, y, z]);
                        if best.is_none_or(|b| t < b) {
                            best = Some(t);
                        }
                    }
                });
                (total, rainbow, best)
            })
            .reduce(
                || (0, 0, None),
                |a, b| {
                    let best = match (a.2, b.2) {
                        (Some(x), Some(y)) => Some(x.min(y)),
                        (x, y) => x.or(y),
                    };
                    (a.0 + b.0, a.1 + b.1, best)
                },
            ),
        SearchMode::FirstWitness => {
            let least = (0..plane.point_count())
                .into_par_iter()
                .find_map_first(|base| least_rainbow_at(plane, colors, base));
            (plane.count_triangles(), least.is_some() as u64, least)
        }
    };
    Ok(RainbowReport {
        mode,
        total_triangles,
        rainbow_count,
        witness: least.map(|t| Witness::new(t, c)),
        mono_pairs,
    })
}

/// Re-checks a witness from raw data: three distinct points, pairwise
/// distance 1 (exact field arithmetic), and three distinct colors in `c`.
pub fn verify_witness(plane: &Plane, c: &Coloring, w: &Witness) -> bool {
    let idx = w.triangle.indices();
    if idx.iter().any(|&i| i >= plane.point_count())
        || c.ground_size() != plane.point_count() as usize
    {
        return false;
    }
    let colors = idx.map(|i| c.color_of(i));
    w.triangle.verify(plane.field())
        && colors == w.colors
        && distinct3(colors[0], colors[1], colors[2])
}

/// T: unordered unit-distance pairs whose endpoints share a color, summed class by class.
pub fn mono_unit_pairs(plane: &Plane, c: &Coloring) -> Result<u64, RainbowError> {
    check_coverage(plane, c)?;
    let colors = c.assignment();
    let ordered: u64 = c
        .classes()
        .par_iter()
        .map(|cls| {
            cls.members
                .iter()
                .map(|&x| {
                    plane
                        .neighbors(x)
                        .filter(|&y| colors[y as usize] == cls.color)
                        .count() as u64
                })
                .sum::<u64>()
        })
        .sum();
    Ok(ordered / 2)
}

/// Unit-distance statistics of a point set E.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetPairStats {
    pub q: u64,
    pub subset_size: u64,
    /// |{(x, y) in E x E : d(x, y) = 1}|
    pub ordered_pairs: u64,
    /// q · ordered_pairs / n^2, or 0 for the empty set.
    pub ratio: Ratio<u128>,
}

impl SubsetPairStats {
    pub fn ratio_f64(&self) -> f64 {
        *self.ratio.numer() as f64 / *self.ratio.denom() as f64
    }
}

/// Exact ordered unit-pair count inside E (duplicates in `subset` are ignored).
///
/// This samples a single set; it does not maximise over all sets of a given size.
pub fn subset_unit_pairs(plane: &Plane, subset: &[u32]) -> Result<SubsetPairStats, RainbowError> {
    let count = plane.point_count();
    let mut member = vec![false; count as usize];
    let mut n = 0u64;
    for &x in subset {
        if x >= count {
            return Err(GeometryError::IndexOutOfRange {
                index: x as u64,
                count: count as u64,
            }
            .into());
        }
        if !member[x as usize] {
            member[x as usize] = true;
            n += 1;
        }
    }
    let members: Vec<u32> = (0..count).filter(|&x| member[x as usize]).collect();
    let ordered_pairs: u64 = members
        .par_iter()
        .map(|&x| plane.neighbors(x).filter(|&y| member[y as usize]).count() as u64)
        .sum();
    let q = plane.q() as u64;
    let ratio = if n == 0 {
        Ratio::from_integer(0)
    } else {
        Ratio::new(q as u128 * ordered_pairs as u128, n as u128 * n as u128)
    };
    Ok(SubsetPairStats {
        q,
        subset_size: n,
        ordered_pairs,
        ratio,
    })
}

/// Constructive search for colorings with every class of size at most 2.
///
/// Starts from the first triangle in canonical order. If it is not rainbow,
/// two of its vertices a1, a2 share a color and the third, b, differs. The
/// triangles completing a1b and a2b on the far side, with apexes c1 and c2,
/// cannot both fail: c1 and c2 are distinct and neither can share the color of
/// a1, so at most one of them has b's color.
pub fn find_rainbow_size2(plane: &Plane, c: &Coloring) -> Result<Witness, RainbowError> {
    check_coverage(plane, c)?;
    let s = plane.sqrt3().ok_or(RainbowError::NoTriangles)?.clone();
    if let Some(cls) = c.classes().first().filter(|cls| cls.size() > 2) {
        return Err(RainbowError::ClassTooLarge {
            color: cls.color,
            size: cls.size(),
        });
    }
    let first = plane
        .triangles()
        .next()
        .ok_or(RainbowError::InvariantViolated(
            "field with sqrt(3) has no triangles",
        ))?;
    let [i, j, k] = first.indices();
    let [ci, cj, ck] = [i, j, k].map(|v| c.color_of(v));
    if distinct3(ci, cj, ck) {
        return Ok(Witness::new(first, c));
    }
    let (a1, a2, b) = if ci == cj {
        (i, j, k)
    } else if ci == ck {
        (i, k, j)
    } else {
        (j, k, i)
    };
    let color_b = c.color_of(b);
    let pb = plane.point(b);
    for (a, other) in [(a1, a2), (a2, a1)] {
        let (x, y) = apexes(&plane.point(a), &pb, &s)?;
        let far = if x.index() == other as u64 { y } else { x };
        let apex = far.index() as u32;
        if c.color_of(apex) != color_b {
            let w = Witness::new(Triangle::from_indices([a, b, apex]), c);
            debug_assert!(verify_witness(plane, c, &w));
            return Ok(w);
        }
    }
    Err(RainbowError::InvariantViolated(
        "both far apexes share the color of b",
    ))
}

/// The pigeonhole relation between T and the triangle count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub mono_pairs: u64,
    pub total_triangles: u64,
    pub rainbow_count: u64,
    pub bound_holds: bool,
}

/// With no rainbow triangle, every triangle owns a monochromatic edge and
/// every edge lies in exactly two triangles, so 2T >= #triangles.
pub fn no_rainbow_bound_check(plane: &Plane, c: &Coloring) -> Result<BoundCheck, RainbowError> {
    let r = find_rainbow(plane, c, SearchMode::CountAll)?;
    Ok(BoundCheck {
        mono_pairs: r.mono_pairs,
        total_triangles: r.total_triangles,
        rainbow_count: r.rainbow_count,
        bound_holds: r.rainbow_count > 0 || 2 * r.mono_pairs >= r.total_triangles,
    })
}
