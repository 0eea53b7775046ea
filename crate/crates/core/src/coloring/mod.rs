//! Colorings of a ground set `[0, s)`, fairness, and refinement.
//!
//! Class lists are always kept in non-increasing size order, ties broken by
//! ascending color id. "The two smallest classes" therefore always means the
//! last two entries of [`Coloring::classes`].

mod coarsen;
mod greedy;

use std::collections::HashMap;

use num_rational::Ratio;
use thiserror::Error;

pub use coarsen::{coarsen, CoarsenBranch, CoarsenTrace, Group};
pub use greedy::{greedy_fairify, Merge};

/// Exact rational used for all thresholds.
pub type Rational = Ratio<u64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("coloring has no elements")]
    EmptyColoring,
    #[error("colorings are over different ground sets ({0} vs {1})")]
    GroundSetMismatch(usize, usize),
    #[error("element {0} is assigned more than once")]
    DuplicateElement(u32),
    #[error("element {0} has no color")]
    MissingElement(u32),
    #[error("element {element} is outside the ground set of size {size}")]
    ElementOutOfRange { element: u32, size: usize },
    #[error("u must be positive")]
    NonpositiveU,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorClass {
    pub color: u32,
    /// Sorted ascending.
    pub members: Vec<u32>,
}

impl ColorClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// A total assignment of color ids to the elements `0..s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    assignment: Vec<u32>,
    classes: Vec<ColorClass>,
}

impl Coloring {
    pub fn from_assignment(assignment: Vec<u32>) -> Result<Coloring, ColoringError> {
        if assignment.is_empty() {
            return Err(ColoringError::EmptyColoring);
        }
        let mut by_color: HashMap<u32, Vec<u32>> = HashMap::new();
        for (i, &c) in assignment.iter().enumerate() {
            by_color.entry(c).or_default().push(i as u32);
        }
        let mut classes: Vec<ColorClass> = by_color
            .into_iter()
            .map(|(color, members)| ColorClass { color, members })
            .collect();
        classes.sort_by(|a, b| b.size().cmp(&a.size()).then(a.color.cmp(&b.color)));
        Ok(Coloring {
            assignment,
            classes,
        })
    }

    /// Builds a coloring from explicit classes; class `i` gets color id `i`.
    pub fn from_partition(
        ground_size: usize,
        classes: &[Vec<u32>],
    ) -> Result<Coloring, ColoringError> {
        const UNSET: u32 = u32::MAX;
        let mut assignment = vec![UNSET; ground_size];
        for (color, class) in classes.iter().enumerate() {
            for &e in class {
                let slot =
                    assignment
                        .get_mut(e as usize)
                        .ok_or(ColoringError::ElementOutOfRange {
                            element: e,
                            size: ground_size,
                        })?;
                if *slot != UNSET {
                    return Err(ColoringError::DuplicateElement(e));
                }
                *slot = color as u32;
            }
        }
        if let Some(missing) = assignment.iter().position(|&c| c == UNSET) {
            return Err(ColoringError::MissingElement(missing as u32));
        }
        Coloring::from_assignment(assignment)
    }

    pub fn ground_size(&self) -> usize {
        self.assignment.len()
    }

    pub fn color_of(&self, element: u32) -> u32 {
        self.assignment[element as usize]
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    pub fn classes(&self) -> &[ColorClass] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn max_class_size(&self) -> usize {
        self.classes[0].size()
    }

    pub fn min_class_size(&self) -> usize {
        self.classes.last().map_or(0, ColorClass::size)
    }

    /// Applies `relabel` to every element's color.
    pub(crate) fn recolor(&self, relabel: impl Fn(u32) -> u32) -> Coloring {
        Coloring::from_assignment(self.assignment.iter().map(|&c| relabel(c)).collect())
            .expect("recoloring keeps the ground set")
    }
}

/// Non-increasing class sizes.
pub fn class_size_profile(c: &Coloring) -> Vec<usize> {
    c.classes.iter().map(ColorClass::size).collect()
}

/// Fairness bounds: every class size must lie in `[lower·n, upper·n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FairnessParams {
    pub lower: Rational,
    pub upper: Rational,
    pub n: Rational,
}

impl FairnessParams {
    /// Defaults (0.1, 10) with the reference size n = s/k.
    pub fn for_coloring(c: &Coloring) -> FairnessParams {
        FairnessParams::with_reference(Rational::new(
            c.ground_size() as u64,
            c.class_count() as u64,
        ))
    }

    pub fn with_reference(n: Rational) -> FairnessParams {
        FairnessParams {
            lower: Rational::new(1, 10),
            upper: Rational::from_integer(10),
            n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fairness {
    pub fair: bool,
    /// The smallest class outside the bounds, as (color, size).
    pub witness: Option<(u32, usize)>,
}

pub fn is_fair(c: &Coloring, params: &FairnessParams) -> Fairness {
    let lo = params.lower * params.n;
    let hi = params.upper * params.n;
    let witness = c
        .classes
        .iter()
        .rev()
        .find(|cls| {
            let size = Rational::from_integer(cls.size() as u64);
            size < lo || size > hi
        })
        .map(|cls| (cls.color, cls.size()));
    Fairness {
        fair: witness.is_none(),
        witness,
    }
}

/// True iff every class of `fine` lies inside a single class of `coarse`.
pub fn refines(fine: &Coloring, coarse: &Coloring) -> Result<bool, ColoringError> {
    if fine.ground_size() != coarse.ground_size() {
        return Err(ColoringError::GroundSetMismatch(
            fine.ground_size(),
            coarse.ground_size(),
        ));
    }
    Ok(fine.classes.iter().all(|cls| {
        let target = coarse.color_of(cls.members[0]);
        cls.members.iter().all(|&e| coarse.color_of(e) == target)
    }))
}
