use num_integer::Roots;

use super::{check_coverage, find_rainbow, verify_witness, RainbowError, SearchMode, Witness};
use crate::coloring::{coarsen, greedy_fairify, refines, CoarsenTrace, Coloring, Merge, Rational};
use crate::geometry::Plane;

/// Trace of fairify -> coarsen -> search.
#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub original: Coloring,
    pub fairified: Coloring,
    pub merges: Vec<Merge>,
    pub coarsened: Coloring,
    pub coarsen_trace: CoarsenTrace,
    pub t: usize,
    pub k: usize,
    pub u: Rational,
    /// Rainbow triangle found in the coarsened coloring, with its colors in
    /// the original coloring.
    pub witness: Option<Witness>,
    /// original refines fairified, and fairified refines coarsened.
    pub refinement_chain: bool,
    /// k <= 10.1·u + 1.
    pub k_within_bound: bool,
    /// Largest original class as a fraction of q^2.
    pub max_class_fraction: Rational,
    /// Fairification left fewer than three classes: one class owns so much of
    /// the plane that no later stage can produce three distinct colors.
    pub class_size_hypothesis_violated: bool,
    /// Coarsening left fewer than three classes, so the search cannot succeed.
    /// Packing at 10mℓ yields about u/10 groups, which is below three for
    /// every q under roughly 900 with the default u.
    pub too_few_coarse_classes: bool,
}

/// ⌈√q⌉.
pub fn default_u(q: u64) -> Rational {
    let r = q.sqrt();
    Rational::from_integer(if r * r == q { r } else { r + 1 })
}

/// Runs greedy fairification, coarsening with `u` (default ⌈√q⌉) and a
/// first-witness search on the coarsened coloring. Any witness is re-verified
/// against the original coloring before it is reported.
pub fn theorem_pipeline(
    plane: &Plane,
    c: &Coloring,
    u: Option<Rational>,
) -> Result<PipelineReport, RainbowError> {
    check_coverage(plane, c)?;
    if !plane.has_triangles() {
        return Err(RainbowError::NoTriangles);
    }
    let u = u.unwrap_or_else(|| default_u(plane.q() as u64));
    let (fairified, merges) = greedy_fairify(c)?;
    let t = fairified.class_count();
    let (coarsened, coarsen_trace) = coarsen(&fairified, u)?;
    let k = coarsened.class_count();

    let search = find_rainbow(plane, &coarsened, SearchMode::FirstWitness)?;
    let witness = match search.witness {
        Some(w) => {
            let lifted = Witness {
                triangle: w.triangle,
                colors: w.triangle.indices().map(|i| c.color_of(i)),
            };
            if !verify_witness(plane, c, &lifted) {
                return Err(RainbowError::InvariantViolated(
                    "coarse witness is not rainbow in the original coloring",
                ));
            }
            Some(lifted)
        }
        None => None,
    };

    let refinement_chain = refines(c, &fairified)? && refines(&fairified, &coarsened)?;
    let k_within_bound = Rational::from_integer(k as u64 * 10) <= u * 101 + 10;
    Ok(PipelineReport {
        max_class_fraction: Rational::new(c.max_class_size() as u64, c.ground_size() as u64),
        class_size_hypothesis_violated: t < 3,
        too_few_coarse_classes: k < 3,
        original: c.clone(),
        fairified,
        merges,
        coarsened,
        coarsen_trace,
        t,
        k,
        u,
        witness,
        refinement_chain,
        k_within_bound,
    })
}
