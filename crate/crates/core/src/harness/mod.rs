//! Coloring generators, the coloring file format, and seeded experiments.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`. Work that
//! is repeated per trial uses stream number `trial` of that generator
//! ([`trial_rng`]); single-shot generators use stream 0. ChaCha8 output is
//! fully determined by the seed and stream, so every result here is reproducible across
//! platforms.

mod experiment;
mod io;

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coloring::{Coloring, ColoringError, Rational};
use crate::field::{FieldError, FieldSpec};
use crate::geometry::{distance, GeometryError, Point};

pub use experiment::{
    records_csv, sweep, vinh_csv, vinh_experiment, vinh_subset_size, with_threads,
    ExperimentRecord, Task, RECORD_COLUMNS,
};
pub use io::{load_coloring, load_coloring_for, save_coloring, write_coloring};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("color count {0} is not valid for this generator")]
    BadColorCount(u64),
    #[error("field of order {0} is too small for the degenerate example")]
    FieldTooSmall(u64),
    #[error("the degenerate example is only defined over prime fields")]
    PrimeFieldRequired,
    #[error("class cap {cap} cannot hold {points} points in {colors} classes")]
    InfeasibleCap { cap: u64, points: u64, colors: u64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    BadField { line: usize, source: FieldError },
    #[error("coloring does not cover the plane: {0}")]
    Coverage(ColoringError),
    #[error("coloring is over {found:?}, expected {expected:?}")]
    FieldMismatch {
        expected: FieldSpec,
        found: FieldSpec,
    },
    #[error("q = {0} is not an admissible field order (prime power with p >= 5)")]
    InadmissibleField(u64),
    #[error("subset of size {size} requested from {points} points")]
    SubsetTooLarge { size: u64, points: u64 },
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Rainbow(#[from] crate::rainbow::RainbowError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Generator for stream `trial` of `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    /// Each point draws a color uniformly from `0..color_count`.
    UniformRandom,
    /// `color_count` classes, every size within [0.1, 10] times q²/color_count.
    FairRandom,
    /// Random classes of one or two points.
    Max2,
    /// Distinct colors on (2i, 0) for i = 1..⌊q/2⌋, color 0 everywhere else.
    DegenerateExample,
    Monochrome,
    AllDistinct,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 6] = [
        GeneratorKind::UniformRandom,
        GeneratorKind::FairRandom,
        GeneratorKind::Max2,
        GeneratorKind::DegenerateExample,
        GeneratorKind::Monochrome,
        GeneratorKind::AllDistinct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::UniformRandom => "uniform-random",
            GeneratorKind::FairRandom => "fair-random",
            GeneratorKind::Max2 => "max2",
            GeneratorKind::DegenerateExample => "degenerate-example",
            GeneratorKind::Monochrome => "monochrome",
            GeneratorKind::AllDistinct => "all-distinct",
        }
    }
}

impl FromStr for GeneratorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GeneratorKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown generator `{s}`"))
    }
}

/// What to generate. `color_count` is read by the two random-color kinds only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub color_count: u64,
    pub seed: u64,
    /// Optional extra cap on every class of `fair-random`, as a fraction of q².
    pub max_class_fraction: Option<Rational>,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, color_count: u64, seed: u64) -> GeneratorSpec {
        GeneratorSpec {
            kind,
            color_count,
            seed,
            max_class_fraction: None,
        }
    }
}

/// Builds a coloring of the q² points of `field`. Deterministic in (field, spec).
pub fn generate(field: &FieldSpec, spec: &GeneratorSpec) -> Result<Coloring, HarnessError> {
    let q = field.q();
    let s = q
        .checked_mul(q)
        .filter(|&s| s <= u32::MAX as u64)
        .ok_or(GeometryError::PlaneTooLarge(q))?;
    let mut rng = trial_rng(spec.seed, 0);
    let assignment: Vec<u32> = match spec.kind {
        GeneratorKind::Monochrome => vec![0; s as usize],
        GeneratorKind::AllDistinct => (0..s as u32).collect(),
        GeneratorKind::UniformRandom => {
            let c = spec.color_count;
            if c == 0 || c > u32::MAX as u64 {
                return Err(HarnessError::BadColorCount(c));
            }
            (0..s).map(|_| rng.gen_range(0..c as u32)).collect()
        }
        GeneratorKind::FairRandom => fair_random(s, spec, &mut rng)?,
        GeneratorKind::Max2 => {
            let mut points: Vec<u32> = (0..s as u32).collect();
            points.shuffle(&mut rng);
            let mut assignment = vec![0u32; s as usize];
            let (mut i, mut color) = (0usize, 0u32);
            while i < points.len() {
                let take = if i + 1 < points.len() && rng.gen_bool(0.5) {
                    2
                } else {
                    1
                };
                for &x in &points[i..i + take] {
                    assignment[x as usize] = color;
                }
                i += take;
                color += 1;
            }
            assignment
        }
        GeneratorKind::DegenerateExample => degenerate_example(field)?,
    };
    Ok(Coloring::from_assignment(assignment).expect("generators cover every point"))
}

/// Class sizes drawn with integer weights in [2, 20], scaled to s, clamped into
/// the fair window and then corrected so they sum to s; points are shuffled
/// before being dealt out in blocks.
fn fair_random(
    s: u64,
    spec: &GeneratorSpec,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<u32>, HarnessError> {
    let c = spec.color_count;
    if c == 0 || c > s {
        return Err(HarnessError::BadColorCount(c));
    }
    let mean = Rational::new(s, c);
    let lo = (mean / 10).ceil().to_integer().max(1);
    let mut hi = (mean * 10).floor().to_integer();
    if let Some(f) = spec.max_class_fraction {
        hi = hi.min((f * s).floor().to_integer());
    }
    if hi * c < s || lo > hi {
        return Err(HarnessError::InfeasibleCap {
            cap: hi,
            points: s,
            colors: c,
        });
    }

    let weights: Vec<u64> = (0..c).map(|_| rng.gen_range(2..=20)).collect();
    let total: u64 = weights.iter().sum();
    let mut sizes: Vec<u64> = weights
        .iter()
        .map(|&w| ((w as u128 * s as u128 / total as u128) as u64).clamp(lo, hi))
        .collect();
    // walk round-robin adding or removing single points until the sum is exact
    let mut sum: u64 = sizes.iter().sum();
    let mut i = 0usize;
    while sum != s {
        let slot = &mut sizes[i % c as usize];
        if sum < s && *slot < hi {
            *slot += 1;
            sum += 1;
        } else if sum > s && *slot > lo {
            *slot -= 1;
            sum -= 1;
        }
        i += 1;
    }

    let mut points: Vec<u32> = (0..s as u32).collect();
    points.shuffle(rng);
    let mut assignment = vec![0u32; s as usize];
    let mut next = points.iter();
    for (color, &size) in sizes.iter().enumerate() {
        for &x in next.by_ref().take(size as usize) {
            assignment[x as usize] = color as u32;
        }
    }
    Ok(assignment)
}

fn degenerate_example(field: &FieldSpec) -> Result<Vec<u32>, HarnessError> {
    let q = field.q();
    if q < 3 {
        return Err(HarnessError::FieldTooSmall(q));
    }
    if field.k() != 1 {
        return Err(HarnessError::PrimeFieldRequired);
    }
    let mut assignment = vec![0u32; (q * q) as usize];
    let axis: Vec<Point> = (1..=q / 2)
        .map(|i| Point::new(field.from_int(2 * i as i64), field.zero()).expect("same field"))
        .collect();
    for (i, x) in axis.iter().enumerate() {
        assignment[x.index() as usize] = i as u32 + 1;
    }
    // (2(i - j))^2 = 1 has no solution with 0 < |i - j| < q/2
    for (i, x) in axis.iter().enumerate() {
        for y in &axis[i + 1..] {
            assert!(
                !distance(x, y)?.is_one(),
                "two non-blue points at unit distance"
            );
        }
    }
    Ok(assignment)
}
