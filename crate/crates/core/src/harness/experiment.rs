use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::{generate, trial_rng, GeneratorKind, GeneratorSpec, HarnessError};
use crate::coloring::{coarsen, greedy_fairify};
use crate::field::{make_field, FieldSpec};
use crate::geometry::Plane;
use crate::rainbow::{
    default_u, subset_unit_pairs, theorem_pipeline, RainbowError, SubsetPairStats,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Task {
    Counts,
    Pipeline,
    Vinh,
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "counts" => Ok(Task::Counts),
            "pipeline" => Ok(Task::Pipeline),
            "vinh" => Ok(Task::Vinh),
            other => Err(format!(
                "unknown task `{other}` (expected counts, pipeline or vinh)"
            )),
        }
    }
}

/// One row of a sweep. Fields a task does not produce are `None` and are
/// written as empty CSV cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentRecord {
    pub q: u64,
    pub p: u64,
    pub k_field: u32,
    pub circle_size: u64,
    pub ordered_pairs: u64,
    pub triangles: u64,
    pub coloring_seed: u64,
    pub color_count: Option<u64>,
    pub pipeline_t: Option<u64>,
    pub pipeline_k: Option<u64>,
    pub rainbow_found: Option<bool>,
    pub elapsed_millis: u64,
}

pub const RECORD_COLUMNS: [&str; 12] = [
    "q",
    "p",
    "k_field",
    "circle_size",
    "ordered_pairs",
    "triangles",
    "coloring_seed",
    "color_count",
    "pipeline_t",
    "pipeline_k",
    "rainbow_found",
    "elapsed_millis",
];

fn cell<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// CSV with a header row, LF line endings. Flags are written as 0/1.
pub fn records_csv(records: &[ExperimentRecord]) -> String {
    let mut out = RECORD_COLUMNS.join(",");
    out.push('\n');
    for r in records {
        let row = [
            r.q.to_string(),
            r.p.to_string(),
            r.k_field.to_string(),
            r.circle_size.to_string(),
            r.ordered_pairs.to_string(),
            r.triangles.to_string(),
            r.coloring_seed.to_string(),
            cell(r.color_count),
            cell(r.pipeline_t),
            cell(r.pipeline_k),
            cell(r.rainbow_found.map(u8::from)),
            r.elapsed_millis.to_string(),
        ];
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Splits q = p^k with p prime, p >= 5.
fn admissible(q: u64) -> Option<(u64, u32)> {
    let p = (2..)
        .take_while(|d: &u64| d.saturating_mul(*d) <= q)
        .find(|&d| q.is_multiple_of(d))
        .unwrap_or(q);
    if p < 5 {
        return None;
    }
    let (mut rest, mut k) = (q, 0u32);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn run_cell(
    field: &FieldSpec,
    plane: &Plane,
    task: Task,
    seed: u64,
) -> Result<ExperimentRecord, HarnessError> {
    let start = Instant::now();
    let q = field.q();
    let mut record = ExperimentRecord {
        q,
        p: field.p(),
        k_field: field.k(),
        circle_size: plane.circle().len() as u64,
        ordered_pairs: q * q * plane.circle().len() as u64,
        triangles: plane.count_triangles(),
        coloring_seed: seed,
        color_count: None,
        pipeline_t: None,
        pipeline_k: None,
        rainbow_found: None,
        elapsed_millis: 0,
    };
    match task {
        Task::Counts => {}
        Task::Pipeline => {
            // q colors: the coarse stage then has room for about u/10 classes
            let spec = GeneratorSpec::new(GeneratorKind::FairRandom, q, seed);
            let c = generate(field, &spec)?;
            record.color_count = Some(c.class_count() as u64);
            match theorem_pipeline(plane, &c, None) {
                Ok(r) => {
                    record.pipeline_t = Some(r.t as u64);
                    record.pipeline_k = Some(r.k as u64);
                    record.rainbow_found = Some(r.witness.is_some());
                }
                Err(RainbowError::NoTriangles) => {
                    let (fair, _) = greedy_fairify(&c).map_err(RainbowError::from)?;
                    let (coarse, _) = coarsen(&fair, default_u(q)).map_err(RainbowError::from)?;
                    record.pipeline_t = Some(fair.class_count() as u64);
                    record.pipeline_k = Some(coarse.class_count() as u64);
                    record.rainbow_found = Some(false);
                }
                Err(e) => return Err(e.into()),
            }
        }
        Task::Vinh => {
            // the row carries only the timing; ratios come from `vinh_experiment`
            vinh_experiment(plane, vinh_subset_size(q), 1, seed)?;
        }
    }
    record.elapsed_millis = start.elapsed().as_millis() as u64;
    Ok(record)
}

/// ⌈q^{3/2}⌉, the smallest set size at which the unit-pair bound applies.
pub fn vinh_subset_size(q: u64) -> u64 {
    let cube = q as u128 * q as u128 * q as u128;
    let mut r = (cube as f64).sqrt() as u128;
    while r * r < cube {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= cube {
        r -= 1;
    }
    r as u64
}

/// One record per (q, task), ordered by q as given and then by task.
///
/// Fields of order p^k with k > 1 use the modulus found from `seed`. Cells run
/// in parallel on the current rayon pool; everything except `elapsed_millis`
/// is a function of the inputs.
pub fn sweep(
    q_list: &[u64],
    tasks: &[Task],
    seed: u64,
) -> Result<Vec<ExperimentRecord>, HarnessError> {
    let mut tasks = tasks.to_vec();
    tasks.sort();
    tasks.dedup();
    let mut planes = Vec::new();
    for &q in q_list {
        let (p, k) = admissible(q).ok_or(HarnessError::InadmissibleField(q))?;
        let field = make_field(p, k, None, seed).map_err(|_| HarnessError::InadmissibleField(q))?;
        let plane = Plane::new(&field)?;
        planes.push((field, plane));
    }
    let cells: Vec<(usize, Task)> = (0..planes.len())
        .flat_map(|i| tasks.iter().map(move |&t| (i, t)))
        .collect();
    cells
        .par_iter()
        .map(|&(i, task)| run_cell(&planes[i].0, &planes[i].1, task, seed))
        .collect()
}

/// `trials` uniform subsets of `n` points, trial i drawn from stream i of `seed`
/// by partial Fisher–Yates over the point indices.
pub fn vinh_experiment(
    plane: &Plane,
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<Vec<SubsetPairStats>, HarnessError> {
    let points = plane.point_count() as u64;
    if n > points {
        return Err(HarnessError::SubsetTooLarge { size: n, points });
    }
    (0..trials)
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let mut indices: Vec<u32> = (0..plane.point_count()).collect();
            let (chosen, _) = indices.partial_shuffle(&mut rng, n as usize);
            Ok(subset_unit_pairs(plane, chosen)?)
        })
        .collect()
}

/// CSV of trial results: `trial,q,subset_size,ordered_pairs,ratio,ratio_decimal`.
pub fn vinh_csv(stats: &[SubsetPairStats]) -> String {
    let mut out = String::from("trial,q,subset_size,ordered_pairs,ratio,ratio_decimal\n");
    for (i, s) in stats.iter().enumerate() {
        let _ = writeln!(
            out,
            "{i},{},{},{},{}/{},{:.6}",
            s.q,
            s.subset_size,
            s.ordered_pairs,
            s.ratio.numer(),
            s.ratio.denom(),
            s.ratio_f64()
        );
    }
    out
}

/// Runs `f` on a dedicated pool of `threads` workers; 0 uses the global pool.
pub fn with_threads<T: Send>(
    threads: usize,
    f: impl FnOnce() -> T + Send,
) -> Result<T, HarnessError> {
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::ThreadPool(e.to_string()))?;
    Ok(pool.install(f))
}
