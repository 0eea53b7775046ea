use std::collections::HashMap;

use super::{Coloring, ColoringError, Rational};

/// How [`coarsen`] arrived at its output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoarsenBranch {
    /// t <= u: the input is returned as is.
    Unchanged,
    /// Packing at 10mℓ left no undersized final group.
    Clean,
    /// The last full group was re-packed at 7mℓ and the rest became one extra group.
    Leftover,
    /// As `Leftover`, but the extra group was still below 0.1mℓ and was merged
    /// into the group before it.
    FallbackMerge,
}

/// A block of consecutive input classes (in canonical order) forming one output class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    pub colors: Vec<u32>,
    pub size: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoarsenTrace {
    /// Reference class size s/t.
    pub m: Rational,
    /// t/u.
    pub ell: Rational,
    pub groups: Vec<Group>,
    pub branch: CoarsenBranch,
    pub k: usize,
}

impl CoarsenTrace {
    pub fn unit(&self) -> Rational {
        self.m * self.ell
    }

    pub fn fallback_used(&self) -> bool {
        self.branch == CoarsenBranch::FallbackMerge
    }
}

/// Greedy packing of `sizes` (already non-increasing) into consecutive runs
/// whose totals stay within `cap`. A class larger than `cap` gets a run of its own.
fn pack(sizes: &[u64], cap: Rational) -> Vec<std::ops::Range<usize>> {
    let mut runs = Vec::new();
    let mut start = 0;
    let mut total = 0u64;
    for (i, &s) in sizes.iter().enumerate() {
        if i > start && Rational::from_integer(total + s) > cap {
            runs.push(start..i);
            start = i;
            total = 0;
        }
        total += s;
    }
    if start < sizes.len() {
        runs.push(start..sizes.len());
    }
    runs
}

/// Coarsens a coloring with t classes down to roughly u/10 groups.
///
/// Classes are packed largest first into groups of total size at most 10mℓ,
/// with m = s/t and ℓ = t/u. If the final group falls under 0.1mℓ, the last
/// full group is re-packed at 7mℓ and everything after it becomes one more
/// group; should that group still be under 0.1mℓ it is merged into its
/// predecessor, which keeps every output class within [0.1mℓ, 10.1mℓ].
pub fn coarsen(c: &Coloring, u: Rational) -> Result<(Coloring, CoarsenTrace), ColoringError> {
    if c.ground_size() == 0 {
        return Err(ColoringError::EmptyColoring);
    }
    if u == Rational::from_integer(0) {
        return Err(ColoringError::NonpositiveU);
    }
    let s = c.ground_size() as u64;
    let t = c.class_count() as u64;
    let m = Rational::new(s, t);
    let ell = Rational::from_integer(t) / u;
    let unit = m * ell;

    let classes = c.classes();
    let sizes: Vec<u64> = classes.iter().map(|cls| cls.size() as u64).collect();
    let total = |r: &std::ops::Range<usize>| sizes[r.clone()].iter().sum::<u64>();
    let below_floor = |size: u64| Rational::from_integer(size) * 10 < unit;

    let (runs, branch) = if Rational::from_integer(t) <= u {
        (
            (0..classes.len()).map(|i| i..i + 1).collect(),
            CoarsenBranch::Unchanged,
        )
    } else {
        let mut runs = pack(&sizes, unit * 10);
        let last = runs.last().expect("nonempty").clone();
        if runs.len() == 1 || !below_floor(total(&last)) {
            (runs, CoarsenBranch::Clean)
        } else {
            runs.pop();
            let full = runs.pop().expect("at least two runs");
            let tail_start = full.start;
            let repacked = pack(&sizes[tail_start..], unit * 7);
            let head = repacked[0].start + tail_start..repacked[0].end + tail_start;
            let rest = head.end..sizes.len();
            if rest.is_empty() {
                runs.push(head);
                (runs, CoarsenBranch::Leftover)
            } else if below_floor(total(&rest)) {
                runs.push(head.start..rest.end);
                (runs, CoarsenBranch::FallbackMerge)
            } else {
                runs.push(head);
                runs.push(rest);
                (runs, CoarsenBranch::Leftover)
            }
        }
    };

    let groups: Vec<Group> = runs
        .iter()
        .map(|r| Group {
            colors: classes[r.clone()].iter().map(|cls| cls.color).collect(),
            size: total(r),
        })
        .collect();
    let relabel: HashMap<u32, u32> = groups
        .iter()
        .flat_map(|g| g.colors.iter().map(move |&col| (col, g.colors[0])))
        .collect();
    let out = if branch == CoarsenBranch::Unchanged {
        c.clone()
    } else {
        c.recolor(|col| relabel[&col])
    };
    let k = groups.len();
    Ok((
        out,
        CoarsenTrace {
            m,
            ell,
            groups,
            branch,
            k,
        },
    ))
}
