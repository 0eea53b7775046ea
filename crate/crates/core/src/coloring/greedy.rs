use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap};

use super::{Coloring, ColoringError};

/// One step of [`greedy_fairify`]: the smallest class was folded into the
/// second smallest, which keeps its color id.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Merge {
    pub absorbed: u32,
    pub into: u32,
    pub absorbed_size: usize,
    pub into_size: usize,
}

/// Merges the two smallest classes until every class is at least a tenth of
/// the current largest one.
///
/// With `a` the largest class size, the loop stops as soon as all sizes lie in
/// `[a/10, 10a]` (inclusive). The input always refines the output and the
/// final max/min ratio is at most 10.
pub fn greedy_fairify(c: &Coloring) -> Result<(Coloring, Vec<Merge>), ColoringError> {
    if c.ground_size() == 0 {
        return Err(ColoringError::EmptyColoring);
    }
    // keyed so that iteration order is the canonical class order
    let mut order: BTreeSet<(Reverse<usize>, u32)> = c
        .classes()
        .iter()
        .map(|cls| (Reverse(cls.size()), cls.color))
        .collect();
    let mut parent: HashMap<u32, u32> = HashMap::new();
    let mut merges = Vec::new();

    loop {
        let largest = order.first().expect("at least one class").0 .0;
        let smallest = order.last().expect("at least one class").0 .0;
        if smallest * 10 >= largest {
            break;
        }
        let (Reverse(absorbed_size), absorbed) = order.pop_last().unwrap();
        let (Reverse(into_size), into) = order.pop_last().unwrap();
        order.insert((Reverse(absorbed_size + into_size), into));
        parent.insert(absorbed, into);
        merges.push(Merge {
            absorbed,
            into,
            absorbed_size,
            into_size,
        });
    }

    let resolve = |mut color: u32| {
        while let Some(&next) = parent.get(&color) {
            color = next;
        }
        color
    };
    Ok((c.recolor(resolve), merges))
}
