//! Worker threads for independent pieces of work. Results are always
//! reassembled in input order, so output does not depend on scheduling.

use std::num::NonZeroUsize;
use std::thread;

use coarse_lip_core::rough::{RoughSearch, SharedBound};
use coarse_lip_core::{Error, ExtReal, MapPair, MetricSpace};

pub const THREADS_VAR: &str = "COARSE_LIP_THREADS";

/// Worker count from `COARSE_LIP_THREADS`; unset, unparsable or `0` means
/// the available parallelism.
pub fn workers() -> usize {
    match std::env::var(THREADS_VAR).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        Some(n) if n > 0 => n,
        _ => thread::available_parallelism().map_or(1, NonZeroUsize::get),
    }
}

/// `f` over `items` on up to `threads` workers, results in item order.
pub fn map_ordered<T, R, F>(items: &[T], threads: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let threads = threads.clamp(1, items.len().max(1));
    if threads == 1 {
        return items.iter().map(f).collect();
    }
    let mut slots: Vec<Option<R>> = items.iter().map(|_| None).collect();
    thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                let f = &f;
                s.spawn(move || {
                    (w..items.len()).step_by(threads).map(|i| (i, f(&items[i]))).collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots.into_iter().map(|r| r.expect("every item was processed")).collect()
}

/// Exact rough distance with the search partitions spread over workers
/// sharing one incumbent bound.
pub fn rough_distance(x: &MetricSpace, y: &MetricSpace, budget: usize, threads: usize) -> Result<(ExtReal, MapPair), Error> {
    let search = RoughSearch::new(x, y, budget)?;
    let bound = SharedBound::new();
    let parts: Vec<usize> = (0..search.partitions()).collect();
    let results = map_ordered(&parts, threads, |&p| search.run_partition(p, &bound));
    Ok(RoughSearch::merge(results.into_iter().flatten()).expect("at least one map pair exists"))
}
