//! Chunked map over an index range with results returned in chunk order.
//!
//! Chunk boundaries depend only on the range length, never on the worker
//! count, so any fold over the returned vector is reproducible.

use std::ops::Range;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;

const TARGET_CHUNKS: u64 = 512;

pub fn chunk_ranges(total: u64) -> Vec<Range<u64>> {
    let size = total.div_ceil(TARGET_CHUNKS).max(1);
    (0..total.div_ceil(size))
        .map(|i| i * size..((i + 1) * size).min(total))
        .collect()
}

pub fn map_chunks<T, F>(total: u64, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync,
{
    let ranges = chunk_ranges(total);
    if workers <= 1 || ranges.len() <= 1 {
        return ranges.into_iter().map(&f).collect();
    }
    let next = AtomicUsize::new(0);
    let mut slots: Vec<Option<T>> = (0..ranges.len()).map(|_| None).collect();
    thread::scope(|scope| {
        let handles: Vec<_> = (0..workers.min(ranges.len()))
            .map(|_| {
                scope.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= ranges.len() {
                            break;
                        }
                        done.push((i, f(ranges[i].clone())));
                    }
                    done
                })
            })
            .collect();
        for handle in handles {
            for (i, value) in handle.join().expect("scan worker panicked") {
                slots[i] = Some(value);
            }
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every chunk is processed"))
        .collect()
}
