use core::ops::ControlFlow;

use alloc::vec;

/// Visits every `arity`-tuple of indices below `cur` that has at least one
/// index in `old..cur`, each exactly once.
///
/// The tuples are split by the first position holding a frontier index:
/// positions before it range over `0..old`, the position itself over
/// `old..cur`, and later positions over `0..cur`.
pub(crate) fn for_each_frontier_tuple<B>(
    arity: usize,
    old: usize,
    cur: usize,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if old >= cur || arity == 0 {
        return ControlFlow::Continue(());
    }
    let mut idx = vec![0usize; arity];
    let mut lo = vec![0usize; arity];
    let mut hi = vec![0usize; arity];
    for p in 0..arity {
        if p > 0 && old == 0 {
            break;
        }
        for q in 0..arity {
            let (l, h) = match q.cmp(&p) {
                core::cmp::Ordering::Less => (0, old),
                core::cmp::Ordering::Equal => (old, cur),
                core::cmp::Ordering::Greater => (0, cur),
            };
            lo[q] = l;
            hi[q] = h;
            idx[q] = l;
        }
        'tuples: loop {
            visit(&idx)?;
            let mut q = arity;
            while q > 0 {
                q -= 1;
                idx[q] += 1;
                if idx[q] < hi[q] {
                    continue 'tuples;
                }
                idx[q] = lo[q];
            }
            break;
        }
    }
    ControlFlow::Continue(())
}
