//! Data-parallel helpers. With the `parallel` feature the loops run on the
//! rayon pool; without it they run sequentially. Results are identical either
//! way: every helper preserves index order and reductions are performed in a
//! fixed order over fixed-size chunks.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Whether the crate was built with the rayon backend.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

/// `(0..len).map(f).collect()`.
pub fn map_range<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Calls `f(chunk_index, chunk)` for consecutive chunks of `chunk` elements.
pub fn for_each_chunk_mut<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    let chunk = chunk.max(1);
    #[cfg(feature = "parallel")]
    {
        data.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, c)| f(i, c));
    }
    #[cfg(not(feature = "parallel"))]
    {
        data.chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, c)| f(i, c));
    }
}

/// Sums `f(t)` over `t in 0..len` for vector-valued `f`, in fixed blocks of
/// `block` indices. The block partials are combined left to right so the
/// result does not depend on the thread count.
pub fn blocked_vector_sum<F>(len: usize, width: usize, block: usize, f: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    let block = block.max(1);
    let blocks = len.div_ceil(block);
    let partials = map_range(blocks, |b| {
        let mut acc = vec![0.0; width];
        for t in b * block..((b + 1) * block).min(len) {
            f(t, &mut acc);
        }
        acc
    });
    let mut total = vec![0.0; width];
    for p in partials {
        for (a, v) in total.iter_mut().zip(p) {
            *a += v;
        }
    }
    total
}
