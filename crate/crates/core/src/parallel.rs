//! Order-preserving maps over instance lists.
//!
//! With the `parallel` feature (on by default) the work is spread over the
//! rayon thread pool; without it everything runs on the calling thread. Both
//! return results in input order, so downstream aggregation is identical.

/// Applies `f` to every item with its index, in parallel when available.
pub fn map_indexed<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_indexed_sequential(items, f)
    }
}

/// Sequential counterpart of [`map_indexed`].
pub fn map_indexed_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(usize, &T) -> R,
{
    items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
}

/// Whether [`map_indexed`] runs in parallel in this build.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..1000).collect();
        let a = map_indexed(&items, |i, &x| x * x + i as u64);
        let b = map_indexed_sequential(&items, |i, &x| x * x + i as u64);
        assert_eq!(a, b);
    }
}
