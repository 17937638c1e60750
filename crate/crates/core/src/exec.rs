//! Batch execution strategy.
//!
//! Seeded instance sweeps, lattice cells and path slices are independent, so
//! they are mapped through [`map_indexed`]. With the `parallel` feature the
//! work is spread over the rayon pool; without it (or with
//! [`Strategy::Sequential`]) items run in order on the calling thread. Output
//! order is always the input order, so results are identical either way.

/// How a batch of independent items is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

impl Strategy {
    /// `Parallel` when the crate was built with rayon, `Sequential` otherwise.
    pub fn available() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

/// Applies `f` to `0..count`, collecting results in index order.
pub fn map_indexed<T, F>(strategy: Strategy, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Send + Sync,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(f).collect()
        }
        _ => (0..count).map(f).collect(),
    }
}

/// Applies `f` to every element of `items`, collecting results in order.
pub fn map_slice<I, T, F>(strategy: Strategy, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Send + Sync,
{
    map_indexed(strategy, items.len(), |i| f(&items[i]))
}

/// Runs `f` inside a dedicated pool of `threads` workers when parallelism is
/// compiled in; otherwise just runs `f`.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            return pool.install(f);
        }
    }
    let _ = threads;
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_and_preserve_order() {
        let seq = map_indexed(Strategy::Sequential, 100, |i| i * i);
        let par = map_indexed(Strategy::Parallel, 100, |i| i * i);
        assert_eq!(seq, par);
        assert_eq!(seq[7], 49);
    }

    #[test]
    fn map_slice_keeps_input_order() {
        let items = vec![3.0_f64, 1.0, 2.0];
        assert_eq!(map_slice(Strategy::available(), &items, |x| x * 2.0), vec![6.0, 2.0, 4.0]);
    }
}
