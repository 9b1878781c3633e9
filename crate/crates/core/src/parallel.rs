//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) [`Strategy::Parallel`] fans work
//! out over the rayon pool; without it every strategy runs sequentially.
//! Results are always returned in input order, so the two strategies are
//! interchangeable bit for bit.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

impl Strategy {
    /// Whether this build can actually run work concurrently.
    pub fn available() -> bool {
        cfg!(feature = "parallel")
    }
}

pub fn map<T, R, F>(items: &[T], strategy: Strategy, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

pub fn for_each_mut<T, F>(items: &mut [T], strategy: Strategy, f: F)
where
    T: Send,
    F: Fn(&mut T) + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => items.par_iter_mut().for_each(f),
        _ => items.iter_mut().for_each(f),
    }
}

/// Runs `f` on a dedicated pool of `threads` workers (0 = rayon default).
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        if threads > 0 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                return pool.install(f);
            }
        }
    }
    let _ = threads;
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_in_order() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = map(&xs, Strategy::Sequential, |x| x * x);
        let b = map(&xs, Strategy::Parallel, |x| x * x);
        assert_eq!(a, b);
        let mut ys = xs.clone();
        for_each_mut(&mut ys, Strategy::Parallel, |x| *x += 1);
        assert_eq!(ys[999], 1000);
        assert_eq!(with_threads(2, || 7), 7);
    }
}
