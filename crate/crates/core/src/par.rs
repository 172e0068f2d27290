//! Data-parallel helpers.
//!
//! With the `parallel` feature the `Parallel` mode runs on the rayon global
//! pool; without it every mode runs sequentially. Both paths produce
//! bit-identical results: work items are independent and results are
//! collected in input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// f(i) for i in 0..n, in order.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub fn for_each_mut<T, F>(self, items: &mut [T], f: F)
    where
        T: Send,
        F: Fn(&mut T) + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            items.par_iter_mut().for_each(f);
            return;
        }
        items.iter_mut().for_each(f)
    }

    /// Fallible variant of [`Execution::for_each_mut`]; the first error in
    /// input order wins.
    pub fn try_for_each_mut<T, E, F>(self, items: &mut [T], f: F) -> Result<(), E>
    where
        T: Send,
        E: Send,
        F: Fn(&mut T) -> Result<(), E> + Sync + Send,
    {
        let results: Vec<Result<(), E>> = {
            #[cfg(feature = "parallel")]
            {
                if self.is_parallel() {
                    items.par_iter_mut().map(&f).collect()
                } else {
                    items.iter_mut().map(&f).collect()
                }
            }
            #[cfg(not(feature = "parallel"))]
            {
                items.iter_mut().map(&f).collect()
            }
        };
        results.into_iter().collect()
    }
}
