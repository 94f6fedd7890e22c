use cpd_core::search::Executor;
use rayon::prelude::*;

/// Runs search candidates on the global rayon pool. Output order matches
/// input order, so results equal those of the sequential executor.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rayon;

impl Executor for Rayon {
    fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync,
    {
        items.into_par_iter().map(&f).collect()
    }
}
