//! Parallel-map capability handed to the numerical modules.

use rayon::prelude::*;

/// How independent work items are evaluated. Results always come back in input order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Exec {
    Serial,
    /// Uses the ambient rayon pool (the CLI installs one sized by `--threads`).
    #[default]
    Parallel,
}

impl Exec {
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Exec::Serial => items.iter().map(f).collect(),
            Exec::Parallel => items.par_iter().map(f).collect(),
        }
    }
}
