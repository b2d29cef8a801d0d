//! Order-preserving map over independent runs, data-parallel when the
//! `parallel` feature is on.

use crate::BenchError;

/// How independent runs are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon pool with `jobs` threads, or rayon's default when `None`.
    #[cfg(feature = "parallel")]
    Parallel { jobs: Option<usize> },
}

// Derivable only in builds without the `parallel` feature.
#[allow(clippy::derivable_impls)]
impl Default for Execution {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Execution::Parallel { jobs: None }
        }
        #[cfg(not(feature = "parallel"))]
        {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Parallel with `jobs` threads where available; one job, or a build
    /// without the feature, runs sequentially.
    pub fn with_jobs(jobs: Option<usize>) -> Self {
        match jobs {
            Some(1) => Execution::Sequential,
            #[cfg(feature = "parallel")]
            _ => Execution::Parallel { jobs },
            #[cfg(not(feature = "parallel"))]
            _ => {
                if jobs.is_some() {
                    log::warn!("built without the `parallel` feature; running sequentially");
                }
                Execution::Sequential
            }
        }
    }

    /// `items.map(f)` with results in input order. Each call of `f` must be a
    /// pure function of its item, so both paths produce identical output.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Result<Vec<R>, BenchError>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Execution::Sequential => Ok(items.iter().map(f).collect()),
            #[cfg(feature = "parallel")]
            Execution::Parallel { jobs } => {
                use rayon::prelude::*;
                let run = || items.par_iter().map(&f).collect();
                match jobs {
                    None => Ok(run()),
                    Some(k) => rayon::ThreadPoolBuilder::new()
                        .num_threads(k)
                        .build()
                        .map(|pool| pool.install(run))
                        .map_err(|e| BenchError::Pool(e.to_string())),
                }
            }
        }
    }
}
