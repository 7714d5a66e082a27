//! Running independent Monte Carlo trials, in parallel when the
//! `parallel` feature is enabled.

/// How trials are scheduled. Results are identical either way because each
/// trial owns its random stream and output order is the trial order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    /// `Parallel` when the feature is compiled in, otherwise `Sequential`.
    pub fn effective(self) -> Execution {
        if cfg!(feature = "parallel") {
            self
        } else {
            Execution::Sequential
        }
    }
}

/// Evaluates `f(0), …, f(trials - 1)` and returns the results in order.
pub fn map_trials<T, F>(trials: u64, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match exec.effective() {
        Execution::Sequential => (0..trials).map(f).collect(),
        Execution::Parallel => parallel_map(trials, f),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, F>(trials: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..trials).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, F>(trials: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..trials).map(f).collect()
}

/// Like [`map_trials`] but stops at the first error.
pub fn try_map_trials<T, E, F>(trials: u64, exec: Execution, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(u64) -> Result<T, E> + Sync + Send,
{
    map_trials(trials, exec, f).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let f = |i: u64| i * i;
        assert_eq!(map_trials(100, Execution::Parallel, f), map_trials(100, Execution::Sequential, f));
    }
}
