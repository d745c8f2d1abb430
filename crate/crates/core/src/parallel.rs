//! Replicate fan-out. With the `parallel` feature, work is spread over a rayon
//! pool; without it every mode runs sequentially. Output order always follows
//! the input index, so results do not depend on scheduling.

/// How replicates are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon pool with `threads` workers, or rayon's default when `None`.
    #[default]
    Parallel,
    Threads(usize),
}

impl Execution {
    pub fn from_threads(threads: Option<usize>) -> Self {
        match threads {
            Some(1) => Self::Sequential,
            Some(k) => Self::Threads(k),
            None => Self::Parallel,
        }
    }
}

/// Evaluates `f(0..count)` and returns results in index order.
pub fn map_indexed<T, F>(count: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        match exec {
            Execution::Sequential => (0..count).map(f).collect(),
            Execution::Parallel => (0..count).into_par_iter().map(f).collect(),
            Execution::Threads(k) => rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .expect("thread pool")
                .install(|| (0..count).into_par_iter().map(f).collect()),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = exec;
        (0..count).map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        for exec in [
            Execution::Sequential,
            Execution::Parallel,
            Execution::Threads(3),
        ] {
            let v = map_indexed(1000, exec, |i| i * i);
            assert!(v.iter().enumerate().all(|(i, x)| *x == i * i));
        }
    }
}
