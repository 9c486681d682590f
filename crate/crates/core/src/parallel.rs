use rayon::ThreadPoolBuilder;

/// Runs `op` on a dedicated pool of `workers` threads, or on the global
/// rayon pool when `workers` is `None`.
pub(crate) fn with_workers<R, F>(workers: Option<usize>, op: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    let Some(n) = workers else {
        return op();
    };
    match ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
        Ok(pool) => pool.install(op),
        Err(_) => op(),
    }
}
