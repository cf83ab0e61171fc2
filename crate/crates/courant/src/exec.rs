//! Execution strategy for independent verification instances.
//!
//! Checks fan out over many independent identity instances; with the
//! `parallel` feature (on by default) they run on the rayon pool, and
//! [`run_sequential`] forces serial execution within a scope so the two modes
//! can be compared. Results are order-preserving either way, so reports do
//! not depend on the execution mode.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use std::cell::Cell;

thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Run `f` with data parallelism disabled on the current thread.
pub fn run_sequential<T>(f: impl FnOnce() -> T) -> T {
    FORCE_SEQUENTIAL.with(|c| {
        let prev = c.replace(true);
        let out = f();
        c.set(prev);
        out
    })
}

/// True when [`run_sequential`] is active on this thread.
pub fn sequential_forced() -> bool {
    FORCE_SEQUENTIAL.with(|c| c.get())
}

/// Map `f` over `items`, preserving order.
pub fn map_ordered<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> O + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if !sequential_forced() {
            return items.par_iter().map(&f).collect();
        }
    }
    items.iter().map(f).collect()
}
