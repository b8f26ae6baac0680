//! Order-preserving sample maps, parallel when the `parallel` feature is on.
//!
//! Every helper collects results in input order, so output is identical
//! regardless of thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Sequential map; always available.
pub fn map_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Rayon-backed map.
#[cfg(feature = "parallel")]
pub fn map_par<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Parallel map when compiled with `parallel`, sequential otherwise.
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_par(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_seq(items, f)
    }
}

/// Fallible map; returns the first error in input order.
pub fn try_map<T, U, E, F>(items: &[T], f: F) -> Result<Vec<U>, E>
where
    T: Sync,
    U: Send,
    E: Send,
    F: Fn(&T) -> Result<U, E> + Sync + Send,
{
    map(items, f).into_iter().collect()
}

/// Execution path for the sweep helpers that take one explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Parallel when compiled with `parallel`, sequential otherwise.
    #[default]
    Auto,
}

impl Exec {
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match self {
            Exec::Sequential => map_seq(items, f),
            Exec::Auto => map(items, f),
        }
    }
}

/// `n` equispaced points covering the middle `fraction` of `[lo, hi]`.
pub fn interior_samples(lo: f64, hi: f64, n: usize, fraction: f64) -> Vec<f64> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo) * fraction;
    linspace(mid - half, mid + half, n)
}

/// `n` equispaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let xs: Vec<u64> = (0..1000).collect();
        assert_eq!(map(&xs, |x| x * x), map_seq(&xs, |x| x * x));
    }

    #[test]
    fn try_map_reports_first_error() {
        let xs = [1, 2, -3, 4, -5];
        let r: Result<Vec<i32>, i32> = try_map(&xs, |&x| if x < 0 { Err(x) } else { Ok(x) });
        assert_eq!(r, Err(-3));
    }

    #[test]
    fn interior_samples_cover_middle() {
        let s = interior_samples(0.0, 10.0, 5, 0.8);
        assert_eq!(s.len(), 5);
        assert!((s[0] - 1.0).abs() < 1e-15 && (s[4] - 9.0).abs() < 1e-15);
    }
}
