//! Grid construction and order-preserving batch evaluation.
//!
//! With the `parallel` feature (on by default) [`map`] fans out over rayon's
//! global pool; without it, it is the same as [`map_sequential`]. Output
//! order always follows input order, so results are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Evaluates `f` on every item, preserving order.
#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Evaluates `f` on every item, preserving order.
#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    map_sequential(items, f)
}

pub fn map_sequential<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// `points` evenly spaced values from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (end - start) / (points - 1) as f64;
            (0..points)
                .map(|i| if i == points - 1 { end } else { start + i as f64 * step })
                .collect()
        }
    }
}

/// `points` log-spaced values from `start` to `end` inclusive (both positive).
pub fn logspace(start: f64, end: f64, points: usize) -> Vec<f64> {
    let (l0, l1) = (start.log10(), end.log10());
    linspace(l0, l1, points)
        .into_iter()
        .enumerate()
        .map(|(i, e)| match i {
            0 => start,
            _ if i + 1 == points => end,
            _ => 10f64.powf(e),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_hit_their_endpoints() {
        let g = linspace(0.01, 0.99, 99);
        assert_eq!(g.len(), 99);
        assert_eq!(g[0], 0.01);
        assert_eq!(g[98], 0.99);
        assert!((g[49] - 0.5).abs() < 1e-15);

        let l = logspace(1e-3, 1e3, 60);
        assert_eq!(l[0], 1e-3);
        assert_eq!(l[59], 1e3);
        assert!(l.windows(2).all(|w| w[1] > w[0]));
        assert!(linspace(1.0, 2.0, 0).is_empty());
        assert_eq!(linspace(1.0, 2.0, 1), vec![1.0]);
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let xs = linspace(-3.0, 3.0, 1001);
        let f = |x: &f64| (x * 1.7).sin() * x.exp();
        assert_eq!(map(&xs, f), map_sequential(&xs, f));
    }
}
