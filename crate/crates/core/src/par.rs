//! Data-parallel helpers.
//!
//! With the `parallel` feature these run on the rayon global pool; without it
//! they are plain sequential loops. Outputs are always in index order, and
//! reductions are done sequentially over that order, so floating-point results
//! are identical for every thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `(0..n).map(f).collect()`, possibly in parallel.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// `items.iter().map(f).collect()`, possibly in parallel.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

pub fn sort_floats(values: &mut [f64]) {
    #[cfg(feature = "parallel")]
    values.par_sort_unstable_by(f64::total_cmp);
    #[cfg(not(feature = "parallel"))]
    values.sort_unstable_by(f64::total_cmp);
}

/// Whether this build runs the helpers on rayon.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let v = map_indexed(1000, |i| i * i);
        assert!(v.iter().enumerate().all(|(i, &x)| x == i * i));
        let w = map_slice(&v, |&x| x + 1);
        assert_eq!(w[10], 101);
    }

    #[test]
    fn sort_handles_negative_zero() {
        let mut v = vec![3.0, -0.0, 0.0, -1.0];
        sort_floats(&mut v);
        assert_eq!(v[0], -1.0);
        assert_eq!(v[3], 3.0);
    }
}
