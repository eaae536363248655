//! Order-preserving map over independent work items.
//!
//! With the `parallel` feature (on by default) [`map`] runs on the rayon pool;
//! without it, or through [`map_sequential`], items run one after another.
//! Results always come back in input order.

pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_parallel<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_parallel(items, f)
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    map_sequential(items, f)
}

pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_order() {
        let xs: Vec<u64> = (0..200).collect();
        let want: Vec<u64> = xs.iter().map(|x| x * x).collect();
        assert_eq!(map(&xs, |x| x * x), want);
        assert_eq!(map_sequential(&xs, |x| x * x), want);
    }
}
