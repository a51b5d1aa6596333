//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) these fan out over rayon; without it
//! they run sequentially. Results are merged in index order either way, so
//! output is identical across both paths. The `*_seq` variants are always
//! available for benchmarking the two paths against each other.

pub fn map_indexed_seq<R: Send>(n: usize, f: impl Fn(usize) -> R + Sync + Send) -> Vec<R> {
    (0..n).map(f).collect()
}

/// First `Some` in index order, short-circuiting; errors propagate.
pub fn find_first_seq<X: Send, E: Send>(
    n: usize,
    f: impl Fn(usize) -> Result<Option<X>, E> + Sync + Send,
) -> Result<Option<X>, E> {
    for i in 0..n {
        if let Some(x) = f(i)? {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

#[cfg(feature = "parallel")]
pub fn map_indexed_par<R: Send>(n: usize, f: impl Fn(usize) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn find_first_par<X: Send, E: Send>(
    n: usize,
    f: impl Fn(usize) -> Result<Option<X>, E> + Sync + Send,
) -> Result<Option<X>, E> {
    use rayon::prelude::*;
    let hit = (0..n)
        .into_par_iter()
        .map(&f)
        .find_first(|r| !matches!(r, Ok(None)));
    match hit {
        None => Ok(None),
        Some(r) => r,
    }
}

#[cfg(feature = "parallel")]
pub fn map_indexed<R: Send>(n: usize, f: impl Fn(usize) -> R + Sync + Send) -> Vec<R> {
    map_indexed_par(n, f)
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<R: Send>(n: usize, f: impl Fn(usize) -> R + Sync + Send) -> Vec<R> {
    map_indexed_seq(n, f)
}

#[cfg(feature = "parallel")]
pub fn find_first<X: Send, E: Send>(
    n: usize,
    f: impl Fn(usize) -> Result<Option<X>, E> + Sync + Send,
) -> Result<Option<X>, E> {
    find_first_par(n, f)
}

#[cfg(not(feature = "parallel"))]
pub fn find_first<X: Send, E: Send>(
    n: usize,
    f: impl Fn(usize) -> Result<Option<X>, E> + Sync + Send,
) -> Result<Option<X>, E> {
    find_first_seq(n, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn find_first_is_ordered() {
        let r: Result<Option<usize>, ()> =
            find_first(100, |i| Ok(if i % 7 == 3 { Some(i) } else { None }));
        assert_eq!(r, Ok(Some(3)));
    }

    #[test]
    fn map_matches_seq() {
        let a = map_indexed(50, |i| i * i);
        let b = map_indexed_seq(50, |i| i * i);
        assert_eq!(a, b);
    }
}
