//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the default mode fans out over rayon; without
//! it everything runs on the calling thread. The mode can also be chosen per
//! call, which is what the benches compare.

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    Parallel,
}

impl Mode {
    pub fn default_mode() -> Mode {
        if cfg!(feature = "parallel") {
            Mode::Parallel
        } else {
            Mode::Sequential
        }
    }
}

impl Default for Mode {
    fn default() -> Mode {
        Mode::default_mode()
    }
}

const CHUNK: usize = 2048;

pub fn map<T, R, F>(mode: Mode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        Mode::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

pub fn map_range<R, F>(mode: Mode, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        Mode::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Histogram of `f(i)` over `0..n` into `width` buckets, summed chunk by chunk.
pub fn counts<F>(mode: Mode, n: usize, width: usize, f: F) -> Result<Vec<i64>>
where
    F: Fn(usize) -> Result<usize> + Sync + Send,
{
    let chunks = n.div_ceil(CHUNK);
    let parts = map_range(mode, chunks, |c| -> Result<Vec<i64>> {
        let mut v = vec![0i64; width];
        for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
            v[f(i)?] += 1;
        }
        Ok(v)
    });
    let mut total = vec![0i64; width];
    for part in parts {
        for (t, x) in total.iter_mut().zip(part?) {
            *t += x;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let f = |i: usize| Ok((i * i + 3) % 7);
        let a = counts(Mode::Sequential, 10_000, 7, f).unwrap();
        let b = counts(Mode::Parallel, 10_000, 7, f).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().sum::<i64>(), 10_000);
        let xs: Vec<u64> = (0..100).collect();
        assert_eq!(map(Mode::Sequential, &xs, |x| x * 2), map(Mode::Parallel, &xs, |x| x * 2));
    }

    #[test]
    fn errors_propagate() {
        let r = counts(Mode::Parallel, 5000, 2, |i| {
            if i == 4321 {
                Err(crate::Error::new(crate::ErrorKind::Search, "par", "boom"))
            } else {
                Ok(0)
            }
        });
        assert!(r.is_err());
    }
}
