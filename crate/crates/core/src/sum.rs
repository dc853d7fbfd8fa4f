//! Deterministic pairwise (tree) summation.
//!
//! Every brute-force sum in the crate goes through [`Pairwise`]. The reduction
//! tree depends only on the number of terms and their order, so results are
//! reproducible bit for bit, and the rounding error grows like `O(log n)`
//! instead of `O(n)`.

#[allow(unused_imports)]
use num_traits::Float as _;
use core::ops::Add;

use alloc::vec::Vec;

/// Streaming pairwise accumulator.
///
/// Terms are merged like a binary counter: two partial sums of the same
/// height are added as soon as both exist. `finish` folds the remaining
/// partial sums from the smallest upwards.
#[derive(Debug, Clone)]
pub struct Pairwise<T> {
    stack: Vec<(u32, T)>,
    count: usize,
}

impl<T: Copy + Add<Output = T> + Default> Default for Pairwise<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Copy + Add<Output = T> + Default> Pairwise<T> {
    pub fn new() -> Self {
        Pairwise {
            stack: Vec::with_capacity(64),
            count: 0,
        }
    }

    pub fn push(&mut self, value: T) {
        self.count += 1;
        let mut node = (0u32, value);
        while let Some(&(height, top)) = self.stack.last() {
            if height != node.0 {
                break;
            }
            self.stack.pop();
            node = (height + 1, top + node.1);
        }
        self.stack.push(node);
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Current total without consuming the accumulator.
    pub fn total(&self) -> T {
        let mut iter = self.stack.iter().rev();
        match iter.next() {
            None => T::default(),
            Some(&(_, first)) => iter.fold(first, |acc, &(_, v)| v + acc),
        }
    }

    pub fn finish(self) -> T {
        self.total()
    }
}

impl<T: Copy + Add<Output = T> + Default> Extend<T> for Pairwise<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for v in iter {
            self.push(v);
        }
    }
}

impl<T: Copy + Add<Output = T> + Default> FromIterator<T> for Pairwise<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Pairwise::new();
        acc.extend(iter);
        acc
    }
}

/// Pairwise sum of an iterator.
pub fn pairwise<T, I>(iter: I) -> T
where
    T: Copy + Add<Output = T> + Default,
    I: IntoIterator<Item = T>,
{
    let mut acc = Pairwise::new();
    acc.extend(iter);
    acc.finish()
}
