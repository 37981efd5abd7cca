//! Binomial coefficients and k-subset enumeration over sorted slices.

use alloc::vec::Vec;

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = match acc.checked_mul(u128::from(n - i)) {
            Some(v) => v / u128::from(i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Lexicographic k-combinations of index positions `0..n`.
///
/// Yields each combination as a slice of positions; the buffer is reused, so
/// use [`Combinations::advance`] in a `while let` loop.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    positions: Vec<usize>,
    started: bool,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self { n, positions: (0..k).collect(), started: false, done: k > n }
    }

    /// Step to the next combination, returning its positions.
    pub fn advance(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.positions);
        }
        let k = self.positions.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.positions[i] != i + self.n - k {
                self.positions[i] += 1;
                for j in i + 1..k {
                    self.positions[j] = self.positions[j - 1] + 1;
                }
                return Some(&self.positions);
            }
        }
        self.done = true;
        None
    }
}

/// Calls `f` with every k-subset of `items`, in lexicographic order.
///
/// `items` sorted implies every emitted subset is sorted.
pub fn for_each_subset<T: Copy>(items: &[T], k: usize, mut f: impl FnMut(&[T])) {
    let mut combos = Combinations::new(items.len(), k);
    let mut buf = Vec::with_capacity(k);
    while let Some(pos) = combos.advance() {
        buf.clear();
        buf.extend(pos.iter().map(|&p| items[p]));
        f(&buf);
    }
}

/// All k-subsets of `items` as owned vectors.
pub fn subsets<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    for_each_subset(items, k, |s| out.push(s.to_vec()));
    out
}

/// `true` when sorted `small` is a subset of sorted `large`.
pub fn is_sorted_subset<T: Ord>(small: &[T], large: &[T]) -> bool {
    let mut it = large.iter();
    'outer: for x in small {
        for y in it.by_ref() {
            match y.cmp(x) {
                core::cmp::Ordering::Less => continue,
                core::cmp::Ordering::Equal => continue 'outer,
                core::cmp::Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

/// Size of the union of two sorted, duplicate-free slices.
pub fn sorted_union_len<T: Ord>(a: &[T], b: &[T]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
        n += 1;
    }
    n + (a.len() - i) + (b.len() - j)
}

/// Sorted union of two sorted, duplicate-free slices.
pub fn sorted_union<T: Ord + Copy>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Sorted intersection of two sorted, duplicate-free slices.
pub fn sorted_intersection<T: Ord + Copy>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
