//! Binomial coefficients and revolving-door enumeration of k-subsets.

use num_bigint::BigUint;
use num_traits::One;

/// `C(n, k)` or `None` on `u128` overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// One step of a minimal-change enumeration: `out` leaves the subset, `into` joins it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Swap {
    pub out: usize,
    pub into: usize,
}

/// Revolving-door (reflected Gray code) enumeration of the k-subsets of `{0, .., n-1}`.
///
/// The first subset is `{0, .., k-1}`; each call to [`RevolvingDoor::next_swap`] turns the
/// current subset into the next one by exchanging exactly one element, and returns `None`
/// once all `C(n, k)` subsets have been visited. This is Knuth's Algorithm R
/// (TAOCP 7.2.1.3), with the degenerate cases `k = 0`, `k = 1` and `k = n` handled
/// directly.
#[derive(Clone, Debug)]
pub struct RevolvingDoor {
    n: usize,
    t: usize,
    // c[1..=t] hold the elements in increasing order, c[t+1] = n is a sentinel
    c: Vec<usize>,
    done: bool,
}

impl RevolvingDoor {
    pub fn new(n: usize, k: usize) -> Self {
        assert!(k <= n, "k = {k} exceeds n = {n}");
        let mut c = vec![0; k + 2];
        for (j, slot) in c.iter_mut().enumerate().take(k + 1).skip(1) {
            *slot = j - 1;
        }
        c[k + 1] = n;
        RevolvingDoor {
            n,
            t: k,
            c,
            done: k == 0 || k == n,
        }
    }

    /// The current subset, ascending.
    pub fn current(&self) -> &[usize] {
        &self.c[1..=self.t]
    }

    pub fn next_swap(&mut self) -> Option<Swap> {
        if self.done {
            return None;
        }
        let t = self.t;
        let c = &mut self.c;
        if t == 1 {
            if c[1] + 1 < self.n {
                c[1] += 1;
                return Some(Swap { out: c[1] - 1, into: c[1] });
            }
            self.done = true;
            return None;
        }
        let mut j;
        let mut try_decrease;
        if t % 2 == 1 {
            if c[1] + 1 < c[2] {
                c[1] += 1;
                return Some(Swap { out: c[1] - 1, into: c[1] });
            }
            j = 2;
            try_decrease = true;
        } else {
            if c[1] > 0 {
                c[1] -= 1;
                return Some(Swap { out: c[1] + 1, into: c[1] });
            }
            j = 2;
            try_decrease = false;
        }
        loop {
            if try_decrease {
                // c[j] == c[j-1] + 1 here
                if c[j] >= j {
                    let out = c[j];
                    c[j] = c[j - 1];
                    c[j - 1] = j - 2;
                    return Some(Swap { out, into: j - 2 });
                }
                j += 1;
                if j > t {
                    self.done = true;
                    return None;
                }
            } else {
                // c[j-1] == j - 2 here
                if c[j] + 1 < c[j + 1] {
                    let out = c[j - 1];
                    c[j - 1] = c[j];
                    c[j] += 1;
                    return Some(Swap { out, into: c[j] });
                }
                j += 1;
                if j > t {
                    self.done = true;
                    return None;
                }
            }
            try_decrease = !try_decrease;
        }
    }

    /// The full move list; convenient when the same `(n, k)` sweep is replayed over many
    /// graphs.
    pub fn all_swaps(n: usize, k: usize) -> Vec<Swap> {
        let mut rd = RevolvingDoor::new(n, k);
        std::iter::from_fn(|| rd.next_swap()).collect()
    }
}
