//! Exact integer combinatorics: primes, binomials, colex ranking of
//! k-subsets, and Chinese-remainder reconstruction.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A strictly increasing list of primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct PrimeList(Vec<u64>);

impl PrimeList {
    pub fn new(values: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::invalid(format!("{bad} is not prime")));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("primes must be strictly increasing"));
        }
        Ok(PrimeList(values))
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<u64>> for PrimeList {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        PrimeList::new(v)
    }
}

impl From<PrimeList> for Vec<u64> {
    fn from(p: PrimeList) -> Self {
        p.0
    }
}

/// The `count` smallest primes strictly greater than `after`.
pub fn next_primes(after: u64, count: usize) -> Result<PrimeList> {
    if after < 2 {
        return Err(Error::invalid("next_primes needs after >= 2"));
    }
    if count == 0 {
        return Err(Error::invalid("next_primes needs count >= 1"));
    }
    let mut out = Vec::with_capacity(count);
    let mut c = after;
    while out.len() < count {
        c = c.checked_add(1).ok_or(Error::Overflow("next_primes"))?;
        if is_prime(c) {
            out.push(c);
        }
    }
    Ok(PrimeList(out))
}

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficient if it fits a `u64`.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// A k-element subset of `[1, ground_size]`, elements strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KSubset {
    ground_size: u32,
    elements: Vec<u32>,
}

impl KSubset {
    pub fn new(ground_size: u32, mut elements: Vec<u32>) -> Result<Self> {
        if ground_size == 0 {
            return Err(Error::invalid("ground size must be positive"));
        }
        elements.sort_unstable();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("subset elements must be distinct"));
        }
        if let Some(&e) = elements.iter().find(|&&e| e == 0 || e > ground_size) {
            return Err(Error::invalid(format!("element {e} outside [1, {ground_size}]")));
        }
        Ok(KSubset { ground_size, elements })
    }

    pub fn ground_size(&self) -> u32 {
        self.ground_size
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// |self ∩ other| by merging the sorted element lists.
    pub fn intersection_size(&self, other: &KSubset) -> usize {
        let (a, b) = (&self.elements, &other.elements);
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    /// Bit-mask words, element `e` at bit `e - 1`.
    pub fn to_words(&self) -> Vec<u64> {
        let mut words = vec![0u64; (self.ground_size as usize).div_ceil(64)];
        for &e in &self.elements {
            let b = (e - 1) as usize;
            words[b / 64] |= 1 << (b % 64);
        }
        words
    }

    /// Position in colexicographic order among all k-subsets of `[r]`.
    pub fn rank(&self) -> u64 {
        self.elements
            .iter()
            .enumerate()
            .map(|(i, &e)| binomial_u64(e as u64 - 1, i as u64 + 1).expect("rank fits u64"))
            .sum()
    }

    /// Inverse of [`KSubset::rank`].
    pub fn unrank(ground_size: u32, k: u32, index: u64) -> Result<Self> {
        if k > ground_size {
            return Err(Error::invalid("k exceeds ground size"));
        }
        let total = binomial_u64(ground_size as u64, k as u64).ok_or(Error::Overflow("unrank"))?;
        if index >= total {
            return Err(Error::IndexOutOfRange { index, limit: total });
        }
        let mut rest = index;
        let mut elements = vec![0u32; k as usize];
        let mut hi = ground_size as u64;
        for i in (1..=k as u64).rev() {
            // largest c < hi with C(c, i) <= rest
            let mut c = hi - 1;
            while binomial_u64(c, i).unwrap() > rest {
                c -= 1;
            }
            rest -= binomial_u64(c, i).unwrap();
            elements[i as usize - 1] = c as u32 + 1;
            hi = c;
        }
        Ok(KSubset { ground_size, elements })
    }
}

/// All k-subsets of `[r]` in colex order.
pub fn colex_subsets(ground_size: u32, k: u32) -> impl Iterator<Item = KSubset> {
    let mut current: Option<Vec<u32>> = (k <= ground_size).then(|| (1..=k).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let cur = current.as_mut().unwrap();
        let k = cur.len();
        let mut i = 0;
        loop {
            if i == k {
                current = None;
                break;
            }
            let limit = if i + 1 < k { cur[i + 1] } else { ground_size + 1 };
            if cur[i] + 1 < limit {
                cur[i] += 1;
                for (j, slot) in cur.iter_mut().enumerate().take(i) {
                    *slot = j as u32 + 1;
                }
                break;
            }
            i += 1;
        }
        Some(KSubset { ground_size, elements: out })
    })
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

/// The unique `x` in `[0, bound)` with `x ≡ residue (mod prime)` for every
/// pair, or `None` when no solution or more than one lies below `bound`.
pub fn crt_unique_below(residue_pairs: &[(u64, u64)], bound: u64) -> Option<u64> {
    let mut x: u128 = 0;
    let mut modulus: u128 = 1;
    for &(res, p) in residue_pairs {
        let res = (res % p) as u128;
        let p128 = p as u128;
        // x + modulus * t ≡ res (mod p)
        let inv = mod_inverse((modulus % p128) as u64, p)?;
        let diff = (res + p128 - x % p128) % p128;
        let t = diff * inv as u128 % p128;
        x = x.checked_add(modulus.checked_mul(t)?)?;
        modulus = modulus.checked_mul(p128)?;
    }
    let bound = bound as u128;
    (x < bound && x + modulus >= bound).then_some(x as u64)
}

/// `x^(1/k)`, exact to the last bit for square and cube roots.
pub fn kth_root(x: f64, k: u32) -> f64 {
    match k {
        1 => x,
        2 => x.sqrt(),
        3 => x.cbrt(),
        _ => x.powf(1.0 / k as f64),
    }
}
