//! Dense univariate polynomials over a prime field `Z/p`.
//!
//! Polynomials are `Vec<u64>` with coefficients in ascending order, reduced
//! into `[0, p)` and trimmed so the last entry is nonzero. The zero
//! polynomial is the empty vector.

use rand::Rng;

use crate::arith::{inv_mod, mul_mod};

pub type Poly = Vec<u64>;

pub fn trim(f: &mut Poly) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

/// Reduce arbitrary integer coefficients into canonical form.
pub fn from_i64(coeffs: &[i64], p: u64) -> Poly {
    let mut f: Poly = coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
    trim(&mut f);
    f
}

pub fn degree(f: &[u64]) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn x() -> Poly {
    vec![0, 1]
}

pub fn add(f: &[u64], g: &[u64], p: u64) -> Poly {
    let n = f.len().max(g.len());
    let mut out: Poly = (0..n)
        .map(|i| (f.get(i).copied().unwrap_or(0) + g.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(&mut out);
    out
}

pub fn sub(f: &[u64], g: &[u64], p: u64) -> Poly {
    let n = f.len().max(g.len());
    let mut out: Poly = (0..n)
        .map(|i| (f.get(i).copied().unwrap_or(0) + p - g.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(&mut out);
    out
}

pub fn scale(f: &[u64], c: u64, p: u64) -> Poly {
    let mut out: Poly = f.iter().map(|&a| mul_mod(a, c, p)).collect();
    trim(&mut out);
    out
}

pub fn mul(f: &[u64], g: &[u64], p: u64) -> Poly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
        }
    }
    trim(&mut out);
    out
}

/// Euclidean division `f = q*g + r`. Panics if `g` is zero.
pub fn divrem(f: &[u64], g: &[u64], p: u64) -> (Poly, Poly) {
    let dg = degree(g).expect("division by the zero polynomial");
    let lead_inv = inv_mod(g[dg], p).expect("leading coefficient invertible mod p");
    let mut r = f.to_vec();
    trim(&mut r);
    if r.len() <= dg {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - dg];
    while r.len() > dg {
        let dr = r.len() - 1;
        let c = mul_mod(r[dr], lead_inv, p);
        let s = dr - dg;
        q[s] = c;
        for (j, &b) in g.iter().enumerate() {
            r[s + j] = (r[s + j] + p - mul_mod(c, b, p)) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(f: &[u64], g: &[u64], p: u64) -> Poly {
    divrem(f, g, p).1
}

pub fn monic(f: &[u64], p: u64) -> Poly {
    match f.last() {
        None => Vec::new(),
        Some(&l) => scale(f, inv_mod(l, p).expect("nonzero lead"), p),
    }
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd(f: &[u64], g: &[u64], p: u64) -> Poly {
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

/// Extended gcd: returns `(g, s, t)` with `s*f + t*h = g`, `g` monic.
pub fn ext_gcd(f: &[u64], h: &[u64], p: u64) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (f.to_vec(), h.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1): (Poly, Poly) = (vec![1], Vec::new());
    let (mut t0, mut t1): (Poly, Poly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => (Vec::new(), s0, t0),
        Some(&l) => {
            let li = inv_mod(l, p).expect("nonzero lead");
            (scale(&r0, li, p), scale(&s0, li, p), scale(&t0, li, p))
        }
    }
}

pub fn mulmod(f: &[u64], g: &[u64], m: &[u64], p: u64) -> Poly {
    rem(&mul(f, g, p), m, p)
}

/// `base^exp mod m`, `exp` given as a big-endian-agnostic u128.
pub fn powmod(base: &[u64], mut exp: u128, m: &[u64], p: u64) -> Poly {
    let mut acc: Poly = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

pub fn derivative(f: &[u64], p: u64) -> Poly {
    let mut out: Poly = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
        .collect();
    trim(&mut out);
    out
}

pub fn eval(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

/// Squarefree over `F_p`: `gcd(f, f') = 1`. A nonconstant `f` with zero
/// derivative is a `p`-th power and therefore not squarefree.
pub fn is_squarefree(f: &[u64], p: u64) -> bool {
    let d = derivative(f, p);
    if d.is_empty() {
        return degree(f) == Some(0);
    }
    gcd(f, &d, p) == vec![1]
}

/// Distinct-degree factorisation of a monic squarefree `f`.
///
/// Returns `(d, g_d)` pairs where `g_d` is the product of all irreducible
/// factors of degree `d`; only nontrivial `g_d` are listed.
pub fn distinct_degree_factorization(f: &[u64], p: u64) -> Vec<(usize, Poly)> {
    let mut out = Vec::new();
    let mut rest = monic(f, p);
    let mut h = x();
    let mut d = 0;
    while degree(&rest).is_some_and(|n| n >= 2 * (d + 1)) {
        d += 1;
        h = powmod(&h, p as u128, &rest, p);
        let g = gcd(&rest, &sub(&h, &x(), p), p);
        if g.len() > 1 {
            rest = divrem(&rest, &g, p).0;
            h = rem(&h, &rest, p);
            out.push((d, g));
        }
    }
    if let Some(n) = degree(&rest) {
        if n > 0 {
            out.push((n, rest));
        }
    }
    out
}

/// Factor degrees of a squarefree `f`, as a partition sorted descending.
pub fn factor_pattern(f: &[u64], p: u64) -> Vec<usize> {
    let mut parts = Vec::new();
    for (d, g) in distinct_degree_factorization(f, p) {
        let deg = g.len() - 1;
        parts.extend(std::iter::repeat_n(d, deg / d));
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// Irreducibility by the distinct-degree test: `f` of degree `n` is
/// irreducible iff `gcd(x^(p^d) - x, f) = 1` for every `d <= n/2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = match degree(f) {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    let f = monic(f, p);
    let mut h = x();
    for _ in 1..=n / 2 {
        h = powmod(&h, p as u128, &f, p);
        if gcd(&f, &sub(&h, &x(), p), p) != vec![1] {
            return false;
        }
    }
    true
}

/// Monic polynomial of degree `n` whose lower coefficients are the base-`p`
/// digits of `index` (least significant digit is the constant term).
pub fn monic_from_index(mut index: u128, n: usize, p: u64) -> Poly {
    let mut f = Vec::with_capacity(n + 1);
    for _ in 0..n {
        f.push((index % p as u128) as u64);
        index /= p as u128;
    }
    f.push(1);
    f
}

/// The lexicographically least monic irreducible polynomial of degree `n`:
/// the first irreducible in the enumeration by [`monic_from_index`].
pub fn least_irreducible(p: u64, n: usize) -> Poly {
    (0u128..)
        .map(|i| monic_from_index(i, n, p))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

/// A uniformly random monic irreducible of degree `n`.
pub fn random_irreducible<R: Rng>(p: u64, n: usize, rng: &mut R) -> Poly {
    loop {
        let mut f: Poly = (0..n).map(|_| rng.gen_range(0..p)).collect();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_roundtrip() {
        let p = 7;
        let f = from_i64(&[3, 0, 5, 1, 6, 2], p);
        let g = from_i64(&[1, 4, 3], p);
        let (q, r) = divrem(&f, &g, p);
        assert!(r.len() < g.len());
        assert_eq!(add(&mul(&q, &g, p), &r, p), f);
    }

    #[test]
    fn irreducibles_small() {
        assert_eq!(least_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(least_irreducible(2, 4), vec![1, 1, 0, 0, 1]);
        assert_eq!(least_irreducible(3, 1), vec![0, 1]);
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[1, 0, 1], 3));
    }

    #[test]
    fn irreducible_count_matches_necklace_formula() {
        // number of monic irreducibles of degree 4 over F_2 is 3, over F_3 is 18
        let count = |p: u64, n: usize| {
            (0..(p as u128).pow(n as u32))
                .filter(|&i| is_irreducible(&monic_from_index(i, n, p), p))
                .count()
        };
        assert_eq!(count(2, 4), 3);
        assert_eq!(count(3, 4), 18);
        assert_eq!(count(5, 3), 40);
    }

    #[test]
    fn ddf_patterns() {
        // (x^2+x+1)(x)(x+1) over F_2
        let f = mul(&mul(&[1, 1, 1], &[0, 1], 2), &[1, 1], 2);
        assert_eq!(factor_pattern(&f, 2), vec![2, 1, 1]);
        // x^3 + x + 1 irreducible over F_2
        assert_eq!(factor_pattern(&[1, 1, 0, 1], 2), vec![3]);
        assert!(!is_squarefree(&mul(&[1, 1], &[1, 1], 2), 2));
        assert!(is_squarefree(&[1, 1, 0, 1], 2));
    }

    #[test]
    fn ext_gcd_bezout() {
        let p = 5;
        let f = from_i64(&[1, 2, 3, 1], p);
        let g = from_i64(&[4, 0, 1], p);
        let (d, s, t) = ext_gcd(&f, &g, p);
        assert_eq!(add(&mul(&s, &f, p), &mul(&t, &g, p), p), d);
    }
}
