//! Finite fields `F_{p^n}` with an explicit modulus, their Frobenius
//! automorphisms, and explicit subfield embeddings.
//!
//! A field is a cheap, shareable handle ([`FqField`]); elements ([`FqElem`])
//! are bare coefficient vectors interpreted relative to the field that
//! operates on them. Moving an element between two fields always goes
//! through a [`SubfieldEmbedding`].

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::arith::{gcd, is_prime};
use crate::fpoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("characteristic {0} too large (must be below 2^31)")]
    CharacteristicTooLarge(u64),
    #[error("field of order {p}^{n} does not fit in 64 bits")]
    TooLarge { p: u64, n: usize },
    #[error("modulus rejected: {0}")]
    BadModulus(String),
    #[error("element has {got} coefficients, field expects {expected}")]
    ElementLength { expected: usize, got: usize },
    #[error("coefficient {0} is not reduced modulo the characteristic")]
    Unreduced(u64),
    #[error("F_{small_p}^{small_n} is not a subfield of F_{big_p}^{big_n}")]
    NotASubfield { small_p: u64, small_n: usize, big_p: u64, big_n: usize },
    #[error("bad field descriptor {0:?}; expected \"p^n\"")]
    Descriptor(String),
    #[error("automorphisms belong to different fields")]
    FieldMismatch,
}

/// Element of some `F_{p^n}`: exactly `n` coefficients in `[0, p)`, ascending
/// powers of the field generator.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FqElem(SmallVec<[u64; 8]>);

impl FqElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

struct FieldInner {
    p: u64,
    n: usize,
    modulus: Vec<u64>,
    size: u64,
    /// `reduce[k]` is `x^(n+k) mod modulus`, for `k < n-1`.
    reduce: Vec<Vec<u64>>,
    /// `frob[k]` is the row-major matrix of `x -> x^(p^k)` on the power basis.
    frob: Vec<Vec<u64>>,
}

/// The finite field `F_p[x]/(modulus)`.
#[derive(Clone)]
pub struct FqField(Arc<FieldInner>);

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FqField {}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.n, self.0.modulus)
    }
}

/// Parse a `"p^n"` descriptor (a bare `"p"` means `n = 1`).
pub fn parse_descriptor(s: &str) -> Result<(u64, usize), FieldError> {
    let bad = || FieldError::Descriptor(s.to_string());
    let (p, n) = match s.trim().split_once('^') {
        Some((p, n)) => (p.trim().parse().map_err(|_| bad())?, n.trim().parse().map_err(|_| bad())?),
        None => (s.trim().parse().map_err(|_| bad())?, 1),
    };
    Ok((p, n))
}

impl FqField {
    /// Field of order `p^n`. Seed 0 selects the lexicographically least
    /// irreducible modulus; any other seed draws a random irreducible from a
    /// ChaCha stream keyed by the seed.
    pub fn new(p: u64, n: usize, seed: u64) -> Result<Self, FieldError> {
        Self::check_params(p, n)?;
        let modulus = if seed == 0 {
            fpoly::least_irreducible(p, n)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            fpoly::random_irreducible(p, n, &mut rng)
        };
        Self::build(p, modulus)
    }

    pub fn from_descriptor(desc: &str, seed: u64) -> Result<Self, FieldError> {
        let (p, n) = parse_descriptor(desc)?;
        Self::new(p, n, seed)
    }

    /// Field with a caller-supplied modulus (ascending coefficients).
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Self, FieldError> {
        let n = modulus.len().saturating_sub(1);
        Self::check_params(p, n)?;
        if modulus.last() != Some(&1) {
            return Err(FieldError::BadModulus("modulus must be monic".into()));
        }
        if let Some(&c) = modulus.iter().find(|&&c| c >= p) {
            return Err(FieldError::Unreduced(c));
        }
        if !fpoly::is_irreducible(modulus, p) {
            return Err(FieldError::BadModulus(format!("{modulus:?} is reducible over F_{p}")));
        }
        Self::build(p, modulus.to_vec())
    }

    fn check_params(p: u64, n: usize) -> Result<(), FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if p >= 1 << 31 {
            return Err(FieldError::CharacteristicTooLarge(p));
        }
        if p.checked_pow(n as u32).is_none() || n > 64 {
            return Err(FieldError::TooLarge { p, n });
        }
        Ok(())
    }

    fn build(p: u64, modulus: Vec<u64>) -> Result<Self, FieldError> {
        let n = modulus.len() - 1;
        let size = p.pow(n as u32);
        // x^(n+k) mod m for k = 0..n-2
        let mut reduce = Vec::with_capacity(n.saturating_sub(1));
        let mut cur: Vec<u64> = modulus[..n].iter().map(|&c| (p - c) % p).collect();
        for _ in 0..n.saturating_sub(1) {
            reduce.push(cur.clone());
            // multiply by x
            let top = cur[n - 1];
            let mut next = vec![0u64; n];
            next[1..n].copy_from_slice(&cur[..n - 1]);
            for i in 0..n {
                next[i] = (next[i] + top * ((p - modulus[i]) % p)) % p;
            }
            cur = next;
        }
        let mut field = FieldInner { p, n, modulus, size, reduce, frob: Vec::new() };
        field.frob = frobenius_matrices(&field);
        Ok(FqField(Arc::new(field)))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> usize {
        self.0.n
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// Number of elements.
    pub fn size(&self) -> u64 {
        self.0.size
    }

    pub fn descriptor(&self) -> String {
        format!("{}^{}", self.0.p, self.0.n)
    }

    pub fn zero(&self) -> FqElem {
        FqElem(SmallVec::from_elem(0, self.0.n))
    }

    pub fn one(&self) -> FqElem {
        self.from_int(1)
    }

    pub fn from_int(&self, c: i64) -> FqElem {
        let mut e = self.zero();
        e.0[0] = c.rem_euclid(self.0.p as i64) as u64;
        e
    }

    /// The class of `x`, a primitive element over the prime field.
    pub fn generator(&self) -> FqElem {
        if self.0.n == 1 {
            // x ≡ -m_0 in the prime field
            return FqElem(SmallVec::from_elem((self.0.p - self.0.modulus[0]) % self.0.p, 1));
        }
        let mut e = self.zero();
        e.0[1] = 1;
        e
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FqElem, FieldError> {
        if coeffs.len() != self.0.n {
            return Err(FieldError::ElementLength { expected: self.0.n, got: coeffs.len() });
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.0.p) {
            return Err(FieldError::Unreduced(c));
        }
        Ok(FqElem(SmallVec::from_slice(coeffs)))
    }

    /// Reduce an arbitrary polynomial in `x` over `F_p` into the field.
    pub fn from_poly(&self, poly: &[u64]) -> FqElem {
        let mut f: Vec<u64> = poly.iter().map(|&c| c % self.0.p).collect();
        fpoly::trim(&mut f);
        let r = fpoly::rem(&f, &self.0.modulus, self.0.p);
        let mut e = self.zero();
        e.0[..r.len()].copy_from_slice(&r);
        e
    }

    /// Element whose coefficients are the base-`p` digits of `index`.
    pub fn elem_from_index(&self, mut index: u64) -> FqElem {
        let mut e = self.zero();
        for c in e.0.iter_mut() {
            *c = index % self.0.p;
            index /= self.0.p;
        }
        e
    }

    pub fn index_of(&self, e: &FqElem) -> u64 {
        e.0.iter().rev().fold(0, |acc, &c| acc * self.0.p + c)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.0.size).map(move |i| self.elem_from_index(i))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FqElem {
        FqElem((0..self.0.n).map(|_| rng.gen_range(0..self.0.p)).collect())
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FqElem {
        loop {
            let e = self.random(rng);
            if !e.0.iter().all(|&c| c == 0) {
                return e;
            }
        }
    }

    pub fn is_zero(&self, a: &FqElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, a: &FqElem) -> bool {
        a.0[0] == 1 && a.0[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.0.p;
        FqElem(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + y) % p).collect())
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.0.p;
        FqElem(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + p - y) % p).collect())
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        let p = self.0.p;
        FqElem(a.0.iter().map(|&x| (p - x) % p).collect())
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let (p, n) = (self.0.p, self.0.n);
        if n == 1 {
            return FqElem(SmallVec::from_elem(a.0[0] * b.0[0] % p, 1));
        }
        let mut prod: SmallVec<[u64; 16]> = SmallVec::from_elem(0, 2 * n - 1);
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let mut out: SmallVec<[u64; 8]> = SmallVec::from_slice(&prod[..n]);
        for (k, red) in self.0.reduce.iter().enumerate() {
            let c = prod[n + k];
            if c == 0 {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(red) {
                *o = (*o + c * r) % p;
            }
        }
        FqElem(out)
    }

    pub fn scalar_mul(&self, c: u64, a: &FqElem) -> FqElem {
        let p = self.0.p;
        FqElem(a.0.iter().map(|&x| x * (c % p) % p).collect())
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: &FqElem) -> Option<FqElem> {
        if self.is_zero(a) {
            return None;
        }
        let p = self.0.p;
        let mut f: Vec<u64> = a.0.to_vec();
        fpoly::trim(&mut f);
        let (g, s, _) = fpoly::ext_gcd(&f, &self.0.modulus, p);
        debug_assert_eq!(g, vec![1]);
        Some(self.from_poly(&s))
    }

    pub fn div(&self, a: &FqElem, b: &FqElem) -> Option<FqElem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    pub fn pow(&self, a: &FqElem, mut e: u128) -> FqElem {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// Evaluate a polynomial over `F_p` (ascending coefficients) at `a`.
    pub fn eval_prime_poly(&self, poly: &[u64], a: &FqElem) -> FqElem {
        poly.iter().rev().fold(self.zero(), |acc, &c| {
            let t = self.mul(&acc, a);
            self.add(&t, &self.from_int(c as i64))
        })
    }

    /// The automorphism `x -> x^(p^k)`, `k` taken mod `n`.
    pub fn frobenius(&self, k: i64) -> FieldAut {
        FieldAut { field: self.clone(), k: k.rem_euclid(self.0.n as i64) as usize }
    }

    pub fn identity_aut(&self) -> FieldAut {
        self.frobenius(0)
    }

    /// Apply `x -> x^(p^k)` through the precomputed matrix.
    pub fn apply_frobenius(&self, k: usize, a: &FqElem) -> FqElem {
        let n = self.0.n;
        let k = k % n;
        if k == 0 {
            return a.clone();
        }
        let p = self.0.p;
        let m = &self.0.frob[k];
        FqElem(
            (0..n)
                .map(|i| {
                    let row = &m[i * n..(i + 1) * n];
                    row.iter().zip(&a.0).fold(0, |acc, (&r, &c)| (acc + r * c) % p)
                })
                .collect(),
        )
    }

    /// Matrix of `x -> x^(p^k)` minus the identity, row-major.
    fn frobenius_minus_identity(&self, k: usize) -> Vec<u64> {
        let (n, p) = (self.0.n, self.0.p);
        let mut m = self.0.frob[k % n].clone();
        for i in 0..n {
            m[i * n + i] = (m[i * n + i] + p - 1) % p;
        }
        m
    }
}

fn frobenius_matrices(f: &FieldInner) -> Vec<Vec<u64>> {
    let (p, n) = (f.p, f.n);
    let mut ident = vec![0u64; n * n];
    for i in 0..n {
        ident[i * n + i] = 1;
    }
    if n == 1 {
        return vec![ident];
    }
    // column j of the Frobenius matrix is (x^p)^j mod m
    let xp = fpoly::powmod(&fpoly::x(), p as u128, &f.modulus, p);
    let mut one = vec![0u64; n * n];
    let mut col: Vec<u64> = vec![1];
    for j in 0..n {
        for (i, &c) in col.iter().enumerate() {
            one[i * n + j] = c;
        }
        col = fpoly::mulmod(&col, &xp, &f.modulus, p);
    }
    let mut mats = vec![ident];
    for k in 1..n {
        mats.push(mat_mul(&one, &mats[k - 1], n, p));
    }
    mats
}

fn mat_mul(a: &[u64], b: &[u64], n: usize, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = (out[i * n + j] + x * b[k * n + j]) % p;
            }
        }
    }
    out
}

/// Basis of the null space of a row-major `n x n` matrix over `F_p`.
fn null_space(mut m: Vec<u64>, n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..n).find(|&r| m[r * n + col] != 0) else { continue };
        for j in 0..n {
            m.swap(row * n + j, pr * n + j);
        }
        let inv = crate::arith::inv_mod(m[row * n + col], p).expect("nonzero pivot");
        for j in 0..n {
            m[row * n + j] = m[row * n + j] * inv % p;
        }
        for r in 0..n {
            if r != row && m[r * n + col] != 0 {
                let f = m[r * n + col];
                for j in 0..n {
                    m[r * n + j] = (m[r * n + j] + p * p - f * m[row * n + j]) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; n];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[r * n + fc]) % p;
            }
            v
        })
        .collect()
}

/// Frobenius power `x -> x^(p^k)` on a specific field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldAut {
    field: FqField,
    k: usize,
}

impl fmt::Debug for FieldAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Frob^{} on {}", self.k, self.field.descriptor())
    }
}

/// Wire form of an automorphism: `{"frob": k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutSpec {
    pub frob: usize,
}

impl FieldAut {
    pub fn field(&self) -> &FqField {
        &self.field
    }

    /// Frobenius exponent in `[0, n)`.
    pub fn exponent(&self) -> usize {
        self.k
    }

    pub fn spec(&self) -> AutSpec {
        AutSpec { frob: self.k }
    }

    pub fn apply(&self, a: &FqElem) -> FqElem {
        self.field.apply_frobenius(self.k, a)
    }

    pub fn is_identity(&self) -> bool {
        self.k == 0
    }

    /// Order in `Aut(F_{p^n})`, namely `n / gcd(n, k)`.
    pub fn order(&self) -> usize {
        let n = self.field.degree() as u64;
        (n / gcd(n, self.k as u64)) as usize
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FieldAut) -> Result<FieldAut, FieldError> {
        if self.field != other.field {
            return Err(FieldError::FieldMismatch);
        }
        Ok(self.field.frobenius((self.k + other.k) as i64))
    }

    pub fn pow(&self, e: i64) -> FieldAut {
        self.field.frobenius(self.k as i64 * e)
    }

    pub fn inverse(&self) -> FieldAut {
        self.pow(-1)
    }
}

impl Serialize for FieldAut {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.spec().serialize(s)
    }
}

/// Explicit ring embedding `small -> big`, determined by the image of the
/// generator of `small`.
#[derive(Clone)]
pub struct SubfieldEmbedding {
    small: FqField,
    big: FqField,
    image: FqElem,
    powers: Vec<FqElem>,
}

impl fmt::Debug for SubfieldEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} (x -> {:?})",
            self.small.descriptor(),
            self.big.descriptor(),
            self.image
        )
    }
}

impl SubfieldEmbedding {
    /// Embed `small` into `big`. The image of the generator is the first
    /// root (in index order over the fixed subspace of `Frob^m`) of the
    /// modulus of `small`; if both fields share a modulus the embedding is
    /// the identity.
    pub fn new(small: &FqField, big: &FqField) -> Result<Self, FieldError> {
        let (m, n) = (small.degree(), big.degree());
        let p = big.characteristic();
        if small.characteristic() != p || n % m != 0 {
            return Err(FieldError::NotASubfield {
                small_p: small.characteristic(),
                small_n: m,
                big_p: p,
                big_n: n,
            });
        }
        let image = if small.modulus() == big.modulus() {
            big.generator()
        } else {
            let basis = null_space(big.frobenius_minus_identity(m), n, p);
            debug_assert_eq!(basis.len(), m);
            let count = p.pow(m as u32);
            (0..count)
                .map(|mut idx| {
                    let mut v = vec![0u64; n];
                    for b in &basis {
                        let c = idx % p;
                        idx /= p;
                        for (vi, &bi) in v.iter_mut().zip(b) {
                            *vi = (*vi + c * bi) % p;
                        }
                    }
                    FqElem(SmallVec::from_vec(v))
                })
                .find(|y| big.is_zero(&big.eval_prime_poly(small.modulus(), y)))
                .expect("a subfield of the right order contains every root of its modulus")
        };
        let mut powers = Vec::with_capacity(m);
        let mut cur = big.one();
        for _ in 0..m {
            powers.push(cur.clone());
            cur = big.mul(&cur, &image);
        }
        Ok(SubfieldEmbedding { small: small.clone(), big: big.clone(), image, powers })
    }

    pub fn small(&self) -> &FqField {
        &self.small
    }

    pub fn big(&self) -> &FqField {
        &self.big
    }

    pub fn image_of_generator(&self) -> &FqElem {
        &self.image
    }

    /// `[big : small]`.
    pub fn relative_degree(&self) -> usize {
        self.big.degree() / self.small.degree()
    }

    pub fn apply(&self, a: &FqElem) -> FqElem {
        a.0.iter().zip(&self.powers).fold(self.big.zero(), |acc, (&c, pw)| {
            if c == 0 {
                acc
            } else {
                self.big.add(&acc, &self.big.scalar_mul(c, pw))
            }
        })
    }

    /// The image of `small` inside `big`, in index order of `small`.
    pub fn image_set(&self) -> Vec<FqElem> {
        self.small.elements().map(|a| self.apply(&a)).collect()
    }
}

/// `Gal(L/K)` as the cyclic list `[Frob^m, Frob^(2m), ..., Frob^(rm) = id]`
/// where `m = [K : F_p]` and `r = [L : K]`. The first entry is the relative
/// Frobenius.
pub fn galois_group(big: &FqField, k: &SubfieldEmbedding) -> Result<Vec<FieldAut>, FieldError> {
    if k.big() != big {
        return Err(FieldError::FieldMismatch);
    }
    let m = k.small().degree();
    let r = k.relative_degree();
    Ok((1..=r).map(|j| big.frobenius((j * m) as i64)).collect())
}

/// Restriction of an automorphism of `L` to the subfield `K`: the Frobenius
/// exponent reduced mod `[K : F_p]`.
pub fn restrict_aut(a: &FieldAut, k: &SubfieldEmbedding) -> Result<FieldAut, FieldError> {
    if a.field() != k.big() {
        return Err(FieldError::FieldMismatch);
    }
    Ok(k.small().frobenius(a.exponent() as i64))
}

impl FromStr for AutSpec {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .parse()
            .map(|frob| AutSpec { frob })
            .map_err(|_| FieldError::Descriptor(s.to_string()))
    }
}
