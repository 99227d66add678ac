//! The twisted polynomial ring `L[T, τ]` over a finite field `L`, where the
//! indeterminate commutes past scalars as `T·a = τ(a)·T`.
//!
//! Right division (`f = q·g + r`) is the primary Euclidean structure; the
//! mirrored left division (`f = g·q + r`) is used for common right
//! multiples, which is what the right Ore condition `x·r = y·s` asks for.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ffield::{FieldAut, FieldError, FqElem, FqField, SubfieldEmbedding};
use crate::par::{self, Execution};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OreError {
    #[error("operands live in different twisted rings")]
    RingMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operation requires nonzero operands")]
    ZeroOperand,
    #[error("automorphism does not fix the designated subfield pointwise")]
    NotFixingSubfield,
    #[error("internal self-check failed: {0}")]
    SelfCheck(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The ring `L[T, τ]`: a base field together with a twist.
#[derive(Clone, PartialEq, Eq)]
pub struct OreRing {
    base: FqField,
    twist: FieldAut,
}

impl fmt::Debug for OreRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[T, Frob^{}]", self.base.descriptor(), self.twist.exponent())
    }
}

impl OreRing {
    pub fn new(twist: FieldAut) -> Self {
        OreRing { base: twist.field().clone(), twist }
    }

    pub fn base(&self) -> &FqField {
        &self.base
    }

    pub fn twist(&self) -> &FieldAut {
        &self.twist
    }

    pub fn is_commutative(&self) -> bool {
        self.twist.is_identity()
    }

    pub fn zero(&self) -> OrePoly {
        OrePoly { ring: self.clone(), coeffs: Vec::new() }
    }

    pub fn one(&self) -> OrePoly {
        self.constant(self.base.one())
    }

    pub fn constant(&self, a: FqElem) -> OrePoly {
        self.from_coeffs(vec![a])
    }

    /// The monomial `a·T^k`.
    pub fn monomial(&self, a: FqElem, k: usize) -> OrePoly {
        let mut coeffs = vec![self.base.zero(); k];
        coeffs.push(a);
        self.from_coeffs(coeffs)
    }

    pub fn t(&self) -> OrePoly {
        self.monomial(self.base.one(), 1)
    }

    /// Build from ascending coefficients; trailing zeros are dropped.
    pub fn from_coeffs(&self, mut coeffs: Vec<FqElem>) -> OrePoly {
        while coeffs.last().is_some_and(|c| self.base.is_zero(c)) {
            coeffs.pop();
        }
        OrePoly { ring: self.clone(), coeffs }
    }

    /// `τ^e(a)`.
    fn twist_pow(&self, e: usize, a: &FqElem) -> FqElem {
        let k = self.twist.exponent() * e;
        self.base.apply_frobenius(k % self.base.degree(), a)
    }

    fn twist_pow_inv(&self, e: usize, a: &FqElem) -> FqElem {
        let n = self.base.degree();
        let k = (self.twist.exponent() * e) % n;
        self.base.apply_frobenius((n - k) % n, a)
    }

    /// Random polynomial of degree at most `max_deg` (possibly zero).
    pub fn random<R: Rng + ?Sized>(&self, max_deg: usize, rng: &mut R) -> OrePoly {
        let d = rng.gen_range(0..=max_deg);
        self.from_coeffs((0..=d).map(|_| self.base.random(rng)).collect())
    }

    /// Random polynomial of degree exactly `deg`.
    pub fn random_of_degree<R: Rng + ?Sized>(&self, deg: usize, rng: &mut R) -> OrePoly {
        let mut coeffs: Vec<FqElem> = (0..deg).map(|_| self.base.random(rng)).collect();
        coeffs.push(self.base.random_nonzero(rng));
        self.from_coeffs(coeffs)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, max_deg: usize, rng: &mut R) -> OrePoly {
        let d = rng.gen_range(0..=max_deg);
        self.random_of_degree(d, rng)
    }
}

/// Element `a_0 + a_1 T + ... + a_n T^n` of a twisted ring; canonical (no
/// trailing zero coefficients, the zero polynomial has none at all).
#[derive(Clone, PartialEq, Eq)]
pub struct OrePoly {
    ring: OreRing,
    coeffs: Vec<FqElem>,
}

impl fmt::Debug for OrePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} in {:?}", self.coeffs, self.ring)
    }
}

/// Result of a right division `f = quotient·g + remainder`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OreDivResult {
    pub quotient: OrePoly,
    pub remainder: OrePoly,
}

impl OrePoly {
    pub fn ring(&self) -> &OreRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FqElem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| self.ring.base.is_one(c))
    }

    fn same_ring(&self, other: &OrePoly) -> Result<(), OreError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(OreError::RingMismatch)
        }
    }

    pub fn add(&self, other: &OrePoly) -> Result<OrePoly, OreError> {
        self.same_ring(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &OrePoly) -> Result<OrePoly, OreError> {
        self.same_ring(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn neg(&self) -> OrePoly {
        let k = &self.ring.base;
        self.ring.from_coeffs(self.coeffs.iter().map(|c| k.neg(c)).collect())
    }

    /// Ring product. Coefficient `k` of `f·g` is `Σ_{l ≤ k} a_l · τ^l(b_{k-l})`.
    pub fn mul(&self, other: &OrePoly) -> Result<OrePoly, OreError> {
        self.same_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Left scalar multiplication `c·f`.
    pub fn scale_left(&self, c: &FqElem) -> OrePoly {
        let k = &self.ring.base;
        self.ring.from_coeffs(self.coeffs.iter().map(|a| k.mul(c, a)).collect())
    }

    /// Left-multiply by the inverse of the leading coefficient.
    pub fn monic(&self) -> OrePoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = self.ring.base.inv(l).expect("leading coefficient is nonzero");
                self.scale_left(&inv)
            }
        }
    }

    fn add_unchecked(&self, other: &OrePoly) -> OrePoly {
        let k = &self.ring.base;
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = k.zero();
        let coeffs = (0..n)
            .map(|i| {
                k.add(
                    self.coeffs.get(i).unwrap_or(&zero),
                    other.coeffs.get(i).unwrap_or(&zero),
                )
            })
            .collect();
        self.ring.from_coeffs(coeffs)
    }

    fn sub_unchecked(&self, other: &OrePoly) -> OrePoly {
        self.add_unchecked(&other.neg())
    }

    fn mul_unchecked(&self, other: &OrePoly) -> OrePoly {
        if self.is_zero() || other.is_zero() {
            return self.ring.zero();
        }
        let ring = &self.ring;
        let k = &ring.base;
        let mut out = vec![k.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (l, a) in self.coeffs.iter().enumerate() {
            if k.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = k.mul(a, &ring.twist_pow(l, b));
                out[l + j] = k.add(&out[l + j], &t);
            }
        }
        ring.from_coeffs(out)
    }

    /// `f = q·g + r` with `deg r < deg g`.
    pub fn right_divmod(&self, g: &OrePoly) -> Result<OreDivResult, OreError> {
        self.same_ring(g)?;
        let dg = g.degree().ok_or(OreError::DivisionByZero)?;
        let ring = &self.ring;
        let k = &ring.base;
        let glead = g.leading().unwrap();
        let mut r = self.clone();
        let mut q = vec![k.zero(); self.coeffs.len().saturating_sub(dg)];
        while let Some(dr) = r.degree().filter(|&d| d >= dg) {
            let s = dr - dg;
            // u·T^s·g has leading coefficient u·τ^s(g_lead)
            let u = k
                .div(r.leading().unwrap(), &ring.twist_pow(s, glead))
                .expect("twisted leading coefficient is nonzero");
            let mut next = r.coeffs.clone();
            for (j, gj) in g.coeffs.iter().enumerate() {
                let t = k.mul(&u, &ring.twist_pow(s, gj));
                next[s + j] = k.sub(&next[s + j], &t);
            }
            q[s] = u;
            r = ring.from_coeffs(next);
        }
        Ok(OreDivResult { quotient: ring.from_coeffs(q), remainder: r })
    }

    /// `f = g·q + r` with `deg r < deg g`.
    pub fn left_divmod(&self, g: &OrePoly) -> Result<OreDivResult, OreError> {
        self.same_ring(g)?;
        let dg = g.degree().ok_or(OreError::DivisionByZero)?;
        let ring = &self.ring;
        let k = &ring.base;
        let glead = g.leading().unwrap();
        let mut r = self.clone();
        let mut q = vec![k.zero(); self.coeffs.len().saturating_sub(dg)];
        while let Some(dr) = r.degree().filter(|&d| d >= dg) {
            let s = dr - dg;
            // g·u·T^s has leading coefficient g_lead·τ^dg(u)
            let c = k.div(r.leading().unwrap(), glead).expect("nonzero lead");
            let u = ring.twist_pow_inv(dg, &c);
            let mut next = r.coeffs.clone();
            for (i, gi) in g.coeffs.iter().enumerate() {
                let t = k.mul(gi, &ring.twist_pow(i, &u));
                next[i + s] = k.sub(&next[i + s], &t);
            }
            q[s] = u;
            r = ring.from_coeffs(next);
        }
        Ok(OreDivResult { quotient: ring.from_coeffs(q), remainder: r })
    }

    /// Monic greatest common right divisor.
    pub fn right_gcd(&self, g: &OrePoly) -> Result<OrePoly, OreError> {
        self.same_ring(g)?;
        if self.is_zero() && g.is_zero() {
            return Err(OreError::ZeroOperand);
        }
        let (mut a, mut b) = (self.clone(), g.clone());
        while !b.is_zero() {
            let r = a.right_divmod(&b)?.remainder;
            a = std::mem::replace(&mut b, r);
        }
        Ok(a.monic())
    }

    /// Monic least common left multiple: the monic generator of the left
    /// ideal intersection `R·f ∩ R·g`, found as `u·f` from the vanishing
    /// combination `u·f + v·g = 0` at the end of the right Euclidean chain.
    pub fn left_lcm(&self, g: &OrePoly) -> Result<OrePoly, OreError> {
        self.same_ring(g)?;
        if self.is_zero() && g.is_zero() {
            return Err(OreError::ZeroOperand);
        }
        if self.is_zero() || g.is_zero() {
            return Ok(self.ring.zero());
        }
        let ring = &self.ring;
        let (mut r0, mut r1) = (self.clone(), g.clone());
        let (mut s0, mut s1) = (ring.one(), ring.zero());
        while !r1.is_zero() {
            let OreDivResult { quotient: q, remainder: r } = r0.right_divmod(&r1)?;
            let s2 = s0.sub_unchecked(&q.mul_unchecked(&s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // now s1·f + t1·g = 0
        Ok(s1.mul_unchecked(self).monic())
    }

    /// Apply a coefficientwise automorphism.
    fn map_coeffs(&self, rho: &FieldAut) -> OrePoly {
        self.ring.from_coeffs(self.coeffs.iter().map(|c| rho.apply(c)).collect())
    }
}

/// Witness of the right Ore condition: nonzero `r, s` with `x·r = y·s ≠ 0`.
///
/// Runs the left Euclidean chain on `(x, y)` tracking right cofactors
/// `r_i = x·a_i + y·b_i`; the chain ends in `x·a + y·b = 0` and the witness is
/// `(a, -b)`, a least common right multiple. The identity is re-checked by
/// multiplication before returning.
pub fn ore_witness(x: &OrePoly, y: &OrePoly) -> Result<(OrePoly, OrePoly), OreError> {
    x.same_ring(y)?;
    if x.is_zero() || y.is_zero() {
        return Err(OreError::ZeroOperand);
    }
    let ring = x.ring();
    let (mut r0, mut r1) = (x.clone(), y.clone());
    let (mut a0, mut a1) = (ring.one(), ring.zero());
    let (mut b0, mut b1) = (ring.zero(), ring.one());
    while !r1.is_zero() {
        let OreDivResult { quotient: q, remainder: r } = r0.left_divmod(&r1)?;
        let a2 = a0.sub_unchecked(&a1.mul_unchecked(&q));
        let b2 = b0.sub_unchecked(&b1.mul_unchecked(&q));
        r0 = std::mem::replace(&mut r1, r);
        a0 = std::mem::replace(&mut a1, a2);
        b0 = std::mem::replace(&mut b1, b2);
    }
    let (r, s) = (a1, b1.neg());
    let lhs = x.mul_unchecked(&r);
    if lhs.is_zero() || lhs != y.mul_unchecked(&s) {
        return Err(OreError::SelfCheck("x·r = y·s ≠ 0 does not hold".into()));
    }
    Ok((r, s))
}

/// Coefficientwise action `Σ a_i T^i ↦ Σ ρ(a_i) T^i` of an automorphism `ρ`
/// of `L` that fixes a designated subfield `K`. Because `Aut(L)` is abelian
/// this commutes with the twist and is a ring automorphism fixing `T`.
#[derive(Clone, Debug)]
pub struct InducedRingAut {
    ring: OreRing,
    rho: FieldAut,
}

impl InducedRingAut {
    pub fn new(rho: &FieldAut, ring: &OreRing, fixed: &SubfieldEmbedding) -> Result<Self, OreError> {
        if rho.field() != ring.base() || fixed.big() != ring.base() {
            return Err(OreError::RingMismatch);
        }
        if !rho.exponent().is_multiple_of(fixed.small().degree()) {
            return Err(OreError::NotFixingSubfield);
        }
        Ok(InducedRingAut { ring: ring.clone(), rho: rho.clone() })
    }

    pub fn automorphism(&self) -> &FieldAut {
        &self.rho
    }

    pub fn apply(&self, f: &OrePoly) -> Result<OrePoly, OreError> {
        if f.ring() != &self.ring {
            return Err(OreError::RingMismatch);
        }
        Ok(f.map_coeffs(&self.rho))
    }

    pub fn is_identity(&self) -> bool {
        self.rho.is_identity()
    }
}

/// Outcome of an exhaustive bounded-degree scan of the fixed subring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedSubringReport {
    pub max_degree: usize,
    pub scanned: u64,
    pub fixed: u64,
    pub with_coeffs_in_subfield: u64,
    /// Every scanned polynomial is fixed by the whole group exactly when its
    /// coefficients lie in the subfield.
    pub agree: bool,
}

/// Scan every polynomial of degree `<= max_deg` in `ring` and compare the
/// subring fixed by all `auts` with `K[T]` (coefficients in the image of
/// `fixed`). This is evidence at the polynomial-ring level only; it says
/// nothing definitive about the skew fraction fields.
pub fn fixed_subring_scan(
    ring: &OreRing,
    auts: &[InducedRingAut],
    fixed: &SubfieldEmbedding,
    max_deg: usize,
    exec: Execution,
) -> FixedSubringReport {
    let base = ring.base();
    let q = base.size();
    let total = q.checked_pow(max_deg as u32 + 1).expect("scan size fits in u64");
    let image: std::collections::HashSet<FqElem> = fixed.image_set().into_iter().collect();
    let flags = par::map_range(exec, 0..total as usize, |idx| {
        let mut idx = idx as u64;
        let coeffs: Vec<FqElem> = (0..=max_deg)
            .map(|_| {
                let e = base.elem_from_index(idx % q);
                idx /= q;
                e
            })
            .collect();
        let f = ring.from_coeffs(coeffs);
        let is_fixed = auts.iter().all(|a| a.apply(&f).map(|g| g == f).unwrap_or(false));
        let in_sub = f.coeffs().iter().all(|c| image.contains(c));
        (is_fixed, in_sub)
    });
    let fixed_count = flags.iter().filter(|f| f.0).count() as u64;
    let sub_count = flags.iter().filter(|f| f.1).count() as u64;
    FixedSubringReport {
        max_degree: max_deg,
        scanned: total,
        fixed: fixed_count,
        with_coeffs_in_subfield: sub_count,
        agree: flags.iter().all(|(a, b)| a == b),
    }
}

/// Wire form: `{"base":"p^n","frob":k,"coeffs":[[...],...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrePolyJson {
    pub base: String,
    pub frob: usize,
    pub coeffs: Vec<Vec<u64>>,
}

impl OrePoly {
    pub fn to_json(&self) -> OrePolyJson {
        OrePolyJson {
            base: self.ring.base.descriptor(),
            frob: self.ring.twist.exponent(),
            coeffs: self.coeffs.iter().map(|c| c.coeffs().to_vec()).collect(),
        }
    }

    /// Parse against an explicit base field (whose descriptor must match).
    pub fn from_json(json: &OrePolyJson, base: &FqField) -> Result<OrePoly, OreError> {
        if json.base != base.descriptor() {
            return Err(OreError::RingMismatch);
        }
        let ring = OreRing::new(base.frobenius(json.frob as i64));
        let coeffs = json
            .coeffs
            .iter()
            .map(|c| base.from_coeffs(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ring.from_coeffs(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f4_frob() -> (FqField, OreRing, FqElem) {
        let f4 = FqField::new(2, 2, 0).unwrap();
        let ring = OreRing::new(f4.frobenius(1));
        let w = f4.generator();
        (f4, ring, w)
    }

    fn poly(ring: &OreRing, cs: &[FqElem]) -> OrePoly {
        ring.from_coeffs(cs.to_vec())
    }

    /// Product by direct convolution with the twist applied term by term.
    fn brute_mul(f: &OrePoly, g: &OrePoly) -> OrePoly {
        let ring = f.ring();
        let k = ring.base();
        let mut acc = ring.zero();
        for (i, a) in f.coeffs().iter().enumerate() {
            for (j, b) in g.coeffs().iter().enumerate() {
                // a T^i · b T^j = a τ^i(b) T^(i+j)
                let mut tb = b.clone();
                for _ in 0..i {
                    tb = ring.twist().apply(&tb);
                }
                acc = acc.add(&ring.monomial(k.mul(a, &tb), i + j)).unwrap();
            }
        }
        acc
    }

    #[test]
    fn mul_examples() {
        let (f4, ring, w) = f4_frob();
        let w2 = f4.mul(&w, &w);
        // T·ω = ω²T
        assert_eq!(ring.t().mul(&ring.constant(w.clone())).unwrap(), ring.monomial(w2.clone(), 1));
        // (ωT)(ωT) = T²
        let wt = ring.monomial(w.clone(), 1);
        assert_eq!(wt.mul(&wt).unwrap(), ring.monomial(f4.one(), 2));
        // (T+1)(T+ω) = T² + ωT + ω
        let a = poly(&ring, &[f4.one(), f4.one()]);
        let b = poly(&ring, &[w.clone(), f4.one()]);
        let expect = poly(&ring, &[w.clone(), w.clone(), f4.one()]);
        assert_eq!(a.mul(&b).unwrap(), expect);
        assert_eq!(brute_mul(&a, &b), expect);
    }

    #[test]
    fn mul_matches_brute_force() {
        let f = FqField::new(3, 3, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 0..3 {
            let ring = OreRing::new(f.frobenius(k));
            for _ in 0..200 {
                let a = ring.random(4, &mut rng);
                let b = ring.random(4, &mut rng);
                assert_eq!(a.mul(&b).unwrap(), brute_mul(&a, &b));
            }
        }
    }

    #[test]
    fn divmod_examples() {
        let (f4, ring, w) = f4_frob();
        let t = ring.t();
        let t2 = ring.monomial(f4.one(), 2);
        let d = t2.right_divmod(&t).unwrap();
        assert_eq!(d.quotient, t);
        assert!(d.remainder.is_zero());
        let f = poly(&ring, &[w.clone(), f4.one(), w.clone()]);
        let d = f.right_divmod(&ring.one()).unwrap();
        assert_eq!(d.quotient, f);
        assert!(d.remainder.is_zero());
        let f = poly(&ring, &[w.clone(), w.clone(), f4.one()]);
        let g = poly(&ring, &[w.clone(), f4.one()]);
        let d = f.right_divmod(&g).unwrap();
        assert_eq!(d.quotient, poly(&ring, &[f4.one(), f4.one()]));
        assert!(d.remainder.is_zero());
        assert_eq!(f.right_divmod(&ring.zero()).unwrap_err(), OreError::DivisionByZero);
    }

    #[test]
    fn left_divmod_roundtrip() {
        let f = FqField::new(2, 4, 0).unwrap();
        let ring = OreRing::new(f.frobenius(1));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let a = ring.random(6, &mut rng);
            let g = ring.random_nonzero(3, &mut rng);
            let d = a.left_divmod(&g).unwrap();
            assert_eq!(g.mul(&d.quotient).unwrap().add(&d.remainder).unwrap(), a);
            assert!(d.remainder.degree() < g.degree());
        }
    }

    #[test]
    fn gcd_lcm_examples() {
        let (f4, ring, w) = f4_frob();
        let f = poly(&ring, &[w.clone(), f4.one(), w.clone()]);
        assert_eq!(f.right_gcd(&ring.zero()).unwrap(), f.monic());
        let t = ring.t();
        let t2 = ring.monomial(f4.one(), 2);
        assert_eq!(t2.right_gcd(&t).unwrap(), t);
        let lcm = t.left_lcm(&ring.constant(w.clone())).unwrap();
        assert_eq!(lcm, t);
        assert_eq!(ring.zero().right_gcd(&ring.zero()).unwrap_err(), OreError::ZeroOperand);
    }

    #[test]
    fn lcm_degree_relation_and_divisibility() {
        let f = FqField::new(3, 2, 0).unwrap();
        let ring = OreRing::new(f.frobenius(1));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = ring.random_nonzero(4, &mut rng);
            let b = ring.random_nonzero(4, &mut rng);
            let g = a.right_gcd(&b).unwrap();
            let l = a.left_lcm(&b).unwrap();
            assert_eq!(
                l.degree().unwrap() + g.degree().unwrap(),
                a.degree().unwrap() + b.degree().unwrap()
            );
            assert!(a.right_divmod(&g).unwrap().remainder.is_zero());
            assert!(b.right_divmod(&g).unwrap().remainder.is_zero());
            assert!(l.right_divmod(&a).unwrap().remainder.is_zero());
            assert!(l.right_divmod(&b).unwrap().remainder.is_zero());
        }
    }

    #[test]
    fn witness_examples() {
        let (f4, ring, w) = f4_frob();
        let t = ring.t();
        let wc = ring.constant(w.clone());
        let (r, s) = ore_witness(&t, &wc).unwrap();
        assert_eq!(t.mul(&r).unwrap(), wc.mul(&s).unwrap());
        // the textbook pair (ω, ωT) is also a witness
        let wt = ring.monomial(w.clone(), 1);
        assert_eq!(t.mul(&wc).unwrap(), wc.mul(&wt).unwrap());
        let x = poly(&ring, &[w.clone(), f4.one()]);
        let (r, s) = ore_witness(&x, &x).unwrap();
        assert_eq!((r, s), (ring.one(), ring.one()));
        // commutative F_2[T]: x = T+1, y = T gives r = T, s = T+1
        let f2 = FqField::new(2, 1, 0).unwrap();
        let c = OreRing::new(f2.identity_aut());
        let one = f2.one();
        let x = poly(&c, &[one.clone(), one.clone()]);
        let y = c.t();
        let (r, s) = ore_witness(&x, &y).unwrap();
        assert_eq!(r, c.t());
        assert_eq!(s, x);
        assert_eq!(ore_witness(&x, &c.zero()).unwrap_err(), OreError::ZeroOperand);
    }

    #[test]
    fn ring_mismatch_rejected() {
        let f4 = FqField::new(2, 2, 0).unwrap();
        let a = OreRing::new(f4.frobenius(1)).t();
        let b = OreRing::new(f4.frobenius(0)).t();
        assert_eq!(a.mul(&b).unwrap_err(), OreError::RingMismatch);
    }

    #[test]
    fn induced_aut_fixed_subrings() {
        let f2 = FqField::new(2, 1, 0).unwrap();
        let f4 = FqField::new(2, 2, 0).unwrap();
        let emb = SubfieldEmbedding::new(&f2, &f4).unwrap();
        let ring = OreRing::new(f4.identity_aut());
        let id = InducedRingAut::new(&f4.identity_aut(), &ring, &emb).unwrap();
        assert!(id.is_identity());
        let rho = InducedRingAut::new(&f4.frobenius(1), &ring, &emb).unwrap();
        let rep = fixed_subring_scan(&ring, &[rho], &emb, 3, Execution::default());
        assert_eq!(rep.scanned, 256);
        assert_eq!(rep.fixed, 16);
        assert!(rep.agree);

        let f16 = FqField::new(2, 4, 0).unwrap();
        let emb = SubfieldEmbedding::new(&f2, &f16).unwrap();
        let ring = OreRing::new(f16.frobenius(2));
        let gal: Vec<_> = crate::ffield::galois_group(&f16, &emb)
            .unwrap()
            .iter()
            .map(|a| InducedRingAut::new(a, &ring, &emb).unwrap())
            .collect();
        let rep = fixed_subring_scan(&ring, &gal, &emb, 3, Execution::default());
        assert_eq!(rep.fixed, 16);
        assert!(rep.agree);

        // Frob on F_16 does not fix F_4
        let f4emb = SubfieldEmbedding::new(&f4, &f16).unwrap();
        assert_eq!(
            InducedRingAut::new(&f16.frobenius(1), &ring, &f4emb).unwrap_err(),
            OreError::NotFixingSubfield
        );
    }

    #[test]
    fn induced_aut_is_multiplicative() {
        let f16 = FqField::new(2, 4, 0).unwrap();
        let f4 = FqField::new(2, 2, 0).unwrap();
        let emb = SubfieldEmbedding::new(&f4, &f16).unwrap();
        let ring = OreRing::new(f16.frobenius(1));
        let rho = InducedRingAut::new(&f16.frobenius(2), &ring, &emb).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let a = ring.random(3, &mut rng);
            let b = ring.random(3, &mut rng);
            let lhs = rho.apply(&a.mul(&b).unwrap()).unwrap();
            let rhs = rho.apply(&a).unwrap().mul(&rho.apply(&b).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn json_roundtrip() {
        let (f4, ring, w) = f4_frob();
        let f = poly(&ring, &[w.clone(), f4.one()]);
        let j = f.to_json();
        assert_eq!(j.base, "2^2");
        assert_eq!(OrePoly::from_json(&j, &f4).unwrap(), f);
    }
}
