//! Roots of integer polynomials in `Z_p`, isolated by refining residue
//! disks and counted only when Hensel's lemma applies.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::zpoly::{self, ZPoly};
use crate::arith::valuation;
use crate::fpoly;

/// Largest prime for which residues are scanned one by one.
pub const MAX_SCAN_PRIME: u64 = 1_000_000;

const MAX_DEPTH: u32 = 512;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PadicError {
    PrimeTooLarge(u64),
    /// The disk refinement did not separate the roots; `f` is probably not
    /// squarefree.
    Unresolved,
}

fn inv_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Lift a simple root `t0` of `g mod p` to a root modulo `p^prec`.
fn hensel_lift(g: &[BigInt], t0: u64, p: u64, prec: u32) -> BigInt {
    let pb = BigInt::from(p);
    let dg = zpoly::derivative(g);
    let mut t = BigInt::from(t0);
    let mut e = 1u32;
    while e < prec {
        e = (2 * e).min(prec);
        let m = pb.pow(e);
        let corr = zpoly::eval(g, &t) * inv_mod(&zpoly::eval(&dg, &t), &m);
        t = (t - corr).mod_floor(&m);
    }
    t
}

/// Every root of `f` in `Z_p`, each reduced modulo `p^prec`, sorted.
///
/// A disk `a + p^k Z_p` is examined through `g(t) = f(a + p^k t) / p^c` with
/// `c` the least coefficient valuation. A simple root of `g mod p` holds
/// exactly one root of `f`; a multiple root splits the disk further; no
/// root means the disk is empty.
pub fn padic_roots(f: &[BigInt], p: u64, prec: u32) -> Result<Vec<BigInt>, PadicError> {
    if p > MAX_SCAN_PRIME {
        return Err(PadicError::PrimeTooLarge(p));
    }
    let pb = BigInt::from(p);
    let modulus = pb.pow(prec);
    let mut out = Vec::new();
    let mut stack: Vec<(ZPoly, BigInt, u32)> = vec![(f.to_vec(), BigInt::zero(), 0)];
    while let Some((g, a, k)) = stack.pop() {
        if k > MAX_DEPTH {
            return Err(PadicError::Unresolved);
        }
        let c = g.iter().filter_map(|x| valuation(x, p)).min().unwrap_or(0);
        let scale = pb.pow(c);
        let g: ZPoly = g.iter().map(|x| x / &scale).collect();
        let gbar = zpoly::to_fp(&g, p);
        if fpoly::degree(&gbar).is_none_or(|d| d == 0) {
            continue;
        }
        let dbar = fpoly::derivative(&gbar, p);
        let pk = pb.pow(k);
        for t0 in 0..p {
            if fpoly::eval(&gbar, t0, p) != 0 {
                continue;
            }
            if fpoly::eval(&dbar, t0, p) != 0 {
                let t = hensel_lift(&g, t0, p, prec.saturating_sub(k).max(1));
                out.push((&a + &pk * t).mod_floor(&modulus));
            } else {
                let next = zpoly::compose_affine(&g, &BigInt::from(t0), &pb);
                stack.push((next, &a + &pk * BigInt::from(t0), k + 1));
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitcon::zpoly::{from_i64, from_roots};

    #[test]
    fn roots_of_split_polynomials() {
        let f = from_roots(&[0, 1, 2, 3, 4].map(BigInt::from));
        // roots congruent mod 2 are still separated
        let r = padic_roots(&f, 2, 10).unwrap();
        assert_eq!(r, [0, 1, 2, 3, 4].map(BigInt::from).to_vec());
        let r = padic_roots(&f, 3, 5).unwrap();
        assert_eq!(r.len(), 5);
    }

    #[test]
    fn no_roots_or_hidden_roots() {
        // X^2 - 3 has no root in Z_3; X^2 - 2 none in Z_2; X^2 + 7 two in Z_2
        assert!(padic_roots(&from_i64(&[-3, 0, 1]), 3, 4).unwrap().is_empty());
        assert!(padic_roots(&from_i64(&[-2, 0, 1]), 2, 4).unwrap().is_empty());
        let r = padic_roots(&from_i64(&[7, 0, 1]), 2, 12).unwrap();
        assert_eq!(r.len(), 2);
        let m = BigInt::from(2).pow(12);
        for x in r {
            // x^2 + 7 ≡ 0 to the precision the root is known at (12 - 1 bits)
            let v = (&x * &x + BigInt::from(7)).mod_floor(&m);
            assert!(v.is_zero() || valuation(&v, 2).unwrap() >= 11);
        }
        // X^2 + 1 has two roots in Z_5
        let r = padic_roots(&from_i64(&[1, 0, 1]), 5, 6).unwrap();
        assert_eq!(r.len(), 2);
        let m = BigInt::from(5).pow(6);
        assert!(r.iter().all(|x| (x * x + BigInt::one()).mod_floor(&m).is_zero()));
    }

    #[test]
    fn repeated_root_is_unresolved() {
        assert_eq!(padic_roots(&from_i64(&[1, -2, 1]), 3, 4), Err(PadicError::Unresolved));
    }
}
