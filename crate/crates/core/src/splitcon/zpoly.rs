//! Dense polynomials over `Z` (ascending `BigInt` coefficients, trimmed).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::fpoly;

pub type ZPoly = Vec<BigInt>;

pub fn trim(f: &mut ZPoly) {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
}

pub fn from_i64(c: &[i64]) -> ZPoly {
    let mut f: ZPoly = c.iter().map(|&x| BigInt::from(x)).collect();
    trim(&mut f);
    f
}

pub fn degree(f: &[BigInt]) -> Option<usize> {
    f.len().checked_sub(1)
}

pub fn eval(f: &[BigInt], x: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

pub fn derivative(f: &[BigInt]) -> ZPoly {
    let mut d: ZPoly = f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    trim(&mut d);
    d
}

pub fn mul(f: &[BigInt], g: &[BigInt]) -> ZPoly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    trim(&mut out);
    out
}

/// `∏ (X - r)` over the given roots.
pub fn from_roots(roots: &[BigInt]) -> ZPoly {
    roots.iter().fold(vec![BigInt::one()], |acc, r| mul(&acc, &[-r, BigInt::one()]))
}

/// `f(a + b·t)` as a polynomial in `t`.
pub fn compose_affine(f: &[BigInt], a: &BigInt, b: &BigInt) -> ZPoly {
    let lin = vec![a.clone(), b.clone()];
    let mut out: ZPoly = Vec::new();
    for c in f.iter().rev() {
        out = mul(&out, &lin);
        if out.is_empty() {
            out.push(c.clone());
        } else {
            out[0] += c;
        }
        trim(&mut out);
    }
    out
}

/// Division by a monic polynomial, exact over `Z`.
pub fn divrem_monic(f: &[BigInt], g: &[BigInt]) -> (ZPoly, ZPoly) {
    let dg = degree(g).expect("nonzero divisor");
    debug_assert!(g[dg].is_one());
    let mut r = f.to_vec();
    trim(&mut r);
    if r.len() <= dg {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - dg];
    while r.len() > dg {
        let dr = r.len() - 1;
        let c = r[dr].clone();
        let s = dr - dg;
        for (j, b) in g.iter().enumerate() {
            r[s + j] -= &c * b;
        }
        q[s] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Coefficients reduced into `[0, m)`.
pub fn reduce(f: &[BigInt], m: &BigInt) -> ZPoly {
    let mut out: ZPoly = f.iter().map(|c| c.mod_floor(m)).collect();
    trim(&mut out);
    out
}

/// Image in `F_p[X]`.
pub fn to_fp(f: &[BigInt], p: u64) -> fpoly::Poly {
    let pb = BigInt::from(p);
    let mut out: fpoly::Poly = f
        .iter()
        .map(|c| {
            let r = c.mod_floor(&pb);
            r.to_u64_digits().1.first().copied().unwrap_or(0)
        })
        .collect();
    fpoly::trim(&mut out);
    out
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant via the Sylvester matrix.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (df, dg) = match (degree(f), degree(g)) {
        (Some(a), Some(b)) => (a, b),
        _ => return BigInt::zero(),
    };
    let size = df + dg;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows = Vec::with_capacity(size);
    for i in 0..dg {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in f.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..df {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in g.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    det(rows)
}

/// Discriminant of a monic polynomial: `(-1)^(n(n-1)/2) Res(f, f')`.
pub fn discriminant(f: &[BigInt]) -> BigInt {
    let n = degree(f).unwrap_or(0);
    let r = resultant(f, &derivative(f));
    if (n * n.saturating_sub(1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

pub fn is_square(d: &BigInt) -> bool {
    if d.is_negative() {
        return false;
    }
    let s = d.sqrt();
    &s * &s == *d
}

fn primitive(mut f: ZPoly) -> ZPoly {
    let g = f.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        f.iter_mut().for_each(|c| *c /= &g);
    }
    f
}

/// `c·a mod b` for a positive constant `c` chosen so the division is exact.
fn positive_prem(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let db = degree(b).unwrap();
    let lc = b[db].abs();
    let mut r = a.to_vec();
    trim(&mut r);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r[dr].clone();
        let s = dr - db;
        r.iter_mut().for_each(|x| *x *= &lc);
        // b[db] = ±lc, so c·b[db]·X^s cancels lc·c·X^dr after sign fix
        let factor = if b[db].is_negative() { -c } else { c };
        for (j, bj) in b.iter().enumerate() {
            r[s + j] -= &factor * bj;
        }
        trim(&mut r);
    }
    r
}

/// Number of distinct real roots, by a Sturm sequence kept primitive over `Z`.
pub fn sturm_count(f: &[BigInt]) -> usize {
    if degree(f).is_none_or(|d| d == 0) {
        return 0;
    }
    let mut seq = vec![primitive(f.to_vec()), primitive(derivative(f))];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() || degree(&seq[n - 1]) == Some(0) {
            break;
        }
        let r = positive_prem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(primitive(r.into_iter().map(|c| -c).collect()));
    }
    seq.retain(|p| !p.is_empty());
    let variations = |signs: Vec<i8>| signs.windows(2).filter(|w| w[0] != w[1]).count();
    let at_pos: Vec<i8> = seq.iter().map(|p| if p.last().unwrap().is_positive() { 1 } else { -1 }).collect();
    let at_neg: Vec<i8> = seq
        .iter()
        .map(|p| {
            let s = if p.last().unwrap().is_positive() { 1 } else { -1 };
            if (p.len() - 1) % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect();
    variations(at_neg) - variations(at_pos)
}

fn sign(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Integers `k` such that every real root of `f` lies in some `[k, k+1]`.
/// Built by recursion on the derivative: between consecutive brackets of
/// `f'` the polynomial is monotone, so an integer bisection on each
/// sign change finds the roots of `f`.
pub fn real_root_brackets(f: &[BigInt]) -> Vec<BigInt> {
    let d = match degree(f) {
        None | Some(0) => return Vec::new(),
        Some(d) => d,
    };
    if d == 1 {
        return vec![(-&f[0]).div_floor(&f[1])];
    }
    let bound = BigInt::one() + f.iter().map(|c| c.abs()).max().unwrap();
    let mut points: Vec<BigInt> = vec![-&bound, bound.clone()];
    for k in real_root_brackets(&derivative(f)) {
        if k > -&bound && k < bound {
            points.push(k.clone());
        }
        if &k + 1 > -&bound && &k + 1 < bound {
            points.push(k + 1);
        }
    }
    points.sort();
    points.dedup();
    let mut out = Vec::new();
    for w in points.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if b - a == BigInt::one() {
            out.push(a.clone());
            continue;
        }
        let (sa, sb) = (sign(&eval(f, a)), sign(&eval(f, b)));
        if sa == 0 {
            out.push(a.clone());
        }
        if sb == 0 {
            out.push(b.clone());
        }
        if sa * sb < 0 {
            let (mut lo, mut hi) = (a.clone(), b.clone());
            while &hi - &lo > BigInt::one() {
                let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
                let sm = sign(&eval(f, &mid));
                if sm == 0 {
                    lo = mid.clone();
                    hi = mid + 1;
                } else if sm == sa {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(lo);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// All integer roots, found without any root counting: they are the
/// bracket endpoints at which `f` vanishes.
pub fn integer_roots(f: &[BigInt]) -> Vec<BigInt> {
    let mut cands: Vec<BigInt> = real_root_brackets(f).into_iter().flat_map(|k| [k.clone(), k + 1]).collect();
    cands.sort();
    cands.dedup();
    cands.into_iter().filter(|k| eval(f, k).is_zero()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminants() {
        // X^2 - 3X + 2: disc 1; X^3 - 2: disc -108
        assert_eq!(discriminant(&from_i64(&[2, -3, 1])), BigInt::from(1));
        assert_eq!(discriminant(&from_i64(&[-2, 0, 0, 1])), BigInt::from(-108));
        assert_eq!(discriminant(&from_i64(&[1, 0, 1])), BigInt::from(-4));
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(sturm_count(&from_i64(&[1, 0, 1])), 0);
        assert_eq!(sturm_count(&from_i64(&[-1, 0, 1])), 2);
        let f = from_roots(&[-5, 1, 2, 3, 100].map(BigInt::from));
        assert_eq!(sturm_count(&f), 5);
        assert_eq!(sturm_count(&from_i64(&[-2, 0, 0, 1])), 1);
        // (X^2+1)(X-1)(X+2)
        assert_eq!(sturm_count(&mul(&from_i64(&[1, 0, 1]), &from_i64(&[-2, 1, 1]))), 2);
    }

    #[test]
    fn integer_root_finder() {
        let f = from_roots(&[-7, 0, 3, 3, 1000].map(BigInt::from));
        assert_eq!(integer_roots(&f), [-7, 0, 3, 1000].map(BigInt::from).to_vec());
        assert!(integer_roots(&from_i64(&[-2, 0, 1])).is_empty());
        // roots 1/2 apart around an integer: 4X^2 - 1
        assert!(integer_roots(&from_i64(&[-1, 0, 4])).is_empty());
        assert_eq!(integer_roots(&from_i64(&[-6, 1, 1])), [-3, 2].map(BigInt::from).to_vec());
    }

    #[test]
    fn affine_composition_and_division() {
        let f = from_i64(&[1, 2, 3]);
        let g = compose_affine(&f, &BigInt::from(2), &BigInt::from(5));
        for t in -3..4 {
            let t = BigInt::from(t);
            assert_eq!(eval(&g, &t), eval(&f, &(BigInt::from(2) + BigInt::from(5) * &t)));
        }
        let (q, r) = divrem_monic(&from_i64(&[5, 0, 0, 1]), &from_i64(&[-1, 1]));
        assert_eq!(q, from_i64(&[1, 1, 1]));
        assert_eq!(r, from_i64(&[6]));
    }
}
