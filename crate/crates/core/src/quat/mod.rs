//! Hamilton quaternions `(-1, -1)` over `Q` and real or imaginary quadratic
//! fields, with exact rational arithmetic.

mod level;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arith::{factorize, is_prime};

pub use level::{
    is_division_ring, level_global, level_local, theorem13_feasible, two_square_search, DivisionReport,
    Feasibility, Level, LevelCertificate, LevelPlace, LevelResult, LevelWitness, PlaceLevel,
    DEFAULT_PRECISION, TWO_ADIC_SEARCH_MODULUS,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuatError {
    #[error("cannot parse field descriptor {0:?}")]
    Parse(String),
    #[error("{0} is not squarefree or is 0 or 1")]
    NotSquarefree(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("element has norm zero and no inverse")]
    ZeroNorm,
    #[error("operands live over different base fields")]
    BaseMismatch,
    #[error("precision {0} is below what the witness needs")]
    Precision(u32),
    #[error("operation needs a global field, not a completion")]
    Unsupported,
    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

/// `Q` or `Q(√m)` for squarefree `m ∉ {0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseField {
    Rational,
    Quadratic(i64),
}

/// A field descriptor: a global base field or the completion `Q_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Global(BaseField),
    Padic(u64),
}

fn squarefree(m: i64) -> bool {
    m != 0 && m != 1 && factorize(m.unsigned_abs()).iter().all(|&(_, e)| e == 1)
}

impl BaseField {
    pub fn quadratic(m: i64) -> Result<Self, QuatError> {
        if squarefree(m) {
            Ok(BaseField::Quadratic(m))
        } else {
            Err(QuatError::NotSquarefree(m))
        }
    }

    /// `m`, or `0` for `Q` (where the `√m` part is always zero).
    pub fn radicand(self) -> i64 {
        match self {
            BaseField::Rational => 0,
            BaseField::Quadratic(m) => m,
        }
    }

    pub fn real_places(self) -> u32 {
        match self {
            BaseField::Rational => 1,
            BaseField::Quadratic(m) if m > 0 => 2,
            BaseField::Quadratic(_) => 0,
        }
    }

    pub fn degree(self) -> u32 {
        match self {
            BaseField::Rational => 1,
            BaseField::Quadratic(_) => 2,
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rational => f.write_str("Q"),
            BaseField::Quadratic(m) => write!(f, "Q(sqrt:{m})"),
        }
    }
}

impl FromStr for BaseField {
    type Err = QuatError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.parse()? {
            FieldDescriptor::Global(k) => Ok(k),
            FieldDescriptor::Padic(_) => Err(QuatError::Unsupported),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Global(k) => k.fmt(f),
            FieldDescriptor::Padic(p) => write!(f, "Qp:{p}"),
        }
    }
}

impl FromStr for FieldDescriptor {
    type Err = QuatError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || QuatError::Parse(s.to_string());
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldDescriptor::Global(BaseField::Rational));
        }
        if let Some(p) = s.strip_prefix("Qp:") {
            let p: u64 = p.parse().map_err(|_| bad())?;
            return if is_prime(p) { Ok(FieldDescriptor::Padic(p)) } else { Err(QuatError::NotPrime(p)) };
        }
        let m = s.strip_prefix("Q(sqrt:").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        Ok(FieldDescriptor::Global(BaseField::quadratic(m.parse().map_err(|_| bad())?)?))
    }
}

/// `a + b√m` in a [`BaseField`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KElem {
    pub a: BigRational,
    pub b: BigRational,
}

impl KElem {
    pub fn rational(a: BigRational) -> Self {
        KElem { a, b: BigRational::zero() }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        KElem { a: BigRational::from_integer(a.into()), b: BigRational::from_integer(b.into()) }
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn add(&self, o: &Self) -> Self {
        KElem { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    fn sub(&self, o: &Self) -> Self {
        KElem { a: &self.a - &o.a, b: &self.b - &o.b }
    }

    fn neg(&self) -> Self {
        KElem { a: -&self.a, b: -&self.b }
    }

    fn mul(&self, o: &Self, m: i64) -> Self {
        let m = BigRational::from_integer(m.into());
        KElem { a: &self.a * &o.a + m * &self.b * &o.b, b: &self.a * &o.b + &self.b * &o.a }
    }

    fn inv(&self, m: i64) -> Option<Self> {
        let n = &self.a * &self.a - BigRational::from_integer(m.into()) * &self.b * &self.b;
        if n.is_zero() {
            return None;
        }
        Some(KElem { a: &self.a / &n, b: -&self.b / &n })
    }
}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            let sign = if self.b.is_negative() { '-' } else { '+' };
            write!(f, "{}{}{}*r", self.a, sign, self.b.abs())
        }
    }
}

/// `a + b i + c j + d k` with `i² = j² = k² = ijk = -1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quaternion {
    pub base: BaseField,
    pub coeffs: [KElem; 4],
}

impl Quaternion {
    pub fn new(base: BaseField, coeffs: [KElem; 4]) -> Result<Self, QuatError> {
        if base == BaseField::Rational && coeffs.iter().any(|c| !c.b.is_zero()) {
            return Err(QuatError::BaseMismatch);
        }
        Ok(Quaternion { base, coeffs })
    }

    /// Quaternion over `Q` with integer coefficients.
    pub fn from_ints(c: [i64; 4]) -> Self {
        Quaternion { base: BaseField::Rational, coeffs: c.map(|x| KElem::from_ints(x, 0)) }
    }

    /// Quaternion over `Q` with rational coefficients.
    pub fn from_rationals(c: [BigRational; 4]) -> Self {
        Quaternion { base: BaseField::Rational, coeffs: c.map(KElem::rational) }
    }

    pub fn one(base: BaseField) -> Self {
        Quaternion { base, coeffs: [KElem::one(), KElem::zero(), KElem::zero(), KElem::zero()] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(KElem::is_zero)
    }

    fn check(&self, o: &Self) -> Result<i64, QuatError> {
        if self.base == o.base {
            Ok(self.base.radicand())
        } else {
            Err(QuatError::BaseMismatch)
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, QuatError> {
        self.check(o)?;
        let c = std::array::from_fn(|i| self.coeffs[i].add(&o.coeffs[i]));
        Ok(Quaternion { base: self.base, coeffs: c })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, QuatError> {
        self.check(o)?;
        let c = std::array::from_fn(|i| self.coeffs[i].sub(&o.coeffs[i]));
        Ok(Quaternion { base: self.base, coeffs: c })
    }

    pub fn mul(&self, o: &Self) -> Result<Self, QuatError> {
        let m = self.check(o)?;
        let [a1, b1, c1, d1] = &self.coeffs;
        let [a2, b2, c2, d2] = &o.coeffs;
        let p = |x: &KElem, y: &KElem| x.mul(y, m);
        let a = p(a1, a2).sub(&p(b1, b2)).sub(&p(c1, c2)).sub(&p(d1, d2));
        let b = p(a1, b2).add(&p(b1, a2)).add(&p(c1, d2)).sub(&p(d1, c2));
        let c = p(a1, c2).sub(&p(b1, d2)).add(&p(c1, a2)).add(&p(d1, b2));
        let d = p(a1, d2).add(&p(b1, c2)).sub(&p(c1, b2)).add(&p(d1, a2));
        Ok(Quaternion { base: self.base, coeffs: [a, b, c, d] })
    }

    pub fn conj(&self) -> Self {
        let [a, b, c, d] = &self.coeffs;
        Quaternion { base: self.base, coeffs: [a.clone(), b.neg(), c.neg(), d.neg()] }
    }

    /// Reduced norm `a² + b² + c² + d²`, an element of the base field.
    pub fn norm(&self) -> KElem {
        let m = self.base.radicand();
        self.coeffs.iter().fold(KElem::zero(), |acc, x| acc.add(&x.mul(x, m)))
    }

    pub fn scale(&self, k: &KElem) -> Self {
        let m = self.base.radicand();
        Quaternion { base: self.base, coeffs: std::array::from_fn(|i| self.coeffs[i].mul(k, m)) }
    }

    pub fn inv(&self) -> Result<Self, QuatError> {
        let n = self.norm().inv(self.base.radicand()).ok_or(QuatError::ZeroNorm)?;
        Ok(self.conj().scale(&n))
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.coeffs;
        write!(f, "({a}) + ({b})i + ({c})j + ({d})k")?;
        if let BaseField::Quadratic(m) = self.base {
            write!(f, " with r^2 = {m}")?;
        }
        Ok(())
    }
}

/// Integer `n` as a rational, for tests and witnesses.
pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn basis(i: usize) -> Quaternion {
        let mut c = [0; 4];
        c[i] = 1;
        Quaternion::from_ints(c)
    }

    #[test]
    fn hamilton_table() {
        let (one, i, j, k) = (basis(0), basis(1), basis(2), basis(3));
        let neg = |q: &Quaternion| q.scale(&KElem::from_ints(-1, 0));
        let minus_one = neg(&one);
        for q in [&i, &j, &k] {
            assert_eq!(q.mul(q).unwrap(), minus_one);
        }
        assert_eq!(i.mul(&j).unwrap().mul(&k).unwrap(), minus_one);
        let table = [
            (&i, &j, k.clone()),
            (&j, &k, i.clone()),
            (&k, &i, j.clone()),
            (&j, &i, neg(&k)),
            (&k, &j, neg(&i)),
            (&i, &k, neg(&j)),
        ];
        for (x, y, want) in table {
            assert_eq!(x.mul(y).unwrap(), want);
        }
    }

    #[test]
    fn examples() {
        let a = Quaternion::from_ints([1, 1, 0, 0]);
        let b = Quaternion::from_ints([1, -1, 0, 0]);
        assert_eq!(a.mul(&b).unwrap(), Quaternion::from_ints([2, 0, 0, 0]));
        assert_eq!(basis(1).inv().unwrap(), Quaternion::from_ints([0, -1, 0, 0]));
        assert_eq!(Quaternion::from_ints([0; 4]).inv(), Err(QuatError::ZeroNorm));
    }

    #[test]
    fn norm_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut r = || BigRational::new(rng.gen_range(-50..=50).into(), rng.gen_range(1..=9).into());
        for _ in 0..500 {
            let x = Quaternion::from_rationals([r(), r(), r(), r()]);
            let y = Quaternion::from_rationals([r(), r(), r(), r()]);
            let lhs = x.mul(&y).unwrap().norm();
            let rhs = x.norm().mul(&y.norm(), 0);
            assert_eq!(lhs, rhs);
            if !x.is_zero() {
                assert_eq!(x.mul(&x.inv().unwrap()).unwrap(), Quaternion::one(BaseField::Rational));
            }
        }
    }

    #[test]
    fn split_over_gaussian_field() {
        let k = BaseField::quadratic(-1).unwrap();
        // 1 + r i with r = √-1 has norm 1 + r² = 0
        let q = Quaternion::new(k, [KElem::one(), KElem::from_ints(0, 1), KElem::zero(), KElem::zero()]).unwrap();
        assert!(q.norm().is_zero());
        assert_eq!(q.inv(), Err(QuatError::ZeroNorm));
        let k7 = BaseField::quadratic(-7).unwrap();
        let x = Quaternion::new(k7, [KElem::from_ints(1, 1), KElem::from_ints(0, 2), KElem::one(), KElem::zero()])
            .unwrap();
        assert_eq!(x.mul(&x.inv().unwrap()).unwrap(), Quaternion::one(k7));
    }

    #[test]
    fn descriptors() {
        for s in ["Q", "Q(sqrt:-1)", "Q(sqrt:2)", "Qp:5"] {
            assert_eq!(s.parse::<FieldDescriptor>().unwrap().to_string(), s);
        }
        assert_eq!("Q(sqrt:4)".parse::<FieldDescriptor>(), Err(QuatError::NotSquarefree(4)));
        assert_eq!("Q(sqrt:1)".parse::<FieldDescriptor>(), Err(QuatError::NotSquarefree(1)));
        assert_eq!("Qp:9".parse::<FieldDescriptor>(), Err(QuatError::NotPrime(9)));
        assert!("R".parse::<FieldDescriptor>().is_err());
    }
}
