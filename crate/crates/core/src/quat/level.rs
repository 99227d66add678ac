//! Levels of `Q`, its completions, and quadratic fields, and whether the
//! Hamilton quaternions over a quadratic field form a division ring.
//!
//! Every finite level comes with sums of squares equal to `-1` (exactly, or
//! modulo `p^k` with a Hensel-liftable term), and every lower bound with a
//! certificate that is cheap to recheck.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{rat, BaseField, KElem, QuatError};
use crate::arith::{is_prime, pow_mod};

/// `p`-adic precision of local witnesses unless the caller asks otherwise.
pub const DEFAULT_PRECISION: u32 = 8;

/// Modulus of the exhaustive 2-adic search. A nontrivial zero of
/// `x² + y² + z² + w²` over `Q_2` scales to one in `Z_2` with an odd
/// coordinate, which survives reduction mod 8; so finding none mod 16
/// proves the form anisotropic and `-1` not a sum of three squares.
pub const TWO_ADIC_SEARCH_MODULUS: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Finite(u32),
    Infinite,
}

impl Level {
    pub fn at_least_four(self) -> bool {
        match self {
            Level::Finite(n) => n >= 4,
            Level::Infinite => true,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrWord {
    Num(u64),
    Word(String),
}

impl Serialize for Level {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Level::Finite(n) => s.serialize_u32(*n),
            Level::Infinite => s.serialize_str("INFINITY"),
        }
    }
}

impl<'de> Deserialize<'de> for Level {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match NumOrWord::deserialize(d)? {
            NumOrWord::Num(n @ (1 | 2 | 4)) => Ok(Level::Finite(n as u32)),
            NumOrWord::Word(w) if w == "INFINITY" => Ok(Level::Infinite),
            _ => Err(serde::de::Error::custom("level must be 1, 2, 4 or \"INFINITY\"")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LevelPlace {
    Prime(u64),
    Real,
    Global,
}

impl Serialize for LevelPlace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            LevelPlace::Prime(p) => s.serialize_u64(*p),
            LevelPlace::Real => s.serialize_str("REAL"),
            LevelPlace::Global => s.serialize_str("GLOBAL"),
        }
    }
}

impl<'de> Deserialize<'de> for LevelPlace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match NumOrWord::deserialize(d)? {
            NumOrWord::Num(p) => Ok(LevelPlace::Prime(p)),
            NumOrWord::Word(w) if w == "REAL" => Ok(LevelPlace::Real),
            NumOrWord::Word(w) if w == "GLOBAL" => Ok(LevelPlace::Global),
            _ => Err(serde::de::Error::custom("place must be a prime, \"REAL\" or \"GLOBAL\"")),
        }
    }
}

/// Squares summing to `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LevelWitness {
    /// `Σ t² ≡ -1 (mod modulus)`; the first term is a unit, so the relation
    /// lifts to `Z_p`.
    Residues { modulus: String, terms: Vec<String> },
    /// `Σ (a + b√m)² = -1` exactly, each term given as `[a, b]`.
    Exact { radicand: i64, terms: Vec<[String; 2]> },
}

/// Why no shorter sum of squares exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LevelCertificate {
    /// Level 1 is the minimum.
    Minimal,
    /// `(-1)^((p-1)/2) ≡ -1 (mod p)`, so `-1` is not a square mod `p`.
    EulerCriterion { p: u64, value: u64 },
    /// Exhaustive count mod `modulus`: triples of squares hitting `-1` and
    /// 4-square zeros with an odd coordinate. Both must be zero.
    ResidueSearch { modulus: u64, three_square_hits: u64, primitive_zeros: u64 },
    /// Sums of squares of reals are non-negative.
    Ordered,
    /// `-1` is a square only in `Q(√-1)`.
    MinusOneNotSquare { radicand: i64 },
    /// The field embeds in a completion of the given level.
    Completion { place: String, level: Level },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelResult {
    pub field: String,
    pub place: LevelPlace,
    pub level: Level,
    pub witness: Option<LevelWitness>,
    pub certificate: LevelCertificate,
}

fn hensel_sqrt(a: &BigInt, x0: u64, p: u64, k: u32) -> BigInt {
    // odd p, x0² ≡ a (mod p), x0 ≢ 0
    let pb = BigInt::from(p);
    let mut x = BigInt::from(x0);
    let mut e = 1;
    while e < k {
        e = (2 * e).min(k);
        let m = pb.pow(e);
        let two_x = (&x * 2u32).mod_floor(&m);
        let inv = two_x.extended_gcd(&m).x;
        x = (&x - (&x * &x - a) * inv).mod_floor(&m);
    }
    x
}

/// Square root of `a ≡ 1 (mod 8)` modulo `2^k`, `k >= 3`.
fn two_adic_sqrt(a: &BigInt, k: u32) -> BigInt {
    let mut s = BigInt::one();
    for j in 3..k {
        let m = BigInt::one() << (j + 1);
        if !(&s * &s - a).mod_floor(&m).is_zero() {
            s += BigInt::one() << (j - 1);
        }
    }
    s.mod_floor(&(BigInt::one() << k))
}

fn residues(modulus: &BigInt, terms: &[BigInt]) -> LevelWitness {
    LevelWitness::Residues { modulus: modulus.to_string(), terms: terms.iter().map(|t| t.to_string()).collect() }
}

/// Exhaustive search mod [`TWO_ADIC_SEARCH_MODULUS`].
fn two_adic_search() -> LevelCertificate {
    let m = TWO_ADIC_SEARCH_MODULUS;
    let sq: Vec<u64> = (0..m).map(|x| x * x % m).collect();
    let mut three = 0;
    let mut zeros = 0;
    for x in 0..m {
        for y in 0..m {
            for z in 0..m {
                let s3 = sq[x as usize] + sq[y as usize] + sq[z as usize];
                if s3 % m == m - 1 {
                    three += 1;
                }
                for w in 0..m {
                    let primitive = (x | y | z | w) & 1 == 1;
                    if primitive && (s3 + sq[w as usize]).is_multiple_of(m) {
                        zeros += 1;
                    }
                }
            }
        }
    }
    LevelCertificate::ResidueSearch { modulus: m, three_square_hits: three, primitive_zeros: zeros }
}

/// Level of `Q_p` (or `R`), with a witness modulo `p^precision`.
///
/// `p ≡ 1 (mod 4)` gives 1, `p ≡ 3 (mod 4)` gives 2, `p = 2` gives 4 via
/// `-1 = s² + 1² + 1² + 2²` with `s² = -7`, and the real place gives
/// infinity.
pub fn level_local(place: LevelPlace, precision: u32) -> Result<LevelResult, QuatError> {
    let p = match place {
        LevelPlace::Real => {
            return Ok(LevelResult {
                field: "R".into(),
                place,
                level: Level::Infinite,
                witness: None,
                certificate: LevelCertificate::Ordered,
            })
        }
        LevelPlace::Global => return Err(QuatError::Unsupported),
        LevelPlace::Prime(p) => p,
    };
    if !is_prime(p) {
        return Err(QuatError::NotPrime(p));
    }
    let field = format!("Qp:{p}");
    let (level, witness, certificate) = if p == 2 {
        if precision < 3 {
            return Err(QuatError::Precision(precision));
        }
        let modulus = BigInt::one() << precision;
        let s = two_adic_sqrt(&BigInt::from(-7), precision);
        let terms = [s, BigInt::one(), BigInt::one(), BigInt::from(2)];
        (Level::Finite(4), residues(&modulus, &terms), two_adic_search())
    } else {
        if precision == 0 {
            return Err(QuatError::Precision(precision));
        }
        let modulus = BigInt::from(p).pow(precision);
        let minus_one = BigInt::from(-1);
        if p % 4 == 1 {
            let c = (2..p).find(|&c| pow_mod(c, (p - 1) / 2, p) == p - 1).expect("non-residue exists");
            let x0 = pow_mod(c, (p - 1) / 4, p);
            let x = hensel_sqrt(&minus_one, x0, p, precision);
            (Level::Finite(1), residues(&modulus, &[x]), LevelCertificate::Minimal)
        } else {
            // -1 - x² is a non-zero square for some x; its root is a^((p+1)/4)
            let (x, y0) = (1..p)
                .find_map(|x| {
                    let a = (p - 1 + p - (x * x % p)) % p;
                    (a != 0 && pow_mod(a, (p - 1) / 2, p) == 1).then(|| (x, pow_mod(a, (p + 1) / 4, p)))
                })
                .expect("-1 is a sum of two squares mod p");
            let a = BigInt::from(-1) - BigInt::from(x * x);
            let y = hensel_sqrt(&a, y0, p, precision);
            (
                Level::Finite(2),
                residues(&modulus, &[y, BigInt::from(x)]),
                LevelCertificate::EulerCriterion { p, value: pow_mod(p - 1, (p - 1) / 2, p) },
            )
        }
    };
    let r = LevelResult { field, place, level, witness: Some(witness), certificate };
    if !r.verify() {
        return Err(QuatError::SelfCheck(format!("level witness at {p}")));
    }
    Ok(r)
}

fn kelem_strings(x: &KElem) -> [String; 2] {
    [x.a.to_string(), x.b.to_string()]
}

/// Sums of three integer squares equal to `n`, smallest first.
fn three_squares(n: i64) -> Option<[i64; 3]> {
    let r = n.sqrt();
    for x in 0..=r {
        for y in x..=r {
            let z2 = n - x * x - y * y;
            if z2 < y * y {
                break;
            }
            let z = z2.sqrt();
            if z * z == z2 {
                return Some([x, y, z]);
            }
        }
    }
    None
}

/// Search `-1 = x² + y²` in `Q(√m)`, `m < 0`.
///
/// Any solution with `x = t·y'` shape reduces to integers `C, B, S` and a
/// sum of two squares `k = u² + v²` with `C² - |m| B² = -k S²`; then
/// `x = (uC + vB√m) / kS` and `y = (vC - uB√m) / kS`. The search runs over
/// `u, v < 9`, `S < max_s`, `B < max_b`. A hit proves that `H` splits over
/// `Q(√m)`; a miss proves nothing.
pub fn two_square_search(m: i64, max_s: i64, max_b: i64) -> Option<[KElem; 2]> {
    if m >= 0 {
        return None;
    }
    let n = -m;
    let mut ks: Vec<(i64, i64, i64)> = (0..9).flat_map(|u| (1..9).map(move |v| (u * u + v * v, u, v))).collect();
    ks.sort_unstable();
    ks.dedup_by_key(|t| t.0);
    for (k, u, v) in ks {
        for s in 1..max_s {
            for b in 0..max_b {
                let c2 = n * b * b - k * s * s;
                if c2 < 0 {
                    continue;
                }
                let c = c2.sqrt();
                if c * c != c2 {
                    continue;
                }
                let den = BigInt::from(k * s);
                let q = |x: i64| BigRational::new(x.into(), den.clone());
                let x = KElem { a: q(u * c), b: q(v * b) };
                let y = KElem { a: q(v * c), b: q(-u * b) };
                return Some([x, y]);
            }
        }
    }
    None
}

/// Is `a` a square of a unit in `Z_2`, decided modulo 8 and witnessed by a
/// root modulo `2^precision`.
fn two_adic_unit_square(a: i64, precision: u32) -> Option<BigInt> {
    (a.rem_euclid(8) == 1).then(|| two_adic_sqrt(&BigInt::from(a), precision.max(3)))
}

/// Level of the global field `K`.
pub fn level_global(k: BaseField) -> Result<LevelResult, QuatError> {
    let field = k.to_string();
    let done = |level, witness, certificate| {
        let r = LevelResult { field: field.clone(), place: LevelPlace::Global, level, witness, certificate };
        if r.verify() {
            Ok(r)
        } else {
            Err(QuatError::SelfCheck(format!("global level of {field}")))
        }
    };
    let m = match k {
        BaseField::Quadratic(m) if m < 0 => m,
        _ => {
            let c = LevelCertificate::Completion { place: "REAL".into(), level: Level::Infinite };
            return done(Level::Infinite, None, c);
        }
    };
    let exact = |terms: Vec<KElem>| LevelWitness::Exact { radicand: m, terms: terms.iter().map(kelem_strings).collect() };
    if m == -1 {
        return done(Level::Finite(1), Some(exact(vec![KElem::from_ints(0, 1)])), LevelCertificate::Minimal);
    }
    if m.rem_euclid(8) == 1 {
        // -1 = (√m)² + (-m - 1) and -m - 1 ≡ 6 (mod 8) is a sum of three squares
        let [x, y, z] = three_squares(-m - 1).expect("not of the form 4^a(8b+7)");
        let terms = vec![KElem::from_ints(0, 1), KElem::from_ints(x, 0), KElem::from_ints(y, 0), KElem::from_ints(z, 0)];
        let c = LevelCertificate::Completion { place: "2".into(), level: Level::Finite(4) };
        return done(Level::Finite(4), Some(exact(terms)), c);
    }
    let witness = two_square_search(m, 40, 400).map(|w| exact(w.to_vec()));
    done(Level::Finite(2), witness, LevelCertificate::MinusOneNotSquare { radicand: m })
}

fn check_exact(m: i64, terms: &[[String; 2]]) -> Option<bool> {
    let mut sum = KElem::zero();
    for [a, b] in terms {
        let x = KElem { a: a.parse().ok()?, b: b.parse().ok()? };
        sum = sum.add(&x.mul(&x, m));
    }
    Some(sum == KElem::rational(rat(-1)))
}

impl LevelResult {
    /// Recheck the witness arithmetic, its length against the level, and the
    /// lower-bound certificate.
    pub fn verify(&self) -> bool {
        let length_ok = |n: usize| match self.level {
            Level::Finite(l) => n == l as usize,
            Level::Infinite => false,
        };
        let witness_ok = match &self.witness {
            None => self.level == Level::Infinite || matches!(self.place, LevelPlace::Global),
            Some(LevelWitness::Residues { modulus, terms }) => {
                let (Ok(m), Ok(ts)) =
                    (modulus.parse::<BigInt>(), terms.iter().map(|t| t.parse::<BigInt>()).collect::<Result<Vec<_>, _>>())
                else {
                    return false;
                };
                let sum: BigInt = ts.iter().map(|t| t * t).sum();
                let p = match self.place {
                    LevelPlace::Prime(p) => BigInt::from(p),
                    _ => return false,
                };
                let unit = ts.first().is_some_and(|t| !t.mod_floor(&p).is_zero());
                length_ok(ts.len()) && unit && (sum + 1u32).mod_floor(&m).is_zero()
            }
            Some(LevelWitness::Exact { radicand, terms }) => {
                length_ok(terms.len()) && check_exact(*radicand, terms) == Some(true)
            }
        };
        let cert_ok = match &self.certificate {
            LevelCertificate::Minimal => self.level == Level::Finite(1),
            LevelCertificate::EulerCriterion { p, value } => {
                *value == p - 1 && pow_mod(p - 1, (p - 1) / 2, *p) == p - 1 && self.level == Level::Finite(2)
            }
            c @ LevelCertificate::ResidueSearch { .. } => {
                *c == two_adic_search()
                    && matches!(c, LevelCertificate::ResidueSearch { three_square_hits: 0, primitive_zeros: 0, .. })
            }
            LevelCertificate::Ordered => self.level == Level::Infinite,
            LevelCertificate::MinusOneNotSquare { radicand } => *radicand != -1 && self.level == Level::Finite(2),
            LevelCertificate::Completion { level, .. } => *level == self.level,
        };
        witness_ok && cert_ok
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaceLevel {
    pub place: String,
    pub local_degree: u32,
    pub level: Level,
}

/// Places of `K` that matter for the level: real, complex, and those above
/// 2. Odd places never reach level 4.
fn places(k: BaseField, precision: u32) -> (Vec<PlaceLevel>, Option<LevelWitness>) {
    let pl = |place: &str, local_degree, level| PlaceLevel { place: place.into(), local_degree, level };
    match k {
        BaseField::Rational => (vec![pl("REAL", 1, Level::Infinite), pl("2", 1, Level::Finite(4))], None),
        BaseField::Quadratic(m) => {
            let mut out = if m > 0 {
                vec![pl("REAL+", 1, Level::Infinite), pl("REAL-", 1, Level::Infinite)]
            } else {
                vec![pl("COMPLEX", 2, Level::Finite(1))]
            };
            let root = two_adic_unit_square(m, precision);
            if root.is_some() {
                // 2 splits: both completions are Q_2
                out.push(pl("2+", 1, Level::Finite(4)));
                out.push(pl("2-", 1, Level::Finite(4)));
            } else {
                // a quadratic extension of Q_2 splits H, so level <= 2;
                // it is 1 exactly when -m is a 2-adic square
                let level = if two_adic_unit_square(-m, 3).is_some() { 1 } else { 2 };
                out.push(pl("2", 2, Level::Finite(level)));
            }
            let modulus = BigInt::one() << precision.max(3);
            (out, root.map(|r| residues(&modulus, &[r])))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Feasibility {
    pub field: String,
    pub feasible: bool,
    /// A place whose completion has level at least 4, real places first.
    pub witness_place: Option<String>,
    pub places: Vec<PlaceLevel>,
    /// When 2 splits in `K`, a root of `m` modulo a power of 2.
    pub two_adic_root: Option<LevelWitness>,
}

/// Does some completion of `K` have level at least 4?
pub fn theorem13_feasible(k: BaseField) -> Feasibility {
    let (places, two_adic_root) = places(k, DEFAULT_PRECISION);
    let witness_place = places.iter().find(|p| p.level.at_least_four()).map(|p| p.place.clone());
    Feasibility { field: k.to_string(), feasible: witness_place.is_some(), witness_place, places, two_adic_root }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisionReport {
    pub field: String,
    pub division: bool,
    /// Places where `(-1, -1)` is `-1`, i.e. local level at least 4.
    pub ramified_places: Vec<String>,
    /// A bounded-height `-1 = x² + y²` in `K`, if one was found.
    pub two_square_witness: Option<[[String; 2]; 2]>,
}

/// Whether `H_K` is a division ring, from the local Hilbert symbols. The
/// number of ramified places must be even; a two-square identity found by
/// bounded search must agree with a split verdict.
pub fn is_division_ring(k: BaseField) -> Result<DivisionReport, QuatError> {
    let (places, _) = places(k, DEFAULT_PRECISION);
    let ramified: Vec<String> = places.iter().filter(|p| p.level.at_least_four()).map(|p| p.place.clone()).collect();
    if !ramified.len().is_multiple_of(2) {
        return Err(QuatError::SelfCheck(format!("odd number of ramified places over {k}")));
    }
    let division = !ramified.is_empty();
    let witness = match k {
        BaseField::Quadratic(m) if m < 0 => two_square_search(m, 40, 400),
        _ => None,
    };
    if division && witness.is_some() {
        return Err(QuatError::SelfCheck(format!("{k} has a two-square identity but H is ramified")));
    }
    Ok(DivisionReport {
        field: k.to_string(),
        division,
        ramified_places: ramified,
        two_square_witness: witness.map(|[x, y]| [kelem_strings(&x), kelem_strings(&y)]),
    })
}
