//! Galois groups of monic integer polynomials of degree at most 4, from
//! rational roots, discriminants and the cubic resolvent. Used as an
//! independent oracle against the cycle-type certificate.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::zpoly::{discriminant, integer_roots, is_square, ZPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmallGalois {
    Trivial,
    S2,
    A3,
    S3,
    A4,
    S4,
    /// `D4`, `C4` or `V4`: the cubic resolvent has a rational root.
    Imprimitive,
    /// `f` has a rational root.
    Reducible,
}

impl SmallGalois {
    pub fn is_symmetric(self, n: usize) -> bool {
        matches!(
            (n, self),
            (1, SmallGalois::Trivial) | (2, SmallGalois::S2) | (3, SmallGalois::S3) | (4, SmallGalois::S4)
        )
    }
}

/// `y^3 - b y^2 + (ac - 4d) y - (a^2 d - 4bd + c^2)` for
/// `x^4 + a x^3 + b x^2 + c x + d`, whose roots are `θ1θ2 + θ3θ4` and its
/// conjugates.
pub fn cubic_resolvent(f: &[BigInt]) -> ZPoly {
    let (d, c, b, a) = (&f[0], &f[1], &f[2], &f[3]);
    let four = BigInt::from(4);
    vec![
        -(a * a * d - &four * b * d + c * c),
        a * c - &four * d,
        -b.clone(),
        BigInt::from(1),
    ]
}

/// Galois group of a monic `f` of degree `1..=4`, or `None` for larger degree.
pub fn galois_group_small(f: &[BigInt]) -> Option<SmallGalois> {
    let n = f.len().checked_sub(1)?;
    if n == 0 || n > 4 {
        return None;
    }
    if n == 1 {
        return Some(SmallGalois::Trivial);
    }
    if !integer_roots(f).is_empty() {
        return Some(SmallGalois::Reducible);
    }
    let square = is_square(&discriminant(f));
    Some(match n {
        2 => SmallGalois::S2,
        3 if square => SmallGalois::A3,
        3 => SmallGalois::S3,
        _ => {
            if !integer_roots(&cubic_resolvent(f)).is_empty() {
                // also covers f = (quadratic)(quadratic)
                SmallGalois::Imprimitive
            } else if square {
                SmallGalois::A4
            } else {
                SmallGalois::S4
            }
        }
    })
}
