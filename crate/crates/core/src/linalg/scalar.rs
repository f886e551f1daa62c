//! Exact scalars: residues modulo a prime, or arbitrary-precision rationals.
//!
//! Every scalar is kept in canonical form from the moment it is built:
//! residues live in `[0, p)`, rationals are reduced with positive
//! denominator. Canonicality is what makes point-set deduplication and
//! byte-stable serialization possible downstream.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The coefficient field: a prime field GF(p) or the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    /// GF(p) for a prime p.
    Gf(u64),
    /// The field of rational numbers.
    Q,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    /// Builds GF(p), validating primality and size.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= 1 << 31 {
            return Err(Error::ModulusTooLarge(p));
        }
        Ok(FieldSpec::Gf(p))
    }

    pub fn rationals() -> Self {
        FieldSpec::Q
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldSpec::Gf(_))
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            FieldSpec::Gf(p) => Some(*p),
            FieldSpec::Q => None,
        }
    }

    /// Number of points of P^1 over this field, if finite.
    pub fn line_points(&self) -> Option<u64> {
        self.modulus().map(|p| p + 1)
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Gf(_) => Scalar::Gf(0),
            FieldSpec::Q => Scalar::Q(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Gf(_) => Scalar::Gf(1),
            FieldSpec::Q => Scalar::Q(BigRational::one()),
        }
    }

    /// Canonical scalar from a signed integer.
    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Gf(p) => {
                let p = *p as i128;
                Scalar::Gf(((v as i128).rem_euclid(p)) as u64)
            }
            FieldSpec::Q => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
        }
    }

    /// Parses "7", "-3", or "a/b" into a canonical scalar of this field.
    /// Over GF(p) a fraction is resolved by modular inversion.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let bad = |why: &str| {
            Error::BadScalar(s.to_string(), format!("{self}"), why.to_string())
        };
        let (num_s, den_s) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s.trim(), None),
        };
        let num = BigInt::from_str(num_s).map_err(|_| bad("bad numerator"))?;
        let den = match den_s {
            Some(d) => BigInt::from_str(d).map_err(|_| bad("bad denominator"))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        match self {
            FieldSpec::Q => Ok(Scalar::Q(BigRational::new(num, den))),
            FieldSpec::Gf(p) => {
                let pb = BigInt::from(*p);
                let n = num.mod_floor_u64(*p);
                let d = den.mod_floor_u64(*p);
                let _ = pb;
                if d == 0 {
                    return Err(bad("denominator divisible by the modulus"));
                }
                Ok(Scalar::Gf(mul_mod(n, inv_mod(d, *p), *p)))
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Gf(p), Scalar::Gf(x), Scalar::Gf(y)) => Scalar::Gf((x + y) % p),
            (FieldSpec::Q, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x + y),
            _ => panic!("scalar/field variant mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Gf(p), Scalar::Gf(x), Scalar::Gf(y)) => {
                Scalar::Gf((x + (p - y)) % p)
            }
            (FieldSpec::Q, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x - y),
            _ => panic!("scalar/field variant mismatch"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Gf(p), Scalar::Gf(x), Scalar::Gf(y)) => {
                Scalar::Gf(mul_mod(*x, *y, *p))
            }
            (FieldSpec::Q, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x * y),
            _ => panic!("scalar/field variant mismatch"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Gf(p), Scalar::Gf(x)) => Scalar::Gf(if *x == 0 { 0 } else { p - x }),
            (FieldSpec::Q, Scalar::Q(x)) => Scalar::Q(-x),
            _ => panic!("scalar/field variant mismatch"),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Gf(p), Scalar::Gf(x)) => {
                assert!(*x != 0, "inverse of zero");
                Scalar::Gf(inv_mod(*x, *p))
            }
            (FieldSpec::Q, Scalar::Q(x)) => {
                assert!(!x.is_zero(), "inverse of zero");
                Scalar::Q(x.recip())
            }
            _ => panic!("scalar/field variant mismatch"),
        }
    }

    /// Checks the scalar belongs to this field and is canonical.
    pub fn validate(&self, a: &Scalar) -> Result<()> {
        match (self, a) {
            (FieldSpec::Gf(p), Scalar::Gf(x)) => {
                if x < p {
                    Ok(())
                } else {
                    Err(Error::BadScalar(
                        a.to_display_string(),
                        format!("{self}"),
                        "residue out of range".into(),
                    ))
                }
            }
            (FieldSpec::Q, Scalar::Q(_)) => Ok(()),
            _ => Err(Error::FieldMismatch(format!(
                "scalar {} does not belong to {}",
                a.to_display_string(),
                self
            ))),
        }
    }

    /// All field elements, ascending, for finite fields.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            FieldSpec::Gf(p) => Some((0..*p).map(Scalar::Gf).collect()),
            FieldSpec::Q => None,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Gf(p) => write!(f, "GF({p})"),
            FieldSpec::Q => write!(f, "Q"),
        }
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num_integer::Integer;
        let m = self.mod_floor(&BigInt::from(p));
        let (_, digits) = m.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // Extended Euclid; p prime, a != 0 mod p.
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "not invertible");
    s0.rem_euclid(p as i128) as u64
}

/// A canonical field element. The owning context (matrix, point set)
/// carries the `FieldSpec`; a bare scalar only stores its value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Gf(u64),
    Q(BigRational),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Gf(x) => *x == 0,
            Scalar::Q(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Gf(x) => *x == 1,
            Scalar::Q(x) => x.is_one(),
        }
    }

    /// Decimal / fraction string form: "7", "-3/5".
    pub fn to_display_string(&self) -> String {
        match self {
            Scalar::Gf(x) => x.to_string(),
            Scalar::Q(x) => {
                if x.denom().is_one() {
                    x.numer().to_string()
                } else if x.denom().is_negative() {
                    // BigRational keeps denominators positive, but guard anyway.
                    format!("{}/{}", -x.numer(), -x.denom())
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_display_string())
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_display_string())
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = serializer.serialize_map(None)?;
        match self {
            FieldSpec::Gf(p) => {
                m.serialize_entry("kind", "GF")?;
                m.serialize_entry("p", p)?;
            }
            FieldSpec::Q => {
                m.serialize_entry("kind", "Q")?;
            }
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            kind: String,
            #[serde(default)]
            p: Option<u64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        match raw.kind.as_str() {
            "GF" => {
                let p = raw
                    .p
                    .ok_or_else(|| D::Error::custom("field kind GF requires `p`"))?;
                FieldSpec::prime(p).map_err(D::Error::custom)
            }
            "Q" => {
                if raw.p.is_some() {
                    return Err(D::Error::custom("field kind Q takes no modulus"));
                }
                Ok(FieldSpec::Q)
            }
            other => Err(D::Error::custom(format!("unknown field kind `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_validation() {
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(3).is_ok());
        assert_eq!(FieldSpec::prime(4), Err(Error::NotPrime(4)));
        assert_eq!(FieldSpec::prime(1), Err(Error::NotPrime(1)));
        assert_eq!(FieldSpec::prime(0), Err(Error::NotPrime(0)));
    }

    #[test]
    fn parse_canonical_gf() {
        let f = FieldSpec::prime(5).unwrap();
        assert_eq!(f.parse("7").unwrap(), Scalar::Gf(2));
        assert_eq!(f.parse("-1").unwrap(), Scalar::Gf(4));
        // 1/2 = 3 mod 5
        assert_eq!(f.parse("1/2").unwrap(), Scalar::Gf(3));
        assert!(f.parse("1/5").is_err());
    }

    #[test]
    fn parse_canonical_q() {
        let f = FieldSpec::Q;
        assert_eq!(f.parse("-6/4").unwrap().to_display_string(), "-3/2");
        assert_eq!(f.parse("4/2").unwrap().to_display_string(), "2");
        assert_eq!(f.parse("0/9").unwrap().to_display_string(), "0");
        assert!(f.parse("1/0").is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let f = FieldSpec::prime(7).unwrap();
        for x in 1..7 {
            let s = Scalar::Gf(x);
            assert!(f.mul(&s, &f.inv(&s)).is_one());
        }
    }

    #[test]
    fn field_json_shape() {
        let f = FieldSpec::prime(3).unwrap();
        assert_eq!(serde_json::to_string(&f).unwrap(), r#"{"kind":"GF","p":3}"#);
        assert_eq!(serde_json::to_string(&FieldSpec::Q).unwrap(), r#"{"kind":"Q"}"#);
        let back: FieldSpec = serde_json::from_str(r#"{"kind":"GF","p":3}"#).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<FieldSpec>(r#"{"kind":"GF","p":6}"#).is_err());
    }
}
