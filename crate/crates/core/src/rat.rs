//! Exact rational scalars.
//!
//! Thin newtype over [`BigRational`] that fixes the text form used by every
//! file format in the crate: `n` for integers and `n/d` otherwise.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: i64, denom: i64) -> Rat {
        assert!(denom != 0, "zero denominator");
        Rat(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_int(v: i64) -> Rat {
        Rat(BigRational::from_integer(v.into()))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Rat {
        Rat(BigRational::new(numer, denom))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn signum(&self) -> i32 {
        if self.0.is_zero() {
            0
        } else if self.0.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn lesser<'a>(&'a self, other: &'a Rat) -> &'a Rat {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn greater<'a>(&'a self, other: &'a Rat) -> &'a Rat {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    /// Least common multiple of the denominators of `values`.
    pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
        values
            .into_iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Rat {
        Rat::from_int(v)
    }
}

impl From<BigInt> for Rat {
    fn from(v: BigInt) -> Rat {
        Rat(BigRational::from_integer(v))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRatError {
    #[error("invalid rational literal {0:?}")]
    Invalid(String),
    #[error("zero or negative denominator in {0:?}")]
    BadDenominator(String),
}

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Rat, ParseRatError> {
        let s = s.trim();
        let invalid = || ParseRatError::Invalid(s.to_string());
        let parse_int = |t: &str| -> Result<BigInt, ParseRatError> {
            let t = t.trim();
            let digits = t.strip_prefix('-').unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(invalid());
            }
            t.parse::<BigInt>().map_err(|_| invalid())
        };
        match s.split_once('/') {
            None => Ok(Rat::from(parse_int(s)?)),
            Some((n, d)) => {
                if d.trim().starts_with('-') {
                    return Err(ParseRatError::BadDenominator(s.to_string()));
                }
                let d = parse_int(d)?;
                if !d.is_positive() {
                    return Err(ParseRatError::BadDenominator(s.to_string()));
                }
                Ok(Rat::from_big(parse_int(n)?, d))
            }
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl<'a, 'b> $tr<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'b Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl<'b> $tr<&'b Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'b Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $tr<Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_canonical() {
        assert_eq!(Rat::new(4, 2).to_string(), "2");
        assert_eq!(Rat::new(-6, 4).to_string(), "-3/2");
        assert_eq!(Rat::new(3, -9).to_string(), "-1/3");
    }

    #[test]
    fn parse_forms() {
        assert_eq!("11/9".parse::<Rat>().unwrap(), Rat::new(11, 9));
        assert_eq!("-4".parse::<Rat>().unwrap(), Rat::from_int(-4));
        assert_eq!("6/4".parse::<Rat>().unwrap(), Rat::new(3, 2));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("1/-2".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
        assert!("".parse::<Rat>().is_err());
    }

    fn rat() -> impl Strategy<Value = Rat> {
        (-1000i64..1000, 1i64..200).prop_map(|(n, d)| Rat::new(n, d))
    }

    proptest! {
        #[test]
        fn arithmetic_is_exact(a in rat(), b in rat()) {
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!(&(&a * &b) / &b, a.clone());
            }
            let s = &a + &b;
            prop_assert!(s.denom().is_positive());
            prop_assert_eq!(num_integer::Integer::gcd(s.numer(), s.denom()).abs() <= BigInt::one() || s.is_zero(), true);
        }

        #[test]
        fn text_round_trip(a in rat()) {
            prop_assert_eq!(a.to_string().parse::<Rat>().unwrap(), a);
        }
    }
}
