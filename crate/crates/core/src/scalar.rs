//! Exact arithmetic over the Gaussian rationals `Q(i)`.
//!
//! A [`GaussianRational`] is a complex number whose real and imaginary parts
//! are arbitrary-precision rationals. Every operation is exact; there is no
//! rounding anywhere in this crate, so equality and zero tests are decidable
//! and cheap. Values are always kept in reduced canonical form (both parts
//! reduced, denominators positive), which makes equality structural.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::traits::{One, Signed, Zero};
use num::BigInt;

use crate::error::Error;

/// Arbitrary-precision rational number, always stored reduced with a
/// positive denominator.
pub type Rational = num::BigRational;

/// An element of `Q(i)`: `re + im*i` with exact rational parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussianRational {
    re: Rational,
    im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussianRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `num/den + 0i`. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `re^2 + im^2`, the exact squared modulus.
    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Exact multiplicative inverse; `a * a.inv() == 1`.
    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm_sq();
        Ok(GaussianRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, Error> {
        Ok(self * &rhs.inv()?)
    }

    /// Parses the scalar text grammar `R | R SIGN R'i' | R'i'` where `R` is
    /// `['-']digits['/'digits]`. No whitespace is allowed inside a token.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let bytes = text.as_bytes();
        let mut pos = 0usize;

        let first = parse_rational_token(bytes, &mut pos)?;
        match bytes.get(pos) {
            None => Ok(Self::from_rational(first)),
            Some(b'i') => {
                pos += 1;
                expect_end(bytes, pos)?;
                Ok(GaussianRational {
                    re: Rational::zero(),
                    im: first,
                })
            }
            Some(sign @ (b'+' | b'-')) => {
                let negate = *sign == b'-';
                pos += 1;
                let second = parse_rational_token(bytes, &mut pos)?;
                match bytes.get(pos) {
                    Some(b'i') => {
                        pos += 1;
                        expect_end(bytes, pos)?;
                        let im = if negate { -second } else { second };
                        Ok(GaussianRational { re: first, im })
                    }
                    _ => Err(Error::Parse {
                        pos,
                        msg: "expected 'i' after the imaginary part".into(),
                    }),
                }
            }
            Some(_) => Err(Error::Parse {
                pos,
                msg: "unexpected character".into(),
            }),
        }
    }
}

fn expect_end(bytes: &[u8], pos: usize) -> Result<(), Error> {
    if pos == bytes.len() {
        Ok(())
    } else {
        Err(Error::Parse {
            pos,
            msg: "trailing characters after scalar".into(),
        })
    }
}

fn parse_rational_token(bytes: &[u8], pos: &mut usize) -> Result<Rational, Error> {
    let negative = if bytes.get(*pos) == Some(&b'-') {
        *pos += 1;
        true
    } else {
        false
    };
    let numer = parse_digits(bytes, pos)?;
    let denom = if bytes.get(*pos) == Some(&b'/') {
        *pos += 1;
        let den_pos = *pos;
        let d = parse_digits(bytes, pos)?;
        if d.is_zero() {
            return Err(Error::Parse {
                pos: den_pos,
                msg: "denominator is zero".into(),
            });
        }
        d
    } else {
        BigInt::one()
    };
    let numer = if negative { -numer } else { numer };
    Ok(Rational::new(numer, denom))
}

fn parse_digits(bytes: &[u8], pos: &mut usize) -> Result<BigInt, Error> {
    let start = *pos;
    while matches!(bytes.get(*pos), Some(b'0'..=b'9')) {
        *pos += 1;
    }
    if *pos == start {
        return Err(Error::Parse {
            pos: start,
            msg: "expected a digit".into(),
        });
    }
    let digits = std::str::from_utf8(&bytes[start..*pos]).expect("digits are ascii");
    Ok(digits.parse::<BigInt>().expect("digits parse as integer"))
}

impl fmt::Display for GaussianRational {
    /// Canonical form of the scalar grammar: `parse(format(a)) == a`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
        impl $trait<GaussianRational> for &GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

/// Deterministic total order by `(re, im)`, each part compared numerically
/// (cross-multiplication). Used wherever the engine must pick or sort
/// eigenvalues.
pub fn compare(a: &GaussianRational, b: &GaussianRational) -> Ordering {
    a.cmp(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussianRational {
        GaussianRational::parse(s).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(g("1/2") + g("1/3"), g("5/6"));
        assert_eq!(g("1i") + g("-1i"), GaussianRational::zero());
        assert_eq!(g("2/3+1/5i") + g("1/3+4/5i"), g("1+1i"));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(g("1i") * g("1i"), g("-1"));
        assert_eq!(g("1/2") * g("2"), GaussianRational::one());
        assert_eq!(g("1+1i") * g("1-1i"), g("2"));
    }

    #[test]
    fn inv_examples() {
        assert_eq!(g("2").inv().unwrap(), g("1/2"));
        assert_eq!(g("1i").inv().unwrap(), g("-1i"));
        assert_eq!(g("3/4").inv().unwrap(), g("4/3"));
        assert_eq!(
            GaussianRational::zero().inv(),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn parse_examples() {
        assert_eq!(g("3/4"), GaussianRational::ratio(3, 4));
        assert_eq!(
            g("-1/2+2/3i"),
            GaussianRational::new(
                Rational::new(BigInt::from(-1), BigInt::from(2)),
                Rational::new(BigInt::from(2), BigInt::from(3)),
            )
        );
        assert_eq!(g("5"), GaussianRational::from_int(5));
        assert_eq!(g("0-1/1i"), g("-1i"));
    }

    #[test]
    fn parse_rejects_malformed_input() {
        for (text, bad_pos) in [
            ("", 0),
            ("i", 0),
            ("-i", 1),
            ("1/0", 2),
            ("1 + 2i", 1),
            ("1/2+", 4),
            ("2x", 1),
            ("1/2+1/3", 7),
            ("--3", 1),
        ] {
            match GaussianRational::parse(text) {
                Err(Error::Parse { pos, .. }) => assert_eq!(pos, bad_pos, "input {text:?}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn format_is_canonical() {
        for s in ["0", "5", "-3/7", "1/2+1/3i", "-1i", "2/3i", "1/2-1/3i", "-2-2i"] {
            assert_eq!(g(s).to_string(), s);
        }
    }

    #[test]
    fn ordering_is_by_re_then_im() {
        assert!(g("-1i") < g("1i"));
        assert!(g("1/3") < g("1/2"));
        assert!(g("1-5i") < g("2"));
        assert!(g("2") < g("2+1i"));
    }
}
