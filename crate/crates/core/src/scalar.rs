//! Gaussian rationals: a + b i with a, b arbitrary-precision rationals.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A rational kept as a reduced i64 pair while it fits, spilling to a
/// BigRational otherwise. `Big` never holds a value that fits `Small`, so the
/// derived equality and hash are canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
enum Q {
    Small(i64, i64),
    Big(BigRational),
}

impl Q {
    const ZERO: Q = Q::Small(0, 1);
    const ONE: Q = Q::Small(1, 1);

    fn from_i128(n: i128, d: i128) -> Q {
        let (n, d) = if d < 0 { (-n, -d) } else { (n, d) };
        let g = n.gcd(&d);
        let (n, d) = if g > 1 { (n / g, d / g) } else { (n, d) };
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(a), Ok(b)) => Q::Small(a, b),
            _ => Q::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
        }
    }

    /// `r` must already be reduced.
    fn from_big(r: BigRational) -> Q {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(a), Some(b)) => Q::Small(a, b),
            _ => Q::Big(r),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Q::Small(a, b) => BigRational::new_raw(BigInt::from(*a), BigInt::from(*b)),
            Q::Big(r) => r.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Q::Small(0, _))
    }

    fn is_one(&self) -> bool {
        matches!(self, Q::Small(1, 1))
    }

    fn is_negative(&self) -> bool {
        match self {
            Q::Small(a, _) => *a < 0,
            Q::Big(r) => r.is_negative(),
        }
    }

    fn add(&self, o: &Q) -> Q {
        match (self, o) {
            (Q::Small(0, _), _) => o.clone(),
            (_, Q::Small(0, _)) => self.clone(),
            (Q::Small(a, b), Q::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    Q::from_i128(a + c, b)
                } else {
                    Q::from_i128(a * d + c * b, b * d)
                }
            }
            _ => Q::from_big(self.to_big() + o.to_big()),
        }
    }

    fn neg(&self) -> Q {
        match self {
            Q::Small(a, b) => match a.checked_neg() {
                Some(m) => Q::Small(m, *b),
                None => Q::Big(-self.to_big()),
            },
            Q::Big(r) => Q::from_big(-r),
        }
    }

    fn sub(&self, o: &Q) -> Q {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Q) -> Q {
        match (self, o) {
            (Q::Small(0, _), _) | (_, Q::Small(0, _)) => Q::ZERO,
            (Q::Small(1, 1), _) => o.clone(),
            (_, Q::Small(1, 1)) => self.clone(),
            (Q::Small(a, b), Q::Small(c, d)) => {
                let g1 = a.gcd(d);
                let g2 = c.gcd(b);
                let n = (*a / g1) as i128 * (*c / g2) as i128;
                let m = (*b / g2) as i128 * (*d / g1) as i128;
                match (i64::try_from(n), i64::try_from(m)) {
                    (Ok(x), Ok(y)) => Q::Small(x, y),
                    _ => Q::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(m))),
                }
            }
            _ => Q::from_big(self.to_big() * o.to_big()),
        }
    }

    fn recip(&self) -> Q {
        match self {
            Q::Small(a, b) if *a > 0 => Q::Small(*b, *a),
            Q::Small(a, b) if *a < 0 && *a != i64::MIN => Q::Small(-*b, -*a),
            _ => Q::from_big(self.to_big().recip()),
        }
    }

    fn div(&self, o: &Q) -> Q {
        self.mul(&o.recip())
    }

    fn bits(&self) -> u64 {
        match self {
            Q::Small(a, b) => (64 - a.unsigned_abs().leading_zeros() + 64 - b.leading_zeros()) as u64,
            Q::Big(r) => r.numer().bits() + r.denom().bits(),
        }
    }

    fn to_f64(&self) -> f64 {
        match self {
            Q::Small(a, b) => *a as f64 / *b as f64,
            Q::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::Small(a, 1) => write!(f, "{a}"),
            Q::Small(a, b) => write!(f, "{a}/{b}"),
            Q::Big(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: Q,
    im: Q,
}

pub type Gr = GaussianRational;

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re: Q::from_big(re), im: Q::from_big(im) }
    }

    pub fn zero() -> Self {
        GaussianRational { re: Q::ZERO, im: Q::ZERO }
    }

    pub fn one() -> Self {
        GaussianRational { re: Q::ONE, im: Q::ZERO }
    }

    pub fn i() -> Self {
        GaussianRational { re: Q::ZERO, im: Q::ONE }
    }

    pub fn from_int(v: i64) -> Self {
        GaussianRational { re: Q::Small(v, 1), im: Q::ZERO }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GaussianRational { re: Q::from_i128(num as i128, den as i128), im: Q::ZERO }
    }

    /// (a/b) + (c/d) i
    pub fn from_parts(a: i64, b: i64, c: i64, d: i64) -> Self {
        assert!(b != 0 && d != 0, "zero denominator");
        GaussianRational { re: Q::from_i128(a as i128, b as i128), im: Q::from_i128(c as i128, d as i128) }
    }

    pub fn re(&self) -> BigRational {
        self.re.to_big()
    }

    pub fn im(&self) -> BigRational {
        self.im.to_big()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.im.is_zero() && self.re.is_one()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: self.im.neg() }
    }

    fn norm_q(&self) -> Q {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn norm_sqr(&self) -> BigRational {
        self.norm_q().to_big()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(GaussianRational { re: self.re.recip(), im: Q::ZERO });
        }
        let n = self.norm_q();
        Some(GaussianRational { re: self.re.div(&n), im: self.im.neg().div(&n) })
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let r = Q::from_big(r.clone());
        GaussianRational { re: self.re.mul(&r), im: self.im.mul(&r) }
    }

    /// Total bit length of numerators and denominators; used for pivot choice.
    pub fn bit_size(&self) -> u64 {
        self.re.bits() + self.im.bits()
    }

    /// Lossy conversion for floating-point cross-checks only.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl Default for GaussianRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(re: BigRational) -> Self {
        GaussianRational { re: Q::from_big(re), im: Q::ZERO }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational::one()
    }
}

impl<'a> Add<&'a Gr> for &'a Gr {
    type Output = Gr;
    fn add(self, o: &Gr) -> Gr {
        GaussianRational { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }
}

impl<'a> Sub<&'a Gr> for &'a Gr {
    type Output = Gr;
    fn sub(self, o: &Gr) -> Gr {
        GaussianRational { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }
}

impl<'a> Mul<&'a Gr> for &'a Gr {
    type Output = Gr;
    fn mul(self, o: &Gr) -> Gr {
        if self.im.is_zero() {
            return GaussianRational { re: self.re.mul(&o.re), im: self.re.mul(&o.im) };
        }
        if o.im.is_zero() {
            return GaussianRational { re: self.re.mul(&o.re), im: self.im.mul(&o.re) };
        }
        GaussianRational {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
}

impl<'a> Div<&'a Gr> for &'a Gr {
    type Output = Gr;
    fn div(self, o: &Gr) -> Gr {
        let inv = o.inv().expect("division by zero Gaussian rational");
        self * &inv
    }
}

impl<'a> Neg for &'a Gr {
    type Output = Gr;
    fn neg(self) -> Gr {
        GaussianRational { re: self.re.neg(), im: self.im.neg() }
    }
}

impl Neg for Gr {
    type Output = Gr;
    fn neg(self) -> Gr {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<Gr> for Gr {
            type Output = Gr;
            fn $f(self, o: Gr) -> Gr {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a Gr> for Gr {
            type Output = Gr;
            fn $f(self, o: &Gr) -> Gr {
                (&self).$f(o)
            }
        }
        impl<'a> $tr<Gr> for &'a Gr {
            type Output = Gr;
            fn $f(self, o: Gr) -> Gr {
                self.$f(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl<'a> AddAssign<&'a Gr> for Gr {
    fn add_assign(&mut self, o: &Gr) {
        self.re = self.re.add(&o.re);
        if !o.im.is_zero() {
            self.im = self.im.add(&o.im);
        }
    }
}

impl AddAssign<Gr> for Gr {
    fn add_assign(&mut self, o: Gr) {
        *self += &o;
    }
}

impl<'a> SubAssign<&'a Gr> for Gr {
    fn sub_assign(&mut self, o: &Gr) {
        self.re = self.re.sub(&o.re);
        if !o.im.is_zero() {
            self.im = self.im.sub(&o.im);
        }
    }
}

impl SubAssign<Gr> for Gr {
    fn sub_assign(&mut self, o: Gr) {
        *self -= &o;
    }
}

impl<'a> MulAssign<&'a Gr> for Gr {
    fn mul_assign(&mut self, o: &Gr) {
        *self = &*self * o;
    }
}

impl Sum for Gr {
    fn sum<I: Iterator<Item = Gr>>(iter: I) -> Gr {
        let mut acc = Gr::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let im = if self.im.is_one() {
            "i".to_string()
        } else if self.im.neg().is_one() {
            "-i".to_string()
        } else {
            format!("{}i", self.im)
        };
        if self.re.is_zero() {
            write!(f, "{}", im)
        } else if self.im.is_negative() {
            write!(f, "{}{}", self.re, im)
        } else {
            write!(f, "{}+{}", self.re, im)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(n, d))
}

/// One signed summand: `3/4`, `-i`, `2/3i`, `i/2`, `2*i`.
fn parse_term(t: &str) -> Result<Gr, Error> {
    let (neg, body) = match t.as_bytes().first() {
        Some(b'-') => (true, &t[1..]),
        Some(b'+') => (false, &t[1..]),
        _ => (false, t),
    };
    let v = if body.contains('i') {
        let stripped: String = body.replacen('i', "", 1).replace('*', "");
        let mag = if stripped.is_empty() {
            BigRational::one()
        } else if let Some(rest) = stripped.strip_prefix('/') {
            parse_rational(&format!("1/{rest}"))?
        } else {
            parse_rational(&stripped)?
        };
        GaussianRational { re: Q::ZERO, im: Q::from_big(mag) }
    } else {
        GaussianRational { re: Q::from_big(parse_rational(body)?), im: Q::ZERO }
    };
    Ok(if neg { -v } else { v })
}

impl FromStr for GaussianRational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let s = s.trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Err(Error::Parse("empty coefficient".into()));
        }
        let bytes = s.as_bytes();
        let mut parts = Vec::new();
        let mut start = 0;
        for k in 1..bytes.len() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] != b'/' && bytes[k - 1] != b'*' {
                parts.push(&s[start..k]);
                start = k;
            }
        }
        parts.push(&s[start..]);
        let mut acc = Gr::zero();
        for p in parts {
            acc += parse_term(p)?;
        }
        Ok(acc)
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Gr {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_printing() {
        assert_eq!(Gr::from_ratio(2, 4).to_string(), "1/2");
        assert_eq!(Gr::from_parts(1, 2, 1, 3).to_string(), "1/2+1/3i");
        assert_eq!(Gr::from_parts(1, 1, -1, 1).to_string(), "1-i");
        assert_eq!(Gr::i().to_string(), "i");
        assert_eq!((-Gr::i()).to_string(), "-i");
        assert_eq!(Gr::from_parts(0, 1, -3, 6).to_string(), "-1/2i");
        assert_eq!(Gr::zero().to_string(), "0");
        assert_eq!(Gr::from_ratio(3, -6).to_string(), "-1/2");
    }

    #[test]
    fn parsing_variants() {
        assert_eq!(g("i/2"), Gr::from_parts(0, 1, 1, 2));
        assert_eq!(g("1/2i"), Gr::from_parts(0, 1, 1, 2));
        assert_eq!(g("1+i"), Gr::from_parts(1, 1, 1, 1));
        assert_eq!(g("-1/3-2/5i"), Gr::from_parts(-1, 3, -2, 5));
        assert_eq!(g(" 2 * i "), Gr::from_parts(0, 1, 2, 1));
        assert_eq!(g("-1"), Gr::from_int(-1));
        assert!("1/0".parse::<Gr>().is_err());
        assert!("x".parse::<Gr>().is_err());
        for s in ["1/2+1/3i", "1-i", "-i", "7", "-5/9i", "2/3-1/7i"] {
            assert_eq!(g(s).to_string(), s);
        }
    }

    #[test]
    fn field_ops() {
        let a = g("1/2+1/3i");
        let b = g("-2+5/7i");
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(&a * &a.inv().unwrap(), Gr::one());
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!(&Gr::i() * &Gr::i(), Gr::from_int(-1));
        assert_eq!((&a * &a.conj()).im(), BigRational::zero());
        assert!(Gr::zero().inv().is_none());
    }

    #[test]
    fn spills_past_i64_and_back() {
        let big = Gr::from_parts(i64::MAX, 1, i64::MIN, 3);
        let sq = &big * &big;
        assert_eq!(&sq / &big, big);
        assert_eq!(&sq - &sq, Gr::zero());
        let one = Gr::one();
        assert_eq!(&(&big + &one) - &one, big);
        let r = Gr::from_ratio(i64::MIN, 1).inv().unwrap();
        assert_eq!(r.to_string(), format!("-1/{}", (i64::MIN as i128).unsigned_abs()));
        assert_eq!(&r * &Gr::from_ratio(i64::MIN, 1), one);
    }

    #[test]
    fn serde_roundtrip() {
        let a = g("3/4-i");
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "\"3/4-i\"");
        let b: Gr = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
