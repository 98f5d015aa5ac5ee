//! Exact elements `a + b√d` of a real quadratic field.
//!
//! A scalar with `b = 0` is a plain rational and combines with scalars of any
//! field. Combining two irrational scalars from different fields is a
//! programming error and panics; manifests are validated against a single
//! discriminant before any arithmetic happens.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Returns true when `d` is a positive square-free integer.
pub fn is_square_free(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
    // 1 whenever b == 0
    d: u64,
}

impl Scalar {
    /// Builds `a + b√d`. `d` must be square-free; `d = 1` folds `b` into `a`.
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Result<Self> {
        if !is_square_free(d) {
            return Err(Error::BadDiscriminant(d));
        }
        if d == 1 {
            return Ok(Self::rational(a + b));
        }
        Ok(Self::normalized(a, b, d))
    }

    fn normalized(a: BigRational, b: BigRational, d: u64) -> Self {
        if b.is_zero() {
            Scalar { a, b, d: 1 }
        } else {
            Scalar { a, b, d }
        }
    }

    pub fn rational(a: BigRational) -> Self {
        Scalar {
            a,
            b: BigRational::zero(),
            d: 1,
        }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(num.into(), den.into()))
    }

    /// `√d` itself.
    pub fn sqrt(d: u64) -> Result<Self> {
        Self::new(BigRational::zero(), BigRational::one(), d)
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient `b` of `√d`.
    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    /// Discriminant of the field this scalar needs; 1 for rationals.
    pub fn field(&self) -> u64 {
        self.d
    }

    pub fn conjugate(&self) -> Self {
        Scalar {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }

    /// Field norm `a² − d·b²`, always rational.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.into())
    }

    pub fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Self::normalized(&self.a / &n, -(&self.b / &n), self.d))
    }

    pub fn inv(&self) -> Self {
        self.checked_inv().expect("inverse of zero scalar")
    }

    /// Integer value, if this is an integer that fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_rational() && self.a.is_integer() {
            self.a.to_integer().to_i64()
        } else {
            None
        }
    }

    /// Sign of the real number `a + b√d`, computed exactly.
    pub fn signum(&self) -> i32 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        // opposite signs: compare a² with d·b²
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * BigRational::from_integer(self.d.into());
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }

    /// Appends a canonical byte encoding used for exact hashing.
    pub fn encode(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.d.to_le_bytes());
        for q in [&self.a, &self.b] {
            push_int(q.numer(), out);
            push_int(q.denom(), out);
        }
    }

    fn join_field(&self, other: &Self) -> u64 {
        if self.d == other.d || other.d == 1 {
            self.d
        } else if self.d == 1 {
            other.d
        } else {
            panic!("{}", Error::MixedFields(self.d, other.d))
        }
    }
}

fn sign(q: &BigRational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

fn push_int(n: &BigInt, out: &mut Vec<u8>) {
    let (s, bytes) = n.to_bytes_le();
    out.push(s as u8);
    out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
    out.extend_from_slice(&bytes);
}

/// Parses an exact rational from `"p"`, `"p/q"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::MalformedScalar(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts rational literals only; irrational scalars are built with
    /// [`Scalar::new`].
    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s).map(Scalar::rational)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", format_rational(&self.a));
        }
        if !self.a.is_zero() {
            write!(f, "{}", format_rational(&self.a))?;
            if self.b.is_positive() {
                write!(f, "+")?;
            }
        }
        if self.b.is_one() {
            write!(f, "√{}", self.d)
        } else if (-self.b.clone()).is_one() {
            write!(f, "-√{}", self.d)
        } else {
            write!(f, "{}√{}", format_rational(&self.b), self.d)
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::rational(q)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        let d = self.join_field(rhs);
        Scalar::normalized(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        let d = self.join_field(rhs);
        Scalar::normalized(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        let d = self.join_field(rhs);
        let dq = BigRational::from_integer(d.into());
        let a = &self.a * &rhs.a + &self.b * &rhs.b * dq;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Scalar::normalized(a, b, d)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

/// Binomial coefficient as an exact scalar.
pub fn binomial(n: u64, k: u64) -> Scalar {
    if k > n {
        return Scalar::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Scalar::rational(BigRational::from_integer(acc))
}

/// `n!` as an exact scalar.
pub fn factorial(n: u64) -> Scalar {
    let acc = (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
    Scalar::rational(BigRational::from_integer(acc))
}

/// Least common multiple of the denominators of a set of rationals.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a BigRational>>(qs: I) -> BigInt {
    qs.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q2(a: (i64, i64), b: (i64, i64)) -> Scalar {
        Scalar::new(
            BigRational::new(a.0.into(), a.1.into()),
            BigRational::new(b.0.into(), b.1.into()),
            2,
        )
        .unwrap()
    }

    #[test]
    fn square_free_detection() {
        assert!(is_square_free(1));
        assert!(is_square_free(2));
        assert!(is_square_free(30));
        assert!(!is_square_free(4));
        assert!(!is_square_free(18));
        assert!(!is_square_free(0));
        assert!(Scalar::sqrt(8).is_err());
    }

    #[test]
    fn rational_field_folds_irrational_part() {
        let x = Scalar::new(
            BigRational::from_integer(2.into()),
            BigRational::from_integer(3.into()),
            1,
        )
        .unwrap();
        assert_eq!(x, Scalar::int(5));
        assert!(x.is_rational());
    }

    #[test]
    fn sqrt_two_squares_to_two() {
        let r = Scalar::sqrt(2).unwrap();
        assert_eq!(&r * &r, Scalar::int(2));
        assert!((&r * &r).is_rational());
        assert_eq!((&r * &r).field(), 1);
    }

    #[test]
    fn inverse_of_quadratic() {
        let x = q2((1, 1), (1, 1));
        // 1/(1+√2) = √2 − 1
        assert_eq!(x.inv(), q2((-1, 1), (1, 1)));
        assert!(Scalar::zero().checked_inv().is_none());
    }

    #[test]
    fn exact_sign() {
        assert_eq!(q2((3, 2), (-1, 1)).signum(), 1); // 1.5 − 1.414
        assert_eq!(q2((-3, 2), (1, 1)).signum(), -1);
        assert_eq!(q2((0, 1), (-1, 1)).signum(), -1);
        assert_eq!(Scalar::zero().signum(), 0);
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(Scalar::ratio(-3, 6).to_string(), "-1/2");
        assert_eq!(q2((1, 1), (1, 2)).to_string(), "1+1/2√2");
        assert_eq!(q2((0, 1), (-1, 1)).to_string(), "-√2");
        assert_eq!("4/6".parse::<Scalar>().unwrap(), Scalar::ratio(2, 3));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
    }

    #[test]
    #[should_panic(expected = "mixed quadratic fields")]
    fn mixing_fields_panics() {
        let _ = Scalar::sqrt(2).unwrap() + Scalar::sqrt(3).unwrap();
    }

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(binomial(6, 2), Scalar::int(15));
        assert_eq!(binomial(2, 3), Scalar::zero());
        assert_eq!(factorial(5), Scalar::int(120));
    }

    fn arb_q2() -> impl Strategy<Value = Scalar> {
        (-20i64..20, 1i64..9, -20i64..20, 1i64..9).prop_map(|(a, da, b, db)| q2((a, da), (b, db)))
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb_q2(), y in arb_q2(), z in arb_q2()) {
            prop_assert_eq!((&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &x * &y + &x * &z);
            prop_assert_eq!(&x + &y, &y + &x);
            if !x.is_zero() {
                prop_assert!((&x * &x.inv()).is_one());
                prop_assert_eq!(x.norm(), (&x * &x.conjugate()).rational_part().clone());
            }
        }

        #[test]
        fn encoding_is_injective_on_samples(x in arb_q2(), y in arb_q2()) {
            let (mut ex, mut ey) = (Vec::new(), Vec::new());
            x.encode(&mut ex);
            y.encode(&mut ey);
            prop_assert_eq!(ex == ey, x == y);
        }
    }
}
