//! Exact coefficient fields: arbitrary-precision rationals and prime fields.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact field usable as coefficient ring.
///
/// Implemented by [`BigRational`] and by the prime fields [`Fp`]. All arithmetic is
/// exact; there is no floating point anywhere in the toolkit.
pub trait Field:
    Clone
    + Debug
    + Display
    + Eq
    + Hash
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    /// 0 for the rationals, p for F_p.
    fn characteristic() -> u64;

    /// Short field label used in reports and file headers (`Q`, `F5`, ...).
    fn label() -> String {
        match Self::characteristic() {
            0 => "Q".to_string(),
            p => format!("F{p}"),
        }
    }

    fn from_i64(n: i64) -> Self;

    /// Image of a rational number; `None` when the denominator vanishes in the field.
    fn from_rational(q: &BigRational) -> Option<Self>;

    fn inv(&self) -> Option<Self>;

    /// Returns true if the element is a unit (nonzero).
    fn is_unit(&self) -> bool {
        !self.is_zero()
    }
}

impl Field for BigRational {
    fn characteristic() -> u64 {
        0
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(q: &BigRational) -> Option<Self> {
        Some(q.clone())
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Element of the prime field F_P, stored as its least nonnegative residue.
///
/// `P` must be prime; the field axioms fail otherwise. Products are computed in
/// `u128` when `P` does not fit in 32 bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub const MODULUS: u64 = P;

    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn from_signed(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn mul_raw(a: u64, b: u64) -> u64 {
        if P < (1 << 32) {
            a * b % P
        } else {
            ((a as u128 * b as u128) % P as u128) as u64
        }
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1 % P;
        while e > 0 {
            if e & 1 == 1 {
                acc = Self::mul_raw(acc, base);
            }
            base = Self::mul_raw(base, base);
            e >>= 1;
        }
        Fp(acc)
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + P - o.0 })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(Self::mul_raw(self.0, o.0))
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.inv().expect("division by zero in prime field")
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<'a, const P: u64> AddAssign<&'a Self> for Fp<P> {
    fn add_assign(&mut self, o: &'a Self) {
        *self = *self + *o;
    }
}

impl<'a, const P: u64> SubAssign<&'a Self> for Fp<P> {
    fn sub_assign(&mut self, o: &'a Self) {
        *self = *self - *o;
    }
}

impl<'a, const P: u64> MulAssign<&'a Self> for Fp<P> {
    fn mul_assign(&mut self, o: &'a Self) {
        *self = *self * *o;
    }
}

impl<const P: u64> Field for Fp<P> {
    fn characteristic() -> u64 {
        P
    }

    fn from_i64(n: i64) -> Self {
        Self::from_signed(n)
    }

    fn from_rational(q: &BigRational) -> Option<Self> {
        let p = BigInt::from(P);
        let num = q.numer().mod_floor(&p).to_u64()?;
        let den = q.denom().mod_floor(&p).to_u64()?;
        let den = Fp::<P>(den).inv()?;
        Some(Fp::<P>(num) * den)
    }

    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // Fermat: a^(p-2) = a^-1
        Some(self.pow(P - 2))
    }
}

/// Parses an integer or `num/den` literal into a rational number.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let num: BigInt = num
        .trim()
        .parse()
        .map_err(|_| format!("invalid coefficient '{s}'"))?;
    let den: BigInt = match den {
        Some(d) => d
            .trim()
            .parse()
            .map_err(|_| format!("invalid coefficient '{s}'"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(format!("invalid coefficient '{s}': zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// Renders a rational as `n` or `n/d` (lowest terms, positive denominator).
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else if q.is_negative() {
        format!("-{}/{}", q.numer().abs(), q.denom())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F7 = Fp<7>;

    #[test]
    fn prime_field_inverse_and_negation() {
        for v in 1..7 {
            let a = F7::new(v);
            assert_eq!(a * a.inv().unwrap(), F7::one());
            assert_eq!(a + (-a), F7::zero());
        }
        assert!(F7::zero().inv().is_none());
    }

    #[test]
    fn rational_reduction_mod_p() {
        let q = parse_rational("3/2").unwrap();
        let x = F7::from_rational(&q).unwrap();
        assert_eq!(x * F7::new(2), F7::new(3));
        assert!(F7::from_rational(&parse_rational("1/7").unwrap()).is_none());
    }

    #[test]
    fn rationals_are_in_lowest_terms() {
        let q = parse_rational("6/-4").unwrap();
        assert_eq!(format_rational(&q), "-3/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn large_prime_products_do_not_overflow() {
        type Big = Fp<2305843009213693951>;
        let a = Big::new(2305843009213693950);
        assert_eq!(a * a, Big::one());
    }
}
