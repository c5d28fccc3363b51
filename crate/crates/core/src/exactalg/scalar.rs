use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact field scalar. Every algebraic object in the crate is generic over this trait.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + Hash
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_i64(n: i64) -> Self;
    /// 0 for ℚ, p for 𝔽_p.
    fn characteristic() -> u64;
    fn field_name() -> String;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }

    fn sign(odd: bool) -> Self {
        if odd {
            -Self::one()
        } else {
            Self::one()
        }
    }
}

/// Rational numbers with arbitrary precision.
pub type Rational = BigRational;

impl Scalar for BigRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn characteristic() -> u64 {
        0
    }
    fn field_name() -> String {
        "Q".to_string()
    }
}

/// Residues modulo the prime `P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }
    pub fn value(&self) -> u64 {
        self.0
    }
    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Fp((self.0 + o.0) % P)
    }
}
impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp((self.0 + P - o.0) % P)
    }
}
impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(((self.0 as u128 * o.0 as u128) % P as u128) as u64)
    }
}
impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}
impl<const P: u64> AddAssign for Fp<P> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}
impl<const P: u64> SubAssign for Fp<P> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}
impl<const P: u64> MulAssign for Fp<P> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
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

impl<const P: u64> Scalar for Fp<P> {
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }
    fn characteristic() -> u64 {
        P
    }
    fn field_name() -> String {
        format!("F{}", P)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Checks that `F` may be used with operations up to arity `max_arity`.
pub fn check_field<F: Scalar>(max_arity: usize) -> Result<(), crate::Error> {
    let p = F::characteristic();
    if p == 0 {
        return Ok(());
    }
    if !is_prime(p) {
        return Err(crate::Error::Characteristic(format!("{} is not prime", p)));
    }
    if p as usize <= max_arity {
        return Err(crate::Error::Characteristic(format!(
            "characteristic {} must exceed the arity bound {}",
            p, max_arity
        )));
    }
    Ok(())
}
