//! Complex scalars at double or extended precision.
//!
//! Series code is written once against [`Scalar`]; values carry their own
//! precision so constructors hang off an existing value (`x.from_f64(..)`).

use std::fmt;

use astro_float::{BigFloat, RoundingMode, Sign};
use num::bigint::{BigInt, BigUint};
use num::complex::Complex64;
use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};

const RM: RoundingMode = RoundingMode::ToEven;

/// Precision of floating series arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    /// IEEE double.
    Double,
    /// Binary floating point with the given significand width (> 53).
    Bits(usize),
}

impl Precision {
    pub fn from_bits(bits: usize) -> Precision {
        if bits <= 53 {
            Precision::Double
        } else {
            Precision::Bits(bits)
        }
    }

    pub fn bits(self) -> usize {
        match self {
            Precision::Double => 53,
            Precision::Bits(b) => b,
        }
    }
}

pub trait Scalar: Clone + Send + Sync + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_c64(&self, z: Complex64) -> Self;
    fn from_biguint(&self, n: &BigUint) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn mul_real(&self, r: f64) -> Self;
    fn to_c64(&self) -> Complex64;
    fn is_zero(&self) -> bool;

    fn from_bigint(&self, n: &BigInt) -> Self {
        let m = self.from_biguint(n.magnitude());
        if n.is_negative() {
            self.zero_like().sub(&m)
        } else {
            m
        }
    }

    fn from_rational(&self, r: &BigRational) -> Self {
        self.from_bigint(r.numer()).div(&self.from_bigint(r.denom()))
    }

    fn abs(&self) -> f64 {
        self.to_c64().norm()
    }
}

impl Scalar for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one_like(&self) -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_c64(&self, z: Complex64) -> Self {
        z
    }
    fn from_biguint(&self, n: &BigUint) -> Self {
        Complex64::new(biguint_to_f64(n), 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn mul_real(&self, r: f64) -> Self {
        self * r
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_rational(&self, r: &BigRational) -> Self {
        Complex64::new(rational_to_f64(r), 0.0)
    }
}

/// Nearest double to a big integer (correct to within one ulp).
pub fn biguint_to_f64(n: &BigUint) -> f64 {
    let (mant, exp) = top_bits(n);
    mant as f64 * (2f64).powi(exp)
}

/// `(m, e)` with `n ~= m * 2^e` and `m < 2^64` holding the leading bits of `n`.
fn top_bits(n: &BigUint) -> (u64, i32) {
    let bits = n.bits();
    if bits <= 64 {
        return (n.to_u64().unwrap(), 0);
    }
    let shift = bits - 64;
    ((n >> shift).to_u64().unwrap(), shift as i32)
}

/// `log2` of a positive big integer.
pub fn biguint_log2(n: &BigUint) -> f64 {
    let (m, e) = top_bits(n);
    (m as f64).log2() + e as f64
}

/// Big rational to double without overflowing intermediate conversions.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let (num, den) = (r.numer().magnitude(), r.denom().magnitude());
    let (mn, en) = top_bits(num);
    let (md, ed) = top_bits(den);
    let v = (mn as f64 / md as f64) * (2f64).powi(en - ed);
    if r.is_negative() {
        -v
    } else {
        v
    }
}

/// Serializes a complex number as `{"re": .., "im": ..}`.
pub fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}

/// Exact rational value of a finite double.
pub fn f64_to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite value")
}

/// Complex number with `BigFloat` parts at a fixed significand width.
#[derive(Clone)]
pub struct HpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
    prec: usize,
}

impl fmt::Debug for HpComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HpComplex({:?} @{} bits)", self.to_c64(), self.prec)
    }
}

fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    match x.as_raw_parts() {
        None => f64::NAN,
        Some((words, _, sign, exp, _)) => {
            if x.is_zero() {
                return 0.0;
            }
            let top = *words.last().expect("non-empty mantissa");
            let v = top as f64 * (2f64).powi(exp - 64);
            if sign == Sign::Neg {
                -v
            } else {
                v
            }
        }
    }
}

fn biguint_to_bigfloat(n: &BigUint, p: usize) -> BigFloat {
    if n.is_zero() {
        return BigFloat::from_u8(0, p);
    }
    let words = n.to_u64_digits();
    let e = (words.len() * 64) as i32;
    let mut x = BigFloat::from_words(&words, Sign::Pos, e);
    x.set_precision(p, RM).expect("valid precision");
    x
}

impl HpComplex {
    pub fn new(prec: usize, re: f64, im: f64) -> Self {
        HpComplex {
            re: BigFloat::from_f64(re, prec),
            im: BigFloat::from_f64(im, prec),
            prec,
        }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    fn wrap(&self, re: BigFloat, im: BigFloat) -> Self {
        HpComplex { re, im, prec: self.prec }
    }
}

impl Scalar for HpComplex {
    fn zero_like(&self) -> Self {
        HpComplex::new(self.prec, 0.0, 0.0)
    }
    fn one_like(&self) -> Self {
        HpComplex::new(self.prec, 1.0, 0.0)
    }
    fn from_c64(&self, z: Complex64) -> Self {
        HpComplex::new(self.prec, z.re, z.im)
    }
    fn from_biguint(&self, n: &BigUint) -> Self {
        self.wrap(biguint_to_bigfloat(n, self.prec), BigFloat::from_u8(0, self.prec))
    }
    fn add(&self, o: &Self) -> Self {
        let p = self.prec;
        self.wrap(self.re.add(&o.re, p, RM), self.im.add(&o.im, p, RM))
    }
    fn sub(&self, o: &Self) -> Self {
        let p = self.prec;
        self.wrap(self.re.sub(&o.re, p, RM), self.im.sub(&o.im, p, RM))
    }
    fn mul(&self, o: &Self) -> Self {
        let p = self.prec;
        let rr = self.re.mul(&o.re, p, RM);
        let ii = self.im.mul(&o.im, p, RM);
        let ri = self.re.mul(&o.im, p, RM);
        let ir = self.im.mul(&o.re, p, RM);
        self.wrap(rr.sub(&ii, p, RM), ri.add(&ir, p, RM))
    }
    fn div(&self, o: &Self) -> Self {
        let p = self.prec;
        let den = o.re.mul(&o.re, p, RM).add(&o.im.mul(&o.im, p, RM), p, RM);
        let re = self.re.mul(&o.re, p, RM).add(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.im.mul(&o.re, p, RM).sub(&self.re.mul(&o.im, p, RM), p, RM);
        self.wrap(re.div(&den, p, RM), im.div(&den, p, RM))
    }
    fn mul_real(&self, r: f64) -> Self {
        let p = self.prec;
        let r = BigFloat::from_f64(r, p);
        self.wrap(self.re.mul(&r, p, RM), self.im.mul(&r, p, RM))
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(bigfloat_to_f64(&self.re), bigfloat_to_f64(&self.im))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}
