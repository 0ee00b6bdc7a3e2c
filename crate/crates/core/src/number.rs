//! Exact rational scalars and 3-vectors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses an exact number: an integer, a fraction `p/q`, or a decimal
/// literal with optional exponent (`-1.25`, `3e-2`). Decimals are converted
/// exactly, never through floating point.
pub fn parse_rational(token: &str) -> Option<Rational> {
    let token = token.trim();
    if token.is_empty() {
        return None;
    }
    if let Some((num, den)) = token.split_once('/') {
        let num = parse_integer(num)?;
        let den = parse_integer(den)?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    parse_decimal(token)
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp_str = &s[pos + 1..];
            let exp_digits = exp_str.strip_prefix(['+', '-']).unwrap_or(exp_str);
            if exp_digits.is_empty()
                || exp_digits.len() > 4
                || !exp_digits.bytes().all(|b| b.is_ascii_digit())
            {
                return None;
            }
            (&s[..pos], exp_str.parse::<i32>().ok()?)
        }
        None => (s, 0),
    };
    let (negative, body) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    if negative {
        value = -value;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let result = if scale >= 0 {
        Rational::from_integer(value * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(value, num_traits::pow(ten, (-scale) as usize))
    };
    Some(result)
}

/// Rounds to the nearest integer, halves away from zero.
pub fn round_half_away(x: &Rational) -> BigInt {
    let two = BigInt::from(2);
    let doubled_num = x.numer() * &two + x.denom();
    let doubled_den = x.denom() * &two;
    if x.is_negative() {
        -round_half_away(&-x)
    } else {
        doubled_num.div_floor(&doubled_den)
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Integers print bare, everything else as `p/q`.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Divides an integer vector by the gcd of its entries. The zero vector is
/// returned unchanged.
pub fn primitive(values: &[BigInt]) -> Vec<BigInt> {
    let g = values.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return values.to_vec();
    }
    values.iter().map(|x| x / &g).collect()
}

/// Scales a rational vector by a positive factor so every entry is an integer
/// and the entries have gcd 1.
pub fn clear_denominators(values: &[Rational]) -> Vec<BigInt> {
    let lcm = values
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = values
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    primitive(&ints)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec3(pub [Rational; 3]);

impl Vec3 {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Self {
        Vec3([x, y, z])
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Vec3([rational(x), rational(y), rational(z)])
    }

    pub fn zero() -> Self {
        Vec3([Rational::zero(), Rational::zero(), Rational::zero()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn x(&self) -> &Rational {
        &self.0[0]
    }

    pub fn y(&self) -> &Rational {
        &self.0[1]
    }

    pub fn z(&self) -> &Rational {
        &self.0[2]
    }

    pub fn dot(&self, other: &Vec3) -> Rational {
        &self.0[0] * &other.0[0] + &self.0[1] * &other.0[1] + &self.0[2] * &other.0[2]
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        let [a1, a2, a3] = &self.0;
        let [b1, b2, b3] = &other.0;
        Vec3([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn scale(&self, k: &Rational) -> Vec3 {
        Vec3([&self.0[0] * k, &self.0[1] * k, &self.0[2] * k])
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rational::is_integer)
    }

    /// Primitive integer vector with the same direction (positive multiple).
    pub fn primitive_integer(&self) -> [BigInt; 3] {
        let v = clear_denominators(&self.0);
        [v[0].clone(), v[1].clone(), v[2].clone()]
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [to_f64(&self.0[0]), to_f64(&self.0[1]), to_f64(&self.0[2])]
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            format_rational(&self.0[0]),
            format_rational(&self.0[1]),
            format_rational(&self.0[2])
        )
    }
}

impl Add for &Vec3 {
    type Output = Vec3;
    fn add(self, rhs: &Vec3) -> Vec3 {
        Vec3([
            &self.0[0] + &rhs.0[0],
            &self.0[1] + &rhs.0[1],
            &self.0[2] + &rhs.0[2],
        ])
    }
}

impl Sub for &Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: &Vec3) -> Vec3 {
        Vec3([
            &self.0[0] - &rhs.0[0],
            &self.0[1] - &rhs.0[1],
            &self.0[2] - &rhs.0[2],
        ])
    }
}

impl Neg for &Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3([-&self.0[0], -&self.0[1], -&self.0[2]])
    }
}

impl Mul<&Rational> for &Vec3 {
    type Output = Vec3;
    fn mul(self, rhs: &Rational) -> Vec3 {
        self.scale(rhs)
    }
}
