//! Dense univariate polynomials with exact integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Integer polynomial `c_0 + c_1 z + ... + c_n z^n`, coefficients ascending.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has an
/// empty coefficient vector and `degree()` is the index of the last entry.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// The monomial `z`.
    pub fn identity() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c.into();
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// Coefficients converted to `T`, ascending.
    pub fn to_real_coeffs<T: Real>(&self) -> Vec<T> {
        self.coeffs
            .iter()
            .map(|c| T::from_f64(c.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(T::nan))
            .collect()
    }

    pub fn eval<T: Real>(&self, x: T) -> T {
        horner(&self.to_real_coeffs::<T>(), x)
    }

    pub fn eval_complex<T: Real>(&self, z: Complex<T>) -> Complex<T> {
        horner_complex(&self.to_real_coeffs::<T>(), z)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `2^{s n} p(x)` as an exact integer, with `x = m / 2^s` and `n = deg p`.
    fn dyadic_numerator(&self, x: f64) -> (BigInt, u64) {
        let (mant, shift) = dyadic(x);
        let n = self.coeffs.len() - 1;
        let mut acc = self.coeffs[n].clone();
        for k in (0..n).rev() {
            acc = acc * &mant + (&self.coeffs[k] << (shift * (n - k) as u64));
        }
        (acc, shift * n as u64)
    }

    /// `log|p(x)|` evaluated exactly at the dyadic rational `x`, rounded once at the end.
    ///
    /// Horner in floating point loses all accuracy when large coefficients cancel
    /// to a tiny value, which is exactly the regime of small integer polynomials.
    pub fn log_abs_exact(&self, x: f64) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (acc, e) = self.dyadic_numerator(x);
        if acc.is_zero() {
            return f64::NEG_INFINITY;
        }
        log_abs_bigint(&acc) - (e as f64) * std::f64::consts::LN_2
    }

    /// `p(x)` computed exactly and rounded once (barring underflow).
    pub fn eval_exact(&self, x: f64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (acc, e) = self.dyadic_numerator(x);
        let bits = acc.bits();
        // Drop low bits beyond double precision so the conversion cannot overflow.
        let (acc, dropped) = if bits > 1000 { (acc >> (bits - 1000), bits - 1000) } else { (acc, 0) };
        let mut v = acc.to_f64().unwrap_or(f64::NAN);
        let mut up = dropped as i64 - e as i64;
        while up > 0 {
            let s = up.min(1000);
            v *= 2f64.powi(s as i32);
            up -= s;
        }
        while up < 0 {
            let s = (-up).min(1000);
            v *= 2f64.powi(-(s as i32));
            up += s;
        }
        v
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn pow(&self, k: u32) -> IntPoly {
        let mut out = IntPoly::constant(1);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `self(inner(z))`.
    pub fn compose(&self, inner: &IntPoly) -> IntPoly {
        let mut acc = IntPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &IntPoly::constant(c.clone());
        }
        acc
    }

    /// `p(shift - z)`; with `shift = 2c` this reflects about `c`.
    pub fn reflect(&self, shift: i64) -> IntPoly {
        self.compose(&IntPoly::from_i64s(&[shift, -1]))
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `self / content`, with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut g = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Quotient and remainder over the rationals when the divisor's leading
    /// coefficient divides every step; `None` otherwise.
    fn div_rem_integral(&self, d: &IntPoly) -> Option<(IntPoly, IntPoly)> {
        let dd = d.degree()?;
        let lc = d.leading()?.clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((IntPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &q * dc;
            }
            quot[k] = q;
        }
        Some((IntPoly::new(quot), IntPoly::new(rem)))
    }

    /// Exact quotient `self / d` in Z[z], or `None` when `d` does not divide.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        if d.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem_integral(d)?;
        r.is_zero().then_some(q)
    }

    /// Pseudo-remainder `lc(d)^{deg self - deg d + 1} self mod d`.
    fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("nonzero divisor");
        let lc = d.leading().unwrap().clone();
        let mut rem = self.clone();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let top = rem.leading().unwrap().clone();
            let shifted = IntPoly::monomial(top, rd - dd);
            rem = &rem.scale(&lc) - &(&shifted * d);
        }
        rem
    }

    /// Primitive gcd in Z[z] (positive leading coefficient), times the content gcd.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.primitive_part().scale(&other.content());
        }
        if other.is_zero() {
            return self.primitive_part().scale(&self.content());
        }
        let cont = self.content().gcd(&other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&cont)
    }

    /// Squarefree decomposition: primitive `g_i` with `self = c * prod g_i^i`.
    ///
    /// Returns `(c, [(g_i, i)])` with constant factors dropped.
    pub fn squarefree_decomposition(&self) -> (BigInt, Vec<(IntPoly, usize)>) {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return (self.coeff(0), out);
        }
        let prim = self.primitive_part();
        // Yun's algorithm over Q, carried out with primitive integer polynomials.
        let a = prim;
        let b = a.derivative();
        let c = a.gcd(&b).primitive_part();
        let mut w = a.div_exact(&c).expect("gcd divides");
        let mut y = b.div_exact(&c).expect("gcd divides derivative");
        let mut z = &y - &w.derivative();
        let mut i = 1;
        while w.degree().unwrap_or(0) > 0 {
            let g = w.gcd(&z).primitive_part();
            if g.degree().unwrap_or(0) > 0 {
                out.push((g.clone(), i));
            }
            w = w.div_exact(&g).expect("gcd divides");
            y = z.div_exact(&g).expect("gcd divides");
            z = &y - &w.derivative();
            i += 1;
        }
        // Recover the constant so that c * prod g_i^i == self exactly.
        let mut prod = IntPoly::constant(1);
        for (g, m) in &out {
            prod = &prod * &g.pow(*m as u32);
        }
        let lc = self.leading().unwrap() / prod.leading().unwrap();
        (lc, out)
    }

    /// Exact square root `s` with `s^2 == self` and positive leading coefficient.
    pub fn sqrt_exact(&self) -> Option<IntPoly> {
        let n = self.degree()?;
        if n % 2 == 1 {
            return None;
        }
        let lc = self.leading().unwrap();
        if lc.is_negative() {
            return None;
        }
        let root_lc = lc.sqrt();
        if &(&root_lc * &root_lc) != lc {
            return None;
        }
        let m = n / 2;
        // Solve for s_{m-1}, ..., s_0 from the top coefficients of s^2.
        let mut s = vec![BigInt::zero(); m + 1];
        s[m] = root_lc.clone();
        let two_lc = &root_lc * 2;
        for k in (0..m).rev() {
            // coefficient of z^{m+k} in s^2: 2 s_m s_k + sum_{i+j=m+k, k<i,j<m} s_i s_j
            let mut acc = self.coeff(m + k);
            for i in (k + 1)..m {
                let j = m + k - i;
                if j > k && j < m {
                    acc -= &s[i] * &s[j];
                }
            }
            let (q, r) = acc.div_rem(&two_lc);
            if !r.is_zero() {
                return None;
            }
            s[k] = q;
        }
        let root = IntPoly::new(s);
        (&(&root * &root) == self).then_some(root)
    }

    /// Render in `z` (or another variable name).
    pub fn display_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let unit = mag.is_one() && k > 0;
            if !unit {
                out.push_str(&mag.to_string());
            }
            match k {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{var}^{k}")),
            }
        }
        out
    }

    /// The comma-separated ascending coefficient format.
    pub fn to_coeff_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }
}

pub(crate) fn horner<T: Real>(coeffs: &[T], x: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
}

pub(crate) fn horner_complex<T: Real>(coeffs: &[T], z: Complex<T>) -> Complex<T> {
    coeffs
        .iter()
        .rev()
        .fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * z + Complex::new(c, T::zero()))
}

/// `x = mant * 2^{-shift}` exactly, `shift >= 0`.
pub(crate) fn dyadic(x: f64) -> (BigInt, u64) {
    if x == 0.0 || !x.is_finite() {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & 0x000f_ffff_ffff_ffff;
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1 << 52), exp - 1075) };
    let mut mant = BigInt::from(mant) * sign;
    if e >= 0 {
        mant <<= e as u64;
        (mant, 0)
    } else {
        let tz = mant.trailing_zeros().unwrap_or(0).min((-e) as u64);
        mant >>= tz;
        (mant, (-e) as u64 - tz)
    }
}

/// Natural log of `|n|` for arbitrarily large integers.
pub(crate) fn log_abs_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_var("z"))
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({})", self.display_var("z"))
    }
}

impl FromStr for IntPoly {
    type Err = Error;

    /// Accepts either the coefficient list `"-1,5"` (ascending) or an
    /// expression such as `"5z-1"`, `"29z^2 - 11z + 1"` in `z` or `x`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.replace('\u{2212}', "-");
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let is_list = s.chars().all(|c| c.is_ascii_digit() || matches!(c, ',' | '-' | '+' | ' '));
        if is_list && (s.contains(',') || !s.contains(['x', 'z'])) {
            let coeffs = s
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<BigInt>()
                        .map_err(|e| Error::Parse(format!("coefficient {t:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(IntPoly::new(coeffs));
        }
        parse_expression(s)
    }
}

fn parse_expression(s: &str) -> Result<IntPoly> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = compact.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);
    let mut acc = IntPoly::zero();
    for term in terms {
        acc = &acc + &parse_term(term)?;
    }
    Ok(acc)
}

fn parse_term(term: &str) -> Result<IntPoly> {
    let bad = || Error::Parse(format!("cannot parse term {term:?}"));
    let (sign, body) = match term.as_bytes().first() {
        Some(b'-') => (-1, &term[1..]),
        Some(b'+') => (1, &term[1..]),
        _ => (1, term),
    };
    let var_pos = body.find(['x', 'z']);
    let (coef_txt, power) = match var_pos {
        None => (body, 0usize),
        Some(p) => {
            let rest = &body[p + 1..];
            let power = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?
            };
            (body[..p].trim_end_matches('*'), power)
        }
    };
    let coef = if coef_txt.is_empty() {
        if var_pos.is_none() {
            return Err(bad());
        }
        BigInt::one()
    } else {
        coef_txt.parse::<BigInt>().map_err(|_| bad())?
    };
    Ok(IntPoly::monomial(coef * sign, power))
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // Coefficients as decimal strings would lose the JSON-number convenience;
        // they fit i64 for every polynomial this crate produces, fall back to text otherwise.
        let fits: Option<Vec<i64>> = self.coeffs.iter().map(|c| c.to_i64()).collect();
        match fits {
            Some(v) => v.serialize(s),
            None => self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Coeff {
            Int(i64),
            Text(String),
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            List(Vec<Coeff>),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::List(v) => v
                .into_iter()
                .map(|c| match c {
                    Coeff::Int(i) => Ok(BigInt::from(i)),
                    Coeff::Text(t) => t.parse::<BigInt>().map_err(serde::de::Error::custom),
                })
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(IntPoly::new),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}
