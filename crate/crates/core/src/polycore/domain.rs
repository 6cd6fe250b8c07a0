//! Real evaluation domains and reduced rational points.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{domain_err, Error, Result};
use crate::scalar::Real;

/// Finite union of closed real intervals, kept sorted and pairwise disjoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de> + Real"))]
#[serde(try_from = "Vec<[T; 2]>", into = "Vec<[T; 2]>")]
pub struct IntervalUnion<T: Real> {
    intervals: Vec<[T; 2]>,
}

impl<T: Real> IntervalUnion<T> {
    /// Normalises: drops NaNs, sorts, and merges touching or overlapping pieces.
    pub fn new(mut intervals: Vec<[T; 2]>) -> Result<Self> {
        for iv in &intervals {
            if !(iv[0] <= iv[1]) || !iv[0].is_finite() || !iv[1].is_finite() {
                return domain_err(format!("invalid interval [{}, {}]", iv[0], iv[1]));
            }
        }
        intervals.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());
        let mut merged: Vec<[T; 2]> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                Some(last) if iv[0] <= last[1] => last[1] = last[1].max(iv[1]),
                _ => merged.push(iv),
            }
        }
        Ok(IntervalUnion { intervals: merged })
    }

    pub fn interval(lo: T, hi: T) -> Result<Self> {
        Self::new(vec![[lo, hi]])
    }

    pub fn intervals(&self) -> &[[T; 2]] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// `[min, max]` of the union; `None` when empty.
    pub fn hull(&self) -> Option<[T; 2]> {
        Some([self.intervals.first()?[0], self.intervals.last()?[1]])
    }

    /// Total length.
    pub fn measure(&self) -> T {
        self.intervals.iter().map(|iv| iv[1] - iv[0]).sum()
    }

    pub fn contains(&self, x: T) -> bool {
        self.intervals.iter().any(|iv| iv[0] <= x && x <= iv[1])
    }

    /// Euclidean distance from a complex point to the union.
    pub fn distance(&self, z: Complex<T>) -> T {
        self.intervals
            .iter()
            .map(|iv| {
                let dx = if z.re < iv[0] {
                    iv[0] - z.re
                } else if z.re > iv[1] {
                    z.re - iv[1]
                } else {
                    T::zero()
                };
                dx.hypot(z.im)
            })
            .fold(T::infinity(), T::min)
    }

    /// Uniform grid with about `density` points per unit length, always
    /// including every interval's endpoints. Degenerate pieces give one point.
    pub fn grid(&self, density: usize) -> Vec<T> {
        let dens = T::from_usize(density.max(1)).unwrap();
        let mut out = Vec::new();
        for iv in &self.intervals {
            let len = iv[1] - iv[0];
            let cells = (len * dens).ceil().to_usize().unwrap_or(0).max(1);
            if len == T::zero() {
                out.push(iv[0]);
                continue;
            }
            let h = len / T::from_usize(cells).unwrap();
            for i in 0..cells {
                out.push(iv[0] + h * T::from_usize(i).unwrap());
            }
            out.push(iv[1]);
        }
        out
    }

    /// Whether the union is mirror-symmetric about its hull midpoint, to `tol`.
    pub fn symmetry_center(&self, tol: T) -> Option<T> {
        let [lo, hi] = self.hull()?;
        let two = T::one() + T::one();
        let c = (lo + hi) / two;
        let n = self.intervals.len();
        for (i, iv) in self.intervals.iter().enumerate() {
            let mirror = self.intervals[n - 1 - i];
            if (iv[0] - (two * c - mirror[1])).abs() > tol || (iv[1] - (two * c - mirror[0])).abs() > tol {
                return None;
            }
        }
        Some(c)
    }

    pub fn map<U: Real>(&self, f: impl Fn(T) -> U) -> IntervalUnion<U> {
        IntervalUnion { intervals: self.intervals.iter().map(|iv| [f(iv[0]), f(iv[1])]).collect() }
    }
}

impl<T: Real> TryFrom<Vec<[T; 2]>> for IntervalUnion<T> {
    type Error = Error;
    fn try_from(v: Vec<[T; 2]>) -> Result<Self> {
        Self::new(v)
    }
}

impl<T: Real> From<IntervalUnion<T>> for Vec<[T; 2]> {
    fn from(u: IntervalUnion<T>) -> Self {
        u.intervals
    }
}

impl<T: Real> fmt::Display for IntervalUnion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.intervals.iter().map(|iv| format!("[{}, {}]", iv[0], iv[1])).collect();
        f.write_str(&parts.join(" U "))
    }
}

impl<T: Real> FromStr for IntervalUnion<T> {
    type Err = Error;

    /// `"0:0.25"` or `"0:0.25,0.5:1"`; fractions such as `1/4` are accepted.
    fn from_str(s: &str) -> Result<Self> {
        let mut ivs = Vec::new();
        for piece in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (lo, hi) = piece
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("interval {piece:?} is not of the form lo:hi")))?;
            ivs.push([parse_real(lo)?, parse_real(hi)?]);
        }
        Self::new(ivs)
    }
}

/// Parses a decimal or a fraction `p/q`.
pub fn parse_real<T: Real>(s: &str) -> Result<T> {
    let s = s.trim().replace('\u{2212}', "-");
    let bad = || Error::Parse(format!("not a number: {s:?}"));
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            p / q
        }
        None => s.parse::<f64>().map_err(|_| bad())?,
    };
    T::from_f64(v).ok_or_else(bad)
}

/// Complex rational `(p1 + i p2) / q` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPoint")]
pub struct RationalPoint {
    p1: i64,
    p2: i64,
    q: i64,
}

#[derive(Deserialize)]
struct RawPoint {
    p1: i64,
    #[serde(default)]
    p2: i64,
    q: i64,
}

impl TryFrom<RawPoint> for RationalPoint {
    type Error = Error;
    fn try_from(r: RawPoint) -> Result<Self> {
        RationalPoint::new(r.p1, r.p2, r.q)
    }
}

impl RationalPoint {
    pub fn new(p1: i64, p2: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return domain_err("rational point with zero denominator");
        }
        let g = p1.gcd(&p2).gcd(&q);
        let s = q.signum();
        Ok(RationalPoint { p1: s * p1 / g, p2: s * p2 / g, q: s * q / g })
    }

    pub fn real(p: i64, q: i64) -> Result<Self> {
        Self::new(p, 0, q)
    }

    pub fn zero() -> Self {
        RationalPoint { p1: 0, p2: 0, q: 1 }
    }

    pub fn p1(&self) -> i64 {
        self.p1
    }

    pub fn p2(&self) -> i64 {
        self.p2
    }

    /// The reduced denominator; 1 for the origin.
    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn to_complex<T: Real>(&self) -> Complex<T> {
        let q = T::from_i64(self.q).unwrap();
        Complex::new(T::from_i64(self.p1).unwrap() / q, T::from_i64(self.p2).unwrap() / q)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.p2, self.q) {
            (0, 1) => write!(f, "{}", self.p1),
            (0, q) => write!(f, "{}/{}", self.p1, q),
            (p2, 1) => write!(f, "{}{:+}i", self.p1, p2),
            (p2, q) => write!(f, "({}{:+}i)/{}", self.p1, p2, q),
        }
    }
}

impl FromStr for RationalPoint {
    type Err = Error;

    /// Real rationals only: `"0"`, `"1/4"`, `"-3/5"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().replace('\u{2212}', "-");
        let bad = || Error::Parse(format!("not a rational point: {s:?}"));
        match s.split_once('/') {
            Some((p, q)) => {
                RationalPoint::real(p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?)
            }
            None => RationalPoint::real(s.parse().map_err(|_| bad())?, 1),
        }
    }
}
