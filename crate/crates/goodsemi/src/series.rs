//! Power series in one variable with exact rational coefficients, known up to
//! a fixed precision: coefficients of `t^i` for `i < precision` are exact and
//! nothing is known above.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    c: Vec<Q>,
}

impl Series {
    pub fn new(mut c: Vec<Q>, precision: usize) -> Series {
        c.resize(precision, Q::zero());
        Series { c }
    }

    pub fn zero(precision: usize) -> Series {
        Series::new(Vec::new(), precision)
    }

    pub fn one(precision: usize) -> Series {
        Series::monomial(Q::one(), 0, precision)
    }

    pub fn t(precision: usize) -> Series {
        Series::monomial(Q::one(), 1, precision)
    }

    pub fn monomial(a: Q, e: usize, precision: usize) -> Series {
        let mut c = vec![Q::zero(); precision];
        if e < precision {
            c[e] = a;
        }
        Series { c }
    }

    pub fn from_terms(terms: &[(usize, Q)], precision: usize) -> Series {
        let mut c = vec![Q::zero(); precision];
        for (e, a) in terms {
            if *e < precision {
                c[*e] += a;
            }
        }
        Series { c }
    }

    pub fn from_ints(terms: &[(usize, i64)], precision: usize) -> Series {
        let t: Vec<(usize, Q)> = terms.iter().map(|&(e, a)| (e, q(a))).collect();
        Series::from_terms(&t, precision)
    }

    pub fn precision(&self) -> usize {
        self.c.len()
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.c.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> Vec<(usize, Q)> {
        self.c.iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(i, a)| (i, a.clone())).collect()
    }

    /// `ν`, or `None` when every known coefficient vanishes.
    pub fn order(&self) -> Option<usize> {
        self.c.iter().position(|a| !a.is_zero())
    }

    /// Order, treating a series that vanishes to its precision as having
    /// order equal to the precision (a lower bound).
    fn order_bound(&self) -> usize {
        self.order().unwrap_or(self.precision())
    }

    pub fn truncate(&self, precision: usize) -> Series {
        let mut c = self.c.clone();
        c.truncate(precision);
        Series { c }
    }

    pub fn add(&self, o: &Series) -> Series {
        let p = self.precision().min(o.precision());
        Series { c: (0..p).map(|i| &self.c[i] + &o.c[i]).collect() }
    }

    pub fn sub(&self, o: &Series) -> Series {
        let p = self.precision().min(o.precision());
        Series { c: (0..p).map(|i| &self.c[i] - &o.c[i]).collect() }
    }

    pub fn neg(&self) -> Series {
        Series { c: self.c.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, a: &Q) -> Series {
        Series { c: self.c.iter().map(|x| x * a).collect() }
    }

    pub fn mul(&self, o: &Series) -> Series {
        let p = (self.precision() + o.order_bound()).min(o.precision() + self.order_bound());
        let mut c = vec![Q::zero(); p];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() || i >= p {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if i + j >= p {
                    break;
                }
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        Series { c }
    }

    pub fn pow(&self, n: u32) -> Series {
        if n == 0 {
            return Series::one(self.precision());
        }
        let mut r = self.clone();
        for _ in 1..n {
            r = r.mul(self);
        }
        r
    }

    /// Quotient by `t^m`; the caller guarantees `ν ≥ m`.
    pub fn shift_down(&self, m: usize) -> Series {
        Series { c: self.c.iter().skip(m).cloned().collect() }
    }

    pub fn shift_up(&self, m: usize) -> Series {
        let mut c = vec![Q::zero(); m];
        c.extend(self.c.iter().cloned());
        Series { c }
    }

    /// Inverse of a unit.
    pub fn inverse(&self) -> Result<Series> {
        let p = self.precision();
        if p == 0 || self.c[0].is_zero() {
            return Err(Error::InsufficientPrecision("inverting a non-unit".into()));
        }
        let inv0 = self.c[0].recip();
        let mut r = vec![Q::zero(); p];
        r[0] = inv0.clone();
        for n in 1..p {
            let mut s = Q::zero();
            for k in 1..=n {
                if !self.c[k].is_zero() {
                    s += &self.c[k] * &r[n - k];
                }
            }
            r[n] = -s * &inv0;
        }
        Ok(Series { c: r })
    }

    /// `self / o`, defined when `ν(self) ≥ ν(o)` and `ν(o)` is known.
    pub fn div(&self, o: &Series) -> Result<Series> {
        let m = o.order().ok_or_else(|| Error::InsufficientPrecision("divisor vanishes to its precision".into()))?;
        match self.order() {
            Some(v) if v < m => {
                return Err(Error::InsufficientPrecision(format!("quotient has a pole (order {v} over {m})")))
            }
            None if self.precision() < m => {
                return Err(Error::InsufficientPrecision("dividend known below the divisor order".into()))
            }
            _ => {}
        }
        Ok(self.shift_down(m).mul(&o.shift_down(m).inverse()?))
    }

    /// `self(g)` for `ν(g) ≥ 1`.
    pub fn compose(&self, g: &Series) -> Result<Series> {
        let m = g.order_bound();
        if m == 0 {
            return Err(Error::InsufficientPrecision("substituting a unit".into()));
        }
        let nu = self.order_bound().max(1);
        let p = (self.precision() * m).min(g.precision() + (nu - 1) * m);
        let mut out = Series::zero(p);
        let mut power = Series::one(p);
        for (i, a) in self.c.iter().enumerate() {
            if i > 0 {
                power = power.mul(g).truncate(p);
                if power.precision() < p {
                    power = Series::new(power.c, p);
                }
            }
            if !a.is_zero() {
                out = out.add(&power.scale(a));
            }
            if i * m >= p {
                break;
            }
        }
        Ok(out.truncate(p))
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, a) in self.terms() {
            let sign = if a.is_negative() { "-" } else { "+" };
            if first {
                if a.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = a.abs();
            match (e, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "t^{e}")?,
                _ => write!(f, "{a}*t^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.precision())
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
