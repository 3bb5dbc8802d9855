//! Integer-coefficient polynomials in the variable `q`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Sub, SubAssign};

/// A polynomial in `q` with `i64` coefficients, stored densely by exponent.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial is
/// the empty coefficient list and equality is structural. Coefficient
/// arithmetic is checked: desk-scale Kazhdan-Lusztig values are tiny, but an
/// overflow aborts with a diagnostic instead of wrapping silently.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPolynomial {
    coeffs: Vec<i64>,
}

impl QPolynomial {
    /// The zero polynomial.
    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        QPolynomial { coeffs: vec![1] }
    }

    /// The monomial `q^k`.
    pub fn q_power(k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        QPolynomial { coeffs }
    }

    /// Builds a polynomial from coefficients indexed by exponent.
    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        let mut p = QPolynomial { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True for the constant polynomial 1.
    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `q^k` (zero beyond the degree).
    pub fn coefficient(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    /// Coefficients by ascending exponent, trailing zeros trimmed.
    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    /// Adds `c * q^k` in place.
    pub fn add_term(&mut self, k: usize, c: i64) {
        if c == 0 {
            return;
        }
        if self.coeffs.len() <= k {
            self.coeffs.resize(k + 1, 0);
        }
        self.coeffs[k] = checked_add(self.coeffs[k], c);
        self.trim();
    }

    /// Returns `self * q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0; k + self.coeffs.len()];
        coeffs[k..].copy_from_slice(&self.coeffs);
        QPolynomial { coeffs }
    }

    /// Returns `self * c`.
    pub fn scale(&self, c: i64) -> Self {
        if c == 0 {
            return Self::zero();
        }
        QPolynomial {
            coeffs: self.coeffs.iter().map(|&a| checked_mul(a, c)).collect(),
        }
    }
}

fn checked_add(a: i64, b: i64) -> i64 {
    a.checked_add(b)
        .unwrap_or_else(|| panic!("polynomial coefficient overflow: {a} + {b}"))
}

fn checked_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b)
        .unwrap_or_else(|| panic!("polynomial coefficient overflow: {a} * {b}"))
}

impl AddAssign<&QPolynomial> for QPolynomial {
    fn add_assign(&mut self, rhs: &QPolynomial) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), 0);
        }
        for (i, &c) in rhs.coeffs.iter().enumerate() {
            self.coeffs[i] = checked_add(self.coeffs[i], c);
        }
        self.trim();
    }
}

impl SubAssign<&QPolynomial> for QPolynomial {
    fn sub_assign(&mut self, rhs: &QPolynomial) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), 0);
        }
        for (i, &c) in rhs.coeffs.iter().enumerate() {
            self.coeffs[i] = checked_add(self.coeffs[i], -c);
        }
        self.trim();
    }
}

impl Add for &QPolynomial {
    type Output = QPolynomial;
    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &QPolynomial {
    type Output = QPolynomial;
    fn sub(self, rhs: &QPolynomial) -> QPolynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return QPolynomial::zero();
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = checked_add(coeffs[i + j], checked_mul(a, b));
            }
        }
        QPolynomial::from_coeffs(coeffs)
    }
}

/// Renders by ascending power as in `1 + q + 2q^2`; the zero polynomial
/// renders as `0`.
impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.unsigned_abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    if k == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPolynomial({self})")
    }
}
