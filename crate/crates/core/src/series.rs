//! Truncated power series with exact big-integer coefficients.
//!
//! A [`TruncatedSeries`] of order `N` stores exactly `N + 1` coefficients
//! `c_0..c_N`. Binary operations truncate to the smaller order of their
//! operands; nothing is ever silently extended.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::SeriesError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    /// Builds a series from `c_0..c_N`; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(Self { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self, SeriesError> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigInt {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Drops every coefficient above `order` (no-op if already at or below).
    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order()) + 1;
        Self {
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Indices and values of the nonzero coefficients, ascending.
    pub fn nonzero_terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = self.coeffs[..=order]
            .iter()
            .zip(&other.coeffs[..=order])
            .map(|(x, y)| x + y)
            .collect();
        Self { coeffs }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut coeffs = vec![BigInt::zero(); order + 1];
        let rhs: Vec<(usize, &BigInt)> = other.nonzero_terms().collect();
        for (i, x) in self.nonzero_terms() {
            if i > order {
                break;
            }
            for &(j, y) in &rhs {
                if i + j > order {
                    break;
                }
                coeffs[i + j] += x * y;
            }
        }
        Self { coeffs }
    }

    /// `1 - self` at the same order.
    pub fn one_minus(&self) -> Self {
        Self::one(self.order()).sub(self)
    }

    /// Exact value of the partial sum `sum_{k<=N} c_k q^k`.
    ///
    /// For nonnegative coefficients and `q >= 0` this is a lower bound on the
    /// value of any series that agrees with `self` up to order `N`.
    pub fn eval_lower(&self, q: &BigRational) -> BigRational {
        // Homogeneous Horner on q = p / r: sum c_k p^k r^(N-k), over r^N.
        let p = q.numer();
        let r = q.denom();
        let n = self.order();
        let mut acc = self.coeffs[n].clone();
        let mut r_pow = BigInt::one();
        for k in (0..n).rev() {
            r_pow *= r;
            acc *= p;
            let c = &self.coeffs[k];
            if !c.is_zero() {
                acc += c * &r_pow;
            }
        }
        let denom = num_traits::pow(r.clone(), n);
        BigRational::new(acc, denom)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.nonzero_terms() {
            let (sign, mag) = match c.sign() {
                Sign::Minus => ("-", -c),
                _ => ("+", c.clone()),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{mag}t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

/// Coefficients `b_0..b_N` of `1 / (1 - a(t))` via the recurrence
/// `b_n = sum_{k=1..n} a_k b_{n-k}`.
///
/// The result order is `min(order, a.order())`. Only the nonzero `a_k` are
/// visited, so sparse weight multisets cost `O(N * |support|)` big-integer
/// additions.
pub fn recip_one_minus(a: &TruncatedSeries, order: usize) -> Result<TruncatedSeries, SeriesError> {
    if !a.coeff(0).is_zero() {
        return Err(SeriesError::NonzeroConstantTerm(a.coeff(0).clone()));
    }
    let order = order.min(a.order());
    let terms: Vec<(usize, &BigInt)> = a.nonzero_terms().filter(|(k, _)| *k <= order).collect();
    let mut b: Vec<BigInt> = Vec::with_capacity(order + 1);
    b.push(BigInt::one());
    for n in 1..=order {
        let mut acc = BigInt::zero();
        for &(k, ak) in &terms {
            if k > n {
                break;
            }
            if ak.is_one() {
                acc += &b[n - k];
            } else {
                acc += ak * &b[n - k];
            }
        }
        b.push(acc);
    }
    Ok(TruncatedSeries { coeffs: b })
}

/// Converts nonnegative series coefficients into unsigned integers.
pub fn to_unsigned(s: &TruncatedSeries) -> Result<Vec<BigUint>, SeriesError> {
    s.coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c.to_biguint().ok_or(SeriesError::NegativeCoefficient(k)))
        .collect()
}
