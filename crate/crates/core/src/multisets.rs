//! Weight multisets `A` and their generating functions `a(t) = sum a_k t^k`.
//!
//! Builtin families:
//!
//! | spec string  | `a_k`                                                              |
//! |--------------|--------------------------------------------------------------------|
//! | `fg-codim`   | `[k = m^2]`                                                        |
//! | `codim`      | `[k = m^2] + [k = 2m^2] + #{1 <= a <= b : (a+b)^2 = k}`            |
//! | `gk-fg:d=D`  | `[k = (D-1)m^2 + 1]`                                               |
//! | `gk:d=D`     | `2[k = (D-1)m^2 + 1] + #{1 <= a <= b : (D-1)(a^2+b^2) + 2 = k}`    |
//! | `factorial`  | `[k = j!]` for `j >= 1`                                            |
//! | `zeta:n=N`   | `floor(2^k / k^(2N))` for `k >= 2`                                 |
//! | `file:PATH`  | finite list of `(exponent, multiplicity)` pairs from a JSON file   |
//!
//! Every family carries a [`TailMajorant`] so that `a(q)` can be bounded from
//! above with exact rational arithmetic.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{MultisetError, SpecError};
use crate::series::TruncatedSeries;

/// A finite user-supplied multiset, sorted by exponent with distinct exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CustomMultiset {
    name: String,
    terms: Vec<(u64, u64)>,
}

#[derive(Serialize, Deserialize)]
struct CustomDocument {
    name: String,
    terms: Vec<[u64; 2]>,
}

impl CustomMultiset {
    pub fn new(name: impl Into<String>, mut terms: Vec<(u64, u64)>) -> Result<Self, SpecError> {
        if terms.is_empty() {
            return Err(SpecError::NoTerms);
        }
        terms.sort_unstable();
        for w in terms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(SpecError::DuplicateExponent(w[0].0));
            }
        }
        for &(e, m) in &terms {
            if e == 0 {
                return Err(SpecError::ZeroExponent);
            }
            if m == 0 {
                return Err(SpecError::ZeroMultiplicity(e));
            }
        }
        Ok(Self {
            name: name.into(),
            terms,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        let doc: CustomDocument = serde_json::from_str(text)?;
        Self::new(
            doc.name,
            doc.terms.into_iter().map(|[e, m]| (e, m)).collect(),
        )
    }

    pub fn to_json(&self) -> String {
        let doc = CustomDocument {
            name: self.name.clone(),
            terms: self.terms.iter().map(|&(e, m)| [e, m]).collect(),
        };
        serde_json::to_string(&doc).expect("plain struct serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SpecError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn terms(&self) -> &[(u64, u64)] {
        &self.terms
    }

    pub fn max_exponent(&self) -> u64 {
        self.terms.last().map_or(0, |t| t.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Exponents of `M_m(K)`: the squares.
    FgCodim,
    /// Exponents of `M_m(K)`, `M_m(E)` and `M_{a,b}`.
    Codim,
    /// GK dimensions of `d`-generated relatively free algebras of `M_m(K)`.
    GkFg {
        d: u64,
    },
    /// GK dimensions for all three kinds of T-prime varieties, `d` generators.
    Gk {
        d: u64,
    },
    Factorial,
    /// `floor(2^k / k^(2n))`, radius of convergence 1/2.
    Zeta {
        n: u64,
    },
    Custom(CustomMultiset),
}

/// One T-prime building block of a minimal variety.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    MatrixK(u64),
    MatrixE(u64),
    Pair(u64, u64),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::MatrixK(m) => write!(f, "M_{m}(K)"),
            Atom::MatrixE(m) => write!(f, "M_{m}(E)"),
            Atom::Pair(a, b) => write!(f, "M_{{{a},{b}}}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailForm {
    /// Nothing beyond `max_exponent`.
    Finite { max_exponent: u64 },
    /// `a_k <= c * k^p` for every `k`.
    Polynomial { c: u32, p: u32 },
    /// `a_k <= 2^k / k^(2n)`.
    Zeta { n: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailMajorant {
    pub form: TailForm,
    pub radius: BigRational,
}

impl TailMajorant {
    /// The majorant's value at `k`, when it is a plain integer bound.
    pub fn bound_at(&self, k: u64) -> BigUint {
        match self.form {
            TailForm::Finite { .. } => BigUint::from(u64::MAX),
            TailForm::Polynomial { c, p } => {
                BigUint::from(c) * num_traits::pow(BigUint::from(k), p as usize)
            }
            TailForm::Zeta { n } => {
                (BigUint::one() << k) / num_traits::pow(BigUint::from(k), 2 * n as usize)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultisetSpec {
    family: Family,
}

impl MultisetSpec {
    pub fn fg_codim() -> Self {
        Self {
            family: Family::FgCodim,
        }
    }

    pub fn codim() -> Self {
        Self {
            family: Family::Codim,
        }
    }

    pub fn gk_fg(d: u64) -> Result<Self, SpecError> {
        if d < 2 {
            return Err(SpecError::InvalidD(d));
        }
        Ok(Self {
            family: Family::GkFg { d },
        })
    }

    pub fn gk(d: u64) -> Result<Self, SpecError> {
        if d < 2 {
            return Err(SpecError::InvalidD(d));
        }
        Ok(Self {
            family: Family::Gk { d },
        })
    }

    pub fn factorial() -> Self {
        Self {
            family: Family::Factorial,
        }
    }

    pub fn zeta(n: u64) -> Result<Self, SpecError> {
        if n < 1 {
            return Err(SpecError::InvalidN(n));
        }
        Ok(Self {
            family: Family::Zeta { n },
        })
    }

    pub fn custom(custom: CustomMultiset) -> Self {
        Self {
            family: Family::Custom(custom),
        }
    }

    /// Parses a spec string; `file:<path>` reads a custom multiset document.
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let text = text.trim();
        if let Some(path) = text.strip_prefix("file:") {
            return Ok(Self::custom(CustomMultiset::load(path)?));
        }
        match text {
            "fg-codim" => return Ok(Self::fg_codim()),
            "codim" => return Ok(Self::codim()),
            "factorial" => return Ok(Self::factorial()),
            _ => {}
        }
        let (head, param) = text
            .split_once(':')
            .ok_or_else(|| SpecError::Unknown(text.to_string()))?;
        let value = |key: &str| -> Result<u64, SpecError> {
            param
                .strip_prefix(key)
                .and_then(|v| v.strip_prefix('='))
                .and_then(|v| v.parse::<u64>().ok())
                .ok_or_else(|| SpecError::BadParameter(text.to_string()))
        };
        match head {
            "gk-fg" => Self::gk_fg(value("d")?),
            "gk" => Self::gk(value("d")?),
            "zeta" => Self::zeta(value("n")?),
            _ => Err(SpecError::Unknown(text.to_string())),
        }
    }

    /// Every builtin family, with the given GK/zeta parameters.
    pub fn builtins(d: u64, n: u64) -> Vec<Self> {
        vec![
            Self::fg_codim(),
            Self::codim(),
            Self::gk_fg(d).expect("d >= 2"),
            Self::gk(d).expect("d >= 2"),
            Self::factorial(),
            Self::zeta(n).expect("n >= 1"),
        ]
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Nonzero `(k, a_k)` with `1 <= k <= bound`, ascending in `k`.
    pub fn terms(&self, bound: u64) -> Vec<(u64, BigUint)> {
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        let mut bump = |k: u64, by: u64| *counts.entry(k).or_insert(0) += by;
        match &self.family {
            Family::FgCodim => {
                for sq in squares(bound) {
                    bump(sq, 1);
                }
            }
            Family::Codim => {
                for sq in squares(bound) {
                    bump(sq, 1);
                }
                for sq in squares(bound / 2) {
                    bump(2 * sq, 1);
                }
                // (a+b)^2 = s^2 has floor(s/2) solutions with 1 <= a <= b
                for s in 2..=bound.sqrt() {
                    bump(s * s, s / 2);
                }
            }
            Family::GkFg { d } => {
                for k in gk_atom_weights(*d, bound) {
                    bump(k, 1);
                }
            }
            Family::Gk { d } => {
                for k in gk_atom_weights(*d, bound) {
                    bump(k, 2);
                }
                for (_, _, k) in gk_pairs(*d, bound) {
                    bump(k, 1);
                }
            }
            Family::Factorial => {
                let mut f: u64 = 1;
                for j in 1u64.. {
                    f = match f.checked_mul(j) {
                        Some(f) if f <= bound => f,
                        _ => break,
                    };
                    bump(f, 1);
                }
            }
            Family::Zeta { n } => return zeta_terms(*n, bound),
            Family::Custom(c) => {
                for &(e, m) in c.terms.iter().filter(|t| t.0 <= bound) {
                    bump(e, m);
                }
            }
        }
        counts
            .into_iter()
            .map(|(k, m)| (k, BigUint::from(m)))
            .collect()
    }

    /// `a(t)` truncated at `order`, with `a_0 = 0`.
    pub fn coefficients(&self, order: usize) -> TruncatedSeries {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        for (k, m) in self.terms(order as u64) {
            coeffs[k as usize] = BigInt::from(m);
        }
        TruncatedSeries::new(coeffs).expect("order + 1 >= 1 coefficients")
    }

    pub fn support(&self, bound: u64) -> Vec<u64> {
        match &self.family {
            // avoid the big-integer division when only positivity matters
            Family::Zeta { n } => (2..=bound).filter(|&k| zeta_positive(k, *n)).collect(),
            _ => self.terms(bound).into_iter().map(|(k, _)| k).collect(),
        }
    }

    pub fn support_gcd(&self, bound: u64) -> Result<u64, MultisetError> {
        let support = self.support(bound);
        if support.is_empty() {
            return Err(MultisetError::EmptySupport(bound));
        }
        Ok(support.into_iter().fold(0, |g, k| g.gcd(&k)))
    }

    pub fn majorant(&self) -> TailMajorant {
        let one = BigRational::one();
        let (form, radius) = match &self.family {
            Family::FgCodim | Family::GkFg { .. } | Family::Factorial => {
                (TailForm::Polynomial { c: 1, p: 0 }, one)
            }
            // a_k <= 2 + floor(sqrt(k)/2) <= k
            Family::Codim => (TailForm::Polynomial { c: 1, p: 1 }, one),
            // a_k <= 2 + #{a : 2(d-1)a^2 <= k} <= 2 + sqrt(k) <= 2k
            Family::Gk { .. } => (TailForm::Polynomial { c: 2, p: 1 }, one),
            Family::Zeta { n } => (
                TailForm::Zeta { n: *n },
                BigRational::new(BigInt::one(), BigInt::from(2)),
            ),
            Family::Custom(c) => (
                TailForm::Finite {
                    max_exponent: c.max_exponent(),
                },
                one,
            ),
        };
        TailMajorant { form, radius }
    }

    /// A rational `U >= sum_{k > order} a_k q^k`, for `0 <= q < radius`.
    pub fn tail_bound(&self, q: &BigRational, order: usize) -> Result<BigRational, MultisetError> {
        let majorant = self.majorant();
        if q < &BigRational::zero() || q >= &majorant.radius {
            return Err(MultisetError::OutsideRadius {
                q: q.clone(),
                radius: majorant.radius,
            });
        }
        if q.is_zero() {
            return Ok(BigRational::zero());
        }
        let one = BigRational::one();
        let big_n = BigRational::from_integer(BigInt::from(order));
        let next = order + 1;
        Ok(match majorant.form {
            TailForm::Finite { .. } => self.exact_finite_tail(q, order),
            TailForm::Polynomial { c, p } => {
                let c = BigRational::from_integer(BigInt::from(c));
                let q_next = num_traits::pow(q.clone(), next);
                let geometric = &one - q;
                match p {
                    0 => c * q_next / geometric,
                    _ => {
                        let lead = (&big_n + &one) - &big_n * q;
                        c * q_next * lead / (&geometric * &geometric)
                    }
                }
            }
            TailForm::Zeta { n } => {
                let two_q = q * BigRational::from_integer(BigInt::from(2));
                let denom = (&one - &two_q)
                    * BigRational::from_integer(num_traits::pow(
                        BigInt::from(next),
                        2 * n as usize,
                    ));
                num_traits::pow(two_q, next) / denom
            }
        })
    }

    /// A rational bound on `sum_{k > order} a_k rho^k` at the radius itself,
    /// when the series converges there (finite customs and the zeta family).
    pub fn radius_tail_bound(&self, order: usize) -> Option<BigRational> {
        let majorant = self.majorant();
        match majorant.form {
            TailForm::Finite { .. } => Some(self.exact_finite_tail(&majorant.radius, order)),
            TailForm::Polynomial { .. } => None,
            TailForm::Zeta { n } => {
                // sum_{k > N} k^(-2n) <= integral_N^inf x^(-2n) dx, with a_k = 0 for k < 2
                let base = BigInt::from(order.max(1));
                let denom = BigInt::from(2 * n - 1) * num_traits::pow(base, (2 * n - 1) as usize);
                Some(BigRational::new(BigInt::one(), denom))
            }
        }
    }

    fn exact_finite_tail(&self, q: &BigRational, order: usize) -> BigRational {
        let Family::Custom(c) = &self.family else {
            unreachable!("finite tails only exist for custom multisets")
        };
        c.terms
            .iter()
            .filter(|t| t.0 as usize > order)
            .map(|&(e, m)| {
                BigRational::from_integer(BigInt::from(m)) * num_traits::pow(q.clone(), e as usize)
            })
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    pub fn has_variety_semantics(&self) -> bool {
        matches!(
            self.family,
            Family::FgCodim | Family::Codim | Family::GkFg { .. } | Family::Gk { .. }
        )
    }

    /// The T-prime atoms of the given weight in color order, or `None` for
    /// families without a minimal-variety reading.
    ///
    /// Within a weight: `M_m(K)`, then `M_m(E)`, then `M_{a,b}` by ascending `a`.
    pub fn atoms(&self, weight: u64) -> Option<Vec<Atom>> {
        let mut atoms = Vec::new();
        match &self.family {
            Family::FgCodim => {
                if let Some(m) = exact_sqrt(weight) {
                    atoms.push(Atom::MatrixK(m));
                }
            }
            Family::Codim => {
                if let Some(m) = exact_sqrt(weight) {
                    atoms.push(Atom::MatrixK(m));
                }
                if weight.is_multiple_of(2) {
                    if let Some(m) = exact_sqrt(weight / 2) {
                        atoms.push(Atom::MatrixE(m));
                    }
                }
                if let Some(s) = exact_sqrt(weight) {
                    atoms.extend((1..=s / 2).map(|a| Atom::Pair(a, s - a)));
                }
            }
            Family::GkFg { d } => {
                if let Some(m) = gk_atom_index(*d, weight) {
                    atoms.push(Atom::MatrixK(m));
                }
            }
            Family::Gk { d } => {
                if let Some(m) = gk_atom_index(*d, weight) {
                    atoms.push(Atom::MatrixK(m));
                    atoms.push(Atom::MatrixE(m));
                }
                if weight >= 2 && (weight - 2).is_multiple_of(d - 1) {
                    let s = (weight - 2) / (d - 1);
                    for a in 1..=(s / 2).sqrt() {
                        if let Some(b) = exact_sqrt(s - a * a) {
                            if a <= b {
                                atoms.push(Atom::Pair(a, b));
                            }
                        }
                    }
                }
            }
            Family::Factorial | Family::Zeta { .. } | Family::Custom(_) => return None,
        }
        Some(atoms)
    }
}

impl FromStr for MultisetSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl fmt::Display for MultisetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::FgCodim => write!(f, "fg-codim"),
            Family::Codim => write!(f, "codim"),
            Family::GkFg { d } => write!(f, "gk-fg:d={d}"),
            Family::Gk { d } => write!(f, "gk:d={d}"),
            Family::Factorial => write!(f, "factorial"),
            Family::Zeta { n } => write!(f, "zeta:n={n}"),
            Family::Custom(c) => write!(f, "custom:{}", c.name),
        }
    }
}

fn squares(bound: u64) -> impl Iterator<Item = u64> {
    (1..=bound.sqrt()).map(|m| m * m)
}

fn exact_sqrt(k: u64) -> Option<u64> {
    let r = k.sqrt();
    (r > 0 && r * r == k).then_some(r)
}

fn gk_atom_weights(d: u64, bound: u64) -> impl Iterator<Item = u64> {
    let step = d - 1;
    (1u64..)
        .map(move |m| (m as u128) * (m as u128) * step as u128 + 1)
        .take_while(move |&k| k <= bound as u128)
        .map(|k| k as u64)
}

fn gk_atom_index(d: u64, weight: u64) -> Option<u64> {
    if weight < 1 || !(weight - 1).is_multiple_of(d - 1) {
        return None;
    }
    exact_sqrt((weight - 1) / (d - 1))
}

/// `(a, b, (d-1)(a^2+b^2)+2)` for `1 <= a <= b`, weight at most `bound`.
fn gk_pairs(d: u64, bound: u64) -> Vec<(u64, u64, u64)> {
    let step = (d - 1) as u128;
    let weight = |a: u64, b: u64| step * ((a as u128).pow(2) + (b as u128).pow(2)) + 2;
    let mut out = Vec::new();
    let mut a = 1u64;
    while weight(a, a) <= bound as u128 {
        let mut b = a;
        while weight(a, b) <= bound as u128 {
            out.push((a, b, weight(a, b) as u64));
            b += 1;
        }
        a += 1;
    }
    out
}

fn zeta_positive(k: u64, n: u64) -> bool {
    // 2^k >= k^(2n)  <=>  k >= 2n log2(k); compare exactly on integers
    if k < 2 {
        return false;
    }
    let lhs = BigUint::one() << k;
    lhs >= num_traits::pow(BigUint::from(k), 2 * n as usize)
}

fn zeta_terms(n: u64, bound: u64) -> Vec<(u64, BigUint)> {
    let mut out = Vec::new();
    let mut power = BigUint::from(2u32);
    for k in 2..=bound {
        power <<= 1;
        let value = &power / num_traits::pow(BigUint::from(k), 2 * n as usize);
        if !value.is_zero() {
            out.push((k, value));
        }
    }
    out
}
