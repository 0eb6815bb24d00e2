//! Composition counts `b_n`, their `n`-th roots, and certified brackets for
//! the root `alpha` of `a(t) = 1` (hence for the growth rate `beta = 1/alpha`).
//!
//! The bracket search is a bisection over exact rationals. A probe `q` is
//! resolved by one of two certificates:
//!
//! * `a(q) >= 1`: some partial sum `sum_{k<=N} a_k q^k` already reaches 1;
//! * `a(q) < 1`: partial sum plus [`MultisetSpec::tail_bound`] stays below 1.
//!
//! When neither fires the truncation order `N` is doubled. Every bracket
//! endpoint keeps the order and value that certified it, and [`verify`]
//! recomputes both from scratch.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{MultisetError, SolveError, VerifyError};
use crate::multisets::MultisetSpec;
use crate::numeric::nth_root;
use crate::series::{recip_one_minus, to_unsigned, TruncatedSeries};

/// Exact `b_0..b_N`, the counts of colored compositions of each `n <= N`.
pub fn b_sequence(spec: &MultisetSpec, order: usize) -> Vec<BigUint> {
    let b = recip_one_minus(&spec.coefficients(order), order).expect("a_0 = 0 for every spec");
    to_unsigned(&b).expect("nonnegative weights give nonnegative counts")
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootRow {
    pub n: u64,
    pub count: BigUint,
    /// `count^(1/n)`; absent when `count = 0`.
    pub root: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct RootsTable {
    pub rows: Vec<RootRow>,
}

impl RootsTable {
    fn from_counts(counts: &[BigUint], step: usize) -> Self {
        let rows = (step..counts.len())
            .step_by(step)
            .map(|n| RootRow {
                n: n as u64,
                count: counts[n].clone(),
                root: nth_root(&counts[n], n as u64),
            })
            .collect();
        Self { rows }
    }

    pub fn row(&self, n: u64) -> Option<&RootRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

/// Rows `n = 1..=order` of `(n, b_n, b_n^(1/n))`.
pub fn roots_table(spec: &MultisetSpec, order: usize) -> RootsTable {
    RootsTable::from_counts(&b_sequence(spec, order), 1)
}

/// Rows along `n = d, 2d, ...` where `d` is the gcd of the support up to `order`.
pub fn gcd_subsequence_roots(
    spec: &MultisetSpec,
    order: usize,
) -> Result<RootsTable, MultisetError> {
    let d = spec.support_gcd(order as u64)?;
    Ok(RootsTable::from_counts(
        &b_sequence(spec, order),
        d as usize,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub initial_order: usize,
    pub max_order: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            initial_order: 64,
            max_order: 1_000_000,
        }
    }
}

/// A certified evaluation of `a` at `point` using coefficients up to `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub point: BigRational,
    pub order: usize,
    /// Upper bound on `a(point)` for a lower endpoint, lower bound for an upper one.
    pub value: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootBracket {
    /// `a(lower.point) < 1 <= a(upper.point)`.
    Bracketed { lower: Witness, upper: Witness },
    /// `a(q) <= sup < 1` for every `0 <= q < radius`.
    NoRootBelowRadius {
        radius: BigRational,
        sup: BigRational,
        order: usize,
    },
}

impl RootBracket {
    pub fn endpoints(&self) -> Option<(&BigRational, &BigRational)> {
        match self {
            RootBracket::Bracketed { lower, upper } => Some((&lower.point, &upper.point)),
            RootBracket::NoRootBelowRadius { .. } => None,
        }
    }

    pub fn width(&self) -> Option<BigRational> {
        self.endpoints().map(|(lo, hi)| hi - lo)
    }

    pub fn midpoint(&self) -> Option<BigRational> {
        self.endpoints()
            .map(|(lo, hi)| (lo + hi) / BigRational::from_integer(BigInt::from(2)))
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.endpoints().is_some_and(|(lo, hi)| lo <= x && x <= hi)
    }
}

enum Certificate {
    AtLeastOne(BigRational),
    BelowOne(BigRational),
}

struct Prober<'a> {
    spec: &'a MultisetSpec,
    order: usize,
    max_order: usize,
    coeffs: TruncatedSeries,
}

impl<'a> Prober<'a> {
    fn new(spec: &'a MultisetSpec, config: &SolverConfig) -> Self {
        let order = config.initial_order.clamp(1, config.max_order.max(1));
        Self {
            spec,
            order,
            max_order: config.max_order.max(1),
            coeffs: spec.coefficients(order),
        }
    }

    fn refine(&mut self) -> bool {
        if self.order >= self.max_order {
            return false;
        }
        self.order = (self.order * 2).min(self.max_order);
        self.coeffs = self.spec.coefficients(self.order);
        true
    }

    fn witness(&self, point: &BigRational, value: BigRational) -> Witness {
        Witness {
            point: point.clone(),
            order: self.order,
            value,
        }
    }

    /// Resolves `a(q)` against 1 for `0 <= q < radius`, raising the order as needed.
    fn certify(&mut self, q: &BigRational) -> Option<Certificate> {
        let one = BigRational::one();
        loop {
            let partial = self.coeffs.eval_lower(q);
            if partial >= one {
                return Some(Certificate::AtLeastOne(partial));
            }
            let upper = partial
                + self
                    .spec
                    .tail_bound(q, self.order)
                    .expect("probes stay strictly inside the radius");
            if upper < one {
                return Some(Certificate::BelowOne(upper));
            }
            if !self.refine() {
                return None;
            }
        }
    }
}

/// Brackets the positive root `alpha` of `a(t) = 1` to width at most `eps`,
/// or certifies that `a` stays below 1 on the whole disc of convergence.
pub fn solve_alpha(
    spec: &MultisetSpec,
    eps: &BigRational,
    config: &SolverConfig,
) -> Result<RootBracket, SolveError> {
    if eps <= &BigRational::zero() {
        return Err(SolveError::NonPositiveTolerance);
    }
    let one = BigRational::one();
    let radius = spec.majorant().radius;
    let mut prober = Prober::new(spec, config);

    let mut upper = if spec.radius_tail_bound(prober.order).is_some() {
        // the series converges at the radius: either a(rho) >= 1 or a < 1 throughout
        loop {
            let partial = prober.coeffs.eval_lower(&radius);
            if partial >= one {
                break prober.witness(&radius, partial);
            }
            let sup = partial + spec.radius_tail_bound(prober.order).expect("checked above");
            if sup < one {
                return Ok(RootBracket::NoRootBelowRadius {
                    radius,
                    sup,
                    order: prober.order,
                });
            }
            if !prober.refine() {
                return Err(SolveError::Uncertifiable {
                    q: radius.clone(),
                    max_order: prober.max_order,
                    width: radius,
                });
            }
        }
    } else {
        let start = &radius * (&one - BigRational::new(BigInt::one(), BigInt::one() << 20u32));
        match prober.certify(&start) {
            Some(Certificate::AtLeastOne(v)) => prober.witness(&start, v),
            Some(Certificate::BelowOne(_)) => return Err(SolveError::RootNearRadius(start)),
            None => {
                return Err(SolveError::Uncertifiable {
                    q: start.clone(),
                    max_order: prober.max_order,
                    width: start,
                })
            }
        }
    };
    // a_0 = 0, so a(0) = 0 exactly
    let mut lower = Witness {
        point: BigRational::zero(),
        order: 0,
        value: BigRational::zero(),
    };

    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    while &upper.point - &lower.point > *eps {
        let width = &upper.point - &lower.point;
        // midpoint first; off-center probes only if it cannot be resolved
        let probes = [
            half.clone(),
            BigRational::new(3.into(), 8.into()),
            BigRational::new(5.into(), 8.into()),
        ];
        let mut resolved = false;
        for fraction in &probes {
            let q = &lower.point + &width * fraction;
            match prober.certify(&q) {
                Some(Certificate::AtLeastOne(v)) => upper = prober.witness(&q, v),
                Some(Certificate::BelowOne(v)) => lower = prober.witness(&q, v),
                None => continue,
            }
            resolved = true;
            break;
        }
        if !resolved {
            return Err(SolveError::Uncertifiable {
                q: &lower.point + &width * &half,
                max_order: prober.max_order,
                width,
            });
        }
    }
    Ok(RootBracket::Bracketed { lower, upper })
}

/// `[1/hi, 1/lo]` for a bracket `[lo, hi]` with `0 < lo <= hi`.
pub fn beta_interval(
    lo: &BigRational,
    hi: &BigRational,
) -> Result<(BigRational, BigRational), SolveError> {
    if lo.is_zero() {
        return Err(SolveError::UnboundedBeta);
    }
    Ok((hi.recip(), lo.recip()))
}

pub fn beta_bracket(bracket: &RootBracket) -> Result<(BigRational, BigRational), SolveError> {
    match bracket {
        RootBracket::Bracketed { lower, upper } => beta_interval(&lower.point, &upper.point),
        RootBracket::NoRootBelowRadius { radius, .. } => Err(SolveError::NoRoot(radius.recip())),
    }
}

/// Recomputes every certificate stored in `bracket` from the spec alone.
pub fn verify(spec: &MultisetSpec, bracket: &RootBracket) -> Result<(), VerifyError> {
    let one = BigRational::one();
    match bracket {
        RootBracket::Bracketed { lower, upper } => {
            if lower.point > upper.point || lower.point < BigRational::zero() {
                return Err(VerifyError::Unordered);
            }
            let coeffs = spec.coefficients(lower.order);
            let bound =
                coeffs.eval_lower(&lower.point) + spec.tail_bound(&lower.point, lower.order)?;
            if bound != lower.value {
                return Err(VerifyError::WitnessMismatch(lower.point.clone()));
            }
            if bound >= one {
                return Err(VerifyError::LowerNotBelowOne {
                    q: lower.point.clone(),
                    value: bound,
                });
            }
            let partial = spec.coefficients(upper.order).eval_lower(&upper.point);
            if partial != upper.value {
                return Err(VerifyError::WitnessMismatch(upper.point.clone()));
            }
            if partial < one {
                return Err(VerifyError::UpperNotAboveOne {
                    q: upper.point.clone(),
                    value: partial,
                });
            }
            Ok(())
        }
        RootBracket::NoRootBelowRadius { radius, sup, order } => {
            if radius != &spec.majorant().radius {
                return Err(VerifyError::WitnessMismatch(radius.clone()));
            }
            let tail = spec
                .radius_tail_bound(*order)
                .ok_or_else(|| VerifyError::WitnessMismatch(radius.clone()))?;
            let bound = spec.coefficients(*order).eval_lower(radius) + tail;
            if &bound != sup {
                return Err(VerifyError::WitnessMismatch(radius.clone()));
            }
            if bound >= one {
                return Err(VerifyError::SupremumNotBelowOne(bound));
            }
            Ok(())
        }
    }
}

/// Gcd of all indices `n <= order` with `b_n != 0`.
pub fn count_support_gcd(counts: &[BigUint]) -> u64 {
    counts
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, b)| !b.is_zero())
        .fold(0u64, |g, (n, _)| g.gcd(&(n as u64)))
}
