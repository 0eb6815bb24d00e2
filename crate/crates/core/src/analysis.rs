//! Gap structure of coefficient supports and numerical semigroups.
//!
//! The support of `a(t)` is split into maximal blocks `[p_i, q_i]` of
//! consecutive nonzero coefficients. A series is lacunary when the gaps
//! `p_{i+1} - q_i` grow without bound and strongly lacunary when the ratios
//! `p_{i+1} / q_i` do. From a finite prefix only the trend can be observed,
//! so [`GapProfile::verdict`] never claims more than prefix consistency.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{AnalysisError, MultisetError};
use crate::multisets::{Family, MultisetSpec};
use crate::numeric::{ln_biguint, rational_to_f64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub start: u64,
    pub end: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Lacunarity {
    /// Gaps and ratios both trend upward over the observed prefix.
    StronglyLacunaryPrefix,
    /// Gaps trend upward; ratios do not.
    LacunaryPrefix,
    NotEvidenced,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapProfile {
    pub bound: u64,
    /// Nonzero indices `k_1 < k_2 < ...` up to `bound`.
    pub support: Vec<u64>,
    /// `a_{k_i}` for each support index.
    pub multiplicities: Vec<BigUint>,
    pub blocks: Vec<Block>,
    /// `p_{i+1} - q_i`.
    pub gaps: Vec<u64>,
    /// `p_{i+1} / q_i`.
    pub ratios: Vec<BigRational>,
}

pub fn gap_profile(spec: &MultisetSpec, bound: u64) -> GapProfile {
    let (support, multiplicities): (Vec<u64>, Vec<BigUint>) = match spec.family() {
        // multiplicities are never needed beyond their positivity here
        Family::Zeta { .. } if bound > 4096 => {
            let s = spec.support(bound);
            let m = vec![BigUint::one(); s.len()];
            (s, m)
        }
        _ => spec.terms(bound).into_iter().unzip(),
    };
    let mut blocks: Vec<Block> = Vec::new();
    for &k in &support {
        match blocks.last_mut() {
            Some(b) if b.end + 1 == k => b.end = k,
            _ => blocks.push(Block { start: k, end: k }),
        }
    }
    let gaps = blocks.windows(2).map(|w| w[1].start - w[0].end).collect();
    let ratios = blocks
        .windows(2)
        .map(|w| BigRational::new(BigInt::from(w[1].start), BigInt::from(w[0].end)))
        .collect();
    GapProfile {
        bound,
        support,
        multiplicities,
        blocks,
        gaps,
        ratios,
    }
}

impl GapProfile {
    /// `k_{i+1} - k_i` over consecutive support points.
    pub fn support_gaps(&self) -> Vec<u64> {
        self.support.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// `k_{i+1} / k_i` over consecutive support points.
    pub fn support_ratios(&self) -> Vec<BigRational> {
        self.support
            .windows(2)
            .map(|w| BigRational::new(BigInt::from(w[1]), BigInt::from(w[0])))
            .collect()
    }

    /// Minimum of the block gaps over each trailing window of `window` gaps.
    pub fn trailing_min_gaps(&self, window: usize) -> Vec<u64> {
        trailing_min(&self.gaps, window)
    }

    /// Largest distance between consecutive support points inside `[lo, hi]`.
    pub fn max_gap_within(&self, lo: u64, hi: u64) -> Option<u64> {
        let start = self.support.partition_point(|&k| k < lo);
        let end = self.support.partition_point(|&k| k <= hi);
        self.support[start..end]
            .windows(2)
            .map(|w| w[1] - w[0])
            .max()
    }

    /// `k_{i+1} / ln(max(a_{k_1}, ..., a_{k_i}))` for `i >= 1`; `None` while
    /// every coefficient seen so far is 1, where the quotient is vacuous.
    pub fn cohn_ratios(&self) -> Vec<Option<f64>> {
        let mut running: Option<&BigUint> = None;
        let mut out = Vec::with_capacity(self.support.len().saturating_sub(1));
        for i in 0..self.support.len().saturating_sub(1) {
            let a = &self.multiplicities[i];
            if running.is_none_or(|m| a > m) {
                running = Some(a);
            }
            let max = running.expect("set above");
            out.push(match ln_biguint(max) {
                Some(ln) if ln > 0.0 => Some(self.support[i + 1] as f64 / ln),
                _ => None,
            });
        }
        out
    }

    /// True when every coefficient in the prefix is 0 or 1.
    pub fn cohn_is_vacuous(&self) -> bool {
        self.multiplicities.iter().all(|m| m.is_one())
    }

    /// Prefix-consistency verdict from the trailing-window minima of gaps and ratios.
    pub fn verdict(&self, window: usize) -> Lacunarity {
        let gaps_grow = trends_upward(
            &self
                .trailing_min_gaps(window)
                .iter()
                .map(|&g| g as f64)
                .collect::<Vec<_>>(),
        );
        if !gaps_grow {
            return Lacunarity::NotEvidenced;
        }
        let ratios: Vec<f64> = self.ratios.iter().map(rational_to_f64).collect();
        if trends_upward(&trailing_min(&ratios, window)) {
            Lacunarity::StronglyLacunaryPrefix
        } else {
            Lacunarity::LacunaryPrefix
        }
    }
}

fn trailing_min<T: PartialOrd + Copy>(values: &[T], window: usize) -> Vec<T> {
    let window = window.max(1);
    (0..values.len())
        .map(|i| {
            let from = (i + 1).saturating_sub(window);
            values[from..=i]
                .iter()
                .copied()
                .fold(values[i], |m, x| if x < m { x } else { m })
        })
        .collect()
}

// nondecreasing over the second half and strictly larger at the end than at the start
fn trends_upward(values: &[f64]) -> bool {
    if values.len() < 2 {
        return false;
    }
    let half = &values[values.len() / 2..];
    half.windows(2).all(|w| w[0] <= w[1]) && values[values.len() - 1] > values[0]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemigroupReport {
    pub generators: Vec<u64>,
    /// Largest non-representable integer; `None` when 1 is a generator.
    pub frobenius: Option<u64>,
    /// Least `n_0` with every `n >= n_0` representable.
    pub conductor: u64,
    #[serde(skip)]
    representable: Vec<bool>,
}

impl SemigroupReport {
    pub fn is_representable(&self, n: u64) -> bool {
        match self.representable.get(n as usize) {
            Some(&r) => r,
            None => true,
        }
    }
}

/// Frobenius number and conductor of the numerical semigroup generated by
/// `generators`, by dynamic programming until `min(generators)` consecutive
/// integers are representable.
pub fn conductor(generators: &[u64]) -> Result<SemigroupReport, AnalysisError> {
    if generators.is_empty() {
        return Err(AnalysisError::NoGenerators);
    }
    if generators.contains(&0) {
        return Err(AnalysisError::ZeroGenerator);
    }
    let mut gens = generators.to_vec();
    gens.sort_unstable();
    gens.dedup();
    let g = gens.iter().fold(0u64, |g, &x| g.gcd(&x));
    if g != 1 {
        return Err(AnalysisError::GcdNotOne(g));
    }
    let smallest = gens[0];
    if smallest == 1 {
        return Ok(SemigroupReport {
            generators: gens,
            frobenius: None,
            conductor: 1,
            representable: vec![true],
        });
    }
    let mut representable = vec![true];
    let mut run = 0u64;
    let mut n = 0u64;
    while run < smallest {
        n += 1;
        let r = gens
            .iter()
            .take_while(|&&x| x <= n)
            .any(|&x| representable[(n - x) as usize]);
        representable.push(r);
        run = if r { run + 1 } else { 0 };
    }
    let conductor = n + 1 - smallest;
    representable.truncate(conductor as usize);
    Ok(SemigroupReport {
        generators: gens,
        frobenius: Some(conductor - 1),
        conductor,
        representable,
    })
}

/// The semigroup generated by the support of `spec`, growing the support
/// prefix until the computed conductor lies inside it (so the report is exact).
pub fn spec_semigroup(spec: &MultisetSpec) -> Result<SemigroupReport, AnalysisError> {
    let mut bound = 64u64;
    loop {
        let gens = spec.support(bound);
        if !gens.is_empty() && gens.iter().fold(0u64, |g, &x| g.gcd(&x)) == 1 {
            let report = conductor(&gens)?;
            if report.conductor <= bound {
                return Ok(report);
            }
        }
        if bound >= 1 << 20 {
            return match spec.support_gcd(bound)? {
                1 => Err(MultisetError::EmptySupport(bound).into()),
                d => Err(AnalysisError::GcdNotOne(d)),
            };
        }
        bound *= 2;
    }
}
