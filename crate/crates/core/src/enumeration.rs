//! Explicit listing of colored compositions.
//!
//! A colored composition of `n` is an ordered list of parts `(weight, color)`
//! with weights summing to `n` and `color < a_weight`. [`CompositionStream`]
//! yields them lazily in lexicographic order of the weight sequence, then of
//! the color sequence.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::EnumerationError;
use crate::multisets::{Atom, Family, MultisetSpec};

/// Largest `n` accepted by [`count_by_enumeration`].
pub const DEFAULT_ORACLE_BOUND: u64 = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Part {
    pub weight: u64,
    pub color: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ColoredComposition {
    parts: Vec<Part>,
}

impl ColoredComposition {
    pub fn new(parts: Vec<Part>) -> Self {
        Self { parts }
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn total(&self) -> u64 {
        self.parts.iter().map(|p| p.weight).sum()
    }

    pub fn weights(&self) -> impl Iterator<Item = u64> + '_ {
        self.parts.iter().map(|p| p.weight)
    }

    pub fn colors(&self) -> impl Iterator<Item = u64> + '_ {
        self.parts.iter().map(|p| p.color)
    }

    /// Checks every color index against the multiplicities of `spec`.
    pub fn is_valid_for(&self, spec: &MultisetSpec) -> bool {
        let bound = self.parts.iter().map(|p| p.weight).max().unwrap_or(0);
        let terms = spec.terms(bound);
        self.parts.iter().all(|p| {
            terms
                .binary_search_by_key(&p.weight, |t| t.0)
                .map(|i| BigUint::from(p.color) < terms[i].1)
                .unwrap_or(false)
        })
    }
}

impl fmt::Display for ColoredComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{}.{}", p.weight, p.color)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum StreamState {
    Fresh,
    Running,
    Done,
}

/// Lazy iterator over the colored compositions of `n`.
///
/// Memory is `O(n)` regardless of how many items are produced.
#[derive(Clone, Debug)]
pub struct CompositionStream {
    n: u64,
    // support weights <= n and their multiplicities
    weights: Vec<u64>,
    multiplicity: Vec<u64>,
    // reachable[r]: r is a sum of support weights
    reachable: Vec<bool>,
    stack: Vec<usize>,
    colors: Vec<u64>,
    state: StreamState,
}

pub fn compositions(spec: &MultisetSpec, n: u64) -> Result<CompositionStream, EnumerationError> {
    let mut weights = Vec::new();
    let mut multiplicity = Vec::new();
    for (k, m) in spec.terms(n) {
        weights.push(k);
        multiplicity.push(
            m.to_u64()
                .ok_or(EnumerationError::MultiplicityTooLarge(k))?,
        );
    }
    let mut reachable = vec![false; n as usize + 1];
    reachable[0] = true;
    for r in 1..=n as usize {
        reachable[r] = weights
            .iter()
            .take_while(|&&w| w as usize <= r)
            .any(|&w| reachable[r - w as usize]);
    }
    Ok(CompositionStream {
        n,
        weights,
        multiplicity,
        reachable,
        stack: Vec::new(),
        colors: Vec::new(),
        state: StreamState::Fresh,
    })
}

impl CompositionStream {
    pub fn target(&self) -> u64 {
        self.n
    }

    /// Smallest admissible weight index `>= from` leaving a reachable remainder.
    fn first_fit(&self, from: usize, remaining: u64) -> Option<usize> {
        (from..self.weights.len())
            .take_while(|&i| self.weights[i] <= remaining)
            .find(|&i| self.reachable[(remaining - self.weights[i]) as usize])
    }

    fn fill(&mut self, mut remaining: u64) {
        while remaining > 0 {
            let i = self
                .first_fit(0, remaining)
                .expect("remaining sum is reachable");
            self.stack.push(i);
            remaining -= self.weights[i];
        }
    }

    fn advance_colors(&mut self) -> bool {
        for pos in (0..self.colors.len()).rev() {
            if self.colors[pos] + 1 < self.multiplicity[self.stack[pos]] {
                self.colors[pos] += 1;
                for c in &mut self.colors[pos + 1..] {
                    *c = 0;
                }
                return true;
            }
        }
        false
    }

    fn advance_weights(&mut self) -> bool {
        let mut remaining = 0;
        while let Some(i) = self.stack.pop() {
            remaining += self.weights[i];
            if let Some(j) = self.first_fit(i + 1, remaining) {
                self.stack.push(j);
                self.fill(remaining - self.weights[j]);
                return true;
            }
        }
        false
    }

    fn current(&self) -> ColoredComposition {
        ColoredComposition {
            parts: self
                .stack
                .iter()
                .zip(&self.colors)
                .map(|(&i, &color)| Part {
                    weight: self.weights[i],
                    color,
                })
                .collect(),
        }
    }
}

impl Iterator for CompositionStream {
    type Item = ColoredComposition;

    fn next(&mut self) -> Option<Self::Item> {
        match self.state {
            StreamState::Done => return None,
            StreamState::Fresh => {
                if !self.reachable[self.n as usize] {
                    self.state = StreamState::Done;
                    return None;
                }
                self.fill(self.n);
                self.colors = vec![0; self.stack.len()];
                self.state = StreamState::Running;
            }
            StreamState::Running => {
                if !self.advance_colors() {
                    if !self.advance_weights() {
                        self.state = StreamState::Done;
                        return None;
                    }
                    self.colors = vec![0; self.stack.len()];
                }
            }
        }
        Some(self.current())
    }
}

/// Counts colored compositions of `n` by walking every partition of `n` into
/// support weights and counting its distinct orderings, without using the
/// generating-function recurrence.
pub fn count_by_enumeration(spec: &MultisetSpec, n: u64) -> Result<BigUint, EnumerationError> {
    count_by_enumeration_bounded(spec, n, DEFAULT_ORACLE_BOUND)
}

pub fn count_by_enumeration_bounded(
    spec: &MultisetSpec,
    n: u64,
    oracle_bound: u64,
) -> Result<BigUint, EnumerationError> {
    if n > oracle_bound {
        return Err(EnumerationError::AboveOracleBound {
            n,
            bound: oracle_bound,
        });
    }
    let terms = spec.terms(n);
    let factorials: Vec<BigUint> = std::iter::once(BigUint::one())
        .chain((1..=n).scan(BigUint::one(), |f, k| {
            *f *= k;
            Some(f.clone())
        }))
        .collect();

    struct Walk<'a> {
        terms: &'a [(u64, BigUint)],
        factorials: &'a [BigUint],
        total: BigUint,
    }

    impl Walk<'_> {
        // choose how many parts of weight terms[idx] to use, largest weight first
        fn go(
            &mut self,
            idx: usize,
            remaining: u64,
            parts: usize,
            colorings: &BigUint,
            denom: &BigUint,
        ) {
            if remaining == 0 {
                self.total += &self.factorials[parts] / denom * colorings;
                return;
            }
            if idx == 0 {
                return;
            }
            let (w, a) = &self.terms[idx - 1];
            let mut colorings = colorings.clone();
            let mut denom = denom.clone();
            let mut used = 0u64;
            loop {
                self.go(
                    idx - 1,
                    remaining - used * w,
                    parts + used as usize,
                    &colorings,
                    &denom,
                );
                if (used + 1) * w > remaining {
                    break;
                }
                used += 1;
                colorings *= a;
                denom *= used;
            }
        }
    }

    let mut walk = Walk {
        terms: &terms,
        factorials: &factorials,
        total: BigUint::zero(),
    };
    walk.go(terms.len(), n, 0, &BigUint::one(), &BigUint::one());
    Ok(walk.total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Grading {
    /// Atoms weighted by the exponent of their codimension growth.
    Exponent,
    /// Atoms weighted by the GK dimension of the `d`-generated relatively free algebra.
    GkDimension { d: u64 },
}

impl Grading {
    pub fn weight(&self, atom: Atom) -> u64 {
        match (*self, atom) {
            (Grading::Exponent, Atom::MatrixK(m)) => m * m,
            (Grading::Exponent, Atom::MatrixE(m)) => 2 * m * m,
            (Grading::Exponent, Atom::Pair(a, b)) => (a + b) * (a + b),
            (Grading::GkDimension { d }, Atom::MatrixK(m) | Atom::MatrixE(m)) => {
                (d - 1) * m * m + 1
            }
            (Grading::GkDimension { d }, Atom::Pair(a, b)) => (d - 1) * (a * a + b * b) + 2,
        }
    }
}

/// An ordered product of T-prime ideals; the minimal variety it defines.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarietyDescriptor {
    pub atoms: Vec<Atom>,
    pub grading: Grading,
}

impl VarietyDescriptor {
    pub fn weights(&self) -> Vec<u64> {
        self.atoms.iter().map(|&a| self.grading.weight(a)).collect()
    }

    pub fn total_weight(&self) -> u64 {
        self.weights().iter().sum()
    }
}

impl fmt::Display for VarietyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "()");
        }
        for (i, atom) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{atom}")?;
        }
        Ok(())
    }
}

/// Maps each part `(k, c)` to the `c`-th atom of weight `k`.
pub fn to_variety(
    spec: &MultisetSpec,
    composition: &ColoredComposition,
) -> Result<VarietyDescriptor, EnumerationError> {
    let grading = match spec.family() {
        Family::FgCodim | Family::Codim => Grading::Exponent,
        Family::GkFg { d } | Family::Gk { d } => Grading::GkDimension { d: *d },
        _ => return Err(EnumerationError::NoVarietySemantics(spec.to_string())),
    };
    let atoms = composition
        .parts()
        .iter()
        .map(|p| {
            spec.atoms(p.weight)
                .and_then(|atoms| atoms.get(p.color as usize).copied())
                .ok_or(EnumerationError::InvalidPart {
                    weight: p.weight,
                    color: p.color,
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VarietyDescriptor { atoms, grading })
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::multisets::CustomMultiset;

    fn custom(terms: &[(u64, u64)]) -> MultisetSpec {
        MultisetSpec::custom(CustomMultiset::new("t", terms.to_vec()).unwrap())
    }

    fn listing(spec: &MultisetSpec, n: u64) -> Vec<String> {
        compositions(spec, n)
            .unwrap()
            .map(|c| c.to_string())
            .collect()
    }

    #[test]
    fn fibonacci_listing() {
        assert_eq!(
            listing(&custom(&[(1, 1), (2, 1)]), 3),
            vec!["1.0+1.0+1.0", "1.0+2.0", "2.0+1.0"]
        );
    }

    #[test]
    fn zero_yields_empty_composition() {
        for spec in [
            MultisetSpec::codim(),
            custom(&[(3, 2)]),
            MultisetSpec::zeta(2).unwrap(),
        ] {
            let all: Vec<_> = compositions(&spec, 0).unwrap().collect();
            assert_eq!(all, vec![ColoredComposition::default()]);
        }
    }

    #[test]
    fn unreachable_target_is_empty() {
        assert_eq!(compositions(&custom(&[(2, 1)]), 3).unwrap().count(), 0);
        assert_eq!(
            count_by_enumeration(&custom(&[(2, 1)]), 3).unwrap(),
            BigUint::zero()
        );
    }

    #[test]
    fn codim_four() {
        assert_eq!(
            listing(&MultisetSpec::codim(), 4),
            vec![
                "1.0+1.0+1.0+1.0",
                "1.0+1.0+2.0",
                "1.0+2.0+1.0",
                "2.0+1.0+1.0",
                "2.0+2.0",
                "4.0",
                "4.1"
            ]
        );
        assert_eq!(
            count_by_enumeration(&MultisetSpec::codim(), 4).unwrap(),
            BigUint::from(7u32)
        );
    }

    #[test]
    fn colors_vary_in_lexicographic_order() {
        let got = listing(&custom(&[(1, 2), (2, 2)]), 2);
        assert_eq!(
            got,
            vec!["1.0+1.0", "1.0+1.1", "1.1+1.0", "1.1+1.1", "2.0", "2.1"]
        );
    }

    #[test]
    fn order_is_weights_first() {
        // [4,1] sorts before [4,5] even with a larger color on the first part
        let spec = custom(&[(1, 1), (4, 2), (5, 1)]);
        let all: Vec<ColoredComposition> = compositions(&spec, 9).unwrap().collect();
        let keys: Vec<(Vec<u64>, Vec<u64>)> = all
            .iter()
            .map(|c| (c.weights().collect(), c.colors().collect()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(keys.iter().collect::<HashSet<_>>().len(), keys.len());
    }

    #[test]
    fn fg_codim_nine() {
        assert_eq!(
            count_by_enumeration(&MultisetSpec::fg_codim(), 9).unwrap(),
            BigUint::from(11u32)
        );
        assert_eq!(
            compositions(&MultisetSpec::fg_codim(), 9).unwrap().count(),
            11
        );
    }

    #[test]
    fn oracle_bound_is_enforced() {
        assert_eq!(
            count_by_enumeration(&MultisetSpec::codim(), 26),
            Err(EnumerationError::AboveOracleBound { n: 26, bound: 25 })
        );
        assert!(count_by_enumeration_bounded(&MultisetSpec::codim(), 30, 30).is_ok());
    }

    #[test]
    fn stream_matches_oracle_count() {
        for spec in MultisetSpec::builtins(2, 1) {
            for n in 0..=14 {
                let streamed = compositions(&spec, n).unwrap().count();
                let counted = count_by_enumeration(&spec, n).unwrap();
                assert_eq!(BigUint::from(streamed), counted, "{spec} n={n}");
            }
        }
    }

    #[test]
    fn stream_items_are_valid() {
        let spec = MultisetSpec::gk(2).unwrap();
        for c in compositions(&spec, 14).unwrap() {
            assert_eq!(c.total(), 14);
            assert!(c.is_valid_for(&spec));
        }
        let bad = ColoredComposition::new(vec![Part {
            weight: 2,
            color: 2,
        }]);
        assert!(!bad.is_valid_for(&spec));
    }

    #[test]
    fn streams_are_deterministic() {
        let a = listing(&MultisetSpec::codim(), 10);
        let b = listing(&MultisetSpec::codim(), 10);
        assert_eq!(a, b);
    }

    #[test]
    fn variety_of_weight_four() {
        let spec = MultisetSpec::codim();
        let single = |color| ColoredComposition::new(vec![Part { weight: 4, color }]);
        assert_eq!(to_variety(&spec, &single(0)).unwrap().to_string(), "M_2(K)");
        assert_eq!(
            to_variety(&spec, &single(1)).unwrap().to_string(),
            "M_{1,1}"
        );
        assert!(matches!(
            to_variety(&spec, &single(2)),
            Err(EnumerationError::InvalidPart {
                weight: 4,
                color: 2
            })
        ));
    }

    #[test]
    fn codim_four_census() {
        let spec = MultisetSpec::codim();
        let all: Vec<String> = compositions(&spec, 4)
            .unwrap()
            .map(|c| to_variety(&spec, &c).unwrap().to_string())
            .collect();
        assert_eq!(
            all,
            vec![
                "M_1(K)*M_1(K)*M_1(K)*M_1(K)",
                "M_1(K)*M_1(K)*M_1(E)",
                "M_1(K)*M_1(E)*M_1(K)",
                "M_1(E)*M_1(K)*M_1(K)",
                "M_1(E)*M_1(E)",
                "M_2(K)",
                "M_{1,1}",
            ]
        );
    }

    #[test]
    fn variety_map_is_injective_and_weight_preserving() {
        for spec in [
            MultisetSpec::codim(),
            MultisetSpec::fg_codim(),
            MultisetSpec::gk(2).unwrap(),
            MultisetSpec::gk_fg(3).unwrap(),
        ] {
            for n in 0..=12 {
                let mut seen = HashSet::new();
                let mut count = 0u64;
                for c in compositions(&spec, n).unwrap() {
                    let v = to_variety(&spec, &c).unwrap();
                    assert_eq!(v.total_weight(), n);
                    assert_eq!(v.weights(), c.weights().collect::<Vec<_>>());
                    assert!(seen.insert(v.atoms));
                    count += 1;
                }
                assert_eq!(
                    BigUint::from(count),
                    count_by_enumeration(&spec, n).unwrap()
                );
            }
        }
    }

    #[test]
    fn variety_rejects_families_without_semantics() {
        let c = ColoredComposition::new(vec![Part {
            weight: 1,
            color: 0,
        }]);
        assert!(matches!(
            to_variety(&MultisetSpec::factorial(), &c),
            Err(EnumerationError::NoVarietySemantics(_))
        ));
    }
}
