//! Polynomials in a formal infinite unit `ω` as a non-Archimedean cardinal
//! model.
//!
//! `c₀ + c₁ω + c₂ω² + …` with non-negative coefficients. Addition models
//! disjoint union, multiplication models products, and the order compares
//! from the top degree down. Unlike real infinite cardinals, `ω + ω = 2ω` is
//! strictly above `ω`, so only laws that follow from comparability survive
//! here, which makes this a stricter test bed than a cardinal model.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SymCard {
    /// Lowest degree first, no trailing zeros.
    coeffs: Vec<u128>,
}

impl SymCard {
    pub fn zero() -> Self {
        SymCard::default()
    }

    pub fn finite(k: u128) -> Self {
        SymCard::from_coeffs(vec![k])
    }

    pub fn omega() -> Self {
        SymCard::from_coeffs(vec![0, 1])
    }

    pub fn from_coeffs(mut coeffs: Vec<u128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        SymCard { coeffs }
    }

    pub fn coeffs(&self) -> &[u128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u128 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn scale(&self, k: u128) -> SymCard {
        SymCard::from_coeffs(self.coeffs.iter().map(|c| c.saturating_mul(k)).collect())
    }
}

pub fn card_add(x: &SymCard, y: &SymCard) -> SymCard {
    let len = x.coeffs.len().max(y.coeffs.len());
    let at = |v: &SymCard, i: usize| v.coeffs.get(i).copied().unwrap_or(0);
    SymCard::from_coeffs((0..len).map(|i| at(x, i).saturating_add(at(y, i))).collect())
}

pub fn card_mul(x: &SymCard, y: &SymCard) -> SymCard {
    if x.is_zero() || y.is_zero() {
        return SymCard::zero();
    }
    let mut out = vec![0u128; x.coeffs.len() + y.coeffs.len() - 1];
    for (i, a) in x.coeffs.iter().enumerate() {
        for (j, b) in y.coeffs.iter().enumerate() {
            out[i + j] = out[i + j].saturating_add(a.saturating_mul(*b));
        }
    }
    SymCard::from_coeffs(out)
}

impl Ord for SymCard {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for SymCard {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn card_le(x: &SymCard, y: &SymCard) -> bool {
    x <= y
}

/// A finite multiplier `m` with `m·y ≥ x`, if one exists.
pub fn tri_le_witness(x: &SymCard, y: &SymCard) -> Option<u128> {
    if x.is_zero() {
        return Some(0);
    }
    if y.is_zero() || x.degree() > y.degree() {
        return None;
    }
    // with equal degrees this multiplier overtakes the leading coefficient
    let m = if x.degree() < y.degree() { 1 } else { x.leading() / y.leading() + 1 };
    debug_assert!(card_le(x, &y.scale(m)));
    Some(m)
}

/// `x ⊴ y`: some finite multiple of `y` reaches `x`.
pub fn tri_le(x: &SymCard, y: &SymCard) -> bool {
    tri_le_witness(x, y).is_some()
}

/// `x ◁ y`: `x ⊴ y` and not `y ⊴ x`.
pub fn tri_lt(x: &SymCard, y: &SymCard) -> bool {
    tri_le(x, y) && !tri_le(y, x)
}

/// `n·x < y` for every finite `n`. Multipliers beyond `lead(y) + 1` add
/// nothing: past it, equal degree means `n·x > y`.
pub fn all_multiples_below(x: &SymCard, y: &SymCard) -> bool {
    let probes = [0, 1, 2, 3, y.leading().saturating_add(1), 1 << 40];
    probes.iter().all(|&n| x.scale(n) < *y)
}

impl fmt::Display for SymCard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match (deg, c) {
                (0, c) => write!(f, "{c}")?,
                (_, 1) => {}
                (_, c) => write!(f, "{c}")?,
            }
            match deg {
                0 => {}
                1 => f.write_str("ω")?,
                2 => f.write_str("ω²")?,
                3 => f.write_str("ω³")?,
                d => write!(f, "ω^{d}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SymCard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for SymCard {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Which relation the law suite treats as `⊴`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrderModel {
    /// Domination by finite multiples, the intended reading.
    Domination,
    /// The plain order `≤`. Several laws fail under it; used to check that
    /// the suite can fail.
    Plain,
}

impl OrderModel {
    pub fn le(self, x: &SymCard, y: &SymCard) -> bool {
        match self {
            OrderModel::Domination => tri_le(x, y),
            OrderModel::Plain => card_le(x, y),
        }
    }

    pub fn lt(self, x: &SymCard, y: &SymCard) -> bool {
        self.le(x, y) && !self.le(y, x)
    }
}

pub const LAW_NAMES: [&str; 16] = [
    "comparability",
    "additivity",
    "cancellation",
    "transitivity",
    "split",
    "split-corollary",
    "strict-split",
    "strict-split-corollary",
    "left-split",
    "strict-left-split",
    "expansion",
    "substitution-left",
    "substitution-right",
    "strict-substitution-left",
    "strict-substitution-right",
    "strict-iff-multiples",
];

/// Evaluate one law on a quadruple `(X, Y, Z, W)`. Returns
/// `(hypothesis, conclusion)`; the law holds when the hypothesis fails or the
/// conclusion holds. The split corollary takes `X = Y ⊔ Z` instead of the
/// sampled `X`.
pub fn eval_law(law: usize, model: OrderModel, s: &[SymCard; 4]) -> (bool, bool) {
    let [x, y, z, w] = s;
    let le = |a: &SymCard, b: &SymCard| model.le(a, b);
    let lt = |a: &SymCard, b: &SymCard| model.lt(a, b);
    let add = card_add;
    match law {
        0 => (true, le(x, y) || le(y, x)),
        1 => {
            let (z, w) = if z <= w { (z, w) } else { (w, z) };
            (le(x, y), le(&add(x, z), &add(y, w)))
        }
        2 => (z == w && lt(&add(x, z), &add(y, w)), lt(x, y)),
        3 => (le(x, y) && le(y, z), le(x, z)),
        4 => (le(x, &add(y, z)), le(x, y) || le(x, z)),
        5 => {
            let x = add(y, z);
            (true, le(&x, y) || le(&x, z))
        }
        6 => (lt(x, &add(y, z)), lt(x, y) || lt(x, z)),
        7 => (lt(x, &add(x, y)), lt(x, y)),
        8 => (le(&add(y, z), x), le(y, x) && le(z, x)),
        9 => (lt(&add(y, z), x), lt(y, x) && lt(z, x)),
        10 => (lt(x, y), lt(x, &add(y, z))),
        11 => (w == y && le(&add(x, y), z), le(&add(x, w), z)),
        12 => (w == y && le(x, &add(y, z)), le(x, &add(w, z))),
        13 => (w == y && lt(&add(x, y), z), lt(&add(x, w), z)),
        14 => (w == y && lt(x, &add(y, z)), lt(x, &add(w, z))),
        15 => {
            let lhs = match model {
                OrderModel::Domination => tri_lt(x, w),
                OrderModel::Plain => x < w,
            };
            (true, lhs == all_multiples_below(x, w))
        }
        _ => panic!("law index {law} out of range"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawResult {
    pub name: &'static str,
    pub checked: usize,
    /// Samples where the hypothesis held.
    pub nonvacuous: usize,
    pub counterexample: Option<[SymCard; 4]>,
}

impl LawResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub seed: u64,
    pub samples: usize,
    pub model: OrderModel,
    pub laws: Vec<LawResult>,
}

impl LawReport {
    pub fn passed_count(&self) -> usize {
        self.laws.iter().filter(|l| l.passed()).count()
    }

    pub fn all_passed(&self) -> bool {
        self.passed_count() == self.laws.len()
    }
}

/// Degree 0..=3 (or zero), coefficients up to 10⁶; a third of the time
/// coefficients are tiny so that ties and equal leads come up.
pub fn random_card(rng: &mut impl Rng) -> SymCard {
    let deg = rng.gen_range(0..=4usize);
    if deg == 0 {
        return SymCard::zero();
    }
    let max = if rng.gen_ratio(1, 3) { 3 } else { 1_000_000 };
    let mut coeffs: Vec<u128> = (0..deg).map(|_| rng.gen_range(0..=max)).collect();
    if coeffs[deg - 1] == 0 {
        coeffs[deg - 1] = 1;
    }
    SymCard::from_coeffs(coeffs)
}

pub fn random_samples(seed: u64, count: usize) -> Vec<[SymCard; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut s: [SymCard; 4] = std::array::from_fn(|_| random_card(&mut rng));
            // the cancellation and substitution laws need |Z| = |W| or |W| = |Y|
            match rng.gen_range(0..4) {
                0 => s[3] = s[2].clone(),
                1 => s[3] = s[1].clone(),
                _ => {}
            }
            s
        })
        .collect()
}

pub fn law_suite(sample_count: usize, seed: u64) -> LawReport {
    law_suite_with(sample_count, seed, OrderModel::Domination)
}

pub fn law_suite_with(sample_count: usize, seed: u64, model: OrderModel) -> LawReport {
    let samples = random_samples(seed, sample_count);
    let laws = (0..LAW_NAMES.len())
        .into_par_iter()
        .map(|law| {
            let mut nonvacuous = 0;
            let mut counterexample = None;
            for s in &samples {
                let (hyp, concl) = eval_law(law, model, s);
                if hyp {
                    nonvacuous += 1;
                    if !concl && counterexample.is_none() {
                        counterexample = Some(s.clone());
                    }
                }
            }
            LawResult { name: LAW_NAMES[law], checked: samples.len(), nonvacuous, counterexample }
        })
        .collect();
    LawReport { seed, samples: sample_count, model, laws }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[u128]) -> SymCard {
        SymCard::from_coeffs(v.to_vec())
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(card_add(&c(&[2, 1]), &c(&[3])), c(&[5, 1]));
        assert_eq!(card_mul(&SymCard::omega(), &SymCard::omega()), c(&[0, 0, 1]));
        assert!(card_le(&c(&[7, 2]), &c(&[0, 3])));
        assert_eq!(c(&[7, 0, 0]).degree(), Some(0));
        assert_eq!(c(&[5, 1]).to_string(), "ω+5");
        assert_eq!(c(&[0, 2, 1]).to_string(), "ω²+2ω");
    }

    #[test]
    fn domination_examples() {
        assert!(tri_le(&c(&[0, 3]), &SymCard::omega()));
        assert_eq!(tri_le_witness(&c(&[0, 3]), &SymCard::omega()), Some(4));
        assert!(tri_lt(&c(&[5]), &SymCard::omega()));
        assert!(!tri_lt(&SymCard::omega(), &c(&[1, 1])));
        assert!(tri_le(&SymCard::omega(), &c(&[1, 1])) && tri_le(&c(&[1, 1]), &SymCard::omega()));
    }

    #[test]
    fn law_examples() {
        let (w, five) = (SymCard::omega(), SymCard::finite(5));
        assert!(!tri_le(&w, &five) && tri_le(&five, &w));
        // split corollary with y = ω, z = 3
        let s = [SymCard::zero(), w.clone(), SymCard::finite(3), SymCard::zero()];
        assert_eq!(eval_law(5, OrderModel::Domination, &s), (true, true));
        // cancellation with z = w = ω, x = 1, y = ω²
        let s = [SymCard::finite(1), c(&[0, 0, 1]), w.clone(), w.clone()];
        assert_eq!(eval_law(2, OrderModel::Domination, &s), (true, true));
    }

    #[test]
    fn finite_part_matches_concept_sizes() {
        for a in 0..10u128 {
            for b in 0..10u128 {
                let (x, y) = (SymCard::finite(a), SymCard::finite(b));
                assert_eq!(tri_le(&x, &y), crate::permlab::tri_le_sizes(a as usize, b as usize));
            }
        }
    }

    #[test]
    fn suite_passes_and_plain_order_fails() {
        let r = law_suite(20_000, 0);
        assert!(r.all_passed(), "{:?}", r.laws.iter().filter(|l| !l.passed()).collect::<Vec<_>>());
        assert!(r.laws.iter().all(|l| l.nonvacuous > 0), "{:?}", r.laws);
        let bad = law_suite_with(20_000, 0, OrderModel::Plain);
        assert!(!bad.all_passed());
        assert!(!bad.laws[4].passed(), "split fails for ≤");
    }

    #[test]
    fn suite_is_deterministic() {
        assert_eq!(law_suite(2_000, 7), law_suite(2_000, 7));
    }
}
