//! Abstraction operators and when a relation has one.
//!
//! An operator sends every concept over `[n]` to an object in `[n]`; it
//! realizes `E` when `∂X = ∂Y ⇔ E(X, Y)`. Such an operator exists exactly
//! when `E` has at most `n` classes.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::classify::classify_slice;
use crate::error::{LabError, Result};
use crate::partition::Labels;
use crate::relation::{expl_size, top_size, Catalog, InvariantRelation};
use crate::universe::{Concept, Universe};

/// A total map from concepts (indexed by bits) to objects.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AbstractionOperator {
    n: u8,
    map: Vec<u8>,
}

impl AbstractionOperator {
    pub fn new(n: usize, map: Vec<usize>) -> Result<Self> {
        let u = Universe::new(n)?;
        if map.len() != u.concept_count() {
            return Err(LabError::Precondition(format!("operator needs {} values, got {}", u.concept_count(), map.len())));
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= n) {
            return Err(LabError::ElementOutOfRange { element: bad, n });
        }
        Ok(AbstractionOperator { n: n as u8, map: map.into_iter().map(|v| v as u8).collect() })
    }

    pub fn universe(&self) -> Universe {
        Universe::new(self.n as usize).expect("checked at construction")
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn apply(&self, x: Concept) -> usize {
        self.map[x.bits() as usize] as usize
    }

    #[inline]
    pub(crate) fn apply_bits(&self, bits: u32) -> usize {
        self.map[bits as usize] as usize
    }

    pub fn values(&self) -> impl Iterator<Item = usize> + '_ {
        self.map.iter().map(|&v| v as usize)
    }

    /// `rng ∂` as a concept.
    pub fn range(&self) -> Concept {
        let bits = self.map.iter().fold(0u32, |acc, &v| acc | 1 << v);
        self.universe().from_bits(bits).expect("values are in range")
    }

    pub fn kernel_labels(&self) -> Labels {
        Labels::canonical(&self.map.iter().map(|&v| v as u32).collect::<Vec<_>>())
    }

    pub fn has_kernel(&self, e: &InvariantRelation) -> bool {
        e.n() == self.n() && self.kernel_labels() == e.labels()
    }

    /// Comma-separated values in concept-bit order.
    pub fn to_canonical_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for AbstractionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for AbstractionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbstractionOperator(n={}, [{self}])", self.n)
    }
}

impl Serialize for AbstractionOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn class_count(e: &InvariantRelation) -> usize {
    e.class_count()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SatReport {
    pub n: usize,
    pub class_count: usize,
    pub satisfiable: bool,
    pub witness: Option<AbstractionOperator>,
}

/// Operator sending each concept to the index of its class, classes numbered
/// by their least member.
fn indexing_operator(e: &InvariantRelation) -> (usize, Option<AbstractionOperator>) {
    let labels = e.labels();
    let witness = (labels.classes <= e.n()).then(|| AbstractionOperator {
        n: e.n() as u8,
        map: labels.labels.iter().map(|&l| l as u8).collect(),
    });
    (labels.classes, witness)
}

pub fn satisfiable(e: &InvariantRelation) -> SatReport {
    let (class_count, witness) = indexing_operator(e);
    SatReport { n: e.n(), class_count, satisfiable: witness.is_some(), witness }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RestrictMode {
    /// The `k`-slice alone.
    Eq,
    /// Every concept of size at most `k`.
    Le,
}

impl std::str::FromStr for RestrictMode {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eq" | "=" => Ok(RestrictMode::Eq),
            "le" | "<=" => Ok(RestrictMode::Le),
            other => Err(LabError::Precondition(format!("mode must be eq or le, got {other:?}"))),
        }
    }
}

impl fmt::Display for RestrictMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RestrictMode::Eq => "eq",
            RestrictMode::Le => "le",
        })
    }
}

impl RestrictMode {
    pub fn contains(self, k: usize, size: usize) -> bool {
        match self {
            RestrictMode::Eq => size == k,
            RestrictMode::Le => size <= k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictedReport {
    pub n: usize,
    pub k: usize,
    pub mode: RestrictMode,
    /// Classes of `E` met by the restricted region.
    pub region_classes: usize,
    /// Whether concepts outside the region need a class of their own.
    pub extra_class: bool,
    /// Fewest classes of any invariant relation agreeing with `E` on the region.
    pub min_classes: usize,
    pub satisfiable: bool,
    /// The minimal extension, as canonical text.
    #[serde(skip)]
    pub extension: Option<InvariantRelation>,
    pub witness: Option<AbstractionOperator>,
}

/// Is there an invariant equivalence relation with at most `n` classes that
/// agrees with `E` on the restricted region?
///
/// The region's classes are forced. Everything outside can always be lumped
/// into one extra class; it can instead join a region class only if that
/// class is closed under all permutations, since `∅` (or another fixed
/// concept) outside the region would have to. In `le` mode `∅` lies inside
/// and its class is closed, so no extra class is needed. In `eq` mode the only
/// closed class a slice can contain is the whole slice.
pub fn restricted_satisfiable(e: &InvariantRelation, k: usize, mode: RestrictMode) -> Result<RestrictedReport> {
    let n = e.n();
    if k > n {
        return Err(LabError::SliceOutOfRange { k, n });
    }
    let u = e.universe();
    let labels = e.labels();
    let in_region = |x: usize| mode.contains(k, (x as u32).count_ones() as usize);
    let outside_empty = (0..u.concept_count()).all(in_region);
    let absorber: Option<u32> = match mode {
        RestrictMode::Le => Some(labels.labels[0]),
        RestrictMode::Eq => classify_slice(e, k)?.trivial.then(|| labels.labels[u.initial_segment(k).bits() as usize]),
    };
    let junk = u32::MAX;
    let raw: Vec<u32> = (0..u.concept_count())
        .map(|x| if in_region(x) { labels.labels[x] } else { absorber.unwrap_or(junk) })
        .collect();
    let canon = Labels::canonical(&raw);
    let region_classes = canon.classes - usize::from(absorber.is_none() && !outside_empty);
    let extension = InvariantRelation::from_partition(u, &canon.labels)?;
    let (min_classes, witness) = indexing_operator(&extension);
    debug_assert_eq!(min_classes, canon.classes);
    Ok(RestrictedReport {
        n,
        k,
        mode,
        region_classes,
        extra_class: min_classes > region_classes,
        min_classes,
        satisfiable: witness.is_some(),
        extension: Some(extension),
        witness,
    })
}

/// The class-counting consequence of the complementation theorem at the
/// middle slice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BcReport {
    pub n: usize,
    /// `n` even and `n/2 > 2`.
    pub applicable: bool,
    pub middle_nontrivial: bool,
    pub class_count: usize,
    /// Vacuous, or nontrivial with more than `n` classes.
    pub confirmed: bool,
}

pub fn check_thm_bc(e: &InvariantRelation) -> BcReport {
    let n = e.n();
    let class_count = e.class_count();
    let applicable = n % 2 == 0 && n / 2 > 2;
    let middle_nontrivial = applicable && !classify_slice(e, n / 2).expect("k ≤ n").trivial;
    BcReport { n, applicable, middle_nontrivial, class_count, confirmed: !middle_nontrivial || class_count > n }
}

/// Whether `E(fX, fY) → E(X, Y)` singles out the permutations among
/// self-maps `f` of `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndicatorReport {
    pub n: usize,
    pub maps_checked: usize,
    pub exhaustive: bool,
    pub indicator: bool,
    /// A non-permutation `f` with `E(fX, fY) → E(X, Y)` for all `X, Y`.
    pub counterexample: Option<Vec<usize>>,
    /// For the first map checked: a refuting pair, if it has one.
    pub first_refutation: Option<(Vec<usize>, Concept, Concept)>,
}

/// A refuting pair `(X, Y)`: `E(fX, fY)` but not `E(X, Y)`.
pub fn refuting_pair(e: &InvariantRelation, f: &[usize]) -> Option<(Concept, Concept)> {
    let u = e.universe();
    let count = u.concept_count() as u32;
    let image: Vec<u32> =
        (0..count).map(|x| (0..u.size()).filter(|&i| x >> i & 1 == 1).fold(0u32, |acc, i| acc | 1 << f[i])).collect();
    for x in 0..count {
        for y in x + 1..count {
            if e.holds_bits(image[x as usize], image[y as usize]) && !e.holds_bits(x, y) {
                let c = |b| u.from_bits(b).expect("in range");
                return Some((c(x), c(y)));
            }
        }
    }
    None
}

fn is_permutation(f: &[usize]) -> bool {
    let mut seen = 0u32;
    f.iter().all(|&v| {
        let fresh = seen & 1 << v == 0;
        seen |= 1 << v;
        fresh
    })
}

fn map_from_index(n: usize, mut idx: usize) -> Vec<usize> {
    let mut f = vec![0; n];
    for slot in f.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    f
}

/// Scans every non-permutation self-map when `n^n ≤ budget`, otherwise
/// `budget` pseudo-random ones.
pub fn indicator_check(e: &InvariantRelation, budget: usize) -> IndicatorReport {
    let n = e.n();
    let total = n.checked_pow(n as u32).unwrap_or(usize::MAX);
    let exhaustive = total <= budget;
    let maps: Vec<Vec<usize>> = if exhaustive {
        (0..total).map(|i| map_from_index(n, i)).filter(|f| !is_permutation(f)).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut out = Vec::with_capacity(budget);
        while out.len() < budget {
            let f: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            if !is_permutation(&f) {
                out.push(f);
            }
        }
        out
    };
    let counterexample = maps.par_iter().find_first(|f| refuting_pair(e, f).is_none()).cloned();
    let first_refutation = maps.first().and_then(|f| refuting_pair(e, f).map(|(x, y)| (f.clone(), x, y)));
    IndicatorReport { n, maps_checked: maps.len(), exhaustive, indicator: counterexample.is_none(), counterexample, first_refutation }
}

/// `2^|X| > n`.
pub fn expl(x: Concept) -> bool {
    expl_size(x.len(), x.universe().size())
}

/// `X` and `M − X` both exponentially large.
pub fn top(x: Concept) -> bool {
    top_size(x.len(), x.universe().size())
}

/// TOP concepts related by size, everything else only to itself.
pub fn basal(n: usize) -> Result<InvariantRelation> {
    Catalog::E0.relation(n)
}

pub fn top_slices(n: usize) -> Vec<usize> {
    (0..=n).filter(|&k| top_size(k, n)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopReport {
    pub n: usize,
    pub satisfiable: bool,
    pub top_slices: Vec<usize>,
    /// TOP slices that are not trivial although `E` is satisfiable.
    pub exceptions: Vec<usize>,
}

impl TopReport {
    pub fn passed(&self) -> bool {
        self.exceptions.is_empty()
    }
}

pub fn check_top_triviality(e: &InvariantRelation) -> TopReport {
    let n = e.n();
    let satisfiable = e.class_count() <= n;
    let top_slices = top_slices(n);
    let exceptions = if satisfiable {
        top_slices.iter().copied().filter(|&k| !classify_slice(e, k).expect("k ≤ n").trivial).collect()
    } else {
        Vec::new()
    };
    TopReport { n, satisfiable, top_slices, exceptions }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinerReport {
    pub n: usize,
    pub relations: usize,
    pub satisfiable: usize,
    /// No TOP slice at this `n`, so the basal relation is the identity and
    /// the check cannot fail.
    pub basal_is_identity: bool,
    /// Canonical text of satisfiable relations that basal does not refine.
    pub violations: Vec<String>,
}

impl FinerReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Basal refines every satisfiable relation among `relations` (all over the
/// same `n`).
pub fn finer_than_all(n: usize, relations: &[InvariantRelation]) -> Result<FinerReport> {
    let b = basal(n)?;
    let basal_is_identity = b == Catalog::Blv.relation(n)?;
    let checked: Vec<(bool, bool)> = relations
        .par_iter()
        .map(|e| {
            let sat = e.class_count() <= n;
            Ok((sat, !sat || b.refines(e)?))
        })
        .collect::<Result<_>>()?;
    let violations = relations.iter().zip(&checked).filter(|(_, c)| !c.1).map(|(e, _)| e.to_canonical_text()).collect();
    Ok(FinerReport {
        n,
        relations: relations.len(),
        satisfiable: checked.iter().filter(|c| c.0).count(),
        basal_is_identity,
        violations,
    })
}

/// Exhaustive for `n ≤ 4`, otherwise over `sample(n, seed, samples)`.
pub fn finer_than_all_satisfiable(n: usize, seed: u64, samples: usize) -> Result<FinerReport> {
    let relations = if n <= crate::relation::ENUMERATE_CAP {
        crate::relation::enumerate_all(n)?
    } else {
        crate::relation::sample(n, seed, samples)?.into_iter().map(|s| s.relation).collect()
    };
    finer_than_all(n, &relations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{catalog, enumerate_all};

    #[test]
    fn class_count_examples() {
        for n in 1..=6 {
            assert_eq!(class_count(&catalog("TOTAL", n).unwrap()), 1);
        }
        assert_eq!(class_count(&catalog("HP", 4).unwrap()), 5);
        assert_eq!(class_count(&catalog("LCP", 4).unwrap()), 8);
    }

    #[test]
    fn satisfiable_examples() {
        for n in 1..=8 {
            assert!(!satisfiable(&catalog("HP", n).unwrap()).satisfiable);
            assert!(!satisfiable(&catalog("BP", n).unwrap()).satisfiable);
            assert!(satisfiable(&catalog("NP", n).unwrap()).satisfiable);
            assert_eq!(satisfiable(&catalog("LCP", n).unwrap()).satisfiable, n <= 2);
        }
        let r = satisfiable(&catalog("CP", 4).unwrap());
        assert_eq!(r.class_count, 4);
        let w = r.witness.unwrap();
        assert!(w.has_kernel(&catalog("CP", 4).unwrap()));
        assert_eq!(w.to_canonical_text(), "0,0,0,1,0,2,3,0,0,3,2,0,1,0,0,0");
    }

    #[test]
    fn witness_kernel_is_exact_pairwise() {
        for n in 1..=4 {
            for e in enumerate_all(n).unwrap() {
                let r = satisfiable(&e);
                assert_eq!(r.satisfiable, r.class_count <= n);
                if let Some(w) = r.witness {
                    let u = e.universe();
                    for x in u.concepts() {
                        for y in u.concepts() {
                            assert_eq!(w.apply(x) == w.apply(y), e.holds(x, y).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn restricted_examples() {
        let r = restricted_satisfiable(&catalog("BLV", 3).unwrap(), 1, RestrictMode::Eq).unwrap();
        assert!(!r.satisfiable);
        let r = restricted_satisfiable(&catalog("LCP", 4).unwrap(), 2, RestrictMode::Eq).unwrap();
        assert!(r.satisfiable);
        assert_eq!(r.extension.as_ref().unwrap(), &catalog("CP", 4).unwrap());
        assert_eq!(r.min_classes, 4);
        let r = restricted_satisfiable(&catalog("LCP", 6).unwrap(), 3, RestrictMode::Eq).unwrap();
        assert_eq!((r.region_classes, r.min_classes, r.satisfiable), (10, 11, false));
        for n in 2..=6 {
            for k in 1..n {
                let r = restricted_satisfiable(&catalog("BLV", n).unwrap(), k, RestrictMode::Eq).unwrap();
                assert!(!r.satisfiable, "BLV n={n} k={k}");
            }
        }
        assert!(restricted_satisfiable(&catalog("BLV", 3).unwrap(), 4, RestrictMode::Eq).is_err());
        assert!("lt".parse::<RestrictMode>().is_err());
    }

    /// Brute force over every invariant relation: does one agree with `E` on
    /// the region and have at most `n` classes?
    #[test]
    fn restricted_matches_enumeration_oracle() {
        for n in 1..=4 {
            let all = enumerate_all(n).unwrap();
            let counts: Vec<usize> = all.iter().map(|e| e.class_count()).collect();
            for e in &all {
                for k in 0..=n {
                    for mode in [RestrictMode::Eq, RestrictMode::Le] {
                        let region: Vec<Concept> =
                            e.universe().concepts().filter(|c| mode.contains(k, c.len())).collect();
                        let agrees = |f: &InvariantRelation| {
                            region.iter().all(|&x| region.iter().all(|&y| f.holds(x, y).unwrap() == e.holds(x, y).unwrap()))
                        };
                        let best = all.iter().zip(&counts).filter(|(f, _)| agrees(f)).map(|(_, &c)| c).min().unwrap();
                        let r = restricted_satisfiable(e, k, mode).unwrap();
                        assert_eq!(r.min_classes, best, "n={n} k={k} {mode} {}", e.to_canonical_text());
                        assert_eq!(r.satisfiable, best <= n);
                    }
                }
            }
        }
    }

    #[test]
    fn thm_bc_examples() {
        let r = check_thm_bc(&catalog("LCP", 6).unwrap());
        assert!(r.middle_nontrivial && r.confirmed);
        assert_eq!(r.class_count, 32);
        let r = check_thm_bc(&catalog("CP", 6).unwrap());
        assert!(r.middle_nontrivial && r.confirmed);
        assert_eq!(r.class_count, 11);
        let r = check_thm_bc(&catalog("TOTAL", 6).unwrap());
        assert!(!r.middle_nontrivial && r.confirmed);
        assert!(!check_thm_bc(&catalog("LCP", 4).unwrap()).applicable);
    }

    #[test]
    fn indicator_examples() {
        let bp = catalog("BP", 3).unwrap();
        let u = Universe::new(3).unwrap();
        let (x, y) = (u.concept(&[0, 1]).unwrap(), u.concept(&[0]).unwrap());
        assert!(bp.holds(u.concept(&[0]).unwrap(), u.concept(&[0]).unwrap()).unwrap());
        assert!(!bp.holds(x, y).unwrap());
        for n in 2..=5 {
            let r = indicator_check(&catalog("BP", n).unwrap(), 10_000);
            assert!(r.exhaustive && r.indicator, "BP at {n}");
            assert_eq!(r.maps_checked, n.pow(n as u32) - (1..=n).product::<usize>());
            let r = indicator_check(&catalog("TOTAL", n).unwrap(), 10_000);
            assert!(!r.indicator);
        }
        assert!(indicator_check(&catalog("BLV", 3).unwrap(), 100).indicator);
        let r = indicator_check(&catalog("BLV", 6).unwrap(), 50);
        assert!(!r.exhaustive && r.maps_checked == 50 && r.indicator);
    }

    #[test]
    fn top_and_basal() {
        let u6 = Universe::new(6).unwrap();
        assert!(top(u6.concept(&[0, 1, 2]).unwrap()));
        assert!(expl(u6.concept(&[0, 1, 2]).unwrap()) && !expl(u6.concept(&[0, 1]).unwrap()));
        let u4 = Universe::new(4).unwrap();
        assert!(u4.concepts().all(|x| !top(x)));
        assert_eq!(class_count(&basal(6).unwrap()), 45);
        assert_eq!(basal(4).unwrap(), catalog("BLV", 4).unwrap());
        assert_eq!(top_slices(7), vec![3, 4]);
    }

    #[test]
    fn top_triviality_examples() {
        assert!(check_top_triviality(&catalog("TOTAL", 7).unwrap()).passed());
        let r = check_top_triviality(&basal(6).unwrap());
        assert!(!r.satisfiable && r.passed());
    }

    #[test]
    fn finer_examples() {
        let r = finer_than_all_satisfiable(4, 0, 0).unwrap();
        assert!(r.passed() && r.basal_is_identity);
        let r = finer_than_all_satisfiable(1, 0, 0).unwrap();
        assert_eq!(r.relations, 2);
        let r = finer_than_all_satisfiable(6, 1, 300).unwrap();
        assert!(r.passed() && !r.basal_is_identity);
    }

    #[test]
    fn union_beats_product_only_when_small() {
        // disjoint X, Y with |X| > 2, |Y| ≥ 2: |X ∪ Y| < |X|·|Y|
        for x in 3..=16 {
            for y in 2..=16 {
                assert!(x + y < x * y);
            }
        }
    }
}
