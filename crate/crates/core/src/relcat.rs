//! Relative categoricity: do any two operators realizing `E` induce
//! isomorphic models?
//!
//! The model induced by `∂` has carrier `rng ∂` and interprets `∂` on the
//! subsets of the carrier. An isomorphism is a bijection `Γ` of carriers with
//! `Γ(∂₁X) = ∂₂(ΓX)` for every subset `X` of the first carrier.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::classify_slice;
use crate::error::{LabError, Result};
use crate::relation::InvariantRelation;
use crate::sat::AbstractionOperator;
use crate::universe::Concept;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedModel {
    pub carrier: Concept,
    /// Carrier elements in increasing order.
    #[serde(skip)]
    elems: Vec<u8>,
    /// For each subset `s` of the carrier (bits over `elems`), the position
    /// in `elems` of `∂` of that subset.
    #[serde(skip)]
    local: Vec<u8>,
}

impl InducedModel {
    pub fn size(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.elems.iter().map(|&e| e as usize)
    }

    fn to_global(&self, s: u32) -> u32 {
        (0..self.elems.len()).filter(|&i| s >> i & 1 == 1).fold(0, |acc, i| acc | 1 << self.elems[i])
    }

    /// Per element: how many carrier subsets of each size it abstracts.
    fn fingerprints(&self) -> Vec<Vec<u32>> {
        let m = self.size();
        let mut fp = vec![vec![0u32; m + 1]; m];
        for (s, &v) in self.local.iter().enumerate() {
            fp[v as usize][(s as u32).count_ones() as usize] += 1;
        }
        fp
    }
}

pub fn induced_model(op: &AbstractionOperator) -> InducedModel {
    let carrier = op.range();
    let elems: Vec<u8> = carrier.elements().map(|e| e as u8).collect();
    let mut pos = [u8::MAX; 16];
    for (i, &e) in elems.iter().enumerate() {
        pos[e as usize] = i as u8;
    }
    let mut model = InducedModel { carrier, elems, local: Vec::new() };
    model.local = (0..1u32 << model.size()).map(|s| pos[op.apply_bits(model.to_global(s))]).collect();
    model
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoWitness {
    /// `(x, Γx)` for each carrier element.
    pub gamma: Vec<(usize, usize)>,
}

fn check_local(m1: &InducedModel, m2: &InducedModel, g: &[u8]) -> Option<u32> {
    (0..m1.local.len() as u32).find(|&s| {
        let image = (0..g.len()).filter(|&i| s >> i & 1 == 1).fold(0usize, |acc, i| acc | 1 << g[i]);
        g[m1.local[s as usize] as usize] != m2.local[image]
    })
}

fn witness(m1: &InducedModel, m2: &InducedModel, g: &[u8]) -> IsoWitness {
    IsoWitness { gamma: m1.elements().zip(g.iter().map(|&j| m2.elems[j as usize] as usize)).collect() }
}

/// First isomorphism in lexicographic order of `Γ`, trying only bijections
/// that match elements with equal fingerprints.
pub fn find_isomorphism(m1: &InducedModel, m2: &InducedModel) -> Option<IsoWitness> {
    let m = m1.size();
    if m != m2.size() {
        return None;
    }
    let (f1, f2) = (m1.fingerprints(), m2.fingerprints());
    let mut s1 = f1.clone();
    let mut s2 = f2.clone();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return None;
    }
    fn search(i: usize, g: &mut Vec<u8>, used: u32, f1: &[Vec<u32>], f2: &[Vec<u32>], m1: &InducedModel, m2: &InducedModel) -> bool {
        if i == f1.len() {
            return check_local(m1, m2, g).is_none();
        }
        for j in 0..f2.len() {
            if used & 1 << j == 0 && f1[i] == f2[j] {
                g.push(j as u8);
                if search(i + 1, g, used | 1 << j, f1, f2, m1, m2) {
                    return true;
                }
                g.pop();
            }
        }
        false
    }
    let mut g = Vec::with_capacity(m);
    search(0, &mut g, 0, &f1, &f2, m1, m2).then(|| witness(m1, m2, &g))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NaturalVerdict {
    /// `Γ(∂₁X) = ∂₂X`.
    pub gamma: Vec<(usize, usize)>,
    pub isomorphism: bool,
    /// A carrier subset where `Γ(∂₁X) ≠ ∂₂(ΓX)`.
    pub failure: Option<Concept>,
}

/// The bijection `Γ(∂₁X) = ∂₂X`, and whether it is an isomorphism.
pub fn natural_bijection_check(e: &InvariantRelation, op1: &AbstractionOperator, op2: &AbstractionOperator) -> Result<NaturalVerdict> {
    for op in [op1, op2] {
        if !op.has_kernel(e) {
            return Err(LabError::Precondition(format!("operator {op} does not have kernel E")));
        }
    }
    let u = e.universe();
    let mut gamma = [u8::MAX; 16];
    for x in u.concepts() {
        gamma[op1.apply(x)] = op2.apply(x) as u8;
    }
    let m1 = induced_model(op1);
    let pairs: Vec<(usize, usize)> = m1.elements().map(|a| (a, gamma[a] as usize)).collect();
    let failure = (0..1u32 << m1.size()).map(|s| m1.to_global(s)).find(|&x| {
        let image = (0..16).filter(|&i| x >> i & 1 == 1).fold(0u32, |acc, i| acc | 1 << gamma[i]);
        gamma[op1.apply_bits(x)] as usize != op2.apply_bits(image)
    });
    Ok(NaturalVerdict {
        gamma: pairs,
        isomorphism: failure.is_none(),
        failure: failure.map(|b| u.from_bits(b).expect("in range")),
    })
}

/// Equinumerous concepts no larger than the number of abstracts are related.
pub fn ccoa(e: &InvariantRelation) -> bool {
    let bound = e.class_count().min(e.n());
    (0..=bound).all(|k| classify_slice(e, k).expect("k ≤ n").trivial)
}

/// Every bicardinally equivalent pair is related; at finite `n`, every slice
/// is trivial.
pub fn bicard_ccoa(e: &InvariantRelation) -> bool {
    (0..=e.n()).all(|k| classify_slice(e, k).expect("k ≤ n").trivial)
}

/// Operators realizing `E`, one per injection of the classes into `[n]`.
pub fn operator_count(classes: usize, n: usize) -> usize {
    (n + 1 - classes.min(n + 1)..=n).product::<usize>().max(1) * usize::from(classes <= n)
}

fn injection(n: usize, classes: usize, mut idx: usize) -> Vec<u8> {
    // idx in mixed radix n, n−1, …
    let mut free: Vec<u8> = (0..n as u8).collect();
    let mut out = Vec::with_capacity(classes);
    let mut radix: usize = (n + 1 - classes..=n).product();
    for i in 0..classes {
        radix /= n - i;
        let pick = idx / radix;
        idx %= radix;
        out.push(free.remove(pick));
    }
    out
}

fn operator_from(labels: &[u32], n: usize, inj: &[u8]) -> AbstractionOperator {
    AbstractionOperator::new(n, labels.iter().map(|&l| inj[l as usize] as usize).collect()).expect("injection into [n]")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    pub op1: AbstractionOperator,
    pub op2: AbstractionOperator,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelcatReport {
    pub n: usize,
    pub class_count: usize,
    pub satisfiable: bool,
    pub exhaustive: bool,
    pub pairs_checked: usize,
    /// `Some(true)`: all pairs isomorphic, exhaustively. `Some(false)`: a
    /// non-isomorphic pair was found. `None`: sampled pairs were all
    /// isomorphic, which proves nothing.
    pub rc: Option<bool>,
    pub ccoa: bool,
    pub bicard_ccoa: bool,
    /// Pairs where the natural bijection is an isomorphism.
    pub natural_isomorphisms: usize,
    /// `ccoa` implies the natural bijection works for every checked pair.
    pub natural_consistent: bool,
    /// Pairs of onto operators (only when there are `n` classes).
    pub surjective_pairs: usize,
    pub surjective_all_isomorphic: Option<bool>,
    pub counterexample: Option<PairWitness>,
    /// `rc` agrees with `ccoa`; `None` when `rc` is undecided.
    pub agrees: Option<bool>,
    /// Surjective-pair verdict agrees with `bicard_ccoa`.
    pub surjective_agrees: Option<bool>,
}

impl RelcatReport {
    /// A definite disagreement with either biconditional.
    pub fn falsified(&self) -> bool {
        self.agrees == Some(false) || self.surjective_agrees == Some(false) || !self.natural_consistent
    }
}

pub const RELCAT_EXHAUSTIVE_N: usize = 4;

/// All operator pairs when `n ≤ 4` (then at most `24² = 576`), otherwise
/// `budget` pseudo-random pairs drawn from `seed`.
pub fn relcat_verdict(e: &InvariantRelation, budget: usize, seed: u64) -> RelcatReport {
    let n = e.n();
    let labels = e.labels();
    let c = labels.classes;
    let ccoa_v = ccoa(e);
    let bicard = bicard_ccoa(e);
    let mut report = RelcatReport {
        n,
        class_count: c,
        satisfiable: c <= n,
        exhaustive: false,
        pairs_checked: 0,
        rc: None,
        ccoa: ccoa_v,
        bicard_ccoa: bicard,
        natural_isomorphisms: 0,
        natural_consistent: true,
        surjective_pairs: 0,
        surjective_all_isomorphic: None,
        counterexample: None,
        agrees: None,
        surjective_agrees: None,
    };
    if c > n {
        return report;
    }
    let ops = operator_count(c, n);
    let exhaustive = n <= RELCAT_EXHAUSTIVE_N;
    let pairs: Vec<(usize, usize)> = if exhaustive {
        (0..ops).flat_map(|i| (0..ops).map(move |j| (i, j))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..budget).map(|_| (rng.gen_range(0..ops), rng.gen_range(0..ops))).collect()
    };
    let build = |i: usize| operator_from(&labels.labels, n, &injection(n, c, i));
    let results: Vec<(bool, bool)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (o1, o2) = (build(i), build(j));
            let iso = find_isomorphism(&induced_model(&o1), &induced_model(&o2)).is_some();
            let natural = natural_bijection_check(e, &o1, &o2).expect("kernels are E").isomorphism;
            (iso, natural)
        })
        .collect();
    report.exhaustive = exhaustive;
    report.pairs_checked = pairs.len();
    report.natural_isomorphisms = results.iter().filter(|r| r.1).count();
    report.natural_consistent = !ccoa_v || report.natural_isomorphisms == results.len();
    if let Some(k) = results.iter().position(|r| !r.0) {
        let (i, j) = pairs[k];
        report.counterexample = Some(PairWitness { op1: build(i), op2: build(j) });
        report.rc = Some(false);
    } else if exhaustive {
        report.rc = Some(true);
    }
    report.agrees = report.rc.map(|rc| rc == ccoa_v);
    // every operator is onto exactly when there are n classes
    if c == n {
        report.surjective_pairs = pairs.len();
        let all_iso = results.iter().all(|r| r.0);
        report.surjective_all_isomorphic = if all_iso && !exhaustive { None } else { Some(all_iso) };
        report.surjective_agrees = report.surjective_all_isomorphic.map(|v| v == bicard);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{catalog, enumerate_all};
    use crate::sat::satisfiable;
    use crate::universe::Universe;

    fn empty_vs_rest(n: usize) -> InvariantRelation {
        crate::dsl::compile_str("x = 0 and y = 0 or x > 0 and y > 0", n).unwrap()
    }

    #[test]
    fn induced_examples() {
        let op = AbstractionOperator::new(2, vec![0; 4]).unwrap();
        let m = induced_model(&op);
        assert_eq!(m.carrier, Universe::new(2).unwrap().concept(&[0]).unwrap());
        let cp = satisfiable(&catalog("CP", 4).unwrap()).witness.unwrap();
        assert_eq!(induced_model(&cp).size(), 4);
    }

    #[test]
    fn identical_models_have_identity_witness() {
        let op = satisfiable(&catalog("CP", 4).unwrap()).witness.unwrap();
        let m = induced_model(&op);
        let w = find_isomorphism(&m, &m).unwrap();
        assert!(w.gamma.iter().all(|(a, b)| a == b));
    }

    #[test]
    fn injection_enumeration() {
        assert_eq!(operator_count(4, 4), 24);
        assert_eq!(operator_count(2, 4), 12);
        assert_eq!(operator_count(5, 4), 0);
        assert_eq!(operator_count(0, 3), 1);
        let all: Vec<_> = (0..12).map(|i| injection(4, 2, i)).collect();
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[11], vec![3, 2]);
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 12);
        assert_eq!(dedup, all);
    }

    #[test]
    fn ccoa_examples() {
        for n in 1..=5 {
            assert!(ccoa(&catalog("TOTAL", n).unwrap()));
            assert!(bicard_ccoa(&catalog("TOTAL", n).unwrap()));
            assert!(bicard_ccoa(&catalog("HP", n).unwrap()));
        }
        assert!(!ccoa(&catalog("CP", 4).unwrap()));
        assert!(!bicard_ccoa(&catalog("CP", 4).unwrap()));
        assert!(ccoa(&empty_vs_rest(4)));
    }

    #[test]
    fn natural_bijection_examples() {
        let e = catalog("TOTAL", 3).unwrap();
        let a = AbstractionOperator::new(3, vec![1; 8]).unwrap();
        let b = AbstractionOperator::new(3, vec![2; 8]).unwrap();
        assert!(natural_bijection_check(&e, &a, &b).unwrap().isomorphism);
        assert!(natural_bijection_check(&catalog("BLV", 3).unwrap(), &a, &b).is_err());
    }

    #[test]
    fn cp4_is_not_relatively_categorical() {
        let r = relcat_verdict(&catalog("CP", 4).unwrap(), 0, 0);
        assert!(r.satisfiable && r.exhaustive);
        assert_eq!(r.rc, Some(false));
        assert!(!r.ccoa);
        assert_eq!(r.agrees, Some(true));
        let w = r.counterexample.unwrap();
        assert!(find_isomorphism(&induced_model(&w.op1), &induced_model(&w.op2)).is_none());
        assert_eq!(r.surjective_agrees, Some(true));
    }

    #[test]
    fn coarsening_relations_are_relatively_categorical() {
        let r = relcat_verdict(&empty_vs_rest(4), 0, 0);
        assert_eq!((r.rc, r.ccoa, r.agrees), (Some(true), true, Some(true)));
        assert_eq!(r.natural_isomorphisms, r.pairs_checked);
        for n in 1..=5 {
            let r = relcat_verdict(&catalog("TOTAL", n).unwrap(), 50, 1);
            assert!(r.ccoa && !r.falsified());
            assert_ne!(r.rc, Some(false));
        }
    }

    #[test]
    fn biconditional_over_all_relations_up_to_four() {
        for n in 1..=4 {
            for e in enumerate_all(n).unwrap() {
                let r = relcat_verdict(&e, 0, 0);
                if !r.satisfiable {
                    continue;
                }
                assert!(!r.falsified(), "n={n} {} {r:?}", e.to_canonical_text());
            }
        }
    }
}
