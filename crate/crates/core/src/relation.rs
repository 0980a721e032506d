//! Permutation-invariant equivalence relations on concepts, represented by the
//! set of pair types they contain.
//!
//! `E(X, Y)` holds iff `pair_type(X, Y)` is in the set, so invariance under
//! `Sym(n)` is structural. Reflexivity and symmetry are checked on the type
//! set; transitivity is checked semantically at the given `n`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::partition::{Labels, UnionFind};
use crate::universe::{orbit_types, pair_type_unchecked, Concept, PairType, Universe};

/// A raw set of pair types over `[n]`, not necessarily an equivalence.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TypeSet {
    n: u8,
    table: Vec<bool>,
}

impl TypeSet {
    pub fn empty(u: Universe) -> Self {
        let m = u.size() + 1;
        TypeSet { n: u.size() as u8, table: vec![false; m * m * m] }
    }

    pub fn from_types<I: IntoIterator<Item = PairType>>(u: Universe, types: I) -> Result<Self> {
        let mut set = TypeSet::empty(u);
        for t in types {
            set.insert(t)?;
        }
        Ok(set)
    }

    /// All types satisfying `pred`.
    pub fn from_predicate(u: Universe, mut pred: impl FnMut(PairType) -> bool) -> Self {
        let mut set = TypeSet::empty(u);
        for t in orbit_types(u) {
            if pred(t) {
                set.table[t.index(u.size())] = true;
            }
        }
        set
    }

    pub fn universe(&self) -> Universe {
        Universe::new(self.n as usize).expect("validated at construction")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn insert(&mut self, t: PairType) -> Result<()> {
        if t.n() != self.n() {
            return Err(LabError::UniverseMismatch { left: self.n(), right: t.n() });
        }
        let i = t.index(self.n());
        self.table[i] = true;
        Ok(())
    }

    #[inline]
    pub fn contains(&self, t: PairType) -> bool {
        t.n() == self.n() && self.table[t.index(self.n())]
    }

    #[inline]
    pub(crate) fn holds_bits(&self, x: u32, y: u32) -> bool {
        let t = pair_type_unchecked(self.n(), x, y);
        self.table[t.index(self.n())]
    }

    /// Members in lexicographic order.
    pub fn types(&self) -> Vec<PairType> {
        orbit_types(self.universe()).into_iter().filter(|&t| self.contains(t)).collect()
    }

    pub fn len(&self) -> usize {
        self.table.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &TypeSet) -> bool {
        self.n == other.n && self.table.iter().zip(&other.table).all(|(&a, &b)| !a || b)
    }

    /// Union-find closure of the concept relation described by this set.
    pub(crate) fn closure_labels(&self) -> Labels {
        let u = self.universe();
        let count = u.concept_count();
        let mut uf = UnionFind::new(count);
        for x in 0..count as u32 {
            for y in x + 1..count as u32 {
                if self.holds_bits(x, y) {
                    uf.union(x as usize, y as usize);
                }
            }
        }
        uf.labels()
    }
}

impl fmt::Debug for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TypeSet").field("n", &self.n).field("types", &self.types()).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub n: usize,
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
    /// A diagonal type that is missing, if any.
    pub missing_diagonal: Option<PairType>,
    /// A type whose swap is missing, if any.
    pub asymmetric_type: Option<PairType>,
    /// `(X, Y, Z)` with `E(X,Y)`, `E(Y,Z)` and not `E(X,Z)`.
    pub counterexample: Option<[Concept; 3]>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.reflexive && self.symmetric && self.transitive
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} reflexive={} symmetric={} transitive={}", self.n, self.reflexive, self.symmetric, self.transitive)?;
        if let Some(t) = self.missing_diagonal {
            write!(f, "; missing diagonal type ({t})")?;
        }
        if let Some(t) = self.asymmetric_type {
            write!(f, "; ({t}) present without its swap")?;
        }
        if let Some([x, y, z]) = self.counterexample {
            write!(f, "; E{x}{y} and E{y}{z} but not E{x}{z}")?;
        }
        Ok(())
    }
}

/// First transitivity failure, scanning only the canonical first concept
/// `{0, …, k-1}` of each size: any failing triple can be permuted onto one
/// of these.
fn transitivity_counterexample(set: &TypeSet) -> Option<[Concept; 3]> {
    let u = set.universe();
    let count = u.concept_count() as u32;
    for k in 0..=u.size() {
        let x = u.initial_segment(k).bits();
        for y in 0..count {
            if !set.holds_bits(x, y) {
                continue;
            }
            for z in 0..count {
                if set.holds_bits(y, z) && !set.holds_bits(x, z) {
                    let c = |b| u.from_bits(b).expect("in range");
                    return Some([c(x), c(y), c(z)]);
                }
            }
        }
    }
    None
}

pub fn validate_set(set: &TypeSet) -> ValidationReport {
    let u = set.universe();
    let types = orbit_types(u);
    let missing_diagonal = types.iter().copied().find(|t| t.is_diagonal() && !set.contains(*t));
    let asymmetric_type = types.iter().copied().find(|t| set.contains(*t) && !set.contains(t.swapped()));
    let counterexample = transitivity_counterexample(set);
    ValidationReport {
        n: u.size(),
        reflexive: missing_diagonal.is_none(),
        symmetric: asymmetric_type.is_none(),
        transitive: counterexample.is_none(),
        missing_diagonal,
        asymmetric_type,
        counterexample,
    }
}

/// Check the equivalence axioms for a candidate set of types over `[n]`.
pub fn validate(types: &[PairType], n: usize) -> Result<ValidationReport> {
    let set = TypeSet::from_types(Universe::new(n)?, types.iter().copied())?;
    Ok(validate_set(&set))
}

/// A validated permutation-invariant equivalence relation on concepts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct InvariantRelation {
    set: TypeSet,
}

impl InvariantRelation {
    pub fn new(set: TypeSet) -> Result<Self> {
        let report = validate_set(&set);
        if !report.is_valid() {
            return Err(LabError::NotEquivalence(Box::new(report)));
        }
        Ok(InvariantRelation { set })
    }

    pub fn from_types<I: IntoIterator<Item = PairType>>(n: usize, types: I) -> Result<Self> {
        InvariantRelation::new(TypeSet::from_types(Universe::new(n)?, types)?)
    }

    /// Caller guarantees validity (closures of invariant partitions).
    pub(crate) fn trusted(set: TypeSet) -> Self {
        InvariantRelation { set }
    }

    /// Relation whose classes are the blocks of `labels` (indexed by concept
    /// bits). Fails if the partition is not invariant.
    pub fn from_partition(u: Universe, labels: &[u32]) -> Result<Self> {
        let count = u.concept_count();
        if labels.len() != count {
            return Err(LabError::Precondition(format!("{} labels for {count} concepts", labels.len())));
        }
        let m = u.size() + 1;
        // 0 = unseen, 1 = related, 2 = unrelated
        let mut seen = vec![0u8; m * m * m];
        for x in 0..count as u32 {
            for y in 0..count as u32 {
                let t = pair_type_unchecked(u.size(), x, y);
                let v = if labels[x as usize] == labels[y as usize] { 1 } else { 2 };
                let slot = &mut seen[t.index(u.size())];
                if *slot == 0 {
                    *slot = v;
                } else if *slot != v {
                    return Err(LabError::Precondition(format!("partition is not permutation invariant at type ({t})")));
                }
            }
        }
        let set = TypeSet { n: u.size() as u8, table: seen.iter().map(|&v| v == 1).collect() };
        Ok(InvariantRelation::trusted(set))
    }

    pub fn universe(&self) -> Universe {
        self.set.universe()
    }

    pub fn n(&self) -> usize {
        self.set.n()
    }

    pub fn type_set(&self) -> &TypeSet {
        &self.set
    }

    pub fn yes_types(&self) -> Vec<PairType> {
        self.set.types()
    }

    pub fn contains_type(&self, t: PairType) -> bool {
        self.set.contains(t)
    }

    pub fn holds(&self, x: Concept, y: Concept) -> Result<bool> {
        let n = self.n();
        for c in [x, y] {
            if c.universe().size() != n {
                return Err(LabError::UniverseMismatch { left: n, right: c.universe().size() });
            }
        }
        Ok(self.set.holds_bits(x.bits(), y.bits()))
    }

    #[inline]
    pub(crate) fn holds_bits(&self, x: u32, y: u32) -> bool {
        self.set.holds_bits(x, y)
    }

    /// Canonical class labels over all `2^n` concepts, indexed by bits.
    pub fn labels(&self) -> Labels {
        let u = self.universe();
        let count = u.concept_count();
        let mut raw = vec![u32::MAX; count];
        let mut next = 0;
        for x in 0..count {
            if raw[x] != u32::MAX {
                continue;
            }
            raw[x] = next;
            for y in x + 1..count {
                if raw[y] == u32::MAX && self.set.holds_bits(x as u32, y as u32) {
                    raw[y] = next;
                }
            }
            next += 1;
        }
        Labels { labels: raw, classes: next as usize }
    }

    pub fn class_count(&self) -> usize {
        self.labels().classes
    }

    /// `E^c(X, Y) ⇔ E(M−X, M−Y)`.
    pub fn dualize(&self) -> InvariantRelation {
        let u = self.universe();
        InvariantRelation::trusted(TypeSet::from_predicate(u, |t| self.set.contains(t.complemented())))
    }

    pub fn refines(&self, other: &InvariantRelation) -> Result<bool> {
        if self.n() != other.n() {
            return Err(LabError::UniverseMismatch { left: self.n(), right: other.n() });
        }
        Ok(self.set.is_subset(&other.set))
    }

    /// One quadruple per line, `a b c d`, in lexicographic order.
    pub fn to_canonical_text(&self) -> String {
        let mut out = String::new();
        for t in self.yes_types() {
            out.push_str(&t.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_canonical_text(n: usize, text: &str) -> Result<Self> {
        let mut types = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<u8> = line
                .split_whitespace()
                .map(|s| s.parse::<u8>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| LabError::Precondition(format!("line {}: {e}", lineno + 1)))?;
            let [a, b, c, d] = nums[..] else {
                return Err(LabError::Precondition(format!("line {}: expected four counts", lineno + 1)));
            };
            types.push(PairType::new(a, b, c, d));
        }
        InvariantRelation::from_types(n, types)
    }
}

impl fmt::Debug for InvariantRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InvariantRelation(n={}, {:?})", self.n(), self.yes_types())
    }
}

pub fn holds(e: &InvariantRelation, x: Concept, y: Concept) -> Result<bool> {
    e.holds(x, y)
}

pub fn dualize(e: &InvariantRelation) -> InvariantRelation {
    e.dualize()
}

pub fn refines(e1: &InvariantRelation, e2: &InvariantRelation) -> Result<bool> {
    e1.refines(e2)
}

/// Built-in relations, read in finite standard semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Catalog {
    /// Identity (`X = Y`).
    Blv,
    /// Equinumerosity.
    Hp,
    /// Bicardinal equivalence; equals equinumerosity at finite `n`.
    Bp,
    /// `|X△Y| < ω`, always true at finite `n`.
    Np,
    /// `X = Y` or `X = M−Y`.
    Lcp,
    /// Complement pairs on the `|X| = |M−X|` slice, one junk class elsewhere.
    /// The junk condition reads `|Y| ≠ |M−Y|` for the misprinted `|M=Y|`.
    Cp,
    /// `|X|=|Y|=|M|` or (`|X|,|Y| < |M|` and `X = Y`); identity at finite `n`.
    NewV,
    /// Top concepts related by bicardinality, everything else by identity.
    E0,
    Total,
}

impl Catalog {
    pub const ALL: [Catalog; 9] =
        [Catalog::Blv, Catalog::Hp, Catalog::Bp, Catalog::Np, Catalog::Lcp, Catalog::Cp, Catalog::NewV, Catalog::E0, Catalog::Total];

    pub fn name(self) -> &'static str {
        match self {
            Catalog::Blv => "BLV",
            Catalog::Hp => "HP",
            Catalog::Bp => "BP",
            Catalog::Np => "NP",
            Catalog::Lcp => "LCP",
            Catalog::Cp => "CP",
            Catalog::NewV => "NewV",
            Catalog::E0 => "E0",
            Catalog::Total => "TOTAL",
        }
    }

    /// The same condition in the relation DSL. `E0` needs `2^k` and has none.
    pub fn dsl(self) -> Option<&'static str> {
        Some(match self {
            Catalog::Blv => "sd = 0",
            Catalog::Hp => "b = c",
            Catalog::Bp => "x = y and n + x = n + y",
            Catalog::Np => "sd < omega",
            Catalog::Lcp => "sd = 0 or csd = 0",
            Catalog::Cp => "x + x = n and y = x and (sd = 0 or csd = 0) or x + x != n and y + y != n",
            Catalog::NewV => "x = n and y = n or x < n and y < n and sd = 0",
            Catalog::E0 => return None,
            Catalog::Total => "a + b + c + d = n",
        })
    }

    pub fn condition(self, t: PairType) -> bool {
        let n = t.n();
        match self {
            Catalog::Blv | Catalog::NewV => t.sd() == 0,
            Catalog::Hp | Catalog::Bp => t.x() == t.y(),
            Catalog::Np | Catalog::Total => true,
            Catalog::Lcp => t.sd() == 0 || t.csd() == 0,
            Catalog::Cp => {
                let (x, y) = (t.x(), t.y());
                (2 * x == n && x == y && (t.sd() == 0 || t.csd() == 0)) || (2 * x != n && 2 * y != n)
            }
            Catalog::E0 => t.sd() == 0 || (t.x() == t.y() && top_size(t.x(), n)),
        }
    }

    pub fn relation(self, n: usize) -> Result<InvariantRelation> {
        let u = Universe::new(n)?;
        InvariantRelation::new(TypeSet::from_predicate(u, |t| self.condition(t)))
    }
}

impl FromStr for Catalog {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        Catalog::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| LabError::UnknownCatalog(s.to_string()))
    }
}

impl fmt::Display for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `2^k > n`: the concept's subconcepts outnumber the objects.
pub fn expl_size(k: usize, n: usize) -> bool {
    k >= usize::BITS as usize - 1 || (1usize << k) > n
}

/// Both a size-`k` concept and its complement are exponentially large.
pub fn top_size(k: usize, n: usize) -> bool {
    k <= n && expl_size(k, n) && expl_size(n - k, n)
}

pub fn catalog(name: &str, n: usize) -> Result<InvariantRelation> {
    name.parse::<Catalog>()?.relation(n)
}

pub const ENUMERATE_CAP: usize = 4;

/// Swap orbits `{t, t.swapped()}` of the non-diagonal types, each listed by its
/// smaller member, in lexicographic order.
pub fn swap_orbits(u: Universe) -> Vec<PairType> {
    orbit_types(u).into_iter().filter(|t| !t.is_diagonal() && *t <= t.swapped()).collect()
}

fn candidate(u: Universe, orbits: &[PairType], mask: u64) -> TypeSet {
    let mut set = TypeSet::from_predicate(u, PairType::is_diagonal);
    for (i, &t) in orbits.iter().enumerate() {
        if mask >> i & 1 == 1 {
            set.insert(t).expect("same universe");
            set.insert(t.swapped()).expect("same universe");
        }
    }
    set
}

/// Every invariant equivalence relation over `[n]`, each once, in order of the
/// bitmask over [`swap_orbits`]. Capped at `n ≤ 4`.
pub fn enumerate_all(n: usize) -> Result<Vec<InvariantRelation>> {
    if n > ENUMERATE_CAP {
        return Err(LabError::CapabilityExceeded { what: "exhaustive enumeration", n, cap: ENUMERATE_CAP });
    }
    enumerate_all_uncapped(n)
}

/// No size cap beyond what fits a 64-bit mask; `n = 5` already has `2^28`
/// candidates.
pub fn enumerate_all_uncapped(n: usize) -> Result<Vec<InvariantRelation>> {
    let u = Universe::new(n)?;
    let orbits = swap_orbits(u);
    if orbits.len() >= 63 {
        return Err(LabError::CapabilityExceeded { what: "exhaustive enumeration", n, cap: ENUMERATE_CAP });
    }
    Ok((0..1u64 << orbits.len())
        .into_par_iter()
        .filter_map(|mask| {
            let set = candidate(u, &orbits, mask);
            transitivity_counterexample(&set).is_none().then(|| InvariantRelation::trusted(set))
        })
        .collect())
}

/// The smallest invariant equivalence relation containing the given types.
pub fn closure(u: Universe, generators: &[PairType]) -> Result<InvariantRelation> {
    let mut set = TypeSet::from_predicate(u, PairType::is_diagonal);
    for &t in generators {
        set.insert(t)?;
        set.insert(t.swapped())?;
    }
    let labels = set.closure_labels();
    InvariantRelation::from_partition(u, &labels.labels)
}

#[derive(Debug, Clone)]
pub struct Sampled {
    pub relation: InvariantRelation,
    pub generators: Vec<PairType>,
    /// An identical relation appeared earlier in the same batch.
    pub duplicate: bool,
}

pub const SAMPLE_CAP: usize = 8;

/// Pseudo-random valid relations: closures of 0 to 3 random non-diagonal
/// generator types. Deterministic in `(n, seed, count)`.
pub fn sample(n: usize, seed: u64, count: usize) -> Result<Vec<Sampled>> {
    if n > SAMPLE_CAP {
        return Err(LabError::CapabilityExceeded { what: "sampling", n, cap: SAMPLE_CAP });
    }
    let u = Universe::new(n)?;
    let non_diagonal: Vec<PairType> = orbit_types(u).into_iter().filter(|t| !t.is_diagonal()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens: Vec<Vec<PairType>> = (0..count)
        .map(|_| {
            if non_diagonal.is_empty() {
                return Vec::new();
            }
            let g = rng.gen_range(0..=3);
            (0..g).map(|_| non_diagonal[rng.gen_range(0..non_diagonal.len())]).collect()
        })
        .collect();
    let relations: Vec<InvariantRelation> =
        gens.par_iter().map(|g| closure(u, g)).collect::<Result<_>>()?;
    let mut seen = HashSet::new();
    Ok(relations
        .into_iter()
        .zip(gens)
        .map(|(relation, generators)| {
            let duplicate = !seen.insert(relation.clone());
            Sampled { relation, generators, duplicate }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(n: usize) -> Universe {
        Universe::new(n).unwrap()
    }

    #[test]
    fn holds_examples() {
        let blv = catalog("BLV", 3).unwrap();
        let c3 = |e: &[usize]| u(3).concept(e).unwrap();
        assert!(blv.holds(c3(&[0]), c3(&[0])).unwrap());
        assert!(!blv.holds(c3(&[0]), c3(&[1])).unwrap());
        let lcp = catalog("LCP", 4).unwrap();
        let c4 = |e: &[usize]| u(4).concept(e).unwrap();
        assert!(lcp.holds(c4(&[0, 1]), c4(&[2, 3])).unwrap());
        assert!(blv.holds(c4(&[0]), c4(&[0])).is_err());
    }

    #[test]
    fn validate_examples() {
        let lcp = TypeSet::from_predicate(u(3), |t| Catalog::Lcp.condition(t));
        let r = validate(&lcp.types(), 3).unwrap();
        assert!(r.reflexive && r.symmetric && r.transitive);

        let diag: Vec<PairType> =
            orbit_types(u(3)).into_iter().filter(|t| t.is_diagonal() && *t != PairType::new(1, 0, 0, 2)).collect();
        let r = validate(&diag, 3).unwrap();
        assert!(!r.reflexive);
        assert_eq!(r.missing_diagonal, Some(PairType::new(1, 0, 0, 2)));

        let mut types: Vec<PairType> = orbit_types(u(4)).into_iter().filter(|t| t.is_diagonal()).collect();
        types.push(PairType::new(1, 1, 1, 1));
        let r = validate(&types, 4).unwrap();
        assert!(r.reflexive && r.symmetric);
        assert!(!r.transitive);
        let [x, y, z] = r.counterexample.unwrap();
        let c4 = |e: &[usize]| u(4).concept(e).unwrap();
        // (1,1,1,1) links {0,1}–{0,2}–{2,3}, but ({0,1},{2,3}) has type (0,2,2,0)
        assert_eq!((x, z), (c4(&[0, 1]), c4(&[2, 3])));
        assert_eq!(crate::universe::pair_type(x, y).unwrap(), PairType::new(1, 1, 1, 1));
        assert_eq!(crate::universe::pair_type(y, z).unwrap(), PairType::new(1, 1, 1, 1));
        assert_eq!(crate::universe::pair_type(x, z).unwrap(), PairType::new(0, 2, 2, 0));
    }

    #[test]
    fn validate_rejects_wrong_sum() {
        assert!(validate(&[PairType::new(1, 1, 1, 1)], 3).is_err());
    }

    #[test]
    fn asymmetric_set_is_reported() {
        let mut set = TypeSet::from_predicate(u(3), PairType::is_diagonal);
        set.insert(PairType::new(0, 1, 0, 2)).unwrap();
        let r = validate_set(&set);
        assert!(!r.symmetric);
        assert_eq!(r.asymmetric_type, Some(PairType::new(0, 1, 0, 2)));
    }

    #[test]
    fn catalog_class_counts() {
        assert_eq!(catalog("HP", 3).unwrap().class_count(), 4);
        assert_eq!(catalog("CP", 4).unwrap().class_count(), 4);
        assert_eq!(catalog("LCP", 3).unwrap().class_count(), 4);
        assert_eq!(catalog("TOTAL", 5).unwrap().class_count(), 1);
        assert!(matches!(catalog("FOO", 3), Err(LabError::UnknownCatalog(_))));
    }

    #[test]
    fn catalog_valid_everywhere() {
        for n in 1..=8 {
            for c in Catalog::ALL {
                c.relation(n).unwrap_or_else(|e| panic!("{c} at {n}: {e}"));
            }
        }
    }

    #[test]
    fn finite_collapses() {
        for n in 1..=7 {
            assert_eq!(catalog("NP", n).unwrap(), catalog("TOTAL", n).unwrap());
            assert_eq!(catalog("NewV", n).unwrap(), catalog("BLV", n).unwrap());
            assert_eq!(catalog("BP", n).unwrap(), catalog("HP", n).unwrap());
        }
    }

    #[test]
    fn dualize_examples() {
        for n in 1..=6 {
            let blv = catalog("BLV", n).unwrap();
            assert_eq!(blv.dualize(), blv);
            let hp = catalog("HP", n).unwrap();
            assert_eq!(hp.dualize(), hp);
        }
        let empty_flag = |want_full: bool| {
            TypeSet::from_predicate(u(4), |t| {
                if want_full {
                    (t.x() == 4) == (t.y() == 4)
                } else {
                    (t.x() == 0) == (t.y() == 0)
                }
            })
        };
        let e = InvariantRelation::new(empty_flag(false)).unwrap();
        let m = InvariantRelation::new(empty_flag(true)).unwrap();
        assert_eq!(e.class_count(), 2);
        assert_eq!(e.dualize(), m);
    }

    #[test]
    fn refines_examples() {
        let blv = catalog("BLV", 4).unwrap();
        for c in Catalog::ALL {
            assert!(blv.refines(&c.relation(4).unwrap()).unwrap());
        }
        assert!(!catalog("TOTAL", 2).unwrap().refines(&catalog("BLV", 2).unwrap()).unwrap());
        // CP merges {0} with {1} in its junk class; LCP keeps them apart
        let (lcp, cp) = (catalog("LCP", 4).unwrap(), catalog("CP", 4).unwrap());
        assert!(!cp.refines(&lcp).unwrap());
        assert!(lcp.refines(&cp).unwrap());
        assert!(blv.refines(&catalog("BLV", 3).unwrap()).is_err());
    }

    #[test]
    fn enumerate_small() {
        let one = enumerate_all(1).unwrap();
        assert_eq!(one.len(), 2);
        assert_eq!(one[0], catalog("BLV", 1).unwrap());
        assert_eq!(one[1], catalog("TOTAL", 1).unwrap());
        assert!(matches!(enumerate_all(5), Err(LabError::CapabilityExceeded { .. })));
    }

    #[test]
    fn canonical_text_round_trip() {
        let cp = catalog("CP", 4).unwrap();
        let text = cp.to_canonical_text();
        assert!(text.starts_with("0 0 0 4\n"));
        assert_eq!(InvariantRelation::from_canonical_text(4, &text).unwrap(), cp);
        assert!(InvariantRelation::from_canonical_text(4, "1 1 1").is_err());
    }

    #[test]
    fn sample_is_deterministic_and_valid() {
        let a = sample(6, 1, 100).unwrap();
        let b = sample(6, 1, 100).unwrap();
        assert_eq!(a.len(), 100);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.relation, y.relation);
            assert_eq!(x.duplicate, y.duplicate);
            assert!(validate_set(x.relation.type_set()).is_valid());
        }
        assert!(a.iter().any(|s| s.duplicate));
    }

    #[test]
    fn closure_merges_forced_by_transitivity() {
        // (2,1,1,2) links size-3 concepts sharing two elements; the slice is
        // connected under that move, so every size-3 pair is forced in.
        let u6 = u(6);
        let e = closure(u6, &[PairType::new(2, 1, 1, 2)]).unwrap();
        // oracle: breadth-first search over the slice under one-element swaps
        let slice: Vec<u32> = u6.slice(3).map(|c| c.bits()).collect();
        let mut reached = vec![slice[0]];
        let mut frontier = vec![slice[0]];
        while let Some(x) = frontier.pop() {
            for &y in &slice {
                if (x ^ y).count_ones() == 2 && !reached.contains(&y) {
                    reached.push(y);
                    frontier.push(y);
                }
            }
        }
        assert_eq!(reached.len(), 20);
        for t in orbit_types(u6) {
            let expected = t.sd() == 0 || (t.x() == 3 && t.y() == 3);
            assert_eq!(e.contains_type(t), expected, "{t}");
        }
        // complement pairs alone are already closed
        let e = closure(u6, &[PairType::new(0, 3, 3, 0)]).unwrap();
        assert_eq!(e.yes_types().len(), 8);
    }

    #[test]
    fn from_partition_rejects_non_invariant() {
        let u2 = u(2);
        // {0} alone, everything else together: not invariant
        let labels = [0, 1, 0, 0];
        assert!(InvariantRelation::from_partition(u2, &labels).is_err());
    }
}
