//! Finite universes, concepts as bitsets, pair types and permutations.
//!
//! A [`Concept`] is a subset of `{0, …, n-1}` stored as a `u32` bitset. Two
//! universes with the same size are interchangeable; there are no named
//! elements.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

pub const MAX_UNIVERSE: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Universe {
    n: u8,
}

impl Universe {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_UNIVERSE {
            return Err(LabError::UniverseSize(n));
        }
        Ok(Universe { n: n as u8 })
    }

    #[inline]
    pub fn size(self) -> usize {
        self.n as usize
    }

    /// Bitmask of the whole universe `M`.
    #[inline]
    pub fn full_mask(self) -> u32 {
        if self.n as usize == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }

    /// Number of concepts, `2^n`.
    #[inline]
    pub fn concept_count(self) -> usize {
        1usize << self.n
    }

    pub fn empty(self) -> Concept {
        Concept { bits: 0, n: self.n }
    }

    pub fn full(self) -> Concept {
        Concept { bits: self.full_mask(), n: self.n }
    }

    pub fn concept(self, elements: &[usize]) -> Result<Concept> {
        let mut bits = 0u32;
        for &e in elements {
            if e >= self.size() {
                return Err(LabError::ElementOutOfRange { element: e, n: self.size() });
            }
            bits |= 1 << e;
        }
        Ok(Concept { bits, n: self.n })
    }

    pub fn from_bits(self, bits: u32) -> Result<Concept> {
        if bits & !self.full_mask() != 0 {
            return Err(LabError::ElementOutOfRange {
                element: (31 - (bits & !self.full_mask()).leading_zeros()) as usize,
                n: self.size(),
            });
        }
        Ok(Concept { bits, n: self.n })
    }

    /// All `2^n` concepts in increasing bit order.
    pub fn concepts(self) -> impl Iterator<Item = Concept> + Clone {
        let n = self.n;
        (0..self.concept_count() as u32).map(move |bits| Concept { bits, n })
    }

    /// All concepts of size `k`, in increasing bit order.
    pub fn slice(self, k: usize) -> impl Iterator<Item = Concept> + Clone {
        self.concepts().filter(move |c| c.len() == k)
    }

    /// The canonical size-`k` representative `{0, …, k-1}`.
    pub fn initial_segment(self, k: usize) -> Concept {
        debug_assert!(k <= self.size());
        Concept { bits: ((1u64 << k) - 1) as u32, n: self.n }
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.n)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Concept {
    bits: u32,
    n: u8,
}

impl Concept {
    #[inline]
    pub fn bits(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn universe(self) -> Universe {
        Universe { n: self.n }
    }

    #[inline]
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn contains(self, e: usize) -> bool {
        e < 32 && self.bits & (1 << e) != 0
    }

    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(e)
            }
        })
    }

    pub fn complement(self) -> Concept {
        Concept { bits: !self.bits & self.universe().full_mask(), n: self.n }
    }

    fn check(self, other: Concept) -> Result<()> {
        if self.n != other.n {
            return Err(LabError::UniverseMismatch { left: self.n as usize, right: other.n as usize });
        }
        Ok(())
    }

    // Boolean operations assume a shared universe; the checked entry points
    // (`pair_type`, `bicardinal`, permutation application) guard the public API.
    #[inline]
    pub fn union(self, other: Concept) -> Concept {
        Concept { bits: self.bits | other.bits, n: self.n }
    }

    #[inline]
    pub fn intersection(self, other: Concept) -> Concept {
        Concept { bits: self.bits & other.bits, n: self.n }
    }

    #[inline]
    pub fn difference(self, other: Concept) -> Concept {
        Concept { bits: self.bits & !other.bits, n: self.n }
    }

    #[inline]
    pub fn symmetric_difference(self, other: Concept) -> Concept {
        Concept { bits: self.bits ^ other.bits, n: self.n }
    }

    #[inline]
    pub fn is_subset(self, other: Concept) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn insert(self, e: usize) -> Concept {
        Concept { bits: self.bits | (1 << e), n: self.n }
    }
}

impl fmt::Debug for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Serialized as the sorted list of elements.
impl Serialize for Concept {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.elements())
    }
}

/// The orbit of a concept pair under `Sym(n)`:
/// `(|X∩Y|, |X−Y|, |Y−X|, |M−(X∪Y)|)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u8; 4]", into = "[u8; 4]")]
pub struct PairType {
    pub a: u8,
    pub b: u8,
    pub c: u8,
    pub d: u8,
}

impl PairType {
    pub const fn new(a: u8, b: u8, c: u8, d: u8) -> Self {
        PairType { a, b, c, d }
    }

    #[inline]
    pub fn n(self) -> usize {
        (self.a + self.b + self.c + self.d) as usize
    }

    /// `|X|`
    #[inline]
    pub fn x(self) -> usize {
        (self.a + self.b) as usize
    }

    /// `|Y|`
    #[inline]
    pub fn y(self) -> usize {
        (self.a + self.c) as usize
    }

    /// `|X△Y|`
    #[inline]
    pub fn sd(self) -> usize {
        (self.b + self.c) as usize
    }

    /// `|M−(X△Y)|`
    #[inline]
    pub fn csd(self) -> usize {
        (self.a + self.d) as usize
    }

    pub fn is_diagonal(self) -> bool {
        self.b == 0 && self.c == 0
    }

    /// Type of `(Y, X)`.
    pub fn swapped(self) -> PairType {
        PairType { a: self.a, b: self.c, c: self.b, d: self.d }
    }

    /// Type of `(M−X, M−Y)`.
    pub fn complemented(self) -> PairType {
        PairType { a: self.d, b: self.c, c: self.b, d: self.a }
    }

    /// Dense index into a `(n+1)^3` table; `d` is implied by `n`.
    #[inline]
    pub fn index(self, n: usize) -> usize {
        let m = n + 1;
        (self.a as usize * m + self.b as usize) * m + self.c as usize
    }

    /// Canonical witness pair over `[n]` realizing this type.
    pub fn witness(self) -> (Concept, Concept) {
        let n = self.n() as u8;
        let (a, b, c) = (self.a as u32, self.b as u32, self.c as u32);
        let seg = |from: u32, len: u32| ((1u64 << (from + len)) - (1u64 << from)) as u32;
        let x = seg(0, a) | seg(a, b);
        let y = seg(0, a) | seg(a + b, c);
        (Concept { bits: x, n }, Concept { bits: y, n })
    }
}

impl From<[u8; 4]> for PairType {
    fn from([a, b, c, d]: [u8; 4]) -> Self {
        PairType { a, b, c, d }
    }
}

impl From<PairType> for [u8; 4] {
    fn from(t: PairType) -> Self {
        [t.a, t.b, t.c, t.d]
    }
}

impl fmt::Display for PairType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.a, self.b, self.c, self.d)
    }
}

#[inline]
pub(crate) fn pair_type_unchecked(n: usize, x: u32, y: u32) -> PairType {
    let a = (x & y).count_ones();
    let b = (x & !y).count_ones();
    let c = (y & !x).count_ones();
    PairType { a: a as u8, b: b as u8, c: c as u8, d: (n as u32 - a - b - c) as u8 }
}

pub fn pair_type(x: Concept, y: Concept) -> Result<PairType> {
    x.check(y)?;
    Ok(pair_type_unchecked(x.n as usize, x.bits, y.bits))
}

/// Bicardinal equivalence: `|X| = |Y|` and `|M−X| = |M−Y|`.
pub fn bicardinal(x: Concept, y: Concept) -> Result<bool> {
    x.check(y)?;
    Ok(x.len() == y.len() && x.complement().len() == y.complement().len())
}

/// Every pair type over `[n]`, in lexicographic order of `(a, b, c, d)`.
pub fn orbit_types(u: Universe) -> Vec<PairType> {
    let n = u.n;
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=n - a {
            for c in 0..=n - a - b {
                out.push(PairType { a, b, c, d: n - a - b - c });
            }
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(u: Universe) -> Self {
        Permutation { images: (0..u.n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        Universe::new(n)?;
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n {
                return Err(LabError::ElementOutOfRange { element: i, n });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(LabError::NotBijective(format!("{i} hit twice")));
            }
        }
        Ok(Permutation { images: images.into_iter().map(|i| i as u8).collect() })
    }

    /// Build from disjoint cycles, e.g. `&[&[0, 2], &[1, 3]]`.
    pub fn from_cycles(u: Universe, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..u.size()).collect();
        let mut touched = vec![false; u.size()];
        for cycle in cycles {
            for (i, &e) in cycle.iter().enumerate() {
                if e >= u.size() {
                    return Err(LabError::ElementOutOfRange { element: e, n: u.size() });
                }
                if std::mem::replace(&mut touched[e], true) {
                    return Err(LabError::NotBijective(format!("{e} in two cycles")));
                }
                images[e] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images)
    }

    pub fn universe(&self) -> Universe {
        Universe { n: self.images.len() as u8 }
    }

    #[inline]
    pub fn image(&self, e: usize) -> usize {
        self.images[e] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&i| i as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &e)| i == e as usize)
    }

    /// Elements moved by the permutation.
    pub fn support(&self) -> Concept {
        let mut bits = 0;
        for (i, &e) in self.images.iter().enumerate() {
            if i != e as usize {
                bits |= 1 << i;
            }
        }
        Concept { bits, n: self.images.len() as u8 }
    }

    /// `self` first, then `next`: `x ↦ next(self(x))`.
    pub fn then(&self, next: &Permutation) -> Permutation {
        debug_assert_eq!(self.images.len(), next.images.len());
        Permutation { images: self.images.iter().map(|&i| next.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.images.len()];
        for (i, &e) in self.images.iter().enumerate() {
            inv[e as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    #[inline]
    pub(crate) fn apply_bits(&self, bits: u32) -> u32 {
        let mut out = 0u32;
        let mut rest = bits;
        while rest != 0 {
            let e = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1 << self.images[e];
        }
        out
    }

    pub fn apply(&self, x: Concept) -> Result<Concept> {
        if x.n as usize != self.images.len() {
            return Err(LabError::UniverseMismatch { left: self.images.len(), right: x.n as usize });
        }
        Ok(Concept { bits: self.apply_bits(x.bits), n: x.n })
    }

    /// All `n!` permutations in lexicographic order of their image vectors.
    pub fn all(u: Universe) -> Vec<Permutation> {
        let mut cur: Vec<u8> = (0..u.n).collect();
        let mut out = vec![Permutation { images: cur.clone() }];
        // next lexicographic permutation
        loop {
            let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
            out.push(Permutation { images: cur.clone() });
        }
        out
    }
}

pub fn apply_permutation(p: &Permutation, x: Concept) -> Result<Concept> {
    p.apply(x)
}

/// Serialized as the image vector.
impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.images())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Cycle notation, `()` for the identity.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.images.len()];
        let mut any = false;
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            any = true;
            f.write_str("(")?;
            let mut e = start;
            let mut first = true;
            while !seen[e] {
                seen[e] = true;
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                write!(f, "{e}")?;
                e = self.images[e] as usize;
            }
            f.write_str(")")?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// An injection whose domain and range are disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialInjection {
    pairs: Vec<(u8, u8)>,
}

impl PartialInjection {
    pub fn new(pairs: &[(usize, usize)]) -> Result<Self> {
        let mut dom = 0u32;
        let mut rng = 0u32;
        for &(x, y) in pairs {
            for e in [x, y] {
                if e >= MAX_UNIVERSE {
                    return Err(LabError::ElementOutOfRange { element: e, n: MAX_UNIVERSE });
                }
            }
            if dom & (1 << x) != 0 {
                return Err(LabError::NotBijective(format!("{x} mapped twice")));
            }
            if rng & (1 << y) != 0 {
                return Err(LabError::NotBijective(format!("{y} hit twice")));
            }
            dom |= 1 << x;
            rng |= 1 << y;
        }
        if dom & rng != 0 {
            return Err(LabError::OverlappingInjection((dom & rng).trailing_zeros() as usize));
        }
        Ok(PartialInjection { pairs: pairs.iter().map(|&(x, y)| (x as u8, y as u8)).collect() })
    }

    pub fn empty() -> Self {
        PartialInjection { pairs: Vec::new() }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().map(|&(x, y)| (x as usize, y as usize))
    }

    pub fn domain_bits(&self) -> u32 {
        self.pairs.iter().fold(0, |acc, &(x, _)| acc | 1 << x)
    }

    pub fn range_bits(&self) -> u32 {
        self.pairs.iter().fold(0, |acc, &(_, y)| acc | 1 << y)
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// `ι(f)`: swaps each `x ∈ dom f` with `f(x)` and fixes everything else.
pub fn induced_permutation(f: &PartialInjection, u: Universe) -> Result<Permutation> {
    let mut images: Vec<u8> = (0..u.n).collect();
    for (x, y) in f.pairs() {
        for e in [x, y] {
            if e >= u.size() {
                return Err(LabError::ElementOutOfRange { element: e, n: u.size() });
            }
        }
        images[x] = y as u8;
        images[y] = x as u8;
    }
    Ok(Permutation { images })
}
