//! Bicardinal slice partitions and their classification as trivial,
//! separative or complementative.
//!
//! At finite `n` the bicardinal class of a size-`k` concept is the whole
//! size-`k` slice. The separative and complementative conditions collapse to
//! "every class is a singleton" and "every class lies inside some `{X, M−X}`".

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::relation::InvariantRelation;
use crate::universe::Concept;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlicePartition {
    pub n: usize,
    pub k: usize,
    /// Each block sorted; blocks ordered by their least member.
    pub blocks: Vec<Vec<Concept>>,
}

impl SlicePartition {
    pub fn slice_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn pattern(&self) -> SlicePattern {
        if self.blocks.len() == 1 {
            SlicePattern::Whole
        } else if self.blocks.iter().all(|b| b.len() == 1) {
            SlicePattern::AllSingletons
        } else if self.blocks.iter().all(|b| is_complement_pair(b)) {
            SlicePattern::AllComplementPairs
        } else if self.blocks.iter().all(|b| b.len() == 1 || is_complement_pair(b)) {
            SlicePattern::MixedSingletonsAndPairs
        } else {
            SlicePattern::Other
        }
    }
}

fn is_complement_pair(block: &[Concept]) -> bool {
    matches!(block, [x, y] if x.complement() == *y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SlicePattern {
    Whole,
    AllSingletons,
    AllComplementPairs,
    MixedSingletonsAndPairs,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ProfileLabel {
    Trivial,
    ProperSeparation,
    ProperComplementation,
    /// Some block is neither the whole slice, a singleton, nor a complement pair.
    Violation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceProfile {
    pub k: usize,
    pub label: ProfileLabel,
    pub trivial: bool,
    pub separative: bool,
    pub complementative: bool,
    pub slice_size: usize,
    pub blocks: usize,
}

impl SliceProfile {
    /// How many of trivial / properly separative / properly complementative hold.
    pub fn proper_label_count(&self) -> usize {
        let proper_sep = self.separative && !self.trivial;
        let proper_comp = self.complementative && !self.separative && !self.trivial;
        [self.trivial, proper_sep, proper_comp].iter().filter(|&&b| b).count()
    }

    /// Trivial together with separative or complementative.
    pub fn is_overlap(&self) -> bool {
        self.trivial && (self.separative || self.complementative)
    }
}

pub fn slice_classes(e: &InvariantRelation, k: usize) -> Result<SlicePartition> {
    let n = e.n();
    if k > n {
        return Err(LabError::SliceOutOfRange { k, n });
    }
    let slice: Vec<Concept> = e.universe().slice(k).collect();
    let mut assigned = vec![false; slice.len()];
    let mut blocks = Vec::new();
    for i in 0..slice.len() {
        if assigned[i] {
            continue;
        }
        let mut block = vec![slice[i]];
        for j in i + 1..slice.len() {
            if !assigned[j] && e.holds_bits(slice[i].bits(), slice[j].bits()) {
                assigned[j] = true;
                block.push(slice[j]);
            }
        }
        blocks.push(block);
    }
    Ok(SlicePartition { n, k, blocks })
}

pub fn profile_of(p: &SlicePartition) -> SliceProfile {
    let trivial = p.blocks.len() == 1;
    let separative = p.blocks.iter().all(|b| b.len() == 1);
    let complementative = p.blocks.iter().all(|b| b.len() == 1 || is_complement_pair(b));
    let label = if !(trivial || complementative) {
        ProfileLabel::Violation
    } else if trivial {
        ProfileLabel::Trivial
    } else if separative {
        ProfileLabel::ProperSeparation
    } else {
        ProfileLabel::ProperComplementation
    };
    SliceProfile { k: p.k, label, trivial, separative, complementative, slice_size: p.slice_size(), blocks: p.blocks.len() }
}

pub fn classify_slice(e: &InvariantRelation, k: usize) -> Result<SliceProfile> {
    Ok(profile_of(&slice_classes(e, k)?))
}

/// All slice profiles for `k = 0..=n`.
pub fn profiles(e: &InvariantRelation) -> Vec<SliceProfile> {
    (0..=e.n()).map(|k| classify_slice(e, k).expect("k in range")).collect()
}

/// The small cases where a slice is trivial and also separative or
/// complementative: `n ≤ 1`, `k = 0`, `k = n`, and `n = 2, k = 1`.
pub fn degenerate_exempt(n: usize, k: usize) -> bool {
    n <= 1 || k == 0 || k == n || (n == 2 && k == 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrichotomyIssue {
    pub k: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Overlap {
    pub k: usize,
    pub exempt: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrichotomyReport {
    pub n: usize,
    pub profiles: Vec<SliceProfile>,
    pub overlaps: Vec<Overlap>,
    pub violations: Vec<TrichotomyIssue>,
}

impl TrichotomyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn trichotomy_check(e: &InvariantRelation) -> TrichotomyReport {
    let n = e.n();
    let profiles = profiles(e);
    let mut overlaps = Vec::new();
    let mut violations = Vec::new();
    for p in &profiles {
        if p.label == ProfileLabel::Violation {
            violations.push(TrichotomyIssue { k: p.k, reason: "block outside {whole slice, singleton, complement pair}".into() });
            continue;
        }
        if !(p.trivial || p.separative || p.complementative) {
            violations.push(TrichotomyIssue { k: p.k, reason: "no option holds".into() });
        }
        if p.is_overlap() {
            let exempt = degenerate_exempt(n, p.k);
            overlaps.push(Overlap { k: p.k, exempt });
            if !exempt {
                violations.push(TrichotomyIssue { k: p.k, reason: "non-degenerate overlap".into() });
            }
        }
        if n > 2 && p.proper_label_count() != 1 {
            violations.push(TrichotomyIssue { k: p.k, reason: format!("{} proper labels", p.proper_label_count()) });
        }
    }
    TrichotomyReport { n, profiles, overlaps, violations }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TightnessEntry {
    pub k: usize,
    pub pattern: SlicePattern,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TightnessReport {
    pub n: usize,
    /// Nontrivial slices and their exact pattern.
    pub nontrivial: Vec<TightnessEntry>,
    pub violations: Vec<usize>,
}

impl TightnessReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every nontrivial slice must be exactly all singletons or exactly all
/// complement pairs.
pub fn check_tightness(e: &InvariantRelation) -> TightnessReport {
    let mut nontrivial = Vec::new();
    let mut violations = Vec::new();
    for k in 0..=e.n() {
        let part = slice_classes(e, k).expect("k in range");
        let pattern = part.pattern();
        if pattern == SlicePattern::Whole {
            continue;
        }
        if !matches!(pattern, SlicePattern::AllSingletons | SlicePattern::AllComplementPairs) {
            violations.push(k);
        }
        nontrivial.push(TightnessEntry { k, pattern });
    }
    TightnessReport { n: e.n(), nontrivial, violations }
}
