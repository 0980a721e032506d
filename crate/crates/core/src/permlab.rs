//! Domination predicates on concepts and the shuttle permutation.
//!
//! The shuttle carries a concept `X` onto any equinumerous `Z` in four
//! stages while staying inside `X`'s class, given an opportune partner `Y`.
//! Every intermediate image is checked against the relation as it is built.

use std::fmt;

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::relation::InvariantRelation;
use crate::universe::{induced_permutation, Concept, PartialInjection, Permutation};

/// `|X| ⊴ |Y|` on plain sizes: some `m ≤ a` with `m·b ≥ a`.
pub fn tri_le_sizes(a: usize, b: usize) -> bool {
    (0..=a).any(|m| m * b >= a)
}

/// `|X| ◁ |Y|`: `⊴` one way and not the other.
pub fn tri_lt_sizes(a: usize, b: usize) -> bool {
    tri_le_sizes(a, b) && !tri_le_sizes(b, a)
}

fn same_universe(x: Concept, y: Concept) -> Result<()> {
    if x.universe() != y.universe() {
        return Err(LabError::UniverseMismatch { left: x.universe().size(), right: y.universe().size() });
    }
    Ok(())
}

fn same_size(x: Concept, y: Concept) -> Result<()> {
    same_universe(x, y)?;
    if x.len() != y.len() {
        return Err(LabError::Precondition(format!("|{x}| = {} but |{y}| = {}", x.len(), y.len())));
    }
    Ok(())
}

pub fn tri_le_concepts(x: Concept, y: Concept) -> Result<bool> {
    same_universe(x, y)?;
    Ok(tri_le_sizes(x.len(), y.len()))
}

/// None of the four covering conditions holds.
pub fn almost_complementary(x: Concept, y: Concept) -> Result<bool> {
    same_size(x, y)?;
    let cap = x.intersection(y).len();
    let ext = x.union(y).complement().len();
    let xy = x.difference(y).len();
    let yx = y.difference(x).len();
    Ok(!(tri_le_sizes(yx, cap) || tri_le_sizes(xy, cap) || tri_le_sizes(xy, ext) || tri_le_sizes(yx, ext)))
}

/// Some equal-size `Z ∉ {X, Y}` defeats both `|Z−(X∪Y)| ⊴ |X−Y|` and
/// `|Z−(X∪Y)| ⊴ |Y−X|`. Scans every such `Z`.
pub fn symmetric_pair(x: Concept, y: Concept) -> Result<bool> {
    same_size(x, y)?;
    let xy = x.difference(y).len();
    let yx = y.difference(x).len();
    let outside = x.union(y);
    Ok(x.universe().slice(x.len()).any(|z| {
        if z == x || z == y {
            return false;
        }
        let fresh = z.difference(outside).len();
        !tri_le_sizes(fresh, xy) && !tri_le_sizes(fresh, yx)
    }))
}

/// Distinct, E-related, and neither almost complementary nor symmetric.
///
/// Both of the latter notions only apply to equal-size pairs, so pairs of
/// different sizes are never opportune here.
pub fn opportune(e: &InvariantRelation, x: Concept, y: Concept) -> Result<bool> {
    same_universe(x, y)?;
    if x.universe() != e.universe() {
        return Err(LabError::UniverseMismatch { left: e.n(), right: x.universe().size() });
    }
    if x == y || x.len() != y.len() || !e.holds(x, y)? {
        return Ok(false);
    }
    Ok(!almost_complementary(x, y)? && !symmetric_pair(x, y)?)
}

pub fn relatively_finite(x: Concept, y: Concept) -> Result<bool> {
    same_universe(x, y)?;
    Ok(x.difference(y).len() == y.difference(x).len())
}

/// A bijection between two concepts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bijection {
    source: Concept,
    target: Concept,
    /// `(x, f(x))` sorted by `x`.
    pairs: Vec<(u8, u8)>,
}

impl Bijection {
    pub fn new(source: Concept, target: Concept, pairs: &[(usize, usize)]) -> Result<Self> {
        same_universe(source, target)?;
        let mut dom = 0u32;
        let mut rng = 0u32;
        for &(a, b) in pairs {
            if !source.contains(a) || !target.contains(b) {
                return Err(LabError::NotBijective(format!("({a}, {b}) not in {source} × {target}")));
            }
            if dom & 1 << a != 0 || rng & 1 << b != 0 {
                return Err(LabError::NotBijective(format!("({a}, {b}) repeats an element")));
            }
            dom |= 1 << a;
            rng |= 1 << b;
        }
        if dom != source.bits() || rng != target.bits() {
            return Err(LabError::NotBijective(format!("does not map {source} onto {target}")));
        }
        let mut pairs: Vec<(u8, u8)> = pairs.iter().map(|&(a, b)| (a as u8, b as u8)).collect();
        pairs.sort_unstable();
        Ok(Bijection { source, target, pairs })
    }

    /// Pairs the elements of `X` and `Z` in increasing order.
    pub fn monotone(source: Concept, target: Concept) -> Result<Self> {
        same_size(source, target)?;
        let pairs: Vec<_> = source.elements().zip(target.elements()).collect();
        Bijection::new(source, target, &pairs)
    }

    pub fn source(&self) -> Concept {
        self.source
    }

    pub fn target(&self) -> Concept {
        self.target
    }

    pub fn image(&self, x: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.0 as usize == x).map(|p| p.1 as usize)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().map(|&(a, b)| (a as usize, b as usize))
    }

    pub fn fixes_overlap(&self) -> bool {
        let overlap = self.source.intersection(self.target);
        self.pairs().all(|(a, b)| !overlap.contains(a) || a == b)
    }

    /// Same source and target, identity on `X∩Z`. Pairs already mapping
    /// `X−Z` into `Z−X` are kept; the rest are matched in increasing order.
    pub fn normalize(&self) -> Bijection {
        let overlap = self.source.intersection(self.target);
        let mut pairs: Vec<(usize, usize)> = overlap.elements().map(|e| (e, e)).collect();
        let mut free_sources = Vec::new();
        let mut used = overlap.bits();
        for (a, b) in self.pairs() {
            if overlap.contains(a) {
                continue;
            }
            if overlap.contains(b) {
                free_sources.push(a);
            } else {
                pairs.push((a, b));
                used |= 1 << b;
            }
        }
        let free_targets = self.target.elements().filter(|&b| used & 1 << b == 0);
        pairs.extend(free_sources.into_iter().zip(free_targets));
        Bijection::new(self.source, self.target, &pairs).expect("normalization keeps a bijection")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StageTag {
    AtoX,
    ExtoX,
    AtoS,
    ExttoS,
}

impl StageTag {
    pub const ALL: [StageTag; 4] = [StageTag::AtoX, StageTag::ExtoX, StageTag::AtoS, StageTag::ExttoS];
}

impl fmt::Display for StageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StageTag::AtoX => "AtoX",
            StageTag::ExtoX => "ExtoX",
            StageTag::AtoS => "AtoS",
            StageTag::ExttoS => "ExttoS",
        })
    }
}

/// Which region the chunked stages borrowed as scratch space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Route {
    /// `X ∩ Y`
    Shared,
    /// `M − (X ∪ Y)`
    Exterior,
    /// `X − Y`
    XOnly,
    /// `Y − X`
    YOnly,
}

/// One `s_j = p_j, then q_j, then r_j` round of a chunked stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Round {
    pub j: usize,
    /// `rng h_j`
    pub chunk: Concept,
    /// `dom h_j`
    pub scratch: Concept,
    pub p: Permutation,
    pub q: Permutation,
    pub r: Permutation,
    pub s: Permutation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub tag: StageTag,
    /// `Z_i`
    pub region: Concept,
    /// `f(Z_i)` in the stage's orientation (a subset of `X`).
    pub partner: Concept,
    pub route: Option<Route>,
    pub rounds: Vec<Round>,
    pub permutation: Permutation,
    pub x_after: Concept,
    pub y_after: Concept,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShuttleTrace {
    pub x: Concept,
    pub y: Concept,
    pub z: Concept,
    pub stages: Vec<Stage>,
    pub composite: Permutation,
    /// Number of class-membership checks made while building.
    pub class_checks: usize,
}

struct Builder<'a> {
    e: &'a InvariantRelation,
    x0: Concept,
    x: Concept,
    y: Concept,
    checks: usize,
}

impl Builder<'_> {
    fn step(&mut self, p: &Permutation, label: &str) -> Result<()> {
        self.x = p.apply(self.x)?;
        self.y = p.apply(self.y)?;
        self.checks += 1;
        if !self.e.holds(self.x0, self.x)? {
            return Err(LabError::ClassNotPreserved(format!("{label}: {} left the class of {}", self.x, self.x0)));
        }
        Ok(())
    }
}

fn check_fixes(p: &Permutation, moved: Concept, label: &str) -> Result<()> {
    if p.support() != moved {
        return Err(LabError::Precondition(format!(
            "{label} moves {} but should move exactly {moved}",
            p.support()
        )));
    }
    Ok(())
}

/// `g` restricted to `region`, as a partial injection.
fn restrict(g: &[u8], region: Concept) -> Result<PartialInjection> {
    let pairs: Vec<_> = region.elements().map(|z| (z, g[z] as usize)).collect();
    PartialInjection::new(&pairs)
}

fn image(g: &[u8], region: Concept) -> Concept {
    region.elements().fold(region.universe().empty(), |acc, z| acc.insert(g[z] as usize))
}

/// The chunked construction: cut `region` into pieces of at most `|W|`
/// elements and run `s_j` for each.
fn chunked(b: &mut Builder, tag: StageTag, region: Concept, g: &[u8], scratch: Concept) -> Result<(Vec<Round>, Permutation)> {
    let u = region.universe();
    let ws: Vec<usize> = scratch.elements().collect();
    let zs: Vec<usize> = region.elements().collect();
    let mut stage = Permutation::identity(u);
    let mut rounds = Vec::new();
    if zs.is_empty() {
        return Ok((rounds, stage));
    }
    for (j, chunk) in zs.chunks(ws.len()).enumerate() {
        let h: Vec<(usize, usize)> = ws.iter().copied().zip(chunk.iter().copied()).collect();
        let h = PartialInjection::new(&h)?;
        let chunk_set = u.from_bits(h.range_bits())?;
        let dom = u.from_bits(h.domain_bits())?;
        let p = induced_permutation(&h, u)?;
        let q = induced_permutation(&restrict(g, chunk_set)?, u)?;
        let back = image(g, chunk_set);
        let mut r_images: Vec<usize> = (0..u.size()).collect();
        for w in dom.elements() {
            r_images[w] = q.image(p.image(w));
        }
        for x in back.elements() {
            r_images[x] = p.image(q.image(x));
        }
        let r = Permutation::from_images(r_images)?;
        b.step(&p, &format!("{tag} p_{j}"))?;
        b.step(&q, &format!("{tag} q_{j}"))?;
        b.step(&r, &format!("{tag} r_{j}"))?;
        let s = p.then(&q).then(&r);
        check_fixes(&s, chunk_set.union(back), &format!("{tag} s_{j}"))?;
        stage = stage.then(&s);
        rounds.push(Round { j, chunk: chunk_set, scratch: dom, p, q, r, s });
    }
    Ok((rounds, stage))
}

/// Build the shuttle permutation carrying `X` onto `Z` inside `X`'s class.
///
/// `f : X → Z` must be a bijection fixing `X∩Z`, and `X, Y` must be
/// opportune. The stages, in order: swap the part of `Z` inside `Y−X` that
/// `f` pulls back from `X−Y` (borrowing `X∩Y` or the exterior as scratch);
/// swap the exterior part pulled back from `X−Y`; swap the `Y−X` part pulled
/// back from `X∩Y`; and swap the exterior part pulled back from `X∩Y`
/// (borrowing `X−Y` or `Y−X`).
pub fn shuttle(e: &InvariantRelation, x: Concept, y: Concept, z: Concept, f: &Bijection) -> Result<ShuttleTrace> {
    let u = e.universe();
    for c in [x, y, z] {
        if c.universe() != u {
            return Err(LabError::UniverseMismatch { left: u.size(), right: c.universe().size() });
        }
    }
    if !opportune(e, x, y)? {
        let why = if x == y {
            "X = Y".to_string()
        } else if x.len() != y.len() {
            "|X| ≠ |Y|".to_string()
        } else if !e.holds(x, y)? {
            "X and Y are not E-related".to_string()
        } else if almost_complementary(x, y)? {
            "X and Y are almost complementary".to_string()
        } else {
            "X and Y are symmetric".to_string()
        };
        return Err(LabError::Precondition(format!("not opportune: {why}")));
    }
    if !relatively_finite(x, z)? {
        return Err(LabError::Precondition(format!("{x} and {z} are not relatively finite")));
    }
    if f.source() != x || f.target() != z {
        return Err(LabError::Precondition(format!("bijection maps {} → {}, expected {x} → {z}", f.source(), f.target())));
    }
    if !f.fixes_overlap() {
        return Err(LabError::Precondition("bijection does not fix X∩Z pointwise".into()));
    }

    // g = f⁻¹ : Z → X
    let mut g = vec![0u8; u.size()];
    for (a, b) in f.pairs() {
        g[b] = a as u8;
    }
    let moving = z.difference(x);
    let xy = x.difference(y);
    let cap = x.intersection(y);
    let part = |want: Concept, in_y: bool| {
        moving
            .elements()
            .filter(|&e| want.contains(g[e] as usize) && y.contains(e) == in_y)
            .fold(u.empty(), |acc, e| acc.insert(e))
    };
    let (z1, z2, z3, z4) = (part(xy, true), part(xy, false), part(cap, true), part(cap, false));

    let mut b = Builder { e, x0: x, x, y, checks: 0 };
    let mut stages = Vec::with_capacity(4);
    for (tag, zi) in StageTag::ALL.into_iter().zip([z1, z2, z3, z4]) {
        let (cx, cy) = (b.x, b.y);
        let partner = image(&g, zi);
        // the hypotheses of each stage, as positions relative to the running X, Y
        let (from, to) = match tag {
            StageTag::AtoX => (cy.difference(cx), cx.difference(cy)),
            StageTag::ExtoX => (cx.union(cy).complement(), cx.difference(cy)),
            StageTag::AtoS => (cy.difference(cx), cx.intersection(cy)),
            StageTag::ExttoS => (cx.union(cy).complement(), cx.intersection(cy)),
        };
        if !zi.is_subset(from) || !partner.is_subset(to) {
            return Err(LabError::Precondition(format!("{tag}: region {zi} or its preimage {partner} out of place")));
        }
        let (route, rounds, perm) = match tag {
            StageTag::AtoX | StageTag::ExttoS => {
                let options = if tag == StageTag::AtoX {
                    [(Route::Shared, cx.intersection(cy)), (Route::Exterior, cx.union(cy).complement())]
                } else {
                    [(Route::XOnly, cx.difference(cy)), (Route::YOnly, cy.difference(cx))]
                };
                if zi.is_empty() {
                    (None, Vec::new(), Permutation::identity(u))
                } else {
                    let Some(&(route, w)) = options.iter().find(|(_, w)| tri_le_sizes(zi.len(), w.len())) else {
                        return Err(LabError::Precondition(format!("{tag}: no scratch region covers {zi}")));
                    };
                    let (rounds, perm) = chunked(&mut b, tag, zi, &g, w)?;
                    (Some(route), rounds, perm)
                }
            }
            StageTag::ExtoX | StageTag::AtoS => {
                let perm = induced_permutation(&restrict(&g, zi)?, u)?;
                b.step(&perm, &tag.to_string())?;
                (None, Vec::new(), perm)
            }
        };
        check_fixes(&perm, zi.union(partner), &tag.to_string())?;
        if !zi.is_subset(b.x) {
            return Err(LabError::Precondition(format!("{tag}: {zi} not carried into X")));
        }
        stages.push(Stage { tag, region: zi, partner, route, rounds, permutation: perm, x_after: b.x, y_after: b.y });
    }

    let composite = stages.iter().fold(Permutation::identity(u), |acc, s| acc.then(&s.permutation));
    if composite.apply(x)? != z {
        return Err(LabError::Precondition(format!("composite sends {x} to {}, not {z}", composite.apply(x)?)));
    }
    Ok(ShuttleTrace { x, y, z, stages, composite, class_checks: b.checks })
}

/// Step-by-step audit text.
impl fmt::Display for ShuttleTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "shuttle X={} Y={} Z={}", self.x, self.y, self.z)?;
        for s in &self.stages {
            write!(f, "  {:<6} Z_i={} f(Z_i)={} π={}", s.tag, s.region, s.partner, s.permutation)?;
            if let Some(route) = s.route {
                write!(f, " via {route:?}")?;
            }
            writeln!(f)?;
            for r in &s.rounds {
                writeln!(f, "    s_{}: rng h={} dom h={} p={} q={} r={} s={}", r.j, r.chunk, r.scratch, r.p, r.q, r.r, r.s)?;
            }
            writeln!(f, "    X→{} Y→{}", s.x_after, s.y_after)?;
        }
        write!(f, "  π = {} ({} class checks)", self.composite, self.class_checks)
    }
}

/// Outcome of a randomized shuttle sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShuttleSweep {
    pub instances: usize,
    pub passed: usize,
    /// Instances whose trace lacked a property, or where the target's slice
    /// was not trivial afterwards.
    pub failures: Vec<String>,
}

impl ShuttleSweep {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.passed == self.instances
    }
}

/// Random `(E, X, Y, Z, f)` instances with `3 ≤ n ≤ max_n`: `E` drawn from
/// [`sample`](crate::relation::sample) among relations having an opportune
/// pair, `(X, Y)` a random opportune pair, `Z` a random concept of size `|X|`,
/// `f` a random bijection normalized to fix `X∩Z`. Checks `π(X) = Z`, every
/// stage's support, `E(X, Z)`, and that the slice of `X` is trivial.
pub fn shuttle_sweep(max_n: usize, seed: u64, count: usize) -> Result<ShuttleSweep> {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rayon::prelude::*;

    let max_n = max_n.min(crate::relation::SAMPLE_CAP);
    if max_n < 3 {
        return Err(LabError::Precondition(format!("shuttle sweep needs max_n ≥ 3, got {max_n}")));
    }
    // per n, the sampled relations with their opportune pairs
    let mut pools = Vec::new();
    for n in 3..=max_n {
        let sampled = crate::relation::sample(n, seed.wrapping_add(n as u64), 64)?;
        let mut pool: Vec<(InvariantRelation, Vec<(Concept, Concept)>)> = sampled
            .into_par_iter()
            .filter(|s| !s.duplicate)
            .map(|s| {
                let u = s.relation.universe();
                let pairs: Vec<_> = u
                    .concepts()
                    .flat_map(|x| u.slice(x.len()).map(move |y| (x, y)))
                    .filter(|&(x, y)| opportune(&s.relation, x, y).unwrap_or(false))
                    .collect();
                (s.relation, pairs)
            })
            .filter(|(_, pairs)| !pairs.is_empty())
            .collect();
        pool.sort_by_key(|(e, _)| e.to_canonical_text());
        if !pool.is_empty() {
            pools.push(pool);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = Vec::with_capacity(count);
    for _ in 0..count {
        let pool = &pools[rng.gen_range(0..pools.len())];
        let (e, pairs) = &pool[rng.gen_range(0..pool.len())];
        let (x, y) = pairs[rng.gen_range(0..pairs.len())];
        let slice: Vec<Concept> = e.universe().slice(x.len()).collect();
        let z = slice[rng.gen_range(0..slice.len())];
        let mut targets: Vec<usize> = z.elements().collect();
        targets.shuffle(&mut rng);
        let pairs: Vec<_> = x.elements().zip(targets).collect();
        let f = Bijection::new(x, z, &pairs)?.normalize();
        draws.push((e, x, y, z, f));
    }
    let failures: Vec<String> = draws
        .par_iter()
        .filter_map(|(e, x, y, z, f)| {
            let fail = |why: String| Some(format!("n={} X={x} Y={y} Z={z}: {why}", e.n()));
            let trace = match shuttle(e, *x, *y, *z, f) {
                Ok(t) => t,
                Err(err) => return fail(err.to_string()),
            };
            if trace.composite.apply(*x).ok() != Some(*z) || !e.holds(*x, *z).unwrap_or(false) {
                return fail("Z not reached inside the class".into());
            }
            match crate::classify::classify_slice(e, x.len()) {
                Ok(p) if p.trivial => None,
                _ => fail("slice with an opportune pair is not trivial".into()),
            }
        })
        .collect();
    Ok(ShuttleSweep { instances: count, passed: count - failures.len(), failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::catalog;
    use crate::universe::Universe;

    fn c(n: usize, e: &[usize]) -> Concept {
        Universe::new(n).unwrap().concept(e).unwrap()
    }

    #[test]
    fn tri_le_examples() {
        assert!(!tri_le_concepts(c(3, &[0]), c(3, &[])).unwrap());
        assert!(tri_le_concepts(c(3, &[]), c(3, &[])).unwrap());
        assert!(tri_le_concepts(c(3, &[]), c(3, &[1, 2])).unwrap());
        assert!(tri_le_concepts(c(6, &[0, 1, 2]), c(6, &[5])).unwrap());
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(tri_le_sizes(a, b), b > 0 || a == 0);
                assert_eq!(tri_lt_sizes(a, b), a == 0 && b > 0);
            }
        }
    }

    #[test]
    fn almost_complementary_examples() {
        assert!(almost_complementary(c(2, &[0]), c(2, &[1])).unwrap());
        assert!(!almost_complementary(c(4, &[0, 1]), c(4, &[1, 2])).unwrap());
        assert!(almost_complementary(c(4, &[0, 1]), c(4, &[2, 3])).unwrap());
        assert!(almost_complementary(c(4, &[0]), c(4, &[0, 1])).is_err());
    }

    #[test]
    fn symmetric_examples() {
        assert!(symmetric_pair(c(3, &[0]), c(3, &[0])).unwrap());
        assert!(!symmetric_pair(c(3, &[0]), c(3, &[1])).unwrap());
        assert!(!symmetric_pair(c(3, &[0, 1, 2]), c(3, &[0, 1, 2])).unwrap());
        assert!(symmetric_pair(c(3, &[0]), c(3, &[0, 1])).is_err());
    }

    #[test]
    fn finite_collapses() {
        for n in 1..=5 {
            let u = Universe::new(n).unwrap();
            for x in u.concepts() {
                for y in u.slice(x.len()) {
                    let ac = almost_complementary(x, y).unwrap();
                    let sym = symmetric_pair(x, y).unwrap();
                    assert_eq!(ac, y == x.complement() && !x.is_empty() && y != x);
                    assert_eq!(sym, x == y && !x.is_empty() && x.len() < n);
                    if x != y {
                        assert!(!(ac && sym));
                    }
                }
            }
        }
    }

    #[test]
    fn opportune_examples() {
        assert!(opportune(&catalog("TOTAL", 4).unwrap(), c(4, &[0, 1]), c(4, &[1, 2])).unwrap());
        assert!(!opportune(&catalog("LCP", 4).unwrap(), c(4, &[0, 1]), c(4, &[2, 3])).unwrap());
        let blv = catalog("BLV", 5).unwrap();
        for x in Universe::new(5).unwrap().concepts() {
            for y in Universe::new(5).unwrap().concepts() {
                assert!(!opportune(&blv, x, y).unwrap());
            }
        }
    }

    #[test]
    fn relatively_finite_examples() {
        assert!(relatively_finite(c(3, &[0, 1]), c(3, &[1, 2])).unwrap());
        assert!(!relatively_finite(c(3, &[0]), c(3, &[0, 1])).unwrap());
        assert!(relatively_finite(c(3, &[2]), c(3, &[2])).unwrap());
    }

    #[test]
    fn bijection_checks_and_normalizes() {
        let x = c(5, &[0, 1, 2]);
        let z = c(5, &[1, 3, 4]);
        assert!(Bijection::new(x, z, &[(0, 1), (1, 3)]).is_err());
        assert!(Bijection::new(x, z, &[(0, 1), (1, 1), (2, 4)]).is_err());
        let f = Bijection::new(x, z, &[(0, 1), (1, 4), (2, 3)]).unwrap();
        assert!(!f.fixes_overlap());
        let g = f.normalize();
        assert!(g.fixes_overlap());
        assert_eq!(g.image(1), Some(1));
        assert_eq!(g.image(2), Some(3));
        assert_eq!(g.image(0), Some(4));
    }

    #[test]
    fn shuttle_small_example() {
        let e = catalog("TOTAL", 4).unwrap();
        let (x, y, z) = (c(4, &[0, 1]), c(4, &[1, 2]), c(4, &[2, 3]));
        let f = Bijection::new(x, z, &[(0, 2), (1, 3)]).unwrap();
        let t = shuttle(&e, x, y, z, &f).unwrap();
        assert_eq!(t.composite.apply(x).unwrap(), z);
        assert_eq!(t.stages.len(), 4);
    }

    #[test]
    fn shuttle_identity_when_z_is_x() {
        let e = catalog("TOTAL", 4).unwrap();
        let (x, y) = (c(4, &[0, 1]), c(4, &[1, 2]));
        let f = Bijection::monotone(x, x).unwrap();
        let t = shuttle(&e, x, y, x, &f).unwrap();
        assert!(t.composite.is_identity());
        assert!(t.stages.iter().all(|s| s.region.is_empty() && s.permutation.is_identity()));
    }

    #[test]
    fn shuttle_n6_logs_four_stages() {
        let e = catalog("TOTAL", 6).unwrap();
        let (x, y, z) = (c(6, &[0, 1, 2]), c(6, &[1, 2, 3]), c(6, &[3, 4, 5]));
        let f = Bijection::monotone(x, z).unwrap();
        let t = shuttle(&e, x, y, z, &f).unwrap();
        assert_eq!(t.composite.apply(x).unwrap(), z);
        let tags: Vec<_> = t.stages.iter().map(|s| s.tag).collect();
        assert_eq!(tags, StageTag::ALL);
        // 0 ↦ 3 goes through the chunked first stage, 1, 2 ↦ 4, 5 through the last
        assert_eq!(t.stages[0].region, c(6, &[3]));
        assert_eq!(t.stages[0].route, Some(Route::Shared));
        assert_eq!(t.stages[3].region, c(6, &[4, 5]));
        assert!(t.to_string().contains("ExttoS"));
    }

    #[test]
    fn shuttle_exterior_route_and_multiple_rounds() {
        // X∩Y has one element, so three AtoX elements need three rounds
        let e = catalog("TOTAL", 8).unwrap();
        let x = c(8, &[0, 1, 2, 3]);
        let y = c(8, &[3, 4, 5, 6]);
        let z = c(8, &[4, 5, 6, 3]);
        let f = Bijection::new(x, z, &[(0, 4), (1, 5), (2, 6), (3, 3)]).unwrap();
        let t = shuttle(&e, x, y, z, &f).unwrap();
        assert_eq!(t.stages[0].rounds.len(), 3);
        assert_eq!(t.composite.apply(x).unwrap(), z);

        // X∩Y empty: the exterior is the scratch space
        let x = c(6, &[0, 1]);
        let y = c(6, &[2, 3]);
        let z = c(6, &[2, 3]);
        let t = shuttle(&e6(), x, y, z, &Bijection::monotone(x, z).unwrap()).unwrap();
        assert_eq!(t.stages[0].route, Some(Route::Exterior));
        assert_eq!(t.stages[0].rounds.len(), 1);
    }

    fn e6() -> InvariantRelation {
        catalog("TOTAL", 6).unwrap()
    }

    #[test]
    fn shuttle_rejects_bad_hypotheses() {
        let e = e6();
        let (x, y, z) = (c(6, &[0, 1]), c(6, &[1, 2]), c(6, &[4, 5]));
        let f = Bijection::monotone(x, z).unwrap();
        let err = shuttle(&catalog("BLV", 6).unwrap(), x, y, z, &f).unwrap_err();
        assert!(err.to_string().contains("not opportune"));
        let err = shuttle(&e, x, x.complement(), z, &f).unwrap_err();
        assert!(err.to_string().contains("not opportune"));
        let z3 = c(6, &[3, 4, 5]);
        let g = Bijection::new(x, x, &[(0, 1), (1, 0)]).unwrap();
        assert!(shuttle(&e, x, y, x, &g).unwrap_err().to_string().contains("fix"));
        assert!(shuttle(&e, x, y, z3, &f).unwrap_err().to_string().contains("relatively finite"));
    }

    #[test]
    fn sweep_is_green_and_deterministic() {
        let a = shuttle_sweep(6, 3, 200).unwrap();
        assert!(a.all_passed(), "{:?}", a.failures);
        assert_eq!(a, shuttle_sweep(6, 3, 200).unwrap());
    }

    #[test]
    fn induced_swap_is_involution() {
        let u = Universe::new(6).unwrap();
        let h = PartialInjection::new(&[(0, 3), (1, 5)]).unwrap();
        let p = induced_permutation(&h, u).unwrap();
        assert!(p.then(&p).is_identity());
    }
}
