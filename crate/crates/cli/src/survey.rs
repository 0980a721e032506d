use std::collections::BTreeMap;

use abstraction_lab::classify::{check_tightness, trichotomy_check, Overlap, ProfileLabel};
use abstraction_lab::relation::{enumerate_all, sample, ENUMERATE_CAP, SAMPLE_CAP};
use abstraction_lab::relcat::relcat_verdict;
use abstraction_lab::sat::{basal, check_thm_bc, check_top_triviality};
use abstraction_lab::{InvariantRelation, PairType};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Map;

use crate::report::{object, Report, Status};
use crate::{CliError, SurveyArgs};

/// One distinct relation's row.
#[derive(Debug, Clone, Serialize)]
pub struct SurveyRecord {
    pub index: usize,
    /// Quadruples `a b c d` separated by `;`.
    pub relation: String,
    pub generators: Option<Vec<PairType>>,
    /// One letter per slice `k = 0..=n`: T(rivial), S(eparative),
    /// C(omplementative), V(iolation).
    pub profiles: String,
    pub overlaps: Vec<Overlap>,
    pub class_count: usize,
    pub satisfiable: bool,
    pub trichotomy: bool,
    pub tightness: bool,
    /// `None` unless the middle-slice theorem applies at this `n`.
    pub thm_bc: Option<bool>,
    pub top: bool,
    /// `None` for unsatisfiable relations.
    pub basal_refines: Option<bool>,
    pub ccoa: bool,
    pub bicard_ccoa: bool,
    pub rc: Option<bool>,
    pub agrees: Option<bool>,
    pub relcat_falsified: bool,
}

/// A relation with the generators it was sampled from.
type Drawn = (InvariantRelation, Option<Vec<PairType>>);

fn letter(l: ProfileLabel) -> char {
    match l {
        ProfileLabel::Trivial => 'T',
        ProfileLabel::ProperSeparation => 'S',
        ProfileLabel::ProperComplementation => 'C',
        ProfileLabel::Violation => 'V',
    }
}

fn examine(
    index: usize,
    e: &InvariantRelation,
    generators: Option<Vec<PairType>>,
    basal: &InvariantRelation,
    budget: usize,
    seed: u64,
) -> Result<SurveyRecord, CliError> {
    let tri = trichotomy_check(e);
    let tight = check_tightness(e);
    let bc = check_thm_bc(e);
    let top = check_top_triviality(e);
    let class_count = e.class_count();
    let satisfiable = class_count <= e.n();
    let basal_refines = if satisfiable { Some(basal.refines(e)?) } else { None };
    // relcat's sampled search gets its own stream per relation
    let v = relcat_verdict(e, budget, seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64));
    Ok(SurveyRecord {
        index,
        relation: e.yes_types().iter().map(ToString::to_string).collect::<Vec<_>>().join(";"),
        generators,
        profiles: tri.profiles.iter().map(|p| letter(p.label)).collect(),
        overlaps: tri.overlaps.clone(),
        class_count,
        satisfiable,
        trichotomy: tri.passed(),
        tightness: tight.passed(),
        thm_bc: bc.applicable.then_some(bc.confirmed),
        top: top.passed(),
        basal_refines,
        ccoa: v.ccoa,
        bicard_ccoa: v.bicard_ccoa,
        rc: v.rc,
        agrees: v.agrees,
        relcat_falsified: v.falsified(),
    })
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SurveySummary {
    pub n: usize,
    pub exhaustive: bool,
    pub seed: u64,
    pub drawn: usize,
    pub distinct: usize,
    pub satisfiable: usize,
    pub label_counts: BTreeMap<char, usize>,
    pub exempt_overlaps: usize,
    pub trichotomy_failures: usize,
    pub tightness_failures: usize,
    pub thm_bc_applicable: usize,
    pub thm_bc_failures: usize,
    pub top_failures: usize,
    pub basal_class_count: usize,
    pub basal_failures: usize,
    pub rc_true: usize,
    pub rc_false: usize,
    pub rc_undecided: usize,
    pub relcat_failures: usize,
}

impl SurveySummary {
    pub fn passed(&self) -> bool {
        self.trichotomy_failures
            + self.tightness_failures
            + self.thm_bc_failures
            + self.top_failures
            + self.basal_failures
            + self.relcat_failures
            == 0
    }
}

pub fn summarize(n: usize, exhaustive: bool, seed: u64, drawn: usize, rows: &[SurveyRecord], basal_classes: usize) -> SurveySummary {
    let mut s = SurveySummary { n, exhaustive, seed, drawn, distinct: rows.len(), basal_class_count: basal_classes, ..Default::default() };
    for r in rows {
        s.satisfiable += r.satisfiable as usize;
        for c in r.profiles.chars() {
            *s.label_counts.entry(c).or_default() += 1;
        }
        s.exempt_overlaps += r.overlaps.iter().filter(|o| o.exempt).count();
        s.trichotomy_failures += !r.trichotomy as usize;
        s.tightness_failures += !r.tightness as usize;
        s.thm_bc_applicable += r.thm_bc.is_some() as usize;
        s.thm_bc_failures += (r.thm_bc == Some(false)) as usize;
        s.top_failures += !r.top as usize;
        s.basal_failures += (r.basal_refines == Some(false)) as usize;
        match r.rc {
            Some(true) => s.rc_true += 1,
            Some(false) => s.rc_false += 1,
            None => s.rc_undecided += r.satisfiable as usize,
        }
        s.relcat_failures += r.relcat_falsified as usize;
    }
    s
}

pub fn survey(a: &SurveyArgs) -> Result<Report, CliError> {
    let n = a.n;
    let exhaustive = match a.sample {
        Some(_) => false,
        None if n <= ENUMERATE_CAP => true,
        None if a.exhaustive => {
            return Err(CliError::Usage(format!("exhaustive survey is capped at n = {ENUMERATE_CAP}; use --sample")))
        }
        None => return Err(CliError::Usage(format!("n = {n} needs --sample N (exhaustive only up to {ENUMERATE_CAP})"))),
    };
    if !exhaustive && n > SAMPLE_CAP {
        return Err(CliError::Usage(format!("sampling is capped at n = {SAMPLE_CAP}")));
    }
    let (relations, drawn): (Vec<Drawn>, usize) = if exhaustive {
        let all = enumerate_all(n)?;
        let count = all.len();
        (all.into_iter().map(|e| (e, None)).collect(), count)
    } else {
        let drawn = a.sample.expect("sampled");
        let s = sample(n, a.seed, drawn)?;
        (s.into_iter().filter(|s| !s.duplicate).map(|s| (s.relation, Some(s.generators))).collect(), drawn)
    };
    let b = basal(n)?;
    let rows: Vec<SurveyRecord> = relations
        .into_par_iter()
        .enumerate()
        .map(|(i, (e, g))| examine(i, &e, g, &b, a.relcat_budget, a.seed))
        .collect::<Result<_, _>>()?;
    let summary = summarize(n, exhaustive, a.seed, drawn, &rows, b.class_count());
    let status = Status::from_ok(summary.passed());
    let records = rows.iter().map(object).collect();
    let summary: Map<_, _> = object(&summary);
    Ok(Report { command: "survey", records, summary, status })
}
