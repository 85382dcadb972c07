//! Finite-data audits of Galois-theoretic claims.
//!
//! Nothing here computes a Galois group. Instead, specializations of a
//! one-parameter family are factored (Dedekind reduction) and the resulting
//! degree patterns are compared with the cycle-type proportions of a
//! permutation group; discriminants are checked for squareness; and
//! factorizations of `f(X) − β` expose ramification indices.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, substream_seed};
use crate::construct::{ConstructionParams, FamilyKind, Pencil};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::poly::{DegreePattern, Poly};
use crate::symfun::{s_poly, PointSet};

/// Largest field swept exhaustively; bigger fields must be sampled.
pub const EXACT_SWEEP_LIMIT: u64 = 10_000;
/// Largest degree in `T` accepted by a sweep.
pub const SWEEP_DEGREE_LIMIT: usize = 200;
/// Largest degree whose permutation group is enumerated.
pub const CLASS_DEGREE_LIMIT: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Alt,
    Sym,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub cycle_type: DegreePattern,
    pub count: u64,
}

/// Cycle types of a permutation group with their element counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTable {
    pub kind: GroupKind,
    pub degree: usize,
    /// Sorted by cycle type.
    pub entries: Vec<ClassEntry>,
    pub order: u64,
}

impl ClassTable {
    pub fn count(&self, cycle_type: &DegreePattern) -> u64 {
        self.entries.binary_search_by(|e| e.cycle_type.cmp(cycle_type)).map_or(0, |i| self.entries[i].count)
    }

    pub fn proportion(&self, cycle_type: &DegreePattern) -> f64 {
        self.count(cycle_type) as f64 / self.order as f64
    }
}

fn cycle_type(perm: &[usize]) -> DegreePattern {
    let mut seen = vec![false; perm.len()];
    let mut parts = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        parts.push(len);
    }
    parts.sort_unstable();
    DegreePattern(parts)
}

/// Enumerates every permutation of degree `m` (Heap's algorithm; each step
/// is one transposition, so parity alternates) and tallies cycle types.
pub fn group_classes(kind: GroupKind, m: usize) -> Result<ClassTable> {
    if m == 0 || m > CLASS_DEGREE_LIMIT {
        return Err(Error::budget(format!("group degree must lie in 1..={CLASS_DEGREE_LIMIT} (got {m})")));
    }
    let mut counts: BTreeMap<DegreePattern, u64> = BTreeMap::new();
    let mut perm: Vec<usize> = (0..m).collect();
    let mut c = vec![0usize; m];
    let mut even = true;
    let mut visit = |perm: &[usize], even: bool| {
        if even || kind == GroupKind::Sym {
            *counts.entry(cycle_type(perm)).or_default() += 1;
        }
    };
    visit(&perm, even);
    let mut i = 1;
    while i < m {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            perm.swap(j, i);
            even = !even;
            visit(&perm, even);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    let entries: Vec<ClassEntry> =
        counts.into_iter().map(|(cycle_type, count)| ClassEntry { cycle_type, count }).collect();
    let order = entries.iter().map(|e| e.count).sum();
    Ok(ClassTable { kind, degree: m, entries, order })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointStats {
    /// Reduced fraction of elements with a fixed point.
    pub numerator: u64,
    pub denominator: u64,
    pub derangement_exists: bool,
}

impl FixedPointStats {
    pub fn proportion(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

/// Share of group elements fixing a point, and whether some element fixes none.
pub fn fixed_point_stats(table: &ClassTable) -> Result<FixedPointStats> {
    if table.degree < 2 {
        return Err(Error::hypothesis("the permuted set must have at least 2 elements"));
    }
    let fixing: u64 = table.entries.iter().filter(|e| e.cycle_type.has_fixed_point()).map(|e| e.count).sum();
    let g = gcd(fixing, table.order).max(1);
    Ok(FixedPointStats {
        numerator: fixing / g,
        denominator: table.order / g,
        derangement_exists: table.entries.iter().any(|e| !e.cycle_type.has_fixed_point()),
    })
}

/// Which parameter values a diagnostic visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sweep {
    /// Every field element; only for fields up to [`EXACT_SWEEP_LIMIT`].
    All,
    /// `count` values drawn uniformly with replacement; draw `i` uses substream `(seed, i)`.
    Sample { count: u64, seed: u64 },
}

impl Sweep {
    /// Exhaustive on small fields, sampled otherwise.
    pub fn auto(field: &Field, count: u64, seed: u64) -> Sweep {
        if field.order() <= EXACT_SWEEP_LIMIT {
            Sweep::All
        } else {
            Sweep::Sample { count, seed }
        }
    }

    fn values(&self, field: &Field) -> Result<Vec<u64>> {
        let q = field.order();
        match *self {
            Sweep::All if q > EXACT_SWEEP_LIMIT => Err(Error::budget(format!(
                "exhaustive sweeps stop at {EXACT_SWEEP_LIMIT} elements (field has {q}); sample instead"
            ))),
            Sweep::All => Ok((0..q).collect()),
            Sweep::Sample { count, seed } => {
                Ok((0..count).map(|i| ChaCha8Rng::seed_from_u64(substream_seed(seed, i)).gen_range(0..q)).collect())
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Sweep::All => "all".to_string(),
            Sweep::Sample { count, seed } => format!("sample:{count}:{seed}"),
        }
    }
}

/// Specialization outcome at one parameter value.
enum Special {
    Squarefree(Poly),
    DegreeDrop,
    Ramified,
}

fn specialize(pencil: &Pencil, y: u64) -> Special {
    let f = pencil.specialize_raw(y);
    if f.degree() != Some(pencil.t_degree()) {
        Special::DegreeDrop
    } else if !f.is_squarefree() {
        Special::Ramified
    } else {
        Special::Squarefree(f)
    }
}

fn check_sweepable(pencil: &Pencil) -> Result<()> {
    if pencil.is_constant_in_y() {
        return Err(Error::hypothesis("the family does not depend on the parameter; nothing to sweep"));
    }
    if pencil.t_degree() == 0 {
        return Err(Error::DegreeTooSmall { found: 0, required: 1 });
    }
    if pencil.t_degree() > SWEEP_DEGREE_LIMIT {
        return Err(Error::budget(format!(
            "sweeps are limited to degree {SWEEP_DEGREE_LIMIT} in T (family has degree {})",
            pencil.t_degree()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternCount {
    pub pattern: DegreePattern,
    pub count: u64,
    pub frequency: f64,
}

/// Degree patterns of squarefree full-degree specializations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleHistogram {
    pub degree: usize,
    pub field: String,
    pub sweep: String,
    /// Specializations that entered the histogram.
    pub samples: u64,
    /// Specializations with zero discriminant.
    pub ramified: u64,
    /// Specializations where the leading coefficient vanished.
    pub degree_drop: u64,
    pub patterns: Vec<PatternCount>,
}

impl CycleHistogram {
    pub fn excluded(&self) -> u64 {
        self.ramified + self.degree_drop
    }

    pub fn count(&self, pattern: &DegreePattern) -> u64 {
        self.patterns.iter().find(|p| &p.pattern == pattern).map_or(0, |p| p.count)
    }

    /// Builds a histogram from raw counts; used for merging and for tests.
    pub fn from_counts(degree: usize, counts: BTreeMap<DegreePattern, u64>) -> Self {
        let samples: u64 = counts.values().sum();
        let patterns = counts
            .into_iter()
            .map(|(pattern, count)| PatternCount { pattern, count, frequency: count as f64 / samples.max(1) as f64 })
            .collect();
        CycleHistogram {
            degree,
            field: String::new(),
            sweep: String::new(),
            samples,
            ramified: 0,
            degree_drop: 0,
            patterns,
        }
    }
}

#[derive(Default)]
struct HistTally {
    counts: BTreeMap<DegreePattern, u64>,
    ramified: u64,
    degree_drop: u64,
}

impl HistTally {
    fn merge(mut self, other: HistTally) -> HistTally {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_default() += v;
        }
        self.ramified += other.ramified;
        self.degree_drop += other.degree_drop;
        self
    }
}

pub fn cycle_type_histogram(pencil: &Pencil, sweep: Sweep) -> Result<CycleHistogram> {
    check_sweepable(pencil)?;
    let values = sweep.values(pencil.field())?;
    let tally = values
        .par_iter()
        .map(|&y| {
            let mut t = HistTally::default();
            match specialize(pencil, y) {
                Special::Squarefree(f) => {
                    *t.counts.entry(f.degree_pattern()?).or_default() += 1;
                }
                Special::DegreeDrop => t.degree_drop += 1,
                Special::Ramified => t.ramified += 1,
            }
            Ok::<_, Error>(t)
        })
        .try_reduce(HistTally::default, |a, b| Ok(a.merge(b)))?;
    if tally.counts.is_empty() {
        return Err(Error::hypothesis("every specialization was excluded; the sweep is empty"));
    }
    let mut hist = CycleHistogram::from_counts(pencil.t_degree(), tally.counts);
    hist.field = pencil.field().label();
    hist.sweep = sweep.describe();
    hist.ramified = tally.ramified;
    hist.degree_drop = tally.degree_drop;
    Ok(hist)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub pattern: DegreePattern,
    pub count: u64,
    pub empirical: f64,
    pub predicted: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChebotarevReport {
    pub group: GroupKind,
    pub degree: usize,
    pub samples: u64,
    pub excluded: u64,
    pub rows: Vec<ComparisonRow>,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub within_tolerance: bool,
    /// Observed patterns that are not cycle types of the group.
    pub foreign_patterns: Vec<DegreePattern>,
    pub refuted: bool,
}

impl ChebotarevReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(["pattern", "count", "empirical", "predicted", "deviation"]).map_err(io)?;
        for r in &self.rows {
            w.write_record([
                r.pattern.to_string(),
                r.count.to_string(),
                format!("{:.6}", r.empirical),
                format!("{:.6}", r.predicted),
                format!("{:.6}", r.deviation),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// Compares empirical pattern frequencies with class proportions.
pub fn chebotarev_compare(hist: &CycleHistogram, table: &ClassTable, tol: f64) -> Result<ChebotarevReport> {
    if hist.degree != table.degree {
        return Err(Error::hypothesis(format!(
            "histogram degree {} differs from group degree {}",
            hist.degree, table.degree
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::hypothesis("tolerance must be positive"));
    }
    let patterns: BTreeSet<DegreePattern> = table
        .entries
        .iter()
        .map(|e| e.cycle_type.clone())
        .chain(hist.patterns.iter().map(|p| p.pattern.clone()))
        .collect();
    let rows: Vec<ComparisonRow> = patterns
        .into_iter()
        .map(|pattern| {
            let count = hist.count(&pattern);
            let empirical = count as f64 / hist.samples.max(1) as f64;
            let predicted = table.proportion(&pattern);
            ComparisonRow { deviation: (empirical - predicted).abs(), pattern, count, empirical, predicted }
        })
        .collect();
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    let foreign_patterns: Vec<DegreePattern> =
        rows.iter().filter(|r| r.count > 0 && table.count(&r.pattern) == 0).map(|r| r.pattern.clone()).collect();
    Ok(ChebotarevReport {
        group: table.kind,
        degree: table.degree,
        samples: hist.samples,
        excluded: hist.excluded(),
        max_deviation,
        tolerance: tol,
        within_tolerance: max_deviation <= tol,
        refuted: !foreign_patterns.is_empty(),
        foreign_patterns,
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscAudit {
    pub field: String,
    pub sweep: String,
    /// Squarefree full-degree specializations examined.
    pub squarefree: u64,
    /// Those whose discriminant is a square.
    pub squares: u64,
    pub fraction: f64,
    pub excluded: u64,
}

/// Share of squarefree specializations with square discriminant. A group
/// inside the alternating group forces this to be 1.
pub fn disc_square_audit(pencil: &Pencil, sweep: Sweep) -> Result<DiscAudit> {
    if pencil.field().characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    check_sweepable(pencil)?;
    let field = pencil.field();
    let values = sweep.values(field)?;
    let (squarefree, squares, excluded) = values
        .par_iter()
        .map(|&y| match specialize(pencil, y) {
            Special::Squarefree(f) => {
                let d = f.discriminant()?;
                Ok::<_, Error>((1u64, field.raw_is_square(d.value())? as u64, 0u64))
            }
            _ => Ok((0, 0, 1)),
        })
        .try_reduce(|| (0, 0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1, a.2 + b.2)))?;
    if squarefree == 0 {
        return Err(Error::hypothesis("every specialization was excluded; the sweep is empty"));
    }
    Ok(DiscAudit {
        field: field.label(),
        sweep: sweep.describe(),
        squarefree,
        squares,
        fraction: squares as f64 / squarefree as f64,
        excluded,
    })
}

/// Factorization of `f(X) − β`: the multiplicities are the ramification
/// indices above `y = β` in the cover `y = f(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RamProfile {
    pub beta: FieldElem,
    pub factors: Vec<(Poly, usize)>,
}

impl RamProfile {
    /// `(deg γ_i, r_i)` pairs, sorted. Independent of the chosen factors.
    pub fn signature(&self) -> Vec<(usize, usize)> {
        let mut s: Vec<(usize, usize)> = self.factors.iter().map(|(g, r)| (g.degree().unwrap_or(0), *r)).collect();
        s.sort_unstable();
        s
    }

    /// `Σ r_i · deg γ_i`.
    pub fn weighted_degree(&self) -> usize {
        self.factors.iter().map(|(g, r)| g.degree().unwrap_or(0) * r).sum()
    }

    pub fn is_ramified(&self) -> bool {
        self.factors.iter().any(|&(_, r)| r > 1)
    }
}

pub fn ramification_profile(f: &Poly, beta: FieldElem) -> Result<RamProfile> {
    let field = f.field();
    let b = field.check(beta)?;
    match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::DegreeTooSmall { found: 0, required: 1 }),
        Some(_) => {}
    }
    let shifted = f.sub_unchecked(&Poly::constant(field, b));
    let factors = shifted.factor(0)?.factors;
    Ok(RamProfile { beta, factors })
}

/// Ramification index of a compositum: `lcm(r1, r2)`, valid when at least
/// one index is prime to the characteristic `p` (`p = 0` for none).
pub fn abhyankar_lcm(r1: u64, r2: u64, p: u64) -> Result<u64> {
    if r1 == 0 || r2 == 0 {
        return Err(Error::hypothesis("ramification indices are positive"));
    }
    if p != 0 && r1.is_multiple_of(p) && r2.is_multiple_of(p) {
        return Err(Error::hypothesis(format!(
            "at least one ramification index must be prime to the characteristic (r1 = {r1}, r2 = {r2}, p = {p})"
        )));
    }
    Ok(r1 / gcd(r1, r2) * r2)
}

/// Per marker `β_i`, the sorted `(degree, multiplicity)` pairs of `S(a, X) − β_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint(pub Vec<Vec<(usize, usize)>>);

pub fn locus_fingerprint(params: &ConstructionParams, field: &Field, a: &PointSet) -> Result<Fingerprint> {
    if params.family != FamilyKind::Charp {
        return Err(Error::hypothesis("locus fingerprints are defined for the charp family"));
    }
    params.validate()?;
    let n = params.n;
    let p = field.characteristic();
    if (n as u64 - 1).is_multiple_of(p) {
        return Err(Error::hypothesis(format!(
            "the characteristic must not divide n - 1 (p = {p}, n - 1 = {})",
            n - 1
        )));
    }
    if !a.field().same_field(field) {
        return Err(Error::FieldMismatch);
    }
    if a.len() != n - 1 {
        return Err(Error::PointCount { expected: n - 1, found: a.len() });
    }
    let s = s_poly(a)?;
    let profiles = params
        .betas
        .iter()
        .map(|&b| Ok(ramification_profile(&s, field.from_int(b as i64))?.signature()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Fingerprint(profiles))
}

/// Rebuilds `S(a, X)` from the ramification data above the first marker:
/// the product of the factors of `S(a, X) − β_1` with multiplicities, plus `β_1`.
/// Unlike the degree fingerprint this separates any two distinct sets.
pub fn recover_s_poly(params: &ConstructionParams, field: &Field, a: &PointSet) -> Result<Poly> {
    locus_fingerprint(params, field, a)?;
    let beta = field.from_int(*params.betas.first().ok_or_else(|| Error::hypothesis("no markers"))? as i64);
    let profile = ramification_profile(&s_poly(a)?, beta)?;
    let mut acc = Poly::one(field);
    for (g, r) in &profile.factors {
        for _ in 0..*r {
            acc = acc.mul_unchecked(g);
        }
    }
    Ok(acc.add_unchecked(&Poly::constant(field, beta.value())))
}

pub fn fingerprints_distinct(params: &ConstructionParams, field: &Field, a: &PointSet, b: &PointSet) -> Result<bool> {
    Ok(locus_fingerprint(params, field, a)? != locus_fingerprint(params, field, b)?)
}
