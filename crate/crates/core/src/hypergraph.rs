//! The relation `R(a_1, …, a_n) ⟺ g(T, a) has a root`, extension witnesses,
//! and sampling suites for the random-hypergraph axioms.
//!
//! At finite `q` the extension axiom only holds up to an error that shrinks
//! with `q`; every statistic here is meant to be compared with a tolerance.

use std::collections::HashSet;
use std::io::{Read, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::substream_seed;
use crate::combin::{binomial, Combinations};
use crate::construct::{CharPolicy, ConstructionParams, FamilyKind, GBuilder};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::symfun::PointSet;

/// Fields up to this size are scanned completely in a witness search.
pub const SCAN_GUARD: u64 = 1_000_000;
/// Upper bound on the number of subsets in a relation table.
pub const TABLE_GUARD: u128 = 1_000_000;
/// Candidates a statistics trial scans for a witness when the field is past the guard.
pub const STATS_WITNESS_SCAN: u64 = 10_000;
const MAX_CONSTRAINTS: usize = 16;

pub const FINITE_FIELD_CAVEAT: &str = "The extension axiom holds in pseudofinite fields; over a finite field it holds up to an error that decays with the field size, so all frequencies are approximate.";

/// Outcome of one relation evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Evaluation {
    pub in_r: bool,
    /// `u = 0`, so `g = −T^t` and 0 is a forced root.
    pub degenerate: bool,
}

/// Relation evaluator bound to a parameter set and a field.
#[derive(Clone, Debug)]
pub struct Relation {
    builder: GBuilder,
}

impl Relation {
    pub fn new(params: &ConstructionParams, field: &Field) -> Result<Self> {
        Ok(Relation { builder: GBuilder::new(params, field)? })
    }

    pub fn with_policy(params: &ConstructionParams, field: &Field, policy: CharPolicy) -> Result<Self> {
        Ok(Relation { builder: GBuilder::with_policy(params, field, policy)? })
    }

    pub fn params(&self) -> &ConstructionParams {
        self.builder.params()
    }

    pub fn field(&self) -> &Field {
        self.builder.field()
    }

    pub fn arity(&self) -> usize {
        self.builder.params().n
    }

    pub fn evaluate(&self, pts: &PointSet) -> Result<Evaluation> {
        let z = self.builder.z(pts)?;
        self.evaluate_z(z)
    }

    pub fn holds(&self, pts: &PointSet) -> Result<bool> {
        Ok(self.evaluate(pts)?.in_r)
    }

    fn evaluate_z(&self, z: u64) -> Result<Evaluation> {
        if self.params().family == FamilyKind::Char0 {
            let g = self.builder.g_from_z(z)?;
            return Ok(Evaluation { in_r: g.has_root()?, degenerate: false });
        }
        let u = self.builder.u_from_z(z)?;
        if u == 0 {
            return Ok(Evaluation { in_r: true, degenerate: true });
        }
        Ok(Evaluation { in_r: self.builder.g_from_u(u).has_root()?, degenerate: false })
    }

    /// Evaluates on raw distinct points of the bound field.
    pub(crate) fn evaluate_raw(&self, pts: Vec<u64>) -> Result<Evaluation> {
        self.evaluate(&PointSet::from_raw(self.field(), pts, true)?)
    }
}

/// Whether the points are related. Permutation invariant.
pub fn relation(params: &ConstructionParams, field: &Field, pts: &PointSet) -> Result<bool> {
    Relation::new(params, field)?.holds(pts)
}

/// `n−1`-sets `a^1, …, a^m` and the pattern `I`: a witness `c` must satisfy
/// `a^i ∪ {c} ∈ R ⟺ i ∈ I`.
#[derive(Clone, Debug)]
pub struct ExtensionTask {
    constraints: Vec<PointSet>,
    pattern: Vec<bool>,
}

impl ExtensionTask {
    pub fn new(constraints: Vec<PointSet>, pattern: Vec<bool>) -> Result<Self> {
        if constraints.len() != pattern.len() {
            return Err(Error::hypothesis(format!(
                "pattern has {} entries for {} constraints",
                pattern.len(),
                constraints.len()
            )));
        }
        if let Some(first) = constraints.first() {
            let size = first.len();
            let mut seen = HashSet::new();
            for c in &constraints {
                if c.len() != size {
                    return Err(Error::hypothesis("constraints must all have the same size"));
                }
                if !c.field().same_field(first.field()) {
                    return Err(Error::FieldMismatch);
                }
                let sorted = c.sorted();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::RepeatedPoints);
                }
                if !seen.insert(sorted) {
                    return Err(Error::hypothesis("constraints must be pairwise distinct as sets"));
                }
            }
        }
        Ok(ExtensionTask { constraints, pattern })
    }

    /// Pattern given as a bitmask: bit `i` set means constraint `i` must be related.
    pub fn with_mask(constraints: Vec<PointSet>, mask: u64) -> Result<Self> {
        let pattern = (0..constraints.len()).map(|i| mask >> i & 1 == 1).collect();
        Self::new(constraints, pattern)
    }

    pub fn constraints(&self) -> &[PointSet] {
        &self.constraints
    }

    pub fn pattern(&self) -> &[bool] {
        &self.pattern
    }

    fn excluded(&self) -> HashSet<u64> {
        self.constraints.iter().flat_map(|c| c.raw().iter().copied()).collect()
    }
}

impl Relation {
    /// Smallest `c` outside every constraint realizing the pattern, scanning
    /// elements in integer order. Fields past [`SCAN_GUARD`] need a `scan_limit`.
    pub fn witness(&self, task: &ExtensionTask, scan_limit: Option<u64>) -> Result<Option<FieldElem>> {
        let n = self.arity();
        if let Some(bad) = task.constraints.iter().find(|c| c.len() != n - 1) {
            return Err(Error::PointCount { expected: n - 1, found: bad.len() });
        }
        if task.constraints.iter().any(|c| !c.field().same_field(self.field())) {
            return Err(Error::FieldMismatch);
        }
        let q = self.field().order();
        let limit = match scan_limit {
            Some(l) => l.min(q),
            None if q <= SCAN_GUARD => q,
            None => {
                return Err(Error::budget(format!(
                    "field of size {q} exceeds the witness scan guard of {SCAN_GUARD}; supply a scan limit"
                )))
            }
        };
        let excluded = task.excluded();
        for c in (0..limit).filter(|c| !excluded.contains(c)) {
            if self.realizes(task, c)? {
                return Ok(Some(self.field().elem(c)?));
            }
        }
        Ok(None)
    }

    /// Whether `c` realizes the task's pattern.
    pub fn realizes(&self, task: &ExtensionTask, c: u64) -> Result<bool> {
        for (a, &want) in task.constraints.iter().zip(&task.pattern) {
            if self.evaluate(&a.with_point(c)?)?.in_r != want {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn extension_witness(
    params: &ConstructionParams,
    field: &Field,
    task: &ExtensionTask,
    scan_limit: Option<u64>,
) -> Result<Option<FieldElem>> {
    Relation::new(params, field)?.witness(task, scan_limit)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointFreq {
    pub i: usize,
    pub j: usize,
    pub count: u64,
    pub freq: f64,
    /// `freq − marginal_i · marginal_j`.
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternRate {
    /// Bit `i` set means constraint `i` is required to be related.
    pub mask: u64,
    pub attempts: u64,
    pub found: u64,
    pub rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub trials: u64,
    pub constraints: usize,
    pub marginal_counts: Vec<u64>,
    pub marginal_freq: Vec<f64>,
    /// Fraction of all relation evaluations that were true.
    pub pooled_marginal: f64,
    pub joint_freq: Vec<JointFreq>,
    pub max_joint_deviation: f64,
    pub witness_rate: f64,
    pub witness_by_pattern: Vec<PatternRate>,
    pub evaluations: u64,
    /// Evaluations with `u = 0`, counted as related.
    pub degenerate: u64,
    pub witness_scan: u64,
    pub seed: u64,
    pub surrogate: bool,
    pub field_label: String,
    pub params: ConstructionParams,
    pub caveat: String,
}

#[derive(Clone, Debug, Default)]
struct Tally {
    marginal: Vec<u64>,
    joint: Vec<u64>,
    attempts: Vec<u64>,
    found: Vec<u64>,
    evaluations: u64,
    degenerate: u64,
}

impl Tally {
    fn new(m: usize) -> Self {
        Tally {
            marginal: vec![0; m],
            joint: vec![0; m * m.saturating_sub(1) / 2],
            attempts: vec![0; 1 << m],
            found: vec![0; 1 << m],
            evaluations: 0,
            degenerate: 0,
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        let add = |a: &mut Vec<u64>, b: &[u64]| a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        add(&mut self.marginal, &other.marginal);
        add(&mut self.joint, &other.joint);
        add(&mut self.attempts, &other.attempts);
        add(&mut self.found, &other.found);
        self.evaluations += other.evaluations;
        self.degenerate += other.degenerate;
        self
    }
}

/// Draws `size` distinct points avoiding `avoid`.
fn sample_set(rng: &mut ChaCha8Rng, q: u64, size: usize, avoid: &HashSet<u64>) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(size);
    while out.len() < size {
        let c = rng.gen_range(0..q);
        if !avoid.contains(&c) && !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

impl Relation {
    fn trial(&self, m: usize, seed: u64, index: u64, scan: u64) -> Result<Tally> {
        let field = self.field();
        let q = field.order();
        let n = self.arity();
        let mut rng = ChaCha8Rng::seed_from_u64(substream_seed(seed, index));
        let mut constraints: Vec<PointSet> = Vec::with_capacity(m);
        let mut seen = HashSet::new();
        while constraints.len() < m {
            let mut pts = sample_set(&mut rng, q, n - 1, &HashSet::new());
            pts.sort_unstable();
            if seen.insert(pts.clone()) {
                constraints.push(PointSet::from_raw(field, pts, true)?);
            }
        }
        let union: HashSet<u64> = constraints.iter().flat_map(|c| c.raw().iter().copied()).collect();
        let c = sample_set(&mut rng, q, 1, &union)[0];
        let mask: u64 = rng.gen_range(0..1u64 << m);

        let mut tally = Tally::new(m);
        let mut bits = Vec::with_capacity(m);
        for a in &constraints {
            let e = self.evaluate(&a.with_point(c)?)?;
            tally.evaluations += 1;
            tally.degenerate += e.degenerate as u64;
            bits.push(e.in_r);
        }
        let mut slot = 0;
        for i in 0..m {
            tally.marginal[i] += bits[i] as u64;
            for j in i + 1..m {
                tally.joint[slot] += (bits[i] && bits[j]) as u64;
                slot += 1;
            }
        }
        let task = ExtensionTask::with_mask(constraints, mask)?;
        tally.attempts[mask as usize] += 1;
        if self.witness(&task, Some(scan))?.is_some() {
            tally.found[mask as usize] += 1;
        }
        Ok(tally)
    }

    /// Sampling suite: marginal and pairwise joint root frequencies over
    /// random constraint tuples, plus witness success for a random pattern
    /// per trial. Trial `i` draws from its own substream, so the report does
    /// not depend on how trials are scheduled across threads.
    pub fn stats(&self, n_constraints: usize, trials: u64, seed: u64) -> Result<StatsReport> {
        if trials == 0 {
            return Err(Error::hypothesis("trials must be at least 1"));
        }
        if n_constraints == 0 || n_constraints > MAX_CONSTRAINTS {
            return Err(Error::hypothesis(format!("constraint count must lie in 1..={MAX_CONSTRAINTS}")));
        }
        let n = self.arity();
        let q = self.field().order();
        if binomial(q, n as u64 - 1) < n_constraints as u128 || q <= (n_constraints * (n - 1)) as u64 {
            return Err(Error::hypothesis(format!(
                "a field of size {q} is too small for {n_constraints} distinct constraints of size {} plus a fresh point",
                n - 1
            )));
        }
        let scan = if q <= SCAN_GUARD { q } else { STATS_WITNESS_SCAN };
        let m = n_constraints;
        let tally = (0..trials)
            .into_par_iter()
            .map(|i| self.trial(m, seed, i, scan))
            .try_reduce(|| Tally::new(m), |a, b| Ok(a.merge(b)))?;

        let t = trials as f64;
        let marginal_freq: Vec<f64> = tally.marginal.iter().map(|&c| c as f64 / t).collect();
        let mut joint_freq = Vec::new();
        let mut slot = 0;
        for i in 0..m {
            for j in i + 1..m {
                let count = tally.joint[slot];
                let freq = count as f64 / t;
                joint_freq.push(JointFreq { i, j, count, freq, deviation: freq - marginal_freq[i] * marginal_freq[j] });
                slot += 1;
            }
        }
        let max_joint_deviation = joint_freq.iter().map(|j| j.deviation.abs()).fold(0.0, f64::max);
        let witness_by_pattern = (0..1usize << m)
            .map(|mask| PatternRate {
                mask: mask as u64,
                attempts: tally.attempts[mask],
                found: tally.found[mask],
                rate: if tally.attempts[mask] == 0 {
                    0.0
                } else {
                    tally.found[mask] as f64 / tally.attempts[mask] as f64
                },
            })
            .collect();
        Ok(StatsReport {
            trials,
            constraints: m,
            pooled_marginal: tally.marginal.iter().sum::<u64>() as f64 / tally.evaluations as f64,
            marginal_counts: tally.marginal,
            marginal_freq,
            joint_freq,
            max_joint_deviation,
            witness_rate: tally.found.iter().sum::<u64>() as f64 / t,
            witness_by_pattern,
            evaluations: tally.evaluations,
            degenerate: tally.degenerate,
            witness_scan: scan,
            seed,
            surrogate: self.params().is_surrogate(),
            field_label: self.field().label(),
            params: self.params().clone(),
            caveat: FINITE_FIELD_CAVEAT.to_string(),
        })
    }
}

pub fn extension_stats(
    params: &ConstructionParams,
    field: &Field,
    n_constraints: usize,
    trials: u64,
    seed: u64,
) -> Result<StatsReport> {
    Relation::new(params, field)?.stats(n_constraints, trials, seed)
}

/// One bit per `n`-subset of a support list, in lexicographic order of
/// support indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTable {
    len: u64,
    bytes: Vec<u8>,
}

impl RelationTable {
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut bytes = vec![0u8; bits.len().div_ceil(8)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                bytes[i / 8] |= 1 << (i % 8);
            }
        }
        RelationTable { len: bits.len() as u64, bytes }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: u64) -> Option<bool> {
        (i < self.len).then(|| self.bytes[(i / 8) as usize] >> (i % 8) & 1 == 1)
    }

    pub fn count_ones(&self) -> u64 {
        self.bytes.iter().map(|b| b.count_ones() as u64).sum()
    }

    /// Bit count as 8 little-endian bytes, then the bits packed LSB-first.
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(&self.len.to_le_bytes())?;
        w.write_all(&self.bytes)?;
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut header = [0u8; 8];
        r.read_exact(&mut header)?;
        let len = u64::from_le_bytes(header);
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() as u64 != len.div_ceil(8) {
            return Err(Error::Parse(format!("table body has {} bytes for {len} bits", bytes.len())));
        }
        Ok(RelationTable { len, bytes })
    }
}

impl Relation {
    pub fn table(&self, support: &[u64]) -> Result<RelationTable> {
        let n = self.arity();
        let size = binomial(support.len() as u64, n as u64);
        if size > TABLE_GUARD {
            return Err(Error::budget(format!("{size} subsets exceed the table guard of {TABLE_GUARD}")));
        }
        PointSet::from_raw(self.field(), support.to_vec(), true)?;
        let subsets: Vec<Vec<usize>> = Combinations::new(support.len(), n).collect();
        let bits = subsets
            .par_iter()
            .map(|idx| Ok(self.evaluate_raw(idx.iter().map(|&i| support[i]).collect())?.in_r))
            .collect::<Result<Vec<bool>>>()?;
        Ok(RelationTable::from_bits(&bits))
    }
}

pub fn relation_table(params: &ConstructionParams, field: &Field, support: &[FieldElem]) -> Result<RelationTable> {
    let rel = Relation::new(params, field)?;
    let raw = support.iter().map(|&e| field.check(e)).collect::<Result<Vec<_>>>()?;
    rel.table(&raw)
}

/// Shuffles a copy of the points; used to probe permutation invariance.
pub fn shuffled(points: &[u64], rng: &mut impl Rng) -> Vec<u64> {
    let mut v = points.to_vec();
    v.shuffle(rng);
    v
}
