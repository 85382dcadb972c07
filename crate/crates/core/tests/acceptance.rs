//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hfl_core::construct::{charp_params, surrogate_params, CharPolicy, Pencil};
use hfl_core::galois::{
    chebotarev_compare, cycle_type_histogram, disc_square_audit, group_classes, locus_fingerprint, recover_s_poly,
    GroupKind, Sweep,
};
use hfl_core::hypergraph::{ExtensionTask, Relation};
use hfl_core::symfun::{complete_sym, elementary_from_complete, elementary_sym, sim_injectivity};
use hfl_core::{Field, FieldCtx, PointSet, Poly};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

/// Runs a check and fails it when it overruns its time budget.
fn timed<T>(budget_secs: u64, check: impl FnOnce() -> T) -> (T, Duration, bool) {
    let start = Instant::now();
    let out = check();
    let elapsed = start.elapsed();
    (out, elapsed, elapsed <= Duration::from_secs(budget_secs))
}

fn within(budget_secs: u64, check: impl FnOnce() -> Outcome) -> Outcome {
    let (o, elapsed, in_time) = timed(budget_secs, check);
    Outcome::new(o.pass && in_time, format!("{}; {elapsed:.2?} (budget {budget_secs} s)", o.detail))
}

fn random_set(field: &Field, size: usize, rng: &mut ChaCha8Rng) -> PointSet {
    let q = field.order();
    let mut seen = BTreeSet::new();
    let mut pts = Vec::with_capacity(size);
    while pts.len() < size {
        let v = rng.gen_range(0..q);
        if seen.insert(v) {
            pts.push(v);
        }
    }
    PointSet::from_raw(field, pts, true).unwrap()
}

/// `e_j` and `h_j` for `j ≤ max`, adding one variable at a time:
/// `e_j ← e_j + x·e_{j−1}` (old values) and `h_j ← h_j + x·h_{j−1}` (new values).
fn oracle_e_h(field: &Field, pts: &[u64], max: usize) -> (Vec<u64>, Vec<u64>) {
    let mut e = vec![0u64; max + 1];
    let mut h = vec![0u64; max + 1];
    e[0] = 1;
    h[0] = 1;
    for &x in pts {
        for j in (1..=max).rev() {
            e[j] = field.raw_add(e[j], field.raw_mul(x, e[j - 1]));
        }
        for j in 1..=max {
            h[j] = field.raw_add(h[j], field.raw_mul(x, h[j - 1]));
        }
    }
    (e, h)
}

fn symmetric_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for field in [FieldCtx::prime(13).unwrap(), FieldCtx::new(3, 3, None).unwrap()] {
        for n in 1..=8usize {
            for _ in 0..1000 {
                let set = random_set(&field, n, &mut rng);
                let (e, h) = oracle_e_h(&field, set.raw(), n);
                for k in 0..=n {
                    let lib_e = elementary_sym(k, &set).unwrap().value();
                    let lib_h = complete_sym(k, &set).value();
                    let mut alt = 0u64;
                    for j in 0..=k {
                        let term = field.raw_mul(e[j], h[k - j]);
                        alt = if j % 2 == 0 { field.raw_add(alt, term) } else { field.raw_sub(alt, term) };
                    }
                    if lib_e != e[k] || lib_h != h[k] || (k > 0 && alt != 0) {
                        failures.push(format!("{} n={n} k={k}", field.label()));
                    }
                }
                if elementary_from_complete(&field, &h) != e {
                    failures.push(format!("{} n={n} e-from-h", field.label()));
                }
                checked += 1;
            }
        }
    }
    Outcome::new(failures.is_empty(), format!("{checked} sets over F_13 and F_27, {} mismatches", failures.len()))
}

fn sim_injective() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (q, n) in [(7u64, 3usize), (11, 3), (11, 4)] {
        let check = sim_injectivity(&FieldCtx::prime(q).unwrap(), n).unwrap();
        pass &= check.injective;
        parts.push(format!("F_{q} n={n}: {} subsets, injective={}", check.subsets, check.injective));
    }
    Outcome::new(pass, parts.join("; "))
}

fn root_counts() -> Outcome {
    let fields: Vec<Field> = [(2u64, 1u32), (13, 1), (97, 1), (997, 1), (3, 2), (3, 3), (2, 9), (5, 4), (31, 2)]
        .iter()
        .map(|&(p, k)| FieldCtx::new(p, k, None).unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut bad = 0;
    for i in 0..1000 {
        let field = &fields[i % fields.len()];
        let q = field.order();
        let deg = rng.gen_range(0..=10usize);
        let mut coeffs: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..q)).collect();
        coeffs[deg] = rng.gen_range(1..q);
        // A few polynomials with forced repeated roots.
        let f = if i % 7 == 0 && deg >= 2 {
            let r = rng.gen_range(0..q);
            Poly::from_roots(field, &[r, r]).mul(&Poly::from_raw(field, coeffs[..=deg - 2].to_vec())).unwrap()
        } else {
            Poly::from_raw(field, coeffs)
        };
        if f.is_zero() {
            continue;
        }
        let brute = field.elements().filter(|&x| f.eval(x).unwrap().is_zero()).count();
        if f.count_roots().unwrap() != brute {
            bad += 1;
        }
    }
    Outcome::new(bad == 0, format!("1000 polynomials over {} fields, {bad} disagreements", fields.len()))
}

fn abhyankar_alternating() -> Outcome {
    let field = FieldCtx::new(3, 6, None).unwrap();
    let pencil = Pencil::abhyankar(&field, 2, 3);
    let hist = cycle_type_histogram(&pencil, Sweep::All).unwrap();
    let report = chebotarev_compare(&hist, &group_classes(GroupKind::Alt, 5).unwrap(), 0.08).unwrap();
    let audit = disc_square_audit(&pencil, Sweep::All).unwrap();
    let pass = report.foreign_patterns.is_empty() && report.within_tolerance && audit.fraction == 1.0;
    Outcome::new(
        pass,
        format!(
            "F_3^6, {} specializations, max deviation {:.4}, foreign patterns {}, disc squares {}/{}",
            report.samples,
            report.max_deviation,
            report.foreign_patterns.len(),
            audit.squares,
            audit.squarefree
        ),
    )
}

fn char0_even_patterns() -> Outcome {
    let field = FieldCtx::prime(10007).unwrap();
    let params = hfl_core::construct::char0_params(3, None).unwrap();
    let pencil = Pencil::for_params(&params, &field).unwrap();
    let sweep = Sweep::Sample { count: 2100, seed: 5 };
    let hist = cycle_type_histogram(&pencil, sweep).unwrap();
    let audit = disc_square_audit(&pencil, sweep).unwrap();
    let odd: Vec<_> = hist.patterns.iter().filter(|p| !p.pattern.is_even()).collect();
    let pass = hist.samples >= 2000 && odd.is_empty() && audit.fraction == 1.0;
    Outcome::new(
        pass,
        format!(
            "m = {}, {} usable samples ({} excluded), odd patterns {}, disc squares {}/{}",
            params.m,
            hist.samples,
            hist.excluded(),
            odd.len(),
            audit.squares,
            audit.squarefree
        ),
    )
}

fn surrogate_stats() -> (Outcome, Outcome) {
    let field = FieldCtx::new(3, 6, None).unwrap();
    let params = surrogate_params(3, 3, 2, 1).unwrap();
    let report = Relation::new(&params, &field).unwrap().stats(2, 2000, 6).unwrap();
    let marginal = Outcome::new(
        params.m == 5 && report.trials >= 2000 && (0.54..=0.66).contains(&report.pooled_marginal),
        format!(
            "m = {}, {} trials, marginals {:?}, pooled {:.4}",
            params.m, report.trials, report.marginal_freq, report.pooled_marginal
        ),
    );
    let joint = Outcome::new(
        report.max_joint_deviation <= 0.05,
        format!("max |P(both) - P(i)P(j)| = {:.4} over {} pairs", report.max_joint_deviation, report.joint_freq.len()),
    );
    (marginal, joint)
}

fn extension_witnesses() -> Outcome {
    let field = FieldCtx::new(3, 6, None).unwrap();
    let params = surrogate_params(3, 3, 2, 1).unwrap();
    let rel = Relation::new(&params, &field).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut found = [0u32; 4];
    let mut replay_failures = 0;
    for _ in 0..200 {
        let constraints = vec![random_set(&field, 2, &mut rng), random_set(&field, 2, &mut rng)];
        for (mask, hits) in found.iter_mut().enumerate() {
            let task = ExtensionTask::with_mask(constraints.clone(), mask as u64).unwrap();
            if let Some(c) = rel.witness(&task, None).unwrap() {
                *hits += 1;
                let replay = constraints.iter().enumerate().all(|(i, a)| {
                    rel.holds(&a.with_point(c.value()).unwrap()).unwrap() == ((mask >> i) & 1 == 1)
                        && !a.contains_raw(c.value())
                });
                if !replay {
                    replay_failures += 1;
                }
            }
        }
    }
    let rates: Vec<f64> = found.iter().map(|&f| f as f64 / 200.0).collect();
    Outcome::new(
        rates.iter().all(|&r| r >= 0.9) && replay_failures == 0,
        format!("success by pattern {rates:?}, {replay_failures} replay failures"),
    )
}

fn foreign_characteristic() -> Outcome {
    let field = FieldCtx::prime(10007).unwrap();
    let params = charp_params(3, 5, 3, &[1, 2, 3]).unwrap();
    let rel = Relation::with_policy(&params, &field, CharPolicy::Any).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let base = random_set(&field, 3, &mut rng);
    let start = Instant::now();
    let first = rel.holds(&base).unwrap();
    let single = start.elapsed();
    let mut agree = true;
    for _ in 0..5 {
        let mut pts = base.raw().to_vec();
        pts.shuffle(&mut rng);
        agree &= rel.holds(&PointSet::from_raw(&field, pts, true).unwrap()).unwrap() == first;
    }
    Outcome::new(
        params.m == 2742 && single <= Duration::from_secs(10) && agree,
        format!("m = {}, one evaluation {:.2?}, 5 orderings agree = {agree}", params.m, single),
    )
}

fn fingerprints() -> Outcome {
    let field = FieldCtx::prime(101).unwrap();
    let params = charp_params(3, 101, 3, &[1, 2, 3]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut collisions = 0;
    let mut recovery_failures = 0;
    let mut self_mismatch = 0;
    let mut pairs = 0;
    while pairs < 50 {
        let a = random_set(&field, 2, &mut rng);
        let b = random_set(&field, 2, &mut rng);
        if a.sorted() == b.sorted() {
            continue;
        }
        pairs += 1;
        let fa = locus_fingerprint(&params, &field, &a).unwrap();
        let fb = locus_fingerprint(&params, &field, &b).unwrap();
        if fa == fb {
            collisions += 1;
        }
        let b_again = PointSet::from_raw(&field, b.raw().iter().rev().copied().collect(), true).unwrap();
        if locus_fingerprint(&params, &field, &b_again).unwrap() != fb {
            self_mismatch += 1;
        }
        let ra = recover_s_poly(&params, &field, &a).unwrap();
        let rb = recover_s_poly(&params, &field, &b).unwrap();
        if ra == rb || ra != hfl_core::symfun::s_poly(&a).unwrap() {
            recovery_failures += 1;
        }
    }
    Outcome::new(
        self_mismatch == 0 && recovery_failures == 0,
        format!(
            "F_101 (q = {}), 50 pairs: {collisions} degree-signature collisions, {recovery_failures} locus-recovery failures, {self_mismatch} self mismatches",
            field.order()
        ),
    )
}

fn run_cli(args: &[&str], threads: &str) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_hfl"))
        .arg("--threads")
        .arg(threads)
        .args(args)
        .env_remove("HFL_SEED")
        .output()
        .expect("spawn hfl");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let charp = path("charp.json");
    let surrogate = path("surrogate.json");
    let (rc1, _) = run_cli(
        &["construct", "--family", "charp", "--n", "3", "--char", "5", "--k", "3", "--betas", "1,2,3", "--out", &charp],
        "1",
    );
    let (rc2, _) = run_cli(
        &["construct", "--family", "surrogate", "--n", "3", "--char", "3", "--t", "2", "--out", &surrogate],
        "1",
    );
    if rc1 != 0 || rc2 != 0 {
        return Outcome::new(false, format!("construct failed: rc {rc1}, {rc2}"));
    }
    let commands: Vec<(&str, Vec<String>)> = vec![
        (
            "construct",
            vec!["construct", "--family", "charp", "--n", "3", "--char", "5", "--k", "3", "--betas", "1,2,3"],
        ),
        ("relation", vec!["relation", "--params", &charp, "--field", "5", "--points", "0,1,3"]),
        (
            "witness",
            vec!["witness", "--params", &surrogate, "--field", "3^6", "--constraints", "1,2;5,9", "--pattern", "1,0"],
        ),
        ("stats", vec!["stats", "--params", &surrogate, "--field", "3^6", "--trials", "300", "--seed", "11"]),
        ("chebotarev-json", vec!["chebotarev", "--field", "3^6", "--pencil", "abhyankar"]),
        ("chebotarev-csv", vec!["chebotarev", "--field", "3^6", "--pencil", "abhyankar", "--format", "csv"]),
        (
            "chebotarev-sampled",
            vec!["chebotarev", "--field", "10007", "--pencil", "char0", "--samples", "300", "--seed", "4"],
        ),
        ("symcheck", vec!["symcheck", "--field", "11", "--n", "4"]),
        ("fingerprint", vec!["fingerprint", "--params", &charp, "--field", "5", "--a", "0,1", "--b", "2,4"]),
        ("table", vec!["table", "--params", &surrogate, "--field", "3^6", "--first", "9", "--bits", "BITS"]),
    ]
    .into_iter()
    .map(|(name, v)| (name, v.into_iter().map(String::from).collect()))
    .collect();
    let mut failures = Vec::new();
    for (name, args) in &commands {
        let mut runs = Vec::new();
        let bits = path(&format!("{name}.bin"));
        for threads in ["1", "8", "1", "8"] {
            let _ = std::fs::remove_file(&bits);
            let argv: Vec<&str> = args.iter().map(|a| if a == "BITS" { bits.as_str() } else { a.as_str() }).collect();
            let (rc, stdout) = run_cli(&argv, threads);
            let side = if Path::new(&bits).exists() { std::fs::read(&bits).unwrap() } else { Vec::new() };
            runs.push((rc, stdout, side));
        }
        if runs[0].0 != 0 || runs.iter().any(|r| r != &runs[0]) {
            failures.push(*name);
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!("{} invocations x 4 runs (threads 1 and 8), differing: {failures:?}", commands.len()),
    )
}

fn main() {
    let ((marginal, joint), stats_time, stats_in_time) = timed(60, surrogate_stats);
    let stats_note = |o: Outcome| {
        Outcome::new(o.pass && stats_in_time, format!("{}; shared run {stats_time:.2?} (budget 60 s)", o.detail))
    };
    let results = [
        ("1 symmetric-function identities", within(5, symmetric_identities)),
        ("2 S is injective on subsets", within(5, sim_injective)),
        ("3 root counts match brute force", within(10, root_counts)),
        ("4 Abhyankar pencil sits in Alt(5)", within(60, abhyankar_alternating)),
        ("5 char-0 family reduces to even patterns", within(120, char0_even_patterns)),
        ("6 surrogate marginal near 3/5", stats_note(marginal)),
        ("7 pairwise independence", stats_note(joint)),
        ("8 extension witnesses", within(600, extension_witnesses)),
        ("9 foreign-characteristic evaluation", foreign_characteristic()),
        ("10 ramification locus separates sets", fingerprints()),
        ("11 CLI output independent of thread count", cli_determinism()),
    ];

    let mut failed = 0;
    for (name, outcome) in &results {
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {name}: {}", outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
