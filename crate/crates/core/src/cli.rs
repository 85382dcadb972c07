//! The `hfl` command-line front end.
//!
//! Every command writes one JSON document (CSV for histogram tables on
//! request) carrying `"schema": 1`, the tool version and the seed, so a report
//! can be regenerated byte for byte from its arguments.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::construct::{
    char0_family, char0_params, charp_params, surrogate_params, CharPolicy, ConstructionParams, FamilyKind, Pencil,
};
use crate::error::{Error, ErrorKind, Result};
use crate::field::{Field, FieldCtx, FieldSpec};
use crate::galois::{
    chebotarev_compare, cycle_type_histogram, disc_square_audit, fingerprints_distinct, group_classes,
    locus_fingerprint, recover_s_poly, GroupKind, Sweep,
};
use crate::hypergraph::{ExtensionTask, Relation};
use crate::symfun::{sim_injectivity, PointSet};

pub const SCHEMA: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "hfl", version, about = "Random hypergraphs from Galois covers over finite fields")]
pub struct Cli {
    /// Worker threads for parallel sweeps and trials; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and validate a parameter file.
    Construct(ConstructArgs),
    /// Decide whether a set of points is related.
    Relation(RelationArgs),
    /// Search for the smallest vertex realizing a constraint pattern.
    Witness(WitnessArgs),
    /// Sample marginal, joint and witness frequencies.
    Stats(StatsArgs),
    /// Compare specialization cycle types with a permutation group.
    Chebotarev(ChebotarevArgs),
    /// Check that S(a, X) determines a on every subset of a small field.
    Symcheck(SymcheckArgs),
    /// Export the relation on all n-subsets of a support as a bitset file.
    Table(TableArgs),
    /// Compare ramification-locus fingerprints of two (n-1)-sets.
    Fingerprint(FingerprintArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyArg {
    Charp,
    Surrogate,
    Char0,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Working field as `p` or `p^k`.
    #[arg(long)]
    pub field: String,
    /// Defining polynomial coefficients `c0,c1,...,ck` (monic, low degree first).
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u64>>,
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    /// Parameter file written by `construct`.
    #[arg(long)]
    pub params: PathBuf,
    #[command(flatten)]
    pub field: FieldArgs,
    /// Evaluate over a field whose characteristic differs from the one the
    /// parameters were built for.
    #[arg(long)]
    pub allow_foreign_char: bool,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Hypergraph arity.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Characteristic (charp, surrogate).
    #[arg(long = "char")]
    pub characteristic: Option<u64>,
    /// Number of auxiliary primes (charp).
    #[arg(long)]
    pub k: Option<usize>,
    /// Marker residues (charp); defaults to 1..=k.
    #[arg(long, value_delimiter = ',')]
    pub betas: Option<Vec<u64>>,
    /// Middle exponent (surrogate).
    #[arg(long)]
    pub t: Option<u64>,
    /// q = 2^l in characteristic 2 (surrogate).
    #[arg(long, default_value_t = 1)]
    pub l: u32,
    /// Degree override (char0); must be a multiple of 4.
    #[arg(long)]
    pub m: Option<u64>,
    /// Pin a working field into the parameter file.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u64>>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct RelationArgs {
    #[command(flatten)]
    pub params: ParamsArgs,
    /// The n points, as element encodings.
    #[arg(long, value_delimiter = ',', required = true)]
    pub points: Vec<u64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub params: ParamsArgs,
    /// Constraint sets separated by `;`, points by `,` (for example `0,1;2,5`).
    #[arg(long, default_value = "")]
    pub constraints: String,
    /// One 0/1 entry per constraint.
    #[arg(long, value_delimiter = ',')]
    pub pattern: Vec<u8>,
    /// Scan at most this many candidates (required past 10^6 elements).
    #[arg(long)]
    pub scan: Option<u64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub params: ParamsArgs,
    /// Constraints per trial.
    #[arg(long, default_value_t = 2)]
    pub constraints: usize,
    #[arg(long, default_value_t = 2000)]
    pub trials: u64,
    #[arg(long, env = "HFL_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PencilArg {
    /// T^(t+q) − yT^t + 1.
    Abhyankar,
    /// yT^(t+q) − T^t + y.
    Inverted,
    /// The integer family of degree 4(n−1)!, reduced.
    Char0,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GroupArg {
    Alt,
    Sym,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct ChebotarevArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Use the family of a parameter file (in the variable u).
    #[arg(long, conflicts_with = "pencil")]
    pub params: Option<PathBuf>,
    /// Use a built-in family.
    #[arg(long, value_enum)]
    pub pencil: Option<PencilArg>,
    #[arg(long, default_value_t = 2)]
    pub t: u64,
    #[arg(long, default_value_t = 3)]
    pub q: u64,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "alt")]
    pub group: GroupArg,
    /// Samples drawn when the field is too large for an exhaustive sweep.
    #[arg(long, default_value_t = 2000)]
    pub samples: u64,
    #[arg(long, env = "HFL_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.08)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SymcheckArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub params: ParamsArgs,
    /// Support points; defaults to the first `--first` elements.
    #[arg(long, value_delimiter = ',', conflicts_with = "first")]
    pub support: Option<Vec<u64>>,
    #[arg(long)]
    pub first: Option<u64>,
    /// Bitset output file.
    #[arg(long)]
    pub bits: PathBuf,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct FingerprintArgs {
    #[command(flatten)]
    pub params: ParamsArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    pub a: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub b: Vec<u64>,
    #[command(flatten)]
    pub out: OutArgs,
}

/// Parses `p` or `p^k`.
pub fn parse_field_spec(s: &str, modulus: Option<Vec<u64>>) -> Result<FieldSpec> {
    let bad = || Error::Parse(format!("field must be written `p` or `p^k`, got `{s}`"));
    let (p, k) = match s.trim().split_once('^') {
        Some((p, k)) => (p.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?),
        None => (s.trim().parse().map_err(|_| bad())?, 1),
    };
    Ok(FieldSpec { p, k, modulus })
}

impl FieldArgs {
    fn build(&self, pinned: Option<&[u64]>) -> Result<Field> {
        let mut spec = parse_field_spec(&self.field, self.modulus.clone())?;
        if let Some(pinned) = pinned {
            match &spec.modulus {
                Some(m) if m.as_slice() != pinned => {
                    return Err(Error::hypothesis("--modulus differs from the modulus pinned in the parameter file"))
                }
                None if pinned.len() == spec.k as usize + 1 => spec.modulus = Some(pinned.to_vec()),
                _ => {}
            }
        }
        FieldCtx::from_spec(&spec)
    }
}

impl ParamsArgs {
    fn load(&self) -> Result<(ConstructionParams, Field, Relation)> {
        let params = load_params(&self.params)?;
        let field = self.field.build(params.modulus.as_deref())?;
        let policy = if self.allow_foreign_char { CharPolicy::Any } else { CharPolicy::Matching };
        let relation = Relation::with_policy(&params, &field, policy)?;
        Ok((params, field, relation))
    }
}

pub fn load_params(path: &Path) -> Result<ConstructionParams> {
    ConstructionParams::from_json(&fs::read_to_string(path).map_err(|e| at_path(path, e))?)
}

/// Common envelope of every report.
fn envelope(command: &str, seed: Option<u64>, field: Option<&Field>, params: Option<&ConstructionParams>) -> Value {
    json!({
        "schema": SCHEMA,
        "tool": "hfl",
        "version": VERSION,
        "command": command,
        "seed": seed,
        "field": field.map(|f| f.spec()),
        "params": params,
    })
}

fn with_body(mut head: Value, body: impl Serialize) -> Result<Value> {
    let body = serde_json::to_value(body)?;
    if let (Some(h), Value::Object(b)) = (head.as_object_mut(), body) {
        h.extend(b);
    }
    Ok(head)
}

fn emit(out: &OutArgs, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &out.out {
        Some(path) => fs::write(path, text).map_err(|e| at_path(path, e))?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_json(out: &OutArgs, value: &Value, stdout: &mut dyn Write) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(out, &text, stdout)
}

fn point_set(field: &Field, pts: &[u64]) -> Result<PointSet> {
    PointSet::from_raw(field, pts.to_vec(), true)
}

fn cmd_construct(args: &ConstructArgs, stdout: &mut dyn Write) -> Result<()> {
    let need_char = || args.characteristic.ok_or_else(|| Error::hypothesis("--char is required for this family"));
    let mut params = match args.family {
        FamilyArg::Charp => {
            let p = need_char()?;
            let k = args.k.ok_or_else(|| Error::hypothesis("--k is required for the charp family"))?;
            let betas = args.betas.clone().unwrap_or_else(|| (1..=k as u64).collect());
            charp_params(args.n, p, k, &betas)?
        }
        FamilyArg::Surrogate => {
            let t = args.t.ok_or_else(|| Error::hypothesis("--t is required for the surrogate family"))?;
            surrogate_params(args.n, need_char()?, t, args.l)?
        }
        FamilyArg::Char0 => char0_params(args.n, args.m)?,
    };
    if let Some(f) = &args.field {
        let field = FieldCtx::from_spec(&parse_field_spec(f, args.modulus.clone())?)?;
        if params.family != FamilyKind::Char0 && field.characteristic() != params.p {
            return Err(Error::hypothesis(format!(
                "the pinned field has characteristic {} but the parameters are for characteristic {}",
                field.characteristic(),
                params.p
            )));
        }
        params = params.with_field(&field);
    }
    let mut text = params.to_json()?;
    text.push('\n');
    emit(&args.out, &text, stdout)
}

fn cmd_relation(args: &RelationArgs, stdout: &mut dyn Write) -> Result<()> {
    let (params, field, rel) = args.params.load()?;
    let e = rel.evaluate(&point_set(&field, &args.points)?)?;
    let head = envelope("relation", None, Some(&field), Some(&params));
    let body = json!({ "points": args.points, "in_R": e.in_r, "degenerate": e.degenerate });
    emit_json(&args.out, &with_body(head, body)?, stdout)
}

fn parse_constraints(s: &str) -> Result<Vec<Vec<u64>>> {
    s.split(';')
        .map(str::trim)
        .filter(|c| !c.is_empty())
        .map(|c| {
            c.split(',')
                .map(|x| x.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad point `{x}` in constraints"))))
                .collect()
        })
        .collect()
}

fn cmd_witness(args: &WitnessArgs, stdout: &mut dyn Write) -> Result<()> {
    let (params, field, rel) = args.params.load()?;
    let raw = parse_constraints(&args.constraints)?;
    let constraints = raw.iter().map(|c| point_set(&field, c)).collect::<Result<Vec<_>>>()?;
    if args.pattern.iter().any(|&b| b > 1) {
        return Err(Error::Parse("pattern entries must be 0 or 1".into()));
    }
    let pattern: Vec<bool> = args.pattern.iter().map(|&b| b == 1).collect();
    let task = ExtensionTask::new(constraints, pattern.clone())?;
    let witness = rel.witness(&task, args.scan)?;
    let replay = match witness {
        Some(c) => Some(
            task.constraints().iter().map(|a| rel.holds(&a.with_point(c.value())?)).collect::<Result<Vec<bool>>>()?,
        ),
        None => None,
    };
    let head = envelope("witness", None, Some(&field), Some(&params));
    let body = json!({
        "constraints": raw,
        "pattern": pattern,
        "witness": witness.map(|c| c.value()),
        "replay": replay,
        "replay_ok": replay.as_ref().map(|r| r == &pattern),
    });
    emit_json(&args.out, &with_body(head, body)?, stdout)
}

fn cmd_stats(args: &StatsArgs, stdout: &mut dyn Write) -> Result<()> {
    let (params, field, rel) = args.params.load()?;
    let report = rel.stats(args.constraints, args.trials, args.seed)?;
    let head = envelope("stats", Some(args.seed), Some(&field), Some(&params));
    emit_json(&args.out, &with_body(head, report)?, stdout)
}

fn cmd_chebotarev(args: &ChebotarevArgs, stdout: &mut dyn Write) -> Result<()> {
    let (params, field) = match &args.params {
        Some(path) => {
            let params = load_params(path)?;
            let field = args.field.build(params.modulus.as_deref())?;
            (Some(params), field)
        }
        None => (None, args.field.build(None)?),
    };
    let pencil = match (&params, args.pencil) {
        (Some(p), _) => Pencil::for_params(p, &field)?,
        (None, Some(PencilArg::Abhyankar)) | (None, None) => Pencil::abhyankar(&field, args.t, args.q),
        (None, Some(PencilArg::Inverted)) => Pencil::inverted_abhyankar(&field, args.t, args.q),
        (None, Some(PencilArg::Char0)) => {
            let family = char0_family(args.n)?;
            let m = family.terms.keys().map(|&(t, _)| t).max().unwrap_or(0);
            if m % field.characteristic() == 0 || (m - 1) % field.characteristic() == 0 {
                return Err(Error::hypothesis(format!(
                    "degenerate reduction: characteristic {} divides m(m - 1) with m = {m}",
                    field.characteristic()
                )));
            }
            Pencil::from_int_poly(&field, &family)
        }
    };
    let kind = match args.group {
        GroupArg::Alt => GroupKind::Alt,
        GroupArg::Sym => GroupKind::Sym,
    };
    let sweep = Sweep::auto(&field, args.samples, args.seed);
    let hist = cycle_type_histogram(&pencil, sweep)?;
    let table = group_classes(kind, pencil.t_degree())?;
    let report = chebotarev_compare(&hist, &table, args.tol)?;
    if args.format == Format::Csv {
        return emit(&args.out, &report.to_csv()?, stdout);
    }
    let disc = if field.characteristic() == 2 { None } else { Some(disc_square_audit(&pencil, sweep)?) };
    let seed = matches!(sweep, Sweep::Sample { .. }).then_some(args.seed);
    let head = envelope("chebotarev", seed, Some(&field), params.as_ref());
    let body = json!({
        "sweep": sweep.describe(),
        "histogram": hist,
        "comparison": report,
        "disc_audit": disc,
    });
    emit_json(&args.out, &with_body(head, body)?, stdout)
}

fn cmd_symcheck(args: &SymcheckArgs, stdout: &mut dyn Write) -> Result<()> {
    let field = args.field.build(None)?;
    let check = sim_injectivity(&field, args.n)?;
    let head = with_body(envelope("symcheck", None, Some(&field), None), json!({ "n": args.n }))?;
    emit_json(&args.out, &with_body(head, check)?, stdout)
}

fn cmd_table(args: &TableArgs, stdout: &mut dyn Write) -> Result<()> {
    let (params, field, rel) = args.params.load()?;
    let support: Vec<u64> = match (&args.support, args.first) {
        (Some(s), _) => s.clone(),
        (None, Some(k)) => (0..k.min(field.order())).collect(),
        (None, None) => return Err(Error::hypothesis("give --support or --first")),
    };
    let table = rel.table(&support)?;
    let mut file = fs::File::create(&args.bits).map_err(|e| at_path(&args.bits, e))?;
    table.write_to(&mut file)?;
    file.flush()?;
    let head = envelope("table", None, Some(&field), Some(&params));
    let body = json!({
        "support": support,
        "bits": table.len(),
        "ones": table.count_ones(),
        "path": args.bits.display().to_string(),
    });
    emit_json(&args.out, &with_body(head, body)?, stdout)
}

fn cmd_fingerprint(args: &FingerprintArgs, stdout: &mut dyn Write) -> Result<()> {
    let params = load_params(&args.params.params)?;
    let field = args.params.field.build(params.modulus.as_deref())?;
    let a = point_set(&field, &args.a)?;
    let b = point_set(&field, &args.b)?;
    let head = envelope("fingerprint", None, Some(&field), Some(&params));
    let body = json!({
        "a": args.a,
        "b": args.b,
        "fingerprint_a": locus_fingerprint(&params, &field, &a)?,
        "fingerprint_b": locus_fingerprint(&params, &field, &b)?,
        "distinct": fingerprints_distinct(&params, &field, &a, &b)?,
        "recovered_distinct": recover_s_poly(&params, &field, &a)? != recover_s_poly(&params, &field, &b)?,
        "field_size": field.order(),
    });
    emit_json(&args.out, &with_body(head, body)?, stdout)
}

/// Runs a parsed command, writing the report to `stdout` unless `--out` is given.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let go = |stdout: &mut dyn Write| match &cli.command {
        Command::Construct(a) => cmd_construct(a, stdout),
        Command::Relation(a) => cmd_relation(a, stdout),
        Command::Witness(a) => cmd_witness(a, stdout),
        Command::Stats(a) => cmd_stats(a, stdout),
        Command::Chebotarev(a) => cmd_chebotarev(a, stdout),
        Command::Symcheck(a) => cmd_symcheck(a, stdout),
        Command::Table(a) => cmd_table(a, stdout),
        Command::Fingerprint(a) => cmd_fingerprint(a, stdout),
    };
    let mut buf: Vec<u8> = Vec::new();
    match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::hypothesis(format!("cannot start {n} threads: {e}")))?
            .install(|| go(&mut buf))?,
        None => go(&mut buf)?,
    }
    stdout.write_all(&buf)?;
    Ok(())
}

fn at_path(path: &Path, e: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

pub fn exit_code(e: &Error) -> i32 {
    match e.kind() {
        ErrorKind::Hypothesis => 2,
        ErrorKind::Budget => 3,
        ErrorKind::Io => 4,
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    match run(&cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("hfl: {e}");
            exit_code(&e)
        }
    }
}
