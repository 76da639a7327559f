//! Command-line frontend.
//!
//! Every subcommand prints one JSON report
//!
//! ```text
//! {"schema": "orbitkit/1", "command": ..., "decision": "yes"|"no"|"unknown",
//!  "witness": ..., "certificate": ..., "bound": ...}
//! ```
//!
//! Exit codes: 0 decided, 1 verification failed, 2 unknown (bound
//! exhausted), 3 input error, 4 capacity exceeded.
//!
//! With `--verify REPORT` the query on the command line is re-checked
//! against a previously emitted report: a `yes` witness is verified
//! exactly, other verdicts are re-derived.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::decision::Decision;
use crate::error::{Error, Result};
use crate::json::JsonInt;
use crate::extension::{cp_znbyz_with, CpWitness, GElement, ZnByZ};
use crate::matrixorbit::{orbit_coset_decide, power, OrbitConfig, OrbitQuery, OrbitWitness};
use crate::stallings::StallingsGraph;
use crate::whitehead::{
    aut_orbit_decide, cyclic_od_bounded, is_primitive, sod_aut_bounded, whitehead_minimize, Automorphism,
    CyclicOdWitness, MoveSequence, SodWitness,
};
use crate::words::{conjugacy_decide, Word};
use crate::zlattice::{hnf, sod_gl, snf, tcp_abelian, Hnf, IntMatrix, IntVector, Lattice, SodGlWitness, Snf};
use crate::Refutation;

pub const SCHEMA: &str = "orbitkit/1";

pub mod exit {
    pub const DECIDED: i32 = 0;
    pub const VERIFY_FAILED: i32 = 1;
    pub const UNKNOWN: i32 = 2;
    pub const INPUT_ERROR: i32 = 3;
    pub const CAPACITY: i32 = 4;
}

#[derive(Parser, Debug)]
#[command(name = "orbitkit", version, about = "Orbit, conjugacy and membership deciders with checkable certificates")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Re-check a previously emitted report (path, @path, or - for stdin).
    #[arg(long, global = true, value_name = "REPORT")]
    verify: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Conjugacy in F_n: find x with x⁻¹·u·x = v.
    FgConj(PairArgs),
    /// Aut(F_n)-orbit equality via Whitehead's algorithm.
    FgOrbit(PairArgs),
    /// Is the word part of a free basis?
    FgPrimitive(SingleWordArgs),
    /// Bounded search for an automorphic image of x inside a subgroup.
    FgSod(FgSodArgs),
    /// Bounded search for k with u·φ^k conjugate to v.
    FgCyclicOd(FgCyclicOdArgs),
    /// Subgroup membership via the Stallings graph.
    StallingsMember(StallingsMemberArgs),
    /// Free basis of a finitely generated subgroup.
    StallingsBasis(StallingsBasisArgs),
    /// Is some GL_n(Z)-image of x in the lattice?
    AbSodGl(AbSodGlArgs),
    /// Twisted conjugacy in Z^n: solve x·(I − A) = v − u.
    AbTcp(AbTcpArgs),
    /// Hermite normal form U·M = H.
    Hnf(MatrixArgs),
    /// Smith normal form U·M·V = D.
    Snf(MatrixArgs),
    /// Is x·A^k − u in the lattice for some integer k?
    OrbitDecide(OrbitDecideArgs),
    /// Is x·A^k = y for some integer k?
    OrbitEqual(OrbitEqualArgs),
    /// Conjugacy in Z^n ⋊_A Z.
    ExtCp(ExtCpArgs),
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long)]
    rank: usize,
    #[arg(allow_hyphen_values = true)]
    u: String,
    #[arg(allow_hyphen_values = true)]
    v: String,
}

#[derive(Args, Debug)]
struct SingleWordArgs {
    #[arg(long)]
    rank: usize,
    #[arg(allow_hyphen_values = true)]
    word: String,
}

#[derive(Args, Debug)]
struct FgSodArgs {
    #[arg(long)]
    rank: usize,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Comma-separated subgroup generators, or @file with a JSON list.
    #[arg(long, allow_hyphen_values = true)]
    gens: String,
    /// Longest subgroup element searched.
    #[arg(long, default_value_t = 8)]
    max_length: usize,
}

#[derive(Args, Debug)]
struct FgCyclicOdArgs {
    #[arg(long)]
    rank: usize,
    /// Images of the generators under φ, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    phi: String,
    /// Images under φ⁻¹; enables negative exponents.
    #[arg(long, allow_hyphen_values = true)]
    phi_inverse: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    max_exponent: u64,
    #[arg(allow_hyphen_values = true)]
    u: String,
    #[arg(allow_hyphen_values = true)]
    v: String,
}

#[derive(Args, Debug)]
struct StallingsMemberArgs {
    #[arg(long)]
    rank: usize,
    #[arg(long, allow_hyphen_values = true)]
    gens: String,
    #[arg(allow_hyphen_values = true)]
    word: String,
}

#[derive(Args, Debug)]
struct StallingsBasisArgs {
    #[arg(long)]
    rank: usize,
    #[arg(long, allow_hyphen_values = true)]
    gens: String,
}

#[derive(Args, Debug)]
struct AbSodGlArgs {
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Lattice generators as rows, "a,b;c,d".
    #[arg(long, allow_hyphen_values = true)]
    gens: String,
}

#[derive(Args, Debug)]
struct AbTcpArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    u: String,
    #[arg(long, allow_hyphen_values = true)]
    v: String,
}

#[derive(Args, Debug)]
struct MatrixArgs {
    #[arg(long, allow_hyphen_values = true)]
    m: String,
}

#[derive(Args, Debug, Clone)]
struct OrbitFlags {
    #[arg(long, default_value_t = 10_000)]
    max_exponent: u64,
    /// Moduli for the residue sieve, comma-separated.
    #[arg(long, default_value = "4,9,5,7,11")]
    moduli: String,
    /// Largest period computed modulo an integer.
    #[arg(long, default_value_t = crate::zlattice::DEFAULT_ORDER_CAP)]
    order_cap: u64,
    /// Read A in the column-vector convention (x ↦ A·x) and transpose it.
    #[arg(long)]
    column_vectors: bool,
}

impl OrbitFlags {
    fn config(&self) -> Result<OrbitConfig> {
        let moduli = split_list(&self.moduli)
            .map(|t| t.parse::<u64>().map_err(|_| Error::parse(t, "expected a positive modulus")))
            .collect::<Result<Vec<_>>>()?;
        if self.max_exponent == 0 || self.order_cap == 0 {
            return Err(Error::Invalid("bounds must be positive".into()));
        }
        Ok(OrbitConfig { max_exponent: self.max_exponent, moduli, order_cap: self.order_cap })
    }

    fn orient(&self, a: IntMatrix) -> IntMatrix {
        if self.column_vectors {
            a.transpose()
        } else {
            a
        }
    }
}

#[derive(Args, Debug)]
struct OrbitDecideArgs {
    /// Whole query as @file JSON {"A", "x", "u", "gens"}.
    #[arg(long, conflicts_with_all = ["a", "x", "u", "gens"])]
    query: Option<String>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "query")]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "query")]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "query")]
    u: Option<String>,
    /// Lattice generators as rows; omitted means the zero lattice.
    #[arg(long, allow_hyphen_values = true)]
    gens: Option<String>,
    #[command(flatten)]
    orbit: OrbitFlags,
}

#[derive(Args, Debug)]
struct OrbitEqualArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, allow_hyphen_values = true)]
    y: String,
    #[command(flatten)]
    orbit: OrbitFlags,
}

#[derive(Args, Debug)]
struct ExtCpArgs {
    /// Whole query as @file JSON {"group": {"n", "A"}, "g1": {"u", "p"}, "g2": {"u", "p"}}.
    #[arg(long, conflicts_with_all = ["a", "u1", "p1", "u2", "p2"])]
    query: Option<String>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "query")]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "query")]
    u1: Option<String>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "query")]
    p1: Option<i64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "query")]
    u2: Option<String>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "query")]
    p2: Option<i64>,
    #[command(flatten)]
    orbit: OrbitFlags,
}

/// The emitted JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub decision: String,
    pub witness: Value,
    pub certificate: Value,
    pub bound: Option<u64>,
}

struct Outcome {
    decision: &'static str,
    witness: Value,
    certificate: Value,
    bound: Option<u64>,
}

impl Outcome {
    fn from_decision<W>(d: &Decision<W>, witness: impl Fn(&W) -> Value, certificate: impl Fn(&W) -> Value) -> Self {
        match d {
            Decision::Yes(w) => Outcome { decision: "yes", witness: witness(w), certificate: certificate(w), bound: None },
            Decision::No(r) => Outcome { decision: "no", witness: Value::Null, certificate: to_value(r), bound: None },
            Decision::Unknown { bound } => {
                Outcome { decision: "unknown", witness: Value::Null, certificate: Value::Null, bound: Some(*bound) }
            }
        }
    }

    fn computed(witness: Value, certificate: Value) -> Self {
        Outcome { decision: "yes", witness, certificate, bound: None }
    }
}

enum Step {
    Emit(Outcome),
    Verified(std::result::Result<(), String>),
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

/// Captured result of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the CLI on `args` (including the program name), printing the
/// report, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let ex = execute(args);
    print!("{}", ex.stdout);
    eprint!("{}", ex.stderr);
    ex.code
}

/// Like [`run`] but captures stdout and stderr instead of printing.
pub fn execute<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut ex = Execution { code: exit::DECIDED, stdout: String::new(), stderr: String::new() };
    ex.code = execute_into(args, &mut ex);
    ex
}

fn execute_into<I, T>(args: I, ex: &mut Execution) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    ex.stdout = text;
                    exit::DECIDED
                }
                _ => {
                    ex.stderr = text;
                    exit::INPUT_ERROR
                }
            };
        }
    };
    let name = command_name(&cli.command);
    let report = match cli.verify.as_deref().map(read_report).transpose() {
        Ok(r) => r,
        Err(e) => return fail(&e, ex),
    };
    if let Some(r) = &report {
        if r.schema != SCHEMA || r.command != name {
            ex.stderr = format!("orbitkit: report is for `{}` ({}), not `{name}` ({SCHEMA})\n", r.command, r.schema);
            return exit::VERIFY_FAILED;
        }
    }
    match dispatch(&cli.command, report.as_ref()) {
        Ok(Step::Emit(out)) => {
            let code = if out.decision == "unknown" { exit::UNKNOWN } else { exit::DECIDED };
            let report = Report {
                schema: SCHEMA.into(),
                command: name.into(),
                decision: out.decision.into(),
                witness: out.witness,
                certificate: out.certificate,
                bound: out.bound,
            };
            ex.stdout = render_report(&report, cli.format);
            code
        }
        Ok(Step::Verified(result)) => {
            let ok = result.is_ok();
            ex.stdout = match cli.format {
                Format::Json => {
                    let detail = result.err();
                    format!("{}\n", json!({"schema": SCHEMA, "command": name, "verified": ok, "detail": detail}))
                }
                Format::Text => match result {
                    Ok(()) => "verified\n".to_string(),
                    Err(why) => format!("verification failed: {why}\n"),
                },
            };
            if ok {
                exit::DECIDED
            } else {
                exit::VERIFY_FAILED
            }
        }
        Err(e) => fail(&e, ex),
    }
}

fn fail(e: &Error, ex: &mut Execution) -> i32 {
    ex.stderr = format!("orbitkit: error: {e}\n");
    if e.is_capacity() {
        exit::CAPACITY
    } else {
        exit::INPUT_ERROR
    }
}

fn render_report(r: &Report, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string(r).expect("report serializes")),
        Format::Text => {
            let mut out = format!("decision: {}\n", r.decision);
            if !r.witness.is_null() {
                out += &format!("witness: {}\n", r.witness);
            }
            if !r.certificate.is_null() {
                out += &format!("certificate: {}\n", r.certificate);
            }
            if let Some(b) = r.bound {
                out += &format!("bound: {b}\n");
            }
            out
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::FgConj(_) => "fg-conj",
        Command::FgOrbit(_) => "fg-orbit",
        Command::FgPrimitive(_) => "fg-primitive",
        Command::FgSod(_) => "fg-sod",
        Command::FgCyclicOd(_) => "fg-cyclic-od",
        Command::StallingsMember(_) => "stallings-member",
        Command::StallingsBasis(_) => "stallings-basis",
        Command::AbSodGl(_) => "ab-sod-gl",
        Command::AbTcp(_) => "ab-tcp",
        Command::Hnf(_) => "hnf",
        Command::Snf(_) => "snf",
        Command::OrbitDecide(_) => "orbit-decide",
        Command::OrbitEqual(_) => "orbit-equal",
        Command::ExtCp(_) => "ext-cp",
    }
}

fn dispatch(c: &Command, report: Option<&Report>) -> Result<Step> {
    match c {
        Command::FgConj(a) => fg_conj(a, report),
        Command::FgOrbit(a) => fg_orbit(a, report),
        Command::FgPrimitive(a) => fg_primitive(a, report),
        Command::FgSod(a) => fg_sod(a, report),
        Command::FgCyclicOd(a) => fg_cyclic_od(a, report),
        Command::StallingsMember(a) => stallings_member(a, report),
        Command::StallingsBasis(a) => stallings_basis(a, report),
        Command::AbSodGl(a) => ab_sod_gl(a, report),
        Command::AbTcp(a) => ab_tcp(a, report),
        Command::Hnf(a) => hnf_cmd(a, report),
        Command::Snf(a) => snf_cmd(a, report),
        Command::OrbitDecide(a) => orbit_decide(a, report),
        Command::OrbitEqual(a) => orbit_equal(a, report),
        Command::ExtCp(a) => ext_cp(a, report),
    }
}

/// Verifies a `yes` witness with `check`; re-derives any other verdict.
fn settle<W: DeserializeOwned>(
    report: Option<&Report>,
    check: impl FnOnce(W, &Value) -> std::result::Result<(), String>,
    decide: impl FnOnce() -> Result<Outcome>,
) -> Result<Step> {
    match report {
        Some(r) if r.decision == "yes" => {
            let result = serde_json::from_value::<W>(r.witness.clone())
                .map_err(|e| format!("malformed witness: {e}"))
                .and_then(|w| check(w, &r.certificate));
            Ok(Step::Verified(result))
        }
        Some(r) => {
            let out = decide()?;
            let same = out.decision == r.decision && out.certificate == r.certificate && out.bound == r.bound;
            Ok(Step::Verified(if same {
                Ok(())
            } else {
                Err(format!("re-derived verdict `{}` does not match the report", out.decision))
            }))
        }
        None => Ok(Step::Emit(decide()?)),
    }
}

fn expect(cond: bool, why: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn soft<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

// ---- input parsing ----

fn read_source(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Error::parse("-", e.to_string()))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Error::parse(path, e.to_string()))
}

fn read_json<T: DeserializeOwned>(path: &str) -> Result<T> {
    let text = read_source(path)?;
    serde_json::from_str(&text).map_err(|e| Error::parse(format!("@{path}"), e.to_string()))
}

fn read_report(path: &str) -> Result<Report> {
    read_json(path.strip_prefix('@').unwrap_or(path))
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

pub fn parse_int(token: &str) -> Result<BigInt> {
    token.trim().parse::<BigInt>().map_err(|_| Error::parse(token.trim(), "expected an integer"))
}

/// `"1,-2,3"` or `@file` holding a JSON array.
pub fn parse_vector(s: &str) -> Result<IntVector> {
    if let Some(path) = s.strip_prefix('@') {
        return read_json(path);
    }
    if s.trim().is_empty() {
        return Err(Error::parse(s, "empty vector"));
    }
    Ok(IntVector::new(s.split(',').map(parse_int).collect::<Result<_>>()?))
}

/// `"a,b;c,d"` (rows separated by `;`) or `@file` holding a JSON array of
/// rows. `cols` fixes the width when there may be no rows.
pub fn parse_matrix(s: &str, cols: Option<usize>) -> Result<IntMatrix> {
    let rows: Vec<Vec<BigInt>> = if let Some(path) = s.strip_prefix('@') {
        let m: IntMatrix = read_json(path)?;
        m.to_rows()
    } else if s.trim().is_empty() {
        Vec::new()
    } else {
        s.split(';').map(|r| parse_vector(r).map(IntVector::into_entries)).collect::<Result<_>>()?
    };
    if let Some(bad) = rows.iter().find(|r| r.len() != rows[0].len()) {
        return Err(Error::parse(s, format!("row of length {} differs from the first row", bad.len())));
    }
    match cols {
        Some(c) => IntMatrix::from_rows_with_cols(rows, c),
        None => IntMatrix::from_rows(rows),
    }
}

pub fn parse_words(s: &str, rank: usize) -> Result<Vec<Word>> {
    if let Some(path) = s.strip_prefix('@') {
        let texts: Vec<String> = read_json(path)?;
        return texts.iter().map(|t| Word::parse(t, rank)).collect();
    }
    split_list(s).map(|t| Word::parse(t, rank)).collect()
}

fn parse_word(s: &str, rank: usize) -> Result<Word> {
    Word::parse(s.trim(), rank)
}

fn word_from(text: &str, rank: usize) -> std::result::Result<Word, String> {
    soft(Word::parse(text, rank))
}

// ---- free groups ----

fn fg_conj(a: &PairArgs, report: Option<&Report>) -> Result<Step> {
    let u = parse_word(&a.u, a.rank)?;
    let v = parse_word(&a.v, a.rank)?;
    settle(
        report,
        |x: String, _| {
            let x = word_from(&x, a.rank)?;
            let got = u.conjugate_by(&x);
            expect(got == v, || format!("x⁻¹·u·x = {got}, expected {v}"))
        },
        || {
            let d = conjugacy_decide(&u, &v)?;
            Ok(Outcome::from_decision(&d, to_value, |x| json!({"product": u.conjugate_by(x)})))
        },
    )
}

fn automorphism_value(seq: &MoveSequence, rank: usize) -> Value {
    match seq.to_automorphism(rank) {
        Ok(phi) => json!({"images": phi.images()}),
        Err(_) => Value::Null,
    }
}

fn fg_orbit(a: &PairArgs, report: Option<&Report>) -> Result<Step> {
    let u = parse_word(&a.u, a.rank)?;
    let v = parse_word(&a.v, a.rank)?;
    settle(
        report,
        |seq: MoveSequence, _| {
            let got = soft(seq.apply(&u))?;
            expect(got == v, || format!("moves send u to {got}, expected {v}"))
        },
        || {
            let d = aut_orbit_decide(&u, &v)?;
            Ok(Outcome::from_decision(&d, to_value, |s| automorphism_value(s, a.rank)))
        },
    )
}

#[derive(Serialize, Deserialize)]
struct PrimitiveWitness {
    moves: MoveSequence,
    image: String,
}

fn fg_primitive(a: &SingleWordArgs, report: Option<&Report>) -> Result<Step> {
    let w = parse_word(&a.word, a.rank)?;
    settle(
        report,
        |pw: PrimitiveWitness, _| {
            let got = soft(pw.moves.apply(&w))?;
            expect(got.len() == 1, || format!("moves send the word to {got}, not a basis letter"))
        },
        || {
            let (min, moves) = whitehead_minimize(&w)?;
            let d = if is_primitive(&w)? {
                Decision::Yes(PrimitiveWitness { image: min.to_string(), moves })
            } else {
                Decision::No(Refutation::InvariantMismatch {
                    invariant: format!("minimal cyclic length {} is not 1", min.len()),
                })
            };
            Ok(Outcome::from_decision(&d, to_value, |pw| automorphism_value(&pw.moves, a.rank)))
        },
    )
}

#[derive(Deserialize)]
struct SodWitnessJson {
    h: String,
    moves: MoveSequence,
}

fn fg_sod(a: &FgSodArgs, report: Option<&Report>) -> Result<Step> {
    let x = parse_word(&a.x, a.rank)?;
    let gens = parse_words(&a.gens, a.rank)?;
    let graph = StallingsGraph::build(a.rank, &gens)?;
    settle(
        report,
        |w: SodWitnessJson, _| {
            let h = word_from(&w.h, a.rank)?;
            expect(graph.contains(&h), || format!("{h} is not in the subgroup"))?;
            let got = soft(w.moves.apply(&x))?;
            expect(got == h, || format!("moves send x to {got}, expected {h}"))
        },
        || {
            let d = sod_aut_bounded(&x, &graph, a.max_length)?;
            Ok(Outcome::from_decision(&d, to_value, |w: &SodWitness| automorphism_value(&w.moves, a.rank)))
        },
    )
}

#[derive(Deserialize)]
struct CyclicWitnessJson {
    k: i64,
    conjugator: String,
}

fn fg_cyclic_od(a: &FgCyclicOdArgs, report: Option<&Report>) -> Result<Step> {
    let images: Vec<String> = split_list(&a.phi).map(String::from).collect();
    let inverse: Option<Vec<String>> = a.phi_inverse.as_deref().map(|s| split_list(s).map(String::from).collect());
    let refs: Vec<&str> = images.iter().map(String::as_str).collect();
    let inv_refs: Option<Vec<&str>> = inverse.as_ref().map(|v| v.iter().map(String::as_str).collect());
    let phi = Automorphism::parse(&refs, inv_refs.as_deref())?;
    if phi.rank() != a.rank {
        return Err(Error::RankMismatch { expected: a.rank, found: phi.rank() });
    }
    let u = parse_word(&a.u, a.rank)?;
    let v = parse_word(&a.v, a.rank)?;
    settle(
        report,
        |w: CyclicWitnessJson, _| {
            let step = if w.k >= 0 {
                phi.clone()
            } else {
                phi.inverse().ok_or("negative exponent without inverse images")?
            };
            let mut image = u.clone();
            for _ in 0..w.k.unsigned_abs() {
                image = soft(step.apply(&image))?;
            }
            let x = word_from(&w.conjugator, a.rank)?;
            let got = image.conjugate_by(&x);
            expect(got == v, || format!("x⁻¹·(u·φ^{})·x = {got}, expected {v}", w.k))
        },
        || {
            let out = cyclic_od_bounded(&phi, &u, &v, a.max_exponent)?;
            let nonneg = out.nonnegative_only;
            let mut o = Outcome::from_decision(&out.decision, to_value, |_: &CyclicOdWitness| {
                json!({"nonnegative_only": nonneg})
            });
            if out.decision.is_unknown() {
                o.certificate = json!({"nonnegative_only": nonneg});
            }
            Ok(o)
        },
    )
}

fn stallings_member(a: &StallingsMemberArgs, report: Option<&Report>) -> Result<Step> {
    let gens = parse_words(&a.gens, a.rank)?;
    let w = parse_word(&a.word, a.rank)?;
    let graph = StallingsGraph::build(a.rank, &gens)?;
    settle(
        report,
        |path: Vec<usize>, _| {
            expect(path.len() == w.len() + 1, || "path length does not match the word".into())?;
            expect(path[0] == graph.basepoint() && path[w.len()] == graph.basepoint(), || {
                "path is not closed at the basepoint".into()
            })?;
            for (i, &l) in w.letters().iter().enumerate() {
                expect(path[i] < graph.vertex_count() && graph.step(path[i], l) == Some(path[i + 1]), || {
                    format!("no edge {} --{l}--> {}", path[i], path[i + 1])
                })?;
            }
            Ok(())
        },
        || {
            let d = graph.member(&w)?;
            Ok(Outcome::from_decision(&d, to_value, |_| to_value(&graph.to_json_form())))
        },
    )
}

#[derive(Serialize, Deserialize)]
struct BasisWitness {
    basis: Vec<String>,
    rank: usize,
}

fn stallings_basis(a: &StallingsBasisArgs, report: Option<&Report>) -> Result<Step> {
    let gens = parse_words(&a.gens, a.rank)?;
    let graph = StallingsGraph::build(a.rank, &gens)?;
    settle(
        report,
        |w: BasisWitness, _| {
            let basis = w.basis.iter().map(|t| word_from(t, a.rank)).collect::<std::result::Result<Vec<_>, _>>()?;
            let other = soft(StallingsGraph::build(a.rank, &basis))?;
            expect(other == graph, || "basis spans a different subgroup".into())?;
            let free_rank = graph.edge_count() + 1 - graph.vertex_count();
            expect(basis.len() == free_rank && w.rank == free_rank, || {
                format!("{} elements for a subgroup of rank {free_rank}", basis.len())
            })
        },
        || {
            let basis: Vec<String> = graph.basis().iter().map(Word::to_string).collect();
            let rank = basis.len();
            Ok(Outcome::computed(to_value(&BasisWitness { basis, rank }), to_value(&graph.to_json_form())))
        },
    )
}

// ---- abelian ----

fn ab_sod_gl(a: &AbSodGlArgs, report: Option<&Report>) -> Result<Step> {
    let x = parse_vector(&a.x)?;
    let lattice = Lattice::new(parse_matrix(&a.gens, Some(x.dim()))?);
    settle(
        report,
        |w: SodGlWitness, _| {
            expect(w.alpha.is_unimodular(), || "alpha is not unimodular".into())?;
            let got = soft(x.mul_mat(&w.alpha))?;
            expect(got == w.image, || format!("x·alpha = {got}, not {}", w.image))?;
            let combo = soft(w.coefficients.mul_mat(lattice.generators()))?;
            expect(combo == w.image, || "coefficients do not produce the image".into())
        },
        || {
            let d = sod_gl(&x, &lattice)?;
            Ok(Outcome::from_decision(&d, to_value, |w| {
                json!({"det": w.alpha.det().ok().map(JsonInt), "d1": JsonInt(lattice.d1())})
            }))
        },
    )
}

fn ab_tcp(a: &AbTcpArgs, report: Option<&Report>) -> Result<Step> {
    let m = parse_matrix(&a.a, None)?;
    let u = parse_vector(&a.u)?;
    let v = parse_vector(&a.v)?;
    m.require_unimodular()?;
    let lhs_matrix = IntMatrix::identity(m.rows()).sub(&m)?;
    let target = v.sub(&u)?;
    settle(
        report,
        |x: IntVector, _| {
            let got = soft(x.mul_mat(&lhs_matrix))?;
            expect(got == target, || format!("x·(I − A) = {got}, expected {target}"))
        },
        || {
            let d = tcp_abelian(&m, &u, &v)?;
            Ok(Outcome::from_decision(&d, to_value, |_| json!({"difference": target})))
        },
    )
}

#[derive(Deserialize)]
struct HnfWitness {
    h: IntMatrix,
    u: IntMatrix,
    pivots: Vec<usize>,
}

#[derive(Deserialize)]
struct SnfWitness {
    d: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

fn hnf_cmd(a: &MatrixArgs, report: Option<&Report>) -> Result<Step> {
    let m = parse_matrix(&a.m, None)?;
    settle(
        report,
        |w: HnfWitness, _| {
            let r = Hnf { h: w.h, u: w.u, pivots: w.pivots };
            expect(r.verify(&m), || "postconditions fail".into())
        },
        || {
            let r = hnf(&m);
            Ok(Outcome::computed(json!({"h": r.h, "u": r.u, "pivots": r.pivots}), json!({"rank": r.rank()})))
        },
    )
}

fn snf_cmd(a: &MatrixArgs, report: Option<&Report>) -> Result<Step> {
    let m = parse_matrix(&a.m, None)?;
    settle(
        report,
        |w: SnfWitness, _| {
            let r = Snf { d: w.d, u: w.u, v: w.v };
            expect(r.verify(&m), || "postconditions fail".into())
        },
        || {
            let r = snf(&m);
            let factors: Vec<JsonInt> = r.invariant_factors().into_iter().map(JsonInt).collect();
            Ok(Outcome::computed(json!({"d": r.d, "u": r.u, "v": r.v}), json!({"invariant_factors": factors})))
        },
    )
}

// ---- matrix orbits and extensions ----

#[derive(Deserialize)]
struct OrbitQueryJson {
    #[serde(rename = "A")]
    a: IntMatrix,
    x: IntVector,
    u: IntVector,
    #[serde(default)]
    gens: Option<IntMatrix>,
}

#[derive(Deserialize)]
struct OrbitWitnessJson {
    k: i64,
    coefficients: IntVector,
}

fn orbit_image(q: &OrbitQuery, k: i64) -> Result<IntVector> {
    q.x.mul_mat(&power(&q.a, k)?)
}

fn orbit_decide(a: &OrbitDecideArgs, report: Option<&Report>) -> Result<Step> {
    let (m, x, u, gens) = match &a.query {
        Some(path) => {
            let path = path.strip_prefix('@').unwrap_or(path);
            let q: OrbitQueryJson = read_json(path)?;
            let n = q.x.dim();
            (q.a, q.x, q.u, q.gens.unwrap_or_else(|| IntMatrix::zeros(0, n)))
        }
        None => {
            let x = parse_vector(a.x.as_deref().expect("required by clap"))?;
            let n = x.dim();
            let gens = match &a.gens {
                Some(g) => parse_matrix(g, Some(n))?,
                None => IntMatrix::zeros(0, n),
            };
            let m = parse_matrix(a.a.as_deref().expect("required by clap"), None)?;
            (m, x, parse_vector(a.u.as_deref().expect("required by clap"))?, gens)
        }
    };
    let q = OrbitQuery::new(a.orbit.orient(m), x, u, Lattice::new(gens))?.with_config(a.orbit.config()?);
    settle(
        report,
        |w: OrbitWitnessJson, _| {
            let diff = soft(orbit_image(&q, w.k).and_then(|img| img.sub(&q.u)))?;
            let combo = soft(w.coefficients.mul_mat(q.lattice.generators()))?;
            expect(combo == diff, || format!("x·A^{} − u = {diff} is not the stated combination", w.k))
        },
        || {
            let d = orbit_coset_decide(&q)?;
            Ok(Outcome::from_decision(&d, to_value, |w: &OrbitWitness| {
                json!({"image": orbit_image(&q, w.k).ok()})
            }))
        },
    )
}

#[derive(Deserialize)]
struct ExponentWitness {
    k: i64,
}

fn orbit_equal(a: &OrbitEqualArgs, report: Option<&Report>) -> Result<Step> {
    let m = a.orbit.orient(parse_matrix(&a.a, None)?);
    let x = parse_vector(&a.x)?;
    let n = x.dim();
    let q = OrbitQuery::new(m, x, parse_vector(&a.y)?, Lattice::zero(n))?
        .with_config(a.orbit.config()?);
    settle(
        report,
        |w: ExponentWitness, _| {
            let got = soft(orbit_image(&q, w.k))?;
            expect(got == q.u, || format!("x·A^{} = {got}, expected {}", w.k, q.u))
        },
        || {
            let d = orbit_coset_decide(&q)?;
            Ok(Outcome::from_decision(&d, |w: &OrbitWitness| json!({"k": w.k}), |w| json!({"image": orbit_image(&q, w.k).ok()})))
        },
    )
}

#[derive(Deserialize)]
struct ExtQueryJson {
    group: ZnByZ,
    g1: GElement,
    g2: GElement,
}

fn ext_cp(a: &ExtCpArgs, report: Option<&Report>) -> Result<Step> {
    let (group, g1, g2) = match &a.query {
        Some(path) => {
            let q: ExtQueryJson = read_json(path.strip_prefix('@').unwrap_or(path))?;
            let group = if a.orbit.column_vectors { ZnByZ::new(q.group.matrix().transpose())? } else { q.group };
            (group, q.g1, q.g2)
        }
        None => {
            let m = parse_matrix(a.a.as_deref().expect("required by clap"), None)?;
            let g1 = GElement::new(parse_vector(a.u1.as_deref().expect("required by clap"))?, a.p1.expect("required"));
            let g2 = GElement::new(parse_vector(a.u2.as_deref().expect("required by clap"))?, a.p2.expect("required"));
            (ZnByZ::new(a.orbit.orient(m))?, g1, g2)
        }
    };
    let config = a.orbit.config()?;
    settle(
        report,
        |w: CpWitness, _| {
            let got = soft(group.conjugate(&g1, &w.element()))?;
            expect(got == g2, || format!("conjugate is {got}, expected {g2}"))
        },
        || {
            let d = cp_znbyz_with(&group, &g1, &g2, &config)?;
            Ok(Outcome::from_decision(&d, to_value, |w| json!({"conjugate": group.conjugate(&g1, &w.element()).ok()})))
        },
    )
}
