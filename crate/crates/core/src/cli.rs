//! Command-line front end: configuration, versioned reports, the count cache and exit codes.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chardual::HoweData;
use crate::cohom::{self, character_formula_check, diagnostics_census, dims_from_census, maximal_count, predict_count_from_dims};
use crate::dlgroup::{sigma_tau_identity, GroupParams};
use crate::error::Error;
use crate::indexsets::{check_det_contribution, check_injections};
use crate::witt::Backend;
use crate::xhvar::{CountRecord, XhVariety, DEFAULT_BUDGET};

pub const SCHEMA: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendArg {
    Equal,
    Mixed,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Maximality,
    Lefschetz,
    CharacterFormula,
    Indexsets,
    SigmaTau,
    Witt,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    /// Residue field size (a prime power).
    #[arg(long, global = true, default_value_t = 2)]
    pub q: u64,
    /// Degree of the division algebra.
    #[arg(long, global = true, default_value_t = 2)]
    pub n: usize,
    /// Hasse invariant numerator, coprime to n.
    #[arg(long, global = true, default_value_t = 1)]
    pub k: usize,
    /// Truncation level.
    #[arg(long, global = true, default_value_t = 2)]
    pub h: usize,
    /// Extension degree: points over F_{q^{nm}} (count), or the largest m checked (verify lefschetz).
    #[arg(long, global = true)]
    pub m: Option<u32>,
    /// Equal (power series) or mixed (p-typical Witt vector) characteristic.
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Equal)]
    pub backend: BackendArg,
    /// Maximum number of candidate tuples an enumeration may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory for cached point counts.
    #[arg(long, global = true, env = "DLX_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn params(&self) -> crate::Result<GroupParams> {
        let backend = match self.backend {
            BackendArg::Equal => Backend::EqualChar,
            BackendArg::Mixed => Backend::PTypical,
        };
        GroupParams::new(self.q, self.n, self.k, self.h, backend)
    }
}

#[derive(Subcommand, Clone, Debug)]
pub enum Command {
    /// Count points of X_h over F_{q^{nm}} by enumeration.
    Count,
    /// Howe data and degrees of every character of T(F_q).
    Census,
    /// Dimensions of H_c^i(X_h).
    Dims,
    /// Hasse-Weil zeta function in factored form.
    Zeta,
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Compare the character census and Z(X_3, t) with printed closed forms (never fails).
    Diagnostics,
}

#[derive(Parser, Clone, Debug)]
#[command(name = "dlvar", version, about = "Point counts, characters and cohomology of Deligne-Lusztig varieties for division algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: RunConfig,
}

impl Cli {
    /// Parses an argument list whose first item is the program name.
    pub fn try_parse_from_args<I, T>(args: I) -> Result<Cli, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        Cli::try_parse_from(args)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub gated: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    pub results: Value,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub elapsed_ms: u64,
    pub cache_hits: u32,
    /// Tabular form used for CSV output; not serialized.
    #[serde(skip)]
    pub table: Table,
    #[serde(skip)]
    pub text: String,
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Table {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

struct Ctx {
    config: RunConfig,
    params: GroupParams,
    cache_hits: u32,
    checks: Vec<Check>,
}

impl Ctx {
    fn check(&mut self, name: &str, pass: bool, gated: bool, detail: String) {
        self.checks.push(Check { name: name.into(), pass, gated, detail });
    }

    fn cache_path(&self, m: u32) -> Option<PathBuf> {
        let p = &self.params;
        let backend = match p.backend {
            Backend::EqualChar => "equal",
            _ => "mixed",
        };
        self.config.cache_dir.as_ref().map(|d| {
            d.join(format!("schema-{SCHEMA}"))
                .join(VERSION)
                .join(format!("count-q{}-n{}-k{}-h{}-m{m}-{backend}.json", p.q, p.n, p.k, p.h))
        })
    }

    /// Point count, served from the cache when present.
    fn count(&mut self, m: u32) -> crate::Result<CountRecord> {
        let path = self.cache_path(m);
        if let Some(rec) = path.as_deref().and_then(read_cached) {
            if rec.params == self.params && rec.m == m {
                self.cache_hits += 1;
                return Ok(rec);
            }
        }
        let rec = XhVariety::new(self.params, m)?.count_record(self.config.budget)?;
        if let Some(path) = path {
            write_cache(&path, &rec);
        }
        Ok(rec)
    }
}

fn read_cached(path: &Path) -> Option<CountRecord> {
    serde_json::from_str(&fs::read_to_string(path).ok()?).ok()
}

fn write_cache(path: &Path, rec: &CountRecord) {
    // A failed cache write only costs a recomputation later.
    if let Some(dir) = path.parent() {
        if fs::create_dir_all(dir).is_ok() {
            let tmp = path.with_extension("tmp");
            if fs::write(&tmp, serde_json::to_string(rec).unwrap_or_default()).is_ok() {
                let _ = fs::rename(&tmp, path);
            }
        }
    }
}

fn hd_string(m: &[usize], h: &[usize]) -> String {
    format!("m={m:?} h={h:?}")
}

fn cmd_count(ctx: &mut Ctx) -> crate::Result<(Value, Table, String)> {
    let m = ctx.config.m.unwrap_or(1);
    let rec = ctx.count(m)?;
    let mut t = Table::new(&["q", "n", "k", "h", "backend", "m", "count", "elapsed_ms"]);
    let p = ctx.params;
    t.push(vec![p.q.to_string(), p.n.to_string(), p.k.to_string(), p.h.to_string(), format!("{:?}", ctx.config.backend).to_lowercase(), m.to_string(), rec.count.to_string(), rec.elapsed_ms.to_string()]);
    let text = rec.count.to_string();
    Ok((serde_json::to_value(&rec).expect("serializable"), t, text))
}

fn cmd_census(ctx: &mut Ctx) -> crate::Result<(Value, Table, String)> {
    let c = cohom::census(ctx.params)?;
    let mut t = Table::new(&["index", "exponents", "level", "m_seq", "h_seq", "r_chi", "d_chi"]);
    let mut text = String::new();
    for row in &c.rows {
        let ex = row.exponents.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        let ms = row.m_seq.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        let hs = row.h_seq.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        t.push(vec![row.index.to_string(), ex.clone(), row.level.to_string(), ms, hs, row.r_chi.to_string(), row.d_chi.to_string()]);
        text.push_str(&format!("chi {:>4} [{ex}] level {} {} r={} d={}\n", row.index, row.level, hd_string(&row.m_seq, &row.h_seq), row.r_chi, row.d_chi));
    }
    let classes: Vec<Value> = c.classes().into_iter().map(|((r, d), n)| json!({"r_chi": r, "d_chi": d, "count": n})).collect();
    for cl in &classes {
        text.push_str(&format!("class r={} d={}: {}\n", cl["r_chi"], cl["d_chi"], cl["count"]));
    }
    Ok((json!({"characters": c.rows, "classes": classes}), t, text.trim_end().to_string()))
}

fn dims_value(dims: &cohom::CohomTable) -> Value {
    Value::Array(dims.dims.iter().map(|(i, d)| json!({"degree": i, "dim": d.to_string()})).collect())
}

fn cmd_dims(ctx: &mut Ctx) -> crate::Result<(Value, Table, String)> {
    let dims = cohom::dims_table(ctx.params)?;
    let mut t = Table::new(&["degree", "dim"]);
    let mut text = Vec::new();
    for (i, d) in &dims.dims {
        t.push(vec![i.to_string(), d.to_string()]);
        text.push(format!("H^{i}: {d}"));
    }
    Ok((json!({"dims": dims_value(&dims)}), t, text.join("\n")))
}

fn cmd_zeta(ctx: &mut Ctx) -> crate::Result<(Value, Table, String)> {
    let z = cohom::zeta(ctx.params)?;
    let mut t = Table::new(&["degree", "coefficient", "multiplicity", "sign"]);
    for f in &z.factors {
        t.push(vec![f.degree.to_string(), f.coefficient.to_string(), f.multiplicity.to_string(), f.sign.to_string()]);
    }
    let factors: Vec<Value> = z
        .factors
        .iter()
        .map(|f| json!({"degree": f.degree, "coefficient": f.coefficient.to_string(), "multiplicity": f.multiplicity.to_string(), "sign": f.sign}))
        .collect();
    let s = z.to_string();
    Ok((json!({"zeta": s, "factors": factors}), t, s))
}

fn verify_maximality(ctx: &mut Ctx) -> crate::Result<Value> {
    let p = ctx.params;
    let rec = ctx.count(1)?;
    let c = cohom::census(p)?;
    let dims = dims_from_census(&c)?;
    let lefschetz = predict_count_from_dims(&dims, p.q, p.n, 1)?;
    let sum_chi = maximal_count(&c)?;
    let bound = BigUint::from(p.q).pow((p.n * p.n * (p.h - 1)) as u32);
    let count = BigUint::from(rec.count);
    ctx.check("count = Σχ q^(n(r+d)/2)", count == sum_chi, true, format!("count {} vs {sum_chi}", rec.count));
    ctx.check("count = Σi q^(ni/2) dim H^i", num_bigint::BigInt::from(rec.count) == lefschetz, true, format!("count {} vs {lefschetz}", rec.count));
    ctx.check("count = q^(n²(h−1))", count == bound, false, format!("count {} vs {bound}", rec.count));
    Ok(json!({"count": rec.count, "prediction": lefschetz.to_string(), "sum_over_characters": sum_chi.to_string(), "dims": dims_value(&dims)}))
}

fn verify_lefschetz(ctx: &mut Ctx) -> crate::Result<Value> {
    let p = ctx.params;
    let dims = cohom::dims_table(p)?;
    let top = ctx.config.m.unwrap_or(3);
    let mut rows = Vec::new();
    for m in 1..=top {
        let rec = ctx.count(m)?;
        let pred = predict_count_from_dims(&dims, p.q, p.n, m)?;
        ctx.check(&format!("m={m}"), num_bigint::BigInt::from(rec.count) == pred, true, format!("count {} vs prediction {pred}", rec.count));
        rows.push(json!({"m": m, "count": rec.count, "prediction": pred.to_string()}));
    }
    Ok(json!({"counts": rows, "dims": dims_value(&dims)}))
}

fn verify_character_formula(ctx: &mut Ctx) -> crate::Result<Value> {
    let zeta = ctx.params.field(1)?.generator();
    let rep = character_formula_check(ctx.params, zeta, ctx.config.budget)?;
    for row in &rep.rows {
        ctx.check(&format!("chi={:?} g#{}", row.character, row.g_index), row.agree, true, format!("{} vs {}", row.lhs, row.rhs));
    }
    Ok(serde_json::to_value(&rep).expect("serializable"))
}

fn verify_indexsets(ctx: &mut Ctx) -> crate::Result<Value> {
    let p = ctx.params;
    let mut det = Vec::new();
    for n in 1..=p.n.min(5) {
        for hp in 1..=p.h.min(5) {
            let rep = check_det_contribution(n, hp);
            ctx.check(&format!("det contribution n={n} h'={hp}"), rep.pass, true, format!("{} monomials, counterexample {:?}", rep.monomials_checked, rep.counterexample));
            det.push(rep);
        }
    }
    let c = cohom::census(p)?;
    let mut seen = std::collections::BTreeSet::new();
    let mut strata = Vec::new();
    for row in &c.rows {
        let hd = HoweData { m_seq: row.m_seq.clone(), h_seq: row.h_seq.clone() };
        if !seen.insert((hd.m_seq.clone(), hd.h_seq.clone())) {
            continue;
        }
        let rep = check_injections(&hd, p.n, p.k)?;
        ctx.check(&format!("injection {}", hd_string(&hd.m_seq, &hd.h_seq)), rep.pass(), true, format!("{rep:?}"));
        strata.push(json!({"howe": hd, "report": rep}));
    }
    Ok(json!({"det_contribution": det, "injections": strata}))
}

fn verify_sigma_tau(ctx: &mut Ctx) -> crate::Result<Value> {
    let mut rows = Vec::new();
    for n in 1..=ctx.params.n.max(8) {
        for k in (1..=n).filter(|k| k.gcd(&n) == 1) {
            let ok = sigma_tau_identity(n, k)?;
            ctx.check(&format!("n={n} k={k}"), ok, true, String::new());
            rows.push(json!({"n": n, "k": k, "pass": ok}));
        }
    }
    Ok(Value::Array(rows))
}

fn verify_witt(ctx: &mut Ctx) -> crate::Result<Value> {
    let ring = ctx.params.ring(1)?;
    let size = ring.field().size() as u64;
    let h = ring.h();
    let total = (size as u128).pow(h as u32);
    let sample = total.min(64) as u64;
    let stride = ((total / sample as u128) as u64).max(1) | 1;
    let elem = |i: u64| {
        let mut x = i;
        ring.from_coords((0..h).map(|_| {
            let c = (x % size) as u32;
            x /= size;
            c
        }).collect())
        .expect("in range")
    };
    let elems: Vec<_> = (0..sample).map(|i| elem(i.wrapping_mul(stride) % total as u64)).collect();
    let (mut ok_ring, mut ok_frob, mut ok_inv, mut cases) = (true, true, true, 0u64);
    for a in &elems {
        for b in &elems {
            let c = &elems[(cases as usize * 7) % elems.len()];
            ok_ring &= ring.mul(&ring.mul(a, b), c) == ring.mul(a, &ring.mul(b, c))
                && ring.mul(a, b) == ring.mul(b, a)
                && ring.mul(a, &ring.add(b, c)) == ring.add(&ring.mul(a, b), &ring.mul(a, c))
                && ring.add(a, &ring.neg(a)) == ring.zero();
            ok_frob &= ring.frobenius_w(&ring.mul(a, b)) == ring.mul(&ring.frobenius_w(a), &ring.frobenius_w(b));
            cases += 1;
        }
        if ring.is_unit(a) {
            ok_inv &= ring.unit_inverse(a).map(|i| ring.is_one(&ring.mul(a, &i))).unwrap_or(false);
        }
    }
    ctx.check("ring axioms", ok_ring, true, format!("{cases} pairs"));
    ctx.check("Frobenius is multiplicative", ok_frob, true, format!("{cases} pairs"));
    ctx.check("unit inverses", ok_inv, true, format!("{} elements", elems.len()));
    Ok(json!({"pairs": cases, "elements": elems.len()}))
}

fn cmd_verify(ctx: &mut Ctx, suite: Suite) -> crate::Result<(Value, Table, String)> {
    let results = match suite {
        Suite::Maximality => verify_maximality(ctx)?,
        Suite::Lefschetz => verify_lefschetz(ctx)?,
        Suite::CharacterFormula => verify_character_formula(ctx)?,
        Suite::Indexsets => verify_indexsets(ctx)?,
        Suite::SigmaTau => verify_sigma_tau(ctx)?,
        Suite::Witt => verify_witt(ctx)?,
    };
    let mut t = Table::new(&["check", "pass", "gated", "detail"]);
    let mut text = Vec::new();
    for c in &ctx.checks {
        t.push(vec![c.name.clone(), c.pass.to_string(), c.gated.to_string(), c.detail.clone()]);
        let verdict = match (c.pass, c.gated) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FLAG",
        };
        text.push(format!("{verdict} {}: {}", c.name, c.detail));
    }
    Ok((results, t, text.join("\n")))
}

fn cmd_diagnostics(ctx: &mut Ctx) -> crate::Result<(Value, Table, String)> {
    let rep = diagnostics_census(ctx.params)?;
    let mut t = Table::new(&["item", "computed", "printed", "agree"]);
    let mut text = Vec::new();
    t.push(vec!["norm-type characters".into(), rep.norm_type_count.to_string(), rep.norm_type_expected.clone(), (rep.norm_type_expected == rep.norm_type_count.to_string()).to_string()]);
    for l in &rep.levels {
        t.push(vec![format!("N_{}", l.h_prime), l.census_count.to_string(), l.formula_value.clone(), l.agree.to_string()]);
        text.push(format!("N_{}: census {} formula {} ({})", l.h_prime, l.census_count, l.formula_value, if l.agree { "agree" } else { "disagree" }));
    }
    let z = &rep.zeta_x3;
    t.push(vec!["Z(X_3,t)".into(), z.computed.clone(), z.printed.clone(), z.agree.to_string()]);
    text.push(format!("Z(X_3,t) at q={}: computed {} printed {} ({})", z.q, z.computed, z.printed, if z.agree { "agree" } else { "disagree" }));
    ctx.check("diagnostics", rep.all_agree, false, if rep.all_agree { "agree".into() } else { "disagree".into() });
    Ok((serde_json::to_value(&rep).expect("serializable"), t, text.join("\n")))
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Count => "count".into(),
        Command::Census => "census".into(),
        Command::Dims => "dims".into(),
        Command::Zeta => "zeta".into(),
        Command::Verify { suite } => format!("verify {}", serde_json::to_value(suite).unwrap().as_str().unwrap()),
        Command::Diagnostics => "diagnostics".into(),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) | Error::InvalidInput(_) | Error::Domain(_) => EXIT_USAGE,
        Error::Budget { .. } => EXIT_BUDGET,
        Error::Internal(_) => EXIT_CHECK_FAILED,
    }
}

/// Runs a parsed command and builds its report.
pub fn execute(cli: &Cli) -> crate::Result<Report> {
    let start = Instant::now();
    let params = cli.config.params()?;
    let mut ctx = Ctx { config: cli.config.clone(), params, cache_hits: 0, checks: Vec::new() };
    let (results, table, text) = match &cli.command {
        Command::Count => cmd_count(&mut ctx)?,
        Command::Census => cmd_census(&mut ctx)?,
        Command::Dims => cmd_dims(&mut ctx)?,
        Command::Zeta => cmd_zeta(&mut ctx)?,
        Command::Verify { suite } => cmd_verify(&mut ctx, *suite)?,
        Command::Diagnostics => cmd_diagnostics(&mut ctx)?,
    };
    let pass = ctx.checks.iter().all(|c| c.pass || !c.gated);
    Ok(Report {
        schema: SCHEMA,
        version: VERSION.into(),
        command: command_name(&cli.command),
        config: cli.config.clone(),
        results,
        checks: ctx.checks,
        pass,
        elapsed_ms: start.elapsed().as_millis() as u64,
        cache_hits: ctx.cache_hits,
        table,
        text,
    })
}

pub fn render(report: &Report, format: Format, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&report.table.header)?;
            for row in &report.table.rows {
                w.write_record(row)?;
            }
            w.flush()
        }
        Format::Text => writeln!(out, "{}", report.text),
    }
}

/// Entry point shared by the binary: parses arguments, runs, prints, returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    if cli.config.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.config.threads).build_global();
    }
    match execute(&cli) {
        Ok(report) => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            if let Err(e) = render(&report, cli.config.format, &mut lock) {
                eprintln!("error: {e}");
                return EXIT_CHECK_FAILED;
            }
            if report.pass {
                EXIT_PASS
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(args: &[&str]) -> crate::Result<Report> {
        let mut full = vec!["dlvar"];
        full.extend_from_slice(args);
        execute(&Cli::try_parse_from(full).unwrap())
    }

    #[test]
    fn count_and_zeta() {
        let r = report(&["count", "--q", "2", "--n", "2", "--k", "1", "--h", "2", "--m", "2"]).unwrap();
        assert_eq!(r.results["count"], 16);
        assert_eq!(r.text, "16");
        let z = report(&["zeta", "--q", "2", "--n", "2", "--k", "1", "--h", "2", "--format", "text"]).unwrap();
        assert_eq!(z.text, "(1+2t)^4 / (1-4t)^2");
        let v = serde_json::to_value(&z).unwrap();
        assert_eq!(v["schema"], 1);
    }

    #[test]
    fn verify_maximality_passes() {
        let r = report(&["verify", "maximality", "--q", "2", "--n", "2", "--k", "1", "--h", "2"]).unwrap();
        assert!(r.pass);
        assert_eq!(r.results["prediction"], "16");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["dlvar", "count", "--n", "2", "--k", "2"]), EXIT_USAGE);
        assert_eq!(run(["dlvar", "count", "--q", "6"]), EXIT_USAGE);
        assert_eq!(run(["dlvar", "count", "--h", "3", "--m", "2", "--budget", "100"]), EXIT_BUDGET);
        assert_eq!(run(["dlvar", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["dlvar", "verify", "sigma-tau", "--format", "text"]), EXIT_PASS);
        assert_eq!(run(["dlvar", "diagnostics", "--h", "3", "--format", "csv"]), EXIT_PASS);
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("dlvar-cache-test-{}", std::process::id()));
        let d = dir.to_str().unwrap();
        let a = report(&["count", "--h", "3", "--cache-dir", d]).unwrap();
        let b = report(&["count", "--h", "3", "--cache-dir", d]).unwrap();
        assert_eq!((a.cache_hits, b.cache_hits), (0, 1));
        assert_eq!(a.results["count"], b.results["count"]);
        let path = dir.join("schema-1").join(VERSION).join("count-q2-n2-k1-h3-m1-equal.json");
        assert!(path.exists());
        let _ = fs::remove_dir_all(dir);
    }
}
