//! Command-line front end. [`run`] parses argv, dispatches to the library and
//! renders a [`CommandResult`]; `main` only forwards the exit code.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::arith;
use crate::constructions::{self, ConstructedSet, CycFamily, Direction, HadamardKind, SearchOptions, SummaryRow};
use crate::cyclotomy::cyc_classes;
use crate::diffcore::{self, Params, Verdict};
use crate::error::Error;
use crate::filters::{self, HallOptions, ParamSet};
use crate::gf;
use crate::groups::{make_group, Elem, GroupCtx};
use crate::sequences::{self, SeqBits};

#[derive(Parser, Debug)]
#[command(name = "adskit", version, about = "Almost difference sets: construct, verify, rule out")]
pub struct Cli {
    /// Write the rendered result to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Search budget (number of candidate subsets); overrides ADSKIT_BUDGET.
    #[arg(long, global = true)]
    pub budget: Option<u128>,
    /// Primitive element to use instead of the default one (cycnum, table --cycnum).
    #[arg(long, global = true)]
    pub seed_gamma: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a subset of a group.
    Verify(VerifyArgs),
    /// Run a construction family.
    Construct(ConstructArgs),
    /// Run the nonexistence tests on ADS parameters in a cyclic group.
    Filter(FilterArgs),
    /// Exhaustive search for small groups.
    Search(SearchArgs),
    /// Periodic autocorrelation of a binary sequence.
    Autocorr(AutocorrArgs),
    /// Interleave an ideal seed sequence into period 4l.
    Interleave(InterleaveArgs),
    /// Cyclotomic numbers of order e over GF(q).
    Cycnum(CycnumArgs),
    /// Candidate tables, the cyclotomic summary scan, cyclotomic matrices.
    Table(TableArgs),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub group: Option<String>,
    /// Inline comma-separated set, or a file with one set per line.
    #[arg(long)]
    pub set: Option<String>,
    /// JSON written by `construct` (envelope or payload).
    #[arg(long, conflicts_with_all = ["group", "set"])]
    pub from: Option<PathBuf>,
    /// Also test divisibility relative to this subgroup.
    #[arg(long)]
    pub subgroup: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct ConstructArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub l: Option<u64>,
    #[arg(long)]
    pub m: Option<u32>,
    /// Exponent of the power map (pn_graph).
    #[arg(long)]
    pub s: Option<u64>,
    /// Degree of the m-sequence (ph_singer).
    #[arg(long)]
    pub t: Option<u32>,
    /// Cyclotomic class index, or the row index i for cor55.
    #[arg(long, default_value_t = 0)]
    pub index: usize,
    /// Class index list (ck_pds).
    #[arg(long, value_delimiter = ',')]
    pub indices: Vec<usize>,
    /// `i,j,l` for dhm_quartic.
    #[arg(long, value_delimiter = ',')]
    pub triple: Vec<usize>,
    #[arg(long)]
    pub with_zero: bool,
    #[arg(long)]
    pub include_row: bool,
    /// Group for the transfer families.
    #[arg(long)]
    pub group: Option<String>,
    /// Input set for the transfer families, or D1 for cor55/jungnickel.
    #[arg(long)]
    pub set: Option<String>,
    /// Element added or removed by the transfer families.
    #[arg(long)]
    pub d: Option<String>,
    /// A and B for tang_ding (subsets of Z_l).
    #[arg(long)]
    pub set_a: Option<String>,
    #[arg(long)]
    pub set_b: Option<String>,
    /// tang_ding with A = B* - delta.
    #[arg(long)]
    pub delta: Option<u64>,
    /// Group and set D2 for jungnickel (default Z_4 with {0}).
    #[arg(long)]
    pub group_b: Option<String>,
    #[arg(long)]
    pub set_b2: Option<String>,
}

#[derive(Args, Debug)]
pub struct FilterArgs {
    /// `v,k,lambda,t`
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pub params: Vec<u64>,
    /// Moduli for the Hall test (default: divisors of v in 2..=12).
    #[arg(long, value_delimiter = ',')]
    pub w: Vec<u64>,
    #[arg(long)]
    pub symmetric_s: bool,
    /// `all` or a comma list of counting, parity_t1, parity_tv2, hall, binary_char, ternary_char.
    #[arg(long, default_value = "all")]
    pub tests: String,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub lambda: Option<u64>,
    #[arg(long)]
    pub t: Option<u64>,
    #[arg(long)]
    pub include_pds: bool,
    /// Report every matching set containing 0 instead of one per orbit.
    #[arg(long)]
    pub no_dedup: bool,
}

#[derive(Args, Debug)]
pub struct AutocorrArgs {
    /// File holding a 0/1 line, or the bits inline.
    #[arg(long, conflicts_with = "support")]
    pub seq: Option<String>,
    #[arg(long, requires = "period")]
    pub support: Option<String>,
    #[arg(long)]
    pub period: Option<usize>,
    /// Include the value at every shift.
    #[arg(long)]
    pub full: bool,
}

#[derive(Args, Debug)]
pub struct InterleaveArgs {
    /// `qr:<p>`, `mseq:<t>`, `singer:<t>`, `twin_prime:<p>`, `hall_sextic:<p>`, or a 0/1 file.
    #[arg(long)]
    pub seed: String,
    #[arg(long, default_value_t = 0)]
    pub delta: usize,
    /// Use the complement of the seed.
    #[arg(long)]
    pub complement: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Direct,
    Closed,
}

#[derive(Args, Debug)]
pub struct CycnumArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub e: usize,
    #[arg(long, value_enum, default_value_t = Method::Direct)]
    pub method: Method,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CandidateKind {
    T1,
    Tv2,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub candidates: Option<CandidateKind>,
    #[arg(long, default_value_t = 200)]
    pub vmax: u64,
    /// Scan unions of cyclotomic classes against the summary-table conditions.
    #[arg(long)]
    pub summary: bool,
    #[arg(long, default_value_t = 200)]
    pub qmax: u64,
    /// Matrices of cyclotomic numbers for every q ≤ qmax with e | q-1.
    #[arg(long)]
    pub cycnum: bool,
    #[arg(long, default_value_t = 4)]
    pub e: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    RuledOut,
    PreconditionFailed,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
    /// Rows for `--format csv`, header first.
    #[serde(skip)]
    pub csv: Option<Vec<Vec<String>>>,
    #[serde(skip)]
    pub usage_error: bool,
}

impl CommandResult {
    fn ok(payload: Value) -> Self {
        CommandResult {
            status: Status::Ok,
            payload,
            diagnostics: Vec::new(),
            csv: None,
            usage_error: false,
        }
    }

    fn from_error(err: &Error) -> Self {
        let (status, usage_error) = match err {
            Error::Precondition { .. } => (Status::PreconditionFailed, false),
            Error::Parse(_) | Error::InvalidDescriptor(_) | Error::ForeignElement { .. } => (Status::Error, true),
            _ => (Status::Error, false),
        };
        let mut payload = json!({ "error": err.to_string() });
        if let Error::Precondition { family, reason } = err {
            payload = json!({ "error": err.to_string(), "family": family, "reason": reason });
        }
        CommandResult {
            status,
            payload,
            diagnostics: vec![err.to_string()],
            csv: None,
            usage_error,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok | Status::RuledOut => 0,
            _ if self.usage_error => 2,
            _ => 1,
        }
    }
}

type CmdResult = std::result::Result<CommandResult, Error>;

/// Parses `args` (program name first), executes, writes output, returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = dispatch(&cli);
    let rendered = match render(&result, cli.format) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("{msg}");
            return 2;
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("cannot write {}: {e}", path.display());
                return 1;
            }
            println!("{}", status_name(result.status));
        }
        None => print!("{rendered}"),
    }
    for d in &result.diagnostics {
        eprintln!("{d}");
    }
    result.exit_code()
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Ok => "ok",
        Status::RuledOut => "ruled_out",
        Status::PreconditionFailed => "precondition_failed",
        Status::Error => "error",
    }
}

pub fn dispatch(cli: &Cli) -> CommandResult {
    let out = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Construct(a) => cmd_construct(a),
        Command::Filter(a) => cmd_filter(a),
        Command::Search(a) => cmd_search(a, cli.budget),
        Command::Autocorr(a) => cmd_autocorr(a),
        Command::Interleave(a) => cmd_interleave(a),
        Command::Cycnum(a) => cmd_cycnum(a, cli.seed_gamma),
        Command::Table(a) => cmd_table(a, cli.seed_gamma),
    };
    let mut res = out.unwrap_or_else(|e| CommandResult::from_error(&e));
    let gamma_used = matches!(cli.command, Command::Cycnum(_) | Command::Table(TableArgs { cycnum: true, .. }));
    if cli.seed_gamma.is_some() && !gamma_used {
        res.diagnostics.push("--seed-gamma only affects cycnum and table --cycnum; ignored".into());
    }
    res
}

pub fn render(res: &CommandResult, format: Format) -> std::result::Result<String, String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(res).map_err(|e| e.to_string())?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let rows = res
                .csv
                .as_ref()
                .ok_or_else(|| "csv output is not available for this command".to_string())?;
            let mut s = String::new();
            for row in rows {
                let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            Ok(s)
        }
        Format::Text => {
            let mut s = format!("status: {}\n", status_name(res.status));
            text_value(&mut s, &res.payload, 0);
            Ok(s)
        }
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

fn text_value(s: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) => {
                        let _ = writeln!(s, "{pad}{k}:");
                        text_value(s, x, indent + 1);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object()) => {
                        let _ = writeln!(s, "{pad}{k}:");
                        for item in items {
                            let _ = writeln!(s, "{pad}  -");
                            text_value(s, item, indent + 2);
                        }
                    }
                    _ => {
                        let _ = writeln!(s, "{pad}{k}: {}", scalar_text(x));
                    }
                }
            }
        }
        other => {
            let _ = writeln!(s, "{pad}{}", scalar_text(other));
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(scalar_text).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

fn elem_json(g: &GroupCtx, e: Elem) -> Value {
    if g.factors().len() > 1 {
        Value::String(g.format_elem(e))
    } else {
        json!(e.0)
    }
}

fn set_json(g: &GroupCtx, set: &[Elem]) -> Value {
    Value::Array(set.iter().map(|&e| elem_json(g, e)).collect())
}

fn params_json(p: &Params) -> Value {
    serde_json::to_value(p).expect("params serialize")
}

fn verdict_json(g: &GroupCtx, v: &Verdict) -> Value {
    let mut obj = params_json(&v.params());
    let m = obj.as_object_mut().expect("object");
    match v {
        Verdict::ADS { s, .. } => {
            m.insert("S".into(), set_json(g, s));
        }
        Verdict::PDS { regular, paley_type, .. } => {
            m.insert("regular".into(), json!(regular));
            m.insert("paley_type".into(), json!(paley_type));
        }
        Verdict::DDS(r) => {
            m.insert("subgroup".into(), set_json(g, &r.subgroup));
            m.insert("davis".into(), json!(r.davis));
        }
        Verdict::DS { .. } => {}
    }
    obj
}

fn constructed_json(c: &ConstructedSet) -> Value {
    json!({
        "group": c.group.descriptor(),
        "set": set_json(&c.group, &c.set),
        "k": c.set.len(),
        "claims": c.claims.iter().map(params_json).collect::<Vec<_>>(),
        "verified": c.verified,
        "provenance": { "family": c.provenance.family, "citation": c.provenance.citation },
        "notes": c.notes,
    })
}

/// Inline text, or the contents of the file it names.
fn read_inline_or_file(arg: &str) -> Result<String, Error> {
    let path = Path::new(arg);
    if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn parse_sets(g: &GroupCtx, arg: &str) -> Result<Vec<Vec<Elem>>, Error> {
    let text = read_inline_or_file(arg)?;
    let sets = g.parse_set_file(&text)?;
    if sets.is_empty() {
        return Err(Error::Parse("no set given".into()));
    }
    Ok(sets)
}

fn parse_one_set(g: &GroupCtx, arg: &str) -> Result<Vec<Elem>, Error> {
    let mut sets = parse_sets(g, arg)?;
    if sets.len() != 1 {
        return Err(Error::Parse(format!("expected one set, got {}", sets.len())));
    }
    Ok(sets.remove(0))
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, Error> {
    v.ok_or_else(|| Error::Parse(format!("missing --{flag}")))
}

fn verify_one(g: &GroupCtx, set: &[Elem], subgroup: Option<&[Elem]>) -> Result<(Value, Vec<Params>), Error> {
    let set = diffcore::normalize_set(g, set)?;
    let cls = diffcore::classify(g, &set)?;
    let mut verdicts: Vec<Value> = cls.verdicts.iter().map(|v| verdict_json(g, v)).collect();
    let mut params = cls.params();
    if let Some(h) = subgroup {
        if let Some(r) = diffcore::dds_classify(g, h, &set)? {
            if !params.contains(&r.params()) {
                verdicts.push(verdict_json(g, &Verdict::DDS(r.clone())));
                params.push(r.params());
            }
        }
    }
    let histogram: Map<String, Value> = cls
        .spectrum
        .histogram()
        .into_iter()
        .map(|(val, n)| (val.to_string(), json!(n)))
        .collect();
    let s = match cls.ads() {
        Some(Verdict::ADS { s, .. }) => set_json(g, s),
        _ => Value::Null,
    };
    let payload = json!({
        "group": g.descriptor(),
        "set": set_json(g, &set),
        "k": set.len(),
        "histogram": histogram,
        "verdicts": verdicts,
        "S": s,
        "H": s,
    });
    Ok((payload, params))
}

fn json_elem_text(v: &Value) -> Result<String, Error> {
    match v {
        Value::Number(n) => Ok(n.to_string()),
        Value::String(s) => Ok(s.clone()),
        other => Err(Error::Parse(format!("bad element {other}"))),
    }
}

fn cmd_verify(a: &VerifyArgs) -> CmdResult {
    if let Some(path) = &a.from {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        let doc: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        let payload = doc.get("payload").unwrap_or(&doc);
        let group = payload
            .get("group")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("no `group` in input".into()))?;
        let g = make_group(group)?;
        let elems = payload
            .get("set")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("no `set` in input".into()))?;
        let set = elems
            .iter()
            .map(|v| json_elem_text(v).and_then(|t| g.parse_elem(&t)))
            .collect::<Result<Vec<_>, _>>()?;
        let claims: Vec<Value> = payload
            .get("claims")
            .and_then(Value::as_array)
            .cloned()
            .unwrap_or_default();
        let (mut out, params) = verify_one(&g, &set, None)?;
        let found: Vec<Value> = params.iter().map(params_json).collect();
        let missing: Vec<Value> = claims.iter().filter(|c| !found.contains(c)).cloned().collect();
        let confirmed = missing.is_empty();
        let m = out.as_object_mut().expect("object");
        m.insert("claims".into(), Value::Array(claims));
        m.insert("claims_confirmed".into(), json!(confirmed));
        let mut res = CommandResult::ok(out);
        if !confirmed {
            res.status = Status::Error;
            res.diagnostics
                .push(format!("claims not reproduced: {}", Value::Array(missing)));
        }
        return Ok(res);
    }
    let g = make_group(&need(a.group.clone(), "group")?)?;
    let sets = parse_sets(&g, &need(a.set.clone(), "set")?)?;
    let subgroup = a.subgroup.as_deref().map(|s| parse_one_set(&g, s)).transpose()?;
    let mut results = Vec::new();
    for set in &sets {
        results.push(verify_one(&g, set, subgroup.as_deref())?.0);
    }
    let payload = if results.len() == 1 {
        results.remove(0)
    } else {
        json!({ "results": results })
    };
    Ok(CommandResult::ok(payload))
}

fn cmd_construct(a: &ConstructArgs) -> CmdResult {
    let built = construct_family(a)?;
    let mut res = CommandResult::ok(constructed_json(&built));
    res.csv = Some(
        std::iter::once(vec!["element".to_string()])
            .chain(built.set.iter().map(|&e| vec![built.group.format_elem(e)]))
            .collect(),
    );
    Ok(res)
}

fn z_set(l: u64, text: &str) -> Result<(GroupCtx, Vec<Elem>), Error> {
    let g = GroupCtx::cyclic(l as usize)?;
    let set = parse_one_set(&g, text)?;
    Ok((g, set))
}

pub fn construct_family(a: &ConstructArgs) -> Result<ConstructedSet, Error> {
    let fam = a.family.as_str();
    if let Ok(cf) = fam.parse::<CycFamily>() {
        return constructions::cyclotomic_ads(need(a.q, "q")?, cf, a.index);
    }
    if let Ok(dir) = fam.parse::<Direction>() {
        let g = make_group(&need(a.group.clone(), "group")?)?;
        let set = parse_one_set(&g, &need(a.set.clone(), "set")?)?;
        let d = g.parse_elem(&need(a.d.clone(), "d")?)?;
        return constructions::ds_ads_transfer(dir, &g, &set, d);
    }
    match fam {
        "paley_qr" => constructions::paley_qr(need(a.q, "q")?),
        "ck_pds" => constructions::ck_pds(need(a.q, "q")?, &a.indices),
        "gmw_like" => constructions::gmw_like_support(need(a.q, "q")?),
        "pn_graph" => constructions::pn_graph_ads(need(a.p, "p")?, a.m.unwrap_or(1), need(a.s, "s")?),
        "ph_qr" => constructions::paley_hadamard_ds(HadamardKind::Qr(need(a.p, "p")?)),
        "ph_singer" => constructions::paley_hadamard_ds(HadamardKind::Singer(need(a.t, "t")?)),
        "ph_twin_prime" => constructions::paley_hadamard_ds(HadamardKind::TwinPrime(need(a.p, "p")?)),
        "ph_hall_sextic" => constructions::paley_hadamard_ds(HadamardKind::HallSextic(need(a.p, "p")?)),
        "cor55" => {
            let l = need(a.l, "l")?;
            let d1 = match &a.set {
                Some(s) => z_set(l, s)?.1,
                None => constructions::default_paley_hadamard(l)?.set,
            };
            constructions::cor55(&d1, l, a.index as u64)
        }
        "jungnickel" => {
            let l = need(a.l, "l")?;
            let (ga, d1) = match &a.set {
                Some(s) => z_set(l, s)?,
                None => {
                    let c = constructions::default_paley_hadamard(l)?;
                    (c.group, c.set)
                }
            };
            let gb = make_group(a.group_b.as_deref().unwrap_or("zv:4"))?;
            let d2 = match &a.set_b2 {
                Some(s) => parse_one_set(&gb, s)?,
                None => vec![gb.identity()],
            };
            constructions::jungnickel_dds(&gb, &d2, &ga, &d1)
        }
        "dhm_quartic" => {
            let [i, j, l] = a.triple[..] else {
                return Err(Error::Parse("--triple needs three class indices i,j,l".into()));
            };
            constructions::dhm_quartic(need(a.q, "q")?, i, j, l, a.with_zero)
        }
        "zlz_z4q" => constructions::zlz_z4q(need(a.q, "q")?),
        "zlz_pq_squares" => constructions::zlz_pq_squares(need(a.p, "p")?, need(a.q, "q")?, a.include_row),
        "tang_ding" => {
            let l = need(a.l, "l")?;
            let base = GroupCtx::cyclic(l as usize)?;
            let b = match &a.set_b {
                Some(s) => parse_one_set(&base, s)?,
                None => constructions::default_paley_hadamard(l)?.set,
            };
            let a_set = match (&a.set_a, a.delta) {
                (Some(s), _) => parse_one_set(&base, s)?,
                (None, Some(delta)) => {
                    let member: Vec<bool> = (0..l as usize).map(|x| b.contains(&Elem(x))).collect();
                    (0..l as usize)
                        .filter(|&x| !member[x])
                        .map(|x| Elem(((x as u64 + l - delta % l) % l) as usize))
                        .collect()
                }
                (None, None) => b.clone(),
            };
            constructions::tang_ding(&base, &a_set, &b)
        }
        "dpw_skew" => constructions::dpw_skew(need(a.q, "q")?),
        "interleave_support" => {
            let l = need(a.l, "l")?;
            let seed = match &a.set {
                Some(s) => {
                    let (g, set) = z_set(l, s)?;
                    constructed_plain(g, set)
                }
                None => constructions::default_paley_hadamard(l)?,
            };
            Ok(sequences::interleave_support(&seed, a.delta.unwrap_or(0))?.0)
        }
        other => Err(Error::Parse(format!(
            "unknown family `{other}`; known: {}, interleave_support",
            constructions::FAMILIES.join(", ")
        ))),
    }
}

fn constructed_plain(group: GroupCtx, set: Vec<Elem>) -> ConstructedSet {
    ConstructedSet {
        group,
        set,
        claims: Vec::new(),
        verified: false,
        provenance: constructions::Provenance {
            family: "user".into(),
            citation: String::new(),
        },
        notes: Vec::new(),
    }
}

/// Witness of the first failing test, parity and counting rules first.
fn first_witness(tests: &std::collections::BTreeMap<String, filters::TestVerdict>) -> Option<String> {
    let rank = |name: &str| match name {
        "parity_t1" | "parity_tv2" => 0,
        "counting" => 1,
        n if n.starts_with("hall_w") => 2,
        _ => 3,
    };
    let mut failing: Vec<(&String, &String)> = tests
        .iter()
        .filter_map(|(name, t)| match t {
            filters::TestVerdict::RuledOut { witness } => Some((name, witness)),
            _ => None,
        })
        .collect();
    failing.sort_by_key(|(name, _)| rank(name));
    failing.first().map(|(_, w)| w.to_string())
}

const TEST_NAMES: [&str; 6] = ["counting", "parity_t1", "parity_tv2", "hall", "binary_char", "ternary_char"];

fn cmd_filter(a: &FilterArgs) -> CmdResult {
    let [v, k, lambda, t] = a.params[..] else {
        return Err(Error::Parse("--params needs v,k,lambda,t".into()));
    };
    let p = ParamSet::new(v, k, lambda, t)?;
    let selected: Vec<&str> = if a.tests == "all" {
        TEST_NAMES.to_vec()
    } else {
        let list: Vec<&str> = a.tests.split(',').map(str::trim).collect();
        if let Some(bad) = list.iter().find(|n| !TEST_NAMES.contains(n)) {
            return Err(Error::Parse(format!("unknown test `{bad}`; known: {}", TEST_NAMES.join(", "))));
        }
        list
    };
    for &w in &a.w {
        if w < 2 || v % w != 0 {
            return Err(Error::NotDivisorOfV { w, v });
        }
    }
    let opts = HallOptions {
        symmetric: a.symmetric_s,
        ..HallOptions::default()
    };
    let w_list = (!a.w.is_empty()).then_some(a.w.as_slice());
    let mut report = filters::run_all(&p, w_list, &opts);
    report.tests.retain(|name, _| {
        let base = if name.starts_with("hall_w") { "hall" } else { name.as_str() };
        selected.contains(&base)
    });
    report.ruled_out = report.tests.values().any(|t| t.is_ruled_out());
    let witness = first_witness(&report.tests);
    let mut payload = serde_json::to_value(&report).expect("report serializes");
    payload
        .as_object_mut()
        .expect("object")
        .insert("witness".into(), witness.map_or(Value::Null, Value::String));
    let mut res = CommandResult::ok(payload);
    if report.ruled_out {
        res.status = Status::RuledOut;
    }
    let mut rows = vec![vec!["test".to_string(), "verdict".into(), "detail".into()]];
    for (name, t) in &report.tests {
        let (verdict, detail) = match t {
            filters::TestVerdict::Pass { witness } => ("pass", witness.clone().unwrap_or_default()),
            filters::TestVerdict::RuledOut { witness } => ("ruled_out", witness.clone()),
            filters::TestVerdict::NotApplicable { reason } => ("not_applicable", reason.clone()),
        };
        rows.push(vec![name.clone(), verdict.into(), detail]);
    }
    res.csv = Some(rows);
    Ok(res)
}

fn cmd_search(a: &SearchArgs, budget: Option<u128>) -> CmdResult {
    let g = make_group(&a.group)?;
    let opts = SearchOptions {
        lambda: a.lambda,
        t: a.t,
        include_pds: a.include_pds,
        dedup: !a.no_dedup,
        budget: budget.unwrap_or_else(constructions::budget_from_env),
    };
    let r = constructions::brute_search(&g, a.k, &opts)?;
    let sets: Vec<Value> = r
        .sets
        .iter()
        .map(|c| {
            json!({
                "set": set_json(&g, &c.set),
                "claims": c.claims.iter().map(params_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut rows = vec![vec!["set".to_string(), "claims".into()]];
    for c in &r.sets {
        let claims: Vec<String> = c.claims.iter().map(Params::to_string).collect();
        rows.push(vec![g.format_set(&c.set), claims.join(" ")]);
    }
    let mut res = CommandResult::ok(json!({
        "group": g.descriptor(),
        "k": a.k,
        "raw_count": r.raw_count,
        "classes": r.sets.len(),
        "dedup": opts.dedup,
        "sets": sets,
    }));
    res.csv = Some(rows);
    Ok(res)
}

fn parse_bits(text: &str) -> Result<SeqBits, Error> {
    let line: String = text.split_whitespace().collect();
    line.parse::<SeqBits>()
}

fn spectrum_payload(s: &SeqBits, full: bool) -> Result<Value, Error> {
    let sp = sequences::autocorr_spectrum(s);
    let mut v = serde_json::to_value(&sp).expect("spectrum serializes");
    let m = v.as_object_mut().expect("object");
    if !full {
        m.remove("values");
    }
    let off: Map<String, Value> = sp.off_peak.iter().map(|(k, n)| (k.to_string(), json!(n))).collect();
    m.insert("off_peak".into(), Value::Object(off));
    m.insert("weight".into(), json!(s.weight()));
    let ads = sequences::ads_from_sequence(s)?;
    m.insert(
        "support_ads".into(),
        ads.map_or(Value::Null, |v| params_json(&v.params())),
    );
    Ok(v)
}

fn cmd_autocorr(a: &AutocorrArgs) -> CmdResult {
    let s = match (&a.seq, &a.support) {
        (Some(seq), _) => parse_bits(&read_inline_or_file(seq)?)?,
        (None, Some(sup)) => {
            let n = need(a.period, "period")?;
            let g = GroupCtx::cyclic(n)?;
            let set = parse_one_set(&g, sup)?;
            let d: Vec<u64> = set.iter().map(|e| e.0 as u64).collect();
            sequences::char_seq(&d, n)?
        }
        (None, None) => return Err(Error::Parse("give --seq or --support with --period".into())),
    };
    let payload = spectrum_payload(&s, a.full)?;
    let sp = sequences::autocorr_spectrum(&s);
    let mut rows = vec![vec!["w".to_string(), "C".into()]];
    rows.extend(sp.values.iter().enumerate().map(|(w, c)| vec![w.to_string(), c.to_string()]));
    let mut res = CommandResult::ok(payload);
    res.csv = Some(rows);
    Ok(res)
}

fn seed_sequence(spec: &str) -> Result<(String, SeqBits), Error> {
    if let Some((kind, n)) = spec.split_once(':') {
        let n: u64 = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad seed parameter in `{spec}`")))?;
        let from_set = |c: ConstructedSet| -> Result<SeqBits, Error> {
            let d: Vec<u64> = c.set.iter().map(|e| e.0 as u64).collect();
            sequences::char_seq(&d, c.group.order())
        };
        let bits = match kind {
            "qr" | "legendre" => from_set(constructions::paley_hadamard_ds(HadamardKind::Qr(n))?)?,
            "mseq" => sequences::mseq(n as u32)?,
            "singer" => from_set(constructions::paley_hadamard_ds(HadamardKind::Singer(n as u32))?)?,
            "twin_prime" => from_set(constructions::paley_hadamard_ds(HadamardKind::TwinPrime(n))?)?,
            "hall_sextic" => from_set(constructions::paley_hadamard_ds(HadamardKind::HallSextic(n))?)?,
            other => return Err(Error::Parse(format!("unknown seed family `{other}`"))),
        };
        return Ok((spec.to_string(), bits));
    }
    let path = Path::new(spec);
    if !path.is_file() {
        return Err(Error::Parse(format!("`{spec}` is neither a seed family nor a file")));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((format!("file:{spec}"), parse_bits(&text)?))
}

fn cmd_interleave(a: &InterleaveArgs) -> CmdResult {
    let (name, mut seed) = seed_sequence(&a.seed)?;
    if a.complement {
        seed = seed.complement();
    }
    let u = sequences::interleave(&seed, a.delta)?;
    let c = sequences::support(&seed);
    let l = seed.period() as u64;
    let (d, phi) = sequences::interleave_support_set(&c, l, a.delta as u64)?;
    let g = GroupCtx::cyclic(4 * l as usize)?;
    let elems: Vec<Elem> = d.iter().map(|&x| Elem(x as usize)).collect();
    let cls = diffcore::classify_basic(&g, &elems)?;
    let payload = json!({
        "seed": { "source": name, "period": l, "weight": seed.weight(), "complemented": a.complement },
        "delta": a.delta,
        "sequence": u.to_string(),
        "spectrum": spectrum_payload(&u, false)?,
        "support": d,
        "rows": phi.rows,
        "verdicts": cls.params().iter().map(params_json).collect::<Vec<_>>(),
    });
    Ok(CommandResult::ok(payload))
}

fn field_for(q: u64, gamma: Option<u64>) -> Result<std::sync::Arc<gf::FieldCtx>, Error> {
    let f = gf::field_of_order(q)?;
    match gamma {
        Some(g) => f.with_gamma(g),
        None => Ok(f),
    }
}

fn matrix_rows(m: &[Vec<u64>]) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(u64::to_string).collect()).collect()
}

fn cycnum_payload(q: u64, e: usize, method: Method, gamma: Option<u64>) -> Result<Value, Error> {
    let field = field_for(q, gamma)?;
    let cyc = cyc_classes(&field, e)?;
    let mut out = json!({ "q": q, "e": e, "gamma": field.gamma() });
    let m = out.as_object_mut().expect("object");
    let matrix = match method {
        Method::Direct => {
            m.insert("method".into(), json!("direct"));
            cyc.matrix_direct()
        }
        Method::Closed => {
            let closed = cyc.resolve_closed()?;
            m.insert("method".into(), json!("closed"));
            m.insert("partition".into(), serde_json::to_value(closed.partition).expect("partition"));
            m.insert("sign".into(), json!(closed.sign));
            closed.matrix
        }
    };
    m.insert("matrix".into(), json!(matrix));
    Ok(out)
}

fn cmd_cycnum(a: &CycnumArgs, gamma: Option<u64>) -> CmdResult {
    let payload = cycnum_payload(a.q, a.e, a.method, gamma)?;
    let matrix: Vec<Vec<u64>> = serde_json::from_value(payload["matrix"].clone()).expect("matrix");
    let mut res = CommandResult::ok(payload);
    res.csv = Some(matrix_rows(&matrix));
    Ok(res)
}

fn cmd_table(a: &TableArgs, gamma: Option<u64>) -> CmdResult {
    let kinds = [a.candidates.is_some(), a.summary, a.cycnum].iter().filter(|&&b| b).count();
    if kinds != 1 {
        return Err(Error::Parse("table needs exactly one of --candidates, --summary, --cycnum".into()));
    }
    if let Some(kind) = a.candidates {
        let cands = match kind {
            CandidateKind::T1 => filters::t1_candidates(a.vmax),
            CandidateKind::Tv2 => filters::tv2_candidates(a.vmax),
        };
        let opts = HallOptions::default();
        let mut rows = vec![vec![
            "v".to_string(),
            "k".into(),
            "lambda".into(),
            "t".into(),
            "parity_ruled_out".into(),
            "ruled_out".into(),
            "witness".into(),
        ]];
        let mut entries = Vec::new();
        for p in &cands {
            let r = filters::run_all(p, None, &opts);
            let witness = first_witness(&r.tests);
            let parity = match kind {
                CandidateKind::T1 => filters::parity_t1_test(p),
                CandidateKind::Tv2 => filters::parity_tv2_test(p),
            }
            .is_ruled_out();
            rows.push(vec![
                p.v.to_string(),
                p.k.to_string(),
                p.lambda.to_string(),
                p.t.to_string(),
                parity.to_string(),
                r.ruled_out.to_string(),
                witness.clone().unwrap_or_default(),
            ]);
            entries.push(json!({
                "params": p,
                "parity_ruled_out": parity,
                "ruled_out": r.ruled_out,
                "witness": witness,
            }));
        }
        let ruled = entries.iter().filter(|e| e["ruled_out"] == json!(true)).count();
        let parity = entries.iter().filter(|e| e["parity_ruled_out"] == json!(true)).count();
        let mut res = CommandResult::ok(json!({
            "table": match kind { CandidateKind::T1 => "t1", CandidateKind::Tv2 => "tv2" },
            "vmax": a.vmax,
            "count": entries.len(),
            "ruled_out": ruled,
            "parity_ruled_out": parity,
            "candidates": entries,
        }));
        res.csv = Some(rows);
        return Ok(res);
    }
    if a.summary {
        let mut rows = vec![vec![
            "row".to_string(),
            "q".into(),
            "condition".into(),
            "literal_condition".into(),
            "scan".into(),
        ]];
        let mut per_row = Map::new();
        let mut mismatches = Vec::new();
        for row in SummaryRow::ALL {
            let mut hits = Vec::new();
            for q in (3..=a.qmax).filter(|&q| q % 2 == 1 && arith::is_prime_power(q)) {
                if (q - 1) % row.order() as u64 != 0 {
                    continue;
                }
                let scan = row.scan(q)?;
                let cond = row.condition(q);
                let lit = row.literal_condition(q);
                if scan {
                    hits.push(q);
                }
                if scan != cond {
                    mismatches.push(json!({ "row": row.label(), "q": q, "scan": scan, "condition": cond }));
                }
                if scan || cond || lit {
                    rows.push(vec![row.label().into(), q.to_string(), cond.to_string(), lit.to_string(), scan.to_string()]);
                }
            }
            per_row.insert(row.label().into(), json!(hits));
        }
        let mut res = CommandResult::ok(json!({
            "qmax": a.qmax,
            "ads_q": per_row,
            "mismatches": mismatches,
        }));
        res.csv = Some(rows);
        return Ok(res);
    }
    let mut mats = Vec::new();
    let mut rows = vec![vec!["q".to_string(), "i".into(), "j".into(), "value".into()]];
    for q in (3..=a.qmax).filter(|&q| q % 2 == 1 && arith::is_prime_power(q) && (q - 1) % a.e as u64 == 0) {
        let method = if (2..=4).contains(&a.e) { Method::Closed } else { Method::Direct };
        let p = cycnum_payload(q, a.e, method, gamma)?;
        let matrix: Vec<Vec<u64>> = serde_json::from_value(p["matrix"].clone()).expect("matrix");
        for (i, r) in matrix.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                rows.push(vec![q.to_string(), i.to_string(), j.to_string(), x.to_string()]);
            }
        }
        mats.push(p);
    }
    let mut res = CommandResult::ok(json!({ "e": a.e, "qmax": a.qmax, "matrices": mats }));
    res.csv = Some(rows);
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> CommandResult {
        let cli = Cli::try_parse_from(std::iter::once("adskit").chain(args.iter().copied())).unwrap();
        dispatch(&cli)
    }

    #[test]
    fn verify_example() {
        let r = go(&["verify", "--group", "zv:13", "--set", "1,3,9"]);
        assert_eq!(r.status, Status::Ok);
        let v = &r.payload["verdicts"][0];
        assert_eq!(v["type"], "ADS");
        assert_eq!((v["v"].as_u64(), v["k"].as_u64(), v["lambda"].as_u64(), v["t"].as_u64()), (Some(13), Some(3), Some(0), Some(6)));
    }

    #[test]
    fn filter_example() {
        let r = go(&["filter", "--params", "44,7,0,1"]);
        assert_eq!(r.status, Status::RuledOut);
        assert_eq!(r.exit_code(), 0);
        assert_eq!(r.payload["witness"], "t = 1, k odd: v ≡ 4 (mod 8)");
    }

    #[test]
    fn construct_cor55() {
        let r = go(&["construct", "--family", "cor55", "--l", "7"]);
        assert_eq!(r.status, Status::Ok);
        let claims = r.payload["claims"].as_array().unwrap();
        let ads = claims.iter().find(|c| c["type"] == "ADS").unwrap();
        assert_eq!((&ads["v"], &ads["k"], &ads["lambda"], &ads["t"]), (&json!(28), &json!(13), &json!(5), &json!(6)));
        assert_eq!(r.payload["set"].as_array().unwrap().len(), 13);
        assert!(r.payload["set"][0].is_string());
    }

    #[test]
    fn precondition_exit_code() {
        let r = go(&["construct", "--family", "paley_qr", "--q", "15"]);
        assert_eq!(r.status, Status::PreconditionFailed);
        assert_eq!(r.exit_code(), 1);
        let r = go(&["verify", "--group", "zv:7", "--set", "1,x"]);
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn csv_cycnum() {
        let r = go(&["cycnum", "--q", "13", "--e", "4", "--method", "closed"]);
        let text = render(&r, Format::Csv).unwrap();
        assert_eq!(text.lines().count(), 4);
    }
}
