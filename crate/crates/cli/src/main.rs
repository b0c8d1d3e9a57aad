use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use depthtower::builders::tower_from_chain;
use depthtower::depth::{extract_quasibases, is_ld2, is_rd2, verify_quasibases, Side};
use depthtower::galois::{frobenius, jb_roundtrip, simple_algebra_correspondence, FieldTower};
use depthtower::groups::{FiniteGroup, Perm, SubgroupChain};
use depthtower::grouptower::{census, census_jsonl, verified_group_quasibases, CensusOptions};
use depthtower::structures::{structure_report, Check};
use depthtower::towerfile::{
    certificate_hash, check_dim, load_tower_file, max_dim, quasibase_certificate, quasibases_from_certificate, TowerFile,
};
use depthtower::{Error, Field, Result};

#[derive(Parser)]
#[command(name = "depthtower", version, about = "Exact depth decisions and structure checks for towers of algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Include wall-clock timings (output is then no longer reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Right,
    Left,
    Both,
}

impl SideArg {
    fn sides(self) -> Vec<Side> {
        match self {
            SideArg::Right => vec![Side::Right],
            SideArg::Left => vec![Side::Left],
            SideArg::Both => vec![Side::Right, Side::Left],
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide right and left depth three (and depth two when B = C).
    Depth {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
        /// Print quasibases in full instead of their hash.
        #[arg(long)]
        emit_certificate: bool,
    },
    /// Normal closure, the group criterion and double cosets for K <= H <= G.
    Groups {
        /// Generators of G in cycle notation, e.g. "(1 2 3)".
        #[arg(long = "g", required = true)]
        g: Vec<String>,
        #[arg(long = "h")]
        h: Vec<String>,
        #[arg(long = "k")]
        k: Vec<String>,
        #[arg(long, default_value = "Q")]
        field: String,
        /// Build and verify the double-coset quasibases.
        #[arg(long)]
        quasibases: bool,
    },
    /// Run structure checks on a tower file, or weakhopf on a groupoid file.
    Structures {
        file: PathBuf,
        /// Comma-separated subset of morita, anchors, pairing, coring,
        /// pregalois, coproduct, smash, invariants, weakhopf.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
    },
    /// Decide every tower of the small-group catalog.
    Census {
        #[arg(long, default_value_t = 8)]
        max_order: usize,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        jobs: Option<usize>,
        /// Over F_p, keep groups whose order p divides.
        #[arg(long)]
        include_modular: bool,
    },
    /// Gal/Fix round trips for F_{p^n}, or for a simple algebra file.
    Jb {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, conflicts_with_all = ["p", "n"])]
        file: Option<PathBuf>,
    },
    /// Emit quasibase certificates, or re-verify a saved one.
    Quasibases {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
        /// A certificate or report previously written by this command.
        #[arg(long)]
        verify: Option<PathBuf>,
    },
}

/// A report and its exit code.
struct Outcome {
    report: Value,
    code: u8,
}

impl Outcome {
    fn verdict(report: Value, passed: bool) -> Outcome {
        Outcome { report, code: if passed { 0 } else { 1 } }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Invariant(_) => 3,
        _ => 2,
    }
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Right => "rd3",
        Side::Left => "ld3",
    }
}

fn failing_check(s: Side) -> &'static str {
    match s {
        Side::Right => "A ⊗_B A is not a direct summand of A^N as A-C bimodules",
        Side::Left => "A ⊗_B A is not a direct summand of A^N as C-A bimodules",
    }
}

fn load_tower(path: &Path) -> Result<(TowerFile, depthtower::algebra::Tower)> {
    let tf = load_tower_file(path)?;
    let t = tf.tower.clone().ok_or_else(|| Error::Precondition("this command needs a tower file, not a groupoid".into()))?;
    Ok((tf, t))
}

fn inputs(path: &Path, t: &depthtower::algebra::Tower) -> Value {
    json!({
        "file": path.display().to_string(),
        "field": t.field().to_string(),
        "dim_a": t.a.dim(),
        "dim_b": t.b.dim(),
        "dim_c": t.c.dim(),
    })
}

fn depth(path: &Path, side: SideArg, emit: bool) -> Result<Outcome> {
    let (tf, t) = load_tower(path)?;
    let mut verdicts = Map::new();
    let mut certs = Map::new();
    let mut passed = true;
    for s in side.sides() {
        match extract_quasibases(&t, s) {
            Ok(qb) => {
                verdicts.insert(side_name(s).into(), json!(true));
                let c = if emit { quasibase_certificate(&qb) } else { json!({ "sha256": certificate_hash(&qb), "size": qb.len() }) };
                certs.insert(side_name(s).into(), c);
            }
            Err(Error::NotDepth(_)) => {
                passed = false;
                verdicts.insert(side_name(s).into(), json!(false));
                certs.insert(side_name(s).into(), json!({ "failing_check": failing_check(s) }));
            }
            Err(e) => return Err(e),
        }
    }
    if t.b_image() == t.c_image() {
        let bg = t.b_gens_in_a();
        for (name, v, s) in [("rd2", is_rd2(&t.a, &bg)?, Side::Right), ("ld2", is_ld2(&t.a, &bg)?, Side::Left)] {
            passed &= v;
            verdicts.insert(name.into(), json!(v));
            let c = if v { json!({ "same_as": side_name(s) }) } else { json!({ "failing_check": failing_check(s) }) };
            certs.insert(name.into(), c);
        }
    }
    if let Some(g) = &tf.groups {
        verdicts.insert("group_criterion".into(), json!(g.chain()?.d3_criterion()));
    }
    Ok(Outcome::verdict(json!({ "command": "depth", "inputs": inputs(path, &t), "verdicts": verdicts, "certificates": certs }), passed))
}

fn parse_perms(xs: &[String]) -> Result<Vec<Perm>> {
    xs.iter().map(|s| Perm::parse(s)).collect()
}

fn groups(g: &[String], h: &[String], k: &[String], field: &str, quasibases: bool) -> Result<Outcome> {
    let field = Field::parse(field)?;
    let grp = FiniteGroup::from_permutations(&parse_perms(g)?, max_dim())?;
    let hs = grp.subgroup_from_perms(&parse_perms(h)?)?;
    let ks = grp.subgroup_from_perms(&parse_perms(k)?)?;
    let chain = SubgroupChain::new(&grp, hs.clone(), ks.clone())?;
    let labels = |xs: &[usize]| xs.iter().map(|&x| grp.label(x).to_string()).collect::<Vec<_>>();
    let closure = grp.normal_closure(&ks);
    let criterion = chain.d3_criterion();
    let cosets: Vec<Value> =
        grp.double_cosets(&hs, &ks).iter().map(|(r, m)| json!({ "representative": grp.label(*r), "size": m.len() })).collect();
    let mut report = json!({
        "command": "groups",
        "inputs": { "g": g, "h": h, "k": k, "field": field.to_string() },
        "orders": { "g": grp.order(), "h": hs.len(), "k": ks.len() },
        "normal_closure": labels(&closure),
        "verdicts": { "criterion": criterion },
        "double_cosets": { "count": cosets.len(), "classes": cosets },
    });
    if quasibases {
        check_dim(grp.order())?;
        let t = tower_from_chain(&chain, field);
        report["certificates"] = match verified_group_quasibases(&chain, &t) {
            Ok((r, l)) => json!({ "rd3": quasibase_certificate(&r), "ld3": quasibase_certificate(&l) }),
            Err(Error::Precondition(m)) | Err(Error::NotDepth(m)) => json!({ "failing_check": m }),
            Err(e) => return Err(e),
        };
    }
    Ok(Outcome::verdict(report, criterion))
}

fn structures(path: &Path, checks: &[String]) -> Result<Outcome> {
    let tf = load_tower_file(path)?;
    let checks: Vec<Check> = if checks.is_empty() {
        match &tf.tower {
            Some(_) => Check::ALL.iter().copied().filter(|c| c.needs_tower()).collect(),
            None => vec![Check::Weakhopf],
        }
    } else {
        checks.iter().map(|c| c.parse()).collect::<Result<_>>()?
    };
    let groupoid = tf.groupoid.as_deref();
    let report = structure_report(tf.tower.as_ref(), groupoid, &checks)?;
    let mut code = if report.passed() { 0 } else { 1 };
    for c in report.checks.values() {
        match &c.cause {
            Some(e @ Error::Invariant(_)) => return Err(e.clone()),
            Some(_) => code = 2,
            None => {}
        }
    }
    let mut out = json!({ "command": "structures", "inputs": { "file": path.display().to_string(), "field": tf.field.to_string() } });
    if let Some(t) = &tf.tower {
        out["inputs"] = inputs(path, t);
    }
    out["checks"] = report.to_json();
    Ok(Outcome { report: out, code })
}

fn run_census(max_order: usize, field: &str, jobs: Option<usize>, include_modular: bool, timings: bool) -> Result<(String, Value, u8)> {
    if max_order > 24 {
        return Err(Error::Precondition(format!("--max-order {max_order} exceeds 24")));
    }
    let opts = CensusOptions { max_order, field: Field::parse(field)?, timings, include_modular, ..CensusOptions::default() };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let c = pool.install(|| census(&opts))?;
    let code = if c.summary.violations > 0 { 3 } else { 0 };
    Ok((census_jsonl(&c), serde_json::to_value(&c.summary).unwrap_or_default(), code))
}

fn jb(p: Option<u64>, n: Option<usize>, file: Option<&Path>) -> Result<Outcome> {
    if let Some(path) = file {
        let (_, t) = load_tower(path)?;
        let r = simple_algebra_correspondence(&t.a)?;
        let passed = r.passed();
        return Ok(Outcome::verdict(
            json!({ "command": "jb", "inputs": { "file": path.display().to_string(), "field": t.field().to_string() }, "report": r }),
            passed,
        ));
    }
    let (p, n) = match (p, n) {
        (Some(p), Some(n)) => (p, n),
        (Some(p), None) => (p, 1),
        _ => return Err(Error::Precondition("jb needs --p and --n, or --file".into())),
    };
    Field::prime(p)?;
    if n == 0 {
        return Err(Error::Precondition("--n must be at least 1".into()));
    }
    let size = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > max_dim() as u128 {
        return Err(Error::DimensionCap { dim: size.min(usize::MAX as u128) as usize, cap: max_dim() });
    }
    let t = FieldTower::new(p, n)?;
    let r = jb_roundtrip(&t, &[vec![frobenius(&t.e, p, 1)]])?;
    let subfields: Vec<Value> = t.subfields.iter().map(|(d, s)| json!({ "d": d, "dim": s.dim() })).collect();
    let passed = r.passed();
    Ok(Outcome::verdict(
        json!({
            "command": "jb",
            "inputs": { "p": p, "n": n, "modulus": t.poly },
            "subfields": subfields,
            "verdicts": { "round_trips": passed },
            "report": r,
        }),
        passed,
    ))
}

fn quasibases(path: &Path, side: SideArg, verify: Option<&Path>) -> Result<Outcome> {
    let (_, t) = load_tower(path)?;
    if let Some(cert_path) = verify {
        let text =
            std::fs::read_to_string(cert_path).map_err(|e| Error::Parse { line: 0, msg: format!("{}: {e}", cert_path.display()) })?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        let certs: Vec<(String, &Value)> = match v.get("certificates").and_then(Value::as_object) {
            Some(m) => m.iter().filter(|(_, c)| c.get("side").is_some()).map(|(k, c)| (k.clone(), c)).collect(),
            None => vec![("certificate".into(), &v)],
        };
        let mut verdicts = Map::new();
        let mut passed = !certs.is_empty();
        for (name, c) in certs {
            let status = verify_quasibases(&t, &quasibases_from_certificate(c, t.field())?)?;
            passed &= status.is_verified();
            verdicts.insert(name, serde_json::to_value(&status).unwrap_or_default());
        }
        return Ok(Outcome::verdict(json!({ "command": "quasibases", "inputs": inputs(path, &t), "verified": verdicts }), passed));
    }
    let mut certs = Map::new();
    let mut verdicts = Map::new();
    let mut passed = true;
    for s in side.sides() {
        match extract_quasibases(&t, s) {
            Ok(qb) => {
                verdicts.insert(side_name(s).into(), json!(true));
                certs.insert(side_name(s).into(), quasibase_certificate(&qb));
            }
            Err(Error::NotDepth(_)) => {
                passed = false;
                verdicts.insert(side_name(s).into(), json!(false));
                certs.insert(side_name(s).into(), json!({ "failing_check": failing_check(s) }));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Outcome::verdict(
        json!({ "command": "quasibases", "inputs": inputs(path, &t), "verdicts": verdicts, "certificates": certs }),
        passed,
    ))
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::Array(xs) => out.push((prefix.into(), xs.iter().map(scalar_text).collect::<Vec<_>>().join(", "))),
        x => out.push((prefix.into(), scalar_text(x))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        x => x.to_string(),
    }
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).unwrap_or_default(),
        Format::Text => {
            let mut rows = Vec::new();
            flatten("", v, &mut rows);
            let w = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
            rows.iter().map(|(k, x)| format!("{k:<w$}  {x}")).collect::<Vec<_>>().join("\n")
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = match &cli.command {
        Command::Depth { file, side, emit_certificate } => depth(file, *side, *emit_certificate),
        Command::Groups { g, h, k, field, quasibases: q } => groups(g, h, k, field, *q),
        Command::Structures { file, checks } => structures(file, checks),
        Command::Jb { p, n, file } => jb(*p, *n, file.as_deref()),
        Command::Quasibases { file, side, verify } => quasibases(file, *side, verify.as_deref()),
        Command::Census { max_order, field, jobs, include_modular } => {
            match run_census(*max_order, field, *jobs, *include_modular, cli.timings) {
                Ok((lines, summary, code)) => {
                    match cli.format {
                        Format::Json => emit(&lines),
                        Format::Text => emit(&format!("{}\n", render(&json!({ "summary": summary }), Format::Text))),
                    }
                    return ExitCode::from(code);
                }
                Err(e) => Err(e),
            }
        }
    };
    match result {
        Ok(mut o) => {
            if cli.timings {
                o.report["timings"] = json!({ "millis": start.elapsed().as_millis() as u64 });
            }
            emit(&format!("{}\n", render(&o.report, cli.format)));
            ExitCode::from(o.code)
        }
        Err(e) => {
            eprintln!("depthtower: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
