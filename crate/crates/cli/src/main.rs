use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use dgmod::catalog::{by_name, NamedModule, Role};
use dgmod::constructions::{tensor_algebras, tensor_modules_over};
use dgmod::dg::validate_all;
use dgmod::io::{export_algebra, export_entry, export_module, load, DefinitionFile, Loaded, ReportFile, ReportRecord};
use dgmod::resolution::Workspace;
use dgmod::semidual::{is_semidualizing, theorem_suite, SuiteCase};
use dgmod::{DGModule, Field, FieldSpec, PrimeField, Rationals, Verdict, VerdictReport};

#[derive(Parser)]
#[command(name = "dgmod", version, about = "Semidualizing DG modules over finite-dimensional DG algebras")]
struct Cli {
    /// Record wall-clock time per check in reports.
    #[arg(long, global = true)]
    timing: bool,
    /// Field for catalog names given in place of files: `rationals` or a prime.
    #[arg(long, global = true, default_value = "101")]
    field: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every validator on the objects of a definition file.
    Validate {
        path: String,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Write the tensor product of two algebras and of their modules.
    Tensor {
        a: String,
        b: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide whether a module is semidualizing.
    Semidualizing {
        algebra: String,
        module: String,
        /// Module name or role in the module file.
        #[arg(long = "module")]
        select: Option<String>,
        #[arg(long)]
        degree_bound: i64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the tensor theorem suite over `A1 ⊗ A2`.
    Suite {
        #[arg(long, num_args = 2, value_names = ["A1", "A2"])]
        algebras: Vec<String>,
        /// `M1:N1,M2:N2,...` or `{M,N,...}^2`.
        #[arg(long, default_value = "")]
        pairs: String,
        #[arg(long)]
        degree_bound: i64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Write a catalog entry as a definition file.
    Export {
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Failed(String),
}

impl From<dgmod::Error> for CliError {
    fn from(e: dgmod::Error) -> Self {
        use dgmod::Error::*;
        match e {
            FieldMismatch(..) | InvalidComplex(_) | InvalidStructure(_) => CliError::Failed(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Holds => 0,
        Verdict::Fails => 1,
        Verdict::Inconclusive => 3,
    }
}

fn parse_field(s: &str) -> CliResult<FieldSpec> {
    match s.to_ascii_lowercase().as_str() {
        "q" | "rationals" => Ok(FieldSpec::Rationals),
        t => t
            .trim_start_matches('f')
            .parse()
            .map(|p| FieldSpec::PrimeField { characteristic: p })
            .map_err(|_| CliError::Input(format!("bad field {s:?}"))),
    }
}

/// Runs `body` over the field named by `spec`.
macro_rules! with_field {
    ($spec:expr, |$f:ident| $body:expr) => {
        match $spec {
            FieldSpec::Rationals => {
                let $f = Rationals;
                $body
            }
            FieldSpec::PrimeField { characteristic } => {
                let $f = PrimeField::new(characteristic)?;
                $body
            }
        }
    };
}

/// A definition file, or a catalog entry when no such file exists.
fn read_source(src: &str, field: FieldSpec) -> CliResult<DefinitionFile> {
    let path = Path::new(src);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{src}: {e}")))?;
        let file: DefinitionFile = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{src}: {e}")))?;
        file.check_header()?;
        return Ok(file);
    }
    with_field!(field, |f| by_name(&f, src).map(|e| export_entry(&e)).map_err(|_| CliError::Input(format!("{src}: no such file or catalog entry"))))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Input(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn role_of(s: &str) -> Option<Role> {
    match s {
        "regular" => Some(Role::Regular),
        "residue" => Some(Role::Residue),
        "dualizing" => Some(Role::Dualizing),
        _ => None,
    }
}

/// Looks a module up by name, role, or the algebra's own name for the regular module.
fn find_module<F: Field>(loaded: &Loaded<F>, algebra: &str, key: &str) -> CliResult<DGModule<F>> {
    let entry = loaded.entry(algebra).ok_or_else(|| CliError::Input(format!("unknown algebra {algebra}")))?;
    let hit = entry
        .modules
        .iter()
        .find(|m| m.name == key)
        .or_else(|| role_of(key).and_then(|r| entry.modules.iter().find(|m| m.role == r)));
    match hit {
        Some(m) => Ok(m.module.clone()),
        None if key == algebra => Ok(DGModule::regular(entry.algebra.clone())),
        None => Err(CliError::Input(format!("no module {key} over {algebra}"))),
    }
}

fn first_algebra<F: Field>(loaded: &Loaded<F>, src: &str) -> CliResult<String> {
    loaded.algebras.first().map(|(n, _)| n.clone()).ok_or_else(|| CliError::Input(format!("{src}: no algebra")))
}

struct Recorder {
    timing: bool,
    records: Vec<ReportRecord>,
}

impl Recorder {
    fn push(&mut self, anchor: &str, report: VerdictReport, started: Instant) {
        let mut r = ReportRecord::from_report(anchor, report);
        if self.timing {
            r.timing_ms = Some(started.elapsed().as_millis() as u64);
        }
        self.records.push(r);
    }

    fn finish(self, path: Option<&Path>, summary: BTreeMap<String, String>) -> CliResult<Verdict> {
        let mut file = ReportFile::new(self.records);
        file.summary = summary;
        if let Some(p) = path {
            write_json(p, &file)?;
        }
        for r in &file.records {
            match &r.reason {
                Some(why) if r.verdict != Verdict::Holds => println!("{}: {} on {} ({why})", r.check, r.verdict, r.window),
                _ => println!("{}: {} on {}", r.check, r.verdict, r.window),
            }
        }
        Ok(file.verdict())
    }
}

fn cmd_validate<F: Field>(f: &F, file: &DefinitionFile, rec: &mut Recorder) -> CliResult<()> {
    let started = Instant::now();
    let loaded = match load(f, file, &Loaded::default()) {
        Ok(l) => l,
        Err(e @ (dgmod::Error::InvalidComplex(_) | dgmod::Error::InvalidStructure(_))) => {
            let axiom = if matches!(e, dgmod::Error::InvalidComplex(_)) { "d²=0" } else { "structure" };
            let r = VerdictReport::fails("construction", e.to_string()).with_param("axiom", axiom);
            rec.push("DG structure", r, started);
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    for (name, a) in &loaded.algebras {
        let mods: Vec<&NamedModule<F>> = loaded.modules.iter().filter(|(n, _)| n == name).map(|(_, m)| m).collect();
        let refs: Vec<&DGModule<F>> = mods.iter().map(|m| &m.module).collect();
        let reports = validate_all(a, &refs);
        let k = reports.len() - mods.len();
        for (i, mut r) in reports.into_iter().enumerate() {
            let object = if i < k { name.clone() } else { format!("{name}/{}", mods[i - k].name) };
            r.check = format!("{object}: {}", r.check);
            rec.push("DG structure", r, started);
        }
    }
    Ok(())
}

fn combine_roles(a: Role, b: Role) -> Role {
    if a == b {
        a
    } else {
        Role::Other
    }
}

fn cmd_tensor<F: Field>(f: &F, fa: &DefinitionFile, fb: &DefinitionFile, srcs: (&str, &str)) -> CliResult<DefinitionFile> {
    let la = load(f, fa, &Loaded::default())?;
    let lb = load(f, fb, &Loaded::default())?;
    let (na, nb) = (first_algebra(&la, srcs.0)?, first_algebra(&lb, srcs.1)?);
    let (a, b) = (la.algebra(&na).unwrap(), lb.algebra(&nb).unwrap());
    let t = Arc::new(tensor_algebras(a, b)?);
    let name = format!("{na}⊗{nb}");
    let mut out = DefinitionFile::new(f.spec());
    out.algebras.push(export_algebra(&name, &t));
    let ea = la.entry(&na).unwrap();
    let eb = lb.entry(&nb).unwrap();
    let both = |e: &dgmod::catalog::CatalogEntry<F>| -> Vec<NamedModule<F>> {
        if e.modules.is_empty() {
            vec![NamedModule { name: e.name.clone(), role: Role::Regular, module: DGModule::regular(e.algebra.clone()) }]
        } else {
            e.modules.clone()
        }
    };
    for m in both(&ea) {
        for n in both(&eb) {
            let mn = tensor_modules_over(t.clone(), &m.module, &n.module)?;
            out.modules.push(export_module(&format!("{}⊗{}", m.name, n.name), &name, combine_roles(m.role, n.role), &mn));
        }
    }
    // the output must load and validate
    let back = load(f, &out, &Loaded::default())?;
    let mods: Vec<&DGModule<F>> = back.modules.iter().map(|(_, m)| &m.module).collect();
    let reports = validate_all(back.algebra(&name).unwrap(), &mods);
    if let Some(r) = reports.iter().find(|r| !r.is_holds()) {
        return Err(CliError::Failed(format!("tensor product does not validate: {}", r.reason.clone().unwrap_or_default())));
    }
    Ok(out)
}

fn cmd_semidualizing<F: Field>(
    f: &F,
    fa: &DefinitionFile,
    fm: &DefinitionFile,
    select: Option<&str>,
    d: i64,
    rec: &mut Recorder,
) -> CliResult<()> {
    let la = load(f, fa, &Loaded::default())?;
    let lm = load(f, fm, &la)?;
    let alg = first_algebra(&la, "algebra file")?;
    let module = match select {
        Some(key) => {
            let mut all = la.clone();
            all.modules.extend(lm.modules.iter().cloned());
            find_module(&all, &alg, key)?
        }
        None => {
            let over: Vec<&NamedModule<F>> = lm.modules.iter().filter(|(n, _)| *n == alg).map(|(_, m)| m).collect();
            match over.as_slice() {
                [m] => m.module.clone(),
                [] if lm.algebra(&alg).is_some() => DGModule::regular(la.algebra(&alg).unwrap().clone()),
                _ => return Err(CliError::Input(format!("module file has {} modules over {alg}; pass --module", over.len()))),
            }
        }
    };
    let ws = Workspace::new();
    let started = Instant::now();
    let r = is_semidualizing(&ws, &module, d)?;
    rec.push("semidualizing module", r.with_param("D", d), started);
    Ok(())
}

fn parse_pairs(spec: &str) -> CliResult<Vec<(String, String)>> {
    let s = spec.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(inner) = s.strip_prefix('{').and_then(|t| t.strip_suffix("}^2")) {
        let names: Vec<String> = inner.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect();
        return Ok(names.iter().flat_map(|a| names.iter().map(move |b| (a.clone(), b.clone()))).collect());
    }
    s.split(',')
        .map(|p| {
            let p = p.trim().trim_start_matches('(').trim_end_matches(')');
            p.split_once(':')
                .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                .ok_or_else(|| CliError::Input(format!("bad pair {p:?}")))
        })
        .collect()
}

fn anchor_of(check: &str) -> &'static str {
    let tail = check.rsplit(": ").next().unwrap_or(check);
    match tail {
        "semidualizing tensor" => "tensor product of semidualizing modules",
        "semidualizing converse" => "factors of a semidualizing tensor product",
        "Bass tensor" => "Bass class",
        "Auslander tensor" => "Auslander class",
        "reflexive tensor" => "derived reflexivity",
        "shift compatibility" => "shift classes",
        "injectivity" | "well-definedness" => "tensor map on shift classes",
        _ => "tensor theorems",
    }
}

fn cmd_suite<F: Field>(
    f: &F,
    f1: &DefinitionFile,
    f2: &DefinitionFile,
    pairs: &[(String, String)],
    d: i64,
    rec: &mut Recorder,
) -> CliResult<BTreeMap<String, String>> {
    let l1 = load(f, f1, &Loaded::default())?;
    let l2 = load(f, f2, &Loaded::default())?;
    let (n1, n2) = (first_algebra(&l1, "first algebra")?, first_algebra(&l2, "second algebra")?);
    let mut cases = Vec::new();
    for (a, b) in pairs {
        cases.push(SuiteCase { names: (a.clone(), b.clone()), modules: (find_module(&l1, &n1, a)?, find_module(&l2, &n2, b)?) });
    }
    let mut summary = BTreeMap::new();
    if cases.is_empty() {
        return Ok(summary);
    }
    let ws = Workspace::new();
    let started = Instant::now();
    let suite = theorem_suite(&ws, l1.algebra(&n1).unwrap(), l2.algebra(&n2).unwrap(), &cases, d)?;
    for r in suite.reports {
        let anchor = anchor_of(&r.check);
        rec.push(anchor, r, started);
    }
    summary.insert("image_count".into(), suite.image_count.map_or("undecided".into(), |n| n.to_string()));
    summary.insert("D".into(), d.to_string());
    Ok(summary)
}

fn run(cli: Cli) -> CliResult<u8> {
    let default_field = parse_field(&cli.field)?;
    let mut rec = Recorder { timing: cli.timing, records: Vec::new() };
    match cli.command {
        Command::Validate { path, report } => {
            let file = read_source(&path, default_field)?;
            with_field!(file.field, |f| cmd_validate(&f, &file, &mut rec))?;
            Ok(exit_code(rec.finish(report.as_deref(), BTreeMap::new())?))
        }
        Command::Tensor { a, b, out } => {
            let (fa, fb) = (read_source(&a, default_field)?, read_source(&b, default_field)?);
            let file = with_field!(fa.field, |f| cmd_tensor(&f, &fa, &fb, (&a, &b)))?;
            write_json(&out, &file)?;
            println!("{}: dims {:?}", file.algebras[0].name, file.algebras[0].dims);
            Ok(0)
        }
        Command::Semidualizing { algebra, module, select, degree_bound, report } => {
            let (fa, fm) = (read_source(&algebra, default_field)?, read_source(&module, default_field)?);
            with_field!(fa.field, |f| cmd_semidualizing(&f, &fa, &fm, select.as_deref(), degree_bound, &mut rec))?;
            Ok(exit_code(rec.finish(report.as_deref(), BTreeMap::new())?))
        }
        Command::Suite { algebras, pairs, degree_bound, report } => {
            let pairs = parse_pairs(&pairs)?;
            let (f1, f2) = (read_source(&algebras[0], default_field)?, read_source(&algebras[1], default_field)?);
            let summary = with_field!(f1.field, |f| cmd_suite(&f, &f1, &f2, &pairs, degree_bound, &mut rec))?;
            if let Some(n) = summary.get("image_count") {
                println!("image count: {n}");
            }
            Ok(exit_code(rec.finish(report.as_deref(), summary)?))
        }
        Command::Export { name, out } => {
            let file = with_field!(default_field, |f| by_name(&f, &name).map(|e| export_entry(&e)))?;
            write_json(&out, &file)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Input(_) => 2,
                CliError::Failed(_) => 1,
            })
        }
    }
}
