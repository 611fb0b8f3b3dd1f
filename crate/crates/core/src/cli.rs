//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or unsupported request, 2 unreadable or
//! malformed input, 3 hypothesis violation, 4 internal inconsistency.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fixtures::{fixture, HypersurfaceSpec};
use crate::hs::HochschildSerre;
use crate::ivhs::{compare_fingerprints, fingerprint, ivhs_of};
use crate::jacobian::JacobianRing;
use crate::normalform::{complete_power, jacobian_elimination_check};
use crate::wpoly::WPolynomial;

pub const SCHEMA_VERSION: u32 = 1;
pub const THREADS_ENV: &str = "KUZALG_THREADS";

#[derive(Parser, Debug)]
#[command(name = "kuzalg", version, about = "Jacobian rings, Hochschild-Serre tables and IVHS data of weighted hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hilbert function, socle degree and Milnor number of Jac(omega).
    Jac {
        #[command(flatten)]
        common: Common,
        /// Last degree of the Hilbert function; defaults to the socle degree.
        #[arg(long)]
        t_max: Option<i64>,
    },
    /// Sector census: fixed loci, ranks, shifts and Jacobian dimensions.
    Sectors {
        #[command(flatten)]
        common: Common,
    },
    /// dim Hom(Delta, Delta(t)[m]) for m in {0, 1}.
    HsTable {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        t_min: i64,
        /// Defaults to sigma + w.
        #[arg(long)]
        t_max: Option<i64>,
        /// Include per-sector contributions in JSON and text output.
        #[arg(long)]
        breakdown: bool,
    },
    /// Hodge pieces and the fingerprint of the infinitesimal variation.
    Ivhs {
        #[command(flatten)]
        common: Common,
    },
    /// Compares IVHS fingerprints of two hypersurfaces.
    Compare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        other: OtherInput,
    },
    /// Recovery-condition report.
    Check {
        #[command(flatten)]
        common: Common,
    },
    /// Completes a pure power `x_var^exponent`.
    Normalize {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        var: usize,
        #[arg(long)]
        exponent: u32,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Input {
    /// Hypersurface description (JSON).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Name of a bundled fixture.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct OtherInput {
    #[arg(long)]
    other: Option<PathBuf>,
    #[arg(long)]
    other_fixture: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

/// One result in every output format.
struct Report {
    json: Value,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    text: String,
}

impl Report {
    fn render(self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("json values serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).expect("in-memory write");
                for r in &self.rows {
                    w.write_record(r).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv of utf-8 fields")
            }
            Format::Text => self.text,
        }
    }
}

fn with_schema(body: Value) -> Value {
    let mut out = json!({ "schema": SCHEMA_VERSION });
    if let (Value::Object(o), Value::Object(b)) = (&mut out, body) {
        o.extend(b);
    }
    out
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Structural(_) => 2,
        Error::Hypothesis { .. } => 3,
        Error::Inconsistent(_) => 4,
        Error::Mismatch(_) | Error::Refused(_) => 1,
    }
}

fn load(path: Option<&PathBuf>, name: Option<&String>) -> Result<HypersurfaceSpec> {
    match (path, name) {
        (Some(p), _) => {
            let text = fs::read_to_string(p)
                .map_err(|e| Error::structural(format!("cannot read {}: {e}", p.display())))?;
            HypersurfaceSpec::from_json(&text)
        }
        (None, Some(n)) => fixture(n),
        (None, None) => Err(Error::structural("no input given")),
    }
}

fn describe(spec: &HypersurfaceSpec) -> Value {
    json!({
        "label": spec.label,
        "weights": spec.weights,
        "degree": spec.degree,
        "polynomial": spec.polynomial,
    })
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        // fails only if a pool already exists in this process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let (common, result) = dispatch(&cli.command);
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let rendered = report.render(common.format);
    match &common.out {
        Some(path) => {
            if let Err(e) = fs::write(path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 1;
            }
        }
        None => print!("{rendered}"),
    }
    0
}

fn dispatch(command: &Command) -> (&Common, Result<Report>) {
    match command {
        Command::Jac { common, t_max } => (common, jac(common, *t_max)),
        Command::Sectors { common } => (common, sectors(common)),
        Command::HsTable {
            common,
            t_min,
            t_max,
            breakdown,
        } => (common, hs_table(common, *t_min, *t_max, *breakdown)),
        Command::Ivhs { common } => (common, ivhs(common)),
        Command::Compare { common, other } => (common, compare(common, other)),
        Command::Check { common } => (common, check(common)),
        Command::Normalize { common, var, exponent } => (common, normalize(common, *var, *exponent)),
    }
}

fn input(common: &Common) -> Result<(HypersurfaceSpec, WPolynomial)> {
    let spec = load(common.input.input.as_ref(), common.input.fixture.as_ref())?;
    let f = spec.polynomial()?;
    Ok((spec, f))
}

fn joined<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn jac(common: &Common, t_max: Option<i64>) -> Result<Report> {
    let (spec, f) = input(common)?;
    let jac = JacobianRing::new(&f)?;
    let sigma = jac.socle_degree()?;
    let milnor = jac.milnor_number()?;
    let top = t_max.unwrap_or(sigma);
    let hilbert = jac.hilbert_function(top);
    let json = with_schema(json!({
        "input": describe(&spec),
        "socle_degree": sigma,
        "milnor_number": milnor,
        "milnor_product_formula": jac.milnor_product_formula().to_string(),
        "hilbert_function": hilbert,
    }));
    let rows = hilbert
        .iter()
        .enumerate()
        .map(|(e, d)| vec![e.to_string(), d.to_string()])
        .collect();
    let text = format!(
        "{}\nsocle degree: {sigma}\nMilnor number: {milnor}\nHilbert function (e = 0..{top}): {}\n",
        spec.label,
        joined(&hilbert, " ")
    );
    Ok(Report {
        json,
        header: vec!["e".into(), "dim".into()],
        rows,
        text,
    })
}

fn sectors(common: &Common) -> Result<Report> {
    let (spec, f) = input(common)?;
    let hs = HochschildSerre::new(&f)?;
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut text = format!("{}\n{:>3}  {:<16} {:>4} {:>5}  dims\n", spec.label, "j", "I_g", "rank", "k_g");
    for s in hs.sectors() {
        let jac = s.jacobian();
        let dims = jac.hilbert_function(jac.socle_degree()?);
        entries.push(json!({
            "j": s.j(),
            "moved": s.moved_variables(),
            "rank": s.rank(),
            "k_g": s.k_g(),
            "omega_g": s.omega_g().to_string(),
            "dims": dims,
        }));
        let moved = format!("{{{}}}", joined(s.moved_variables(), ","));
        rows.push(vec![
            s.j().to_string(),
            joined(s.moved_variables(), " "),
            s.rank().to_string(),
            s.k_g().to_string(),
            s.omega_g().to_string(),
            joined(&dims, " "),
        ]);
        text.push_str(&format!(
            "{:>3}  {:<16} {:>4} {:>5}  {}\n",
            s.j(),
            moved,
            s.rank(),
            s.k_g(),
            joined(&dims, " ")
        ));
    }
    Ok(Report {
        json: with_schema(json!({ "input": describe(&spec), "sectors": entries })),
        header: ["j", "moved", "rank", "k_g", "omega_g", "dims"].map(String::from).to_vec(),
        rows,
        text,
    })
}

fn hs_table(common: &Common, t_min: i64, t_max: Option<i64>, breakdown: bool) -> Result<Report> {
    let (spec, f) = input(common)?;
    let hs = HochschildSerre::new(&f)?;
    let t_max = t_max.unwrap_or(hs.socle_degree() + hs.total_weight());
    if t_max < t_min {
        return Err(Error::Mismatch(format!("empty range: t_min = {t_min} > t_max = {t_max}")));
    }
    let table = hs.table(t_min, t_max);
    let sectors = table.num_sectors();
    let mut header: Vec<String> = ["t", "m", "total"].map(String::from).to_vec();
    header.extend((0..sectors).map(|j| format!("j{j}")));
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut text = format!(
        "{}\nd = {}, w = {}, t0 = {}, sigma = {}\n{:>4} {:>2} {:>8}\n",
        spec.label, table.degree, table.total_weight, table.t0, table.socle_degree, "t", "m", "total"
    );
    for (t, m, e) in table.stored() {
        let mut entry = json!({ "t": t, "m": m, "total": e.total });
        if breakdown {
            entry["breakdown"] = json!(e.breakdown);
        }
        entries.push(entry);
        let mut row = vec![t.to_string(), m.to_string(), e.total.to_string()];
        row.extend(e.breakdown.iter().map(usize::to_string));
        rows.push(row);
        text.push_str(&format!("{t:>4} {m:>2} {:>8}", e.total));
        if breakdown {
            text.push_str(&format!("  = {}", joined(&e.breakdown, " + ")));
        }
        text.push('\n');
    }
    let json = with_schema(json!({
        "input": describe(&spec),
        "total_weight": table.total_weight,
        "t0": table.t0,
        "socle_degree": table.socle_degree,
        "t_min": table.t_min,
        "t_max": table.t_max,
        "entries": entries,
    }));
    Ok(Report { json, header, rows, text })
}

fn ivhs(common: &Common) -> Result<Report> {
    let (spec, f) = input(common)?;
    let data = ivhs_of(Arc::new(JacobianRing::new(&f)?))?;
    let fp = fingerprint(&data, common.seed);
    let mut text = format!(
        "{}\ndim Y = {}, dim T = {}\n{:>3} {:>6} {:>8}\n",
        spec.label, data.dimension, data.tangent_dim, "p", "degree", "h^{p,q}"
    );
    let mut rows = Vec::new();
    for p in &data.pieces {
        text.push_str(&format!("{:>3} {:>6} {:>8}\n", p.p, p.jacobian_degree, p.dim));
        rows.push(vec![p.p.to_string(), p.jacobian_degree.to_string(), p.dim.to_string()]);
    }
    for d in &fp.deltas {
        text.push_str(&format!(
            "delta[{}]: {} -> {}, flattened rank {}, surjective {}\n",
            d.t, d.source_degree, d.target_degree, d.flattened_rank, d.surjective
        ));
    }
    let json = with_schema(json!({
        "input": describe(&spec),
        "dimension": data.dimension,
        "tangent_dim": data.tangent_dim,
        "pieces": data.pieces,
        "fingerprint": fp,
    }));
    Ok(Report {
        json,
        header: ["p", "jacobian_degree", "dim"].map(String::from).to_vec(),
        rows,
        text,
    })
}

fn compare(common: &Common, other: &OtherInput) -> Result<Report> {
    let (spec, f) = input(common)?;
    let other_spec = load(other.other.as_ref(), other.other_fixture.as_ref())?;
    let g = other_spec.polynomial()?;
    if f.ring() != g.ring() || f.degree() != g.degree() {
        return Err(Error::Mismatch(format!(
            "cannot compare weights {:?} in degree {} with weights {:?} in degree {}",
            spec.weights, spec.degree, other_spec.weights, other_spec.degree
        )));
    }
    let left = fingerprint(&ivhs_of(Arc::new(JacobianRing::new(&f)?))?, common.seed);
    let right = fingerprint(&ivhs_of(Arc::new(JacobianRing::new(&g)?))?, common.seed);
    let report = compare_fingerprints(left, right);
    let mut text = format!("{} vs {}\n", spec.label, other_spec.label);
    let mut rows = Vec::new();
    for c in &report.fields {
        let tag = if c.heuristic { " (sampled)" } else { "" };
        text.push_str(&format!("{:<28} {}{tag}\n", c.field, if c.equal { "equal" } else { "differ" }));
        rows.push(vec![c.field.clone(), c.equal.to_string(), c.heuristic.to_string()]);
    }
    text.push_str(&format!("verdict: {}\n", report.verdict));
    let json = with_schema(json!({
        "left": describe(&spec),
        "right": describe(&other_spec),
        "report": report,
    }));
    Ok(Report {
        json,
        header: ["field", "equal", "heuristic"].map(String::from).to_vec(),
        rows,
        text,
    })
}

fn check(common: &Common) -> Result<Report> {
    let (spec, f) = input(common)?;
    let hs = HochschildSerre::new(&f)?;
    let report = hs.check_recovery_conditions();
    let failing = report.failing_clause();
    let flags = [
        ("generated_in_degree", report.generated_in_degree.to_string()),
        ("sectors_vanish", report.sectors_vanish.to_string()),
        ("weights_at_most_half", report.weights_at_most_half.to_string()),
        ("unit_weights", report.unit_weights.to_string()),
        ("sufficient_criterion", report.sufficient_criterion.to_string()),
        ("passes", report.passes.to_string()),
    ];
    let mut text = format!("{}\nt0 = {}, sigma = {}\n", spec.label, report.t0, report.socle_degree);
    for (k, v) in &flags {
        text.push_str(&format!("{k:<22} {v}\n"));
    }
    if let Some(c) = &failing {
        text.push_str(&format!("failing: {c}\n"));
    }
    let mut rows: Vec<Vec<String>> = vec![
        vec!["t0".into(), report.t0.to_string()],
        vec!["socle_degree".into(), report.socle_degree.to_string()],
    ];
    rows.extend(flags.iter().map(|(k, v)| vec![k.to_string(), v.clone()]));
    let json = with_schema(json!({
        "input": describe(&spec),
        "report": report,
        "failing_clause": failing,
    }));
    Ok(Report {
        json,
        header: vec!["field".into(), "value".into()],
        rows,
        text,
    })
}

fn normalize(common: &Common, var: usize, exponent: u32) -> Result<Report> {
    let (spec, f) = input(common)?;
    let (normalized, cert) = complete_power(&f, var, exponent)?;
    // x_var^2 splits off: compare with the form on x_var = 0
    let elimination = if exponent == 2 {
        let reduced = normalized.restrict_to_zero_locus(&[var]);
        let split = &normalized - &reduced;
        let pure_square = split.terms().all(|(m, _)| m.exponent(var) == 2);
        if pure_square {
            Some((reduced.to_string(), jacobian_elimination_check(&normalized, &reduced, var)?))
        } else {
            None
        }
    } else {
        None
    };
    let mut text = format!("{}\nnormalized: {normalized}\ncertificate: {cert}\n", spec.label);
    let mut rows = vec![
        vec!["normalized".into(), normalized.to_string()],
        vec!["certificate".into(), cert.to_string()],
    ];
    let mut json = with_schema(json!({
        "input": describe(&spec),
        "var": var,
        "exponent": exponent,
        "normalized": normalized.to_string(),
        "certificate": cert.to_string(),
    }));
    if let Some((reduced, same)) = elimination {
        text.push_str(&format!("reduced: {reduced}\nsame Hilbert function: {same}\n"));
        rows.push(vec!["reduced".into(), reduced.clone()]);
        rows.push(vec!["same_hilbert_function".into(), same.to_string()]);
        json["reduced"] = json!(reduced);
        json["same_hilbert_function"] = json!(same);
    }
    Ok(Report {
        json,
        header: vec!["field".into(), "value".into()],
        rows,
        text,
    })
}
