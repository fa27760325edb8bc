//! Command-line front end: label enumeration, automorphism action,
//! Gelfand-Graev incidence, degree sets, and oracle verification.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use slchar_core::sl::GgcIncidence;
use slchar_core::{jsonio, CoreError, CyclicElt, GroupParams, OrbitTable};
use slchar_oracle::{OracleCache, OracleError};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "slchar", version, about = "Character labels of special linear and unitary groups, with an exact oracle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Rank n of SL_n / SU_n.
    #[arg(long)]
    n: u32,
    /// Prime power q.
    #[arg(long)]
    q: u64,
    /// "+1" for the linear forms, "-1" for the unitary forms.
    #[arg(long, allow_hyphen_values = true, default_value = "+1")]
    epsilon: String,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Oracle cache directory (falls back to SLCHAR_CACHE_DIR).
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Worker threads for the oracle (falls back to RAYON_NUM_THREADS).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Stream the triple labels (s, lambda, xi) with degrees and
    /// Gelfand-Graev data, one JSON record per line.
    Labels {
        #[command(flatten)]
        common: CommonArgs,
        /// Emit a flat CSV table instead of JSON lines.
        #[arg(long)]
        csv: bool,
        /// Keep only labels whose semisimple part contains this torsion
        /// point (e.g. "1/8").
        #[arg(long)]
        series: Option<String>,
    },
    /// Apply a field/graph automorphism to a label read from stdin.
    Act {
        #[command(flatten)]
        common: CommonArgs,
        /// "k,b": field exponent and graph bit.
        #[arg(long)]
        sigma: String,
    },
    /// Gelfand-Graev incidence of every label against its wave front.
    Gggc {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Multiset and set of irreducible character degrees.
    Degrees {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run label-vs-oracle verification suites.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// counts | degrees | ggc | auto | all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Also print the JSON report.
        #[arg(long)]
        json: bool,
    },
    /// Compute the exact character table of the group.
    OracleTable {
        #[command(flatten)]
        common: CommonArgs,
        /// Compute the table of the ambient GL/GU group instead.
        #[arg(long)]
        full: bool,
        /// Include the exact cyclotomic rows in the output.
        #[arg(long)]
        rows: bool,
    },
}

enum CliError {
    Usage(String),
    Verification(String),
    Resource(String),
    Malformed(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Malformed(_) => 4,
            CliError::Io(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Verification(m)
            | CliError::Resource(m)
            | CliError::Malformed(m)
            | CliError::Io(m) => m,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> CliError {
        match e {
            CoreError::ResourceGuard(m) => CliError::Resource(m),
            CoreError::MalformedLabel(m) => CliError::Malformed(m),
            CoreError::InvalidParams(m) => CliError::Usage(m),
            other => CliError::Verification(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> CliError {
        match e {
            OracleError::Resource(m) => CliError::Resource(m),
            OracleError::Verification(m) => CliError::Verification(m),
            OracleError::Core(c) => c.into(),
            other => CliError::Verification(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("slchar: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn parse_common(c: &CommonArgs) -> Result<(GroupParams, OracleCache), CliError> {
    let eps = match c.epsilon.as_str() {
        "+1" | "1" => 1i8,
        "-1" => -1i8,
        other => {
            return Err(CliError::Usage(format!(
                "epsilon must be \"+1\" or \"-1\", got {other}"
            )))
        }
    };
    let params = GroupParams::new(c.n, c.q, eps).map_err(CliError::from)?;
    if let Some(t) = c.threads {
        // best effort; the pool can only be initialized once per process
        let _ = slchar_oracle::init_threads(t);
    }
    Ok((params, OracleCache::new(c.cache.clone())))
}

fn write_out(common: &CommonArgs, content: &str) -> Result<(), CliError> {
    match &common.out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Io(format!("writing {path:?}: {e}"))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Labels { common, csv, series } => {
            let (params, _) = parse_common(&common)?;
            let table = OrbitTable::for_group(&params)?;
            let filter_orbit = match series {
                Some(s) => {
                    let pt: slchar_core::TorsionPoint = s.parse().map_err(CliError::from)?;
                    Some(table.lookup(&pt).ok_or_else(|| {
                        CliError::Malformed(format!("no orbit contains {pt}"))
                    })?)
                }
                None => None,
            };
            let mut out = String::new();
            if csv {
                out.push_str(
                    "schema,s,lambda,xi_value,xi_mod,degree,a,a_lambda,wave_front,d_nu\n",
                );
            }
            slchar_core::sl::for_each_family(&table, |fam| {
                if let Some(o) = filter_orbit {
                    if !fam.s.pairs.iter().any(|&(oid, _)| oid == o) {
                        return;
                    }
                }
                let gl = fam.gl_label();
                let degree = fam.constituent_degree(&table);
                let wf = fam.wave_front(&table);
                let dn = fam.d_nu(&table);
                for xi in 0..fam.a_lambda {
                    let label = slchar_core::sl::SlCharLabel {
                        s: fam.s.clone(),
                        lambda: fam.lambda.clone(),
                        xi: CyclicElt {
                            value: xi,
                            modulus: fam.a_lambda,
                        },
                    };
                    if csv {
                        let sj = jsonio::semisimple_to_json(&table, &label.s).to_string();
                        let lj = jsonio::gl_label_to_json(&table, &gl)["lambda"].to_string();
                        out.push_str(&format!(
                            "{SCHEMA},{},{},{},{},{},{},{},{},{}\n",
                            csv_quote(&sj),
                            csv_quote(&lj),
                            xi,
                            fam.a_lambda,
                            degree,
                            fam.a,
                            fam.a_lambda,
                            csv_quote(&serde_json::to_string(&wf.parts()).unwrap()),
                            dn
                        ));
                    } else {
                        let mut v = jsonio::sl_label_to_json(&table, &label);
                        v["schema"] = json!(SCHEMA);
                        v["degree"] = json!(degree.to_string());
                        v["a"] = json!(fam.a);
                        v["a_lambda"] = json!(fam.a_lambda);
                        v["wave_front"] = jsonio::partition_to_json(&wf);
                        v["d_nu"] = json!(dn);
                        out.push_str(&v.to_string());
                        out.push('\n');
                    }
                }
            })?;
            write_out(&common, &out)
        }
        Command::Act { common, sigma } => {
            let (params, _) = parse_common(&common)?;
            let table = OrbitTable::for_group(&params)?;
            let (k, b) = parse_sigma(&sigma)?;
            let aut = slchar_core::sl::OuterAut::new(k, b, &params);
            let mut input = String::new();
            std::io::stdin()
                .read_to_string(&mut input)
                .map_err(|e| CliError::Io(e.to_string()))?;
            let v: Value = serde_json::from_str(input.trim())
                .map_err(|e| CliError::Malformed(format!("label JSON: {e}")))?;
            let label = jsonio::sl_label_from_json(&table, &v)?;
            let mut cache = slchar_core::sl::ActionCache::new();
            let image = slchar_core::sl::act(&aut, &label, &table, &mut cache)?;
            let mut out = jsonio::sl_label_to_json(&table, &image);
            out["schema"] = json!(SCHEMA);
            write_out(&common, &(out.to_string() + "\n"))
        }
        Command::Gggc { common } => {
            let (params, _) = parse_common(&common)?;
            let table = OrbitTable::for_group(&params)?;
            let mut out = String::new();
            let mut err: Option<CoreError> = None;
            slchar_core::sl::for_each_family(&table, |fam| {
                if err.is_some() {
                    return;
                }
                let wf = fam.wave_front(&table);
                let dn = fam.d_nu(&table);
                for xi in 0..fam.a_lambda {
                    let label = slchar_core::sl::SlCharLabel {
                        s: fam.s.clone(),
                        lambda: fam.lambda.clone(),
                        xi: CyclicElt {
                            value: xi,
                            modulus: fam.a_lambda,
                        },
                    };
                    let mut incidence = Vec::new();
                    for a in 0..dn {
                        let gamma = match slchar_core::sl::UnipotentSlClass::new(
                            wf.clone(),
                            a,
                            &params,
                        ) {
                            Ok(g) => g,
                            Err(e) => {
                                err = Some(e);
                                return;
                            }
                        };
                        match slchar_core::sl::gggc_contains(&label, &gamma, &table) {
                            Ok(GgcIncidence::Governed(b)) => incidence.push(b),
                            Ok(GgcIncidence::NotGoverned) => incidence.push(false),
                            Err(e) => {
                                err = Some(e);
                                return;
                            }
                        }
                    }
                    let mut v = jsonio::sl_label_to_json(&table, &label);
                    v["schema"] = json!(SCHEMA);
                    v["wave_front"] = jsonio::partition_to_json(&wf);
                    v["d_nu"] = json!(dn);
                    v["incidence"] = json!(incidence);
                    out.push_str(&v.to_string());
                    out.push('\n');
                }
            })?;
            if let Some(e) = err {
                return Err(e.into());
            }
            write_out(&common, &out)
        }
        Command::Degrees { common } => {
            let (params, _) = parse_common(&common)?;
            let table = OrbitTable::for_group(&params)?;
            let multiset = slchar_core::sl::cd_multiset(&table)?;
            let mut degrees_multiset = Vec::new();
            let mut degrees_set = Vec::new();
            for (d, c) in &multiset {
                degrees_multiset.push(json!([d.to_string(), c]));
                degrees_set.push(json!(d.to_string()));
            }
            let v = json!({
                "schema": SCHEMA,
                "group": params.sl_name(),
                "degrees_multiset": degrees_multiset,
                "degrees_set": degrees_set,
            });
            write_out(&common, &(v.to_string() + "\n"))
        }
        Command::Verify { common, suite, json: json_out } => {
            let (params, cache) = parse_common(&common)?;
            let suite = slchar_oracle::Suite::parse(&suite)
                .ok_or_else(|| CliError::Usage(format!("unknown suite `{suite}`")))?;
            let report = slchar_oracle::run_suite(&params, suite, &cache)?;
            let mut text = report.render_text();
            if json_out {
                text.push_str(&serde_json::to_string(&report).unwrap());
                text.push('\n');
            }
            write_out(&common, &text)?;
            if report.passed {
                Ok(())
            } else {
                Err(CliError::Verification(format!(
                    "{} checks failed",
                    report.checks.iter().filter(|c| !c.passed).count()
                )))
            }
        }
        Command::OracleTable { common, full, rows } => {
            let (params, cache) = parse_common(&common)?;
            let kind = if full {
                slchar_oracle::GroupKind::Full
            } else {
                slchar_oracle::GroupKind::Special
            };
            let data = slchar_oracle::verify::group_data(&params, kind, &cache)?;
            let mut v = json!({
                "schema": SCHEMA,
                "group": if full { params.gl_name() } else { params.sl_name() },
                "order": data.group.order(),
                "num_classes": data.classes.count(),
                "class_sizes": data.classes.sizes,
                "class_orders": data.classes.orders,
                "exponent": data.table.exponent,
                "dixon_prime": data.table.prime,
                "degrees": data.table.degrees,
            });
            if rows {
                let rows_json: Vec<Value> = data
                    .table
                    .rows
                    .iter()
                    .map(|row| {
                        Value::Array(
                            row.iter()
                                .map(|mv| json!([mv.level, mv.coeffs]))
                                .collect(),
                        )
                    })
                    .collect();
                v["rows"] = Value::Array(rows_json);
            }
            write_out(&common, &(v.to_string() + "\n"))
        }
    }
}

fn parse_sigma(s: &str) -> Result<(u32, u8), CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!(
            "--sigma expects \"k,b\", got `{s}`"
        )));
    }
    let k = parts[0]
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad field exponent `{}`", parts[0])))?;
    let b: u8 = parts[1]
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad graph bit `{}`", parts[1])))?;
    Ok((k, b))
}
