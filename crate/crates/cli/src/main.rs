use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde_json::json;

use corkcalc_core::algebra::{check_connected_sum_inequality, dualize, tensor};
use corkcalc_core::catalog;
use corkcalc_core::enriched::{enriched_rs, validate_enriched};
use corkcalc_core::format::{complex_to_string, load_complex, load_manifest, map_to_string, LoadedComplex};
use corkcalc_core::morphism::find_local_map;
use corkcalc_core::rs::{fmt_value, rs_function, rs_report};
use corkcalc_core::{Error, FiltValue, InvolutiveComplex};

mod oracle;

#[derive(Parser)]
#[command(name = "corkcalc", version, about = "Exact r_s invariants of filtered instanton-type complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every invariant of a complex file
    Validate { file: PathBuf },
    /// Compute r_s, or the whole step function
    Rs {
        file: PathBuf,
        #[arg(long)]
        involutive: bool,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        s: String,
        #[arg(long)]
        function: bool,
        /// Write the step function as TSV to this file
        #[arg(long)]
        tsv: Option<PathBuf>,
    },
    /// Search for a local map from SRC to DST
    Localmap {
        src: PathBuf,
        dst: PathBuf,
        #[arg(long, default_value = "0")]
        level: String,
        #[arg(long)]
        equivariant: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Tensor product of two complexes
    Tensor {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Dual complex (swaps D1 and D2)
    Dual {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check the connected-sum inequality for involutive r_s
    Csineq {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        s2: String,
    },
    /// Enriched involutive r_s of a manifest
    EnrichedRs {
        manifest: PathBuf,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        s: String,
    },
    /// Built-in example complexes
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Cross-check the θ-cycle search in one window by exhaustive enumeration
    Oracle {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long)]
        involutive: bool,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Emit {
        name: String,
        /// Parameter override, `key=value`
        #[arg(long = "param", value_name = "KEY=VALUE", allow_hyphen_values = true)]
        params: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

const INVALID: u8 = 1;
const NEGATIVE: u8 = 2;
const UNDECIDED: u8 = 3;

fn value(s: &str) -> anyhow::Result<FiltValue> {
    s.parse::<FiltValue>().with_context(|| format!("bad value {s:?}"))
}

fn load(path: &Path) -> anyhow::Result<LoadedComplex> {
    Ok(load_complex(path)?)
}

fn load_valid(path: &Path) -> anyhow::Result<LoadedComplex> {
    let c = load(path)?;
    let rep = c.complex.validate();
    if !rep.passed() {
        bail!(Error::Invalid(format!("{}:\n{rep}", path.display())));
    }
    Ok(c)
}

fn label(c: &LoadedComplex, path: &Path) -> String {
    c.name.clone().unwrap_or_else(|| path.display().to_string())
}

fn write_out(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Validate { file } => {
            let c = load(&file)?;
            let rep = c.complex.validate();
            print!("{rep}");
            Ok(if rep.passed() { 0 } else { INVALID })
        }
        Command::Rs { file, involutive, s, function, tsv } => {
            let c = load_valid(&file)?;
            let tau = involutive.then_some(&c.complex.tau);
            if function || tsv.is_some() {
                let f = rs_function(&c.complex.complex, tau)?;
                match tsv {
                    Some(p) => write_out(Some(&p), &f.to_tsv())?,
                    None => print!("{}", f.to_tsv()),
                }
                return Ok(0);
            }
            let rep = rs_report(&c.complex.complex, tau, &value(&s)?)?;
            println!("r_s({}) = {}", fmt_value(&rep.s), fmt_value(&rep.value));
            if let Some(r) = rep.right_limit {
                println!("right limit = {}", fmt_value(&r));
            }
            Ok(0)
        }
        Command::Localmap { src, dst, level, equivariant, output } => {
            let (a, b) = (load_valid(&src)?, load_valid(&dst)?);
            let lvl = value(&level)?;
            match find_local_map(&a.complex, &b.complex, &lvl, equivariant)? {
                Some(w) => {
                    let text = map_to_string(&w.f, w.equivariance_h.as_ref(), &a.complex, &b.complex);
                    write_out(output.as_deref(), &text)?;
                    Ok(0)
                }
                None => {
                    println!("none");
                    Ok(NEGATIVE)
                }
            }
        }
        Command::Tensor { a, b, output } => {
            let (ca, cb) = (load_valid(&a)?, load_valid(&b)?);
            let t = tensor(&ca.complex, &cb.complex)?;
            let prov = json!({"op": "tensor", "inputs": [label(&ca, &a), label(&cb, &b)]});
            let name = format!("{}⊗{}", label(&ca, &a), label(&cb, &b));
            write_out(Some(&output), &complex_to_string(&t.complex, Some(&name), Some(prov)))?;
            Ok(0)
        }
        Command::Dual { file, output } => {
            let c = load_valid(&file)?;
            let d = dualize(&c.complex)?;
            let prov = json!({"op": "dual", "inputs": [label(&c, &file)]});
            let name = format!("{}*", label(&c, &file));
            write_out(Some(&output), &complex_to_string(&d, Some(&name), Some(prov)))?;
            Ok(0)
        }
        Command::Csineq { a, b, s, s2 } => {
            let (ca, cb) = (load_valid(&a)?, load_valid(&b)?);
            let (Some(s), Some(s2)) = (value(&s)?.finite().cloned(), value(&s2)?.finite().cloned()) else {
                bail!(Error::Argument("s and s2 must be finite".into()));
            };
            let rep = check_connected_sum_inequality(&ca.complex, &cb.complex, &s, &s2)?;
            println!("r_s(A) = {}", fmt_value(&rep.r_a));
            println!("r_s'(B) = {}", fmt_value(&rep.r_b));
            println!("r_(s+s')(A⊗B) = {}", fmt_value(&rep.r_ab));
            println!("bound = {}", fmt_value(&rep.bound));
            println!("{}", if rep.holds { "holds" } else { "VIOLATED" });
            Ok(if rep.holds { 0 } else { NEGATIVE })
        }
        Command::EnrichedRs { manifest, s } => {
            let e = load_manifest(&manifest)?;
            let rep = validate_enriched(&e);
            if !rep.passed() {
                print!("{rep}");
                return Ok(INVALID);
            }
            let r = enriched_rs(&e, &value(&s)?)?;
            println!("r_s({}) = {}", fmt_value(&r.s), fmt_value(&r.value));
            if r.critical {
                println!("critical: left limit = {}", fmt_value(&r.left));
                match &r.right {
                    Some(v) => println!("critical: right limit = {}", fmt_value(v)),
                    None => println!("critical: no right side"),
                }
            }
            Ok(0)
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => {
                for e in catalog::list() {
                    let params: Vec<String> = e.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    println!("{}\t{}\t{}", e.name, e.description, params.join(" "));
                }
                Ok(0)
            }
            CatalogAction::Emit { name, params, output } => {
                let mut given = BTreeMap::new();
                for p in &params {
                    let Some((k, v)) = p.split_once('=') else {
                        bail!(Error::Argument(format!("parameter {p:?} is not key=value")));
                    };
                    given.insert(k.to_string(), v.to_string());
                }
                let c: InvolutiveComplex = catalog::emit(&name, &given)?.with_witness()?;
                let prov = json!({"catalog": name, "params": given});
                write_out(output.as_deref(), &complex_to_string(&c, Some(&name), Some(prov)))?;
                Ok(0)
            }
        },
        Command::Oracle { file, r, s, involutive } => {
            let c = load_valid(&file)?;
            let rep = oracle::cross_check(&c.complex, &value(&r)?, &value(&s)?, involutive)?;
            println!("window points: {}", rep.points);
            println!("engine: {}", if rep.engine { "cycle" } else { "none" });
            println!("oracle: {}", if rep.brute { "cycle" } else { "none" });
            println!("{}", if rep.engine == rep.brute { "agree" } else { "DISAGREE" });
            Ok(if rep.engine == rep.brute { 0 } else { NEGATIVE })
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::InsufficientTail(_) | Error::CriticalEndpoint(_)) => UNDECIDED,
        _ => INVALID,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
