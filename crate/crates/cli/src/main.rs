use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lvh_core::block::{fmt_half, Block};
use lvh_core::hecke::{self, HeckeOps};
use lvh_core::table::{Format, Table};
use lvh_core::{builders, duality, hodgepoly, kl, verify, Error, Weight};

const EXIT_SCHEMA: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_INVARIANT: u8 = 3;
const EXIT_VERIFY: u8 = 4;

/// Exact Lusztig-Vogan, Hodge and signature multiplicity polynomials.
#[derive(Parser)]
#[command(name = "lvh", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build, validate or describe block files.
    #[command(subcommand)]
    Block(BlockCmd),
    /// Compute a multiplicity table.
    Compute(ComputeArgs),
    /// Run the verification suite on a block.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum BlockCmd {
    /// Build a block for a built-in group.
    Build {
        /// sl2r, sl2c, su2, su21, gl2r, complex:<SL2|SL3|Sp4|SL4|...>, or a product A*B
        #[arg(long)]
        group: String,
        /// Comma-separated rational coordinates of λ, e.g. "1/2" or "0,1/2"
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every block invariant; exit 2 listing the violations.
    Validate { file: PathBuf },
    /// Print parameters, lengths and case labels.
    Info { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Lvm,
    Mixed,
    Hodge,
    Signature,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Json,
    Csv,
    Latex,
}

impl From<Fmt> for Format {
    fn from(f: Fmt) -> Format {
        match f {
            Fmt::Json => Format::Json,
            Fmt::Csv => Format::Csv,
            Fmt::Latex => Format::Latex,
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    what: What,
    file: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Fmt,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the Hecke operator matrices as JSON.
    #[arg(long, value_name = "PATH")]
    dump_hecke: Option<PathBuf>,
    /// Write the R-matrix in the chosen format.
    #[arg(long = "dump-R", value_name = "PATH")]
    dump_r: Option<PathBuf>,
    /// Write the LVM matrix in the chosen format.
    #[arg(long, value_name = "PATH")]
    dump_lvm: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    /// Also solve for R from the linear-system oracle and compare.
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

struct Fail {
    code: u8,
    msg: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let code = match e {
            Error::Schema(_) | Error::Io(_) | Error::Domain(_) => EXIT_SCHEMA,
            Error::Validation(_) => EXIT_VALIDATION,
            Error::Invariant(_) | Error::Parity(_) => EXIT_INVARIANT,
        };
        Fail { code, msg: e.to_string() }
    }
}

type Res<T = ()> = Result<T, Fail>;

fn write_out(path: Option<&Path>, s: &str) -> Res {
    match path {
        Some(p) => fs::write(p, s).map_err(|e| Fail::from(Error::Io(e))),
        None => {
            print!("{s}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Res<Block> {
    Ok(Block::load(path)?)
}

fn load_valid(path: &Path) -> Res<Block> {
    let b = load(path)?;
    let v = b.validate();
    if !v.is_empty() {
        return Err(Error::Validation(v).into());
    }
    Ok(b)
}

fn cmd_block(c: BlockCmd) -> Res {
    match c {
        BlockCmd::Build { group, lambda, out } => {
            let b = builders::build(&group, &Weight::parse(&lambda)?)?;
            let v = b.validate();
            if !v.is_empty() {
                return Err(Error::Validation(v).into());
            }
            write_out(out.as_deref(), &b.to_json())?;
            if out.is_some() {
                eprintln!("{} parameters", b.len());
            }
            Ok(())
        }
        BlockCmd::Validate { file } => {
            let b = load(&file)?;
            let v = b.validate();
            if !v.is_empty() {
                return Err(Error::Validation(v).into());
            }
            println!("ok: {} parameters, {} orbits", b.len(), b.orbits.len());
            Ok(())
        }
        BlockCmd::Info { file } => {
            let b = load(&file)?;
            println!("root datum: {}", b.root_datum.name.as_deref().unwrap_or("(unnamed)"));
            println!("rank {}, {} simple roots, dimH {}", b.root_datum.rank, b.n_simple(), b.dim_h);
            println!("lambda: {}", b.base_lambda);
            println!("{} orbits, {} twists, {} parameters", b.orbits.len(), b.twists.len(), b.len());
            println!("{:<24} {:>6} {:>6} {:>6} {:>6}  cases", "parameter", "l", "l_I", "l_o", "l_H");
            for g in 0..b.len() {
                let l = b.lengths(g);
                let cases: Vec<&str> = b.edges[g].iter().map(|e| e.case.as_str()).collect();
                println!(
                    "{:<24} {:>6} {:>6} {:>6} {:>6}  {}",
                    b.params[g].id,
                    fmt_half(l.l2),
                    fmt_half(l.li2),
                    fmt_half(l.lo2),
                    fmt_half(l.lh2),
                    cases.join(" ")
                );
            }
            Ok(())
        }
    }
}

fn cmd_compute(a: ComputeArgs) -> Res {
    let b = load_valid(&a.file)?;
    let format: Format = a.format.into();
    let ops = HeckeOps::new(&b)?;
    let r = duality::compute_duality(&b)?;
    let failures = duality::check_duality(&b, &r)?;
    if let Some(f) = failures.first() {
        return Err(Error::Invariant(format!("duality check {}: {}", f.check, f.witness)).into());
    }
    let lvm = kl::compute_lvm(&b, &r)?;
    if let Some(f) = kl::verify_selfdual(&b, &r, &lvm).first() {
        return Err(Error::Invariant(format!("LVM check {}: {}", f.check, f.witness)).into());
    }
    // render everything before writing anything
    let table = match a.what {
        What::Lvm => Table::lvm(&b, &lvm),
        What::Mixed => Table::mixed(&b, &hodgepoly::mixed_from_lvm(&b, &lvm)?),
        What::Hodge => {
            let m = hodgepoly::mixed_from_lvm(&b, &lvm)?;
            Table::hodge(&b, &hodgepoly::hodge_from_mixed(&b, &m)?)
        }
        What::Signature => {
            if let Some(m) = hodgepoly::compare_signature(&b, &lvm)?.first() {
                return Err(Error::Invariant(format!(
                    "signature chain and direct formula differ at ({}, {}): {} vs {}",
                    m.row, m.col, m.chain, m.direct
                ))
                .into());
            }
            Table::signature(&b, &hodgepoly::signature_chain(&b, &lvm)?)
        }
    };
    let main = table.render(format);
    let mut dumps = Vec::new();
    if let Some(p) = a.dump_hecke {
        let mut s = serde_json::to_string_pretty(&hecke::dump(&b, &ops)).expect("json");
        s.push('\n');
        dumps.push((p, s));
    }
    if let Some(p) = a.dump_r {
        dumps.push((p, Table::r(&b, &r).render(format)));
    }
    if let Some(p) = a.dump_lvm {
        dumps.push((p, Table::lvm(&b, &lvm).render(format)));
    }
    for (p, s) in &dumps {
        write_out(Some(p), s)?;
    }
    write_out(a.out.as_deref(), &main)
}

fn cmd_verify(a: VerifyArgs) -> Res {
    let b = load(&a.file)?;
    let rep = verify::run(&b, a.oracle);
    for c in &rep.checks {
        let status = match c.status {
            verify::Status::Pass => "PASS",
            verify::Status::Fail => "FAIL",
            verify::Status::Skipped => "SKIP",
        };
        println!("{status} {}", c.name);
    }
    if let Some(p) = &a.report {
        let mut s = serde_json::to_string_pretty(&rep).expect("json");
        s.push('\n');
        write_out(Some(p), &s)?;
    }
    match rep.first_failure() {
        None => Ok(()),
        Some(c) => Err(Fail {
            code: EXIT_VERIFY,
            msg: format!(
                "check {} failed ({} failures): {}",
                c.name,
                c.failures,
                c.witness.as_deref().unwrap_or("")
            ),
        }),
    }
}

fn init_threads() {
    if let Some(n) = std::env::var("LVH_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_SCHEMA } else { 0 });
        }
    };
    init_threads();
    let res = match cli.cmd {
        Cmd::Block(c) => cmd_block(c),
        Cmd::Compute(a) => cmd_compute(a),
        Cmd::Verify(a) => cmd_verify(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("lvh: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes_map_to_exit_codes() {
        assert_eq!(Fail::from(Error::Schema("x".into())).code, EXIT_SCHEMA);
        assert_eq!(Fail::from(Error::Validation(vec![])).code, EXIT_VALIDATION);
        assert_eq!(Fail::from(Error::Invariant("x".into())).code, EXIT_INVARIANT);
        assert_eq!(Fail::from(Error::Parity("x".into())).code, EXIT_INVARIANT);
    }
}
