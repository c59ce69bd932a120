//! Command-line surface. Every command produces a string; `main` decides
//! where it goes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::complex::Complex;
use crate::error::{input, Error, Result};
use crate::lens::lens_d_recursive;
use crate::models::{build_model, essential_model, KnotExpr};
use crate::obstruction::{
    admissible, brute_force_metabolizers, choose_kn, metabolizers, sieve_family, sqrt_minus_one, LinkingForm,
};
use crate::refilter::{extend_spinc, normalize, normalized_position, refilter};
use crate::surgery::{branched_cover_d_diff_with, calibrate_shifts, calibrated_vector, ModelChoice};

pub const OUT_DIR_ENV: &str = "HFSLICE_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "hfslice", version, about = "Knot Floer complexes, surgery d-invariants and the sliceness obstruction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write output here instead of stdout; relative paths land in $HFSLICE_OUT_DIR when set.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for per-label and per-n loops.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build and inspect complexes.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Refilter a knot complex for -N surgery at index m.
    Refilter(RefilterArgs),
    /// d(M(K_{D_k,n}), s_n) - d(M(K_{U,n}), s_n).
    Ddiff {
        n: i64,
        k: i64,
        /// Use the full tensor power of the Whitehead double model.
        #[arg(long)]
        full: bool,
    },
    /// Calibrated d-vector of M(K_{D_k,n}) in cohomology labels.
    Dvector {
        n: i64,
        #[arg(long, default_value_t = 0)]
        k: i64,
    },
    /// Correction terms of the lens space L(p,q).
    Lens { p: i64, q: i64 },
    /// Number theory of the obstruction.
    #[command(subcommand)]
    Obstruct(ObstructCmd),
}

/// A knot expression such as "m(2*D)", or a path to a complex JSON file.
#[derive(Args, Debug)]
pub struct Source {
    pub source: String,
    /// Replace D factors by their staircase summand.
    #[arg(long)]
    pub essential: bool,
}

#[derive(Subcommand, Debug)]
pub enum ComplexCmd {
    Build(Source),
    Show(Source),
    /// Tensor product of two sources.
    Tensor {
        a: String,
        b: String,
    },
    Dual(Source),
    Reduce(Source),
    Width(Source),
    /// Graded homology of the column i = 0 at each j.
    Slices(Source),
    Canon(Source),
}

#[derive(Args, Debug)]
pub struct RefilterArgs {
    pub source: String,
    pub n: i64,
    pub m: i64,
    #[arg(long)]
    pub normalize: bool,
    /// Move to index m + T*N.
    #[arg(long, allow_hyphen_values = true)]
    pub extend: Option<i64>,
    #[arg(long)]
    pub reduce: bool,
}

#[derive(Subcommand, Debug)]
pub enum ObstructCmd {
    /// Pairwise coprime admissible values of 4n^2 + 1.
    Sieve {
        #[arg(long, default_value_t = 3)]
        count: usize,
    },
    /// Admissibility of a single n.
    Admissible { n: u64 },
    /// Square roots of -1 modulo N.
    Roots { modulus: u64 },
    /// Metabolizers of the linking form on (Z/N)^2.
    Metabolizers {
        modulus: u64,
        #[arg(long, default_value_t = 1)]
        alpha: u64,
        /// Enumerate all subgroups instead of using the classification.
        #[arg(long)]
        brute: bool,
    },
    /// Least k whose difference -2k escapes S_b.
    ChooseKn { n: u64 },
    /// Whether k obstructs sliceness at n.
    Slice { n: u64, k: u64 },
    /// choose-kn for every n up to max-n.
    Table {
        #[arg(long)]
        max_n: u64,
    },
}

fn load(src: &str, essential: bool) -> Result<Complex> {
    let path = Path::new(src);
    let c = if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{src}: {e}")))?;
        Complex::from_json(&text)?
    } else {
        let e = KnotExpr::parse(src)?;
        if essential {
            essential_model(&e)?
        } else {
            build_model(&e)
        }
    };
    let report = c.validate();
    if !report.is_ok() {
        return input(format!("{src} is not a valid complex: {report:?}"));
    }
    Ok(c)
}

fn emit_complex(c: &Complex, f: Format) -> String {
    match f {
        Format::Json => c.to_json_pretty(),
        Format::Table => c.diagram(),
    }
}

fn emit<T: Serialize>(v: &T, f: Format, table: impl FnOnce(&T) -> String) -> String {
    match f {
        Format::Json => serde_json::to_string_pretty(v).expect("output serializes"),
        Format::Table => table(v),
    }
}

pub fn run(cli: &Cli) -> Result<String> {
    let f = cli.format;
    match &cli.command {
        Command::Complex(cmd) => run_complex(cmd, f),
        Command::Refilter(a) => run_refilter(a, f),
        Command::Ddiff { n, k, full } => {
            let choice = if *full { ModelChoice::Full } else { ModelChoice::Essential };
            let d = branched_cover_d_diff_with(*n, *k, choice)?;
            Ok(emit(&json!({"n": n, "k": k, "d_diff": d}), f, |_| d.to_string()))
        }
        Command::Dvector { n, k } => {
            if *k < 0 || 2 * k >= *n {
                return input(format!("k = {k} outside 0 <= k < n/2 for n = {n}"));
            }
            let cal = calibrate_shifts(*n)?;
            let v = calibrated_vector(&cal, *k, ModelChoice::Essential)?;
            Ok(emit(&v, f, |v| {
                v.entries
                    .iter()
                    .map(|e| format!("{:>6} {:>6} {:>12}  {}\n", e.label, e.d_rel, e.d_abs.unwrap(), e.tag))
                    .collect()
            }))
        }
        Command::Lens { p, q } => {
            let v = lens_d_recursive(*p, *q)?;
            let strs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            Ok(emit(&json!({"p": p, "q": q, "d": strs}), f, |_| {
                strs.iter().enumerate().map(|(i, s)| format!("{i:>6} {s}\n")).collect()
            }))
        }
        Command::Obstruct(cmd) => run_obstruct(cmd, f),
    }
}

fn run_complex(cmd: &ComplexCmd, f: Format) -> Result<String> {
    Ok(match cmd {
        ComplexCmd::Build(s) => emit_complex(&load(&s.source, s.essential)?, f),
        ComplexCmd::Show(s) | ComplexCmd::Canon(s) => emit_complex(&load(&s.source, s.essential)?.canonical_form(), f),
        ComplexCmd::Tensor { a, b } => emit_complex(&load(a, false)?.tensor(&load(b, false)?), f),
        ComplexCmd::Dual(s) => emit_complex(&load(&s.source, s.essential)?.dualize(), f),
        ComplexCmd::Reduce(s) => emit_complex(&load(&s.source, s.essential)?.reduce(), f),
        ComplexCmd::Width(s) => {
            let w = load(&s.source, s.essential)?.reduce().width()?;
            emit(&json!({ "width": w }), f, |_| w.to_string())
        }
        ComplexCmd::Slices(s) => {
            let c = load(&s.source, s.essential)?;
            let (lo, hi) = match c.gens().iter().map(|g| g.j - g.i).fold(None, |acc: Option<(i64, i64)>, x| {
                Some(acc.map_or((x, x), |(a, b)| (a.min(x), b.max(x))))
            }) {
                Some(r) => r,
                None => return input("empty complex has no slices"),
            };
            let slices: BTreeMap<i64, BTreeMap<i64, usize>> =
                (lo..=hi).rev().map(|j| (j, c.slice_homology(j))).filter(|(_, h)| !h.is_empty()).collect();
            emit(&slices, f, |s| {
                s.iter()
                    .rev()
                    .map(|(j, h)| {
                        let parts: Vec<String> = h.iter().map(|(g, r)| format!("F^{r} in grading {g}")).collect();
                        format!("j = {j}: {}\n", parts.join(", "))
                    })
                    .collect()
            })
        }
    })
}

fn run_refilter(a: &RefilterArgs, f: Format) -> Result<String> {
    let c = load(&a.source, false)?;
    let mut r = refilter(&c, a.n, a.m).map_err(|e| match e {
        Error::Input(msg) if msg.contains("base range") => {
            Error::Input(format!("{}; pass --extend T to reach m + T*N", msg.split(';').next().unwrap()))
        }
        Error::Hypothesis(msg) => Error::Hypothesis(msg.replace("hypothesis ", "")),
        e => e,
    })?;
    if let Some(t) = a.extend {
        r = extend_spinc(&r, t);
    }
    if a.reduce {
        r = r.reduce();
    }
    if a.normalize {
        r = normalize(&r)?;
    }
    if f == Format::Table {
        let mut s = r.diagram();
        if let Ok(e) = normalized_position(&r) {
            s.push_str(&format!("essential class: grading {}, delta {}\n", e.gr, e.j - e.i));
        }
        return Ok(s);
    }
    Ok(r.to_json_pretty())
}

fn run_obstruct(cmd: &ObstructCmd, f: Format) -> Result<String> {
    Ok(match cmd {
        ObstructCmd::Sieve { count } => {
            let fam = sieve_family(*count)?;
            if let Some(w) = &fam.warning {
                eprintln!("warning: {w}");
            }
            emit(&fam, f, |fam| fam.members.iter().map(|m| format!("{} {} {:?}\n", m.n, m.value, m.factors)).collect())
        }
        ObstructCmd::Admissible { n } => {
            let r = admissible(*n)?;
            emit(&r, f, |r| format!("{} {} {:?} admissible={}\n", r.n, r.value, r.factors, r.admissible))
        }
        ObstructCmd::Roots { modulus } => {
            if *modulus < 2 {
                return input("modulus must be at least 2");
            }
            let r = sqrt_minus_one(*modulus);
            emit(&r, f, |r| r.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" "))
        }
        ObstructCmd::Metabolizers { modulus, alpha, brute } => {
            let form = LinkingForm::new(*modulus, *alpha)?;
            let m = if *brute { brute_force_metabolizers(&form) } else { metabolizers(*modulus)? };
            emit(&m, f, |m| {
                m.iter().map(|x| format!("<({},{}), (0,{})>\n", x.a, x.b, x.d)).collect()
            })
        }
        ObstructCmd::ChooseKn { n } => {
            let r = choose_kn(*n)?;
            emit(&r, f, report_line)
        }
        ObstructCmd::Slice { n, k } => {
            let ok = crate::obstruction::obstruct_slice(*n, *k)?;
            emit(&json!({"n": n, "k": k, "obstructed": ok}), f, |_| ok.to_string())
        }
        ObstructCmd::Table { max_n } => {
            let rows = kn_table(*max_n)?;
            emit(&rows, f, |rows| rows.iter().map(report_line).collect())
        }
    })
}

fn report_line(r: &crate::obstruction::ObstructionReport) -> String {
    let s: Vec<String> = r.s_b.iter().map(|q| q.to_string()).collect();
    let k = r.k_n.map_or("none".to_string(), |k| k.to_string());
    format!("n={} p={} roots={:?} S_b={{{}}} k_n={}\n", r.n, r.modulus, r.roots_b, s.join(","), k)
}

/// Reports for every admissible n <= max_n.
pub fn kn_table(max_n: u64) -> Result<Vec<crate::obstruction::ObstructionReport>> {
    use rayon::prelude::*;
    if max_n < 2 {
        return input("max-n must be at least 2");
    }
    let ns: Vec<u64> = (2..=max_n).filter(|&n| admissible(n).map(|r| r.admissible).unwrap_or(false)).collect();
    ns.par_iter().map(|&n| choose_kn(n)).collect()
}

/// Where -o output goes.
pub fn output_path(p: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if p.is_relative() => Path::new(&dir).join(p),
        _ => p.to_path_buf(),
    }
}
