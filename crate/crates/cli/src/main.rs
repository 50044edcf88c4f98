//! Command-line front end for the fqord library.
//!
//! Exit codes: 0 success (for `verify`: no unexpected failures), 1 a
//! verification check failed unexpectedly, 2 usage or parse error, 3 a
//! mathematical precondition was violated (zero element, non-divisor,
//! bound exceeded, and so on).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use fqord::classify;
use fqord::error::{Error, Result};
use fqord::ext::{ExtCtx, ExtElem};
use fqord::field::FqCtx;
use fqord::linearized;
use fqord::poly;
use fqord::text;
use fqord::verify;

#[derive(Parser)]
#[command(
    name = "fqord",
    version,
    about = "Exact orders, F_q-Orders, and element classification over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct SpecArg {
    /// Base field: "p", "p^m", or "p^m:modulus" with the modulus in y
    #[arg(long)]
    spec: String,
}

#[derive(Args)]
struct FmtArgs {
    /// Machine-readable JSON
    #[arg(long, conflicts_with_all = ["csv", "table"])]
    json: bool,
    /// Comma-separated values
    #[arg(long, conflicts_with = "table")]
    csv: bool,
    /// Human-readable output (the default)
    #[arg(long)]
    table: bool,
}

#[derive(Args)]
struct OutArg {
    /// Write output to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumerateWhat {
    /// All monic polynomials of the given degree
    Monic,
    /// Monic irreducible polynomials of the given degree
    Irreducible,
    /// Monic k-normal polynomials of degree n (requires --ext and --k)
    KNormalPolys,
}

#[derive(Clone, Copy, ValueEnum)]
enum CountWhat {
    /// k-normal elements of F_{q^n}
    Elements,
    /// monic k-normal polynomials of degree n
    Polys,
    /// m-free elements for a divisor m of q^n-1
    MFree,
    /// g-free elements for a monic divisor g of x^n-1
    GFree,
    /// monic irreducibles of degree n with F_q-Order g
    IrrByOrd,
}

impl CountWhat {
    fn name(self) -> &'static str {
        match self {
            CountWhat::Elements => "elements",
            CountWhat::Polys => "polys",
            CountWhat::MFree => "m-free",
            CountWhat::GFree => "g-free",
            CountWhat::IrrByOrd => "irr-by-ord",
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Describe a base field and optionally an extension of it
    Field {
        #[command(flatten)]
        spec: SpecArg,
        /// Extension degree: "n" or "n/modulus" with the modulus in x
        #[arg(long)]
        ext: Option<String>,
        #[command(flatten)]
        fmt: FmtArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Factor a polynomial over the base field
    Factor {
        #[command(flatten)]
        spec: SpecArg,
        /// Polynomial in x over the base field
        #[arg(long)]
        poly: String,
        /// Seed for the randomized equal-degree splitting
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        fmt: FmtArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Test a polynomial for irreducibility over the base field
    Irreducible {
        #[command(flatten)]
        spec: SpecArg,
        /// Polynomial in x over the base field
        #[arg(long)]
        poly: String,
        #[command(flatten)]
        fmt: FmtArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// List polynomials: all monic, irreducible, or k-normal
    Enumerate {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, value_enum)]
        what: EnumerateWhat,
        /// Degree for --what monic|irreducible
        #[arg(long, required_if_eq_any([("what", "monic"), ("what", "irreducible")]))]
        degree: Option<u32>,
        /// Extension degree n for --what k-normal-polys
        #[arg(long, required_if_eq("what", "k-normal-polys"))]
        ext: Option<String>,
        /// Normality defect k for --what k-normal-polys
        #[arg(long, required_if_eq("what", "k-normal-polys"))]
        k: Option<u32>,
        #[command(flatten)]
        fmt: FmtArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Multiplicative order of an element or of a polynomial
    #[command(name = "ord")]
    MultOrd {
        #[command(flatten)]
        spec: SpecArg,
        /// Extension degree, required with --element
        #[arg(long)]
        ext: Option<String>,
        /// Element of F_{q^n}, written as a polynomial in x of degree < n
        #[arg(long, requires = "ext", conflicts_with = "poly")]
        element: Option<String>,
        /// Polynomial in x over the base field (requires nonzero constant term)
        #[arg(long)]
        poly: Option<String>,
        #[command(flatten)]
        fmt: FmtArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// F_q-Order of an element or of a polynomial
    FqOrder {
        #[command(flatten)]
        spec: SpecArg,
        /// Extension degree, required with --element
        #[arg(long)]
        ext: Option<String>,
        /// Element of F_{q^n}, written as a polynomial in x of degree < n
        #[arg(long, requires = "ext", conflicts_with = "poly")]
        element: Option<String>,
        /// Polynomial in x over the base field
        #[arg(long)]
        poly: Option<String>,
        #[command(flatten)]
        fmt: FmtArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Full classification of one element: orders, normality, freeness anchors
    Classify {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        ext: String,
        #[arg(long)]
        element: String,
        #[command(flatten)]
        fmt: FmtArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Test an element for m-freeness or g-freeness
    Free {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        ext: String,
        #[arg(long)]
        element: String,
        /// Divisor m of q^n-1 (multiplicative freeness)
        #[arg(long, conflicts_with = "g")]
        m: Option<u64>,
        /// Monic divisor g of x^n-1 (additive freeness)
        #[arg(long)]
        g: Option<String>,
        #[command(flatten)]
        fmt: FmtArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Count elements or polynomials by a closed formula
    Count {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        ext: String,
        #[arg(long, value_enum)]
        what: CountWhat,
        /// Normality defect for --what elements|polys
        #[arg(long, required_if_eq_any([("what", "elements"), ("what", "polys")]))]
        k: Option<u32>,
        /// Divisor of q^n-1 for --what m-free
        #[arg(long, required_if_eq("what", "m-free"))]
        m: Option<u64>,
        /// Monic divisor of x^n-1 for --what g-free, or the target Order for
        /// --what irr-by-ord
        #[arg(long, required_if_eq_any([("what", "g-free"), ("what", "irr-by-ord")]))]
        g: Option<String>,
        #[command(flatten)]
        fmt: FmtArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Partition r-th powers by multiplicative order, or an L_f image by F_q-Order
    Partition {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        ext: String,
        /// Divisor r of q^n-1: partition the nonzero r-th powers
        #[arg(long, conflicts_with = "g")]
        r: Option<u64>,
        /// Monic divisor g of x^n-1: partition the image of L_g
        #[arg(long)]
        g: Option<String>,
        #[command(flatten)]
        fmt: FmtArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run the named-check verification suite over a grid of fields
    Verify {
        /// Grid bounds "pmax,qnmax": all cells (p, m, n) with p <= pmax
        /// prime and p^(m n) <= qnmax
        #[arg(long, default_value = "7,4096")]
        grid: String,
        /// Run a single cell "p,m,n" instead of a grid (repeatable)
        #[arg(long)]
        cell: Vec<String>,
        /// Comma-separated subset of check names (default: all)
        #[arg(long, value_delimiter = ',')]
        names: Option<Vec<String>>,
        /// Seed for sampled checks
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        fmt: FmtArgs,
        #[command(flatten)]
        out: OutArg,
        /// Output destination; "-" means stdout (same as omitting)
        #[arg(value_name = "OUT", conflicts_with = "out")]
        out_pos: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Fmt {
    Json,
    Csv,
    Table,
}

impl FmtArgs {
    fn kind(&self) -> Fmt {
        if self.json {
            Fmt::Json
        } else if self.csv {
            Fmt::Csv
        } else {
            Fmt::Table
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse { .. } | Error::UnknownCheck(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn base_ctx(spec: &str) -> Result<FqCtx> {
    FqCtx::new(&text::parse_field_spec(spec)?)
}

fn ext_ctx(spec: &str, ext: &str) -> Result<ExtCtx> {
    let base = base_ctx(spec)?;
    let (n, modulus) = text::parse_ext_part(&base, ext)?;
    ExtCtx::new(base, n, modulus)
}

fn parse_element(ctx: &ExtCtx, s: &str) -> Result<ExtElem> {
    let raw = text::parse_poly(ctx.base(), s, 'x')?;
    Ok(ctx.from_poly(&raw))
}

fn render_elem(a: &ExtElem) -> String {
    a.residue().to_string()
}

fn emit(out: &OutArg, content: &str) -> Result<()> {
    match &out.out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn json_scalar(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Single-object CSV: one header row and one value row, keys in the
/// (alphabetical) order of the JSON object.
fn json_to_csv(v: &serde_json::Value) -> String {
    let obj = v.as_object().expect("top-level output is an object");
    let header: Vec<String> = obj.keys().map(|k| csv_field(k)).collect();
    let row: Vec<String> = obj.values().map(|val| csv_field(&json_scalar(val))).collect();
    format!("{}\n{}\n", header.join(","), row.join(","))
}

/// Renders the common shape: JSON object, its CSV flattening, or a
/// prepared human string.
fn render(fmt: Fmt, json: serde_json::Value, table: String) -> String {
    match fmt {
        Fmt::Json => format!("{json}\n"),
        Fmt::Csv => json_to_csv(&json),
        Fmt::Table => table,
    }
}

fn factorization_json(fz: &poly::Factorization) -> serde_json::Value {
    json!(fz
        .factors
        .iter()
        .map(|(f, e)| json!({"poly": f.to_string(), "multiplicity": e}))
        .collect::<Vec<_>>())
}

fn factorization_string(base: &FqCtx, fz: &poly::Factorization) -> String {
    let mut parts = Vec::new();
    if fz.unit != base.one() {
        parts.push(fz.unit.to_string());
    }
    for (f, e) in &fz.factors {
        if *e == 1 && fz.factors.len() == 1 && parts.is_empty() {
            parts.push(f.to_string());
        } else if *e == 1 {
            parts.push(format!("({f})"));
        } else {
            parts.push(format!("({f})^{e}"));
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" * ")
    }
}

fn execute(cmd: Cmd) -> Result<ExitCode> {
    match cmd {
        Cmd::Field { spec, ext, fmt, out } => {
            let base = base_ctx(&spec.spec)?;
            let mut obj = json!({
                "p": base.p(),
                "m": base.m(),
                "q": base.q(),
                "base_modulus": if base.is_prime_field() {
                    serde_json::Value::Null
                } else {
                    json!(text::render_poly(&base.modulus_poly(), 'y'))
                },
            });
            let mut table = if base.is_prime_field() {
                format!("F_{} (prime field)\n", base.q())
            } else {
                format!(
                    "F_{} = F_{}[y]/({})\n",
                    base.q(),
                    base.p(),
                    text::render_poly(&base.modulus_poly(), 'y')
                )
            };
            if let Some(ext_str) = ext {
                let (n, modulus) = text::parse_ext_part(&base, &ext_str)?;
                let ctx = ExtCtx::new(base.clone(), n, modulus)?;
                let e = ctx.group_order();
                let efac = ctx.group_order_factorization();
                obj["ext"] = json!({
                    "n": n,
                    "modulus": ctx.modulus().to_string(),
                    "size": ctx.size(),
                    "group_order": e,
                    "group_order_factors": efac,
                    "xn1_factorization": factorization_json(ctx.xn1_factorization()),
                });
                let efac_str = efac
                    .iter()
                    .map(|(p, k)| if *k == 1 { p.to_string() } else { format!("{p}^{k}") })
                    .collect::<Vec<_>>()
                    .join(" * ");
                table.push_str(&format!(
                    "extension F_{} = F_{}[x]/({}), degree {}\n",
                    ctx.size(),
                    base.q(),
                    ctx.modulus(),
                    n
                ));
                table.push_str(&format!("group order {e} = {efac_str}\n"));
                table.push_str(&format!(
                    "{} = {}\n",
                    ctx.x_pow_minus_one(),
                    factorization_string(&base, ctx.xn1_factorization())
                ));
            }
            emit(&out, &render(fmt.kind(), obj, table))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Factor { spec, poly: poly_str, seed, fmt, out } => {
            let base = base_ctx(&spec.spec)?;
            let f = text::parse_poly(&base, &poly_str, 'x')?;
            let fz = poly::factor_poly(&base, &f, seed)?;
            let obj = json!({
                "input": f.to_string(),
                "unit": fz.unit.to_string(),
                "factors": factorization_json(&fz),
            });
            let table = format!("{}\n", factorization_string(&base, &fz));
            emit(&out, &render(fmt.kind(), obj, table))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Irreducible { spec, poly: poly_str, fmt, out } => {
            let base = base_ctx(&spec.spec)?;
            let f = text::parse_poly(&base, &poly_str, 'x')?;
            let is = poly::is_irreducible(&base, &f);
            let obj = json!({"poly": f.to_string(), "irreducible": is});
            emit(&out, &render(fmt.kind(), obj, format!("{is}\n")))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Enumerate { spec, what, degree, ext, k, fmt, out } => {
            let base = base_ctx(&spec.spec)?;
            let (label, deg, items) = match what {
                EnumerateWhat::Monic | EnumerateWhat::Irreducible => {
                    let d = degree.expect("clap enforces --degree");
                    let irr = matches!(what, EnumerateWhat::Irreducible);
                    let items = poly::monic_polys(&base, d as usize, irr)?;
                    (if irr { "irreducible" } else { "monic" }, d, items)
                }
                EnumerateWhat::KNormalPolys => {
                    let (n, _) = text::parse_ext_part(&base, &ext.expect("clap enforces --ext"))?;
                    let kk = k.expect("clap enforces --k");
                    let items = classify::enumerate_k_normal_polys(&base, n, kk)?;
                    ("k-normal-polys", n, items)
                }
            };
            let rendered: Vec<String> = items.iter().map(|f| f.to_string()).collect();
            let obj = json!({
                "what": label,
                "degree": deg,
                "k": k,
                "count": rendered.len(),
                "items": rendered,
            });
            let mut table = String::new();
            for s in &rendered {
                table.push_str(s);
                table.push('\n');
            }
            emit(&out, &render(fmt.kind(), obj, table))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::MultOrd { spec, ext, element, poly: poly_str, fmt, out } => {
            let base = base_ctx(&spec.spec)?;
            let obj = match (element, poly_str) {
                (Some(el), None) => {
                    let ctx = ext_ctx(&spec.spec, &ext.expect("clap enforces --ext"))?;
                    let a = parse_element(&ctx, &el)?;
                    let d = ctx.mult_ord(&a)?;
                    json!({"element": render_elem(&a), "ord": d})
                }
                (None, Some(ps)) => {
                    let f = text::parse_poly(&base, &ps, 'x')?;
                    let d = poly::ord_poly(&base, &f)?;
                    json!({"poly": f.to_string(), "ord": d})
                }
                _ => {
                    return Err(Error::InvalidArgument(
                        "exactly one of --element and --poly is required".into(),
                    ))
                }
            };
            let table = format!("{}\n", obj["ord"]);
            emit(&out, &render(fmt.kind(), obj, table))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::FqOrder { spec, ext, element, poly: poly_str, fmt, out } => {
            let base = base_ctx(&spec.spec)?;
            let (mut obj, order) = match (element, poly_str) {
                (Some(el), None) => {
                    let ctx = ext_ctx(&spec.spec, &ext.expect("clap enforces --ext"))?;
                    let a = parse_element(&ctx, &el)?;
                    let res = linearized::fq_order_element(&ctx, &a);
                    let mut obj = res.to_json();
                    obj["element"] = json!(render_elem(&a));
                    (obj, res.order)
                }
                (None, Some(ps)) => {
                    let f = text::parse_poly(&base, &ps, 'x')?;
                    let res = linearized::fq_order_poly(&base, &f)?;
                    let mut obj = res.to_json();
                    obj["poly"] = json!(f.to_string());
                    (obj, res.order)
                }
                _ => {
                    return Err(Error::InvalidArgument(
                        "exactly one of --element and --poly is required".into(),
                    ))
                }
            };
            if obj.get("element").is_none() {
                obj["element"] = serde_json::Value::Null;
            }
            let table = format!("{order}\n");
            emit(&out, &render(fmt.kind(), obj, table))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Classify { spec, ext, element, fmt, out } => {
            let ctx = ext_ctx(&spec.spec, &ext)?;
            let a = parse_element(&ctx, &element)?;
            let report = classify::classify(&ctx, &a);
            let obj = report.to_json();
            let mut table = String::new();
            for key in [
                "element",
                "ord",
                "r",
                "is_primitive",
                "fq_order",
                "k",
                "is_normal",
                "min_poly",
                "trace",
                "norm",
            ] {
                table.push_str(&format!("{key}: {}\n", json_scalar(&obj[key])));
            }
            emit(&out, &render(fmt.kind(), obj, table))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Free { spec, ext, element, m, g, fmt, out } => {
            let ctx = ext_ctx(&spec.spec, &ext)?;
            let a = parse_element(&ctx, &element)?;
            let obj = match (m, g) {
                (Some(m), None) => {
                    let free = classify::is_m_free(&ctx, &a, m)?;
                    json!({"element": render_elem(&a), "m": m, "free": free})
                }
                (None, Some(gs)) => {
                    let g = text::parse_poly(ctx.base(), &gs, 'x')?;
                    let free = classify::is_g_free(&ctx, &a, &g)?;
                    json!({"element": render_elem(&a), "g": g.to_string(), "free": free})
                }
                _ => {
                    return Err(Error::InvalidArgument(
                        "exactly one of --m and --g is required".into(),
                    ))
                }
            };
            let table = format!("{}\n", obj["free"]);
            emit(&out, &render(fmt.kind(), obj, table))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Count { spec, ext, what, k, m, g, fmt, out } => {
            let base = base_ctx(&spec.spec)?;
            let (n, _) = text::parse_ext_part(&base, &ext)?;
            let mut obj = json!({
                "q": base.q(),
                "n": n,
                "what": what.name(),
            });
            let count = match what {
                CountWhat::Elements => {
                    let kk = k.expect("clap enforces --k");
                    obj["k"] = json!(kk);
                    classify::count_k_normal_elements(&base, n, kk)?
                }
                CountWhat::Polys => {
                    let kk = k.expect("clap enforces --k");
                    obj["k"] = json!(kk);
                    classify::count_k_normal_polys(&base, n, kk)?
                }
                CountWhat::MFree => {
                    let mm = m.expect("clap enforces --m");
                    obj["m"] = json!(mm);
                    classify::count_m_free(&base, n, mm)?
                }
                CountWhat::GFree => {
                    let gp = text::parse_poly(&base, &g.expect("clap enforces --g"), 'x')?;
                    obj["g"] = json!(gp.to_string());
                    classify::count_g_free(&base, n, &gp)?
                }
                CountWhat::IrrByOrd => {
                    let gp = text::parse_poly(&base, &g.expect("clap enforces --g"), 'x')?;
                    obj["g"] = json!(gp.to_string());
                    classify::count_irreducibles_with_ord(&base, n, &gp)?
                }
            };
            obj["count"] = json!(count);
            emit(&out, &render(fmt.kind(), obj, format!("{count}\n")))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Partition { spec, ext, r, g, fmt, out } => {
            let ctx = ext_ctx(&spec.spec, &ext)?;
            let (obj, table) = match (r, g) {
                (Some(r), None) => {
                    let part = classify::rth_power_partition(&ctx, r)?;
                    let e = ctx.group_order();
                    let parts_json: Vec<_> = part
                        .parts
                        .iter()
                        .map(|(t, elems)| {
                            json!({
                                "t": t,
                                "ord": e / t,
                                "elements": elems.iter().map(render_elem).collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    let mut table = format!(
                        "B = r-th powers, r = {r}, |B| = {}\n",
                        part.b.len()
                    );
                    for (t, elems) in &part.parts {
                        table.push_str(&format!(
                            "t = {t} (ord {}): {}\n",
                            e / t,
                            elems.iter().map(render_elem).collect::<Vec<_>>().join(", ")
                        ));
                    }
                    (
                        json!({
                            "r": r,
                            "b_size": part.b.len(),
                            "b": part.b.iter().map(render_elem).collect::<Vec<_>>(),
                            "parts": parts_json,
                        }),
                        table,
                    )
                }
                (None, Some(gs)) => {
                    let f = text::parse_poly(ctx.base(), &gs, 'x')?;
                    let part = classify::fq_order_partition(&ctx, &f)?;
                    let parts_json: Vec<_> = part
                        .parts
                        .iter()
                        .map(|(gg, elems)| {
                            json!({
                                "g": gg.to_string(),
                                "elements": elems.iter().map(render_elem).collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    let mut table = format!(
                        "B = image of L_f, f = {f}, |B| = {}\n",
                        part.b.len()
                    );
                    for (gg, elems) in &part.parts {
                        table.push_str(&format!(
                            "g = {gg}: {}\n",
                            elems.iter().map(render_elem).collect::<Vec<_>>().join(", ")
                        ));
                    }
                    (
                        json!({
                            "f": f.to_string(),
                            "b_size": part.b.len(),
                            "b": part.b.iter().map(render_elem).collect::<Vec<_>>(),
                            "parts": parts_json,
                        }),
                        table,
                    )
                }
                _ => {
                    return Err(Error::InvalidArgument(
                        "exactly one of --r and --g is required".into(),
                    ))
                }
            };
            emit(&out, &render(fmt.kind(), obj, table))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { grid, cell, names, seed, fmt, out, out_pos } => {
            let outcome = if cell.is_empty() {
                let gs = verify::GridSpec::parse(&grid)?;
                verify::run_checks(&gs, names.as_deref(), seed)?
            } else {
                let cells: Vec<verify::Cell> =
                    cell.iter().map(|c| verify::Cell::parse(c)).collect::<Result<_>>()?;
                verify::run_checks_cells(&cells, names.as_deref(), seed)?
            };
            let content = match fmt.kind() {
                Fmt::Json => outcome.to_json_lines(),
                Fmt::Csv => {
                    eprintln!("{}", json!({"summary": outcome.summary.to_json()}));
                    outcome.to_csv()
                }
                Fmt::Table => {
                    let mut t = String::new();
                    for r in &outcome.reports {
                        if r.status == verify::Status::Fail {
                            let tag = if r.expected_fail { "FAIL (expected)" } else { "FAIL" };
                            t.push_str(&format!(
                                "{tag} {} ({},{},{}): {}\n",
                                r.check,
                                r.p,
                                r.m,
                                r.n,
                                r.witness.as_deref().unwrap_or("")
                            ));
                        }
                    }
                    let s = outcome.summary;
                    t.push_str(&format!(
                        "total {} | pass {} | fail {} | skipped {} | expected_fail {}\n",
                        s.total, s.pass, s.fail, s.skipped, s.expected_fail
                    ));
                    t
                }
            };
            let dest = match (&out.out, out_pos.as_deref()) {
                (Some(p), _) => Some(p.clone()),
                (None, Some(p)) if p != "-" => Some(PathBuf::from(p)),
                _ => None,
            };
            emit(&OutArg { out: dest }, &content)?;
            if outcome.unexpected_failures() > 0 {
                Ok(ExitCode::from(1))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
    }
}
