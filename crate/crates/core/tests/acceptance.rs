//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints exactly one pass/fail line, visible in plain `cargo test` output.
//!
//! Each criterion re-derives its expected values independently (exhaustive
//! sweeps, definitional histograms) and compares them against the library's
//! formulas and fast paths, under a wall-clock budget. The process exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fqord::classify;
use fqord::ext::ExtCtx;
use fqord::field::{FieldSpec, FqCtx};
use fqord::linearized::{
    fq_order_element_krylov, fq_order_element_strip, fq_order_poly, fq_order_poly_krylov,
    fq_order_poly_structural,
};
use fqord::num;
use fqord::poly::{self, Poly};
use fqord::text::{parse_field_spec, parse_poly};
use fqord::verify::{run_checks, run_checks_cells, Cell, GridSpec, Status};

struct Criterion {
    label: &'static str,
    budget: Duration,
    run: fn() -> Result<String, String>,
}

fn main() {
    let criteria = [
        Criterion {
            label: "worked example over F_5",
            budget: Duration::from_secs(10),
            run: c1_worked_example,
        },
        Criterion {
            label: "order methods agree",
            budget: Duration::from_secs(60),
            run: c2_order_methods_agree,
        },
        Criterion {
            label: "order fiber counts",
            budget: Duration::from_secs(30),
            run: c3_fiber_counts,
        },
        Criterion {
            label: "partition theorems",
            budget: Duration::from_secs(60),
            run: c4_partitions,
        },
        Criterion {
            label: "count formulas vs brute force",
            budget: Duration::from_secs(180),
            run: c5_count_formulas,
        },
        Criterion {
            label: "structural propositions on the default grid",
            budget: Duration::from_secs(300),
            run: c6_structural_propositions,
        },
        Criterion {
            label: "printed-form checks fail as expected",
            budget: Duration::from_secs(10),
            run: c7_expected_failures,
        },
        Criterion {
            label: "deterministic reruns",
            budget: Duration::from_secs(630),
            run: c8_determinism,
        },
    ];

    let mut failed = 0u32;
    for (i, c) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let caught = catch_unwind(AssertUnwindSafe(c.run));
        let dt = t0.elapsed();
        let outcome = match caught {
            Ok(Ok(detail)) if dt <= c.budget => Ok(detail),
            Ok(Ok(detail)) => Err(format!(
                "checks passed but run took {:.1} s against a budget of {:.0} s ({detail})",
                dt.as_secs_f64(),
                c.budget.as_secs_f64()
            )),
            Ok(Err(msg)) => Err(msg),
            Err(payload) => Err(panic_message(payload.as_ref())),
        };
        match outcome {
            Ok(detail) => {
                println!("acceptance {}/8 PASS {}: {} [{} ms]", i + 1, c.label, detail, dt.as_millis())
            }
            Err(msg) => {
                failed += 1;
                println!("acceptance {}/8 FAIL {}: {} [{} ms]", i + 1, c.label, msg, dt.as_millis());
            }
        }
    }
    if failed > 0 {
        println!("acceptance: {failed} of 8 criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all 8 criteria pass");
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        format!("panic: {s}")
    } else if let Some(s) = payload.downcast_ref::<String>() {
        format!("panic: {s}")
    } else {
        "panic with a non-string payload".to_string()
    }
}

fn estr(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn base_ctx(spec: &str) -> Result<FqCtx, String> {
    FqCtx::new(&parse_field_spec(spec).map_err(estr)?).map_err(estr)
}

fn cell_ctx(cell: &Cell) -> Result<ExtCtx, String> {
    let base = FqCtx::new(&FieldSpec::new(cell.p, cell.m)).map_err(estr)?;
    ExtCtx::new(base, cell.n, None).map_err(estr)
}

fn random_monic(ctx: &FqCtx, deg: usize, rng: &mut ChaCha8Rng) -> Poly {
    let mut coeffs = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        coeffs.push(ctx.elem_from_index(rng.next_u64() % ctx.q()));
    }
    coeffs.push(ctx.one());
    Poly::from_coeffs(coeffs)
}

/// The multiplicative order of x + 1 over F_5 is 2 and its F_5-Order is
/// x + 4, reproduced by a single library call in under a millisecond, and
/// the full worked-example check passes on the cell (5, 1, 2).
fn c1_worked_example() -> Result<String, String> {
    let base = FqCtx::prime(5).map_err(estr)?;
    let f = parse_poly(&base, "x+1", 'x').map_err(estr)?;
    let want = parse_poly(&base, "x+4", 'x').map_err(estr)?;
    let got = fq_order_poly(&base, &f).map_err(estr)?;
    if got.order != want {
        return Err(format!("Ord(x+1) over F_5 came out as {}, expected x+4", got.order));
    }
    let mut best = Duration::MAX;
    for _ in 0..10 {
        let t0 = Instant::now();
        let r = fq_order_poly(&base, &f).map_err(estr)?;
        best = best.min(t0.elapsed());
        assert_eq!(r.order, want);
    }
    if best > Duration::from_millis(1) {
        return Err(format!("a single warm Order call took {best:?}, budget 1 ms"));
    }
    let out = run_checks_cells(
        &[Cell { p: 5, m: 1, n: 2 }],
        Some(&["paper_example_f5".to_string()]),
        0,
    )
    .map_err(estr)?;
    let rep = out.reports.first().ok_or("worked-example check produced no report")?;
    if rep.status != Status::Pass {
        return Err(format!(
            "worked-example check at (5,1,2) is {}: {}",
            rep.status.as_str(),
            rep.witness.clone().unwrap_or_default()
        ));
    }
    Ok(format!(
        "Ord(x+1) = x+4 over F_5 in {} ns; worked-example check passes at (5,1,2)",
        best.as_nanos()
    ))
}

/// Krylov and structural polynomial Orders agree on every monic polynomial
/// of degree 1..=5 over F_2 and F_3 and on 500 seeded random polynomials of
/// degree 1..=6 over each of F_4, F_5, F_7, F_9; Krylov and divisor-strip
/// element Orders agree on every element of every default-grid field.
fn c2_order_methods_agree() -> Result<String, String> {
    let mut polys_checked = 0u64;
    for spec in ["2", "3"] {
        let base = base_ctx(spec)?;
        for deg in 1..=5 {
            for f in poly::monic_polys(&base, deg, false).map_err(estr)? {
                compare_poly_orders(&base, &f)?;
                polys_checked += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for spec in ["2^2", "5", "7", "3^2"] {
        let base = base_ctx(spec)?;
        for _ in 0..500 {
            let deg = 1 + (rng.next_u64() % 6) as usize;
            let f = random_monic(&base, deg, &mut rng);
            compare_poly_orders(&base, &f)?;
            polys_checked += 1;
        }
    }

    let cells = GridSpec::default().cells().map_err(estr)?;
    let mut elems_checked = 0u64;
    for cell in &cells {
        let ctx = cell_ctx(cell)?;
        for a in ctx.elems().map_err(estr)? {
            let krylov = fq_order_element_krylov(&ctx, &a);
            let strip = fq_order_element_strip(&ctx, &a);
            if krylov != strip {
                return Err(format!(
                    "({},{},{}) element {}: krylov Order {krylov} differs from strip Order {strip}",
                    cell.p,
                    cell.m,
                    cell.n,
                    a.residue()
                ));
            }
            elems_checked += 1;
        }
    }
    Ok(format!(
        "{polys_checked} polynomial Orders krylov == structural; {elems_checked} element Orders krylov == divisor-strip over {} cells",
        cells.len()
    ))
}

fn compare_poly_orders(base: &FqCtx, f: &Poly) -> Result<(), String> {
    let krylov = fq_order_poly_krylov(base, f).map_err(estr)?;
    match fq_order_poly_structural(base, f).map_err(estr)? {
        Some(structural) if structural == krylov => Ok(()),
        Some(structural) => Err(format!(
            "q = {}, f = {f}: krylov Order {krylov} differs from structural Order {structural}",
            base.q()
        )),
        None => Err(format!(
            "q = {}, f = {f}: structural Order declined a field it should handle",
            base.q()
        )),
    }
}

/// For every field with q^n <= 1024 and every monic divisor h of x^n - 1,
/// exactly Phi_q(h) elements have Order h, and the fibers tile the field.
fn c3_fiber_counts() -> Result<String, String> {
    let grid = GridSpec { pmax: 7, qnmax: 1024 };
    let cells = grid.cells().map_err(estr)?;
    let mut fibers = 0u64;
    for cell in &cells {
        let ctx = cell_ctx(cell)?;
        let base = ctx.base();
        let mut hist: BTreeMap<Poly, u64> = BTreeMap::new();
        for a in ctx.elems().map_err(estr)? {
            *hist.entry(fq_order_element_strip(&ctx, &a)).or_insert(0) += 1;
        }
        let divisors = poly::monic_divisors(base, ctx.xn1_factorization()).map_err(estr)?;
        if hist.len() != divisors.len() {
            return Err(format!(
                "({},{},{}): {} distinct Orders but {} monic divisors of x^{}-1",
                cell.p,
                cell.m,
                cell.n,
                hist.len(),
                divisors.len(),
                cell.n
            ));
        }
        let mut covered = 0u64;
        for h in &divisors {
            let phi = poly::poly_phi(base, h).map_err(estr)?;
            let got = hist.get(h).copied().unwrap_or(0);
            if got != phi {
                return Err(format!(
                    "({},{},{}): fiber of h = {h} has {got} elements, Phi_q(h) = {phi}",
                    cell.p, cell.m, cell.n
                ));
            }
            covered += got;
            fibers += 1;
        }
        if covered != ctx.size() {
            return Err(format!(
                "({},{},{}): fibers cover {covered} of {} elements",
                cell.p,
                cell.m,
                cell.n,
                ctx.size()
            ));
        }
    }
    Ok(format!("{fibers} Order fibers match Phi_q and tile their fields ({} cells)", cells.len()))
}

/// Both partition theorems hold on every field with q^n <= 1024: the r-th
/// power set has (q^n - 1)/r elements and splits by multiplicative order,
/// and the image of L_f has q^(n - deg f) elements and splits by Order.
fn c4_partitions() -> Result<String, String> {
    let grid = GridSpec { pmax: 7, qnmax: 1024 };
    let cells = grid.cells().map_err(estr)?;
    let mut r_partitions = 0u64;
    let mut f_partitions = 0u64;
    for cell in &cells {
        let ctx = cell_ctx(cell)?;
        let e = ctx.group_order();
        for r in num::divisors(e) {
            let part = classify::rth_power_partition(&ctx, r).map_err(estr)?;
            if part.b.len() as u64 != e / r {
                return Err(format!(
                    "({},{},{}) r = {r}: |B| = {}, expected (q^n-1)/r = {}",
                    cell.p,
                    cell.m,
                    cell.n,
                    part.b.len(),
                    e / r
                ));
            }
            let pieces: usize = part.parts.iter().map(|(_, v)| v.len()).sum();
            if pieces != part.b.len() {
                return Err(format!(
                    "({},{},{}) r = {r}: parts cover {pieces} of {} elements of B",
                    cell.p,
                    cell.m,
                    cell.n,
                    part.b.len()
                ));
            }
            r_partitions += 1;
        }
        let base = ctx.base();
        for f in poly::monic_divisors(base, ctx.xn1_factorization()).map_err(estr)? {
            let part = classify::fq_order_partition(&ctx, &f).map_err(estr)?;
            let want = ctx.size() / base.q().pow(f.degree().unwrap_or(0) as u32);
            if part.b.len() as u64 != want {
                return Err(format!(
                    "({},{},{}) f = {f}: |B| = {}, expected q^(n - deg f) = {want}",
                    cell.p,
                    cell.m,
                    cell.n,
                    part.b.len()
                ));
            }
            let pieces: usize = part.parts.iter().map(|(_, v)| v.len()).sum();
            if pieces != part.b.len() {
                return Err(format!(
                    "({},{},{}) f = {f}: parts cover {pieces} of {} elements of B",
                    cell.p,
                    cell.m,
                    cell.n,
                    part.b.len()
                ));
            }
            f_partitions += 1;
        }
    }
    Ok(format!(
        "{r_partitions} r-th power partitions and {f_partitions} Order partitions verified ({} cells)",
        cells.len()
    ))
}

/// Closed-form counts match definitional sweeps: m-free, g-free, and
/// k-normal element counts on every field with q^n <= 1024, and
/// irreducible-by-Order and k-normal polynomial counts on every field
/// with q^n <= 4096.
fn c5_count_formulas() -> Result<String, String> {
    let mut element_counts = 0u64;
    let element_grid = GridSpec { pmax: 7, qnmax: 1024 };
    for cell in element_grid.cells().map_err(estr)? {
        let ctx = cell_ctx(&cell)?;
        let base = ctx.base().clone();
        let n = cell.n;
        let e = ctx.group_order();
        let xn1 = ctx.x_pow_minus_one();

        let mut mult_orders = Vec::new();
        let mut ord_hist: BTreeMap<Poly, u64> = BTreeMap::new();
        for a in ctx.elems().map_err(estr)? {
            mult_orders.push(if a.is_zero() { 0 } else { ctx.mult_ord(&a).map_err(estr)? });
            *ord_hist.entry(fq_order_element_strip(&ctx, &a)).or_insert(0) += 1;
        }

        for m in num::divisors(e) {
            let formula = classify::count_m_free(&base, n, m).map_err(estr)?;
            let sweep =
                mult_orders.iter().filter(|&&o| o != 0 && num::gcd(m, e / o) == 1).count() as u64;
            if formula != sweep {
                return Err(format!(
                    "({},{},{}) m = {m}: count_m_free = {formula}, sweep = {sweep}",
                    cell.p, cell.m, cell.n
                ));
            }
            element_counts += 1;
        }

        let divisors = poly::monic_divisors(&base, ctx.xn1_factorization()).map_err(estr)?;
        let mut cofactors: BTreeMap<Poly, Poly> = BTreeMap::new();
        for h in &divisors {
            let (co, _) = poly::divmod(&base, &xn1, h).map_err(estr)?;
            cofactors.insert(h.clone(), co);
        }
        for g in &divisors {
            let formula = classify::count_g_free(&base, n, g).map_err(estr)?;
            let sweep: u64 = ord_hist
                .iter()
                .filter(|(h, _)| poly::gcd(&base, g, &cofactors[*h]).is_one())
                .map(|(_, c)| c)
                .sum();
            if formula != sweep {
                return Err(format!(
                    "({},{},{}) g = {g}: count_g_free = {formula}, sweep = {sweep}",
                    cell.p, cell.m, cell.n
                ));
            }
            element_counts += 1;
        }

        for k in 0..=n {
            let formula = classify::count_k_normal_elements(&base, n, k).map_err(estr)?;
            let sweep: u64 = ord_hist
                .iter()
                .filter(|(h, _)| h.degree() == Some((n - k) as usize))
                .map(|(_, c)| c)
                .sum();
            if formula != sweep {
                return Err(format!(
                    "({},{},{}) k = {k}: count_k_normal_elements = {formula}, sweep = {sweep}",
                    cell.p, cell.m, cell.n
                ));
            }
            element_counts += 1;
        }
    }

    let mut poly_counts = 0u64;
    for cell in GridSpec::default().cells().map_err(estr)? {
        let ctx = cell_ctx(&cell)?;
        let base = ctx.base().clone();
        let n = cell.n;

        let irreducibles = poly::monic_polys(&base, n as usize, true).map_err(estr)?;
        let mut by_ord: BTreeMap<Poly, u64> = BTreeMap::new();
        let mut by_k = vec![0u64; n as usize + 1];
        for f in &irreducibles {
            let ord = fq_order_poly_krylov(&base, f).map_err(estr)?;
            let k = n as usize - ord.degree().unwrap_or(0);
            by_k[k] += 1;
            *by_ord.entry(ord).or_insert(0) += 1;
        }

        let divisors = poly::monic_divisors(&base, ctx.xn1_factorization()).map_err(estr)?;
        let mut covered = 0u64;
        for f in &divisors {
            let formula = classify::count_irreducibles_with_ord(&base, n, f).map_err(estr)?;
            let sweep = by_ord.get(f).copied().unwrap_or(0);
            if formula != sweep {
                return Err(format!(
                    "({},{},{}) Ord = {f}: count_irreducibles_with_ord = {formula}, enumeration = {sweep}",
                    cell.p, cell.m, cell.n
                ));
            }
            covered += sweep;
            poly_counts += 1;
        }
        if covered != irreducibles.len() as u64 {
            return Err(format!(
                "({},{},{}): Orders of {} irreducibles cover only {covered} (some Order is not a divisor of x^{}-1)",
                cell.p,
                cell.m,
                cell.n,
                irreducibles.len(),
                cell.n
            ));
        }

        for k in 0..=n {
            let formula = classify::count_k_normal_polys(&base, n, k).map_err(estr)?;
            let sweep = by_k[k as usize];
            if formula != sweep {
                return Err(format!(
                    "({},{},{}) k = {k}: count_k_normal_polys = {formula}, enumeration = {sweep}",
                    cell.p, cell.m, cell.n
                ));
            }
            poly_counts += 1;
        }
    }
    Ok(format!(
        "{element_counts} element count formulas and {poly_counts} polynomial count formulas match brute force"
    ))
}

/// Every structural proposition check passes on the full default grid:
/// exhaustive element and pair coverage on small cells, seeded uniform
/// sampling without replacement above the tuple budget.
fn c6_structural_propositions() -> Result<String, String> {
    let names: Vec<String> = [
        "product_rule",
        "sum_rule",
        "sum_rule_multiterm",
        "inverse_n_minus_1",
        "inverse_quadratic",
        "embed_r",
        "embed_k",
        "ord_root_equality",
        "ord_divides_xm1",
        "ord_divisibility_law",
        "gcd_associate",
        "power_rule",
        "lcm_rule",
        "normal_poly_charac",
        "degmin_lemma",
        "affine_annihilator_theorem",
        "trace_zero_lemma",
        "phi_sum_trace",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let out = run_checks(&GridSpec::default(), Some(&names), 0).map_err(estr)?;
    if out.summary.fail != 0 || out.unexpected_failures() != 0 {
        let first = out
            .reports
            .iter()
            .find(|r| r.status == Status::Fail)
            .map(|r| {
                format!(
                    "{} at ({},{},{}): {}",
                    r.check,
                    r.p,
                    r.m,
                    r.n,
                    r.witness.clone().unwrap_or_default()
                )
            })
            .unwrap_or_default();
        return Err(format!("{} structural checks failed; first: {first}", out.summary.fail));
    }
    if out.summary.pass == 0 {
        return Err("no structural check actually ran".to_string());
    }
    Ok(format!(
        "{} checks x {} cells: {} pass, {} skipped on hypothesis, 0 fail",
        names.len(),
        GridSpec::default().cells().map_err(estr)?.len(),
        out.summary.pass,
        out.summary.skipped
    ))
}

/// The three checks that transcribe commonly printed but incorrect forms
/// each fail somewhere on the small grid, every failure carries a witness
/// and is marked expected, and the run still counts zero unexpected
/// failures.
fn c7_expected_failures() -> Result<String, String> {
    let grid = GridSpec { pmax: 3, qnmax: 256 };
    let names = [
        "fq_partition_statement_version",
        "kernel_formula_as_printed",
        "k_normal_poly_count_as_printed",
    ];
    let owned: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let out = run_checks(&grid, Some(&owned), 0).map_err(estr)?;
    let mut failing_reports = 0u64;
    for name in names {
        let fails: Vec<_> = out
            .reports
            .iter()
            .filter(|r| r.check == name && r.status == Status::Fail)
            .collect();
        if fails.is_empty() {
            return Err(format!("{name} never fails on the {},{} grid", grid.pmax, grid.qnmax));
        }
        for r in &fails {
            if !r.expected_fail {
                return Err(format!("{name} failure at ({},{},{}) is not marked expected", r.p, r.m, r.n));
            }
            if r.witness.as_deref().map_or(true, str::is_empty) {
                return Err(format!("{name} failure at ({},{},{}) has no witness", r.p, r.m, r.n));
            }
        }
        failing_reports += fails.len() as u64;
    }
    if out.summary.fail != 0 || out.unexpected_failures() != 0 {
        return Err(format!("{} unexpected failures leaked into the run", out.summary.fail));
    }
    Ok(format!(
        "all three printed-form checks fail with witnesses ({failing_reports} failing reports), run still counts zero unexpected failures"
    ))
}

/// Two full default-grid runs with seed 0 produce byte-identical reports
/// and summaries once elapsed_ms is ignored, with zero unexpected failures
/// and the full 2208-report surface.
fn c8_determinism() -> Result<String, String> {
    let per_run = Duration::from_secs(300);
    let t0 = Instant::now();
    let first = run_checks(&GridSpec::default(), None, 0).map_err(estr)?;
    let d1 = t0.elapsed();
    if d1 > per_run {
        return Err(format!("first grid run took {:.1} s, budget 300 s", d1.as_secs_f64()));
    }
    let t1 = Instant::now();
    let second = run_checks(&GridSpec::default(), None, 0).map_err(estr)?;
    let d2 = t1.elapsed();
    if d2 > per_run {
        return Err(format!("second grid run took {:.1} s, budget 300 s", d2.as_secs_f64()));
    }
    if first.reports.len() != second.reports.len() {
        return Err(format!(
            "report counts differ: {} vs {}",
            first.reports.len(),
            second.reports.len()
        ));
    }
    for (a, b) in first.reports.iter().zip(second.reports.iter()) {
        let same = a.check == b.check
            && a.p == b.p
            && a.m == b.m
            && a.n == b.n
            && a.extras == b.extras
            && a.status == b.status
            && a.expected_fail == b.expected_fail
            && a.witness == b.witness;
        if !same {
            return Err(format!(
                "reports diverge at {} ({},{},{}): statuses {} vs {}, witnesses {:?} vs {:?}",
                a.check,
                a.p,
                a.m,
                a.n,
                a.status.as_str(),
                b.status.as_str(),
                a.witness,
                b.witness
            ));
        }
    }
    if first.summary != second.summary {
        return Err(format!("summaries differ: {:?} vs {:?}", first.summary, second.summary));
    }
    if first.summary.total != 2208 {
        return Err(format!("default grid produced {} reports, expected 2208", first.summary.total));
    }
    if first.summary.fail != 0 {
        return Err(format!("{} unexpected failures on the default grid", first.summary.fail));
    }
    if first.summary.expected_fail == 0 {
        return Err("no expected failure surfaced on the default grid".to_string());
    }
    Ok(format!(
        "two seed-0 runs identical modulo elapsed_ms ({} reports, {:.1} s and {:.1} s)",
        first.summary.total,
        d1.as_secs_f64(),
        d2.as_secs_f64()
    ))
}
