//! Machine verification of the library's underlying propositions over a
//! grid of small fields.
//!
//! Every check names a self-contained claim about F_{q^n} and tests it
//! over one grid cell (p, m, n) with q = p^m, either exhaustively or with
//! seeded sampling. Three checks carry statements in a commonly printed
//! but incorrect form; they are flagged `expected_fail` and a run counts
//! their failures separately, so a suite where only those fail is clean.
//!
//! Runs are deterministic: the per-check random stream is derived from
//! the top-level seed, the cell, and the check name, and reports are
//! sorted by (check, p, m, n, extras).

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::classify;
use crate::error::{Error, Result};
use crate::ext::{ExtCtx, ExtElem};
use crate::field::{FieldSpec, FqCtx};
use crate::linearized;
use crate::num;
use crate::poly::{self, Poly};

/// Element sweeps run only on cells with at most this many elements.
pub const ENUM_BOUND: u64 = 4096;
/// Pair and triple checks sample at most this many tuples per cell.
pub const TUPLE_BUDGET: u64 = 1_000_000;

/// One grid cell: the field F_{q^n} with q = p^m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cell {
    pub p: u64,
    pub m: u32,
    pub n: u32,
}

impl Cell {
    /// Parses "p,m,n".
    pub fn parse(s: &str) -> Result<Cell> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("expected a cell of the form p,m,n, got {s:?}"),
            });
        }
        let num = |t: &str, what: &str| -> Result<u64> {
            t.trim().parse::<u64>().map_err(|_| Error::Parse {
                pos: s.find(t).unwrap_or(0),
                msg: format!("{what} must be a positive integer, got {t:?}"),
            })
        };
        let p = num(parts[0], "p")?;
        let m = num(parts[1], "m")?;
        let n = num(parts[2], "n")?;
        if !num::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 || n == 0 {
            return Err(Error::Parse { pos: 0, msg: "m and n must be at least 1".into() });
        }
        Ok(Cell { p, m: m as u32, n: n as u32 })
    }
}

/// Grid bounds: all cells (p, m, n) with p prime, p <= pmax and
/// p^{mn} <= qnmax.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub pmax: u64,
    pub qnmax: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { pmax: 7, qnmax: 4096 }
    }
}

impl GridSpec {
    /// Parses "pmax,qnmax".
    pub fn parse(s: &str) -> Result<GridSpec> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("expected a grid of the form pmax,qnmax, got {s:?}"),
            });
        }
        let pmax = parts[0].trim().parse::<u64>().map_err(|_| Error::Parse {
            pos: 0,
            msg: format!("pmax must be an integer, got {:?}", parts[0]),
        })?;
        let qnmax = parts[1].trim().parse::<u64>().map_err(|_| Error::Parse {
            pos: s.find(parts[1]).unwrap_or(0),
            msg: format!("qnmax must be an integer, got {:?}", parts[1]),
        })?;
        Ok(GridSpec { pmax, qnmax })
    }

    pub fn cells(&self) -> Result<Vec<Cell>> {
        if self.qnmax > num::MAX_ENUM {
            return Err(Error::TooLarge { what: "grid bound q^n".into(), bound: num::MAX_ENUM });
        }
        if self.pmax < 2 || self.qnmax < 2 {
            return Err(Error::InvalidArgument(
                "grid needs pmax >= 2 and qnmax >= 2".into(),
            ));
        }
        let mut out = Vec::new();
        for p in 2..=self.pmax {
            if !num::is_prime(p) {
                continue;
            }
            let mut m = 1u32;
            while let Ok(q) = num::checked_pow(p, m) {
                if q > self.qnmax {
                    break;
                }
                let mut n = 1u32;
                while let Ok(size) = num::checked_pow(q, n) {
                    if size > self.qnmax {
                        break;
                    }
                    out.push(Cell { p, m, n });
                    n += 1;
                }
                m += 1;
            }
        }
        Ok(out)
    }
}

/// Registry entry describing one check.
#[derive(Debug, Clone, Copy)]
pub struct CheckInfo {
    pub name: &'static str,
    /// The claim being tested, self-contained.
    pub statement: &'static str,
    /// When the check runs; everything else reports skipped_hypothesis.
    pub hypothesis: &'static str,
    /// True for claims recorded in a commonly printed but incorrect form.
    pub expected_fail: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    SkippedHypothesis,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SkippedHypothesis => "skipped_hypothesis",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub check: String,
    pub p: u64,
    pub m: u32,
    pub n: u32,
    pub extras: String,
    pub status: Status,
    pub expected_fail: bool,
    pub witness: Option<String>,
    pub elapsed_ms: u64,
}

impl CheckReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "check": self.check,
            "p": self.p,
            "m": self.m,
            "n": self.n,
            "extras": self.extras,
            "status": self.status.as_str(),
            "expected_fail": self.expected_fail,
            "witness": self.witness,
            "elapsed_ms": self.elapsed_ms,
        })
    }

    pub fn csv_header() -> &'static str {
        "check,p,m,n,extras,status,expected_fail,witness,elapsed_ms"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            csv_field(&self.check),
            self.p,
            self.m,
            self.n,
            csv_field(&self.extras),
            self.status.as_str(),
            self.expected_fail,
            csv_field(self.witness.as_deref().unwrap_or("")),
            self.elapsed_ms
        )
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Tally of a run. `fail` counts only unexpected failures; failures of
/// expected_fail checks land in `expected_fail`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Summary {
    pub total: u64,
    pub pass: u64,
    pub fail: u64,
    pub skipped: u64,
    pub expected_fail: u64,
}

impl Summary {
    pub fn from_reports(reports: &[CheckReport]) -> Summary {
        let mut s = Summary { total: 0, pass: 0, fail: 0, skipped: 0, expected_fail: 0 };
        for r in reports {
            s.total += 1;
            match r.status {
                Status::Pass => s.pass += 1,
                Status::SkippedHypothesis => s.skipped += 1,
                Status::Fail => {
                    if r.expected_fail {
                        s.expected_fail += 1;
                    } else {
                        s.fail += 1;
                    }
                }
            }
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "total": self.total,
            "pass": self.pass,
            "fail": self.fail,
            "skipped": self.skipped,
            "expected_fail": self.expected_fail,
        })
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub reports: Vec<CheckReport>,
    pub summary: Summary,
}

impl VerifyOutcome {
    pub fn unexpected_failures(&self) -> u64 {
        self.summary.fail
    }

    /// One JSON object per line, reports first, summary last.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            out.push_str(&r.to_json().to_string());
            out.push('\n');
        }
        out.push_str(&json!({ "summary": self.summary.to_json() }).to_string());
        out.push('\n');
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CheckReport::csv_header());
        out.push('\n');
        for r in &self.reports {
            out.push_str(&r.to_csv_row());
            out.push('\n');
        }
        out
    }
}

enum Outcome {
    Pass,
    Fail(String),
    Skip,
}

type CheckFn = fn(&Tables, u64) -> Outcome;

struct CheckDef {
    info: CheckInfo,
    needs_enum: bool,
    run: CheckFn,
}

/// Per-cell caches shared by all checks: the element sweep with orders,
/// F_q-Order ids, traces and minimal polynomials, and the divisor lattice
/// of x^n - 1 with Phi, degree, multiplicative order, cofactors, and the
/// divisibility and coprimality matrices.
struct Tables {
    cell: Cell,
    base: FqCtx,
    ext: ExtCtx,
    e: u64,
    size: u64,
    enumerable: bool,
    elems: Vec<ExtElem>,
    ord: Vec<u64>,
    fq_id: Vec<u32>,
    orbit_deg: Vec<u32>,
    trace_zero: Vec<bool>,
    min_polys: BTreeMap<Poly, Vec<u32>>,
    divisors: Vec<Poly>,
    div_index: BTreeMap<Poly, u32>,
    div_phi: Vec<u64>,
    div_deg: Vec<u32>,
    div_ordn: Vec<u64>,
    div_has_x1: Vec<bool>,
    cof_id: Vec<u32>,
    full_id: u32,
    div_divides: Vec<Vec<bool>>,
    div_coprime: Vec<Vec<bool>>,
    e_divisors: Vec<u64>,
    qpows: Vec<u64>,
    images: OnceCell<Vec<(u64, Vec<bool>)>>,
}

impl Tables {
    fn build(cell: &Cell) -> Result<Tables> {
        let base = FqCtx::new(&FieldSpec::new(cell.p, cell.m))?;
        let ext = ExtCtx::new(base.clone(), cell.n, None)?;
        let size = ext.size();
        let e = ext.group_order();
        let enumerable = size <= ENUM_BOUND;

        let divisors = poly::monic_divisors(&base, ext.xn1_factorization())?;
        let mut div_index = BTreeMap::new();
        for (i, d) in divisors.iter().enumerate() {
            div_index.insert(d.clone(), i as u32);
        }
        let xn1 = ext.x_pow_minus_one();
        let x_minus_1 = poly::x_pow_minus_one(&base, 1);
        let mut div_phi = Vec::new();
        let mut div_deg = Vec::new();
        let mut div_ordn = Vec::new();
        let mut div_has_x1 = Vec::new();
        let mut cof_id = Vec::new();
        for d in &divisors {
            div_phi.push(poly::poly_phi(&base, d)?);
            div_deg.push(d.degree().unwrap_or(0) as u32);
            div_ordn.push(poly::ord_poly(&base, d)?);
            div_has_x1.push(poly::divides(&base, &x_minus_1, d));
            let (co, rem) = poly::divmod(&base, &xn1, d)?;
            debug_assert!(rem.is_zero());
            cof_id.push(div_index[&co]);
        }
        let full_id = div_index[&xn1];
        let nd = divisors.len();
        let mut div_divides = vec![vec![false; nd]; nd];
        let mut div_coprime = vec![vec![false; nd]; nd];
        for i in 0..nd {
            for j in 0..nd {
                div_divides[i][j] = poly::divides(&base, &divisors[i], &divisors[j]);
                div_coprime[i][j] = poly::gcd(&base, &divisors[i], &divisors[j]).is_one();
            }
        }
        let qpows: Vec<u64> = (0..=cell.n).map(|d| base.q().pow(d)).collect();

        let mut t = Tables {
            cell: *cell,
            e,
            size,
            enumerable,
            elems: Vec::new(),
            ord: Vec::new(),
            fq_id: Vec::new(),
            orbit_deg: Vec::new(),
            trace_zero: Vec::new(),
            min_polys: BTreeMap::new(),
            divisors,
            div_index,
            div_phi,
            div_deg,
            div_ordn,
            div_has_x1,
            cof_id,
            full_id,
            div_divides,
            div_coprime,
            e_divisors: num::divisors(e),
            qpows,
            images: OnceCell::new(),
            base,
            ext,
        };
        if enumerable {
            t.build_element_tables()?;
        }
        Ok(t)
    }

    fn build_element_tables(&mut self) -> Result<()> {
        let sz = self.size as usize;
        self.elems = self.ext.elems()?.collect();
        self.ord = Vec::with_capacity(sz);
        self.fq_id = Vec::with_capacity(sz);
        self.trace_zero = Vec::with_capacity(sz);
        self.orbit_deg = vec![0; sz];
        for (i, a) in self.elems.iter().enumerate() {
            debug_assert_eq!(self.ext.elem_index(a), i as u64);
            self.ord.push(self.ext.mult_ord(a).unwrap_or(0));
            let o = linearized::fq_order_element_strip(&self.ext, a);
            self.fq_id.push(self.div_index[&o]);
            self.trace_zero.push(self.ext.trace(a).is_zero());
        }
        let mut visited = vec![false; sz];
        for i in 0..sz {
            if visited[i] {
                continue;
            }
            let mp = self.ext.min_poly(&self.elems[i]);
            let mut orbit = Vec::new();
            let mut cur = self.elems[i].clone();
            loop {
                let ix = self.ext.elem_index(&cur) as usize;
                if visited[ix] {
                    break;
                }
                visited[ix] = true;
                orbit.push(ix as u32);
                cur = self.ext.frobenius(&cur, 1);
            }
            debug_assert_eq!(mp.degree(), Some(orbit.len()));
            for &j in &orbit {
                self.orbit_deg[j as usize] = orbit.len() as u32;
            }
            self.min_polys.insert(mp, orbit);
        }
        Ok(())
    }

    fn idx(&self, a: &ExtElem) -> usize {
        self.ext.elem_index(a) as usize
    }

    /// For each divisor f of x^n - 1: the kernel size of L_f and the image
    /// of L_f as a membership bitmap, computed by a literal sweep.
    fn images(&self) -> &Vec<(u64, Vec<bool>)> {
        self.images.get_or_init(|| {
            let mut out = Vec::with_capacity(self.divisors.len());
            for f in &self.divisors {
                let mut bitmap = vec![false; self.size as usize];
                let mut kernel = 0u64;
                for a in &self.elems {
                    let img = linearized::lin_eval(&self.ext, f, a);
                    if img.is_zero() {
                        kernel += 1;
                    }
                    bitmap[self.idx(&img)] = true;
                }
                out.push((kernel, bitmap));
            }
            out
        })
    }

    fn qpow(&self, d: u32) -> u64 {
        self.qpows[d as usize]
    }

    fn elem_str(&self, i: usize) -> String {
        self.elems[i].residue().to_string()
    }
}

fn fnv(mut h: u64, bytes: &[u8]) -> u64 {
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn sub_seed(seed: u64, cell: &Cell, name: &str) -> u64 {
    let mut h = 0xcbf29ce484222325u64 ^ seed;
    h = fnv(h, &cell.p.to_le_bytes());
    h = fnv(h, &cell.m.to_le_bytes());
    h = fnv(h, &cell.n.to_le_bytes());
    fnv(h, name.as_bytes())
}

/// `count` distinct values drawn uniformly from [0, n) without
/// replacement (Floyd's algorithm); deterministic for a given rng.
fn sample_distinct(n: u64, count: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    debug_assert!(count <= n);
    let mut chosen = std::collections::HashSet::with_capacity(count as usize);
    let mut out = Vec::with_capacity(count as usize);
    for j in n - count..n {
        let t = rng.next_u64() % (j + 1);
        let v = if chosen.contains(&t) { j } else { t };
        chosen.insert(v);
        out.push(v);
    }
    out
}

fn sample_pairs(size: u64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let space = size.saturating_mul(size);
    if space <= TUPLE_BUDGET {
        let s = size as usize;
        let mut v = Vec::with_capacity(s * s);
        for i in 0..s {
            for j in 0..s {
                v.push((i, j));
            }
        }
        v
    } else {
        sample_distinct(space, TUPLE_BUDGET, rng)
            .into_iter()
            .map(|v| ((v / size) as usize, (v % size) as usize))
            .collect()
    }
}

fn sample_triples(size: u64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize, usize)> {
    let space = size.saturating_mul(size).saturating_mul(size);
    if space <= TUPLE_BUDGET {
        let s = size as usize;
        let mut v = Vec::with_capacity(s * s * s);
        for i in 0..s {
            for j in 0..s {
                for k in 0..s {
                    v.push((i, j, k));
                }
            }
        }
        v
    } else {
        sample_distinct(space, TUPLE_BUDGET, rng)
            .into_iter()
            .map(|v| {
                (
                    (v / (size * size)) as usize,
                    ((v / size) % size) as usize,
                    (v % size) as usize,
                )
            })
            .collect()
    }
}

fn random_monic(base: &FqCtx, deg: usize, rng: &mut ChaCha8Rng) -> Poly {
    let mut coeffs = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        coeffs.push(base.elem_from_index(rng.next_u64() % base.q()));
    }
    coeffs.push(base.one());
    Poly::from_coeffs(coeffs)
}

/// Degrees d in 1..=dmax with q^d <= cap.
fn enum_degs(q: u64, dmax: u32, cap: u64) -> Vec<u32> {
    (1..=dmax)
        .filter(|&d| matches!(num::checked_pow(q, d), Ok(v) if v <= cap))
        .collect()
}

fn x_pow(base: &FqCtx, t: u32) -> Poly {
    let mut c = vec![base.zero(); t as usize];
    c.push(base.one());
    Poly::from_coeffs(c)
}

// ---------------------------------------------------------------------
// Check bodies. Each returns Pass, Fail with a witness, or Skip when the
// cell is outside the check's hypothesis.
// ---------------------------------------------------------------------

fn c_ord_fiber_counts(t: &Tables, _seed: u64) -> Outcome {
    let mut mult: BTreeMap<u64, u64> = BTreeMap::new();
    let mut addv = vec![0u64; t.divisors.len()];
    for i in 0..t.size as usize {
        if t.ord[i] != 0 {
            *mult.entry(t.ord[i]).or_insert(0) += 1;
        }
        addv[t.fq_id[i] as usize] += 1;
    }
    for &d in &t.e_divisors {
        let got = mult.get(&d).copied().unwrap_or(0);
        if got != num::phi(d) {
            return Outcome::Fail(format!(
                "order {d} has {got} elements, expected phi({d}) = {}",
                num::phi(d)
            ));
        }
    }
    if mult.values().sum::<u64>() != t.e {
        return Outcome::Fail("multiplicative fibers do not sum to q^n - 1".into());
    }
    for (hid, h) in t.divisors.iter().enumerate() {
        if addv[hid] != t.div_phi[hid] {
            return Outcome::Fail(format!(
                "Order {h} has {} elements, expected Phi({h}) = {}",
                addv[hid], t.div_phi[hid]
            ));
        }
    }
    if addv.iter().sum::<u64>() != t.size {
        return Outcome::Fail("F_q-Order fibers do not sum to q^n".into());
    }
    Outcome::Pass
}

fn c_th1_partition(t: &Tables, _seed: u64) -> Outcome {
    let gamma = match t.ord.iter().position(|&o| o == t.e) {
        Some(i) => t.elems[i].clone(),
        None => return Outcome::Fail("no element of full multiplicative order".into()),
    };
    for &r in &t.e_divisors {
        let gr = t.ext.pow(&gamma, r);
        let mut in_b = vec![false; t.size as usize];
        let mut count = 0u64;
        let mut cur = t.ext.one();
        for _ in 0..t.e / r {
            let ix = t.idx(&cur);
            if !in_b[ix] {
                in_b[ix] = true;
                count += 1;
            }
            cur = t.ext.mul(&cur, &gr);
        }
        if count != t.e / r {
            return Outcome::Fail(format!(
                "r = {r}: the r-th powers number {count}, expected (q^n-1)/r = {}",
                t.e / r
            ));
        }
        let mut phi_total = 0u64;
        for &tt in &t.e_divisors {
            if tt % r == 0 {
                phi_total += num::phi(t.e / tt);
            }
        }
        if phi_total != t.e / r {
            return Outcome::Fail(format!(
                "r = {r}: fiber sizes sum to {phi_total}, expected {}",
                t.e / r
            ));
        }
        for i in 0..t.size as usize {
            if t.ord[i] == 0 {
                continue;
            }
            let member = (t.e / t.ord[i]) % r == 0;
            if in_b[i] != member {
                return Outcome::Fail(format!(
                    "r = {r}: element {} has t = {} {} a multiple of r, but r-th power membership is {}",
                    t.elem_str(i),
                    t.e / t.ord[i],
                    if member { "which is" } else { "which is not" },
                    in_b[i]
                ));
            }
        }
    }
    Outcome::Pass
}

fn c_b_cardinality(t: &Tables, _seed: u64) -> Outcome {
    for &r in &t.e_divisors {
        let gamma = &t.elems[t.ord.iter().position(|&o| o == t.e).unwrap()];
        let gr = t.ext.pow(gamma, r);
        let mut seen = vec![false; t.size as usize];
        let mut count = 0u64;
        let mut cur = t.ext.one();
        for _ in 0..t.e / r {
            let ix = t.idx(&cur);
            if !seen[ix] {
                seen[ix] = true;
                count += 1;
            }
            cur = t.ext.mul(&cur, &gr);
        }
        let divisor_sum: u64 = num::divisors(t.e / r).iter().map(|&d| num::phi(d)).sum();
        if count != t.e / r || divisor_sum != t.e / r {
            return Outcome::Fail(format!(
                "r = {r}: |B| = {count}, phi-sum = {divisor_sum}, expected (q^n-1)/r = {}",
                t.e / r
            ));
        }
    }
    Outcome::Pass
}

fn c_fq_partition_proof_version(t: &Tables, _seed: u64) -> Outcome {
    let images = t.images();
    for (fid, f) in t.divisors.iter().enumerate() {
        let bitmap = &images[fid].1;
        let expected = t.size / t.qpow(t.div_deg[fid]);
        let mut count = 0u64;
        for i in 0..t.size as usize {
            let member = t.div_divides[t.fq_id[i] as usize][t.cof_id[fid] as usize];
            if bitmap[i] != member {
                return Outcome::Fail(format!(
                    "f = {f}: element {} is in the image of L_f: {}, in the Order-fiber union: {}",
                    t.elem_str(i),
                    bitmap[i],
                    member
                ));
            }
            if bitmap[i] {
                count += 1;
            }
        }
        if count != expected {
            return Outcome::Fail(format!(
                "f = {f}: image size {count}, expected q^(n - deg f) = {expected}"
            ));
        }
        let mut phi_sum = 0u64;
        for gid in 0..t.divisors.len() {
            if t.div_divides[gid][fid] {
                phi_sum += t.div_phi[gid];
            }
        }
        if phi_sum != t.qpow(t.div_deg[fid]) {
            return Outcome::Fail(format!(
                "f = {f}: Phi-sum over divisors of f is {phi_sum}, expected q^(deg f) = {}",
                t.qpow(t.div_deg[fid])
            ));
        }
    }
    Outcome::Pass
}

fn c_fq_partition_statement_version(t: &Tables, _seed: u64) -> Outcome {
    for (fid, f) in t.divisors.iter().enumerate() {
        let mut stated_count = 0u64;
        let mut union_count = 0u64;
        let mut first_diff: Option<usize> = None;
        for i in 0..t.size as usize {
            if t.ord[i] == 0 {
                continue;
            }
            let stated = t.div_divides[fid][t.fq_id[i] as usize];
            let union = t.div_divides[t.fq_id[i] as usize][t.cof_id[fid] as usize];
            stated_count += stated as u64;
            union_count += union as u64;
            if stated != union && first_diff.is_none() {
                first_diff = Some(i);
            }
        }
        if let Some(i) = first_diff {
            return Outcome::Fail(format!(
                "f = {f}: as printed B = {{a : f | Ord(a)}} has {stated_count} members but the fiber union has {union_count}; element {} separates them",
                t.elem_str(i)
            ));
        }
    }
    Outcome::Pass
}

fn c_image_cardinality(t: &Tables, _seed: u64) -> Outcome {
    let images = t.images();
    for (fid, f) in t.divisors.iter().enumerate() {
        let expected = t.size / t.qpow(t.div_deg[fid]);
        let literal = images[fid].1.iter().filter(|&&b| b).count() as u64;
        let mut fiber_sum = 0u64;
        for hid in 0..t.divisors.len() {
            if t.div_divides[hid][t.cof_id[fid] as usize] {
                fiber_sum += t.div_phi[hid];
            }
        }
        if literal != expected || fiber_sum != expected {
            return Outcome::Fail(format!(
                "f = {f}: image size {literal}, fiber sum {fiber_sum}, expected q^(n - deg f) = {expected}"
            ));
        }
    }
    Outcome::Pass
}

fn c_kernel_formula_as_printed(t: &Tables, _seed: u64) -> Outcome {
    let images = t.images();
    for (fid, f) in t.divisors.iter().enumerate() {
        let actual = images[fid].0;
        let mut printed = 0u64;
        for hid in 0..t.divisors.len() {
            if t.div_divides[hid][fid] {
                printed += t.div_phi[hid] * t.qpow(t.div_deg[fid] - t.div_deg[hid]);
            }
        }
        if printed != actual {
            return Outcome::Fail(format!(
                "f = {f}: printed kernel size {printed}, actual {actual}"
            ));
        }
    }
    Outcome::Pass
}

fn c_phi_divisor_identity(t: &Tables, _seed: u64) -> Outcome {
    for (fid, f) in t.divisors.iter().enumerate() {
        let mut phi_sum = 0u64;
        for gid in 0..t.divisors.len() {
            if t.div_divides[gid][fid] {
                phi_sum += t.div_phi[gid];
            }
        }
        if phi_sum != t.qpow(t.div_deg[fid]) {
            return Outcome::Fail(format!(
                "f = {f}: Phi-sum {phi_sum}, expected q^(deg f) = {}",
                t.qpow(t.div_deg[fid])
            ));
        }
    }
    Outcome::Pass
}

fn c_m_free_count(t: &Tables, _seed: u64) -> Outcome {
    for &m in &t.e_divisors {
        let formula = num::phi(m) * (t.e / m);
        let mut divisor_sum = 0u64;
        for &d in &t.e_divisors {
            if num::gcd(m, t.e / d) == 1 {
                divisor_sum += num::phi(d);
            }
        }
        let mut brute = 0u64;
        for i in 0..t.size as usize {
            if t.ord[i] != 0 && num::gcd(m, t.e / t.ord[i]) == 1 {
                brute += 1;
            }
        }
        let lib = classify::count_m_free(&t.base, t.cell.n, m).unwrap();
        if formula != brute || formula != divisor_sum || formula != lib {
            return Outcome::Fail(format!(
                "m = {m}: closed form {formula}, divisor sum {divisor_sum}, sweep {brute}, library {lib}"
            ));
        }
    }
    Outcome::Pass
}

fn c_g_free_count(t: &Tables, _seed: u64) -> Outcome {
    for (gid, g) in t.divisors.iter().enumerate() {
        let formula = t.div_phi[gid] * t.qpow(t.cell.n - t.div_deg[gid]);
        let mut divisor_sum = 0u64;
        for hid in 0..t.divisors.len() {
            if t.div_coprime[gid][t.cof_id[hid] as usize] {
                divisor_sum += t.div_phi[hid];
            }
        }
        let mut brute = 0u64;
        for i in 0..t.size as usize {
            if t.div_coprime[gid][t.cof_id[t.fq_id[i] as usize] as usize] {
                brute += 1;
            }
        }
        let lib = classify::count_g_free(&t.base, t.cell.n, g).unwrap();
        if formula != brute || formula != divisor_sum || formula != lib {
            return Outcome::Fail(format!(
                "g = {g}: closed form {formula}, divisor sum {divisor_sum}, sweep {brute}, library {lib}"
            ));
        }
    }
    Outcome::Pass
}

fn c_product_rule(t: &Tables, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (i, j) in sample_pairs(t.size, &mut rng) {
        let (oa, ob) = (t.ord[i], t.ord[j]);
        if oa == 0 || ob == 0 || num::gcd(oa, ob) != 1 {
            continue;
        }
        let ab = t.ext.mul(&t.elems[i], &t.elems[j]);
        let oab = t.ord[t.idx(&ab)];
        let expect = num::gcd(t.e / oa, t.e / ob);
        if t.e / oab != expect {
            return Outcome::Fail(format!(
                "a = {}, b = {}: ab is {}-primitive, expected gcd(r_a, r_b) = {expect}",
                t.elem_str(i),
                t.elem_str(j),
                t.e / oab
            ));
        }
    }
    Outcome::Pass
}

/// Divisor-id products for coprime divisor pairs; the product of coprime
/// divisors of x^n - 1 is again a divisor.
fn coprime_product_ids(t: &Tables) -> Vec<Vec<u32>> {
    let nd = t.divisors.len();
    let mut prod = vec![vec![u32::MAX; nd]; nd];
    for i in 0..nd {
        for j in 0..nd {
            if t.div_coprime[i][j] {
                let pr = poly::mul(&t.base, &t.divisors[i], &t.divisors[j]);
                prod[i][j] = t.div_index[&pr];
            }
        }
    }
    prod
}

fn c_sum_rule(t: &Tables, seed: u64) -> Outcome {
    let prod = coprime_product_ids(t);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (i, j) in sample_pairs(t.size, &mut rng) {
        let (fa, fb) = (t.fq_id[i] as usize, t.fq_id[j] as usize);
        if !t.div_coprime[fa][fb] {
            continue;
        }
        let s = t.ext.add(&t.elems[i], &t.elems[j]);
        let fs = t.fq_id[t.idx(&s)];
        if fs != prod[fa][fb] {
            return Outcome::Fail(format!(
                "a = {} (Ord {}), b = {} (Ord {}): Ord(a+b) = {}, expected the product {}",
                t.elem_str(i),
                t.divisors[fa],
                t.elem_str(j),
                t.divisors[fb],
                t.divisors[fs as usize],
                t.divisors[prod[fa][fb] as usize]
            ));
        }
    }
    Outcome::Pass
}

fn c_sum_rule_multiterm(t: &Tables, seed: u64) -> Outcome {
    let prod = coprime_product_ids(t);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (i, j, k) in sample_triples(t.size, &mut rng) {
        let (fa, fb, fc) = (t.fq_id[i] as usize, t.fq_id[j] as usize, t.fq_id[k] as usize);
        if !t.div_coprime[fa][fb] || !t.div_coprime[fa][fc] || !t.div_coprime[fb][fc] {
            continue;
        }
        let ab = prod[fa][fb] as usize;
        let expect = prod[ab][fc];
        debug_assert_ne!(expect, u32::MAX);
        let s = t.ext.add(&t.ext.add(&t.elems[i], &t.elems[j]), &t.elems[k]);
        let fs = t.fq_id[t.idx(&s)];
        if fs != expect {
            return Outcome::Fail(format!(
                "elements {}, {}, {}: Ord of the sum is {}, expected the lcm {}",
                t.elem_str(i),
                t.elem_str(j),
                t.elem_str(k),
                t.divisors[fs as usize],
                t.divisors[expect as usize]
            ));
        }
    }
    Outcome::Pass
}

fn c_inverse_n_minus_1(t: &Tables, _seed: u64) -> Outcome {
    for i in 0..t.size as usize {
        if t.ord[i] == 0 {
            continue;
        }
        let k = t.cell.n - t.div_deg[t.fq_id[i] as usize];
        if k != t.cell.n - 1 {
            continue;
        }
        let inv = t.ext.inv(&t.elems[i]).unwrap();
        let k_inv = t.cell.n - t.div_deg[t.fq_id[t.idx(&inv)] as usize];
        if k_inv != k {
            return Outcome::Fail(format!(
                "a = {} is (n-1)-normal but its inverse is {k_inv}-normal",
                t.elem_str(i)
            ));
        }
    }
    Outcome::Pass
}

fn c_inverse_quadratic(t: &Tables, _seed: u64) -> Outcome {
    if t.cell.n != 2 {
        return Outcome::Skip;
    }
    for i in 0..t.size as usize {
        if t.ord[i] == 0 {
            continue;
        }
        let k = t.cell.n - t.div_deg[t.fq_id[i] as usize];
        let inv = t.ext.inv(&t.elems[i]).unwrap();
        let k_inv = t.cell.n - t.div_deg[t.fq_id[t.idx(&inv)] as usize];
        if k_inv != k {
            return Outcome::Fail(format!(
                "a = {} is {k}-normal but its inverse is {k_inv}-normal",
                t.elem_str(i)
            ));
        }
    }
    Outcome::Pass
}

fn c_embed_r(t: &Tables, _seed: u64) -> Outcome {
    for d in 1..=t.cell.n {
        if t.cell.n % d != 0 {
            continue;
        }
        let small = ExtCtx::new(t.base.clone(), d, None).unwrap();
        let emb = classify::embed(&small, &t.ext).unwrap();
        let es = small.group_order();
        let scale = t.e / es;
        for a in small.elems().unwrap() {
            if a.is_zero() {
                continue;
            }
            let r_small = es / small.mult_ord(&a).unwrap();
            let img = emb.apply(&t.ext, &a);
            let r_big = t.e / t.ord[t.idx(&img)];
            if r_big != scale * r_small {
                return Outcome::Fail(format!(
                    "d = {d}, a = {}: image is {r_big}-primitive, expected {} * {r_small} = {}",
                    a.residue(),
                    scale,
                    scale * r_small
                ));
            }
        }
    }
    Outcome::Pass
}

fn c_embed_k(t: &Tables, _seed: u64) -> Outcome {
    for d in 1..=t.cell.n {
        if t.cell.n % d != 0 {
            continue;
        }
        let small = ExtCtx::new(t.base.clone(), d, None).unwrap();
        let emb = classify::embed(&small, &t.ext).unwrap();
        for a in small.elems().unwrap() {
            let k_small =
                d - linearized::fq_order_element_strip(&small, &a).degree().unwrap_or(0) as u32;
            let img = emb.apply(&t.ext, &a);
            let k_big = t.cell.n - t.div_deg[t.fq_id[t.idx(&img)] as usize];
            if k_big != t.cell.n - d + k_small {
                return Outcome::Fail(format!(
                    "d = {d}, a = {}: image is {k_big}-normal, expected n - d + k = {}",
                    a.residue(),
                    t.cell.n - d + k_small
                ));
            }
        }
    }
    Outcome::Pass
}

fn c_ord_root_equality(t: &Tables, _seed: u64) -> Outcome {
    for (f, ids) in &t.min_polys {
        let first = t.fq_id[ids[0] as usize];
        for &i in ids {
            if t.fq_id[i as usize] != first {
                return Outcome::Fail(format!("roots of {f} have differing F_q-Orders"));
            }
        }
        let of = linearized::fq_order_poly_krylov(&t.base, f).unwrap();
        if of != t.divisors[first as usize] {
            return Outcome::Fail(format!(
                "Ord({f}) = {of} but its roots have Ord {}",
                t.divisors[first as usize]
            ));
        }
    }
    Outcome::Pass
}

fn c_ord_divides_xm1(t: &Tables, _seed: u64) -> Outcome {
    for f in t.min_polys.keys() {
        let d = f.degree().unwrap() as u32;
        let of = linearized::fq_order_poly_krylov(&t.base, f).unwrap();
        if !poly::divides(&t.base, &of, &poly::x_pow_minus_one(&t.base, d)) {
            return Outcome::Fail(format!("Ord({f}) = {of} does not divide x^{d} - 1"));
        }
    }
    Outcome::Pass
}

fn c_ord_divisibility_law(t: &Tables, seed: u64) -> Outcome {
    let mut ords: BTreeMap<Poly, Poly> = BTreeMap::new();
    let mut check = |f: &Poly, g: &Poly| -> Option<String> {
        let of = ords
            .entry(f.clone())
            .or_insert_with(|| linearized::fq_order_poly_krylov(&t.base, f).unwrap())
            .clone();
        let lhs = linearized::divides_associate(&t.base, f, g).unwrap();
        let rhs = poly::divides(&t.base, &of, g);
        (lhs != rhs).then(|| {
            format!("f = {f}, g = {g}: f | L_g is {lhs} but Ord(f) | g is {rhs} (Ord(f) = {of})")
        })
    };
    for df in enum_degs(t.base.q(), 3, 128) {
        for f in poly::monic_polys(&t.base, df as usize, false).unwrap() {
            for dg in 0..=df + 1 {
                if !matches!(num::checked_pow(t.base.q(), dg), Ok(v) if v <= 128) {
                    continue;
                }
                for g in poly::monic_polys(&t.base, dg as usize, false).unwrap() {
                    if let Some(w) = check(&f, &g) {
                        return Outcome::Fail(w);
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..60 {
        let f = random_monic(&t.base, 1 + (rng.next_u64() % 3) as usize, &mut rng);
        let g = random_monic(&t.base, (rng.next_u64() % 5) as usize, &mut rng);
        if let Some(w) = check(&f, &g) {
            return Outcome::Fail(w);
        }
    }
    Outcome::Pass
}

fn c_gcd_associate(t: &Tables, _seed: u64) -> Outcome {
    if t.base.q() > 4 {
        return Outcome::Skip;
    }
    let mut polys = Vec::new();
    for d in 1..=3usize {
        polys.extend(poly::monic_polys(&t.base, d, false).unwrap());
    }
    let associates: Vec<Poly> =
        polys.iter().map(|h| linearized::q_associate(&t.base, h).unwrap()).collect();
    for (i, h) in polys.iter().enumerate() {
        for (j, g) in polys.iter().enumerate() {
            let lhs = poly::gcd(&t.base, &associates[i], &associates[j]);
            let rhs =
                linearized::q_associate(&t.base, &poly::gcd(&t.base, h, g)).unwrap();
            if lhs != rhs {
                return Outcome::Fail(format!(
                    "h = {h}, g = {g}: gcd(L_h, L_g) = {lhs} but L_gcd = {rhs}"
                ));
            }
        }
    }
    Outcome::Pass
}

fn c_power_rule(t: &Tables, _seed: u64) -> Outcome {
    let q = t.base.q();
    let bmax = (q + 2).min(12) as u32;
    for d in enum_degs(q, 3, 128) {
        for g in poly::monic_polys(&t.base, d as usize, true).unwrap() {
            let og = linearized::fq_order_poly_krylov(&t.base, &g).unwrap();
            let mut f = g.clone();
            for b in 2..=bmax {
                f = poly::mul(&t.base, &f, &g);
                let mut texp = 0u32;
                let mut qt = 1u64;
                while qt < b as u64 {
                    qt *= q;
                    texp += 1;
                }
                let expect = poly::mul(&t.base, &og, &x_pow(&t.base, texp));
                let got = linearized::fq_order_poly_krylov(&t.base, &f).unwrap();
                if got != expect {
                    return Outcome::Fail(format!(
                        "g = {g}, b = {b}: Ord(g^b) = {got}, expected Ord(g) x^{texp} = {expect}"
                    ));
                }
            }
        }
    }
    Outcome::Pass
}

fn c_lcm_rule(t: &Tables, seed: u64) -> Outcome {
    let mut ords: BTreeMap<Poly, Poly> = BTreeMap::new();
    let mut check = |f1: &Poly, f2: &Poly| -> Option<String> {
        if !poly::gcd(&t.base, f1, f2).is_one() {
            return None;
        }
        let o1 = ords
            .entry(f1.clone())
            .or_insert_with(|| linearized::fq_order_poly_krylov(&t.base, f1).unwrap())
            .clone();
        let o2 = ords
            .entry(f2.clone())
            .or_insert_with(|| linearized::fq_order_poly_krylov(&t.base, f2).unwrap())
            .clone();
        let expect = poly::lcm(&t.base, &o1, &o2);
        let got =
            linearized::fq_order_poly_krylov(&t.base, &poly::mul(&t.base, f1, f2)).unwrap();
        (got != expect).then(|| {
            format!("f1 = {f1}, f2 = {f2}: Ord(f1 f2) = {got}, expected lcm({o1}, {o2}) = {expect}")
        })
    };
    let mut polys = Vec::new();
    for d in enum_degs(t.base.q(), 2, 64) {
        polys.extend(poly::monic_polys(&t.base, d as usize, false).unwrap());
    }
    for f1 in &polys {
        for f2 in &polys {
            if let Some(w) = check(f1, f2) {
                return Outcome::Fail(w);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..40 {
        let f1 = random_monic(&t.base, 1 + (rng.next_u64() % 3) as usize, &mut rng);
        let f2 = random_monic(&t.base, 1 + (rng.next_u64() % 3) as usize, &mut rng);
        if let Some(w) = check(&f1, &f2) {
            return Outcome::Fail(w);
        }
    }
    Outcome::Pass
}

fn c_normal_poly_charac(t: &Tables, _seed: u64) -> Outcome {
    let xn1 = t.ext.x_pow_minus_one();
    for f in poly::enumerate_monic(&t.base, t.cell.n as usize).unwrap() {
        let route_order = linearized::fq_order_poly_krylov(&t.base, &f).unwrap() == xn1;
        let route_roots = match t.min_polys.get(&f) {
            Some(ids) => ids.iter().all(|&i| t.fq_id[i as usize] == t.full_id),
            None => false,
        };
        if route_order != route_roots {
            return Outcome::Fail(format!(
                "f = {f}: Ord(f) = x^n - 1 is {route_order}, but f being the minimal polynomial of a normal element is {route_roots}"
            ));
        }
    }
    Outcome::Pass
}

fn c_degmin_lemma(t: &Tables, _seed: u64) -> Outcome {
    for i in 0..t.size as usize {
        let expect = t.div_ordn[t.fq_id[i] as usize];
        if t.orbit_deg[i] as u64 != expect {
            return Outcome::Fail(format!(
                "a = {}: minimal polynomial degree {}, but ord of Ord(a) = {} is {expect}",
                t.elem_str(i),
                t.orbit_deg[i],
                t.divisors[t.fq_id[i] as usize]
            ));
        }
    }
    Outcome::Pass
}

fn c_irr_count_by_ord(t: &Tables, _seed: u64) -> Outcome {
    let mut brute = vec![0u64; t.divisors.len()];
    for (f, ids) in &t.min_polys {
        if f.degree() == Some(t.cell.n as usize) {
            brute[t.fq_id[ids[0] as usize] as usize] += 1;
        }
    }
    for (hid, h) in t.divisors.iter().enumerate() {
        let lib = classify::count_irreducibles_with_ord(&t.base, t.cell.n, h).unwrap();
        if lib != brute[hid] {
            return Outcome::Fail(format!(
                "Ord = {h}: formula count {lib}, enumerated {}",
                brute[hid]
            ));
        }
    }
    Outcome::Pass
}

fn k_normal_poly_brute(t: &Tables) -> Vec<u64> {
    let mut brute = vec![0u64; t.cell.n as usize + 1];
    for (f, ids) in &t.min_polys {
        if f.degree() == Some(t.cell.n as usize) {
            let k = t.cell.n - t.div_deg[t.fq_id[ids[0] as usize] as usize];
            brute[k as usize] += 1;
        }
    }
    brute
}

fn c_k_normal_poly_count_ordn(t: &Tables, _seed: u64) -> Outcome {
    let brute = k_normal_poly_brute(t);
    for k in 0..=t.cell.n {
        let lib = classify::count_k_normal_polys(&t.base, t.cell.n, k).unwrap();
        if lib != brute[k as usize] {
            return Outcome::Fail(format!(
                "k = {k}: formula count {lib}, enumerated {}",
                brute[k as usize]
            ));
        }
    }
    Outcome::Pass
}

fn c_k_normal_poly_count_as_printed(t: &Tables, _seed: u64) -> Outcome {
    let brute = k_normal_poly_brute(t);
    let n = t.cell.n;
    for k in 0..=n {
        let mut printed = 0u64;
        for hid in 0..t.divisors.len() {
            if t.div_deg[hid] == n - k && t.div_phi[hid] % n as u64 == 0 {
                printed += t.div_phi[hid] / n as u64;
            }
        }
        if printed != brute[k as usize] {
            return Outcome::Fail(format!(
                "k = {k}: printed count {printed}, actual {}",
                brute[k as usize]
            ));
        }
    }
    Outcome::Pass
}

fn c_affine_annihilator_theorem(t: &Tables, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut polys = Vec::new();
    for d in enum_degs(t.base.q(), 3, 128) {
        polys.extend(poly::monic_polys(&t.base, d as usize, false).unwrap());
    }
    for _ in 0..20 {
        polys.push(random_monic(&t.base, 1 + (rng.next_u64() % 4) as usize, &mut rng));
    }
    let scalars: Vec<_> = if t.base.q() <= 128 {
        t.base.elems().collect()
    } else {
        let mut s = vec![t.base.zero(), t.base.one()];
        s.extend((0..62).map(|_| t.base.elem_from_index(rng.next_u64() % t.base.q())));
        s
    };
    for f in &polys {
        let ord_f = linearized::fq_order_poly_krylov(&t.base, f).unwrap();
        for a in &scalars {
            let res = linearized::least_affine_annihilator(&t.base, f, a).unwrap();
            match res.h {
                Some(h) => {
                    let ord_a = if a.is_zero() {
                        Poly::one(&t.base)
                    } else {
                        poly::x_pow_minus_one(&t.base, 1)
                    };
                    let recon = poly::mul(&t.base, &ord_a, &h);
                    if recon != ord_f {
                        return Outcome::Fail(format!(
                            "f = {f}, a = {a}: Ord(a) h = {recon}, but Ord(f) = {ord_f}"
                        ));
                    }
                }
                None => {
                    if a.is_zero() {
                        return Outcome::Fail(format!(
                            "f = {f}: no annihilator found for a = 0, expected h = Ord(f)"
                        ));
                    }
                }
            }
        }
    }
    Outcome::Pass
}

fn c_trace_zero_lemma(t: &Tables, _seed: u64) -> Outcome {
    for i in 0..t.size as usize {
        if !t.div_has_x1[t.fq_id[i] as usize] && !t.trace_zero[i] {
            return Outcome::Fail(format!(
                "a = {}: Ord(a) = {} is not divisible by x - 1 but the trace is nonzero",
                t.elem_str(i),
                t.divisors[t.fq_id[i] as usize]
            ));
        }
    }
    Outcome::Pass
}

fn c_phi_sum_trace(t: &Tables, _seed: u64) -> Outcome {
    if !t.base.is_prime_field() || num::gcd(t.cell.n as u64, t.cell.p) != 1 {
        return Outcome::Skip;
    }
    let mut phi_sum = 0u64;
    for hid in 0..t.divisors.len() {
        if !t.div_has_x1[hid] {
            phi_sum += t.div_phi[hid];
        }
    }
    let expect = t.cell.p.pow(t.cell.n - 1);
    if phi_sum != expect {
        return Outcome::Fail(format!(
            "Phi-sum over divisors avoiding x - 1 is {phi_sum}, expected p^(n-1) = {expect}"
        ));
    }
    Outcome::Pass
}

fn c_paper_example_f5(t: &Tables, _seed: u64) -> Outcome {
    if (t.cell.p, t.cell.m, t.cell.n) != (5, 1, 2) {
        return Outcome::Skip;
    }
    let f = Poly::from_coeffs(vec![t.base.one(), t.base.one()]);
    let expect = Poly::from_coeffs(vec![t.base.scalar(4), t.base.one()]);
    let got = linearized::fq_order_poly_krylov(&t.base, &f).unwrap();
    if got != expect {
        return Outcome::Fail(format!("Ord(x+1) = {got}, expected x+4"));
    }
    let aff = linearized::least_affine_annihilator(&t.base, &f, &t.base.one()).unwrap();
    if aff.h != Some(Poly::one(&t.base)) {
        return Outcome::Fail(format!(
            "least affine annihilator of x+1 at a = 1 is {:?}, expected 1",
            aff.h.map(|h| h.to_string())
        ));
    }
    let four = t.ext.scalar(&t.base.scalar(4));
    let ord4 = &t.divisors[t.fq_id[t.idx(&four)] as usize];
    if *ord4 != expect {
        return Outcome::Fail(format!("Ord(4) = {ord4}, expected x+4"));
    }
    Outcome::Pass
}

static REGISTRY: &[CheckDef] = &[
    CheckDef {
        info: CheckInfo {
            name: "ord_fiber_counts",
            statement: "For each divisor d of q^n-1 exactly phi(d) elements have multiplicative order d, and for each monic divisor h of x^n-1 exactly Phi(h) elements have F_q-Order h; the fibers sum to q^n-1 and q^n.",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_ord_fiber_counts,
    },
    CheckDef {
        info: CheckInfo {
            name: "th1_partition",
            statement: "For every divisor r of q^n-1 the set B of r-th powers of nonzero elements is exactly the disjoint union of the fibers A_t = {a : ord(a) = (q^n-1)/t} over multiples t of r dividing q^n-1, with |A_t| = phi((q^n-1)/t).",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_th1_partition,
    },
    CheckDef {
        info: CheckInfo {
            name: "b_cardinality",
            statement: "For every divisor r of q^n-1 the set of r-th powers of nonzero elements has exactly (q^n-1)/r members, matching the phi-sum over divisors of (q^n-1)/r.",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_b_cardinality,
    },
    CheckDef {
        info: CheckInfo {
            name: "fq_partition_proof_version",
            statement: "For every monic divisor f of x^n-1 the image of L_f on the whole field is exactly the disjoint union of the fibers A_g = {a : Ord(a) = (x^n-1)/g} over multiples g of f dividing x^n-1, has q^(n - deg f) members, and the Phi-sum over divisors of f is q^(deg f).",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_fq_partition_proof_version,
    },
    CheckDef {
        info: CheckInfo {
            name: "fq_partition_statement_version",
            statement: "As printed: B = {nonzero a : f divides Ord(a)} equals the union of the fibers A_g over multiples g of f. The printed B collects multiples of f as Orders; the fiber union collects Orders dividing (x^n-1)/f, so the two sides differ in general.",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: true,
        },
        needs_enum: true,
        run: c_fq_partition_statement_version,
    },
    CheckDef {
        info: CheckInfo {
            name: "image_cardinality",
            statement: "The image of L_f on F_{q^n} has exactly q^(n - deg f) elements for every monic divisor f of x^n-1.",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_image_cardinality,
    },
    CheckDef {
        info: CheckInfo {
            name: "kernel_formula_as_printed",
            statement: "As printed: the kernel of L_f has sum over monic divisors h of f of Phi(h) q^(deg f - deg h) elements. The kernel actually has q^(deg f) elements, which the printed sum overcounts.",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: true,
        },
        needs_enum: true,
        run: c_kernel_formula_as_printed,
    },
    CheckDef {
        info: CheckInfo {
            name: "phi_divisor_identity",
            statement: "The sum of Phi(g) over the monic divisors g of f equals q^(deg f) for every monic divisor f of x^n-1.",
            hypothesis: "every cell",
            expected_fail: false,
        },
        needs_enum: false,
        run: c_phi_divisor_identity,
    },
    CheckDef {
        info: CheckInfo {
            name: "m_free_count",
            statement: "The number of m-free elements of F_{q^n} is phi(m)(q^n-1)/m for every divisor m of q^n-1, agreeing with the divisor-sum expression and the exhaustive sweep.",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_m_free_count,
    },
    CheckDef {
        info: CheckInfo {
            name: "g_free_count",
            statement: "The number of g-free elements of F_{q^n} is Phi(g) q^(n - deg g) for every monic divisor g of x^n-1, agreeing with the divisor-sum expression and the exhaustive sweep.",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_g_free_count,
    },
    CheckDef {
        info: CheckInfo {
            name: "product_rule",
            statement: "If gcd(ord(a), ord(b)) = 1 with a r1-primitive and b r2-primitive, then ab is gcd(r1, r2)-primitive.",
            hypothesis: "q^n within the enumeration bound; pairs sampled above the tuple budget",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_product_rule,
    },
    CheckDef {
        info: CheckInfo {
            name: "sum_rule",
            statement: "If gcd(Ord(a), Ord(b)) = 1 then Ord(a+b) = Ord(a) Ord(b); equivalently a k1-normal and b k2-normal element with coprime Orders sum to a (k1 + k2 - n)-normal element.",
            hypothesis: "q^n within the enumeration bound; pairs sampled above the tuple budget",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_sum_rule,
    },
    CheckDef {
        info: CheckInfo {
            name: "sum_rule_multiterm",
            statement: "For elements with pairwise coprime F_q-Orders, the Order of the sum is the lcm (here the product) of the Orders.",
            hypothesis: "q^n within the enumeration bound; triples sampled above the tuple budget",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_sum_rule_multiterm,
    },
    CheckDef {
        info: CheckInfo {
            name: "inverse_n_minus_1",
            statement: "The inverse of an (n-1)-normal element is (n-1)-normal.",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_inverse_n_minus_1,
    },
    CheckDef {
        info: CheckInfo {
            name: "inverse_quadratic",
            statement: "In a quadratic extension the normality index of every nonzero element is preserved by inversion.",
            hypothesis: "n = 2",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_inverse_quadratic,
    },
    CheckDef {
        info: CheckInfo {
            name: "embed_r",
            statement: "Under the embedding of F_{q^d} into F_{q^n} for d | n, an r-primitive element maps to an r(q^n-1)/(q^d-1)-primitive element.",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_embed_r,
    },
    CheckDef {
        info: CheckInfo {
            name: "embed_k",
            statement: "Under the embedding of F_{q^d} into F_{q^n} for d | n, a k-normal element maps to an (n - d + k)-normal element.",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_embed_k,
    },
    CheckDef {
        info: CheckInfo {
            name: "ord_root_equality",
            statement: "The F_q-Order of a monic irreducible polynomial equals the common F_q-Order of its roots.",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_ord_root_equality,
    },
    CheckDef {
        info: CheckInfo {
            name: "ord_divides_xm1",
            statement: "The F_q-Order of a monic irreducible polynomial of degree d divides x^d - 1.",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_ord_divides_xm1,
    },
    CheckDef {
        info: CheckInfo {
            name: "ord_divisibility_law",
            statement: "A polynomial f with f(0) != 0 divides the q-associate L_g exactly when Ord(f) divides g.",
            hypothesis: "every cell; enumerated for small degrees, sampled beyond",
            expected_fail: false,
        },
        needs_enum: false,
        run: c_ord_divisibility_law,
    },
    CheckDef {
        info: CheckInfo {
            name: "gcd_associate",
            statement: "gcd(L_h, L_g) = L_gcd(h, g) for non-constant h and g.",
            hypothesis: "q <= 4, so the associates stay materializable",
            expected_fail: false,
        },
        needs_enum: false,
        run: c_gcd_associate,
    },
    CheckDef {
        info: CheckInfo {
            name: "power_rule",
            statement: "For irreducible g and f = g^b, Ord(f) = Ord(g) x^t with t minimal such that q^t >= b; the field size q governs the exponent, not merely the characteristic, because the q-associate of x h is the q-th power of the associate of h.",
            hypothesis: "every cell; irreducibles enumerated for small degrees",
            expected_fail: false,
        },
        needs_enum: false,
        run: c_power_rule,
    },
    CheckDef {
        info: CheckInfo {
            name: "lcm_rule",
            statement: "For pairwise coprime polynomials, the Ord of the product is the lcm of the Ords.",
            hypothesis: "every cell; enumerated for small degrees, sampled beyond",
            expected_fail: false,
        },
        needs_enum: false,
        run: c_lcm_rule,
    },
    CheckDef {
        info: CheckInfo {
            name: "normal_poly_charac",
            statement: "A monic polynomial of degree n is the minimal polynomial of a normal element exactly when its F_q-Order is x^n - 1 (forcing irreducibility).",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_normal_poly_charac,
    },
    CheckDef {
        info: CheckInfo {
            name: "degmin_lemma",
            statement: "The degree of the minimal polynomial of an element equals the multiplicative order of x modulo its F_q-Order, i.e. the least r with Ord(a) dividing x^r - 1.",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_degmin_lemma,
    },
    CheckDef {
        info: CheckInfo {
            name: "irr_count_by_ord",
            statement: "The number of monic irreducibles of degree n with F_q-Order f is Phi(f)/n when ord(f) = n, and 0 otherwise.",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_irr_count_by_ord,
    },
    CheckDef {
        info: CheckInfo {
            name: "k_normal_poly_count_ordn",
            statement: "The number of monic k-normal polynomials of degree n is the sum of Phi(h)/n over monic divisors h of x^n-1 of degree n-k whose multiplicative order is exactly n.",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_k_normal_poly_count_ordn,
    },
    CheckDef {
        info: CheckInfo {
            name: "k_normal_poly_count_as_printed",
            statement: "As printed: the k-normal polynomial count sums Phi(h)/n over divisors of degree n-k subject only to n dividing Phi(h). The correct side condition is ord(h) = n; the printed one admits divisors of smaller order and overcounts.",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: true,
        },
        needs_enum: true,
        run: c_k_normal_poly_count_as_printed,
    },
    CheckDef {
        info: CheckInfo {
            name: "affine_annihilator_theorem",
            statement: "If h is the least-degree monic polynomial with f dividing L_h - a for a scalar a, then Ord(f) = Ord(a) h, where Ord(a) is x-1 for nonzero a and 1 for a = 0.",
            hypothesis: "every cell; f enumerated for small degrees plus random draws, scalars exhaustive for q <= 128 and sampled beyond",
            expected_fail: false,
        },
        needs_enum: false,
        run: c_affine_annihilator_theorem,
    },
    CheckDef {
        info: CheckInfo {
            name: "trace_zero_lemma",
            statement: "Every element whose F_q-Order is not divisible by x - 1 has trace 0.",
            hypothesis: "q^n within the enumeration bound",
            expected_fail: false,
        },
        needs_enum: true,
        run: c_trace_zero_lemma,
    },
    CheckDef {
        info: CheckInfo {
            name: "phi_sum_trace",
            statement: "The sum of Phi(F) over monic divisors F of x^n-1 not divisible by x - 1 equals p^(n-1).",
            hypothesis: "q = p and gcd(n, p) = 1",
            expected_fail: false,
        },
        needs_enum: false,
        run: c_phi_sum_trace,
    },
    CheckDef {
        info: CheckInfo {
            name: "paper_example_f5",
            statement: "Worked example in F_25 over F_5: Ord(x+1) = x+4; the least affine annihilator of x+1 at a = 1 is h = 1 with (x-1) h = x+4; the element 4 has F_q-Order x+4.",
            hypothesis: "cell (5,1,2)",
            expected_fail: false,
        },
        needs_enum: false,
        run: c_paper_example_f5,
    },
];

/// All registered checks in registry order.
pub fn check_infos() -> Vec<CheckInfo> {
    REGISTRY.iter().map(|d| d.info).collect()
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "opaque panic payload".to_string()
    }
}

pub fn run_checks(grid: &GridSpec, names: Option<&[String]>, seed: u64) -> Result<VerifyOutcome> {
    run_checks_cells(&grid.cells()?, names, seed)
}

pub fn run_checks_cells(
    cells: &[Cell],
    names: Option<&[String]>,
    seed: u64,
) -> Result<VerifyOutcome> {
    let selected: Vec<&CheckDef> = match names {
        None => REGISTRY.iter().collect(),
        Some(ns) => {
            for n in ns {
                if !REGISTRY.iter().any(|d| d.info.name == n.as_str()) {
                    return Err(Error::UnknownCheck(n.clone()));
                }
            }
            REGISTRY.iter().filter(|d| ns.iter().any(|n| n == d.info.name)).collect()
        }
    };
    let mut reports = Vec::new();
    for cell in cells {
        let tables = Tables::build(cell)?;
        for def in &selected {
            let started = Instant::now();
            let outcome = if def.needs_enum && !tables.enumerable {
                Outcome::Skip
            } else {
                let sub = sub_seed(seed, cell, def.info.name);
                match catch_unwind(AssertUnwindSafe(|| (def.run)(&tables, sub))) {
                    Ok(o) => o,
                    Err(payload) => {
                        Outcome::Fail(format!("invariant panic: {}", panic_message(payload)))
                    }
                }
            };
            let (status, witness) = match outcome {
                Outcome::Pass => (Status::Pass, None),
                Outcome::Skip => (Status::SkippedHypothesis, None),
                Outcome::Fail(w) => (
                    Status::Fail,
                    Some(format!(
                        "{w}; repro: fqord verify --cell {},{},{} --names {} --seed {seed}",
                        cell.p, cell.m, cell.n, def.info.name
                    )),
                ),
            };
            reports.push(CheckReport {
                check: def.info.name.to_string(),
                p: cell.p,
                m: cell.m,
                n: cell.n,
                extras: String::new(),
                status,
                expected_fail: def.info.expected_fail,
                witness,
                elapsed_ms: started.elapsed().as_millis() as u64,
            });
        }
    }
    reports.sort_by(|a, b| {
        (a.check.as_str(), a.p, a.m, a.n, a.extras.as_str())
            .cmp(&(b.check.as_str(), b.p, b.m, b.n, b.extras.as_str()))
    });
    let summary = Summary::from_reports(&reports);
    Ok(VerifyOutcome { reports, summary })
}
