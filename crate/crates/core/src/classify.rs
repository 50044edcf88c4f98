//! Classification of extension elements: r-primitivity, k-normality,
//! m-freeness, g-freeness, the associated counts and partitions, the
//! product/sum/inverse rules relating them, and subfield embeddings.
//!
//! Conventions. Multiplicative notions (r-primitive, m-free) are properties
//! of nonzero elements; the zero element is never r-primitive or m-free.
//! Additive notions (k-normal, g-free) are properties of the whole field:
//! zero is n-normal, and zero is g-free exactly for g = 1. An element is
//! m-free when the only divisor d of m admitting a d-th root of it is 1,
//! equivalently gcd(m, (q^n - 1) / ord(a)) = 1; it is g-free when the only
//! monic divisor d of g with a = L_d(b) solvable is 1, equivalently
//! gcd(g, (x^n - 1) / Ord(a)) = 1.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;

use crate::error::{Error, Result};
use crate::ext::{ExtCtx, ExtElem};
use crate::field::{FqCtx, FqElem};
use crate::linearized::{self, fq_order_element, fq_order_element_strip};
use crate::num;
use crate::poly::{self, Poly};
use crate::text;

/// Everything the library can say about one element at a glance.
#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub element: ExtElem,
    /// None for the zero element.
    pub mult_ord: Option<u64>,
    /// The unique r with ord(a) = (q^n - 1) / r; None for zero.
    pub r: Option<u64>,
    pub is_primitive: bool,
    pub fq_order: Poly,
    /// n - deg Ord(a); zero is n-normal.
    pub k: u32,
    pub is_normal: bool,
    pub min_poly: Poly,
    pub trace: FqElem,
    pub norm: FqElem,
}

impl ClassificationReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "element": self.element.residue().to_string(),
            "ord": self.mult_ord,
            "r": self.r,
            "is_primitive": self.is_primitive,
            "fq_order": text::render_poly(&self.fq_order, 'x'),
            "k": self.k,
            "is_normal": self.is_normal,
            "min_poly": text::render_poly(&self.min_poly, 'x'),
            "trace": self.trace.to_string(),
            "norm": self.norm.to_string(),
        })
    }
}

pub fn classify(ctx: &ExtCtx, a: &ExtElem) -> ClassificationReport {
    let e = ctx.group_order();
    let mult_ord = ctx.mult_ord(a).ok();
    let r = mult_ord.map(|o| e / o);
    let fq_order = fq_order_element(ctx, a).order;
    let k = ctx.n() - fq_order.degree().unwrap_or(0) as u32;
    ClassificationReport {
        element: a.clone(),
        mult_ord,
        r,
        is_primitive: r == Some(1),
        is_normal: k == 0,
        k,
        min_poly: ctx.min_poly(a),
        trace: ctx.trace(a),
        norm: ctx.norm(a),
        fq_order,
    }
}

/// n minus the degree of the F_q-Order; 0 for normal elements, n for zero.
pub fn normality_index(ctx: &ExtCtx, a: &ExtElem) -> u32 {
    ctx.n() - fq_order_element(ctx, a).order.degree().unwrap_or(0) as u32
}

pub fn is_k_normal(ctx: &ExtCtx, a: &ExtElem, k: u32) -> Result<bool> {
    if k > ctx.n() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} exceeds the extension degree {}",
            ctx.n()
        )));
    }
    Ok(normality_index(ctx, a) == k)
}

pub fn is_r_primitive(ctx: &ExtCtx, a: &ExtElem, r: u64) -> Result<bool> {
    let e = ctx.group_order();
    if r == 0 || e % r != 0 {
        return Err(Error::HypothesisViolated(format!(
            "r = {r} does not divide the group order {e}"
        )));
    }
    match ctx.mult_ord(a) {
        Ok(o) => Ok(o == e / r),
        Err(_) => Ok(false),
    }
}

fn require_m_divides(e: u64, m: u64) -> Result<()> {
    if m == 0 || e % m != 0 {
        return Err(Error::HypothesisViolated(format!(
            "m = {m} does not divide the group order {e}"
        )));
    }
    Ok(())
}

fn require_g_divides(base: &FqCtx, n: u32, g: &Poly) -> Result<Poly> {
    let g = poly::monic(base, g);
    if g.is_zero() || !poly::divides(base, &g, &poly::x_pow_minus_one(base, n)) {
        return Err(Error::HypothesisViolated(format!(
            "{} does not divide x^{n}-1",
            text::render_poly(&g, 'x')
        )));
    }
    Ok(g)
}

/// m-free via the gcd characterization. Zero is never m-free.
pub fn is_m_free(ctx: &ExtCtx, a: &ExtElem, m: u64) -> Result<bool> {
    require_m_divides(ctx.group_order(), m)?;
    match ctx.mult_ord(a) {
        Ok(o) => Ok(num::gcd(m, ctx.group_order() / o) == 1),
        Err(_) => Ok(false),
    }
}

/// m-free by the definition: no divisor d of m with d > 1 admits a d-th
/// root of a. Enumerates the d-th power sets, so only for small fields.
pub fn is_m_free_literal(ctx: &ExtCtx, a: &ExtElem, m: u64) -> Result<bool> {
    require_m_divides(ctx.group_order(), m)?;
    if a.is_zero() {
        return Ok(false);
    }
    for d in num::divisors(m) {
        if d == 1 {
            continue;
        }
        let mut powers = BTreeSet::new();
        for b in ctx.elems()? {
            if !b.is_zero() {
                powers.insert(ctx.pow(&b, d));
            }
        }
        if powers.contains(a) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// g-free via the gcd characterization. Zero is g-free only for g = 1.
pub fn is_g_free(ctx: &ExtCtx, a: &ExtElem, g: &Poly) -> Result<bool> {
    let g = require_g_divides(ctx.base(), ctx.n(), g)?;
    let ord = fq_order_element_strip(ctx, a);
    let (co, r) = poly::divmod(ctx.base(), &ctx.x_pow_minus_one(), &ord).expect("Ord divides");
    debug_assert!(r.is_zero());
    Ok(poly::gcd(ctx.base(), &g, &co).is_one())
}

/// g-free by the definition: no monic divisor d of g with deg d >= 1 puts
/// a in the image of L_d. Enumerates images, so only for small fields.
pub fn is_g_free_literal(ctx: &ExtCtx, a: &ExtElem, g: &Poly) -> Result<bool> {
    let g = require_g_divides(ctx.base(), ctx.n(), g)?;
    let base = ctx.base();
    let gz = poly::factor_poly(base, &g, 0)?;
    for d in poly::monic_divisors(base, &gz)? {
        if d.degree() == Some(0) {
            continue;
        }
        let image: BTreeSet<ExtElem> =
            linearized::kernel_image(ctx, &d)?.image.into_iter().collect();
        if image.contains(a) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn counting_bound(base: &FqCtx, n: u32) -> Result<u64> {
    num::bounded_pow(base.q(), n, num::MAX_COUNT, "field size q^n for counting")
}

/// Number of m-free elements of F_{q^n}: phi(m) (q^n - 1) / m.
/// Cross-checked exhaustively on fields with at most 1024 elements.
pub fn count_m_free(base: &FqCtx, n: u32, m: u64) -> Result<u64> {
    let size = counting_bound(base, n)?;
    let e = size - 1;
    require_m_divides(e, m)?;
    let total = num::phi(m)
        .checked_mul(e / m)
        .ok_or_else(|| Error::Overflow("m-free count".into()))?;
    if size <= 1024 {
        let ctx = ExtCtx::new(base.clone(), n, None)?;
        let mut seen = 0u64;
        for a in ctx.elems()? {
            if is_m_free(&ctx, &a, m)? {
                seen += 1;
            }
        }
        assert_eq!(total, seen, "m-free count disagrees with the exhaustive sweep");
    }
    Ok(total)
}

/// Number of g-free elements of F_{q^n}: Phi_q(g) q^{n - deg g}.
/// Cross-checked exhaustively on fields with at most 1024 elements.
pub fn count_g_free(base: &FqCtx, n: u32, g: &Poly) -> Result<u64> {
    let size = counting_bound(base, n)?;
    let g = require_g_divides(base, n, &poly::monic(base, g))?;
    let cof = num::bounded_pow(
        base.q(),
        n - g.degree().unwrap() as u32,
        num::MAX_COUNT,
        "q^{n - deg g}",
    )?;
    let total = poly::poly_phi(base, &g)?
        .checked_mul(cof)
        .ok_or_else(|| Error::Overflow("g-free count".into()))?;
    if size <= 1024 {
        let ctx = ExtCtx::new(base.clone(), n, None)?;
        let mut seen = 0u64;
        for a in ctx.elems()? {
            if is_g_free(&ctx, &a, &g)? {
                seen += 1;
            }
        }
        assert_eq!(total, seen, "g-free count disagrees with the exhaustive sweep");
    }
    Ok(total)
}

/// Number of k-normal elements of F_{q^n}: sum of Phi_q(h) over monic
/// divisors h of x^n - 1 with deg h = n - k.
pub fn count_k_normal_elements(base: &FqCtx, n: u32, k: u32) -> Result<u64> {
    counting_bound(base, n)?;
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds the extension degree {n}")));
    }
    let xn1 = poly::x_pow_minus_one(base, n);
    let fz = poly::factor_poly(base, &xn1, 0)?;
    let mut total = 0u64;
    for h in poly::monic_divisors(base, &fz)? {
        if h.degree() == Some((n - k) as usize) {
            total = total
                .checked_add(poly::poly_phi(base, &h)?)
                .ok_or_else(|| Error::Overflow("k-normal element count".into()))?;
        }
    }
    Ok(total)
}

/// Number of monic irreducible polynomials of degree n over F_q whose
/// F_q-Order equals f: Phi_q(f)/n when the multiplicative order of f is
/// exactly n, and 0 otherwise (each qualifying polynomial contributes its
/// n roots, all of F_q-Order f, and no element of Order f lies in a
/// proper subfield when ord(f) = n).
pub fn count_irreducibles_with_ord(base: &FqCtx, n: u32, f: &Poly) -> Result<u64> {
    counting_bound(base, n)?;
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    if f.is_zero() {
        return Err(Error::InvalidArgument("the zero polynomial is never an F_q-Order".into()));
    }
    let f = poly::monic(base, f);
    if !f.is_one() && f.coeffs()[0].is_zero() {
        // Orders divide x^n - 1, so x never divides one
        return Ok(0);
    }
    if !poly::divides(base, &f, &poly::x_pow_minus_one(base, n)) {
        return Ok(0);
    }
    if poly::ord_poly(base, &f)? != n as u64 {
        return Ok(0);
    }
    let phi = poly::poly_phi(base, &f)?;
    debug_assert_eq!(phi % n as u64, 0);
    Ok(phi / n as u64)
}

/// Number of monic k-normal polynomials of degree n over F_q, i.e. monic
/// irreducibles of degree n whose roots are k-normal: sum of Phi_q(h)/n
/// over monic divisors h of x^n - 1 with deg h = n - k and multiplicative
/// order exactly n.
pub fn count_k_normal_polys(base: &FqCtx, n: u32, k: u32) -> Result<u64> {
    counting_bound(base, n)?;
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds the extension degree {n}")));
    }
    let xn1 = poly::x_pow_minus_one(base, n);
    let fz = poly::factor_poly(base, &xn1, 0)?;
    let mut total = 0u64;
    for h in poly::monic_divisors(base, &fz)? {
        if h.degree() != Some((n - k) as usize) {
            continue;
        }
        total += count_irreducibles_with_ord(base, n, &h)?;
    }
    Ok(total)
}

/// Enumerates the monic k-normal polynomials of degree n (enumeration cap
/// applies). Each is a monic irreducible of degree n whose F_q-Order has
/// degree n - k.
pub fn enumerate_k_normal_polys(base: &FqCtx, n: u32, k: u32) -> Result<Vec<Poly>> {
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds the extension degree {n}")));
    }
    let mut out = Vec::new();
    for f in poly::enumerate_monic(base, n as usize)? {
        if poly::is_irreducible(base, &f)
            && linearized::fq_order_poly(base, &f)?.order.degree() == Some((n - k) as usize)
        {
            out.push(f);
        }
    }
    let expect = count_k_normal_polys(base, n, k)?;
    assert_eq!(out.len() as u64, expect, "k-normal enumeration disagrees with the count");
    Ok(out)
}

/// The r-th powers B = {b^r : b nonzero}, partitioned into the order
/// fibers A_t = {a : ord(a) = (q^n - 1)/t} over the multiples t of r
/// dividing q^n - 1. Asserts that the fibers are disjoint, exhaust B,
/// have sizes phi((q^n - 1)/t), and that |B| = (q^n - 1)/r.
#[derive(Debug, Clone)]
pub struct RthPowerPartition {
    pub b: Vec<ExtElem>,
    /// Pairs (t, A_t) in increasing order of t.
    pub parts: Vec<(u64, Vec<ExtElem>)>,
}

pub fn rth_power_partition(ctx: &ExtCtx, r: u64) -> Result<RthPowerPartition> {
    let e = ctx.group_order();
    if r == 0 || e % r != 0 {
        return Err(Error::HypothesisViolated(format!(
            "r = {r} does not divide the group order {e}"
        )));
    }
    let mut b = BTreeSet::new();
    let mut by_ord: BTreeMap<u64, Vec<ExtElem>> = BTreeMap::new();
    for a in ctx.elems()? {
        if a.is_zero() {
            continue;
        }
        b.insert(ctx.pow(&a, r));
        by_ord.entry(ctx.mult_ord(&a)?).or_default().push(a);
    }
    assert_eq!(b.len() as u64, e / r, "|B| differs from (q^n-1)/r");
    let mut parts = Vec::new();
    let mut union = BTreeSet::new();
    let mut phi_total = 0u64;
    for t in num::divisors(e) {
        if t % r != 0 {
            continue;
        }
        let fiber = by_ord.remove(&(e / t)).unwrap_or_default();
        assert_eq!(fiber.len() as u64, num::phi(e / t), "|A_t| differs from phi((q^n-1)/t)");
        phi_total += fiber.len() as u64;
        for a in &fiber {
            assert!(union.insert(a.clone()), "order fibers are not disjoint");
        }
        parts.push((t, fiber));
    }
    assert_eq!(union, b, "B is not the union of the A_t");
    assert_eq!(phi_total, e / r, "phi sum differs from (q^n-1)/r");
    Ok(RthPowerPartition { b: b.into_iter().collect(), parts })
}

/// The image B of L_f on the whole field, partitioned into the F_q-Order
/// fibers A_g = {a : Ord(a) = (x^n - 1)/g} over the multiples g of f
/// dividing x^n - 1 (zero lies in the g = x^n - 1 fiber). Asserts the
/// disjoint-union equality, |B| = q^{n - deg f}, and the divisor identity
/// sum over g | f of Phi_q(g) = q^{deg f}.
#[derive(Debug, Clone)]
pub struct FqOrderPartition {
    pub b: Vec<ExtElem>,
    /// Pairs (g, A_g) in canonical order of g.
    pub parts: Vec<(Poly, Vec<ExtElem>)>,
}

pub fn fq_order_partition(ctx: &ExtCtx, f: &Poly) -> Result<FqOrderPartition> {
    let base = ctx.base();
    let f = require_g_divides(base, ctx.n(), f)?;
    let xn1 = ctx.x_pow_minus_one();
    let b: BTreeSet<ExtElem> = linearized::kernel_image(ctx, &f)?.image.into_iter().collect();
    let mut by_ord: BTreeMap<Poly, Vec<ExtElem>> = BTreeMap::new();
    for a in ctx.elems()? {
        by_ord.entry(fq_order_element_strip(ctx, &a)).or_default().push(a);
    }
    let mut parts = Vec::new();
    let mut union = BTreeSet::new();
    let mut phi_over_divisors_of_f = 0u64;
    for g in poly::monic_divisors(base, ctx.xn1_factorization())? {
        if poly::divides(base, &g, &f) {
            phi_over_divisors_of_f += poly::poly_phi(base, &g)?;
        }
        if !poly::divides(base, &f, &g) {
            continue;
        }
        let (cof, rem) = poly::divmod(base, &xn1, &g)?;
        debug_assert!(rem.is_zero());
        let fiber = by_ord.remove(&cof).unwrap_or_default();
        for a in &fiber {
            assert!(union.insert(a.clone()), "Order fibers are not disjoint");
        }
        parts.push((g, fiber));
    }
    assert_eq!(union, b, "image of L_f is not the union of the A_g");
    let expect = num::bounded_pow(
        base.q(),
        ctx.n() - f.degree().unwrap() as u32,
        num::MAX_ENUM,
        "q^{n - deg f}",
    )?;
    assert_eq!(b.len() as u64, expect, "|B| differs from q^{{n - deg f}}");
    let qdf =
        num::bounded_pow(base.q(), f.degree().unwrap() as u32, num::MAX_COUNT, "q^{deg f}")?;
    assert_eq!(phi_over_divisors_of_f, qdf, "sum of Phi over divisors of f differs from q^{{deg f}}");
    Ok(FqOrderPartition { b: b.into_iter().collect(), parts })
}

/// Product rule for multiplicative orders: when gcd(ord(a), ord(b)) = 1,
/// the product ab is gcd(r_a, r_b)-primitive. Returns that gcd after
/// asserting it against the computed r-index of ab.
pub fn product_order_rule(ctx: &ExtCtx, a: &ExtElem, b: &ExtElem) -> Result<u64> {
    let e = ctx.group_order();
    let (oa, ob) = (ctx.mult_ord(a)?, ctx.mult_ord(b)?);
    if num::gcd(oa, ob) != 1 {
        return Err(Error::HypothesisViolated(format!(
            "gcd(ord(a), ord(b)) = gcd({oa}, {ob}) is not 1"
        )));
    }
    let (ra, rb) = (e / oa, e / ob);
    let expect = num::gcd(ra, rb);
    let oab = ctx.mult_ord(&ctx.mul(a, b))?;
    assert_eq!(e / oab, expect, "product r-index disagrees with gcd(r_a, r_b)");
    Ok(expect)
}

/// Sum rule for F_q-Orders: when gcd(Ord(a), Ord(b)) = 1, the sum a + b
/// has Order Ord(a) * Ord(b), and its normality index is k_a + k_b - n.
/// Returns the product after asserting both.
pub fn sum_order_rule(ctx: &ExtCtx, a: &ExtElem, b: &ExtElem) -> Result<Poly> {
    let base = ctx.base();
    let (fa, fb) = (fq_order_element_strip(ctx, a), fq_order_element_strip(ctx, b));
    if !poly::gcd(base, &fa, &fb).is_one() {
        return Err(Error::HypothesisViolated(format!(
            "gcd(Ord(a), Ord(b)) = gcd({fa}, {fb}) is not 1"
        )));
    }
    let expect = poly::mul(base, &fa, &fb);
    let sum_ord = fq_order_element_strip(ctx, &ctx.add(a, b));
    assert_eq!(sum_ord, expect, "Ord(a+b) disagrees with Ord(a)Ord(b)");
    let n = ctx.n() as usize;
    let (ka, kb) = (n - fa.degree().unwrap_or(0), n - fb.degree().unwrap_or(0));
    assert_eq!(
        n - sum_ord.degree().unwrap_or(0),
        ka + kb - n,
        "normality index of the sum disagrees with k_a + k_b - n"
    );
    Ok(expect)
}

/// Multi-term sum rule: for pairwise coprime Orders, the Order of the sum
/// is the lcm (equivalently the product) of the Orders.
pub fn sum_order_rule_multi(ctx: &ExtCtx, elems: &[ExtElem]) -> Result<Poly> {
    if elems.is_empty() {
        return Err(Error::InvalidArgument("empty sum".into()));
    }
    let base = ctx.base();
    let ords: Vec<Poly> = elems.iter().map(|a| fq_order_element_strip(ctx, a)).collect();
    for i in 0..ords.len() {
        for j in i + 1..ords.len() {
            if !poly::gcd(base, &ords[i], &ords[j]).is_one() {
                return Err(Error::HypothesisViolated(format!(
                    "Orders {} and {} are not coprime",
                    ords[i], ords[j]
                )));
            }
        }
    }
    let mut expect = Poly::one(base);
    let mut total = ctx.zero();
    for (a, o) in elems.iter().zip(&ords) {
        expect = poly::lcm(base, &expect, o);
        total = ctx.add(&total, a);
    }
    let got = fq_order_element_strip(ctx, &total);
    assert_eq!(got, expect, "Ord of the sum disagrees with the lcm of the Orders");
    Ok(expect)
}

/// Normality index of the inverse. Asserts the inverse rules: an
/// (n-1)-normal element always has an (n-1)-normal inverse, and in a
/// quadratic extension the index is preserved outright.
pub fn inverse_normality(ctx: &ExtCtx, a: &ExtElem) -> Result<u32> {
    let inv = ctx.inv(a)?;
    let k_inv = normality_index(ctx, &inv);
    let k = normality_index(ctx, a);
    if k == ctx.n() - 1 {
        assert_eq!(k_inv, k, "(n-1)-normality is not preserved by inversion");
    }
    if ctx.n() == 2 {
        assert_eq!(k_inv, k, "normality index not preserved by inversion in a quadratic extension");
    }
    Ok(k_inv)
}

/// Report of the trace identities: every element whose Order is not
/// divisible by x - 1 has trace zero (asserted during the sweep), and
/// the phi-sum over divisors of x^n - 1 avoiding the factor x - 1
/// equals p^{n-1} when q = p and gcd(n, p) = 1 (asserted exactly then).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceReport {
    pub elements_checked: u64,
    pub phi_sum: u64,
    /// p^{n-1}, present only under the hypothesis q = p, gcd(n, p) = 1.
    pub expected_phi_sum: Option<u64>,
}

pub fn trace_identities(ctx: &ExtCtx) -> Result<TraceReport> {
    let base = ctx.base();
    let x_minus_1 = poly::x_pow_minus_one(base, 1);
    let mut checked = 0u64;
    if ctx.size() <= num::MAX_ENUM {
        for a in ctx.elems()? {
            let ord = fq_order_element_strip(ctx, &a);
            if !poly::divides(base, &x_minus_1, &ord) {
                assert!(
                    ctx.trace(&a).is_zero(),
                    "element with Order coprime to x-1 has nonzero trace"
                );
                checked += 1;
            }
        }
    }
    let mut phi_sum = 0u64;
    for h in poly::monic_divisors(base, ctx.xn1_factorization())? {
        if !poly::divides(base, &x_minus_1, &h) {
            phi_sum += poly::poly_phi(base, &h)?;
        }
    }
    let expected = if base.is_prime_field() && num::gcd(ctx.n() as u64, base.p()) == 1 {
        let val = num::bounded_pow(base.p(), ctx.n() - 1, num::MAX_COUNT, "p^{n-1}")?;
        assert_eq!(phi_sum, val, "phi sum over Orders coprime to x-1 differs from p^{{n-1}}");
        Some(val)
    } else {
        None
    };
    Ok(TraceReport { elements_checked: checked, phi_sum, expected_phi_sum: expected })
}

/// An F_q-algebra embedding of a smaller extension into a larger one,
/// realized by the canonically least root of the small modulus.
pub struct Embedding {
    rho_powers: Vec<ExtElem>,
}

impl Embedding {
    /// Image of rho, the chosen root of the small modulus.
    pub fn rho(&self) -> &ExtElem {
        &self.rho_powers[1]
    }

    pub fn apply(&self, big: &ExtCtx, a: &ExtElem) -> ExtElem {
        let base = big.base();
        let mut acc = big.zero();
        for (i, rp) in self.rho_powers.iter().enumerate() {
            let c = a.residue().coeff(base, i);
            if !c.is_zero() {
                acc = big.add(&acc, &big.mul_base(rp, &c));
            }
        }
        acc
    }

    /// Classifies the image of a small-field element in the big field and
    /// asserts the embedding lemmas: multiplicative order is preserved, so
    /// the r-index scales by (q^n - 1)/(q^d - 1), and the normality index
    /// shifts by n - d. Returns (r_big, k_big), with r absent for zero.
    pub fn image_indices(
        &self,
        small: &ExtCtx,
        big: &ExtCtx,
        a: &ExtElem,
    ) -> Result<(Option<u64>, u32)> {
        let img = self.apply(big, a);
        let k_small = normality_index(small, a);
        let k_big = normality_index(big, &img);
        assert_eq!(
            k_big,
            big.n() - small.n() + k_small,
            "normality index did not shift by n - d under embedding"
        );
        let r_big = match small.mult_ord(a) {
            Err(_) => None,
            Ok(o) => {
                let scale = big.group_order() / small.group_order();
                let r_small = small.group_order() / o;
                let rb = big.group_order() / big.mult_ord(&img)?;
                assert_eq!(
                    rb,
                    scale * r_small,
                    "r-index did not scale by (q^n-1)/(q^d-1) under embedding"
                );
                Some(rb)
            }
        };
        Ok((r_big, k_big))
    }
}

/// Builds the embedding F_{q^d} -> F_{q^N} for d | N over a common base
/// field. The subfield is located as the kernel of L_{x^d - 1}, the small
/// modulus is evaluated over it, and the least root in canonical element
/// order becomes the image of the small generator.
pub fn embed(small: &ExtCtx, big: &ExtCtx) -> Result<Embedding> {
    let same_base = small.base().p() == big.base().p()
        && small.base().m() == big.base().m()
        && small.base().modulus_coeffs() == big.base().modulus_coeffs();
    if !same_base {
        return Err(Error::NoEmbedding("the base fields differ".into()));
    }
    let (d, n) = (small.n(), big.n());
    if n % d != 0 {
        return Err(Error::NoEmbedding(format!("{d} does not divide {n}")));
    }
    let subfield: Vec<ExtElem> = if d == n {
        big.elems()?.collect()
    } else {
        let xd1 = poly::x_pow_minus_one(big.base(), d);
        linearized::kernel_image(big, &xd1)?.kernel
    };
    let modulus = small.modulus().clone();
    let root = subfield
        .into_iter()
        .find(|c| big.eval_poly(&modulus, c).is_zero())
        .ok_or_else(|| Error::NoEmbedding("no root of the small modulus in the subfield".into()))?;
    let mut rho_powers = vec![big.one()];
    for _ in 1..d {
        rho_powers.push(big.mul(rho_powers.last().unwrap(), &root));
    }
    if d == 1 {
        rho_powers.push(root);
    }
    Ok(Embedding { rho_powers })
}
