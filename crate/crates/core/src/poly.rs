//! Univariate polynomials over a base field F_q.
//!
//! Coefficients are stored ascending with no trailing zeros, so the zero
//! polynomial is the empty vector and `degree()` returns `None` for it (the
//! "minus infinity" degree). The canonical polynomial order compares degree
//! first, then coefficient tuples from the constant term up; it is the order
//! used for enumeration, divisor lists, and reports throughout the crate.

use std::cmp::Ordering;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FqCtx, FqElem};
use crate::num;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<FqElem>,
}

impl Poly {
    /// Builds a polynomial from ascending coefficients, trimming zero tails.
    pub fn from_coeffs(mut coeffs: Vec<FqElem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(ctx: &FqCtx) -> Poly {
        Poly::from_coeffs(vec![ctx.one()])
    }

    pub fn x(ctx: &FqCtx) -> Poly {
        Poly::from_coeffs(vec![ctx.zero(), ctx.one()])
    }

    pub fn constant(c: FqElem) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_scalar() && self.coeffs[0].scalar_part() == 1
    }

    /// Degree, with `None` standing in for the degree of the zero
    /// polynomial; it is never conflated with an integer degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FqElem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading()
            .is_some_and(|c| c.is_scalar() && c.scalar_part() == 1)
    }

    /// Coefficient of x^i, zero when i exceeds the degree.
    pub fn coeff(&self, ctx: &FqCtx, i: usize) -> FqElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| ctx.zero())
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn add(ctx: &FqCtx, a: &Poly, b: &Poly) -> Poly {
    let n = a.coeffs.len().max(b.coeffs.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(ctx.add(&a.coeff(ctx, i), &b.coeff(ctx, i)));
    }
    Poly::from_coeffs(out)
}

pub fn sub(ctx: &FqCtx, a: &Poly, b: &Poly) -> Poly {
    let n = a.coeffs.len().max(b.coeffs.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(ctx.sub(&a.coeff(ctx, i), &b.coeff(ctx, i)));
    }
    Poly::from_coeffs(out)
}

pub fn neg(ctx: &FqCtx, a: &Poly) -> Poly {
    Poly::from_coeffs(a.coeffs.iter().map(|c| ctx.neg(c)).collect())
}

pub fn mul(ctx: &FqCtx, a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![ctx.zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] = ctx.add(&out[i + j], &ctx.mul(x, y));
        }
    }
    Poly::from_coeffs(out)
}

pub fn mul_scalar(ctx: &FqCtx, a: &Poly, c: &FqElem) -> Poly {
    Poly::from_coeffs(a.coeffs.iter().map(|x| ctx.mul(x, c)).collect())
}

/// Quotient and remainder; errors only on division by the zero polynomial.
pub fn divmod(ctx: &FqCtx, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
    let db = b.degree().ok_or(Error::DivisionByZero)?;
    let mut rem = a.coeffs.clone();
    if a.coeffs.len() <= db {
        return Ok((Poly::zero(), a.clone()));
    }
    let lead_inv = ctx.inv(b.leading().unwrap())?;
    let mut quot = vec![ctx.zero(); a.coeffs.len() - db];
    while rem.len() > db {
        let lead = rem.last().unwrap().clone();
        let shift = rem.len() - 1 - db;
        if !lead.is_zero() {
            let c = ctx.mul(&lead, &lead_inv);
            for (i, bc) in b.coeffs.iter().enumerate() {
                rem[shift + i] = ctx.sub(&rem[shift + i], &ctx.mul(&c, bc));
            }
            quot[shift] = c;
        }
        rem.pop();
        while rem.last().is_some_and(|c| c.is_zero()) {
            rem.pop();
        }
    }
    Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
}

pub fn rem(ctx: &FqCtx, a: &Poly, b: &Poly) -> Result<Poly> {
    Ok(divmod(ctx, a, b)?.1)
}

pub fn divides(ctx: &FqCtx, d: &Poly, f: &Poly) -> bool {
    if d.is_zero() {
        return f.is_zero();
    }
    rem(ctx, f, d).expect("nonzero divisor").is_zero()
}

/// Scales a nonzero polynomial to leading coefficient 1; zero stays zero.
pub fn monic(ctx: &FqCtx, a: &Poly) -> Poly {
    match a.leading() {
        None => Poly::zero(),
        Some(l) => {
            if a.is_monic() {
                a.clone()
            } else {
                mul_scalar(ctx, a, &ctx.inv(l).expect("nonzero leading coefficient"))
            }
        }
    }
}

/// Monic gcd; gcd(0, 0) = 0 by convention.
pub fn gcd(ctx: &FqCtx, a: &Poly, b: &Poly) -> Poly {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    while !r1.is_zero() {
        let r = rem(ctx, &r0, &r1).expect("nonzero divisor");
        r0 = r1;
        r1 = r;
    }
    monic(ctx, &r0)
}

/// Monic lcm; zero if either input is zero.
pub fn lcm(ctx: &FqCtx, a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let g = gcd(ctx, a, b);
    let (q, r) = divmod(ctx, a, &g).unwrap();
    debug_assert!(r.is_zero());
    monic(ctx, &mul(ctx, &q, b))
}

/// Inverse of a modulo `modulus` via extended Euclid. Errors when the two
/// are not coprime (for an irreducible modulus, only when a reduces to 0).
pub fn inv_mod(ctx: &FqCtx, a: &Poly, modulus: &Poly) -> Result<Poly> {
    let mut r0 = modulus.clone();
    let mut r1 = rem(ctx, a, modulus)?;
    let mut s0 = Poly::zero();
    let mut s1 = Poly::one(ctx);
    while !r1.is_zero() {
        let (q, r) = divmod(ctx, &r0, &r1)?;
        let s = sub(ctx, &s0, &mul(ctx, &q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if r0.degree() != Some(0) {
        return Err(Error::ZeroInverse);
    }
    let scale = ctx.inv(&r0.coeffs()[0])?;
    rem(ctx, &mul_scalar(ctx, &s0, &scale), modulus)
}

pub fn eval(ctx: &FqCtx, f: &Poly, at: &FqElem) -> FqElem {
    let mut acc = ctx.zero();
    for c in f.coeffs.iter().rev() {
        acc = ctx.add(&ctx.mul(&acc, at), c);
    }
    acc
}

pub fn derivative(ctx: &FqCtx, f: &Poly) -> Poly {
    if f.coeffs.len() <= 1 {
        return Poly::zero();
    }
    let out = f.coeffs[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| ctx.mul_scalar(c, (i + 1) as u64))
        .collect();
    Poly::from_coeffs(out)
}

/// base^e mod modulus by square and multiply; modulus must have degree >= 1.
pub fn pow_mod(ctx: &FqCtx, base: &Poly, mut e: u64, modulus: &Poly) -> Result<Poly> {
    if modulus.degree().is_none_or(|d| d == 0) {
        return Err(Error::InvalidArgument(
            "pow_mod modulus must have degree >= 1".into(),
        ));
    }
    let mut b = rem(ctx, base, modulus)?;
    let mut acc = rem(ctx, &Poly::one(ctx), modulus)?;
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(ctx, &mul(ctx, &acc, &b), modulus)?;
        }
        b = rem(ctx, &mul(ctx, &b, &b), modulus)?;
        e >>= 1;
    }
    Ok(acc)
}

/// x^n - 1 over the given field; n must be at least 1.
pub fn x_pow_minus_one(ctx: &FqCtx, n: u32) -> Poly {
    assert!(n >= 1, "x^n - 1 requires n >= 1");
    let mut coeffs = vec![ctx.zero(); n as usize + 1];
    coeffs[0] = ctx.neg(&ctx.one());
    coeffs[n as usize] = ctx.one();
    Poly::from_coeffs(coeffs)
}

/// Streams all monic polynomials of the given degree in canonical order
/// (coefficient tuples compared constant term first). Errors when q^d
/// exceeds the enumeration cap.
pub fn enumerate_monic(ctx: &FqCtx, d: usize) -> Result<impl Iterator<Item = Poly> + '_> {
    let count = checked_q_pow(ctx.q(), d as u32, num::MAX_ENUM, "monic polynomial count q^d")?;
    Ok((0..count).map(move |mut idx| {
        let mut coeffs = vec![ctx.zero(); d + 1];
        coeffs[d] = ctx.one();
        for j in (0..d).rev() {
            coeffs[j] = ctx.elem_from_index(idx % ctx.q());
            idx /= ctx.q();
        }
        Poly::from_coeffs(coeffs)
    }))
}

/// Lazy monic candidate stream in the same canonical order as
/// `enumerate_monic`, but without the cap: default-modulus searches stop at
/// the first irreducible, which appears within a handful of candidates even
/// when q^d is far beyond the enumeration bound.
pub(crate) fn monic_candidates(ctx: &FqCtx, d: usize) -> impl Iterator<Item = Poly> + '_ {
    let total = (d as u32)
        .try_into()
        .ok()
        .and_then(|e: u32| ctx.q().checked_pow(e))
        .unwrap_or(u64::MAX);
    (0..total).map(move |mut idx| {
        let mut coeffs = vec![ctx.zero(); d + 1];
        coeffs[d] = ctx.one();
        for j in (0..d).rev() {
            coeffs[j] = ctx.elem_from_index(idx % ctx.q());
            idx /= ctx.q();
        }
        Poly::from_coeffs(coeffs)
    })
}

/// Materialized monic enumeration with an optional irreducibility filter.
pub fn monic_polys(ctx: &FqCtx, d: usize, irreducible_only: bool) -> Result<Vec<Poly>> {
    let it = enumerate_monic(ctx, d)?;
    if irreducible_only {
        Ok(it.filter(|f| is_irreducible(ctx, f)).collect())
    } else {
        Ok(it.collect())
    }
}

fn checked_q_pow(q: u64, e: u32, bound: u64, what: &str) -> Result<u64> {
    num::bounded_pow(q, e, bound, what)
}

/// Rabin's irreducibility test. Constants and zero are not irreducible;
/// degree 1 always is. For degree d the test checks x^{q^d} = x mod f and
/// gcd(x^{q^{d/l}} - x, f) = 1 for every prime l dividing d.
pub fn is_irreducible(ctx: &FqCtx, f: &Poly) -> bool {
    let d = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(d) => d,
    };
    if f.coeffs[0].is_zero() {
        // x divides f
        return false;
    }
    let x = Poly::x(ctx);
    // chain[i] = x^{q^{i+1}} mod f
    let mut h = x.clone();
    let mut chain = Vec::with_capacity(d);
    for _ in 0..d {
        h = pow_mod(ctx, &h, ctx.q(), f).expect("degree >= 1");
        chain.push(h.clone());
    }
    if chain[d - 1] != rem(ctx, &x, f).unwrap() {
        return false;
    }
    let prime_divs: Vec<u64> = num::factor(d as u64).into_iter().map(|(p, _)| p).collect();
    for l in prime_divs {
        let idx = d / l as usize;
        let g = gcd(ctx, &sub(ctx, &chain[idx - 1], &x), f);
        if !g.is_one() {
            return false;
        }
    }
    true
}

/// A complete factorization: `unit * prod factors[i].0 ^ factors[i].1` with
/// monic irreducible bases sorted in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FqElem,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn product(&self, ctx: &FqCtx) -> Poly {
        let mut acc = Poly::constant(self.unit.clone());
        for (f, e) in &self.factors {
            for _ in 0..*e {
                acc = mul(ctx, &acc, f);
            }
        }
        acc
    }
}

/// Complete factorization over F_q: squarefree split, then distinct-degree,
/// then Cantor-Zassenhaus equal-degree splitting driven by a ChaCha stream
/// seeded from `seed`. The result is re-multiplied and compared to the input
/// before return.
pub fn factor_poly(ctx: &FqCtx, f: &Poly, seed: u64) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("cannot factor the zero polynomial".into()));
    }
    let unit = f.leading().unwrap().clone();
    let monic_f = monic(ctx, f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    for (sqfree, mult) in squarefree_parts(ctx, &monic_f) {
        for (irr, inner) in distinct_degree(ctx, &sqfree, &mut rng) {
            debug_assert_eq!(inner, 1);
            merge_factor(&mut factors, irr, mult);
        }
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    let fz = Factorization { unit, factors };
    assert_eq!(fz.product(ctx), *f, "factorization failed re-multiplication");
    Ok(fz)
}

fn merge_factor(factors: &mut Vec<(Poly, u32)>, f: Poly, mult: u32) {
    if let Some(entry) = factors.iter_mut().find(|(g, _)| *g == f) {
        entry.1 += mult;
    } else {
        factors.push((f, mult));
    }
}

/// Yun-style squarefree decomposition adapted to characteristic p: returns
/// (squarefree part, multiplicity) pairs whose weighted product is the monic
/// input. When the derivative vanishes the input is a p-th power and the
/// p-th root is processed recursively.
fn squarefree_parts(ctx: &FqCtx, f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.is_one() {
        return out;
    }
    let deriv = derivative(ctx, f);
    if deriv.is_zero() {
        let root = pth_root(ctx, f);
        for (g, m) in squarefree_parts(ctx, &root) {
            out.push((g, m * ctx.p() as u32));
        }
        return out;
    }
    let mut c = gcd(ctx, f, &deriv);
    let mut w = divmod(ctx, f, &c).unwrap().0;
    let mut i = 1u32;
    while !w.is_one() {
        let y = gcd(ctx, &w, &c);
        let z = divmod(ctx, &w, &y).unwrap().0;
        if !z.is_one() {
            out.push((z, i));
        }
        w = y;
        c = divmod(ctx, &c, &w).unwrap().0;
        i += 1;
    }
    if !c.is_one() {
        // remaining factor is a p-th power
        let root = pth_root(ctx, &c);
        for (g, m) in squarefree_parts(ctx, &root) {
            out.push((g, m * ctx.p() as u32));
        }
    }
    out
}

/// The p-th root of a polynomial all of whose exponents are multiples of p.
/// Coefficient roots are c^{p^{m-1}} since c^{p^m} = c in F_{p^m}.
fn pth_root(ctx: &FqCtx, f: &Poly) -> Poly {
    let p = ctx.p() as usize;
    let root_exp = if ctx.m() == 1 {
        1
    } else {
        num::checked_pow(ctx.p(), ctx.m() - 1).expect("q already bounded")
    };
    let mut out = Vec::new();
    for (i, c) in f.coeffs().iter().enumerate() {
        if i % p == 0 {
            out.push(ctx.pow(c, root_exp));
        } else {
            debug_assert!(c.is_zero(), "input is not a p-th power");
        }
    }
    Poly::from_coeffs(out)
}

/// Distinct-degree stage on a squarefree input, splitting each equal-degree
/// block with Cantor-Zassenhaus. Returns monic irreducibles (multiplicity 1).
fn distinct_degree(ctx: &FqCtx, f: &Poly, rng: &mut ChaCha8Rng) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    let mut remainder = f.clone();
    let x = Poly::x(ctx);
    let mut w = x.clone();
    let mut d = 0usize;
    while remainder.degree().is_some_and(|deg| deg > 0) {
        d += 1;
        if 2 * d > remainder.degree().unwrap() {
            // what is left is a single irreducible
            out.push((monic(ctx, &remainder), 1));
            break;
        }
        w = pow_mod(ctx, &w, ctx.q(), &remainder).unwrap();
        let block = gcd(ctx, &sub(ctx, &w, &x), &remainder);
        if block.degree().is_some_and(|deg| deg > 0) {
            for piece in equal_degree_split(ctx, &block, d, rng) {
                out.push((piece, 1));
            }
            remainder = divmod(ctx, &remainder, &block).unwrap().0;
            w = rem(ctx, &w, &remainder).unwrap_or_else(|_| w.clone());
            if remainder.degree().is_none_or(|deg| deg == 0) {
                break;
            }
        }
    }
    out
}

/// Cantor-Zassenhaus equal-degree factorization: `f` is a product of
/// distinct monic irreducibles of degree d.
fn equal_degree_split(ctx: &FqCtx, f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let mut done = Vec::new();
    let mut stack = vec![monic(ctx, f)];
    while let Some(h) = stack.pop() {
        let deg = h.degree().unwrap();
        if deg == d {
            done.push(h);
            continue;
        }
        let split = loop {
            let a = random_poly(ctx, deg, rng);
            let g = if ctx.p() == 2 {
                trace_map(ctx, &a, d, &h)
            } else {
                odd_char_splitter(ctx, &a, d, &h)
            };
            let g = gcd(ctx, &g, &h);
            if g.degree().is_some_and(|dg| dg > 0 && dg < deg) {
                break g;
            }
        };
        let other = divmod(ctx, &h, &split).unwrap().0;
        stack.push(split);
        stack.push(other);
    }
    done.sort();
    done
}

fn random_poly(ctx: &FqCtx, deg_bound: usize, rng: &mut ChaCha8Rng) -> Poly {
    let coeffs = (0..deg_bound)
        .map(|_| ctx.elem_from_index(rng.next_u64() % ctx.q()))
        .collect();
    Poly::from_coeffs(coeffs)
}

/// a^{(q^d-1)/2} - 1 mod h for odd q, computed as the norm ladder
/// a^{(q^d-1)/(q-1)} followed by a small power, so the exponent never
/// materializes as an integer.
fn odd_char_splitter(ctx: &FqCtx, a: &Poly, d: usize, h: &Poly) -> Poly {
    let mut t = rem(ctx, a, h).unwrap();
    for _ in 1..d {
        t = pow_mod(ctx, &t, ctx.q(), h).unwrap();
        t = rem(ctx, &mul(ctx, &t, a), h).unwrap();
    }
    let b = pow_mod(ctx, &t, (ctx.q() - 1) / 2, h).unwrap();
    sub(ctx, &b, &Poly::one(ctx))
}

/// Additive trace map sum a^{2^i}, i < m*d, used as the splitter in
/// characteristic 2.
fn trace_map(ctx: &FqCtx, a: &Poly, d: usize, h: &Poly) -> Poly {
    let k = ctx.m() as usize * d;
    let mut s = rem(ctx, a, h).unwrap();
    let mut acc = s.clone();
    for _ in 1..k {
        s = rem(ctx, &mul(ctx, &s, &s), h).unwrap();
        acc = add(ctx, &acc, &s);
    }
    acc
}

/// Euler phi for the quotient ring F_q[x]/(f): multiplicative over the
/// factorization, with phi(g^e) = q^{de} - q^{d(e-1)} for irreducible g of
/// degree d. Constants give 1; zero is rejected.
pub fn poly_phi(ctx: &FqCtx, f: &Poly) -> Result<u64> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("phi of the zero polynomial".into()));
    }
    let fz = factor_poly(ctx, f, 0)?;
    poly_phi_factored(ctx, &fz)
}

pub fn poly_phi_factored(ctx: &FqCtx, fz: &Factorization) -> Result<u64> {
    let mut acc: u64 = 1;
    for (g, e) in &fz.factors {
        let d = g.degree().unwrap() as u32;
        let qd_e = checked_q_pow(ctx.q(), d * e, num::MAX_COUNT, "q^(d*e) in poly phi")?;
        let qd_e1 = checked_q_pow(ctx.q(), d * (e - 1), num::MAX_COUNT, "q^(d*(e-1)) in poly phi")?;
        acc = acc
            .checked_mul(qd_e - qd_e1)
            .ok_or_else(|| Error::Overflow("poly phi product".into()))?;
    }
    Ok(acc)
}

/// All monic divisors of the factored polynomial, in canonical order.
pub fn monic_divisors(ctx: &FqCtx, fz: &Factorization) -> Result<Vec<Poly>> {
    let mut count: u64 = 1;
    for (_, e) in &fz.factors {
        count = count
            .checked_mul(*e as u64 + 1)
            .filter(|&c| c <= num::MAX_ENUM)
            .ok_or(Error::TooLarge { what: "monic divisor count".into(), bound: num::MAX_ENUM })?;
    }
    let mut divs = vec![Poly::one(ctx)];
    for (g, e) in &fz.factors {
        let prev = std::mem::take(&mut divs);
        let mut powers = Vec::with_capacity(*e as usize + 1);
        let mut acc = Poly::one(ctx);
        powers.push(acc.clone());
        for _ in 0..*e {
            acc = mul(ctx, &acc, g);
            powers.push(acc.clone());
        }
        for d in &prev {
            for pw in &powers {
                divs.push(mul(ctx, d, pw));
            }
        }
    }
    divs.sort();
    debug_assert_eq!(divs.len() as u64, count);
    Ok(divs)
}

/// Splits f as x^h * g with g(0) != 0.
pub fn strip_x(f: &Poly) -> (u32, Poly) {
    if f.is_zero() {
        return (0, Poly::zero());
    }
    let h = f.coeffs().iter().take_while(|c| c.is_zero()).count();
    (h as u32, Poly::from_coeffs(f.coeffs()[h..].to_vec()))
}

/// Multiplicative order of f: the least e >= 1 with f | x^e - 1. Errors when
/// f(0) = 0 or f = 0; constants have order 1. Computed structurally from the
/// factorization: ord(g^e) = ord(g) * p^t with t minimal such that p^t >= e,
/// and ord of the product is the lcm of the parts.
pub fn ord_poly(ctx: &FqCtx, f: &Poly) -> Result<u64> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("ord of the zero polynomial".into()));
    }
    if f.coeffs()[0].is_zero() {
        return Err(Error::ZeroConstantTerm(format!("{f}")));
    }
    if f.degree() == Some(0) {
        return Ok(1);
    }
    let fz = factor_poly(ctx, f, 0)?;
    let mut acc: u64 = 1;
    for (g, e) in &fz.factors {
        let og = ord_irreducible(ctx, g)?;
        let mut part = og;
        if *e > 1 {
            let mut pt = 1u64;
            while pt < *e as u64 {
                pt = pt
                    .checked_mul(ctx.p())
                    .ok_or_else(|| Error::Overflow("p^t in ord".into()))?;
            }
            part = part
                .checked_mul(pt)
                .ok_or_else(|| Error::Overflow("ord(g)*p^t".into()))?;
        }
        acc = num::lcm(acc, part)?;
    }
    Ok(acc)
}

/// Order of a monic irreducible g with g(0) != 0: divides q^d - 1, found by
/// stripping primes from that group order while x^e = 1 mod g persists.
fn ord_irreducible(ctx: &FqCtx, g: &Poly) -> Result<u64> {
    let d = g.degree().unwrap() as u32;
    if d == 0 {
        return Ok(1);
    }
    let n = checked_q_pow(ctx.q(), d, num::MAX_COUNT, "q^deg(g) in ord")? - 1;
    let x = Poly::x(ctx);
    let mut e = n;
    for (l, _) in num::factor(n) {
        while e % l == 0 {
            let cand = e / l;
            if pow_mod(ctx, &x, cand, g)?.is_one() {
                e = cand;
            } else {
                break;
            }
        }
    }
    Ok(e)
}

/// Reference implementation of ord_poly: increment e until f | x^e - 1.
/// Exponential in the input size; used to cross-check the structural method.
pub fn ord_poly_naive(ctx: &FqCtx, f: &Poly) -> Result<u64> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("ord of the zero polynomial".into()));
    }
    if f.coeffs()[0].is_zero() {
        return Err(Error::ZeroConstantTerm(format!("{f}")));
    }
    if f.degree() == Some(0) {
        return Ok(1);
    }
    let x = Poly::x(ctx);
    let mut xe = rem(ctx, &x, f)?;
    let mut e = 1u64;
    loop {
        if xe.is_one() {
            return Ok(e);
        }
        xe = rem(ctx, &mul(ctx, &xe, &x), f)?;
        e += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::text::parse_poly;

    fn f2() -> FqCtx {
        FqCtx::prime(2).unwrap()
    }

    fn f3() -> FqCtx {
        FqCtx::prime(3).unwrap()
    }

    fn p(ctx: &FqCtx, s: &str) -> Poly {
        parse_poly(ctx, s, 'x').unwrap()
    }

    #[test]
    fn degree_of_zero_is_none() {
        assert_eq!(Poly::zero().degree(), None);
        let ctx = f2();
        assert_eq!(Poly::one(&ctx).degree(), Some(0));
        assert_eq!(Poly::x(&ctx).degree(), Some(1));
    }

    #[test]
    fn divmod_and_gcd_basics() {
        let ctx = f2();
        let a = p(&ctx, "x^2+1");
        let b = p(&ctx, "x+1");
        let (q, r) = divmod(&ctx, &a, &b).unwrap();
        assert_eq!(q, p(&ctx, "x+1"));
        assert!(r.is_zero());
        assert_eq!(gcd(&ctx, &a, &b), p(&ctx, "x+1"));
        assert_eq!(gcd(&ctx, &Poly::zero(), &Poly::zero()), Poly::zero());
        // gcd with zero returns the monic normalization of the other input
        let ctx3 = f3();
        let c = p(&ctx3, "2*x+2");
        assert_eq!(gcd(&ctx3, &c, &Poly::zero()), p(&ctx3, "x+1"));
        assert_eq!(divmod(&ctx, &a, &Poly::zero()).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn lcm_conventions() {
        let ctx = f3();
        let f = p(&ctx, "2*x+2");
        assert_eq!(lcm(&ctx, &f, &Poly::one(&ctx)), p(&ctx, "x+1"));
        assert_eq!(lcm(&ctx, &f, &Poly::zero()), Poly::zero());
        assert_eq!(
            lcm(&ctx, &p(&ctx, "x+1"), &p(&ctx, "x+2")),
            p(&ctx, "x^2+2")
        );
    }

    #[test]
    fn pow_mod_frobenius() {
        let ctx = f2();
        let f = p(&ctx, "x^3+x+1");
        // x^8 = x mod f since f is irreducible of degree 3
        assert_eq!(pow_mod(&ctx, &Poly::x(&ctx), 8, &f).unwrap(), Poly::x(&ctx));
    }

    #[test]
    fn eval_and_derivative() {
        let ctx = FqCtx::prime(7).unwrap();
        let f = p(&ctx, "x^3+2*x+5");
        assert_eq!(eval(&ctx, &f, &ctx.scalar(2)), ctx.scalar(3)); // 8+4+5 = 17 = 3
        assert_eq!(derivative(&ctx, &f), p(&ctx, "3*x^2+2"));
        let ctx2 = f2();
        assert_eq!(derivative(&ctx2, &p(&ctx2, "x^2+1")), Poly::zero());
    }

    #[test]
    fn irreducibility_degree_3_over_f2() {
        let ctx = f2();
        let irr: Vec<Poly> = monic_polys(&ctx, 3, true).unwrap();
        // canonical order puts the constant coefficient first, so
        // x^3+x^2+1 (middle digits 0,1) precedes x^3+x+1 (digits 1,0)
        assert_eq!(irr, vec![p(&ctx, "x^3+x^2+1"), p(&ctx, "x^3+x+1")]);
        assert!(!is_irreducible(&ctx, &p(&ctx, "x^2+1")));
        assert!(is_irreducible(&ctx, &p(&ctx, "x^2+x+1")));
        assert!(!is_irreducible(&ctx, &Poly::one(&ctx)));
        assert!(!is_irreducible(&ctx, &Poly::zero()));
    }

    #[test]
    fn enumerate_monic_is_canonical_and_capped() {
        let ctx = f3();
        let all: Vec<Poly> = enumerate_monic(&ctx, 1).unwrap().collect();
        assert_eq!(all, vec![p(&ctx, "x"), p(&ctx, "x+1"), p(&ctx, "x+2")]);
        assert_eq!(enumerate_monic(&ctx, 2).unwrap().count(), 9);
        assert!(enumerate_monic(&ctx, 40).is_err());
    }

    #[test]
    fn factor_known_shapes() {
        let ctx = f2();
        let fz = factor_poly(&ctx, &p(&ctx, "x^4+x"), 0).unwrap();
        assert_eq!(fz.unit, ctx.one());
        assert_eq!(
            fz.factors,
            vec![
                (p(&ctx, "x"), 1),
                (p(&ctx, "x+1"), 1),
                (p(&ctx, "x^2+x+1"), 1)
            ]
        );
        // derivative-zero path: x^4+1 = (x+1)^4 over F_2
        let fz = factor_poly(&ctx, &p(&ctx, "x^4+1"), 0).unwrap();
        assert_eq!(fz.factors, vec![(p(&ctx, "x+1"), 4)]);
        let ctx3 = f3();
        let fz = factor_poly(&ctx3, &p(&ctx3, "x^4+2"), 0).unwrap();
        assert_eq!(
            fz.factors,
            vec![
                (p(&ctx3, "x+1"), 1),
                (p(&ctx3, "x+2"), 1),
                (p(&ctx3, "x^2+1"), 1)
            ]
        );
        // non-monic input keeps its unit
        let fz = factor_poly(&ctx3, &p(&ctx3, "2*x^2+2"), 0).unwrap();
        assert_eq!(fz.unit, ctx3.scalar(2));
        assert_eq!(fz.factors, vec![(p(&ctx3, "x^2+1"), 1)]);
        assert!(factor_poly(&ctx, &Poly::zero(), 0).is_err());
    }

    #[test]
    fn factor_over_extension_base() {
        // F_4 with y^2+y+1; x^2+x+y splits by the Artin-Schreier trick or not,
        // either way the product must reconstruct.
        let f4 = FqCtx::new(&FieldSpec::new(2, 2)).unwrap();
        for idx in 0..64u64 {
            let coeffs: Vec<_> = (0..3).map(|j| f4.elem_from_index((idx >> (2 * j)) & 3)).collect();
            let f = Poly::from_coeffs(coeffs);
            if f.is_zero() {
                continue;
            }
            let fz = factor_poly(&f4, &f, 0).unwrap();
            assert_eq!(fz.product(&f4), f);
            for (g, _) in &fz.factors {
                assert!(is_irreducible(&f4, g), "non-irreducible factor {g}");
            }
        }
    }

    #[test]
    fn phi_and_divisors_over_f2() {
        let ctx = f2();
        assert_eq!(poly_phi(&ctx, &p(&ctx, "x^2+1")).unwrap(), 2);
        assert_eq!(poly_phi(&ctx, &p(&ctx, "x^2+x+1")).unwrap(), 3);
        assert_eq!(poly_phi(&ctx, &p(&ctx, "x^2+x")).unwrap(), 1);
        assert_eq!(poly_phi(&ctx, &Poly::one(&ctx)).unwrap(), 1);
        let fz = factor_poly(&ctx, &p(&ctx, "x^3+1"), 0).unwrap();
        let divs = monic_divisors(&ctx, &fz).unwrap();
        assert_eq!(
            divs,
            vec![
                Poly::one(&ctx),
                p(&ctx, "x+1"),
                p(&ctx, "x^2+x+1"),
                p(&ctx, "x^3+1")
            ]
        );
    }

    #[test]
    fn phi_sums_to_qn_over_divisors_of_xn_minus_1() {
        // sum of phi(d) over monic divisors d of x^n-1 equals q^n when
        // gcd(n, p) = 1; here n = 4, q = 3.
        let ctx = f3();
        let fz = factor_poly(&ctx, &x_pow_minus_one(&ctx, 4), 0).unwrap();
        let total: u64 = monic_divisors(&ctx, &fz)
            .unwrap()
            .iter()
            .map(|d| poly_phi(&ctx, d).unwrap())
            .sum();
        assert_eq!(total, 81);
    }

    #[test]
    fn ord_small_cases() {
        let ctx = f2();
        assert_eq!(ord_poly(&ctx, &p(&ctx, "x+1")).unwrap(), 1);
        assert_eq!(ord_poly(&ctx, &p(&ctx, "x^2+1")).unwrap(), 2);
        assert_eq!(ord_poly(&ctx, &p(&ctx, "x^2+x+1")).unwrap(), 3);
        assert_eq!(ord_poly(&ctx, &p(&ctx, "x^3+x+1")).unwrap(), 7);
        assert_eq!(ord_poly(&ctx, &p(&ctx, "x^4+x^3+x^2+x+1")).unwrap(), 5);
        assert_eq!(ord_poly(&ctx, &p(&ctx, "x^3+x^2+x+1")).unwrap(), 4); // (x+1)^3
        assert_eq!(ord_poly(&ctx, &Poly::one(&ctx)).unwrap(), 1);
        assert!(matches!(
            ord_poly(&ctx, &p(&ctx, "x^2+x")).unwrap_err(),
            Error::ZeroConstantTerm(_)
        ));
        assert_eq!(strip_x(&p(&ctx, "x^3+x")), (1, p(&ctx, "x^2+1")));
    }

    #[test]
    fn ord_matches_naive_exhaustively() {
        // every monic f with nonzero constant term, deg <= 5 over F_2 and
        // deg <= 4 over F_3
        for (ctx, dmax) in [(f2(), 5usize), (f3(), 4)] {
            for d in 1..=dmax {
                for f in enumerate_monic(&ctx, d).unwrap() {
                    if f.coeffs()[0].is_zero() {
                        continue;
                    }
                    assert_eq!(
                        ord_poly(&ctx, &f).unwrap(),
                        ord_poly_naive(&ctx, &f).unwrap(),
                        "ord mismatch for {f}"
                    );
                }
            }
        }
    }

    #[test]
    fn canonical_order_sorts_by_degree_then_constant_first() {
        let ctx = f3();
        let mut v = vec![
            p(&ctx, "x^2"),
            p(&ctx, "x+1"),
            Poly::one(&ctx),
            p(&ctx, "2"),
            Poly::zero(),
            p(&ctx, "x"),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                Poly::zero(),
                Poly::one(&ctx),
                p(&ctx, "2"),
                p(&ctx, "x"),
                p(&ctx, "x+1"),
                p(&ctx, "x^2"),
            ]
        );
    }
}
