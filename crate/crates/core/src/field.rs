//! Base fields F_q = F_p[y]/(m0(y)).
//!
//! Elements are coefficient vectors of length m over F_p, reduced mod p and
//! mod the field modulus. The canonical element order is
//! coordinate-lexicographic with the constant coefficient compared first, and
//! `elem_from_index` / `elem_index` realize that order as indices 0..q.

use crate::error::{Error, Result};
use crate::num;
use crate::poly::{self, Poly};

/// Construction request for a base field F_{p^m}. When `base_modulus` is
/// `None` the lexicographically least monic irreducible of degree m over F_p
/// is selected (deterministic for a fixed spec).
#[derive(Debug, Clone)]
pub struct FieldSpec {
    pub p: u64,
    pub m: u32,
    pub base_modulus: Option<Poly>,
}

impl FieldSpec {
    pub fn prime(p: u64) -> Self {
        FieldSpec { p, m: 1, base_modulus: None }
    }

    pub fn new(p: u64, m: u32) -> Self {
        FieldSpec { p, m, base_modulus: None }
    }
}

/// An element of F_q, held as its coefficient vector `c_0 + c_1 y + ...`
/// with every `c_i` already reduced mod p. Comparison is coordinate-
/// lexicographic (constant coefficient first), which matches the
/// enumeration order of the owning context.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqElem {
    coeffs: Vec<u64>,
}

impl FqElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// True when the element lies in the prime subfield (only the constant
    /// coordinate may be nonzero).
    pub fn is_scalar(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn scalar_part(&self) -> u64 {
        self.coeffs[0]
    }
}

/// Arithmetic context for one base field. All element operations go through
/// the context; mixing elements from different contexts is a contract
/// violation caught by debug assertions on coefficient width.
#[derive(Debug, Clone)]
pub struct FqCtx {
    p: u64,
    m: u32,
    q: u64,
    /// Monic modulus over F_p, ascending coefficients, length m+1.
    modulus: Vec<u64>,
}

impl FqCtx {
    /// Builds the field described by `spec`. Errors on non-prime p, m = 0,
    /// q exceeding the 2^20 bound, and a supplied modulus that is non-monic,
    /// of the wrong degree, or reducible.
    pub fn new(spec: &FieldSpec) -> Result<FqCtx> {
        if !num::is_prime(spec.p) {
            return Err(Error::NotPrime(spec.p));
        }
        if spec.m == 0 {
            return Err(Error::InvalidArgument("field degree m must be >= 1".into()));
        }
        let q = num::bounded_pow(spec.p, spec.m, num::MAX_BASE, "base field size q")?;
        let modulus = match &spec.base_modulus {
            Some(f) => Self::validate_modulus(spec.p, spec.m, f)?,
            None => Self::default_modulus(spec.p, spec.m)?,
        };
        Ok(FqCtx { p: spec.p, m: spec.m, q, modulus })
    }

    pub fn prime(p: u64) -> Result<FqCtx> {
        FqCtx::new(&FieldSpec::prime(p))
    }

    fn validate_modulus(p: u64, m: u32, f: &Poly) -> Result<Vec<u64>> {
        let prime_ctx = FqCtx::raw_prime(p);
        let raw = poly_to_prime_coeffs(f).ok_or_else(|| {
            Error::InvalidArgument("base modulus must have coefficients in F_p".into())
        })?;
        if raw.iter().any(|&c| c >= p) {
            return Err(Error::InvalidArgument(
                "base modulus coefficient out of range for F_p".into(),
            ));
        }
        if f.degree() != Some(m as usize) {
            return Err(Error::ModulusDegree {
                got: f.degree().map_or(0, |d| d),
                want: m as usize,
            });
        }
        if raw.last() != Some(&1) {
            return Err(Error::NonMonicModulus(crate::text::render_poly(f, 'y')));
        }
        if m > 1 && !poly::is_irreducible(&prime_ctx, f) {
            return Err(Error::ReducibleModulus(crate::text::render_poly(f, 'y')));
        }
        Ok(raw)
    }

    /// The lexicographically least monic irreducible of degree m over F_p,
    /// scanning coefficient tuples (c_0, ..., c_{m-1}) in lexicographic
    /// order with c_0 most significant. Degree 1 always yields `y`.
    fn default_modulus(p: u64, m: u32) -> Result<Vec<u64>> {
        if m == 1 {
            return Ok(vec![0, 1]);
        }
        let prime_ctx = FqCtx::raw_prime(p);
        for f in poly::enumerate_monic(&prime_ctx, m as usize)? {
            if poly::is_irreducible(&prime_ctx, &f) {
                let raw = poly_to_prime_coeffs(&f).expect("prime-field coefficients");
                return Ok(raw);
            }
        }
        unreachable!("irreducibles of every degree exist over F_{p}");
    }

    /// Prime context without the primality re-check; p is already validated
    /// by every caller.
    fn raw_prime(p: u64) -> FqCtx {
        FqCtx { p, m: 1, q: p, modulus: vec![0, 1] }
    }

    /// The prime subfield F_p as its own context.
    pub fn prime_subfield(&self) -> FqCtx {
        FqCtx::raw_prime(self.p)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.m == 1
    }

    pub fn modulus_coeffs(&self) -> &[u64] {
        &self.modulus
    }

    /// The field modulus as a polynomial over F_p (variable y).
    pub fn modulus_poly(&self) -> Poly {
        let prime_ctx = FqCtx::raw_prime(self.p);
        Poly::from_coeffs(
            self.modulus.iter().map(|&c| prime_ctx.scalar(c)).collect(),
        )
    }

    fn guard(&self, e: &FqElem) {
        debug_assert_eq!(e.coeffs.len(), self.m as usize, "element width mismatch");
        debug_assert!(e.coeffs.iter().all(|&c| c < self.p), "unreduced coefficient");
    }

    pub fn zero(&self) -> FqElem {
        FqElem { coeffs: vec![0; self.m as usize] }
    }

    pub fn one(&self) -> FqElem {
        self.scalar(1)
    }

    /// Embeds the integer c as the constant c mod p.
    pub fn scalar(&self, c: u64) -> FqElem {
        let mut coeffs = vec![0; self.m as usize];
        coeffs[0] = c % self.p;
        FqElem { coeffs }
    }

    /// Element with the given coefficient vector, reduced mod p. Shorter
    /// vectors are zero-padded; longer ones are rejected.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FqElem> {
        if coeffs.len() > self.m as usize {
            return Err(Error::InvalidArgument(format!(
                "element has {} coefficients, field degree is {}",
                coeffs.len(),
                self.m
            )));
        }
        let mut v = vec![0; self.m as usize];
        for (i, &c) in coeffs.iter().enumerate() {
            v[i] = c % self.p;
        }
        Ok(FqElem { coeffs: v })
    }

    /// Canonical index of an element: the base-p digits are the coefficients
    /// with c_0 most significant, so index order equals coordinate-
    /// lexicographic order.
    pub fn elem_index(&self, e: &FqElem) -> u64 {
        self.guard(e);
        e.coeffs.iter().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn elem_from_index(&self, mut idx: u64) -> FqElem {
        debug_assert!(idx < self.q);
        let m = self.m as usize;
        let mut coeffs = vec![0; m];
        for j in (0..m).rev() {
            coeffs[j] = idx % self.p;
            idx /= self.p;
        }
        FqElem { coeffs }
    }

    /// All q elements exactly once, in canonical order.
    pub fn elems(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q).map(move |i| self.elem_from_index(i))
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.guard(a);
        self.guard(b);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FqElem { coeffs }
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.guard(a);
        self.guard(b);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + self.p - y) % self.p)
            .collect();
        FqElem { coeffs }
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.guard(a);
        self.guard(b);
        if self.m == 1 {
            return FqElem { coeffs: vec![mulmod(a.coeffs[0], b.coeffs[0], self.p)] };
        }
        let prod = pp_mul(&a.coeffs, &b.coeffs, self.p);
        let rem = pp_rem(prod, &self.modulus, self.p);
        let mut coeffs = vec![0; self.m as usize];
        coeffs[..rem.len()].copy_from_slice(&rem);
        FqElem { coeffs }
    }

    pub fn mul_scalar(&self, a: &FqElem, c: u64) -> FqElem {
        self.guard(a);
        let c = c % self.p;
        FqElem { coeffs: a.coeffs.iter().map(|&x| mulmod(x, c, self.p)).collect() }
    }

    pub fn inv(&self, a: &FqElem) -> Result<FqElem> {
        self.guard(a);
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        if self.m == 1 {
            return Ok(FqElem { coeffs: vec![powmod(a.coeffs[0], self.p - 2, self.p)] });
        }
        let inv = pp_inv(&a.coeffs, &self.modulus, self.p).expect("unit in a field");
        let mut coeffs = vec![0; self.m as usize];
        coeffs[..inv.len()].copy_from_slice(&inv);
        Ok(FqElem { coeffs })
    }

    pub fn pow(&self, a: &FqElem, mut e: u64) -> FqElem {
        self.guard(a);
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// Extracts raw F_p coefficients from a polynomial whose coefficients are
/// prime-subfield elements; `None` if any coefficient has extension width.
fn poly_to_prime_coeffs(f: &Poly) -> Option<Vec<u64>> {
    let mut raw = Vec::with_capacity(f.coeffs().len());
    for c in f.coeffs() {
        if c.coeffs().len() != 1 {
            return None;
        }
        raw.push(c.coeffs()[0]);
    }
    Some(raw)
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

// Dense polynomial helpers over F_p on raw coefficient slices; these back
// the extension-field multiply and invert without per-coefficient wrappers.

fn pp_trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn pp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    pp_trim(out)
}

/// Remainder of `a` by the monic modulus `m`.
fn pp_rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    a = pp_trim(a);
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - dm;
        if lead != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let idx = shift + i;
                a[idx] = (a[idx] + p - mulmod(lead, mc, p)) % p;
            }
        }
        a.pop();
        a = pp_trim(a);
    }
    a
}

/// Inverse of `a` modulo the monic irreducible `m` via extended Euclid;
/// `None` when gcd(a, m) != 1.
fn pp_inv(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r0 = m.to_vec();
    let mut r1 = pp_trim(a.to_vec());
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (quot, rem) = pp_divmod(&r0, &r1, p);
        let t = pp_sub(&s0, &pp_mul(&quot, &s1, p), p);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = t;
    }
    if r0.len() != 1 {
        return None;
    }
    let scale = powmod(r0[0], p - 2, p);
    Some(pp_trim(s0.iter().map(|&c| mulmod(c, scale, p)).collect()))
}

fn pp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    pp_trim(out)
}

fn pp_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    debug_assert!(!b.is_empty());
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), pp_trim(rem));
    }
    let mut quot = vec![0u64; a.len() - db];
    let lead_inv = powmod(b[db], p - 2, p);
    while rem.len() > db {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - db;
        if lead != 0 {
            let c = mulmod(lead, lead_inv, p);
            quot[shift] = c;
            for (i, &bc) in b.iter().enumerate() {
                rem[shift + i] = (rem[shift + i] + p - mulmod(c, bc, p)) % p;
            }
        }
        rem.pop();
        rem = pp_trim(rem);
        if rem.is_empty() {
            break;
        }
    }
    (pp_trim(quot), pp_trim(rem))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, m: u32) -> FqCtx {
        FqCtx::new(&FieldSpec::new(p, m)).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FqCtx::new(&FieldSpec::new(4, 1)).unwrap_err(), Error::NotPrime(4));
        assert_eq!(FqCtx::new(&FieldSpec::new(1, 1)).unwrap_err(), Error::NotPrime(1));
        assert!(matches!(
            FqCtx::new(&FieldSpec::new(2, 21)).unwrap_err(),
            Error::TooLarge { .. }
        ));
        assert!(matches!(
            FqCtx::new(&FieldSpec::new(2, 0)).unwrap_err(),
            Error::InvalidArgument(_)
        ));
    }

    #[test]
    fn default_moduli_are_lex_least() {
        // F_4: y^2+y+1 is the only irreducible quadratic over F_2.
        assert_eq!(ctx(2, 2).modulus_coeffs(), &[1, 1, 1]);
        // F_8: y^3+1 and y^3+y^2 reduce; y^3+y^2+1 is hit before y^3+y+1.
        assert_eq!(ctx(2, 3).modulus_coeffs(), &[1, 0, 1, 1]);
        // F_9: y^2+1 (x^2 = -1 insoluble mod 3).
        assert_eq!(ctx(3, 2).modulus_coeffs(), &[1, 0, 1]);
        // Rebuilding yields the identical context.
        assert_eq!(ctx(3, 2).modulus_coeffs(), ctx(3, 2).modulus_coeffs());
        // F_25: first tuple (c0, c1) with y^2 + c1 y + c0 irreducible is (1, 1)?
        // y^2+1: -1 is a square mod 5 (2^2=4=-1), reducible; y^2+y+1: roots need
        // disc = 1-4 = -3 = 2, non-square mod 5, irreducible.
        assert_eq!(ctx(5, 2).modulus_coeffs(), &[1, 1, 1]);
    }

    #[test]
    fn supplied_modulus_validation() {
        let prime = FqCtx::prime(3).unwrap();
        let parse = |s: &str| crate::text::parse_poly(&prime, s, 'y').unwrap();
        // y^2+1 is fine for F_9.
        let spec = FieldSpec { p: 3, m: 2, base_modulus: Some(parse("y^2+1")) };
        assert!(FqCtx::new(&spec).is_ok());
        // y^2+2 = (y+1)(y+2) is reducible.
        let spec = FieldSpec { p: 3, m: 2, base_modulus: Some(parse("y^2+2")) };
        assert!(matches!(FqCtx::new(&spec).unwrap_err(), Error::ReducibleModulus(_)));
        // wrong degree
        let spec = FieldSpec { p: 3, m: 2, base_modulus: Some(parse("y+1")) };
        assert!(matches!(FqCtx::new(&spec).unwrap_err(), Error::ModulusDegree { .. }));
        // non-monic
        let spec = FieldSpec { p: 3, m: 2, base_modulus: Some(parse("2y^2+1")) };
        assert!(matches!(FqCtx::new(&spec).unwrap_err(), Error::NonMonicModulus(_)));
    }

    #[test]
    fn f9_arithmetic_samples() {
        let f9 = ctx(3, 2);
        let y = f9.from_coeffs(&[0, 1]).unwrap();
        // y * y = -1 = 2 under modulus y^2+1
        assert_eq!(f9.mul(&y, &y), f9.scalar(2));
        // inv(y) = 2y:  y * 2y = 2y^2 = -2 = 1
        assert_eq!(f9.inv(&y).unwrap(), f9.from_coeffs(&[0, 2]).unwrap());
        let a = f9.from_coeffs(&[1, 2]).unwrap(); // 1+2y
        assert_eq!(f9.mul(&a, &f9.inv(&a).unwrap()), f9.one());
        assert_eq!(f9.pow(&a, 8), f9.one());
        assert_eq!(f9.pow(&a, 0), f9.one());
    }

    #[test]
    fn enumeration_order_and_index_roundtrip() {
        let f4 = ctx(2, 2);
        let order: Vec<Vec<u64>> = f4.elems().map(|e| e.coeffs().to_vec()).collect();
        // coordinate-lex, constant coefficient most significant
        assert_eq!(order, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        for (i, e) in f4.elems().enumerate() {
            assert_eq!(f4.elem_index(&e), i as u64);
            assert_eq!(f4.elem_from_index(i as u64), e);
        }
        let f2 = ctx(2, 1);
        let order: Vec<u64> = f2.elems().map(|e| e.scalar_part()).collect();
        assert_eq!(order, vec![0, 1]);
    }

    /// Field axioms, exhaustively for q <= 16.
    #[test]
    fn field_axioms_exhaustive() {
        for (p, m) in [(2u64, 1u32), (3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (2, 2), (3, 2), (2, 3), (2, 4)] {
            let f = ctx(p, m);
            let els: Vec<FqElem> = f.elems().collect();
            for a in &els {
                assert_eq!(f.add(a, &f.zero()), *a);
                assert_eq!(f.mul(a, &f.one()), *a);
                assert_eq!(f.add(a, &f.neg(a)), f.zero());
                if !a.is_zero() {
                    assert_eq!(f.mul(a, &f.inv(a).unwrap()), f.one());
                }
                for b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in &els {
                        assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
                        assert_eq!(f.mul(&f.mul(a, b), c), f.mul(a, &f.mul(b, c)));
                        assert_eq!(f.add(&f.add(a, b), c), f.add(a, &f.add(b, c)));
                    }
                }
            }
        }
    }

    /// a^q = a for every element, exhaustively for q <= 81.
    #[test]
    fn frobenius_fixes_field() {
        for (p, m) in [(2u64, 1u32), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (3, 4), (5, 2), (7, 2)] {
            let f = ctx(p, m);
            if f.q() > 81 {
                continue;
            }
            for a in f.elems() {
                assert_eq!(f.pow(&a, f.q()), a, "a^q != a in F_{}", f.q());
            }
        }
    }

    #[test]
    fn inverse_of_zero_errors() {
        let f4 = ctx(2, 2);
        assert_eq!(f4.inv(&f4.zero()).unwrap_err(), Error::ZeroInverse);
    }
}
