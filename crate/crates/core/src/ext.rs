//! Extension fields F_{q^n} = F_q[x]/(m1(x)) over a base field context.
//!
//! The context caches everything the order computations lean on: the
//! factored group order q^n - 1, the factorization of x^n - 1 over the base
//! field, and the Frobenius images of the residue basis (sigma_q is F_q-
//! linear, so one image per basis monomial suffices).

use crate::error::{Error, Result};
use crate::field::{FqCtx, FqElem};
use crate::num;
use crate::poly::{self, Factorization, Poly};
use crate::text;

/// An element of the extension, held as its residue polynomial of degree
/// below n. Ordering is coordinate-lexicographic on the padded coefficient
/// tuple (constant coefficient compared first), matching the base-field
/// element order and the context's enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtElem {
    residue: Poly,
}

impl ExtElem {
    pub fn residue(&self) -> &Poly {
        &self.residue
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    /// The base-field value when the residue is constant.
    pub fn as_base(&self) -> Option<&FqElem> {
        match self.residue.degree() {
            None => None, // zero handled by caller via ctx
            Some(0) => Some(&self.residue.coeffs()[0]),
            _ => None,
        }
    }
}

impl Ord for ExtElem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a = self.residue.coeffs();
        let b = other.residue.coeffs();
        for j in 0..a.len().max(b.len()) {
            let ord = match (a.get(j), b.get(j)) {
                (Some(x), Some(y)) => x.cmp(y),
                (Some(x), None) => {
                    if x.is_zero() {
                        std::cmp::Ordering::Equal
                    } else {
                        std::cmp::Ordering::Greater
                    }
                }
                (None, Some(y)) => {
                    if y.is_zero() {
                        std::cmp::Ordering::Equal
                    } else {
                        std::cmp::Ordering::Less
                    }
                }
                (None, None) => std::cmp::Ordering::Equal,
            };
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl PartialOrd for ExtElem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone)]
pub struct ExtCtx {
    base: FqCtx,
    n: u32,
    modulus: Poly,
    group_order: u64,
    group_order_factorization: Vec<(u64, u32)>,
    xn1_factorization: Factorization,
    /// basis_frob[i] = x^{iq} mod modulus, so sigma(sum c_i x^i) =
    /// sum c_i basis_frob[i].
    basis_frob: Vec<Poly>,
}

impl ExtCtx {
    /// Builds F_{q^n} over `base`. With `modulus: None` the lexicographically
    /// least monic irreducible of degree n over the base is selected. Errors
    /// on n = 0, q^n beyond the counting bound, and invalid moduli.
    pub fn new(base: FqCtx, n: u32, modulus: Option<Poly>) -> Result<ExtCtx> {
        if n == 0 {
            return Err(Error::InvalidArgument("extension degree n must be >= 1".into()));
        }
        let qn = num::bounded_pow(base.q(), n, num::MAX_COUNT, "extension size q^n")?;
        let modulus = match modulus {
            Some(f) => {
                if f.degree() != Some(n as usize) {
                    return Err(Error::ModulusDegree {
                        got: f.degree().unwrap_or(0),
                        want: n as usize,
                    });
                }
                if !f.is_monic() {
                    return Err(Error::NonMonicModulus(text::render_poly(&f, 'x')));
                }
                if n > 1 && !poly::is_irreducible(&base, &f) {
                    return Err(Error::ReducibleModulus(text::render_poly(&f, 'x')));
                }
                f
            }
            None => poly::monic_candidates(&base, n as usize)
                .find(|f| poly::is_irreducible(&base, f))
                .expect("irreducibles of every degree exist"),
        };
        let group_order = qn - 1;
        let group_order_factorization = num::factor(group_order);
        let xn1_factorization = poly::factor_poly(&base, &poly::x_pow_minus_one(&base, n), 0)?;
        let mut basis_frob = Vec::with_capacity(n as usize);
        let xq = poly::pow_mod(&base, &Poly::x(&base), base.q(), &modulus)?;
        let mut acc = Poly::one(&base);
        basis_frob.push(acc.clone());
        for _ in 1..n {
            acc = poly::rem(&base, &poly::mul(&base, &acc, &xq), &modulus)?;
            basis_frob.push(acc.clone());
        }
        Ok(ExtCtx {
            base,
            n,
            modulus,
            group_order,
            group_order_factorization,
            xn1_factorization,
            basis_frob,
        })
    }

    /// Builds a context from the combined spec text `p:n`, `p^m:n`, or
    /// either with `/modulus` appended.
    pub fn from_spec_str(s: &str) -> Result<ExtCtx> {
        let (spec, n, modulus) = text::parse_ext_spec(s)?;
        ExtCtx::new(FqCtx::new(&spec)?, n, modulus)
    }

    pub fn base(&self) -> &FqCtx {
        &self.base
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// q^n - 1.
    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn group_order_factorization(&self) -> &[(u64, u32)] {
        &self.group_order_factorization
    }

    pub fn size(&self) -> u64 {
        self.group_order + 1
    }

    /// Cached factorization of x^n - 1 over the base field.
    pub fn xn1_factorization(&self) -> &Factorization {
        &self.xn1_factorization
    }

    pub fn x_pow_minus_one(&self) -> Poly {
        poly::x_pow_minus_one(&self.base, self.n)
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem { residue: Poly::zero() }
    }

    pub fn one(&self) -> ExtElem {
        ExtElem { residue: Poly::one(&self.base) }
    }

    /// The residue of x itself (zero when n = 1 and the modulus is x).
    pub fn gen(&self) -> ExtElem {
        self.from_poly(&Poly::x(&self.base))
    }

    pub fn scalar(&self, c: &FqElem) -> ExtElem {
        ExtElem { residue: Poly::constant(c.clone()) }
    }

    /// Reduces an arbitrary polynomial over the base field into the residue
    /// ring.
    pub fn from_poly(&self, f: &Poly) -> ExtElem {
        ExtElem { residue: poly::rem(&self.base, f, &self.modulus).expect("modulus nonzero") }
    }

    fn guard(&self, a: &ExtElem) {
        debug_assert!(a.residue.degree().map_or(0, |d| d + 1) <= self.n as usize);
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        self.guard(a);
        ExtElem { residue: poly::add(&self.base, &a.residue, &b.residue) }
    }

    pub fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem { residue: poly::sub(&self.base, &a.residue, &b.residue) }
    }

    pub fn neg(&self, a: &ExtElem) -> ExtElem {
        ExtElem { residue: poly::neg(&self.base, &a.residue) }
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        self.guard(a);
        self.guard(b);
        let prod = poly::mul(&self.base, &a.residue, &b.residue);
        ExtElem { residue: poly::rem(&self.base, &prod, &self.modulus).expect("modulus nonzero") }
    }

    pub fn mul_base(&self, a: &ExtElem, c: &FqElem) -> ExtElem {
        ExtElem { residue: poly::mul_scalar(&self.base, &a.residue, c) }
    }

    pub fn inv(&self, a: &ExtElem) -> Result<ExtElem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(ExtElem { residue: poly::inv_mod(&self.base, &a.residue, &self.modulus)? })
    }

    pub fn pow(&self, a: &ExtElem, mut e: u64) -> ExtElem {
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

    /// sigma_q^i applied to a: each basis monomial maps through the cached
    /// Frobenius images, and base-field coefficients are fixed by sigma_q.
    pub fn frobenius(&self, a: &ExtElem, i: u32) -> ExtElem {
        self.guard(a);
        let mut cur = a.clone();
        for _ in 0..i % self.n.max(1) {
            let mut acc = Poly::zero();
            for (j, c) in cur.residue.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                acc = poly::add(
                    &self.base,
                    &acc,
                    &poly::mul_scalar(&self.base, &self.basis_frob[j], c),
                );
            }
            cur = ExtElem { residue: acc };
        }
        cur
    }

    /// Evaluates a polynomial with base-field coefficients at an extension
    /// element.
    pub fn eval_poly(&self, f: &Poly, at: &ExtElem) -> ExtElem {
        let mut acc = self.zero();
        for c in f.coeffs().iter().rev() {
            acc = self.mul(&acc, at);
            acc = self.add(&acc, &self.scalar(c));
        }
        acc
    }

    /// Canonical index: base-q digits are the residue coefficients' indices
    /// with the constant coefficient most significant.
    pub fn elem_index(&self, a: &ExtElem) -> u64 {
        self.guard(a);
        let mut idx = 0u64;
        for j in 0..self.n as usize {
            let digit = a
                .residue
                .coeffs()
                .get(j)
                .map_or(0, |c| self.base.elem_index(c));
            idx = idx * self.base.q() + digit;
        }
        idx
    }

    pub fn elem_from_index(&self, mut idx: u64) -> ExtElem {
        debug_assert!(idx < self.size());
        let n = self.n as usize;
        let mut coeffs = vec![self.base.zero(); n];
        for j in (0..n).rev() {
            coeffs[j] = self.base.elem_from_index(idx % self.base.q());
            idx /= self.base.q();
        }
        ExtElem { residue: Poly::from_coeffs(coeffs) }
    }

    /// All q^n elements exactly once in canonical order. Errors when the
    /// field exceeds the enumeration cap.
    pub fn elems(&self) -> Result<impl Iterator<Item = ExtElem> + '_> {
        if self.size() > num::MAX_ENUM {
            return Err(Error::TooLarge {
                what: format!("enumeration of q^n = {}", self.size()),
                bound: num::MAX_ENUM,
            });
        }
        Ok((0..self.size()).map(move |i| self.elem_from_index(i)))
    }

    /// Trace to the base field: sum of the n Frobenius conjugates.
    pub fn trace(&self, a: &ExtElem) -> FqElem {
        let mut acc = a.clone();
        let mut conj = a.clone();
        for _ in 1..self.n {
            conj = self.frobenius(&conj, 1);
            acc = self.add(&acc, &conj);
        }
        self.expect_base(&acc, "trace")
    }

    /// Norm to the base field: product of the n Frobenius conjugates.
    pub fn norm(&self, a: &ExtElem) -> FqElem {
        let mut acc = a.clone();
        let mut conj = a.clone();
        for _ in 1..self.n {
            conj = self.frobenius(&conj, 1);
            acc = self.mul(&acc, &conj);
        }
        self.expect_base(&acc, "norm")
    }

    fn expect_base(&self, a: &ExtElem, what: &str) -> FqElem {
        match a.residue.degree() {
            None => self.base.zero(),
            Some(0) => a.residue.coeffs()[0].clone(),
            Some(d) => panic!("{what} left the base field (degree {d})"),
        }
    }

    /// Multiplicative order of a nonzero element: strips primes from
    /// q^n - 1 while a^(e/l) stays 1.
    pub fn mult_ord(&self, a: &ExtElem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut e = self.group_order;
        for &(l, _) in &self.group_order_factorization {
            while e % l == 0 {
                let cand = e / l;
                if self.pow(a, cand) == self.one() {
                    e = cand;
                } else {
                    break;
                }
            }
        }
        Ok(e)
    }

    pub fn is_primitive(&self, a: &ExtElem) -> Result<bool> {
        Ok(self.mult_ord(a)? == self.group_order)
    }

    /// The minimal polynomial of a over the base field: the product of
    /// (X - conjugate) over the Frobenius orbit. Every coefficient must land
    /// in the base field; that is asserted, not assumed.
    pub fn min_poly(&self, a: &ExtElem) -> Poly {
        let mut orbit = vec![a.clone()];
        loop {
            let next = self.frobenius(orbit.last().unwrap(), 1);
            if next == orbit[0] {
                break;
            }
            orbit.push(next);
        }
        // product of (X - beta) with ExtElem coefficients, ascending
        let mut coeffs: Vec<ExtElem> = vec![self.one()];
        for beta in &orbit {
            let mut next = vec![self.zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = self.add(&next[i + 1], c);
                let t = self.mul(c, beta);
                next[i] = self.sub(&next[i], &t);
            }
            coeffs = next;
        }
        let base_coeffs: Vec<FqElem> = coeffs
            .iter()
            .map(|c| self.expect_base(c, "minimal polynomial coefficient"))
            .collect();
        Poly::from_coeffs(base_coeffs)
    }

    /// All primitive elements in canonical order (enumeration-capped).
    pub fn primitive_elements(&self) -> Result<Vec<ExtElem>> {
        let mut out = Vec::new();
        for a in self.elems()? {
            if !a.is_zero() && self.is_primitive(&a)? {
                out.push(a);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn f2() -> FqCtx {
        FqCtx::prime(2).unwrap()
    }

    fn ext(p: u64, m: u32, n: u32) -> ExtCtx {
        ExtCtx::new(FqCtx::new(&FieldSpec::new(p, m)).unwrap(), n, None).unwrap()
    }

    fn ext_with(base: &FqCtx, n: u32, modulus: &str) -> ExtCtx {
        let f = text::parse_poly(base, modulus, 'x').unwrap();
        ExtCtx::new(base.clone(), n, Some(f)).unwrap()
    }

    #[test]
    fn default_moduli() {
        assert_eq!(ext(2, 1, 2).modulus().to_string(), "x^2+x+1");
        assert_eq!(ext(2, 1, 3).modulus().to_string(), "x^3+x^2+1");
        assert_eq!(ext(2, 1, 4).modulus().to_string(), "x^4+x^3+1");
        assert_eq!(ext(3, 1, 2).modulus().to_string(), "x^2+1");
        assert_eq!(ext(2, 1, 1).modulus().to_string(), "x");
    }

    #[test]
    fn modulus_validation() {
        let base = f2();
        let bad = text::parse_poly(&base, "x^2+1", 'x').unwrap();
        assert!(matches!(
            ExtCtx::new(base.clone(), 2, Some(bad)).unwrap_err(),
            Error::ReducibleModulus(_)
        ));
        let wrong = text::parse_poly(&base, "x^3+x+1", 'x').unwrap();
        assert!(matches!(
            ExtCtx::new(base.clone(), 2, Some(wrong)).unwrap_err(),
            Error::ModulusDegree { .. }
        ));
        assert!(ExtCtx::new(base, 0, None).is_err());
    }

    #[test]
    fn f4_omega_facts() {
        let f4 = ext(2, 1, 2);
        let w = f4.gen();
        assert_eq!(f4.trace(&w), f4.base().one());
        assert_eq!(f4.norm(&w), f4.base().one());
        assert_eq!(f4.mult_ord(&w).unwrap(), 3);
        assert_eq!(f4.min_poly(&w).to_string(), "x^2+x+1");
        // frobenius(w) = w^2 = w + 1
        let w2 = f4.frobenius(&w, 1);
        assert_eq!(w2, f4.add(&w, &f4.one()));
        assert_eq!(f4.primitive_elements().unwrap().len(), 2);
        assert_eq!(f4.group_order_factorization(), &[(3, 1)]);
    }

    #[test]
    fn f16_with_explicit_modulus() {
        let f16 = ext_with(&f2(), 4, "x^4+x+1");
        let x = f16.gen();
        assert_eq!(f16.mult_ord(&x).unwrap(), 15);
        assert_eq!(f16.mult_ord(&f16.pow(&x, 3)).unwrap(), 5);
        assert_eq!(f16.primitive_elements().unwrap().len(), 8);
        assert_eq!(f16.group_order_factorization(), &[(3, 1), (5, 1)]);
    }

    #[test]
    fn f8_trace_of_generator_is_zero() {
        let f8 = ext_with(&f2(), 3, "x^3+x+1");
        assert_eq!(f8.trace(&f8.gen()), f8.base().zero());
        // norm of any nonzero element of F_8 over F_2 is 1
        for a in f8.elems().unwrap() {
            if !a.is_zero() {
                assert_eq!(f8.norm(&a), f8.base().one());
            }
        }
    }

    #[test]
    fn enumeration_and_index_roundtrip() {
        let f4 = ext(2, 1, 2);
        let names: Vec<String> = f4
            .elems()
            .unwrap()
            .map(|e| e.residue().to_string())
            .collect();
        assert_eq!(names, vec!["0", "x", "1", "x+1"]);
        for (i, e) in f4.elems().unwrap().enumerate() {
            assert_eq!(f4.elem_index(&e), i as u64);
            assert_eq!(f4.elem_from_index(i as u64), e);
        }
        // sorting by Ord matches index order
        let mut els: Vec<ExtElem> = f4.elems().unwrap().collect();
        els.sort();
        assert_eq!(els, f4.elems().unwrap().collect::<Vec<_>>());
    }

    #[test]
    fn field_axioms_spot_checks() {
        let f9 = ext(3, 1, 2);
        for a in f9.elems().unwrap() {
            assert_eq!(f9.pow(&a, 9), a, "a^q != a fails Frobenius fixpoint");
            if !a.is_zero() {
                let inv = f9.inv(&a).unwrap();
                assert_eq!(f9.mul(&a, &inv), f9.one());
            }
        }
        assert!(f9.inv(&f9.zero()).is_err());
        assert!(f9.mult_ord(&f9.zero()).is_err());
    }

    #[test]
    fn min_poly_properties_exhaustive() {
        // over F_2 ext 4 and over F_4 ext 2: min poly is monic irreducible,
        // its degree divides n, and it annihilates the element
        for ctx in [ext(2, 1, 4), ext(2, 2, 2), ext(3, 1, 2)] {
            for a in ctx.elems().unwrap() {
                let mp = ctx.min_poly(&a);
                assert!(mp.is_monic());
                let d = mp.degree().unwrap();
                assert_eq!(ctx.n() as usize % d, 0);
                assert!(poly::is_irreducible(ctx.base(), &mp) || d == 1);
                assert!(ctx.eval_poly(&mp, &a).is_zero());
            }
        }
    }

    /// Trace and norm agree with the matrix-based definitions (trace and
    /// determinant of multiplication-by-a on the residue basis) on every
    /// field with q^n <= 256.
    #[test]
    fn trace_norm_matrix_oracle() {
        for ctx in [ext(2, 1, 2), ext(2, 1, 3), ext(2, 1, 4), ext(2, 1, 8), ext(3, 1, 2), ext(2, 2, 2), ext(2, 2, 3), ext(5, 1, 2), ext(3, 2, 2), ext(2, 3, 2)] {
            assert!(ctx.size() <= 256);
            let base = ctx.base().clone();
            let n = ctx.n() as usize;
            for a in ctx.elems().unwrap() {
                // multiplication matrix: column j = coefficients of a * x^j
                let mut cols = Vec::with_capacity(n);
                for j in 0..n {
                    let xj = ctx.from_poly(&poly::pow_mod(
                        &base,
                        &Poly::x(&base),
                        j as u64,
                        ctx.modulus(),
                    ).unwrap());
                    let prod = ctx.mul(&a, &xj);
                    let col: Vec<FqElem> = (0..n)
                        .map(|i| prod.residue().coeff(&base, i))
                        .collect();
                    cols.push(col);
                }
                let mut tr = base.zero();
                for (j, col) in cols.iter().enumerate() {
                    tr = base.add(&tr, &col[j]);
                }
                assert_eq!(ctx.trace(&a), tr);
                assert_eq!(ctx.norm(&a), det(&base, cols));
            }
        }
    }

    /// Determinant over F_q by Gaussian elimination, for the oracle above.
    fn det(base: &FqCtx, mut cols: Vec<Vec<FqElem>>) -> FqElem {
        let n = cols.len();
        let mut sign_flip = false;
        let mut acc = base.one();
        for i in 0..n {
            let Some(p) = (i..n).find(|&r| !cols[r][i].is_zero()) else {
                return base.zero();
            };
            if p != i {
                cols.swap(p, i);
                sign_flip = !sign_flip;
            }
            let pivot = cols[i][i].clone();
            acc = base.mul(&acc, &pivot);
            let pinv = base.inv(&pivot).unwrap();
            for r in (i + 1)..n {
                if cols[r][i].is_zero() {
                    continue;
                }
                let factor = base.mul(&cols[r][i], &pinv);
                for c in i..n {
                    let t = base.mul(&factor, &cols[i][c]);
                    cols[r][c] = base.sub(&cols[r][c], &t);
                }
            }
        }
        if sign_flip {
            acc = base.neg(&acc);
        }
        acc
    }

    #[test]
    fn from_spec_str_roundtrip() {
        let ctx = ExtCtx::from_spec_str("2:4/x^4+x+1").unwrap();
        assert_eq!(ctx.n(), 4);
        assert_eq!(ctx.modulus().to_string(), "x^4+x+1");
        let ctx = ExtCtx::from_spec_str("3^2:2").unwrap();
        assert_eq!(ctx.base().q(), 9);
        assert_eq!(ctx.group_order(), 80);
        assert!(ExtCtx::from_spec_str("6:2").is_err());
    }
}
