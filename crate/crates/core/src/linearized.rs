//! Linearized polynomials and F_q-Orders.
//!
//! For g = sum g_i x^i over F_q, the q-associate L_g(X) = sum g_i X^{q^i}
//! acts F_q-linearly on any extension of F_q via the Frobenius sigma_q. The
//! F_q-Order of an extension element a is the least monic g dividing x^n - 1
//! with L_g(a) = 0; the F_q-Order of a polynomial f is the least monic g
//! with f | L_g. Both "first linear dependence" searches are justified by
//! the same fact: the annihilating set is an ideal of F_q[x] (it is closed
//! under addition, and f | L_g implies f | (L_g)^q = L_{xg}), so the first
//! dependence among Frobenius iterates yields the monic generator.

use serde_json::json;

use crate::error::{Error, Result};
use crate::ext::{ExtCtx, ExtElem};
use crate::field::{FqCtx, FqElem};
use crate::num;
use crate::poly::{self, Poly};
use crate::text;

/// Threshold past which the dense q-associate is refused; divisibility
/// questions about L_g go through `lin_poly_mod` instead, which never
/// materializes it.
const Q_ASSOCIATE_CAP: u64 = 1 << 16;

/// Evaluates L_g(a) = sum g_i sigma^i(a) in the extension.
pub fn lin_eval(ctx: &ExtCtx, g: &Poly, a: &ExtElem) -> ExtElem {
    let mut acc = ctx.zero();
    let mut conj = a.clone();
    for (i, c) in g.coeffs().iter().enumerate() {
        if i > 0 {
            conj = ctx.frobenius(&conj, 1);
        }
        if !c.is_zero() {
            acc = ctx.add(&acc, &ctx.mul_base(&conj, c));
        }
    }
    acc
}

/// The dense q-associate L_g as a polynomial, for small q^deg(g) only.
pub fn q_associate(base: &FqCtx, g: &Poly) -> Result<Poly> {
    let d = match g.degree() {
        None => return Ok(Poly::zero()),
        Some(d) => d,
    };
    let top = num::bounded_pow(base.q(), d as u32, Q_ASSOCIATE_CAP, "q-associate degree q^deg(g)")?;
    let mut coeffs = vec![base.zero(); top as usize + 1];
    let mut qi = 1u64;
    for c in g.coeffs() {
        coeffs[qi as usize] = c.clone();
        qi *= base.q(); // final value is `top`, already bounds-checked
    }
    // overlapping powers cannot occur: q^i are distinct
    let mut out = Poly::zero();
    for (i, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            let mut v = vec![base.zero(); i + 1];
            v[i] = c.clone();
            out = poly::add(base, &out, &Poly::from_coeffs(v));
        }
    }
    Ok(out)
}

/// L_g mod f without materializing L_g: sum of g_i x^{q^i} reduced mod f.
pub fn lin_poly_mod(base: &FqCtx, g: &Poly, f: &Poly) -> Result<Poly> {
    if f.degree().is_none_or(|d| d == 0) {
        return Err(Error::InvalidArgument("modulus must have degree >= 1".into()));
    }
    let mut acc = Poly::zero();
    let mut xqi = poly::rem(base, &Poly::x(base), f)?;
    for (i, c) in g.coeffs().iter().enumerate() {
        if i > 0 {
            xqi = poly::pow_mod(base, &xqi, base.q(), f)?;
        }
        if !c.is_zero() {
            acc = poly::add(base, &acc, &poly::mul_scalar(base, &xqi, c));
        }
    }
    Ok(acc)
}

/// True when f divides the q-associate L_g.
pub fn divides_associate(base: &FqCtx, f: &Poly, g: &Poly) -> Result<bool> {
    Ok(lin_poly_mod(base, g, f)?.is_zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdMethod {
    DivisorStrip,
    Krylov,
    Structural,
}

impl OrdMethod {
    pub fn name(self) -> &'static str {
        match self {
            OrdMethod::DivisorStrip => "strip",
            OrdMethod::Krylov => "krylov",
            OrdMethod::Structural => "structural",
        }
    }
}

/// An F_q-Order value together with how it was computed and, when a second
/// algorithm confirmed it, which one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdResult {
    pub order: Poly,
    pub method: OrdMethod,
    pub cross_checked_by: Option<OrdMethod>,
}

impl OrdResult {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "order": text::render_poly(&self.order, 'x'),
            "method": self.method.name(),
        })
    }
}

/// Row-echelon accumulator over F_q that remembers how each inserted vector
/// was expressed in terms of the original iterates. Pivots are chosen as the
/// first nonzero coordinate and vectors are processed in insertion order,
/// so the computation is deterministic.
struct Echelon<'c> {
    base: &'c FqCtx,
    rows: Vec<EchRow>,
    inserted: usize,
}

struct EchRow {
    vec: Vec<FqElem>,
    combo: Vec<FqElem>,
    pivot: usize,
}

enum Insert {
    Independent,
    /// The new vector equals sum combo[i] * iterate_i.
    Dependent(Vec<FqElem>),
}

impl<'c> Echelon<'c> {
    fn new(base: &'c FqCtx) -> Echelon<'c> {
        Echelon { base, rows: Vec::new(), inserted: 0 }
    }

    /// Reduces v against the rows; combo accumulates the expression of the
    /// removed part in terms of original iterates.
    fn reduce(&self, v: &mut [FqElem], combo: &mut Vec<FqElem>) {
        for row in &self.rows {
            let c = v[row.pivot].clone();
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row.vec.iter()) {
                *x = self.base.sub(x, &self.base.mul(&c, y));
            }
            if combo.len() < row.combo.len() {
                combo.resize(row.combo.len(), self.base.zero());
            }
            for (x, y) in combo.iter_mut().zip(row.combo.iter()) {
                *x = self.base.add(x, &self.base.mul(&c, y));
            }
        }
    }

    /// Inserts the next iterate. On dependence, the returned combo expresses
    /// it as a combination of the previously inserted iterates.
    fn insert(&mut self, mut v: Vec<FqElem>) -> Insert {
        let mut combo = Vec::new();
        self.reduce(&mut v, &mut combo);
        let k = self.inserted;
        self.inserted += 1;
        match v.iter().position(|c| !c.is_zero()) {
            None => Insert::Dependent(combo),
            Some(pivot) => {
                let scale = self.base.inv(&v[pivot]).expect("nonzero pivot");
                for x in v.iter_mut() {
                    *x = self.base.mul(x, &scale);
                }
                // the stored row is scale * (iterate_k - sum combo[i] * iterate_i),
                // so its combo carries -scale * combo[i] and +scale at k
                let mut scaled_combo = vec![self.base.zero(); combo.len().max(k + 1)];
                for (i, c) in combo.iter().enumerate() {
                    scaled_combo[i] = self.base.neg(&self.base.mul(c, &scale));
                }
                scaled_combo[k] = scale;
                self.rows.push(EchRow { vec: v, combo: scaled_combo, pivot });
                Insert::Independent
            }
        }
    }

    /// Attempts to express target as a combination of the inserted iterates.
    fn try_express(&self, target: &[FqElem]) -> Option<Vec<FqElem>> {
        let mut v = target.to_vec();
        let mut combo = Vec::new();
        self.reduce(&mut v, &mut combo);
        if v.iter().all(|c| c.is_zero()) {
            Some(combo)
        } else {
            None
        }
    }
}

fn coords(ctx: &ExtCtx, a: &ExtElem) -> Vec<FqElem> {
    let n = ctx.n() as usize;
    (0..n).map(|i| a.residue().coeff(ctx.base(), i)).collect()
}

/// The combo expresses s_k in terms of s_0..s_{k-1}, so the monic
/// generator is x^k - sum combo[i] x^i.
fn generator_from_combo(base: &FqCtx, combo: &[FqElem], k: usize) -> Poly {
    let mut coeffs = vec![base.zero(); k + 1];
    for (i, c) in combo.iter().enumerate() {
        coeffs[i] = base.neg(c);
    }
    coeffs[k] = base.one();
    Poly::from_coeffs(coeffs)
}

/// F_q-Order of an extension element: the least monic g | x^n - 1 with
/// L_g(a) = 0. Primary algorithm: strip irreducible factors from x^n - 1
/// while annihilation persists. For q^n <= 4096 the Krylov first-dependence
/// search also runs and the two results are asserted equal.
pub fn fq_order_element(ctx: &ExtCtx, a: &ExtElem) -> OrdResult {
    let strip = fq_order_element_strip(ctx, a);
    let mut cross = None;
    if ctx.size() <= 4096 {
        let krylov = fq_order_element_krylov(ctx, a);
        assert_eq!(
            strip, krylov,
            "divisor-strip and Krylov F_q-Orders disagree for {}",
            a.residue()
        );
        cross = Some(OrdMethod::Krylov);
    }
    debug_assert!(lin_eval(ctx, &strip, a).is_zero());
    OrdResult { order: strip, method: OrdMethod::DivisorStrip, cross_checked_by: cross }
}

/// The strip algorithm alone (always available).
pub fn fq_order_element_strip(ctx: &ExtCtx, a: &ExtElem) -> Poly {
    let base = ctx.base();
    let mut e = ctx.x_pow_minus_one();
    for (g, mult) in &ctx.xn1_factorization().factors {
        for _ in 0..*mult {
            let (cand, r) = poly::divmod(base, &e, g).expect("factor divides");
            debug_assert!(r.is_zero());
            if lin_eval(ctx, &cand, a).is_zero() {
                e = cand;
            } else {
                break;
            }
        }
    }
    e
}

/// The Krylov first-dependence search alone.
pub fn fq_order_element_krylov(ctx: &ExtCtx, a: &ExtElem) -> Poly {
    let base = ctx.base();
    let mut ech = Echelon::new(base);
    let mut conj = a.clone();
    let mut k = 0usize;
    loop {
        match ech.insert(coords(ctx, &conj)) {
            Insert::Dependent(combo) => return generator_from_combo(base, &combo, k),
            Insert::Independent => {
                conj = ctx.frobenius(&conj, 1);
                k += 1;
                assert!(k <= ctx.n() as usize, "no dependence within n iterates");
            }
        }
    }
}

/// F_q-Order of a polynomial f with deg f >= 1: the least monic g with
/// f | L_g. Primary algorithm: Krylov first dependence among the Frobenius
/// iterates of x in F_q[x]/(f). A structural computation from the
/// factorization of f cross-checks the result whenever every irreducible
/// factor degree d keeps q^d within the counting bound.
pub fn fq_order_poly(base: &FqCtx, f: &Poly) -> Result<OrdResult> {
    match f.degree() {
        None => return Err(Error::InvalidArgument("F_q-Order of the zero polynomial".into())),
        Some(0) => return Err(Error::ConstantInput(text::render_poly(f, 'x'))),
        Some(_) => {}
    }
    let f = poly::monic(base, f);
    let krylov = fq_order_poly_krylov(base, &f)?;
    let mut cross = None;
    if let Some(structural) = fq_order_poly_structural(base, &f)? {
        assert_eq!(
            krylov, structural,
            "Krylov and structural F_q-Orders disagree for {f}"
        );
        cross = Some(OrdMethod::Structural);
    }
    debug_assert!(divides_associate(base, &f, &krylov)?);
    Ok(OrdResult { order: krylov, method: OrdMethod::Krylov, cross_checked_by: cross })
}

fn poly_coords(base: &FqCtx, r: &Poly, dim: usize) -> Vec<FqElem> {
    (0..dim).map(|i| r.coeff(base, i)).collect()
}

/// Krylov search in the residue ring F_q[x]/(f): iterates are
/// s_0 = x mod f, s_{i+1} = s_i^q mod f.
pub fn fq_order_poly_krylov(base: &FqCtx, f: &Poly) -> Result<Poly> {
    let dim = f.degree().unwrap();
    let mut ech = Echelon::new(base);
    let mut s = poly::rem(base, &Poly::x(base), f)?;
    let mut k = 0usize;
    loop {
        match ech.insert(poly_coords(base, &s, dim)) {
            Insert::Dependent(combo) => return Ok(generator_from_combo(base, &combo, k)),
            Insert::Independent => {
                s = poly::pow_mod(base, &s, base.q(), f)?;
                k += 1;
                assert!(k <= dim, "no dependence within deg f iterates");
            }
        }
    }
}

/// Structural F_q-Order from the factorization: for an irreducible g the
/// Order equals the Order of any root; for g^b it picks up a factor x^t
/// with t minimal such that q^t >= b (the q-associate of x*h is the q-th
/// power of the associate of h, so multiplicities scale by q per factor
/// of x); for coprime parts it is the lcm. Returns None when a factor's
/// root field exceeds the counting bound.
pub fn fq_order_poly_structural(base: &FqCtx, f: &Poly) -> Result<Option<Poly>> {
    let fz = poly::factor_poly(base, f, 0)?;
    let mut acc = Poly::one(base);
    for (g, b) in &fz.factors {
        let d = g.degree().unwrap() as u32;
        if num::bounded_pow(base.q(), d, num::MAX_COUNT, "q^deg in structural Order").is_err() {
            return Ok(None);
        }
        let ord_g = if *g == Poly::x(base) {
            // roots at 0 have Order 1
            Poly::one(base)
        } else {
            let ext = ExtCtx::new(base.clone(), d, Some(g.clone()))?;
            fq_order_element_strip(&ext, &ext.gen())
        };
        let mut part = ord_g;
        if *b > 1 {
            let mut t = 0u32;
            let mut qt = 1u64;
            while qt < *b as u64 {
                qt = qt
                    .checked_mul(base.q())
                    .ok_or_else(|| Error::Overflow("q^t in structural Order".into()))?;
                t += 1;
            }
            let mut xt = vec![base.zero(); t as usize + 1];
            xt[t as usize] = base.one();
            part = poly::mul(base, &part, &Poly::from_coeffs(xt));
        }
        acc = poly::lcm(base, &acc, &part);
    }
    Ok(Some(acc))
}

/// Result of the least-degree affine annihilator search for (f, a): the
/// least-degree h (monic-normalized) with L_h = a at the roots of f, i.e.
/// L_h(x) = a mod f, together with the product Ord(a) * h it reconstructs.
/// When no such h of degree <= deg f exists, `h` is None and
/// `searched_degree_bound` records how far the search went.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineAnnihilator {
    pub h: Option<Poly>,
    pub reconstructed_ord: Option<Poly>,
    pub searched_degree_bound: usize,
}

/// Finds the least-degree h with L_h(x) = a mod f, for a in the base field
/// and deg f >= 1. The solutions, when any exist, form a coset of the ideal
/// (Ord(f)), so the Frobenius-iterate spans stabilize exactly when the
/// search is complete. For a = 0 the least nonzero solution is Ord(f)
/// itself. In every solvable case Ord(f) = Ord(a) * h holds with Ord(a)
/// the element Order (x - 1 for nonzero a, 1 for a = 0); the product is
/// returned and asserted against `fq_order_poly`.
pub fn least_affine_annihilator(base: &FqCtx, f: &Poly, a: &FqElem) -> Result<AffineAnnihilator> {
    match f.degree() {
        None => return Err(Error::InvalidArgument("affine annihilator of the zero polynomial".into())),
        Some(0) => return Err(Error::ConstantInput(text::render_poly(f, 'x'))),
        Some(_) => {}
    }
    let f = poly::monic(base, &f.clone());
    let ord_f = fq_order_poly(base, &f)?.order;
    if a.is_zero() {
        // least nonzero solution of L_h = 0 mod f is the Order itself
        return Ok(AffineAnnihilator {
            h: Some(ord_f.clone()),
            reconstructed_ord: Some(ord_f),
            searched_degree_bound: 0,
        });
    }
    let dim = f.degree().unwrap();
    let target = poly_coords(base, &Poly::constant(a.clone()), dim);
    let mut ech = Echelon::new(base);
    let mut s = poly::rem(base, &Poly::x(base), &f)?;
    let mut d = 0usize;
    loop {
        match ech.insert(poly_coords(base, &s, dim)) {
            Insert::Dependent(_) => {
                // span stabilized without reaching the target
                return Ok(AffineAnnihilator {
                    h: None,
                    reconstructed_ord: None,
                    searched_degree_bound: d.saturating_sub(1),
                });
            }
            Insert::Independent => {
                if let Some(combo) = ech.try_express(&target) {
                    let h = Poly::from_coeffs(combo);
                    debug_assert_eq!(h.degree(), Some(d));
                    let h = poly::monic(base, &h);
                    // Ord(a) = x - 1 for nonzero a in the base field
                    let x_minus_1 = poly::x_pow_minus_one(base, 1);
                    let reconstructed = poly::mul(base, &x_minus_1, &h);
                    assert_eq!(
                        reconstructed, ord_f,
                        "affine reconstruction disagrees with the F_q-Order for {f}"
                    );
                    return Ok(AffineAnnihilator {
                        h: Some(h),
                        reconstructed_ord: Some(reconstructed),
                        searched_degree_bound: d,
                    });
                }
                s = poly::pow_mod(base, &s, base.q(), &f)?;
                d += 1;
                assert!(d <= dim, "no dependence within deg f iterates");
            }
        }
    }
}

/// Kernel and image of L_f on F_{q^n}, each sorted in canonical element
/// order. Requires f | x^n - 1. Fields up to 4096 elements are swept
/// exhaustively; larger ones go through a rank computation whose kernel and
/// image bases are expanded into full span enumerations (still capped by
/// the enumeration bound).
#[derive(Debug, Clone)]
pub struct KernelImage {
    pub kernel: Vec<ExtElem>,
    pub image: Vec<ExtElem>,
}

pub fn kernel_image(ctx: &ExtCtx, f: &Poly) -> Result<KernelImage> {
    let base = ctx.base();
    let f = poly::monic(base, f);
    let xn1 = ctx.x_pow_minus_one();
    if f.is_zero() || !poly::divides(base, &f, &xn1) {
        return Err(Error::NotADivisor {
            divisor: text::render_poly(&f, 'x'),
            dividend: text::render_poly(&xn1, 'x'),
        });
    }
    let deg_f = f.degree().unwrap();
    let n = ctx.n() as usize;
    let (mut kernel, mut image);
    if ctx.size() <= 4096 {
        kernel = Vec::new();
        let mut image_set = std::collections::BTreeSet::new();
        for a in ctx.elems()? {
            let v = lin_eval(ctx, &f, &a);
            if v.is_zero() {
                kernel.push(a);
            }
            image_set.insert(v);
        }
        image = image_set.into_iter().collect();
    } else {
        // rank path: columns of L_f on the residue basis
        let cols: Vec<Vec<FqElem>> = basis_images(ctx, &f);
        let (kernel_basis, image_basis) = nullspace_and_column_space(base, &cols, n);
        kernel = span(ctx, &kernel_basis)?;
        image = span(ctx, &image_basis)?;
        kernel.sort();
        image.sort();
    }
    // rank-nullity pin: |Ker| = q^{deg f}, |Im| = q^{n - deg f}
    let qk = num::bounded_pow(base.q(), deg_f as u32, num::MAX_ENUM, "kernel size")?;
    let qi = num::bounded_pow(base.q(), (n - deg_f) as u32, num::MAX_ENUM, "image size")?;
    assert_eq!(kernel.len() as u64, qk, "kernel size violates rank-nullity");
    assert_eq!(image.len() as u64, qi, "image size violates rank-nullity");
    Ok(KernelImage { kernel, image })
}

/// L_f applied to each residue basis monomial, as coordinate columns.
fn basis_images(ctx: &ExtCtx, f: &Poly) -> Vec<Vec<FqElem>> {
    let n = ctx.n() as usize;
    (0..n)
        .map(|j| {
            let mut v = vec![ctx.base().zero(); j + 1];
            v[j] = ctx.base().one();
            let bj = ctx.from_poly(&Poly::from_coeffs(v));
            coords(ctx, &lin_eval(ctx, f, &bj))
        })
        .collect()
}

/// Gaussian elimination returning a kernel basis (in coefficient vectors)
/// and an image basis (as column-space representatives).
fn nullspace_and_column_space(
    base: &FqCtx,
    cols: &[Vec<FqElem>],
    n: usize,
) -> (Vec<Vec<FqElem>>, Vec<Vec<FqElem>>) {
    // row-reduce the matrix whose columns are the images
    let mut mat: Vec<Vec<FqElem>> = (0..n)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank_row = 0usize;
    for col in 0..n {
        let Some(r) = (rank_row..n).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(rank_row, r);
        let inv = base.inv(&mat[rank_row][col]).unwrap();
        for c in 0..n {
            mat[rank_row][c] = base.mul(&mat[rank_row][c], &inv);
        }
        for rr in 0..n {
            if rr != rank_row && !mat[rr][col].is_zero() {
                let factor = mat[rr][col].clone();
                for c in 0..n {
                    let t = base.mul(&factor, &mat[rank_row][c]);
                    mat[rr][c] = base.sub(&mat[rr][c], &t);
                }
            }
        }
        pivot_cols.push(col);
        rank_row += 1;
    }
    // kernel basis: one vector per free column
    let mut kernel = Vec::new();
    for free in 0..n {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![base.zero(); n];
        v[free] = base.one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = base.neg(&mat[row][free]);
        }
        kernel.push(v);
    }
    // image basis: original columns at the pivot positions
    let image = pivot_cols.iter().map(|&c| cols[c].clone()).collect();
    (kernel, image)
}

/// Expands a list of coordinate-basis vectors into every F_q-combination.
fn span(ctx: &ExtCtx, basis: &[Vec<FqElem>]) -> Result<Vec<ExtElem>> {
    let base = ctx.base();
    let k = basis.len() as u32;
    let total = num::bounded_pow(base.q(), k, num::MAX_ENUM, "span size q^k")?;
    let mut out = Vec::with_capacity(total as usize);
    for mut idx in 0..total {
        let mut acc = vec![base.zero(); ctx.n() as usize];
        for b in basis {
            let c = base.elem_from_index(idx % base.q());
            idx /= base.q();
            if !c.is_zero() {
                for (x, y) in acc.iter_mut().zip(b.iter()) {
                    *x = base.add(x, &base.mul(&c, y));
                }
            }
        }
        out.push(ctx.from_poly(&Poly::from_coeffs(acc)));
    }
    Ok(out)
}

/// A polynomial of degree m is normal exactly when it is monic with
/// F_q-Order x^m - 1 (this forces irreducibility). For q^m <= 4096 the
/// root-based characterization is recomputed and asserted to agree.
pub fn is_normal_poly(base: &FqCtx, f: &Poly) -> Result<bool> {
    let m = match f.degree() {
        None => return Err(Error::InvalidArgument("normality of the zero polynomial".into())),
        Some(0) => return Err(Error::ConstantInput(text::render_poly(f, 'x'))),
        Some(m) => m as u32,
    };
    let verdict = f.is_monic() && {
        let ord = fq_order_poly(base, f)?.order;
        ord == poly::x_pow_minus_one(base, m)
    };
    if num::bounded_pow(base.q(), m, 4096, "root check bound").is_ok() && f.is_monic() {
        let root_based = poly::is_irreducible(base, f) && {
            let ext = ExtCtx::new(base.clone(), m, Some(f.clone()))?;
            fq_order_element(&ext, &ext.gen()).order == ext.x_pow_minus_one()
        };
        assert_eq!(
            verdict, root_based,
            "Order-based and root-based normality disagree for {f}"
        );
    }
    Ok(verdict)
}
