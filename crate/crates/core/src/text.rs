//! Parsing and rendering for the polynomial and field-spec grammars.
//!
//! The polynomial grammar is
//!
//! ```text
//! poly  := term ('+' term)*
//! term  := coeff | coeff '*'? var ('^' int)? | var ('^' int)?
//! coeff := integer | '(' y-poly ')'
//! ```
//!
//! with `var` fixed per call site ('x' for polynomials and extension
//! elements, 'y' for base-field moduli and coefficients). Integer
//! coefficients reduce mod p; parenthesized coefficients must already have
//! degree below the base-field degree m. The alternative exact form
//! `coeffs:[c0,c1,...]` lists canonical element indices ascending from the
//! constant term. Renderers always emit the human grammar: terms from the
//! highest degree down, explicit `+` separators, `*` between a written
//! coefficient and the variable, no spaces, and no minus signs (coefficients
//! appear as canonical non-negative residues).
//!
//! Parse errors carry the byte offset of the offending character.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, FqCtx, FqElem};
use crate::poly::Poly;

/// Degrees and exponents larger than this are rejected outright.
const MAX_EXPONENT: u64 = 1 << 20;

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
    offset: usize,
}

impl<'a> Scanner<'a> {
    fn new(s: &'a str, offset: usize) -> Scanner<'a> {
        Scanner { bytes: s.as_bytes(), pos: 0, offset }
    }

    fn at(&self) -> usize {
        self.offset + self.pos
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(err(self.at(), format!("expected '{}'", b as char)))
        }
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(self.at(), "expected a number"));
        }
        let span = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        span.parse::<u64>()
            .map_err(|_| err(self.offset + start, "number too large"))
    }

    fn done(&mut self) -> bool {
        self.peek().is_none()
    }
}

/// Parses a polynomial over `ctx` in the variable `var` ('x' or 'y'),
/// accepting both the human grammar and the `coeffs:[...]` exact form.
pub fn parse_poly(ctx: &FqCtx, input: &str, var: char) -> Result<Poly> {
    let trimmed = input.trim_start();
    let offset = input.len() - trimmed.len();
    if let Some(rest) = trimmed.strip_prefix("coeffs:") {
        return parse_coeff_list(ctx, rest, offset + "coeffs:".len());
    }
    let mut sc = Scanner::new(input, 0);
    if sc.done() {
        return Err(err(sc.at(), "empty polynomial"));
    }
    let mut acc: Vec<FqElem> = Vec::new();
    loop {
        let (coeff, power) = parse_term(ctx, &mut sc, var)?;
        if power as u64 > MAX_EXPONENT {
            return Err(err(sc.at(), "exponent too large"));
        }
        if acc.len() <= power {
            acc.resize(power + 1, ctx.zero());
        }
        acc[power] = ctx.add(&acc[power], &coeff);
        if sc.done() {
            break;
        }
        sc.expect(b'+')?;
    }
    Ok(Poly::from_coeffs(acc))
}

fn parse_term(ctx: &FqCtx, sc: &mut Scanner, var: char) -> Result<(FqElem, usize)> {
    let Some(first) = sc.peek() else {
        return Err(err(sc.at(), "expected a term"));
    };
    let coeff = if first.is_ascii_digit() {
        Some(ctx.scalar(sc.integer()?))
    } else if first == b'(' {
        Some(parse_paren_coeff(ctx, sc)?)
    } else {
        None
    };
    match coeff {
        Some(c) => {
            // optional '*' and variable part
            let starred = sc.eat(b'*');
            match sc.peek() {
                Some(b) if b as char == var => {
                    sc.bump();
                    Ok((c, parse_exponent(sc)?))
                }
                _ if starred => Err(err(sc.at(), format!("expected '{var}' after '*'"))),
                _ => Ok((c, 0)),
            }
        }
        None => {
            let pos = sc.at();
            let b = sc.bump().unwrap();
            if b as char == var {
                Ok((ctx.one(), parse_exponent(sc)?))
            } else {
                Err(err(pos, format!("expected '{}', a number, or '(' ", var)))
            }
        }
    }
}

fn parse_exponent(sc: &mut Scanner) -> Result<usize> {
    if sc.eat(b'^') {
        let pos = sc.at();
        let e = sc.integer()?;
        if e > MAX_EXPONENT {
            return Err(err(pos, "exponent too large"));
        }
        Ok(e as usize)
    } else {
        Ok(1)
    }
}

/// A parenthesized coefficient: a polynomial in y over the prime subfield,
/// reduced already (degree < m required).
fn parse_paren_coeff(ctx: &FqCtx, sc: &mut Scanner) -> Result<FqElem> {
    let open = sc.at();
    sc.expect(b'(')?;
    // scan to the matching ')'
    let start = sc.pos;
    let mut depth = 1;
    while depth > 0 {
        match sc.bytes.get(sc.pos) {
            Some(b'(') => depth += 1,
            Some(b')') => depth -= 1,
            Some(_) => {}
            None => return Err(err(sc.offset + sc.pos, "unclosed '('")),
        }
        sc.pos += 1;
    }
    let inner = std::str::from_utf8(&sc.bytes[start..sc.pos - 1]).unwrap();
    let prime = ctx.prime_subfield();
    let inner_poly = parse_poly(&prime, inner, 'y')
        .map_err(|e| reoffset(e, sc.offset + start))?;
    let deg_ok = inner_poly
        .degree()
        .is_none_or(|d| d < ctx.m() as usize);
    if !deg_ok {
        return Err(err(open, format!(
            "coefficient has degree >= base field degree {}",
            ctx.m()
        )));
    }
    let raw: Vec<u64> = inner_poly.coeffs().iter().map(|c| c.scalar_part()).collect();
    ctx.from_coeffs(&raw)
}

fn reoffset(e: Error, offset: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + offset, msg },
        other => other,
    }
}

fn parse_coeff_list(ctx: &FqCtx, rest: &str, offset: usize) -> Result<Poly> {
    let mut sc = Scanner::new(rest, offset);
    sc.expect(b'[')?;
    let mut coeffs = Vec::new();
    if !sc.eat(b']') {
        loop {
            let pos = sc.at();
            let idx = sc.integer()?;
            if idx >= ctx.q() {
                return Err(err(pos, format!("element index {idx} out of range for q = {}", ctx.q())));
            }
            coeffs.push(ctx.elem_from_index(idx));
            if sc.eat(b']') {
                break;
            }
            sc.expect(b',')?;
        }
    }
    if !sc.done() {
        return Err(err(sc.at(), "trailing input after ']'"));
    }
    Ok(Poly::from_coeffs(coeffs))
}

/// Renders an element of the base field: an integer for prime fields, a
/// polynomial in y otherwise (unparenthesized).
pub fn render_fq(e: &FqElem) -> String {
    if e.coeffs().len() == 1 {
        return e.coeffs()[0].to_string();
    }
    render_scalar_terms(e.coeffs(), 'y')
}

fn render_scalar_terms(coeffs: &[u64], var: char) -> String {
    let mut parts = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        parts.push(match (i, c) {
            (0, _) => c.to_string(),
            (1, 1) => var.to_string(),
            (1, _) => format!("{c}*{var}"),
            (_, 1) => format!("{var}^{i}"),
            (_, _) => format!("{c}*{var}^{i}"),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

/// Renders a polynomial in the given variable, highest degree first.
/// Coefficients outside the prime subfield appear parenthesized.
pub fn render_poly(f: &Poly, var: char) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (i, c) in f.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let coeff = if c.is_scalar() {
            let v = c.scalar_part();
            if v == 1 && i > 0 {
                None
            } else {
                Some(v.to_string())
            }
        } else {
            Some(format!("({})", render_fq(c)))
        };
        parts.push(match (i, coeff) {
            (0, Some(s)) => s,
            (0, None) => unreachable!(),
            (1, None) => var.to_string(),
            (1, Some(s)) => format!("{s}*{var}"),
            (_, None) => format!("{var}^{i}"),
            (_, Some(s)) => format!("{s}*{var}^{i}"),
        });
    }
    parts.join("+")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_poly(self, 'x'))
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_fq(self))
    }
}

/// Parses a base-field spec: `p`, `p^m`, or either followed by
/// `:modulus` with the modulus a monic polynomial in y over F_p.
pub fn parse_field_spec(input: &str) -> Result<FieldSpec> {
    let (head, modulus_part) = match input.find(':') {
        Some(i) => (&input[..i], Some((&input[i + 1..], i + 1))),
        None => (input, None),
    };
    let mut sc = Scanner::new(head, 0);
    let p = sc.integer()?;
    let m = if sc.eat(b'^') {
        let pos = sc.at();
        let m = sc.integer()?;
        u32::try_from(m).map_err(|_| err(pos, "extension degree too large"))?
    } else {
        1
    };
    if !sc.done() {
        return Err(err(sc.at(), "unexpected input in field spec"));
    }
    let base_modulus = match modulus_part {
        None => None,
        Some((text, offset)) => {
            if text.trim().is_empty() {
                return Err(err(offset, "empty modulus"));
            }
            let prime = FqCtx::prime(p)?;
            Some(parse_poly(&prime, text, 'y').map_err(|e| reoffset(e, offset))?)
        }
    };
    Ok(FieldSpec { p, m, base_modulus })
}

/// Parses the extension part `n` or `n/modulus`, with the modulus a monic
/// polynomial in x over the base field.
pub fn parse_ext_part(base: &FqCtx, input: &str) -> Result<(u32, Option<Poly>)> {
    let (head, mod_part) = match input.find('/') {
        Some(i) => (&input[..i], Some((&input[i + 1..], i + 1))),
        None => (input, None),
    };
    let mut sc = Scanner::new(head, 0);
    let pos = sc.at();
    let n = sc.integer()?;
    let n = u32::try_from(n).map_err(|_| err(pos, "extension degree too large"))?;
    if !sc.done() {
        return Err(err(sc.at(), "unexpected input in extension spec"));
    }
    let modulus = match mod_part {
        None => None,
        Some((text, offset)) => {
            if text.trim().is_empty() {
                return Err(err(offset, "empty modulus"));
            }
            Some(parse_poly(base, text, 'x').map_err(|e| reoffset(e, offset))?)
        }
    };
    Ok((n, modulus))
}

/// Parses a combined extension spec `p:n`, `p^m:n`, or either with a
/// trailing `/modulus` over the base field. The base field uses its default
/// modulus in this form.
pub fn parse_ext_spec(input: &str) -> Result<(FieldSpec, u32, Option<Poly>)> {
    let Some(colon) = input.find(':') else {
        return Err(err(input.len(), "expected ':' separating field and extension degree"));
    };
    let spec = parse_field_spec(&input[..colon])?;
    let base = FqCtx::new(&spec)?;
    let (n, modulus) =
        parse_ext_part(&base, &input[colon + 1..]).map_err(|e| reoffset(e, colon + 1))?;
    Ok((spec, n, modulus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use proptest::prelude::*;

    fn f5() -> FqCtx {
        FqCtx::prime(5).unwrap()
    }

    fn f9() -> FqCtx {
        FqCtx::new(&FieldSpec::new(3, 2)).unwrap()
    }

    #[test]
    fn parse_simple_forms() {
        let ctx = f5();
        let f = parse_poly(&ctx, "x^2+2*x+1", 'x').unwrap();
        assert_eq!(render_poly(&f, 'x'), "x^2+2*x+1");
        // '*' is optional, integers reduce mod p, repeated powers accumulate
        assert_eq!(parse_poly(&ctx, "2x", 'x').unwrap(), parse_poly(&ctx, "2*x", 'x').unwrap());
        assert_eq!(parse_poly(&ctx, "7", 'x').unwrap(), parse_poly(&ctx, "2", 'x').unwrap());
        assert_eq!(parse_poly(&ctx, "x+x", 'x').unwrap(), parse_poly(&ctx, "2x", 'x').unwrap());
        assert_eq!(parse_poly(&ctx, "x^0", 'x').unwrap(), parse_poly(&ctx, "1", 'x').unwrap());
        assert_eq!(parse_poly(&ctx, "0", 'x').unwrap(), Poly::zero());
        assert_eq!(parse_poly(&ctx, " x + 4 ", 'x').unwrap().to_string(), "x+4");
    }

    #[test]
    fn parse_extension_coefficients() {
        let ctx = f9();
        let f = parse_poly(&ctx, "(y+2)*x^2+x+1", 'x').unwrap();
        assert_eq!(render_poly(&f, 'x'), "(y+2)*x^2+x+1");
        assert_eq!(f.coeffs()[2], ctx.from_coeffs(&[2, 1]).unwrap());
        // scalar coefficients of extension fields render unparenthesized
        let g = parse_poly(&ctx, "2*x+(y)", 'x').unwrap();
        assert_eq!(render_poly(&g, 'x'), "2*x+(y)");
    }

    #[test]
    fn parse_coeff_list_form() {
        let ctx = f5();
        let f = parse_poly(&ctx, "coeffs:[1,0,2]", 'x').unwrap();
        assert_eq!(render_poly(&f, 'x'), "2*x^2+1");
        let ctx9 = f9();
        // index 5 = (1,2) = y*2+... index: c0*3 + c1 = 5 -> c0=1, c1=2 -> 1+2y
        let g = parse_poly(&ctx9, "coeffs:[5]", 'x').unwrap();
        assert_eq!(render_poly(&g, 'x'), "(2*y+1)");
        assert!(parse_poly(&ctx, "coeffs:[9]", 'x').is_err());
        assert_eq!(parse_poly(&ctx, "coeffs:[]", 'x').unwrap(), Poly::zero());
    }

    #[test]
    fn parse_errors_have_positions() {
        let ctx = f5();
        match parse_poly(&ctx, "x^2+-1", 'x').unwrap_err() {
            Error::Parse { pos, .. } => assert_eq!(pos, 4),
            other => panic!("unexpected error {other:?}"),
        }
        match parse_poly(&ctx, "x^2+y", 'x').unwrap_err() {
            Error::Parse { pos, .. } => assert_eq!(pos, 4),
            other => panic!("unexpected error {other:?}"),
        }
        match parse_poly(&ctx, "(y+1)*x", 'x').unwrap_err() {
            // prime field: y+1 has degree 1 >= m = 1
            Error::Parse { pos, .. } => assert_eq!(pos, 0),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(parse_poly(&ctx, "", 'x').is_err());
        assert!(parse_poly(&ctx, "x^99999999", 'x').is_err());
        assert!(parse_poly(&ctx, "(y+1", 'x').is_err());
    }

    #[test]
    fn field_spec_forms() {
        let s = parse_field_spec("5").unwrap();
        assert_eq!((s.p, s.m), (5, 1));
        assert!(s.base_modulus.is_none());
        let s = parse_field_spec("3^2").unwrap();
        assert_eq!((s.p, s.m), (3, 2));
        let s = parse_field_spec("3^2:y^2+1").unwrap();
        assert_eq!(render_poly(&s.base_modulus.unwrap(), 'y'), "y^2+1");
        assert!(parse_field_spec("3^2:").is_err());
        assert!(parse_field_spec("abc").is_err());
        // non-prime p surfaces from the modulus parse path as NotPrime
        assert!(matches!(parse_field_spec("4:y+1").unwrap_err(), Error::NotPrime(4)));
    }

    #[test]
    fn ext_spec_forms() {
        let base = f5();
        assert_eq!(parse_ext_part(&base, "2").unwrap(), (2, None));
        let (n, m) = parse_ext_part(&base, "2/x^2+2").unwrap();
        assert_eq!(n, 2);
        assert_eq!(render_poly(&m.unwrap(), 'x'), "x^2+2");
        let (spec, n, modulus) = parse_ext_spec("2^2:3").unwrap();
        assert_eq!((spec.p, spec.m, n), (2, 2, 3));
        assert!(modulus.is_none());
        let (spec, n, modulus) = parse_ext_spec("5:2/x^2+3").unwrap();
        assert_eq!((spec.p, spec.m, n), (5, 1, 2));
        assert_eq!(render_poly(&modulus.unwrap(), 'x'), "x^2+3");
        assert!(parse_ext_spec("5").is_err());
    }

    proptest! {
        /// Rendering then parsing is the identity on polynomials over
        /// prime and extension base fields.
        #[test]
        fn render_parse_roundtrip(seed in 0u64..5000) {
            for ctx in [FqCtx::prime(2).unwrap(), f5(), f9()] {
                let q = ctx.q();
                let mut s = seed;
                let mut coeffs = Vec::new();
                for _ in 0..(seed % 7) {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    coeffs.push(ctx.elem_from_index((s >> 33) % q));
                }
                let f = Poly::from_coeffs(coeffs);
                let text = render_poly(&f, 'x');
                let back = parse_poly(&ctx, &text, 'x').unwrap();
                prop_assert_eq!(&back, &f, "roundtrip failed for {}", text);
            }
        }
    }
}
