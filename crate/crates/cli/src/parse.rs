//! Argument grammars: complex scalars and sparse polynomial coefficient specs.

use num_complex::Complex64;
use polyconvex::HermitianPoly;

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| format!("not a finite number: {p:?}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected re or re,im, got {s:?}")),
    }
}

pub fn parse_positive(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        _ => Err(format!("expected a positive finite number, got {s:?}")),
    }
}

pub fn parse_finite(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("expected a finite number, got {s:?}")),
    }
}

/// Exponents `(m, n)` of `z^m z̄^n` for the named cubic terms.
fn tag_exponents(tag: &str) -> Option<(u32, u32)> {
    match tag {
        "z2zb" => Some((2, 1)),
        "zzb2" => Some((1, 2)),
        "zb3" => Some((0, 3)),
        _ => None,
    }
}

/// Comma-separated terms, each either `tag:value` with `tag` one of
/// `z2zb`, `zzb2`, `zb3`, or the generic `m,n:re,im` (four comma fields).
/// Repeated monomials add up.
pub fn parse_poly(spec: &str) -> Result<HermitianPoly, String> {
    let tokens: Vec<&str> = spec.split(',').map(str::trim).collect();
    let mut terms = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let tok = tokens[i];
        if let Some((tag, value)) = tok.split_once(':') {
            let exps = tag_exponents(tag).ok_or_else(|| format!("unknown term tag {tag:?}"))?;
            terms.push((exps, parse_complex(value)?));
            i += 1;
            continue;
        }
        let generic = tokens.get(i..i + 3).ok_or_else(|| format!("incomplete term starting at {tok:?}"))?;
        let m: u32 = generic[0].parse().map_err(|_| format!("bad z exponent {:?}", generic[0]))?;
        let (n, re) = generic[1].split_once(':').ok_or_else(|| format!("expected n:re, got {:?}", generic[1]))?;
        let n: u32 = n.parse().map_err(|_| format!("bad z̄ exponent {n:?}"))?;
        terms.push(((m, n), parse_complex(&format!("{re},{}", generic[2]))?));
        i += 3;
    }
    if terms.is_empty() {
        return Err("empty polynomial".into());
    }
    HermitianPoly::from_terms(terms).map_err(|e| e.to_string())
}
