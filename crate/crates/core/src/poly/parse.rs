//! Text forms for polynomials: `"x^3 - x + 1"` and `"[1, -1, 0, 1]"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad coefficient {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Parse to rational coefficients, lowest degree first, trailing zeros trimmed.
pub fn parse_rational_poly(text: &str, var: char) -> Result<Vec<BigRational>> {
    let t = text.trim();
    let mut coeffs = if let Some(inner) = t.strip_prefix('[') {
        let inner = inner
            .strip_suffix(']')
            .ok_or_else(|| Error::Parse(format!("unterminated list {t:?}")))?;
        if inner.trim().is_empty() {
            vec![]
        } else {
            inner.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?
        }
    } else {
        parse_sum(t, var)?
    };
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    Ok(coeffs)
}

fn parse_sum(text: &str, var: char) -> Result<Vec<BigRational>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    // split into signed terms
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut sign: Option<bool> = None;
    let mut prev: Option<char> = None;
    for ch in s.chars() {
        // a sign directly after '^', '/' or '*' belongs to the number
        let binds = matches!(prev, Some('^') | Some('/') | Some('*'));
        if (ch == '+' || ch == '-') && !binds {
            if !cur.is_empty() {
                terms.push((sign.take().unwrap_or(false), std::mem::take(&mut cur)));
            } else if sign.is_some() {
                return Err(Error::Parse(format!("double sign in {text:?}")));
            }
            sign = Some(ch == '-');
        } else {
            cur.push(ch);
        }
        prev = Some(ch);
    }
    if cur.is_empty() {
        return Err(Error::Parse(format!("dangling sign in {text:?}")));
    }
    terms.push((sign.unwrap_or(false), cur));

    let mut out: Vec<BigRational> = Vec::new();
    for (neg, term) in terms {
        let (c, e) = parse_term(&term, var)?;
        if out.len() <= e {
            out.resize(e + 1, BigRational::zero());
        }
        out[e] += if neg { -c } else { c };
    }
    Ok(out)
}

fn parse_term(term: &str, var: char) -> Result<(BigRational, usize)> {
    let bad = || Error::Parse(format!("bad term {term:?}"));
    match term.find(var) {
        None => {
            if term.chars().any(|c| c.is_alphabetic()) {
                return Err(Error::Parse(format!("unknown symbol in {term:?} (expected variable {var:?})")));
            }
            Ok((parse_rational(term)?, 0))
        }
        Some(pos) => {
            let coef = term[..pos].trim_end_matches('*');
            let c = if coef.is_empty() { BigRational::one() } else { parse_rational(coef)? };
            let rest = &term[pos + var.len_utf8()..];
            let e = if rest.is_empty() {
                1
            } else {
                let exp = rest.strip_prefix('^').ok_or_else(bad)?;
                exp.parse::<usize>().map_err(|_| bad())?
            };
            Ok((c, e))
        }
    }
}

/// Render highest degree first, e.g. `x^3 - x + 1` or `1/2*a^2 + 3`.
pub fn write_poly(coeffs: &[BigRational], var: char) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let coef = if a.is_integer() { a.to_integer().to_string() } else { format!("{}/{}", a.numer(), a.denom()) };
        match i {
            0 => out.push_str(&coef),
            _ => {
                if !a.is_one() {
                    out.push_str(&coef);
                    if !a.is_integer() {
                        out.push('*');
                    }
                }
                out.push(var);
                if i > 1 {
                    out.push('^');
                    out.push_str(&i.to_string());
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn forms_agree() {
        let a = parse_rational_poly("x^3 - x + 1", 'x').unwrap();
        let b = parse_rational_poly("[1, -1, 0, 1]", 'x').unwrap();
        assert_eq!(a, b);
        let c = parse_rational_poly("-x + x^3 + 1", 'x').unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn rational_and_star() {
        let a = parse_rational_poly("1/2*a^2 - 3*a + 5/3", 'a').unwrap();
        assert_eq!(a, vec![q(5, 3), q(-3, 1), q(1, 2)]);
        let b = parse_rational_poly("1/2a^2-3a+5/3", 'a').unwrap();
        assert_eq!(a, b);
        assert_eq!(write_poly(&a, 'a'), "1/2*a^2 - 3a + 5/3");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational_poly("x^2 + y", 'x').is_err());
        assert!(parse_rational_poly("x^", 'x').is_err());
        assert!(parse_rational_poly("", 'x').is_err());
        assert!(parse_rational_poly("x +", 'x').is_err());
        assert!(parse_rational_poly("[1, 2", 'x').is_err());
        assert!(parse_rational_poly("x + - 1", 'x').is_err());
    }

    #[test]
    fn constants_and_leading_minus() {
        assert_eq!(parse_rational_poly("-5", 'a').unwrap(), vec![q(-5, 1)]);
        assert_eq!(parse_rational_poly("-a", 'a').unwrap(), vec![q(0, 1), q(-1, 1)]);
        assert_eq!(write_poly(&[q(-5, 1)], 'a'), "-5");
        assert_eq!(parse_rational_poly("0", 'a').unwrap(), vec![]);
    }
}
