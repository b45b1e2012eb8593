//! Text grammars for everything the command line passes around: lattice
//! sites, value lists, scan ranges, windows, rationals, and rational
//! functions. All of them are shell-friendly — no characters that need
//! quoting beyond what parentheses already demand.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use mixlab_core::{ExpVec, IntBox, RatFunc, Rational};

use crate::CliError;

/// Parses one site, e.g. `(0,-2)`. The coordinate count must match `dim`.
pub fn parse_site(text: &str, dim: usize) -> Result<ExpVec, CliError> {
    let t = text.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|rest| rest.strip_suffix(')'))
        .ok_or_else(|| CliError::input(format!("site `{t}` must look like (a,b)")))?;
    let coords = inner
        .split(',')
        .map(|c| {
            c.trim().parse::<i32>().map_err(|_| {
                CliError::input(format!("bad coordinate `{}` in site `{t}`", c.trim()))
            })
        })
        .collect::<Result<Vec<i32>, CliError>>()?;
    if coords.len() != dim {
        return Err(CliError::input(format!(
            "site `{t}` has {} coordinates, expected {dim}",
            coords.len()
        )));
    }
    ExpVec::new(coords).map_err(CliError::from)
}

/// Parses a semicolon-separated site list, e.g. `(0,0);(1,0);(0,1)`.
/// An empty string is the empty list.
pub fn parse_site_list(text: &str, dim: usize) -> Result<Vec<ExpVec>, CliError> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(';').map(|s| parse_site(s, dim)).collect()
}

/// Parses a comma-separated integer list, e.g. `0,1,-1`. Values are later
/// reduced into the field, so any machine integer is accepted here.
pub fn parse_value_list(text: &str) -> Result<Vec<i64>, CliError> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|v| {
            v.trim()
                .parse::<i64>()
                .map_err(|_| CliError::input(format!("bad value `{}` in list `{t}`", v.trim())))
        })
        .collect()
}

/// Parses an inclusive scan range `lo:hi`; a bare `n` means `n:n`.
pub fn parse_range(text: &str) -> Result<(u32, u32), CliError> {
    let t = text.trim();
    let bad = || CliError::input(format!("range `{t}` must look like lo:hi with integers"));
    let (lo, hi) = match t.split_once(':') {
        Some((a, b)) => (
            a.trim().parse::<u32>().map_err(|_| bad())?,
            b.trim().parse::<u32>().map_err(|_| bad())?,
        ),
        None => {
            let n = t.parse::<u32>().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(CliError::input(format!("range `{t}` runs backwards")));
    }
    Ok((lo, hi))
}

/// Parses a window box `lo:hi` where both corners are sites, e.g.
/// `(0,0):(2,2)`.
pub fn parse_window(text: &str, dim: usize) -> Result<IntBox, CliError> {
    let t = text.trim();
    let (lo, hi) = t
        .split_once(':')
        .ok_or_else(|| CliError::input(format!("window `{t}` must look like (a,b):(c,d)")))?;
    IntBox::new(parse_site(lo, dim)?, parse_site(hi, dim)?).map_err(CliError::from)
}

/// Parses one rational, `num` or `num/den`, in lowest or any terms.
pub fn parse_rational(text: &str) -> Result<Rational, CliError> {
    let t = text.trim();
    let (num_text, den_text) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let bad = |part: &str| CliError::input(format!("bad integer `{part}` in rational `{t}`"));
    let num = BigInt::from_str(num_text).map_err(|_| bad(num_text))?;
    let den = BigInt::from_str(den_text).map_err(|_| bad(den_text))?;
    if den.is_zero() {
        return Err(CliError::input(format!(
            "rational `{t}` has a zero denominator"
        )));
    }
    Ok(Rational::new(num, den))
}

/// Parses a comma-separated rational list, e.g. `2,3` or `1,1,-1/2`.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>, CliError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(CliError::input(
            "expected a nonempty rational list".to_string(),
        ));
    }
    t.split(',').map(parse_rational).collect()
}

/// Parses a comma-separated list of 1-based term indices, e.g. `2,3`.
pub fn parse_subset(text: &str) -> Result<Vec<usize>, CliError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(CliError::input(
            "expected a nonempty index list".to_string(),
        ));
    }
    t.split(',')
        .map(|v| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| CliError::input(format!("bad index `{}` in subset `{t}`", v.trim())))
        })
        .collect()
}

/// Parses a semicolon-separated list of rational functions of `t`, e.g.
/// `t;1+t` or `(1+t)/(t^2);t`.
pub fn parse_ratfunc_list(text: &str, modulus: u64) -> Result<Vec<RatFunc>, CliError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(CliError::input(
            "expected a nonempty function list".to_string(),
        ));
    }
    t.split(';')
        .map(|s| RatFunc::parse(s.trim(), modulus).map_err(CliError::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sites_round_trip_through_display() {
        let site = parse_site("(0,-2)", 2).unwrap();
        assert_eq!(site.to_string(), "(0,-2)");
        let list = parse_site_list(" (0,0) ; (1,0) ", 2).unwrap();
        assert_eq!(list.len(), 2);
        assert!(parse_site_list("", 2).unwrap().is_empty());
    }

    #[test]
    fn malformed_sites_are_rejected() {
        assert!(parse_site("(0,1", 2).is_err());
        assert!(parse_site("0,1", 2).is_err());
        assert!(parse_site("(0,1)", 3).is_err());
        assert!(parse_site("(a,1)", 2).is_err());
    }

    #[test]
    fn ranges_accept_both_forms() {
        assert_eq!(parse_range("1:8").unwrap(), (1, 8));
        assert_eq!(parse_range("5").unwrap(), (5, 5));
        assert!(parse_range("8:1").is_err());
        assert!(parse_range("1-8").is_err());
    }

    #[test]
    fn windows_split_on_the_corner_colon() {
        let w = parse_window("(0,0):(2,2)", 2).unwrap();
        assert_eq!(w.to_string(), "(0,0):(2,2)");
        assert!(parse_window("(0,0)", 2).is_err());
    }

    #[test]
    fn rationals_reject_zero_denominators_without_panicking() {
        assert_eq!(
            parse_rational("2/4").unwrap(),
            Rational::new(1.into(), 2.into())
        );
        assert_eq!(
            parse_rational("-3").unwrap(),
            Rational::new((-3).into(), 1.into())
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("one").is_err());
    }

    #[test]
    fn rational_lists_split_on_commas() {
        let list = parse_rational_list("2,3,-1/2").unwrap();
        assert_eq!(list.len(), 3);
        assert!(parse_rational_list("").is_err());
    }

    #[test]
    fn function_lists_split_on_semicolons() {
        let base = parse_ratfunc_list("t;1+t", 2).unwrap();
        assert_eq!(base.len(), 2);
        assert_eq!(base[1].to_string(), "t + 1");
        assert!(parse_ratfunc_list("t;;t", 2).is_err());
    }
}
