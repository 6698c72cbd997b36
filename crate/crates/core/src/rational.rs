//! Exact rationals and their `"p/q"` text form.

use num::rational::{BigRational, Ratio};
use num::{BigInt, Signed};
use serde::Serializer;

use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

pub fn q(p: i64, d: i64) -> Q {
    Q::new(p, d)
}

/// `"p/q"`, always with an explicit denominator.
pub fn fmt_q(r: &Q) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn fmt_big(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Q) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.088"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let bad = || Error::InvalidParameter(format!("not a rational number: {s:?}"));
    let s = s.trim();
    if let Some((p, d)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Q::new(p, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if (int.is_empty() && frac.is_empty())
        || !(int.chars().chain(frac.chars())).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    if frac.len() > 15 {
        return Err(bad());
    }
    let scale = 10i64.pow(frac.len() as u32);
    let int_part: i64 = if int.is_empty() {
        0
    } else {
        int.parse().map_err(|_| bad())?
    };
    let frac_part: i64 = if frac.is_empty() {
        0
    } else {
        frac.parse().map_err(|_| bad())?
    };
    let value = int_part
        .checked_mul(scale)
        .and_then(|x| x.checked_add(frac_part))
        .ok_or_else(bad)?;
    Ok(Q::new(if neg { -value } else { value }, scale))
}

/// Exact integer value of a big rational, if it is one.
pub fn as_integer(r: &BigRational) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

pub fn is_positive_integer(r: &BigRational) -> bool {
    r.is_integer() && r.is_positive()
}

pub fn ser_q<S: Serializer>(r: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(r))
}

pub fn ser_opt_q<S: Serializer>(r: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&fmt_q(r)),
        None => s.serialize_none(),
    }
}

pub fn ser_vec_q<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fmt_q))
}

pub fn ser_big<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_big(r))
}
