//! Text formats for parameters, points and RSK inputs.

use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::partitions::HalfInt;
use crate::rsk::{NonNegMatrix, Permutation, Word};
use crate::{Error, Rational, Result};

fn malformed(what: &str, s: &str) -> Error {
    Error::Parse(format!("cannot parse {what} from {s:?}"))
}

/// `p/q`, an integer, or a finite decimal such as `-0.25`, read exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(malformed("rational", s));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| malformed("rational", s))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| malformed("rational", s))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    parse_decimal(s).ok_or_else(|| malformed("rational", s))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || exp.unsigned_abs() > 400 {
        return None;
    }
    let digits = BigInt::from_str(&format!("0{int}{frac}")).ok()?;
    let scale = exp - frac.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    let mut v = Rational::from_integer(digits);
    let mut p = Rational::one();
    for _ in 0..scale.unsigned_abs() {
        p *= &ten;
    }
    if scale >= 0 {
        v *= p;
    } else {
        v /= p;
    }
    Some(if neg { -v } else { v })
}

fn parse_real(s: &str) -> Option<f64> {
    let v: f64 = s.trim().parse().ok()?;
    v.is_finite().then_some(v)
}

/// `a+bi`, `a-bi`, `a`, `bi` or `i`; either part may also be written `p/q`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(malformed("complex number", s));
    }
    let part = |p: &str| -> Option<f64> {
        parse_real(p).or_else(|| parse_rational(p).ok().map(|r| crate::measures::to_f64(&r)))
    };
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return part(&t).map(|re| Complex64::new(re, 0.0)).ok_or_else(|| malformed("complex number", s));
    };
    // Split at the last sign that is not part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        x => part(x),
    };
    match (part(re), im) {
        (Some(a), Some(b)) => Ok(Complex64::new(a, b)),
        _ => Err(malformed("complex number", s)),
    }
}

/// A point of `ℤ′` written `p/2` with `p` odd, or as a decimal ending in `.5`.
pub fn parse_half_integer(s: &str) -> Result<HalfInt> {
    let r = parse_rational(s)?;
    let twice = r * Rational::from_integer(BigInt::from(2));
    if !twice.is_integer() {
        return Err(malformed("half-integer", s));
    }
    let v: i64 = twice.to_integer().try_into().map_err(|_| malformed("half-integer", s))?;
    HalfInt::from_twice(v).map_err(|_| malformed("half-integer", s))
}

/// A real point written as a decimal or `p/q`.
pub fn parse_point(s: &str) -> Result<f64> {
    if let Some(v) = parse_real(s) {
        return Ok(v);
    }
    parse_rational(s).map(|r| crate::measures::to_f64(&r))
}

fn parse_list(s: &str, what: &str) -> Result<Vec<usize>> {
    let t = s.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<usize>().map_err(|_| malformed(what, s)))
        .collect()
}

/// Letters in `1..=k` separated by commas or spaces; `k` defaults to the largest letter.
pub fn parse_word(s: &str, alphabet: Option<usize>) -> Result<Word> {
    let letters = parse_list(s, "word")?;
    match alphabet {
        Some(k) => Word::new(k, letters),
        None => Word::from_letters(letters),
    }
}

/// One-line notation such as `3,1,2`.
pub fn parse_permutation(s: &str) -> Result<Permutation> {
    Permutation::new(parse_list(s, "permutation")?)
}

/// A nonnegative integer matrix as RFC 4180 CSV, one row per record.
pub fn parse_matrix_csv(s: &str) -> Result<NonNegMatrix> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(s.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let row = record
            .iter()
            .map(|f| f.trim().parse::<u64>().map_err(|_| malformed("matrix entry", f)))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(Error::Malformed("matrix rows have different lengths".into()));
    }
    NonNegMatrix::from_rows(&rows)
}

/// Writes `p/q` (or `p` for integers).
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Serde adapter storing a rational as a `p/q` string; integers are also accepted.
pub mod serde_rational {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use crate::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Text(String),
        Int(i64),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Text(t) => super::parse_rational(&t).map_err(de::Error::custom),
            Repr::Int(i) => Ok(Rational::from_integer(i.into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/2").unwrap(), q(1, 2));
        assert_eq!(parse_rational(" -6/4 ").unwrap(), q(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("-1.5e1").unwrap(), q(-15, 1));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        for bad in ["", "1/0", "a/b", "1.2.3", "-", "1/", "nan", "1e999"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn complexes() {
        assert_eq!(parse_complex("0.5+0.0i").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(parse_complex("1-2i").unwrap(), Complex64::new(1.0, -2.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("3").unwrap(), Complex64::new(3.0, 0.0));
        assert_eq!(parse_complex("1e-3+1e+2i").unwrap(), Complex64::new(1e-3, 1e2));
        assert_eq!(parse_complex("1/2+3/4i").unwrap(), Complex64::new(0.5, 0.75));
        for bad in ["", "i+", "1+2", "x+yi", "1++2i"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn half_integers() {
        assert_eq!(parse_half_integer("1/2").unwrap().twice(), 1);
        assert_eq!(parse_half_integer("-3/2").unwrap().twice(), -3);
        assert_eq!(parse_half_integer("2.5").unwrap().twice(), 5);
        for bad in ["1", "2/2", "1/3", "0"] {
            assert!(parse_half_integer(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn rsk_inputs() {
        let m = parse_matrix_csv("1,0\n0,1\n").unwrap();
        assert_eq!(m.to_rows(), vec![vec![1, 0], vec![0, 1]]);
        let m = parse_matrix_csv("\"2\", 3\r\n4,5").unwrap();
        assert_eq!(m.to_rows(), vec![vec![2, 3], vec![4, 5]]);
        assert!(parse_matrix_csv("1,2\n3").is_err());
        assert!(parse_matrix_csv("").is_err());
        assert!(parse_matrix_csv("-1,0").is_err());
        assert_eq!(parse_word("1 2,2", None).unwrap().letters(), &[1, 2, 2]);
        assert!(parse_word("1,4", Some(3)).is_err());
        assert!(parse_word("0", None).is_err());
        assert_eq!(parse_permutation("3,1,2").unwrap().images(), &[3, 1, 2]);
        assert!(parse_permutation("1,1").is_err());
        assert!(parse_permutation("1,x").is_err());
    }

    #[test]
    fn serde_roundtrip() {
        #[derive(serde::Serialize, serde::Deserialize, PartialEq, Debug)]
        struct W {
            #[serde(with = "serde_rational")]
            r: Rational,
        }
        let w = W { r: q(-5, 3) };
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"r":"-5/3"}"#);
        assert_eq!(serde_json::from_str::<W>(&s).unwrap(), w);
        assert_eq!(serde_json::from_str::<W>(r#"{"r":4}"#).unwrap().r, q(4, 1));
    }

    proptest! {
        #[test]
        fn prop_rational_roundtrip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = q(n, d);
            prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }

        #[test]
        fn prop_half_integer_roundtrip(k in -100_000i64..100_000) {
            let h = HalfInt::from_twice(2 * k + 1).unwrap();
            prop_assert_eq!(parse_half_integer(&h.to_string()).unwrap(), h);
        }

        #[test]
        fn prop_parsers_never_panic(s in ".{0,40}") {
            let _ = parse_rational(&s);
            let _ = parse_complex(&s);
            let _ = parse_half_integer(&s);
            let _ = parse_matrix_csv(&s);
            let _ = parse_word(&s, None);
            let _ = parse_permutation(&s);
        }
    }
}
