//! Parsing of complex scalars and vectors from flag values.
//!
//! Accepted forms: `0.5`, `-1.2e-3`, `0.5+0.25i`, `0.5-0.25i`, `0.3i`,
//! `i`, `-i`. Vectors are comma-separated; the empty string is the empty
//! vector. The CLI's own complex output format parses back.

use hartogs_core::C64;

pub fn parse_complex(s: &str) -> Result<C64, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    if let Some(body) = t.strip_suffix(['i', 'I']) {
        // find the split between real and imaginary parts: the last +/-
        // that is not leading and not an exponent sign
        let bytes = body.as_bytes();
        let mut split = None;
        for (idx, b) in bytes.iter().enumerate().skip(1) {
            if (*b == b'+' || *b == b'-')
                && !matches!(bytes[idx - 1], b'e' | b'E')
            {
                split = Some(idx);
            }
        }
        match split {
            Some(idx) => {
                let re: f64 = body[..idx]
                    .parse()
                    .map_err(|_| format!("bad real part in {t:?}"))?;
                let imag_str = &body[idx..];
                let im: f64 = match imag_str {
                    "+" => 1.0,
                    "-" => -1.0,
                    _ => imag_str.parse().map_err(|_| format!("bad imaginary part in {t:?}"))?,
                };
                Ok(C64::new(re, im))
            }
            None => {
                let im: f64 = match body {
                    "" => 1.0,
                    "-" => -1.0,
                    "+" => 1.0,
                    _ => body.parse().map_err(|_| format!("bad imaginary part in {t:?}"))?,
                };
                Ok(C64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = t.parse().map_err(|_| format!("bad complex literal {t:?}"))?;
        Ok(C64::new(re, 0.0))
    }
}

pub fn parse_complex_vec(s: &str) -> Result<Vec<C64>, String> {
    let t = s.trim();
    if t.is_empty() {
        return Ok(vec![]);
    }
    t.split(',').map(parse_complex).collect()
}

pub fn parse_f64_vec(s: &str) -> Result<Vec<f64>, String> {
    let t = s.trim();
    if t.is_empty() {
        return Ok(vec![]);
    }
    t.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad number {p:?}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_forms() {
        assert_eq!(parse_complex("0.5").unwrap(), C64::new(0.5, 0.0));
        assert_eq!(parse_complex("-1.25e-3").unwrap(), C64::new(-0.00125, 0.0));
        assert_eq!(parse_complex("0.5+0.25i").unwrap(), C64::new(0.5, 0.25));
        assert_eq!(parse_complex("0.5-0.25i").unwrap(), C64::new(0.5, -0.25));
        assert_eq!(parse_complex("0.3i").unwrap(), C64::new(0.0, 0.3));
        assert_eq!(parse_complex("i").unwrap(), C64::new(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert!(parse_complex("nonsense").is_err());
    }

    #[test]
    fn exponent_signs_do_not_split() {
        assert_eq!(parse_complex("1e-2+3e-4i").unwrap(), C64::new(0.01, 0.0003));
    }

    #[test]
    fn own_output_format_round_trips() {
        let v = C64::new(2.0, -0.5);
        let s = crate::report::fmt_complex(v);
        assert_eq!(parse_complex(&s).unwrap(), v);
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_complex_vec("").unwrap(), vec![]);
        assert_eq!(
            parse_complex_vec("0.1,0.2+0.1i").unwrap(),
            vec![C64::new(0.1, 0.0), C64::new(0.2, 0.1)]
        );
    }
}
