use num_complex::Complex64;

/// Parses `RE+IMi` / `RE-IMi`, each part an optionally signed decimal.
pub fn parse_xi(s: &str) -> Result<Complex64, String> {
    let body = s
        .strip_suffix('i')
        .ok_or_else(|| format!("'{s}': expected RE+IMi, e.g. 1+0i or -0.5+3i"))?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(|| format!("'{s}': missing sign between real and imaginary parts"))?;
    let (re, im) = body.split_at(split);
    let number = |part: &str| {
        if part.contains(char::is_whitespace) {
            return Err(format!("'{s}': spaces are not allowed"));
        }
        part.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("'{s}': '{part}' is not a finite number"))
    };
    Ok(Complex64::new(number(re)?, number(im)?))
}

/// A list of N values from [`parse_n_range`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NList(pub Vec<u64>);

pub fn parse_n_list(s: &str) -> Result<NList, String> {
    parse_n_range(s).map(NList)
}

/// `N`, `start:stop:xF` (geometric) or `start:stop:+D` (arithmetic), stop inclusive.
pub fn parse_n_range(s: &str) -> Result<Vec<u64>, String> {
    let int = |part: &str| {
        part.parse::<u64>()
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| format!("'{s}': '{part}' is not a positive integer"))
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [n] => Ok(vec![int(n)?]),
        [start, stop, step] => {
            let (start, stop) = (int(start)?, int(stop)?);
            if stop < start {
                return Err(format!("'{s}': stop is below start"));
            }
            let mut out = Vec::new();
            if let Some(f) = step.strip_prefix('x') {
                let f = int(f)?;
                if f < 2 {
                    return Err(format!("'{s}': geometric factor must be at least 2"));
                }
                let mut n = start;
                while n <= stop {
                    out.push(n);
                    n = n.saturating_mul(f);
                }
            } else if let Some(d) = step.strip_prefix('+') {
                let d = int(d)?;
                out.extend((start..=stop).step_by(d as usize));
            } else {
                return Err(format!("'{s}': step must look like x2 or +100"));
            }
            Ok(out)
        }
        _ => Err(format!("'{s}': expected N or start:stop:step")),
    }
}

pub fn format_xi(xi: Complex64) -> String {
    let sign = if xi.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", xi.re, sign, xi.im.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xi_forms() {
        assert_eq!(parse_xi("1+0i").unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(parse_xi("-0.5+3i").unwrap(), Complex64::new(-0.5, 3.0));
        assert_eq!(parse_xi("0-2.5i").unwrap(), Complex64::new(0.0, -2.5));
        assert_eq!(parse_xi("1e-3+2E+1i").unwrap(), Complex64::new(1e-3, 20.0));
        for bad in ["1+*i", "1+2", "i", "1", "1 + 2i", "+i", "nan+1i"] {
            assert!(parse_xi(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn n_ranges() {
        assert_eq!(parse_n_range("20").unwrap(), vec![20]);
        assert_eq!(parse_n_range("100:800:x2").unwrap(), vec![100, 200, 400, 800]);
        assert_eq!(parse_n_range("100:350:+100").unwrap(), vec![100, 200, 300]);
        for bad in ["0", "5:1:x2", "1:5:x1", "1:5:*2", "1:5", "a"] {
            assert!(parse_n_range(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn xi_round_trip() {
        for s in ["1+0i", "-0.5+3i", "0-2.5i"] {
            assert_eq!(format_xi(parse_xi(s).unwrap()), s);
        }
    }
}
