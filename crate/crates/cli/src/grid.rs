//! Axis specifications for sweeps.
//!
//! An axis is a comma-separated list of items; each item is a single value,
//! an inclusive range `a:b` (integers only), a stepped range `a:b:step`, or
//! `log:a:b:count` for `count` logarithmically spaced points. A range with
//! `a > b` is empty.

use anyhow::{anyhow, bail, Result};

fn parse<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse::<T>()
        .map_err(|_| anyhow!("cannot parse '{s}' as {what}"))
}

fn log_points(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > 0.0) {
        bail!("log spacing needs positive endpoints, got {lo} and {hi}");
    }
    if count == 0 || lo > hi {
        return Ok(Vec::new());
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..count)
        .map(|i| {
            if i == count - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect())
}

/// Parses an integer axis; the result is sorted and free of duplicates.
pub fn parse_int_axis(spec: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(parse::<usize>(v, "an integer")?),
            ["log", a, b, c] => {
                let (a, b) = (parse::<usize>(a, "an integer")?, parse::<usize>(b, "an integer")?);
                let count = parse::<usize>(c, "a point count")?;
                out.extend(log_points(a as f64, b as f64, count)?.into_iter().map(|x| x.round() as usize));
            }
            [a, b] => out.extend(parse::<usize>(a, "an integer")?..=parse::<usize>(b, "an integer")?),
            [a, b, s] => {
                let step = parse::<usize>(s, "a step")?;
                if step == 0 {
                    bail!("step must be positive in '{item}'");
                }
                out.extend((parse::<usize>(a, "an integer")?..=parse::<usize>(b, "an integer")?).step_by(step));
            }
            _ => bail!("malformed axis item '{item}'"),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Parses a real axis; the result is sorted and free of duplicates.
pub fn parse_real_axis(spec: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(parse::<f64>(v, "a number")?),
            ["log", a, b, c] => {
                let count = parse::<usize>(c, "a point count")?;
                out.extend(log_points(parse(a, "a number")?, parse(b, "a number")?, count)?);
            }
            [a, b, s] => {
                let (a, b, step) = (parse::<f64>(a, "a number")?, parse::<f64>(b, "a number")?, parse::<f64>(s, "a step")?);
                if !(step > 0.0 && step.is_finite() && a.is_finite() && b.is_finite()) {
                    bail!("range '{item}' needs finite endpoints and a positive step");
                }
                if a <= b {
                    // Index-based so that the endpoint survives rounding.
                    let count = ((b - a) / step + 1e-9).floor() as usize;
                    out.extend((0..=count).map(|i| a + step * i as f64));
                }
            }
            [_, _] => bail!("real range '{item}' needs a step: a:b:step"),
            _ => bail!("malformed axis item '{item}'"),
        }
    }
    if let Some(bad) = out.iter().find(|v| !v.is_finite()) {
        bail!("axis value {bad} is not finite");
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_items() {
        assert_eq!(parse_int_axis("3").unwrap(), vec![3]);
        assert_eq!(parse_int_axis("2:5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_int_axis("2:10:4").unwrap(), vec![2, 6, 10]);
        assert_eq!(parse_int_axis("7,2:3,3").unwrap(), vec![2, 3, 7]);
        assert_eq!(parse_int_axis("5:2").unwrap(), Vec::<usize>::new());
        assert_eq!(parse_int_axis("").unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn integer_log_spacing() {
        let v = parse_int_axis("log:2:1000:12").unwrap();
        assert_eq!(v.first(), Some(&2));
        assert_eq!(v.last(), Some(&1000));
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn real_items() {
        let v = parse_real_axis("0:1:0.25").unwrap();
        assert_eq!(v, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_real_axis("0.1:3:0.1").unwrap().len(), 30);
        assert_eq!(parse_real_axis("1.5,0.5").unwrap(), vec![0.5, 1.5]);
        assert!(parse_real_axis("1:0:0.1").unwrap().is_empty());
        let g = parse_real_axis("log:0.01:1:3").unwrap();
        assert!((g[1] - 0.1).abs() < 1e-15 && g[2] == 1.0);
    }

    #[test]
    fn malformed_items() {
        assert!(parse_int_axis("a").is_err());
        assert!(parse_int_axis("1:2:0").is_err());
        assert!(parse_int_axis("1:2:3:4").is_err());
        assert!(parse_real_axis("0:1").is_err());
        assert!(parse_real_axis("0:1:-0.1").is_err());
        assert!(parse_real_axis("nan").is_err());
        assert!(parse_real_axis("log:0:1:3").is_err());
    }
}
