//! Grid specifications for `sweep`.
//!
//! Accepted forms, each optionally prefixed with a variable name (`n=`,
//! `N=`): a comma list `50,500,5000`; a geometric range `20:2000:x10`; an
//! arithmetic range `10:50:+10` (or `10:50:10`, or `10:50` with step 1).

const MAX_POINTS: usize = 100_000;

pub fn parse_grid(spec: &str) -> Result<Vec<u64>, String> {
    let body = match spec.split_once('=') {
        Some((name, rest)) if name.chars().all(|c| c.is_ascii_alphabetic() || c == '_') => rest,
        Some(_) => return Err(format!("malformed grid `{spec}`")),
        None => spec,
    };
    let body = body.trim();
    if body.is_empty() {
        return Err("empty grid".into());
    }

    let mut points = if body.contains(':') {
        parse_range(body)?
    } else {
        body.split(',')
            .map(|t| parse_u64(t.trim()))
            .collect::<Result<Vec<_>, _>>()?
    };
    points.sort_unstable();
    points.dedup();
    if points.len() > MAX_POINTS {
        return Err(format!("grid has more than {MAX_POINTS} points"));
    }
    Ok(points)
}

fn parse_u64(s: &str) -> Result<u64, String> {
    s.parse::<u64>()
        .map_err(|_| format!("grid value `{s}` is not a non-negative integer"))
}

fn parse_range(body: &str) -> Result<Vec<u64>, String> {
    let parts: Vec<&str> = body.split(':').map(str::trim).collect();
    let (start, stop, step) = match parts.as_slice() {
        [a, b] => (parse_u64(a)?, parse_u64(b)?, "+1"),
        [a, b, s] => (parse_u64(a)?, parse_u64(b)?, *s),
        _ => return Err(format!("grid range `{body}` must be start:stop[:step]")),
    };
    if start > stop {
        return Err(format!("grid start {start} exceeds stop {stop}"));
    }

    let mut out = Vec::new();
    if let Some(factor) = step.strip_prefix('x') {
        let factor: f64 = factor
            .parse()
            .map_err(|_| format!("geometric factor `{factor}` is not a number"))?;
        if !(factor > 1.0 && factor.is_finite()) {
            return Err(format!("geometric factor must exceed 1, got {factor}"));
        }
        if start == 0 {
            return Err("geometric grid must start above 0".into());
        }
        if factor.fract() == 0.0 {
            let factor = factor as u64;
            let mut v = start;
            while v <= stop && out.len() <= MAX_POINTS {
                out.push(v);
                match v.checked_mul(factor) {
                    Some(next) => v = next,
                    None => break,
                }
            }
        } else {
            let mut v = start as f64;
            while v.round() <= stop as f64 && out.len() <= MAX_POINTS {
                out.push(v.round() as u64);
                v *= factor;
            }
        }
    } else {
        let step = parse_u64(step.strip_prefix('+').unwrap_or(step))?;
        if step == 0 {
            return Err("arithmetic step must be positive".into());
        }
        let mut v = start;
        while v <= stop && out.len() <= MAX_POINTS {
            out.push(v);
            match v.checked_add(step) {
                Some(next) => v = next,
                None => break,
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_grid("n=20:2000:x10").unwrap(), vec![20, 200, 2000]);
        assert_eq!(parse_grid("N=50,5000,500").unwrap(), vec![50, 500, 5000]);
        assert_eq!(parse_grid("10:40:+10").unwrap(), vec![10, 20, 30, 40]);
        assert_eq!(parse_grid("10:40:15").unwrap(), vec![10, 25, 40]);
        assert_eq!(parse_grid("3:5").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_grid("10:100:x2.5").unwrap(), vec![10, 25, 63]);
        assert_eq!(parse_grid("7").unwrap(), vec![7]);
    }

    #[test]
    fn rejects() {
        for bad in [
            "", "n=", "a:b", "5:1", "1:10:x1", "0:10:x2", "1:10:+0", "1,-2", "n+1=3", "1:2:3:4",
        ] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
        assert!(parse_grid("1:1000000").is_err());
    }
}
