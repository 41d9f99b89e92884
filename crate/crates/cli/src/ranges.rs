//! Integer lists on the command line: `3`, `-5..4` (inclusive), `-5..=4`, `0,-1,2..3`.

pub fn parse_int_list(s: &str) -> Result<Vec<i32>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        // the first character may be a minus sign, so search for ".." after it
        match part[1..].find("..").map(|i| i + 1) {
            Some(i) => {
                let lo = parse_int(&part[..i])?;
                let hi = parse_int(part[i + 2..].trim_start_matches('='))?;
                if lo > hi {
                    return Err(format!("empty range {part}"));
                }
                out.extend(lo..=hi);
            }
            None => out.push(parse_int(part)?),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

fn parse_int(s: &str) -> Result<i32, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("not an integer: {s:?}"))
}

/// Index selection: a single `N` means `1..=N`, anything else is taken literally.
pub fn parse_index_list(s: &str) -> Result<Vec<u32>, String> {
    let v = parse_int_list(s)?;
    let v: Vec<i32> = if v.len() == 1 && !s.contains("..") {
        (1..=v[0]).collect()
    } else {
        v
    };
    if v.iter().any(|&n| n < 1) {
        return Err(format!("indices must be positive: {s}"));
    }
    if v.is_empty() {
        return Err(format!("no indices in {s}"));
    }
    Ok(v.into_iter().map(|n| n as u32).collect())
}
