//! Parsers for inline complex lists and degree ranges.

use num_complex::Complex64;

/// Parses `0,0.5,-0.2+0.3i,0.4i` into complex numbers. Errors name the
/// offending item and its column (1-based).
pub fn complex_list(text: &str) -> Result<Vec<Complex64>, String> {
    if text.trim().is_empty() {
        return Err("expected at least one complex number".into());
    }
    let mut out = Vec::new();
    let mut column = 1;
    for (index, item) in text.split(',').enumerate() {
        let trimmed = item.trim();
        let lead = item.len() - item.trim_start().len();
        match complex(trimmed) {
            Some(z) => out.push(z),
            None => {
                return Err(format!(
                    "item {} at column {}: cannot parse {trimmed:?} as a complex number \
                     (forms: 0.5, -0.2+0.3i, 0.4i)",
                    index + 1,
                    column + lead
                ))
            }
        }
        column += item.len() + 1;
    }
    Ok(out)
}

fn complex(s: &str) -> Option<Complex64> {
    if s.is_empty() || s.contains(char::is_whitespace) {
        return None;
    }
    let z: Complex64 = s.parse().ok()?;
    (z.re.is_finite() && z.im.is_finite()).then_some(z)
}

/// Comma-separated positive reals, e.g. `10,100`.
pub fn real_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .enumerate()
        .map(|(i, item)| {
            item.trim()
                .parse::<f64>()
                .map_err(|e| format!("item {} ({:?}): {e}", i + 1, item.trim()))
        })
        .collect()
}

/// `4`, `2..8` (both ends included), `2..=8` or `2,3,5`.
pub fn degree_range(text: &str) -> Result<Vec<usize>, String> {
    let number = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|e| format!("degree {:?}: {e}", s.trim()))
    };
    let degrees = if let Some((lo, hi)) = text.split_once("..") {
        let lo = number(lo)?;
        let hi = number(hi.strip_prefix('=').unwrap_or(hi))?;
        if hi < lo {
            return Err(format!("empty degree range {text:?}"));
        }
        (lo..=hi).collect()
    } else {
        text.split(',').map(number).collect::<Result<Vec<_>, _>>()?
    };
    if degrees.is_empty() {
        return Err("no degrees given".into());
    }
    Ok(degrees)
}
