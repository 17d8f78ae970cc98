//! Parsing of `--q` / `--n` selections.

use fqequiv::numtheory::prime_power;

use crate::CliError;

/// Parses `7`, `2,3,5` or the inclusive range `2..9`, and any comma-separated
/// mix of these. Duplicates are dropped; order is ascending.
pub fn parse_list(what: &'static str, spec: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Usage(format!("--{what}: cannot parse {spec:?}"));
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Field orders. Explicit entries must be prime powers; ranges keep only the
/// prime powers they contain.
pub fn parse_orders(spec: &str) -> Result<Vec<u64>, CliError> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim) {
        let values = parse_list("q", part)?;
        if part.contains("..") {
            out.extend(values.into_iter().filter(|&q| prime_power(q).is_some()));
        } else {
            for q in values {
                if prime_power(q).is_none() {
                    return Err(CliError::Usage(format!("q = {q} is not a prime power")));
                }
                out.push(q);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(CliError::Usage(format!("--q {spec:?} selects no prime powers")));
    }
    Ok(out)
}

pub fn parse_degrees(spec: &str) -> Result<Vec<u64>, CliError> {
    let out = parse_list("n", spec)?;
    if out.is_empty() {
        return Err(CliError::Usage(format!("--n {spec:?} is empty")));
    }
    if out.contains(&0) {
        return Err(CliError::Usage("degrees must be at least 1".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_list("n", "3").unwrap(), [3]);
        assert_eq!(parse_list("n", "5,1,3,1").unwrap(), [1, 3, 5]);
        assert_eq!(parse_list("n", "1..4,9").unwrap(), [1, 2, 3, 4, 9]);
        assert!(parse_list("n", "x").is_err());
        assert!(parse_list("n", "4..1").unwrap().is_empty());
    }

    #[test]
    fn orders() {
        assert_eq!(parse_orders("2..10").unwrap(), [2, 3, 4, 5, 7, 8, 9]);
        assert!(matches!(parse_orders("6"), Err(CliError::Usage(_))));
        assert!(matches!(parse_orders("14..15"), Err(CliError::Usage(_))));
        assert!(matches!(parse_degrees("3..2"), Err(CliError::Usage(_))));
        assert!(matches!(parse_degrees("0"), Err(CliError::Usage(_))));
    }
}
