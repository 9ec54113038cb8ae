//! `key: value` text files with `#` comments.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct KeyValues {
    entries: Vec<(String, String, usize)>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `key: value`, got {raw:?}", n + 1)))?;
            entries.push((k.trim().to_string(), v.trim().to_string(), n + 1));
        }
        Ok(KeyValues { entries })
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, usize)> {
        self.entries.iter().map(|(k, v, n)| (k.as_str(), v.as_str(), *n))
    }

    /// The single value of `key`; duplicates are an error.
    pub fn get(&self, key: &str) -> Result<Option<&str>> {
        let mut found = self.entries.iter().filter(|(k, _, _)| k == key);
        let first = found.next();
        if let Some((_, _, n)) = found.next() {
            return Err(Error::Parse(format!("line {n}: duplicate key {key:?}")));
        }
        Ok(first.map(|(_, v, _)| v.as_str()))
    }

    pub fn all(&self, key: &str) -> Vec<&str> {
        self.entries.iter().filter(|(k, _, _)| k == key).map(|(_, v, _)| v.as_str()).collect()
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)?.ok_or_else(|| Error::Parse(format!("missing key {key:?}")))
    }

    /// Reject keys outside `allowed` (a trailing `*` matches any suffix).
    pub fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for (k, _, n) in &self.entries {
            let ok = allowed.iter().any(|a| match a.strip_suffix('*') {
                Some(prefix) => k.starts_with(prefix),
                None => k == a,
            });
            if !ok {
                return Err(Error::Parse(format!("line {n}: unknown key {k:?}")));
            }
        }
        Ok(())
    }
}

/// Parse a bracketed list of scalars or quoted strings: `[0]`, `["5:0", "7:1"]`, `[]`.
pub fn parse_list(text: &str) -> Result<Vec<String>> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected a bracketed list, got {text:?}")))?;
    let mut out = Vec::new();
    for item in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let item = item
            .strip_prefix('"')
            .and_then(|s| s.strip_suffix('"'))
            .unwrap_or(item);
        out.push(item.to_string());
    }
    Ok(out)
}

/// Parse a positive count written as an integer or in `1e6` notation.
pub fn parse_count(text: &str) -> Result<u64> {
    let t = text.trim().replace('_', "");
    if let Ok(n) = t.parse::<u64>() {
        return Ok(n);
    }
    let bad = || Error::Parse(format!("expected a nonnegative integer, got {text:?}"));
    let (m, e) = t.split_once(['e', 'E']).ok_or_else(bad)?;
    let m: u64 = m.parse().map_err(|_| bad())?;
    let e: u32 = e.parse().map_err(|_| bad())?;
    10u64.checked_pow(e).and_then(|p| p.checked_mul(m)).ok_or_else(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_values() {
        let kv = KeyValues::parse("# field\npoly: x^3 - 2   # pure cubic\n\ndisc: -108\n").unwrap();
        assert_eq!(kv.get("poly").unwrap(), Some("x^3 - 2"));
        assert_eq!(kv.require("disc").unwrap(), "-108");
        assert!(kv.require("missing").is_err());
        assert!(kv.check_keys(&["poly", "disc"]).is_ok());
        assert!(kv.check_keys(&["poly"]).is_err());
        assert!(KeyValues::parse("nonsense").is_err());
        assert!(KeyValues::parse("a: 1\na: 2").unwrap().get("a").is_err());
    }

    #[test]
    fn lists_and_counts() {
        assert_eq!(parse_list("[0]").unwrap(), vec!["0"]);
        assert_eq!(parse_list(r#"["5:0", "7:1"]"#).unwrap(), vec!["5:0", "7:1"]);
        assert!(parse_list("[]").unwrap().is_empty());
        assert_eq!(parse_count("1e6").unwrap(), 1_000_000);
        assert_eq!(parse_count("100000").unwrap(), 100_000);
        assert_eq!(parse_count("2e5").unwrap(), 200_000);
        assert!(parse_count("1.5").is_err());
    }
}
