//! Whitespace-separated numeric input; lines starting with `#` are skipped.

use std::fs;
use std::io::{self, Read};

use anyhow::{bail, Context, Result};

pub fn read_source(path: &str) -> Result<String> {
    if path == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .context("reading standard input")?;
        Ok(buf)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

pub fn parse_numbers(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .with_context(|| format!("line {}: `{tok}` is not a number", lineno + 1))?;
            if !v.is_finite() {
                bail!("line {}: `{tok}` is not finite", lineno + 1);
            }
            out.push(v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_whitespace() {
        let v = parse_numbers("# header\n1 2\t3\n\n  # note\n-4.5e0\n").unwrap();
        assert_eq!(v, vec![1.0, 2.0, 3.0, -4.5]);
    }

    #[test]
    fn rejects_garbage_and_non_finite() {
        assert!(parse_numbers("1 2 x").is_err());
        assert!(parse_numbers("1 NaN").is_err());
        assert!(parse_numbers("inf").is_err());
        assert!(parse_numbers("1,5").is_err());
    }
}
