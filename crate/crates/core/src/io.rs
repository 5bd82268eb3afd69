//! `MCKP 1` text format.
//!
//! ```text
//! MCKP 1
//! <k> <b>
//! <n_1>
//! <p_11> <c_11>
//! ...
//! ```
//!
//! Numbers use the shortest decimal that reads back to the same `f64`.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::Instance;

const MAGIC: &str = "MCKP";
const VERSION: &str = "1";

pub fn format_instance(instance: &Instance) -> String {
    let mut out = String::new();
    out.push_str(&format!("{MAGIC} {VERSION}\n{} {}\n", instance.k(), instance.budget()));
    for g in instance.groups() {
        out.push_str(&format!("{}\n", g.items.len()));
        for it in &g.items {
            out.push_str(&format!("{} {}\n", it.profit, it.cost));
        }
    }
    out
}

pub fn write_instance(instance: &Instance, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_instance(instance))?;
    Ok(())
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    parse_instance(&fs::read_to_string(path)?)
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        match self.inner.next() {
            Some((i, l)) => {
                self.last = i + 1;
                Ok((i + 1, l.split_whitespace().collect()))
            }
            None => Err(perr(self.last + 1, format!("unexpected end of input, expected {what}"))),
        }
    }
}

fn num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| perr(line, format!("invalid {what} {tok:?}")))
}

fn expect_len(line: usize, toks: &[&str], n: usize, what: &str) -> Result<()> {
    if toks.len() != n {
        return Err(perr(line, format!("expected {what}")));
    }
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };
    let (ln, head) = lines.next("header")?;
    if head.first() != Some(&MAGIC) {
        return Err(perr(ln, "missing MCKP header"));
    }
    match head.get(1) {
        Some(&VERSION) if head.len() == 2 => {}
        Some(v) => {
            return Err(Error::VersionMismatch {
                found: v.to_string(),
            })
        }
        None => return Err(perr(ln, "missing version")),
    }
    let (ln, kb) = lines.next("`k b`")?;
    expect_len(ln, &kb, 2, "`k b`")?;
    let k: usize = num(ln, kb[0], "group count")?;
    let b: f64 = num(ln, kb[1], "budget")?;
    let mut groups = Vec::with_capacity(k.min(1 << 20));
    for _ in 0..k {
        let (ln, cnt) = lines.next("item count")?;
        expect_len(ln, &cnt, 1, "item count")?;
        let n: usize = num(ln, cnt[0], "item count")?;
        let mut items = Vec::with_capacity(n.min(1 << 20));
        for _ in 0..n {
            let (ln, pc) = lines.next("`p c`")?;
            expect_len(ln, &pc, 2, "`p c`")?;
            items.push((num(ln, pc[0], "profit")?, num(ln, pc[1], "cost")?));
        }
        groups.push(items);
    }
    if let Some((i, l)) = lines.inner.find(|(_, l)| !l.trim().is_empty()) {
        return Err(perr(i + 1, format!("trailing content {l:?}")));
    }
    Instance::new(groups, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, GenSpec, Kind};

    const E1: &str = "MCKP 1\n2 6\n2\n10 4\n7 2\n2\n6 5\n3 1\n";

    #[test]
    fn e1_golden() {
        let inst = Instance::new(
            vec![vec![(10.0, 4.0), (7.0, 2.0)], vec![(6.0, 5.0), (3.0, 1.0)]],
            6.0,
        )
        .unwrap();
        assert_eq!(format_instance(&inst), E1);
        assert_eq!(parse_instance(E1).unwrap(), inst);
    }

    #[test]
    fn fractional_values_round_trip() {
        let inst = Instance::new(vec![vec![(0.1, 2.5), (1e-7, 3.25)], vec![(123456.789, 0.0)]], 5.5).unwrap();
        let text = format_instance(&inst);
        assert!(text.contains("0.1 2.5\n"));
        assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn generated_round_trip() {
        for seed in 0..20 {
            let inst = generate(&GenSpec::new(Kind::Wco, 4, 3, seed)).unwrap();
            assert_eq!(parse_instance(&format_instance(&inst)).unwrap(), inst);
        }
    }

    #[test]
    fn malformed_count_names_line_three() {
        let err = parse_instance("MCKP 1\n2 6\nx\n10 4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn version_and_truncation() {
        assert!(matches!(
            parse_instance("MCKP 2\n1 1\n1\n1 1\n"),
            Err(Error::VersionMismatch { .. })
        ));
        assert!(matches!(
            parse_instance("MCKP 1\n1 1\n2\n1 1\n"),
            Err(Error::Parse { line: 5, .. })
        ));
        assert!(matches!(parse_instance("hello\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_instance("MCKP 1\n1 1\n1\n1 1\n9\n"),
            Err(Error::Parse { line: 5, .. })
        ));
        assert!(matches!(parse_instance("MCKP 1\n1 1\n0\n"), Err(Error::EmptyGroup { .. })));
    }
}
