//! Text format:
//!
//! ```text
//! n <n>
//! count <|F|>
//! <hex mask>     one per line, ascending by (popcount, value)
//! ```

use std::io::{BufRead, Write};
use std::path::Path;

use super::{check_sparse, low_mask, ElementSet, SetSystem};
use crate::error::{Error, Result};

impl SetSystem {
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "n {}", self.n())?;
        writeln!(w, "count {}", self.len())?;
        for s in self.iter() {
            writeln!(w, "{s:x}")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(file);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate().filter_map(|(i, l)| match l {
            Ok(l) if l.trim().is_empty() => None,
            other => Some((i + 1, other)),
        });
        let mut header = |key: &str| -> Result<usize> {
            let (line, text) = lines
                .next()
                .ok_or_else(|| Error::parse(0, format!("missing `{key}` line")))?;
            let text = text?;
            let mut parts = text.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some(k), Some(v), None) if k == key => v
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad {key} value `{v}`"))),
                _ => Err(Error::parse(line, format!("expected `{key} <value>`"))),
            }
        };
        let n = header("n")?;
        let count = header("count")?;
        check_sparse(n)?;
        let outside = !low_mask(n);
        let mut levels = vec![Vec::new(); n + 1];
        let mut prev: Option<ElementSet> = None;
        let mut seen = 0usize;
        for (line, text) in lines {
            let text = text?;
            let text = text.trim();
            let bits = u64::from_str_radix(text, 16)
                .map_err(|_| Error::parse(line, format!("bad hex mask `{text}`")))?;
            if bits & outside != 0 {
                return Err(Error::parse(
                    line,
                    format!("mask {text} outside the ground set [{n}]"),
                ));
            }
            let s = ElementSet::from_bits(bits);
            if let Some(p) = prev {
                match (p.len(), p.bits()).cmp(&(s.len(), s.bits())) {
                    std::cmp::Ordering::Equal => {
                        return Err(Error::parse(line, format!("duplicate set {text}")))
                    }
                    std::cmp::Ordering::Greater => {
                        return Err(Error::parse(
                            line,
                            "sets not ascending by (popcount, value)",
                        ))
                    }
                    std::cmp::Ordering::Less => {}
                }
            }
            prev = Some(s);
            levels[s.len()].push(s);
            seen += 1;
        }
        if seen != count {
            return Err(Error::parse(
                0,
                format!("header declares {count} sets, found {seen}"),
            ));
        }
        Ok(SetSystem::from_levels_unchecked(n, levels))
    }

    pub fn from_text(text: &str) -> Result<Self> {
        SetSystem::read_from(text.as_bytes())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        SetSystem::read_from(std::io::BufReader::new(file))
    }
}
