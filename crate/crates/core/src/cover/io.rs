//! Text format:
//!
//! ```text
//! base <set-system file>
//! mode plain|unique
//! <relabeling>            one per member, space separated
//! removed <j>: <hex> …    optional, 1-based member index
//! ```

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use super::CoverFamily;
use crate::error::{Error, Result};
use crate::setsys::{ElementSet, Permutation, SetSystem};

/// A parsed family file whose base system has not been loaded yet.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyFile {
    pub base_path: String,
    pub unique: bool,
    pub relabelings: Vec<Permutation>,
    pub removed: Vec<Vec<ElementSet>>,
}

impl FamilyFile {
    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut base_path = None;
        let mut unique = None;
        let mut relabelings = Vec::new();
        let mut removed_lines: Vec<(usize, usize, Vec<ElementSet>)> = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line_no = i + 1;
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("base ") {
                base_path = Some(rest.trim().to_string());
            } else if let Some(rest) = line.strip_prefix("mode ") {
                unique = Some(match rest.trim() {
                    "plain" => false,
                    "unique" => true,
                    other => return Err(Error::parse(line_no, format!("unknown mode `{other}`"))),
                });
            } else if let Some(rest) = line.strip_prefix("removed ") {
                let (j, masks) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::parse(line_no, "expected `removed j: …`"))?;
                let j: usize = j
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(line_no, "bad member index"))?;
                let sets = masks
                    .split_whitespace()
                    .map(|m| u64::from_str_radix(m, 16).map(ElementSet::from_bits))
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::parse(line_no, "bad hex mask"))?;
                removed_lines.push((line_no, j, sets));
            } else {
                let order = line
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<std::result::Result<Vec<usize>, _>>()
                    .map_err(|_| Error::parse(line_no, "bad permutation entry"))?;
                let p =
                    Permutation::new(order).map_err(|e| Error::parse(line_no, e.to_string()))?;
                relabelings.push(p);
            }
        }
        let base_path = base_path.ok_or_else(|| Error::parse(0, "missing `base` line"))?;
        let unique = unique.ok_or_else(|| Error::parse(0, "missing `mode` line"))?;
        let mut removed = vec![Vec::new(); relabelings.len()];
        for (line_no, j, sets) in removed_lines {
            if j == 0 || j > relabelings.len() {
                return Err(Error::parse(
                    line_no,
                    format!("member index {j} out of range"),
                ));
            }
            removed[j - 1].extend(sets);
        }
        Ok(FamilyFile {
            base_path,
            unique,
            relabelings,
            removed,
        })
    }

    pub fn with_base(self, base: SetSystem) -> Result<CoverFamily> {
        let mut fam = CoverFamily::plain(base, self.relabelings)?;
        let n = fam.n();
        for sets in &self.removed {
            if let Some(s) = sets.iter().find(|s| !s.is_subset(ElementSet::full(n))) {
                return Err(Error::SetOutOfRange { mask: s.bits(), n });
            }
        }
        fam.unique = self.unique;
        fam.removed = self.removed;
        Ok(fam)
    }
}

impl CoverFamily {
    pub fn write_to<W: Write>(&self, base_path: &str, mut w: W) -> Result<()> {
        writeln!(w, "base {base_path}")?;
        writeln!(w, "mode {}", if self.unique { "unique" } else { "plain" })?;
        for p in &self.relabelings {
            writeln!(w, "{p}")?;
        }
        for (j, sets) in self.removed.iter().enumerate() {
            if !sets.is_empty() {
                write!(w, "removed {}:", j + 1)?;
                for s in sets {
                    write!(w, " {s:x}")?;
                }
                writeln!(w)?;
            }
        }
        Ok(())
    }

    pub fn to_text(&self, base_path: &str) -> String {
        let mut buf = Vec::new();
        self.write_to(base_path, &mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii output")
    }

    /// Writes the family to `path` and its base system to `base_path`; a
    /// relative `base_path` is taken from the directory of `path`, as in [`CoverFamily::load`].
    pub fn save(&self, path: impl AsRef<Path>, base_path: impl AsRef<Path>) -> Result<()> {
        let (path, base_path) = (path.as_ref(), base_path.as_ref());
        match path.parent() {
            Some(dir) if base_path.is_relative() => self.base.save(dir.join(base_path))?,
            _ => self.base.save(base_path)?,
        }
        let file = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(file);
        self.write_to(&base_path.to_string_lossy(), &mut w)?;
        w.flush()?;
        Ok(())
    }

    /// Reads a family file; a relative base path resolves against the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let parsed = FamilyFile::read_from(std::io::BufReader::new(std::fs::File::open(path)?))?;
        let mut base_path = PathBuf::from(&parsed.base_path);
        if base_path.is_relative() {
            if let Some(dir) = path.parent() {
                base_path = dir.join(base_path);
            }
        }
        let base = SetSystem::load(base_path)?;
        parsed.with_base(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::powerset;
    use crate::cover::make_unique;

    #[test]
    fn round_trip() {
        let fam =
            CoverFamily::plain(powerset(3).unwrap(), vec![Permutation::identity(3); 2]).unwrap();
        let u = make_unique(&fam).unwrap();
        let text = u.to_text("p3.ss");
        assert!(text.starts_with("base p3.ss\nmode unique\n1 2 3\n1 2 3\nremoved 2:"));
        let back = FamilyFile::read_from(text.as_bytes())
            .unwrap()
            .with_base(powerset(3).unwrap())
            .unwrap();
        assert_eq!(back, u);
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "mode plain\n1 2\n",
            "base x\n1 2\n",
            "base x\nmode odd\n",
            "base x\nmode plain\n1 1\n",
            "base x\nmode plain\n1 2\nremoved 3: 1\n",
        ] {
            assert!(FamilyFile::read_from(bad.as_bytes()).is_err(), "{bad:?}");
        }
    }
}
