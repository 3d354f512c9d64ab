//! Bundled data: appendix seeds for 13 <= n <= 122 and the non-uniform
//! morphisms for n = 20, 21, 22.
//!
//! Both files ship inside the binary. A data directory given by flag or by
//! the `TERNSTEM_DATA` environment variable replaces them; every report
//! carries the SHA-256 of the files actually used.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::morphism::TernaryMorphism;
use crate::word::TernaryWord;

pub const APPENDIX_FILE: &str = "appendix.txt";
pub const MULLER_FILE: &str = "muller.txt";
pub const DATA_DIR_ENV: &str = "TERNSTEM_DATA";

const EMBEDDED_APPENDIX: &str = include_str!("../data/appendix.txt");
const EMBEDDED_MULLER: &str = include_str!("../data/muller.txt");

/// Number of rows in the bundled appendix: {13, 17, 18, 19} ∪ [23, 122].
pub const APPENDIX_ENTRIES: usize = 104;

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn data_lines<'a>(text: &'a str) -> impl Iterator<Item = (usize, &'a str)> + 'a {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

#[derive(Clone, Debug)]
pub struct Appendix {
    entries: BTreeMap<usize, TernaryWord>,
    checksum: String,
}

impl Appendix {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let err = |line, message: String| Error::Fixture {
            path: origin.to_string(),
            line,
            message,
        };
        let mut entries = BTreeMap::new();
        for (line, content) in data_lines(text) {
            let mut parts = content.split_whitespace();
            let (Some(n), Some(seed), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(err(line, "expected `N seed`".into()));
            };
            let n: usize = n
                .parse()
                .map_err(|_| err(line, format!("bad length {n:?}")))?;
            let seed = TernaryWord::ingest(seed).map_err(|e| err(line, e.to_string()))?;
            if seed.len() != n {
                return Err(err(line, format!("seed has length {} not {n}", seed.len())));
            }
            if entries.insert(n, seed).is_some() {
                return Err(err(line, format!("duplicate entry for {n}")));
            }
        }
        Ok(Appendix {
            entries,
            checksum: sha256_hex(text.as_bytes()),
        })
    }

    pub fn get(&self, n: usize) -> Option<&TernaryWord> {
        self.entries.get(&n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &TernaryWord)> {
        self.entries.iter().map(|(&n, s)| (n, s))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn checksum(&self) -> &str {
        &self.checksum
    }
}

#[derive(Clone, Debug)]
pub struct MullerSet {
    morphisms: BTreeMap<usize, TernaryMorphism>,
    checksum: String,
}

impl MullerSet {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let err = |line, message: String| Error::Fixture {
            path: origin.to_string(),
            line,
            message,
        };
        let mut images: BTreeMap<usize, [Option<TernaryWord>; 3]> = BTreeMap::new();
        for (line, content) in data_lines(text) {
            let parts: Vec<&str> = content.split_whitespace().collect();
            let [n, letter, image] = parts[..] else {
                return Err(err(line, "expected `N LETTER image`".into()));
            };
            let n: usize = n
                .parse()
                .map_err(|_| err(line, format!("bad length {n:?}")))?;
            let letter: usize = match letter {
                "0" => 0,
                "1" => 1,
                "2" => 2,
                other => return Err(err(line, format!("bad letter {other:?}"))),
            };
            let image = TernaryWord::ingest(image).map_err(|e| err(line, e.to_string()))?;
            let slot = &mut images.entry(n).or_default()[letter];
            if slot.replace(image).is_some() {
                return Err(err(line, format!("duplicate image h({letter}) for {n}")));
            }
        }
        let mut morphisms = BTreeMap::new();
        for (n, imgs) in images {
            let [Some(a), Some(b), Some(c)] = imgs else {
                return Err(err(0, format!("morphism for {n} is missing an image")));
            };
            morphisms.insert(n, TernaryMorphism::new([a, b, c])?);
        }
        Ok(MullerSet {
            morphisms,
            checksum: sha256_hex(text.as_bytes()),
        })
    }

    pub fn get(&self, n: usize) -> Option<&TernaryMorphism> {
        self.morphisms.get(&n)
    }

    pub fn lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.morphisms.keys().copied()
    }

    pub fn checksum(&self) -> &str {
        &self.checksum
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixtureSource {
    Embedded,
    Directory(PathBuf),
}

#[derive(Clone, Debug)]
pub struct Fixtures {
    pub appendix: Appendix,
    pub muller: MullerSet,
    pub source: FixtureSource,
}

impl Fixtures {
    pub fn embedded() -> &'static Fixtures {
        use std::sync::OnceLock;
        static EMBEDDED: OnceLock<Fixtures> = OnceLock::new();
        EMBEDDED.get_or_init(|| Fixtures {
            appendix: Appendix::parse(EMBEDDED_APPENDIX, "<embedded appendix.txt>")
                .expect("embedded appendix parses"),
            muller: MullerSet::parse(EMBEDDED_MULLER, "<embedded muller.txt>")
                .expect("embedded muller data parses"),
            source: FixtureSource::Embedded,
        })
    }

    pub fn from_dir(dir: &Path) -> Result<Fixtures> {
        let read = |name: &str| {
            let path = dir.join(name);
            std::fs::read_to_string(&path).map_err(|source| Error::Io { path, source })
        };
        let appendix_path = dir.join(APPENDIX_FILE);
        let muller_path = dir.join(MULLER_FILE);
        Ok(Fixtures {
            appendix: Appendix::parse(&read(APPENDIX_FILE)?, &appendix_path.display().to_string())?,
            muller: MullerSet::parse(&read(MULLER_FILE)?, &muller_path.display().to_string())?,
            source: FixtureSource::Directory(dir.to_path_buf()),
        })
    }

    /// Fixtures from `flag` if given, else from `$TERNSTEM_DATA`, else the
    /// embedded copies.
    pub fn resolve(flag: Option<&Path>) -> Result<Fixtures> {
        if let Some(dir) = flag {
            return Fixtures::from_dir(dir);
        }
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Fixtures::from_dir(Path::new(&dir)),
            _ => Ok(Fixtures::embedded().clone()),
        }
    }

    pub fn checksums(&self) -> BTreeMap<String, String> {
        BTreeMap::from([
            (
                APPENDIX_FILE.to_string(),
                self.appendix.checksum().to_string(),
            ),
            (MULLER_FILE.to_string(), self.muller.checksum().to_string()),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_appendix_rows() {
        let a = &Fixtures::embedded().appendix;
        assert_eq!(a.len(), APPENDIX_ENTRIES);
        let ns: Vec<usize> = a.iter().map(|(n, _)| n).collect();
        let mut expected = vec![13, 17, 18, 19];
        expected.extend(23..=122);
        assert_eq!(ns, expected);
        assert_eq!(a.get(13).unwrap().to_string(), "2101201021012");
        assert!(a
            .iter()
            .all(|(_, s)| s.get(0) == Some(crate::word::Letter::TWO)));
    }

    #[test]
    fn embedded_muller_shapes() {
        let m = &Fixtures::embedded().muller;
        assert_eq!(m.lengths().collect::<Vec<_>>(), vec![20, 21, 22]);
        assert_eq!(m.get(20).unwrap().image_lengths(), [80, 120, 80]);
        assert_eq!(m.get(21).unwrap().image_lengths(), [168, 168, 168]);
        assert_eq!(m.get(22).unwrap().image_lengths(), [132, 132, 132]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = Appendix::parse("# c\n13 210\n", "t").unwrap_err();
        assert!(matches!(e, Error::Fixture { line: 2, .. }), "{e}");
        let e = Appendix::parse("3 210\n3 201\n", "t").unwrap_err();
        assert!(e.to_string().contains("duplicate"));
        let e = MullerSet::parse("20 0 012\n", "t").unwrap_err();
        assert!(e.to_string().contains("missing"));
    }

    #[test]
    fn directory_override() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join(APPENDIX_FILE), "3 210\n").unwrap();
        std::fs::write(dir.path().join(MULLER_FILE), "2 0 01\n2 1 12\n2 2 20\n").unwrap();
        let f = Fixtures::resolve(Some(dir.path())).unwrap();
        assert_eq!(f.appendix.len(), 1);
        assert_eq!(f.source, FixtureSource::Directory(dir.path().to_path_buf()));
        assert_ne!(f.checksums(), Fixtures::embedded().checksums());
        assert!(Fixtures::from_dir(&dir.path().join("missing")).is_err());
    }
}
