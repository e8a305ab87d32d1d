//! Pre-trained word-vector storage: text-format parsing, exact-form lookup
//! and an optional binary cache for fast reload.
//!
//! The interchange format is the FastText-style text layout: a header line
//! `<count> <dim>` followed by one `<word> <v1> ... <vdim>` line per word.
//! Vectors are stored single precision; all similarity math upstream widens
//! to f64.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Magic prefix of the versioned binary cache format (version byte last).
const CACHE_MAGIC: &[u8; 8] = b"WGSSVEC\x01";

/// Immutable word → dense-vector table.
///
/// Word forms are exact surface forms: no case folding, no stemming.
#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    dimension: usize,
    entries: HashMap<String, Vec<f32>>,
    source_id: String,
}

/// Counters reported by [`load_vectors`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadStats {
    /// Lines dropped as malformed (bad arity, unparsable or non-finite
    /// components, empty word) plus duplicate words after the first.
    pub skipped_lines: usize,
    /// Words retained in the table.
    pub loaded: usize,
}

impl EmbeddingTable {
    /// Builds a table from in-memory entries, validating the invariants:
    /// non-empty unique words, exact `dimension` finite components each.
    pub fn from_entries<I>(dimension: usize, entries: I, source_id: impl Into<String>) -> Result<Self>
    where
        I: IntoIterator<Item = (String, Vec<f32>)>,
    {
        if dimension == 0 {
            return Err(Error::InvalidParam {
                name: "dimension",
                msg: "must be positive".into(),
            });
        }
        let mut map = HashMap::new();
        for (word, vector) in entries {
            if word.is_empty() {
                return Err(Error::InvalidParam {
                    name: "word",
                    msg: "empty word form".into(),
                });
            }
            if vector.len() != dimension || vector.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParam {
                    name: "vector",
                    msg: format!("word {word:?} has an invalid vector"),
                });
            }
            if map.insert(word.clone(), vector).is_some() {
                return Err(Error::InvalidParam {
                    name: "word",
                    msg: format!("duplicate word form {word:?}"),
                });
            }
        }
        Ok(Self {
            dimension,
            entries: map,
            source_id: source_id.into(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    /// Exact-match lookup. Absent words yield `None`, never a fabricated
    /// vector; out-of-vocabulary policy is the caller's concern.
    pub fn lookup(&self, word: &str) -> Option<&[f32]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    /// Writes the versioned binary cache. Entries are sorted by word so the
    /// output is byte-reproducible.
    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let io_err = |e| Error::io(path, e);

        w.write_all(CACHE_MAGIC).map_err(io_err)?;
        w.write_all(&(self.dimension as u32).to_le_bytes()).map_err(io_err)?;
        w.write_all(&(self.entries.len() as u64).to_le_bytes()).map_err(io_err)?;
        w.write_all(&(self.source_id.len() as u32).to_le_bytes()).map_err(io_err)?;
        w.write_all(self.source_id.as_bytes()).map_err(io_err)?;

        let mut words: Vec<&String> = self.entries.keys().collect();
        words.sort();
        for word in words {
            let vector = &self.entries[word];
            w.write_all(&(word.len() as u32).to_le_bytes()).map_err(io_err)?;
            w.write_all(word.as_bytes()).map_err(io_err)?;
            for v in vector {
                w.write_all(&v.to_le_bytes()).map_err(io_err)?;
            }
        }
        w.flush().map_err(io_err)
    }
}

/// Parses a word-vector file, keeping only words in `vocabulary_filter` when
/// one is given. Both the text format and the binary cache are accepted; the
/// cache is recognized by its magic header.
///
/// Malformed lines and duplicate words are skipped and counted; an unreadable
/// file, a bad header, or an empty result after filtering are fatal.
pub fn load_vectors(
    path: &Path,
    vocabulary_filter: Option<&HashSet<String>>,
) -> Result<(EmbeddingTable, LoadStats)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::new(file);

    let mut magic = [0u8; 8];
    let is_cache = match reader.fill_buf() {
        Ok(buf) if buf.len() >= 8 => {
            magic.copy_from_slice(&buf[..8]);
            &magic == CACHE_MAGIC
        }
        Ok(_) => false,
        Err(e) => return Err(Error::io(path, e)),
    };

    let (table, stats) = if is_cache {
        load_cache(path, reader, vocabulary_filter)?
    } else {
        load_text(path, reader, vocabulary_filter)?
    };

    if table.is_empty() {
        return Err(Error::EmptyTable { path: path.into() });
    }
    Ok((table, stats))
}

fn load_text(
    path: &Path,
    reader: impl BufRead,
    filter: Option<&HashSet<String>>,
) -> Result<(EmbeddingTable, LoadStats)> {
    let mut lines = reader.lines();

    let header = lines.next().ok_or_else(|| Error::VectorFormat {
        path: path.into(),
        line: 1,
        msg: "missing header line".into(),
    })?;
    let header = header.map_err(|e| Error::io(path, e))?;
    let mut parts = header.split_whitespace();
    let (count, dimension) = match (parts.next(), parts.next(), parts.next()) {
        (Some(c), Some(d), None) => match (c.parse::<usize>(), d.parse::<usize>()) {
            (Ok(c), Ok(d)) if d > 0 => (c, d),
            _ => {
                return Err(Error::VectorFormat {
                    path: path.into(),
                    line: 1,
                    msg: format!("invalid header {header:?}, expected `<count> <dim>`"),
                })
            }
        },
        _ => {
            return Err(Error::VectorFormat {
                path: path.into(),
                line: 1,
                msg: format!("invalid header {header:?}, expected `<count> <dim>`"),
            })
        }
    };

    let mut entries: HashMap<String, Vec<f32>> = HashMap::with_capacity(count.min(1 << 20));
    let mut stats = LoadStats::default();

    for line in lines {
        let line = line.map_err(|e| Error::io(path, e))?;
        let trimmed = line.trim_end();
        if trimmed.is_empty() {
            continue;
        }
        match parse_vector_line(trimmed, dimension) {
            Some((word, vector)) => {
                if let Some(filter) = filter {
                    if !filter.contains(word) {
                        continue;
                    }
                }
                // First occurrence wins; later duplicates count as skipped.
                if entries.contains_key(word) {
                    stats.skipped_lines += 1;
                } else {
                    entries.insert(word.to_owned(), vector);
                }
            }
            None => stats.skipped_lines += 1,
        }
    }

    stats.loaded = entries.len();
    let table = EmbeddingTable {
        dimension,
        entries,
        source_id: path.display().to_string(),
    };
    Ok((table, stats))
}

/// A data line is `<word> <v1> ... <vdim>`; anything else (wrong arity,
/// unparsable or non-finite numbers) is malformed.
fn parse_vector_line(line: &str, dimension: usize) -> Option<(&str, Vec<f32>)> {
    let mut parts = line.split_whitespace();
    let word = parts.next()?;
    let mut vector = Vec::with_capacity(dimension);
    for part in parts {
        let v: f32 = part.parse().ok()?;
        if !v.is_finite() {
            return None;
        }
        vector.push(v);
    }
    if vector.len() == dimension {
        Some((word, vector))
    } else {
        None
    }
}

fn load_cache(
    path: &Path,
    mut reader: impl Read,
    filter: Option<&HashSet<String>>,
) -> Result<(EmbeddingTable, LoadStats)> {
    let bad = |msg: &str| Error::VectorFormat {
        path: path.into(),
        line: 0,
        msg: msg.into(),
    };

    let mut magic = [0u8; 8];
    reader.read_exact(&mut magic).map_err(|e| Error::io(path, e))?;
    if &magic != CACHE_MAGIC {
        return Err(bad("bad cache magic"));
    }
    let dimension = read_u32(&mut reader, path)? as usize;
    let count = read_u64(&mut reader, path)? as usize;
    if dimension == 0 {
        return Err(bad("zero dimension"));
    }
    let source_len = read_u32(&mut reader, path)? as usize;
    let source_id = read_string(&mut reader, source_len, path)?;

    let mut entries = HashMap::with_capacity(count.min(1 << 20));
    let mut buf = Vec::new();
    for _ in 0..count {
        let word_len = read_u32(&mut reader, path)? as usize;
        let word = read_string(&mut reader, word_len, path)?;
        buf.resize(dimension * 4, 0);
        reader.read_exact(&mut buf).map_err(|e| Error::io(path, e))?;
        if let Some(filter) = filter {
            if !filter.contains(&word) {
                continue;
            }
        }
        let vector: Vec<f32> = buf
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        if word.is_empty() || vector.iter().any(|v| !v.is_finite()) {
            return Err(bad("corrupt cache entry"));
        }
        entries.insert(word, vector);
    }

    let loaded = entries.len();
    let table = EmbeddingTable {
        dimension,
        entries,
        source_id,
    };
    Ok((
        table,
        LoadStats {
            skipped_lines: 0,
            loaded,
        },
    ))
}

fn read_u32(reader: &mut impl Read, path: &Path) -> Result<u32> {
    let mut b = [0u8; 4];
    reader.read_exact(&mut b).map_err(|e| Error::io(path, e))?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(reader: &mut impl Read, path: &Path) -> Result<u64> {
    let mut b = [0u8; 8];
    reader.read_exact(&mut b).map_err(|e| Error::io(path, e))?;
    Ok(u64::from_le_bytes(b))
}

fn read_string(reader: &mut impl Read, len: usize, path: &Path) -> Result<String> {
    let mut b = vec![0u8; len];
    reader.read_exact(&mut b).map_err(|e| Error::io(path, e))?;
    String::from_utf8(b).map_err(|_| Error::VectorFormat {
        path: path.into(),
        line: 0,
        msg: "cache string is not UTF-8".into(),
    })
}
