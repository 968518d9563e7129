//! Codes over finite alphabets: storage, canonical file format, and the
//! conversions between codeword form, orthogonal-array rows, and pairs of
//! latin cubes.
//!
//! A code is a set of distinct length-d words over the alphabet 0..q. Words
//! are stored in one flat, lexicographically sorted buffer of 16-bit symbols.
//! The declared strength t is a claim, not a certificate: it is trusted only
//! after an explicit verifier pass (see the `verify` module).

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Symbol universe of a code: a size plus an optional designated subset of
/// "hole letters" used by the partial (hole) codes, plus optional display
/// labels for the symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    size: u16,
    hole: Vec<u16>,
    labels: Option<Vec<String>>,
}

impl Alphabet {
    pub fn plain(size: u16) -> Self {
        Alphabet {
            size,
            hole: Vec::new(),
            labels: None,
        }
    }

    pub fn with_hole(size: u16, mut hole: Vec<u16>) -> Result<Self> {
        hole.sort_unstable();
        hole.dedup();
        if hole.iter().any(|&h| h >= size) {
            return Err(Error::HoleNotSubset {
                reason: format!("hole letter out of range for alphabet of size {size}"),
            });
        }
        if hole.len() >= size as usize {
            return Err(Error::HoleNotSubset {
                reason: "hole letters must form a proper subset".into(),
            });
        }
        Ok(Alphabet {
            size,
            hole,
            labels: None,
        })
    }

    pub fn with_labels(labels: Vec<String>, hole: Vec<u16>) -> Result<Self> {
        let size = labels.len() as u16;
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(Error::NotBijective {
                reason: "alphabet labels must be distinct".into(),
            });
        }
        let mut a = Alphabet::with_hole(size, hole)?;
        a.labels = Some(labels);
        Ok(a)
    }

    pub fn size(&self) -> u16 {
        self.size
    }

    /// Hole letters, sorted ascending; empty for plain alphabets.
    pub fn hole(&self) -> &[u16] {
        &self.hole
    }

    pub fn is_hole(&self, sym: u16) -> bool {
        self.hole.binary_search(&sym).is_ok()
    }

    pub fn label(&self, sym: u16) -> String {
        match &self.labels {
            Some(l) => l[sym as usize].clone(),
            None => sym.to_string(),
        }
    }
}

/// A set of distinct words of fixed length over 0..q, sorted
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    alphabet: Alphabet,
    dim: usize,
    strength: usize,
    words: Vec<u16>,
}

/// Sorts a flat word buffer and drops duplicate words, returning the number
/// removed. Used by combinators whose maps are intentionally non-injective.
pub(crate) fn sort_dedup_flat(dim: usize, flat: &[u16]) -> (Vec<u16>, u64) {
    let sorted = sort_flat_words(dim, flat);
    let n = sorted.len() / dim;
    let mut out = Vec::with_capacity(sorted.len());
    let mut dropped = 0u64;
    for i in 0..n {
        let w = &sorted[i * dim..(i + 1) * dim];
        if i > 0 && w == &sorted[(i - 1) * dim..i * dim] {
            dropped += 1;
        } else {
            out.extend_from_slice(w);
        }
    }
    (out, dropped)
}

fn sort_flat_words(dim: usize, flat: &[u16]) -> Vec<u16> {
    let n = flat.len() / dim;
    let mut idx: Vec<u32> = (0..n as u32).collect();
    idx.sort_unstable_by(|&a, &b| {
        flat[a as usize * dim..(a as usize + 1) * dim]
            .cmp(&flat[b as usize * dim..(b as usize + 1) * dim])
    });
    let mut out = Vec::with_capacity(flat.len());
    for &i in &idx {
        out.extend_from_slice(&flat[i as usize * dim..(i as usize + 1) * dim]);
    }
    out
}

impl Code {
    /// Builds a code from explicit words. Words are sorted canonically;
    /// duplicates, out-of-range symbols, and ragged lengths are rejected.
    pub fn new(
        alphabet: Alphabet,
        dim: usize,
        strength: usize,
        words: &[Vec<u16>],
    ) -> Result<Self> {
        let mut flat = Vec::with_capacity(words.len() * dim);
        for w in words {
            if w.len() != dim {
                return Err(Error::LengthMismatch {
                    expected: dim,
                    got: w.len(),
                });
            }
            flat.extend_from_slice(w);
        }
        Self::from_flat(alphabet, dim, strength, flat)
    }

    /// Bulk constructor over a flat symbol buffer (length n*dim).
    pub fn from_flat(
        alphabet: Alphabet,
        dim: usize,
        strength: usize,
        flat: Vec<u16>,
    ) -> Result<Self> {
        if dim == 0 || !flat.len().is_multiple_of(dim) {
            return Err(Error::LengthMismatch {
                expected: dim.max(1),
                got: flat.len() % dim.max(1),
            });
        }
        if flat.is_empty() {
            return Err(Error::EmptyCode);
        }
        let q = alphabet.size();
        if let Some(pos) = flat.iter().position(|&s| s >= q) {
            return Err(Error::SymbolOutOfRange {
                sym: flat[pos] as u32,
                q,
                at: Some(format!("word {}", pos / dim)),
            });
        }
        let sorted = sort_flat_words(dim, &flat);
        for i in 1..sorted.len() / dim {
            if sorted[(i - 1) * dim..i * dim] == sorted[i * dim..(i + 1) * dim] {
                return Err(Error::DuplicateCodeword { index: i });
            }
        }
        Ok(Code {
            alphabet,
            dim,
            strength,
            words: sorted,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn q(&self) -> u16 {
        self.alphabet.size()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Declared strength. Trust requires a verifier pass.
    pub fn strength(&self) -> usize {
        self.strength
    }

    pub fn len(&self) -> usize {
        self.words.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, i: usize) -> &[u16] {
        &self.words[i * self.dim..(i + 1) * self.dim]
    }

    pub fn words(&self) -> impl Iterator<Item = &[u16]> {
        self.words.chunks_exact(self.dim)
    }

    pub fn flat(&self) -> &[u16] {
        &self.words
    }

    pub fn contains(&self, w: &[u16]) -> bool {
        if w.len() != self.dim {
            return false;
        }
        let n = self.len();
        let mut lo = 0usize;
        let mut hi = n;
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.word(mid).cmp(w) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// True when every word of `self` occurs in `sup` (both sorted, so a
    /// single merge pass suffices).
    pub fn is_subcode_of(&self, sup: &Code) -> bool {
        if self.dim != sup.dim {
            return false;
        }
        let mut j = 0usize;
        'outer: for w in self.words() {
            while j < sup.len() {
                match sup.word(j).cmp(w) {
                    std::cmp::Ordering::Less => j += 1,
                    std::cmp::Ordering::Equal => {
                        j += 1;
                        continue 'outer;
                    }
                    std::cmp::Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    /// Re-indexes the code onto the sorted set of symbols it actually uses.
    /// Returns the compacted code and the map from new indices to original
    /// symbols. Used to verify ingredients that live on a subalphabet.
    pub fn compact(&self) -> (Code, Vec<u16>) {
        let mut used: Vec<u16> = self.words.clone();
        used.sort_unstable();
        used.dedup();
        let mut rank = vec![0u16; self.q() as usize];
        for (r, &s) in used.iter().enumerate() {
            rank[s as usize] = r as u16;
        }
        let flat: Vec<u16> = self.words.iter().map(|&s| rank[s as usize]).collect();
        let code = Code {
            alphabet: Alphabet::plain(used.len() as u16),
            dim: self.dim,
            strength: self.strength,
            words: flat,
        };
        (code, used)
    }

    /// Writes the canonical text format (no hole annotation).
    pub fn write(&self, path: &Path) -> Result<()> {
        self.write_annotated(path, None)
    }

    /// Writes the canonical text format, with a hole header line when `j`
    /// is given and the alphabet designates hole letters.
    pub fn write_annotated(&self, path: &Path, hole_j: Option<usize>) -> Result<()> {
        let f = File::create(path)?;
        let mut w = BufWriter::new(f);
        self.write_to(&mut w, hole_j)?;
        w.flush()?;
        Ok(())
    }

    pub fn write_to<W: Write>(&self, mut w: W, hole_j: Option<usize>) -> Result<()> {
        writeln!(w, "#mdscode v1")?;
        writeln!(
            w,
            "t={} d={} q={} n={}",
            self.strength,
            self.dim,
            self.q(),
            self.len()
        )?;
        if let Some(j) = hole_j {
            let hole: Vec<String> = self.alphabet.hole().iter().map(|h| h.to_string()).collect();
            writeln!(w, "hole j={} A={}", j, hole.join(","))?;
        }
        let mut line = String::new();
        for word in self.words() {
            line.clear();
            for (i, s) in word.iter().enumerate() {
                if i > 0 {
                    line.push(' ');
                }
                line.push_str(&s.to_string());
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    /// Reads the canonical format. Returns the code and, when a hole header
    /// was present, its declared j parameter (hole letters land in the
    /// alphabet).
    pub fn read(path: &Path) -> Result<(Code, Option<usize>)> {
        let f = File::open(path)?;
        Self::read_from(BufReader::new(f))
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<(Code, Option<usize>)> {
        let mut lines = r.lines();
        let parse = |line: usize, msg: &str| Error::ParseError {
            line,
            msg: msg.to_string(),
        };
        let magic = lines
            .next()
            .ok_or_else(|| parse(1, "missing magic line"))??;
        if magic.trim() != "#mdscode v1" {
            return Err(parse(1, "expected `#mdscode v1`"));
        }
        let header = lines
            .next()
            .ok_or_else(|| parse(2, "missing header line"))??;
        let mut t = None;
        let mut d = None;
        let mut q = None;
        let mut n = None;
        for tok in header.split_whitespace() {
            let (key, val) = tok
                .split_once('=')
                .ok_or_else(|| parse(2, "header tokens must be key=value"))?;
            let v: u64 = val
                .parse()
                .map_err(|_| parse(2, &format!("bad value in `{tok}`")))?;
            match key {
                "t" => t = Some(v as usize),
                "d" => d = Some(v as usize),
                "q" => q = Some(v),
                "n" => n = Some(v as usize),
                _ => return Err(parse(2, &format!("unknown header key `{key}`"))),
            }
        }
        let (t, d, q, n) = match (t, d, q, n) {
            (Some(t), Some(d), Some(q), Some(n)) => (t, d, q, n),
            _ => return Err(parse(2, "header must declare t, d, q, n")),
        };
        if q == 0 || q > u16::MAX as u64 {
            return Err(parse(2, "q out of range"));
        }
        if d == 0 {
            return Err(parse(2, "d must be positive"));
        }
        if n == 0 {
            return Err(parse(3, "empty body: n must be positive"));
        }
        let q = q as u16;

        let mut lineno = 2usize;
        let mut hole_j: Option<usize> = None;
        let mut hole: Vec<u16> = Vec::new();
        let mut flat: Vec<u16> = Vec::with_capacity(n * d);
        let mut count = 0usize;
        let mut first_body = true;
        for line in lines {
            let line = line?;
            lineno += 1;
            let text = line.trim();
            if text.is_empty() {
                continue;
            }
            if first_body && text.starts_with("hole ") {
                first_body = false;
                for tok in text["hole ".len()..].split_whitespace() {
                    let (key, val) = tok
                        .split_once('=')
                        .ok_or_else(|| parse(lineno, "hole tokens must be key=value"))?;
                    match key {
                        "j" => {
                            let j: usize = val
                                .parse()
                                .map_err(|_| parse(lineno, "bad j value"))?;
                            if j < t + 1 || j > d {
                                return Err(parse(lineno, "hole j must satisfy t+1 <= j <= d"));
                            }
                            hole_j = Some(j);
                        }
                        "A" => {
                            for part in val.split(',') {
                                let s: u16 = part
                                    .parse()
                                    .map_err(|_| parse(lineno, "bad hole letter"))?;
                                hole.push(s);
                            }
                        }
                        _ => return Err(parse(lineno, &format!("unknown hole key `{key}`"))),
                    }
                }
                if hole_j.is_none() || hole.is_empty() {
                    return Err(parse(lineno, "hole line must declare j and A"));
                }
                continue;
            }
            first_body = false;
            let start = flat.len();
            for tok in text.split_whitespace() {
                let s: u32 = tok
                    .parse()
                    .map_err(|_| parse(lineno, &format!("bad symbol `{tok}`")))?;
                if s >= q as u32 {
                    return Err(Error::SymbolOutOfRange {
                        sym: s,
                        q,
                        at: Some(format!("line {lineno}")),
                    });
                }
                flat.push(s as u16);
            }
            if flat.len() - start != d {
                return Err(parse(
                    lineno,
                    &format!("expected {d} symbols, found {}", flat.len() - start),
                ));
            }
            if count > 0 {
                let prev = &flat[start - d..start];
                let cur = &flat[start..];
                if prev >= cur {
                    return Err(parse(
                        lineno,
                        "codewords must be in strictly increasing lexicographic order",
                    ));
                }
            }
            count += 1;
        }
        if count == 0 {
            return Err(parse(lineno + 1, "empty body"));
        }
        if count != n {
            return Err(Error::HeaderMismatch {
                field: "n",
                declared: n as u64,
                actual: count as u64,
            });
        }
        let alphabet = if hole.is_empty() {
            Alphabet::plain(q)
        } else {
            Alphabet::with_hole(q, hole)?
        };
        let code = Code::from_flat(alphabet, d, t, flat)?;
        Ok((code, hole_j))
    }

    /// Converts an MDS(2,5,q)-shaped code to its pair of latin cubes, using
    /// the first three coordinates as cube position and the last two as the
    /// cube values. Fails with the offending prefix if some (x,y,z) is not
    /// matched by exactly one codeword.
    pub fn to_latin_cubes(&self) -> Result<LatinCubePair> {
        if self.dim != 5 {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: 5,
            });
        }
        let q = self.q() as usize;
        let cells = q * q * q;
        let mut count = vec![0u8; cells];
        let mut f1 = vec![0u16; cells];
        let mut f2 = vec![0u16; cells];
        for w in self.words() {
            let idx = (w[0] as usize * q + w[1] as usize) * q + w[2] as usize;
            count[idx] = count[idx].saturating_add(1);
            f1[idx] = w[3];
            f2[idx] = w[4];
        }
        if let Some(idx) = count.iter().position(|&c| c != 1) {
            let x = idx / (q * q);
            let y = (idx / q) % q;
            let z = idx % q;
            return Err(Error::NotFunctional {
                prefix: vec![x as u16, y as u16, z as u16],
                count: count[idx] as u64,
            });
        }
        Ok(LatinCubePair {
            q: self.q(),
            f1,
            f2,
        })
    }

    /// Presents the code as orthogonal-array rows (zero-copy view).
    pub fn oa_rows(&self) -> OaRows<'_> {
        OaRows {
            q: self.q(),
            d: self.dim,
            data: &self.words,
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "code t={} d={} q={} n={}",
            self.strength,
            self.dim,
            self.q(),
            self.len()
        )?;
        if !self.alphabet.hole().is_empty() {
            let hole: Vec<String> = self
                .alphabet
                .hole()
                .iter()
                .map(|&h| self.alphabet.label(h))
                .collect();
            write!(f, " hole={{{}}}", hole.join(","))?;
        }
        Ok(())
    }
}

/// Rows-and-columns view of a code for orthogonal-array checks.
#[derive(Clone, Copy, Debug)]
pub struct OaRows<'a> {
    pub q: u16,
    pub d: usize,
    pub data: &'a [u16],
}

impl<'a> OaRows<'a> {
    pub fn rows(&self) -> usize {
        self.data.len() / self.d
    }

    pub fn row(&self, i: usize) -> &'a [u16] {
        &self.data[i * self.d..(i + 1) * self.d]
    }
}

/// Two order-q cubes, stored as q^3 arrays indexed by x*q^2 + y*q + z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinCubePair {
    q: u16,
    f1: Vec<u16>,
    f2: Vec<u16>,
}

impl LatinCubePair {
    pub fn new(q: u16, f1: Vec<u16>, f2: Vec<u16>) -> Result<Self> {
        let cells = (q as usize).pow(3);
        if f1.len() != cells || f2.len() != cells {
            return Err(Error::LengthMismatch {
                expected: cells,
                got: if f1.len() != cells { f1.len() } else { f2.len() },
            });
        }
        for &v in f1.iter().chain(f2.iter()) {
            if v >= q {
                return Err(Error::SymbolOutOfRange {
                    sym: v as u32,
                    q,
                    at: Some("cube cell".into()),
                });
            }
        }
        Ok(LatinCubePair { q, f1, f2 })
    }

    pub fn q(&self) -> u16 {
        self.q
    }

    #[inline]
    fn idx(&self, x: u16, y: u16, z: u16) -> usize {
        (x as usize * self.q as usize + y as usize) * self.q as usize + z as usize
    }

    pub fn value1(&self, x: u16, y: u16, z: u16) -> u16 {
        self.f1[self.idx(x, y, z)]
    }

    pub fn value2(&self, x: u16, y: u16, z: u16) -> u16 {
        self.f2[self.idx(x, y, z)]
    }

    pub fn cells1(&self) -> &[u16] {
        &self.f1
    }

    pub fn cells2(&self) -> &[u16] {
        &self.f2
    }

    /// Test-support mutation of a single cell of the first cube.
    pub fn set1(&mut self, x: u16, y: u16, z: u16, v: u16) {
        let i = self.idx(x, y, z);
        self.f1[i] = v;
    }

    /// Inverse of `Code::to_latin_cubes`: words (x, y, z, f1, f2).
    pub fn to_code(&self) -> Result<Code> {
        let q = self.q as usize;
        let mut flat = Vec::with_capacity(q * q * q * 5);
        for x in 0..self.q {
            for y in 0..self.q {
                for z in 0..self.q {
                    let i = self.idx(x, y, z);
                    flat.extend_from_slice(&[x, y, z, self.f1[i], self.f2[i]]);
                }
            }
        }
        Code::from_flat(Alphabet::plain(self.q), 5, 2, flat)
    }

    /// Writes the grid text format: per z, a block of q rows of `f1:f2`
    /// cells, blocks separated by blank lines.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "#latincubes v1")?;
        writeln!(w, "q={}", self.q)?;
        for z in 0..self.q {
            writeln!(w)?;
            for x in 0..self.q {
                let mut line = String::new();
                for y in 0..self.q {
                    if y > 0 {
                        line.push(' ');
                    }
                    let i = self.idx(x, y, z);
                    line.push_str(&format!("{}:{}", self.f1[i], self.f2[i]));
                }
                writeln!(w, "{line}")?;
            }
        }
        Ok(())
    }
}
