//! Steiner designs S(τ,5,q) and the assembly of MDS(2,5,q) codes from a
//! nested pair S(2,5,q) ⊂ S(3,5,q).
//!
//! Each block of the pair-covering design carries a full order-5 code; each
//! remaining block of the triple-covering design carries the orbit of its
//! ascending ordering under the alternating group. Constants are shared.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use crate::code::{Alphabet, Code};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linear::rs_parity;
use crate::verify::{combinations, distance_check_bounded, mds_check, VerifyReport};

/// A family of 5-element blocks over Q_q meant to cover every τ-element
/// subset exactly once. Construction checks shape only; `design_validate`
/// checks the covering property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerDesign {
    tau: usize,
    q: u16,
    blocks: Vec<[u16; 5]>,
}

impl SteinerDesign {
    pub fn new(tau: usize, q: u16, blocks: &[Vec<u16>]) -> Result<Self> {
        if tau == 0 || tau > 5 {
            return Err(Error::InvalidDesign {
                reason: format!("strength tau={tau} outside 1..=5"),
            });
        }
        if q < 5 {
            return Err(Error::InvalidDesign {
                reason: format!("point count q={q} below the block size 5"),
            });
        }
        let mut stored = Vec::with_capacity(blocks.len());
        for b in blocks {
            if b.len() != 5 {
                return Err(Error::InvalidDesign {
                    reason: format!("block {b:?} does not have 5 points"),
                });
            }
            let mut arr = [0u16; 5];
            arr.copy_from_slice(b);
            arr.sort_unstable();
            if arr.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::DuplicatePoint { block: b.clone() });
            }
            if arr[4] >= q {
                return Err(Error::InvalidDesign {
                    reason: format!("block {b:?} leaves Q_{q}"),
                });
            }
            stored.push(arr);
        }
        stored.sort_unstable();
        Ok(SteinerDesign {
            tau,
            q,
            blocks: stored,
        })
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn q(&self) -> u16 {
        self.q
    }

    pub fn blocks(&self) -> &[[u16; 5]] {
        &self.blocks
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        self.write_to(BufWriter::new(File::create(path)?))
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "#steiner v1")?;
        writeln!(w, "tau={} q={} b={}", self.tau, self.q, self.blocks.len())?;
        for b in &self.blocks {
            let line: Vec<String> = b.iter().map(|p| p.to_string()).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::read_from(BufReader::new(File::open(path)?))
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let parse_err = |line: usize, msg: String| Error::ParseError { line: line + 1, msg };
        let (ln, magic) = lines
            .next()
            .ok_or_else(|| parse_err(0, "empty file".into()))?;
        if magic?.trim() != "#steiner v1" {
            return Err(parse_err(ln, "expected the header line `#steiner v1`".into()));
        }
        let (ln, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing tau/q/b header".into()))?;
        let header = header?;
        let mut tau = None;
        let mut q = None;
        let mut b = None;
        for part in header.split_whitespace() {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| parse_err(ln, format!("malformed field `{part}`")))?;
            let val: u64 = val
                .parse()
                .map_err(|_| parse_err(ln, format!("field `{part}` is not a number")))?;
            match key {
                "tau" => tau = Some(val),
                "q" => q = Some(val),
                "b" => b = Some(val),
                other => return Err(parse_err(ln, format!("unknown field `{other}`"))),
            }
        }
        let (tau, q, b) = match (tau, q, b) {
            (Some(t), Some(q), Some(b)) => (t, q, b),
            _ => return Err(parse_err(ln, "header needs tau=, q= and b=".into())),
        };
        if q > u16::MAX as u64 {
            return Err(parse_err(ln, format!("q={q} exceeds the symbol range")));
        }
        let mut blocks = Vec::with_capacity(b as usize);
        for (ln, line) in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut block = Vec::with_capacity(5);
            for tok in line.split_whitespace() {
                let p: u16 = tok
                    .parse()
                    .map_err(|_| parse_err(ln, format!("bad point `{tok}`")))?;
                block.push(p);
            }
            if block.len() != 5 {
                return Err(parse_err(ln, format!("{} points on a block line", block.len())));
            }
            if block.windows(2).any(|w| w[0] >= w[1]) {
                return Err(parse_err(ln, "block points must be strictly ascending".into()));
            }
            blocks.push(block);
        }
        if blocks.len() as u64 != b {
            return Err(Error::HeaderMismatch {
                field: "b",
                declared: b,
                actual: blocks.len() as u64,
            });
        }
        SteinerDesign::new(tau as usize, q as u16, &blocks)
    }
}

/// Exhaustively counts, for every τ-subset of Q_q, the blocks containing it;
/// passes iff every count is exactly one and the block count matches the
/// closed form C(q,τ)/C(5,τ). The report also notes whether q meets the
/// joint divisibility condition q ≡ 5 or 41 (mod 60) for the nested pair.
pub fn design_validate(d: &SteinerDesign) -> VerifyReport {
    let start = Instant::now();
    let divisible = d.q % 60 == 5 || d.q % 60 == 41;
    let mut report = VerifyReport::new(
        format!(
            "steiner tau={} q={} blocks={} (q mod 60 = {}, joint divisibility {})",
            d.tau,
            d.q,
            d.blocks.len(),
            d.q % 60,
            if divisible { "holds" } else { "fails" }
        ),
        d.blocks.len(),
    );
    let mut counts: HashMap<Vec<u16>, u32> = HashMap::new();
    for b in &d.blocks {
        for idx in combinations(5, d.tau) {
            let key: Vec<u16> = idx.iter().map(|&i| b[i]).collect();
            *counts.entry(key).or_insert(0) += 1;
        }
    }
    'sweep: {
        for subset in combinations(d.q as usize, d.tau) {
            report.checks += 1;
            let key: Vec<u16> = subset.iter().map(|&p| p as u16).collect();
            let c = counts.get(&key).copied().unwrap_or(0);
            if c != 1 {
                report = report.fail(format!(
                    "{}-subset {key:?} is covered by {c} blocks",
                    d.tau
                ));
                break 'sweep;
            }
        }
        // closed form: each block covers C(5,τ) subsets, each exactly once
        let per_block = combinations(5, d.tau).len() as u64;
        let total = combinations(d.q as usize, d.tau).len() as u64;
        if d.blocks.len() as u64 * per_block != total {
            report = report.fail(format!(
                "{} blocks cover {} subsets, Q_{} has {total}",
                d.blocks.len(),
                d.blocks.len() as u64 * per_block,
                d.q
            ));
        }
    }
    report.millis = start.elapsed().as_millis();
    report
}

/// The 60 tuples obtained by letting the even permutations act on the
/// ascending ordering of a 5-point block. Every tuple uses each point once;
/// pairwise Hamming distance is at least 3.
pub fn alt5_orbit(block: &[u16]) -> Result<Code> {
    if block.len() != 5 {
        return Err(Error::InvalidDesign {
            reason: format!("orbit block {block:?} does not have 5 points"),
        });
    }
    let mut points = [0u16; 5];
    points.copy_from_slice(block);
    points.sort_unstable();
    if points.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DuplicatePoint {
            block: block.to_vec(),
        });
    }
    let q = points[4] + 1;
    let mut words = Vec::with_capacity(60);
    for a in 0..5 {
        for b in 0..5 {
            for c in 0..5 {
                for d in 0..5 {
                    for e in 0..5 {
                        let perm = [a, b, c, d, e];
                        let mut seen = [false; 5];
                        if perm.iter().any(|&i| std::mem::replace(&mut seen[i], true)) {
                            continue;
                        }
                        let inversions = (0..5)
                            .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
                            .filter(|&(i, j)| perm[i] > perm[j])
                            .count();
                        if inversions % 2 == 0 {
                            words.push(perm.iter().map(|&i| points[i]).collect::<Vec<u16>>());
                        }
                    }
                }
            }
        }
    }
    debug_assert_eq!(words.len(), 60);
    Code::new(Alphabet::plain(q), 5, 2, &words)
}

/// The order-5 code placed on a block: the full 125-word linear code with
/// symbols renamed through the ascending block ordering. Contains exactly
/// the five constant words of the block.
fn block_code_words(rs5: &Code, block: &[u16; 5]) -> Vec<Vec<u16>> {
    rs5.words()
        .map(|w| w.iter().map(|&s| block[s as usize]).collect())
        .collect()
}

/// Builds an MDS(2,5,q) code from a nested pair of designs: every block of
/// the τ=2 design contributes a full order-5 code, every remaining block of
/// the τ=3 design contributes an alternating-group orbit, and the constant
/// words (shared between blocks through common points) are added once.
pub fn theorem3_assemble(d2: &SteinerDesign, d3: &SteinerDesign) -> Result<Code> {
    if d2.tau() != 2 || d3.tau() != 3 {
        return Err(Error::InvalidDesign {
            reason: format!(
                "need strengths tau=2 and tau=3, got {} and {}",
                d2.tau(),
                d3.tau()
            ),
        });
    }
    if d2.q() != d3.q() {
        return Err(Error::InvalidDesign {
            reason: format!("point counts differ: {} vs {}", d2.q(), d3.q()),
        });
    }
    let q = d2.q();
    let d3_set: HashSet<&[u16; 5]> = d3.blocks().iter().collect();
    for b in d2.blocks() {
        if !d3_set.contains(b) {
            return Err(Error::NotNested {
                reason: format!("block {b:?} of the pair design is absent from the triple design"),
            });
        }
    }
    for d in [d2, d3] {
        let report = design_validate(d);
        if !report.pass {
            return Err(Error::InvalidDesign {
                reason: format!(
                    "tau={} design fails validation: {}",
                    d.tau(),
                    report.counterexample.unwrap_or_default()
                ),
            });
        }
    }

    let f5 = Field::new(5)?;
    let rs5 = rs_parity(&f5, 5, 3)?.kernel()?;
    for a in 0..5u16 {
        debug_assert!(rs5.contains(&[a; 5]), "order-5 code must hold its constants");
    }

    let d2_set: HashSet<&[u16; 5]> = d2.blocks().iter().collect();
    let mut flat: Vec<u16> = Vec::with_capacity((q as usize).pow(3) * 5);
    for a in 0..q {
        flat.extend_from_slice(&[a; 5]);
    }
    for block in d2.blocks() {
        for w in block_code_words(&rs5, block) {
            if w.iter().all(|&s| s == w[0]) {
                continue; // constants are contributed once, above
            }
            flat.extend_from_slice(&w);
        }
    }
    for block in d3.blocks() {
        if d2_set.contains(block) {
            continue;
        }
        let orbit = alt5_orbit(block)?;
        flat.extend_from_slice(orbit.flat());
    }

    let expected = q as u64
        + d2.blocks().len() as u64 * 120
        + (d3.blocks().len() - d2.blocks().len()) as u64 * 60;
    if (flat.len() / 5) as u64 != expected {
        return Err(Error::VerificationFailed {
            report: format!(
                "assembled {} words, bookkeeping expects {expected}",
                flat.len() / 5
            ),
        });
    }
    let code = Code::from_flat(Alphabet::plain(q), 5, 2, flat)?;
    if code.len() as u64 != expected || expected != (q as u64).pow(3) {
        return Err(Error::VerificationFailed {
            report: format!(
                "assembled {} distinct words, expected q^3 = {}",
                code.len(),
                (q as u64).pow(3)
            ),
        });
    }
    let report = mds_check(&code, 2);
    if !report.pass {
        return Err(Error::VerificationFailed {
            report: format!(
                "assembled code fails verification: {}",
                report.counterexample.unwrap_or_default()
            ),
        });
    }
    if code.len() <= crate::verify::DEFAULT_DISTANCE_BOUND {
        let dist = distance_check_bounded(&code, code.len())?;
        if dist != 3 {
            return Err(Error::VerificationFailed {
                report: format!("assembled code has distance {dist}, expected 3"),
            });
        }
    }
    Ok(code)
}

/// The one nested pair that needs no search: at q = 5 both designs consist
/// of the single block Q_5.
pub fn trivial_nested_q5() -> (SteinerDesign, SteinerDesign) {
    let block = vec![vec![0u16, 1, 2, 3, 4]];
    (
        SteinerDesign::new(2, 5, &block).expect("q=5 pair design"),
        SteinerDesign::new(3, 5, &block).expect("q=5 triple design"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::distance_check;

    #[test]
    fn trivial_designs_validate() {
        let (d2, d3) = trivial_nested_q5();
        let r2 = design_validate(&d2);
        assert!(r2.pass, "{r2}");
        assert!(r2.property.contains("joint divisibility holds"));
        let r3 = design_validate(&d3);
        assert!(r3.pass, "{r3}");
    }

    #[test]
    fn duplicate_block_over_covers() {
        let blocks = vec![vec![0u16, 1, 2, 3, 4], vec![0u16, 1, 2, 3, 4]];
        let d = SteinerDesign::new(2, 5, &blocks).unwrap();
        let r = design_validate(&d);
        assert!(!r.pass);
        assert!(r.counterexample.unwrap().contains("covered by 2 blocks"));
    }

    #[test]
    fn missing_pairs_fail_validation() {
        let d = SteinerDesign::new(2, 6, &[vec![0u16, 1, 2, 3, 4]]).unwrap();
        let r = design_validate(&d);
        assert!(!r.pass, "{r}");
    }

    #[test]
    fn orbit_members_and_parity() {
        let orbit = alt5_orbit(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(orbit.len(), 60);
        assert!(orbit.contains(&[0, 1, 2, 3, 4]));
        // a single transposition is odd, so this tuple is excluded
        assert!(!orbit.contains(&[1, 0, 2, 3, 4]));
        // each member uses every block point exactly once
        for w in orbit.words() {
            let mut sorted = w.to_vec();
            sorted.sort_unstable();
            assert_eq!(sorted, vec![0, 1, 2, 3, 4]);
        }
        assert_eq!(distance_check(&orbit).unwrap(), 3);
    }

    #[test]
    fn orbit_respects_block_labels() {
        let orbit = alt5_orbit(&[7, 3, 11, 5, 2]).unwrap();
        assert_eq!(orbit.len(), 60);
        // identity on the ascending ordering
        assert!(orbit.contains(&[2, 3, 5, 7, 11]));
        assert!(!orbit.contains(&[3, 2, 5, 7, 11]));
    }

    #[test]
    fn orbit_rejects_repeated_points() {
        match alt5_orbit(&[0, 1, 2, 2, 4]) {
            Err(Error::DuplicatePoint { block }) => assert_eq!(block, vec![0, 1, 2, 2, 4]),
            other => panic!("expected DuplicatePoint, got {other:?}"),
        }
    }

    #[test]
    fn q5_assembly_is_the_order5_code() {
        let (d2, d3) = trivial_nested_q5();
        let c = theorem3_assemble(&d2, &d3).unwrap();
        assert_eq!(c.len(), 125);
        assert!(mds_check(&c, 2).pass);
        assert_eq!(distance_check(&c).unwrap(), 3);
        // with a single pair-design block on Q_5 the assembly must rebuild
        // the linear order-5 code exactly
        let f5 = Field::new(5).unwrap();
        let rs5 = rs_parity(&f5, 5, 3).unwrap().kernel().unwrap();
        assert_eq!(c.flat(), rs5.flat());
    }

    #[test]
    fn nesting_is_enforced() {
        let d2 = SteinerDesign::new(2, 6, &[vec![0u16, 1, 2, 3, 4]]).unwrap();
        let d3 = SteinerDesign::new(3, 6, &[vec![0u16, 1, 2, 3, 5]]).unwrap();
        match theorem3_assemble(&d2, &d3) {
            Err(Error::NotNested { .. }) => {}
            other => panic!("expected NotNested, got {other:?}"),
        }
    }

    #[test]
    fn invalid_designs_are_rejected() {
        // nested but not actually covering: q = 6 leaves pairs uncovered
        let d2 = SteinerDesign::new(2, 6, &[vec![0u16, 1, 2, 3, 4]]).unwrap();
        let d3 = SteinerDesign::new(3, 6, &[vec![0u16, 1, 2, 3, 4]]).unwrap();
        match theorem3_assemble(&d2, &d3) {
            Err(Error::InvalidDesign { .. }) => {}
            other => panic!("expected InvalidDesign, got {other:?}"),
        }
    }

    #[test]
    fn design_file_round_trip() {
        let (d2, _) = trivial_nested_q5();
        let mut buf = Vec::new();
        d2.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("#steiner v1\ntau=2 q=5 b=1\n"));
        let back = SteinerDesign::read_from(&buf[..]).unwrap();
        assert_eq!(back, d2);
    }

    #[test]
    fn design_file_rejects_bad_counts() {
        let text = "#steiner v1\ntau=2 q=5 b=2\n0 1 2 3 4\n";
        match SteinerDesign::read_from(text.as_bytes()) {
            Err(Error::HeaderMismatch { field: "b", declared: 2, actual: 1 }) => {}
            other => panic!("expected HeaderMismatch, got {other:?}"),
        }
        let text = "#steiner v1\ntau=2 q=5 b=1\n0 1 2 3\n";
        assert!(matches!(
            SteinerDesign::read_from(text.as_bytes()),
            Err(Error::ParseError { .. })
        ));
    }
}
