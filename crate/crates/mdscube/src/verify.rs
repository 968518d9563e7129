//! Exhaustive verification of code properties.
//!
//! `mds_check` is the workhorse: a code has strength t exactly when its
//! projection onto every (d-t)-subset of coordinates hits every tuple exactly
//! once. The check runs one flat u8 bucket array per coordinate subset, so
//! memory stays at q^(d-t) bytes per in-flight subset.
//!
//! `distance_check` is a deliberately independent oracle: a plain quadratic
//! scan over word pairs that shares no counting code with `mds_check`, kept
//! for cross-validation on small codes.

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;

use crate::code::{Code, LatinCubePair, OaRows};
use crate::error::{Error, Result};

/// Largest code the quadratic distance oracle accepts by default.
pub const DEFAULT_DISTANCE_BOUND: usize = 10_000;

#[derive(Clone, Copy, Debug)]
pub struct VerifyOpts {
    /// Number of worker threads for the projection passes. 1 = sequential.
    pub workers: usize,
}

impl Default for VerifyOpts {
    fn default() -> Self {
        VerifyOpts { workers: 1 }
    }
}

/// Outcome of a verification pass. `counterexample` holds a human-readable
/// witness for the first failure found (deterministic for fixed input).
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub property: String,
    pub pass: bool,
    pub counterexample: Option<String>,
    pub words: usize,
    pub checks: u64,
    pub millis: u128,
}

impl VerifyReport {
    pub(crate) fn new(property: String, words: usize) -> Self {
        VerifyReport {
            property,
            pass: true,
            counterexample: None,
            words,
            checks: 0,
            millis: 0,
        }
    }

    pub(crate) fn fail(mut self, witness: String) -> Self {
        self.pass = false;
        self.counterexample = Some(witness);
        self
    }

    /// Machine-readable single-line form.
    pub fn to_kv(&self) -> String {
        let mut s = format!(
            "property={} pass={} words={} checks={} millis={}",
            self.property.replace(' ', "_"),
            self.pass,
            self.words,
            self.checks,
            self.millis
        );
        if let Some(c) = &self.counterexample {
            s.push_str(&format!(" counterexample=\"{}\"", c.replace('"', "'")));
        }
        s
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} ({} words, {} checks, {} ms)",
            self.property,
            if self.pass { "PASS" } else { "FAIL" },
            self.words,
            self.checks,
            self.millis
        )?;
        if let Some(c) = &self.counterexample {
            writeln!(f, "  counterexample: {c}")?;
        }
        Ok(())
    }
}

/// Existence guard: MDS(t, d, q) with t >= 2 requires d <= q+1, i.e. the
/// number of free coordinates s = d-t stays below q. Rejects impossible
/// parameter requests before any construction work.
pub fn check_mds_feasible(t: usize, d: usize, q: u16) -> Result<()> {
    if t == 0 || t > d {
        return Err(Error::IngredientInvalid {
            which: "strength",
            reason: format!("t={t} must satisfy 1 <= t <= d={d}"),
        });
    }
    if t >= 2 && d > q as usize + 1 {
        return Err(Error::DimensionTooLarge { d, q });
    }
    Ok(())
}

/// All k-subsets of 0..d in lexicographic order.
pub(crate) fn combinations(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k == 0 {
        return vec![vec![]];
    }
    if k > d {
        return out;
    }
    loop {
        out.push(cur.clone());
        // advance odometer
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + d - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn checked_pow(q: u16, s: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..s {
        acc = acc.checked_mul(q as usize)?;
    }
    Some(acc)
}

/// Scans one coordinate subset; returns Err(witness) on the first tuple hit
/// twice. All buckets end at exactly 1 when the total word count equals the
/// bucket count and no bucket exceeds 1.
fn scan_subset(code: &Code, subset: &[usize], buckets: usize) -> std::result::Result<(), String> {
    let q = code.q() as usize;
    let dim = code.dim();
    let mut seen = vec![0u8; buckets];
    let flat = code.flat();
    let n = flat.len() / dim;
    for w in 0..n {
        let base = w * dim;
        let mut idx = 0usize;
        for &c in subset {
            idx = idx * q + flat[base + c] as usize;
        }
        if seen[idx] == 1 {
            let word = &flat[base..base + dim];
            let tuple: Vec<u16> = subset.iter().map(|&c| word[c]).collect();
            return Err(format!(
                "coordinates {subset:?} tuple {tuple:?} matched by more than one codeword (e.g. {word:?})"
            ));
        }
        seen[idx] = 1;
    }
    Ok(())
}

/// Checks that `code` is MDS of strength `t`: exact cardinality q^(d-t) and
/// every (d-t)-coordinate projection bijective.
pub fn mds_check(code: &Code, t: usize) -> VerifyReport {
    mds_check_with(code, t, &VerifyOpts::default())
}

pub fn mds_check_with(code: &Code, t: usize, opts: &VerifyOpts) -> VerifyReport {
    let start = Instant::now();
    let d = code.dim();
    let q = code.q();
    let mut report = VerifyReport::new(format!("mds t={t} d={d} q={q}"), code.len());
    if t == 0 || t > d {
        report = report.fail(format!("strength t={t} out of range for dimension {d}"));
        report.millis = start.elapsed().as_millis();
        return report;
    }
    let s = d - t;
    let expected = match checked_pow(q, s) {
        Some(v) => v,
        None => {
            report = report.fail("q^(d-t) overflows the addressable size".into());
            report.millis = start.elapsed().as_millis();
            return report;
        }
    };
    if code.len() != expected {
        report = report.fail(format!(
            "cardinality: expected q^(d-t) = {expected} codewords, found {}",
            code.len()
        ));
        report.millis = start.elapsed().as_millis();
        return report;
    }
    let subsets = combinations(d, s);
    let outcome: Option<(usize, String)> = if opts.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build();
        let run = |subsets: &[Vec<usize>]| {
            subsets
                .par_iter()
                .enumerate()
                .filter_map(|(i, sub)| scan_subset(code, sub, expected).err().map(|e| (i, e)))
                .min_by_key(|(i, _)| *i)
        };
        match pool {
            Ok(p) => p.install(|| run(&subsets)),
            Err(_) => run(&subsets),
        }
    } else {
        let mut found = None;
        for (i, sub) in subsets.iter().enumerate() {
            if let Err(e) = scan_subset(code, sub, expected) {
                found = Some((i, e));
                break;
            }
        }
        found
    };
    report.checks = (subsets.len() * code.len()) as u64;
    if let Some((_, witness)) = outcome {
        report = report.fail(witness);
    }
    report.millis = start.elapsed().as_millis();
    report
}

/// Exact minimum Hamming distance by quadratic scan. Refuses codes larger
/// than `DEFAULT_DISTANCE_BOUND`; see `distance_check_bounded`.
pub fn distance_check(code: &Code) -> Result<usize> {
    distance_check_bounded(code, DEFAULT_DISTANCE_BOUND)
}

pub fn distance_check_bounded(code: &Code, bound: usize) -> Result<usize> {
    let n = code.len();
    if n > bound {
        return Err(Error::TooLarge { words: n, bound });
    }
    if n < 2 {
        return Ok(code.dim()); // degenerate: sole word, conventionally d
    }
    let dim = code.dim();
    let flat = code.flat();
    let mut min = dim;
    for i in 0..n {
        let wi = &flat[i * dim..(i + 1) * dim];
        for j in i + 1..n {
            let wj = &flat[j * dim..(j + 1) * dim];
            let mut dist = 0usize;
            for k in 0..dim {
                if wi[k] != wj[k] {
                    dist += 1;
                }
            }
            if dist < min {
                min = dist;
                if min == 1 {
                    return Ok(1);
                }
            }
        }
    }
    Ok(min)
}

/// Orthogonal-array check at strength s and index 1: every s-subset of
/// columns carries every s-tuple exactly once. Independent of `mds_check`
/// (hash-map counting over a bitmask subset walk).
pub fn oa_check(rows: &OaRows<'_>, s: usize) -> VerifyReport {
    let start = Instant::now();
    let d = rows.d;
    let q = rows.q;
    let n = rows.rows();
    let mut report = VerifyReport::new(format!("oa s={s} d={d} q={q}"), n);
    if s == 0 || s > d {
        report = report.fail(format!("strength s={s} out of range for {d} columns"));
        report.millis = start.elapsed().as_millis();
        return report;
    }
    let expected = match checked_pow(q, s) {
        Some(v) => v,
        None => {
            report = report.fail("q^s overflows".into());
            report.millis = start.elapsed().as_millis();
            return report;
        }
    };
    if n != expected {
        report = report.fail(format!(
            "row count {n} differs from q^s = {expected} (index-1 array)"
        ));
        report.millis = start.elapsed().as_millis();
        return report;
    }
    let mut checks = 0u64;
    'mask: for mask in 1u32..(1u32 << d) {
        if mask.count_ones() as usize != s {
            continue;
        }
        let cols: Vec<usize> = (0..d).filter(|&c| mask >> c & 1 == 1).collect();
        let mut counts: HashMap<u64, u32> = HashMap::with_capacity(expected);
        for r in 0..n {
            let row = rows.row(r);
            let mut key = 0u64;
            for &c in &cols {
                key = key * q as u64 + row[c] as u64;
            }
            let e = counts.entry(key).or_insert(0);
            *e += 1;
            checks += 1;
            if *e > 1 {
                let tuple: Vec<u16> = cols.iter().map(|&c| row[c]).collect();
                report = report.fail(format!(
                    "columns {cols:?} tuple {tuple:?} appears more than once"
                ));
                break 'mask;
            }
        }
    }
    report.checks = checks;
    report.millis = start.elapsed().as_millis();
    report
}

/// Latin-cube pair check: each cube is latin along all three axes, and for
/// every axis and slice index the superimposed pair of faces contains each
/// ordered symbol pair exactly once.
pub fn cubes_check(pair: &LatinCubePair) -> VerifyReport {
    let start = Instant::now();
    let q = pair.q();
    let n = q as usize;
    let mut report = VerifyReport::new(format!("cubes q={q}"), n * n * n);
    let mut checks = 0u64;

    let value = |cube: usize, x: u16, y: u16, z: u16| -> u16 {
        if cube == 1 {
            pair.value1(x, y, z)
        } else {
            pair.value2(x, y, z)
        }
    };
    // latin lines: vary one axis, fix the other two
    let mut seen = vec![false; n];
    for cube in [1usize, 2] {
        for axis in 0..3usize {
            for a in 0..q {
                for b in 0..q {
                    seen.iter_mut().for_each(|v| *v = false);
                    for v in 0..q {
                        let (x, y, z) = match axis {
                            0 => (v, a, b),
                            1 => (a, v, b),
                            _ => (a, b, v),
                        };
                        let sym = value(cube, x, y, z) as usize;
                        checks += 1;
                        if seen[sym] {
                            report = report.fail(format!(
                                "cube {cube} is not latin along axis {axis}: symbol {sym} repeats on the line fixed at ({a},{b})"
                            ));
                            report.millis = start.elapsed().as_millis();
                            report.checks = checks;
                            return report;
                        }
                        seen[sym] = true;
                    }
                }
            }
        }
    }
    // face orthogonality: same axis and slice index in both cubes
    let mut pair_seen = vec![false; n * n];
    for axis in 0..3usize {
        for k in 0..q {
            pair_seen.iter_mut().for_each(|v| *v = false);
            for a in 0..q {
                for b in 0..q {
                    let (x, y, z) = match axis {
                        0 => (k, a, b),
                        1 => (a, k, b),
                        _ => (a, b, k),
                    };
                    let p = pair.value1(x, y, z) as usize * n + pair.value2(x, y, z) as usize;
                    checks += 1;
                    if pair_seen[p] {
                        report = report.fail(format!(
                            "faces at axis {axis} slice {k} superimpose pair ({}, {}) twice",
                            p / n,
                            p % n
                        ));
                        report.millis = start.elapsed().as_millis();
                        report.checks = checks;
                        return report;
                    }
                    pair_seen[p] = true;
                }
            }
        }
    }
    report.checks = checks;
    report.millis = start.elapsed().as_millis();
    report
}
