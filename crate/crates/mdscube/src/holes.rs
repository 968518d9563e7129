//! Codes with j-A-holes and the hole-filling assemblies.
//!
//! A j-A-hole code of strength t is a distance-(t+1) code over an alphabet
//! with a designated hole subset A that (1) has exact distance t+1, (2) keeps
//! at most j-t-1 hole letters per word, (3) covers every vector outside A^d
//! within Hamming distance d-j+t, and (4) has the cardinality
//! sum_k C(d-t,k)(q-|A|)^(d-t-k)|A|^k for k < j-t. Such a code has a hole
//! exactly the right shape for a smaller code on A to fill, which is what
//! the assemblies in this module do.

use crate::code::{sort_dedup_flat, Alphabet, Code};
use crate::combine::{a_product, product, relabel, remove_subcode, super_chain_for_order};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linear::{coset_partition, extend_parity, rs_parity, SuperChain};
use crate::verify::{combinations, mds_check, VerifyReport};
use std::collections::HashMap;
use std::time::Instant;

/// A code together with its hole parameter j. Construction runs the full
/// four-condition verification and fails rather than return an unverified
/// value.
#[derive(Clone, Debug)]
pub struct HoleCode {
    code: Code,
    j: usize,
}

impl HoleCode {
    pub fn new(code: Code, j: usize) -> Result<Self> {
        if code.alphabet().hole().is_empty() {
            return Err(Error::HoleNotSubset {
                reason: "hole codes need a non-empty hole subset in their alphabet".into(),
            });
        }
        let t = code.strength();
        if j < t + 1 || j > code.dim() {
            return Err(Error::IngredientInvalid {
                which: "hole parameter",
                reason: format!("j={j} outside t+1..=d for t={t}, d={}", code.dim()),
            });
        }
        let h = HoleCode { code, j };
        let report = hole_verify(&h);
        if !report.pass {
            return Err(Error::VerificationFailed {
                report: report.to_string(),
            });
        }
        Ok(h)
    }

    pub fn code(&self) -> &Code {
        &self.code
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn hole(&self) -> &[u16] {
        self.code.alphabet().hole()
    }

    pub fn write(&self, path: &std::path::Path) -> Result<()> {
        self.code.write_annotated(path, Some(self.j))
    }
}

/// Per-condition verification outcome for a hole code.
#[derive(Clone, Debug)]
pub struct HoleReport {
    pub conditions: Vec<VerifyReport>,
    pub pass: bool,
}

impl std::fmt::Display for HoleReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.conditions {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn pack_projection(word: &[u16], subset: &[usize]) -> u64 {
    let mut key = 0u64;
    for &c in subset {
        key = key << 16 | word[c] as u64;
    }
    key
}

/// Checks the four defining conditions of a j-A-hole code and reports each
/// separately with a first counterexample on failure.
pub fn hole_verify(h: &HoleCode) -> HoleReport {
    hole_conditions(&h.code, h.j)
}

/// Same check against an arbitrary code and claimed hole parameter, without
/// constructing a `HoleCode` first — suitable for inspecting files that may
/// not actually satisfy the conditions.
pub fn hole_conditions(code: &Code, j: usize) -> HoleReport {
    let (d, t) = (code.dim(), code.strength());
    if j < t + 1 || j > d {
        let report = VerifyReport::new("hole parameter within t+1..=d".into(), code.len())
            .fail(format!("j={j} outside t+1..=d for t={t}, d={d}"));
        return HoleReport {
            conditions: vec![report],
            pass: false,
        };
    }
    let q = code.q() as usize;
    let hole = code.alphabet().hole();
    let n = code.len();
    let mut conditions = Vec::with_capacity(4);

    // 1: exact distance t+1 — no (d-t)-coordinate agreement between any two
    // words, and at least one (d-t-1)-coordinate agreement
    let start = Instant::now();
    let mut c1 = VerifyReport::new("hole condition 1: distance exactly t+1".into(), n);
    'cond1: {
        for subset in combinations(d, d - t) {
            let mut seen: HashMap<u64, usize> = HashMap::with_capacity(n);
            for (i, w) in code.words().enumerate() {
                c1.checks += 1;
                if let Some(&prev) = seen.get(&pack_projection(w, &subset)) {
                    c1 = c1.fail(format!(
                        "words {prev} and {i} agree on coordinates {subset:?}"
                    ));
                    break 'cond1;
                }
                seen.insert(pack_projection(w, &subset), i);
            }
        }
        let mut tight = false;
        'outer: for subset in combinations(d, d - t - 1) {
            let mut seen: HashMap<u64, usize> = HashMap::with_capacity(n);
            for (i, w) in code.words().enumerate() {
                c1.checks += 1;
                if seen.insert(pack_projection(w, &subset), i).is_some() {
                    tight = true;
                    break 'outer;
                }
            }
        }
        if !tight {
            c1 = c1.fail(format!(
                "no two words agree on any {} coordinates: distance exceeds {}",
                d - t - 1,
                t + 1
            ));
        }
    }
    c1.millis = start.elapsed().as_millis();
    conditions.push(c1);

    // 2: hole-letter budget per word
    let start = Instant::now();
    let mut c2 = VerifyReport::new(
        "hole condition 2: at most j-t-1 hole letters per word".into(),
        n,
    );
    let budget = j - t - 1;
    for (i, w) in code.words().enumerate() {
        c2.checks += 1;
        let carried = w.iter().filter(|&&s| code.alphabet().is_hole(s)).count();
        if carried > budget {
            c2 = c2.fail(format!(
                "word {i} = {w:?} carries {carried} hole letters, budget is {budget}"
            ));
            break;
        }
    }
    c2.millis = start.elapsed().as_millis();
    conditions.push(c2);

    // 3: neighborhood coverage — a vector is within distance d-j+t of the
    // code iff it agrees with some word on >= m = j-t coordinates, so index
    // all m-coordinate projections and sweep the whole space
    let start = Instant::now();
    let mut c3 = VerifyReport::new(
        "hole condition 3: covers exactly the complement of the hole space".into(),
        n,
    );
    'cond3: {
        let m = j - t;
        let subsets = combinations(d, m);
        let proj_space = q.pow(m as u32);
        let mut index: Vec<Vec<u64>> = vec![vec![0u64; proj_space.div_ceil(64)]; subsets.len()];
        for w in code.words() {
            for (si, subset) in subsets.iter().enumerate() {
                let mut key = 0usize;
                for &c in subset {
                    key = key * q + w[c] as usize;
                }
                index[si][key / 64] |= 1 << (key % 64);
            }
        }
        let total = q.pow(d as u32);
        let mut digits = vec![0u16; d];
        for u in 0..total {
            c3.checks += 1;
            let mut rest = u;
            for i in (0..d).rev() {
                digits[i] = (rest % q) as u16;
                rest /= q;
            }
            let covered = subsets.iter().enumerate().any(|(si, subset)| {
                let mut key = 0usize;
                for &c in subset {
                    key = key * q + digits[c] as usize;
                }
                index[si][key / 64] >> (key % 64) & 1 == 1
            });
            let in_hole_space = digits.iter().all(|&s| hole.binary_search(&s).is_ok());
            if covered && in_hole_space {
                c3 = c3.fail(format!("hole-space vector {digits:?} is covered"));
                break 'cond3;
            }
            if !covered && !in_hole_space {
                c3 = c3.fail(format!("vector {digits:?} is not covered"));
                break 'cond3;
            }
        }
    }
    c3.millis = start.elapsed().as_millis();
    conditions.push(c3);

    // 4: cardinality formula
    let start = Instant::now();
    let mut c4 = VerifyReport::new("hole condition 4: cardinality formula".into(), n);
    c4.checks = 1;
    let keep = (q - hole.len()) as u64;
    let holes = hole.len() as u64;
    let mut expected = 0u64;
    for k in 0..=(j - t - 1) as u64 {
        let mut binom = 1u64;
        for i in 0..k {
            binom = binom * ((d - t) as u64 - i) / (i + 1);
        }
        expected += binom * keep.pow((d - t) as u32 - k as u32) * holes.pow(k as u32);
    }
    if n as u64 != expected {
        c4 = c4.fail(format!("code has {n} words, the formula gives {expected}"));
    }
    c4.millis = start.elapsed().as_millis();
    conditions.push(c4);

    let pass = conditions.iter().all(|c| c.pass);
    HoleReport { conditions, pass }
}

/// The six printed block pairs of the order-6 hole-code fixture. Rows and
/// columns are indexed 0,1,2,3,a,b in printed order; the left square of each
/// pair is coordinate 4, the right square coordinate 5; the block index is
/// coordinate 3; dots mean no codeword.
const ORDER6_BLOCKS: &str = "\
a b 2 3 0 1 | 0 1 b a 3 2
1 0 b a 2 3 | a b 0 1 2 3
b a 0 1 3 2 | 3 2 a b 1 0
3 2 a b 1 0 | b a 3 2 0 1
0 3 1 2 . . | 2 0 1 3 . .
2 1 3 0 . . | 1 3 2 0 . .

1 0 a b 3 2 | b a 1 0 2 3
b a 2 3 1 0 | 1 0 a b 3 2
3 2 b a 0 1 | a b 2 3 0 1
a b 0 1 2 3 | 2 3 b a 1 0
2 1 3 0 . . | 0 2 3 1 . .
0 3 1 2 . . | 3 1 0 2 . .

2 3 b a 1 0 | a b 3 2 1 0
a b 1 0 3 2 | 3 2 b a 0 1
0 1 a b 2 3 | b a 0 1 3 2
b a 3 2 0 1 | 0 1 a b 2 3
3 0 2 1 . . | 1 3 2 0 . .
1 2 0 3 . . | 2 0 1 3 . .

b a 1 0 2 3 | 2 3 a b 0 1
2 3 a b 0 1 | b a 2 3 1 0
a b 3 2 1 0 | 1 0 b a 2 3
0 1 b a 3 2 | a b 1 0 3 2
1 2 0 3 . . | 3 1 0 2 . .
3 0 2 1 . . | 0 2 3 1 . .

0 2 3 1 . . | 1 2 0 3 . .
3 1 0 2 . . | 2 1 3 0 . .
1 3 2 0 . . | 0 3 1 2 . .
2 0 1 3 . . | 3 0 2 1 . .
. . . . . . | . . . . . .
. . . . . . | . . . . . .

3 1 0 2 . . | 3 0 2 1 . .
0 2 3 1 . . | 0 3 1 2 . .
2 0 1 3 . . | 2 1 3 0 . .
1 3 2 0 . . | 1 2 0 3 . .
. . . . . . | . . . . . .
. . . . . . | . . . . . .
";

fn order6_symbol(tok: &str) -> Option<u16> {
    match tok {
        "." => None,
        "a" => Some(4),
        "b" => Some(5),
        _ => Some(tok.parse().expect("fixture symbol")),
    }
}

/// The order-6 code with a 4-{a,b}-hole: 160 words of dimension 5,
/// transcribed from six block pairs of 6x6 squares and fully re-verified at
/// construction.
pub fn lemma1_code() -> Result<HoleCode> {
    let mut words: Vec<Vec<u16>> = Vec::with_capacity(160);
    for (z, block) in ORDER6_BLOCKS.trim().split("\n\n").enumerate() {
        for (x, line) in block.lines().enumerate() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            assert_eq!(toks.len(), 13, "fixture row shape");
            for y in 0..6 {
                let left = order6_symbol(toks[y]);
                let right = order6_symbol(toks[7 + y]);
                match (left, right) {
                    (Some(f1), Some(f2)) => {
                        words.push(vec![x as u16, y as u16, z as u16, f1, f2])
                    }
                    (None, None) => {}
                    _ => panic!("fixture dot pattern differs between the paired squares"),
                }
            }
        }
    }
    let labels = ["0", "1", "2", "3", "a", "b"].map(String::from).to_vec();
    let alphabet = Alphabet::with_labels(labels, vec![4, 5])?;
    let code = Code::new(alphabet, 5, 2, &words)?;
    HoleCode::new(code, 4)
}

fn flat_words_not_in(sup: &Code, sub: &Code) -> Vec<u16> {
    let d = sup.dim();
    let mut out = Vec::with_capacity((sup.len() - sub.len()) * d);
    for w in sup.words() {
        if !sub.contains(w) {
            out.extend_from_slice(w);
        }
    }
    out
}

/// Flattens the plain product of a word list and a code: pair (x, y) becomes
/// x·q + y coordinatewise.
fn push_product_pairs(d: usize, left_flat: &[u16], right: &Code, out: &mut Vec<u16>) {
    let q = right.q();
    for u in left_flat.chunks_exact(d) {
        for v in right.words() {
            for i in 0..d {
                out.push(u[i] * q + v[i]);
            }
        }
    }
}

fn ingredient(which: &'static str, reason: String) -> Error {
    Error::IngredientInvalid { which, reason }
}

/// Requires `c` to pass the strength-t certificate and the exact MDS size.
fn require_mds(c: &Code, t: usize, which: &'static str) -> Result<()> {
    let rep = mds_check(c, t);
    if !rep.pass {
        return Err(ingredient(
            which,
            format!(
                "fails the strength-{t} certificate: {}",
                rep.counterexample.unwrap_or_default()
            ),
        ));
    }
    Ok(())
}

/// Requires a hole code's non-hole letters to be the leading block 0..q-1
/// (the layout every collapse in this module produces and consumes).
fn require_trailing_holes(h: &HoleCode, which: &'static str) -> Result<u16> {
    let q1 = h.code().q();
    let holes = h.hole();
    let keep = q1 - holes.len() as u16;
    for (i, &a) in holes.iter().enumerate() {
        if a != keep + i as u16 {
            return Err(ingredient(
                which,
                format!("hole letters {holes:?} are not the trailing block of the alphabet"),
            ));
        }
    }
    Ok(keep)
}

/// The dimension-4 hole-filling assembly: fills the hole of F with E over
/// the hole letters and pads the rest of the first factor with plain
/// products against D.
///
/// C = E ∪ (M1 ×_A F) ∪ ((M∖M1) × D), an MDS(2,4,(p−1)q+q1) code.
pub fn prop7_assemble(
    m: &Code,
    m1: &Code,
    d: &Code,
    e: &Code,
    f: &HoleCode,
) -> Result<Code> {
    let dim = 4usize;
    for (c, name) in [(m, "M"), (m1, "M1"), (d, "D"), (e, "E")] {
        if c.dim() != dim {
            return Err(ingredient(name, format!("dimension {} != 4", c.dim())));
        }
    }
    if f.code().dim() != dim || f.j() != 4 {
        return Err(ingredient("F", "must be a dimension-4 hole code with j=4".into()));
    }
    let p = m.q();
    if m.len() != (p as usize).pow(2) {
        return Err(ingredient("M", format!("{} words, expected p^2", m.len())));
    }
    require_mds(m, 2, "M")?;
    if m1.q() != p || m1.len() != p as usize || !m1.is_subcode_of(m) {
        return Err(ingredient(
            "M1",
            "must be a p-word subset of M over the same alphabet".into(),
        ));
    }
    require_mds(m1, 3, "M1")?;
    let q = d.q();
    require_mds(d, 2, "D")?;
    if d.len() != (q as usize).pow(2) {
        return Err(ingredient("D", format!("{} words, expected q^2", d.len())));
    }
    let keep = require_trailing_holes(f, "F")?;
    if keep != q {
        return Err(Error::AlphabetMismatch {
            reason: format!(
                "F keeps {keep} non-hole letters but D has order {q}; they must agree"
            ),
        });
    }
    let holes = f.hole().to_vec();
    let a_len = holes.len() as u16;
    let target = p * q + a_len;
    // E lives on the trailing hole letters of the assembled alphabet
    if e.q() != target {
        return Err(Error::AlphabetMismatch {
            reason: format!(
                "E must be declared over the {target}-letter output alphabet, got {}",
                e.q()
            ),
        });
    }
    if e.flat().iter().any(|&s| s < p * q) {
        return Err(Error::AlphabetMismatch {
            reason: "E uses symbols outside the hole block of the output alphabet".into(),
        });
    }
    if e.len() != (a_len as usize).pow(2) {
        return Err(ingredient("E", format!("{} words, expected |A|^2", e.len())));
    }
    let (e_compact, _) = e.compact();
    require_mds(&e_compact, 2, "E")?;

    let mut flat = Vec::with_capacity((target as usize).pow(2) * dim);
    flat.extend_from_slice(e.flat());
    let (m1f, collisions) = a_product(m1, f.code(), &holes)?;
    if collisions != 0 {
        return Err(ingredient(
            "M1",
            format!("collapse against F lost {collisions} words; distance hypothesis violated"),
        ));
    }
    flat.extend_from_slice(m1f.flat());
    push_product_pairs(dim, &flat_words_not_in(m, m1), d, &mut flat);
    let expected = (target as usize).pow(2);
    let (flat, dup) = sort_dedup_flat(dim, &flat);
    if dup != 0 {
        return Err(Error::VerificationFailed {
            report: format!("assembly parts overlap in {dup} words"),
        });
    }
    let out = Code::from_flat(Alphabet::plain(target), dim, 2, flat)?;
    if out.len() != expected {
        return Err(Error::VerificationFailed {
            report: format!("assembled {} words, expected {expected}", out.len()),
        });
    }
    let rep = mds_check(&out, 2);
    if !rep.pass {
        return Err(Error::VerificationFailed {
            report: format!(
                "assembled code fails verification: {}",
                rep.counterexample.unwrap_or_default()
            ),
        });
    }
    Ok(out)
}

const ORDER13_M_LEFT: [[u16; 4]; 4] = [[0, 1, 2, 3], [3, 2, 1, 0], [1, 0, 3, 2], [2, 3, 0, 1]];
const ORDER13_M_RIGHT: [[u16; 4]; 4] = [[0, 1, 2, 3], [2, 3, 0, 1], [3, 2, 1, 0], [1, 0, 3, 2]];
// rows and columns indexed b, c, e
const ORDER13_D_LEFT: [[u16; 3]; 3] = [[0, 1, 2], [1, 2, 0], [2, 0, 1]];
const ORDER13_D_RIGHT: [[u16; 3]; 3] = [[0, 1, 2], [2, 0, 1], [1, 2, 0]];
// rows and columns indexed b, c, e, a with a = 3 the hole letter; 99 = dot
const ORDER13_F_LEFT: [[u16; 4]; 4] = [[3, 0, 1, 2], [1, 2, 3, 0], [0, 3, 2, 1], [2, 1, 0, 99]];
const ORDER13_F_RIGHT: [[u16; 4]; 4] = [[0, 3, 2, 1], [3, 0, 1, 2], [1, 2, 3, 0], [2, 1, 0, 99]];

/// The printed ingredients of the order-13 worked example: a square pair of
/// order 4 with its diagonal subset, a square pair of order 3, the 15-cell
/// hole-code pair over {b,c,e,a}, and the one-word code on {a}.
pub fn order13_ingredients() -> Result<(Code, Code, Code, Code, HoleCode)> {
    let square_words = |left: &[[u16; 4]; 4], right: &[[u16; 4]; 4]| -> Vec<Vec<u16>> {
        let mut words = Vec::with_capacity(16);
        for x in 0..4u16 {
            for y in 0..4u16 {
                words.push(vec![x, y, left[x as usize][y as usize], right[x as usize][y as usize]]);
            }
        }
        words
    };
    let m = Code::new(
        Alphabet::plain(4),
        4,
        2,
        &square_words(&ORDER13_M_LEFT, &ORDER13_M_RIGHT),
    )?;
    let m1_words: Vec<Vec<u16>> = (0..4u16)
        .map(|i| {
            vec![
                i,
                i,
                ORDER13_M_LEFT[i as usize][i as usize],
                ORDER13_M_RIGHT[i as usize][i as usize],
            ]
        })
        .collect();
    let m1 = Code::new(Alphabet::plain(4), 4, 3, &m1_words)?;
    let mut d_words = Vec::with_capacity(9);
    for x in 0..3u16 {
        for y in 0..3u16 {
            d_words.push(vec![
                x,
                y,
                ORDER13_D_LEFT[x as usize][y as usize],
                ORDER13_D_RIGHT[x as usize][y as usize],
            ]);
        }
    }
    let d = Code::new(Alphabet::plain(3), 4, 2, &d_words)?;
    let mut f_words = Vec::with_capacity(15);
    for x in 0..4u16 {
        for y in 0..4u16 {
            let (l, r) = (
                ORDER13_F_LEFT[x as usize][y as usize],
                ORDER13_F_RIGHT[x as usize][y as usize],
            );
            if l != 99 {
                f_words.push(vec![x, y, l, r]);
            }
        }
    }
    let labels = ["b", "c", "e", "a"].map(String::from).to_vec();
    let f_code = Code::new(Alphabet::with_labels(labels, vec![3])?, 4, 2, &f_words)?;
    let f = HoleCode::new(f_code, 4)?;
    let e = Code::new(Alphabet::plain(13), 4, 2, &[vec![12, 12, 12, 12]])?;
    Ok((m, m1, d, e, f))
}

/// The printed order-13 result square pair, row/column positions taken as
/// 0..12 and entries encoded as x·3 + {b→0, c→1, e→2} with the extra letter
/// a → 12. MDS verification is relabeling-invariant, so the positional
/// reading is as checkable as the original labels.
const ORDER13_SQUARE_1: &str = "\
 a 0b 0c 1b 1c 1e 2b 2c 2e 3b 3c 3e 0e
0c 0e  a 1c 1e 1b 2c 2e 2b 3c 3e 3b 0b
0b  a 0e 1e 1b 1c 2e 2b 2c 3e 3b 3c 0c
3b 3c 3e  a 2b 2c 1b 1c 1e 0b 0c 0e 2e
3c 3e 3b 2c 2e  a 1c 1e 1b 0c 0e 0b 2b
3e 3b 3c 2b  a 2e 1e 1b 1c 0e 0b 0c 2c
1b 1c 1e 0b 0c 0e  a 3b 3c 2b 2c 2e 3e
1c 1e 1b 0c 0e 0b 3c 3e  a 2c 2e 2b 3b
1e 1b 1c 0e 0b 0c 3b  a 3e 2e 2b 2c 3c
2b 2c 2e 3b 3c 3e 0b 0c 0e  a 1b 1c 1e
2c 2e 2b 3c 3e 3b 0c 0e 0b 1c 1e  a 1b
2e 2b 2c 3e 3b 3c 0e 0b 0c 1b  a 1e 1c
0e 0c 0b 2e 2c 2b 3e 3c 3b 1e 1b 1c  a
";

const ORDER13_SQUARE_2: &str = "\
0b  a 0e 1b 1c 1e 2b 2c 2e 3b 3c 3e 0c
 a 0b 0c 1e 1b 1c 2e 2b 2c 3e 3b 3c 0e
0c 0e  a 1c 1e 1b 2c 2e 2b 3c 3e 3b 0b
2b 2c 2e 3b  a 3e 0b 0c 0e 1b 1c 1e 3c
2e 2b 2c  a 3b 3c 0e 0b 0c 1e 1b 1c 3e
2c 2e 2b 3c 3e  a 0c 0e 0b 1c 1e 1b 3b
3b 3c 3e 2b 2c 2e 1b  a 1e 0b 0c 0e 1c
3e 3b 3c 2e 2b 2c  a 1b 1c 0e 0b 0c 1e
3c 3e 3b 2c 2e 2b 1c 1e  a 0c 0e 0b 1b
1b 1c 1e 0b 0c 0e 3b 3c 3e 2b  a 2e 2c
1e 1b 1c 0e 0b 0c 3e 3b 3c  a 2b 2c 2e
1c 1e 1b 0c 0e 0b 3c 3e 3b 2c 2e  a 2b
0e 0c 0b 3e 3c 3b 1e 1c 1b 2e 2b 2c  a
";

fn order13_entry(tok: &str) -> u16 {
    if tok == "a" {
        return 12;
    }
    let bytes = tok.as_bytes();
    let x = (bytes[0] - b'0') as u16;
    let y = match bytes[1] {
        b'b' => 0,
        b'c' => 1,
        b'e' => 2,
        other => panic!("fixture letter {}", other as char),
    };
    x * 3 + y
}

/// The order-13 square pair transcribed verbatim from the reference tables,
/// as a dimension-4 code of 169 words. The tables carry a transposition
/// slip: in the last row of both squares the entries of columns 10 and 11
/// are swapped, so the verbatim code misses strength 2 at exactly that spot.
/// Tests document the slip and check that undoing it reproduces the
/// assembled code cell for cell.
pub fn order13_printed_code() -> Result<Code> {
    let parse = |s: &str| -> Vec<Vec<u16>> {
        s.trim()
            .lines()
            .map(|line| line.split_whitespace().map(order13_entry).collect())
            .collect()
    };
    let s1 = parse(ORDER13_SQUARE_1);
    let s2 = parse(ORDER13_SQUARE_2);
    let mut words = Vec::with_capacity(169);
    for x in 0..13u16 {
        assert_eq!(s1[x as usize].len(), 13, "fixture row shape");
        for y in 0..13u16 {
            words.push(vec![x, y, s1[x as usize][y as usize], s2[x as usize][y as usize]]);
        }
    }
    Code::new(Alphabet::plain(13), 4, 2, &words)
}

/// The dimension-5 partial hole-filling assembly: k disjoint distance-4
/// subsets of M are collapsed against hole codes F_i (holes placed at the
/// disjoint global slots given in `a_slots`), the rest of M is padded with
/// D, and the union is itself a hole code with j=4 over the union of the
/// slots.
pub fn prop8_assemble(
    m: &Code,
    c_list: &[Code],
    d: &Code,
    f_list: &[HoleCode],
    a_slots: &[Vec<u16>],
) -> Result<HoleCode> {
    let dim = 5usize;
    let k = c_list.len();
    if k == 0 {
        return Err(ingredient(
            "C_list",
            "needs at least one distance-4 subset to collapse".into(),
        ));
    }
    if f_list.len() != k || a_slots.len() != k {
        return Err(ingredient(
            "C_list",
            format!(
                "got {k} subsets but {} hole codes and {} slot sets",
                f_list.len(),
                a_slots.len()
            ),
        ));
    }
    let p = m.q();
    if k > p as usize {
        return Err(ingredient("C_list", format!("k={k} exceeds p={p}")));
    }
    if m.dim() != dim || m.len() != (p as usize).pow(3) {
        return Err(ingredient("M", "must be a full strength-2 dimension-5 code".into()));
    }
    require_mds(m, 2, "M")?;
    let q = d.q();
    if d.dim() != dim || d.len() != (q as usize).pow(3) {
        return Err(ingredient("D", "must be a full strength-2 dimension-5 code".into()));
    }
    require_mds(d, 2, "D")?;
    let mut union_flat: Vec<u16> = Vec::new();
    for (i, c) in c_list.iter().enumerate() {
        if c.q() != p || c.dim() != dim || c.len() != (p as usize).pow(2) {
            return Err(ingredient("C_list", format!("subset {i} is not MDS(3,5,p)-shaped")));
        }
        if !c.is_subcode_of(m) {
            return Err(ingredient("C_list", format!("subset {i} is not inside M")));
        }
        require_mds(c, 3, "C_list")?;
        union_flat.extend_from_slice(c.flat());
    }
    let (union_flat, overlap) = sort_dedup_flat(dim, &union_flat);
    if overlap != 0 {
        return Err(ingredient("C_list", "subsets overlap".into()));
    }
    let mut a_len = None;
    for (i, f) in f_list.iter().enumerate() {
        if f.j() != 4 || f.code().dim() != dim {
            return Err(ingredient("F", format!("hole code {i} must have j=4, d=5")));
        }
        let keep = require_trailing_holes(f, "F")?;
        if keep != q {
            return Err(Error::AlphabetMismatch {
                reason: format!(
                    "hole code {i} keeps {keep} non-hole letters but D has order {q}"
                ),
            });
        }
        let len = f.hole().len();
        if *a_len.get_or_insert(len) != len {
            return Err(ingredient("F", "hole sizes differ between the hole codes".into()));
        }
    }
    let a_len = a_len.unwrap_or(0);
    let target = (p - k as u16) * q + k as u16 * (q + a_len as u16);
    let mut b: Vec<u16> = Vec::new();
    for (i, slots) in a_slots.iter().enumerate() {
        if slots.len() != a_len {
            return Err(ingredient("A_list", format!("slot set {i} has the wrong size")));
        }
        if slots.iter().any(|&s| s < p * q || s >= target) {
            return Err(ingredient(
                "A_list",
                format!("slot set {i} leaves the hole block {}..{target}", p * q),
            ));
        }
        b.extend_from_slice(slots);
    }
    let b_sorted = {
        let mut s = b.clone();
        s.sort_unstable();
        s.dedup();
        s
    };
    if b_sorted.len() != k * a_len {
        return Err(Error::HoleOverlap {
            reason: "the per-subset hole slots intersect".into(),
        });
    }

    let mut flat: Vec<u16> = Vec::new();
    for ((c, f), slots) in c_list.iter().zip(f_list).zip(a_slots) {
        let (piece, collisions) = a_product(c, f.code(), f.hole())?;
        if collisions != 0 {
            return Err(ingredient(
                "C_list",
                format!("collapse lost {collisions} words; distance hypothesis violated"),
            ));
        }
        // route this piece's trailing hole letters to its global slots
        let mut map: Vec<u16> = (0..piece.q()).collect();
        for (r, &slot) in slots.iter().enumerate() {
            map[(p * q + r as u16) as usize] = slot;
        }
        let placed = relabel(&piece, &map, Alphabet::plain(target))?;
        flat.extend_from_slice(placed.flat());
    }
    let rest = flat_words_not_in(m, &Code::from_flat(Alphabet::plain(p), dim, 2, union_flat)?);
    push_product_pairs(dim, &rest, d, &mut flat);
    let (flat, dup) = sort_dedup_flat(dim, &flat);
    if dup != 0 {
        return Err(Error::VerificationFailed {
            report: format!("assembly parts overlap in {dup} words"),
        });
    }
    let pq = p as u64 * q as u64;
    let expected = pq.pow(3) + 3 * pq.pow(2) * k as u64 * a_len as u64;
    if (flat.len() / dim) as u64 != expected {
        return Err(Error::VerificationFailed {
            report: format!("assembled {} words, expected {expected}", flat.len() / dim),
        });
    }
    let code = Code::from_flat(Alphabet::with_hole(target, b_sorted)?, dim, 2, flat)?;
    HoleCode::new(code, 4)
}

/// The main dimension-5 assembly. The three chain levels are collapsed
/// against G, F, and D in order of decreasing distance, and E fills the
/// remaining hole block:
///
/// C = E ∪ (M2 ×_A G) ∪ ((M1∖M2) ×_A F) ∪ ((M∖M1) × D)
///
/// The result is a full MDS(2,5,pq+q1−q) code, fully re-verified, including
/// the two subcode restrictions the construction promises.
pub fn theorem1_assemble(
    chain: &SuperChain,
    d: &Code,
    e: &Code,
    f: &HoleCode,
    g: &HoleCode,
) -> Result<Code> {
    let dim = 5usize;
    chain.verify()?;
    let p = chain.order();
    let q = d.q();
    if d.dim() != dim || d.len() != (q as usize).pow(3) {
        return Err(ingredient("D", "must be a full strength-2 dimension-5 code".into()));
    }
    require_mds(d, 2, "D")?;
    for (h, name, j) in [(f, "F", 4usize), (g, "G", 5usize)] {
        if h.j() != j || h.code().dim() != dim {
            return Err(ingredient(name, format!("must be a dimension-5 hole code with j={j}")));
        }
        let keep = require_trailing_holes(h, name)?;
        if keep != q {
            return Err(Error::AlphabetMismatch {
                reason: format!("{name} keeps {keep} non-hole letters but D has order {q}"),
            });
        }
        let rep = hole_verify(h);
        if !rep.pass {
            return Err(ingredient(name, format!("hole conditions fail:\n{rep}")));
        }
    }
    if f.code().q() != g.code().q() {
        return Err(Error::AlphabetMismatch {
            reason: format!(
                "F and G live on alphabets of sizes {} and {}",
                f.code().q(),
                g.code().q()
            ),
        });
    }
    let holes = f.hole().to_vec();
    let a_len = holes.len() as u16;
    let target = p * q + a_len;
    if e.q() != target {
        return Err(Error::AlphabetMismatch {
            reason: format!(
                "E must be declared over the {target}-letter output alphabet, got {}",
                e.q()
            ),
        });
    }
    if e.flat().iter().any(|&s| s < p * q) {
        return Err(Error::AlphabetMismatch {
            reason: "E uses symbols outside the hole block of the output alphabet".into(),
        });
    }
    if e.dim() != dim || e.len() != (a_len as usize).pow(3) {
        return Err(ingredient("E", format!("{} words, expected |A|^3", e.len())));
    }
    let (e_compact, _) = e.compact();
    require_mds(&e_compact, 2, "E")?;

    let mut flat: Vec<u16> = Vec::with_capacity((target as usize).pow(3) * dim);
    flat.extend_from_slice(e.flat());
    let (m2g, collisions) = a_product(chain.m2(), g.code(), &holes)?;
    if collisions != 0 {
        return Err(ingredient(
            "G",
            format!("collapse against M2 lost {collisions} words"),
        ));
    }
    flat.extend_from_slice(m2g.flat());
    let m1_minus_m2 = Code::from_flat(
        Alphabet::plain(p),
        dim,
        3,
        flat_words_not_in(chain.m1(), chain.m2()),
    )?;
    let (m1f, collisions) = a_product(&m1_minus_m2, f.code(), &holes)?;
    if collisions != 0 {
        return Err(ingredient(
            "F",
            format!("collapse against M1 minus M2 lost {collisions} words"),
        ));
    }
    flat.extend_from_slice(m1f.flat());
    let rest = flat_words_not_in(chain.m0(), chain.m1());
    push_product_pairs(dim, &rest, d, &mut flat);

    let (flat, dup) = sort_dedup_flat(dim, &flat);
    if dup != 0 {
        return Err(Error::VerificationFailed {
            report: format!("assembly parts overlap in {dup} words"),
        });
    }
    let out = Code::from_flat(Alphabet::plain(target), dim, 2, flat)?;
    let expected = (target as usize).pow(3);
    if out.len() != expected {
        return Err(Error::VerificationFailed {
            report: format!("assembled {} words, expected {expected}", out.len()),
        });
    }
    let rep = mds_check(&out, 2);
    if !rep.pass {
        return Err(Error::VerificationFailed {
            report: format!(
                "assembled code fails verification: {}",
                rep.counterexample.unwrap_or_default()
            ),
        });
    }
    // promised subcode restrictions, one sample each
    let x_outer = &rest[..dim];
    let sub_d = restrict_block(&out, x_outer, q, a_len, false)?;
    require_mds(&sub_d, 2, "restriction to a plain-product block")?;
    if sub_d.len() != (q as usize).pow(3) {
        return Err(Error::VerificationFailed {
            report: "plain-product restriction has the wrong size".into(),
        });
    }
    let x_inner = chain.m2().word(0).to_vec();
    let sub_q1 = restrict_block(&out, &x_inner, q, a_len, true)?;
    require_mds(&sub_q1, 2, "restriction to an inner block plus hole letters")?;
    if sub_q1.len() != (q as usize + a_len as usize).pow(3) {
        return Err(Error::VerificationFailed {
            report: "inner-block restriction has the wrong size".into(),
        });
    }
    Ok(out)
}

/// Collects the words of `c` whose coordinate i lies in the block of q
/// symbols belonging to x[i] (optionally together with the trailing hole
/// letters) and re-indexes them onto a small alphabet.
fn restrict_block(
    c: &Code,
    x: &[u16],
    q: u16,
    a_len: u16,
    include_holes: bool,
) -> Result<Code> {
    let d = c.dim();
    let hole_base = c.q() - a_len;
    let mut flat = Vec::new();
    'words: for w in c.words() {
        let mut mapped = Vec::with_capacity(d);
        for i in 0..d {
            let s = w[i];
            if s >= hole_base {
                if !include_holes {
                    continue 'words;
                }
                mapped.push(q + (s - hole_base));
            } else if s / q == x[i] {
                mapped.push(s % q);
            } else {
                continue 'words;
            }
        }
        flat.extend_from_slice(&mapped);
    }
    let size = if include_holes { q + a_len } else { q };
    Code::from_flat(Alphabet::plain(size), d, 2, flat)
}

/// End-to-end construction of an MDS(2,5,16p+4) code: a nested chain of
/// order p, an order-16 linear code, the order-20 hole codes built from the
/// order-6 fixture and a product-minus-subcode, and an order-4 code filling
/// the final hole.
pub fn theorem2_pipeline(p: u64) -> Result<Code> {
    if p > 4095 {
        return Err(Error::NotAdmissible {
            p,
            reason: "output order 16p+4 exceeds the 16-bit symbol space".into(),
        });
    }
    let chain = super_chain_for_order(p)?;
    let f16 = Field::new(16)?;
    let d = rs_parity(&f16, 5, 3)?.kernel()?;

    // F: two disjoint distance-4 classes of the order-4 code, collapsed
    // against the order-6 hole fixture
    let f4 = Field::new(4)?;
    let h2 = rs_parity(&f4, 5, 3)?;
    let m4 = h2.kernel()?;
    let sub = extend_parity(&h2)?.kernel()?;
    let classes = coset_partition(&sub, &m4, &f4)?;
    let lemma = lemma1_code()?;
    let f = prop8_assemble(
        &m4,
        &classes[..2],
        &m4,
        &[lemma.clone(), lemma],
        &[vec![16, 17], vec![18, 19]],
    )?;

    // G: remove the order-4 constant-column subcode from the 4 x 5 product,
    // then move its hole letters onto F's
    let f5 = Field::new(5)?;
    let rs4 = rs_parity(&f4, 5, 3)?.kernel()?;
    let rs5 = rs_parity(&f5, 5, 3)?.kernel()?;
    let big = product(&rs4, &rs5)?;
    let hole_a: Vec<u16> = (0..4u16).map(|x| x * 5).collect(); // Q_4 x {0}
    let g0 = remove_subcode(&big, &hole_a)?;
    let mut g_map = vec![0u16; 20];
    for x in 0..4u16 {
        for y in 0..5u16 {
            g_map[(x * 5 + y) as usize] = if y == 0 { 16 + x } else { x * 4 + (y - 1) };
        }
    }
    let g_code = relabel(
        g0.code(),
        &g_map,
        Alphabet::with_hole(20, vec![16, 17, 18, 19])?,
    )?;
    let g = HoleCode::new(g_code, 5)?;

    // E: the order-4 code moved onto the trailing hole block of the output
    let pq = chain.order() * 16;
    let e_map: Vec<u16> = (0..4u16).map(|i| pq + i).collect();
    let e = relabel(&rs4, &e_map, Alphabet::plain(pq + 4))?;

    theorem1_assemble(&chain, &d, &e, &f, &g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::distance_check;

    #[test]
    fn order6_fixture_verifies() {
        let h = lemma1_code().unwrap();
        assert_eq!(h.code().len(), 160);
        assert_eq!(h.j(), 4);
        assert_eq!(h.hole(), &[4, 5]);
        let report = hole_verify(&h);
        assert!(report.pass, "{report}");
        assert_eq!(distance_check(h.code()).unwrap(), 3);
    }

    #[test]
    fn order6_fixture_first_cell() {
        let h = lemma1_code().unwrap();
        // cell (0,0) of the first block pair: left entry a, right entry 0
        assert!(h.code().contains(&[0, 0, 0, 4, 0]));
    }

    #[test]
    fn order6_fixture_hole_budget() {
        let h = lemma1_code().unwrap();
        for w in h.code().words() {
            let holes = w.iter().filter(|&&s| s >= 4).count();
            assert!(holes <= 1, "word {w:?} carries {holes} hole letters");
        }
    }

    #[test]
    fn misdeclared_hole_parameter_fails_cardinality() {
        let h = lemma1_code().unwrap();
        let relaxed = HoleCode {
            code: h.code().clone(),
            j: 5,
        };
        let report = hole_verify(&relaxed);
        assert!(!report.pass);
        assert!(!report.conditions[3].pass, "{report}");
    }

    #[test]
    fn order13_printed_pair_has_one_transposed_cell_pair() {
        let printed = order13_printed_code().unwrap();
        assert_eq!(printed.len(), 169);
        // verbatim, the last row of both squares swaps columns 10 and 11,
        // so column 10 of the first square carries the symbol 1b twice
        let rep = mds_check(&printed, 2);
        assert!(!rep.pass);
        let mut words: Vec<Vec<u16>> = printed.words().map(|w| w.to_vec()).collect();
        let i10 = words.iter().position(|w| w[0] == 12 && w[1] == 10).unwrap();
        let i11 = words.iter().position(|w| w[0] == 12 && w[1] == 11).unwrap();
        let (a, b) = (words[i10].clone(), words[i11].clone());
        words[i10] = vec![12, 10, b[2], b[3]];
        words[i11] = vec![12, 11, a[2], a[3]];
        let corrected = Code::new(Alphabet::plain(13), 4, 2, &words).unwrap();
        let rep = mds_check(&corrected, 2);
        assert!(rep.pass, "{rep}");
        assert_eq!(distance_check(&corrected).unwrap(), 3);
        // with the slip undone the tables equal the assembly exactly
        let (m, m1, d, e, f) = order13_ingredients().unwrap();
        let assembled = prop7_assemble(&m, &m1, &d, &e, &f).unwrap();
        assert_eq!(corrected.flat(), assembled.flat());
    }

    #[test]
    fn order13_assembly_matches_print_in_size_and_strength() {
        let (m, m1, d, e, f) = order13_ingredients().unwrap();
        assert!(mds_check(&m, 2).pass);
        assert!(mds_check(&m1, 3).pass);
        assert!(mds_check(&d, 2).pass);
        let report = hole_verify(&f);
        assert!(report.pass, "{report}");
        let c = prop7_assemble(&m, &m1, &d, &e, &f).unwrap();
        assert_eq!(c.q(), 13);
        assert_eq!(c.len(), 169);
        assert_eq!(distance_check(&c).unwrap(), 3);
    }

    #[test]
    fn order13_assembly_rejects_bad_ingredients() {
        let (m, _m1, d, e, f) = order13_ingredients().unwrap();
        // break M1: take four words that are not pairwise distance 4
        let bad_m1 = Code::new(
            Alphabet::plain(4),
            4,
            3,
            &[
                m.word(0).to_vec(),
                m.word(1).to_vec(),
                m.word(2).to_vec(),
                m.word(3).to_vec(),
            ],
        )
        .unwrap();
        match prop7_assemble(&m, &bad_m1, &d, &e, &f) {
            Err(Error::IngredientInvalid { which: "M1", .. }) => {}
            other => panic!("expected IngredientInvalid for M1, got {other:?}"),
        }
    }

    #[test]
    fn order20_hole_code_via_partial_collapse() {
        let f4 = Field::new(4).unwrap();
        let h2 = rs_parity(&f4, 5, 3).unwrap();
        let m4 = h2.kernel().unwrap();
        let sub = extend_parity(&h2).unwrap().kernel().unwrap();
        let classes = coset_partition(&sub, &m4, &f4).unwrap();
        let lemma = lemma1_code().unwrap();
        let s = prop8_assemble(
            &m4,
            &classes[..2],
            &m4,
            &[lemma.clone(), lemma],
            &[vec![16, 17], vec![18, 19]],
        )
        .unwrap();
        assert_eq!(s.code().q(), 20);
        assert_eq!(s.code().len(), 7168);
        assert_eq!(s.j(), 4);
        assert_eq!(s.hole(), &[16, 17, 18, 19]);
        assert_eq!(distance_check(s.code()).unwrap(), 3);
    }

    #[test]
    fn partial_collapse_rejects_overlapping_slots() {
        let f4 = Field::new(4).unwrap();
        let h2 = rs_parity(&f4, 5, 3).unwrap();
        let m4 = h2.kernel().unwrap();
        let sub = extend_parity(&h2).unwrap().kernel().unwrap();
        let classes = coset_partition(&sub, &m4, &f4).unwrap();
        let lemma = lemma1_code().unwrap();
        match prop8_assemble(
            &m4,
            &classes[..2],
            &m4,
            &[lemma.clone(), lemma],
            &[vec![16, 17], vec![16, 17]],
        ) {
            Err(Error::HoleOverlap { .. }) => {}
            other => panic!("expected HoleOverlap, got {other:?}"),
        }
    }

    #[test]
    fn partial_collapse_requires_a_subset() {
        let f4 = Field::new(4).unwrap();
        let m4 = rs_parity(&f4, 5, 3).unwrap().kernel().unwrap();
        // k = 0 would leave no holes at all, so the assembly refuses it
        let err = prop8_assemble(&m4, &[], &m4, &[], &[]).unwrap_err();
        assert!(matches!(
            err,
            Error::IngredientInvalid {
                which: "C_list",
                ..
            }
        ));
    }

    #[test]
    fn order20_full_hole_code_from_product() {
        let f4 = Field::new(4).unwrap();
        let f5 = Field::new(5).unwrap();
        let rs4 = rs_parity(&f4, 5, 3).unwrap().kernel().unwrap();
        let rs5 = rs_parity(&f5, 5, 3).unwrap().kernel().unwrap();
        let big = product(&rs4, &rs5).unwrap();
        let hole: Vec<u16> = (0..4u16).map(|x| x * 5).collect();
        let g = remove_subcode(&big, &hole).unwrap();
        assert_eq!(g.code().len(), 7936);
        assert_eq!(g.j(), 5);
        let report = hole_verify(&g);
        assert!(report.pass, "{report}");
    }
}
