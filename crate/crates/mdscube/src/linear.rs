//! Linear constructions: generalized Reed-Solomon parity checks, kernel
//! enumeration, nested distance-3/4/5 chains, and coset partitions.
//!
//! A parity check with r rows over GF(q) whose every r x r minor is
//! nonsingular has a kernel of exactly q^(d-r) words at distance r+1, which
//! is MDS of strength r. Chains arise from row prefixes of one matrix:
//! adding a row shrinks the kernel and raises the distance by one.

use crate::code::{Alphabet, Code};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::verify::{check_mds_feasible, combinations, distance_check, mds_check};

/// r x d matrix over GF(q), row-major, with the every-r-columns-independent
/// property verified at construction.
#[derive(Clone, Debug)]
pub struct ParityCheck {
    field: Field,
    rows: usize,
    dim: usize,
    mat: Vec<u16>,
}

fn swap_rows(a: &mut [u16], cols: usize, r1: usize, r2: usize) {
    if r1 != r2 {
        for c in 0..cols {
            a.swap(r1 * cols + c, r2 * cols + c);
        }
    }
}

fn mat_rank(f: &Field, rows: usize, cols: usize, m: &[u16]) -> usize {
    let mut a = m.to_vec();
    let mut rank = 0usize;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = (rank..rows).find(|&r| a[r * cols + col] != 0);
        let Some(p) = pivot else { continue };
        swap_rows(&mut a, cols, p, rank);
        let inv = f.inv(a[rank * cols + col]);
        for c in col..cols {
            a[rank * cols + c] = f.mul(a[rank * cols + c], inv);
        }
        for r in 0..rows {
            if r != rank && a[r * cols + col] != 0 {
                let factor = a[r * cols + col];
                for c in col..cols {
                    let sub = f.mul(factor, a[rank * cols + c]);
                    a[r * cols + c] = f.sub(a[r * cols + c], sub);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mat_inv(f: &Field, n: usize, m: &[u16]) -> Option<Vec<u16>> {
    let mut a = m.to_vec();
    let mut inv: Vec<u16> = vec![0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1;
    }
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r * n + col] != 0)?;
        if pivot != col {
            for c in 0..n {
                a.as_mut_slice().swap(pivot * n + c, col * n + c);
                inv.as_mut_slice().swap(pivot * n + c, col * n + c);
            }
        }
        let s = f.inv(a[col * n + col]);
        for c in 0..n {
            a[col * n + c] = f.mul(a[col * n + c], s);
            inv[col * n + c] = f.mul(inv[col * n + c], s);
        }
        for r in 0..n {
            if r != col && a[r * n + col] != 0 {
                let factor = a[r * n + col];
                for c in 0..n {
                    let t = f.mul(factor, a[col * n + c]);
                    a[r * n + c] = f.sub(a[r * n + c], t);
                    let t = f.mul(factor, inv[col * n + c]);
                    inv[r * n + c] = f.sub(inv[r * n + c], t);
                }
            }
        }
    }
    Some(inv)
}

/// Returns the first r-subset of columns whose square minor is singular.
fn first_singular_minor(f: &Field, rows: usize, dim: usize, mat: &[u16]) -> Option<Vec<usize>> {
    for cols in combinations(dim, rows) {
        let mut sub = vec![0u16; rows * rows];
        for (ci, &c) in cols.iter().enumerate() {
            for r in 0..rows {
                sub[r * rows + ci] = mat[r * dim + c];
            }
        }
        if mat_rank(f, rows, rows, &sub) < rows {
            return Some(cols);
        }
    }
    None
}

impl ParityCheck {
    /// Wraps a matrix after verifying the minor property.
    pub fn new(field: Field, rows: usize, dim: usize, mat: Vec<u16>) -> Result<Self> {
        if mat.len() != rows * dim {
            return Err(Error::LengthMismatch {
                expected: rows * dim,
                got: mat.len(),
            });
        }
        if let Some(sym) = mat.iter().find(|&&s| s >= field.order()) {
            return Err(Error::SymbolOutOfRange {
                sym: *sym as u32,
                q: field.order(),
                at: Some("parity matrix".into()),
            });
        }
        if let Some(cols) = first_singular_minor(&field, rows, dim, &mat) {
            return Err(Error::IngredientInvalid {
                which: "parity matrix",
                reason: format!("columns {cols:?} form a singular minor"),
            });
        }
        Ok(ParityCheck {
            field,
            rows,
            dim,
            mat,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn matrix(&self) -> &[u16] {
        &self.mat
    }

    /// The parity check formed by the top `rows` rows of this one.
    pub fn prefix(&self, rows: usize) -> Result<ParityCheck> {
        ParityCheck::new(
            self.field.clone(),
            rows,
            self.dim,
            self.mat[..rows * self.dim].to_vec(),
        )
    }

    /// Enumerates the kernel {x : Hx = 0}. The last r coordinates are
    /// dependent (their columns are invertible by the minor property); the
    /// remaining d-r run through all q^(d-r) assignments.
    pub fn kernel(&self) -> Result<Code> {
        let f = &self.field;
        let q = f.order();
        let (r, d) = (self.rows, self.dim);
        let free = d - r;
        // B = last r columns, solve B v = -A u  =>  v = T u
        let mut b = vec![0u16; r * r];
        for row in 0..r {
            for c in 0..r {
                b[row * r + c] = self.mat[row * d + free + c];
            }
        }
        let binv = mat_inv(f, r, &b).expect("verified minor property guarantees invertibility");
        // T = -B^-1 A, r x free
        let mut t = vec![0u16; r * free];
        for row in 0..r {
            for c in 0..free {
                let mut acc = 0u16;
                for k in 0..r {
                    acc = f.add(acc, f.mul(binv[row * r + k], self.mat[k * d + c]));
                }
                t[row * free + c] = f.neg(acc);
            }
        }
        let n = (q as usize).pow(free as u32);
        let mut flat = Vec::with_capacity(n * d);
        let mut u = vec![0u16; free];
        loop {
            flat.extend_from_slice(&u);
            for row in 0..r {
                let mut acc = 0u16;
                for c in 0..free {
                    acc = f.add(acc, f.mul(t[row * free + c], u[c]));
                }
                flat.push(acc);
            }
            // odometer with the last free coordinate fastest
            let mut i = free;
            loop {
                if i == 0 {
                    let code = Code::from_flat(Alphabet::plain(q), d, r, flat)?;
                    debug_assert_eq!(code.len(), n);
                    return Ok(code);
                }
                i -= 1;
                if u[i] + 1 < q {
                    u[i] += 1;
                    break;
                }
                u[i] = 0;
            }
        }
    }
}

/// Builds the (rho-1) x d parity check of a distance-rho generalized
/// Reed-Solomon code: row i holds the i-th powers of the field elements in
/// index order (with 0^0 = 1). For d = q+1 one extra unit column is chosen
/// by trying e_r, e_{r-1}, ... and keeping the first assignment that
/// preserves the minor property.
pub fn rs_parity(field: &Field, d: usize, rho: usize) -> Result<ParityCheck> {
    let q = field.order();
    if rho < 3 || rho > d {
        return Err(Error::IngredientInvalid {
            which: "rho",
            reason: format!("distance rho={rho} must satisfy 3 <= rho <= d={d}"),
        });
    }
    check_mds_feasible(rho - 1, d, q)?;
    let r = rho - 1;
    let points = (d).min(q as usize);
    let mut mat = vec![0u16; r * d];
    for (j, x) in (0..points as u16).enumerate() {
        for i in 0..r {
            mat[i * d + j] = field.pow(x, i as u32);
        }
    }
    if d == q as usize + 1 {
        let mut chosen = None;
        for unit in (0..r).rev() {
            for i in 0..r {
                mat[i * d + (d - 1)] = if i == unit { 1 } else { 0 };
            }
            if first_singular_minor(field, r, d, &mat).is_none() {
                chosen = Some(unit);
                break;
            }
        }
        if chosen.is_none() {
            return Err(Error::ChainNotFound {
                q,
                reason: format!("no unit extension column completes the {r} x {d} matrix"),
            });
        }
    }
    ParityCheck::new(field.clone(), r, d, mat)
}

/// Appends one row to a parity check, chosen as the lexicographically first
/// vector that keeps the minor property. The new kernel is a subcode of the
/// old one with distance raised by one.
pub fn extend_parity(h: &ParityCheck) -> Result<ParityCheck> {
    let f = h.field().clone();
    let q = f.order();
    let (r, d) = (h.rows(), h.dim());
    let total = (q as usize).pow(d as u32);
    let mut row = vec![0u16; d];
    for mut k in 0..total {
        for i in (0..d).rev() {
            row[i] = (k % q as usize) as u16;
            k /= q as usize;
        }
        let mut mat = h.matrix().to_vec();
        mat.extend_from_slice(&row);
        if first_singular_minor(&f, r + 1, d, &mat).is_none() {
            return ParityCheck::new(f, r + 1, d, mat);
        }
    }
    Err(Error::ChainNotFound {
        q,
        reason: format!("no row extends the {r} x {d} parity check"),
    })
}

/// A nested chain of three dimension-5 codes over one alphabet with sizes
/// (q^3, q^2, q) and distances (3, 4, 5).
#[derive(Clone, Debug)]
pub struct SuperChain {
    m0: Code,
    m1: Code,
    m2: Code,
}

impl SuperChain {
    pub fn from_parts(m0: Code, m1: Code, m2: Code) -> Result<Self> {
        let chain = SuperChain { m0, m1, m2 };
        chain.verify()?;
        Ok(chain)
    }

    pub fn order(&self) -> u16 {
        self.m0.q()
    }

    /// Outer code: q^3 words, distance 3.
    pub fn m0(&self) -> &Code {
        &self.m0
    }

    /// Middle code: q^2 words, distance 4.
    pub fn m1(&self) -> &Code {
        &self.m1
    }

    /// Inner code: q words, distance 5.
    pub fn m2(&self) -> &Code {
        &self.m2
    }

    /// Re-checks every chain invariant: alphabets, sizes, nesting, strength
    /// certificates, and exact distances (by the quadratic oracle where the
    /// level is small enough; exactness at the large level follows from the
    /// strength certificate plus the size bound).
    pub fn verify(&self) -> Result<()> {
        let q = self.m0.q();
        let fail = |reason: String| Error::VerificationFailed { report: reason };
        if self.m1.q() != q || self.m2.q() != q {
            return Err(fail("chain levels use different alphabets".into()));
        }
        for (code, d) in [(&self.m0, 5), (&self.m1, 5), (&self.m2, 5)] {
            if code.dim() != d {
                return Err(fail(format!("chain level has dimension {}", code.dim())));
            }
        }
        let (n0, n1, n2) = (self.m0.len(), self.m1.len(), self.m2.len());
        let qq = q as usize;
        if n2 != qq || n1 != qq * qq || n0 != qq * qq * qq {
            return Err(fail(format!(
                "chain sizes ({n0}, {n1}, {n2}) differ from (q^3, q^2, q) for q={q}"
            )));
        }
        if !self.m2.is_subcode_of(&self.m1) || !self.m1.is_subcode_of(&self.m0) {
            return Err(fail("chain levels are not nested".into()));
        }
        for (code, t) in [(&self.m0, 2usize), (&self.m1, 3), (&self.m2, 4)] {
            let rep = mds_check(code, t);
            if !rep.pass {
                return Err(fail(format!(
                    "level of size {} fails strength {t}: {}",
                    code.len(),
                    rep.counterexample.unwrap_or_default()
                )));
            }
            if code.len() <= crate::verify::DEFAULT_DISTANCE_BOUND {
                let dist = distance_check(code)?;
                if dist != t + 1 {
                    return Err(fail(format!(
                        "level of size {} has distance {dist}, expected {}",
                        code.len(),
                        t + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Builds a nested distance-3/4/5 chain over GF(q) as row-prefix kernels of
/// one 4 x 5 matrix.
///
/// For q >= 5 the plain Vandermonde matrix on the first five field elements
/// works: every k-row prefix has the k-columns-independent property. For
/// q = 4 the dimension forces an extended matrix, and no completion exists:
/// the exhaustive search over all third and fourth rows above the canonical
/// extended 2 x 5 base finds nothing, because a 16-word distance-4 code of
/// order 4 cannot contain four words at pairwise distance 5 (relabeling such
/// a quadruple to the constants would yield three mutually orthogonal
/// idempotent latin squares of order 4, which do not exist).
pub fn super_chain(field: &Field) -> Result<SuperChain> {
    let q = field.order();
    let d = 5usize;
    if (q as usize) + 1 < d {
        return Err(Error::DimensionTooLarge { d, q });
    }
    if q >= 5 {
        let mut mat = vec![0u16; 4 * d];
        for j in 0..d as u16 {
            for i in 0..4usize {
                mat[i * d + j as usize] = field.pow(j, i as u32);
            }
        }
        let full = ParityCheck::new(field.clone(), 4, d, mat)?;
        let m0 = full.prefix(2)?.kernel()?;
        let m1 = full.prefix(3)?.kernel()?;
        let m2 = full.kernel()?;
        return SuperChain::from_parts(m0, m1, m2);
    }
    // q = 4: exhaustive completion search over the canonical extended base.
    let base = rs_parity(field, d, 3)?;
    let qu = q as usize;
    let total = qu.pow(d as u32);
    let decode = |mut k: usize| -> Vec<u16> {
        let mut row = vec![0u16; d];
        for i in (0..d).rev() {
            row[i] = (k % qu) as u16;
            k /= qu;
        }
        row
    };
    for c in 0..total {
        let row3 = decode(c);
        let mut mat3 = base.matrix().to_vec();
        mat3.extend_from_slice(&row3);
        if first_singular_minor(field, 3, d, &mat3).is_some() {
            continue;
        }
        for s in 0..total {
            let row4 = decode(s);
            let mut mat4 = mat3.clone();
            mat4.extend_from_slice(&row4);
            if first_singular_minor(field, 4, d, &mat4).is_some() {
                continue;
            }
            let full = ParityCheck::new(field.clone(), 4, d, mat4)?;
            let m0 = full.prefix(2)?.kernel()?;
            let m1 = full.prefix(3)?.kernel()?;
            let m2 = full.kernel()?;
            return SuperChain::from_parts(m0, m1, m2);
        }
    }
    Err(Error::ChainNotFound {
        q,
        reason: "exhaustive search over all completions of the extended base found no \
                 matrix whose 2-, 3- and 4-row prefixes all keep the minor property; \
                 no 16-word distance-4 code of order 4 contains four words at pairwise \
                 distance 5"
            .into(),
    })
}

fn add_words(f: &Field, a: &[u16], b: &[u16]) -> Vec<u16> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

/// Linearity spot check: zero word present, closure under addition
/// (exhaustive for small codes, deterministic stride sample otherwise).
fn linearity_check(f: &Field, code: &Code, name: &'static str) -> Result<()> {
    let zero = vec![0u16; code.dim()];
    if !code.contains(&zero) {
        return Err(Error::NotLinear {
            reason: format!("{name} does not contain the zero word"),
        });
    }
    let n = code.len();
    let exhaustive = n * n <= 4_000_000;
    let check_pair = |i: usize, j: usize| -> Result<()> {
        let sum = add_words(f, code.word(i), code.word(j));
        if !code.contains(&sum) {
            return Err(Error::NotLinear {
                reason: format!("{name} is not closed under addition at words {i} and {j}"),
            });
        }
        Ok(())
    };
    if exhaustive {
        for i in 0..n {
            for j in i..n {
                check_pair(i, j)?;
            }
        }
    } else {
        let mut j = 1usize;
        for i in 0..10_000.min(n) {
            j = (j * 31 + 7) % n;
            check_pair(i % n, j)?;
        }
    }
    Ok(())
}

/// Splits `sup` into the q cosets of its subcode `sub` (translates of `sub`
/// by supercode words). Each translate keeps the subcode's strength; all are
/// pairwise disjoint and exactly cover the supercode.
pub fn coset_partition(sub: &Code, sup: &Code, field: &Field) -> Result<Vec<Code>> {
    let q = field.order();
    if sub.q() != q || sup.q() != q {
        return Err(Error::NotSubcode {
            reason: "codes are not over the field's alphabet".into(),
        });
    }
    if sub.dim() != sup.dim() {
        return Err(Error::DimensionMismatch {
            left: sub.dim(),
            right: sup.dim(),
        });
    }
    if sub.len() * q as usize != sup.len() {
        return Err(Error::NotSubcode {
            reason: format!(
                "supercode size {} is not q times subcode size {}",
                sup.len(),
                sub.len()
            ),
        });
    }
    if !sub.is_subcode_of(sup) {
        return Err(Error::NotSubcode {
            reason: "subcode words missing from the supercode".into(),
        });
    }
    linearity_check(field, sub, "subcode")?;
    linearity_check(field, sup, "supercode")?;
    let n = sup.len();
    let mut assigned = vec![false; n];
    let mut classes = Vec::with_capacity(q as usize);
    for rep in 0..n {
        if assigned[rep] {
            continue;
        }
        let rep_word = sup.word(rep).to_vec();
        let mut flat = Vec::with_capacity(sub.len() * sub.dim());
        for s in sub.words() {
            let w = add_words(field, &rep_word, s);
            // locate w in sup to mark it; membership is also the subcode test
            let mut lo = 0usize;
            let mut hi = n;
            let mut found = None;
            while lo < hi {
                let mid = (lo + hi) / 2;
                match sup.word(mid).cmp(w.as_slice()) {
                    std::cmp::Ordering::Less => lo = mid + 1,
                    std::cmp::Ordering::Greater => hi = mid,
                    std::cmp::Ordering::Equal => {
                        found = Some(mid);
                        break;
                    }
                }
            }
            let Some(pos) = found else {
                return Err(Error::NotSubcode {
                    reason: "translate of the subcode escapes the supercode".into(),
                });
            };
            if assigned[pos] {
                return Err(Error::NotSubcode {
                    reason: "translates overlap; the subcode is not a group under addition".into(),
                });
            }
            assigned[pos] = true;
            flat.extend_from_slice(&w);
        }
        let class = Code::from_flat(
            Alphabet::plain(q),
            sub.dim(),
            sub.strength(),
            flat,
        )?;
        let rep_check = mds_check(&class, sub.strength());
        if !rep_check.pass {
            return Err(Error::VerificationFailed {
                report: format!(
                    "coset {} fails strength {}: {}",
                    classes.len(),
                    sub.strength(),
                    rep_check.counterexample.unwrap_or_default()
                ),
            });
        }
        classes.push(class);
        if classes.len() == q as usize {
            break;
        }
    }
    if !assigned.iter().all(|&a| a) {
        return Err(Error::NotSubcode {
            reason: "translates do not cover the supercode".into(),
        });
    }
    Ok(classes)
}
