//! Finite field arithmetic over GF(p^m), materialized as lookup tables.
//!
//! Elements are indices 0..q. Index `i` encodes the polynomial whose
//! coefficients are the base-p digits of `i`, least significant digit first
//! (so the constant term is `i % p`). For m > 1 the reduction modulus is the
//! lexicographically smallest monic irreducible polynomial of degree m,
//! where candidates are compared by their coefficient tuples
//! (c_0, c_1, ..., c_{m-1}) starting from the constant term.

use crate::error::{Error, Result};

pub const DEFAULT_AXIOM_BOUND: u16 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    q: u16,
    p: u16,
    m: u32,
    /// Modulus coefficients, constant term first, including the leading 1.
    /// Empty for prime fields.
    modulus: Vec<u16>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

/// Outcome of the exhaustive axiom check. `violation` names the first axiom
/// that failed together with a witness.
#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub q: u16,
    pub pass: bool,
    pub violation: Option<String>,
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > q {
        return Some((q, 1)); // q itself is prime
    }
    let mut rest = q;
    let mut m = 0;
    while rest > 1 {
        if !rest.is_multiple_of(p) {
            return None;
        }
        rest /= p;
        m += 1;
    }
    Some((p, m))
}

/// Polynomial arithmetic helpers over Z_p. Coefficients are little-endian
/// (constant term first) and not necessarily trimmed.
fn poly_trim(a: &mut Vec<u16>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_rem(a: &[u16], b: &[u16], p: u16) -> Vec<u16> {
    // b must be monic after trimming
    let mut r: Vec<u16> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let shift = r.len() - 1 - db;
        let lead = *r.last().unwrap();
        for (i, &bc) in b.iter().enumerate() {
            let idx = shift + i;
            let sub = (lead as u32 * bc as u32) % p as u32;
            r[idx] = ((r[idx] as u32 + p as u32 - sub % p as u32) % p as u32) as u16;
        }
        poly_trim(&mut r);
        if r.len() - 1 < db {
            break;
        }
        if *r.last().unwrap() == 0 {
            break;
        }
    }
    poly_trim(&mut r);
    r
}

fn poly_is_zero(a: &[u16]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// True when the monic polynomial `f` (little-endian, leading coefficient 1)
/// has no monic divisor of degree 1..=deg(f)/2.
fn poly_irreducible(f: &[u16], p: u16) -> bool {
    let deg = f.len() - 1;
    for dd in 1..=deg / 2 {
        // enumerate all monic polynomials of degree dd
        let count = (p as u64).pow(dd as u32);
        for k in 0..count {
            let mut g: Vec<u16> = Vec::with_capacity(dd + 1);
            let mut kk = k;
            for _ in 0..dd {
                g.push((kk % p as u64) as u16);
                kk /= p as u64;
            }
            g.push(1);
            if poly_is_zero(&poly_rem(f, &g, p)) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u16, m: u32) -> Vec<u16> {
    // Candidates ordered by (c_0, c_1, ..., c_{m-1}) lexicographically.
    let total = (p as u64).pow(m);
    for k in 0..total {
        let mut coeffs = vec![0u16; m as usize + 1];
        coeffs[m as usize] = 1;
        let mut kk = k;
        // c_0 is the most significant digit of k so that increasing k walks
        // the tuples in lex order
        for i in (0..m as usize).rev() {
            coeffs[i] = (kk % p as u64) as u16;
            kk /= p as u64;
        }
        if poly_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over every prime field")
}

fn digits(i: u16, p: u16, m: u32) -> Vec<u16> {
    let mut out = Vec::with_capacity(m as usize);
    let mut v = i;
    for _ in 0..m {
        out.push(v % p);
        v /= p;
    }
    out
}

fn from_digits(d: &[u16], p: u16) -> u16 {
    let mut v: u32 = 0;
    for &c in d.iter().rev() {
        v = v * p as u32 + c as u32;
    }
    v as u16
}

impl Field {
    /// Builds GF(q) with fully materialized operation tables.
    pub fn new(q: u16) -> Result<Self> {
        let (p64, m) = prime_power(q as u64).ok_or(Error::NotPrimePower(q as u64))?;
        let p = p64 as u16;
        let modulus = if m == 1 {
            Vec::new()
        } else {
            smallest_irreducible(p, m)
        };
        let n = q as usize;
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        for a in 0..q {
            let da = digits(a, p, m);
            for b in 0..q {
                let db = digits(b, p, m);
                let sum: Vec<u16> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add[a as usize * n + b as usize] = from_digits(&sum, p);
                // schoolbook product then reduction
                let mut prod = vec![0u16; 2 * m as usize];
                for (i, &x) in da.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = ((prod[i + j] as u32 + x as u32 * y as u32)
                            % p as u32) as u16;
                    }
                }
                let reduced = if m == 1 {
                    vec![prod[0]]
                } else {
                    let mut r = poly_rem(&prod, &modulus, p);
                    r.resize(m as usize, 0);
                    r
                };
                mul[a as usize * n + b as usize] = from_digits(&reduced, p);
            }
        }
        let mut neg = vec![0u16; n];
        for a in 0..q {
            for b in 0..q {
                if add[a as usize * n + b as usize] == 0 {
                    neg[a as usize] = b;
                    break;
                }
            }
        }
        let mut inv = vec![0u16; n];
        for a in 1..q {
            for b in 1..q {
                if mul[a as usize * n + b as usize] == 1 {
                    inv[a as usize] = b;
                    break;
                }
            }
        }
        Ok(Field {
            q,
            p,
            m,
            modulus,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn order(&self) -> u16 {
        self.q
    }

    pub fn characteristic(&self) -> u16 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Modulus coefficients (constant term first, monic), empty for prime q.
    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; only defined for a != 0.
    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        debug_assert!(a != 0, "zero has no multiplicative inverse");
        self.inv[a as usize]
    }

    /// a^e with 0^0 = 1.
    pub fn pow(&self, a: u16, e: u32) -> u16 {
        let mut acc = 1u16;
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// Exhaustively checks every field axiom, up to the default size bound.
    pub fn axiom_check(&self) -> Result<AxiomReport> {
        self.axiom_check_bounded(DEFAULT_AXIOM_BOUND)
    }

    /// Exhaustive axiom check with an explicit order bound (the check is
    /// cubic in q). Reports the first violated axiom with a witness.
    pub fn axiom_check_bounded(&self, bound: u16) -> Result<AxiomReport> {
        if self.q > bound {
            return Err(Error::TooLarge {
                words: self.q as usize,
                bound: bound as usize,
            });
        }
        let q = self.q;
        let fail = |msg: String| AxiomReport {
            q,
            pass: false,
            violation: Some(msg),
        };
        for a in 0..q {
            if self.add(a, 0) != a {
                return Ok(fail(format!("additive identity: {a} + 0 = {}", self.add(a, 0))));
            }
            if self.mul(a, 1) != a {
                return Ok(fail(format!(
                    "multiplicative identity: {a} * 1 = {}",
                    self.mul(a, 1)
                )));
            }
            if self.add(a, self.neg(a)) != 0 {
                return Ok(fail(format!("additive inverse: {a} + (-{a}) != 0")));
            }
            if a != 0 && self.mul(a, self.inv[a as usize]) != 1 {
                return Ok(fail(format!("multiplicative inverse: {a} * {a}^-1 != 1")));
            }
        }
        for a in 0..q {
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) {
                    return Ok(fail(format!("additive commutativity at ({a}, {b})")));
                }
                if self.mul(a, b) != self.mul(b, a) {
                    return Ok(fail(format!("multiplicative commutativity at ({a}, {b})")));
                }
            }
        }
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Ok(fail(format!("additive associativity at ({a}, {b}, {c})")));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Ok(fail(format!(
                            "multiplicative associativity at ({a}, {b}, {c})"
                        )));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Ok(fail(format!("distributivity at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(AxiomReport {
            q,
            pass: true,
            violation: None,
        })
    }
}
