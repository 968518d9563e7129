//! Code combinators: the McNeish product, symbol relabeling, the π_A
//! collapse and its ×_A product, puncturing, and subcode removal.
//!
//! The collapse is the workhorse of every hole-filling assembly: it
//! identifies a designated set of "hole" letters of the second factor across
//! all first-factor symbols, shrinking the pair alphabet Q_p x Q_q to
//! p(q-|A|) + |A| letters.

use crate::code::{sort_dedup_flat, Alphabet, Code};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::holes::HoleCode;
use crate::linear::{super_chain, SuperChain};
use crate::verify::mds_check;

/// The flattening map behind the ×_A product. Non-hole pairs (x, y) are
/// numbered lexicographically; hole letters keep dedicated trailing indices.
#[derive(Clone, Debug)]
pub struct CollapseMap {
    p: u16,
    q: u16,
    hole: Vec<u16>,
    /// rank of each second-factor symbol among non-hole letters, or the
    /// symbol's trailing hole slot
    slot: Vec<u16>,
}

impl CollapseMap {
    pub fn new(p: u16, q: u16, hole: &[u16]) -> Result<Self> {
        let mut a = hole.to_vec();
        a.sort_unstable();
        a.dedup();
        if a.len() != hole.len() {
            return Err(Error::HoleNotSubset {
                reason: "hole letters repeat".into(),
            });
        }
        if a.iter().any(|&h| h >= q) || a.len() >= q as usize {
            return Err(Error::HoleNotSubset {
                reason: format!("hole set must be a proper subset of the {q}-letter alphabet"),
            });
        }
        let keep = q - a.len() as u16;
        let mut slot = vec![0u16; q as usize];
        let mut next = 0u16;
        for y in 0..q {
            if a.binary_search(&y).is_ok() {
                let rank = a.iter().position(|&h| h == y).unwrap() as u16;
                slot[y as usize] = p * keep + rank;
            } else {
                slot[y as usize] = next;
                next += 1;
            }
        }
        debug_assert_eq!(next, keep);
        Ok(CollapseMap { p, q, hole: a, slot })
    }

    /// Size of the collapsed alphabet: p(q-|A|) + |A|.
    pub fn target_size(&self) -> u16 {
        self.p * (self.q - self.hole.len() as u16) + self.hole.len() as u16
    }

    /// Target indices of the hole letters (always the trailing block).
    pub fn target_holes(&self) -> Vec<u16> {
        let base = self.p * (self.q - self.hole.len() as u16);
        (0..self.hole.len() as u16).map(|i| base + i).collect()
    }

    /// π_A applied to one coordinate pair.
    pub fn map(&self, x: u16, y: u16) -> u16 {
        if self.hole.binary_search(&y).is_ok() {
            self.slot[y as usize]
        } else {
            x * (self.q - self.hole.len() as u16) + self.slot[y as usize]
        }
    }
}

/// McNeish product: words are paired coordinatewise and each pair (x, y) is
/// flattened to x·q2 + y. The output is re-verified at the common strength.
pub fn product(c1: &Code, c2: &Code) -> Result<Code> {
    if c1.dim() != c2.dim() {
        return Err(Error::DimensionMismatch {
            left: c1.dim(),
            right: c2.dim(),
        });
    }
    if c1.strength() != c2.strength() {
        return Err(Error::StrengthMismatch {
            left: c1.strength(),
            right: c2.strength(),
        });
    }
    let d = c1.dim();
    let (q1, q2) = (c1.q(), c2.q());
    let mut flat = Vec::with_capacity(c1.len() * c2.len() * d);
    for u in c1.words() {
        for v in c2.words() {
            for i in 0..d {
                flat.push(u[i] * q2 + v[i]);
            }
        }
    }
    let out = Code::from_flat(Alphabet::plain(q1 * q2), d, c1.strength(), flat)?;
    let report = mds_check(&out, out.strength());
    if !report.pass {
        return Err(Error::VerificationFailed {
            report: format!(
                "product of sizes {} and {} fails strength {}: {}",
                c1.len(),
                c2.len(),
                out.strength(),
                report.counterexample.unwrap_or_default()
            ),
        });
    }
    Ok(out)
}

/// Componentwise McNeish product of two chains; the result is re-verified
/// as a chain (nesting, sizes, strengths, distances).
pub fn chain_product(a: &SuperChain, b: &SuperChain) -> Result<SuperChain> {
    SuperChain::from_parts(
        product(a.m0(), b.m0())?,
        product(a.m1(), b.m1())?,
        product(a.m2(), b.m2())?,
    )
}

fn prime_power_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut part = 1u64;
            while n.is_multiple_of(p) {
                part *= p;
                n /= p;
            }
            out.push(part);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Builds a nested distance-3/4/5 chain of the given order: one linear chain
/// per prime-power factor, folded together with the McNeish product.
/// Factors 2 and 3 admit no dimension-5 code at all, and order 4 admits no
/// chain (see [`super_chain`]); all other prime powers work.
pub fn super_chain_for_order(p: u64) -> Result<SuperChain> {
    if p < 2 {
        return Err(Error::NotAdmissible {
            p,
            reason: "order must be at least 4".into(),
        });
    }
    let factors = prime_power_factors(p);
    for &f in &factors {
        if f < 4 {
            return Err(Error::NotAdmissible {
                p: f,
                reason: format!(
                    "prime-power factor {f} of {p} is below 4, so no dimension-5 code exists \
                     over it (d must stay within q+1)"
                ),
            });
        }
    }
    let mut chain: Option<SuperChain> = None;
    for &f in &factors {
        let field = Field::new(f as u16)?;
        let part = super_chain(&field)?;
        chain = Some(match chain {
            None => part,
            Some(acc) => chain_product(&acc, &part)?,
        });
    }
    Ok(chain.expect("at least one factor"))
}

/// Applies an injective symbol map into a target alphabet. `map[s]` is the
/// image of source symbol `s`; certificates carry over because relabeling
/// preserves all coincidence patterns.
pub fn relabel(c: &Code, map: &[u16], target: Alphabet) -> Result<Code> {
    if map.len() != c.q() as usize {
        return Err(Error::NotBijective {
            reason: format!(
                "map covers {} symbols but the code uses an alphabet of {}",
                map.len(),
                c.q()
            ),
        });
    }
    let mut seen = vec![false; target.size() as usize];
    for &m in map {
        if m >= target.size() {
            return Err(Error::NotBijective {
                reason: format!("image symbol {m} outside the target alphabet"),
            });
        }
        if seen[m as usize] {
            return Err(Error::NotBijective {
                reason: format!("image symbol {m} repeats"),
            });
        }
        seen[m as usize] = true;
    }
    let flat = c.flat().iter().map(|&s| map[s as usize]).collect();
    Code::from_flat(target, c.dim(), c.strength(), flat)
}

/// The ×_A product: every pair of words is combined coordinatewise through
/// π_A. The map is not injective on pairs involving hole letters, so the
/// word count can drop; the number of collapsed duplicates is returned
/// alongside the code and assemblies assert it is zero where the underlying
/// distance arguments promise injectivity.
pub fn a_product(c1: &Code, c2: &Code, hole: &[u16]) -> Result<(Code, u64)> {
    if c1.dim() != c2.dim() {
        return Err(Error::DimensionMismatch {
            left: c1.dim(),
            right: c2.dim(),
        });
    }
    let cm = CollapseMap::new(c1.q(), c2.q(), hole)?;
    let d = c1.dim();
    let mut flat = Vec::with_capacity(c1.len() * c2.len() * d);
    for u in c1.words() {
        for v in c2.words() {
            for i in 0..d {
                flat.push(cm.map(u[i], v[i]));
            }
        }
    }
    let (flat, collisions) = sort_dedup_flat(d, &flat);
    let alphabet = if cm.hole.is_empty() {
        Alphabet::plain(cm.target_size())
    } else {
        Alphabet::with_hole(cm.target_size(), cm.target_holes())?
    };
    let strength = c1.strength().min(c2.strength());
    let code = Code::from_flat(alphabet, d, strength, flat)?;
    Ok((code, collisions))
}

/// Deletes one coordinate. Strength drops by one and the result is
/// re-verified; cardinality is preserved because the input distance is at
/// least 3.
pub fn puncture(c: &Code, coord: usize) -> Result<Code> {
    if c.strength() < 2 {
        return Err(Error::StrengthTooLow {
            t: c.strength(),
            min: 2,
        });
    }
    if coord >= c.dim() {
        return Err(Error::CoordOutOfRange {
            coord,
            dim: c.dim(),
        });
    }
    let d = c.dim();
    let mut flat = Vec::with_capacity(c.len() * (d - 1));
    for w in c.words() {
        for (i, &s) in w.iter().enumerate() {
            if i != coord {
                flat.push(s);
            }
        }
    }
    let out = Code::from_flat(c.alphabet().clone(), d - 1, c.strength() - 1, flat)?;
    let report = mds_check(&out, out.strength());
    if !report.pass {
        return Err(Error::VerificationFailed {
            report: format!(
                "punctured code fails strength {}: {}",
                out.strength(),
                report.counterexample.unwrap_or_default()
            ),
        });
    }
    Ok(out)
}

/// Removes the words of `c` lying entirely inside `A^d`. The removed set
/// must itself be an MDS code on A at the same strength (that is what makes
/// it a subcode); the remainder is a d-A-hole code and is fully re-verified.
pub fn remove_subcode(c: &Code, hole: &[u16]) -> Result<HoleCode> {
    let mut a = hole.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.is_empty() || a.len() != hole.len() {
        return Err(Error::HoleNotSubset {
            reason: "hole set must be non-empty and duplicate-free".into(),
        });
    }
    if a.iter().any(|&h| h >= c.q()) || a.len() >= c.q() as usize {
        return Err(Error::HoleNotSubset {
            reason: format!(
                "hole set must be a proper subset of the {}-letter alphabet",
                c.q()
            ),
        });
    }
    let d = c.dim();
    let t = c.strength();
    let mut inside = Vec::new();
    let mut outside = Vec::with_capacity(c.len() * d);
    let rank = |s: u16| a.binary_search(&s).ok();
    for w in c.words() {
        if w.iter().all(|&s| rank(s).is_some()) {
            for &s in w {
                inside.push(rank(s).unwrap() as u16);
            }
        } else {
            outside.extend_from_slice(w);
        }
    }
    let expected = (a.len() as u64).pow((d - t) as u32);
    if inside.len() as u64 / d as u64 != expected {
        return Err(Error::NotASubcode {
            reason: format!(
                "restriction to the hole letters has {} words, an MDS code there needs {expected}",
                inside.len() / d
            ),
        });
    }
    let restriction = Code::from_flat(Alphabet::plain(a.len() as u16), d, t, inside)?;
    let rep = mds_check(&restriction, t);
    if !rep.pass {
        return Err(Error::NotASubcode {
            reason: format!(
                "restriction to the hole letters is not MDS: {}",
                rep.counterexample.unwrap_or_default()
            ),
        });
    }
    let alphabet = Alphabet::with_hole(c.q(), a)?;
    let remainder = Code::from_flat(alphabet, d, t, outside)?;
    HoleCode::new(remainder, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::rs_parity;
    use crate::verify::distance_check;

    fn rs(q: u16, rho: usize) -> Code {
        let f = Field::new(q).unwrap();
        rs_parity(&f, 5, rho).unwrap().kernel().unwrap()
    }

    #[test]
    fn product_4_by_5_gives_order_20() {
        let c = product(&rs(4, 3), &rs(5, 3)).unwrap();
        assert_eq!(c.q(), 20);
        assert_eq!(c.len(), 8000);
        assert!(mds_check(&c, 2).pass);
        assert_eq!(distance_check(&c).unwrap(), 3);
    }

    #[test]
    fn product_with_singleton_copies_the_factor() {
        let c = rs(5, 3);
        let unit = Code::from_flat(Alphabet::plain(1), 5, 2, vec![0; 5]).unwrap();
        let p = product(&c, &unit).unwrap();
        assert_eq!(p.q(), 5);
        assert_eq!(p.flat(), c.flat());
    }

    #[test]
    fn product_rejects_mismatched_inputs() {
        let c4 = rs(4, 3);
        let c4p = puncture(&c4, 4).unwrap(); // d=4, t=1
        assert!(matches!(
            product(&c4, &c4p),
            Err(Error::DimensionMismatch { .. })
        ));
        let c5d4 = rs(5, 4); // t=3
        assert!(matches!(
            product(&c4, &c5d4),
            Err(Error::StrengthMismatch { .. })
        ));
    }

    #[test]
    fn chain_product_order_35() {
        let f5 = Field::new(5).unwrap();
        let f7 = Field::new(7).unwrap();
        let chain = chain_product(&super_chain(&f5).unwrap(), &super_chain(&f7).unwrap()).unwrap();
        assert_eq!(chain.order(), 35);
        assert_eq!(chain.m0().len(), 42_875);
        assert_eq!(chain.m1().len(), 1_225);
        assert_eq!(chain.m2().len(), 35);
        assert_eq!(distance_check(chain.m2()).unwrap(), 5);
        assert_eq!(distance_check(chain.m1()).unwrap(), 4);
    }

    #[test]
    fn chain_for_composite_orders() {
        assert_eq!(super_chain_for_order(35).unwrap().order(), 35);
        match super_chain_for_order(6) {
            Err(Error::NotAdmissible { p: 2, .. }) => {}
            other => panic!("expected NotAdmissible for the factor 2, got {other:?}"),
        }
        match super_chain_for_order(12) {
            // 12 = 4 * 3: the factor 3 is checked before any chain search
            Err(Error::NotAdmissible { p: 3, .. }) => {}
            other => panic!("expected NotAdmissible for the factor 3, got {other:?}"),
        }
        match super_chain_for_order(20) {
            // 20 = 4 * 5: admissible factors, but order 4 has no chain
            Err(Error::ChainNotFound { q: 4, .. }) => {}
            other => panic!("expected ChainNotFound for the factor 4, got {other:?}"),
        }
    }

    #[test]
    fn relabel_identity_and_swap() {
        let c = rs(4, 3);
        let id: Vec<u16> = (0..4).collect();
        let same = relabel(&c, &id, Alphabet::plain(4)).unwrap();
        assert_eq!(same.flat(), c.flat());
        let swapped = relabel(&c, &[1, 0, 2, 3], Alphabet::plain(4)).unwrap();
        assert!(mds_check(&swapped, 2).pass);
        assert_ne!(swapped.flat(), c.flat());
    }

    #[test]
    fn relabel_into_larger_alphabet() {
        let c = rs(4, 3);
        let map = [80u16, 81, 82, 83];
        let e = relabel(&c, &map, Alphabet::plain(84)).unwrap();
        assert_eq!(e.len(), 64);
        // still MDS on its own four letters
        let (compact, old) = e.compact();
        assert_eq!(old, map);
        assert!(mds_check(&compact, 2).pass);
    }

    #[test]
    fn relabel_rejects_bad_maps() {
        let c = rs(4, 3);
        assert!(matches!(
            relabel(&c, &[0, 0, 1, 2], Alphabet::plain(4)),
            Err(Error::NotBijective { .. })
        ));
        assert!(matches!(
            relabel(&c, &[0, 1, 2, 9], Alphabet::plain(4)),
            Err(Error::NotBijective { .. })
        ));
        assert!(matches!(
            relabel(&c, &[0, 1, 2], Alphabet::plain(4)),
            Err(Error::NotBijective { .. })
        ));
    }

    #[test]
    fn a_product_without_holes_is_plain_product() {
        let c4 = rs(4, 3);
        let c5 = rs(5, 3);
        let (viaa, collisions) = a_product(&c4, &c5, &[]).unwrap();
        assert_eq!(collisions, 0);
        let plain = product(&c4, &c5).unwrap();
        assert_eq!(viaa.flat(), plain.flat());
    }

    #[test]
    fn a_product_counts_collisions_on_adversarial_input() {
        // two words sharing no coordinates, against a word that is entirely
        // hole letters except one position: the hole coordinates collapse
        // and the two pairs collide nowhere... use a fully-hole word to
        // force a collision instead
        let left = Code::new(
            Alphabet::plain(2),
            5,
            2,
            &[vec![0, 0, 0, 0, 0], vec![1, 1, 1, 1, 1]],
        )
        .unwrap();
        let right = Code::new(
            Alphabet::plain(3),
            5,
            2,
            &[vec![2, 2, 2, 2, 2], vec![0, 1, 0, 1, 0]],
        )
        .unwrap();
        let (code, collisions) = a_product(&left, &right, &[2]).unwrap();
        // (0,2222 2) and (1,22222) collapse to the same all-hole word
        assert_eq!(collisions, 1);
        assert_eq!(code.len(), 3);
    }

    #[test]
    fn collapse_map_layout() {
        let cm = CollapseMap::new(16, 20, &[16, 17, 18, 19]).unwrap();
        assert_eq!(cm.target_size(), 260);
        assert_eq!(cm.map(0, 0), 0);
        assert_eq!(cm.map(3, 15), 3 * 16 + 15);
        assert_eq!(cm.map(9, 17), 16 * 16 + 1); // hole slot ignores x
        assert_eq!(cm.target_holes(), vec![256, 257, 258, 259]);
    }

    #[test]
    fn puncture_drops_strength_and_keeps_cardinality() {
        let c = rs(7, 4); // MDS(3,5,7), 49 words
        assert_eq!(c.len(), 49);
        let p = puncture(&c, 2).unwrap();
        assert_eq!(p.dim(), 4);
        assert_eq!(p.len(), 49);
        assert_eq!(p.strength(), 2);
        assert!(mds_check(&p, 2).pass);
        assert_eq!(distance_check(&p).unwrap(), 3);
    }

    #[test]
    fn puncture_strength_two_yields_strength_one() {
        let c = rs(4, 3);
        let p = puncture(&c, 0).unwrap();
        assert_eq!(p.strength(), 1);
        assert!(mds_check(&p, 1).pass);
    }

    #[test]
    fn puncture_guards() {
        let c = rs(4, 3);
        let weak = puncture(&c, 0).unwrap(); // strength 1
        assert!(matches!(
            puncture(&weak, 0),
            Err(Error::StrengthTooLow { t: 1, min: 2 })
        ));
        assert!(matches!(
            puncture(&c, 5),
            Err(Error::CoordOutOfRange { coord: 5, dim: 5 })
        ));
    }

    #[test]
    fn remove_single_constant_word() {
        let c = rs(5, 3); // contains all five constant words
        let h = remove_subcode(&c, &[2]).unwrap();
        assert_eq!(h.code().len(), 124);
        assert_eq!(h.j(), 5);
        assert!(crate::holes::hole_verify(&h).pass);
    }

    #[test]
    fn remove_subcode_rejects_non_subcode() {
        let c = rs(5, 3);
        // {0,1} letters: the restriction would need 2^3 = 8 words but the
        // code has far fewer all-{0,1} words
        match remove_subcode(&c, &[0, 1]) {
            Err(Error::NotASubcode { .. }) => {}
            other => panic!("expected NotASubcode, got {other:?}"),
        }
    }
}
