//! Acceptance gate. One test per criterion; each prints a single pass/fail
//! line and asserts the stated tolerance exactly. Run the whole gate with
//!
//! ```text
//! cargo test -p mdscube-cli --test acceptance -- --test-threads=1 --nocapture
//! ```
//!
//! Criteria that cannot hold are still asserted as stated and fail honestly:
//! no nested distance-3/4/5 chain of order 4 exists (criterion 5 includes
//! p = 4), and the order-13 reference squares carry a two-cell transposition
//! slip in their last row (criterion 7 checks the verbatim transcription).

use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mdscube::{
    alt5_orbit, coset_partition, cubes_check, distance_check, extend_parity, hole_verify,
    lemma1_code, mds_check, oa_check, order13_ingredients, order13_printed_code, product,
    prop7_assemble, prop8_assemble, relabel, remove_subcode, rs_parity, super_chain_for_order,
    theorem3_assemble, trivial_nested_q5, Alphabet, Code, Error, Field, HoleCode,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mdscube"))
}

fn run_to_completion(cmd: &mut Command) -> Output {
    cmd.output().expect("failed to spawn the CLI binary")
}

fn read_header_n(path: &Path) -> usize {
    let text = std::fs::read_to_string(path).expect("output file missing");
    let header = text.lines().nth(1).expect("file too short");
    header
        .split_whitespace()
        .find_map(|tok| tok.strip_prefix("n="))
        .expect("header lacks n=")
        .parse()
        .expect("bad n value")
}

fn verdict(criterion: u32, pass: bool, detail: &str) {
    let word = if pass { "pass" } else { "FAIL" };
    println!("criterion {criterion:2}: {word} - {detail}");
    assert!(pass, "criterion {criterion} failed: {detail}");
}

/// Criterion 1: the order-84 pipeline yields exactly 592,704 codewords and
/// passes full verification in under a minute, single-threaded.
#[test]
fn criterion_01_order_84_headline_under_a_minute() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("order84.code");
    let start = Instant::now();
    let result = run_to_completion(
        bin()
            .args(["build", "theorem2", "--p", "5", "--certify", "--output"])
            .arg(&out),
    );
    let elapsed = start.elapsed();
    assert!(
        result.status.success(),
        "build failed: {}",
        String::from_utf8_lossy(&result.stderr)
    );
    let n = read_header_n(&out);
    let in_budget = elapsed < Duration::from_secs(60);
    verdict(
        1,
        n == 592_704 && in_budget,
        &format!("order 84, {n} codewords, built and fully verified in {elapsed:.2?}"),
    );
}

/// Criterion 2: the order-132 pipeline yields 132^3 = 2,299,968 codewords and
/// passes full verification in under five minutes.
#[test]
fn criterion_02_order_132_under_five_minutes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("order132.code");
    let start = Instant::now();
    let result = run_to_completion(
        bin()
            .args(["build", "theorem2", "--p", "8", "--certify", "--output"])
            .arg(&out),
    );
    let elapsed = start.elapsed();
    assert!(
        result.status.success(),
        "build failed: {}",
        String::from_utf8_lossy(&result.stderr)
    );
    let n = read_header_n(&out);
    let in_budget = elapsed < Duration::from_secs(300);
    verdict(
        2,
        n == 2_299_968 && in_budget,
        &format!("order 132, {n} codewords, built and fully verified in {elapsed:.2?}"),
    );
}

/// Criterion 3: the order-6 fixture has exactly 160 words, passes all four
/// hole conditions with j=4 and a two-letter hole, and has distance 3.
#[test]
fn criterion_03_order_6_hole_fixture() {
    let h = lemma1_code().unwrap();
    let report = hole_verify(&h);
    let dist = distance_check(h.code()).unwrap();
    let pass = h.code().len() == 160
        && h.j() == 4
        && h.hole().len() == 2
        && report.pass
        && dist == 3;
    verdict(
        3,
        pass,
        &format!(
            "160-word fixture: {} words, j={}, |A|={}, four hole conditions {}, distance {dist}",
            h.code().len(),
            h.j(),
            h.hole().len(),
            if report.pass { "pass" } else { "fail" },
        ),
    );
}

/// The two order-20 hole codes `theorem2_pipeline` consumes, rebuilt from
/// their public ingredients.
fn order20_hole_codes() -> (HoleCode, HoleCode) {
    let f4 = Field::new(4).unwrap();
    let h = rs_parity(&f4, 5, 3).unwrap();
    let m4 = h.kernel().unwrap();
    let sub = extend_parity(&h).unwrap().kernel().unwrap();
    let classes = coset_partition(&sub, &m4, &f4).unwrap();
    let lemma = lemma1_code().unwrap();
    let f = prop8_assemble(
        &m4,
        &classes[..2],
        &m4,
        &[lemma.clone(), lemma],
        &[vec![16, 17], vec![18, 19]],
    )
    .unwrap();

    let f5 = Field::new(5).unwrap();
    let rs4 = rs_parity(&f4, 5, 3).unwrap().kernel().unwrap();
    let rs5 = rs_parity(&f5, 5, 3).unwrap().kernel().unwrap();
    let big = product(&rs4, &rs5).unwrap();
    let constant_columns: Vec<u16> = (0..4u16).map(|x| x * 5).collect();
    let g0 = remove_subcode(&big, &constant_columns).unwrap();
    let mut map = vec![0u16; 20];
    for x in 0..4u16 {
        for y in 0..5u16 {
            map[(x * 5 + y) as usize] = if y == 0 { 16 + x } else { x * 4 + (y - 1) };
        }
    }
    let g_code = relabel(
        g0.code(),
        &map,
        Alphabet::with_hole(20, vec![16, 17, 18, 19]).unwrap(),
    )
    .unwrap();
    let g = HoleCode::new(g_code, 5).unwrap();
    (f, g)
}

/// Criterion 4: the order-20 intermediate hole codes have the exact sizes the
/// cardinality formula dictates and pass all four hole conditions.
#[test]
fn criterion_04_order_20_hole_codes() {
    let (f, g) = order20_hole_codes();
    let f_report = hole_verify(&f);
    let g_report = hole_verify(&g);
    let pass = f.code().len() == 7168
        && f.j() == 4
        && f.hole().len() == 4
        && f_report.pass
        && g.code().len() == 7936
        && g.j() == 5
        && g.hole().len() == 4
        && g_report.pass;
    verdict(
        4,
        pass,
        &format!(
            "collapsed-pair code: {} words (j={}, conditions {}); punctured-product code: {} words (j={}, conditions {})",
            f.code().len(),
            f.j(),
            if f_report.pass { "pass" } else { "fail" },
            g.code().len(),
            g.j(),
            if g_report.pass { "pass" } else { "fail" },
        ),
    );
}

/// Criterion 5: strength-2 kernels for all supported orders, and nested
/// distance-3/4/5 chains for p in {4, 5, 7} plus the composite order 35,
/// with sizes, nesting and exact distances checked by the quadratic oracle
/// wherever the level is at most 10^4 words.
#[test]
fn criterion_05_linear_suite() {
    let mut failures: Vec<String> = Vec::new();
    for q in [4u16, 5, 7, 8, 9, 11, 13, 16] {
        let field = Field::new(q).unwrap();
        let code = rs_parity(&field, 5, 3).unwrap().kernel().unwrap();
        let rep = mds_check(&code, 2);
        if code.len() != (q as usize).pow(3) || !rep.pass {
            failures.push(format!("order {q} kernel fails: {rep}"));
        }
    }
    for p in [4u64, 5, 7, 35] {
        match super_chain_for_order(p) {
            Ok(chain) => {
                if let Err(e) = chain.verify() {
                    failures.push(format!("chain p={p} invalid: {e}"));
                    continue;
                }
                let sizes = (
                    chain.m0().len(),
                    chain.m1().len(),
                    chain.m2().len(),
                );
                let want = ((p * p * p) as usize, (p * p) as usize, p as usize);
                if sizes != want {
                    failures.push(format!("chain p={p} sizes {sizes:?}, expected {want:?}"));
                }
                for (code, dist) in [(chain.m2(), 5), (chain.m1(), 4), (chain.m0(), 3)] {
                    if code.len() <= 10_000 {
                        let got = distance_check(code).unwrap();
                        if got != dist {
                            failures.push(format!(
                                "chain p={p}, level of {} words: distance {got}, expected {dist}",
                                code.len()
                            ));
                        }
                    }
                }
            }
            Err(e) => failures.push(format!("chain p={p}: {e}")),
        }
    }
    verdict(
        5,
        failures.is_empty(),
        &if failures.is_empty() {
            "kernels for 8 orders, chains for p in {4,5,7,35}".to_string()
        } else {
            failures.join("; ")
        },
    );
}

/// Criterion 6: the 64-word order-4 code splits into 4 disjoint distance-4
/// classes of 16 words that exactly tile it.
#[test]
fn criterion_06_order_4_coset_partition() {
    let field = Field::new(4).unwrap();
    let h = rs_parity(&field, 5, 3).unwrap();
    let sup = h.kernel().unwrap();
    let sub = extend_parity(&h).unwrap().kernel().unwrap();
    let classes = coset_partition(&sub, &sup, &field).unwrap();

    let mut pass = sup.len() == 64 && classes.len() == 4;
    let mut all_words: Vec<Vec<u16>> = Vec::new();
    for class in &classes {
        pass &= class.len() == 16;
        pass &= distance_check(class).unwrap() == 4;
        pass &= class.words().all(|w| sup.contains(w));
        all_words.extend(class.words().map(|w| w.to_vec()));
    }
    all_words.sort();
    let before = all_words.len();
    all_words.dedup();
    pass &= before == all_words.len() && all_words.len() == 64;
    verdict(
        6,
        pass,
        &format!(
            "{} classes of 16 words, pairwise disjoint, distance 4, union {} of 64",
            classes.len(),
            all_words.len()
        ),
    );
}

/// Criterion 7: the verbatim transcription of the order-13 reference squares
/// verifies as an MDS(2,4,13) pair, and the four-ingredient assembly yields a
/// verified MDS(2,4,13).
#[test]
fn criterion_07_order_13_squares_and_assembly() {
    let mut failures: Vec<String> = Vec::new();

    let printed = order13_printed_code().unwrap();
    let printed_mds = mds_check(&printed, 2);
    let printed_dist = distance_check(&printed).unwrap();
    if printed.len() != 169 || !printed_mds.pass || printed_dist != 3 {
        failures.push(format!(
            "transcribed squares: {} words, distance {printed_dist}, {printed_mds}",
            printed.len()
        ));
    }

    let (m, m1, d, e, f) = order13_ingredients().unwrap();
    match prop7_assemble(&m, &m1, &d, &e, &f) {
        Ok(assembled) => {
            let rep = mds_check(&assembled, 2);
            let dist = distance_check(&assembled).unwrap();
            if assembled.len() != 169 || !rep.pass || dist != 3 {
                failures.push(format!(
                    "assembly: {} words, distance {dist}, {rep}",
                    assembled.len()
                ));
            }
        }
        Err(e) => failures.push(format!("assembly failed: {e}")),
    }

    verdict(
        7,
        failures.is_empty(),
        &if failures.is_empty() {
            "transcribed squares and assembly both verify as 169-word order-13 codes".to_string()
        } else {
            failures.join("; ")
        },
    );
}

/// Criterion 8: the assembly over the trivial nested order-5 designs yields a
/// verified 125-word code, and the even-permutation orbit of a block has 60
/// members at minimum pairwise distance exactly 3.
#[test]
fn criterion_08_order_5_design_assembly_and_orbit() {
    let (d2, d3) = trivial_nested_q5();
    let code = theorem3_assemble(&d2, &d3).unwrap();
    let rep = mds_check(&code, 2);
    let dist = distance_check(&code).unwrap();

    let orbit = alt5_orbit(&[0, 1, 2, 3, 4]).unwrap();
    let orbit_dist = distance_check(&orbit).unwrap();

    let pass = code.len() == 125
        && rep.pass
        && dist == 3
        && orbit.len() == 60
        && orbit_dist == 3;
    verdict(
        8,
        pass,
        &format!(
            "assembly: {} words, distance {dist}; orbit: {} members, minimum distance {orbit_dist}",
            code.len(),
            orbit.len()
        ),
    );
}

/// Criterion 9: on every order <= 20 fixture the codeword, orthogonal-array
/// and cube views agree (all three checks pass), and each of 100 seeded
/// single-symbol corruptions flips all three to fail with counterexamples.
#[test]
fn criterion_09_equivalence_triangle_under_corruption() {
    let mut fixtures: Vec<(String, Code)> = Vec::new();
    for q in [4u16, 5, 7, 8, 9, 11, 13, 16] {
        let field = Field::new(q).unwrap();
        let code = rs_parity(&field, 5, 3).unwrap().kernel().unwrap();
        fixtures.push((format!("order {q}"), code));
    }
    let rs4 = fixtures[0].1.clone();
    let rs5 = fixtures[1].1.clone();
    fixtures.push(("order 20".to_string(), product(&rs4, &rs5).unwrap()));

    let mut corruptions = 0usize;
    for (seed, (label, code)) in fixtures.iter().enumerate() {
        let clean_mds = mds_check(code, 2);
        let clean_oa = oa_check(&code.oa_rows(), 3);
        let clean_cubes = cubes_check(&code.to_latin_cubes().unwrap());
        assert!(
            clean_mds.pass && clean_oa.pass && clean_cubes.pass,
            "{label}: clean fixture fails the triangle"
        );

        let q = code.q();
        let n = code.len();
        let mut rng = ChaCha8Rng::seed_from_u64(0x0914_2026 + seed as u64);
        for round in 0..100 {
            let word = rng.gen_range(0..n);
            let coord = rng.gen_range(0..5usize);
            let bump = rng.gen_range(1..q);
            let mut flat = code.flat().to_vec();
            let at = word * 5 + coord;
            flat[at] = (flat[at] + bump) % q;
            // distance 3 means a one-symbol change can never collide with
            // another codeword, so the corrupted set still has n words
            let bad = Code::from_flat(Alphabet::plain(q), 5, 2, flat)
                .expect("corruption cannot create duplicates at distance 3");

            let mds = mds_check(&bad, 2);
            assert!(
                !mds.pass && mds.counterexample.is_some(),
                "{label} round {round}: corrupted code passed the projection check"
            );
            let oa = oa_check(&bad.oa_rows(), 3);
            assert!(
                !oa.pass && oa.counterexample.is_some(),
                "{label} round {round}: corrupted rows passed the array check"
            );
            match bad.to_latin_cubes() {
                Err(Error::NotFunctional { .. }) => {}
                Ok(pair) => {
                    let cubes = cubes_check(&pair);
                    assert!(
                        !cubes.pass && cubes.counterexample.is_some(),
                        "{label} round {round}: corrupted cubes passed"
                    );
                }
                Err(e) => panic!("{label} round {round}: unexpected error {e}"),
            }
            corruptions += 1;
        }
    }
    verdict(
        9,
        true,
        &format!(
            "{} fixtures agree across all three views; {corruptions} corruptions all detected by all views",
            fixtures.len()
        ),
    );
}

/// Criterion 10: impossible parameters are rejected up front with the
/// dimension bound spelled out, and non-prime-power orders are refused.
#[test]
fn criterion_10_parameter_guards() {
    let r = run_to_completion(bin().args(["build", "rs", "--q", "3", "--d", "5"]));
    let stderr = String::from_utf8_lossy(&r.stderr).to_string();
    let rs_guard = r.status.code() == Some(2) && stderr.contains("d <= q+1");

    let r = run_to_completion(bin().args(["build", "super", "--p", "3"]));
    let super_guard = r.status.code() == Some(2);

    let r = run_to_completion(bin().args(["build", "rs", "--q", "6"]));
    let stderr6 = String::from_utf8_lossy(&r.stderr).to_string();
    let field_guard_cli = r.status.code() == Some(2) && stderr6.contains("prime power");
    let field_guard_lib = matches!(Field::new(6), Err(Error::NotPrimePower(6)));

    verdict(
        10,
        rs_guard && super_guard && field_guard_cli && field_guard_lib,
        &format!(
            "q=3 d=5 rejected citing the dimension bound: {rs_guard}; order-3 chain rejected: {super_guard}; order 6 rejected as not a prime power: {}",
            field_guard_cli && field_guard_lib
        ),
    );
}
