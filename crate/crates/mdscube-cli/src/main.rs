//! Command-line front end: build every supported construction, verify any
//! code file property by property, and convert between the codeword, latin
//! cube and orthogonal array representations.
//!
//! Exit codes: 0 on success, 1 when a verification fails (including inputs
//! that are not function graphs when cubes are requested), 2 for usage,
//! parse and construction errors.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mdscube::{
    coset_partition, cubes_check, design_validate, distance_check, extend_parity,
    hole_conditions, lemma1_code, mds_check_with, oa_check, order13_ingredients,
    prop7_assemble, prop8_assemble, rs_parity, super_chain_for_order, theorem1_assemble,
    theorem2_pipeline, theorem3_assemble, trivial_nested_q5, Code, Error, Field, HoleCode,
    Result, SteinerDesign, SuperChain, VerifyOpts,
};

#[derive(Parser)]
#[command(
    name = "mdscube",
    version,
    about = "Construct, verify and convert MDS(2,5,q) codes / pairs of orthogonal latin cubes"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a code and optionally write it to disk
    Build {
        #[command(subcommand)]
        kind: BuildKind,
    },
    /// Check one property of a code file
    Verify {
        path: PathBuf,
        #[arg(long, value_enum)]
        property: Property,
        /// Worker threads for the projection passes
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Convert a code file to another representation
    Export {
        path: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print the header summary of a code, cube or design file
    Info { path: PathBuf },
}

#[derive(Args)]
struct BuildCommon {
    /// Output path (constructions with several parts derive sibling names)
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Fully re-verify before writing and round-trip the written file
    #[arg(long)]
    certify: bool,
    /// Worker threads for certification passes
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Reserved; all constructions are deterministic and ignore it
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum BuildKind {
    /// Linear code over GF(q) from rows of pointwise powers
    Rs {
        #[arg(long)]
        q: u16,
        /// Code length
        #[arg(long, default_value_t = 5)]
        d: usize,
        /// Number of parity rows plus one; strength is rho-1
        #[arg(long, default_value_t = 3)]
        rho: usize,
        #[command(flatten)]
        common: BuildCommon,
    },
    /// Nested chain of strengths 2,3,4 with sizes p^3, p^2, p
    Super {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        common: BuildCommon,
    },
    /// Coordinatewise product of two code files over Q_{q1·q2}
    Product {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[command(flatten)]
        common: BuildCommon,
    },
    /// Split the order-q strength-2 linear code into q disjoint
    /// distance-4 classes
    CosetPartition {
        #[arg(long, default_value_t = 4)]
        q: u16,
        #[command(flatten)]
        common: BuildCommon,
    },
    /// The order-6 fixture with a 4-element-square hole (160 words)
    Lemma1 {
        #[command(flatten)]
        common: BuildCommon,
    },
    /// The order-13 dimension-4 worked assembly
    Prop7 {
        #[command(flatten)]
        common: BuildCommon,
    },
    /// The order-20 hole code from two collapsed distance-4 classes
    Prop8 {
        #[command(flatten)]
        common: BuildCommon,
    },
    /// Generic hole-filling assembly from ingredient files
    Theorem1 {
        /// Chain files: strength-2 outer code, strength-3, strength-4
        #[arg(long)]
        m0: PathBuf,
        #[arg(long)]
        m1: PathBuf,
        #[arg(long)]
        m2: PathBuf,
        /// Full order-q code
        #[arg(long)]
        d: PathBuf,
        /// Code on the output hole block
        #[arg(long)]
        e: PathBuf,
        /// Hole code with j=4 (hole header required)
        #[arg(long)]
        f: PathBuf,
        /// Hole code with j=5 (hole header required)
        #[arg(long)]
        g: PathBuf,
        #[command(flatten)]
        common: BuildCommon,
    },
    /// Full pipeline to an MDS(2,5,16p+4) code
    Theorem2 {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        common: BuildCommon,
    },
    /// Assembly from a nested pair of Steiner design files
    Steiner {
        /// Pair-covering design (tau=2); omitted = the trivial q=5 design
        #[arg(long)]
        d2: Option<PathBuf>,
        /// Triple-covering design (tau=3); omitted = the trivial q=5 design
        #[arg(long)]
        d3: Option<PathBuf>,
        #[command(flatten)]
        common: BuildCommon,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Mds,
    Oa,
    Cubes,
    Hole,
    Distance,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Cubes,
    Oa,
    Codewords,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::VerificationFailed { .. } | Error::NotFunctional { .. } => {
                    ExitCode::from(1)
                }
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Build { kind } => cmd_build(kind),
        Cmd::Verify {
            path,
            property,
            workers,
        } => cmd_verify(&path, property, workers),
        Cmd::Export {
            path,
            format,
            output,
        } => cmd_export(&path, format, &output),
        Cmd::Info { path } => cmd_info(&path),
    }
}

fn summary_line(code: &Code, hole_j: Option<usize>) {
    print!(
        "order {} | dimension {} | strength {} | {} codewords",
        code.q(),
        code.dim(),
        code.strength(),
        code.len()
    );
    let hole = code.alphabet().hole();
    if !hole.is_empty() {
        let labels: Vec<String> = hole.iter().map(|&s| code.alphabet().label(s)).collect();
        print!(" | hole {{{}}}", labels.join(","));
        if let Some(j) = hole_j {
            print!(" j={j}");
        }
    }
    println!();
}

/// Full verification of one artifact: mds always, the four hole conditions
/// when a hole parameter is attached.
fn certify(code: &Code, hole_j: Option<usize>, workers: usize) -> Result<()> {
    let opts = VerifyOpts { workers };
    match hole_j {
        None => {
            let rep = mds_check_with(code, code.strength(), &opts);
            print!("{rep}");
            if !rep.pass {
                return Err(Error::VerificationFailed {
                    report: rep.to_string(),
                });
            }
        }
        Some(j) => {
            let rep = hole_conditions(code, j);
            print!("{rep}");
            if !rep.pass {
                return Err(Error::VerificationFailed {
                    report: rep.to_string(),
                });
            }
        }
    }
    Ok(())
}

/// Writes one artifact, optionally certifying before the write and
/// re-reading the file afterwards to confirm the round trip.
fn emit(code: &Code, hole_j: Option<usize>, common: &BuildCommon) -> Result<()> {
    summary_line(code, hole_j);
    if common.certify {
        certify(code, hole_j, common.workers)?;
    } else if code.len() as u64 != (code.q() as u64).pow((code.dim() - code.strength()) as u32) {
        // cardinality is always checked, even without --certify
        return Err(Error::VerificationFailed {
            report: format!(
                "cardinality: {} words where q^(d-t) requires {}",
                code.len(),
                (code.q() as u64).pow((code.dim() - code.strength()) as u32)
            ),
        });
    }
    if let Some(path) = &common.output {
        code.write_annotated(path, hole_j)?;
        println!("wrote {}", path.display());
        if common.certify {
            let (back, back_j) = Code::read(path)?;
            if back.flat() != code.flat() || back_j != hole_j {
                return Err(Error::VerificationFailed {
                    report: format!("round trip through {} altered the code", path.display()),
                });
            }
            certify(&back, back_j, common.workers)?;
            println!("round trip verified");
        }
    }
    Ok(())
}

/// Hole codes carry their own cardinality law, so bypass the plain q^(d-t)
/// check that `emit` applies to full codes.
fn emit_hole(h: &HoleCode, common: &BuildCommon) -> Result<()> {
    summary_line(h.code(), Some(h.j()));
    if common.certify {
        certify(h.code(), Some(h.j()), common.workers)?;
    }
    if let Some(path) = &common.output {
        h.write(path)?;
        println!("wrote {}", path.display());
        if common.certify {
            let (back, back_j) = Code::read(path)?;
            if back.flat() != h.code().flat() || back_j != Some(h.j()) {
                return Err(Error::VerificationFailed {
                    report: format!("round trip through {} altered the code", path.display()),
                });
            }
            certify(&back, back_j, common.workers)?;
            println!("round trip verified");
        }
    }
    Ok(())
}

/// Derives `base.tag.code` next to the requested output path.
fn sibling(path: &Path, tag: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let ext = path
        .extension()
        .map(|s| format!(".{}", s.to_string_lossy()))
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.{tag}{ext}"))
}

fn read_plain(path: &Path) -> Result<Code> {
    let (code, _) = Code::read(path)?;
    Ok(code)
}

fn read_hole(path: &Path) -> Result<HoleCode> {
    let (code, j) = Code::read(path)?;
    let j = j.ok_or_else(|| Error::IngredientInvalid {
        which: "hole code file",
        reason: format!("{} carries no hole header", path.display()),
    })?;
    HoleCode::new(code, j)
}

fn cmd_build(kind: BuildKind) -> Result<()> {
    match kind {
        BuildKind::Rs { q, d, rho, common } => {
            let field = Field::new(q)?;
            let code = rs_parity(&field, d, rho)?.kernel()?;
            println!("linear kernel over GF({q}) with {} parity rows", rho - 1);
            emit(&code, None, &common)
        }
        BuildKind::Super { p, common } => {
            let chain = super_chain_for_order(p)?;
            println!(
                "nested chain of order {}: sizes {} > {} > {}",
                chain.order(),
                chain.m0().len(),
                chain.m1().len(),
                chain.m2().len()
            );
            if common.certify {
                chain.verify()?;
                println!("chain re-verified: nesting, sizes, strengths");
            }
            for (code, tag) in [(chain.m0(), "m0"), (chain.m1(), "m1"), (chain.m2(), "m2")] {
                summary_line(code, None);
                if let Some(base) = &common.output {
                    let path = sibling(base, tag);
                    code.write(&path)?;
                    println!("wrote {}", path.display());
                }
            }
            Ok(())
        }
        BuildKind::Product {
            left,
            right,
            common,
        } => {
            let a = read_plain(&left)?;
            let b = read_plain(&right)?;
            let code = mdscube::product(&a, &b)?;
            println!("product of orders {} and {}", a.q(), b.q());
            emit(&code, None, &common)
        }
        BuildKind::CosetPartition { q, common } => {
            let field = Field::new(q)?;
            let h = rs_parity(&field, 5, 3)?;
            let sup = h.kernel()?;
            let sub = extend_parity(&h)?.kernel()?;
            let classes = coset_partition(&sub, &sup, &field)?;
            println!(
                "{} disjoint distance-4 classes of {} words each",
                classes.len(),
                classes[0].len()
            );
            for (i, class) in classes.iter().enumerate() {
                summary_line(class, None);
                if let Some(base) = &common.output {
                    let path = sibling(base, &format!("class{i}"));
                    class.write(&path)?;
                    println!("wrote {}", path.display());
                }
            }
            Ok(())
        }
        BuildKind::Lemma1 { common } => {
            let h = lemma1_code()?;
            emit_hole(&h, &common)
        }
        BuildKind::Prop7 { common } => {
            let (m, m1, d, e, f) = order13_ingredients()?;
            let code = prop7_assemble(&m, &m1, &d, &e, &f)?;
            emit(&code, None, &common)
        }
        BuildKind::Prop8 { common } => {
            let field = Field::new(4)?;
            let h2 = rs_parity(&field, 5, 3)?;
            let m4 = h2.kernel()?;
            let sub = extend_parity(&h2)?.kernel()?;
            let classes = coset_partition(&sub, &m4, &field)?;
            let lemma = lemma1_code()?;
            let s = prop8_assemble(
                &m4,
                &classes[..2],
                &m4,
                &[lemma.clone(), lemma],
                &[vec![16, 17], vec![18, 19]],
            )?;
            emit_hole(&s, &common)
        }
        BuildKind::Theorem1 {
            m0,
            m1,
            m2,
            d,
            e,
            f,
            g,
            common,
        } => {
            let chain = SuperChain::from_parts(
                read_plain(&m0)?,
                read_plain(&m1)?,
                read_plain(&m2)?,
            )?;
            let code = theorem1_assemble(
                &chain,
                &read_plain(&d)?,
                &read_plain(&e)?,
                &read_hole(&f)?,
                &read_hole(&g)?,
            )?;
            emit(&code, None, &common)
        }
        BuildKind::Theorem2 { p, common } => {
            let code = theorem2_pipeline(p)?;
            println!("pipeline order 16*{p}+4 = {}", code.q());
            emit(&code, None, &common)
        }
        BuildKind::Steiner { d2, d3, common } => {
            let (t2, t3) = trivial_nested_q5();
            let d2 = match d2 {
                Some(p) => SteinerDesign::read(&p)?,
                None => t2,
            };
            let d3 = match d3 {
                Some(p) => SteinerDesign::read(&p)?,
                None => t3,
            };
            for d in [&d2, &d3] {
                print!("{}", design_validate(d));
            }
            let code = theorem3_assemble(&d2, &d3)?;
            emit(&code, None, &common)
        }
    }
}

fn cmd_verify(path: &Path, property: Property, workers: usize) -> Result<()> {
    let (code, hole_j) = Code::read(path)?;
    let opts = VerifyOpts { workers };
    let report = match property {
        Property::Mds => mds_check_with(&code, code.strength(), &opts),
        Property::Oa => {
            let s = code.dim() - code.strength();
            oa_check(&code.oa_rows(), s)
        }
        Property::Cubes => {
            let pair = code.to_latin_cubes()?;
            cubes_check(&pair)
        }
        Property::Hole => {
            let j = hole_j.ok_or_else(|| Error::IngredientInvalid {
                which: "hole code file",
                reason: format!("{} carries no hole header", path.display()),
            })?;
            let report = hole_conditions(&code, j);
            print!("{report}");
            for c in &report.conditions {
                println!("{}", c.to_kv());
            }
            if report.pass {
                return Ok(());
            }
            return Err(Error::VerificationFailed {
                report: "one or more hole conditions fail".into(),
            });
        }
        Property::Distance => {
            let dist = distance_check(&code)?;
            let want = code.strength() + 1;
            println!("minimum distance {dist} over {} words, expected {want}", code.len());
            if dist == want {
                return Ok(());
            }
            return Err(Error::VerificationFailed {
                report: format!("distance {dist} != t+1 = {want}"),
            });
        }
    };
    print!("{report}");
    println!("{}", report.to_kv());
    if report.pass {
        Ok(())
    } else {
        Err(Error::VerificationFailed {
            report: format!("property check `{}` fails", report.property),
        })
    }
}

fn cmd_export(path: &Path, format: Format, output: &Path) -> Result<()> {
    let (code, hole_j) = Code::read(path)?;
    match format {
        Format::Cubes => {
            // a valid pair of orthogonal latin cubes requires the full
            // strength-2 property, not just a function graph
            let pair = code.to_latin_cubes()?;
            let rep = cubes_check(&pair);
            if !rep.pass {
                return Err(Error::VerificationFailed {
                    report: rep.to_string(),
                });
            }
            let mut w = BufWriter::new(File::create(output)?);
            pair.write_to(&mut w)?;
        }
        Format::Oa => {
            let rows = code.oa_rows();
            let mut w = BufWriter::new(File::create(output)?);
            writeln!(w, "#oa v1")?;
            writeln!(
                w,
                "s={} d={} q={} n={}",
                code.dim() - code.strength(),
                code.dim(),
                code.q(),
                rows.rows()
            )?;
            for i in 0..rows.rows() {
                let line: Vec<String> = rows.row(i).iter().map(|s| s.to_string()).collect();
                writeln!(w, "{}", line.join(" "))?;
            }
        }
        Format::Codewords => {
            code.write_annotated(output, hole_j)?;
        }
    }
    println!("wrote {}", output.display());
    Ok(())
}

fn cmd_info(path: &Path) -> Result<()> {
    let magic = {
        use std::io::BufRead;
        let f = std::io::BufReader::new(File::open(path)?);
        f.lines().next().transpose()?.unwrap_or_default()
    };
    match magic.trim() {
        "#steiner v1" => {
            let d = SteinerDesign::read(path)?;
            println!(
                "steiner design: tau={} q={} blocks={}",
                d.tau(),
                d.q(),
                d.blocks().len()
            );
        }
        "#mdscode v1" => {
            let (code, hole_j) = Code::read(path)?;
            summary_line(&code, hole_j);
        }
        "#latincubes v1" => {
            println!("latin cube pair file (use a code file for full details)");
        }
        "#oa v1" => {
            println!("orthogonal array file (use a code file for full details)");
        }
        other => {
            return Err(Error::ParseError {
                line: 1,
                msg: format!("unrecognized header `{other}`"),
            });
        }
    }
    Ok(())
}
