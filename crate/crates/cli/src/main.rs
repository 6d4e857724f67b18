mod manifest;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use amenable::amenability::{decide_base, verify_certificate, verify_measure, Decision};
use amenable::chains::{
    cylinder_estimate, enumerate_valid, matrix_type, pushforward_check, sample_uniform_ordering,
    chain_matrices, CoordinateCylinder,
};
use amenable::expansions::Class;
use amenable::io::{
    certificate_from_json, certificate_to_json, format_rational, measure_from_json,
    measure_to_json, parse_structure,
};
use amenable::vmeasure::{
    count_bases_with_coords, count_bases_with_coords_closed_form, measure_nwk, nwk_limit,
    ClassCountEvent, DEFAULT_ENUMERATION_CAP,
};
use amenable::Error;

use manifest::RunManifest;

const EXIT_CERTIFICATE: u8 = 20;
const EXIT_MEASURE: u8 = 10;
const EXIT_INPUT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

/// Expansion enumeration, exact amenability obstructions, and measures on
/// natural orderings of finite vector spaces.
#[derive(Parser)]
#[command(name = "amenable", version)]
struct Cli {
    /// Write a JSON run manifest (inputs, seed, outcome, timing) here.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the expansions of a structure.
    Expansions {
        #[arg(long)]
        class: Class,
        /// JSON structure literal.
        #[arg(long)]
        base: PathBuf,
    },
    /// Decide the consistency system over a base. Exits 20 with a
    /// certificate, 10 with a consistent measure.
    Decide {
        #[arg(long)]
        class: Class,
        #[arg(long)]
        base: PathBuf,
        /// Where to write the certificate or measure.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate or a measure file. Exits 0 if valid, 1 if not.
    Verify {
        #[arg(long, required_unless_present = "measure", conflicts_with = "measure")]
        certificate: Option<PathBuf>,
        #[arg(long)]
        measure: Option<PathBuf>,
    },
    /// Exact measures on natural orderings.
    #[command(subcommand)]
    Measure(MeasureCommand),
    /// Matrices of ordered inclusion, sampling and coordinate cylinders.
    #[command(subcommand)]
    Chains(ChainsCommand),
}

#[derive(Subcommand)]
enum MeasureCommand {
    /// Probability that at most k classes lie above a fixed line.
    Nwk {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Largest |GL| to enumerate.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u128,
    },
    /// Ordered bases in which e_0 has the given coordinates.
    BasisCount {
        #[arg(long)]
        q: u32,
        /// Comma-separated coordinates, e.g. 1,0,1.
        #[arg(long)]
        coords: String,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u128,
    },
}

#[derive(Subcommand)]
enum ChainsCommand {
    /// All valid (n+1) x n matrices.
    Valid {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
    },
    /// Group the orderings of F_q^m by their matrix sequence.
    Pushforward {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u128,
    },
    /// Monte Carlo estimate of a coordinate cylinder on e_0, ..., e_{n-1}.
    Cylinder {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Prefixes per vector, e.g. "1,0;0,1". Defaults to all ones.
        #[arg(long)]
        prefixes: Option<String>,
    },
    /// Draw a uniformly random natural ordering of F_q^m.
    Sample {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// What a command produced.
struct Outcome {
    code: u8,
    output: String,
    seed: Option<u64>,
    inputs: Vec<PathBuf>,
}

impl Outcome {
    fn new(code: u8, output: String) -> Self {
        Outcome {
            code,
            output,
            seed: None,
            inputs: Vec::new(),
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Error> {
    std::fs::write(path, contents)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn parse_list(s: &str) -> Result<Vec<u8>, Error> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<u8>()
                .map_err(|_| Error::InvalidArgument(format!("bad entry {x:?} in {s:?}")))
        })
        .collect()
}

fn seed_or_fresh(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

fn run(command: &Command) -> Result<Outcome, Error> {
    match command {
        Command::Expansions { class, base } => {
            let b = parse_structure(&read(base)?)?;
            let list = class.plugin().expansions_of(&b)?;
            let mut out = format!("count: {}\n", list.len());
            for e in &list {
                writeln!(out, "{e}").unwrap();
            }
            let mut o = Outcome::new(0, out);
            o.inputs.push(base.clone());
            Ok(o)
        }
        Command::Decide { class, base, out } => {
            let b = parse_structure(&read(base)?)?;
            let decision = decide_base(&b, class.plugin())?;
            let (code, summary, artifact) = match &decision {
                Decision::Certificate(c) => {
                    let mut s = format!("outcome: certificate\nterms: {}\nrealized:", c.terms.len());
                    for (e, v) in c.realized.iter() {
                        write!(s, " {}*{e}", format_rational(v)).unwrap();
                    }
                    s.push('\n');
                    (EXIT_CERTIFICATE, s, certificate_to_json(*class, c))
                }
                Decision::Measure(m) => {
                    let mut s = format!("outcome: measure\nexpansions: {}\n", m.weights.len());
                    for (e, w) in &m.weights {
                        writeln!(s, "{} {e}", format_rational(w)).unwrap();
                    }
                    (EXIT_MEASURE, s, measure_to_json(*class, m))
                }
            };
            if let Some(path) = out {
                write(path, &artifact)?;
            }
            let mut o = Outcome::new(code, summary);
            o.inputs.push(base.clone());
            Ok(o)
        }
        Command::Verify {
            certificate,
            measure,
        } => {
            let (path, valid) = if let Some(path) = certificate {
                let (class, c) = certificate_from_json(&read(path)?)?;
                (path, verify_certificate(&c, class.plugin())?)
            } else {
                let path = measure.as_ref().expect("clap requires one of the two");
                let (class, m) = measure_from_json(&read(path)?)?;
                (path, verify_measure(&m, class.plugin())?)
            };
            let mut o = Outcome::new(
                if valid { 0 } else { 1 },
                format!("{}\n", if valid { "valid" } else { "invalid" }),
            );
            o.inputs.push(path.clone());
            Ok(o)
        }
        Command::Measure(MeasureCommand::Nwk { q, m, k, cap }) => {
            let event = ClassCountEvent::new(*q, *m, *k, None)?;
            let r = measure_nwk(&event, *cap)?;
            let how = match r.orderings {
                Some(n) => format!("enumerated over {n} orderings"),
                None => "closed form (enumeration over the cap)".to_string(),
            };
            Ok(Outcome::new(
                0,
                format!(
                    "value: {}\nmethod: {how}\nlimit as m grows: {}\n",
                    format_rational(&r.value),
                    format_rational(&nwk_limit(*q, *k))
                ),
            ))
        }
        Command::Measure(MeasureCommand::BasisCount { q, coords, cap }) => {
            let coords = parse_list(coords)?;
            let count = count_bases_with_coords(*q, &coords, None, *cap)?;
            let closed = count_bases_with_coords_closed_form(*q, coords.len());
            Ok(Outcome::new(0, format!("count: {count}\nclosed form: {closed}\n")))
        }
        Command::Chains(ChainsCommand::Valid { q, n }) => {
            let all = enumerate_valid(*n, *q)?;
            let mut by_type = vec![0usize; n + 1];
            let mut lines = String::new();
            for m in &all {
                let k = matrix_type(m);
                by_type[k] += 1;
                writeln!(lines, "type {k}: {m}").unwrap();
            }
            let counts: Vec<String> = by_type.iter().map(|c| c.to_string()).collect();
            Ok(Outcome::new(
                0,
                format!("count: {}\nper type: {}\n{lines}", all.len(), counts.join(" ")),
            ))
        }
        Command::Chains(ChainsCommand::Pushforward { q, m, cap }) => {
            let r = pushforward_check(*q, *m, *cap)?;
            let fiber = if r.min_fiber == r.max_fiber {
                r.min_fiber.to_string()
            } else {
                format!("{}..{}", r.min_fiber, r.max_fiber)
            };
            Ok(Outcome::new(
                0,
                format!(
                    "orderings: {}\nsequences: {} (expected {})\nfiber size: {fiber}\nuniform: {}\n",
                    r.orderings,
                    r.sequences,
                    r.expected_sequences,
                    if r.is_uniform() { "yes" } else { "no" }
                ),
            ))
        }
        Command::Chains(ChainsCommand::Cylinder {
            q,
            k,
            n,
            depth,
            samples,
            seed,
            prefixes,
        }) => {
            let seed = seed_or_fresh(*seed);
            let vectors: Vec<Vec<u8>> = (0..*n)
                .map(|i| (0..*n).map(|j| (i == j) as u8).collect())
                .collect();
            let prefixes = match prefixes {
                Some(s) => s.split(';').map(parse_list).collect::<Result<Vec<_>, _>>()?,
                None => vec![vec![1u8; *k]; *n],
            };
            let c = CoordinateCylinder::new(*q, *k, vectors, prefixes)?;
            let est = cylinder_estimate(&c, *depth, *samples, seed)?;
            let denom = (*q as u128).pow((k * n) as u32);
            let out = format!(
                "seed: {seed}\ndepth: {depth}\nhits: {}/{}\nestimate: {:.6} ± {:.6}\ntarget: 1/{denom}\nwithin 3 standard errors: {}\n",
                est.hits,
                est.samples,
                est.estimate,
                est.stderr,
                if est.z_score() <= 3.0 { "yes" } else { "no" }
            );
            let mut o = Outcome::new(0, out);
            o.seed = Some(seed);
            Ok(o)
        }
        Command::Chains(ChainsCommand::Sample { q, m, seed }) => {
            let seed = seed_or_fresh(*seed);
            let o = sample_uniform_ordering(*q, *m, seed)?;
            let basis: Vec<String> = o
                .least_basis()
                .iter()
                .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                .collect();
            let mut out = format!("seed: {seed}\nleast basis: {}\n", basis.join(","));
            for (i, mat) in chain_matrices(&o)?.iter().enumerate() {
                writeln!(out, "M{}: type {} {mat}", i + 1, matrix_type(mat)).unwrap();
            }
            let mut r = Outcome::new(0, out);
            r.seed = Some(seed);
            Ok(r)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let result = run(&cli.command);
    let (code, output, seed, inputs) = match result {
        Ok(o) => {
            print!("{}", o.output);
            (o.code, o.output, o.seed, o.inputs)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = if e.is_internal() { EXIT_INTERNAL } else { EXIT_INPUT };
            (code, String::new(), None, Vec::new())
        }
    };
    if let Some(path) = &cli.manifest {
        let m = RunManifest::new(std::env::args().skip(1).collect(), &inputs, seed, code, &output, started.elapsed());
        if let Err(e) = m.write(path) {
            eprintln!("error: cannot write manifest: {e}");
        }
    }
    ExitCode::from(code)
}
