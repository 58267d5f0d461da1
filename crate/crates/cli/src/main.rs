use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mstd::analysis::{
    check_k_generational, classify, diff_dominance_check, fringe_windows, growth_profile, growth_profile_through,
    membership_in_kfold, nathanson_stabilize, theorem_a1_scan, verify_chain, verify_generalized, Verdict,
    VerificationReport,
};
use mstd::combinators::{build_chain, build_k_generational, ChainSpec};
use mstd::constructions::{build_1d, build_2d, build_ddim, Construction, ConstructionParams};
use mstd::io::{classifications_tsv, parse_pts, render_pbm, reports_tsv, write_pts};
use mstd::montecarlo::{estimate_density, trial_hits, Predicate};
use mstd::{iterated_sumdiff, Error, PointSet, SumDiffSpec};

#[derive(Parser)]
#[command(name = "mstd", version, about = "Sum-dominant lattice sets: construct, measure, verify")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a generalized MSTD set and write it as .pts.
    Construct(ConstructArgs),
    /// Write sA - dA of a set.
    Sumdiff {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        d: u32,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print |A+A|, |A-A| and the verdict.
    Classify { input: PathBuf },
    /// Check |s1A - d1A| > |s2A - d2A|.
    Verify {
        #[command(flatten)]
        specs: SpecPair,
        input: PathBuf,
        /// Also print missing points per orthant of each side.
        #[arg(long)]
        details: bool,
    },
    /// Build or verify a chain of generalized MSTD sets.
    Chain {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, conflicts_with = "verify")]
        build: bool,
        #[arg(long, value_name = "IN")]
        verify: Option<PathBuf>,
        /// Write the built set (with --build).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build or check a k-generational set.
    Kgen {
        #[arg(long)]
        k: u32,
        #[arg(long, conflicts_with = "check")]
        build: bool,
        #[arg(long, value_name = "IN")]
        check: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decompose kA for large k.
    Stabilize { input: PathBuf },
    /// Fit the missing-point count of kA.
    Growth {
        input: PathBuf,
        #[arg(long)]
        kmax: Option<u64>,
    },
    /// Check |kA - kA| >= |kA + kA|.
    Diffdom {
        #[arg(long)]
        k: u64,
        input: PathBuf,
    },
    /// Estimate the density of sets satisfying a predicate.
    Density(DensityArgs),
    /// Run the fixed suite of corrected 1D claims.
    AppendixCheck,
    /// Render a planar set as plain PBM.
    Render {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    #[value(name = "1d")]
    OneD,
    Square,
    Rect,
    Para,
    Ddim,
}

#[derive(Args)]
struct SpecPair {
    #[arg(long)]
    s1: u32,
    #[arg(long)]
    d1: u32,
    #[arg(long)]
    s2: u32,
    #[arg(long)]
    d2: u32,
}

impl SpecPair {
    fn specs(&self) -> (SumDiffSpec, SumDiffSpec) {
        (SumDiffSpec::new(self.s1, self.d1), SumDiffSpec::new(self.s2, self.d2))
    }
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    k: i64,
    /// Side lengths; repeat or separate with commas.
    #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
    n: Vec<i64>,
    /// Dimension for --kind ddim when a single side is given.
    #[arg(long)]
    dim: Option<usize>,
    #[command(flatten)]
    specs: SpecPair,
    /// Shear slopes m12, m13, ..., m23, ...
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    slope: Vec<i64>,
    /// Allow sides at or below 4(2k^2+1).
    #[arg(long)]
    force: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DensityArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    /// `mstd`, `never`, or `s1,d1:s2,d2`.
    #[arg(long, default_value = "mstd", value_parser = parse_predicate)]
    predicate: Predicate,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Write one line per hit: trial index and the sampled set.
    #[arg(long)]
    log: Option<PathBuf>,
}

fn parse_predicate(s: &str) -> std::result::Result<Predicate, String> {
    match s {
        "mstd" => return Ok(Predicate::Mstd),
        "never" => return Ok(Predicate::Never),
        _ => {}
    }
    let spec = |t: &str| -> std::result::Result<SumDiffSpec, String> {
        let (a, b) = t.split_once(',').ok_or_else(|| format!("expected 's,d', found {t:?}"))?;
        let a = a.trim().parse().map_err(|_| format!("bad integer {a:?}"))?;
        let b = b.trim().parse().map_err(|_| format!("bad integer {b:?}"))?;
        Ok(SumDiffSpec::new(a, b))
    };
    let (l, r) = s.split_once(':').ok_or_else(|| format!("expected mstd, never or s1,d1:s2,d2, found {s:?}"))?;
    Ok(Predicate::Generalized(spec(l)?, spec(r)?))
}

/// Failure of a command, carrying its exit code.
enum Failure {
    /// A check ran and did not hold.
    Verification,
    /// Bad arguments or input.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read_text(path: &Path) -> std::result::Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_set(path: &Path) -> std::result::Result<PointSet, Failure> {
    let text = read_text(path)?;
    parse_pts(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
        }
        _ => {
            io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn construct(args: &ConstructArgs) -> Outcome {
    let (spec1, spec2) = args.specs.specs();
    let dims = match (args.kind, args.n.as_slice()) {
        (Kind::OneD, [n]) => vec![*n],
        (Kind::Square, [n]) => vec![*n, *n],
        (Kind::Rect | Kind::Para, [n]) => vec![*n, *n],
        (Kind::Rect | Kind::Para, [n1, n2]) => vec![*n1, *n2],
        (Kind::Ddim, [n]) => vec![*n; args.dim.unwrap_or(3)],
        (Kind::Ddim, ns) if args.dim.map_or(true, |d| d == ns.len()) => ns.to_vec(),
        (_, ns) => return Err(Failure::Usage(format!("--kind does not accept {} side length(s)", ns.len()))),
    };
    if matches!(args.kind, Kind::OneD) && !args.slope.is_empty() {
        return Err(Failure::Usage("--slope needs at least two dimensions".into()));
    }
    if matches!(args.kind, Kind::Para) && args.slope.is_empty() {
        return Err(Failure::Usage("--kind para needs --slope".into()));
    }
    let mut params = ConstructionParams::new(args.k, dims, spec1, spec2).with_slopes(args.slope.clone());
    if args.force {
        params = params.forced();
    }
    let Construction { set, meta } = match args.kind {
        Kind::OneD => build_1d(&params)?,
        Kind::Ddim => build_ddim(&params)?,
        _ => build_2d(&params)?,
    };
    emit(args.output.as_deref(), &write_pts(&set))?;
    let mut note = format!("{} points, dim {}, middle offset {}", set.len(), set.dim(), meta.middle_offset);
    if meta.swapped1 || meta.swapped2 {
        let _ = write!(note, ", normalized to {} vs {}", meta.spec1, meta.spec2);
    }
    if !meta.guaranteed {
        note.push_str(", below the guaranteed side length");
    }
    eprintln!("{note}");
    Ok(())
}

fn print_reports(reports: &[VerificationReport], details: bool) {
    print!("{}", reports_tsv(reports));
    if details {
        for r in reports {
            for (key, count) in &r.details {
                println!("{key}\t{count}");
            }
        }
    }
}

fn stabilize(input: &Path) -> Outcome {
    let a = read_set(input)?;
    let p = nathanson_stabilize(&a)?;
    let join = |xs: &[i64]| xs.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
    println!("C\t{}", join(&p.c_set));
    println!("c\t{}", p.c);
    println!("d\t{}", p.d_r);
    println!("D\t{}", join(&p.d_set));
    println!("k_threshold\t{}", p.k_threshold);
    Ok(())
}

fn growth(input: &Path, kmax: Option<u64>) -> Outcome {
    let a = read_set(input)?;
    let g = match kmax {
        Some(k) => growth_profile_through(&a, k),
        None => growth_profile(&a),
    };
    let g = match g {
        Ok(g) => g,
        Err(e @ (Error::Structure(_) | Error::Hypothesis(_))) => {
            eprintln!("mstd: {e}");
            return Err(Failure::Verification);
        }
        Err(e) => return Err(e.into()),
    };
    let h = &g.hypotheses;
    println!("a\t{}\na'\t{}\nb\t{}\nb'\t{}\nN\t{}", h.a, h.a_prime, h.b, h.b_prime, h.n);
    println!("alpha\t{}\nbeta\t{}", g.alpha, g.beta);
    println!("missing_columns\t{}\nmissing_rows\t{}", g.missing_columns, g.missing_rows);
    println!("k\tmissing");
    for (i, mu) in g.missing.iter().enumerate() {
        println!("{}\t{mu}", g.fit_range.0 + i as u64);
    }
    Ok(())
}

fn density(args: &DensityArgs) -> Outcome {
    let e = estimate_density(args.n, args.trials, args.seed, args.predicate, args.workers)?;
    println!(
        "n={}\ttrials={}\tseed={}\thits={}\tproportion={:.6e}\tci95=[{:.6e}, {:.6e}]",
        e.n, e.trials, e.seed, e.hits, e.proportion, e.ci_low, e.ci_high
    );
    if let Some(path) = &args.log {
        let mut log = String::from("trial\tset\n");
        for i in trial_hits(args.n, args.trials, args.seed, args.predicate, args.workers)? {
            let xs = mstd::montecarlo::sample_subset(args.n, args.seed, i)?.to_ints()?;
            let set = xs.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
            let _ = writeln!(log, "{i}\t{set}");
        }
        emit(Some(path), &log)?;
    }
    Ok(())
}

fn appendix_check() -> Outcome {
    let mut all = true;
    let mut line = |name: &str, ok: bool, detail: String| {
        all &= ok;
        println!("{}\t{name}\t{detail}", if ok { "PASS" } else { "FAIL" });
    };

    for (s1, s2, want) in [((4, 0), (2, 2), 1), ((2, 2), (4, 0), 2)] {
        let spec1 = SumDiffSpec::new(s1.0, s1.1);
        let spec2 = SumDiffSpec::new(s2.0, s2.1);
        let a = build_1d(&ConstructionParams::new(4, vec![136], spec1, spec2))?.set;
        let r = verify_generalized(&a, spec1, spec2)?;
        line(&format!("1d gap {spec1} vs {spec2}"), r.gap == want, format!("gap {:+}, expected {want:+}", r.gap));
    }

    let a = PointSet::from_ints(&[0, 5, 8]);
    let in8 = membership_in_kfold(&a, 54, 8)?;
    let in9 = membership_in_kfold(&a, 54, 9)?;
    line("54 in kA for A={0,5,8}", !in8 && in9, format!("k=8 {in8}, k=9 {in9}"));

    for (xs, k) in [(&[0, 2, 3, 5][..], 5), (&[0, 1, 3, 4][..], 4), (&[0, 3, 4, 7][..], 7)] {
        let w = fringe_windows(&PointSet::from_ints(xs), k)?;
        line(
            &format!("right fringe window {xs:?} k={k}"),
            w.mirrored,
            format!("corrected window mirrored {}, uncorrected {}", w.mirrored, w.short_mirrored),
        );
    }

    let scan = theorem_a1_scan(8, 7, 6)?;
    let mstd_sets = scan.iter().filter(|i| !i.report.passed).count();
    line("no MSTD set in the a1<=8, x<=7, m<=6 family", mstd_sets == 0, format!("{} sets, {mstd_sets} MSTD", scan.len()));

    verdict(all)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Construct(args) => construct(&args),
        Command::Sumdiff { s, d, input, output } => {
            let a = read_set(&input)?;
            emit(output.as_deref(), &write_pts(&iterated_sumdiff(&a, SumDiffSpec::new(s, d))?))
        }
        Command::Classify { input } => {
            let c = classify(&read_set(&input)?)?;
            println!("{c}");
            Ok(())
        }
        Command::Verify { specs, input, details } => {
            let (s1, s2) = specs.specs();
            let r = verify_generalized(&read_set(&input)?, s1, s2)?;
            print_reports(std::slice::from_ref(&r), details);
            verdict(r.passed)
        }
        Command::Chain { spec, verify, output, .. } => {
            let spec = ChainSpec::parse(&read_text(&spec)?)?;
            let reports = match verify {
                Some(input) => verify_chain(&read_set(&input)?, &spec)?,
                None => {
                    let chain = build_chain(&spec)?;
                    if let Some(path) = output.as_deref() {
                        emit(Some(path), &write_pts(&chain.materialize()?))?;
                    }
                    verify_chain(&chain, &spec)?
                }
            };
            print_reports(&reports, false);
            verdict(reports.iter().all(|r| r.passed))
        }
        Command::Kgen { k, check, output, .. } => {
            let rows = match check {
                Some(input) => check_k_generational(&read_set(&input)?, k)?,
                None => {
                    let set = build_k_generational(k)?;
                    if let Some(path) = output.as_deref() {
                        emit(Some(path), &write_pts(&set.materialize()?))?;
                    }
                    check_k_generational(&set, k)?
                }
            };
            print!("{}", classifications_tsv(&rows));
            verdict(rows.iter().all(|c| c.verdict == Verdict::Mstd))
        }
        Command::Stabilize { input } => stabilize(&input),
        Command::Growth { input, kmax } => growth(&input, kmax),
        Command::Diffdom { k, input } => {
            let r = diff_dominance_check(&read_set(&input)?, k)?;
            print_reports(std::slice::from_ref(&r), false);
            verdict(r.passed)
        }
        Command::Density(args) => density(&args),
        Command::AppendixCheck => appendix_check(),
        Command::Render { input, output } => emit(output.as_deref(), &render_pbm(&read_set(&input)?)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("mstd: {msg}");
            ExitCode::from(2)
        }
    }
}
