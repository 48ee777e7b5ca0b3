//! Command line front end: builds the section lattice of a digraph
//! family, queries Moebius values, meets, joins and chain counts, prints
//! quasi-symmetric series with their symmetric-function oracles, verifies
//! the family isomorphisms, and exports DOT.
//!
//! Exit codes: 0 success (and EQUAL verdicts), 1 usage or input errors,
//! 2 verification failures (including DIFFER), 3 resource cap exceeded.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vdg::flag::{ColoredPermutation, FlagDigraph};
use vdg::io;
use vdg::lattice::{self, BuildOptions, LatticeError, SectionLattice};
use vdg::order::GeneratedOrder;
use vdg::posets::{random_poset, FinitePoset};
use vdg::quasisym::{
    self, columns_a, columns_affine, columns_of_labeling, GeneralizedColumns, QuasisymError,
    TruncatedPolynomial,
};
use vdg::weak_a::{Permutation, StaircaseDigraph};
use vdg::weak_affine::{sufficient_depth, AffinePermutation, CylinderDigraph};
use vdg::weak_b::{ShiftedDigraph, SignedPermutation};
use vdg::{InitialSection, ValuedDigraph, VertexId, VertexSet};

#[derive(Parser)]
#[command(
    name = "vdg",
    version,
    about = "Valued digraphs, their section lattices and series"
)]
struct Cli {
    /// Emit JSON instead of text where applicable
    #[arg(long, global = true)]
    json: bool,
    /// Abort enumerations that materialize more than this many elements
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Seed for random poset generation (downset/upset without --file)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the lattice of initial sections and print a summary, JSON or DOT
    Build {
        #[command(flatten)]
        fam: FamilyArgs,
        /// Stop the construction at this rank
        #[arg(long)]
        max_rank: Option<usize>,
        /// Print the Hasse diagram as DOT
        #[arg(long)]
        dot: bool,
    },
    /// Moebius values mu(empty, A), optionally checked against the recursion
    Moebius {
        #[command(flatten)]
        fam: FamilyArgs,
        /// Single element as comma separated vertex ids
        #[arg(long, conflicts_with = "all")]
        element: Option<String>,
        /// Every element of the lattice
        #[arg(long)]
        all: bool,
        /// Also evaluate the defining recursion and compare
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        max_rank: Option<usize>,
    },
    /// Meet of two initial sections
    Meet {
        #[command(flatten)]
        fam: FamilyArgs,
        /// First element, comma separated vertex ids
        #[arg(long)]
        a: String,
        /// Second element, comma separated vertex ids
        #[arg(long)]
        b: String,
    },
    /// Join of two initial sections, if a common upper bound is materialized
    Join {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        max_rank: Option<usize>,
    },
    /// Number of maximal chains from the empty set to an element
    Chains {
        #[command(flatten)]
        fam: FamilyArgs,
        /// Target element; defaults to the full vertex set
        #[arg(long)]
        element: Option<String>,
    },
    /// Quasi-symmetric series of an element, with optional oracle comparison
    Symfun {
        #[command(flatten)]
        fam: FamilyArgs,
        /// Window of the permutation (type-a, type-b, affine-a, flag)
        #[arg(long, allow_hyphen_values = true)]
        perm: Option<String>,
        /// Colors of a flag element, comma separated
        #[arg(long)]
        colors: Option<String>,
        /// Element of a raw digraph as comma separated vertex ids
        #[arg(long)]
        element: Option<String>,
        /// Poset labeling for downset series, comma separated values
        #[arg(long)]
        labeling: Option<String>,
        /// Number of variables
        #[arg(long, default_value_t = 3)]
        m: u32,
        #[arg(long, value_enum, default_value_t = Method::Gamma)]
        method: Method,
        /// Column sets file (`cols <id> [target ids...]` lines) for
        /// families without a canonical choice
        #[arg(long)]
        columns: Option<PathBuf>,
    },
    /// Check the family order isomorphism against generator oracles
    VerifyIso {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long)]
        max_rank: Option<usize>,
    },
    /// Print the Hasse diagram as DOT
    ExportDot {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long)]
        max_rank: Option<usize>,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Enumerate semi-standard functions on the section
    Gamma,
    /// The symmetric-function oracle of the family
    Oracle,
    /// Both, with an EQUAL/DIFFER verdict
    Both,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Family {
    TypeA,
    TypeB,
    AffineA,
    Flag,
    Downset,
    Upset,
    Raw,
}

#[derive(Args)]
struct FamilyArgs {
    /// Digraph family
    #[arg(value_enum)]
    family: Family,
    /// Staircase/shifted/window size, or random poset size
    #[arg(long)]
    n: Option<u32>,
    /// Number of colors of the flag family
    #[arg(long)]
    r: Option<u32>,
    /// Window depth, in periods, of the affine family
    #[arg(long, default_value_t = 4)]
    depth: u32,
    /// Poset file (downset/upset) or digraph file (raw), text or JSON
    #[arg(long)]
    file: Option<PathBuf>,
    /// Read poset `rel` lines as covers and close transitively
    #[arg(long)]
    covers: bool,
}

/// Global flags, split off the parsed command line.
struct Ctx {
    json: bool,
    cap: Option<usize>,
    seed: u64,
}

enum Failure {
    Usage(String),
    Verification(String),
    Cap(String),
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Failure {
        match e {
            LatticeError::CapExceeded { .. } => Failure::Cap(e.to_string()),
            LatticeError::JoinUnavailable => Failure::Verification(e.to_string()),
        }
    }
}

impl From<QuasisymError> for Failure {
    fn from(e: QuasisymError) -> Failure {
        match e {
            QuasisymError::CapExceeded { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::IoError> for Failure {
    fn from(e: io::IoError) -> Failure {
        Failure::Usage(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Die silently on a closed pipe (`vdg build ... | head`) instead of
/// panicking in the stdlib print machinery.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(m)) => {
            eprintln!("cap exceeded: {m}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let Cli {
        json,
        cap,
        seed,
        cmd,
    } = cli;
    let ctx = Ctx { json, cap, seed };
    match cmd {
        Cmd::Build { fam, max_rank, dot } => {
            let b = resolve(&fam, ctx.seed)?;
            let lat = build_lattice(b.graph(), max_rank, ctx.cap)?;
            if dot {
                print!("{}", lat.to_dot(b.graph(), &b.name()));
            } else if ctx.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&lat.dump(b.graph())).expect("dump serializes")
                );
            } else {
                println!("digraph: {}", b.name());
                println!(
                    "elements: {}{}",
                    lat.len(),
                    if lat.is_complete() {
                        ""
                    } else {
                        " (truncated)"
                    }
                );
                for (r, size) in lat.rank_sizes().iter().enumerate() {
                    println!("rank {r}: {size}");
                }
            }
            Ok(())
        }
        Cmd::Moebius {
            fam,
            element,
            all,
            verify,
            max_rank,
        } => {
            let b = resolve(&fam, ctx.seed)?;
            let g = b.graph();
            let sections: Vec<InitialSection> = if all {
                build_lattice(g, max_rank, ctx.cap)?.elements().to_vec()
            } else {
                let spec = element.ok_or_else(|| usage("pass --element ids or --all"))?;
                vec![parse_section(g, &spec)?]
            };
            println!("rank,element,mu{}", if verify { ",mu_oracle" } else { "" });
            let empty = InitialSection::empty();
            let mut mismatches = 0usize;
            for a in &sections {
                let mu = lattice::moebius(g, a);
                if verify {
                    let oracle = lattice::moebius_recursive(g, &empty, a);
                    if mu != oracle {
                        mismatches += 1;
                    }
                    println!(
                        "{},\"{}\",{},{}",
                        a.len(),
                        label_set(g, a.members()),
                        mu,
                        oracle
                    );
                } else {
                    println!("{},\"{}\",{}", a.len(), label_set(g, a.members()), mu);
                }
            }
            if mismatches > 0 {
                return Err(Failure::Verification(format!(
                    "{mismatches} Moebius value(s) disagree with the recursion"
                )));
            }
            Ok(())
        }
        Cmd::Meet { fam, a, b: second } => {
            let b = resolve(&fam, ctx.seed)?;
            let g = b.graph();
            let x = parse_section(g, &a)?;
            let y = parse_section(g, &second)?;
            let met = lattice::meet(g, &[x, y]);
            println!("{}", label_set(g, met.members()));
            Ok(())
        }
        Cmd::Join {
            fam,
            a,
            b: second,
            max_rank,
        } => {
            let b = resolve(&fam, ctx.seed)?;
            let g = b.graph();
            let x = parse_section(g, &a)?;
            let y = parse_section(g, &second)?;
            let lat = build_lattice(g, max_rank, ctx.cap)?;
            let joined = lattice::join(g, &lat, &[x, y])?;
            println!("{}", label_set(g, joined.members()));
            Ok(())
        }
        Cmd::Chains { fam, element } => {
            let b = resolve(&fam, ctx.seed)?;
            let g = b.graph();
            let a = match element {
                Some(spec) => parse_section(g, &spec)?,
                None => InitialSection::new(g, g.vertices().collect()).map_err(|_| {
                    usage("the full vertex set is not an initial section; pass --element")
                })?,
            };
            println!("{}", lattice::maximal_chain_count(g, &a));
            Ok(())
        }
        Cmd::Symfun {
            fam,
            perm,
            colors,
            element,
            labeling,
            m,
            method,
            columns,
        } => cmd_symfun(
            fam, perm, colors, element, labeling, m, method, columns, &ctx,
        ),
        Cmd::VerifyIso { fam, max_rank } => cmd_verify_iso(fam, max_rank, &ctx),
        Cmd::ExportDot { fam, max_rank } => {
            let b = resolve(&fam, ctx.seed)?;
            let lat = build_lattice(b.graph(), max_rank, ctx.cap)?;
            print!("{}", lat.to_dot(b.graph(), &b.name()));
            Ok(())
        }
    }
}

/// A digraph family instance; owns the underlying valued digraph.
enum Builder {
    TypeA(StaircaseDigraph),
    TypeB(ShiftedDigraph),
    AffineA(CylinderDigraph),
    Flag(FlagDigraph),
    Poset {
        poset: FinitePoset,
        graph: ValuedDigraph,
        upset: bool,
    },
    Raw(ValuedDigraph),
}

impl Builder {
    fn graph(&self) -> &ValuedDigraph {
        match self {
            Builder::TypeA(d) => d.graph(),
            Builder::TypeB(d) => d.graph(),
            Builder::AffineA(d) => d.graph(),
            Builder::Flag(d) => d.graph(),
            Builder::Poset { graph, .. } => graph,
            Builder::Raw(g) => g,
        }
    }

    fn name(&self) -> String {
        match self {
            Builder::TypeA(d) => format!("staircase n={}", d.n()),
            Builder::TypeB(d) => format!("shifted n={}", d.n()),
            Builder::AffineA(d) => format!("cylinder n={} depth={}", d.n(), d.depth()),
            Builder::Flag(d) => format!("flag r={} n={}", d.r(), d.n()),
            Builder::Poset { poset, upset, .. } => {
                format!(
                    "{} of a {}-element poset",
                    if *upset { "upsets" } else { "downsets" },
                    poset.n()
                )
            }
            Builder::Raw(_) => "raw digraph".to_string(),
        }
    }
}

fn need_n(fam: &FamilyArgs, at_least: u32) -> Result<u32, Failure> {
    match fam.n {
        Some(n) if n >= at_least => Ok(n),
        Some(n) => Err(usage(format!(
            "--n {n} is too small for this family (minimum {at_least})"
        ))),
        None => Err(usage("this family needs --n")),
    }
}

fn load_poset(fam: &FamilyArgs, seed: u64) -> Result<FinitePoset, Failure> {
    match &fam.file {
        Some(path) => Ok(io::parse_poset(&read_file(path)?, fam.covers)?),
        None => {
            let n = need_n(fam, 1)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(random_poset(&mut rng, n, 0.35))
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn resolve(fam: &FamilyArgs, seed: u64) -> Result<Builder, Failure> {
    match fam.family {
        Family::TypeA => Ok(Builder::TypeA(StaircaseDigraph::new(need_n(fam, 1)?))),
        Family::TypeB => Ok(Builder::TypeB(ShiftedDigraph::new(need_n(fam, 1)?))),
        Family::AffineA => {
            let n = need_n(fam, 2)?;
            if fam.depth < 1 {
                return Err(usage("--depth must be at least 1"));
            }
            Ok(Builder::AffineA(CylinderDigraph::new(n, fam.depth)))
        }
        Family::Flag => {
            let n = need_n(fam, 1)?;
            let r = fam.r.ok_or_else(|| usage("the flag family needs --r"))?;
            if r < 2 {
                return Err(usage("--r must be at least 2"));
            }
            Ok(Builder::Flag(FlagDigraph::new(r, n)))
        }
        Family::Downset | Family::Upset => {
            let poset = load_poset(fam, seed)?;
            let upset = fam.family == Family::Upset;
            let graph = if upset {
                poset.upset_digraph()
            } else {
                poset.downset_digraph()
            };
            Ok(Builder::Poset {
                poset,
                graph,
                upset,
            })
        }
        Family::Raw => {
            let path = fam
                .file
                .as_ref()
                .ok_or_else(|| usage("the raw family needs --file"))?;
            let text = read_file(path)?;
            let g = if text.trim_start().starts_with('{') {
                io::digraph_from_json(&text)?
            } else {
                io::parse_digraph(&text)?
            };
            Ok(Builder::Raw(g))
        }
    }
}

fn build_lattice(
    g: &ValuedDigraph,
    max_rank: Option<usize>,
    cap: Option<usize>,
) -> Result<SectionLattice, Failure> {
    Ok(lattice::build(
        g,
        &BuildOptions {
            max_rank,
            max_elements: cap,
        },
    )?)
}

fn label_set(g: &ValuedDigraph, s: &VertexSet) -> String {
    let mut out = String::from("{");
    for (i, v) in s.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let label = g.label(v);
        if label.is_empty() {
            let _ = write!(out, "{}", v.0);
        } else {
            out.push_str(label);
        }
    }
    out.push('}');
    out
}

fn parse_ids<T: std::str::FromStr>(spec: &str, what: &str) -> Result<Vec<T>, Failure> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| usage(format!("malformed {what}: `{s}`")))
        })
        .collect()
}

fn parse_section(g: &ValuedDigraph, spec: &str) -> Result<InitialSection, Failure> {
    let ids: Vec<u32> = parse_ids(spec, "vertex id")?;
    let set: VertexSet = ids.into_iter().map(VertexId).collect();
    if let Some(v) = set.iter().find(|&v| !g.is_live(v)) {
        return Err(usage(format!("vertex {} is not in the digraph", v.0)));
    }
    InitialSection::new(g, set).map_err(|e| usage(format!("not an initial section: {e}")))
}

fn parse_columns(text: &str, g: &ValuedDigraph) -> Result<GeneralizedColumns, Failure> {
    let mut sets = vec![VertexSet::empty(); g.id_bound()];
    for (ln, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut words = line.split_whitespace();
        if words.next() != Some("cols") {
            return Err(usage(format!(
                "columns file line {ln}: expected `cols <id> [ids...]`"
            )));
        }
        let v: usize = words
            .next()
            .and_then(|w| w.parse().ok())
            .filter(|&v| v < sets.len())
            .ok_or_else(|| usage(format!("columns file line {ln}: bad vertex id")))?;
        let mut set = VertexSet::empty();
        for w in words {
            let t: u32 = w
                .parse()
                .ok()
                .filter(|&t| (t as usize) < sets.len())
                .ok_or_else(|| usage(format!("columns file line {ln}: bad target id")))?;
            set.insert(VertexId(t));
        }
        sets[v] = set;
    }
    Ok(GeneralizedColumns::new(sets))
}

#[allow(clippy::too_many_arguments)]
fn cmd_symfun(
    fam: FamilyArgs,
    perm: Option<String>,
    colors: Option<String>,
    element: Option<String>,
    labeling: Option<String>,
    m: u32,
    method: Method,
    columns: Option<PathBuf>,
    ctx: &Ctx,
) -> Result<(), Failure> {
    if m < 1 {
        return Err(usage("--m must be at least 1"));
    }
    let need_perm = || -> Result<String, Failure> {
        perm.clone()
            .ok_or_else(|| usage("this family needs --perm"))
    };

    // The gamma side: a digraph, a section and column sets. The oracle
    // side: the family's symmetric function, when one exists.
    let mut oracle: Option<TruncatedPolynomial> = None;
    let (builder, section, cols) = match fam.family {
        Family::TypeA => {
            let window: Vec<u32> = parse_ids(&need_perm()?, "window entry")?;
            let p = Permutation::from_window(window)
                .map_err(|e| usage(format!("bad permutation: {e}")))?;
            if fam.n.is_some_and(|n| n != p.n()) {
                return Err(usage("--n disagrees with the window length"));
            }
            let d = StaircaseDigraph::new(p.n());
            let section = d.section_of(&p);
            let cols = columns_a(&d);
            oracle = Some(quasisym::stanley(&p, m));
            (Builder::TypeA(d), section, cols)
        }
        Family::AffineA => {
            let window: Vec<i64> = parse_ids(&need_perm()?, "window entry")?;
            let p = AffinePermutation::from_window(window)
                .map_err(|e| usage(format!("bad affine permutation: {e}")))?;
            if fam.n.is_some_and(|n| n != p.n()) {
                return Err(usage("--n disagrees with the window length"));
            }
            let depth = fam.depth.max(sufficient_depth(p.n(), &p.inversions()));
            let d = CylinderDigraph::new(p.n(), depth);
            let section = d.section_of(&p).expect("window depth is sufficient");
            let cols = columns_affine(&d);
            oracle = Some(quasisym::affine_stanley(&p, m));
            (Builder::AffineA(d), section, cols)
        }
        Family::Downset => {
            let b = resolve(&fam, ctx.seed)?;
            let Builder::Poset { ref poset, .. } = b else {
                unreachable!()
            };
            let n = poset.n();
            let labeling: Vec<u32> = match labeling {
                Some(spec) => parse_ids(&spec, "label")?,
                None => (1..=n).collect(),
            };
            {
                let mut sorted = labeling.clone();
                sorted.sort_unstable();
                if !sorted.into_iter().eq(1..=n) {
                    return Err(usage("--labeling must be a bijection to 1..=n"));
                }
            }
            let cols = columns_of_labeling(poset, &labeling);
            oracle = Some(quasisym::p_partition_series(poset, &labeling, m));
            let section = InitialSection::new(b.graph(), b.graph().vertices().collect())
                .expect("the ground set is a lower set");
            (b, section, cols)
        }
        Family::TypeB | Family::Flag | Family::Upset | Family::Raw => {
            let path = columns.as_ref().ok_or_else(|| {
                usage("no canonical column sets for this family; pass --columns <file>")
            })?;
            let b = resolve(&fam, ctx.seed)?;
            let cols = parse_columns(&read_file(path)?, b.graph())?;
            let section = match (&b, fam.family) {
                (Builder::TypeB(d), _) => {
                    let window: Vec<i32> = parse_ids(&need_perm()?, "window entry")?;
                    let p = SignedPermutation::from_window(window)
                        .map_err(|e| usage(format!("bad signed permutation: {e}")))?;
                    if p.n() != d.n() {
                        return Err(usage("--n disagrees with the window length"));
                    }
                    d.section_of(&p)
                }
                (Builder::Flag(d), _) => {
                    let window: Vec<u32> = parse_ids(&need_perm()?, "window entry")?;
                    let cvec: Vec<u32> = parse_ids(
                        &colors
                            .clone()
                            .ok_or_else(|| usage("the flag family needs --colors"))?,
                        "color",
                    )?;
                    let p = Permutation::from_window(window)
                        .map_err(|e| usage(format!("bad permutation: {e}")))?;
                    let cp = ColoredPermutation::new(d.r(), cvec, p)
                        .map_err(|e| usage(format!("bad flag element: {e}")))?;
                    d.section_of(&cp)
                }
                _ => {
                    let spec = element.clone().ok_or_else(|| usage("pass --element ids"))?;
                    parse_section(b.graph(), &spec)?
                }
            };
            (b, section, cols)
        }
    };

    if method != Method::Gamma && oracle.is_none() {
        return Err(usage("this family has no oracle; use --method gamma"));
    }
    let gamma_poly = if method == Method::Oracle {
        None
    } else {
        Some(quasisym::gamma(
            builder.graph(),
            &section,
            &cols,
            m,
            ctx.cap,
        )?)
    };

    if ctx.json {
        let mut obj = serde_json::Map::new();
        obj.insert("m".into(), m.into());
        if let Some(g) = &gamma_poly {
            obj.insert(
                "gamma".into(),
                serde_json::to_value(g.dump()).expect("serializes"),
            );
        }
        if method != Method::Gamma {
            let o = oracle.as_ref().expect("checked above");
            obj.insert(
                "oracle".into(),
                serde_json::to_value(o.dump()).expect("serializes"),
            );
        }
        if method == Method::Both {
            obj.insert("equal".into(), (gamma_poly == oracle).into());
        }
        println!("{}", serde_json::Value::Object(obj));
    } else {
        match method {
            Method::Gamma => println!("{}", gamma_poly.as_ref().expect("computed")),
            Method::Oracle => println!("{}", oracle.as_ref().expect("checked above")),
            Method::Both => {
                println!("gamma: {}", gamma_poly.as_ref().expect("computed"));
                println!("oracle: {}", oracle.as_ref().expect("checked above"));
                println!(
                    "{}",
                    if gamma_poly == oracle {
                        "EQUAL"
                    } else {
                        "DIFFER"
                    }
                );
            }
        }
    }
    if method == Method::Both && gamma_poly != oracle {
        return Err(Failure::Verification("series and oracle differ".into()));
    }
    Ok(())
}

/// One named check; prints its verdict and feeds the failure count.
fn check(failures: &mut usize, name: &str, ok: bool) {
    if ok {
        println!("ok: {name}");
    } else {
        println!("FAIL: {name}");
        *failures += 1;
    }
}

/// Compares lattice covers with a generator oracle through a section map.
fn covers_match<E: Clone + Eq + Ord + std::hash::Hash>(
    lat: &SectionLattice,
    order: &GeneratedOrder<E>,
    section_of: impl Fn(&E) -> InitialSection,
) -> bool {
    if lat.len() != order.len() {
        return false;
    }
    let mapped: Vec<Option<usize>> = order
        .elements
        .iter()
        .map(|e| lat.index_of(section_of(e).members()))
        .collect();
    if mapped.iter().any(Option::is_none) {
        return false;
    }
    let mapped: Vec<usize> = mapped.into_iter().map(Option::unwrap).collect();
    let distinct: BTreeSet<usize> = mapped.iter().copied().collect();
    if distinct.len() != lat.len() {
        return false;
    }
    if (0..order.len()).any(|i| lat.rank_of(mapped[i]) != order.length[i]) {
        return false;
    }
    let mut oracle_covers: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..order.len() {
        for &j in &order.covers_up[i] {
            oracle_covers.insert((mapped[i], mapped[j]));
        }
    }
    let lattice_covers: BTreeSet<(usize, usize)> = (0..lat.len())
        .flat_map(|i| lat.covers_up(i).iter().map(move |&j| (i, j)))
        .collect();
    oracle_covers == lattice_covers
}

fn factorial(n: u32) -> usize {
    (1..=n as usize).product()
}

fn cmd_verify_iso(fam: FamilyArgs, max_rank: Option<usize>, ctx: &Ctx) -> Result<(), Failure> {
    let mut failures = 0usize;
    match fam.family {
        Family::TypeA => {
            let n = need_n(&fam, 1)?;
            let d = StaircaseDigraph::new(n);
            let lat = build_lattice(d.graph(), None, ctx.cap)?;
            check(
                &mut failures,
                &format!("staircase n={n} has n! sections"),
                lat.len() == factorial(n),
            );
            let order = vdg::weak_a::weak_order(n, None);
            let ok = covers_match(&lat, &order, |w| {
                d.section_of(&Permutation::from_window(w.clone()).expect("generated window"))
            });
            check(&mut failures, "inclusion order matches the weak order", ok);
        }
        Family::TypeB => {
            let n = need_n(&fam, 1)?;
            let d = ShiftedDigraph::new(n);
            let lat = build_lattice(d.graph(), None, ctx.cap)?;
            check(
                &mut failures,
                &format!("shifted n={n} has 2^n n! sections"),
                lat.len() == (1 << n) * factorial(n),
            );
            check(
                &mut failures,
                "diagram has n^2 boxes with even out-degrees",
                d.boxes().len() == (n * n) as usize
                    && d.graph()
                        .vertices()
                        .all(|v| d.graph().out_degree(v).is_multiple_of(2)),
            );
            let order = vdg::weak_b::weak_order(n, None);
            let ok = covers_match(&lat, &order, |w| {
                d.section_of(&SignedPermutation::from_window(w.clone()).expect("generated window"))
            });
            check(&mut failures, "inclusion order matches the weak order", ok);
        }
        Family::AffineA => {
            let n = need_n(&fam, 2)?;
            let k = max_rank.unwrap_or(4);
            let order = vdg::weak_affine::weak_order(n, k);
            let census = order.count_by_length();
            for extra in [0u32, 2] {
                let d = CylinderDigraph::new(n, fam.depth + extra);
                let lat = build_lattice(d.graph(), Some(k), ctx.cap)?;
                check(
                    &mut failures,
                    &format!(
                        "rank census at depth {} matches group growth",
                        fam.depth + extra
                    ),
                    lat.rank_sizes() == census,
                );
            }
        }
        Family::Flag => {
            let n = need_n(&fam, 1)?;
            let r = fam.r.ok_or_else(|| usage("the flag family needs --r"))?;
            if r < 2 {
                return Err(usage("--r must be at least 2"));
            }
            let d = FlagDigraph::new(r, n);
            let lat = build_lattice(d.graph(), None, ctx.cap)?;
            check(
                &mut failures,
                &format!("flag r={r} n={n} has r^n n! sections"),
                lat.len() == (r as usize).pow(n) * factorial(n),
            );
            let round_trips =
                lat.elements()
                    .iter()
                    .all(|a| match d.colored_permutation_of(a.members()) {
                        Ok(p) => d.section_of(&p) == *a && p.finv() == a.len(),
                        Err(_) => false,
                    });
            check(
                &mut failures,
                "reconstruction round-trips with rank = finv",
                round_trips,
            );
            let order = vdg::flag::flag_order(r, n);
            let ok = covers_match(&lat, &order, |(cs, w)| {
                let p = Permutation::from_window(w.clone()).expect("generated window");
                d.section_of(&ColoredPermutation::new(r, cs.clone(), p).expect("generated element"))
            });
            check(
                &mut failures,
                "inclusion order matches the flag weak order",
                ok,
            );
        }
        Family::Downset | Family::Upset => {
            let poset = load_poset(&fam, ctx.seed)?;
            if poset.n() > 10 {
                return Err(usage(
                    "exhaustive poset verification is limited to 10 elements",
                ));
            }
            let upset = fam.family == Family::Upset;
            let graph = if upset {
                poset.upset_digraph()
            } else {
                poset.downset_digraph()
            };
            let lat = build_lattice(&graph, None, ctx.cap)?;
            let family: BTreeSet<VertexSet> =
                lat.elements().iter().map(|e| e.members().clone()).collect();
            let expected: BTreeSet<VertexSet> = if upset {
                poset.upper_sets().into_iter().collect()
            } else {
                poset.lower_sets().into_iter().collect()
            };
            check(
                &mut failures,
                if upset {
                    "sections are exactly the upper sets"
                } else {
                    "sections are exactly the lower sets"
                },
                family == expected,
            );
            if !upset {
                let full: VertexSet = graph.vertices().collect();
                let peelings: BTreeSet<Vec<VertexId>> =
                    graph.peeling_sequences(&full).into_iter().collect();
                let extensions: BTreeSet<Vec<VertexId>> =
                    poset.linear_extensions().into_iter().collect();
                check(
                    &mut failures,
                    "peeling sequences are the linear extensions",
                    peelings == extensions,
                );
            }
        }
        Family::Raw => {
            let b = resolve(&fam, ctx.seed)?;
            let g = b.graph();
            let lat = build_lattice(g, max_rank, ctx.cap)?;
            let empty = InitialSection::empty();
            let ok = lat
                .elements()
                .iter()
                .all(|a| lattice::moebius(g, a) == lattice::moebius_recursive(g, &empty, a));
            check(
                &mut failures,
                "Moebius formula matches the recursion on all elements",
                ok,
            );
        }
    }
    if failures > 0 {
        Err(Failure::Verification(format!("{failures} check(s) failed")))
    } else {
        Ok(())
    }
}
