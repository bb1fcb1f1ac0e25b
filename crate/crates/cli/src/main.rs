use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use latin_quandles::algebra::{admissible_class_reps, AbelianGroup2, EndoMatrix, ModMatrix};
use latin_quandles::onoi::{aff_of_onoi, four_element_rings, OnoiRing};
use latin_quandles::quandle::{affine_quandle, is_isomorphic, MagmaTable};
use latin_quandles::search::{
    construct_extension_256, construct_extension_64, construct_product, extension_medial_seed,
    search,
};
use latin_quandles::solver::{assemble, solve_zld};

#[derive(Parser)]
#[command(name = "latin-quandles", version, about = "Latin quandles of 2-power order: construction, verification, and search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check properties of an operation table
    Verify {
        /// Table file in the quandle text format
        table_file: PathBuf,
        /// Restrict to specific properties (default: all)
        #[arg(long = "property", value_enum)]
        properties: Vec<Property>,
    },
    /// Build a named construction and write its table
    Construct(ConstructArgs),
    /// Solve the Z_LD system for a base quandle, fiber group, and psi
    SolveCocycles {
        #[arg(long)]
        quandle: PathBuf,
        /// Fiber signature, e.g. "1,1" for Z_2^2 or "2,2" for Z_4^2
        #[arg(long)]
        group: String,
        /// Matrix file for psi ("mod 2^e rows cols" header)
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the order-2^k search for non-affine central extensions
    Search {
        #[arg(long)]
        k: u32,
        /// Required for k = 7 (hours of computation)
        #[arg(long)]
        long_run: bool,
        /// Worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        report: PathBuf,
    },
    /// Decide isomorphism of two tables (exit 0 if isomorphic, 2 if not)
    Isomorphic { f1: PathBuf, f2: PathBuf },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Property {
    Latin,
    Idempotent,
    LeftDistributive,
    Quandle,
    Medial,
}

#[derive(Args)]
struct ConstructArgs {
    /// One of: affine, onoi-affine, extension-64, extension-256, product
    kind: String,
    /// Group signature for `affine`, e.g. "1,1,1"
    #[arg(long)]
    group: Option<String>,
    /// Matrix file for psi (for `affine`)
    #[arg(long)]
    psi: Option<PathBuf>,
    /// Index into the admissible psi conjugacy classes (for `affine`)
    #[arg(long)]
    psi_class: Option<usize>,
    /// Onoi ring file (for `onoi-affine`, `extension-64`, `extension-256`)
    #[arg(long)]
    ring: Option<PathBuf>,
    /// Builtin 4-element ring index 0..=3 (0 = zero ring)
    #[arg(long)]
    ring_index: Option<usize>,
    /// Left factor table (for `product`)
    #[arg(long)]
    left: Option<PathBuf>,
    /// Right factor table (for `product`)
    #[arg(long)]
    right: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

fn parse_signature(s: &str) -> Result<AbelianGroup2> {
    let sig: Vec<u32> = s
        .split(',')
        .map(|t| t.trim().parse::<u32>().context("bad signature entry"))
        .collect::<Result<_>>()?;
    AbelianGroup2::new(sig).map_err(|e| anyhow!("{e}"))
}

fn read_table(path: &PathBuf) -> Result<MagmaTable> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    MagmaTable::from_text(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn read_psi(path: &PathBuf, g: &AbelianGroup2) -> Result<EndoMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let m = ModMatrix::from_text(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let n = g.rank();
    if m.rows() != n || m.cols() != n {
        bail!("psi must be {n}x{n} for this group, got {}x{}", m.rows(), m.cols());
    }
    let expected = g.moduli().iter().copied().max().unwrap_or(2);
    if m.modulus() != expected {
        bail!("psi modulus {} does not match the group (expected {expected})", m.modulus());
    }
    let entries: Vec<u64> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| m.entry(i, j) as u64)
        .collect();
    EndoMatrix::new(g.clone(), entries).map_err(|e| anyhow!("{e}"))
}

fn read_ring(args_ring: &Option<PathBuf>, args_index: &Option<usize>) -> Result<OnoiRing> {
    match (args_ring, args_index) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)?;
            OnoiRing::from_text(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
        }
        (None, idx) => {
            let i = idx.unwrap_or(1);
            four_element_rings()
                .get(i)
                .cloned()
                .ok_or_else(|| anyhow!("ring index {i} out of range 0..=3"))
        }
        (Some(_), Some(_)) => bail!("give either --ring or --ring-index, not both"),
    }
}

fn property_summary(t: &MagmaTable, medial_seeds: &[(usize, usize, usize, usize)]) -> String {
    let mut out = format!("order {}\n", t.order());
    out.push_str(&format!("latin {}\n", t.is_latin()));
    out.push_str(&format!("idempotent {}\n", t.is_idempotent()));
    out.push_str(&format!("left-distributive {}\n", t.is_left_distributive()));
    out.push_str(&format!("quandle {}\n", t.is_quandle()));
    match t.medial_witness_seeded(medial_seeds) {
        None => out.push_str("medial true\n"),
        Some(w) => out.push_str(&format!(
            "medial false witness ({},{},{},{})\n",
            w.a, w.b, w.c, w.d
        )),
    }
    out
}

fn run_verify(table_file: &PathBuf, properties: &[Property]) -> Result<()> {
    let t = read_table(table_file)?;
    let all = [
        Property::Latin,
        Property::Idempotent,
        Property::LeftDistributive,
        Property::Quandle,
        Property::Medial,
    ];
    let selected: &[Property] = if properties.is_empty() { &all } else { properties };
    println!("order {}", t.order());
    for p in selected {
        match p {
            Property::Latin => println!("latin {}", t.is_latin()),
            Property::Idempotent => println!("idempotent {}", t.is_idempotent()),
            Property::LeftDistributive => {
                println!("left-distributive {}", t.is_left_distributive())
            }
            Property::Quandle => println!("quandle {}", t.is_quandle()),
            Property::Medial => match t.medial_witness() {
                None => println!("medial true"),
                Some(w) => println!("medial false witness ({},{},{},{})", w.a, w.b, w.c, w.d),
            },
        }
    }
    Ok(())
}

fn run_construct(args: &ConstructArgs) -> Result<()> {
    let mut medial_seeds: Vec<(usize, usize, usize, usize)> = Vec::new();
    let table = match args.kind.as_str() {
        "affine" => {
            let g = parse_signature(
                args.group
                    .as_deref()
                    .ok_or_else(|| anyhow!("affine needs --group"))?,
            )?;
            let psi = match (&args.psi, args.psi_class) {
                (Some(path), None) => read_psi(path, &g)?,
                (None, class) => {
                    let reps = admissible_class_reps(&g).map_err(|e| anyhow!("{e}"))?;
                    let i = class.unwrap_or(0);
                    reps.get(i)
                        .cloned()
                        .ok_or_else(|| anyhow!("psi class {i} out of range (found {})", reps.len()))?
                }
                (Some(_), Some(_)) => bail!("give either --psi or --psi-class, not both"),
            };
            affine_quandle(&g, &psi).map_err(|e| anyhow!("{e}"))?
        }
        "onoi-affine" => {
            let ring = read_ring(&args.ring, &args.ring_index)?;
            aff_of_onoi(&ring)
        }
        "extension-64" => {
            let ring = read_ring(&args.ring, &args.ring_index)?;
            medial_seeds.extend(extension_medial_seed(&ring, 64).map_err(|e| anyhow!("{e}"))?);
            construct_extension_64(&ring).map_err(|e| anyhow!("{e}"))?
        }
        "extension-256" => {
            let ring = read_ring(&args.ring, &args.ring_index)?;
            medial_seeds.extend(extension_medial_seed(&ring, 256).map_err(|e| anyhow!("{e}"))?);
            construct_extension_256(&ring).map_err(|e| anyhow!("{e}"))?
        }
        "product" => {
            let l = read_table(args.left.as_ref().ok_or_else(|| anyhow!("product needs --left"))?)?;
            let r = read_table(args.right.as_ref().ok_or_else(|| anyhow!("product needs --right"))?)?;
            construct_product(&l, &r)
        }
        other => bail!("unknown construction kind {other:?}"),
    };
    fs::write(&args.out, table.to_text())
        .with_context(|| format!("writing {}", args.out.display()))?;
    print!("{}", property_summary(&table, &medial_seeds));
    Ok(())
}

fn run_solve_cocycles(quandle: &PathBuf, group: &str, psi: &PathBuf, out: &PathBuf) -> Result<()> {
    let f = read_table(quandle)?;
    let g = parse_signature(group)?;
    let psi = read_psi(psi, &g)?;
    let system = assemble(&f, &g, &psi).map_err(|e| anyhow!("{e}"))?;
    let gens = solve_zld(&system);
    let mut text = format!(
        "unknowns {} rows {} generators {}\n",
        system.unknowns(),
        system.matrix().rows(),
        gens.len()
    );
    for gen in &gens {
        text.push('\n');
        text.push_str(&gen.to_text());
    }
    fs::write(out, &text).with_context(|| format!("writing {}", out.display()))?;
    println!(
        "solved: {} unknowns, {} generators -> {}",
        system.unknowns(),
        gens.len(),
        out.display()
    );
    Ok(())
}

fn run_search(k: u32, long_run: bool, jobs: Option<usize>, report: &PathBuf) -> Result<()> {
    if k == 7 && !long_run {
        bail!("k = 7 takes hours; pass --long-run to confirm");
    }
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring thread pool")?;
    }
    let result = search(k).map_err(|e| anyhow!("{e}"))?;
    fs::write(report, result.to_text())
        .with_context(|| format!("writing {}", report.display()))?;
    eprintln!("elapsed: {:.1?}", result.elapsed);
    println!(
        "verdict {} ({} records) -> {}",
        if result.verdict_yes() { "YES" } else { "NO" },
        result.records.len(),
        report.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify {
            table_file,
            properties,
        } => run_verify(table_file, properties),
        Command::Construct(args) => run_construct(args),
        Command::SolveCocycles {
            quandle,
            group,
            psi,
            out,
        } => run_solve_cocycles(quandle, group, psi, out),
        Command::Search {
            k,
            long_run,
            jobs,
            report,
        } => run_search(*k, *long_run, *jobs, report),
        Command::Isomorphic { f1, f2 } => {
            return match (read_table(f1), read_table(f2)) {
                (Ok(a), Ok(b)) => match is_isomorphic(&a, &b) {
                    Some(map) => {
                        let image: Vec<String> = map.iter().map(|x| x.to_string()).collect();
                        println!("isomorphic {}", image.join(" "));
                        ExitCode::SUCCESS
                    }
                    None => {
                        println!("not-isomorphic");
                        ExitCode::from(2)
                    }
                },
                (Err(e), _) | (_, Err(e)) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
