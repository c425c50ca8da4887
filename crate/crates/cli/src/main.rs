//! `div`: build glued triangle volumes, derive their descriptors, run the
//! census and pair search, and certify pairs with the discrete eigensolver.
//!
//! Every subcommand writes a machine-readable result file (JSON or CSV) and
//! prints a human-readable log. Exit code 0 means all requested checks
//! passed; computational failures exit 1, usage errors exit 2.

mod report;
mod tiles;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use div_core::algebra::{
    adjacency, auxiliary, generators_of, graph_of, orientation_coloring, structural,
};
use div_core::fixtures;
use div_core::search::{census_from_json, census_to_json, classify, enumerate_divs, find_pairs, PairsFile};
use div_core::spectral::sym_eigen;
use div_core::tiling::{div_from_json, div_to_json, div_to_svg, Div, Word};

#[derive(Parser)]
#[command(name = "div", version, about = "glued triangle volumes: construction, census, spectra, transplantation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct TileArg {
    /// Tile file (JSON) or a builtin name: equilateral, scalene, isosceles
    #[arg(long, default_value = "equilateral")]
    tile: String,
}

#[derive(Subcommand)]
enum Command {
    /// Build a volume from gluing words and print its generator action
    Build {
        /// Comma-separated gluing words over {a,b,c}; "e" is the empty word
        #[arg(long)]
        words: String,
        #[command(flatten)]
        tile: TileArg,
        /// Output volume file
        #[arg(long, default_value = "div.json")]
        out: PathBuf,
        /// Optional SVG rendering
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Enumerate all volumes of n copies up to equivalence
    Enumerate {
        #[command(flatten)]
        tile: TileArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "census.json")]
        out: PathBuf,
        /// Worker threads for class annotation
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Enumerate and print the classification table
    Classify {
        #[command(flatten)]
        tile: TileArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "census.json")]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Find cospectral class pairs in a census
    Pairs {
        #[arg(long)]
        census: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value = "pairs.json")]
        out: PathBuf,
    },
    /// Auxiliary-matrix spectrum of a volume
    Spectrum {
        /// Volume file
        #[arg(long, conflicts_with = "paper_fixtures")]
        div: Option<PathBuf>,
        /// Use a built-in seven-copy volume: left or right
        #[arg(long, value_name = "SIDE")]
        paper_fixtures: Option<String>,
        #[arg(long, default_value = "spectrum.csv")]
        out: PathBuf,
    },
    /// Discrete Dirichlet spectrum of a volume
    Fem {
        #[arg(long, conflicts_with = "paper_fixtures")]
        div: Option<PathBuf>,
        #[arg(long, value_name = "SIDE")]
        paper_fixtures: Option<String>,
        #[arg(long, default_value_t = 4)]
        refine: usize,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value = "spectrum.csv")]
        out: PathBuf,
        /// Write eigenfunctions as per-copy CSV blocks with this prefix
        #[arg(long)]
        eigenfunctions: Option<String>,
    },
    /// Certify a cospectral pair: spectra, side map, transplantation
    Transplant {
        #[arg(long, required_unless_present = "paper_fixtures")]
        left: Option<PathBuf>,
        #[arg(long, required_unless_present = "paper_fixtures")]
        right: Option<PathBuf>,
        /// Use the built-in seven-copy pair with its frozen side map
        #[arg(long)]
        paper_fixtures: bool,
        #[arg(long, default_value_t = 3)]
        refine: usize,
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long, default_value = "report.json")]
        report: PathBuf,
        /// Worker threads (the two volumes are solved in parallel when ≥ 2)
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Re-export a volume in other formats
    Export {
        #[arg(long)]
        div: PathBuf,
        /// Volume JSON (round-trippable)
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Colored graph in DOT format
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Auxiliary matrix as integer CSV
        #[arg(long)]
        x_csv: Option<PathBuf>,
        /// Adjacency matrix as integer CSV
        #[arg(long)]
        a_csv: Option<PathBuf>,
        /// Structural matrix as integer CSV (header lists column keys)
        #[arg(long)]
        q_csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn load_div(path: &Path) -> Result<Div> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    Ok(div_from_json(&text)?)
}

fn fixture_div(side: &str) -> Result<Div> {
    match side {
        "left" => Ok(fixtures::gww_left(fixtures::scalene_tile())),
        "right" => Ok(fixtures::gww_right(fixtures::scalene_tile())),
        other => bail!("unknown fixture {other:?}; expected left or right"),
    }
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Build { words, tile, out, svg } => {
            let tile = tiles::load_tile(&tile.tile)?;
            let words = parse_words(&words)?;
            let div = Div::build(tile, &words)?;
            println!(
                "built volume: {} copies, {} internal sides, {} external sides",
                div.n(),
                div.internal_sides().len(),
                div.external_sides().len()
            );
            print_action_table(&div);
            write(&out, &div_to_json(&div))?;
            if let Some(svg_path) = svg {
                write(&svg_path, &div_to_svg(&div))?;
            }
            Ok(true)
        }
        Command::Enumerate { tile, n, out, jobs } => enumerate_cmd(&tile.tile, n, &out, jobs, false),
        Command::Classify { tile, n, out, jobs } => enumerate_cmd(&tile.tile, n, &out, jobs, true),
        Command::Pairs { census, tol, out } => {
            let text = std::fs::read_to_string(&census)
                .with_context(|| format!("reading {}", census.display()))?;
            let (census, _tile) = census_from_json(&text)?;
            let pairs = find_pairs(&census, tol);
            let candidates = pairs.iter().filter(|p| !p.equivalent).count();
            println!(
                "{} cospectral class pairs, {} of them non-equivalent candidates",
                pairs.len(),
                candidates
            );
            for p in &pairs {
                println!(
                    "  classes {} ~ {}: equivalent={} graphs_isomorphic={} orders={:?}",
                    p.left_class, p.right_class, p.equivalent, p.graphs_isomorphic, p.group_orders
                );
            }
            let file = PairsFile {
                format_version: 1,
                tol,
                pairs,
            };
            write(&out, &serde_json::to_string_pretty(&file)?)?;
            Ok(true)
        }
        Command::Spectrum { div, paper_fixtures, out } => {
            let volume = match (&div, &paper_fixtures) {
                (Some(path), None) => load_div(path)?,
                (None, Some(side)) => fixture_div(side)?,
                _ => bail!("one of --div or --paper-fixtures is required"),
            };
            let x = auxiliary(&volume);
            let spec = sym_eigen(&x.0.to_dense())?;
            let rendered: Vec<String> = spec.values().iter().map(|v| format!("{v:.6}")).collect();
            println!("auxiliary spectrum: ({})", rendered.join(", "));
            println!("rank {} of {}, trace {}", spec.rank(1e-9), spec.n(), x.0.trace());
            write(&out, &spec.to_csv())?;
            Ok(true)
        }
        Command::Fem { div, paper_fixtures, refine, k, out, eigenfunctions } => {
            let volume = match (&div, &paper_fixtures) {
                (Some(path), None) => load_div(path)?,
                (None, Some(side)) => fixture_div(side)?,
                _ => bail!("one of --div or --paper-fixtures is required"),
            };
            let (gm, op) = div_core::fem::assemble(&volume, refine)?;
            println!(
                "assembled: {} copies, refine {}, {} global nodes, {} free",
                volume.n(),
                refine,
                gm.n_global(),
                gm.free_count()
            );
            let (vals, vecs) = div_core::fem::dirichlet_spectrum(&op, k)?;
            for (i, v) in vals.iter().enumerate() {
                println!("  lambda[{i}] = {v:.9}");
            }
            let csv: String = vals.iter().map(|v| format!("{v:.12e}\n")).collect();
            write(&out, &csv)?;
            if let Some(prefix) = eigenfunctions {
                for (i, vec) in vecs.iter().enumerate() {
                    let full = div_core::fem::expand_free(&gm, vec);
                    let vf = div_core::fem::to_vector_form(&gm, &full);
                    let path = PathBuf::from(format!("{prefix}_{i:02}.csv"));
                    write(&path, &vf.to_csv())?;
                }
            }
            Ok(true)
        }
        Command::Transplant { left, right, paper_fixtures, refine, k, report, jobs } => {
            let (left, right, frozen_u) = if paper_fixtures {
                (
                    fixtures::gww_left(fixtures::scalene_tile()),
                    fixtures::gww_right(fixtures::scalene_tile()),
                    Some(fixtures::transplant_u()),
                )
            } else {
                (load_div(&left.unwrap())?, load_div(&right.unwrap())?, None)
            };
            let out = report::run_transplant(&left, &right, refine, k, frozen_u, jobs)?;
            let pass = out.pass;
            write(&report, &serde_json::to_string_pretty(&out)?)?;
            println!(
                "pair verdict: spectra gap {:.2e}, fixed-point residual {:.2e}, pass = {}",
                out.spectra.max_rel_gap, out.fixed_point_residual, pass
            );
            Ok(pass)
        }
        Command::Export { div, json, svg, dot, x_csv, a_csv, q_csv } => {
            let volume = load_div(&div)?;
            if let Some(p) = json {
                write(&p, &div_to_json(&volume))?;
            }
            if let Some(p) = svg {
                write(&p, &div_to_svg(&volume))?;
            }
            if let Some(p) = dot {
                write(&p, &graph_of(&volume).to_dot())?;
            }
            if let Some(p) = x_csv {
                write(&p, &auxiliary(&volume).0.to_csv())?;
            }
            if let Some(p) = a_csv {
                write(&p, &adjacency(&volume).0.to_csv())?;
            }
            if let Some(p) = q_csv {
                let q = structural(&volume);
                let header: Vec<String> = q
                    .column_keys
                    .iter()
                    .map(|(i, j, l)| format!("{}-{}-{}", i + 1, j + 1, l))
                    .collect();
                write(&p, &format!("# {}\n{}", header.join(","), q.matrix.to_csv()))?;
            }
            Ok(true)
        }
    }
}

fn parse_words(spec: &str) -> Result<Vec<Word>> {
    spec.split(',')
        .map(|w| w.trim().parse::<Word>().map_err(anyhow::Error::from))
        .collect()
}

fn print_action_table(div: &Div) {
    let gens = generators_of(div);
    let n = div.n();
    let header: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    println!("generator/copy  {}", header.join(" "));
    for (name, p) in [("a", &gens.a), ("b", &gens.b), ("c", &gens.c)] {
        let row: Vec<String> = (0..n).map(|i| (p.apply(i) + 1).to_string()).collect();
        println!("{name}               {}", row.join(" "));
    }
    let w = orientation_coloring(div);
    let ws: Vec<String> = w.0.iter().map(|v| format!("{v:+}")).collect();
    println!("orientation w = ({})", ws.join(", "));
}

fn enumerate_cmd(tile_spec: &str, n: usize, out: &Path, jobs: usize, table: bool) -> Result<bool> {
    let tile = tiles::load_tile(tile_spec)?;
    let divs = enumerate_divs(&tile, n)?;
    let _ = jobs.max(1); // enumeration and classification are fast at n ≤ 10
    let census = classify(&divs)?;
    println!(
        "n = {}: {} volumes up to equivalence, {} graph classes ({} trees); up to relabeling: {} ({} trees)",
        n,
        census.div_count,
        census.classes.len(),
        census.tree_class_count,
        census.color_class_count,
        census.tree_color_class_count,
    );
    let mut order_counts: std::collections::BTreeMap<u64, usize> = Default::default();
    for c in &census.classes {
        *order_counts.entry(c.group_order).or_default() += 1;
    }
    let summary: Vec<String> = order_counts
        .iter()
        .map(|(order, count)| format!("{order}×{count}"))
        .collect();
    println!("group orders: {}", summary.join(", "));
    if table {
        println!("{:>5} {:>5} {:>6} {:>3} ext(abc)  spectrum", "class", "size", "order", "K");
        for (i, c) in census.classes.iter().enumerate() {
            let spec: Vec<String> = c.spectrum.iter().map(|v| format!("{v:.4}")).collect();
            println!(
                "{:>5} {:>5} {:>6} {:>3} {}/{}/{}  [{}]",
                i,
                c.size,
                c.group_order,
                c.internal_sides,
                c.external_counts[0],
                c.external_counts[1],
                c.external_counts[2],
                spec.join(", ")
            );
        }
    }
    write(out, &census_to_json(&census, &tile))?;
    Ok(true)
}
